//! Double-exponential (tanh-sinh) quadrature with panel subdivision, and
//! tail-corrected summation over ℤ.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use rug::Float;

use crate::error::{arg, Error, Result};
use crate::numerics::{format_real, pow10, CompensatedSum, Precision};
use crate::specfun::hurwitz_zeta;

/// Behaviour of the integrand at the interval endpoints.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EndpointHint {
    /// Smooth up to the endpoints.
    None,
    /// Finite limit, but the formula is 0/0 at the endpoint.
    Removable,
    /// Logarithmic growth at an endpoint.
    Log,
}

/// A real integrand on [a, b].
pub struct IntegrandSpec<'a> {
    pub f: &'a (dyn Fn(&Float) -> Float + Sync),
    pub a: Float,
    pub b: Float,
    pub hint: EndpointHint,
    /// Number of equal panels the interval is split into before integration
    /// (useful for oscillatory integrands).
    pub panels: usize,
}

impl<'a> IntegrandSpec<'a> {
    pub fn new(f: &'a (dyn Fn(&Float) -> Float + Sync), a: Float, b: Float) -> Self {
        IntegrandSpec {
            f,
            a,
            b,
            hint: EndpointHint::None,
            panels: 1,
        }
    }

    pub fn hint(mut self, hint: EndpointHint) -> Self {
        self.hint = hint;
        self
    }

    pub fn panels(mut self, panels: usize) -> Self {
        self.panels = panels.max(1);
        self
    }
}

/// Integral value with the achieved error estimate.
#[derive(Clone, Debug)]
pub struct Quadrature {
    pub value: Float,
    pub error_estimate: Float,
    pub evaluations: usize,
}

/// Finest refinement level (step 2^{−MAX_LEVEL}) before a panel is bisected.
const MAX_LEVEL: u32 = 10;
/// Maximum bisection depth for panels that do not converge.
const MAX_DEPTH: u32 = 8;

#[derive(Clone, Debug)]
struct Node {
    x: Float,
    w: Float,
}

type NodeTable = Arc<Vec<Node>>;

static NODE_CACHE: Mutex<Option<HashMap<(u32, u32), NodeTable>>> = Mutex::new(None);

/// Nonnegative abscissae x_j = tanh(π/2·sinh(jh)) with weights
/// w_j = (π/2)cosh(jh)/cosh²(π/2·sinh(jh)) that are new at `level`
/// (all j ≥ 0 at level 0, odd j afterwards).
fn nodes(level: u32, bits: u32) -> NodeTable {
    let key = (bits, level);
    if let Some(t) = NODE_CACHE
        .lock()
        .unwrap_or_else(|e| e.into_inner())
        .as_ref()
        .and_then(|m| m.get(&key))
    {
        return t.clone();
    }
    let wb = bits + 32;
    let h = Float::with_val(wb, 0.5f64.powi(level as i32));
    let half_pi = Float::with_val(wb, rug::float::Constant::Pi) / 2u32;
    let cutoff = Float::with_val(wb, -(bits as i32) - 24).exp2();
    let (start, step) = if level == 0 { (0u32, 1u32) } else { (1, 2) };
    let mut out = Vec::new();
    let mut j = start;
    loop {
        let t = Float::with_val(wb, &h * j);
        let (sh, ch) = t.sinh_cosh(Float::new(wb));
        let u = Float::with_val(wb, &half_pi * &sh);
        let cu = Float::with_val(wb, u.cosh_ref());
        let x = Float::with_val(wb, u.tanh_ref());
        let w = Float::with_val(wb, &half_pi * &ch) / Float::with_val(wb, cu.square_ref());
        if w < cutoff || x >= 1 {
            break;
        }
        out.push(Node {
            x: Float::with_val(bits, &x),
            w: Float::with_val(bits, &w),
        });
        j += step;
    }
    let table = Arc::new(out);
    NODE_CACHE
        .lock()
        .unwrap_or_else(|e| e.into_inner())
        .get_or_insert_with(HashMap::new)
        .insert(key, table.clone());
    table
}

struct PanelOutcome {
    value: Float,
    error: Float,
    evaluations: usize,
    converged: bool,
}

fn eval_point(
    f: &(dyn Fn(&Float) -> Float + Sync),
    r: &Float,
    weight: &Float,
    negligible: &Float,
) -> Result<Option<Float>> {
    let v = f(r);
    if v.is_finite() {
        return Ok(Some(v));
    }
    if weight < negligible {
        return Ok(None);
    }
    Err(Error::Evaluation(format!(
        "integrand is not finite at interior point {}",
        r.to_f64()
    )))
}

fn tanh_sinh_panel(
    f: &(dyn Fn(&Float) -> Float + Sync),
    a: &Float,
    b: &Float,
    tol: &Float,
    bits: u32,
) -> Result<PanelOutcome> {
    let c = Float::with_val(bits, a + b) / 2u32;
    let d = Float::with_val(bits, b - a) / 2u32;
    let negligible = Float::with_val(bits, -(bits as i32) / 2).exp2();
    let mut raw = CompensatedSum::new(bits);
    let mut evaluations = 0;
    let mut prev: Option<Float> = None;
    let mut last_err = Float::with_val(bits, f64::INFINITY);
    for level in 0..=MAX_LEVEL {
        let table = nodes(level, bits);
        for (i, node) in table.iter().enumerate() {
            let dx = Float::with_val(bits, &d * &node.x);
            if level == 0 && i == 0 {
                if let Some(v) = eval_point(f, &c, &node.w, &negligible)? {
                    raw.add(&Float::with_val(bits, &v * &node.w));
                }
                evaluations += 1;
                continue;
            }
            for r in [Float::with_val(bits, &c + &dx), Float::with_val(bits, &c - &dx)] {
                if let Some(v) = eval_point(f, &r, &node.w, &negligible)? {
                    raw.add(&Float::with_val(bits, &v * &node.w));
                }
                evaluations += 1;
            }
        }
        let h = Float::with_val(bits, 0.5f64.powi(level as i32));
        let value = raw.value() * h * &d;
        if let Some(p) = &prev {
            last_err = Float::with_val(bits, &value - p).abs();
            if level >= 3 && last_err <= *tol {
                return Ok(PanelOutcome {
                    value,
                    error: last_err,
                    evaluations,
                    converged: true,
                });
            }
        }
        prev = Some(value);
    }
    Ok(PanelOutcome {
        value: prev.unwrap_or_else(|| Float::new(bits)),
        error: last_err,
        evaluations,
        converged: false,
    })
}

fn integrate_adaptive(
    f: &(dyn Fn(&Float) -> Float + Sync),
    a: &Float,
    b: &Float,
    tol: &Float,
    bits: u32,
    depth: u32,
) -> Result<PanelOutcome> {
    let out = tanh_sinh_panel(f, a, b, tol, bits)?;
    if out.converged || depth >= MAX_DEPTH {
        return Ok(out);
    }
    let mid = Float::with_val(bits, a + b) / 2u32;
    let half_tol = Float::with_val(bits, tol / 2u32);
    let left = integrate_adaptive(f, a, &mid, &half_tol, bits, depth + 1)?;
    let right = integrate_adaptive(f, &mid, b, &half_tol, bits, depth + 1)?;
    Ok(PanelOutcome {
        value: Float::with_val(bits, &left.value + &right.value),
        error: Float::with_val(bits, &left.error + &right.error),
        evaluations: out.evaluations + left.evaluations + right.evaluations,
        converged: left.converged && right.converged,
    })
}

/// ∫_a^b f within `tol` (absolute), or an accuracy error carrying the partial result.
pub fn integrate(spec: &IntegrandSpec, tol: f64, prec: Precision) -> Result<Quadrature> {
    let min_tol = 10f64.powi(2 - prec.digits() as i32);
    // NaN tolerances are rejected along with too-small ones
    if tol.is_nan() || tol < min_tol {
        return arg(format!(
            "tolerance {tol:e} below the attainable 1e{}",
            2 - prec.digits() as i32
        ));
    }
    if !spec.a.is_finite() || !spec.b.is_finite() {
        return arg("integration bounds must be finite");
    }
    let bits = prec.bits();
    if spec.a == spec.b {
        return Ok(Quadrature {
            value: prec.zero(),
            error_estimate: prec.zero(),
            evaluations: 0,
        });
    }
    let panels = spec.panels.max(1);
    // Panels target a fraction of the tolerance; the error estimate (difference
    // of consecutive levels) is conservative for the double-exponential rule.
    let panel_tol = Float::with_val(bits, tol) / (4 * panels) as u32;
    let width = Float::with_val(bits, &spec.b - &spec.a) / panels as u32;
    let mut total = CompensatedSum::new(bits);
    let mut err = Float::new(bits);
    let mut evaluations = 0;
    let mut converged = true;
    for i in 0..panels {
        let lo = Float::with_val(bits, &spec.a + Float::with_val(bits, &width * i as u32));
        let hi = if i + 1 == panels {
            Float::with_val(bits, &spec.b)
        } else {
            Float::with_val(bits, &spec.a + Float::with_val(bits, &width * (i + 1) as u32))
        };
        let out = integrate_adaptive(spec.f, &lo, &hi, &panel_tol, bits, 0)?;
        total.add(&out.value);
        err += &out.error;
        evaluations += out.evaluations;
        converged &= out.converged;
    }
    let value = total.value();
    if !converged || err > tol {
        return Err(Error::Accuracy {
            partial: format_real(&value, prec.digits()),
            estimate: err.to_f64(),
            tolerance: tol,
        });
    }
    Ok(Quadrature {
        value,
        error_estimate: err,
        evaluations,
    })
}

/// Settings for [`bilateral_sum`].
#[derive(Clone, Debug)]
pub struct BilateralConfig {
    /// Explicit summation range |k| ≤ K (a second pass uses 2K).
    pub k_max: u64,
    /// Leading decay exponent e of the paired terms: p(k) ≈ A/k^e + B/k^{e+2}.
    pub tail_exponent: u32,
    /// Absolute tolerance on the disagreement between the K and 2K results.
    pub tol: f64,
}

impl Default for BilateralConfig {
    fn default() -> Self {
        BilateralConfig {
            k_max: 10_000,
            tail_exponent: 2,
            tol: 1e-14,
        }
    }
}

/// Sum over ℤ with its error estimate.
#[derive(Clone, Debug)]
pub struct SumResult {
    pub value: Float,
    pub error_estimate: Float,
}

/// Σ_{k∈ℤ} term(k): pairs k with −k, sums |k| ≤ K explicitly, and adds the
/// tail A·ζ(e, K+1) + B·ζ(e+2, K+1) fitted from the paired terms at K and K/2.
/// The result at 2K is returned; disagreement with the result at K beyond
/// `tol` is reported as an accuracy error.
pub fn bilateral_sum<F>(term: F, cfg: &BilateralConfig, prec: Precision) -> Result<SumResult>
where
    F: Fn(i64) -> Float,
{
    if cfg.k_max < 4 {
        return arg("bilateral_sum needs k_max >= 4");
    }
    let bits = prec.bits() + 16;
    let k1 = cfg.k_max;
    let k2 = 2 * k1;
    let mut partial = CompensatedSum::new(bits);
    partial.add(&Float::with_val(bits, &term(0)));
    let mut pair_at = HashMap::new();
    let mut partial_k1 = None;
    for k in 1..=k2 {
        let p = Float::with_val(bits, &term(k as i64)) + Float::with_val(bits, &term(-(k as i64)));
        if k == k1 / 2 || k == k1 || k == k2 {
            pair_at.insert(k, p.clone());
        }
        partial.add(&p);
        if k == k1 {
            partial_k1 = Some(partial.value());
        }
    }
    let e = cfg.tail_exponent;
    let tail = |k: u64, pk: &Float, phalf: &Float| -> Result<Float> {
        let kf = Float::with_val(bits, k);
        let kh = Float::with_val(bits, k / 2);
        let u = Float::with_val(bits, pk * rug::ops::Pow::pow(Float::with_val(bits, &kf), e));
        let v = Float::with_val(bits, phalf * rug::ops::Pow::pow(Float::with_val(bits, &kh), e));
        // u = A + B/K², v = A + B/(K/2)²
        let inv_k2 = Float::with_val(bits, kf.square_ref()).recip();
        let inv_h2 = Float::with_val(bits, kh.square_ref()).recip();
        let b = Float::with_val(bits, &v - &u) / Float::with_val(bits, &inv_h2 - &inv_k2);
        let a = Float::with_val(bits, &u - Float::with_val(bits, &b * &inv_k2));
        let inner = prec.raised(5);
        let start = Float::with_val(bits, k + 1);
        let z1 = hurwitz_zeta(&Float::with_val(bits, e), &start, inner)?;
        let z2 = hurwitz_zeta(&Float::with_val(bits, e + 2), &start, inner)?;
        Ok(a * z1 + b * z2)
    };
    let s1 = partial_k1.expect("K <= 2K") + tail(k1, &pair_at[&k1], &pair_at[&(k1 / 2)])?;
    let s2 = partial.value() + tail(k2, &pair_at[&k2], &pair_at[&k1])?;
    let est = Float::with_val(bits, &s2 - &s1).abs();
    if est > cfg.tol {
        return Err(Error::Accuracy {
            partial: format_real(&s2, prec.digits()),
            estimate: est.to_f64(),
            tolerance: cfg.tol,
        });
    }
    Ok(SumResult {
        value: Float::with_val(prec.bits(), s2),
        error_estimate: Float::with_val(prec.bits(), est),
    })
}

/// Smallest tolerance [`integrate`] accepts at `prec`.
pub fn min_tolerance(prec: Precision) -> Float {
    pow10(2 - prec.digits() as i32, prec.bits())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::hash_weight;
    use crate::specfun::ei;

    fn p() -> Precision {
        Precision::default()
    }

    fn unit(bits: u32) -> (Float, Float) {
        (Float::with_val(bits, -1), Float::with_val(bits, 1))
    }

    #[test]
    fn removable_quotients() {
        let prec = p();
        let bits = prec.bits();
        let (a, b) = unit(bits);
        let f1 = |r: &Float| {
            let one_minus = Float::with_val(r.prec(), 1 - Float::with_val(r.prec(), r.square_ref()));
            Float::with_val(r.prec(), &one_minus / &one_minus)
        };
        let q = integrate(
            &IntegrandSpec::new(&f1, a.clone(), b.clone()).hint(EndpointHint::Removable),
            1e-40,
            prec,
        )
        .unwrap();
        assert!(Float::with_val(bits, &q.value - 2u32).abs() < 1e-40);
        let f2 = |r: &Float| {
            let r2 = Float::with_val(r.prec(), r.square_ref());
            let num = Float::with_val(r.prec(), 1 - Float::with_val(r.prec(), r2.square_ref()));
            num / (1 - r2)
        };
        let q = integrate(
            &IntegrandSpec::new(&f2, a, b).hint(EndpointHint::Removable),
            1e-40,
            prec,
        )
        .unwrap();
        let exact = Float::with_val(bits, 8) / 3u32;
        assert!(Float::with_val(bits, &q.value - &exact).abs() < 1e-40);
    }

    /// ∫_{−1}^1 (1 − r^{2m})/(1 − r²) dr = 2H_{2m−1} − H_{m−1}.
    #[test]
    fn hash_weights_are_integrals() {
        let prec = p();
        let bits = prec.bits();
        for m in 1..=6u32 {
            let f = move |r: &Float| {
                let r2 = Float::with_val(r.prec(), r.square_ref());
                let num = 1 - rug::ops::Pow::pow(Float::with_val(r.prec(), &r2), m);
                num / (1 - r2)
            };
            let (a, b) = unit(bits);
            let q = integrate(&IntegrandSpec::new(&f, a, b).hint(EndpointHint::Removable), 1e-30, prec).unwrap();
            let exact = Float::with_val(bits, &hash_weight(m));
            assert!(Float::with_val(bits, &q.value - &exact).abs() < 1e-12, "m = {m}");
        }
    }

    #[test]
    fn exponential_integral_example() {
        let prec = p();
        let bits = prec.bits();
        let f = |u: &Float| {
            let e = Float::with_val(u.prec(), -u).exp() - 1u32;
            e / Float::with_val(u.prec(), u * 2u32)
        };
        let q = integrate(
            &IntegrandSpec::new(&f, Float::with_val(bits, 0), Float::with_val(bits, 1)).hint(EndpointHint::Removable),
            1e-40,
            prec,
        )
        .unwrap();
        let exact = (ei(&prec.real(-1), prec).unwrap() - prec.euler_gamma()) / 2u32;
        assert!(Float::with_val(bits, &q.value - &exact).abs() < 1e-40);
    }

    #[test]
    fn ei_quadrature_oracle() {
        // Ei(−1) = −∫₁^∞ e^{−t}/t dt = −∫₀¹ e^{−1/u}/u du
        let prec = p();
        let bits = prec.bits();
        let f = |u: &Float| {
            if u.is_zero() {
                return Float::new(u.prec());
            }
            let inv = Float::with_val(u.prec(), u.recip_ref());
            Float::with_val(u.prec(), -&inv).exp() * inv
        };
        let q = integrate(
            &IntegrandSpec::new(&f, Float::with_val(bits, 0), Float::with_val(bits, 1)),
            1e-40,
            prec,
        )
        .unwrap();
        let e = ei(&prec.real(-1), prec).unwrap();
        assert!(Float::with_val(bits, &q.value + &e).abs() < 1e-40);
    }

    #[test]
    fn log_endpoint() {
        // ∫₀¹ log u du = −1
        let prec = p();
        let bits = prec.bits();
        let f = |u: &Float| Float::with_val(u.prec(), u.ln_ref());
        let q = integrate(
            &IntegrandSpec::new(&f, Float::with_val(bits, 0), Float::with_val(bits, 1)).hint(EndpointHint::Log),
            1e-40,
            prec,
        )
        .unwrap();
        assert!(Float::with_val(bits, &q.value + 1u32).abs() < 1e-40);
    }

    #[test]
    fn polynomials_are_exact() {
        let prec = p();
        let bits = prec.bits();
        for deg in [0u32, 1, 5, 12, 20] {
            let f = move |r: &Float| rug::ops::Pow::pow(Float::with_val(r.prec(), r), deg) * (deg + 1);
            let (a, b) = unit(bits);
            let q = integrate(&IntegrandSpec::new(&f, a, b), 1e-46, prec).unwrap();
            let exact = if deg % 2 == 0 { 2 } else { 0 };
            assert!(
                Float::with_val(bits, &q.value - exact).abs() < min_tolerance(prec),
                "deg {deg}"
            );
        }
    }

    #[test]
    fn tolerances_agree_and_refinement_helps() {
        let prec = p();
        let bits = prec.bits();
        let f = |r: &Float| Float::with_val(r.prec(), r * 7u32).cos();
        let (a, b) = unit(bits);
        let coarse = integrate(&IntegrandSpec::new(&f, a.clone(), b.clone()), 1e-8, prec).unwrap();
        let fine = integrate(&IntegrandSpec::new(&f, a.clone(), b.clone()), 1e-12, prec).unwrap();
        assert!(Float::with_val(bits, &coarse.value - &fine.value).abs() < 1e-8);
        assert!(fine.error_estimate <= coarse.error_estimate || fine.error_estimate < 1e-12);
        let paneled = integrate(&IntegrandSpec::new(&f, a, b).panels(8), 1e-12, prec).unwrap();
        assert!(Float::with_val(bits, &paneled.value - &fine.value).abs() < 1e-12);
        assert!(integrate(&IntegrandSpec::new(&f, prec.real(-1), prec.real(1)), 1e-60, prec).is_err());
    }

    #[test]
    fn bilateral_examples() {
        let prec = p();
        let bits = prec.bits();
        let two_pi = Float::with_val(bits, prec.pi() * 2u32);
        let term = |k: i64| {
            if k == 0 {
                Float::new(bits)
            } else {
                Float::with_val(bits, Float::with_val(bits, &two_pi * k).square_ref()).recip()
            }
        };
        let s = bilateral_sum(term, &BilateralConfig::default(), prec).unwrap();
        let twelfth = Float::with_val(bits, 1) / 12u32;
        assert!(Float::with_val(bits, &s.value - &twelfth).abs() < 1e-20);
        let z = bilateral_sum(|_| Float::new(bits), &BilateralConfig::default(), prec).unwrap();
        assert!(z.value.is_zero());
        // unpaired O(1/k) terms break the tail model
        let bad = |k: i64| Float::with_val(bits, 1) / (k.unsigned_abs() + 1);
        assert!(bilateral_sum(bad, &BilateralConfig::default(), prec).is_err());
    }
}
