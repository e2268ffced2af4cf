//! Closed-form equivariant torsion on ℙ¹ℂ with the line bundle 𝒪(ℓ):
//! the group-element torsion, the I-class term, the S-current term, the
//! infinitesimal torsion as an exact even power series, its large-ℓ
//! asymptotics and the two-parameter (e^{sX}, tX) torsion.
//!
//! Throughout, C(t) = cos((ℓ+1)t/2), S(t) = sin(t/2) and n = |ℓ+1|.

use rug::Float;
use serde_json::{json, Value};

use crate::error::{arg, Error, Result};
use crate::numerics::{format_real, Complex, ConstExpr, ConstSymbol, Precision, Rational};
use crate::quadrature::{bilateral_sum, integrate, BilateralConfig, EndpointHint, IntegrandSpec};
use crate::scurrent::{s_pairing_star_variant_integral, s_star_variant_series, TestProfile};
use crate::series::{build, star, LaurentSeries, Parity, SeriesKind};
use crate::specfun::{ci, gs_r_series_in, r_rot_series, r_rot_value, r_two, si, zeta_neg, zeta_neg_value};

/// How a torsion quantity was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EvalPath {
    Series,
    Quadrature,
    BilateralSum,
    Lerch,
}

impl EvalPath {
    pub fn name(self) -> &'static str {
        match self {
            EvalPath::Series => "series",
            EvalPath::Quadrature => "quadrature",
            EvalPath::BilateralSum => "bilateral-sum",
            EvalPath::Lerch => "lerch",
        }
    }
}

/// A series or a number, with its provenance.
#[derive(Clone, Debug)]
pub enum TorsionPayload {
    Series(LaurentSeries),
    Value(Float),
}

#[derive(Clone, Debug)]
pub struct TorsionResult {
    pub payload: TorsionPayload,
    pub ell: i64,
    pub path: EvalPath,
    pub precision: Precision,
    pub order: Option<i32>,
}

impl TorsionResult {
    pub fn series(&self) -> Option<&LaurentSeries> {
        match &self.payload {
            TorsionPayload::Series(s) => Some(s),
            TorsionPayload::Value(_) => None,
        }
    }

    pub fn value(&self) -> Option<&Float> {
        match &self.payload {
            TorsionPayload::Value(v) => Some(v),
            TorsionPayload::Series(_) => None,
        }
    }

    pub fn to_json(&self) -> Value {
        let payload = match &self.payload {
            TorsionPayload::Series(s) => s.to_json(Some(self.precision)),
            TorsionPayload::Value(v) => json!(format_real(v, self.precision.digits())),
        };
        json!({
            "ell": self.ell,
            "path": self.path.name(),
            "digits": self.precision.digits(),
            "order": self.order,
            "payload": payload,
        })
    }
}

/// |ℓ + 1|.
pub fn abs_ell_plus_one(ell: i64) -> u64 {
    (ell + 1).unsigned_abs()
}

fn check_ell(ell: i64) -> Result<()> {
    if ell.unsigned_abs() > 100_000 {
        return arg(format!("|ell| = {} is beyond the supported range", ell.unsigned_abs()));
    }
    Ok(())
}

fn check_open_period(t: &Float, prec: Precision, what: &str) -> Result<()> {
    let two_pi = prec.pi() * 2u32;
    if *t <= 0 || *t >= two_pi || !t.is_finite() {
        return arg(format!("{what} requires 0 < t < 2*pi, got {}", t.to_f64()));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// series building blocks

/// C(t)/S(t), valid through `order`.
fn prefactor_series(ell: i64, order: i32) -> Result<LaurentSeries> {
    let c = build(&SeriesKind::CosScaled(Rational::from((ell + 1, 2))), order + 1)?;
    let inv = build(&SeriesKind::InvSinHalf, order + 1)?;
    c.mul(&inv)?.truncated(order)
}

/// Σ_{m=1}^{n} sin((2m−n)t/2)/sin(t/2)·log m, valid through `order`.
fn log_sum_series(ell: i64, order: i32) -> Result<LaurentSeries> {
    let n = abs_ell_plus_one(ell) as i64;
    let inv = build(&SeriesKind::InvSinHalf, order + 1)?;
    let mut acc = LaurentSeries::zero("t", 0, order)?.with_parity(Parity::Even)?;
    for m in 2..=n {
        let a = 2 * m - n;
        if a == 0 {
            continue;
        }
        let s = build(&SeriesKind::SinScaled(Rational::from((a, 2))), order + 1)?;
        let q = s.mul(&inv)?.truncated(order)?;
        acc = acc.add(&q.scale(&ConstExpr::log(m as u64)?)?)?;
    }
    Ok(acc)
}

/// Σ_{m odd} (2ζ′(−m) + H_m ζ(−m))(−1)^{(m+1)/2} t^m/m!.
fn gs_twisted_series(order: i32) -> Result<LaurentSeries> {
    let gs = gs_r_series_in("t", order)?;
    LaurentSeries::from_fn("t", 0, order, Parity::Odd, |d| {
        let c = gs.coeff(d)?;
        Ok(if ((d + 1) / 2) % 2 == 0 { c } else { -c })
    })
}

/// The Gillet–Soulé summand −C/S·Σ_{m odd}(2ζ′(−m) + H_mζ(−m))(−1)^{(m+1)/2}t^m/m!
/// of the infinitesimal torsion, an even power series through t^order.
pub fn gs_summand_series(ell: i64, order: i32) -> Result<LaurentSeries> {
    check_ell(ell)?;
    let p = prefactor_series(ell, order + 1)?;
    let gs = gs_twisted_series(order + 2)?;
    Ok(p.mul(&gs)?.neg().truncated(order)?.trimmed())
}

/// J(t) = Σ_{m odd} H_m ζ(−m)(−1)^{(m−1)/2} t^m/m!, so that the I-class
/// term is C(t)/S(t)·J(t).
pub fn i_class_inner_series(order: i32) -> Result<LaurentSeries> {
    LaurentSeries::from_fn("t", 0, order, Parity::Odd, |d| {
        let m = d as u32;
        let sign = if ((m - 1) / 2).is_multiple_of(2) { 1 } else { -1 };
        let q = Rational::from(crate::numerics::harmonic_u(m as usize) * zeta_neg(m))
            / Rational::from(crate::numerics::factorial(m))
            * sign;
        Ok(ConstExpr::rational(q))
    })
}

// ---------------------------------------------------------------------------
// group-element torsion

/// T_{e^{tX}} = 2R^rot(t)·C(t)/S(t) + Σ_{m=1}^{n} sin((2m−n)t/2)/S(t)·log m on 0 < t < 2π.
pub fn torsion_group(ell: i64, t: &Float, prec: Precision) -> Result<Float> {
    check_ell(ell)?;
    check_open_period(t, prec, "torsion_group")?;
    let inner = prec.raised(10);
    let bits = inner.bits();
    let t = Float::with_val(bits, t);
    let rrot = r_rot_value(&t, inner)?;
    let (c, s) = cos_sin_prefactor(ell, &t);
    let mut acc = rrot * 2u32 * c / &s;
    acc += log_sum_value(ell, &t, &s);
    Ok(Float::with_val(prec.bits(), acc))
}

/// (C(t), S(t)) at the precision of `t`.
fn cos_sin_prefactor(ell: i64, t: &Float) -> (Float, Float) {
    let bits = t.prec();
    let c = Float::with_val(bits, t * (ell + 1)) / 2u32;
    let c = c.cos();
    let s = Float::with_val(bits, t / 2u32).sin();
    (c, s)
}

fn log_sum_value(ell: i64, t: &Float, sin_half: &Float) -> Float {
    let bits = t.prec();
    let n = abs_ell_plus_one(ell) as i64;
    let mut acc = Float::new(bits);
    for m in 2..=n {
        let a = Float::with_val(bits, t * (2 * m - n)) / 2u32;
        acc += a.sin() * Float::with_val(bits, m).ln();
    }
    acc / sin_half
}

// ---------------------------------------------------------------------------
// I-class term

/// Argument of [`i_class_term`].
#[derive(Clone, Debug)]
pub enum IClassInput {
    Series(i32),
    Value(Float),
}

/// C(t)/(i S(t))·Σ_{m odd} H_m ζ(−m)(it)^m/m!, returned as the real quantity
/// C(t)/S(t)·J(t). The value path sums the power series directly (|t| < 2π).
pub fn i_class_term(ell: i64, input: &IClassInput, prec: Precision) -> Result<TorsionResult> {
    check_ell(ell)?;
    match input {
        IClassInput::Series(order) => {
            let order = *order;
            if order < 2 {
                return arg("I-class series needs order >= 2");
            }
            let p = prefactor_series(ell, order + 1)?;
            let j = i_class_inner_series(order + 2)?;
            let s = p.mul(&j)?.truncated(order)?;
            Ok(TorsionResult {
                payload: TorsionPayload::Series(s),
                ell,
                path: EvalPath::Series,
                precision: prec,
                order: Some(order),
            })
        }
        IClassInput::Value(t) => {
            let inner = prec.raised(10);
            let t = Float::with_val(inner.bits(), t);
            let j = i_class_inner_value(&t, inner)?;
            let (c, s) = cos_sin_prefactor(ell, &t);
            if s.is_zero() {
                return Err(Error::Pole("I-class term at t = 0".into()));
            }
            Ok(TorsionResult {
                payload: TorsionPayload::Value(Float::with_val(prec.bits(), j * c / s)),
                ell,
                path: EvalPath::Series,
                precision: prec,
                order: None,
            })
        }
    }
}

/// J(x) by direct summation of its power series, |x| < 2π.
pub fn i_class_inner_value(x: &Float, prec: Precision) -> Result<Float> {
    let inner = prec.raised(10);
    let bits = inner.bits();
    let two_pi = inner.pi() * 2u32;
    if Float::with_val(bits, x.abs_ref()) >= two_pi {
        return arg("the I-class power series needs |t| < 2*pi");
    }
    let x = Float::with_val(bits, x);
    let x2 = Float::with_val(bits, x.square_ref());
    let eps = crate::numerics::pow10(-(prec.digits() as i32) - 4, bits);
    let mut acc = Float::new(bits);
    let mut pw = x.clone(); // x^m/m!
    let mut small = 0;
    let mut m = 1u32;
    while m < 20_000 {
        let z = zeta_neg_value(m, inner)?;
        let h = Float::with_val(bits, &crate::numerics::harmonic_u(m as usize));
        let term = z * h * &pw;
        if ((m - 1) / 2).is_multiple_of(2) {
            acc += &term;
        } else {
            acc -= &term;
        }
        let scale = Float::with_val(bits, acc.abs_ref()).max(&Float::with_val(bits, 1));
        if Float::with_val(bits, term.abs_ref()) < Float::with_val(bits, &eps * &scale) {
            small += 1;
            if small >= 2 {
                return Ok(Float::with_val(prec.bits(), acc));
            }
        } else {
            small = 0;
        }
        pw *= &x2;
        pw /= (m + 1) * (m + 2);
        m += 2;
    }
    Err(Error::Accuracy {
        partial: acc.to_f64().to_string(),
        estimate: f64::NAN,
        tolerance: eps.to_f64(),
    })
}

/// J(x) from the bilateral sum −Σ_{k≠0} log(1 + x/2πk)/(x + 2πk).
pub fn i_class_inner_direct(x: &Float, cfg: &BilateralConfig, prec: Precision) -> Result<Float> {
    let inner = prec.raised(5);
    let bits = inner.bits();
    let two_pi = inner.pi() * 2u32;
    let x = Float::with_val(bits, x);
    let term = |k: i64| {
        if k == 0 {
            return Float::new(bits);
        }
        let tk = Float::with_val(bits, &two_pi * k);
        let l = (Float::with_val(bits, &x / &tk) + 1u32).ln();
        -(l / (tk + &x))
    };
    let r = bilateral_sum(term, cfg, inner)?;
    Ok(Float::with_val(prec.bits(), r.value))
}

// ---------------------------------------------------------------------------
// S-current term

/// Mode of [`tdchs_term`].
#[derive(Clone, Debug)]
pub enum TdchsMode {
    Series(i32),
    Value { t: Float, tol: f64 },
}

/// The fiber profile g̃(x) = x·C(x)/(2 S(x)) behind the S-current term.
pub fn tdchs_profile(ell: i64) -> TestProfile {
    TestProfile::from_fn(
        move |x: &Float| {
            let bits = x.prec();
            if x.is_zero() {
                return Float::with_val(bits, 1);
            }
            let c = (Float::with_val(bits, x * (ell + 1)) / 2u32).cos();
            let s = (Float::with_val(bits, x / 2u32)).sin();
            Float::with_val(bits, x * c) / (s * 2u32)
        },
        true,
    )
}

/// C(t)/(t S(t)) as a series (min_degree −2): the fixed-point input of ★.
pub fn tdchs_fixed_point_series(ell: i64, order: i32) -> Result<LaurentSeries> {
    prefactor_series(ell, order + 1)?.shifted(-1)
}

/// The S-current term: series mode −(C/(tS))★ + (2·LOG_T + 2·GAMMA)·C/(tS);
/// value mode through the integral representation by quadrature.
pub fn tdchs_term(ell: i64, mode: &TdchsMode, prec: Precision) -> Result<TorsionResult> {
    check_ell(ell)?;
    match mode {
        TdchsMode::Series(order) => {
            let order = *order;
            if order < 2 {
                return arg("S-term series needs order >= 2");
            }
            // g̃(t) = t·C(t)/(2S(t)) as an even power series
            let g = prefactor_series(ell, order + 1)?
                .shifted(1)?
                .scale_rational(&Rational::from((1, 2)))
                .trimmed()
                .with_parity(Parity::Even)?;
            let s = s_star_variant_series(&g)?.truncated(order)?;
            Ok(TorsionResult {
                payload: TorsionPayload::Series(s),
                ell,
                path: EvalPath::Series,
                precision: prec,
                order: Some(order),
            })
        }
        TdchsMode::Value { t, tol } => {
            let two_pi = prec.pi() * 2u32;
            if t.is_zero() || Float::with_val(prec.bits(), t.abs_ref()) >= two_pi {
                return arg("S-term value needs 0 < |t| < 2*pi");
            }
            let v = s_pairing_star_variant_integral(&tdchs_profile(ell), t, *tol, prec)?;
            Ok(TorsionResult {
                payload: TorsionPayload::Value(v),
                ell,
                path: EvalPath::Quadrature,
                precision: prec,
                order: None,
            })
        }
    }
}

// ---------------------------------------------------------------------------
// infinitesimal torsion

/// The infinitesimal torsion from the three-summand closed form:
/// −C/S·Σ(2ζ′(−m) + H_mζ(−m))(−1)^{(m+1)/2}t^m/m! + log-sum + (C/(tS))★.
pub fn torsion_infinitesimal_closed_form(ell: i64, order: i32) -> Result<LaurentSeries> {
    check_ell(ell)?;
    let p = prefactor_series(ell, order + 1)?;
    let a = gs_summand_series(ell, order)?;
    let l = log_sum_series(ell, order + 1)?;
    let b = star(&p.shifted(-1)?)?;
    Ok(a.add(&l)?.add(&b)?.truncated(order)?.trimmed())
}

/// The uncancelled assembly T_{e^{tX}} − (S-term) + (I-class) with R^rot's
/// (γ + log t)/t and the S-term's log t² kept symbolic. Poles and LOG_T
/// terms cancel only in the sum.
pub fn torsion_infinitesimal_raw(ell: i64, order: i32) -> Result<LaurentSeries> {
    check_ell(ell)?;
    if order < 4 {
        return arg(format!("torsion series needs order >= 4, got {order}"));
    }
    let p = prefactor_series(ell, order + 2)?;
    let rrot = r_rot_series(order + 2)?;
    let group = rrot
        .mul(&p)?
        .scale_rational(&Rational::from(2))
        .add(&log_sum_series(ell, order + 1)?)?;
    let tdchs = tdchs_term(ell, &TdchsMode::Series(order + 1), Precision::default())?;
    let iclass = i_class_term(ell, &IClassInput::Series(order + 1), Precision::default())?;
    let raw = group
        .sub(tdchs.series().expect("series mode"))?
        .add(iclass.series().expect("series mode"))?;
    raw.truncated(order)
}

/// Verifies that a torsion series has no t^{−2}, t^{−1}, odd-degree or LOG_T part.
pub fn check_cancellation(s: &LaurentSeries) -> Result<()> {
    for (d, c) in s.nonzero_terms() {
        if d < 0 {
            return Err(Error::Consistency(format!("nonzero coefficient {c} at t^{d}")));
        }
        if d % 2 != 0 {
            return Err(Error::Consistency(format!("nonzero odd coefficient {c} at t^{d}")));
        }
        if c.contains(ConstSymbol::LogT) {
            return Err(Error::Consistency(format!("log t survives at t^{d}: {c}")));
        }
    }
    Ok(())
}

/// T_{id,tX}(ℙ¹ℂ, 𝒪(ℓ)) as an exact even power series through t^order.
/// The uncancelled assembly is checked for pole/log cancellation and compared
/// coefficientwise with the closed form.
pub fn torsion_infinitesimal(ell: i64, order: i32) -> Result<TorsionResult> {
    let raw = torsion_infinitesimal_raw(ell, order)?;
    check_cancellation(&raw)?;
    let closed = torsion_infinitesimal_closed_form(ell, order)?;
    for d in 0..=order {
        let (a, b) = (raw.coeff(d)?, closed.coeff(d)?);
        if a != b {
            return Err(Error::Consistency(format!(
                "assemblies disagree at t^{d}: {a} versus {b}"
            )));
        }
    }
    let series = LaurentSeries::from_fn("t", 0, order, Parity::Even, |d| closed.coeff(d))?;
    Ok(TorsionResult {
        payload: TorsionPayload::Series(series),
        ell,
        path: EvalPath::Series,
        precision: Precision::default(),
        order: Some(order),
    })
}

/// 4ζ′(−1) − (ℓ+1)²/2 − Σ_{k=1}^{n}(n − 2k)·log k: the Ray–Singer torsion of (ℙ¹ℂ, 𝒪(ℓ)).
pub fn ray_singer_torsion(ell: i64) -> Result<ConstExpr> {
    check_ell(ell)?;
    let n = abs_ell_plus_one(ell) as i64;
    let mut e = ConstExpr::zeta_prime(1)?.scale(&Rational::from(4)) - ConstExpr::rational(Rational::from((n * n, 2)));
    for k in 2..=n {
        e -= &ConstExpr::log(k as u64)?.scale(&Rational::from(n - 2 * k));
    }
    Ok(e)
}

/// |torsion_group − S-term + I-class − torsion_infinitesimal(t)| at one t.
#[derive(Clone, Debug)]
pub struct BgConsistency {
    pub lhs: Float,
    pub series_value: Float,
    pub residual: Float,
}

pub fn check_bg_consistency(ell: i64, t: &Float, order: i32, tol: f64, prec: Precision) -> Result<BgConsistency> {
    let group = torsion_group(ell, t, prec)?;
    let s_term = tdchs_term(ell, &TdchsMode::Value { t: t.clone(), tol }, prec)?;
    let iclass = i_class_term(ell, &IClassInput::Value(t.clone()), prec)?;
    let lhs = group - s_term.value().expect("value") + iclass.value().expect("value");
    let series = torsion_infinitesimal(ell, order)?;
    let series_value = series.series().expect("series").evaluate(t, None, prec)?;
    let residual = Float::with_val(prec.bits(), &lhs - &series_value).abs();
    Ok(BgConsistency {
        lhs,
        series_value,
        residual,
    })
}

// ---------------------------------------------------------------------------
// large-ℓ asymptotics

/// Pieces of the large-ℓ analysis of the S-current term at fixed t.
#[derive(Clone, Debug)]
pub struct AsymptoticReport {
    /// −C/(tS)·log(ℓ+1) + [sin((ℓ+1)t/2)·π/2 − C·(Γ′(1) − log t)]/(tS).
    pub asymptotic: Float,
    /// The oscillatory integral ∫(cos((ℓ+1)tr/2) − C)/((1−r²)tS) dr by quadrature.
    pub first_integral: Float,
    /// The same integral in closed form through Si((ℓ+1)t), Ci((ℓ+1)t).
    pub first_integral_sici: Float,
    /// ∫(r/sin(tr/2) − 1/S)·cos((ℓ+1)tr/2)/(t(1−r²)) dr by quadrature (O(1/ℓ)).
    pub second_integral: Float,
    /// (log t² − 2Γ′(1))·C/(tS).
    pub local_term: Float,
    /// first_integral + second_integral + local_term.
    pub full_value: Float,
    /// Triangle-inequality bound on |full_value − asymptotic|.
    pub error_bound: Float,
}

/// Large-ℓ asymptotics of the S-current term at 0 < t < 2π, with the exact
/// Si/Ci intermediate and the two-integral decomposition.
pub fn torsion_asymptotic(ell: i64, t: &Float, tol: f64, prec: Precision) -> Result<AsymptoticReport> {
    check_ell(ell)?;
    if ell < 0 {
        return arg("the large-ell expansion is stated for ell >= 0");
    }
    check_open_period(t, prec, "torsion_asymptotic")?;
    let bits = prec.bits();
    let inner = prec.raised(10);
    let ib = inner.bits();
    let t = Float::with_val(ib, t);
    let l1 = ell + 1;
    let (c, s) = cos_sin_prefactor(ell, &t);
    let ts = Float::with_val(ib, &t * &s);
    let half_arg = Float::with_val(ib, &t * l1) / 2u32;
    let sn = Float::with_val(ib, half_arg.sin_ref());
    let gamma = inner.euler_gamma(); // Γ′(1) = −γ
    let pi = inner.pi();
    let log_t = Float::with_val(ib, t.ln_ref());

    let log_l1 = Float::with_val(ib, l1).ln();
    let asym = (-(Float::with_val(ib, &c * &log_l1)) + Float::with_val(ib, &sn * &pi) / 2u32
        - Float::with_val(ib, &c * (-Float::with_val(ib, &gamma) - &log_t)))
        / &ts;

    let x = Float::with_val(ib, &t * l1);
    let si_x = si(&x, inner);
    let ci_x = ci(&x, inner)?;
    let log_x = Float::with_val(ib, x.ln_ref());
    let sici = (Float::with_val(ib, &sn * &si_x)
        - Float::with_val(ib, &c * (Float::with_val(ib, &gamma - &ci_x) + &log_x)))
        / &ts;

    let panels = 2 + (l1 as usize) / 8;
    let f1 = |r: &Float| {
        let b = r.prec();
        let cr = (Float::with_val(b, r * &t) * l1 / 2u32).cos();
        let num = Float::with_val(b, &cr - &c);
        num / (1u32 - Float::with_val(b, r.square_ref())) / &ts
    };
    let one = Float::with_val(bits, 1);
    let spec1 = IntegrandSpec::new(&f1, Float::with_val(bits, -1), one.clone())
        .hint(EndpointHint::Removable)
        .panels(panels);
    let first = integrate(&spec1, tol, prec)?.value;

    let inv_s = Float::with_val(ib, s.recip_ref());
    let f2 = |r: &Float| {
        let b = r.prec();
        let tr2 = Float::with_val(b, r * &t) / 2u32;
        let ratio = if r.is_zero() {
            Float::with_val(b, 2u32) / &t
        } else {
            Float::with_val(b, r / tr2.clone().sin())
        };
        let cr = Float::with_val(b, &tr2 * l1).cos();
        (ratio - &inv_s) * cr / &t / (1u32 - Float::with_val(b, r.square_ref()))
    };
    let spec2 = IntegrandSpec::new(&f2, Float::with_val(bits, -1), one)
        .hint(EndpointHint::Removable)
        .panels(panels);
    let second = integrate(&spec2, tol, prec)?.value;

    let local = (Float::with_val(ib, &log_t * 2u32) + Float::with_val(ib, &gamma * 2u32)) * &c / &ts;
    let full = Float::with_val(ib, &first + &second) + &local;
    // |first − asymptotic part of first| + |second|
    let first_tail = Float::with_val(
        ib,
        &sici
            - (Float::with_val(ib, &sn * &pi) / 2u32
                - Float::with_val(ib, &c * (Float::with_val(ib, &gamma) + &log_x)))
                / &ts,
    )
    .abs();
    let bound = first_tail + Float::with_val(ib, second.abs_ref());
    let rd = |v: Float| Float::with_val(bits, v);
    Ok(AsymptoticReport {
        asymptotic: rd(asym),
        first_integral: first,
        first_integral_sici: rd(sici),
        second_integral: second,
        local_term: rd(local),
        full_value: rd(full),
        error_bound: rd(bound),
    })
}

// ---------------------------------------------------------------------------
// two-parameter torsion

/// Both evaluations of the (e^{sX}, tX)-torsion.
#[derive(Clone, Debug)]
pub struct TwoParamResult {
    /// log-sum + C(s+t)/(i S(s+t))·R(s, it) through Lerch values.
    pub lerch: Float,
    /// 2R^rot(s+t)·C/S + log-sum − C/S·Σ_k log(1 + t/(2πk+s))/(2πk+t+s).
    pub bilateral: Float,
    /// Imaginary part left over on the Lerch path (should vanish).
    pub imaginary_residual: Float,
    pub difference: Float,
}

/// The (e^{sX}, tX)-equivariant torsion, for 0 < s < 2π, 0 < s + t < 2π and
/// |t| below the distance from s to 2πℤ. Disagreement of the two paths
/// beyond `tol` is an internal-consistency error.
pub fn torsion_two_param(ell: i64, s: &Float, t: &Float, tol: f64, prec: Precision) -> Result<TwoParamResult> {
    check_ell(ell)?;
    let inner = prec.raised(10);
    let ib = inner.bits();
    let two_pi = inner.pi() * 2u32;
    let s = Float::with_val(ib, s);
    let t = Float::with_val(ib, t);
    if s <= 0 || s >= two_pi {
        return arg("two-parameter torsion needs 0 < s < 2*pi");
    }
    let st = Float::with_val(ib, &s + &t);
    check_open_period(&st, inner, "two-parameter torsion (s + t)")?;
    let dist = Float::with_val(ib, &two_pi - &s).min(&s);
    if Float::with_val(ib, t.abs_ref()) >= dist {
        return arg(format!(
            "two-parameter torsion needs |t| < dist(s, 2*pi*Z) = {}",
            dist.to_f64()
        ));
    }
    let (c, sn) = cos_sin_prefactor(ell, &st);
    let logs = log_sum_value(ell, &st, &sn);
    let ratio = Float::with_val(ib, &c / &sn);

    // Lerch path: C/(iS)·R = (C/S)·(Im R − i Re R)
    let r = r_two(&s, &Complex::new(Float::new(ib), t.clone()), inner)?;
    let lerch = Float::with_val(ib, &logs + Float::with_val(ib, &ratio * &r.im));
    let imaginary_residual = Float::with_val(ib, &ratio * &r.re).abs();

    // bilateral path
    let rrot = r_rot_value(&st, inner)?;
    let cfg = BilateralConfig::default();
    let term = |k: i64| {
        let base = Float::with_val(ib, &two_pi * k) + &s;
        let l = (Float::with_val(ib, &t / &base) + 1u32).ln();
        l / (base + &t)
    };
    let sum = if t.is_zero() {
        Float::new(ib)
    } else {
        bilateral_sum(term, &cfg, inner)?.value
    };
    let bilateral = rrot * 2u32 * &ratio + &logs - Float::with_val(ib, &ratio * &sum);

    let difference = Float::with_val(ib, &lerch - &bilateral).abs();
    if difference > tol {
        return Err(Error::Consistency(format!(
            "two-parameter torsion paths disagree by {:e}",
            difference.to_f64()
        )));
    }
    let rd = |v: Float| Float::with_val(prec.bits(), v);
    Ok(TwoParamResult {
        lerch: rd(lerch),
        bilateral: rd(bilateral),
        imaginary_residual: rd(imaginary_residual),
        difference: rd(difference),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn prec() -> Precision {
        Precision::new(30).unwrap()
    }

    fn close(a: &Float, b: &Float, tol: f64) -> bool {
        Float::with_val(a.prec(), a - b).abs() <= tol
    }

    #[test]
    fn group_torsion_special_cases() {
        let p = prec();
        for tv in [0.4, 1.0, 3.0, 5.5] {
            let t = p.real(tv);
            let r = r_rot_value(&t, p).unwrap();
            let s = Float::with_val(p.bits(), &t / 2u32).sin();
            // ℓ = −1: 2R^rot(t)/sin(t/2)
            let v = torsion_group(-1, &t, p).unwrap();
            assert!(close(&v, &(Float::with_val(p.bits(), &r * 2u32) / &s), 1e-25));
            // ℓ = 0: the log-sum vanishes, leaving 2R^rot(t)·cos(t/2)/sin(t/2)
            let v0 = torsion_group(0, &t, p).unwrap();
            let exp0 = Float::with_val(p.bits(), &r * 2u32) * Float::with_val(p.bits(), &t / 2u32).cos() / &s;
            assert!(close(&v0, &exp0, 1e-25));
        }
        assert!(torsion_group(0, &p.zero(), p).is_err());
        assert!(torsion_group(0, &p.real(7), p).is_err());
    }

    #[test]
    fn i_class_leading_term() {
        let s = i_class_term(-1, &IClassInput::Series(10), prec()).unwrap();
        let s = s.series().unwrap();
        assert_eq!(s.coeff(0).unwrap(), ConstExpr::rational(Rational::from((-1, 6))));
        assert!(s.nonzero_terms().all(|(d, _)| d % 2 == 0));
    }

    #[test]
    fn i_class_series_matches_bilateral_sum() {
        let p = prec();
        let x = p.real(1);
        let a = i_class_inner_value(&x, p).unwrap();
        let b = i_class_inner_direct(&x, &BilateralConfig::default(), p).unwrap();
        assert!(close(&a, &b, 1e-12), "{a} vs {b}");
    }

    #[test]
    fn tdchs_fixed_point_input_shape() {
        let s = tdchs_fixed_point_series(2, 10).unwrap().trimmed();
        assert_eq!(s.min_degree(), -2);
        assert_eq!(s.coeff(-2).unwrap(), ConstExpr::rational(2));
    }

    #[test]
    fn tdchs_modes_agree() {
        let p = prec();
        for (ell, tv) in [(0i64, 1.0), (3, 2.5), (-1, 0.7)] {
            let t = p.real(tv);
            let s = tdchs_term(ell, &TdchsMode::Series(60), p).unwrap();
            let lt = Float::with_val(p.bits(), t.ln_ref());
            let sv = s.series().unwrap().evaluate(&t, Some(&lt), p).unwrap();
            let q = tdchs_term(
                ell,
                &TdchsMode::Value {
                    t: t.clone(),
                    tol: 1e-20,
                },
                p,
            )
            .unwrap();
            assert!(
                close(&sv, q.value().unwrap(), 1e-12),
                "ell {ell} t {tv}: {sv} vs {}",
                q.value().unwrap()
            );
        }
    }

    #[test]
    fn infinitesimal_constant_terms() {
        for ell in -3..=5 {
            let r = torsion_infinitesimal(ell, 8).unwrap();
            let s = r.series().unwrap();
            assert_eq!(s.coeff(0).unwrap(), ray_singer_torsion(ell).unwrap(), "ell {ell}");
        }
        let s = torsion_infinitesimal(-1, 6).unwrap();
        assert_eq!(
            s.series().unwrap().coeff(0).unwrap(),
            ConstExpr::zeta_prime(1).unwrap().scale(&Rational::from(4))
        );
        assert!(torsion_infinitesimal(0, 2).is_err());
    }

    #[test]
    fn raw_assembly_has_poles_before_cancellation() {
        // the pieces individually carry LOG_T; only the sum is clean
        let tdchs = tdchs_term(1, &TdchsMode::Series(6), prec()).unwrap();
        assert!(tdchs.series().unwrap().has_log_t());
        let raw = torsion_infinitesimal_raw(1, 6).unwrap();
        check_cancellation(&raw).unwrap();
    }

    #[test]
    fn mirror_symmetry_of_constant_terms() {
        for ell in 0..=2 {
            let a = torsion_infinitesimal(ell, 6).unwrap();
            let b = torsion_infinitesimal(-2 - ell, 6).unwrap();
            assert_eq!(a.series().unwrap(), b.series().unwrap());
        }
    }

    #[test]
    fn bg_consistency() {
        let p = prec();
        for ell in [0i64, 2] {
            let r = check_bg_consistency(ell, &p.real(0.5), 40, 1e-20, p).unwrap();
            assert!(r.residual < 1e-15, "ell {ell}: {}", r.residual);
        }
    }

    #[test]
    fn two_param_paths() {
        let p = prec();
        let r = torsion_two_param(1, &p.real(0.7), &p.real(0.2), 1e-8, p).unwrap();
        assert!(r.difference < 1e-10, "{}", r.difference);
        assert!(r.imaginary_residual < 1e-20);
        // t = 0 reduces to the group torsion
        let z = torsion_two_param(2, &p.real(1), &p.zero(), 1e-8, p).unwrap();
        let g = torsion_group(2, &p.real(1), p).unwrap();
        assert!(close(&z.lerch, &g, 1e-20));
        assert!(torsion_two_param(0, &p.real(0.3), &p.real(0.5), 1e-8, p).is_err());
    }

    #[test]
    fn asymptotic_sici_identity() {
        let p = prec();
        let r = torsion_asymptotic(10, &p.real(1), 1e-20, p).unwrap();
        assert!(close(&r.first_integral, &r.first_integral_sici, 1e-15));
        let q = tdchs_term(
            10,
            &TdchsMode::Value {
                t: p.real(1),
                tol: 1e-20,
            },
            p,
        )
        .unwrap();
        assert!(close(&r.full_value, q.value().unwrap(), 1e-15));
        assert!(Float::with_val(p.bits(), &r.full_value - &r.asymptotic).abs() <= r.error_bound);
    }
}
