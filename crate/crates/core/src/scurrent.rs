//! Pairings of the equivariant Bott–Chern current S_X on ℙ¹ℂ against test
//! data: integral form, #-series form, the ★-variant for η_t-substituted
//! profiles, the defining-property check and the scaling identity.

use std::fmt;
use std::sync::Arc;

use rug::Float;

use crate::error::{arg, Error, Result};
use crate::numerics::{parse_rational, pow10, Complex, ConstExpr, Precision, Rational};
use crate::quadrature::{integrate, EndpointHint, IntegrandSpec};
use crate::series::{hash, star, LaurentSeries, Parity};

/// The two fixed points of the rotation action on ℙ¹ℂ.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FixedPoint {
    North,
    South,
}

/// Fubini–Study ℙ¹ℂ with the rotation field X, in latitude/longitude
/// coordinates (u, v) with u ∈ [−π/2, π/2].
#[derive(Clone, Copy, Debug, Default)]
pub struct P1Geometry;

impl P1Geometry {
    /// ∫_M ω/2π.
    pub fn volume(&self) -> Rational {
        Rational::from(1)
    }

    /// Density of ω in du∧dv: ω = ½ cos u du∧dv.
    pub fn omega_density(&self, u: &Float) -> Float {
        Float::with_val(u.prec(), u.cos_ref()) / 2u32
    }

    /// Moment map of O(1) along X: (i/2) sin u.
    pub fn moment_l(&self, u: &Float) -> Complex {
        let im = Float::with_val(u.prec(), u.sin_ref()) / 2u32;
        Complex::new(Float::new(u.prec()), im)
    }

    /// ‖X‖² = cos²u/2.
    pub fn norm_x_sq(&self, u: &Float) -> Float {
        Float::with_val(u.prec(), u.cos_ref()).square() / 2u32
    }

    /// Rotation angle ϑ of X on the tangent space at each fixed point.
    pub fn fixed_point_angles(&self) -> [(FixedPoint, i32); 2] {
        [(FixedPoint::North, 1), (FixedPoint::South, -1)]
    }

    /// c_top,X^{-1}(N) = 1/(iϑ) at a fixed point.
    pub fn ctop_inv(&self, p: FixedPoint, bits: u32) -> Complex {
        let theta = match p {
            FixedPoint::North => 1,
            FixedPoint::South => -1,
        };
        // 1/(iϑ) = −i/ϑ
        Complex::new(Float::new(bits), Float::with_val(bits, -theta))
    }

    /// (c_top,tX^{-1})′ at either fixed point: 1/t².
    pub fn ctop_inv_prime(&self, t: &Float) -> Float {
        Float::with_val(t.prec(), t.square_ref()).recip()
    }
}

type Callable = Arc<dyn Fn(&Float) -> Float + Send + Sync>;

#[derive(Clone)]
enum ProfileKind {
    /// Coefficients of r^{2k}.
    Polynomial(Vec<Rational>),
    Callable(Callable),
}

/// An even fiber profile g̃(r) = g̃(−r), given exactly or as a callable.
#[derive(Clone)]
pub struct TestProfile {
    kind: ProfileKind,
    analytic: bool,
}

impl fmt::Debug for TestProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ProfileKind::Polynomial(c) => f.debug_tuple("Polynomial").field(c).finish(),
            ProfileKind::Callable(_) => write!(f, "Callable(analytic = {})", self.analytic),
        }
    }
}

impl TestProfile {
    /// Σ c_k r^{2k}.
    pub fn even_polynomial(coeffs: Vec<Rational>) -> Self {
        TestProfile {
            kind: ProfileKind::Polynomial(coeffs),
            analytic: true,
        }
    }

    /// Symmetrizes a polynomial Σ a_d r^d: only even degrees survive.
    pub fn from_polynomial(all_degrees: &[Rational]) -> Self {
        let coeffs = all_degrees.iter().step_by(2).cloned().collect();
        TestProfile::even_polynomial(coeffs)
    }

    /// Symmetrized callable profile r ↦ (f(r) + f(−r))/2. `analytic` licenses
    /// the series path only if the caller can vouch for a radius of convergence > 1.
    pub fn from_fn<F>(f: F, analytic: bool) -> Self
    where
        F: Fn(&Float) -> Float + Send + Sync + 'static,
    {
        let sym = move |r: &Float| {
            let neg = Float::with_val(r.prec(), -r);
            (f(r) + f(&neg)) / 2u32
        };
        TestProfile {
            kind: ProfileKind::Callable(Arc::new(sym)),
            analytic,
        }
    }

    /// Parses expressions like `r^2+r^4`, `-1/4*r^2`, `3 - r^6/2`.
    pub fn parse(text: &str) -> Result<Self> {
        let cleaned: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if cleaned.is_empty() {
            return arg("empty profile");
        }
        let mut terms = Vec::new();
        let mut cur = String::new();
        for (i, ch) in cleaned.chars().enumerate() {
            if (ch == '+' || ch == '-') && i > 0 && !cur.ends_with('^') {
                terms.push(std::mem::take(&mut cur));
            }
            cur.push(ch);
        }
        terms.push(cur);
        let mut coeffs: Vec<Rational> = Vec::new();
        for term in terms {
            let (coef, deg) = parse_monomial(&term)?;
            if coeffs.len() <= deg {
                coeffs.resize(deg + 1, Rational::new());
            }
            coeffs[deg] += coef;
        }
        Ok(TestProfile::from_polynomial(&coeffs))
    }

    pub fn is_analytic(&self) -> bool {
        self.analytic
    }

    /// Even-degree coefficients if the profile is an exact polynomial.
    pub fn polynomial(&self) -> Option<&[Rational]> {
        match &self.kind {
            ProfileKind::Polynomial(c) => Some(c),
            ProfileKind::Callable(_) => None,
        }
    }

    pub fn eval(&self, r: &Float) -> Float {
        match &self.kind {
            ProfileKind::Polynomial(c) => {
                let r2 = Float::with_val(r.prec(), r.square_ref());
                let mut acc = Float::new(r.prec());
                for q in c.iter().rev() {
                    acc *= &r2;
                    acc += q;
                }
                acc
            }
            ProfileKind::Callable(f) => f(r),
        }
    }

    /// The profile as an exact even series in `var`.
    pub fn series_in(&self, var: &str) -> Result<LaurentSeries> {
        match &self.kind {
            ProfileKind::Polynomial(c) => {
                let mut c = c.clone();
                c.push(Rational::new());
                LaurentSeries::even_polynomial(var, &c)
            }
            ProfileKind::Callable(_) => Err(Error::Licensing("series path needs an exact polynomial profile".into())),
        }
    }

    fn require_series(&self) -> Result<LaurentSeries> {
        if !self.analytic {
            return Err(Error::Licensing(
                "profile is not known to be analytic with radius > 1; the # path is not licensed".into(),
            ));
        }
        self.series_in("r")
    }

    /// r ↦ g̃(t·r).
    fn rescaled(&self, t: &Float) -> TestProfile {
        let inner = self.clone();
        let t = t.clone();
        TestProfile {
            kind: ProfileKind::Callable(Arc::new(move |r: &Float| {
                inner.eval(&Float::with_val(r.prec(), r * &t))
            })),
            analytic: self.analytic,
        }
    }
}

fn parse_monomial(term: &str) -> Result<(Rational, usize)> {
    let bad = || Error::Argument(format!("cannot parse profile term '{term}'"));
    let (sign, body) = match term.strip_prefix('-') {
        Some(rest) => (-1, rest),
        None => (1, term.strip_prefix('+').unwrap_or(term)),
    };
    let Some(pos) = body.find('r') else {
        return Ok((parse_rational(body).map_err(|_| bad())? * sign, 0));
    };
    let (before, after) = body.split_at(pos);
    let after = &after[1..];
    let (deg, trailing) = if let Some(rest) = after.strip_prefix('^') {
        let end = rest.find(|c: char| !c.is_ascii_digit()).unwrap_or(rest.len());
        let d: usize = rest[..end].parse().map_err(|_| bad())?;
        (d, &rest[end..])
    } else {
        (1, after)
    };
    let mut coef = match before.trim_end_matches('*') {
        "" => Rational::from(1),
        c => parse_rational(c).map_err(|_| bad())?,
    };
    if let Some(den) = trailing.strip_prefix('/') {
        coef /= parse_rational(den).map_err(|_| bad())?;
    } else if !trailing.is_empty() {
        return Err(bad());
    }
    Ok((coef * sign, deg))
}

fn check_t(t: &Float) -> Result<()> {
    if t.is_zero() || !t.is_finite() {
        return arg("the pairing needs a finite t != 0");
    }
    Ok(())
}

/// log t² + 2γ (= log t² − 2Γ′(1)).
fn log_t2_plus_2gamma(t: &Float, prec: Precision) -> Float {
    let lt = Float::with_val(prec.bits(), t.abs_ref()).ln() * 2u32;
    lt + prec.euler_gamma() * 2u32
}

/// ∫_{−1}^{1}(2g̃(r) − 2g̃(1))/t² · dr/(1−r²) + (log t² − 2Γ′(1))·2g̃(1)/t².
pub fn s_pairing_integral(g: &TestProfile, t: &Float, tol: f64, prec: Precision) -> Result<Float> {
    check_t(t)?;
    let bits = prec.bits();
    let g1 = g.eval(&Float::with_val(bits, 1));
    let f = |r: &Float| {
        let num = (g.eval(r) - &g1) * 2u32;
        let den = 1u32 - Float::with_val(r.prec(), r.square_ref());
        num / den
    };
    let spec =
        IntegrandSpec::new(&f, Float::with_val(bits, -1), Float::with_val(bits, 1)).hint(EndpointHint::Removable);
    let t2 = Float::with_val(bits, t.square_ref());
    let q = integrate(
        &spec,
        (tol * t2.to_f64()).max(10f64.powi(2 - prec.digits() as i32)),
        prec,
    )?;
    let local = log_t2_plus_2gamma(t, prec) * &g1 * 2u32;
    Ok((q.value + local) / t2)
}

/// Coefficient K of the series form S = K/t²:
/// K = −(2g̃)# + (2·LOG_T + 2·GAMMA)·2g̃(1).
pub fn s_pairing_series_symbolic(g: &TestProfile) -> Result<ConstExpr> {
    let s = g.require_series()?;
    let two = Rational::from(2);
    let hash_part = hash(&s.scale_rational(&two))?;
    let g1: Rational = g.polynomial().unwrap_or(&[]).iter().cloned().sum();
    let local = (ConstExpr::log_t().scale(&two) + ConstExpr::gamma().scale(&two)).scale(&(g1 * 2u32));
    Ok(local - hash_part)
}

/// Numeric value of the series form at t.
pub fn s_pairing_series_value(g: &TestProfile, t: &Float, prec: Precision) -> Result<Float> {
    check_t(t)?;
    let k = s_pairing_series_symbolic(g)?;
    let lt = Float::with_val(prec.bits(), t.abs_ref()).ln();
    Ok(k.eval(prec, Some(&lt))? / Float::with_val(prec.bits(), t.square_ref()))
}

/// ★-variant for the η_t-substituted pairing, with g̃(t) an even power
/// series in t: −(2g̃(t)/t²)★ + (2·LOG_T + 2·GAMMA)·2g̃(t)/t².
pub fn s_star_variant_series(g_t: &LaurentSeries) -> Result<LaurentSeries> {
    g_t.check_parity(Parity::Even)?;
    let phi = g_t.scale_rational(&Rational::from(2)).shifted(-2)?;
    let logs = ConstExpr::log_t().scale(&Rational::from(2)) + ConstExpr::gamma().scale(&Rational::from(2));
    let local = phi.scale(&logs)?;
    let st = star(&phi)?;
    Ok(local.sub(&st)?.trimmed())
}

/// [`s_star_variant_series`] for an exact polynomial profile g̃(t).
pub fn s_pairing_star_variant(g: &TestProfile) -> Result<LaurentSeries> {
    let s = g.require_series()?.renamed("t");
    s_star_variant_series(&s)
}

/// Numeric η_t-pairing through quadrature:
/// ∫(2g̃(tr) − 2g̃(t))/t² dr/(1−r²) + (log t² − 2Γ′(1))·2g̃(t)/t².
pub fn s_pairing_star_variant_integral(g: &TestProfile, t: &Float, tol: f64, prec: Precision) -> Result<Float> {
    check_t(t)?;
    s_pairing_integral(&g.rescaled(t), t, tol, prec)
}

/// Convention for [`fixed_point_functional`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FixedPointConvention {
    /// 2g̃(t)/t² (η_t-substituted profile).
    EtaT,
    /// 2g̃(1)/t².
    Plain,
}

/// ∫_{M_X} η (c_top^{-1})′ evaluated through the profile.
pub fn fixed_point_functional(g: &TestProfile, t: &Float, convention: FixedPointConvention) -> Result<Float> {
    check_t(t)?;
    let bits = t.prec();
    let at = match convention {
        FixedPointConvention::EtaT => g.eval(t),
        FixedPointConvention::Plain => g.eval(&Float::with_val(bits, 1)),
    };
    Ok(at * 2u32 * P1Geometry.ctop_inv_prime(t))
}

/// Residuals of the two scalar forms of ∂̄_X∂_X S_X/(2πi) = 1 − c_top^{-1}δ.
#[derive(Clone, Debug)]
pub struct DefiningResiduals {
    pub residual1: Float,
    pub residual2: Float,
}

fn derivative(f: &(dyn Fn(&Float) -> Float + Sync), u: &Float, prec: Precision) -> Float {
    // Fourth-order central difference at raised precision.
    let inner = prec.raised(prec.digits());
    let bits = inner.bits();
    let h = pow10(-(prec.digits() as i32) / 2, bits);
    let u = Float::with_val(bits, u);
    let at = |k: i32| f(&Float::with_val(bits, &u + Float::with_val(bits, &h * k)));
    let num = (at(-2) - at(2)) + (at(1) - at(-1)) * 8u32;
    Float::with_val(prec.bits(), num / (h * 12u32))
}

/// Checks the defining property with 2-form part f₁ω and function part f₀
/// (both functions of the latitude u; mirror symmetrization is internal).
///
/// residual₁ = |∫2g̃₁(r)dr/(1−r²) − ∫_M f₁ω| with g̃₁(sin u) = (π/2)f₁(u)cos²u;
/// residual₂ = |pairing of −X^{1,0}.f₀ − (i f₀(N) − i f₀(S))|, where the right
/// side uses c_top,X^{-1} = ∓i at N/S.
pub fn check_defining_property(
    f0: &(dyn Fn(&Float) -> Float + Sync),
    f1: &(dyn Fn(&Float) -> Float + Sync),
    tol: f64,
    prec: Precision,
) -> Result<DefiningResiduals> {
    let bits = prec.bits();
    let pi = prec.pi();
    let half_pi = Float::with_val(bits, &pi / 2u32);
    let f1_sym = |u: &Float| (f1(u) + f1(&Float::with_val(u.prec(), -u))) / 2u32;

    // left side of the first identity: the pairing with g̃₁ at t = 1
    let g1 = {
        let pi = pi.clone();
        move |r: &Float| {
            let u = Float::with_val(r.prec(), r.asin_ref());
            let cos2 = 1u32 - Float::with_val(r.prec(), r.square_ref());
            (f1(&u) + f1(&Float::with_val(r.prec(), -&u))) / 2u32 * cos2 * &pi / 2u32
        }
    };
    // g̃₁(±1) = 0, so only the regular part of the pairing contributes
    let lhs1 = pairing_of_borrowed(&g1, tol / 4.0, prec)?;
    // right side: ∫_M f₁ω = ∫_0^{2π}∫ f₁·½cos u du dv
    let geo = P1Geometry;
    let dens = |u: &Float| f1_sym(u) * geo.omega_density(u);
    let q = integrate(
        &IntegrandSpec::new(&dens, Float::with_val(bits, -&half_pi), half_pi.clone()),
        tol / 4.0,
        prec,
    )?;
    let rhs1 = q.value * &pi * 2u32;
    let residual1 = Float::with_val(bits, &lhs1 - &rhs1).abs();

    // second identity, divided by i: profile (1/2)cos u · ∂f₀/∂u
    let g0 = move |r: &Float| {
        let u = Float::with_val(r.prec(), r.asin_ref());
        let c = Float::with_val(r.prec(), 1u32 - Float::with_val(r.prec(), r.square_ref())).sqrt();
        derivative(f0, &u, prec) * c / 2u32
    };
    let lhs2 = pairing_of_borrowed(&g0, tol / 4.0, prec)?;
    let fixed = |p: FixedPoint, u: &Float| {
        // −f₀(p)·c_top^{-1}(p), divided by i
        let c = geo.ctop_inv(p, bits);
        let v = f0(u);
        Complex::real(v).mul(&c).neg()
    };
    let north = fixed(FixedPoint::North, &half_pi);
    let south = fixed(FixedPoint::South, &Float::with_val(bits, -&half_pi));
    // (i f₀(N) − i f₀(S)) / i is the imaginary part of the sum above
    let rhs2 = Float::with_val(bits, &north.im + &south.im);
    let residual2 = Float::with_val(bits, &lhs2 - &rhs2).abs();
    Ok(DefiningResiduals { residual1, residual2 })
}

/// s_pairing_integral at t = 1 for a borrowed (non-'static) even profile with g̃(±1) = 0.
fn pairing_of_borrowed(g: &(dyn Fn(&Float) -> Float + Sync), tol: f64, prec: Precision) -> Result<Float> {
    let bits = prec.bits();
    let f = |r: &Float| {
        let neg = Float::with_val(r.prec(), -r);
        let sym = (g(r) + g(&neg)) / 2u32;
        sym * 2u32 / (1u32 - Float::with_val(r.prec(), r.square_ref()))
    };
    let spec =
        IntegrandSpec::new(&f, Float::with_val(bits, -1), Float::with_val(bits, 1)).hint(EndpointHint::Removable);
    Ok(integrate(&spec, tol, prec)?.value)
}

/// |c²·S(g, c·t) − S(g, t) − log(c²)·2g̃(1)/t²| through the integral path.
pub fn check_scaling(g: &TestProfile, t: &Float, c: &Float, tol: f64, prec: Precision) -> Result<Float> {
    check_t(t)?;
    if *c <= 0 {
        return arg("scaling factor c must be positive");
    }
    let bits = prec.bits();
    let ct = Float::with_val(bits, c * t);
    let c2 = Float::with_val(bits, c.square_ref());
    let scaled = s_pairing_integral(g, &ct, tol, prec)? * &c2;
    let base = s_pairing_integral(g, t, tol, prec)?;
    let g1 = g.eval(&Float::with_val(bits, 1));
    let t2 = Float::with_val(bits, t.square_ref());
    let shift = c2.ln() * g1 * 2u32 / t2;
    Ok((scaled - base - shift).abs())
}

/// Symbolic scaling residual (coefficient of t^{−2}) for a polynomial profile
/// and rational c > 0; identically zero when the identity holds.
pub fn check_scaling_symbolic(g: &TestProfile, c: &Rational) -> Result<ConstExpr> {
    if *c <= 0 {
        return arg("scaling factor c must be positive");
    }
    let k = s_pairing_series_symbolic(g)?;
    // S(g, c t) has LOG_T ↦ LOG_T + log c; the c² prefactor cancels the 1/c².
    let log_c = ConstExpr::log_rational(c)?;
    let shift_t = log_c.scale(&k.coeff(crate::numerics::ConstSymbol::LogT));
    let scaled = &k + &shift_t;
    let g1: Rational = g.polynomial().unwrap_or(&[]).iter().cloned().sum();
    let expected_shift = log_c.scale(&(Rational::from(4) * g1));
    Ok(&(&scaled - &k) - &expected_shift)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn prec() -> Precision {
        Precision::default()
    }

    fn poly(c: &[i64]) -> TestProfile {
        TestProfile::even_polynomial(c.iter().map(|&v| Rational::from(v)).collect())
    }

    #[test]
    fn parse_profiles() {
        let p = TestProfile::parse("r^2+r^4").unwrap();
        assert_eq!(
            p.polynomial().unwrap(),
            &[Rational::new(), Rational::from(1), Rational::from(1)]
        );
        let q = TestProfile::parse("-1/4*r^2").unwrap();
        assert_eq!(q.polynomial().unwrap(), &[Rational::new(), Rational::from((-1, 4))]);
        let c = TestProfile::parse("3 - r^6/2").unwrap();
        assert_eq!(c.polynomial().unwrap()[3], Rational::from((-1, 2)));
        assert_eq!(c.polynomial().unwrap()[0], 3);
        // odd parts vanish under symmetrization
        let o = TestProfile::parse("r + r^2").unwrap();
        assert_eq!(o.polynomial().unwrap(), &[Rational::new(), Rational::from(1)]);
        assert!(TestProfile::parse("r^x").is_err());
        assert!(TestProfile::parse("").is_err());
    }

    #[test]
    fn pairing_examples() {
        let p = prec();
        let one = p.real(1);
        let zero = s_pairing_integral(&poly(&[0]), &one, 1e-20, p).unwrap();
        assert!(zero.is_zero());
        let r2 = s_pairing_integral(&poly(&[0, 1]), &one, 1e-20, p).unwrap();
        let expected = p.euler_gamma() * 4u32 - 4u32;
        assert!(Float::with_val(p.bits(), &r2 - &expected).abs() < 1e-20);
        let sym = s_pairing_series_symbolic(&poly(&[0, 1])).unwrap();
        assert_eq!(
            sym,
            ConstExpr::rational(-4)
                + ConstExpr::log_t().scale(&Rational::from(4))
                + ConstExpr::gamma().scale(&Rational::from(4))
        );
        // constant profile: only the local term survives
        for t in [0.3, 1.7, -2.0] {
            let tv = p.real(t);
            let v = s_pairing_integral(&poly(&[3]), &tv, 1e-20, p).unwrap();
            let exp = log_t2_plus_2gamma(&tv, p) * 6u32 / Float::with_val(p.bits(), tv.square_ref());
            assert!(Float::with_val(p.bits(), v - exp).abs() < 1e-30);
        }
        assert!(s_pairing_integral(&poly(&[1]), &p.zero(), 1e-10, p).is_err());
    }

    #[test]
    fn licensing() {
        let f = TestProfile::from_fn(|r: &Float| Float::with_val(r.prec(), r.cos_ref()), false);
        assert!(matches!(s_pairing_series_symbolic(&f), Err(Error::Licensing(_))));
    }

    #[test]
    fn star_variant_height_profile() {
        // g̃(t) = −t²/4 → 1 − ½log t² + Γ′(1) = 1 − LOG_T − GAMMA
        let g = TestProfile::parse("-1/4*r^2").unwrap();
        let s = s_pairing_star_variant(&g).unwrap();
        assert_eq!(s.min_degree(), 0);
        let c0 = s.coeff(0).unwrap();
        assert_eq!(c0, ConstExpr::one() - ConstExpr::log_t() - ConstExpr::gamma());
        assert!(s.nonzero_terms().all(|(d, _)| d == 0));
        // numeric η_t pairing agrees at several t
        let p = prec();
        for t in [0.5, 1.0, 2.0] {
            let tv = p.real(t);
            let lt = Float::with_val(p.bits(), tv.ln_ref());
            let sym = s.evaluate(&tv, Some(&lt), p).unwrap();
            let num = s_pairing_star_variant_integral(&g, &tv, 1e-25, p).unwrap();
            assert!(Float::with_val(p.bits(), sym - num).abs() < 1e-20);
        }
    }

    #[test]
    fn star_variant_bridge_with_series_form() {
        // g̃(t) = t²: the η_t pairing equals s_pairing_series(r², t) at t = 1
        let p = prec();
        let g = poly(&[0, 1]);
        let star_form = s_pairing_star_variant(&g).unwrap();
        let one = p.real(1);
        let a = star_form.evaluate(&one, Some(&p.zero()), p).unwrap();
        let b = s_pairing_series_value(&g, &one, p).unwrap();
        assert!(Float::with_val(p.bits(), a - b).abs() < 1e-40);
    }

    #[test]
    fn fixed_point_examples() {
        let p = prec();
        let two = p.real(2);
        let v = fixed_point_functional(&poly(&[1]), &two, FixedPointConvention::Plain).unwrap();
        assert_eq!(v, 0.5);
        let g = TestProfile::parse("-1/4*r^2").unwrap();
        let w = fixed_point_functional(&g, &p.real(1.3), FixedPointConvention::EtaT).unwrap();
        assert!(Float::with_val(p.bits(), w + 0.5f64).abs() < 1e-40);
        assert!(fixed_point_functional(&g, &p.zero(), FixedPointConvention::Plain).is_err());
        let z = fixed_point_functional(&poly(&[0]), &two, FixedPointConvention::EtaT).unwrap();
        assert!(z.is_zero());
    }

    #[test]
    fn defining_property_constant_data() {
        let p = prec();
        let one = |_: &Float| Float::with_val(p.bits(), 1);
        let konst = |_: &Float| Float::with_val(p.bits(), 2.5);
        let r = check_defining_property(&konst, &one, 1e-12, p).unwrap();
        assert!(r.residual1 < 1e-12);
        assert!(r.residual2 < 1e-12);
    }

    #[test]
    fn scaling_examples() {
        let p = prec();
        let g = poly(&[0, 1]);
        let r = check_scaling(&g, &p.real(1), &p.real(1), 1e-20, p).unwrap();
        assert!(r < 1e-20);
        let r = check_scaling(&g, &p.real(1), &p.real(2), 1e-20, p).unwrap();
        assert!(r < 1e-10);
        assert!(check_scaling_symbolic(&poly(&[1, 2, -3]), &Rational::from((3, 2)))
            .unwrap()
            .is_zero());
    }

    #[test]
    fn geometry_data() {
        let geo = P1Geometry;
        let bits = 100;
        assert_eq!(geo.ctop_inv(FixedPoint::North, bits).im, -1);
        assert_eq!(geo.ctop_inv(FixedPoint::South, bits).im, 1);
        let t = Float::with_val(bits, 3);
        assert_eq!(geo.ctop_inv_prime(&t) * 9u32, 1);
        let u = Float::with_val(bits, 0.4);
        let nx = geo.norm_x_sq(&u);
        let c = Float::with_val(bits, u.cos_ref());
        assert!(Float::with_val(bits, nx * 2u32 - c.square()).abs() < 1e-28);
        assert_eq!(geo.volume(), 1);
    }
}
