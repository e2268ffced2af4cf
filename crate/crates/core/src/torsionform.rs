//! The torsion form T_π(𝒪(ℓ)) = e^{−ℓc₁/2}·T_ℓ(c₁² − 4c₂) of a ℙ¹-bundle
//! ℙ(E) → B, and the height of ℙ¹ over ℤ through the equivariant residue
//! formula.

use rug::Float;
use serde_json::{json, Value};

use crate::chowring::BaseClass;
use crate::error::{arg, Error, Result};
use crate::numerics::{format_rational, ConstExpr, ConstSymbol, Precision, Rational};
use crate::scurrent::{s_pairing_star_variant, s_pairing_star_variant_integral, TestProfile};
use crate::series::{build_in, star, LaurentSeries, Parity, SeriesKind};
use crate::specfun::gs_r_series_in;
use crate::torsion::{abs_ell_plus_one, torsion_infinitesimal};

fn hyperbolic(a: Rational, order: i32, odd: bool) -> Result<LaurentSeries> {
    let plus = build_in("y", &SeriesKind::ExpScaled(a.clone()), order)?;
    let minus = build_in("y", &SeriesKind::ExpScaled(-a), order)?;
    let s = if odd { plus.sub(&minus)? } else { plus.add(&minus)? };
    let parity = if odd { Parity::Odd } else { Parity::Even };
    s.scale_rational(&Rational::from((1, 2))).with_parity(parity)
}

/// T_ℓ(y²) = value of the closed form at t = iy, as a series in y:
/// Σ sinh((2m−n)y/2)/sinh(y/2)·log m + (−cosh((ℓ+1)y/2)/(y sinh(y/2)))★
/// + cosh((ℓ+1)y/2)/sinh(y/2)·R(y), with R the Gillet–Soulé series.
fn hyperbolic_form(ell: i64, order: i32) -> Result<LaurentSeries> {
    let work = order + 3;
    let inv = hyperbolic(Rational::from((1, 2)), work + 2, true)?
        .trimmed()
        .inverse()?;
    let n = abs_ell_plus_one(ell) as i64;
    let mut acc = LaurentSeries::zero("y", 0, order)?.with_parity(Parity::Even)?;
    for m in 2..=n {
        let a = 2 * m - n;
        if a == 0 {
            continue;
        }
        let q = hyperbolic(Rational::from((a, 2)), work, true)?.mul(&inv)?;
        acc = acc.add(&q.scale(&ConstExpr::log(m as u64)?)?)?;
    }
    let ch = hyperbolic(Rational::from((ell + 1, 2)), work, false)?;
    let p = ch.mul(&inv)?; // cosh/sinh
    let star_in = p.shifted(-1)?.neg();
    acc = acc.add(&star(&star_in)?)?;
    let r = gs_r_series_in("y", work)?;
    acc = acc.add(&p.mul(&r)?)?;
    acc.truncated(order)
}

/// T_ℓ(−t²) as an even power series in t through t^order, built from the
/// hyperbolic form of the closed expression and cross-checked coefficientwise
/// against the torsion-module assembly.
pub fn t_ell_series(ell: i64, order: i32) -> Result<LaurentSeries> {
    if order < 4 {
        return arg(format!("T_ell series needs order >= 4, got {order}"));
    }
    let y = hyperbolic_form(ell, order)?;
    let t = LaurentSeries::from_fn("t", 0, order, Parity::Even, |d| {
        let c = y.coeff(d)?;
        Ok(if (d / 2) % 2 == 0 { c } else { -c })
    })?;
    for (d, c) in y.nonzero_terms() {
        if d % 2 != 0 || d < 0 {
            return Err(Error::Consistency(format!("hyperbolic form has a term {c} at y^{d}")));
        }
    }
    let reference = torsion_infinitesimal(ell, order)?;
    let reference = reference.series().expect("series payload");
    for d in 0..=order {
        let (a, b) = (t.coeff(d)?, reference.coeff(d)?);
        if a != b {
            return Err(Error::Consistency(format!(
                "T_ell mismatch at t^{d}: {a} versus torsion module {b}"
            )));
        }
    }
    Ok(t)
}

/// e^{−ℓc₁/2}·T_ℓ(c₁² − 4c₂) truncated at real degree `cap`.
#[derive(Clone, Debug)]
pub struct TorsionFormClass {
    pub class: BaseClass,
    pub ell: i64,
    pub order: i32,
}

impl TorsionFormClass {
    pub fn degree_part(&self, k: u32) -> BaseClass {
        self.class.degree_part(k)
    }

    pub fn to_json(&self) -> Value {
        json!({ "ell": self.ell, "series_order": self.order, "class": self.class.to_json() })
    }
}

fn order_for(cap: u32) -> i32 {
    let o = (cap / 2) as i32;
    (o + o % 2).max(4)
}

/// T_ℓ(c₁² − 4c₂) without the exponential factor.
pub fn t_ell_class(ell: i64, cap: u32) -> Result<BaseClass> {
    let order = order_for(cap);
    BaseClass::from_even_series(&t_ell_series(ell, order)?, cap)
}

/// T_π(𝒪(ℓ)) = e^{−ℓc₁/2}·T_ℓ(c₁² − 4c₂).
pub fn torsion_form(ell: i64, cap: u32) -> Result<TorsionFormClass> {
    if !cap.is_multiple_of(2) {
        return arg("degree cap must be even");
    }
    let order = order_for(cap);
    let t = BaseClass::from_even_series(&t_ell_series(ell, order)?, cap)?;
    let class = BaseClass::exp_c1(&Rational::from((-ell, 2)), cap)?.mul(&t)?;
    Ok(TorsionFormClass { class, ell, order })
}

/// Pullback along a Hirzebruch-type base: c₁ ↦ −k·h, c₂ ↦ 0 with h² = 0
/// (h is represented by c₁; terms in c₁^{≥2} are dropped).
pub fn hirzebruch_pullback(class: &BaseClass, k: i64) -> Result<BaseClass> {
    let cap = class.cap();
    let h = BaseClass::c1(cap)?.scale_rational(&Rational::from(-k));
    let pulled = class.substitute(&h, &BaseClass::zero(cap)?)?;
    let mut out = BaseClass::zero(cap)?;
    for ((a, b), c) in pulled.terms() {
        if *a <= 1 && *b == 0 {
            out = out.add(&BaseClass::monomial(*a, 0, c.clone(), cap)?);
        }
    }
    Ok(out)
}

/// One term −(−c₁)^j/(iφ)^{j+1}·(−2Γ′(1) + 2log|φ| − H_j) of the r-class at
/// a fixed point where tX acts with angle φ = q·t:
/// scale · i^{i_power} · t^{t_power} · c₁^j · bracket.
#[derive(Clone, Debug, PartialEq)]
pub struct RClassTerm {
    pub j: u32,
    pub scale: Rational,
    /// Power of i, reduced mod 4.
    pub i_power: u32,
    pub t_power: i32,
    pub bracket: ConstExpr,
}

pub fn r_class_fixed_point(q: &Rational, j: u32) -> Result<RClassTerm> {
    if *q == 0 {
        return Err(Error::Pole("r-class at a zero angle".into()));
    }
    let qa = Rational::from(q.abs_ref());
    // −2Γ′(1) + 2log|φ| − H_j with log|φ| = log t + log|q|
    let bracket = ConstExpr::gamma().scale(&Rational::from(2))
        + ConstExpr::log_t().scale(&Rational::from(2))
        + ConstExpr::log_rational(&qa)?.scale(&Rational::from(2))
        - ConstExpr::rational(crate::numerics::harmonic(j as i64)?);
    let sign = if j.is_multiple_of(2) { -1 } else { 1 };
    let qpow = Rational::from(rug::ops::Pow::pow(q.clone(), j + 1));
    Ok(RClassTerm {
        j,
        scale: Rational::from(sign) / qpow,
        i_power: (4 - (j + 1) % 4) % 4,
        t_power: -(j as i32 + 1),
        bracket,
    })
}

/// The exact height computation.
#[derive(Clone, Debug)]
pub struct HeightReport {
    /// −½∫ c_{1,X}(𝒪(1))² r_X(N)/c_top,X(N) over the fixed points.
    pub r_term: ConstExpr,
    /// ½∫ η_t S_{tX} with η_t = −(t²/4)sin²u.
    pub s_term: ConstExpr,
    pub value: ConstExpr,
    pub log_t_residue: Rational,
    pub gamma_residue: Rational,
}

impl HeightReport {
    pub fn to_json(&self) -> Value {
        json!({
            "value": self.value.to_string(),
            "log_t_residue": format_rational(&self.log_t_residue),
            "gamma_residue": format_rational(&self.gamma_residue),
        })
    }
}

/// Multiplies unit powers of i: returns ±1 if the total power is even.
fn real_unit(power: u32) -> Result<i64> {
    match power % 4 {
        0 => Ok(1),
        2 => Ok(-1),
        _ => Err(Error::Consistency("an imaginary contribution survived".into())),
    }
}

/// The height of ℙ¹ over ℤ with respect to 𝒪(1), assembled from the r-class
/// fixed-point term and the S-current term (the arithmetic fixed-point term
/// vanishes). The log t and Γ′(1) symbols must cancel exactly.
pub fn height_p1z() -> Result<HeightReport> {
    // fixed points N, S: 𝒪(1) angle ±t/2, normal angle ±t
    let mut r_term = ConstExpr::zero();
    for sign in [1i64, -1] {
        let phi = Rational::from((sign, 2));
        let theta = Rational::from(sign);
        let r = r_class_fixed_point(&theta, 0)?;
        // −½·(iφ)²·r/(iϑ): (iφ)² = −φ²t², 1/(iϑ) = i^3/(ϑt)
        let i_power = 2 + r.i_power + 3;
        let t_power = 2 + r.t_power - 1;
        if t_power != 0 {
            return Err(Error::Consistency(format!("r-term carries t^{t_power}")));
        }
        let scale = Rational::from((-1, 2)) * Rational::from(phi.square_ref()) * &r.scale / &theta;
        r_term += &r.bracket.scale(&(scale * real_unit(i_power)?));
    }
    let profile = TestProfile::parse("-1/4*r^2")?;
    let s = s_pairing_star_variant(&profile)?;
    if s.nonzero_terms().any(|(d, _)| d != 0) {
        return Err(Error::Consistency("S-term depends on t beyond the constant".into()));
    }
    let s_term = s.coeff(0)?.scale(&Rational::from((1, 2)));
    let value = &r_term + &s_term;
    let report = HeightReport {
        log_t_residue: value.coeff(ConstSymbol::LogT),
        gamma_residue: value.coeff(ConstSymbol::Gamma),
        r_term,
        s_term,
        value,
    };
    if !report.value.is_rational() {
        return Err(Error::Consistency(format!(
            "height did not reduce to a rational: {}",
            report.value
        )));
    }
    Ok(report)
}

/// Fully numeric height at a given t: (γ + log t)/2 plus half the S-current
/// pairing by quadrature.
pub fn height_numeric(t: &Float, tol: f64, prec: Precision) -> Result<Float> {
    if *t <= 0 {
        return arg("height_numeric needs t > 0");
    }
    let bits = prec.bits();
    let r = (prec.euler_gamma() + Float::with_val(bits, t.ln_ref())) / 2u32;
    let profile = TestProfile::parse("-1/4*r^2")?;
    let s = s_pairing_star_variant_integral(&profile, t, tol, prec)?;
    Ok(r + s / 2u32)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::torsion::ray_singer_torsion;

    #[test]
    fn t_ell_constant_terms() {
        for ell in -3..=5 {
            let s = t_ell_series(ell, 6).unwrap();
            assert_eq!(s.coeff(0).unwrap(), ray_singer_torsion(ell).unwrap());
            assert_eq!(s.parity(), Parity::Even);
        }
        let s = t_ell_series(-1, 4).unwrap();
        assert_eq!(
            s.coeff(0).unwrap(),
            ConstExpr::zeta_prime(1).unwrap().scale(&Rational::from(4))
        );
    }

    #[test]
    fn torsion_form_degree_zero() {
        for ell in -3..=5 {
            let f = torsion_form(ell, 8).unwrap();
            assert_eq!(f.degree_part(0).coeff(0, 0), ray_singer_torsion(ell).unwrap());
        }
        assert!(torsion_form(0, 7).is_err());
    }

    #[test]
    fn torsion_form_degree_two() {
        // degree 2 only comes from the exponential factor: −(ℓ/2)c₁·T_ℓ(0)
        let f = torsion_form(3, 8).unwrap();
        let expected = ray_singer_torsion(3).unwrap().scale(&Rational::from((-3, 2)));
        assert_eq!(f.class.coeff(1, 0), expected);
    }

    #[test]
    fn hirzebruch_degree_two_vanishes() {
        let f = torsion_form(0, 8).unwrap();
        for k in 0..4 {
            let h = hirzebruch_pullback(&f.class, k).unwrap();
            assert!(h.degree_part(2).is_zero());
        }
    }

    #[test]
    fn twist_invariance() {
        let cap = 12;
        let t = t_ell_class(2, cap).unwrap();
        let c1 = BaseClass::c1(cap).unwrap();
        let u = c1.scale_rational(&Rational::from((-2, 7)));
        let new_c1 = c1.add(&u.scale_rational(&Rational::from(2)));
        let new_c2 = BaseClass::c2(cap)
            .unwrap()
            .add(&c1.mul(&u).unwrap())
            .add(&u.mul(&u).unwrap());
        assert_eq!(t.substitute(&new_c1, &new_c2).unwrap(), t);
    }

    #[test]
    fn height_is_one_half() {
        let h = height_p1z().unwrap();
        assert_eq!(h.value, ConstExpr::rational(Rational::from((1, 2))));
        assert_eq!(
            h.r_term,
            (ConstExpr::gamma() + ConstExpr::log_t()).scale(&Rational::from((1, 2)))
        );
        assert_eq!(
            h.s_term,
            (ConstExpr::one() - ConstExpr::log_t() - ConstExpr::gamma()).scale(&Rational::from((1, 2)))
        );
        assert_eq!(h.log_t_residue, 0);
        assert_eq!(h.gamma_residue, 0);
    }

    #[test]
    fn height_numeric_is_independent_of_t() {
        let p = Precision::new(30).unwrap();
        for t in [0.5, 1.0, 2.0] {
            let v = height_numeric(&p.real(t), 1e-20, p).unwrap();
            assert!(Float::with_val(p.bits(), v - 0.5f64).abs() < 1e-15);
        }
    }

    #[test]
    fn r_class_terms() {
        let r = r_class_fixed_point(&Rational::from((1, 2)), 0).unwrap();
        assert_eq!(r.t_power, -1);
        assert_eq!(r.i_power, 3);
        assert!(r_class_fixed_point(&Rational::new(), 0).is_err());
        // log|φ| is invariant under φ ↦ −φ
        let a = r_class_fixed_point(&Rational::from(3), 2).unwrap();
        let b = r_class_fixed_point(&Rational::from(-3), 2).unwrap();
        assert_eq!(a.bracket, b.bracket);
    }
}
