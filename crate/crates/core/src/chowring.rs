//! Truncated cohomology rings: the free ring on c₁ (degree 2) and c₂
//! (degree 4) of a base B, and the ring of the ℙ¹-bundle ℙ(E) → B with the
//! extra generator x = c₁(𝒪(1)) subject to x² + c₁x + c₂ = 0. All arithmetic
//! is exact.

use std::collections::BTreeMap;
use std::fmt;

use serde_json::{json, Map, Value};

use crate::error::{arg, Error, Result};
use crate::numerics::{factorial, ConstExpr, Rational};
use crate::series::LaurentSeries;
use crate::specfun::{bernoulli, gs_r_series_in};
use crate::torsion::gs_summand_series;

/// Default cap on the total real degree.
pub const DEFAULT_DEGREE: u32 = 12;
/// Largest supported degree cap.
pub const MAX_DEGREE: u32 = 40;

fn check_degree(d: u32) -> Result<()> {
    if !d.is_multiple_of(2) || d > MAX_DEGREE {
        return arg(format!("degree cap must be even and at most {MAX_DEGREE}, got {d}"));
    }
    Ok(())
}

/// Σ coeff·c₁^a c₂^b over 2a + 4b ≤ D.
#[derive(Clone, Debug, PartialEq)]
pub struct BaseClass {
    cap: u32,
    terms: BTreeMap<(u32, u32), ConstExpr>,
}

impl BaseClass {
    pub fn zero(cap: u32) -> Result<Self> {
        check_degree(cap)?;
        Ok(BaseClass {
            cap,
            terms: BTreeMap::new(),
        })
    }

    pub fn constant(c: ConstExpr, cap: u32) -> Result<Self> {
        BaseClass::monomial(0, 0, c, cap)
    }

    pub fn one(cap: u32) -> Result<Self> {
        BaseClass::constant(ConstExpr::one(), cap)
    }

    /// coeff·c₁^a c₂^b (dropped above the cap).
    pub fn monomial(a: u32, b: u32, coeff: ConstExpr, cap: u32) -> Result<Self> {
        let mut z = BaseClass::zero(cap)?;
        z.add_term(a, b, &coeff);
        Ok(z)
    }

    pub fn c1(cap: u32) -> Result<Self> {
        BaseClass::monomial(1, 0, ConstExpr::one(), cap)
    }

    pub fn c2(cap: u32) -> Result<Self> {
        BaseClass::monomial(0, 1, ConstExpr::one(), cap)
    }

    /// c₁² − 4c₂.
    pub fn discriminant(cap: u32) -> Result<Self> {
        let mut z = BaseClass::zero(cap)?;
        z.add_term(2, 0, &ConstExpr::one());
        z.add_term(0, 1, &ConstExpr::rational(-4));
        Ok(z)
    }

    pub fn cap(&self) -> u32 {
        self.cap
    }

    fn add_term(&mut self, a: u32, b: u32, c: &ConstExpr) {
        if 2 * a + 4 * b > self.cap || c.is_zero() {
            return;
        }
        let entry = self.terms.entry((a, b)).or_insert_with(ConstExpr::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&(a, b));
        }
    }

    pub fn coeff(&self, a: u32, b: u32) -> ConstExpr {
        self.terms.get(&(a, b)).cloned().unwrap_or_else(ConstExpr::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &ConstExpr)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Lowest real degree carrying a nonzero coefficient.
    pub fn lowest_degree(&self) -> Option<u32> {
        self.terms.keys().map(|(a, b)| 2 * a + 4 * b).min()
    }

    /// The homogeneous part of real degree k.
    pub fn degree_part(&self, k: u32) -> BaseClass {
        BaseClass {
            cap: self.cap,
            terms: self
                .terms
                .iter()
                .filter(|((a, b), _)| 2 * a + 4 * b == k)
                .map(|(k, v)| (*k, v.clone()))
                .collect(),
        }
    }

    fn common_cap(&self, other: &BaseClass) -> u32 {
        self.cap.min(other.cap)
    }

    pub fn add(&self, other: &BaseClass) -> BaseClass {
        let mut z = BaseClass {
            cap: self.common_cap(other),
            terms: BTreeMap::new(),
        };
        for ((a, b), c) in self.terms.iter().chain(other.terms.iter()) {
            z.add_term(*a, *b, c);
        }
        z
    }

    pub fn neg(&self) -> BaseClass {
        BaseClass {
            cap: self.cap,
            terms: self.terms.iter().map(|(k, v)| (*k, -v.clone())).collect(),
        }
    }

    pub fn sub(&self, other: &BaseClass) -> BaseClass {
        self.add(&other.neg())
    }

    pub fn scale_rational(&self, q: &Rational) -> BaseClass {
        let mut z = BaseClass::zero(self.cap).expect("cap already validated");
        for ((a, b), c) in &self.terms {
            z.add_term(*a, *b, &c.scale(q));
        }
        z
    }

    /// Product, truncated at the smaller cap; errors on products of two
    /// transcendental coefficients.
    pub fn mul(&self, other: &BaseClass) -> Result<BaseClass> {
        let mut z = BaseClass::zero(self.common_cap(other))?;
        for ((a1, b1), c1) in &self.terms {
            for ((a2, b2), c2) in &other.terms {
                if 2 * (a1 + a2) + 4 * (b1 + b2) > z.cap {
                    continue;
                }
                z.add_term(a1 + a2, b1 + b2, &c1.checked_mul(c2)?);
            }
        }
        Ok(z)
    }

    pub fn pow(&self, k: u32) -> Result<BaseClass> {
        let mut acc = BaseClass::one(self.cap)?;
        for _ in 0..k {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Substitutes classes for c₁ and c₂ (ring homomorphism).
    pub fn substitute(&self, c1: &BaseClass, c2: &BaseClass) -> Result<BaseClass> {
        let cap = self.cap.min(c1.cap).min(c2.cap);
        let mut acc = BaseClass::zero(cap)?;
        for ((a, b), c) in &self.terms {
            let m = c1.pow(*a)?.mul(&c2.pow(*b)?)?;
            acc = acc.add(&m.mul(&BaseClass::constant(c.clone(), cap)?)?);
        }
        Ok(acc)
    }

    /// exp(λ·c₁).
    pub fn exp_c1(lambda: &Rational, cap: u32) -> Result<BaseClass> {
        let mut z = BaseClass::zero(cap)?;
        for k in 0..=cap / 2 {
            let q = Rational::from(rug::ops::Pow::pow(lambda.clone(), k)) / Rational::from(factorial(k));
            z.add_term(k, 0, &ConstExpr::rational(q));
        }
        Ok(z)
    }

    /// Σ_m a_{2m}·(−1)^m (c₁² − 4c₂)^m for an even series Σ a_{2m} t^{2m},
    /// i.e. the substitution −t² ↦ c₁² − 4c₂.
    pub fn from_even_series(s: &LaurentSeries, cap: u32) -> Result<BaseClass> {
        let mut acc = BaseClass::zero(cap)?;
        let disc = BaseClass::discriminant(cap)?;
        for (d, _) in s.nonzero_terms() {
            if d < 0 || d % 2 != 0 {
                return Err(Error::Parity { degree: d });
            }
        }
        let mut m = 0;
        while 4 * m <= cap as i32 {
            if 2 * m > s.order() {
                return arg(format!("series known through t^{} cannot fill degree {cap}", s.order()));
            }
            let c = s.coeff(2 * m)?;
            let sign = if m % 2 == 0 {
                Rational::from(1)
            } else {
                Rational::from(-1)
            };
            let term = disc.pow(m as u32)?.mul(&BaseClass::constant(c.scale(&sign), cap)?)?;
            acc = acc.add(&term);
            m += 1;
        }
        Ok(acc)
    }

    /// JSON object with monomial keys "c1^a c2^b".
    pub fn to_json(&self) -> Value {
        let mut map = Map::new();
        for ((a, b), c) in &self.terms {
            map.insert(format!("c1^{a} c2^{b}"), json!(c.to_string()));
        }
        json!({ "degree_cap": self.cap, "terms": Value::Object(map) })
    }
}

impl fmt::Display for BaseClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for ((a, b), c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})*c1^{a}*c2^{b}")?;
        }
        Ok(())
    }
}

/// The relation used to reduce x².
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    /// x² = −c₁x − c₂.
    Standard,
    /// x² = c₁x − c₂ (wrong sign, kept as a negative control).
    Flipped,
}

/// a + b·x in normal form.
#[derive(Clone, Debug, PartialEq)]
pub struct BundleClass {
    pub a: BaseClass,
    pub b: BaseClass,
    relation: Relation,
}

impl BundleClass {
    /// π*(α).
    pub fn pullback(alpha: &BaseClass, relation: Relation) -> Result<Self> {
        Ok(BundleClass {
            a: alpha.clone(),
            b: BaseClass::zero(alpha.cap.saturating_sub(2))?,
            relation,
        })
    }

    pub fn new(a: BaseClass, b: BaseClass, relation: Relation) -> Result<Self> {
        if b.cap + 2 != a.cap {
            return arg("x-coefficient must carry a degree cap two below the constant part");
        }
        Ok(BundleClass { a, b, relation })
    }

    pub fn zero(cap: u32, relation: Relation) -> Result<Self> {
        BundleClass::pullback(&BaseClass::zero(cap)?, relation)
    }

    pub fn one(cap: u32, relation: Relation) -> Result<Self> {
        BundleClass::pullback(&BaseClass::one(cap)?, relation)
    }

    /// x = c₁(𝒪(1)).
    pub fn x(cap: u32, relation: Relation) -> Result<Self> {
        BundleClass::new(BaseClass::zero(cap)?, BaseClass::one(cap - 2)?, relation)
    }

    /// c₁(Tπ) = 2x + π*c₁(E).
    pub fn c1_t_pi(cap: u32, relation: Relation) -> Result<Self> {
        BundleClass::new(
            BaseClass::c1(cap)?,
            BaseClass::constant(ConstExpr::rational(2), cap - 2)?,
            relation,
        )
    }

    pub fn cap(&self) -> u32 {
        self.a.cap
    }

    pub fn relation(&self) -> Relation {
        self.relation
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn add(&self, o: &BundleClass) -> BundleClass {
        BundleClass {
            a: self.a.add(&o.a),
            b: self.b.add(&o.b),
            relation: self.relation,
        }
    }

    pub fn sub(&self, o: &BundleClass) -> BundleClass {
        BundleClass {
            a: self.a.sub(&o.a),
            b: self.b.sub(&o.b),
            relation: self.relation,
        }
    }

    pub fn scale_rational(&self, q: &Rational) -> BundleClass {
        BundleClass {
            a: self.a.scale_rational(q),
            b: self.b.scale_rational(q),
            relation: self.relation,
        }
    }

    /// (a + bx)(c + dx) = ac + (ad + bc)x + bd·x², with x² reduced.
    pub fn mul(&self, o: &BundleClass) -> Result<BundleClass> {
        if self.relation != o.relation {
            return arg("cannot multiply classes reduced with different relations");
        }
        let cap = self.cap().min(o.cap());
        let a = self.a.mul(&o.a)?;
        let b = self.a.mul(&o.b)?.add(&self.b.mul(&o.a)?);
        let bd = self.b.mul(&o.b)?; // cap − 4 is implied by the degree filter below
        let c1 = BaseClass::c1(cap)?;
        let c2 = BaseClass::c2(cap)?;
        let x_sq_x = match self.relation {
            Relation::Standard => c1.neg(),
            Relation::Flipped => c1,
        };
        let lift = |z: &BaseClass, cap: u32| BaseClass {
            cap,
            terms: z.terms.clone(),
        };
        let bd_full = lift(&bd, cap);
        let a = lift(&a, cap).sub(&bd_full.mul(&c2)?);
        let b = lift(&b, cap - 2).add(&lift(&bd_full.mul(&x_sq_x)?, cap - 2));
        Ok(BundleClass {
            a,
            b,
            relation: self.relation,
        })
    }

    pub fn pow(&self, k: u32) -> Result<BundleClass> {
        let mut acc = BundleClass::one(self.cap(), self.relation)?;
        for _ in 0..k {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Σ_k coeffs[k]·self^k.
    pub fn compose(&self, coeffs: &[ConstExpr]) -> Result<BundleClass> {
        let cap = self.cap();
        let mut acc = BundleClass::zero(cap, self.relation)?;
        let mut pw = BundleClass::one(cap, self.relation)?;
        for c in coeffs {
            if !c.is_zero() {
                let cc = BundleClass::pullback(&BaseClass::constant(c.clone(), cap)?, self.relation)?;
                acc = acc.add(&pw.mul(&cc)?);
            }
            pw = pw.mul(self)?;
        }
        Ok(acc)
    }

    /// Homogeneous of real degree 2 (a linear combination of c₁ and x).
    pub fn is_degree_two(&self) -> bool {
        self.a.terms.keys().all(|&(a, b)| (a, b) == (1, 0)) && self.b.terms.keys().all(|&(a, b)| (a, b) == (0, 0))
    }

    pub fn to_json(&self) -> Value {
        let mut map = Map::new();
        for ((a, b), c) in &self.a.terms {
            map.insert(format!("c1^{a} c2^{b} x^0"), json!(c.to_string()));
        }
        for ((a, b), c) in &self.b.terms {
            map.insert(format!("c1^{a} c2^{b} x^1"), json!(c.to_string()));
        }
        json!({ "degree_cap": self.cap(), "terms": Value::Object(map) })
    }
}

/// Normal form of Σ_k coeffs[k]·x^k.
pub fn reduce(coeffs: &[BaseClass], cap: u32, relation: Relation) -> Result<BundleClass> {
    let x = BundleClass::x(cap, relation)?;
    let mut acc = BundleClass::zero(cap, relation)?;
    for c in coeffs.iter().rev() {
        acc = acc.mul(&x)?.add(&BundleClass::pullback(
            &BaseClass {
                cap,
                terms: c.terms.clone(),
            },
            relation,
        )?);
    }
    Ok(acc)
}

/// π_*(a + b·x) = b.
pub fn fiber_integrate(q: &BundleClass) -> BaseClass {
    q.b.clone()
}

/// Characteristic series composed with a degree-2 bundle class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CharKind {
    /// ch(𝒪(ℓ)) = exp(ℓ·x); the class argument is ignored.
    ChLine(i64),
    /// c/(1 − e^{−c}).
    ToddLine,
    /// Σ_{m odd}(2ζ′(−m) + H_mζ(−m))c^m/m!.
    GsRLine,
}

/// Coefficients of c/(1 − e^{−c}) = Σ (−1)^k B_k c^k/k! through degree n.
pub fn todd_coefficients(n: u32) -> Vec<Rational> {
    (0..=n)
        .map(|k| {
            let b = bernoulli(k);
            let sign = if k % 2 == 0 { 1 } else { -1 };
            b * sign / Rational::from(factorial(k))
        })
        .collect()
}

pub fn char_series(kind: &CharKind, c: &BundleClass) -> Result<BundleClass> {
    let cap = c.cap();
    let n = cap / 2;
    match kind {
        CharKind::ChLine(ell) => {
            let x = BundleClass::x(cap, c.relation())?;
            let coeffs: Vec<ConstExpr> = (0..=n)
                .map(|k| {
                    let q = Rational::from(rug::ops::Pow::pow(Rational::from(*ell), k)) / Rational::from(factorial(k));
                    ConstExpr::rational(q)
                })
                .collect();
            x.compose(&coeffs)
        }
        CharKind::ToddLine | CharKind::GsRLine => {
            if !c.is_degree_two() {
                return arg("characteristic series of a line bundle needs a degree-2 class");
            }
            let coeffs: Vec<ConstExpr> = match kind {
                CharKind::ToddLine => todd_coefficients(n).into_iter().map(ConstExpr::rational).collect(),
                _ => {
                    let s = gs_r_series_in("c", (n as i32).max(1))?;
                    (0..=n as i32).map(|d| s.coeff(d)).collect::<Result<_>>()?
                }
            };
            c.compose(&coeffs)
        }
    }
}

/// π_*(ch(𝒪(ℓ))·Td(Tπ)·R(Tπ)).
pub fn grr_r_term(ell: i64, cap: u32) -> Result<BaseClass> {
    grr_r_term_with(ell, cap, Relation::Standard)
}

fn grr_r_term_with(ell: i64, cap: u32, relation: Relation) -> Result<BaseClass> {
    check_degree(cap)?;
    if cap < 2 {
        return arg("degree cap must be at least 2");
    }
    // The integrand needs degree cap + 2 on the total space.
    let total = cap + 2;
    let c = BundleClass::c1_t_pi(total, relation)?;
    let ch = char_series(&CharKind::ChLine(ell), &c)?;
    let td = char_series(&CharKind::ToddLine, &c)?;
    let r = char_series(&CharKind::GsRLine, &c)?;
    let prod = ch.mul(&td)?.mul(&r)?;
    let b = fiber_integrate(&prod);
    Ok(BaseClass { cap, terms: b.terms })
}

/// e^{−ℓc₁/2}·T̃_ℓ(c₁² − 4c₂) for the Gillet–Soulé summand T̃_ℓ of the torsion form.
pub fn torsion_gs_class(ell: i64, cap: u32) -> Result<BaseClass> {
    check_degree(cap)?;
    let order = (cap / 2) as i32 + 2;
    let s = gs_summand_series(ell, order)?;
    let t = BaseClass::from_even_series(&s, cap)?;
    BaseClass::exp_c1(&Rational::from((-ell, 2)), cap)?.mul(&t)
}

/// Outcome of [`check_grr_cancellation`].
#[derive(Clone, Debug)]
pub struct GrrReport {
    pub ell: i64,
    pub cap: u32,
    pub r_term: BaseClass,
    pub torsion_part: BaseClass,
    pub residual: BaseClass,
    /// Lowest degree with a nonzero residual.
    pub offending_degree: Option<u32>,
}

impl GrrReport {
    pub fn passed(&self) -> bool {
        self.residual.is_zero()
    }
}

/// grr_r_term(ℓ, D) − e^{−ℓc₁/2}·T̃_ℓ(c₁² − 4c₂), exactly.
pub fn check_grr_cancellation(ell: i64, cap: u32) -> Result<GrrReport> {
    let r_term = grr_r_term(ell, cap)?;
    let torsion_part = torsion_gs_class(ell, cap)?;
    let residual = r_term.sub(&torsion_part);
    Ok(GrrReport {
        ell,
        cap,
        offending_degree: residual.lowest_degree(),
        r_term,
        torsion_part,
        residual,
    })
}

/// Checks π_*(c₁(Tπ)^{2m}) = 0 and π_*(c₁(Tπ)^{2m+1}) = 2(c₁² − 4c₂)^m for
/// m ≤ m_max under the given relation; returns the first failure.
pub fn check_fiber_identities(m_max: u32, cap: u32, relation: Relation) -> Result<Option<String>> {
    check_degree(cap)?;
    let total = cap + 2;
    let c = BundleClass::c1_t_pi(total, relation)?;
    let disc = BaseClass::discriminant(cap)?;
    for m in 0..=m_max {
        let even = fiber_integrate(&c.pow(2 * m)?);
        let even = BaseClass { cap, terms: even.terms };
        if !even.is_zero() {
            return Ok(Some(format!("pi_*(c1(T)^{}) = {even}, expected 0", 2 * m)));
        }
        let odd = fiber_integrate(&c.pow(2 * m + 1)?);
        let odd = BaseClass { cap, terms: odd.terms };
        let expected = disc.pow(m)?.scale_rational(&Rational::from(2));
        if odd != expected {
            return Ok(Some(format!("pi_*(c1(T)^{}) = {odd}, expected {expected}", 2 * m + 1)));
        }
    }
    Ok(None)
}

/// The GRR R-term under the flipped relation (negative control).
pub fn grr_r_term_flipped(ell: i64, cap: u32) -> Result<BaseClass> {
    grr_r_term_with(ell, cap, Relation::Flipped)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64) -> ConstExpr {
        ConstExpr::rational(n)
    }

    #[test]
    fn reduction_examples() {
        let cap = 12;
        let c1 = BaseClass::c1(cap).unwrap();
        let c2 = BaseClass::c2(cap).unwrap();
        let one = BaseClass::one(cap).unwrap();
        let zero = BaseClass::zero(cap).unwrap();
        let x2 = reduce(&[zero.clone(), zero.clone(), one.clone()], cap, Relation::Standard).unwrap();
        assert_eq!(x2.a, c2.neg());
        assert_eq!(
            BaseClass {
                cap,
                terms: x2.b.terms.clone()
            },
            c1.neg()
        );
        let x3 = reduce(
            &[zero.clone(), zero.clone(), zero.clone(), one.clone()],
            cap,
            Relation::Standard,
        )
        .unwrap();
        assert_eq!(x3.a, c1.mul(&c2).unwrap());
        let expect_b = c1.mul(&c1).unwrap().sub(&c2);
        assert_eq!(
            BaseClass {
                cap,
                terms: x3.b.terms.clone()
            },
            expect_b
        );
        // idempotence
        let again = reduce(
            &[
                x3.a.clone(),
                BaseClass {
                    cap,
                    terms: x3.b.terms.clone(),
                },
            ],
            cap,
            Relation::Standard,
        )
        .unwrap();
        assert_eq!(again, x3);
    }

    #[test]
    fn fiberwise_ring_is_h_star_p1() {
        // setting c₁ = c₂ = 0 leaves x² = 0
        let x2 = BundleClass::x(8, Relation::Standard).unwrap().pow(2).unwrap();
        let zero_c = BaseClass::zero(8).unwrap();
        let a = x2.a.substitute(&zero_c, &zero_c).unwrap();
        let b =
            x2.b.substitute(&BaseClass::zero(6).unwrap(), &BaseClass::zero(6).unwrap())
                .unwrap();
        assert!(a.is_zero() && b.is_zero());
    }

    #[test]
    fn fiber_integration_examples() {
        assert_eq!(
            fiber_integrate(&BundleClass::x(12, Relation::Standard).unwrap()),
            BaseClass::one(10).unwrap()
        );
        assert!(fiber_integrate(&BundleClass::one(12, Relation::Standard).unwrap()).is_zero());
        assert_eq!(check_fiber_identities(3, 12, Relation::Standard).unwrap(), None);
        assert!(check_fiber_identities(3, 12, Relation::Flipped).unwrap().is_some());
    }

    #[test]
    fn char_series_examples() {
        let c = BundleClass::c1_t_pi(12, Relation::Standard).unwrap();
        let td = char_series(&CharKind::ToddLine, &c).unwrap();
        assert_eq!(td.a.coeff(0, 0), q(1));
        let ch = char_series(&CharKind::ChLine(5), &c).unwrap();
        assert_eq!(ch.b.coeff(0, 0), q(5));
        // π*c₁(E) = c₁(Tπ) − 2x
        let back = c.sub(
            &BundleClass::x(12, Relation::Standard)
                .unwrap()
                .scale_rational(&Rational::from(2)),
        );
        assert_eq!(
            back,
            BundleClass::pullback(&BaseClass::c1(12).unwrap(), Relation::Standard).unwrap()
        );
        let x2 = BundleClass::x(12, Relation::Standard).unwrap().pow(2).unwrap();
        assert!(char_series(&CharKind::ToddLine, &x2).is_err());
        assert_eq!(
            todd_coefficients(2),
            vec![Rational::from(1), Rational::from((1, 2)), Rational::from((1, 12))]
        );
    }

    #[test]
    fn grr_cancellation_examples() {
        for (ell, cap) in [(0, 8), (-2, 8), (3, 12)] {
            let r = check_grr_cancellation(ell, cap).unwrap();
            assert!(
                r.passed(),
                "ell {ell}: residual {} at degree {:?}",
                r.residual,
                r.offending_degree
            );
            assert!(!r.r_term.is_zero());
        }
    }

    #[test]
    fn grr_fiberwise_slice() {
        // c₁ = c₂ = 0: only degree 0 survives and equals the scalar fiber integral
        let r = grr_r_term(2, 8).unwrap();
        let z = BaseClass::zero(8).unwrap();
        let slice = r.substitute(&z, &z).unwrap();
        assert_eq!(slice, r.degree_part(0));
    }

    #[test]
    fn flipped_relation_breaks_grr() {
        let good = grr_r_term(1, 8).unwrap();
        let bad = grr_r_term_flipped(1, 8).unwrap();
        assert_ne!(good, bad);
    }

    #[test]
    fn twist_invariance_of_discriminant() {
        // c₁ ↦ c₁ + 2u, c₂ ↦ c₂ + c₁u + u² with u = λc₁
        let cap = 12;
        let lambda = Rational::from((3, 5));
        let c1 = BaseClass::c1(cap).unwrap();
        let u = c1.scale_rational(&lambda);
        let new_c1 = c1.add(&u.scale_rational(&Rational::from(2)));
        let new_c2 = BaseClass::c2(cap)
            .unwrap()
            .add(&c1.mul(&u).unwrap())
            .add(&u.mul(&u).unwrap());
        let d = BaseClass::discriminant(cap).unwrap();
        assert_eq!(d.substitute(&new_c1, &new_c2).unwrap(), d);
    }

    fn arb_base(cap: u32) -> impl Strategy<Value = BaseClass> {
        proptest::collection::vec((0u32..4, 0u32..3, -5i64..6), 0..6).prop_map(move |v| {
            let mut z = BaseClass::zero(cap).unwrap();
            for (a, b, c) in v {
                z.add_term(a, b, &q(c));
            }
            z
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]
        #[test]
        fn projection_formula(alpha in arb_base(12), qa in arb_base(12), qb in arb_base(10)) {
            let qc = BundleClass::new(qa, qb, Relation::Standard).unwrap();
            let lhs = fiber_integrate(&BundleClass::pullback(&alpha, Relation::Standard).unwrap().mul(&qc).unwrap());
            let rhs = alpha.mul(&fiber_integrate(&qc)).unwrap();
            prop_assert_eq!(lhs, BaseClass { cap: 10, terms: rhs.terms });
        }

        #[test]
        fn bundle_ring_associative(a1 in arb_base(10), b1 in arb_base(8), a2 in arb_base(10), b2 in arb_base(8)) {
            let p = BundleClass::new(a1, b1, Relation::Standard).unwrap();
            let r = BundleClass::new(a2, b2, Relation::Standard).unwrap();
            let x = BundleClass::x(10, Relation::Standard).unwrap();
            prop_assert_eq!(p.mul(&r).unwrap().mul(&x).unwrap(), p.mul(&r.mul(&x).unwrap()).unwrap());
        }
    }
}
