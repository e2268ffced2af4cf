//! Exact Q-linear combinations of a fixed basis of transcendental constants.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use rug::Float;
use serde::{Deserialize, Serialize};

use super::{format_rational, parse_rational, Precision, Rational};
use crate::error::{arg, Error, Result};
use crate::specfun;

/// A basis symbol. The derived ordering is the canonical summation order.
///
/// `Log(p)` only ever holds a prime: logarithms of composite integers are
/// expanded into prime logarithms, which are linearly independent over Q, so
/// that equality of expressions is equality of coefficient maps.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ConstSymbol {
    /// The unit 1.
    One,
    /// Euler's constant γ = −Γ′(1).
    Gamma,
    /// ζ′(−m) for odd m ≥ 1.
    ZetaPrime(u32),
    /// log p for a prime p.
    Log(u64),
    /// The formal symbol log t.
    LogT,
}

impl ConstSymbol {
    /// Serialization tag, e.g. `ZETA_PRIME(-1)`.
    pub fn tag(&self) -> String {
        match self {
            ConstSymbol::One => "ONE".into(),
            ConstSymbol::Gamma => "GAMMA".into(),
            ConstSymbol::ZetaPrime(m) => format!("ZETA_PRIME(-{m})"),
            ConstSymbol::Log(p) => format!("LOG({p})"),
            ConstSymbol::LogT => "LOG_T".into(),
        }
    }

    /// Parses a serialization tag. `LOG(n)` must name a prime.
    pub fn from_tag(tag: &str) -> Result<Self> {
        let tag = tag.trim();
        let inner = |prefix: &str| -> Option<&str> { tag.strip_prefix(prefix).and_then(|r| r.strip_suffix(')')) };
        match tag {
            "ONE" => return Ok(ConstSymbol::One),
            "GAMMA" => return Ok(ConstSymbol::Gamma),
            "LOG_T" => return Ok(ConstSymbol::LogT),
            _ => {}
        }
        if let Some(m) = inner("ZETA_PRIME(-") {
            let m: u32 = m.parse().map_err(|_| bad_tag(tag))?;
            if m.is_multiple_of(2) {
                return arg(format!("ZETA_PRIME needs odd m, got {m}"));
            }
            return Ok(ConstSymbol::ZetaPrime(m));
        }
        if let Some(n) = inner("LOG(") {
            let n: u64 = n.parse().map_err(|_| bad_tag(tag))?;
            if !is_prime(n) {
                return arg(format!("LOG tag must name a prime, got {n}"));
            }
            return Ok(ConstSymbol::Log(n));
        }
        Err(bad_tag(tag))
    }

    fn display_name(&self) -> String {
        match self {
            ConstSymbol::One => "1".into(),
            ConstSymbol::Gamma => "gamma".into(),
            ConstSymbol::ZetaPrime(m) => format!("zeta'(-{m})"),
            ConstSymbol::Log(p) => format!("log({p})"),
            ConstSymbol::LogT => "log(t)".into(),
        }
    }
}

fn bad_tag(tag: &str) -> Error {
    Error::Argument(format!("unknown constant symbol '{tag}'"))
}

fn is_prime(n: u64) -> bool {
    n >= 2 && factorize(n).len() == 1 && factorize(n)[0].1 == 1
}

/// Prime factorization by trial division; fine for the small integers that
/// occur as log arguments.
fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        let mut e = 0;
        while n.is_multiple_of(p) {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Finite Q-linear combination of [`ConstSymbol`]s with no zero coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "ConstExprJson", into = "ConstExprJson")]
pub struct ConstExpr {
    terms: BTreeMap<ConstSymbol, Rational>,
}

impl ConstExpr {
    pub fn zero() -> Self {
        ConstExpr::default()
    }

    pub fn one() -> Self {
        ConstExpr::rational(1)
    }

    pub fn rational<Q: Into<Rational>>(q: Q) -> Self {
        ConstExpr::term(ConstSymbol::One, q)
    }

    /// `coeff · symbol`. `Log` symbols must be prime; use [`ConstExpr::log`] otherwise.
    pub fn term<Q: Into<Rational>>(symbol: ConstSymbol, coeff: Q) -> Self {
        let mut e = ConstExpr::zero();
        e.add_term(symbol, &coeff.into());
        e
    }

    pub fn gamma() -> Self {
        ConstExpr::term(ConstSymbol::Gamma, 1)
    }

    pub fn log_t() -> Self {
        ConstExpr::term(ConstSymbol::LogT, 1)
    }

    /// ζ′(−m) for odd m ≥ 1.
    pub fn zeta_prime(m: u32) -> Result<Self> {
        if m == 0 || m.is_multiple_of(2) {
            return arg(format!("zeta'(-m) symbol requires odd m >= 1, got {m}"));
        }
        Ok(ConstExpr::term(ConstSymbol::ZetaPrime(m), 1))
    }

    /// log n for an integer n ≥ 1, expanded over primes (log 1 = 0).
    pub fn log(n: u64) -> Result<Self> {
        if n == 0 {
            return arg("log(0) is undefined");
        }
        let mut e = ConstExpr::zero();
        for (p, k) in factorize(n) {
            e.add_term(ConstSymbol::Log(p), &Rational::from(k));
        }
        Ok(e)
    }

    /// log q for a positive rational q.
    pub fn log_rational(q: &Rational) -> Result<Self> {
        if *q <= 0 {
            return arg("log of a nonpositive rational");
        }
        let num = q
            .numer()
            .to_u64()
            .ok_or_else(|| Error::Argument("numerator too large for log".into()))?;
        let den = q
            .denom()
            .to_u64()
            .ok_or_else(|| Error::Argument("denominator too large for log".into()))?;
        Ok(ConstExpr::log(num)? - ConstExpr::log(den)?)
    }

    /// Adds `coeff · symbol` in place, dropping the entry if it cancels.
    pub fn add_term(&mut self, symbol: ConstSymbol, coeff: &Rational) {
        if *coeff == 0 {
            return;
        }
        let entry = self.terms.entry(symbol).or_default();
        *entry += coeff;
        if *entry == 0 {
            self.terms.remove(&symbol);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The value if the expression is a pure rational number.
    pub fn as_rational(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::new()),
            1 => self.terms.get(&ConstSymbol::One).cloned(),
            _ => None,
        }
    }

    pub fn is_rational(&self) -> bool {
        self.as_rational().is_some()
    }

    /// Coefficient of `symbol` (zero if absent).
    pub fn coeff(&self, symbol: ConstSymbol) -> Rational {
        self.terms.get(&symbol).cloned().unwrap_or_default()
    }

    /// Terms in canonical symbol order.
    pub fn terms(&self) -> impl Iterator<Item = (&ConstSymbol, &Rational)> {
        self.terms.iter()
    }

    pub fn contains(&self, symbol: ConstSymbol) -> bool {
        self.terms.contains_key(&symbol)
    }

    pub fn scale(&self, q: &Rational) -> ConstExpr {
        if *q == 0 {
            return ConstExpr::zero();
        }
        ConstExpr {
            terms: self.terms.iter().map(|(s, c)| (*s, Rational::from(c * q))).collect(),
        }
    }

    /// Product of two expressions; at least one factor must be rational.
    pub fn checked_mul(&self, other: &ConstExpr) -> Result<ConstExpr> {
        if let Some(q) = self.as_rational() {
            return Ok(other.scale(&q));
        }
        if let Some(q) = other.as_rational() {
            return Ok(self.scale(&q));
        }
        Err(Error::NonRationalProduct(self.to_string(), other.to_string()))
    }

    /// Numeric value at `prec`; `log_t` must be supplied if LOG_T occurs.
    pub fn eval(&self, prec: Precision, log_t: Option<&Float>) -> Result<Float> {
        let bits = prec.bits();
        let mut acc = Float::new(bits);
        for (sym, c) in &self.terms {
            let v = match sym {
                ConstSymbol::One => Float::with_val(bits, 1),
                ConstSymbol::Gamma => prec.euler_gamma(),
                ConstSymbol::ZetaPrime(m) => specfun::zeta_prime_neg(*m, prec)?,
                ConstSymbol::Log(p) => Float::with_val(bits, *p).ln(),
                ConstSymbol::LogT => match log_t {
                    Some(l) => Float::with_val(bits, l),
                    None => {
                        return Err(Error::Evaluation(
                            "expression contains log(t) but no value for log t was supplied".into(),
                        ))
                    }
                },
            };
            acc += v * c;
        }
        Ok(acc)
    }
}

/// Numeric value of `e`; free-function form of [`ConstExpr::eval`].
pub fn eval_const(e: &ConstExpr, prec: Precision, log_t: Option<&Float>) -> Result<Float> {
    e.eval(prec, log_t)
}

impl From<i64> for ConstExpr {
    fn from(v: i64) -> Self {
        ConstExpr::rational(v)
    }
}

impl From<Rational> for ConstExpr {
    fn from(q: Rational) -> Self {
        ConstExpr::rational(q)
    }
}

impl From<&Rational> for ConstExpr {
    fn from(q: &Rational) -> Self {
        ConstExpr::rational(q.clone())
    }
}

impl AddAssign<&ConstExpr> for ConstExpr {
    fn add_assign(&mut self, rhs: &ConstExpr) {
        for (s, c) in &rhs.terms {
            self.add_term(*s, c);
        }
    }
}

impl SubAssign<&ConstExpr> for ConstExpr {
    fn sub_assign(&mut self, rhs: &ConstExpr) {
        for (s, c) in &rhs.terms {
            self.add_term(*s, &Rational::from(-c));
        }
    }
}

impl Add<&ConstExpr> for &ConstExpr {
    type Output = ConstExpr;
    fn add(self, rhs: &ConstExpr) -> ConstExpr {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub<&ConstExpr> for &ConstExpr {
    type Output = ConstExpr;
    fn sub(self, rhs: &ConstExpr) -> ConstExpr {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Add for ConstExpr {
    type Output = ConstExpr;
    fn add(mut self, rhs: ConstExpr) -> ConstExpr {
        self += &rhs;
        self
    }
}

impl Sub for ConstExpr {
    type Output = ConstExpr;
    fn sub(mut self, rhs: ConstExpr) -> ConstExpr {
        self -= &rhs;
        self
    }
}

impl Neg for &ConstExpr {
    type Output = ConstExpr;
    fn neg(self) -> ConstExpr {
        self.scale(&Rational::from(-1))
    }
}

impl Neg for ConstExpr {
    type Output = ConstExpr;
    fn neg(self) -> ConstExpr {
        -&self
    }
}

impl Mul<&Rational> for &ConstExpr {
    type Output = ConstExpr;
    fn mul(self, rhs: &Rational) -> ConstExpr {
        self.scale(rhs)
    }
}

impl fmt::Display for ConstExpr {
    /// Human-readable form, e.g. `4*zeta'(-1) - 1/2*log(2)`; zero prints as `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (sym, c)) in self.terms.iter().enumerate() {
            let neg = *c < 0;
            let mag = Rational::from(c.abs_ref());
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            match sym {
                ConstSymbol::One => write!(f, "{}", format_rational(&mag))?,
                _ if mag == 1 => write!(f, "{}", sym.display_name())?,
                _ => write!(f, "{}*{}", format_rational(&mag), sym.display_name())?,
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    symbol: String,
    num: String,
    den: String,
}

#[derive(Serialize, Deserialize)]
struct ConstExprJson {
    terms: Vec<TermJson>,
}

impl From<ConstExpr> for ConstExprJson {
    fn from(e: ConstExpr) -> Self {
        ConstExprJson {
            terms: e
                .terms
                .iter()
                .map(|(s, c)| TermJson {
                    symbol: s.tag(),
                    num: c.numer().to_string(),
                    den: c.denom().to_string(),
                })
                .collect(),
        }
    }
}

impl TryFrom<ConstExprJson> for ConstExpr {
    type Error = Error;
    fn try_from(j: ConstExprJson) -> Result<Self> {
        let mut e = ConstExpr::zero();
        for t in j.terms {
            let sym = ConstSymbol::from_tag(&t.symbol)?;
            let q = parse_rational(&format!("{}/{}", t.num, t.den))?;
            e.add_term(sym, &q);
        }
        Ok(e)
    }
}

/// Small helper for building rationals from integer pairs.
#[cfg(test)]
pub(crate) fn q(n: i64, d: i64) -> Rational {
    Rational::from((rug::Integer::from(n), rug::Integer::from(d)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sym_strategy() -> impl Strategy<Value = ConstSymbol> {
        prop_oneof![
            Just(ConstSymbol::One),
            Just(ConstSymbol::Gamma),
            (0u32..4).prop_map(|k| ConstSymbol::ZetaPrime(2 * k + 1)),
            prop_oneof![Just(2u64), Just(3), Just(5), Just(7)].prop_map(ConstSymbol::Log),
            Just(ConstSymbol::LogT),
        ]
    }

    fn expr_strategy() -> impl Strategy<Value = ConstExpr> {
        proptest::collection::vec((sym_strategy(), -50i64..50, 1i64..20), 0..6).prop_map(|v| {
            let mut e = ConstExpr::zero();
            for (s, n, d) in v {
                e.add_term(s, &q(n, d));
            }
            e
        })
    }

    proptest! {
        #[test]
        fn addition_is_associative(a in expr_strategy(), b in expr_strategy(), c in expr_strategy()) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        }

        #[test]
        fn no_zero_coefficients_stored(a in expr_strategy(), b in expr_strategy()) {
            let d = &(&a + &b) - &b;
            prop_assert!(d.terms().all(|(_, c)| *c != 0));
            prop_assert_eq!(d, a);
        }

        #[test]
        fn evaluation_is_linear(a in expr_strategy(), b in expr_strategy(),
                                an in -9i64..9, ad in 1i64..9, bn in -9i64..9, bd in 1i64..9) {
            let prec = Precision::new(30).unwrap();
            let lt = prec.real(0.3);
            let (alpha, beta) = (q(an, ad), q(bn, bd));
            let combo = &a.scale(&alpha) + &b.scale(&beta);
            let lhs = combo.eval(prec, Some(&lt)).unwrap();
            let rhs = a.eval(prec, Some(&lt)).unwrap() * &alpha + b.eval(prec, Some(&lt)).unwrap() * &beta;
            let diff = (lhs - rhs).abs();
            prop_assert!(diff < crate::numerics::pow10(1 - 30, prec.bits()));
        }

        #[test]
        fn json_round_trip(a in expr_strategy()) {
            let s = serde_json::to_string(&a).unwrap();
            let back: ConstExpr = serde_json::from_str(&s).unwrap();
            prop_assert_eq!(back, a);
        }
    }

    #[test]
    fn evaluation_examples() {
        let prec = Precision::default();
        let half = ConstExpr::rational(q(1, 2)).eval(prec, None).unwrap();
        assert_eq!(half, 0.5);
        let g = ConstExpr::gamma().eval(prec, None).unwrap();
        assert!((g.to_f64() - 0.577_215_664_901_532_9).abs() < 1e-15);
        let z = ConstExpr::zeta_prime(1).unwrap().eval(prec, None).unwrap();
        assert!((z.to_f64() + 0.165_421_143_700_450_93).abs() < 1e-15);
        assert!(ConstExpr::log_t().eval(prec, None).is_err());
    }

    #[test]
    fn logs_are_canonicalized_over_primes() {
        let l12 = ConstExpr::log(12).unwrap();
        let expected = ConstExpr::term(ConstSymbol::Log(2), 2) + ConstExpr::term(ConstSymbol::Log(3), 1);
        assert_eq!(l12, expected);
        assert!(ConstExpr::log(1).unwrap().is_zero());
        let l = ConstExpr::log_rational(&q(3, 4)).unwrap();
        assert_eq!(l.to_string(), "-2*log(2) + log(3)");
    }

    #[test]
    fn display_and_json_format() {
        let e = ConstExpr::zeta_prime(1).unwrap().scale(&q(4, 1));
        assert_eq!(e.to_string(), "4*zeta'(-1)");
        let e2 = &e - &ConstExpr::rational(q(1, 2));
        assert_eq!(e2.to_string(), "-1/2 + 4*zeta'(-1)");
        let json = serde_json::to_string(&ConstExpr::zeta_prime(1).unwrap().scale(&q(-2, 1))).unwrap();
        assert_eq!(json, r#"{"terms":[{"symbol":"ZETA_PRIME(-1)","num":"-2","den":"1"}]}"#);
        assert_eq!(ConstExpr::zero().to_string(), "0");
    }

    #[test]
    fn nonrational_products_are_rejected() {
        let g = ConstExpr::gamma();
        assert!(g.checked_mul(&ConstExpr::log_t()).is_err());
        assert_eq!(g.checked_mul(&ConstExpr::rational(3)).unwrap(), g.scale(&q(3, 1)));
    }

    #[test]
    fn tags_parse() {
        for s in ["ONE", "GAMMA", "ZETA_PRIME(-3)", "LOG(7)", "LOG_T"] {
            assert_eq!(ConstSymbol::from_tag(s).unwrap().tag(), s);
        }
        assert!(ConstSymbol::from_tag("LOG(4)").is_err());
        assert!(ConstSymbol::from_tag("ZETA_PRIME(-2)").is_err());
    }
}
