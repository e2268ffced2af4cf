//! Truncated Laurent series in one variable with symbolic-constant
//! coefficients, elementary builders, and the harmonic-weight operators
//! ★ (star) and # (hash).

use std::fmt;

use rug::Float;
use serde_json::{json, Value};

use crate::error::{arg, Error, Result};
use crate::numerics::{factorial, format_real, harmonic_u, ConstExpr, ConstSymbol, Precision, Rational};

/// Most negative degree a series may carry.
pub const MIN_DEGREE_CAP: i32 = -2;

/// Default truncation order for assembled series.
pub const DEFAULT_ORDER: i32 = 40;

/// Parity metadata carried alongside the coefficients.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
    Mixed,
}

impl Parity {
    fn add(self, other: Parity) -> Parity {
        if self == other {
            self
        } else {
            Parity::Mixed
        }
    }

    fn mul(self, other: Parity) -> Parity {
        match (self, other) {
            (Parity::Mixed, _) | (_, Parity::Mixed) => Parity::Mixed,
            (a, b) if a == b => Parity::Even,
            _ => Parity::Odd,
        }
    }

    fn admits(self, degree: i32) -> bool {
        match self {
            Parity::Even => degree % 2 == 0,
            Parity::Odd => degree % 2 != 0,
            Parity::Mixed => true,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
            Parity::Mixed => "mixed",
        }
    }
}

/// Building blocks accepted by [`build`].
#[derive(Clone, Debug, PartialEq)]
pub enum SeriesKind {
    /// cos(a·t).
    CosScaled(Rational),
    /// sin(a·t).
    SinScaled(Rational),
    /// 1/sin(t/2).
    InvSinHalf,
    /// exp(a·t).
    ExpScaled(Rational),
    /// A constant.
    Const(ConstExpr),
}

/// Σ_{m₀ ≤ m ≤ N} a_m v^m, known exactly through degree N.
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentSeries {
    var: String,
    min_degree: i32,
    order: i32,
    coeffs: Vec<ConstExpr>,
    parity: Parity,
}

impl LaurentSeries {
    /// Series with explicit coefficients for degrees `min_degree ..= order`.
    pub fn new(var: &str, min_degree: i32, order: i32, coeffs: Vec<ConstExpr>, parity: Parity) -> Result<Self> {
        if min_degree < MIN_DEGREE_CAP {
            return arg(format!("min_degree {min_degree} below the cap {MIN_DEGREE_CAP}"));
        }
        if order < min_degree {
            return arg(format!("order {order} below min_degree {min_degree}"));
        }
        if coeffs.len() != (order - min_degree + 1) as usize {
            return arg("coefficient count does not match the degree range");
        }
        let s = LaurentSeries {
            var: var.to_string(),
            min_degree,
            order,
            coeffs,
            parity,
        };
        s.check_parity(parity)?;
        Ok(s)
    }

    /// Builds coefficients from a closure over the degree.
    pub fn from_fn<F>(var: &str, min_degree: i32, order: i32, parity: Parity, mut f: F) -> Result<Self>
    where
        F: FnMut(i32) -> Result<ConstExpr>,
    {
        let mut coeffs = Vec::with_capacity((order - min_degree + 1).max(0) as usize);
        for d in min_degree..=order {
            coeffs.push(if parity.admits(d) { f(d)? } else { ConstExpr::zero() });
        }
        LaurentSeries::new(var, min_degree, order, coeffs, parity)
    }

    pub fn zero(var: &str, min_degree: i32, order: i32) -> Result<Self> {
        LaurentSeries::from_fn(var, min_degree, order, Parity::Even, |_| Ok(ConstExpr::zero()))
    }

    /// c·v^degree, known through `order`.
    pub fn monomial(var: &str, degree: i32, coeff: ConstExpr, order: i32) -> Result<Self> {
        let parity = if degree % 2 == 0 { Parity::Even } else { Parity::Odd };
        LaurentSeries::from_fn(var, degree.min(order), order, parity, |d| {
            Ok(if d == degree { coeff.clone() } else { ConstExpr::zero() })
        })
    }

    /// Even polynomial Σ c_k v^{2k} with rational coefficients, exact through its degree.
    pub fn even_polynomial(var: &str, coeffs: &[Rational]) -> Result<Self> {
        let order = 2 * (coeffs.len().max(1) as i32 - 1);
        LaurentSeries::from_fn(var, 0, order, Parity::Even, |d| {
            Ok(coeffs
                .get((d / 2) as usize)
                .map(|c| ConstExpr::rational(c.clone()))
                .unwrap_or_default())
        })
    }

    pub fn var(&self) -> &str {
        &self.var
    }

    pub fn min_degree(&self) -> i32 {
        self.min_degree
    }

    pub fn order(&self) -> i32 {
        self.order
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    /// Coefficient of v^degree. Degrees below `min_degree` are zero; degrees
    /// above the truncation order are unknown and rejected.
    pub fn coeff(&self, degree: i32) -> Result<ConstExpr> {
        if degree > self.order {
            return arg(format!(
                "degree {degree} beyond truncation order {} of the series",
                self.order
            ));
        }
        if degree < self.min_degree {
            return Ok(ConstExpr::zero());
        }
        Ok(self.coeffs[(degree - self.min_degree) as usize].clone())
    }

    fn c(&self, degree: i32) -> &ConstExpr {
        &self.coeffs[(degree - self.min_degree) as usize]
    }

    /// (degree, coefficient) pairs with nonzero coefficient, ascending.
    pub fn nonzero_terms(&self) -> impl Iterator<Item = (i32, &ConstExpr)> {
        let m0 = self.min_degree;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (m0 + i as i32, c))
    }

    /// Verifies that the coefficients conform to `parity`.
    pub fn check_parity(&self, parity: Parity) -> Result<()> {
        for (d, _) in self.nonzero_terms() {
            if !parity.admits(d) {
                return Err(Error::Parity { degree: d });
            }
        }
        Ok(())
    }

    /// Parity determined from the data rather than the metadata.
    pub fn observed_parity(&self) -> Parity {
        let mut even = false;
        let mut odd = false;
        for (d, _) in self.nonzero_terms() {
            if d % 2 == 0 {
                even = true
            } else {
                odd = true
            }
        }
        match (even, odd) {
            (_, false) => Parity::Even,
            (false, true) => Parity::Odd,
            _ => Parity::Mixed,
        }
    }

    /// Replaces the parity flag after verifying the data conforms.
    pub fn with_parity(mut self, parity: Parity) -> Result<Self> {
        self.check_parity(parity)?;
        self.parity = parity;
        Ok(self)
    }

    /// True if any coefficient involves the formal symbol log t.
    pub fn has_log_t(&self) -> bool {
        self.coeffs.iter().any(|c| c.contains(ConstSymbol::LogT))
    }

    /// Drops vanishing leading coefficients (never past the order).
    pub fn trimmed(&self) -> LaurentSeries {
        let mut m0 = self.min_degree;
        while m0 < self.order && self.c(m0).is_zero() {
            m0 += 1;
        }
        self.restricted(m0, self.order)
    }

    /// Lowers the truncation order to `order`.
    pub fn truncated(&self, order: i32) -> Result<LaurentSeries> {
        if order > self.order {
            return arg(format!("cannot raise truncation order {} to {order}", self.order));
        }
        if order < self.min_degree {
            return arg("truncation below the minimal degree");
        }
        Ok(self.restricted(self.min_degree, order))
    }

    /// Re-labels the series with another variable name.
    pub fn renamed(mut self, var: &str) -> LaurentSeries {
        self.var = var.to_string();
        self
    }

    fn restricted(&self, m0: i32, order: i32) -> LaurentSeries {
        let lo = (m0 - self.min_degree) as usize;
        let hi = (order - self.min_degree) as usize;
        LaurentSeries {
            var: self.var.clone(),
            min_degree: m0,
            order,
            coeffs: self.coeffs[lo..=hi].to_vec(),
            parity: self.parity,
        }
    }

    fn check_var(&self, other: &LaurentSeries) -> Result<()> {
        if self.var != other.var {
            return arg(format!("series variables differ: {} vs {}", self.var, other.var));
        }
        Ok(())
    }

    pub fn add(&self, other: &LaurentSeries) -> Result<LaurentSeries> {
        self.combine(other, false)
    }

    pub fn sub(&self, other: &LaurentSeries) -> Result<LaurentSeries> {
        self.combine(other, true)
    }

    fn combine(&self, other: &LaurentSeries, subtract: bool) -> Result<LaurentSeries> {
        self.check_var(other)?;
        let m0 = self.min_degree.min(other.min_degree);
        let order = self.order.min(other.order);
        if order < m0 {
            return arg("sum of series with disjoint degree ranges");
        }
        let mut coeffs = Vec::with_capacity((order - m0 + 1) as usize);
        for d in m0..=order {
            let mut c = self.coeff(d)?;
            let o = other.coeff(d)?;
            if subtract {
                c -= &o;
            } else {
                c += &o;
            }
            coeffs.push(c);
        }
        Ok(LaurentSeries {
            var: self.var.clone(),
            min_degree: m0,
            order,
            coeffs,
            parity: self.parity.add(other.parity),
        })
    }

    pub fn neg(&self) -> LaurentSeries {
        self.map_coeffs(|c| -c)
    }

    pub fn scale_rational(&self, q: &Rational) -> LaurentSeries {
        self.map_coeffs(|c| c.scale(q))
    }

    /// Multiplies every coefficient by the constant `e`.
    pub fn scale(&self, e: &ConstExpr) -> Result<LaurentSeries> {
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            coeffs.push(c.checked_mul(e)?);
        }
        Ok(LaurentSeries { coeffs, ..self.clone() })
    }

    fn map_coeffs<F: Fn(&ConstExpr) -> ConstExpr>(&self, f: F) -> LaurentSeries {
        LaurentSeries {
            coeffs: self.coeffs.iter().map(f).collect(),
            ..self.clone()
        }
    }

    /// Multiplication by v^k.
    pub fn shifted(&self, k: i32) -> Result<LaurentSeries> {
        let parity = if k % 2 == 0 {
            self.parity
        } else {
            match self.parity {
                Parity::Even => Parity::Odd,
                Parity::Odd => Parity::Even,
                Parity::Mixed => Parity::Mixed,
            }
        };
        LaurentSeries::new(
            &self.var,
            self.min_degree + k,
            self.order + k,
            self.coeffs.clone(),
            parity,
        )
    }

    /// Product; valid through min(N₁ + m₂, N₂ + m₁) where m are the true
    /// leading degrees of the factors.
    pub fn mul(&self, other: &LaurentSeries) -> Result<LaurentSeries> {
        self.check_var(other)?;
        let a = self.trimmed();
        let b = other.trimmed();
        let m0 = a.min_degree + b.min_degree;
        let order = (a.order + b.min_degree).min(b.order + a.min_degree);
        if m0 < MIN_DEGREE_CAP {
            return arg(format!("product would have a pole of order {}", -m0));
        }
        let mut coeffs = vec![ConstExpr::zero(); (order - m0 + 1).max(0) as usize];
        for (i, ca) in a.coeffs.iter().enumerate() {
            if ca.is_zero() {
                continue;
            }
            let da = a.min_degree + i as i32;
            for (j, cb) in b.coeffs.iter().enumerate() {
                let d = da + b.min_degree + j as i32;
                if d > order {
                    break;
                }
                if cb.is_zero() {
                    continue;
                }
                coeffs[(d - m0) as usize] += &ca.checked_mul(cb)?;
            }
        }
        Ok(LaurentSeries {
            var: self.var.clone(),
            min_degree: m0,
            order,
            coeffs,
            parity: self.parity.mul(other.parity),
        })
    }

    /// Reciprocal of a series with rational coefficients and nonzero leading
    /// term; the result v^{-m₀}/(…) is valid through N − 2m₀.
    pub fn inverse(&self) -> Result<LaurentSeries> {
        let s = self.trimmed();
        let lead = s.c(s.min_degree).clone();
        if lead.is_zero() {
            return Err(Error::Singularity("series is identically zero to its order".into()));
        }
        let mut u = Vec::with_capacity(s.coeffs.len());
        for c in &s.coeffs {
            u.push(
                c.as_rational().ok_or_else(|| {
                    Error::Singularity("only series with rational coefficients can be inverted".into())
                })?,
            );
        }
        let m0 = s.min_degree;
        let len = (s.order - m0 + 1) as usize;
        let a0 = u[0].clone();
        let mut inv: Vec<Rational> = Vec::with_capacity(len);
        inv.push(Rational::from(a0.recip_ref()));
        for k in 1..len {
            let mut acc = Rational::new();
            for j in 1..=k {
                acc += Rational::from(&u[j] * &inv[k - j]);
            }
            inv.push(Rational::from(-acc / &a0));
        }
        let min_degree = -m0;
        let order = s.order - 2 * m0;
        LaurentSeries::new(
            &self.var,
            min_degree,
            order,
            inv.into_iter().map(ConstExpr::rational).collect(),
            self.parity,
        )
    }

    /// Σ eval(a_m)·t^m at a numeric point.
    pub fn evaluate(&self, t: &Float, log_t: Option<&Float>, prec: Precision) -> Result<Float> {
        let bits = prec.bits();
        let mut acc = Float::new(bits);
        for (d, c) in self.nonzero_terms() {
            if d < 0 && t.is_zero() {
                return Err(Error::Evaluation("series with a pole evaluated at 0".into()));
            }
            let v = c.eval(prec, log_t)?;
            let p = Float::with_val(bits, rug::ops::Pow::pow(Float::with_val(bits, t), d));
            acc += v * p;
        }
        Ok(acc)
    }

    /// JSON form; coefficients free of log t also carry a numeric value.
    pub fn to_json(&self, prec: Option<Precision>) -> Value {
        let coeffs: Vec<Value> = (self.min_degree..=self.order)
            .map(|d| {
                let c = self.c(d);
                let numeric = match prec {
                    Some(p) if !c.contains(ConstSymbol::LogT) => c
                        .eval(p, None)
                        .map(|v| Value::String(format_real(&v, p.digits())))
                        .unwrap_or(Value::Null),
                    _ => Value::Null,
                };
                json!({
                    "deg": d,
                    "expr": serde_json::to_value(c).unwrap_or(Value::Null),
                    "display": c.to_string(),
                    "numeric": numeric,
                })
            })
            .collect();
        json!({
            "var": self.var,
            "min_degree": self.min_degree,
            "order": self.order,
            "parity": self.parity.name(),
            "coeffs": coeffs,
        })
    }
}

impl fmt::Display for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (d, c) in self.nonzero_terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match d {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})*{}", self.var)?,
                _ => write!(f, "({c})*{}^{d}", self.var)?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O({}^{})", self.var, self.order + 1)
    }
}

/// Elementary series in the variable `t`; see [`build_in`].
pub fn build(kind: &SeriesKind, order: i32) -> Result<LaurentSeries> {
    build_in("t", kind, order)
}

/// Exact Taylor/Laurent expansion of an elementary building block, valid
/// through degree `order`.
pub fn build_in(var: &str, kind: &SeriesKind, order: i32) -> Result<LaurentSeries> {
    if order < 2 {
        return arg(format!("series order must be at least 2, got {order}"));
    }
    match kind {
        SeriesKind::CosScaled(a) => LaurentSeries::from_fn(var, 0, order, Parity::Even, |d| {
            let k = d / 2;
            let sign = if k % 2 == 0 { 1 } else { -1 };
            Ok(ConstExpr::rational(taylor_coeff(a, d as u32) * sign))
        }),
        SeriesKind::SinScaled(a) => LaurentSeries::from_fn(var, 0, order, Parity::Odd, |d| {
            let k = (d - 1) / 2;
            let sign = if k % 2 == 0 { 1 } else { -1 };
            Ok(ConstExpr::rational(taylor_coeff(a, d as u32) * sign))
        }),
        SeriesKind::ExpScaled(a) => LaurentSeries::from_fn(var, 0, order, Parity::Mixed, |d| {
            Ok(ConstExpr::rational(taylor_coeff(a, d as u32)))
        }),
        SeriesKind::InvSinHalf => {
            let s = build_in(var, &SeriesKind::SinScaled(Rational::from((1, 2))), order + 2)?;
            s.inverse()
        }
        SeriesKind::Const(c) => {
            let parity = Parity::Even;
            LaurentSeries::from_fn(var, 0, order, parity, |d| {
                Ok(if d == 0 { c.clone() } else { ConstExpr::zero() })
            })
        }
    }
}

/// a^d / d!.
fn taylor_coeff(a: &Rational, d: u32) -> Rational {
    let p = Rational::from(rug::ops::Pow::pow(a.clone(), d));
    p / Rational::from(factorial(d))
}

/// The ★ weight 2H_{2m+1} − H_m.
pub fn star_weight(m: u32) -> Rational {
    let m = m as usize;
    Rational::from(harmonic_u(2 * m + 1) * 2u32) - harmonic_u(m)
}

/// The # weight 2H_{2m−1} − H_{m−1} (m ≥ 1), equal to ∫_{−1}^{1}(1−r^{2m})dr/(1−r²).
pub fn hash_weight(m: u32) -> Rational {
    debug_assert!(m >= 1);
    star_weight(m - 1)
}

/// The ★ operator: a_{2m}t^{2m} ↦ a_{2m}(2H_{2m+1} − H_m)t^{2m} for m ≥ 0,
/// with the t^{−2} coefficient sent to 0.
pub fn star(phi: &LaurentSeries) -> Result<LaurentSeries> {
    phi.check_parity(Parity::Even)?;
    if phi.min_degree < MIN_DEGREE_CAP {
        return arg("star expects min_degree >= -2");
    }
    if phi.order < 0 {
        return arg("star of a series truncated below degree 0");
    }
    LaurentSeries::from_fn(&phi.var, 0, phi.order, Parity::Even, |d| {
        Ok(phi.coeff(d)?.scale(&star_weight((d / 2) as u32)))
    })
}

/// The # functional: Σ_{m≥1} a_{2m}(2H_{2m−1} − H_{m−1}) over the known
/// coefficients of an even power series.
pub fn hash(phi: &LaurentSeries) -> Result<ConstExpr> {
    phi.check_parity(Parity::Even)?;
    if phi.nonzero_terms().any(|(d, _)| d < 0) {
        return arg("hash expects a power series (no negative degrees)");
    }
    let mut acc = ConstExpr::zero();
    let mut d = 2;
    while d <= phi.order {
        acc += &phi.coeff(d)?.scale(&hash_weight((d / 2) as u32));
        d += 2;
    }
    Ok(acc)
}
