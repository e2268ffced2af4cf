//! Hurwitz and Riemann zeta values with s-derivatives by Euler–Maclaurin
//! summation, and ζ′(−m) through the functional equation.

use std::collections::HashMap;
use std::sync::Mutex;

use rug::Float;

use super::bernoulli::{bernoulli, zeta_neg};
use crate::error::{arg, Error, Result};
use crate::numerics::{factorial, harmonic_u, pow10, Precision};

/// Extra working bits used inside the summation routines.
pub(crate) const INNER_GUARD: u32 = 32;

/// A value together with its derivative in s.
#[derive(Clone, Debug)]
pub(crate) struct Dual {
    pub v: Float,
    pub d: Float,
}

/// Euler–Maclaurin decomposition ζ(s,a) = regular(s) + X^{1−s}/(s−1) with
/// X = N + a; `regular` collects the finite sum, the X^{−s}/2 term and the
/// Bernoulli corrections, all smooth at s = 1.
pub(crate) struct HurwitzParts {
    pub regular: Dual,
    pub x: Float,
}

fn em_start_terms(s: f64, digits: u32) -> usize {
    let by_s = (s.abs() / (2.0 * std::f64::consts::PI)).ceil() as usize;
    10 + (digits as usize) / 2 + by_s
}

/// One Euler–Maclaurin attempt with N leading terms; `None` if the Bernoulli
/// tail started to diverge before reaching the target accuracy.
fn hurwitz_parts_with(s: &Float, a: &Float, n: usize, bits: u32, eps: &Float) -> Option<HurwitzParts> {
    let mut v = Float::new(bits);
    let mut d = Float::new(bits);
    for k in 0..n {
        let base = Float::with_val(bits, a + k as u32);
        let lb = Float::with_val(bits, base.ln_ref());
        let p = (-Float::with_val(bits, s * &lb)).exp();
        d -= Float::with_val(bits, &p * &lb);
        v += p;
    }
    let x = Float::with_val(bits, a + n as u32);
    let lx = Float::with_val(bits, x.ln_ref());
    // X^{-s}/2
    let xs = (-Float::with_val(bits, s * &lx)).exp();
    v += Float::with_val(bits, &xs / 2u32);
    d -= Float::with_val(bits, &xs * &lx) / 2u32;
    // Bernoulli corrections T_j = B_{2j}/(2j)! · P_j(s) · X^{−s−2j+1},
    // P_j(s) = s(s+1)…(s+2j−2), differentiated by the product rule.
    let mut poly = Float::with_val(bits, s);
    let mut dpoly = Float::with_val(bits, 1);
    let mut xpow = Float::with_val(bits, &xs / &x); // X^{-s-1}
    let inv_x2 = Float::with_val(bits, x.square_ref()).recip();
    let scale = Float::with_val(bits, v.abs_ref()).max(&Float::with_val(bits, 1e-300));
    let mut prev = Float::with_val(bits, f64::INFINITY);
    for j in 1..=600u32 {
        let c = Float::with_val(bits, &bernoulli(2 * j)) / Float::with_val(bits, factorial(2 * j));
        let term = Float::with_val(bits, &c * &poly) * &xpow;
        let dterm = Float::with_val(bits, &c * &dpoly) * &xpow - Float::with_val(bits, &term * &lx);
        let mag = Float::with_val(bits, term.abs_ref()).max(&Float::with_val(bits, dterm.abs_ref()));
        if j > 2 && mag > prev {
            return None;
        }
        v += &term;
        d += &dterm;
        if mag <= Float::with_val(bits, eps * &scale) {
            return Some(HurwitzParts {
                regular: Dual { v, d },
                x,
            });
        }
        prev = mag;
        // advance P_j → P_{j+1}: multiply by (s+2j−1)(s+2j)
        for i in [2 * j - 1, 2 * j] {
            let f = Float::with_val(bits, s + i);
            dpoly = Float::with_val(bits, &dpoly * &f) + &poly;
            poly *= &f;
        }
        xpow *= &inv_x2;
    }
    None
}

/// Euler–Maclaurin parts for ζ(s,a), enlarging N until the tail converges.
pub(crate) fn hurwitz_parts(s: &Float, a: &Float, bits: u32) -> Result<HurwitzParts> {
    if *a <= 0 {
        return arg("Hurwitz zeta needs a > 0");
    }
    let digits = (bits as f64 / std::f64::consts::LOG2_10) as u32;
    let eps = pow10(-(digits as i32) - 4, bits);
    let mut n = em_start_terms(s.to_f64(), digits);
    for _ in 0..8 {
        if let Some(p) = hurwitz_parts_with(s, a, n, bits, &eps) {
            return Ok(p);
        }
        n *= 2;
    }
    Err(Error::Accuracy {
        partial: "n/a".into(),
        estimate: f64::INFINITY,
        tolerance: eps.to_f64(),
    })
}

/// Euler–Maclaurin parts with a prescribed number of leading terms.
pub(crate) fn hurwitz_parts_fixed(s: &Float, a: &Float, n: usize, bits: u32) -> Result<HurwitzParts> {
    let digits = (bits as f64 / std::f64::consts::LOG2_10) as u32;
    let eps = pow10(-(digits as i32) - 4, bits);
    hurwitz_parts_with(s, a, n, bits, &eps).ok_or_else(|| Error::Accuracy {
        partial: "n/a".into(),
        estimate: f64::INFINITY,
        tolerance: eps.to_f64(),
    })
}

/// ζ(s,a) and ∂ζ(s,a)/∂s for real s ≠ 1, a > 0.
pub fn hurwitz_zeta_with_derivative(s: &Float, a: &Float, prec: Precision) -> Result<(Float, Float)> {
    if *s == 1 {
        return Err(Error::Pole("Hurwitz zeta at s = 1".into()));
    }
    let bits = prec.bits() + INNER_GUARD;
    let s = Float::with_val(bits, s);
    let a = Float::with_val(bits, a);
    let parts = hurwitz_parts(&s, &a, bits)?;
    let sm1 = Float::with_val(bits, &s - 1u32);
    let lx = Float::with_val(bits, parts.x.ln_ref());
    let pole = (-Float::with_val(bits, &sm1 * &lx)).exp() / &sm1; // X^{1-s}/(s-1)
    let v = Float::with_val(prec.bits(), &parts.regular.v + &pole);
    let dpole = -Float::with_val(bits, &pole * &lx) - Float::with_val(bits, &pole / &sm1);
    let d = Float::with_val(prec.bits(), &parts.regular.d + &dpole);
    Ok((v, d))
}

/// ζ(s,a) for real s ≠ 1, a > 0.
pub fn hurwitz_zeta(s: &Float, a: &Float, prec: Precision) -> Result<Float> {
    Ok(hurwitz_zeta_with_derivative(s, a, prec)?.0)
}

/// Riemann ζ(s) for real s ≠ 1 (analytic continuation included).
pub fn riemann_zeta(s: &Float, prec: Precision) -> Result<Float> {
    hurwitz_zeta(s, &Float::with_val(prec.bits(), 1), prec)
}

static ZETA_PRIME_CACHE: Mutex<Option<HashMap<(u32, u32), Float>>> = Mutex::new(None);

/// ζ′(−m) for odd m ≥ 1, via the functional equation
/// ζ′(−m) = ζ(−m)·[log 2π − H_m + γ − ζ′(m+1)/ζ(m+1)].
pub fn zeta_prime_neg(m: u32, prec: Precision) -> Result<Float> {
    if m == 0 || m.is_multiple_of(2) {
        return arg(format!("zeta_prime_neg needs odd m >= 1, got {m}"));
    }
    let key = (m, prec.digits());
    if let Some(v) = ZETA_PRIME_CACHE
        .lock()
        .unwrap_or_else(|e| e.into_inner())
        .as_ref()
        .and_then(|c| c.get(&key))
    {
        return Ok(v.clone());
    }
    let inner = prec.raised(10);
    let bits = inner.bits();
    let s = Float::with_val(bits, m + 1);
    let (z, dz) = hurwitz_zeta_with_derivative(&s, &Float::with_val(bits, 1), inner)?;
    let two_pi = Float::with_val(bits, inner.pi() * 2u32);
    let bracket = two_pi.ln() - Float::with_val(bits, &harmonic_u(m as usize)) + inner.euler_gamma()
        - Float::with_val(bits, &dz / &z);
    let v = Float::with_val(prec.bits(), bracket * &zeta_neg(m));
    ZETA_PRIME_CACHE
        .lock()
        .unwrap_or_else(|e| e.into_inner())
        .get_or_insert_with(HashMap::new)
        .insert(key, v.clone());
    Ok(v)
}

/// ζ(−m) as a float; exact rational for moderate m, functional equation
/// ζ(−m) = 2(−1)^{(m+1)/2} m! ζ(m+1)/(2π)^{m+1} (m odd) beyond.
pub fn zeta_neg_value(m: u32, prec: Precision) -> Result<Float> {
    let bits = prec.bits();
    if m <= 400 || m.is_multiple_of(2) {
        return Ok(Float::with_val(bits, &zeta_neg(m)));
    }
    let inner = prec.raised(5);
    let ib = inner.bits();
    let z = riemann_zeta(&Float::with_val(ib, m + 1), inner)?;
    let two_pi = Float::with_val(ib, inner.pi() * 2u32);
    let lg = Float::with_val(ib, m + 1).ln_gamma(); // log m!
    let mag = (lg - two_pi.ln() * (m + 1)).exp() * z * 2u32;
    let sign = if m.div_ceil(2).is_multiple_of(2) { 1 } else { -1 };
    Ok(Float::with_val(bits, mag * sign))
}
