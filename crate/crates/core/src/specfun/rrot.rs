//! The rotation function R^rot and the Gillet–Soulé R-series.

use rug::Float;

use super::bernoulli::zeta_neg;
use super::zeta::{zeta_prime_neg, INNER_GUARD};
use crate::error::{arg, Error, Result};
use crate::numerics::{factorial, harmonic_u, pow10, ConstExpr, Precision, Rational};
use crate::series::{LaurentSeries, Parity};

/// R^rot(t) = (γ + log t)/t − Σ_{m odd} ζ′(−m)(−1)^{(m+1)/2} t^m/m!, with
/// γ + log t kept as the symbols GAMMA + LOG_T.
pub fn r_rot_series(order: i32) -> Result<LaurentSeries> {
    if order < 1 {
        return arg(format!("R^rot series needs order >= 1, got {order}"));
    }
    LaurentSeries::from_fn("t", -1, order, Parity::Odd, |d| {
        if d == -1 {
            return Ok(ConstExpr::gamma() + ConstExpr::log_t());
        }
        let m = d as u32;
        let sign: i64 = if m.div_ceil(2).is_multiple_of(2) { -1 } else { 1 };
        let c = Rational::from((sign, 1)) / Rational::from(factorial(m));
        Ok(ConstExpr::zeta_prime(m)?.scale(&c))
    })
}

/// Numeric R^rot(t) on 0 < t < 2π. For t > π the value is obtained from
/// R^rot(2π − t) = −R^rot(t), which keeps the power series well inside its
/// disc of convergence.
pub fn r_rot_value(t: &Float, prec: Precision) -> Result<Float> {
    let bits = prec.bits() + INNER_GUARD;
    let inner = prec.raised(10);
    let pi = Float::with_val(bits, inner.pi());
    let two_pi = Float::with_val(bits, &pi * 2u32);
    if *t <= 0 || *t >= two_pi {
        return arg(format!("R^rot is evaluated on (0, 2*pi), got t = {}", t.to_f64()));
    }
    if *t > pi {
        let mirror = Float::with_val(bits, &two_pi - t);
        return Ok(-r_rot_value(&mirror, prec)?);
    }
    r_rot_direct(t, prec, 100_000)
}

/// Direct summation of the defining series (any 0 < t < 2π, slow near 2π).
pub fn r_rot_direct(t: &Float, prec: Precision, max_terms: u32) -> Result<Float> {
    let bits = prec.bits() + INNER_GUARD;
    let t = Float::with_val(bits, t);
    let mut acc = (Float::with_val(bits, t.ln_ref()) + prec.raised(10).euler_gamma()) / &t;
    let eps = pow10(-(prec.digits() as i32) - 4, bits);
    let t2 = Float::with_val(bits, t.square_ref());
    let mut pw = Float::with_val(bits, &t); // t^m/m!
    let zp_prec = prec.raised(6);
    let mut m = 1u32;
    let mut small = 0;
    while m <= max_terms {
        let zp = if m <= 400 {
            zeta_prime_neg(m, zp_prec)?
        } else {
            zeta_prime_neg_large(m, zp_prec)?
        };
        let term = Float::with_val(bits, &zp * &pw);
        if m.div_ceil(2).is_multiple_of(2) {
            acc -= &term;
        } else {
            acc += &term;
        }
        if Float::with_val(bits, term.abs_ref())
            < Float::with_val(
                bits,
                &eps * Float::with_val(bits, acc.abs_ref()).max(&Float::with_val(bits, 1)),
            )
        {
            small += 1;
            if small >= 2 {
                return Ok(Float::with_val(prec.bits(), acc));
            }
        } else {
            small = 0;
        }
        pw *= &t2;
        pw /= (m + 1) * (m + 2);
        m += 2;
    }
    Err(Error::Accuracy {
        partial: acc.to_f64().to_string(),
        estimate: f64::NAN,
        tolerance: eps.to_f64(),
    })
}

/// ζ′(−m) for large odd m, where ζ(−m) is taken numerically.
fn zeta_prime_neg_large(m: u32, prec: Precision) -> Result<Float> {
    let inner = prec.raised(10);
    let bits = inner.bits();
    let s = Float::with_val(bits, m + 1);
    let (z, dz) = super::zeta::hurwitz_zeta_with_derivative(&s, &Float::with_val(bits, 1), inner)?;
    let two_pi = Float::with_val(bits, inner.pi() * 2u32);
    let bracket = two_pi.ln() - Float::with_val(bits, &harmonic_u(m as usize)) + inner.euler_gamma()
        - Float::with_val(bits, &dz / &z);
    let zn = super::zeta::zeta_neg_value(m, inner)?;
    Ok(Float::with_val(prec.bits(), bracket * zn))
}

/// Gillet–Soulé series Σ_{m odd} (2ζ′(−m) + H_m ζ(−m)) x^m/m! in the variable `var`.
pub fn gs_r_series_in(var: &str, order: i32) -> Result<LaurentSeries> {
    if order < 1 {
        return arg(format!("R-series needs order >= 1, got {order}"));
    }
    LaurentSeries::from_fn(var, 0, order, Parity::Odd, |d| {
        let m = d as u32;
        let fact = Rational::from(factorial(m));
        let rational = Rational::from(harmonic_u(m as usize) * zeta_neg(m)) / &fact;
        let z = ConstExpr::zeta_prime(m)?.scale(&(Rational::from(2) / &fact));
        Ok(z + ConstExpr::rational(rational))
    })
}

/// [`gs_r_series_in`] in the variable x.
pub fn gs_r_series(order: i32) -> Result<LaurentSeries> {
    gs_r_series_in("x", order)
}
