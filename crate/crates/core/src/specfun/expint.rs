//! Sine, cosine and exponential integrals at arbitrary precision.

use rug::Float;

use crate::error::{arg, Result};
use crate::numerics::{pow10, Precision};

/// Values of Si, Ci and Ei at one point; `None` where x is outside the domain.
#[derive(Clone, Debug)]
pub struct SiCiEi {
    pub si: Float,
    pub ci: Option<Float>,
    pub ei: Option<Float>,
}

/// Crossover between the power series and the asymptotic expansion. The
/// asymptotic series for the auxiliary functions is only accurate to about
/// e^{−2x}, so the crossover grows with the requested precision.
pub fn asymptotic_crossover(prec: Precision) -> f64 {
    (0.5 * prec.digits() as f64 * std::f64::consts::LN_10 * 1.2 + 5.0).max(6.0)
}

/// Bits needed to absorb cancellation in a power series whose terms peak near e^{|x|}.
fn series_bits(x: f64, prec: Precision) -> u32 {
    prec.bits() + (x.abs() * std::f64::consts::LOG2_E).ceil() as u32 + 24
}

fn si_ci_series(x: &Float, prec: Precision) -> (Float, Float) {
    let bits = series_bits(x.to_f64(), prec);
    let x = Float::with_val(bits, x);
    let x2 = Float::with_val(bits, x.square_ref());
    let eps = pow10(-(prec.digits() as i32) - 6, bits);
    // Si = Σ (−1)^n x^{2n+1}/((2n+1)(2n+1)!)
    let mut si = Float::new(bits);
    let mut p = x.clone(); // x^{2n+1}/(2n+1)!
    let mut n = 0u32;
    loop {
        let term = Float::with_val(bits, &p / (2 * n + 1));
        if n.is_multiple_of(2) {
            si += &term;
        } else {
            si -= &term;
        }
        if term.abs() < eps && n > 2 {
            break;
        }
        p *= &x2;
        p /= (2 * n + 2) * (2 * n + 3);
        n += 1;
    }
    // Ci = γ + ln x + Σ_{n≥1} (−1)^n x^{2n}/(2n(2n)!)
    let mut ci = Float::with_val(bits, rug::float::Constant::Euler) + Float::with_val(bits, x.ln_ref());
    let mut p = Float::with_val(bits, &x2 / 2u32); // x^{2n}/(2n)!
    let mut n = 1u32;
    loop {
        let term = Float::with_val(bits, &p / (2 * n));
        if n % 2 == 1 {
            ci -= &term;
        } else {
            ci += &term;
        }
        if term.abs() < eps && n > 2 {
            break;
        }
        p *= &x2;
        p /= (2 * n + 1) * (2 * n + 2);
        n += 1;
    }
    let out = prec.bits();
    (Float::with_val(out, si), Float::with_val(out, ci))
}

/// Auxiliary functions f, g with Si = π/2 − f cos x − g sin x and
/// Ci = f sin x − g cos x, summed until the smallest asymptotic term.
fn si_ci_asymptotic(x: &Float, prec: Precision) -> (Float, Float) {
    let bits = prec.bits() + 24;
    let x = Float::with_val(bits, x);
    let inv = Float::with_val(bits, x.recip_ref());
    let inv2 = Float::with_val(bits, inv.square_ref());
    let eps = pow10(-(prec.digits() as i32) - 6, bits);
    let mut f = Float::new(bits);
    let mut g = Float::new(bits);
    let mut tf = Float::with_val(bits, &inv); // (2n)!/x^{2n+1}
    let mut tg = Float::with_val(bits, &inv2); // (2n+1)!/x^{2n+2}
    let mut prev = Float::with_val(bits, f64::INFINITY);
    let mut n = 0u32;
    loop {
        let mag = Float::with_val(bits, tf.abs_ref()).max(&Float::with_val(bits, tg.abs_ref()));
        if mag > prev || mag < eps {
            break;
        }
        if n.is_multiple_of(2) {
            f += &tf;
            g += &tg;
        } else {
            f -= &tf;
            g -= &tg;
        }
        prev = mag;
        tf *= &inv2;
        tf *= (2 * n + 1) * (2 * n + 2);
        tg *= &inv2;
        tg *= (2 * n + 2) * (2 * n + 3);
        n += 1;
    }
    let (s, c) = x.clone().sin_cos(Float::new(bits));
    let half_pi = Float::with_val(bits, rug::float::Constant::Pi) / 2u32;
    let si = half_pi - Float::with_val(bits, &f * &c) - Float::with_val(bits, &g * &s);
    let ci = Float::with_val(bits, &f * &s) - Float::with_val(bits, &g * &c);
    let out = prec.bits();
    (Float::with_val(out, si), Float::with_val(out, ci))
}

/// Si(x) = ∫₀ˣ sin t/t dt for any real x.
pub fn si(x: &Float, prec: Precision) -> Float {
    if x.is_zero() {
        return prec.zero();
    }
    let ax = Float::with_val(x.prec(), x.abs_ref());
    let v = if ax.to_f64() < asymptotic_crossover(prec) {
        si_ci_series(&ax, prec).0
    } else {
        si_ci_asymptotic(&ax, prec).0
    };
    if x.is_sign_negative() {
        -v
    } else {
        v
    }
}

/// Ci(x) = −∫ₓ^∞ cos t/t dt for x > 0.
pub fn ci(x: &Float, prec: Precision) -> Result<Float> {
    if *x <= 0 {
        return arg("Ci(x) requires x > 0");
    }
    Ok(if x.to_f64() < asymptotic_crossover(prec) {
        si_ci_series(x, prec).1
    } else {
        si_ci_asymptotic(x, prec).1
    })
}

/// Ei(x) = −∫_{−x}^∞ e^{−t}/t dt (principal value for x > 0), x ≠ 0.
pub fn ei(x: &Float, prec: Precision) -> Result<Float> {
    if x.is_zero() {
        return arg("Ei(0) is undefined");
    }
    let xf = x.to_f64();
    if xf.abs() < asymptotic_crossover(prec) * 1.6 {
        let bits = series_bits(xf, prec);
        let x = Float::with_val(bits, x);
        let eps = pow10(-(prec.digits() as i32) - 6, bits);
        let ax = Float::with_val(bits, x.abs_ref());
        let mut acc = Float::with_val(bits, rug::float::Constant::Euler) + ax.ln();
        let mut p = Float::with_val(bits, 1); // x^n/n!
        let mut n = 1u32;
        loop {
            p *= &x;
            p /= n;
            let term = Float::with_val(bits, &p / n);
            acc += &term;
            if term.abs() < eps && n as f64 > xf.abs() {
                break;
            }
            n += 1;
        }
        return Ok(Float::with_val(prec.bits(), acc));
    }
    // e^x/x · Σ n!/x^n, truncated at the smallest term.
    let bits = prec.bits() + 24;
    let x = Float::with_val(bits, x);
    let inv = Float::with_val(bits, x.recip_ref());
    let mut sum = Float::with_val(bits, 1);
    let mut term = Float::with_val(bits, 1);
    let mut prev = Float::with_val(bits, f64::INFINITY);
    for n in 1..10_000u32 {
        term *= &inv;
        term *= n;
        let mag = Float::with_val(bits, term.abs_ref());
        if mag > prev || mag < pow10(-(prec.digits() as i32) - 6, bits) {
            break;
        }
        sum += &term;
        prev = mag;
    }
    Ok(Float::with_val(prec.bits(), x.clone().exp() * inv * sum))
}

/// Si, Ci and Ei at x, each where defined.
pub fn si_ci_ei(x: &Float, prec: Precision) -> Result<SiCiEi> {
    if x.is_zero() {
        return arg("si_ci_ei at x = 0: Ci and Ei are singular");
    }
    Ok(SiCiEi {
        si: si(x, prec),
        ci: ci(x, prec).ok(),
        ei: ei(x, prec).ok(),
    })
}
