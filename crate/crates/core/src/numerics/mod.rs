//! Coefficient field: exact rationals, symbolic constant combinations,
//! configurable-precision reals and harmonic numbers.

mod complex;
mod constexpr;

pub use complex::Complex;
pub use constexpr::{eval_const, ConstExpr, ConstSymbol};

use std::sync::Mutex;

use rug::float::{Constant, Round};
use rug::ops::Pow;
use rug::{Float, Integer};

use crate::error::{arg, Result};

/// Exact rational number (always in lowest terms with positive denominator).
pub type Rational = rug::Rational;

/// Arbitrary-precision binary floating point real.
pub type BigReal = Float;

const LOG2_10: f64 = std::f64::consts::LOG2_10;

/// Guard bits added on top of the requested decimal precision.
const GUARD_BITS: u32 = 16;

/// Working precision, in decimal digits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Precision {
    digits: u32,
}

impl Precision {
    pub const DEFAULT_DIGITS: u32 = 50;
    pub const MIN_DIGITS: u32 = 10;
    pub const MAX_DIGITS: u32 = 5000;

    pub fn new(digits: u32) -> Result<Self> {
        if !(Self::MIN_DIGITS..=Self::MAX_DIGITS).contains(&digits) {
            return arg(format!(
                "precision must be between {} and {} digits, got {digits}",
                Self::MIN_DIGITS,
                Self::MAX_DIGITS
            ));
        }
        Ok(Precision { digits })
    }

    pub fn digits(self) -> u32 {
        self.digits
    }

    /// Mantissa bits used for values at this precision.
    pub fn bits(self) -> u32 {
        (self.digits as f64 * LOG2_10).ceil() as u32 + GUARD_BITS
    }

    /// The same precision raised by `extra` decimal digits.
    pub fn raised(self, extra: u32) -> Precision {
        Precision {
            digits: (self.digits + extra).min(Self::MAX_DIGITS),
        }
    }

    /// 10^{-digits}, the nominal relative accuracy of results.
    pub fn epsilon(self) -> Float {
        pow10(-(self.digits as i32), self.bits())
    }

    pub fn zero(self) -> Float {
        Float::new(self.bits())
    }

    pub fn real<T>(self, value: T) -> Float
    where
        Float: rug::Assign<T>,
    {
        Float::with_val(self.bits(), value)
    }

    pub fn pi(self) -> Float {
        Float::with_val(self.bits(), Constant::Pi)
    }

    pub fn euler_gamma(self) -> Float {
        Float::with_val(self.bits(), Constant::Euler)
    }
}

impl Default for Precision {
    fn default() -> Self {
        Precision {
            digits: Self::DEFAULT_DIGITS,
        }
    }
}

/// 10^e as a float with `bits` of mantissa.
pub fn pow10(e: i32, bits: u32) -> Float {
    Float::with_val(bits, 10).pow(e)
}

/// Converts an exact rational to a float with `bits` of mantissa.
pub fn rational_to_float(q: &Rational, bits: u32) -> Float {
    Float::with_val(bits, q)
}

/// Rounds a float to `digits` significant decimal digits and renders it.
///
/// Numbers of moderate size are printed positionally, everything else in
/// scientific notation. The output depends only on the value and `digits`.
pub fn format_real(x: &Float, digits: u32) -> String {
    if x.is_nan() {
        return "NaN".to_string();
    }
    if x.is_infinite() {
        return if x.is_sign_negative() { "-inf" } else { "inf" }.to_string();
    }
    if x.is_zero() {
        return "0".to_string();
    }
    let digits = digits.max(1) as usize;
    let (neg, mantissa, exp) = x.to_sign_string_exp_round(10, Some(digits), Round::Nearest);
    // value = 0.mantissa * 10^exp
    let exp = exp.unwrap_or(0);
    let trimmed = mantissa.trim_end_matches('0');
    let mant = if trimmed.is_empty() { "0" } else { trimmed };
    let sign = if neg { "-" } else { "" };
    if (-8..=21).contains(&exp) {
        let body = if exp <= 0 {
            format!("0.{}{}", "0".repeat((-exp) as usize), mant)
        } else if (exp as usize) >= mant.len() {
            format!("{}{}", mant, "0".repeat(exp as usize - mant.len()))
        } else {
            format!("{}.{}", &mant[..exp as usize], &mant[exp as usize..])
        };
        format!("{sign}{body}")
    } else {
        let (head, tail) = mant.split_at(1);
        let frac = if tail.is_empty() {
            String::new()
        } else {
            format!(".{tail}")
        };
        format!("{sign}{head}{frac}e{}", exp - 1)
    }
}

/// Renders a rational as "p" or "p/q".
pub fn format_rational(q: &Rational) -> String {
    if *q.denom() == 1 {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses "p" or "p/q" (optionally with a leading sign) into a rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let parsed = match s.split_once('/') {
        Some((n, d)) => {
            let n: Integer = n.trim().parse().map_err(|_| bad_rational(s))?;
            let d: Integer = d.trim().parse().map_err(|_| bad_rational(s))?;
            if d == 0 {
                return arg(format!("zero denominator in rational '{s}'"));
            }
            Rational::from((n, d))
        }
        None => Rational::from(s.parse::<Integer>().map_err(|_| bad_rational(s))?),
    };
    Ok(parsed)
}

fn bad_rational(s: &str) -> crate::error::Error {
    crate::error::Error::Argument(format!("cannot parse rational '{s}'"))
}

/// Harmonic numbers are cached up to this index; larger ones are summed on demand.
const HARMONIC_CACHE_LIMIT: usize = 20_000;

static HARMONIC_CACHE: Mutex<Vec<Rational>> = Mutex::new(Vec::new());

/// The harmonic number H_m = 1 + 1/2 + ... + 1/m, with H_0 = 0.
pub fn harmonic(m: i64) -> Result<Rational> {
    if m < 0 {
        return arg(format!("harmonic number index must be nonnegative, got {m}"));
    }
    Ok(harmonic_u(m as usize))
}

/// Infallible harmonic number for internal use.
pub(crate) fn harmonic_u(m: usize) -> Rational {
    let mut cache = HARMONIC_CACHE.lock().unwrap_or_else(|e| e.into_inner());
    if cache.is_empty() {
        cache.push(Rational::new());
    }
    let target = m.min(HARMONIC_CACHE_LIMIT);
    while cache.len() <= target {
        let j = cache.len();
        let next = Rational::from(&cache[j - 1] + Rational::from((1, j as u64)));
        cache.push(next);
    }
    let mut h = cache[target].clone();
    drop(cache);
    for j in (target + 1)..=m {
        h += Rational::from((1, j as u64));
    }
    h
}

/// n! as an exact integer.
pub(crate) fn factorial(n: u32) -> Integer {
    Integer::from(Integer::factorial(n))
}

/// Binomial coefficient C(n, k).
#[cfg(test)]
pub(crate) fn binomial(n: u32, k: u32) -> Integer {
    Integer::from(Integer::binomial_u(n, k))
}

/// Neumaier-compensated running sum of floats, reduced in insertion order.
#[derive(Clone, Debug)]
pub struct CompensatedSum {
    sum: Float,
    comp: Float,
}

impl CompensatedSum {
    pub fn new(bits: u32) -> Self {
        CompensatedSum {
            sum: Float::new(bits),
            comp: Float::new(bits),
        }
    }

    pub fn add(&mut self, x: &Float) {
        let bits = self.sum.prec();
        let t = Float::with_val(bits, &self.sum + x);
        if Float::with_val(bits, self.sum.abs_ref()) >= Float::with_val(bits, x.abs_ref()) {
            let d = Float::with_val(bits, &self.sum - &t);
            self.comp += d + x;
        } else {
            let d = Float::with_val(bits, x - &t);
            self.comp += d + &self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> Float {
        Float::with_val(self.sum.prec(), &self.sum + &self.comp)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_examples() {
        assert_eq!(harmonic(0).unwrap(), 0);
        assert_eq!(harmonic(1).unwrap(), 1);
        assert_eq!(harmonic(3).unwrap(), Rational::from((11, 6)));
        assert!(harmonic(-1).is_err());
    }

    #[test]
    fn harmonic_increments_exact_up_to_ten_thousand() {
        let mut prev = harmonic(0).unwrap();
        for m in 0..10_000i64 {
            let next = harmonic(m + 1).unwrap();
            assert_eq!(Rational::from(&next - &prev), Rational::from((1, m + 1)));
            prev = next;
        }
    }

    #[test]
    fn precision_bits_cover_digits() {
        let p = Precision::new(50).unwrap();
        assert!(p.bits() >= 167);
        assert!(Precision::new(3).is_err());
    }

    #[test]
    fn formatting() {
        let p = Precision::default();
        assert_eq!(format_real(&p.real(0.5), 20), "0.5");
        assert_eq!(format_real(&p.real(-12.25), 20), "-12.25");
        assert_eq!(format_real(&p.real(1e-12), 5), "1e-12");
        assert_eq!(format_real(&p.real(0), 5), "0");
        let third = Float::with_val(p.bits(), 1) / 3;
        assert_eq!(format_real(&third, 5), "0.33333");
    }

    #[test]
    fn rational_round_trip() {
        let q = parse_rational("-7/21").unwrap();
        assert_eq!(format_rational(&q), "-1/3");
        assert_eq!(format_rational(&parse_rational("4").unwrap()), "4");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn compensated_sum_recovers_cancellation() {
        let bits = 64;
        let mut s = CompensatedSum::new(bits);
        let big = Float::with_val(bits, 1e20);
        s.add(&big);
        s.add(&Float::with_val(bits, 1));
        s.add(&Float::with_val(bits, -1e20));
        assert_eq!(s.value(), 1);
    }
}
