//! Bernoulli numbers and the rational values ζ(−m).

use std::sync::RwLock;

use rug::Integer;

use crate::numerics::Rational;

/// Even-index Bernoulli numbers B_0, B_2, B_4, … built once and extended on demand.
static EVEN_BERNOULLI: RwLock<Vec<Rational>> = RwLock::new(Vec::new());

/// Tangent numbers T_1..T_n (integer-only recurrence), from which
/// B_{2k} = (−1)^{k−1}·2k·T_k / (4^k(4^k − 1)).
fn tangent_numbers(n: usize) -> Vec<Integer> {
    let mut t: Vec<Integer> = Vec::with_capacity(n + 1);
    t.push(Integer::new());
    let mut fact = Integer::from(1);
    for k in 1..=n {
        t.push(fact.clone());
        fact *= k as u32;
    }
    for k in 2..=n {
        for j in k..=n {
            let a = Integer::from(&t[j - 1] * (j - k) as u32);
            let b = Integer::from(&t[j] * (j - k + 2) as u32);
            t[j] = a + b;
        }
    }
    t
}

fn ensure_even_bernoulli(count: usize) {
    if EVEN_BERNOULLI.read().map(|v| v.len() > count).unwrap_or(false) {
        return;
    }
    let mut guard = EVEN_BERNOULLI.write().unwrap_or_else(|e| e.into_inner());
    if guard.len() > count {
        return;
    }
    let n = (count + 1).max(2 * guard.len()).max(64);
    let t = tangent_numbers(n);
    let mut out = Vec::with_capacity(n + 1);
    out.push(Rational::from(1));
    for (k, tk) in t.iter().enumerate().skip(1) {
        let four_k = Integer::from(1) << (2 * k as u32);
        let den = Integer::from(&four_k - 1u32) * &four_k;
        let mut num = Integer::from(tk * (2 * k) as u32);
        if k % 2 == 0 {
            num = -num;
        }
        out.push(Rational::from((num, den)));
    }
    *guard = out;
}

/// Bernoulli number B_n with the convention B_1 = −1/2.
pub fn bernoulli(n: u32) -> Rational {
    match n {
        0 => Rational::from(1),
        1 => Rational::from((-1, 2)),
        _ if n % 2 == 1 => Rational::new(),
        _ => {
            let k = (n / 2) as usize;
            ensure_even_bernoulli(k);
            EVEN_BERNOULLI.read().unwrap_or_else(|e| e.into_inner())[k].clone()
        }
    }
}

/// ζ(−m) = (−1)^m B_{m+1}/(m+1) as an exact rational (−1/2 at m = 0).
pub fn zeta_neg(m: u32) -> Rational {
    let b = bernoulli(m + 1) / Rational::from(m + 1);
    if m.is_multiple_of(2) {
        b
    } else {
        -b
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_bernoulli_numbers() {
        let expected = [
            (0, (1, 1)),
            (1, (-1, 2)),
            (2, (1, 6)),
            (3, (0, 1)),
            (4, (-1, 30)),
            (6, (1, 42)),
            (8, (-1, 30)),
            (10, (5, 66)),
            (12, (-691, 2730)),
        ];
        for (n, (p, q)) in expected {
            assert_eq!(bernoulli(n), Rational::from((p, q)), "B_{n}");
        }
    }

    /// Oracle: the defining recurrence Σ_{k=0}^{n} C(n+1,k) B_k = 0.
    #[test]
    fn bernoulli_recurrence_oracle() {
        for n in 1..60u32 {
            let mut acc = Rational::new();
            for k in 0..=n {
                acc += bernoulli(k) * Rational::from(crate::numerics::binomial(n + 1, k));
            }
            assert_eq!(acc, 0, "n = {n}");
        }
    }

    #[test]
    fn zeta_negative_integers() {
        assert_eq!(zeta_neg(0), Rational::from((-1, 2)));
        assert_eq!(zeta_neg(1), Rational::from((-1, 12)));
        assert_eq!(zeta_neg(2), 0);
        assert_eq!(zeta_neg(3), Rational::from((1, 120)));
        assert_eq!(zeta_neg(5), Rational::from((-1, 252)));
    }
}
