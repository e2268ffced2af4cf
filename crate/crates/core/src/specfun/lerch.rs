//! Lerch zeta ζ_L(s,φ) = Σ_{k≥1} e^{ikφ}k^{−s} at negative integers s = −k,
//! its s-derivative there, and the generating functions R̃₀ and R built from
//! them.

use std::sync::Mutex;

use rug::{Float, Integer};

use super::zeta::{hurwitz_parts, Dual, INNER_GUARD};
use crate::error::{Error, Result};
use crate::numerics::{factorial, harmonic_u, pow10, Complex, Precision};

/// ζ_L at s = −k with its s-derivative.
#[derive(Clone, Debug)]
pub struct LerchPoint {
    pub k: u32,
    /// Angle reduced to (0, 2π).
    pub phi: Float,
    pub value: Complex,
    pub derivative: Complex,
}

/// Reduces φ into [0, 2π) and rejects angles with e^{iφ} = 1.
fn reduce_angle(phi: &Float, prec: Precision) -> Result<Float> {
    let bits = prec.bits() + INNER_GUARD;
    let two_pi = Float::with_val(bits, prec.raised(10).pi() * 2u32);
    let mut r = Float::with_val(bits, phi % &two_pi);
    if r < 0 {
        r += &two_pi;
    }
    let tiny = pow10(-(prec.digits() as i32) / 2, bits);
    let dist = Float::with_val(bits, &two_pi - &r).min(&r);
    if dist <= tiny {
        return Err(Error::Pole(format!(
            "Lerch zeta at e^(i*phi) = 1 (phi = {})",
            phi.to_f64()
        )));
    }
    Ok(r)
}

static POLY_CACHE: Mutex<Vec<Vec<Integer>>> = Mutex::new(Vec::new());

/// Coefficients of P_k(u) with Li_{−k}(z) = P_k(z/(1−z)):
/// P_0 = u, P_{k+1} = u(1+u)P_k′(u).
fn polylog_neg_poly(k: u32) -> Vec<Integer> {
    let mut cache = POLY_CACHE.lock().unwrap_or_else(|e| e.into_inner());
    if cache.is_empty() {
        cache.push(vec![Integer::new(), Integer::from(1)]);
    }
    while cache.len() <= k as usize {
        let p = cache.last().expect("nonempty");
        // derivative
        let dp: Vec<Integer> = (1..p.len()).map(|i| Integer::from(&p[i] * i as u32)).collect();
        // multiply by u + u^2
        let mut next = vec![Integer::new(); dp.len() + 2];
        for (i, c) in dp.iter().enumerate() {
            next[i + 1] += c;
            next[i + 2] += c;
        }
        cache.push(next);
    }
    cache[k as usize].clone()
}

/// Li_{−k}(e^{iφ}) = (z d/dz)^k z/(1−z), the continuation of ζ_L(−k, φ).
pub fn lerch_neg(k: u32, phi: &Float, prec: Precision) -> Result<Complex> {
    let r = reduce_angle(phi, prec)?;
    let bits = r.prec();
    // u = z/(1−z) = −1/2 + (i/2)·cot(φ/2)
    let half = Float::with_val(bits, &r / 2u32);
    let cot = half.cot();
    let u = Complex::new(Float::with_val(bits, -0.5), cot / 2u32);
    let poly = polylog_neg_poly(k);
    let mut acc = Complex::zero(bits);
    for c in poly.iter().rev() {
        acc = acc.mul(&u);
        acc.re += c;
    }
    Ok(Complex::new(
        Float::with_val(prec.bits(), &acc.re),
        Float::with_val(prec.bits(), &acc.im),
    ))
}

/// Complex value with its derivative in w.
#[derive(Clone)]
struct CDual {
    v: Complex,
    d: Complex,
}

impl CDual {
    fn add(&self, o: &CDual) -> CDual {
        CDual {
            v: self.v.add(&o.v),
            d: self.d.add(&o.d),
        }
    }

    fn mul_real(&self, o: &Dual) -> CDual {
        CDual {
            v: self.v.scale(&o.v),
            d: self.d.scale(&o.v).add(&self.v.scale(&o.d)),
        }
    }
}

/// ζ_L(−k, φ) and ∂_s ζ_L(s, φ)|_{s=−k} through Hurwitz's formula
/// Li_s(e^{2πia}) = Γ(w)(2π)^{−w}[e^{iπw/2}ζ(w,a) + e^{−iπw/2}ζ(w,1−a)], w = 1 − s.
pub fn lerch_point(k: u32, phi: &Float, prec: Precision) -> Result<LerchPoint> {
    let r = reduce_angle(phi, prec)?;
    let bits = r.prec();
    let inner = prec.raised(10);
    let pi = Float::with_val(bits, inner.pi());
    let two_pi = Float::with_val(bits, &pi * 2u32);
    let a = Float::with_val(bits, &r / &two_pi);
    let b = Float::with_val(bits, 1u32 - &a);
    let w = Float::with_val(bits, k + 1);

    // Regular Euler–Maclaurin parts of ζ(w,a), ζ(w,1−a) with a common N.
    let (pa, pb) = loop_common_parts(&w, &a, &b, bits)?;

    // e^{±iπw/2} as duals in w
    let theta = Float::with_val(bits, &pi * &w) / 2u32;
    let ep_v = Complex::cis(&theta);
    let em_v = ep_v.conj();
    let half_pi = Float::with_val(bits, &pi / 2u32);
    let ep = CDual {
        d: ep_v.mul_i().scale(&half_pi),
        v: ep_v,
    };
    let em = CDual {
        d: em_v.mul_i().scale(&half_pi).neg(),
        v: em_v,
    };
    let q = ep.mul_real(&pa.regular).add(&em.mul_real(&pb.regular));

    // Pole terms [e^{iπw/2}X₁^{1−w} + e^{−iπw/2}X₂^{1−w}]/(w−1).
    let lx1 = Float::with_val(bits, pa.x.ln_ref());
    let lx2 = Float::with_val(bits, pb.x.ln_ref());
    let pole = if k == 0 {
        // h(1) = 0; value h′(1), derivative h″(1)/2 with
        // h′ = α₁′e^{α₁} + α₂′e^{α₂}, e^{α₁(1)} = i, e^{α₂(1)} = −i.
        let alpha1 = Complex::new(-lx1.clone(), half_pi.clone());
        let alpha2 = Complex::new(-lx2.clone(), -half_pi.clone());
        let i = Complex::new(Float::new(bits), Float::with_val(bits, 1));
        let mi = i.neg();
        let v = alpha1.mul(&i).add(&alpha2.mul(&mi));
        let d2 = alpha1.mul(&alpha1).mul(&i).add(&alpha2.mul(&alpha2).mul(&mi));
        CDual {
            v,
            d: d2.scale(&Float::with_val(bits, 0.5)),
        }
    } else {
        let wm1 = Float::with_val(bits, k);
        let x1 = (-Float::with_val(bits, &wm1 * &lx1)).exp(); // X^{1-w}
        let x2 = (-Float::with_val(bits, &wm1 * &lx2)).exp();
        let n1 = CDual {
            v: ep.v.scale(&x1),
            d: ep.d.scale(&x1).sub(&ep.v.scale(&Float::with_val(bits, &x1 * &lx1))),
        };
        let n2 = CDual {
            v: em.v.scale(&x2),
            d: em.d.scale(&x2).sub(&em.v.scale(&Float::with_val(bits, &x2 * &lx2))),
        };
        let num = n1.add(&n2);
        let inv = Float::with_val(bits, wm1.recip_ref());
        let inv2 = Float::with_val(bits, inv.square_ref());
        CDual {
            v: num.v.scale(&inv),
            d: num.d.scale(&inv).sub(&num.v.scale(&inv2)),
        }
    };
    let bracket = q.add(&pole);

    // G(w) = Γ(w)(2π)^{−w}, G′ = G(ψ(w) − log 2π), ψ(k+1) = H_k − γ.
    let lg = Float::with_val(bits, two_pi.ln_ref());
    let g_v = Float::with_val(bits, factorial(k)) * (-Float::with_val(bits, &lg * &w)).exp();
    let psi = Float::with_val(bits, &harmonic_u(k as usize)) - Float::with_val(bits, inner.euler_gamma());
    let g_d = Float::with_val(bits, &g_v * (psi - &lg));
    let l = bracket.mul_real(&Dual { v: g_v, d: g_d });

    let out = |c: &Complex| Complex::new(Float::with_val(prec.bits(), &c.re), Float::with_val(prec.bits(), &c.im));
    Ok(LerchPoint {
        k,
        phi: Float::with_val(prec.bits(), &r),
        value: out(&l.v),
        derivative: out(&l.d.neg()),
    })
}

/// Hurwitz parts for a and 1−a sharing the same cut-off N (needed so the
/// pole terms can be combined analytically at w = 1).
fn loop_common_parts(
    w: &Float,
    a: &Float,
    b: &Float,
    bits: u32,
) -> Result<(super::zeta::HurwitzParts, super::zeta::HurwitzParts)> {
    let pa = hurwitz_parts(w, a, bits)?;
    let mut n = Float::with_val(bits, &pa.x - a).to_f64().round() as usize;
    if let Ok(pb) = super::zeta::hurwitz_parts_fixed(w, b, n, bits) {
        return Ok((pa, pb));
    }
    for _ in 0..6 {
        n *= 2;
        if let (Ok(pa), Ok(pb)) = (
            super::zeta::hurwitz_parts_fixed(w, a, n, bits),
            super::zeta::hurwitz_parts_fixed(w, b, n, bits),
        ) {
            return Ok((pa, pb));
        }
    }
    Err(Error::Consistency(
        "Euler-Maclaurin tails for a and 1-a did not converge".into(),
    ))
}

/// ∂_s ζ_L(s, φ) at s = −k.
pub fn lerch_prime_neg(k: u32, phi: &Float, prec: Precision) -> Result<Complex> {
    Ok(lerch_point(k, phi, prec)?.derivative)
}

/// R̃₀(φ, x) = Σ_k (ζ′_L(−k,φ) + ζ_L(−k,φ)H_k/2)·x^k/k!, for complex x with
/// |x| below the distance from φ to 2πℤ.
pub fn r_tilde0(phi: &Float, x: &Complex, prec: Precision) -> Result<Complex> {
    let r = reduce_angle(phi, prec)?;
    let bits = prec.bits() + INNER_GUARD;
    let two_pi = Float::with_val(bits, prec.raised(10).pi() * 2u32);
    let radius = Float::with_val(bits, &two_pi - &r).min(&r);
    let xabs = x.abs();
    if xabs >= radius {
        return Err(Error::Argument(format!(
            "|x| = {} outside the convergence radius {} of the Lerch generating series",
            xabs.to_f64(),
            radius.to_f64()
        )));
    }
    let eps = pow10(-(prec.digits() as i32) - 3, bits);
    let x = Complex::new(Float::with_val(bits, &x.re), Float::with_val(bits, &x.im));
    let mut acc = Complex::zero(bits);
    let mut xpow = Complex::real(Float::with_val(bits, 1)); // x^k/k!
    let mut small_run = 0;
    for k in 0..20_000u32 {
        let lp = lerch_point(k, &r, prec)?;
        let h = Float::with_val(bits, &harmonic_u(k as usize)) / 2u32;
        let c = Complex::new(
            Float::with_val(bits, &lp.derivative.re),
            Float::with_val(bits, &lp.derivative.im),
        )
        .add(&Complex::new(Float::with_val(bits, &lp.value.re), Float::with_val(bits, &lp.value.im)).scale(&h));
        let term = c.mul(&xpow);
        acc = acc.add(&term);
        let scale = acc.abs().max(&Float::with_val(bits, 1));
        if term.abs() <= Float::with_val(bits, &eps * &scale) {
            small_run += 1;
            if small_run >= 3 {
                return Ok(Complex::new(
                    Float::with_val(prec.bits(), &acc.re),
                    Float::with_val(prec.bits(), &acc.im),
                ));
            }
        } else {
            small_run = 0;
        }
        xpow = xpow.mul(&x).scale(&Float::with_val(bits, k + 1).recip());
    }
    Err(Error::Accuracy {
        partial: format!("{} + {}i", acc.re.to_f64(), acc.im.to_f64()),
        estimate: f64::NAN,
        tolerance: eps.to_f64(),
    })
}

/// R(ϑ, x) = R̃₀(ϑ, x) − R̃₀(−ϑ, −x).
pub fn r_two(theta: &Float, x: &Complex, prec: Precision) -> Result<Complex> {
    let plus = r_tilde0(theta, x, prec)?;
    let neg_theta = Float::with_val(theta.prec(), -theta);
    let minus = r_tilde0(&neg_theta, &x.neg(), prec)?;
    Ok(plus.sub(&minus))
}
