//! Minimal complex arithmetic over arbitrary-precision floats.

use rug::Float;

/// A complex number with separate real and imaginary MPFR parts.
#[derive(Clone, Debug, PartialEq)]
pub struct Complex {
    pub re: Float,
    pub im: Float,
}

impl Complex {
    pub fn new(re: Float, im: Float) -> Self {
        Complex { re, im }
    }

    pub fn zero(bits: u32) -> Self {
        Complex::new(Float::new(bits), Float::new(bits))
    }

    pub fn real(re: Float) -> Self {
        let bits = re.prec();
        Complex::new(re, Float::new(bits))
    }

    /// e^{iθ}.
    pub fn cis(theta: &Float) -> Self {
        let (s, c) = theta.clone().sin_cos(Float::new(theta.prec()));
        Complex::new(c, s)
    }

    pub fn prec(&self) -> u32 {
        self.re.prec()
    }

    pub fn add(&self, o: &Complex) -> Complex {
        let b = self.prec();
        Complex::new(
            Float::with_val(b, &self.re + &o.re),
            Float::with_val(b, &self.im + &o.im),
        )
    }

    pub fn sub(&self, o: &Complex) -> Complex {
        let b = self.prec();
        Complex::new(
            Float::with_val(b, &self.re - &o.re),
            Float::with_val(b, &self.im - &o.im),
        )
    }

    pub fn mul(&self, o: &Complex) -> Complex {
        let b = self.prec();
        let re = Float::with_val(b, &self.re * &o.re) - Float::with_val(b, &self.im * &o.im);
        let im = Float::with_val(b, &self.re * &o.im) + Float::with_val(b, &self.im * &o.re);
        Complex::new(re, im)
    }

    pub fn scale(&self, x: &Float) -> Complex {
        let b = self.prec();
        Complex::new(Float::with_val(b, &self.re * x), Float::with_val(b, &self.im * x))
    }

    pub fn neg(&self) -> Complex {
        Complex::new(
            Float::with_val(self.prec(), -&self.re),
            Float::with_val(self.prec(), -&self.im),
        )
    }

    pub fn conj(&self) -> Complex {
        Complex::new(self.re.clone(), Float::with_val(self.prec(), -&self.im))
    }

    /// Multiplication by i.
    pub fn mul_i(&self) -> Complex {
        Complex::new(Float::with_val(self.prec(), -&self.im), self.re.clone())
    }

    pub fn norm_sqr(&self) -> Float {
        let b = self.prec();
        Float::with_val(b, self.re.square_ref()) + Float::with_val(b, self.im.square_ref())
    }

    pub fn abs(&self) -> Float {
        self.norm_sqr().sqrt()
    }

    pub fn recip(&self) -> Complex {
        let n = self.norm_sqr();
        let b = self.prec();
        Complex::new(Float::with_val(b, &self.re / &n), Float::with_val(b, -&self.im) / &n)
    }

    pub fn div(&self, o: &Complex) -> Complex {
        self.mul(&o.recip())
    }

    /// exp(self).
    pub fn exp(&self) -> Complex {
        let m = self.re.clone().exp();
        Complex::cis(&self.im).scale(&m)
    }

    /// Principal logarithm.
    pub fn ln(&self) -> Complex {
        let b = self.prec();
        let arg = Float::with_val(b, self.im.atan2_ref(&self.re));
        Complex::new(self.abs().ln(), arg)
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}
