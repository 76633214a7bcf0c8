//! Double-double arithmetic: an unevaluated sum `hi + lo` of two f64 giving
//! roughly 32 significant decimal digits.
//!
//! Used where plain f64 cancellation is fatal, chiefly the ascending Bessel
//! series (alternating terms up to ~1e20 larger than the result) and the
//! asymptotic phase reduction. Algorithms are the classical error-free
//! transformations (TwoSum, TwoProd via FMA).

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    // requires |a| >= |b|
    let s = a + b;
    let err = b - (s - a);
    (s, err)
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let err = a.mul_add(b, -p);
    (p, err)
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };
    /// pi to double-double precision.
    pub const PI: Dd = Dd {
        hi: 3.141592653589793,
        lo: 1.2246467991473532e-16,
    };
    /// 2*pi to double-double precision.
    pub const TWO_PI: Dd = Dd {
        hi: 6.283185307179586,
        lo: 2.4492935982947064e-16,
    };

    #[inline]
    pub fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    pub fn add(self, other: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, other.hi);
        let e = e + self.lo + other.lo;
        let (hi, lo) = quick_two_sum(s, e);
        Dd { hi, lo }
    }

    #[inline]
    pub fn sub(self, other: Dd) -> Dd {
        self.add(other.neg())
    }

    #[inline]
    pub fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }

    #[inline]
    pub fn mul(self, other: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, other.hi);
        let e = e + self.hi * other.lo + self.lo * other.hi;
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }

    #[inline]
    pub fn mul_f64(self, other: f64) -> Dd {
        let (p, e) = two_prod(self.hi, other);
        let e = e + self.lo * other;
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }

    #[inline]
    pub fn div(self, other: Dd) -> Dd {
        let q1 = self.hi / other.hi;
        let r = self.sub(other.mul_f64(q1));
        let q2 = r.hi / other.hi;
        let r2 = r.sub(other.mul_f64(q2));
        let q3 = r2.hi / other.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo }.add(Dd::from_f64(q3))
    }

    #[inline]
    pub fn recip(self) -> Dd {
        Dd::ONE.div(self)
    }

    pub fn sqrt(self) -> Dd {
        if self.hi == 0.0 {
            return Dd::ZERO;
        }
        // one Newton step on the f64 estimate doubles its precision
        let x = self.hi.sqrt();
        let x_dd = Dd::from_f64(x);
        let r = self.sub(x_dd.mul(x_dd));
        x_dd.add(Dd::from_f64(r.to_f64() / (2.0 * x)))
    }

    #[inline]
    pub fn abs(self) -> Dd {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
            self.neg()
        } else {
            self
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mul_catches_sub_ulp_products() {
        // (1 + 2^-30)^2 = 1 + 2^-29 + 2^-60; the 2^-60 tail is invisible to f64
        let x = Dd::from_f64(1.0).add(Dd::from_f64((2.0f64).powi(-30)));
        let sq = x.mul(x);
        let expect_lo = (2.0f64).powi(-60);
        let got = sq.sub(Dd::from_f64(1.0)).sub(Dd::from_f64((2.0f64).powi(-29)));
        assert!((got.to_f64() - expect_lo).abs() < 1e-76);
    }

    #[test]
    fn div_roundtrip() {
        let a = Dd::from_f64(3.0).recip();
        let back = a.mul(Dd::from_f64(3.0));
        assert!((back.sub(Dd::ONE)).to_f64().abs() < 1e-31);
    }

    #[test]
    fn sqrt_two() {
        let s = Dd::from_f64(2.0).sqrt();
        let r = s.mul(s).sub(Dd::from_f64(2.0));
        assert!(r.to_f64().abs() < 1e-31);
    }

    #[test]
    fn pi_constant_consistent() {
        // 2*PI == TWO_PI at dd precision
        let d = Dd::PI.mul_f64(2.0).sub(Dd::TWO_PI);
        assert!(d.to_f64().abs() < 1e-30);
    }
}
