//! Shared numeric plumbing: complex exponentials, double-double arithmetic,
//! and Gauss-Legendre panel quadrature.

pub mod dd;
pub mod quad;

pub use dd::Dd;
pub use quad::{gauss_legendre, integrate, QuadOutcome};

use num::complex::Complex64;

/// e(x) = exp(2 pi i x).
#[inline]
pub fn e(x: f64) -> Complex64 {
    let (s, c) = (std::f64::consts::TAU * x).sin_cos();
    Complex64::new(c, s)
}

/// e(a/c) with the integer phase reduced mod c first, so complete
/// exponential sums keep full accuracy for large a.
#[inline]
pub fn e_frac(a: i128, c: u64) -> Complex64 {
    let c_i = c as i128;
    let r = a.rem_euclid(c_i) as f64;
    e(r / c as f64)
}

/// i^k for integer k (exact unit).
#[inline]
pub fn i_pow(k: u32) -> Complex64 {
    match k % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// sin(2 pi d x)/(2 pi d x) with the removable singularity filled in;
/// this is the closed form of (1/2d) * int_{-d}^{d} e(a t) da at t = x.
#[inline]
pub fn sinc_kernel(delta: f64, t: f64) -> f64 {
    let u = std::f64::consts::TAU * delta * t;
    if u.abs() < 1e-8 {
        1.0 - u * u / 6.0
    } else {
        u.sin() / u
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn e_of_half_is_minus_one() {
        let v = e(0.5);
        assert!((v.re + 1.0).abs() < 1e-15 && v.im.abs() < 1e-15);
    }

    #[test]
    fn e_frac_reduces_large_phases() {
        // e(10^12 + 1/7) must equal e(1/7) exactly up to ulp
        let big: i128 = 7 * 1_000_000_000_000 + 1;
        let v = e_frac(big, 7);
        let w = e(1.0 / 7.0);
        assert!((v - w).norm() < 1e-15);
    }

    #[test]
    fn sinc_kernel_at_zero_is_one() {
        assert_eq!(sinc_kernel(0.25, 0.0), 1.0);
        // continuity across the series/libm switch
        let a = sinc_kernel(1.0, 1.59e-9);
        let b = sinc_kernel(1.0, 1.60e-9);
        assert!((a - b).abs() < 1e-12);
    }
}
