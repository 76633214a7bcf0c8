//! Complete exponential sums: Kloosterman sums S(a,b;c), Ramanujan sums,
//! Weil-bound margins, and the gcd double-sum bound used for the non-zero
//! frequencies.
//!
//! Kloosterman sums are evaluated by direct O(c) summation with exact
//! integer phase reduction (the oracle role wants exactness, and desk-scale
//! moduli stay small). The conjugate symmetry x <-> -x makes every S(a,b;c)
//! real; the imaginary part is asserted to cancel.

use crate::arith;
use crate::numeric;
use crate::tolerances;

/// Inverse table mod c for batch evaluation: inv[x] = x^{-1} mod c for
/// (x, c) = 1, and 0 otherwise.
#[derive(Debug, Clone)]
pub struct InverseTable {
    c: u64,
    inv: Vec<u64>,
}

impl InverseTable {
    pub fn new(c: u64) -> InverseTable {
        assert!(c >= 1);
        let mut inv = vec![0u64; c as usize];
        if c == 1 {
            // single residue 0, conventionally its own inverse
            return InverseTable { c, inv };
        }
        for x in 1..c {
            if arith::gcd_u64(x, c) == 1 {
                inv[x as usize] = arith::mod_inverse(x, c).unwrap();
            }
        }
        InverseTable { c, inv }
    }

    pub fn modulus(&self) -> u64 {
        self.c
    }

    #[inline]
    pub fn inv(&self, x: u64) -> u64 {
        self.inv[(x % self.c) as usize]
    }
}

/// S(a,b;c) = sum_{x mod c, (x,c)=1} e((a x + b x^{-1})/c), real-valued.
pub fn kloosterman(a: i64, b: i64, c: u64) -> f64 {
    let table = InverseTable::new(c);
    kloosterman_with(&table, a, b)
}

/// Kloosterman sum re-using a precomputed inverse table for the modulus.
pub fn kloosterman_with(table: &InverseTable, a: i64, b: i64) -> f64 {
    let c = table.c;
    if c == 1 {
        return 1.0; // empty phase: the single term x = 0 contributes e(0)
    }
    let ci = c as i128;
    let ar = (a as i128).rem_euclid(ci);
    let br = (b as i128).rem_euclid(ci);
    let mut re = 0.0f64;
    let mut im = 0.0f64;
    for x in 1..c {
        let xinv = table.inv[x as usize];
        if xinv == 0 {
            continue; // (x, c) > 1
        }
        let phase = (ar * x as i128 + br * xinv as i128).rem_euclid(ci);
        let v = numeric::e(phase as f64 / c as f64);
        re += v.re;
        im += v.im;
    }
    assert!(
        im.abs() < tolerances::DUAL_FORMULA,
        "Kloosterman imaginary part failed to cancel: {im} for S({a},{b};{c})"
    );
    re
}

/// Ramanujan sum c_c(a) = sum_{d | (a,c)} d mu(c/d), exact integer.
/// Equals S(a, 0; c).
pub fn ramanujan_sum(a: i64, c: u64) -> i64 {
    assert!(c >= 1);
    let g = arith::gcd_u64(a.unsigned_abs(), c); // gcd(0, c) = c covers a = 0
    let mut acc = 0i64;
    for d in arith::divisors(g) {
        acc += d as i64 * arith::moebius(c / d);
    }
    acc
}

/// |S(a,b;c)| / (d(c) sqrt(c) sqrt(gcd(a,b,c))): at most 1 up to rounding.
pub fn weil_margin(a: i64, b: i64, c: u64) -> f64 {
    let s = kloosterman(a, b, c).abs();
    let g = arith::gcd3(a, b, c);
    let bound = arith::divisor_count(c) as f64 * (c as f64).sqrt() * (g as f64).sqrt();
    s / bound
}

/// sum_{1<=a<=x} sum_{1<=b<=y} gcd(a,b,c) by brute force, with the
/// bound flag sum <= x*y.
pub fn gcd_triple_sum(x: u64, y: u64, c: u64) -> (u128, bool) {
    assert!(x >= 1 && y >= 1);
    let mut total: u128 = 0;
    for a in 1..=x {
        let ga = arith::gcd_u64(a, c);
        for b in 1..=y {
            total += arith::gcd_u64(ga, b) as u128;
        }
    }
    (total, total <= x as u128 * y as u128)
}
