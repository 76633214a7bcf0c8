//! Dirichlet characters to a prime modulus p, realized through a discrete
//! logarithm table.
//!
//! (Z/pZ)* is cyclic of order p-1; fix the smallest primitive root g. The
//! character of index j (0 <= j <= p-2) is
//!   chi_j(g^k) = e(j k / (p-1)),   chi_j(n) = 0 when p | n.
//! The index pair (j, dlog n) is kept exact, so multiplicativity
//! chi(mn) = chi(m) chi(n) holds at the exponent level; complex rounding
//! enters only when a value is materialized. j = (p-1)/2 is the quadratic
//! (Legendre) character; every j != 0 is primitive since p is prime.

use crate::arith;
use crate::numeric;
use num::complex::Complex64;
use std::sync::Arc;
use thiserror::Error;

/// Hard desk-scale ceiling: the dlog table is O(p) memory.
pub const MAX_MODULUS: u64 = 1_000_000;

#[derive(Debug, Error, PartialEq)]
pub enum CharacterError {
    #[error("modulus {0} is not an odd prime >= 3")]
    NotPrime(u64),
    #[error("modulus {0} exceeds the desk-scale ceiling {MAX_MODULUS}")]
    ModulusTooLarge(u64),
    #[error("character index {index} out of range 0..={max}")]
    IndexOutOfRange { index: u64, max: u64 },
    #[error("gauss sum requested for the principal character (|tau| != sqrt(p)); value is {re}+{im}i")]
    PrincipalCharacter { re: f64, im: f64 },
}

/// A prime p together with a primitive root and the full discrete-log table.
#[derive(Debug)]
pub struct PrimeModulus {
    p: u64,
    g: u64,
    /// dlog[r] = k with g^k = r (mod p), for r in 1..p. Entry 0 is unused.
    dlog: Vec<u32>,
    /// Unit roots e(t/(p-1)) for t in 0..p-1, shared by all characters mod p.
    roots: Vec<Complex64>,
}

impl PrimeModulus {
    pub fn new(p: u64) -> Result<Arc<Self>, CharacterError> {
        if p > MAX_MODULUS {
            return Err(CharacterError::ModulusTooLarge(p));
        }
        if p < 3 || !arith::is_prime(p) {
            return Err(CharacterError::NotPrime(p));
        }
        let g = arith::primitive_root(p);
        let mut dlog = vec![0u32; p as usize];
        let mut x = 1u64;
        for k in 0..(p - 1) {
            debug_assert!(k == 0 || dlog[x as usize] == 0 || x == 1);
            dlog[x as usize] = k as u32;
            x = x * g % p;
        }
        let order = (p - 1) as usize;
        let roots = (0..order)
            .map(|t| numeric::e(t as f64 / order as f64))
            .collect();
        Ok(Arc::new(PrimeModulus { p, g, dlog, roots }))
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn generator(&self) -> u64 {
        self.g
    }

    /// Discrete log of r (must be nonzero mod p).
    pub fn dlog(&self, r: u64) -> u32 {
        debug_assert!(r % self.p != 0);
        self.dlog[(r % self.p) as usize]
    }
}

#[derive(Debug, Clone)]
pub struct DirichletCharacter {
    modulus: Arc<PrimeModulus>,
    index: u64,
}

/// Build the character of index j mod the prime p; j = (p-1)/2 gives the
/// quadratic character, j = 0 the principal one.
pub fn make_character(p: u64, j: u64) -> Result<DirichletCharacter, CharacterError> {
    let modulus = PrimeModulus::new(p)?;
    if j > p - 2 {
        return Err(CharacterError::IndexOutOfRange { index: j, max: p - 2 });
    }
    Ok(DirichletCharacter { modulus, index: j })
}

/// chi(n) as a complex number (see [`DirichletCharacter::value`]).
pub fn char_value(chi: &DirichletCharacter, n: i64) -> Complex64 {
    chi.value(n)
}

impl DirichletCharacter {
    pub fn from_modulus(modulus: Arc<PrimeModulus>, j: u64) -> Result<Self, CharacterError> {
        let p = modulus.p;
        if j > p - 2 {
            return Err(CharacterError::IndexOutOfRange { index: j, max: p - 2 });
        }
        Ok(DirichletCharacter { modulus, index: j })
    }

    pub fn p(&self) -> u64 {
        self.modulus.p
    }

    pub fn index(&self) -> u64 {
        self.index
    }

    pub fn modulus(&self) -> &Arc<PrimeModulus> {
        &self.modulus
    }

    pub fn is_principal(&self) -> bool {
        self.index == 0
    }

    /// Primitive iff non-principal (prime modulus).
    pub fn is_primitive(&self) -> bool {
        self.index != 0
    }

    pub fn is_quadratic(&self) -> bool {
        self.index == (self.modulus.p - 1) / 2
    }

    /// Exponent t with chi(n) = e(t/(p-1)), or None when p | n.
    /// This is the exact representation: multiplicativity is integer
    /// arithmetic on these exponents mod p-1.
    pub fn exponent(&self, n: i64) -> Option<u64> {
        let p = self.modulus.p;
        let r = n.rem_euclid(p as i64) as u64;
        if r == 0 {
            return None;
        }
        let k = self.modulus.dlog[r as usize] as u64;
        Some(self.index * k % (p - 1))
    }

    pub fn value(&self, n: i64) -> Complex64 {
        match self.exponent(n) {
            None => Complex64::new(0.0, 0.0),
            Some(t) => self.modulus.roots[t as usize],
        }
    }

    pub fn conjugate(&self) -> DirichletCharacter {
        let p = self.modulus.p;
        let j = if self.index == 0 { 0 } else { p - 1 - self.index };
        DirichletCharacter {
            modulus: Arc::clone(&self.modulus),
            index: j,
        }
    }
}

/// Gauss sum tau_chi = sum_{x mod p} chi(x) e(x/p), by direct summation.
///
/// The principal character is rejected (its sum is -1, not of modulus
/// sqrt(p)) so a caller cannot mistake it for a primitive normalization.
pub fn gauss_sum(chi: &DirichletCharacter) -> Result<Complex64, CharacterError> {
    let p = chi.modulus.p;
    let mut acc = Complex64::new(0.0, 0.0);
    for x in 1..p {
        acc += chi.value(x as i64) * numeric::e(x as f64 / p as f64);
    }
    if chi.is_principal() {
        return Err(CharacterError::PrincipalCharacter {
            re: acc.re,
            im: acc.im,
        });
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tolerances::EXACT_F64;

    #[test]
    fn dlog_is_a_bijection() {
        let m = PrimeModulus::new(101).unwrap();
        let mut seen = vec![false; 100];
        for r in 1..101u64 {
            let k = m.dlog(r) as usize;
            assert!(!seen[k]);
            seen[k] = true;
            assert_eq!(arith::mod_pow(m.generator(), k as u64, 101), r);
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        assert_eq!(make_character(8, 1).unwrap_err(), CharacterError::NotPrime(8));
        assert!(matches!(
            make_character(7, 6),
            Err(CharacterError::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn quadratic_mod_7_at_2() {
        // j = 3 = (7-1)/2 is the Legendre symbol; 2 = 3^2 (mod 7) is a square
        let chi = make_character(7, 3).unwrap();
        assert!(chi.is_quadratic());
        assert!((chi.value(2) - Complex64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn zero_and_one() {
        for j in [0u64, 1, 3] {
            let chi = make_character(7, j).unwrap();
            assert_eq!(chi.value(0), Complex64::new(0.0, 0.0));
            assert_eq!(chi.value(7), Complex64::new(0.0, 0.0));
            assert!((chi.value(1) - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn principal_character_is_one_on_units() {
        let chi = make_character(7, 0).unwrap();
        for n in 1..7i64 {
            assert!((chi.value(n) - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn quadratic_mod_5_at_2_is_minus_one() {
        // squares mod 5 are {1, 4}; 2 is a non-residue
        let chi = make_character(5, 2).unwrap();
        assert!((chi.value(2) - Complex64::new(-1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn periodicity_on_random_points() {
        let chi = make_character(13, 5).unwrap();
        let mut state = 0x9e3779b97f4a7c15u64;
        for _ in 0..100 {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let n = (state >> 16) as i64 % 100_000;
            assert!((chi.value(n) - chi.value(n + 13)).norm() < 1e-15);
        }
    }

    #[test]
    fn multiplicativity_is_exact_on_exponents() {
        for (p, j) in [(11u64, 3u64), (13, 5), (101, 7)] {
            let chi = make_character(p, j).unwrap();
            for m in 1..p.min(60) {
                for n in 1..p.min(60) {
                    if m % p == 0 || n % p == 0 {
                        continue;
                    }
                    let lhs = chi.exponent((m * n) as i64).unwrap();
                    let rhs =
                        (chi.exponent(m as i64).unwrap() + chi.exponent(n as i64).unwrap()) % (p - 1);
                    assert_eq!(lhs, rhs, "p={p} j={j} m={m} n={n}");
                }
            }
        }
    }

    #[test]
    fn gauss_sum_quadratic_mod_5_is_sqrt_5() {
        let chi = make_character(5, 2).unwrap();
        let tau = gauss_sum(&chi).unwrap();
        assert!((tau.re - 5.0f64.sqrt()).abs() < EXACT_F64);
        assert!(tau.im.abs() < EXACT_F64);
    }

    #[test]
    fn gauss_sum_quadratic_mod_3_is_i_sqrt_3() {
        let chi = make_character(3, 1).unwrap();
        let tau = gauss_sum(&chi).unwrap();
        assert!(tau.re.abs() < EXACT_F64);
        assert!((tau.im - 3.0f64.sqrt()).abs() < EXACT_F64);
    }

    #[test]
    fn gauss_sum_rejects_principal() {
        let chi = make_character(7, 0).unwrap();
        match gauss_sum(&chi) {
            Err(CharacterError::PrincipalCharacter { re, im }) => {
                assert!((re + 1.0).abs() < EXACT_F64 && im.abs() < EXACT_F64);
            }
            other => panic!("expected principal-character flag, got {other:?}"),
        }
    }

    #[test]
    fn gauss_modulus_and_orthogonality_all_p_to_101() {
        for p in arith::primes_in(3, 101) {
            let modulus = PrimeModulus::new(p).unwrap();
            for j in 1..(p - 1) {
                let chi = DirichletCharacter::from_modulus(Arc::clone(&modulus), j).unwrap();
                let tau = gauss_sum(&chi).unwrap();
                assert!(
                    (tau.norm() - (p as f64).sqrt()).abs() < EXACT_F64,
                    "p={p} j={j}"
                );
                let total: Complex64 = (0..p as i64).map(|n| chi.value(n)).sum();
                assert!(total.norm() < EXACT_F64, "orthogonality p={p} j={j}");
            }
        }
    }

    #[test]
    fn conjugate_conjugates() {
        let chi = make_character(13, 5).unwrap();
        let bar = chi.conjugate();
        for n in 0..13i64 {
            assert!((bar.value(n) - chi.value(n).conj()).norm() < 1e-15);
        }
    }
}
