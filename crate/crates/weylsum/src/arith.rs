//! Elementary number-theoretic utilities: gcd, modular inverses, primality,
//! factorization, Moebius, totient, divisors, primitive roots.
//!
//! Everything here is deterministic. Primality is trial division (moduli at
//! desk scale stay below 10^6, so sqrt-bounded trial division is exact and
//! instant); primitive roots are found by testing generators against the
//! prime factorization of p-1.

pub fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn gcd_i64(a: i64, b: i64) -> u64 {
    gcd_u64(a.unsigned_abs(), b.unsigned_abs())
}

pub fn gcd3(a: i64, b: i64, c: u64) -> u64 {
    gcd_u64(gcd_i64(a, b), c)
}

/// Modular inverse of a mod m via extended Euclid. None when gcd(a, m) != 1.
/// By convention the inverse mod 1 is 0.
pub fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let (mut old_r, mut r) = (a as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        let tmp = old_r - q * r;
        old_r = r;
        r = tmp;
        let tmp = old_s - q * s;
        old_s = s;
        s = tmp;
    }
    if old_r.abs() != 1 {
        return None;
    }
    // old_r may be -1 when a's residue was negative-free; normalize
    let inv = if old_r == 1 { old_s } else { -old_s };
    Some(inv.rem_euclid(m as i128) as u64)
}

pub fn mod_pow(base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc: u128 = 1;
    let mut b = base as u128 % m as u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m as u128;
        }
        b = b * b % m as u128;
        exp >>= 1;
    }
    acc as u64
}

/// Deterministic primality by trial division.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// All primes in [lo, hi] inclusive.
pub fn primes_in(lo: u64, hi: u64) -> Vec<u64> {
    (lo.max(2)..=hi).filter(|&n| is_prime(n)).collect()
}

/// Prime factorization as (prime, exponent) pairs, ascending.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            let mut e = 0u32;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn moebius(n: u64) -> i64 {
    let mut mu = 1i64;
    for (_, e) in factorize(n) {
        if e > 1 {
            return 0;
        }
        mu = -mu;
    }
    mu
}

pub fn totient(n: u64) -> u64 {
    let mut phi = n;
    for (p, _) in factorize(n) {
        phi = phi / p * (p - 1);
    }
    phi
}

pub fn divisor_count(n: u64) -> u64 {
    factorize(n).iter().map(|&(_, e)| (e + 1) as u64).product()
}

/// All divisors of n, ascending.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut out = vec![1u64];
    for (p, e) in factorize(n) {
        let prev = out.clone();
        let mut pe = 1u64;
        for _ in 0..e {
            pe *= p;
            out.extend(prev.iter().map(|d| d * pe));
        }
    }
    out.sort_unstable();
    out
}

/// Smallest primitive root of the prime p.
///
/// g is a generator iff g^((p-1)/r) != 1 mod p for every prime r | p-1.
pub fn primitive_root(p: u64) -> u64 {
    assert!(is_prime(p), "primitive_root requires a prime");
    if p == 2 {
        return 1;
    }
    let order = p - 1;
    let factors: Vec<u64> = factorize(order).into_iter().map(|(q, _)| q).collect();
    'candidate: for g in 2..p {
        for &q in &factors {
            if mod_pow(g, order / q, p) == 1 {
                continue 'candidate;
            }
        }
        return g;
    }
    unreachable!("every prime has a primitive root");
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality_basics() {
        assert!(is_prime(2) && is_prime(3) && is_prime(101) && is_prime(1009));
        assert!(!is_prime(1) && !is_prime(0) && !is_prime(91) && !is_prime(1000));
    }

    #[test]
    fn inverse_round_trips() {
        for m in [2u64, 7, 12, 101, 1009, 99991] {
            for a in 1..m.min(200) {
                if gcd_u64(a, m) == 1 {
                    let inv = mod_inverse(a, m).unwrap();
                    assert_eq!(a as u128 * inv as u128 % m as u128, 1 % m as u128);
                } else {
                    assert!(mod_inverse(a, m).is_none());
                }
            }
        }
        assert_eq!(mod_inverse(1, 1), Some(0));
    }

    #[test]
    fn totient_and_moebius_small_table() {
        let phis: Vec<u64> = (1..=12).map(totient).collect();
        assert_eq!(phis, vec![1, 1, 2, 2, 4, 2, 6, 4, 6, 4, 10, 4]);
        let mus: Vec<i64> = (1..=12).map(moebius).collect();
        assert_eq!(mus, vec![1, -1, -1, 0, -1, 1, -1, 0, 0, 1, -1, 0]);
    }

    #[test]
    fn divisors_of_12() {
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisor_count(12), 6);
    }

    #[test]
    fn primitive_roots_generate() {
        for p in [3u64, 5, 7, 11, 13, 101, 257] {
            let g = primitive_root(p);
            let mut seen = vec![false; p as usize];
            let mut x = 1u64;
            for _ in 0..p - 1 {
                assert!(!seen[x as usize], "g^k cycled early for p={p}");
                seen[x as usize] = true;
                x = x * g % p;
            }
            assert_eq!(x, 1);
        }
    }

    #[test]
    fn totient_sums_match_divisor_identity() {
        // sum_{d | n} phi(d) = n
        for n in 1..=500u64 {
            let s: u64 = divisors(n).into_iter().map(totient).sum();
            assert_eq!(s, n);
        }
    }
}
