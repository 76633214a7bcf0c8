//! Jutila's flexible circle method: a moduli set Phi in [Q, 2Q] coprime to
//! the conductor, and the step function
//!
//!   I~(alpha) = (1/(2 delta L)) sum_{q in Phi} sum*_{d mod q} 1_[d/q - delta, d/q + delta](alpha),
//!
//! with L = sum_{q in Phi} phi(q), approximating the indicator of [0, 1].
//! Interval endpoints are exact rationals, so breakpoint merging and the L2
//! distance integral are computed exactly (BigRational sweep line); floats
//! appear only when a value is handed back to the caller.

use crate::arith;
use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Zero};
use std::io::Write;
use thiserror::Error;

pub type Rat = BigRational;

/// Exact rational from an f64 (every finite f64 is a dyadic rational).
pub fn rat_from_f64(x: f64) -> Rat {
    BigRational::from_float(x).expect("finite float")
}

pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

#[derive(Debug, Error, PartialEq)]
pub enum CircleError {
    #[error("moduli scale Q must be >= 2, got {0}")]
    ScaleTooSmall(f64),
    #[error("no admissible moduli in [{lo}, {hi}] (mode {mode:?}, p = {p}); widen Q")]
    EmptyModuli {
        lo: u64,
        hi: u64,
        mode: ModuliMode,
        p: u64,
    },
    #[error("delta must be positive")]
    NonPositiveDelta,
    #[error("interval budget exceeded: L = {l} reduced fractions")]
    IntervalBudget { l: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModuliMode {
    /// All primes in [Q, 2Q] except p.
    Primes,
    /// All integers in [Q, 2Q] coprime to p.
    AllCoprime,
}

/// The moduli set Phi with its exact mass L = sum phi(q).
#[derive(Debug, Clone)]
pub struct ModuliSet {
    q_scale: f64,
    p: u64,
    members: Vec<u64>,
    l_mass: u64,
}

/// Build Phi from the scale Q (interval [Q, 2Q], endpoints included).
pub fn build_moduli(q_scale: f64, p: u64, mode: ModuliMode) -> Result<ModuliSet, CircleError> {
    if q_scale < 2.0 {
        return Err(CircleError::ScaleTooSmall(q_scale));
    }
    let lo = q_scale.ceil() as u64;
    let hi = (2.0 * q_scale).floor() as u64;
    let members: Vec<u64> = (lo..=hi)
        .filter(|&q| match mode {
            ModuliMode::Primes => arith::is_prime(q) && q != p,
            ModuliMode::AllCoprime => arith::gcd_u64(q, p) == 1,
        })
        .collect();
    if members.is_empty() {
        return Err(CircleError::EmptyModuli { lo, hi, mode, p });
    }
    Ok(ModuliSet::from_members(q_scale, p, members))
}

impl ModuliSet {
    /// Explicit member list (used for hand-built sets in tests and small
    /// experiments); the mass is recomputed from scratch.
    pub fn from_members(q_scale: f64, p: u64, mut members: Vec<u64>) -> ModuliSet {
        members.sort_unstable();
        members.dedup();
        let l_mass = members.iter().map(|&q| arith::totient(q)).sum();
        ModuliSet {
            q_scale,
            p,
            members,
            l_mass,
        }
    }

    pub fn q_scale(&self) -> f64 {
        self.q_scale
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn members(&self) -> &[u64] {
        &self.members
    }

    /// L = sum_{q in Phi} phi(q), exact.
    pub fn l_mass(&self) -> u64 {
        self.l_mass
    }

    /// L >= Q^2 / log-factor check, reported (not enforced): the epsilon in
    /// the mass hypothesis is operationalized as log normalization.
    pub fn mass_ratio_log_normalized(&self) -> f64 {
        let q = self.q_scale;
        self.l_mass as f64 / (q * q / q.ln().max(1.0))
    }
}

/// The step function I~ with exact rational breakpoints.
#[derive(Debug, Clone)]
pub struct JutilaApprox {
    moduli: ModuliSet,
    delta: Rat,
    /// 1/(2 delta L): the height contributed by one covering interval.
    unit: Rat,
    /// Interval start/end positions, each sorted ascending.
    starts: Vec<Rat>,
    ends: Vec<Rat>,
    /// Canonical merged list: (position, value on [position, next_position)).
    breakpoints: Vec<(Rat, Rat)>,
    /// True when 1/Q^2 <= delta <= 1/Q (the recommended operating window;
    /// outside it the approximation is still well-defined).
    pub delta_in_recommended_range: bool,
}

/// Expand every reduced fraction d/q (q in Phi, 1 <= d <= q, gcd(d,q)=1)
/// to [d/q - delta, d/q + delta] and merge into a canonical step function.
pub fn build_itilde(moduli: &ModuliSet, delta: Rat) -> Result<JutilaApprox, CircleError> {
    if delta <= Rat::zero() {
        return Err(CircleError::NonPositiveDelta);
    }
    let l = moduli.l_mass();
    if l > 4_000_000 {
        return Err(CircleError::IntervalBudget { l });
    }
    let q_scale = moduli.q_scale();
    let delta_f = rat_to_f64(&delta);
    let delta_in_recommended_range =
        delta_f >= 1.0 / (q_scale * q_scale) - 1e-15 && delta_f <= 1.0 / q_scale + 1e-15;

    let mut starts = Vec::with_capacity(l as usize);
    let mut ends = Vec::with_capacity(l as usize);
    for &q in moduli.members() {
        for d in 1..=q {
            if arith::gcd_u64(d, q) == 1 {
                let center = rat(d as i64, q as i64);
                starts.push(&center - &delta);
                ends.push(&center + &delta);
            }
        }
    }
    starts.sort();
    ends.sort();

    let unit = Rat::one() / (Rat::from_integer(BigInt::from(2)) * &delta * Rat::from_integer(BigInt::from(l)));

    // merged breakpoints with half-open [pos, next) semantics
    let mut positions: Vec<Rat> = starts.iter().chain(ends.iter()).cloned().collect();
    positions.sort();
    positions.dedup();
    let mut breakpoints = Vec::with_capacity(positions.len());
    let (mut si, mut ei) = (0usize, 0usize);
    for pos in &positions {
        while si < starts.len() && &starts[si] <= pos {
            si += 1;
        }
        while ei < ends.len() && &ends[ei] <= pos {
            ei += 1;
        }
        let count = si as i64 - ei as i64;
        debug_assert!(count >= 0);
        breakpoints.push((pos.clone(), Rat::from_integer(BigInt::from(count)) * &unit));
    }

    Ok(JutilaApprox {
        moduli: moduli.clone(),
        delta,
        unit,
        starts,
        ends,
        breakpoints,
        delta_in_recommended_range,
    })
}

/// I~(alpha) by binary search over the merged breakpoints.
pub fn itilde_value(approx: &JutilaApprox, alpha: f64) -> f64 {
    approx.value(alpha)
}

/// Exact L2 distance of I~ from the indicator of [0,1], integrated over R.
pub fn l2_error(approx: &JutilaApprox) -> f64 {
    rat_to_f64(&approx.l2_error_exact())
}

pub fn rat_to_f64(r: &Rat) -> f64 {
    // BigRational -> f64 via high-precision division
    let num = r.numer();
    let den = r.denom();
    bigint_to_f64(num) / bigint_to_f64(den)
}

fn bigint_to_f64(b: &BigInt) -> f64 {
    // num's to_f64 handles arbitrary size with correct rounding to nearest
    num::ToPrimitive::to_f64(b).unwrap_or(f64::INFINITY)
}

impl JutilaApprox {
    pub fn moduli(&self) -> &ModuliSet {
        &self.moduli
    }

    pub fn delta(&self) -> &Rat {
        &self.delta
    }

    pub fn breakpoints(&self) -> &[(Rat, Rat)] {
        &self.breakpoints
    }

    /// Pointwise value with exact closed-interval semantics: the number of
    /// intervals [d/q - delta, d/q + delta] containing alpha, times
    /// 1/(2 delta L). Matches the naive double-sum definition exactly,
    /// including at interval endpoints.
    pub fn value(&self, alpha: f64) -> f64 {
        rat_to_f64(&self.value_exact(&rat_from_f64(alpha)))
    }

    pub fn value_exact(&self, alpha: &Rat) -> Rat {
        // covering intervals: start <= alpha and end >= alpha
        let n_start_le = self.starts.partition_point(|s| s <= alpha);
        let n_end_lt = self.ends.partition_point(|e| e < alpha);
        let count = n_start_le as i64 - n_end_lt as i64;
        Rat::from_integer(BigInt::from(count)) * &self.unit
    }

    /// Total mass int I~ over R; equals 1 exactly by the normalization.
    pub fn total_mass_exact(&self) -> Rat {
        let mut acc = Rat::zero();
        for w in self.breakpoints.windows(2) {
            let len = &w[1].0 - &w[0].0;
            acc += len * &w[0].1;
        }
        acc
    }

    /// Exact integral of (I~ - 1_[0,1])^2 over R by a single sweep.
    pub fn l2_error_exact(&self) -> Rat {
        let zero = Rat::zero();
        let one = Rat::one();
        self.sweep(|seg_lo, seg_hi, h| {
            let inside = seg_lo >= &zero && seg_hi <= &one;
            let diff = if inside { h - &one } else { h.clone() };
            &diff * &diff
        })
    }

    /// int I~^2 over R (one of the three pieces of the algebraic identity
    /// |I - I~|^2 = I + I~^2 - 2 I I~).
    pub fn int_itilde_squared_exact(&self) -> Rat {
        self.sweep(|_, _, h| h * h)
    }

    /// int_{[0,1]} I~.
    pub fn int_itilde_over_unit_exact(&self) -> Rat {
        let zero = Rat::zero();
        let one = Rat::one();
        self.sweep(|seg_lo, seg_hi, h| {
            if seg_lo >= &zero && seg_hi <= &one {
                h.clone()
            } else {
                Rat::zero()
            }
        })
    }

    /// Integrate f(segment, height) * len over the hull of the breakpoints
    /// extended by [0,1]; segments are split at 0 and 1 so the indicator is
    /// constant on each piece.
    fn sweep(&self, f: impl Fn(&Rat, &Rat, &Rat) -> Rat) -> Rat {
        let zero = Rat::zero();
        let one = Rat::one();
        let mut cuts: Vec<Rat> = self.breakpoints.iter().map(|(p, _)| p.clone()).collect();
        cuts.push(zero.clone());
        cuts.push(one.clone());
        cuts.sort();
        cuts.dedup();
        let mut acc = Rat::zero();
        for w in cuts.windows(2) {
            let (lo, hi) = (&w[0], &w[1]);
            let h = self.height_on_open_segment(lo);
            let len = hi - lo;
            acc += f(lo, hi, &h) * len;
        }
        acc
    }

    /// Height of I~ on the open segment just right of `pos`.
    fn height_on_open_segment(&self, pos: &Rat) -> Rat {
        let n_start_le = self.starts.partition_point(|s| s <= pos);
        let n_end_le = self.ends.partition_point(|e| e <= pos);
        let count = n_start_le as i64 - n_end_le as i64;
        Rat::from_integer(BigInt::from(count)) * &self.unit
    }

    /// Dump (position, value) rows for plotting.
    pub fn dump_breakpoints_csv(&self, mut out: impl Write) -> std::io::Result<()> {
        writeln!(out, "position,value")?;
        for (p, v) in &self.breakpoints {
            writeln!(out, "{:.17e},{:.17e}", rat_to_f64(p), rat_to_f64(v))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::Signed;
    use rand::{Rng, SeedableRng};

    #[test]
    fn moduli_example_q10_p101() {
        let m = build_moduli(10.0, 101, ModuliMode::AllCoprime).unwrap();
        assert_eq!(m.members(), (10..=20).collect::<Vec<u64>>().as_slice());
        assert_eq!(m.l_mass(), 100);
    }

    #[test]
    fn moduli_example_excludes_p() {
        let m = build_moduli(10.0, 11, ModuliMode::AllCoprime).unwrap();
        assert!(!m.members().contains(&11));
        assert_eq!(m.l_mass(), 90);
    }

    #[test]
    fn moduli_example_primes_q2() {
        let m = build_moduli(2.0, 7, ModuliMode::Primes).unwrap();
        assert_eq!(m.members(), &[2, 3]);
        assert_eq!(m.l_mass(), 3);
    }

    #[test]
    fn moduli_errors() {
        assert!(matches!(
            build_moduli(1.0, 7, ModuliMode::Primes),
            Err(CircleError::ScaleTooSmall(_))
        ));
    }

    #[test]
    fn single_modulus_two() {
        // Phi = {2}: the only reduced fraction is 1/2, L = 1; with
        // delta = 1/4 the step function is 2 * 1_[1/4, 3/4]
        let m = ModuliSet::from_members(2.0, 7, vec![2]);
        let approx = build_itilde(&m, rat(1, 4)).unwrap();
        assert_eq!(approx.value(0.5), 2.0);
        assert_eq!(approx.value(0.1), 0.0);
        assert_eq!(approx.value(0.25), 2.0); // closed endpoint
        assert_eq!(approx.value(0.75), 2.0);
        assert_eq!(approx.value(0.76), 0.0);
        let err = approx.l2_error_exact();
        assert_eq!(err, Rat::one());
    }

    #[test]
    fn mass_is_exactly_one() {
        let m = build_moduli(20.0, 7, ModuliMode::AllCoprime).unwrap();
        let approx = build_itilde(&m, rat(1, 1000)).unwrap();
        assert_eq!(approx.total_mass_exact(), Rat::one());
    }

    #[test]
    fn delta_range_flag() {
        let m = build_moduli(20.0, 7, ModuliMode::AllCoprime).unwrap();
        // inside [1/Q^2, 1/Q]
        assert!(build_itilde(&m, rat(1, 100)).unwrap().delta_in_recommended_range);
        // too wide and too narrow
        assert!(!build_itilde(&m, rat(1, 2)).unwrap().delta_in_recommended_range);
        assert!(!build_itilde(&m, rat(1, 1000)).unwrap().delta_in_recommended_range);
    }

    #[test]
    fn breakpoint_count_bounded_by_2l() {
        let m = build_moduli(15.0, 7, ModuliMode::AllCoprime).unwrap();
        let approx = build_itilde(&m, rat(1, 225)).unwrap();
        assert!(approx.breakpoints().len() as u64 <= 2 * m.l_mass());
    }

    /// Naive double-sum definition used as the dual implementation.
    fn naive_value(m: &ModuliSet, delta: &Rat, alpha: &Rat) -> Rat {
        let mut count = 0i64;
        for &q in m.members() {
            for d in 1..=q {
                if arith::gcd_u64(d, q) == 1 {
                    let center = rat(d as i64, q as i64);
                    if (alpha - &center).abs() <= *delta {
                        count += 1;
                    }
                }
            }
        }
        Rat::from_integer(BigInt::from(count))
            / (Rat::from_integer(BigInt::from(2)) * delta * Rat::from_integer(BigInt::from(m.l_mass())))
    }

    #[test]
    fn step_function_matches_naive_definition_exactly() {
        let m = build_moduli(8.0, 5, ModuliMode::AllCoprime).unwrap();
        let delta = rat(1, 30);
        let approx = build_itilde(&m, delta.clone()).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..1000 {
            let alpha: f64 = rng.gen_range(-0.3..1.3);
            let a = rat_from_f64(alpha);
            assert_eq!(approx.value_exact(&a), naive_value(&m, &delta, &a));
        }
        // endpoints too: d/q +- delta for a few fractions
        for &q in m.members().iter().take(3) {
            let hit = rat(1, q as i64) + &delta;
            assert_eq!(approx.value_exact(&hit), naive_value(&m, &delta, &hit));
        }
    }

    #[test]
    fn l2_three_pass_identity_is_exact() {
        // |I - I~|^2 integrates to int I + int I~^2 - 2 int_{[0,1]} I~
        let m = build_moduli(12.0, 7, ModuliMode::AllCoprime).unwrap();
        let approx = build_itilde(&m, rat(1, 144)).unwrap();
        let direct = approx.l2_error_exact();
        let recomposed = Rat::one() + approx.int_itilde_squared_exact()
            - rat(2, 1) * approx.int_itilde_over_unit_exact();
        assert_eq!(direct, recomposed);
        assert!(direct >= Rat::zero());
    }

    #[test]
    fn l2_error_monte_carlo_cross_check() {
        // MC oracle over [-1, 2] for the Phi={2}, delta=1/4 case
        let m = ModuliSet::from_members(2.0, 7, vec![2]);
        let approx = build_itilde(&m, rat(1, 4)).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let samples = 2_000_000u64;
        let mut acc = 0.0f64;
        for _ in 0..samples {
            let x: f64 = rng.gen_range(-1.0..2.0);
            let ind = if (0.0..=1.0).contains(&x) { 1.0 } else { 0.0 };
            let d = ind - approx.value(x);
            acc += d * d;
        }
        let mc = 3.0 * acc / samples as f64;
        assert!((mc - 1.0).abs() < 5e-3, "MC estimate {mc}");
    }

    #[test]
    fn wide_delta_single_piece_formula() {
        // delta wide enough that the single interval covers [0,1]:
        // Phi = {2}, delta = 1: interval [-1/2, 3/2], height h = 1/2.
        // error = (1-h)^2 * 1 + h^2 * (tail length 1) = 1/4 + 1/4 = 1/2
        let m = ModuliSet::from_members(2.0, 7, vec![2]);
        let approx = build_itilde(&m, rat(1, 1)).unwrap();
        assert_eq!(approx.l2_error_exact(), rat(1, 2));
    }

    #[test]
    fn enlarging_phi_does_not_blow_up_the_ratio() {
        // smoke check: primes subset vs all-coprime at the same delta
        let q = 20.0;
        let delta = rat(1, 400);
        for mode in [ModuliMode::Primes, ModuliMode::AllCoprime] {
            let m = build_moduli(q, 7, mode).unwrap();
            let approx = build_itilde(&m, delta.clone()).unwrap();
            let err = l2_error(&approx);
            let l = m.l_mass() as f64;
            let ratio = err * rat_to_f64(&delta) * l * l / (q * q * q.ln().powi(2));
            assert!(ratio <= crate::tolerances::JUTILA_L2_CONSTANT, "mode {mode:?}: {ratio}");
        }
    }
}
