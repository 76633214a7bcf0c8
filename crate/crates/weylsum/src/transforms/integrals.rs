//! The oscillatory integrals of the transform chain: Hankel transforms of
//! smooth bumps (the Voronoi dual weight), Fourier transforms of bumps (the
//! Poisson dual weight), and the three composite kernels used after the
//! Cauchy-Schwarz step.
//!
//! Every evaluator sizes its panels from the analytic frequency of the
//! integrand's phase and certifies convergence by panel doubling; results
//! carry their own error estimate and a converged flag instead of failing
//! silently.

use super::bessel::bessel_table;
use super::bump::BumpFunction;
use crate::numeric::{self, integrate, QuadOutcome};
use crate::tolerances;
use num::complex::Complex64;
use std::collections::HashMap;
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy)]
pub struct OscillatoryIntegralResult {
    pub value: Complex64,
    pub abs_error_estimate: f64,
    pub panel_count: usize,
    pub converged: bool,
}

impl From<QuadOutcome> for OscillatoryIntegralResult {
    fn from(q: QuadOutcome) -> Self {
        OscillatoryIntegralResult {
            value: q.value,
            abs_error_estimate: q.abs_error,
            panel_count: q.panels,
            converged: q.converged,
        }
    }
}

/// int v(y) J_{k-1}(4 pi sqrt(n y)/q) dy over the support of v.
///
/// The kernel phase is (2/q) sqrt(n y) cycles, so the total oscillation
/// count over [Y, 2Y] is (2 sqrt(n)/q)(sqrt(2)-1) sqrt(Y); panels follow
/// that and the absolute tolerance scales with Y.
pub fn hankel_transform(v: &BumpFunction, n: u64, q: u64, k: u32) -> OscillatoryIntegralResult {
    assert!(n >= 1 && q >= 1 && k >= 2);
    let (lo, hi) = v.support();
    let c = 4.0 * PI * (n as f64).sqrt() / q as f64; // argument = c sqrt(y)
    let table = bessel_table(k - 1, c * hi.sqrt());
    let cycles = (c / (2.0 * PI)) * (hi.sqrt() - lo.sqrt());
    let tol = tolerances::HANKEL_ABS_PER_Y * lo * 0.01;
    integrate(
        |y| Complex64::new(v.eval(y) * table.eval(c * y.sqrt()), 0.0),
        lo,
        hi,
        cycles,
        tol,
        tolerances::QUAD_NODE_BUDGET,
    )
    .into()
}

/// Fourier transform of a bump: bhat(xi) = int b(y) e(-xi y) dy.
pub fn bump_fourier(b: &BumpFunction, xi: f64, abs_tol: f64) -> OscillatoryIntegralResult {
    let (lo, hi) = b.support();
    let cycles = xi.abs() * (hi - lo);
    integrate(
        |y| b.eval(y) * numeric::e(-xi * y),
        lo,
        hi,
        cycles,
        abs_tol,
        tolerances::QUAD_NODE_BUDGET,
    )
    .into()
}

/// I2(m, x, q) = int h2(y) e(-N x y) e(-m N y/(p q)) dy
///             = h2^(N (x + m/(p q))).
pub fn integral_i2(m: i64, x: f64, q: u64, big_n: f64, p: u64) -> Complex64 {
    i2_continuous(m as f64, x, q, big_n, p)
}

/// I2 with a continuous frequency slot (the post-Poisson kernels evaluate
/// it along a real line, not just at integers).
pub fn i2_continuous(u: f64, x: f64, q: u64, big_n: f64, p: u64) -> Complex64 {
    let xi = big_n * (x + u / (p as f64 * q as f64));
    bump_fourier(&BumpFunction::h2(), xi, tolerances::H2_FOURIER_ABS).value
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelMode {
    /// True Bessel kernel with the normalization that makes the dual-sum
    /// reconstruction exact (the verification path).
    Exact,
    /// Leading-order Bessel asymptotic split into e(+-) branches (the
    /// diagnostic path; invalid below the turning point).
    Asymptotic,
}

/// I1(n, x, q) in the normalization of the dual expansion
///   S(a,q,x,f) = N^{3/4} q^{-1/2} sum_n lambda(n) n^{-1/4} e(-a^bar n/q) I1(n,x,q).
///
/// Exact mode: 2 pi i^k (N n)^{1/4} q^{-1/2} int h1(y) e(Nxy) J_{k-1}(4 pi sqrt(Nny)/q) dy.
/// Asymptotic mode: sqrt(2) int h1(y) y^{-1/4} e(Nxy) cos(4 pi sqrt(Nny)/q - (2k-1) pi/4) dy, times i^k.
pub fn integral_i1(
    n: u64,
    x: f64,
    q: u64,
    big_n: f64,
    weight_k: u32,
    mode: KernelMode,
) -> OscillatoryIntegralResult {
    assert!(n >= 1 && q >= 1);
    let (lo, hi) = BumpFunction::h1().support();
    let c = 4.0 * PI * (big_n * n as f64).sqrt() / q as f64; // kernel arg = c sqrt(y)
    let cycles = big_n * x.abs() * (hi - lo) + (c / (2.0 * PI)) * (hi.sqrt() - lo.sqrt());
    let tol = 1e-12;
    let h1 = BumpFunction::h1();
    match mode {
        KernelMode::Exact => {
            let table = bessel_table(weight_k - 1, c * hi.sqrt());
            let out = integrate(
                |y| h1.eval(y) * table.eval(c * y.sqrt()) * numeric::e(big_n * x * y),
                lo,
                hi,
                cycles,
                tol,
                tolerances::QUAD_NODE_BUDGET,
            );
            let scale = 2.0 * PI * (big_n * n as f64).powf(0.25) / (q as f64).sqrt();
            let mut r: OscillatoryIntegralResult = out.into();
            r.value *= scale * numeric::i_pow(weight_k);
            r.abs_error_estimate *= scale;
            r
        }
        KernelMode::Asymptotic => {
            let phase0 = -(2.0 * weight_k as f64 - 1.0) / 8.0; // cycles
            let out = integrate(
                |y| {
                    let osc = numeric::e(c * y.sqrt() / (2.0 * PI) + phase0).re;
                    h1.eval(y) * y.powf(-0.25) * osc * numeric::e(big_n * x * y)
                },
                lo,
                hi,
                cycles,
                tol,
                tolerances::QUAD_NODE_BUDGET,
            );
            let mut r: OscillatoryIntegralResult = out.into();
            r.value *= std::f64::consts::SQRT_2 * numeric::i_pow(weight_k);
            r
        }
    }
}

/// The Bessel asymptotic used by [`KernelMode::Asymptotic`] is only valid
/// past the turning point; below it the exact and asymptotic modes are
/// expected to disagree and callers flag the regime.
pub fn i1_below_turning_point(n: u64, q: u64, big_n: f64, weight_k: u32) -> bool {
    4.0 * PI * (big_n * n as f64).sqrt() / q as f64 <= (weight_k - 1) as f64
}

/// The m-independent part of the composite kernel: the product
/// P(y) = W'(y) I2(M0 y, x, q1 q2) conj(I2(M0 y, x, q1 q2')), sampled once
/// on a dense grid over supp W' and interpolated (Catmull-Rom cubic,
/// interpolation error ~1e-11 of the product scale). One kernel serves
/// every outer frequency m, which is where the decomposition spends its
/// time.
pub struct CompositeKernel {
    lo: f64,
    step: f64,
    samples: Vec<Complex64>,
    m0: f64,
    c: f64,
    base_cycles: f64,
}

impl CompositeKernel {
    pub fn new(x: f64, q1: u64, q2: u64, q2p: u64, big_n: f64, p: u64, m0: f64) -> Self {
        let w = BumpFunction::window();
        let (lo, hi) = w.support();
        let qa = q1 * q2;
        let qb = q1 * q2p;
        let n_samples = 4097usize;
        let step = (hi - lo) / (n_samples - 1) as f64;
        let samples: Vec<Complex64> = (0..n_samples)
            .map(|i| {
                let y = lo + i as f64 * step;
                let wv = w.eval(y);
                if wv == 0.0 {
                    return Complex64::new(0.0, 0.0);
                }
                let ia = i2_continuous(m0 * y, x, qa, big_n, p);
                let ib = i2_continuous(m0 * y, x, qb, big_n, p);
                wv * ia * ib.conj()
            })
            .collect();
        // the product sweeps a few h2-transform cycles across the window
        let q_scale = m0 * p as f64 / big_n;
        let base_cycles = 3.0 * (hi - lo) * q_scale / qa.min(qb) as f64;
        CompositeKernel {
            lo,
            step,
            samples,
            m0,
            c: q1 as f64 * q2 as f64 * q2p as f64,
            base_cycles,
        }
    }

    fn product(&self, y: f64) -> Complex64 {
        let t = (y - self.lo) / self.step;
        let i = (t.floor() as isize).clamp(0, self.samples.len() as isize - 2) as usize;
        let u = t - i as f64;
        let sm1 = self.samples[i.saturating_sub(1)];
        let s0 = self.samples[i];
        let s1 = self.samples[i + 1];
        let s2 = self.samples[(i + 2).min(self.samples.len() - 1)];
        // Catmull-Rom
        let a = 2.0 * s0;
        let b = s1 - sm1;
        let c2 = 2.0 * sm1 - 5.0 * s0 + 4.0 * s1 - s2;
        let d = -sm1 + 3.0 * s0 - 3.0 * s1 + s2;
        0.5 * (a + b * u + c2 * u * u + d * u * u * u)
    }

    /// I(m, x, ...) = int P(y) e(-m M0 y / c) dy.
    pub fn eval(&self, m: i64) -> OscillatoryIntegralResult {
        let w = BumpFunction::window();
        let (lo, hi) = w.support();
        let freq = (m as f64 * self.m0 / self.c).abs();
        integrate(
            |y| self.product(y) * numeric::e(-(m as f64) * self.m0 * y / self.c),
            lo,
            hi,
            freq * (hi - lo) + self.base_cycles,
            1e-10,
            tolerances::QUAD_NODE_BUDGET,
        )
        .into()
    }
}

/// I(m, x, q1, q2, q2') = int W'(y) I2(M0 y, x, q1 q2)
///                         conj(I2(M0 y, x, q1 q2')) e(-m M0 y/(q1 q2 q2')) dy.
///
/// One-shot wrapper; batch callers build a [`CompositeKernel`] and reuse it
/// across m.
pub fn integral_im(
    m: i64,
    x: f64,
    q1: u64,
    q2: u64,
    q2p: u64,
    big_n: f64,
    p: u64,
    m0: f64,
) -> OscillatoryIntegralResult {
    CompositeKernel::new(x, q1, q2, q2p, big_n, p, m0).eval(m)
}

/// Extend a scan until `window` consecutive values of |f| stay below `tol`;
/// returns the first index of the quiet run, or None when `budget` indices
/// were inspected without one (caller raises the non-convergence flag).
pub fn scan_cutoff(
    mut f: impl FnMut(u64) -> f64,
    start: u64,
    window: usize,
    tol: f64,
    budget: u64,
) -> Option<u64> {
    let mut quiet_from = None;
    let mut quiet_len = 0usize;
    let mut j = start;
    while j < start + budget {
        if f(j).abs() < tol {
            if quiet_len == 0 {
                quiet_from = Some(j);
            }
            quiet_len += 1;
            if quiet_len >= window {
                return quiet_from;
            }
        } else {
            quiet_len = 0;
            quiet_from = None;
        }
        j += 1;
    }
    None
}
