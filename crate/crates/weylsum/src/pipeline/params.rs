//! Experiment parameters: the base triple (N, p, theta) and every derived
//! scale of the argument, with the admissibility window recorded as data.
//!
//! Derived quantities:
//!   Q  = N^{1/2+theta}        moduli scale
//!   delta = 1/N               circle-method interval half-width
//!   Q1 = N^{1+2theta}/p^{2/3} first Cauchy-Schwarz factor scale
//!   Q2 = Q/Q1
//!   M0 = pQ/N                 dual (Poisson) frequency scale
//!   N0 = Q^2/N                dual (Voronoi) frequency scale
//!   R0 = N Q2 / p             second Poisson frequency scale
//! The window N^{1+2theta} < p < N^{3/2-3theta} is a flag, not an error:
//! out-of-window cells are computed and marked, their behavior is
//! diagnostic.

use crate::arith;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Desk-scale conductor ceiling (character tables are O(p)).
pub const MAX_P: u64 = 100_000;

#[derive(Debug, Error, PartialEq)]
pub enum ParamsError {
    #[error("theta must lie in (0, 1/10), got {0}")]
    ThetaOutOfRange(f64),
    #[error("p = {0} is not an odd prime")]
    PNotPrime(u64),
    #[error("p = {0} exceeds the desk-scale ceiling {MAX_P}")]
    PTooLarge(u64),
    #[error("N must be >= 8, got {0}")]
    NTooSmall(u64),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentParams {
    pub n: u64,
    pub p: u64,
    pub theta: f64,
    pub q_scale: f64,
    pub delta: f64,
    pub q1: f64,
    pub q2: f64,
    pub m0: f64,
    pub n0: f64,
    pub r0: f64,
    pub in_window: bool,
}

impl ExperimentParams {
    pub fn derive(n: u64, p: u64, theta: f64) -> Result<ExperimentParams, ParamsError> {
        if !(theta > 0.0 && theta < 0.1) {
            return Err(ParamsError::ThetaOutOfRange(theta));
        }
        if p > MAX_P {
            return Err(ParamsError::PTooLarge(p));
        }
        if p < 3 || !arith::is_prime(p) {
            return Err(ParamsError::PNotPrime(p));
        }
        if n < 8 {
            return Err(ParamsError::NTooSmall(n));
        }
        let nf = n as f64;
        let pf = p as f64;
        let q_scale = nf.powf(0.5 + theta);
        let delta = 1.0 / nf;
        let q1 = nf.powf(1.0 + 2.0 * theta) / pf.powf(2.0 / 3.0);
        let q2 = q_scale / q1;
        let m0 = pf * q_scale / nf;
        let n0 = q_scale * q_scale / nf;
        let r0 = nf * q2 / pf;
        let in_window = nf.powf(1.0 + 2.0 * theta) < pf && pf < nf.powf(1.5 - 3.0 * theta);
        let params = ExperimentParams {
            n,
            p,
            theta,
            q_scale,
            delta,
            q1,
            q2,
            m0,
            n0,
            r0,
            in_window,
        };
        params.assert_window_arithmetic();
        Ok(params)
    }

    /// The inequality chain every admissible parameter set satisfies:
    /// 1/Q^2 <= delta <= 1/Q, delta = N^{2 theta}/Q^2 exactly, Q1 Q2 = Q;
    /// and inside the window, p/N < Q2 < N^{1/2-3 theta}.
    fn assert_window_arithmetic(&self) {
        let nf = self.n as f64;
        let slack = 1e-9;
        assert!(self.delta >= 1.0 / (self.q_scale * self.q_scale) - slack);
        assert!(self.delta <= 1.0 / self.q_scale + slack);
        // delta >= N^{2 theta} / Q^2 with equality by construction
        let lower = nf.powf(2.0 * self.theta) / (self.q_scale * self.q_scale);
        assert!((self.delta - lower).abs() <= slack * self.delta.max(lower));
        assert!((self.q1 * self.q2 - self.q_scale).abs() <= slack * self.q_scale);
        if self.in_window {
            assert!(self.p as f64 / nf < self.q2 + slack);
            assert!(self.q2 < nf.powf(0.5 - 3.0 * self.theta) + slack);
        }
    }

    /// Bound denominator of the ratio experiments: N^{3/4+theta/2} p^{1/6}.
    pub fn bound_denominator(&self) -> f64 {
        (self.n as f64).powf(0.75 + self.theta / 2.0) * (self.p as f64).powf(1.0 / 6.0)
    }
}
