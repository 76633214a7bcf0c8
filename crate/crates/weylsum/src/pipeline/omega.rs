//! The Cauchy-Schwarz frequency decomposition: after squaring the dual sum
//! over q2 and applying Poisson summation in m at modulus c = q1 q2 q2',
//! each (q2, q2') pair contributes
//!
//!   (M0/q1) chi(q2) chi^bar(q2') (q2 q2')^{-3/2}
//!     sum_{n, n'} w_{q2}(n) w^bar_{q2'}(n')
//!     sum_{m~} S(p(q2' n - n' q2), m~; c) I(m~, x, q1, q2, q2'),
//!
//! with w_q(n) = lambda(n) n^{-1/4} I1(n, x, q1 q).  The m~ = 0 slice
//! (Sigma_0, Ramanujan-sum main term) is evaluated through two independent
//! formulas — the complete exponential sum and the divisor-Moebius
//! expansion — and the m~ != 0 slice carries the Weil-bounded Kloosterman
//! sums. The n, n' double sum never materializes: the Kloosterman argument
//! depends on (n, n') only through p(q2' n - n' q2) mod c, so residue
//! binning plus an O(c^2) circular correlation does the work.

use super::params::ExperimentParams;
use super::PipelineError;
use crate::arith;
use crate::characters::DirichletCharacter;
use crate::expsums::{kloosterman_with, ramanujan_sum, InverseTable};
use crate::hecke::CuspForm;
use crate::transforms::{integral_i1, integrals::CompositeKernel, KernelMode};
use num::complex::Complex64;
use rayon::prelude::*;

#[derive(Debug, Clone)]
pub struct OmegaRecord {
    pub q1: u64,
    pub x: f64,
    pub q2_members: Vec<u64>,
    pub sigma_zero: Complex64,
    /// Sigma_0 recomputed with the divisor-Moebius form of the m~ = 0
    /// Kloosterman sum; must agree with `sigma_zero` to rounding.
    pub sigma_zero_divisor_form: Complex64,
    pub sigma_nonzero: Complex64,
    pub omega: Complex64,
    /// |Sigma_0| / (M0 sqrt(N0)).
    pub ratio_zero: f64,
    /// |Sigma_!=0| / (N0^{3/2} Q2^2 sqrt(Q1)).
    pub ratio_nonzero: f64,
    /// Contribution of the forced diagonal q2 = q2', n = n' alone.
    pub sigma_zero_diagonal: Complex64,
    pub n_cut_max: u64,
    pub m_cut: i64,
}

/// Dual weights w(n) = lambda(n) n^{-1/4} I1(n, x, q1 q2) up to a
/// decay-certified cutoff (relative tolerance 1e-5 of the running peak;
/// the decomposition targets percent-level ratios, not identity residuals).
fn omega_weights(
    f: &CuspForm,
    params: &ExperimentParams,
    x: f64,
    q: u64,
) -> Result<Vec<Complex64>, PipelineError> {
    let big_n = params.n as f64;
    let k = f.weight();
    let window = 16usize;
    let chunk = 128usize;
    let mut weights: Vec<Complex64> = Vec::new();
    let mut peak = 0.0f64;
    let mut quiet = 0usize;
    let mut n = 1u64;
    let budget = 120_000u64;
    while quiet < window {
        if n > budget {
            return Err(PipelineError::NoCutoff {
                what: "omega dual weights",
            });
        }
        let hi = n + chunk as u64 - 1;
        if hi > f.n_max() as u64 {
            return Err(PipelineError::Hecke(crate::hecke::HeckeError::CacheMiss {
                n: hi as i64,
                n_max: f.n_max(),
            }));
        }
        let block: Vec<(u64, Complex64)> = (n..=hi)
            .into_par_iter()
            .map(|nn| {
                (
                    nn,
                    integral_i1(nn, x, q, big_n, k, KernelMode::Exact).value,
                )
            })
            .collect();
        for (nn, i1) in block {
            let lam = f.lambda(nn as i64)?;
            let damp = (nn as f64).powf(-0.25);
            let gauge = lam.abs().max(1.0) * damp * i1.norm();
            peak = peak.max(gauge);
            weights.push(lam * damp * i1);
            if gauge < 1e-5 * peak {
                quiet += 1;
                if quiet >= window {
                    break;
                }
            } else {
                quiet = 0;
            }
        }
        n = hi + 1;
    }
    Ok(weights)
}

pub fn omega_decomposition(
    f: &CuspForm,
    chi: &DirichletCharacter,
    params: &ExperimentParams,
    q1: u64,
    x: f64,
) -> Result<OmegaRecord, PipelineError> {
    let p = params.p;
    assert!(arith::gcd_u64(q1, p) == 1, "q1 must be coprime to p");
    let big_n = params.n as f64;
    // Phi_2: integers in [Q2, 2Q2] coprime to q1 and p
    let lo = params.q2.ceil() as u64;
    let hi = (2.0 * params.q2).floor() as u64;
    let q2s: Vec<u64> = (lo.max(2)..=hi.max(lo.max(2)))
        .filter(|&q| arith::gcd_u64(q, q1 * p) == 1)
        .collect();
    if q2s.is_empty() {
        return Err(PipelineError::Circle(
            crate::circle::CircleError::EmptyModuli {
                lo,
                hi,
                mode: crate::circle::ModuliMode::AllCoprime,
                p: q1 * p,
            },
        ));
    }

    // weights per q2 (I1 at modulus q1 q2)
    let mut weights: Vec<Vec<Complex64>> = Vec::with_capacity(q2s.len());
    for &q2 in &q2s {
        weights.push(omega_weights(f, params, x, q1 * q2)?);
    }
    let n_cut_max = weights.iter().map(|w| w.len() as u64).max().unwrap();

    // m~ range: scan the composite kernel until it dies; R0 sets the scale
    let m_budget = (8.0 * params.r0.max(1.0)) as i64 + 24;

    let mut sigma_zero = Complex64::new(0.0, 0.0);
    let mut sigma_zero_div = Complex64::new(0.0, 0.0);
    let mut sigma_nonzero = Complex64::new(0.0, 0.0);
    let mut sigma_zero_diag = Complex64::new(0.0, 0.0);
    let mut m_cut_used = 0i64;

    for (i, &q2) in q2s.iter().enumerate() {
        for (j, &q2p) in q2s.iter().enumerate() {
            let c = q1 * q2 * q2p;
            let pref = (params.m0 / q1 as f64)
                * chi.value(q2 as i64)
                * chi.value(q2p as i64).conj()
                / ((q2 * q2p) as f64).powf(1.5);

            // residue bins and circular correlation G(r)
            let mut u = vec![Complex64::new(0.0, 0.0); c as usize];
            for (idx, w) in weights[i].iter().enumerate() {
                let n = idx as u64 + 1;
                let s = (p as u128 * q2p as u128 * n as u128 % c as u128) as usize;
                u[s] += w;
            }
            let mut v = vec![Complex64::new(0.0, 0.0); c as usize];
            for (idx, w) in weights[j].iter().enumerate() {
                let n = idx as u64 + 1;
                let s = (p as u128 * q2 as u128 * n as u128 % c as u128) as usize;
                v[s] += w;
            }
            let cc = c as usize;
            let g: Vec<Complex64> = (0..cc)
                .map(|r| {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for s in 0..cc {
                        acc += u[s] * v[(s + cc - r) % cc].conj();
                    }
                    acc
                })
                .collect();

            // m~ = 0: Kloosterman S(r, 0; c) vs the divisor-Moebius form
            let table = InverseTable::new(c);
            let k0: Vec<f64> = (0..cc).map(|r| kloosterman_with(&table, r as i64, 0)).collect();
            let k0_div: Vec<f64> = (0..cc).map(|r| ramanujan_sum(r as i64, c) as f64).collect();
            let kernel = CompositeKernel::new(x, q1, q2, q2p, big_n, p, params.m0);
            let im0 = kernel.eval(0);
            if !im0.converged {
                return Err(PipelineError::NonConvergence {
                    what: "composite m-kernel",
                    err: im0.abs_error_estimate,
                });
            }
            let dot = |kv: &[f64]| -> Complex64 {
                let mut acc = Complex64::new(0.0, 0.0);
                for r in 0..cc {
                    acc += g[r] * kv[r];
                }
                acc
            };
            sigma_zero += pref * im0.value * dot(&k0);
            sigma_zero_div += pref * im0.value * dot(&k0_div);

            // diagonal slice: q2 = q2', n = n' (A = 0 residue class)
            if i == j {
                let energy: f64 = weights[i].iter().map(|w| w.norm_sqr()).sum();
                let phi_c = arith::totient(c) as f64;
                sigma_zero_diag += pref * im0.value * energy * phi_c;
            }

            // m~ != 0: extend until the composite kernel is dead
            let mut quiet = 0usize;
            let mut m = 1i64;
            let im_tol = 1e-7 * im0.value.norm().max(1e-6);
            while m <= m_budget && quiet < 3 {
                let mut live = false;
                for sm in [m, -m] {
                    let im = kernel.eval(sm);
                    if im.value.norm() > im_tol {
                        live = true;
                    }
                    let kn: Vec<f64> = (0..cc)
                        .map(|r| kloosterman_with(&table, r as i64, sm))
                        .collect();
                    sigma_nonzero += pref * im.value * dot(&kn);
                }
                if live {
                    quiet = 0;
                } else {
                    quiet += 1;
                }
                m_cut_used = m_cut_used.max(m);
                m += 1;
            }
        }
    }

    let denom_zero = params.m0 * params.n0.sqrt();
    let denom_nz =
        params.n0.powf(1.5) * params.q2 * params.q2 * params.q1.sqrt();
    Ok(OmegaRecord {
        q1,
        x,
        q2_members: q2s,
        sigma_zero,
        sigma_zero_divisor_form: sigma_zero_div,
        sigma_nonzero,
        omega: sigma_zero + sigma_nonzero,
        ratio_zero: sigma_zero.norm() / denom_zero,
        ratio_nonzero: sigma_nonzero.norm() / denom_nz,
        sigma_zero_diagonal: sigma_zero_diag,
        n_cut_max,
        m_cut: m_cut_used,
    })
}
