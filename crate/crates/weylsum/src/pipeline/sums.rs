//! Direct character sums and their circle-method approximation.
//!
//! The approximating sum
//!   S~(N) = (1/L) sum_{q in Phi} sum*_{a mod q} sum_{n,m}
//!           lambda(n) chi(m) e(a(n-m)/q) F(n, m)
//! collapses in two exact steps: the reduced-residue sum is the Ramanujan
//! sum c_q(n-m), and the alpha-integral inside F is the closed-form
//! Dirichlet kernel sin(2 pi delta d)/(2 pi delta d). What remains is a
//! difference-indexed correlation, O(N^2 + |Phi| N) instead of the naive
//! quadruple loop.

use super::params::ExperimentParams;
use super::PipelineError;
use crate::characters::DirichletCharacter;
use crate::circle::ModuliSet;
use crate::expsums;
use crate::hecke::CuspForm;
use crate::numeric::sinc_kernel;
use crate::transforms::BumpFunction;
use num::complex::Complex64;
use std::collections::HashMap;
use std::time::Instant;

/// Hard ceilings for the dense paths.
pub const DIRECT_N_MAX: u64 = 1_000_000;
pub const JUTILA_N_MAX: u64 = 2_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Window {
    /// Sum over 1 <= n <= N, unweighted.
    Sharp,
    /// Sum weighted by h1(n/N), supported on [N, 2N].
    SmoothH1,
}

#[derive(Debug, Clone)]
pub struct SumResult {
    pub value: Complex64,
    pub n_terms: u64,
    pub method: &'static str,
    pub seconds: f64,
}

/// S(N) = sum lambda(n) chi(n) [window weight].
pub fn direct_sum(
    f: &CuspForm,
    chi: &DirichletCharacter,
    n: u64,
    window: Window,
) -> Result<SumResult, PipelineError> {
    if n > DIRECT_N_MAX {
        return Err(PipelineError::Budget {
            what: "direct_sum length N",
            limit: DIRECT_N_MAX,
            requested: n,
        });
    }
    let t0 = Instant::now();
    let (lo, hi) = match window {
        Window::Sharp => (1u64, n),
        Window::SmoothH1 => (n, 2 * n),
    };
    if hi > f.n_max() as u64 {
        return Err(PipelineError::Hecke(crate::hecke::HeckeError::CacheMiss {
            n: hi as i64,
            n_max: f.n_max(),
        }));
    }
    let h1 = BumpFunction::h1();
    let mut acc = Complex64::new(0.0, 0.0);
    let mut terms = 0u64;
    for k in lo..=hi {
        let w = match window {
            Window::Sharp => 1.0,
            Window::SmoothH1 => h1.eval(k as f64 / n as f64),
        };
        if w == 0.0 {
            continue;
        }
        let lam = f.lambda(k as i64)?;
        let cv = chi.value(k as i64);
        if cv.re == 0.0 && cv.im == 0.0 {
            continue;
        }
        acc += w * lam * cv;
        terms += 1;
    }
    Ok(SumResult {
        value: acc,
        n_terms: terms,
        method: match window {
            Window::Sharp => "direct-sharp",
            Window::SmoothH1 => "direct-smooth-h1",
        },
        seconds: t0.elapsed().as_secs_f64(),
    })
}

/// Difference-indexed correlation C(d) = sum_{n-m=d} u(n) v(m) with
/// u(n) = lambda(n) h1(n/N) and v(m) = chi(m) h2(m/N).
fn correlation(
    f: &CuspForm,
    chi: &DirichletCharacter,
    n: u64,
) -> Result<(Vec<Complex64>, i64, u64), PipelineError> {
    let h1 = BumpFunction::h1();
    let h2 = BumpFunction::h2();
    let nf = n as f64;
    let n_lo = n;
    let n_hi = 2 * n;
    let m_lo = (0.8 * nf).ceil() as u64;
    let m_hi = (2.2 * nf).floor() as u64;
    if n_hi.max(m_hi) > f.n_max() as u64 {
        return Err(PipelineError::Hecke(crate::hecke::HeckeError::CacheMiss {
            n: n_hi.max(m_hi) as i64,
            n_max: f.n_max(),
        }));
    }
    let u: Vec<f64> = (n_lo..=n_hi)
        .map(|k| f.lambda(k as i64).map(|l| l * h1.eval(k as f64 / nf)))
        .collect::<Result<_, _>>()?;
    let v: Vec<Complex64> = (m_lo..=m_hi)
        .map(|m| chi.value(m as i64) * h2.eval(m as f64 / nf))
        .collect();
    let d_min = n_lo as i64 - m_hi as i64;
    let d_max = n_hi as i64 - m_lo as i64;
    let mut corr = vec![Complex64::new(0.0, 0.0); (d_max - d_min + 1) as usize];
    for (i, &un) in u.iter().enumerate() {
        if un == 0.0 {
            continue;
        }
        let nn = n_lo as i64 + i as i64;
        let base = (nn - m_lo as i64 - d_min) as usize;
        for (j, &vm) in v.iter().enumerate() {
            // d = nn - (m_lo + j): descending index base - j
            corr[base - j] += un * vm;
        }
    }
    Ok((corr, d_min, (u.len() as u64) * (v.len() as u64)))
}

/// S~(N): the Jutila approximation evaluated exactly through the
/// Ramanujan-sum and Dirichlet-kernel closed forms.
pub fn jutila_sum(
    f: &CuspForm,
    chi: &DirichletCharacter,
    params: &ExperimentParams,
    moduli: &ModuliSet,
) -> Result<SumResult, PipelineError> {
    if params.n > JUTILA_N_MAX {
        return Err(PipelineError::Budget {
            what: "jutila_sum length N",
            limit: JUTILA_N_MAX,
            requested: params.n,
        });
    }
    let t0 = Instant::now();
    let (corr, d_min, pairs) = correlation(f, chi, params.n)?;
    let delta = params.delta;
    let mut total = Complex64::new(0.0, 0.0);
    for &q in moduli.members() {
        // c_q(d) depends on d only through gcd(d, q): memoize per divisor
        let mut cq: HashMap<u64, f64> = HashMap::new();
        let mut q_acc = Complex64::new(0.0, 0.0);
        for (idx, &c) in corr.iter().enumerate() {
            if c.re == 0.0 && c.im == 0.0 {
                continue;
            }
            let d = d_min + idx as i64;
            let g = crate::arith::gcd_u64(d.unsigned_abs(), q);
            let ram = *cq
                .entry(g)
                .or_insert_with(|| expsums::ramanujan_sum(d, q) as f64);
            if ram == 0.0 {
                continue;
            }
            q_acc += c * ram * sinc_kernel(delta, d as f64);
        }
        total += q_acc;
    }
    total /= moduli.l_mass() as f64;
    Ok(SumResult {
        value: total,
        n_terms: pairs * moduli.members().len() as u64,
        method: "jutila-closed-form",
        seconds: t0.elapsed().as_secs_f64(),
    })
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct ApproxErrorRecord {
    pub n: u64,
    pub p: u64,
    pub theta: f64,
    pub q_scale: f64,
    pub l_mass: u64,
    pub abs_s: f64,
    pub abs_s_tilde: f64,
    pub abs_diff: f64,
    /// |S - S~| * Q / (N^{3/2} log(QN)).
    pub normalized_ratio: f64,
    pub seconds: f64,
}

/// Compare the direct smooth sum with its circle-method approximation and
/// log the normalized error.
pub fn approx_error_report(
    f: &CuspForm,
    chi: &DirichletCharacter,
    params: &ExperimentParams,
    moduli: &ModuliSet,
) -> Result<ApproxErrorRecord, PipelineError> {
    let t0 = Instant::now();
    let direct = direct_sum(f, chi, params.n, Window::SmoothH1)?;
    let jutila = jutila_sum(f, chi, params, moduli)?;
    let diff = (direct.value - jutila.value).norm();
    let nf = params.n as f64;
    let qn = params.q_scale * nf;
    let normalized = diff * params.q_scale / (nf.powf(1.5) * qn.ln());
    Ok(ApproxErrorRecord {
        n: params.n,
        p: params.p,
        theta: params.theta,
        q_scale: params.q_scale,
        l_mass: moduli.l_mass(),
        abs_s: direct.value.norm(),
        abs_s_tilde: jutila.value.norm(),
        abs_diff: diff,
        normalized_ratio: normalized,
        seconds: t0.elapsed().as_secs_f64(),
    })
}
