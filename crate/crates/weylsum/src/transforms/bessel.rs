//! Bessel functions J_nu of integer order, to relative accuracy 1e-10 or
//! better across the whole argument range, plus a panel-Chebyshev fast path
//! for quadrature inner loops.
//!
//! Three regimes (all evaluated in double-double to kill cancellation):
//!   x <= 30            ascending series;
//!   30 < x < x_asym    Miller backward recurrence with the
//!                      J_0 + 2 J_2 + 2 J_4 + ... = 1 normalization;
//!   x >= x_asym        Hankel asymptotic expansion, up to 18 correction
//!                      terms, truncated at its smallest term.
//! The crossover x_asym = max(300, 0.55 nu^2) keeps the asymptotic series
//! convergent to ~1e-12 before it is trusted: its expansion parameter is
//! nu^2/x, so switching straight from the ascending series to the
//! asymptotic one anywhere near x ~ 2 nu would lose six digits.

use crate::numeric::Dd;
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

/// Largest supported order (desk scale: weights k = 12, 16 need nu = 11, 15).
pub const MAX_ORDER: u32 = 40;

/// J_nu(x) for integer nu >= 0 and x >= 0.
pub fn bessel_j(nu: u32, x: f64) -> f64 {
    assert!(nu <= MAX_ORDER, "order {nu} beyond supported range");
    assert!(x >= 0.0 && x.is_finite(), "argument must be finite and >= 0");
    if x == 0.0 {
        return if nu == 0 { 1.0 } else { 0.0 };
    }
    if x <= 30.0 {
        series_dd(nu, x)
    } else if x < asymptotic_min(nu) {
        miller_dd(nu, x)
    } else {
        asymptotic_dd(nu, x)
    }
}

fn asymptotic_min(nu: u32) -> f64 {
    (0.55 * (nu as f64) * (nu as f64)).max(300.0)
}

/// Ascending series sum_m (-1)^m (x/2)^{nu+2m} / (m! (nu+m)!), double-double.
fn series_dd(nu: u32, x: f64) -> f64 {
    let half = Dd::from_f64(x).mul_f64(0.5);
    let z = half.mul(half); // x^2/4
    // t_0 = (x/2)^nu / nu!
    let mut term = Dd::ONE;
    for k in 1..=nu {
        term = term.mul(half).div(Dd::from_f64(k as f64));
    }
    let mut acc = term;
    let mut m = 0u32;
    let mut max_mag = term.hi.abs();
    loop {
        m += 1;
        let denom = Dd::from_f64(m as f64).mul(Dd::from_f64((nu + m) as f64));
        term = term.mul(z).div(denom).neg();
        acc = acc.add(term);
        max_mag = max_mag.max(term.hi.abs());
        if term.hi.abs() < 1e-45 * max_mag.max(1e-300) || m > 500 {
            break;
        }
    }
    acc.to_f64()
}

/// Miller's algorithm: downward recurrence from a padded start order, then
/// normalize by J_0(x) + 2 sum_{k>=1} J_{2k}(x) = 1.
fn miller_dd(nu: u32, x: f64) -> f64 {
    // padding past the turning point: J_{x + t (x/2)^{1/3}} decays like
    // Ai(2^{1/3} t); t ~ 26 buys ~35 digits of seed washout
    let base = x.max(nu as f64);
    let pad = 26.0 * (x * 0.5).powf(1.0 / 3.0) + 24.0;
    let mut start = (base + pad).ceil() as u64;
    if start % 2 == 1 {
        start += 1;
    }
    let inv_x = Dd::from_f64(x).recip();
    let mut jp = Dd::ZERO; // J_{m+1}
    let mut jc = Dd::from_f64(1e-280); // J_m seed
    let mut norm = Dd::ZERO; // accumulates J_0 + 2 sum J_{2k}
    let mut captured = Dd::ZERO;
    let mut m = start;
    loop {
        if m == nu as u64 {
            captured = jc;
        }
        if m % 2 == 0 {
            if m == 0 {
                norm = norm.add(jc);
            } else {
                norm = norm.add(jc.mul_f64(2.0));
            }
        }
        if m == 0 {
            break;
        }
        let jm = inv_x.mul_f64(2.0 * m as f64).mul(jc).sub(jp);
        jp = jc;
        jc = jm;
        m -= 1;
        if jc.hi.abs() > 1e250 {
            jp = jp.mul_f64(1e-250);
            jc = jc.mul_f64(1e-250);
            norm = norm.mul_f64(1e-250);
            captured = captured.mul_f64(1e-250);
        }
    }
    captured.div(norm).to_f64()
}

/// Hankel expansion: J_nu(x) ~ sqrt(2/(pi x)) (P cos w - Q sin w),
/// w = x - (2 nu + 1) pi / 4, with a_k = a_{k-1} (4nu^2 - (2k-1)^2)/(8k).
fn asymptotic_dd(nu: u32, x: f64) -> f64 {
    let xd = Dd::from_f64(x);
    let fournu2 = Dd::from_f64(4.0 * (nu as f64) * (nu as f64));
    let mut p = Dd::ONE;
    let mut q = Dd::ZERO;
    let mut a = Dd::ONE;
    let mut last_mag = f64::INFINITY;
    for k in 1..=18u32 {
        let odd = (2 * k - 1) as f64;
        a = a
            .mul(fournu2.sub(Dd::from_f64(odd * odd)))
            .div(Dd::from_f64(8.0 * k as f64))
            .div(xd);
        let mag = a.hi.abs();
        if mag > last_mag {
            break; // divergent tail: truncate at the smallest term
        }
        last_mag = mag;
        match k % 4 {
            1 => q = q.add(a),
            2 => p = p.sub(a),
            3 => q = q.sub(a),
            _ => p = p.add(a),
        }
    }
    // phase reduction in dd: w = x - (2nu+1) pi/4 mod 2pi
    let w = xd.sub(Dd::PI.mul_f64((2 * nu + 1) as f64 / 4.0));
    let k = (w.to_f64() / (2.0 * std::f64::consts::PI)).round();
    let wr = w.sub(Dd::TWO_PI.mul_f64(k));
    let (s0, c0) = wr.hi.sin_cos();
    let s = s0 + wr.lo * c0;
    let c = c0 - wr.lo * s0;
    let amp = Dd::from_f64(2.0 / std::f64::consts::PI).div(xd).sqrt();
    amp.mul(p.mul_f64(c).sub(q.mul_f64(s))).to_f64()
}

/// Piecewise-Chebyshev table for J_nu on [0, t_max]: degree-15 fit per
/// pi-length panel (interpolation error ~2e-15 absolute), Clenshaw eval.
/// This is the quadrature fast path; `bessel_j` remains the reference.
#[derive(Debug)]
pub struct BesselTable {
    nu: u32,
    t_max: f64,
    panel: f64,
    coeffs: Vec<[f64; 16]>,
}

impl BesselTable {
    pub fn build(nu: u32, t_max: f64) -> BesselTable {
        let panel = std::f64::consts::PI;
        let n_panels = (t_max / panel).ceil().max(1.0) as usize;
        let n = 16usize;
        // Chebyshev nodes and the DCT cosine matrix, shared by all panels
        let mut cosmat = vec![[0.0f64; 16]; 16];
        let mut nodes = [0.0f64; 16];
        for j in 0..n {
            let theta = std::f64::consts::PI * (j as f64 + 0.5) / n as f64;
            nodes[j] = theta.cos();
            for k in 0..n {
                cosmat[j][k] = (k as f64 * theta).cos();
            }
        }
        let coeffs = (0..n_panels)
            .map(|pidx| {
                let a = pidx as f64 * panel;
                let b = a + panel;
                let mid = 0.5 * (a + b);
                let half = 0.5 * (b - a);
                let vals: Vec<f64> = (0..n)
                    .map(|j| bessel_j(nu, (mid + half * nodes[j]).max(0.0)))
                    .collect();
                let mut c = [0.0f64; 16];
                for (k, ck) in c.iter_mut().enumerate() {
                    let mut acc = 0.0;
                    for j in 0..n {
                        acc += vals[j] * cosmat[j][k];
                    }
                    *ck = 2.0 * acc / n as f64;
                }
                c
            })
            .collect();
        BesselTable {
            nu,
            t_max: n_panels as f64 * panel,
            panel,
            coeffs,
        }
    }

    pub fn nu(&self) -> u32 {
        self.nu
    }

    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    #[inline]
    pub fn eval(&self, t: f64) -> f64 {
        if !(0.0..self.t_max).contains(&t) {
            return bessel_j(self.nu, t);
        }
        let pidx = (t / self.panel) as usize;
        let pidx = pidx.min(self.coeffs.len() - 1);
        let a = pidx as f64 * self.panel;
        let u = 2.0 * (t - a) / self.panel - 1.0;
        let c = &self.coeffs[pidx];
        // Clenshaw
        let (mut b1, mut b2) = (0.0f64, 0.0f64);
        let two_u = 2.0 * u;
        for k in (1..16).rev() {
            let b0 = c[k] + two_u * b1 - b2;
            b2 = b1;
            b1 = b0;
        }
        0.5 * c[0] + u * b1 - b2
    }
}

/// Process-wide table cache keyed by (nu, panels); tables are immutable
/// after build and shared across threads.
pub fn bessel_table(nu: u32, t_max: f64) -> Arc<BesselTable> {
    static CACHE: OnceLock<Mutex<HashMap<(u32, u64), Arc<BesselTable>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    // round the requested range up generously so repeat callers share
    let panels = ((t_max.max(16.0) * 1.25) / std::f64::consts::PI).ceil() as u64;
    let mut guard = cache.lock().unwrap();
    if let Some(t) = guard.get(&(nu, panels)) {
        return Arc::clone(t);
    }
    let table = Arc::new(BesselTable::build(nu, panels as f64 * std::f64::consts::PI));
    guard.insert((nu, panels), Arc::clone(&table));
    table
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tolerances::BESSEL_REL;

    /// 50-digit reference values computed offline (mpmath besselj).
    const GOLDEN_J11: &[(f64, f64)] = &[
        (0.5, 5.941853962232461406666e-15),
        (1.0, 1.198006746303137096494e-11),
        (2.0, 2.304284758367251422257e-8),
        (5.0, 0.0003509274497662090101496),
        (10.0, 0.1231165280015976694488),
        (20.0, 0.06135630337595092555333),
        (25.0, -0.1682359900322570095589),
        (35.0, 0.1362943126746278181514),
        (50.0, -0.01834667861581521249148),
        (75.0, 0.0341223780068010044247),
        (120.0, -0.02417194115406033967553),
        (200.0, 0.05644338122289651135763),
        (350.0, 0.0265018483684201679861),
        (500.0, -0.006314383927299598819176),
        (900.0, -0.01882185087457997660131),
        (1500.0, 0.01350917666112826290723),
    ];
    const GOLDEN_J15: &[(f64, f64)] = &[
        (0.5, 7.094207076602066997578e-22),
        (1.0, 2.297531532210344443807e-17),
        (2.0, 7.183016356018792395444e-13),
        (5.0, 4.796743277517957165848e-7),
        (10.0, 0.004507973143721253046769),
        (20.0, -0.0008120690551537478698624),
        (25.0, 0.09780898449246983865213),
        (35.0, 0.03144201814692944136138),
        (50.0, -0.1082255989751145519626),
        (75.0, -0.02924488945573314218924),
        (120.0, -0.05099460501827515033565),
        (200.0, 0.05420989294243770847316),
        (350.0, 0.03116578055168494894896),
        (500.0, -0.002633836087565365758228),
        (900.0, -0.01987628348582452503682),
        (1500.0, 0.01404032590370671902535),
    ];
    const GOLDEN_MISC: &[(u32, f64, f64)] = &[
        (0, 1.0, 0.7651976865579665514497),
        (0, 10.0, -0.2459357644513483351978),
        (0, 100.0, 0.01998585030422312242423),
        (0, 450.0, -0.03759161775342513046896),
        (0, 1000.0, 0.02478668615242017456133),
        (1, 1.0, 0.4400505857449335159597),
        (1, 10.0, 0.04347274616886143666975),
        (1, 100.0, -0.07714535201411215803269),
        (1, 450.0, 0.001215215525796953068093),
        (1, 1000.0, 0.004728311907089523917576),
        (5, 1.0, 0.0002497577302112344313751),
        (5, 10.0, -0.2340615281867936404437),
        (5, 100.0, -0.07419573696451392083414),
        (5, 450.0, 0.0002124195258379262878765),
        (5, 1000.0, 0.005025406945233186074239),
        (20, 1.0, 3.873503008524657718915e-25),
        (20, 10.0, 0.0000115133692478133977833),
        (20, 100.0, 0.06221745849833875314069),
        (20, 450.0, -0.03449599284928622224372),
        (20, 1000.0, 0.02335796793267933459107),
        (30, 1.0, 3.48286979425148290225e-42),
        (30, 10.0, 1.551096078257467006912e-12),
        (30, 100.0, 0.08146012958117222296833),
        (30, 450.0, 0.02138095112444143811725),
        (30, 1000.0, -0.02027189698107584523809),
    ];

    #[test]
    fn order_11_matches_reference() {
        for &(x, want) in GOLDEN_J11 {
            let got = bessel_j(11, x);
            assert!(
                ((got - want) / want).abs() < BESSEL_REL,
                "J11({x}) = {got:e}, want {want:e}"
            );
        }
    }

    #[test]
    fn order_15_matches_reference() {
        for &(x, want) in GOLDEN_J15 {
            let got = bessel_j(15, x);
            assert!(
                ((got - want) / want).abs() < BESSEL_REL,
                "J15({x}) = {got:e}, want {want:e}"
            );
        }
    }

    #[test]
    fn other_orders_match_reference() {
        for &(nu, x, want) in GOLDEN_MISC {
            let got = bessel_j(nu, x);
            assert!(
                ((got - want) / want).abs() < BESSEL_REL,
                "J{nu}({x}) = {got:e}, want {want:e}"
            );
        }
    }

    #[test]
    fn zero_argument() {
        assert_eq!(bessel_j(11, 0.0), 0.0);
        assert_eq!(bessel_j(0, 0.0), 1.0);
    }

    #[test]
    fn recurrence_residual_on_log_grid() {
        // J_{nu-1}(x) + J_{nu+1}(x) = (2 nu / x) J_nu(x)
        for nu in [5u32, 11, 15, 20] {
            let mut x = 0.7;
            while x < 2000.0 {
                let lhs = bessel_j(nu - 1, x) + bessel_j(nu + 1, x);
                let rhs = 2.0 * nu as f64 / x * bessel_j(nu, x);
                let scale = lhs.abs().max(rhs.abs()).max(1e-30);
                assert!(
                    ((lhs - rhs) / scale).abs() < 1e-8,
                    "nu={nu} x={x}: {lhs:e} vs {rhs:e}"
                );
                x *= 1.37;
            }
        }
    }

    #[test]
    fn table_matches_reference_evaluator() {
        let table = BesselTable::build(11, 400.0);
        let mut x = 0.01;
        let mut worst = 0.0f64;
        while x < 400.0 {
            let d = (table.eval(x) - bessel_j(11, x)).abs();
            worst = worst.max(d);
            x += 0.379;
        }
        assert!(worst < 5e-12, "worst table error {worst:e}");
        // out-of-range falls back to the reference path
        let beyond = table.t_max() + 1.0;
        assert_eq!(table.eval(beyond), bessel_j(11, beyond));
    }
}
