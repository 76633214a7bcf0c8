//! Command line interface: one subcommand per experiment, CSV/JSON
//! artifacts, exit code 0 on success, 1 when a verification check misses
//! its tolerance (with a machine-parseable failure list), 2 on usage or
//! configuration errors.

use super::config::{default_cache_dir, load_config, RunConfig};
use super::report;
use crate::characters::{gauss_sum, make_character, DirichletCharacter, PrimeModulus};
use crate::circle::{build_itilde, build_moduli, rat_from_f64, ModuliMode};
use crate::expsums;
use crate::hecke::{CuspForm, HeckeError};
use crate::pipeline::{self, ExperimentParams, PipelineError};
use crate::tolerances;
use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use std::io::Write;
use std::path::PathBuf;

#[derive(Parser, Debug)]
#[command(
    name = "weylsum",
    about = "Numerical laboratory for twisted GL(2) short character sums",
    version
)]
struct Cli {
    /// TOML config file; CLI flags override file values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory for artifacts.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Coefficient cache directory (env WEYLSUM_CACHE_DIR also works).
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    /// Worker threads (0 = all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Print exact cusp-form coefficients a(1..n).
    Tau(TauArgs),
    /// Character table and Gauss sum diagnostics for chi_j mod p.
    Char(CharArgs),
    /// One Kloosterman sum with its Weil margin.
    Kloosterman(KloostermanArgs),
    /// Exact L2 error of the circle-method step function over a Q grid.
    JutilaError(JutilaArgs),
    /// Bessel-dual summation identity residuals.
    VoronoiCheck(VoronoiArgs),
    /// Gauss-sum dual (twisted Poisson) identity residuals.
    PoissonCheck(PoissonArgs),
    /// Pre- vs post-transform evaluation of the localized sum.
    StildeConsistency(StildeArgs),
    /// Zero/non-zero frequency decomposition ratios.
    Omega(OmegaArgs),
    /// Bound-ratio sweep over an (N, p, theta) grid.
    Sweep(SweepArgs),
    /// First sign disagreement of lambda(n) against the quadratic character.
    SignChange(SignChangeArgs),
    /// Aggregate completed artifacts into a summary JSON.
    Report(ReportArgs),
}

#[derive(Args, Debug)]
struct TauArgs {
    #[arg(long)]
    n: u64,
    #[arg(long, default_value = "delta")]
    form: String,
}

#[derive(Args, Debug)]
struct CharArgs {
    #[arg(long)]
    p: u64,
    #[arg(long)]
    j: u64,
    /// Print chi(n) for n up to this bound.
    #[arg(long, default_value_t = 0)]
    table: u64,
}

#[derive(Args, Debug)]
struct KloostermanArgs {
    #[arg(long, allow_hyphen_values = true)]
    a: i64,
    #[arg(long, allow_hyphen_values = true)]
    b: i64,
    #[arg(long)]
    c: u64,
}

#[derive(Args, Debug)]
struct JutilaArgs {
    /// Comma-separated moduli scales.
    #[arg(long, default_value = "10,20,40,80,160")]
    q_list: String,
    /// Comma-separated exponents e; each gives delta = Q^{-e}.
    #[arg(long, default_value = "1,1.5,2")]
    delta_exps: String,
    #[arg(long, default_value_t = 7)]
    p: u64,
    /// primes | all-coprime
    #[arg(long, default_value = "all-coprime")]
    mode: String,
}

#[derive(Args, Debug)]
struct VoronoiArgs {
    #[arg(long)]
    q: u64,
    #[arg(long)]
    y: f64,
    /// Check a single residue instead of all reduced a mod q.
    #[arg(long)]
    a: Option<u64>,
    #[arg(long, default_value = "delta")]
    form: String,
}

#[derive(Args, Debug)]
struct PoissonArgs {
    #[arg(long)]
    p: u64,
    #[arg(long)]
    q: u64,
    #[arg(long)]
    a: u64,
    #[arg(long, default_value_t = 500)]
    n: u64,
    /// Character index j; default is the quadratic character.
    #[arg(long)]
    char_index: Option<u64>,
    /// Comma-separated x values in units of delta = 1/N.
    #[arg(long, default_value = "0,0.5,-0.5", allow_hyphen_values = true)]
    x_over_delta: String,
}

#[derive(Args, Debug)]
struct StildeArgs {
    #[arg(long, default_value_t = 500)]
    n: u64,
    #[arg(long)]
    p: u64,
    #[arg(long, default_value_t = 0.05)]
    theta: f64,
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    x_over_delta: String,
}

#[derive(Args, Debug)]
struct OmegaArgs {
    #[arg(long, default_value_t = 50)]
    n: u64,
    #[arg(long, default_value_t = 101)]
    p: u64,
    #[arg(long, default_value_t = 0.05)]
    theta: f64,
    /// Defaults to every integer in [Q1, 2Q1] coprime to p.
    #[arg(long)]
    q1: Option<u64>,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    x: f64,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[arg(long)]
    n_min: Option<u64>,
    #[arg(long)]
    n_max: Option<u64>,
    #[arg(long)]
    n_points: Option<usize>,
    #[arg(long)]
    p_max: Option<u64>,
    /// Comma-separated theta values.
    #[arg(long)]
    theta: Option<String>,
}

#[derive(Args, Debug)]
struct SignChangeArgs {
    #[arg(long, default_value_t = 1000)]
    p_max: u64,
}

#[derive(Args, Debug)]
struct ReportArgs {
    #[arg(long)]
    dir: PathBuf,
}

/// Entry point used by the binary; returns the process exit code.
pub fn cli_dispatch<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            // clap help/version are not errors
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = e.print();
            return code;
        }
    };
    match run(cli) {
        Ok(failures) if failures.is_empty() => 0,
        Ok(failures) => {
            for f in &failures {
                println!("FAIL {f}");
            }
            1
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            2
        }
    }
}

fn effective_config(cli: &Cli) -> Result<RunConfig> {
    let mut cfg = match &cli.config {
        Some(path) => load_config(path)?,
        None => RunConfig::default(),
    };
    if let Some(out) = &cli.out {
        if cli.config.is_some() && *out != cfg.run.out_dir {
            eprintln!(
                "config: --out {} overrides file value {}",
                out.display(),
                cfg.run.out_dir.display()
            );
        }
        cfg.run.out_dir = out.clone();
    }
    if let Some(dir) = &cli.cache_dir {
        cfg.run.cache_dir = dir.clone();
    } else if std::env::var_os("WEYLSUM_CACHE_DIR").is_some() {
        cfg.run.cache_dir = default_cache_dir();
    }
    if let Some(w) = cli.workers {
        if cli.config.is_some() && w != cfg.run.workers {
            eprintln!("config: --workers {w} overrides file value {}", cfg.run.workers);
        }
        cfg.run.workers = w;
    }
    Ok(cfg)
}

fn run(cli: Cli) -> Result<Vec<String>> {
    let cfg = effective_config(&cli)?;
    let body = || -> Result<Vec<String>> {
        match &cli.cmd {
            Cmd::Tau(a) => cmd_tau(&cfg, a),
            Cmd::Char(a) => cmd_char(&cfg, a),
            Cmd::Kloosterman(a) => cmd_kloosterman(&cfg, a),
            Cmd::JutilaError(a) => cmd_jutila(&cfg, a),
            Cmd::VoronoiCheck(a) => cmd_voronoi(&cfg, a),
            Cmd::PoissonCheck(a) => cmd_poisson(&cfg, a),
            Cmd::StildeConsistency(a) => cmd_stilde(&cfg, a),
            Cmd::Omega(a) => cmd_omega(&cfg, a),
            Cmd::Sweep(a) => cmd_sweep(&cfg, a),
            Cmd::SignChange(a) => cmd_sign_change(&cfg, a),
            Cmd::Report(a) => cmd_report(&cfg, a),
        }
    };
    if cfg.run.workers > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.run.workers)
            .build()
            .context("building worker pool")?
            .install(body)
    } else {
        body()
    }
}

/// Build a form with the coefficient cache, growing the table (x2) when a
/// computation signals it ran past the cached range.
fn with_form<T>(
    cfg: &RunConfig,
    id: &str,
    initial_n_max: usize,
    mut job: impl FnMut(&CuspForm) -> Result<T, PipelineError>,
) -> Result<T> {
    let mut n_max = initial_n_max;
    loop {
        let form = CuspForm::load_or_build(id, n_max, &cfg.run.cache_dir)?;
        match job(&form) {
            Ok(v) => return Ok(v),
            Err(PipelineError::Hecke(HeckeError::CacheMiss { n, .. })) => {
                let need = (n as usize).max(n_max * 2);
                eprintln!("coefficient table too short; extending to {need}");
                n_max = need;
            }
            Err(e) => return Err(e.into()),
        }
    }
}

fn out_writer(cfg: &RunConfig, name: &str) -> Result<std::fs::File> {
    std::fs::create_dir_all(&cfg.run.out_dir)
        .with_context(|| format!("creating {}", cfg.run.out_dir.display()))?;
    let path = cfg.run.out_dir.join(name);
    std::fs::File::create(&path).with_context(|| format!("creating {}", path.display()))
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>>
where
    T::Err: std::fmt::Display,
{
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| {
            t.trim()
                .parse::<T>()
                .map_err(|e| anyhow!("bad {what} entry {t:?}: {e}"))
        })
        .collect()
}

fn cmd_tau(cfg: &RunConfig, args: &TauArgs) -> Result<Vec<String>> {
    if args.n == 0 {
        bail!("--n must be >= 1");
    }
    let form = CuspForm::load_or_build(&args.form, args.n as usize, &cfg.run.cache_dir)?;
    let name = if args.form == "delta" { "tau" } else { "a" };
    for n in 1..=args.n {
        println!("{name}({n}) = {}", form.coeff(n as usize));
    }
    Ok(Vec::new())
}

fn cmd_char(_cfg: &RunConfig, args: &CharArgs) -> Result<Vec<String>> {
    let chi = make_character(args.p, args.j)?;
    println!(
        "chi_{} mod {}: primitive = {}, quadratic = {}",
        args.j,
        args.p,
        chi.is_primitive(),
        chi.is_quadratic()
    );
    for n in 0..args.table.min(args.p) {
        let v = chi.value(n as i64);
        println!("chi({n}) = {:+.12} {:+.12}i", v.re, v.im);
    }
    let mut failures = Vec::new();
    if chi.is_primitive() {
        let tau = gauss_sum(&chi)?;
        let gap = (tau.norm() - (args.p as f64).sqrt()).abs();
        println!(
            "gauss_sum = {:+.12} {:+.12}i, |tau| - sqrt(p) = {:+.3e}",
            tau.re, tau.im, gap
        );
        if gap > tolerances::EXACT_F64 {
            failures.push(format!(
                "gauss-sum-modulus p={} j={} gap={gap:e} tol={:e}",
                args.p,
                args.j,
                tolerances::EXACT_F64
            ));
        }
    } else {
        println!("principal character: gauss sum skipped (|tau| != sqrt(p))");
    }
    Ok(failures)
}

fn cmd_kloosterman(_cfg: &RunConfig, args: &KloostermanArgs) -> Result<Vec<String>> {
    if args.c == 0 {
        bail!("--c must be >= 1");
    }
    let s = expsums::kloosterman(args.a, args.b, args.c);
    let margin = expsums::weil_margin(args.a, args.b, args.c);
    println!("S({},{};{}) = {:.12}", args.a, args.b, args.c, s);
    println!("weil_margin = {margin:.12}");
    let mut failures = Vec::new();
    if margin > 1.0 + tolerances::WEIL_SLACK {
        failures.push(format!(
            "weil-margin a={} b={} c={} margin={margin}",
            args.a, args.b, args.c
        ));
    }
    Ok(failures)
}

fn cmd_jutila(cfg: &RunConfig, args: &JutilaArgs) -> Result<Vec<String>> {
    let qs: Vec<f64> = parse_list(&args.q_list, "Q")?;
    let exps: Vec<f64> = parse_list(&args.delta_exps, "delta exponent")?;
    let mode = match args.mode.as_str() {
        "primes" => ModuliMode::Primes,
        "all-coprime" => ModuliMode::AllCoprime,
        other => bail!("mode must be primes or all-coprime, got {other:?}"),
    };
    let mut csv = out_writer(cfg, "jutila_error.csv")?;
    writeln!(csv, "Q,delta,L,l2_error,normalized")?;
    let mut failures = Vec::new();
    for &q in &qs {
        let moduli = build_moduli(q, args.p, mode)?;
        for &e in &exps {
            let delta = rat_from_f64(q.powf(-e));
            let approx = build_itilde(&moduli, delta)?;
            let err = crate::circle::l2_error(&approx);
            let l = moduli.l_mass() as f64;
            let df = q.powf(-e);
            let normalized = err * df * l * l / (q * q * q.ln().powi(2));
            writeln!(csv, "{q},{df:.16e},{},{err:.16e},{normalized:.16e}", moduli.l_mass())?;
            println!(
                "Q = {q:6.1} delta = Q^-{e:<4} L = {:7} l2 = {err:.6e} normalized = {normalized:.4}",
                moduli.l_mass()
            );
            if normalized > tolerances::JUTILA_L2_CONSTANT {
                failures.push(format!(
                    "jutila-l2 Q={q} exp={e} normalized={normalized} tol={}",
                    tolerances::JUTILA_L2_CONSTANT
                ));
            }
        }
    }
    Ok(failures)
}

fn voronoi_table_guess(q: u64, y: f64) -> usize {
    (12_000.0 * (q * q) as f64 / y).max(40_000.0) as usize
}

fn cmd_voronoi(cfg: &RunConfig, args: &VoronoiArgs) -> Result<Vec<String>> {
    let mut csv = out_writer(cfg, "voronoi_residuals.csv")?;
    writeln!(csv, "q,a,Y,residual,absolute")?;
    let reports = with_form(
        cfg,
        &args.form,
        voronoi_table_guess(args.q, args.y),
        |form| match args.a {
            Some(a) => pipeline::voronoi_identity_check(form, a, args.q, args.y).map(|r| vec![r]),
            None => pipeline::voronoi_identity_check_all(form, args.q, args.y),
        },
    )?;
    let mut failures = Vec::new();
    for r in &reports {
        writeln!(
            csv,
            "{},{},{},{:.16e},{}",
            r.q, r.a, r.y_scale, r.residual, r.residual_is_absolute
        )?;
        println!(
            "q = {} a = {:2} Y = {:6.1}: residual = {:.3e}{} ({} dual terms)",
            r.q,
            r.a,
            r.y_scale,
            r.residual,
            if r.residual_is_absolute { " (absolute)" } else { "" },
            r.dual_terms_used
        );
        if r.residual > cfg.tolerances.voronoi {
            failures.push(format!(
                "voronoi q={} a={} Y={} residual={:e} tol={:e}",
                r.q, r.a, r.y_scale, r.residual, cfg.tolerances.voronoi
            ));
        }
    }
    Ok(failures)
}

fn cmd_poisson(cfg: &RunConfig, args: &PoissonArgs) -> Result<Vec<String>> {
    let j = args.char_index.unwrap_or((args.p - 1) / 2);
    let chi = make_character(args.p, j)?;
    let xs: Vec<f64> = parse_list(&args.x_over_delta, "x/delta")?;
    let delta = 1.0 / args.n as f64;
    let mut csv = out_writer(cfg, "poisson_residuals.csv")?;
    writeln!(csv, "p,q,a,j,x,residual,ablated_residual")?;
    let mut failures = Vec::new();
    for &xd in &xs {
        let x = xd * delta;
        let r = pipeline::poisson_identity_check(&chi, args.a, args.q, x, args.n)?;
        writeln!(
            csv,
            "{},{},{},{},{x:.16e},{:.16e},{:.16e}",
            args.p, args.q, args.a, j, r.residual, r.ablated_residual
        )?;
        println!(
            "p = {} q = {} a = {} j = {} x = {xd}*delta: residual = {:.3e}, ablated = {:.3e}",
            args.p, args.q, args.a, j, r.residual, r.ablated_residual
        );
        if r.residual > cfg.tolerances.poisson {
            failures.push(format!(
                "poisson p={} q={} a={} x={x} residual={:e} tol={:e}",
                args.p, args.q, args.a, r.residual, cfg.tolerances.poisson
            ));
        }
        if r.ablated_residual < tolerances::POISSON_ABLATION_MIN {
            failures.push(format!(
                "poisson-ablation p={} q={} a={} x={x} ablated={:e} (negative control too quiet)",
                args.p, args.q, args.a, r.ablated_residual
            ));
        }
    }
    Ok(failures)
}

fn cmd_stilde(cfg: &RunConfig, args: &StildeArgs) -> Result<Vec<String>> {
    let params = ExperimentParams::derive(args.n, args.p, args.theta)?;
    let chi = make_character(args.p, (args.p - 1) / 2)?;
    let moduli = build_moduli(params.q_scale, args.p, ModuliMode::AllCoprime)?;
    let xs: Vec<f64> = parse_list(&args.x_over_delta, "x/delta")?;
    let mut failures = Vec::new();
    for &xd in &xs {
        let x = xd * params.delta;
        let rep = with_form(cfg, "delta", 60_000, |form| {
            pipeline::stilde_consistency(form, &chi, &params, &moduli, x)
        })?;
        println!(
            "N = {} p = {} x = {xd}*delta: pre = {:+.8e}{:+.8e}i post = {:+.8e}{:+.8e}i rel = {:.3e}",
            args.n, args.p, rep.pre.re, rep.pre.im, rep.post.re, rep.post.im, rep.rel_diff
        );
        if rep.rel_diff > cfg.tolerances.stilde {
            failures.push(format!(
                "stilde N={} p={} x={x} rel_diff={:e} tol={:e}",
                args.n, args.p, rep.rel_diff, cfg.tolerances.stilde
            ));
        }
    }
    Ok(failures)
}

fn cmd_omega(cfg: &RunConfig, args: &OmegaArgs) -> Result<Vec<String>> {
    let params = ExperimentParams::derive(args.n, args.p, args.theta)?;
    let chi = make_character(args.p, (args.p - 1) / 2)?;
    let q1s: Vec<u64> = match args.q1 {
        Some(q1) => vec![q1],
        None => {
            let lo = params.q1.ceil() as u64;
            let hi = (2.0 * params.q1).floor() as u64;
            (lo.max(2)..=hi)
                .filter(|&q| crate::arith::gcd_u64(q, args.p) == 1)
                .collect()
        }
    };
    if q1s.is_empty() {
        bail!("no admissible q1 in [{}, {}]", params.q1, 2.0 * params.q1);
    }
    let mut csv = out_writer(cfg, "omega.csv")?;
    writeln!(csv, "q1,x,ratio_zero,ratio_nonzero,dual_gap,n_cut,m_cut")?;
    let mut failures = Vec::new();
    for &q1 in &q1s {
        let rec = with_form(cfg, "delta", 40_000, |form| {
            pipeline::omega_decomposition(form, &chi, &params, q1, args.x)
        })?;
        let dual_gap = (rec.sigma_zero - rec.sigma_zero_divisor_form).norm()
            / rec.sigma_zero.norm().max(1.0);
        writeln!(
            csv,
            "{q1},{:.16e},{:.16e},{:.16e},{:.16e},{},{}",
            args.x, rec.ratio_zero, rec.ratio_nonzero, dual_gap, rec.n_cut_max, rec.m_cut
        )?;
        println!(
            "q1 = {q1}: |Sigma_0|/(M0 sqrt(N0)) = {:.4}, |Sigma_!=0|/(N0^1.5 Q2^2 sqrt(Q1)) = {:.4}, dual gap = {:.2e}",
            rec.ratio_zero, rec.ratio_nonzero, dual_gap
        );
        if rec.ratio_zero > tolerances::OMEGA_RATIO_MAX {
            failures.push(format!("omega-zero q1={q1} ratio={}", rec.ratio_zero));
        }
        if rec.ratio_nonzero > tolerances::OMEGA_RATIO_MAX {
            failures.push(format!("omega-nonzero q1={q1} ratio={}", rec.ratio_nonzero));
        }
        if dual_gap > tolerances::DUAL_FORMULA {
            failures.push(format!("omega-dual-formula q1={q1} gap={dual_gap:e}"));
        }
    }
    Ok(failures)
}

fn cmd_sweep(cfg: &RunConfig, args: &SweepArgs) -> Result<Vec<String>> {
    let mut cfg = cfg.clone();
    if let Some(v) = args.n_min {
        cfg.sweep.n_min = v;
    }
    if let Some(v) = args.n_max {
        cfg.sweep.n_max = v;
    }
    if let Some(v) = args.n_points {
        cfg.sweep.n_points = v;
    }
    if let Some(v) = args.p_max {
        cfg.sweep.p_max = v;
    }
    if let Some(list) = &args.theta {
        cfg.sweep.theta = parse_list(list, "theta")?;
    }
    cfg.validate()?;
    let grid = pipeline::SweepGrid {
        n_values: cfg.n_grid(),
        p_values: crate::arith::primes_in(3, cfg.sweep.p_max),
        thetas: cfg.sweep.theta.clone(),
    };
    let table = 2 * cfg.sweep.n_max as usize + 2;
    let form = CuspForm::load_or_build(&cfg.run.form, table, &cfg.run.cache_dir)?;
    let results = pipeline::bound_ratio_sweep(&form, &grid);
    let mut records = Vec::new();
    let mut flagged = 0usize;
    for (cell, res) in grid.cells().iter().zip(results) {
        match res {
            Ok(r) => records.push(r),
            Err(e) => {
                flagged += 1;
                eprintln!("cell {cell:?} flagged: {e}");
            }
        }
    }
    let mut csv = out_writer(&cfg, "sweep.csv")?;
    pipeline::write_sweep_csv(&records, &mut csv)?;
    let in_window: Vec<&pipeline::SweepRecord> = records.iter().filter(|r| r.window).collect();
    let max_ratio = in_window.iter().map(|r| r.ratio).fold(0.0, f64::max);
    println!(
        "sweep: {} cells ({} flagged), {} in window, max in-window ratio = {max_ratio:.4}",
        records.len(),
        flagged,
        in_window.len()
    );
    let mut failures = Vec::new();
    if max_ratio > tolerances::SWEEP_RATIO_MAX {
        failures.push(format!(
            "sweep-regression max_ratio={max_ratio} frozen_bound={}",
            tolerances::SWEEP_RATIO_MAX
        ));
    }
    Ok(failures)
}

fn cmd_sign_change(cfg: &RunConfig, args: &SignChangeArgs) -> Result<Vec<String>> {
    let mut csv = out_writer(cfg, "sign_change.csv")?;
    writeln!(csv, "p,index,index_over_p23")?;
    let table = ((args.p_max as f64).powf(2.0 / 3.0 + 0.1) * 4.0) as usize + 64;
    let form = CuspForm::load_or_build("delta", table, &cfg.run.cache_dir)?;
    let mut failures = Vec::new();
    for p in crate::arith::primes_in(3, args.p_max) {
        let modulus = PrimeModulus::new(p)?;
        let chi = DirichletCharacter::from_modulus(modulus, (p - 1) / 2)?;
        match pipeline::first_sign_disagreement(&form, &chi)? {
            Some((idx, ratio)) => {
                writeln!(csv, "{p},{idx},{ratio:.16e}")?;
                let cap = (p as f64).powf(2.0 / 3.0 + 0.1);
                if (idx as f64) > cap {
                    failures.push(format!("sign-change p={p} index={idx} cap={cap:.2}"));
                }
            }
            None => {
                writeln!(csv, "{p},,")?;
                failures.push(format!(
                    "sign-change p={p} no disagreement within the coefficient table"
                ));
            }
        }
    }
    println!(
        "sign-change scan over p <= {} complete ({} failures)",
        args.p_max,
        failures.len()
    );
    Ok(failures)
}

fn cmd_report(cfg: &RunConfig, args: &ReportArgs) -> Result<Vec<String>> {
    let summary = report::report(&args.dir)?;
    let json = serde_json::to_string_pretty(&summary)?;
    println!("{json}");
    let mut out = out_writer(cfg, "summary.json")?;
    out.write_all(json.as_bytes())?;
    Ok(Vec::new())
}
