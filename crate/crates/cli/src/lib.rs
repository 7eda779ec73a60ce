//! Command-line front end: parses flags, dispatches to the `entdist`
//! library and writes CSV or JSON with a run manifest.
//!
//! Exit codes: 0 success, 1 usage, 2 input validation, 3 computation failure.

use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand};
use rand::Rng;
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use entdist::bell::{enumerate_mc_blocks, is_ssd, ssd_violation, MAX_BLOCK_DIM, SSD_TOL};
use entdist::bounds::{
    approx_deg_upper, classify_rank2, e_da_two_qubit, e_mp_block, hashing_lower, ppt_ree_isotropic, ppt_ree_werner, rains_werner,
    transfer_degradability_check, BoundReport, EdaOptions, CLASS_TOL,
};
use entdist::entropy::{coherent_information, log_negativity};
use entdist::io::{read_state, read_vectors};
use entdist::optimizer::{
    convex_hull_1d, phi_g_qubit_depolarizing, phi_g_qutrit_depolarizing, two_way_iso_value, two_way_werner_value, CurvePoint,
    QubitSearch, QutritSearch,
};
use entdist::sdp::programs::{adeg, dg, e_wd};
use entdist::sdp::SolverOptions;
use entdist::states::{
    block_mixture_state, depolarizing_choi, isotropic, random_mc_matrix, stream_rng, theta_alpha, theta_block, werner,
};
use entdist::{DensityMatrix, Error};

#[derive(Debug, Parser)]
#[command(name = "entdist", version, about = "Bounds on distillable entanglement of bipartite states")]
pub struct Cli {
    /// Worker threads for grid and benchmark commands (default: logical cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Enumerate Bell blocks spanning only maximally correlated states.
    McBlocks {
        /// Local dimension, 2 to 6.
        #[arg(long)]
        d: usize,
        /// CSV destination; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Closed-form and achieving-state bounds for isotropic states.
    IsoBounds {
        #[arg(long)]
        d: usize,
        /// Fidelity with the maximally entangled state, in [0, 1].
        #[arg(long)]
        f: f64,
        /// Also solve the E_WD program.
        #[arg(long)]
        with_ewd: bool,
    },
    /// Closed-form, Rains and achieving-state bounds for Werner states.
    WernerBounds {
        #[arg(long)]
        d: usize,
        /// Weight on the antisymmetric subspace, in [0, 1].
        #[arg(long)]
        p: f64,
        /// Also solve the E_WD program.
        #[arg(long)]
        with_ewd: bool,
    },
    /// Upper bound curve on the depolarizing-channel quantum capacity.
    DepolCapacity {
        /// Channel dimension, 2 or 3.
        #[arg(long)]
        d: usize,
        /// Grid as start:stop:step, stop inclusive.
        #[arg(long)]
        p_grid: String,
        /// Restarts per grid point (default 32 for d=2, 64 for d=3).
        #[arg(long)]
        restarts: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// E_MP versus E_WD on random Bell-block mixtures.
    BenchmarkRandom {
        /// Local dimension; only 3 is supported.
        #[arg(long)]
        d: usize,
        /// Depolarizing weight mixed into every sample.
        #[arg(long)]
        p: f64,
        /// Number of random samples.
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        /// Append rows for the two theta states at p = 0, 0.5 and the requested p.
        #[arg(long)]
        with_theta: bool,
    },
    /// Evaluate selected bounds on a state read from a JSON file.
    StateBound {
        /// JSON density matrix with dims, re and optional im.
        #[arg(long = "in")]
        input: PathBuf,
        /// Comma-separated: hashing, log_neg, e_wd, dg, adeg, approx_deg, e_da_2q, transfer, rank2.
        #[arg(long)]
        bounds: String,
        /// Solver gap and feasibility tolerance.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Test a family of pure vectors for simultaneous Schmidt decomposability.
    SsdCheck {
        /// JSON array of pure vectors with dims, re and optional im.
        #[arg(long = "in")]
        input: PathBuf,
    },
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Input(String),
    Failure(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Input(_) => 2,
            CliError::Failure(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Input(m) => write!(f, "invalid input: {m}"),
            CliError::Failure(m) => write!(f, "computation failed: {m}"),
        }
    }
}

/// Library errors on user-supplied data are input errors; the rest are failures.
fn classify(e: Error) -> CliError {
    match e {
        Error::Solver(_) | Error::Optimizer(_) => CliError::Failure(e.to_string()),
        _ => CliError::Input(e.to_string()),
    }
}

fn failure(e: Error) -> CliError {
    CliError::Failure(e.to_string())
}

/// Command line, seed, tolerances, version and wall time of a run.
#[derive(Clone, Debug)]
pub struct RunManifest {
    pub command: String,
    pub seed: Option<u64>,
    pub gap_tol: f64,
    pub feas_tol: f64,
    pub version: &'static str,
    pub wall_time_s: f64,
}

impl RunManifest {
    fn entries(&self) -> Vec<(&'static str, String)> {
        vec![
            ("command", self.command.clone()),
            ("seed", self.seed.map_or_else(|| "none".to_string(), |s| s.to_string())),
            ("gap_tol", format!("{:e}", self.gap_tol)),
            ("feas_tol", format!("{:e}", self.feas_tol)),
            ("version", self.version.to_string()),
            ("wall_time_s", format!("{:.3}", self.wall_time_s)),
        ]
    }

    /// `# key: value` lines for CSV files.
    pub fn csv_header(&self) -> String {
        self.entries().into_iter().map(|(k, v)| format!("# {k}: {v}\n")).collect()
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        for (k, v) in self.entries() {
            m.insert(k.to_string(), Value::String(v));
        }
        Value::Object(m)
    }
}

/// 12 significant digits in scientific notation.
pub fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        "NaN".to_string()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        format!("{x:.11e}")
    }
}

/// Parses `start:stop:step` into an inclusive grid inside `[0, 1]`.
pub fn parse_grid(text: &str) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        return Err(CliError::Usage(format!("grid must be start:stop:step, got {text:?}")));
    }
    let nums: Vec<f64> = parts
        .iter()
        .map(|s| s.trim().parse::<f64>().map_err(|_| CliError::Usage(format!("bad grid number {s:?}"))))
        .collect::<Result<_, _>>()?;
    let (start, stop, step) = (nums[0], nums[1], nums[2]);
    if !(0.0..=1.0).contains(&start) || !(0.0..=1.0).contains(&stop) || start > stop {
        return Err(CliError::Usage(format!("grid bounds must satisfy 0 <= start <= stop <= 1, got {start}:{stop}")));
    }
    if start == stop {
        return Ok(vec![start]);
    }
    if !(step > 0.0 && step.is_finite()) {
        return Err(CliError::Usage("grid step must be positive".into()));
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
    if count > 100_000 {
        return Err(CliError::Usage(format!("grid has {count} points")));
    }
    // rounded to 12 decimals so 0.1 + 2·0.05 prints as 0.2
    Ok((0..count).map(|i| ((start + i as f64 * step) * 1e12).round() / 1e12).map(|p| p.min(stop)).collect())
}

struct Context {
    command_line: String,
    started: Instant,
    solver: SolverOptions,
}

impl Context {
    fn manifest(&self, seed: Option<u64>) -> RunManifest {
        RunManifest {
            command: self.command_line.clone(),
            seed,
            gap_tol: self.solver.gap_tol,
            feas_tol: self.solver.feas_tol,
            version: env!("CARGO_PKG_VERSION"),
            wall_time_s: self.started.elapsed().as_secs_f64(),
        }
    }
}

/// Fails early when the output directory does not exist.
fn check_out(path: &Path) -> Result<(), CliError> {
    match path.parent() {
        Some(dir) if !dir.as_os_str().is_empty() && !dir.is_dir() => {
            Err(CliError::Input(format!("output directory {} does not exist", dir.display())))
        }
        _ => Ok(()),
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args: Vec<std::ffi::OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let rendered = e.render().to_string();
            if code == 0 {
                let _ = write!(stdout, "{rendered}");
            } else {
                let _ = write!(stderr, "{rendered}");
            }
            return code;
        }
    };
    let command_line = args.iter().map(|a| a.to_string_lossy().into_owned()).collect::<Vec<_>>().join(" ");
    match execute(cli, command_line, stdout, stderr) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "entdist: {e}");
            e.exit_code()
        }
    }
}

fn execute(cli: Cli, command_line: String, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), CliError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(j) = cli.jobs {
        if j == 0 {
            return Err(CliError::Usage("--jobs must be at least 1".into()));
        }
        builder = builder.num_threads(j);
    }
    let pool = builder.build().map_err(|e| CliError::Failure(e.to_string()))?;
    let mut ctx = Context { command_line, started: Instant::now(), solver: SolverOptions::default() };
    let out =
        |text: &str, stdout: &mut dyn Write| stdout.write_all(text.as_bytes()).map_err(|e| CliError::Failure(e.to_string()));
    match cli.command {
        Command::McBlocks { d, out: path } => {
            if let Some(p) = &path {
                check_out(p)?;
            }
            let text = mc_blocks(&ctx, d)?;
            match path {
                Some(p) => write_file(&p, &text),
                None => out(&text, stdout),
            }
        }
        Command::IsoBounds { d, f, with_ewd } => out(&pretty(&iso_bounds(&ctx, d, f, with_ewd)?), stdout),
        Command::WernerBounds { d, p, with_ewd } => out(&pretty(&werner_bounds(&ctx, d, p, with_ewd)?), stdout),
        Command::DepolCapacity { d, p_grid, restarts, seed, out: path } => {
            check_out(&path)?;
            let text = depol_capacity(&ctx, &pool, d, &p_grid, restarts, seed, stderr)?;
            write_file(&path, &text)
        }
        Command::BenchmarkRandom { d, p, n, seed, out: path, with_theta } => {
            check_out(&path)?;
            let text = benchmark_random(&ctx, &pool, d, p, n, seed, with_theta, stderr)?;
            write_file(&path, &text)
        }
        Command::StateBound { input, bounds, tol } => {
            if let Some(t) = tol {
                if !(t > 0.0 && t.is_finite()) {
                    return Err(CliError::Usage(format!("--tol must be positive, got {t}")));
                }
                ctx.solver.gap_tol = t;
                ctx.solver.feas_tol = t;
            }
            out(&pretty(&state_bound(&ctx, &input, &bounds)?), stdout)
        }
        Command::SsdCheck { input } => out(&pretty(&ssd_check(&ctx, &input)?), stdout),
    }
}

fn mc_blocks(ctx: &Context, d: usize) -> Result<String, CliError> {
    if !(2..=MAX_BLOCK_DIM).contains(&d) {
        return Err(CliError::Usage(format!(
            "--d must lie in 2..={MAX_BLOCK_DIM}; larger d is not supported by the exhaustive enumeration"
        )));
    }
    let blocks = enumerate_mc_blocks(d).map_err(classify)?;
    let mut s = String::new();
    let ks: Vec<String> = (1..=d).map(|i| format!("k{i}")).collect();
    s.push_str(&format!("d,block_id,{}\n", ks.join(",")));
    for (i, b) in blocks.iter().enumerate() {
        let row: Vec<String> = b.linear_indices().iter().map(|k| k.to_string()).collect();
        s.push_str(&format!("{d},{},{}\n", i + 1, row.join(",")));
    }
    Ok(format!("{}{s}", ctx.manifest(None).csv_header()))
}

fn check_dim(d: usize) -> Result<(), CliError> {
    if d < 2 {
        return Err(CliError::Usage(format!("--d must be at least 2, got {d}")));
    }
    Ok(())
}

fn check_unit(name: &str, x: f64) -> Result<(), CliError> {
    if !(0.0..=1.0).contains(&x) {
        return Err(CliError::Usage(format!("--{name} must lie in [0, 1], got {x}")));
    }
    Ok(())
}

fn iso_bounds(ctx: &Context, d: usize, f: f64, with_ewd: bool) -> Result<Value, CliError> {
    check_dim(d)?;
    check_unit("f", f)?;
    let rho = isotropic(d, f).map_err(classify)?;
    let mut report = BoundReport::new(format!("isotropic(d={d}, f={f})"), hashing_lower(&rho).map_err(failure)?);
    report.upper.insert("ppt_ree".into(), ppt_ree_isotropic(d, f).map_err(failure)?);
    report.upper.insert("two_way_achieving".into(), two_way_iso_value(d, f).map_err(failure)?);
    report.upper.insert("log_neg".into(), log_negativity(&rho).map_err(failure)?);
    if with_ewd {
        let (v, rep) = e_wd(&rho, &ctx.solver).map_err(failure)?;
        report.upper.insert("e_wd".into(), v);
        report.solver.insert("e_wd".into(), rep);
    }
    finish_report(ctx, report)
}

fn werner_bounds(ctx: &Context, d: usize, p: f64, with_ewd: bool) -> Result<Value, CliError> {
    check_dim(d)?;
    check_unit("p", p)?;
    let rho = werner(d, p).map_err(classify)?;
    let mut report = BoundReport::new(format!("werner(d={d}, p={p})"), hashing_lower(&rho).map_err(failure)?);
    report.upper.insert("ppt_ree".into(), ppt_ree_werner(d, p).map_err(failure)?);
    report.upper.insert("rains".into(), rains_werner(d, p).map_err(failure)?);
    report.upper.insert("two_way_achieving".into(), two_way_werner_value(d, p).map_err(failure)?);
    report.upper.insert("log_neg".into(), log_negativity(&rho).map_err(failure)?);
    if with_ewd {
        let (v, rep) = e_wd(&rho, &ctx.solver).map_err(failure)?;
        report.upper.insert("e_wd".into(), v);
        report.solver.insert("e_wd".into(), rep);
    }
    finish_report(ctx, report)
}

fn finish_report(ctx: &Context, report: BoundReport) -> Result<Value, CliError> {
    let mut v = serde_json::to_value(&report).expect("report serializes");
    v["manifest"] = ctx.manifest(None).to_json();
    Ok(v)
}

fn depol_capacity(
    ctx: &Context,
    pool: &rayon::ThreadPool,
    d: usize,
    grid: &str,
    restarts: Option<usize>,
    seed: u64,
    stderr: &mut dyn Write,
) -> Result<String, CliError> {
    if d != 2 && d != 3 {
        return Err(CliError::Usage(format!("--d must be 2 or 3, got {d}")));
    }
    let grid = parse_grid(grid)?;
    let restarts = restarts.unwrap_or(if d == 2 { 32 } else { 64 });
    if restarts == 0 {
        return Err(CliError::Usage("--restarts must be at least 1".into()));
    }
    let total = grid.len();
    let rows: Vec<(Result<CurvePoint, Error>, f64)> = pool.install(|| {
        grid.par_iter()
            .enumerate()
            .map(|(i, &p)| {
                let point = if d == 2 {
                    phi_g_qubit_depolarizing(p, &QubitSearch { restarts, seed, ..QubitSearch::default() }, &ctx.solver)
                } else {
                    phi_g_qutrit_depolarizing(p, &QutritSearch { restarts, seed, ..QutritSearch::default() })
                };
                let ci = depolarizing_choi(d, p).and_then(|r| coherent_information(&r)).unwrap_or(f64::NAN);
                eprintln!("depol-capacity: point {}/{total} (p = {p}) done", i + 1);
                (point, ci)
            })
            .collect()
    });
    let points: Vec<CurvePoint> = rows.iter().filter_map(|(r, _)| r.as_ref().ok().cloned()).collect();
    if points.is_empty() {
        let first = rows.iter().find_map(|(r, _)| r.as_ref().err()).map(|e| e.to_string()).unwrap_or_default();
        return Err(CliError::Failure(format!("every grid point failed; first error: {first}")));
    }
    let hull = hull_column(&points);
    let mut s = ctx.manifest(Some(seed)).csv_header();
    s.push_str("p,value,feasible,residual,restarts,seed,hull,coh_info\n");
    for ((row, ci), &p) in rows.iter().zip(&grid) {
        match row {
            Ok(pt) => {
                let h = hull.iter().find(|h| h.p == pt.p).map_or(f64::NAN, |h| h.value);
                s.push_str(&format!(
                    "{},{},{},{},{},{},{},{}\n",
                    fmt_num(pt.p),
                    fmt_num(pt.value),
                    pt.feasible,
                    fmt_num(pt.residual),
                    pt.restarts,
                    pt.seed,
                    fmt_num(h),
                    fmt_num(*ci)
                ));
            }
            Err(e) => {
                let _ = writeln!(stderr, "depol-capacity: p = {p} failed: {e}");
                s.push_str(&format!("{},NaN,false,NaN,{restarts},{seed},NaN,{}\n", fmt_num(p), fmt_num(*ci)));
            }
        }
    }
    Ok(s)
}

/// Hull of the feasible points; a single feasible point is its own hull.
fn hull_column(points: &[CurvePoint]) -> Vec<CurvePoint> {
    convex_hull_1d(points).unwrap_or_else(|_| points.iter().filter(|p| p.feasible).cloned().collect())
}

struct BenchRow {
    idx: String,
    block: String,
    e_mp: f64,
    e_wd: f64,
    log_neg: f64,
}

fn bench_row(ctx: &Context, idx: String, block: String, rho: &DensityMatrix, e_mp: f64) -> BenchRow {
    let e_wd_value = e_wd(rho, &ctx.solver).map(|(v, _)| v).unwrap_or(f64::NAN);
    let log_neg = log_negativity(rho).unwrap_or(f64::NAN);
    BenchRow { idx, block, e_mp, e_wd: e_wd_value, log_neg }
}

#[allow(clippy::too_many_arguments)]
fn benchmark_random(
    ctx: &Context,
    pool: &rayon::ThreadPool,
    d: usize,
    p: f64,
    n: usize,
    seed: u64,
    with_theta: bool,
    stderr: &mut dyn Write,
) -> Result<String, CliError> {
    if d != 3 {
        return Err(CliError::Usage(format!("--d must be 3, got {d}")));
    }
    check_unit("p", p)?;
    if n == 0 {
        return Err(CliError::Usage("--n must be at least 1".into()));
    }
    let blocks = enumerate_mc_blocks(d).map_err(failure)?;
    let mut rows: Vec<Result<BenchRow, Error>> = pool.install(|| {
        (0..n)
            .into_par_iter()
            .map(|i| {
                let mut rng = stream_rng(seed, i as u64);
                let b = rng.random_range(0..blocks.len());
                let alpha = random_mc_matrix(d, &mut rng)?;
                let rho = block_mixture_state(&blocks[b], &alpha, p)?;
                let e_mp = e_mp_block(&blocks[b], &alpha, p)?;
                if (i + 1) % 10 == 0 || i + 1 == n {
                    eprintln!("benchmark-random: {}/{n} states", i + 1);
                }
                Ok(bench_row(ctx, i.to_string(), (b + 1).to_string(), &rho, e_mp))
            })
            .collect()
    });
    if with_theta {
        let mut ps = vec![0.0, 0.5];
        if !ps.contains(&p) {
            ps.push(p);
        }
        let block = theta_block();
        for k in 1..=2 {
            for &q in &ps {
                rows.push((|| {
                    let alpha = theta_alpha(k)?;
                    let rho = block_mixture_state(&block, &alpha, q)?;
                    let e_mp = e_mp_block(&block, &alpha, q)?;
                    Ok(bench_row(ctx, format!("theta{k}"), format!("theta{k}:p={q}"), &rho, e_mp))
                })());
            }
        }
    }
    let mut s = ctx.manifest(Some(seed)).csv_header();
    s.push_str("idx,block_id,e_mp,e_wd,gap,log_neg\n");
    let mut ok = 0;
    for (i, row) in rows.iter().enumerate() {
        match row {
            Ok(r) => {
                ok += 1;
                s.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    r.idx,
                    r.block,
                    fmt_num(r.e_mp),
                    fmt_num(r.e_wd),
                    fmt_num(r.e_wd - r.e_mp),
                    fmt_num(r.log_neg)
                ));
            }
            Err(e) => {
                let _ = writeln!(stderr, "benchmark-random: row {i} failed: {e}");
                s.push_str(&format!("{i},NaN,NaN,NaN,NaN,NaN\n"));
            }
        }
    }
    if ok == 0 {
        return Err(CliError::Failure("every benchmark row failed".into()));
    }
    Ok(s)
}

/// Bound names accepted by `state-bound`.
pub const BOUND_NAMES: [&str; 9] = ["hashing", "log_neg", "e_wd", "dg", "adeg", "approx_deg", "e_da_2q", "transfer", "rank2"];

fn state_bound(ctx: &Context, input: &Path, list: &str) -> Result<Value, CliError> {
    let names: Vec<&str> = list.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
    if names.is_empty() {
        return Err(CliError::Usage("--bounds must name at least one bound".into()));
    }
    if let Some(bad) = names.iter().find(|n| !BOUND_NAMES.contains(n)) {
        return Err(CliError::Usage(format!("unknown bound {bad:?}; expected one of {}", BOUND_NAMES.join(", "))));
    }
    let rho = read_state(input).map_err(|e| CliError::Input(format!("{}: {e}", input.display())))?;
    if rho.dims().len() != 2 {
        return Err(CliError::Input(format!("{}: expected two subsystems, got dims {:?}", input.display(), rho.dims())));
    }
    let label = input.file_stem().map_or_else(|| "state".to_string(), |s| s.to_string_lossy().into_owned());
    let mut report = BoundReport::new(label, hashing_lower(&rho).map_err(failure)?);
    let mut extra = Map::new();
    let mut dg_cache: Option<f64> = None;
    for name in &names {
        match *name {
            "hashing" => {
                extra.insert("hashing".into(), json!(report.lower_hashing));
            }
            "log_neg" => {
                report.upper.insert("log_neg".into(), log_negativity(&rho).map_err(failure)?);
            }
            "e_wd" => {
                let (v, rep) = e_wd(&rho, &ctx.solver).map_err(failure)?;
                report.upper.insert("e_wd".into(), v);
                report.solver.insert("e_wd".into(), rep);
            }
            "dg" | "approx_deg" => {
                let value = match dg_cache {
                    Some(v) => v,
                    None => {
                        let r = dg(&rho, false, &ctx.solver).map_err(failure)?;
                        report.solver.insert("dg".into(), r.report);
                        dg_cache = Some(r.value);
                        r.value
                    }
                };
                report.upper.insert("dg".into(), value);
                if *name == "approx_deg" {
                    report.upper.insert("approx_deg".into(), approx_deg_upper(&rho, value).map_err(failure)?);
                }
            }
            "adeg" => {
                let r = adeg(&rho, &ctx.solver).map_err(failure)?;
                report.upper.insert("adeg".into(), r.value);
                report.solver.insert("adeg".into(), r.report);
            }
            "e_da_2q" => {
                let r = e_da_two_qubit(&rho, &EdaOptions::default(), &ctx.solver).map_err(classify)?;
                report.upper.insert("e_da_2q".into(), r.value);
                extra.insert("e_da_2q_certified".into(), json!(r.certified));
            }
            "transfer" => {
                let t = transfer_degradability_check(&rho).map_err(classify)?;
                extra.insert(
                    "transfer".into(),
                    json!({"verdict": t.verdict, "residual": t.residual, "min_choi_eigenvalue": t.min_choi_eigenvalue, "tp_residual": t.tp_residual}),
                );
            }
            "rank2" => {
                let c = classify_rank2(&rho, CLASS_TOL, &ctx.solver).map_err(classify)?;
                extra.insert("rank2".into(), serde_json::to_value(&c).expect("serializes"));
            }
            _ => unreachable!("validated above"),
        }
    }
    let mut v = finish_report(ctx, report)?;
    if !extra.is_empty() {
        v["diagnostics"] = Value::Object(extra);
    }
    Ok(v)
}

fn ssd_check(ctx: &Context, input: &Path) -> Result<Value, CliError> {
    let (dims, vectors) = read_vectors(input).map_err(|e| CliError::Input(format!("{}: {e}", input.display())))?;
    if dims.len() != 2 {
        return Err(CliError::Input(format!("expected bipartite vectors, got dims {dims:?}")));
    }
    let violation = ssd_violation(&vectors, dims[0], dims[1]).map_err(classify)?;
    let ssd = is_ssd(&vectors, dims[0], dims[1], SSD_TOL).map_err(classify)?;
    Ok(
        json!({"count": vectors.len(), "dims": dims, "ssd": ssd, "violation": violation, "tolerance": SSD_TOL, "manifest": ctx.manifest(None).to_json()}),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_is_inclusive() {
        let g = parse_grid("0:0.25:0.01").unwrap();
        assert_eq!(g.len(), 26);
        assert_eq!(g[25], 0.25);
        assert_eq!(parse_grid("0.1:0.1:0").unwrap(), vec![0.1]);
    }

    #[test]
    fn grid_rejects_garbage() {
        assert!(parse_grid("0:1").is_err());
        assert!(parse_grid("0.5:0.1:0.1").is_err());
        assert!(parse_grid("0:2:0.5").is_err());
        assert!(parse_grid("0:1:-1").is_err());
    }

    #[test]
    fn numbers_have_twelve_digits() {
        assert_eq!(fmt_num(1.0), "1.00000000000e0");
        assert_eq!(fmt_num(f64::NAN), "NaN");
    }

    #[test]
    fn usage_errors_exit_one() {
        let (mut o, mut e) = (Vec::new(), Vec::new());
        assert_eq!(run(["entdist", "mc-blocks", "--d", "7"], &mut o, &mut e), 1);
        assert_eq!(run(["entdist", "no-such-command"], &mut o, &mut e), 1);
    }
}
