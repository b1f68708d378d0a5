//! Command-line experiments: simulate, verify, audit, counterexample, report.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use sccurve::bounds::{
    book_length_bound, euclidean_length_bound, generic_cat0_audit, spider_jump_curve, tree_length_bound,
    unrectifiable_witness, BoundReport, WidthConfig,
};
use sccurve::flow::{
    discrete_gradient_curve, geodesic_interpolation, objective_by_name, ObjectiveFn, ResolventStatus, SolverConfig,
};
use sccurve::io::{curve_to_json, load_curve, parse_coords, parse_space, point_from_coords};
use sccurve::verify::{
    angle_sweep, ball_confinement_check, half_distance_check, is_self_contracted, stationarity_check, SamplingConfig,
    ViolationReport, Witness, VIOLATION_TOLERANCE,
};
use sccurve::{Curve, Space, SpaceKind};

pub const REPORT_SCHEMA_VERSION: u32 = 1;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] sccurve::Error),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

type CliResult<T> = std::result::Result<T, CliError>;

fn usage<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError::Usage(msg.into()))
}

#[derive(Parser, Debug)]
#[command(name = "sccurve", version, about = "Experiments with self-contracted curves")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Default)]
struct Common {
    /// Flat `key = value` file; flags override its entries.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a discrete gradient curve and write it with its value trace.
    Simulate {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        space: Option<String>,
        #[arg(long)]
        objective: Option<String>,
        /// Target point or ball center for distance-type objectives.
        #[arg(long, allow_hyphen_values = true)]
        target: Option<String>,
        /// Ball radius for `dist_ball`.
        #[arg(long)]
        radius: Option<f64>,
        /// Start point; random from the seed when absent.
        #[arg(long, allow_hyphen_values = true)]
        start: Option<String>,
        /// One step size, or a comma-separated schedule.
        #[arg(long)]
        tau: Option<String>,
        #[arg(long)]
        steps: Option<usize>,
    },
    /// Check properties of a curve file.
    Verify {
        curve: PathBuf,
        #[command(flatten)]
        common: Common,
        /// Comma-separated: self_contracted, stationarity, half_distance,
        /// angle, ball, all.
        #[arg(long)]
        check: Option<String>,
    },
    /// Compare a curve's length with a diameter or width bound.
    Audit {
        curve: PathBuf,
        #[command(flatten)]
        common: Common,
        /// euclidean, tree, book, generic or auto.
        #[arg(long)]
        bound: Option<String>,
        /// Neighborhood radius for the generic bound.
        #[arg(long)]
        sigma: Option<f64>,
    },
    /// Emit the spider and orthonormal jump curves for one `k`.
    Counterexample {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        k: Option<usize>,
    },
    /// Aggregate audit rows and emit growth series.
    Report {
        /// Glob patterns of report CSV files.
        patterns: Vec<String>,
        #[command(flatten)]
        common: Common,
    },
}

const CONFIG_KEYS: &[&str] = &[
    "space",
    "objective",
    "target",
    "radius",
    "start",
    "tau",
    "steps",
    "seed",
    "out",
    "tol",
    "check",
    "bound",
    "sigma",
    "k",
];

/// Settings from a config file, overridden by flags.
#[derive(Debug, Default)]
struct Settings {
    file: BTreeMap<String, String>,
}

impl Settings {
    fn load(path: Option<&Path>) -> CliResult<Settings> {
        let Some(path) = path else {
            return Ok(Settings::default());
        };
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.into(),
            source,
        })?;
        let mut file = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                return usage(format!("{}:{}: expected `key = value`", path.display(), i + 1));
            };
            let k = k.trim();
            if !CONFIG_KEYS.contains(&k) {
                return usage(format!("{}:{}: unknown key `{k}`", path.display(), i + 1));
            }
            file.insert(k.to_string(), v.trim().to_string());
        }
        Ok(Settings { file })
    }

    fn get<T: FromStr>(&self, flag: Option<T>, key: &str) -> CliResult<Option<T>> {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.file.get(key) {
            None => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|_| CliError::Usage(format!("config: bad value `{v}` for `{key}`"))),
        }
    }

    fn require<T: FromStr>(&self, flag: Option<T>, key: &str) -> CliResult<T> {
        self.get(flag, key)?
            .ok_or_else(|| CliError::Usage(format!("missing --{key}")))
    }
}

struct Ctx {
    seed: u64,
    out: PathBuf,
    tol: f64,
}

fn context(common: &Common, s: &Settings) -> CliResult<Ctx> {
    let tol = s.get(common.tol, "tol")?.unwrap_or(VIOLATION_TOLERANCE);
    if tol.is_nan() || tol < 0.0 {
        return usage("--tol must be non-negative");
    }
    Ok(Ctx {
        seed: s.get(common.seed, "seed")?.unwrap_or(0),
        out: s
            .get(common.out.clone(), "out")?
            .unwrap_or_else(|| PathBuf::from("sccurve-out")),
        tol,
    })
}

/// Runs the CLI on `args` (including the program name) and returns the exit
/// code. Messages go to stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}

fn dispatch(cmd: Command) -> CliResult<i32> {
    match cmd {
        Command::Simulate {
            common,
            space,
            objective,
            target,
            radius,
            start,
            tau,
            steps,
        } => {
            let s = Settings::load(common.config.as_deref())?;
            let ctx = context(&common, &s)?;
            let cfg = SimulateConfig {
                space: s.require(space, "space")?,
                objective: s.require(objective, "objective")?,
                target: s.get(target, "target")?,
                radius: s.get(radius, "radius")?,
                start: s.get(start, "start")?,
                tau: s.require(tau, "tau")?,
                steps: s.get(steps, "steps")?.unwrap_or(20),
                seed: ctx.seed,
            };
            simulate(&cfg, &ctx.out)
        }
        Command::Verify { curve, common, check } => {
            let s = Settings::load(common.config.as_deref())?;
            let ctx = context(&common, &s)?;
            let checks = s.get(check, "check")?.unwrap_or_else(|| "self_contracted".into());
            verify(&curve, &checks, &ctx)
        }
        Command::Audit {
            curve,
            common,
            bound,
            sigma,
        } => {
            let s = Settings::load(common.config.as_deref())?;
            let ctx = context(&common, &s)?;
            let bound = s.get(bound, "bound")?.unwrap_or_else(|| "auto".into());
            let sigma = s.get(sigma, "sigma")?.unwrap_or(1.0);
            audit(&curve, &bound, sigma, &ctx)
        }
        Command::Counterexample { common, k } => {
            let s = Settings::load(common.config.as_deref())?;
            let ctx = context(&common, &s)?;
            counterexample(s.require(k, "k")?, &ctx)
        }
        Command::Report { patterns, common } => {
            let s = Settings::load(common.config.as_deref())?;
            let ctx = context(&common, &s)?;
            report(&patterns, &ctx)
        }
    }
}

// ---------------------------------------------------------------- output

fn write_atomic(path: &Path, contents: &str) -> CliResult<()> {
    let io = |source| CliError::Io {
        path: path.into(),
        source,
    };
    let dir = path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    std::fs::create_dir_all(dir).map_err(io)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(contents.as_bytes()).map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report serializes");
    s.push('\n');
    s
}

#[derive(Serialize)]
struct Versioned<'a, T: Serialize> {
    schema_version: u32,
    #[serde(flatten)]
    body: &'a T,
}

fn versioned<T: Serialize>(body: &T) -> String {
    to_json(&Versioned {
        schema_version: REPORT_SCHEMA_VERSION,
        body,
    })
}

const REPORT_CSV_HEADER_PREFIX: &str = "schema_version,";

fn report_csv(rows: &[BoundReport]) -> String {
    let mut out = format!("{REPORT_CSV_HEADER_PREFIX}{}\n", BoundReport::CSV_HEADER);
    for r in rows {
        let _ = writeln!(out, "{REPORT_SCHEMA_VERSION},{}", r.csv_row());
    }
    out
}

// -------------------------------------------------------------- simulate

/// Everything that determines a simulation.
#[derive(Debug, Clone, Serialize)]
pub struct SimulateConfig {
    pub space: String,
    pub objective: String,
    pub target: Option<String>,
    pub radius: Option<f64>,
    pub start: Option<String>,
    pub tau: String,
    pub steps: usize,
    pub seed: u64,
}

fn build_objective(space: &Space, cfg: &SimulateConfig) -> CliResult<ObjectiveFn> {
    let target = cfg
        .target
        .as_deref()
        .map(|t| point_from_coords(space, &parse_coords(t)?))
        .transpose()?;
    let f = match (cfg.objective.as_str(), target) {
        ("half_sq_dist", Some(p)) => ObjectiveFn::half_squared_distance(p),
        ("dist", Some(p)) => ObjectiveFn::distance(p),
        ("dist_ball", Some(p)) => ObjectiveFn::distance_to_ball(p, cfg.radius.unwrap_or(0.5)),
        (name, Some(_)) => return usage(format!("objective `{name}` takes no --target")),
        ("dist_ball", None) if cfg.radius.is_some() => {
            let base = objective_by_name(space, "dist_ball")?;
            let center = base
                .special_points(space)
                .into_iter()
                .next()
                .expect("ball has a center");
            ObjectiveFn::distance_to_ball(center, cfg.radius.expect("checked"))
        }
        (name, None) => objective_by_name(space, name).map_err(|e| CliError::Usage(e.to_string()))?,
    };
    Ok(f)
}

fn schedule(tau: &str, steps: usize) -> CliResult<Vec<f64>> {
    let vals = parse_coords(tau).map_err(|_| CliError::Usage(format!("bad --tau `{tau}`")))?;
    match vals.len() {
        1 => Ok(vec![vals[0]; steps]),
        _ => Ok(vals),
    }
}

#[derive(Serialize)]
struct RunLog<'a> {
    config: &'a SimulateConfig,
    objective: &'a str,
    start: Vec<f64>,
    n_points: usize,
    length: f64,
    tie_steps: Vec<usize>,
    stop: Option<&'a sccurve::flow::RunStop>,
    solver: &'a SolverConfig,
}

/// Writes `curve.json` (interpolated), `curve_discrete.json`, `trace.csv`
/// and `run.json` into `out`. Exit 1 when a resolvent step fails.
pub fn simulate(cfg: &SimulateConfig, out: &Path) -> CliResult<i32> {
    let space = parse_space(&cfg.space).map_err(|e| CliError::Usage(e.to_string()))?;
    let f = build_objective(&space, cfg)?;
    let taus = schedule(&cfg.tau, cfg.steps)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let x0 = match &cfg.start {
        Some(s) => point_from_coords(&space, &parse_coords(s)?)?,
        None => space.random_point(&mut rng, 3.0),
    };
    let solver = SolverConfig {
        seed: cfg.seed,
        ..SolverConfig::default()
    };
    let run = discrete_gradient_curve(&f, &space, &x0, &taus, &solver)?;
    let interp = geodesic_interpolation(&space, &run)?;
    let discrete = run.discrete_curve()?;

    let mut trace = String::from("k,t,tau,value,status\n");
    for (k, (t, v)) in run.times.iter().zip(&run.values).enumerate() {
        let (tau, status) = if k == 0 {
            (String::new(), "start".to_string())
        } else {
            (
                run.step_sizes[k - 1].to_string(),
                status_name(run.statuses[k - 1]).to_string(),
            )
        };
        let _ = writeln!(trace, "{k},{t},{tau},{v},{status}");
    }
    let log = RunLog {
        config: cfg,
        objective: &f.name,
        start: x0.coords(),
        n_points: run.len(),
        length: interp.length(),
        tie_steps: run.tie_steps(),
        stop: run.stop.as_ref(),
        solver: &solver,
    };
    write_atomic(&out.join("curve.json"), &(curve_to_json(&interp) + "\n"))?;
    write_atomic(&out.join("curve_discrete.json"), &(curve_to_json(&discrete) + "\n"))?;
    write_atomic(&out.join("trace.csv"), &trace)?;
    write_atomic(&out.join("run.json"), &versioned(&log))?;
    if let Some(stop) = &run.stop {
        eprintln!("step {} stopped: {}", stop.step, status_name(stop.status));
        return Ok(EXIT_VIOLATION);
    }
    Ok(EXIT_PASS)
}

fn status_name(s: ResolventStatus) -> &'static str {
    match s {
        ResolventStatus::Unique => "unique",
        ResolventStatus::MultipleTies => "multiple_ties",
        ResolventStatus::Empty => "empty",
        ResolventStatus::Unbounded => "unbounded",
    }
}

// ---------------------------------------------------------------- verify

#[derive(Serialize)]
struct VerifyReport<'a> {
    curve: &'a str,
    space: String,
    seed: u64,
    tolerance: f64,
    checks: Vec<ViolationReport>,
    pass: bool,
}

const CHECKS: &[&str] = &["self_contracted", "stationarity", "half_distance", "angle", "ball"];

/// Random balls drawn by the `ball` check.
pub const BALL_PROBES: usize = 100;

fn verify(path: &Path, checks: &str, ctx: &Ctx) -> CliResult<i32> {
    let mut names: Vec<&str> = Vec::new();
    for c in checks.split(',').map(str::trim) {
        match c {
            "all" => names.extend(CHECKS),
            c if CHECKS.contains(&c) => names.push(c),
            c => {
                return usage(format!(
                    "unknown check `{c}`; expected one of {} or all",
                    CHECKS.join(", ")
                ))
            }
        }
    }
    names.dedup();
    let curve = load_curve(path)?;
    let space = &curve.space;
    let sampling = SamplingConfig {
        tolerance: ctx.tol,
        seed: ctx.seed,
        ..SamplingConfig::default()
    };
    let mut reports = Vec::new();
    for name in names {
        reports.push(match name {
            "self_contracted" => is_self_contracted(space, &curve, &sampling),
            "stationarity" => stationarity_check(space, &curve),
            "half_distance" => half_distance_check(space, &curve, ctx.tol),
            "angle" => angle_report(&curve, ctx),
            _ => ball_report(&curve, ctx)?,
        });
    }
    let pass = reports.iter().all(|r| r.pass || r.informational);
    let rep = VerifyReport {
        curve: &path.file_name().map(|n| n.to_string_lossy()).unwrap_or_default(),
        space: space.name(),
        seed: ctx.seed,
        tolerance: ctx.tol,
        checks: reports,
        pass,
    };
    write_atomic(&ctx.out.join("verify.json"), &versioned(&rep))?;
    Ok(if pass { EXIT_PASS } else { EXIT_VIOLATION })
}

/// Angles at earlier points between later points stay below `pi/2`.
pub const ANGLE_SLACK: f64 = 1e-6;

fn angle_report(curve: &Curve, ctx: &Ctx) -> ViolationReport {
    let sweep = angle_sweep(&curve.space, curve, 1000, ctx.seed);
    let v = sweep.max_angle - std::f64::consts::FRAC_PI_2;
    ViolationReport {
        check: "angle_estimate",
        max_violation: v,
        tolerance: ANGLE_SLACK,
        n_checked: sweep.n_checked as u64,
        pass: v < ANGLE_SLACK,
        informational: false,
        witness: sweep.witness.map(|times| Witness {
            points: times.iter().map(|&t| curve.point_at(t).coords()).collect(),
            times: times.to_vec(),
        }),
    }
}

fn ball_report(curve: &Curve, ctx: &Ctx) -> CliResult<ViolationReport> {
    let space = &curve.space;
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
    let first = &curve.samples()[0].p;
    let scale = curve.diameter().max(1.0);
    let mut worst: Option<ViolationReport> = None;
    let mut n = 0;
    for _ in 0..BALL_PROBES {
        let r = scale * rng.random_range(0.05..1.0);
        let x = space.random_point_near(&mut rng, first, r);
        let rep = ball_confinement_check(space, curve, &x, r, 3)?;
        n += rep.n_checked;
        if worst.as_ref().is_none_or(|w| rep.max_violation > w.max_violation) {
            worst = Some(rep);
        }
    }
    let mut w = worst.expect("at least one probe");
    w.n_checked = n;
    Ok(w)
}

// ----------------------------------------------------------------- audit

fn audit(path: &Path, bound: &str, sigma: f64, ctx: &Ctx) -> CliResult<i32> {
    let curve = load_curve(path)?;
    let kind = match bound {
        "auto" => match &curve.space.kind {
            SpaceKind::Euclidean { .. } => "euclidean",
            SpaceKind::Tree { .. } | SpaceKind::Spider(_) => "tree",
            SpaceKind::Book(_) => "book",
            _ => "generic",
        },
        b => b,
    };
    let width = WidthConfig {
        seed: ctx.seed,
        ..WidthConfig::default()
    };
    let rep = match kind {
        "euclidean" => euclidean_length_bound(&curve, 4, &width),
        "tree" => tree_length_bound(&curve),
        "book" => book_length_bound(&curve),
        "generic" => generic_cat0_audit(&curve, sigma),
        b => {
            return usage(format!(
                "unknown bound `{b}`; expected euclidean, tree, book, generic or auto"
            ))
        }
    }
    .map_err(|e| CliError::Usage(format!("{kind} bound on {}: {e}", curve.space.name())))?;
    write_atomic(&ctx.out.join("audit.json"), &versioned(&rep))?;
    write_atomic(&ctx.out.join("audit.csv"), &report_csv(std::slice::from_ref(&rep)))?;
    Ok(if rep.pass { EXIT_PASS } else { EXIT_VIOLATION })
}

// -------------------------------------------------------- counterexample

fn counterexample(k: usize, ctx: &Ctx) -> CliResult<i32> {
    if k < 2 {
        return usage("--k must be at least 2");
    }
    let spider = spider_jump_curve(k)?;
    let mut spider_rep = tree_length_bound(&spider)?;
    spider_rep.audit = "spider_jump".into();
    spider_rep.constants.insert("k".into(), k as f64);
    let (ortho, mut ortho_rep) = unrectifiable_witness(k)?;
    ortho_rep.constants.insert("k".into(), k as f64);
    write_atomic(
        &ctx.out.join(format!("spider_k{k}.json")),
        &(curve_to_json(&spider) + "\n"),
    )?;
    write_atomic(
        &ctx.out.join(format!("orthonormal_k{k}.json")),
        &(curve_to_json(&ortho) + "\n"),
    )?;
    let rows = [spider_rep, ortho_rep];
    write_atomic(&ctx.out.join(format!("counterexample_k{k}.csv")), &report_csv(&rows))?;
    let self_contracted = [&spider, &ortho]
        .iter()
        .all(|c| is_self_contracted(&c.space, c, &SamplingConfig::default()).pass);
    Ok(if self_contracted && rows.iter().all(|r| r.pass) {
        EXIT_PASS
    } else {
        EXIT_VIOLATION
    })
}

// ---------------------------------------------------------------- report

/// One parsed report row.
#[derive(Debug, Clone)]
struct Row {
    audit: String,
    space: String,
    length_over_diam: f64,
    ratio: Option<f64>,
    pass: bool,
    k: Option<f64>,
}

fn parse_rows(path: &Path) -> CliResult<Vec<Row>> {
    let bad = |msg: String| CliError::Usage(format!("{}: {msg}", path.display()));
    let mut rdr = csv::Reader::from_path(path).map_err(|e| bad(e.to_string()))?;
    let headers = rdr.headers().map_err(|e| bad(e.to_string()))?.clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| bad(format!("missing column `{name}`")))
    };
    let (c_ver, c_audit, c_space, c_growth, c_ratio, c_pass, c_const) = (
        col("schema_version")?,
        col("audit")?,
        col("space")?,
        col("length_over_diam")?,
        col("ratio")?,
        col("pass")?,
        col("constants")?,
    );
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| bad(e.to_string()))?;
        if rec[c_ver].parse::<u32>().ok() != Some(REPORT_SCHEMA_VERSION) {
            return Err(bad(format!("unsupported schema_version `{}`", &rec[c_ver])));
        }
        let num = |s: &str| s.parse::<f64>().map_err(|_| bad(format!("bad number `{s}`")));
        let k = rec[c_const]
            .split(';')
            .filter_map(|kv| kv.split_once('='))
            .find(|(key, _)| *key == "k")
            .map(|(_, v)| num(v))
            .transpose()?;
        rows.push(Row {
            audit: rec[c_audit].to_string(),
            space: rec[c_space].to_string(),
            length_over_diam: num(&rec[c_growth])?,
            ratio: if rec[c_ratio].is_empty() {
                None
            } else {
                Some(num(&rec[c_ratio])?)
            },
            pass: rec[c_pass]
                .parse()
                .map_err(|_| bad(format!("bad pass flag `{}`", &rec[c_pass])))?,
            k,
        });
    }
    Ok(rows)
}

#[derive(Serialize)]
struct Series {
    family: String,
    points: Vec<(f64, f64)>,
    /// Least-squares slope of `length / diam` against `k`.
    slope: Option<f64>,
}

fn slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

fn report(patterns: &[String], ctx: &Ctx) -> CliResult<i32> {
    let mut files: Vec<PathBuf> = Vec::new();
    for pat in patterns {
        let paths = glob::glob(pat).map_err(|e| CliError::Usage(format!("bad pattern `{pat}`: {e}")))?;
        for p in paths {
            files.push(p.map_err(|e| CliError::Usage(e.to_string()))?);
        }
    }
    files.sort();
    files.dedup();
    let mut rows = Vec::new();
    for f in &files {
        rows.extend(parse_rows(f)?);
    }
    if rows.is_empty() {
        return usage("no report rows matched");
    }

    let mut groups: BTreeMap<(String, String), Vec<&Row>> = BTreeMap::new();
    for r in &rows {
        groups.entry((r.space.clone(), r.audit.clone())).or_default().push(r);
    }
    let mut agg = String::from("schema_version,space,audit,n_rows,n_pass,max_ratio,pass\n");
    let mut all_pass = true;
    for ((space, audit), rs) in &groups {
        let n_pass = rs.iter().filter(|r| r.pass).count();
        let max_ratio = rs.iter().filter_map(|r| r.ratio).fold(f64::NEG_INFINITY, f64::max);
        let pass = n_pass == rs.len();
        all_pass &= pass;
        let max_ratio = if max_ratio.is_finite() {
            max_ratio.to_string()
        } else {
            String::new()
        };
        let space = if space.contains(',') {
            format!("\"{space}\"")
        } else {
            space.clone()
        };
        let _ = writeln!(
            agg,
            "{REPORT_SCHEMA_VERSION},{space},{audit},{},{n_pass},{max_ratio},{pass}",
            rs.len()
        );
    }

    let mut series: BTreeMap<String, Vec<(f64, f64)>> = BTreeMap::new();
    for r in &rows {
        if let Some(k) = r.k {
            series.entry(r.audit.clone()).or_default().push((k, r.length_over_diam));
        }
    }
    let mut growth = String::from("schema_version,family,k,length_over_diam\n");
    let mut summary = Vec::new();
    for (family, mut pts) in series {
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
        pts.dedup_by(|a, b| a.0 == b.0);
        for (k, g) in &pts {
            let _ = writeln!(growth, "{REPORT_SCHEMA_VERSION},{family},{k},{g}");
        }
        summary.push(Series {
            slope: slope(&pts),
            family,
            points: pts,
        });
    }

    #[derive(Serialize)]
    struct Summary<'a> {
        n_files: usize,
        n_rows: usize,
        pass: bool,
        series: &'a [Series],
    }
    write_atomic(&ctx.out.join("aggregate.csv"), &agg)?;
    write_atomic(&ctx.out.join("growth.csv"), &growth)?;
    write_atomic(
        &ctx.out.join("report.json"),
        &versioned(&Summary {
            n_files: files.len(),
            n_rows: rows.len(),
            pass: all_pass,
            series: &summary,
        }),
    )?;
    Ok(if all_pass { EXIT_PASS } else { EXIT_VIOLATION })
}
