//! Experiment harness behind the `qwalk` binary.
//!
//! Every run writes plain CSV files into an output directory, each starting
//! with a `# manifest_sha256=...` comment and a header row, next to a
//! `key=value` manifest describing the parameters. Outputs depend only on the
//! parameters, so re-running a manifest reproduces its CSVs byte for byte.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use qwalk_core::classical::classical_mixing_baseline;
use qwalk_core::fit::FitResult;
use qwalk_core::limiting::{average_distribution, dominant_peaks, limiting_distribution};
use qwalk_core::mixing::{distance_trace, standard_setup, scaling_sweep, DistanceTrace, WalkKind};
use qwalk_core::search::{run_search, search_snapshot, stationary_reference_marked};
use qwalk_core::spectral::EigenLabel;
use qwalk_core::{
    build_eigensystem, make_global_uniform, make_localized_uniform_coin, Distribution, LatticeGeometry,
    MarkedCoinSpec, WalkError, WalkOperator, Walker,
};
use sha2::{Digest, Sha256};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "QWALK_OUT_DIR";

/// Exit status for invalid parameters or failed numerics.
pub const EXIT_INVALID: i32 = 3;
/// Exit status for file system failures.
pub const EXIT_IO: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "qwalk", version, about = "Coined quantum walks on two-dimensional tori")]
pub struct Cli {
    /// Directory receiving CSV files and manifests
    #[arg(long, global = true, env = OUT_DIR_ENV, default_value = "qwalk-out")]
    pub out_dir: PathBuf,
    /// Cap on worker threads for sweeps (default: all cores)
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evolve a state and write the final position distribution
    Evolve(EvolveArgs),
    /// Eigenvalues of every Fourier block and the spectral gap
    Spectrum(SideArgs),
    /// Exact limiting distribution (odd sides) or P̄(T) (even sides)
    Limiting(LimitingArgs),
    /// Distance trace and mixing times for one lattice
    Mixing(MixingArgs),
    /// Marked-vertex search run
    Search(SearchArgs),
    /// Mixing times across lattice sizes with least-squares fits
    Scaling(ScalingArgs),
    /// Classical random walk mixing baseline
    Classical(ClassicalArgs),
    /// Regenerate the data behind one of the four figures
    Reproduce(ReproduceArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InitKind {
    /// Uniform coin on a single vertex
    Localized,
    /// Uniform over coin and position
    Uniform,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WalkChoice {
    Grover,
    Marked,
}

impl From<WalkChoice> for WalkKind {
    fn from(w: WalkChoice) -> Self {
        match w {
            WalkChoice::Grover => WalkKind::Grover,
            WalkChoice::Marked => WalkKind::Marked,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Figure {
    Fig1,
    Fig2,
    Fig3,
    Fig4,
}

#[derive(Debug, Args)]
pub struct SideArgs {
    #[arg(long)]
    pub side: usize,
}

#[derive(Debug, Args)]
pub struct EvolveArgs {
    #[arg(long)]
    pub side: usize,
    #[arg(long)]
    pub steps: usize,
    #[arg(long, value_enum, default_value = "localized")]
    pub init: InitKind,
    #[arg(long, default_value_t = 0)]
    pub x0: usize,
    #[arg(long, default_value_t = 0)]
    pub y0: usize,
    /// Mark a vertex (needs --marked-y too)
    #[arg(long, requires = "marked_y")]
    pub marked_x: Option<usize>,
    #[arg(long, requires = "marked_x")]
    pub marked_y: Option<usize>,
}

#[derive(Debug, Args)]
pub struct LimitingArgs {
    #[arg(long)]
    pub side: usize,
    #[arg(long, default_value_t = 0)]
    pub x0: usize,
    #[arg(long, default_value_t = 0)]
    pub y0: usize,
    /// Averaging horizon used on even sides
    #[arg(long, default_value_t = 10_000)]
    pub average_steps: usize,
}

#[derive(Debug, Args)]
pub struct MixingArgs {
    #[arg(long)]
    pub side: usize,
    #[arg(long, value_delimiter = ',', default_value = "0.1")]
    pub epsilon: Vec<f64>,
    /// Steps to simulate (default: max(10^4, 50 sqrt(N ln N)))
    #[arg(long)]
    pub horizon: Option<usize>,
    #[arg(long, value_enum, default_value = "grover")]
    pub walk: WalkChoice,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    #[arg(long)]
    pub side: usize,
    #[arg(long, default_value_t = 0)]
    pub marked_x: usize,
    #[arg(long, default_value_t = 0)]
    pub marked_y: usize,
    #[arg(long, default_value_t = 1000)]
    pub t_max: usize,
    /// Also write the full distribution at this step
    #[arg(long)]
    pub dump_snapshot_at: Option<usize>,
}

#[derive(Debug, Args)]
pub struct ScalingArgs {
    #[arg(long, value_delimiter = ',', default_value = "21,31,41,51,61,71,81,91,101")]
    pub sides: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "0.1,0.2,0.3,0.4,0.5")]
    pub epsilons: Vec<f64>,
    #[arg(long)]
    pub horizon: Option<usize>,
    #[arg(long, value_enum, default_value = "grover")]
    pub walk: WalkChoice,
}

#[derive(Debug, Args)]
pub struct ClassicalArgs {
    #[arg(long, value_delimiter = ',', default_value = "5,9,13,17,21,25,29,33,37,41")]
    pub sides: Vec<usize>,
    #[arg(long, default_value_t = 0.1)]
    pub epsilon: f64,
}

#[derive(Debug, Args)]
pub struct ReproduceArgs {
    #[arg(value_enum)]
    pub figure: Figure,
    #[arg(long, default_value_t = 41)]
    pub side: usize,
}

/// Parameters of a run as ordered `key=value` pairs.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Manifest {
    entries: Vec<(String, String)>,
}

impl Manifest {
    pub fn new(experiment: &str) -> Self {
        let mut m = Self::default();
        m.set("experiment", experiment);
        m.set("toolkit_version", VERSION);
        m
    }

    pub fn set(&mut self, key: &str, value: impl ToString) -> &mut Self {
        let value = value.to_string();
        match self.entries.iter_mut().find(|(k, _)| k == key) {
            Some(e) => e.1 = value,
            None => self.entries.push((key.to_string(), value)),
        }
        self
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn to_text(&self) -> String {
        self.entries.iter().fold(String::new(), |mut s, (k, v)| {
            let _ = writeln!(s, "{k}={v}");
            s
        })
    }

    pub fn sha256(&self) -> String {
        hex::encode(Sha256::digest(self.to_text().as_bytes()))
    }
}

/// One finished experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentRecord {
    pub id: String,
    pub kind: &'static str,
    pub manifest: Manifest,
    /// Measured outputs, also as `key=value`.
    pub outputs: Vec<(String, String)>,
    pub files: Vec<PathBuf>,
    pub wall_clock_seconds: f64,
}

impl ExperimentRecord {
    pub fn summary(&self) -> String {
        let outs: Vec<String> = self.outputs.iter().map(|(k, v)| format!("{k}={v}")).collect();
        format!("[{}] {} ({:.2}s)", self.id, outs.join(" "), self.wall_clock_seconds)
    }
}

/// Accumulates the files and outputs of one run.
struct Run {
    id: String,
    kind: &'static str,
    manifest: Manifest,
    dir: PathBuf,
    outputs: Vec<(String, String)>,
    files: Vec<PathBuf>,
    started: Instant,
}

impl Run {
    fn start(out_dir: &Path, id: impl Into<String>, kind: &'static str, manifest: Manifest) -> anyhow::Result<Self> {
        fs::create_dir_all(out_dir)
            .map_err(|e| IoFailure(format!("cannot create output directory {}: {e}", out_dir.display())))?;
        Ok(Self {
            id: id.into(),
            kind,
            manifest,
            dir: out_dir.to_path_buf(),
            outputs: Vec::new(),
            files: Vec::new(),
            started: Instant::now(),
        })
    }

    /// Writes `header` and `body` behind the manifest hash line.
    fn csv(&mut self, name: &str, header: &str, body: &str) -> anyhow::Result<()> {
        let path = self.dir.join(format!("{}_{name}.csv", self.id));
        let text = format!("# manifest_sha256={}\n{header}\n{body}", self.manifest.sha256());
        fs::write(&path, text).map_err(|e| IoFailure(format!("cannot write {}: {e}", path.display())))?;
        self.files.push(path);
        Ok(())
    }

    fn distribution(&mut self, name: &str, dist: &Distribution) -> anyhow::Result<()> {
        let csv = dist.to_csv();
        let (header, body) = csv.split_once('\n').expect("distribution CSV has a header");
        self.csv(name, header, body)
    }

    fn output(&mut self, key: &str, value: impl ToString) {
        self.outputs.push((key.to_string(), value.to_string()));
    }

    fn finish(mut self) -> anyhow::Result<ExperimentRecord> {
        let path = self.dir.join(format!("{}.manifest", self.id));
        let mut text = self.manifest.to_text();
        for (k, v) in &self.outputs {
            let _ = writeln!(text, "out.{k}={v}");
        }
        fs::write(&path, text).map_err(|e| IoFailure(format!("cannot write {}: {e}", path.display())))?;
        self.files.push(path);
        Ok(ExperimentRecord {
            id: self.id,
            kind: self.kind,
            manifest: self.manifest,
            outputs: self.outputs,
            files: self.files,
            wall_clock_seconds: self.started.elapsed().as_secs_f64(),
        })
    }
}

/// File system failure, reported with its own exit status.
#[derive(Debug)]
pub struct IoFailure(pub String);

impl std::fmt::Display for IoFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for IoFailure {}

/// Maps an error to the process exit status.
pub fn exit_code(err: &anyhow::Error) -> i32 {
    if err.downcast_ref::<IoFailure>().is_some() {
        EXIT_IO
    } else {
        EXIT_INVALID
    }
}

fn float(v: f64) -> String {
    format!("{v:.16e}")
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map_or_else(|| "NA".to_string(), |x| x.to_string())
}

fn geometry(side: usize) -> anyhow::Result<LatticeGeometry> {
    Ok(LatticeGeometry::new(side)?)
}

fn check_epsilon(eps: &[f64]) -> anyhow::Result<()> {
    if eps.is_empty() {
        bail!(WalkError::Domain("at least one epsilon is required".into()));
    }
    if let Some(e) = eps.iter().find(|e| !(**e > 0.0)) {
        bail!(WalkError::Domain(format!("epsilon must be positive, got {e}")));
    }
    Ok(())
}

fn trace_csv(trace: &DistanceTrace) -> String {
    let mut s = String::with_capacity(trace.points.len() * 80);
    for p in &trace.points {
        let _ = writeln!(s, "{},{},{},{}", p.t, float(p.tv_avg), float(p.tv_inst), float(p.tv_avg_uniform));
    }
    s
}

const TRACE_HEADER: &str = "t,tv_avg_to_pi,tv_inst_to_pi,tv_avg_to_uniform";
const TIMES_HEADER: &str = "N,epsilon,M_eps,I_eps,reached";
const FIT_HEADER: &str = "model,parameter,slope,intercept,r_squared,max_residual,points";

fn fit_row(s: &mut String, fit: &FitResult, parameter: impl std::fmt::Display) {
    let _ = writeln!(
        s,
        "{},{parameter},{},{},{},{},{}",
        fit.model.label(),
        float(fit.slope),
        float(fit.intercept),
        float(fit.r_squared),
        float(fit.max_residual),
        fit.points
    );
}

/// Runs one parsed command line.
pub fn run(cli: &Cli) -> anyhow::Result<Vec<ExperimentRecord>> {
    if let Some(n) = cli.threads {
        if n == 0 {
            bail!(WalkError::Domain("--threads must be at least 1".into()));
        }
        // A second call in the same process keeps the first pool.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let out = cli.out_dir.as_path();
    let record = match &cli.command {
        Command::Evolve(a) => cmd_evolve(out, a)?,
        Command::Spectrum(a) => cmd_spectrum(out, a)?,
        Command::Limiting(a) => cmd_limiting(out, a)?,
        Command::Mixing(a) => cmd_mixing(out, a)?,
        Command::Search(a) => cmd_search(out, a)?,
        Command::Scaling(a) => cmd_scaling(out, a)?,
        Command::Classical(a) => cmd_classical(out, a)?,
        Command::Reproduce(a) => cmd_reproduce(out, a)?,
    };
    Ok(vec![record])
}

fn cmd_evolve(out: &Path, a: &EvolveArgs) -> anyhow::Result<ExperimentRecord> {
    let g = geometry(a.side)?;
    let initial = match a.init {
        InitKind::Localized => make_localized_uniform_coin(g, a.x0, a.y0)?,
        InitKind::Uniform => make_global_uniform(g),
    };
    let op = match (a.marked_x, a.marked_y) {
        (Some(x), Some(y)) => WalkOperator::from(MarkedCoinSpec::grover(g, x, y)?),
        _ => WalkOperator::grover(),
    };
    let mut m = Manifest::new("evolve");
    m.set("side", a.side).set("steps", a.steps).set("coin", "grover");
    m.set("init", format!("{:?}", a.init).to_lowercase()).set("x0", a.x0).set("y0", a.y0);
    m.set("marked", opt(a.marked_x.zip(a.marked_y).map(|(x, y)| format!("{x}:{y}"))));
    let mut run = Run::start(out, format!("evolve_side{}_t{}", a.side, a.steps), "evolve", m)?;
    let mut walker = Walker::new(initial, &op)?;
    for _ in 0..a.steps {
        walker.advance();
    }
    let dist = walker.state().measure();
    run.distribution("distribution", &dist)?;
    let (px, py) = dist.argmax();
    run.output("norm_error", float((walker.state().norm_sqr() - 1.0).abs()));
    run.output("argmax", format!("{px}:{py}"));
    run.output("p_max", float(dist.get(px, py)));
    run.finish()
}

fn label_name(l: EigenLabel) -> &'static str {
    match l {
        EigenLabel::PlusOne => "+1",
        EigenLabel::MinusOne => "-1",
        EigenLabel::PlusTheta => "+theta",
        EigenLabel::MinusTheta => "-theta",
    }
}

fn cmd_spectrum(out: &Path, a: &SideArgs) -> anyhow::Result<ExperimentRecord> {
    let g = geometry(a.side)?;
    let mut m = Manifest::new("spectrum");
    m.set("side", a.side).set("coin", "grover");
    let mut run = Run::start(out, format!("spectrum_side{}", a.side), "spectrum", m)?;
    let system = build_eigensystem(g)?;
    let mut body = String::new();
    for (r, pair) in system.eigenvalues() {
        let mode = system.mode_of(r);
        let theta = system.block(mode.kx, mode.ky).theta;
        let _ = writeln!(
            body,
            "{},{},{},{},{},{}",
            mode.kx,
            mode.ky,
            label_name(pair.label),
            float(pair.value.re),
            float(pair.value.im),
            theta.map_or_else(|| "NA".to_string(), float)
        );
    }
    run.csv("eigenvalues", "kx,ky,label,re_lambda,im_lambda,theta", &body)?;
    let (a_ref, b_ref) = system.gap_pair();
    let (ma, mb) = (system.mode_of(a_ref), system.mode_of(b_ref));
    run.output("gap", float(system.gap()));
    run.output("gap_sqrt_n", float(system.gap() * (g.vertices() as f64).sqrt()));
    run.output("gap_modes", format!("{}:{}/{}:{}", ma.kx, ma.ky, mb.kx, mb.ky));
    run.output("classes", system.class_values().len());
    run.finish()
}

fn cmd_limiting(out: &Path, a: &LimitingArgs) -> anyhow::Result<ExperimentRecord> {
    let g = geometry(a.side)?;
    let initial = make_localized_uniform_coin(g, a.x0, a.y0)?;
    let mut m = Manifest::new("limiting");
    m.set("side", a.side).set("coin", "grover").set("x0", a.x0).set("y0", a.y0);
    let method = if g.is_odd() { "exact" } else { "average" };
    m.set("method", method);
    if !g.is_odd() {
        m.set("average_steps", a.average_steps);
    }
    let mut run = Run::start(out, format!("limiting_side{}", a.side), "limiting", m)?;
    let dist = if g.is_odd() {
        limiting_distribution(&build_eigensystem(g)?, &initial)?
    } else {
        average_distribution(&initial, &WalkOperator::grover(), a.average_steps)?
    };
    run.distribution("pi", &dist)?;
    let peaks = dominant_peaks(&dist);
    let list: Vec<String> = peaks.iter().map(|(x, y)| format!("{x}:{y}")).collect();
    run.output("method", method);
    run.output("dominant_peaks", list.join(";"));
    run.output("p_start", float(dist.get(a.x0, a.y0)));
    run.finish()
}

fn cmd_mixing(out: &Path, a: &MixingArgs) -> anyhow::Result<ExperimentRecord> {
    check_epsilon(&a.epsilon)?;
    let g = geometry(a.side)?;
    let kind = WalkKind::from(a.walk);
    if kind == WalkKind::Grover && !g.is_odd() {
        bail!(WalkError::Domain(format!(
            "the exact reference needs an odd side, got {}",
            a.side
        )));
    }
    let horizon = a.horizon.unwrap_or_else(|| qwalk_core::mixing::default_horizon(g));
    if horizon == 0 {
        bail!(WalkError::Domain("horizon must be at least 1".into()));
    }
    let mut m = Manifest::new("mixing");
    m.set("side", a.side).set("walk", kind.name()).set("horizon", horizon);
    m.set("epsilon", a.epsilon.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(","));
    let mut run = Run::start(out, format!("mixing_{}_side{}", kind.name(), a.side), "mixing", m)?;
    let (initial, op, reference) = standard_setup(g, kind)?;
    let trace = distance_trace(&initial, &op, &reference, horizon)?;
    run.csv("trace", TRACE_HEADER, &trace_csv(&trace))?;
    let mut body = String::new();
    for &eps in &a.epsilon {
        let times = trace.mixing_times(eps)?;
        let _ = writeln!(
            body,
            "{},{eps},{},{},{}",
            g.vertices(),
            opt(times.average),
            opt(times.instantaneous),
            times.average.is_some()
        );
        run.output(&format!("M[{eps}]"), opt(times.average));
    }
    run.csv("times", TIMES_HEADER, &body)?;
    run.finish()
}

fn cmd_search(out: &Path, a: &SearchArgs) -> anyhow::Result<ExperimentRecord> {
    let g = geometry(a.side)?;
    let marked = (a.marked_x, a.marked_y);
    g.check_vertex(marked.0, marked.1)?;
    let mut m = Manifest::new("search");
    m.set("side", a.side).set("marked", format!("{}:{}", marked.0, marked.1)).set("t_max", a.t_max);
    m.set("snapshot_at", opt(a.dump_snapshot_at));
    let mut run = Run::start(out, format!("search_side{}", a.side), "search", m)?;
    let result = run_search(g, marked, a.t_max)?;
    let mut body = String::new();
    for (t, p) in result.trace.iter().enumerate() {
        let _ = writeln!(body, "{t},{}", float(*p));
    }
    run.csv("trace", "t,p_marked", &body)?;
    if let Some(t) = a.dump_snapshot_at {
        run.distribution(&format!("snapshot_t{t}"), &search_snapshot(g, marked, t)?)?;
    }
    match result.first_max_step {
        Some(t) => {
            let p = result.trace[t];
            run.output("t_star", t);
            run.output("p_star", float(p));
            run.output("p_star_ln_n", float(p * (g.vertices() as f64).ln()));
        }
        None => run.output("t_star", "not_found"),
    }
    run.finish()
}

fn cmd_scaling(out: &Path, a: &ScalingArgs) -> anyhow::Result<ExperimentRecord> {
    check_epsilon(&a.epsilons)?;
    let kind = WalkKind::from(a.walk);
    let mut m = Manifest::new("scaling");
    m.set("walk", kind.name());
    m.set("sides", a.sides.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(","));
    m.set("epsilons", a.epsilons.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(","));
    m.set("horizon", opt(a.horizon));
    let mut run = Run::start(out, format!("scaling_{}", kind.name()), "mixing", m)?;
    let sweep = scaling_sweep(&a.sides, &a.epsilons, kind, a.horizon)?;
    let mut body = String::new();
    for r in &sweep.records {
        let _ = writeln!(
            body,
            "{},{},{},{},{}",
            r.vertices,
            r.times.epsilon,
            opt(r.times.average),
            opt(r.times.instantaneous),
            r.times.average.is_some()
        );
    }
    run.csv("times", TIMES_HEADER, &body)?;
    let mut fits = String::new();
    for (eps, f) in &sweep.size_fits {
        fit_row(&mut fits, f, format!("epsilon={eps}"));
    }
    for (side, f) in &sweep.epsilon_fits {
        fit_row(&mut fits, f, format!("side={side}"));
    }
    run.csv("fits", FIT_HEADER, &fits)?;
    if let Some(c) = sweep.mean_exponent() {
        run.output("c", format!("{c:.4}"));
    }
    if let Some(r2) = sweep.size_fits.iter().map(|(_, f)| f.r_squared).reduce(f64::min) {
        run.output("min_r2", format!("{r2:.4}"));
    }
    run.output("unreached", sweep.unreached.len());
    run.finish()
}

fn cmd_classical(out: &Path, a: &ClassicalArgs) -> anyhow::Result<ExperimentRecord> {
    check_epsilon(&[a.epsilon])?;
    let mut m = Manifest::new("classical");
    m.set("sides", a.sides.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(","));
    m.set("epsilon", a.epsilon);
    let mut run = Run::start(out, "classical", "classical", m)?;
    let baseline = classical_mixing_baseline(&a.sides, a.epsilon)?;
    let mut body = String::new();
    for r in &baseline.records {
        let _ = writeln!(body, "{},{},{}", r.side, r.vertices, opt(r.mixing_time));
    }
    run.csv("times", "side,N,t_mix", &body)?;
    let mut fits = String::new();
    if let Some(f) = &baseline.fit {
        fit_row(&mut fits, f, "N");
        run.output("beta", format!("{:.4}", f.slope));
    }
    run.csv("fit", FIT_HEADER, &fits)?;
    run.finish()
}

fn cmd_reproduce(out: &Path, a: &ReproduceArgs) -> anyhow::Result<ExperimentRecord> {
    let g = geometry(a.side)?;
    let name = format!("{:?}", a.figure).to_lowercase();
    let mut m = Manifest::new("reproduce");
    m.set("figure", &name).set("side", a.side);
    match a.figure {
        // Exact limiting distribution with the start shifted to the centre.
        Figure::Fig1 => {
            if !g.is_odd() {
                bail!(WalkError::Domain(format!("fig1 needs an odd side, got {}", a.side)));
            }
            let c = a.side / 2;
            m.set("x0", c).set("y0", c);
            let mut run = Run::start(out, format!("fig1_side{}", a.side), "limiting", m)?;
            let initial = make_localized_uniform_coin(g, c, c)?;
            let pi = limiting_distribution(&build_eigensystem(g)?, &initial)?;
            run.distribution("pi", &pi)?;
            let (px, py) = pi.argmax();
            run.output("argmax", format!("{px}:{py}"));
            run.output("p_max", float(pi.get(px, py)));
            run.finish()
        }
        // Grover walk distance trace against the exact limit.
        Figure::Fig2 => {
            if !g.is_odd() {
                bail!(WalkError::Domain(format!("fig2 needs an odd side, got {}", a.side)));
            }
            let horizon = qwalk_core::mixing::default_horizon(g);
            m.set("walk", "grover").set("horizon", horizon);
            let mut run = Run::start(out, format!("fig2_side{}", a.side), "mixing", m)?;
            let (initial, op, reference) = standard_setup(g, WalkKind::Grover)?;
            let trace = distance_trace(&initial, &op, &reference, horizon)?;
            run.csv("trace", TRACE_HEADER, &trace_csv(&trace))?;
            run.output("M[0.1]", opt(trace.mixing_times(0.1)?.average));
            run.finish()
        }
        // Search snapshot at the first maximum and the walk's P̄(10⁴).
        Figure::Fig3 => {
            let steps = qwalk_core::mixing::MARKED_REFERENCE_STEPS;
            m.set("marked", "0:0").set("average_steps", steps);
            let mut run = Run::start(out, format!("fig3_side{}", a.side), "search", m)?;
            let search = run_search(g, (0, 0), 4 * a.side * a.side)?;
            let t = search
                .first_max_step
                .ok_or_else(|| WalkError::Domain("no search maximum found".into()))?;
            run.distribution(&format!("snapshot_t{t}"), &search_snapshot(g, (0, 0), t)?)?;
            run.distribution("average", &stationary_reference_marked(g, (0, 0), steps)?)?;
            run.output("t_star", t);
            run.output("p_star", float(search.trace[t]));
            run.finish()
        }
        // Marked walk distance trace against its own P̄(10⁴).
        Figure::Fig4 => {
            let horizon = qwalk_core::mixing::default_horizon(g);
            m.set("walk", "marked").set("marked", "0:0").set("horizon", horizon);
            let mut run = Run::start(out, format!("fig4_side{}", a.side), "mixing", m)?;
            let (initial, op, reference) = standard_setup(g, WalkKind::Marked)?;
            let trace = distance_trace(&initial, &op, &reference, horizon)?;
            run.csv("trace", TRACE_HEADER, &trace_csv(&trace))?;
            let avg: Vec<f64> = trace.points.iter().map(|p| p.tv_avg).collect();
            run.output(
                "sub_band_minima",
                qwalk_core::search::count_sub_band_minima(
                    &avg,
                    qwalk_core::search::OSCILLATION_BAND,
                    qwalk_core::search::OSCILLATION_WINDOW,
                ),
            );
            run.finish()
        }
    }
}

/// Reads a CSV written by this harness, returning the manifest hash and the
/// remaining lines.
pub fn read_csv(path: &Path) -> anyhow::Result<(String, Vec<String>)> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut lines = text.lines();
    let hash = lines
        .next()
        .and_then(|l| l.strip_prefix("# manifest_sha256="))
        .context("missing manifest hash line")?
        .to_string();
    Ok((hash, lines.map(str::to_string).collect()))
}
