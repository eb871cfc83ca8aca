//! `hlskit` command-line front end.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, ValueEnum};
use hlskit::dot;
use hlskit::graph::glue_graphs;
use hlskit::{
    collapse_subset, defaults, estimate, fuse_leaves, generate, glue, glue_complexes, hls,
    iff_audit, measure_ball_check, orbit_quotient, realize_graph, run_convergence, sample_graph,
    validate_metric, warp, AuditStatus, Bijection, ConvergenceOptions, EstimateOptions,
    FiniteMetricSpace, FoliatedComplex, Generator, GlueMode, HlsSpace, MetricGraph, MetricMode,
    WarpSequence, WarpSpec,
};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum Command {
    /// Check the metric axioms of a space
    Validate,
    /// Leaf space of a foliated complex
    Hls,
    /// Warp a complex by a leafwise function (--input2)
    Warp,
    /// Glue two complexes, graphs or spaces along --map
    Glue,
    /// Collapse --subset of a space to a point, or fuse leaves of a complex
    Collapse,
    /// Quotient of a space by the group generated by --generators
    Orbit,
    /// Gromov–Hausdorff estimate between two spaces
    Gh,
    /// Realize a metric graph as a foliated complex
    Realize,
    /// Sample a metric graph at spacing --step
    Sample,
    /// Ball-measure bounds on a metric graph
    MeasureCheck,
    /// Distance table of a warped sequence against its leaf space
    Converge,
    /// Cross-tabulate the dense leaf condition against convergence
    Audit,
    /// Build a complex from a generator description
    Generate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Dot,
    Csv,
}

#[derive(Parser, Debug)]
#[command(
    name = "hlskit",
    version,
    allow_negative_numbers = true,
    about = "Hausdorff leaf spaces of discretized foliations"
)]
struct Cli {
    command: Command,
    /// JSON run configuration; flags given on the command line override it
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long)]
    input2: Option<PathBuf>,
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long)]
    seed: Option<u64>,
    /// Tolerance: triangle slack for validate, τ_conv for converge and audit
    #[arg(long)]
    tol: Option<f64>,
    /// Size cap |X|·|Y| for the exact GH search
    #[arg(long)]
    cap: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    eps_grid: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    ns: Option<Vec<usize>>,
    #[arg(long)]
    resolution: Option<usize>,
    /// JSON list of [a, b] pairs
    #[arg(long)]
    map: Option<PathBuf>,
    /// strict|pseudo for validate, tangential|transverse for glue
    #[arg(long)]
    mode: Option<String>,
    #[arg(long)]
    step: Option<f64>,
    #[arg(long, value_delimiter = ',')]
    subset: Option<Vec<String>>,
    /// JSON list of bijections, each a list of [from, to] pairs
    #[arg(long)]
    generators: Option<PathBuf>,
}

/// Everything a run depends on. Loadable from JSON; unknown keys are
/// rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RunConfig {
    command: Option<Command>,
    #[serde(default)]
    input: Option<PathBuf>,
    #[serde(default)]
    input2: Option<PathBuf>,
    #[serde(default)]
    output: Option<PathBuf>,
    #[serde(default)]
    format: Option<Format>,
    #[serde(default = "default_seed")]
    seed: u64,
    #[serde(default)]
    tol: Option<f64>,
    #[serde(default = "default_cap")]
    cap: usize,
    #[serde(default = "default_eps_grid")]
    eps_grid: Vec<f64>,
    #[serde(default = "default_ns")]
    ns: Vec<usize>,
    #[serde(default = "default_resolution")]
    resolution: usize,
    #[serde(default)]
    map: Option<PathBuf>,
    #[serde(default)]
    mode: Option<String>,
    #[serde(default)]
    step: Option<f64>,
    #[serde(default)]
    subset: Vec<String>,
    #[serde(default)]
    generators: Option<PathBuf>,
}

fn default_seed() -> u64 {
    defaults::SEED
}
fn default_cap() -> usize {
    defaults::GH_EXACT_CAP
}
fn default_eps_grid() -> Vec<f64> {
    vec![0.5, 0.25, 0.125]
}
fn default_ns() -> Vec<usize> {
    vec![1, 2, 4, 8, 16]
}
fn default_resolution() -> usize {
    8
}

impl Default for RunConfig {
    fn default() -> Self {
        serde_json::from_str("{}").expect("defaults")
    }
}

impl RunConfig {
    fn from_cli(cli: Cli) -> Result<(Command, Self)> {
        let mut c = match &cli.config {
            Some(p) => serde_json::from_str::<RunConfig>(&read(p)?)
                .with_context(|| format!("config `{}`", p.display()))?,
            None => RunConfig::default(),
        };
        if let Some(cmd) = c.command {
            if cmd != cli.command {
                bail!(
                    "config `command` is {cmd:?} but the command line asks for {:?}",
                    cli.command
                );
            }
        }
        c.command = Some(cli.command);
        macro_rules! take {
            ($($f:ident),*) => {$(if let Some(v) = cli.$f { c.$f = Some(v); })*};
        }
        take!(input, input2, output, format, tol, map, mode, step, generators);
        if let Some(v) = cli.seed {
            c.seed = v;
        }
        if let Some(v) = cli.cap {
            c.cap = v;
        }
        if let Some(v) = cli.eps_grid {
            c.eps_grid = v;
        }
        if let Some(v) = cli.ns {
            c.ns = v;
        }
        if let Some(v) = cli.resolution {
            c.resolution = v;
        }
        if let Some(v) = cli.subset {
            c.subset = v;
        }
        c.check()?;
        Ok((cli.command, c))
    }

    fn check(&self) -> Result<()> {
        let positive = |name: &str, v: f64| -> Result<()> {
            if !(v > 0.0 && v.is_finite()) {
                bail!("`{name}` must be positive, got {v}");
            }
            Ok(())
        };
        if let Some(t) = self.tol {
            positive("tol", t)?;
        }
        if let Some(s) = self.step {
            positive("step", s)?;
        }
        for &e in &self.eps_grid {
            positive("eps-grid", e)?;
        }
        if self.cap == 0 {
            bail!("`cap` must be positive");
        }
        if self.resolution == 0 {
            bail!("`resolution` must be positive");
        }
        Ok(())
    }

    fn input(&self) -> Result<&Path> {
        self.input
            .as_deref()
            .ok_or_else(|| anyhow!("--input is required"))
    }

    fn input2(&self) -> Result<&Path> {
        self.input2
            .as_deref()
            .ok_or_else(|| anyhow!("--input2 is required"))
    }

    fn format(&self, default: Format, allowed: &[Format]) -> Result<Format> {
        let f = self.format.unwrap_or(default);
        if !allowed.contains(&f) {
            bail!("format {f:?} is not available for this command");
        }
        Ok(f)
    }
}

/// A structural failure (exit 2) or a completed check that came out negative
/// (exit 1).
enum Outcome {
    Done,
    CheckFailed(String),
}

fn read(p: &Path) -> Result<String> {
    fs::read_to_string(p).with_context(|| format!("cannot read `{}`", p.display()))
}

fn load<T: for<'de> Deserialize<'de>>(p: &Path) -> Result<T> {
    serde_json::from_str(&read(p)?).with_context(|| format!("invalid input `{}`", p.display()))
}

fn has_key(p: &Path, key: &str) -> Result<bool> {
    let v: serde_json::Value = load(p)?;
    Ok(v.get(key).is_some())
}

/// A finite metric space, or the space of an HLS result.
fn load_space(p: &Path) -> Result<FiniteMetricSpace> {
    if has_key(p, "space")? {
        Ok(load::<HlsSpace>(p)?.space)
    } else {
        load(p)
    }
}

fn pairs(p: &Path) -> Result<Vec<(String, String)>> {
    load(p)
}

fn emit(cfg: &RunConfig, text: &str) -> Result<()> {
    match &cfg.output {
        Some(p) => fs::write(p, text).with_context(|| format!("cannot write `{}`", p.display())),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn json<T: Serialize>(v: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s)
}

fn emit_complex(cfg: &RunConfig, k: &FoliatedComplex) -> Result<()> {
    match cfg.format(Format::Json, &[Format::Json, Format::Dot])? {
        Format::Dot => emit(cfg, &dot::complex_to_dot(k)),
        _ => emit(cfg, &json(k)?),
    }
}

fn emit_graph(cfg: &RunConfig, g: &MetricGraph) -> Result<()> {
    match cfg.format(Format::Json, &[Format::Json, Format::Dot])? {
        Format::Dot => emit(cfg, &dot::graph_to_dot(g)),
        _ => emit(cfg, &json(g)?),
    }
}

fn emit_space<T: Serialize>(cfg: &RunConfig, value: &T, space: &FiniteMetricSpace) -> Result<()> {
    match cfg.format(Format::Json, &[Format::Json, Format::Dot])? {
        Format::Dot => emit(cfg, &dot::space_to_dot(space)),
        _ => emit(cfg, &json(value)?),
    }
}

fn glue_mode(cfg: &RunConfig) -> Result<GlueMode> {
    match cfg.mode.as_deref().unwrap_or("tangential") {
        "tangential" => Ok(GlueMode::Tangential),
        "transverse" => Ok(GlueMode::Transverse),
        m => bail!("unknown glue mode `{m}` (expected tangential or transverse)"),
    }
}

fn dispatch(cmd: Command, cfg: &RunConfig) -> Result<Outcome> {
    match cmd {
        Command::Validate => {
            let x: FiniteMetricSpace = load(cfg.input()?)?;
            let mode = match cfg.mode.as_deref().unwrap_or("strict") {
                "strict" => MetricMode::Strict,
                "pseudo" => MetricMode::Pseudo,
                m => bail!("unknown metric mode `{m}` (expected strict or pseudo)"),
            };
            let tol = cfg.tol.unwrap_or_else(|| x.default_tol());
            let rep = validate_metric(&x, mode, tol);
            cfg.format(Format::Json, &[Format::Json])?;
            emit(cfg, &json(&rep)?)?;
            if !rep.is_valid() {
                return Ok(Outcome::CheckFailed(format!(
                    "{} axiom violation(s), first: {}",
                    rep.violations.len(),
                    serde_json::to_string(&rep.violations[0])?
                )));
            }
        }
        Command::Hls => {
            let k: FoliatedComplex = load(cfg.input()?)?;
            let h = hls(&k)?;
            match cfg.format(Format::Json, &[Format::Json, Format::Dot])? {
                Format::Dot => emit(cfg, &dot::hls_to_dot(&h))?,
                _ => {
                    emit(cfg, &json(&h)?)?;
                    if let Some(p) = &cfg.output {
                        let d = p.with_extension("dot");
                        fs::write(&d, dot::hls_to_dot(&h))
                            .with_context(|| format!("cannot write `{}`", d.display()))?;
                    }
                }
            }
        }
        Command::Warp => {
            let k: FoliatedComplex = load(cfg.input()?)?;
            let f: WarpSpec = load(cfg.input2()?)?;
            emit_complex(cfg, &warp(&k, &f)?)?;
        }
        Command::Glue => {
            let (a, b) = (cfg.input()?, cfg.input2()?);
            let map = cfg
                .map
                .as_deref()
                .ok_or_else(|| anyhow!("--map is required"))?;
            let p = pairs(map)?;
            if has_key(a, "leaf_of")? {
                let (k1, k2): (FoliatedComplex, FoliatedComplex) = (load(a)?, load(b)?);
                let f = Bijection::new(p)?;
                emit_complex(cfg, &glue_complexes(&k1, &k2, &f, glue_mode(cfg)?)?)?;
            } else if has_key(a, "nodes")? {
                let (g1, g2): (MetricGraph, MetricGraph) = (load(a)?, load(b)?);
                emit_graph(cfg, &glue_graphs(&g1, &g2, &p)?)?;
            } else {
                let (x, y) = (load_space(a)?, load_space(b)?);
                let q = glue(&x, &y, &Bijection::new(p)?)?;
                emit_space(cfg, &q, &q.space)?;
            }
        }
        Command::Collapse => {
            let a = cfg.input()?;
            if cfg.subset.is_empty() {
                bail!("--subset is required");
            }
            if has_key(a, "leaf_of")? {
                let k: FoliatedComplex = load(a)?;
                emit_complex(cfg, &fuse_leaves(&k, &cfg.subset)?)?;
            } else {
                let x = load_space(a)?;
                let q = collapse_subset(&x, &cfg.subset)?;
                emit_space(cfg, &q, &q.space)?;
            }
        }
        Command::Orbit => {
            let x = load_space(cfg.input()?)?;
            let gp = cfg
                .generators
                .as_deref()
                .ok_or_else(|| anyhow!("--generators is required"))?;
            let gens: Vec<Bijection> = load(gp)?;
            let q = orbit_quotient(&x, &gens)?;
            emit_space(cfg, &q, &q.space)?;
        }
        Command::Gh => {
            let (x, y) = (load_space(cfg.input()?)?, load_space(cfg.input2()?)?);
            let opts = EstimateOptions {
                exact_cap: cfg.cap,
                seed: cfg.seed,
                ..EstimateOptions::default()
            };
            cfg.format(Format::Json, &[Format::Json])?;
            emit(cfg, &json(&estimate(&x, &y, &opts)?)?)?;
        }
        Command::Realize => {
            let g: MetricGraph = load(cfg.input()?)?;
            let r = realize_graph(&g, cfg.resolution)?;
            match cfg.format(Format::Json, &[Format::Json, Format::Dot])? {
                Format::Dot => emit(cfg, &dot::complex_to_dot(&r.complex))?,
                _ => emit(cfg, &json(&r)?)?,
            }
        }
        Command::Sample => {
            let g: MetricGraph = load(cfg.input()?)?;
            let step = cfg.step.ok_or_else(|| anyhow!("--step is required"))?;
            let x = sample_graph(&g, step)?;
            emit_space(cfg, &x, &x)?;
        }
        Command::MeasureCheck => {
            let g: MetricGraph = load(cfg.input()?)?;
            let rep = measure_ball_check(&g)?;
            cfg.format(Format::Json, &[Format::Json])?;
            emit(cfg, &json(&rep)?)?;
            if !rep.passes {
                return Ok(Outcome::CheckFailed(format!(
                    "ball measure ratios [{}, {}] fall outside [1/β, β] with β = {}",
                    rep.min_ratio, rep.max_ratio, rep.beta
                )));
            }
        }
        Command::Converge => {
            let seq: WarpSequence = load(cfg.input()?)?;
            let rep = run_convergence(&seq, &cfg.ns, &conv_opts(cfg))?;
            match cfg.format(Format::Csv, &[Format::Csv, Format::Json])? {
                Format::Json => emit(cfg, &json(&rep)?)?,
                _ => emit(cfg, &rep.to_csv())?,
            }
            eprintln!("verdict: {:?} at τ_conv = {}", rep.verdict, rep.tau_conv);
        }
        Command::Audit => {
            let seq: WarpSequence = load(cfg.input()?)?;
            let rep = iff_audit(&seq, &cfg.eps_grid, &cfg.ns, &conv_opts(cfg))?;
            cfg.format(Format::Json, &[Format::Json])?;
            emit(cfg, &json(&rep)?)?;
            if rep.status == AuditStatus::Disagree {
                return Ok(Outcome::CheckFailed(format!(
                    "condition {} but verdict {:?}",
                    if rep.condition { "holds" } else { "fails" },
                    rep.verdict
                )));
            }
        }
        Command::Generate => {
            let g: Generator = load(cfg.input()?)?;
            emit_complex(cfg, &generate(&g)?)?;
        }
    }
    Ok(Outcome::Done)
}

fn conv_opts(cfg: &RunConfig) -> ConvergenceOptions {
    ConvergenceOptions {
        tau_conv: cfg.tol,
        estimate: EstimateOptions {
            exact_cap: cfg.cap,
            seed: cfg.seed,
            ..EstimateOptions::default()
        },
        ..ConvergenceOptions::default()
    }
}

fn threads() -> Result<()> {
    if let Ok(v) = std::env::var("HLSKIT_THREADS") {
        let n: usize = v
            .parse()
            .with_context(|| format!("HLSKIT_THREADS must be a positive integer, got `{v}`"))?;
        if n == 0 {
            bail!("HLSKIT_THREADS must be a positive integer, got `{v}`");
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let result = threads()
        .and_then(|()| RunConfig::from_cli(cli))
        .and_then(|(cmd, cfg)| dispatch(cmd, &cfg));
    match result {
        Ok(Outcome::Done) => ExitCode::SUCCESS,
        Ok(Outcome::CheckFailed(msg)) => {
            eprintln!("check failed: {msg}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
