//! The `evinf` command line.
//!
//! Option values come from flags, then from an optional TOML file given
//! with `--config`, then from built-in defaults. Exit status is 0 on
//! success, 1 for unreadable or malformed inputs and invalid options, and
//! 2 when the pipeline itself reports a broken invariant.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use evinf_core::fusion::DEFAULT_LAMBDA;
use evinf_core::*;
use serde::Deserialize;
use thiserror::Error;

use crate::formats::{self, CsvSink, DatasetPaths, DumpError, FormatError};
use crate::parallel;

#[derive(Debug, Parser)]
#[command(
    name = "evinf",
    version,
    about = "Evidential influence scoring and seed selection"
)]
pub struct Cli {
    /// TOML file supplying defaults for any option below.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Worker thread cap (default: available parallelism).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a seeded synthetic dataset as the four input files.
    Generate(GenerateArgs),
    /// Select a ranked seed set.
    Select(SelectArgs),
    /// Compare seed quality across reliability configurations.
    Evaluate(EvaluateArgs),
    /// Write per-edge indicators, reliabilities and fused masses.
    DumpEdges(SelectArgs),
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// `src,dst` follow edges (src influences dst).
    #[arg(long)]
    pub edges: Option<PathBuf>,
    /// `mentioner,mentioned,count`.
    #[arg(long)]
    pub mentions: Option<PathBuf>,
    /// `retweeter,original_author,count`.
    #[arg(long)]
    pub retweets: Option<PathBuf>,
    /// `user,tweets,followers`.
    #[arg(long)]
    pub activity: Option<PathBuf>,
    /// Output file (default: standard output).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Seed count (default 50).
    #[arg(long)]
    pub k: Option<usize>,
    /// Reliability sharpness for estimated α (default 5).
    #[arg(long, allow_negative_numbers = true)]
    pub lambda: Option<f64>,
    /// How estimated reliabilities are shared between edges.
    #[arg(long, value_enum)]
    pub granularity: Option<GranularityArg>,
    /// Accepted for a uniform interface; selection is deterministic.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct SelectArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Fixed reliability for every indicator; omit to estimate it per edge.
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: Option<f64>,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Comma-separated configurations: `fixed:<alpha>`, `estimated` or
    /// `estimated:<lambda>` (default `fixed:0,fixed:0.2,estimated`).
    #[arg(long)]
    pub sweep: Option<String>,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    /// Directory receiving edges.csv, mentions.csv, retweets.csv, activity.csv.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Random seed (default 42).
    #[arg(long)]
    pub seed: Option<u64>,
    /// Number of users (default 1000).
    #[arg(long)]
    pub n_users: Option<usize>,
    /// Number of follow edges (default 2000).
    #[arg(long)]
    pub n_edges: Option<usize>,
    /// Multiplier on mention, retweet and tweet volumes (default 1).
    #[arg(long, allow_negative_numbers = true)]
    pub intensity: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GranularityArg {
    PerEdge,
    Global,
}

/// Contents of a `--config` file. Relative paths are resolved against the
/// file's directory.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub edges: Option<PathBuf>,
    pub mentions: Option<PathBuf>,
    pub retweets: Option<PathBuf>,
    pub activity: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub k: Option<usize>,
    pub lambda: Option<f64>,
    pub alpha: Option<f64>,
    pub granularity: Option<GranularityArg>,
    pub seed: Option<u64>,
    pub threads: Option<usize>,
    pub sweep: Option<Vec<String>>,
    pub n_users: Option<usize>,
    pub n_edges: Option<usize>,
    pub intensity: Option<f64>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|source| FormatError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let mut cfg: FileConfig = toml::from_str(&text).map_err(|e| {
            CliError::Usage(format!("--config {}: {}", path.display(), e.message()))
        })?;
        let base = path.parent().unwrap_or(Path::new(""));
        for p in [
            &mut cfg.edges,
            &mut cfg.mentions,
            &mut cfg.retweets,
            &mut cfg.activity,
            &mut cfg.out,
        ]
        .into_iter()
        .flatten()
        {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        Ok(cfg)
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Format(_) => 1,
            CliError::Internal(_) => 2,
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit status; diagnostics go to `stderr`.
pub fn main_with_args<I, T>(args: I, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(cli) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "evinf: {e}");
            e.exit_code()
        }
    }
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    let file = match &cli.config {
        Some(p) => FileConfig::load(p)?,
        None => FileConfig::default(),
    };
    let threads = match cli.threads.or(file.threads) {
        Some(0) => return Err(CliError::Usage("--threads must be at least 1".into())),
        Some(t) => t,
        None => 0,
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Internal(format!("thread pool: {e}")))?;
    pool.install(|| match cli.command {
        Command::Generate(args) => cmd_generate(&args, &file),
        Command::Select(args) => cmd_select(&args, &file),
        Command::Evaluate(args) => cmd_evaluate(&args, &file),
        Command::DumpEdges(args) => cmd_dump_edges(&args, &file),
    })
}

/// Options shared by the pipeline commands after merging flags, file and
/// defaults.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub paths: DatasetPaths,
    pub out: Option<PathBuf>,
    pub k: usize,
    pub lambda: f64,
    pub granularity: Granularity,
}

impl RunConfig {
    pub fn resolve(args: &InputArgs, file: &FileConfig) -> Result<Self, CliError> {
        let edges = args
            .edges
            .clone()
            .or_else(|| file.edges.clone())
            .ok_or_else(|| CliError::Usage("--edges is required".into()))?;
        let k = args.k.or(file.k).unwrap_or(evaluate::DEFAULT_K);
        if k == 0 {
            return Err(CliError::Usage("--k must be at least 1".into()));
        }
        let lambda = args.lambda.or(file.lambda).unwrap_or(DEFAULT_LAMBDA);
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(CliError::Usage(format!(
                "--lambda must be a positive number, got {lambda}"
            )));
        }
        let granularity = match args.granularity.or(file.granularity) {
            Some(GranularityArg::Global) => Granularity::GlobalAverage,
            Some(GranularityArg::PerEdge) | None => Granularity::PerEdge,
        };
        Ok(RunConfig {
            paths: DatasetPaths {
                edges,
                mentions: args.mentions.clone().or_else(|| file.mentions.clone()),
                retweets: args.retweets.clone().or_else(|| file.retweets.clone()),
                activity: args.activity.clone().or_else(|| file.activity.clone()),
            },
            out: args.out.clone().or_else(|| file.out.clone()),
            k,
            lambda,
            granularity,
        })
    }

    pub fn estimated(&self, lambda: f64) -> Result<ReliabilityConfig, CliError> {
        ReliabilityConfig::estimated(lambda)
            .map(|c| c.with_granularity(self.granularity))
            .map_err(|e| CliError::Usage(format!("--lambda: {e}")))
    }

    fn reliability(&self, alpha: Option<f64>) -> Result<ReliabilityConfig, CliError> {
        match alpha {
            Some(a) => fixed_alpha(a, "--alpha"),
            None => self.estimated(self.lambda),
        }
    }
}

fn fixed_alpha(a: f64, what: &str) -> Result<ReliabilityConfig, CliError> {
    ReliabilityConfig::fixed(a)
        .map_err(|_| CliError::Usage(format!("{what}: alpha must lie in [0, 1], got {a}")))
}

/// Parses one sweep entry: `fixed:<alpha>`, `estimated` or
/// `estimated:<lambda>`.
pub fn parse_sweep_entry(entry: &str, run: &RunConfig) -> Result<NamedConfig, CliError> {
    let bad = || CliError::Usage(format!("--sweep: cannot parse `{entry}`"));
    let config = match entry.split_once(':') {
        Some(("fixed", a)) => fixed_alpha(a.parse().map_err(|_| bad())?, "--sweep")?,
        Some(("estimated", l)) => run.estimated(l.parse().map_err(|_| bad())?)?,
        None if entry == "estimated" => run.estimated(run.lambda)?,
        _ => return Err(bad()),
    };
    Ok(NamedConfig::new(entry, config))
}

pub fn parse_sweep(entries: &[String], run: &RunConfig) -> Result<Vec<NamedConfig>, CliError> {
    let sweep = entries
        .iter()
        .map(|e| e.trim())
        .filter(|e| !e.is_empty())
        .map(|e| parse_sweep_entry(e, run))
        .collect::<Result<Vec<_>, _>>()?;
    if sweep.is_empty() {
        return Err(CliError::Usage("--sweep: no configurations given".into()));
    }
    Ok(sweep)
}

fn with_output<F>(out: Option<&Path>, write: F) -> Result<(), CliError>
where
    F: FnOnce(&mut CsvSink<Box<dyn Write + '_>>) -> Result<(), CliError>,
{
    let (sink, label): (Box<dyn Write>, PathBuf) = match out {
        Some(p) => {
            let file = fs::File::create(p).map_err(|source| FormatError::Io {
                path: p.to_path_buf(),
                source,
            })?;
            (Box::new(io::BufWriter::new(file)), p.to_path_buf())
        }
        None => (Box::new(io::stdout().lock()), PathBuf::from("<stdout>")),
    };
    let mut sink = CsvSink::new(sink, &label);
    write(&mut sink)?;
    let mut inner = sink.finish()?;
    inner.flush().map_err(|source| FormatError::Io {
        path: label,
        source,
    })?;
    Ok(())
}

/// Renders a fusion failure with user names. Total conflict is a property
/// of the data under the chosen α, so it is reported as a usage error.
fn fusion_error(g: &SocialGraph, e: FusionError) -> CliError {
    let (edge, inner) = match &e {
        FusionError::AtEdge { src, dst, source } => {
            (Some((g.name(*src), g.name(*dst))), source.as_ref())
        }
        other => (None, other),
    };
    let place = edge
        .map(|(s, d)| format!("edge {s} -> {d}: "))
        .unwrap_or_default();
    match inner {
        FusionError::Belief(BeliefError::TotalConflict { .. }) => CliError::Usage(format!(
            "{place}indicators are in total conflict; use a fixed alpha below 1 or estimated reliabilities"
        )),
        other => CliError::Internal(format!("{place}{other}")),
    }
}

fn evaluate_error(g: &SocialGraph, e: EvaluateError) -> CliError {
    match e {
        EvaluateError::EmptySweep => CliError::Usage("--sweep: no configurations given".into()),
        EvaluateError::InvalidK(k) => CliError::Usage(format!("--k must be at least 1, got {k}")),
        EvaluateError::Fusion { config, source } => match fusion_error(g, source) {
            CliError::Usage(m) => CliError::Usage(format!("config `{config}`: {m}")),
            other => CliError::Internal(format!("config `{config}`: {other}")),
        },
        other => CliError::Internal(other.to_string()),
    }
}

pub fn cmd_select(args: &SelectArgs, file: &FileConfig) -> Result<(), CliError> {
    let run = RunConfig::resolve(&args.input, file)?;
    let cfg = run.reliability(args.alpha.or(file.alpha))?;
    let (g, _) = formats::load_graph(&run.paths)?;
    let fused = parallel::fuse_all_par(&g, &cfg).map_err(|e| fusion_error(&g, e))?;
    let field =
        InfluenceField::from_fused(&g, &fused).map_err(|e| CliError::Internal(e.to_string()))?;
    let (selection, _) =
        parallel::select_celf_par(&field, run.k).map_err(|e| CliError::Internal(e.to_string()))?;
    with_output(run.out.as_deref(), |sink| {
        Ok(formats::write_seeds(&g, &selection, sink)?)
    })
}

pub fn cmd_evaluate(args: &EvaluateArgs, file: &FileConfig) -> Result<(), CliError> {
    let run = RunConfig::resolve(&args.input, file)?;
    let entries: Vec<String> = match (&args.sweep, &file.sweep) {
        (Some(flag), _) => flag.split(',').map(String::from).collect(),
        (None, Some(list)) => list.clone(),
        (None, None) => ["fixed:0", "fixed:0.2", "estimated"]
            .map(String::from)
            .to_vec(),
    };
    let sweep = parse_sweep(&entries, &run)?;
    let (g, activity) = formats::load_graph(&run.paths)?;
    let report = parallel::compare_configs_par(&g, &activity, &sweep, run.k)
        .map_err(|e| evaluate_error(&g, e))?;
    with_output(run.out.as_deref(), |sink| {
        Ok(formats::write_report(&g, &report, sink)?)
    })
}

pub fn cmd_dump_edges(args: &SelectArgs, file: &FileConfig) -> Result<(), CliError> {
    let run = RunConfig::resolve(&args.input, file)?;
    let cfg = run.reliability(args.alpha.or(file.alpha))?;
    let (g, _) = formats::load_graph(&run.paths)?;
    let plan = FusionPlan::new(&g, &cfg).map_err(|e| fusion_error(&g, e))?;
    let fused = parallel::fuse_plan_par(&plan).map_err(|e| fusion_error(&g, e))?;
    with_output(run.out.as_deref(), |sink| {
        formats::write_edge_dump(&g, &plan, &fused, sink).map_err(|e| match e {
            DumpError::Format(e) => e.into(),
            DumpError::Fusion(e) => fusion_error(&g, e),
        })
    })
}

pub fn cmd_generate(args: &GenerateArgs, file: &FileConfig) -> Result<(), CliError> {
    let defaults = SyntheticParams::default();
    let params = SyntheticParams {
        seed: args.seed.or(file.seed).unwrap_or(defaults.seed),
        n_users: args.n_users.or(file.n_users).unwrap_or(defaults.n_users),
        n_edges: args.n_edges.or(file.n_edges).unwrap_or(defaults.n_edges),
        activity_intensity: args
            .intensity
            .or(file.intensity)
            .unwrap_or(defaults.activity_intensity),
    };
    let dir = args
        .out
        .clone()
        .or_else(|| file.out.clone())
        .ok_or_else(|| CliError::Usage("--out <DIR> is required".into()))?;
    let ds = generate_synthetic(&params).map_err(|e| {
        let flag = match &e {
            SynthError::InvalidParameters(m) if m.contains("intensity") => "--intensity",
            SynthError::InvalidParameters(m) if m.contains("n_users") => "--n-users",
            SynthError::InvalidParameters(_) => "--n-edges",
        };
        CliError::Usage(format!("{flag}: {e}"))
    })?;
    fs::create_dir_all(&dir).map_err(|source| FormatError::Io {
        path: dir.clone(),
        source,
    })?;
    formats::write_synthetic(&ds, &dir)?;
    Ok(())
}
