//! The `dendrodist` command line.
//!
//! ```text
//! dendrodist gen   --kind ring|grid --seed S --out FILE [...]
//! dendrodist eval  --real FILE --fake FILE --metric dd|dd-max|fid|is [...]
//! dendrodist sweep mode-drop|noise|checkpoints --seed S --out FILE [...]
//! ```
//!
//! Exit codes: 0 success, 1 runtime or data error, 2 usage error. Every
//! command that draws random numbers requires `--seed`.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::error::Error;
use crate::harness::seed::{derive_seed, Stream};
use crate::harness::{
    checkpoint_series_eval, mode_drop_sweep, noise_sweep, summarize, FakeSize, ModeDropConfig, NoiseConfig, SweepResult,
};
use crate::ingest::{load_points, load_probs, save_points, save_report, save_summary, PointFormat, ReportFormat};
use crate::metrics::{dd_from_pointsets, fid_from_pointsets, inception_score_report, DdOptions};
use crate::rng;
use crate::synthdata::{
    grid_layout, perturb_modes, ring_layout, sample_dataset, LayoutKind, DEFAULT_GRID_LENGTH, DEFAULT_GRID_MODES,
    DEFAULT_N_PER_MODE, DEFAULT_RING_MODES, DEFAULT_RING_RADIUS,
};
use crate::types::{MetricName, MetricReport};

#[derive(Debug, Parser)]
#[command(
    name = "dendrodist",
    version,
    about = "Dendrogram Distance and baseline metrics for generative models"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sample a labelled 2D ring or grid dataset.
    Gen(GenArgs),
    /// Score a generated set against a reference set.
    Eval(EvalArgs),
    /// Run a seeded experiment sweep.
    #[command(subcommand)]
    Sweep(SweepCommand),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Kind {
    Ring,
    Grid,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    F64bin,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MetricArg {
    Dd,
    DdMax,
    Fid,
    Is,
}

impl MetricArg {
    fn name(self) -> MetricName {
        match self {
            MetricArg::Dd => MetricName::DdMean,
            MetricArg::DdMax => MetricName::DdMax,
            MetricArg::Fid => MetricName::Fid,
            MetricArg::Is => MetricName::InceptionScore,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum AlignArg {
    Strict,
    Subsample,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FakeSizeArg {
    Total,
    PerMode,
}

#[derive(Debug, Args)]
struct LayoutArgs {
    #[arg(long, value_enum)]
    kind: Kind,
    /// Number of modes (defaults: ring 7, grid 9).
    #[arg(long)]
    modes: Option<usize>,
    /// Ring radius (ring only, default 50).
    #[arg(long)]
    radius: Option<f64>,
    /// Grid side length (grid only, default 100).
    #[arg(long)]
    length: Option<f64>,
    /// Mode standard deviation (default 0.01 × characteristic length).
    #[arg(long)]
    sigma: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_N_PER_MODE)]
    n_per_mode: usize,
}

#[derive(Debug, Args)]
struct GenArgs {
    #[command(flatten)]
    layout: LayoutArgs,
    /// Mode displacement scale; each coordinate moves by Unif(-alpha·L, alpha·L).
    #[arg(long, default_value_t = 0.0)]
    alpha: f64,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    /// Output format (default: from the extension, `.bin`/`.f64bin` → f64bin).
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
}

#[derive(Debug, Args)]
struct EvalArgs {
    /// Reference point set (not used by `is`).
    #[arg(long)]
    real: Option<PathBuf>,
    /// Generated point set, or a class-probability CSV for `is`.
    #[arg(long)]
    fake: PathBuf,
    #[arg(long, value_enum)]
    metric: MetricArg,
    #[arg(long, value_enum, default_value = "strict")]
    align: AlignArg,
    /// Subsampling seed; required with `--align subsample`.
    #[arg(long, required_if_eq("align", "subsample"))]
    seed: Option<u64>,
    /// Inception Score chunks.
    #[arg(long, default_value_t = 1)]
    splits: usize,
    /// Write the full report as JSON.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SweepOutput {
    /// Sweep table (CSV). The resolved configuration goes to `<stem>.config.json`.
    #[arg(long)]
    out: PathBuf,
    /// Also write `<stem>.summary.csv` with per-cell mean/std/min/max.
    #[arg(long)]
    summary: bool,
}

#[derive(Debug, Subcommand)]
enum SweepCommand {
    /// Score label-restricted subsets of a labelled reference set.
    ModeDrop {
        #[arg(long)]
        real: PathBuf,
        #[arg(long, value_enum, value_delimiter = ',', required = true)]
        metrics: Vec<MetricArg>,
        /// Label keep order (default ascending).
        #[arg(long, value_delimiter = ',')]
        order: Option<Vec<u32>>,
        /// Points per generated set (default: those available at the smallest mode count).
        #[arg(long)]
        n_total: Option<usize>,
        /// Mode counts to evaluate (default 1..=K).
        #[arg(long, value_delimiter = ',')]
        mode_counts: Option<Vec<usize>>,
        #[arg(long)]
        reps: usize,
        #[arg(long)]
        seed: u64,
        #[command(flatten)]
        output: SweepOutput,
    },
    /// Mode-count curves on a perturbed ring or grid.
    Noise {
        #[command(flatten)]
        layout: LayoutArgs,
        #[arg(long, value_delimiter = ',', required = true)]
        alphas: Vec<f64>,
        #[arg(long, value_enum, value_delimiter = ',', required = true)]
        metrics: Vec<MetricArg>,
        #[arg(long, value_enum, default_value = "total")]
        fake_size: FakeSizeArg,
        #[arg(long, value_delimiter = ',')]
        mode_counts: Option<Vec<usize>>,
        #[arg(long)]
        reps: usize,
        #[arg(long)]
        seed: u64,
        #[command(flatten)]
        output: SweepOutput,
    },
    /// Score a series of checkpoint sample files against one reference.
    Checkpoints {
        #[arg(long)]
        real: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        checkpoints: Vec<PathBuf>,
        #[arg(long, value_enum, value_delimiter = ',', required = true)]
        metrics: Vec<MetricArg>,
        #[arg(long, value_enum, default_value = "strict")]
        align: AlignArg,
        #[arg(long, required_if_eq("align", "subsample"))]
        seed: Option<u64>,
        #[command(flatten)]
        output: SweepOutput,
    },
}

enum Failure {
    Usage(String),
    Runtime(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Runtime(e)
    }
}

type CliResult = Result<(), Failure>;

/// Parses `args` (including the program name) and runs the command,
/// returning the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let outcome = match cli.command {
        Command::Gen(args) => cmd_gen(args),
        Command::Eval(args) => cmd_eval(args),
        Command::Sweep(cmd) => cmd_sweep(cmd),
    };
    match outcome {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            2
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn point_format(path: &Path, flag: Option<FormatArg>) -> PointFormat {
    match flag {
        Some(FormatArg::Csv) => PointFormat::Csv,
        Some(FormatArg::F64bin) => PointFormat::F64Bin,
        None => PointFormat::from_path(path),
    }
}

fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("out");
    path.with_file_name(format!("{stem}{suffix}"))
}

fn write_json(path: &Path, value: &serde_json::Value) -> Result<(), Error> {
    let mut text = serde_json::to_string_pretty(value).expect("json values serialize");
    text.push('\n');
    std::fs::write(path, text).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        source: e,
    })
}

/// Resolves ring/grid flags into `(kind, modes, scale)`, rejecting flags
/// that do not apply to the chosen kind.
fn resolve_layout(args: &LayoutArgs) -> Result<(LayoutKind, usize, f64), Failure> {
    match args.kind {
        Kind::Ring => {
            if args.length.is_some() {
                return Err(Failure::Usage("--length applies to --kind grid only".into()));
            }
            let modes = args.modes.unwrap_or(DEFAULT_RING_MODES);
            if modes == 0 {
                return Err(Failure::Usage("--modes must be at least 1".into()));
            }
            Ok((LayoutKind::Ring, modes, args.radius.unwrap_or(DEFAULT_RING_RADIUS)))
        }
        Kind::Grid => {
            if args.radius.is_some() {
                return Err(Failure::Usage("--radius applies to --kind ring only".into()));
            }
            let modes = args.modes.unwrap_or(DEFAULT_GRID_MODES);
            let side = (modes as f64).sqrt().round() as usize;
            if modes == 0 || side * side != modes {
                return Err(Failure::Usage(format!("--modes {modes} is not a perfect square")));
            }
            Ok((LayoutKind::Grid, modes, args.length.unwrap_or(DEFAULT_GRID_LENGTH)))
        }
    }
}

fn cmd_gen(args: GenArgs) -> CliResult {
    let (kind, modes, scale) = resolve_layout(&args.layout)?;
    if !(args.alpha.is_finite() && args.alpha >= 0.0) {
        return Err(Failure::Usage(format!(
            "--alpha must be non-negative, got {}",
            args.alpha
        )));
    }
    if args.layout.n_per_mode == 0 {
        return Err(Failure::Usage("--n-per-mode must be at least 1".into()));
    }
    let mut base = match kind {
        LayoutKind::Grid => grid_layout(modes, scale)?,
        _ => ring_layout(modes, scale)?,
    };
    if let Some(sigma) = args.layout.sigma {
        base = base.with_sigma(sigma)?;
    }
    let perturb_seed = derive_seed(args.seed, Stream::Perturb, 0, 0, 0)?;
    let sample_seed = derive_seed(args.seed, Stream::RealSample, 0, 0, 0)?;
    let layout = perturb_modes(&base, args.alpha, perturb_seed)?;
    let points = sample_dataset(&layout, args.layout.n_per_mode, sample_seed)?;

    let format = point_format(&args.out, args.format);
    save_points(&points, &args.out, format)?;
    let sidecar = sibling(&args.out, ".layout.json");
    write_json(
        &sidecar,
        &json!({
            "kind": kind,
            "modes": modes,
            "scale": scale,
            "alpha": args.alpha,
            "n_per_mode": args.layout.n_per_mode,
            "seed": args.seed,
            "perturb_seed": perturb_seed,
            "sample_seed": sample_seed,
            "rng": rng::GENERATOR,
            "base_layout": base,
            "layout": layout,
        }),
    )?;
    println!(
        "wrote {} points ({} modes, sigma={}) to {}",
        points.len(),
        modes,
        layout.sigma,
        args.out.display()
    );
    Ok(())
}

fn cmd_eval(args: EvalArgs) -> CliResult {
    let dd_opts = match (args.align, args.seed) {
        (AlignArg::Subsample, Some(seed)) => DdOptions::subsample_larger(seed),
        _ => DdOptions::require_equal(),
    };
    let report: MetricReport = match args.metric {
        MetricArg::Is => {
            let probs = load_probs(&args.fake)?;
            if args.splits == 0 || args.splits > probs.len() {
                return Err(Failure::Usage(format!(
                    "--splits must lie in 1..={}, got {}",
                    probs.len(),
                    args.splits
                )));
            }
            inception_score_report(&probs, args.splits)?
        }
        metric => {
            let real_path = args
                .real
                .as_ref()
                .ok_or_else(|| Failure::Usage(format!("--metric {:?} needs --real", metric.name().as_str())))?;
            let real = load_points(real_path, PointFormat::from_path(real_path))?;
            let fake = load_points(&args.fake, PointFormat::from_path(&args.fake))?;
            match metric {
                MetricArg::Fid => fid_from_pointsets(&real, &fake)?,
                MetricArg::DdMax => {
                    let dd = dd_from_pointsets(&real, &fake, dd_opts)?;
                    let max = dd.aux["dd_max"].as_f64().expect("dd_max recorded");
                    let mut r = MetricReport::new(MetricName::DdMax, max)?;
                    r.aux = dd.aux;
                    r.aux.remove("dd_max");
                    r.with_aux("dd_mean", dd.value)
                }
                _ => dd_from_pointsets(&real, &fake, dd_opts)?,
            }
            .with_aux("real", real_path.display().to_string())
        }
    }
    .with_aux("fake", args.fake.display().to_string());

    if let Some(out) = &args.out {
        save_report(&report, out, ReportFormat::Json)?;
    }
    println!("metric={} value={}", report.metric_name, report.value);
    Ok(())
}

fn sweep_metrics(metrics: &[MetricArg]) -> Result<Vec<MetricName>, Failure> {
    if metrics.contains(&MetricArg::Is) {
        return Err(Failure::Usage(
            "sweeps support dd, dd-max and fid; score class probabilities with `eval --metric is`".into(),
        ));
    }
    let mut out: Vec<MetricName> = Vec::new();
    for m in metrics {
        if !out.contains(&m.name()) {
            out.push(m.name());
        }
    }
    Ok(out)
}

fn cmd_sweep(cmd: SweepCommand) -> CliResult {
    let (result, output) = match cmd {
        SweepCommand::ModeDrop {
            real,
            metrics,
            order,
            n_total,
            mode_counts,
            reps,
            seed,
            output,
        } => {
            let mut cfg = ModeDropConfig::new(sweep_metrics(&metrics)?, reps, seed);
            cfg.mode_order = order;
            cfg.n_total = n_total;
            cfg.mode_counts = mode_counts;
            let real_set = load_points(&real, PointFormat::from_path(&real))?;
            (mode_drop_sweep(&real_set, &cfg)?, output)
        }
        SweepCommand::Noise {
            layout,
            alphas,
            metrics,
            fake_size,
            mode_counts,
            reps,
            seed,
            output,
        } => {
            let (kind, modes, scale) = resolve_layout(&layout)?;
            let cfg = NoiseConfig {
                kind,
                modes,
                scale,
                sigma: layout.sigma,
                alphas,
                metrics: sweep_metrics(&metrics)?,
                n_per_mode: layout.n_per_mode,
                fake_size: match fake_size {
                    FakeSizeArg::Total => FakeSize::ConstantTotal,
                    FakeSizeArg::PerMode => FakeSize::PerMode,
                },
                mode_counts,
                repetitions: reps,
                master_seed: seed,
            };
            (noise_sweep(&cfg)?, output)
        }
        SweepCommand::Checkpoints {
            real,
            checkpoints,
            metrics,
            align,
            seed,
            output,
        } => {
            let opts = match (align, seed) {
                (AlignArg::Subsample, Some(s)) => DdOptions::subsample_larger(s),
                _ => DdOptions::require_equal(),
            };
            let real_set = load_points(&real, PointFormat::from_path(&real))?;
            (
                checkpoint_series_eval(&real_set, &checkpoints, &sweep_metrics(&metrics)?, opts)?,
                output,
            )
        }
    };
    write_sweep(&result, &output)?;
    Ok(())
}

fn write_sweep(result: &SweepResult, output: &SweepOutput) -> Result<(), Error> {
    let summary = if output.summary { Some(summarize(result)?) } else { None };
    save_report(result, &output.out, ReportFormat::Csv)?;
    write_json(&sibling(&output.out, ".config.json"), result.config())?;
    if let Some(rows) = &summary {
        save_summary(rows, &sibling(&output.out, ".summary.csv"))?;
    }
    println!("wrote {} rows to {}", result.rows().len(), output.out.display());
    if let Some(rows) = summary {
        for r in rows {
            let mut cell = String::new();
            if let Some(k) = r.mode_count {
                cell.push_str(&format!(" modes={k}"));
            }
            if let Some(a) = r.alpha {
                cell.push_str(&format!(" alpha={a}"));
            }
            println!("{}{cell} mean={} std={}", r.metric_name, r.mean, r.std);
        }
    }
    Ok(())
}
