//! Command-line front end. All file output goes through [`OutputWriter`].

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::alignment::{lex_extreme_t, optimal_score, Alignment, Sense};
use crate::error::{Error, Result};
use crate::experiment::{
    concentration_study, convergence_study, estimate_lambda, sample_pair, theorem1_study,
    theorem2_study,
};
use crate::geometry::{build_set_polygon, rescale_length, CurvatureEstimate};
use crate::io::{ConfigFile, Manifest, OutputWriter, ResolvedConfig};
use crate::scoring::NormReport;

/// Environment variable naming the default output directory.
pub const OUT_ENV: &str = "SCOREGEOM_OUT";
pub const DEFAULT_OUT: &str = "scoregeom-out";

#[derive(Debug, Parser)]
#[command(
    name = "scoregeom",
    version,
    about = "Optimal alignment scores, bi-score polygons and Monte Carlo bound checks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub overrides: Overrides,
}

#[derive(Debug, Clone, Default, Args)]
pub struct Overrides {
    /// TOML config file; built-in defaults apply to missing keys.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Master seed.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Sequence lengths, comma separated and strictly increasing.
    #[arg(long, global = true, value_delimiter = ',')]
    pub n: Option<Vec<usize>>,
    /// Trials per length.
    #[arg(long, global = true)]
    pub trials: Option<usize>,
    /// Output directory [default: $SCOREGEOM_OUT or ./scoregeom-out].
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads; defaults to all cores.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Random (S, T) pairs for `theorem2` and `sample-scoring`.
    #[arg(long, global = true)]
    pub pairs: Option<usize>,
    /// Curvature thresholds, comma separated.
    #[arg(long = "k-grid", global = true, value_delimiter = ',')]
    pub k_grid: Option<Vec<f64>>,
    /// More progress output on stderr.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Optimal score and witness alignment of x and y under S.
    Align,
    /// Extreme T-scores among S-optimal alignments of x and y.
    Extremes,
    /// Polygon of rescaled (S, T) score pairs of x and y.
    Polygon,
    /// Estimate the limiting rescaled optimal score under S.
    Lambda,
    /// Mean convergence and concentration tables under S.
    Converge,
    /// Deviation of T-extremes of S-optimal alignments against the curvature envelope.
    Theorem1,
    /// Curvature law at the x-maximizer for random unit-sphere pairs.
    Theorem2,
    /// Draw scoring functions uniformly from the Frobenius unit sphere.
    SampleScoring,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Align => "align",
            Command::Extremes => "extremes",
            Command::Polygon => "polygon",
            Command::Lambda => "lambda",
            Command::Converge => "converge",
            Command::Theorem1 => "theorem1",
            Command::Theorem2 => "theorem2",
            Command::SampleScoring => "sample-scoring",
        }
    }
}

pub fn resolve_config(overrides: &Overrides) -> Result<ResolvedConfig> {
    let file = match &overrides.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::default(),
    };
    let mut config = file.resolve()?;
    if let Some(seed) = overrides.seed {
        config.master_seed = seed;
    }
    if let Some(n) = &overrides.n {
        config.n_list = n.clone();
    }
    if let Some(trials) = overrides.trials {
        config.trials = trials;
    }
    if let Some(pairs) = overrides.pairs {
        config.pairs = pairs;
    }
    if let Some(k) = &overrides.k_grid {
        config.k_grid = k.clone();
    }
    config.experiment()?;
    Ok(config)
}

fn output_dir(overrides: &Overrides, file: Option<PathBuf>) -> PathBuf {
    overrides
        .out
        .clone()
        .or(file)
        .or_else(|| std::env::var_os(OUT_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT))
}

#[derive(Serialize)]
struct AlignmentOutput {
    x: String,
    y: String,
    score: f64,
    witness: Alignment,
}

#[derive(Serialize)]
struct ExtremesOutput {
    x: String,
    y: String,
    s_opt: f64,
    t_max: f64,
    t_min: f64,
    witness_max: Alignment,
    witness_min: Alignment,
}

#[derive(Serialize)]
struct Theorem1Summary {
    y0_hat: f64,
    k_hat: f64,
    k_used: f64,
    s_change_norm: f64,
    t_change_norm: f64,
    curvature: CurvatureEstimate,
}

#[derive(Serialize)]
struct SampledPair {
    pair: usize,
    s: serde_json::Value,
    t: serde_json::Value,
    s_norms: NormReport,
    t_norms: NormReport,
}

fn execute(command: Command, overrides: &Overrides) -> Result<()> {
    let file_out = match &overrides.config {
        Some(path) => ConfigFile::load(path)?.output_dir,
        None => None,
    };
    let config = resolve_config(overrides)?;
    let experiment = config.experiment()?;
    let dir = output_dir(overrides, file_out);
    let verbose = overrides.verbose > 0;
    let alphabet = experiment.alphabet.clone();
    let (s, t) = (config.scoring_s()?, config.scoring_t()?);
    let sequences = match command {
        Command::Align | Command::Extremes | Command::Polygon => Some(config.sequences()?),
        _ => None,
    };
    let mut out = OutputWriter::new(&dir, Manifest::new(command.name(), &config)?)?;

    match command {
        Command::Align => {
            let (x, y) = sequences.expect("resolved above");
            let (score, witness) = optimal_score(&s, &x, &y)?;
            println!("L = {score}");
            println!("witness = {}", crate::io::format_alignment(&witness));
            let doc = AlignmentOutput {
                x: x.render(&alphabet),
                y: y.render(&alphabet),
                score,
                witness,
            };
            out.write_json("alignment.json", &doc)?;
        }
        Command::Extremes => {
            let (x, y) = sequences.expect("resolved above");
            let hi = lex_extreme_t(&s, &t, &x, &y, Sense::Max)?;
            let lo = lex_extreme_t(&s, &t, &x, &y, Sense::Min)?;
            println!("L_S = {}", hi.s_opt);
            println!("T max = {}", hi.t_extreme);
            println!("T min = {}", lo.t_extreme);
            let doc = ExtremesOutput {
                x: x.render(&alphabet),
                y: y.render(&alphabet),
                s_opt: hi.s_opt,
                t_max: hi.t_extreme,
                t_min: lo.t_extreme,
                witness_max: hi.witness,
                witness_min: lo.witness,
            };
            out.write_json("extremes.json", &doc)?;
        }
        Command::Polygon => {
            let (x, y) = sequences.expect("resolved above");
            let polygon = build_set_polygon(&s, &t, &x, &y, config.angle_tol)?;
            println!("vertices = {}", polygon.len());
            println!("perimeter = {}", polygon.perimeter());
            out.write_json(
                "polygon.json",
                &polygon.to_document(rescale_length(&x, &y), Some(config.master_seed)),
            )?;
        }
        Command::Lambda => {
            let est = estimate_lambda(&s, &experiment)?;
            println!("lambda_hat = {} +/- {}", est.lambda_hat, est.std_err);
            out.write_csv("lambda.csv", &[est])?;
        }
        Command::Converge => {
            let (lambda, records) = convergence_study(&s, &experiment)?;
            out.write_csv("lambda.csv", &[lambda])?;
            out.write_csv("convergence.csv", &records)?;
            out.write_csv("concentration.csv", &concentration_study(&s, &experiment)?)?;
        }
        Command::Theorem1 => {
            let report = theorem1_study(&s, &t, &experiment)?;
            if report.k_hat.is_infinite() {
                eprintln!(
                    "note: curvature estimate is a vertex or unreliable; envelope reported as 0"
                );
            }
            out.write_csv("theorem1.csv", &report.rows)?;
            out.write_csv("trials.csv", &report.trials)?;
            out.write_json(
                "theorem1_summary.json",
                &Theorem1Summary {
                    y0_hat: report.y0_hat,
                    k_hat: report.k_hat,
                    k_used: report.k_used,
                    s_change_norm: report.s_change_norm,
                    t_change_norm: report.t_change_norm,
                    curvature: report.curvature,
                },
            )?;
        }
        Command::Theorem2 => {
            let report = theorem2_study(&alphabet, &experiment, &config.k_grid)?;
            println!("max perimeter = {}", report.max_perimeter);
            out.write_csv("theorem2.csv", &report.rows)?;
            out.write_csv("pairs.csv", &report.pairs)?;
        }
        Command::SampleScoring => {
            let pairs = (0..config.pairs)
                .map(|p| {
                    let (s, t) = sample_pair(&alphabet, config.master_seed, p as u64);
                    Ok(SampledPair {
                        pair: p,
                        s: serde_json::from_str(&s.to_json())?,
                        t: serde_json::from_str(&t.to_json())?,
                        s_norms: s.norms(),
                        t_norms: t.norms(),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            out.write_json("scoring.json", &pairs)?;
        }
    }
    let (path, _) = out.finish()?;
    if verbose {
        eprintln!("wrote {}", path.display());
    }
    Ok(())
}

/// Exit status for an error: 1 for invalid input, 2 for runtime failures.
pub fn exit_status(err: &Error) -> i32 {
    if err.is_validation() {
        1
    } else {
        2
    }
}

/// Parses arguments, runs the command and returns the process exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    let result = match cli.overrides.threads {
        Some(threads) => match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
            Ok(pool) => pool.install(|| execute(cli.command, &cli.overrides)),
            Err(e) => Err(Error::InvalidConfig(format!("thread pool: {e}"))),
        },
        None => execute(cli.command, &cli.overrides),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_status(&e)
        }
    }
}
