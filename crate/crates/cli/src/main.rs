//! `hypcob`: obstruction constants, census reports, the spectral-flow lab and
//! connected-sum Tor from the command line.
//!
//! Every command prints JSON on stdout. Exit status is 0 on success, 2 when an
//! input is rejected (domain guards, malformed files, bad flags) and 1 on an
//! internal failure, including a lab campaign that finds a violated bound.

use clap::{Args, Parser, Subcommand, ValueEnum};
use hypcob::floer::{sum_report, FloerError, HMModule};
use hypcob::geometry::BudgetLiteral;
use hypcob::lab::campaign::{run_campaign, CampaignConfig, WeightChoice};
use hypcob::lab::SpectrumShape;
use hypcob::pipeline::{
    census_report, obstruction_report, parse_census, CensusEntry, Config, PipelineError, ReportOptions,
};
use hypcob::spectral_density::WeylConstants;
use serde::{Deserialize, Serialize};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "hypcob", version, about = "Explicit homology-cobordism obstruction constants with validated numerics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Bound 𝔫 (torsion width) or 𝔪 (Fröyshov) for one budget.
    #[command(subcommand)]
    Bound(BoundCommand),
    /// Report every record of a JSON-lines census file, one JSON line per record.
    Census(CensusArgs),
    /// Seeded random campaign over the spectral-flow bounds.
    Lab(LabArgs),
    /// Connected sum of module shapes read from JSON.
    Tor(TorArgs),
}

#[derive(Subcommand)]
enum BoundCommand {
    /// The width constant 𝔫.
    N(BoundArgs),
    /// The Fröyshov constant 𝔪; needs a bound on 𝔣.
    M(BoundArgs),
}

#[derive(Args)]
struct ProfileArgs {
    /// Weyl-constant profile: the built-in `eps0.15` or one from the config file.
    #[arg(long)]
    profile: Option<String>,
    /// Use the profile even when its injectivity radius exceeds the budget's.
    #[arg(long)]
    override_profile: bool,
    /// Skip the volume, injectivity-radius and spectral-gap conventions.
    #[arg(long)]
    unchecked: bool,
    /// Bound on the reducible grading constant 𝔣; overrides the config.
    #[arg(long = "reducible-grading-bound", visible_alias = "f-bound", value_name = "F")]
    f_bound: Option<String>,
    /// TOML file with extra profiles and a default f_bound.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct BoundArgs {
    /// Volume upper bound V.
    #[arg(long)]
    volume: String,
    /// Injectivity-radius lower bound ε.
    #[arg(long)]
    inj: String,
    /// Lower bound δ on the coexact spectral gap λ₁*.
    #[arg(long)]
    lambda1: String,
    /// Diameter upper bound, used when below the one derived from V and ε.
    #[arg(long)]
    diameter: Option<String>,
    #[command(flatten)]
    profile: ProfileArgs,
}

#[derive(Args)]
struct CensusArgs {
    /// JSON-lines file with name, volume, inj_radius and lambda1_lower; `-` reads stdin.
    #[arg(long)]
    input: PathBuf,
    #[command(flatten)]
    profile: ProfileArgs,
}

#[derive(Clone, Copy, ValueEnum)]
enum Weights {
    Flat,
    Sobolev,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum Shape {
    Uniform,
    Weyl,
}

#[derive(Args)]
struct LabArgs {
    #[arg(long, default_value_t = 100)]
    trials: usize,
    /// Largest dimension; dimensions are drawn log-uniformly from 1 up to it.
    #[arg(long = "dim", default_value_t = 100)]
    max_dim: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Weights::Both)]
    weights: Weights,
    /// Largest ‖A‖₂; each instance draws its norm uniformly below it.
    #[arg(long = "norm-target", default_value_t = 5.0)]
    norm_target: f64,
    /// Fixed containment grid; by default chosen so each step has ε̃ ≤ --step-eps.
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long, default_value_t = 0.01)]
    step_eps: f64,
    #[arg(long, value_enum, default_value_t = Shape::Uniform)]
    shape: Shape,
    /// Base eigenvalues lie in [-range, range].
    #[arg(long, default_value_t = 12.0)]
    spectrum_range: f64,
    /// Print only the summary, not one record per instance.
    #[arg(long)]
    summary_only: bool,
}

#[derive(Args)]
struct TorArgs {
    /// JSON: a list of modules `{"tower_bottom": d, "torsion": [n, ...]}`,
    /// or an object with such a list under "modules"; `-` reads stdin.
    #[arg(long)]
    input: PathBuf,
}

#[derive(Debug)]
enum Failure {
    /// Rejected input.
    Guard(String),
    Internal(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Guard(_) => 2,
            Failure::Internal(_) => 1,
        }
    }
}

impl From<PipelineError> for Failure {
    fn from(e: PipelineError) -> Self {
        if e.is_guard() {
            Failure::Guard(e.to_string())
        } else {
            Failure::Internal(e.to_string())
        }
    }
}

impl From<FloerError> for Failure {
    fn from(e: FloerError) -> Self {
        PipelineError::from(e).into()
    }
}

type Outcome = Result<(), Failure>;

fn read_input(path: &Path) -> Result<String, Failure> {
    let text = if path == Path::new("-") {
        std::io::read_to_string(std::io::stdin())
    } else {
        std::fs::read_to_string(path)
    };
    text.map_err(|e| Failure::Guard(format!("cannot read {}: {e}", path.display())))
}

/// Writes one line to stdout; a closed pipe ends output quietly.
fn emit(line: &str) -> Outcome {
    let mut out = std::io::stdout().lock();
    match writeln!(out, "{line}") {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(Failure::Internal(format!("writing output: {e}"))),
        _ => Ok(()),
    }
}

fn print_json<T: Serialize>(value: &T) -> Outcome {
    emit(&serde_json::to_string_pretty(value).map_err(|e| Failure::Internal(e.to_string()))?)
}

/// Profile and report options after merging flags over the config file.
fn resolve(p: &ProfileArgs, diameter: Option<String>) -> Result<(WeylConstants, ReportOptions), Failure> {
    let config = match &p.config {
        Some(path) => Config::load(path).map_err(PipelineError::from)?,
        None => Config::default(),
    };
    let mut w = config.weyl(p.profile.as_deref()).map_err(PipelineError::from)?;
    if p.override_profile {
        w = w.overriding_eps();
    }
    let f_bound = p.f_bound.clone().or(config.f_bound.clone());
    Ok((w, ReportOptions { unchecked: p.unchecked, diameter, f_bound }))
}

fn bound(args: BoundArgs, want_m: bool) -> Outcome {
    let (w, opts) = resolve(&args.profile, args.diameter.clone())?;
    if want_m && opts.f_bound.is_none() {
        return Err(PipelineError::MissingFBound.into());
    }
    let lit = BudgetLiteral { volume: args.volume, eps: args.inj, delta: args.lambda1 };
    print_json(&obstruction_report(None, &lit, &w, &opts)?)
}

fn census(args: CensusArgs) -> Outcome {
    let (w, opts) = resolve(&args.profile, None)?;
    let text = read_input(&args.input)?;
    let entries = census_report(&parse_census(&text), &w, &opts);
    for e in &entries {
        emit(&serde_json::to_string(e).map_err(|e| Failure::Internal(e.to_string()))?)?;
    }
    let internal = entries.iter().any(|e| matches!(e, CensusEntry::Rejected { guard: false, .. }));
    let rejected = entries.iter().filter(|e| matches!(e, CensusEntry::Rejected { .. })).count();
    match (internal, rejected) {
        (true, _) => Err(Failure::Internal("internal failure on some census records".into())),
        (false, 0) => Ok(()),
        (false, n) => Err(Failure::Guard(format!("{n} census record(s) rejected"))),
    }
}

#[derive(Serialize)]
struct LabSummaryOnly<'a> {
    config: &'a CampaignConfig,
    summary: &'a hypcob::lab::campaign::CampaignSummary,
}

fn lab(args: LabArgs) -> Outcome {
    if args.max_dim == 0 {
        return Err(Failure::Guard("--dim must be at least 1".into()));
    }
    if !(args.norm_target > 0.0 && args.norm_target.is_finite()) {
        return Err(Failure::Guard("--norm-target must be positive".into()));
    }
    if !(args.step_eps > 0.0 && args.step_eps < 1.0) {
        return Err(Failure::Guard("--step-eps must lie in (0, 1)".into()));
    }
    if args.steps == Some(0) {
        return Err(Failure::Guard("--steps must be at least 1".into()));
    }
    if !(args.spectrum_range > hypcob::lab::SPECTRAL_GAP && args.spectrum_range.is_finite()) {
        return Err(Failure::Guard("--spectrum-range must exceed the spectral gap".into()));
    }
    let cfg = CampaignConfig {
        trials: args.trials,
        seed: args.seed,
        max_dim: args.max_dim,
        max_norm: args.norm_target,
        spectrum_range: args.spectrum_range,
        weights: match args.weights {
            Weights::Flat => WeightChoice::Flat,
            Weights::Sobolev => WeightChoice::Sobolev,
            Weights::Both => WeightChoice::Both,
        },
        shape: match args.shape {
            Shape::Uniform => SpectrumShape::Uniform,
            Shape::Weyl => SpectrumShape::Weyl,
        },
        steps: args.steps,
        step_eps: args.step_eps,
    };
    let report = run_campaign(&cfg);
    if args.summary_only {
        print_json(&LabSummaryOnly { config: &report.config, summary: &report.summary })?;
    } else {
        print_json(&report)?;
    }
    if report.all_pass() {
        Ok(())
    } else {
        let failed = report.summary.trials - report.summary.passed - report.summary.rejected;
        Err(Failure::Internal(format!("{failed} instance(s) failed a check")))
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum TorInput {
    List(Vec<HMModule>),
    Wrapped { modules: Vec<HMModule> },
}

fn tor(args: TorArgs) -> Outcome {
    let text = read_input(&args.input)?;
    let input: TorInput = serde_json::from_str(&text).map_err(|e| Failure::Guard(format!("module JSON: {e}")))?;
    let modules = match input {
        TorInput::List(m) | TorInput::Wrapped { modules: m } => m,
    };
    let report = sum_report(modules)?;
    print_json(&report)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Bound(BoundCommand::N(a)) => bound(a, false),
        Command::Bound(BoundCommand::M(a)) => bound(a, true),
        Command::Census(a) => census(a),
        Command::Lab(a) => lab(a),
        Command::Tor(a) => tor(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let (Failure::Guard(m) | Failure::Internal(m)) = &f;
            eprintln!("hypcob: {m}");
            ExitCode::from(f.code())
        }
    }
}
