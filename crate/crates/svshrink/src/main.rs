use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use svshrink::core::{compile_mode, EffectiveParams, ModeDescriptor, RuleKind, ShrinkageRule};
use svshrink::report::{analyze, risk_curve_csv, AnalyzeConfig, DenoiseConfig, DenoiseReport, ParamSource};
use svshrink::sim;
use svshrink::{denoise, estimate, io, Error, Result};

/// Singular value shrinkage for contaminated low-rank matrices.
#[derive(Parser)]
#[command(name = "svshrink", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Shrink the singular values of a CSV matrix.
    Denoise(DenoiseArgs),
    /// Closed-form risk report for a hypothetical setup.
    Analyze(AnalyzeArgs),
    /// Median-matching parameter estimates from a CSV matrix.
    Estimate(EstimateArgs),
    /// Run a Monte Carlo experiment and write its CSV.
    Simulate(SimulateArgs),
}

#[derive(Args)]
struct DenoiseArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    output: PathBuf,
    /// JSON report path; printed to stdout when omitted.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Skip the first input line.
    #[arg(long)]
    header: bool,
    /// shrink | threshold | tsvd:R
    #[arg(long, default_value = "shrink")]
    rule: String,
    #[arg(long)]
    mu_a: Option<f64>,
    #[arg(long)]
    sigma_b: Option<f64>,
    /// Contamination mode as inline JSON or a JSON file path.
    #[arg(long, conflicts_with_all = ["sigma_b", "estimate"])]
    mode: Option<String>,
    /// Estimate σ_B by median matching (and μ_A with --masked).
    #[arg(long, conflicts_with = "sigma_b")]
    estimate: bool,
    /// Estimate μ_A from the fraction of zero entries.
    #[arg(long, requires = "estimate", conflicts_with = "mu_a")]
    masked: bool,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[arg(long)]
    beta: f64,
    #[arg(long)]
    sigma_b: f64,
    #[arg(long, default_value_t = 1.0)]
    mu_a: f64,
    /// Signal singular values, comma separated.
    #[arg(long, value_delimiter = ',')]
    x: Vec<f64>,
    /// Rank for the worst-case constants (defaults to the number of values).
    #[arg(long)]
    rank: Option<usize>,
    /// JSON report path; printed to stdout when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Also write a risk curve CSV.
    #[arg(long)]
    curve: Option<PathBuf>,
    #[arg(long, default_value_t = 6.0)]
    curve_max: f64,
    #[arg(long, default_value_t = 601)]
    curve_points: usize,
}

#[derive(Args)]
struct EstimateArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    header: bool,
    #[arg(long)]
    masked: bool,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SimulateArgs {
    /// displacement | critical-sweep | phase-plane | brute-shrinker
    experiment: String,
    /// JSON config; unspecified fields take their defaults.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Master seed; overrides the config.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    output: PathBuf,
    /// Also write the full structured result as JSON.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Serialize)]
struct ErrorReport<'a> {
    error: &'a str,
    message: String,
}

fn emit_json<T: Serialize>(value: &T, path: Option<&Path>) -> Result<()> {
    let text = serde_json::to_string_pretty(value)? + "\n";
    match path {
        Some(p) => fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn parse_rule(text: &str, params: EffectiveParams) -> Result<ShrinkageRule> {
    let kind = match text {
        "shrink" => RuleKind::OptimalShrinker,
        "threshold" => RuleKind::HardThreshold(svshrink::core::optimal_threshold(&params)),
        other => match other.strip_prefix("tsvd:").map(str::parse::<usize>) {
            Some(Ok(r)) => RuleKind::Tsvd(r),
            _ => {
                return Err(Error::Config(format!(
                    "unknown rule {other:?}; expected shrink, threshold or tsvd:R"
                )))
            }
        },
    };
    Ok(ShrinkageRule::new(kind, params)?)
}

fn parse_mode(text: &str) -> Result<ModeDescriptor> {
    let json = if text.trim_start().starts_with('{') {
        text.to_string()
    } else {
        fs::read_to_string(text)?
    };
    let mode: ModeDescriptor = serde_json::from_str(&json)?;
    mode.validate()?;
    Ok(mode)
}

fn run_denoise(args: DenoiseArgs) -> Result<()> {
    let y = io::read_matrix_file(&args.input, args.header)?;
    let (m, n) = (y.nrows(), y.ncols());
    let beta = m.min(n) as f64 / m.max(n) as f64;
    let mut estimation = None;
    let (params, source) = if let Some(text) = &args.mode {
        let mode = parse_mode(text)?;
        (compile_mode(&mode, beta)?, ParamSource::Mode { mode })
    } else if args.estimate {
        let report = estimate::estimate(&y, args.masked)?;
        let mu_a = report.mu_a_hat.or(args.mu_a).unwrap_or(1.0);
        let params = EffectiveParams::new(mu_a, report.sigma_b_hat, beta)?;
        estimation = Some(report);
        (params, ParamSource::Estimated { masked: args.masked })
    } else {
        let sigma_b = args
            .sigma_b
            .ok_or_else(|| Error::Config("one of --sigma-b, --mode or --estimate is required".into()))?;
        let mu_a = args.mu_a.unwrap_or(1.0);
        (
            EffectiveParams::new(mu_a, sigma_b, beta)?,
            ParamSource::Explicit { mu_a, sigma_b },
        )
    };
    let rule = parse_rule(&args.rule, params)?;
    let out = denoise::denoise(&y, &rule)?;
    io::write_matrix_file(&args.output, &out.estimate)?;
    let config = DenoiseConfig {
        input: args.input.display().to_string(),
        output: args.output.display().to_string(),
        header: args.header,
        rule: args.rule.clone(),
        params: source,
    };
    let report = DenoiseReport::build(config, [m, n], estimation, rule, &out);
    emit_json(&report, args.report.as_deref())
}

fn run_analyze(args: AnalyzeArgs) -> Result<()> {
    let config = AnalyzeConfig {
        beta: args.beta,
        sigma_b: args.sigma_b,
        mu_a: args.mu_a,
        rank: args.rank.unwrap_or(args.x.len().max(1)),
        x: args.x,
    };
    let report = analyze(config)?;
    if let Some(path) = &args.curve {
        let xs = sim::linspace(0.0, args.curve_max, args.curve_points.max(2));
        fs::write(path, risk_curve_csv(&report.params, &xs)?)?;
    }
    emit_json(&report, args.output.as_deref())
}

fn run_estimate(args: EstimateArgs) -> Result<()> {
    let y = io::read_matrix_file(&args.input, args.header)?;
    emit_json(&estimate::estimate(&y, args.masked)?, args.output.as_deref())
}

fn load_config<T: serde::de::DeserializeOwned + Default>(path: Option<&Path>) -> Result<T> {
    match path {
        Some(p) => Ok(serde_json::from_str(&fs::read_to_string(p)?)?),
        None => Ok(T::default()),
    }
}

fn run_simulate(args: SimulateArgs) -> Result<()> {
    let config = args.config.as_deref();
    let seed = |cfg_seed: u64| args.seed.unwrap_or(cfg_seed);
    let (csv, json) = match args.experiment.as_str() {
        "displacement" => {
            let mut cfg: sim::DisplacementConfig = load_config(config)?;
            cfg.seed = seed(cfg.seed);
            let records = sim::run_displacement_check(&cfg)?;
            (sim::records_to_csv(&records)?, serde_json::to_value(&records)?)
        }
        "critical-sweep" => {
            let mut cfg: sim::SweepConfig = load_config(config)?;
            cfg.seed = seed(cfg.seed);
            let result = sim::run_critical_sweep(&cfg)?;
            (result.to_csv()?, serde_json::to_value(&result)?)
        }
        "phase-plane" => {
            let mut cfg: sim::PhaseConfig = load_config(config)?;
            cfg.seed = seed(cfg.seed);
            let cells = sim::run_phase_plane(&cfg)?;
            (sim::phase_to_csv(&cells)?, serde_json::to_value(&cells)?)
        }
        "brute-shrinker" => {
            let mut cfg: sim::BruteConfig = load_config(config)?;
            cfg.seed = seed(cfg.seed);
            let rows = sim::brute_force_shrinker(&cfg)?;
            (sim::brute_to_csv(&rows)?, serde_json::to_value(&rows)?)
        }
        other => return Err(Error::UnknownExperiment(other.to_string())),
    };
    fs::write(&args.output, csv)?;
    if let Some(path) = &args.json {
        emit_json(&json, Some(path))?;
    }
    Ok(())
}

fn fail(code: &str, message: String) -> ExitCode {
    let report = ErrorReport { error: code, message };
    eprintln!("{}", serde_json::to_string(&report).expect("error report serializes"));
    ExitCode::FAILURE
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                e.exit();
            }
            return fail("usage", e.to_string().trim_end().to_string());
        }
    };
    let result = match cli.command {
        Command::Denoise(a) => run_denoise(a),
        Command::Analyze(a) => run_analyze(a),
        Command::Estimate(a) => run_estimate(a),
        Command::Simulate(a) => run_simulate(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(e.code(), e.to_string()),
    }
}
