//! Subcommand surface.
//!
//! Exit codes: 0 success, 1 failed checks / runtime errors, 2 usage errors.

use std::ffi::OsString;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};

use funbreg::checks::{
    appendix_properties, case_study, derivative_consistency, dirac_equivalence, mean_minimizer,
    pointwise_equivalence, CheckReport, Direction,
};
use funbreg::{
    bayes_parameter, bayes_uniform_restricted, bayes_unrestricted, divergence, mle, Functional,
    GammaPrior, MeasureSpace, Metric, NegativeEntropy, Sample, SquaredBias, TotalSquaredDifference,
};

use crate::config::parse_config;
use crate::files::{grid_function_from_pairs, read_function_file, read_samples_file};
use crate::sim::{run_simulation, write_csv};
use crate::Result;

/// Seed for `verify` when none is given; any fixed value keeps the suites
/// reproducible.
const DEFAULT_VERIFY_SEED: u64 = 42;

#[derive(Parser)]
#[command(
    name = "funbreg",
    version,
    about = "Functional Bregman divergences: divergence evaluation, verification suites, \
             uniform-distribution estimators, and the Monte Carlo comparison harness"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a Bregman divergence between two grid functions.
    Divergence(DivergenceArgs),
    /// Run a verification suite; exits nonzero if any check fails.
    Verify(VerifyArgs),
    /// Estimate a scaled uniform distribution from a sample file.
    Estimate(EstimateArgs),
    /// Run the Monte Carlo estimator comparison and write a CSV.
    Simulate(SimulateArgs),
}

#[derive(Args)]
struct DivergenceArgs {
    /// Generator functional.
    #[arg(long, value_enum)]
    phi: PhiKind,
    /// Function file for the first argument (x,value per line).
    #[arg(long)]
    f: PathBuf,
    /// Function file for the second argument.
    #[arg(long)]
    g: PathBuf,
    /// Midpoint grid as a,b,cells; both files must be sampled on it.
    #[arg(long)]
    grid: String,
}

#[derive(Clone, Copy, ValueEnum)]
enum PhiKind {
    Tsd,
    Bias,
    Entropy,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_enum)]
    suite: SuiteKind,
    /// Seed for the random instances.
    #[arg(long, default_value_t = DEFAULT_VERIFY_SEED)]
    seed: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteKind {
    /// Divergence properties, derivative oracles, and both equivalence
    /// bridges.
    Properties,
    /// Mean-minimizer verification and descent.
    Theorem,
    /// Uniform-estimation closed forms.
    CaseStudy,
}

#[derive(Args)]
struct EstimateArgs {
    #[arg(long, value_enum)]
    estimator: EstimatorArg,
    /// Sample file: one positive draw per line.
    #[arg(long)]
    samples: PathBuf,
    /// Gamma prior shape (bayes-param only).
    #[arg(long, default_value_t = 1.0)]
    t1: f64,
    /// Gamma prior scale (bayes-param only).
    #[arg(long, default_value_t = 1.0)]
    t2: f64,
    /// Differential element for the restricted estimate.
    #[arg(long, value_enum, default_value_t = MetricArg::Fisher)]
    metric: MetricArg,
}

#[derive(Clone, Copy, ValueEnum)]
enum EstimatorArg {
    Mle,
    BayesParam,
    Restricted,
    Unrestricted,
}

#[derive(Clone, Copy, ValueEnum)]
enum MetricArg {
    Fisher,
    Lebesgue,
}

#[derive(Args)]
struct SimulateArgs {
    /// key=value config file; missing keys use the defaults.
    #[arg(long)]
    config: PathBuf,
    /// Output CSV path.
    #[arg(long)]
    out: PathBuf,
}

/// Parses `argv` and runs the selected subcommand, returning the process
/// exit code.
pub fn dispatch<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            // Usage problems exit 2; --help and --version exit 0.
            let code = e.exit_code();
            let _ = e.print();
            return code;
        }
    };
    let outcome = match cli.command {
        Command::Divergence(args) => run_divergence(args),
        Command::Verify(args) => run_verify(args),
        Command::Estimate(args) => run_estimate(args),
        Command::Simulate(args) => run_simulate(args),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn parse_grid(spec: &str) -> Result<Arc<MeasureSpace>> {
    let parts: Vec<&str> = spec.split(',').collect();
    let bad = || crate::CliError::Config(format!("--grid expects a,b,cells; got {spec:?}"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let a: f64 = parts[0].trim().parse().map_err(|_| bad())?;
    let b: f64 = parts[1].trim().parse().map_err(|_| bad())?;
    let cells: usize = parts[2].trim().parse().map_err(|_| bad())?;
    MeasureSpace::interval(a, b, cells).map_err(crate::CliError::Core)
}

fn run_divergence(args: DivergenceArgs) -> Result<i32> {
    let space = parse_grid(&args.grid)?;
    let f = grid_function_from_pairs(&space, &read_function_file(&args.f)?, &args.f)?;
    let g = grid_function_from_pairs(&space, &read_function_file(&args.g)?, &args.g)?;
    let (name, phi): (&str, &dyn Functional) = match args.phi {
        PhiKind::Tsd => ("tsd", &TotalSquaredDifference),
        PhiKind::Bias => ("bias", &SquaredBias),
        PhiKind::Entropy => ("entropy", &NegativeEntropy),
    };
    let report = divergence(phi, &f, &g)?;
    println!(
        "{}",
        serde_json::json!({
            "phi": name,
            "value": json_real(report.value),
            "phi_f": json_real(report.phi_f),
            "phi_g": json_real(report.phi_g),
            "first_variation_term": json_real(report.first_variation_term),
        })
    );
    Ok(0)
}

/// JSON has no infinities; encode them as strings.
fn json_real(x: f64) -> serde_json::Value {
    if x.is_finite() {
        serde_json::json!(x)
    } else {
        serde_json::json!(x.to_string())
    }
}

fn run_verify(args: VerifyArgs) -> Result<i32> {
    let reports: Vec<CheckReport> = match args.suite {
        SuiteKind::Properties => vec![
            appendix_properties(args.seed)?,
            derivative_consistency(args.seed)?,
            dirac_equivalence(args.seed)?,
            pointwise_equivalence(args.seed)?,
        ],
        SuiteKind::Theorem => vec![mean_minimizer(args.seed)?],
        SuiteKind::CaseStudy => vec![case_study(args.seed)?],
    };
    let mut all_pass = true;
    for report in &reports {
        for item in &report.items {
            let relation = match item.direction {
                Direction::AtMost => "<=",
                Direction::AtLeast => ">=",
            };
            println!(
                "[{}] {}: {:.3e} (need {relation} {:.1e}) ... {}",
                report.suite,
                item.name,
                item.observed,
                item.bound,
                if item.pass { "ok" } else { "FAIL" }
            );
            all_pass &= item.pass;
        }
    }
    Ok(if all_pass { 0 } else { 1 })
}

fn run_estimate(args: EstimateArgs) -> Result<i32> {
    let sample = Sample::new(read_samples_file(&args.samples)?)?;
    match args.estimator {
        EstimatorArg::Mle => println!("scale {:?}", mle(&sample).scale()),
        EstimatorArg::Restricted => {
            let metric = match args.metric {
                MetricArg::Fisher => Metric::Fisher,
                MetricArg::Lebesgue => Metric::Lebesgue,
            };
            println!(
                "scale {:?}",
                bayes_uniform_restricted(&sample, metric).scale()
            );
        }
        EstimatorArg::BayesParam => {
            let prior = GammaPrior::new(args.t1, args.t2)?;
            println!("theta {:?}", bayes_parameter(&sample, &prior)?);
        }
        EstimatorArg::Unrestricted => {
            let d = bayes_unrestricted(&sample);
            println!("n {}", d.n());
            println!("x_max {:?}", d.x_max());
        }
    }
    Ok(0)
}

fn run_simulate(args: SimulateArgs) -> Result<i32> {
    let text = std::fs::read_to_string(&args.config).map_err(|source| crate::CliError::Io {
        path: args.config.display().to_string(),
        source,
    })?;
    let cfg = parse_config(&text, &args.config.display().to_string())?;
    let report = run_simulation(&cfg)?;
    write_csv(&report.records, &args.out)?;
    for failure in &report.failures {
        eprintln!(
            "warning: {} failed {} of {} runs at n = {}",
            failure.estimator, failure.failed_runs, cfg.runs, failure.n
        );
    }
    println!(
        "wrote {} records to {}",
        report.records.len(),
        args.out.display()
    );
    Ok(0)
}
