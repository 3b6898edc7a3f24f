//! Deterministic Monte Carlo comparison of the uniform-scale estimators.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use funbreg::{
    bayes_parameter, bayes_uniform_restricted, bayes_unrestricted, mle, uniform_sq_error,
    unrestricted_sq_error, CounterRng, GammaPrior, Metric, Sample,
};

use crate::{CliError, Result};

/// Default sample-size grid: roughly log-spaced over 1..=100.
pub const DEFAULT_N_VALUES: [u32; 12] = [1, 2, 3, 5, 7, 10, 15, 22, 33, 47, 68, 100];

/// Default gamma-prior grid for the posterior-mean estimator.
pub const DEFAULT_PRIORS: [(f64, f64); 3] = [(1.0, 1.0), (1.0, 3.0), (1.0, 100.0)];

pub const DEFAULT_RUNS: u32 = 1000;
pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum EstimatorKind {
    Mle,
    BayesParam,
    RestrictedFisher,
    RestrictedLebesgue,
    Unrestricted,
}

impl EstimatorKind {
    pub const ALL: [EstimatorKind; 5] = [
        EstimatorKind::Mle,
        EstimatorKind::BayesParam,
        EstimatorKind::RestrictedFisher,
        EstimatorKind::RestrictedLebesgue,
        EstimatorKind::Unrestricted,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            EstimatorKind::Mle => "mle",
            EstimatorKind::BayesParam => "bayes_param",
            EstimatorKind::RestrictedFisher => "restricted_fisher",
            EstimatorKind::RestrictedLebesgue => "restricted_lebesgue",
            EstimatorKind::Unrestricted => "unrestricted",
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        Self::ALL.iter().copied().find(|e| e.name() == name)
    }
}

impl fmt::Display for EstimatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Harness configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub runs: u32,
    pub n_values: Vec<u32>,
    pub theta_true: f64,
    pub seed: u64,
    pub estimators: Vec<EstimatorKind>,
    pub prior_grid: Vec<GammaPrior>,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            runs: DEFAULT_RUNS,
            n_values: DEFAULT_N_VALUES.to_vec(),
            theta_true: 1.0,
            seed: DEFAULT_SEED,
            estimators: EstimatorKind::ALL.to_vec(),
            prior_grid: DEFAULT_PRIORS
                .iter()
                .map(|&(t1, t2)| GammaPrior::new(t1, t2).expect("static parameters"))
                .collect(),
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if self.runs == 0 {
            return Err(CliError::Config("runs must be >= 1".into()));
        }
        if self.n_values.is_empty() {
            return Err(CliError::Config("n_values must be nonempty".into()));
        }
        if self.n_values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(CliError::Config(
                "n_values must be strictly ascending".into(),
            ));
        }
        if self.n_values[0] == 0 {
            return Err(CliError::Config("n_values must be positive".into()));
        }
        if self.theta_true.is_nan() || self.theta_true <= 0.0 {
            return Err(CliError::Config("theta_true must be positive".into()));
        }
        if self.estimators.is_empty() {
            return Err(CliError::Config("estimators must be nonempty".into()));
        }
        if self.estimators.contains(&EstimatorKind::BayesParam) && self.prior_grid.is_empty() {
            return Err(CliError::Config(
                "bayes_param requires at least one prior".into(),
            ));
        }
        Ok(())
    }
}

/// One averaged cell of the comparison table.
#[derive(Debug, Clone, PartialEq)]
pub struct SimRecord {
    pub n: u32,
    pub estimator: String,
    pub mean_sq_error: f64,
    /// Runs that contributed to the mean.
    pub runs: u32,
}

/// Failures per cell; a run is excluded from its cell's mean when the
/// estimator errors, and counted here instead.
#[derive(Debug, Clone, PartialEq)]
pub struct FailureRecord {
    pub n: u32,
    pub estimator: String,
    pub failed_runs: u32,
}

#[derive(Debug, Clone)]
pub struct SimReport {
    /// Sorted by `(n, estimator)`.
    pub records: Vec<SimRecord>,
    /// One entry per cell that saw at least one failure.
    pub failures: Vec<FailureRecord>,
}

#[derive(Default, Clone, Copy)]
struct Cell {
    sum: f64,
    ok: u32,
    failed: u32,
}

impl Cell {
    fn add(&mut self, outcome: std::result::Result<f64, ()>) {
        match outcome {
            Ok(err) => {
                self.sum += err;
                self.ok += 1;
            }
            Err(()) => self.failed += 1,
        }
    }

    fn mean(&self) -> f64 {
        self.sum / self.ok as f64
    }
}

/// Runs the harness. For each `(n, run)` the draws come from a stream keyed
/// by `(seed, n, run)`, so every estimator sees identical data and cells are
/// independent of which estimators are enabled. The posterior-mean cell
/// reports, for each `n`, the best prior's averaged error.
pub fn run_simulation(cfg: &SimConfig) -> Result<SimReport> {
    cfg.validate()?;
    let mut table: BTreeMap<(u32, String), Cell> = BTreeMap::new();

    for &n in &cfg.n_values {
        let mut cells: BTreeMap<EstimatorKind, Cell> = BTreeMap::new();
        let mut bayes_cells: Vec<Cell> = vec![Cell::default(); cfg.prior_grid.len()];

        for run in 0..cfg.runs {
            let mut rng = CounterRng::keyed(cfg.seed, &[n as u64, run as u64]);
            let points: Vec<f64> = (0..n)
                .map(|_| cfg.theta_true * rng.next_positive_f64())
                .collect();
            let sample = Sample::new(points).expect("draws are positive");

            for &est in &cfg.estimators {
                match est {
                    EstimatorKind::Mle => {
                        let scale = mle(&sample).scale();
                        cells
                            .entry(est)
                            .or_default()
                            .add(sq_err(scale, cfg.theta_true));
                    }
                    EstimatorKind::RestrictedFisher => {
                        let scale = bayes_uniform_restricted(&sample, Metric::Fisher).scale();
                        cells
                            .entry(est)
                            .or_default()
                            .add(sq_err(scale, cfg.theta_true));
                    }
                    EstimatorKind::RestrictedLebesgue => {
                        let scale = bayes_uniform_restricted(&sample, Metric::Lebesgue).scale();
                        cells
                            .entry(est)
                            .or_default()
                            .add(sq_err(scale, cfg.theta_true));
                    }
                    EstimatorKind::Unrestricted => {
                        let density = bayes_unrestricted(&sample);
                        let outcome =
                            unrestricted_sq_error(&density, cfg.theta_true).map_err(|_| ());
                        cells.entry(est).or_default().add(outcome);
                    }
                    EstimatorKind::BayesParam => {
                        for (cell, prior) in bayes_cells.iter_mut().zip(&cfg.prior_grid) {
                            let outcome = bayes_parameter(&sample, prior)
                                .and_then(|theta| uniform_sq_error(theta, cfg.theta_true))
                                .map_err(|_| ());
                            cell.add(outcome);
                        }
                    }
                }
            }
        }

        for (&est, cell) in &cells {
            table.insert((n, est.name().to_string()), *cell);
        }
        if cfg.estimators.contains(&EstimatorKind::BayesParam) {
            // The reported error is the minimum of the per-prior averages.
            let best = bayes_cells
                .iter()
                .filter(|c| c.ok > 0)
                .min_by(|a, b| a.mean().total_cmp(&b.mean()))
                .copied()
                .unwrap_or_default();
            table.insert((n, EstimatorKind::BayesParam.name().to_string()), best);
        }
    }

    let mut records = Vec::with_capacity(table.len());
    let mut failures = Vec::new();
    for ((n, estimator), cell) in table {
        if cell.failed > 0 {
            failures.push(FailureRecord {
                n,
                estimator: estimator.clone(),
                failed_runs: cell.failed,
            });
        }
        records.push(SimRecord {
            n,
            estimator,
            mean_sq_error: cell.mean(),
            runs: cell.ok,
        });
    }
    Ok(SimReport { records, failures })
}

fn sq_err(scale: f64, theta: f64) -> std::result::Result<f64, ()> {
    uniform_sq_error(scale, theta).map_err(|_| ())
}

/// Writes `records` as CSV: header `n,estimator,mean_sq_error,runs`, rows
/// sorted by `(n, estimator)`, floats with 17 significant digits so values
/// round-trip exactly.
pub fn write_csv(records: &[SimRecord], path: &Path) -> Result<()> {
    let mut rows: Vec<&SimRecord> = records.iter().collect();
    rows.sort_by(|a, b| (a.n, &a.estimator).cmp(&(b.n, &b.estimator)));
    let mut out = String::from("n,estimator,mean_sq_error,runs\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{:.16e},{}\n",
            r.n, r.estimator, r.mean_sq_error, r.runs
        ));
    }
    std::fs::write(path, out).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny_config() -> SimConfig {
        SimConfig {
            runs: 8,
            n_values: vec![1, 3, 6],
            ..SimConfig::default()
        }
    }

    #[test]
    fn identical_configs_reproduce_identical_records() {
        let cfg = tiny_config();
        let a = run_simulation(&cfg).unwrap();
        let b = run_simulation(&cfg).unwrap();
        assert_eq!(a.records.len(), b.records.len());
        for (x, y) in a.records.iter().zip(&b.records) {
            assert_eq!(x, y);
        }
    }

    #[test]
    fn records_cover_every_cell_and_account_for_every_run() {
        let cfg = tiny_config();
        let report = run_simulation(&cfg).unwrap();
        assert_eq!(report.records.len(), 3 * EstimatorKind::ALL.len());
        for record in &report.records {
            let failed: u32 = report
                .failures
                .iter()
                .filter(|f| f.n == record.n && f.estimator == record.estimator)
                .map(|f| f.failed_runs)
                .sum();
            assert_eq!(record.runs + failed, cfg.runs, "{}", record.estimator);
            assert!(record.mean_sq_error >= 0.0);
        }
    }

    #[test]
    fn estimator_subsets_share_draws() {
        let mut only_mle = tiny_config();
        only_mle.estimators = vec![EstimatorKind::Mle];
        let full = run_simulation(&tiny_config()).unwrap();
        let partial = run_simulation(&only_mle).unwrap();
        for p in &partial.records {
            let f = full
                .records
                .iter()
                .find(|r| r.n == p.n && r.estimator == p.estimator)
                .unwrap();
            assert_eq!(p.mean_sq_error, f.mean_sq_error);
        }
    }

    #[test]
    fn csv_round_trips_exactly() {
        let cfg = tiny_config();
        let report = run_simulation(&cfg).unwrap();
        let dir = std::env::temp_dir().join("funbreg-sim-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("records.csv");
        write_csv(&report.records, &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("n,estimator,mean_sq_error,runs"));
        let mut parsed = 0usize;
        for (line, record) in lines.zip(&report.records) {
            let fields: Vec<&str> = line.split(',').collect();
            assert_eq!(fields[0].parse::<u32>().unwrap(), record.n);
            assert_eq!(fields[1], record.estimator);
            let value: f64 = fields[2].parse().unwrap();
            assert_eq!(value.to_bits(), record.mean_sq_error.to_bits());
            assert_eq!(fields[3].parse::<u32>().unwrap(), record.runs);
            parsed += 1;
        }
        assert_eq!(parsed, report.records.len());
        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn empty_record_list_writes_header_only() {
        let dir = std::env::temp_dir().join("funbreg-sim-empty");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("empty.csv");
        write_csv(&[], &path).unwrap();
        assert_eq!(
            std::fs::read_to_string(&path).unwrap(),
            "n,estimator,mean_sq_error,runs\n"
        );
        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn config_validation() {
        let cfg = SimConfig {
            runs: 0,
            ..SimConfig::default()
        };
        assert!(run_simulation(&cfg).is_err());
        let cfg = SimConfig {
            n_values: vec![3, 3],
            ..SimConfig::default()
        };
        assert!(run_simulation(&cfg).is_err());
        let cfg = SimConfig {
            prior_grid: vec![],
            ..SimConfig::default()
        };
        assert!(run_simulation(&cfg).is_err());
    }
}
