//! The mean-minimizer suite: random ensembles, perturbation probes around
//! the mean, gradient descent back to it, and global optimality sampling.

use alloc::format;
use alloc::vec::Vec;

use crate::error::Result;
use crate::expectation::{
    descend_to_minimizer, ensemble_mean, expected_divergence, verify_mean_minimizer, Ensemble,
};
use crate::functionals::{Functional, NegativeEntropy, SquaredBias, TotalSquaredDifference};
use crate::rng::CounterRng;

use super::{random_positive, suite_grid, CheckItem, CheckReport};

#[cfg(not(feature = "std"))]
#[allow(unused_imports)]
use num_traits::Float;

pub const ENSEMBLE_MEMBERS: usize = 5;
pub const PERTURBATION_TRIALS: usize = 100;
pub const PERTURBATION_EPS: f64 = 1e-2;
pub const DESCENT_STARTS: usize = 5;
pub const DESCENT_MAX_ITERS: usize = 50_000;
pub const DESCENT_STEP_TOL: f64 = 1e-7;

const MINIMIZER_SLACK: f64 = 1e-12;
const DESCENT_L1_TOL: f64 = 1e-3;
const DESCENT_OBJECTIVE_TOL: f64 = 1e-8;
const GLOBAL_SAMPLES: usize = 500;
const EXCESS_RISK_REL_TOL: f64 = 1e-10;

/// For each shipped generator: the ensemble mean survives 100 random
/// perturbations, projected descent from random starts comes back to it
/// (for the generators whose objective has a unique minimizer; the
/// squared-bias objective depends on `g` only through `∫g`, so for it the
/// descent check is on the objective value), and 500 independent admissible
/// functions never beat it.
pub fn mean_minimizer(seed: u64) -> Result<CheckReport> {
    let mut report = CheckReport::new("mean-minimizer");
    let space = suite_grid();
    let mut rng = CounterRng::keyed(seed, &[5]);

    let functionals: [(&str, &dyn Functional); 3] = [
        ("tsd", &TotalSquaredDifference),
        ("bias", &SquaredBias),
        ("entropy", &NegativeEntropy),
    ];

    for (tag, phi) in functionals {
        let members: Vec<_> = (0..ENSEMBLE_MEMBERS)
            .map(|_| random_positive(&mut rng, &space, 0.2, 2.0))
            .collect();
        let mut probs: Vec<f64> = (0..ENSEMBLE_MEMBERS)
            .map(|_| rng.next_range(0.1, 1.0))
            .collect();
        let total: f64 = probs.iter().sum();
        for p in &mut probs {
            *p /= total;
        }
        let ensemble = Ensemble::new(members, probs)?;
        let mean = ensemble_mean(&ensemble);
        let mean_objective = expected_divergence(phi, &ensemble, &mean)?;

        let probe = verify_mean_minimizer(
            phi,
            &ensemble,
            PERTURBATION_TRIALS,
            PERTURBATION_EPS,
            rng.next_u64(),
        )?;
        report.push(CheckItem::at_most(
            format!("perturbation probe ({tag})"),
            probe.mean_objective - probe.min_perturbed_objective,
            MINIMIZER_SLACK,
        ));

        let mut worst_l1 = 0.0f64;
        let mut worst_objective_gap = 0.0f64;
        for _ in 0..DESCENT_STARTS {
            let init = random_positive(&mut rng, &space, 0.3, 1.8);
            let landed =
                descend_to_minimizer(phi, &ensemble, &init, DESCENT_MAX_ITERS, DESCENT_STEP_TOL)?;
            let l1 = space.lp_norm(&landed.sub(&mean)?, 1.0)?;
            worst_l1 = worst_l1.max(l1);
            let landed_objective = expected_divergence(phi, &ensemble, &landed)?;
            worst_objective_gap =
                worst_objective_gap.max((landed_objective - mean_objective).abs());
        }
        if tag != "bias" {
            report.push(CheckItem::at_most(
                format!("descent lands on the mean ({tag})"),
                worst_l1,
                DESCENT_L1_TOL,
            ));
        }
        report.push(CheckItem::at_most(
            format!("descent objective matches the mean's ({tag})"),
            worst_objective_gap,
            DESCENT_OBJECTIVE_TOL,
        ));

        let mut worst_global = f64::NEG_INFINITY;
        let mut worst_excess = 0.0f64;
        for _ in 0..GLOBAL_SAMPLES {
            let g = random_positive(&mut rng, &space, 0.05, 2.5);
            let objective = expected_divergence(phi, &ensemble, &g)?;
            worst_global = worst_global.max(mean_objective - objective);
            if tag == "tsd" {
                // Bias–variance decomposition: J(g) − J(ḡ) = ‖g − ḡ‖²₂.
                let excess = objective - mean_objective;
                let l2 = space.lp_norm(&g.sub(&mean)?, 2.0)?;
                worst_excess = worst_excess.max((excess - l2 * l2).abs() / (1.0 + excess.abs()));
            }
        }
        report.push(CheckItem::at_most(
            format!("global optimality sampling ({tag})"),
            worst_global,
            MINIMIZER_SLACK,
        ));
        if tag == "tsd" {
            report.push(CheckItem::at_most(
                "excess-risk identity (tsd)",
                worst_excess,
                EXCESS_RISK_REL_TOL,
            ));
        }
    }

    Ok(report)
}
