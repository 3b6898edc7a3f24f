//! Seeded verification suites.
//!
//! Each suite draws its own random instances from a [`CounterRng`] keyed by
//! the caller's seed, exercises one slice of the library against an
//! independent route (closed forms, finite differences, brute quadrature, or
//! algebraic identities), and reports per-check outcomes. Identical seeds
//! reproduce identical reports.

mod case_study;
mod properties;
mod theorem;

pub use case_study::case_study;
pub use properties::{
    appendix_properties, derivative_consistency, dirac_equivalence, pointwise_equivalence,
};
pub use theorem::mean_minimizer;

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::measure::{GridFunction, MeasureSpace};
use crate::rng::CounterRng;

/// Node count of the test grid used by every suite.
pub const SUITE_GRID_CELLS: usize = 64;

/// How one check compares its observation against its bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// Pass when `observed <= bound` (residuals, violations, gaps).
    AtMost,
    /// Pass when `observed >= bound` (separation margins).
    AtLeast,
}

/// Result of one named check.
#[derive(Debug, Clone)]
pub struct CheckItem {
    pub name: String,
    pub observed: f64,
    pub bound: f64,
    pub direction: Direction,
    pub pass: bool,
}

impl CheckItem {
    fn at_most(name: impl Into<String>, observed: f64, bound: f64) -> Self {
        Self {
            name: name.into(),
            observed,
            bound,
            direction: Direction::AtMost,
            pass: observed <= bound,
        }
    }

    fn at_least(name: impl Into<String>, observed: f64, bound: f64) -> Self {
        Self {
            name: name.into(),
            observed,
            bound,
            direction: Direction::AtLeast,
            pass: observed >= bound,
        }
    }
}

/// A suite's worth of check results.
#[derive(Debug, Clone)]
pub struct CheckReport {
    pub suite: String,
    pub items: Vec<CheckItem>,
}

impl CheckReport {
    fn new(suite: impl Into<String>) -> Self {
        Self {
            suite: suite.into(),
            items: Vec::new(),
        }
    }

    fn push(&mut self, item: CheckItem) {
        self.items.push(item);
    }

    pub fn passed(&self) -> bool {
        self.items.iter().all(|i| i.pass)
    }
}

pub(crate) fn suite_grid() -> Arc<MeasureSpace> {
    MeasureSpace::interval(0.0, 1.0, SUITE_GRID_CELLS).expect("static grid parameters")
}

/// Random function with values in `[lo, hi]`; strictly positive `lo` keeps
/// it inside every derivative domain.
pub(crate) fn random_positive(
    rng: &mut CounterRng,
    space: &Arc<MeasureSpace>,
    lo: f64,
    hi: f64,
) -> GridFunction {
    let values: Vec<f64> = (0..space.len()).map(|_| rng.next_range(lo, hi)).collect();
    GridFunction::new(space, values).expect("lengths match by construction")
}

/// Random signed direction with values in `[-1, 1]`.
pub(crate) fn random_direction(rng: &mut CounterRng, space: &Arc<MeasureSpace>) -> GridFunction {
    random_positive(rng, space, -1.0, 1.0)
}
