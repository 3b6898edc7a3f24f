//! Functional Bregman divergences on discretized measure spaces.
//!
//! A Bregman divergence compares two nonnegative functions `f`, `g` through a
//! strictly convex functional `φ`:
//!
//! ```text
//! d_φ[f, g] = φ[f] − φ[g] − δφ[g; f − g]
//! ```
//!
//! where `δφ[g; ·]` is the first variation of `φ` at `g`. This crate carries
//! that definition onto finite measure spaces (quadrature grids and Dirac
//! sums) and ships:
//!
//! - [`measure`]: measure spaces, grid functions, integration and `L^p` norms;
//! - [`functionals`]: total squared difference, squared bias, negative
//!   entropy, functionals built from a pointwise convex scalar map, and a
//!   finite-difference directional-derivative oracle;
//! - [`bregman`]: the divergence itself plus its structural companions —
//!   the vector-divergence bridge over Dirac sums, the generalized
//!   Pythagorean identity, separating hyperplanes, and dual (conjugate)
//!   divergence pairs;
//! - [`expectation`]: finite ensembles of functions and numerical evidence
//!   that the probability-weighted mean minimizes the expected divergence;
//! - [`uniform`]: four estimators of a scaled uniform distribution from
//!   i.i.d. samples, with their closed forms and squared-error metrics;
//! - [`checks`]: seeded, self-contained verification suites over all of the
//!   above, returning structured reports;
//! - [`rng`], [`numeric`]: a counter-based deterministic generator and the
//!   quadrature / line-search kernels everything else leans on.
//!
//! The crate is `no_std`-compatible (`alloc` required): disable default
//! features and enable `libm` to route `f64` transcendentals through libm.

#![cfg_attr(not(feature = "std"), no_std)]
#![forbid(unsafe_code)]
// Negated float comparisons (`!(x > 0.0)`) are deliberate throughout: they
// reject NaN together with the out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

#[cfg(not(any(feature = "std", feature = "libm")))]
compile_error!("funbreg requires either the `std` or the `libm` feature");

pub mod bregman;
pub mod checks;
mod error;
pub mod expectation;
pub mod functionals;
pub mod measure;
pub mod numeric;
pub mod rng;
pub mod uniform;

pub use error::{Error, Result};
pub use measure::{GridFunction, MeasureSpace, SpaceKind};

pub use bregman::{
    dirac_equivalence_gap, divergence, pythagorean_residual, separation_hyperplane, vector_bregman,
    DivergenceReport, LegendrePair, SeparatingHyperplane,
};
pub use expectation::{
    descend_to_minimizer, ensemble_mean, expected_divergence, verify_mean_minimizer, Ensemble,
    MeanMinimizerReport,
};
pub use functionals::{
    gateaux_fd, AffineTilt, Functional, LinearCombination, NegativeEntropy, PointwiseFunctional,
    PointwiseSpec, SquaredBias, TotalSquaredDifference,
};
pub use rng::CounterRng;
pub use uniform::{
    bayes_parameter, bayes_uniform_restricted, bayes_unrestricted, fisher_information, mle,
    project_to_uniform, restricted_objective, uniform_sq_error, unrestricted_sq_error, GammaPrior,
    Metric, Sample, UniformDensity, UnrestrictedDensity,
};
