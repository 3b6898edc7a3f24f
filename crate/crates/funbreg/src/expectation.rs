//! Expected divergence over finite ensembles and its minimizer.
//!
//! For an ensemble `{(fᵢ, pᵢ)}` the objective is
//! `J(g) = Σ pᵢ d_φ[fᵢ, g]`. The probability-weighted mean `ḡ = Σ pᵢ fᵢ`
//! minimizes `J` whenever it is admissible; [`verify_mean_minimizer`]
//! probes that claim with random perturbations and [`descend_to_minimizer`]
//! recovers the minimizer by projected gradient descent on the analytic
//! variation `δJ[g; a] = −Σ pᵢ δ²φ[g; fᵢ − g, a]`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::bregman::divergence;
use crate::error::{Error, Result};
use crate::functionals::Functional;
use crate::measure::GridFunction;
use crate::rng::CounterRng;

#[cfg(not(feature = "std"))]
#[allow(unused_imports)]
use num_traits::Float;

/// A finite set of admissible functions with probabilities summing to one.
#[derive(Debug, Clone)]
pub struct Ensemble {
    members: Vec<GridFunction>,
    probs: Vec<f64>,
}

impl Ensemble {
    pub fn new(members: Vec<GridFunction>, probs: Vec<f64>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::InvalidArgument("ensemble needs members".into()));
        }
        if members.len() != probs.len() {
            return Err(Error::InvalidArgument(format!(
                "{} members vs {} probabilities",
                members.len(),
                probs.len()
            )));
        }
        let space = members[0].space();
        for (i, m) in members.iter().enumerate() {
            if !space.is_compatible(m.space()) {
                return Err(Error::IncompatibleSpace(format!(
                    "member {i} lives on a different space"
                )));
            }
            if !m.is_nonnegative() {
                return Err(Error::DomainViolation(format!(
                    "member {i} leaves the admissible cone"
                )));
            }
        }
        if probs.iter().any(|&p| !(p > 0.0)) {
            return Err(Error::InvalidArgument(
                "probabilities must be positive".into(),
            ));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidArgument(format!(
                "probabilities sum to {total}, not 1"
            )));
        }
        Ok(Self { members, probs })
    }

    /// Equal-probability ensemble.
    pub fn uniform(members: Vec<GridFunction>) -> Result<Self> {
        let p = 1.0 / members.len().max(1) as f64;
        let probs = vec![p; members.len()];
        Self::new(members, probs)
    }

    pub fn members(&self) -> &[GridFunction] {
        &self.members
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// `ḡ = Σ pᵢ fᵢ`, pointwise.
pub fn ensemble_mean(e: &Ensemble) -> GridFunction {
    let mut acc = GridFunction::constant(e.members[0].space(), 0.0);
    for (m, &p) in e.members.iter().zip(&e.probs) {
        acc = acc.axpy(p, m).expect("members share one space");
    }
    acc
}

/// `J(g) = Σ pᵢ d_φ[fᵢ, g]`. Infinite divergences propagate into the sum.
pub fn expected_divergence<P: Functional + ?Sized>(
    phi: &P,
    e: &Ensemble,
    g: &GridFunction,
) -> Result<f64> {
    let mut acc = 0.0;
    for (m, &p) in e.members.iter().zip(&e.probs) {
        acc += p * divergence(phi, m, g)?.value;
    }
    Ok(acc)
}

/// Outcome of the perturbation probe around the ensemble mean.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanMinimizerReport {
    /// `J(ḡ)`.
    pub mean_objective: f64,
    /// Smallest objective seen over all perturbed points.
    pub min_perturbed_objective: f64,
    /// Whether `J(ḡ) <= J(ḡ + εη) + 1e−12` held for every trial.
    pub pass: bool,
}

/// Tolerance for accepting the mean as no worse than a perturbed point.
pub const MINIMIZER_SLACK: f64 = 1e-12;

/// Evaluates `J` at the ensemble mean and at `trials` random admissible
/// perturbations `ḡ + ε·η` with `‖η‖_∞ = 1`, keeping every perturbed point
/// inside the admissible cone and the functional's derivative domain.
pub fn verify_mean_minimizer<P: Functional + ?Sized>(
    phi: &P,
    e: &Ensemble,
    trials: usize,
    eps: f64,
    seed: u64,
) -> Result<MeanMinimizerReport> {
    if !(eps > 0.0) {
        return Err(Error::InvalidArgument("eps must be positive".into()));
    }
    let mean = ensemble_mean(e);
    if !phi.guard_ok(&mean) {
        return Err(Error::DomainViolation(
            "ensemble mean lies outside the derivative domain".into(),
        ));
    }
    let mean_objective = expected_divergence(phi, e, &mean)?;
    let floor = phi.descent_floor();
    let mut rng = CounterRng::new(seed);
    let mut min_perturbed = f64::INFINITY;
    let mut pass = true;
    for _ in 0..trials {
        let mut dir: Vec<f64> = (0..mean.len()).map(|_| rng.next_range(-1.0, 1.0)).collect();
        let peak = dir.iter().fold(0.0f64, |m, &v| m.max(v.abs()));
        if peak == 0.0 {
            continue;
        }
        for (v, &m) in dir.iter_mut().zip(mean.values()) {
            *v /= peak;
            // Sign flips preserve ‖η‖_∞ while keeping the point admissible.
            if m + eps * *v < floor {
                *v = v.abs();
            }
        }
        let eta = GridFunction::new(mean.space(), dir)?;
        let perturbed = mean.axpy(eps, &eta)?;
        let objective = expected_divergence(phi, e, &perturbed)?;
        min_perturbed = min_perturbed.min(objective);
        if mean_objective > objective + MINIMIZER_SLACK {
            pass = false;
        }
    }
    Ok(MeanMinimizerReport {
        mean_objective,
        min_perturbed_objective: min_perturbed,
        pass,
    })
}

const ARMIJO_C: f64 = 1e-4;
const MIN_STEP: f64 = 1e-14;

/// Projected gradient descent on the node values of `g`, using the analytic
/// variation of the expected divergence. Projection clamps values to the
/// functional's floor (0 for the quadratic generators, a small positive
/// level for entropy). Stops when an accepted step moves the iterate by less
/// than `tol` in sup norm, or after `max_iters` iterations.
pub fn descend_to_minimizer<P: Functional + ?Sized>(
    phi: &P,
    e: &Ensemble,
    init: &GridFunction,
    max_iters: usize,
    tol: f64,
) -> Result<GridFunction> {
    if !phi.guard_ok(init) {
        return Err(Error::DomainViolation(
            "initial point lies outside the derivative domain".into(),
        ));
    }
    let floor = phi.descent_floor();
    let weights: Vec<f64> = init.space().weights().to_vec();
    let mut g = init.map(|v| v.max(floor));
    let mut objective = expected_divergence(phi, e, &g)?;
    let mut rises = 0u32;

    for _ in 0..max_iters {
        // δJ[g; a] = −Σ pᵢ δ²φ[g; fᵢ−g, a]; nodewise gradient is the Riesz
        // density times the quadrature weight.
        let mut density = GridFunction::constant(g.space(), 0.0);
        for (m, &p) in e.members().iter().zip(e.probs()) {
            let pull = m.sub(&g)?;
            density = density.axpy(-p, &phi.second_variation_density(&g, &pull)?)?;
        }
        let gradient: Vec<f64> = density
            .values()
            .iter()
            .zip(&weights)
            .map(|(&d, &w)| d * w)
            .collect();

        let mut accepted: Option<(GridFunction, f64)> = None;
        let mut alpha = 1.0;
        while alpha >= MIN_STEP {
            let values: Vec<f64> = g
                .values()
                .iter()
                .zip(&gradient)
                .map(|(&v, &dj)| (v - alpha * dj).max(floor))
                .collect();
            let candidate = GridFunction::new(g.space(), values)?;
            let moved: f64 = candidate
                .values()
                .iter()
                .zip(g.values())
                .zip(&gradient)
                .map(|((&c, &v), &dj)| dj * (c - v))
                .sum();
            let next = expected_divergence(phi, e, &candidate)?;
            if next <= objective + ARMIJO_C * moved {
                accepted = Some((candidate, next));
                break;
            }
            alpha *= 0.5;
        }

        let Some((candidate, next)) = accepted else {
            // No step produced sufficient decrease: the gradient is
            // numerically zero and the iterate is stationary.
            return Ok(g);
        };
        if next > objective {
            rises += 1;
            if rises >= 10 {
                return Err(Error::NumericFailure(
                    "objective rose on 10 consecutive accepted steps".into(),
                ));
            }
        } else {
            rises = 0;
        }
        let shift = candidate
            .values()
            .iter()
            .zip(g.values())
            .fold(0.0f64, |m, (&c, &v)| m.max((c - v).abs()));
        g = candidate;
        objective = next;
        if shift < tol {
            return Ok(g);
        }
    }
    Ok(g)
}
