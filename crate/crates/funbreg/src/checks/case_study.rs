//! Case-study suite: closed-form estimator scales recovered by numeric
//! minimization, normalization and projection identities, and the stability
//! of the posterior-mean scale at large sample sizes.

use alloc::vec::Vec;

use crate::error::Result;
use crate::numeric::{golden_section_min, integrate_adaptive};
use crate::rng::CounterRng;
use crate::uniform::{
    bayes_parameter, bayes_uniform_restricted, bayes_unrestricted, project_to_uniform,
    restricted_objective, unrestricted_sq_error, GammaPrior, Metric, Sample,
};

use super::{CheckItem, CheckReport};

#[cfg(not(feature = "std"))]
#[allow(unused_imports)]
use num_traits::Float;

pub const CASE_STUDY_SAMPLE_SIZES: [usize; 5] = [1, 2, 5, 10, 50];

const MINIMIZER_REL_TOL: f64 = 1e-6;
const NORMALIZATION_TOL: f64 = 1e-6;
const CLOSED_FORM_REL_TOL: f64 = 1e-8;
const GOLDEN_TOL: f64 = 1e-10;

/// Synthetic sample with a prescribed size and maximum.
fn sample_with(n: usize, x_max: f64) -> Result<Sample> {
    let points: Vec<f64> = (1..=n).map(|i| x_max * i as f64 / n as f64).collect();
    Sample::new(points)
}

pub fn case_study(seed: u64) -> Result<CheckReport> {
    let mut report = CheckReport::new("case-study");
    let mut rng = CounterRng::keyed(seed, &[6]);

    let mut worst_lebesgue = 0.0f64;
    let mut worst_fisher = 0.0f64;
    let mut worst_projection = 0.0f64;
    let mut worst_coincidence = 0.0f64;
    let mut worst_normalization = 0.0f64;
    let mut worst_closed_form = 0.0f64;

    for &n in &CASE_STUDY_SAMPLE_SIZES {
        let x = rng.next_range(0.4, 1.3);
        let s = sample_with(n, x)?;
        let nf = n as f64;

        // Numeric minimization of the restricted risk against the closed
        // forms, both differential elements.
        let found = golden_section_min(
            |b| restricted_objective(b, &s, Metric::Lebesgue).unwrap_or(f64::INFINITY),
            x,
            10.0 * x,
            GOLDEN_TOL,
        )?;
        let expected = bayes_uniform_restricted(&s, Metric::Lebesgue).scale();
        worst_lebesgue = worst_lebesgue.max((found - expected).abs() / expected);

        let found = golden_section_min(
            |b| restricted_objective(b, &s, Metric::Fisher).unwrap_or(f64::INFINITY),
            x,
            10.0 * x,
            GOLDEN_TOL,
        )?;
        let expected = bayes_uniform_restricted(&s, Metric::Fisher).scale();
        worst_fisher = worst_fisher.max((found - expected).abs() / expected);

        // Squared-error projection of the unrestricted density, numerically.
        let density = bayes_unrestricted(&s);
        let found = golden_section_min(
            |a| unrestricted_sq_error(&density, a).unwrap_or(f64::INFINITY),
            x,
            10.0 * x,
            GOLDEN_TOL,
        )?;
        let projected = project_to_uniform(&density).scale();
        worst_projection = worst_projection.max((found - projected).abs() / projected);

        // The projection coincides with the Fisher-restricted scale exactly.
        let restricted = bayes_uniform_restricted(&s, Metric::Fisher).scale();
        worst_coincidence = worst_coincidence.max((projected - restricted).abs());

        // ∫ g* = 1: plateau + numeric mid-range + exact power tail
        // ∫_far^∞ c0 (x/t)^{n+1} dt = c0·x·(x/far)^n / n.
        let far = 1000.0 * x;
        let c0 = density.plateau();
        let plateau = c0 * x;
        let mid = integrate_adaptive(|t| density.density(t), x, far, 1e-12)?;
        let tail = c0 * x / nf * (nf * (x / far).ln()).exp();
        worst_normalization = worst_normalization.max((plateau + mid + tail - 1.0).abs());

        // Lebesgue closed form against brute quadrature of the defining
        // integrand, at a few random scales.
        for _ in 0..4 {
            let b = rng.next_range(0.5 * x, 4.0 * x);
            let closed = restricted_objective(b, &s, Metric::Lebesgue)?;
            let integrand = |a: f64| (b - a).abs() / (a * b) * (-(nf + 1.5) * a.ln()).exp();
            let cut = 50.0 * b.max(x);
            let mut quad = if b > x {
                integrate_adaptive(integrand, x, b, 1e-12)?
                    + integrate_adaptive(integrand, b, cut, 1e-12)?
            } else {
                integrate_adaptive(integrand, x, cut, 1e-12)?
            };
            let p = nf + 0.5;
            let q = nf + 1.5;
            quad += cut.powf(-p) / (b * p) - cut.powf(-q) / q;
            worst_closed_form =
                worst_closed_form.max((closed - quad).abs() / quad.abs().max(1e-300));
        }
    }

    report.push(CheckItem::at_most(
        "lebesgue minimizer matches closed form",
        worst_lebesgue,
        MINIMIZER_REL_TOL,
    ));
    report.push(CheckItem::at_most(
        "fisher minimizer matches closed form",
        worst_fisher,
        MINIMIZER_REL_TOL,
    ));
    report.push(CheckItem::at_most(
        "projection minimizer matches closed form",
        worst_projection,
        MINIMIZER_REL_TOL,
    ));
    report.push(CheckItem::at_most(
        "projection coincides with fisher-restricted",
        worst_coincidence,
        0.0,
    ));
    report.push(CheckItem::at_most(
        "unrestricted density normalizes",
        worst_normalization,
        NORMALIZATION_TOL,
    ));
    report.push(CheckItem::at_most(
        "lebesgue objective matches quadrature",
        worst_closed_form,
        CLOSED_FORM_REL_TOL,
    ));

    // Posterior-mean scale: strictly above X_max, finite far beyond the
    // sample sizes where naive evaluation underflows, and tightening toward
    // X_max as n grows.
    let mut min_margin = f64::INFINITY;
    for _ in 0..10 {
        let n = 1 + (rng.next_u64() % 50) as usize;
        let x = rng.next_range(0.3, 1.2);
        let s = sample_with(n, x)?;
        let prior = GammaPrior::new(rng.next_range(0.5, 2.0), rng.next_range(0.5, 3.0))?;
        let theta = bayes_parameter(&s, &prior)?;
        min_margin = min_margin.min(theta - s.x_max());
    }
    report.push(CheckItem::at_least(
        "posterior-mean scale exceeds the sample maximum",
        min_margin,
        1e-12,
    ));

    let prior = GammaPrior::new(1.0, 1.0)?;
    let big = bayes_parameter(&sample_with(1000, 0.99)?, &prior)?;
    report.push(CheckItem::at_least(
        "posterior-mean scale finite at n = 1000",
        if big.is_finite() {
            big - 0.99
        } else {
            f64::NEG_INFINITY
        },
        1e-12,
    ));

    let mut gaps = f64::INFINITY;
    let mut last = f64::INFINITY;
    for n in [10usize, 100, 1000] {
        let theta = bayes_parameter(&sample_with(n, 0.8)?, &prior)?;
        if last.is_finite() {
            gaps = gaps.min(last - theta);
        }
        last = theta;
        gaps = gaps.min(theta - 0.8);
    }
    report.push(CheckItem::at_least(
        "posterior-mean scale tightens monotonically",
        gaps,
        0.0,
    ));

    Ok(report)
}
