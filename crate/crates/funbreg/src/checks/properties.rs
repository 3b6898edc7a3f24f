//! Structural property suites for the divergence and the derivative oracles.

use alloc::boxed::Box;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::bregman::{
    dirac_equivalence_gap, divergence, pythagorean_residual, separation_hyperplane, LegendrePair,
};
use crate::error::Result;
use crate::functionals::{
    gateaux_fd, AffineTilt, Functional, LinearCombination, NegativeEntropy, PointwiseFunctional,
    PointwiseSpec, SquaredBias, TotalSquaredDifference, FD_REL_STEP,
};
use crate::measure::GridFunction;
use crate::numeric::bisect_root;
use crate::rng::CounterRng;

use super::{random_direction, random_positive, suite_grid, CheckItem, CheckReport};

#[cfg(not(feature = "std"))]
#[allow(unused_imports)]
use num_traits::Float;

/// Random pairs drawn per generator in [`appendix_properties`].
pub const PROPERTY_PAIRS: usize = 200;

const NONNEG_TOL: f64 = 1e-10;
const IDENTITY_TOL: f64 = 1e-12;
const CONVEXITY_TOL: f64 = 1e-10;
const PYTHAGOREAN_TOL: f64 = 1e-9;
const LINEARITY_REL_TOL: f64 = 1e-12;
const AFFINE_REL_TOL: f64 = 1e-12;
const BIAS_L1_BOUND_TOL: f64 = 1e-12;
const DUAL_TSD_REL_TOL: f64 = 1e-10;
const DUAL_ENTROPY_REL_TOL: f64 = 1e-8;
const HYPERPLANE_TOL: f64 = 1e-9;
const SEPARATED_MIN_DIVERGENCE: f64 = 1e-8;
const FIRST_VARIATION_REL_TOL: f64 = 1e-6;

fn shipped() -> [(&'static str, &'static dyn Functional); 3] {
    [
        ("tsd", &TotalSquaredDifference),
        ("bias", &SquaredBias),
        ("entropy", &NegativeEntropy),
    ]
}

fn pointwise_square() -> Result<PointwiseFunctional> {
    PointwiseFunctional::new(PointwiseSpec::new(|x| x * x, |x| 2.0 * x, 0.0, 0.0))
}

fn pointwise_xlnx() -> Result<PointwiseFunctional> {
    PointwiseFunctional::new(PointwiseSpec::new(
        |x| x * x.ln(),
        |x| 1.0 + x.ln(),
        0.0,
        f64::NEG_INFINITY,
    ))
}

/// Non-negativity, identity of indiscernibles, convexity in the first
/// argument, linearity in the generator, affine equivalence classes, the
/// generalized Pythagorean identity, dual divergences, the squared-bias
/// `L¹` bound, and separating hyperplanes — all on random instances.
pub fn appendix_properties(seed: u64) -> Result<CheckReport> {
    let mut report = CheckReport::new("appendix-properties");
    let space = suite_grid();
    let mut rng = CounterRng::keyed(seed, &[1]);

    for (tag, phi) in shipped() {
        let mut worst_nonneg = f64::NEG_INFINITY;
        let mut worst_identity = 0.0f64;
        let mut worst_convexity = f64::NEG_INFINITY;
        let mut worst_pyth = 0.0f64;
        let mut worst_affine = 0.0f64;
        let mut min_separated = f64::INFINITY;

        // Fixed affine shift for the equivalence-class identity.
        let tilt = random_direction(&mut rng, &space);
        let offset = rng.next_range(-2.0, 2.0);
        let shifted = AffineTilt::new(shipped_box(tag), tilt, offset);

        for _ in 0..PROPERTY_PAIRS {
            let f = random_positive(&mut rng, &space, 0.2, 2.0);
            let g = random_positive(&mut rng, &space, 0.2, 2.0);

            let d_fg = divergence(phi, &f, &g)?;
            let scale = 1.0 + d_fg.phi_f.abs() + d_fg.phi_g.abs();
            worst_nonneg = worst_nonneg.max(-d_fg.value / scale);
            if f.sub(&g)?.linf() >= 0.01 {
                min_separated = min_separated.min(d_fg.value);
            }

            let d_ff = divergence(phi, &f, &f)?;
            worst_identity = worst_identity.max(d_ff.value.abs());

            let f2 = random_positive(&mut rng, &space, 0.2, 2.0);
            let mid = f.add(&f2)?.scale(0.5);
            let d_mid = divergence(phi, &mid, &g)?.value;
            let d_f2 = divergence(phi, &f2, &g)?.value;
            worst_convexity = worst_convexity.max(d_mid - 0.5 * (d_fg.value + d_f2));

            let h = random_positive(&mut rng, &space, 0.2, 2.0);
            let (lhs, rhs) = pythagorean_residual(phi, &f, &g, &h)?;
            worst_pyth = worst_pyth.max((lhs - rhs).abs());

            let d_shifted = divergence(&shifted, &f, &g)?.value;
            worst_affine =
                worst_affine.max((d_shifted - d_fg.value).abs() / (1.0 + d_fg.value.abs()));
        }

        report.push(CheckItem::at_most(
            format!("non-negativity ({tag})"),
            worst_nonneg,
            NONNEG_TOL,
        ));
        report.push(CheckItem::at_most(
            format!("identity d(f,f)=0 ({tag})"),
            worst_identity,
            IDENTITY_TOL,
        ));
        report.push(CheckItem::at_least(
            format!("positivity of separated pairs ({tag})"),
            min_separated,
            SEPARATED_MIN_DIVERGENCE,
        ));
        report.push(CheckItem::at_most(
            format!("midpoint convexity in f ({tag})"),
            worst_convexity,
            CONVEXITY_TOL,
        ));
        report.push(CheckItem::at_most(
            format!("pythagorean identity ({tag})"),
            worst_pyth,
            PYTHAGOREAN_TOL,
        ));
        report.push(CheckItem::at_most(
            format!("affine-shift equivalence ({tag})"),
            worst_affine,
            AFFINE_REL_TOL,
        ));
    }

    // Linearity of the divergence in the generator.
    let mut worst_linearity = 0.0f64;
    for _ in 0..PROPERTY_PAIRS {
        let c1 = rng.next_range(0.1, 3.0);
        let c2 = rng.next_range(0.1, 3.0);
        let combo = LinearCombination::new(vec![
            (c1, Box::new(TotalSquaredDifference) as Box<dyn Functional>),
            (c2, Box::new(SquaredBias)),
        ])?;
        let f = random_positive(&mut rng, &space, 0.2, 2.0);
        let g = random_positive(&mut rng, &space, 0.2, 2.0);
        let d_combo = divergence(&combo, &f, &g)?.value;
        let d_sum = c1 * divergence(&TotalSquaredDifference, &f, &g)?.value
            + c2 * divergence(&SquaredBias, &f, &g)?.value;
        worst_linearity = worst_linearity.max((d_combo - d_sum).abs() / (1.0 + d_sum.abs()));
    }
    report.push(CheckItem::at_most(
        "linearity in the generator (tsd, bias)",
        worst_linearity,
        LINEARITY_REL_TOL,
    ));

    // Squared-bias L¹ bound: d[f,g] <= ‖f−g‖₁².
    let mut worst_bias_bound = f64::NEG_INFINITY;
    for _ in 0..PROPERTY_PAIRS {
        let f = random_positive(&mut rng, &space, 0.2, 2.0);
        let g = random_positive(&mut rng, &space, 0.2, 2.0);
        let d = divergence(&SquaredBias, &f, &g)?.value;
        let l1 = space.lp_norm(&f.sub(&g)?, 1.0)?;
        worst_bias_bound = worst_bias_bound.max(d - l1 * l1);
    }
    report.push(CheckItem::at_most(
        "squared-bias L1 bound",
        worst_bias_bound,
        BIAS_L1_BOUND_TOL,
    ));

    // Dual divergences through the conjugate pairs.
    let mut worst_dual_tsd = 0.0f64;
    let mut worst_dual_entropy = 0.0f64;
    for _ in 0..PROPERTY_PAIRS {
        let f = random_positive(&mut rng, &space, 0.2, 2.0);
        let g = random_positive(&mut rng, &space, 0.2, 2.0);

        let primal = divergence(&TotalSquaredDifference, &f, &g)?.value;
        let dual = LegendrePair::total_squared().dual_divergence(&f, &g)?;
        worst_dual_tsd = worst_dual_tsd.max((primal - dual).abs() / (1.0 + primal.abs()));

        let primal = divergence(&NegativeEntropy, &f, &g)?.value;
        let dual = LegendrePair::neg_entropy().dual_divergence(&f, &g)?;
        worst_dual_entropy = worst_dual_entropy.max((primal - dual).abs() / (1.0 + primal.abs()));
    }
    report.push(CheckItem::at_most(
        "dual divergence (tsd)",
        worst_dual_tsd,
        DUAL_TSD_REL_TOL,
    ));
    report.push(CheckItem::at_most(
        "dual divergence (entropy)",
        worst_dual_entropy,
        DUAL_ENTROPY_REL_TOL,
    ));

    // Separating hyperplanes: construct an equidistant function, then check
    // it satisfies the linear equation.
    for (tag, phi) in shipped() {
        let mut worst = 0.0f64;
        let mut found = 0usize;
        for _ in 0..10 * PROPERTY_PAIRS {
            if found == PROPERTY_PAIRS {
                break;
            }
            let g1 = random_positive(&mut rng, &space, 0.2, 2.0);
            let g2 = random_positive(&mut rng, &space, 0.2, 2.0);
            if g1.values() == g2.values() {
                continue;
            }
            let equidistant = if tag == "bias" {
                equidistant_by_scaling(phi, &g1, &g2, &mut rng)?
            } else {
                equidistant_by_segment(phi, &g1, &g2, &mut rng)?
            };
            let Some(f) = equidistant else { continue };
            let plane = separation_hyperplane(phi, &g1, &g2)?;
            worst = worst.max(plane.residual(&f)?.abs());
            found += 1;
        }
        if found < PROPERTY_PAIRS {
            worst = f64::INFINITY;
        }
        report.push(CheckItem::at_most(
            format!("separating hyperplane ({tag})"),
            worst,
            HYPERPLANE_TOL,
        ));
    }

    Ok(report)
}

fn shipped_box(tag: &str) -> Box<dyn Functional> {
    match tag {
        "tsd" => Box::new(TotalSquaredDifference),
        "bias" => Box::new(SquaredBias),
        _ => Box::new(NegativeEntropy),
    }
}

/// Root of `t ↦ d[f(t), g₁] − d[f(t), g₂]` along a random segment of
/// admissible functions. The gap is linear in `f`, so a sign change at the
/// endpoints guarantees a root.
fn equidistant_by_segment(
    phi: &dyn Functional,
    g1: &GridFunction,
    g2: &GridFunction,
    rng: &mut CounterRng,
) -> Result<Option<GridFunction>> {
    let space = g1.space();
    for _ in 0..20 {
        let f0 = random_positive(rng, space, 0.2, 2.0);
        let f1 = random_positive(rng, space, 0.2, 2.0);
        let gap = |t: f64| -> Result<f64> {
            let ft = f0.scale(1.0 - t).add(&f1.scale(t))?;
            Ok(divergence(phi, &ft, g1)?.value - divergence(phi, &ft, g2)?.value)
        };
        let lo = gap(0.0)?;
        let hi = gap(1.0)?;
        if lo == 0.0 {
            return Ok(Some(f0));
        }
        if hi == 0.0 {
            return Ok(Some(f1));
        }
        if lo.signum() == hi.signum() {
            continue;
        }
        let t = bisect_root(|t| gap(t).unwrap_or(f64::NAN), 0.0, 1.0, 1e-13)?;
        return Ok(Some(f0.scale(1.0 - t).add(&f1.scale(t))?));
    }
    Ok(None)
}

/// Root of `s ↦ d[s·f, g₁] − d[s·f, g₂]` over positive scalings of a random
/// admissible function.
fn equidistant_by_scaling(
    phi: &dyn Functional,
    g1: &GridFunction,
    g2: &GridFunction,
    rng: &mut CounterRng,
) -> Result<Option<GridFunction>> {
    let space = g1.space();
    for _ in 0..20 {
        let base = random_positive(rng, space, 0.2, 2.0);
        let gap = |s: f64| -> Result<f64> {
            let fs = base.scale(s);
            Ok(divergence(phi, &fs, g1)?.value - divergence(phi, &fs, g2)?.value)
        };
        let lo = gap(0.01)?;
        let hi = gap(50.0)?;
        if lo.signum() == hi.signum() {
            continue;
        }
        let s = bisect_root(|s| gap(s).unwrap_or(f64::NAN), 0.01, 50.0, 1e-13)?;
        return Ok(Some(base.scale(s)));
    }
    Ok(None)
}

/// Analytic first variations against the central finite-difference oracle,
/// plus an order check on the second variation as the variation of the
/// first.
pub fn derivative_consistency(seed: u64) -> Result<CheckReport> {
    let mut report = CheckReport::new("derivative-consistency");
    let space = suite_grid();
    let mut rng = CounterRng::keyed(seed, &[2]);

    let pw_square = pointwise_square()?;
    let pw_xlnx = pointwise_xlnx()?;
    let functionals: [(&str, &dyn Functional); 5] = [
        ("tsd", &TotalSquaredDifference),
        ("bias", &SquaredBias),
        ("entropy", &NegativeEntropy),
        ("pointwise x^2", &pw_square),
        ("pointwise x ln x", &pw_xlnx),
    ];

    for (tag, phi) in functionals {
        let mut worst = 0.0f64;
        for _ in 0..50 {
            let g = random_positive(&mut rng, &space, 0.2, 2.0);
            let a = random_direction(&mut rng, &space);
            let analytic = phi.first_variation_apply(&g, &a)?;
            let step = FD_REL_STEP * (g.linf() + 1.0);
            let fd = gateaux_fd(phi, &g, &a, step)?;
            worst = worst.max((fd - analytic).abs() / (1.0 + analytic.abs()));
        }
        report.push(CheckItem::at_most(
            format!("first variation vs finite differences ({tag})"),
            worst,
            FIRST_VARIATION_REL_TOL,
        ));
    }

    // (δφ[g + tb; a] − δφ[g; a])/t − δ²φ[g; b, a] shrinks linearly in t.
    for (tag, phi) in shipped() {
        let mut worst = f64::NEG_INFINITY;
        for _ in 0..20 {
            let g = random_positive(&mut rng, &space, 0.5, 2.0);
            let a = random_direction(&mut rng, &space);
            let b = random_direction(&mut rng, &space);
            let second = phi.second_variation(&g, &a, &b)?;
            let err_at = |t: f64| -> Result<f64> {
                let moved = g.axpy(t, &b)?;
                let diff = (phi.first_variation_apply(&moved, &a)?
                    - phi.first_variation_apply(&g, &a)?)
                    / t;
                Ok((diff - second).abs())
            };
            let coarse = err_at(1e-3)?;
            let fine = err_at(1e-4)?;
            worst = worst.max(fine - 0.3 * coarse);
        }
        report.push(CheckItem::at_most(
            format!("second variation is the variation of the first ({tag})"),
            worst,
            1e-9,
        ));
    }

    Ok(report)
}

/// Functional divergence over a unit-mass Dirac sum against the vector
/// divergence on the same data.
pub fn dirac_equivalence(seed: u64) -> Result<CheckReport> {
    let mut report = CheckReport::new("dirac-equivalence");
    let mut rng = CounterRng::keyed(seed, &[3]);

    let sq_norm = |x: &[f64]| x.iter().map(|v| v * v).sum::<f64>();
    let sq_grad = |x: &[f64]| x.iter().map(|v| 2.0 * v).collect::<Vec<_>>();
    let neg_ent = |x: &[f64]| x.iter().map(|v| v * v.ln()).sum::<f64>();
    let neg_ent_grad = |x: &[f64]| x.iter().map(|v| 1.0 + v.ln()).collect::<Vec<_>>();

    let mut worst_sq = 0.0f64;
    let mut worst_ent = 0.0f64;
    for _ in 0..50 {
        let dim = 2 + (rng.next_u64() % 7) as usize;
        let points = distinct_sorted_points(&mut rng, dim);

        let f: Vec<f64> = (0..dim).map(|_| rng.next_range(-2.0, 2.0)).collect();
        let g: Vec<f64> = (0..dim).map(|_| rng.next_range(-2.0, 2.0)).collect();
        worst_sq = worst_sq.max(dirac_equivalence_gap(sq_norm, sq_grad, &points, &f, &g)?);

        let f: Vec<f64> = (0..dim).map(|_| rng.next_range(0.2, 3.0)).collect();
        let g: Vec<f64> = (0..dim).map(|_| rng.next_range(0.2, 3.0)).collect();
        worst_ent = worst_ent.max(dirac_equivalence_gap(
            neg_ent,
            neg_ent_grad,
            &points,
            &f,
            &g,
        )?);
    }
    report.push(CheckItem::at_most(
        "vector equivalence (squared norm)",
        worst_sq,
        1e-12,
    ));
    report.push(CheckItem::at_most(
        "vector equivalence (negative entropy)",
        worst_ent,
        1e-10,
    ));
    Ok(report)
}

fn distinct_sorted_points(rng: &mut CounterRng, count: usize) -> Vec<f64> {
    loop {
        let mut points: Vec<f64> = (0..count).map(|_| rng.next_range(0.0, 10.0)).collect();
        points.sort_by(f64::total_cmp);
        if points.windows(2).all(|p| p[0] < p[1]) {
            return points;
        }
    }
}

/// A functional built from a pointwise convex map reproduces both the direct
/// pointwise integral and the native generator's divergence.
pub fn pointwise_equivalence(seed: u64) -> Result<CheckReport> {
    let mut report = CheckReport::new("pointwise-equivalence");
    let space = suite_grid();
    let mut rng = CounterRng::keyed(seed, &[4]);

    let pw_square = pointwise_square()?;
    let pw_xlnx = pointwise_xlnx()?;

    let direct = |s: &dyn Fn(f64) -> f64,
                  sp: &dyn Fn(f64) -> f64,
                  f: &GridFunction,
                  g: &GridFunction|
     -> f64 {
        f.values()
            .iter()
            .zip(g.values())
            .zip(space.weights())
            .map(|((&fv, &gv), &w)| (s(fv) - s(gv) - sp(gv) * (fv - gv)) * w)
            .sum()
    };

    let mut worst_sq_native = 0.0f64;
    let mut worst_sq_direct = 0.0f64;
    let mut worst_ent_native = 0.0f64;
    let mut worst_ent_direct = 0.0f64;
    for _ in 0..20 {
        let f = random_positive(&mut rng, &space, 0.2, 2.0);
        let g = random_positive(&mut rng, &space, 0.2, 2.0);

        let d_pw = divergence(&pw_square, &f, &g)?.value;
        let d_native = divergence(&TotalSquaredDifference, &f, &g)?.value;
        let d_direct = direct(&|x| x * x, &|x| 2.0 * x, &f, &g);
        worst_sq_native = worst_sq_native.max((d_pw - d_native).abs() / (1.0 + d_native.abs()));
        worst_sq_direct = worst_sq_direct.max((d_pw - d_direct).abs() / (1.0 + d_direct.abs()));

        let d_pw = divergence(&pw_xlnx, &f, &g)?.value;
        let d_native = divergence(&NegativeEntropy, &f, &g)?.value;
        let d_direct = direct(&|x| x * x.ln(), &|x| 1.0 + x.ln(), &f, &g);
        worst_ent_native = worst_ent_native.max((d_pw - d_native).abs() / (1.0 + d_native.abs()));
        worst_ent_direct = worst_ent_direct.max((d_pw - d_direct).abs() / (1.0 + d_direct.abs()));
    }
    report.push(CheckItem::at_most(
        "pointwise x^2 vs native tsd",
        worst_sq_native,
        1e-10,
    ));
    report.push(CheckItem::at_most(
        "pointwise x^2 vs direct integral",
        worst_sq_direct,
        1e-10,
    ));
    report.push(CheckItem::at_most(
        "pointwise x ln x vs native entropy",
        worst_ent_native,
        1e-8,
    ));
    report.push(CheckItem::at_most(
        "pointwise x ln x vs direct integral",
        worst_ent_direct,
        1e-10,
    ));
    Ok(report)
}
