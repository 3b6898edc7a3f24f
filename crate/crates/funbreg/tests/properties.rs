//! Property-based invariants for measures, norms, and divergences.

use funbreg::{
    divergence, Functional, GridFunction, MeasureSpace, NegativeEntropy, SquaredBias,
    TotalSquaredDifference,
};
use proptest::prelude::*;

fn values(len: usize, lo: f64, hi: f64) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(lo..hi, len)
}

proptest! {
    #[test]
    fn integration_is_linear(
        f in values(32, -3.0, 3.0),
        g in values(32, -3.0, 3.0),
        alpha in -4.0..4.0f64,
    ) {
        let space = MeasureSpace::interval(0.0, 1.0, 32).unwrap();
        let f = GridFunction::new(&space, f).unwrap();
        let g = GridFunction::new(&space, g).unwrap();
        let combined = f.scale(alpha).add(&g).unwrap();
        let lhs = space.integrate(&combined).unwrap();
        let rhs = alpha * space.integrate(&f).unwrap() + space.integrate(&g).unwrap();
        let scale = 1.0 + lhs.abs() + rhs.abs();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * scale);
    }

    #[test]
    fn lp_norms_are_norms(
        f in values(24, -2.0, 2.0),
        g in values(24, -2.0, 2.0),
        alpha in -3.0..3.0f64,
    ) {
        let space = MeasureSpace::interval(0.0, 2.0, 24).unwrap();
        let f = GridFunction::new(&space, f).unwrap();
        let g = GridFunction::new(&space, g).unwrap();
        for p in [1.0, 2.0, 3.5, f64::INFINITY] {
            let nf = space.lp_norm(&f, p).unwrap();
            let ng = space.lp_norm(&g, p).unwrap();
            let nsum = space.lp_norm(&f.add(&g).unwrap(), p).unwrap();
            let scale = 1.0 + nf + ng;
            // Triangle inequality and absolute homogeneity.
            prop_assert!(nsum <= nf + ng + 1e-12 * scale, "p = {p}");
            let nscaled = space.lp_norm(&f.scale(alpha), p).unwrap();
            prop_assert!(
                (nscaled - alpha.abs() * nf).abs() <= 1e-12 * (1.0 + nscaled),
                "p = {p}"
            );
        }
    }

    #[test]
    fn divergences_are_nonnegative_and_vanish_on_the_diagonal(
        f in values(16, 0.1, 3.0),
        g in values(16, 0.1, 3.0),
    ) {
        let space = MeasureSpace::interval(0.0, 1.0, 16).unwrap();
        let f = GridFunction::nonnegative(&space, f).unwrap();
        let g = GridFunction::nonnegative(&space, g).unwrap();
        for phi in [
            &TotalSquaredDifference as &dyn Functional,
            &SquaredBias,
            &NegativeEntropy,
        ] {
            let report = divergence(phi, &f, &g).unwrap();
            let scale = 1.0 + report.phi_f.abs() + report.phi_g.abs();
            prop_assert!(report.value >= -1e-10 * scale, "{}", phi.name());
            // The report decomposition is exact by construction.
            prop_assert_eq!(
                report.value,
                report.phi_f - report.phi_g - report.first_variation_term
            );
            let diag = divergence(phi, &f, &f).unwrap();
            prop_assert!(diag.value.abs() <= 1e-12, "{}", phi.name());
        }
    }

    #[test]
    fn convexity_of_the_generators_along_segments(
        f in values(16, 0.1, 3.0),
        g in values(16, 0.1, 3.0),
    ) {
        let space = MeasureSpace::interval(0.0, 1.0, 16).unwrap();
        let f = GridFunction::nonnegative(&space, f).unwrap();
        let g = GridFunction::nonnegative(&space, g).unwrap();
        let mid = f.add(&g).unwrap().scale(0.5);
        for phi in [
            &TotalSquaredDifference as &dyn Functional,
            &SquaredBias,
            &NegativeEntropy,
        ] {
            let lhs = phi.value(&mid).unwrap();
            let rhs = 0.5 * (phi.value(&f).unwrap() + phi.value(&g).unwrap());
            prop_assert!(lhs <= rhs + 1e-12 * (1.0 + rhs.abs()), "{}", phi.name());
        }
    }

    #[test]
    fn first_variation_is_linear_in_the_direction(
        g in values(16, 0.2, 2.0),
        a in values(16, -1.0, 1.0),
        b in values(16, -1.0, 1.0),
        alpha in -3.0..3.0f64,
    ) {
        let space = MeasureSpace::interval(0.0, 1.0, 16).unwrap();
        let g = GridFunction::nonnegative(&space, g).unwrap();
        let a = GridFunction::new(&space, a).unwrap();
        let b = GridFunction::new(&space, b).unwrap();
        let combo = a.scale(alpha).add(&b).unwrap();
        for phi in [
            &TotalSquaredDifference as &dyn Functional,
            &SquaredBias,
            &NegativeEntropy,
        ] {
            let lhs = phi.first_variation_apply(&g, &combo).unwrap();
            let rhs = alpha * phi.first_variation_apply(&g, &a).unwrap()
                + phi.first_variation_apply(&g, &b).unwrap();
            let scale = 1.0 + lhs.abs() + rhs.abs();
            prop_assert!((lhs - rhs).abs() <= 1e-12 * scale, "{}", phi.name());
        }
    }
}

#[test]
fn strong_positivity_constants() {
    // δ²φ[g;a,a] >= k·‖a‖² with the generator-specific norm and constant.
    let space = MeasureSpace::interval(0.0, 1.0, 64).unwrap();
    let mut rng = funbreg::CounterRng::new(404);
    for _ in 0..50 {
        let g_vals: Vec<f64> = (0..64).map(|_| rng.next_range(0.2, 2.0)).collect();
        let g = GridFunction::nonnegative(&space, g_vals).unwrap();

        // Total squared difference: k = 2 against ‖·‖₂, any signed a.
        let a_vals: Vec<f64> = (0..64).map(|_| rng.next_range(-1.0, 1.0)).collect();
        let a = GridFunction::new(&space, a_vals).unwrap();
        let quad = TotalSquaredDifference.second_variation(&g, &a, &a).unwrap();
        let l2 = space.lp_norm(&a, 2.0).unwrap();
        assert!(quad >= 2.0 * l2 * l2 - 1e-12);

        // Squared bias: k = 2 against ‖·‖₁, restricted to the cone.
        let a_vals: Vec<f64> = (0..64).map(|_| rng.next_range(0.0, 1.0)).collect();
        let a = GridFunction::nonnegative(&space, a_vals).unwrap();
        let quad = SquaredBias.second_variation(&g, &a, &a).unwrap();
        let l1 = space.lp_norm(&a, 1.0).unwrap();
        assert!(quad >= 2.0 * l1 * l1 - 1e-12);

        // Entropy: ∫ a²/g >= ‖a‖₂² / max g.
        let a_vals: Vec<f64> = (0..64).map(|_| rng.next_range(-1.0, 1.0)).collect();
        let a = GridFunction::new(&space, a_vals).unwrap();
        let quad = NegativeEntropy.second_variation(&g, &a, &a).unwrap();
        let l2 = space.lp_norm(&a, 2.0).unwrap();
        assert!(quad >= l2 * l2 / g.max_value() - 1e-12);
    }
}
