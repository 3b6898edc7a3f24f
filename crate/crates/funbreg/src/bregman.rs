//! The functional Bregman divergence and its structural companions.
//!
//! `divergence` evaluates `d_φ[f, g] = φ[f] − φ[g] − δφ[g; f − g]` for any
//! [`Functional`]. The rest of the module exposes, as executable operations,
//! the facts that make the divergence useful: equivalence with the vector
//! divergence over Dirac sums, the generalized Pythagorean identity, linear
//! separation of equidistant sets, and conjugate (dual) divergence pairs.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::functionals::{Functional, FD_REL_STEP};
use crate::measure::{GridFunction, MeasureSpace};

#[cfg(not(feature = "std"))]
#[allow(unused_imports)]
use num_traits::Float;

/// The three terms of a divergence evaluation. By construction
/// `value = phi_f − phi_g − first_variation_term` in IEEE arithmetic, with
/// infinities propagating (an entropy divergence across a support mismatch
/// yields `value = +∞`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DivergenceReport {
    pub value: f64,
    pub phi_f: f64,
    pub phi_g: f64,
    pub first_variation_term: f64,
}

impl DivergenceReport {
    /// Flag for the generalized-divergence convention: `f` carries mass where
    /// `g` has none.
    pub fn is_infinite(&self) -> bool {
        self.value.is_infinite()
    }
}

/// `d_φ[f, g] = φ[f] − φ[g] − δφ[g; f − g]`.
///
/// Both arguments are expected to be admissible for `φ` (nonnegative where
/// the functional's domain demands it); violations the functional can detect
/// surface as domain errors. For `NegativeEntropy`, a base point `g` with
/// zeros is allowed: the divergence is `+∞` when `f` is positive on a dead
/// node and finite when `f` vanishes there too.
pub fn divergence<P: Functional + ?Sized>(
    phi: &P,
    f: &GridFunction,
    g: &GridFunction,
) -> Result<DivergenceReport> {
    if !f.space().is_compatible(g.space()) {
        return Err(Error::IncompatibleSpace(
            "divergence arguments live on different spaces".into(),
        ));
    }
    let phi_f = phi.value(f)?;
    let phi_g = phi.value(g)?;
    let step = f.sub(g)?;
    let first_variation_term = phi.first_variation_apply(g, &step)?;
    Ok(DivergenceReport {
        value: phi_f - phi_g - first_variation_term,
        phi_f,
        phi_g,
        first_variation_term,
    })
}

/// The standard vector divergence
/// `d_φ̃(x, y) = φ̃(x) − φ̃(y) − ∇φ̃(y)ᵀ(x − y)`.
pub fn vector_bregman(
    phi_tilde: impl Fn(&[f64]) -> f64,
    grad_phi: impl Fn(&[f64]) -> Vec<f64>,
    x: &[f64],
    y: &[f64],
) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::InvalidArgument(format!(
            "dimension mismatch: {} vs {}",
            x.len(),
            y.len()
        )));
    }
    let grad = grad_phi(y);
    if grad.len() != y.len() {
        return Err(Error::InvalidArgument(format!(
            "gradient has dimension {} for points of dimension {}",
            grad.len(),
            y.len()
        )));
    }
    let inner: f64 = grad
        .iter()
        .zip(x.iter().zip(y))
        .map(|(&gi, (&xi, &yi))| gi * (xi - yi))
        .sum();
    Ok(phi_tilde(x) - phi_tilde(y) - inner)
}

/// A vector map lifted to a functional over a unit-mass Dirac sum:
/// `φ[f] = φ̃(f(c₁), …, f(c_n))`.
struct VectorInduced<F, G> {
    phi_tilde: F,
    grad_phi: G,
}

impl<F, G> Functional for VectorInduced<F, G>
where
    F: Fn(&[f64]) -> f64 + Send + Sync,
    G: Fn(&[f64]) -> Vec<f64> + Send + Sync,
{
    fn name(&self) -> &str {
        "vector_induced"
    }

    fn value(&self, g: &GridFunction) -> Result<f64> {
        let v = (self.phi_tilde)(g.values());
        if v.is_nan() {
            return Err(Error::DomainViolation(
                "vector map is undefined at these values".into(),
            ));
        }
        Ok(v)
    }

    fn first_variation_coeff(&self, g: &GridFunction) -> Result<GridFunction> {
        // δφ[g; a] = ∇φ̃ᵀa = Σ ∂ᵢφ̃ aᵢ, so against ∫ c·a dν = Σ cᵢ aᵢ wᵢ the
        // coefficient is the gradient deweighted by the point masses.
        let grad = (self.grad_phi)(g.values());
        if grad.len() != g.len() {
            return Err(Error::InvalidArgument("gradient dimension mismatch".into()));
        }
        if grad.iter().any(|v| v.is_nan()) {
            return Err(Error::DomainViolation(
                "vector gradient is undefined at these values".into(),
            ));
        }
        let values = grad
            .iter()
            .zip(g.space().weights())
            .map(|(&d, &w)| d / w)
            .collect();
        GridFunction::new(g.space(), values)
    }

    fn second_variation_density(&self, g: &GridFunction, b: &GridFunction) -> Result<GridFunction> {
        let step = FD_REL_STEP * (g.linf() + 1.0);
        let plus = self.first_variation_coeff(&g.axpy(step, b)?)?;
        let minus = self.first_variation_coeff(&g.axpy(-step, b)?)?;
        Ok(plus.sub(&minus)?.scale(0.5 / step))
    }
}

/// Builds `ν = Σ δ_{cᵢ}` over the given points, lifts `φ̃` to a functional,
/// and returns the absolute gap between the functional divergence and the
/// vector divergence on the same data. The two routes share no code, so a
/// small gap certifies their equivalence on this instance.
pub fn dirac_equivalence_gap(
    phi_tilde: impl Fn(&[f64]) -> f64 + Send + Sync,
    grad_phi: impl Fn(&[f64]) -> Vec<f64> + Send + Sync,
    points: &[f64],
    f_values: &[f64],
    g_values: &[f64],
) -> Result<f64> {
    if points.len() != f_values.len() || points.len() != g_values.len() {
        return Err(Error::InvalidArgument(format!(
            "{} points vs {} / {} values",
            points.len(),
            f_values.len(),
            g_values.len()
        )));
    }
    // Node order is ascending; permute everything consistently.
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&i, &j| points[i].total_cmp(&points[j]));
    let sorted_points: Vec<f64> = order.iter().map(|&i| points[i]).collect();
    let x: Vec<f64> = order.iter().map(|&i| f_values[i]).collect();
    let y: Vec<f64> = order.iter().map(|&i| g_values[i]).collect();

    let space = MeasureSpace::dirac_unit(sorted_points)?;
    let f = GridFunction::new(&space, x.clone())?;
    let g = GridFunction::new(&space, y.clone())?;

    let functional_route = divergence(
        &VectorInduced {
            phi_tilde: &phi_tilde,
            grad_phi: &grad_phi,
        },
        &f,
        &g,
    )?
    .value;
    let vector_route = vector_bregman(&phi_tilde, &grad_phi, &x, &y)?;
    Ok((functional_route - vector_route).abs())
}

/// Both sides of the generalized Pythagorean identity
/// `d_φ[f,h] = d_φ[f,g] + d_φ[g,h] + δφ[g; f−g] − δφ[h; f−g]`.
/// Returns `(lhs, rhs)`; the caller asserts how close they are.
pub fn pythagorean_residual<P: Functional + ?Sized>(
    phi: &P,
    f: &GridFunction,
    g: &GridFunction,
    h: &GridFunction,
) -> Result<(f64, f64)> {
    let lhs = divergence(phi, f, h)?.value;
    let step = f.sub(g)?;
    let rhs = divergence(phi, f, g)?.value
        + divergence(phi, g, h)?.value
        + phi.first_variation_apply(g, &step)?
        - phi.first_variation_apply(h, &step)?;
    Ok((lhs, rhs))
}

/// The hyperplane `{f : ∫ coeff·f dν = offset}` containing every function
/// equidistant (in divergence) from the two anchors it was built from.
#[derive(Debug, Clone)]
pub struct SeparatingHyperplane {
    pub coeff: GridFunction,
    pub offset: f64,
}

impl SeparatingHyperplane {
    /// The linear functional `Lf = ∫ coeff·f dν`.
    pub fn apply(&self, f: &GridFunction) -> Result<f64> {
        self.coeff.inner(f)
    }

    /// `Lf − offset`; zero (up to roundoff) iff `f` is equidistant from the
    /// anchors.
    pub fn residual(&self, f: &GridFunction) -> Result<f64> {
        Ok(self.apply(f)? - self.offset)
    }
}

/// The set `{f : d_φ[f, g₁] = d_φ[f, g₂]}` as a hyperplane `Lf = c` with
/// `Lf = δφ[g₂; f] − δφ[g₁; f]`.
pub fn separation_hyperplane<P: Functional + ?Sized>(
    phi: &P,
    g1: &GridFunction,
    g2: &GridFunction,
) -> Result<SeparatingHyperplane> {
    if !g1.space().is_compatible(g2.space()) {
        return Err(Error::IncompatibleSpace(
            "anchors live on different spaces".into(),
        ));
    }
    if g1.values() == g2.values() {
        return Err(Error::DegenerateInput(
            "equal anchors do not separate anything".into(),
        ));
    }
    let c1 = phi.first_variation_coeff(g1)?;
    let c2 = phi.first_variation_coeff(g2)?;
    let coeff = c2.sub(&c1)?;
    let offset = phi.value(g1)? - phi.value(g2)? - phi.first_variation_apply(g1, g1)?
        + phi.first_variation_apply(g2, g2)?;
    Ok(SeparatingHyperplane { coeff, offset })
}

/// Conjugate of the total-squared-difference generator: `ψ[G] = ∫ G²/4 dν`.
#[derive(Debug, Clone, Copy, Default)]
struct ConjugateTotalSquared;

impl Functional for ConjugateTotalSquared {
    fn name(&self) -> &str {
        "conjugate_total_squared"
    }

    fn value(&self, g: &GridFunction) -> Result<f64> {
        Ok(g.inner(g)? / 4.0)
    }

    fn first_variation_coeff(&self, g: &GridFunction) -> Result<GridFunction> {
        Ok(g.scale(0.5))
    }

    fn second_variation_density(
        &self,
        _g: &GridFunction,
        b: &GridFunction,
    ) -> Result<GridFunction> {
        Ok(b.scale(0.5))
    }
}

/// Conjugate of the negative-entropy generator: `ψ[G] = ∫ e^{G−1} dν`.
#[derive(Debug, Clone, Copy, Default)]
struct ConjugateExponential;

impl Functional for ConjugateExponential {
    fn name(&self) -> &str {
        "conjugate_exponential"
    }

    fn value(&self, g: &GridFunction) -> Result<f64> {
        let mut acc = 0.0;
        for (&v, &w) in g.values().iter().zip(g.space().weights()) {
            acc += (v - 1.0).exp() * w;
        }
        Ok(acc)
    }

    fn first_variation_coeff(&self, g: &GridFunction) -> Result<GridFunction> {
        Ok(g.map(|v| (v - 1.0).exp()))
    }

    fn second_variation_density(&self, g: &GridFunction, b: &GridFunction) -> Result<GridFunction> {
        g.zip_map(b, |gi, bi| (gi - 1.0).exp() * bi)
    }
}

static CONJ_TSD: ConjugateTotalSquared = ConjugateTotalSquared;
static CONJ_EXP: ConjugateExponential = ConjugateExponential;

/// A Legendre transform pair `(G, ψ)` for one of the shipped generators:
/// `φ[g] = −ψ[G] + ∫ gG dν` and `δφ[g; a] = ∫ G a dν`, which swaps the
/// divergence arguments: `d_φ[f, g] = d_ψ[G, F]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LegendrePair {
    /// `G = 2g`, `ψ[G] = ∫ G²/4 dν`.
    TotalSquared,
    /// `G = 1 + ln g`, `ψ[G] = ∫ e^{G−1} dν`; the transform needs `g > 0`.
    NegEntropy,
}

impl LegendrePair {
    pub fn total_squared() -> Self {
        LegendrePair::TotalSquared
    }

    pub fn neg_entropy() -> Self {
        LegendrePair::NegEntropy
    }

    /// The transformed function `G`.
    pub fn transform(&self, g: &GridFunction) -> Result<GridFunction> {
        match self {
            LegendrePair::TotalSquared => Ok(g.scale(2.0)),
            LegendrePair::NegEntropy => {
                if let Some(i) = g.values().iter().position(|&v| !(v > 0.0)) {
                    return Err(Error::DomainViolation(format!(
                        "entropy transform needs g > 0; node {i} has {}",
                        g.values()[i]
                    )));
                }
                Ok(g.map(|v| 1.0 + v.ln()))
            }
        }
    }

    /// The conjugate functional `ψ`.
    pub fn conjugate(&self) -> &'static dyn Functional {
        match self {
            LegendrePair::TotalSquared => &CONJ_TSD,
            LegendrePair::NegEntropy => &CONJ_EXP,
        }
    }

    /// `d_ψ[G, F]` on transformed arguments; equals `d_φ[f, g]`.
    pub fn dual_divergence(&self, f: &GridFunction, g: &GridFunction) -> Result<f64> {
        let big_f = self.transform(f)?;
        let big_g = self.transform(g)?;
        Ok(divergence(self.conjugate(), &big_g, &big_f)?.value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functionals::{NegativeEntropy, SquaredBias, TotalSquaredDifference};
    use crate::measure::MeasureSpace;
    use alloc::sync::Arc;

    fn unit_grid(cells: usize) -> Arc<MeasureSpace> {
        MeasureSpace::interval(0.0, 1.0, cells).unwrap()
    }

    #[test]
    fn tsd_closed_form() {
        let space = unit_grid(64);
        let f = GridFunction::constant(&space, 1.5);
        let g = GridFunction::constant(&space, 0.5);
        let report = divergence(&TotalSquaredDifference, &f, &g).unwrap();
        // ∫ (f−g)² dν = 1.
        assert!((report.value - 1.0).abs() <= 1e-12);
        assert_eq!(
            report.value,
            report.phi_f - report.phi_g - report.first_variation_term
        );
    }

    #[test]
    fn bias_closed_form() {
        let space = unit_grid(64);
        let f = GridFunction::constant(&space, 2.0); // ∫f = 2
        let g = GridFunction::constant(&space, 1.0); // ∫g = 1
        let report = divergence(&SquaredBias, &f, &g).unwrap();
        assert!((report.value - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn entropy_closed_form() {
        let space = unit_grid(64);
        let f = GridFunction::constant(&space, 2.0);
        let g = GridFunction::constant(&space, 1.0);
        let report = divergence(&NegativeEntropy, &f, &g).unwrap();
        // ∫ f ln(f/g) − f + g dν = 2 ln 2 − 1.
        let expected = 2.0 * core::f64::consts::LN_2 - 1.0;
        assert!((report.value - expected).abs() <= 1e-12);
    }

    #[test]
    fn identical_arguments_give_zero() {
        let space = unit_grid(64);
        let f = GridFunction::sample(&space, |x| 0.5 + x);
        for phi in [
            &TotalSquaredDifference as &dyn Functional,
            &SquaredBias,
            &NegativeEntropy,
        ] {
            let report = divergence(phi, &f, &f).unwrap();
            assert!(report.value.abs() <= 1e-12, "{}", phi.name());
        }
    }

    #[test]
    fn entropy_support_mismatch_is_flagged_infinite() {
        let space = unit_grid(4);
        let g = GridFunction::new(&space, vec![0.0, 1.0, 1.0, 1.0]).unwrap();
        let f_on = GridFunction::new(&space, vec![0.5, 1.0, 1.0, 1.0]).unwrap();
        let report = divergence(&NegativeEntropy, &f_on, &g).unwrap();
        assert!(report.is_infinite());
        assert_eq!(report.value, f64::INFINITY);
        // f vanishing on the dead node keeps the divergence finite:
        // ∫ f ln(f/g) − f + g over the live nodes.
        let f_off = GridFunction::new(&space, vec![0.0, 2.0, 1.0, 1.0]).unwrap();
        let report = divergence(&NegativeEntropy, &f_off, &g).unwrap();
        let expected = 0.25 * (2.0 * core::f64::consts::LN_2 - 1.0);
        assert!((report.value - expected).abs() <= 1e-12);
    }

    #[test]
    fn divergence_space_mismatch() {
        let a = unit_grid(4);
        let b = unit_grid(8);
        let f = GridFunction::constant(&a, 1.0);
        let g = GridFunction::constant(&b, 1.0);
        assert!(matches!(
            divergence(&TotalSquaredDifference, &f, &g),
            Err(Error::IncompatibleSpace(_))
        ));
    }

    #[test]
    fn vector_bregman_squared_norm() {
        let phi = |x: &[f64]| x.iter().map(|v| v * v).sum::<f64>();
        let grad = |x: &[f64]| x.iter().map(|v| 2.0 * v).collect::<Vec<_>>();
        let d = vector_bregman(phi, grad, &[1.0, 2.0], &[0.0, 0.0]).unwrap();
        assert!((d - 5.0).abs() <= 1e-12);
        let d = vector_bregman(phi, grad, &[1.0, 2.0], &[1.0, 2.0]).unwrap();
        assert_eq!(d, 0.0);
    }

    #[test]
    fn vector_bregman_neg_entropy() {
        let phi = |x: &[f64]| x.iter().map(|v| v * v.ln()).sum::<f64>();
        let grad = |x: &[f64]| x.iter().map(|v| 1.0 + v.ln()).collect::<Vec<_>>();
        let d = vector_bregman(phi, grad, &[1.0, 1.0], &[2.0, 2.0]).unwrap();
        let expected = 2.0 - 2.0 * core::f64::consts::LN_2;
        assert!((d - expected).abs() <= 1e-12);
    }

    #[test]
    fn vector_bregman_dimension_mismatch() {
        let phi = |x: &[f64]| x.iter().sum::<f64>();
        let grad = |x: &[f64]| vec![1.0; x.len()];
        assert!(matches!(
            vector_bregman(phi, grad, &[1.0], &[1.0, 2.0]),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn dirac_equivalence_identity_case() {
        let phi = |x: &[f64]| x.iter().map(|v| v * v).sum::<f64>();
        let grad = |x: &[f64]| x.iter().map(|v| 2.0 * v).collect::<Vec<_>>();
        let gap = dirac_equivalence_gap(
            phi,
            grad,
            &[0.0, 1.0, 2.0],
            &[0.3, 0.7, 1.1],
            &[0.3, 0.7, 1.1],
        )
        .unwrap();
        assert_eq!(gap, 0.0);
    }

    #[test]
    fn pythagorean_trivial_case() {
        let space = unit_grid(16);
        let f = GridFunction::constant(&space, 1.0);
        let (lhs, rhs) = pythagorean_residual(&TotalSquaredDifference, &f, &f, &f).unwrap();
        assert_eq!(lhs, 0.0);
        assert!(rhs.abs() <= 1e-15);
    }

    #[test]
    fn hyperplane_midpoint_symmetry_for_tsd() {
        // For total squared difference, (g1+g2)/2 is equidistant by symmetry.
        let space = unit_grid(64);
        let g1 = GridFunction::sample(&space, |x| 0.5 + x);
        let g2 = GridFunction::sample(&space, |x| 1.5 - x);
        let mid = g1.add(&g2).unwrap().scale(0.5);
        let plane = separation_hyperplane(&TotalSquaredDifference, &g1, &g2).unwrap();
        assert!(plane.residual(&mid).unwrap().abs() <= 1e-12);
        let d1 = divergence(&TotalSquaredDifference, &mid, &g1)
            .unwrap()
            .value;
        let d2 = divergence(&TotalSquaredDifference, &mid, &g2)
            .unwrap()
            .value;
        assert!((d1 - d2).abs() <= 1e-12);
    }

    #[test]
    fn hyperplane_rejects_equal_anchors() {
        let space = unit_grid(8);
        let g = GridFunction::constant(&space, 1.0);
        assert!(matches!(
            separation_hyperplane(&TotalSquaredDifference, &g, &g.clone()),
            Err(Error::DegenerateInput(_))
        ));
    }

    #[test]
    fn legendre_inversion_identity() {
        // φ[g] = −ψ[G] + ∫ gG dν for both pairs.
        let space = unit_grid(64);
        let g = GridFunction::sample(&space, |x| 0.4 + x * x);

        let pair = LegendrePair::total_squared();
        let big_g = pair.transform(&g).unwrap();
        let lhs = TotalSquaredDifference.value(&g).unwrap();
        let rhs = -pair.conjugate().value(&big_g).unwrap() + g.inner(&big_g).unwrap();
        assert!((lhs - rhs).abs() <= 1e-10 * (1.0 + lhs.abs()));

        let pair = LegendrePair::neg_entropy();
        let big_g = pair.transform(&g).unwrap();
        let lhs = NegativeEntropy.value(&g).unwrap();
        let rhs = -pair.conjugate().value(&big_g).unwrap() + g.inner(&big_g).unwrap();
        assert!((lhs - rhs).abs() <= 1e-10 * (1.0 + lhs.abs()));
    }

    #[test]
    fn dual_divergence_identity_case() {
        let space = unit_grid(32);
        let f = GridFunction::sample(&space, |x| 0.7 + 0.2 * x);
        for pair in [LegendrePair::total_squared(), LegendrePair::neg_entropy()] {
            assert!(pair.dual_divergence(&f, &f).unwrap().abs() <= 1e-12);
        }
    }

    #[test]
    fn entropy_transform_needs_positivity() {
        let space = unit_grid(4);
        let g = GridFunction::new(&space, vec![0.0, 1.0, 1.0, 1.0]).unwrap();
        assert!(matches!(
            LegendrePair::neg_entropy().transform(&g),
            Err(Error::DomainViolation(_))
        ));
    }
}
