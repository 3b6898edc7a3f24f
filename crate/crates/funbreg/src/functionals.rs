//! Convex functionals with analytic first and second variations.
//!
//! Every functional here exposes its first variation through an integrand
//! coefficient: `δφ[g; a] = ∫ c_g · a dν` where `c_g` is a grid function
//! depending on the base point `g`. The second variation is exposed the same
//! way, as a density in its first perturbation argument:
//! `δ²φ[g; b, a] = ∫ k_g(b) · a dν`. Carrying the Riesz representers instead
//! of opaque linear maps keeps divergence computations, hyperplane
//! separation, and gradient descent on expected divergences cheap.
//!
//! Shipped functionals:
//!
//! | functional | `φ[g]` | `c_g` | `k_g(b)` | derivative domain |
//! |---|---|---|---|---|
//! | [`TotalSquaredDifference`] | `∫ g² dν` | `2g` | `2b` | all of `L²` |
//! | [`SquaredBias`] | `(∫ g dν)²` | `2∫g dν` (const) | `2∫b dν` (const) | all of `L¹` |
//! | [`NegativeEntropy`] | `∫ g ln g dν` | `1 + ln g` | `b / g` | `g > 0` at every node |
//! | [`PointwiseFunctional`] | `∫ s̃(g) dν` | `s′(g)` | finite differences | where `s`, `s′` are finite |
//!
//! `NegativeEntropy::value` accepts zeros under the convention `0·ln 0 = 0`;
//! its derivatives require strict positivity so the coefficient `1 + ln g`
//! is finite everywhere.

use alloc::boxed::Box;
use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::measure::GridFunction;

#[cfg(not(feature = "std"))]
#[allow(unused_imports)]
use num_traits::Float;

/// Relative step for finite-difference derivative fallbacks: the actual step
/// is `FD_REL_STEP * (‖g‖_∞ + 1)`, balancing truncation against roundoff.
pub const FD_REL_STEP: f64 = 1e-5;

/// A strictly convex functional with integral-form first and second
/// variations.
pub trait Functional: Send + Sync {
    fn name(&self) -> &str;

    /// `φ[g]`.
    fn value(&self, g: &GridFunction) -> Result<f64>;

    /// The coefficient `c_g` with `δφ[g; a] = ∫ c_g · a dν`.
    /// Requires the derivative-domain guard.
    fn first_variation_coeff(&self, g: &GridFunction) -> Result<GridFunction>;

    /// The density `k_g(b)` with `δ²φ[g; b, a] = ∫ k_g(b) · a dν`.
    /// Requires the derivative-domain guard.
    fn second_variation_density(&self, g: &GridFunction, b: &GridFunction) -> Result<GridFunction>;

    /// `δ²φ[g; b, a]`.
    fn second_variation(
        &self,
        g: &GridFunction,
        a: &GridFunction,
        b: &GridFunction,
    ) -> Result<f64> {
        self.second_variation_density(g, b)?.inner(a)
    }

    /// Whether `g` lies in the derivative domain (where `c_g` is finite).
    fn guard_ok(&self, _g: &GridFunction) -> bool {
        true
    }

    /// `δφ[g; a]`. The default integrates the coefficient against `a`;
    /// implementations with an extended-value convention on the boundary of
    /// their domain (see [`NegativeEntropy`]) override this.
    fn first_variation_apply(&self, g: &GridFunction, a: &GridFunction) -> Result<f64> {
        self.first_variation_coeff(g)?.inner(a)
    }

    /// Lower clamp applied by projected descent to keep iterates inside the
    /// derivative domain.
    fn descent_floor(&self) -> f64 {
        0.0
    }
}

/// `φ[g] = ∫ g² dν`, the total-squared-difference generator.
#[derive(Debug, Clone, Copy, Default)]
pub struct TotalSquaredDifference;

impl Functional for TotalSquaredDifference {
    fn name(&self) -> &str {
        "total_squared_difference"
    }

    fn value(&self, g: &GridFunction) -> Result<f64> {
        g.inner(g)
    }

    fn first_variation_coeff(&self, g: &GridFunction) -> Result<GridFunction> {
        Ok(g.scale(2.0))
    }

    fn second_variation_density(
        &self,
        _g: &GridFunction,
        b: &GridFunction,
    ) -> Result<GridFunction> {
        Ok(b.scale(2.0))
    }
}

/// `φ[g] = (∫ g dν)²`, the squared-bias generator.
#[derive(Debug, Clone, Copy, Default)]
pub struct SquaredBias;

impl Functional for SquaredBias {
    fn name(&self) -> &str {
        "squared_bias"
    }

    fn value(&self, g: &GridFunction) -> Result<f64> {
        let m = g.integral();
        Ok(m * m)
    }

    fn first_variation_coeff(&self, g: &GridFunction) -> Result<GridFunction> {
        Ok(GridFunction::constant(g.space(), 2.0 * g.integral()))
    }

    fn second_variation_density(&self, g: &GridFunction, b: &GridFunction) -> Result<GridFunction> {
        Ok(GridFunction::constant(g.space(), 2.0 * b.integral()))
    }
}

/// `φ[g] = ∫ g ln g dν` with `0·ln 0 = 0`, the relative-entropy generator.
#[derive(Debug, Clone, Copy, Default)]
pub struct NegativeEntropy;

impl NegativeEntropy {
    fn check_strictly_positive(g: &GridFunction) -> Result<()> {
        match g.values().iter().position(|&v| !(v > 0.0)) {
            None => Ok(()),
            Some(i) => Err(Error::DomainViolation(format!(
                "entropy derivative needs g > 0 at every node; node {i} has {}",
                g.values()[i]
            ))),
        }
    }
}

impl Functional for NegativeEntropy {
    fn name(&self) -> &str {
        "negative_entropy"
    }

    fn value(&self, g: &GridFunction) -> Result<f64> {
        let mut acc = 0.0;
        for (i, (&v, &w)) in g.values().iter().zip(g.space().weights()).enumerate() {
            if v > 0.0 {
                acc += v * v.ln() * w;
            } else if v != 0.0 {
                return Err(Error::DomainViolation(format!(
                    "entropy needs g >= 0; node {i} has {v}"
                )));
            }
        }
        Ok(acc)
    }

    fn first_variation_coeff(&self, g: &GridFunction) -> Result<GridFunction> {
        Self::check_strictly_positive(g)?;
        Ok(g.map(|v| 1.0 + v.ln()))
    }

    fn second_variation_density(&self, g: &GridFunction, b: &GridFunction) -> Result<GridFunction> {
        Self::check_strictly_positive(g)?;
        b.zip_map(g, |bi, gi| bi / gi)
    }

    fn guard_ok(&self, g: &GridFunction) -> bool {
        g.values().iter().all(|&v| v > 0.0)
    }

    /// Extended-value `δφ[g; a]`: where `g` vanishes, directions that stay in
    /// the support contribute nothing, while directions pushing mass onto it
    /// drive the term to `−∞` (so a divergence built on top becomes `+∞`).
    fn first_variation_apply(&self, g: &GridFunction, a: &GridFunction) -> Result<f64> {
        let mut acc = 0.0;
        let weights = g.space().weights();
        for (i, ((&gi, &ai), &w)) in g.values().iter().zip(a.values()).zip(weights).enumerate() {
            if gi > 0.0 {
                acc += (1.0 + gi.ln()) * ai * w;
            } else if gi == 0.0 {
                if ai > 0.0 && w > 0.0 {
                    return Ok(f64::NEG_INFINITY);
                } else if ai < 0.0 && w > 0.0 {
                    return Err(Error::DomainViolation(format!(
                        "direction leaves the admissible cone at node {i} where g = 0"
                    )));
                }
            } else {
                return Err(Error::DomainViolation(format!(
                    "entropy needs g >= 0; node {i} has {gi}"
                )));
            }
        }
        Ok(acc)
    }

    fn descent_floor(&self) -> f64 {
        1e-9
    }
}

type ScalarFn = Box<dyn Fn(f64) -> f64 + Send + Sync>;

/// A convex scalar map `s: (0, ∞) → ℝ` with its derivative and its limits at
/// zero, the ingredients of a pointwise divergence `∫ s(f) − s(g) − s′(g)(f−g) dν`.
pub struct PointwiseSpec {
    s: ScalarFn,
    s_prime: ScalarFn,
    limit_at_zero: f64,
    limit_prime_at_zero: f64,
}

impl PointwiseSpec {
    /// `limit_at_zero` and `limit_prime_at_zero` are the limits of `s` and
    /// `s′` at `0⁺`; pass `f64::INFINITY` / `f64::NEG_INFINITY` when they
    /// diverge. Finite limits are required only where evaluation actually
    /// touches the boundary.
    pub fn new(
        s: impl Fn(f64) -> f64 + Send + Sync + 'static,
        s_prime: impl Fn(f64) -> f64 + Send + Sync + 'static,
        limit_at_zero: f64,
        limit_prime_at_zero: f64,
    ) -> Self {
        Self {
            s: Box::new(s),
            s_prime: Box::new(s_prime),
            limit_at_zero,
            limit_prime_at_zero,
        }
    }

    /// Spot-check convexity of `s` on a deterministic ladder of triples.
    /// Only ever rejects genuine non-convexity (up to roundoff slack).
    fn probe_convexity(&self) -> Result<()> {
        let mut x = 1e-3;
        while x < 1e3 {
            let lo = 0.5 * x;
            let hi = 1.5 * x;
            let (slo, shi, smid) = ((self.s)(lo), (self.s)(hi), (self.s)(x));
            if slo.is_finite() && shi.is_finite() && smid.is_finite() {
                let slack = 1e-12 * (1.0 + slo.abs() + shi.abs());
                if smid > 0.5 * (slo + shi) + slack {
                    return Err(Error::InvalidArgument(format!(
                        "s is not convex near x = {x}"
                    )));
                }
            }
            x *= 2.0;
        }
        Ok(())
    }
}

impl core::fmt::Debug for PointwiseSpec {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("PointwiseSpec")
            .field("limit_at_zero", &self.limit_at_zero)
            .field("limit_prime_at_zero", &self.limit_prime_at_zero)
            .finish_non_exhaustive()
    }
}

/// `φ[f] = ∫ s̃(f) dν` built from a [`PointwiseSpec`], where `s̃` extends `s`
/// to the whole line by odd reflection: `s̃(x) = −s(−x) + 2·s(0)` for `x < 0`.
/// The first variation coefficient is `s′(f)`; the second variation falls
/// back to central finite differences of the first.
#[derive(Debug)]
pub struct PointwiseFunctional {
    spec: PointwiseSpec,
}

impl PointwiseFunctional {
    pub fn new(spec: PointwiseSpec) -> Result<Self> {
        spec.probe_convexity()?;
        Ok(Self { spec })
    }

    fn s_tilde(&self, x: f64) -> Result<f64> {
        let y = if x > 0.0 {
            (self.spec.s)(x)
        } else if x == 0.0 {
            self.spec.limit_at_zero
        } else {
            2.0 * self.spec.limit_at_zero - (self.spec.s)(-x)
        };
        if y.is_finite() {
            Ok(y)
        } else {
            Err(Error::DomainViolation(format!(
                "s is not finite at x = {x}"
            )))
        }
    }

    fn s_tilde_prime(&self, x: f64) -> Result<f64> {
        let y = if x > 0.0 {
            (self.spec.s_prime)(x)
        } else if x == 0.0 {
            self.spec.limit_prime_at_zero
        } else {
            (self.spec.s_prime)(-x)
        };
        if y.is_finite() {
            Ok(y)
        } else {
            Err(Error::DomainViolation(format!(
                "s' is not finite at x = {x}"
            )))
        }
    }
}

impl Functional for PointwiseFunctional {
    fn name(&self) -> &str {
        "pointwise"
    }

    fn value(&self, g: &GridFunction) -> Result<f64> {
        let mut acc = 0.0;
        for (&v, &w) in g.values().iter().zip(g.space().weights()) {
            acc += self.s_tilde(v)? * w;
        }
        Ok(acc)
    }

    fn first_variation_coeff(&self, g: &GridFunction) -> Result<GridFunction> {
        let values = g
            .values()
            .iter()
            .map(|&v| self.s_tilde_prime(v))
            .collect::<Result<Vec<_>>>()?;
        GridFunction::new(g.space(), values)
    }

    fn second_variation_density(&self, g: &GridFunction, b: &GridFunction) -> Result<GridFunction> {
        let step = FD_REL_STEP * (g.linf() + 1.0);
        let plus = self.first_variation_coeff(&g.axpy(step, b)?)?;
        let minus = self.first_variation_coeff(&g.axpy(-step, b)?)?;
        Ok(plus.sub(&minus)?.scale(0.5 / step))
    }

    fn guard_ok(&self, g: &GridFunction) -> bool {
        g.values()
            .iter()
            .all(|&v| self.s_tilde(v).is_ok() && self.s_tilde_prime(v).is_ok())
    }
}

/// `c₁φ₁ + c₂φ₂ + …`, itself a functional.
pub struct LinearCombination {
    terms: Vec<(f64, Box<dyn Functional>)>,
}

impl LinearCombination {
    pub fn new(terms: Vec<(f64, Box<dyn Functional>)>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::InvalidArgument("no terms".into()));
        }
        Ok(Self { terms })
    }
}

impl Functional for LinearCombination {
    fn name(&self) -> &str {
        "linear_combination"
    }

    fn value(&self, g: &GridFunction) -> Result<f64> {
        let mut acc = 0.0;
        for (c, phi) in &self.terms {
            acc += c * phi.value(g)?;
        }
        Ok(acc)
    }

    fn first_variation_coeff(&self, g: &GridFunction) -> Result<GridFunction> {
        let mut coeff = GridFunction::constant(g.space(), 0.0);
        for (c, phi) in &self.terms {
            coeff = coeff.axpy(*c, &phi.first_variation_coeff(g)?)?;
        }
        Ok(coeff)
    }

    fn second_variation_density(&self, g: &GridFunction, b: &GridFunction) -> Result<GridFunction> {
        let mut density = GridFunction::constant(g.space(), 0.0);
        for (c, phi) in &self.terms {
            density = density.axpy(*c, &phi.second_variation_density(g, b)?)?;
        }
        Ok(density)
    }

    fn guard_ok(&self, g: &GridFunction) -> bool {
        self.terms.iter().all(|(_, phi)| phi.guard_ok(g))
    }

    fn first_variation_apply(&self, g: &GridFunction, a: &GridFunction) -> Result<f64> {
        let mut acc = 0.0;
        for (c, phi) in &self.terms {
            acc += c * phi.first_variation_apply(g, a)?;
        }
        Ok(acc)
    }

    fn descent_floor(&self) -> f64 {
        self.terms
            .iter()
            .map(|(_, phi)| phi.descent_floor())
            .fold(0.0, f64::max)
    }
}

/// `φ[f] + ∫ w·f dν + c`: an affine shift of a base functional. Divergences
/// are blind to the shift, which is what makes equivalence classes of
/// generators checkable.
pub struct AffineTilt {
    base: Box<dyn Functional>,
    tilt: GridFunction,
    offset: f64,
}

impl AffineTilt {
    pub fn new(base: Box<dyn Functional>, tilt: GridFunction, offset: f64) -> Self {
        Self { base, tilt, offset }
    }
}

impl Functional for AffineTilt {
    fn name(&self) -> &str {
        "affine_tilt"
    }

    fn value(&self, g: &GridFunction) -> Result<f64> {
        Ok(self.base.value(g)? + self.tilt.inner(g)? + self.offset)
    }

    fn first_variation_coeff(&self, g: &GridFunction) -> Result<GridFunction> {
        self.base.first_variation_coeff(g)?.add(&self.tilt)
    }

    fn second_variation_density(&self, g: &GridFunction, b: &GridFunction) -> Result<GridFunction> {
        self.base.second_variation_density(g, b)
    }

    fn guard_ok(&self, g: &GridFunction) -> bool {
        self.base.guard_ok(g)
    }

    fn first_variation_apply(&self, g: &GridFunction, a: &GridFunction) -> Result<f64> {
        Ok(self.base.first_variation_apply(g, a)? + self.tilt.inner(a)?)
    }

    fn descent_floor(&self) -> f64 {
        self.base.descent_floor()
    }
}

/// Central-difference directional derivative `(φ[g + εa] − φ[g − εa]) / 2ε`:
/// the independent oracle for the analytic first variations.
pub fn gateaux_fd<P: Functional + ?Sized>(
    phi: &P,
    g: &GridFunction,
    a: &GridFunction,
    step: f64,
) -> Result<f64> {
    if !(step > 0.0) || !step.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "step must be positive and finite, got {step}"
        )));
    }
    let plus = phi.value(&g.axpy(step, a)?)?;
    let minus = phi.value(&g.axpy(-step, a)?)?;
    Ok((plus - minus) / (2.0 * step))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::MeasureSpace;
    use alloc::sync::Arc;

    fn unit_grid(cells: usize) -> Arc<MeasureSpace> {
        MeasureSpace::interval(0.0, 1.0, cells).unwrap()
    }

    #[test]
    fn tsd_values_and_variations() {
        let space = unit_grid(64);
        let one = GridFunction::constant(&space, 1.0);
        let phi = TotalSquaredDifference;
        assert!((phi.value(&one).unwrap() - 1.0).abs() <= 1e-12);
        // δφ[1; 1] = 2∫1 = 2, δ²φ[1; 1, 1] = 2‖1‖² = 2.
        assert!((phi.first_variation_apply(&one, &one).unwrap() - 2.0).abs() <= 1e-12);
        assert!((phi.second_variation(&one, &one, &one).unwrap() - 2.0).abs() <= 1e-12);
    }

    #[test]
    fn bias_values_and_variations() {
        let space = unit_grid(64);
        let one = GridFunction::constant(&space, 1.0);
        let two = GridFunction::constant(&space, 2.0);
        let three = GridFunction::constant(&space, 3.0);
        let phi = SquaredBias;
        assert!((phi.value(&two).unwrap() - 4.0).abs() <= 1e-12);
        // δφ[g; a] = 2 ∫g ∫a.
        assert!((phi.first_variation_apply(&one, &three).unwrap() - 6.0).abs() <= 1e-12);
        // δ²φ[g; a, a] = 2 (∫a)².
        assert!((phi.second_variation(&one, &one, &one).unwrap() - 2.0).abs() <= 1e-12);
    }

    #[test]
    fn entropy_values_and_variations() {
        let space = unit_grid(64);
        let one = GridFunction::constant(&space, 1.0);
        let e = GridFunction::constant(&space, core::f64::consts::E);
        let phi = NegativeEntropy;
        assert!((phi.value(&one).unwrap()).abs() <= 1e-12);
        assert!((phi.value(&e).unwrap() - core::f64::consts::E).abs() <= 1e-12);
        // δφ[1; 1] = ∫(1 + ln 1) = 1.
        assert!((phi.first_variation_apply(&one, &one).unwrap() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn entropy_zero_convention_and_guard() {
        let space = unit_grid(4);
        let with_zero = GridFunction::new(&space, vec![0.0, 1.0, 2.0, 3.0]).unwrap();
        let phi = NegativeEntropy;
        // 0 ln 0 = 0: the value exists.
        assert!(phi.value(&with_zero).is_ok());
        // Derivatives do not.
        assert!(!phi.guard_ok(&with_zero));
        assert!(phi.first_variation_coeff(&with_zero).is_err());
        let dir = GridFunction::constant(&space, 1.0);
        assert!(phi.second_variation(&with_zero, &dir, &dir).is_err());
        // Extended-value application: pushing mass onto the dead node.
        assert_eq!(
            phi.first_variation_apply(&with_zero, &dir).unwrap(),
            f64::NEG_INFINITY
        );
        // A direction vanishing on the dead node integrates normally.
        let tangent = GridFunction::new(&space, vec![0.0, 1.0, -1.0, 0.5]).unwrap();
        assert!(phi
            .first_variation_apply(&with_zero, &tangent)
            .unwrap()
            .is_finite());
        let negative = GridFunction::new(&space, vec![-1.0, 1.0, 1.0, 1.0]).unwrap();
        assert!(phi.value(&negative).is_err());
    }

    #[test]
    fn gateaux_matches_analytic_variations() {
        let space = unit_grid(64);
        let one = GridFunction::constant(&space, 1.0);
        let three = GridFunction::constant(&space, 3.0);
        let fd = gateaux_fd(&TotalSquaredDifference, &one, &one, 1e-5).unwrap();
        assert!((fd - 2.0).abs() <= 1e-8);
        let fd = gateaux_fd(&SquaredBias, &one, &three, 1e-5).unwrap();
        assert!((fd - 6.0).abs() <= 1e-7);
    }

    #[test]
    fn gateaux_zero_direction_is_exact_zero() {
        let space = unit_grid(16);
        let g = GridFunction::sample(&space, |x| 1.0 + x);
        let zero = GridFunction::constant(&space, 0.0);
        for phi in [
            &TotalSquaredDifference as &dyn Functional,
            &SquaredBias,
            &NegativeEntropy,
        ] {
            assert_eq!(gateaux_fd(phi, &g, &zero, 1e-5).unwrap(), 0.0);
        }
    }

    #[test]
    fn gateaux_rejects_bad_steps() {
        let space = unit_grid(4);
        let g = GridFunction::constant(&space, 1.0);
        assert!(gateaux_fd(&TotalSquaredDifference, &g, &g, 0.0).is_err());
        assert!(gateaux_fd(&TotalSquaredDifference, &g, &g, -1.0).is_err());
    }

    #[test]
    fn pointwise_square_matches_tsd_value() {
        let space = unit_grid(64);
        let spec = PointwiseSpec::new(|x| x * x, |x| 2.0 * x, 0.0, 0.0);
        let phi = PointwiseFunctional::new(spec).unwrap();
        let one = GridFunction::constant(&space, 1.0);
        assert!((phi.value(&one).unwrap() - 1.0).abs() <= 1e-12);
        let coeff = phi.first_variation_coeff(&one).unwrap();
        assert!((coeff.values()[10] - 2.0).abs() <= 1e-12);
    }

    #[test]
    fn pointwise_rejects_nonconvex_s() {
        let spec = PointwiseSpec::new(|x| -(x * x), |x| -2.0 * x, 0.0, 0.0);
        assert!(PointwiseFunctional::new(spec).is_err());
    }

    #[test]
    fn pointwise_odd_reflection() {
        // s(x) = x², reflected: s̃(-x) = -x² + 2·0 = -(x²)? No: −s(−x)+2s(0)
        // with s(0)=0 gives s̃(x) = −x² for x < 0, keeping s̃' continuous:
        // s̃'(x) = s'(−x) = −2x > 0 slope matching at 0.
        let spec = PointwiseSpec::new(|x| x * x, |x| 2.0 * x, 0.0, 0.0);
        let phi = PointwiseFunctional::new(spec).unwrap();
        assert!((phi.s_tilde(-2.0).unwrap() + 4.0).abs() <= 1e-12);
        assert!((phi.s_tilde_prime(-2.0).unwrap() - 4.0).abs() <= 1e-12);
    }

    #[test]
    fn pointwise_xlnx_errors_outside_domain() {
        let spec = PointwiseSpec::new(|x| x * x.ln(), |x| 1.0 + x.ln(), 0.0, f64::NEG_INFINITY);
        let phi = PointwiseFunctional::new(spec).unwrap();
        let space = unit_grid(4);
        let with_zero = GridFunction::new(&space, vec![0.0, 1.0, 1.0, 1.0]).unwrap();
        // Value at 0 uses the finite limit.
        assert!(phi.value(&with_zero).is_ok());
        // The derivative limit is −∞: coefficient construction fails.
        assert!(phi.first_variation_coeff(&with_zero).is_err());
        assert!(!phi.guard_ok(&with_zero));
    }

    #[test]
    fn second_variation_symmetry_of_shipped_functionals() {
        let space = unit_grid(32);
        let g = GridFunction::sample(&space, |x| 0.5 + x);
        let a = GridFunction::sample(&space, |x| (3.0 * x).sin());
        let b = GridFunction::sample(&space, |x| 1.0 - x * x);
        for phi in [
            &TotalSquaredDifference as &dyn Functional,
            &SquaredBias,
            &NegativeEntropy,
        ] {
            let ab = phi.second_variation(&g, &a, &b).unwrap();
            let ba = phi.second_variation(&g, &b, &a).unwrap();
            let scale = 1.0 + ab.abs();
            assert!((ab - ba).abs() <= 1e-12 * scale, "{}", phi.name());
        }
    }
}
