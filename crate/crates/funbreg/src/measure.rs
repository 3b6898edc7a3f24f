//! Discrete measure spaces and the functions living on them.
//!
//! A [`MeasureSpace`] is a finite carrier for a Borel measure ν: an ordered
//! list of node locations with a nonnegative weight per node. Interval
//! quadrature spaces discretize Lebesgue-type measures on `[a, b]` with the
//! midpoint rule; Dirac sums carry point masses. A [`GridFunction`] samples a
//! real function at the nodes, and `∫ f dν` reduces to the weighted sum
//! `Σ wᵢ f(xᵢ)` either way.
//!
//! Grid functions may be signed: perturbation directions in the variational
//! calculus are unconstrained. Membership in the admissible cone (all values
//! ≥ 0) is enforced only by [`GridFunction::nonnegative`] and checked where
//! an operation requires it.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

#[cfg(not(feature = "std"))]
#[allow(unused_imports)]
use num_traits::Float;

/// How the node weights are to be read.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpaceKind {
    /// Weights are quadrature weights for an interval measure.
    IntervalQuadrature,
    /// Weights are point masses of a sum of Dirac measures.
    DiracSum,
}

/// A finite measure space: strictly increasing nodes with nonnegative weights.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasureSpace {
    kind: SpaceKind,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl MeasureSpace {
    /// Midpoint-rule discretization of `[a, b]` into `cells` equal cells:
    /// node `i` sits at the cell center, each weight is the cell width.
    ///
    /// Node locations avoid the endpoints, so densities with jumps at the
    /// boundary and integrands needing strictly interior points stay safe.
    pub fn interval(a: f64, b: f64, cells: usize) -> Result<Arc<Self>> {
        if !(a.is_finite() && b.is_finite()) || a >= b {
            return Err(Error::InvalidDomain(format!(
                "interval [{a}, {b}] is empty or unordered"
            )));
        }
        if cells == 0 {
            return Err(Error::InvalidArgument("cells must be >= 1".into()));
        }
        let h = (b - a) / cells as f64;
        let nodes = (0..cells).map(|i| a + (i as f64 + 0.5) * h).collect();
        let weights = vec![h; cells];
        Ok(Arc::new(Self {
            kind: SpaceKind::IntervalQuadrature,
            nodes,
            weights,
        }))
    }

    /// Sum of Dirac measures `Σ mᵢ δ_{pᵢ}`. Points must be strictly
    /// increasing (hence distinct) so values align with `nodes()`.
    pub fn dirac(points: Vec<f64>, masses: Vec<f64>) -> Result<Arc<Self>> {
        if points.is_empty() {
            return Err(Error::InvalidArgument("at least one point required".into()));
        }
        if points.len() != masses.len() {
            return Err(Error::InvalidArgument(format!(
                "{} points vs {} masses",
                points.len(),
                masses.len()
            )));
        }
        for pair in points.windows(2) {
            if !(pair[0] < pair[1]) {
                return Err(Error::InvalidArgument(format!(
                    "points must be strictly increasing (got {} then {})",
                    pair[0], pair[1]
                )));
            }
        }
        if masses.iter().any(|&m| !(m >= 0.0)) {
            return Err(Error::InvalidArgument("masses must be nonnegative".into()));
        }
        Ok(Arc::new(Self {
            kind: SpaceKind::DiracSum,
            nodes: points,
            weights: masses,
        }))
    }

    /// Dirac sum with unit masses.
    pub fn dirac_unit(points: Vec<f64>) -> Result<Arc<Self>> {
        let masses = vec![1.0; points.len()];
        Self::dirac(points, masses)
    }

    pub fn kind(&self) -> SpaceKind {
        self.kind
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// ν of the whole carrier: `Σ wᵢ`.
    pub fn total_mass(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Whether a function on `other` may be integrated against `self`.
    /// Pointer equality is the fast path; structurally equal spaces are
    /// also accepted so independently built identical grids interoperate.
    pub fn is_compatible(self: &Arc<Self>, other: &Arc<Self>) -> bool {
        Arc::ptr_eq(self, other) || **self == **other
    }

    /// `∫ f dν = Σ wᵢ f(xᵢ)`.
    pub fn integrate(self: &Arc<Self>, f: &GridFunction) -> Result<f64> {
        if !self.is_compatible(f.space()) {
            return Err(Error::IncompatibleSpace(
                "function lives on a different space".into(),
            ));
        }
        Ok(dot3(&self.weights, f.values()))
    }

    /// `‖f‖_{L^p(ν)}`. `p` must satisfy `p >= 1`; `p = ∞` gives the sup of
    /// `|f|` over the nodes.
    pub fn lp_norm(self: &Arc<Self>, f: &GridFunction, p: f64) -> Result<f64> {
        if !self.is_compatible(f.space()) {
            return Err(Error::IncompatibleSpace(
                "function lives on a different space".into(),
            ));
        }
        if p.is_nan() || p < 1.0 {
            return Err(Error::InvalidArgument(format!("p = {p} is below 1")));
        }
        if p.is_infinite() {
            return Ok(f.linf());
        }
        let mut acc = 0.0;
        for (&v, &w) in f.values().iter().zip(&self.weights) {
            acc += v.abs().powf(p) * w;
        }
        Ok(acc.powf(1.0 / p))
    }
}

#[inline]
fn dot3(w: &[f64], v: &[f64]) -> f64 {
    w.iter().zip(v).map(|(&wi, &vi)| wi * vi).sum()
}

/// Real values sampled at the nodes of a [`MeasureSpace`].
///
/// Immutable after construction; clones share the space.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    space: Arc<MeasureSpace>,
    values: Vec<f64>,
}

impl GridFunction {
    /// A (possibly signed) function from raw values. Only the length is
    /// checked; use [`GridFunction::nonnegative`] for admissible functions.
    pub fn new(space: &Arc<MeasureSpace>, values: Vec<f64>) -> Result<Self> {
        if values.len() != space.len() {
            return Err(Error::InvalidArgument(format!(
                "{} values for {} nodes",
                values.len(),
                space.len()
            )));
        }
        Ok(Self {
            space: Arc::clone(space),
            values,
        })
    }

    /// A member of the admissible cone: every value must be `>= 0`.
    pub fn nonnegative(space: &Arc<MeasureSpace>, values: Vec<f64>) -> Result<Self> {
        let f = Self::new(space, values)?;
        match f.values.iter().position(|&v| !(v >= 0.0)) {
            None => Ok(f),
            Some(i) => Err(Error::DomainViolation(format!(
                "value {} at node {i} is negative",
                f.values[i]
            ))),
        }
    }

    pub fn constant(space: &Arc<MeasureSpace>, c: f64) -> Self {
        Self {
            space: Arc::clone(space),
            values: vec![c; space.len()],
        }
    }

    /// Sample a closure at the node locations.
    pub fn sample<F: Fn(f64) -> f64>(space: &Arc<MeasureSpace>, f: F) -> Self {
        Self {
            space: Arc::clone(space),
            values: space.nodes().iter().map(|&x| f(x)).collect(),
        }
    }

    pub fn space(&self) -> &Arc<MeasureSpace> {
        &self.space
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.values.iter().all(|&v| v >= 0.0)
    }

    pub fn map<F: Fn(f64) -> f64>(&self, f: F) -> Self {
        Self {
            space: Arc::clone(&self.space),
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn zip_map<F: Fn(f64, f64) -> f64>(&self, other: &Self, f: F) -> Result<Self> {
        self.check_space(other)?;
        Ok(Self {
            space: Arc::clone(&self.space),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_map(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_map(other, |a, b| a - b)
    }

    pub fn scale(&self, c: f64) -> Self {
        self.map(|v| c * v)
    }

    /// `self + c * dir`.
    pub fn axpy(&self, c: f64, dir: &Self) -> Result<Self> {
        self.zip_map(dir, |a, d| a + c * d)
    }

    /// `∫ self dν`.
    pub fn integral(&self) -> f64 {
        dot3(self.space.weights(), &self.values)
    }

    /// `∫ self · other dν`.
    pub fn inner(&self, other: &Self) -> Result<f64> {
        self.check_space(other)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .zip(self.space.weights())
            .map(|((&a, &b), &w)| a * b * w)
            .sum())
    }

    /// Sup norm over the nodes.
    pub fn linf(&self) -> f64 {
        self.values.iter().fold(0.0, |m, &v| m.max(v.abs()))
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().fold(f64::INFINITY, |m, &v| m.min(v))
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().fold(f64::NEG_INFINITY, |m, &v| m.max(v))
    }

    fn check_space(&self, other: &Self) -> Result<()> {
        if self.space.is_compatible(&other.space) {
            Ok(())
        } else {
            Err(Error::IncompatibleSpace(incompat_msg()))
        }
    }
}

fn incompat_msg() -> String {
    "grid functions live on different spaces".into()
}
