//! Scalar numeric kernels: adaptive quadrature, golden-section minimization,
//! bisection root-finding.

use alloc::format;

use crate::error::{Error, Result};

#[cfg(not(feature = "std"))]
#[allow(unused_imports)]
use num_traits::Float;

/// Hard cap on integrand evaluations per quadrature call.
const MAX_QUAD_EVALS: u64 = 20_000_000;
/// Deepest bisection level of the adaptive rule (panel width `(b-a)/2^60`).
const MAX_QUAD_DEPTH: u32 = 60;

/// Adaptive Simpson integration of `f` over `[a, b]` to relative tolerance
/// `rel_tol`, with Richardson extrapolation on accepted panels.
pub fn integrate_adaptive<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rel_tol: f64) -> Result<f64> {
    if !(a.is_finite() && b.is_finite()) || a > b {
        return Err(Error::InvalidArgument(format!(
            "bad integration bounds [{a}, {b}]"
        )));
    }
    if a == b {
        return Ok(0.0);
    }
    let fa = eval(&f, a)?;
    let m = 0.5 * (a + b);
    let fm = eval(&f, m)?;
    let fb = eval(&f, b)?;
    let whole = simpson(a, b, fa, fm, fb);
    // Absolute budget from the coarse estimate plus a per-panel relative
    // criterion. The relative term is scale-free, so integrands whose mass
    // the coarse estimate misses (boundary layers, steep power laws) still
    // terminate once each panel is resolved to `rel_tol` of its own mass.
    let eps = rel_tol * whole.abs().max(1e-300);
    let mut evals: u64 = 3;
    panel(
        &f,
        a,
        b,
        fa,
        fm,
        fb,
        whole,
        eps,
        rel_tol,
        MAX_QUAD_DEPTH,
        &mut evals,
    )
}

#[inline]
fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

fn eval<F: Fn(f64) -> f64>(f: &F, x: f64) -> Result<f64> {
    let y = f(x);
    if y.is_nan() {
        return Err(Error::NumericFailure(format!("integrand NaN at x = {x}")));
    }
    Ok(y)
}

#[allow(clippy::too_many_arguments)]
fn panel<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    eps: f64,
    rel_tol: f64,
    depth: u32,
    evals: &mut u64,
) -> Result<f64> {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = eval(f, lm)?;
    let frm = eval(f, rm)?;
    *evals += 2;
    if *evals > MAX_QUAD_EVALS {
        return Err(Error::NumericFailure(format!(
            "quadrature exceeded {MAX_QUAD_EVALS} evaluations on [{a}, {b}]"
        )));
    }
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    if delta.abs() <= 15.0 * (eps + rel_tol * (left + right).abs()) {
        return Ok(left + right + delta / 15.0);
    }
    if depth == 0 {
        return Err(Error::NumericFailure(format!(
            "quadrature failed to converge on [{a}, {b}] (residual {delta:e})"
        )));
    }
    let l = panel(
        f,
        a,
        m,
        fa,
        flm,
        fm,
        left,
        0.5 * eps,
        rel_tol,
        depth - 1,
        evals,
    )?;
    let r = panel(
        f,
        m,
        b,
        fm,
        frm,
        fb,
        right,
        0.5 * eps,
        rel_tol,
        depth - 1,
        evals,
    )?;
    Ok(l + r)
}

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search for a minimizer of a unimodal `f` on `[a, b]`.
/// Returns the midpoint of the final bracket of width `<= abs_tol`.
pub fn golden_section_min<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, abs_tol: f64) -> Result<f64> {
    if !(a < b) {
        return Err(Error::InvalidArgument(format!("bad bracket [{a}, {b}]")));
    }
    if !(abs_tol > 0.0) {
        return Err(Error::InvalidArgument("tolerance must be positive".into()));
    }
    let mut lo = a;
    let mut hi = b;
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > abs_tol {
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Bisection root of `f` on `[a, b]`; the endpoints must bracket a sign
/// change. Returns the midpoint of the final bracket of width `<= abs_tol`.
pub fn bisect_root<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, abs_tol: f64) -> Result<f64> {
    if !(a < b) {
        return Err(Error::InvalidArgument(format!("bad bracket [{a}, {b}]")));
    }
    let mut lo = a;
    let mut hi = b;
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::InvalidArgument(format!(
            "no sign change on [{a}, {b}]"
        )));
    }
    while hi - lo > abs_tol {
        let mid = 0.5 * (lo + hi);
        let fmid = f(mid);
        if fmid == 0.0 {
            return Ok(mid);
        }
        if fmid.signum() == flo.signum() {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadrature_on_polynomials() {
        let i = integrate_adaptive(|x| x * x, 0.0, 1.0, 1e-12).unwrap();
        assert!((i - 1.0 / 3.0).abs() < 1e-12);
        let i = integrate_adaptive(|x| x.exp(), 0.0, 1.0, 1e-12).unwrap();
        assert!((i - (core::f64::consts::E - 1.0)).abs() < 1e-11);
    }

    #[test]
    fn quadrature_handles_boundary_layers() {
        // Mass concentrated near the right endpoint.
        let n = 1000.0;
        let i = integrate_adaptive(|x: f64| (n * (x - 1.0)).exp(), 0.0, 1.0, 1e-10).unwrap();
        let exact = (1.0 - (-n).exp()) / n;
        assert!((i - exact).abs() / exact < 1e-9);
    }

    #[test]
    fn quadrature_rejects_nan() {
        assert!(matches!(
            integrate_adaptive(|x| (x - 0.5).ln(), 0.0, 1.0, 1e-8),
            Err(Error::NumericFailure(_))
        ));
    }

    #[test]
    fn golden_section_parabola() {
        let x = golden_section_min(|x| (x - 0.3).powi(2), -1.0, 2.0, 1e-10).unwrap();
        assert!((x - 0.3).abs() < 1e-9);
    }

    #[test]
    fn bisection_finds_root() {
        let x = bisect_root(|x| x * x - 2.0, 0.0, 2.0, 1e-13).unwrap();
        assert!((x - core::f64::consts::SQRT_2).abs() < 1e-12);
        assert!(bisect_root(|x| x * x + 1.0, 0.0, 2.0, 1e-13).is_err());
    }
}
