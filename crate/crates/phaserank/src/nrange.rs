//! Numerical range boundary computation and zero-exclusion testing.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, CMat};
use crate::sectorial;

/// Support points of the numerical range at the recorded angles. Each point
/// is x* A x for a unit vector x and lies on the boundary of W(A); the
/// polygon through them is an inner approximation of the convex set.
#[derive(Debug, Clone)]
pub struct BoundaryPointSet {
    pub points: Vec<Complex64>,
    pub thetas: Vec<f64>,
}

impl BoundaryPointSet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// The point of W(A) maximizing Re(e^{-j theta} z): x* A x for a unit
/// eigenvector x of the largest eigenvalue of Herm(e^{-j theta} A). On a
/// degenerate top eigenspace any maximizing eigenvector is accepted.
pub fn support_point(a: &CMat, theta: f64) -> Result<Complex64> {
    linalg::ensure_square_finite(a)?;
    let h = linalg::hermitian_part(&linalg::rotate(a, -theta));
    let (vals, vecs) = linalg::herm_eigen(&h);
    let top = vals.len() - 1;
    let x = vecs.column(top);
    let ax = a * x;
    Ok(x.dotc(&ax))
}

/// m support points at equispaced angles over [-pi, pi).
pub fn boundary(a: &CMat, m: usize) -> Result<BoundaryPointSet> {
    linalg::ensure_square_finite(a)?;
    if m < 8 {
        return Err(Error::InvalidInput(format!("m = {m} < 8")));
    }
    let mut points = Vec::with_capacity(m);
    let mut thetas = Vec::with_capacity(m);
    for i in 0..m {
        let theta = -PI + 2.0 * PI * i as f64 / m as f64;
        points.push(support_point(a, theta)?);
        thetas.push(theta);
    }
    Ok(BoundaryPointSet { points, thetas })
}

/// Whether 0 lies in W(A): false exactly when the sectoriality certificate
/// search (over an m-point grid) finds a separating rotation.
pub fn contains_zero(a: &CMat, m: usize, _tol: f64) -> Result<bool> {
    linalg::ensure_square_finite(a)?;
    if m < 8 {
        return Err(Error::InvalidInput(format!("m = {m} < 8")));
    }
    Ok(sectorial::sectoriality_certificate(a, m)?.is_none())
}
