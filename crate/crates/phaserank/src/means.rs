//! Arithmetic and geometric means of sectorial matrices, principal matrix
//! square roots, and matrix logarithms of positive definite and unitary
//! factors.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::linalg::{self, CMat};
use crate::sectorial;

/// Configuration for the geometric mean and its quadrature oracle.
#[derive(Debug, Clone, Copy)]
pub struct MeanConfig {
    /// Rotation angle beta with e^{j beta} M, e^{j beta} N strictly
    /// accretive. `None` selects the negative midpoint of the joint phase
    /// hull automatically.
    pub rotation_beta: Option<f64>,
    /// Gauss-Legendre node count for the quadrature oracle.
    pub quadrature_points: usize,
    /// Bound on the relative Riccati residual ||G M^{-1} G - N||.
    pub residual_tol: f64,
}

impl Default for MeanConfig {
    fn default() -> Self {
        Self {
            rotation_beta: None,
            quadrature_points: 200,
            residual_tol: 1e-8,
        }
    }
}

/// Margin by which rotated inputs must sit inside the open accretive sector.
const SECTOR_MARGIN: f64 = 1e-10;

/// Truncation half-width of the log-substituted quadrature interval; the
/// integrand decays like e^{-|s|} so the tail is below 1e-8 of the value.
const QUADRATURE_HALF_WIDTH: f64 = 20.0;

/// (M + N)/2.
pub fn arithmetic_mean(m: &CMat, n: &CMat) -> Result<CMat> {
    linalg::ensure_square_finite(m)?;
    linalg::ensure_square_finite(n)?;
    if m.nrows() != n.nrows() {
        return Err(Error::DimensionMismatch {
            expected: m.nrows(),
            found: n.nrows(),
        });
    }
    Ok((m + n).scale(0.5))
}

/// Principal matrix square root via complex Schur factorization and the
/// triangular recurrence. The spectrum must avoid the closed negative real
/// axis.
pub fn principal_sqrt(a: &CMat) -> Result<CMat> {
    linalg::ensure_square_finite(a)?;
    let (q, t) = linalg::complex_schur(a)?;
    let s = linalg::upper_triangular_sqrt(&t)?;
    Ok(&q * s * q.adjoint())
}

/// Resolves the rotation for a pair of sectorial matrices: either the
/// explicit beta (validated by strict accretivity of the rotated pair) or
/// the negative midpoint of the joint phase hull.
fn resolve_rotation(m: &CMat, n: &CMat, cfg: &MeanConfig) -> Result<f64> {
    if let Some(beta) = cfg.rotation_beta {
        for x in [m, n] {
            let h = linalg::hermitian_part(&linalg::rotate(x, beta));
            if linalg::herm_lambda_min(&h) <= 0.0 {
                return Err(Error::SectorViolation {
                    lo: -PI / 2.0,
                    hi: PI / 2.0,
                });
            }
        }
        return Ok(beta);
    }
    let pm = sectorial::phases(m)?;
    let pn = sectorial::phases(n)?;
    let lo = pm.min_phase().min(pn.min_phase());
    let hi = pm.max_phase().max(pn.max_phase());
    let spread = hi - lo;
    if spread >= PI - SECTOR_MARGIN {
        return Err(Error::IncompatibleSectors { spread });
    }
    Ok(-(lo + hi) / 2.0)
}

/// Geometric mean M # N: the unique sectorial G with G M^{-1} G = N.
///
/// Computed as e^{-j beta} M'^{1/2} (M'^{-1/2} N' M'^{-1/2})^{1/2} M'^{1/2}
/// with M' = e^{j beta} M, N' = e^{j beta} N strictly accretive. The Riccati
/// residual is checked against `cfg.residual_tol`.
pub fn geometric_mean(m: &CMat, n: &CMat, cfg: &MeanConfig) -> Result<CMat> {
    linalg::ensure_square_finite(m)?;
    linalg::ensure_square_finite(n)?;
    if m.nrows() != n.nrows() {
        return Err(Error::DimensionMismatch {
            expected: m.nrows(),
            found: n.nrows(),
        });
    }
    let beta = resolve_rotation(m, n, cfg)?;
    let mr = linalg::rotate(m, beta);
    let nr = linalg::rotate(n, beta);
    let ms = principal_sqrt(&mr)?;
    let ms_inv = linalg::inverse(&ms)?;
    let middle = principal_sqrt(&(&ms_inv * &nr * &ms_inv))?;
    let g = linalg::rotate(&(&ms * middle * &ms), -beta);

    let res = linalg::fro_norm(&(&g * linalg::inverse(m)? * &g - n));
    let scale = linalg::fro_norm(m) + linalg::fro_norm(n);
    if res > cfg.residual_tol * scale {
        return Err(Error::NoConvergence(format!(
            "geometric mean Riccati residual {:.3e} exceeds {:.3e}",
            res,
            cfg.residual_tol * scale
        )));
    }
    Ok(g)
}

/// Independent quadrature route to the geometric mean:
/// (M # N)^{-1} = (2/pi) * integral of (t M + t^{-1} N)^{-1} dt/t over
/// (0, inf), evaluated after t = e^s by Gauss-Legendre.
///
/// The interval is centered where the two terms balance and widened with the
/// log condition numbers so the truncated tails stay below the quadrature
/// resolution even for ill-conditioned pairs; the node count grows with the
/// widening to hold the per-length resolution of the configured default.
pub fn geometric_mean_quadrature(m: &CMat, n: &CMat, cfg: &MeanConfig) -> Result<CMat> {
    linalg::ensure_square_finite(m)?;
    linalg::ensure_square_finite(n)?;
    if m.nrows() != n.nrows() {
        return Err(Error::DimensionMismatch {
            expected: m.nrows(),
            found: n.nrows(),
        });
    }
    if cfg.quadrature_points < 16 {
        return Err(Error::InvalidInput(format!(
            "quadrature_points {} < 16",
            cfg.quadrature_points
        )));
    }
    let beta = resolve_rotation(m, n, cfg)?;
    let mr = linalg::rotate(m, beta);
    let nr = linalg::rotate(n, beta);

    let center = 0.5 * (linalg::fro_norm(&nr).ln() - linalg::fro_norm(&mr).ln());
    let log_cond = linalg::condition_number(&mr).max(1.0).ln()
        + linalg::condition_number(&nr).max(1.0).ln();
    let half_width = QUADRATURE_HALF_WIDTH + 0.5 * log_cond.min(60.0);
    let points = ((cfg.quadrature_points as f64) * half_width / QUADRATURE_HALF_WIDTH).ceil()
        as usize;

    let (nodes, weights) = linalg::gauss_legendre(points);
    let dim = m.nrows();
    let mut acc = CMat::zeros(dim, dim);
    for (&x, &w) in nodes.iter().zip(weights.iter()) {
        let s = center + half_width * x;
        let term = &mr * linalg::c(s.exp(), 0.0) + &nr * linalg::c((-s).exp(), 0.0);
        acc += linalg::inverse(&term)? * linalg::c(w * half_width, 0.0);
    }
    let g_inv_rotated = acc.scale(2.0 / PI);
    let g_rotated = linalg::inverse(&g_inv_rotated)?;
    Ok(linalg::rotate(&g_rotated, -beta))
}

/// Logarithm of a Hermitian positive definite matrix via its
/// eigendecomposition; the result is Hermitian.
pub fn log_hpd(p: &CMat) -> Result<CMat> {
    linalg::ensure_square_finite(p)?;
    let herm_defect = linalg::fro_norm(&(p - p.adjoint()));
    if herm_defect > 1e-10 * linalg::fro_norm(p).max(f64::MIN_POSITIVE) {
        return Err(Error::InvalidInput(format!(
            "matrix is not Hermitian (defect {herm_defect:.3e})"
        )));
    }
    linalg::hpd_log(&(p + p.adjoint()).scale(0.5))
}

/// Logarithm of a unitary matrix with eigen-angles in (-pi, pi): the
/// skew-Hermitian V diag(j theta_k) V*. Eigenvalues within 1e-12 of -1 are a
/// branch error.
pub fn log_unitary(u: &CMat) -> Result<CMat> {
    linalg::ensure_square_finite(u)?;
    let defect = linalg::unitary_defect(u);
    if defect > 1e-8 {
        return Err(Error::NotUnitary(defect));
    }
    let (v, d) = linalg::diagonalize_normal(u)?;
    let mut log_diag = Vec::with_capacity(d.len());
    for z in &d {
        if (z + linalg::ONE).norm() <= 1e-12 {
            return Err(Error::BranchPoint(format!(
                "unitary eigenvalue {z} within 1e-12 of -1"
            )));
        }
        log_diag.push(linalg::c(0.0, z.arg()));
    }
    let dm = CMat::from_diagonal(&nalgebra::DVector::from_vec(log_diag));
    Ok(&v * dm * v.adjoint())
}

/// Absolute eigen-angles of a unitary matrix, unsorted.
pub fn unitary_angles_abs(u: &CMat) -> Result<Vec<f64>> {
    let (_, angles) = unitary_eigenangles(u)?;
    Ok(angles.into_iter().map(|t| t.abs()).collect())
}

/// Eigen-angles of a unitary matrix in eigensolver order, together with the
/// diagonalizing basis.
pub(crate) fn unitary_eigenangles(u: &CMat) -> Result<(CMat, Vec<f64>)> {
    let defect = linalg::unitary_defect(u);
    if defect > 1e-8 {
        return Err(Error::NotUnitary(defect));
    }
    let (v, d) = linalg::diagonalize_normal(u)?;
    let angles: Vec<f64> = d.iter().map(|z| z.arg()).collect();
    Ok((v, angles))
}
