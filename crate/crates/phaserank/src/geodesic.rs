//! Symmetric polar decomposition A = P U P, the two-gauge geodesic distance
//! on strictly accretive matrices, and the geodesic low phase-rank
//! approximation with its closed-form optimum.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};
use crate::gauge::Gauge;
use crate::linalg::{self, CMat};
use crate::lowprank;
use crate::means::{self, MeanConfig};
use crate::sectorial::{self, SectorInterval, DEFAULT_PHASE_TOL};

/// Strict-interior margin for the accretive sector check.
const SECTOR_MARGIN: f64 = 1e-10;
/// Tolerance for treating the rotated input as unitary, which permits
/// half-closed sector boundaries.
const UNITARY_FAST_PATH_TOL: f64 = 1e-10;

/// A = P U P with P Hermitian positive definite and U unitary carrying the
/// canonical phases of A. P does not depend on the rotation used; U is
/// P^{-1} A P^{-1}.
#[derive(Debug, Clone)]
pub struct SymmetricPolarDecomposition {
    pub p: CMat,
    pub u: CMat,
    /// Sector-center rotation the input was validated at.
    pub alpha: f64,
    /// Relative reconstruction residual ||P U P - A|| / ||A||.
    pub residual: f64,
}

/// Gauges and sector center for the geodesic distance: gauge_p weighs the
/// positive definite log-part, gauge_u the unitary log-part.
#[derive(Debug, Clone, Copy)]
pub struct GeodesicConfig {
    pub gauge_p: Gauge,
    pub gauge_u: Gauge,
    pub alpha: f64,
}

impl GeodesicConfig {
    pub fn new(gauge_p: Gauge, gauge_u: Gauge, alpha: f64) -> Result<Self> {
        if !(alpha.abs() < FRAC_PI_2) {
            return Err(Error::InvalidInput(format!(
                "sector center alpha = {alpha} outside (-pi/2, pi/2)"
            )));
        }
        Ok(Self {
            gauge_p,
            gauge_u,
            alpha,
        })
    }
}

impl Default for GeodesicConfig {
    fn default() -> Self {
        Self {
            gauge_p: Gauge::Max,
            gauge_u: Gauge::Max,
            alpha: 0.0,
        }
    }
}

/// Checks that phases sit in [-pi/2, pi/2] around zero with at most one
/// endpoint touched (half-closed intervals are admissible); strict interior
/// is reported separately so the caller can pick the construction route.
fn accretive_sector_status(lo: f64, hi: f64) -> Result<bool> {
    if lo < -FRAC_PI_2 - SECTOR_MARGIN || hi > FRAC_PI_2 + SECTOR_MARGIN {
        return Err(Error::SectorViolation {
            lo: -FRAC_PI_2,
            hi: FRAC_PI_2,
        });
    }
    let touch_lo = lo <= -FRAC_PI_2 + SECTOR_MARGIN;
    let touch_hi = hi >= FRAC_PI_2 - SECTOR_MARGIN;
    if touch_lo && touch_hi {
        return Err(Error::SectorViolation {
            lo: -FRAC_PI_2,
            hi: FRAC_PI_2,
        });
    }
    Ok(!(touch_lo || touch_hi))
}

/// Symmetric polar decomposition of a matrix with e^{-j alpha} A in the
/// accretive sector.
///
/// The positive definite part is the square root of the geometric mean
/// B # B* with B = e^{-j alpha} A: the mean is Hermitian positive definite
/// by symmetry and its Riccati property forces P^{-1} B P^{-1} unitary.
/// Unitary inputs take a direct path, which also covers the half-closed
/// sector boundaries; non-unitary inputs must sit strictly inside.
pub fn symmetric_polar(a: &CMat, alpha: f64) -> Result<SymmetricPolarDecomposition> {
    linalg::ensure_square_finite(a)?;
    let n = a.nrows();
    let b = linalg::rotate(a, -alpha);

    if linalg::unitary_defect(&b) <= UNITARY_FAST_PATH_TOL {
        let (_, angles) = means::unitary_eigenangles(&b)?;
        let lo = angles.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = angles.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        accretive_sector_status(lo, hi)?;
        let u = linalg::unitarize(a)?;
        let residual = linalg::fro_norm(&(&u - a)) / linalg::fro_norm(a).max(f64::MIN_POSITIVE);
        return Ok(SymmetricPolarDecomposition {
            p: linalg::identity(n),
            u,
            alpha,
            residual,
        });
    }

    let ph = sectorial::phases_with_hints(&b, &[0.0])?;
    let interior = accretive_sector_status(ph.min_phase(), ph.max_phase())?;
    if !interior {
        return Err(Error::SectorViolation {
            lo: -FRAC_PI_2,
            hi: FRAC_PI_2,
        });
    }

    let cfg = MeanConfig {
        rotation_beta: Some(0.0),
        ..MeanConfig::default()
    };
    let g = means::geometric_mean(&b, &b.adjoint(), &cfg)?;
    let g_herm = (&g + g.adjoint()).scale(0.5);
    let p = linalg::hpd_sqrt(&g_herm)?;
    let p_inv = linalg::inverse(&p)?;
    let u = linalg::unitarize(&(&p_inv * a * &p_inv))?;
    let residual =
        linalg::fro_norm(&(&p * &u * &p - a)) / linalg::fro_norm(a).max(f64::MIN_POSITIVE);
    if residual > 1e-8 {
        return Err(Error::NoConvergence(format!(
            "symmetric polar residual {residual:.3e} exceeds 1e-8"
        )));
    }
    Ok(SymmetricPolarDecomposition {
        p,
        u,
        alpha,
        residual,
    })
}

/// Geodesic distance
/// sqrt(||log(P_A^{-1} P_B^2 P_A^{-1})||_{Phi1}^2 + ||log(U_A* U_B)||_{Phi2}^2).
pub fn geodesic_distance(a: &CMat, b: &CMat, cfg: &GeodesicConfig) -> Result<f64> {
    let pa = symmetric_polar(a, cfg.alpha)?;
    let pb = symmetric_polar(b, cfg.alpha)?;
    distance_from_parts(&pa, &pb, cfg)
}

/// Distance evaluated from precomputed symmetric polar parts.
pub fn distance_from_parts(
    pa: &SymmetricPolarDecomposition,
    pb: &SymmetricPolarDecomposition,
    cfg: &GeodesicConfig,
) -> Result<f64> {
    if pa.p.nrows() != pb.p.nrows() {
        return Err(Error::DimensionMismatch {
            expected: pa.p.nrows(),
            found: pb.p.nrows(),
        });
    }
    let pa_inv = linalg::inverse(&pa.p)?;
    let mid = &pa_inv * &pb.p * &pb.p * &pa_inv;
    let log_p = linalg::hpd_log(&(&mid + mid.adjoint()).scale(0.5))?;
    let d_p = crate::gauge::ui_norm(cfg.gauge_p, &log_p)?;

    let w = pa.u.adjoint() * &pb.u;
    let (_, angles) = means::unitary_eigenangles(&w)?;
    let abs_angles: Vec<f64> = angles.iter().map(|t| t.abs()).collect();
    let d_u = cfg.gauge_u.eval(&abs_angles)?;
    Ok((d_p * d_p + d_u * d_u).sqrt())
}

/// Result of the geodesic truncation: the approximant, the absolute phases
/// that were zeroed (they determine the attained distance), the minimizer
/// uniqueness flag, and the polar parts of the source.
#[derive(Debug, Clone)]
pub struct GeodesicTruncation {
    pub matrix: CMat,
    pub r: usize,
    pub zeroed_abs_phases: Vec<f64>,
    /// Unique exactly when |phi~_r| > |phi~_{r+1}| strictly.
    pub unique: bool,
    pub polar: SymmetricPolarDecomposition,
}

/// Optimal geodesic approximant with prank at most r: keeps the r
/// largest-|phase| eigen-angles of the unitary part and sets the rest to
/// zero (diagonal entries to one, keeping the factor unitary).
pub fn geodesic_truncation_full(a: &CMat, r: usize, alpha: f64) -> Result<GeodesicTruncation> {
    linalg::ensure_square_finite(a)?;
    let n = a.nrows();
    if r > n {
        return Err(Error::InvalidInput(format!("r = {r} > n = {n}")));
    }
    let polar = symmetric_polar(a, alpha)?;
    let (v, angles) = means::unitary_eigenangles(&polar.u)?;

    // sort indices by |angle| nonincreasing, stable in eigensolver order
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &k| angles[k].abs().partial_cmp(&angles[i].abs()).unwrap());
    let kept: Vec<usize> = order[..r].to_vec();
    let zeroed: Vec<f64> = order[r..].iter().map(|&i| angles[i].abs()).collect();
    let unique = if r == 0 || r == n {
        true
    } else {
        angles[order[r - 1]].abs() - angles[order[r]].abs() > DEFAULT_PHASE_TOL
    };

    let mut diag = vec![linalg::ONE; n];
    for &i in &kept {
        diag[i] = linalg::phase_factor(angles[i]);
    }
    let u_r = &v * CMat::from_diagonal(&nalgebra::DVector::from_vec(diag)) * v.adjoint();
    let matrix = &polar.p * u_r * &polar.p;
    Ok(GeodesicTruncation {
        matrix,
        r,
        zeroed_abs_phases: zeroed,
        unique,
        polar,
    })
}

/// The optimal approximant matrix alone.
pub fn geodesic_truncation(a: &CMat, r: usize, alpha: f64) -> Result<CMat> {
    Ok(geodesic_truncation_full(a, r, alpha)?.matrix)
}

/// Closed-form optimal distance: gauge_u applied to the n - r smallest
/// absolute phases of the unitary part, padded with zeros.
pub fn geodesic_optimal_value(a: &CMat, r: usize, cfg: &GeodesicConfig) -> Result<f64> {
    linalg::ensure_square_finite(a)?;
    let n = a.nrows();
    if r > n {
        return Err(Error::InvalidInput(format!("r = {r} > n = {n}")));
    }
    let polar = symmetric_polar(a, cfg.alpha)?;
    let (_, angles) = means::unitary_eigenangles(&polar.u)?;
    let mut abs: Vec<f64> = angles.iter().map(|t| t.abs()).collect();
    abs.sort_by(|x, y| y.partial_cmp(x).unwrap());
    let mut padded = vec![0.0; r];
    padded.extend_from_slice(&abs[r..]);
    cfg.gauge_u.eval(&padded)
}

/// Cross-validation of the two problem formulations on unitary
/// positive-imaginary input.
#[derive(Debug, Clone, serde::Serialize)]
pub struct UnitaryEquivalenceReport {
    pub r: usize,
    /// ||E*E - I|| for the canonical truncation approximant.
    pub truncation_unitary_defect: f64,
    /// Closed-form value Phi(0, ..., 0, phi_{r+1}, ..., phi_n).
    pub formula_value: f64,
    /// Optimum of the geometric-mean formulation.
    pub mean_optimum: f64,
    /// Optimum of the geodesic formulation.
    pub geodesic_optimum: f64,
    /// Geodesic distance attained by the squared canonical truncation.
    pub squared_truncation_distance: f64,
    pub max_residual: f64,
}

/// Verifies on unitary positive-imaginary A that (i) the canonical
/// truncation approximant is unitary, (ii) its square attains the geodesic
/// optimum, and (iii) both formulations' optima equal the closed form.
pub fn unitary_equivalence_check(a: &CMat, r: usize, gauge: Gauge) -> Result<UnitaryEquivalenceReport> {
    linalg::ensure_square_finite(a)?;
    let defect = linalg::unitary_defect(a);
    if defect > 1e-8 {
        return Err(Error::NotUnitary(defect));
    }
    let ph = sectorial::phases(a)?;
    if !SectorInterval::positive_imaginary().contains_phases(&ph) {
        return Err(Error::SectorViolation { lo: 0.0, hi: PI });
    }

    let formula_value = lowprank::optimal_value_from_phases(&ph, r, gauge)?;
    let trunc = lowprank::truncation_sp(a, r)?;
    let truncation_unitary_defect = linalg::unitary_defect(&trunc.e);
    let mean_optimum = lowprank::objective(a, &trunc.e, gauge)?;

    let e_squared = &trunc.e * &trunc.e;
    let ph_sq = sectorial::phases(&e_squared)?;
    let hull_lo = ph.min_phase().min(ph_sq.min_phase());
    let hull_hi = ph.max_phase().max(ph_sq.max_phase());
    // any alpha with the hull inside (alpha - pi/2, alpha + pi/2] works and
    // the distance does not depend on it; clamp the hull midpoint into the
    // admissible window intersected with (-pi/2, pi/2)
    let margin = 1e-6;
    let alpha = ((hull_lo + hull_hi) / 2.0)
        .max(hull_hi - FRAC_PI_2 + margin)
        .min(hull_lo + FRAC_PI_2 - margin)
        .clamp(-FRAC_PI_2 + margin, FRAC_PI_2 - margin);
    let cfg = GeodesicConfig::new(gauge, gauge, alpha)?;

    let geodesic_optimum = geodesic_optimal_value(a, r, &cfg)?;
    let squared_truncation_distance = geodesic_distance(a, &e_squared, &cfg)?;

    let max_residual = [
        (mean_optimum - formula_value).abs(),
        (geodesic_optimum - formula_value).abs(),
        (squared_truncation_distance - geodesic_optimum).abs(),
    ]
    .into_iter()
    .fold(0.0f64, f64::max);

    Ok(UnitaryEquivalenceReport {
        r,
        truncation_unitary_defect,
        formula_value,
        mean_optimum,
        geodesic_optimum,
        squared_truncation_distance,
        max_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, fro_norm, identity, phase_factor, ONE, ZERO};
    use nalgebra::DVector;

    fn diag(entries: &[num_complex::Complex64]) -> CMat {
        CMat::from_diagonal(&DVector::from_row_slice(entries))
    }

    #[test]
    fn polar_of_hermitian_pd() {
        let a = CMat::from_row_slice(2, 2, &[c(2.0, 0.0), c(0.4, 0.1), c(0.4, -0.1), c(1.2, 0.0)]);
        let spd = symmetric_polar(&a, 0.0).unwrap();
        // P = A^{1/2}, U = I
        assert!(fro_norm(&(&spd.p * &spd.p - &a)) < 1e-9 * fro_norm(&a));
        assert!(fro_norm(&(&spd.u - identity(2))) < 1e-8);
        assert!(spd.residual < 1e-10);
    }

    #[test]
    fn polar_of_unitary_input() {
        let a = diag(&[phase_factor(0.7), phase_factor(-0.4)]);
        let spd = symmetric_polar(&a, 0.0).unwrap();
        assert!(fro_norm(&(&spd.p - identity(2))) < 1e-12);
        assert!(fro_norm(&(&spd.u - &a)) < 1e-12);
    }

    #[test]
    fn polar_of_jordan_block() {
        let a = CMat::from_row_slice(2, 2, &[ONE, ONE, ZERO, ONE]);
        let spd = symmetric_polar(&a, 0.0).unwrap();
        assert!(spd.residual < 1e-8);
        assert!(linalg::unitary_defect(&spd.u) < 1e-10);
        assert!(linalg::herm_lambda_min(&spd.p) > 0.0);
        // phases(U) = phases(A) = (pi/6, -pi/6)
        let ph = sectorial::phases(&spd.u).unwrap();
        assert!((ph.as_slice()[0] - std::f64::consts::PI / 6.0).abs() < 1e-8);
        assert!((ph.as_slice()[1] + std::f64::consts::PI / 6.0).abs() < 1e-8);
    }

    #[test]
    fn polar_rejects_out_of_sector() {
        let a = diag(&[phase_factor(2.0), phase_factor(-2.0)]);
        assert!(symmetric_polar(&a, 0.0).is_err());
        // rotated into sector it works
        let b = diag(&[phase_factor(2.0), phase_factor(1.2)]);
        assert!(symmetric_polar(&b, 0.0).is_err());
        assert!(symmetric_polar(&b, 1.5).is_ok());
    }

    #[test]
    fn distance_identities() {
        let cfg = GeodesicConfig::default();
        let a = CMat::from_row_slice(2, 2, &[c(2.0, 0.3), c(0.2, 0.1), c(0.1, -0.2), c(1.4, -0.2)]);
        assert!(geodesic_distance(&a, &a, &cfg).unwrap() < 1e-9);

        // A = I, B = e^{j theta} I: distance |theta| under Max
        let theta = 0.6;
        let b = identity(2) * phase_factor(theta);
        let d = geodesic_distance(&identity(2), &b, &cfg).unwrap();
        assert!((d - theta).abs() < 1e-10, "d = {d}");

        // A = 4I, B = I: P parts 2I and I, distance log 4
        let d = geodesic_distance(&identity(2).scale(4.0), &identity(2), &cfg).unwrap();
        assert!((d - 4.0f64.ln()).abs() < 1e-9, "d = {d}");
    }

    #[test]
    fn distance_symmetry() {
        let cfg = GeodesicConfig::default();
        let a = CMat::from_row_slice(2, 2, &[c(2.0, 0.3), c(0.2, 0.1), c(0.1, -0.2), c(1.4, -0.2)]);
        let b = CMat::from_row_slice(2, 2, &[c(1.0, -0.1), c(0.1, 0.0), ZERO, c(2.2, 0.4)]);
        let dab = geodesic_distance(&a, &b, &cfg).unwrap();
        let dba = geodesic_distance(&b, &a, &cfg).unwrap();
        assert!((dab - dba).abs() < 1e-8);
        assert!(dab > 0.0);
    }

    #[test]
    fn truncation_of_diagonal_unitary() {
        let a = diag(&[phase_factor(PI / 3.0), phase_factor(-PI / 4.0)]);
        let full = geodesic_truncation_full(&a, 1, 0.0).unwrap();
        let expect = diag(&[phase_factor(PI / 3.0), ONE]);
        assert!(fro_norm(&(&full.matrix - &expect)) < 1e-10);
        assert!(full.unique);
        let cfg = GeodesicConfig::default();
        let d = geodesic_distance(&a, &full.matrix, &cfg).unwrap();
        assert!((d - PI / 4.0).abs() < 1e-9, "d = {d}");
        assert!((geodesic_optimal_value(&a, 1, &cfg).unwrap() - PI / 4.0).abs() < 1e-12);
    }

    #[test]
    fn truncation_endpoints() {
        let a = CMat::from_row_slice(2, 2, &[c(2.0, 0.3), c(0.2, 0.1), c(0.1, -0.2), c(1.4, -0.2)]);
        let cfg = GeodesicConfig::default();

        // r = n: approximant is A itself, distance 0
        let full = geodesic_truncation(&a, 2, 0.0).unwrap();
        assert!(fro_norm(&(&full - &a)) < 1e-7 * fro_norm(&a));
        assert!(geodesic_optimal_value(&a, 2, &cfg).unwrap() < 1e-12);

        // r = 0: approximant is P^2, the positive definite part
        let t = geodesic_truncation_full(&a, 0, 0.0).unwrap();
        let p_sq = &t.polar.p * &t.polar.p;
        assert!(fro_norm(&(&t.matrix - &p_sq)) < 1e-9 * fro_norm(&p_sq));
        let d = geodesic_distance(&a, &t.matrix, &cfg).unwrap();
        let v = geodesic_optimal_value(&a, 0, &cfg).unwrap();
        assert!((d - v).abs() < 1e-7, "d = {d}, v = {v}");
        assert!(geodesic_truncation(&a, 3, 0.0).is_err());
    }

    #[test]
    fn truncated_matrix_has_low_prank() {
        let a = CMat::from_row_slice(2, 2, &[c(2.0, 0.4), c(0.3, 0.2), c(0.2, -0.3), c(1.5, -0.5)]);
        for r in 0..=2 {
            let t = geodesic_truncation(&a, r, 0.0).unwrap();
            assert!(sectorial::prank(&t, DEFAULT_PHASE_TOL).unwrap() <= r);
        }
    }

    #[test]
    fn unitary_equivalence_on_diagonal_case() {
        let a = diag(&[phase_factor(PI / 2.0), phase_factor(PI / 4.0), ONE]);
        let rep = unitary_equivalence_check(&a, 1, Gauge::Max).unwrap();
        assert!((rep.formula_value - PI / 4.0).abs() < 1e-10);
        assert!(rep.max_residual < 1e-7, "{rep:?}");
        assert!(rep.truncation_unitary_defect < 1e-9);

        let id_rep = unitary_equivalence_check(&identity(3), 0, Gauge::Sum).unwrap();
        assert!(id_rep.formula_value.abs() < 1e-12);
        assert!(id_rep.max_residual < 1e-8);

        // not unitary / not positive-imaginary are scope errors
        let h = identity(2).scale(2.0);
        assert!(matches!(
            unitary_equivalence_check(&h, 1, Gauge::Max),
            Err(Error::NotUnitary(_))
        ));
        let ni = diag(&[phase_factor(-0.3), ONE]);
        assert!(matches!(
            unitary_equivalence_check(&ni, 1, Gauge::Max),
            Err(Error::SectorViolation { .. })
        ));
    }

    #[test]
    fn rotation_invariance() {
        // the rotation only gates the sector check: the polar parts, the
        // truncation and the distance are built from the original matrix, so
        // the distance of a rotated pair at the shifted center matches the
        // unrotated pair at center 0, and the truncation is center-agnostic
        let x = CMat::from_row_slice(2, 2, &[c(2.0, 0.3), c(0.2, 0.1), c(0.1, -0.2), c(1.4, -0.2)]);
        let y = CMat::from_row_slice(2, 2, &[c(1.1, -0.2), c(0.1, 0.0), ZERO, c(2.0, 0.4)]);
        let alpha = 0.5;
        let cfg0 = GeodesicConfig::default();
        let cfg_a = GeodesicConfig::new(Gauge::Max, Gauge::Max, alpha).unwrap();
        let d0 = geodesic_distance(&x, &y, &cfg0).unwrap();
        let da = geodesic_distance(
            &linalg::rotate(&x, alpha),
            &linalg::rotate(&y, alpha),
            &cfg_a,
        )
        .unwrap();
        assert!((d0 - da).abs() < 1e-9, "{d0} vs {da}");

        // truncation independent of the admissible center
        let t1 = geodesic_truncation(&x, 1, 0.0).unwrap();
        let t2 = geodesic_truncation(&x, 1, 0.2).unwrap();
        assert!(fro_norm(&(&t1 - &t2)) < 1e-9 * fro_norm(&t1));
    }
}
