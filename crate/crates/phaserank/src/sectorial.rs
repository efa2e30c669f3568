//! Sectoriality certification, sectorial decomposition, canonical phases,
//! phase center, sector membership and phase-rank.
//!
//! A matrix is sectorial when its numerical range excludes the origin. Such a
//! matrix is congruent to a diagonal unitary matrix, `A = T* D T`; the angles
//! of `D` are the canonical phases, ordered nonincreasing with spread below
//! pi and center in (-pi, pi].

use std::f64::consts::PI;


use crate::error::{Error, Result};
use crate::linalg::{self, CMat};

/// Phases with |phi| at or below this count as zero in `prank`.
pub const DEFAULT_PHASE_TOL: f64 = 1e-8;

/// Absolute tolerance for sector-membership decisions.
pub const SECTOR_TOL: f64 = 1e-9;

/// Relative condition threshold above which a decomposition carries a warning.
pub const CONDITION_WARNING_THRESHOLD: f64 = 1e12;

const DEFAULT_GRID_POINTS: usize = 720;
const REFINE_STEP_LIMIT: f64 = 1e-10;

// ---------------------------------------------------------------------------
// Phase vectors
// ---------------------------------------------------------------------------

/// Canonical phase sequence: nonincreasing, spread < pi, center in (-pi, pi].
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseVector {
    phases: Vec<f64>,
}

impl PhaseVector {
    /// Builds a phase vector from raw angles: sorts nonincreasing, shifts the
    /// whole vector by a multiple of 2*pi so the center lands in (-pi, pi],
    /// and rejects sequences with spread >= pi.
    pub fn new(mut phases: Vec<f64>) -> Result<Self> {
        if phases.is_empty() {
            return Err(Error::InvalidInput("empty phase vector".into()));
        }
        if phases.iter().any(|p| !p.is_finite()) {
            return Err(Error::InvalidInput("non-finite phase".into()));
        }
        phases.sort_by(|a, b| b.partial_cmp(a).unwrap());
        let spread = phases[0] - phases[phases.len() - 1];
        if spread >= PI {
            return Err(Error::InvalidInput(format!(
                "phase spread {spread:.6} >= pi"
            )));
        }
        let mut center = (phases[0] + phases[phases.len() - 1]) / 2.0;
        while center <= -PI {
            for p in phases.iter_mut() {
                *p += 2.0 * PI;
            }
            center += 2.0 * PI;
        }
        while center > PI {
            for p in phases.iter_mut() {
                *p -= 2.0 * PI;
            }
            center -= 2.0 * PI;
        }
        Ok(Self { phases })
    }

    pub fn len(&self) -> usize {
        self.phases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phases.is_empty()
    }

    /// phi_1, the largest phase.
    pub fn max_phase(&self) -> f64 {
        self.phases[0]
    }

    /// phi_n, the smallest phase.
    pub fn min_phase(&self) -> f64 {
        self.phases[self.phases.len() - 1]
    }

    pub fn center(&self) -> f64 {
        (self.max_phase() + self.min_phase()) / 2.0
    }

    pub fn spread(&self) -> f64 {
        self.max_phase() - self.min_phase()
    }

    /// Nonincreasing phases.
    pub fn as_slice(&self) -> &[f64] {
        &self.phases
    }

    /// Number of phases with |phi| > tol.
    pub fn prank(&self, tol: f64) -> usize {
        self.phases.iter().filter(|p| p.abs() > tol).count()
    }

    /// Signed partial sum of the m largest phases.
    pub fn partial_sum(&self, m: usize) -> f64 {
        self.phases.iter().take(m).sum()
    }
}

// ---------------------------------------------------------------------------
// Sector intervals
// ---------------------------------------------------------------------------

/// An angular interval [alpha, beta] with endpoint-closure flags,
/// 0 < beta - alpha <= pi and center in (-pi, pi].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SectorInterval {
    pub alpha: f64,
    pub beta: f64,
    pub alpha_closed: bool,
    pub beta_closed: bool,
}

impl SectorInterval {
    pub fn new(alpha: f64, beta: f64, alpha_closed: bool, beta_closed: bool) -> Result<Self> {
        let width = beta - alpha;
        if !(width > 0.0 && width <= PI) {
            return Err(Error::InvalidInput(format!(
                "sector width {width:.6} outside (0, pi]"
            )));
        }
        let center = (alpha + beta) / 2.0;
        if !(center > -PI && center <= PI) {
            return Err(Error::InvalidInput(format!(
                "sector center {center:.6} outside (-pi, pi]"
            )));
        }
        Ok(Self {
            alpha,
            beta,
            alpha_closed,
            beta_closed,
        })
    }

    pub fn closed(alpha: f64, beta: f64) -> Result<Self> {
        Self::new(alpha, beta, true, true)
    }

    /// [alpha, beta)
    pub fn half_open_right(alpha: f64, beta: f64) -> Result<Self> {
        Self::new(alpha, beta, true, false)
    }

    /// (alpha, beta]
    pub fn half_open_left(alpha: f64, beta: f64) -> Result<Self> {
        Self::new(alpha, beta, false, true)
    }

    pub fn open(alpha: f64, beta: f64) -> Result<Self> {
        Self::new(alpha, beta, false, false)
    }

    /// Accretive sector [-pi/2, pi/2].
    pub fn positive_real() -> Self {
        Self::closed(-PI / 2.0, PI / 2.0).unwrap()
    }

    /// [0, pi)
    pub fn positive_imaginary() -> Self {
        Self::half_open_right(0.0, PI).unwrap()
    }

    /// (-pi, 0]
    pub fn negative_imaginary() -> Self {
        Self::half_open_left(-PI, 0.0).unwrap()
    }

    /// Whether [lo, hi] fits inside the sector, respecting closure flags.
    /// Closed endpoints tolerate `SECTOR_TOL` of eigensolver noise; open
    /// endpoints demand the same margin strictly inside.
    pub fn contains_interval(&self, lo: f64, hi: f64) -> bool {
        let low_ok = if self.alpha_closed {
            lo >= self.alpha - SECTOR_TOL
        } else {
            lo > self.alpha + SECTOR_TOL
        };
        let high_ok = if self.beta_closed {
            hi <= self.beta + SECTOR_TOL
        } else {
            hi < self.beta - SECTOR_TOL
        };
        low_ok && high_ok
    }

    pub fn contains_phases(&self, phases: &PhaseVector) -> bool {
        self.contains_interval(phases.min_phase(), phases.max_phase())
    }
}

// ---------------------------------------------------------------------------
// Sectoriality certificate
// ---------------------------------------------------------------------------

/// Witness that Herm(e^{-j theta} A) is positive definite, proving that the
/// numerical range avoids the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SectorialityCertificate {
    pub theta: f64,
    pub lambda_min: f64,
}

fn lambda_min_at(a: &CMat, theta: f64) -> f64 {
    linalg::herm_lambda_min(&linalg::hermitian_part(&linalg::rotate(a, -theta)))
}

/// Golden-section ascent of theta -> lambda_min around a bracketing interval.
/// lambda_min is concave on the arc where it is positive, so this polishes
/// reliably once the arc is hit.
fn golden_refine(a: &CMat, mut lo: f64, mut hi: f64, evals: &mut usize) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = lambda_min_at(a, x1);
    let mut f2 = lambda_min_at(a, x2);
    *evals += 2;
    while hi - lo > REFINE_STEP_LIMIT {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = lambda_min_at(a, x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = lambda_min_at(a, x1);
        }
        *evals += 1;
    }
    if f1 >= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Certificate search: optional hint rotations first, then a coarse grid over
/// [-pi, pi) with golden-section refinement around the best point.
pub(crate) fn certificate_search(
    a: &CMat,
    grid_points: usize,
    hints: &[f64],
) -> std::result::Result<SectorialityCertificate, (f64, f64)> {
    let scale = linalg::fro_norm(a).max(f64::MIN_POSITIVE);
    let positive = 1e-13 * scale;
    let mut evals = 0usize;

    for &hint in hints {
        let f0 = lambda_min_at(a, hint);
        evals += 1;
        if f0 > 1e-3 * scale {
            // healthy margin: the Hermitian part is well conditioned here
            return Ok(SectorialityCertificate {
                theta: hint,
                lambda_min: f0,
            });
        }
        if f0 > positive {
            // marginal hit: polish locally for a better-conditioned rotation
            let (th, lm) = golden_refine(a, hint - 0.2, hint + 0.2, &mut evals);
            if lm > f0 {
                return Ok(SectorialityCertificate {
                    theta: th,
                    lambda_min: lm,
                });
            }
            return Ok(SectorialityCertificate {
                theta: hint,
                lambda_min: f0,
            });
        }
    }

    let m = grid_points.max(8);
    let step = 2.0 * PI / m as f64;
    let mut best_theta = -PI;
    let mut best = f64::NEG_INFINITY;
    for i in 0..m {
        let theta = -PI + i as f64 * step;
        let f = lambda_min_at(a, theta);
        if f > best {
            best = f;
            best_theta = theta;
        }
    }
    let (th, lm) = golden_refine(a, best_theta - step, best_theta + step, &mut evals);
    let (th, lm) = if lm >= best { (th, lm) } else { (best_theta, best) };
    if lm > positive {
        Ok(SectorialityCertificate {
            theta: th,
            lambda_min: lm,
        })
    } else {
        Err((th, lm))
    }
}

/// Searches for a rotation making the Hermitian part positive definite.
/// Returns `None` when the refined search tops out non-positive, i.e. the
/// numerical range contains the origin.
pub fn sectoriality_certificate(
    a: &CMat,
    grid_points: usize,
) -> Result<Option<SectorialityCertificate>> {
    linalg::ensure_square_finite(a)?;
    if grid_points < 8 {
        return Err(Error::InvalidInput(format!(
            "grid_points {grid_points} < 8"
        )));
    }
    Ok(certificate_search(a, grid_points, &[]).ok())
}

// ---------------------------------------------------------------------------
// Sectorial decomposition
// ---------------------------------------------------------------------------

/// Congruence A = T* diag(e^{j phi_k}) T with T nonsingular.
#[derive(Debug, Clone)]
pub struct SectorialDecomposition {
    pub t: CMat,
    pub phases: PhaseVector,
    /// Relative reconstruction residual ||T* D T - A|| / ||A||.
    pub residual: f64,
    /// Set when the Hermitian part used in the reduction had condition
    /// number above `CONDITION_WARNING_THRESHOLD`.
    pub condition_warning: bool,
    /// Certificate rotation the decomposition was computed at.
    pub certificate: SectorialityCertificate,
}

impl SectorialDecomposition {
    /// T* diag(e^{j phi_k}) T.
    pub fn reconstruct(&self) -> CMat {
        let d = diagonal_unitary(self.phases.as_slice());
        self.t.adjoint() * d * &self.t
    }
}

/// diag(e^{j phi_k}).
pub fn diagonal_unitary(phases: &[f64]) -> CMat {
    CMat::from_diagonal(&nalgebra::DVector::from_iterator(
        phases.len(),
        phases.iter().map(|&p| linalg::phase_factor(p)),
    ))
}

struct PhaseData {
    phases: PhaseVector,
    t: Option<CMat>,
    condition_warning: bool,
    certificate: SectorialityCertificate,
}

/// Shared reduction: rotate by the certificate angle, split B = H + jK with
/// H positive definite, diagonalize H^{-1/2} K H^{-1/2}, read phases off the
/// arctangents and optionally assemble T.
fn phase_data(a: &CMat, grid_points: usize, hints: &[f64], want_t: bool) -> Result<PhaseData> {
    linalg::ensure_square_finite(a)?;
    let cert = certificate_search(a, grid_points, hints)
        .map_err(|(theta, lambda_min)| Error::NotSectorial { theta, lambda_min })?;
    let theta = cert.theta;
    let b = linalg::rotate(a, -theta);
    let h = linalg::hermitian_part(&b);
    let k = linalg::skew_hermitian_part(&b);
    let (h_vals, h_vecs) = linalg::herm_eigen(&h);
    let n = a.nrows();
    let h_min = h_vals[0];
    let h_max = h_vals[n - 1];
    if h_min <= 0.0 {
        return Err(Error::NotSectorial {
            theta,
            lambda_min: h_min,
        });
    }
    let condition_warning = h_max / h_min > CONDITION_WARNING_THRESHOLD;

    let inv_sqrt = {
        let d = CMat::from_diagonal(&nalgebra::DVector::from_iterator(
            n,
            h_vals.iter().map(|&v| linalg::c(1.0 / v.sqrt(), 0.0)),
        ));
        &h_vecs * d * h_vecs.adjoint()
    };
    let s_raw = &inv_sqrt * &k * &inv_sqrt;
    let s = (&s_raw + s_raw.adjoint()).scale(0.5);
    let (s_vals, s_vecs) = linalg::herm_eigen(&s);

    // nonincreasing phases: descending eigenvalues of S
    let order: Vec<usize> = (0..n).rev().collect();
    let raw: Vec<f64> = order.iter().map(|&i| s_vals[i].atan() + theta).collect();
    let phases = PhaseVector::new(raw)?;

    let t = if want_t {
        let h_sqrt = {
            let d = CMat::from_diagonal(&nalgebra::DVector::from_iterator(
                n,
                h_vals.iter().map(|&v| linalg::c(v.sqrt(), 0.0)),
            ));
            &h_vecs * d * h_vecs.adjoint()
        };
        let mut q_sorted = CMat::zeros(n, n);
        for (dst, &src) in order.iter().enumerate() {
            q_sorted.set_column(dst, &s_vecs.column(src));
        }
        let scaling = CMat::from_diagonal(&nalgebra::DVector::from_iterator(
            n,
            order
                .iter()
                .map(|&i| linalg::c((1.0 + s_vals[i] * s_vals[i]).powf(0.25), 0.0)),
        ));
        Some(scaling * q_sorted.adjoint() * h_sqrt)
    } else {
        None
    };

    Ok(PhaseData {
        phases,
        t,
        condition_warning,
        certificate: cert,
    })
}

/// Sectorial decomposition A = T* D T with D = diag(e^{j phi_k}).
pub fn sectorial_decomposition(a: &CMat) -> Result<SectorialDecomposition> {
    decomposition_with_hints(a, &[])
}

pub(crate) fn decomposition_with_hints(a: &CMat, hints: &[f64]) -> Result<SectorialDecomposition> {
    let data = phase_data(a, DEFAULT_GRID_POINTS, hints, true)?;
    let t = data.t.unwrap();
    let sv = linalg::singular_values(&t);
    if sv[sv.len() - 1] <= 1e-12 * sv[0] {
        return Err(Error::Singular);
    }
    let dec = SectorialDecomposition {
        t,
        phases: data.phases,
        residual: 0.0,
        condition_warning: data.condition_warning,
        certificate: data.certificate,
    };
    let res = linalg::fro_norm(&(dec.reconstruct() - a)) / linalg::fro_norm(a).max(f64::MIN_POSITIVE);
    Ok(SectorialDecomposition { residual: res, ..dec })
}

/// Canonical phases of a sectorial matrix, nonincreasing.
pub fn phases(a: &CMat) -> Result<PhaseVector> {
    Ok(phase_data(a, DEFAULT_GRID_POINTS, &[], false)?.phases)
}

/// Phase computation seeded with candidate certificate rotations; used by the
/// randomized suites where the sector is known in advance.
pub(crate) fn phases_with_hints(a: &CMat, hints: &[f64]) -> Result<PhaseVector> {
    Ok(phase_data(a, DEFAULT_GRID_POINTS, hints, false)?.phases)
}

/// Hint-only phase computation: returns `None` when no hint rotation
/// certifies sectoriality, without falling back to the full grid search.
/// Used for cheap rejection sampling where false negatives are acceptable.
pub(crate) fn phases_hint_only(a: &CMat, hints: &[f64]) -> Result<Option<PhaseVector>> {
    linalg::ensure_square_finite(a)?;
    let scale = linalg::fro_norm(a).max(f64::MIN_POSITIVE);
    for &hint in hints {
        if lambda_min_at(a, hint) > 1e-10 * scale {
            return Ok(Some(phase_data(a, DEFAULT_GRID_POINTS, &[hint], false)?.phases));
        }
    }
    Ok(None)
}

/// Midpoint of the extreme phases, in (-pi, pi].
pub fn phase_center(a: &CMat) -> Result<f64> {
    Ok(phases(a)?.center())
}

/// Phase-rank: the number of canonical phases with |phi| > tol.
pub fn prank(a: &CMat, tol: f64) -> Result<usize> {
    if tol < 0.0 {
        return Err(Error::InvalidInput("negative prank tolerance".into()));
    }
    Ok(phases(a)?.prank(tol))
}

/// Whether the phase interval of `a` fits in `sector`.
pub fn in_sector(a: &CMat, sector: &SectorInterval) -> Result<bool> {
    Ok(sector.contains_phases(&phases(a)?))
}

pub fn is_positive_real(a: &CMat) -> Result<bool> {
    in_sector(a, &SectorInterval::positive_real())
}

pub fn is_positive_imaginary(a: &CMat) -> Result<bool> {
    in_sector(a, &SectorInterval::positive_imaginary())
}

pub fn is_negative_imaginary(a: &CMat) -> Result<bool> {
    in_sector(a, &SectorInterval::negative_imaginary())
}

/// A = H + jK with H, K Hermitian.
pub fn hermitian_split(a: &CMat) -> Result<(CMat, CMat)> {
    linalg::ensure_square_finite(a)?;
    Ok((
        linalg::hermitian_part(a),
        linalg::skew_hermitian_part(a),
    ))
}
