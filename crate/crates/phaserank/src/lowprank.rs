//! Low phase-rank approximation through geometric means: half-phase
//! truncation approximants, the closed-form optimal objective for
//! positive-imaginary matrices, feasibility reports, the negative-imaginary
//! mirror, and the rank/phase-rank witness construction.

use crate::error::{Error, Result};
use crate::gauge::Gauge;
use crate::linalg::{self, CMat};
use crate::sectorial::{
    self, diagonal_unitary, PhaseVector, SectorInterval, SectorialDecomposition,
    DEFAULT_PHASE_TOL,
};

/// Canonical half-phase truncation approximant: E = T* L T where L carries
/// e^{j phi_k / 2} for the r largest phases and 1 elsewhere. prank(E) <= r
/// holds by construction.
#[derive(Debug, Clone)]
pub struct TruncationApproximant {
    pub e: CMat,
    pub r: usize,
    /// Decomposition the approximant was assembled from. For the
    /// negative-imaginary mirror this is the decomposition of A^{-1}.
    pub source: SectorialDecomposition,
}

/// Canonical element of the r-half-truncation set, assembled from this
/// module's deterministic sectorial decomposition. Ties at the truncation
/// boundary keep the first r phases in stable sorted order.
pub fn truncation_sp(a: &CMat, r: usize) -> Result<TruncationApproximant> {
    truncation_sp_hinted(a, r, &[])
}

pub(crate) fn truncation_sp_hinted(
    a: &CMat,
    r: usize,
    hints: &[f64],
) -> Result<TruncationApproximant> {
    linalg::ensure_square_finite(a)?;
    let dec = sectorial::decomposition_with_hints(a, hints)?;
    truncation_from_decomposition(&dec, r)
}

/// Builds the canonical approximant from an existing decomposition.
pub fn truncation_from_decomposition(
    dec: &SectorialDecomposition,
    r: usize,
) -> Result<TruncationApproximant> {
    let n = dec.phases.len();
    if r > n {
        return Err(Error::InvalidInput(format!("r = {r} > n = {n}")));
    }
    let half: Vec<f64> = dec
        .phases
        .as_slice()
        .iter()
        .enumerate()
        .map(|(k, &p)| if k < r { p / 2.0 } else { 0.0 })
        .collect();
    let e = dec.t.adjoint() * diagonal_unitary(&half) * &dec.t;
    Ok(TruncationApproximant {
        e,
        r,
        source: dec.clone(),
    })
}

/// Gauge of the canonical phases of E^{-1} A E^{-1}.
pub fn objective(a: &CMat, e: &CMat, gauge: Gauge) -> Result<f64> {
    objective_hinted(a, e, gauge, &[])
}

pub(crate) fn objective_hinted(a: &CMat, e: &CMat, gauge: Gauge, hints: &[f64]) -> Result<f64> {
    let conj = conjugate_by_inverse(a, e)?;
    let ph = sectorial::phases_with_hints(&conj, hints)?;
    gauge.eval(ph.as_slice())
}

/// E^{-1} A E^{-1}.
pub fn conjugate_by_inverse(a: &CMat, e: &CMat) -> Result<CMat> {
    linalg::ensure_square_finite(a)?;
    linalg::ensure_square_finite(e)?;
    if a.nrows() != e.nrows() {
        return Err(Error::DimensionMismatch {
            expected: a.nrows(),
            found: e.nrows(),
        });
    }
    let e_inv = linalg::inverse(e)?;
    Ok(&e_inv * a * &e_inv)
}

/// Closed-form optimum for positive-imaginary A:
/// Phi(0, ..., 0, phi_{r+1}, ..., phi_n).
pub fn optimal_value(a: &CMat, r: usize, gauge: Gauge) -> Result<f64> {
    let ph = sectorial::phases(a)?;
    optimal_value_from_phases(&ph, r, gauge)
}

pub(crate) fn optimal_value_from_phases(
    ph: &PhaseVector,
    r: usize,
    gauge: Gauge,
) -> Result<f64> {
    let n = ph.len();
    if r > n {
        return Err(Error::InvalidInput(format!("r = {r} > n = {n}")));
    }
    if !SectorInterval::positive_imaginary().contains_phases(ph) {
        return Err(Error::SectorViolation {
            lo: 0.0,
            hi: std::f64::consts::PI,
        });
    }
    let mut padded = vec![0.0; r];
    padded.extend_from_slice(&ph.as_slice()[r..]);
    gauge.eval(&padded)
}

/// Constraint diagnostics for a candidate approximant E.
#[derive(Debug, Clone, serde::Serialize)]
pub struct FeasibilityReport {
    pub e_sectorial: bool,
    pub e_prank: Option<usize>,
    pub prank_within_budget: bool,
    pub conjugate_sectorial: bool,
    /// `None` when positive-imaginariness was not required.
    pub conjugate_positive_imaginary: Option<bool>,
    pub conjugate_phases: Option<Vec<f64>>,
    /// Max-gauge objective, present exactly when all requested checks pass.
    pub objective: Option<f64>,
    pub feasible: bool,
}

impl FeasibilityReport {
    /// Objective under another gauge, available when the report is feasible.
    pub fn objective_under(&self, gauge: Gauge) -> Option<f64> {
        self.conjugate_phases
            .as_ref()
            .filter(|_| self.feasible)
            .and_then(|ph| gauge.eval(ph).ok())
    }
}

/// Checks the low phase-rank constraint set for (A, E): E sectorial with
/// prank(E) <= r and E^{-1} A E^{-1} sectorial; when
/// `require_positive_imaginary` is set, the conjugate must additionally sit
/// in [0, pi). Failures are reported, not raised.
pub fn is_feasible(a: &CMat, e: &CMat, r: usize, require_positive_imaginary: bool) -> Result<FeasibilityReport> {
    is_feasible_hinted(a, e, r, require_positive_imaginary, &[], &[])
}

pub(crate) fn is_feasible_hinted(
    a: &CMat,
    e: &CMat,
    r: usize,
    require_positive_imaginary: bool,
    e_hints: &[f64],
    conj_hints: &[f64],
) -> Result<FeasibilityReport> {
    linalg::ensure_square_finite(a)?;
    linalg::ensure_square_finite(e)?;

    let mut report = FeasibilityReport {
        e_sectorial: false,
        e_prank: None,
        prank_within_budget: false,
        conjugate_sectorial: false,
        conjugate_positive_imaginary: None,
        conjugate_phases: None,
        objective: None,
        feasible: false,
    };

    match sectorial::phases_with_hints(e, e_hints) {
        Ok(ph) => {
            report.e_sectorial = true;
            let pr = ph.prank(DEFAULT_PHASE_TOL);
            report.e_prank = Some(pr);
            report.prank_within_budget = pr <= r;
        }
        Err(Error::NotSectorial { .. }) => return Ok(report),
        Err(other) => return Err(other),
    }

    let conj = match conjugate_by_inverse(a, e) {
        Ok(c) => c,
        Err(Error::Singular) => return Ok(report),
        Err(other) => return Err(other),
    };
    match sectorial::phases_with_hints(&conj, conj_hints) {
        Ok(ph) => {
            report.conjugate_sectorial = true;
            if require_positive_imaginary {
                report.conjugate_positive_imaginary =
                    Some(SectorInterval::positive_imaginary().contains_phases(&ph));
            }
            report.conjugate_phases = Some(ph.as_slice().to_vec());
        }
        Err(Error::NotSectorial { .. }) => return Ok(report),
        Err(other) => return Err(other),
    }

    report.feasible = report.e_sectorial
        && report.prank_within_budget
        && report.conjugate_sectorial
        && report.conjugate_positive_imaginary.unwrap_or(true);
    if report.feasible {
        report.objective = report
            .conjugate_phases
            .as_ref()
            .and_then(|ph| Gauge::Max.eval(ph).ok());
    }
    Ok(report)
}

/// Mirror solution for negative-imaginary A: the optimal approximant is the
/// inverse of the canonical truncation of A^{-1}, with objective
/// Phi(phi_1, ..., phi_{n-r}, 0, ..., 0).
pub fn negative_imaginary_solution(a: &CMat, r: usize) -> Result<TruncationApproximant> {
    let ph = sectorial::phases(a)?;
    if !SectorInterval::negative_imaginary().contains_phases(&ph) {
        return Err(Error::SectorViolation {
            lo: -std::f64::consts::PI,
            hi: 0.0,
        });
    }
    let a_inv = linalg::inverse(a)?;
    let trunc = truncation_sp(&a_inv, r)?;
    let e = linalg::inverse(&trunc.e)?;
    Ok(TruncationApproximant {
        e,
        r,
        source: trunc.source,
    })
}

/// Objective formula of the negative-imaginary mirror:
/// Phi(phi_1, ..., phi_{n-r}, 0, ..., 0).
pub fn negative_imaginary_value(a: &CMat, r: usize, gauge: Gauge) -> Result<f64> {
    let ph = sectorial::phases(a)?;
    let n = ph.len();
    if r > n {
        return Err(Error::InvalidInput(format!("r = {r} > n = {n}")));
    }
    if !SectorInterval::negative_imaginary().contains_phases(&ph) {
        return Err(Error::SectorViolation {
            lo: -std::f64::consts::PI,
            hi: 0.0,
        });
    }
    let mut padded: Vec<f64> = ph.as_slice()[..n - r].to_vec();
    padded.extend(std::iter::repeat(0.0).take(r));
    gauge.eval(&padded)
}

/// Witness for the rank/phase-rank bound: M = T* T > 0 and R = A - M with
/// rank(R) = prank(A).
pub fn prank_rank_witness(a: &CMat) -> Result<(CMat, CMat)> {
    let dec = sectorial::sectorial_decomposition(a)?;
    let m = dec.t.adjoint() * &dec.t;
    let r = a - &m;
    Ok((r, m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, fro_norm, identity, phase_factor, ONE};
    use nalgebra::DVector;
    use std::f64::consts::PI;

    fn diag(entries: &[num_complex::Complex64]) -> CMat {
        CMat::from_diagonal(&DVector::from_row_slice(entries))
    }

    fn pi_example() -> CMat {
        diag(&[phase_factor(PI / 2.0), phase_factor(PI / 4.0), ONE])
    }

    #[test]
    fn truncation_sp_diagonal_case() {
        let a = pi_example();
        let t = truncation_sp(&a, 1).unwrap();
        let expect = diag(&[phase_factor(PI / 4.0), ONE, ONE]);
        assert!(fro_norm(&(&t.e - &expect)) < 1e-10, "{}", &t.e);
        let conj = conjugate_by_inverse(&a, &t.e).unwrap();
        let conj_expect = diag(&[ONE, phase_factor(PI / 4.0), ONE]);
        assert!(fro_norm(&(&conj - &conj_expect)) < 1e-10);
        assert!(truncation_sp(&a, 4).is_err());
    }

    #[test]
    fn truncation_sp_full_and_empty() {
        let a = pi_example();
        // r = 0: E = T*T positive definite, conjugate phases = phi(A)
        let t0 = truncation_sp(&a, 0).unwrap();
        assert_eq!(sectorial::prank(&t0.e, DEFAULT_PHASE_TOL).unwrap(), 0);
        let conj = conjugate_by_inverse(&a, &t0.e).unwrap();
        let ph = sectorial::phases(&conj).unwrap();
        let pa = sectorial::phases(&a).unwrap();
        for (x, y) in ph.as_slice().iter().zip(pa.as_slice()) {
            assert!((x - y).abs() < 1e-9);
        }

        // r = n: conjugate is T^{-1} T^{-*} positive definite, objective 0
        let tn = truncation_sp(&a, 3).unwrap();
        let conj = conjugate_by_inverse(&a, &tn.e).unwrap();
        assert_eq!(sectorial::prank(&conj, DEFAULT_PHASE_TOL).unwrap(), 0);
        let obj = objective(&a, &tn.e, Gauge::Max).unwrap();
        assert!(obj < 1e-9);
    }

    #[test]
    fn objective_examples() {
        let a = pi_example();
        // E = I: objective = Phi(phi(A))
        let obj = objective(&a, &identity(3), Gauge::Max).unwrap();
        assert!((obj - PI / 2.0).abs() < 1e-10);
        // optimal truncation at r = 1 with Max: phi_2 = pi/4
        let t = truncation_sp(&a, 1).unwrap();
        let obj = objective(&a, &t.e, Gauge::Max).unwrap();
        assert!((obj - PI / 4.0).abs() < 1e-9);
    }

    #[test]
    fn optimal_value_formula() {
        let a = pi_example();
        assert!((optimal_value(&a, 1, Gauge::Max).unwrap() - PI / 4.0).abs() < 1e-12);
        assert!(optimal_value(&a, 3, Gauge::Max).unwrap().abs() < 1e-12);
        assert!(
            (optimal_value(&a, 1, Gauge::KyFan(2)).unwrap() - PI / 4.0).abs() < 1e-12,
            "phi_2 + phi_3 = pi/4 + 0"
        );
        // not positive-imaginary: theorem scope error
        let b = diag(&[phase_factor(PI / 3.0), phase_factor(-PI / 4.0)]);
        assert!(matches!(
            optimal_value(&b, 1, Gauge::Max),
            Err(Error::SectorViolation { .. })
        ));
    }

    #[test]
    fn feasibility_of_identity_and_infeasible_cases() {
        let a = pi_example();
        let rep = is_feasible(&a, &identity(3), 0, true).unwrap();
        assert!(rep.feasible);
        assert!((rep.objective.unwrap() - PI / 2.0).abs() < 1e-9);
        assert_eq!(rep.e_prank, Some(0));

        // prank(E) too large for the budget
        let e = diag(&[phase_factor(0.4), ONE, ONE]);
        let rep = is_feasible(&a, &e, 0, true).unwrap();
        assert!(!rep.feasible && rep.e_sectorial && !rep.prank_within_budget);

        // non-sectorial E
        let e_bad = diag(&[ONE, -ONE, ONE]);
        let rep = is_feasible(&a, &e_bad, 3, false).unwrap();
        assert!(!rep.feasible && !rep.e_sectorial);
    }

    #[test]
    fn negative_imaginary_mirror() {
        let a = diag(&[
            phase_factor(-PI / 2.0),
            phase_factor(-PI / 4.0),
            ONE,
        ]);
        let sol = negative_imaginary_solution(&a, 1).unwrap();
        let obj = objective(&a, &sol.e, Gauge::Max).unwrap();
        let val = negative_imaginary_value(&a, 1, Gauge::Max).unwrap();
        assert!((val - PI / 4.0).abs() < 1e-12, "val = {val}");
        assert!((obj - val).abs() < 1e-9, "obj = {obj}, val = {val}");
        assert!(sectorial::prank(&sol.e, DEFAULT_PHASE_TOL).unwrap() <= 1);

        // positive definite input: value 0 for all r
        let p = identity(3).scale(2.0);
        for r in 0..=3 {
            assert!(negative_imaginary_value(&p, r, Gauge::Max).unwrap() < 1e-12);
        }
        assert!(negative_imaginary_solution(&pi_example(), 1).is_err());
    }

    #[test]
    fn witness_on_paper_example() {
        let a = diag(&[c(11.0, 1.0), c(11.0, -1.0)]);
        let (r_mat, m_mat) = prank_rank_witness(&a).unwrap();
        // M positive definite
        assert!(crate::linalg::herm_lambda_min(&m_mat) > 0.0);
        assert!(fro_norm(&(&r_mat + &m_mat - &a)) < 1e-12);
        // rank(R) = prank(A) = 2
        assert_eq!(linalg::numerical_rank(&r_mat, 1e-9), 2);
        assert_eq!(sectorial::prank(&a, DEFAULT_PHASE_TOL).unwrap(), 2);

        // the paper's M does strictly better: rank(A - M) = 1 < prank(A)
        let m_paper = CMat::from_row_slice(
            2,
            2,
            &[
                c(10.0, 0.0),
                c(-(2.0f64).sqrt(), 0.0),
                c(-(2.0f64).sqrt(), 0.0),
                c(10.0, 0.0),
            ],
        );
        let r_paper = &a - &m_paper;
        assert_eq!(linalg::numerical_rank(&r_paper, 1e-9), 1);
    }

    #[test]
    fn witness_on_positive_definite_input() {
        // prank 0: the witness R = A - T*T vanishes entirely, so its rank
        // must be judged against the scale of A rather than of R itself
        let p = CMat::from_row_slice(2, 2, &[c(2.0, 0.0), c(0.3, 0.1), c(0.3, -0.1), c(1.0, 0.0)]);
        let (r_mat, _) = prank_rank_witness(&p).unwrap();
        let sv = linalg::singular_values(&r_mat);
        assert!(sv[0] < 1e-12 * fro_norm(&p), "sigma_1 = {:.3e}", sv[0]);
    }
}
