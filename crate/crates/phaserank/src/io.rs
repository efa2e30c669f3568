//! Matrix file I/O and report types for the command-line surface.
//!
//! Matrices travel as JSON with split real/imaginary arrays so files stay
//! inspectable and diffable; serde_json's shortest round-trip float encoding
//! makes write-then-read bit-exact for finite doubles.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, CMat};
use crate::sectorial::{self, SectorInterval, DEFAULT_PHASE_TOL};

/// On-disk matrix format: dimension, re/im entry arrays, optional label.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct MatrixFile {
    pub n: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl MatrixFile {
    pub fn from_matrix(a: &CMat, label: Option<String>) -> Self {
        let n = a.nrows();
        let re = (0..n)
            .map(|i| (0..a.ncols()).map(|j| a[(i, j)].re).collect())
            .collect();
        let im = (0..n)
            .map(|i| (0..a.ncols()).map(|j| a[(i, j)].im).collect())
            .collect();
        Self { n, re, im, label }
    }

    pub fn to_matrix(&self) -> Result<CMat> {
        if self.re.len() != self.n || self.im.len() != self.n {
            return Err(Error::InvalidInput(format!(
                "matrix file: {} re-rows / {} im-rows for n = {}",
                self.re.len(),
                self.im.len(),
                self.n
            )));
        }
        for (name, rows) in [("re", &self.re), ("im", &self.im)] {
            if let Some(row) = rows.iter().find(|row| row.len() != self.n) {
                return Err(Error::InvalidInput(format!(
                    "matrix file: ragged {name} row of length {} for n = {}",
                    row.len(),
                    self.n
                )));
            }
        }
        let a = CMat::from_fn(self.n, self.n, |i, j| {
            linalg::c(self.re[i][j], self.im[i][j])
        });
        linalg::ensure_square_finite(&a)?;
        Ok(a)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(self)
            .map_err(|e| Error::InvalidInput(e.to_string()))?;
        std::fs::write(path, text)
            .map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))
    }
}

/// Reads a matrix JSON file straight into a matrix.
pub fn read_matrix(path: &Path) -> Result<CMat> {
    MatrixFile::read(path)?.to_matrix()
}

/// Full phase analysis of one matrix. Non-sectorial inputs report
/// `sectorial: false` with the remaining fields absent.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub sectorial: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate_theta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate_lambda_min: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phases: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phase_center: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub prank: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sector_memberships: Option<BTreeMap<String, bool>>,
}

/// Analyzes a matrix: certificate, phases, center, prank at `tol`, and
/// membership in the three named sectors.
pub fn analyze(a: &CMat, tol: f64) -> Result<AnalysisReport> {
    linalg::ensure_square_finite(a)?;
    if tol < 0.0 {
        return Err(Error::InvalidInput("negative prank tolerance".into()));
    }
    let dec = match sectorial::sectorial_decomposition(a) {
        Ok(dec) => dec,
        Err(Error::NotSectorial { .. }) => {
            return Ok(AnalysisReport {
                sectorial: false,
                certificate_theta: None,
                certificate_lambda_min: None,
                phases: None,
                phase_center: None,
                prank: None,
                sector_memberships: None,
            })
        }
        Err(other) => return Err(other),
    };
    let ph = &dec.phases;
    let mut memberships = BTreeMap::new();
    memberships.insert(
        "positive_real".to_string(),
        SectorInterval::positive_real().contains_phases(ph),
    );
    memberships.insert(
        "positive_imaginary".to_string(),
        SectorInterval::positive_imaginary().contains_phases(ph),
    );
    memberships.insert(
        "negative_imaginary".to_string(),
        SectorInterval::negative_imaginary().contains_phases(ph),
    );
    Ok(AnalysisReport {
        sectorial: true,
        certificate_theta: Some(dec.certificate.theta),
        certificate_lambda_min: Some(dec.certificate.lambda_min),
        phases: Some(ph.as_slice().to_vec()),
        phase_center: Some(ph.center()),
        prank: Some(ph.prank(tol)),
        sector_memberships: Some(memberships),
    })
}

/// Default prank tolerance re-exported for the CLI.
pub const DEFAULT_ANALYZE_TOL: f64 = DEFAULT_PHASE_TOL;

/// Boundary points as CSV text with a `theta,re,im` header.
pub fn boundary_csv(boundary: &crate::nrange::BoundaryPointSet) -> String {
    let mut out = String::from("theta,re,im\n");
    for (theta, p) in boundary.thetas.iter().zip(boundary.points.iter()) {
        out.push_str(&format!("{theta},{},{}\n", p.re, p.im));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, identity, phase_factor};
    use nalgebra::DVector;
    use std::f64::consts::PI;

    #[test]
    fn matrix_file_round_trip_is_bit_exact() {
        let a = CMat::from_fn(3, 3, |i, j| {
            c(
                (i as f64 + 0.1) * 7.3e-17 + j as f64,
                -(j as f64) * 1.0e300 - 0.123456789012345678,
            )
        });
        let mf = MatrixFile::from_matrix(&a, Some("t".into()));
        let text = serde_json::to_string(&mf).unwrap();
        let back: MatrixFile = serde_json::from_str(&text).unwrap();
        let b = back.to_matrix().unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn matrix_file_rejects_ragged_and_nonfinite() {
        let mf = MatrixFile {
            n: 2,
            re: vec![vec![1.0, 2.0], vec![3.0]],
            im: vec![vec![0.0; 2]; 2],
            label: None,
        };
        assert!(mf.to_matrix().is_err());
        let mf = MatrixFile {
            n: 2,
            re: vec![vec![f64::NAN, 0.0], vec![0.0, 1.0]],
            im: vec![vec![0.0; 2]; 2],
            label: None,
        };
        assert!(mf.to_matrix().is_err());
    }

    #[test]
    fn analyze_reports_sectorial_matrix() {
        let a = CMat::from_diagonal(&DVector::from_vec(vec![
            phase_factor(PI / 3.0),
            phase_factor(-PI / 4.0),
        ]));
        let rep = analyze(&a, DEFAULT_ANALYZE_TOL).unwrap();
        assert!(rep.sectorial);
        assert_eq!(rep.prank, Some(2));
        let ph = rep.phases.unwrap();
        assert!((ph[0] - PI / 3.0).abs() < 1e-10);
        assert!((ph[1] + PI / 4.0).abs() < 1e-10);
        assert!((rep.phase_center.unwrap() - PI / 24.0).abs() < 1e-10);
        let ms = rep.sector_memberships.unwrap();
        assert!(ms["positive_real"]);
        assert!(!ms["positive_imaginary"]);
        assert!(!ms["negative_imaginary"]);
    }

    #[test]
    fn analyze_reports_non_sectorial() {
        let a = CMat::from_diagonal(&DVector::from_vec(vec![c(1.0, 0.0), c(-1.0, 0.0)]));
        let rep = analyze(&a, 1e-8).unwrap();
        assert!(!rep.sectorial);
        assert!(rep.phases.is_none());
    }

    #[test]
    fn boundary_csv_shape() {
        let b = crate::nrange::boundary(&identity(2), 8).unwrap();
        let csv = boundary_csv(&b);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "theta,re,im");
        assert_eq!(lines.len(), 9);
        assert!(lines[1].split(',').count() == 3);
    }
}
