//! Symmetric gauge functions, unitarily invariant norms, Ky-Fan phase
//! functionals, weak submajorization and the SVD truncation baseline.

use crate::error::{Error, Result};
use crate::linalg::{self, CMat};
use crate::sectorial;

/// Absolute tolerance on partial sums in majorization comparisons; phases
/// carry eigensolver noise.
pub const MAJORIZATION_TOL: f64 = 1e-9;

/// A symmetric gauge function selector. Evaluation is permutation- and
/// sign-invariant, positive away from zero, absolutely homogeneous and
/// subadditive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gauge {
    /// Sum of the k largest absolute values, 1 <= k <= n.
    KyFan(usize),
    /// Largest absolute value.
    Max,
    /// Sum of all absolute values.
    Sum,
    /// (sum |x_i|^p)^{1/p}, p >= 1.
    Lp(f64),
}

impl Gauge {
    /// Applies the gauge to a real vector.
    pub fn eval(&self, xs: &[f64]) -> Result<f64> {
        if xs.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidInput("non-finite gauge argument".into()));
        }
        match *self {
            Gauge::KyFan(k) => {
                if k == 0 || k > xs.len() {
                    return Err(Error::GaugeOutOfRange(format!(
                        "KyFan k = {k} outside 1..={}",
                        xs.len()
                    )));
                }
                let mut abs: Vec<f64> = xs.iter().map(|x| x.abs()).collect();
                abs.sort_by(|a, b| b.partial_cmp(a).unwrap());
                Ok(abs.iter().take(k).sum())
            }
            Gauge::Max => Ok(xs.iter().fold(0.0f64, |m, x| m.max(x.abs()))),
            Gauge::Sum => Ok(xs.iter().map(|x| x.abs()).sum()),
            Gauge::Lp(p) => {
                if p < 1.0 {
                    return Err(Error::GaugeOutOfRange(format!("Lp p = {p} < 1")));
                }
                Ok(xs.iter().map(|x| x.abs().powf(p)).sum::<f64>().powf(1.0 / p))
            }
        }
    }

    /// Parses "max", "sum", "kyfan:k" or "lp:p".
    pub fn parse(s: &str) -> Result<Gauge> {
        let lower = s.to_ascii_lowercase();
        match lower.as_str() {
            "max" => return Ok(Gauge::Max),
            "sum" => return Ok(Gauge::Sum),
            _ => {}
        }
        if let Some(k) = lower.strip_prefix("kyfan:") {
            let k: usize = k
                .parse()
                .map_err(|_| Error::InvalidInput(format!("bad gauge spec '{s}'")))?;
            return Ok(Gauge::KyFan(k));
        }
        if let Some(p) = lower.strip_prefix("lp:") {
            let p: f64 = p
                .parse()
                .map_err(|_| Error::InvalidInput(format!("bad gauge spec '{s}'")))?;
            return Ok(Gauge::Lp(p));
        }
        Err(Error::InvalidInput(format!(
            "unknown gauge '{s}' (expected max|kyfan:k|sum|lp:p)"
        )))
    }
}

impl std::fmt::Display for Gauge {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Gauge::KyFan(k) => write!(f, "kyfan:{k}"),
            Gauge::Max => write!(f, "max"),
            Gauge::Sum => write!(f, "sum"),
            Gauge::Lp(p) => write!(f, "lp:{p}"),
        }
    }
}

/// Unitarily invariant norm ||A||_Phi = Phi(sigma(A)).
pub fn ui_norm(gauge: Gauge, a: &CMat) -> Result<f64> {
    linalg::ensure_square_finite(a)?;
    gauge.eval(&linalg::singular_values(a))
}

/// Keeps the r largest singular triplets of A.
pub fn svd_truncate(a: &CMat, r: usize) -> Result<CMat> {
    linalg::ensure_square_finite(a)?;
    let n = a.nrows();
    if r > n {
        return Err(Error::InvalidInput(format!("r = {r} > n = {n}")));
    }
    if r == 0 {
        return Ok(CMat::zeros(n, n));
    }
    let (u, s, v_t) = linalg::svd(a)?;
    let d = CMat::from_diagonal(&nalgebra::DVector::from_iterator(
        r,
        s.iter().take(r).map(|&x| linalg::c(x, 0.0)),
    ));
    Ok(u.columns(0, r) * d * v_t.rows(0, r))
}

/// Schmidt-Mirsky optimal value Phi(0,...,0, sigma_{r+1},..., sigma_n).
pub fn schmidt_mirsky_value(a: &CMat, r: usize, gauge: Gauge) -> Result<f64> {
    linalg::ensure_square_finite(a)?;
    let n = a.nrows();
    if r > n {
        return Err(Error::InvalidInput(format!("r = {r} > n = {n}")));
    }
    let sv = linalg::singular_values(a);
    let mut tail = vec![0.0; r];
    tail.extend_from_slice(&sv[r..]);
    gauge.eval(&tail)
}

/// Ky-Fan phase functional: the Ky-Fan m-norm applied to the canonical
/// phases. For positive-imaginary input this is the partial sum of the m
/// largest phases.
pub fn kyfan_phase(a: &CMat, m: usize) -> Result<f64> {
    let ph = sectorial::phases(a)?;
    Gauge::KyFan(m).eval(ph.as_slice())
}

/// Signed partial sum of the m algebraically largest canonical phases.
/// Agrees with `kyfan_phase` on positive-imaginary matrices and is the
/// functional the additive phase inequality is stated for on general
/// sectors, where phases may be negative.
pub fn signed_phase_sum(a: &CMat, m: usize) -> Result<f64> {
    let ph = sectorial::phases(a)?;
    if m == 0 || m > ph.len() {
        return Err(Error::GaugeOutOfRange(format!(
            "m = {m} outside 1..={}",
            ph.len()
        )));
    }
    Ok(ph.partial_sum(m))
}

/// Sum of eigenvalue angles of the compression X* A X, for full-column-rank
/// X and positive-imaginary A. Bounded above by `kyfan_phase(a, m)`.
pub fn psi_variational_value(a: &CMat, x: &CMat) -> Result<f64> {
    linalg::ensure_square_finite(a)?;
    let n = a.nrows();
    if x.nrows() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: x.nrows(),
        });
    }
    let m = x.ncols();
    if m == 0 || m > n {
        return Err(Error::InvalidInput(format!("X has {m} columns, need 1..={n}")));
    }
    let sv = {
        let mut s: Vec<f64> = x.clone().singular_values().iter().copied().collect();
        s.sort_by(|p, q| q.partial_cmp(p).unwrap());
        s
    };
    if sv[m - 1] <= 1e-12 * sv[0] {
        return Err(Error::RankDeficient(sv[m - 1] / sv[0]));
    }
    let compressed = x.adjoint() * a * x;
    let ev = linalg::eigenvalues(&compressed)?;
    let mut total = 0.0;
    for z in ev {
        let mut ang = z.arg();
        // positive-imaginary spectra live in [0, pi); fold rounding noise that
        // lands just below the branch cut back onto the positive side
        if ang < -std::f64::consts::FRAC_PI_2 {
            ang += 2.0 * std::f64::consts::PI;
        }
        total += ang;
    }
    Ok(total)
}

/// Whether a is weakly submajorized by b: every prefix sum of the
/// nonincreasing rearrangement of a is bounded by b's, within
/// `MAJORIZATION_TOL`.
pub fn weak_submajorize(a: &[f64], b: &[f64]) -> Result<bool> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            found: b.len(),
        });
    }
    let mut ad = a.to_vec();
    let mut bd = b.to_vec();
    ad.sort_by(|x, y| y.partial_cmp(x).unwrap());
    bd.sort_by(|x, y| y.partial_cmp(x).unwrap());
    let mut sa = 0.0;
    let mut sb = 0.0;
    for (x, y) in ad.iter().zip(bd.iter()) {
        sa += x;
        sb += y;
        if sa > sb + MAJORIZATION_TOL {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, fro_norm, identity, phase_factor, ONE, ZERO};
    use nalgebra::DVector;
    use std::f64::consts::PI;

    #[test]
    fn gauge_eval_examples() {
        assert_eq!(Gauge::KyFan(2).eval(&[3.0, -1.0, 2.0]).unwrap(), 5.0);
        assert!((Gauge::Max.eval(&[0.0, -PI / 4.0]).unwrap() - PI / 4.0).abs() < 1e-15);
        for g in [Gauge::KyFan(2), Gauge::Max, Gauge::Sum, Gauge::Lp(1.5)] {
            assert_eq!(g.eval(&[0.0, 0.0]).unwrap(), 0.0);
        }
        assert!(Gauge::KyFan(0).eval(&[1.0]).is_err());
        assert!(Gauge::KyFan(3).eval(&[1.0, 2.0]).is_err());
        assert!(Gauge::Lp(0.5).eval(&[1.0]).is_err());
    }

    #[test]
    fn gauge_parse_round_trip() {
        for s in ["max", "sum", "kyfan:3", "lp:2.5"] {
            let g = Gauge::parse(s).unwrap();
            assert_eq!(format!("{g}"), s);
        }
        assert!(Gauge::parse("nuclear").is_err());
        assert!(Gauge::parse("kyfan:x").is_err());
    }

    #[test]
    fn ui_norm_examples() {
        let a = CMat::from_diagonal(&DVector::from_vec(vec![c(3.0, 0.0), c(1.0, 0.0)]));
        assert!((ui_norm(Gauge::Max, &a).unwrap() - 3.0).abs() < 1e-12);
        let u = identity(4);
        assert!((ui_norm(Gauge::Sum, &u).unwrap() - 4.0).abs() < 1e-12);
        let n01 = CMat::from_row_slice(2, 2, &[ZERO, c(2.0, 0.0), ZERO, ZERO]);
        assert!((ui_norm(Gauge::KyFan(1), &n01).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn svd_truncate_endpoints_and_error_norm() {
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(8);
        let a = CMat::from_fn(5, 5, |_, _| c(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5));

        let full = svd_truncate(&a, 5).unwrap();
        assert!(fro_norm(&(&full - &a)) < 1e-12 * fro_norm(&a));
        assert!((schmidt_mirsky_value(&a, 5, Gauge::Max).unwrap()).abs() < 1e-15);

        let zero = svd_truncate(&a, 0).unwrap();
        assert!(fro_norm(&zero) < 1e-15);
        let v0 = schmidt_mirsky_value(&a, 0, Gauge::Sum).unwrap();
        assert!((v0 - ui_norm(Gauge::Sum, &a).unwrap()).abs() < 1e-12);

        // r = 2, Max gauge: value sigma_3, equals ||A - A_2||_2
        let t2 = svd_truncate(&a, 2).unwrap();
        let sv = crate::linalg::singular_values(&a);
        let v2 = schmidt_mirsky_value(&a, 2, Gauge::Max).unwrap();
        assert!((v2 - sv[2]).abs() < 1e-12);
        let err = ui_norm(Gauge::Max, &(&a - &t2)).unwrap();
        assert!((err - v2).abs() < 1e-9);
        assert!(svd_truncate(&a, 6).is_err());
    }

    #[test]
    fn kyfan_phase_examples() {
        let a = CMat::from_diagonal(&DVector::from_vec(vec![
            phase_factor(PI / 2.0),
            phase_factor(PI / 4.0),
            ONE,
        ]));
        assert!((kyfan_phase(&a, 2).unwrap() - 3.0 * PI / 4.0).abs() < 1e-10);
        assert!((kyfan_phase(&identity(3), 2).unwrap()).abs() < 1e-10);
        assert!((kyfan_phase(&a, 3).unwrap() - 3.0 * PI / 4.0).abs() < 1e-10);
        assert!((signed_phase_sum(&a, 2).unwrap() - 3.0 * PI / 4.0).abs() < 1e-10);
        assert!(signed_phase_sum(&a, 4).is_err());
    }

    #[test]
    fn psi_variational_examples() {
        let a = CMat::from_diagonal(&DVector::from_vec(vec![
            phase_factor(0.8),
            phase_factor(0.5),
            phase_factor(0.1),
        ]));
        // X = e_1 on diagonal A: the angle of A_11
        let e1 = CMat::from_row_slice(3, 1, &[ONE, ZERO, ZERO]);
        assert!((psi_variational_value(&a, &e1).unwrap() - 0.8).abs() < 1e-12);

        // X = first m columns of T^{-1}: attains the Ky-Fan phase value
        let dec = crate::sectorial::sectorial_decomposition(&a).unwrap();
        let t_inv = crate::linalg::inverse(&dec.t).unwrap();
        for m in 1..=3usize {
            let x = CMat::from_fn(3, m, |i, j| t_inv[(i, j)]);
            let got = psi_variational_value(&a, &x).unwrap();
            let want = kyfan_phase(&a, m).unwrap();
            assert!((got - want).abs() < 1e-9, "m={m}: {got} vs {want}");
        }

        let rank_def = CMat::from_row_slice(3, 2, &[ONE, ONE, ZERO, ZERO, ZERO, ZERO]);
        assert!(psi_variational_value(&a, &rank_def).is_err());
    }

    #[test]
    fn weak_submajorize_examples() {
        assert!(weak_submajorize(&[1.0, 2.0], &[2.0, 2.0]).unwrap());
        assert!(!weak_submajorize(&[3.0, 0.0], &[2.0, 2.0]).unwrap());
        assert!(weak_submajorize(&[2.0, 1.0], &[1.0, 2.0]).unwrap());
        assert!(weak_submajorize(&[1.0, 2.0], &[2.0, 1.0]).unwrap());
        assert!(weak_submajorize(&[1.0], &[1.0, 2.0]).is_err());
    }
}
