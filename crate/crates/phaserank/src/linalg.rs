//! Dense complex linear-algebra kernels shared by the phase-analysis modules.
//!
//! Hermitian eigendecomposition, SVD and LU come from nalgebra. The complex
//! Schur factorization is implemented here: it is needed for principal square
//! roots and eigenvalue angles of non-normal matrices, and the upstream
//! implementation does not converge on unitary matrices with symmetric
//! spectra (e.g. circulant shifts).

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Dense square complex matrix, the universal value of this crate.
pub type CMat = DMatrix<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const J: Complex64 = Complex64::new(0.0, 1.0);

#[inline]
pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// e^{j*theta} as a scalar.
#[inline]
pub fn phase_factor(theta: f64) -> Complex64 {
    Complex64::from_polar(1.0, theta)
}

pub fn identity(n: usize) -> CMat {
    CMat::identity(n, n)
}

/// Validates that `a` is square, nonempty and has finite entries.
pub fn ensure_square_finite(a: &CMat) -> Result<()> {
    if a.nrows() != a.ncols() {
        return Err(Error::DimensionMismatch {
            expected: a.nrows(),
            found: a.ncols(),
        });
    }
    if a.nrows() == 0 {
        return Err(Error::InvalidInput("matrix is empty".into()));
    }
    if a.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::InvalidInput("matrix has non-finite entries".into()));
    }
    Ok(())
}

/// Hermitian part H = (A + A*)/2.
pub fn hermitian_part(a: &CMat) -> CMat {
    (a + a.adjoint()).scale(0.5)
}

/// Skew part K = (A - A*)/(2j); K is Hermitian and A = H + jK.
pub fn skew_hermitian_part(a: &CMat) -> CMat {
    (a - a.adjoint()) * c(0.0, -0.5)
}

/// e^{j*beta} * A.
pub fn rotate(a: &CMat, beta: f64) -> CMat {
    a * phase_factor(beta)
}

pub fn fro_norm(a: &CMat) -> f64 {
    a.norm()
}

pub fn max_abs(a: &CMat) -> f64 {
    a.iter().fold(0.0f64, |m, z| m.max(z.norm()))
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn herm_eigenvalues(a: &CMat) -> Vec<f64> {
    let mut vals: Vec<f64> = a.clone().symmetric_eigenvalues().iter().copied().collect();
    vals.sort_by(|x, y| x.partial_cmp(y).unwrap());
    vals
}

pub fn herm_lambda_min(a: &CMat) -> f64 {
    a.clone()
        .symmetric_eigenvalues()
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

/// Full Hermitian eigendecomposition A = V diag(vals) V*, vals ascending.
pub fn herm_eigen(a: &CMat) -> (Vec<f64>, CMat) {
    let se = a.clone().symmetric_eigen();
    let n = a.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &k| se.eigenvalues[i].partial_cmp(&se.eigenvalues[k]).unwrap());
    let vals: Vec<f64> = order.iter().map(|&i| se.eigenvalues[i]).collect();
    let mut vecs = CMat::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vecs.set_column(dst, &se.eigenvectors.column(src));
    }
    (vals, vecs)
}

/// V f(diag) V* for Hermitian input.
pub fn herm_map(a: &CMat, f: impl Fn(f64) -> f64) -> CMat {
    let (vals, vecs) = herm_eigen(a);
    let d = CMat::from_diagonal(&nalgebra::DVector::from_iterator(
        vals.len(),
        vals.iter().map(|&v| c(f(v), 0.0)),
    ));
    &vecs * d * vecs.adjoint()
}

fn require_hpd(a: &CMat) -> Result<(Vec<f64>, CMat)> {
    let (vals, vecs) = herm_eigen(a);
    let max = vals.iter().fold(0.0f64, |m, &v| m.max(v.abs()));
    if vals[0] <= 1e-14 * max.max(f64::MIN_POSITIVE) {
        return Err(Error::NotPositiveDefinite(vals[0]));
    }
    Ok((vals, vecs))
}

fn herm_map_checked(a: &CMat, f: impl Fn(f64) -> f64) -> Result<CMat> {
    let (vals, vecs) = require_hpd(a)?;
    let d = CMat::from_diagonal(&nalgebra::DVector::from_iterator(
        vals.len(),
        vals.iter().map(|&v| c(f(v), 0.0)),
    ));
    Ok(&vecs * d * vecs.adjoint())
}

pub fn hpd_sqrt(a: &CMat) -> Result<CMat> {
    herm_map_checked(a, f64::sqrt)
}

pub fn hpd_inv_sqrt(a: &CMat) -> Result<CMat> {
    herm_map_checked(a, |v| 1.0 / v.sqrt())
}

pub fn hpd_log(a: &CMat) -> Result<CMat> {
    herm_map_checked(a, f64::ln)
}

/// Singular values, nonincreasing.
pub fn singular_values(a: &CMat) -> Vec<f64> {
    let sv = a.clone().singular_values();
    let mut out: Vec<f64> = sv.iter().copied().collect();
    out.sort_by(|x, y| y.partial_cmp(x).unwrap());
    out
}

/// Full SVD A = U diag(s) V^*, singular values nonincreasing.
pub fn svd(a: &CMat) -> Result<(CMat, Vec<f64>, CMat)> {
    let f = a.clone().svd(true, true);
    let u = f.u.ok_or_else(|| Error::NoConvergence("svd".into()))?;
    let v_t = f.v_t.ok_or_else(|| Error::NoConvergence("svd".into()))?;
    let s: Vec<f64> = f.singular_values.iter().copied().collect();
    Ok((u, s, v_t))
}

/// Number of singular values above `rel_tol * sigma_max`.
pub fn numerical_rank(a: &CMat, rel_tol: f64) -> usize {
    let sv = singular_values(a);
    if sv.is_empty() || sv[0] == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > rel_tol * sv[0]).count()
}

pub fn spectral_norm(a: &CMat) -> f64 {
    singular_values(a).first().copied().unwrap_or(0.0)
}

/// sigma_max / sigma_min; infinite for singular input.
pub fn condition_number(a: &CMat) -> f64 {
    let sv = singular_values(a);
    match (sv.first(), sv.last()) {
        (Some(&hi), Some(&lo)) if lo > 0.0 => hi / lo,
        _ => f64::INFINITY,
    }
}

pub fn inverse(a: &CMat) -> Result<CMat> {
    a.clone().try_inverse().ok_or(Error::Singular)
}

/// ||U*U - I||.
pub fn unitary_defect(u: &CMat) -> f64 {
    let n = u.nrows();
    fro_norm(&(u.adjoint() * u - identity(n)))
}

/// Projects an almost-unitary matrix onto the unitary group: U (U*U)^{-1/2}.
pub fn unitarize(u: &CMat) -> Result<CMat> {
    let g = u.adjoint() * u;
    Ok(u * hpd_inv_sqrt(&g)?)
}

// ---------------------------------------------------------------------------
// Complex Schur factorization
// ---------------------------------------------------------------------------

/// Givens rotation G = [[c, s], [-conj(s), c]] with c real, c^2 + |s|^2 = 1,
/// such that G [f, g]^T = [r, 0]^T.
fn givens(f: Complex64, g: Complex64) -> (f64, Complex64) {
    if g.norm() == 0.0 {
        return (1.0, ZERO);
    }
    if f.norm() == 0.0 {
        return (0.0, g.conj() / g.norm());
    }
    let d = (f.norm_sqr() + g.norm_sqr()).sqrt();
    let cc = f.norm() / d;
    let s = (f / f.norm()) * g.conj() / d;
    (cc, s)
}

/// Rows i and k of m <- G m, over columns [col_from, col_to).
fn givens_left(m: &mut CMat, i: usize, k: usize, cc: f64, s: Complex64, col_from: usize, col_to: usize) {
    for col in col_from..col_to {
        let x = m[(i, col)];
        let y = m[(k, col)];
        m[(i, col)] = x * cc + s * y;
        m[(k, col)] = -s.conj() * x + y * cc;
    }
}

/// Columns i and k of m <- m G*, over rows [row_from, row_to).
fn givens_right(m: &mut CMat, i: usize, k: usize, cc: f64, s: Complex64, row_from: usize, row_to: usize) {
    for row in row_from..row_to {
        let x = m[(row, i)];
        let y = m[(row, k)];
        m[(row, i)] = x * cc + y * s.conj();
        m[(row, k)] = -s * x + y * cc;
    }
}

/// Eigenvalue of [[a, b], [cc, d]] closest to d (Wilkinson shift).
fn wilkinson_shift(a: Complex64, b: Complex64, cc: Complex64, d: Complex64) -> Complex64 {
    let half_diff = (a - d) * 0.5;
    let disc = (half_diff * half_diff + b * cc).sqrt();
    let l1 = (a + d) * 0.5 + disc;
    let l2 = (a + d) * 0.5 - disc;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// Complex Schur factorization A = Q T Q* with Q unitary, T upper triangular.
///
/// Givens-based Hessenberg reduction followed by explicit single-shift QR
/// with Wilkinson shifts and periodic exceptional shifts.
pub fn complex_schur(a: &CMat) -> Result<(CMat, CMat)> {
    ensure_square_finite(a)?;
    let n = a.nrows();
    let mut t = a.clone();
    let mut q = identity(n);
    if n == 1 {
        return Ok((q, t));
    }

    // Hessenberg reduction.
    for col in 0..n - 2 {
        for row in (col + 2..n).rev() {
            let (cc, s) = givens(t[(row - 1, col)], t[(row, col)]);
            givens_left(&mut t, row - 1, row, cc, s, col, n);
            givens_right(&mut t, row - 1, row, cc, s, 0, n);
            givens_right(&mut q, row - 1, row, cc, s, 0, n);
            t[(row, col)] = ZERO;
        }
    }

    let scale = fro_norm(&t).max(f64::MIN_POSITIVE);
    let mut hi = n - 1;
    let mut iters_at_hi = 0usize;
    let mut total_iters = 0usize;
    let budget = 60 * n;

    while hi > 0 {
        // Locate the start of the irreducible block ending at hi.
        let mut lo = hi;
        while lo > 0 {
            let sub = t[(lo, lo - 1)].norm();
            let local = t[(lo - 1, lo - 1)].norm() + t[(lo, lo)].norm();
            let thresh = f64::EPSILON * if local > 0.0 { local } else { scale };
            if sub <= thresh {
                t[(lo, lo - 1)] = ZERO;
                break;
            }
            lo -= 1;
        }
        if t[(hi, hi - 1)] == ZERO {
            hi -= 1;
            iters_at_hi = 0;
            continue;
        }
        if total_iters >= budget {
            return Err(Error::NoConvergence(format!(
                "schur iteration exceeded {budget} steps"
            )));
        }
        total_iters += 1;
        iters_at_hi += 1;

        let shift = if iters_at_hi % 10 == 0 {
            t[(hi, hi)] + c(0.75 * t[(hi, hi - 1)].norm(), 0.0)
        } else {
            wilkinson_shift(
                t[(hi - 1, hi - 1)],
                t[(hi - 1, hi)],
                t[(hi, hi - 1)],
                t[(hi, hi)],
            )
        };

        for k in lo..=hi {
            t[(k, k)] -= shift;
        }
        let mut rots: Vec<(f64, Complex64)> = Vec::with_capacity(hi - lo);
        for k in lo..hi {
            let (cc, s) = givens(t[(k, k)], t[(k + 1, k)]);
            givens_left(&mut t, k, k + 1, cc, s, k, n);
            t[(k + 1, k)] = ZERO;
            rots.push((cc, s));
        }
        for (k, &(cc, s)) in (lo..hi).zip(rots.iter()) {
            givens_right(&mut t, k, k + 1, cc, s, 0, (k + 2).min(n));
            givens_right(&mut q, k, k + 1, cc, s, 0, n);
        }
        for k in lo..=hi {
            t[(k, k)] += shift;
        }
    }

    for i in 0..n {
        for jx in 0..i {
            t[(i, jx)] = ZERO;
        }
    }
    Ok((q, t))
}

/// Eigenvalues of a general complex matrix (Schur diagonal, unordered).
pub fn eigenvalues(a: &CMat) -> Result<Vec<Complex64>> {
    let (_, t) = complex_schur(a)?;
    Ok((0..a.nrows()).map(|i| t[(i, i)]).collect())
}

/// Principal square root of an upper triangular matrix via the standard
/// superdiagonal recurrence. Fails if a diagonal entry sits on the closed
/// negative real axis (within 1e-12 relative to the spectral scale).
pub fn upper_triangular_sqrt(t: &CMat) -> Result<CMat> {
    let n = t.nrows();
    let scale = (0..n).map(|i| t[(i, i)].norm()).fold(0.0f64, f64::max).max(1e-300);
    let mut s = CMat::zeros(n, n);
    for i in 0..n {
        let z = t[(i, i)];
        if z.re <= 0.0 && z.im.abs() <= 1e-12 * scale {
            return Err(Error::BranchPoint(format!(
                "eigenvalue {z} lies on the closed negative real axis"
            )));
        }
        s[(i, i)] = z.sqrt();
    }
    for off in 1..n {
        for i in 0..n - off {
            let jx = i + off;
            let mut acc = t[(i, jx)];
            for k in i + 1..jx {
                acc -= s[(i, k)] * s[(k, jx)];
            }
            let denom = s[(i, i)] + s[(jx, jx)];
            if denom.norm() == 0.0 {
                return Err(Error::BranchPoint(
                    "square-root recurrence hit a zero pivot".into(),
                ));
            }
            s[(i, jx)] = acc / denom;
        }
    }
    Ok(s)
}

// ---------------------------------------------------------------------------
// Normal-matrix diagonalization
// ---------------------------------------------------------------------------

/// ||A A* - A* A|| / ||A||^2, zero for normal matrices.
pub fn normality_defect(a: &CMat) -> f64 {
    let comm = a * a.adjoint() - a.adjoint() * a;
    let nrm = fro_norm(a);
    if nrm == 0.0 {
        0.0
    } else {
        fro_norm(&comm) / (nrm * nrm)
    }
}

/// Unitary diagonalization A = V diag(d) V* of a normal matrix.
///
/// Splits A = H + jK into commuting Hermitian parts and diagonalizes a
/// generic real linear combination; a residual check guards against
/// eigenvalue collisions of the combination, retrying with another angle.
pub fn diagonalize_normal(a: &CMat) -> Result<(CMat, Vec<Complex64>)> {
    ensure_square_finite(a)?;
    let defect = normality_defect(a);
    if defect > 1e-7 {
        return Err(Error::NotNormal(defect));
    }
    let h = hermitian_part(a);
    let k = skew_hermitian_part(a);
    let scale = fro_norm(a).max(f64::MIN_POSITIVE);
    const MIX_ANGLES: [f64; 8] = [0.927295, 2.214297, 0.321751, 2.819842, 1.325818, 0.588003, 1.815775, 2.553590];
    let mut best: Option<(f64, CMat, Vec<Complex64>)> = None;
    for &ang in MIX_ANGLES.iter() {
        let comb = &h * c(ang.cos(), 0.0) + &k * c(ang.sin(), 0.0);
        let (_, v) = herm_eigen(&comb);
        let d = v.adjoint() * a * &v;
        let mut off = 0.0f64;
        for i in 0..a.nrows() {
            for jx in 0..a.ncols() {
                if i != jx {
                    off = off.max(d[(i, jx)].norm());
                }
            }
        }
        let diag: Vec<Complex64> = (0..a.nrows()).map(|i| d[(i, i)]).collect();
        if off <= 1e-10 * scale {
            return Ok((v, diag));
        }
        if best.as_ref().map_or(true, |(b, _, _)| off < *b) {
            best = Some((off, v, diag));
        }
    }
    let (off, v, diag) = best.unwrap();
    if off <= 1e-8 * scale {
        return Ok((v, diag));
    }
    Err(Error::NoConvergence(format!(
        "normal diagonalization residual {off:.3e} exceeds tolerance"
    )))
}

// ---------------------------------------------------------------------------
// Matrix exponential and quadrature nodes
// ---------------------------------------------------------------------------

/// Matrix exponential by scaling-and-squaring with a Taylor kernel.
pub fn matrix_exp(a: &CMat) -> CMat {
    let n = a.nrows();
    let nrm = fro_norm(a);
    let s = if nrm > 0.5 {
        (nrm / 0.5).log2().ceil() as u32
    } else {
        0
    };
    let b = a.scale(0.5f64.powi(s as i32));
    let mut result = identity(n);
    let mut term = identity(n);
    for k in 1..=20 {
        term = &term * &b / c(k as f64, 0.0);
        result += &term;
    }
    for _ in 0..s {
        result = &result * &result;
    }
    result
}

/// Gauss-Legendre nodes and weights on [-1, 1], by Newton iteration on the
/// Legendre recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 2);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_with_derivative(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre_with_derivative(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p_prev = 1.0;
    let mut p = x;
    for k in 2..=n {
        let kf = k as f64;
        let p_next = ((2.0 * kf - 1.0) * x * p - (kf - 1.0) * p_prev) / kf;
        p_prev = p;
        p = p_next;
    }
    let dp = n as f64 * (x * p - p_prev) / (x * x - 1.0);
    (p, dp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rand_cmat(rng: &mut ChaCha8Rng, n: usize) -> CMat {
        CMat::from_fn(n, n, |_, _| c(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
    }

    #[test]
    fn givens_zeroes_second_component() {
        let cases = [
            (c(1.0, 2.0), c(-0.3, 0.7)),
            (c(0.0, 0.0), c(2.0, -1.0)),
            (c(3.0, 0.0), c(0.0, 0.0)),
            (c(-1e-8, 1e-9), c(5.0, 4.0)),
        ];
        for &(f, g) in cases.iter() {
            let (cc, s) = givens(f, g);
            let r = f * cc + s * g;
            let zero = -s.conj() * f + g * cc;
            assert!(zero.norm() <= 1e-14 * (1.0 + r.norm()), "f={f} g={g}");
            assert!((cc * cc + s.norm_sqr() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn schur_reconstructs_random_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for trial in 0..200 {
            let n = 1 + trial % 10;
            let a = rand_cmat(&mut rng, n);
            let (q, t) = complex_schur(&a).unwrap();
            assert!(unitary_defect(&q) < 1e-12, "n={n}");
            let res = fro_norm(&(&q * &t * q.adjoint() - &a)) / fro_norm(&a).max(1.0);
            assert!(res < 1e-12, "n={n} residual {res:.3e}");
            for i in 0..n {
                for jx in 0..i {
                    assert_eq!(t[(i, jx)], ZERO);
                }
            }
        }
    }

    #[test]
    fn schur_handles_circulant_shift() {
        // Eigenvalues are the 6th roots of unity; plain Wilkinson shifts stall
        // without the exceptional shift.
        let n = 6;
        let mut a = CMat::zeros(n, n);
        for i in 0..n {
            a[(i, (i + 1) % n)] = ONE;
        }
        let (q, t) = complex_schur(&a).unwrap();
        let res = fro_norm(&(&q * &t * q.adjoint() - &a));
        assert!(res < 1e-12, "residual {res:.3e}");
        let mut angles: Vec<f64> = (0..n).map(|i| t[(i, i)].arg()).collect();
        angles.sort_by(|x, y| x.partial_cmp(y).unwrap());
        for (k, ang) in angles.iter().enumerate() {
            let expected = -std::f64::consts::PI + (k as f64 + 1.0) * std::f64::consts::PI / 3.0;
            assert!((ang - expected).abs() < 1e-10, "angle {ang} vs {expected}");
        }
    }

    #[test]
    fn schur_eigenvalues_match_trace_and_determinant() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let n = 2 + rng.gen_range(0..6);
            let a = rand_cmat(&mut rng, n);
            let ev = eigenvalues(&a).unwrap();
            let tr: Complex64 = (0..n).map(|i| a[(i, i)]).sum();
            let sum: Complex64 = ev.iter().sum();
            assert!((tr - sum).norm() < 1e-10);
            let det = a.determinant();
            let prod: Complex64 = ev.iter().product();
            assert!((det - prod).norm() < 1e-8 * det.norm().max(1.0));
        }
    }

    #[test]
    fn triangular_sqrt_squares_back() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let n = 2 + rng.gen_range(0..6);
            let mut t = rand_cmat(&mut rng, n);
            for i in 0..n {
                for jx in 0..i {
                    t[(i, jx)] = ZERO;
                }
                // push the spectrum away from the negative axis
                t[(i, i)] += c(2.0, 0.0);
            }
            let s = upper_triangular_sqrt(&t).unwrap();
            let res = fro_norm(&(&s * &s - &t)) / fro_norm(&t);
            assert!(res < 1e-12, "residual {res:.3e}");
        }
    }

    #[test]
    fn triangular_sqrt_rejects_negative_axis() {
        let t = CMat::from_row_slice(2, 2, &[c(-1.0, 0.0), c(1.0, 0.0), ZERO, c(4.0, 0.0)]);
        assert!(matches!(
            upper_triangular_sqrt(&t),
            Err(Error::BranchPoint(_))
        ));
    }

    #[test]
    fn diagonalize_normal_on_unitary_with_degenerate_hermitian_part() {
        // diag(e^{j pi/3}, e^{-j pi/3}): H has a double eigenvalue but K splits it.
        let u = CMat::from_diagonal(&nalgebra::DVector::from_vec(vec![
            phase_factor(std::f64::consts::FRAC_PI_3),
            phase_factor(-std::f64::consts::FRAC_PI_3),
        ]));
        let (v, d) = diagonalize_normal(&u).unwrap();
        assert!(unitary_defect(&v) < 1e-12);
        let mut angles: Vec<f64> = d.iter().map(|z| z.arg()).collect();
        angles.sort_by(|x, y| x.partial_cmp(y).unwrap());
        assert!((angles[0] + std::f64::consts::FRAC_PI_3).abs() < 1e-12);
        assert!((angles[1] - std::f64::consts::FRAC_PI_3).abs() < 1e-12);
    }

    #[test]
    fn diagonalize_normal_rejects_jordan_block() {
        let a = CMat::from_row_slice(2, 2, &[ONE, ONE, ZERO, ONE]);
        assert!(matches!(diagonalize_normal(&a), Err(Error::NotNormal(_))));
    }

    #[test]
    fn matrix_exp_matches_scalar_and_inverse() {
        let a = CMat::from_row_slice(2, 2, &[c(0.3, 0.1), c(0.2, -0.4), c(-0.1, 0.0), c(0.0, 0.5)]);
        let e = matrix_exp(&a);
        let e_neg = matrix_exp(&a.scale(-1.0));
        let res = fro_norm(&(&e * &e_neg - identity(2)));
        assert!(res < 1e-13, "residual {res:.3e}");
        let s = CMat::from_row_slice(1, 1, &[c(0.0, std::f64::consts::PI / 2.0)]);
        let es = matrix_exp(&s);
        assert!((es[(0, 0)] - J).norm() < 1e-14);
    }

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        let (x, w) = gauss_legendre(12);
        // integral of t^8 over [-1,1] = 2/9
        let val: f64 = x.iter().zip(w.iter()).map(|(&t, &wi)| wi * t.powi(8)).sum();
        assert!((val - 2.0 / 9.0).abs() < 1e-14);
        let total: f64 = w.iter().sum();
        assert!((total - 2.0).abs() < 1e-14);
    }

    #[test]
    fn hpd_sqrt_and_log_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let b = rand_cmat(&mut rng, 5);
        let p = &b * b.adjoint() + identity(5).scale(0.5);
        let s = hpd_sqrt(&p).unwrap();
        assert!(fro_norm(&(&s * &s - &p)) < 1e-12 * fro_norm(&p));
        let l = hpd_log(&p).unwrap();
        assert!(fro_norm(&(matrix_exp(&l) - &p)) < 1e-11 * fro_norm(&p));
        let not_pd = identity(2).scale(-1.0);
        assert!(hpd_sqrt(&not_pd).is_err());
    }

    #[test]
    fn unitarize_restores_unitarity() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let noise = rand_cmat(&mut rng, 4).scale(1e-6);
        let base = {
            let a = rand_cmat(&mut rng, 4);
            let (q, _) = complex_schur(&a).unwrap();
            q
        };
        let u = &base + noise;
        let fixed = unitarize(&u).unwrap();
        assert!(unitary_defect(&fixed) < 1e-14);
        assert!(fro_norm(&(&fixed - &base)) < 1e-4);
    }
}
