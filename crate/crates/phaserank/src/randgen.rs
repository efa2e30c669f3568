//! Seeded random generators for test matrices: sectorial matrices with
//! prescribed phase sectors and phase-rank caps, unitary sectorial matrices,
//! and feasible conjugators for the truncation optimality suites.
//!
//! Everything is a deterministic function of the `GeneratorSpec`; identical
//! specs yield identical output bit for bit.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::gauge::Gauge;
use crate::linalg::{self, CMat};
use crate::lowprank::{self, TruncationApproximant};
use crate::sectorial::{self, diagonal_unitary, SectorInterval, DEFAULT_PHASE_TOL};
use std::f64::consts::PI;

/// Margin from the sector endpoints for uniform phase draws; keeps strict
/// sector operations well-conditioned.
pub const PHASE_MARGIN: f64 = 1e-3;

/// Specification for one random matrix draw.
#[derive(Debug, Clone, Copy)]
pub struct GeneratorSpec {
    pub seed: u64,
    pub n: usize,
    pub sector: SectorInterval,
    /// At most this many nonzero phases; requires 0 to be inside the sector
    /// when smaller than n.
    pub prank_cap: Option<usize>,
    /// Condition-number cap on the congruence factor T.
    pub condition_cap: f64,
}

impl GeneratorSpec {
    pub fn new(seed: u64, n: usize, sector: SectorInterval) -> Self {
        Self {
            seed,
            n,
            sector,
            prank_cap: None,
            condition_cap: 1e4,
        }
    }

    pub fn with_prank_cap(mut self, cap: usize) -> Self {
        self.prank_cap = Some(cap);
        self
    }

    pub fn with_condition_cap(mut self, cap: f64) -> Self {
        self.condition_cap = cap;
        self
    }

    fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }

    fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidInput("n = 0".into()));
        }
        if let Some(cap) = self.prank_cap {
            if cap > self.n {
                return Err(Error::InvalidInput(format!(
                    "prank_cap {cap} > n = {}",
                    self.n
                )));
            }
            if cap < self.n && !self.sector.contains_interval(0.0, 0.0) {
                return Err(Error::InvalidInput(
                    "prank_cap < n requires 0 inside the sector".into(),
                ));
            }
        }
        if !(self.condition_cap >= 1.0 && self.condition_cap.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "condition_cap {} must be finite and >= 1",
                self.condition_cap
            )));
        }
        if self.sector.beta - self.sector.alpha <= 2.0 * PHASE_MARGIN {
            return Err(Error::InvalidInput(
                "sector narrower than twice the draw margin".into(),
            ));
        }
        Ok(())
    }
}

fn standard_normal(rng: &mut ChaCha8Rng) -> f64 {
    // Box-Muller; two uniform draws per call keeps the stream simple
    let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.gen::<f64>();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

pub(crate) fn gaussian_cmat(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> CMat {
    CMat::from_fn(rows, cols, |_, _| {
        linalg::c(standard_normal(rng), standard_normal(rng))
    })
}

/// Haar-ish random unitary: QR of a complex Gaussian with the R-diagonal
/// phases absorbed into Q.
pub fn random_unitary(rng: &mut ChaCha8Rng, n: usize) -> CMat {
    let g = gaussian_cmat(rng, n, n);
    let qr = g.qr();
    let q = qr.q();
    let r = qr.r();
    let mut fix = Vec::with_capacity(n);
    for i in 0..n {
        let d = r[(i, i)];
        fix.push(if d.norm() == 0.0 { linalg::ONE } else { d / d.norm() });
    }
    q * CMat::from_diagonal(&nalgebra::DVector::from_vec(fix))
}

/// Random nonsingular factor with condition number at most `cap`:
/// unitary x diagonal scaling x unitary, singular values log-uniform.
pub fn random_conditioned(rng: &mut ChaCha8Rng, n: usize, cap: f64) -> CMat {
    let u1 = random_unitary(rng, n);
    let u2 = random_unitary(rng, n);
    let half = cap.max(1.0).sqrt().ln();
    let sv: Vec<f64> = (0..n).map(|_| rng.gen_range(-half..=half).exp()).collect();
    let d = CMat::from_diagonal(&nalgebra::DVector::from_iterator(
        n,
        sv.iter().map(|&s| linalg::c(s, 0.0)),
    ));
    u1 * d * u2
}

/// Random Hermitian positive definite matrix with eigenvalues log-uniform in
/// [1/sqrt(cap), sqrt(cap)].
pub fn random_hpd(rng: &mut ChaCha8Rng, n: usize, cap: f64) -> CMat {
    let v = random_unitary(rng, n);
    let half = cap.max(1.0).sqrt().ln();
    let d = CMat::from_diagonal(&nalgebra::DVector::from_iterator(
        n,
        (0..n).map(|_| linalg::c(rng.gen_range(-half..=half).exp(), 0.0)),
    ));
    &v * d * v.adjoint()
}

fn draw_phases(rng: &mut ChaCha8Rng, spec: &GeneratorSpec) -> Vec<f64> {
    let lo = spec.sector.alpha + PHASE_MARGIN;
    let hi = spec.sector.beta - PHASE_MARGIN;
    let n = spec.n;
    match spec.prank_cap {
        None => (0..n).map(|_| rng.gen_range(lo..hi)).collect(),
        Some(cap) => {
            let mut phases = vec![0.0; n];
            let mut idx: Vec<usize> = (0..n).collect();
            // Fisher-Yates prefix to scatter the nonzero slots
            for i in 0..cap.min(n) {
                let j = rng.gen_range(i..n);
                idx.swap(i, j);
            }
            for &i in idx.iter().take(cap) {
                // keep drawn phases clear of the prank tolerance
                let mut p = rng.gen_range(lo..hi);
                if p.abs() <= 10.0 * DEFAULT_PHASE_TOL {
                    p = 10.0 * DEFAULT_PHASE_TOL.copysign(if p == 0.0 { 1.0 } else { p });
                }
                phases[i] = p;
            }
            phases
        }
    }
}

/// Random sectorial matrix T* D T with phases uniform in the sector interior
/// and condition(T) <= condition_cap.
pub fn random_sectorial(spec: &GeneratorSpec) -> Result<CMat> {
    spec.validate()?;
    let mut rng = spec.rng();
    let phases = draw_phases(&mut rng, spec);
    let t = random_conditioned(&mut rng, spec.n, spec.condition_cap);
    Ok(t.adjoint() * diagonal_unitary(&phases) * t)
}

/// Random unitary matrix with eigen-angles uniform in the sector interior.
pub fn random_unitary_sectorial(spec: &GeneratorSpec) -> Result<CMat> {
    spec.validate()?;
    let mut rng = spec.rng();
    let phases = draw_phases(&mut rng, spec);
    let v = random_unitary(&mut rng, spec.n);
    Ok(v.adjoint() * diagonal_unitary(&phases) * v)
}

/// How far the feasible-conjugator generator had to back off.
#[derive(Debug, Clone)]
pub struct FeasibleConjugator {
    pub e: CMat,
    /// Perturbation scale actually used; zero means the canonical truncation.
    pub epsilon: f64,
    /// True when the draw came from rejection sampling rather than a
    /// perturbation of the canonical truncation.
    pub global_sample: bool,
    /// The feasibility report the draw was accepted on.
    pub report: lowprank::FeasibilityReport,
}

/// Generates E with is_feasible(A, E, r, true): E sectorial, prank(E) <= r,
/// and E^{-1} A E^{-1} positive-imaginary.
///
/// Strategy: a rejection-sampled fully random sectorial E with prank <= r is
/// tried first for a bounded number of draws (global probes are rarely
/// feasible but valuable); otherwise the canonical truncation is perturbed
/// inside its feasibility region. The perturbation lifts the r zeroed
/// conjugate phases by epsilon-sized amounts (keeping them nonnegative) and
/// multiplies the congruence factor by exp(epsilon S); epsilon is bisected
/// until the feasibility check passes, falling back to the canonical
/// truncation itself at exhaustion.
pub fn random_feasible_conjugator(
    a: &CMat,
    r: usize,
    spec: &GeneratorSpec,
) -> Result<FeasibleConjugator> {
    random_feasible_conjugator_from(a, r, spec, None)
}

/// As `random_feasible_conjugator`, reusing a precomputed canonical
/// truncation of A (the suites call this in a loop).
pub fn random_feasible_conjugator_from(
    a: &CMat,
    r: usize,
    spec: &GeneratorSpec,
    canonical: Option<&TruncationApproximant>,
) -> Result<FeasibleConjugator> {
    spec.validate()?;
    linalg::ensure_square_finite(a)?;
    let n = a.nrows();
    if spec.n != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: spec.n,
        });
    }
    if r > n {
        return Err(Error::InvalidInput(format!("r = {r} > n = {n}")));
    }
    let mut rng = spec.rng();

    // global probes: random sectorial E with prank <= r, rejected unless the
    // conjugate comes out positive-imaginary. The probe uses a hint-only
    // phase check (false negatives just reject a candidate); an accepted
    // candidate is confirmed with the full feasibility report.
    let global_attempts = if rng.gen::<f64>() < 0.15 { 25 } else { 0 };
    let pi_probe_hints = [
        PI / 2.0,
        PI / 4.0,
        3.0 * PI / 4.0,
        PI / 8.0,
        7.0 * PI / 8.0,
    ];
    for _ in 0..global_attempts {
        let phases = draw_phases(
            &mut rng,
            &GeneratorSpec {
                prank_cap: Some(r),
                ..*spec
            },
        );
        let t = random_conditioned(&mut rng, n, spec.condition_cap.min(10.0));
        let e = t.adjoint() * diagonal_unitary(&phases) * &t;
        let conj = match lowprank::conjugate_by_inverse(a, &e) {
            Ok(c) => c,
            Err(_) => continue,
        };
        let pi_ok = match sectorial::phases_hint_only(&conj, &pi_probe_hints)? {
            Some(ph) => SectorInterval::positive_imaginary().contains_phases(&ph),
            None => false,
        };
        if !pi_ok {
            continue;
        }
        if let Ok(rep) = lowprank::is_feasible(a, &e, r, true) {
            if rep.feasible {
                return Ok(FeasibleConjugator {
                    e,
                    epsilon: f64::NAN,
                    global_sample: true,
                    report: rep,
                });
            }
        }
    }

    let owned;
    let trunc = match canonical {
        Some(t) => t,
        None => {
            owned = lowprank::truncation_sp(a, r)?;
            &owned
        }
    };
    let dec = &trunc.source;
    let base_phases = dec.phases.as_slice();

    // perturbation directions: half-phase backoffs eta (which lift the zeroed
    // conjugate phases to eps*eta >= 0) and a congruence direction S
    let eta: Vec<f64> = (0..r).map(|_| rng.gen_range(0.25..1.0)).collect();
    let s_dir = {
        let g = gaussian_cmat(&mut rng, n, n);
        let nrm = linalg::fro_norm(&g).max(f64::MIN_POSITIVE);
        g / linalg::c(nrm, 0.0)
    };

    let mut eps = 0.2f64;
    for _ in 0..10 {
        let half: Vec<f64> = base_phases
            .iter()
            .enumerate()
            .map(|(k, &p)| {
                if k < r {
                    (p - eps * eta[k]).max(0.0) / 2.0
                } else {
                    0.0
                }
            })
            .collect();
        let t_pert = &dec.t * linalg::matrix_exp(&(&s_dir * linalg::c(0.3 * eps, 0.0)));
        let e = t_pert.adjoint() * diagonal_unitary(&half) * &t_pert;
        let theta_e = dec.certificate.theta;
        if let Ok(rep) =
            lowprank::is_feasible_hinted(a, &e, r, true, &[theta_e / 2.0, 0.0], &[theta_e, 0.0])
        {
            if rep.feasible {
                return Ok(FeasibleConjugator {
                    e,
                    epsilon: eps,
                    global_sample: false,
                    report: rep,
                });
            }
        }
        eps *= 0.5;
    }

    // canonical truncation is itself feasible; verify and fall back to it
    let rep = lowprank::is_feasible(a, &trunc.e, r, true)?;
    if rep.feasible {
        return Ok(FeasibleConjugator {
            e: trunc.e.clone(),
            epsilon: 0.0,
            global_sample: false,
            report: rep,
        });
    }
    Err(Error::GenerationExhausted(format!(
        "no feasible conjugator found for r = {r} (canonical truncation infeasible: {rep:?})"
    )))
}

/// Objective of a feasibility report under a gauge, raising when the report
/// is infeasible.
pub fn feasible_objective(rep: &lowprank::FeasibilityReport, gauge: Gauge) -> Result<f64> {
    rep.objective_under(gauge)
        .ok_or_else(|| Error::GenerationExhausted("infeasible report has no objective".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::fro_norm;

    fn pi_spec(seed: u64, n: usize) -> GeneratorSpec {
        GeneratorSpec::new(seed, n, SectorInterval::positive_imaginary())
            .with_condition_cap(100.0)
    }

    #[test]
    fn determinism_bit_for_bit() {
        let spec = pi_spec(42, 4);
        let a = random_sectorial(&spec).unwrap();
        let b = random_sectorial(&spec).unwrap();
        assert_eq!(a, b);
        let u1 = random_unitary_sectorial(&spec).unwrap();
        let u2 = random_unitary_sectorial(&spec).unwrap();
        assert_eq!(u1, u2);
    }

    #[test]
    fn sectorial_draws_land_in_sector() {
        for seed in 0..10u64 {
            let spec = pi_spec(seed, 4);
            let a = random_sectorial(&spec).unwrap();
            let ph = sectorial::phases(&a).unwrap();
            assert!(
                SectorInterval::positive_imaginary().contains_phases(&ph),
                "seed {seed}: {:?}",
                ph.as_slice()
            );
        }
    }

    #[test]
    fn prank_cap_zero_gives_positive_definite() {
        let spec = pi_spec(7, 4).with_prank_cap(0);
        let a = random_sectorial(&spec).unwrap();
        assert_eq!(sectorial::prank(&a, DEFAULT_PHASE_TOL).unwrap(), 0);
        assert!(linalg::herm_lambda_min(&crate::linalg::hermitian_part(&a)) > 0.0);
    }

    #[test]
    fn prank_cap_respected_and_validated() {
        let spec = pi_spec(9, 5).with_prank_cap(2);
        let a = random_sectorial(&spec).unwrap();
        assert!(sectorial::prank(&a, DEFAULT_PHASE_TOL).unwrap() <= 2);

        let bad = pi_spec(9, 3).with_prank_cap(4);
        assert!(random_sectorial(&bad).is_err());
        // 0 not in the sector with a cap below n is impossible
        let off_sector = GeneratorSpec::new(
            1,
            3,
            SectorInterval::closed(PI / 4.0, PI / 2.0).unwrap(),
        )
        .with_prank_cap(1);
        assert!(random_sectorial(&off_sector).is_err());
    }

    #[test]
    fn unitary_sectorial_is_unitary() {
        let spec = pi_spec(11, 5);
        let u = random_unitary_sectorial(&spec).unwrap();
        assert!(linalg::unitary_defect(&u) < 1e-12);
        let ph = sectorial::phases(&u).unwrap();
        assert!(SectorInterval::positive_imaginary().contains_phases(&ph));
    }

    #[test]
    fn conditioned_factor_obeys_cap() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let t = random_conditioned(&mut rng, 6, 50.0);
        assert!(linalg::condition_number(&t) <= 50.0 * (1.0 + 1e-9));
        let p = random_hpd(&mut rng, 4, 10.0);
        assert!(linalg::herm_lambda_min(&p) > 0.0);
        assert!(fro_norm(&(&p - p.adjoint())) < 1e-12 * fro_norm(&p));
    }

    #[test]
    fn feasible_conjugators_are_feasible() {
        let spec = pi_spec(17, 4).with_condition_cap(20.0);
        let a = random_sectorial(&spec).unwrap();
        let trunc = lowprank::truncation_sp(&a, 2).unwrap();
        for k in 0..8u64 {
            let draw_spec = pi_spec(1000 + k, 4);
            let fc =
                random_feasible_conjugator_from(&a, 2, &draw_spec, Some(&trunc)).unwrap();
            let rep = lowprank::is_feasible(&a, &fc.e, 2, true).unwrap();
            assert!(rep.feasible, "draw {k}: {rep:?}");
        }
        // perturbation size 0 means the canonical truncation itself
        let canonical_rep = lowprank::is_feasible(&a, &trunc.e, 2, true).unwrap();
        assert!(canonical_rep.feasible);
    }

    #[test]
    fn r_equals_n_accepts_any_sectorial_with_pi_conjugate() {
        let spec = pi_spec(23, 3);
        let a = random_sectorial(&spec).unwrap();
        let fc = random_feasible_conjugator(&a, 3, &spec).unwrap();
        let rep = lowprank::is_feasible(&a, &fc.e, 3, true).unwrap();
        assert!(rep.feasible);
    }
}
