//! Randomized verification suites for the closed-form optima and the
//! worked examples, runnable from the CLI (`verify-paper`) and from the
//! acceptance tests.
//!
//! Every suite is deterministic under its seed; trials run in parallel with
//! per-trial derived seeds and are reduced in index order.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::gauge::{self, Gauge};
use crate::geodesic::{self, GeodesicConfig, SymmetricPolarDecomposition};
use crate::linalg::{self, CMat};
use crate::lowprank;
use crate::means::{self, MeanConfig};
use crate::nrange;
use crate::randgen::{self, GeneratorSpec};
use crate::sectorial::{self, SectorInterval};

// Tolerances of the acceptance criteria.
pub const EXAMPLE1_PHASE_TOL: f64 = 0.005 * PI;
pub const THM31_TOL: f64 = 1e-7;
pub const MEAN_RICCATI_REL_TOL: f64 = 1e-8;
pub const MEAN_QUADRATURE_TOL: f64 = 1e-5;
pub const MEAN_SYMMETRY_TOL: f64 = 1e-8;
pub const MEAN_CONGRUENCE_TOL: f64 = 1e-7;
pub const POLAR_RECONSTRUCTION_REL_TOL: f64 = 1e-8;
pub const POLAR_UNITARY_TOL: f64 = 1e-10;
pub const POLAR_PHASE_TOL: f64 = 1e-7;
pub const BRUTE_FORCE_TOL: f64 = 1e-6;
pub const THM42_TOL: f64 = 1e-7;
pub const LEMMA_A1_TOL: f64 = 1e-7;
pub const EQ_A1_TOL: f64 = 1e-7;
pub const SCHMIDT_MIRSKY_TOL: f64 = 1e-9;
pub const WITNESS_RANK_TOL: f64 = 1e-9;

// Default trial counts of the acceptance criteria.
pub const THM31_INSTANCES: usize = 200;
pub const THM31_FEASIBLE_PER_INSTANCE: usize = 50;
pub const MEAN_TRIALS: usize = 200;
pub const POLAR_TRIALS: usize = 200;
pub const THM41_PER_INSTANCE: usize = 500;
pub const THM41_INSTANCES: usize = 20;
pub const BRUTE_FORCE_CANDIDATES: usize = 10_000;
pub const THM42_TRIALS: usize = 100;
pub const LEMMA_A1_TRIALS: usize = 200;
pub const EQ_A1_INSTANCES: usize = 10;
pub const EQ_A1_SAMPLES: usize = 500;
pub const SCHMIDT_MIRSKY_TRIALS: usize = 100;
pub const FIGURE1_SAMPLES: usize = 720;

/// Result of one suite: pass flag, check count, worst residuals per metric,
/// and the first few failure descriptions.
#[derive(Debug, Clone, Serialize)]
pub struct SuiteOutcome {
    pub name: String,
    pub passed: bool,
    pub checks: usize,
    pub stats: BTreeMap<String, f64>,
    pub failures: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl SuiteOutcome {
    fn new(name: &str) -> Self {
        Self {
            name: name.to_string(),
            passed: true,
            checks: 0,
            stats: BTreeMap::new(),
            failures: Vec::new(),
            notes: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.passed = false;
            if self.failures.len() < 8 {
                self.failures.push(describe());
            }
        }
    }

    fn error(&mut self, context: &str, err: &crate::Error) {
        self.passed = false;
        if self.failures.len() < 8 {
            self.failures.push(format!("{context}: {err}"));
        }
    }

    fn stat_max(&mut self, key: &str, value: f64) {
        let entry = self.stats.entry(key.to_string()).or_insert(f64::NEG_INFINITY);
        if value > *entry {
            *entry = value;
        }
    }

    fn stat_min(&mut self, key: &str, value: f64) {
        let entry = self.stats.entry(key.to_string()).or_insert(f64::INFINITY);
        if value < *entry {
            *entry = value;
        }
    }

    fn merge(&mut self, other: SuiteOutcome) {
        self.checks += other.checks;
        self.passed &= other.passed;
        for (k, v) in other.stats {
            if k.starts_with("min_") {
                let e = self.stats.entry(k).or_insert(f64::INFINITY);
                if v < *e {
                    *e = v;
                }
            } else {
                let e = self.stats.entry(k).or_insert(f64::NEG_INFINITY);
                if v > *e {
                    *e = v;
                }
            }
        }
        for f in other.failures {
            if self.failures.len() < 8 {
                self.failures.push(f);
            }
        }
        for n in other.notes {
            if !self.notes.contains(&n) {
                self.notes.push(n);
            }
        }
    }
}

/// Summary over all suites.
#[derive(Debug, Clone, Serialize)]
pub struct VerifySummary {
    pub seed: u64,
    pub all_passed: bool,
    pub suites: Vec<SuiteOutcome>,
}

fn mix_seed(seed: u64, a: u64, b: u64) -> u64 {
    // splitmix-style diffusion over (seed, a, b)
    let mut z = seed ^ a.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ b.wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

// ---------------------------------------------------------------------------
// Worked examples
// ---------------------------------------------------------------------------

/// The counterexample instance: A = diag(e^{j pi/3}, e^{-j pi/4}) and the
/// conjugator E~ = W* L W.
pub fn example1_matrices() -> (CMat, CMat) {
    let a = CMat::from_diagonal(&nalgebra::DVector::from_vec(vec![
        linalg::phase_factor(PI / 3.0),
        linalg::phase_factor(-PI / 4.0),
    ]));
    let w = CMat::from_row_slice(
        2,
        2,
        &[
            linalg::c(0.6, 0.0),
            linalg::c(0.3, 0.0),
            linalg::c(0.2, 0.0),
            linalg::c(0.7, 0.0),
        ],
    );
    let l = CMat::from_diagonal(&nalgebra::DVector::from_vec(vec![
        linalg::phase_factor(PI / 6.0),
        linalg::ONE,
    ]));
    let e = w.adjoint() * l * w;
    (a, e)
}

/// Canonical phases of E~^{-1} A E~^{-1}, computed by this crate and pinned
/// against an independent field-angle evaluation. The two reported digits of
/// phi_2 in the source match; phi_1 does not (it coincides with the
/// eigenvalue angle instead).
pub const EXAMPLE1_COMPUTED_PHASES_OVER_PI: [f64; 2] = [-0.025423186623, -0.224576813377];
pub const EXAMPLE1_REPORTED_PHASES_OVER_PI: [f64; 2] = [-0.055, -0.22];

/// Example 1: the conjugator is feasible at r = 1, the conjugate's phases
/// carry a max-gauge objective strictly below pi/4 (the positive-imaginary
/// formula value), so dropping positive-imaginariness strictly improves the
/// instance.
pub fn example1_suite() -> SuiteOutcome {
    let mut out = SuiteOutcome::new("example1");
    let (a, e) = example1_matrices();

    let conj = match lowprank::conjugate_by_inverse(&a, &e) {
        Ok(c) => c,
        Err(err) => {
            out.error("conjugate", &err);
            return out;
        }
    };
    let ph = match sectorial::phases(&conj) {
        Ok(p) => p,
        Err(err) => {
            out.error("phases", &err);
            return out;
        }
    };
    let phi1 = ph.as_slice()[0];
    let phi2 = ph.as_slice()[1];
    out.stats.insert("phi1_over_pi".into(), phi1 / PI);
    out.stats.insert("phi2_over_pi".into(), phi2 / PI);

    out.check(
        (phi2 - EXAMPLE1_REPORTED_PHASES_OVER_PI[1] * PI).abs() <= EXAMPLE1_PHASE_TOL,
        || format!("phi2 = {:.6}pi vs reported -0.22pi", phi2 / PI),
    );
    out.check(phi2.abs() < 0.23 * PI, || {
        format!("|phi2| = {:.6}pi not < 0.23pi", phi2.abs() / PI)
    });
    // regression pins against the independently verified values
    for (k, (got, want)) in [
        (1, (phi1, EXAMPLE1_COMPUTED_PHASES_OVER_PI[0] * PI)),
        (2, (phi2, EXAMPLE1_COMPUTED_PHASES_OVER_PI[1] * PI)),
    ] {
        out.check((got - want).abs() < 1e-6, || {
            format!("phi{k} = {:.9}pi vs verified {:.9}pi", got / PI, want / PI)
        });
    }

    match lowprank::objective(&a, &e, Gauge::Max) {
        Ok(obj) => {
            out.stats.insert("objective_over_pi".into(), obj / PI);
            out.check(obj < PI / 4.0, || {
                format!("objective {:.6}pi not < pi/4", obj / PI)
            });
        }
        Err(err) => out.error("objective", &err),
    }

    match lowprank::is_feasible(&a, &e, 1, false) {
        Ok(rep) => {
            out.check(rep.feasible, || format!("feasibility report: {rep:?}"));
            out.check(rep.e_prank == Some(1), || {
                format!("prank(E~) = {:?}, expected 1", rep.e_prank)
            });
        }
        Err(err) => out.error("is_feasible", &err),
    }

    // E~^{-1} A E~^{-1} is not positive-imaginary: the theorem formula does
    // not govern this instance
    match lowprank::is_feasible(&a, &e, 1, true) {
        Ok(rep) => out.check(!rep.feasible, || "conjugate unexpectedly PI".into()),
        Err(err) => out.error("is_feasible(PI)", &err),
    }

    out.stats.insert(
        "phi1_paper_discrepancy_over_pi".into(),
        (phi1 / PI - EXAMPLE1_REPORTED_PHASES_OVER_PI[0]).abs(),
    );
    out.notes.push(
        "phi1 differs from the reported -0.055pi, which matches the eigenvalue angle rather \
         than the canonical phase; the field-angle span of the numerical range confirms the \
         computed value"
            .into(),
    );
    out
}

/// The rank/phase-rank example: A = diag(11+j, 11-j) has prank 2 while the
/// given M = [[10, -sqrt2], [-sqrt2, 10]] > 0 leaves rank(A - M) = 1, and
/// the constructed witness attains rank(R) = prank(A).
pub fn thm32_matrices() -> (CMat, CMat) {
    let a = CMat::from_diagonal(&nalgebra::DVector::from_vec(vec![
        linalg::c(11.0, 1.0),
        linalg::c(11.0, -1.0),
    ]));
    let s = 2.0f64.sqrt();
    let m = CMat::from_row_slice(
        2,
        2,
        &[
            linalg::c(10.0, 0.0),
            linalg::c(-s, 0.0),
            linalg::c(-s, 0.0),
            linalg::c(10.0, 0.0),
        ],
    );
    (a, m)
}

pub fn thm32_suite() -> SuiteOutcome {
    let mut out = SuiteOutcome::new("thm32_example");
    let (a, m_paper) = thm32_matrices();

    match sectorial::prank(&a, sectorial::DEFAULT_PHASE_TOL) {
        Ok(p) => out.check(p == 2, || format!("prank = {p}, expected 2")),
        Err(err) => out.error("prank", &err),
    }

    let diff = &a - &m_paper;
    let sv = linalg::singular_values(&diff);
    out.stats.insert("sigma1".into(), sv[0]);
    out.stats.insert("sigma2_over_sigma1".into(), sv[1] / sv[0]);
    out.check(sv[1] < WITNESS_RANK_TOL * sv[0], || {
        format!("sigma2/sigma1 = {:.3e} not < 1e-9", sv[1] / sv[0])
    });

    match lowprank::prank_rank_witness(&a) {
        Ok((r_mat, m_mat)) => {
            out.check(linalg::herm_lambda_min(&m_mat) > 0.0, || {
                "witness M not positive definite".into()
            });
            let rank = linalg::numerical_rank(&r_mat, WITNESS_RANK_TOL);
            out.check(rank == 2, || format!("rank(R) = {rank}, expected 2"));
        }
        Err(err) => out.error("witness", &err),
    }
    out
}

/// Boundary data of W(E~^{-1} A E~^{-1}): at least 360 points whose convex
/// hull excludes the origin, consistent with the sectoriality certificate.
pub fn figure1_suite(samples: usize) -> SuiteOutcome {
    let mut out = SuiteOutcome::new("figure1_nrange");
    let (a, e) = example1_matrices();
    let conj = match lowprank::conjugate_by_inverse(&a, &e) {
        Ok(c) => c,
        Err(err) => {
            out.error("conjugate", &err);
            return out;
        }
    };
    let boundary = match nrange::boundary(&conj, samples.max(360)) {
        Ok(b) => b,
        Err(err) => {
            out.error("boundary", &err);
            return out;
        }
    };
    out.check(boundary.len() >= 360, || {
        format!("only {} boundary points", boundary.len())
    });

    let cert = match sectorial::sectoriality_certificate(&conj, 720) {
        Ok(Some(c)) => c,
        Ok(None) => {
            out.check(false, || "conjugate not sectorial".into());
            return out;
        }
        Err(err) => {
            out.error("certificate", &err);
            return out;
        }
    };
    // every boundary point sits strictly inside the separating half-plane
    let mut min_sep = f64::INFINITY;
    for p in &boundary.points {
        min_sep = min_sep.min((p * linalg::phase_factor(-cert.theta)).re);
    }
    out.stats.insert("min_halfplane_separation".into(), min_sep);
    out.check(min_sep > 0.0, || {
        format!("hull not separated from origin (min separation {min_sep:.3e})")
    });
    out.check(min_sep >= cert.lambda_min - 1e-9, || {
        format!(
            "separation {min_sep:.6} below certificate lambda_min {:.6}",
            cert.lambda_min
        )
    });

    match nrange::contains_zero(&conj, 720, 1e-12) {
        Ok(cz) => out.check(!cz, || "contains_zero disagrees with certificate".into()),
        Err(err) => out.error("contains_zero", &err),
    }

    // the figure shows the range in the lower half-plane right of the origin
    let all_lower_right = boundary.points.iter().all(|p| p.re > 0.0 && p.im < 0.0);
    out.check(all_lower_right, || {
        "boundary not confined to the lower-right quadrant".into()
    });
    out
}

// ---------------------------------------------------------------------------
// Theorem 3.1 randomized suite
// ---------------------------------------------------------------------------

fn gauges_for(n: usize) -> Vec<Gauge> {
    let mut gs = vec![Gauge::Max, Gauge::Sum];
    for k in 1..=n {
        gs.push(Gauge::KyFan(k));
    }
    gs
}

/// Truncation optimality for positive-imaginary instances: the canonical
/// truncation attains the closed-form value for every r and gauge, the
/// conjugate phase multiset is {0 x r} + {phi_{r+1} ...}, and random
/// feasible conjugators never beat the optimum.
pub fn thm31_suite(seed: u64, instances: usize, feasible_per_instance: usize) -> SuiteOutcome {
    let results: Vec<SuiteOutcome> = (0..instances)
        .into_par_iter()
        .map(|i| {
            let mut out = SuiteOutcome::new("thm31");
            let n = 2 + i % 7;
            let spec = GeneratorSpec::new(
                mix_seed(seed, 31, i as u64),
                n,
                SectorInterval::positive_imaginary(),
            )
            .with_condition_cap(30.0);
            let a = match randgen::random_sectorial(&spec) {
                Ok(a) => a,
                Err(err) => {
                    out.error("generate", &err);
                    return out;
                }
            };
            // one robust decomposition per instance; everything downstream is
            // seeded with its certificate rotation
            let dec = match sectorial::sectorial_decomposition(&a) {
                Ok(d) => d,
                Err(err) => {
                    out.error("decomposition", &err);
                    return out;
                }
            };
            for r in 0..=n {
                let trunc = match lowprank::truncation_from_decomposition(&dec, r) {
                    Ok(t) => t,
                    Err(err) => {
                        out.error("truncation", &err);
                        continue;
                    }
                };
                let theta_a = trunc.source.certificate.theta;
                let ph_a = &trunc.source.phases;
                let conj = match lowprank::conjugate_by_inverse(&a, &trunc.e) {
                    Ok(c) => c,
                    Err(err) => {
                        out.error("conjugate", &err);
                        continue;
                    }
                };
                let conj_hints = [theta_a, PI / 2.0, 0.1];
                let ph_conj = match sectorial::phases_with_hints(&conj, &conj_hints) {
                    Ok(p) => p,
                    Err(err) => {
                        out.error("conjugate phases", &err);
                        continue;
                    }
                };

                // conjugate phase multiset = {0 x r} + top-truncated phases
                let mut expected: Vec<f64> = vec![0.0; r];
                expected.extend_from_slice(&ph_a.as_slice()[r..]);
                expected.sort_by(|x, y| y.partial_cmp(x).unwrap());
                let mut worst_phase = 0.0f64;
                for (got, want) in ph_conj.as_slice().iter().zip(expected.iter()) {
                    worst_phase = worst_phase.max((got - want).abs());
                }
                out.stat_max("max_conjugate_phase_error", worst_phase);
                out.check(worst_phase <= THM31_TOL, || {
                    format!("n={n} r={r}: conjugate phase error {worst_phase:.3e}")
                });

                for gauge in gauges_for(n) {
                    let obj = gauge.eval(ph_conj.as_slice()).unwrap();
                    let opt = lowprank::optimal_value_from_phases(ph_a, r, gauge).unwrap();
                    let diff = (obj - opt).abs();
                    out.stat_max("max_truncation_gap", diff);
                    out.check(diff <= THM31_TOL, || {
                        format!("n={n} r={r} {gauge}: |objective - optimum| = {diff:.3e}")
                    });
                }

                for k in 0..feasible_per_instance {
                    let draw_spec = GeneratorSpec::new(
                        mix_seed(seed, (1000 + r) as u64, (i * 1000 + k) as u64),
                        n,
                        SectorInterval::positive_imaginary(),
                    )
                    .with_condition_cap(30.0);
                    match randgen::random_feasible_conjugator_from(&a, r, &draw_spec, Some(&trunc))
                    {
                        Ok(fc) => {
                            let ph_e =
                                fc.report.conjugate_phases.as_ref().expect("feasible report");
                            for gauge in [Gauge::Max, Gauge::Sum, Gauge::KyFan(1.max(n / 2))] {
                                let obj = gauge.eval(ph_e).unwrap();
                                let opt =
                                    lowprank::optimal_value_from_phases(ph_a, r, gauge).unwrap();
                                out.stat_min("min_feasible_margin", obj - opt);
                                out.check(obj >= opt - THM31_TOL, || {
                                    format!(
                                        "n={n} r={r} {gauge}: feasible E beats optimum by {:.3e}",
                                        opt - obj
                                    )
                                });
                            }
                        }
                        Err(err) => out.error("feasible draw", &err),
                    }
                }
            }
            out
        })
        .collect();

    let mut out = SuiteOutcome::new("thm31");
    for r in results {
        out.merge(r);
    }
    out
}

// ---------------------------------------------------------------------------
// Geometric mean suite
// ---------------------------------------------------------------------------

fn accretive_sector() -> SectorInterval {
    SectorInterval::closed(-PI / 2.0 + 0.05, PI / 2.0 - 0.05).unwrap()
}

/// Riccati residual, quadrature-oracle agreement, symmetry and congruence
/// equivariance of the geometric mean on random accretive pairs.
pub fn geometric_mean_suite(seed: u64, trials: usize) -> SuiteOutcome {
    let results: Vec<SuiteOutcome> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut out = SuiteOutcome::new("geometric_mean");
            let n = 2 + t % 7;
            let spec_m = GeneratorSpec::new(mix_seed(seed, 51, t as u64), n, accretive_sector())
                .with_condition_cap(10.0);
            let spec_n = GeneratorSpec::new(mix_seed(seed, 52, t as u64), n, accretive_sector())
                .with_condition_cap(10.0);
            let (m, nn) = match (
                randgen::random_sectorial(&spec_m),
                randgen::random_sectorial(&spec_n),
            ) {
                (Ok(a), Ok(b)) => (a, b),
                _ => {
                    out.check(false, || "generation failed".into());
                    return out;
                }
            };
            // exercise the automatic rotation on a quarter of the trials
            let cfg = MeanConfig {
                rotation_beta: if t % 4 == 0 { None } else { Some(0.0) },
                ..MeanConfig::default()
            };
            let scale = linalg::fro_norm(&m) + linalg::fro_norm(&nn);

            let g = match means::geometric_mean(&m, &nn, &cfg) {
                Ok(g) => g,
                Err(err) => {
                    out.error("mean", &err);
                    return out;
                }
            };
            let riccati = linalg::fro_norm(
                &(&g * linalg::inverse(&m).unwrap() * &g - &nn),
            ) / scale;
            out.stat_max("max_riccati_relative", riccati);
            out.check(riccati <= MEAN_RICCATI_REL_TOL, || {
                format!("trial {t}: riccati {riccati:.3e}")
            });

            match means::geometric_mean_quadrature(&m, &nn, &cfg) {
                Ok(gq) => {
                    let diff = linalg::fro_norm(&(&g - &gq));
                    out.stat_max("max_quadrature_gap", diff);
                    out.check(diff <= MEAN_QUADRATURE_TOL, || {
                        format!("trial {t}: quadrature gap {diff:.3e}")
                    });
                }
                Err(err) => out.error("quadrature", &err),
            }

            match means::geometric_mean(&nn, &m, &cfg) {
                Ok(g2) => {
                    let sym = linalg::fro_norm(&(&g - &g2));
                    out.stat_max("max_symmetry_gap", sym);
                    out.check(sym <= MEAN_SYMMETRY_TOL, || {
                        format!("trial {t}: symmetry gap {sym:.3e}")
                    });
                }
                Err(err) => out.error("mean (swapped)", &err),
            }

            // sector closure: phases of the mean inside the joint phase hull
            let (ph_m, ph_n, ph_g) = (
                sectorial::phases_with_hints(&m, &[0.0]),
                sectorial::phases_with_hints(&nn, &[0.0]),
                sectorial::phases_with_hints(&g, &[0.0]),
            );
            if let (Ok(pm), Ok(pn), Ok(pg)) = (ph_m, ph_n, ph_g) {
                let lo = pm.min_phase().min(pn.min_phase());
                let hi = pm.max_phase().max(pn.max_phase());
                let viol = (lo - pg.min_phase()).max(pg.max_phase() - hi).max(0.0);
                out.stat_max("max_hull_violation", viol);
                out.check(viol <= 1e-7, || {
                    format!("trial {t}: mean phases leave the joint hull by {viol:.3e}")
                });
            } else {
                out.check(false, || format!("trial {t}: phase computation failed"));
            }

            // congruence equivariance with a mild random T
            let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(seed, 53, t as u64));
            let t_mat = randgen::random_conditioned(&mut rng, n, 3.0);
            let lhs = means::geometric_mean(
                &(t_mat.adjoint() * &m * &t_mat),
                &(t_mat.adjoint() * &nn * &t_mat),
                &MeanConfig::default(),
            );
            match lhs {
                Ok(lhs) => {
                    let rhs = t_mat.adjoint() * &g * &t_mat;
                    let gap = linalg::fro_norm(&(&lhs - &rhs));
                    out.stat_max("max_congruence_gap", gap);
                    out.check(gap <= MEAN_CONGRUENCE_TOL, || {
                        format!("trial {t}: congruence gap {gap:.3e}")
                    });
                }
                Err(err) => out.error("congruence mean", &err),
            }
            out
        })
        .collect();

    let mut out = SuiteOutcome::new("geometric_mean");
    for r in results {
        out.merge(r);
    }
    out
}

// ---------------------------------------------------------------------------
// Symmetric polar suite
// ---------------------------------------------------------------------------

pub fn symmetric_polar_suite(seed: u64, trials: usize) -> SuiteOutcome {
    let results: Vec<SuiteOutcome> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut out = SuiteOutcome::new("symmetric_polar");
            let n = 2 + t % 7;
            let spec = GeneratorSpec::new(mix_seed(seed, 61, t as u64), n, accretive_sector())
                .with_condition_cap(10.0);
            let a = match randgen::random_sectorial(&spec) {
                Ok(a) => a,
                Err(err) => {
                    out.error("generate", &err);
                    return out;
                }
            };
            let spd = match geodesic::symmetric_polar(&a, 0.0) {
                Ok(s) => s,
                Err(err) => {
                    out.error("polar", &err);
                    return out;
                }
            };
            out.stat_max("max_reconstruction_relative", spd.residual);
            out.check(spd.residual <= POLAR_RECONSTRUCTION_REL_TOL, || {
                format!("trial {t}: residual {:.3e}", spd.residual)
            });
            let defect = linalg::unitary_defect(&spd.u);
            out.stat_max("max_unitary_defect", defect);
            out.check(defect <= POLAR_UNITARY_TOL, || {
                format!("trial {t}: unitary defect {defect:.3e}")
            });
            let lmin = linalg::herm_lambda_min(&spd.p);
            out.stat_min("min_p_lambda_min", lmin);
            out.check(lmin > 0.0, || format!("trial {t}: P not PD ({lmin:.3e})"));

            match (
                sectorial::phases_with_hints(&a, &[0.0]),
                sectorial::phases_with_hints(&spd.u, &[0.0]),
            ) {
                (Ok(pa), Ok(pu)) => {
                    let mut worst = 0.0f64;
                    for (x, y) in pa.as_slice().iter().zip(pu.as_slice()) {
                        worst = worst.max((x - y).abs());
                    }
                    out.stat_max("max_phase_gap", worst);
                    out.check(worst <= POLAR_PHASE_TOL, || {
                        format!("trial {t}: phases(U) vs phases(A) gap {worst:.3e}")
                    });
                }
                _ => out.check(false, || format!("trial {t}: phase computation failed")),
            }
            out
        })
        .collect();

    let mut out = SuiteOutcome::new("symmetric_polar");
    for r in results {
        out.merge(r);
    }
    out
}

// ---------------------------------------------------------------------------
// Theorem 4.1 suites
// ---------------------------------------------------------------------------

fn random_accretive_unitary(rng: &mut ChaCha8Rng, n: usize, prank_cap: Option<usize>) -> CMat {
    let margin = 0.05;
    let mut angles = vec![0.0; n];
    let cap = prank_cap.unwrap_or(n);
    let mut idx: Vec<usize> = (0..n).collect();
    for i in 0..cap.min(n) {
        let j = rng.gen_range(i..n);
        idx.swap(i, j);
    }
    for &i in idx.iter().take(cap) {
        angles[i] = rng.gen_range(-PI / 2.0 + margin..PI / 2.0 - margin);
    }
    let v = randgen::random_unitary(rng, n);
    v.adjoint() * sectorial::diagonal_unitary(&angles) * v
}

/// Zeroes the n - r smallest-|angle| eigenvalues of a unitary matrix.
fn truncate_unitary(u: &CMat, r: usize) -> crate::Result<CMat> {
    let full = geodesic::geodesic_truncation_full(u, r, 0.0)?;
    Ok(full.matrix)
}

/// Weak submajorization of |phases(U^{-1} U_r^)| against every random
/// feasible U_r: the optimality mechanism of the geodesic truncation.
pub fn thm41_majorization_suite(seed: u64, instances: usize, per_instance: usize) -> SuiteOutcome {
    let results: Vec<SuiteOutcome> = (0..instances)
        .into_par_iter()
        .map(|i| {
            let mut out = SuiteOutcome::new("thm41_majorization");
            let n = 2 + i % 5;
            let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(seed, 71, i as u64));
            let u = random_accretive_unitary(&mut rng, n, None);
            let r = i % (n + 1);
            let u_hat = match truncate_unitary(&u, r) {
                Ok(m) => m,
                Err(err) => {
                    out.error("truncate", &err);
                    return out;
                }
            };
            let lhs = match means::unitary_angles_abs(&(u.adjoint() * &u_hat)) {
                Ok(v) => v,
                Err(err) => {
                    out.error("lhs angles", &err);
                    return out;
                }
            };
            for k in 0..per_instance {
                let mut rng_k = ChaCha8Rng::seed_from_u64(mix_seed(seed, 72, (i * 100_000 + k) as u64));
                let u_r = random_accretive_unitary(&mut rng_k, n, Some(r));
                let rhs = match means::unitary_angles_abs(&(u.adjoint() * &u_r)) {
                    Ok(v) => v,
                    Err(err) => {
                        out.error("rhs angles", &err);
                        continue;
                    }
                };
                match gauge::weak_submajorize(&lhs, &rhs) {
                    Ok(ok) => out.check(ok, || {
                        format!("i={i} k={k}: |phi(U^-1 U^_r)| not submajorized")
                    }),
                    Err(err) => out.error("submajorize", &err),
                }
            }
            out
        })
        .collect();

    let mut out = SuiteOutcome::new("thm41_majorization");
    for r in results {
        out.merge(r);
    }
    out
}

/// Brute-force never-beaten check: random feasible approximants at n = 2, 3
/// never get closer than the closed-form optimum, and the constructed
/// truncation attains it.
pub fn thm41_bruteforce_suite(seed: u64, candidates: usize) -> SuiteOutcome {
    let cfg = GeodesicConfig::default();
    let cases: Vec<(usize, usize)> = [2usize, 3]
        .into_iter()
        .flat_map(|n| (0..2usize).map(move |inst| (n, inst)))
        .collect();

    let results: Vec<SuiteOutcome> = cases
        .into_par_iter()
        .map(|(n, inst)| {
            let mut out = SuiteOutcome::new("thm41_bruteforce");
            let spec = GeneratorSpec::new(
                mix_seed(seed, 81, (n * 10 + inst) as u64),
                n,
                accretive_sector(),
            )
            .with_condition_cap(10.0);
            let a = match randgen::random_sectorial(&spec) {
                Ok(a) => a,
                Err(err) => {
                    out.error("generate", &err);
                    return out;
                }
            };
            let polar_a = match geodesic::symmetric_polar(&a, 0.0) {
                Ok(p) => p,
                Err(err) => {
                    out.error("polar", &err);
                    return out;
                }
            };
            for r in 0..=n {
                let opt = match geodesic::geodesic_optimal_value(&a, r, &cfg) {
                    Ok(v) => v,
                    Err(err) => {
                        out.error("optimal value", &err);
                        continue;
                    }
                };
                match geodesic::geodesic_truncation_full(&a, r, 0.0) {
                    Ok(t) => {
                        match geodesic::geodesic_distance(&a, &t.matrix, &cfg) {
                            Ok(d) => {
                                out.stat_max("max_attainment_gap", (d - opt).abs());
                                out.check((d - opt).abs() <= THM42_TOL, || {
                                    format!("n={n} r={r}: attained {d:.9} vs optimum {opt:.9}")
                                });
                            }
                            Err(err) => out.error("attained distance", &err),
                        }
                    }
                    Err(err) => out.error("truncation", &err),
                }

                let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(seed, 82, (n * 100 + inst * 10 + r) as u64));
                let mut best = f64::INFINITY;
                for _ in 0..candidates {
                    let p_r = randgen::random_hpd(&mut rng, n, 16.0);
                    let u_r = random_accretive_unitary(&mut rng, n, Some(r));
                    let cand = SymmetricPolarDecomposition {
                        p: match linalg::hpd_sqrt(&p_r) {
                            Ok(s) => s,
                            Err(_) => continue,
                        },
                        u: u_r,
                        alpha: 0.0,
                        residual: 0.0,
                    };
                    if let Ok(d) = geodesic::distance_from_parts(&polar_a, &cand, &cfg) {
                        best = best.min(d);
                    }
                }
                out.stat_min("min_candidate_minus_optimum", best - opt);
                out.check(best >= opt - BRUTE_FORCE_TOL, || {
                    format!("n={n} r={r}: candidate beat optimum by {:.3e}", opt - best)
                });
            }
            out
        })
        .collect();

    let mut out = SuiteOutcome::new("thm41_bruteforce");
    for r in results {
        out.merge(r);
    }
    out
}

// ---------------------------------------------------------------------------
// Theorem 4.2 suite
// ---------------------------------------------------------------------------

/// Dual-solver agreement on unitary positive-imaginary instances.
pub fn thm42_suite(seed: u64, trials: usize) -> SuiteOutcome {
    let results: Vec<SuiteOutcome> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut out = SuiteOutcome::new("thm42");
            let n = 2 + t % 5;
            let spec = GeneratorSpec::new(
                mix_seed(seed, 91, t as u64),
                n,
                SectorInterval::positive_imaginary(),
            );
            let a = match randgen::random_unitary_sectorial(&spec) {
                Ok(a) => a,
                Err(err) => {
                    out.error("generate", &err);
                    return out;
                }
            };
            for r in 0..=n {
                for gauge in [Gauge::Max, Gauge::Sum] {
                    match geodesic::unitary_equivalence_check(&a, r, gauge) {
                        Ok(rep) => {
                            out.stat_max("max_residual", rep.max_residual);
                            out.stat_max("max_truncation_unitary_defect", rep.truncation_unitary_defect);
                            out.check(rep.max_residual <= THM42_TOL, || {
                                format!(
                                    "t={t} n={n} r={r} {gauge}: residual {:.3e}",
                                    rep.max_residual
                                )
                            });
                            out.check(rep.truncation_unitary_defect <= 1e-8, || {
                                format!(
                                    "t={t} n={n} r={r}: truncation not unitary ({:.3e})",
                                    rep.truncation_unitary_defect
                                )
                            });
                        }
                        Err(err) => out.error("equivalence check", &err),
                    }
                }
            }
            out
        })
        .collect();

    let mut out = SuiteOutcome::new("thm42");
    for r in results {
        out.merge(r);
    }
    out
}

// ---------------------------------------------------------------------------
// Appendix suites
// ---------------------------------------------------------------------------

/// Additive phase inequality: psi_m(A + B) >= psi_m(B) for A, B in a common
/// half-plane sector with min-phase(A) >= max-phase(B), evaluated with the
/// signed partial sums the proof manipulates.
pub fn lemma_a1_suite(seed: u64, trials: usize) -> SuiteOutcome {
    let results: Vec<SuiteOutcome> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut out = SuiteOutcome::new("lemma_a1");
            let n = 2 + t % 4;
            let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(seed, 101, t as u64));
            let theta: f64 = rng.gen_range(-PI..=0.0);
            let split: f64 = rng.gen_range(theta + 0.15..theta + PI - 0.15);

            let make_sector = |lo: f64, hi: f64| SectorInterval::new(lo, hi, true, true).unwrap();
            // B below the split, A above: min-phase(A) >= max-phase(B)
            let spec_b = GeneratorSpec::new(
                mix_seed(seed, 102, t as u64),
                n,
                make_sector(theta + 0.01, split),
            )
            .with_condition_cap(10.0);
            let spec_a = GeneratorSpec::new(
                mix_seed(seed, 103, t as u64),
                n,
                make_sector(split, theta + PI - 0.01),
            )
            .with_condition_cap(10.0);
            let (a, b) = match (
                randgen::random_sectorial(&spec_a),
                randgen::random_sectorial(&spec_b),
            ) {
                (Ok(a), Ok(b)) => (a, b),
                _ => {
                    out.check(false, || "generation failed".into());
                    return out;
                }
            };
            let sum = &a + &b;
            let hints = [theta + PI / 2.0, split, theta + 0.2, theta + PI - 0.2];
            let (ph_a, ph_b, ph_s) = match (
                sectorial::phases_with_hints(&a, &hints),
                sectorial::phases_with_hints(&b, &hints),
                sectorial::phases_with_hints(&sum, &hints),
            ) {
                (Ok(x), Ok(y), Ok(z)) => (x, y, z),
                _ => {
                    out.check(false, || format!("t={t}: phase computation failed"));
                    return out;
                }
            };
            // hypothesis check
            out.check(ph_a.min_phase() >= ph_b.max_phase() - 1e-9, || {
                format!("t={t}: hypothesis violated by the generator")
            });
            for m in 1..=n {
                let lhs = ph_s.partial_sum(m);
                let rhs = ph_b.partial_sum(m);
                out.stat_min("min_inequality_margin", lhs - rhs);
                out.check(lhs >= rhs - LEMMA_A1_TOL, || {
                    format!("t={t} m={m}: psi_m(A+B) - psi_m(B) = {:.3e}", lhs - rhs)
                });
            }
            out
        })
        .collect();

    let mut out = SuiteOutcome::new("lemma_a1");
    for r in results {
        out.merge(r);
    }
    out
}

/// Variational characterization of the Ky-Fan phase sums: the compression
/// onto the first m columns of T^{-1} attains psi_m, and no random
/// full-rank compression exceeds it.
pub fn eq_a1_suite(seed: u64, instances: usize, samples: usize) -> SuiteOutcome {
    let results: Vec<SuiteOutcome> = (0..instances)
        .into_par_iter()
        .map(|i| {
            let mut out = SuiteOutcome::new("eq_a1");
            let n = 2 + i % 5;
            let spec = GeneratorSpec::new(
                mix_seed(seed, 111, i as u64),
                n,
                SectorInterval::positive_imaginary(),
            )
            .with_condition_cap(10.0);
            let a = match randgen::random_sectorial(&spec) {
                Ok(a) => a,
                Err(err) => {
                    out.error("generate", &err);
                    return out;
                }
            };
            let dec = match sectorial::sectorial_decomposition(&a) {
                Ok(d) => d,
                Err(err) => {
                    out.error("decomposition", &err);
                    return out;
                }
            };
            let t_inv = match linalg::inverse(&dec.t) {
                Ok(t) => t,
                Err(err) => {
                    out.error("inverse", &err);
                    return out;
                }
            };
            let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(seed, 112, i as u64));
            for m in 1..=n {
                let psi = Gauge::KyFan(m).eval(dec.phases.as_slice()).unwrap();
                let x_opt = CMat::from_fn(n, m, |r, c| t_inv[(r, c)]);
                match gauge::psi_variational_value(&a, &x_opt) {
                    Ok(v) => {
                        out.stat_max("max_attainment_gap", (v - psi).abs());
                        out.check((v - psi).abs() <= EQ_A1_TOL, || {
                            format!("i={i} m={m}: T^-1 columns give {v:.9} vs psi {psi:.9}")
                        });
                    }
                    Err(err) => out.error("variational value", &err),
                }
                for k in 0..samples {
                    let x = randgen::gaussian_cmat(&mut rng, n, m);
                    match gauge::psi_variational_value(&a, &x) {
                        Ok(v) => {
                            out.stat_max("max_excess_over_psi", v - psi);
                            out.check(v <= psi + EQ_A1_TOL, || {
                                format!("i={i} m={m} k={k}: random X exceeds psi by {:.3e}", v - psi)
                            });
                        }
                        Err(crate::Error::RankDeficient(_)) => {}
                        Err(err) => out.error("variational value", &err),
                    }
                }
            }
            out
        })
        .collect();

    let mut out = SuiteOutcome::new("eq_a1");
    for r in results {
        out.merge(r);
    }
    out
}

/// Schmidt-Mirsky baseline: ||A - truncation_r||_Phi equals
/// Phi(0, ..., 0, sigma_{r+1}, ..., sigma_n) for every implemented gauge.
pub fn schmidt_mirsky_suite(seed: u64, trials: usize) -> SuiteOutcome {
    let results: Vec<SuiteOutcome> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut out = SuiteOutcome::new("schmidt_mirsky");
            let n = 2 + t % 7;
            let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(seed, 121, t as u64));
            let a = randgen::gaussian_cmat(&mut rng, n, n);
            let mut gauges = gauges_for(n);
            gauges.push(Gauge::Lp(1.5));
            gauges.push(Gauge::Lp(2.5));
            for r in 0..=n {
                let trunc = match gauge::svd_truncate(&a, r) {
                    Ok(m) => m,
                    Err(err) => {
                        out.error("truncate", &err);
                        continue;
                    }
                };
                let diff = &a - &trunc;
                for g in &gauges {
                    let err_norm = gauge::ui_norm(*g, &diff).unwrap();
                    let value = gauge::schmidt_mirsky_value(&a, r, *g).unwrap();
                    let gap = (err_norm - value).abs();
                    out.stat_max("max_gap", gap);
                    out.check(gap <= SCHMIDT_MIRSKY_TOL, || {
                        format!("t={t} n={n} r={r} {g}: |error - value| = {gap:.3e}")
                    });
                }
            }
            out
        })
        .collect();

    let mut out = SuiteOutcome::new("schmidt_mirsky");
    for r in results {
        out.merge(r);
    }
    out
}

// ---------------------------------------------------------------------------
// Top-level runner
// ---------------------------------------------------------------------------

/// Runs every suite. `trials` overrides the per-suite main trial counts when
/// given; the defaults are the acceptance-criteria counts.
pub fn run_all(seed: u64, trials: Option<usize>) -> VerifySummary {
    let t = |default: usize| trials.unwrap_or(default);
    let suites = vec![
        example1_suite(),
        thm32_suite(),
        figure1_suite(FIGURE1_SAMPLES),
        thm31_suite(seed, t(THM31_INSTANCES), THM31_FEASIBLE_PER_INSTANCE),
        geometric_mean_suite(seed, t(MEAN_TRIALS)),
        symmetric_polar_suite(seed, t(POLAR_TRIALS)),
        thm41_majorization_suite(seed, t(THM41_INSTANCES), THM41_PER_INSTANCE),
        thm41_bruteforce_suite(seed, t(BRUTE_FORCE_CANDIDATES)),
        thm42_suite(seed, t(THM42_TRIALS)),
        lemma_a1_suite(seed, t(LEMMA_A1_TRIALS)),
        eq_a1_suite(seed, t(EQ_A1_INSTANCES), EQ_A1_SAMPLES),
        schmidt_mirsky_suite(seed, t(SCHMIDT_MIRSKY_TRIALS)),
    ];
    let all_passed = suites.iter().all(|s| s.passed);
    VerifySummary {
        seed,
        all_passed,
        suites,
    }
}
