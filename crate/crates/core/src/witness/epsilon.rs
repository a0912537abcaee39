use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::WitnessError;
use crate::qmath::random::{gaussian_complex, random_pure_vector};
use crate::qmath::{eigenvalues, trace_norm, ComplexMatrix, QmathError, SystemModel};
use crate::DEFAULT_SEED;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpsilonConfig {
    /// Random starting states per `(a, x)`.
    pub restarts: usize,
    /// Proposals per restart.
    pub iterations: usize,
    pub seed: u64,
}

impl Default for EpsilonConfig {
    fn default() -> Self {
        Self {
            restarts: 8,
            iterations: 400,
            seed: DEFAULT_SEED,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpsilonEstimate {
    /// `max(initial, max over (a, x) of per_branch)`
    pub epsilon: f64,
    /// `|| P rho_in P - rho_in ||_tr`
    pub initial: f64,
    /// `per_branch[x][a]`: largest deviation found over pure inputs.
    pub per_branch: Vec<Vec<f64>>,
}

fn validate_projector(p: &ComplexMatrix, rank: usize) -> Result<(), WitnessError> {
    let not = |reason: String| Err(WitnessError::NotAProjector(reason));
    let defect = p.hermiticity_defect();
    if defect > 1e-9 {
        return not(format!("not Hermitian (defect {defect:e})"));
    }
    let idem = (p * p).max_abs_diff(p);
    if idem > 1e-9 {
        return not(format!("not idempotent (max |P^2 - P| = {idem:e})"));
    }
    let found = eigenvalues(p).iter().filter(|&&l| l > 0.5).count();
    if found != rank {
        return not(format!("rank {found}, expected {rank}"));
    }
    Ok(())
}

fn deviation(p: &ComplexMatrix, m: &ComplexMatrix) -> f64 {
    trace_norm(&(&p.conjugate(m) - m))
}

/// Estimates the smallest `epsilon` for which the system stays within
/// `epsilon` (in trace norm) of the rank-2 subspace of `p`: the initial
/// state and every `I_{a|x}(rho)`.
///
/// The deviation is convex in `rho`, so its maximum over states is
/// attained on pure states; it is searched by random restarts and a local
/// random walk with shrinking steps. This gives a lower estimate of the
/// true maximum that converges as the search budget grows; it is not a
/// certified bound.
pub fn system_epsilon(
    sys: &SystemModel,
    p: &ComplexMatrix,
    cfg: &EpsilonConfig,
) -> Result<EpsilonEstimate, WitnessError> {
    if p.dim() != sys.dim() {
        return Err(QmathError::DimensionMismatch {
            expected: sys.dim(),
            found: p.dim(),
        }
        .into());
    }
    validate_projector(p, 2)?;
    let initial = deviation(p, sys.initial().matrix());
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut per_branch = Vec::with_capacity(sys.settings());
    for inst in sys.instruments() {
        let mut row = Vec::with_capacity(inst.outcomes());
        for a in 0..inst.outcomes() {
            let score = |psi: &[Complex64]| -> Result<f64, WitnessError> {
                let rho = ComplexMatrix::outer(psi, psi);
                Ok(deviation(p, &inst.apply_map(&rho, a)?))
            };
            let mut best = 0.0f64;
            // Basis states first: they are exact maximizers for the
            // classical instruments that occur most often.
            for i in 0..sys.dim() {
                let mut e = vec![Complex64::new(0.0, 0.0); sys.dim()];
                e[i] = Complex64::new(1.0, 0.0);
                best = best.max(score(&e)?);
            }
            for _ in 0..cfg.restarts {
                let mut psi = random_pure_vector(&mut rng, sys.dim());
                let mut value = score(&psi)?;
                let mut step = 0.5;
                for _ in 0..cfg.iterations {
                    let mut trial: Vec<Complex64> = psi
                        .iter()
                        .map(|&z| z + gaussian_complex(&mut rng) * step)
                        .collect();
                    let norm = trial.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                    trial.iter_mut().for_each(|z| *z /= norm);
                    let v = score(&trial)?;
                    if v > value {
                        psi = trial;
                        value = v;
                    } else {
                        step *= 0.97;
                    }
                }
                best = best.max(value);
            }
            row.push(best);
        }
        per_branch.push(row);
    }
    let epsilon = per_branch.iter().flatten().copied().fold(initial, f64::max);
    Ok(EpsilonEstimate {
        epsilon,
        initial,
        per_branch,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmath::random::{random_projector, random_system};
    use crate::realize::{canonical_protocol, full_behavior};
    use crate::witness::bounds::{C1, C3_REFERENCE};
    use crate::witness::{builtin_functionals, evaluate};

    fn qubit_support() -> ComplexMatrix {
        ComplexMatrix::diagonal(&[1.0, 1.0, 0.0])
    }

    #[test]
    fn embedded_qubit_has_zero_epsilon() {
        let sys = canonical_protocol("qubit-B1-3").unwrap().embed(3).unwrap();
        let est = system_epsilon(&sys, &qubit_support(), &EpsilonConfig::default()).unwrap();
        assert!(est.epsilon < 1e-12, "{est:?}");
    }

    #[test]
    fn aligned_projector_beats_random_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let sys = random_system(&mut rng, 2, 2, 2).embed(3).unwrap();
        let cfg = EpsilonConfig::default();
        let aligned = system_epsilon(&sys, &qubit_support(), &cfg)
            .unwrap()
            .epsilon;
        for _ in 0..5 {
            let p = random_projector(&mut rng, 3, 2);
            assert!(system_epsilon(&sys, &p, &cfg).unwrap().epsilon > aligned);
        }
    }

    #[test]
    fn qutrit_protocol_is_far_from_every_qubit() {
        let sys = canonical_protocol("qutrit-e1").unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let cfg = EpsilonConfig {
            restarts: 2,
            iterations: 150,
            ..Default::default()
        };
        for _ in 0..50 {
            let p = random_projector(&mut rng, 3, 2);
            let est = system_epsilon(&sys, &p, &cfg).unwrap();
            assert!(est.epsilon >= 1.0 / 12.0 - 1e-3);
        }
    }

    #[test]
    fn projector_validation() {
        let sys = canonical_protocol("qutrit-e1").unwrap();
        let cfg = EpsilonConfig::default();
        let rank1 = ComplexMatrix::diagonal(&[1.0, 0.0, 0.0]);
        assert!(matches!(
            system_epsilon(&sys, &rank1, &cfg),
            Err(WitnessError::NotAProjector(_))
        ));
        let half = ComplexMatrix::diagonal(&[1.0, 0.5, 0.5]);
        assert!(matches!(
            system_epsilon(&sys, &half, &cfg),
            Err(WitnessError::NotAProjector(_))
        ));
        assert!(matches!(
            system_epsilon(&sys, &ComplexMatrix::identity(2), &cfg),
            Err(WitnessError::Qmath(QmathError::DimensionMismatch { .. }))
        ));
    }

    #[test]
    fn robustness_inequality_holds_empirically() {
        let bounds = [C1, 3.5, C3_REFERENCE, 2.0 + 2f64.sqrt()];
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        let cfg = EpsilonConfig {
            restarts: 3,
            iterations: 200,
            ..Default::default()
        };
        for i in 0..20 {
            let sys = if i % 2 == 0 {
                random_system(&mut rng, 3, 2, 2)
            } else {
                random_system(&mut rng, 2, 2, 2).embed(3).unwrap()
            };
            let b = full_behavior(&sys, 2).unwrap();
            for _ in 0..3 {
                let p = random_projector(&mut rng, 3, 2);
                let eps = system_epsilon(&sys, &p, &cfg).unwrap().epsilon;
                for (f, c) in builtin_functionals().iter().zip(bounds) {
                    assert!(evaluate(f, &b).unwrap() <= c + 12.0 * eps + 1e-6);
                }
            }
        }
    }
}
