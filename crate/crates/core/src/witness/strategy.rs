//! Qubit strategies for two-step, two-setting, two-outcome sequences, and
//! a numerical optimizer over them.
//!
//! For `L = 2` only the post-measurement state after each first-step
//! `(a, x)` matters, so a strategy is the initial Bloch vector, the four
//! post-measurement Bloch vectors and the two binary effects.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::functional::WitnessFunctional;
use super::WitnessError;
use crate::correlations::{Behavior, Scenario};
use crate::qmath::{bloch_to_density, effect_from_params, BlochVector, Instrument, SystemModel};
use crate::DEFAULT_SEED;

/// The effect `E_0 = a (1 + b axis . sigma)`, `E_1 = 1 - E_0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SettingEffect {
    pub a: f64,
    pub b: f64,
    pub axis: BlochVector,
}

impl SettingEffect {
    /// `tr(E_0 rho)` for the state with Bloch vector `alpha`.
    fn p0(&self, alpha: &BlochVector) -> f64 {
        self.a * (1.0 + self.b * self.axis.dot(alpha))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QubitStrategy {
    pub initial: BlochVector,
    /// `post[x][a]`: state after the first measurement `x` gave `a`.
    pub post: [[BlochVector; 2]; 2],
    pub effects: [SettingEffect; 2],
}

impl QubitStrategy {
    pub fn validate(&self) -> Result<(), WitnessError> {
        let bad = |m: String| Err(WitnessError::InvalidStrategy(m));
        let vectors = std::iter::once(("initial".to_string(), self.initial)).chain(
            (0..2).flat_map(|x| (0..2).map(move |a| (format!("post[{x}][{a}]"), self.post[x][a]))),
        );
        for (name, v) in vectors {
            if v.norm().is_nan() || v.norm() > 1.0 + 1e-9 {
                return bad(format!("{name} has norm {}", v.norm()));
            }
        }
        for (s, e) in self.effects.iter().enumerate() {
            if (e.axis.norm() - 1.0).abs() > 1e-9 {
                return bad(format!("effects[{s}].axis is not a unit vector"));
            }
            if !(0.0..=1.0).contains(&e.b) {
                return bad(format!("effects[{s}].b = {} outside [0, 1]", e.b));
            }
            if !(e.a >= 0.0 && e.a <= 1.0 / (1.0 + e.b) + 1e-12) {
                return bad(format!("effects[{s}].a = {} outside [0, 1/(1+b)]", e.a));
            }
        }
        Ok(())
    }

    /// `p(ab|xy) = p(a|x) p(b|y; post[x][a])`, in closed form.
    pub fn behavior(&self) -> Result<Behavior, WitnessError> {
        self.validate()?;
        let mut b = Behavior::zeros(Scenario::simplest());
        for x in 0..2 {
            let first = self.effects[x].p0(&self.initial);
            for a in 0..2 {
                let pa = if a == 0 { first } else { 1.0 - first };
                for y in 0..2 {
                    let second = self.effects[y].p0(&self.post[x][a]);
                    b.set(&[a, 0], &[x, y], pa * second);
                    b.set(&[a, 1], &[x, y], pa * (1.0 - second));
                }
            }
        }
        Ok(b)
    }

    /// A measure-and-prepare system realizing the strategy.
    pub fn to_system(&self) -> Result<SystemModel, WitnessError> {
        self.validate()?;
        let instruments = (0..2)
            .map(|x| {
                let e = &self.effects[x];
                let e0 = effect_from_params(e.a, e.b, &e.axis)?;
                let e1 = e0.complement();
                let posts = [
                    bloch_to_density(&self.post[x][0]),
                    bloch_to_density(&self.post[x][1]),
                ];
                Instrument::measure_and_prepare(&[e0, e1], &posts)
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(SystemModel::new(
            bloch_to_density(&self.initial),
            instruments,
        )?)
    }
}

/// Value of `f` (on the `(2,2,2)` scenario) for a qubit strategy.
pub fn strategy_value(f: &WitnessFunctional, s: &QubitStrategy) -> Result<f64, WitnessError> {
    if *f.scenario() != Scenario::simplest() {
        return Err(WitnessError::ScenarioMismatch);
    }
    super::evaluate(f, &s.behavior()?)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    pub restarts: usize,
    pub seed: u64,
    /// Maximum number of sweeps over the parameters per restart.
    pub iterations: usize,
    pub initial_step: f64,
    /// A restart stops once the step has been halved below this.
    pub min_step: f64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            restarts: 200,
            seed: DEFAULT_SEED,
            iterations: 2000,
            initial_step: 0.25,
            min_step: 1e-10,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptimizerResult {
    pub value: f64,
    pub strategy: QubitStrategy,
    /// Restart that produced the best value.
    pub restart: usize,
}

/// Per setting `(t, b, theta, phi)` with `a = t / (1 + b)`.
type Params = [f64; 8];

struct Objective {
    /// `coeff[x][y][a][b]`
    coeff: [[[[f64; 2]; 2]; 2]; 2],
}

impl Objective {
    fn new(f: &WitnessFunctional) -> Self {
        let mut coeff = [[[[0.0; 2]; 2]; 2]; 2];
        for t in f.terms() {
            coeff[t.settings[0]][t.settings[1]][t.outcomes[0]][t.outcomes[1]] += t.coeff;
        }
        Self { coeff }
    }

    fn effects(p: &Params) -> [SettingEffect; 2] {
        let one = |i: usize| {
            let b = p[4 * i + 1].clamp(0.0, 1.0);
            let t = p[4 * i].clamp(0.0, 1.0);
            SettingEffect {
                a: t / (1.0 + b),
                b,
                axis: BlochVector::from_angles(p[4 * i + 2], p[4 * i + 3]),
            }
        };
        [one(0), one(1)]
    }

    /// Best states for fixed effects. Each second-step value is affine in
    /// the post-measurement Bloch vector, and after choosing those the
    /// total is affine in the initial Bloch vector, so every optimal state
    /// is a unit vector along its linear coefficient.
    fn best_strategy(&self, effects: [SettingEffect; 2], current: &QubitStrategy) -> QubitStrategy {
        let mut post = current.post;
        let mut gain = [[0.0; 2]; 2];
        for x in 0..2 {
            for a in 0..2 {
                let mut k0 = 0.0;
                let mut k = [0.0; 3];
                for (y, e) in effects.iter().enumerate() {
                    let (c0, c1) = (self.coeff[x][y][a][0], self.coeff[x][y][a][1]);
                    k0 += c0 * e.a + c1 * (1.0 - e.a);
                    let w = (c0 - c1) * e.a * e.b;
                    for (ki, di) in k.iter_mut().zip(e.axis.components()) {
                        *ki += w * di;
                    }
                }
                if let Some(dir) = BlochVector::unit(k) {
                    post[x][a] = dir;
                }
                gain[x][a] = k0 + post[x][a].dot_raw(&k);
            }
        }
        let mut k = [0.0; 3];
        for x in 0..2 {
            let e = &effects[x];
            let w = (gain[x][0] - gain[x][1]) * e.a * e.b;
            for (ki, ci) in k.iter_mut().zip(e.axis.components()) {
                *ki += w * ci;
            }
        }
        let initial = BlochVector::unit(k).unwrap_or(current.initial);
        QubitStrategy {
            initial,
            post,
            effects,
        }
    }

    fn value(&self, s: &QubitStrategy) -> f64 {
        let mut v = 0.0;
        for x in 0..2 {
            let first = s.effects[x].p0(&s.initial);
            for a in 0..2 {
                let pa = if a == 0 { first } else { 1.0 - first };
                for y in 0..2 {
                    let second = s.effects[y].p0(&s.post[x][a]);
                    let c = &self.coeff[x][y][a];
                    v += pa * (c[0] * second + c[1] * (1.0 - second));
                }
            }
        }
        v
    }
}

fn random_params(rng: &mut ChaCha8Rng) -> Params {
    let mut p = [0.0; 8];
    for s in 0..2 {
        p[4 * s] = rng.random();
        p[4 * s + 1] = rng.random();
        p[4 * s + 2] = rng.random::<f64>() * std::f64::consts::PI;
        p[4 * s + 3] = rng.random::<f64>() * std::f64::consts::TAU;
    }
    p
}

/// Maximizes `f` over qubit strategies: random restarts of a pattern search
/// over the effect parameters, with the optimal states for given effects
/// computed in closed form. The result is a lower bound on the qubit
/// maximum and is fully determined by `cfg`.
pub fn optimize_qubit(
    f: &WitnessFunctional,
    cfg: &OptimizerConfig,
) -> Result<OptimizerResult, WitnessError> {
    if *f.scenario() != Scenario::simplest() {
        return Err(WitnessError::ScenarioMismatch);
    }
    if cfg.restarts == 0 {
        return Err(WitnessError::InvalidConfig(
            "restarts must be at least 1".into(),
        ));
    }
    let obj = Objective::new(f);
    let mut best: Option<OptimizerResult> = None;
    for restart in 0..cfg.restarts {
        let (value, strategy) = run_restart(&obj, cfg, restart);
        // Strict comparison keeps the earliest restart on ties.
        if best.as_ref().is_none_or(|b| value > b.value) {
            best = Some(OptimizerResult {
                value,
                strategy,
                restart,
            });
        }
    }
    let mut best = best.expect("at least one restart");
    best.value = strategy_value(f, &best.strategy)?;
    Ok(best)
}

fn run_restart(obj: &Objective, cfg: &OptimizerConfig, restart: usize) -> (f64, QubitStrategy) {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(restart as u64);
    let mut params = random_params(&mut rng);
    let seed_state = QubitStrategy {
        initial: BlochVector::z(),
        post: [[BlochVector::z(); 2]; 2],
        effects: Objective::effects(&params),
    };
    let mut current = obj.best_strategy(Objective::effects(&params), &seed_state);
    let mut value = obj.value(&current);
    let mut step = cfg.initial_step;
    for _ in 0..cfg.iterations {
        if step < cfg.min_step {
            break;
        }
        let mut improved = false;
        for i in 0..params.len() {
            for dir in [1.0, -1.0] {
                let mut trial = params;
                trial[i] += dir * step;
                let cand = obj.best_strategy(Objective::effects(&trial), &current);
                let v = obj.value(&cand);
                if v > value {
                    params = trial;
                    current = cand;
                    value = v;
                    improved = true;
                    break;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    (value, current)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::realize::full_behavior;
    use crate::witness::bounds::{B2_CAP, B4_CAP, C1, C3_REFERENCE};
    use crate::witness::{builtin_functional, builtin_functionals, evaluate};
    use proptest::prelude::{any, prop_assert, proptest, ProptestConfig};

    fn e(a: f64, b: f64, axis: [f64; 3]) -> SettingEffect {
        SettingEffect {
            a,
            b,
            axis: BlochVector::new(axis).unwrap(),
        }
    }

    fn z(s: f64) -> BlochVector {
        BlochVector::new([0.0, 0.0, s]).unwrap()
    }

    /// Setting 0 always reports 0 and prepares |1>; setting 1 measures
    /// sigma_z and prepares the outcome state.
    fn b1_three() -> QubitStrategy {
        QubitStrategy {
            initial: z(1.0),
            post: [[z(-1.0), z(-1.0)], [z(1.0), z(-1.0)]],
            effects: [e(1.0, 0.0, [0.0, 0.0, 1.0]), e(0.5, 1.0, [0.0, 0.0, 1.0])],
        }
    }

    fn random_strategy(rng: &mut ChaCha8Rng) -> QubitStrategy {
        let ball = |rng: &mut ChaCha8Rng| {
            let v = BlochVector::from_angles(
                rng.random::<f64>() * std::f64::consts::PI,
                rng.random::<f64>() * std::f64::consts::TAU,
            );
            let r: f64 = if rng.random_bool(0.5) {
                1.0
            } else {
                rng.random()
            };
            BlochVector::new(v.components().map(|c| c * r)).unwrap()
        };
        let params = random_params(rng);
        QubitStrategy {
            initial: ball(rng),
            post: [[ball(rng), ball(rng)], [ball(rng), ball(rng)]],
            effects: Objective::effects(&params),
        }
    }

    #[test]
    fn known_b1_strategy() {
        let f = builtin_functional("B1").unwrap();
        assert_eq!(strategy_value(&f, &b1_three()).unwrap(), 3.0);
    }

    #[test]
    fn trivial_first_effect_caps_b1() {
        let f = builtin_functional("B1").unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..1000 {
            let mut s = random_strategy(&mut rng);
            s.effects[0].a = 0.0;
            assert!(strategy_value(&f, &s).unwrap() <= 2.0 + 1e-12);
        }
    }

    #[test]
    fn invalid_strategies_rejected() {
        let mut s = b1_three();
        s.effects[1].a = 0.9;
        assert!(matches!(
            s.behavior(),
            Err(WitnessError::InvalidStrategy(_))
        ));
        let mut s = b1_three();
        s.effects[0].axis = BlochVector::new([0.0, 0.0, 0.5]).unwrap();
        assert!(matches!(
            s.validate(),
            Err(WitnessError::InvalidStrategy(_))
        ));
    }

    #[test]
    fn closed_form_matches_simulation() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let s = random_strategy(&mut rng);
            let sim = full_behavior(&s.to_system().unwrap(), 2).unwrap();
            for f in builtin_functionals() {
                let a = strategy_value(&f, &s).unwrap();
                let b = evaluate(&f, &sim).unwrap();
                assert!((a - b).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn random_strategies_respect_bounds() {
        let fs = builtin_functionals();
        let caps = [C1, B2_CAP, C3_REFERENCE, B4_CAP];
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..10_000 {
            let s = random_strategy(&mut rng);
            for (f, cap) in fs.iter().zip(caps) {
                assert!(strategy_value(f, &s).unwrap() <= cap + 1e-9);
            }
        }
    }

    #[test]
    fn optimizer_finds_known_maxima() {
        let cfg = OptimizerConfig {
            restarts: 40,
            ..Default::default()
        };
        let expect = [3.0, 3.0, C3_REFERENCE, C3_REFERENCE];
        for (f, target) in builtin_functionals().iter().zip(expect) {
            let r = optimize_qubit(f, &cfg).unwrap();
            assert!(r.value <= target + 1e-9, "{}: {}", f.name(), r.value);
            assert!(r.value >= target - 1e-3, "{}: {}", f.name(), r.value);
            assert!((strategy_value(f, &r.strategy).unwrap() - r.value).abs() < 1e-9);
        }
    }

    #[test]
    fn optimizer_is_deterministic() {
        let f = builtin_functional("B3").unwrap();
        let cfg = OptimizerConfig {
            restarts: 5,
            seed: 99,
            ..Default::default()
        };
        let a = optimize_qubit(&f, &cfg).unwrap();
        let b = optimize_qubit(&f, &cfg).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.value.to_bits(), b.value.to_bits());
        let zero = OptimizerConfig {
            restarts: 0,
            ..Default::default()
        };
        assert!(matches!(
            optimize_qubit(&f, &zero),
            Err(WitnessError::InvalidConfig(_))
        ));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn optimal_states_never_lose(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let s = random_strategy(&mut rng);
            for f in builtin_functionals() {
                let obj = Objective::new(&f);
                let better = obj.best_strategy(s.effects, &s);
                prop_assert!(obj.value(&better) >= obj.value(&s) - 1e-12);
                prop_assert!((obj.value(&s) - strategy_value(&f, &s).unwrap()).abs() < 1e-12);
            }
        }
    }
}
