//! End-to-end acceptance criteria. Each criterion prints one PASS/FAIL line
//! with its runtime; the test fails if any criterion fails.

use std::time::{Duration, Instant};

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tempcorr::correlations::{
    check_membership, classify_vertices, compose_from_conditionals, count_vertices,
    decompose_behavior, enumerate_vertices, factorize, named_vertex, Behavior, ConditionalChain,
    RelabelingGroup, Scenario, DEFAULT_VERTEX_CAP, NAMED_VERTICES,
};
use tempcorr::qmath::random::{random_projector, random_system};
use tempcorr::qmath::BlochVector;
use tempcorr::realize::{
    canonical_protocol, full_behavior, mixture_realization, qutrit_vertex_realization,
};
use tempcorr::witness::{
    b1_projective_profile, b3_profile, b4_envelope, builtin_functional, c3_bound, certify,
    evaluate, optimize_qubit, strategy_value, system_epsilon, EpsilonConfig, OptimizerConfig,
    QubitStrategy, SettingEffect,
};

type Outcome = Result<(), String>;

fn check(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn run(id: usize, name: &str, limit: Option<Duration>, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let mut result = f();
    let elapsed = start.elapsed();
    if let (Ok(()), Some(limit)) = (&result, limit) {
        if elapsed > limit {
            result = Err(format!("runtime {elapsed:.2?} exceeds {limit:?}"));
        }
    }
    match &result {
        Ok(()) => println!("PASS {id:>2} {name} ({elapsed:.2?})"),
        Err(e) => println!("FAIL {id:>2} {name} ({elapsed:.2?}): {e}"),
    }
    result.is_ok()
}

fn secs(s: u64) -> Option<Duration> {
    Some(Duration::from_secs(s))
}

fn scenario(l: usize, r: usize, s: usize) -> Scenario {
    Scenario::new(l, r, s).unwrap()
}

fn random_ball(rng: &mut ChaCha8Rng) -> BlochVector {
    let dir = BlochVector::from_angles(
        rng.random::<f64>() * std::f64::consts::PI,
        rng.random::<f64>() * std::f64::consts::TAU,
    );
    let r = if rng.random_bool(0.5) {
        1.0
    } else {
        rng.random()
    };
    BlochVector::new(dir.components().map(|c| c * r)).unwrap()
}

fn random_strategy(rng: &mut ChaCha8Rng) -> QubitStrategy {
    let effect = |rng: &mut ChaCha8Rng| {
        let b: f64 = rng.random();
        let a = rng.random::<f64>() / (1.0 + b);
        let axis = BlochVector::from_angles(
            rng.random::<f64>() * std::f64::consts::PI,
            rng.random::<f64>() * std::f64::consts::TAU,
        );
        SettingEffect { a, b, axis }
    };
    let effects = [effect(rng), effect(rng)];
    QubitStrategy {
        initial: random_ball(rng),
        post: [
            [random_ball(rng), random_ball(rng)],
            [random_ball(rng), random_ball(rng)],
        ],
        effects,
    }
}

/// A random point of the polytope, built from random conditionals. A
/// quarter of the conditionals are deterministic so that sparse
/// decompositions are exercised as well.
fn random_member(rng: &mut ChaCha8Rng, s: Scenario) -> Behavior {
    let r = s.outcomes();
    let mut c = ConditionalChain::uniform(s);
    for t in 1..=s.length() {
        for dist in c.level_mut(t).chunks_mut(r) {
            if rng.random_bool(0.25) {
                let k = rng.random_range(0..r);
                dist.iter_mut()
                    .enumerate()
                    .for_each(|(i, p)| *p = (i == k) as u8 as f64);
            } else {
                let w: Vec<f64> = (0..r).map(|_| rng.random::<f64>() + 1e-3).collect();
                let total: f64 = w.iter().sum();
                dist.iter_mut().zip(&w).for_each(|(p, wi)| *p = wi / total);
            }
        }
    }
    compose_from_conditionals(&c).unwrap()
}

fn vertex_counting() -> Outcome {
    // |V| = R^(S + S^2 + ... + S^L)
    for (l, r, s, expected) in [
        (1, 2, 2, 4u64),
        (2, 2, 2, 64),
        (2, 3, 2, 729),
        (2, 2, 3, 4096),
        (3, 2, 2, 16384),
    ] {
        let sc = scenario(l, r, s);
        let count = count_vertices(&sc);
        check(count == BigUint::from(expected), || {
            format!("({l},{r},{s}): count {count}, expected {expected}")
        })?;
        let listed = enumerate_vertices(&sc, DEFAULT_VERTEX_CAP).map_err(|e| e.to_string())?;
        check(listed.len() as u64 == expected, || {
            format!(
                "({l},{r},{s}): enumerated {}, expected {expected}",
                listed.len()
            )
        })?;
    }
    Ok(())
}

fn classification() -> Outcome {
    let s = Scenario::simplest();
    let orbits = classify_vertices(&s, RelabelingGroup::PerSettingOutcomes, DEFAULT_VERTEX_CAP)
        .map_err(|e| e.to_string())?;
    check(orbits.len() == 10, || format!("{} orbits", orbits.len()))?;
    let mut seen = Vec::new();
    for name in NAMED_VERTICES {
        let index: usize = named_vertex(name).unwrap().index().try_into().unwrap();
        let orbit = orbits
            .iter()
            .position(|o| o.members.contains(&index))
            .ok_or_else(|| format!("{name} is in no orbit"))?;
        check(!seen.contains(&orbit), || format!("{name} shares an orbit"))?;
        seen.push(orbit);
    }
    Ok(())
}

fn vertex_exactness() -> Outcome {
    for sc in [scenario(2, 2, 2), scenario(2, 3, 2)] {
        for v in enumerate_vertices(&sc, DEFAULT_VERTEX_CAP).map_err(|e| e.to_string())? {
            let real = qutrit_vertex_realization(&v).map_err(|e| e.to_string())?;
            let b = full_behavior(&real.system, 2).map_err(|e| e.to_string())?;
            let dev = b.max_abs_diff(&v.behavior()).map_err(|e| e.to_string())?;
            check(dev < 1e-12, || {
                format!("vertex {} deviates by {dev:e}", v.index())
            })?;
        }
    }
    Ok(())
}

fn mixture_round_trip() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for i in 0..100 {
        let b = random_member(&mut rng, Scenario::simplest());
        let d = decompose_behavior(&b, DEFAULT_VERTEX_CAP).map_err(|e| e.to_string())?;
        let sys = mixture_realization(&d).map_err(|e| e.to_string())?;
        let back = full_behavior(&sys, 2).map_err(|e| e.to_string())?;
        let dev = back.max_abs_diff(&b).map_err(|e| e.to_string())?;
        check(dev < 1e-9, || format!("sample {i} deviates by {dev:e}"))?;
    }
    Ok(())
}

fn c1_bound() -> Outcome {
    let f = builtin_functional("B1").unwrap();
    let best = optimize_qubit(&f, &OptimizerConfig::default()).map_err(|e| e.to_string())?;
    check((3.0 - 1e-3..=3.0 + 1e-9).contains(&best.value), || {
        format!("optimizer reached {}", best.value)
    })?;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..10_000 {
        let s = random_strategy(&mut rng);
        let v = strategy_value(&f, &s).map_err(|e| e.to_string())?;
        check(v <= 3.0 + 1e-9, || format!("random strategy reached {v}"))?;
    }
    Ok(())
}

fn c3_bound_check() -> Outcome {
    let c3 = c3_bound().map_err(|e| e.to_string())?;
    check((c3.value - 3.186).abs() <= 5e-3, || {
        format!("C3 = {}", c3.value)
    })?;
    check((c3.cos_gamma - 0.756).abs() <= 5e-3, || {
        format!("cos gamma = {}", c3.cos_gamma)
    })?;
    check(c3.certified, || "stationary root not certified".into())?;
    let f = builtin_functional("B3").unwrap();
    let best = optimize_qubit(&f, &OptimizerConfig::default()).map_err(|e| e.to_string())?;
    check((best.value - c3.value).abs() <= 1e-3, || {
        format!("optimizer reached {}, C3 = {}", best.value, c3.value)
    })
}

fn projective_b1() -> Outcome {
    let n = 2001;
    let (mut max, mut arg) = (f64::MIN, 0.0);
    for i in 0..n {
        let c = -1.0 + 2.0 * i as f64 / (n - 1) as f64;
        let v = b1_projective_profile(c).map_err(|e| e.to_string())?;
        if v > max {
            (max, arg) = (v, c);
        }
    }
    let expected = 1.5 + 2f64.sqrt();
    check((max - expected).abs() <= 1e-9, || format!("grid max {max}"))?;
    check(arg.abs() <= 1e-12, || {
        format!("maximum at cos gamma = {arg}")
    })
}

fn b4_caps() -> Outcome {
    let cap = 2.0 + 2f64.sqrt();
    let (np, nc) = (201, 2001);
    let mut max = f64::MIN;
    for i in 0..np {
        let p = i as f64 / (np - 1) as f64;
        for j in 0..nc {
            let c = -1.0 + 2.0 * j as f64 / (nc - 1) as f64;
            let v = b4_envelope(p, c).map_err(|e| e.to_string())?;
            check(v <= cap + 1e-9, || format!("B4({p}, {c}) = {v}"))?;
            max = max.max(v);
        }
    }
    check((max - 3.186).abs() <= 5e-3, || format!("grid max {max}"))?;
    for j in 0..nc {
        let c = -1.0 + 2.0 * j as f64 / (nc - 1) as f64;
        let (a, b) = (
            b4_envelope(1.0, c).map_err(|e| e.to_string())?,
            b3_profile(c).map_err(|e| e.to_string())?,
        );
        check((a - b).abs() <= 1e-12, || {
            format!("at p = 1, cos gamma = {c}: {a} vs {b}")
        })?;
    }
    Ok(())
}

fn b2_cap() -> Outcome {
    let f = builtin_functional("B2").unwrap();
    let canonical =
        full_behavior(&canonical_protocol("qubit-B2-3").unwrap(), 2).map_err(|e| e.to_string())?;
    let v = evaluate(&f, &canonical).map_err(|e| e.to_string())?;
    check((v - 3.0).abs() <= 1e-9, || {
        format!("canonical protocol gives {v}")
    })?;
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..10_000 {
        let s = random_strategy(&mut rng);
        let v = strategy_value(&f, &s).map_err(|e| e.to_string())?;
        check(v <= 3.5 + 1e-9, || format!("random strategy reached {v}"))?;
    }
    let best = optimize_qubit(&f, &OptimizerConfig::default()).map_err(|e| e.to_string())?;
    check((3.0 - 1e-3..=3.5 + 1e-9).contains(&best.value), || {
        format!("optimizer reached {}", best.value)
    })
}

fn epsilon_certification() -> Outcome {
    let sys = canonical_protocol("qutrit-e1").unwrap();
    let b = full_behavior(&sys, 2).map_err(|e| e.to_string())?;
    let report = certify(&b).map_err(|e| e.to_string())?;
    check(report.epsilon_lower_bound >= 1.0 / 12.0 - 1e-9, || {
        format!("epsilon lower bound {}", report.epsilon_lower_bound)
    })?;
    let b1 = evaluate(&builtin_functional("B1").unwrap(), &b).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for i in 0..50 {
        let p = random_projector(&mut rng, 3, 2);
        let eps = system_epsilon(&sys, &p, &EpsilonConfig::default())
            .map_err(|e| e.to_string())?
            .epsilon;
        check(b1 <= 3.0 + 12.0 * eps + 1e-6, || {
            format!("projector {i}: B1 = {b1} but epsilon = {eps}")
        })?;
    }
    Ok(())
}

fn arrow_of_time() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for i in 0..200 {
        let dim = rng.random_range(2..=4);
        let length = rng.random_range(1..=3);
        let (settings, outcomes) = (rng.random_range(2..=3), rng.random_range(2..=3));
        let sys = random_system(&mut rng, dim, settings, outcomes);
        let b = full_behavior(&sys, length).map_err(|e| e.to_string())?;
        let report = check_membership(&b);
        check(report.is_member(), || {
            format!("system {i}: {}", report.violations[0])
        })?;
        let chain = factorize(&b).map_err(|e| e.to_string())?;
        let back = compose_from_conditionals(&chain).map_err(|e| e.to_string())?;
        let dev = back.max_abs_diff(&b).map_err(|e| e.to_string())?;
        check(dev <= 1e-9, || {
            format!("system {i}: round trip deviates by {dev:e}")
        })?;
    }
    Ok(())
}

#[test]
fn acceptance_criteria() {
    let results = [
        run(1, "vertex counting", secs(1), vertex_counting),
        run(2, "relabeling classes", secs(1), classification),
        run(
            3,
            "vertex realization exactness",
            secs(10),
            vertex_exactness,
        ),
        run(4, "mixture round trip", secs(60), mixture_round_trip),
        run(5, "C1 bound", secs(60), c1_bound),
        run(6, "C3 bound", secs(60), c3_bound_check),
        run(7, "projective B1 maximum", None, projective_b1),
        run(8, "B4 caps", None, b4_caps),
        run(9, "B2 cap", None, b2_cap),
        run(
            10,
            "epsilon certification",
            secs(120),
            epsilon_certification,
        ),
        run(11, "arrow of time", None, arrow_of_time),
    ];
    let failed: Vec<usize> = (1..=results.len()).filter(|&i| !results[i - 1]).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
