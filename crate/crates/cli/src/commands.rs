use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Value};
use tempcorr::correlations::{
    check_membership, classify_vertices, count_vertices, decompose_behavior, digit_string,
    enumerate_vertices, named_vertex, Behavior, ConvexDecomposition, CorrelationError,
    DeterministicVertex, Scenario,
};
use tempcorr::qmath::random::seeded_system;
use tempcorr::qmath::SystemModel;
use tempcorr::realize::{
    canonical_protocol, full_behavior, mixture_realization, qutrit_vertex_realization,
    CANONICAL_PROTOCOLS,
};
use tempcorr::text::format_significant as fmt;
use tempcorr::witness::{
    b1_projective_profile, b3_profile, b4_envelope, builtin_functional, c1_bound, c3_bound,
    certify as certify_behavior, evaluate, optimize_qubit, BoundStatus, OptimizerConfig,
    QubitStrategy, WitnessFunctional,
};

use crate::error::CliError;
use crate::{
    BoundsArgs, CertifyArgs, DecomposeArgs, Format, OptimizeArgs, RandomSystemArgs, RealizeArgs,
    SimulateArgs, VerticesArgs, Which, WitnessArgs,
};

type Result<T> = std::result::Result<T, CliError>;

/// Maximum deviation tolerated when re-simulating a realization.
const ROUND_TRIP_TOL: f64 = 1e-9;

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path)
        .map_err(|e| CliError::Other(format!("cannot read {}: {e}", path.display())))
}

/// Writes `content` to `out`, or to stdout when no path is given.
fn emit(out: &Option<PathBuf>, content: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, content)
            .map_err(|e| CliError::Other(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{content}");
            if !content.ends_with('\n') {
                println!();
            }
            Ok(())
        }
    }
}

/// Summary lines go to stdout when the data goes to a file, and to stderr
/// otherwise so stdout stays machine-readable.
fn note(out: &Option<PathBuf>, line: &str) {
    if out.is_some() {
        println!("{line}");
    } else {
        eprintln!("{line}");
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serializable") + "\n"
}

fn scenario(l: usize, r: usize, s: usize) -> Result<Scenario> {
    Scenario::new(l, r, s).map_err(|e| CliError::Other(e.to_string()))
}

fn read_behavior(path: &Path) -> Result<Behavior> {
    Behavior::from_json(&read(path)?).map_err(|e| CliError::input(path, e))
}

fn read_system(path: &Path) -> Result<SystemModel> {
    SystemModel::from_json(&read(path)?).map_err(|e| CliError::input(path, e))
}

/// Fails with the membership exit code, listing violated constraints.
fn require_member(b: &Behavior) -> Result<()> {
    let report = check_membership(b);
    if report.is_member() {
        return Ok(());
    }
    let mut msg = format!(
        "behavior is not in the polytope: {} violated constraints",
        report.violations.len()
    );
    for v in report.violations.iter().take(20) {
        let _ = write!(msg, "\n  {v}");
    }
    if report.violations.len() > 20 {
        let _ = write!(msg, "\n  ...");
    }
    Err(CliError::Membership(msg))
}

fn resolve_functional(arg: &str) -> Result<WitnessFunctional> {
    if let Some(f) = builtin_functional(arg) {
        return Ok(f);
    }
    let path = Path::new(arg);
    if !path.exists() {
        return Err(CliError::Other(format!(
            "unknown functional {arg:?}: expected B1..B4 or a witness JSON file"
        )));
    }
    WitnessFunctional::from_json(&read(path)?).map_err(|e| CliError::input(path, e))
}

/// The vertex count as a JSON number when it fits, else a decimal string.
fn count_value(count: &str) -> Value {
    match count.parse::<u64>() {
        Ok(n) => json!(n),
        Err(_) => json!(count),
    }
}

pub fn vertices(a: &VerticesArgs) -> Result<()> {
    let sc = a.scenario;
    let s = scenario(sc.length, sc.outcomes, sc.settings)?;
    let count = count_vertices(&s).to_string();
    note(&a.out, &format!("vertex count: {count}"));
    let vs = match enumerate_vertices(&s, a.cap) {
        Ok(vs) => vs,
        Err(CorrelationError::TooManyVertices { .. }) => {
            return Err(CliError::Cap(format!(
                "{count} vertices exceed the enumeration cap of {}",
                a.cap
            )))
        }
        Err(e) => return Err(e.into()),
    };
    let orbits = if a.classify {
        let o = classify_vertices(&s, a.group.into(), a.cap)?;
        note(&a.out, &format!("classes: {}", o.len()));
        Some(o)
    } else {
        None
    };
    let mut class_of = vec![0usize; vs.len()];
    if let Some(orbits) = &orbits {
        for (k, o) in orbits.iter().enumerate() {
            for &m in &o.members {
                class_of[m] = k;
            }
        }
    }
    let content = match a.format {
        Format::Json => {
            let vertices: Vec<Value> = vs
                .iter()
                .enumerate()
                .map(|(i, v)| json!({"index": i, "assignment": v.to_doc().assignment}))
                .collect();
            let mut doc = json!({
                "L": s.length(),
                "R": s.outcomes(),
                "S": s.settings(),
                "count": count_value(&count),
                "vertices": vertices,
            });
            if let Some(orbits) = &orbits {
                doc["classes"] = orbits
                    .iter()
                    .map(|o| {
                        json!({
                            "representative": o.representative,
                            "size": o.members.len(),
                            "members": o.members,
                        })
                    })
                    .collect();
            }
            to_json(&doc)
        }
        Format::Text | Format::Csv => {
            let sep = if a.format == Format::Csv { "," } else { "\t" };
            let mut out = String::new();
            let _ = writeln!(out, "index{sep}class{sep}assignment");
            for (i, v) in vs.iter().enumerate() {
                let class = if orbits.is_some() {
                    class_of[i].to_string()
                } else {
                    String::new()
                };
                let _ = writeln!(out, "{i}{sep}{class}{sep}{}", digit_string(v.assignment()));
            }
            out
        }
    };
    emit(&a.out, &content)
}

fn load_simulation_system(a: &SimulateArgs) -> Result<SystemModel> {
    if let Some(path) = &a.system {
        return read_system(path);
    }
    if let Some(name) = &a.protocol {
        return canonical_protocol(name).ok_or_else(|| {
            CliError::Other(format!(
                "unknown protocol {name:?}; known: {}",
                CANONICAL_PROTOCOLS.join(", ")
            ))
        });
    }
    let path = a.strategy.as_ref().expect("clap requires one source");
    let text = read(path)?;
    let mut value: Value = serde_json::from_str(&text).map_err(|e| CliError::input(path, e))?;
    // Accept both a bare strategy and the output of `optimize`.
    if let Some(inner) = value.get_mut("strategy") {
        value = inner.take();
    }
    let strategy: QubitStrategy =
        serde_json::from_value(value).map_err(|e| CliError::input(path, e))?;
    strategy
        .to_system()
        .map_err(|e| CliError::input(path, CliError::Other(e.to_string())))
}

pub fn simulate(a: &SimulateArgs) -> Result<()> {
    let sys = load_simulation_system(a)?;
    let b = full_behavior(&sys, a.length)?;
    let report = check_membership(&b);
    if report.is_member() {
        note(&a.out, "arrow-of-time constraints: satisfied");
    } else {
        note(
            &a.out,
            &format!(
                "arrow-of-time constraints: {} violations",
                report.violations.len()
            ),
        );
    }
    emit(&a.out, &(b.to_json() + "\n"))
}

pub fn witness(a: &WitnessArgs) -> Result<()> {
    let b = read_behavior(&a.behavior)?;
    require_member(&b)?;
    let f = resolve_functional(&a.functional)?;
    let builtin = builtin_functional(f.name()).is_some_and(|g| g == f);
    let report = if builtin {
        let r = certify_behavior(&b)?;
        r.witnesses.into_iter().find(|w| w.name == f.name())
    } else {
        None
    };
    let out = match (a.format, &report) {
        (Format::Json, Some(r)) => to_json(r),
        (Format::Json, None) => to_json(&json!({"name": f.name(), "value": evaluate(&f, &b)?})),
        (Format::Csv, _) => {
            let mut s = String::from("witness,value,bound,verdict,epsilon_lower_bound\n");
            match &report {
                Some(r) => {
                    let _ = writeln!(
                        s,
                        "{},{},{},{},{}",
                        r.name,
                        fmt(r.value),
                        fmt(r.bound),
                        r.verdict.label(),
                        fmt(r.epsilon_lower_bound)
                    );
                }
                None => {
                    let _ = writeln!(s, "{},{},,,", f.name(), fmt(evaluate(&f, &b)?));
                }
            }
            s
        }
        (Format::Text, Some(r)) => {
            let kind = match r.bound_status {
                BoundStatus::Exact => "qubit maximum",
                BoundStatus::Cap => "proven qubit cap",
            };
            let mut s = String::new();
            let _ = writeln!(s, "witness: {}", r.name);
            let _ = writeln!(s, "value: {}", fmt(r.value));
            let _ = writeln!(s, "bound: {} ({kind})", fmt(r.bound));
            if let Some(c) = r.conjectured_bound {
                let _ = writeln!(s, "numerically supported qubit maximum: {}", fmt(c));
            }
            let _ = writeln!(s, "verdict: {}", r.verdict.label());
            let _ = writeln!(s, "epsilon lower bound: {}", fmt(r.epsilon_lower_bound));
            let _ = writeln!(s, "epsilon cap: {}", fmt(r.epsilon_cap));
            s
        }
        (Format::Text, None) => {
            format!("witness: {}\nvalue: {}\n", f.name(), fmt(evaluate(&f, &b)?))
        }
    };
    emit(&None, &out)
}

pub fn certify(a: &CertifyArgs) -> Result<()> {
    let b = read_behavior(&a.behavior)?;
    require_member(&b)?;
    let r = certify_behavior(&b)?;
    let out = match a.format {
        Format::Json => r.to_json() + "\n",
        Format::Text => r.to_text(),
        Format::Csv => {
            let mut s = String::from(
                "witness,value,bound,bound_kind,verdict,epsilon_lower_bound,epsilon_cap\n",
            );
            for w in &r.witnesses {
                let kind = match w.bound_status {
                    BoundStatus::Exact => "exact",
                    BoundStatus::Cap => "cap",
                };
                let _ = writeln!(
                    s,
                    "{},{},{},{kind},{},{},{}",
                    w.name,
                    fmt(w.value),
                    fmt(w.bound),
                    w.verdict.label(),
                    fmt(w.epsilon_lower_bound),
                    fmt(w.epsilon_cap)
                );
            }
            s
        }
    };
    emit(&a.out, &out)
}

fn grid(n: usize, lo: f64, hi: f64) -> impl Iterator<Item = f64> {
    (0..n).map(move |i| {
        if i + 1 == n {
            hi
        } else {
            lo + (hi - lo) * i as f64 / (n - 1) as f64
        }
    })
}

pub fn bounds(a: &BoundsArgs) -> Result<()> {
    match a.which {
        Which::C1 => {
            let (c1, projective) = c1_bound();
            let out = match a.format {
                Format::Json => to_json(&json!({"C1": c1, "projective_max": projective})),
                Format::Csv => format!(
                    "name,value\nC1,{}\nprojective_max,{}\n",
                    fmt(c1),
                    fmt(projective)
                ),
                Format::Text => format!(
                    "C1 = {}\nprojective maximum = {}\n",
                    fmt(c1),
                    fmt(projective)
                ),
            };
            emit(&a.out, &out)
        }
        Which::C3 => {
            let c3 = c3_bound()?;
            let out = match a.format {
                Format::Json => to_json(&c3),
                Format::Csv => format!(
                    "name,value\nC3,{}\ncos_gamma,{}\n",
                    fmt(c3.value),
                    fmt(c3.cos_gamma)
                ),
                Format::Text => {
                    let roots: Vec<String> = c3.roots.iter().map(|&r| fmt(r)).collect();
                    format!(
                        "C3 = {}\ncos_gamma = {}\ncertified: {}\npolynomial roots in [-1, 1]: {}\n",
                        fmt(c3.value),
                        fmt(c3.cos_gamma),
                        c3.certified,
                        roots.join(", ")
                    )
                }
            };
            emit(&a.out, &out)
        }
        Which::B1Profile | Which::B3Profile => {
            if a.grid < 2 {
                return Err(CliError::Other("--grid must be at least 2".into()));
            }
            let (name, f): (&str, fn(f64) -> _) = if a.which == Which::B1Profile {
                ("B1", b1_projective_profile)
            } else {
                ("B3", b3_profile)
            };
            let mut out = format!("cos_gamma,{name}\n");
            let (mut best, mut arg) = (f64::MIN, 0.0);
            for c in grid(a.grid, -1.0, 1.0) {
                let v = f(c)?;
                if v > best {
                    best = v;
                    arg = c;
                }
                let _ = writeln!(out, "{},{}", fmt(c), fmt(v));
            }
            note(
                &a.out,
                &format!("max {name} = {} at cos_gamma = {}", fmt(best), fmt(arg)),
            );
            emit(&a.out, &out)
        }
        Which::B4Envelope => {
            if a.grid < 2 {
                return Err(CliError::Other("--grid must be at least 2".into()));
            }
            let mut out = String::from("p,cos_gamma,B4\n");
            let (mut best, mut arg) = (f64::MIN, (0.0, 0.0));
            for p in grid(a.grid, 0.0, 1.0) {
                for c in grid(a.grid, -1.0, 1.0) {
                    let v = b4_envelope(p, c)?;
                    if v > best {
                        best = v;
                        arg = (p, c);
                    }
                    let _ = writeln!(out, "{},{},{}", fmt(p), fmt(c), fmt(v));
                }
            }
            note(
                &a.out,
                &format!(
                    "max B4 = {} at p = {}, cos_gamma = {}",
                    fmt(best),
                    fmt(arg.0),
                    fmt(arg.1)
                ),
            );
            emit(&a.out, &out)
        }
    }
}

pub fn optimize(a: &OptimizeArgs) -> Result<()> {
    let f = resolve_functional(&a.functional)?;
    let cfg = OptimizerConfig {
        restarts: a.restarts,
        seed: a.seed,
        iterations: a.iterations,
        ..Default::default()
    };
    let r = optimize_qubit(&f, &cfg)?;
    note(
        &a.out,
        &format!(
            "{}: best qubit value {} (restart {})",
            f.name(),
            fmt(r.value),
            r.restart
        ),
    );
    let doc = json!({
        "functional": f.name(),
        "seed": cfg.seed,
        "restarts": cfg.restarts,
        "iterations": cfg.iterations,
        "value": r.value,
        "restart": r.restart,
        "strategy": r.strategy,
    });
    emit(&a.out, &to_json(&doc))
}

pub fn decompose(a: &DecomposeArgs) -> Result<()> {
    let b = read_behavior(&a.behavior)?;
    require_member(&b)?;
    let d = decompose_behavior(&b, a.cap)?;
    let dev = d.reconstruct().max_abs_diff(&b)?;
    note(
        &a.out,
        &format!(
            "components: {}; reconstruction max deviation {dev:e}",
            d.components().len()
        ),
    );
    emit(&a.out, &(d.to_json() + "\n"))
}

fn parse_vertex(arg: &str, s: Scenario) -> Result<DeterministicVertex> {
    if let Some(v) = named_vertex(arg) {
        if s != Scenario::simplest() {
            return Err(CliError::Other(format!(
                "{arg} is defined for L = 2, R = 2, S = 2"
            )));
        }
        return Ok(v);
    }
    let index: usize = arg.parse().map_err(|_| {
        CliError::Other(format!("--vertex expects e1..e4 or an index, got {arg:?}"))
    })?;
    Ok(DeterministicVertex::from_index(s, index)?)
}

pub fn realize(a: &RealizeArgs) -> Result<()> {
    let (system, target) = match (&a.vertex, &a.decomposition) {
        (Some(arg), _) => {
            let sc = a.scenario;
            if sc.length != 2 {
                return Err(CliError::Scope(format!(
                    "vertex realizations are implemented for L = 2 only (got L = {})",
                    sc.length
                )));
            }
            let v = parse_vertex(arg, scenario(sc.length, sc.outcomes, sc.settings)?)?;
            (qutrit_vertex_realization(&v)?.system, v.behavior())
        }
        (None, Some(path)) => {
            let d = ConvexDecomposition::from_json(&read(path)?)
                .map_err(|e| CliError::input(path, e))?;
            (mixture_realization(&d)?, d.reconstruct())
        }
        (None, None) => unreachable!("clap requires --vertex or --decomposition"),
    };
    let dev = full_behavior(&system, 2)?.max_abs_diff(&target)?;
    if dev >= ROUND_TRIP_TOL {
        return Err(CliError::Other(format!(
            "realization does not reproduce the target: max deviation {dev:e}"
        )));
    }
    note(
        &a.out,
        &format!(
            "dimension {}; round trip max deviation {dev:e} < {ROUND_TRIP_TOL:e}",
            system.dim()
        ),
    );
    emit(&a.out, &(system.to_json() + "\n"))
}

pub fn random_system(a: &RandomSystemArgs) -> Result<()> {
    if a.dim == 0 || a.settings == 0 || a.outcomes == 0 {
        return Err(CliError::Other(
            "--dim, --settings and --outcomes must be positive".into(),
        ));
    }
    let sys = seeded_system(a.seed, a.dim, a.settings, a.outcomes);
    emit(&a.out, &(sys.to_json() + "\n"))
}
