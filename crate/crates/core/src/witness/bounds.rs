//! Closed-form qubit values of the witnesses along their optimal
//! one- and two-parameter families, and the constants derived from them.

use serde::{Deserialize, Serialize};

use super::WitnessError;

/// Qubit bound of `B1`.
pub const C1: f64 = 3.0;
/// Largest `B1` reachable with projective effects only: `3/2 + sqrt 2`.
pub const B1_PROJECTIVE_MAX: f64 = 1.5 + std::f64::consts::SQRT_2;
/// Proven qubit cap on `B2`.
pub const B2_CAP: f64 = 3.5;
/// Proven qubit cap on `B4`: `2 + sqrt 2`.
pub const B4_CAP: f64 = 2.0 + std::f64::consts::SQRT_2;
/// Conjectured qubit maximum of `B2`, supported only numerically.
pub const B2_CONJECTURED: f64 = 3.0;
/// Reference value of the qubit bound of `B3`, from [`c3_bound`].
pub const C3_REFERENCE: f64 = 3.186227883702517;
/// The maximizing `cos(gamma)` for `B3`.
pub const C3_COS_GAMMA: f64 = 0.7562852034957998;
/// Conjectured qubit maximum of `B4` (equal to `C3`), supported only
/// numerically.
pub const B4_CONJECTURED: f64 = C3_REFERENCE;

fn check_cos(name: &'static str, c: f64) -> Result<f64, WitnessError> {
    if !c.is_finite() || c.abs() > 1.0 + 1e-12 {
        return Err(WitnessError::DomainError { name, value: c });
    }
    Ok(c.clamp(-1.0, 1.0))
}

/// `B1` for projective effects at angle `gamma`:
/// `(X/4) (2 + sqrt(2 + 2 cos))` with `X = 2 + sqrt(2 - 2 cos)`.
pub fn b1_projective_profile(cos_gamma: f64) -> Result<f64, WitnessError> {
    let c = check_cos("cos_gamma", cos_gamma)?;
    let x = 2.0 + (2.0 - 2.0 * c).sqrt();
    Ok(x / 4.0 * (2.0 + (2.0 + 2.0 * c).sqrt()))
}

/// `B3` for projective effects at angle `gamma`, with the optimal states
/// substituted.
pub fn b3_profile(cos_gamma: f64) -> Result<f64, WitnessError> {
    let c = check_cos("cos_gamma", cos_gamma)?;
    Ok(b3_raw(c))
}

fn b3_raw(c: f64) -> f64 {
    let x0 = 2.0 + (2.0 + 2.0 * c).sqrt();
    let x1 = 2.0 + (2.0 - 2.0 * c).sqrt();
    0.25 * (x0 + x1 + (x0 * x0 + x1 * x1 + 2.0 * x0 * x1 * c).sqrt())
}

/// `d b3_profile / d cos(gamma)` on the open interval `(-1, 1)`.
pub fn b3_profile_slope(cos_gamma: f64) -> Result<f64, WitnessError> {
    let c = cos_gamma;
    if !c.is_finite() || c.abs() >= 1.0 {
        return Err(WitnessError::DomainError {
            name: "cos_gamma",
            value: c,
        });
    }
    let (sp, sm) = ((2.0 + 2.0 * c).sqrt(), (2.0 - 2.0 * c).sqrt());
    let (x0, x1) = (2.0 + sp, 2.0 + sm);
    let (dx0, dx1) = (1.0 / sp, -1.0 / sm);
    let q = x0 * x0 + x1 * x1 + 2.0 * x0 * x1 * c;
    let dq = 2.0 * x0 * dx0 + 2.0 * x1 * dx1 + 2.0 * (dx0 * x1 + x0 * dx1) * c + 2.0 * x0 * x1;
    Ok(0.25 * (dx0 + dx1 + dq / (2.0 * q.sqrt())))
}

/// Two-parameter envelope of `B4`; `p` is the weight of the non-projective
/// effect. At `p = 1` this is [`b3_profile`].
pub fn b4_envelope(p: f64, cos_gamma: f64) -> Result<f64, WitnessError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(WitnessError::DomainError {
            name: "p",
            value: p,
        });
    }
    let c = check_cos("cos_gamma", cos_gamma)?;
    let x0 = 1.0 + p + (p * p + 1.0 + 2.0 * p * c).sqrt();
    let x1 = 3.0 - p + (p * p + 1.0 - 2.0 * p * c).sqrt();
    let root = (p * p * x0 * x0 + x1 * x1 + 2.0 * p * x0 * x1 * c)
        .max(0.0)
        .sqrt();
    Ok(0.25 * ((2.0 - p) * x0 + x1 + root))
}

/// `(k, m)` such that each nesting level maps `t` to `k - m x t`, innermost
/// first. The innermost value is `-3 + 2 (1 + x) x`.
const NESTING: [(i64, i64); 8] = [
    (19, 4),
    (481, 8),
    (-762, 1),
    (-24, 1),
    (380, 1),
    (-531, 4),
    (42, 1),
    (1, 1),
];

/// Stationarity condition for [`b3_profile`] after squaring, in nested
/// form.
pub fn c3_polynomial_nested(x: f64) -> f64 {
    let mut t = -3.0 + 2.0 * (1.0 + x) * x;
    for &(k, m) in &NESTING {
        t = k as f64 - m as f64 * x * t;
    }
    t
}

/// Exact integer coefficients of [`c3_polynomial_nested`], constant term
/// first.
pub fn c3_polynomial_coefficients() -> Vec<i64> {
    let mut t: Vec<i64> = vec![-3, 2, 2];
    for &(k, m) in &NESTING {
        let mut next = vec![0i64; t.len() + 1];
        next[0] = k;
        for (i, &c) in t.iter().enumerate() {
            next[i + 1] -= m * c;
        }
        t = next;
    }
    t
}

pub fn eval_polynomial(coeffs: &[i64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c as f64)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct C3Bound {
    pub value: f64,
    pub cos_gamma: f64,
    /// Every check passed: a unique stationary root, nested and expanded
    /// forms agree there, and both endpoints give smaller values.
    pub certified: bool,
    /// All real roots of the polynomial in `[-1, 1]`.
    pub roots: Vec<f64>,
}

const BRACKETS: usize = 10_000;
const ROOT_TOL: f64 = 1e-12;
const SLOPE_TOL: f64 = 1e-8;

/// The qubit bound of `B3`: the maximum of [`b3_profile`], located among the
/// real roots of the squared stationarity polynomial. Roots introduced by
/// squaring are discarded because the profile's slope does not vanish
/// there.
pub fn c3_bound() -> Result<C3Bound, WitnessError> {
    let coeffs = c3_polynomial_coefficients();
    let f = |x: f64| eval_polynomial(&coeffs, x);
    let mut roots = Vec::new();
    let h = 2.0 / BRACKETS as f64;
    for i in 0..BRACKETS {
        let (mut lo, mut hi) = (-1.0 + i as f64 * h, -1.0 + (i + 1) as f64 * h);
        let (mut flo, fhi) = (f(lo), f(hi));
        if flo == 0.0 {
            roots.push(lo);
            continue;
        }
        if flo * fhi > 0.0 {
            continue;
        }
        if fhi == 0.0 {
            // Picked up as the left end of the next bracket.
            if i + 1 == BRACKETS {
                roots.push(hi);
            }
            continue;
        }
        while hi - lo > ROOT_TOL {
            let mid = 0.5 * (lo + hi);
            let fm = f(mid);
            if fm == 0.0 {
                lo = mid;
                hi = mid;
                break;
            }
            if flo * fm < 0.0 {
                hi = mid;
            } else {
                lo = mid;
                flo = fm;
            }
        }
        roots.push(0.5 * (lo + hi));
    }

    let stationary: Vec<f64> = roots
        .iter()
        .copied()
        .filter(|&x| x.abs() < 1.0 && b3_profile_slope(x).is_ok_and(|s| s.abs() <= SLOPE_TOL))
        .collect();
    let &best = stationary
        .iter()
        .max_by(|a, b| b3_raw(**a).total_cmp(&b3_raw(**b)))
        .ok_or(WitnessError::NoValidRoot)?;
    let value = b3_raw(best);
    let agree = (c3_polynomial_nested(best) - f(best)).abs() <= 1e-10;
    let ends = b3_raw(-1.0) < value && b3_raw(1.0) < value;
    Ok(C3Bound {
        value,
        cos_gamma: best,
        certified: stationary.len() == 1 && agree && ends,
        roots,
    })
}

/// `max(0, (b - c) / 12)`
pub fn epsilon_lower_bound(b: f64, c: f64) -> f64 {
    ((b - c) / 12.0).max(0.0)
}

/// Largest lower bound certifiable with a witness whose qubit bound is `c`.
pub fn epsilon_cap(c: f64) -> f64 {
    (4.0 - c) / 12.0
}

/// The analytic `C1` together with the projective-only maximum.
pub fn c1_bound() -> (f64, f64) {
    (C1, B1_PROJECTIVE_MAX)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expanded_coefficients() {
        // High degree first.
        let mut c = c3_polynomial_coefficients();
        c.reverse();
        assert_eq!(
            c,
            vec![256, 256, -384, -608, 1924, 3048, -96, -1520, -531, -42, 1]
        );
    }

    #[test]
    fn nested_and_expanded_agree() {
        let coeffs = c3_polynomial_coefficients();
        for i in 0..=200 {
            let x = -1.0 + i as f64 / 100.0;
            let a = c3_polynomial_nested(x);
            let b = eval_polynomial(&coeffs, x);
            assert!((a - b).abs() <= 1e-9 * (1.0 + a.abs()), "{x}: {a} vs {b}");
        }
    }

    #[test]
    fn c3_root() {
        let c3 = c3_bound().unwrap();
        assert!(c3.certified);
        assert!((c3.cos_gamma - C3_COS_GAMMA).abs() < 1e-10);
        assert!((c3.value - C3_REFERENCE).abs() < 1e-12);
        assert!((c3.value - 3.186).abs() < 5e-3);
        assert!((c3.cos_gamma - 0.756).abs() < 5e-3);
        assert!(c3_polynomial_nested(c3.cos_gamma).abs() < 1e-8);
        assert!(b3_profile_slope(c3.cos_gamma).unwrap().abs() < 1e-8);
        // Six real roots, five of them from squaring.
        let expected = [-0.93819, -0.76363, -0.29406, -0.16016, 0.018998, 0.756285];
        assert_eq!(c3.roots.len(), expected.len());
        for (r, e) in c3.roots.iter().zip(expected) {
            assert!((r - e).abs() < 1e-4, "{r} vs {e}");
        }
    }

    #[test]
    fn b1_profile_values() {
        assert!((b1_projective_profile(0.0).unwrap() - (1.5 + 2f64.sqrt())).abs() < 1e-15);
        assert!((b1_projective_profile(1.0).unwrap() - 2.0).abs() < 1e-15);
        assert!((b1_projective_profile(-1.0).unwrap() - 2.0).abs() < 1e-15);
        let n = 100_000;
        let (mut best, mut arg) = (f64::MIN, 0.0);
        for i in 0..=n {
            let c = -1.0 + 2.0 * i as f64 / n as f64;
            let v = b1_projective_profile(c).unwrap();
            if v > best {
                best = v;
                arg = c;
            }
        }
        assert!((best - B1_PROJECTIVE_MAX).abs() < 1e-12);
        assert!(arg.abs() < 1e-9);
        assert!(best < C1);
    }

    #[test]
    fn b3_profile_values() {
        assert!((b3_profile(1.0).unwrap() - 3.0).abs() < 1e-15);
        assert!((b3_profile(-1.0).unwrap() - 2.0).abs() < 1e-15);
        assert!((b3_profile(0.756).unwrap() - 3.186).abs() < 1e-3);
        assert!(matches!(
            b3_profile(1.5),
            Err(WitnessError::DomainError { .. })
        ));
        assert!(matches!(
            b3_profile(f64::NAN),
            Err(WitnessError::DomainError { .. })
        ));
    }

    #[test]
    fn slope_matches_finite_differences() {
        for i in 1..100 {
            let c = -0.99 + 1.98 * i as f64 / 100.0;
            let h = 1e-6;
            let fd = (b3_raw(c + h) - b3_raw(c - h)) / (2.0 * h);
            assert!((fd - b3_profile_slope(c).unwrap()).abs() < 1e-6);
        }
    }

    #[test]
    fn b4_envelope_properties() {
        for i in 0..=1000 {
            let c = -1.0 + 2.0 * i as f64 / 1000.0;
            let a = b4_envelope(1.0, c).unwrap();
            let b = b3_profile(c).unwrap();
            assert!((a - b).abs() <= 1e-12, "{c}");
        }
        let mut best = f64::MIN;
        for i in 0..=400 {
            for j in 0..=400 {
                let p = i as f64 / 400.0;
                let c = -1.0 + 2.0 * j as f64 / 400.0;
                let v = b4_envelope(p, c).unwrap();
                assert!(v <= B4_CAP + 1e-12);
                best = best.max(v);
            }
        }
        assert!((best - 3.186).abs() < 5e-3);
        assert!(best <= C3_REFERENCE + 1e-9);
        assert!(matches!(
            b4_envelope(1.2, 0.0),
            Err(WitnessError::DomainError { name: "p", .. })
        ));
    }

    #[test]
    fn epsilon_bounds() {
        assert!((epsilon_lower_bound(4.0, 3.0) - 1.0 / 12.0).abs() < 1e-15);
        assert_eq!(epsilon_lower_bound(2.5, 3.0), 0.0);
        assert!((epsilon_lower_bound(3.5, C3_REFERENCE) - 0.026147676358124).abs() < 1e-12);
        assert!((epsilon_cap(C3_REFERENCE) - (4.0 - C3_REFERENCE) / 12.0).abs() < 1e-15);
        assert_eq!(c1_bound(), (3.0, B1_PROJECTIVE_MAX));
    }
}
