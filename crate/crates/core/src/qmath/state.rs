use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::eigen::eigenvalues;
use super::{ComplexMatrix, QmathError};
use crate::tol;

/// A validated quantum state: Hermitian, unit trace, positive semidefinite.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix(ComplexMatrix);

impl DensityMatrix {
    pub fn new(m: ComplexMatrix) -> Result<Self, QmathError> {
        let defect = m.hermiticity_defect();
        if defect > tol::HERMITIAN {
            return Err(QmathError::NotHermitian {
                deviation: defect,
                tolerance: tol::HERMITIAN,
            });
        }
        let tr = m.trace();
        if (tr.re - 1.0).abs() > tol::TRACE || tr.im.abs() > tol::TRACE {
            return Err(QmathError::TraceNotOne { trace: tr.re });
        }
        let min = eigenvalues(&m)[0];
        if min < -tol::PSD {
            return Err(QmathError::NegativeEigenvalue {
                eigenvalue: min,
                tolerance: tol::PSD,
            });
        }
        Ok(Self(m))
    }

    /// The pure state `|i><i|`.
    pub fn basis(dim: usize, i: usize) -> Self {
        Self(ComplexMatrix::ket_bra(dim, i, i))
    }

    /// `|psi><psi|` for a (not necessarily normalized) vector.
    pub fn pure(psi: &[Complex64]) -> Result<Self, QmathError> {
        let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm <= tol::ZERO_PROB {
            return Err(QmathError::ZeroVector);
        }
        let unit: Vec<Complex64> = psi.iter().map(|z| z / norm).collect();
        Ok(Self(ComplexMatrix::outer(&unit, &unit)))
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self(ComplexMatrix::identity(dim).scale(1.0 / dim as f64))
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn purity(&self) -> f64 {
        (&self.0 * &self.0).trace().re
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }
}

/// Bloch vector of a qubit state, `rho = (1 + alpha . sigma) / 2`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 3]", into = "[f64; 3]")]
pub struct BlochVector([f64; 3]);

impl BlochVector {
    pub fn new(components: [f64; 3]) -> Result<Self, QmathError> {
        if components.iter().any(|c| !c.is_finite()) {
            return Err(QmathError::NonFinite { row: 0, col: 0 });
        }
        let norm = norm3(&components);
        if norm > 1.0 + tol::PSD {
            return Err(QmathError::NormTooLarge { norm });
        }
        Ok(Self(components))
    }

    /// Normalizes `v`; `None` for the zero vector.
    pub fn unit(v: [f64; 3]) -> Option<Self> {
        let n = norm3(&v);
        (n > 0.0 && n.is_finite()).then(|| Self([v[0] / n, v[1] / n, v[2] / n]))
    }

    pub fn z() -> Self {
        Self([0.0, 0.0, 1.0])
    }

    pub fn from_angles(theta: f64, phi: f64) -> Self {
        Self([
            theta.sin() * phi.cos(),
            theta.sin() * phi.sin(),
            theta.cos(),
        ])
    }

    pub fn components(&self) -> [f64; 3] {
        self.0
    }

    pub fn norm(&self) -> f64 {
        norm3(&self.0)
    }

    pub fn dot(&self, other: &BlochVector) -> f64 {
        dot3(&self.0, &other.0)
    }

    pub fn dot_raw(&self, v: &[f64; 3]) -> f64 {
        dot3(&self.0, v)
    }

    pub fn neg(&self) -> Self {
        Self([-self.0[0], -self.0[1], -self.0[2]])
    }

    /// `alpha . sigma`
    pub fn sigma(&self) -> ComplexMatrix {
        let [x, y, z] = self.0;
        let px = ComplexMatrix::pauli_x().scale(x);
        let py = ComplexMatrix::pauli_y().scale(y);
        let pz = ComplexMatrix::pauli_z().scale(z);
        &(&px + &py) + &pz
    }
}

impl TryFrom<[f64; 3]> for BlochVector {
    type Error = QmathError;

    fn try_from(v: [f64; 3]) -> Result<Self, QmathError> {
        Self::new(v)
    }
}

impl From<BlochVector> for [f64; 3] {
    fn from(b: BlochVector) -> [f64; 3] {
        b.0
    }
}

pub(crate) fn norm3(v: &[f64; 3]) -> f64 {
    dot3(v, v).sqrt()
}

pub(crate) fn dot3(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn bloch_to_density(alpha: &BlochVector) -> DensityMatrix {
    let m = &ComplexMatrix::identity(2) + &alpha.sigma();
    DensityMatrix(m.scale(0.5))
}

pub fn density_to_bloch(rho: &DensityMatrix) -> Result<BlochVector, QmathError> {
    if rho.dim() != 2 {
        return Err(QmathError::WrongDimension {
            expected: 2,
            found: rho.dim(),
        });
    }
    let m = rho.matrix();
    // tr(rho sigma_i)
    let x = 2.0 * m[(0, 1)].re;
    let y = -2.0 * m[(0, 1)].im;
    let z = (m[(0, 0)] - m[(1, 1)]).re;
    BlochVector::new([x, y, z])
}

/// A validated effect: Hermitian with spectrum in `[0, 1]` up to tolerance.
#[derive(Clone, Debug, PartialEq)]
pub struct Effect(ComplexMatrix);

impl Effect {
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    /// `1 - E`
    pub fn complement(&self) -> Effect {
        Effect(&ComplexMatrix::identity(self.dim()) - &self.0)
    }

    /// Born-rule probability `tr(E rho)`.
    pub fn probability(&self, rho: &DensityMatrix) -> f64 {
        (&self.0 * rho.matrix()).trace().re
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        eigenvalues(&self.0)
    }
}

pub fn validate_effect(m: ComplexMatrix) -> Result<Effect, QmathError> {
    let defect = m.hermiticity_defect();
    if defect > tol::HERMITIAN {
        return Err(QmathError::NotHermitian {
            deviation: defect,
            tolerance: tol::HERMITIAN,
        });
    }
    let ev = eigenvalues(&m);
    let (min, max) = (ev[0], ev[ev.len() - 1]);
    if min < -tol::PSD || max > 1.0 + tol::PSD {
        return Err(QmathError::SpectrumOutOfRange {
            min,
            max,
            tolerance: tol::PSD,
        });
    }
    Ok(Effect(m))
}

/// The qubit effect `a (1 + b axis . sigma)` with `b in [0,1]`,
/// `a in [0, 1/(1+b)]` and a unit axis.
pub fn effect_from_params(a: f64, b: f64, axis: &BlochVector) -> Result<Effect, QmathError> {
    if !(0.0..=1.0).contains(&b) {
        return Err(QmathError::ParamOutOfRange {
            name: "b",
            value: b,
            low: 0.0,
            high: 1.0,
        });
    }
    let a_max = 1.0 / (1.0 + b);
    if !(a >= 0.0 && a <= a_max + tol::PSD) {
        return Err(QmathError::ParamOutOfRange {
            name: "a",
            value: a,
            low: 0.0,
            high: a_max,
        });
    }
    let n = axis.norm();
    if (n - 1.0).abs() > tol::PSD {
        return Err(QmathError::ParamOutOfRange {
            name: "|axis|",
            value: n,
            low: 1.0,
            high: 1.0,
        });
    }
    let m = &ComplexMatrix::identity(2) + &axis.sigma().scale(b);
    validate_effect(m.scale(a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn identity_is_an_effect() {
        assert!(validate_effect(ComplexMatrix::identity(2)).is_ok());
    }

    #[test]
    fn eigenvalue_above_one_rejected() {
        let err = validate_effect(ComplexMatrix::diagonal(&[1.5, 0.0])).unwrap_err();
        match err {
            QmathError::SpectrumOutOfRange { max, .. } => assert!((max - 1.5).abs() < 1e-15),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn non_hermitian_rejected() {
        let m = ComplexMatrix::ket_bra(2, 0, 1);
        assert!(matches!(
            validate_effect(m),
            Err(QmathError::NotHermitian { .. })
        ));
    }

    #[test]
    fn biased_sigma_z_effect() {
        let m = &ComplexMatrix::identity(2) + &ComplexMatrix::pauli_z().scale(0.9);
        let e = validate_effect(m.scale(0.5)).unwrap();
        let ev = e.eigenvalues();
        assert!((ev[0] - 0.05).abs() < 1e-15 && (ev[1] - 0.95).abs() < 1e-15);
    }

    #[test]
    fn bloch_basics() {
        let up = bloch_to_density(&BlochVector::z());
        assert!(up.matrix().max_abs_diff(&ComplexMatrix::ket_bra(2, 0, 0)) < 1e-15);
        let mixed = bloch_to_density(&BlochVector::new([0.0; 3]).unwrap());
        assert!(
            mixed
                .matrix()
                .max_abs_diff(&ComplexMatrix::identity(2).scale(0.5))
                < 1e-15
        );
        assert!(matches!(
            BlochVector::new([1.0, 1.0, 0.0]),
            Err(QmathError::NormTooLarge { .. })
        ));
        assert!(matches!(
            density_to_bloch(&DensityMatrix::basis(3, 0)),
            Err(QmathError::WrongDimension { .. })
        ));
    }

    #[test]
    fn projector_from_params() {
        let e = effect_from_params(0.5, 1.0, &BlochVector::z()).unwrap();
        assert!(e.matrix().max_abs_diff(&ComplexMatrix::ket_bra(2, 0, 0)) < 1e-15);
        let zero = effect_from_params(0.0, 0.3, &BlochVector::z()).unwrap();
        assert_eq!(zero.matrix().max_abs(), 0.0);
    }

    #[test]
    fn boundary_params_match_p_form() {
        // a = 1/(1+b), b = p/(2-p) gives ((2-p) 1 + p c.sigma) / 2.
        let axis = BlochVector::unit([0.3, -0.5, 0.8]).unwrap();
        for &p in &[0.0, 0.25, 0.6, 1.0] {
            let b = p / (2.0 - p);
            let e = effect_from_params(1.0 / (1.0 + b), b, &axis).unwrap();
            let expect =
                (&ComplexMatrix::identity(2).scale(2.0 - p) + &axis.sigma().scale(p)).scale(0.5);
            assert!(e.matrix().max_abs_diff(&expect) < 1e-14);
        }
    }

    #[test]
    fn params_out_of_range() {
        let z = BlochVector::z();
        assert!(effect_from_params(0.6, 1.0, &z).is_err());
        assert!(effect_from_params(0.2, 1.2, &z).is_err());
        assert!(effect_from_params(-0.1, 0.0, &z).is_err());
        let short = BlochVector::new([0.0, 0.0, 0.5]).unwrap();
        assert!(effect_from_params(0.2, 0.5, &short).is_err());
    }

    fn arb_bloch() -> impl Strategy<Value = BlochVector> {
        (
            0.0f64..=1.0,
            0.0f64..std::f64::consts::PI,
            0.0f64..std::f64::consts::TAU,
        )
            .prop_map(|(r, th, ph)| {
                let u = BlochVector::from_angles(th, ph).components();
                BlochVector::new([r * u[0], r * u[1], r * u[2]]).unwrap()
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn bloch_round_trip_and_purity(alpha in arb_bloch()) {
            let rho = bloch_to_density(&alpha);
            let back = density_to_bloch(&rho).unwrap();
            for (u, v) in alpha.components().iter().zip(back.components()) {
                prop_assert!((u - v).abs() < 1e-12);
            }
            let n2 = alpha.norm().powi(2);
            prop_assert!((rho.purity() - (1.0 + n2) / 2.0).abs() < 1e-12);
            prop_assert!(DensityMatrix::new(rho.into_matrix()).is_ok());
        }

        #[test]
        fn boundary_complement_has_rank_at_most_one(
            b in 0.0f64..=1.0, th in 0.0f64..std::f64::consts::PI, ph in 0.0f64..std::f64::consts::TAU
        ) {
            let axis = BlochVector::from_angles(th, ph);
            let e = effect_from_params(1.0 / (1.0 + b), b, &axis).unwrap();
            let comp = validate_effect(e.complement().matrix().clone()).unwrap();
            let ev = comp.eigenvalues();
            prop_assert!(ev[0].abs() < 1e-12);
        }
    }
}
