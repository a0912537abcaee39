//! Cyclic Jacobi eigensolver for small Hermitian matrices.
//!
//! Each rotation first removes the phase of the pivot with a diagonal
//! unitary and then applies a real Givens rotation, so the iteration is the
//! classical real-symmetric Jacobi method on a rephased matrix.

use num_complex::Complex64;

use super::ComplexMatrix;

const MAX_SWEEPS: usize = 100;

/// Eigenvalues in ascending order, with the matching orthonormal eigenvectors
/// stored as the columns of `vectors`.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    pub fn vector(&self, k: usize) -> Vec<Complex64> {
        let n = self.vectors.dim();
        (0..n).map(|i| self.vectors[(i, k)]).collect()
    }

    /// `V diag(values) V^dag`
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.vectors.dim();
        ComplexMatrix::from_fn(n, |i, j| {
            (0..n)
                .map(|k| self.vectors[(i, k)] * self.values[k] * self.vectors[(j, k)].conj())
                .sum()
        })
    }
}

/// Diagonalizes the Hermitian part of `m`.
pub fn eigh(m: &ComplexMatrix) -> HermitianEigen {
    let n = m.dim();
    let mut a = m.hermitian_part();
    let mut v = ComplexMatrix::identity(n);
    let scale = a.frobenius_norm().max(f64::MIN_POSITIVE);

    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|p| ((p + 1)..n).map(move |q| (p, q)))
            .map(|(p, q)| a[(p, q)].norm_sqr())
            .sum();
        if off.sqrt() <= 1e-16 * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q, scale);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let values = order.iter().map(|&k| a[(k, k)].re).collect();
    let vectors = ComplexMatrix::from_fn(n, |i, j| v[(i, order[j])]);
    HermitianEigen { values, vectors }
}

fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize, scale: f64) {
    let n = a.dim();
    let apq = a[(p, q)];
    let mag = apq.norm();
    if mag <= 1e-18 * scale {
        return;
    }

    // Rephase column/row q so the pivot becomes real and positive.
    let phase = apq / mag;
    for k in 0..n {
        a[(k, q)] *= phase.conj();
        v[(k, q)] *= phase.conj();
    }
    for k in 0..n {
        a[(q, k)] *= phase;
    }

    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let theta = (aqq - app) / (2.0 * mag);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * c - akq * s;
        a[(k, q)] = akp * s + akq * c;
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * c - vkq * s;
        v[(k, q)] = vkp * s + vkq * c;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = apk * c - aqk * s;
        a[(q, k)] = apk * s + aqk * c;
    }
    a[(p, q)] = Complex64::new(0.0, 0.0);
    a[(q, p)] = Complex64::new(0.0, 0.0);
    a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);
}

pub fn eigenvalues(m: &ComplexMatrix) -> Vec<f64> {
    eigh(m).values
}

/// Trace norm of the Hermitian part of `m`: the sum of absolute eigenvalues.
pub fn trace_norm(m: &ComplexMatrix) -> f64 {
    eigenvalues(m).iter().map(|l| l.abs()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmath::random::random_hermitian;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn two_by_two_closed_form() {
        // 1/2 (1 + 0.9 sigma_z) has eigenvalues 0.05 and 0.95.
        let m = &ComplexMatrix::identity(2) + &ComplexMatrix::pauli_z().scale(0.9);
        let ev = eigenvalues(&m.scale(0.5));
        assert!((ev[0] - 0.05).abs() < 1e-15);
        assert!((ev[1] - 0.95).abs() < 1e-15);
    }

    #[test]
    fn pauli_y_spectrum() {
        let e = eigh(&ComplexMatrix::pauli_y());
        assert!((e.values[0] + 1.0).abs() < 1e-14);
        assert!((e.values[1] - 1.0).abs() < 1e-14);
        assert!(e.reconstruct().max_abs_diff(&ComplexMatrix::pauli_y()) < 1e-14);
    }

    #[test]
    fn degenerate_identity() {
        let e = eigh(&ComplexMatrix::identity(4));
        assert!(e.values.iter().all(|&l| (l - 1.0).abs() < 1e-15));
    }

    proptest! {
        #[test]
        fn reconstruction_and_orthonormality(seed in any::<u64>(), dim in 1usize..7) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let h = random_hermitian(&mut rng, dim);
            let e = eigh(&h);
            prop_assert!(e.reconstruct().max_abs_diff(&h) < 1e-12);
            let vdv = &e.vectors.adjoint() * &e.vectors;
            prop_assert!(vdv.max_abs_diff(&ComplexMatrix::identity(dim)) < 1e-12);
            prop_assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
            let tr: f64 = e.values.iter().sum();
            prop_assert!((tr - h.trace().re).abs() < 1e-12);
        }
    }
}
