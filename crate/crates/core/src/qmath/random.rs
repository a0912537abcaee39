//! Seeded random states, instruments and projectors for property tests and
//! the `random-system` CLI helper.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_distr::StandardNormal;

use super::instrument::{validate_instrument, Instrument, SystemModel};
use super::state::DensityMatrix;
use super::ComplexMatrix;

pub fn gaussian_complex<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Haar-random unit vector.
pub fn random_pure_vector<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Vec<Complex64> {
    loop {
        let v: Vec<Complex64> = (0..dim).map(|_| gaussian_complex(rng)).collect();
        let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if n > 1e-8 {
            return v.into_iter().map(|z| z / n).collect();
        }
    }
}

pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexMatrix {
    let g = ComplexMatrix::from_fn(dim, |_, _| gaussian_complex(rng));
    g.hermitian_part()
}

/// Ginibre-distributed mixed state `G G^dag / tr(G G^dag)`.
pub fn random_density<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> DensityMatrix {
    let g = ComplexMatrix::from_fn(dim, |_, _| gaussian_complex(rng));
    let m = &g * &g.adjoint();
    let tr = m.trace().re;
    DensityMatrix::new(m.scale(1.0 / tr).hermitian_part()).expect("Ginibre state is valid")
}

/// Orthonormalizes `cols` vectors of length `rows` drawn from a Gaussian.
fn random_isometry_columns<R: Rng + ?Sized>(
    rng: &mut R,
    rows: usize,
    cols: usize,
) -> Vec<Vec<Complex64>> {
    assert!(cols <= rows);
    let mut basis: Vec<Vec<Complex64>> = Vec::with_capacity(cols);
    while basis.len() < cols {
        let mut v: Vec<Complex64> = (0..rows).map(|_| gaussian_complex(rng)).collect();
        // Two passes of modified Gram-Schmidt.
        for _ in 0..2 {
            for b in &basis {
                let overlap: Complex64 = b.iter().zip(&v).map(|(x, y)| x.conj() * y).sum();
                for (vi, bi) in v.iter_mut().zip(b) {
                    *vi -= overlap * bi;
                }
            }
        }
        let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if n > 1e-6 {
            basis.push(v.into_iter().map(|z| z / n).collect());
        }
    }
    basis
}

/// Random instrument with `kraus_per_outcome` Kraus operators per outcome,
/// cut from a random isometry `C^dim -> C^(outcomes * kraus * dim)`.
pub fn random_instrument<R: Rng + ?Sized>(
    rng: &mut R,
    dim: usize,
    outcomes: usize,
    kraus_per_outcome: usize,
) -> Instrument {
    let blocks = outcomes * kraus_per_outcome;
    let cols = random_isometry_columns(rng, blocks * dim, dim);
    let mut sets = Vec::with_capacity(outcomes);
    for r in 0..outcomes {
        let mut set = Vec::with_capacity(kraus_per_outcome);
        for k in 0..kraus_per_outcome {
            let offset = (r * kraus_per_outcome + k) * dim;
            set.push(ComplexMatrix::from_fn(dim, |i, j| cols[j][offset + i]));
        }
        sets.push(set);
    }
    validate_instrument(sets).expect("isometry blocks are trace preserving")
}

pub fn random_system<R: Rng + ?Sized>(
    rng: &mut R,
    dim: usize,
    settings: usize,
    outcomes: usize,
) -> SystemModel {
    let initial = random_density(rng, dim);
    let instruments = (0..settings)
        .map(|_| {
            let k = rng.random_range(1..=2);
            random_instrument(rng, dim, outcomes, k)
        })
        .collect();
    SystemModel::new(initial, instruments).expect("consistent random system")
}

/// [`random_system`] driven by a ChaCha8 generator seeded with `seed`.
pub fn seeded_system(seed: u64, dim: usize, settings: usize, outcomes: usize) -> SystemModel {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    random_system(&mut rng, dim, settings, outcomes)
}

/// Projector onto a random `rank`-dimensional subspace.
pub fn random_projector<R: Rng + ?Sized>(rng: &mut R, dim: usize, rank: usize) -> ComplexMatrix {
    let cols = random_isometry_columns(rng, dim, rank);
    let mut p = ComplexMatrix::zeros(dim);
    for c in &cols {
        p = &p + &ComplexMatrix::outer(c, c);
    }
    p
}
