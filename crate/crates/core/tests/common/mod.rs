//! Seeded random inputs shared by the integration and acceptance tests.
#![allow(dead_code)]

use condprep::epr::{EprState, PARTICLE_1, PARTICLE_2};
use condprep::hilbert::{outer, ComplexMatrix};
use condprep::models::NonidealityMatrix;
use condprep::objects::{DensityOperator, ObservableBasis, PureState};
use condprep::{ComplexVector, SpaceLayout};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Standard normal by Box–Muller.
pub fn gaussian(rng: &mut impl Rng) -> f64 {
    let u: f64 = 1.0 - rng.random::<f64>();
    let v: f64 = rng.random();
    (-2.0 * u.ln()).sqrt() * (std::f64::consts::TAU * v).cos()
}

pub fn complex_gaussian(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(gaussian(rng), gaussian(rng)) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> ComplexMatrix {
    DMatrix::from_fn(rows, cols, |_, _| complex_gaussian(rng))
}

pub fn random_vector(rng: &mut impl Rng, n: usize) -> ComplexVector {
    let v = ComplexVector::from_fn(n, |_, _| complex_gaussian(rng));
    let norm = v.norm();
    v / Complex64::from(norm)
}

pub fn random_hermitian(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    let g = random_matrix(rng, n, n);
    (&g + g.adjoint()) * Complex64::from(0.5)
}

/// Haar-distributed unitary: QR of a Ginibre matrix with phases fixed.
pub fn random_unitary(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    let qr = random_matrix(rng, n, n).qr();
    let (q, r) = (qr.q(), qr.r());
    let phases = ComplexMatrix::from_fn(n, n, |i, j| {
        if i == j && r[(i, i)].norm() > 0.0 {
            r[(i, i)] / Complex64::from(r[(i, i)].norm())
        } else if i == j {
            Complex64::from(1.0)
        } else {
            Complex64::from(0.0)
        }
    });
    q * phases
}

pub fn random_basis(rng: &mut impl Rng, layout: SpaceLayout) -> ObservableBasis {
    let u = random_unitary(rng, layout.total_dim());
    let vectors = (0..u.ncols()).map(|k| u.column(k).into_owned()).collect();
    ObservableBasis::from_vectors(layout, vectors).expect("columns of a unitary are orthonormal")
}

pub fn random_pure(rng: &mut impl Rng, layout: SpaceLayout) -> PureState {
    let n = layout.total_dim();
    PureState::new(layout, random_vector(rng, n)).expect("normalized")
}

/// Random full-rank mixed state `G G† / Tr`.
pub fn random_density(rng: &mut impl Rng, layout: SpaceLayout) -> DensityOperator {
    let n = layout.total_dim();
    let g = random_matrix(rng, n, n);
    DensityOperator::from_unnormalized(layout, &(&g * g.adjoint())).expect("positive")
}

pub fn random_stochastic(rng: &mut impl Rng, rows: usize, cols: usize) -> NonidealityMatrix {
    let mut m = vec![vec![0.0; cols]; rows];
    for k in 0..cols {
        let raw: Vec<f64> = (0..rows).map(|_| rng.random::<f64>() + 1e-3).collect();
        let total: f64 = raw.iter().sum();
        for (row, x) in m.iter_mut().zip(raw) {
            row[k] = x / total;
        }
    }
    NonidealityMatrix::new(m).expect("columns sum to one")
}

pub fn random_coefficients(rng: &mut impl Rng, n: usize) -> Vec<Complex64> {
    random_vector(rng, n).iter().copied().collect()
}

/// Schmidt-form pair with random coefficients and random local bases.
pub fn random_epr(rng: &mut impl Rng, n: usize) -> EprState {
    let b1 = random_basis(rng, SpaceLayout::single(PARTICLE_1, n).unwrap());
    let b2 = random_basis(rng, SpaceLayout::single(PARTICLE_2, n).unwrap());
    EprState::new(random_coefficients(rng, n), b1, b2).expect("valid Schmidt form")
}

pub fn projector_onto(v: &ComplexVector) -> ComplexMatrix {
    outer(v, v)
}
