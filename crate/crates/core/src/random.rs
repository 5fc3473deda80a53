//! Seeded random generators for states, unitaries and bases.
//!
//! Used by the verification suites and tests; everything is driven by a
//! caller-supplied RNG so runs are reproducible.

use num_complex::Complex64;
use rand::Rng;

use crate::matrix::{c64, DensityMatrix, Isometry, StateVector};
use crate::measurement::ProjectiveBasis;

/// Standard-normal sample via Box-Muller.
fn gaussian(rng: &mut impl Rng) -> f64 {
    let u1: f64 = rng.gen::<f64>().max(1e-300);
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

fn gaussian_c64(rng: &mut impl Rng) -> Complex64 {
    c64(gaussian(rng), gaussian(rng))
}

/// Row-major `rows`×`cols` complex Gaussian matrix.
fn ginibre(rng: &mut impl Rng, rows: usize, cols: usize) -> Vec<Complex64> {
    (0..rows * cols).map(|_| gaussian_c64(rng)).collect()
}

/// Orthonormalizes the columns in place (modified Gram-Schmidt, two passes).
fn orthonormalize_columns(rows: usize, cols: usize, m: &mut [Complex64]) {
    for j in 0..cols {
        for _pass in 0..2 {
            for i in 0..j {
                let overlap: Complex64 = (0..rows)
                    .map(|r| m[r * cols + i].conj() * m[r * cols + j])
                    .sum();
                for r in 0..rows {
                    let vi = m[r * cols + i];
                    m[r * cols + j] -= overlap * vi;
                }
            }
        }
        let norm: f64 = (0..rows)
            .map(|r| m[r * cols + j].norm_sqr())
            .sum::<f64>()
            .sqrt();
        for r in 0..rows {
            m[r * cols + j] /= norm;
        }
    }
}

/// Haar-like random unitary (row-major `dim`×`dim`).
pub fn random_unitary(rng: &mut impl Rng, dim: usize) -> Vec<Complex64> {
    let mut m = ginibre(rng, dim, dim);
    orthonormalize_columns(dim, dim, &mut m);
    m
}

/// Random Hermitian matrix with entries of order 1.
pub fn random_hermitian(rng: &mut impl Rng, dim: usize) -> Vec<Complex64> {
    let g = ginibre(rng, dim, dim);
    let mut m = vec![Complex64::ZERO; dim * dim];
    for i in 0..dim {
        for j in 0..dim {
            m[i * dim + j] = (g[i * dim + j] + g[j * dim + i].conj()) * 0.5;
        }
    }
    m
}

/// Full-rank random density matrix ρ = GG†/tr(GG†) on the given layout.
pub fn random_density(rng: &mut impl Rng, factor_dims: &[usize]) -> DensityMatrix {
    let dim: usize = factor_dims.iter().product();
    let g = ginibre(rng, dim, dim);
    let mut m = vec![Complex64::ZERO; dim * dim];
    for i in 0..dim {
        for j in 0..dim {
            let mut s = Complex64::ZERO;
            for k in 0..dim {
                s += g[i * dim + k] * g[j * dim + k].conj();
            }
            m[i * dim + j] = s;
        }
    }
    let tr: f64 = (0..dim).map(|i| m[i * dim + i].re).sum();
    for z in m.iter_mut() {
        *z /= tr;
    }
    DensityMatrix::new(m, factor_dims.to_vec()).expect("Ginibre state is always valid")
}

/// Haar-like random pure state.
pub fn random_pure(rng: &mut impl Rng, factor_dims: &[usize]) -> StateVector {
    let dim: usize = factor_dims.iter().product();
    let amps: Vec<Complex64> = (0..dim).map(|_| gaussian_c64(rng)).collect();
    StateVector::normalized(amps, factor_dims.to_vec()).expect("Gaussian vector is nonzero")
}

/// Random isometry from `input_dim` into the product of `output_dims`.
pub fn random_isometry(rng: &mut impl Rng, input_dim: usize, output_dims: &[usize]) -> Isometry {
    let out_dim: usize = output_dims.iter().product();
    assert!(out_dim >= input_dim);
    let mut m = ginibre(rng, out_dim, input_dim);
    orthonormalize_columns(out_dim, input_dim, &mut m);
    Isometry::new(m, output_dims.to_vec(), input_dim).expect("orthonormalized columns")
}

/// Random orthonormal measurement basis (columns of a random unitary).
pub fn random_basis(rng: &mut impl Rng, dim: usize, label: &str) -> ProjectiveBasis {
    let u = random_unitary(rng, dim);
    let vectors: Vec<Vec<Complex64>> = (0..dim)
        .map(|j| (0..dim).map(|r| u[r * dim + j]).collect())
        .collect();
    ProjectiveBasis::from_vectors(vectors, label).expect("unitary columns are orthonormal")
}
