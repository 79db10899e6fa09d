#![allow(dead_code)]

pub mod circuit;

use milac::matrixkit::{c, CMatrix, RMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_cmatrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize, scale: f64) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)) * scale)
}

pub fn random_symmetric(rng: &mut ChaCha8Rng, n: usize, scale: f64) -> RMatrix {
    let a = RMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0) * scale);
    (&a + a.transpose()) * 0.5
}

/// Symmetric impedance matrix with positive definite real part, entries of
/// order `z0`.
pub fn random_coupling(rng: &mut ChaCha8Rng, n: usize, z0: f64) -> CMatrix {
    let a = RMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
    let re = (&a * a.transpose()) * (0.3 * z0 / n as f64) + RMatrix::identity(n, n) * (0.6 * z0);
    let im = random_symmetric(rng, n, 0.4 * z0);
    CMatrix::from_fn(n, n, |i, j| c(re[(i, j)], im[(i, j)]))
}

pub fn rel(a: &CMatrix, b: &CMatrix) -> f64 {
    milac::matrixkit::rel_frobenius(a, b)
}

/// Dipole UPA coupling at 28 GHz with quarter-wave dipoles, up to 8 columns.
pub fn dipole_coupling(n: usize, spacing: f64) -> milac::coupling::CouplingMatrix {
    use milac::coupling::{build_coupling_matrix, build_geometry, PhysicalConstants, DEFAULT_QUAD_ORDER};
    let geom = build_geometry(n, n.min(8), spacing, 28e9, 0.25).unwrap();
    build_coupling_matrix(&geom, &PhysicalConstants::for_geometry(&geom), DEFAULT_QUAD_ORDER).unwrap()
}

/// Rayleigh row `z_RT ~ CN(0, I)`.
pub fn rayleigh(rng: &mut ChaCha8Rng, n: usize) -> CMatrix {
    milac::montecarlo::sample_channel(n, 1.0, rng).unwrap()
}

/// Symmetric impedance with diagonal exactly `z0` and diagonally dominant
/// real part, so it is a valid `CouplingMatrix`.
pub fn random_matched_coupling(rng: &mut ChaCha8Rng, n: usize, z0: f64) -> milac::coupling::CouplingMatrix {
    let bound = 0.8 * z0 / n as f64;
    let mut z = CMatrix::from_element(n, n, c(0.0, 0.0));
    for i in 0..n {
        z[(i, i)] = c(z0, 0.0);
        for j in 0..i {
            let v = c(rng.random_range(-bound..bound), rng.random_range(-bound..bound));
            z[(i, j)] = v;
            z[(j, i)] = v;
        }
    }
    milac::coupling::CouplingMatrix::from_matrix(z, z0).unwrap()
}
