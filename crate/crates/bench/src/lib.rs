//! Shared fixtures for the benchmarks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rpw_core::correlations::SquareMatrix;
use rpw_core::SystemSpec;

/// Free system whose Gaussian-limit width is `γ = 1`, with its energy.
pub fn unit_gamma_system(n: usize, dim: usize) -> (SystemSpec, f64) {
    let spec = SystemSpec::new(n, dim).expect("valid system");
    let energy = 2.0 * (spec.order().value() + 1.0);
    (spec, energy)
}

/// Pair of nearby configurations drawn from a fixed seed.
pub fn config_pair(dof: usize, seed: u64) -> (Vec<f64>, Vec<f64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x: Vec<f64> = (0..dof).map(|_| rng.random_range(0.0..2.0)).collect();
    let xp = x.iter().map(|v| v + rng.random_range(-0.4..0.4)).collect();
    (x, xp)
}

/// Gaussian kernel matrix `e^{−|x_i − x'_j|²}` of random points.
pub fn gaussian_matrix(n: usize, dim: usize, seed: u64) -> SquareMatrix {
    let (x, xp) = config_pair(n * dim, seed);
    SquareMatrix::from_fn(n, |i, j| {
        let d2: f64 = (0..dim).map(|c| (x[i * dim + c] - xp[j * dim + c]).powi(2)).sum();
        (-d2).exp()
    })
}
