//! Microcanonical wavefunction correlations.
//!
//! Every result is `a(k)·F_d(kr)`-shaped and normalized by the classical
//! density of states: free space, its large-`N` Gaussian limit, a Dirichlet
//! wall through images, exchange-symmetrized sums and reduced densities.

mod free;
mod matrix;
mod reduced;
mod shell;
mod symmetry;
mod wall;

pub use free::{correlation_free, correlation_large_n};
pub use matrix::{determinant, permanent, SquareMatrix, MAX_PERMANENT_ORDER};
pub use reduced::{
    pair_density_reduced, pair_density_unnormalized, reduced_density_one_particle, subsystem_boltzmann_factor,
    SubsystemFactor,
};
pub use shell::{CorrelationResult, EnergyShell, KernelForm};
pub use symmetry::{symmetrized_correlation, PermutationMethod, Statistics, MAX_ENUMERATED_PARTICLES};
pub(crate) use symmetry::{for_each_permutation, neumaier};
pub use wall::{
    berry_wall_single, boltzmann_average_wall, wall_correlation_exact, wall_correlation_large_n,
    wall_density_profile, wall_half_density_distance, wall_image_sum, AverageMethod, ImageSum, WallGeometry,
    MAX_IMAGE_PARTICLES,
};
