//! Wavefunction correlations and density matrices for N-particle random-wave
//! eigenstates at fixed energy.
//!
//! The crate is organised in four layers:
//!
//! * [`specfun`]: the normalized Bessel kernel `Ĵ_d(x) = Γ(d+1)(2/x)^d J_d(x)`,
//!   its Gaussian large-order limit and log-domain helpers.
//! * [`ensemble`]: system description, potentials, local wavenumbers, the
//!   classical density of states and the energy/temperature correspondence.
//! * [`correlations`]: fixed-energy correlation functions, wall images,
//!   Fermi/Bose symmetrization and reduced densities.
//! * [`oracles`]: independent brute-force references (random plane wave
//!   sampling, big-integer series, permutation enumeration, contour
//!   quadrature of the time integral, energy convolution).
//!
//! Configurations are flat `&[f64]` slices of length `N·D`; particle `i`
//! occupies `x[i*D..(i+1)*D]`.

pub mod correlations;
pub mod ensemble;
mod error;
pub mod oracles;
pub mod specfun;

pub use correlations::{
    CorrelationResult, EnergyShell, KernelForm, PermutationMethod, Statistics, WallGeometry,
};
pub use ensemble::{
    DosEstimate, DosMethod, EnergyBetaPair, Potential, SystemSpec, WaveNumber, WaveRegime,
};
pub use error::{Error, Result};
pub use specfun::{BesselOrder, LogSigned};

/// Library version string embedded in CLI provenance headers.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
