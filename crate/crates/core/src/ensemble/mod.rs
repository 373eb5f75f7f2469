//! System specification, potentials and the classical ensembles.
//!
//! Provides the local wavenumber field, the classical (Weyl) density of
//! states, the energy–temperature correspondence and the canonical reference
//! formulas against which microcanonical results are compared.

mod densities;
mod dos;
mod potential;
mod system;
mod thermo;
mod wavenumber;

pub use densities::{
    canonical_coord_density, coordinate_marginals, microcanonical_coord_density, MarginalComparison,
};
pub use dos::{classical_dos, reference_dos, DosEstimate, DosMethod, REFERENCE_SAMPLES, REFERENCE_SEED};
pub use potential::{Potential, TablePotential};
pub use system::SystemSpec;
pub use thermo::{
    beta_to_energy, canonical_density_matrix_free, energy_to_beta, energy_to_beta_with, mean_potential,
    stationary_phase_time, thermal_wavelength, EnergyBetaPair, MeanPotentialMethod,
};
pub use wavenumber::{local_wavenumber, WaveNumber, WaveRegime};
