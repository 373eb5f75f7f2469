use serde::{Deserialize, Serialize};

use super::potential::Potential;
use crate::error::{domain, Result};
use crate::specfun::BesselOrder;

/// Particle count, dimension, units and external potential of a system.
///
/// `box_volume` is the confinement volume per particle. It only enters the
/// normalizations of the zero potential, where each particle lives in the
/// cube `[0, L]^D` with `L^D = box_volume`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSpec", into = "RawSpec")]
pub struct SystemSpec {
    n_particles: usize,
    spatial_dim: usize,
    mass: f64,
    hbar: f64,
    box_volume: f64,
    potential: Potential,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct RawSpec {
    n_particles: usize,
    spatial_dim: usize,
    #[serde(default = "one")]
    mass: f64,
    #[serde(default = "one")]
    hbar: f64,
    #[serde(default = "one")]
    box_volume: f64,
    #[serde(default)]
    potential: Potential,
}

fn one() -> f64 {
    1.0
}

impl TryFrom<RawSpec> for SystemSpec {
    type Error = crate::Error;

    fn try_from(raw: RawSpec) -> Result<Self> {
        SystemSpec::new(raw.n_particles, raw.spatial_dim)?
            .with_mass(raw.mass)?
            .with_hbar(raw.hbar)?
            .with_box_volume(raw.box_volume)?
            .with_potential(raw.potential)
    }
}

impl From<SystemSpec> for RawSpec {
    fn from(s: SystemSpec) -> Self {
        RawSpec {
            n_particles: s.n_particles,
            spatial_dim: s.spatial_dim,
            mass: s.mass,
            hbar: s.hbar,
            box_volume: s.box_volume,
            potential: s.potential,
        }
    }
}

fn positive(name: &str, v: f64) -> Result<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        domain(format!("{name} must be positive and finite, got {v}"))
    }
}

impl SystemSpec {
    /// `N` free particles in `D` dimensions with `m = ħ = 1` and unit box.
    pub fn new(n_particles: usize, spatial_dim: usize) -> Result<Self> {
        if n_particles == 0 || spatial_dim == 0 {
            return domain("n_particles and spatial_dim must be at least 1");
        }
        Ok(SystemSpec {
            n_particles,
            spatial_dim,
            mass: 1.0,
            hbar: 1.0,
            box_volume: 1.0,
            potential: Potential::Zero,
        })
    }

    pub fn with_mass(mut self, mass: f64) -> Result<Self> {
        self.mass = positive("mass", mass)?;
        Ok(self)
    }

    pub fn with_hbar(mut self, hbar: f64) -> Result<Self> {
        self.hbar = positive("hbar", hbar)?;
        Ok(self)
    }

    pub fn with_box_volume(mut self, box_volume: f64) -> Result<Self> {
        self.box_volume = positive("box_volume", box_volume)?;
        Ok(self)
    }

    pub fn with_potential(mut self, potential: Potential) -> Result<Self> {
        potential.validate(self.spatial_dim)?;
        self.potential = potential;
        Ok(self)
    }

    pub fn n_particles(&self) -> usize {
        self.n_particles
    }

    pub fn spatial_dim(&self) -> usize {
        self.spatial_dim
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn box_volume(&self) -> f64 {
        self.box_volume
    }

    pub fn potential(&self) -> &Potential {
        &self.potential
    }

    /// Total number of coordinates, `N·D`.
    pub fn dof(&self) -> usize {
        self.n_particles * self.spatial_dim
    }

    /// Kernel order `d = N·D/2 − 1`.
    pub fn order(&self) -> BesselOrder {
        BesselOrder::from_particles(self.n_particles, self.spatial_dim)
            .expect("validated at construction")
    }

    /// Side `L` of the per-particle confinement cube.
    pub fn box_side(&self) -> f64 {
        self.box_volume.powf(1.0 / self.spatial_dim as f64)
    }

    /// `ħ²/2m`, the kinetic energy of unit wavenumber.
    pub fn kinetic_unit(&self) -> f64 {
        self.hbar * self.hbar / (2.0 * self.mass)
    }

    pub(crate) fn check_config(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dof() {
            return domain(format!(
                "configuration has {} components, expected N·D = {}",
                x.len(),
                self.dof()
            ));
        }
        if x.iter().any(|v| !v.is_finite()) {
            return domain("configuration components must be finite");
        }
        Ok(())
    }

    /// Total potential `V(x) = Σ_i v(x_i)`.
    pub fn potential_energy(&self, x: &[f64]) -> Result<f64> {
        self.check_config(x)?;
        Ok(x
            .chunks(self.spatial_dim)
            .map(|p| self.potential.one_body(self.mass, p))
            .sum())
    }

    /// Minimum of `V` over configuration space.
    pub fn potential_minimum(&self) -> f64 {
        self.n_particles as f64 * self.potential.one_body_minimum()
    }

    pub(crate) fn check_energy(&self, energy: f64) -> Result<()> {
        let vmin = self.potential_minimum();
        if !energy.is_finite() || energy <= vmin {
            return domain(format!(
                "energy {energy} must lie above the potential minimum {vmin}"
            ));
        }
        Ok(())
    }
}
