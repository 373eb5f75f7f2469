use serde::{Deserialize, Serialize};

use super::system::SystemSpec;
use crate::error::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WaveRegime {
    /// `E ≥ V(x)`: real wavenumber `k`.
    Propagating,
    /// `E < V(x)`: decay constant `κ`.
    Evanescent,
}

/// Solution of `ħ²k²/2m = E − V(x)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WaveNumber {
    pub regime: WaveRegime,
    /// `k` when propagating, `κ` when evanescent; always `≥ 0`.
    pub value: f64,
}

impl WaveNumber {
    /// Wavenumber for kinetic energy `E − V`.
    pub fn from_kinetic(spec: &SystemSpec, kinetic: f64) -> Self {
        let value = (kinetic.abs() / spec.kinetic_unit()).sqrt();
        let regime = if kinetic >= 0.0 {
            WaveRegime::Propagating
        } else {
            WaveRegime::Evanescent
        };
        WaveNumber { regime, value }
    }

    pub fn is_propagating(&self) -> bool {
        self.regime == WaveRegime::Propagating
    }
}

/// Local wavenumber at configuration `x` and energy `E`.
pub fn local_wavenumber(spec: &SystemSpec, x: &[f64], energy: f64) -> Result<WaveNumber> {
    let v = spec.potential_energy(x)?;
    Ok(WaveNumber::from_kinetic(spec, energy - v))
}
