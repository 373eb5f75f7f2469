//! Command-line flags. Every subcommand flag is optional; unset flags fall
//! back to `--config` values and then to built-in defaults.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use rpw_core::Potential;
use serde::Serialize;
use serde_json::{Map, Value};

use crate::config::to_map;
use crate::error::CliError;
use crate::output::Format;

#[derive(Debug, Parser)]
#[command(name = "rpw", version, about = "Random-wave correlation functions: figure data and verification runs")]
pub struct Cli {
    /// JSON run configuration, or an earlier output whose header is reused.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Omit the timestamp so identical runs give identical bytes.
    #[arg(long, global = true)]
    pub reproducible: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Normalized Bessel kernel against its Gaussian limit.
    BesselGauss(BesselGaussArgs),
    /// Density profile near a hard wall.
    WallProfile(WallProfileArgs),
    /// Two-particle Fermi/Bose pair density against separation.
    PairCorr(PairCorrArgs),
    /// Microcanonical and canonical coordinate marginals at matched β.
    EnsembleEquiv(EnsembleEquivArgs),
    /// Random-plane-wave Monte Carlo against the kernel.
    RpwVerify(RpwVerifyArgs),
    /// Classical density of states by every applicable method.
    Dos(DosArgs),
    /// Complex stationary-phase time against −iβħ.
    SpTime(SpTimeArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::BesselGauss(_) => "bessel-gauss",
            Command::WallProfile(_) => "wall-profile",
            Command::PairCorr(_) => "pair-corr",
            Command::EnsembleEquiv(_) => "ensemble-equiv",
            Command::RpwVerify(_) => "rpw-verify",
            Command::Dos(_) => "dos",
            Command::SpTime(_) => "sp-time",
        }
    }

    /// Parameters set on the command line.
    pub fn overrides(&self) -> Result<Map<String, Value>, CliError> {
        let (mut map, system) = match self {
            Command::BesselGauss(a) => (to_map(a), None),
            Command::WallProfile(a) => (to_map(a), Some(&a.system)),
            Command::PairCorr(a) => (to_map(a), Some(&a.system)),
            Command::EnsembleEquiv(a) => (to_map(a), Some(&a.system)),
            Command::RpwVerify(a) => (to_map(a), Some(&a.system)),
            Command::Dos(a) => (to_map(a), Some(&a.system)),
            Command::SpTime(a) => (to_map(a), Some(&a.system)),
        };
        if let Some(s) = system {
            let sys = s.overrides()?;
            if !sys.is_empty() {
                map.insert("system".into(), Value::Object(sys));
            }
        }
        Ok(map)
    }
}

#[derive(Debug, Default, Args, Serialize)]
pub struct SystemArgs {
    #[arg(long)]
    #[serde(rename = "n_particles", skip_serializing_if = "Option::is_none")]
    pub particles: Option<usize>,
    #[arg(long)]
    #[serde(rename = "spatial_dim", skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mass: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hbar: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub box_volume: Option<f64>,
    /// Harmonic well of this frequency centred at the origin.
    #[arg(long, conflicts_with = "potential")]
    #[serde(skip)]
    pub omega: Option<f64>,
    /// JSON potential file (`{"kind": "zero" | "harmonic" | "table", ...}`).
    #[arg(long)]
    #[serde(skip)]
    pub potential: Option<PathBuf>,
}

impl SystemArgs {
    fn overrides(&self) -> Result<Map<String, Value>, CliError> {
        let mut map = to_map(self);
        let potential = match (&self.omega, &self.potential) {
            (Some(w), _) => Some(Potential::harmonic(*w)),
            (None, Some(path)) => {
                let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
                Some(
                    serde_json::from_str::<Potential>(&text)
                        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?,
                )
            }
            (None, None) => None,
        };
        if let Some(p) = potential {
            map.insert("potential".into(), serde_json::to_value(p).expect("potential serializes"));
        }
        Ok(map)
    }
}

#[derive(Debug, Args, Serialize)]
#[command(allow_negative_numbers = true)]
pub struct BesselGaussArgs {
    /// Comma-separated orders.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d_list: Option<Vec<f64>>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x_max_factor: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_grid: Option<usize>,
}

#[derive(Debug, Args, Serialize)]
#[command(allow_negative_numbers = true)]
pub struct WallProfileArgs {
    #[command(flatten)]
    #[serde(skip)]
    pub system: SystemArgs,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub energy: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x_max: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_grid: Option<usize>,
}

#[derive(Debug, Args, Serialize)]
#[command(allow_negative_numbers = true)]
pub struct PairCorrArgs {
    #[command(flatten)]
    #[serde(skip)]
    pub system: SystemArgs,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r_max: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_grid: Option<usize>,
    /// fermi or bose.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stats: Option<String>,
}

#[derive(Debug, Args, Serialize)]
#[command(allow_negative_numbers = true)]
pub struct EnsembleEquivArgs {
    #[command(flatten)]
    #[serde(skip)]
    pub system: SystemArgs,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub energy: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_grid: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub subsystem_particles: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sub_energy_max_kt: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_sub: Option<usize>,
}

#[derive(Debug, Args, Serialize)]
#[command(allow_negative_numbers = true)]
pub struct RpwVerifyArgs {
    #[command(flatten)]
    #[serde(skip)]
    pub system: SystemArgs,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub energy: Option<f64>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kr_list: Option<Vec<f64>>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_waves: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_samples: Option<usize>,
    /// unit-phase or complex-gaussian.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub amplitude_law: Option<String>,
}

#[derive(Debug, Args, Serialize)]
#[command(allow_negative_numbers = true)]
pub struct DosArgs {
    #[command(flatten)]
    #[serde(skip)]
    pub system: SystemArgs,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub energies: Option<Vec<f64>>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_samples: Option<usize>,
}

#[derive(Debug, Args, Serialize)]
#[command(allow_negative_numbers = true)]
pub struct SpTimeArgs {
    #[command(flatten)]
    #[serde(skip)]
    pub system: SystemArgs,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub energies: Option<Vec<f64>>,
    /// Comma-separated configuration of length N·D.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x: Option<Vec<f64>>,
}
