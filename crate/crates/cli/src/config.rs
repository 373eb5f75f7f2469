//! Run configuration: file values, flag overrides and resolved parameters.

use std::path::Path;

use rpw_core::correlations::Statistics;
use rpw_core::oracles::AmplitudeLaw;
use rpw_core::{Potential, SystemSpec};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::CliError;
use crate::output::{Document, Format};

pub const DEFAULT_SEED: u64 = 0x5eed;

/// Everything needed to reproduce a run. The output path is not part of it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub subcommand: String,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default)]
    pub format: Format,
    #[serde(default)]
    pub params: Map<String, Value>,
}

fn default_seed() -> u64 {
    DEFAULT_SEED
}

/// File-level values before flag overrides.
#[derive(Clone, Debug, Default)]
pub struct FileConfig {
    pub subcommand: Option<String>,
    pub seed: Option<u64>,
    pub format: Option<Format>,
    pub params: Map<String, Value>,
}

/// Reads a run configuration, the header of an earlier output (CSV or
/// JSON), or a bare header object.
pub fn load_config(path: &Path) -> Result<FileConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let bad = |msg: String| CliError::Usage(format!("{}: {msg}", path.display()));
    let mut v = match Document::parse_header(&text) {
        Some(header) => header,
        None => serde_json::from_str::<Value>(&text).map_err(|e| bad(e.to_string()))?,
    };
    if let Some(c) = v.get("config") {
        v = c.clone();
    }
    let Value::Object(mut obj) = v else {
        return Err(bad("expected a JSON object".into()));
    };
    let subcommand = match obj.remove("subcommand") {
        Some(Value::String(s)) => Some(s),
        None => None,
        Some(other) => return Err(bad(format!("subcommand must be a string, got {other}"))),
    };
    let seed = obj.remove("seed").map(serde_json::from_value).transpose().map_err(|e| bad(format!("seed: {e}")))?;
    let format = obj.remove("format").map(serde_json::from_value).transpose().map_err(|e| bad(format!("format: {e}")))?;
    let params = match obj.remove("params") {
        Some(Value::Object(p)) => p,
        None => Map::new(),
        Some(other) => return Err(bad(format!("params must be an object, got {other}"))),
    };
    if let Some(k) = obj.keys().next() {
        return Err(bad(format!("unknown key `{k}`")));
    }
    Ok(FileConfig { subcommand, seed, format, params })
}

/// Overlays flag values on file values. `system` is merged key by key; other
/// keys are replaced whole.
pub fn merge_params(mut base: Map<String, Value>, overrides: Map<String, Value>) -> Map<String, Value> {
    for (k, v) in overrides {
        match (k.as_str(), base.get_mut(&k), v) {
            ("system", Some(Value::Object(b)), Value::Object(o)) => {
                b.extend(o);
            }
            (_, _, v) => {
                base.insert(k, v);
            }
        }
    }
    base
}

pub fn parse_params<T: DeserializeOwned>(params: &Map<String, Value>) -> Result<T, CliError> {
    serde_json::from_value(Value::Object(params.clone())).map_err(|e| CliError::Usage(format!("invalid parameters: {e}")))
}

pub fn to_map<T: Serialize>(v: &T) -> Map<String, Value> {
    match serde_json::to_value(v).expect("parameters serialize") {
        Value::Object(m) => m,
        _ => unreachable!("parameter structs serialize to objects"),
    }
}

fn system(n: usize, d: usize) -> SystemSpec {
    SystemSpec::new(n, d).expect("valid default system")
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BesselGaussParams {
    pub d_list: Vec<f64>,
    /// Window is `[0, x_max_factor·√(d+1)]`.
    pub x_max_factor: f64,
    pub n_grid: usize,
}

impl Default for BesselGaussParams {
    fn default() -> Self {
        BesselGaussParams { d_list: vec![1.0, 9.0, 49.0, 199.0], x_max_factor: 4.0, n_grid: 512 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WallProfileParams {
    pub system: SystemSpec,
    pub energy: Option<f64>,
    /// Defaults to four half-density distances.
    pub x_max: Option<f64>,
    pub n_grid: usize,
}

impl Default for WallProfileParams {
    fn default() -> Self {
        WallProfileParams { system: system(50, 2), energy: None, x_max: None, n_grid: 201 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PairCorrParams {
    pub system: SystemSpec,
    pub beta: f64,
    /// Defaults to three thermal wavelengths.
    pub r_max: Option<f64>,
    pub n_grid: usize,
    pub stats: Statistics,
}

impl Default for PairCorrParams {
    fn default() -> Self {
        PairCorrParams {
            system: system(2, 3).with_box_volume(1000.0).expect("valid default system"),
            beta: 1.0,
            r_max: None,
            n_grid: 201,
            stats: Statistics::Fermi,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EnsembleEquivParams {
    pub system: SystemSpec,
    /// Defaults to one unit of energy per degree of freedom.
    pub energy: Option<f64>,
    pub n_grid: usize,
    /// Subsystem size `M` for the Boltzmann-factor curves.
    pub subsystem_particles: usize,
    /// Subsystem energies span `[0, sub_energy_max_kt·k_BT]`.
    pub sub_energy_max_kt: f64,
    pub n_sub: usize,
}

impl Default for EnsembleEquivParams {
    fn default() -> Self {
        EnsembleEquivParams {
            system: system(50, 2).with_potential(Potential::harmonic(1.0)).expect("valid default system"),
            energy: None,
            n_grid: 401,
            subsystem_particles: 1,
            sub_energy_max_kt: 5.0,
            n_sub: 51,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RpwVerifyParams {
    pub system: SystemSpec,
    pub energy: f64,
    pub kr_list: Vec<f64>,
    pub n_waves: usize,
    pub n_samples: usize,
    pub amplitude_law: AmplitudeLaw,
}

impl Default for RpwVerifyParams {
    fn default() -> Self {
        RpwVerifyParams {
            system: system(2, 2),
            energy: 0.5,
            kr_list: vec![0.0, 0.5, 1.0, 2.404825557695773, 3.0, 5.0],
            n_waves: 200,
            n_samples: 10_000,
            amplitude_law: AmplitudeLaw::UnitPhase,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DosParams {
    pub system: SystemSpec,
    pub energies: Vec<f64>,
    pub n_samples: usize,
}

impl Default for DosParams {
    fn default() -> Self {
        DosParams { system: system(2, 3), energies: vec![0.5, 1.0, 2.0, 4.0], n_samples: 100_000 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SpTimeParams {
    pub system: SystemSpec,
    pub energies: Vec<f64>,
    /// Configuration at which `t*` is evaluated; defaults to the box centre
    /// (zero potential) or the origin.
    pub x: Option<Vec<f64>>,
}

impl Default for SpTimeParams {
    fn default() -> Self {
        SpTimeParams { system: system(10, 3), energies: vec![1.0, 2.0, 4.0, 8.0], x: None }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn system_merges_per_key() {
        let base = to_map(&json!({"system": {"n_particles": 3, "spatial_dim": 2}, "n_grid": 4}));
        let over = to_map(&json!({"system": {"spatial_dim": 3}, "n_grid": 9}));
        let m = merge_params(base, over);
        assert_eq!(Value::Object(m), json!({"system": {"n_particles": 3, "spatial_dim": 3}, "n_grid": 9}));
    }

    #[test]
    fn defaults_fill_missing_fields() {
        let p: WallProfileParams = parse_params(&to_map(&json!({"n_grid": 5}))).unwrap();
        assert_eq!(p.n_grid, 5);
        assert_eq!(p.system.n_particles(), 50);
        assert!(parse_params::<WallProfileParams>(&to_map(&json!({"bogus": 1}))).is_err());
    }

    #[test]
    fn resolved_params_round_trip() {
        let p = RpwVerifyParams::default();
        assert_eq!(parse_params::<RpwVerifyParams>(&to_map(&p)).unwrap(), p);
    }
}
