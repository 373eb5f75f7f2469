//! Oracle reference tables as JSON records `{op, inputs, value, digits, seed}`.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::bessel_integral::{bessel_j_integral, bessel_k_integral, bessel_y_integral};
use super::highprec::{find_kernel_zero, highprec_convergence_error, highprec_gaussian, highprec_kernel};
use super::rpw::{rpw_sample_correlation, RpwEnsembleConfig};
use crate::ensemble::SystemSpec;
use crate::error::Result;
use crate::specfun::BesselOrder;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReferenceRecord {
    pub op: String,
    pub inputs: Value,
    pub value: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub digits: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl ReferenceRecord {
    fn new(op: &str, inputs: Value, value: Value) -> Self {
        ReferenceRecord { op: op.into(), inputs, value, digits: None, seed: None }
    }

    fn with_digits(mut self, digits: u32) -> Self {
        self.digits = Some(digits);
        self
    }

    fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }
}

/// Grid size of the kernel convergence sweep.
pub const CONVERGENCE_GRID: usize = 512;
/// Orders of the kernel convergence sweep.
pub const CONVERGENCE_ORDERS: [f64; 4] = [1.0, 9.0, 49.0, 199.0];
const DIGITS: u32 = 30;

/// Window `[0, 4√(d+1)]` of the convergence sweep.
pub fn convergence_window(d: f64) -> f64 {
    4.0 * (d + 1.0).sqrt()
}

/// Regenerates the full reference table.
pub fn reference_table() -> Result<Vec<ReferenceRecord>> {
    let mut out = Vec::new();
    let kernel_points: [(f64, f64); 8] =
        [(0.0, 1.0), (0.0, 50.0), (0.5, 3.0), (1.0, 3.0), (9.0, 12.0), (49.0, 7.0), (199.0, 10.0), (199.0, 20.0)];
    for (d, x) in kernel_points {
        let v = highprec_kernel(BesselOrder::new(d)?, x, DIGITS)?;
        out.push(ReferenceRecord::new("highprec_kernel", json!({"d": d, "x": x}), json!(v.to_string())).with_digits(DIGITS));
    }
    for d in CONVERGENCE_ORDERS {
        let order = BesselOrder::new(d)?;
        let x_max = convergence_window(d);
        let v = highprec_convergence_error(order, x_max, CONVERGENCE_GRID, DIGITS)?;
        out.push(
            ReferenceRecord::new(
                "kernel_convergence_error",
                json!({"d": d, "x_max": x_max, "n_grid": CONVERGENCE_GRID}),
                json!(v.to_string()),
            )
            .with_digits(DIGITS),
        );
    }
    let g = highprec_gaussian(BesselOrder::new(199.0)?, 20.0, DIGITS)?;
    out.push(ReferenceRecord::new("highprec_gaussian", json!({"d": 199.0, "x": 20.0}), json!(g.to_string())).with_digits(DIGITS));
    let z = find_kernel_zero(BesselOrder::new(0.0)?, 2.0, 3.0)?;
    out.push(ReferenceRecord::new("find_kernel_zero", json!({"d": 0.0, "lo": 2.0, "hi": 3.0}), json!(z)));
    for (nu, x) in [(0.0, 1.0), (2.5, 11.0)] {
        out.push(ReferenceRecord::new("bessel_j_integral", json!({"nu": nu, "x": x}), json!(bessel_j_integral(nu, x)?)));
    }
    out.push(ReferenceRecord::new("bessel_y_integral", json!({"nu": 1.0, "x": 2.5}), json!(bessel_y_integral(1.0, 2.5)?)));
    out.push(ReferenceRecord::new("bessel_k_integral", json!({"nu": 2.0, "x": 0.5}), json!(bessel_k_integral(2.0, 0.5)?)));

    let spec = SystemSpec::new(2, 2)?;
    let cfg = RpwEnsembleConfig::new(200, 4096, 0x5eed);
    let est = rpw_sample_correlation(&spec, 0.5, &[0.0; 4], &[3.0, 0.0, 0.0, 0.0], &cfg)?;
    out.push(
        ReferenceRecord::new(
            "rpw_sample_correlation",
            json!({"n": 2, "d": 2, "energy": 0.5, "r": [3.0, 0.0, 0.0, 0.0], "n_waves": 200, "n_samples": 4096}),
            json!({"estimate": est.estimate, "std_error": est.std_error}),
        )
        .with_seed(cfg.seed),
    );
    Ok(out)
}

/// Looks up the certified value of a convergence-sweep record.
pub fn convergence_reference(table: &[ReferenceRecord], d: f64) -> Option<f64> {
    table
        .iter()
        .find(|r| r.op == "kernel_convergence_error" && r.inputs["d"].as_f64() == Some(d))
        .and_then(|r| r.value.as_str())
        .and_then(|s| s.parse().ok())
}
