use super::gamma::{log_gamma, stirling_log_factorial};
use super::kernel::{normalized_kernel, BesselOrder};
use crate::error::{domain, Result};

/// Large-order replacement `e^{−x²/(4(d+1))}` for `Ĵ_d(x)`.
pub fn gaussian_limit_kernel(d: BesselOrder, x: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return domain(format!("kernel argument must be >= 0, got {x}"));
    }
    Ok((-x * x / (4.0 * (d.value() + 1.0))).exp())
}

/// `sup |Ĵ_d(x) − e^{−x²/(4(d+1))}|` over `n_grid` uniform points on `[0, x_max]`.
pub fn kernel_convergence_error(d: BesselOrder, x_max: f64, n_grid: usize) -> Result<f64> {
    if n_grid < 2 {
        return domain(format!("n_grid must be at least 2, got {n_grid}"));
    }
    if !(x_max >= 0.0) {
        return domain(format!("x_max must be >= 0, got {x_max}"));
    }
    let mut worst = 0.0f64;
    for i in 0..n_grid {
        let x = x_max * i as f64 / (n_grid - 1) as f64;
        let err = (normalized_kernel(d, x)? - gaussian_limit_kernel(d, x)?).abs();
        worst = worst.max(err);
    }
    Ok(worst)
}

/// Leading small-argument term `(x/2)^d / Γ(d+1)` of `J_d(x)`.
pub fn small_argument_limit(d: BesselOrder, x: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return domain(format!("argument must be >= 0, got {x}"));
    }
    let dv = d.value();
    if x == 0.0 {
        return Ok(if dv == 0.0 { 1.0 } else if dv > 0.0 { 0.0 } else { f64::INFINITY });
    }
    Ok((dv * (0.5 * x).ln() - log_gamma(dv + 1.0)?).exp())
}

/// Stirling variant `(2πd)^{−1/2} (e x / 2d)^d` of [`small_argument_limit`].
pub fn small_argument_limit_stirling(d: BesselOrder, x: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return domain(format!("argument must be >= 0, got {x}"));
    }
    let dv = d.value();
    if x == 0.0 {
        return Ok(0.0);
    }
    Ok((dv * (0.5 * x).ln() - stirling_log_factorial(dv)?).exp())
}
