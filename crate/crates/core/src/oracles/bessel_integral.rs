//! Bessel functions from their integral representations.
//!
//! These share no code with the series/recurrence kernel in `specfun` and
//! serve as an independent reference, including for `Y_ν` and `K_ν`, which
//! the library itself never needs.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::integrate::Quadrature;
use crate::error::{domain, Result};

fn quad() -> Quadrature {
    Quadrature::new(1e-14).with_abs_tol(1e-17).with_max_intervals(20_000)
}

/// The `[0, π]` integrands are bounded by 1, so their error is absolute.
/// Rounding alone leaves about `ε·π` of estimated error, hence the floor.
fn quad_angular() -> Quadrature {
    quad().with_abs_tol(1e-14)
}

/// Smallest `T` (by doubling) with `f(T) ≥ 60`, `f` increasing for large `T`.
fn tail_cutoff(f: impl Fn(f64) -> f64) -> f64 {
    let mut t = 1.0;
    while f(t) < 60.0 && t < 1e4 {
        t *= 2.0;
    }
    t
}

fn check(nu: f64, x: f64) -> Result<()> {
    if !nu.is_finite() || !(x >= 0.0) || !x.is_finite() {
        return domain(format!("bessel integral needs finite order and x >= 0, got nu = {nu}, x = {x}"));
    }
    Ok(())
}

/// `J_ν(x) = (1/π)∫_0^π cos(νθ − x sin θ)dθ − (sin νπ/π)∫_0^∞ e^{−x sinh t − νt}dt`.
pub fn bessel_j_integral(nu: f64, x: f64) -> Result<f64> {
    check(nu, x)?;
    if x == 0.0 {
        return Ok(if nu == 0.0 { 1.0 } else { 0.0 });
    }
    let q = quad();
    let first = quad_angular().integrate(|t: f64| (nu * t - x * t.sin()).cos(), 0.0, PI)? / PI;
    let s = (nu * PI).sin();
    if nu.fract() == 0.0 || s == 0.0 {
        return Ok(first);
    }
    let t_max = tail_cutoff(|t| x * t.sinh() + nu * t);
    let second = q.integrate(|t: f64| (-x * t.sinh() - nu * t).exp(), 0.0, t_max)?;
    Ok(first - s / PI * second)
}

/// `Y_ν(x) = (1/π)∫_0^π sin(x sin θ − νθ)dθ − (1/π)∫_0^∞ (e^{νt} + e^{−νt}cos νπ) e^{−x sinh t}dt`.
pub fn bessel_y_integral(nu: f64, x: f64) -> Result<f64> {
    check(nu, x)?;
    if x == 0.0 {
        return domain("Y is singular at x = 0");
    }
    let q = quad();
    let first = quad_angular().integrate(|t: f64| (x * t.sin() - nu * t).sin(), 0.0, PI)? / PI;
    let c = (nu * PI).cos();
    let t_max = tail_cutoff(|t| x * t.sinh() - nu.abs() * t);
    let second = q.integrate(
        |t: f64| (nu * t - x * t.sinh()).exp() + c * (-nu * t - x * t.sinh()).exp(),
        0.0,
        t_max,
    )?;
    Ok(first - second / PI)
}

/// `K_ν(x) = ∫_0^∞ e^{−x cosh t} cosh νt dt`, `x > 0`.
pub fn bessel_k_integral(nu: f64, x: f64) -> Result<f64> {
    check(nu, x)?;
    if x == 0.0 {
        return domain("K is singular at x = 0");
    }
    let t_max = tail_cutoff(|t| x * (t.cosh() - 1.0) - nu.abs() * t);
    // e^{−x} factored out so large x does not underflow inside the integrand
    let scaled = quad().integrate(|t: f64| (-x * (t.cosh() - 1.0)).exp() * (nu * t).cosh(), 0.0, t_max)?;
    Ok(scaled * (-x).exp())
}

/// `H^{(1)}_ν(x) = J_ν(x) + i Y_ν(x)`.
pub fn hankel1(nu: f64, x: f64) -> Result<Complex64> {
    Ok(Complex64::new(bessel_j_integral(nu, x)?, bessel_y_integral(nu, x)?))
}
