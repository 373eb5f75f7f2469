use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use statrs::function::erf::erf;

use super::shell::distance2;
use super::symmetry::Statistics;
use crate::ensemble::{thermal_wavelength, SystemSpec};
use crate::error::{domain, Error, Result};

fn check_beta(beta: f64) -> Result<()> {
    if beta > 0.0 && beta.is_finite() {
        Ok(())
    } else {
        domain(format!("beta must be positive and finite, got {beta}"))
    }
}

fn exchange_sign(stats: Statistics) -> Result<f64> {
    match stats {
        Statistics::Bose => Ok(1.0),
        Statistics::Fermi => Ok(-1.0),
        Statistics::Boltzmann => Err(Error::Unsupported(
            "pair exchange density is defined for bose or fermi statistics".into(),
        )),
    }
}

fn check_point(spec: &SystemSpec, p: &[f64]) -> Result<()> {
    if p.len() != spec.spatial_dim() {
        return domain(format!("single-particle point needs {} components", spec.spatial_dim()));
    }
    Ok(())
}

/// `1 ± e^{−m|x1 − x2|²/(βħ²)}`; the exponent equals `2π|x1 − x2|²/λ²`.
pub fn pair_density_unnormalized(spec: &SystemSpec, x1: &[f64], x2: &[f64], beta: f64, stats: Statistics) -> Result<f64> {
    check_beta(beta)?;
    check_point(spec, x1)?;
    check_point(spec, x2)?;
    let sign = exchange_sign(stats)?;
    let a = spec.mass() / (beta * spec.hbar() * spec.hbar());
    let e = (-a * distance2(x1, x2)).exp();
    Ok(if sign > 0.0 { 1.0 + e } else { -(-a * distance2(x1, x2)).exp_m1() })
}

/// Pair density normalized over two particles in the cube `[0, L]^D`,
/// `L^D = box_volume`.
pub fn pair_density_reduced(spec: &SystemSpec, x1: &[f64], x2: &[f64], beta: f64, stats: Statistics) -> Result<f64> {
    let u = pair_density_unnormalized(spec, x1, x2, beta, stats)?;
    let sign = exchange_sign(stats)?;
    let a = spec.mass() / (beta * spec.hbar() * spec.hbar());
    let l = spec.box_side();
    // ∫_0^L∫_0^L e^{−a(u−v)²} du dv
    let overlap = l * (PI / a).sqrt() * erf(l * a.sqrt()) + (-a * l * l).exp_m1() / a;
    let dim = spec.spatial_dim() as i32;
    Ok(u / (l.powi(2 * dim) + sign * overlap.powi(dim)))
}

/// One-particle reduced density matrix `e^{−πr²/λ²}/V`.
pub fn reduced_density_one_particle(spec: &SystemSpec, y: &[f64], y_prime: &[f64], beta: f64) -> Result<f64> {
    check_point(spec, y)?;
    check_point(spec, y_prime)?;
    let lambda = thermal_wavelength(spec, beta)?;
    Ok((-PI * distance2(y, y_prime) / (lambda * lambda)).exp() / spec.box_volume())
}

/// Both sides of the subsystem Boltzmann factor.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SubsystemFactor {
    /// `(1 − E'/E)^{d_{N−M}}` with `d_{N−M} = (N−M)D/2 − 1`.
    pub exact: f64,
    /// `e^{−βE'}` with `β = N·D/(2E)`.
    pub limit: f64,
}

impl SubsystemFactor {
    pub fn relative_gap(&self) -> f64 {
        (self.exact - self.limit).abs() / self.limit
    }
}

/// Weight of an `M`-particle subsystem holding energy `E'` out of `E`.
pub fn subsystem_boltzmann_factor(spec: &SystemSpec, m: usize, energy: f64, e_sub: f64) -> Result<SubsystemFactor> {
    let n = spec.n_particles();
    if m == 0 || m >= n {
        return domain(format!("subsystem size must satisfy 1 <= M < N = {n}, got {m}"));
    }
    if !(energy > 0.0) || !(e_sub >= 0.0) || !(e_sub < energy) {
        return domain("need 0 <= E' < E and E > 0");
    }
    let dim = spec.spatial_dim() as f64;
    let d_rest = (n - m) as f64 * dim / 2.0 - 1.0;
    let beta = n as f64 * dim / (2.0 * energy);
    Ok(SubsystemFactor {
        exact: (d_rest * (-e_sub / energy).ln_1p()).exp(),
        limit: (-beta * e_sub).exp(),
    })
}
