use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use super::dos::log_config_integral;
use super::potential::Potential;
use super::system::SystemSpec;
use super::thermo::energy_to_beta;
use crate::error::{domain, Error, Result};
use crate::oracles::integrate::Quadrature;

fn inside_box(spec: &SystemSpec, x: &[f64]) -> bool {
    let l = spec.box_side();
    x.iter().all(|&v| (0.0..=l).contains(&v))
}

/// Microcanonical configuration density `p^{2d}/∫dx p^{2d}`, `p = √(2m(E − V))`.
///
/// For the zero potential the configuration space is the box `[0, L]^{N·D}`.
pub fn microcanonical_coord_density(spec: &SystemSpec, x: &[f64], energy: f64) -> Result<f64> {
    spec.check_energy(energy)?;
    let v = spec.potential_energy(x)?;
    if let Potential::Zero = spec.potential() {
        return Ok(if inside_box(spec, x) {
            (-(spec.n_particles() as f64) * spec.box_volume().ln()).exp()
        } else {
            0.0
        });
    }
    if !(v < energy) {
        return Ok(0.0);
    }
    let d = spec.order().value();
    Ok((d * (energy - v).ln() - log_config_integral(spec, energy)?).exp())
}

/// Canonical configuration density `e^{−βV(x)}/∫dx e^{−βV}`.
pub fn canonical_coord_density(spec: &SystemSpec, x: &[f64], beta: f64) -> Result<f64> {
    if !(beta > 0.0) || !beta.is_finite() {
        return domain(format!("beta must be positive and finite, got {beta}"));
    }
    let v = spec.potential_energy(x)?;
    let n = spec.n_particles() as f64;
    match spec.potential() {
        Potential::Zero => Ok(if inside_box(spec, x) { (-n * spec.box_volume().ln()).exp() } else { 0.0 }),
        Potential::Harmonic { omega, .. } => {
            let log_norm = 0.5 * spec.dof() as f64 * (beta * spec.mass() * omega * omega / (2.0 * PI)).ln();
            Ok((log_norm - beta * v).exp())
        }
        Potential::Table(t) => {
            if !v.is_finite() {
                return Ok(0.0);
            }
            let shift = spec.potential().one_body_minimum();
            let z = t.boltzmann_integral(beta, shift);
            Ok((-beta * (v - n * shift) - n * z.ln()).exp())
        }
    }
}

/// One-coordinate marginals of the microcanonical and canonical densities
/// at matched `β`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MarginalComparison {
    pub beta: f64,
    pub grid: Vec<f64>,
    pub microcanonical: Vec<f64>,
    pub canonical: Vec<f64>,
    /// `max |p_micro − p_can| / max p_can` over the grid.
    pub sup_difference: f64,
}

/// Marginal of the first coordinate for the zero or harmonic potential.
///
/// For the harmonic well the microcanonical marginal is
/// `∝ (1 − s²/X²)^{N·D − 3/2}` with `X² = 2E/(mω²)`; its normalization is
/// obtained by quadrature. The canonical marginal is Gaussian with variance
/// `1/(βmω²)`.
pub fn coordinate_marginals(spec: &SystemSpec, energy: f64, n_grid: usize) -> Result<MarginalComparison> {
    if n_grid < 2 {
        return domain("n_grid must be at least 2");
    }
    let pair = energy_to_beta(spec, energy)?;
    let beta = pair.beta;
    match spec.potential() {
        Potential::Zero => {
            let l = spec.box_side();
            let grid: Vec<f64> = (0..n_grid).map(|i| l * i as f64 / (n_grid - 1) as f64).collect();
            let flat = vec![1.0 / l; n_grid];
            Ok(MarginalComparison { beta, grid, microcanonical: flat.clone(), canonical: flat, sup_difference: 0.0 })
        }
        Potential::Harmonic { omega, .. } => {
            let n = spec.dof();
            if n < 2 {
                return domain("the harmonic marginal needs N·D >= 2");
            }
            let c = spec.potential().center_component(0);
            let k = spec.mass() * omega * omega;
            let big_x = (2.0 * energy / k).sqrt();
            let sigma = (1.0 / (beta * k)).sqrt();
            let p = n as f64 - 1.5;
            // s = X sin θ
            let norm = big_x
                * Quadrature::new(1e-13).integrate(|t: f64| t.cos().powf(2.0 * p + 1.0), -FRAC_PI_2, FRAC_PI_2)?;
            let half = big_x.min(8.0 * sigma);
            let mut grid = Vec::with_capacity(n_grid);
            let mut micro = Vec::with_capacity(n_grid);
            let mut canon = Vec::with_capacity(n_grid);
            for i in 0..n_grid {
                let s = -half + 2.0 * half * i as f64 / (n_grid - 1) as f64;
                let u = 1.0 - (s / big_x).powi(2);
                grid.push(c + s);
                micro.push(if u > 0.0 { u.powf(p) / norm } else { 0.0 });
                canon.push((-0.5 * s * s / (sigma * sigma)).exp() / (sigma * (2.0 * PI).sqrt()));
            }
            let peak = canon.iter().copied().fold(0.0, f64::max);
            let sup = micro.iter().zip(&canon).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max) / peak;
            Ok(MarginalComparison { beta, grid, microcanonical: micro, canonical: canon, sup_difference: sup })
        }
        Potential::Table(_) => Err(Error::Unsupported(
            "closed-form marginals exist for zero and harmonic potentials only".into(),
        )),
    }
}
