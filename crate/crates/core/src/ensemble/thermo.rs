use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::potential::Potential;
use super::system::SystemSpec;
use crate::error::{domain, Error, Result};
use crate::oracles::integrate::seeded_chunks;

const DAMPING: f64 = 0.5;
const MAX_ITERATIONS: usize = 200;
const RESIDUAL_TOL: f64 = 1e-6;

/// A microcanonical energy and the canonical `β` it corresponds to.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnergyBetaPair {
    pub energy: f64,
    pub beta: f64,
    pub mean_potential: f64,
}

/// How `⟨V⟩_β` is evaluated.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "kebab-case")]
pub enum MeanPotentialMethod {
    /// Closed forms for zero and harmonic potentials, cellwise Gauss–Legendre
    /// for tables.
    #[default]
    Auto,
    MonteCarlo { seed: u64, n_samples: usize },
}

fn check_beta(beta: f64) -> Result<()> {
    if beta > 0.0 && beta.is_finite() {
        Ok(())
    } else {
        domain(format!("beta must be positive and finite, got {beta}"))
    }
}

/// Canonical average `⟨V⟩_β` of the total potential.
pub fn mean_potential(spec: &SystemSpec, beta: f64, method: MeanPotentialMethod) -> Result<f64> {
    check_beta(beta)?;
    mean_potential_in(spec, beta, method, beta)
}

/// `reference_beta` fixes the sampling window for Monte Carlo on the
/// harmonic well, so that estimates are smooth in `beta` during a solve.
fn mean_potential_in(
    spec: &SystemSpec,
    beta: f64,
    method: MeanPotentialMethod,
    reference_beta: f64,
) -> Result<f64> {
    let n = spec.n_particles() as f64;
    match (spec.potential(), method) {
        (Potential::Zero, _) => Ok(0.0),
        (Potential::Harmonic { .. }, MeanPotentialMethod::Auto) => Ok(spec.dof() as f64 / (2.0 * beta)),
        (Potential::Table(t), MeanPotentialMethod::Auto) => {
            let shift = spec.potential().one_body_minimum();
            let z = t.boltzmann_integral(beta, shift);
            if !(z > 0.0) || !z.is_finite() {
                return Err(Error::NonConvergence(format!("table partition function is {z} at beta {beta}")));
            }
            Ok(n * t.boltzmann_moment(beta, shift) / z)
        }
        (pot, MeanPotentialMethod::MonteCarlo { seed, n_samples }) => {
            if n_samples == 0 {
                return domain("n_samples must be positive");
            }
            let dim = spec.spatial_dim();
            let (lower, upper): (Vec<f64>, Vec<f64>) = match pot {
                Potential::Harmonic { omega, .. } => {
                    let half = 12.0 / (reference_beta * spec.mass() * omega * omega).sqrt();
                    (0..dim)
                        .map(|a| {
                            let c = pot.center_component(a);
                            (c - half, c + half)
                        })
                        .unzip()
                }
                Potential::Table(t) => (t.lower(), t.upper()),
                Potential::Zero => unreachable!(),
            };
            let shift = pot.one_body_minimum();
            let mass = spec.mass();
            let parts = seeded_chunks(seed, n_samples, |rng, count| {
                let mut y = vec![0.0; dim];
                let (mut w_sum, mut wv_sum) = (0.0, 0.0);
                for _ in 0..count {
                    for ((yi, l), u) in y.iter_mut().zip(&lower).zip(&upper) {
                        *yi = l + (u - l) * rng.random::<f64>();
                    }
                    let v = pot.one_body(mass, &y);
                    let w = (-beta * (v - shift)).exp();
                    w_sum += w;
                    wv_sum += w * v;
                }
                (w_sum, wv_sum)
            });
            let (w, wv) = parts.iter().fold((0.0, 0.0), |a, p| (a.0 + p.0, a.1 + p.1));
            if !(w > 0.0) {
                return Err(Error::NonConvergence("all Boltzmann weights vanished".into()));
            }
            Ok(n * wv / w)
        }
    }
}

/// `E(β) = ⟨V⟩_β + N·D/(2β)`.
pub fn beta_to_energy(spec: &SystemSpec, beta: f64, method: MeanPotentialMethod) -> Result<f64> {
    Ok(mean_potential(spec, beta, method)? + spec.dof() as f64 / (2.0 * beta))
}

/// Solves `E − ⟨V⟩_β = N·D/(2β)` with the default averaging method.
pub fn energy_to_beta(spec: &SystemSpec, energy: f64) -> Result<EnergyBetaPair> {
    energy_to_beta_with(spec, energy, MeanPotentialMethod::Auto)
}

/// Damped fixed-point solve of `β = N·D / (2(E − ⟨V⟩_β))`.
pub fn energy_to_beta_with(
    spec: &SystemSpec,
    energy: f64,
    method: MeanPotentialMethod,
) -> Result<EnergyBetaPair> {
    spec.check_energy(energy)?;
    let n = spec.dof() as f64;
    let scale = energy.abs().max(energy - spec.potential_minimum());
    let mut beta = n / (2.0 * (energy - spec.potential_minimum()));
    let reference_beta = beta;
    for _ in 0..MAX_ITERATIONS {
        let mv = mean_potential_in(spec, beta, method, reference_beta)?;
        let kinetic = energy - mv;
        let residual = kinetic - n / (2.0 * beta);
        if residual.abs() <= 1e-14 * scale {
            return Ok(EnergyBetaPair { energy, beta, mean_potential: mv });
        }
        let target = if kinetic > 0.0 { n / (2.0 * kinetic) } else { 2.0 * beta };
        let next = (1.0 - DAMPING) * beta + DAMPING * target;
        if (next - beta).abs() <= 1e-15 * beta {
            break;
        }
        beta = next;
    }
    let mv = mean_potential_in(spec, beta, method, reference_beta)?;
    let residual = energy - mv - n / (2.0 * beta);
    if residual.abs() <= RESIDUAL_TOL * scale {
        Ok(EnergyBetaPair { energy, beta, mean_potential: mv })
    } else {
        Err(Error::NonConvergence(format!(
            "energy-to-beta residual {residual:e} after {MAX_ITERATIONS} iterations"
        )))
    }
}

/// `λ = √(2πβħ²/m)`.
pub fn thermal_wavelength(spec: &SystemSpec, beta: f64) -> Result<f64> {
    check_beta(beta)?;
    Ok((2.0 * PI * beta * spec.hbar() * spec.hbar() / spec.mass()).sqrt())
}

/// Free-gas canonical density matrix `e^{−πr²/λ²}/V^N`.
pub fn canonical_density_matrix_free(spec: &SystemSpec, r: f64, beta: f64) -> Result<f64> {
    if !(r >= 0.0) {
        return domain(format!("distance must be >= 0, got {r}"));
    }
    let lambda = thermal_wavelength(spec, beta)?;
    Ok((-PI * r * r / (lambda * lambda) - spec.n_particles() as f64 * spec.box_volume().ln()).exp())
}

/// Complex stationary-phase time `t* = −i·N·D·ħ / (2(E − V(x)))`.
pub fn stationary_phase_time(spec: &SystemSpec, x: &[f64], energy: f64) -> Result<Complex64> {
    let v = spec.potential_energy(x)?;
    if !(energy > v) {
        return domain(format!("stationary phase needs E > V(x); got E = {energy}, V = {v}"));
    }
    Ok(Complex64::new(0.0, -(spec.dof() as f64) * spec.hbar() / (2.0 * (energy - v))))
}
