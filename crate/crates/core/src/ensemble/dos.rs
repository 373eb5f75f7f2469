use std::f64::consts::{FRAC_PI_2, LN_2, PI};

use serde::{Deserialize, Serialize};

use super::potential::Potential;
use super::system::SystemSpec;
use crate::error::{Error, Result};
use crate::oracles::integrate::{mc_integrate, Quadrature, SamplingDomain};
use crate::specfun::log_gamma;

/// Seed used when a table potential needs a Monte Carlo reference DOS.
pub const REFERENCE_SEED: u64 = 0x5eed_d05;
/// Sample count used when a table potential needs a Monte Carlo reference DOS.
pub const REFERENCE_SAMPLES: usize = 100_000;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "kebab-case")]
pub enum DosMethod {
    /// Gamma-function closed form; zero potential only.
    AnalyticFree,
    /// One-dimensional quadratures; zero and harmonic potentials.
    Quadrature,
    /// Uniform sampling of configuration space.
    MonteCarlo { seed: u64, n_samples: usize },
}

/// Classical density of states with its uncertainty (0 for deterministic methods).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DosEstimate {
    pub value: f64,
    pub log_value: f64,
    pub std_error: f64,
}

impl DosEstimate {
    fn exact(log_value: f64) -> Self {
        DosEstimate {
            value: log_value.exp(),
            log_value,
            std_error: 0.0,
        }
    }
}

/// `ln(m/2πħ²)`.
fn log_two_pi_unit(spec: &SystemSpec) -> f64 {
    (spec.mass() / (2.0 * PI * spec.hbar() * spec.hbar())).ln()
}

/// `ρ_cl(E) = ∫dx (m/2πħ²)(k²/4π)^d / Γ(d+1)` over the allowed region.
pub fn classical_dos(spec: &SystemSpec, energy: f64, method: DosMethod) -> Result<DosEstimate> {
    spec.check_energy(energy)?;
    let d = spec.order().value();
    let log_pref = (d + 1.0) * log_two_pi_unit(spec) - log_gamma(d + 1.0)?;
    match method {
        DosMethod::AnalyticFree => match spec.potential() {
            Potential::Zero => {
                let half_n = spec.dof() as f64 / 2.0;
                let n = spec.n_particles() as f64;
                Ok(DosEstimate::exact(
                    n * spec.box_volume().ln() + half_n * log_two_pi_unit(spec)
                        + (half_n - 1.0) * energy.ln()
                        - log_gamma(half_n)?,
                ))
            }
            _ => Err(Error::Unsupported(
                "the analytic density of states covers the zero potential only".into(),
            )),
        },
        DosMethod::Quadrature => match spec.potential() {
            Potential::Zero => free_dos_by_quadrature(spec, energy).map(DosEstimate::exact),
            Potential::Harmonic { omega, .. } => {
                let log_int = harmonic_config_integral(spec, *omega, energy)?;
                Ok(DosEstimate::exact(log_pref + log_int))
            }
            Potential::Table(_) => Err(Error::Unsupported(
                "quadrature density of states needs a separable potential; use monte-carlo".into(),
            )),
        },
        DosMethod::MonteCarlo { seed, n_samples } => {
            let (log_scale, est) = config_integral_mc(spec, energy, seed, n_samples)?;
            if !(est.estimate > 0.0) {
                return Err(Error::NonConvergence(format!(
                    "no allowed configurations sampled at E = {energy}"
                )));
            }
            let log_value = log_pref + log_scale + est.estimate.ln();
            let value = log_value.exp();
            Ok(DosEstimate {
                value,
                log_value,
                std_error: value * est.std_error / est.estimate,
            })
        }
    }
}

/// The density of states used to normalize correlations: analytic for the
/// zero potential, quadrature for the harmonic well and a fixed-seed Monte
/// Carlo estimate for tables.
pub fn reference_dos(spec: &SystemSpec, energy: f64) -> Result<DosEstimate> {
    let method = match spec.potential() {
        Potential::Zero => DosMethod::AnalyticFree,
        Potential::Harmonic { .. } => DosMethod::Quadrature,
        Potential::Table(_) => DosMethod::MonteCarlo {
            seed: REFERENCE_SEED,
            n_samples: REFERENCE_SAMPLES,
        },
    };
    classical_dos(spec, energy, method)
}

/// `ln ∫dx (E − V(x))^d` over the allowed region, consistent with
/// [`reference_dos`].
pub(crate) fn log_config_integral(spec: &SystemSpec, energy: f64) -> Result<f64> {
    let rho = reference_dos(spec, energy)?;
    let d = spec.order().value();
    Ok(rho.log_value - (d + 1.0) * log_two_pi_unit(spec) + log_gamma(d + 1.0)?)
}

/// `ln` of the unit-ball volume in `n` dimensions, built from the slice
/// integrals `∫_{−π/2}^{π/2} cos^{j+1}θ dθ` rather than the Gamma function.
pub(crate) fn log_unit_ball_volume(n: usize) -> Result<f64> {
    let q = Quadrature::new(1e-14);
    let mut acc = 0.0;
    for j in 0..n {
        let slice = q.integrate(|t: f64| t.cos().powi(j as i32 + 1), -FRAC_PI_2, FRAC_PI_2)?;
        acc += slice.ln();
    }
    Ok(acc)
}

/// Free gas through the momentum shell: `ρ = (n/2E)·V^N·c_n(2mE)^{n/2}/(2πħ)^n`.
fn free_dos_by_quadrature(spec: &SystemSpec, energy: f64) -> Result<f64> {
    let n = spec.dof();
    let nf = n as f64;
    Ok((nf / (2.0 * energy)).ln()
        + spec.n_particles() as f64 * spec.box_volume().ln()
        + log_unit_ball_volume(n)?
        + 0.5 * nf * (2.0 * spec.mass() * energy).ln()
        - nf * (2.0 * PI * spec.hbar()).ln())
}

/// `ln ∫dx (E − V)^d` for the isotropic well, reduced to
/// `n c_n R^n E^d ∫_0^1 u^{n−1}(1−u²)^d du` with `R² = 2E/(mω²)`.
fn harmonic_config_integral(spec: &SystemSpec, omega: f64, energy: f64) -> Result<f64> {
    let n = spec.dof();
    let nf = n as f64;
    let d = spec.order().value();
    // u = sin θ turns the radial factor into 2^{1−n}∫_0^{π/2} sin^{n−1}(2θ) dθ.
    let radial = Quadrature::new(1e-14)
        .integrate(|t: f64| (2.0 * t).sin().powi(n as i32 - 1), 0.0, FRAC_PI_2)?;
    let log_radius = 0.5 * (2.0 * energy / (spec.mass() * omega * omega)).ln();
    Ok(nf.ln() + log_unit_ball_volume(n)? + nf * log_radius + d * energy.ln() + radial.ln()
        - (nf - 1.0) * LN_2)
}

/// Region enclosing every allowed configuration, for uniform sampling.
pub(crate) fn sampling_domain(spec: &SystemSpec, energy: f64) -> SamplingDomain {
    let n = spec.dof();
    let dim = spec.spatial_dim();
    match spec.potential() {
        Potential::Zero => SamplingDomain::HyperRect {
            lower: vec![0.0; n],
            upper: vec![spec.box_side(); n],
        },
        Potential::Harmonic { omega, .. } => SamplingDomain::Ball {
            center: (0..n).map(|i| spec.potential().center_component(i % dim)).collect(),
            radius: (2.0 * energy / (spec.mass() * omega * omega)).sqrt(),
        },
        Potential::Table(t) => {
            let (lo, hi) = (t.lower(), t.upper());
            SamplingDomain::HyperRect {
                lower: (0..n).map(|i| lo[i % dim]).collect(),
                upper: (0..n).map(|i| hi[i % dim]).collect(),
            }
        }
    }
}

/// Monte Carlo `∫dx ((E − V)/E_s)^d` with `E_s = E − V_min`; returns `(d ln E_s, estimate)`.
pub(crate) fn config_integral_mc(
    spec: &SystemSpec,
    energy: f64,
    seed: u64,
    n_samples: usize,
) -> Result<(f64, crate::oracles::integrate::McEstimate)> {
    let d = spec.order().value();
    let scale = energy - spec.potential_minimum();
    let dom = sampling_domain(spec, energy);
    let est = mc_integrate(
        |x| {
            let v = spec.potential_energy(x).unwrap_or(f64::INFINITY);
            if v < energy {
                ((energy - v) / scale).powf(d)
            } else {
                0.0
            }
        },
        &dom,
        seed,
        n_samples,
    )?;
    Ok((d * scale.ln(), est))
}
