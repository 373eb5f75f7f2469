use std::f64::consts::{LN_2, PI};

use serde::{Deserialize, Serialize};

use crate::ensemble::{reference_dos, SystemSpec, WaveNumber};
use crate::error::Result;
use crate::specfun::{log_gamma, normalized_kernel, LogSigned};

/// A correlation value together with the pieces it was assembled from.
///
/// `raw_im_g = a(k)/(2^d Γ(d+1)) · kernel_value` and
/// `normalized = raw_im_g / ρ(E)`, with `ρ = exp(log_dos)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorrelationResult {
    pub normalized: f64,
    /// `−(1/π) Im G⁺(x, x'; E)`.
    pub raw_im_g: LogSigned,
    /// `a(k) = (m/2πħ²)(k²/2π)^d`.
    pub prefactor_a_k: LogSigned,
    /// Dimensionless kernel, equal to 1 on the diagonal of the free case.
    pub kernel_value: f64,
    pub log_dos: f64,
}

/// Radial kernel used in place of `Ĵ_d(kr)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KernelForm {
    #[default]
    Bessel,
    /// `e^{−k²r²/4(d+1)}`, the large-`N` limit.
    Gaussian,
}

/// A system at fixed energy with its density of states computed once.
#[derive(Clone, Debug, PartialEq)]
pub struct EnergyShell {
    spec: SystemSpec,
    energy: f64,
    log_dos: f64,
}

impl EnergyShell {
    pub fn new(spec: &SystemSpec, energy: f64) -> Result<Self> {
        let rho = reference_dos(spec, energy)?;
        Ok(EnergyShell {
            spec: spec.clone(),
            energy,
            log_dos: rho.log_value,
        })
    }

    /// Uses a caller-supplied `ln ρ(E)` instead of the reference density of states.
    pub fn with_log_dos(spec: &SystemSpec, energy: f64, log_dos: f64) -> Self {
        EnergyShell {
            spec: spec.clone(),
            energy,
            log_dos,
        }
    }

    pub fn spec(&self) -> &SystemSpec {
        &self.spec
    }

    pub fn energy(&self) -> f64 {
        self.energy
    }

    pub fn log_dos(&self) -> f64 {
        self.log_dos
    }

    /// Wavenumber at the midpoint of `x` and `x'`.
    pub fn midpoint_wavenumber(&self, x: &[f64], x_prime: &[f64]) -> Result<WaveNumber> {
        self.spec.check_config(x)?;
        self.spec.check_config(x_prime)?;
        let mid: Vec<f64> = x.iter().zip(x_prime).map(|(a, b)| 0.5 * (a + b)).collect();
        let v = self.spec.potential_energy(&mid)?;
        Ok(WaveNumber::from_kinetic(&self.spec, self.energy - v))
    }

    /// `γ = k²/(4(d+1))`.
    pub fn gamma(&self, k: f64) -> f64 {
        k * k / (4.0 * (self.spec.order().value() + 1.0))
    }

    /// `ln a(k)`; `−∞` when `k = 0` and `d > 0`.
    pub fn log_prefactor(&self, k: f64) -> f64 {
        let s = &self.spec;
        let d = s.order().value();
        let base = (s.mass() / (2.0 * PI * s.hbar() * s.hbar())).ln();
        if d == 0.0 {
            base
        } else {
            base + d * (k * k / (2.0 * PI)).ln()
        }
    }

    /// Radial kernel at distance `r`, normalized to 1 at `r = 0`.
    pub fn kernel(&self, form: KernelForm, k: f64, r: f64) -> Result<f64> {
        match form {
            KernelForm::Bessel => normalized_kernel(self.spec.order(), k * r),
            KernelForm::Gaussian => Ok((-self.gamma(k) * r * r).exp()),
        }
    }

    /// Assembles a result from a wavenumber and a dimensionless kernel value.
    pub fn assemble(&self, k: WaveNumber, kernel_value: f64) -> Result<CorrelationResult> {
        if !k.is_propagating() {
            return Ok(self.vanishing());
        }
        let d = self.spec.order().value();
        let log_a = self.log_prefactor(k.value);
        let prefactor_a_k = LogSigned::from_log(log_a);
        let diag = LogSigned::from_log(log_a - d * LN_2 - log_gamma(d + 1.0)?);
        let raw_im_g = diag * LogSigned::from_f64(kernel_value);
        let normalized = (raw_im_g / LogSigned::from_log(self.log_dos)).to_f64();
        Ok(CorrelationResult {
            normalized,
            raw_im_g,
            prefactor_a_k,
            kernel_value,
            log_dos: self.log_dos,
        })
    }

    /// Same as [`assemble`](Self::assemble) with the kernel given in log form.
    pub(crate) fn assemble_log(&self, k: WaveNumber, kernel: LogSigned) -> Result<CorrelationResult> {
        if !k.is_propagating() {
            return Ok(self.vanishing());
        }
        let d = self.spec.order().value();
        let log_a = self.log_prefactor(k.value);
        let raw_im_g = LogSigned::from_log(log_a - d * LN_2 - log_gamma(d + 1.0)?) * kernel;
        Ok(CorrelationResult {
            normalized: (raw_im_g / LogSigned::from_log(self.log_dos)).to_f64(),
            raw_im_g,
            prefactor_a_k: LogSigned::from_log(log_a),
            kernel_value: kernel.to_f64(),
            log_dos: self.log_dos,
        })
    }

    /// Forbidden region: the Green function is real, so every piece is zero.
    fn vanishing(&self) -> CorrelationResult {
        CorrelationResult {
            normalized: 0.0,
            raw_im_g: LogSigned::ZERO,
            prefactor_a_k: LogSigned::ZERO,
            kernel_value: 0.0,
            log_dos: self.log_dos,
        }
    }
}

pub(crate) fn distance2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(p, q)| (p - q) * (p - q)).sum()
}
