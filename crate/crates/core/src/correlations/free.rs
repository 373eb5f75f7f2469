use super::shell::{distance2, EnergyShell, KernelForm};
use super::CorrelationResult;
use crate::ensemble::SystemSpec;
use crate::error::{domain, Result};

impl EnergyShell {
    /// `⟨ψ(x)ψ*(x+r)⟩` with `k` taken at `x + r/2`.
    pub fn correlation(&self, x: &[f64], r_vec: &[f64], form: KernelForm) -> Result<CorrelationResult> {
        if r_vec.len() != x.len() {
            return domain("displacement and configuration lengths differ");
        }
        let x_prime: Vec<f64> = x.iter().zip(r_vec).map(|(a, r)| a + r).collect();
        let k = self.midpoint_wavenumber(x, &x_prime)?;
        if !k.is_propagating() {
            return self.assemble(k, 0.0);
        }
        let r = distance2(x, &x_prime).sqrt();
        let kernel = self.kernel(form, k.value, r)?;
        self.assemble(k, kernel)
    }
}

/// Microcanonical correlation `(1/ρ)(m/2πħ²)(k²/2π)^d J_d(kr)/(kr)^d`.
pub fn correlation_free(spec: &SystemSpec, x: &[f64], r_vec: &[f64], energy: f64) -> Result<CorrelationResult> {
    EnergyShell::new(spec, energy)?.correlation(x, r_vec, KernelForm::Bessel)
}

/// Large-`N` form `(1/ρ)(m/(2πħ² d!))(k²/4π)^d e^{−k²r²/4(d+1)}`.
pub fn correlation_large_n(spec: &SystemSpec, x: &[f64], r_vec: &[f64], energy: f64) -> Result<CorrelationResult> {
    EnergyShell::new(spec, energy)?.correlation(x, r_vec, KernelForm::Gaussian)
}
