use serde::{Deserialize, Serialize};

use super::shell::{distance2, EnergyShell, KernelForm};
use super::CorrelationResult;
use crate::ensemble::SystemSpec;
use crate::error::{domain, guard, Result};
use crate::oracles::integrate::Quadrature;
use crate::specfun::{normalized_kernel_complement, BesselOrder, LogSigned};

/// Largest `N` accepted by the `2^N` image sum.
pub const MAX_IMAGE_PARTICLES: usize = 12;

/// A Dirichlet wall on the plane `y = 0`, where `y` is coordinate `axis` of
/// every particle. The physical side is `y ≥ 0`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct WallGeometry {
    pub axis: usize,
}

impl WallGeometry {
    pub fn new(axis: usize) -> Self {
        WallGeometry { axis }
    }

    fn check(&self, spec: &SystemSpec) -> Result<()> {
        if self.axis >= spec.spatial_dim() {
            return domain(format!(
                "wall axis {} out of range for D = {}",
                self.axis,
                spec.spatial_dim()
            ));
        }
        Ok(())
    }

    /// Reflects particle `i` of configuration `x` across the wall.
    pub fn reflect(&self, spec: &SystemSpec, x: &[f64], i: usize) -> Vec<f64> {
        let mut out = x.to_vec();
        let idx = i * spec.spatial_dim() + self.axis;
        out[idx] = -out[idx];
        out
    }

    /// `Δ_i² = |x_i^R − x'_i|² − |x_i − x'_i|² = 4 y_i y'_i` per particle.
    pub fn image_shifts(&self, spec: &SystemSpec, x: &[f64], x_prime: &[f64]) -> Vec<f64> {
        let dim = spec.spatial_dim();
        (0..spec.n_particles())
            .map(|i| 4.0 * x[i * dim + self.axis] * x_prime[i * dim + self.axis])
            .collect()
    }
}

/// Signed image sum with its condition number `Σ|t| / |Σ t|`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ImageSum {
    pub value: f64,
    pub condition: f64,
}

/// `Σ_S (−1)^{|S|} K(√(r² + Σ_{i∈S} Δ_i²))` over all subsets `S`.
///
/// Subsets are visited in Gray-code order; each image distance is formed from
/// scratch in index order, so terms that differ only by a zero shift are
/// bit-identical and cancel exactly. Summation is Neumaier-compensated.
pub fn wall_image_sum(r2: f64, shifts: &[f64], kernel: impl Fn(f64) -> Result<f64>) -> Result<ImageSum> {
    let n = shifts.len();
    guard("wall image particles", n, MAX_IMAGE_PARTICLES)?;
    let (mut sum, mut comp, mut abs_sum) = (0.0f64, 0.0f64, 0.0f64);
    for step in 0u32..(1u32 << n) {
        let subset = step ^ (step >> 1);
        let mut dist2 = r2;
        for (i, s) in shifts.iter().enumerate() {
            if subset >> i & 1 == 1 {
                dist2 += s;
            }
        }
        let mut term = kernel(dist2.max(0.0).sqrt())?;
        if subset.count_ones() % 2 == 1 {
            term = -term;
        }
        abs_sum += term.abs();
        let t = sum + term;
        comp += if sum.abs() >= term.abs() { (sum - t) + term } else { (term - t) + sum };
        sum = t;
    }
    let value = sum + comp;
    Ok(ImageSum {
        value,
        condition: if value == 0.0 { f64::INFINITY } else { abs_sum / value.abs() },
    })
}

impl EnergyShell {
    /// Image-sum correlation between `x` and `x'` in the presence of the wall.
    pub fn wall_exact(
        &self,
        x: &[f64],
        x_prime: &[f64],
        wall: WallGeometry,
        form: KernelForm,
    ) -> Result<CorrelationResult> {
        wall.check(self.spec())?;
        guard("wall image particles", self.spec().n_particles(), MAX_IMAGE_PARTICLES)?;
        let k = self.midpoint_wavenumber(x, x_prime)?;
        if !k.is_propagating() {
            return self.assemble(k, 0.0);
        }
        let shifts = wall.image_shifts(self.spec(), x, x_prime);
        let sum = wall_image_sum(distance2(x, x_prime), &shifts, |r| self.kernel(form, k.value, r))?;
        self.assemble(k, sum.value)
    }

    /// Product form `e^{−γr²} Π_i (1 − e^{−γΔ_i²})`, evaluated in the log domain.
    pub fn wall_product(&self, x: &[f64], x_prime: &[f64], wall: WallGeometry) -> Result<CorrelationResult> {
        wall.check(self.spec())?;
        let k = self.midpoint_wavenumber(x, x_prime)?;
        if !k.is_propagating() {
            return self.assemble(k, 0.0);
        }
        let gamma = self.gamma(k.value);
        let mut kernel = LogSigned::from_log(-gamma * distance2(x, x_prime));
        for s in wall.image_shifts(self.spec(), x, x_prime) {
            kernel = kernel * LogSigned::from_f64(-(-gamma * s).exp_m1());
        }
        self.assemble_log(k, kernel)
    }
}

/// Exact `2^N` image sum with Bessel kernels, `N ≤ 12`.
pub fn wall_correlation_exact(
    spec: &SystemSpec,
    x: &[f64],
    x_prime: &[f64],
    energy: f64,
    wall: WallGeometry,
) -> Result<CorrelationResult> {
    EnergyShell::new(spec, energy)?.wall_exact(x, x_prime, wall, KernelForm::Bessel)
}

/// Large-`N` product form; any `N`.
pub fn wall_correlation_large_n(
    spec: &SystemSpec,
    x: &[f64],
    x_prime: &[f64],
    energy: f64,
    wall: WallGeometry,
) -> Result<CorrelationResult> {
    EnergyShell::new(spec, energy)?.wall_product(x, x_prime, wall)
}

/// `γ = k²/(4(d+1))` for a free gas at energy `E`.
fn free_gamma(spec: &SystemSpec, energy: f64) -> Result<f64> {
    spec.check_energy(energy)?;
    let k2 = energy / spec.kinetic_unit();
    Ok(k2 / (4.0 * (spec.order().value() + 1.0)))
}

/// One-particle density near the wall, `ρ_0(1 − e^{−4γx²})` with
/// `ρ_0 = 1/box_volume`. The wavenumber is that of the free gas at `E`.
pub fn wall_density_profile(spec: &SystemSpec, distance: f64, energy: f64) -> Result<f64> {
    if !(distance >= 0.0) {
        return domain(format!("distance must be >= 0, got {distance}"));
    }
    let gamma = free_gamma(spec, energy)?;
    Ok(-(-4.0 * gamma * distance * distance).exp_m1() / spec.box_volume())
}

/// Distance at which [`wall_density_profile`] reaches half its bulk value.
pub fn wall_half_density_distance(spec: &SystemSpec, energy: f64) -> Result<f64> {
    Ok((std::f64::consts::LN_2 / (4.0 * free_gamma(spec, energy)?)).sqrt())
}

/// One particle in two dimensions near a wall: `1 − J_0(2k·x)`, whose
/// far-field average is 1.
pub fn berry_wall_single(k: f64, x_dist: f64) -> Result<f64> {
    if !(k > 0.0) || !(x_dist >= 0.0) {
        return domain("berry_wall_single needs k > 0 and x >= 0");
    }
    normalized_kernel_complement(BesselOrder::new(0.0)?, 2.0 * k * x_dist)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AverageMethod {
    #[default]
    ClosedForm,
    Quadrature,
}

/// Canonical average over energies of `1 − J_0(ks)`:
/// `∫k(1 − J_0(ks))e^{−βħ²k²/2m}dk / ∫k e^{−βħ²k²/2m}dk = 1 − e^{−ms²/(2βħ²)}`.
pub fn boltzmann_average_wall(spec: &SystemSpec, beta: f64, s: f64, method: AverageMethod) -> Result<f64> {
    if !(beta > 0.0) || !beta.is_finite() || !(s >= 0.0) {
        return domain("boltzmann_average_wall needs beta > 0 and s >= 0");
    }
    let a = beta * spec.hbar() * spec.hbar() / (2.0 * spec.mass());
    match method {
        AverageMethod::ClosedForm => Ok(-(-s * s / (4.0 * a)).exp_m1()),
        AverageMethod::Quadrature => {
            if s == 0.0 {
                return Ok(0.0);
            }
            let d0 = BesselOrder::new(0.0)?;
            let k_max = (80.0 / a).sqrt();
            // split at J_0 half-periods so each panel sees a few oscillations
            let panels = ((k_max * s / std::f64::consts::PI).ceil() as usize).clamp(1, 4000);
            let points: Vec<f64> = (0..=panels).map(|i| k_max * i as f64 / panels as f64).collect();
            let q = Quadrature::new(1e-12).with_abs_tol(1e-300);
            let num = q.integrate_pieces(
                |k: f64| k * normalized_kernel_complement(d0, k * s).unwrap_or(f64::NAN) * (-a * k * k).exp(),
                &points,
            )?;
            Ok(num * 2.0 * a)
        }
    }
}
