//! Energy-convolution identity for free Green functions.
//!
//! With `G(E) = (1/iħ)∫_0^∞ e^{iEt/ħ}K(t)dt` and a propagator that factorizes
//! over particles, `G_N(E) = (i/2π)∫G_{N−M}(E − E')G_M(E')dE'`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::contour::green_closed_form;
use super::integrate::Quadrature;
use crate::ensemble::{Potential, SystemSpec};
use crate::error::{domain, guard, Error, Result};

/// Largest `N·D` accepted by [`green_convolution_check`].
pub const MAX_CONVOLUTION_DOF: usize = 8;

/// Tail cutoff: the evanescent factor `e^{−κr}` has fallen below `e^{−TAIL}`.
const TAIL: f64 = 45.0;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvolutionCheck {
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub rel_error: f64,
}

/// Compares `G_N(x, x'; E)` with the convolution of the Green functions of the
/// first `N − M` particles and the last `M`, all free.
pub fn green_convolution_check(
    spec: &SystemSpec,
    m: usize,
    energy: f64,
    x: &[f64],
    x_prime: &[f64],
    tol: f64,
) -> Result<ConvolutionCheck> {
    if !matches!(spec.potential(), Potential::Zero) {
        return Err(Error::Unsupported("the convolution identity is checked for free particles".into()));
    }
    guard("convolution N·D", spec.dof(), MAX_CONVOLUTION_DOF)?;
    spec.check_config(x)?;
    spec.check_config(x_prime)?;
    let n = spec.n_particles();
    if m > n {
        return domain(format!("subsystem size {m} exceeds N = {n}"));
    }
    if energy == 0.0 {
        return domain("E = 0 is a branch point of the free Green function");
    }
    let dim = spec.spatial_dim();
    let (mass, hbar) = (spec.mass(), spec.hbar());
    let split = (n - m) * dim;
    let dist = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(p, q)| (p - q) * (p - q)).sum::<f64>().sqrt();
    let r_y = dist(&x[..split], &x_prime[..split]);
    let r_z = dist(&x[split..], &x_prime[split..]);
    let lhs = green_closed_form(spec.dof(), mass, hbar, r_y.hypot(r_z), energy)?;
    if m == 0 || m == n {
        return Ok(ConvolutionCheck { lhs, rhs: lhs, rel_error: 0.0 });
    }
    if !(r_y > 0.0 && r_z > 0.0) {
        return domain("both subsystems need a nonzero separation");
    }
    let n_y = split;
    let n_z = m * dim;
    // energies beyond which one factor is evanescent with κr > TAIL
    let tail = |r: f64| (TAIL / r).powi(2) * hbar * hbar / (2.0 * mass);
    let lo = energy.min(0.0) - tail(r_z);
    let hi = energy.max(0.0) + tail(r_y);
    let mut points = vec![lo, energy.min(0.0), energy.max(0.0), hi];
    points.dedup();
    let integrand = |e: f64| -> Complex64 {
        // a node can land exactly on a turning point; the singularity there is integrable
        let e = if e == 0.0 || e == energy { e.next_up() } else { e };
        let gy = green_closed_form(n_y, mass, hbar, r_y, energy - e);
        let gz = green_closed_form(n_z, mass, hbar, r_z, e);
        match (gy, gz) {
            (Ok(a), Ok(b)) => a * b,
            _ => Complex64::new(f64::NAN, f64::NAN),
        }
    };
    let integral = Quadrature::new(tol).with_max_intervals(50_000).integrate_pieces(integrand, &points)?;
    if !integral.re.is_finite() || !integral.im.is_finite() {
        return Err(Error::Quadrature("convolution integrand was not finite".into()));
    }
    let rhs = Complex64::new(0.0, 1.0 / (2.0 * std::f64::consts::PI)) * integral;
    Ok(ConvolutionCheck { lhs, rhs, rel_error: (lhs - rhs).norm() / lhs.norm() })
}
