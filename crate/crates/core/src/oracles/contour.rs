//! Energy-domain Green function from the short-time propagator.
//!
//! `G(x, x'; E) = (1/iħ)∫_0^∞ dt e^{iEt/ħ} (m/2πiħt)^{n/2} e^{i m r²/2ħt − iVt/ħ}`
//! is evaluated numerically on a deformed contour and compared with the
//! closed form `−(im/2ħ²)(k/2πr)^d H_d^{(1)}(kr)`.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::bessel_integral::{bessel_k_integral, hankel1};
use super::integrate::Quadrature;
use crate::ensemble::SystemSpec;
use crate::error::{domain, Result};

/// Largest kernel order accepted by the time integral.
pub const MAX_CONTOUR_ORDER: f64 = 3.0;

struct Geometry {
    n: f64,
    mass: f64,
    hbar: f64,
    r: f64,
    kinetic: f64,
}

fn geometry(spec: &SystemSpec, x: &[f64], r_vec: &[f64], energy: f64) -> Result<Geometry> {
    if r_vec.len() != x.len() {
        return domain("displacement and configuration lengths differ");
    }
    let mid: Vec<f64> = x.iter().zip(r_vec).map(|(a, r)| a + 0.5 * r).collect();
    let v = spec.potential_energy(&mid)?;
    let r = r_vec.iter().map(|c| c * c).sum::<f64>().sqrt();
    if !(r > 0.0) {
        return domain("the energy Green function is singular at r = 0");
    }
    if energy == v {
        return domain("the midpoint lies on the turning surface");
    }
    Ok(Geometry {
        n: spec.dof() as f64,
        mass: spec.mass(),
        hbar: spec.hbar(),
        r,
        kinetic: energy - v,
    })
}

/// Closed-form retarded Green function for `n` free coordinates at
/// separation `r` and kinetic energy `E − V` (evanescent when negative).
pub fn green_closed_form(n: usize, mass: f64, hbar: f64, r: f64, kinetic: f64) -> Result<Complex64> {
    if !(r > 0.0) || kinetic == 0.0 {
        return domain("closed form needs r > 0 and E != V");
    }
    let d = n as f64 / 2.0 - 1.0;
    let k = (2.0 * mass * kinetic.abs()).sqrt() / hbar;
    let scale = (k / (2.0 * PI * r)).powf(d);
    if kinetic > 0.0 {
        let h = hankel1(d, k * r)?;
        Ok(Complex64::new(0.0, -mass / (2.0 * hbar * hbar)) * scale * h)
    } else {
        let kd = bessel_k_integral(d, k * r)?;
        Ok(Complex64::new(-mass / (PI * hbar * hbar) * scale * kd, 0.0))
    }
}

/// Closed form at the midpoint potential of `(x, x + r)`.
pub fn hankel_closed_form(spec: &SystemSpec, x: &[f64], r_vec: &[f64], energy: f64) -> Result<Complex64> {
    let g = geometry(spec, x, r_vec, energy)?;
    green_closed_form(spec.dof(), g.mass, g.hbar, g.r, g.kinetic)
}

/// Smallest `S` (by doubling) at which `decay(S) ≥ 60`.
fn cutoff(decay: impl Fn(f64) -> f64) -> f64 {
    let mut s = 1.0;
    while decay(s) < 60.0 && s < 64.0 {
        s *= 2.0;
    }
    s
}

/// Time integral on a deformed contour with rotation angle `θ ∈ (0, π/2)`.
///
/// Propagating case: `t = t_s exp(s + iθ tanh s)` through the saddle
/// `t_s = √(a/ε)`, where `a = mr²/2ħ` and `ε = (E − V)/ħ`; it turns clockwise
/// near `t = 0` and counter-clockwise at large `t`, so both ends decay.
/// Evanescent case: the ray `t = t_s e^{s − iθ}`.
pub fn fourier_time_integral(spec: &SystemSpec, x: &[f64], r_vec: &[f64], energy: f64, theta: f64) -> Result<Complex64> {
    if spec.order().value() > MAX_CONTOUR_ORDER {
        return domain(format!("time integral is limited to d <= {MAX_CONTOUR_ORDER}"));
    }
    if !(theta > 0.0 && theta < PI / 2.0) {
        return domain(format!("rotation angle must lie in (0, π/2), got {theta}"));
    }
    let g = geometry(spec, x, r_vec, energy)?;
    let a = g.mass * g.r * g.r / (2.0 * g.hbar);
    let eps = g.kinetic / g.hbar;
    let half_n = g.n / 2.0;
    let i = Complex64::i();
    // (1/iħ)(m/2πiħ)^{n/2}
    let front = (Complex64::new(0.0, -1.0) / g.hbar)
        * (g.mass / (2.0 * PI * g.hbar)).powf(half_n)
        * Complex64::from_polar(1.0, -PI * half_n / 2.0);
    let q = Quadrature::new(1e-12).with_abs_tol(0.0).with_max_intervals(20_000);
    let integral = if eps > 0.0 {
        let ts = (a / eps).sqrt();
        let omega = 2.0 * (a * eps).sqrt();
        let s_max = cutoff(|s| omega * s.sinh() * (theta * s.tanh()).sin() - half_n * s);
        let f = |s: f64| {
            let w = Complex64::new(s, theta * s.tanh());
            let log_t = ts.ln() + w;
            let jac = Complex64::new(1.0, theta / s.cosh().powi(2));
            ((1.0 - half_n) * log_t + i * omega * w.cosh()).exp() * jac
        };
        q.integrate_pieces(f, &[-s_max, 0.0, s_max])?
    } else {
        let ts = (a / -eps).sqrt();
        let amp = (a * -eps).sqrt();
        let s_max = cutoff(|s| 2.0 * amp * s.cosh() * theta.sin() - half_n * s);
        let rot = Complex64::from_polar(1.0, -theta);
        let f = |s: f64| {
            let t = ts * s.exp() * rot;
            ((1.0 - half_n) * t.ln() + i * (a / t + eps * t)).exp()
        };
        q.integrate_pieces(f, &[-s_max, 0.0, s_max])?
    };
    Ok(front * integral)
}
