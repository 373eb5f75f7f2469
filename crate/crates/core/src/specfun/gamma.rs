use crate::error::{domain, Result};

/// `ln Γ(z)` for `z > 0`.
pub fn log_gamma(z: f64) -> Result<f64> {
    if !(z > 0.0) || !z.is_finite() {
        return domain(format!("log_gamma requires z > 0, got {z}"));
    }
    if z == 1.0 || z == 2.0 {
        return Ok(0.0);
    }
    // Shift into the range where the Stirling series is accurate to ~1e-17.
    let mut shift = 0.0f64;
    let mut prod = 1.0f64;
    let mut w = z;
    while w < 10.0 {
        prod *= w;
        if prod > 1e280 {
            shift += prod.ln();
            prod = 1.0;
        }
        w += 1.0;
    }
    shift += prod.ln();
    Ok(stirling_series(w) - shift)
}

fn stirling_series(z: f64) -> f64 {
    const COEFFS: [f64; 7] = [
        1.0 / 12.0,
        -1.0 / 360.0,
        1.0 / 1260.0,
        -1.0 / 1680.0,
        1.0 / 1188.0,
        -691.0 / 360_360.0,
        1.0 / 156.0,
    ];
    let inv = 1.0 / z;
    let inv2 = inv * inv;
    let mut corr = 0.0;
    let mut p = inv;
    for c in COEFFS {
        corr += c * p;
        p *= inv2;
    }
    (z - 0.5) * z.ln() - z + 0.5 * (2.0 * std::f64::consts::PI).ln() + corr
}

/// `ln[(d+1)(d+2)···(d+m)]`, the log of the rising factorial `(d+1)_m`.
///
/// Returns 0 for `m = 0`. Requires `d > -1`.
pub fn pochhammer_log(d: f64, m: usize) -> Result<f64> {
    if !(d > -1.0) {
        return domain(format!("pochhammer_log requires d > -1, got {d}"));
    }
    if m <= 256 {
        Ok((1..=m).map(|i| (d + i as f64).ln()).sum())
    } else {
        Ok(log_gamma(d + m as f64 + 1.0)? - log_gamma(d + 1.0)?)
    }
}

/// Stirling's form `d ln d − d + ½ ln(2πd)` for `ln Γ(d+1)`.
pub fn stirling_log_factorial(d: f64) -> Result<f64> {
    if !(d > 0.0) {
        return domain(format!("Stirling form requires d > 0, got {d}"));
    }
    Ok(d * d.ln() - d + 0.5 * (2.0 * std::f64::consts::PI * d).ln())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorial_values() {
        assert_eq!(log_gamma(1.0).unwrap(), 0.0);
        assert!((log_gamma(5.0).unwrap() - 24f64.ln()).abs() < 1e-14);
        let mut fact = 1.0f64;
        for n in 1..=30u32 {
            fact *= f64::from(n);
            let lg = log_gamma(f64::from(n) + 1.0).unwrap();
            assert!((lg - fact.ln()).abs() < 1e-12 * fact.ln().max(1.0), "n = {n}");
        }
    }

    #[test]
    fn half_integer_gamma() {
        // Γ(1/2) = √π
        let lg = log_gamma(0.5).unwrap();
        assert!((lg - 0.5 * std::f64::consts::PI.ln()).abs() < 1e-14);
    }

    #[test]
    fn domain_errors() {
        assert!(log_gamma(0.0).is_err());
        assert!(log_gamma(-1.5).is_err());
        assert!(pochhammer_log(-1.0, 2).is_err());
    }

    #[test]
    fn pochhammer_direct_product() {
        let got = pochhammer_log(0.5, 3).unwrap();
        assert!((got - (1.5f64 * 2.5 * 3.5).ln()).abs() < 1e-15);
        assert_eq!(pochhammer_log(7.0, 0).unwrap(), 0.0);
        // both branches agree
        let small: f64 = (1..=300).map(|i| (2.5 + i as f64).ln()).sum();
        assert!((pochhammer_log(2.5, 300).unwrap() - small).abs() < 1e-10 * small);
    }

    #[test]
    fn stirling_at_hundred() {
        let exact = log_gamma(101.0).unwrap();
        let approx = stirling_log_factorial(100.0).unwrap();
        let rel = (approx - exact).exp() - 1.0;
        assert!(rel.abs() < 1e-3, "relative error {rel}");
    }
}
