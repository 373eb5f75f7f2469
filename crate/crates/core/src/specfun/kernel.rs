use serde::{Deserialize, Serialize};

use super::gamma::log_gamma;
use super::log_signed::LogSigned;
use crate::error::{domain, Error, Result};

/// Relative term size at which the power series is considered converged.
const SERIES_RTOL: f64 = 1e-17;
/// Once the absolute term sum exceeds this, rounding in the alternating
/// series costs more than ~1e-13 and the backward recurrence takes over.
const SERIES_CONDITION_LIMIT: f64 = 1e3;

/// Order `d = N·D/2 − 1` of the Bessel kernel.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BesselOrder(f64);

impl BesselOrder {
    pub fn new(d: f64) -> Result<Self> {
        if !d.is_finite() || d < -0.5 {
            return domain(format!("Bessel order must be finite and >= -1/2, got {d}"));
        }
        Ok(BesselOrder(d))
    }

    /// `d = N·D/2 − 1` for `N` particles in `D` dimensions.
    pub fn from_particles(n_particles: usize, spatial_dim: usize) -> Result<Self> {
        if n_particles == 0 || spatial_dim == 0 {
            return domain("particle count and dimension must be positive");
        }
        Self::new((n_particles * spatial_dim) as f64 / 2.0 - 1.0)
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// True when `2d` is an integer, i.e. the order comes from some `N·D`.
    pub fn is_lattice(self) -> bool {
        (2.0 * self.0).fract() == 0.0
    }
}

impl From<BesselOrder> for f64 {
    fn from(d: BesselOrder) -> f64 {
        d.0
    }
}

fn check_arg(x: f64) -> Result<()> {
    if !(x >= 0.0) || !x.is_finite() {
        return domain(format!("kernel argument must be finite and >= 0, got {x}"));
    }
    Ok(())
}

struct SeriesSum {
    sum: f64,
    abs_sum: f64,
}

/// Pochhammer-form power series `Σ (−x²/4)^m / (m! (d+1)_m)`.
fn power_series(d: f64, x: f64) -> Result<SeriesSum> {
    let q = 0.25 * x * x;
    let cap = (10.0 * (q + d + 20.0)).ceil() as usize;
    let mut term = 1.0f64;
    let mut sum = 1.0f64;
    let mut abs_sum = 1.0f64;
    for m in 1..=cap {
        let mf = m as f64;
        term *= -q / (mf * (d + mf));
        sum += term;
        abs_sum += term.abs();
        let t = term.abs();
        if t == 0.0 || t <= SERIES_RTOL * sum.abs() || t <= 1e-20 * abs_sum {
            return Ok(SeriesSum { sum, abs_sum });
        }
        if !abs_sum.is_finite() {
            break;
        }
    }
    Err(Error::Convergence {
        order: d,
        x,
        terms: cap,
    })
}

/// Neumann-normalized coefficient ratios `c_k = (d+2k)(d+1)_{k−1}/k!`,
/// with `c_0 = 1`, satisfying `Σ c_k J_{d+2k}(x) = (x/2)^d / Γ(d+1)`.
fn neumann_coefficients(d: f64, kmax: usize) -> Vec<f64> {
    let mut c = Vec::with_capacity(kmax + 1);
    c.push(1.0);
    let mut p = 1.0f64; // (d+1)_{k-1} / k!
    for k in 1..=kmax {
        if k > 1 {
            let kf = k as f64;
            p *= (d + kf - 1.0) / kf;
        }
        c.push((d + 2.0 * k as f64) * p);
    }
    c
}

fn miller_once(d: f64, x: f64, start: usize) -> Result<f64> {
    let c = neumann_coefficients(d, start / 2 + 1);
    if c.iter().any(|v| !v.is_finite()) {
        return Err(Error::Convergence {
            order: d,
            x,
            terms: start,
        });
    }
    let mut y_above = 0.0f64;
    let mut y = 1e-30f64;
    let mut norm = if start % 2 == 0 { c[start / 2] * y } else { 0.0 };
    for j in (1..=start).rev() {
        let y_below = 2.0 * (d + j as f64) / x * y - y_above;
        y_above = y;
        y = y_below;
        if (j - 1) % 2 == 0 {
            norm += c[(j - 1) / 2] * y;
        }
        if y.abs() > 1e200 {
            y *= 1e-200;
            y_above *= 1e-200;
            norm *= 1e-200;
        }
    }
    Ok(y / norm)
}

/// Backward recurrence on `J_{d+n}(x)` normalized with the Neumann sum.
fn miller(d: f64, x: f64) -> Result<f64> {
    let mut start = ((x - d).max(0.0) + 2.0 * x.sqrt() + 30.0).ceil() as usize;
    start += start % 2;
    let mut prev = miller_once(d, x, start)?;
    for _ in 0..8 {
        start += 2 * ((x.sqrt().ceil() as usize) + 10);
        let next = miller_once(d, x, start)?;
        if (next - prev).abs() <= 1e-15 + 1e-14 * next.abs() {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::Convergence {
        order: d,
        x,
        terms: start,
    })
}

/// `Ĵ_d(x) = Γ(d+1)(2/x)^d J_d(x)`, normalized so that `Ĵ_d(0) = 1`.
///
/// Uses the Pochhammer power series while its terms stay O(1); when the
/// series becomes ill-conditioned (`x²/4 ≫ d`) it switches to Miller's
/// backward recurrence with the Neumann normalization sum.
pub fn normalized_kernel(d: BesselOrder, x: f64) -> Result<f64> {
    check_arg(x)?;
    if x == 0.0 {
        return Ok(1.0);
    }
    let d = d.value();
    match power_series(d, x) {
        Ok(s) if s.abs_sum <= SERIES_CONDITION_LIMIT => Ok(s.sum),
        Ok(_) | Err(Error::Convergence { .. }) => miller(d, x),
        Err(e) => Err(e),
    }
}

/// `1 − Ĵ_d(x)` without the cancellation at small `x`.
pub fn normalized_kernel_complement(d: BesselOrder, x: f64) -> Result<f64> {
    check_arg(x)?;
    let dv = d.value();
    let q = 0.25 * x * x;
    if q > dv + 1.0 {
        return Ok(1.0 - normalized_kernel(d, x)?);
    }
    // Σ_{m≥1} −t_m: alternating with decreasing terms since q ≤ d + 1.
    let mut term = 1.0f64;
    let mut sum = 0.0f64;
    for m in 1..=200usize {
        let mf = m as f64;
        term *= -q / (mf * (dv + mf));
        sum -= term;
        if term.abs() <= SERIES_RTOL * sum.abs() || term == 0.0 {
            return Ok(sum);
        }
    }
    Err(Error::Convergence {
        order: dv,
        x,
        terms: 200,
    })
}

/// `F_d(x) = J_d(x)/x^d` in log-magnitude/sign form.
///
/// Computed as `Ĵ_d(x) / (2^d Γ(d+1))`, so `x^d` is never formed.
pub fn log_scaled_kernel(d: BesselOrder, x: f64) -> Result<LogSigned> {
    let j = normalized_kernel(d, x)?;
    let dv = d.value();
    let log_norm = dv * std::f64::consts::LN_2 + log_gamma(dv + 1.0)?;
    Ok(LogSigned::from_f64(j) * LogSigned::from_log(-log_norm))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ord(d: f64) -> BesselOrder {
        BesselOrder::new(d).unwrap()
    }

    #[test]
    fn order_construction() {
        assert_eq!(BesselOrder::from_particles(1, 2).unwrap().value(), 0.0);
        assert_eq!(BesselOrder::from_particles(2, 3).unwrap().value(), 2.0);
        assert_eq!(BesselOrder::from_particles(1, 1).unwrap().value(), -0.5);
        assert_eq!(BesselOrder::from_particles(3, 1).unwrap().value(), 0.5);
        assert!(BesselOrder::from_particles(0, 1).is_err());
        assert!(BesselOrder::new(-0.75).is_err());
        assert!(BesselOrder::from_particles(3, 1).unwrap().is_lattice());
        for n in 1..20 {
            for dim in 1..4 {
                let d = BesselOrder::from_particles(n, dim).unwrap();
                assert_eq!(d, ord((n * dim) as f64 / 2.0 - 1.0));
            }
        }
    }

    #[test]
    fn origin_is_exactly_one() {
        for d in [-0.5, 0.0, 0.5, 3.0, 49.0, 199.0] {
            assert_eq!(normalized_kernel(ord(d), 0.0).unwrap(), 1.0);
        }
        let l = log_scaled_kernel(ord(0.0), 0.0).unwrap();
        assert_eq!((l.log_mag(), l.sign()), (0.0, 1));
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(normalized_kernel(ord(1.0), -1e-3).is_err());
        assert!(normalized_kernel(ord(1.0), f64::NAN).is_err());
    }

    // Values frozen from an independent 40-digit evaluation of
    // Γ(d+1)(2/x)^d J_d(x).
    #[test]
    fn frozen_reference_values() {
        let cases = [
            (49.0, 7.0, 0.782_241_150_201_533_3),
            (1.0, 3.0, 0.226_039_305_683_957_64),
            (2.0, 3.0, 0.432_081_120_520_792_07),
        ];
        for (d, x, want) in cases {
            let got = normalized_kernel(ord(d), x).unwrap();
            assert!((got - want).abs() < 1e-15, "d={d} x={x}: {got} vs {want}");
        }
    }

    #[test]
    fn large_order_log_form_does_not_overflow() {
        // ln|J_199(10)/10^199| from the same 40-digit reference.
        let l = log_scaled_kernel(ord(199.0), 10.0).unwrap();
        assert_eq!(l.sign(), 1);
        assert!((l.log_mag() - (-995.994_997_657_552_3)).abs() < 1e-10);
    }

    #[test]
    fn sign_flips_across_first_zero_of_j1() {
        let j11 = 3.831_705_970_207_512_3;
        let below = log_scaled_kernel(ord(1.0), j11 - 1e-6).unwrap();
        let above = log_scaled_kernel(ord(1.0), j11 + 1e-6).unwrap();
        assert_eq!(below.sign(), 1);
        assert_eq!(above.sign(), -1);
    }

    #[test]
    fn series_and_recurrence_agree_in_overlap() {
        for d in [0.0, 0.5, 1.0, 2.0, 7.5, 20.0] {
            for x in [2.0, 5.0, 8.0, 11.0] {
                let s = power_series(d, x).unwrap();
                if s.abs_sum < 1e2 {
                    let m = miller(d, x).unwrap();
                    assert!((s.sum - m).abs() < 1e-13, "d={d} x={x}: {} vs {m}", s.sum);
                }
            }
        }
    }

    #[test]
    fn complement_matches_direct_difference() {
        for d in [0.0, 1.0, 4.0] {
            for x in [0.0, 1e-4, 0.3, 1.5, 4.0, 20.0] {
                let c = normalized_kernel_complement(ord(d), x).unwrap();
                let direct = 1.0 - normalized_kernel(ord(d), x).unwrap();
                assert!((c - direct).abs() < 1e-14, "d={d} x={x}");
            }
        }
        // 1 − J_0(x) ≈ x²/4 for tiny x, which the direct difference cannot resolve.
        let c = normalized_kernel_complement(ord(0.0), 1e-6).unwrap();
        assert!((c / 2.5e-13 - 1.0).abs() < 1e-10);
    }

    proptest! {
        #[test]
        fn bounded_by_one(d in 0.0f64..60.0, x in 0.0f64..60.0) {
            let v = normalized_kernel(ord(d), x).unwrap();
            prop_assert!(v.abs() <= 1.0 + 1e-13, "d={} x={} v={}", d, x, v);
        }

        #[test]
        fn log_form_reconstructs_ratio(d in 0u32..=20, x in 0.01f64..30.0) {
            let d = f64::from(d);
            let l = log_scaled_kernel(ord(d), x).unwrap();
            let j = normalized_kernel(ord(d), x).unwrap();
            let direct = j / (2f64.powf(d) * log_gamma(d + 1.0).unwrap().exp());
            prop_assert!((l.to_f64() - direct).abs() <= 1e-10 * direct.abs() + 1e-300);
        }
    }
}
