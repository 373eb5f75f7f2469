//! Arbitrary-precision evaluation of `Ĵ_d(x)` and its Gaussian limit.
//!
//! Values are binary fixed-point integers. Every operation tracks a rigorous
//! bound on the absolute error, so results are certified rather than trusted.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{Float, One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::specfun::BesselOrder;

/// Largest number of certified decimal digits accepted.
pub const MAX_DIGITS: u32 = 200;
/// Working precision beyond which evaluation gives up.
pub const MAX_WORKING_BITS: u64 = 1 << 16;
const MAX_TERMS: u64 = 1_000_000;
const LOG2_10: f64 = std::f64::consts::LOG2_10;

/// `mantissa · 2^{−scale}` with a bound on its absolute error.
#[derive(Clone, Debug, PartialEq)]
pub struct HighPrecReal {
    mantissa: BigInt,
    scale: u64,
    digits: u32,
    error_bound: f64,
}

impl HighPrecReal {
    pub fn digits(&self) -> u32 {
        self.digits
    }

    /// Fractional bits carried by the mantissa.
    pub fn scale_bits(&self) -> u64 {
        self.scale
    }

    /// Upper bound on `|self − exact|`.
    pub fn error_bound(&self) -> f64 {
        self.error_bound
    }

    pub fn is_certified(&self) -> bool {
        self.error_bound <= 0.5 * 10f64.powi(-(self.digits as i32))
    }

    pub fn to_f64(&self) -> f64 {
        let bits = self.mantissa.bits();
        let shift = bits.saturating_sub(64);
        let top = (&self.mantissa >> shift).to_f64().unwrap_or(0.0);
        top * 2f64.powf(shift as f64 - self.scale as f64)
    }

    /// Decimal expansion rounded to `places` digits after the point.
    pub fn to_decimal_string(&self, places: usize) -> String {
        let ten = BigInt::from(10u8).pow(places as u32);
        let half = if self.scale == 0 { BigInt::zero() } else { BigInt::one() << (self.scale - 1) };
        let q: BigInt = (self.mantissa.abs() * ten + half) >> self.scale;
        let mut s = q.to_string();
        if s.len() <= places {
            s = format!("{}{}", "0".repeat(places + 1 - s.len()), s);
        }
        let (int, frac) = s.split_at(s.len() - places);
        let sign = if self.mantissa.is_negative() && !q.is_zero() { "-" } else { "" };
        if places == 0 {
            format!("{sign}{int}")
        } else {
            format!("{sign}{int}.{frac}")
        }
    }

    pub fn abs(&self) -> HighPrecReal {
        HighPrecReal { mantissa: self.mantissa.abs(), ..self.clone() }
    }

    fn aligned(&self, other: &HighPrecReal) -> (BigInt, BigInt, u64) {
        let scale = self.scale.max(other.scale);
        (&self.mantissa << (scale - self.scale), &other.mantissa << (scale - other.scale), scale)
    }

    pub fn sub(&self, other: &HighPrecReal) -> HighPrecReal {
        let (a, b, scale) = self.aligned(other);
        HighPrecReal {
            mantissa: a - b,
            scale,
            digits: self.digits.min(other.digits),
            error_bound: self.error_bound + other.error_bound,
        }
    }

    /// Compares the stored values, ignoring error bounds.
    pub fn cmp_value(&self, other: &HighPrecReal) -> Ordering {
        let (a, b, _) = self.aligned(other);
        a.cmp(&b)
    }

    pub fn to_rational(&self) -> BigRational {
        BigRational::new(self.mantissa.clone(), BigInt::one() << self.scale)
    }
}

impl fmt::Display for HighPrecReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal_string(self.digits as usize))
    }
}

impl Serialize for HighPrecReal {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// `x = m · 2^e` exactly.
struct Dyadic {
    m: BigInt,
    e: i64,
}

impl Dyadic {
    fn new(x: f64) -> Result<Self> {
        if !x.is_finite() || x < 0.0 {
            return domain(format!("argument must be finite and >= 0, got {x}"));
        }
        let (m, e, _) = x.integer_decode();
        Ok(Dyadic { m: BigInt::from(m), e: e as i64 })
    }

    /// `x² · 2^s` as `(numerator, power of two)`.
    fn square_shifted(&self, s: i64) -> (BigInt, i64) {
        (&self.m * &self.m, 2 * self.e + s)
    }
}

/// Twice the order, which must be an integer.
fn twice_order(d: BesselOrder) -> Result<i64> {
    let p = 2.0 * d.value();
    if p.fract() != 0.0 {
        return domain(format!("high-precision kernel needs 2d integral, got d = {}", d.value()));
    }
    Ok(p as i64)
}

fn check_digits(digits: u32) -> Result<()> {
    if digits == 0 || digits > MAX_DIGITS {
        return domain(format!("digits must lie in 1..={MAX_DIGITS}, got {digits}"));
    }
    Ok(())
}

/// `floor(a · 2^shift / den)` for nonnegative `a`, `den`.
fn scaled_div(a: &BigInt, shift: i64, den: &BigInt) -> BigInt {
    if shift >= 0 {
        (a << shift as u64) / den
    } else {
        a / (den << (-shift) as u64)
    }
}

/// Upward-padded factor for error propagation.
fn pad(r: f64) -> f64 {
    r * (1.0 + 1e-12)
}

/// `Ĵ_d(x) = Σ_k (−x²/4)^k / (k! (d+1)_k)`, certified to `digits` decimal
/// places of absolute accuracy. Requires `2d` integral.
pub fn highprec_kernel(d: BesselOrder, x: f64, digits: u32) -> Result<HighPrecReal> {
    check_digits(digits)?;
    let p = twice_order(d)?;
    let xd = Dyadic::new(x)?;
    let dv = d.value();
    let q = x * x / 4.0;

    // Peak term size and length of the series, in f64 logs.
    let mut log_t = 0.0f64;
    let mut log_peak = 0.0f64;
    let target_log = -(digits as f64 + 5.0) * std::f64::consts::LN_10;
    let mut k_est = 0u64;
    if q > 0.0 {
        loop {
            k_est += 1;
            let k = k_est as f64;
            log_t += q.ln() - k.ln() - (dv + k).ln();
            log_peak = log_peak.max(log_t);
            if (q / (k * (dv + k)) < 1.0 && log_t < target_log) || k_est > MAX_TERMS {
                break;
            }
        }
    }
    if k_est > MAX_TERMS {
        return Err(Error::Precision(format!("series for x = {x} needs more than {MAX_TERMS} terms")));
    }
    let guard = (log_peak / std::f64::consts::LN_2).ceil() as u64 + (k_est as f64 + 2.0).log2().ceil() as u64 + 16;
    let w = (digits as f64 * LOG2_10).ceil() as u64 + guard;
    if w > MAX_WORKING_BITS {
        return Err(Error::Precision(format!("x = {x}, d = {dv} needs {w} working bits")));
    }

    let one = BigInt::one() << w;
    let tol_ulps = 0.25 * 10f64.powi(-(digits as i32)) * 2f64.powf(w as f64);
    // term_k = term_{k−1} · x² · 2^{-1} / (k (p + 2k))
    let (x2, sh) = xd.square_shifted(-1);
    let mut term = one.clone();
    let mut sum = one;
    let mut err = 0.0f64;
    let mut err_total = 0.0f64;
    let mut k = 0i64;
    let remainder = loop {
        if term.is_zero() && err == 0.0 {
            break 0.0;
        }
        let next_ratio = q / ((k + 1) as f64 * (dv + (k + 1) as f64));
        if next_ratio < 1.0 {
            let bound = (term.to_f64().unwrap_or(f64::INFINITY) + err) * pad(next_ratio);
            if bound < tol_ulps {
                break bound;
            }
        }
        k += 1;
        if k as u64 > 2 * k_est + 10 {
            return Err(Error::Precision(format!("series did not reach {digits} digits")));
        }
        let den = BigInt::from(k) * BigInt::from(p + 2 * k);
        term = scaled_div(&(&term * &x2), sh, &den);
        err = err * pad(q / (k as f64 * (dv + k as f64))) + 1.0;
        err_total += err;
        if k % 2 == 1 {
            sum -= &term;
        } else {
            sum += &term;
        }
    };
    let error_bound = pad(err_total + remainder) * 2f64.powf(-(w as f64));
    let out = HighPrecReal { mantissa: sum, scale: w, digits, error_bound };
    if !out.is_certified() {
        return Err(Error::Precision(format!("error bound {error_bound:e} exceeds {digits} digits")));
    }
    Ok(out)
}

/// `e^{−x²/(4(d+1))}` to `digits` decimal places.
pub fn highprec_gaussian(d: BesselOrder, x: f64, digits: u32) -> Result<HighPrecReal> {
    check_digits(digits)?;
    let p = twice_order(d)?;
    let xd = Dyadic::new(x)?;
    let y = x * x / (4.0 * (d.value() + 1.0));
    // e^{y} overflows the working range long before this.
    if y > 1e4 {
        return Err(Error::Precision(format!("Gaussian exponent {y} too large")));
    }
    let w = (digits as f64 * LOG2_10).ceil() as u64 + 32;
    let one = BigInt::one() << w;
    let tol_ulps = 0.125 * 10f64.powi(-(digits as i32)) * 2f64.powf(w as f64);
    // e^{y} by its Taylor series; every term is positive.
    // term_k = term_{k−1} · x² / (2k (p + 2))
    let (x2, sh) = xd.square_shifted(-1);
    let mut term = one.clone();
    let mut sum = one.clone();
    let mut err = 0.0f64;
    let mut err_total = 0.0f64;
    let mut k = 0i64;
    let remainder = loop {
        if term.is_zero() && err == 0.0 {
            break 0.0;
        }
        let r = y / (k + 1) as f64;
        if r < 0.5 {
            let bound = (term.to_f64().unwrap_or(f64::INFINITY) + err) * pad(r / (1.0 - r));
            if bound < tol_ulps {
                break bound;
            }
        }
        k += 1;
        if k as u64 > MAX_TERMS {
            return Err(Error::Precision("exponential series did not converge".into()));
        }
        let den = BigInt::from(k) * BigInt::from(p + 2);
        term = scaled_div(&(&term * &x2), sh, &den);
        err = err * pad(y / k as f64) + 1.0;
        err_total += err;
        sum += &term;
    };
    // 1/E with E ≥ 1: |1/E − 1/E'| ≤ δ/(E'(E' − δ)).
    let scale = 2f64.powf(-(w as f64));
    let e_val = sum.to_f64().unwrap_or(f64::INFINITY) * scale;
    let delta = pad(err_total + remainder) * scale;
    let mantissa = (&one << w) / &sum;
    let error_bound = pad(delta / (e_val * (e_val - delta))) + scale;
    let out = HighPrecReal { mantissa, scale: w, digits, error_bound };
    if !out.is_certified() {
        return Err(Error::Precision(format!("error bound {error_bound:e} exceeds {digits} digits")));
    }
    Ok(out)
}

/// Sup of `|Ĵ_d(x) − e^{−x²/(4(d+1))}|` over the uniform grid
/// `x_i = x_max · i/(n_grid − 1)`.
pub fn highprec_convergence_error(d: BesselOrder, x_max: f64, n_grid: usize, digits: u32) -> Result<HighPrecReal> {
    if n_grid < 2 {
        return domain(format!("n_grid must be at least 2, got {n_grid}"));
    }
    let mut worst: Option<HighPrecReal> = None;
    for i in 0..n_grid {
        let x = x_max * i as f64 / (n_grid - 1) as f64;
        let diff = highprec_kernel(d, x, digits)?.sub(&highprec_gaussian(d, x, digits)?).abs();
        worst = match worst {
            Some(w) if w.cmp_value(&diff) != Ordering::Less => Some(w),
            _ => Some(diff),
        };
    }
    Ok(worst.expect("n_grid >= 2"))
}

/// Exact partial sum `Σ_{k<n_terms} (−x²/4)^k / (k! (d+1)_k)`.
pub fn kernel_partial_sum_exact(d: BesselOrder, x: f64, n_terms: usize) -> Result<BigRational> {
    let p = twice_order(d)?;
    let xd = Dyadic::new(x)?;
    let (x2, sh) = xd.square_shifted(-1);
    let x2 = if sh >= 0 {
        BigRational::from_integer(x2 << sh as u64)
    } else {
        BigRational::new(x2, BigInt::one() << (-sh) as u64)
    };
    let mut term = BigRational::one();
    let mut sum = BigRational::zero();
    for k in 0..n_terms as i64 {
        if k > 0 {
            term = -term * &x2 / BigRational::from_integer(BigInt::from(k) * BigInt::from(p + 2 * k));
        }
        sum += &term;
    }
    Ok(sum)
}

/// Zero of `Ĵ_d` in `[lo, hi]` located by bisection on certified signs,
/// down to adjacent doubles.
pub fn find_kernel_zero(d: BesselOrder, mut lo: f64, mut hi: f64) -> Result<f64> {
    const DIGITS: u32 = 40;
    let sign = |x: f64| -> Result<Sign> { Ok(highprec_kernel(d, x, DIGITS)?.mantissa.sign()) };
    let s_lo = sign(lo)?;
    if s_lo == Sign::NoSign {
        return Ok(lo);
    }
    let s_hi = sign(hi)?;
    if s_hi == Sign::NoSign {
        return Ok(hi);
    }
    if s_lo == s_hi {
        return domain(format!("no sign change on [{lo}, {hi}]"));
    }
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        match sign(mid)? {
            Sign::NoSign => return Ok(mid),
            s if s == s_lo => lo = mid,
            _ => hi = mid,
        }
    }
    let (a, b) = (highprec_kernel(d, lo, DIGITS)?, highprec_kernel(d, hi, DIGITS)?);
    Ok(if a.abs().cmp_value(&b.abs()) == Ordering::Greater { hi } else { lo })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::normalized_kernel;

    fn order(d: f64) -> BesselOrder {
        BesselOrder::new(d).unwrap()
    }

    #[test]
    fn zero_argument_is_exactly_one() {
        let v = highprec_kernel(order(0.0), 0.0, 50).unwrap();
        assert_eq!(v.error_bound(), 0.0);
        assert_eq!(v.to_decimal_string(50), format!("1.{}", "0".repeat(50)));
    }

    #[test]
    fn order_49_reference() {
        let v = highprec_kernel(order(49.0), 7.0, 40).unwrap();
        assert!(v.to_decimal_string(40).starts_with("0.78224115020153331726133491704442397"), "{v}");
        assert!(v.error_bound() < 1e-40);
    }

    #[test]
    fn half_integer_orders_are_elementary() {
        for &x in &[0.3, 1.0, 4.5, 17.25] {
            let s = highprec_kernel(order(0.5), x, 30).unwrap().to_f64();
            let c = highprec_kernel(order(-0.5), x, 30).unwrap().to_f64();
            assert!((s - x.sin() / x).abs() < 2e-15, "{x}");
            assert!((c - x.cos()).abs() < 2e-15, "{x}");
        }
    }

    #[test]
    fn agrees_with_double_precision_kernel() {
        for &(d, x) in &[(0.0, 50.0), (1.0, 13.7), (4.5, 30.0), (49.0, 28.0), (199.0, 56.0)] {
            let hp = highprec_kernel(order(d), x, 30).unwrap().to_f64();
            let f = normalized_kernel(order(d), x).unwrap();
            assert!((hp - f).abs() < 1e-13, "d={d} x={x}: {hp} vs {f}");
        }
    }

    #[test]
    fn exact_partial_sum_within_bound() {
        let d = order(3.0);
        let x = 9.5;
        let v = highprec_kernel(d, x, 60).unwrap();
        let exact = kernel_partial_sum_exact(d, x, 120).unwrap();
        let diff = (exact - v.to_rational()).abs();
        let bound = BigRational::from_float(v.error_bound()).unwrap();
        assert!(diff <= bound);
    }

    #[test]
    fn gaussian_matches_exp() {
        for &(d, x) in &[(0.0, 1.0), (9.0, 12.0), (199.0, 56.5)] {
            let g = highprec_gaussian(order(d), x, 30).unwrap().to_f64();
            let want = (-x * x / (4.0 * (d + 1.0))).exp();
            assert!(((g - want) / want).abs() < 1e-15);
        }
        let g = highprec_gaussian(order(199.0), 20.0, 35).unwrap();
        assert!(g.to_decimal_string(35).starts_with("0.60653065971263342360379953499118045"), "{g}");
    }

    #[test]
    fn first_zero_of_j0() {
        let z = find_kernel_zero(order(0.0), 2.0, 3.0).unwrap();
        assert!((z - 2.404825557695773).abs() < 1e-15, "{z}");
        assert!(highprec_kernel(order(0.0), z, 30).unwrap().to_f64().abs() < 1e-15);
    }

    #[test]
    fn convergence_error_reference() {
        let d = 199.0;
        let err = highprec_convergence_error(order(d), 4.0 * (d + 1.0f64).sqrt(), 512, 25).unwrap();
        assert!((err.to_f64() - 0.00135787343391).abs() < 1e-12, "{err}");
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(highprec_kernel(order(0.3), 1.0, 20).is_err());
        assert!(highprec_kernel(order(1.0), 1.0, 201).is_err());
        assert!(highprec_kernel(order(1.0), -1.0, 20).is_err());
        assert!(matches!(highprec_kernel(order(0.0), 1e6, 20), Err(Error::Precision(_))));
    }

    #[test]
    fn decimal_formatting() {
        let v = HighPrecReal { mantissa: BigInt::from(-3), scale: 2, digits: 3, error_bound: 0.0 };
        assert_eq!(v.to_decimal_string(3), "-0.750");
        assert_eq!(v.to_string(), "-0.750");
        let w = HighPrecReal { mantissa: BigInt::from(1), scale: 10, digits: 2, error_bound: 0.0 };
        assert_eq!(w.to_decimal_string(2), "0.00");
    }
}
