//! Adaptive Gauss–Kronrod quadrature and seeded Monte Carlo integration.
//!
//! Monte Carlo work is split into fixed-size chunks, each driven by its own
//! ChaCha stream derived from `(seed, chunk index)`. Chunk results are
//! combined in index order, so an estimate depends only on the seed and the
//! sample count, never on the number of worker threads.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{domain, Error, Result};

/// Samples per deterministic Monte Carlo chunk.
pub const CHUNK_SIZE: usize = 1024;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Values that can be integrated by the Gauss–Kronrod driver.
pub trait Integrand: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {
    fn zero() -> Self;
    fn magnitude(&self) -> f64;
}

impl Integrand for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl Integrand for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

fn gk15<T: Integrand>(f: &dyn Fn(f64) -> T, a: f64, b: f64) -> (T, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        kronrod = kronrod + pair * WGK[j];
        if j % 2 == 1 {
            gauss = gauss + pair * WG[j / 2];
        }
    }
    let kronrod = kronrod * half;
    let gauss = gauss * half;
    (kronrod, (kronrod - gauss).magnitude())
}

struct Piece<T> {
    a: f64,
    b: f64,
    value: T,
    error: f64,
}

impl<T> PartialEq for Piece<T> {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl<T> Eq for Piece<T> {}
impl<T> PartialOrd for Piece<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<T> Ord for Piece<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Tolerances for [`Quadrature::integrate`].
#[derive(Clone, Copy, Debug)]
pub struct Quadrature {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_intervals: usize,
}

impl Default for Quadrature {
    fn default() -> Self {
        Quadrature {
            rel_tol: 1e-10,
            abs_tol: 0.0,
            max_intervals: 4000,
        }
    }
}

impl Quadrature {
    pub fn new(rel_tol: f64) -> Self {
        Quadrature {
            rel_tol,
            ..Default::default()
        }
    }

    pub fn with_abs_tol(mut self, abs_tol: f64) -> Self {
        self.abs_tol = abs_tol;
        self
    }

    pub fn with_max_intervals(mut self, n: usize) -> Self {
        self.max_intervals = n;
        self
    }

    /// Globally adaptive 15-point Gauss–Kronrod integration over `[a, b]`.
    pub fn integrate<T: Integrand>(&self, f: impl Fn(f64) -> T, a: f64, b: f64) -> Result<T> {
        if !a.is_finite() || !b.is_finite() {
            return domain("quadrature limits must be finite");
        }
        if a == b {
            return Ok(T::zero());
        }
        let f: &dyn Fn(f64) -> T = &f;
        let (value, error) = gk15(f, a, b);
        let mut total = value;
        let mut total_err = error;
        let mut heap = BinaryHeap::new();
        heap.push(Piece { a, b, value, error });
        while total_err > self.abs_tol.max(self.rel_tol * total.magnitude()) {
            if heap.len() >= self.max_intervals {
                return Err(Error::Quadrature(format!(
                    "{} intervals on [{a}, {b}], estimate {:e} with error {:e}",
                    heap.len(),
                    total.magnitude(),
                    total_err
                )));
            }
            let worst = heap.pop().expect("heap is non-empty");
            let mid = 0.5 * (worst.a + worst.b);
            if !(mid > worst.a && mid < worst.b) {
                return Err(Error::Quadrature(format!(
                    "interval [{}, {}] cannot be bisected further",
                    worst.a, worst.b
                )));
            }
            let (lv, le) = gk15(f, worst.a, mid);
            let (rv, re) = gk15(f, mid, worst.b);
            total = total - worst.value + lv + rv;
            total_err = total_err - worst.error + le + re;
            heap.push(Piece { a: worst.a, b: mid, value: lv, error: le });
            heap.push(Piece { a: mid, b: worst.b, value: rv, error: re });
        }
        // Re-sum to shed the drift of the running updates.
        let mut pieces: Vec<_> = heap.into_vec();
        pieces.sort_by(|p, q| p.a.total_cmp(&q.a));
        Ok(pieces.iter().fold(T::zero(), |acc, p| acc + p.value))
    }

    /// Integrates over consecutive breakpoints `[p0, p1], [p1, p2], ...`.
    pub fn integrate_pieces<T: Integrand>(&self, f: impl Fn(f64) -> T, points: &[f64]) -> Result<T> {
        let mut acc = T::zero();
        for w in points.windows(2) {
            acc = acc + self.integrate(&f, w[0], w[1])?;
        }
        Ok(acc)
    }
}

/// `∫_a^b f` to relative tolerance `tol`.
pub fn quadrature_1d(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<f64> {
    Quadrature::new(tol).integrate(f, a, b)
}

/// Region sampled uniformly by [`mc_integrate`].
#[derive(Clone, Debug, PartialEq)]
pub enum SamplingDomain {
    HyperRect { lower: Vec<f64>, upper: Vec<f64> },
    Ball { center: Vec<f64>, radius: f64 },
}

impl SamplingDomain {
    pub fn dim(&self) -> usize {
        match self {
            SamplingDomain::HyperRect { lower, .. } => lower.len(),
            SamplingDomain::Ball { center, .. } => center.len(),
        }
    }

    pub fn log_volume(&self) -> f64 {
        match self {
            SamplingDomain::HyperRect { lower, upper } => {
                lower.iter().zip(upper).map(|(l, u)| (u - l).ln()).sum()
            }
            SamplingDomain::Ball { center, radius } => {
                let n = center.len() as f64;
                0.5 * n * std::f64::consts::PI.ln() + n * radius.ln()
                    - crate::specfun::log_gamma(0.5 * n + 1.0).unwrap_or(f64::NAN)
            }
        }
    }

    pub fn volume(&self) -> f64 {
        self.log_volume().exp()
    }

    fn validate(&self) -> Result<()> {
        match self {
            SamplingDomain::HyperRect { lower, upper } => {
                if lower.is_empty() || lower.len() != upper.len() {
                    return domain("hyper-rectangle bounds must be non-empty and equal length");
                }
                if lower.iter().zip(upper).any(|(l, u)| !(u > l) || !l.is_finite() || !u.is_finite()) {
                    return domain("hyper-rectangle needs finite lower < upper on every axis");
                }
            }
            SamplingDomain::Ball { center, radius } => {
                if center.is_empty() || !(*radius > 0.0) || !radius.is_finite() {
                    return domain("ball needs a non-empty center and a positive radius");
                }
            }
        }
        Ok(())
    }

    pub fn sample_into<R: Rng>(&self, rng: &mut R, out: &mut [f64]) {
        match self {
            SamplingDomain::HyperRect { lower, upper } => {
                for ((o, l), u) in out.iter_mut().zip(lower).zip(upper) {
                    *o = l + (u - l) * rng.random::<f64>();
                }
            }
            SamplingDomain::Ball { center, radius } => {
                let n = center.len();
                let mut norm2 = 0.0;
                for o in out.iter_mut() {
                    let g: f64 = rng.sample(StandardNormal);
                    *o = g;
                    norm2 += g * g;
                }
                let scale = radius * rng.random::<f64>().powf(1.0 / n as f64) / norm2.sqrt();
                for (o, c) in out.iter_mut().zip(center) {
                    *o = c + *o * scale;
                }
            }
        }
    }
}

/// Running mean and second central moment (Welford), mergeable in order.
#[derive(Clone, Copy, Debug, Default)]
pub struct Moments {
    pub count: usize,
    pub mean: f64,
    pub m2: f64,
}

impl Moments {
    pub fn push(&mut self, v: f64) {
        self.count += 1;
        let delta = v - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (v - self.mean);
    }

    pub fn merge(&self, other: &Moments) -> Moments {
        if self.count == 0 {
            return *other;
        }
        if other.count == 0 {
            return *self;
        }
        let n = (self.count + other.count) as f64;
        let delta = other.mean - self.mean;
        Moments {
            count: self.count + other.count,
            mean: self.mean + delta * other.count as f64 / n,
            m2: self.m2 + other.m2 + delta * delta * (self.count as f64) * (other.count as f64) / n,
        }
    }

    pub fn variance(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            self.m2 / (self.count - 1) as f64
        }
    }

    pub fn std_error(&self) -> f64 {
        if self.count == 0 {
            0.0
        } else {
            (self.variance() / self.count as f64).sqrt()
        }
    }
}

/// Runs `work(rng, count)` for each chunk of the sample budget in parallel
/// and returns the chunk results in chunk order.
pub fn seeded_chunks<A, F>(seed: u64, n_samples: usize, work: F) -> Vec<A>
where
    A: Send,
    F: Fn(&mut ChaCha8Rng, usize) -> A + Sync,
{
    let n_chunks = n_samples.div_ceil(CHUNK_SIZE);
    (0..n_chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c as u64);
            let count = CHUNK_SIZE.min(n_samples - c * CHUNK_SIZE);
            work(&mut rng, count)
        })
        .collect()
}

/// Monte Carlo estimate with its sample standard error.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct McEstimate {
    pub estimate: f64,
    pub std_error: f64,
}

/// Uniform-sampling Monte Carlo estimate of `∫_domain f`.
pub fn mc_integrate<F>(f: F, domain_: &SamplingDomain, seed: u64, n_samples: usize) -> Result<McEstimate>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    domain_.validate()?;
    if n_samples == 0 {
        return domain("n_samples must be positive");
    }
    let dim = domain_.dim();
    let chunks = seeded_chunks(seed, n_samples, |rng, count| {
        let mut point = vec![0.0; dim];
        let mut m = Moments::default();
        for _ in 0..count {
            domain_.sample_into(rng, &mut point);
            m.push(f(&point));
        }
        m
    });
    let total = chunks.iter().fold(Moments::default(), |acc, m| acc.merge(m));
    let vol = domain_.volume();
    Ok(McEstimate {
        estimate: vol * total.mean,
        std_error: vol * total.std_error(),
    })
}
