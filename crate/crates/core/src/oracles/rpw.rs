//! Random-plane-wave ensembles at fixed `|k|`.
//!
//! Each sample is `ψ(y) = Σ_j a_j e^{i(k û_j·y + φ_j)}` with `û_j` uniform on
//! the unit sphere in `N·D` dimensions. Correlations are ratio estimates
//! `Σ Re ψ(x)ψ*(x')/Σ|ψ(x)|²` whose standard error comes from the delta method.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::integrate::seeded_chunks;
use crate::correlations::WallGeometry;
use crate::ensemble::{Potential, SystemSpec};
use crate::error::{domain, guard, Error, Result};

/// Largest `N` accepted by [`rpw_sample_wall`].
pub const MAX_RPW_WALL_PARTICLES: usize = 8;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AmplitudeLaw {
    /// `a_j = 1`, `φ_j` uniform.
    #[default]
    UnitPhase,
    /// `a_j e^{iφ_j}` standard complex Gaussian.
    ComplexGaussian,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RpwEnsembleConfig {
    pub n_waves: usize,
    pub n_samples: usize,
    pub seed: u64,
    #[serde(default)]
    pub amplitude_law: AmplitudeLaw,
}

impl RpwEnsembleConfig {
    pub fn new(n_waves: usize, n_samples: usize, seed: u64) -> Self {
        RpwEnsembleConfig { n_waves, n_samples, seed, amplitude_law: AmplitudeLaw::UnitPhase }
    }

    pub fn with_amplitude_law(mut self, law: AmplitudeLaw) -> Self {
        self.amplitude_law = law;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.n_waves == 0 || self.n_samples == 0 {
            return domain("n_waves and n_samples must be positive");
        }
        Ok(())
    }
}

/// Ratio estimate with its delta-method standard error.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RpwEstimate {
    pub estimate: f64,
    pub std_error: f64,
    /// Largest `|ψ(x)|/√n_waves` seen over the samples (after the wall
    /// operator, when one is applied).
    pub max_field_at_x: f64,
}

#[derive(Clone, Copy, Default)]
struct RatioSums {
    n: f64,
    p: f64,
    q: f64,
    pp: f64,
    qq: f64,
    pq: f64,
    max_field: f64,
}

impl RatioSums {
    fn push(&mut self, p: f64, q: f64, field: f64) {
        self.n += 1.0;
        self.p += p;
        self.q += q;
        self.pp += p * p;
        self.qq += q * q;
        self.pq += p * q;
        self.max_field = self.max_field.max(field);
    }

    fn merge(mut self, o: &RatioSums) -> RatioSums {
        self.n += o.n;
        self.p += o.p;
        self.q += o.q;
        self.pp += o.pp;
        self.qq += o.qq;
        self.pq += o.pq;
        self.max_field = self.max_field.max(o.max_field);
        self
    }

    fn finish(&self, scale: f64) -> RpwEstimate {
        let n = self.n;
        let (mp, mq) = (self.p / n, self.q / n);
        let ratio = mp / mq;
        let var = |s2: f64, m: f64| (s2 / n - m * m) * n / (n - 1.0).max(1.0);
        let cov = (self.pq / n - mp * mq) * n / (n - 1.0).max(1.0);
        let v = (var(self.pp, mp) - 2.0 * ratio * cov + ratio * ratio * var(self.qq, mq)) / (mq * mq * n);
        RpwEstimate { estimate: scale * ratio, std_error: scale * v.max(0.0).sqrt(), max_field_at_x: self.max_field }
    }
}

fn check_free(spec: &SystemSpec) -> Result<()> {
    if matches!(spec.potential(), Potential::Zero) {
        Ok(())
    } else {
        Err(Error::Unsupported("the random-wave ensemble is defined for the zero potential".into()))
    }
}

fn wavenumber(spec: &SystemSpec, energy: f64) -> Result<f64> {
    if !(energy > 0.0) {
        return domain("random waves need E > 0");
    }
    Ok((energy / spec.kinetic_unit()).sqrt())
}

/// One plane wave: direction scaled by `k` and complex amplitude.
fn draw_wave(rng: &mut ChaCha8Rng, n: usize, k: f64, law: AmplitudeLaw, dir: &mut [f64]) -> Complex64 {
    let mut norm2 = 0.0;
    for c in dir.iter_mut() {
        let g: f64 = rng.sample(StandardNormal);
        *c = g;
        norm2 += g * g;
    }
    let s = k / norm2.sqrt();
    dir.iter_mut().for_each(|c| *c *= s);
    debug_assert_eq!(dir.len(), n);
    match law {
        AmplitudeLaw::UnitPhase => Complex64::from_polar(1.0, std::f64::consts::TAU * rng.random::<f64>()),
        AmplitudeLaw::ComplexGaussian => {
            let (a, b): (f64, f64) = (rng.sample(StandardNormal), rng.sample(StandardNormal));
            Complex64::new(a, b) * std::f64::consts::FRAC_1_SQRT_2
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(p, q)| p * q).sum()
}

/// Estimates `⟨ψ(x)ψ*(x + r)⟩/⟨|ψ(x)|²⟩`, which converges to `Ĵ_d(kr)`.
pub fn rpw_sample_correlation(
    spec: &SystemSpec,
    energy: f64,
    x: &[f64],
    r_vec: &[f64],
    cfg: &RpwEnsembleConfig,
) -> Result<RpwEstimate> {
    check_free(spec)?;
    cfg.validate()?;
    spec.check_config(x)?;
    spec.check_config(r_vec)?;
    let k = wavenumber(spec, energy)?;
    let n = spec.dof();
    let x_prime: Vec<f64> = x.iter().zip(r_vec).map(|(a, b)| a + b).collect();
    let parts = seeded_chunks(cfg.seed, cfg.n_samples, |rng, count| {
        let mut dir = vec![0.0; n];
        let mut sums = RatioSums::default();
        for _ in 0..count {
            let (mut psi, mut psi_p) = (Complex64::default(), Complex64::default());
            for _ in 0..cfg.n_waves {
                let amp = draw_wave(rng, n, k, cfg.amplitude_law, &mut dir);
                psi += amp * Complex64::cis(dot(&dir, x));
                psi_p += amp * Complex64::cis(dot(&dir, &x_prime));
            }
            let q = psi.norm_sqr();
            sums.push((psi * psi_p.conj()).re, q, psi.norm() / (cfg.n_waves as f64).sqrt());
        }
        sums
    });
    let total = parts.iter().fold(RatioSums::default(), |a, b| a.merge(b));
    Ok(total.finish(1.0))
}

/// As [`rpw_sample_correlation`] after applying `Π_i(1 − R_i)` to every
/// sampled wave. The result converges to the signed image sum
/// `Σ_S (−1)^{|S|} Ĵ_d(k r_S)`.
pub fn rpw_sample_wall(
    spec: &SystemSpec,
    energy: f64,
    x: &[f64],
    x_prime: &[f64],
    cfg: &RpwEnsembleConfig,
    wall: WallGeometry,
) -> Result<RpwEstimate> {
    check_free(spec)?;
    cfg.validate()?;
    spec.check_config(x)?;
    spec.check_config(x_prime)?;
    guard("random-wave wall particles", spec.n_particles(), MAX_RPW_WALL_PARTICLES)?;
    if wall.axis >= spec.spatial_dim() {
        return domain("wall axis out of range");
    }
    let k = wavenumber(spec, energy)?;
    let n = spec.dof();
    let dim = spec.spatial_dim();
    let n_part = spec.n_particles();
    let images = (1u64 << n_part) as f64;
    // Per wave the image sum factorizes: Π_i (e^{iθ_i} − e^{iθ_i^R}).
    let walled = |dir: &[f64], y: &[f64]| -> Complex64 {
        let mut f = Complex64::new(1.0, 0.0);
        for i in 0..n_part {
            let block = i * dim..(i + 1) * dim;
            let theta = dot(&dir[block.clone()], &y[block]);
            let theta_r = theta - 2.0 * dir[i * dim + wall.axis] * y[i * dim + wall.axis];
            f *= Complex64::cis(theta) - Complex64::cis(theta_r);
        }
        f
    };
    let parts = seeded_chunks(cfg.seed, cfg.n_samples, |rng, count| {
        let mut dir = vec![0.0; n];
        let mut sums = RatioSums::default();
        for _ in 0..count {
            let (mut plain, mut wx, mut wxp) = (Complex64::default(), Complex64::default(), Complex64::default());
            for _ in 0..cfg.n_waves {
                let amp = draw_wave(rng, n, k, cfg.amplitude_law, &mut dir);
                plain += amp * Complex64::cis(dot(&dir, x));
                wx += amp * walled(&dir, x);
                wxp += amp * walled(&dir, x_prime);
            }
            sums.push((wx * wxp.conj()).re, plain.norm_sqr(), wx.norm() / (cfg.n_waves as f64).sqrt());
        }
        sums
    });
    let total = parts.iter().fold(RatioSums::default(), |a, b| a.merge(b));
    Ok(total.finish(1.0 / images))
}

/// `Re ψ(x)·√(2/n_waves)` for each sample; standard normal in the
/// many-wave limit.
pub fn rpw_field_samples(spec: &SystemSpec, energy: f64, x: &[f64], cfg: &RpwEnsembleConfig) -> Result<Vec<f64>> {
    check_free(spec)?;
    cfg.validate()?;
    spec.check_config(x)?;
    let k = wavenumber(spec, energy)?;
    let n = spec.dof();
    let norm = (2.0 / cfg.n_waves as f64).sqrt();
    let parts = seeded_chunks(cfg.seed, cfg.n_samples, |rng, count| {
        let mut dir = vec![0.0; n];
        (0..count)
            .map(|_| {
                let mut psi = Complex64::default();
                for _ in 0..cfg.n_waves {
                    let amp = draw_wave(rng, n, k, cfg.amplitude_law, &mut dir);
                    psi += amp * Complex64::cis(dot(&dir, x));
                }
                psi.re * norm
            })
            .collect::<Vec<_>>()
    });
    Ok(parts.concat())
}
