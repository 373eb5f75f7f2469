use serde::{Deserialize, Serialize};

use super::matrix::{determinant, permanent, SquareMatrix, MAX_PERMANENT_ORDER};
use super::shell::{distance2, EnergyShell, KernelForm};
use super::CorrelationResult;
use crate::ensemble::SystemSpec;
use crate::error::{guard, Error, Result};

/// Largest `N` accepted by explicit permutation enumeration.
pub const MAX_ENUMERATED_PARTICLES: usize = 8;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Statistics {
    /// Distinguishable particles: identity permutation only.
    #[default]
    Boltzmann,
    Bose,
    Fermi,
}

impl Statistics {
    /// `ε_n` for a permutation of the given parity (`true` = odd).
    pub fn sign(self, odd: bool) -> f64 {
        match self {
            Statistics::Fermi if odd => -1.0,
            _ => 1.0,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PermutationMethod {
    /// All `N!` permutations, `N ≤ 8`.
    #[default]
    Enumerate,
    /// Determinant or permanent of the Gaussian kernel matrix, `N ≤ 20`.
    DetPerm,
}

/// Calls `visit(perm, odd)` for every permutation of `0..n` (Heap's algorithm).
pub(crate) fn for_each_permutation(n: usize, mut visit: impl FnMut(&[usize], bool) -> Result<()>) -> Result<()> {
    let mut perm: Vec<usize> = (0..n).collect();
    let mut c = vec![0usize; n];
    let mut odd = false;
    visit(&perm, odd)?;
    let mut i = 1;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            odd = !odd;
            visit(&perm, odd)?;
            c[i] += 1;
            i = 1;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    Ok(())
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|v| v as f64).product()
}

impl EnergyShell {
    /// `(1/N!) Σ_n ε_n K(k r_n)` assembled into a correlation result.
    pub fn symmetrized(
        &self,
        x: &[f64],
        x_prime: &[f64],
        stats: Statistics,
        method: PermutationMethod,
        form: KernelForm,
    ) -> Result<CorrelationResult> {
        let spec = self.spec();
        let n = spec.n_particles();
        let dim = spec.spatial_dim();
        let k = self.midpoint_wavenumber(x, x_prime)?;
        if !k.is_propagating() {
            return self.assemble(k, 0.0);
        }
        if stats == Statistics::Boltzmann {
            let kernel = self.kernel(form, k.value, distance2(x, x_prime).sqrt())?;
            return self.assemble(k, kernel);
        }
        let pair = |i: usize, j: usize| distance2(&x[i * dim..(i + 1) * dim], &x_prime[j * dim..(j + 1) * dim]);
        let kernel = match method {
            PermutationMethod::Enumerate => {
                guard("enumerated particles", n, MAX_ENUMERATED_PARTICLES)?;
                let mut terms = Vec::with_capacity(factorial(n) as usize);
                for_each_permutation(n, |p, odd| {
                    let r2: f64 = p.iter().enumerate().map(|(i, &j)| pair(i, j)).sum();
                    terms.push(stats.sign(odd) * self.kernel(form, k.value, r2.sqrt())?);
                    Ok(())
                })?;
                neumaier(&terms) / factorial(n)
            }
            PermutationMethod::DetPerm => {
                if form != KernelForm::Gaussian {
                    return Err(Error::Unsupported(
                        "determinant/permanent factorization needs the Gaussian kernel".into(),
                    ));
                }
                guard("permanent order", n, MAX_PERMANENT_ORDER)?;
                let gamma = self.gamma(k.value);
                let m = SquareMatrix::from_fn(n, |i, j| (-gamma * pair(i, j)).exp());
                let v = match stats {
                    Statistics::Fermi => determinant(&m),
                    _ => permanent(&m)?,
                };
                v / factorial(n)
            }
        };
        self.assemble(k, kernel)
    }
}

pub(crate) fn neumaier(terms: &[f64]) -> f64 {
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    for &t in terms {
        let s = sum + t;
        comp += if sum.abs() >= t.abs() { (sum - s) + t } else { (t - s) + sum };
        sum = s;
    }
    sum + comp
}

/// Fermi/Bose symmetrized correlation; Boltzmann keeps the identity term only.
#[allow(clippy::too_many_arguments)]
pub fn symmetrized_correlation(
    spec: &SystemSpec,
    x: &[f64],
    x_prime: &[f64],
    energy: f64,
    stats: Statistics,
    method: PermutationMethod,
    form: KernelForm,
) -> Result<CorrelationResult> {
    EnergyShell::new(spec, energy)?.symmetrized(x, x_prime, stats, method, form)
}
