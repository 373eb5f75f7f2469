//! Exchange sums by explicit enumeration of all `N!` permutations.

use serde::{Deserialize, Serialize};

use crate::correlations::{for_each_permutation, neumaier, Statistics, MAX_ENUMERATED_PARTICLES};
use crate::error::{domain, guard, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EnumerationOrder {
    /// Lexicographic order, parity from the inversion count.
    #[default]
    Lexicographic,
    /// Heap's transposition order, parity tracked per swap.
    Heap,
}

/// `Σ_n ε_n Π_i e^{−γ|x_i − x'_{n(i)}|²}` over every permutation `n`.
pub fn permutation_enumeration(points_x: &[Vec<f64>], points_x_prime: &[Vec<f64>], gamma: f64, stats: Statistics) -> Result<f64> {
    permutation_enumeration_with(points_x, points_x_prime, gamma, stats, EnumerationOrder::Lexicographic)
}

pub fn permutation_enumeration_with(
    points_x: &[Vec<f64>],
    points_x_prime: &[Vec<f64>],
    gamma: f64,
    stats: Statistics,
    order: EnumerationOrder,
) -> Result<f64> {
    let n = points_x.len();
    guard("enumerated particles", n, MAX_ENUMERATED_PARTICLES)?;
    if points_x_prime.len() != n {
        return domain(format!("{n} points against {}", points_x_prime.len()));
    }
    if n == 0 {
        return domain("need at least one particle");
    }
    let dim = points_x[0].len();
    if points_x.iter().chain(points_x_prime).any(|p| p.len() != dim) {
        return domain("points must share one dimension");
    }
    if !(gamma >= 0.0) || !gamma.is_finite() {
        return domain(format!("gamma must be finite and >= 0, got {gamma}"));
    }
    let kernel: Vec<Vec<f64>> = points_x
        .iter()
        .map(|a| {
            points_x_prime
                .iter()
                .map(|b| (-gamma * a.iter().zip(b).map(|(p, q)| (p - q) * (p - q)).sum::<f64>()).exp())
                .collect()
        })
        .collect();
    let term = |perm: &[usize], odd: bool| stats.sign(odd) * perm.iter().enumerate().map(|(i, &j)| kernel[i][j]).product::<f64>();
    if stats == Statistics::Boltzmann {
        let id: Vec<usize> = (0..n).collect();
        return Ok(term(&id, false));
    }
    let mut terms = Vec::new();
    match order {
        EnumerationOrder::Lexicographic => {
            let mut perm: Vec<usize> = (0..n).collect();
            loop {
                terms.push(term(&perm, inversions(&perm) % 2 == 1));
                if !next_permutation(&mut perm) {
                    break;
                }
            }
        }
        EnumerationOrder::Heap => for_each_permutation(n, |perm, odd| {
            terms.push(term(perm, odd));
            Ok(())
        })?,
    }
    Ok(neumaier(&terms))
}

fn inversions(perm: &[usize]) -> usize {
    (0..perm.len()).map(|i| (i + 1..perm.len()).filter(|&j| perm[i] > perm[j]).count()).sum()
}

fn next_permutation(perm: &mut [usize]) -> bool {
    let Some(i) = (1..perm.len()).rev().find(|&i| perm[i - 1] < perm[i]) else {
        return false;
    };
    let j = (i..perm.len()).rev().find(|&j| perm[j] > perm[i - 1]).expect("successor exists");
    perm.swap(i - 1, j);
    perm[i..].reverse();
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::correlations::{determinant, permanent, SquareMatrix};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_points(rng: &mut ChaCha8Rng, n: usize, dim: usize) -> Vec<Vec<f64>> {
        (0..n).map(|_| (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect()).collect()
    }

    #[test]
    fn lexicographic_order_visits_all_with_parity() {
        let mut perm = vec![0, 1, 2, 3];
        let mut count = 1;
        let mut odd = 0;
        while next_permutation(&mut perm) {
            count += 1;
            odd += inversions(&perm) % 2;
        }
        assert_eq!((count, odd), (24, 12));
        assert_eq!(perm, vec![3, 2, 1, 0]);
    }

    #[test]
    fn single_particle() {
        let v = permutation_enumeration(&[vec![0.0, 1.0]], &[vec![0.5, 0.0]], 2.0, Statistics::Fermi).unwrap();
        assert!((v - (-2.0f64 * 1.25).exp()).abs() < 1e-16);
    }

    #[test]
    fn fermi_coincidence_vanishes() {
        let p = vec![vec![0.3, 0.1], vec![0.3, 0.1]];
        let v = permutation_enumeration(&p, &p, 1.7, Statistics::Fermi).unwrap();
        assert_eq!(v, 0.0);
    }

    #[test]
    fn matches_det_perm_and_second_ordering() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for n in 1..=6 {
            let (x, xp) = (random_points(&mut rng, n, 3), random_points(&mut rng, n, 3));
            let gamma = 0.8;
            let m = SquareMatrix::from_fn(n, |i, j| {
                (-gamma * x[i].iter().zip(&xp[j]).map(|(a, b)| (a - b) * (a - b)).sum::<f64>()).exp()
            });
            let det = determinant(&m);
            let per = permanent(&m).unwrap();
            for (stats, want) in [(Statistics::Fermi, det), (Statistics::Bose, per)] {
                let a = permutation_enumeration(&x, &xp, gamma, stats).unwrap();
                let b = permutation_enumeration_with(&x, &xp, gamma, stats, EnumerationOrder::Heap).unwrap();
                assert!((a - want).abs() <= 1e-12 * want.abs().max(1e-300), "n={n} {stats:?}: {a} vs {want}");
                assert!((a - b).abs() <= 1e-13 * a.abs(), "n={n} {stats:?}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn size_guard() {
        let p = vec![vec![0.0]; 9];
        assert!(permutation_enumeration(&p, &p, 1.0, Statistics::Bose).is_err());
    }
}
