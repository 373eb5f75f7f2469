//! Determinant and permanent of small dense matrices.

use crate::error::{guard, Result};

/// Largest order accepted by [`permanent`].
pub const MAX_PERMANENT_ORDER: usize = 20;

/// Row-major square matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct SquareMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SquareMatrix {
    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        SquareMatrix { n, data }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }
}

/// Determinant by LU factorization with partial pivoting.
pub fn determinant(m: &SquareMatrix) -> f64 {
    let n = m.n;
    let mut a = m.data.clone();
    let mut det = 1.0;
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&p, &q| a[p * n + col].abs().total_cmp(&a[q * n + col].abs()))
            .unwrap_or(col);
        if a[pivot * n + col] == 0.0 {
            return 0.0;
        }
        if pivot != col {
            for j in 0..n {
                a.swap(pivot * n + j, col * n + j);
            }
            det = -det;
        }
        let p = a[col * n + col];
        det *= p;
        for row in col + 1..n {
            let f = a[row * n + col] / p;
            if f != 0.0 {
                for j in col + 1..n {
                    a[row * n + j] -= f * a[col * n + j];
                }
            }
        }
    }
    det
}

/// Permanent by Ryser's formula over Gray-code column subsets.
pub fn permanent(m: &SquareMatrix) -> Result<f64> {
    let n = m.n;
    guard("permanent order", n, MAX_PERMANENT_ORDER)?;
    if n == 0 {
        return Ok(1.0);
    }
    let mut row_sums = vec![0.0; n];
    let mut total = 0.0;
    let mut subset = 0u32;
    for step in 1u32..(1u32 << n) {
        let col = step.trailing_zeros() as usize;
        subset ^= 1 << col;
        let sign = if subset >> col & 1 == 1 { 1.0 } else { -1.0 };
        for (i, rs) in row_sums.iter_mut().enumerate() {
            *rs += sign * m.get(i, col);
        }
        let prod: f64 = row_sums.iter().product();
        if (n - subset.count_ones() as usize) % 2 == 0 {
            total += prod;
        } else {
            total -= prod;
        }
    }
    Ok(total)
}
