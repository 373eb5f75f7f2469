use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// External one-body potential felt by every particle.
///
/// The total potential of a configuration is the sum of the one-body terms.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Potential {
    /// `V = 0`; particles are confined only through the box volume.
    #[default]
    Zero,
    /// Isotropic harmonic well `½ m ω² |x_i − c|²` per particle. An empty
    /// `center` means the origin.
    Harmonic {
        omega: f64,
        #[serde(default)]
        center: Vec<f64>,
    },
    /// Multilinear interpolation of a one-body table; `+∞` outside the grid.
    Table(TablePotential),
}

impl Potential {
    pub fn harmonic(omega: f64) -> Self {
        Potential::Harmonic {
            omega,
            center: Vec::new(),
        }
    }

    pub(crate) fn validate(&self, dim: usize) -> Result<()> {
        match self {
            Potential::Zero => Ok(()),
            Potential::Harmonic { omega, center } => {
                if !(*omega > 0.0) || !omega.is_finite() {
                    return Err(Error::Domain(format!("omega must be positive, got {omega}")));
                }
                if !center.is_empty() && center.len() != dim {
                    return Err(Error::Domain(format!(
                        "harmonic center has {} components, expected {dim}",
                        center.len()
                    )));
                }
                Ok(())
            }
            Potential::Table(t) => {
                t.validate()?;
                if t.dims != dim {
                    return Err(Error::Table(format!(
                        "table has {} dims but particles live in {dim}",
                        t.dims
                    )));
                }
                Ok(())
            }
        }
    }

    /// One-body energy of a single particle at `pos`.
    pub fn one_body(&self, mass: f64, pos: &[f64]) -> f64 {
        match self {
            Potential::Zero => 0.0,
            Potential::Harmonic { omega, center } => {
                let r2: f64 = if center.is_empty() {
                    pos.iter().map(|v| v * v).sum()
                } else {
                    pos.iter().zip(center).map(|(a, c)| (a - c) * (a - c)).sum()
                };
                0.5 * mass * omega * omega * r2
            }
            Potential::Table(t) => t.eval(pos),
        }
    }

    /// Smallest value the one-body term attains.
    pub fn one_body_minimum(&self) -> f64 {
        match self {
            Potential::Zero | Potential::Harmonic { .. } => 0.0,
            Potential::Table(t) => t.values.iter().copied().fold(f64::INFINITY, f64::min),
        }
    }

    pub(crate) fn center_component(&self, axis: usize) -> f64 {
        match self {
            Potential::Harmonic { center, .. } if !center.is_empty() => center[axis],
            _ => 0.0,
        }
    }
}

/// One-body potential sampled on a rectilinear grid.
///
/// JSON layout: `{"dims": D, "grid": [[x0, x1, ...], ...], "values": [...]}`
/// with one strictly increasing coordinate array per axis and the values in
/// row-major order (last axis fastest).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TablePotential {
    pub dims: usize,
    pub grid: Vec<Vec<f64>>,
    pub values: Vec<f64>,
}

// 8-point Gauss–Legendre nodes and weights on [-1, 1].
const GL8_NODES: [f64; 8] = [
    -0.960_289_856_497_536_3,
    -0.796_666_477_413_626_7,
    -0.525_532_409_916_329,
    -0.183_434_642_495_649_8,
    0.183_434_642_495_649_8,
    0.525_532_409_916_329,
    0.796_666_477_413_626_7,
    0.960_289_856_497_536_3,
];
const GL8_WEIGHTS: [f64; 8] = [
    0.101_228_536_290_376_26,
    0.222_381_034_453_374_47,
    0.313_706_645_877_887_3,
    0.362_683_783_378_362,
    0.362_683_783_378_362,
    0.313_706_645_877_887_3,
    0.222_381_034_453_374_47,
    0.101_228_536_290_376_26,
];

impl TablePotential {
    pub fn from_json(text: &str) -> Result<Self> {
        let t: TablePotential =
            serde_json::from_str(text).map_err(|e| Error::Table(e.to_string()))?;
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        if self.dims == 0 || self.grid.len() != self.dims {
            return Err(Error::Table(format!(
                "expected {} coordinate arrays, found {}",
                self.dims,
                self.grid.len()
            )));
        }
        for (axis, g) in self.grid.iter().enumerate() {
            if g.len() < 2 || g.windows(2).any(|w| !(w[1] > w[0])) {
                return Err(Error::Table(format!(
                    "axis {axis} needs at least two strictly increasing nodes"
                )));
            }
        }
        let expected: usize = self.grid.iter().map(Vec::len).product();
        if self.values.len() != expected {
            return Err(Error::Table(format!(
                "expected {expected} values, found {}",
                self.values.len()
            )));
        }
        if self.values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Table("values must be finite".into()));
        }
        Ok(())
    }

    pub fn lower(&self) -> Vec<f64> {
        self.grid.iter().map(|g| g[0]).collect()
    }

    pub fn upper(&self) -> Vec<f64> {
        self.grid.iter().map(|g| g[g.len() - 1]).collect()
    }

    pub fn eval(&self, pos: &[f64]) -> f64 {
        let mut cell = Vec::with_capacity(self.dims);
        let mut frac = Vec::with_capacity(self.dims);
        for (g, &p) in self.grid.iter().zip(pos) {
            if !(p >= g[0] && p <= g[g.len() - 1]) {
                return f64::INFINITY;
            }
            let i = (g.partition_point(|&node| node <= p).max(1) - 1).min(g.len() - 2);
            cell.push(i);
            frac.push((p - g[i]) / (g[i + 1] - g[i]));
        }
        let mut total = 0.0;
        for corner in 0..(1usize << self.dims) {
            let mut weight = 1.0;
            let mut flat = 0usize;
            for axis in 0..self.dims {
                let up = (corner >> axis) & 1;
                weight *= if up == 1 { frac[axis] } else { 1.0 - frac[axis] };
                flat = flat * self.grid[axis].len() + cell[axis] + up;
            }
            if weight != 0.0 {
                total += weight * self.values[flat];
            }
        }
        total
    }

    /// `∫ e^{−β (v(y) − shift)} dy` over the grid box, Gauss–Legendre per cell.
    pub(crate) fn boltzmann_integral(&self, beta: f64, shift: f64) -> f64 {
        let mut point = vec![0.0; self.dims];
        self.cell_sum(0, &mut point, 1.0, &|v| (-beta * (v - shift)).exp())
    }

    /// `∫ v(y) e^{−β (v(y) − shift)} dy` over the grid box.
    pub(crate) fn boltzmann_moment(&self, beta: f64, shift: f64) -> f64 {
        let mut point = vec![0.0; self.dims];
        self.cell_sum(0, &mut point, 1.0, &|v| v * (-beta * (v - shift)).exp())
    }

    fn cell_sum(&self, axis: usize, point: &mut [f64], weight: f64, f: &dyn Fn(f64) -> f64) -> f64 {
        if axis == self.dims {
            return weight * f(self.eval(point));
        }
        let mut total = 0.0;
        for w in self.grid[axis].windows(2) {
            let half = 0.5 * (w[1] - w[0]);
            let mid = 0.5 * (w[1] + w[0]);
            for (node, gw) in GL8_NODES.iter().zip(GL8_WEIGHTS) {
                point[axis] = mid + half * node;
                total += self.cell_sum(axis + 1, point, weight * gw * half, f);
            }
        }
        total
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ramp() -> TablePotential {
        TablePotential::from_json(
            r#"{"dims": 2, "grid": [[0, 1, 2], [0, 2]], "values": [0, 2, 1, 3, 2, 4]}"#,
        )
        .unwrap()
    }

    #[test]
    fn multilinear_reproduces_linear_function() {
        // values = x + y on the nodes
        let t = ramp();
        for (x, y) in [(0.0, 0.0), (0.5, 1.0), (1.7, 0.3), (2.0, 2.0)] {
            assert!((t.eval(&[x, y]) - (x + y)).abs() < 1e-14);
        }
        assert_eq!(t.eval(&[2.1, 0.0]), f64::INFINITY);
        assert_eq!(t.eval(&[-0.1, 0.0]), f64::INFINITY);
    }

    #[test]
    fn boltzmann_integral_of_linear_table() {
        // ∫_0^2∫_0^2 e^{-(x+y)} = (1 - e^{-2})^2
        let t = ramp();
        let want = (1.0 - (-2.0f64).exp()).powi(2);
        assert!((t.boltzmann_integral(1.0, 0.0) - want).abs() < 1e-12);
    }

    #[test]
    fn rejects_malformed_tables() {
        assert!(TablePotential::from_json(r#"{"dims":1,"grid":[[0,0]],"values":[1,2]}"#).is_err());
        assert!(TablePotential::from_json(r#"{"dims":1,"grid":[[0,1]],"values":[1]}"#).is_err());
        assert!(TablePotential::from_json(r#"{"dims":2,"grid":[[0,1]],"values":[1,2]}"#).is_err());
    }

    #[test]
    fn serde_tags() {
        let p: Potential = serde_json::from_str(r#"{"kind":"harmonic","omega":2.0}"#).unwrap();
        assert_eq!(p, Potential::harmonic(2.0));
        let z: Potential = serde_json::from_str(r#"{"kind":"zero"}"#).unwrap();
        assert_eq!(z, Potential::Zero);
        let t: Potential = serde_json::from_str(
            r#"{"kind":"table","dims":1,"grid":[[0,1]],"values":[0,1]}"#,
        )
        .unwrap();
        assert!(matches!(t, Potential::Table(_)));
    }

    #[test]
    fn harmonic_is_nonnegative_and_zero_at_center() {
        let p = Potential::Harmonic {
            omega: 1.5,
            center: vec![1.0, -2.0],
        };
        assert_eq!(p.one_body(2.0, &[1.0, -2.0]), 0.0);
        assert!((p.one_body(2.0, &[2.0, -2.0]) - 2.25).abs() < 1e-15);
    }
}
