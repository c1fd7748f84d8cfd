use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::field::{Field, Representation};
use super::grid::Grid;
use crate::error::{Error, Result};

/// Centre `k` of a unit frequency block, in the same units as `xi`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct BlockIndex(pub [i64; 2]);

impl fmt::Display for BlockIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.0[0], self.0[1])
    }
}

/// Quintic blend `6y^5 - 15y^4 + 10y^3` on `[0,1]`: C^2 at both ends and
/// `s(y) + s(1-y) = 1`.
fn blend(y: f64) -> f64 {
    y * y * y * (10.0 + y * (-15.0 + 6.0 * y))
}

/// One-dimensional bump: `eta(x) = s(1 - |x|)` for `|x| < 1`, else 0.
/// Integer translates sum to one.
pub fn eta(x: f64) -> f64 {
    let a = x.abs();
    if a >= 1.0 {
        0.0
    } else {
        blend(1.0 - a)
    }
}

/// Tensor bump `psi(xi) = eta(xi_1) eta(xi_2)`, supported in `(-1,1)^2`.
pub fn psi(xi: [f64; 2]) -> f64 {
    eta(xi[0]) * eta(xi[1])
}

/// Sparse spectrum of one block projection: `(flat index, amplitude)`.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockSpectrum {
    pub block: BlockIndex,
    pub entries: Vec<(usize, Complex64)>,
}

impl BlockSpectrum {
    pub fn to_field(&self, grid: Grid) -> Field {
        let mut f = Field::zeros(grid, Representation::Spectral);
        let data = f.data_mut();
        for &(i, z) in &self.entries {
            data[i] = z;
        }
        f
    }

    /// Spectral L^2 norm (continuum normalisation).
    pub fn l2_norm(&self, grid: &Grid) -> f64 {
        grid.dx() * self.entries.iter().map(|(_, z)| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn sobolev_norm(&self, grid: &Grid, s: f64) -> f64 {
        let sum: f64 = self
            .entries
            .iter()
            .map(|&(i, z)| {
                let xi = grid.frequency(i);
                let w2 = xi[0] * xi[0] + xi[1] * xi[1];
                if s > 0.0 && w2 == 0.0 {
                    0.0
                } else {
                    w2.powf(s) * z.norm_sqr()
                }
            })
            .sum();
        grid.dx() * sum.sqrt()
    }
}

/// Smooth partition of the frequency lattice into unit blocks.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitPartition {
    grid: Grid,
    lo: [i64; 2],
    hi: [i64; 2],
}

impl UnitPartition {
    pub fn new(grid: Grid) -> Self {
        let h = grid.frequency_spacing();
        let half = (grid.n_points() / 2) as f64;
        let lo = (-half * h).floor() as i64;
        let hi = ((half - 1.0) * h).ceil() as i64;
        Self {
            grid,
            lo: [lo, lo],
            hi: [hi, hi],
        }
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn contains(&self, k: BlockIndex) -> bool {
        (0..2).all(|a| k.0[a] >= self.lo[a] && k.0[a] <= self.hi[a])
    }

    /// Every block whose bump touches at least one lattice frequency.
    pub fn blocks(&self) -> Vec<BlockIndex> {
        let mut out = Vec::new();
        for k1 in self.lo[0]..=self.hi[0] {
            for k2 in self.lo[1]..=self.hi[1] {
                out.push(BlockIndex([k1, k2]));
            }
        }
        out
    }

    /// Lattice points inside the open support of block `k`, with weights.
    pub fn block_weights(&self, k: BlockIndex) -> Result<Vec<(usize, f64)>> {
        if !self.contains(k) {
            return Err(Error::BlockOutOfRange(k.0));
        }
        let g = &self.grid;
        let h = g.frequency_spacing();
        let half = (g.n_points() / 2) as i64;
        let range = |c: i64| {
            let a = (((c as f64) - 1.0) / h).floor() as i64;
            let b = (((c as f64) + 1.0) / h).ceil() as i64;
            a.max(-half)..=b.min(half - 1)
        };
        let mut out = Vec::new();
        for m1 in range(k.0[0]) {
            let w1 = eta(m1 as f64 * h - k.0[0] as f64);
            if w1 == 0.0 {
                continue;
            }
            let i1 = g.mode_index(m1).expect("in range");
            for m2 in range(k.0[1]) {
                let w2 = eta(m2 as f64 * h - k.0[1] as f64);
                if w2 == 0.0 {
                    continue;
                }
                let i2 = g.mode_index(m2).expect("in range");
                out.push((i1 * g.n_points() + i2, w1 * w2));
            }
        }
        Ok(out)
    }

    /// Sparse `P_k f`.
    pub fn project_sparse(&self, field: &Field, k: BlockIndex) -> Result<BlockSpectrum> {
        if field.grid() != self.grid {
            return Err(Error::GridMismatch("field and partition grids differ".into()));
        }
        let spec = field.to_spectral();
        let data = spec.data();
        let entries = self
            .block_weights(k)?
            .into_iter()
            .map(|(i, w)| (i, data[i] * w))
            .collect();
        Ok(BlockSpectrum { block: k, entries })
    }

    /// `P_k f` as a spectral field.
    pub fn unit_projection(&self, field: &Field, k: BlockIndex) -> Result<Field> {
        Ok(self.project_sparse(field, k)?.to_field(self.grid))
    }

    /// `sum_k psi(xi - k)` at a flat spectral index.
    pub fn coverage(&self, flat: usize) -> f64 {
        let xi = self.grid.frequency(flat);
        let mut s = 0.0;
        for k1 in (xi[0].floor() as i64)..=(xi[0].ceil() as i64) {
            for k2 in (xi[1].floor() as i64)..=(xi[1].ceil() as i64) {
                s += psi([xi[0] - k1 as f64, xi[1] - k2 as f64]);
            }
        }
        s
    }
}
