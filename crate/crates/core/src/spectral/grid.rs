use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Periodic square `[0, L)^2` sampled at `n x n` points.
///
/// Storage is row-major with axis 1 as the slow index: the sample at
/// `(i1, i2)` lives at `i1 * n + i2`. Spectral arrays use the same layout in
/// FFT order, so mode number `m` sits at index `m` for `m >= 0` and `n + m`
/// otherwise.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    n_points: usize,
    box_length: f64,
}

impl Grid {
    pub fn new(n_points: usize, box_length: f64) -> Result<Self> {
        if n_points < 8 || !n_points.is_power_of_two() {
            return Err(Error::InvalidGrid(format!(
                "n_points must be a power of two >= 8, got {n_points}"
            )));
        }
        if !(box_length.is_finite() && box_length > 0.0) {
            return Err(Error::InvalidGrid(format!(
                "box_length must be positive, got {box_length}"
            )));
        }
        if 2.0 * PI / box_length > 1.0 + 1e-12 {
            return Err(Error::InvalidGrid(format!(
                "frequency spacing 2*pi/L = {} exceeds 1",
                2.0 * PI / box_length
            )));
        }
        Ok(Self {
            n_points,
            box_length,
        })
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn box_length(&self) -> f64 {
        self.box_length
    }

    /// Total number of samples, `n^2`.
    pub fn len(&self) -> usize {
        self.n_points * self.n_points
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dx(&self) -> f64 {
        self.box_length / self.n_points as f64
    }

    pub fn frequency_spacing(&self) -> f64 {
        2.0 * PI / self.box_length
    }

    /// Signed mode number for a 1-D FFT index, in `[-n/2, n/2)`.
    pub fn mode_number(&self, i: usize) -> i64 {
        let n = self.n_points as i64;
        let i = i as i64;
        if i < n / 2 {
            i
        } else {
            i - n
        }
    }

    /// FFT index for a signed mode number, if it is on the lattice.
    pub fn mode_index(&self, m: i64) -> Option<usize> {
        let n = self.n_points as i64;
        if m < -n / 2 || m >= n / 2 {
            return None;
        }
        Some(m.rem_euclid(n) as usize)
    }

    /// Frequency vector at a flat spectral index.
    pub fn frequency(&self, flat: usize) -> [f64; 2] {
        let h = self.frequency_spacing();
        let (i1, i2) = (flat / self.n_points, flat % self.n_points);
        [
            h * self.mode_number(i1) as f64,
            h * self.mode_number(i2) as f64,
        ]
    }

    /// Whether either component of the mode at `flat` sits on the Nyquist row.
    pub fn is_nyquist(&self, flat: usize, axis: usize) -> bool {
        let i = if axis == 0 {
            flat / self.n_points
        } else {
            flat % self.n_points
        };
        i == self.n_points / 2
    }

    /// Physical coordinates of the sample at `flat`.
    pub fn position(&self, flat: usize) -> [f64; 2] {
        let dx = self.dx();
        [
            dx * (flat / self.n_points) as f64,
            dx * (flat % self.n_points) as f64,
        ]
    }

    /// Flat index of the lattice point `-xi` for the point at `flat`.
    pub fn conjugate_index(&self, flat: usize) -> usize {
        let n = self.n_points;
        let (i1, i2) = (flat / n, flat % n);
        ((n - i1) % n) * n + (n - i2) % n
    }

    /// Largest retained mode number under the two-thirds rule.
    pub fn dealias_cutoff(&self) -> i64 {
        (self.n_points / 3) as i64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spacing_for_sixteen_pi_box() {
        let g = Grid::new(64, 16.0 * PI).unwrap();
        assert!((g.frequency_spacing() - 0.125).abs() < 1e-15);
    }

    #[test]
    fn small_grid_mode_range() {
        let g = Grid::new(8, 2.0 * PI).unwrap();
        let modes: Vec<i64> = (0..8).map(|i| g.mode_number(i)).collect();
        assert_eq!(modes.iter().min(), Some(&-4));
        assert_eq!(modes.iter().max(), Some(&3));
        assert!((g.frequency_spacing() - 1.0).abs() < 1e-15);
        for m in -4..4 {
            assert_eq!(g.mode_number(g.mode_index(m).unwrap()), m);
        }
        assert_eq!(g.mode_index(4), None);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(Grid::new(65, 2.0 * PI).is_err());
        assert!(Grid::new(4, 2.0 * PI).is_err());
        assert!(Grid::new(64, 0.0).is_err());
        assert!(Grid::new(64, -1.0).is_err());
        assert!(Grid::new(64, 1.0).is_err());
    }

    #[test]
    fn conjugate_index_is_involution() {
        let g = Grid::new(16, 2.0 * PI).unwrap();
        for f in 0..g.len() {
            assert_eq!(g.conjugate_index(g.conjugate_index(f)), f);
        }
    }
}
