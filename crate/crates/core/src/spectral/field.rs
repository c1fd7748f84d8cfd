use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::fft::Fft2;
use super::grid::Grid;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Representation {
    Physical,
    Spectral,
}

impl Representation {
    pub fn name(self) -> &'static str {
        match self {
            Representation::Physical => "physical",
            Representation::Spectral => "spectral",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Inverse,
}

/// A scalar field on a [`Grid`], either as samples or as unitary DFT
/// amplitudes.
///
/// Samples are stored as complex numbers: the unit-scale projections of a
/// real function are complex-valued, and so are the randomized sums built
/// from them.
#[derive(Clone, Debug, PartialEq)]
pub struct Field {
    grid: Grid,
    repr: Representation,
    data: Vec<Complex64>,
}

impl Field {
    pub fn zeros(grid: Grid, repr: Representation) -> Self {
        Self {
            grid,
            repr,
            data: vec![Complex64::default(); grid.len()],
        }
    }

    pub fn from_data(grid: Grid, repr: Representation, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != grid.len() {
            return Err(Error::InvalidArgument(format!(
                "expected {} samples, got {}",
                grid.len(),
                data.len()
            )));
        }
        Ok(Self { grid, repr, data })
    }

    /// Real physical field sampled from `f(x1, x2)`.
    pub fn from_real_fn(grid: Grid, f: impl Fn(f64, f64) -> f64) -> Self {
        let data = (0..grid.len())
            .map(|i| {
                let [x1, x2] = grid.position(i);
                Complex64::new(f(x1, x2), 0.0)
            })
            .collect();
        Self {
            grid,
            repr: Representation::Physical,
            data,
        }
    }

    pub fn from_complex_fn(grid: Grid, f: impl Fn(f64, f64) -> Complex64) -> Self {
        let data = (0..grid.len())
            .map(|i| {
                let [x1, x2] = grid.position(i);
                f(x1, x2)
            })
            .collect();
        Self {
            grid,
            repr: Representation::Physical,
            data,
        }
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn representation(&self) -> Representation {
        self.repr
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    pub fn into_data(self) -> Vec<Complex64> {
        self.data
    }

    /// Strict transform: the field must be in the source representation.
    pub fn transform(&self, direction: Direction) -> Result<Field> {
        let (from, to) = match direction {
            Direction::Forward => (Representation::Physical, Representation::Spectral),
            Direction::Inverse => (Representation::Spectral, Representation::Physical),
        };
        if self.repr != from {
            return Err(Error::Representation {
                expected: from.name(),
                found: self.repr.name(),
            });
        }
        let mut data = self.data.clone();
        let plan = Fft2::plan(self.grid.n_points());
        match direction {
            Direction::Forward => plan.forward(&mut data),
            Direction::Inverse => plan.inverse(&mut data),
        }
        Ok(Field {
            grid: self.grid,
            repr: to,
            data,
        })
    }

    pub fn to_spectral(&self) -> Field {
        match self.repr {
            Representation::Spectral => self.clone(),
            Representation::Physical => self.transform(Direction::Forward).expect("physical"),
        }
    }

    pub fn to_physical(&self) -> Field {
        match self.repr {
            Representation::Physical => self.clone(),
            Representation::Spectral => self.transform(Direction::Inverse).expect("spectral"),
        }
    }

    pub fn into_spectral(self) -> Field {
        match self.repr {
            Representation::Spectral => self,
            Representation::Physical => {
                let mut f = self;
                Fft2::plan(f.grid.n_points()).forward(&mut f.data);
                f.repr = Representation::Spectral;
                f
            }
        }
    }

    pub fn into_physical(self) -> Field {
        match self.repr {
            Representation::Physical => self,
            Representation::Spectral => {
                let mut f = self;
                Fft2::plan(f.grid.n_points()).inverse(&mut f.data);
                f.repr = Representation::Physical;
                f
            }
        }
    }

    /// Largest imaginary part of the physical samples.
    pub fn max_imaginary(&self) -> f64 {
        self.to_physical()
            .data
            .iter()
            .fold(0.0, |m, z| m.max(z.im.abs()))
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    fn check_compatible(&self, other: &Field) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch(format!(
                "{:?} vs {:?}",
                self.grid, other.grid
            )));
        }
        if self.repr != other.repr {
            return Err(Error::Representation {
                expected: self.repr.name(),
                found: other.repr.name(),
            });
        }
        Ok(())
    }

    /// `self + alpha * other`, both in the same representation.
    pub fn axpy(&self, alpha: Complex64, other: &Field) -> Result<Field> {
        self.check_compatible(other)?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + alpha * b)
            .collect();
        Ok(Field {
            grid: self.grid,
            repr: self.repr,
            data,
        })
    }

    pub fn add_assign_scaled(&mut self, alpha: f64, other: &Field) -> Result<()> {
        self.check_compatible(other)?;
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += b * alpha;
        }
        Ok(())
    }

    pub fn scaled(&self, alpha: Complex64) -> Field {
        Field {
            grid: self.grid,
            repr: self.repr,
            data: self.data.iter().map(|z| z * alpha).collect(),
        }
    }

    /// Pointwise product of two physical fields.
    pub fn pointwise_mul(&self, other: &Field) -> Result<Field> {
        self.check_compatible(other)?;
        if self.repr != Representation::Physical {
            return Err(Error::Representation {
                expected: "physical",
                found: self.repr.name(),
            });
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a * b).collect();
        Ok(Field {
            grid: self.grid,
            repr: self.repr,
            data,
        })
    }
}
