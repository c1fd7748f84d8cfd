use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::field::Field;
use super::grid::Grid;
use crate::error::Error;

/// First-order derivative appearing in the nonlinearity `(du)^2`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Derivative {
    #[serde(rename = "t")]
    Time,
    #[default]
    X1,
    X2,
}

impl Derivative {
    /// Spatial axis (0 or 1) for spatial derivatives.
    pub fn axis(self) -> Option<usize> {
        match self {
            Derivative::Time => None,
            Derivative::X1 => Some(0),
            Derivative::X2 => Some(1),
        }
    }
}

impl fmt::Display for Derivative {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Derivative::Time => "t",
            Derivative::X1 => "x1",
            Derivative::X2 => "x2",
        })
    }
}

impl FromStr for Derivative {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "t" | "time" => Ok(Derivative::Time),
            "x1" => Ok(Derivative::X1),
            "x2" => Ok(Derivative::X2),
            other => Err(Error::InvalidArgument(format!(
                "unknown derivative {other:?}, expected t, x1 or x2"
            ))),
        }
    }
}

/// Fourier multipliers on the periodic lattice.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum MultiplierKind {
    /// `cos(t|xi|)`.
    CosHalfwave(f64),
    /// `sin(t|xi|)/|xi|`, equal to `t` at the origin.
    SincHalfwave(f64),
    /// `d/dt cos(t|xi|) = -|xi| sin(t|xi|)`.
    CosHalfwaveRate(f64),
    /// `i xi_axis`.
    SpatialDerivative(usize),
    /// `|xi|`.
    GradientMagnitude,
    /// The Duhamel kernel `d sin(tau|xi|)/|xi|` for the chosen derivative.
    M01 { tau: f64, derivative: Derivative },
    /// Indicator of the two-thirds band `|m_i| <= n/3`.
    Dealias,
}

fn sinc_halfwave(t: f64, w: f64) -> f64 {
    if w == 0.0 {
        t
    } else {
        (t * w).sin() / w
    }
}

impl MultiplierKind {
    /// Symbol value at a flat spectral index.
    ///
    /// Odd symbols (`i xi_axis`) vanish on the Nyquist row so that real input
    /// stays real.
    pub fn symbol(&self, grid: &Grid, flat: usize) -> Complex64 {
        let xi = grid.frequency(flat);
        let w = (xi[0] * xi[0] + xi[1] * xi[1]).sqrt();
        let odd = |axis: usize| -> Complex64 {
            if grid.is_nyquist(flat, axis) {
                Complex64::default()
            } else {
                Complex64::new(0.0, xi[axis])
            }
        };
        match *self {
            MultiplierKind::CosHalfwave(t) => (t * w).cos().into(),
            MultiplierKind::SincHalfwave(t) => sinc_halfwave(t, w).into(),
            MultiplierKind::CosHalfwaveRate(t) => (-w * (t * w).sin()).into(),
            MultiplierKind::SpatialDerivative(axis) => odd(axis),
            MultiplierKind::GradientMagnitude => w.into(),
            MultiplierKind::M01 { tau, derivative } => match derivative.axis() {
                None => (tau * w).cos().into(),
                Some(axis) => odd(axis) * sinc_halfwave(tau, w),
            },
            MultiplierKind::Dealias => {
                let n = grid.n_points();
                let cut = grid.dealias_cutoff();
                let m1 = grid.mode_number(flat / n).abs();
                let m2 = grid.mode_number(flat % n).abs();
                if m1 <= cut && m2 <= cut {
                    Complex64::new(1.0, 0.0)
                } else {
                    Complex64::default()
                }
            }
        }
    }

    /// All symbol values in flat spectral order.
    pub fn symbols(&self, grid: &Grid) -> Vec<Complex64> {
        (0..grid.len()).map(|i| self.symbol(grid, i)).collect()
    }
}

/// Multiply each spectral amplitude by the symbol; physical input is
/// transformed first and the result is spectral.
pub fn apply_multiplier(field: &Field, kind: MultiplierKind) -> Field {
    let mut out = field.to_spectral();
    let grid = out.grid();
    for (i, z) in out.data_mut().iter_mut().enumerate() {
        *z *= kind.symbol(&grid, i);
    }
    out
}
