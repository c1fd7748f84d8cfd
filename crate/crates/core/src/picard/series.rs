use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::{Field, Grid};

/// Uniform nodes `t_m = m T / n_steps`, `m = 0..=n_steps`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    t_final: f64,
    n_steps: usize,
}

impl TimeGrid {
    pub fn new(t_final: f64, n_steps: usize) -> Result<Self> {
        if !(t_final.is_finite() && t_final > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "time interval must be positive, got {t_final}"
            )));
        }
        if n_steps == 0 {
            return Err(Error::InvalidArgument("time grid needs at least one step".into()));
        }
        Ok(Self { t_final, n_steps })
    }

    pub fn t_final(&self) -> f64 {
        self.t_final
    }

    pub fn n_steps(&self) -> usize {
        self.n_steps
    }

    pub fn n_nodes(&self) -> usize {
        self.n_steps + 1
    }

    pub fn step(&self) -> f64 {
        self.t_final / self.n_steps as f64
    }

    pub fn node(&self, m: usize) -> f64 {
        if m == self.n_steps {
            self.t_final
        } else {
            m as f64 * self.step()
        }
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_nodes()).map(|m| self.node(m))
    }
}

/// One field per time node, all on one grid.
#[derive(Clone, Debug, PartialEq)]
pub struct FieldSeries {
    time_grid: TimeGrid,
    name: String,
    fields: Vec<Field>,
}

impl FieldSeries {
    pub fn new(time_grid: TimeGrid, name: impl Into<String>, fields: Vec<Field>) -> Result<Self> {
        if fields.len() != time_grid.n_nodes() {
            return Err(Error::InvalidArgument(format!(
                "series needs {} fields, got {}",
                time_grid.n_nodes(),
                fields.len()
            )));
        }
        if let Some(first) = fields.first() {
            if fields.iter().any(|f| f.grid() != first.grid()) {
                return Err(Error::GridMismatch("series fields on different grids".into()));
            }
        }
        Ok(Self {
            time_grid,
            name: name.into(),
            fields,
        })
    }

    pub fn from_fn(time_grid: TimeGrid, name: impl Into<String>, f: impl FnMut(f64) -> Field) -> Result<Self> {
        let fields = time_grid.nodes().map(f).collect();
        Self::new(time_grid, name, fields)
    }

    pub fn time_grid(&self) -> TimeGrid {
        self.time_grid
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn grid(&self) -> Grid {
        self.fields[0].grid()
    }

    pub fn fields(&self) -> &[Field] {
        &self.fields
    }

    pub fn at(&self, m: usize) -> &Field {
        &self.fields[m]
    }

    pub fn to_spectral(&self) -> FieldSeries {
        FieldSeries {
            time_grid: self.time_grid,
            name: self.name.clone(),
            fields: self.fields.iter().map(Field::to_spectral).collect(),
        }
    }

    /// Node-wise map, keeping the time grid.
    pub fn map(&self, name: impl Into<String>, f: impl FnMut(&Field) -> Field) -> FieldSeries {
        FieldSeries {
            time_grid: self.time_grid,
            name: name.into(),
            fields: self.fields.iter().map(f).collect(),
        }
    }

    /// Node-wise combination of two series.
    pub fn zip_map(
        &self,
        other: &FieldSeries,
        name: impl Into<String>,
        mut f: impl FnMut(&Field, &Field) -> Field,
    ) -> Result<FieldSeries> {
        if self.time_grid != other.time_grid {
            return Err(Error::InvalidArgument("series on different time grids".into()));
        }
        if self.grid() != other.grid() {
            return Err(Error::GridMismatch("series on different grids".into()));
        }
        Ok(FieldSeries {
            time_grid: self.time_grid,
            name: name.into(),
            fields: self
                .fields
                .iter()
                .zip(&other.fields)
                .map(|(a, b)| f(a, b))
                .collect(),
        })
    }

    /// `self + alpha * other` node-wise, in spectral representation.
    pub fn axpy(&self, alpha: f64, other: &FieldSeries) -> Result<FieldSeries> {
        self.zip_map(other, self.name.clone(), |a, b| {
            a.to_spectral()
                .axpy(alpha.into(), &b.to_spectral())
                .expect("same grid")
        })
    }

    pub fn is_finite(&self) -> bool {
        self.fields.iter().all(Field::is_finite)
    }
}
