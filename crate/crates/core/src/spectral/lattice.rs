use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;

use super::grid::Grid;
use super::multiplier::{Derivative, MultiplierKind};

/// Per-grid symbol tables for the hot loops.
#[derive(Debug)]
pub struct Lattice {
    pub grid: Grid,
    /// `|xi|` at each flat index.
    pub omega: Vec<f64>,
    /// `i xi_1` and `i xi_2`, zero on the Nyquist rows.
    pub derivative: [Vec<Complex64>; 2],
    /// Two-thirds-rule mask.
    pub dealias: Vec<bool>,
}

type Key = (usize, u64);
static TABLES: OnceLock<Mutex<HashMap<Key, Arc<Lattice>>>> = OnceLock::new();

impl Lattice {
    pub fn for_grid(grid: Grid) -> Arc<Lattice> {
        let cache = TABLES.get_or_init(|| Mutex::new(HashMap::new()));
        let mut cache = cache.lock().expect("lattice cache poisoned");
        cache
            .entry((grid.n_points(), grid.box_length().to_bits()))
            .or_insert_with(|| Arc::new(Lattice::build(grid)))
            .clone()
    }

    fn build(grid: Grid) -> Lattice {
        let omega = (0..grid.len())
            .map(|i| {
                let xi = grid.frequency(i);
                (xi[0] * xi[0] + xi[1] * xi[1]).sqrt()
            })
            .collect();
        let derivative = [
            MultiplierKind::SpatialDerivative(0).symbols(&grid),
            MultiplierKind::SpatialDerivative(1).symbols(&grid),
        ];
        let dealias = MultiplierKind::Dealias
            .symbols(&grid)
            .into_iter()
            .map(|z| z.re != 0.0)
            .collect();
        Lattice {
            grid,
            omega,
            derivative,
            dealias,
        }
    }

    /// Symbol of the spatial derivative, or `None` for the time derivative.
    pub fn spatial(&self, d: Derivative) -> Option<&[Complex64]> {
        d.axis().map(|a| self.derivative[a].as_slice())
    }
}
