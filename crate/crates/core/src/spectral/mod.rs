//! Periodic spectral representation of fields and the Fourier multipliers
//! used by the free evolution, the Duhamel operator and the unit-scale
//! projections.

mod bernstein;
pub mod dump;
mod fft;
mod field;
mod grid;
mod lattice;
mod multiplier;
mod norms;
mod partition;

pub use bernstein::{bernstein_ratio, lattice_bernstein_constant, lattice_points_in_square};
pub use fft::Fft2;
pub use field::{Direction, Field, Representation};
pub use grid::Grid;
pub use lattice::Lattice;
pub use multiplier::{apply_multiplier, Derivative, MultiplierKind};
pub use norms::{lp_norm, sobolev_norm, spectral_l2_norm};
pub use partition::{eta, psi, BlockIndex, BlockSpectrum, UnitPartition};

/// Grid constructor with validation.
pub fn make_grid(n_points: usize, box_length: f64) -> crate::Result<Grid> {
    Grid::new(n_points, box_length)
}

/// Truncate to the two-thirds band, multiply in physical space, and truncate
/// the product again. Both factors and the result are spectral.
pub fn dealiased_product(a: &Field, b: &Field) -> Field {
    let fa = dealiased_physical(a);
    let fb = dealiased_physical(b);
    finish_product(fa.pointwise_mul(&fb).expect("same grid"))
}

/// `dealiased_product(a, a)` with one inverse transform.
pub fn dealiased_square(a: &Field) -> Field {
    let fa = dealiased_physical(a);
    finish_product(fa.pointwise_mul(&fa).expect("same grid"))
}

fn dealiased_physical(a: &Field) -> Field {
    let lattice = Lattice::for_grid(a.grid());
    let mut s = a.to_spectral();
    for (z, &keep) in s.data_mut().iter_mut().zip(&lattice.dealias) {
        if !keep {
            *z = num_complex::Complex64::default();
        }
    }
    s.into_physical()
}

fn finish_product(prod: Field) -> Field {
    let lattice = Lattice::for_grid(prod.grid());
    let mut s = prod.into_spectral();
    for (z, &keep) in s.data_mut().iter_mut().zip(&lattice.dealias) {
        if !keep {
            *z = num_complex::Complex64::default();
        }
    }
    s
}
