//! Unit-scale Bernstein bounds on the periodic lattice.
//!
//! For a field whose spectrum sits in `N` lattice points,
//! `|f|_inf <= sqrt(N)/L |f|_2` and hence `|f|_4 <= N^(1/4) L^(-1/2) |f|_2`.
//! Writing this as `C0 |E|^(1/4) |f|_2` for a square `E` of side `s` gives
//! the constant returned by [`lattice_bernstein_constant`].

use super::field::Field;
use super::grid::Grid;
use super::norms::lp_norm;

/// Upper bound on the lattice points inside any translate of an open square
/// of side `side`.
pub fn lattice_points_in_square(grid: &Grid, side: f64) -> f64 {
    let per_axis = (side / grid.frequency_spacing()).floor() + 1.0;
    per_axis * per_axis
}

/// `C0` such that `|f|_4 <= C0 |E|^(1/4) |f|_2` whenever `supp f^` lies in a
/// square of side `side` (so `|E| = side^2`).
pub fn lattice_bernstein_constant(grid: &Grid, side: f64) -> f64 {
    let n = lattice_points_in_square(grid, side);
    (n / (side * side)).powf(0.25) / grid.box_length().sqrt()
}

/// Measured `|f|_4 / (|E|^(1/4) |f|_2)`; zero for the zero field.
pub fn bernstein_ratio(field: &Field, support_measure: f64) -> f64 {
    let l2 = lp_norm(field, 2.0).expect("p >= 1");
    if l2 == 0.0 {
        return 0.0;
    }
    lp_norm(field, 4.0).expect("p >= 1") / (support_measure.powf(0.25) * l2)
}
