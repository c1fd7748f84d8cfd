//! Trapezoidal Duhamel integrals `int_0^t K(t - s) F(s) ds` for the wave
//! kernels `sin((t-s)|xi|)/|xi|`, `cos((t-s)|xi|)` and their spatial
//! derivatives.
//!
//! The kernels split by the angle-addition formulas, so the quadrature sum
//! at node `t_m` is a combination of running sums over `s_l <= t_m`. This
//! gives the same composite trapezoid rule as evaluating every lag
//! `t_m - s_l` directly, at `O(n_steps)` instead of `O(n_steps^2)` cost.

use num_complex::Complex64;

use super::series::FieldSeries;
use crate::error::{Error, Result};
use crate::spectral::{Derivative, Field, Lattice, Representation};

/// Output quantity of a Duhamel integral.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DuhamelKernel {
    /// `sin((t-s)|xi|)/|xi|`: the solution `u` itself.
    Sinc,
    /// `cos((t-s)|xi|)`: the time derivative `d_t u`.
    Cos,
    /// `d sin((t-s)|xi|)/|xi|`; the time derivative maps to [`DuhamelKernel::Cos`].
    Derivative(Derivative),
}

impl DuhamelKernel {
    fn resolve(self) -> (bool, Option<usize>) {
        // (cos kernel?, spatial axis)
        match self {
            DuhamelKernel::Sinc => (false, None),
            DuhamelKernel::Cos => (true, None),
            DuhamelKernel::Derivative(d) => match d.axis() {
                None => (true, None),
                Some(a) => (false, Some(a)),
            },
        }
    }
}

/// Trapezoid-rule Duhamel integral of `source` for each kernel.
pub fn duhamel_many(source: &FieldSeries, kernels: &[DuhamelKernel]) -> Result<Vec<FieldSeries>> {
    let tg = source.time_grid();
    if tg.n_nodes() < 2 {
        return Err(Error::InvalidArgument("Duhamel needs at least two time nodes".into()));
    }
    let grid = source.grid();
    let lattice = Lattice::for_grid(grid);
    let src: Vec<Field> = source.fields().iter().map(Field::to_spectral).collect();
    let nn = tg.n_nodes();
    let h = tg.step();
    let times: Vec<f64> = tg.nodes().collect();
    let mut out: Vec<Vec<Vec<Complex64>>> = kernels
        .iter()
        .map(|_| vec![vec![Complex64::default(); grid.len()]; nn])
        .collect();
    let resolved: Vec<(bool, Option<usize>)> = kernels.iter().map(|k| k.resolve()).collect();

    let mut cs = vec![(0.0, 0.0); nn];
    for i in 0..grid.len() {
        let w = lattice.omega[i];
        if src.iter().all(|f| f.data()[i] == Complex64::default()) {
            continue;
        }
        for (m, t) in times.iter().enumerate() {
            cs[m] = ((t * w).cos(), (t * w).sin());
        }
        let s0 = src[0].data()[i];
        // Running sums of cos(s w) F(s), sin(s w) F(s), F(s) and s F(s).
        let (mut a, mut b, mut p, mut q) = (
            Complex64::default(),
            Complex64::default(),
            Complex64::default(),
            Complex64::default(),
        );
        for m in 0..nn {
            let sm = src[m].data()[i];
            a += sm * cs[m].0;
            b += sm * cs[m].1;
            p += sm;
            q += sm * times[m];
            if m == 0 {
                continue;
            }
            let (c, s) = cs[m];
            let t = times[m];
            for (k, &(is_cos, axis)) in resolved.iter().enumerate() {
                let value = if is_cos {
                    // sum_l cos((t - s_l) w) F_l, minus half of the endpoints.
                    let full = a * c + b * s;
                    let first = s0 * c;
                    h * (full - (first + sm) * 0.5)
                } else {
                    let (full, first) = if w == 0.0 {
                        (p * t - q, s0 * t)
                    } else {
                        ((a * s - b * c) / w, s0 * (s / w))
                    };
                    let v = h * (full - first * 0.5);
                    match axis {
                        Some(ax) => v * lattice.derivative[ax][i],
                        None => v,
                    }
                };
                out[k][m][i] = value;
            }
        }
    }
    out.into_iter()
        .zip(kernels)
        .map(|(fields, k)| {
            let fields = fields
                .into_iter()
                .map(|d| Field::from_data(grid, Representation::Spectral, d))
                .collect::<Result<Vec<_>>>()?;
            FieldSeries::new(tg, format!("duhamel[{k:?}]"), fields)
        })
        .collect()
}

pub fn duhamel(source: &FieldSeries, kernel: DuhamelKernel) -> Result<FieldSeries> {
    Ok(duhamel_many(source, &[kernel])?.pop().expect("one kernel"))
}

/// The same trapezoid rule evaluated lag by lag; `O(n_steps^2)` reference.
pub fn duhamel_direct(source: &FieldSeries, kernel: DuhamelKernel) -> Result<FieldSeries> {
    let tg = source.time_grid();
    if tg.n_nodes() < 2 {
        return Err(Error::InvalidArgument("Duhamel needs at least two time nodes".into()));
    }
    let grid = source.grid();
    let lattice = Lattice::for_grid(grid);
    let (is_cos, axis) = kernel.resolve();
    let src: Vec<Field> = source.fields().iter().map(Field::to_spectral).collect();
    let h = tg.step();
    let mut fields = Vec::with_capacity(tg.n_nodes());
    for m in 0..tg.n_nodes() {
        let t = tg.node(m);
        let mut acc = vec![Complex64::default(); grid.len()];
        for l in 0..=m {
            if m == 0 {
                break;
            }
            let wgt = if l == 0 || l == m { 0.5 * h } else { h };
            let lag = t - tg.node(l);
            for (i, z) in acc.iter_mut().enumerate() {
                let w = lattice.omega[i];
                let k = if is_cos {
                    Complex64::new((lag * w).cos(), 0.0)
                } else {
                    let sinc = if w == 0.0 { lag } else { (lag * w).sin() / w };
                    match axis {
                        Some(ax) => lattice.derivative[ax][i] * sinc,
                        None => Complex64::new(sinc, 0.0),
                    }
                };
                *z += k * src[l].data()[i] * wgt;
            }
        }
        fields.push(Field::from_data(grid, Representation::Spectral, acc)?);
    }
    FieldSeries::new(tg, format!("duhamel_direct[{kernel:?}]"), fields)
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::picard::TimeGrid;
    use crate::spectral::Grid;

    fn source(tg: TimeGrid) -> FieldSeries {
        let g = Grid::new(16, 2.0 * PI).unwrap();
        FieldSeries::from_fn(tg, "f", |t| {
            Field::from_real_fn(g, |x1, x2| (x1 + t).cos() * (2.0 * x2).sin() + t * t * x1.sin())
        })
        .unwrap()
    }

    #[test]
    fn running_sum_matches_direct_lags() {
        let tg = TimeGrid::new(1.3, 20).unwrap();
        let src = source(tg);
        for kernel in [
            DuhamelKernel::Sinc,
            DuhamelKernel::Cos,
            DuhamelKernel::Derivative(Derivative::X1),
            DuhamelKernel::Derivative(Derivative::X2),
            DuhamelKernel::Derivative(Derivative::Time),
        ] {
            let fast = duhamel(&src, kernel).unwrap();
            let slow = duhamel_direct(&src, kernel).unwrap();
            for (a, b) in fast.fields().iter().zip(slow.fields()) {
                for (x, y) in a.data().iter().zip(b.data()) {
                    assert!((x - y).norm() < 1e-12, "{kernel:?}: {x} vs {y}");
                }
            }
        }
    }

    #[test]
    fn zero_source_gives_zero() {
        let g = Grid::new(8, 2.0 * PI).unwrap();
        let tg = TimeGrid::new(1.0, 4).unwrap();
        let src = FieldSeries::from_fn(tg, "0", |_| Field::zeros(g, Representation::Spectral)).unwrap();
        let out = duhamel(&src, DuhamelKernel::Derivative(Derivative::X1)).unwrap();
        assert!(out.fields().iter().all(|f| f.max_abs() == 0.0));
    }
}
