use super::field::Field;
use crate::error::{Error, Result};

/// `(sum |f|^p dx^2)^(1/p)`, or the max modulus for `p = inf`.
pub fn lp_norm(field: &Field, p: f64) -> Result<f64> {
    if !(p >= 1.0) {
        return Err(Error::InvalidArgument(format!("L^p norm needs p >= 1, got {p}")));
    }
    let phys = field.to_physical();
    Ok(lp_norm_of_samples(phys.data().iter().map(|z| z.norm()), field.grid().dx(), p))
}

fn lp_norm_of_samples(abs: impl Iterator<Item = f64>, dx: f64, p: f64) -> f64 {
    if p.is_infinite() {
        return abs.fold(0.0, f64::max);
    }
    let area = dx * dx;
    if p == 2.0 {
        return (abs.map(|a| a * a).sum::<f64>() * area).sqrt();
    }
    if p == 4.0 {
        return (abs.map(|a| (a * a) * (a * a)).sum::<f64>() * area).powf(0.25);
    }
    (abs.map(|a| a.powf(p)).sum::<f64>() * area).powf(1.0 / p)
}

/// Spectral L^2 norm scaled to match the physical one (Parseval).
pub fn spectral_l2_norm(field: &Field) -> f64 {
    let spec = field.to_spectral();
    field.grid().dx() * spec.data().iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Homogeneous `H^s` norm; the zero mode is dropped for `s > 0`.
pub fn sobolev_norm(field: &Field, s: f64) -> f64 {
    let spec = field.to_spectral();
    let grid = field.grid();
    let sum: f64 = spec
        .data()
        .iter()
        .enumerate()
        .map(|(i, z)| {
            let xi = grid.frequency(i);
            let w2 = xi[0] * xi[0] + xi[1] * xi[1];
            if w2 == 0.0 {
                if s > 0.0 {
                    0.0
                } else if s == 0.0 {
                    z.norm_sqr()
                } else {
                    f64::INFINITY
                }
            } else {
                w2.powf(s) * z.norm_sqr()
            }
        })
        .sum();
    grid.dx() * sum.sqrt()
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::spectral::Grid;

    #[test]
    fn constant_norms() {
        let l = 4.0 * PI;
        let g = Grid::new(16, l).unwrap();
        let f = Field::from_real_fn(g, |_, _| -2.5);
        for p in [1.0, 2.0, 3.0, 4.0] {
            let want = 2.5 * l.powf(2.0 / p);
            assert!((lp_norm(&f, p).unwrap() - want).abs() < 1e-12 * want);
        }
        assert!((lp_norm(&f, f64::INFINITY).unwrap() - 2.5).abs() < 1e-15);
        assert!(lp_norm(&f, 0.5).is_err());
        assert!(sobolev_norm(&f, 1.0) < 1e-12);
    }

    #[test]
    fn parseval_and_h0() {
        let g = Grid::new(32, 2.0 * PI).unwrap();
        let f = Field::from_real_fn(g, |x1, x2| (x1 - 2.0 * x2).sin() * (x1.cos() + 0.3).exp());
        let a = lp_norm(&f, 2.0).unwrap();
        assert!((a - spectral_l2_norm(&f)).abs() < 1e-12 * a);
        assert!((a - sobolev_norm(&f, 0.0)).abs() < 1e-12 * a);
    }

    #[test]
    fn cos4_integral() {
        let g = Grid::new(32, 2.0 * PI).unwrap();
        let f = Field::from_real_fn(g, |x1, _| x1.cos());
        let want = (3.0f64 / 8.0).powf(0.25) * (2.0 * PI).sqrt();
        assert!((lp_norm(&f, 4.0).unwrap() - want).abs() < 1e-12);
    }

    #[test]
    fn h1_of_plane_wave() {
        let g = Grid::new(32, 2.0 * PI).unwrap();
        let f = Field::from_real_fn(g, |x1, x2| (3.0 * x1 + 4.0 * x2).cos());
        let l2 = lp_norm(&f, 2.0).unwrap();
        assert!((sobolev_norm(&f, 1.0) - 5.0 * l2).abs() < 1e-11);
    }
}
