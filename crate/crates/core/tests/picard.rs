use std::f64::consts::PI;

use num_complex::Complex64;
use randwave::picard::{
    duhamel, energy_inequality_check, free_evolution, picard_iterate, picard_sequence, picard_step,
    space_time_norm, DuhamelKernel, FieldSeries, TimeGrid,
};
use randwave::randomization::{BlockDecomposition, DataFamily, RademacherDraw};
use randwave::spectral::{
    apply_multiplier, sobolev_norm, spectral_l2_norm, Derivative, Field, Grid, MultiplierKind,
    Representation,
};

fn plane_wave_data(grid: Grid, k: [f64; 2]) -> BlockDecomposition {
    let phi0 = DataFamily::PlaneWave { amplitude: 1.0, k }.build(grid).unwrap();
    BlockDecomposition::new(&phi0, &Field::zeros(grid, Representation::Physical)).unwrap()
}

/// Largest per-mode error of the x1-derivative Duhamel integral of the
/// constant source cos(x1), relative to the source amplitude.
fn single_mode_duhamel_error(n_steps: usize) -> f64 {
    let g = Grid::new(16, 2.0 * PI).unwrap();
    let tg = TimeGrid::new(1.0, n_steps).unwrap();
    let src = Field::from_real_fn(g, |x1, _| x1.cos()).to_spectral();
    let series = FieldSeries::from_fn(tg, "g", |_| src.clone()).unwrap();
    let out = duhamel(&series, DuhamelKernel::Derivative(Derivative::X1)).unwrap();
    let mut err: f64 = 0.0;
    for m in 0..tg.n_nodes() {
        let t = tg.node(m);
        for i in 0..g.len() {
            let xi = g.frequency(i);
            let w = (xi[0] * xi[0] + xi[1] * xi[1]).sqrt();
            let ghat = src.data()[i];
            let exact = if w == 0.0 {
                Complex64::default()
            } else {
                Complex64::new(0.0, xi[0] / w) * ((1.0 - (t * w).cos()) / w) * ghat
            };
            let scale = src.data().iter().fold(0.0f64, |a, z| a.max(z.norm()));
            err = err.max((out.at(m).data()[i] - exact).norm() / scale);
        }
    }
    err
}

#[test]
fn duhamel_closed_form_and_second_order() {
    let e256 = single_mode_duhamel_error(256);
    let e128 = single_mode_duhamel_error(128);
    assert!(e256 <= 1e-6, "error {e256:e}");
    let order = (e128 / e256).log2();
    assert!(order >= 1.9, "observed order {order}");
}

#[test]
fn duhamel_is_linear() {
    let g = Grid::new(16, 2.0 * PI).unwrap();
    let tg = TimeGrid::new(0.7, 12).unwrap();
    let f = FieldSeries::from_fn(tg, "f", |t| Field::from_real_fn(g, |x, y| (x + t).sin() * y.cos())).unwrap();
    let h = FieldSeries::from_fn(tg, "h", |t| Field::from_real_fn(g, |x, y| (2.0 * y - t).cos() + x.sin())).unwrap();
    let (alpha, beta) = (1.7, -0.4);
    let combo = f.zip_map(&h, "c", |a, b| a.scaled(alpha.into()).axpy(beta.into(), b).unwrap()).unwrap();
    for k in [DuhamelKernel::Sinc, DuhamelKernel::Derivative(Derivative::X2)] {
        let lhs = duhamel(&combo, k).unwrap();
        let df = duhamel(&f, k).unwrap();
        let dh = duhamel(&h, k).unwrap();
        for m in 0..tg.n_nodes() {
            let rhs = df.at(m).scaled(alpha.into()).axpy(beta.into(), dh.at(m)).unwrap();
            for (a, b) in lhs.at(m).data().iter().zip(rhs.data()) {
                assert!((a - b).norm() < 1e-12);
            }
        }
    }
}

#[test]
fn free_evolution_plane_wave_and_energy() {
    let g = Grid::new(32, 4.0 * PI).unwrap();
    let tg = TimeGrid::new(2.0, 128).unwrap();
    let k: [f64; 2] = [1.5, -0.5];
    let kn = (k[0] * k[0] + k[1] * k[1]).sqrt();
    let dec = plane_wave_data(g, k);
    let data = dec.randomize(&RademacherDraw::constant(dec.blocks(), 1).unwrap()).unwrap();
    let free = free_evolution(&data, tg, Derivative::X1).unwrap();
    // t = 0 reproduces the randomized datum.
    for (a, b) in free.u.at(0).data().iter().zip(data.phi0_rand().data()) {
        assert!((a - b).norm() < 1e-15);
    }
    let e0 = sobolev_norm(free.u.at(0), 1.0).powi(2) + spectral_l2_norm(free.dt_u.at(0)).powi(2);
    for m in 0..tg.n_nodes() {
        let t = tg.node(m);
        let u = free.u.at(m).to_physical();
        let want = Field::from_real_fn(g, |x1, x2| (t * kn).cos() * (k[0] * x1 + k[1] * x2).cos());
        for (a, b) in u.data().iter().zip(want.data()) {
            assert!((a - b).norm() < 1e-12);
        }
        let e = sobolev_norm(free.u.at(m), 1.0).powi(2) + spectral_l2_norm(free.dt_u.at(m)).powi(2);
        assert!((e - e0).abs() <= 1e-10 * e0);
    }
}

#[test]
fn zero_data_stays_zero() {
    let g = Grid::new(16, 4.0 * PI).unwrap();
    let tg = TimeGrid::new(0.5, 8).unwrap();
    let zero = Field::zeros(g, Representation::Physical);
    let dec = BlockDecomposition::new(&zero, &zero).unwrap();
    let data = dec.randomize(&RademacherDraw::from_values(0, []).unwrap()).unwrap();
    for rec in picard_sequence(3, &data, tg, Derivative::X1).unwrap() {
        assert_eq!(rec.norms.energy(), 0.0);
        assert_eq!(rec.norms.du_l2_l4, 0.0);
        assert!(rec.series().unwrap().u.fields().iter().all(|f| f.max_abs() == 0.0));
    }
}

fn gaussian_data(seed: u64) -> (Grid, randwave::randomization::RandomizedData) {
    let g = Grid::new(32, 8.0 * PI).unwrap();
    let phi0 = DataFamily::Gaussian {
        amplitude: 1.0,
        sigma: 1.0,
        center: None,
    }
    .build(g)
    .unwrap();
    let dec = BlockDecomposition::new(&phi0, &Field::zeros(g, Representation::Physical)).unwrap();
    (g, dec.sample(seed).unwrap())
}

#[test]
fn order_zero_is_free_evolution_and_step_is_reproducible() {
    let (_, data) = gaussian_data(5);
    let tg = TimeGrid::new(0.4, 16).unwrap();
    let rec0 = picard_iterate(0, &data, tg, Derivative::X1).unwrap();
    let free = free_evolution(&data, tg, Derivative::X1).unwrap();
    assert_eq!(rec0.series().unwrap(), &free);

    let seq = picard_sequence(3, &data, tg, Derivative::X1).unwrap();
    let again = picard_step(&free, &seq[1].series().unwrap().du, Derivative::X1).unwrap();
    assert_eq!(&again, seq[2].series().unwrap(), "recomputation must be bit-identical");
}

#[test]
fn tracked_derivative_matches_u() {
    let (_, data) = gaussian_data(8);
    let tg = TimeGrid::new(0.3, 10).unwrap();
    for d in [Derivative::X1, Derivative::X2] {
        let rec = picard_iterate(2, &data, tg, d).unwrap();
        let s = rec.series().unwrap();
        let axis = d.axis().unwrap();
        for m in 0..tg.n_nodes() {
            let want = apply_multiplier(s.u.at(m), MultiplierKind::SpatialDerivative(axis));
            for (a, b) in s.du.at(m).data().iter().zip(want.data()) {
                assert!((a - b).norm() < 1e-10);
            }
        }
    }
    let rec = picard_iterate(2, &data, tg, Derivative::Time).unwrap();
    let s = rec.series().unwrap();
    assert_eq!(s.du.fields(), s.dt_u.fields());
}

#[test]
fn space_time_norm_examples() {
    let l = 2.0 * PI;
    let g = Grid::new(8, l).unwrap();
    let tg = TimeGrid::new(0.8, 5).unwrap();
    let c = 1.5;
    let s = FieldSeries::from_fn(tg, "c", |_| Field::from_real_fn(g, |_, _| c)).unwrap();
    let want = 0.8f64.sqrt() * c * l.sqrt();
    assert!((space_time_norm(&s, 2.0, 4.0).unwrap() - want).abs() < 1e-12);

    let spike = FieldSeries::from_fn(tg, "s", |t| {
        let a = if (t - tg.node(3)).abs() < 1e-12 { 2.0 } else { 0.0 };
        Field::from_real_fn(g, |_, _| a)
    })
    .unwrap();
    let at3 = randwave::spectral::lp_norm(spike.at(3), 4.0).unwrap();
    assert_eq!(space_time_norm(&spike, f64::INFINITY, 4.0).unwrap(), at3);
    assert!(space_time_norm(&s, 0.5, 2.0).is_err());
}

#[test]
fn energy_check_on_zero_and_small_data() {
    let g = Grid::new(16, 4.0 * PI).unwrap();
    let tg = TimeGrid::new(0.5, 8).unwrap();
    let zero = Field::zeros(g, Representation::Physical);
    let dec = BlockDecomposition::new(&zero, &zero).unwrap();
    let data = dec.randomize(&RademacherDraw::from_values(0, []).unwrap()).unwrap();
    let seq = picard_sequence(1, &data, tg, Derivative::X1).unwrap();
    let v = energy_inequality_check(&seq[1], &seq[0], &seq[0]).unwrap();
    assert_eq!((v.lhs, v.rhs, v.constant), (0.0, 0.0, 0.0));
    assert!(v.holds_with(1.0));
    assert!(energy_inequality_check(&seq[0], &seq[1], &seq[0]).is_err());
}

#[test]
fn record_json_round_trip() {
    let (_, data) = gaussian_data(3);
    let tg = TimeGrid::new(0.2, 4).unwrap();
    let rec = picard_iterate(1, &data, tg, Derivative::X1).unwrap();
    let json = rec.to_json().unwrap();
    let back = randwave::picard::IterateRecord::from_json(&json).unwrap();
    assert_eq!(back.norms, rec.norms);
    assert_eq!(back.seed, rec.seed);
    assert!(back.series().is_none());
    assert!(randwave::picard::IterateRecord::from_json("{").is_err());
}
