use serde::{Deserialize, Serialize};

use super::duhamel::{duhamel_many, DuhamelKernel};
use super::series::{FieldSeries, TimeGrid};
use crate::error::{Error, Result};
use crate::randomization::RandomizedData;
use crate::spectral::{
    apply_multiplier, dealiased_square, lp_norm, sobolev_norm, spectral_l2_norm, Derivative,
    MultiplierKind,
};

/// Any norm above this aborts the iteration as a blow-up.
pub const BLOWUP_THRESHOLD: f64 = 1e12;

/// `u`, `d_t u` and the chosen `du` of one iterate, all spectral.
#[derive(Clone, Debug, PartialEq)]
pub struct IterateSeries {
    pub u: FieldSeries,
    pub dt_u: FieldSeries,
    pub du: FieldSeries,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IterateNorms {
    /// `sup_t |u(t)|_{H^1}`.
    pub u_linf_h1: f64,
    /// `sup_t |d_t u(t)|_{L^2}`.
    pub dt_u_linf_l2: f64,
    /// `|du|_{L^2_t L^4_x}`.
    pub du_l2_l4: f64,
}

impl IterateNorms {
    /// Energy-side quantity `|u|_{L^inf H^1} + |d_t u|_{L^inf L^2}`.
    pub fn energy(&self) -> f64 {
        self.u_linf_h1 + self.dt_u_linf_l2
    }

    /// Finite and below [`BLOWUP_THRESHOLD`].
    pub fn is_acceptable(&self) -> bool {
        self.check(0).is_ok()
    }

    fn check(&self, order: usize) -> Result<()> {
        for (name, v) in [
            ("u_linf_h1", self.u_linf_h1),
            ("dt_u_linf_l2", self.dt_u_linf_l2),
            ("du_l2_l4", self.du_l2_l4),
        ] {
            if !v.is_finite() || v > BLOWUP_THRESHOLD {
                return Err(Error::BlowUp {
                    order,
                    detail: format!("{name} = {v:e}"),
                });
            }
        }
        Ok(())
    }
}

/// Norms and provenance of the `n`-th iterate. Serializes to one JSON
/// object; the series are carried along in memory only.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IterateRecord {
    pub n: usize,
    pub derivative: Derivative,
    pub norms: IterateNorms,
    pub seed: u64,
    pub config_hash: String,
    #[serde(skip)]
    pub series: Option<IterateSeries>,
}

impl IterateRecord {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let rec: IterateRecord = serde_json::from_str(s)?;
        for v in [rec.norms.u_linf_h1, rec.norms.dt_u_linf_l2, rec.norms.du_l2_l4] {
            if !(v >= 0.0) {
                return Err(Error::InvalidArgument(format!("negative or NaN norm {v}")));
            }
        }
        Ok(rec)
    }

    pub fn series(&self) -> Option<&IterateSeries> {
        self.series.as_ref()
    }
}

/// `(u0, d_t u0, d u0)` for `u0(t) = cos(t|D|) phi0 + sin(t|D|)/|D| phi1`.
pub fn free_evolution(data: &RandomizedData, tg: TimeGrid, derivative: Derivative) -> Result<IterateSeries> {
    let phi0 = data.phi0_rand();
    let phi1 = data.phi1_rand();
    let u = FieldSeries::from_fn(tg, "u0", |t| {
        apply_multiplier(phi0, MultiplierKind::CosHalfwave(t))
            .axpy(1.0.into(), &apply_multiplier(phi1, MultiplierKind::SincHalfwave(t)))
            .expect("same grid")
    })?;
    let dt_u = FieldSeries::from_fn(tg, "dt_u0", |t| {
        apply_multiplier(phi0, MultiplierKind::CosHalfwaveRate(t))
            .axpy(1.0.into(), &apply_multiplier(phi1, MultiplierKind::CosHalfwave(t)))
            .expect("same grid")
    })?;
    let du = derivative_series(&u, &dt_u, derivative, "du0");
    Ok(IterateSeries { u, dt_u, du })
}

fn derivative_series(u: &FieldSeries, dt_u: &FieldSeries, d: Derivative, name: &str) -> FieldSeries {
    match d.axis() {
        None => dt_u.clone().renamed(name),
        Some(a) => u.map(name, |f| apply_multiplier(f, MultiplierKind::SpatialDerivative(a))),
    }
}

/// Dealiased pointwise square of each node.
pub fn nonlinearity(du: &FieldSeries) -> FieldSeries {
    du.map("(du)^2", dealiased_square)
}

/// One Picard step from a stored `du^(n-1)`:
/// `u^(n) = u^(0) + D[(du^(n-1))^2]` for the sinc, cos and derivative kernels.
pub fn picard_step(free: &IterateSeries, prev_du: &FieldSeries, derivative: Derivative) -> Result<IterateSeries> {
    let source = nonlinearity(prev_du);
    let kernels = [
        DuhamelKernel::Sinc,
        DuhamelKernel::Cos,
        DuhamelKernel::Derivative(derivative),
    ];
    let mut d = duhamel_many(&source, &kernels)?.into_iter();
    let (du_u, du_dt, du_d) = (d.next().unwrap(), d.next().unwrap(), d.next().unwrap());
    Ok(IterateSeries {
        u: free.u.axpy(1.0, &du_u)?.renamed("u"),
        dt_u: free.dt_u.axpy(1.0, &du_dt)?.renamed("dt_u"),
        du: free.du.axpy(1.0, &du_d)?.renamed("du"),
    })
}

pub fn iterate_norms(s: &IterateSeries) -> Result<IterateNorms> {
    let u_linf_h1 = s.u.fields().iter().map(|f| sobolev_norm(f, 1.0)).fold(0.0, f64::max);
    let dt_u_linf_l2 = s.dt_u.fields().iter().map(spectral_l2_norm).fold(0.0, f64::max);
    let du_l2_l4 = space_time_norm(&s.du, 2.0, 4.0)?;
    Ok(IterateNorms {
        u_linf_h1,
        dt_u_linf_l2,
        du_l2_l4,
    })
}

/// Iterates `0..=n_max`, each with norms and series.
pub fn picard_sequence(
    n_max: usize,
    data: &RandomizedData,
    tg: TimeGrid,
    derivative: Derivative,
) -> Result<Vec<IterateRecord>> {
    let free = free_evolution(data, tg, derivative)?;
    let mut out: Vec<IterateRecord> = Vec::with_capacity(n_max + 1);
    let mut current = free.clone();
    for n in 0..=n_max {
        if n > 0 {
            let prev = &out[n - 1].series.as_ref().expect("kept").du;
            current = picard_step(&free, prev, derivative)?;
        }
        if !(current.u.is_finite() && current.dt_u.is_finite() && current.du.is_finite()) {
            return Err(Error::BlowUp {
                order: n,
                detail: "non-finite field values".into(),
            });
        }
        let norms = iterate_norms(&current)?;
        norms.check(n)?;
        out.push(IterateRecord {
            n,
            derivative,
            norms,
            seed: data.draw().seed(),
            config_hash: String::new(),
            series: Some(current.clone()),
        });
    }
    Ok(out)
}

pub fn picard_iterate(n: usize, data: &RandomizedData, tg: TimeGrid, derivative: Derivative) -> Result<IterateRecord> {
    Ok(picard_sequence(n, data, tg, derivative)?.pop().expect("n+1 records"))
}

/// `(int_0^T |f(t)|_{L^r}^q dt)^(1/q)` by the trapezoid rule, or the
/// largest node value for `q = inf`.
pub fn space_time_norm(series: &FieldSeries, q: f64, r: f64) -> Result<f64> {
    if !(q >= 1.0) {
        return Err(Error::InvalidArgument(format!("time exponent must be >= 1, got {q}")));
    }
    let spatial = series
        .fields()
        .iter()
        .map(|f| lp_norm(f, r))
        .collect::<Result<Vec<f64>>>()?;
    if q.is_infinite() {
        return Ok(spatial.iter().copied().fold(0.0, f64::max));
    }
    let h = series.time_grid().step();
    let last = spatial.len() - 1;
    let integral: f64 = spatial
        .iter()
        .enumerate()
        .map(|(m, v)| {
            let w = if m == 0 || m == last { 0.5 * h } else { h };
            w * v.powf(q)
        })
        .sum();
    Ok(integral.powf(1.0 / q))
}

/// Outcome of comparing an iterate's energy against the forcing bound.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnergyVerdict {
    /// `|u^(n)|_{L^inf H^1} + |d_t u^(n)|_{L^inf L^2}`.
    pub lhs: f64,
    /// `|u^(0)|_{L^inf H^1} + |d_t u^(0)|_{L^inf L^2} + |du^(n-1)|^2_{L^2 L^4}`.
    pub rhs: f64,
    /// Smallest constant `C` with `lhs <= C rhs`; zero when `lhs = 0`.
    pub constant: f64,
}

impl EnergyVerdict {
    pub fn holds_with(&self, c: f64) -> bool {
        self.lhs <= c * self.rhs
    }
}

pub fn energy_inequality_check(
    rec_n: &IterateRecord,
    rec_prev: &IterateRecord,
    rec_0: &IterateRecord,
) -> Result<EnergyVerdict> {
    if rec_prev.n + 1 != rec_n.n || rec_0.n != 0 {
        return Err(Error::InvalidArgument(format!(
            "expected records (n, n-1, 0), got ({}, {}, {})",
            rec_n.n, rec_prev.n, rec_0.n
        )));
    }
    if rec_n.derivative != rec_prev.derivative || rec_0.derivative != rec_n.derivative {
        return Err(Error::InvalidArgument("records use different derivatives".into()));
    }
    let lhs = rec_n.norms.energy();
    let rhs = rec_0.norms.energy() + rec_prev.norms.du_l2_l4.powi(2);
    let constant = if lhs == 0.0 { 0.0 } else { lhs / rhs };
    Ok(EnergyVerdict { lhs, rhs, constant })
}
