use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::ExperimentConfig;
use super::stats::{bootstrap_moment, linear_fit, median, quantile, MomentEstimate};
use crate::error::{Error, Result};
use crate::moments::{tail_from_moments, MomentGrowth};
use crate::picard::{
    energy_inequality_check, free_evolution, iterate_norms, picard_step, IterateNorms, IterateRecord, TimeGrid,
};
use crate::randomization::{BlockDecomposition, RademacherDraw, RandomizedData};
use crate::seeds::{derive, Domain};
use crate::spectral::{dump, sobolev_norm, Field, Representation};

/// Worker count variable; results never depend on its value.
pub const THREADS_ENV: &str = "RANDWAVE_THREADS";

/// Fewest samples accepted by [`tail_study`].
pub const MIN_TAIL_SAMPLES: usize = 512;
/// Largest order accepted by [`tail_study`].
pub const MAX_TAIL_ORDER: usize = 2;

/// Norms of one iterate of one sample; `None` after a blow-up.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleRow {
    pub sample: usize,
    pub seed: u64,
    pub n: usize,
    pub norms: Option<IterateNorms>,
}

impl SampleRow {
    pub const HEADER: &'static str = "sample,seed,n,status,u_linf_h1,dt_u_linf_l2,du_l2_l4";

    pub fn to_csv(&self) -> String {
        match &self.norms {
            Some(m) => format!(
                "{},{},{},finite,{:.17e},{:.17e},{:.17e}",
                self.sample, self.seed, self.n, m.u_linf_h1, m.dt_u_linf_l2, m.du_l2_l4
            ),
            None => format!("{},{},{},blowup,nan,nan,nan", self.sample, self.seed, self.n),
        }
    }
}

/// Shared state of one configuration: grid, time grid, and the block
/// decomposition of the deterministic datum.
pub struct Prepared {
    pub config: ExperimentConfig,
    pub tg: TimeGrid,
    pub decomposition: BlockDecomposition,
    /// `|phi0|_{H^1}` of the deterministic datum.
    pub phi0_h1: f64,
}

impl Prepared {
    pub fn new(config: &ExperimentConfig) -> Result<Self> {
        config.validate()?;
        let grid = config.grid()?;
        let phi0 = config.data.build(grid)?;
        let phi0_h1 = sobolev_norm(&phi0.to_spectral(), 1.0);
        let decomposition = BlockDecomposition::new(&phi0, &Field::zeros(grid, Representation::Physical))?;
        Ok(Prepared {
            config: config.clone(),
            tg: config.time_grid()?,
            decomposition,
            phi0_h1,
        })
    }

    pub fn sample_seed(&self, index: usize) -> u64 {
        derive(self.config.run.base_seed, Domain::Sample, index as u64)
    }

    pub fn draw(&self, index: usize) -> Result<RandomizedData> {
        let seed = self.sample_seed(index);
        if self.decomposition.blocks().is_empty() {
            return self.decomposition.randomize(&RademacherDraw::from_values(seed, [])?);
        }
        self.decomposition.sample(seed)
    }

    /// Norms of iterates `0..=n_max` for one sample. Orders from the first
    /// blow-up on are reported as `None`.
    pub fn sample_norms(&self, index: usize, n_max: usize, dump_dir: Option<&Path>) -> Result<Vec<SampleRow>> {
        let data = self.draw(index)?;
        let d = self.config.run.derivative;
        let seed = self.sample_seed(index);
        let free = free_evolution(&data, self.tg, d)?;
        let mut rows = Vec::with_capacity(n_max + 1);
        let mut current = free.clone();
        let mut alive = true;
        for n in 0..=n_max {
            if alive && n > 0 {
                match picard_step(&free, &current.du, d) {
                    Ok(next) => current = next,
                    Err(Error::BlowUp { .. }) => alive = false,
                    Err(e) => return Err(e),
                }
            }
            let norms = if alive {
                match iterate_norms(&current) {
                    Ok(m) if m.is_acceptable() => Some(m),
                    Ok(_) | Err(Error::BlowUp { .. }) => None,
                    Err(e) => return Err(e),
                }
            } else {
                None
            };
            alive = norms.is_some();
            if let (Some(dir), true) = (dump_dir, alive) {
                let last = current.du.fields().last().expect("at least two nodes");
                dump::write_field(&dir.join(format!("sample{index}_n{n}_du.rwfd")), &format!("du{n}"), last)?;
            }
            rows.push(SampleRow {
                sample: index,
                seed,
                n,
                norms,
            });
        }
        Ok(rows)
    }

    /// All samples, merged in sample order.
    pub fn run_samples(&self, n_max: usize, dump_dir: Option<&Path>) -> Result<Vec<SampleRow>> {
        let m = self.config.run.samples;
        let per_sample = with_pool(|| {
            (0..m)
                .into_par_iter()
                .map(|i| self.sample_norms(i, n_max, if i == 0 { dump_dir } else { None }))
                .collect::<Result<Vec<_>>>()
        })?;
        Ok(per_sample.into_iter().flatten().collect())
    }
}

/// Runs `f` on a pool sized by [`THREADS_ENV`]; without it, on the
/// current pool.
pub fn with_pool<T: Send>(f: impl FnOnce() -> T + Send) -> T {
    let threads = std::env::var(THREADS_ENV).ok().and_then(|v| v.parse::<usize>().ok());
    match threads {
        Some(t) if t > 0 => with_threads(t, f),
        _ => f(),
    }
}

/// Runs `f` on a dedicated pool of `threads` workers.
pub fn with_threads<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .expect("thread pool")
        .install(f)
}

fn du_norms(rows: &[SampleRow], n: usize) -> Vec<f64> {
    rows.iter()
        .filter(|r| r.n == n)
        .map(|r| r.norms.map_or(f64::NAN, |m| m.du_l2_l4))
        .collect()
}

/// Empirical moment of `|du^(n)|_{L^2 L^4}` against
/// `C p^(2^n/2) |phi0|_{H^1} T^(1/2) (2^n)!`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentRatio {
    pub moment: MomentEstimate,
    pub bound: f64,
    pub ratio: f64,
    pub ratio_upper: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrderSummary {
    pub n: usize,
    pub finite_fraction: f64,
    pub mean: Option<f64>,
    pub median: Option<f64>,
    pub q05: Option<f64>,
    pub q95: Option<f64>,
    /// Largest measured energy-inequality constant over samples (`n >= 1`).
    pub energy_constant: Option<f64>,
    pub moments: Vec<MomentRatio>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NamedVerdict {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl NamedVerdict {
    pub fn new(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        NamedVerdict {
            name: name.into(),
            pass,
            detail: detail.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Calibration {
    pub c_cal: f64,
    /// `measured` or `frozen`.
    pub source: String,
    /// `C_cal |phi0|_{H^1} T`, required below one half.
    pub small_regime_value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingFit {
    pub n: usize,
    pub intervals: Vec<f64>,
    pub medians: Vec<f64>,
    pub slope: f64,
    /// Medians nondecreasing in the interval length.
    pub monotone: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailPoint {
    pub lambda: f64,
    pub empirical: f64,
    pub bound: f64,
}

impl TailPoint {
    /// The bound is informative only where it does not exceed one.
    pub fn applicable(&self) -> bool {
        self.bound <= 1.0
    }

    pub fn pass(&self) -> bool {
        !self.applicable() || self.empirical <= self.bound
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailReport {
    pub n: usize,
    pub samples: usize,
    pub growth: MomentGrowth,
    pub points: Vec<TailPoint>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub version: String,
    pub config: ExperimentConfig,
    pub config_hash: String,
    pub sample_seeds: Vec<u64>,
    pub phi0_h1: f64,
    pub calibration: Option<Calibration>,
    #[serde(skip)]
    pub rows: Vec<SampleRow>,
    pub orders: Vec<OrderSummary>,
    pub scaling: Vec<ScalingFit>,
    pub tail: Option<TailReport>,
    pub verdicts: Vec<NamedVerdict>,
}

impl ExperimentReport {
    fn empty(prep: &Prepared) -> Result<Self> {
        Ok(ExperimentReport {
            version: env!("CARGO_PKG_VERSION").to_string(),
            config: prep.config.clone(),
            config_hash: prep.config.hash()?,
            sample_seeds: (0..prep.config.run.samples).map(|i| prep.sample_seed(i)).collect(),
            phi0_h1: prep.phi0_h1,
            calibration: None,
            rows: Vec::new(),
            orders: Vec::new(),
            scaling: Vec::new(),
            tail: None,
            verdicts: Vec::new(),
        })
    }

    pub fn all_pass(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }

    /// Rows as [`IterateRecord`]s carrying the config hash.
    pub fn records(&self) -> Vec<IterateRecord> {
        self.rows
            .iter()
            .filter_map(|r| {
                r.norms.map(|norms| IterateRecord {
                    n: r.n,
                    derivative: self.config.run.derivative,
                    norms,
                    seed: r.seed,
                    config_hash: self.config_hash.clone(),
                    series: None,
                })
            })
            .collect()
    }
}

/// `C = max_p UCI_p / (sqrt(p) |phi0|_{H^1} T^(1/2))` over the zeroth
/// iterate, rounded up by one part in `1e12`.
pub fn calibrate(zeroth: &[MomentEstimate], phi0_h1: f64, t: f64) -> f64 {
    if phi0_h1 == 0.0 {
        return 0.0;
    }
    let c = zeroth
        .iter()
        .map(|m| m.upper / (m.p.sqrt() * phi0_h1 * t.sqrt()))
        .fold(0.0, f64::max);
    c * (1.0 + 1e-12)
}

/// `C p^(2^n/2) |phi0|_{H^1} T^(1/2) (2^n)!`.
pub fn moment_bound(c: f64, n: usize, p: f64, phi0_h1: f64, t: f64) -> f64 {
    let j = 1usize << n;
    let fact: f64 = (1..=j).map(|i| i as f64).product();
    c * p.powf(j as f64 / 2.0) * phi0_h1 * t.sqrt() * fact
}

fn ratio(x: f64, bound: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x / bound
    }
}

fn summarize(prep: &Prepared, rows: &[SampleRow], n_max: usize) -> Result<(Vec<OrderSummary>, Option<Calibration>)> {
    let cfg = &prep.config;
    let t = prep.tg.t_final();
    let mut orders = Vec::new();
    let mut estimates: Vec<Vec<MomentEstimate>> = Vec::new();
    for n in 0..=n_max {
        let vals = du_norms(rows, n);
        let finite: Vec<f64> = vals.iter().copied().filter(|v| v.is_finite()).collect();
        let est = if finite.is_empty() {
            Vec::new()
        } else {
            cfg.moments
                .p_list
                .iter()
                .map(|&p| bootstrap_moment(&finite, p as f64, cfg.moments.bootstrap, cfg.run.base_seed ^ n as u64))
                .collect::<Result<Vec<_>>>()?
        };
        estimates.push(est);
        let energy_constant = (n > 0)
            .then(|| {
                let by_sample = |k: usize| rows.iter().filter(move |r| r.n == k);
                by_sample(n)
                    .zip(by_sample(n - 1))
                    .zip(by_sample(0))
                    .filter_map(|((a, b), c)| {
                        let rec = |r: &SampleRow| {
                            r.norms.map(|norms| IterateRecord {
                                n: r.n,
                                derivative: cfg.run.derivative,
                                norms,
                                seed: r.seed,
                                config_hash: String::new(),
                                series: None,
                            })
                        };
                        let (ra, rb, rc) = (rec(a)?, rec(b)?, rec(c)?);
                        energy_inequality_check(&ra, &rb, &rc).ok().map(|v| v.constant)
                    })
                    .fold(None, |acc: Option<f64>, c| Some(acc.map_or(c, |a| a.max(c))))
            })
            .flatten();
        orders.push(OrderSummary {
            n,
            finite_fraction: if vals.is_empty() {
                0.0
            } else {
                finite.len() as f64 / vals.len() as f64
            },
            mean: (!finite.is_empty()).then(|| finite.iter().sum::<f64>() / finite.len() as f64),
            median: median(&finite),
            q05: quantile(&finite, 0.05),
            q95: quantile(&finite, 0.95),
            energy_constant,
            moments: Vec::new(),
        });
    }
    let calibration = match (cfg.calibration.c_cal, estimates.first()) {
        (Some(c), _) => Some((c, "frozen")),
        (None, Some(e)) if !e.is_empty() => Some((calibrate(e, prep.phi0_h1, t), "measured")),
        _ => None,
    }
    .map(|(c_cal, source)| Calibration {
        c_cal,
        source: source.into(),
        small_regime_value: c_cal * prep.phi0_h1 * t,
    });
    if let Some(cal) = &calibration {
        for (summary, est) in orders.iter_mut().zip(estimates) {
            summary.moments = est
                .into_iter()
                .map(|m| {
                    let bound = moment_bound(cal.c_cal, summary.n, m.p, prep.phi0_h1, t);
                    let ratio_upper = ratio(m.upper, bound);
                    MomentRatio {
                        moment: m,
                        bound,
                        ratio: ratio(m.estimate, bound),
                        ratio_upper,
                        pass: ratio_upper <= 1.0,
                    }
                })
                .collect();
        }
    }
    Ok((orders, calibration))
}

fn order_verdicts(orders: &[OrderSummary], calibration: &Option<Calibration>) -> Vec<NamedVerdict> {
    let mut v = Vec::new();
    for o in orders {
        v.push(NamedVerdict::new(
            format!("finite_n{}", o.n),
            o.finite_fraction == 1.0,
            format!("finite fraction {}", o.finite_fraction),
        ));
        for m in &o.moments {
            v.push(NamedVerdict::new(
                format!("moment_n{}_p{}", o.n, m.moment.p),
                m.pass,
                format!("upper CI / bound = {:.6e}", m.ratio_upper),
            ));
        }
    }
    if let Some(c) = calibration {
        v.push(NamedVerdict::new(
            "small_regime",
            c.small_regime_value < 0.5,
            format!("C_cal |phi0| T = {:.6e} ({} C_cal = {:.6e})", c.small_regime_value, c.source, c.c_cal),
        ));
    }
    v
}

/// Monte Carlo run of iterates `0..=n_max` with moment ratios against the
/// calibrated bound. Blow-ups are recorded, not fatal.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentReport> {
    run_experiment_with(config, None)
}

/// As [`run_experiment`], dumping the final-time `du^(n)` of sample 0 into
/// `dump_dir` when given.
pub fn run_experiment_with(config: &ExperimentConfig, dump_dir: Option<&Path>) -> Result<ExperimentReport> {
    let prep = Prepared::new(config)?;
    if let Some(d) = dump_dir {
        std::fs::create_dir_all(d).map_err(|e| Error::io(d, e))?;
    }
    let n_max = config.run.n_max;
    let rows = prep.run_samples(n_max, dump_dir)?;
    let (orders, calibration) = summarize(&prep, &rows, n_max)?;
    let mut report = ExperimentReport::empty(&prep)?;
    report.verdicts = order_verdicts(&orders, &calibration);
    report.rows = rows;
    report.orders = orders;
    report.calibration = calibration;
    Ok(report)
}

/// Fits `log median |du^(n)|_{L^2 L^4}` against `log T` over the configured
/// intervals.
pub fn interval_scaling_study(config: &ExperimentConfig) -> Result<Vec<ScalingFit>> {
    let intervals = &config.scaling.intervals;
    if intervals.len() < 4 {
        return Err(Error::Config("scaling needs at least four intervals".into()));
    }
    for w in intervals.windows(2) {
        if ((w[0] / w[1]) - 2.0).abs() > 1e-9 {
            return Err(Error::Config(format!("intervals must halve: {} then {}", w[0], w[1])));
        }
    }
    let orders = config
        .scaling
        .orders
        .clone()
        .unwrap_or_else(|| (0..=config.run.n_max.min(1)).collect());
    let n_max = orders.iter().copied().max().unwrap_or(0);
    let mut medians = vec![Vec::new(); orders.len()];
    for &t in intervals {
        let mut c = config.clone();
        c.time.t_final = t;
        let rows = Prepared::new(&c)?.run_samples(n_max, None)?;
        for (slot, &n) in medians.iter_mut().zip(&orders) {
            slot.push(median(&du_norms(&rows, n)).unwrap_or(f64::NAN));
        }
    }
    orders
        .iter()
        .zip(medians)
        .map(|(&n, med)| {
            let pts: Vec<(f64, f64)> = intervals
                .iter()
                .zip(&med)
                .filter(|(_, m)| m.is_finite() && **m > 0.0)
                .map(|(t, m)| (t.ln(), m.ln()))
                .collect();
            if pts.len() < 3 {
                return Err(Error::InvalidArgument(format!(
                    "degenerate scaling fit for n = {n}: {} usable medians",
                    pts.len()
                )));
            }
            let (x, y): (Vec<f64>, Vec<f64>) = pts.into_iter().unzip();
            let (slope, _) = linear_fit(&x, &y).expect("distinct intervals");
            let mut by_t: Vec<(f64, f64)> = intervals.iter().copied().zip(med.iter().copied()).collect();
            by_t.sort_by(|a, b| a.0.total_cmp(&b.0));
            let monotone = by_t.windows(2).all(|w| w[1].1 >= w[0].1);
            Ok(ScalingFit {
                n,
                intervals: intervals.clone(),
                medians: med,
                slope,
                monotone,
            })
        })
        .collect()
}

/// Moment growth of `|du^(n)|` implied by the calibrated bound:
/// `k = 2^n`, `alpha = 1`, `N^(-1) = 2^n |phi0|_{H^1} T^(1/2)`, and
/// `C = C_cal (2^n)! / 2^n`.
pub fn tail_growth(c_cal: f64, n: usize, phi0_h1: f64, t: f64, p0: f64) -> MomentGrowth {
    let j = 1usize << n;
    let fact: f64 = (1..=j).map(|i| i as f64).product();
    MomentGrowth {
        c: c_cal * fact / j as f64,
        alpha: 1.0,
        n: 1.0 / (j as f64 * phi0_h1 * t.sqrt()),
        k: j as f64,
        p0,
    }
}

/// Empirical tail of `|du^(n)|_{L^2 L^4}` against the moment-derived bound
/// on a log-spaced `lambda` grid.
pub fn tail_study(config: &ExperimentConfig, n: usize) -> Result<(TailReport, ExperimentReport)> {
    if config.run.samples < MIN_TAIL_SAMPLES {
        return Err(Error::InvalidArgument(format!(
            "tail study needs at least {MIN_TAIL_SAMPLES} samples, got {}",
            config.run.samples
        )));
    }
    if n > MAX_TAIL_ORDER {
        return Err(Error::InvalidArgument(format!("tail study limited to n <= {MAX_TAIL_ORDER}")));
    }
    let mut c = config.clone();
    c.run.n_max = n;
    let mut report = run_experiment(&c)?;
    let cal = report
        .calibration
        .clone()
        .ok_or_else(|| Error::InvalidArgument("no calibration available".into()))?;
    if cal.c_cal == 0.0 {
        return Err(Error::InvalidArgument("zero data has no tail".into()));
    }
    let t = c.time.t_final;
    let growth = tail_growth(cal.c_cal, n, report.phi0_h1, t, c.tails.p0);
    let vals: Vec<f64> = du_norms(&report.rows, n);
    let finite: Vec<f64> = vals.iter().copied().filter(|v| v.is_finite()).collect();
    let lo = finite.iter().copied().fold(f64::INFINITY, f64::min).max(1e-300) * 0.5;
    let hi_emp = finite.iter().copied().fold(0.0, f64::max) * 2.0;
    // lambda where the bound reaches 1e-3
    let hi_bound = ((growth.p0 + 1e3f64.ln()) / growth.rate()).powf(growth.k / 2.0) / growth.n.powf(growth.alpha);
    let hi = hi_emp.max(hi_bound);
    let m = c.tails.lambda_points.max(2);
    let points = (0..m)
        .map(|i| {
            let lambda = lo * (hi / lo).powf(i as f64 / (m - 1) as f64);
            let exceed = vals.iter().filter(|v| !v.is_finite() || **v > lambda).count();
            Ok(TailPoint {
                lambda,
                empirical: exceed as f64 / vals.len() as f64,
                bound: tail_from_moments(&growth, lambda)?.bound,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let tail = TailReport {
        n,
        samples: vals.len(),
        growth,
        points,
    };
    let bad = tail.points.iter().filter(|p| !p.pass()).count();
    report.verdicts.push(NamedVerdict::new(
        format!("tail_n{n}"),
        bad == 0,
        format!(
            "{bad} violations over {} applicable points",
            tail.points.iter().filter(|p| p.applicable()).count()
        ),
    ));
    report.tail = Some(tail.clone());
    Ok((tail, report))
}

/// Writes `rows.csv`, `summary.json` and two-column plot files into `dir`.
pub fn emit_report(report: &ExperimentReport, dir: &Path) -> Result<Vec<PathBuf>> {
    if report.rows.is_empty() {
        return Err(Error::InvalidArgument("refusing to write an empty experiment".into()));
    }
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut written = Vec::new();
    let mut write = |name: &str, body: String| -> Result<()> {
        let path = dir.join(name);
        std::fs::write(&path, body).map_err(|e| Error::io(&path, e))?;
        written.push(path);
        Ok(())
    };
    let mut rows = String::from(SampleRow::HEADER);
    rows.push('\n');
    for r in &report.rows {
        rows.push_str(&r.to_csv());
        rows.push('\n');
    }
    write("rows.csv", rows)?;
    write("summary.json", serde_json::to_string_pretty(report)? + "\n")?;
    for fit in &report.scaling {
        let mut body = String::from("log_t,log_median\n");
        for (t, m) in fit.intervals.iter().zip(&fit.medians) {
            body.push_str(&format!("{:.17e},{:.17e}\n", t.ln(), m.ln()));
        }
        write(&format!("scaling_n{}.csv", fit.n), body)?;
    }
    if let Some(tail) = &report.tail {
        let mut emp = String::from("lambda,empirical\n");
        let mut bnd = String::from("lambda,bound\n");
        for p in &tail.points {
            emp.push_str(&format!("{:.17e},{:.17e}\n", p.lambda, p.empirical));
            bnd.push_str(&format!("{:.17e},{:.17e}\n", p.lambda, p.bound));
        }
        write("tail.csv", emp)?;
        write("tail_bound.csv", bnd)?;
    }
    Ok(written)
}

/// Scaling verdicts: slope within `[0.4, 0.6]` and monotone medians.
pub fn scaling_verdicts(fits: &[ScalingFit]) -> Vec<NamedVerdict> {
    fits.iter()
        .flat_map(|f| {
            [
                NamedVerdict::new(
                    format!("scaling_slope_n{}", f.n),
                    (0.4..=0.6).contains(&f.slope),
                    format!("slope {:.4}", f.slope),
                ),
                NamedVerdict::new(
                    format!("scaling_monotone_n{}", f.n),
                    f.monotone,
                    format!("medians {:?}", f.medians),
                ),
            ]
        })
        .collect()
}
