use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::seeds::{derive, Domain};

/// Linear-interpolation quantile of finite values, `q` in `[0, 1]`.
pub fn quantile(values: &[f64], q: f64) -> Option<f64> {
    let mut v: Vec<f64> = values.iter().copied().filter(|x| x.is_finite()).collect();
    if v.is_empty() || !(0.0..=1.0).contains(&q) {
        return None;
    }
    v.sort_by(f64::total_cmp);
    let pos = q * (v.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    Some(v[lo] + (v[hi] - v[lo]) * (pos - lo as f64))
}

pub fn median(values: &[f64]) -> Option<f64> {
    quantile(values, 0.5)
}

/// Plug-in moment `(mean |x|^p)^(1/p)`.
pub fn empirical_moment(values: &[f64], p: f64) -> f64 {
    let n = values.len() as f64;
    (values.iter().map(|x| x.abs().powf(p)).sum::<f64>() / n).powf(1.0 / p)
}

/// Percentile bootstrap interval of the plug-in moment.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct MomentEstimate {
    pub p: f64,
    pub estimate: f64,
    pub lower: f64,
    pub upper: f64,
}

/// Plug-in moment with a 95% percentile bootstrap interval. Resample `b`
/// draws from the stream `(seed, Bootstrap, b)`.
pub fn bootstrap_moment(values: &[f64], p: f64, resamples: usize, seed: u64) -> Result<MomentEstimate> {
    if values.is_empty() {
        return Err(Error::InvalidArgument("bootstrap of an empty sample".into()));
    }
    if resamples == 0 {
        return Err(Error::InvalidArgument("bootstrap needs at least one resample".into()));
    }
    let n = values.len();
    let stats: Vec<f64> = (0..resamples as u64)
        .map(|b| {
            let mut rng = ChaCha8Rng::seed_from_u64(derive(seed, Domain::Bootstrap, b));
            let s: f64 = (0..n).map(|_| values[rng.gen_range(0..n)].abs().powf(p)).sum();
            (s / n as f64).powf(1.0 / p)
        })
        .collect();
    Ok(MomentEstimate {
        p,
        estimate: empirical_moment(values, p),
        lower: quantile(&stats, 0.025).expect("nonempty"),
        upper: quantile(&stats, 0.975).expect("nonempty"),
    })
}

/// Least-squares slope and intercept of `y` against `x`.
pub fn linear_fit(x: &[f64], y: &[f64]) -> Option<(f64, f64)> {
    if x.len() != y.len() || x.len() < 2 {
        return None;
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    Some((slope, my - slope * mx))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quantiles() {
        let v = [3.0, 1.0, 2.0, f64::NAN, 4.0];
        assert_eq!(median(&v), Some(2.5));
        assert_eq!(quantile(&v, 0.0), Some(1.0));
        assert_eq!(quantile(&v, 1.0), Some(4.0));
        assert_eq!(median(&[]), None);
    }

    #[test]
    fn fit_recovers_line() {
        let x = [0.0, 1.0, 2.0, 3.0];
        let y: Vec<f64> = x.iter().map(|a| 0.5 * a - 1.0).collect();
        let (s, c) = linear_fit(&x, &y).unwrap();
        assert!((s - 0.5).abs() < 1e-15 && (c + 1.0).abs() < 1e-15);
        assert!(linear_fit(&[1.0, 1.0], &[0.0, 1.0]).is_none());
    }

    #[test]
    fn bootstrap_brackets_estimate() {
        let v: Vec<f64> = (1..=50).map(|i| i as f64 / 10.0).collect();
        let m = bootstrap_moment(&v, 4.0, 200, 1).unwrap();
        assert!(m.lower <= m.estimate && m.estimate <= m.upper);
        assert_eq!(m, bootstrap_moment(&v, 4.0, 200, 1).unwrap());
        assert!(bootstrap_moment(&[], 4.0, 200, 1).is_err());
    }
}
