use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Moment growth `|F|_{L^p} <= C N^(-alpha) p^(k/2)` for `p >= p0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentGrowth {
    pub c: f64,
    pub alpha: f64,
    pub n: f64,
    pub k: f64,
    pub p0: f64,
}

impl MomentGrowth {
    fn validate(&self) -> Result<()> {
        let ok = self.c > 0.0 && self.alpha > 0.0 && self.n > 0.0 && self.k >= 1.0 && self.p0 >= 1.0;
        if !ok || ![self.c, self.alpha, self.n, self.k, self.p0].iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidArgument(format!("invalid moment growth {self:?}")));
        }
        Ok(())
    }

    /// Decay rate `c = (e C)^(-2/k)`.
    pub fn rate(&self) -> f64 {
        (std::f64::consts::E * self.c).powf(-2.0 / self.k)
    }

    /// Prefactor `C_1 = e^(p0)`.
    pub fn prefactor(&self) -> f64 {
        self.p0.exp()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TailBound {
    /// Chebyshev exponent `p* = max(p0, (lambda N^alpha / (e C))^(2/k))`.
    pub p_star: f64,
    /// `C_1 exp(-c N^(2 alpha/k) lambda^(2/k))`.
    pub bound: f64,
}

/// Tail bound for `P(|F| > lambda)` from moment growth.
pub fn tail_from_moments(m: &MomentGrowth, lambda: f64) -> Result<TailBound> {
    m.validate()?;
    if !(lambda > 0.0) {
        return Err(Error::InvalidArgument(format!("need lambda > 0, got {lambda}")));
    }
    let scaled = lambda * m.n.powf(m.alpha);
    let p_star = (scaled / (std::f64::consts::E * m.c)).powf(2.0 / m.k).max(m.p0);
    let bound = m.prefactor() * (-m.rate() * scaled.powf(2.0 / m.k)).exp();
    Ok(TailBound { p_star, bound })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plug_in_example() {
        let m = MomentGrowth {
            c: 1.0,
            alpha: 1.0,
            n: 1.0,
            k: 1.0,
            p0: 1.0,
        };
        let t = tail_from_moments(&m, 4.0 * std::f64::consts::E).unwrap();
        assert!((t.p_star - 16.0).abs() < 1e-12);
        assert!((t.bound - m.prefactor() * (-16.0f64).exp()).abs() < 1e-18);
    }

    #[test]
    fn rejects_bad_input() {
        let m = MomentGrowth {
            c: 1.0,
            alpha: 1.0,
            n: 1.0,
            k: 0.5,
            p0: 1.0,
        };
        assert!(tail_from_moments(&m, 1.0).is_err());
    }
}
