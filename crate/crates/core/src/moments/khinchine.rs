use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::seeds::{derive, mix64, Domain};

/// Largest coefficient count for exhaustive enumeration.
pub const MAX_EXACT_TERMS: usize = 24;
/// Largest even moment for exhaustive enumeration.
pub const MAX_EXACT_MOMENT: u32 = 12;
/// Relative agreement demanded between the two exact evaluations.
pub const EXACT_AGREEMENT: f64 = 1e-12;
/// Samples used for non-even moments.
pub const KHINCHINE_SAMPLES: usize = 1_000_000;
/// Fewest trials accepted by [`decoupled_moment_check`].
pub const MIN_DECOUPLED_TRIALS: usize = 10_000;

/// Neumaier compensated sum.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

fn check_exact(c: &[f64], p: u32) -> Result<()> {
    if c.is_empty() || c.len() > MAX_EXACT_TERMS {
        return Err(Error::InvalidArgument(format!(
            "exact moments need 1..={MAX_EXACT_TERMS} coefficients, got {}",
            c.len()
        )));
    }
    if p == 0 || p % 2 == 1 || p > MAX_EXACT_MOMENT {
        return Err(Error::InvalidArgument(format!(
            "exact moments need an even p <= {MAX_EXACT_MOMENT}, got {p}"
        )));
    }
    if c.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidArgument("coefficients must be finite".into()));
    }
    Ok(())
}

/// Signed partial sums over all sign patterns of `c`.
fn pattern_sums(c: &[f64]) -> Vec<f64> {
    let mut sums = vec![0.0];
    for &x in c {
        let mut next = Vec::with_capacity(2 * sums.len());
        for &s in &sums {
            next.push(s + x);
            next.push(s - x);
        }
        sums = next;
    }
    sums
}

/// `E|sum eps_k c_k|^p` by exhaustive enumeration of the `2^K` sign
/// patterns (first sign fixed by symmetry, halves combined pairwise).
pub fn enumerated_moment(c: &[f64], p: u32) -> Result<f64> {
    check_exact(c, p)?;
    let (first, rest) = c.split_first().expect("nonempty");
    let mid = rest.len() / 2;
    let left = pattern_sums(&rest[..mid]);
    let right = pattern_sums(&rest[mid..]);
    let mut acc = CompensatedSum::default();
    for &a in &left {
        let base = first + a;
        for &b in &right {
            acc.add((base + b).powi(p as i32));
        }
    }
    Ok(acc.value() / (left.len() * right.len()) as f64)
}

/// `sum_{k_1+..+k_K = p/2} p! / prod (2k_i)! prod c_i^(2k_i)`.
pub fn multinomial_moment(c: &[f64], p: u32) -> Result<f64> {
    check_exact(c, p)?;
    let j = p / 2;
    let fact: Vec<f64> = (0..=p).scan(1.0, |f, k| {
        if k > 0 {
            *f *= k as f64;
        }
        Some(*f)
    })
    .collect();
    let mut acc = CompensatedSum::default();
    let mut ks = vec![0u32; c.len()];
    fn walk(i: usize, rest: u32, ks: &mut [u32], c: &[f64], fact: &[f64], p: u32, acc: &mut CompensatedSum) {
        if i + 1 == ks.len() {
            ks[i] = rest;
            let mut term = fact[p as usize];
            for (k, x) in ks.iter().zip(c) {
                term *= x.powi(2 * *k as i32) / fact[2 * *k as usize];
            }
            acc.add(term);
            return;
        }
        for k in 0..=rest {
            ks[i] = k;
            walk(i + 1, rest - k, ks, c, fact, p, acc);
        }
    }
    walk(0, j, &mut ks, c, &fact, p, &mut acc);
    Ok(acc.value())
}

/// Exact `E|sum eps_k c_k|^p` for real coefficients. Both evaluations are
/// computed and must agree to [`EXACT_AGREEMENT`].
pub fn exact_moment(c: &[f64], p: u32) -> Result<f64> {
    let a = enumerated_moment(c, p)?;
    let b = multinomial_moment(c, p)?;
    let scale = a.abs().max(b.abs());
    if (a - b).abs() > EXACT_AGREEMENT * scale {
        return Err(Error::InvalidArgument(format!(
            "enumeration {a:e} and multinomial sum {b:e} disagree"
        )));
    }
    Ok(a)
}

/// `|sum eps_k c_k|_{L^p} / (sqrt(p) |c|_2)`; exact for even `p <= 12`,
/// Monte Carlo with [`KHINCHINE_SAMPLES`] samples otherwise.
pub fn khinchine_ratio(c: &[f64], p: f64, seed: u64) -> Result<f64> {
    if !(p >= 2.0) || !p.is_finite() {
        return Err(Error::InvalidArgument(format!("need finite p >= 2, got {p}")));
    }
    let l2 = c.iter().map(|x| x * x).sum::<f64>().sqrt();
    if l2 == 0.0 {
        return Ok(0.0);
    }
    let even = p.fract() == 0.0 && (p as u32) % 2 == 0 && p as u32 <= MAX_EXACT_MOMENT;
    let norm = if even && c.len() <= MAX_EXACT_TERMS {
        exact_moment(c, p as u32)?.powf(1.0 / p)
    } else {
        let mut acc = CompensatedSum::default();
        for s in 0..KHINCHINE_SAMPLES as u64 {
            let mut bits = 0u64;
            let mut sum = 0.0;
            for (k, x) in c.iter().enumerate() {
                if k % 64 == 0 {
                    bits = mix64(derive(seed, Domain::Signs, s) ^ (k as u64 / 64));
                }
                sum += if bits >> (k % 64) & 1 == 1 { *x } else { -*x };
            }
            acc.add(sum.abs().powf(p));
        }
        (acc.value() / KHINCHINE_SAMPLES as f64).powf(1.0 / p)
    };
    Ok(norm / (p.sqrt() * l2))
}

/// Monte Carlo comparison of `|sum eps_k b_k|_{L^p}` with
/// `sqrt(p) |(sum |b_k|^2)^(1/2)|_{L^p}` for random `b` independent of `eps`.
#[derive(Clone, Debug, PartialEq)]
pub struct DecoupledVerdict {
    pub k: usize,
    pub p: u32,
    pub trials: usize,
    pub lhs: f64,
    pub rhs: f64,
    /// `lhs / (sqrt(p) rhs)`.
    pub constant: f64,
    /// Delta-method standard error of `constant`.
    pub std_err: f64,
}

impl DecoupledVerdict {
    pub fn holds_with(&self, c: f64) -> bool {
        self.constant <= c
    }
}

/// `sampler` fills one realization of `b`; its stream and the sign stream
/// come from disjoint seed domains.
pub fn decoupled_moment_check(
    mut sampler: impl FnMut(&mut ChaCha8Rng, &mut [f64]),
    k: usize,
    p: u32,
    trials: usize,
    seed: u64,
) -> Result<DecoupledVerdict> {
    if trials < MIN_DECOUPLED_TRIALS {
        return Err(Error::InvalidArgument(format!(
            "need at least {MIN_DECOUPLED_TRIALS} trials, got {trials}"
        )));
    }
    if k == 0 || p < 2 || p % 2 == 1 {
        return Err(Error::InvalidArgument(format!("need K >= 1 and even p >= 2, got K = {k}, p = {p}")));
    }
    let mut b = vec![0.0; k];
    let (mut sl, mut sl2, mut sr, mut sr2, mut slr) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for t in 0..trials as u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(derive(seed, Domain::Coefficients, t));
        sampler(&mut rng, &mut b);
        let mut signs = ChaCha8Rng::seed_from_u64(derive(seed, Domain::Rademacher, t));
        let mut sum = 0.0;
        let mut sq = 0.0;
        for x in &b {
            sum += if signs.gen::<bool>() { *x } else { -*x };
            sq += x * x;
        }
        let l = sum.abs().powi(p as i32);
        let r = sq.powf(p as f64 / 2.0);
        sl += l;
        sl2 += l * l;
        sr += r;
        sr2 += r * r;
        slr += l * r;
    }
    let n = trials as f64;
    let (ml, mr) = (sl / n, sr / n);
    let (vl, vr, cov) = (sl2 / n - ml * ml, sr2 / n - mr * mr, slr / n - ml * mr);
    let pf = p as f64;
    let lhs = ml.powf(1.0 / pf);
    let rhs = mr.powf(1.0 / pf);
    let constant = lhs / (pf.sqrt() * rhs);
    // constant = (ml / mr)^(1/p) / sqrt(p)
    let q = ml / mr;
    let var_q = (vl / (mr * mr) - 2.0 * ml * cov / mr.powi(3) + ml * ml * vr / mr.powi(4)) / n;
    let std_err = constant / pf * var_q.max(0.0).sqrt() / q;
    Ok(DecoupledVerdict {
        k,
        p,
        trials,
        lhs,
        rhs,
        constant,
        std_err,
    })
}

/// Per-term comparison of the two multinomial expansions for a multi-index
/// `(k_1..k_N)` with `sum k_i = j`.
#[derive(Clone, Debug, PartialEq)]
pub struct NormconstantTerm {
    /// `(2j)! / prod (2k_i)!`.
    pub even_coefficient: f64,
    /// `j! / prod k_i!`.
    pub square_coefficient: f64,
    /// `(2j)!/j! prod (k_i!/(2k_i)!)`.
    pub factor: f64,
    /// `(2j)!/j!`.
    pub bound: f64,
}

impl NormconstantTerm {
    pub fn holds(&self) -> bool {
        self.factor <= self.bound
            && (self.even_coefficient - self.factor * self.square_coefficient).abs()
                <= 1e-12 * self.even_coefficient
    }
}

pub fn normconstant_term(ks: &[u32]) -> Result<NormconstantTerm> {
    let j: u32 = ks.iter().sum();
    if j == 0 || j > 50 {
        return Err(Error::InvalidArgument(format!("multi-index total {j} outside 1..=50")));
    }
    let f = |n: u32| (1..=n).map(f64::from).product::<f64>();
    let even_coefficient = f(2 * j) / ks.iter().map(|&k| f(2 * k)).product::<f64>();
    let square_coefficient = f(j) / ks.iter().map(|&k| f(k)).product::<f64>();
    let bound = f(2 * j) / f(j);
    let factor = bound * ks.iter().map(|&k| f(k) / f(2 * k)).product::<f64>();
    Ok(NormconstantTerm {
        even_coefficient,
        square_coefficient,
        factor,
        bound,
    })
}

/// Random multi-indices of length `len` summing to `j`.
pub fn random_multi_index(rng: &mut impl Rng, len: usize, j: u32) -> Vec<u32> {
    let mut ks = vec![0u32; len.max(1)];
    for _ in 0..j {
        let i = rng.gen_range(0..ks.len());
        ks[i] += 1;
    }
    ks
}
