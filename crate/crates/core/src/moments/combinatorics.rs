use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Largest argument accepted by the Stirling routines.
pub const MAX_STIRLING: u32 = 30;
/// Largest `j` accepted by [`partition_classes`].
pub const MAX_PARTITION_J: u32 = 12;

pub fn factorial(n: u32) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * k)
}

pub fn binomial(n: u32, k: u32) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    (0..k).fold(BigUint::one(), |acc, i| acc * (n - i) / (i + 1))
}

fn check_pair(j: u32, r: u32) -> Result<()> {
    if r > j || j > MAX_STIRLING {
        return Err(Error::InvalidArgument(format!(
            "need r <= j <= {MAX_STIRLING}, got j = {j}, r = {r}"
        )));
    }
    Ok(())
}

/// `S(j, r) = (1/r!) sum_{i=0}^r (-1)^(r-i) C(r, i) i^j`.
pub fn stirling2(j: u32, r: u32) -> Result<BigUint> {
    check_pair(j, r)?;
    let mut acc = BigInt::zero();
    for i in 0..=r {
        let term = BigInt::from(binomial(r, i)) * BigInt::from(BigUint::from(i).pow(j));
        if (r - i) % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    Ok((acc / BigInt::from(factorial(r)))
        .to_biguint()
        .expect("alternating sum is nonnegative"))
}

/// Triangle `S(j, r)` for `0 <= r <= j <= max` from
/// `S(j, r) = r S(j-1, r) + S(j-1, r-1)`.
pub fn stirling2_table(max: u32) -> Result<Vec<Vec<BigUint>>> {
    if max > MAX_STIRLING {
        return Err(Error::InvalidArgument(format!("table size {max} above {MAX_STIRLING}")));
    }
    let mut t: Vec<Vec<BigUint>> = vec![vec![BigUint::one()]];
    for j in 1..=max as usize {
        let mut row = vec![BigUint::zero(); j + 1];
        for r in 1..=j {
            let stay = if r < j { &t[j - 1][r] * r } else { BigUint::zero() };
            row[r] = stay + &t[j - 1][r - 1];
        }
        t.push(row);
    }
    Ok(t)
}

/// `r! S(N, r)` and the two comparisons used against it.
#[derive(Clone, Debug, PartialEq)]
pub struct SurjectionCheck {
    pub count: BigUint,
    /// `r! S(N, r) <= r^N`.
    pub below_all_maps: bool,
    /// `r! S(N, r) / r^(N-r) <= r^r`.
    pub normalized_below_r_pow_r: bool,
}

impl SurjectionCheck {
    pub fn holds(&self) -> bool {
        self.below_all_maps && self.normalized_below_r_pow_r
    }
}

/// Number of surjections from `N` items onto `r` items.
pub fn surjection_count(n: u32, r: u32) -> Result<SurjectionCheck> {
    let count = factorial(r) * stirling2(n, r)?;
    let all = BigUint::from(r).pow(n);
    // count / r^(N-r) <= r^r  <=>  count <= r^N
    let normalized = count.clone() <= BigUint::from(r).pow(n - r) * BigUint::from(r).pow(r);
    Ok(SurjectionCheck {
        below_all_maps: count <= all,
        normalized_below_r_pow_r: normalized,
        count,
    })
}

/// Refined Stirling bound `S(j, r) <= C(j, r) r^(j-r) / 2` (only for `r < j`)
/// and `C(j, r) <= (e j / r)^r`.
#[derive(Clone, Debug, PartialEq)]
pub struct StirlingBoundCheck {
    pub j: u32,
    pub r: u32,
    pub stirling: BigUint,
    pub refined: Option<bool>,
    pub binomial_bound: bool,
}

impl StirlingBoundCheck {
    pub fn holds(&self) -> bool {
        self.refined.unwrap_or(true) && self.binomial_bound
    }
}

pub fn stirling_refined_bound_check(j: u32, r: u32) -> Result<StirlingBoundCheck> {
    if r == 0 || r > j || j > 20 {
        return Err(Error::InvalidArgument(format!("need 1 <= r <= j <= 20, got j = {j}, r = {r}")));
    }
    let s = stirling2(j, r)?;
    let c = binomial(j, r);
    let refined = (r < j).then(|| BigUint::from(2u32) * &s <= &c * BigUint::from(r).pow(j - r));
    let cf = c.to_f64().expect("finite");
    let bound = (std::f64::consts::E * j as f64 / r as f64).powi(r as i32);
    Ok(StirlingBoundCheck {
        j,
        r,
        stirling: s,
        refined,
        binomial_bound: cf <= bound * (1.0 + 1e-12),
    })
}

/// Multiplicity profile of one class of index tuples.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionClass {
    pub j: u32,
    /// Nonincreasing multiplicities, one per distinct value.
    pub alphas: Vec<u32>,
    /// Set partitions of `j` labels with this profile.
    pub count: BigUint,
}

impl PartitionClass {
    pub fn r(&self) -> u32 {
        self.alphas.len() as u32
    }

    pub fn r_odd(&self) -> u32 {
        self.alphas.iter().filter(|a| *a % 2 == 1).count() as u32
    }
}

/// Every multiplicity profile of `j` labeled indices, with
/// `count = j! / (prod alpha_i! prod m_s!)` where `m_s` counts parts of size `s`.
pub fn partition_classes(j: u32) -> Result<Vec<PartitionClass>> {
    if j == 0 || j > MAX_PARTITION_J {
        return Err(Error::InvalidArgument(format!("j = {j} outside 1..={MAX_PARTITION_J}")));
    }
    let mut out = Vec::new();
    let mut cur = Vec::new();
    integer_partitions(j, j, &mut cur, &mut |alphas| {
        let mut den = BigUint::one();
        for &a in alphas {
            den *= factorial(a);
        }
        let mut i = 0;
        while i < alphas.len() {
            let run = alphas[i..].iter().take_while(|&&a| a == alphas[i]).count();
            den *= factorial(run as u32);
            i += run;
        }
        out.push(PartitionClass {
            j,
            alphas: alphas.to_vec(),
            count: factorial(j) / den,
        });
    });
    Ok(out)
}

fn integer_partitions(rest: u32, max_part: u32, cur: &mut Vec<u32>, emit: &mut impl FnMut(&[u32])) {
    if rest == 0 {
        emit(cur);
        return;
    }
    for part in (1..=rest.min(max_part)).rev() {
        cur.push(part);
        integer_partitions(rest - part, part, cur, emit);
        cur.pop();
    }
}

/// Bell numbers `B_0..=B_max` from the Bell triangle.
pub fn bell_numbers(max: u32) -> Vec<BigUint> {
    let mut bells = vec![BigUint::one()];
    let mut row = vec![BigUint::one()];
    for _ in 0..max {
        let mut next = vec![row.last().expect("nonempty").clone()];
        for v in &row {
            let x = next.last().expect("nonempty") + v;
            next.push(x);
        }
        bells.push(next[0].clone());
        row = next;
    }
    bells
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stirling_examples() {
        assert_eq!(stirling2(4, 2).unwrap(), 7u32.into());
        assert_eq!(stirling2(3, 2).unwrap(), 3u32.into());
        assert_eq!(stirling2(9, 1).unwrap(), 1u32.into());
        assert_eq!(stirling2(9, 9).unwrap(), 1u32.into());
        assert_eq!(stirling2(0, 0).unwrap(), 1u32.into());
        assert!(stirling2(2, 3).is_err());
    }

    #[test]
    fn surjections() {
        let s = surjection_count(4, 2).unwrap();
        assert_eq!(s.count, 14u32.into());
        assert!(s.holds());
        assert_eq!(surjection_count(5, 3).unwrap().count, 150u32.into());
        assert_eq!(surjection_count(6, 6).unwrap().count, factorial(6));
    }

    #[test]
    fn refined_bound() {
        let c = stirling_refined_bound_check(4, 2).unwrap();
        assert_eq!(c.refined, Some(true));
        let d = stirling_refined_bound_check(5, 5).unwrap();
        assert_eq!(d.refined, None);
        assert!(d.holds());
        assert!(stirling_refined_bound_check(10, 3).unwrap().holds());
    }

    #[test]
    fn classes() {
        let c2 = partition_classes(2).unwrap();
        assert_eq!(c2.iter().map(|c| c.alphas.clone()).collect::<Vec<_>>(), [vec![2], vec![1, 1]]);
        let r2: Vec<_> = partition_classes(4).unwrap().into_iter().filter(|c| c.r() == 2).collect();
        assert_eq!(r2.len(), 2);
        assert_eq!(r2[0].alphas, [3, 1]);
        assert_eq!(r2[0].count, 4u32.into());
        assert_eq!(r2[1].count, 3u32.into());
        assert_eq!(r2[0].r_odd(), 2);
        assert_eq!(bell_numbers(5)[5], 52u32.into());
    }
}
