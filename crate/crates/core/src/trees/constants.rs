use num_bigint::BigUint;
use num_traits::One;

use super::tree::{enumerate_trees, BinaryTree};
use crate::error::{Error, Result};

/// Largest `n` accepted by [`c_star_upper`].
pub const MAX_UPPER_LEVEL: u32 = 20;

/// `C_leaf = 1`, `C_(ab) = (j - 1) C_a C_b`.
pub fn c_tau(tree: &BinaryTree) -> BigUint {
    match tree.children() {
        None => BigUint::one(),
        Some((l, r)) => BigUint::from(tree.leaves() - 1) * c_tau(l) * c_tau(r),
    }
}

/// Minimum of `C_tau` over all trees with `j` leaves, by enumeration.
pub fn c_star(j: usize) -> Result<BigUint> {
    Ok(enumerate_trees(j)?
        .iter()
        .map(c_tau)
        .min()
        .expect("at least one tree"))
}

/// Same minimum by dynamic programming over the root split. Valid because
/// `C_tau` is monotone in each child constant.
pub fn c_star_recursive(j: usize) -> Result<BigUint> {
    if j == 0 {
        return Err(Error::InvalidArgument("a tree needs at least one leaf".into()));
    }
    let mut best: Vec<BigUint> = vec![BigUint::one(), BigUint::one()];
    for m in 2..=j {
        let b = (1..m)
            .map(|i| BigUint::from(m - 1) * &best[i] * &best[m - i])
            .min()
            .expect("m >= 2");
        best.push(b);
    }
    Ok(best.swap_remove(j))
}

/// `prod_{k=1}^n (2^k - 1)^(2^(n-k))`, the constant of the perfect tree of
/// height `n`.
pub fn c_star_upper(n: u32) -> Result<BigUint> {
    if n > MAX_UPPER_LEVEL {
        return Err(Error::InvalidArgument(format!("level {n} above {MAX_UPPER_LEVEL}")));
    }
    let mut acc = BigUint::one();
    for k in 1..=n {
        let base = (BigUint::one() << k) - 1u32;
        acc *= base.pow(1u32 << (n - k));
    }
    Ok(acc)
}

/// Checks `sum_{k=1}^n k 2^(n-k) = 2^(n+1) - n - 2` in exact arithmetic and
/// returns both sides.
pub fn exponent_identity(n: u32) -> (u128, u128) {
    let lhs: u128 = (1..=n as u128).map(|k| k << (n as u128 - k)).sum();
    let rhs = (1u128 << (n + 1)) - n as u128 - 2;
    (lhs, rhs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> BinaryTree {
        s.parse().unwrap()
    }

    #[test]
    fn recurrence_values() {
        assert_eq!(c_tau(&t("L")), 1u32.into());
        assert_eq!(c_tau(&t("(L(LL))")), 2u32.into());
        assert_eq!(c_tau(&t("((LL)(LL))")), 3u32.into());
        assert_eq!(c_tau(&t("(L(L(LL)))")), 6u32.into());
        let all: Vec<BigUint> = enumerate_trees(4).unwrap().iter().map(c_tau).collect();
        let mut sorted = all.clone();
        sorted.sort();
        assert_eq!(sorted, [3u32, 6, 6, 6, 6].map(BigUint::from));
    }

    #[test]
    fn minimum_and_upper_bound() {
        assert_eq!(c_star(2).unwrap(), 1u32.into());
        assert_eq!(c_star(4).unwrap(), 3u32.into());
        assert_eq!(c_star_upper(1).unwrap(), 1u32.into());
        assert_eq!(c_star_upper(2).unwrap(), 3u32.into());
        assert_eq!(c_star_upper(3).unwrap(), 63u32.into());
        for j in 1..=10 {
            assert_eq!(c_star(j).unwrap(), c_star_recursive(j).unwrap());
        }
        assert!(c_star_upper(21).is_err());
    }

    #[test]
    fn exponent_sum() {
        assert_eq!(exponent_identity(3), (11, 11));
    }
}
