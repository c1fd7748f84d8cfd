use num_traits::ToPrimitive;

use super::{c_star, c_star_recursive, c_star_upper, c_tau, catalan, enumerate_trees, exponent_identity, NestedQuadrature};
use crate::error::Result;
use crate::verdict::Verdict;

/// Combinatorial and quadrature checks of the tree constants.
pub fn tree_suite() -> Result<Vec<Verdict>> {
    let mut out = Vec::new();
    for j in 1..=12usize {
        let got = enumerate_trees(j)?.len() as u128;
        let want = catalan(j as u32 - 1);
        out.push(Verdict::new("tree_count", format!("j={j}"), got.to_string(), got == want));
    }
    let mut q = NestedQuadrature::new(1.0)?;
    for j in 1..=7usize {
        let mut worst: f64 = 0.0;
        for tree in enumerate_trees(j)? {
            let exact = 1.0 / c_tau(&tree).to_f64().expect("finite");
            worst = worst.max((q.evaluate(&tree)? - exact).abs());
        }
        out.push(Verdict::new("i_tau_closed_form", format!("j={j},t=1"), format!("{worst:.3e}"), worst <= 1e-9));
    }
    for n in 1..=3u32 {
        let star = c_star(1 << n)?;
        let upper = c_star_upper(n)?;
        out.push(Verdict::new(
            "c_star_upper",
            format!("n={n}"),
            format!("{star} <= {upper}"),
            star <= upper,
        ));
    }
    for j in 1..=12usize {
        let a = c_star(j)?;
        let b = c_star_recursive(j)?;
        out.push(Verdict::new("c_star_recursion", format!("j={j}"), a.to_string(), a == b));
    }
    let identity = (0..=20).all(|n| {
        let (l, r) = exponent_identity(n);
        l == r
    });
    out.push(Verdict::new("exponent_identity", "n<=20", identity.to_string(), identity));
    Ok(out)
}
