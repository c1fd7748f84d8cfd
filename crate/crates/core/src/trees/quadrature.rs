use std::collections::HashMap;
use std::num::NonZeroUsize;
use std::sync::{Arc, OnceLock};

use gauss_quad::legendre::GaussLegendre;

use super::tree::BinaryTree;
use crate::error::{Error, Result};

/// Gauss–Legendre nodes per panel.
pub const NODES_PER_PANEL: usize = 32;
/// Panels covering `[0, t]`.
pub const PANELS: usize = 2;
/// Largest leaf count accepted by the oracle.
pub const MAX_ORACLE_LEAVES: usize = 8;
/// Largest time accepted by the oracle.
pub const MAX_ORACLE_TIME: f64 = 2.0;

/// Reference rule on `[-1, 1]` with its spectral integration matrix
/// `s[i][k] = int_{-1}^{x_i} l_k(s) ds` for the Lagrange basis `l_k`.
struct Reference {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    integration: Vec<Vec<f64>>,
}

fn reference() -> &'static Reference {
    static REF: OnceLock<Reference> = OnceLock::new();
    REF.get_or_init(|| {
        let rule = GaussLegendre::new(NonZeroUsize::new(NODES_PER_PANEL).expect("nonzero"));
        let (nodes, weights): (Vec<f64>, Vec<f64>) = rule.as_node_weight_pairs().iter().copied().unzip();
        let bary: Vec<f64> = (0..nodes.len())
            .map(|k| {
                1.0 / (0..nodes.len())
                    .filter(|&m| m != k)
                    .map(|m| nodes[k] - nodes[m])
                    .product::<f64>()
            })
            .collect();
        let lagrange = |k: usize, x: f64| -> f64 {
            let mut num = 0.0;
            let mut den = 0.0;
            for (m, (&xm, &bm)) in nodes.iter().zip(&bary).enumerate() {
                let d = x - xm;
                if d == 0.0 {
                    return if m == k { 1.0 } else { 0.0 };
                }
                den += bm / d;
                if m == k {
                    num = bm / d;
                }
            }
            num / den
        };
        let integration = nodes
            .iter()
            .map(|&xi| {
                let half = 0.5 * (xi + 1.0);
                (0..nodes.len())
                    .map(|k| {
                        nodes
                            .iter()
                            .zip(&weights)
                            .map(|(&s, &w)| w * lagrange(k, -1.0 + half * (s + 1.0)))
                            .sum::<f64>()
                            * half
                    })
                    .collect()
            })
            .collect();
        Reference {
            nodes,
            weights,
            integration,
        }
    })
}

/// Nested time integrals `I_tau` evaluated by composite Gauss–Legendre
/// quadrature on `[0, t]`, memoized by tree encoding.
pub struct NestedQuadrature {
    t: f64,
    memo: HashMap<String, Arc<Vec<f64>>>,
}

impl NestedQuadrature {
    pub fn new(t: f64) -> Result<Self> {
        if !(0.0..=MAX_ORACLE_TIME).contains(&t) {
            return Err(Error::InvalidArgument(format!(
                "oracle time {t} outside [0, {MAX_ORACLE_TIME}]"
            )));
        }
        Ok(NestedQuadrature {
            t,
            memo: HashMap::new(),
        })
    }

    pub fn time(&self) -> f64 {
        self.t
    }

    fn half_width(&self) -> f64 {
        0.5 * self.t / PANELS as f64
    }

    /// `I_tau` at every quadrature node, panel-major.
    fn node_values(&mut self, tree: &BinaryTree) -> Arc<Vec<f64>> {
        let key = tree.encoding();
        if let Some(v) = self.memo.get(&key) {
            return v.clone();
        }
        let n = PANELS * NODES_PER_PANEL;
        let values = match tree.children() {
            None => vec![1.0; n],
            Some((l, r)) => {
                let lv = self.node_values(l);
                let rv = self.node_values(r);
                let integrand: Vec<f64> = lv.iter().zip(rv.iter()).map(|(a, b)| a * b).collect();
                let rf = reference();
                let h = self.half_width();
                let mut out = Vec::with_capacity(n);
                let mut offset = 0.0;
                for p in 0..PANELS {
                    let f = &integrand[p * NODES_PER_PANEL..(p + 1) * NODES_PER_PANEL];
                    for row in &rf.integration {
                        out.push(offset + h * row.iter().zip(f).map(|(s, v)| s * v).sum::<f64>());
                    }
                    offset += h * rf.weights.iter().zip(f).map(|(w, v)| w * v).sum::<f64>();
                }
                out
            }
        };
        let values = Arc::new(values);
        self.memo.insert(key, values.clone());
        values
    }

    /// `I_tau(t)`.
    pub fn evaluate(&mut self, tree: &BinaryTree) -> Result<f64> {
        if tree.leaves() > MAX_ORACLE_LEAVES {
            return Err(Error::InvalidArgument(format!(
                "oracle limited to {MAX_ORACLE_LEAVES} leaves, got {}",
                tree.leaves()
            )));
        }
        let Some((l, r)) = tree.children() else {
            return Ok(1.0);
        };
        let lv = self.node_values(l);
        let rv = self.node_values(r);
        let rf = reference();
        let h = self.half_width();
        Ok((0..PANELS)
            .map(|p| {
                let base = p * NODES_PER_PANEL;
                rf.weights
                    .iter()
                    .enumerate()
                    .map(|(k, w)| w * lv[base + k] * rv[base + k])
                    .sum::<f64>()
                    * h
            })
            .sum())
    }

    /// Quadrature nodes in `[0, t]`, panel-major.
    pub fn nodes(&self) -> Vec<f64> {
        let h = self.half_width();
        (0..PANELS)
            .flat_map(|p| {
                let a = 2.0 * h * p as f64;
                reference().nodes.iter().map(move |x| a + h * (x + 1.0))
            })
            .collect()
    }
}

/// One-shot `I_tau(t)`.
pub fn i_tau_oracle(tree: &BinaryTree, t: f64) -> Result<f64> {
    NestedQuadrature::new(t)?.evaluate(tree)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn leaf_and_cherry() {
        let leaf = BinaryTree::leaf();
        assert_eq!(i_tau_oracle(&leaf, 1.3).unwrap(), 1.0);
        let three: BinaryTree = "(L(LL))".parse().unwrap();
        assert!((i_tau_oracle(&three, 1.0).unwrap() - 0.5).abs() < 1e-14);
    }

    #[test]
    fn integration_matrix_is_exact_on_monomials() {
        let mut q = NestedQuadrature::new(2.0).unwrap();
        let cherry: BinaryTree = "(LL)".parse().unwrap();
        let v = q.node_values(&cherry);
        for (x, y) in q.nodes().iter().zip(v.iter()) {
            assert!((x - y).abs() < 1e-13);
        }
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(NestedQuadrature::new(2.5).is_err());
        assert!(NestedQuadrature::new(-0.1).is_err());
        let big = BinaryTree::caterpillar(9).unwrap();
        assert!(i_tau_oracle(&big, 1.0).is_err());
    }
}
