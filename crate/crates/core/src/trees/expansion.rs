use std::collections::{BTreeSet, HashMap};
use std::ops::RangeInclusive;
use std::sync::Arc;

use num_complex::Complex64;
use num_traits::ToPrimitive;

use super::constants::c_tau;
use super::tree::BinaryTree;
use crate::error::{Error, Result};
use crate::picard::{duhamel, space_time_norm, DuhamelKernel, FieldSeries, TimeGrid};
use crate::randomization::RandomizedData;
use crate::spectral::{
    apply_multiplier, dealiased_product, BlockIndex, Derivative, Field, MultiplierKind, Representation,
};

/// Largest iterate order accepted by [`reconstruct_iterate`].
pub const MAX_RECONSTRUCT_ORDER: usize = 2;
/// Largest number of active blocks accepted by [`reconstruct_iterate`].
pub const MAX_RECONSTRUCT_BLOCKS: usize = 6;

/// Left-subtree leaf counts `i` for which `A_0(G_i, G_{j-i})` occurs in the
/// `j`-factor term of the `n`-th iterate.
pub fn b_index_set(j: usize, n: u32) -> Result<RangeInclusive<usize>> {
    if n == 0 || n > 30 || j < 2 || j > 1 << n {
        return Err(Error::InvalidArgument(format!("no split set for j = {j}, n = {n}")));
    }
    let half = 1usize << (n - 1);
    Ok(if j <= half { 1..=j - 1 } else { j - half..=half })
}

/// Trees realized by the `j`-factor term at level `n`, generated by the
/// split-set induction.
pub fn trees_at_level(n: u32, j: usize) -> Result<Vec<BinaryTree>> {
    if j == 0 || n > 30 || j > 1 << n {
        return Err(Error::InvalidArgument(format!("no {j}-factor term at level {n}")));
    }
    if j == 1 {
        return Ok(vec![BinaryTree::leaf()]);
    }
    let mut out = Vec::new();
    for i in b_index_set(j, n)? {
        let left = trees_at_level(n - 1, i)?;
        let right = trees_at_level(n - 1, j - i)?;
        for l in &left {
            for r in &right {
                out.push(BinaryTree::node(l.clone(), r.clone()));
            }
        }
    }
    Ok(out)
}

/// Trees with `j` leaves and height at most `h`.
pub fn trees_of_height_at_most(h: usize, j: usize) -> BTreeSet<BinaryTree> {
    if j == 1 {
        return BTreeSet::from([BinaryTree::leaf()]);
    }
    if h == 0 {
        return BTreeSet::new();
    }
    let mut out = BTreeSet::new();
    for i in 1..j {
        let left = trees_of_height_at_most(h - 1, i);
        let right = trees_of_height_at_most(h - 1, j - i);
        for l in &left {
            for r in &right {
                out.insert(BinaryTree::node(l.clone(), r.clone()));
            }
        }
    }
    out
}

/// Tree terms for one randomized datum, memoized by subtree and block
/// tuple.
pub struct TermEvaluator<'a> {
    data: &'a RandomizedData,
    tg: TimeGrid,
    derivative: Derivative,
    memo: HashMap<(String, Vec<BlockIndex>), Arc<FieldSeries>>,
}

impl<'a> TermEvaluator<'a> {
    pub fn new(data: &'a RandomizedData, tg: TimeGrid, derivative: Derivative) -> Self {
        TermEvaluator {
            data,
            tg,
            derivative,
            memo: HashMap::new(),
        }
    }

    /// Unsigned free piece `F_k = d W(t) P_k (phi0, phi1)`.
    fn leaf(&self, k: BlockIndex) -> Result<FieldSeries> {
        let grid = self.data.grid();
        let dec = self.data.decomposition();
        let i = dec
            .blocks()
            .iter()
            .position(|&b| b == k)
            .ok_or(Error::BlockOutOfRange(k.0))?;
        let p0 = dec.phi0_blocks()[i].to_field(grid);
        let p1 = dec.phi1_blocks()[i].to_field(grid);
        let u = FieldSeries::from_fn(self.tg, "u", |t| {
            apply_multiplier(&p0, MultiplierKind::CosHalfwave(t))
                .axpy(1.0.into(), &apply_multiplier(&p1, MultiplierKind::SincHalfwave(t)))
                .expect("same grid")
        })?;
        Ok(match self.derivative.axis() {
            Some(a) => u.map("F", |f| apply_multiplier(f, MultiplierKind::SpatialDerivative(a))),
            None => FieldSeries::from_fn(self.tg, "F", |t| {
                apply_multiplier(&p0, MultiplierKind::CosHalfwaveRate(t))
                    .axpy(1.0.into(), &apply_multiplier(&p1, MultiplierKind::CosHalfwave(t)))
                    .expect("same grid")
            })?,
        })
    }

    /// `G^tau_{k_1..k_j}`: leaves carry `F_k`, nodes apply `A_0` to the
    /// dealiased product of their children.
    pub fn evaluate(&mut self, tree: &BinaryTree, blocks: &[BlockIndex]) -> Result<Arc<FieldSeries>> {
        if tree.leaves() != blocks.len() {
            return Err(Error::InvalidArgument(format!(
                "tree has {} leaves but {} blocks were given",
                tree.leaves(),
                blocks.len()
            )));
        }
        let key = (tree.encoding(), blocks.to_vec());
        if let Some(v) = self.memo.get(&key) {
            return Ok(v.clone());
        }
        let value = match tree.children() {
            None => self.leaf(blocks[0])?,
            Some((l, r)) => {
                let (bl, br) = blocks.split_at(l.leaves());
                let gl = self.evaluate(l, bl)?;
                let gr = self.evaluate(r, br)?;
                let product = gl.zip_map(&gr, "product", dealiased_product)?;
                duhamel(&product, DuhamelKernel::Derivative(self.derivative))?
            }
        };
        let value = Arc::new(value.renamed(format!("G{}", key.0)));
        self.memo.insert(key, value.clone());
        Ok(value)
    }
}

pub fn evaluate_tree_term(
    tree: &BinaryTree,
    blocks: &[BlockIndex],
    data: &RandomizedData,
    tg: TimeGrid,
    derivative: Derivative,
) -> Result<FieldSeries> {
    let v = TermEvaluator::new(data, tg, derivative).evaluate(tree, blocks)?;
    Ok(Arc::try_unwrap(v).unwrap_or_else(|a| (*a).clone()))
}

/// `du^(n) = sum_j sum_{k_1..k_j} eps_{k_1}..eps_{k_j} sum_tau G^tau_{k_1..k_j}`,
/// assembled term by term.
pub fn reconstruct_iterate(
    n: usize,
    data: &RandomizedData,
    tg: TimeGrid,
    derivative: Derivative,
) -> Result<FieldSeries> {
    let blocks = data.blocks();
    if n > MAX_RECONSTRUCT_ORDER || blocks.len() > MAX_RECONSTRUCT_BLOCKS {
        return Err(Error::ResourceCap(format!(
            "reconstruction limited to n <= {MAX_RECONSTRUCT_ORDER} and {MAX_RECONSTRUCT_BLOCKS} blocks, got n = {n} and {} blocks",
            blocks.len()
        )));
    }
    if !data.decomposition().phi1_is_zero() {
        return Err(Error::InvalidArgument(
            "tree reconstruction requires phi1 = 0".into(),
        ));
    }
    let grid = data.grid();
    let mut acc: Vec<Vec<Complex64>> = vec![vec![Complex64::default(); grid.len()]; tg.n_nodes()];
    let mut eval = TermEvaluator::new(data, tg, derivative);
    for j in 1..=1usize << n {
        let trees = trees_at_level(n as u32, j)?;
        for tuple in tuples(blocks, j) {
            let sign: f64 = tuple
                .iter()
                .map(|&k| data.draw().epsilon(k).expect("drawn for every active block") as f64)
                .product();
            for tree in &trees {
                let g = eval.evaluate(tree, &tuple)?;
                for (a, f) in acc.iter_mut().zip(g.fields()) {
                    for (x, y) in a.iter_mut().zip(f.data()) {
                        *x += sign * y;
                    }
                }
            }
        }
    }
    let fields = acc
        .into_iter()
        .map(|d| Field::from_data(grid, Representation::Spectral, d))
        .collect::<Result<Vec<_>>>()?;
    FieldSeries::new(tg, "du", fields)
}

/// All `j`-tuples over `blocks` in lexicographic order.
fn tuples(blocks: &[BlockIndex], j: usize) -> impl Iterator<Item = Vec<BlockIndex>> + '_ {
    let total = blocks.len().pow(j as u32);
    (0..total).map(move |mut c| {
        let mut t = vec![BlockIndex([0, 0]); j];
        for slot in t.iter_mut().rev() {
            *slot = blocks[c % blocks.len()];
            c /= blocks.len();
        }
        t
    })
}

/// Smallest `C` with
/// `|G^tau|_{L^inf L^4} <= T^(j-1)/C_tau * C^((j-1)/2) sqrt(C_tau) prod |P_k phi0|_{H^1}`.
pub fn tree_term_constant(tree: &BinaryTree, g: &FieldSeries, block_h1: &[f64]) -> Result<f64> {
    let j = tree.leaves();
    if j < 2 || block_h1.len() != j {
        return Err(Error::InvalidArgument(
            "constant needs a tree with at least two leaves and one norm per leaf".into(),
        ));
    }
    let ct = c_tau(tree).to_f64().expect("finite");
    let lhs = space_time_norm(g, f64::INFINITY, 4.0)?;
    let t = g.time_grid().t_final();
    let prod: f64 = block_h1.iter().product();
    if prod == 0.0 {
        return Ok(0.0);
    }
    let ratio = lhs * ct / t.powi(j as i32 - 1) / (ct.sqrt() * prod);
    Ok(ratio.powf(2.0 / (j as f64 - 1.0)))
}

/// One line of a tree report.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct TreeRow {
    pub encoding: String,
    pub j: usize,
    pub c_tau: String,
    pub i_tau_1: f64,
    pub residual: f64,
}

impl TreeRow {
    pub const HEADER: &'static str = "encoding,j,c_tau,i_tau_1,residual";

    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{:.17e},{:.3e}",
            self.encoding, self.j, self.c_tau, self.i_tau_1, self.residual
        )
    }
}

/// Report rows for every tree with at most `max_leaves` leaves.
pub fn tree_rows(max_leaves: usize) -> Result<Vec<TreeRow>> {
    let mut q = super::quadrature::NestedQuadrature::new(1.0)?;
    let mut rows = Vec::new();
    for j in 1..=max_leaves {
        for tree in super::tree::enumerate_trees(j)? {
            let c = c_tau(&tree);
            let i1 = q.evaluate(&tree)?;
            let exact = 1.0 / c.to_f64().expect("finite");
            rows.push(TreeRow {
                encoding: tree.encoding(),
                j,
                c_tau: c.to_string(),
                i_tau_1: i1,
                residual: (i1 - exact).abs(),
            });
        }
    }
    Ok(rows)
}
