//! Full binary trees indexing the nested Duhamel integrals of the Picard
//! expansion, their constants, and tree-by-tree reconstruction of iterates.

mod constants;
mod expansion;
mod quadrature;
mod suite;
mod tree;

pub use constants::{c_star, c_star_recursive, c_star_upper, c_tau, exponent_identity, MAX_UPPER_LEVEL};
pub use expansion::{
    b_index_set, evaluate_tree_term, reconstruct_iterate, tree_rows, tree_term_constant, trees_at_level,
    trees_of_height_at_most, TermEvaluator, TreeRow, MAX_RECONSTRUCT_BLOCKS, MAX_RECONSTRUCT_ORDER,
};
pub use quadrature::{i_tau_oracle, NestedQuadrature, MAX_ORACLE_LEAVES, MAX_ORACLE_TIME, NODES_PER_PANEL, PANELS};
pub use tree::{catalan, enumerate_trees, BinaryTree, MAX_ENUMERATED_LEAVES, MAX_PARSE_DEPTH};
pub use suite::tree_suite;
