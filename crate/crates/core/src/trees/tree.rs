use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest leaf count accepted by [`enumerate_trees`].
pub const MAX_ENUMERATED_LEAVES: usize = 14;

/// Nesting limit for parsed encodings.
pub const MAX_PARSE_DEPTH: usize = 256;

/// Full binary tree with shared subtrees. Cloning is cheap.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BinaryTree(Arc<Inner>);

#[derive(PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Inner {
    leaves: usize,
    height: usize,
    children: Option<(BinaryTree, BinaryTree)>,
}

impl BinaryTree {
    pub fn leaf() -> Self {
        BinaryTree(Arc::new(Inner {
            leaves: 1,
            height: 0,
            children: None,
        }))
    }

    pub fn node(left: BinaryTree, right: BinaryTree) -> Self {
        BinaryTree(Arc::new(Inner {
            leaves: left.leaves() + right.leaves(),
            height: 1 + left.height().max(right.height()),
            children: Some((left, right)),
        }))
    }

    pub fn is_leaf(&self) -> bool {
        self.0.children.is_none()
    }

    pub fn children(&self) -> Option<(&BinaryTree, &BinaryTree)> {
        self.0.children.as_ref().map(|(l, r)| (l, r))
    }

    pub fn leaves(&self) -> usize {
        self.0.leaves
    }

    pub fn internal_nodes(&self) -> usize {
        self.0.leaves - 1
    }

    /// Edges between the root and the deepest leaf.
    pub fn height(&self) -> usize {
        self.0.height
    }

    /// Canonical encoding: `L` for a leaf, `(ab)` for a node.
    pub fn encoding(&self) -> String {
        let mut s = String::with_capacity(3 * self.leaves());
        self.encode_into(&mut s);
        s
    }

    fn encode_into(&self, s: &mut String) {
        match self.children() {
            None => s.push('L'),
            Some((l, r)) => {
                s.push('(');
                l.encode_into(s);
                r.encode_into(s);
                s.push(')');
            }
        }
    }

    /// Right comb with `j` leaves: every left child is a leaf.
    pub fn caterpillar(j: usize) -> Result<Self> {
        if j == 0 {
            return Err(Error::InvalidArgument("a tree needs at least one leaf".into()));
        }
        let mut t = BinaryTree::leaf();
        for _ in 1..j {
            t = BinaryTree::node(BinaryTree::leaf(), t);
        }
        Ok(t)
    }

    /// Perfect tree of height `h`.
    pub fn balanced(h: usize) -> Self {
        let mut t = BinaryTree::leaf();
        for _ in 0..h {
            t = BinaryTree::node(t.clone(), t);
        }
        t
    }
}

impl fmt::Display for BinaryTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.encoding())
    }
}

impl fmt::Debug for BinaryTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BinaryTree({self})")
    }
}

impl FromStr for BinaryTree {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bytes = s.as_bytes();
        let mut pos = 0;
        let tree = parse(bytes, &mut pos, 0)?;
        if pos != bytes.len() {
            return Err(Error::TreeEncoding {
                pos,
                msg: "trailing input".into(),
            });
        }
        Ok(tree)
    }
}

fn parse(b: &[u8], pos: &mut usize, depth: usize) -> Result<BinaryTree> {
    if depth > MAX_PARSE_DEPTH {
        return Err(Error::TreeEncoding {
            pos: *pos,
            msg: format!("nesting deeper than {MAX_PARSE_DEPTH}"),
        });
    }
    match b.get(*pos) {
        Some(b'L') => {
            *pos += 1;
            Ok(BinaryTree::leaf())
        }
        Some(b'(') => {
            *pos += 1;
            let l = parse(b, pos, depth + 1)?;
            let r = parse(b, pos, depth + 1)?;
            if b.get(*pos) != Some(&b')') {
                return Err(Error::TreeEncoding {
                    pos: *pos,
                    msg: "expected ')'".into(),
                });
            }
            *pos += 1;
            Ok(BinaryTree::node(l, r))
        }
        Some(_) => Err(Error::TreeEncoding {
            pos: *pos,
            msg: "expected 'L' or '('".into(),
        }),
        None => Err(Error::TreeEncoding {
            pos: *pos,
            msg: "unexpected end of input".into(),
        }),
    }
}

/// All full binary trees with `j` leaves, ordered by left-subtree size.
pub fn enumerate_trees(j: usize) -> Result<Vec<BinaryTree>> {
    if !(1..=MAX_ENUMERATED_LEAVES).contains(&j) {
        return Err(Error::InvalidArgument(format!(
            "leaf count {j} outside 1..={MAX_ENUMERATED_LEAVES}"
        )));
    }
    let mut by_leaves: Vec<Vec<BinaryTree>> = vec![Vec::new(), vec![BinaryTree::leaf()]];
    for m in 2..=j {
        let mut trees = Vec::new();
        for i in 1..m {
            for l in &by_leaves[i] {
                for r in &by_leaves[m - i] {
                    trees.push(BinaryTree::node(l.clone(), r.clone()));
                }
            }
        }
        by_leaves.push(trees);
    }
    Ok(by_leaves.swap_remove(j))
}

/// Catalan number `C_m` as `u128`; exact for `m <= 60`.
pub fn catalan(m: u32) -> u128 {
    let mut c: u128 = 1;
    for i in 0..m as u128 {
        c = c * 2 * (2 * i + 1) / (i + 2);
    }
    c
}
