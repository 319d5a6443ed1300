//! Ultrametric ball trees over p-adic points.
//!
//! Points sharing a digit prefix sit inside the same clopen ball; nesting the
//! balls by prefix length yields a rooted weighted tree in which the distance
//! between two leaves is exactly the radius at their lowest common ancestor.

use num_rational::BigRational;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::padic::{power_abs, PAdicNumber};

/// A deduplicated input point attached to a leaf.
#[derive(Debug, Clone)]
pub struct LeafEntry {
    pub value: PAdicNumber,
    pub multiplicity: usize,
    /// Positions of this value in the original input slice.
    pub input_indices: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct TreeNode {
    /// Absolute digits from the tree base exponent, least significant first.
    prefix: Vec<u64>,
    /// Ball radius is `p^(-radius_exp)`.
    radius_exp: i64,
    children: Vec<TreeNode>,
    /// Index into [`UltrametricTree::leaves`] when this node is a leaf.
    leaf: Option<usize>,
    leaf_ids: Vec<usize>,
}

impl TreeNode {
    pub fn prefix(&self) -> &[u64] {
        &self.prefix
    }

    pub fn radius_exp(&self) -> i64 {
        self.radius_exp
    }

    pub fn children(&self) -> &[TreeNode] {
        &self.children
    }

    pub fn is_leaf(&self) -> bool {
        self.leaf.is_some()
    }
}

#[derive(Debug, Clone)]
pub struct UltrametricTree {
    p: u64,
    root: TreeNode,
    leaves: Vec<LeafEntry>,
}

impl UltrametricTree {
    /// Build the prefix tree of a nonempty set of same-prime, same-precision
    /// points.  Duplicate points merge into one leaf with multiplicity.
    pub fn build(points: &[PAdicNumber]) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyPointSet);
        }
        let p = points[0].p();
        let precision = points[0].precision();
        for pt in points {
            if pt.p() != p {
                return Err(Error::PrimeMismatch(p, pt.p()));
            }
            if pt.precision() != precision {
                return Err(Error::PrecisionMismatch(precision, pt.precision()));
            }
        }

        let mut leaves: Vec<LeafEntry> = Vec::new();
        for (idx, pt) in points.iter().enumerate() {
            match leaves.iter_mut().find(|l| &l.value == pt) {
                Some(entry) => {
                    entry.multiplicity += 1;
                    entry.input_indices.push(idx);
                }
                None => leaves.push(LeafEntry {
                    value: pt.clone(),
                    multiplicity: 1,
                    input_indices: vec![idx],
                }),
            }
        }

        let base = leaves
            .iter()
            .filter_map(|l| l.value.valuation())
            .min()
            .unwrap_or(0);

        let ids: Vec<usize> = (0..leaves.len()).collect();
        let root = if ids.len() == 1 {
            leaf_node(&leaves, 0, base, Vec::new())
        } else {
            build_node(&leaves, ids, base, Vec::new())
        };
        Ok(Self { p, root, leaves })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn root(&self) -> &TreeNode {
        &self.root
    }

    pub fn leaves(&self) -> &[LeafEntry] {
        &self.leaves
    }

    /// Radius at the lowest common ancestor of two leaves.
    pub fn lca_radius_exp(&self, i: usize, j: usize) -> Option<i64> {
        if i >= self.leaves.len() || j >= self.leaves.len() {
            return None;
        }
        let mut node = &self.root;
        if i == j {
            return Some(node_radius_of_leaf(node, i));
        }
        loop {
            match node
                .children
                .iter()
                .find(|c| c.leaf_ids.contains(&i) && c.leaf_ids.contains(&j))
            {
                Some(child) => node = child,
                None => return Some(node.radius_exp),
            }
        }
    }

    /// Tree distance between leaves `i` and `j`: the LCA radius `p^(-k)`.
    pub fn leaf_distance(&self, i: usize, j: usize) -> Option<BigRational> {
        if i == j {
            return Some(BigRational::from_integer(0.into()));
        }
        self.lca_radius_exp(i, j).map(|k| power_abs(self.p, k))
    }

    /// JSON export: `{"prefix":[...],"radius_exp":k,"children":[...]}`.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&NodeView::from(&self.root)).expect("tree serializes")
    }

    /// DOT export; node labels are prefix digits low-to-high, edge labels the
    /// child ball radius.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph ultrametric_tree {\n");
        let mut counter = 0usize;
        dot_node(&self.root, self.p, &mut counter, None, &mut out);
        out.push_str("}\n");
        out
    }
}

fn node_radius_of_leaf(node: &TreeNode, id: usize) -> i64 {
    if node.leaf == Some(id) {
        return node.radius_exp;
    }
    for child in &node.children {
        if child.leaf_ids.contains(&id) {
            return node_radius_of_leaf(child, id);
        }
    }
    node.radius_exp
}

fn digit_at(leaves: &[LeafEntry], id: usize, pos: i64) -> u64 {
    leaves[id].value.digit_at(pos)
}

fn leaf_node(leaves: &[LeafEntry], id: usize, base: i64, mut prefix: Vec<u64>) -> TreeNode {
    let value = &leaves[id].value;
    let end = match value.valuation() {
        Some(r) => r + value.precision() as i64,
        None => base + value.precision() as i64,
    };
    let mut pos = base + prefix.len() as i64;
    while pos < end {
        prefix.push(value.digit_at(pos));
        pos += 1;
    }
    TreeNode {
        prefix,
        radius_exp: end,
        children: Vec::new(),
        leaf: Some(id),
        leaf_ids: vec![id],
    }
}

fn build_node(leaves: &[LeafEntry], ids: Vec<usize>, base: i64, mut prefix: Vec<u64>) -> TreeNode {
    debug_assert!(ids.len() >= 2);
    let mut pos = base + prefix.len() as i64;
    loop {
        let first = digit_at(leaves, ids[0], pos);
        if ids.iter().all(|&id| digit_at(leaves, id, pos) == first) {
            prefix.push(first);
            pos += 1;
            continue;
        }
        // Split: group by digit at this position, smallest digit first.
        let mut groups: Vec<(u64, Vec<usize>)> = Vec::new();
        for &id in &ids {
            let d = digit_at(leaves, id, pos);
            match groups.iter_mut().find(|(g, _)| *g == d) {
                Some((_, v)) => v.push(id),
                None => groups.push((d, vec![id])),
            }
        }
        groups.sort_unstable_by_key(|&(d, _)| d);
        let children: Vec<TreeNode> = groups
            .into_iter()
            .map(|(d, group)| {
                let mut child_prefix = prefix.clone();
                child_prefix.push(d);
                if group.len() == 1 {
                    leaf_node(leaves, group[0], base, child_prefix)
                } else {
                    build_node(leaves, group, base, child_prefix)
                }
            })
            .collect();
        return TreeNode {
            prefix,
            radius_exp: pos,
            children,
            leaf: None,
            leaf_ids: ids,
        };
    }
}

#[derive(Serialize)]
struct NodeView<'a> {
    prefix: &'a [u64],
    radius_exp: i64,
    children: Vec<NodeView<'a>>,
}

impl<'a> From<&'a TreeNode> for NodeView<'a> {
    fn from(node: &'a TreeNode) -> Self {
        NodeView {
            prefix: &node.prefix,
            radius_exp: node.radius_exp,
            children: node.children.iter().map(NodeView::from).collect(),
        }
    }
}

fn dot_node(
    node: &TreeNode,
    p: u64,
    counter: &mut usize,
    parent: Option<usize>,
    out: &mut String,
) {
    let id = *counter;
    *counter += 1;
    let label: Vec<String> = node.prefix.iter().map(|d| d.to_string()).collect();
    out.push_str(&format!("  n{id} [label=\"{}\"];\n", label.join(",")));
    if let Some(pid) = parent {
        out.push_str(&format!(
            "  n{pid} -> n{id} [label=\"{}^{}\"];\n",
            p,
            -node.radius_exp
        ));
    }
    for child in &node.children {
        dot_node(child, p, counter, Some(id), out);
    }
}
