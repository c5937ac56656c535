//! Concrete fully resolved unrooted trees with labelled leaves.
//!
//! Trees on `n` leaves are built by the leaf-insertion construction: start
//! from the unique tree on leaves 1, 2, 3 and, for `k = 4..=n`, subdivide one
//! of the `2k - 5` existing edges and hang leaf `k` from the new node. The
//! sequence of edge choices (an [`InsertionCode`]) identifies the tree, which
//! gives a bijection between codes and trees and hence `(2n-5)!!` trees.

mod code;
mod enumerate;
mod newick;
mod sample;

use crate::error::{domain, Error, Result};

pub use code::InsertionCode;
pub use enumerate::{empirical_distribution, enumerate, Enumerator, DEFAULT_MAX_ENUM_N};
pub use newick::parse_newick;
pub use sample::{monte_carlo_distribution, random_code, sample_uniform, sample_with};

type NodeId = u32;
const NONE: NodeId = NodeId::MAX;

/// Unrooted tree whose internal nodes all have degree 3.
///
/// Nodes `0..n` are the leaves (node `j` carries label `j + 1`); nodes
/// `n..2n-2` are internal. Edges keep their creation order, which is what
/// makes the insertion code canonical.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhyloTree {
    n: usize,
    adj: Vec<[NodeId; 3]>,
    edges: Vec<[NodeId; 2]>,
}

impl PhyloTree {
    /// The unique tree on leaves 1, 2, 3 with room for `capacity` leaves.
    fn star(capacity: usize) -> Self {
        debug_assert!(capacity >= 3);
        let c = capacity as NodeId;
        let mut adj = vec![[NONE; 3]; 2 * capacity - 2];
        adj[capacity] = [0, 1, 2];
        for slot in &mut adj[..3] {
            slot[0] = c;
        }
        let mut edges = Vec::with_capacity(2 * capacity - 3);
        edges.extend([[c, 0], [c, 1], [c, 2]]);
        Self {
            n: capacity,
            adj,
            edges,
        }
    }

    /// Leaves attached so far while the tree is under construction.
    fn attached_leaves(&self) -> usize {
        (self.edges.len() + 3) / 2
    }

    /// Subdivides edge `edge` (0-based creation index) and attaches the next
    /// leaf to the new node.
    fn insert_leaf(&mut self, edge: usize) {
        let leaf = self.attached_leaves();
        let internal = (self.n + leaf - 2) as NodeId;
        let leaf = leaf as NodeId;
        let [u, v] = self.edges[edge];
        self.edges[edge] = [u, internal];
        self.edges.push([internal, v]);
        self.edges.push([internal, leaf]);
        replace(&mut self.adj[u as usize], v, internal);
        replace(&mut self.adj[v as usize], u, internal);
        self.adj[internal as usize] = [u, v, leaf];
        self.adj[leaf as usize] = [internal, NONE, NONE];
    }

    /// Reverts the last [`insert_leaf`](Self::insert_leaf) on `edge`.
    fn remove_last_leaf(&mut self, edge: usize) {
        let [_, leaf] = self.edges.pop().expect("leaf edge");
        let [internal, v] = self.edges.pop().expect("subdivided edge");
        let [u, _] = self.edges[edge];
        self.edges[edge] = [u, v];
        replace(&mut self.adj[u as usize], internal, v);
        replace(&mut self.adj[v as usize], internal, u);
        self.adj[internal as usize] = [NONE; 3];
        self.adj[leaf as usize] = [NONE; 3];
    }

    /// Number of leaves.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    /// Edges in creation order, as node-index pairs.
    pub fn edges(&self) -> &[[u32; 2]] {
        &self.edges
    }

    /// Neighbours of a node index.
    pub fn neighbors(&self, node: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[node]
            .iter()
            .filter(|&&v| v != NONE)
            .map(|&v| v as usize)
    }

    pub fn degree(&self, node: usize) -> usize {
        self.neighbors(node).count()
    }

    pub fn is_leaf(&self, node: usize) -> bool {
        node < self.n
    }

    /// Verifies leaf/internal degrees, the edge count, and connectivity.
    pub fn check_invariants(&self) -> Result<()> {
        let n = self.n;
        if self.adj.len() != 2 * n - 2 || self.edges.len() != 2 * n - 3 {
            return Err(Error::Consistency(format!(
                "tree on {n} leaves has {} nodes and {} edges",
                self.adj.len(),
                self.edges.len()
            )));
        }
        for node in 0..self.adj.len() {
            let want = if self.is_leaf(node) { 1 } else { 3 };
            if self.degree(node) != want {
                return Err(Error::Consistency(format!(
                    "node {node} has degree {}",
                    self.degree(node)
                )));
            }
        }
        for &[u, v] in &self.edges {
            if !self.adj[u as usize].contains(&v) || !self.adj[v as usize].contains(&u) {
                return Err(Error::Consistency(format!(
                    "edge {u}-{v} missing from adjacency"
                )));
            }
        }
        // |E| = |V| - 1 plus connectivity means acyclic.
        let reached = self
            .bfs_depths(0)
            .iter()
            .filter(|d| **d != usize::MAX)
            .count();
        if reached != self.adj.len() {
            return Err(Error::Consistency("tree is not connected".into()));
        }
        Ok(())
    }

    fn bfs_depths(&self, start: usize) -> Vec<usize> {
        let mut depth = vec![usize::MAX; self.adj.len()];
        let mut queue = std::collections::VecDeque::from([start]);
        depth[start] = 0;
        while let Some(u) = queue.pop_front() {
            for v in self.neighbors(u) {
                if depth[v] == usize::MAX {
                    depth[v] = depth[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        depth
    }

    fn leaf_node(&self, label: usize) -> Result<usize> {
        if label < 1 || label > self.n {
            return Err(domain!("leaf label {label} not in 1..={}", self.n));
        }
        Ok(label - 1)
    }

    /// Number of edges on the path between leaves `k` and `l` (labels
    /// `1..=n`).
    pub fn leaf_distance(&self, k: usize, l: usize) -> Result<usize> {
        let from = self.leaf_node(k)?;
        let to = self.leaf_node(l)?;
        if from == to {
            return Err(domain!("leaf_distance needs two distinct leaves"));
        }
        // Walk out from `from`, remembering the parent to avoid stepping back.
        let mut stack = vec![(from, NONE as usize, 0usize)];
        while let Some((u, parent, d)) = stack.pop() {
            if u == to {
                return Ok(d);
            }
            for v in self.neighbors(u) {
                if v != parent {
                    stack.push((v, u, d + 1));
                }
            }
        }
        Err(Error::Consistency(format!(
            "leaves {k} and {l} are disconnected"
        )))
    }

    /// Canonical form: the sorted list of non-trivial splits, each given as
    /// the bitset of leaves on the side not containing leaf 1.
    ///
    /// Two trees on the same leaf set are equal iff their canonical forms
    /// are equal.
    pub fn canonical_form(&self) -> Vec<Vec<u64>> {
        let words = self.n.div_ceil(64);
        let order = self.preorder_from(0);
        let mut parent = vec![NONE as usize; self.adj.len()];
        for &(node, par) in &order {
            parent[node] = par;
        }
        let mut masks = vec![vec![0u64; words]; self.adj.len()];
        let mut splits = Vec::with_capacity(self.n.saturating_sub(3));
        for &(node, par) in order.iter().rev() {
            if self.is_leaf(node) {
                masks[node][node / 64] |= 1 << (node % 64);
            }
            if par != NONE as usize {
                let child = std::mem::take(&mut masks[node]);
                if !self.is_leaf(node) && !self.is_leaf(par) {
                    splits.push(child.clone());
                }
                for (dst, src) in masks[par].iter_mut().zip(&child) {
                    *dst |= src;
                }
            }
        }
        splits.sort_unstable();
        splits
    }

    /// `(node, parent)` pairs in depth-first preorder from `root`.
    fn preorder_from(&self, root: usize) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.adj.len());
        let mut stack = vec![(root, NONE as usize)];
        while let Some((u, p)) = stack.pop() {
            out.push((u, p));
            for v in self.neighbors(u) {
                if v != p {
                    stack.push((v, u));
                }
            }
        }
        out
    }

    /// Newick string with leaves labelled `1..=n`, no branch lengths, rooted
    /// for printing at the internal neighbour of leaf 1.
    pub fn to_newick(&self) -> String {
        newick::write(self)
    }
}

fn replace(slot: &mut [NodeId; 3], old: NodeId, new: NodeId) {
    let pos = slot
        .iter()
        .position(|&x| x == old)
        .expect("neighbour present");
    slot[pos] = new;
}

/// Decodes an insertion code into a tree on `n` leaves.
pub fn decode(n: usize, code: &InsertionCode) -> Result<PhyloTree> {
    if n < 3 {
        return Err(domain!("trees need at least 3 leaves, got {n}"));
    }
    if code.len() != n - 3 {
        return Err(domain!(
            "insertion code for n = {n} needs {} choices, got {}",
            n - 3,
            code.len()
        ));
    }
    let mut tree = PhyloTree::star(n);
    for (pos, &choice) in code.choices().iter().enumerate() {
        let leaf = pos + 4;
        let edges = 2 * leaf - 5;
        if choice < 1 || choice as usize > edges {
            return Err(domain!(
                "choice for leaf {leaf} must lie in [1, {edges}], got {choice}"
            ));
        }
        tree.insert_leaf(choice as usize - 1);
    }
    Ok(tree)
}
