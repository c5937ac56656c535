//! Newick output (and a small reader for the same dialect): integer leaf
//! labels, no branch lengths, no internal labels.

use super::{NodeId, PhyloTree, NONE};
use crate::error::{domain, Result};

pub(super) fn write(tree: &PhyloTree) -> String {
    let root = tree.adj[0][0] as usize;
    let order = tree.preorder_from(root);
    let mut parent = vec![NONE as usize; tree.node_count()];
    let mut min_label = vec![usize::MAX; tree.node_count()];
    for &(node, par) in &order {
        parent[node] = par;
    }
    for &(node, par) in order.iter().rev() {
        if tree.is_leaf(node) {
            min_label[node] = node + 1;
        }
        if par != NONE as usize {
            min_label[par] = min_label[par].min(min_label[node]);
        }
    }

    enum Step {
        Node(usize),
        Text(&'static str),
    }
    let mut out = String::new();
    let mut stack = vec![Step::Text(";"), Step::Node(root)];
    while let Some(step) = stack.pop() {
        match step {
            Step::Text(s) => out.push_str(s),
            Step::Node(u) if tree.is_leaf(u) => out.push_str(&(u + 1).to_string()),
            Step::Node(u) => {
                let mut children: Vec<usize> =
                    tree.neighbors(u).filter(|&v| v != parent[u]).collect();
                children.sort_by_key(|&v| min_label[v]);
                stack.push(Step::Text(")"));
                for (j, &c) in children.iter().enumerate().rev() {
                    stack.push(Step::Node(c));
                    if j > 0 {
                        stack.push(Step::Text(","));
                    }
                }
                stack.push(Step::Text("("));
            }
        }
    }
    out
}

enum Parsed {
    Leaf(usize),
    Internal(Vec<usize>),
}

/// Reads a tree written by [`PhyloTree::to_newick`] or any equivalent
/// Newick string: leaves labelled exactly `1..=n`, a root of degree 3 (or 2,
/// which is suppressed), and binary internal nodes.
pub fn parse_newick(text: &str) -> Result<PhyloTree> {
    let mut arena: Vec<Parsed> = Vec::new();
    let mut open: Vec<Vec<usize>> = Vec::new();
    let mut root = None;
    let mut chars = text.trim().chars().peekable();
    while let Some(ch) = chars.next() {
        match ch {
            '(' => open.push(Vec::new()),
            ',' => {}
            ')' => {
                let children = open.pop().ok_or_else(|| domain!("unbalanced ')'"))?;
                arena.push(Parsed::Internal(children));
                let id = arena.len() - 1;
                match open.last_mut() {
                    Some(parent) => parent.push(id),
                    None => root = Some(id),
                }
            }
            ';' => break,
            c if c.is_ascii_digit() => {
                let mut label = c.to_digit(10).unwrap() as usize;
                while let Some(d) = chars.peek().and_then(|c| c.to_digit(10)) {
                    label = label * 10 + d as usize;
                    chars.next();
                }
                arena.push(Parsed::Leaf(label));
                let id = arena.len() - 1;
                open.last_mut()
                    .ok_or_else(|| domain!("leaf outside parentheses"))?
                    .push(id);
            }
            c if c.is_whitespace() => {}
            c => return Err(domain!("unexpected character {c:?} in Newick input")),
        }
    }
    if !open.is_empty() {
        return Err(domain!("unbalanced '('"));
    }
    let root = root.ok_or_else(|| domain!("empty Newick input"))?;

    let mut labels: Vec<usize> = arena
        .iter()
        .filter_map(|p| match p {
            Parsed::Leaf(l) => Some(*l),
            _ => None,
        })
        .collect();
    let n = labels.len();
    labels.sort_unstable();
    if n < 3 || labels.iter().enumerate().any(|(j, &l)| l != j + 1) {
        return Err(domain!("leaf labels must be exactly 1..=n with n >= 3"));
    }

    // Map arena nodes to tree nodes; a degree-2 root is bypassed.
    let mut edges: Vec<[usize; 2]> = Vec::new();
    let mut tree_id = vec![usize::MAX; arena.len()];
    let mut next_internal = n;
    for (id, p) in arena.iter().enumerate() {
        match p {
            Parsed::Leaf(l) => tree_id[id] = l - 1,
            Parsed::Internal(children) => {
                let is_root = id == root;
                let ok = if is_root {
                    children.len() == 3 || children.len() == 2
                } else {
                    children.len() == 2
                };
                if !ok {
                    return Err(domain!("tree is not fully resolved"));
                }
                if !(is_root && children.len() == 2) {
                    tree_id[id] = next_internal;
                    next_internal += 1;
                }
            }
        }
    }
    for (id, p) in arena.iter().enumerate() {
        if let Parsed::Internal(children) = p {
            if tree_id[id] == usize::MAX {
                edges.push([tree_id[children[0]], tree_id[children[1]]]);
            } else {
                for &c in children {
                    edges.push([tree_id[id], tree_id[c]]);
                }
            }
        }
    }
    if next_internal != 2 * n - 2 || edges.len() != 2 * n - 3 {
        return Err(domain!("tree is not fully resolved"));
    }

    let mut adj = vec![[NONE; 3]; 2 * n - 2];
    for &[u, v] in &edges {
        for (a, b) in [(u, v), (v, u)] {
            let slot = adj[a]
                .iter_mut()
                .find(|x| **x == NONE)
                .ok_or_else(|| domain!("node degree exceeds 3"))?;
            *slot = b as NodeId;
        }
    }
    let tree = PhyloTree {
        n,
        adj,
        edges: edges
            .iter()
            .map(|&[u, v]| [u as NodeId, v as NodeId])
            .collect(),
    };
    tree.check_invariants()
        .map_err(|e| domain!("invalid tree in Newick input: {e}"))?;
    Ok(tree)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::{decode, sample_uniform, InsertionCode};

    #[test]
    fn small_trees() {
        let t = decode(3, &InsertionCode::empty()).unwrap();
        assert_eq!(t.to_newick(), "(1,2,3);");
        let t = decode(4, &InsertionCode::new(vec![3]).unwrap()).unwrap();
        assert_eq!(t.to_newick(), "(1,2,(3,4));");
        let t = decode(4, &InsertionCode::new(vec![1]).unwrap()).unwrap();
        assert_eq!(t.to_newick(), "(1,(2,3),4);");
    }

    #[test]
    fn round_trip() {
        for seed in 0..50 {
            let t = sample_uniform(3 + seed as usize, seed).unwrap();
            let back = parse_newick(&t.to_newick()).unwrap();
            assert_eq!(back.canonical_form(), t.canonical_form());
            assert_eq!(back.to_newick(), t.to_newick());
        }
    }

    #[test]
    fn rooted_input_is_unrooted() {
        let t = parse_newick("((1,2),(3,4));").unwrap();
        assert_eq!(t.leaf_distance(1, 2).unwrap(), 2);
        assert_eq!(t.leaf_distance(1, 3).unwrap(), 3);
        assert_eq!(t.to_newick(), "(1,2,(3,4));");
    }

    #[test]
    fn rejects_malformed() {
        for bad in [
            "",
            "(1,2",
            "(1,2,3));",
            "(1,2,3,4);",
            "(1,2,2);",
            "(1,(2,3,4),5);",
            "(a,b,c);",
            "(1,2,4);",
        ] {
            assert!(parse_newick(bad).is_err(), "{bad}");
        }
    }
}
