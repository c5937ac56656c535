use num_bigint::BigUint;
use rayon::prelude::*;

use super::PhyloTree;
use crate::error::{domain, Error, Result};
use crate::exact::{BigCount, DistanceDistribution};

/// Default bound on `n` for exhaustive enumeration (2,027,025 trees at
/// n = 10).
pub const DEFAULT_MAX_ENUM_N: usize = 10;

/// Number of leading insertion choices fixed per parallel partition.
const PREFIX_LEAVES: usize = 3;

/// Exhaustive traversal of every tree on `n` leaves, guarded by `max_n`.
#[derive(Debug, Clone, Copy)]
pub struct Enumerator {
    pub max_n: usize,
}

impl Default for Enumerator {
    fn default() -> Self {
        Self {
            max_n: DEFAULT_MAX_ENUM_N,
        }
    }
}

impl Enumerator {
    pub fn new(max_n: usize) -> Self {
        Self { max_n }
    }

    fn check(&self, n: usize) -> Result<()> {
        if n < 3 {
            return Err(domain!("trees need at least 3 leaves, got {n}"));
        }
        if n > self.max_n {
            return Err(Error::EnumerationLimit {
                n,
                limit: self.max_n,
            });
        }
        Ok(())
    }

    /// Calls `visitor` once per tree and returns the number of trees.
    pub fn enumerate(&self, n: usize, mut visitor: impl FnMut(&PhyloTree)) -> Result<BigCount> {
        self.check(n)?;
        let mut tree = PhyloTree::star(n);
        let visited = walk(&mut tree, &mut visitor);
        Ok(BigUint::from(visited))
    }

    /// Parallel fold over all trees.
    ///
    /// The code space is split by its first few choices; each partition
    /// folds into its own accumulator from `identity`, and the partial
    /// results are combined with `reduce`.
    pub fn fold_parallel<T, I, F, R>(&self, n: usize, identity: I, fold: F, reduce: R) -> Result<T>
    where
        T: Send,
        I: Fn() -> T + Sync + Send,
        F: Fn(&mut T, &PhyloTree) + Sync + Send,
        R: Fn(T, T) -> T + Sync + Send,
    {
        self.check(n)?;
        let prefix_end = n.min(3 + PREFIX_LEAVES);
        let prefixes = prefixes(prefix_end);
        Ok(prefixes
            .into_par_iter()
            .map(|prefix| {
                let mut acc = identity();
                let mut tree = PhyloTree::star(n);
                for &e in &prefix {
                    tree.insert_leaf(e);
                }
                walk(&mut tree, &mut |t: &PhyloTree| fold(&mut acc, t));
                acc
            })
            .reduce(&identity, &reduce))
    }

    /// Exact distribution of `d(k, l)` over all trees on `n` leaves.
    pub fn pair_distribution(&self, n: usize, k: usize, l: usize) -> Result<DistanceDistribution> {
        if k == l || k < 1 || l < 1 || k > n || l > n {
            return Err(domain!(
                "need two distinct leaf labels in 1..={n}, got {k} and {l}"
            ));
        }
        let histogram = self.fold_parallel(
            n,
            || vec![0u64; n - 1],
            |h, tree| {
                let d = tree.leaf_distance(k, l).expect("labels checked");
                h[d - 1] += 1;
            },
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        )?;
        DistanceDistribution::from_counts(
            n as u64,
            histogram.into_iter().map(BigUint::from).collect(),
        )
    }

    /// Exact counts of `d(1, 2)` over the full enumeration.
    pub fn empirical_distribution(&self, n: usize) -> Result<DistanceDistribution> {
        self.pair_distribution(n, 1, 2)
    }
}

/// All 0-based choice prefixes for leaves `4..=last`.
fn prefixes(last: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for leaf in 4..=last {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..2 * leaf - 5).map(move |e| {
                    let mut p = p.clone();
                    p.push(e);
                    p
                })
            })
            .collect();
    }
    out
}

/// Depth-first completion of a partially built tree; returns trees visited.
fn walk(tree: &mut PhyloTree, visitor: &mut impl FnMut(&PhyloTree)) -> u64 {
    let leaves = tree.attached_leaves();
    if leaves == tree.n {
        visitor(tree);
        return 1;
    }
    let mut visited = 0;
    for edge in 0..tree.edges.len() {
        tree.insert_leaf(edge);
        visited += walk(tree, visitor);
        tree.remove_last_leaf(edge);
    }
    visited
}

/// [`Enumerator::enumerate`] with the default bound.
pub fn enumerate(n: usize, visitor: impl FnMut(&PhyloTree)) -> Result<BigCount> {
    Enumerator::default().enumerate(n, visitor)
}

/// [`Enumerator::empirical_distribution`] with the default bound.
pub fn empirical_distribution(n: usize) -> Result<DistanceDistribution> {
    Enumerator::default().empirical_distribution(n)
}
