//! Tree decompositions and the Hamiltonicity dynamic program over them.
//!
//! [`min_fill_decomposition`] builds a decomposition from a greedy min-fill
//! elimination ordering, [`NiceDecomposition`] rewrites it into leaf /
//! introduce / introduce-edge / forget / join nodes, and [`dp_hamiltonian`]
//! runs the bottom-up path-system dynamic program on it.

mod dp;
mod nice;

use std::collections::BTreeSet;
use std::fmt::Write as _;

use thiserror::Error;

use crate::graph::Graph;

pub use dp::{dp_hamiltonian, DpOutcome, MAX_DP_WIDTH};
pub use nice::{NiceDecomposition, NiceNode};

/// Decomposition abandoned because its width would exceed the cap.
#[derive(Clone, Copy, Debug, Error, PartialEq, Eq)]
#[error("decomposition width exceeds cap {cap} (reached at least {reached})")]
pub struct WidthExceeded {
    pub cap: usize,
    pub reached: usize,
}

/// Why a decomposition is not valid for a graph.
#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum TdViolation {
    #[error("bag structure is not a tree")]
    NotATree,
    #[error("vertex {0} is in no bag")]
    VertexUncovered(usize),
    #[error("edge ({0}, {1}) is in no bag")]
    EdgeUncovered(usize, usize),
    #[error("bags holding vertex {0} are not connected")]
    Incoherent(usize),
    #[error("stated width {stated} differs from actual {actual}")]
    WrongWidth { stated: usize, actual: usize },
}

/// Bags over vertex ids linked by parent pointers. Exactly one bag (the
/// root) has no parent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeDecomposition {
    bags: Vec<Vec<usize>>,
    parent: Vec<Option<usize>>,
    width: usize,
}

impl TreeDecomposition {
    /// Wraps explicit bags and parent links. Bags are sorted; the width is
    /// derived from the largest bag.
    pub fn new(mut bags: Vec<Vec<usize>>, parent: Vec<Option<usize>>) -> Self {
        assert_eq!(bags.len(), parent.len());
        for b in &mut bags {
            b.sort_unstable();
            b.dedup();
        }
        let width = bags.iter().map(Vec::len).max().unwrap_or(1).saturating_sub(1);
        TreeDecomposition { bags, parent, width }
    }

    pub fn bags(&self) -> &[Vec<usize>] {
        &self.bags
    }

    pub fn parent(&self, bag: usize) -> Option<usize> {
        self.parent[bag]
    }

    pub fn root(&self) -> usize {
        self.parent
            .iter()
            .position(Option::is_none)
            .expect("decomposition has a root")
    }

    /// `(child, parent)` pairs.
    pub fn tree_edges(&self) -> Vec<(usize, usize)> {
        self.parent
            .iter()
            .enumerate()
            .filter_map(|(c, p)| p.map(|p| (c, p)))
            .collect()
    }

    /// Largest bag size minus one.
    pub fn width(&self) -> usize {
        self.width
    }

    /// Checks the tree shape, vertex and edge coverage, coherence, and the
    /// stored width.
    pub fn validate(&self, g: &Graph) -> Result<(), TdViolation> {
        let k = self.bags.len();
        if k == 0 || self.parent.iter().filter(|p| p.is_none()).count() != 1 {
            return Err(TdViolation::NotATree);
        }
        // every bag must reach the root in fewer than k steps
        for start in 0..k {
            let mut cur = start;
            let mut steps = 0;
            while let Some(p) = self.parent[cur] {
                if p >= k || steps > k {
                    return Err(TdViolation::NotATree);
                }
                cur = p;
                steps += 1;
            }
        }
        let n = g.n();
        let mut holders = vec![Vec::new(); n];
        for (b, bag) in self.bags.iter().enumerate() {
            for &v in bag {
                if v >= n {
                    return Err(TdViolation::VertexUncovered(v));
                }
                holders[v].push(b);
            }
        }
        if let Some(v) = holders.iter().position(Vec::is_empty) {
            return Err(TdViolation::VertexUncovered(v));
        }
        for (u, v) in g.edges() {
            let covered = holders[u].iter().any(|&b| self.bags[b].binary_search(&v).is_ok());
            if !covered {
                return Err(TdViolation::EdgeUncovered(u, v));
            }
        }
        // the bags holding v form a subtree iff exactly one of them has a
        // parent that does not hold v
        for (v, hs) in holders.iter().enumerate() {
            let tops = hs
                .iter()
                .filter(|&&b| match self.parent[b] {
                    Some(p) => self.bags[p].binary_search(&v).is_err(),
                    None => true,
                })
                .count();
            if tops != 1 {
                return Err(TdViolation::Incoherent(v));
            }
        }
        let actual = self.bags.iter().map(Vec::len).max().unwrap_or(1) - 1;
        if actual != self.width {
            return Err(TdViolation::WrongWidth {
                stated: self.width,
                actual,
            });
        }
        Ok(())
    }

    /// PACE `.td` text: a `s td` header, one `b` line per bag and one line
    /// per tree edge, all 1-based.
    pub fn to_pace(&self, n: usize) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "s td {} {} {}", self.bags.len(), self.width + 1, n);
        for (i, bag) in self.bags.iter().enumerate() {
            let _ = write!(out, "b {}", i + 1);
            for v in bag {
                let _ = write!(out, " {}", v + 1);
            }
            out.push('\n');
        }
        for (c, p) in self.tree_edges() {
            let _ = writeln!(out, "{} {}", p + 1, c + 1);
        }
        out
    }
}

/// Greedy min-fill elimination: repeatedly eliminate the vertex whose
/// neighborhood needs the fewest fill edges to become a clique (lowest id
/// on ties). Vertex `v`'s bag is `v` plus its neighbors at elimination
/// time, and its parent is the bag of the earliest eliminated of those
/// neighbors. Stops as soon as a bag would exceed `width_cap + 1`.
pub fn min_fill_decomposition(g: &Graph, width_cap: usize) -> Result<TreeDecomposition, WidthExceeded> {
    let n = g.n();
    if g.min_degree() > width_cap {
        return Err(WidthExceeded {
            cap: width_cap,
            reached: g.min_degree(),
        });
    }
    let mut adj: Vec<BTreeSet<usize>> = (0..n).map(|v| g.neighbors(v).iter().copied().collect()).collect();
    // vertices of degree above the cap can never be eliminated within it
    let fill_of = |adj: &[BTreeSet<usize>], v: usize| -> usize {
        if adj[v].len() > width_cap {
            return usize::MAX;
        }
        let nb: Vec<usize> = adj[v].iter().copied().collect();
        let mut missing = 0;
        for (i, &a) in nb.iter().enumerate() {
            for &b in &nb[i + 1..] {
                if !adj[a].contains(&b) {
                    missing += 1;
                }
            }
        }
        missing
    };
    let mut fill: Vec<usize> = (0..n).map(|v| fill_of(&adj, v)).collect();
    let mut queue: BTreeSet<(usize, usize)> = (0..n).map(|v| (fill[v], v)).collect();
    let mut eliminated = vec![false; n];
    let mut position = vec![usize::MAX; n];
    let mut bags: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut higher: Vec<Vec<usize>> = vec![Vec::new(); n];

    for step in 0..n {
        let (f, v) = queue.pop_first().expect("vertices remain");
        if f == usize::MAX {
            return Err(WidthExceeded {
                cap: width_cap,
                reached: adj[v].len(),
            });
        }
        eliminated[v] = true;
        position[v] = step;
        let nb: Vec<usize> = adj[v].iter().copied().collect();
        let mut bag = nb.clone();
        bag.push(v);
        bags[v] = bag;
        higher[v] = nb.clone();
        for (i, &a) in nb.iter().enumerate() {
            adj[a].remove(&v);
            for &b in &nb[i + 1..] {
                if adj[a].insert(b) {
                    adj[b].insert(a);
                }
            }
        }
        let mut affected: BTreeSet<usize> = nb.iter().copied().collect();
        for &a in &nb {
            affected.extend(adj[a].iter().copied());
        }
        for u in affected {
            if eliminated[u] {
                continue;
            }
            let nf = fill_of(&adj, u);
            if nf != fill[u] {
                queue.remove(&(fill[u], u));
                fill[u] = nf;
                queue.insert((nf, u));
            }
        }
    }

    let mut parent: Vec<Option<usize>> = (0..n)
        .map(|v| higher[v].iter().copied().min_by_key(|&u| position[u]))
        .collect();
    // disconnected inputs give a forest; hang every extra root under the last
    let last = (0..n).max_by_key(|&v| position[v]).expect("n >= 1");
    for v in 0..n {
        if v != last && parent[v].is_none() {
            parent[v] = Some(last);
        }
    }
    Ok(TreeDecomposition::new(bags, parent))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn width(g: &Graph) -> usize {
        let td = min_fill_decomposition(g, 64).unwrap();
        td.validate(g).unwrap();
        td.width()
    }

    #[test]
    fn known_widths() {
        assert_eq!(width(&generate::path(7)), 1);
        let star = Graph::from_edges(6, (1..6).map(|v| (0, v))).unwrap();
        assert_eq!(width(&star), 1);
        for n in 3..12 {
            assert_eq!(width(&generate::cycle(n)), 2, "C{n}");
        }
        assert_eq!(width(&generate::complete(5)), 4);
        assert_eq!(width(&generate::petersen()), 4);
    }

    #[test]
    fn cap_is_enforced() {
        assert_eq!(
            min_fill_decomposition(&generate::complete(6), 3),
            Err(WidthExceeded { cap: 3, reached: 5 })
        );
        assert!(min_fill_decomposition(&generate::petersen(), 3).is_err());
        assert!(min_fill_decomposition(&generate::cycle(50), 2).is_ok());
    }

    #[test]
    fn random_graphs_give_valid_decompositions() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for n in [1usize, 2, 5, 12, 30, 60] {
            for _ in 0..10 {
                let g = generate::random_connected(n, 0.1, &mut rng);
                let td = min_fill_decomposition(&g, 64).unwrap();
                assert_eq!(td.validate(&g), Ok(()));
            }
        }
        let two = generate::disjoint_union(&generate::cycle(4), &generate::path(3));
        let td = min_fill_decomposition(&two, 8).unwrap();
        assert_eq!(td.validate(&two), Ok(()));
    }

    #[test]
    fn validation_catches_breakage() {
        let g = generate::cycle(4);
        let td = TreeDecomposition::new(vec![vec![0, 1, 2], vec![0, 2, 3]], vec![None, Some(0)]);
        assert_eq!(td.validate(&g), Ok(()));
        let missing_edge = TreeDecomposition::new(vec![vec![0, 1, 2], vec![1, 3]], vec![None, Some(0)]);
        assert!(missing_edge.validate(&g).is_err());
        let incoherent = TreeDecomposition::new(
            vec![vec![0, 1, 3], vec![1, 2], vec![2, 3, 0]],
            vec![None, Some(0), Some(1)],
        );
        assert_eq!(incoherent.validate(&g), Err(TdViolation::Incoherent(0)));
    }

    #[test]
    fn pace_output() {
        let g = generate::cycle(4);
        let td = min_fill_decomposition(&g, 8).unwrap();
        let text = td.to_pace(4);
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("s td 4 3 4"));
        assert_eq!(text.lines().filter(|l| l.starts_with("b ")).count(), 4);
        assert_eq!(text.lines().count(), 1 + 4 + 3);
    }
}
