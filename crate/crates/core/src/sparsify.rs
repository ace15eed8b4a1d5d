//! Dynamic sparsification of the transitive-closure matrix.
//!
//! The search runs on a working copy of the TC matrix in which most graph
//! edges are suppressed to `|V|`. Only the edges of one good tour start at
//! 1; whenever that tour needs a non-edge, the edges of a shortest graph
//! path between its endpoints are switched back to 1. Augmentation keeps
//! adding paths each generation, and once every graph edge is back at 1
//! the working copy is rebuilt from scratch.
//!
//! A 1-cell is always a real edge, so a working tour of cost `n` is a
//! Hamiltonian cycle of the original graph.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::graph::Graph;
use crate::local_search::{iterated_lk, LkOptions};
use crate::reduction::{DistanceMatrix, TourCost};
use crate::tour::{nearest_neighbor_tour, NeighborLists, Tour};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseState {
    working: DistanceMatrix,
    ones_count: usize,
    baseline_ones: usize,
    suppressed_value: u32,
}

/// What a sparsification step changed.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Changes {
    /// Endpoints of every rewritten cell, deduplicated.
    pub cities: Vec<usize>,
    /// Number of cells set to 1.
    pub restored: usize,
}

impl Changes {
    fn touch(&mut self, seen: &mut [bool], v: usize) {
        if !seen[v] {
            seen[v] = true;
            self.cities.push(v);
        }
    }
}

impl SparseState {
    pub fn working(&self) -> &DistanceMatrix {
        &self.working
    }

    pub fn ones_count(&self) -> usize {
        self.ones_count
    }

    /// Number of edges of the original graph.
    pub fn baseline_ones(&self) -> usize {
        self.baseline_ones
    }

    /// Value written over suppressed edges: the vertex count.
    pub fn suppressed_value(&self) -> u32 {
        self.suppressed_value
    }

    /// True iff every 1-cell of the working matrix is an edge of `g`.
    pub fn is_sound(&self, g: &Graph) -> bool {
        let n = self.working.n();
        (0..n).all(|a| ((a + 1)..n).all(|b| self.working.get(a, b) != 1 || g.has_edge(a, b)))
    }

    /// Sets every edge of a shortest `g`-path between `a` and `b` to 1.
    fn restore_path(&mut self, g: &Graph, a: usize, b: usize, changes: &mut Changes, seen: &mut [bool]) {
        let path = g
            .shortest_path(a, b)
            .expect("tour cities are graph vertices")
            .expect("graph is connected");
        for w in path.windows(2) {
            if self.working.get(w[0], w[1]) != 1 {
                self.working.set(w[0], w[1], 1);
                self.ones_count += 1;
                changes.restored += 1;
                changes.touch(seen, w[0]);
                changes.touch(seen, w[1]);
            }
        }
    }

    /// Bridges every edge of `t` costing more than 1.
    fn restore_conflicts(&mut self, g: &Graph, t: &Tour, changes: &mut Changes, seen: &mut [bool]) {
        let expensive: Vec<(usize, usize)> = tour_edges(t)
            .filter(|&(a, b)| self.working.get(a, b) > 1)
            .collect();
        for (a, b) in expensive {
            self.restore_path(g, a, b, changes, seen);
        }
    }

    fn suppress(&mut self, a: usize, b: usize) {
        if self.working.get(a, b) == 1 {
            self.ones_count -= 1;
        }
        self.working.set(a, b, self.suppressed_value);
    }
}

/// Improves a copy of `leader` on `m` with iterated LK, starting from
/// every city.
fn lk_tour<R: Rng + ?Sized>(leader: &Tour, m: &DistanceMatrix, nl: &NeighborLists, lk: &LkOptions, rng: &mut R) -> Tour {
    let mut t = leader.clone();
    t.recompute_cost(m);
    t.set_all_dont_look(false);
    iterated_lk(&mut t, m, nl, lk, rng);
    t
}

/// Builds the sparse working matrix around a tour `T` obtained by running
/// the LK engine on `leader` against `base`.
///
/// Every 1-cell of `base` not on `T` is suppressed to `|V|`. Then the
/// conflicting edges of `T` (tour edges that are not graph edges) are
/// resolved one at a time in random order: the edges of a shortest graph
/// path between the endpoints are set to 1 and the pair itself is
/// suppressed. Returns the state and `T`.
pub fn initial_sparsification<R: Rng + ?Sized>(
    g: &Graph,
    base: &DistanceMatrix,
    leader: &Tour,
    nl: &NeighborLists,
    lk: &LkOptions,
    rng: &mut R,
) -> (SparseState, Tour) {
    let n = g.n();
    let t = lk_tour(leader, base, nl, lk, rng);
    let mut state = SparseState {
        working: base.clone(),
        ones_count: g.edge_count(),
        baseline_ones: g.edge_count(),
        suppressed_value: n as u32,
    };
    for (a, b) in g.edges() {
        let on_tour = t.next(a) == b || t.prev(a) == b;
        if !on_tour {
            state.suppress(a, b);
        }
    }
    let mut conflicts: Vec<(usize, usize)> = tour_edges(&t)
        .filter(|&(a, b)| !g.has_edge(a, b))
        .collect();
    conflicts.shuffle(rng);
    let mut changes = Changes::default();
    let mut seen = vec![false; n];
    for (a, b) in conflicts {
        state.restore_path(g, a, b, &mut changes, &mut seen);
        state.suppress(a, b);
    }
    (state, t)
}

/// Runs the LK engine on `leader` against the working matrix, producing
/// `T''`, and for each edge of `T''` costing more than 1 sets the edges of
/// a shortest graph path between its endpoints to 1. When that changes
/// nothing, the same is done for an LK tour grown from a fresh
/// nearest-neighbor start, so the matrix keeps filling up. Cells are only
/// ever set to 1 here.
pub fn augment<R: Rng + ?Sized>(
    state: &mut SparseState,
    g: &Graph,
    leader: &Tour,
    nl: &NeighborLists,
    lk: &LkOptions,
    rng: &mut R,
) -> (Tour, Changes) {
    let t = lk_tour(leader, &state.working, nl, lk, rng);
    let mut changes = Changes::default();
    let mut seen = vec![false; g.n()];
    state.restore_conflicts(g, &t, &mut changes, &mut seen);
    if changes.restored == 0 && t.cost() > TourCost(g.n() as u64) {
        // the leader's conflicts are already bridged; look elsewhere
        let fresh = lk_tour(&nearest_neighbor_tour(&state.working, rng), &state.working, nl, lk, rng);
        state.restore_conflicts(g, &fresh, &mut changes, &mut seen);
    }
    (t, changes)
}

/// Rebuilds the state from `base` once every graph edge is back at 1, so
/// the search never runs on a fully restored matrix. Returns the new `T`
/// when a reset happened.
pub fn maybe_reset<R: Rng + ?Sized>(
    state: &mut SparseState,
    g: &Graph,
    base: &DistanceMatrix,
    leader: &Tour,
    nl: &NeighborLists,
    lk: &LkOptions,
    rng: &mut R,
) -> Option<Tour> {
    if state.ones_count < state.baseline_ones {
        return None;
    }
    let (fresh, t) = initial_sparsification(g, base, leader, nl, lk, rng);
    *state = fresh;
    Some(t)
}

fn tour_edges(t: &Tour) -> impl Iterator<Item = (usize, usize)> + '_ {
    t.order().iter().map(move |&a| (a, t.next(a)))
}
