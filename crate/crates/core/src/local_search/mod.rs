//! Tour improvement engines.
//!
//! [`rai_improve`] is the recursive arc insertion search: a segment-swapping
//! 3-exchange driven by candidate arcs `(i, j)`. [`lk_improve`] is a
//! Lin-Kernighan style search built from chained 2-opt steps (depth 2 is a
//! sequential 3-opt move) plus Or-opt segment moves. [`local_search`] runs
//! both, in that order.
//!
//! Both engines start from the cities whose don't-look bit is `false` and
//! leave every bit `true` when they return.

mod lk;
mod rai;

use rand::Rng;

pub use lk::{iterated_lk, lk_improve, lk_improve_with, LkOptions};
pub use rai::rai_improve;

use crate::reduction::DistanceMatrix;
use crate::tour::{NeighborLists, Tour};

/// The two deltas of one arc insertion candidate. The move is applied only
/// when `delta2 < delta1`, i.e. the tour gets strictly cheaper.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MoveDelta {
    pub delta1: i64,
    pub delta2: i64,
}

impl MoveDelta {
    /// Cost decrease obtained by applying the move.
    pub fn gain(&self) -> i64 {
        self.delta1 - self.delta2
    }

    pub fn is_improving(&self) -> bool {
        self.delta2 < self.delta1
    }
}

/// What one engine call did.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    /// Number of improving moves applied.
    pub moves: usize,
    /// Cities that were endpoints of changed edges (with repeats).
    pub touched: Vec<usize>,
}

/// RAI followed by the LK-style engine. The LK pass starts from the cities
/// that were critical on entry plus those RAI touched.
pub fn local_search<R: Rng + ?Sized>(
    t: &mut Tour,
    m: &DistanceMatrix,
    nl: &NeighborLists,
    lk: &LkOptions,
    rng: &mut R,
) -> SearchStats {
    let initial = t.critical_cities();
    let rai = rai_improve(t, m, nl, rng);
    for &c in initial.iter().chain(&rai.touched) {
        t.set_dont_look(c, false);
    }
    let lk_stats = lk_improve_with(t, m, nl, lk);
    t.set_all_dont_look(true);
    let mut touched = rai.touched;
    touched.extend(lk_stats.touched);
    SearchStats {
        moves: rai.moves + lk_stats.moves,
        touched,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate;
    use crate::reduction::{tc_reduce, TourCost};
    use crate::tour::{build_neighbor_lists, nearest_neighbor_tour};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn move_delta_sign() {
        let d = MoveDelta {
            delta1: 3,
            delta2: 1,
        };
        assert!(d.is_improving());
        assert_eq!(d.gain(), 2);
        assert!(!MoveDelta {
            delta1: 1,
            delta2: 1
        }
        .is_improving());
    }

    #[test]
    fn composition_is_idempotent_at_local_optimum() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let g = generate::random_connected(60, 0.05, &mut rng);
        let m = tc_reduce(&g).unwrap();
        let nl = build_neighbor_lists(&m, 5);
        let opts = LkOptions::for_size(60);
        let mut t = nearest_neighbor_tour(&m, &mut rng);
        local_search(&mut t, &m, &nl, &opts, &mut rng);
        let once = t.cost();
        t.set_all_dont_look(false);
        local_search(&mut t, &m, &nl, &opts, &mut rng);
        // all bits were cleared, so a second pass may only go lower
        assert!(t.cost() <= once);
        let settled = t.cost();
        local_search(&mut t, &m, &nl, &opts, &mut rng);
        assert_eq!(t.cost(), settled);
    }

    #[test]
    fn composition_no_worse_than_either_engine() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..20 {
            let g = generate::random_connected(40, 0.06, &mut rng);
            let m = tc_reduce(&g).unwrap();
            let nl = build_neighbor_lists(&m, 5);
            let opts = LkOptions::for_size(40);
            let start = nearest_neighbor_tour(&m, &mut rng);
            let mut both = start.clone();
            local_search(&mut both, &m, &nl, &opts, &mut ChaCha8Rng::seed_from_u64(1));
            let mut rai_only = start.clone();
            rai_improve(&mut rai_only, &m, &nl, &mut ChaCha8Rng::seed_from_u64(1));
            assert!(both.cost() <= rai_only.cost());
            assert!(both.cost() <= start.cost());
        }
    }

    #[test]
    fn restarts_reach_cost_n_on_planted_cubic_66() {
        // Empirical check: from nearest-neighbor starts, the composed search
        // reaches cost n within 100 restarts (seed 2024).
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let (g, _) = generate::planted_cubic(66, &mut rng);
        let m = tc_reduce(&g).unwrap();
        let nl = build_neighbor_lists(&m, 5);
        let opts = LkOptions::for_size(66);
        let hit = (0..100).position(|_| {
            let mut t = nearest_neighbor_tour(&m, &mut rng);
            local_search(&mut t, &m, &nl, &opts, &mut rng);
            t.cost() == TourCost(66)
        });
        assert!(hit.is_some());
    }
}
