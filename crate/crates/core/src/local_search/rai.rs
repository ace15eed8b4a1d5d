use std::collections::VecDeque;

use rand::seq::SliceRandom;
use rand::Rng;

use super::{MoveDelta, SearchStats};
use crate::reduction::DistanceMatrix;
use crate::tour::{NeighborLists, Tour};

/// Recursive arc insertion.
///
/// For a critical city `i` and each candidate `j` from its neighbor list,
/// inserting arc `(i, j)` frees `a = next(i)` and `b = prev(j)` at
/// `delta1 = d(i,a) + d(b,j) - d(i,j)`. Edges `(m, next m)` are then
/// scanned forward from `(j, next j)` up to `(prev i, i)`; the first with
/// `delta2 = d(m,a) + d(b,next m) - d(m,next m) < delta1` is exchanged in.
/// Edges inside `a ..= b` are never scanned: reconnecting there would
/// split the tour into two cycles.
pub fn rai_improve<R: Rng + ?Sized>(
    t: &mut Tour,
    m: &DistanceMatrix,
    nl: &NeighborLists,
    rng: &mut R,
) -> SearchStats {
    let n = t.n();
    let mut stats = SearchStats::default();
    if n < 4 {
        t.set_all_dont_look(true);
        return stats;
    }
    let mut critical = t.critical_cities();
    critical.shuffle(rng);
    let mut queued = vec![false; n];
    for &c in &critical {
        queued[c] = true;
    }
    let mut queue: VecDeque<usize> = critical.into();

    while let Some(i) = queue.pop_front() {
        queued[i] = false;
        match improve_from(t, m, nl, i) {
            Some(touched) => {
                stats.moves += 1;
                for c in touched {
                    t.set_dont_look(c, false);
                    stats.touched.push(c);
                    if !queued[c] {
                        queued[c] = true;
                        queue.push_back(c);
                    }
                }
            }
            None => t.set_dont_look(i, true),
        }
    }
    t.set_all_dont_look(true);
    stats
}

fn improve_from(t: &mut Tour, m: &DistanceMatrix, nl: &NeighborLists, i: usize) -> Option<[usize; 6]> {
    let d = |x: usize, y: usize| m.get(x, y) as i64;
    let a = t.next(i);
    let last = t.prev(i);
    for j in nl.of(i) {
        if j == a || j == i {
            continue;
        }
        let b = t.prev(j);
        let delta1 = d(i, a) + d(b, j) - d(i, j);
        let mut mm = j;
        loop {
            let nn = t.next(mm);
            let cand = MoveDelta {
                delta1,
                delta2: d(mm, a) + d(b, nn) - d(mm, nn),
            };
            if cand.is_improving() {
                let applied = t.arc_insertion_exchange(m, i, j, mm);
                debug_assert_eq!(applied, Some(-cand.gain()));
                return Some([i, a, b, j, mm, nn]);
            }
            if mm == last {
                break;
            }
            mm = nn;
        }
    }
    None
}
