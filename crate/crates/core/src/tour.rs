//! Array-backed tours, candidate neighbor lists and the nearest-neighbor
//! construction.
//!
//! A [`Tour`] keeps `order` (rank -> city) and `rank` (city -> rank) as
//! mutual inverses, a cached cost, and one don't-look bit per city. A bit
//! set to `false` marks the city as critical: local search starts there.

use std::fmt::Write as _;

use rand::Rng;
use rayon::prelude::*;

use crate::error::{MoveError, ParseError};
use crate::graph::CycleCandidate;
use crate::reduction::{tour_cost, DistanceMatrix, TourCost};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tour {
    order: Vec<usize>,
    rank: Vec<usize>,
    cost: TourCost,
    dlb: Vec<bool>,
}

/// A forward path `from ..= to` of the current tour, emitted either as is or
/// reversed when splicing a new order together.
#[derive(Clone, Copy, Debug)]
struct Segment {
    from: usize,
    to: usize,
    reversed: bool,
}

impl Tour {
    /// Wraps a permutation. Every city starts critical.
    pub fn from_order(order: Vec<usize>, m: &DistanceMatrix) -> Tour {
        let n = order.len();
        assert_eq!(n, m.n(), "dimension mismatch");
        let mut rank = vec![usize::MAX; n];
        for (i, &v) in order.iter().enumerate() {
            assert!(v < n && rank[v] == usize::MAX, "order is not a permutation");
            rank[v] = i;
        }
        let cost = tour_cost(m, &order);
        Tour {
            order,
            rank,
            cost,
            dlb: vec![false; n],
        }
    }

    pub fn n(&self) -> usize {
        self.order.len()
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn rank(&self, v: usize) -> usize {
        self.rank[v]
    }

    pub fn cost(&self) -> TourCost {
        self.cost
    }

    pub fn to_candidate(&self) -> CycleCandidate {
        CycleCandidate::new(self.order.clone()).expect("tour is a permutation")
    }

    #[inline]
    pub fn next(&self, v: usize) -> usize {
        let r = self.rank[v] + 1;
        self.order[if r == self.order.len() { 0 } else { r }]
    }

    #[inline]
    pub fn prev(&self, v: usize) -> usize {
        let r = self.rank[v];
        self.order[if r == 0 { self.order.len() - 1 } else { r - 1 }]
    }

    /// True iff `b` lies on the forward path from `a` to `c` (inclusive).
    #[inline]
    pub fn between(&self, a: usize, b: usize, c: usize) -> bool {
        let (ra, rb, rc) = (self.rank[a], self.rank[b], self.rank[c]);
        if ra <= rc {
            ra <= rb && rb <= rc
        } else {
            rb >= ra || rb <= rc
        }
    }

    /// Number of cities on the forward path `a ..= b`.
    #[inline]
    pub fn path_len(&self, a: usize, b: usize) -> usize {
        let n = self.n();
        (self.rank[b] + n - self.rank[a]) % n + 1
    }

    pub fn dont_look(&self, v: usize) -> bool {
        self.dlb[v]
    }

    pub fn set_dont_look(&mut self, v: usize, value: bool) {
        self.dlb[v] = value;
    }

    pub fn set_all_dont_look(&mut self, value: bool) {
        self.dlb.iter_mut().for_each(|b| *b = value);
    }

    /// Cities whose don't-look bit is `false`, in tour order.
    pub fn critical_cities(&self) -> Vec<usize> {
        self.order.iter().copied().filter(|&v| !self.dlb[v]).collect()
    }

    /// Re-evaluates the cached cost, e.g. after the working matrix changed.
    pub fn recompute_cost(&mut self, m: &DistanceMatrix) {
        self.cost = tour_cost(m, &self.order);
    }

    /// Checks the permutation and rank/order inverse invariants.
    pub fn is_valid(&self) -> bool {
        let n = self.n();
        self.rank.len() == n
            && self.dlb.len() == n
            && self
                .order
                .iter()
                .enumerate()
                .all(|(i, &v)| v < n && self.rank[v] == i)
    }

    #[inline]
    fn apply_delta(&mut self, delta: i64) {
        let cost = self.cost.0 as i64 + delta;
        debug_assert!(cost >= 0);
        self.cost = TourCost(cost as u64);
    }

    fn debug_check(&self, _m: &DistanceMatrix) {
        debug_assert!(self.is_valid(), "tour invariant broken");
        debug_assert_eq!(self.cost, tour_cost(_m, &self.order), "cached cost drifted");
    }

    /// Reverses the forward path `from ..= to`. Reverses the complementary
    /// path instead when that one is shorter; both give the same cycle.
    /// Returns the `(start rank, length)` actually reversed.
    pub(crate) fn reverse_path(&mut self, from: usize, to: usize) -> (usize, usize) {
        let n = self.n();
        let len = self.path_len(from, to);
        if 2 * len > n {
            if len == n {
                return (0, 0);
            }
            let start = self.rank[self.next(to)];
            self.reverse_ranks(start, n - len);
            (start, n - len)
        } else {
            let start = self.rank[from];
            self.reverse_ranks(start, len);
            (start, len)
        }
    }

    /// Reverses `len` consecutive ranks starting at `start` (cyclically).
    /// Applying it twice restores the tour.
    pub(crate) fn reverse_ranks(&mut self, start: usize, len: usize) {
        if len < 2 {
            return;
        }
        let n = self.n();
        let mut i = start;
        let mut j = (start + len - 1) % n;
        for _ in 0..len / 2 {
            self.order.swap(i, j);
            self.rank[self.order[i]] = i;
            self.rank[self.order[j]] = j;
            i = if i + 1 == n { 0 } else { i + 1 };
            j = if j == 0 { n - 1 } else { j - 1 };
        }
    }

    /// Rebuilds the order from a list of forward paths that together cover
    /// every city exactly once.
    fn splice(&mut self, segments: &[Segment]) {
        let n = self.n();
        let mut order = Vec::with_capacity(n);
        for seg in segments {
            let start = order.len();
            let mut v = seg.from;
            loop {
                order.push(v);
                if v == seg.to {
                    break;
                }
                v = self.next(v);
            }
            if seg.reversed {
                order[start..].reverse();
            }
        }
        debug_assert_eq!(order.len(), n);
        for (i, &v) in order.iter().enumerate() {
            self.rank[v] = i;
        }
        self.order = order;
    }

    /// Swaps the adjacent paths `B = next(x) ..= b_end` and
    /// `C = next(b_end) ..= c_end` (a double bridge). Both paths must be
    /// nonempty and leave at least one city outside them besides `x`.
    pub fn swap_segments(&mut self, m: &DistanceMatrix, x: usize, b_end: usize, c_end: usize) -> i64 {
        let (b0, c0, y0) = (self.next(x), self.next(b_end), self.next(c_end));
        debug_assert!(b_end != x && c_end != b_end && y0 != x && self.between(b0, b_end, c_end));
        let d = |p: usize, q: usize| m.get(p, q) as i64;
        let delta = d(x, c0) + d(c_end, b0) + d(b_end, y0) - d(x, b0) - d(b_end, c0) - d(c_end, y0);
        self.splice(&[
            Segment {
                from: y0,
                to: x,
                reversed: false,
            },
            Segment {
                from: c0,
                to: c_end,
                reversed: false,
            },
            Segment {
                from: b0,
                to: b_end,
                reversed: false,
            },
        ]);
        self.apply_delta(delta);
        self.debug_check(m);
        delta
    }

    /// 2-opt: removes `(a, next a)` and `(b, next b)`, adds `(a, b)` and
    /// `(next a, next b)`. Returns the cost delta.
    pub fn two_opt(&mut self, m: &DistanceMatrix, a: usize, b: usize) -> i64 {
        self.two_opt_recorded(m, a, b).0
    }

    /// [`Tour::two_opt`] that also returns the rank interval it reversed, so
    /// the move can be undone with [`Tour::undo_reversal`].
    pub(crate) fn two_opt_recorded(
        &mut self,
        m: &DistanceMatrix,
        a: usize,
        b: usize,
    ) -> (i64, (usize, usize)) {
        let (na, nb) = (self.next(a), self.next(b));
        debug_assert!(a != b && na != b);
        let delta = m.get(a, b) as i64 + m.get(na, nb) as i64
            - m.get(a, na) as i64
            - m.get(b, nb) as i64;
        let span = self.reverse_path(na, b);
        self.apply_delta(delta);
        self.debug_check(m);
        (delta, span)
    }

    pub(crate) fn undo_reversal(&mut self, m: &DistanceMatrix, span: (usize, usize), delta: i64) {
        self.reverse_ranks(span.0, span.1);
        self.apply_delta(-delta);
        self.debug_check(m);
    }

    /// Moves `city` so that it directly follows `after`. Removed edges are
    /// `(prev city, city)`, `(city, next city)` and `(after, next after)`.
    pub fn apply_insertion(
        &mut self,
        m: &DistanceMatrix,
        city: usize,
        after: usize,
    ) -> Result<i64, MoveError> {
        if city >= self.n() || after >= self.n() || city == after || city == self.next(after) {
            return Err(MoveError::InvalidInsertion { city, after });
        }
        let (p, q, an) = (self.prev(city), self.next(city), self.next(after));
        let d = |x: usize, y: usize| m.get(x, y) as i64;
        let delta = d(p, q) + d(after, city) + d(city, an) - d(p, city) - d(city, q) - d(after, an);
        let from = self.rank[city];
        self.order.remove(from);
        let to = self.order.iter().position(|&v| v == after).expect("after is in tour") + 1;
        self.order.insert(to, city);
        let (lo, hi) = if from < to { (from, to) } else { (to, from) };
        for i in lo..=hi.min(self.order.len() - 1) {
            self.rank[self.order[i]] = i;
        }
        self.apply_delta(delta);
        self.debug_check(m);
        Ok(delta)
    }

    /// Moves the forward path `first ..= last` between `after` and its
    /// successor, optionally reversed. `after` must lie outside the path and
    /// differ from `prev(first)`.
    pub fn move_segment(
        &mut self,
        m: &DistanceMatrix,
        first: usize,
        last: usize,
        after: usize,
        reversed: bool,
    ) -> i64 {
        let (p, q) = (self.prev(first), self.next(last));
        let an = self.next(after);
        debug_assert!(!self.between(first, after, last) && after != p);
        let d = |x: usize, y: usize| m.get(x, y) as i64;
        let (head, tail) = if reversed { (last, first) } else { (first, last) };
        let delta = d(p, q) + d(after, head) + d(tail, an) - d(p, first) - d(last, q) - d(after, an);
        // order: q ..= after, segment, an ..= p
        self.splice(&[
            Segment {
                from: q,
                to: after,
                reversed: false,
            },
            Segment {
                from: first,
                to: last,
                reversed,
            },
            Segment {
                from: an,
                to: p,
                reversed: false,
            },
        ]);
        self.apply_delta(delta);
        self.debug_check(m);
        delta
    }

    /// Segment-swapping 3-exchange: with `a = next(i)`, `b = prev(j)` and
    /// `mm` on the forward path `j ..= prev(i)`, removes `(i, a)`, `(b, j)`,
    /// `(mm, next mm)` and adds `(i, j)`, `(mm, a)`, `(b, next mm)`.
    /// Returns `None` (and leaves the tour untouched) when the reconnection
    /// would split the tour into two cycles.
    pub fn arc_insertion_exchange(
        &mut self,
        m: &DistanceMatrix,
        i: usize,
        j: usize,
        mm: usize,
    ) -> Option<i64> {
        if !self.is_valid_arc_insertion(i, j, mm) {
            return None;
        }
        let (a, b, nn) = (self.next(i), self.prev(j), self.next(mm));
        let d = |x: usize, y: usize| m.get(x, y) as i64;
        let delta = d(i, j) + d(mm, a) + d(b, nn) - d(i, a) - d(b, j) - d(mm, nn);
        // new order: nn ..= i, j ..= mm, a ..= b
        self.splice(&[
            Segment {
                from: nn,
                to: i,
                reversed: false,
            },
            Segment {
                from: j,
                to: mm,
                reversed: false,
            },
            Segment {
                from: a,
                to: b,
                reversed: false,
            },
        ]);
        self.apply_delta(delta);
        self.debug_check(m);
        Some(delta)
    }

    /// Rank arithmetic check for [`Tour::arc_insertion_exchange`]: `j` must
    /// not be `i` or `next(i)`, and `mm` must sit on `j ..= prev(i)`.
    pub fn is_valid_arc_insertion(&self, i: usize, j: usize, mm: usize) -> bool {
        if i == j || j == self.next(i) {
            return false;
        }
        let before_i = self.prev(i);
        self.between(j, mm, before_i)
    }
}

/// Per-city candidate lists of the `k` nearest other cities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NeighborLists {
    k: usize,
    lists: Vec<u32>,
}

impl NeighborLists {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn of(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.lists[v * self.k..(v + 1) * self.k]
            .iter()
            .map(|&x| x as usize)
    }

    /// Rebuilds the lists of `cities` after their matrix rows changed.
    pub fn refresh(&mut self, m: &DistanceMatrix, cities: &[usize]) {
        if self.k == 0 {
            return;
        }
        for &v in cities {
            fill_row(m, v, &mut self.lists[v * self.k..(v + 1) * self.k]);
        }
    }
}

/// Sorted by ascending matrix entry, ties by ascending id; each list holds
/// `min(k, n - 1)` cities.
pub fn build_neighbor_lists(m: &DistanceMatrix, k: usize) -> NeighborLists {
    assert!(k >= 1, "k must be positive");
    let n = m.n();
    let k = k.min(n.saturating_sub(1));
    if k == 0 {
        return NeighborLists { k, lists: Vec::new() };
    }
    let mut lists = vec![0u32; n * k];
    lists
        .par_chunks_mut(k)
        .enumerate()
        .for_each(|(v, out)| fill_row(m, v, out));
    NeighborLists { k, lists }
}

fn fill_row(m: &DistanceMatrix, v: usize, out: &mut [u32]) {
    let k = out.len();
    let mut cand: Vec<(u32, u32)> = (0..m.n())
        .filter(|&u| u != v)
        .map(|u| (m.get(v, u), u as u32))
        .collect();
    if cand.len() > k {
        cand.select_nth_unstable(k - 1);
        cand.truncate(k);
    }
    cand.sort_unstable();
    for (slot, (_, u)) in out.iter_mut().zip(cand) {
        *slot = u;
    }
}

/// Greedy nearest-neighbor tour from a uniformly random start; equal
/// distances are broken uniformly at random.
pub fn nearest_neighbor_tour<R: Rng + ?Sized>(m: &DistanceMatrix, rng: &mut R) -> Tour {
    let n = m.n();
    assert!(n >= 1);
    let start = rng.gen_range(0..n);
    let mut unvisited: Vec<usize> = (0..n).filter(|&v| v != start).collect();
    let mut order = Vec::with_capacity(n);
    order.push(start);
    let mut cur = start;
    while !unvisited.is_empty() {
        let mut best = u32::MAX;
        let mut best_idx = 0;
        let mut ties = 0u32;
        for (idx, &u) in unvisited.iter().enumerate() {
            let d = m.get(cur, u);
            if d < best {
                best = d;
                best_idx = idx;
                ties = 1;
            } else if d == best {
                ties += 1;
                if rng.gen_range(0..ties) == 0 {
                    best_idx = idx;
                }
            }
        }
        cur = unvisited.swap_remove(best_idx);
        order.push(cur);
    }
    Tour::from_order(order, m)
}

/// TSPLIB `TOUR_SECTION` rendering with 1-based ids.
pub fn write_tour(name: &str, order: &[usize]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "NAME : {name}");
    let _ = writeln!(out, "TYPE : TOUR");
    let _ = writeln!(out, "DIMENSION : {}", order.len());
    let _ = writeln!(out, "TOUR_SECTION");
    for &v in order {
        let _ = writeln!(out, "{}", v + 1);
    }
    out.push_str("-1\nEOF\n");
    out
}

/// Parses a TSPLIB tour file into a permutation of `0..n`.
pub fn parse_tour(text: &str) -> Result<CycleCandidate, ParseError> {
    let mut in_section = false;
    let mut dimension = None;
    let mut ids = Vec::new();
    'lines: for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if !in_section {
            let key = line.split(':').next().unwrap_or("").trim().to_ascii_uppercase();
            if key == "TOUR_SECTION" {
                in_section = true;
            } else if key == "DIMENSION" {
                let value = line.split_once(':').map(|x| x.1).unwrap_or("").trim();
                dimension = Some(value.parse::<usize>().map_err(|_| ParseError::Malformed {
                    line: idx + 1,
                    message: format!("bad DIMENSION value {value:?}"),
                })?);
            }
            continue;
        }
        for token in line.split_whitespace() {
            if token.eq_ignore_ascii_case("EOF") {
                break 'lines;
            }
            let v: i64 = token.parse().map_err(|_| ParseError::Malformed {
                line: idx + 1,
                message: format!("expected a city id, found {token:?}"),
            })?;
            if v == -1 {
                break 'lines;
            }
            if v < 1 {
                return Err(ParseError::Malformed {
                    line: idx + 1,
                    message: format!("city id {v} must be positive"),
                });
            }
            ids.push(v as usize - 1);
        }
    }
    let n = ids.len();
    if let Some(d) = dimension {
        if d != n {
            return Err(ParseError::NotAPermutation {
                n: d,
                message: format!("section lists {n} cities"),
            });
        }
    }
    CycleCandidate::new(ids).ok_or(ParseError::NotAPermutation {
        n,
        message: "repeated or out-of-range city".into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate;
    use crate::reduction::{sr_reduce, tc_reduce};
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_matrix(n: usize, rng: &mut ChaCha8Rng) -> DistanceMatrix {
        let mut rows = vec![vec![0u32; n]; n];
        for a in 0..n {
            for b in (a + 1)..n {
                let w = rng.gen_range(1..20);
                rows[a][b] = w;
                rows[b][a] = w;
            }
        }
        DistanceMatrix::from_rows(&rows)
    }

    #[test]
    fn next_prev_and_between() {
        let m = sr_reduce(&generate::cycle(5));
        let t = Tour::from_order(vec![2, 0, 4, 1, 3], &m);
        assert_eq!(t.next(3), 2);
        assert_eq!(t.prev(2), 3);
        assert!(t.between(4, 3, 0));
        assert!(!t.between(4, 0, 3));
        assert_eq!(t.path_len(1, 0), 4);
    }

    #[test]
    fn insertion_examples() {
        let m = sr_reduce(&generate::cycle(4));
        let mut t = Tour::from_order(vec![0, 1, 2, 3], &m);
        t.apply_insertion(&m, 3, 0).unwrap();
        assert_eq!(t.order(), &[0, 3, 1, 2]);
        assert!(t.is_valid());

        let mut u = Tour::from_order(vec![0, 1, 2, 3], &m);
        assert!(u.apply_insertion(&m, 2, 1).is_err());
        assert_eq!(u.order(), &[0, 1, 2, 3]);
        assert!(u.apply_insertion(&m, 2, 2).is_err());
    }

    #[test]
    fn insertion_delta_matches_recompute() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let m = random_matrix(30, &mut rng);
        let mut order: Vec<usize> = (0..30).collect();
        order.shuffle(&mut rng);
        let mut t = Tour::from_order(order, &m);
        for _ in 0..500 {
            let city = rng.gen_range(0..30);
            let after = rng.gen_range(0..30);
            let before = t.cost();
            match t.apply_insertion(&m, city, after) {
                Ok(delta) => assert_eq!(t.cost().0 as i64, before.0 as i64 + delta),
                Err(_) => assert_eq!(t.cost(), before),
            }
            assert_eq!(t.cost(), tour_cost(&m, t.order()));
            assert!(t.is_valid());
        }
    }

    #[test]
    fn arc_insertion_rejects_splitting_reconnections() {
        let m = sr_reduce(&generate::complete(8));
        let t = Tour::from_order((0..8).collect(), &m);
        // i = 0, a = 1, j = 4, b = 3: mm must lie on 4 ..= 7
        assert!(t.is_valid_arc_insertion(0, 4, 4));
        assert!(t.is_valid_arc_insertion(0, 4, 7));
        assert!(!t.is_valid_arc_insertion(0, 4, 2));
        assert!(!t.is_valid_arc_insertion(0, 1, 5));
        let mut u = t.clone();
        assert!(u.arc_insertion_exchange(&m, 0, 4, 2).is_none());
        assert_eq!(u, t);
        u.arc_insertion_exchange(&m, 0, 4, 5).unwrap();
        // nn ..= i, j ..= mm, a ..= b
        assert_eq!(u.order(), &[6, 7, 0, 4, 5, 1, 2, 3]);
    }

    #[test]
    fn nearest_neighbor_examples() {
        let m = tc_reduce(&generate::cycle(4)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            assert_eq!(nearest_neighbor_tour(&m, &mut rng).cost(), TourCost(4));
        }
        let a = nearest_neighbor_tour(&m, &mut ChaCha8Rng::seed_from_u64(5));
        let b = nearest_neighbor_tour(&m, &mut ChaCha8Rng::seed_from_u64(5));
        assert_eq!(a, b);
    }

    /// All tie resolutions of the greedy walk from `start`, enumerated
    /// exhaustively.
    fn all_nn_costs(m: &DistanceMatrix, start: usize) -> Vec<u64> {
        fn rec(m: &DistanceMatrix, order: &mut Vec<usize>, out: &mut Vec<u64>) {
            let n = m.n();
            if order.len() == n {
                out.push(tour_cost(m, order).0);
                return;
            }
            let cur = *order.last().unwrap();
            let rest: Vec<usize> = (0..n).filter(|v| !order.contains(v)).collect();
            let best = rest.iter().map(|&u| m.get(cur, u)).min().unwrap();
            for u in rest.into_iter().filter(|&u| m.get(cur, u) == best) {
                order.push(u);
                rec(m, order, out);
                order.pop();
            }
        }
        let mut out = Vec::new();
        rec(m, &mut vec![start], &mut out);
        out
    }

    #[test]
    fn nearest_neighbor_from_p4_middle() {
        let m = tc_reduce(&generate::path(4)).unwrap();
        let outcomes = all_nn_costs(&m, 1);
        assert!(outcomes.iter().all(|&c| c == 6), "{outcomes:?}");
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let t = nearest_neighbor_tour(&m, &mut rng);
            assert!(t.is_valid());
            if t.order()[0] == 1 {
                assert!(outcomes.contains(&t.cost().0));
            }
        }
    }

    #[test]
    fn neighbor_list_examples() {
        let k4 = sr_reduce(&generate::complete(4));
        let nl = build_neighbor_lists(&k4, 2);
        assert_eq!(nl.of(0).collect::<Vec<_>>(), vec![1, 2]);
        assert_eq!(nl.of(1).collect::<Vec<_>>(), vec![0, 2]);
        assert_eq!(nl.of(3).collect::<Vec<_>>(), vec![0, 1]);
        let p4 = tc_reduce(&generate::path(4)).unwrap();
        let nl = build_neighbor_lists(&p4, 3);
        assert_eq!(nl.of(0).collect::<Vec<_>>(), vec![1, 2, 3]);
        let nl = build_neighbor_lists(&p4, 10);
        assert_eq!(nl.k(), 3);
        assert_eq!(nl.of(2).collect::<Vec<_>>(), vec![1, 3, 0]);
    }

    #[test]
    fn tour_file_round_trip() {
        let text = write_tour("t", &[2, 0, 1]);
        assert_eq!(parse_tour(&text).unwrap().order(), &[2, 0, 1]);
        assert!(parse_tour("TOUR_SECTION\n1\n1\n-1\n").is_err());
        assert!(parse_tour("DIMENSION : 4\nTOUR_SECTION\n1\n2\n3\n-1\n").is_err());
    }
}
