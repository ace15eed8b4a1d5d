use std::collections::VecDeque;

use rand::Rng;

use super::SearchStats;
use crate::reduction::DistanceMatrix;
use crate::tour::{NeighborLists, Tour};

/// Knobs of the LK-style engine.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LkOptions {
    /// Maximum number of improving moves applied per call.
    pub budget: usize,
    /// Maximum number of chained 2-opt steps in one move.
    pub max_depth: usize,
    /// Candidates tried at each chain level; the last entry repeats.
    pub breadth: Vec<usize>,
    pub or_opt: bool,
    /// Kicked restarts performed by [`iterated_lk`].
    pub trials: usize,
}

impl LkOptions {
    /// Defaults for an `n`-city tour: a budget of `50 n` moves.
    pub fn for_size(n: usize) -> Self {
        LkOptions {
            budget: 50 * n.max(1),
            max_depth: 50,
            breadth: vec![5, 3, 1],
            or_opt: true,
            trials: 100,
        }
    }

    fn breadth_at(&self, level: usize) -> usize {
        self.breadth
            .get(level)
            .or(self.breadth.last())
            .copied()
            .unwrap_or(1)
    }
}

/// LK-style improvement with the default options and the given move budget.
pub fn lk_improve(t: &mut Tour, m: &DistanceMatrix, nl: &NeighborLists, budget: usize) -> SearchStats {
    let opts = LkOptions {
        budget,
        ..LkOptions::for_size(t.n())
    };
    lk_improve_with(t, m, nl, &opts)
}

/// Processes critical cities first-improvement style. Each city tries an
/// LK chain of 2-opt steps in both tour directions, then Or-opt moves of
/// segments of 1 to 3 cities. When the queue drains a full 2-opt sweep
/// over every city runs; anything it finds reopens the queue, so with
/// budget left the result is 2-opt optimal over the candidate lists.
pub fn lk_improve_with(
    t: &mut Tour,
    m: &DistanceMatrix,
    nl: &NeighborLists,
    opts: &LkOptions,
) -> SearchStats {
    let n = t.n();
    let mut stats = SearchStats::default();
    if n < 5 || nl.k() == 0 {
        if n == 4 {
            // only one improving 2-opt neighborhood exists; the sweep covers it
            while stats.moves < opts.budget {
                match two_opt_sweep(t, m, nl) {
                    Some(touched) => {
                        stats.moves += 1;
                        stats.touched.extend(touched);
                    }
                    None => break,
                }
            }
        }
        t.set_all_dont_look(true);
        return stats;
    }

    let mut queued = vec![false; n];
    let mut queue = VecDeque::new();
    for c in t.critical_cities() {
        queued[c] = true;
        queue.push_back(c);
    }

    let mut chain = Chain {
        m,
        nl,
        opts,
        t1: 0,
        added: Vec::new(),
        removed: Vec::new(),
    };

    'outer: loop {
        while let Some(t1) = queue.pop_front() {
            queued[t1] = false;
            if stats.moves >= opts.budget {
                break 'outer;
            }
            let found = chain
                .improve_from(t, t1)
                .or_else(|| if opts.or_opt { or_opt_from(t, m, nl, t1) } else { None });
            match found {
                Some(touched) => {
                    stats.moves += 1;
                    for c in touched.into_iter().chain([t1]) {
                        stats.touched.push(c);
                        if !queued[c] {
                            queued[c] = true;
                            queue.push_back(c);
                        }
                    }
                }
                None => t.set_dont_look(t1, true),
            }
        }
        if stats.moves >= opts.budget {
            break;
        }
        match two_opt_sweep(t, m, nl) {
            Some(touched) => {
                stats.moves += 1;
                for c in touched {
                    stats.touched.push(c);
                    if !queued[c] {
                        queued[c] = true;
                        queue.push_back(c);
                    }
                }
            }
            None => break,
        }
    }
    t.set_all_dont_look(true);
    stats
}

/// LK descent followed by `opts.trials` kicked restarts. Each restart
/// swaps two short adjacent tour segments at a random place, runs LK from
/// the six cities whose edges changed, and keeps the result when it is not
/// worse than the incumbent.
pub fn iterated_lk<R: Rng + ?Sized>(
    t: &mut Tour,
    m: &DistanceMatrix,
    nl: &NeighborLists,
    opts: &LkOptions,
    rng: &mut R,
) -> SearchStats {
    let mut stats = lk_improve_with(t, m, nl, opts);
    let n = t.n();
    if n < 8 {
        return stats;
    }
    let max_len = ((n - 2) / 3).min(50);
    for _ in 0..opts.trials {
        let mut trial = t.clone();
        let x = rng.gen_range(0..n);
        let b_end = nth_after(&trial, x, rng.gen_range(1..=max_len));
        let c_end = nth_after(&trial, b_end, rng.gen_range(1..=max_len));
        let (b0, c0, y0) = (trial.next(x), trial.next(b_end), trial.next(c_end));
        trial.swap_segments(m, x, b_end, c_end);
        for c in [x, b0, b_end, c0, c_end, y0] {
            trial.set_dont_look(c, false);
        }
        let s = lk_improve_with(&mut trial, m, nl, opts);
        if trial.cost() <= t.cost() {
            stats.moves += s.moves + 1;
            stats.touched.extend(s.touched);
            stats.touched.extend([x, b0, b_end, c0, c_end, y0]);
            *t = trial;
        }
    }
    stats
}

#[inline]
fn edge(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

struct Chain<'a> {
    m: &'a DistanceMatrix,
    nl: &'a NeighborLists,
    opts: &'a LkOptions,
    t1: usize,
    /// Edges added by the current chain; they may not be removed again.
    added: Vec<(usize, usize)>,
    /// Edges removed by the current chain; they may not be added again.
    removed: Vec<(usize, usize)>,
}

impl Chain<'_> {
    fn d(&self, a: usize, b: usize) -> i64 {
        self.m.get(a, b) as i64
    }

    fn improve_from(&mut self, t: &mut Tour, t1: usize) -> Option<Vec<usize>> {
        self.t1 = t1;
        for t2 in [t.next(t1), t.prev(t1)] {
            self.added.clear();
            self.removed.clear();
            self.removed.push(edge(t1, t2));
            let mut touched = Vec::new();
            if self.step(t, 0, t2, self.d(t1, t2), 0, &mut touched) {
                return Some(touched);
            }
        }
        None
    }

    /// One level of the chain. `t2` is adjacent to `t1`; `gain` is the sum
    /// of removed minus added edge costs so far, not counting the edge
    /// `(t1, t2)` that would close the tour. `cum` is the tour cost change
    /// of the moves applied so far.
    fn step(
        &mut self,
        t: &mut Tour,
        level: usize,
        t2: usize,
        gain: i64,
        cum: i64,
        touched: &mut Vec<usize>,
    ) -> bool {
        let t1 = self.t1;
        let forward = t.next(t1) == t2;
        let mut cands: Vec<(i64, usize, usize)> = Vec::with_capacity(self.nl.k());
        for t3 in self.nl.of(t2) {
            if t3 == t1 || t3 == t2 {
                continue;
            }
            let g1 = gain - self.d(t2, t3);
            if g1 <= 0 {
                break;
            }
            let t4 = if forward { t.prev(t3) } else { t.next(t3) };
            if t4 == t2 {
                continue;
            }
            if self.added.contains(&edge(t3, t4)) || self.removed.contains(&edge(t2, t3)) {
                continue;
            }
            cands.push((g1 + self.d(t3, t4), t3, t4));
        }
        cands.sort_by(|x, y| y.0.cmp(&x.0).then(x.1.cmp(&y.1)));
        cands.truncate(self.opts.breadth_at(level));

        for (next_gain, t3, t4) in cands {
            let (a, b) = if forward { (t1, t4) } else { (t2, t3) };
            let (delta, span) = t.two_opt_recorded(self.m, a, b);
            let total = cum + delta;
            if total < 0 {
                touched.extend([t1, t2, t3, t4]);
                return true;
            }
            if level + 1 < self.opts.max_depth {
                self.added.push(edge(t2, t3));
                self.removed.push(edge(t3, t4));
                if self.step(t, level + 1, t4, next_gain, total, touched) {
                    touched.extend([t1, t2, t3, t4]);
                    return true;
                }
                self.added.pop();
                self.removed.pop();
            }
            t.undo_reversal(self.m, span, delta);
        }
        false
    }
}

/// Tries to relocate a segment of 1 to 3 cities that starts or ends at `t1`.
fn or_opt_from(t: &mut Tour, m: &DistanceMatrix, nl: &NeighborLists, t1: usize) -> Option<Vec<usize>> {
    let n = t.n();
    let d = |a: usize, b: usize| m.get(a, b) as i64;
    for len in 1..=3usize.min(n.saturating_sub(3)) {
        for anchored_at_start in [true, false] {
            if len == 1 && !anchored_at_start {
                continue;
            }
            let (first, last) = if anchored_at_start {
                (t1, nth_after(t, t1, len - 1))
            } else {
                (nth_before(t, t1, len - 1), t1)
            };
            let (p, q) = (t.prev(first), t.next(last));
            let removal = d(p, first) + d(last, q) - d(p, q);
            if removal <= 0 {
                continue;
            }
            for e in [first, last] {
                for c in nl.of(e) {
                    if t.between(first, c, last) {
                        continue;
                    }
                    for (x, y) in [(c, t.next(c)), (t.prev(c), c)] {
                        if x == p || t.between(first, x, last) || t.between(first, y, last) {
                            continue;
                        }
                        let fwd = d(x, first) + d(last, y) - d(x, y);
                        let rev = d(x, last) + d(first, y) - d(x, y);
                        let reversed = if removal - fwd > 0 {
                            false
                        } else if len > 1 && removal - rev > 0 {
                            true
                        } else {
                            continue;
                        };
                        t.move_segment(m, first, last, x, reversed);
                        return Some(vec![p, q, x, y, first, last]);
                    }
                }
            }
        }
    }
    None
}

fn nth_after(t: &Tour, v: usize, k: usize) -> usize {
    (0..k).fold(v, |c, _| t.next(c))
}

fn nth_before(t: &Tour, v: usize, k: usize) -> usize {
    (0..k).fold(v, |c, _| t.prev(c))
}

/// One pass over every city looking for an improving neighbor-list 2-opt
/// move; applies the first one found.
fn two_opt_sweep(t: &mut Tour, m: &DistanceMatrix, nl: &NeighborLists) -> Option<Vec<usize>> {
    let d = |a: usize, b: usize| m.get(a, b) as i64;
    for t1 in 0..t.n() {
        for forward in [true, false] {
            let t2 = if forward { t.next(t1) } else { t.prev(t1) };
            for t3 in nl.of(t2) {
                if t3 == t1 || t3 == t2 {
                    continue;
                }
                let g1 = d(t1, t2) - d(t2, t3);
                if g1 <= 0 {
                    break;
                }
                let t4 = if forward { t.prev(t3) } else { t.next(t3) };
                if t4 == t2 || t4 == t1 {
                    continue;
                }
                if g1 + d(t3, t4) - d(t4, t1) > 0 {
                    let (a, b) = if forward { (t1, t4) } else { (t2, t3) };
                    t.two_opt(m, a, b);
                    return Some(vec![t1, t2, t3, t4]);
                }
            }
        }
    }
    None
}
