//! The 13-agent memetic population.
//!
//! Agents sit in a complete ternary tree: agent `i` has children `3i + 1`,
//! `3i + 2` and `3i + 3` (when below 13). Each agent keeps a `pocket` (its
//! best tour) and a `current` (the exploratory tour). After
//! [`Population::structure`] every parent pocket is at most as expensive as
//! its children's, so agent 0 holds the population's best tour.

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;

use crate::local_search::{local_search, rai_improve, LkOptions};
use crate::reduction::{DistanceMatrix, TourCost};
use crate::rng::{stream, StreamRng};
use crate::tour::{nearest_neighbor_tour, NeighborLists, Tour};

pub const POPULATION_SIZE: usize = 13;

/// Indices of the three agents that lead a sub-population below the root.
pub const LEADERS: [usize; 3] = [1, 2, 3];

const PHASE_INIT: u64 = 1;
const PHASE_RECOMBINE: u64 = 2;
const PHASE_MUTATE: u64 = 3;
const PHASE_RESTART: u64 = 4;
const PHASE_OPTIMIZE: u64 = 5;

pub fn children(i: usize) -> impl Iterator<Item = usize> {
    (3 * i + 1..=3 * i + 3).filter(|&c| c < POPULATION_SIZE)
}

pub fn parent(i: usize) -> Option<usize> {
    (i > 0).then(|| (i - 1) / 3)
}

/// Matrix, candidate lists and LK options shared by every search in a phase.
#[derive(Clone, Copy, Debug)]
pub struct SearchContext<'a> {
    pub matrix: &'a DistanceMatrix,
    pub neighbors: &'a NeighborLists,
    pub lk: &'a LkOptions,
}

impl SearchContext<'_> {
    fn improve(&self, t: &mut Tour, rng: &mut StreamRng) {
        local_search(t, self.matrix, self.neighbors, self.lk, rng);
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Agent {
    pub pocket: Tour,
    pub current: Tour,
}

/// Which tour of an agent a recombination reads.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Slot {
    Pocket(usize),
    Current(usize),
}

/// When recombination right-hand sides are read.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum RecombineOrder {
    /// Every parent comes from the state at the start of the generation;
    /// the 13 recombinations run in parallel.
    #[default]
    Snapshot,
    /// Assignments run one after another and later ones see earlier results.
    Sequential,
}

/// Vertex-disjoint directed paths covering every city.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubtourCover {
    paths: Vec<Vec<usize>>,
}

impl SubtourCover {
    pub fn paths(&self) -> &[Vec<usize>] {
        &self.paths
    }

    /// True iff the paths partition `0..n`.
    pub fn is_partition(&self, n: usize) -> bool {
        let mut seen = vec![false; n];
        for &v in self.paths.iter().flatten() {
            if v >= n || seen[v] {
                return false;
            }
            seen[v] = true;
        }
        seen.into_iter().all(|s| s)
    }

    /// Joins the paths into one cyclic order: starting from the first path,
    /// the running tail is repeatedly linked to the nearest remaining head
    /// (earliest path on ties).
    pub fn stitch(&self, m: &DistanceMatrix) -> Vec<usize> {
        let mut order = Vec::with_capacity(m.n());
        let Some((first, rest)) = self.paths.split_first() else {
            return order;
        };
        order.extend_from_slice(first);
        let mut remaining: Vec<&Vec<usize>> = rest.iter().collect();
        while !remaining.is_empty() {
            let tail = *order.last().expect("paths are nonempty");
            let mut best = 0;
            let mut best_d = u32::MAX;
            for (idx, p) in remaining.iter().enumerate() {
                let d = m.get(tail, p[0]);
                if d < best_d {
                    best_d = d;
                    best = idx;
                }
            }
            order.extend_from_slice(remaining.remove(best));
        }
        order
    }
}

/// Builds a subtour cover from the union graph of two tours. A start city
/// is drawn among the unvisited ones; the path grows forward through random
/// unvisited successors (in either tour) and then backward through random
/// unvisited predecessors, until neither is available.
pub fn sax_crossover<R: Rng + ?Sized>(t1: &Tour, t2: &Tour, rng: &mut R) -> SubtourCover {
    let n = t1.n();
    assert_eq!(n, t2.n(), "tours over different city sets");
    // unvisited cities with O(1) removal
    let mut pool: Vec<usize> = (0..n).collect();
    let mut pos: Vec<usize> = (0..n).collect();
    let mut visited = vec![false; n];
    let take = |v: usize, pool: &mut Vec<usize>, pos: &mut Vec<usize>, visited: &mut Vec<bool>| {
        visited[v] = true;
        let idx = pos[v];
        let last = *pool.last().expect("pool nonempty");
        pool.swap_remove(idx);
        if last != v {
            pos[last] = idx;
        }
    };
    let pick = |a: usize, b: usize, visited: &[bool], rng: &mut R| -> Option<usize> {
        match (!visited[a], !visited[b] && b != a) {
            (true, true) => Some(if rng.gen_bool(0.5) { a } else { b }),
            (true, false) => Some(a),
            (false, true) => Some(b),
            (false, false) => None,
        }
    };

    let mut paths = Vec::new();
    while !pool.is_empty() {
        let start = pool[rng.gen_range(0..pool.len())];
        take(start, &mut pool, &mut pos, &mut visited);
        let mut forward = vec![start];
        let mut v = start;
        while let Some(u) = pick(t1.next(v), t2.next(v), &visited, rng) {
            take(u, &mut pool, &mut pos, &mut visited);
            forward.push(u);
            v = u;
        }
        let mut backward = Vec::new();
        let mut v = start;
        while let Some(u) = pick(t1.prev(v), t2.prev(v), &visited, rng) {
            take(u, &mut pool, &mut pos, &mut visited);
            backward.push(u);
            v = u;
        }
        backward.reverse();
        backward.extend(forward);
        paths.push(backward);
    }
    SubtourCover { paths }
}

/// SAX crossover, stitching, then local search from every city.
pub fn recombine<R: Rng + ?Sized>(
    a: &Tour,
    b: &Tour,
    ctx: &SearchContext<'_>,
    rng: &mut R,
) -> Tour {
    let cover = sax_crossover(a, b, rng);
    let mut child = Tour::from_order(cover.stitch(ctx.matrix), ctx.matrix);
    let mut local = stream(rng.gen(), &[]);
    ctx.improve(&mut child, &mut local);
    child
}

/// Draws whether one mutation fires at probability `rate`.
pub fn mutation_fires<R: Rng + ?Sized>(rate: f64, rng: &mut R) -> bool {
    rate > 0.0 && (rate >= 1.0 || rng.gen_bool(rate))
}

/// Moves a random city `c_j` to follow another random city `c_i` and
/// clears the don't-look bits of the five cities involved. Returns `false`
/// when the tour is too small for a non-trivial insertion.
pub fn insertion_mutation<R: Rng + ?Sized>(t: &mut Tour, m: &DistanceMatrix, rng: &mut R) -> bool {
    let n = t.n();
    if n < 4 {
        return false;
    }
    loop {
        let ci = rng.gen_range(0..n);
        let cj = rng.gen_range(0..n);
        if cj == ci || cj == t.next(ci) {
            continue;
        }
        let (p, q, an) = (t.prev(cj), t.next(cj), t.next(ci));
        t.apply_insertion(m, cj, ci).expect("insertion checked above");
        for c in [cj, p, q, ci, an] {
            t.set_dont_look(c, false);
        }
        return true;
    }
}

/// Ternary-tree population plus bookkeeping for the restart trigger.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Population {
    pub agents: Vec<Agent>,
    pub generation: usize,
    /// Best pocket cost recorded at the end of each generation.
    pub best_cost_history: Vec<TourCost>,
    best_seen: TourCost,
    last_improvement: usize,
}

impl Population {
    /// Wraps 13 agents and structures them.
    pub fn from_agents(agents: Vec<Agent>) -> Population {
        assert_eq!(agents.len(), POPULATION_SIZE);
        let mut p = Population {
            agents,
            generation: 0,
            best_cost_history: Vec::new(),
            best_seen: TourCost(u64::MAX),
            last_improvement: 0,
        };
        p.structure();
        p.best_seen = p.best_cost();
        p
    }

    /// 26 nearest-neighbor tours from independent random starts, each
    /// improved by local search, then structured.
    pub fn initialize<R: Rng + ?Sized>(ctx: &SearchContext<'_>, rng: &mut R) -> Population {
        let seed: u64 = rng.gen();
        let tours: Vec<Tour> = (0..2 * POPULATION_SIZE)
            .into_par_iter()
            .map(|k| {
                let mut r = stream(seed, &[PHASE_INIT, k as u64]);
                let mut t = nearest_neighbor_tour(ctx.matrix, &mut r);
                ctx.improve(&mut t, &mut r);
                t
            })
            .collect();
        let mut it = tours.into_iter();
        let agents = (0..POPULATION_SIZE)
            .map(|_| Agent {
                pocket: it.next().expect("26 tours"),
                current: it.next().expect("26 tours"),
            })
            .collect();
        Population::from_agents(agents)
    }

    pub fn tours(&self) -> impl Iterator<Item = &Tour> {
        self.agents.iter().flat_map(|a| [&a.pocket, &a.current])
    }

    fn tours_mut(&mut self) -> impl Iterator<Item = &mut Tour> {
        self.agents
            .iter_mut()
            .flat_map(|a| [&mut a.pocket, &mut a.current])
    }

    /// Cheapest pocket. After structuring this is agent 0's.
    pub fn best(&self) -> &Tour {
        &self
            .agents
            .iter()
            .min_by_key(|a| a.pocket.cost())
            .expect("population is nonempty")
            .pocket
    }

    pub fn best_cost(&self) -> TourCost {
        self.best().cost()
    }

    /// True iff every parent pocket is no more expensive than its children's.
    pub fn is_structured(&self) -> bool {
        (1..POPULATION_SIZE).all(|c| {
            let p = parent(c).expect("non-root");
            self.agents[p].pocket.cost() <= self.agents[c].pocket.cost()
        })
    }

    /// UpdatePocket and PocketPropagation until neither changes anything.
    pub fn structure(&mut self) {
        let mut costs: Vec<(TourCost, TourCost)> = self
            .agents
            .iter()
            .map(|a| (a.pocket.cost(), a.current.cost()))
            .collect();
        for swap in structure_costs(&mut costs) {
            match swap {
                Swap::Within(i) => {
                    let a = &mut self.agents[i];
                    std::mem::swap(&mut a.pocket, &mut a.current);
                }
                Swap::Pockets { parent, child } => {
                    let (head, tail) = self.agents.split_at_mut(child);
                    std::mem::swap(&mut head[parent].pocket, &mut tail[0].pocket);
                }
            }
        }
    }

    /// Current of every agent rebuilt by recombination; pockets untouched.
    ///
    /// The root takes `R(pocket(1), current(2))`. In each sub-population
    /// with leader `L` and children permuted at random into `off1..off3`:
    /// `current(L) = R(pocket(off2), pocket(off3))`,
    /// `current(off1) = R(pocket(L), current(off2))`,
    /// `current(off2) = R(pocket(off1), current(off3))`,
    /// `current(off3) = R(pocket(off2), current(off1))`.
    pub fn recombine<R: Rng + ?Sized>(
        &mut self,
        ctx: &SearchContext<'_>,
        order: RecombineOrder,
        rng: &mut R,
    ) {
        let seed: u64 = rng.gen();
        let generation = self.generation as u64;
        let tasks = recombination_schedule(rng);
        let run = |(target, a, b): (usize, Slot, Slot), agents: &[Agent]| {
            let mut r = stream(seed, &[PHASE_RECOMBINE, generation, target as u64]);
            recombine(slot(agents, a), slot(agents, b), ctx, &mut r)
        };
        match order {
            RecombineOrder::Snapshot => {
                let agents = &self.agents;
                let children: Vec<(usize, Tour)> = tasks
                    .par_iter()
                    .map(|&task| (task.0, run(task, agents)))
                    .collect();
                for (target, child) in children {
                    self.agents[target].current = child;
                }
            }
            RecombineOrder::Sequential => {
                for task in tasks {
                    let child = run(task, &self.agents);
                    self.agents[task.0].current = child;
                }
            }
        }
    }

    /// Each current mutates with probability `rate`; the mutated tour is
    /// improved and kept only if strictly cheaper than before.
    pub fn mutate<R: Rng + ?Sized>(&mut self, ctx: &SearchContext<'_>, rate: f64, rng: &mut R) {
        let seed: u64 = rng.gen();
        let generation = self.generation as u64;
        self.agents.par_iter_mut().enumerate().for_each(|(i, agent)| {
            let mut r = stream(seed, &[PHASE_MUTATE, generation, i as u64]);
            if !mutation_fires(rate, &mut r) {
                return;
            }
            let mut aux = agent.current.clone();
            if !insertion_mutation(&mut aux, ctx.matrix, &mut r) {
                return;
            }
            ctx.improve(&mut aux, &mut r);
            if aux.cost() < agent.current.cost() {
                agent.current = aux;
            }
        });
    }

    /// Local search on every current, starting from its critical cities.
    pub fn optimize<R: Rng + ?Sized>(&mut self, ctx: &SearchContext<'_>, rng: &mut R) {
        let seed: u64 = rng.gen();
        let generation = self.generation as u64;
        self.agents.par_iter_mut().enumerate().for_each(|(i, agent)| {
            if agent.current.critical_cities().is_empty() {
                return;
            }
            let mut r = stream(seed, &[PHASE_OPTIMIZE, generation, i as u64]);
            ctx.improve(&mut agent.current, &mut r);
        });
    }

    /// Restart trigger: past `stagnation` generations, and either all
    /// pockets cost the same or the best pocket has not improved for
    /// `stagnation` generations.
    pub fn needs_restart(&self, stagnation: usize) -> bool {
        if self.generation <= stagnation {
            return false;
        }
        let first = self.agents[0].pocket.cost();
        let uniform = self.agents.iter().all(|a| a.pocket.cost() == first);
        uniform || self.generation - self.last_improvement >= stagnation
    }

    /// Keeps the best pocket verbatim and rebuilds the other 25 tours:
    /// nearest neighbor, one insertion mutation, then RAI. The fresh tours
    /// are structured so pocket ordering holds on return.
    pub fn restart<R: Rng + ?Sized>(&mut self, ctx: &SearchContext<'_>, rng: &mut R) {
        let seed: u64 = rng.gen();
        let generation = self.generation as u64;
        let keep = (0..POPULATION_SIZE)
            .min_by_key(|&i| self.agents[i].pocket.cost())
            .expect("population is nonempty");
        self.tours_mut().enumerate().par_bridge().for_each(|(k, t)| {
            if k == 2 * keep {
                return;
            }
            let mut r = stream(seed, &[PHASE_RESTART, generation, k as u64]);
            let mut fresh = nearest_neighbor_tour(ctx.matrix, &mut r);
            insertion_mutation(&mut fresh, ctx.matrix, &mut r);
            rai_improve(&mut fresh, ctx.matrix, ctx.neighbors, &mut r);
            *t = fresh;
        });
        self.structure();
        self.last_improvement = self.generation;
    }

    /// Closes a generation: records the best pocket cost and tracks when it
    /// last improved.
    pub fn end_generation(&mut self) {
        let best = self.best_cost();
        if best < self.best_seen {
            self.best_seen = best;
            self.last_improvement = self.generation;
        }
        self.best_cost_history.push(best);
        self.generation += 1;
    }

    /// Recomputes every tour cost after the matrix changed, and marks
    /// `cities` critical in every tour. The new best cost becomes the
    /// reference for stagnation without counting as an improvement.
    pub fn rebase(&mut self, m: &DistanceMatrix, cities: &[usize]) {
        self.tours_mut().par_bridge().for_each(|t| {
            t.recompute_cost(m);
            for &c in cities {
                t.set_dont_look(c, false);
            }
        });
        self.best_seen = self.best_cost();
    }
}

fn slot(agents: &[Agent], s: Slot) -> &Tour {
    match s {
        Slot::Pocket(i) => &agents[i].pocket,
        Slot::Current(i) => &agents[i].current,
    }
}

/// The 13 `(target, first parent, second parent)` assignments of one
/// generation, with the offspring order of each sub-population drawn
/// at random.
pub fn recombination_schedule<R: Rng + ?Sized>(rng: &mut R) -> Vec<(usize, Slot, Slot)> {
    use Slot::{Current as C, Pocket as P};
    let mut tasks = vec![(0, P(1), C(2))];
    for leader in LEADERS {
        let mut offs: Vec<usize> = children(leader).collect();
        offs.shuffle(rng);
        let [o1, o2, o3] = [offs[0], offs[1], offs[2]];
        tasks.push((leader, P(o2), P(o3)));
        tasks.push((o1, P(leader), C(o2)));
        tasks.push((o2, P(o1), C(o3)));
        tasks.push((o3, P(o2), C(o1)));
    }
    tasks
}

/// One exchange performed while structuring.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Swap {
    /// Pocket and current of one agent trade places.
    Within(usize),
    /// Pockets of a parent and a child trade places.
    Pockets { parent: usize, child: usize },
}

/// Structures a table of `(pocket cost, current cost)` pairs in place and
/// returns the exchanges made: swap pocket and current when the current is
/// cheaper, and parent and child pockets when the child's is cheaper, until
/// a fixed point. Every exchange lowers the vector of pocket costs read in
/// index order lexicographically, so this terminates.
pub fn structure_costs<C: Ord>(costs: &mut [(C, C)]) -> Vec<Swap> {
    let mut swaps = Vec::new();
    loop {
        let before = swaps.len();
        for (i, (pocket, current)) in costs.iter_mut().enumerate() {
            if current < pocket {
                std::mem::swap(pocket, current);
                swaps.push(Swap::Within(i));
            }
        }
        for child in (1..costs.len()).rev() {
            let parent = parent(child).expect("non-root");
            if costs[child].0 < costs[parent].0 {
                let (head, tail) = costs.split_at_mut(child);
                std::mem::swap(&mut head[parent].0, &mut tail[0].0);
                swaps.push(Swap::Pockets { parent, child });
            }
        }
        if swaps.len() == before {
            return swaps;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate;
    use crate::reduction::tc_reduce;
    use crate::tour::build_neighbor_lists;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    struct Fixture {
        m: DistanceMatrix,
        nl: NeighborLists,
        lk: LkOptions,
    }

    impl Fixture {
        fn new(n: usize, seed: u64) -> Fixture {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let g = generate::random_connected(n, 4.0 / n as f64, &mut rng);
            let m = tc_reduce(&g).unwrap();
            let nl = build_neighbor_lists(&m, 5);
            Fixture {
                m,
                nl,
                lk: LkOptions::for_size(n),
            }
        }

        fn ctx(&self) -> SearchContext<'_> {
            SearchContext {
                matrix: &self.m,
                neighbors: &self.nl,
                lk: &self.lk,
            }
        }
    }

    fn tree_ordered<C: Ord>(costs: &[(C, C)]) -> bool {
        (1..costs.len()).all(|c| costs[parent(c).unwrap()].0 <= costs[c].0)
    }

    #[test]
    fn tree_shape() {
        assert_eq!(children(0).collect::<Vec<_>>(), vec![1, 2, 3]);
        assert_eq!(children(3).collect::<Vec<_>>(), vec![10, 11, 12]);
        assert_eq!(children(4).count(), 0);
        assert_eq!(parent(12), Some(3));
        assert_eq!(parent(0), None);
    }

    #[test]
    fn descending_costs_bubble_to_root() {
        let mut costs: Vec<(u64, u64)> = (0..13).map(|i| (13 - i, 100)).collect();
        structure_costs(&mut costs);
        assert_eq!(costs[0].0, 1);
        assert!(tree_ordered(&costs));
    }

    #[test]
    fn ordered_costs_are_a_fixed_point() {
        let mut costs: Vec<(u64, u64)> = (0..13).map(|i| (i + 1, i + 50)).collect();
        let before = costs.clone();
        assert!(structure_costs(&mut costs).is_empty());
        assert_eq!(costs, before);
    }

    #[test]
    fn structure_fuzz() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..1000 {
            let mut costs: Vec<(u32, u32)> =
                (0..13).map(|_| (rng.gen_range(0..20), rng.gen_range(0..20))).collect();
            let mut all: Vec<u32> = costs.iter().flat_map(|&(a, b)| [a, b]).collect();
            structure_costs(&mut costs);
            assert!(tree_ordered(&costs));
            assert!(costs.iter().all(|(p, c)| p <= c));
            let mut after: Vec<u32> = costs.iter().flat_map(|&(a, b)| [a, b]).collect();
            all.sort_unstable();
            after.sort_unstable();
            assert_eq!(all, after);
        }
    }

    #[test]
    fn initialization() {
        let f = Fixture::new(40, 1);
        let p = Population::initialize(&f.ctx(), &mut ChaCha8Rng::seed_from_u64(3));
        assert_eq!(p.agents.len(), POPULATION_SIZE);
        assert!(p.is_structured());
        let min = p.tours().map(|t| t.cost()).min().unwrap();
        assert_eq!(p.agents[0].pocket.cost(), min);
        assert!(p.tours().all(|t| t.is_valid()));
        let q = Population::initialize(&f.ctx(), &mut ChaCha8Rng::seed_from_u64(3));
        assert_eq!(p, q);
    }

    #[test]
    fn sax_on_identical_tours_follows_the_tour() {
        let f = Fixture::new(12, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let t = nearest_neighbor_tour(&f.m, &mut rng);
        let cover = sax_crossover(&t, &t, &mut rng);
        assert!(cover.is_partition(12));
        for path in cover.paths() {
            for w in path.windows(2) {
                assert_eq!(t.next(w[0]), w[1]);
            }
        }
        assert_eq!(cover.paths().len(), 1);
    }

    #[test]
    fn sax_with_arc_disjoint_tours() {
        let m = tc_reduce(&generate::complete(4)).unwrap();
        let t1 = Tour::from_order(vec![0, 1, 2, 3], &m);
        let t2 = Tour::from_order(vec![0, 3, 2, 1], &m);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..50 {
            let cover = sax_crossover(&t1, &t2, &mut rng);
            assert!(cover.is_partition(4));
            for path in cover.paths() {
                for w in path.windows(2) {
                    assert!(t1.next(w[0]) == w[1] || t2.next(w[0]) == w[1]);
                }
            }
        }
    }

    #[test]
    fn sax_partition_fuzz() {
        let m = tc_reduce(&generate::complete(6)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..500 {
            let mut a: Vec<usize> = (0..6).collect();
            let mut b: Vec<usize> = (0..6).collect();
            a.shuffle(&mut rng);
            b.shuffle(&mut rng);
            let (t1, t2) = (Tour::from_order(a, &m), Tour::from_order(b, &m));
            let cover = sax_crossover(&t1, &t2, &mut rng);
            assert!(cover.is_partition(6));
            for path in cover.paths() {
                for w in path.windows(2) {
                    assert!(t1.next(w[0]) == w[1] || t2.next(w[0]) == w[1]);
                }
            }
            let stitched = cover.stitch(&m);
            assert!(Tour::from_order(stitched, &m).is_valid());
        }
    }

    #[test]
    fn schedule_assigns_every_current_once() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            let mut targets: Vec<usize> =
                recombination_schedule(&mut rng).iter().map(|t| t.0).collect();
            targets.sort_unstable();
            assert_eq!(targets, (0..13).collect::<Vec<_>>());
        }
    }

    #[test]
    fn recombination_keeps_pockets() {
        let f = Fixture::new(50, 4);
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let mut p = Population::initialize(&f.ctx(), &mut rng);
        let pockets: Vec<Tour> = p.agents.iter().map(|a| a.pocket.clone()).collect();
        for order in [RecombineOrder::Snapshot, RecombineOrder::Sequential] {
            p.recombine(&f.ctx(), order, &mut rng);
            assert!(p.tours().all(|t| t.is_valid()));
            for (a, before) in p.agents.iter().zip(&pockets) {
                assert_eq!(&a.pocket, before);
            }
        }
    }

    #[test]
    fn identical_parents_do_not_get_worse() {
        let f = Fixture::new(50, 6);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..10 {
            let mut t = nearest_neighbor_tour(&f.m, &mut rng);
            local_search(&mut t, &f.m, &f.nl, &f.lk, &mut rng);
            let child = recombine(&t, &t, &f.ctx(), &mut rng);
            assert!(child.cost() <= t.cost());
        }
    }

    #[test]
    fn mutation_rates() {
        let f = Fixture::new(40, 7);
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let mut p = Population::initialize(&f.ctx(), &mut rng);
        let before = p.clone();
        p.mutate(&f.ctx(), 0.0, &mut rng);
        assert_eq!(p, before);
        p.mutate(&f.ctx(), 1.0, &mut rng);
        for (a, b) in p.agents.iter().zip(&before.agents) {
            assert!(a.current.cost() <= b.current.cost());
            assert!(a.current.is_valid());
        }
    }

    #[test]
    fn bernoulli_draws() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let hits = (0..10_000).filter(|_| mutation_fires(0.05, &mut rng)).count();
        assert!((400..=600).contains(&hits), "{hits}");
    }

    #[test]
    fn insertion_mutation_marks_five_cities() {
        let m = tc_reduce(&generate::cycle(10)).unwrap();
        let mut t = Tour::from_order((0..10).collect(), &m);
        t.set_all_dont_look(true);
        assert!(insertion_mutation(&mut t, &m, &mut ChaCha8Rng::seed_from_u64(3)));
        let critical = t.critical_cities().len();
        assert!((4..=5).contains(&critical), "{critical}");
        assert!(t.is_valid());
    }

    #[test]
    fn restart_keeps_the_best_pocket() {
        let f = Fixture::new(40, 9);
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let mut p = Population::initialize(&f.ctx(), &mut rng);
        let best = p.best().clone();
        let mut q = p.clone();
        p.restart(&f.ctx(), &mut ChaCha8Rng::seed_from_u64(1));
        q.restart(&f.ctx(), &mut ChaCha8Rng::seed_from_u64(1));
        assert_eq!(p, q);
        assert_eq!(p.best_cost(), best.cost());
        assert!(p.agents.iter().any(|a| a.pocket == best));
        p.structure();
        assert!(p.is_structured());
        assert!(p.tours().all(|t| t.is_valid()));
    }

    #[test]
    fn restart_trigger() {
        let f = Fixture::new(20, 10);
        let mut p = Population::initialize(&f.ctx(), &mut ChaCha8Rng::seed_from_u64(0));
        for _ in 0..30 {
            assert!(!p.needs_restart(30));
            p.end_generation();
        }
        // 31 generations without improvement
        p.end_generation();
        assert!(p.needs_restart(30));
    }
}
