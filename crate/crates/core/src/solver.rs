//! End-to-end solver: tree-decomposition DP first, then the memetic
//! algorithm on the sparsified transitive-closure matrix.

use std::fmt;
use std::time::{Duration, Instant};

use log::{debug, info};
use rayon::ThreadPoolBuilder;

use crate::decomposition::{dp_hamiltonian, min_fill_decomposition, DpOutcome, MAX_DP_WIDTH};
use crate::error::SolveError;
use crate::graph::{verify_hc, CycleCandidate, Graph};
use crate::local_search::LkOptions;
use crate::population::{Population, RecombineOrder, SearchContext, POPULATION_SIZE};
use crate::reduction::{tc_reduce, DistanceMatrix, TourCost};
use crate::rng::stream;
use crate::sparsify::{augment, initial_sparsification, maybe_reset, SparseState};
use crate::tour::{build_neighbor_lists, NeighborLists, Tour};

/// Solver parameters. Defaults: mutation rate 0.05, 13 agents, 600 s time
/// limit, restart after 30 stagnant generations, one conflicting edge
/// resolved per step, DP width cap 10 with a 5 s budget, 5 candidate
/// neighbors, natural logarithm in the generation cap.
#[derive(Clone, Debug, PartialEq)]
pub struct SolverConfig {
    pub mutation_rate: f64,
    pub time_limit: Duration,
    pub restart_stagnation: usize,
    pub dp: bool,
    pub dp_width_cap: usize,
    pub dp_deadline: Duration,
    pub sparsify: bool,
    pub neighbor_k: usize,
    pub seed: u64,
    /// Base of the logarithm in the generation cap.
    pub log_base: f64,
    /// Overrides the generation cap when set.
    pub generation_cap: Option<usize>,
    /// Worker threads; 0 uses every core. Results do not depend on it.
    pub workers: usize,
    pub recombine_order: RecombineOrder,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            mutation_rate: 0.05,
            time_limit: Duration::from_secs(600),
            restart_stagnation: 30,
            dp: true,
            dp_width_cap: 10,
            dp_deadline: Duration::from_secs(5),
            sparsify: true,
            neighbor_k: 5,
            seed: 0,
            log_base: std::f64::consts::E,
            generation_cap: None,
            workers: 0,
            recombine_order: RecombineOrder::Snapshot,
        }
    }
}

impl SolverConfig {
    /// Preset for the large structured sets: a 30 minute limit.
    pub fn set_cf() -> Self {
        SolverConfig {
            time_limit: Duration::from_secs(1800),
            ..SolverConfig::default()
        }
    }

    pub fn validate(&self) -> Result<(), SolveError> {
        let bad = |m: &str| Err(SolveError::Config(m.to_string()));
        if !(0.0..=1.0).contains(&self.mutation_rate) {
            return bad("mutation rate must lie in [0, 1]");
        }
        if self.time_limit.is_zero() {
            return bad("time limit must be positive");
        }
        if self.dp_width_cap > MAX_DP_WIDTH {
            return Err(SolveError::Config(format!(
                "DP width cap must be at most {MAX_DP_WIDTH}"
            )));
        }
        if self.neighbor_k == 0 {
            return bad("neighbor list size must be positive");
        }
        if self.log_base.is_nan() || self.log_base <= 1.0 {
            return bad("logarithm base must exceed 1");
        }
        Ok(())
    }
}

/// `floor(5 * 13 * log_b(13) * sqrt(n))`.
pub fn max_generations(n: usize, log_base: f64) -> usize {
    let pop = POPULATION_SIZE as f64;
    (5.0 * pop * pop.ln() / log_base.ln() * (n as f64).sqrt()).floor() as usize
}

/// Which stage produced the answer.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Phase {
    /// Rejected by a necessary condition before any search.
    Check,
    Dp,
    Ma,
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Phase::Check => "check",
            Phase::Dp => "dp",
            Phase::Ma => "ma",
        })
    }
}

/// Why a run ended without a cycle.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Unsolved {
    TooSmall,
    Disconnected,
    LowDegree,
    CutVertex,
    /// The DP finished and proved there is no Hamiltonian cycle.
    NoCycle,
    TimeLimit,
    GenerationLimit,
}

impl fmt::Display for Unsolved {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Unsolved::TooSmall => "fewer than 3 vertices",
            Unsolved::Disconnected => "disconnected",
            Unsolved::LowDegree => "a vertex has degree below 2",
            Unsolved::CutVertex => "graph has a cut vertex",
            Unsolved::NoCycle => "no Hamiltonian cycle exists",
            Unsolved::TimeLimit => "time limit reached",
            Unsolved::GenerationLimit => "generation limit reached",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunResult {
    pub name: String,
    pub n: usize,
    pub m: usize,
    pub solved: bool,
    pub phase: Phase,
    /// Always passes `verify_hc` against the input graph when present.
    pub cycle: Option<CycleCandidate>,
    pub reason: Option<Unsolved>,
    pub wall_time: Duration,
    pub generations: usize,
    pub seed: u64,
    /// Width of the min-fill decomposition, when one was built within the cap.
    pub width: Option<usize>,
    /// Cheapest pocket at the end of the memetic phase, priced on the full
    /// transitive-closure matrix; `n` when solved there.
    pub best_cost: Option<TourCost>,
}

impl RunResult {
    fn new(name: &str, g: &Graph, seed: u64) -> Self {
        RunResult {
            name: name.to_string(),
            n: g.n(),
            m: g.edge_count(),
            solved: false,
            phase: Phase::Check,
            cycle: None,
            reason: None,
            wall_time: Duration::ZERO,
            generations: 0,
            seed,
            width: None,
            best_cost: None,
        }
    }
}

/// Runs the full pipeline on `g`. A reported cycle has been checked
/// against `g` itself.
pub fn solve(g: &Graph, name: &str, cfg: &SolverConfig) -> Result<RunResult, SolveError> {
    cfg.validate()?;
    let start = Instant::now();
    let mut res = RunResult::new(name, g, cfg.seed);
    let finish = |mut res: RunResult| {
        res.wall_time = start.elapsed();
        Ok(res)
    };

    let reject = if g.n() < 3 {
        Some(Unsolved::TooSmall)
    } else if !g.is_connected() {
        Some(Unsolved::Disconnected)
    } else if g.min_degree() < 2 {
        Some(Unsolved::LowDegree)
    } else if !g.articulation_points().is_empty() {
        Some(Unsolved::CutVertex)
    } else {
        None
    };
    if let Some(reason) = reject {
        res.reason = Some(reason);
        return finish(res);
    }

    if cfg.dp {
        res.phase = Phase::Dp;
        if let Ok(td) = min_fill_decomposition(g, cfg.dp_width_cap) {
            res.width = Some(td.width());
            let deadline = start + cfg.dp_deadline.min(cfg.time_limit);
            match dp_hamiltonian(g, &td, deadline) {
                DpOutcome::Found(c) => {
                    res.solved = true;
                    res.cycle = Some(c);
                    return finish(res);
                }
                DpOutcome::NoCycle => {
                    res.reason = Some(Unsolved::NoCycle);
                    return finish(res);
                }
                DpOutcome::Timeout => info!("{name}: DP timed out at width {}", td.width()),
            }
        }
    }

    res.phase = Phase::Ma;
    let pool = ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| SolveError::Config(format!("thread pool: {e}")))?;
    let outcome = pool.install(|| memetic(g, cfg, start))?;
    res.generations = outcome.generations;
    res.best_cost = Some(outcome.best_cost);
    match outcome.cycle {
        Some(c) => {
            res.solved = true;
            res.cycle = Some(c);
        }
        None => res.reason = Some(outcome.reason),
    }
    finish(res)
}

struct MaOutcome {
    cycle: Option<CycleCandidate>,
    generations: usize,
    reason: Unsolved,
    best_cost: TourCost,
}

/// The working matrix and its candidate lists.
struct Landscape<'g> {
    g: &'g Graph,
    base: DistanceMatrix,
    base_nl: NeighborLists,
    sparse: Option<SparseState>,
    nl: NeighborLists,
    k: usize,
}

impl Landscape<'_> {
    fn matrix(&self) -> &DistanceMatrix {
        self.sparse.as_ref().map_or(&self.base, SparseState::working)
    }

    fn neighbors(&self) -> &NeighborLists {
        if self.sparse.is_some() {
            &self.nl
        } else {
            &self.base_nl
        }
    }
}

/// Any tour of cost `n` must be a Hamiltonian cycle of `g`; any other tour
/// that happens to be one (through suppressed edges) is accepted too.
fn find_solution(pop: &Population, g: &Graph, m: &DistanceMatrix) -> Result<Option<CycleCandidate>, SolveError> {
    let n = TourCost(g.n() as u64);
    for t in pop.tours() {
        if t.cost() == n || g.is_hamiltonian_order(t.order()) {
            let c = t.to_candidate();
            if !verify_hc(g, &c) {
                debug_assert_eq!(crate::reduction::tour_cost(m, t.order()), n);
                return Err(SolveError::Unsound);
            }
            return Ok(Some(c));
        }
    }
    Ok(None)
}

fn install_leader(pop: &mut Population, mut t: Tour, m: &DistanceMatrix) {
    t.recompute_cost(m);
    t.set_all_dont_look(true);
    if t.cost() <= pop.agents[0].pocket.cost() {
        pop.agents[0].pocket = t;
    }
}

fn memetic(g: &Graph, cfg: &SolverConfig, start: Instant) -> Result<MaOutcome, SolveError> {
    let n = g.n();
    let base = tc_reduce(g).expect("connectivity checked");
    let base_for_report = base.clone();
    let base_nl = build_neighbor_lists(&base, cfg.neighbor_k);
    let lk = LkOptions::for_size(n);
    let mut rng = stream(cfg.seed, &[0]);
    let cap = cfg
        .generation_cap
        .unwrap_or_else(|| max_generations(n, cfg.log_base));
    let out_of_time = || start.elapsed() >= cfg.time_limit;
    let done = |cycle: Option<CycleCandidate>, pop: &Population, reason| {
        let best_cost = match &cycle {
            Some(_) => TourCost(n as u64),
            None => pop
                .tours()
                .map(|t| crate::reduction::tour_cost(&base_for_report, t.order()))
                .min()
                .expect("population is nonempty"),
        };
        Ok(MaOutcome {
            cycle,
            generations: pop.generation,
            reason,
            best_cost,
        })
    };

    let mut pop = {
        let ctx = SearchContext {
            matrix: &base,
            neighbors: &base_nl,
            lk: &lk,
        };
        Population::initialize(&ctx, &mut rng)
    };
    if let Some(c) = find_solution(&pop, g, &base)? {
        return done(Some(c), &pop, Unsolved::TimeLimit);
    }

    let mut land = Landscape {
        g,
        nl: base_nl.clone(),
        base,
        base_nl,
        sparse: None,
        k: cfg.neighbor_k,
    };
    let all: Vec<usize> = (0..n).collect();
    if cfg.sparsify {
        let (state, t) = initial_sparsification(g, &land.base, &pop.agents[0].pocket, &land.base_nl, &lk, &mut rng);
        info!(
            "initial sparsification keeps {} of {} edges, tour cost {}",
            state.ones_count(),
            state.baseline_ones(),
            t.cost()
        );
        land.nl = build_neighbor_lists(state.working(), land.k);
        land.sparse = Some(state);
        pop.rebase(land.matrix(), &all);
        install_leader(&mut pop, t, land.matrix());
    }

    macro_rules! check {
        () => {
            if let Some(c) = find_solution(&pop, land.g, land.matrix())? {
                return done(Some(c), &pop, Unsolved::TimeLimit);
            }
            if out_of_time() {
                return done(None, &pop, Unsolved::TimeLimit);
            }
        };
    }

    while pop.generation < cap {
        check!();
        pop.structure();
        {
            let ctx = SearchContext {
                matrix: land.matrix(),
                neighbors: land.neighbors(),
                lk: &lk,
            };
            pop.recombine(&ctx, cfg.recombine_order, &mut rng);
        }
        check!();
        {
            let ctx = SearchContext {
                matrix: land.matrix(),
                neighbors: land.neighbors(),
                lk: &lk,
            };
            pop.mutate(&ctx, cfg.mutation_rate, &mut rng);
        }
        check!();
        if pop.needs_restart(cfg.restart_stagnation) {
            debug!("restart at generation {}", pop.generation);
            pop.structure();
            let ctx = SearchContext {
                matrix: land.matrix(),
                neighbors: land.neighbors(),
                lk: &lk,
            };
            pop.restart(&ctx, &mut rng);
            check!();
        }
        {
            let ctx = SearchContext {
                matrix: land.matrix(),
                neighbors: land.neighbors(),
                lk: &lk,
            };
            pop.optimize(&ctx, &mut rng);
        }
        pop.structure();
        check!();
        if let Some(state) = land.sparse.as_mut() {
            let (t, changes) = augment(state, g, &pop.agents[0].pocket, &land.nl, &lk, &mut rng);
            if !changes.cities.is_empty() {
                land.nl.refresh(state.working(), &changes.cities);
                pop.rebase(state.working(), &changes.cities);
            }
            install_leader(&mut pop, t, state.working());
            let reset = maybe_reset(state, g, &land.base, &pop.agents[0].pocket, &land.base_nl, &lk, &mut rng);
            if let Some(t) = reset {
                debug!("sparse matrix reset at generation {}", pop.generation);
                land.nl = build_neighbor_lists(state.working(), land.k);
                pop.rebase(state.working(), &all);
                install_leader(&mut pop, t, state.working());
            }
        }
        pop.end_generation();
        debug!(
            "generation {}: best {} on working matrix, {} ones",
            pop.generation,
            pop.best_cost(),
            land.sparse.as_ref().map_or(0, SparseState::ones_count)
        );
    }
    check!();
    done(None, &pop, Unsolved::GenerationLimit)
}
