//! The 13-agent memetic loop on a fixed matrix, without sparsification:
//! structure, recombine, mutate, restart when stagnant, optimize.

use hcma::generate::planted_cubic;
use hcma::local_search::LkOptions;
use hcma::population::{Population, RecombineOrder, SearchContext};
use hcma::reduction::tc_reduce;
use hcma::rng::stream;
use hcma::tour::build_neighbor_lists;

fn main() {
    let n = 2000;
    let mut rng = stream(3, &[]);
    let (g, _) = planted_cubic(n, &mut rng);
    let m = tc_reduce(&g).expect("connected");
    let nl = build_neighbor_lists(&m, 5);
    let lk = LkOptions::for_size(n);
    let ctx = SearchContext {
        matrix: &m,
        neighbors: &nl,
        lk: &lk,
    };

    let mut pop = Population::initialize(&ctx, &mut rng);
    println!("initial best pocket: {}", pop.best_cost());
    for generation in 0..40 {
        pop.structure();
        pop.recombine(&ctx, RecombineOrder::Snapshot, &mut rng);
        pop.mutate(&ctx, 0.05, &mut rng);
        let restarted = pop.needs_restart(30);
        if restarted {
            pop.restart(&ctx, &mut rng);
        }
        pop.optimize(&ctx, &mut rng);
        pop.structure();
        pop.end_generation();
        let costs: Vec<u64> = pop.tours().map(|t| t.cost().0).step_by(2).collect();
        println!(
            "generation {generation:>2}: best {}{} pockets {costs:?}",
            pop.best_cost(),
            if restarted { " (restart)" } else { "" }
        );
        if pop.best_cost().0 == n as u64 {
            println!("Hamiltonian cycle found");
            break;
        }
    }
}
