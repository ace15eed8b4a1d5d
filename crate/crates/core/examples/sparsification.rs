//! Sparsifying the transitive-closure matrix around a leader tour, then
//! augmenting it until the leader becomes a Hamiltonian cycle.

use hcma::generate::planted_cubic;
use hcma::local_search::LkOptions;
use hcma::reduction::{tc_reduce, TourCost};
use hcma::rng::stream;
use hcma::sparsify::{augment, initial_sparsification, maybe_reset};
use hcma::tour::{build_neighbor_lists, nearest_neighbor_tour};

fn main() {
    let n = 3000;
    let mut rng = stream(11, &[]);
    let (g, _) = planted_cubic(n, &mut rng);
    let base = tc_reduce(&g).expect("connected");
    let mut nl = build_neighbor_lists(&base, 5);
    let lk = LkOptions::for_size(n);

    let leader = nearest_neighbor_tour(&base, &mut rng);
    println!("graph edges {}, NN leader cost {}", g.edge_count(), leader.cost());
    let (mut state, mut leader) = initial_sparsification(&g, &base, &leader, &nl, &lk, &mut rng);
    println!(
        "after initial sparsification: leader cost {} on base, {} ones in the working matrix",
        leader.cost(),
        state.ones_count()
    );
    assert!(state.is_sound(&g));

    for step in 1..=50 {
        let (t, changes) = augment(&mut state, &g, &leader, &nl, &lk, &mut rng);
        nl.refresh(state.working(), &changes.cities);
        leader = t;
        println!(
            "augment {step:>2}: T'' cost {} on working matrix, {} cells restored, {} ones",
            leader.cost(),
            changes.restored,
            state.ones_count()
        );
        if leader.cost() == TourCost(n as u64) {
            println!("leader is a Hamiltonian cycle: {}", g.is_hamiltonian_order(leader.order()));
            break;
        }
        if let Some(t) = maybe_reset(&mut state, &g, &base, &leader, &nl, &lk, &mut rng) {
            println!("every edge restored, matrix rebuilt");
            nl = build_neighbor_lists(state.working(), 5);
            leader = t;
        }
    }
}
