//! Tour improvement on a transitive-closure matrix: nearest neighbor, then
//! RAI, then the LK-style engine, then iterated LK.

use std::time::Instant;

use hcma::generate::planted_cubic;
use hcma::local_search::{iterated_lk, lk_improve_with, rai_improve, LkOptions};
use hcma::reduction::tc_reduce;
use hcma::tour::{build_neighbor_lists, nearest_neighbor_tour};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let n = 1000;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (g, _) = planted_cubic(n, &mut rng);
    let m = tc_reduce(&g).expect("connected");
    let nl = build_neighbor_lists(&m, 5);
    let opts = LkOptions::for_size(n);

    let mut t = nearest_neighbor_tour(&m, &mut rng);
    println!("nearest neighbor: cost {} (target {n})", t.cost());

    let start = Instant::now();
    let stats = rai_improve(&mut t, &m, &nl, &mut rng);
    println!("RAI:              cost {} after {} moves, {:.2?}", t.cost(), stats.moves, start.elapsed());

    t.set_all_dont_look(false);
    let start = Instant::now();
    let stats = lk_improve_with(&mut t, &m, &nl, &opts);
    println!("LK:               cost {} after {} moves, {:.2?}", t.cost(), stats.moves, start.elapsed());

    t.set_all_dont_look(false);
    let start = Instant::now();
    let stats = iterated_lk(&mut t, &m, &nl, &opts, &mut rng);
    println!(
        "iterated LK:      cost {} after {} moves and {} kicks, {:.2?}",
        t.cost(),
        stats.moves,
        opts.trials,
        start.elapsed()
    );
    assert!(t.is_valid());
}
