//! The two HCP to TSP reductions on the Petersen graph and on a cycle.

use hcma::generate::{cycle, petersen};
use hcma::reduction::{sr_reduce, tc_reduce, tc_reduce_with, tour_cost, Precision};

fn main() {
    let g = petersen();
    let sr = sr_reduce(&g);
    let tc = tc_reduce(&g).expect("connected");
    println!("Petersen, row 0");
    println!("  SR: {:?}", (0..10).map(|b| sr.get(0, b)).collect::<Vec<_>>());
    println!("  TC: {:?}", (0..10).map(|b| tc.get(0, b)).collect::<Vec<_>>());
    // the outer 5-cycle followed by the inner pentagram is the best we can do
    let order = [0, 1, 2, 3, 4, 9, 7, 5, 8, 6];
    println!(
        "  tour {:?}: SR cost {}, TC cost {} (n = 10, so not Hamiltonian)",
        order,
        tour_cost(&sr, &order),
        tour_cost(&tc, &order)
    );

    let c = cycle(8);
    let compact = tc_reduce_with(&c, Precision::Compact).expect("connected");
    let around: Vec<usize> = (0..8).collect();
    let skipping = [0, 2, 4, 6, 1, 3, 5, 7];
    println!("C8 with 16-bit cells ({:?})", compact.precision());
    println!("  around the cycle: cost {}", tour_cost(&compact, &around));
    println!("  skipping order:   cost {}", tour_cost(&compact, &skipping));
    print!("{}", compact.to_tsplib("c8"));
}
