//! Solve one instance end to end.
//!
//! ```text
//! cargo run --release --example solve_instance -- [file.hcp]
//! ```
//!
//! Without a file, a random cubic graph with 400 vertices and a planted
//! Hamiltonian cycle is used.

use std::time::Duration;

use hcma::generate::planted_cubic;
use hcma::graph::{parse_hcp, verify_hc};
use hcma::solver::{solve, SolverConfig};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    env_logger::init();
    let (g, name) = match std::env::args().nth(1) {
        Some(path) => {
            let text = std::fs::read_to_string(&path).expect("readable instance");
            (parse_hcp(&text).expect("valid HCP file"), path)
        }
        None => {
            let mut rng = ChaCha8Rng::seed_from_u64(42);
            (planted_cubic(400, &mut rng).0, "cubic400".to_string())
        }
    };
    let cfg = SolverConfig {
        time_limit: Duration::from_secs(60),
        ..SolverConfig::default()
    };
    let res = solve(&g, &name, &cfg).expect("valid config");
    println!(
        "{name}: n={} m={} solved={} phase={} generations={} time={:.3}s",
        res.n,
        res.m,
        res.solved,
        res.phase,
        res.generations,
        res.wall_time.as_secs_f64()
    );
    match res.cycle {
        Some(c) => {
            assert!(verify_hc(&g, &c));
            let head: Vec<String> = c.order().iter().take(12).map(|v| (v + 1).to_string()).collect();
            println!("cycle starts {} ...", head.join(" "));
        }
        None => println!("no cycle: {}", res.reason.map(|r| r.to_string()).unwrap_or_default()),
    }
}
