//! Solve-rate sweep over random cubic graphs with a planted Hamiltonian
//! cycle.
//!
//! ```text
//! cargo run --release --example planted_scaling -- [samples] [time_limit_s] [sizes...]
//! ```

use std::time::Duration;

use hcma::generate;
use hcma::solver::{solve, SolverConfig};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    env_logger::init();
    let args: Vec<String> = std::env::args().skip(1).collect();
    let samples: usize = args.first().and_then(|s| s.parse().ok()).unwrap_or(5);
    let limit: u64 = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(300);
    let sizes: Vec<usize> = if args.len() > 2 {
        args[2..].iter().filter_map(|s| s.parse().ok()).collect()
    } else {
        vec![100, 500, 1000]
    };

    for &n in &sizes {
        let mut solved = 0;
        let mut total = Duration::ZERO;
        for i in 0..samples {
            let mut rng = ChaCha8Rng::seed_from_u64(n as u64 * 1000 + i as u64);
            let (g, _) = generate::planted_cubic(n, &mut rng);
            let cfg = SolverConfig {
                seed: i as u64,
                time_limit: Duration::from_secs(limit),
                ..SolverConfig::default()
            };
            let res = solve(&g, &format!("cubic{n}-{i}"), &cfg).expect("valid config");
            total += res.wall_time;
            if res.solved {
                solved += 1;
            }
            println!(
                "n={n} sample={i} solved={} best={} phase={} generations={} time={:.2}s",
                res.solved,
                res.best_cost.map_or(0, |c| c.0),
                res.phase,
                res.generations,
                res.wall_time.as_secs_f64()
            );
        }
        println!(
            "n={n}: {solved}/{samples} solved, mean {:.2}s",
            total.as_secs_f64() / samples as f64
        );
    }
}
