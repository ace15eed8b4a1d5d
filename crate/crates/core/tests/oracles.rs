mod common;

use std::time::{Duration, Instant};

use common::{brute_force_hamiltonian, floyd_warshall, graph_from_bits};
use hcma::decomposition::{dp_hamiltonian, min_fill_decomposition, DpOutcome, NiceDecomposition};
use hcma::graph::{verify_hc, Graph};
use hcma::reduction::{sr_reduce, tc_reduce};
use hcma::solver::{solve, SolverConfig};
use proptest::prelude::*;

fn small_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (3..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(proptest::bool::weighted(0.45), n * (n - 1) / 2)
            .prop_map(move |bits| graph_from_bits(n, &bits))
    })
}

fn quick() -> SolverConfig {
    SolverConfig {
        time_limit: Duration::from_secs(20),
        generation_cap: Some(40),
        workers: 1,
        ..SolverConfig::default()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn dp_agrees_with_enumeration(g in small_graph(8)) {
        let td = min_fill_decomposition(&g, g.n()).expect("cap never binds");
        prop_assert!(td.validate(&g).is_ok());
        prop_assert!(NiceDecomposition::from_tree(&g, &td).check(&g));
        let expected = brute_force_hamiltonian(&g);
        match dp_hamiltonian(&g, &td, Instant::now() + Duration::from_secs(30)) {
            DpOutcome::Found(c) => {
                prop_assert!(expected);
                prop_assert!(verify_hc(&g, &c));
            }
            DpOutcome::NoCycle => prop_assert!(!expected),
            DpOutcome::Timeout => prop_assert!(false, "timed out on {} vertices", g.n()),
        }
    }

    #[test]
    fn tc_matches_floyd_warshall(g in small_graph(12)) {
        let fw = floyd_warshall(&g);
        match tc_reduce(&g) {
            Ok(m) => {
                for a in 0..g.n() {
                    for b in 0..g.n() {
                        let want = if a == b { g.n() as u32 + 1 } else { fw[a][b].expect("connected") };
                        prop_assert_eq!(m.get(a, b), want);
                    }
                }
            }
            Err(_) => prop_assert!(fw.iter().flatten().any(Option::is_none)),
        }
    }

    #[test]
    fn sr_is_one_on_edges_two_elsewhere(g in small_graph(10)) {
        let m = sr_reduce(&g);
        for a in 0..g.n() {
            for b in 0..g.n() {
                if a != b {
                    prop_assert_eq!(m.get(a, b), if g.has_edge(a, b) { 1 } else { 2 });
                }
            }
        }
    }

    #[test]
    fn solve_is_exact_on_small_graphs(g in small_graph(9)) {
        let res = solve(&g, "g", &quick()).expect("valid config");
        prop_assert_eq!(res.solved, brute_force_hamiltonian(&g));
        if let Some(c) = &res.cycle {
            prop_assert!(verify_hc(&g, c));
        }
    }

    #[test]
    fn memetic_path_never_reports_a_false_cycle(g in small_graph(9)) {
        let cfg = SolverConfig { dp: false, ..quick() };
        let res = solve(&g, "g", &cfg).expect("valid config");
        if res.solved {
            prop_assert!(brute_force_hamiltonian(&g));
            prop_assert!(verify_hc(&g, res.cycle.as_ref().expect("solved carries a cycle")));
        }
    }
}
