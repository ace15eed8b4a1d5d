//! Min-fill tree decompositions and the exact DP on small-width graphs.

use std::time::{Duration, Instant};

use hcma::decomposition::{dp_hamiltonian, min_fill_decomposition, DpOutcome, NiceDecomposition};
use hcma::generate::{complete, cycle, disjoint_union, petersen};
use hcma::graph::{verify_hc, Graph};

fn grid(w: usize, h: usize) -> Graph {
    let id = |x: usize, y: usize| y * w + x;
    let mut edges = Vec::new();
    for y in 0..h {
        for x in 0..w {
            if x + 1 < w {
                edges.push((id(x, y), id(x + 1, y)));
            }
            if y + 1 < h {
                edges.push((id(x, y), id(x, y + 1)));
            }
        }
    }
    Graph::from_edges(w * h, edges).expect("valid grid")
}

fn main() {
    let cases = [
        ("C12", cycle(12)),
        ("K5", complete(5)),
        ("Petersen", petersen()),
        ("grid 4x6", grid(4, 6)),
        ("grid 5x5", grid(5, 5)),
        ("two triangles", disjoint_union(&cycle(3), &cycle(3))),
    ];
    for (name, g) in cases {
        let td = match min_fill_decomposition(&g, 10) {
            Ok(td) => td,
            Err(e) => {
                println!("{name}: {e}");
                continue;
            }
        };
        td.validate(&g).expect("min-fill output is a valid decomposition");
        let nice = NiceDecomposition::from_tree(&g, &td);
        let start = Instant::now();
        let outcome = dp_hamiltonian(&g, &td, Instant::now() + Duration::from_secs(5));
        let verdict = match &outcome {
            DpOutcome::Found(c) => {
                assert!(verify_hc(&g, c));
                format!("cycle {:?}", c.order())
            }
            DpOutcome::NoCycle => "no Hamiltonian cycle".to_string(),
            DpOutcome::Timeout => "timed out".to_string(),
        };
        println!(
            "{name}: width {}, {} bags, {} nice nodes, {verdict} in {:.2?}",
            td.width(),
            td.bags().len(),
            nice.nodes().len(),
            start.elapsed()
        );
    }
    println!("\nPACE output for the 4x6 grid:");
    let g = grid(4, 6);
    print!("{}", min_fill_decomposition(&g, 10).expect("small width").to_pace(g.n()));
}
