//! Small graph families and random instance generators used by tests,
//! examples and the benchmark harness.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::graph::Graph;

/// The cycle `0 - 1 - ... - (n-1) - 0`.
pub fn cycle(n: usize) -> Graph {
    Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).expect("valid ids")
}

/// The path `0 - 1 - ... - (n-1)`.
pub fn path(n: usize) -> Graph {
    Graph::from_edges(n, (1..n).map(|i| (i - 1, i))).expect("valid ids")
}

pub fn complete(n: usize) -> Graph {
    Graph::from_edges(n, (0..n).flat_map(|u| ((u + 1)..n).map(move |v| (u, v)))).expect("valid ids")
}

/// The Petersen graph: outer 5-cycle 0..5, inner pentagram 5..10.
pub fn petersen() -> Graph {
    let mut edges = Vec::new();
    for i in 0..5 {
        edges.push((i, (i + 1) % 5));
        edges.push((i, i + 5));
        edges.push((5 + i, 5 + (i + 2) % 5));
    }
    Graph::from_edges(10, edges).expect("valid ids")
}

/// Vertex-disjoint union; vertices of `b` are shifted by `a.n()`.
pub fn disjoint_union(a: &Graph, b: &Graph) -> Graph {
    let off = a.n();
    Graph::from_edges(
        a.n() + b.n(),
        a.edges().chain(b.edges().map(|(u, v)| (u + off, v + off))),
    )
    .expect("valid ids")
}

/// A random cubic Hamiltonian graph: a hidden Hamiltonian cycle over a
/// random vertex order plus a random perfect matching on the remaining
/// degree. Returns the graph and the planted cycle. `n` must be even and at
/// least 4.
pub fn planted_cubic<R: Rng + ?Sized>(n: usize, rng: &mut R) -> (Graph, Vec<usize>) {
    assert!(n >= 4 && n % 2 == 0, "planted cubic graphs need even n >= 4");
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut pos = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let adjacent_on_cycle = |u: usize, v: usize| {
        let d = pos[u].abs_diff(pos[v]);
        d == 1 || d == n - 1
    };
    let mut vertices: Vec<usize> = (0..n).collect();
    let matching = loop {
        vertices.shuffle(rng);
        let pairs: Vec<(usize, usize)> = vertices.chunks(2).map(|c| (c[0], c[1])).collect();
        if pairs.iter().all(|&(u, v)| !adjacent_on_cycle(u, v)) {
            break pairs;
        }
    };
    let edges = (0..n)
        .map(|i| (order[i], order[(i + 1) % n]))
        .chain(matching);
    (Graph::from_edges(n, edges).expect("valid ids"), order)
}

/// A random connected graph: a random spanning tree plus each remaining
/// pair independently with probability `p`.
pub fn random_connected<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Graph {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut edges = Vec::new();
    for i in 1..n {
        let parent = order[rng.gen_range(0..i)];
        edges.push((parent, order[i]));
    }
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges).expect("valid ids")
}

/// A random graph with a planted Hamiltonian cycle and extra random chords
/// with probability `p`.
pub fn planted_hamiltonian<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> (Graph, Vec<usize>) {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut edges: Vec<(usize, usize)> = (0..n).map(|i| (order[i], order[(i + 1) % n])).collect();
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    (Graph::from_edges(n, edges).expect("valid ids"), order)
}
