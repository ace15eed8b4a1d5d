//! Independent oracles shared by the integration tests. Nothing here calls
//! into the algorithms under test beyond building `Graph` values.
#![allow(dead_code)]

use hcma::graph::Graph;
use rand::Rng;

/// Exhaustive search over simple paths from vertex 0. Exponential; meant
/// for n <= 10.
pub fn brute_force_hamiltonian(g: &Graph) -> bool {
    let n = g.n();
    if n < 3 {
        return false;
    }
    fn extend(g: &Graph, v: usize, visited: u32, count: usize) -> bool {
        let n = g.n();
        if count == n {
            return g.has_edge(v, 0);
        }
        (0..n).any(|w| visited & (1 << w) == 0 && g.has_edge(v, w) && extend(g, w, visited | (1 << w), count + 1))
    }
    extend(g, 0, 1, 1)
}

/// All-pairs hop distances by Floyd-Warshall; `None` for unreachable pairs.
pub fn floyd_warshall(g: &Graph) -> Vec<Vec<Option<u32>>> {
    let n = g.n();
    let mut d = vec![vec![None; n]; n];
    for (v, row) in d.iter_mut().enumerate() {
        row[v] = Some(0);
    }
    for (u, v) in g.edges() {
        d[u][v] = Some(1);
        d[v][u] = Some(1);
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if let (Some(a), Some(b)) = (d[i][k], d[k][j]) {
                    if d[i][j].is_none_or(|c| a + b < c) {
                        d[i][j] = Some(a + b);
                    }
                }
            }
        }
    }
    d
}

/// Graph whose edge set is picked out of the upper triangle by `bits`.
pub fn graph_from_bits(n: usize, bits: &[bool]) -> Graph {
    let pairs = (0..n).flat_map(|u| ((u + 1)..n).map(move |v| (u, v)));
    Graph::from_edges(n, pairs.zip(bits).filter(|(_, &b)| b).map(|(e, _)| e)).expect("ids in range")
}

/// Erdos-Renyi G(n, p).
pub fn gnp<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Graph {
    let bits: Vec<bool> = (0..n * n.saturating_sub(1) / 2).map(|_| rng.gen_bool(p)).collect();
    graph_from_bits(n, &bits)
}

/// A connected bipartite graph with sides 49 and 51. Unbalanced sides rule
/// out a Hamiltonian cycle, so searches on it never finish early.
pub fn unbalanced_bipartite<R: Rng + ?Sized>(rng: &mut R) -> Graph {
    let (left, right) = (49, 51);
    loop {
        let mut edges = Vec::new();
        for r in 0..right {
            let mut picks: Vec<usize> = Vec::new();
            while picks.len() < 3 {
                let l = rng.gen_range(0..left);
                if !picks.contains(&l) {
                    picks.push(l);
                }
            }
            edges.extend(picks.into_iter().map(|l| (l, left + r)));
        }
        let g = Graph::from_edges(left + right, edges).expect("ids in range");
        if g.is_connected() && g.min_degree() >= 2 {
            return g;
        }
    }
}

pub const C5_HCP: &str = "NAME : c5\nTYPE : HCP\nDIMENSION : 5\nEDGE_DATA_SECTION\n1 2\n2 3\n3 4\n4 5\n5 1\n-1\nEOF\n";
