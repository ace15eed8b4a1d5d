//! HCP to TSP reductions.
//!
//! Both reductions put 1 on every edge of the input graph. The standard
//! reduction puts 2 everywhere else; the transitive-closure reduction puts
//! the hop distance between the endpoints. A tour over either matrix costs
//! exactly `n` iff it is a Hamiltonian cycle of the graph.

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::error::GraphError;
use crate::graph::{Graph, UNREACHABLE};

/// Cell storage width.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Precision {
    /// 32-bit cells.
    #[default]
    Wide,
    /// 16-bit cells; valid while every value (including the `n + 1`
    /// diagonal) fits in `u16`.
    Compact,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Cells {
    Wide(Vec<u32>),
    Compact(Vec<u16>),
}

/// Dense symmetric `n x n` matrix of nonnegative integer distances. The
/// diagonal holds `n + 1` and is never used by tours.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceMatrix {
    n: usize,
    cells: Cells,
}

impl DistanceMatrix {
    /// Builds a matrix from a row-major cell vector, forcing the diagonal.
    fn from_cells(n: usize, mut cells: Vec<u32>, precision: Precision) -> Self {
        debug_assert_eq!(cells.len(), n * n);
        let diag = n as u32 + 1;
        for i in 0..n {
            cells[i * n + i] = diag;
        }
        let cells = match precision {
            Precision::Wide => Cells::Wide(cells),
            Precision::Compact => {
                assert!(n < u16::MAX as usize, "compact matrices need n + 1 <= 65535");
                Cells::Compact(cells.into_iter().map(|c| c as u16).collect())
            }
        };
        DistanceMatrix { n, cells }
    }

    /// A matrix built from an explicit row-major table. The table must be
    /// symmetric; the diagonal is overwritten.
    pub fn from_rows(rows: &[Vec<u32>]) -> Self {
        let n = rows.len();
        let mut cells = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), n, "row {i} has wrong length");
            cells.extend_from_slice(row);
        }
        for a in 0..n {
            for b in 0..a {
                assert_eq!(cells[a * n + b], cells[b * n + a], "matrix not symmetric");
            }
        }
        Self::from_cells(n, cells, Precision::Wide)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn precision(&self) -> Precision {
        match self.cells {
            Cells::Wide(_) => Precision::Wide,
            Cells::Compact(_) => Precision::Compact,
        }
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize) -> u32 {
        let idx = a * self.n + b;
        match &self.cells {
            Cells::Wide(c) => c[idx],
            Cells::Compact(c) => c[idx] as u32,
        }
    }

    /// Writes `value` to both `(a, b)` and `(b, a)`.
    pub fn set(&mut self, a: usize, b: usize, value: u32) {
        debug_assert_ne!(a, b, "diagonal is fixed");
        let n = self.n;
        match &mut self.cells {
            Cells::Wide(c) => {
                c[a * n + b] = value;
                c[b * n + a] = value;
            }
            Cells::Compact(c) => {
                let v = u16::try_from(value).expect("value exceeds compact cell width");
                c[a * n + b] = v;
                c[b * n + a] = v;
            }
        }
    }

    /// Number of unordered pairs holding the value 1.
    pub fn ones_count(&self) -> usize {
        let mut count = 0;
        for a in 0..self.n {
            for b in (a + 1)..self.n {
                if self.get(a, b) == 1 {
                    count += 1;
                }
            }
        }
        count
    }

    /// TSPLIB `EXPLICIT` / `FULL_MATRIX` rendering.
    pub fn to_tsplib(&self, name: &str) -> String {
        let mut out = String::with_capacity(self.n * self.n * 3 + 128);
        let _ = writeln!(out, "NAME : {name}");
        let _ = writeln!(out, "TYPE : TSP");
        let _ = writeln!(out, "DIMENSION : {}", self.n);
        let _ = writeln!(out, "EDGE_WEIGHT_TYPE : EXPLICIT");
        let _ = writeln!(out, "EDGE_WEIGHT_FORMAT : FULL_MATRIX");
        let _ = writeln!(out, "EDGE_WEIGHT_SECTION");
        for a in 0..self.n {
            for b in 0..self.n {
                if b > 0 {
                    out.push(' ');
                }
                let _ = write!(out, "{}", self.get(a, b));
            }
            out.push('\n');
        }
        out.push_str("EOF\n");
        out
    }
}

/// Sum of matrix entries along a cyclic vertex order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct TourCost(pub u64);

impl std::fmt::Display for TourCost {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

/// Standard reduction: 1 on edges, 2 elsewhere.
pub fn sr_reduce(g: &Graph) -> DistanceMatrix {
    sr_reduce_with(g, Precision::Wide)
}

pub fn sr_reduce_with(g: &Graph, precision: Precision) -> DistanceMatrix {
    let n = g.n();
    let mut cells = vec![2u32; n * n];
    for (u, v) in g.edges() {
        cells[u * n + v] = 1;
        cells[v * n + u] = 1;
    }
    DistanceMatrix::from_cells(n, cells, precision)
}

/// Transitive-closure reduction: hop distances, one BFS per row.
pub fn tc_reduce(g: &Graph) -> Result<DistanceMatrix, GraphError> {
    tc_reduce_with(g, Precision::Wide)
}

pub fn tc_reduce_with(g: &Graph, precision: Precision) -> Result<DistanceMatrix, GraphError> {
    let n = g.n();
    let rows: Vec<Vec<u32>> = (0..n)
        .into_par_iter()
        .map(|s| g.bfs_distances(s).expect("source in range"))
        .collect();
    if rows.iter().any(|r| r.contains(&UNREACHABLE)) {
        return Err(GraphError::Disconnected);
    }
    Ok(DistanceMatrix::from_cells(n, rows.concat(), precision))
}

/// Cost of the cyclic order `order` under `m`.
pub fn tour_cost(m: &DistanceMatrix, order: &[usize]) -> TourCost {
    assert_eq!(m.n(), order.len(), "dimension mismatch");
    let n = order.len();
    if n < 2 {
        return TourCost(0);
    }
    let mut total = 0u64;
    for i in 0..n {
        total += m.get(order[i], order[(i + 1) % n]) as u64;
    }
    TourCost(total)
}
