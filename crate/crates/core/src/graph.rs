//! Undirected simple graphs, TSPLIB HCP parsing and the basic graph queries
//! the rest of the solver is built on.
//!
//! Vertices are `0..n` internally; the file format is 1-based and the
//! conversion happens only in [`parse_hcp`] and [`Graph::to_hcp`].

use std::collections::VecDeque;
use std::fmt::Write as _;

use crate::error::{GraphError, ParseError};

/// Hop distance reported for vertices that cannot be reached.
pub const UNREACHABLE: u32 = u32::MAX;

/// An undirected graph without self-loops or parallel edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    adjacency: Vec<Vec<usize>>,
    edge_count: usize,
}

impl Graph {
    /// Builds a graph from an edge list. Duplicate edges collapse to one.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        if n == 0 {
            return Err(GraphError::Empty);
        }
        let mut adjacency = vec![Vec::new(); n];
        for (u, v) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: x, n });
                }
            }
            if u == v {
                continue;
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        let mut edge_count = 0;
        for list in &mut adjacency {
            list.sort_unstable();
            list.dedup();
            edge_count += list.len();
        }
        Ok(Graph {
            adjacency,
            edge_count: edge_count / 2,
        })
    }

    pub fn n(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Sorted neighbor ids of `v`.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn min_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).min().unwrap_or(0)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && self.adjacency[u].binary_search(&v).is_ok()
    }

    /// Every edge once, as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    pub fn is_connected(&self) -> bool {
        self.bfs_distances(0)
            .map(|d| d.iter().all(|&x| x != UNREACHABLE))
            .unwrap_or(false)
    }

    /// Unweighted hop counts from `source`; [`UNREACHABLE`] marks vertices in
    /// other components.
    pub fn bfs_distances(&self, source: usize) -> Result<Vec<u32>, GraphError> {
        let n = self.n();
        if source >= n {
            return Err(GraphError::VertexOutOfRange { vertex: source, n });
        }
        let mut dist = vec![UNREACHABLE; n];
        let mut queue = VecDeque::with_capacity(n);
        dist[source] = 0;
        queue.push_back(source);
        while let Some(u) = queue.pop_front() {
            let next = dist[u] + 1;
            for &v in &self.adjacency[u] {
                if dist[v] == UNREACHABLE {
                    dist[v] = next;
                    queue.push_back(v);
                }
            }
        }
        Ok(dist)
    }

    /// One shortest `a -> b` path, found by BFS expanding neighbors in
    /// ascending id order. `None` when `b` is unreachable.
    pub fn shortest_path(&self, a: usize, b: usize) -> Result<Option<Vec<usize>>, GraphError> {
        let n = self.n();
        for x in [a, b] {
            if x >= n {
                return Err(GraphError::VertexOutOfRange { vertex: x, n });
            }
        }
        if a == b {
            return Ok(Some(vec![a]));
        }
        let mut parent = vec![usize::MAX; n];
        parent[a] = a;
        let mut queue = VecDeque::new();
        queue.push_back(a);
        'search: while let Some(u) = queue.pop_front() {
            for &v in &self.adjacency[u] {
                if parent[v] == usize::MAX {
                    parent[v] = u;
                    if v == b {
                        break 'search;
                    }
                    queue.push_back(v);
                }
            }
        }
        if parent[b] == usize::MAX {
            return Ok(None);
        }
        let mut path = vec![b];
        let mut cur = b;
        while cur != a {
            cur = parent[cur];
            path.push(cur);
        }
        path.reverse();
        Ok(Some(path))
    }

    /// True iff `order` is a permutation of all vertices and consecutive
    /// entries (cyclically) are adjacent.
    pub fn is_hamiltonian_order(&self, order: &[usize]) -> bool {
        let n = self.n();
        if n < 3 || order.len() != n {
            return false;
        }
        let mut seen = vec![false; n];
        for &v in order {
            if v >= n || seen[v] {
                return false;
            }
            seen[v] = true;
        }
        (0..n).all(|i| self.has_edge(order[i], order[(i + 1) % n]))
    }

    /// Vertices whose removal disconnects their component.
    pub fn articulation_points(&self) -> Vec<usize> {
        let n = self.n();
        let mut disc = vec![usize::MAX; n];
        let mut low = vec![0usize; n];
        let mut is_cut = vec![false; n];
        let mut timer = 0;
        for root in 0..n {
            if disc[root] != usize::MAX {
                continue;
            }
            disc[root] = timer;
            low[root] = timer;
            timer += 1;
            let mut root_children = 0;
            // (vertex, parent, next neighbor index)
            let mut stack = vec![(root, usize::MAX, 0usize)];
            while let Some(&mut (u, parent, ref mut idx)) = stack.last_mut() {
                if *idx < self.adjacency[u].len() {
                    let v = self.adjacency[u][*idx];
                    *idx += 1;
                    if disc[v] == usize::MAX {
                        disc[v] = timer;
                        low[v] = timer;
                        timer += 1;
                        if u == root {
                            root_children += 1;
                        }
                        stack.push((v, u, 0));
                    } else if v != parent {
                        low[u] = low[u].min(disc[v]);
                    }
                } else {
                    stack.pop();
                    if parent != usize::MAX {
                        low[parent] = low[parent].min(low[u]);
                        if parent != root && low[u] >= disc[parent] {
                            is_cut[parent] = true;
                        }
                    }
                }
            }
            if root_children > 1 {
                is_cut[root] = true;
            }
        }
        (0..n).filter(|&v| is_cut[v]).collect()
    }

    /// Serializes in TSPLIB HCP edge-list format.
    pub fn to_hcp(&self, name: &str) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "NAME : {name}");
        let _ = writeln!(out, "TYPE : HCP");
        let _ = writeln!(out, "DIMENSION : {}", self.n());
        let _ = writeln!(out, "EDGE_DATA_FORMAT : EDGE_LIST");
        let _ = writeln!(out, "EDGE_DATA_SECTION");
        for (u, v) in self.edges() {
            let _ = writeln!(out, "{} {}", u + 1, v + 1);
        }
        out.push_str("-1\nEOF\n");
        out
    }
}

/// A proposed Hamiltonian cycle: a permutation of `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleCandidate(Vec<usize>);

impl CycleCandidate {
    /// Returns `None` unless `order` is a permutation of `0..order.len()`.
    pub fn new(order: Vec<usize>) -> Option<Self> {
        let n = order.len();
        let mut seen = vec![false; n];
        for &v in &order {
            if v >= n || std::mem::replace(&mut seen[v], true) {
                return None;
            }
        }
        Some(CycleCandidate(order))
    }

    pub fn order(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_inner(self) -> Vec<usize> {
        self.0
    }
}

/// Checks that every consecutive pair of `cycle` (including last to first)
/// is an edge of `g`.
pub fn verify_hc(g: &Graph, cycle: &CycleCandidate) -> bool {
    g.is_hamiltonian_order(cycle.order())
}

/// Ore's condition: every non-adjacent pair has degree sum at least `n`.
/// Always false for `n <= 3`.
pub fn ore_check(g: &Graph) -> bool {
    let n = g.n();
    if n <= 3 {
        return false;
    }
    for a in 0..n {
        for b in (a + 1)..n {
            if !g.has_edge(a, b) && g.degree(a) + g.degree(b) < n {
                return false;
            }
        }
    }
    true
}

/// Dirac's condition: minimum degree at least `n / 2`. Always false for
/// `n <= 3`.
pub fn dirac_check(g: &Graph) -> bool {
    let n = g.n();
    n > 3 && 2 * g.min_degree() >= n
}

/// Parses a TSPLIB HCP file with an `EDGE_LIST` data section.
pub fn parse_hcp(text: &str) -> Result<Graph, ParseError> {
    let mut dimension: Option<usize> = None;
    let mut in_data = false;
    let mut pending: Option<(i64, usize)> = None;
    let mut edges = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if !in_data {
            let (key, value) = match line.split_once(':') {
                Some((k, v)) => (k.trim(), v.trim()),
                None => match line.split_once(char::is_whitespace) {
                    Some((k, v)) => (k.trim(), v.trim()),
                    None => (line, ""),
                },
            };
            match key.to_ascii_uppercase().as_str() {
                "DIMENSION" => {
                    let d = value.parse::<usize>().map_err(|_| ParseError::Malformed {
                        line: line_no,
                        message: format!("bad DIMENSION value {value:?}"),
                    })?;
                    if d == 0 {
                        return Err(ParseError::Malformed {
                            line: line_no,
                            message: "DIMENSION must be positive".into(),
                        });
                    }
                    dimension = Some(d);
                }
                "EDGE_DATA_SECTION" => {
                    if dimension.is_none() {
                        return Err(ParseError::MissingDimension);
                    }
                    in_data = true;
                }
                "EDGE_DATA_FORMAT" => {
                    if !value.eq_ignore_ascii_case("EDGE_LIST") {
                        return Err(ParseError::Malformed {
                            line: line_no,
                            message: format!("unsupported EDGE_DATA_FORMAT {value:?}"),
                        });
                    }
                }
                "EOF" => break,
                _ => {}
            }
            continue;
        }

        if line.eq_ignore_ascii_case("EOF") {
            break;
        }
        let n = dimension.expect("checked on entering the data section");
        let mut finished = false;
        for token in line.split_whitespace() {
            let value: i64 = token.parse().map_err(|_| ParseError::Malformed {
                line: line_no,
                message: format!("expected an integer, found {token:?}"),
            })?;
            if value == -1 {
                if pending.is_some() {
                    return Err(ParseError::Malformed {
                        line: line_no,
                        message: "edge list ends in the middle of a pair".into(),
                    });
                }
                finished = true;
                break;
            }
            if value < 1 || value as u64 > n as u64 {
                return Err(ParseError::VertexOutOfRange {
                    line: line_no,
                    vertex: value,
                    n,
                });
            }
            match pending.take() {
                None => pending = Some((value, line_no)),
                Some((first, _)) => {
                    let (u, v) = (first as usize - 1, value as usize - 1);
                    if u == v {
                        return Err(ParseError::SelfLoop {
                            line: line_no,
                            vertex: u + 1,
                        });
                    }
                    edges.push((u, v));
                }
            }
        }
        if finished {
            break;
        }
    }

    let n = dimension.ok_or(ParseError::MissingDimension)?;
    if let Some((_, line)) = pending {
        return Err(ParseError::Malformed {
            line,
            message: "unpaired vertex id in edge list".into(),
        });
    }
    Ok(Graph::from_edges(n, edges).expect("ids validated during parsing"))
}
