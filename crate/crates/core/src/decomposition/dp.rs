//! Bottom-up Hamiltonicity DP over a nice tree decomposition.
//!
//! A state describes how the edges chosen so far meet the current bag.
//! Each bag slot holds a 5-bit code: 0 for a vertex with no chosen edge,
//! 1 for a vertex with two, and `2 + p` for a path endpoint whose other
//! endpoint sits in slot `p` (every path endpoint is still in the bag,
//! since forgotten vertices must have degree 2). One extra bit records
//! that the chosen edges already close a cycle; then every bag vertex has
//! degree 2 and nothing more may be added.

use std::collections::HashMap;
use std::time::Instant;

use super::{NiceDecomposition, NiceNode, TreeDecomposition};
use crate::graph::{CycleCandidate, Graph};

/// Largest decomposition width the state encoding supports.
pub const MAX_DP_WIDTH: usize = 24;

const SLOT_BITS: usize = 5;
const SLOT_MASK: u128 = (1 << SLOT_BITS) - 1;
const CLOSED: u128 = 1 << 127;

const DEG0: u8 = 0;
const DEG2: u8 = 1;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DpOutcome {
    /// A Hamiltonian cycle, checked against the graph.
    Found(CycleCandidate),
    /// The graph has no Hamiltonian cycle.
    NoCycle,
    /// The deadline passed before the DP finished.
    Timeout,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
struct State(u128);

impl State {
    #[inline]
    fn slot(self, i: usize) -> u8 {
        ((self.0 >> (i * SLOT_BITS)) & SLOT_MASK) as u8
    }

    #[inline]
    fn with_slot(self, i: usize, code: u8) -> State {
        let shift = i * SLOT_BITS;
        State((self.0 & !(SLOT_MASK << shift)) | ((code as u128) << shift))
    }

    fn closed(self) -> bool {
        self.0 & CLOSED != 0
    }

    fn close(self) -> State {
        State(self.0 | CLOSED)
    }

    fn degree(self, i: usize) -> u8 {
        match self.slot(i) {
            DEG0 => 0,
            DEG2 => 2,
            _ => 1,
        }
    }

    fn partner(self, i: usize) -> Option<usize> {
        let c = self.slot(i);
        (c >= 2).then(|| (c - 2) as usize)
    }
}

/// Re-indexes slots: `map[i]` is the new index of old slot `i`, or `None`
/// when the slot disappears (it must hold degree 2 then).
fn remap(s: State, len: usize, map: impl Fn(usize) -> Option<usize>) -> State {
    let mut out = State(s.0 & CLOSED);
    for i in 0..len {
        let Some(j) = map(i) else { continue };
        let code = match s.partner(i) {
            Some(p) => 2 + map(p).expect("partner stays in bag") as u8,
            None => s.slot(i),
        };
        out = out.with_slot(j, code);
    }
    out
}

/// How a state was reached, for reconstruction. Indices refer to the
/// state lists of the child node(s).
#[derive(Clone, Copy, Debug)]
enum Back {
    Leaf,
    From(u32),
    UsedEdge(u32),
    Join(u32, u32),
}

#[derive(Default)]
struct Table {
    states: Vec<State>,
    back: Vec<Back>,
    index: HashMap<State, u32>,
}

impl Table {
    fn add(&mut self, s: State, b: Back) {
        if let std::collections::hash_map::Entry::Vacant(e) = self.index.entry(s) {
            e.insert(self.states.len() as u32);
            self.states.push(s);
            self.back.push(b);
        }
    }
}

/// Uses edge between slots `a` and `b`, if allowed.
fn use_edge(s: State, len: usize, a: usize, b: usize) -> Option<State> {
    if s.closed() || s.degree(a) == 2 || s.degree(b) == 2 {
        return None;
    }
    if s.partner(a) == Some(b) {
        // closing a path into a cycle: only when it covers the whole bag
        let others_full = (0..len).all(|i| i == a || i == b || s.degree(i) == 2);
        return others_full.then(|| s.with_slot(a, DEG2).with_slot(b, DEG2).close());
    }
    let end_a = s.partner(a).unwrap_or(a);
    let end_b = s.partner(b).unwrap_or(b);
    let mut out = s;
    if s.degree(a) == 1 {
        out = out.with_slot(a, DEG2);
    }
    if s.degree(b) == 1 {
        out = out.with_slot(b, DEG2);
    }
    Some(out.with_slot(end_a, 2 + end_b as u8).with_slot(end_b, 2 + end_a as u8))
}

/// Union of two path systems over the same bag, if it is still a valid
/// partial solution.
fn join(l: State, r: State, len: usize) -> Option<State> {
    if l.closed() || r.closed() {
        let (c, other) = if l.closed() { (l, r) } else { (r, l) };
        return (!other.closed() && (0..len).all(|i| other.slot(i) == DEG0)).then_some(c);
    }
    let mut degree = [0u8; MAX_DP_WIDTH + 1];
    // path systems as virtual edges between endpoint slots
    let mut adj = [[usize::MAX; 2]; MAX_DP_WIDTH + 1];
    let mut vdeg = [0usize; MAX_DP_WIDTH + 1];
    for i in 0..len {
        degree[i] = l.degree(i) + r.degree(i);
        if degree[i] > 2 {
            return None;
        }
        for s in [l, r] {
            if let Some(p) = s.partner(i) {
                adj[i][vdeg[i]] = p;
                vdeg[i] += 1;
            }
        }
    }
    let mut out = State(0);
    let mut seen = [false; MAX_DP_WIDTH + 1];
    for i in 0..len {
        out = out.with_slot(
            i,
            match degree[i] {
                0 => DEG0,
                _ => DEG2,
            },
        );
    }
    for start in 0..len {
        if vdeg[start] != 1 || seen[start] {
            continue;
        }
        let mut prev = usize::MAX;
        let mut cur = start;
        seen[cur] = true;
        loop {
            let next = if adj[cur][0] != prev || vdeg[cur] == 1 {
                adj[cur][0]
            } else {
                adj[cur][1]
            };
            if vdeg[cur] == 1 && cur != start {
                break;
            }
            prev = cur;
            cur = next;
            seen[cur] = true;
        }
        out = out.with_slot(start, 2 + cur as u8).with_slot(cur, 2 + start as u8);
    }
    let cyclic: Vec<usize> = (0..len).filter(|&i| vdeg[i] == 2 && !seen[i]).collect();
    if cyclic.is_empty() {
        return Some(out);
    }
    // a cycle is only allowed as the final, single cycle through all slots
    if (0..len).any(|i| degree[i] != 2) {
        return None;
    }
    let mut stack = vec![cyclic[0]];
    seen[cyclic[0]] = true;
    while let Some(v) = stack.pop() {
        for &w in &adj[v][..vdeg[v]] {
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    cyclic.iter().all(|&i| seen[i]).then(|| out.close())
}

/// Decides Hamiltonicity of `g` with the DP over `td`. Stops with
/// [`DpOutcome::Timeout`] once `deadline` passes.
pub fn dp_hamiltonian(g: &Graph, td: &TreeDecomposition, deadline: Instant) -> DpOutcome {
    assert!(td.width() <= MAX_DP_WIDTH, "width {} above DP limit", td.width());
    if g.n() < 3 {
        return DpOutcome::NoCycle;
    }
    let nice = NiceDecomposition::from_tree(g, td);
    let nodes = nice.nodes();
    let mut tables: Vec<Table> = Vec::with_capacity(nodes.len());
    let mut work = 0usize;
    for (i, node) in nodes.iter().enumerate() {
        let mut t = Table::default();
        match *node {
            NiceNode::Leaf => t.add(State(0), Back::Leaf),
            NiceNode::Introduce { vertex, child } => {
                let k = nice.bag(i).binary_search(&vertex).expect("introduced vertex in bag");
                let old_len = nice.bag(child).len();
                for (idx, &s) in tables[child].states.iter().enumerate() {
                    if s.closed() {
                        continue;
                    }
                    let shifted = remap(s, old_len, |j| Some(if j >= k { j + 1 } else { j }));
                    t.add(shifted.with_slot(k, DEG0), Back::From(idx as u32));
                }
            }
            NiceNode::Forget { vertex, child } => {
                let bag = nice.bag(child);
                let k = bag.binary_search(&vertex).expect("forgotten vertex in bag");
                for (idx, &s) in tables[child].states.iter().enumerate() {
                    if s.degree(k) != 2 {
                        continue;
                    }
                    let shifted = remap(s, bag.len(), |j| match j.cmp(&k) {
                        std::cmp::Ordering::Less => Some(j),
                        std::cmp::Ordering::Equal => None,
                        std::cmp::Ordering::Greater => Some(j - 1),
                    });
                    t.add(shifted, Back::From(idx as u32));
                }
            }
            NiceNode::IntroduceEdge { u, v, child } => {
                let bag = nice.bag(i);
                let a = bag.binary_search(&u).expect("edge endpoint in bag");
                let b = bag.binary_search(&v).expect("edge endpoint in bag");
                for (idx, &s) in tables[child].states.iter().enumerate() {
                    t.add(s, Back::From(idx as u32));
                    if let Some(next) = use_edge(s, bag.len(), a, b) {
                        t.add(next, Back::UsedEdge(idx as u32));
                    }
                }
            }
            NiceNode::Join { left, right } => {
                let len = nice.bag(i).len();
                let (ls, rs) = (&tables[left].states, &tables[right].states);
                for (li, &l) in ls.iter().enumerate() {
                    for (ri, &r) in rs.iter().enumerate() {
                        if let Some(s) = join(l, r, len) {
                            t.add(s, Back::Join(li as u32, ri as u32));
                        }
                    }
                    work += rs.len();
                    if work > 1 << 16 {
                        work = 0;
                        if Instant::now() > deadline {
                            return DpOutcome::Timeout;
                        }
                    }
                }
            }
        }
        work += t.states.len();
        if work > 1 << 16 || i % 64 == 0 {
            work = 0;
            if Instant::now() > deadline {
                return DpOutcome::Timeout;
            }
        }
        tables.push(t);
    }

    let root = nice.root();
    let Some(&idx) = tables[root].index.get(&State(CLOSED)) else {
        return DpOutcome::NoCycle;
    };
    let edges = reconstruct(&nice, &tables, root, idx);
    let order = cycle_from_edges(g.n(), &edges);
    let cand = CycleCandidate::new(order).expect("reconstructed order is a permutation");
    assert!(crate::graph::verify_hc(g, &cand), "DP produced an invalid cycle");
    DpOutcome::Found(cand)
}

fn reconstruct(nice: &NiceDecomposition, tables: &[Table], root: usize, idx: u32) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    let mut stack = vec![(root, idx)];
    while let Some((node, idx)) = stack.pop() {
        let back = tables[node].back[idx as usize];
        match (nice.nodes()[node], back) {
            (_, Back::Leaf) => {}
            (NiceNode::Join { left, right }, Back::Join(a, b)) => {
                stack.push((left, a));
                stack.push((right, b));
            }
            (NiceNode::IntroduceEdge { u, v, child }, Back::UsedEdge(c)) => {
                edges.push((u, v));
                stack.push((child, c));
            }
            (
                NiceNode::Introduce { child, .. }
                | NiceNode::Forget { child, .. }
                | NiceNode::IntroduceEdge { child, .. },
                Back::From(c),
            ) => stack.push((child, c)),
            other => unreachable!("inconsistent backpointer {other:?}"),
        }
    }
    edges
}

fn cycle_from_edges(n: usize, edges: &[(usize, usize)]) -> Vec<usize> {
    let mut adj = vec![Vec::with_capacity(2); n];
    for &(u, v) in edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    let mut order = Vec::with_capacity(n);
    let mut prev = usize::MAX;
    let mut cur = 0;
    for _ in 0..n {
        order.push(cur);
        let next = if adj[cur][0] != prev { adj[cur][0] } else { adj[cur][1] };
        prev = cur;
        cur = next;
    }
    order
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomposition::min_fill_decomposition;
    use crate::generate;
    use std::time::Duration;

    fn far() -> Instant {
        Instant::now() + Duration::from_secs(60)
    }

    fn run(g: &Graph) -> DpOutcome {
        let td = min_fill_decomposition(g, MAX_DP_WIDTH).unwrap();
        dp_hamiltonian(g, &td, far())
    }

    #[test]
    fn state_codes() {
        let s = State(0).with_slot(0, 2 + 3).with_slot(3, 2).with_slot(1, DEG2);
        assert_eq!(s.partner(0), Some(3));
        assert_eq!(s.partner(3), Some(0));
        assert_eq!(s.degree(1), 2);
        assert_eq!(s.degree(2), 0);
        assert!(!s.closed());
        assert!(s.close().closed());
    }

    #[test]
    fn edge_use_merges_paths() {
        // slots 0-1 path, slot 2 isolated: using (1, 2) gives path 0..2
        let s = State(0).with_slot(0, 3).with_slot(1, 2);
        let t = use_edge(s, 3, 1, 2).unwrap();
        assert_eq!(t.partner(0), Some(2));
        assert_eq!(t.partner(2), Some(0));
        assert_eq!(t.degree(1), 2);
        // closing with slot 2 still empty is premature
        assert_eq!(use_edge(s, 3, 0, 1), None);
    }

    #[test]
    fn join_rejects_double_cycles_and_overfull_slots() {
        let path01 = State(0).with_slot(0, 3).with_slot(1, 2);
        // two parallel 0-1 paths close into a cycle over a 2-slot bag
        assert_eq!(join(path01, path01, 2), Some(State(0).with_slot(0, DEG2).with_slot(1, DEG2).close()));
        // but not when a third slot is left uncovered
        assert_eq!(join(path01, path01, 3), None);
        let full = State(0).with_slot(0, DEG2);
        assert_eq!(join(full, path01, 2), None);
    }

    #[test]
    fn small_examples() {
        match run(&generate::cycle(6)) {
            DpOutcome::Found(c) => assert_eq!(c.len(), 6),
            other => panic!("{other:?}"),
        }
        assert_eq!(run(&generate::petersen()), DpOutcome::NoCycle);
        assert!(matches!(run(&generate::complete(4)), DpOutcome::Found(_)));
        assert_eq!(run(&generate::path(5)), DpOutcome::NoCycle);
        assert_eq!(run(&generate::complete(2)), DpOutcome::NoCycle);
        assert!(matches!(run(&generate::complete(3)), DpOutcome::Found(_)));
    }

    #[test]
    fn deadline_in_the_past_times_out() {
        let g = generate::cycle(200);
        let td = min_fill_decomposition(&g, 4).unwrap();
        assert_eq!(dp_hamiltonian(&g, &td, Instant::now() - Duration::from_millis(1)), DpOutcome::Timeout);
    }
}
