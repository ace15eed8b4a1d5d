use super::TreeDecomposition;
use crate::graph::Graph;

/// One node of a nice decomposition. Children always precede their parent
/// in [`NiceDecomposition::nodes`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NiceNode {
    /// Empty bag.
    Leaf,
    /// Child bag plus `vertex`.
    Introduce { vertex: usize, child: usize },
    /// Same bag as the child; the edge `(u, v)` becomes available.
    IntroduceEdge { u: usize, v: usize, child: usize },
    /// Child bag minus `vertex`.
    Forget { vertex: usize, child: usize },
    /// Two children with the same bag.
    Join { left: usize, right: usize },
}

/// Nice form of a tree decomposition. Every graph edge is introduced
/// exactly once, just before the first of its endpoints is forgotten, and
/// the root bag is empty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NiceDecomposition {
    nodes: Vec<NiceNode>,
    bags: Vec<Vec<usize>>,
}

struct Builder<'a> {
    g: &'a Graph,
    nodes: Vec<NiceNode>,
    bags: Vec<Vec<usize>>,
}

impl Builder<'_> {
    fn push(&mut self, node: NiceNode, bag: Vec<usize>) -> usize {
        self.nodes.push(node);
        self.bags.push(bag);
        self.nodes.len() - 1
    }

    fn introduce(&mut self, mut at: usize, vertex: usize) -> usize {
        let mut bag = self.bags[at].clone();
        let pos = bag.binary_search(&vertex).expect_err("vertex already in bag");
        bag.insert(pos, vertex);
        at = self.push(NiceNode::Introduce { vertex, child: at }, bag);
        at
    }

    /// Introduces every edge from `vertex` to the rest of the bag, then
    /// forgets `vertex`.
    fn forget(&mut self, mut at: usize, vertex: usize) -> usize {
        let bag = self.bags[at].clone();
        for &w in &bag {
            if w != vertex && self.g.has_edge(vertex, w) {
                at = self.push(
                    NiceNode::IntroduceEdge {
                        u: vertex,
                        v: w,
                        child: at,
                    },
                    bag.clone(),
                );
            }
        }
        let mut smaller = bag;
        let pos = smaller.binary_search(&vertex).expect("vertex in bag");
        smaller.remove(pos);
        self.push(NiceNode::Forget { vertex, child: at }, smaller)
    }

    /// Chain of forgets and introduces turning node `at`'s bag into `target`.
    fn morph(&mut self, mut at: usize, target: &[usize]) -> usize {
        let current = self.bags[at].clone();
        for &v in &current {
            if target.binary_search(&v).is_err() {
                at = self.forget(at, v);
            }
        }
        for &v in target {
            if current.binary_search(&v).is_err() {
                at = self.introduce(at, v);
            }
        }
        at
    }
}

impl NiceDecomposition {
    pub fn from_tree(g: &Graph, td: &TreeDecomposition) -> Self {
        let k = td.bags().len();
        let mut kids = vec![Vec::new(); k];
        for (c, p) in td.tree_edges() {
            kids[p].push(c);
        }
        let mut b = Builder {
            g,
            nodes: Vec::new(),
            bags: Vec::new(),
        };
        // iterative post-order over the original tree
        let root = td.root();
        let mut built: Vec<usize> = vec![usize::MAX; k];
        let mut stack = vec![(root, false)];
        while let Some((t, expanded)) = stack.pop() {
            if !expanded {
                stack.push((t, true));
                for &c in &kids[t] {
                    stack.push((c, false));
                }
                continue;
            }
            let target = &td.bags()[t];
            let mut branches: Vec<usize> = kids[t]
                .iter()
                .map(|&c| b.morph(built[c], target))
                .collect();
            if branches.is_empty() {
                let leaf = b.push(NiceNode::Leaf, Vec::new());
                branches.push(b.morph(leaf, target));
            }
            let mut acc = branches[0];
            for &other in &branches[1..] {
                acc = b.push(
                    NiceNode::Join {
                        left: acc,
                        right: other,
                    },
                    target.clone(),
                );
            }
            built[t] = acc;
        }
        b.morph(built[root], &[]);
        NiceDecomposition {
            nodes: b.nodes,
            bags: b.bags,
        }
    }

    pub fn nodes(&self) -> &[NiceNode] {
        &self.nodes
    }

    /// Sorted bag of node `i`.
    pub fn bag(&self, i: usize) -> &[usize] {
        &self.bags[i]
    }

    pub fn root(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn width(&self) -> usize {
        self.bags.iter().map(Vec::len).max().unwrap_or(1).saturating_sub(1)
    }

    /// Structural check of every node against its children's bags, plus
    /// each edge of `g` being introduced exactly once.
    pub fn check(&self, g: &Graph) -> bool {
        let mut introduced = std::collections::BTreeSet::new();
        for (i, node) in self.nodes.iter().enumerate() {
            let bag = &self.bags[i];
            let ok = match *node {
                NiceNode::Leaf => bag.is_empty(),
                NiceNode::Introduce { vertex, child } => {
                    child < i && {
                        let mut c = self.bags[child].clone();
                        c.push(vertex);
                        c.sort_unstable();
                        !self.bags[child].contains(&vertex) && &c == bag
                    }
                }
                NiceNode::IntroduceEdge { u, v, child } => {
                    child < i
                        && &self.bags[child] == bag
                        && bag.contains(&u)
                        && bag.contains(&v)
                        && g.has_edge(u, v)
                        && introduced.insert((u.min(v), u.max(v)))
                }
                NiceNode::Forget { vertex, child } => {
                    child < i && {
                        let c: Vec<usize> = self.bags[child].iter().copied().filter(|&x| x != vertex).collect();
                        self.bags[child].contains(&vertex) && &c == bag
                    }
                }
                NiceNode::Join { left, right } => {
                    left < i && right < i && &self.bags[left] == bag && &self.bags[right] == bag
                }
            };
            if !ok {
                return false;
            }
        }
        introduced.len() == g.edge_count() && self.bags[self.root()].is_empty()
    }
}
