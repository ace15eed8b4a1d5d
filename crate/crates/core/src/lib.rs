//! Hamiltonian cycle search on undirected graphs.
//!
//! Small-treewidth graphs go to an exact dynamic program over a tree
//! decomposition. Everything else is reduced to a TSP instance and attacked
//! with a memetic algorithm whose distance matrix is sparsified between
//! generations. Any returned cycle has been checked against the input graph.

pub mod batch;
pub mod decomposition;
pub mod error;
pub mod generate;
pub mod graph;
pub mod local_search;
pub mod population;
pub mod reduction;
pub mod rng;
pub mod solver;
pub mod sparsify;
pub mod tour;
