//! Order graphs, their type invariants, normalisation and divisor trees.

pub mod divisor;
pub mod graph;
pub mod gtype;
pub mod normalise;

pub use divisor::{check_mup_zero_structure, generate_order_tree, CheckOutcome, DivisorNode, DivisorTree, Rejection, RootedTree};
pub use graph::{hecke_graph, Edge, OrderGraph, Vertex};
pub use gtype::{compute_type, GroupType};
pub use normalise::normalise;
