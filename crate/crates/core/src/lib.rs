//! Placing flow monitors on the edges of an undirected network.
//!
//! Given a weighted multigraph carrying an unknown circulation and a budget
//! of `k` monitors, choose monitor edges so that the total weight of edges
//! whose flow becomes known is maximized. An unmonitored edge is known
//! exactly when it is a bridge of the graph minus the monitors.
//!
//! The crate provides the graph primitives ([`graph`]), the reduction to a
//! 3-edge-connected instance ([`reduce`]), greedy and exact solvers
//! ([`solvers`]), kernel-graph instrumentation ([`kernel`]), a circulation
//! simulator with conservation-based inference ([`flowsim`]), exhaustive
//! checks of the Clique reduction ([`hardness`]) and instance generators
//! ([`generators`]).

pub mod combinatorics;
pub mod flowsim;
pub mod generators;
pub mod graph;
pub mod hardness;
pub mod io;
pub mod kernel;
pub mod reduce;
pub mod solvers;
pub mod weight;

pub use graph::{EdgeId, EdgeRecord, EdgeSet, Graph};
pub use weight::Weight;
