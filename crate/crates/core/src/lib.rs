//! Variety-seeking jump games on graphs.
//!
//! Agents of `k` types sit on the nodes of a connected graph and may jump to
//! empty nodes. An agent's utility is the number of types other than its own
//! among its neighbours. The crate provides
//!
//! * graph generators, including every special family used by the lower-bound
//!   constructions ([`graph`]),
//! * the game model: utilities, objectives, improving jumps ([`game`]),
//! * improving-response dynamics, exhaustive cycle search and potential audits
//!   ([`dynamics`]),
//! * equilibrium constructors for trees, 2×m cylinders and tori ([`construct`]),
//! * an exhaustive oracle for optima, equilibria and exact price-of-anarchy /
//!   price-of-stability ratios ([`oracle`]),
//! * plain-text instance/assignment files and DOT export ([`io`]).

pub mod construct;
pub mod dynamics;
pub mod error;
pub mod game;
pub mod graph;
pub mod io;
pub mod oracle;
pub mod state;

pub use error::{Error, Result};
pub use game::{Assignment, Instance, Jump, Metrics, TypeId, TypeProfile};
pub use graph::{Graph, NodeId, RoleMap};

/// Default cap on the number of assignments an exhaustive search may visit.
pub const DEFAULT_BUDGET: u64 = 10_000_000;
