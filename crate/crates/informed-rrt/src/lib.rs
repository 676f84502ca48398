//! Anytime asymptotically optimal sampling-based motion planning with
//! direct sampling of the informed set.
//!
//! Once a planner such as RRT* holds a solution of cost `c`, only states
//! whose heuristic path cost through them is below `c` can improve it.
//! For path length in R^n that informed set is a prolate hyperspheroid
//! with the start and goal as foci. This crate provides:
//!
//! - closed-form measures and direct uniform sampling of prolate
//!   hyperspheroids ([`phs`]),
//! - informed sampling over single goals and goal sets, with graceful
//!   fallback to rejection or plain domain sampling ([`sampling`]),
//! - axis-aligned box worlds, a toy single-obstacle benchmark family and
//!   a lattice "grid" family ([`world`]),
//! - RRT* with the variant toggles used to study informed planning:
//!   graph pruning, heuristic sample rejection and informed sampling
//!   ([`planner`]),
//! - convergence-rate bounds and the empirical rate experiment that
//!   exercises them ([`analysis`]),
//! - a benchmark harness with CSV output and a deterministic replay mode
//!   ([`bench`]).
//!
//! States are dynamically sized column vectors ([`State`]); every public
//! entry point validates dimensions and finiteness at the boundary.

pub mod analysis;
pub mod bench;
pub mod error;
pub mod phs;
pub mod planner;
pub mod rng;
pub mod sampling;
pub mod stats;
pub mod tree;
pub mod world;

pub use error::{Error, Result};
pub use rng::RngStream;

/// Planning state: a point in R^n.
pub type State = nalgebra::DVector<f64>;

/// Builds a [`State`] from a coordinate slice.
pub fn state(coords: &[f64]) -> State {
    State::from_column_slice(coords)
}

/// Relative floor below which a spheroid's transverse extent is treated
/// as degenerate: construction requires `c - c_min >= DEGENERACY_FLOOR * c_min`.
pub const DEGENERACY_FLOOR: f64 = 1e-12;

/// Euclidean distance within which a vertex counts as lying on a goal.
pub const GOAL_EPSILON: f64 = 1e-9;

/// Attempt cap for rejection-style sampling loops.
pub const RETRY_CAP: u64 = 1_000_000;

pub(crate) fn check_finite(x: &State, what: &str) -> Result<()> {
    if x.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite(what.to_string()))
    }
}

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
