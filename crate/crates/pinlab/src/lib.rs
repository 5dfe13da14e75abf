//! Simulation and analysis toolkit for pairwise interaction network (PIN)
//! models.
//!
//! A PIN model is a discrete-time Markov chain over per-agent states on a
//! directed graph: at every tick a single agent updates, either by an
//! individual mutation (probability `1 - rho`, kernel `P`) or by a pairwise
//! interaction along a uniformly sampled link (probability `rho`, kernel
//! `phi(l)` where `l` is the neighbor's state). The class covers the SIS and
//! SIRS epidemic models, the noisy voter and anti-voter models, and
//! best-response dynamics from evolutionary game theory.
//!
//! The crate provides:
//!
//! - [`graph`]: graph generators (complete, Erdős–Rényi, star, single link),
//!   boundary statistics, and the total mixing gap of a graph;
//! - [`model`]: validated model parameters and built-in model constructors;
//! - [`engine`]: exact simulation of the chain with O(degree) incremental
//!   bookkeeping and reproducible seeded runs;
//! - [`drift`]: mean drift, limit drift, drift discrepancy bounds, and a
//!   fixed-step mean-field ODE integrator;
//! - [`lyapunov`]: Lyapunov certificates for forgetful, binary, and SIRS
//!   models, with the constants used by the concentration bound;
//! - [`concentration`]: the stationary-mass lower bound and the experiment
//!   harness (event-mass estimation, population and noise sweeps).
//!
//! With the default `parallel` feature, enumeration and replica runs are
//! distributed over a rayon thread pool; results are merged in a fixed order
//! so output does not depend on thread count. Building with
//! `--no-default-features` selects the sequential fallback.

pub mod concentration;
pub mod drift;
pub mod engine;
pub mod graph;
pub mod lyapunov;
pub mod model;
mod par;
pub mod seeds;

pub use graph::Graph;
pub use model::PinParams;
