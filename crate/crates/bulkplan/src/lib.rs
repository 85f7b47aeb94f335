//! Minimum-cost bandwidth planning for deadline-constrained bulk transfers
//! over overlay VPNs.
//!
//! A set of source nodes stores large data items (tens to hundreds of GB);
//! destination nodes must each receive their requested items within a
//! per-request deadline. Bandwidth is reserved on point-to-point VPNs between
//! sources and destinations, and every VPN carrying traffic pays a setup fee
//! plus a usage fee that grows with the reserved rate. The planner picks, for
//! every request, how to split its required rate across the sources that hold
//! the item so that the total reservation cost is as small as possible while
//! all access-capacity, VPN-capacity and deadline constraints hold.
//!
//! The heuristic serves one request per cycle: a scheduling criterion picks
//! the next request, a min-plus convolution over discretized partial cost
//! functions routes it at minimum incremental cost, and the network state is
//! updated before the next cycle. Independent ground truth (an exhaustive
//! oracle, an analytic optimum for homogeneous instances, and a max-flow
//! feasibility check) lives in [`oracle`].
//!
//! The examples directory is the best map of the crate — one runnable program
//! per capability:
//!
//! | example | shows |
//! |---|---|
//! | `solve_cinema_grid` | homogeneous content-distribution study: optimum vs heuristic across fleet sizes and deadlines |
//! | `route_one_request` | a single min-plus routing step, fast path vs full convolution |
//! | `oracle_check` | exhaustive search vs heuristic on a tiny instance |
//! | `scheduler_benchmark` | Monte-Carlo comparison of scheduling criteria with CDF output |
//! | `scenario_roundtrip` | generate → JSON → validate → solve → plan JSON |
//! | `search_space` | how big brute force would be: log10 configuration-count estimates |
//!
//! Run one with `cargo run -p bulkplan --example solve_cinema_grid`.
//! The same capabilities are scriptable through the thin `bulkplan` binary
//! (`gen | validate | solve | oracle | bench`).

pub mod bench;
pub mod cli;
pub mod io;
pub mod minplus;
pub mod model;
pub mod oracle;
pub mod scenario;
pub mod scheduling;
pub mod solver;

pub use model::{
    check_plan_constraints, fragment_sizes, total_cost, validate_scenario, AllocationPlan,
    CostFunction, Request, Scenario,
};
pub use minplus::{FailurePolicy, NetworkState, SolverConfig};
pub use scheduling::Criterion;
pub use solver::{solve, SolveReport};
