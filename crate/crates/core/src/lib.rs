//! Approximation algorithms for preemptive multi-vehicle Dial-a-Ride with a
//! makespan objective.
//!
//! The crate is organised bottom-up:
//!
//! * [`model`] holds metrics, instances, schedules and the feasibility validator.
//! * [`lower_bounds`] computes the lower bounds every solver is measured against,
//!   including a nurse-station-location heuristic and its exact desk-scale oracle.
//! * [`structures`] provides tree embeddings, sparse spanners and cluster covers.
//! * [`single`] contains single-vehicle tours: TSP, CVRP with bounded delay,
//!   1-preemptive tours and a stacker-crane routine.
//! * [`multi`] contains the multi-vehicle solvers built on top of those.

pub mod lower_bounds;
pub mod matching;
pub mod model;
pub mod multi;
pub mod rng;
pub mod single;
pub mod structures;

pub use model::{
    makespan, metric_from_graph, validate, Action, Demand, Instance, Metric, ModelError,
    Position, Schedule, Time, ValidationReport, Violation, WeightedGraph,
};
