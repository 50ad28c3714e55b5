//! Metrics, instances, schedules and the feasibility validator.

mod instance;
mod metric;
mod schedule;
mod validate;

pub use instance::{Demand, Instance};
pub use metric::{metric_from_graph, Metric, WeightedGraph};
pub use schedule::{Action, Position, Schedule};
pub use validate::{
    makespan, validate, ObjectReport, TimedEvent, ValidationReport, VehicleReport, Violation,
};

use num_rational::Ratio;

/// Exact time and distance values.
pub type Time = Ratio<i128>;

/// Integer time value.
pub fn t(x: i64) -> Time {
    Time::from_integer(x as i128)
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("distance matrix is not square: row {row} has {len} entries, expected {n}")]
    NotSquare { row: usize, len: usize, n: usize },
    #[error("negative distance between {0} and {1}")]
    Negative(usize, usize),
    #[error("nonzero diagonal at {0}")]
    NonzeroDiagonal(usize),
    #[error("asymmetric distance between {0} and {1}")]
    Asymmetric(usize, usize),
    #[error("triangle inequality violated on ({0}, {1}, {2})")]
    Triangle(usize, usize, usize),
    #[error("graph is disconnected: vertex {0} unreachable from 0")]
    Disconnected(usize),
    #[error("invalid edge ({0}, {1}, {2})")]
    BadEdge(usize, usize, i64),
    #[error("vertex {0} out of range")]
    BadVertex(usize),
    #[error("an instance needs at least one vehicle")]
    NoVehicles,
    #[error("capacity must be at least 1")]
    ZeroCapacity,
    #[error("demand {index} has weight {weight}, allowed range is 1..={capacity}")]
    BadWeight { index: usize, weight: u64, capacity: u64 },
}
