//! Single-vehicle tours.

mod cvrp;
mod minor_free;
mod preemptive;
mod stacker;
mod tour;
mod tsp;

pub use cvrp::{
    cvrp_bounded_delay, cvrp_collect, cvrp_length_bound, select_checkpoints, CheckpointSet, CvrpItem,
    CvrpSolution,
};
pub use minor_free::{preemptive_tour_minor_free, MinorFreeConfig, MinorFreeTour};
pub use preemptive::{preemptive_tour, single_tour_lb, PreemptiveConfig, PreemptiveTour, TourError};
pub use stacker::{stacker_crane, Job};
pub use tour::{Leg, SingleTour, Stop, TourDemand};
pub use tsp::{tsp_tour, Tour};
