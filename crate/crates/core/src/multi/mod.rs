//! Multi-vehicle solvers.

mod cap;
mod depot_demand;
mod partial;
mod rebalance;
mod uncap;
mod weighted;

pub use cap::{cap_solve, rho_for};
pub use depot_demand::{depot_demand_schedule, DepotDemandPlan, DepotObject};
pub use partial::{partial, PartialOutput, Piece};
pub use rebalance::{max_contracting_set, RebalanceResult};
pub use uncap::{cluster_center_schedule, uncap_solve, uncap_solve_minor_free};
pub use weighted::{heavy_parts, preproc_heavy, weighted_solve, HeavyPair, PreprocOutput};

use crate::lower_bounds::LowerBoundSet;
use crate::model::{ModelError, Time};
use crate::single::PreemptiveConfig;
use crate::structures::SpannerError;

/// Tunables shared by the solvers.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub seed: u64,
    /// Multiplier in `ρ = c_ρ·⌈lg(n+2)⌉·⌈lg(m+2)⌉`.
    pub rho_c: u64,
    /// Excluded minor size for the minor-free solver.
    pub r: usize,
    /// First makespan guess; defaults to the combined lower bound.
    pub bound: Option<Time>,
    /// Number of times the guess may double before giving up.
    pub max_doublings: usize,
    pub tour: PreemptiveConfig,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig { seed: 0, rho_c: 4, r: 5, bound: None, max_doublings: 64, tour: PreemptiveConfig::default() }
    }
}

/// Why a guessed makespan was rejected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum BoundTooSmall {
    #[error("a demand leaves both halves of a split")]
    OrphanDemand,
    #[error("single-vehicle tour longer than the guess allows")]
    TourTooLong,
    #[error("more non-trivial pieces than vehicles")]
    TooManyPieces,
    #[error("recursion deeper than the limit")]
    TooDeep,
    #[error("pieces left to recurse on but no vehicles")]
    NoVehiclesLeft,
    #[error("a demand is longer than the guess")]
    DemandTooLong,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SolveError {
    #[error("no guess up to {0} was accepted")]
    NoFeasibleBound(Time),
    #[error(transparent)]
    Spanner(#[from] SpannerError),
    #[error("instance has no underlying graph")]
    MissingGraph,
    #[error("no cluster holds both endpoints of object {0}")]
    Uncovered(usize),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// One call of the covering routine.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CallRecord {
    pub depth: usize,
    pub vehicles: usize,
    pub demands: usize,
    pub covered: usize,
    /// Objects deferred because a cut crossed one of their rides.
    pub cut: usize,
    pub makespan: Time,
    pub bound: Time,
    /// Guess the call ran under.
    pub guess: Time,
    pub accepted: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveTrace {
    pub guesses: Vec<Time>,
    pub calls: Vec<CallRecord>,
    pub makespan: Time,
    pub lower_bounds: LowerBoundSet,
    /// Measured `makespan / B` of every accepted heavy-pair pass.
    pub preproc_ratio: Vec<Time>,
}

impl SolveTrace {
    pub fn new(lower_bounds: LowerBoundSet) -> Self {
        SolveTrace {
            guesses: Vec::new(),
            calls: Vec::new(),
            makespan: Time::from_integer(0),
            lower_bounds,
            preproc_ratio: Vec::new(),
        }
    }
}

/// `⌈lg x⌉` for `x ≥ 1`.
pub(crate) fn ceil_lg(x: usize) -> usize {
    let mut a = 0;
    while (1usize << a) < x {
        a += 1;
    }
    a
}
