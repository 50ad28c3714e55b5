//! Runs solvers over instance suites, validates every schedule and tabulates
//! makespans against the lower bound and, where available, the exact optimum.

use crate::oracle::{oracle_makespan, within_limits};
use daride_core::lower_bounds::lb_max;
use daride_core::multi::{cap_solve, uncap_solve, uncap_solve_minor_free, weighted_solve, SolveError, SolveTrace, SolverConfig};
use daride_core::{validate, Instance, Schedule, Time, Violation};
use rayon::prelude::*;
use std::fmt::Write as _;
use std::time::{Duration, Instant};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Algorithm {
    Uncap,
    UncapMinorFree,
    Cap,
    Weighted,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [Algorithm::Uncap, Algorithm::UncapMinorFree, Algorithm::Cap, Algorithm::Weighted];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Uncap => "uncap",
            Algorithm::UncapMinorFree => "uncap-mf",
            Algorithm::Cap => "cap",
            Algorithm::Weighted => "weighted",
        }
    }

    /// Why the algorithm cannot run on `inst`, if it cannot.
    pub fn unsupported(self, inst: &Instance) -> Option<&'static str> {
        let uncapacitated = inst.capacity >= inst.total_weight();
        match self {
            Algorithm::Uncap if !uncapacitated => Some("capacity below total weight"),
            Algorithm::UncapMinorFree if !uncapacitated => Some("capacity below total weight"),
            Algorithm::UncapMinorFree if inst.graph.is_none() => Some("instance has no underlying graph"),
            _ => None,
        }
    }

    pub fn run(self, inst: &Instance, cfg: &SolverConfig) -> Result<(Schedule, SolveTrace), SolveError> {
        match self {
            Algorithm::Uncap => uncap_solve(inst),
            Algorithm::UncapMinorFree => uncap_solve_minor_free(inst, cfg.r),
            Algorithm::Cap => cap_solve(inst, cfg),
            Algorithm::Weighted => weighted_solve(inst, cfg),
        }
    }
}

impl std::str::FromStr for Algorithm {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Algorithm::ALL.into_iter().find(|a| a.name() == s).ok_or_else(|| format!("unknown algorithm `{s}`"))
    }
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub id: String,
    pub algorithm: Algorithm,
    pub makespan: Time,
    pub lb_max: Time,
    /// `makespan / lb_max`; 1 when both are zero.
    pub ratio: Time,
    pub oracle: Option<Time>,
    pub runtime: Duration,
}

#[derive(Debug, Clone, Default)]
pub struct BenchConfig {
    pub solver: SolverConfig,
    /// Compute the exact optimum for instances within the oracle's limits.
    pub oracle: bool,
}

#[derive(Debug, Clone, thiserror::Error)]
pub enum BenchError {
    #[error("{algorithm} produced an infeasible schedule on {id}: {violations:?}")]
    Infeasible { id: String, algorithm: Algorithm, violations: Vec<Violation> },
    #[error("{algorithm} failed on {id}: {source}")]
    Solve { id: String, algorithm: Algorithm, source: SolveError },
}

fn ratio(makespan: Time, lb: Time) -> Time {
    if lb > Time::from_integer(0) {
        makespan / lb
    } else {
        Time::from_integer(1)
    }
}

/// Runs every supported `(instance, algorithm)` pair. Rows are ordered by
/// instance id, then algorithm. Unsupported pairs produce no row.
pub fn bench(instances: &[(String, Instance)], algorithms: &[Algorithm], cfg: &BenchConfig) -> Result<Vec<BenchRow>, BenchError> {
    let jobs: Vec<(usize, Algorithm)> = instances
        .iter()
        .enumerate()
        .flat_map(|(i, (_, inst))| algorithms.iter().filter(|a| a.unsupported(inst).is_none()).map(move |&a| (i, a)))
        .collect();
    let optima: Vec<Option<Time>> = instances
        .par_iter()
        .map(|(_, inst)| {
            if cfg.oracle && within_limits(inst).is_ok() {
                oracle_makespan(inst).ok().map(|s| s.makespan)
            } else {
                None
            }
        })
        .collect();
    let mut rows = jobs
        .par_iter()
        .map(|&(i, algorithm)| {
            let (id, inst) = &instances[i];
            let start = Instant::now();
            let (schedule, _) = algorithm
                .run(inst, &cfg.solver)
                .map_err(|source| BenchError::Solve { id: id.clone(), algorithm, source })?;
            let runtime = start.elapsed();
            let report = validate(inst, &schedule);
            if !report.feasible {
                return Err(BenchError::Infeasible { id: id.clone(), algorithm, violations: report.violations });
            }
            let lb = lb_max(inst).combined;
            Ok(BenchRow {
                id: id.clone(),
                algorithm,
                makespan: report.makespan,
                lb_max: lb,
                ratio: ratio(report.makespan, lb),
                oracle: optima[i],
                runtime,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    rows.sort_by(|a, b| (&a.id, a.algorithm).cmp(&(&b.id, b.algorithm)));
    Ok(rows)
}

fn decimal(x: Time) -> String {
    format!("{:.4}", *x.numer() as f64 / *x.denom() as f64)
}

/// Tab-separated table with a header line. Runtimes are left out when
/// `timing` is false so that the table is reproducible byte for byte.
pub fn to_tsv(rows: &[BenchRow], timing: bool) -> String {
    let mut out = String::from("id\talgorithm\tmakespan\tlb_max\tratio\toracle");
    if timing {
        out.push_str("\truntime_ms");
    }
    out.push('\n');
    for r in rows {
        let oracle = r.oracle.map_or_else(|| "-".to_string(), |o| o.to_string());
        write!(out, "{}\t{}\t{}\t{}\t{}\t{}", r.id, r.algorithm, r.makespan, r.lb_max, decimal(r.ratio), oracle).unwrap();
        if timing {
            write!(out, "\t{:.3}", r.runtime.as_secs_f64() * 1e3).unwrap();
        }
        out.push('\n');
    }
    out
}

/// JSON array of row objects.
pub fn to_json(rows: &[BenchRow]) -> String {
    let v: Vec<serde_json::Value> = rows
        .iter()
        .map(|r| {
            serde_json::json!({
                "id": r.id,
                "algorithm": r.algorithm.name(),
                "makespan": r.makespan.to_string(),
                "lb_max": r.lb_max.to_string(),
                "ratio": r.ratio.to_string(),
                "oracle": r.oracle.map(|o| o.to_string()),
                "runtime_ms": r.runtime.as_secs_f64() * 1e3,
            })
        })
        .collect();
    serde_json::to_string_pretty(&v).expect("rows serialise")
}
