use super::partial::partial;
use super::{ceil_lg, SolveError, SolveTrace, SolverConfig};
use crate::lower_bounds::lb_max;
use crate::model::{makespan, t, Instance, Schedule, Time};
use num_traits::Zero;

/// `c_ρ·⌈lg(n+2)⌉·⌈lg(m+2)⌉`.
pub fn rho_for(inst: &Instance, rho_c: u64) -> u64 {
    rho_c * ceil_lg(inst.n() + 2) as u64 * ceil_lg(inst.m() + 2) as u64
}

/// Calls of the covering routine allowed per guess: `⌈log_{4/3} m⌉ + 1`.
pub(crate) fn iterations(m: usize) -> usize {
    let mut i = 0;
    let mut reach = 1.0f64;
    while reach < m as f64 {
        reach *= 4.0 / 3.0;
        i += 1;
    }
    i + 1
}

/// Capacitated solver: guesses the makespan `B`, starting from the combined
/// lower bound and doubling, and for each guess repeatedly covers the
/// remaining objects. A guess is dropped as soon as a call rejects it or
/// objects remain after the allowed number of calls. Calls run as
/// consecutive round blocks.
pub fn cap_solve(inst: &Instance, cfg: &SolverConfig) -> Result<(Schedule, SolveTrace), SolveError> {
    let lbs = lb_max(inst);
    let mut trace = SolveTrace::new(lbs.clone());
    let all: Vec<usize> = (0..inst.m()).collect();
    if inst.demands.iter().all(|d| d.s == d.t) {
        return Ok((Schedule::new(inst.q()), trace));
    }
    let rho = rho_for(inst, cfg.rho_c);
    let vehicles: Vec<usize> = (0..inst.q()).collect();
    let start = match cfg.bound {
        Some(b) if b > Time::zero() => b,
        _ if lbs.combined > Time::zero() => lbs.combined,
        _ => t(1),
    };
    let mut bound = start;
    for _ in 0..=cfg.max_doublings {
        trace.guesses.push(bound);
        let first_call = trace.calls.len();
        let mut remaining = all.clone();
        let mut schedule = Schedule::new(inst.q());
        for _ in 0..iterations(inst.m()) {
            if remaining.is_empty() {
                break;
            }
            match partial(inst, &vehicles, &remaining, bound, rho, cfg, &mut trace.calls) {
                Ok(out) if !out.covered.is_empty() => {
                    remaining.retain(|o| out.covered.binary_search(o).is_err());
                    schedule.append(out.schedule);
                }
                _ => break,
            }
        }
        if remaining.is_empty() {
            schedule.drop_empty_rounds();
            trace.makespan = makespan(inst, &schedule);
            return Ok((schedule, trace));
        }
        for c in &mut trace.calls[first_call..] {
            c.accepted = false;
        }
        bound *= t(2);
    }
    Err(SolveError::NoFeasibleBound(bound))
}
