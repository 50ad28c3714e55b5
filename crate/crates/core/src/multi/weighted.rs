use super::cap::cap_solve;
use super::partial::{assert_separated, near, split_groups};
use super::rebalance::max_contracting_set;
use super::{ceil_lg, BoundTooSmall, SolveError, SolveTrace, SolverConfig};
use crate::lower_bounds::lb_max;
use crate::model::{makespan, t, Action, Demand, Instance, Schedule, Time};
use crate::single::{stacker_crane, Job, SingleTour};
use num_traits::Zero;
use std::collections::{BTreeMap, BTreeSet};

/// Tour length allowed per vehicle, in units of the guess, when serving whole
/// parts: a spanning tree over the parts' endpoints costs at most `4|Q|B`,
/// doubling it gives `8|Q|B`, and carrying parts back and forth adds at most
/// `2·Σ g·d ≤ 8|Q|B`.
pub const PART_TOUR_FACTOR: i64 = 16;

/// All objects of one vertex pair with total weight at least `k/2`, cut into
/// parts of weight at most `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeavyPair {
    pub u: usize,
    pub v: usize,
    pub dem: u64,
    pub parts: Vec<Vec<usize>>,
    pub part_weights: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PreprocOutput {
    /// One round over all vehicles of the instance.
    pub schedule: Schedule,
    /// `makespan / B`.
    pub ratio: Time,
}

/// Objects with distinct endpoints grouped by `(s, t)`.
fn pairs(inst: &Instance) -> BTreeMap<(usize, usize), Vec<usize>> {
    let mut m: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for (o, d) in inst.demands.iter().enumerate() {
        if d.s != d.t {
            m.entry((d.s, d.t)).or_default().push(o);
        }
    }
    m
}

fn is_heavy(dem: u64, k: u64) -> bool {
    2 * dem >= k
}

/// Heavy pairs, each cut by next-fit over its objects in decreasing weight.
/// Every closed part is over `k/2`: the item that did not fit is no heavier
/// than any item already in the part.
pub fn heavy_parts(inst: &Instance) -> Vec<HeavyPair> {
    let k = inst.capacity;
    pairs(inst)
        .into_iter()
        .filter_map(|((u, v), mut objs)| {
            let dem: u64 = objs.iter().map(|&o| inst.demands[o].w).sum();
            if !is_heavy(dem, k) {
                return None;
            }
            objs.sort_by_key(|&o| (std::cmp::Reverse(inst.demands[o].w), o));
            let mut parts: Vec<Vec<usize>> = vec![Vec::new()];
            let mut weights = vec![0u64];
            for o in objs {
                let w = inst.demands[o].w;
                if *weights.last().unwrap() + w > k {
                    parts.push(Vec::new());
                    weights.push(0);
                }
                parts.last_mut().unwrap().push(o);
                *weights.last_mut().unwrap() += w;
            }
            Some(HeavyPair { u, v, dem, parts, part_weights: weights })
        })
        .collect()
}

struct Pre<'a> {
    inst: &'a Instance,
    jobs: &'a [Job],
    bound: Time,
    max_depth: usize,
}

/// Moves every part of `jobs` as one unit with `vehicles` in a single round,
/// assuming they can serve all objects within makespan `bound`. A
/// stacker-crane tour over the parts is cut at points where it carries
/// nothing; the pieces are assigned like in the covering routine.
pub fn preproc_heavy(
    inst: &Instance,
    vehicles: &[usize],
    jobs: &[Job],
    bound: Time,
) -> Result<PreprocOutput, BoundTooSmall> {
    let pre = Pre { inst, jobs, bound, max_depth: ceil_lg(inst.q().max(1)) + 2 };
    let all: Vec<usize> = (0..jobs.len()).collect();
    let schedule = pre.run(vehicles, &all, 0)?;
    let ratio = if bound > Time::zero() { makespan(inst, &schedule) / bound } else { Time::zero() };
    Ok(PreprocOutput { schedule, ratio })
}

impl Pre<'_> {
    fn empty(&self) -> Schedule {
        let mut s = Schedule::new(self.inst.q());
        s.push_empty_round();
        s
    }

    fn run(&self, q: &[usize], js: &[usize], depth: usize) -> Result<Schedule, BoundTooSmall> {
        let inst = self.inst;
        let m = &inst.metric;
        let js: Vec<usize> = js.iter().copied().filter(|&j| self.jobs[j].source != self.jobs[j].target).collect();
        if js.is_empty() {
            return Ok(self.empty());
        }
        if depth > self.max_depth {
            return Err(BoundTooSmall::TooDeep);
        }
        if q.is_empty() {
            return Err(BoundTooSmall::NoVehiclesLeft);
        }
        if js.iter().any(|&j| t(m.d(self.jobs[j].source, self.jobs[j].target)) > self.bound) {
            return Err(BoundTooSmall::DemandTooLong);
        }
        if q.len() > 1 {
            if let Some((q1, q2)) = split_groups(inst, q, self.bound) {
                let (v1, v2) = (near(inst, &q1, self.bound), near(inst, &q2, self.bound));
                assert_separated(inst, &v1, &v2, self.bound);
                let (mut j1, mut j2) = (Vec::new(), Vec::new());
                for &j in &js {
                    let (s, e) = (self.jobs[j].source, self.jobs[j].target);
                    if v1[s] && v1[e] {
                        j1.push(j);
                    } else if v2[s] && v2[e] {
                        j2.push(j);
                    } else {
                        return Err(BoundTooSmall::OrphanDemand);
                    }
                }
                let mut a = self.run(&q1, &j1, depth)?;
                a.merge_parallel(self.run(&q2, &j2, depth)?);
                return Ok(a);
            }
        }
        let picked: Vec<Job> = js.iter().map(|&j| self.jobs[j].clone()).collect();
        let root = if q.len() == 1 { inst.depots[q[0]] } else { picked[0].source };
        let tour = stacker_crane(m, root, &picked);
        let len = t(tour.length(m));
        if len > self.bound * t(PART_TOUR_FACTOR * q.len() as i64) {
            return Err(BoundTooSmall::TourTooLong);
        }
        if q.len() == 1 {
            let mut s = self.empty();
            s.rounds[0][q[0]] = tour.actions();
            return Ok(s);
        }
        let pieces = empty_load_pieces(inst, &tour, len / t(q.len() as i64));
        if pieces.len() > q.len() {
            return Err(BoundTooSmall::TooManyPieces);
        }
        let adj: Vec<Vec<usize>> = pieces
            .iter()
            .map(|p| {
                (0..q.len())
                    .filter(|&i| {
                        let f = inst.depots[q[i]];
                        p.vertices.iter().any(|&v| t(m.d(f, v)) <= self.bound * t(2))
                    })
                    .collect()
            })
            .collect();
        let rb = max_contracting_set(&adj, q.len());
        // job index of the parts first picked in each piece
        let job_of: BTreeMap<&Vec<usize>, usize> = js.iter().map(|&j| (&self.jobs[j].objects, j)).collect();
        let mut schedule = self.empty();
        for (local, &f) in q.iter().enumerate() {
            let depot = inst.depots[f];
            let mut acts = Vec::new();
            let mut at = depot;
            for (pi, p) in pieces.iter().enumerate() {
                if rb.pi[pi] != Some(local) {
                    continue;
                }
                for stop in &tour.stops[p.stops.clone()] {
                    if stop.drops.is_empty() && stop.picks.is_empty() {
                        continue;
                    }
                    if stop.vertex != at {
                        acts.push(Action::Move(stop.vertex));
                        at = stop.vertex;
                    }
                    acts.extend(stop.drops.iter().map(|&o| Action::Drop(o)));
                    acts.extend(stop.picks.iter().map(|&o| Action::Pick(o)));
                }
            }
            if at != depot {
                acts.push(Action::Move(depot));
            }
            schedule.rounds[0][f] = acts;
        }
        let recurse: Vec<usize> = rb
            .s
            .iter()
            .flat_map(|&pi| {
                tour.stops[pieces[pi].stops.clone()]
                    .iter()
                    .filter(|s| !s.picks.is_empty())
                    .map(|s| job_of[&s.picks])
                    .collect::<Vec<_>>()
            })
            .collect();
        if !recurse.is_empty() {
            let gamma: Vec<usize> = rb.gamma_s.iter().map(|&i| q[i]).collect();
            if gamma.is_empty() {
                return Err(BoundTooSmall::NoVehiclesLeft);
            }
            schedule.merge_parallel(self.run(&gamma, &recurse, depth + 1)?);
        }
        Ok(schedule)
    }
}

/// Consecutive stops of a part tour between two points where it carries
/// nothing.
struct PartPiece {
    stops: std::ops::Range<usize>,
    /// The vertex the piece starts from and every stop vertex in it.
    vertices: Vec<usize>,
}

/// Cuts after a drop once the piece has run at least `target` since its start.
fn empty_load_pieces(inst: &Instance, tour: &SingleTour, target: Time) -> Vec<PartPiece> {
    let arr = tour.arrivals(&inst.metric);
    let mut out = Vec::new();
    let mut begin = 0usize;
    let mut begin_pos = 0i64;
    let mut begin_vertex = tour.root;
    let mut load = 0usize;
    for (i, s) in tour.stops.iter().enumerate() {
        load = load + s.picks.len() - s.drops.len();
        let last = i + 1 == tour.stops.len();
        if load == 0 && !s.drops.is_empty() && (t(arr[i] - begin_pos) >= target || last) {
            let mut vertices = vec![begin_vertex];
            vertices.extend(tour.stops[begin..=i].iter().map(|s| s.vertex));
            out.push(PartPiece { stops: begin..i + 1, vertices });
            begin = i + 1;
            begin_pos = arr[i];
            begin_vertex = s.vertex;
        }
    }
    out
}

/// Weighted solver. Pairs with total weight at least `k/2` travel first as
/// whole parts; the remaining pairs are merged into one object each and served
/// by [`cap_solve`]. Both phases use all vehicles, one after the other.
pub fn weighted_solve(inst: &Instance, cfg: &SolverConfig) -> Result<(Schedule, SolveTrace), SolveError> {
    let lbs = lb_max(inst);
    let mut trace = SolveTrace::new(lbs.clone());
    let heavy = heavy_parts(inst);
    let jobs: Vec<Job> = heavy
        .iter()
        .flat_map(|h| h.parts.iter().map(move |p| Job { source: h.u, target: h.v, objects: p.clone() }))
        .collect();
    let mut schedule = Schedule::new(inst.q());
    if !jobs.is_empty() {
        let vehicles: Vec<usize> = (0..inst.q()).collect();
        let mut bound = match cfg.bound {
            Some(b) if b > Time::zero() => b,
            _ if lbs.combined > Time::zero() => lbs.combined,
            _ => t(1),
        };
        let mut done = false;
        for _ in 0..=cfg.max_doublings {
            trace.guesses.push(bound);
            if let Ok(out) = preproc_heavy(inst, &vehicles, &jobs, bound) {
                trace.preproc_ratio.push(out.ratio);
                schedule.append(out.schedule);
                done = true;
                break;
            }
            bound *= t(2);
        }
        if !done {
            return Err(SolveError::NoFeasibleBound(bound));
        }
    }

    let in_heavy: BTreeSet<(usize, usize)> = heavy.iter().map(|h| (h.u, h.v)).collect();
    let light: Vec<((usize, usize), Vec<usize>)> =
        pairs(inst).into_iter().filter(|(p, _)| !in_heavy.contains(p)).collect();
    if !light.is_empty() {
        let merged = Instance {
            metric: inst.metric.clone(),
            demands: light
                .iter()
                .map(|((s, e), objs)| Demand { s: *s, t: *e, w: objs.iter().map(|&o| inst.demands[o].w).sum() })
                .collect(),
            depots: inst.depots.clone(),
            capacity: inst.capacity,
            graph: inst.graph.clone(),
        };
        merged.check()?;
        let (sub, sub_trace) = cap_solve(&merged, cfg)?;
        trace.guesses.extend(sub_trace.guesses);
        trace.calls.extend(sub_trace.calls);
        for round in sub.rounds {
            let expanded = round
                .into_iter()
                .map(|acts| {
                    acts.into_iter()
                        .flat_map(|a| match a {
                            Action::Pick(i) => light[i].1.iter().map(|&o| Action::Pick(o)).collect(),
                            Action::Drop(i) => light[i].1.iter().map(|&o| Action::Drop(o)).collect(),
                            other => vec![other],
                        })
                        .collect()
                })
                .collect();
            schedule.push_round(expanded);
        }
    }
    schedule.drop_empty_rounds();
    trace.makespan = makespan(inst, &schedule);
    Ok((schedule, trace))
}
