use super::schedule::step;
use super::{t, Action, Instance, Position, Schedule, Time};
use std::collections::BTreeSet;

/// A reason a schedule is infeasible.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    VehicleCount { expected: usize, found: usize },
    BadVertex { round: usize, vehicle: usize, vertex: usize },
    BadObject { round: usize, vehicle: usize, object: usize },
    EventOffVertex { round: usize, vehicle: usize, object: usize },
    NotAvailable { round: usize, vehicle: usize, object: usize },
    NotCarried { round: usize, vehicle: usize, object: usize },
    Capacity { round: usize, vehicle: usize, load: u64 },
    NegativeWait { round: usize, vehicle: usize },
    NotDelivered { object: usize },
    StillCarried { object: usize, vehicle: usize },
    NotAtDepot { vehicle: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ObjectReport {
    pub delivered: bool,
    pub preemptions: usize,
    pub preemption_vertices: Vec<usize>,
    /// Total time spent inside vehicles.
    pub in_vehicle_time: Time,
    /// Vehicles that carried the object.
    pub carriers: BTreeSet<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct VehicleReport {
    /// Absolute time of the vehicle's last action (0 if it never acts).
    pub completion: Time,
    pub max_load: u64,
    pub distance: Time,
}

/// An action with its absolute completion time.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TimedEvent {
    pub round: usize,
    pub vehicle: usize,
    pub time: Time,
    pub action: Action,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub feasible: bool,
    pub makespan: Time,
    pub round_durations: Vec<Time>,
    pub violations: Vec<Violation>,
    pub objects: Vec<ObjectReport>,
    pub vehicles: Vec<VehicleReport>,
    pub timeline: Vec<TimedEvent>,
}

impl ValidationReport {
    pub fn max_preemptions(&self) -> usize {
        self.objects.iter().map(|o| o.preemptions).max().unwrap_or(0)
    }

    pub fn preemption_vertices(&self) -> BTreeSet<usize> {
        self.objects.iter().flat_map(|o| o.preemption_vertices.iter().copied()).collect()
    }

    pub fn total_in_vehicle_time(&self) -> Time {
        self.objects.iter().map(|o| o.in_vehicle_time).sum()
    }
}

#[derive(Clone, Copy)]
enum Loc {
    /// Resting at a vertex; `dropped` is `(round, vehicle)` of the drop that put
    /// it there, `None` for the initial placement.
    At { vertex: usize, dropped: Option<(usize, usize)> },
    In { vehicle: usize, since: Time },
}

/// Checks `sched` against `inst` under barrier-round semantics.
pub fn validate(inst: &Instance, sched: &Schedule) -> ValidationReport {
    let n = inst.n();
    let m = inst.m();
    let q = inst.q();
    let metric = &inst.metric;
    let mut violations = Vec::new();
    let mut objects = vec![ObjectReport::default(); m];
    let mut vehicles = vec![VehicleReport::default(); q];
    let mut timeline = Vec::new();
    let mut round_durations = Vec::new();
    let mut loc: Vec<Loc> =
        inst.demands.iter().map(|d| Loc::At { vertex: d.s, dropped: None }).collect();

    if sched.vehicles() != q {
        violations.push(Violation::VehicleCount { expected: q, found: sched.vehicles() });
        return ValidationReport {
            feasible: false,
            makespan: t(0),
            round_durations,
            violations,
            objects,
            vehicles,
            timeline,
        };
    }

    let mut pos: Vec<Position> = inst.depots.iter().map(|&r| Position::Vertex(r)).collect();
    let mut load = vec![0u64; q];
    let mut start = t(0);

    for (ri, round) in sched.rounds.iter().enumerate() {
        let mut longest = t(0);
        for (j, acts) in round.iter().enumerate() {
            let mut el = t(0);
            for a in acts {
                match a {
                    Action::Move(x) if *x >= n => {
                        violations.push(Violation::BadVertex { round: ri, vehicle: j, vertex: *x });
                        continue;
                    }
                    Action::MoveMid { u, v, .. } if *u >= n || *v >= n => {
                        violations.push(Violation::BadVertex {
                            round: ri,
                            vehicle: j,
                            vertex: (*u).max(*v),
                        });
                        continue;
                    }
                    Action::Wait(d) if *d < t(0) => {
                        violations.push(Violation::NegativeWait { round: ri, vehicle: j });
                        continue;
                    }
                    Action::Pick(o) | Action::Drop(o) if *o >= m => {
                        violations.push(Violation::BadObject { round: ri, vehicle: j, object: *o });
                        continue;
                    }
                    _ => {}
                }
                let dur = step(metric, &mut pos[j], a);
                el += dur;
                vehicles[j].distance += match a {
                    Action::Wait(_) => t(0),
                    _ => dur,
                };
                let now = start + el;
                match a {
                    Action::Pick(o) => {
                        let o = *o;
                        let Some(here) = pos[j].vertex() else {
                            violations.push(Violation::EventOffVertex {
                                round: ri,
                                vehicle: j,
                                object: o,
                            });
                            continue;
                        };
                        let ok = match loc[o] {
                            Loc::At { vertex, dropped } => {
                                vertex == here
                                    && match dropped {
                                        None => true,
                                        Some((r, v)) => r < ri || (r == ri && v == j),
                                    }
                            }
                            Loc::In { .. } => false,
                        };
                        if !ok {
                            violations.push(Violation::NotAvailable {
                                round: ri,
                                vehicle: j,
                                object: o,
                            });
                            continue;
                        }
                        loc[o] = Loc::In { vehicle: j, since: now };
                        objects[o].carriers.insert(j);
                        load[j] += inst.demands[o].w;
                        vehicles[j].max_load = vehicles[j].max_load.max(load[j]);
                        if load[j] > inst.capacity {
                            violations.push(Violation::Capacity {
                                round: ri,
                                vehicle: j,
                                load: load[j],
                            });
                        }
                    }
                    Action::Drop(o) => {
                        let o = *o;
                        let Some(here) = pos[j].vertex() else {
                            violations.push(Violation::EventOffVertex {
                                round: ri,
                                vehicle: j,
                                object: o,
                            });
                            continue;
                        };
                        match loc[o] {
                            Loc::In { vehicle, since } if vehicle == j => {
                                objects[o].in_vehicle_time += now - since;
                                load[j] -= inst.demands[o].w;
                                loc[o] = Loc::At { vertex: here, dropped: Some((ri, j)) };
                                if here != inst.demands[o].t {
                                    objects[o].preemptions += 1;
                                    objects[o].preemption_vertices.push(here);
                                }
                            }
                            _ => violations.push(Violation::NotCarried {
                                round: ri,
                                vehicle: j,
                                object: o,
                            }),
                        }
                    }
                    _ => {}
                }
                timeline.push(TimedEvent { round: ri, vehicle: j, time: now, action: a.clone() });
                vehicles[j].completion = now;
            }
            longest = longest.max(el);
        }
        round_durations.push(longest);
        start += longest;
    }

    for (o, l) in loc.iter().enumerate() {
        match *l {
            Loc::At { vertex, .. } => {
                if vertex == inst.demands[o].t {
                    objects[o].delivered = true;
                } else {
                    violations.push(Violation::NotDelivered { object: o });
                }
            }
            Loc::In { vehicle, .. } => {
                violations.push(Violation::StillCarried { object: o, vehicle });
                violations.push(Violation::NotDelivered { object: o });
            }
        }
    }
    for j in 0..q {
        if pos[j] != Position::Vertex(inst.depots[j]) {
            violations.push(Violation::NotAtDepot { vehicle: j });
        }
    }

    ValidationReport {
        feasible: violations.is_empty(),
        makespan: start,
        round_durations,
        violations,
        objects,
        vehicles,
        timeline,
    }
}

/// Sum over rounds of the longest vehicle duration in that round.
pub fn makespan(inst: &Instance, sched: &Schedule) -> Time {
    sched
        .durations(&inst.metric, &inst.depots)
        .iter()
        .map(|r| r.iter().copied().max().unwrap_or(t(0)))
        .sum()
}
