use crate::model::{t, Action, Demand, Instance, Metric, ModelError, Schedule, Time};
use std::collections::BTreeMap;

/// A vertex visit: drops happen before picks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stop {
    pub vertex: usize,
    pub drops: Vec<usize>,
    pub picks: Vec<usize>,
}

impl Stop {
    pub fn visit(vertex: usize) -> Self {
        Stop { vertex, drops: Vec::new(), picks: Vec::new() }
    }
}

/// A demand handed to a single-vehicle routine under a caller-chosen object id.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TourDemand {
    pub object: usize,
    pub s: usize,
    pub t: usize,
    pub w: u64,
}

/// One uninterrupted ride of an object: picked at stop `from`, dropped at stop
/// `to`; `start`/`end` are distances along the tour.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Leg {
    pub object: usize,
    pub from: usize,
    pub to: usize,
    pub start: i64,
    pub end: i64,
}

/// Closed walk from `root` through `stops` and back to `root`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SingleTour {
    pub root: usize,
    pub stops: Vec<Stop>,
}

impl SingleTour {
    pub fn new(root: usize) -> Self {
        SingleTour { root, stops: Vec::new() }
    }

    pub fn push(&mut self, stop: Stop) {
        self.stops.push(stop);
    }

    /// Travels to `sub.root`, runs `sub`, and ends back at `sub.root`.
    pub fn splice(&mut self, sub: &SingleTour) {
        self.stops.push(Stop::visit(sub.root));
        self.stops.extend(sub.stops.iter().cloned());
        self.stops.push(Stop::visit(sub.root));
    }

    /// Distance travelled when reaching each stop.
    pub fn arrivals(&self, metric: &Metric) -> Vec<i64> {
        let mut at = self.root;
        let mut acc = 0;
        self.stops
            .iter()
            .map(|s| {
                acc += metric.d(at, s.vertex);
                at = s.vertex;
                acc
            })
            .collect()
    }

    pub fn length(&self, metric: &Metric) -> i64 {
        let last = self.stops.last().map_or(self.root, |s| s.vertex);
        self.arrivals(metric).last().copied().unwrap_or(0) + metric.d(last, self.root)
    }

    /// Every ride, in order of pick-up.
    pub fn legs(&self, metric: &Metric) -> Vec<Leg> {
        let arr = self.arrivals(metric);
        let mut open: BTreeMap<usize, (usize, i64)> = BTreeMap::new();
        let mut out = Vec::new();
        for (i, s) in self.stops.iter().enumerate() {
            for &o in &s.drops {
                if let Some((from, start)) = open.remove(&o) {
                    out.push(Leg { object: o, from, to: i, start, end: arr[i] });
                }
            }
            for &o in &s.picks {
                open.insert(o, (i, arr[i]));
            }
        }
        out.sort_by_key(|l| (l.start, l.from, l.object));
        out
    }

    /// In-vehicle time per object.
    pub fn delays(&self, metric: &Metric) -> BTreeMap<usize, i64> {
        let mut m = BTreeMap::new();
        for l in self.legs(metric) {
            *m.entry(l.object).or_insert(0) += l.end - l.start;
        }
        m
    }

    /// Vertices where each object is dropped short of its destination.
    pub fn preemptions(&self, target: impl Fn(usize) -> usize) -> BTreeMap<usize, Vec<usize>> {
        let mut m: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for s in &self.stops {
            for &o in &s.drops {
                if s.vertex != target(o) {
                    m.entry(o).or_default().push(s.vertex);
                }
            }
        }
        m
    }

    pub fn max_load(&self, weight: impl Fn(usize) -> u64) -> u64 {
        let mut load = 0u64;
        let mut best = 0;
        for s in &self.stops {
            for &o in &s.drops {
                load -= weight(o);
            }
            for &o in &s.picks {
                load += weight(o);
            }
            best = best.max(load);
        }
        best
    }

    /// Actions for a vehicle standing at `root`.
    pub fn actions(&self) -> Vec<Action> {
        let mut out = Vec::new();
        let mut at = self.root;
        for s in &self.stops {
            if s.vertex != at {
                out.push(Action::Move(s.vertex));
                at = s.vertex;
            }
            out.extend(s.drops.iter().map(|&o| Action::Drop(o)));
            out.extend(s.picks.iter().map(|&o| Action::Pick(o)));
        }
        if at != self.root {
            out.push(Action::Move(self.root));
        }
        out
    }

    /// Time reversal: stops in reverse order with picks and drops swapped.
    pub fn reversed(&self) -> SingleTour {
        SingleTour {
            root: self.root,
            stops: self
                .stops
                .iter()
                .rev()
                .map(|s| Stop { vertex: s.vertex, drops: s.picks.clone(), picks: s.drops.clone() })
                .collect(),
        }
    }

    /// Renames objects through `f`.
    pub fn map_objects(&self, f: impl Fn(usize) -> usize) -> SingleTour {
        SingleTour {
            root: self.root,
            stops: self
                .stops
                .iter()
                .map(|s| Stop {
                    vertex: s.vertex,
                    drops: s.drops.iter().map(|&o| f(o)).collect(),
                    picks: s.picks.iter().map(|&o| f(o)).collect(),
                })
                .collect(),
        }
    }

    /// One-vehicle instance and one-round schedule for validation. Objects are
    /// renumbered densely in order of `demands`.
    pub fn as_instance(
        &self,
        metric: &Metric,
        demands: &[TourDemand],
        capacity: u64,
    ) -> Result<(Instance, Schedule), ModelError> {
        let index: BTreeMap<usize, usize> = demands.iter().enumerate().map(|(i, d)| (d.object, i)).collect();
        let inst = Instance::new(
            metric.clone(),
            demands.iter().map(|d| Demand { s: d.s, t: d.t, w: d.w }).collect(),
            vec![self.root],
            capacity,
        )?;
        let tour = self.map_objects(|o| index[&o]);
        Ok((inst, Schedule::from_rounds(1, vec![vec![tour.actions()]])))
    }

    pub fn length_time(&self, metric: &Metric) -> Time {
        t(self.length(metric))
    }
}
