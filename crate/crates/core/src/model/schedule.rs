use super::{t, Metric, Time};
use num_traits::{Signed, Zero};
use std::fmt;

/// A point of the metric: a vertex, or a point at `offset` from `u` on the
/// segment `u`–`v` (normalised so that `u < v` and `0 < offset < d(u, v)`).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Position {
    Vertex(usize),
    Mid { u: usize, v: usize, offset: Time },
}

impl Position {
    /// Normalised point at `offset` from `u` towards `v`.
    pub fn along(metric: &Metric, u: usize, v: usize, offset: Time) -> Position {
        let len = metric.dt(u, v);
        if offset <= Time::zero() || u == v {
            return Position::Vertex(u);
        }
        if offset >= len {
            return Position::Vertex(v);
        }
        if u < v {
            Position::Mid { u, v, offset }
        } else {
            Position::Mid { u: v, v: u, offset: len - offset }
        }
    }

    pub fn vertex(&self) -> Option<usize> {
        match self {
            Position::Vertex(x) => Some(*x),
            Position::Mid { .. } => None,
        }
    }

    /// Distance between two points along the metric's segments.
    pub fn dist(metric: &Metric, a: &Position, b: &Position) -> Time {
        match (a, b) {
            (Position::Vertex(x), Position::Vertex(y)) => metric.dt(*x, *y),
            (Position::Mid { .. }, Position::Vertex(_)) => Self::dist(metric, b, a),
            (Position::Vertex(x), Position::Mid { u, v, offset }) => {
                let len = metric.dt(*u, *v);
                let via_u = *offset + metric.dt(*x, *u);
                let via_v = len - *offset + metric.dt(*x, *v);
                via_u.min(via_v)
            }
            (Position::Mid { u, v, offset }, Position::Mid { u: u2, v: v2, offset: o2 }) => {
                let len = metric.dt(*u, *v);
                let via_u = *offset + Self::dist(metric, &Position::Vertex(*u), b);
                let via_v = len - *offset + Self::dist(metric, &Position::Vertex(*v), b);
                let mut best = via_u.min(via_v);
                if u == u2 && v == v2 {
                    best = best.min((*offset - *o2).abs());
                }
                best
            }
        }
    }
}

/// One step of a vehicle's route.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Action {
    /// Travel to a vertex.
    Move(usize),
    /// Travel to the point at `offset` from `u` on segment `u`–`v`.
    MoveMid { u: usize, v: usize, offset: Time },
    Pick(usize),
    Drop(usize),
    Wait(Time),
}

impl Action {
    pub fn move_to(p: &Position) -> Action {
        match p {
            Position::Vertex(x) => Action::Move(*x),
            Position::Mid { u, v, offset } => Action::MoveMid { u: *u, v: *v, offset: *offset },
        }
    }

    pub fn is_event(&self) -> bool {
        matches!(self, Action::Pick(_) | Action::Drop(_))
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Action::Move(x) => write!(f, "move {x}"),
            Action::MoveMid { u, v, offset } => write!(f, "movemid {u} {v} {offset}"),
            Action::Pick(o) => write!(f, "pick {o}"),
            Action::Drop(o) => write!(f, "drop {o}"),
            Action::Wait(d) => write!(f, "wait {d}"),
        }
    }
}

/// Barrier-synchronised rounds; `rounds[i][j]` is vehicle `j`'s action list in
/// round `i`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Schedule {
    vehicles: usize,
    pub rounds: Vec<Vec<Vec<Action>>>,
}

impl Schedule {
    pub fn new(vehicles: usize) -> Self {
        Schedule { vehicles, rounds: Vec::new() }
    }

    pub fn from_rounds(vehicles: usize, rounds: Vec<Vec<Vec<Action>>>) -> Self {
        assert!(rounds.iter().all(|r| r.len() == vehicles), "round width mismatch");
        Schedule { vehicles, rounds }
    }

    pub fn vehicles(&self) -> usize {
        self.vehicles
    }

    pub fn num_rounds(&self) -> usize {
        self.rounds.len()
    }

    pub fn push_empty_round(&mut self) -> usize {
        self.rounds.push(vec![Vec::new(); self.vehicles]);
        self.rounds.len() - 1
    }

    pub fn push_round(&mut self, round: Vec<Vec<Action>>) {
        assert_eq!(round.len(), self.vehicles, "round width mismatch");
        self.rounds.push(round);
    }

    /// Appends `other`'s rounds after this schedule's rounds.
    pub fn append(&mut self, other: Schedule) {
        assert_eq!(other.vehicles, self.vehicles, "vehicle count mismatch");
        self.rounds.extend(other.rounds);
    }

    /// Runs `other` in parallel: round `i` of the result holds both schedules'
    /// round `i`. Where a vehicle acts in both, `other`'s actions follow.
    pub fn merge_parallel(&mut self, other: Schedule) {
        assert_eq!(other.vehicles, self.vehicles, "vehicle count mismatch");
        while self.rounds.len() < other.rounds.len() {
            self.push_empty_round();
        }
        for (mine, theirs) in self.rounds.iter_mut().zip(other.rounds) {
            for (a, b) in mine.iter_mut().zip(theirs) {
                a.extend(b);
            }
        }
    }

    /// Lifts a schedule over local vehicles `0..map.len()` into one over
    /// `total` vehicles, local vehicle `i` becoming `map[i]`.
    pub fn lift(&self, total: usize, map: &[usize]) -> Schedule {
        assert_eq!(map.len(), self.vehicles);
        let rounds = self
            .rounds
            .iter()
            .map(|r| {
                let mut out = vec![Vec::new(); total];
                for (i, acts) in r.iter().enumerate() {
                    out[map[i]].extend(acts.iter().cloned());
                }
                out
            })
            .collect();
        Schedule { vehicles: total, rounds }
    }

    /// Removes rounds in which no vehicle acts.
    pub fn drop_empty_rounds(&mut self) {
        self.rounds.retain(|r| r.iter().any(|a| !a.is_empty()));
    }

    pub fn is_empty(&self) -> bool {
        self.rounds.iter().all(|r| r.iter().all(|a| a.is_empty()))
    }

    /// Per-round duration of each vehicle, starting every vehicle at its depot.
    pub fn durations(&self, metric: &Metric, depots: &[usize]) -> Vec<Vec<Time>> {
        let mut pos: Vec<Position> = depots.iter().map(|&r| Position::Vertex(r)).collect();
        let mut out = Vec::with_capacity(self.rounds.len());
        for round in &self.rounds {
            let mut row = Vec::with_capacity(self.vehicles);
            for (j, acts) in round.iter().enumerate() {
                let mut el = t(0);
                for a in acts {
                    el += step(metric, &mut pos[j], a);
                }
                row.push(el);
            }
            out.push(row);
        }
        out
    }
}

/// Advances `pos` by one action and returns its duration. Vertex indices are
/// assumed valid.
pub(crate) fn step(metric: &Metric, pos: &mut Position, a: &Action) -> Time {
    match a {
        Action::Move(x) => {
            let next = Position::Vertex(*x);
            let d = Position::dist(metric, pos, &next);
            *pos = next;
            d
        }
        Action::MoveMid { u, v, offset } => {
            let next = Position::along(metric, *u, *v, *offset);
            let d = Position::dist(metric, pos, &next);
            *pos = next;
            d
        }
        Action::Wait(d) => *d,
        Action::Pick(_) | Action::Drop(_) => t(0),
    }
}
