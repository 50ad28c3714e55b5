use super::rebalance::max_contracting_set;
use super::{ceil_lg, BoundTooSmall, CallRecord, SolverConfig};
use crate::model::{makespan, t, Action, Instance, Position, Schedule, Time};
use crate::rng::derive_seed;
use crate::single::{preemptive_tour, Leg, PreemptiveConfig, SingleTour, TourDemand, TourError};
use num_traits::Zero;
use petgraph::unionfind::UnionFind;
use std::collections::{BTreeMap, BTreeSet};

/// A stretch of a closed tour between two cut positions. Positions are
/// measured along the tour and may exceed its length for the piece that wraps
/// past the root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Piece {
    pub from: Time,
    pub to: Time,
    pub start: Position,
    pub end: Position,
    /// Legs served inside this piece, as indices into the tour's legs.
    pub legs: Vec<usize>,
    /// Tour vertices strictly inside the stretch, with their positions.
    pub vertices: Vec<(Time, usize)>,
}

impl Piece {
    pub fn length(&self) -> Time {
        self.to - self.from
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialOutput {
    /// Two rounds over all vehicles of the instance.
    pub schedule: Schedule,
    pub covered: Vec<usize>,
}

/// Tour samples drawn before a guess is declared too small.
pub const TOUR_SAMPLES: u64 = 8;

struct Ctx<'a> {
    inst: &'a Instance,
    bound: Time,
    rho: u64,
    cfg: &'a SolverConfig,
    max_depth: usize,
    tours: u64,
    calls: &'a mut Vec<CallRecord>,
}

/// Covers a share of `objects` with `vehicles` in two rounds, assuming they
/// can serve all of them within makespan `bound`. Objects whose single-vehicle
/// ride crosses a cut are left for a later call. Every call, including
/// recursive ones, is appended to `calls`.
pub fn partial(
    inst: &Instance,
    vehicles: &[usize],
    objects: &[usize],
    bound: Time,
    rho: u64,
    cfg: &SolverConfig,
    calls: &mut Vec<CallRecord>,
) -> Result<PartialOutput, BoundTooSmall> {
    let max_depth = ceil_lg(inst.q().max(1)) + 2;
    let mut ctx = Ctx { inst, bound, rho, cfg, max_depth, tours: 0, calls };
    ctx.run(vehicles, objects, 0)
}

/// Smallest cut offset in `[0, unit)` that splits the fewest objects' rides.
/// Candidates are every ride endpoint modulo `unit` and the midpoints of the
/// arcs between consecutive ones; ties go to the smallest offset.
pub(crate) fn best_offset(legs: &[Leg], unit: Time) -> (Time, BTreeSet<usize>) {
    let modu = |x: Time| x - unit * (x / unit).floor();
    let mut ends: Vec<Time> = legs.iter().flat_map(|l| [modu(t(l.start)), modu(t(l.end))]).collect();
    ends.sort();
    ends.dedup();
    if ends.is_empty() {
        return (Time::zero(), BTreeSet::new());
    }
    let mut cands = ends.clone();
    for i in 0..ends.len() {
        let a = ends[i];
        let b = if i + 1 < ends.len() { ends[i + 1] } else { ends[0] + unit };
        cands.push(modu((a + b) / t(2)));
    }
    cands.sort();
    cands.dedup();
    let mut best: Option<(Time, BTreeSet<usize>)> = None;
    for eta in cands {
        let cut = cut_objects(legs, unit, eta);
        if best.as_ref().is_none_or(|(_, b)| cut.len() < b.len()) {
            best = Some((eta, cut));
        }
    }
    best.unwrap()
}

/// Objects with a ride containing a point `η + p·unit` strictly inside it.
pub(crate) fn cut_objects(legs: &[Leg], unit: Time, eta: Time) -> BTreeSet<usize> {
    legs.iter()
        .filter(|l| {
            let a = t(l.start);
            let first = eta + unit * (((a - eta) / unit).floor() + t(1));
            first < t(l.end)
        })
        .map(|l| l.object)
        .collect()
}

/// Tour polyline: root, every stop, root again, with arrival positions.
fn polyline(inst: &Instance, tour: &SingleTour) -> Vec<(Time, usize)> {
    let arr = tour.arrivals(&inst.metric);
    let mut pts = vec![(Time::zero(), tour.root)];
    pts.extend(tour.stops.iter().zip(arr).map(|(s, a)| (t(a), s.vertex)));
    pts.push((t(tour.length(&inst.metric)), tour.root));
    pts
}

/// Point of the tour at distance `x ∈ [0, L]`.
fn point_at(inst: &Instance, pts: &[(Time, usize)], x: Time) -> Position {
    for w in pts.windows(2) {
        let ((a, u), (b, v)) = (w[0], w[1]);
        if a <= x && x <= b {
            return Position::along(&inst.metric, u, v, x - a);
        }
    }
    Position::Vertex(pts[0].1)
}

/// Splits the tour at `η + p·unit` for every such point below its length; the
/// last piece wraps past the root to the first cut. Every uncut leg is placed
/// in the first piece containing it.
pub(crate) fn cut_tour(inst: &Instance, tour: &SingleTour, legs: &[Leg], unit: Time, eta: Time) -> Vec<Piece> {
    let pts = polyline(inst, tour);
    let len = pts.last().unwrap().0;
    let mut cuts = Vec::new();
    let mut c = eta;
    while c < len {
        cuts.push(c);
        c += unit;
    }
    let spans: Vec<(Time, Time)> = if cuts.is_empty() {
        vec![(Time::zero(), len)]
    } else {
        let mut s: Vec<(Time, Time)> = cuts.windows(2).map(|w| (w[0], w[1])).collect();
        s.push((*cuts.last().unwrap(), cuts[0] + len));
        s
    };
    let mut pieces: Vec<Piece> = spans
        .iter()
        .map(|&(a, b)| {
            let wrap = |x: Time| if x > len { x - len } else { x };
            let mut vertices: Vec<(Time, usize)> = Vec::new();
            for &(x, v) in &pts {
                for shifted in [x, x + len] {
                    if a < shifted && shifted < b {
                        vertices.push((shifted, v));
                    }
                }
            }
            vertices.sort();
            vertices.dedup();
            Piece {
                from: a,
                to: b,
                start: point_at(inst, &pts, wrap(a)),
                end: point_at(inst, &pts, wrap(b)),
                legs: Vec::new(),
                vertices,
            }
        })
        .collect();
    let cut = cut_objects(legs, unit, eta);
    for (i, l) in legs.iter().enumerate() {
        if cut.contains(&l.object) {
            continue;
        }
        let (a, b) = (t(l.start), t(l.end));
        let home = pieces
            .iter()
            .position(|p| (p.from <= a && b <= p.to) || (p.from <= a + len && b + len <= p.to))
            .expect("an uncut leg lies inside one piece");
        pieces[home].legs.push(i);
    }
    pieces
}

/// Distance from vertex `f` to the nearest point of the piece.
fn piece_distance(inst: &Instance, p: &Piece, f: usize) -> Time {
    let fp = Position::Vertex(f);
    let mut best = Position::dist(&inst.metric, &fp, &p.start).min(Position::dist(&inst.metric, &fp, &p.end));
    for &(_, v) in &p.vertices {
        best = best.min(inst.metric.dt(f, v));
    }
    best
}

/// Vehicle groups on either side of the longest spanning-tree edge over the
/// vehicles' depots, when that edge exceeds `3B`.
pub(crate) fn split_groups(inst: &Instance, q: &[usize], bound: Time) -> Option<(Vec<usize>, Vec<usize>)> {
    let m = &inst.metric;
    let mut vs: Vec<usize> = q.iter().map(|&f| inst.depots[f]).collect();
    vs.sort_unstable();
    vs.dedup();
    let tree = m.mst(&vs);
    let (ei, &(a, b)) = tree.iter().enumerate().max_by_key(|(i, &(u, v))| (m.d(u, v), std::cmp::Reverse(*i)))?;
    if t(m.d(a, b)) <= bound * t(3) {
        return None;
    }
    let pos = |v: usize| vs.binary_search(&v).unwrap();
    let mut uf = UnionFind::<usize>::new(vs.len());
    for (i, &(u, v)) in tree.iter().enumerate() {
        if i != ei {
            uf.union(pos(u), pos(v));
        }
    }
    let side = uf.find(pos(a));
    Some(q.iter().copied().partition(|&f| uf.find(pos(inst.depots[f])) == side))
}

/// Vertices within `bound` of some depot of `grp`.
pub(crate) fn near(inst: &Instance, grp: &[usize], bound: Time) -> Vec<bool> {
    let ds: Vec<usize> = grp.iter().map(|&f| inst.depots[f]).collect();
    (0..inst.n()).map(|v| t(inst.metric.dist_to_set(v, &ds)) <= bound).collect()
}

pub(crate) fn assert_separated(inst: &Instance, v1: &[bool], v2: &[bool], bound: Time) {
    for x in (0..inst.n()).filter(|&x| v1[x]) {
        for y in (0..inst.n()).filter(|&y| v2[y]) {
            assert!(t(inst.metric.d(x, y)) > bound, "split halves closer than the guess");
        }
    }
}

impl Ctx<'_> {
    fn demands(&self, objects: &[usize]) -> Vec<TourDemand> {
        objects
            .iter()
            .map(|&o| {
                let d = self.inst.demands[o];
                TourDemand { object: o, s: d.s, t: d.t, w: d.w }
            })
            .collect()
    }

    /// Samples tours until one fits `budget`, keeping the shortest.
    fn tour(&mut self, root: usize, objects: &[usize], budget: Time) -> SingleTour {
        let demands = self.demands(objects);
        let mut best: Option<(i64, SingleTour)> = None;
        for _ in 0..TOUR_SAMPLES {
            let cfg = PreemptiveConfig { seed: derive_seed(self.cfg.seed, self.tours), ..self.cfg.tour.clone() };
            self.tours += 1;
            let tour = match preemptive_tour(&self.inst.metric, root, &demands, self.inst.capacity, &cfg) {
                Ok(p) => p.tour,
                Err(TourError::RetriesExhausted { best, .. }) => best.tour,
            };
            let len = tour.length(&self.inst.metric);
            if best.as_ref().is_none_or(|(l, _)| len < *l) {
                best = Some((len, tour));
            }
            if t(len) <= budget {
                break;
            }
        }
        best.unwrap().1
    }

    fn unit(&self) -> Time {
        self.bound * t(self.rho as i64)
    }

    fn record(&mut self, depth: usize, vehicles: usize, demands: usize, out: &PartialOutput, cut: usize) {
        let bound = self.bound * t(16 + 16 * self.rho as i64);
        self.calls.push(CallRecord {
            depth,
            vehicles,
            demands,
            covered: out.covered.len(),
            cut,
            makespan: makespan(self.inst, &out.schedule),
            bound,
            guess: self.bound,
            accepted: true,
        });
    }

    fn empty(&self) -> Schedule {
        let mut s = Schedule::new(self.inst.q());
        s.push_empty_round();
        s.push_empty_round();
        s
    }

    fn run(&mut self, q: &[usize], all: &[usize], depth: usize) -> Result<PartialOutput, BoundTooSmall> {
        if depth > self.max_depth {
            return Err(BoundTooSmall::TooDeep);
        }
        let inst = self.inst;
        let (trivial, d): (Vec<usize>, Vec<usize>) =
            all.iter().copied().partition(|&o| inst.demands[o].s == inst.demands[o].t);
        if d.is_empty() {
            let out = PartialOutput { schedule: self.empty(), covered: trivial };
            self.record(depth, q.len(), all.len(), &out, 0);
            return Ok(out);
        }
        if q.is_empty() {
            return Err(BoundTooSmall::NoVehiclesLeft);
        }
        let mut out = if q.len() == 1 {
            self.single(q[0], &d)?
        } else if let Some((q1, q2)) = split_groups(self.inst, q, self.bound) {
            self.separate(q, &q1, &q2, &d, depth)?
        } else {
            let (mut out, cut) = self.cover(q, &d, depth)?;
            out.covered.extend(trivial);
            out.covered.sort_unstable();
            self.record(depth, q.len(), all.len(), &out, cut);
            return Ok(out);
        };
        out.covered.extend(trivial);
        out.covered.sort_unstable();
        self.record(depth, q.len(), all.len(), &out, 0);
        Ok(out)
    }

    fn single(&mut self, f: usize, d: &[usize]) -> Result<PartialOutput, BoundTooSmall> {
        let tour = self.tour(self.inst.depots[f], d, self.unit());
        if t(tour.length(&self.inst.metric)) > self.unit() {
            return Err(BoundTooSmall::TourTooLong);
        }
        let mut s = self.empty();
        s.rounds[0][f] = tour.actions();
        Ok(PartialOutput { schedule: s, covered: d.to_vec() })
    }

    fn separate(
        &mut self,
        q: &[usize],
        q1: &[usize],
        q2: &[usize],
        d: &[usize],
        depth: usize,
    ) -> Result<PartialOutput, BoundTooSmall> {
        let inst = self.inst;
        let (v1, v2) = (near(inst, q1, self.bound), near(inst, q2, self.bound));
        assert_separated(inst, &v1, &v2, self.bound);
        let mut d1 = Vec::new();
        let mut d2 = Vec::new();
        for &o in d {
            let dm = inst.demands[o];
            if v1[dm.s] && v1[dm.t] {
                d1.push(o);
            } else if v2[dm.s] && v2[dm.t] {
                d2.push(o);
            } else {
                return Err(BoundTooSmall::OrphanDemand);
            }
        }
        debug_assert_eq!(q1.len() + q2.len(), q.len());
        let mut a = self.run(q1, &d1, depth)?;
        let b = self.run(q2, &d2, depth)?;
        a.schedule.merge_parallel(b.schedule);
        a.covered.extend(b.covered);
        Ok(a)
    }

    fn cover(
        &mut self,
        q: &[usize],
        d: &[usize],
        depth: usize,
    ) -> Result<(PartialOutput, usize), BoundTooSmall> {
        let inst = self.inst;
        let root = inst.demands[d[0]].s;
        let tour = self.tour(root, d, self.unit() * t(q.len() as i64));
        let len = t(tour.length(&inst.metric));
        if len > self.unit() * t(q.len() as i64) {
            return Err(BoundTooSmall::TourTooLong);
        }
        let legs = tour.legs(&inst.metric);
        let unit = self.unit();
        let (eta, cut) = best_offset(&legs, unit);
        let pieces: Vec<Piece> =
            cut_tour(inst, &tour, &legs, unit, eta).into_iter().filter(|p| !p.legs.is_empty()).collect();
        if pieces.len() > q.len() {
            return Err(BoundTooSmall::TooManyPieces);
        }
        let adj: Vec<Vec<usize>> = pieces
            .iter()
            .map(|p| {
                (0..q.len())
                    .filter(|&i| piece_distance(inst, p, inst.depots[q[i]]) <= self.bound * t(2))
                    .collect()
            })
            .collect();
        let rb = max_contracting_set(&adj, q.len());
        let in_s: BTreeSet<usize> = rb.s.iter().copied().collect();
        let mut home: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (pi, p) in pieces.iter().enumerate() {
            for &li in &p.legs {
                home.entry(legs[li].object).or_default().push(pi);
            }
        }
        let c1: Vec<usize> =
            home.iter().filter(|(_, ps)| ps.iter().any(|p| in_s.contains(p))).map(|(&o, _)| o).collect();
        let c2: BTreeSet<usize> =
            home.iter().filter(|(_, ps)| ps.iter().all(|p| !in_s.contains(p))).map(|(&o, _)| o).collect();
        for o in &c1 {
            // every recursed object has a ride inside a contracting piece
            assert!(home[o].iter().any(|p| in_s.contains(p)));
        }

        // ride order of each object: first ride in round one, second in round two
        let mut rank: BTreeMap<usize, usize> = BTreeMap::new();
        let mut leg_round = vec![0usize; legs.len()];
        for (i, l) in legs.iter().enumerate() {
            let r = rank.entry(l.object).or_insert(0);
            leg_round[i] = *r;
            *r += 1;
        }
        assert!(rank.values().all(|&r| r <= 2), "more than one preemption in a tour");

        let mut schedule = self.empty();
        for (local, &f) in q.iter().enumerate() {
            let mine: Vec<usize> = (0..pieces.len()).filter(|&p| rb.pi[p] == Some(local)).collect();
            for round in 0..2 {
                let acts = piece_route(inst, &tour, &legs, &pieces, &mine, &c2, &leg_round, round, inst.depots[f]);
                schedule.rounds[round][f] = acts;
            }
        }
        let mut covered: Vec<usize> = c2.iter().copied().collect();
        if !c1.is_empty() {
            let gamma: Vec<usize> = rb.gamma_s.iter().map(|&i| q[i]).collect();
            if gamma.is_empty() {
                return Err(BoundTooSmall::NoVehiclesLeft);
            }
            let sub = self.run(&gamma, &c1, depth + 1)?;
            schedule.merge_parallel(sub.schedule);
            covered.extend(sub.covered);
        }
        Ok((PartialOutput { schedule, covered }, cut.len()))
    }
}

/// Route of one vehicle in one round: from its depot through the events of
/// `round` in each of its pieces, in piece order and tour order within a
/// piece, and back.
#[allow(clippy::too_many_arguments)]
fn piece_route(
    inst: &Instance,
    tour: &SingleTour,
    legs: &[Leg],
    pieces: &[Piece],
    mine: &[usize],
    serve: &BTreeSet<usize>,
    leg_round: &[usize],
    round: usize,
    depot: usize,
) -> Vec<Action> {
    let len = t(tour.length(&inst.metric));
    let arr: Vec<Time> = tour.arrivals(&inst.metric).into_iter().map(t).collect();
    let mut acts = Vec::new();
    let mut at = depot;
    for &pi in mine {
        let p = &pieces[pi];
        // (position, wrapped, stop, is pick, object)
        let mut events: Vec<(Time, bool, usize, bool, usize)> = Vec::new();
        for &li in &p.legs {
            let l = legs[li];
            if leg_round[li] != round || !serve.contains(&l.object) {
                continue;
            }
            let wrapped = t(l.start) < p.from;
            let shift = if wrapped { len } else { Time::zero() };
            events.push((arr[l.from] + shift, wrapped, l.from, true, l.object));
            events.push((arr[l.to] + shift, wrapped, l.to, false, l.object));
        }
        events.sort();
        for (_, _, stop, pick, o) in events {
            let v = tour.stops[stop].vertex;
            if v != at {
                acts.push(Action::Move(v));
                at = v;
            }
            acts.push(if pick { Action::Pick(o) } else { Action::Drop(o) });
        }
    }
    if at != depot {
        acts.push(Action::Move(depot));
    }
    acts
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{metric_from_graph, Demand, Metric, WeightedGraph};
    use crate::validate;
    use proptest::prelude::*;

    fn line(n: usize) -> Metric {
        metric_from_graph(&WeightedGraph::path(n)).unwrap()
    }

    fn leg(object: usize, start: i64, end: i64) -> Leg {
        Leg { object, from: 0, to: 0, start, end }
    }

    #[test]
    fn offset_matches_fine_grid() {
        let legs = [leg(0, 0, 3), leg(1, 2, 5), leg(2, 6, 9), leg(3, 7, 8)];
        let unit = t(4);
        let (eta, cut) = best_offset(&legs, unit);
        let mut grid_best = usize::MAX;
        for k in 0..400 {
            let e = Time::new(k, 100);
            grid_best = grid_best.min(cut_objects(&legs, unit, e).len());
        }
        assert_eq!(cut.len(), grid_best);
        assert_eq!(cut_objects(&legs, unit, eta), cut);
    }

    #[test]
    fn empty_demand_set() {
        let m = line(3);
        let inst = Instance::new(m, vec![Demand::unit(0, 2)], vec![0, 2], 1).unwrap();
        let mut calls = Vec::new();
        let out = partial(&inst, &[0, 1], &[], t(1), 4, &SolverConfig::default(), &mut calls).unwrap();
        assert!(out.covered.is_empty());
        assert_eq!(out.schedule.num_rounds(), 2);
    }

    #[test]
    fn one_vehicle_serves_everything() {
        let m = line(5);
        let inst = Instance::new(m, vec![Demand::unit(1, 4), Demand::unit(3, 0)], vec![2], 1).unwrap();
        let mut calls = Vec::new();
        let out = partial(&inst, &[0], &[0, 1], t(8), 4, &SolverConfig::default(), &mut calls).unwrap();
        assert_eq!(out.covered, vec![0, 1]);
        let r = validate(&inst, &out.schedule);
        assert!(r.feasible, "{:?}", r.violations);
    }

    #[test]
    fn far_groups_split() {
        let m = line(40);
        let inst =
            Instance::new(m, vec![Demand::unit(0, 2), Demand::unit(38, 36)], vec![1, 37], 1).unwrap();
        let mut calls = Vec::new();
        let out = partial(&inst, &[0, 1], &[0, 1], t(10), 4, &SolverConfig::default(), &mut calls).unwrap();
        assert_eq!(out.covered, vec![0, 1]);
        let r = validate(&inst, &out.schedule);
        assert!(r.feasible, "{:?}", r.violations);
        // too small a guess strands a demand between the halves
        let inst = Instance::new(line(40), vec![Demand::unit(0, 39)], vec![1, 37], 1).unwrap();
        let err = partial(&inst, &[0, 1], &[0], t(10), 4, &SolverConfig::default(), &mut Vec::new());
        assert_eq!(err, Err(BoundTooSmall::OrphanDemand));
    }

    fn random_instance(seed: u64, n: usize, q: usize, m: usize, k: u64) -> Instance {
        use rand::Rng;
        let mut r = crate::rng::rng_for(seed, 22);
        let pts: Vec<(i64, i64)> = (0..n).map(|_| (r.gen_range(0..12), r.gen_range(0..12))).collect();
        let metric = Metric::from_rows(
            pts.iter().map(|a| pts.iter().map(|b| (a.0 - b.0).abs() + (a.1 - b.1).abs()).collect()).collect(),
        )
        .unwrap();
        let depots = (0..q).map(|_| r.gen_range(0..n)).collect();
        let demands = (0..m).map(|_| Demand::unit(r.gen_range(0..n), r.gen_range(0..n))).collect();
        Instance::new(metric, demands, depots, k).unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]
        #[test]
        fn covered_objects_are_delivered(seed in 0u64..1000, n in 2usize..10, q in 1usize..5, m in 1usize..10, k in 1u64..3, b in 1i64..40, rho in 1u64..6) {
            let inst = random_instance(seed, n, q, m, k);
            let vehicles: Vec<usize> = (0..q).collect();
            let objects: Vec<usize> = (0..m).collect();
            let mut calls = Vec::new();
            let cfg = SolverConfig { seed, ..Default::default() };
            if let Ok(out) = partial(&inst, &vehicles, &objects, t(b), rho, &cfg, &mut calls) {
                prop_assert_eq!(out.schedule.num_rounds(), 2);
                let sub = inst.restrict(&vehicles, &out.covered);
                let renum: BTreeMap<usize, usize> = out.covered.iter().enumerate().map(|(i, &o)| (o, i)).collect();
                let mut s = out.schedule.clone();
                for round in &mut s.rounds {
                    for acts in round.iter_mut() {
                        for a in acts.iter_mut() {
                            match a {
                                Action::Pick(o) => *o = renum[o],
                                Action::Drop(o) => *o = renum[o],
                                _ => {}
                            }
                        }
                    }
                }
                let rep = validate(&sub, &s);
                prop_assert!(rep.feasible, "{:?}", rep.violations);
                prop_assert!(rep.max_preemptions() <= 1);
                for c in &calls {
                    prop_assert!(c.makespan <= c.bound, "{:?}", c);
                }
            }
        }
    }
}
