//! Exact desk-scale oracles.
//!
//! [`oracle_makespan`] searches timestamped preemptive schedules. Vehicles act
//! in order of their clocks; a vehicle may move to a vertex, drop or pick
//! objects there, wait until another vehicle's clock, or return home for
//! good. The search is iterative deepening on an admissible makespan bound
//! with per-iteration memoisation of failed states. The optimal timestamped
//! schedule is then cut into barrier rounds at every drop time, which keeps
//! its makespan and makes every hand-over cross a round boundary.
//!
//! [`oracle_cvrp`] solves single-depot capacitated routing by dynamic
//! programming over destination subsets.

use daride_core::lower_bounds::lb_max;
use daride_core::single::CvrpItem;
use daride_core::{validate, Action, Instance, Metric, Position, Schedule, Time};
use num_traits::ToPrimitive;
use std::collections::HashSet;

pub const MAX_VERTICES: usize = 6;
pub const MAX_DEMANDS: usize = 3;
pub const MAX_VEHICLES: usize = 2;
pub const MAX_CAPACITY: u64 = 2;
pub const MAX_CVRP_DESTINATIONS: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("instance too large for the exact oracle: {0}")]
    TooLarge(String),
    #[error("distinct vertices {0} and {1} are at distance zero")]
    ZeroDistance(usize, usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleSolution {
    pub makespan: Time,
    /// Round schedule attaining `makespan`.
    pub witness: Schedule,
    /// Search nodes expanded over all iterations.
    pub nodes: u64,
}

/// Whether `inst` is within the makespan oracle's limits.
pub fn within_limits(inst: &Instance) -> Result<(), OracleError> {
    if inst.n() > MAX_VERTICES || inst.m() > MAX_DEMANDS || inst.q() > MAX_VEHICLES || inst.capacity > MAX_CAPACITY {
        return Err(OracleError::TooLarge(format!(
            "n={} m={} q={} k={}, limits n≤{MAX_VERTICES} m≤{MAX_DEMANDS} q≤{MAX_VEHICLES} k≤{MAX_CAPACITY}",
            inst.n(),
            inst.m(),
            inst.q(),
            inst.capacity
        )));
    }
    for u in 0..inst.n() {
        for v in u + 1..inst.n() {
            if inst.metric.d(u, v) == 0 {
                return Err(OracleError::ZeroDistance(u, v));
            }
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct Veh {
    pos: usize,
    clock: i64,
    load: u64,
    done: bool,
    /// Moved or waited without an event since; another move is pointless.
    settled: bool,
    /// Picked at the current clock; drops come first at a stop.
    picked: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Obj {
    At { v: usize, avail: i64 },
    In(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct State {
    veh: Vec<Veh>,
    obj: Vec<Obj>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Step {
    Move(usize),
    Pick(usize),
    Drop(usize),
    WaitUntil(i64),
    Finish,
}

struct Search<'a> {
    inst: &'a Instance,
    seen: HashSet<State>,
    next: i64,
    nodes: u64,
    path: Vec<(usize, Step, i64)>,
}

impl Search<'_> {
    fn d(&self, u: usize, v: usize) -> i64 {
        self.inst.metric.d(u, v)
    }

    fn delivered(&self, o: usize, s: &State) -> bool {
        matches!(s.obj[o], Obj::At { v, .. } if v == self.inst.demands[o].t)
    }

    /// Admissible bound on the makespan of any completion of `s`.
    fn bound(&self, s: &State) -> i64 {
        let inst = self.inst;
        let active: Vec<usize> = (0..s.veh.len()).filter(|&j| !s.veh[j].done).collect();
        let mut f = 0;
        for (j, v) in s.veh.iter().enumerate() {
            f = f.max(if v.done { v.clock } else { v.clock + self.d(v.pos, inst.depots[j]) });
        }
        for (o, ob) in s.obj.iter().enumerate() {
            let t = inst.demands[o].t;
            // whoever drops it at `t` still has to get home
            let home = || active.iter().map(|&j| self.d(t, inst.depots[j])).min().unwrap();
            match *ob {
                Obj::In(j) => {
                    let v = &s.veh[j];
                    f = f.max(v.clock + self.d(v.pos, t) + home());
                }
                Obj::At { v, avail } if v != t => {
                    if active.is_empty() {
                        return i64::MAX;
                    }
                    let reach = active.iter().map(|&j| s.veh[j].clock + self.d(s.veh[j].pos, v)).min().unwrap();
                    f = f.max(reach.max(avail) + self.d(v, t) + home());
                }
                Obj::At { .. } => {}
            }
        }
        f
    }

    fn successors(&self, s: &State, j: usize) -> Vec<(Step, State)> {
        let inst = self.inst;
        let v = &s.veh[j];
        let mut out = Vec::new();
        if !v.picked {
            for o in 0..s.obj.len() {
                if s.obj[o] == Obj::In(j) {
                    let mut n = s.clone();
                    n.obj[o] = Obj::At { v: v.pos, avail: v.clock };
                    n.veh[j].load -= inst.demands[o].w;
                    n.veh[j].settled = false;
                    out.push((Step::Drop(o), n));
                }
            }
        }
        for o in 0..s.obj.len() {
            if let Obj::At { v: at, avail } = s.obj[o] {
                let w = inst.demands[o].w;
                if at == v.pos && avail <= v.clock && at != inst.demands[o].t && v.load + w <= inst.capacity {
                    let mut n = s.clone();
                    n.obj[o] = Obj::In(j);
                    n.veh[j].load += w;
                    n.veh[j].settled = false;
                    n.veh[j].picked = true;
                    out.push((Step::Pick(o), n));
                }
            }
        }
        if !v.settled {
            for x in 0..inst.n() {
                if x != v.pos {
                    let mut n = s.clone();
                    let nv = &mut n.veh[j];
                    nv.clock += self.d(v.pos, x);
                    nv.pos = x;
                    nv.settled = true;
                    nv.picked = false;
                    out.push((Step::Move(x), n));
                }
            }
        }
        let later = (0..s.veh.len()).filter(|&i| !s.veh[i].done && s.veh[i].clock > v.clock).map(|i| s.veh[i].clock).min();
        if let Some(c) = later {
            let mut n = s.clone();
            n.veh[j].clock = c;
            n.veh[j].settled = true;
            n.veh[j].picked = false;
            out.push((Step::WaitUntil(c), n));
        }
        if v.load == 0 {
            let mut n = s.clone();
            let nv = &mut n.veh[j];
            nv.clock += self.d(v.pos, inst.depots[j]);
            nv.pos = inst.depots[j];
            nv.done = true;
            out.push((Step::Finish, n));
        }
        out
    }

    fn dfs(&mut self, s: State, threshold: i64) -> bool {
        let f = self.bound(&s);
        if f > threshold {
            self.next = self.next.min(f);
            return false;
        }
        let all_done = s.veh.iter().all(|v| v.done);
        if all_done && (0..s.obj.len()).all(|o| self.delivered(o, &s)) {
            return true;
        }
        if all_done || !self.seen.insert(s.clone()) {
            return false;
        }
        self.nodes += 1;
        let low = s.veh.iter().filter(|v| !v.done).map(|v| v.clock).min().unwrap();
        for j in 0..s.veh.len() {
            if s.veh[j].done || s.veh[j].clock != low {
                continue;
            }
            for (step, n) in self.successors(&s, j) {
                self.path.push((j, step, s.veh[j].clock));
                if self.dfs(n, threshold) {
                    return true;
                }
                self.path.pop();
            }
        }
        false
    }
}

/// Exact minimum makespan over preemptive schedules, with a witness.
pub fn oracle_makespan(inst: &Instance) -> Result<OracleSolution, OracleError> {
    within_limits(inst)?;
    let init = State {
        veh: inst
            .depots
            .iter()
            .map(|&r| Veh { pos: r, clock: 0, load: 0, done: false, settled: false, picked: false })
            .collect(),
        obj: inst.demands.iter().map(|d| Obj::At { v: d.s, avail: 0 }).collect(),
    };
    let mut search = Search { inst, seen: HashSet::new(), next: i64::MAX, nodes: 0, path: Vec::new() };
    let lb = lb_max(inst).combined.ceil().to_integer().to_i64().expect("bound fits in i64");
    let mut threshold = lb.max(search.bound(&init));
    loop {
        search.seen.clear();
        search.next = i64::MAX;
        search.path.clear();
        if search.dfs(init.clone(), threshold) {
            break;
        }
        assert!(search.next != i64::MAX, "every instance within limits is solvable");
        threshold = search.next;
    }
    let (makespan, witness) = to_rounds(inst, &search.path);
    debug_assert!({
        let r = validate(inst, &witness);
        r.feasible && r.makespan == makespan
    });
    Ok(OracleSolution { makespan, witness, nodes: search.nodes })
}

enum Timed {
    Travel { from: usize, to: usize, start: i64, end: i64 },
    Wait { start: i64, end: i64 },
    Pick(usize, i64),
    Drop(usize, i64),
}

/// Turns the search path into per-vehicle timed actions and cuts them into
/// rounds at every drop time.
fn to_rounds(inst: &Instance, path: &[(usize, Step, i64)]) -> (Time, Schedule) {
    let q = inst.q();
    let mut pos = inst.depots.clone();
    let mut timed: Vec<Vec<Timed>> = (0..q).map(|_| Vec::new()).collect();
    let mut finish = 0i64;
    for &(j, step, clock) in path {
        match step {
            Step::Move(x) => {
                let end = clock + inst.metric.d(pos[j], x);
                timed[j].push(Timed::Travel { from: pos[j], to: x, start: clock, end });
                pos[j] = x;
            }
            Step::Finish => {
                let r = inst.depots[j];
                let end = clock + inst.metric.d(pos[j], r);
                if pos[j] != r {
                    timed[j].push(Timed::Travel { from: pos[j], to: r, start: clock, end });
                    pos[j] = r;
                }
                finish = finish.max(end);
            }
            Step::WaitUntil(c) => timed[j].push(Timed::Wait { start: clock, end: c }),
            Step::Pick(o) => timed[j].push(Timed::Pick(o, clock)),
            Step::Drop(o) => timed[j].push(Timed::Drop(o, clock)),
        }
    }
    let mut cuts: Vec<i64> =
        timed.iter().flatten().filter_map(|e| if let Timed::Drop(_, c) = e { Some(*c) } else { None }).collect();
    cuts.sort_unstable();
    cuts.dedup();
    let end_of = |w: usize| cuts.get(w).copied().unwrap_or(i64::MAX);
    let mut rounds: Vec<Vec<Vec<Action>>> = vec![vec![Vec::new(); q]; cuts.len() + 1];
    for (j, evs) in timed.iter().enumerate() {
        let mut w = 0;
        for e in evs {
            match *e {
                Timed::Drop(o, c) => {
                    w = w.max(cuts.partition_point(|&b| b < c));
                    rounds[w][j].push(Action::Drop(o));
                }
                Timed::Pick(o, c) => {
                    w = w.max(cuts.partition_point(|&b| b <= c));
                    rounds[w][j].push(Action::Pick(o));
                }
                Timed::Travel { from, to, start, end } => {
                    while end_of(w) <= start {
                        w += 1;
                    }
                    while end > end_of(w) {
                        let off = Time::from_integer((end_of(w) - start) as i128);
                        rounds[w][j].push(Action::move_to(&Position::along(&inst.metric, from, to, off)));
                        w += 1;
                    }
                    rounds[w][j].push(Action::Move(to));
                }
                Timed::Wait { start, end } => {
                    while end_of(w) <= start {
                        w += 1;
                    }
                    let mut at = start;
                    while end > end_of(w) {
                        rounds[w][j].push(Action::Wait(Time::from_integer((end_of(w) - at) as i128)));
                        at = end_of(w);
                        w += 1;
                    }
                    rounds[w][j].push(Action::Wait(Time::from_integer((end - at) as i128)));
                }
            }
        }
    }
    let mut s = Schedule::from_rounds(q, rounds);
    s.drop_empty_rounds();
    (Time::from_integer(finish as i128), s)
}

/// Minimum total length of trips from `depot`, each carrying items of total
/// weight at most `k`, that deliver every item to its vertex.
pub fn oracle_cvrp(metric: &Metric, depot: usize, items: &[CvrpItem], k: u64) -> Result<i64, OracleError> {
    let items: Vec<CvrpItem> = items.iter().copied().filter(|i| i.vertex != depot).collect();
    let p = items.len();
    if p > MAX_CVRP_DESTINATIONS {
        return Err(OracleError::TooLarge(format!("{p} destinations, limit {MAX_CVRP_DESTINATIONS}")));
    }
    if items.iter().any(|i| i.weight > k) {
        return Err(OracleError::TooLarge(format!("an item is heavier than capacity {k}")));
    }
    let full = 1usize << p;
    const INF: i64 = i64::MAX / 4;
    // path[S][l]: shortest walk from the depot through S ending at item l
    let mut path = vec![vec![INF; p]; full];
    for l in 0..p {
        path[1 << l][l] = metric.d(depot, items[l].vertex);
    }
    for s in 1..full {
        for l in 0..p {
            let cur = path[s][l];
            if cur >= INF {
                continue;
            }
            for x in 0..p {
                if s >> x & 1 == 0 {
                    let n = s | 1 << x;
                    let c = cur + metric.d(items[l].vertex, items[x].vertex);
                    if c < path[n][x] {
                        path[n][x] = c;
                    }
                }
            }
        }
    }
    let weight = |s: usize| -> u64 { (0..p).filter(|&l| s >> l & 1 == 1).map(|l| items[l].weight).sum() };
    let trip: Vec<i64> = (0..full)
        .map(|s| {
            if s == 0 || weight(s) > k {
                INF
            } else {
                (0..p).filter(|&l| s >> l & 1 == 1).map(|l| path[s][l] + metric.d(items[l].vertex, depot)).min().unwrap()
            }
        })
        .collect();
    let mut best = vec![INF; full];
    best[0] = 0;
    for s in 1..full {
        let low = s & s.wrapping_neg();
        let rest = s ^ low;
        // sub ranges over subsets of `rest`; the trip is `sub | low`
        let mut sub = rest;
        loop {
            let tset = sub | low;
            if trip[tset] < INF && best[s ^ tset] < INF {
                best[s] = best[s].min(trip[tset] + best[s ^ tset]);
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest;
        }
    }
    Ok(best[full - 1])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{gen, GenSpec, Load};
    use daride_core::model::t;
    use daride_core::{metric_from_graph, Demand, WeightedGraph};
    use itertools::Itertools;
    use proptest::prelude::*;

    fn path_metric(n: usize) -> Metric {
        metric_from_graph(&WeightedGraph::path(n)).unwrap()
    }

    #[test]
    fn forced_route() {
        let m = Metric::from_rows(vec![vec![0, 3, 5], vec![3, 0, 4], vec![5, 4, 0]]).unwrap();
        let inst = Instance::new(m, vec![Demand::unit(1, 2)], vec![0], 1).unwrap();
        let sol = oracle_makespan(&inst).unwrap();
        assert_eq!(sol.makespan, t(3 + 4 + 5));
        assert!(validate(&inst, &sol.witness).feasible);
    }

    #[test]
    fn object_already_home() {
        let inst = Instance::new(path_metric(3), vec![Demand::unit(1, 1)], vec![1], 1).unwrap();
        let sol = oracle_makespan(&inst).unwrap();
        assert_eq!(sol.makespan, t(0));
        assert!(sol.witness.is_empty());
    }

    /// Two vehicles at the ends of a 4-path, two objects crossing it.
    fn crossing(depots: Vec<usize>) -> Instance {
        Instance::new(path_metric(4), vec![Demand::unit(0, 3), Demand::unit(3, 0)], depots, 1).unwrap()
    }

    #[test]
    fn cooperation_beats_one_vehicle() {
        let both = oracle_makespan(&crossing(vec![0, 3])).unwrap();
        let r = validate(&crossing(vec![0, 3]), &both.witness);
        assert!(r.feasible, "{:?}", r.violations);
        assert_eq!(r.makespan, both.makespan);
        let alone = [0, 3].map(|d| oracle_makespan(&crossing(vec![d])).unwrap().makespan);
        assert_eq!(alone, [t(6), t(6)]);
        assert!(both.makespan < t(6));
        assert_eq!(both.makespan, t(4));
    }

    #[test]
    fn handover_needs_a_round_boundary() {
        // vehicle 0 brings the object to the middle, vehicle 1 takes it on
        let inst = Instance::new(path_metric(5), vec![Demand::unit(0, 4)], vec![0, 4], 1).unwrap();
        let sol = oracle_makespan(&inst).unwrap();
        assert_eq!(sol.makespan, t(4));
        let r = validate(&inst, &sol.witness);
        assert!(r.feasible, "{:?}", r.violations);
        assert_eq!(r.makespan, t(4));
    }

    #[test]
    fn limits_are_enforced() {
        let inst = Instance::new(path_metric(7), vec![], vec![0], 1).unwrap();
        assert!(matches!(oracle_makespan(&inst), Err(OracleError::TooLarge(_))));
        let inst = Instance::new(path_metric(3), vec![Demand::unit(0, 1); 4], vec![0], 1).unwrap();
        assert!(oracle_makespan(&inst).is_err());
        let inst = Instance::new(path_metric(3), vec![], vec![0; 3], 1).unwrap();
        assert!(oracle_makespan(&inst).is_err());
        let inst = Instance::new(path_metric(3), vec![], vec![0], 3).unwrap();
        assert!(oracle_makespan(&inst).is_err());
        let zero = Metric::from_rows(vec![vec![0, 0], vec![0, 0]]).unwrap();
        let inst = Instance::new(zero, vec![], vec![0], 1).unwrap();
        assert_eq!(oracle_makespan(&inst), Err(OracleError::ZeroDistance(0, 1)));
    }

    /// Independent check on unit graphs: breadth-first search over unit time
    /// steps, where at each instant vehicles drop, then pick, then step to a
    /// neighbour or stay.
    fn unit_step_feasible(g: &WeightedGraph, inst: &Instance, horizon: usize) -> bool {
        let adj = g.adjacency();
        let q = inst.q();
        let m = inst.m();
        // object location: vertex `v` as v, vehicle j as n + j
        type S = (Vec<usize>, Vec<usize>);
        let n = inst.n();
        let mut layer: HashSet<S> = HashSet::from([(inst.depots.clone(), inst.demands.iter().map(|d| d.s).collect())]);
        for step in 0..=horizon {
            // event closure at this instant: any sequence of drops then picks
            let mut closed: HashSet<S> = HashSet::new();
            let mut stack: Vec<S> = layer.into_iter().collect();
            while let Some(s) = stack.pop() {
                if !closed.insert(s.clone()) {
                    continue;
                }
                for o in 0..m {
                    let loc = s.1[o];
                    if loc >= n {
                        let mut x = s.clone();
                        x.1[o] = s.0[loc - n];
                        stack.push(x);
                    } else {
                        for j in 0..q {
                            let load = s.1.iter().filter(|&&l| l == n + j).count() as u64;
                            if s.0[j] == loc && load < inst.capacity {
                                let mut x = s.clone();
                                x.1[o] = n + j;
                                stack.push(x);
                            }
                        }
                    }
                }
            }
            if closed.iter().any(|s| s.0 == inst.depots && (0..m).all(|o| s.1[o] == inst.demands[o].t)) {
                return true;
            }
            if step == horizon {
                break;
            }
            let mut next = HashSet::new();
            for s in closed {
                let moves: Vec<Vec<usize>> =
                    s.0.iter().map(|&p| std::iter::once(p).chain(adj[p].iter().map(|&(v, _)| v)).collect()).collect();
                for choice in moves.iter().multi_cartesian_product() {
                    next.insert((choice.into_iter().copied().collect(), s.1.clone()));
                }
            }
            layer = next;
        }
        false
    }

    fn unit_graph_instance(g: &WeightedGraph, seed: u64, m: usize, q: usize, k: u64) -> Instance {
        use rand::Rng;
        let mut r = daride_core::rng::rng_for(seed, 77);
        let n = g.n;
        let metric = metric_from_graph(g).unwrap();
        let demands = (0..m).map(|_| Demand::unit(r.gen_range(0..n), r.gen_range(0..n))).collect();
        let depots = (0..q).map(|_| r.gen_range(0..n)).collect();
        Instance::new(metric, demands, depots, k).unwrap()
    }

    #[test]
    fn agrees_with_unit_step_search() {
        let graphs = [
            WeightedGraph::path(4),
            WeightedGraph::cycle(5),
            WeightedGraph::new(5, vec![(0, 1, 1), (0, 2, 1), (0, 3, 1), (0, 4, 1)]).unwrap(),
            WeightedGraph::grid(2, 3),
        ];
        let mut checked = 0;
        for (gi, g) in graphs.iter().enumerate() {
            for seed in 0..6u64 {
                let inst = unit_graph_instance(g, seed * 10 + gi as u64, 2 + (seed as usize % 2), 1 + (seed as usize % 2), 1 + seed % 2);
                let sol = oracle_makespan(&inst).unwrap();
                let opt = sol.makespan.to_integer() as usize;
                assert!(validate(&inst, &sol.witness).feasible);
                assert!(unit_step_feasible(g, &inst, opt), "optimum {opt} not reachable by unit steps");
                if opt > 0 {
                    assert!(!unit_step_feasible(g, &inst, opt - 1), "unit steps beat the optimum {opt}");
                }
                checked += 1;
            }
        }
        assert_eq!(checked, 24);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn witness_is_feasible_and_optimal_bound(seed in 0u64..10_000, n in 2usize..7, m in 1usize..4, q in 1usize..3, k in 1u64..3) {
            let inst = gen(&GenSpec::RandomMetric { n, max_dist: 9, load: Load::unit(m, q, k), seed }).unwrap();
            let sol = oracle_makespan(&inst).unwrap();
            let r = validate(&inst, &sol.witness);
            prop_assert!(r.feasible, "{:?}", r.violations);
            prop_assert_eq!(r.makespan, sol.makespan);
            prop_assert!(lb_max(&inst).combined <= sol.makespan);
        }
    }

    /// Exhaustive trip partitions: every set partition into capacity-feasible
    /// blocks, each block routed by its best permutation.
    fn cvrp_brute(metric: &Metric, depot: usize, items: &[CvrpItem], k: u64) -> i64 {
        fn trip(metric: &Metric, depot: usize, block: &[CvrpItem]) -> i64 {
            block
                .iter()
                .permutations(block.len())
                .map(|p| {
                    let mut seq = vec![depot];
                    seq.extend(p.iter().map(|i| i.vertex));
                    metric.closed_walk_length(&seq)
                })
                .min()
                .unwrap()
        }
        fn rec(metric: &Metric, depot: usize, rest: &[CvrpItem], blocks: &mut Vec<Vec<CvrpItem>>, k: u64, best: &mut i64) {
            let Some((&first, tail)) = rest.split_first() else {
                let cost = blocks.iter().map(|b| trip(metric, depot, b)).sum();
                *best = (*best).min(cost);
                return;
            };
            for b in 0..blocks.len() {
                if blocks[b].iter().map(|i| i.weight).sum::<u64>() + first.weight <= k {
                    blocks[b].push(first);
                    rec(metric, depot, tail, blocks, k, best);
                    blocks[b].pop();
                }
            }
            blocks.push(vec![first]);
            rec(metric, depot, tail, blocks, k, best);
            blocks.pop();
        }
        let mut best = i64::MAX;
        rec(metric, depot, items, &mut Vec::new(), k, &mut best);
        if items.is_empty() {
            0
        } else {
            best
        }
    }

    fn items(vs: &[usize]) -> Vec<CvrpItem> {
        vs.iter().enumerate().map(|(o, &v)| CvrpItem { object: o, vertex: v, weight: 1 }).collect()
    }

    #[test]
    fn cvrp_one_destination() {
        let m = path_metric(5);
        assert_eq!(oracle_cvrp(&m, 1, &items(&[4]), 1).unwrap(), 6);
        assert_eq!(oracle_cvrp(&m, 1, &items(&[]), 1).unwrap(), 0);
        assert_eq!(oracle_cvrp(&m, 1, &items(&[1, 1]), 1).unwrap(), 0);
    }

    #[test]
    fn cvrp_uncapacitated_is_tsp() {
        use rand::Rng;
        let mut r = daride_core::rng::rng_for(5, 1);
        for _ in 0..10 {
            let m = crate::gen::random_metric(7, 20, &mut r);
            let vs: Vec<usize> = (1..7).collect();
            let tsp = vs
                .iter()
                .permutations(vs.len())
                .map(|p| {
                    let mut seq = vec![0];
                    seq.extend(p.into_iter().copied());
                    m.closed_walk_length(&seq)
                })
                .min()
                .unwrap();
            assert_eq!(oracle_cvrp(&m, 0, &items(&vs), 6).unwrap(), tsp);
            let _ = r.gen::<u8>();
        }
    }

    #[test]
    fn cvrp_size_limit() {
        let m = path_metric(12);
        let vs: Vec<usize> = (1..12).collect();
        assert!(oracle_cvrp(&m, 0, &items(&vs), 2).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]
        #[test]
        fn cvrp_matches_partition_enumeration(seed in 0u64..10_000, k in 1u64..4, weighted in any::<bool>()) {
            use rand::Rng;
            let mut r = daride_core::rng::rng_for(seed, 3);
            let m = crate::gen::random_metric(8, 15, &mut r);
            let its: Vec<CvrpItem> = (0..6)
                .map(|o| CvrpItem { object: o, vertex: r.gen_range(0..8), weight: if weighted { r.gen_range(1..=k) } else { 1 } })
                .collect();
            let active: Vec<CvrpItem> = its.iter().copied().filter(|i| i.vertex != 0).collect();
            prop_assert_eq!(oracle_cvrp(&m, 0, &its, k).unwrap(), cvrp_brute(&m, 0, &active, k));
        }
    }
}
