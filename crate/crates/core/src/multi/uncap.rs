use super::depot_demand::{depot_demand_schedule, DepotObject};
use super::{SolveError, SolveTrace};
use crate::lower_bounds::{lb_max, nsl_solve, terminals, RootedForest};
use crate::model::{makespan, Action, Instance, Metric, Schedule, WeightedGraph};
use crate::structures::{split_cover, CoverMode};
use std::collections::{BTreeMap, BTreeSet};

/// Closed walk around a tree from `root`, children in increasing order.
fn euler_walk(edges: &[(usize, usize)], root: usize) -> Vec<usize> {
    let mut adj: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &(u, v) in edges {
        adj.entry(u).or_default().push(v);
        adj.entry(v).or_default().push(u);
    }
    for a in adj.values_mut() {
        a.sort_unstable();
    }
    let mut walk = vec![root];
    let mut seen = BTreeSet::from([root]);
    // (vertex, next child index)
    let mut stack = vec![(root, 0usize)];
    while let Some((v, i)) = stack.pop() {
        let kids = adj.get(&v).map_or(&[][..], |a| a.as_slice());
        if let Some(&c) = kids[i..].iter().find(|c| !seen.contains(c)) {
            let at = kids.iter().position(|&x| x == c).unwrap();
            stack.push((v, at + 1));
            seen.insert(c);
            walk.push(c);
            stack.push((c, 0));
        } else if let Some(&(p, _)) = stack.last() {
            walk.push(p);
        }
    }
    walk
}

/// Where each object stands between the phases of the reduction.
struct Reduction {
    forest: RootedForest,
    src: Vec<usize>,
    dst: Vec<usize>,
    /// Objects picked up in the collection phase.
    collected: Vec<bool>,
}

impl Reduction {
    fn new(inst: &Instance) -> Self {
        let forest = nsl_solve(&inst.metric, &inst.depots, &terminals(inst));
        // objects already in place are never moved; their owner is irrelevant
        let owner = |v: usize, moving: bool| forest.owner(v).unwrap_or_else(|| if moving { panic!("forest misses {v}") } else { 0 });
        let src = inst.demands.iter().map(|d| owner(d.s, d.s != d.t)).collect();
        let dst = inst.demands.iter().map(|d| owner(d.t, d.s != d.t)).collect();
        let collected = inst
            .demands
            .iter()
            .zip(&src)
            .map(|(d, &j)| d.s != d.t && d.s != forest.roots[j])
            .collect();
        Reduction { forest, src, dst, collected }
    }

    /// Vertex each object rests at after collection.
    fn after_collect(&self, inst: &Instance, o: usize) -> usize {
        if self.collected[o] {
            self.forest.roots[self.src[o]]
        } else {
            inst.demands[o].s
        }
    }

    /// Objects still short of their destination after collection, with the
    /// depot vertex they must reach before delivery.
    fn transfers(&self, inst: &Instance) -> Vec<(usize, usize, usize)> {
        (0..inst.m())
            .filter(|&o| self.after_collect(inst, o) != inst.demands[o].t)
            .map(|o| (o, self.after_collect(inst, o), self.forest.roots[self.dst[o]]))
            .collect()
    }

    /// Each vehicle walks its tree picking the objects it owns and leaves them
    /// at its depot.
    fn collect_round(&self, inst: &Instance) -> Vec<Vec<Action>> {
        (0..inst.q())
            .map(|j| {
                let walk = euler_walk(&self.forest.trees[j], self.forest.roots[j]);
                let mut acts = Vec::new();
                let mut carried = Vec::new();
                let mut seen = BTreeSet::from([walk[0]]);
                for &x in &walk[1..] {
                    acts.push(Action::Move(x));
                    if seen.insert(x) {
                        for o in (0..inst.m()).filter(|&o| self.collected[o] && self.src[o] == j && inst.demands[o].s == x) {
                            acts.push(Action::Pick(o));
                            carried.push(o);
                        }
                    }
                }
                acts.extend(carried.into_iter().map(Action::Drop));
                acts
            })
            .collect()
    }

    /// Each vehicle loads the objects waiting at its depot for its tree and
    /// walks the tree dropping them.
    fn deliver_round(&self, inst: &Instance, pending: &BTreeSet<usize>) -> Vec<Vec<Action>> {
        (0..inst.q())
            .map(|j| {
                let root = self.forest.roots[j];
                let mine: Vec<usize> = pending.iter().copied().filter(|&o| self.dst[o] == j).collect();
                let mut acts: Vec<Action> = mine.iter().map(|&o| Action::Pick(o)).collect();
                if mine.is_empty() {
                    return acts;
                }
                let walk = euler_walk(&self.forest.trees[j], root);
                let mut seen = BTreeSet::from([root]);
                for &x in &walk[1..] {
                    acts.push(Action::Move(x));
                    if seen.insert(x) {
                        acts.extend(mine.iter().filter(|&&o| inst.demands[o].t == x).map(|&o| Action::Drop(o)));
                    }
                }
                acts
            })
            .collect()
    }
}

fn assemble(inst: &Instance, red: &Reduction, middle: Schedule) -> (Schedule, SolveTrace) {
    let mut s = Schedule::new(inst.q());
    s.push_round(red.collect_round(inst));
    s.append(middle);
    let pending: BTreeSet<usize> =
        red.transfers(inst).into_iter().filter(|&(o, _, r)| r != inst.demands[o].t).map(|(o, _, _)| o).collect();
    s.push_round(red.deliver_round(inst, &pending));
    s.drop_empty_rounds();
    let mut trace = SolveTrace::new(lb_max(inst));
    trace.makespan = makespan(inst, &s);
    (s, trace)
}

/// Uncapacitated solver: collect every object to the depot of a
/// nurse-station-location tree holding its source, move it between depots
/// over a sparse spanner, then deliver it over the tree holding its
/// destination.
pub fn uncap_solve(inst: &Instance) -> Result<(Schedule, SolveTrace), SolveError> {
    let red = Reduction::new(inst);
    let depots = inst.depot_vertices();
    let idx = |v: usize| depots.binary_search(&v).unwrap();
    let objects: Vec<DepotObject> = red
        .transfers(inst)
        .into_iter()
        .map(|(o, a, b)| DepotObject { object: o, from: idx(a), to: idx(b) })
        .collect();
    let plan = depot_demand_schedule(&inst.metric, &depots, &objects)?;
    let middle = plan.schedule.lift(inst.q(), &inst.vehicle_per_depot());
    Ok(assemble(inst, &red, middle))
}

/// Two-round depot-to-depot schedule over a sparse cover of `graph` at scale
/// `γ = max d(a, b)`. Each object goes to the centre of the first cluster
/// holding both its endpoints, by the vehicle at its source in round one and
/// on to its target by the vehicle there in round two. Centres are the
/// lowest-index depot of the cluster. `depots` are distinct vertices, vehicle
/// `i` standing at `depots[i]`.
pub fn cluster_center_schedule(
    graph: &WeightedGraph,
    metric: &Metric,
    depots: &[usize],
    objects: &[DepotObject],
    r: usize,
) -> Result<Schedule, SolveError> {
    let mut s = Schedule::new(depots.len());
    let moving: Vec<DepotObject> = objects.iter().copied().filter(|o| o.from != o.to).collect();
    if moving.is_empty() {
        return Ok(s);
    }
    let gamma = moving.iter().map(|o| metric.d(depots[o.from], depots[o.to])).max().unwrap().max(1);
    let cover = split_cover(graph, gamma, r, CoverMode::Sparse);
    let is_depot: BTreeSet<usize> = depots.iter().copied().collect();
    let center = |c: usize| {
        let cl = &cover.clusters[c];
        cl.iter().copied().find(|v| is_depot.contains(v)).unwrap_or(cl[0])
    };
    let mut home = Vec::with_capacity(moving.len());
    for o in &moving {
        let c = cover
            .first_containing(&[depots[o.from], depots[o.to]])
            .ok_or(SolveError::Uncovered(o.object))?;
        home.push(c);
    }
    let mut out_round = vec![Vec::new(); depots.len()];
    let mut in_round = vec![Vec::new(); depots.len()];
    for (i, &v) in depots.iter().enumerate() {
        for c in cover.containing(v) {
            let hub = center(c);
            if hub == v {
                continue;
            }
            let outgoing: Vec<usize> =
                (0..moving.len()).filter(|&k| home[k] == c && moving[k].from == i).map(|k| moving[k].object).collect();
            if !outgoing.is_empty() {
                let acts = &mut out_round[i];
                acts.extend(outgoing.iter().map(|&o| Action::Pick(o)));
                acts.push(Action::Move(hub));
                acts.extend(outgoing.iter().map(|&o| Action::Drop(o)));
                acts.push(Action::Move(v));
            }
            let incoming: Vec<usize> =
                (0..moving.len()).filter(|&k| home[k] == c && moving[k].to == i).map(|k| moving[k].object).collect();
            if !incoming.is_empty() {
                let acts = &mut in_round[i];
                acts.push(Action::Move(hub));
                acts.extend(incoming.iter().map(|&o| Action::Pick(o)));
                acts.push(Action::Move(v));
                acts.extend(incoming.iter().map(|&o| Action::Drop(o)));
            }
        }
    }
    s.push_round(out_round);
    s.push_round(in_round);
    Ok(s)
}

/// Uncapacitated solver for excluded-minor graphs: the same collection and
/// delivery phases as [`uncap_solve`] around [`cluster_center_schedule`].
/// Objects change vehicles only at depot vertices, at most three times.
pub fn uncap_solve_minor_free(inst: &Instance, r: usize) -> Result<(Schedule, SolveTrace), SolveError> {
    let graph = inst.graph.as_ref().ok_or(SolveError::MissingGraph)?;
    let red = Reduction::new(inst);
    let depots = inst.depot_vertices();
    let idx = |v: usize| depots.binary_search(&v).unwrap();
    let objects: Vec<DepotObject> = red
        .transfers(inst)
        .into_iter()
        .map(|(o, a, b)| DepotObject { object: o, from: idx(a), to: idx(b) })
        .collect();
    let core = cluster_center_schedule(graph, &inst.metric, &depots, &objects, r)?;
    let middle = core.lift(inst.q(), &inst.vehicle_per_depot());
    Ok(assemble(inst, &red, middle))
}
