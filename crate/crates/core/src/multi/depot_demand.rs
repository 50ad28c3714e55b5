use crate::model::{Action, Metric, Schedule};
use crate::structures::{default_alpha, sparse_spanner, Spanner, SpannerError};

/// An object to move between two depots, given as indices into the depot list.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DepotObject {
    pub object: usize,
    pub from: usize,
    pub to: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DepotDemandPlan {
    /// Depot vertices; vehicle `i` of `schedule` sits at `depots[i]`.
    pub depots: Vec<usize>,
    pub alpha: usize,
    /// Demand edges between depot indices, one per moving object.
    pub demand_edges: Vec<(usize, usize)>,
    pub spanner: Option<Spanner>,
    /// Longest spanner edge in the metric; no round takes more than four times it.
    pub max_edge: i64,
    /// Hop path of each moving object, aligned with `demand_edges`.
    pub paths: Vec<Vec<usize>>,
    pub schedule: Schedule,
}

/// Moves every object between depots along shortest hop paths of a sparse
/// spanner of the demand graph. Each round every vehicle runs out and back
/// over each spanner edge assigned to it, so every object in transit advances
/// one hop per round and all arrive within `2α` rounds.
pub fn depot_demand_schedule(
    metric: &Metric,
    depots: &[usize],
    objects: &[DepotObject],
) -> Result<DepotDemandPlan, SpannerError> {
    let t = depots.len();
    let alpha = default_alpha(t.max(1));
    let moving: Vec<DepotObject> = objects.iter().copied().filter(|o| o.from != o.to).collect();
    let demand_edges: Vec<(usize, usize)> = moving.iter().map(|o| (o.from, o.to)).collect();
    let mut plan = DepotDemandPlan {
        depots: depots.to_vec(),
        alpha,
        demand_edges: demand_edges.clone(),
        spanner: None,
        max_edge: 0,
        paths: Vec::new(),
        schedule: Schedule::new(t),
    };
    if moving.is_empty() {
        return Ok(plan);
    }
    let sp = sparse_spanner(t, &demand_edges, alpha)?;
    let paths: Vec<Vec<usize>> =
        moving.iter().map(|o| sp.path(o.from, o.to).expect("spanner keeps demand pairs connected")).collect();
    let mut hop = vec![0usize; moving.len()];
    for _ in 0..2 * alpha {
        // objects crossing the directed hop (a, b) this round
        let crossing = |a: usize, b: usize, hop: &[usize]| -> Vec<usize> {
            (0..moving.len())
                .filter(|&i| hop[i] + 1 < paths[i].len() && paths[i][hop[i]] == a && paths[i][hop[i] + 1] == b)
                .map(|i| moving[i].object)
                .collect()
        };
        let mut round = vec![Vec::new(); t];
        for v in 0..t {
            for &e in &sp.assigned[v] {
                let (a, b) = sp.edges[e];
                let w = if a == v { b } else { a };
                let out = crossing(v, w, &hop);
                let back = crossing(w, v, &hop);
                let acts = &mut round[v];
                acts.extend(out.iter().map(|&o| Action::Pick(o)));
                acts.push(Action::Move(depots[w]));
                acts.extend(out.iter().map(|&o| Action::Drop(o)));
                acts.extend(back.iter().map(|&o| Action::Pick(o)));
                acts.push(Action::Move(depots[v]));
                acts.extend(back.iter().map(|&o| Action::Drop(o)));
            }
        }
        for (i, h) in hop.iter_mut().enumerate() {
            if *h + 1 < paths[i].len() {
                *h += 1;
            }
        }
        plan.schedule.push_round(round);
    }
    debug_assert!((0..moving.len()).all(|i| hop[i] + 1 == paths[i].len()));
    plan.max_edge = sp.edges.iter().map(|&(a, b)| metric.d(depots[a], depots[b])).max().unwrap_or(0);
    plan.spanner = Some(sp);
    plan.paths = paths;
    Ok(plan)
}
