use super::tour::{SingleTour, Stop};
use super::tsp::{tsp_tour, Tour};
use crate::model::{t, Metric, Time};
use std::collections::BTreeMap;

/// An object to carry between the depot and `vertex`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CvrpItem {
    pub object: usize,
    pub vertex: usize,
    pub weight: u64,
}

/// Checkpoint positions `v_1 < … < v_t` along a tour whose position 0 is the
/// root. Positions in `[v_{p-1}, v_p)` form sub-tour `p` (1-based, `v_0 = 0`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckpointSet {
    pub checkpoints: Vec<usize>,
    pub beta: Time,
}

impl CheckpointSet {
    pub fn subtour_of(&self, pos: usize) -> usize {
        self.checkpoints.partition_point(|&c| c <= pos) + 1
    }

    /// Start position of sub-tour `p`.
    fn start(&self, p: usize) -> usize {
        if p == 1 {
            0
        } else {
            self.checkpoints[p - 2]
        }
    }

    /// `d(0, v_{p-1}) + path(v_{p-1}, u) ≤ β·d(0, u)` for every position.
    pub fn property_one(&self, metric: &Metric, tour: &Tour) -> bool {
        let pre = tour.prefix(metric);
        let root = tour.order[0];
        (0..tour.order.len()).all(|u| {
            let s = self.start(self.subtour_of(u));
            t(metric.d(root, tour.order[s]) + pre[u] - pre[s]) <= self.beta * metric.dt(root, tour.order[u])
        })
    }

    /// `Σ_p d(0, v_p) ≤ d(C) / (β - 1)`.
    pub fn property_two(&self, metric: &Metric, tour: &Tour) -> bool {
        let root = tour.order[0];
        let sum: i64 = self.checkpoints.iter().map(|&c| metric.d(root, tour.order[c])).sum();
        t(sum) * (self.beta - t(1)) <= t(tour.length)
    }
}

/// Walks the tour and declares `u` a checkpoint whenever reaching it from the
/// previous checkpoint along the tour would exceed `β·d(0, u)`.
pub fn select_checkpoints(metric: &Metric, tour: &Tour, beta: Time) -> CheckpointSet {
    assert!(beta > t(1), "beta must exceed 1");
    let pre = tour.prefix(metric);
    let root = tour.order[0];
    let mut last = 0;
    let mut checkpoints = Vec::new();
    for u in 1..tour.order.len() {
        let via = metric.d(root, tour.order[last]) + pre[u] - pre[last];
        if t(via) > beta * metric.dt(root, tour.order[u]) {
            checkpoints.push(u);
            last = u;
        }
    }
    CheckpointSet { checkpoints, beta }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CvrpSolution {
    pub tour: SingleTour,
    /// TSP tour over the depot and every item vertex.
    pub tsp: Tour,
    pub checkpoints: CheckpointSet,
    /// Chosen grouping offset per sub-tour.
    pub offsets: Vec<usize>,
}

/// `(1 + 2/(β-1))·d(C) + (c/k)·Σ w·d(r, v)` with `c = 2` for unit weights and
/// `c = 4` otherwise.
pub fn cvrp_length_bound(metric: &Metric, depot: usize, items: &[CvrpItem], k: u64, beta: Time, tsp_len: i64) -> Time {
    let unit = items.iter().all(|i| i.weight == 1);
    let flow: i64 = items.iter().map(|i| i.weight as i64 * metric.d(depot, i.vertex)).sum();
    let c = if unit { 2 } else { 4 };
    (t(1) + t(2) / (beta - t(1))) * t(tsp_len) + Time::new(c * flow as i128, k as i128)
}

/// Splits a sub-tour's items (in tour order) into capacity-feasible groups.
/// Unit weights: the first group holds `s` items, then groups of `k`. Weighted:
/// items heavier than `k/2` ride alone, the rest are cut into windows of
/// `⌈k/2⌉` weight units by their last unit, shifted by `s`.
fn groupings(items: &[CvrpItem], k: u64) -> Vec<Vec<Vec<CvrpItem>>> {
    if items.is_empty() {
        return vec![Vec::new()];
    }
    if items.iter().all(|i| i.weight == 1) {
        let k = k as usize;
        let shifts = k.min(items.len());
        return (0..=shifts.min(k - 1))
            .map(|s| {
                let mut gs: Vec<Vec<CvrpItem>> = Vec::new();
                if s > 0 {
                    gs.push(items[..s].to_vec());
                }
                gs.extend(items[s..].chunks(k).map(|c| c.to_vec()));
                gs
            })
            .collect();
    }
    let heavy: Vec<CvrpItem> = items.iter().copied().filter(|i| 2 * i.weight > k).collect();
    let light: Vec<CvrpItem> = items.iter().copied().filter(|i| 2 * i.weight <= k).collect();
    let c = k.div_ceil(2);
    (0..c)
        .map(|s| {
            let mut gs: Vec<Vec<CvrpItem>> = heavy.iter().map(|&h| vec![h]).collect();
            let mut by_window: BTreeMap<u64, Vec<CvrpItem>> = BTreeMap::new();
            let mut unit = 0u64;
            for &i in &light {
                unit += i.weight;
                let last = unit - 1;
                by_window.entry((last + c - s) / c).or_default().push(i);
            }
            gs.extend(by_window.into_values());
            gs
        })
        .collect()
}

/// Delivery trip: pick the group at the depot, drop along tour order.
fn trip(depot: usize, group: &[CvrpItem], pos: &BTreeMap<usize, usize>) -> Vec<Stop> {
    let mut stops = vec![Stop { vertex: depot, drops: Vec::new(), picks: group.iter().map(|i| i.object).collect() }];
    let mut sorted = group.to_vec();
    sorted.sort_by_key(|i| (pos[&i.vertex], i.object));
    for i in sorted {
        match stops.last_mut() {
            Some(s) if s.vertex == i.vertex && s.picks.is_empty() => s.drops.push(i.object),
            _ => stops.push(Stop { vertex: i.vertex, drops: vec![i.object], picks: Vec::new() }),
        }
    }
    stops.push(Stop::visit(depot));
    stops
}

fn trips_length(metric: &Metric, depot: usize, stops: &[Stop]) -> i64 {
    let mut at = depot;
    let mut len = 0;
    for s in stops {
        len += metric.d(at, s.vertex);
        at = s.vertex;
    }
    len + metric.d(at, depot)
}

/// Non-preemptive delivery of every item from `depot`: a TSP tour is cut at
/// checkpoints into sub-tours, and each sub-tour's items are grouped by the
/// cheapest of the rotated groupings.
pub fn cvrp_bounded_delay(metric: &Metric, depot: usize, items: &[CvrpItem], k: u64, beta: Time) -> CvrpSolution {
    assert!(items.iter().all(|i| i.weight >= 1 && i.weight <= k), "item heavier than capacity");
    let active: Vec<CvrpItem> = items.iter().copied().filter(|i| i.vertex != depot).collect();
    let mut vs = vec![depot];
    vs.extend(active.iter().map(|i| i.vertex));
    let tsp = tsp_tour(metric, &vs);
    let checkpoints = select_checkpoints(metric, &tsp, beta);
    let pos: BTreeMap<usize, usize> = tsp.order.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let subtours = checkpoints.checkpoints.len() + 1;
    let mut per: Vec<Vec<CvrpItem>> = vec![Vec::new(); subtours];
    for &i in &active {
        per[checkpoints.subtour_of(pos[&i.vertex]) - 1].push(i);
    }
    let mut tour = SingleTour::new(depot);
    let mut offsets = Vec::with_capacity(subtours);
    for mut group_items in per {
        group_items.sort_by_key(|i| (pos[&i.vertex], i.object));
        let (best, stops) = groupings(&group_items, k)
            .into_iter()
            .enumerate()
            .map(|(s, gs)| (s, gs.iter().flat_map(|g| trip(depot, g, &pos)).collect::<Vec<_>>()))
            .min_by_key(|(s, stops)| (trips_length(metric, depot, stops), *s))
            .unwrap();
        offsets.push(best);
        tour.stops.extend(stops);
    }
    CvrpSolution { tour, tsp, checkpoints, offsets }
}

/// Collection tour bringing every item from its vertex to `depot`: the time
/// reversal of the delivery tour for the same items.
pub fn cvrp_collect(metric: &Metric, depot: usize, items: &[CvrpItem], k: u64, beta: Time) -> CvrpSolution {
    let mut sol = cvrp_bounded_delay(metric, depot, items, k, beta);
    sol.tour = sol.tour.reversed();
    sol
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::single::TourDemand;
    use crate::validate;
    use proptest::prelude::*;

    fn line(n: usize) -> Metric {
        Metric::from_rows((0..n).map(|i| (0..n).map(|j| (i as i64 - j as i64).abs()).collect()).collect()).unwrap()
    }

    fn random_metric(n: usize, seed: u64) -> Metric {
        use rand::Rng;
        let mut r = crate::rng::rng_for(seed, 4);
        let pts: Vec<(i64, i64)> = (0..n).map(|_| (r.gen_range(0..20), r.gen_range(0..20))).collect();
        Metric::from_rows(
            pts.iter().map(|a| pts.iter().map(|b| (a.0 - b.0).abs() + (a.1 - b.1).abs()).collect()).collect(),
        )
        .unwrap()
    }

    #[test]
    fn single_far_object() {
        let m = line(10);
        let sol = cvrp_bounded_delay(&m, 0, &[CvrpItem { object: 0, vertex: 9, weight: 1 }], 1, t(2));
        assert_eq!(sol.tour.length(&m), 18);
        assert_eq!(sol.tour.delays(&m)[&0], 9);
        let col = cvrp_collect(&m, 0, &[CvrpItem { object: 0, vertex: 4, weight: 1 }], 1, t(2));
        assert_eq!(col.tour.length(&m), 8);
        assert!(col.tour.delays(&m)[&0] <= 8);
    }

    #[test]
    fn ample_capacity_gives_one_trip() {
        let m = line(8);
        let items: Vec<_> = (1..8).map(|v| CvrpItem { object: v, vertex: v, weight: 1 }).collect();
        let sol = cvrp_bounded_delay(&m, 0, &items, 100, t(1000));
        assert!(sol.checkpoints.checkpoints.is_empty());
        assert_eq!(sol.tour.length(&m), sol.tsp.length);
    }

    #[test]
    fn collinear_checkpoints() {
        let m = line(5);
        let tour = Tour { order: vec![0, 4, 2, 3, 1], length: m.closed_walk_length(&[0, 4, 2, 3, 1]) };
        let c = select_checkpoints(&m, &tour, t(2));
        assert!(c.property_one(&m, &tour));
        assert!(c.property_two(&m, &tour));
        // short tour: no checkpoints
        let short = tsp_tour(&m, &[0, 1]);
        assert!(select_checkpoints(&m, &short, t(2)).checkpoints.is_empty());
    }

    fn check_run(m: &Metric, depot: usize, items: &[CvrpItem], k: u64, beta: Time) -> Result<(), TestCaseError> {
        let sol = cvrp_bounded_delay(m, depot, items, k, beta);
        prop_assert!(sol.checkpoints.property_one(m, &sol.tsp));
        prop_assert!(sol.checkpoints.property_two(m, &sol.tsp));
        let delays = sol.tour.delays(m);
        for i in items {
            let d = delays.get(&i.object).copied().unwrap_or(0);
            prop_assert!(t(d) <= beta * m.dt(depot, i.vertex));
        }
        prop_assert!(t(sol.tour.length(m)) <= cvrp_length_bound(m, depot, items, k, beta, sol.tsp.length));
        let demands: Vec<TourDemand> =
            items.iter().map(|i| TourDemand { object: i.object, s: depot, t: i.vertex, w: i.weight }).collect();
        let (inst, s) = sol.tour.as_instance(m, &demands, k).unwrap();
        let r = validate(&inst, &s);
        prop_assert!(r.feasible, "{:?}", r.violations);
        prop_assert_eq!(r.max_preemptions(), 0);
        // collection mirror: same length, valid for reversed demands
        let col = cvrp_collect(m, depot, items, k, beta);
        prop_assert_eq!(col.tour.length(m), sol.tour.length(m));
        let rev: Vec<TourDemand> = demands.iter().map(|d| TourDemand { s: d.t, t: d.s, ..*d }).collect();
        let (inst, s) = col.tour.as_instance(m, &rev, k).unwrap();
        prop_assert!(validate(&inst, &s).feasible);
        Ok(())
    }

    proptest! {
        #[test]
        fn unit_items(seed in 0u64..5000, n in 2usize..11, k in 1u64..4, bi in 0usize..3, cnt in 0usize..9) {
            let m = random_metric(n, seed);
            let beta = [Time::new(3, 2), t(2), t(4)][bi];
            let items: Vec<CvrpItem> = (0..cnt).map(|o| CvrpItem { object: o, vertex: (o * 7 + seed as usize) % n, weight: 1 }).collect();
            check_run(&m, 0, &items, k, beta)?;
        }

        #[test]
        fn weighted_items(seed in 0u64..5000, n in 2usize..9, k in 1u64..7, cnt in 0usize..8) {
            use rand::Rng;
            let m = random_metric(n, seed);
            let mut r = crate::rng::rng_for(seed, 8);
            let items: Vec<CvrpItem> = (0..cnt).map(|o| CvrpItem { object: o, vertex: r.gen_range(0..n), weight: r.gen_range(1..=k) }).collect();
            check_run(&m, 0, &items, k, t(2))?;
        }
    }
}
