use super::cvrp::{cvrp_bounded_delay, cvrp_collect, CvrpItem};
use super::tour::{SingleTour, TourDemand};
use super::tsp::tsp_tour;
use crate::model::{t, Metric, WeightedGraph};
use crate::structures::{split_cover, CoverMode};
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinorFreeConfig {
    /// Excluded-minor size handed to the cover construction.
    pub r: usize,
    /// Per-object delay bound `T_i ≤ c3·d(s_i, t_i)`.
    pub c3: i64,
}

impl Default for MinorFreeConfig {
    fn default() -> Self {
        MinorFreeConfig { r: 5, c3: 16 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MinorFreeTour {
    pub tour: SingleTour,
    /// Transfer vertex of each object that changes vertex.
    pub transfer: BTreeMap<usize, usize>,
    /// Distance scales `j` used (demands with `2^(j-1) < d ≤ 2^j`).
    pub scales: Vec<u32>,
    pub centers: usize,
}

fn scale_of(d: i64) -> u32 {
    let mut j = 0;
    while (1i64 << j) < d {
        j += 1;
    }
    j
}

/// Picks transfer centres inside a cluster so that every demand satisfies
/// `d(s, c) + d(c, t) ≤ (c3/2)·d(s, t)`: greedily take the cluster vertex that
/// admits the most remaining demands (lowest index on ties).
fn centres(metric: &Metric, cluster: &[usize], demands: &[TourDemand], c3: i64) -> Vec<(usize, Vec<TourDemand>)> {
    let ok = |c: usize, d: &TourDemand| 2 * (metric.d(d.s, c) + metric.d(c, d.t)) <= c3 * metric.d(d.s, d.t);
    let mut left: Vec<TourDemand> = demands.to_vec();
    let mut out = Vec::new();
    while !left.is_empty() {
        let mut cands: Vec<usize> = cluster.to_vec();
        cands.extend(left.iter().map(|d| d.s));
        cands.sort_unstable();
        cands.dedup();
        let c = cands
            .into_iter()
            .max_by_key(|&c| (left.iter().filter(|d| ok(c, d)).count(), std::cmp::Reverse(c)))
            .unwrap();
        let (take, rest): (Vec<_>, Vec<_>) = left.into_iter().partition(|d| ok(c, d));
        out.push((c, take));
        left = rest;
    }
    out
}

/// 1-preemptive tour on a graph metric. Demands are bucketed by distance scale
/// `2^j`; per scale a separated cover at `γ = 2^j` assigns each demand to a
/// cluster holding both endpoints; per color class the tour visits cluster
/// centres in TSP order, collecting the cluster's objects to the centre and
/// delivering them from there.
pub fn preemptive_tour_minor_free(
    graph: &WeightedGraph,
    metric: &Metric,
    root: usize,
    demands: &[TourDemand],
    k: u64,
    cfg: &MinorFreeConfig,
) -> MinorFreeTour {
    let mut by_scale: BTreeMap<u32, Vec<TourDemand>> = BTreeMap::new();
    for d in demands.iter().filter(|d| d.s != d.t) {
        by_scale.entry(scale_of(metric.d(d.s, d.t))).or_default().push(*d);
    }
    let mut tour = SingleTour::new(root);
    let mut transfer = BTreeMap::new();
    let mut centers = 0;
    for (&j, ds) in &by_scale {
        let cover = split_cover(graph, 1i64 << j, cfg.r, CoverMode::Separated);
        let mut by_cluster: BTreeMap<usize, Vec<TourDemand>> = BTreeMap::new();
        for d in ds {
            let c = cover
                .first_containing(&[d.s, d.t])
                .expect("pairs within the cover scale share a cluster");
            by_cluster.entry(c).or_default().push(*d);
        }
        let mut by_color: BTreeMap<&Vec<u8>, Vec<(usize, Vec<TourDemand>)>> = BTreeMap::new();
        for (c, group) in by_cluster {
            for pair in centres(metric, &cover.clusters[c], &group, cfg.c3) {
                by_color.entry(&cover.colors[c]).or_default().push(pair);
            }
        }
        for stops in by_color.values() {
            let mut vs = vec![root];
            vs.extend(stops.iter().map(|(c, _)| *c));
            let order = tsp_tour(metric, &vs).order;
            let mut at: BTreeMap<usize, Vec<&Vec<TourDemand>>> = BTreeMap::new();
            for (c, g) in stops {
                at.entry(*c).or_default().push(g);
            }
            for v in order {
                for g in at.get(&v).into_iter().flatten() {
                    centers += 1;
                    let src: Vec<CvrpItem> = g.iter().map(|d| CvrpItem { object: d.object, vertex: d.s, weight: d.w }).collect();
                    let dst: Vec<CvrpItem> = g.iter().map(|d| CvrpItem { object: d.object, vertex: d.t, weight: d.w }).collect();
                    tour.splice(&cvrp_collect(metric, v, &src, k, t(2)).tour);
                    tour.splice(&cvrp_bounded_delay(metric, v, &dst, k, t(2)).tour);
                    for d in g.iter() {
                        transfer.insert(d.object, v);
                    }
                }
            }
        }
    }
    MinorFreeTour { tour, transfer, scales: by_scale.keys().copied().collect(), centers }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{metric_from_graph, validate};

    #[test]
    fn grid_delays_and_preemptions() {
        use rand::Rng;
        let g = WeightedGraph::grid(8, 8);
        let m = metric_from_graph(&g).unwrap();
        for seed in 0..5 {
            let mut r = crate::rng::rng_for(seed, 2);
            let d: Vec<TourDemand> =
                (0..12).map(|o| TourDemand { object: o, s: r.gen_range(0..64), t: r.gen_range(0..64), w: 1 }).collect();
            let cfg = MinorFreeConfig::default();
            let mf = preemptive_tour_minor_free(&g, &m, 0, &d, 2, &cfg);
            let (inst, s) = mf.tour.as_instance(&m, &d, 2).unwrap();
            let rep = validate(&inst, &s);
            assert!(rep.feasible, "{:?}", rep.violations);
            assert!(rep.max_preemptions() <= 1);
            for (i, o) in rep.objects.iter().enumerate() {
                assert!(o.in_vehicle_time <= t(cfg.c3 * m.d(d[i].s, d[i].t)));
            }
        }
    }

    #[test]
    fn one_cluster_one_centre() {
        let g = WeightedGraph::path(4);
        let m = metric_from_graph(&g).unwrap();
        let d = [TourDemand { object: 0, s: 1, t: 2, w: 1 }, TourDemand { object: 1, s: 2, t: 1, w: 1 }];
        let mf = preemptive_tour_minor_free(&g, &m, 0, &d, 1, &MinorFreeConfig::default());
        assert_eq!(mf.scales, vec![0]);
        assert_eq!(mf.centers, 1);
    }

    #[test]
    fn two_scales() {
        let g = WeightedGraph::path(12);
        let m = metric_from_graph(&g).unwrap();
        let d = [TourDemand { object: 0, s: 1, t: 2, w: 1 }, TourDemand { object: 1, s: 2, t: 10, w: 1 }];
        let mf = preemptive_tour_minor_free(&g, &m, 0, &d, 1, &MinorFreeConfig::default());
        assert_eq!(mf.scales, vec![0, 3]);
        let (inst, s) = mf.tour.as_instance(&m, &d, 1).unwrap();
        assert!(validate(&inst, &s).feasible);
    }
}
