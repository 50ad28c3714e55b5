//! Lower bounds on the optimal makespan.

mod nsl;

pub use nsl::{nsl_oracle, nsl_solve, OracleError, RootedForest};

use crate::model::{t, Instance, Time};

/// Factor by which the heuristic forest cost is divided before it is used as a
/// lower bound.
pub const NSL_DIVISOR: i64 = 16;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LowerBoundSet {
    pub flow: Time,
    pub nsl: Time,
    pub max_pair: Time,
    pub max_src: Time,
    pub max_dst: Time,
    pub combined: Time,
}

impl LowerBoundSet {
    pub fn fields(&self) -> [(&'static str, Time); 6] {
        [
            ("flow", self.flow),
            ("nsl", self.nsl),
            ("max_pair", self.max_pair),
            ("max_src", self.max_src),
            ("max_dst", self.max_dst),
            ("combined", self.combined),
        ]
    }
}

/// `Σ w·d(s, t) / (q·k)`.
pub fn flow_lb(inst: &Instance) -> Time {
    let total: i128 = inst.demands.iter().map(|d| d.w as i128 * inst.metric.d(d.s, d.t) as i128).sum();
    Time::new(total, inst.q() as i128 * inst.capacity as i128)
}

/// `(max d(s, t), max d(R, s), max d(R, t))` over objects not yet at their
/// destination.
pub fn trivial_lbs(inst: &Instance) -> (Time, Time, Time) {
    let m = &inst.metric;
    let mut out = (0, 0, 0);
    for d in inst.demands.iter().filter(|d| d.s != d.t) {
        out.0 = out.0.max(m.d(d.s, d.t));
        out.1 = out.1.max(m.dist_to_set(d.s, &inst.depots));
        out.2 = out.2.max(m.dist_to_set(d.t, &inst.depots));
    }
    (t(out.0), t(out.1), t(out.2))
}

/// Terminals of the nurse-station-location bound: every source and destination
/// of an object not yet at its destination.
pub fn terminals(inst: &Instance) -> Vec<usize> {
    let mut v: Vec<usize> = inst.demands.iter().filter(|d| d.s != d.t).flat_map(|d| [d.s, d.t]).collect();
    v.sort_unstable();
    v.dedup();
    v
}

pub fn lb_max(inst: &Instance) -> LowerBoundSet {
    let flow = flow_lb(inst);
    let (max_pair, max_src, max_dst) = trivial_lbs(inst);
    let forest = nsl_solve(&inst.metric, &inst.depots, &terminals(inst));
    let nsl = Time::new(forest.cost as i128, NSL_DIVISOR as i128);
    let combined = [flow, nsl, max_pair, max_src, max_dst].into_iter().max().unwrap();
    LowerBoundSet { flow, nsl, max_pair, max_src, max_dst, combined }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{metric_from_graph, Demand, Metric, WeightedGraph};
    use proptest::prelude::*;

    fn line(n: usize) -> Metric {
        metric_from_graph(&WeightedGraph::path(n)).unwrap()
    }

    #[test]
    fn flow_examples() {
        let m = line(11);
        let inst = Instance::new(m.clone(), vec![], vec![0], 1).unwrap();
        assert_eq!(flow_lb(&inst), t(0));
        let inst = Instance::new(m.clone(), vec![Demand::unit(0, 10)], vec![0], 1).unwrap();
        assert_eq!(flow_lb(&inst), t(10));
        let inst = Instance::new(m, vec![Demand::unit(0, 3); 4], vec![0, 0], 3).unwrap();
        assert_eq!(flow_lb(&inst), t(2));
    }

    #[test]
    fn empty_instance_bounds_are_zero() {
        let inst = Instance::new(line(4), vec![], vec![1], 2).unwrap();
        let lb = lb_max(&inst);
        assert!(lb.fields().iter().all(|(_, v)| *v == t(0)));
    }

    #[test]
    fn petersen_demand_graph_bounds() {
        let mut e = Vec::new();
        for i in 0..5 {
            e.push((i, (i + 1) % 5));
            e.push((i, i + 5));
            e.push((i + 5, (i + 2) % 5 + 5));
        }
        let g = WeightedGraph::unit(10, &e).unwrap();
        let m = metric_from_graph(&g).unwrap();
        let demands = e.iter().map(|&(u, v)| Demand::unit(u, v)).collect();
        let inst = Instance::new(m, demands, (0..10).collect(), 15).unwrap();
        let (pair, src, dst) = trivial_lbs(&inst);
        assert_eq!((pair, src, dst), (t(1), t(0), t(0)));
        let lb = lb_max(&inst);
        assert_eq!(lb.nsl, t(0));
        assert_eq!(lb.combined, t(1));
    }

    proptest! {
        #[test]
        fn trivial_bounds_match_enumeration(seed in 0u64..500, nd in 1usize..4) {
            use rand::Rng;
            let mut r = crate::rng::rng_for(seed, 9);
            let pts: Vec<i64> = (0..6).map(|_| r.gen_range(0..20)).collect();
            let m = Metric::from_rows(pts.iter().map(|a| pts.iter().map(|b| (a - b).abs()).collect()).collect()).unwrap();
            let demands: Vec<Demand> = (0..3).map(|_| Demand::unit(r.gen_range(0..6), r.gen_range(0..6))).collect();
            let depots: Vec<usize> = (0..nd).map(|_| r.gen_range(0..6)).collect();
            let inst = Instance::new(m.clone(), demands.clone(), depots.clone(), 1).unwrap();
            let mut want = (0, 0, 0);
            for d in demands.iter().filter(|d| d.s != d.t) {
                want.0 = want.0.max(m.d(d.s, d.t));
                want.1 = want.1.max(depots.iter().map(|&x| m.d(x, d.s)).min().unwrap());
                want.2 = want.2.max(depots.iter().map(|&x| m.d(x, d.t)).min().unwrap());
            }
            prop_assert_eq!(trivial_lbs(&inst), (t(want.0), t(want.1), t(want.2)));
        }

        #[test]
        fn flow_scales_linearly(w in 1u64..5, q in 1usize..4, k in 5u64..8) {
            let one = Instance::new(line(6), vec![Demand::unit(0, 5), Demand::unit(2, 3)], vec![0; q], k).unwrap();
            let mut heavy = one.clone();
            for d in &mut heavy.demands { d.w = w; }
            prop_assert_eq!(flow_lb(&heavy), flow_lb(&one) * Time::from_integer(w as i128));
            prop_assert_eq!(flow_lb(&one) * Time::from_integer((q as u64 * k) as i128), t(6));
        }
    }
}
