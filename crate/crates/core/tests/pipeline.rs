use daride_core::lower_bounds::lb_max;
use daride_core::model::t;
use daride_core::multi::{cap_solve, uncap_solve, weighted_solve, SolverConfig};
use daride_core::{metric_from_graph, validate, Demand, Instance, Schedule, WeightedGraph};

fn grid_instance(capacity: u64) -> Instance {
    let g = WeightedGraph::grid(4, 4);
    let m = metric_from_graph(&g).unwrap();
    let demands = vec![Demand::unit(0, 15), Demand::unit(3, 12), Demand::unit(5, 10), Demand::unit(12, 1)];
    Instance::new(m, demands, vec![0, 15, 6], capacity).unwrap().with_graph(g)
}

#[test]
fn every_solver_is_feasible_and_above_the_lower_bound() {
    let cfg = SolverConfig::default();
    let inst = grid_instance(4);
    let lb = lb_max(&inst).combined;
    for (s, _) in [uncap_solve(&inst).unwrap(), cap_solve(&inst, &cfg).unwrap(), weighted_solve(&inst, &cfg).unwrap()] {
        let r = validate(&inst, &s);
        assert!(r.feasible, "{:?}", r.violations);
        assert!(r.makespan >= lb);
    }
}

#[test]
fn unit_capacity_is_respected() {
    let inst = grid_instance(1);
    let (s, _) = cap_solve(&inst, &SolverConfig::default()).unwrap();
    let r = validate(&inst, &s);
    assert!(r.feasible, "{:?}", r.violations);
    assert!(r.max_preemptions() <= 1);
}

#[test]
fn empty_schedule_is_rejected_unless_nothing_moves() {
    let inst = grid_instance(2);
    assert!(!validate(&inst, &Schedule::new(inst.q())).feasible);
    let idle = inst.restrict(&[0], &[]);
    let r = validate(&idle, &Schedule::new(idle.q()));
    assert!(r.feasible);
    assert_eq!(r.makespan, t(0));
}
