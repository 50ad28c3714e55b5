use super::tour::{SingleTour, Stop};
use super::tsp::tsp_tour;
use crate::Metric;

/// A bundle of objects that travels from `source` to `target` as one unit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Job {
    pub source: usize,
    pub target: usize,
    pub objects: Vec<usize>,
}

/// Follows a TSP tour over the depot and all job endpoints, stopping only at
/// sources of pending jobs. There it carries each job to its target, returning
/// to the source between jobs, then heads for the next source. The vehicle
/// holds at most one job at a time.
pub fn stacker_crane(metric: &Metric, depot: usize, jobs: &[Job]) -> SingleTour {
    let mut vs = vec![depot];
    vs.extend(jobs.iter().flat_map(|j| [j.source, j.target]));
    let order = tsp_tour(metric, &vs).order;
    let mut pending: Vec<bool> = jobs.iter().map(|j| j.source != j.target).collect();
    let mut tour = SingleTour::new(depot);
    for v in order {
        for (i, j) in jobs.iter().enumerate() {
            if pending[i] && j.source == v {
                pending[i] = false;
                tour.push(Stop { vertex: v, drops: Vec::new(), picks: j.objects.clone() });
                tour.push(Stop { vertex: j.target, drops: j.objects.clone(), picks: Vec::new() });
            }
        }
    }
    tour
}
