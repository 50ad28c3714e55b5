//! Instance generators: random metrics and graphs, grids, and the two gap
//! families (a star whose optimum beats every rooted-tree schedule, and
//! high-girth graphs whose depot-demand optimum grows with the girth).

use crate::format::{read_instance_file, FormatError};
use daride_core::rng::{rng_for, stream};
use daride_core::{metric_from_graph, Demand, Instance, Metric, ModelError, WeightedGraph};
use rand::Rng;
use std::collections::VecDeque;
use std::path::PathBuf;

/// Largest vertex count accepted by the random and grid generators.
pub const MAX_VERTICES: usize = 4096;

/// Named cubic cage graphs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cage {
    /// 10 vertices, girth 5.
    Petersen,
    /// 14 vertices, girth 6.
    Heawood,
}

impl Cage {
    pub fn edges(self) -> Vec<(usize, usize)> {
        match self {
            Cage::Petersen => {
                let mut e = Vec::new();
                for i in 0..5 {
                    e.push((i, (i + 1) % 5));
                    e.push((i, i + 5));
                    e.push((i + 5, (i + 2) % 5 + 5));
                }
                e
            }
            Cage::Heawood => {
                let mut e: Vec<(usize, usize)> = (0..14).map(|i| (i, (i + 1) % 14)).collect();
                e.extend((0..14).step_by(2).map(|i| (i, (i + 5) % 14)));
                e
            }
        }
    }

    pub fn vertices(self) -> usize {
        match self {
            Cage::Petersen => 10,
            Cage::Heawood => 14,
        }
    }

    pub fn girth(self) -> usize {
        match self {
            Cage::Petersen => 5,
            Cage::Heawood => 6,
        }
    }

    /// Analytic lower bound `g − 1` on the optimum of the one-demand-per-edge
    /// instance with one vehicle per vertex.
    pub fn optimum_lower_bound(self) -> i64 {
        self.girth() as i64 - 1
    }
}

impl std::str::FromStr for Cage {
    type Err = GenError;
    fn from_str(s: &str) -> Result<Self, GenError> {
        match s {
            "petersen" => Ok(Cage::Petersen),
            "heawood" => Ok(Cage::Heawood),
            _ => Err(GenError::BadParameter(format!("unknown cage `{s}`"))),
        }
    }
}

/// Parameters shared by the random generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Load {
    /// Number of demands.
    pub m: usize,
    /// Number of vehicles.
    pub q: usize,
    pub capacity: u64,
    /// Demand weights are drawn from `1..=max_weight`.
    pub max_weight: u64,
}

impl Load {
    pub fn unit(m: usize, q: usize, capacity: u64) -> Self {
        Load { m, q, capacity, max_weight: 1 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GenSpec {
    /// Random integer metric: shortest-path closure of a complete graph with
    /// lengths in `1..=max_dist`.
    RandomMetric { n: usize, max_dist: i64, load: Load, seed: u64 },
    /// Random connected graph: a random spanning tree plus `extra` edges,
    /// lengths in `1..=max_len`.
    RandomGraph { n: usize, extra: usize, max_len: i64, load: Load, seed: u64 },
    /// Unit grid.
    PlanarGrid { rows: usize, cols: usize, load: Load, seed: u64 },
    /// Star with `q` unit leaves, `q` vehicles at the centre and one demand
    /// between every ordered pair of leaves.
    StarGap { q: usize },
    /// Unit cage graph, one vehicle per vertex and one demand per edge.
    GirthGap { cage: Cage },
    File(PathBuf),
}

#[derive(Debug, thiserror::Error)]
pub enum GenError {
    #[error("bad generator parameter: {0}")]
    BadParameter(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Format(#[from] FormatError),
}

fn bad(msg: impl Into<String>) -> GenError {
    GenError::BadParameter(msg.into())
}

fn check_load(n: usize, load: &Load) -> Result<(), GenError> {
    if n == 0 || n > MAX_VERTICES {
        return Err(bad(format!("vertex count {n} outside 1..={MAX_VERTICES}")));
    }
    if load.q == 0 {
        return Err(bad("at least one vehicle is required"));
    }
    if load.capacity == 0 {
        return Err(bad("capacity must be at least 1"));
    }
    if load.max_weight == 0 || load.max_weight > load.capacity {
        return Err(bad(format!("max weight {} outside 1..={}", load.max_weight, load.capacity)));
    }
    if load.m > 0 && n < 2 {
        return Err(bad("demands need at least two vertices"));
    }
    Ok(())
}

/// Random depots and demands with distinct endpoints on `metric`.
fn populate(metric: Metric, load: &Load, rng: &mut impl Rng) -> Result<Instance, GenError> {
    let n = metric.n();
    let depots: Vec<usize> = (0..load.q).map(|_| rng.gen_range(0..n)).collect();
    let demands = (0..load.m)
        .map(|_| {
            let s = rng.gen_range(0..n);
            let t = (s + rng.gen_range(1..n)) % n;
            Demand { s, t, w: rng.gen_range(1..=load.max_weight) }
        })
        .collect();
    Ok(Instance::new(metric, demands, depots, load.capacity)?)
}

/// Shortest-path closure of a random complete weighted graph.
pub fn random_metric(n: usize, max_dist: i64, rng: &mut impl Rng) -> Metric {
    let mut rows = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let w = rng.gen_range(1..=max_dist);
            rows[i][j] = w;
            rows[j][i] = w;
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = rows[i][k] + rows[k][j];
                if via < rows[i][j] {
                    rows[i][j] = via;
                }
            }
        }
    }
    Metric::from_rows(rows).expect("shortest-path closure is a metric")
}

/// Random spanning tree plus `extra` random extra edges.
pub fn random_graph(n: usize, extra: usize, max_len: i64, rng: &mut impl Rng) -> WeightedGraph {
    let mut edges = Vec::new();
    for v in 1..n {
        edges.push((rng.gen_range(0..v), v, rng.gen_range(1..=max_len)));
    }
    if n >= 2 {
        for _ in 0..extra {
            let u = rng.gen_range(0..n);
            let v = (u + rng.gen_range(1..n)) % n;
            edges.push((u.min(v), u.max(v), rng.gen_range(1..=max_len)));
        }
    }
    WeightedGraph::new(n, edges).expect("generated edges are in range")
}

pub fn star_gap(q: usize) -> Result<Instance, GenError> {
    if q < 2 {
        return Err(bad("star-gap needs at least two leaves"));
    }
    let g = WeightedGraph::new(q + 1, (1..=q).map(|v| (0, v, 1)).collect())?;
    let metric = metric_from_graph(&g)?;
    let mut demands = Vec::new();
    for a in 1..=q {
        for b in 1..=q {
            if a != b {
                demands.push(Demand::unit(a, b));
            }
        }
    }
    let k = demands.len() as u64;
    Ok(Instance::new(metric, demands, vec![0; q], k)?.with_graph(g))
}

pub fn girth_gap(cage: Cage) -> Result<Instance, GenError> {
    let edges = cage.edges();
    let g = WeightedGraph::unit(cage.vertices(), &edges)?;
    let metric = metric_from_graph(&g)?;
    let demands: Vec<Demand> = edges.iter().map(|&(u, v)| Demand::unit(u, v)).collect();
    let k = demands.len() as u64;
    Ok(Instance::new(metric, demands, (0..cage.vertices()).collect(), k)?.with_graph(g))
}

/// Length of the shortest cycle of an undirected simple graph, by BFS from
/// every vertex; `None` for forests.
pub fn girth(n: usize, edges: &[(usize, usize)]) -> Option<usize> {
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    let mut best: Option<usize> = None;
    for s in 0..n {
        let mut dist = vec![usize::MAX; n];
        let mut parent = vec![usize::MAX; n];
        dist[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                if dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    parent[v] = u;
                    queue.push_back(v);
                } else if parent[u] != v {
                    let c = dist[u] + dist[v] + 1;
                    best = Some(best.map_or(c, |b| b.min(c)));
                }
            }
        }
    }
    best
}

pub fn gen(spec: &GenSpec) -> Result<Instance, GenError> {
    match spec {
        GenSpec::RandomMetric { n, max_dist, load, seed } => {
            check_load(*n, load)?;
            if *max_dist < 1 {
                return Err(bad("max distance must be at least 1"));
            }
            let mut rng = rng_for(*seed, stream::GENERATOR);
            let metric = random_metric(*n, *max_dist, &mut rng);
            populate(metric, load, &mut rng)
        }
        GenSpec::RandomGraph { n, extra, max_len, load, seed } => {
            check_load(*n, load)?;
            if *max_len < 1 {
                return Err(bad("max edge length must be at least 1"));
            }
            let mut rng = rng_for(*seed, stream::GENERATOR);
            let g = random_graph(*n, *extra, *max_len, &mut rng);
            let metric = metric_from_graph(&g)?;
            Ok(populate(metric, load, &mut rng)?.with_graph(g))
        }
        GenSpec::PlanarGrid { rows, cols, load, seed } => {
            check_load(rows * cols, load)?;
            let mut rng = rng_for(*seed, stream::GENERATOR);
            let g = WeightedGraph::grid(*rows, *cols);
            let metric = metric_from_graph(&g)?;
            Ok(populate(metric, load, &mut rng)?.with_graph(g))
        }
        GenSpec::StarGap { q } => star_gap(*q),
        GenSpec::GirthGap { cage } => girth_gap(*cage),
        GenSpec::File(path) => Ok(read_instance_file(path)?),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use daride_core::lower_bounds::lb_max;
    use daride_core::model::t;

    #[test]
    fn star_gap_shape() {
        let inst = star_gap(3).unwrap();
        assert_eq!(inst.n(), 4);
        assert_eq!(inst.depots, vec![0, 0, 0]);
        assert_eq!(inst.m(), 6);
    }

    #[test]
    fn cages_have_their_girth() {
        for cage in [Cage::Petersen, Cage::Heawood] {
            let e = cage.edges();
            assert_eq!(e.len(), cage.vertices() * 3 / 2);
            let mut deg = vec![0; cage.vertices()];
            for &(u, v) in &e {
                deg[u] += 1;
                deg[v] += 1;
            }
            assert!(deg.iter().all(|&d| d == 3));
            assert_eq!(girth(cage.vertices(), &e), Some(cage.girth()));
        }
    }

    #[test]
    fn petersen_gap_instance() {
        let inst = girth_gap(Cage::Petersen).unwrap();
        assert_eq!((inst.n(), inst.q(), inst.m()), (10, 10, 15));
        assert_eq!(lb_max(&inst).combined, t(1));
    }

    #[test]
    fn girth_of_small_graphs() {
        assert_eq!(girth(4, &[(0, 1), (1, 2), (2, 3)]), None);
        assert_eq!(girth(3, &[(0, 1), (1, 2), (2, 0)]), Some(3));
        assert_eq!(girth(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]), Some(4));
    }

    #[test]
    fn random_metric_is_deterministic() {
        let spec = GenSpec::RandomMetric { n: 6, max_dist: 9, load: Load::unit(3, 2, 2), seed: 1 };
        assert_eq!(gen(&spec).unwrap(), gen(&spec).unwrap());
        let other = GenSpec::RandomMetric { n: 6, max_dist: 9, load: Load::unit(3, 2, 2), seed: 2 };
        assert_ne!(gen(&spec).unwrap(), gen(&other).unwrap());
    }

    #[test]
    fn generated_instances_are_valid() {
        let load = Load { m: 8, q: 3, capacity: 4, max_weight: 3 };
        let specs = [
            GenSpec::RandomMetric { n: 7, max_dist: 20, load, seed: 4 },
            GenSpec::RandomGraph { n: 12, extra: 5, max_len: 4, load, seed: 4 },
            GenSpec::PlanarGrid { rows: 3, cols: 4, load, seed: 4 },
        ];
        for s in &specs {
            let inst = gen(s).unwrap();
            inst.check().unwrap();
            assert_eq!((inst.m(), inst.q()), (8, 3));
            assert!(inst.demands.iter().all(|d| d.s != d.t && d.w <= 3));
        }
    }

    #[test]
    fn bad_parameters_are_rejected() {
        let load = Load { m: 2, q: 1, capacity: 2, max_weight: 3 };
        assert!(gen(&GenSpec::RandomMetric { n: 4, max_dist: 5, load, seed: 0 }).is_err());
        assert!(gen(&GenSpec::RandomMetric { n: 4, max_dist: 0, load: Load::unit(1, 1, 1), seed: 0 }).is_err());
        assert!(gen(&GenSpec::RandomMetric { n: 4, max_dist: 3, load: Load::unit(1, 0, 1), seed: 0 }).is_err());
        assert!(gen(&GenSpec::StarGap { q: 1 }).is_err());
        assert!("dodecahedron".parse::<Cage>().is_err());
    }
}
