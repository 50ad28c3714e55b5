use crate::model::WeightedGraph;
use std::collections::{BTreeSet, VecDeque};

/// Cluster diameters are checked against `DIAMETER_FACTOR · r² · scale`.
pub const DIAMETER_FACTOR: i64 = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoverMode {
    /// Every `γ`-ball lies inside some cluster; each vertex is in few clusters.
    Sparse,
    /// Every pair within `γ` shares a cluster; clusters of one color are at
    /// least `γ` apart.
    Separated,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterCover {
    pub clusters: Vec<Vec<usize>>,
    /// Color word in `{0,1,2}^r` of each cluster.
    pub colors: Vec<Vec<u8>>,
    pub gamma: i64,
    /// Band width the decomposition ran with (`γ`, or `2γ` in sparse mode).
    pub scale: i64,
    pub r: usize,
    pub mode: CoverMode,
    /// Largest cluster diameter measured in the input graph.
    pub max_diameter: i64,
}

/// Replaces every edge of length `w` by a path of `w` unit edges. Original
/// vertices keep their ids; new ones are appended.
pub fn edge_subdivide(g: &WeightedGraph) -> WeightedGraph {
    let mut n = g.n;
    let mut edges = Vec::new();
    for &(u, v, w) in &g.edges {
        let mut prev = u;
        for _ in 1..w {
            edges.push((prev, n, 1));
            prev = n;
            n += 1;
        }
        edges.push((prev, v, 1));
    }
    WeightedGraph { n, edges }
}

fn unit_adjacency(g: &WeightedGraph) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); g.n];
    for &(u, v, _) in &g.edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    for a in &mut adj {
        a.sort_unstable();
        a.dedup();
    }
    adj
}

fn bfs(adj: &[Vec<usize>], s: usize, allowed: &[bool]) -> Vec<usize> {
    let mut dist = vec![usize::MAX; adj.len()];
    dist[s] = 0;
    let mut q = VecDeque::from([s]);
    while let Some(u) = q.pop_front() {
        for &v in &adj[u] {
            if allowed[v] && dist[v] == usize::MAX {
                dist[v] = dist[u] + 1;
                q.push_back(v);
            }
        }
    }
    dist
}

struct Splitter<'a> {
    adj: &'a [Vec<usize>],
    original: usize,
    scale: usize,
    r: usize,
    out: Vec<(Vec<usize>, Vec<u8>)>,
}

impl Splitter<'_> {
    /// `h` is a connected vertex set of the unit graph, `terms ⊆ h`.
    fn split(&mut self, h: &[usize], terms: &[usize], word: Vec<u8>) {
        if word.len() == self.r {
            let c: Vec<usize> = terms.iter().copied().filter(|&v| v < self.original).collect();
            if !c.is_empty() {
                self.out.push((c, word));
            }
            return;
        }
        let n = self.adj.len();
        let mut in_h = vec![false; n];
        for &v in h {
            in_h[v] = true;
        }
        let root = *h.iter().min().unwrap();
        let level = bfs(self.adj, root, &in_h);
        let max_level = h.iter().map(|&v| level[v]).max().unwrap();
        let g = self.scale;
        let is_term: BTreeSet<usize> = terms.iter().copied().collect();
        for j in 0..3usize {
            for l in 0.. {
                let band_lo = (3 * l + j) * g;
                if band_lo > max_level {
                    break;
                }
                let band_hi = band_lo + 2 * g; // exclusive
                let win_lo = band_lo.saturating_sub(g);
                let win_hi = band_lo + 3 * g;
                let in_win: Vec<bool> =
                    (0..n).map(|v| in_h[v] && level[v] >= win_lo && level[v] <= win_hi).collect();
                let mut seen = vec![false; n];
                let mut starts: Vec<usize> = terms
                    .iter()
                    .copied()
                    .filter(|&v| level[v] >= band_lo && level[v] < band_hi)
                    .collect();
                starts.sort_unstable();
                for s in starts {
                    if seen[s] {
                        continue;
                    }
                    let mut comp = Vec::new();
                    let mut q = VecDeque::from([s]);
                    seen[s] = true;
                    while let Some(u) = q.pop_front() {
                        comp.push(u);
                        for &v in &self.adj[u] {
                            if in_win[v] && !seen[v] {
                                seen[v] = true;
                                q.push_back(v);
                            }
                        }
                    }
                    comp.sort_unstable();
                    let sub: Vec<usize> = comp
                        .iter()
                        .copied()
                        .filter(|v| is_term.contains(v) && level[*v] >= band_lo && level[*v] < band_hi)
                        .collect();
                    let mut w = word.clone();
                    w.push(j as u8);
                    self.split(&comp, &sub, w);
                }
            }
        }
    }
}

/// Recursive band decomposition of a connected graph. Each of `r` levels runs a
/// BFS from the lowest vertex of the current piece, cuts the levels into
/// windows of width `4·scale` shifted by `scale`, and keeps as terminals the
/// vertices in the inner `2·scale` band of each window.
pub fn split_cover(g: &WeightedGraph, gamma: i64, r: usize, mode: CoverMode) -> ClusterCover {
    assert!(gamma >= 1, "gamma must be positive");
    let scale = match mode {
        CoverMode::Separated => gamma,
        CoverMode::Sparse => 2 * gamma,
    };
    let unit = edge_subdivide(g);
    let adj = unit_adjacency(&unit);
    let mut sp = Splitter { adj: &adj, original: g.n, scale: scale as usize, r, out: Vec::new() };
    if g.n > 0 {
        let all: Vec<usize> = (0..unit.n).collect();
        sp.split(&all, &all, Vec::new());
    }
    let mut pairs = sp.out;
    pairs.sort();
    pairs.dedup();
    // diameters in the input graph = unit-graph distances between original vertices
    let everything = vec![true; unit.n];
    let dist: Vec<Vec<usize>> = (0..g.n).map(|v| bfs(&adj, v, &everything)).collect();
    let max_diameter = pairs
        .iter()
        .map(|(c, _)| {
            c.iter().flat_map(|&a| c.iter().map(move |&b| (a, b))).map(|(a, b)| dist[a][b]).max().unwrap_or(0)
        })
        .max()
        .unwrap_or(0) as i64;
    let (clusters, colors) = pairs.into_iter().unzip();
    ClusterCover { clusters, colors, gamma, scale, r, mode, max_diameter }
}

impl ClusterCover {
    pub fn diameter_bound(&self) -> i64 {
        DIAMETER_FACTOR * (self.r * self.r).max(1) as i64 * self.scale
    }

    pub fn within_diameter_bound(&self) -> bool {
        self.max_diameter <= self.diameter_bound()
    }

    pub fn num_colors(&self) -> usize {
        self.colors.iter().collect::<BTreeSet<_>>().len()
    }

    /// Largest number of clusters any vertex belongs to.
    pub fn multiplicity(&self, n: usize) -> usize {
        let mut c = vec![0; n];
        for cl in &self.clusters {
            for &v in cl {
                c[v] += 1;
            }
        }
        c.into_iter().max().unwrap_or(0)
    }

    /// Clusters containing vertex `v`.
    pub fn containing(&self, v: usize) -> Vec<usize> {
        (0..self.clusters.len()).filter(|&i| self.clusters[i].binary_search(&v).is_ok()).collect()
    }

    /// First cluster holding every vertex of `set`.
    pub fn first_containing(&self, set: &[usize]) -> Option<usize> {
        (0..self.clusters.len()).find(|&i| set.iter().all(|v| self.clusters[i].binary_search(v).is_ok()))
    }

    /// Every pair at distance at most `γ` shares a cluster.
    pub fn close_pairs_covered(&self, metric: &crate::Metric) -> bool {
        let n = metric.n();
        let member: Vec<Vec<usize>> = (0..n).map(|v| self.containing(v)).collect();
        (0..n).all(|u| {
            (u..n).all(|v| {
                metric.d(u, v) > self.gamma || member[u].iter().any(|c| member[v].binary_search(c).is_ok())
            })
        })
    }

    /// Distinct clusters of one color are at least `γ` apart.
    pub fn colors_separated(&self, metric: &crate::Metric) -> bool {
        let n = metric.n();
        let close: Vec<(usize, usize)> = (0..n)
            .flat_map(|u| (u..n).map(move |v| (u, v)))
            .filter(|&(u, v)| metric.d(u, v) < self.gamma)
            .collect();
        let words: BTreeSet<&Vec<u8>> = self.colors.iter().collect();
        words.into_iter().all(|w| {
            let mut label = vec![usize::MAX; n];
            for (i, c) in self.clusters.iter().enumerate() {
                if &self.colors[i] != w {
                    continue;
                }
                for &v in c {
                    if label[v] != usize::MAX {
                        return false; // overlapping clusters of one color
                    }
                    label[v] = i;
                }
            }
            close.iter().all(|&(u, v)| label[u] == usize::MAX || label[v] == usize::MAX || label[u] == label[v])
        })
    }

    /// Every ball `N(v, γ)` lies inside one cluster.
    pub fn balls_covered(&self, metric: &crate::Metric) -> bool {
        (0..metric.n()).all(|v| {
            let ball: Vec<usize> = (0..metric.n()).filter(|&u| metric.d(u, v) <= self.gamma).collect();
            self.first_containing(&ball).is_some()
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric_from_graph;
    use proptest::prelude::*;

    #[test]
    fn subdivision() {
        let g = WeightedGraph::path(4);
        assert_eq!(edge_subdivide(&g), g);
        let one = WeightedGraph::new(2, vec![(0, 1, 3)]).unwrap();
        let s = edge_subdivide(&one);
        assert_eq!((s.n, s.edges.len()), (4, 3));
        let tri = WeightedGraph::new(3, vec![(0, 1, 2), (1, 2, 3), (0, 2, 4)]).unwrap();
        let s = edge_subdivide(&tri);
        assert_eq!(s.edges.len(), 9);
        let a = metric_from_graph(&tri).unwrap();
        let b = metric_from_graph(&s).unwrap();
        for u in 0..3 {
            for v in 0..3 {
                assert_eq!(a.d(u, v), b.d(u, v));
            }
        }
    }

    #[test]
    fn huge_gamma_gives_one_cluster() {
        let g = WeightedGraph::grid(3, 3);
        let c = split_cover(&g, 10, 3, CoverMode::Separated);
        assert_eq!(c.clusters, vec![(0..9).collect::<Vec<_>>()]);
        assert_eq!(c.num_colors(), 1);
    }

    #[test]
    fn path_separated_cover() {
        let g = WeightedGraph::path(21);
        let m = metric_from_graph(&g).unwrap();
        let c = split_cover(&g, 2, 2, CoverMode::Separated);
        assert!(c.close_pairs_covered(&m));
        assert!(c.colors_separated(&m));
    }

    #[test]
    fn grid_colors_and_diameter() {
        let g = WeightedGraph::grid(8, 8);
        let c = split_cover(&g, 3, 5, CoverMode::Separated);
        assert!(c.num_colors() <= 243);
        assert!(c.within_diameter_bound(), "diameter {}", c.max_diameter);
    }

    /// Pairs of one cluster within γ of each other also have a cluster that
    /// contains a whole shortest path between them.
    #[test]
    fn shortest_paths_survive_inside_clusters() {
        let g = WeightedGraph::grid(5, 5);
        let m = metric_from_graph(&g).unwrap();
        let c = split_cover(&g, 2, 3, CoverMode::Separated);
        let adj = unit_adjacency(&g);
        for cl in &c.clusters {
            for &x in cl {
                for &y in cl {
                    if x >= y || m.d(x, y) > c.gamma {
                        continue;
                    }
                    // enumerate shortest x-y paths
                    let mut paths = vec![vec![x]];
                    for _ in 0..m.d(x, y) {
                        paths = paths
                            .into_iter()
                            .flat_map(|p| {
                                let last = *p.last().unwrap();
                                adj[last]
                                    .iter()
                                    .filter(|&&z| m.d(z, y) + 1 == m.d(last, y))
                                    .map(|&z| {
                                        let mut q = p.clone();
                                        q.push(z);
                                        q
                                    })
                                    .collect::<Vec<_>>()
                            })
                            .collect();
                    }
                    assert!(paths.iter().any(|p| c.first_containing(p).is_some()), "{x}-{y}");
                }
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn cover_invariants(rows in 1usize..7, cols in 1usize..7, gamma in 1i64..4, r in 1usize..4, w in 1i64..3) {
            let base = WeightedGraph::grid(rows, cols);
            let g = WeightedGraph::new(base.n, base.edges.iter().map(|&(u, v, _)| (u, v, w)).collect()).unwrap();
            let m = metric_from_graph(&g).unwrap();
            let sep = split_cover(&g, gamma, r, CoverMode::Separated);
            prop_assert!(sep.close_pairs_covered(&m));
            prop_assert!(sep.colors_separated(&m));
            prop_assert!(sep.num_colors() <= 3usize.pow(r as u32));
            prop_assert!(sep.multiplicity(g.n) <= 1 << r);
            let sparse = split_cover(&g, gamma, r, CoverMode::Sparse);
            prop_assert!(sparse.balls_covered(&m));
            prop_assert!(sparse.multiplicity(g.n) <= 1 << r);
        }
    }
}
