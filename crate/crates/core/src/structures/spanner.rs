use std::collections::VecDeque;

/// Sparse subgraph `A` of a demand graph on `t` vertices with every edge
/// assigned to one endpoint, at most two per vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Spanner {
    pub t: usize,
    pub alpha: usize,
    /// Edges `(u, v)` with `u < v`.
    pub edges: Vec<(usize, usize)>,
    /// Vertex each edge is assigned to.
    pub owner: Vec<usize>,
    /// Edge indices assigned to each vertex.
    pub assigned: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SpannerError {
    #[error("edge assignment stalled with {0} edges left")]
    Stalled(usize),
    #[error("vertex {0} out of range")]
    BadVertex(usize),
}

fn adjacency(t: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); t];
    for &(u, v) in edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    for a in &mut adj {
        a.sort_unstable();
    }
    adj
}

/// BFS hop distances from `s`, ignoring the edge `skip` if given.
fn hops_from(adj: &[Vec<usize>], s: usize, skip: Option<(usize, usize)>) -> Vec<usize> {
    let mut dist = vec![usize::MAX; adj.len()];
    dist[s] = 0;
    let mut q = VecDeque::from([s]);
    while let Some(u) = q.pop_front() {
        for &v in &adj[u] {
            if skip == Some((u.min(v), u.max(v))) {
                continue;
            }
            if dist[v] == usize::MAX {
                dist[v] = dist[u] + 1;
                q.push_back(v);
            }
        }
    }
    dist
}

/// Greedy spanner: scan demand edges by `(min, max)` endpoint and keep an edge
/// when its endpoints are more than `2α` hops apart in the edges kept so far.
/// Then repeatedly hand the remaining edges of the lowest-index vertex of
/// degree at most two to that vertex.
pub fn sparse_spanner(t: usize, demand_edges: &[(usize, usize)], alpha: usize) -> Result<Spanner, SpannerError> {
    let mut input: Vec<(usize, usize)> = Vec::new();
    for &(u, v) in demand_edges {
        if u >= t || v >= t {
            return Err(SpannerError::BadVertex(u.max(v)));
        }
        if u != v {
            input.push((u.min(v), u.max(v)));
        }
    }
    input.sort_unstable();
    input.dedup();
    let mut adj = vec![Vec::new(); t];
    let mut edges = Vec::new();
    for &(u, v) in &input {
        let d = hops_from(&adj, u, None)[v];
        if d > 2 * alpha {
            edges.push((u, v));
            adj[u].push(v);
            adj[v].push(u);
        }
    }
    let mut owner = vec![usize::MAX; edges.len()];
    let mut assigned = vec![Vec::new(); t];
    let mut live: Vec<Vec<usize>> = vec![Vec::new(); t];
    for (i, &(u, v)) in edges.iter().enumerate() {
        live[u].push(i);
        live[v].push(i);
    }
    let mut left = edges.len();
    while left > 0 {
        let Some(v) = (0..t).find(|&v| !live[v].is_empty() && live[v].len() <= 2) else {
            return Err(SpannerError::Stalled(left));
        };
        for e in std::mem::take(&mut live[v]) {
            owner[e] = v;
            assigned[v].push(e);
            let (a, b) = edges[e];
            let other = if a == v { b } else { a };
            live[other].retain(|&x| x != e);
            left -= 1;
        }
    }
    Ok(Spanner { t, alpha, edges, owner, assigned })
}

impl Spanner {
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        adjacency(self.t, &self.edges)
    }

    /// Hop distance between `u` and `v` in `A`.
    pub fn hops(&self, u: usize, v: usize) -> usize {
        hops_from(&self.adjacency(), u, None)[v]
    }

    /// Shortest hop path from `u` to `v`, preferring lower-index predecessors.
    pub fn path(&self, u: usize, v: usize) -> Option<Vec<usize>> {
        let adj = self.adjacency();
        let dist = hops_from(&adj, v, None);
        if dist[u] == usize::MAX {
            return None;
        }
        let mut out = vec![u];
        let mut x = u;
        while x != v {
            x = *adj[x].iter().find(|&&y| dist[y] + 1 == dist[x]).unwrap();
            out.push(x);
        }
        Some(out)
    }

    /// Index of edge `{u, v}` in `A`.
    pub fn edge_index(&self, u: usize, v: usize) -> Option<usize> {
        let key = (u.min(v), u.max(v));
        self.edges.iter().position(|&e| e == key)
    }

    /// Length of the shortest cycle, by BFS around every edge.
    pub fn girth(&self) -> Option<usize> {
        let adj = self.adjacency();
        self.edges
            .iter()
            .filter_map(|&(u, v)| {
                let d = hops_from(&adj, u, Some((u, v)))[v];
                (d != usize::MAX).then(|| d + 1)
            })
            .min()
    }

    /// Largest hop stretch over the given demand edges.
    pub fn max_stretch(&self, demand_edges: &[(usize, usize)]) -> usize {
        let adj = self.adjacency();
        demand_edges
            .iter()
            .map(|&(u, v)| hops_from(&adj, u, None)[v])
            .max()
            .unwrap_or(0)
    }
}

/// `⌈lg t⌉ + 1`.
pub fn default_alpha(t: usize) -> usize {
    let mut a = 0;
    while (1usize << a) < t {
        a += 1;
    }
    a + 1
}
