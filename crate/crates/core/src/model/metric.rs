use super::{t, ModelError, Time};

/// Symmetric integer distance matrix satisfying the triangle inequality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Metric {
    n: usize,
    dist: Vec<i64>,
}

/// Undirected graph with positive integer edge lengths.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedGraph {
    pub n: usize,
    pub edges: Vec<(usize, usize, i64)>,
}

impl WeightedGraph {
    pub fn new(n: usize, edges: Vec<(usize, usize, i64)>) -> Result<Self, ModelError> {
        for &(u, v, w) in &edges {
            if u >= n || v >= n || u == v || w <= 0 {
                return Err(ModelError::BadEdge(u, v, w));
            }
        }
        Ok(Self { n, edges })
    }

    pub fn unit(n: usize, edges: &[(usize, usize)]) -> Result<Self, ModelError> {
        Self::new(n, edges.iter().map(|&(u, v)| (u, v, 1)).collect())
    }

    /// Adjacency lists `(neighbour, length)`.
    pub fn adjacency(&self) -> Vec<Vec<(usize, i64)>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(u, v, w) in &self.edges {
            adj[u].push((v, w));
            adj[v].push((u, w));
        }
        adj
    }

    pub fn path(n: usize) -> Self {
        Self::unit(n, &(1..n).map(|i| (i - 1, i)).collect::<Vec<_>>()).expect("valid path")
    }

    pub fn cycle(n: usize) -> Self {
        let mut e: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        if n >= 3 {
            e.push((n - 1, 0));
        }
        Self::unit(n, &e).expect("valid cycle")
    }

    /// `rows × cols` grid, vertex `r * cols + c`.
    pub fn grid(rows: usize, cols: usize) -> Self {
        let mut e = Vec::new();
        for r in 0..rows {
            for c in 0..cols {
                let v = r * cols + c;
                if c + 1 < cols {
                    e.push((v, v + 1));
                }
                if r + 1 < rows {
                    e.push((v, v + cols));
                }
            }
        }
        Self::unit(rows * cols, &e).expect("valid grid")
    }
}

/// All-pairs shortest paths of `g`.
pub fn metric_from_graph(g: &WeightedGraph) -> Result<Metric, ModelError> {
    let n = g.n;
    let adj = g.adjacency();
    let mut dist = vec![i64::MAX; n * n];
    // Dijkstra from every vertex; graphs here are sparse.
    for s in 0..n {
        let row = &mut dist[s * n..(s + 1) * n];
        let mut heap = std::collections::BinaryHeap::new();
        row[s] = 0;
        heap.push(std::cmp::Reverse((0i64, s)));
        while let Some(std::cmp::Reverse((d, u))) = heap.pop() {
            if d > row[u] {
                continue;
            }
            for &(v, w) in &adj[u] {
                let nd = d + w;
                if nd < row[v] {
                    row[v] = nd;
                    heap.push(std::cmp::Reverse((nd, v)));
                }
            }
        }
        if let Some(v) = row.iter().position(|&d| d == i64::MAX) {
            return Err(ModelError::Disconnected(v));
        }
    }
    Ok(Metric { n, dist })
}

impl Metric {
    /// Validates every metric axiom.
    pub fn from_rows(rows: Vec<Vec<i64>>) -> Result<Self, ModelError> {
        let n = rows.len();
        let mut dist = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(ModelError::NotSquare { row: i, len: row.len(), n });
            }
            dist.extend_from_slice(row);
        }
        let m = Metric { n, dist };
        m.check()?;
        Ok(m)
    }

    fn check(&self) -> Result<(), ModelError> {
        let n = self.n;
        for u in 0..n {
            if self.d(u, u) != 0 {
                return Err(ModelError::NonzeroDiagonal(u));
            }
            for v in 0..n {
                if self.d(u, v) < 0 {
                    return Err(ModelError::Negative(u, v));
                }
                if self.d(u, v) != self.d(v, u) {
                    return Err(ModelError::Asymmetric(u, v));
                }
            }
        }
        for u in 0..n {
            for v in 0..n {
                for w in 0..n {
                    if self.d(u, w) > self.d(u, v) + self.d(v, w) {
                        return Err(ModelError::Triangle(u, v, w));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn d(&self, u: usize, v: usize) -> i64 {
        self.dist[u * self.n + v]
    }

    #[inline]
    pub fn dt(&self, u: usize, v: usize) -> Time {
        t(self.d(u, v))
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.dist.chunks(self.n.max(1)).take(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn diameter(&self) -> i64 {
        self.dist.iter().copied().max().unwrap_or(0)
    }

    /// Smallest positive distance, if any pair is apart.
    pub fn min_positive(&self) -> Option<i64> {
        self.dist.iter().copied().filter(|&d| d > 0).min()
    }

    /// `min_{x ∈ set} d(v, x)`; `i64::MAX` for an empty set.
    pub fn dist_to_set(&self, v: usize, set: &[usize]) -> i64 {
        set.iter().map(|&x| self.d(v, x)).min().unwrap_or(i64::MAX)
    }

    /// Closest member of `set` to `v`, lowest index on ties.
    pub fn nearest(&self, v: usize, set: &[usize]) -> Option<usize> {
        set.iter().copied().min_by_key(|&x| (self.d(v, x), x))
    }

    /// Minimum spanning tree of the submetric on `vertices` (Prim, ties broken
    /// by lowest vertex index). Edges are `(parent, child)` in insertion order,
    /// rooted at the lowest vertex.
    pub fn mst(&self, vertices: &[usize]) -> Vec<(usize, usize)> {
        let mut vs: Vec<usize> = vertices.to_vec();
        vs.sort_unstable();
        vs.dedup();
        if vs.len() < 2 {
            return Vec::new();
        }
        let mut in_tree = vec![false; vs.len()];
        let mut key: Vec<(i64, usize)> = vs.iter().map(|&v| (self.d(vs[0], v), 0)).collect();
        in_tree[0] = true;
        let mut edges = Vec::with_capacity(vs.len() - 1);
        for _ in 1..vs.len() {
            let i = (0..vs.len())
                .filter(|&i| !in_tree[i])
                .min_by_key(|&i| (key[i].0, vs[i]))
                .unwrap();
            in_tree[i] = true;
            edges.push((vs[key[i].1], vs[i]));
            for j in 0..vs.len() {
                if !in_tree[j] {
                    let d = self.d(vs[i], vs[j]);
                    if d < key[j].0 {
                        key[j] = (d, i);
                    }
                }
            }
        }
        edges
    }

    pub fn edges_length(&self, edges: &[(usize, usize)]) -> i64 {
        edges.iter().map(|&(u, v)| self.d(u, v)).sum()
    }

    /// Length of the closed walk visiting `seq` in order and returning to `seq[0]`.
    pub fn closed_walk_length(&self, seq: &[usize]) -> i64 {
        if seq.len() < 2 {
            return 0;
        }
        let open: i64 = seq.windows(2).map(|w| self.d(w[0], w[1])).sum();
        open + self.d(*seq.last().unwrap(), seq[0])
    }
}
