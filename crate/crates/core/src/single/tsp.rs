use crate::Metric;

/// Closed tour through distinct vertices starting at `order[0]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tour {
    pub order: Vec<usize>,
    pub length: i64,
}

impl Tour {
    /// Distance along the tour from its start to each position.
    pub fn prefix(&self, metric: &Metric) -> Vec<i64> {
        let mut acc = 0;
        let mut out = Vec::with_capacity(self.order.len());
        for (i, &v) in self.order.iter().enumerate() {
            if i > 0 {
                acc += metric.d(self.order[i - 1], v);
            }
            out.push(acc);
        }
        out
    }
}

/// Tree doubling: preorder walk of a minimum spanning tree, children taken in
/// increasing vertex order. Starts at `vertices[0]`; duplicates are ignored.
pub fn tsp_tour(metric: &Metric, vertices: &[usize]) -> Tour {
    assert!(!vertices.is_empty(), "tour needs at least one vertex");
    let start = vertices[0];
    let mut vs = vertices.to_vec();
    vs.sort_unstable();
    vs.dedup();
    let mut adj: std::collections::BTreeMap<usize, Vec<usize>> = vs.iter().map(|&v| (v, Vec::new())).collect();
    for (u, v) in metric.mst(&vs) {
        adj.get_mut(&u).unwrap().push(v);
        adj.get_mut(&v).unwrap().push(u);
    }
    for a in adj.values_mut() {
        a.sort_unstable();
    }
    let mut order = Vec::with_capacity(vs.len());
    let mut seen = std::collections::BTreeSet::new();
    let mut stack = vec![start];
    while let Some(x) = stack.pop() {
        if !seen.insert(x) {
            continue;
        }
        order.push(x);
        for &y in adj[&x].iter().rev() {
            if !seen.contains(&y) {
                stack.push(y);
            }
        }
    }
    let length = metric.closed_walk_length(&order);
    Tour { order, length }
}
