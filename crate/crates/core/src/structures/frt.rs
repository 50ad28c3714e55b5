use crate::model::{t, Metric, Time};
use crate::rng::{rng_for, stream};
use rand::seq::SliceRandom;
use rand::Rng;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HstNode {
    pub parent: Option<usize>,
    pub children: Vec<usize>,
    /// Level in the hierarchy; the root has the highest level.
    pub level: i32,
    /// Metric vertex that carved this cluster; it is within the level radius of
    /// every member.
    pub center: usize,
    pub members: Vec<usize>,
    pub edge_to_parent: Time,
}

/// Hierarchically well-separated tree whose leaves are the metric vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HstTree {
    pub nodes: Vec<HstNode>,
    pub root: usize,
    /// Leaf node of every vertex.
    pub leaf: Vec<usize>,
}

impl HstTree {
    fn ancestors(&self, mut x: usize) -> Vec<usize> {
        let mut out = vec![x];
        while let Some(p) = self.nodes[x].parent {
            out.push(p);
            x = p;
        }
        out
    }

    /// Nearest common ancestor node of vertices `u` and `v`.
    pub fn nca(&self, u: usize, v: usize) -> usize {
        let au = self.ancestors(self.leaf[u]);
        let av = self.ancestors(self.leaf[v]);
        let (mut i, mut j) = (au.len(), av.len());
        while i > 0 && j > 0 && au[i - 1] == av[j - 1] {
            i -= 1;
            j -= 1;
        }
        au[i]
    }

    /// Tree distance between vertices.
    pub fn kappa(&self, u: usize, v: usize) -> Time {
        let top = self.nca(u, v);
        let climb = |mut x: usize| {
            let mut s = t(0);
            while x != top {
                s += self.nodes[x].edge_to_parent;
                x = self.nodes[x].parent.unwrap();
            }
            s
        };
        climb(self.leaf[u]) + climb(self.leaf[v])
    }

    /// Number of edges on the longest root-to-leaf path.
    pub fn depth(&self) -> usize {
        self.leaf.iter().map(|&l| self.ancestors(l).len() - 1).max().unwrap_or(0)
    }

    pub fn dominates(&self, metric: &Metric) -> bool {
        (0..metric.n()).all(|u| (0..metric.n()).all(|v| self.kappa(u, v) >= metric.dt(u, v)))
    }

    /// Nodes in depth-first order, children visited by index.
    pub fn dfs_order(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.nodes.len());
        let mut stack = vec![self.root];
        while let Some(x) = stack.pop() {
            out.push(x);
            stack.extend(self.nodes[x].children.iter().rev());
        }
        out
    }
}

/// Random hierarchical ball carving with a random permutation and a radius
/// scale `β ∈ [1, 2)`.
pub fn frt_embed(metric: &Metric, seed: u64) -> HstTree {
    let n = metric.n();
    let mut rng = rng_for(seed, stream::FRT);
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(&mut rng);
    let beta = Time::new(1024 + rng.gen_range(0..1024i128), 1024);
    let delta = metric.min_positive().unwrap_or(1);
    let diam = metric.diameter();
    // radius(i) = β·2^(i-1)·δ; the top level's single ball covers everything
    let mut top = 0i32;
    while (1i64 << top.max(0)) * delta < 2 * diam {
        top += 1;
    }
    let radius = |i: i32| -> Time {
        let pow = if i >= 1 { Time::from_integer(1i128 << (i - 1)) } else { Time::new(1, 1i128 << (1 - i)) };
        beta * pow * t(delta)
    };
    let root_center = perm[0];
    let mut nodes = vec![HstNode {
        parent: None,
        children: Vec::new(),
        level: top,
        center: root_center,
        members: (0..n).collect(),
        edge_to_parent: t(0),
    }];
    let mut leaf = vec![usize::MAX; n];
    let mut frontier = vec![0usize];
    let mut level = top;
    while !frontier.is_empty() {
        let mut next = Vec::new();
        let lvl = level - 1;
        for &x in &frontier {
            let members = nodes[x].members.clone();
            if members.len() == 1 {
                leaf[members[0]] = x;
                continue;
            }
            let mut assigned = vec![false; members.len()];
            let r = radius(lvl);
            for &c in &perm {
                let mut part = Vec::new();
                for (i, &v) in members.iter().enumerate() {
                    if !assigned[i] && (lvl < 0 || metric.dt(c, v) <= r) {
                        assigned[i] = true;
                        part.push(v);
                    }
                }
                if part.is_empty() {
                    continue;
                }
                let groups: Vec<Vec<usize>> =
                    if lvl < 0 { part.iter().map(|&v| vec![v]).collect() } else { vec![part] };
                for g in groups {
                    let center = if lvl < 0 { g[0] } else { c };
                    let id = nodes.len();
                    nodes.push(HstNode {
                        parent: Some(x),
                        children: Vec::new(),
                        level: lvl,
                        center,
                        members: g,
                        edge_to_parent: radius(lvl + 1),
                    });
                    nodes[x].children.push(id);
                    next.push(id);
                }
                if assigned.iter().all(|&a| a) {
                    break;
                }
            }
        }
        frontier = next;
        level -= 1;
    }
    HstTree { nodes, root: 0, leaf }
}
