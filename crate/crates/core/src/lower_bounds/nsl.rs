//! Nurse-station-location: trees rooted at the depots that jointly span a
//! terminal set, minimising the longest tree.

use crate::matching::max_b_matching;
use crate::Metric;
use petgraph::unionfind::UnionFind;
use std::collections::BTreeSet;

/// One tree per vehicle; `trees[j]` is an edge list rooted at `roots[j]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootedForest {
    pub roots: Vec<usize>,
    pub trees: Vec<Vec<(usize, usize)>>,
    /// Longest tree length.
    pub cost: i64,
}

impl RootedForest {
    pub fn empty(roots: &[usize]) -> Self {
        RootedForest { roots: roots.to_vec(), trees: vec![Vec::new(); roots.len()], cost: 0 }
    }

    pub fn vertices(&self, j: usize) -> BTreeSet<usize> {
        let mut s: BTreeSet<usize> = self.trees[j].iter().flat_map(|&(u, v)| [u, v]).collect();
        s.insert(self.roots[j]);
        s
    }

    /// Lowest-index tree containing `v`.
    pub fn owner(&self, v: usize) -> Option<usize> {
        (0..self.roots.len()).find(|&j| self.roots[j] == v || self.trees[j].iter().any(|&(a, b)| a == v || b == v))
    }

    pub fn tree_length(&self, metric: &Metric, j: usize) -> i64 {
        metric.edges_length(&self.trees[j])
    }

    /// Structural check: each tree is acyclic and connected through its root,
    /// the union covers `terminals`, and `cost` is the longest tree.
    pub fn check(&self, metric: &Metric, terminals: &[usize]) -> Result<(), String> {
        for j in 0..self.roots.len() {
            let vs = self.vertices(j);
            let idx: Vec<usize> = vs.iter().copied().collect();
            let pos = |v: usize| idx.binary_search(&v).unwrap();
            let mut uf = UnionFind::<usize>::new(idx.len());
            for &(u, v) in &self.trees[j] {
                if !uf.union(pos(u), pos(v)) {
                    return Err(format!("tree {j} has a cycle through ({u}, {v})"));
                }
            }
            let root = uf.find(pos(self.roots[j]));
            if idx.iter().any(|&v| uf.find(pos(v)) != root) {
                return Err(format!("tree {j} is disconnected"));
            }
        }
        for &x in terminals {
            if self.owner(x).is_none() {
                return Err(format!("terminal {x} uncovered"));
            }
        }
        let longest = (0..self.roots.len()).map(|j| self.tree_length(metric, j)).max().unwrap_or(0);
        if longest != self.cost {
            return Err(format!("cost {} but longest tree is {longest}", self.cost));
        }
        Ok(())
    }
}

/// Terminals that do not coincide with a depot, deduplicated.
fn open_terminals(depots: &[usize], terminals: &[usize]) -> Vec<usize> {
    let ds: BTreeSet<usize> = depots.iter().copied().collect();
    let ts: BTreeSet<usize> = terminals.iter().copied().filter(|t| !ds.contains(t)).collect();
    ts.into_iter().collect()
}

struct Piece {
    edges: Vec<(usize, usize)>,
    vertices: Vec<usize>,
}

/// Splits the MST over `terminals ∪ depots`, minus edges longer than `lambda`,
/// into edge-disjoint connected pieces shorter than `2·lambda`.
fn pieces(metric: &Metric, terms: &[usize], depots: &[usize], lambda: i64) -> Vec<Piece> {
    let mut all: Vec<usize> = terms.iter().chain(depots).copied().collect();
    all.sort_unstable();
    all.dedup();
    let n = metric.n();
    let mut children: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut has_parent = vec![false; n];
    for (p, c) in metric.mst(&all) {
        if metric.d(p, c) <= lambda {
            children[p].push(c);
            has_parent[c] = true;
        }
    }
    let mut out = Vec::new();
    for &root in all.iter().filter(|&&v| !has_parent[v]) {
        // iterative post-order
        let mut order = Vec::new();
        let mut stack = vec![root];
        while let Some(v) = stack.pop() {
            order.push(v);
            stack.extend(children[v].iter().copied());
        }
        let mut open: Vec<(Vec<(usize, usize)>, i64)> = vec![(Vec::new(), 0); n];
        for &v in order.iter().rev() {
            for &c in &children[v] {
                let (mut edges, w) = std::mem::take(&mut open[c]);
                edges.push((v, c));
                let cand = w + metric.d(v, c);
                if cand >= lambda {
                    out.push(edges);
                } else {
                    open[v].0.extend(edges);
                    open[v].1 += cand;
                    if open[v].1 >= lambda {
                        out.push(std::mem::take(&mut open[v]).0);
                    }
                }
            }
        }
        let rest = std::mem::take(&mut open[root]).0;
        if !rest.is_empty() {
            out.push(rest);
        }
    }
    let mut res: Vec<Piece> = out
        .into_iter()
        .map(|edges| {
            let mut vertices: Vec<usize> = edges.iter().flat_map(|&(u, v)| [u, v]).collect();
            vertices.sort_unstable();
            vertices.dedup();
            Piece { edges, vertices }
        })
        .collect();
    let covered: BTreeSet<usize> = res.iter().flat_map(|p| p.vertices.iter().copied()).collect();
    for &t in terms {
        if !covered.contains(&t) {
            res.push(Piece { edges: Vec::new(), vertices: vec![t] });
        }
    }
    let ts: BTreeSet<usize> = terms.iter().copied().collect();
    res.retain(|p| p.vertices.iter().any(|v| ts.contains(v)));
    res
}

/// Builds the forest for a guess `lambda`, or `None` if no assignment with at
/// most four pieces per depot exists.
fn forest_for(metric: &Metric, depots: &[usize], terms: &[usize], lambda: i64) -> Option<RootedForest> {
    let ps = pieces(metric, terms, depots, lambda);
    let adj: Vec<Vec<usize>> = ps
        .iter()
        .map(|p| {
            (0..depots.len())
                .filter(|&j| metric.dist_to_set(depots[j], &p.vertices) <= lambda)
                .collect()
        })
        .collect();
    let mate = (1..=4).find_map(|c| {
        let mate = max_b_matching(&adj, &vec![c; depots.len()]);
        mate.iter().all(|m| m.is_some()).then_some(mate)
    })?;
    let mut trees = vec![Vec::new(); depots.len()];
    for j in 0..depots.len() {
        let mut cand: Vec<(i64, usize, usize)> = Vec::new();
        for (p, piece) in ps.iter().enumerate() {
            if mate[p] != Some(j) {
                continue;
            }
            cand.extend(piece.edges.iter().map(|&(u, v)| (metric.d(u, v), u, v)));
            let x = metric.nearest(depots[j], &piece.vertices).unwrap();
            if x != depots[j] {
                cand.push((metric.d(depots[j], x), depots[j], x));
            }
        }
        cand.sort_unstable();
        let mut uf = UnionFind::<usize>::new(metric.n());
        for (_, u, v) in cand {
            if uf.union(u, v) {
                trees[j].push((u, v));
            }
        }
    }
    let cost = trees.iter().map(|t| metric.edges_length(t)).max().unwrap_or(0);
    Some(RootedForest { roots: depots.to_vec(), trees, cost })
}

/// Constant-factor heuristic: binary search over candidate guesses λ drawn
/// from pairwise distances, keeping the forest of the smallest feasible guess.
pub fn nsl_solve(metric: &Metric, depots: &[usize], terminals: &[usize]) -> RootedForest {
    let terms = open_terminals(depots, terminals);
    if terms.is_empty() || depots.is_empty() {
        return RootedForest::empty(depots);
    }
    let mut pts: Vec<usize> = terms.iter().chain(depots).copied().collect();
    pts.sort_unstable();
    pts.dedup();
    let mut cands: BTreeSet<i64> = BTreeSet::new();
    for (i, &u) in pts.iter().enumerate() {
        for &v in &pts[i + 1..] {
            if metric.d(u, v) > 0 {
                cands.insert(metric.d(u, v));
            }
        }
    }
    let top = metric.diameter().max(1) * metric.n() as i64;
    cands.insert(top);
    let cands: Vec<i64> = cands.into_iter().collect();
    let mut best = forest_for(metric, depots, &terms, top)
        .expect("the largest guess always admits a single-piece assignment");
    let (mut lo, mut hi) = (0usize, cands.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        match forest_for(metric, depots, &terms, cands[mid]) {
            Some(f) => {
                hi = mid;
                best = f;
            }
            None => lo = mid + 1,
        }
    }
    best
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("too many terminals ({0}, limit 8) or depots ({1}, limit 3)")]
    TooLarge(usize, usize),
}

/// Exact optimum by enumerating terminal-to-depot assignments over exact
/// Steiner trees (Dreyfus–Wagner).
pub fn nsl_oracle(metric: &Metric, depots: &[usize], terminals: &[usize]) -> Result<RootedForest, OracleError> {
    let terms = open_terminals(depots, terminals);
    if terms.len() > 8 || depots.len() > 3 {
        return Err(OracleError::TooLarge(terms.len(), depots.len()));
    }
    if terms.is_empty() {
        return Ok(RootedForest::empty(depots));
    }
    let st = SteinerTable::new(metric, &terms);
    let k = terms.len();
    let q = depots.len();
    let mut best: Option<(i64, Vec<u32>)> = None;
    let mut assign = vec![0usize; k];
    loop {
        let mut masks = vec![0u32; q];
        for (i, &j) in assign.iter().enumerate() {
            masks[j] |= 1 << i;
        }
        let cost = (0..q).map(|j| st.value(masks[j], depots[j])).max().unwrap();
        if best.as_ref().is_none_or(|(c, _)| cost < *c) {
            best = Some((cost, masks));
        }
        // next assignment in base q
        let mut i = 0;
        while i < k && assign[i] + 1 == q {
            assign[i] = 0;
            i += 1;
        }
        if i == k {
            break;
        }
        assign[i] += 1;
    }
    let (cost, masks) = best.unwrap();
    let trees = (0..q).map(|j| st.tree(masks[j], depots[j])).collect();
    Ok(RootedForest { roots: depots.to_vec(), trees, cost })
}

#[derive(Clone, Copy)]
enum Choice {
    Base,
    Split(u32),
    Relax(usize),
}

/// Dreyfus–Wagner table: `full[S][v]` is the cheapest tree spanning terminal
/// subset `S` and vertex `v`.
struct SteinerTable<'a> {
    metric: &'a Metric,
    terms: Vec<usize>,
    split: Vec<Vec<(i64, Choice)>>,
    full: Vec<Vec<(i64, Choice)>>,
}

impl<'a> SteinerTable<'a> {
    fn new(metric: &'a Metric, terms: &[usize]) -> Self {
        let n = metric.n();
        let k = terms.len();
        let inf = i64::MAX / 4;
        let mut split = vec![vec![(inf, Choice::Base); n]; 1 << k];
        let mut full = vec![vec![(inf, Choice::Base); n]; 1 << k];
        for v in 0..n {
            split[0][v] = (0, Choice::Base);
            full[0][v] = (0, Choice::Base);
        }
        for s in 1u32..(1 << k) {
            for v in 0..n {
                if s.count_ones() == 1 {
                    let i = s.trailing_zeros() as usize;
                    if terms[i] == v {
                        split[s as usize][v] = (0, Choice::Base);
                    }
                    continue;
                }
                let mut a = (s - 1) & s;
                while a > 0 {
                    let val = full[a as usize][v].0 + full[(s ^ a) as usize][v].0;
                    if val < split[s as usize][v].0 {
                        split[s as usize][v] = (val, Choice::Split(a));
                    }
                    a = (a - 1) & s;
                }
            }
            for v in 0..n {
                let (val, u) = (0..n)
                    .map(|u| (split[s as usize][u].0 + metric.d(u, v), u))
                    .min()
                    .unwrap();
                full[s as usize][v] = (val, Choice::Relax(u));
            }
        }
        SteinerTable { metric, terms: terms.to_vec(), split, full }
    }

    fn value(&self, s: u32, v: usize) -> i64 {
        self.full[s as usize][v].0
    }

    fn tree(&self, s: u32, v: usize) -> Vec<(usize, usize)> {
        let mut edges = Vec::new();
        self.walk_full(s, v, &mut edges);
        // Kruskal over the recovered edges drops duplicates and zero-length cycles.
        let mut cand: Vec<(i64, usize, usize)> =
            edges.into_iter().map(|(a, b)| (self.metric.d(a, b), a.min(b), a.max(b))).collect();
        cand.sort_unstable();
        let mut uf = UnionFind::<usize>::new(self.metric.n());
        cand.into_iter().filter(|&(_, a, b)| uf.union(a, b)).map(|(_, a, b)| (a, b)).collect()
    }

    fn walk_full(&self, s: u32, v: usize, out: &mut Vec<(usize, usize)>) {
        if s == 0 {
            return;
        }
        if let Choice::Relax(u) = self.full[s as usize][v].1 {
            if u != v {
                out.push((u, v));
            }
            self.walk_split(s, u, out);
        }
    }

    fn walk_split(&self, s: u32, v: usize, out: &mut Vec<(usize, usize)>) {
        match self.split[s as usize][v].1 {
            Choice::Split(a) => {
                self.walk_full(a, v, out);
                self.walk_full(s ^ a, v, out);
            }
            Choice::Base | Choice::Relax(_) => {
                debug_assert!(s.count_ones() == 1 && self.terms[s.trailing_zeros() as usize] == v);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn star(q: usize) -> Metric {
        let n = q + 1;
        Metric::from_rows(
            (0..n)
                .map(|i| (0..n).map(|j| if i == j { 0 } else if i == 0 || j == 0 { 1 } else { 2 }).collect())
                .collect(),
        )
        .unwrap()
    }

    pub(crate) fn random_metric(n: usize, seed: u64) -> Metric {
        use rand::Rng;
        let mut r = crate::rng::rng_for(seed, 0);
        let mut d = vec![vec![0i64; n]; n];
        for i in 0..n {
            for j in i + 1..n {
                let w = r.gen_range(1..10);
                d[i][j] = w;
                d[j][i] = w;
            }
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    d[i][j] = d[i][j].min(d[i][k] + d[k][j]);
                }
            }
        }
        Metric::from_rows(d).unwrap()
    }

    #[test]
    fn terminals_at_depots_cost_nothing() {
        let m = star(3);
        let f = nsl_solve(&m, &[1, 2], &[1, 2]);
        assert_eq!(f.cost, 0);
        assert_eq!(nsl_oracle(&m, &[1, 2], &[2]).unwrap().cost, 0);
    }

    #[test]
    fn star_gives_one_leaf_per_tree() {
        for q in [3, 8, 16] {
            let m = star(q);
            let f = nsl_solve(&m, &vec![0; q], &(1..=q).collect::<Vec<_>>());
            assert_eq!(f.cost, 1, "q = {q}");
            f.check(&m, &(1..=q).collect::<Vec<_>>()).unwrap();
        }
    }

    #[test]
    fn oracle_small_cases() {
        let tri = Metric::from_rows(vec![vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 0]]).unwrap();
        assert_eq!(nsl_oracle(&tri, &[0], &[1, 2]).unwrap().cost, 2);
        let m = random_metric(5, 3);
        let f = nsl_oracle(&m, &[0], &[3]).unwrap();
        assert_eq!(f.cost, m.d(0, 3));
        assert!(nsl_oracle(&m, &[0, 1, 2, 3], &[4]).is_err());
    }

    /// Exhaustive alternative: for each assignment, the Steiner tree of a part
    /// is the cheapest MST over the part plus any subset of extra vertices.
    fn brute(metric: &Metric, depots: &[usize], terms: &[usize]) -> i64 {
        let terms = open_terminals(depots, terms);
        let n = metric.n();
        let steiner = |part: &[usize]| -> i64 {
            (0u32..(1 << n))
                .map(|extra| {
                    let mut vs: Vec<usize> = part.to_vec();
                    vs.extend((0..n).filter(|&v| extra & (1 << v) != 0));
                    metric.edges_length(&metric.mst(&vs))
                })
                .min()
                .unwrap()
        };
        let q = depots.len();
        let mut best = i64::MAX;
        for code in 0..q.pow(terms.len() as u32) {
            let mut parts: Vec<Vec<usize>> = depots.iter().map(|&r| vec![r]).collect();
            let mut c = code;
            for &t in &terms {
                parts[c % q].push(t);
                c /= q;
            }
            best = best.min(parts.iter().map(|p| steiner(p)).max().unwrap());
        }
        best
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]
        #[test]
        fn oracle_matches_brute_force_and_heuristic_is_valid(
            seed in 0u64..1000, nd in 1usize..3, nt in 1usize..5,
        ) {
            let m = random_metric(6, seed);
            let depots: Vec<usize> = (0..nd).collect();
            let terms: Vec<usize> = (6 - nt..6).collect();
            let exact = nsl_oracle(&m, &depots, &terms).unwrap();
            exact.check(&m, &terms).unwrap();
            prop_assert_eq!(exact.cost, brute(&m, &depots, &terms));
            let h = nsl_solve(&m, &depots, &terms);
            h.check(&m, &terms).unwrap();
            prop_assert!(h.cost >= exact.cost);
            prop_assert!(h.cost <= 16 * exact.cost);
        }
    }
}
