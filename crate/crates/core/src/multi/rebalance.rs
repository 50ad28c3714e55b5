use crate::matching::{deficiency_set, max_b_matching};
use std::collections::BTreeSet;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RebalanceResult {
    /// Contracting pieces, increasing.
    pub s: Vec<usize>,
    /// Depots adjacent to `s`, increasing.
    pub gamma_s: Vec<usize>,
    /// Depot of every piece outside `s`; `None` for pieces in `s`.
    pub pi: Vec<Option<usize>>,
}

fn neighbours(adj: &[Vec<usize>], set: &BTreeSet<usize>) -> BTreeSet<usize> {
    set.iter().flat_map(|&p| adj[p].iter().copied()).collect()
}

/// Maximum 2-matching of `left` pieces into depots outside `blocked`, each
/// piece also repeated `extra` more times at the end. Returns the original
/// pieces of a deficiency set when the matching leaves a copy unmatched.
fn violator(
    adj: &[Vec<usize>],
    depots: usize,
    left: &[usize],
    blocked: &BTreeSet<usize>,
    extra: Option<(usize, usize)>,
) -> Result<Vec<Option<usize>>, BTreeSet<usize>> {
    let mut lefts: Vec<usize> = left.to_vec();
    if let Some((p, copies)) = extra {
        lefts.extend(std::iter::repeat_n(p, copies));
    }
    let ladj: Vec<Vec<usize>> =
        lefts.iter().map(|&p| adj[p].iter().copied().filter(|f| !blocked.contains(f)).collect()).collect();
    let cap: Vec<usize> = (0..depots).map(|f| if blocked.contains(&f) { 0 } else { 2 }).collect();
    let mate = max_b_matching(&ladj, &cap);
    if mate.iter().all(|m| m.is_some()) {
        return Ok(mate[..left.len()].to_vec());
    }
    let (xs, _) = deficiency_set(&ladj, &cap, &mate);
    Err(xs.into_iter().map(|i| lefts[i]).collect())
}

/// Inclusion-maximal piece set `S` with `|Γ(S)| ≤ |S|/2` in the bipartite
/// graph `adj` (piece to depots), and a 2-matching of the other pieces into
/// depots outside `Γ(S)`.
///
/// `S` grows by Hall violators of the residual graph. Once the residual has a
/// saturating 2-matching, a set `X` with `S ∪ X` contracting exists iff some
/// piece `p`, repeated `σ+1` extra times where `σ = |S| − 2|Γ(S)|`, breaks
/// saturation; the deficiency set then is such an `X`.
pub fn max_contracting_set(adj: &[Vec<usize>], depots: usize) -> RebalanceResult {
    let mut s: BTreeSet<usize> = BTreeSet::new();
    'grow: loop {
        let gamma = neighbours(adj, &s);
        let rest: Vec<usize> = (0..adj.len()).filter(|p| !s.contains(p)).collect();
        let pi = match violator(adj, depots, &rest, &gamma, None) {
            Ok(pi) => pi,
            Err(x) => {
                s.extend(x);
                continue 'grow;
            }
        };
        let slack = s.len() - 2 * gamma.len();
        for &p in &rest {
            if let Err(x) = violator(adj, depots, &rest, &gamma, Some((p, slack + 1))) {
                debug_assert!(x.contains(&p));
                s.extend(x);
                continue 'grow;
            }
        }
        let mut out = vec![None; adj.len()];
        for (i, &p) in rest.iter().enumerate() {
            out[p] = pi[i];
        }
        debug_assert!(2 * gamma.len() <= s.len());
        return RebalanceResult { s: s.into_iter().collect(), gamma_s: gamma.into_iter().collect(), pi: out };
    }
}
