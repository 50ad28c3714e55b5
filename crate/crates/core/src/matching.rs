//! Bipartite b-matching: each left vertex to at most one right vertex, right
//! vertex `r` to at most `cap[r]` left vertices.

/// Maximum b-matching by augmenting paths. `adj[l]` lists the right
/// neighbours of left vertex `l`, tried in order.
pub fn max_b_matching(adj: &[Vec<usize>], cap: &[usize]) -> Vec<Option<usize>> {
    let mut mate = vec![None; adj.len()];
    let mut owners: Vec<Vec<usize>> = vec![Vec::new(); cap.len()];
    for l in 0..adj.len() {
        let mut seen = vec![false; cap.len()];
        augment(l, adj, cap, &mut mate, &mut owners, &mut seen);
    }
    mate
}

fn augment(
    l: usize,
    adj: &[Vec<usize>],
    cap: &[usize],
    mate: &mut [Option<usize>],
    owners: &mut [Vec<usize>],
    seen: &mut [bool],
) -> bool {
    for &r in &adj[l] {
        if seen[r] || cap[r] == 0 {
            continue;
        }
        seen[r] = true;
        if owners[r].len() < cap[r] {
            owners[r].push(l);
            mate[l] = Some(r);
            return true;
        }
        for idx in 0..owners[r].len() {
            let w = owners[r][idx];
            if augment(w, adj, cap, mate, owners, seen) {
                owners[r][idx] = l;
                mate[l] = Some(r);
                return true;
            }
        }
    }
    false
}

/// Left and right vertices reachable by alternating paths from unmatched left
/// vertices. For a maximum matching the left set `X` is a Hall violator:
/// every neighbour of `X` is saturated by partners inside `X`.
pub fn deficiency_set(
    adj: &[Vec<usize>],
    cap: &[usize],
    mate: &[Option<usize>],
) -> (Vec<usize>, Vec<usize>) {
    let mut owners: Vec<Vec<usize>> = vec![Vec::new(); cap.len()];
    for (l, m) in mate.iter().enumerate() {
        if let Some(r) = m {
            owners[*r].push(l);
        }
    }
    let mut left_seen = vec![false; adj.len()];
    let mut right_seen = vec![false; cap.len()];
    let mut stack: Vec<usize> = (0..adj.len()).filter(|&l| mate[l].is_none()).collect();
    for &l in &stack {
        left_seen[l] = true;
    }
    while let Some(l) = stack.pop() {
        for &r in &adj[l] {
            if right_seen[r] {
                continue;
            }
            right_seen[r] = true;
            for &w in &owners[r] {
                if !left_seen[w] {
                    left_seen[w] = true;
                    stack.push(w);
                }
            }
        }
    }
    (
        (0..adj.len()).filter(|&l| left_seen[l]).collect(),
        (0..cap.len()).filter(|&r| right_seen[r]).collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn brute_max(adj: &[Vec<usize>], cap: &[usize]) -> usize {
        fn go(l: usize, adj: &[Vec<usize>], load: &mut Vec<usize>, cap: &[usize]) -> usize {
            if l == adj.len() {
                return 0;
            }
            let mut best = go(l + 1, adj, load, cap);
            for &r in &adj[l] {
                if load[r] < cap[r] {
                    load[r] += 1;
                    best = best.max(1 + go(l + 1, adj, load, cap));
                    load[r] -= 1;
                }
            }
            best
        }
        go(0, adj, &mut vec![0; cap.len()], cap)
    }

    fn graph() -> impl Strategy<Value = (Vec<Vec<usize>>, Vec<usize>)> {
        (1usize..5, 1usize..7).prop_flat_map(|(nr, nl)| {
            (
                proptest::collection::vec(proptest::collection::btree_set(0..nr, 0..=nr), nl)
                    .prop_map(|v| v.into_iter().map(|s| s.into_iter().collect()).collect()),
                proptest::collection::vec(0usize..3, nr),
            )
        })
    }

    proptest! {
        #[test]
        fn matching_is_maximum_and_valid((adj, cap) in graph()) {
            let mate = max_b_matching(&adj, &cap);
            let mut load = vec![0; cap.len()];
            for (l, m) in mate.iter().enumerate() {
                if let Some(r) = m {
                    prop_assert!(adj[l].contains(r));
                    load[*r] += 1;
                }
            }
            for r in 0..cap.len() {
                prop_assert!(load[r] <= cap[r]);
            }
            let size = mate.iter().filter(|m| m.is_some()).count();
            prop_assert_eq!(size, brute_max(&adj, &cap));

            let (xs, ys) = deficiency_set(&adj, &cap, &mate);
            let unmatched = mate.iter().filter(|m| m.is_none()).count();
            let ycap: usize = ys.iter().map(|&r| cap[r]).sum();
            // |X| = capacity of N(X) + unmatched: a Hall violator when unmatched > 0
            prop_assert_eq!(xs.len(), ycap + unmatched);
            for &l in &xs {
                for r in &adj[l] {
                    prop_assert!(ys.contains(r));
                }
            }
        }
    }
}
