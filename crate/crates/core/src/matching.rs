//! Hopcroft–Karp maximum bipartite matching.

use std::collections::VecDeque;

const NIL: usize = usize::MAX;

/// Maximum matching between `adj.len()` left nodes and `right` right nodes.
/// Returns, for each left node, its matched right node.
pub(crate) fn max_bipartite_matching(adj: &[Vec<usize>], right: usize) -> Vec<Option<usize>> {
    let left = adj.len();
    let mut match_l = vec![NIL; left];
    let mut match_r = vec![NIL; right];
    let mut dist = vec![0u32; left];

    let bfs = |match_l: &[usize], match_r: &[usize], dist: &mut [u32]| -> bool {
        let mut queue = VecDeque::new();
        for l in 0..left {
            if match_l[l] == NIL {
                dist[l] = 0;
                queue.push_back(l);
            } else {
                dist[l] = u32::MAX;
            }
        }
        let mut found = false;
        while let Some(l) = queue.pop_front() {
            for &r in &adj[l] {
                let next = match_r[r];
                if next == NIL {
                    found = true;
                } else if dist[next] == u32::MAX {
                    dist[next] = dist[l] + 1;
                    queue.push_back(next);
                }
            }
        }
        found
    };

    fn dfs(
        l: usize,
        adj: &[Vec<usize>],
        match_l: &mut [usize],
        match_r: &mut [usize],
        dist: &mut [u32],
    ) -> bool {
        for &r in &adj[l] {
            let next = match_r[r];
            if next == NIL || (dist[next] == dist[l] + 1 && dfs(next, adj, match_l, match_r, dist)) {
                match_l[l] = r;
                match_r[r] = l;
                return true;
            }
        }
        dist[l] = u32::MAX;
        false
    }

    while bfs(&match_l, &match_r, &mut dist) {
        for l in 0..left {
            if match_l[l] == NIL {
                dfs(l, adj, &mut match_l, &mut match_r, &mut dist);
            }
        }
    }
    match_l
        .into_iter()
        .map(|r| (r != NIL).then_some(r))
        .collect()
}
