//! Independent oracles and generators shared by the integration tests and
//! the acceptance suite. Nothing here calls the library's own density,
//! solver or core code.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

use hgame_core::copies::enumerate_copies;
use hgame_core::{Graph, Player, Ratio, WinningSetSystem};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Density values found by trying every vertex subset.
#[derive(Debug, PartialEq)]
pub struct BruteDensity {
    pub m: Ratio,
    pub ar: Option<Ratio>,
    pub d2: Option<Ratio>,
    pub m2: Option<Ratio>,
    pub strictly_2_balanced: Option<bool>,
}

pub fn induced_edges(g: &Graph, mask: u32) -> i64 {
    g.edges()
        .iter()
        .filter(|&&(u, v)| mask & (1 << u) != 0 && mask & (1 << v) != 0)
        .count() as i64
}

pub fn brute_density(g: &Graph) -> BruteDensity {
    let n = g.vertex_count();
    let full: u32 = (1 << n) - 1;
    let mut m = Ratio::from_integer(0);
    let mut ar: Option<Ratio> = None;
    let mut m2: Option<Ratio> = None;
    let d2 = (n >= 3).then(|| Ratio::new(g.edge_count() as i64 - 1, n as i64 - 2));
    let mut proper_max: Option<Ratio> = None;
    for s in 1..=full {
        let k = s.count_ones() as i64;
        let e = induced_edges(g, s);
        m = m.max(Ratio::new(e, k));
        if k >= 2 {
            let r = Ratio::new(e, k - 1);
            ar = Some(ar.map_or(r, |a| a.max(r)));
        }
        if k >= 3 {
            let r = Ratio::new(e - 1, k - 2);
            m2 = Some(m2.map_or(r, |a| a.max(r)));
            if s != full {
                proper_max = Some(proper_max.map_or(r, |a| a.max(r)));
            }
        }
    }
    // Removing edges while keeping all vertices only lowers d2, so only
    // proper vertex subsets can tie or beat the whole graph.
    let strict = d2.map(|d| proper_max.is_none_or(|p| p < d));
    BruteDensity {
        m,
        ar,
        d2,
        m2,
        strictly_2_balanced: strict,
    }
}

fn graph_from_mask(n: usize, mask: u64, pairs: &[(usize, usize)]) -> Graph {
    Graph::new(
        n,
        pairs.iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, &p)| p),
    )
    .unwrap()
}

fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(items: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
        if k == items.len() {
            out.push(items.clone());
            return;
        }
        for i in k..items.len() {
            items.swap(k, i);
            go(items, k + 1, out);
            items.swap(k, i);
        }
    }
    let mut out = Vec::new();
    go(&mut (0..n).collect(), 0, &mut out);
    out
}

/// One representative per isomorphism class of graphs on `n <= 6` vertices.
pub fn iso_classes(n: usize) -> Vec<Graph> {
    assert!(n <= 6);
    let ps = pairs(n);
    let index: HashMap<(usize, usize), usize> = ps.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let perms = permutations(n);
    let relabel: Vec<Vec<usize>> = perms
        .iter()
        .map(|pi| {
            ps.iter()
                .map(|&(u, v)| {
                    let (a, b) = (pi[u].min(pi[v]), pi[u].max(pi[v]));
                    index[&(a, b)]
                })
                .collect()
        })
        .collect();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for mask in 0u64..(1 << ps.len()) {
        let canon = relabel
            .iter()
            .map(|r| (0..ps.len()).filter(|&i| mask & (1 << i) != 0).fold(0u64, |acc, i| acc | 1 << r[i]))
            .min()
            .unwrap();
        if seen.insert(canon) {
            out.push(graph_from_mask(n, canon, &ps));
        }
    }
    out
}

/// Graphs on 7 vertices covering every isomorphism class: each class on 6
/// vertices extended by every possible neighbourhood of a seventh vertex.
pub fn seven_vertex_cover() -> Vec<Graph> {
    let mut out = Vec::new();
    for g in iso_classes(6) {
        for nb in 0u32..64 {
            let edges = g
                .edges()
                .iter()
                .copied()
                .chain((0..6).filter(|&v| nb & (1 << v) != 0).map(|v| (v, 6)));
            out.push(Graph::new(7, edges).unwrap());
        }
    }
    out
}

/// A random hypergraph on at most `max_elements` elements with at most
/// `max_sets` nonempty sets.
pub fn random_system(r: &mut ChaCha8Rng, max_elements: usize, max_sets: usize) -> WinningSetSystem {
    let board = r.gen_range(1..=max_elements);
    let count = r.gen_range(0..=max_sets);
    let sets = (0..count)
        .map(|_| {
            let size = r.gen_range(1..=board);
            let mut s: Vec<usize> = (0..board).collect();
            for i in 0..size {
                let j = r.gen_range(i..board);
                s.swap(i, j);
            }
            s.truncate(size);
            s
        })
        .collect();
    WinningSetSystem::new(board, sets).unwrap()
}

/// Plain minimax over (Maker mask, Breaker mask) with memoisation.
pub struct Minimax {
    sets: Vec<u32>,
    board: usize,
    first: Player,
    memo: HashMap<(u32, u32), bool>,
}

impl Minimax {
    pub fn new(system: &WinningSetSystem, first: Player) -> Self {
        assert!(system.board_size() <= 20);
        Minimax {
            sets: system
                .sets()
                .iter()
                .map(|s| s.iter().fold(0u32, |acc, &x| acc | 1 << x))
                .collect(),
            board: system.board_size(),
            first,
            memo: HashMap::new(),
        }
    }

    pub fn maker_wins(&mut self, maker: u32, breaker: u32) -> bool {
        if self.sets.iter().any(|&s| s & maker == s) {
            return true;
        }
        let claimed = maker | breaker;
        if claimed.count_ones() as usize == self.board {
            return false;
        }
        if let Some(&v) = self.memo.get(&(maker, breaker)) {
            return v;
        }
        let moved = claimed.count_ones();
        let maker_to_move = (moved % 2 == 0) == (self.first == Player::Maker);
        let free = (0..self.board).filter(|&x| claimed & (1 << x) == 0);
        let v = if maker_to_move {
            free.collect::<Vec<_>>().into_iter().any(|x| self.maker_wins(maker | 1 << x, breaker))
        } else {
            free.collect::<Vec<_>>().into_iter().all(|x| self.maker_wins(maker, breaker | 1 << x))
        };
        self.memo.insert((maker, breaker), v);
        v
    }

    pub fn winner(&mut self) -> Player {
        if self.maker_wins(0, 0) {
            Player::Maker
        } else {
            Player::Breaker
        }
    }
}

/// Edge bitmask of every copy of `h` in the subgraph of `g` given by `mask`.
fn copies_within(copies: &[u32], mask: u32) -> impl Iterator<Item = u32> + '_ {
    copies.iter().copied().filter(move |&c| c & mask == c)
}

/// Whether `mask` satisfies the H-core conditions: every edge lies in a
/// copy inside it and every such copy has at most one open edge.
pub fn is_core_candidate(copies: &[u32], mask: u32) -> bool {
    let inside: Vec<u32> = copies_within(copies, mask).collect();
    let covered = inside.iter().fold(0u32, |a, &c| a | c);
    if covered != mask {
        return false;
    }
    inside.iter().all(|&c| {
        let open = (0..32)
            .filter(|&e| c & (1 << e) != 0 && inside.iter().filter(|&&d| d & (1 << e) != 0).count() == 1)
            .count();
        open <= 1
    })
}

/// All edge sets satisfying the H-core conditions, by exhaustion.
pub fn core_candidates(g: &Graph, h: &Graph) -> Vec<u32> {
    let m = g.edge_count();
    assert!(m <= 20);
    let copies: Vec<u32> = enumerate_copies(g, h)
        .iter()
        .map(|c| c.edge_ids.iter().fold(0u32, |a, &e| a | 1 << e))
        .collect();
    (0u32..(1 << m)).filter(|&s| is_core_candidate(&copies, s)).collect()
}

/// `g` with a fresh copy of `h` glued along host edge `host` by pattern edge
/// `pattern_edge`. Returns the graph and the edge ids of the glued copy.
pub fn attach_copy(g: &Graph, h: &Graph, host: usize, pattern_edge: usize) -> (Graph, BTreeSet<usize>) {
    let (u, v) = g.endpoints(host);
    let (a, b) = h.edges()[pattern_edge];
    let mut map = vec![usize::MAX; h.vertex_count()];
    map[a] = u;
    map[b] = v;
    let mut next = g.vertex_count();
    for m in map.iter_mut() {
        if *m == usize::MAX {
            *m = next;
            next += 1;
        }
    }
    let new_edges: Vec<(usize, usize)> = h
        .edges()
        .iter()
        .filter(|&&e| e != (a, b))
        .map(|&(x, y)| (map[x], map[y]))
        .collect();
    let out = Graph::new(next, g.edges().iter().copied().chain(new_edges.iter().copied())).unwrap();
    let mut ids: BTreeSet<usize> = new_edges.iter().map(|&(x, y)| out.edge_between(x, y).unwrap()).collect();
    ids.insert(host);
    (out, ids)
}

/// `g` without the edges that lie in no copy of `h`, and without isolated
/// vertices.
pub fn prune_to_copies(g: &Graph, h: &Graph) -> Graph {
    let mut used: Vec<usize> = enumerate_copies(g, h).into_iter().flat_map(|c| c.edge_ids).collect();
    used.sort_unstable();
    used.dedup();
    g.compact_edge_subgraph(&used).0
}

/// A random board with `1..=max_edges` edges after pruning and
/// `m(G) <= m2(h)`, or `None` if this seed does not give one.
pub fn qualifying_board(seed: u64, h: &Graph, m2_h: Ratio, max_edges: usize) -> Option<Graph> {
    let mut r = rng(seed);
    let n = r.gen_range(5..=9);
    let p = r.gen_range(0.25..0.75);
    let g = hgame_core::graph::gnp_sample(&hgame_core::SampleSpec::new(n, p, r.gen()).unwrap());
    let g = prune_to_copies(&g, h);
    let e = g.edge_count();
    (e >= 1 && e <= max_edges && brute_density(&g).m <= m2_h).then_some(g)
}
