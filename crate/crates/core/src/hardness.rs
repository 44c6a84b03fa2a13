//! The Clique reduction to the decision version of monitor placement, with
//! exhaustive verifiers for small instances.
//!
//! A Clique instance `(G, q)` maps to `(G, k, l)` with `l = n - q` and
//! `k = m - C(q, 2) - l`: `G` has a `q`-clique iff some `k` monitors leave at
//! least `l` bridges.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::combinatorics::{binomial, for_each_combination};
use crate::graph::{
    connected_components, BridgeFinder, DisjointSets, EdgeId, EdgeMask, EdgeSet, Graph,
};

/// Largest number of subsets the exhaustive deciders will enumerate.
pub const DECIDE_SUBSET_LIMIT: u64 = 50_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HardnessError {
    #[error("graph must be simple (no loops or parallel edges)")]
    NotSimple,
    #[error("graph must be connected")]
    Disconnected,
    #[error("clique size {q} outside 3..={n}")]
    BadCliqueSize { q: usize, n: usize },
    #[error("reduction yields monitor budget k = {k}; it must be positive")]
    NonPositiveBudget { k: i64 },
    #[error("reduction yields extra-edge target l = {l}; it must be positive")]
    NonPositiveTarget { l: i64 },
    #[error("instance too large for exhaustive search: {subsets} subsets exceeds {limit}")]
    TooLarge { subsets: u64, limit: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliqueInstance {
    pub graph: Graph,
    pub q: usize,
}

impl CliqueInstance {
    pub fn new(graph: Graph, q: usize) -> Result<Self, HardnessError> {
        ensure_simple(&graph)?;
        if connected_components(&graph).count > 1 {
            return Err(HardnessError::Disconnected);
        }
        let n = graph.vertex_count();
        if q < 3 || q > n {
            return Err(HardnessError::BadCliqueSize { q, n });
        }
        Ok(CliqueInstance { graph, q })
    }
}

/// Is there a set of `k` edges leaving at least `l` bridges?
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecInstance {
    pub graph: Graph,
    pub k: usize,
    pub l: usize,
}

pub fn is_simple(g: &Graph) -> bool {
    let mut seen = std::collections::HashSet::new();
    g.edges()
        .iter()
        .all(|e| !e.is_loop() && seen.insert((e.u.min(e.v), e.u.max(e.v))))
}

fn ensure_simple(g: &Graph) -> Result<(), HardnessError> {
    if is_simple(g) {
        Ok(())
    } else {
        Err(HardnessError::NotSimple)
    }
}

pub fn reduce_clique(inst: &CliqueInstance) -> Result<DecInstance, HardnessError> {
    let n = inst.graph.vertex_count() as i64;
    let m = inst.graph.edge_count() as i64;
    let q = inst.q as i64;
    let l = n - q;
    let k = m - q * (q - 1) / 2 - l;
    if k <= 0 {
        return Err(HardnessError::NonPositiveBudget { k });
    }
    if l <= 0 {
        return Err(HardnessError::NonPositiveTarget { l });
    }
    Ok(DecInstance {
        graph: inst.graph.clone(),
        k: k as usize,
        l: l as usize,
    })
}

/// Exhaustive answer to the decision problem.
pub fn decide_flow_monitors(inst: &DecInstance) -> Result<bool, HardnessError> {
    Ok(find_monitor_witness(inst)?.is_some())
}

/// The lexicographically first `k`-set with at least `l` bridges, if any.
pub fn find_monitor_witness(inst: &DecInstance) -> Result<Option<EdgeSet>, HardnessError> {
    let g = &inst.graph;
    let m = g.edge_count();
    if inst.k > m {
        return Ok(None);
    }
    let subsets = binomial(m, inst.k);
    if subsets > DECIDE_SUBSET_LIMIT {
        return Err(HardnessError::TooLarge {
            subsets,
            limit: DECIDE_SUBSET_LIMIT,
        });
    }
    let mut finder = BridgeFinder::new(g);
    let mut mask = EdgeMask::none(m);
    let mut buf = Vec::new();
    let mut found = None;
    for_each_combination(m, inst.k, |idx| {
        for &i in idx {
            mask.remove(EdgeId(i));
        }
        buf.clear();
        finder.find_into(g, &mask, &mut buf);
        for &i in idx {
            mask.restore(EdgeId(i));
        }
        if buf.len() >= inst.l {
            found = Some(idx.iter().map(|&i| EdgeId(i)).collect());
            false
        } else {
            true
        }
    });
    Ok(found)
}

fn adjacency_masks(g: &Graph) -> Vec<u64> {
    let mut adj = vec![0u64; g.vertex_count()];
    for e in g.edges() {
        adj[e.u] |= 1 << e.v;
        adj[e.v] |= 1 << e.u;
    }
    adj
}

/// Some clique of exactly `q` vertices (lexicographically first), if one exists.
pub fn find_clique(g: &Graph, q: usize) -> Result<Option<Vec<usize>>, HardnessError> {
    ensure_simple(g)?;
    let n = g.vertex_count();
    let subsets = binomial(n, q);
    if n > 64 || subsets > DECIDE_SUBSET_LIMIT {
        return Err(HardnessError::TooLarge {
            subsets,
            limit: DECIDE_SUBSET_LIMIT,
        });
    }
    let adj = adjacency_masks(g);
    let mut found = None;
    for_each_combination(n, q, |idx| {
        let all: u64 = idx.iter().fold(0, |acc, &v| acc | 1 << v);
        if idx.iter().all(|&v| (adj[v] | 1 << v) & all == all) {
            found = Some(idx.to_vec());
            false
        } else {
            true
        }
    });
    Ok(found)
}

/// Does `g` contain a clique on `q` vertices? (Size at least `q` is the same
/// question, since cliques contain smaller cliques.)
pub fn has_clique(g: &Graph, q: usize) -> Result<bool, HardnessError> {
    Ok(find_clique(g, q)?.is_some())
}

/// Constructive monitor set for a clique: contract the clique, take a
/// spanning tree of the result, and monitor every edge outside both.
pub fn clique_witness(g: &Graph, clique: &[usize]) -> EdgeSet {
    let mut sets = DisjointSets::new(g.vertex_count());
    for w in clique.windows(2) {
        sets.union(w[0], w[1]);
    }
    let in_clique = |v: usize| clique.contains(&v);
    let mut monitors = EdgeSet::new();
    for e in g.edges() {
        if in_clique(e.u) && in_clique(e.v) {
            continue;
        }
        if !sets.union(e.u, e.v) {
            monitors.insert(e.id);
        }
    }
    monitors
}

/// Checks that `Σ C(a_i, 2)` over compositions of `n` into `s` positive
/// parts is maximized exactly by the permutations of `(n-s+1, 1, ..., 1)`.
///
/// # Panics
/// Unless `1 <= s <= n`.
pub fn lemma1_check(n: usize, s: usize) -> bool {
    assert!(1 <= s && s <= n, "need 1 <= s <= n");
    let mut compositions = Vec::new();
    let mut parts = Vec::with_capacity(s);
    compositions_into(n, s, &mut parts, &mut compositions);
    let pairs = |a: &usize| a * (a - 1) / 2;
    let best = compositions
        .iter()
        .map(|c| c.iter().map(pairs).sum::<usize>())
        .max()
        .expect("at least one composition");
    compositions.iter().all(|c| {
        let value: usize = c.iter().map(pairs).sum();
        let big = c.iter().filter(|&&a| a == n - s + 1).count();
        let ones = c.iter().filter(|&&a| a == 1).count();
        let special = if s == n {
            ones == s
        } else {
            big == 1 && ones == s - 1
        };
        special == (value == best)
    })
}

fn compositions_into(n: usize, s: usize, parts: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if s == 1 {
        parts.push(n);
        out.push(parts.clone());
        parts.pop();
        return;
    }
    for first in 1..=n - (s - 1) {
        parts.push(first);
        compositions_into(n - first, s - 1, parts, out);
        parts.pop();
    }
}

/// Simple graph on at most 8 vertices as an upper-triangle adjacency bitmask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct SmallGraph {
    n: usize,
    bits: u32,
}

fn pair_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    // Row-major over i < j.
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

impl SmallGraph {
    fn has(&self, i: usize, j: usize) -> bool {
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        self.bits >> pair_index(self.n, a, b) & 1 == 1
    }

    fn degree(&self, v: usize) -> usize {
        (0..self.n).filter(|&u| u != v && self.has(u, v)).count()
    }

    fn permuted(&self, perm: &[usize]) -> u32 {
        let mut bits = 0;
        for i in 0..self.n {
            for j in i + 1..self.n {
                if self.has(i, j) {
                    let (a, b) = (perm[i].min(perm[j]), perm[i].max(perm[j]));
                    bits |= 1 << pair_index(self.n, a, b);
                }
            }
        }
        bits
    }

    /// Minimum code over permutations placing vertices in non-increasing
    /// degree order. The permutation set is isomorphism-invariant, so the
    /// result is a canonical form.
    fn canonical(&self) -> SmallGraph {
        let n = self.n;
        let degrees: Vec<usize> = (0..n).map(|v| self.degree(v)).collect();
        let mut sorted = degrees.clone();
        sorted.sort_unstable_by(|a, b| b.cmp(a));
        let mut perm = vec![usize::MAX; n];
        let mut used = vec![false; n];
        let mut best = u32::MAX;
        self.search(0, &sorted, &degrees, &mut perm, &mut used, &mut best);
        SmallGraph { n, bits: best }
    }

    fn search(
        &self,
        pos: usize,
        sorted: &[usize],
        degrees: &[usize],
        perm: &mut [usize],
        used: &mut [bool],
        best: &mut u32,
    ) {
        if pos == self.n {
            *best = (*best).min(self.permuted(perm));
            return;
        }
        for v in 0..self.n {
            if !used[v] && degrees[v] == sorted[pos] {
                used[v] = true;
                perm[v] = pos;
                self.search(pos + 1, sorted, degrees, perm, used, best);
                used[v] = false;
            }
        }
    }

    fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = 1u32;
        let mut stack = vec![0];
        while let Some(x) = stack.pop() {
            for y in 0..self.n {
                if y != x && seen >> y & 1 == 0 && self.has(x, y) {
                    seen |= 1 << y;
                    stack.push(y);
                }
            }
        }
        seen.count_ones() as usize == self.n
    }

    fn to_graph(self) -> Graph {
        let mut edges = Vec::new();
        for i in 0..self.n {
            for j in i + 1..self.n {
                if self.has(i, j) {
                    edges.push((i, j));
                }
            }
        }
        Graph::unit(self.n, edges).expect("small graph is valid")
    }
}

/// One representative of every isomorphism class of simple graphs on `n`
/// vertices (`1 <= n <= 8`), each vertex-extended from the classes on
/// `n - 1` vertices.
fn all_graphs_up_to_iso(n: usize) -> Vec<SmallGraph> {
    assert!((1..=8).contains(&n), "enumeration supports 1..=8 vertices");
    let mut layer = vec![SmallGraph { n: 1, bits: 0 }];
    for size in 2..=n {
        let mut next: Vec<SmallGraph> = layer
            .par_iter()
            .flat_map_iter(|g| {
                (0u32..1 << (size - 1)).map(move |nbrs| {
                    let mut bits = 0u32;
                    for i in 0..g.n {
                        for j in i + 1..g.n {
                            if g.has(i, j) {
                                bits |= 1 << pair_index(size, i, j);
                            }
                        }
                    }
                    for i in 0..size - 1 {
                        if nbrs >> i & 1 == 1 {
                            bits |= 1 << pair_index(size, i, size - 1);
                        }
                    }
                    SmallGraph { n: size, bits }.canonical()
                })
            })
            .collect();
        next.sort_unstable();
        next.dedup();
        layer = next;
    }
    layer
}

/// Every connected simple graph on exactly `n` vertices, up to isomorphism.
pub fn connected_graphs(n: usize) -> Vec<Graph> {
    all_graphs_up_to_iso(n)
        .into_iter()
        .filter(SmallGraph::is_connected)
        .map(SmallGraph::to_graph)
        .collect()
}

/// A seeded connected simple graph on `n` vertices: each pair is an edge with
/// probability one half, resampled until connected.
pub fn random_connected_simple(n: usize, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if rng.gen_bool(0.5) {
                    edges.push((i, j));
                }
            }
        }
        let g = Graph::unit(n, edges).expect("pairs are in range");
        if connected_components(&g).count <= 1 {
            return g;
        }
    }
}

/// Outcome of checking the reduction on one `(graph, q)` pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StarCheck {
    pub vertex_count: usize,
    pub edge_count: usize,
    pub q: usize,
    pub k: usize,
    pub l: usize,
    pub clique: bool,
    pub decision: bool,
    /// When a clique exists: the constructed witness leaves at least `l` bridges.
    pub witness_ok: Option<bool>,
}

impl StarCheck {
    pub fn holds(&self) -> bool {
        self.clique == self.decision && self.witness_ok != Some(false)
    }
}

/// Checks the equivalence on every admissible `q` (those giving `k > 0`).
pub fn check_star(g: &Graph) -> Result<Vec<StarCheck>, HardnessError> {
    let n = g.vertex_count();
    let mut out = Vec::new();
    for q in 3..=n {
        let inst = CliqueInstance::new(g.clone(), q)?;
        let dec = match reduce_clique(&inst) {
            Ok(d) => d,
            Err(
                HardnessError::NonPositiveBudget { .. } | HardnessError::NonPositiveTarget { .. },
            ) => continue,
            Err(e) => return Err(e),
        };
        let clique = find_clique(g, q)?;
        let decision = decide_flow_monitors(&dec)?;
        let witness_ok = clique.as_ref().map(|c| {
            let m = clique_witness(g, c);
            let mask = EdgeMask::from_set(g.edge_count(), &m);
            let mut buf = Vec::new();
            BridgeFinder::new(g).find_into(g, &mask, &mut buf);
            m.len() == dec.k && buf.len() >= dec.l
        });
        out.push(StarCheck {
            vertex_count: n,
            edge_count: g.edge_count(),
            q,
            k: dec.k,
            l: dec.l,
            clique: clique.is_some(),
            decision,
            witness_ok,
        });
    }
    Ok(out)
}

/// Runs [`check_star`] over a corpus in parallel, preserving corpus order.
pub fn check_star_corpus(graphs: &[Graph]) -> Result<Vec<StarCheck>, HardnessError> {
    let per_graph: Result<Vec<Vec<StarCheck>>, HardnessError> =
        graphs.par_iter().map(check_star).collect();
    Ok(per_graph?.into_iter().flatten().collect())
}
