//! Weighted undirected multigraph and the connectivity primitives built on it.
//!
//! Edges are identified by their position in the edge list, never by their
//! endpoints: parallel edges and self-loops are first-class. A graph is
//! immutable once built; "G minus a set of edges" is expressed with an
//! [`EdgeMask`] passed to the traversal rather than by copying the graph.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::weight::{Weight, WeightError};

/// Dense edge identifier: the edge's index in [`Graph::edges`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeId(pub usize);

impl EdgeId {
    pub const fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct EdgeRecord {
    pub id: EdgeId,
    pub u: usize,
    pub v: usize,
    pub weight: Weight,
}

impl EdgeRecord {
    pub fn is_loop(&self) -> bool {
        self.u == self.v
    }

    /// The endpoint opposite `x`. For a loop this is `x` itself.
    pub fn other(&self, x: usize) -> usize {
        if self.u == x {
            self.v
        } else {
            self.u
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("edge {edge} has endpoint out of range ({u}, {v}) for {vertex_count} vertices")]
    EndpointOutOfRange {
        edge: usize,
        u: usize,
        v: usize,
        vertex_count: usize,
    },
    #[error("total edge weight overflows")]
    WeightOverflow(#[from] WeightError),
    #[error("edge id {0} is not an edge of the graph")]
    UnknownEdge(EdgeId),
}

/// A set of edge ids with deterministic (ascending) iteration order.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct EdgeSet(BTreeSet<EdgeId>);

impl EdgeSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, e: EdgeId) -> bool {
        self.0.insert(e)
    }

    pub fn remove(&mut self, e: EdgeId) -> bool {
        self.0.remove(&e)
    }

    pub fn contains(&self, e: EdgeId) -> bool {
        self.0.contains(&e)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.0.iter().copied()
    }

    pub fn union(&self, other: &EdgeSet) -> EdgeSet {
        self.0.union(&other.0).copied().collect()
    }

    pub fn difference(&self, other: &EdgeSet) -> EdgeSet {
        self.0.difference(&other.0).copied().collect()
    }

    pub fn is_disjoint(&self, other: &EdgeSet) -> bool {
        self.0.is_disjoint(&other.0)
    }

    pub fn is_subset(&self, other: &EdgeSet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn extend<I: IntoIterator<Item = EdgeId>>(&mut self, iter: I) {
        self.0.extend(iter)
    }

    pub fn to_vec(&self) -> Vec<EdgeId> {
        self.iter().collect()
    }

    /// Total weight of the members in `g`.
    pub fn weight(&self, g: &Graph) -> Weight {
        self.iter().map(|e| g.edge(e).weight).sum()
    }
}

impl FromIterator<EdgeId> for EdgeSet {
    fn from_iter<I: IntoIterator<Item = EdgeId>>(iter: I) -> Self {
        EdgeSet(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a EdgeSet {
    type Item = EdgeId;
    type IntoIter = std::iter::Copied<std::collections::btree_set::Iter<'a, EdgeId>>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter().copied()
    }
}

/// Per-edge removal flags realizing `G - S` without copying the graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeMask(Vec<bool>);

impl EdgeMask {
    pub fn none(edge_count: usize) -> Self {
        EdgeMask(vec![false; edge_count])
    }

    pub fn from_set(edge_count: usize, removed: &EdgeSet) -> Self {
        let mut mask = Self::none(edge_count);
        for e in removed {
            mask.remove(e);
        }
        mask
    }

    pub fn is_removed(&self, e: EdgeId) -> bool {
        self.0[e.0]
    }

    pub fn remove(&mut self, e: EdgeId) {
        self.0[e.0] = true;
    }

    pub fn restore(&mut self, e: EdgeId) {
        self.0[e.0] = false;
    }

    pub fn removed_count(&self) -> usize {
        self.0.iter().filter(|&&r| r).count()
    }

    pub fn present(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &r)| !r)
            .map(|(i, _)| EdgeId(i))
    }
}

/// Weighted undirected multigraph with compressed adjacency.
///
/// Self-loops are stored in the edge list but omitted from adjacency: they
/// never affect connectivity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    vertex_count: usize,
    edges: Vec<EdgeRecord>,
    adj_start: Vec<usize>,
    adj: Vec<(usize, EdgeId)>,
    total_weight: Weight,
}

impl Graph {
    /// Builds a graph from `(u, v, weight)` triples; edge ids follow input order.
    pub fn new<I>(vertex_count: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize, Weight)>,
    {
        let edges: Vec<EdgeRecord> = edges
            .into_iter()
            .enumerate()
            .map(|(i, (u, v, weight))| EdgeRecord {
                id: EdgeId(i),
                u,
                v,
                weight,
            })
            .collect();
        for e in &edges {
            if e.u >= vertex_count || e.v >= vertex_count {
                return Err(GraphError::EndpointOutOfRange {
                    edge: e.id.0,
                    u: e.u,
                    v: e.v,
                    vertex_count,
                });
            }
        }
        let total_weight = Weight::try_sum(edges.iter().map(|e| e.weight))?;

        let mut degree = vec![0usize; vertex_count + 1];
        for e in edges.iter().filter(|e| !e.is_loop()) {
            degree[e.u] += 1;
            degree[e.v] += 1;
        }
        let mut adj_start = Vec::with_capacity(vertex_count + 1);
        let mut acc = 0;
        for d in degree.iter().take(vertex_count) {
            adj_start.push(acc);
            acc += d;
        }
        adj_start.push(acc);
        let mut fill = adj_start.clone();
        let mut adj = vec![(0, EdgeId(0)); acc];
        for e in edges.iter().filter(|e| !e.is_loop()) {
            adj[fill[e.u]] = (e.v, e.id);
            fill[e.u] += 1;
            adj[fill[e.v]] = (e.u, e.id);
            fill[e.v] += 1;
        }

        Ok(Graph {
            vertex_count,
            edges,
            adj_start,
            adj,
            total_weight,
        })
    }

    /// Unit-weight convenience constructor.
    pub fn unit<I>(vertex_count: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        Self::new(
            vertex_count,
            edges.into_iter().map(|(u, v)| (u, v, Weight::ONE)),
        )
    }

    pub fn empty(vertex_count: usize) -> Self {
        Self::new(vertex_count, std::iter::empty()).expect("edgeless graph is valid")
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[EdgeRecord] {
        &self.edges
    }

    pub fn edge(&self, e: EdgeId) -> &EdgeRecord {
        &self.edges[e.0]
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> + '_ {
        (0..self.edges.len()).map(EdgeId)
    }

    pub fn all_edges(&self) -> EdgeSet {
        self.edge_ids().collect()
    }

    pub fn total_weight(&self) -> Weight {
        self.total_weight
    }

    /// Non-loop incidences of `v` as `(neighbor, edge)`.
    pub fn neighbors(&self, v: usize) -> &[(usize, EdgeId)] {
        &self.adj[self.adj_start[v]..self.adj_start[v + 1]]
    }

    /// Degree of `v`, counting each loop twice.
    pub fn degree(&self, v: usize) -> usize {
        let loops = self
            .edges
            .iter()
            .filter(|e| e.is_loop() && e.u == v)
            .count();
        self.neighbors(v).len() + 2 * loops
    }

    pub fn check_edge_set(&self, m: &EdgeSet) -> Result<(), GraphError> {
        match m.iter().find(|e| e.0 >= self.edge_count()) {
            Some(bad) => Err(GraphError::UnknownEdge(bad)),
            None => Ok(()),
        }
    }

    /// The subgraph keeping only edges not in `removed`, with edges renumbered
    /// densely in original order. Returns the new graph and, for each new edge
    /// id, the original id it came from.
    pub fn without_edges(&self, removed: &EdgeMask) -> (Graph, Vec<EdgeId>) {
        let kept: Vec<EdgeId> = removed.present().collect();
        let g = Graph::new(
            self.vertex_count,
            kept.iter().map(|&e| {
                let r = self.edge(e);
                (r.u, r.v, r.weight)
            }),
        )
        .expect("subgraph of a valid graph is valid");
        (g, kept)
    }
}

/// Component labels and the number of components.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Components {
    pub labels: Vec<usize>,
    pub count: usize,
}

impl Components {
    pub fn members(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.count];
        for (v, &c) in self.labels.iter().enumerate() {
            out[c].push(v);
        }
        out
    }
}

/// Connected components; labels are assigned in order of first appearance by
/// vertex index.
pub fn connected_components(g: &Graph) -> Components {
    components_masked(g, &EdgeMask::none(g.edge_count()))
}

/// Connected components of `g` minus the masked edges.
pub fn components_masked(g: &Graph, removed: &EdgeMask) -> Components {
    const UNSEEN: usize = usize::MAX;
    let mut labels = vec![UNSEEN; g.vertex_count()];
    let mut count = 0;
    let mut stack = Vec::new();
    for root in 0..g.vertex_count() {
        if labels[root] != UNSEEN {
            continue;
        }
        labels[root] = count;
        stack.push(root);
        while let Some(x) = stack.pop() {
            for &(y, e) in g.neighbors(x) {
                if !removed.is_removed(e) && labels[y] == UNSEEN {
                    labels[y] = count;
                    stack.push(y);
                }
            }
        }
        count += 1;
    }
    Components { labels, count }
}

/// Reusable buffers for the iterative lowpoint bridge search.
///
/// One finder can be reused across many masks on the same graph, which keeps
/// greedy candidate evaluation free of per-call allocation.
#[derive(Debug, Clone)]
pub struct BridgeFinder {
    disc: Vec<u32>,
    low: Vec<u32>,
    // (vertex, edge used to enter it, next adjacency slot)
    stack: Vec<(usize, Option<EdgeId>, usize)>,
}

const UNVISITED: u32 = u32::MAX;

impl BridgeFinder {
    pub fn new(g: &Graph) -> Self {
        BridgeFinder {
            disc: vec![UNVISITED; g.vertex_count()],
            low: vec![UNVISITED; g.vertex_count()],
            stack: Vec::with_capacity(g.vertex_count()),
        }
    }

    /// Appends the bridges of `g - removed` to `out` (in discovery order).
    pub fn find_into(&mut self, g: &Graph, removed: &EdgeMask, out: &mut Vec<EdgeId>) {
        let n = g.vertex_count();
        self.disc.clear();
        self.disc.resize(n, UNVISITED);
        self.low.clear();
        self.low.resize(n, UNVISITED);
        let mut time = 0u32;

        for root in 0..n {
            if self.disc[root] != UNVISITED {
                continue;
            }
            self.disc[root] = time;
            self.low[root] = time;
            time += 1;
            self.stack.clear();
            self.stack.push((root, None, g.adj_start[root]));

            while let Some(top) = self.stack.last_mut() {
                let (x, entered_by, slot) = *top;
                if slot < g.adj_start[x + 1] {
                    top.2 += 1;
                    let (y, e) = g.adj[slot];
                    if removed.is_removed(e) || Some(e) == entered_by {
                        continue;
                    }
                    if self.disc[y] == UNVISITED {
                        self.disc[y] = time;
                        self.low[y] = time;
                        time += 1;
                        self.stack.push((y, Some(e), g.adj_start[y]));
                    } else if self.disc[y] < self.low[x] {
                        self.low[x] = self.disc[y];
                    }
                } else {
                    self.stack.pop();
                    if let Some(&(parent, _, _)) = self.stack.last() {
                        if self.low[x] < self.low[parent] {
                            self.low[parent] = self.low[x];
                        }
                        if self.low[x] > self.disc[parent] {
                            out.push(entered_by.expect("non-root frame has an entry edge"));
                        }
                    }
                }
            }
        }
    }

    /// Total weight of `g - removed`'s bridges.
    pub fn bridge_weight(
        &mut self,
        g: &Graph,
        removed: &EdgeMask,
        buf: &mut Vec<EdgeId>,
    ) -> Weight {
        buf.clear();
        self.find_into(g, removed, buf);
        buf.iter().map(|&e| g.edge(e).weight).sum()
    }
}

/// The bridges of `g`.
pub fn bridges(g: &Graph) -> EdgeSet {
    bridges_masked(g, &EdgeMask::none(g.edge_count()))
}

/// The bridges of `g - removed`.
pub fn bridges_masked(g: &Graph, removed: &EdgeMask) -> EdgeSet {
    let mut out = Vec::new();
    BridgeFinder::new(g).find_into(g, removed, &mut out);
    out.into_iter().collect()
}

/// The bridges of `g - m` (the extra edges of monitor set `m`).
pub fn extras(g: &Graph, m: &EdgeSet) -> EdgeSet {
    bridges_masked(g, &EdgeMask::from_set(g.edge_count(), m))
}

/// `w(M) + w(bridges(G - M))`: the weight of every edge whose flow is known
/// once `m` carries monitors.
///
/// Graph construction bounds the total weight, so this cannot overflow.
pub fn gain(g: &Graph, m: &EdgeSet) -> Weight {
    let mask = EdgeMask::from_set(g.edge_count(), m);
    let mut buf = Vec::new();
    let extra = BridgeFinder::new(g).bridge_weight(g, &mask, &mut buf);
    m.weight(g)
        .checked_add(extra)
        .expect("bounded by total weight")
}

fn connected_masked(g: &Graph, removed: &EdgeMask) -> bool {
    components_masked(g, removed).count <= 1
}

/// Whether `g` is connected and stays connected after deleting any `c - 1`
/// edges. Graphs with at most one vertex count as `c`-edge-connected.
///
/// # Panics
/// If `c` is not in `1..=3`.
pub fn is_c_edge_connected(g: &Graph, c: u32) -> bool {
    assert!(
        (1..=3).contains(&c),
        "edge connectivity is only checked for c in 1..=3"
    );
    if g.vertex_count() <= 1 {
        return true;
    }
    let mut mask = EdgeMask::none(g.edge_count());
    if !connected_masked(g, &mask) {
        return false;
    }
    if c == 1 {
        return true;
    }
    let mut finder = BridgeFinder::new(g);
    let mut buf = Vec::new();
    finder.find_into(g, &mask, &mut buf);
    if !buf.is_empty() {
        return false;
    }
    if c == 2 {
        return true;
    }
    // Removing any pair {e, f} keeps g connected iff no g - e has a bridge.
    for e in g.edge_ids() {
        mask.remove(e);
        buf.clear();
        finder.find_into(g, &mask, &mut buf);
        mask.restore(e);
        if !buf.is_empty() {
            return false;
        }
    }
    true
}

/// Minimal union-find with path halving.
#[derive(Debug, Clone)]
pub struct DisjointSets {
    parent: Vec<usize>,
}

impl DisjointSets {
    pub fn new(n: usize) -> Self {
        DisjointSets {
            parent: (0..n).collect(),
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Joins the sets of `a` and `b`; the smaller root becomes the
    /// representative. Returns false if already joined.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }
}

/// Maximal acyclic edge set, scanning edges in id order.
pub fn spanning_forest(g: &Graph) -> EdgeSet {
    let mut sets = DisjointSets::new(g.vertex_count());
    g.edges()
        .iter()
        .filter(|e| sets.union(e.u, e.v))
        .map(|e| e.id)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ids(v: &[usize]) -> EdgeSet {
        v.iter().map(|&i| EdgeId(i)).collect()
    }

    fn triangle() -> Graph {
        Graph::unit(3, [(0, 1), (1, 2), (2, 0)]).unwrap()
    }

    fn k4() -> Graph {
        Graph::unit(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap()
    }

    fn cycle(n: usize) -> Graph {
        Graph::unit(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    fn circular_ladder(half: usize) -> Graph {
        let mut edges = Vec::new();
        for i in 0..half {
            edges.push((i, (i + 1) % half));
            edges.push((half + i, half + (i + 1) % half));
            edges.push((i, half + i));
        }
        Graph::unit(2 * half, edges).unwrap()
    }

    /// Removes each edge in turn and compares component counts.
    fn bridge_oracle(g: &Graph) -> EdgeSet {
        let base = connected_components(g).count;
        g.edge_ids()
            .filter(|&e| {
                let mut mask = EdgeMask::none(g.edge_count());
                mask.remove(e);
                components_masked(g, &mask).count > base
            })
            .collect()
    }

    /// Literal subset-removal check for c <= 3.
    fn c_connected_oracle(g: &Graph, c: u32) -> bool {
        if g.vertex_count() <= 1 {
            return true;
        }
        let m = g.edge_count();
        let mut mask = EdgeMask::none(m);
        if !connected_masked(g, &mask) {
            return false;
        }
        for a in 0..m {
            if c >= 2 {
                mask.remove(EdgeId(a));
                if !connected_masked(g, &mask) {
                    return false;
                }
                if c >= 3 {
                    for b in a + 1..m {
                        mask.remove(EdgeId(b));
                        let ok = connected_masked(g, &mask);
                        mask.restore(EdgeId(b));
                        if !ok {
                            return false;
                        }
                    }
                }
                mask.restore(EdgeId(a));
            }
        }
        true
    }

    fn arb_graph(max_n: usize, max_m: usize) -> impl Strategy<Value = Graph> {
        (1..=max_n).prop_flat_map(move |n| {
            prop::collection::vec((0..n, 0..n, 1u64..=5), 0..=max_m).prop_map(move |es| {
                Graph::new(
                    n,
                    es.into_iter()
                        .map(|(u, v, w)| (u, v, Weight::from_units(w).unwrap())),
                )
                .unwrap()
            })
        })
    }

    #[test]
    fn components_examples() {
        assert_eq!(connected_components(&Graph::empty(3)).labels, vec![0, 1, 2]);
        assert_eq!(connected_components(&triangle()).labels, vec![0, 0, 0]);
        let g = Graph::unit(4, [(0, 1), (1, 2), (2, 0)]).unwrap();
        let c = connected_components(&g);
        assert_eq!(c.labels, vec![0, 0, 0, 1]);
        assert_eq!(c.count, 2);
    }

    #[test]
    fn bridges_examples() {
        let path = Graph::unit(3, [(0, 1), (1, 2)]).unwrap();
        assert_eq!(bridges(&path), ids(&[0, 1]));
        assert!(bridges(&triangle()).is_empty());

        let joined =
            Graph::unit(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (2, 3)]).unwrap();
        assert_eq!(bridge_oracle(&joined), ids(&[6]));
        assert_eq!(bridges(&joined), ids(&[6]));

        let parallel = Graph::unit(2, [(0, 1), (0, 1)]).unwrap();
        assert!(bridge_oracle(&parallel).is_empty());
        assert!(bridges(&parallel).is_empty());

        let looped = Graph::unit(2, [(0, 0), (0, 1)]).unwrap();
        assert_eq!(bridges(&looped), ids(&[1]));
    }

    #[test]
    fn bridges_survive_long_paths() {
        let n = 200_000;
        let g = Graph::unit(n, (0..n - 1).map(|i| (i, i + 1))).unwrap();
        assert_eq!(bridges(&g).len(), n - 1);
    }

    #[test]
    fn gain_examples() {
        assert_eq!(
            gain(&triangle(), &ids(&[0])),
            Weight::from_units(3).unwrap()
        );
        assert_eq!(gain(&k4(), &ids(&[0])), Weight::ONE);
        let g = k4();
        assert_eq!(gain(&g, &g.all_edges()), g.total_weight());
    }

    #[test]
    fn c_edge_connectivity_examples() {
        assert!(is_c_edge_connected(&cycle(4), 2));
        assert!(!is_c_edge_connected(&cycle(4), 3));
        assert!(c_connected_oracle(&circular_ladder(4), 3));
        assert!(is_c_edge_connected(&circular_ladder(4), 3));
        let single = Graph::unit(1, [(0, 0)]).unwrap();
        for c in 1..=3 {
            assert!(is_c_edge_connected(&single, c));
            assert!(is_c_edge_connected(&Graph::empty(1), c));
        }
        assert!(!is_c_edge_connected(&Graph::empty(2), 1));
    }

    #[test]
    fn spanning_forest_examples() {
        assert_eq!(spanning_forest(&triangle()), ids(&[0, 1]));
        let forest = Graph::unit(5, [(0, 1), (3, 3), (1, 2), (3, 4)]).unwrap();
        assert_eq!(spanning_forest(&forest), ids(&[0, 2, 3]));
        let parallels = Graph::unit(2, [(0, 1), (0, 1), (0, 1)]).unwrap();
        assert_eq!(spanning_forest(&parallels), ids(&[0]));
    }

    proptest! {
        #[test]
        fn bridges_match_removal_oracle(g in arb_graph(8, 14)) {
            prop_assert_eq!(bridges(&g), bridge_oracle(&g));
        }

        #[test]
        fn c_connectivity_matches_subset_oracle(g in arb_graph(6, 10), c in 1u32..=3) {
            prop_assert_eq!(is_c_edge_connected(&g, c), c_connected_oracle(&g, c));
        }

        #[test]
        fn gain_is_monotone(g in arb_graph(7, 12), bits in any::<u16>(), extra in any::<prop::sample::Index>()) {
            prop_assume!(g.edge_count() > 0);
            let m: EdgeSet = g.edge_ids().filter(|e| bits >> (e.0 % 16) & 1 == 1).collect();
            let e = EdgeId(extra.index(g.edge_count()));
            let mut bigger = m.clone();
            bigger.insert(e);
            prop_assert!(gain(&g, &bigger) >= gain(&g, &m));
            prop_assert!(gain(&g, &m) >= m.weight(&g));
        }

        #[test]
        fn empty_monitor_gain_is_bridge_weight(g in arb_graph(7, 12)) {
            prop_assert_eq!(gain(&g, &EdgeSet::new()), bridges(&g).weight(&g));
        }

        #[test]
        fn spanning_forest_size(g in arb_graph(8, 14)) {
            let f = spanning_forest(&g);
            prop_assert_eq!(f.len(), g.vertex_count() - connected_components(&g).count);
            prop_assert!(f.iter().all(|e| !g.edge(e).is_loop()));
        }
    }
}
