//! Circulations, monitor readings and conservation-based inference.
//!
//! Flow on an edge is signed and oriented from its stored `u` to its stored
//! `v`. Conservation means every vertex has zero net outflow; self-loops
//! contribute nothing and may carry any value.

use std::collections::{BTreeMap, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::{
    bridges_masked, components_masked, spanning_forest, EdgeId, EdgeMask, EdgeSet, Graph,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FlowError {
    #[error("edge {0} is not an edge of the graph")]
    UnknownEdge(EdgeId),
    #[error("reading given for edge {0}, which carries no monitor")]
    ReadingForNonMonitor(EdgeId),
    #[error("monitor edge {0} has no reading")]
    MissingReading(EdgeId),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circulation {
    /// Flow per edge id, oriented `u -> v`.
    pub flow: Vec<i64>,
}

impl Circulation {
    pub fn get(&self, e: EdgeId) -> i64 {
        self.flow[e.0]
    }

    /// Net outflow at every vertex; all zero for a valid circulation.
    pub fn residuals(&self, g: &Graph) -> Vec<i64> {
        net_outflow(
            g,
            self.flow.iter().enumerate().map(|(i, &f)| (EdgeId(i), f)),
        )
    }

    pub fn is_conserving(&self, g: &Graph) -> bool {
        self.residuals(g).iter().all(|&r| r == 0)
    }
}

fn net_outflow(g: &Graph, flows: impl IntoIterator<Item = (EdgeId, i64)>) -> Vec<i64> {
    let mut out = vec![0i64; g.vertex_count()];
    for (e, f) in flows {
        let r = g.edge(e);
        if !r.is_loop() {
            out[r.u] += f;
            out[r.v] -= f;
        }
    }
    out
}

/// A conserving integer circulation, deterministic in `(g, seed)`.
///
/// Edges outside the spanning forest (loops included) draw uniform values in
/// `[-range, range]`; forest edges are then forced leaf-inward.
pub fn random_circulation(g: &Graph, seed: u64, range: u32) -> Circulation {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let forest = spanning_forest(g);
    let range = i64::from(range);
    let mut flow = vec![0i64; g.edge_count()];
    for e in g.edge_ids().filter(|&e| !forest.contains(e)) {
        flow[e.0] = rng.gen_range(-range..=range);
    }
    let mut net = net_outflow(
        g,
        g.edge_ids()
            .filter(|&e| !forest.contains(e))
            .map(|e| (e, flow[e.0])),
    );

    // BFS over forest edges from the lowest vertex of each tree.
    let mut parent_edge: Vec<Option<EdgeId>> = vec![None; g.vertex_count()];
    let mut seen = vec![false; g.vertex_count()];
    let mut order = Vec::with_capacity(g.vertex_count());
    let mut queue = VecDeque::new();
    for root in 0..g.vertex_count() {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        queue.push_back(root);
        while let Some(x) = queue.pop_front() {
            order.push(x);
            for &(y, e) in g.neighbors(x) {
                if forest.contains(e) && !seen[y] {
                    seen[y] = true;
                    parent_edge[y] = Some(e);
                    queue.push_back(y);
                }
            }
        }
    }
    for &x in order.iter().rev() {
        let Some(pe) = parent_edge[x] else { continue };
        let r = g.edge(pe);
        let parent = r.other(x);
        // Choose f so that x ends up balanced.
        let f = if r.u == x { -net[x] } else { net[x] };
        flow[pe.0] = f;
        if r.u == x {
            net[x] += f;
            net[parent] -= f;
        } else {
            net[x] -= f;
            net[parent] += f;
        }
    }
    debug_assert!(net.iter().all(|&v| v == 0));
    Circulation { flow }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Measurements {
    pub readings: BTreeMap<EdgeId, i64>,
}

/// Restriction of `c` to the monitor edges.
pub fn measure(c: &Circulation, m: &EdgeSet) -> Measurements {
    Measurements {
        readings: m.iter().map(|e| (e, c.get(e))).collect(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InferenceResult {
    /// Monitor readings plus every flow forced by conservation.
    pub determined: BTreeMap<EdgeId, i64>,
    pub undetermined: EdgeSet,
    pub consistent: bool,
    /// Vertex sets of components of `G - M - B` with non-zero net boundary flow.
    pub violations: Vec<Vec<usize>>,
}

/// Determines every flow fixed by the readings on `m`: exactly the readings
/// themselves and the bridges of `G - M`.
///
/// Each bridge is resolved independently from a cut sum: conservation over
/// the side of the bridge containing its `u` endpoint.
pub fn infer(g: &Graph, m: &EdgeSet, r: &Measurements) -> Result<InferenceResult, FlowError> {
    if let Some(bad) = m.iter().find(|e| e.0 >= g.edge_count()) {
        return Err(FlowError::UnknownEdge(bad));
    }
    if let Some(&bad) = r.readings.keys().find(|&&e| !m.contains(e)) {
        return Err(FlowError::ReadingForNonMonitor(bad));
    }
    if let Some(bad) = m.iter().find(|e| !r.readings.contains_key(e)) {
        return Err(FlowError::MissingReading(bad));
    }

    let mut mask = EdgeMask::from_set(g.edge_count(), m);
    let extras = bridges_masked(g, &mask);
    let mut determined = r.readings.clone();

    let mut side = vec![false; g.vertex_count()];
    let mut stack = Vec::new();
    for b in &extras {
        let rb = g.edge(b);
        mask.remove(b);
        side.iter_mut().for_each(|s| *s = false);
        side[rb.u] = true;
        stack.push(rb.u);
        while let Some(x) = stack.pop() {
            for &(y, e) in g.neighbors(x) {
                if !mask.is_removed(e) && !side[y] {
                    side[y] = true;
                    stack.push(y);
                }
            }
        }
        mask.restore(b);

        let mut measured_out = 0i64;
        for (&e, &f) in &r.readings {
            let re = g.edge(e);
            match (side[re.u], side[re.v]) {
                (true, false) => measured_out += f,
                (false, true) => measured_out -= f,
                _ => {}
            }
        }
        determined.insert(b, -measured_out);
    }

    for b in &extras {
        mask.remove(b);
    }
    let comps = components_masked(g, &mask);
    let net = net_outflow(g, determined.iter().map(|(&e, &f)| (e, f)));
    let mut boundary = vec![0i64; comps.count];
    for (v, &c) in comps.labels.iter().enumerate() {
        boundary[c] += net[v];
    }
    let members = comps.members();
    let violations: Vec<Vec<usize>> = boundary
        .iter()
        .enumerate()
        .filter(|(_, &s)| s != 0)
        .map(|(c, _)| members[c].clone())
        .collect();

    let undetermined = g
        .edge_ids()
        .filter(|e| !determined.contains_key(e))
        .collect();
    Ok(InferenceResult {
        determined,
        undetermined,
        consistent: violations.is_empty(),
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::gain;

    fn triangle() -> Graph {
        Graph::unit(3, [(0, 1), (1, 2), (2, 0)]).unwrap()
    }

    fn single(e: usize) -> EdgeSet {
        [EdgeId(e)].into_iter().collect()
    }

    #[test]
    fn tree_circulation_is_zero() {
        let tree = Graph::unit(5, [(0, 1), (1, 2), (1, 3), (3, 4)]).unwrap();
        let c = random_circulation(&tree, 7, 100);
        assert!(c.flow.iter().all(|&f| f == 0));
    }

    #[test]
    fn cycle_circulation_is_constant() {
        let n = 6;
        let cycle = Graph::unit(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap();
        for seed in 0..10 {
            let c = random_circulation(&cycle, seed, 50);
            assert!(c.flow.iter().all(|&f| f == c.flow[0]), "{:?}", c.flow);
        }
    }

    #[test]
    fn circulation_is_seed_deterministic() {
        let g = Graph::unit(4, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2), (1, 1)]).unwrap();
        assert_eq!(random_circulation(&g, 3, 9), random_circulation(&g, 3, 9));
        assert!(random_circulation(&g, 3, 9).is_conserving(&g));
    }

    #[test]
    fn measure_restricts() {
        let c = Circulation {
            flow: vec![4, -2, 9],
        };
        assert!(measure(&c, &EdgeSet::new()).readings.is_empty());
        assert_eq!(
            measure(&c, &single(1)).readings,
            BTreeMap::from([(EdgeId(1), -2)])
        );
        let all: EdgeSet = (0..3).map(EdgeId).collect();
        assert_eq!(measure(&c, &all).readings.len(), 3);
    }

    #[test]
    fn triangle_inference() {
        let g = triangle();
        let r = Measurements {
            readings: BTreeMap::from([(EdgeId(0), 5)]),
        };
        let res = infer(&g, &single(0), &r).unwrap();
        // 0->1 carries 5, so 1->2 and 2->0 carry 5 as well.
        assert_eq!(res.determined[&EdgeId(1)], 5);
        assert_eq!(res.determined[&EdgeId(2)], 5);
        assert!(res.consistent);
        assert!(res.undetermined.is_empty());
    }

    #[test]
    fn perturbed_readings_are_inconsistent() {
        let g = triangle();
        let m: EdgeSet = [EdgeId(0), EdgeId(1)].into_iter().collect();
        let ok = Measurements {
            readings: BTreeMap::from([(EdgeId(0), 3), (EdgeId(1), 3)]),
        };
        assert!(infer(&g, &m, &ok).unwrap().consistent);
        for (a, b) in [(4, 3), (3, 4)] {
            let bad = Measurements {
                readings: BTreeMap::from([(EdgeId(0), a), (EdgeId(1), b)]),
            };
            let res = infer(&g, &m, &bad).unwrap();
            assert!(!res.consistent);
            assert!(!res.violations.is_empty());
        }
    }

    #[test]
    fn reading_errors() {
        let g = triangle();
        let r = Measurements {
            readings: BTreeMap::from([(EdgeId(1), 5)]),
        };
        assert_eq!(
            infer(&g, &single(0), &r),
            Err(FlowError::ReadingForNonMonitor(EdgeId(1)))
        );
        assert_eq!(
            infer(&g, &single(0), &Measurements::default()),
            Err(FlowError::MissingReading(EdgeId(0)))
        );
    }

    #[test]
    fn loops_are_never_inferred() {
        let g = Graph::unit(2, [(0, 1), (0, 1), (1, 1)]).unwrap();
        let c = random_circulation(&g, 1, 5);
        let m = single(0);
        let res = infer(&g, &m, &measure(&c, &m)).unwrap();
        assert!(res.undetermined.contains(EdgeId(2)));
        assert_eq!(res.determined[&EdgeId(1)], c.get(EdgeId(1)));
        assert_eq!(
            res.determined.len() as u64 * 1_000_000,
            gain(&g, &m).micros()
        );
    }
}
