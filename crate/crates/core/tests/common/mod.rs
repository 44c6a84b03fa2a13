#![allow(dead_code)]

use flowmon::generators::{gen_random, RandomSpec};
use flowmon::graph::{components_masked, EdgeMask};
use flowmon::{EdgeId, EdgeSet, Graph, Weight};

/// Seeded small weighted multigraphs: n in 2..=8, m in 1..=12, weights 1..=5.
pub fn small_corpus(count: usize, salt: u64) -> Vec<Graph> {
    (0..count as u64)
        .map(|i| {
            let seed = salt.wrapping_mul(1_000_003).wrapping_add(i);
            let n = 2 + (seed % 7) as usize;
            let m = 1 + (seed / 7 % 12) as usize;
            let mut spec = RandomSpec::new(n, m, seed);
            spec.max_weight = 5;
            gen_random(&spec).unwrap()
        })
        .collect()
}

pub fn is_connected(g: &Graph) -> bool {
    components_masked(g, &EdgeMask::none(g.edge_count())).count <= 1
}

/// Bridges of `g - removed` by removing each remaining edge and recounting
/// components. Independent of the lowpoint search.
pub fn bridges_oracle(g: &Graph, removed: &EdgeSet) -> EdgeSet {
    let mut mask = EdgeMask::from_set(g.edge_count(), removed);
    let base = components_masked(g, &mask).count;
    let mut out = EdgeSet::new();
    for e in g.edge_ids().filter(|&e| !removed.contains(e)) {
        mask.remove(e);
        if components_masked(g, &mask).count > base {
            out.insert(e);
        }
        mask.restore(e);
    }
    out
}

pub fn gain_oracle(g: &Graph, m: &EdgeSet) -> Weight {
    m.union(&bridges_oracle(g, m)).weight(g)
}

/// Exhaustive optimum over all subsets of size at most k, via the oracle gain.
pub fn optimum_oracle(g: &Graph, k: usize) -> Weight {
    let m = g.edge_count();
    assert!(m <= 16);
    let mut best = Weight::ZERO;
    for bits in 0u32..1 << m {
        if bits.count_ones() as usize > k {
            continue;
        }
        let set: EdgeSet = (0..m).filter(|i| bits >> i & 1 == 1).map(EdgeId).collect();
        best = best.max(gain_oracle(g, &set));
    }
    best
}

pub fn units(u: u64) -> Weight {
    Weight::from_units(u).unwrap()
}
