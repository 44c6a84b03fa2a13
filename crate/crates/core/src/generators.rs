//! Instance generators: the greedy lower-bound families, the small inference
//! example, cycles, circular ladders and seeded random multigraphs.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::flowsim::Measurements;
use crate::graph::{EdgeId, EdgeSet, Graph};
use crate::weight::Weight;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("invalid generator parameter: {0}")]
    Invalid(String),
    #[error("infeasible generator parameters: {0}")]
    Infeasible(String),
}

/// Default ε for the lower-bound families.
pub const DEFAULT_EPSILON: Weight = Weight::from_micros(10_000);

fn prism_edges(offset: usize, half: usize) -> Vec<(usize, usize)> {
    let mut edges = Vec::with_capacity(3 * half);
    for i in 0..half {
        let j = (i + 1) % half;
        edges.push((offset + i, offset + j));
        edges.push((offset + half + i, offset + half + j));
        edges.push((offset + i, offset + half + i));
    }
    edges
}

/// Circular ladder (prism) on `n` unit-weight vertices: two `n/2`-cycles
/// joined by rungs. 3-regular and 3-edge-connected.
pub fn gen_ladder(n: usize) -> Result<Graph, GenError> {
    if n < 6 || !n.is_multiple_of(2) {
        return Err(GenError::Invalid(format!(
            "circular ladder needs an even vertex count >= 6, got {n}"
        )));
    }
    Ok(Graph::unit(n, prism_edges(0, n / 2)).expect("prism is valid"))
}

pub fn gen_cycle(n: usize) -> Result<Graph, GenError> {
    if n == 0 {
        return Err(GenError::Invalid("cycle needs at least one vertex".into()));
    }
    Ok(Graph::unit(n, (0..n).map(|i| (i, (i + 1) % n))).expect("cycle is valid"))
}

/// Two vertices joined by `k + 2` parallel edges of weight `heavy`, next to a
/// unit-weight prism on `2k - 2` vertices.
fn tight_family(k: usize, heavy: Weight) -> Result<Graph, GenError> {
    if k < 4 {
        return Err(GenError::Invalid(format!(
            "tight family needs k >= 4, got {k}"
        )));
    }
    let mut edges: Vec<(usize, usize, Weight)> = (0..k + 2).map(|_| (0, 1, heavy)).collect();
    edges.extend(
        prism_edges(2, k - 1)
            .into_iter()
            .map(|(u, v)| (u, v, Weight::ONE)),
    );
    Graph::new(2 * k, edges).map_err(|e| GenError::Invalid(e.to_string()))
}

fn check_epsilon(epsilon: Weight) -> Result<(), GenError> {
    if epsilon.is_zero() {
        return Err(GenError::Invalid("epsilon must be positive".into()));
    }
    Ok(())
}

/// Lower-bound instance for single-edge greedy: parallel edges weigh `1 + ε`.
pub fn gen_greedy1_tight(k: usize, epsilon: Weight) -> Result<Graph, GenError> {
    check_epsilon(epsilon)?;
    let heavy = Weight::ONE
        .checked_add(epsilon)
        .map_err(|e| GenError::Invalid(e.to_string()))?;
    tight_family(k, heavy)
}

/// Lower-bound instance for pair greedy: parallel edges weigh `1.5 + ε`.
pub fn gen_greedy2_tight(k: usize, epsilon: Weight) -> Result<Graph, GenError> {
    check_epsilon(epsilon)?;
    let heavy = Weight::from_micros(1_500_000)
        .checked_add(epsilon)
        .map_err(|e| GenError::Invalid(e.to_string()))?;
    tight_family(k, heavy)
}

/// The eight-vertex inference example with its four monitors and readings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fig1 {
    pub graph: Graph,
    pub monitors: EdgeSet,
    pub readings: Measurements,
}

/// Vertices `1..=8` of the example are stored as `0..=7`. Edges 0-3 carry
/// monitors, 4-7 are the inferable ones, and 8-11 form the closing 4-cycle
/// `1-7-2-4`, a reconstruction that reproduces every reported flow and the
/// five-vertex kernel with a loop.
pub fn gen_fig1() -> Fig1 {
    const EDGES: [(usize, usize); 12] = [
        (1, 2),
        (2, 3),
        (3, 8),
        (6, 4),
        (3, 5),
        (8, 6),
        (7, 5),
        (5, 6),
        (1, 7),
        (7, 2),
        (2, 4),
        (4, 1),
    ];
    let graph = Graph::unit(8, EDGES.iter().map(|&(u, v)| (u - 1, v - 1))).expect("valid");
    let readings = BTreeMap::from([
        (EdgeId(0), 1),
        (EdgeId(1), 4),
        (EdgeId(2), 2),
        (EdgeId(3), 7),
    ]);
    Fig1 {
        graph,
        monitors: (0..4).map(EdgeId).collect(),
        readings: Measurements { readings },
    }
}

/// Parameters for [`gen_random`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RandomSpec {
    pub n: usize,
    pub m: usize,
    pub seed: u64,
    pub min_degree: usize,
    /// Forbid loops and parallel edges.
    pub simple: bool,
    /// Integer weights are drawn uniformly from `1..=max_weight`.
    pub max_weight: u64,
}

impl RandomSpec {
    pub fn new(n: usize, m: usize, seed: u64) -> Self {
        RandomSpec {
            n,
            m,
            seed,
            min_degree: 0,
            simple: false,
            max_weight: 1,
        }
    }
}

/// Seeded random multigraph with uniformly sampled edges, followed by a
/// repair pass that raises every vertex to `min_degree`.
pub fn gen_random(spec: &RandomSpec) -> Result<Graph, GenError> {
    let RandomSpec {
        n,
        m,
        seed,
        min_degree,
        simple,
        max_weight,
    } = *spec;
    if max_weight == 0 {
        return Err(GenError::Invalid("max_weight must be at least 1".into()));
    }
    if n == 0 && (m > 0 || min_degree > 0) {
        return Err(GenError::Infeasible("no vertices to place edges on".into()));
    }
    let pairs = n * n.saturating_sub(1) / 2;
    if simple && m > pairs {
        return Err(GenError::Infeasible(format!(
            "{m} edges exceed the {pairs} vertex pairs of a simple graph on {n} vertices"
        )));
    }
    if simple && min_degree > n.saturating_sub(1) {
        return Err(GenError::Infeasible(format!(
            "min degree {min_degree} impossible in a simple graph on {n} vertices"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges: Vec<(usize, usize)> = Vec::with_capacity(m);
    if simple {
        let mut chosen: Vec<usize> = sample(&mut rng, pairs, m).into_vec();
        chosen.sort_unstable();
        let mut all_pairs = Vec::with_capacity(pairs);
        for i in 0..n {
            for j in i + 1..n {
                all_pairs.push((i, j));
            }
        }
        edges.extend(chosen.into_iter().map(|p| all_pairs[p]));
    } else {
        for _ in 0..m {
            edges.push((rng.gen_range(0..n), rng.gen_range(0..n)));
        }
    }

    let mut degree = vec![0usize; n];
    let mut present: BTreeSet<(usize, usize)> = BTreeSet::new();
    for &(u, v) in &edges {
        degree[u] += 1;
        degree[v] += 1;
        present.insert((u.min(v), u.max(v)));
    }
    for v in 0..n {
        while degree[v] < min_degree {
            let partner = if n == 1 {
                v
            } else if simple {
                let options: Vec<usize> = (0..n)
                    .filter(|&u| u != v && !present.contains(&(u.min(v), u.max(v))))
                    .collect();
                options[rng.gen_range(0..options.len())]
            } else {
                let u = rng.gen_range(0..n - 1);
                if u >= v {
                    u + 1
                } else {
                    u
                }
            };
            edges.push((v, partner));
            degree[v] += 1;
            degree[partner] += 1;
            present.insert((v.min(partner), v.max(partner)));
        }
    }

    let weighted: Vec<(usize, usize, Weight)> = edges
        .into_iter()
        .map(|(u, v)| {
            let w = rng.gen_range(1..=max_weight);
            (u, v, Weight::from_units(w).expect("small integer weight"))
        })
        .collect();
    Graph::new(n, weighted).map_err(|e| GenError::Invalid(e.to_string()))
}

/// Families selectable from the command line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GeneratorSpec {
    Greedy1Tight { k: usize, epsilon: Weight },
    Greedy2Tight { k: usize, epsilon: Weight },
    Fig1,
    Cycle { n: usize },
    Ladder { n: usize },
    Random(RandomSpec),
}

impl GeneratorSpec {
    pub fn generate(&self) -> Result<Graph, GenError> {
        match self {
            GeneratorSpec::Greedy1Tight { k, epsilon } => gen_greedy1_tight(*k, *epsilon),
            GeneratorSpec::Greedy2Tight { k, epsilon } => gen_greedy2_tight(*k, *epsilon),
            GeneratorSpec::Fig1 => Ok(gen_fig1().graph),
            GeneratorSpec::Cycle { n } => gen_cycle(*n),
            GeneratorSpec::Ladder { n } => gen_ladder(*n),
            GeneratorSpec::Random(spec) => gen_random(spec),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{connected_components, is_c_edge_connected};
    use crate::io::{parse_graph, write_graph};

    #[test]
    fn greedy1_tight_shape() {
        let g = gen_greedy1_tight(5, DEFAULT_EPSILON).unwrap();
        assert_eq!(g.vertex_count(), 10);
        assert_eq!(g.edge_count(), 7 + 12);
        let heavy: Weight = "1.01".parse().unwrap();
        assert!(g.edges()[..7]
            .iter()
            .all(|e| e.weight == heavy && (e.u, e.v) == (0, 1)));
        assert!(g.edges()[7..].iter().all(|e| e.weight == Weight::ONE));
        for k in 4..=9 {
            assert_eq!(
                gen_greedy1_tight(k, DEFAULT_EPSILON).unwrap().edge_count(),
                (k + 2) + (3 * k - 3)
            );
        }
        assert!(gen_greedy1_tight(3, DEFAULT_EPSILON).is_err());
        assert!(gen_greedy1_tight(5, Weight::ZERO).is_err());
    }

    #[test]
    fn greedy2_tight_shape() {
        let g = gen_greedy2_tight(8, DEFAULT_EPSILON).unwrap();
        let heavy: Weight = "1.51".parse().unwrap();
        assert_eq!(g.edges().iter().filter(|e| e.weight == heavy).count(), 10);
        assert_eq!(g.vertex_count(), 2 + 14);
        assert_eq!(g.edge_count(), 10 + 21);
    }

    #[test]
    fn prism_is_three_edge_connected() {
        for n in [6, 8, 10, 14] {
            let g = gen_ladder(n).unwrap();
            assert!(is_c_edge_connected(&g, 3));
            assert!((0..n).all(|v| g.degree(v) == 3));
        }
        assert!(gen_ladder(7).is_err());
        assert!(gen_ladder(4).is_err());
    }

    #[test]
    fn random_is_seed_deterministic() {
        let mut spec = RandomSpec::new(8, 12, 42);
        spec.max_weight = 5;
        assert_eq!(gen_random(&spec).unwrap(), gen_random(&spec).unwrap());
        spec.seed = 43;
        let other = gen_random(&spec).unwrap();
        assert_eq!(other.edge_count(), 12);
        assert_eq!(
            gen_random(&RandomSpec::new(1, 0, 0)).unwrap().edge_count(),
            0
        );
    }

    #[test]
    fn random_respects_min_degree_and_simplicity() {
        for seed in 0..30 {
            let mut spec = RandomSpec::new(9, 6, seed);
            spec.min_degree = 3;
            spec.simple = seed % 2 == 0;
            let g = gen_random(&spec).unwrap();
            assert!((0..9).all(|v| g.degree(v) >= 3), "seed {seed}");
            if spec.simple {
                assert!(crate::hardness::is_simple(&g));
            }
        }
    }

    #[test]
    fn random_rejects_infeasible() {
        let mut spec = RandomSpec::new(4, 7, 0);
        spec.simple = true;
        assert!(matches!(gen_random(&spec), Err(GenError::Infeasible(_))));
        let mut spec = RandomSpec::new(4, 2, 0);
        spec.simple = true;
        spec.min_degree = 4;
        assert!(gen_random(&spec).is_err());
        assert!(gen_random(&RandomSpec::new(0, 1, 0)).is_err());
    }

    #[test]
    fn generators_round_trip_through_text() {
        let specs = [
            GeneratorSpec::Greedy1Tight {
                k: 5,
                epsilon: DEFAULT_EPSILON,
            },
            GeneratorSpec::Greedy2Tight {
                k: 6,
                epsilon: "0.123456".parse().unwrap(),
            },
            GeneratorSpec::Fig1,
            GeneratorSpec::Cycle { n: 5 },
            GeneratorSpec::Ladder { n: 8 },
            GeneratorSpec::Random(RandomSpec {
                max_weight: 5,
                ..RandomSpec::new(7, 11, 9)
            }),
        ];
        for spec in specs {
            let g = spec.generate().unwrap();
            let text = write_graph(&g);
            let back = parse_graph(&text).unwrap();
            assert_eq!(back, g);
            assert_eq!(write_graph(&back), text);
        }
    }

    #[test]
    fn fig1_is_connected() {
        let f = gen_fig1();
        assert_eq!(f.graph.vertex_count(), 8);
        assert_eq!(f.graph.edge_count(), 12);
        assert_eq!(connected_components(&f.graph).count, 1);
        assert_eq!(f.readings.readings.len(), 4);
    }
}
