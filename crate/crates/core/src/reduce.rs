//! Preprocessing that turns an arbitrary instance into a 3-edge-connected one.
//!
//! Bridges always carry zero flow and are stripped. Components are then glued
//! at a single vertex, and every edge group (a maximal set of edges any two of
//! which form a 2-cut) is contracted onto one deputy edge carrying the
//! group's total weight. A [`ReductionMap`] lifts monitor sets back.

use std::fmt::Write as _;

use rayon::prelude::*;
use thiserror::Error;

use crate::graph::{
    bridges, connected_components, is_c_edge_connected, BridgeFinder, DisjointSets, EdgeId,
    EdgeMask, EdgeSet, Graph,
};
use crate::weight::Weight;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReduceError {
    #[error("graph is not 2-edge-connected")]
    NotTwoEdgeConnected,
    #[error("edge {0} is not a deputy edge of the reduced graph")]
    NotADeputy(EdgeId),
}

/// `g` without its bridges.
#[derive(Debug, Clone)]
pub struct Stripped {
    pub graph: Graph,
    pub bridges: EdgeSet,
    /// Original id of each edge of `graph`.
    pub original_ids: Vec<EdgeId>,
}

pub fn strip_bridges(g: &Graph) -> Stripped {
    let found = bridges(g);
    let (graph, original_ids) = g.without_edges(&EdgeMask::from_set(g.edge_count(), &found));
    debug_assert!(bridges(&graph).is_empty());
    Stripped {
        graph,
        bridges: found,
        original_ids,
    }
}

#[derive(Debug, Clone)]
pub struct Merged {
    pub graph: Graph,
    pub vertex_map: Vec<usize>,
}

/// Identifies the lowest vertex of every component with vertex 0, then
/// renumbers the surviving vertices in increasing order. Edge ids and
/// weights are unchanged.
pub fn merge_components(g: &Graph) -> Merged {
    let comps = connected_components(g);
    let mut first_of = vec![usize::MAX; comps.count];
    for (v, &c) in comps.labels.iter().enumerate() {
        if first_of[c] == usize::MAX {
            first_of[c] = v;
        }
    }
    let mut vertex_map = vec![0; g.vertex_count()];
    let mut next = 0;
    for (v, slot) in vertex_map.iter_mut().enumerate() {
        let c = comps.labels[v];
        if c != 0 && first_of[c] == v {
            continue;
        }
        *slot = next;
        next += 1;
    }
    for (c, &rep) in first_of.iter().enumerate().skip(1) {
        vertex_map[rep] = vertex_map[first_of[0]];
        debug_assert_eq!(comps.labels[rep], c);
    }
    let graph = Graph::new(
        next,
        g.edges()
            .iter()
            .map(|e| (vertex_map[e.u], vertex_map[e.v], e.weight)),
    )
    .expect("relabeled endpoints stay in range");
    Merged { graph, vertex_map }
}

/// Equivalence classes of "forms a 2-cut together", ordered by smallest
/// member, each sorted ascending.
///
/// Relies on `g` being bridgeless: the class of `e` is then exactly
/// `{e} ∪ bridges(g - e)`.
pub fn edge_groups(g: &Graph) -> Result<Vec<Vec<EdgeId>>, ReduceError> {
    if !is_c_edge_connected(g, 2) {
        return Err(ReduceError::NotTwoEdgeConnected);
    }
    let m = g.edge_count();
    let probes: Vec<Vec<EdgeId>> = (0..m)
        .into_par_iter()
        .map_init(
            || (BridgeFinder::new(g), EdgeMask::none(m)),
            |(finder, mask), i| {
                let e = EdgeId(i);
                mask.remove(e);
                let mut out = Vec::new();
                finder.find_into(g, mask, &mut out);
                mask.restore(e);
                out
            },
        )
        .collect();

    let mut classified = vec![false; m];
    let mut groups = Vec::new();
    for i in 0..m {
        if classified[i] {
            continue;
        }
        let mut class = vec![EdgeId(i)];
        class.extend(probes[i].iter().copied());
        class.sort_unstable();
        for e in &class {
            debug_assert!(!classified[e.0], "edge groups must partition the edges");
            classified[e.0] = true;
        }
        groups.push(class);
    }
    Ok(groups)
}

/// How a reduced instance relates to the graph it came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionMap {
    /// Original vertex to reduced vertex.
    pub vertex_map: Vec<usize>,
    /// Original edge to its group, `None` for stripped bridges.
    pub group_of: Vec<Option<usize>>,
    /// Members of each group as original edge ids, ascending.
    pub groups: Vec<Vec<EdgeId>>,
    /// Reduced edge id of each group's deputy.
    pub deputy_of_group: Vec<EdgeId>,
    /// Original id of each reduced edge (the group's highest-id member).
    pub reduced_to_original: Vec<EdgeId>,
    /// Bridges of the original graph; their flow is always zero.
    pub stripped_bridges: EdgeSet,
}

impl ReductionMap {
    pub fn identity(g: &Graph) -> Self {
        let m = g.edge_count();
        ReductionMap {
            vertex_map: (0..g.vertex_count()).collect(),
            group_of: (0..m).map(Some).collect(),
            groups: (0..m).map(|i| vec![EdgeId(i)]).collect(),
            deputy_of_group: (0..m).map(EdgeId).collect(),
            reduced_to_original: (0..m).map(EdgeId).collect(),
            stripped_bridges: EdgeSet::new(),
        }
    }

    pub fn group_of_reduced(&self, e: EdgeId) -> Option<usize> {
        let orig = *self.reduced_to_original.get(e.0)?;
        self.group_of[orig.0]
    }

    /// Maps reduced monitor edges to their original deputies.
    pub fn lift_monitors(&self, reduced: &EdgeSet) -> Result<EdgeSet, ReduceError> {
        reduced
            .iter()
            .map(|e| {
                self.reduced_to_original
                    .get(e.0)
                    .copied()
                    .ok_or(ReduceError::NotADeputy(e))
            })
            .collect()
    }

    /// Expands reduced edges into every original member of their groups.
    pub fn lift_groups(&self, reduced: &EdgeSet) -> Result<EdgeSet, ReduceError> {
        let mut out = EdgeSet::new();
        for e in reduced {
            let g = self.group_of_reduced(e).ok_or(ReduceError::NotADeputy(e))?;
            out.extend(self.groups[g].iter().copied());
        }
        Ok(out)
    }

    /// Sidecar text: `v <orig> <reduced>`, `g <orig_edge> <group> <deputy>`,
    /// `zb <orig_edge>`.
    pub fn to_sidecar(&self) -> String {
        let mut out = String::new();
        for (v, r) in self.vertex_map.iter().enumerate() {
            writeln!(out, "v {v} {r}").unwrap();
        }
        for (e, group) in self.group_of.iter().enumerate() {
            if let Some(g) = group {
                let deputy = self.reduced_to_original[self.deputy_of_group[*g].0];
                writeln!(out, "g {e} {g} {deputy}").unwrap();
            }
        }
        for e in &self.stripped_bridges {
            writeln!(out, "zb {e}").unwrap();
        }
        out
    }
}

/// Contracts every edge group onto its highest-id member, which keeps the
/// group's total weight.
pub fn contract_groups(g: &Graph) -> Result<(Graph, ReductionMap), ReduceError> {
    let groups = edge_groups(g)?;
    let mut sets = DisjointSets::new(g.vertex_count());
    let mut group_of = vec![None; g.edge_count()];
    let mut deputies: Vec<(EdgeId, usize)> = Vec::with_capacity(groups.len());
    for (gi, members) in groups.iter().enumerate() {
        let deputy = *members.last().expect("groups are non-empty");
        for &e in members {
            group_of[e.0] = Some(gi);
            if e != deputy {
                let r = g.edge(e);
                sets.union(r.u, r.v);
            }
        }
        deputies.push((deputy, gi));
    }
    deputies.sort_unstable();

    let mut vertex_map = vec![usize::MAX; g.vertex_count()];
    let mut next = 0;
    for (v, slot) in vertex_map.iter_mut().enumerate() {
        if sets.find(v) == v {
            *slot = next;
            next += 1;
        }
    }
    let vertex_map: Vec<usize> = (0..g.vertex_count())
        .map(|v| vertex_map[sets.find(v)])
        .collect();

    let mut deputy_of_group = vec![EdgeId(0); groups.len()];
    let mut reduced_to_original = Vec::with_capacity(deputies.len());
    let mut reduced_edges = Vec::with_capacity(deputies.len());
    for (ri, &(deputy, gi)) in deputies.iter().enumerate() {
        let r = g.edge(deputy);
        let weight: Weight = groups[gi].iter().map(|&e| g.edge(e).weight).sum();
        reduced_edges.push((vertex_map[r.u], vertex_map[r.v], weight));
        deputy_of_group[gi] = EdgeId(ri);
        reduced_to_original.push(deputy);
    }
    let reduced = Graph::new(next, reduced_edges).expect("contracted graph is valid");
    Ok((
        reduced,
        ReductionMap {
            vertex_map,
            group_of,
            groups,
            deputy_of_group,
            reduced_to_original,
            stripped_bridges: EdgeSet::new(),
        },
    ))
}

/// Strips bridges, merges components and contracts edge groups. The result
/// is 3-edge-connected (possibly a single vertex carrying loops) and the map
/// is expressed in the coordinates of `g`.
pub fn preprocess(g: &Graph) -> Result<(Graph, ReductionMap), ReduceError> {
    let stripped = strip_bridges(g);
    let merged = merge_components(&stripped.graph);
    let (reduced, inner) = contract_groups(&merged.graph)?;

    let vertex_map = merged
        .vertex_map
        .iter()
        .map(|&v| inner.vertex_map[v])
        .collect();
    let mut group_of = vec![None; g.edge_count()];
    for (si, &orig) in stripped.original_ids.iter().enumerate() {
        group_of[orig.0] = inner.group_of[si];
    }
    let to_orig = |e: &EdgeId| stripped.original_ids[e.0];
    let groups = inner
        .groups
        .iter()
        .map(|members| members.iter().map(to_orig).collect())
        .collect();
    let reduced_to_original = inner.reduced_to_original.iter().map(to_orig).collect();

    Ok((
        reduced,
        ReductionMap {
            vertex_map,
            group_of,
            groups,
            deputy_of_group: inner.deputy_of_group,
            reduced_to_original,
            stripped_bridges: stripped.bridges,
        },
    ))
}
