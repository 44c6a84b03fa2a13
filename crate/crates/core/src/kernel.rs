//! Kernel graph of a monitor set: contract every component of
//! `G - M - bridges(G - M)` and keep one edge per known edge.

use crate::graph::{
    bridges_masked, components_masked, connected_components, EdgeId, EdgeMask, EdgeSet, Graph,
    GraphError,
};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KernelGraph {
    pub graph: Graph,
    /// Original vertex to kernel vertex.
    pub component_of: Vec<usize>,
    /// Kernel edge to the original edge it represents.
    pub represents: Vec<EdgeId>,
    /// Kernel edges representing monitors.
    pub monitor_edges: EdgeSet,
    /// Kernel edges representing extras (bridges of `G - M`).
    pub extra_edges: EdgeSet,
}

/// Builds the kernel graph of `g` and `m`. Kernel vertices are numbered by
/// the lowest original vertex of their component; kernel edges follow the
/// original id order.
pub fn kernel_graph(g: &Graph, m: &EdgeSet) -> Result<KernelGraph, GraphError> {
    g.check_edge_set(m)?;
    let mut mask = EdgeMask::from_set(g.edge_count(), m);
    let extras = bridges_masked(g, &mask);
    for e in &extras {
        mask.remove(e);
    }
    let comps = components_masked(g, &mask);

    let mut represents = Vec::new();
    let mut monitor_edges = EdgeSet::new();
    let mut extra_edges = EdgeSet::new();
    let mut edges = Vec::new();
    for e in g
        .edge_ids()
        .filter(|&e| m.contains(e) || extras.contains(e))
    {
        let r = g.edge(e);
        let kid = EdgeId(represents.len());
        if m.contains(e) {
            monitor_edges.insert(kid);
        } else {
            extra_edges.insert(kid);
        }
        represents.push(e);
        edges.push((comps.labels[r.u], comps.labels[r.v], r.weight));
    }
    let graph = Graph::new(comps.count, edges).expect("component labels are in range");
    Ok(KernelGraph {
        graph,
        component_of: comps.labels,
        represents,
        monitor_edges,
        extra_edges,
    })
}

impl KernelGraph {
    /// `|E_M| <= k + |V_M| - c`, where `c` is the number of kernel components
    /// (1 when `g` is connected).
    pub fn satisfies_bound(&self, k: usize) -> bool {
        let c = connected_components(&self.graph).count as i64;
        let lhs = self.graph.edge_count() as i64;
        lhs <= k as i64 + self.graph.vertex_count() as i64 - c.max(1)
    }

    /// The extra edges are exactly the bridges of the kernel minus its
    /// monitor edges, i.e. they form a forest.
    pub fn extras_form_forest(&self) -> bool {
        let mask = EdgeMask::from_set(self.graph.edge_count(), &self.monitor_edges);
        bridges_masked(&self.graph, &mask) == self.extra_edges
    }
}

/// `|E_M| <= k + |V_M| - 1`.
pub fn check_kernel_bound(kg: &KernelGraph, k: usize) -> bool {
    kg.graph.edge_count() < k + kg.graph.vertex_count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{gain, is_c_edge_connected};

    fn k4() -> Graph {
        Graph::unit(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap()
    }

    #[test]
    fn all_edges_as_monitors() {
        let g = k4();
        let kg = kernel_graph(&g, &g.all_edges()).unwrap();
        assert_eq!(kg.graph.vertex_count(), 4);
        assert_eq!(kg.graph.edge_count(), 6);
        assert!(kg.extra_edges.is_empty());
        assert!(check_kernel_bound(&kg, 6));
    }

    #[test]
    fn no_monitors_on_bridgeless_graph() {
        let kg = kernel_graph(&k4(), &EdgeSet::new()).unwrap();
        assert_eq!(kg.graph.vertex_count(), 1);
        assert_eq!(kg.graph.edge_count(), 0);
        assert!(check_kernel_bound(&kg, 0));
    }

    #[test]
    fn k4_kernel_is_three_edge_connected() {
        let g = k4();
        let m: EdgeSet = [EdgeId(0), EdgeId(1)].into_iter().collect();
        let kg = kernel_graph(&g, &m).unwrap();
        // Vertex 0 keeps one edge, which becomes an extra.
        assert_eq!(kg.extra_edges.len(), 1);
        assert!(kg.extras_form_forest());
        assert!(is_c_edge_connected(&kg.graph, 3));
        assert_eq!(kg.graph.total_weight(), gain(&g, &m));
        assert!(check_kernel_bound(&kg, 2));
    }

    #[test]
    fn rejects_unknown_edges() {
        let m: EdgeSet = [EdgeId(9)].into_iter().collect();
        assert!(kernel_graph(&k4(), &m).is_err());
    }
}
