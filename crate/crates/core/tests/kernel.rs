mod common;

use common::*;
use flowmon::generators::{gen_fig1, gen_ladder};
use flowmon::graph::{gain, is_c_edge_connected};
use flowmon::kernel::{check_kernel_bound, kernel_graph};
use flowmon::{EdgeId, EdgeSet};

#[test]
fn fig1_kernel() {
    let f = gen_fig1();
    let kg = kernel_graph(&f.graph, &f.monitors).unwrap();
    assert_eq!(kg.graph.vertex_count(), 5);
    assert_eq!(kg.graph.edge_count(), 8);
    // Component of vertices 1,2,4,7 (stored 0,1,3,6) is kernel vertex 0.
    for v in [0, 1, 3, 6] {
        assert_eq!(kg.component_of[v], 0);
    }
    let loops: Vec<EdgeId> = kg
        .graph
        .edges()
        .iter()
        .filter(|e| e.is_loop())
        .map(|e| kg.represents[e.id.0])
        .collect();
    assert_eq!(loops, vec![EdgeId(0)], "the loop represents edge {{1,2}}");
    assert!(check_kernel_bound(&kg, 4));
    assert_eq!(
        kg.graph.edge_count(),
        4 + kg.graph.vertex_count() - 1,
        "bound is tight"
    );
    assert!(kg.extras_form_forest());
}

#[test]
fn kernel_invariants_on_corpus() {
    for g in small_corpus(300, 31) {
        let m = g.edge_count();
        for bits in [0u32, 1, 5, 0b1011, 0b110001, 0xfff] {
            let set: EdgeSet = (0..m).filter(|i| bits >> i & 1 == 1).map(EdgeId).collect();
            let kg = kernel_graph(&g, &set).unwrap();
            assert!(check_kernel_bound(&kg, set.len()));
            assert!(kg.satisfies_bound(set.len()));
            assert!(kg.extras_form_forest());
            assert_eq!(kg.graph.total_weight(), gain(&g, &set));
            assert_eq!(kg.graph.edge_count(), set.len() + kg.extra_edges.len());
            for (ke, &orig) in kg.represents.iter().enumerate() {
                assert_eq!(kg.graph.edges()[ke].weight, g.edge(orig).weight);
            }
            if kg.graph.edge_count() <= 12 && g.edge_count() > 0 && is_c_edge_connected(&g, 3) {
                assert!(is_c_edge_connected(&kg.graph, 3));
            }
        }
    }
}

#[test]
fn kernel_of_three_edge_connected_ladder() {
    let g = gen_ladder(10).unwrap();
    for start in 0..10 {
        let set: EdgeSet = (start..start + 4)
            .map(|i| EdgeId(i % g.edge_count()))
            .collect();
        let kg = kernel_graph(&g, &set).unwrap();
        assert!(is_c_edge_connected(&kg.graph, 3));
        assert!(check_kernel_bound(&kg, 4));
    }
}
