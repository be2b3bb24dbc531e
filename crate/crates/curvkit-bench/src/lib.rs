//! Shared fixtures for the criterion benchmarks.

use curvkit_core::generators::{generate_connected, GenSpec, Model};
use curvkit_core::Graph;

/// Connected Newman-Watts benchmark graph.
pub fn nw_graph(n: usize, degree: usize, seed: u64) -> Graph {
    generate_connected(&GenSpec::new(Model::Nw { n, k: degree, p: 0.1 }, seed), 20)
        .expect("Newman-Watts graphs are connected")
}

/// Complete graph fixture for transport-heavy benchmarks.
pub fn complete_graph(n: usize) -> Graph {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            edges.push((i, j, 1.0));
        }
    }
    Graph::new(n, edges).expect("complete graph is valid")
}
