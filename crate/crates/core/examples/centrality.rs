// SPDX-License-Identifier: Apache-2.0

//! Graph and hypergraph centrality by direct solve, by series and by the
//! Perron vector.

use hypercen::centrality::{
    eigencentrality_graph, general_centrality_graph, general_centrality_hyper, GraphCentralityParams,
    HyperCentralityParams, Method,
};
use hypercen::{Graph, Hypergraph};

fn main() -> hypercen::Result<()> {
    // A star with four leaves.
    let mut g = Graph::new(5);
    for leaf in 1..5 {
        g.add_link(0, leaf, 1.0);
    }
    let a = g.adjacency();
    let params = GraphCentralityParams { alpha: 1.0, beta: 0.3 };
    let solved = general_centrality_graph(&a, params, Method::Solve)?;
    let series = general_centrality_graph(&a, params, Method::Series)?;
    println!("star, beta = 0.3");
    println!("  solve : {:.6?}", solved.node_scores.as_slice());
    println!(
        "  series: {:.6?} ({:?} terms)",
        series.node_scores.as_slice(),
        series.meta.series_terms
    );
    println!("  lambda_max = {:?}", solved.meta.lambda_max);
    let eig = eigencentrality_graph(&a)?;
    println!("  eigenvector: {:.4?}", eig.node_scores.as_slice());

    let h = Hypergraph::from_rows(&[&[1.0, 0.0], &[1.0, 1.0], &[0.0, 1.0], &[0.0, 1.0]])?;
    let hp = HyperCentralityParams {
        beta2: 0.2,
        ..Default::default()
    };
    let r = general_centrality_hyper(&h, hp, Method::Solve)?;
    println!("hypergraph, beta1 = 1, beta2 = 0.2");
    println!("  nodes: {:.4?}", r.node_scores.as_slice());
    println!("  edges: {:.4?}", r.edge_scores.as_ref().map(|y| y.as_slice().to_vec()));
    if let Some(split) = &r.split {
        println!("  to edges: {:.4?}", split.to_edges.as_slice());
        println!("  to nodes: {:.4?}", split.to_nodes.as_slice());
    }
    Ok(())
}
