// SPDX-License-Identifier: Apache-2.0

//! Monte-Carlo communication counts against the closed form.

use hypercen::centrality::{general_centrality_graph, GraphCentralityParams, Method};
use hypercen::propagation::{exact_path_count, simulate_graph, PropagationConfig};
use hypercen::Graph;

fn main() -> hypercen::Result<()> {
    let mut g = Graph::new(4);
    g.add_link(0, 1, 0.8);
    g.add_link(1, 2, 0.5);
    g.add_link(2, 3, 0.9);
    g.add_link(0, 2, 0.3);
    let a = g.adjacency();
    let beta = 0.4;

    let config = PropagationConfig {
        pass_probability_node: beta,
        walks_per_node: 200_000,
        rng_seed: 11,
        ..Default::default()
    };
    let stats = simulate_graph(&a, &config)?;
    let exact = general_centrality_graph(&a, GraphCentralityParams { alpha: 1.0, beta }, Method::Solve)?;
    let paths = exact_path_count(&a, beta, 8)?;

    println!("node  estimate  stderr    exact     paths(<=8)  mean hops");
    for (i, s) in stats.nodes.iter().enumerate() {
        println!(
            "{i:>4}  {:.5}   {:.5}   {:.5}   {:.5}     {:.3}",
            s.estimate.mean, s.estimate.stderr, exact.node_scores[i], paths[i], s.mean_chain_length
        );
    }
    println!("truncation bound: {:?}", stats.truncation_bound);
    Ok(())
}
