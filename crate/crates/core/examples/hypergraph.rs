// SPDX-License-Identifier: Apache-2.0

//! Build a small weighted hypergraph, inspect it, project it and round-trip
//! it through JSON.

use hypercen::{io, Hypergraph, Network};

fn main() -> hypercen::Result<()> {
    // Rows are nodes, columns are hyperedges.
    let h = Hypergraph::from_rows(&[&[1.0, 0.5, 0.0], &[1.0, 0.0, 0.2], &[0.0, 0.5, 0.2], &[0.0, 0.5, 0.0]])?;
    println!("{} nodes, {} hyperedges", h.node_count(), h.edge_count());
    for j in 0..h.edge_count() {
        println!("edge {j}: members {:?}", h.members(j));
    }
    println!("weighted node degrees: {:?}", h.node_degrees(true).as_slice());
    println!("edge sizes: {:?}", h.edge_degrees(false).as_slice());

    // The projection keeps its diagonal: A_ii is the squared weight mass of node i.
    let a = h.project().adjacency;
    println!("projection WWᵀ:{a:.3}");

    let text = io::to_json_string(&Network::Hyper(h.clone()));
    let back = io::from_json_str(&text)?;
    assert_eq!(back, Network::Hyper(h));
    println!("JSON round trip ok ({} bytes)", text.len());
    Ok(())
}
