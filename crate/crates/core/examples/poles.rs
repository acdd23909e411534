// SPDX-License-Identifier: Apache-2.0

//! Spectrum of a projection and the pole guard: β = 1/λ is refused.

use hypercen::centrality::{general_centrality_graph, GraphCentralityParams, Method};
use hypercen::spectral::{pole_check, spectral_info};
use hypercen::Graph;

fn main() -> hypercen::Result<()> {
    let a = Graph::triangle(1.0).adjacency();
    let info = spectral_info(&a, true)?;
    println!(
        "triangle: lambda_max {:.4}, spectrum {:.4?}",
        info.lambda_max,
        info.spectrum.unwrap_or_default()
    );

    for beta in [0.25, 0.5, -1.0, 0.6] {
        let check = pole_check(beta, &a)?;
        let outcome = general_centrality_graph(&a, GraphCentralityParams { alpha: 1.0, beta }, Method::Solve);
        match outcome {
            Ok(r) => println!(
                "beta {beta:>5}: distance to pole {:.3}, scores {:.4?}",
                check.nearest_pole_distance,
                r.node_scores.as_slice()
            ),
            Err(e) => println!("beta {beta:>5}: refused ({e})"),
        }
    }
    Ok(())
}
