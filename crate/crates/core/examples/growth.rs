// SPDX-License-Identifier: Apache-2.0

//! Grow a network by preferential attachment and report its topology.

use hypercen::netgen::{analyze, grow, GenConfig, GrowthEvent, Preference};

fn main() -> hypercen::Result<()> {
    for preference in [
        Preference::Degree,
        Preference::Centrality,
        Preference::ClusterCoefficient,
    ] {
        let config = GenConfig {
            preference,
            iterations: 1000,
            seed: 42,
            ..Default::default()
        };
        let growth = grow(&config)?;
        let report = analyze(&growth.network, config.beta)?;
        let zero = growth
            .events
            .iter()
            .filter(|e| {
                matches!(
                    e,
                    GrowthEvent::ZeroPreference { .. } | GrowthEvent::UniformFallback { .. }
                )
            })
            .count();
        println!(
            "{preference:?}: {} nodes, lambda_max {:.3}",
            report.degrees.len(),
            report.lambda_max
        );
        println!(
            "  max degree {}, median {}, zero-score draws {zero}",
            report.max_degree(),
            report.median_degree()
        );
        match &report.fit {
            Some(fit) => println!("  power-law slope {:.3}, R² {:.3}", fit.slope, fit.r_squared),
            None => println!("  too few degrees to fit"),
        }
    }
    Ok(())
}
