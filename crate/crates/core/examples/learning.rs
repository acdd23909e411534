// SPDX-License-Identifier: Apache-2.0

//! Reward and punish memberships, score edge fitness and propose a new
//! hyperedge from communication scores.

use hypercen::adapt::{
    delta_update_in_place, fitness_report, propose_hyperedge, punish_in_place, Challenge, LearningConfig,
    LinearContraction, MutationModel, ProcessingFunction, ScoreOptions,
};
use hypercen::centrality::HyperCentralityParams;
use hypercen::Hypergraph;

fn main() -> hypercen::Result<()> {
    let mut h = Hypergraph::from_rows(&[
        &[0.5, 0.0, 0.0],
        &[0.5, 0.5, 0.0],
        &[0.0, 0.5, 0.5],
        &[0.0, 0.0, 0.5],
        &[0.0, 0.0, 0.5],
    ])?;
    let config = LearningConfig::default();
    let f = LinearContraction::default();
    let c = Challenge::new(vec![1.0, 2.0, 2.0]);

    let up = delta_update_in_place(&mut h, 1, 1, &c, &f, &config)?;
    println!("reward  node 1 in edge 1: {:.3} -> {:.3}", up.old, up.new);
    let down = punish_in_place(&mut h, 2, 1, &config)?;
    println!("punish  node 2 in edge 1: {:.3} -> {:.3}", down.old, down.new);

    // Edge 0 relaxes challenges well, edge 2 barely at all.
    let weak = |x: &Challenge| Challenge(&x.0 * 0.95);
    let processed = vec![
        vec![(c.clone(), f.process(&c)); 3],
        vec![(c.clone(), f.process(&c))],
        vec![(c.clone(), weak(&c)); 2],
    ];
    for e in fitness_report(&h, &processed, &MutationModel::default())? {
        println!(
            "edge {}: fitness {:.4}, mutation rate {:.3} from {} samples",
            e.edge, e.fitness, e.mutation_rate, e.samples
        );
    }

    let options = ScoreOptions {
        exclude_existing: true,
        ..Default::default()
    };
    let p = propose_hyperedge(&h, 0, HyperCentralityParams::default(), 2, options)?;
    println!(
        "new hyperedge around node {}: {:?} (short list: {})",
        p.seed, p.members, p.short_list
    );
    Ok(())
}
