// SPDX-License-Identifier: Apache-2.0

//! Centrality against degree for a grown network across a range of β,
//! written as CSV. Pass an output directory, default `sweep-out`.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use hypercen::io::format_number;
use hypercen::netgen::{beta_sweep, default_sweep_betas, degrees, grow, network_lambda_max, GenConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "sweep-out".into()));
    fs::create_dir_all(&dir)?;
    let config = GenConfig {
        iterations: 300,
        seed: 7,
        ..Default::default()
    };
    let net = grow(&config)?.network;
    let lmax = network_lambda_max(&net)?;
    let deg = degrees(&net);

    // Past the first pole the scores stop counting communications; keep one
    // such run to show it.
    let mut betas = default_sweep_betas();
    betas.push(8.5433);
    let rows = beta_sweep(&net, &betas)?;

    let path = dir.join("sweep.csv");
    let mut out = BufWriter::new(File::create(&path)?);
    writeln!(out, "node,degree,beta,centrality")?;
    for row in &rows {
        match &row.centrality {
            Some(c) => {
                for (i, x) in c.iter().enumerate() {
                    writeln!(out, "{i},{},{},{}", deg[i], row.beta, format_number(*x))?;
                }
            }
            None => println!("beta {}: {}", row.beta, row.note.as_deref().unwrap_or("no scores")),
        }
    }
    out.flush()?;
    println!("lambda_max {lmax:.4}, 1/lambda_max {:.4}", 1.0 / lmax);
    println!("wrote {} betas to {}", rows.len(), path.display());
    Ok(())
}
