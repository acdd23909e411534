// SPDX-License-Identifier: Apache-2.0

//! Centrality on weighted graphs and hypergraphs.
//!
//! * [`hypercore`]: hypergraph model, projections, degrees.
//! * [`spectral`]: largest eigenvalue, Perron vector, pole guard.
//! * [`centrality`]: eigenvector and generalized centrality, by direct solve
//!   or Neumann series.
//! * [`propagation`]: Monte-Carlo communication counts and an exact path
//!   enumerator.
//! * [`adapt`]: weight learning, hyperedge fitness, candidate scoring.
//! * [`netgen`]: preferential-attachment growth and topology reports.
//! * [`io`]: JSON network documents and CSV export.

pub mod adapt;
pub mod centrality;
pub mod cli;
pub mod error;
pub mod graph;
pub mod hypercore;
pub mod io;
pub mod netgen;
pub mod propagation;
pub mod spectral;

pub use error::{Error, Result};
pub use graph::Graph;
pub use hypercore::{DirectedHypergraph, Hypergraph};
pub use io::Network;
