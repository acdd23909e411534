// SPDX-License-Identifier: Apache-2.0

//! Monte-Carlo communication counts.
//!
//! A walk starting at node `i` stands for one message chain. Each node it
//! reaches contributes its weighted degree (the communications of the next
//! length), and the chain is relayed onwards with the pass probability. Link
//! weights enter multiplicatively through an importance weight, so the mean
//! over walks is an unbiased estimate of
//!
//! ```text
//! Σ_{k < max_hops} βᵏ (Aᵏ⁺¹ 1)ᵢ
//! ```
//!
//! which is the generalized centrality `c(1, β)` truncated at `max_hops`.
//! When `β d > 1` the relay step is forced and the excess goes into the
//! weight instead.
//!
//! Every start node draws from its own ChaCha8 stream: the generator is seeded
//! with `rng_seed` and the stream number is the node index. Results therefore
//! do not depend on thread count or scheduling.

use nalgebra::{DMatrix, DVector};
use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hypercore::Hypergraph;
use crate::spectral;

pub const ENUMERATION_MAX_NODES: usize = 6;
pub const ENUMERATION_MAX_HOPS: usize = 8;

#[derive(Debug, Clone, PartialEq)]
pub struct PropagationConfig {
    /// β₂: chance a node passes a message on. The only pass chance on graphs.
    pub pass_probability_node: f64,
    /// β₁: chance an edge passes a message on to its members.
    pub pass_probability_edge: f64,
    pub walks_per_node: usize,
    pub rng_seed: u64,
    pub max_hops: usize,
    /// Worker threads; `None` uses the global pool.
    pub threads: Option<usize>,
}

impl Default for PropagationConfig {
    fn default() -> Self {
        Self {
            pass_probability_node: 0.5,
            pass_probability_edge: 1.0,
            walks_per_node: 10_000,
            rng_seed: 0,
            max_hops: 64,
            threads: None,
        }
    }
}

impl PropagationConfig {
    fn validate(&self) -> Result<()> {
        for (name, p) in [
            ("pass_probability_node", self.pass_probability_node),
            ("pass_probability_edge", self.pass_probability_edge),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidParameter(format!("{name} = {p} is not in [0, 1]")));
            }
        }
        if self.walks_per_node == 0 || self.max_hops == 0 {
            return Err(Error::InvalidParameter(
                "walks_per_node and max_hops must be positive".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Estimate {
    pub mean: f64,
    pub stderr: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NodeStats {
    /// Total communications started by the node.
    pub estimate: Estimate,
    /// Mean number of hops per chain.
    pub mean_chain_length: f64,
    /// Hypergraph mode: communications ending at hyperedges.
    pub to_edges: Option<Estimate>,
    /// Hypergraph mode: communications ending at nodes.
    pub to_nodes: Option<Estimate>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PropagationStats {
    pub nodes: Vec<NodeStats>,
    /// `ρ^(max_hops+1) / (1 − ρ)` with `ρ = β λmax`, when `ρ < 1`.
    pub truncation_bound: Option<f64>,
}

impl PropagationStats {
    pub fn means(&self) -> DVector<f64> {
        DVector::from_iterator(self.nodes.len(), self.nodes.iter().map(|s| s.estimate.mean))
    }
}

/// Welford accumulator.
#[derive(Default, Clone, Copy)]
struct Running {
    count: f64,
    mean: f64,
    m2: f64,
}

impl Running {
    fn push(&mut self, x: f64) {
        self.count += 1.0;
        let delta = x - self.mean;
        self.mean += delta / self.count;
        self.m2 += delta * (x - self.mean);
    }

    fn estimate(&self) -> Estimate {
        let var = if self.count > 1.0 {
            self.m2 / (self.count - 1.0)
        } else {
            0.0
        };
        Estimate {
            mean: self.mean,
            stderr: (var / self.count).sqrt(),
        }
    }
}

/// The RNG used for walks starting at `node`.
pub fn node_rng(seed: u64, node: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(node as u64);
    rng
}

fn run_parallel<T: Send>(threads: Option<usize>, n: usize, f: impl Fn(usize) -> T + Sync + Send) -> Result<Vec<T>> {
    let work = || (0..n).into_par_iter().map(&f).collect::<Vec<T>>();
    match threads {
        Some(t) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build()
                .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
            Ok(pool.install(work))
        }
        None => Ok(work()),
    }
}

/// Continue with probability `min(1, factor)`; returns the weight multiplier.
fn relay(rng: &mut ChaCha8Rng, factor: f64) -> Option<f64> {
    let rho = factor.min(1.0);
    if rho > 0.0 && rng.gen::<f64>() < rho {
        Some(factor / rho)
    } else {
        None
    }
}

fn samplers(rows: impl Iterator<Item = Vec<f64>>) -> Vec<Option<WeightedIndex<f64>>> {
    rows.map(|row| WeightedIndex::new(row).ok()).collect()
}

/// Communication counts on a graph with non-negative adjacency `a`, using
/// `pass_probability_node` as the pass chance.
pub fn simulate_graph(a: &DMatrix<f64>, config: &PropagationConfig) -> Result<PropagationStats> {
    config.validate()?;
    if !a.is_square() || a.iter().any(|&x| !x.is_finite() || x < 0.0) {
        return Err(Error::InvalidParameter(
            "adjacency must be square, finite and non-negative".into(),
        ));
    }
    let n = a.nrows();
    let beta = config.pass_probability_node;
    let degree: Vec<f64> = (0..n).map(|i| a.row(i).sum()).collect();
    let next = samplers((0..n).map(|i| a.row(i).iter().copied().collect()));

    let nodes = run_parallel(config.threads, n, |start| {
        let mut rng = node_rng(config.rng_seed, start);
        let mut total = Running::default();
        let mut hops_sum = 0.0;
        for _ in 0..config.walks_per_node {
            let (mut node, mut omega, mut count, mut hops) = (start, 1.0, 0.0, 0usize);
            while degree[node] > 0.0 {
                count += omega * degree[node];
                hops += 1;
                if hops >= config.max_hops {
                    break;
                }
                let Some(gain) = relay(&mut rng, beta * degree[node]) else {
                    break;
                };
                omega *= gain;
                node = next[node].as_ref().expect("positive degree").sample(&mut rng);
            }
            total.push(count);
            hops_sum += hops as f64;
        }
        NodeStats {
            estimate: total.estimate(),
            mean_chain_length: hops_sum / config.walks_per_node as f64,
            to_edges: None,
            to_nodes: None,
        }
    })?;

    let truncation_bound = if spectral::is_symmetric(a) {
        let rho = beta * spectral::lambda_max(a)?;
        (rho < 1.0).then(|| rho.powi(config.max_hops as i32 + 1) / (1.0 - rho))
    } else {
        None
    };
    Ok(PropagationStats {
        nodes,
        truncation_bound,
    })
}

/// Communication counts on a hypergraph. A chain alternates node → edge
/// (every edge of the node is reached) and edge → node (relayed with `β₁`,
/// then selected by the receiving node with `β₂`). Hops are counted per
/// transition, so `max_hops` cuts edge communications at odd hop counts and
/// node communications at even ones.
pub fn simulate_hyper(h: &Hypergraph, config: &PropagationConfig) -> Result<PropagationStats> {
    config.validate()?;
    let w = h.weights();
    let (n, m) = (h.node_count(), h.edge_count());
    let beta1 = config.pass_probability_edge;
    let beta2 = config.pass_probability_node;
    let node_degree: Vec<f64> = (0..n).map(|i| w.row(i).sum()).collect();
    let edge_degree: Vec<f64> = (0..m).map(|j| w.column(j).sum()).collect();
    // Weighted reach of a node's edges: (W Wᵀ 1)ᵢ.
    let reach: Vec<f64> = (0..n)
        .map(|i| (0..m).map(|j| w[(i, j)] * edge_degree[j]).sum())
        .collect();
    let pick_edge = samplers((0..n).map(|i| (0..m).map(|j| w[(i, j)] * edge_degree[j]).collect()));
    let pick_member = samplers((0..m).map(|j| w.column(j).iter().copied().collect()));

    let nodes = run_parallel(config.threads, n, |start| {
        let mut rng = node_rng(config.rng_seed, start);
        let (mut edges_acc, mut nodes_acc, mut total_acc) =
            (Running::default(), Running::default(), Running::default());
        let mut hops_sum = 0.0;
        for _ in 0..config.walks_per_node {
            let (mut node, mut omega, mut hops) = (start, 1.0, 0usize);
            let (mut to_edges, mut to_nodes) = (0.0, 0.0);
            while node_degree[node] > 0.0 {
                to_edges += omega * node_degree[node];
                hops += 1;
                if hops >= config.max_hops {
                    break;
                }
                to_nodes += omega * beta1 * reach[node];
                hops += 1;
                if hops >= config.max_hops || reach[node] == 0.0 {
                    break;
                }
                let Some(gain) = relay(&mut rng, beta1 * beta2 * reach[node]) else {
                    break;
                };
                omega *= gain;
                let edge = pick_edge[node].as_ref().expect("positive reach").sample(&mut rng);
                node = pick_member[edge].as_ref().expect("edge has members").sample(&mut rng);
            }
            edges_acc.push(to_edges);
            nodes_acc.push(to_nodes);
            total_acc.push(to_edges + to_nodes);
            hops_sum += hops as f64;
        }
        NodeStats {
            estimate: total_acc.estimate(),
            mean_chain_length: hops_sum / config.walks_per_node as f64,
            to_edges: Some(edges_acc.estimate()),
            to_nodes: Some(nodes_acc.estimate()),
        }
    })?;

    let rho = beta1 * beta2 * spectral::lambda_max(&h.project().adjacency)?;
    let truncation_bound = (rho < 1.0).then(|| rho.powi(config.max_hops as i32 / 2 + 1) / (1.0 - rho));
    Ok(PropagationStats {
        nodes,
        truncation_bound,
    })
}

/// `Σ_{k < max_hops} βᵏ Aᵏ⁺¹ 1`, the expectation of [`simulate_graph`].
pub fn truncated_series(a: &DMatrix<f64>, beta: f64, max_hops: usize) -> DVector<f64> {
    let n = a.nrows();
    let mut term = a * DVector::from_element(n, 1.0);
    let mut sum = DVector::zeros(n);
    for _ in 0..max_hops {
        sum += &term;
        term = a * &term * beta;
    }
    sum
}

/// Deterministic oracle: sums `β^(h−1) Π A` over every path of `h ≤ max_hops`
/// links from each start node. Limited to small instances.
pub fn exact_path_count(a: &DMatrix<f64>, beta: f64, max_hops: usize) -> Result<DVector<f64>> {
    let n = a.nrows();
    if !a.is_square() || n > ENUMERATION_MAX_NODES || max_hops > ENUMERATION_MAX_HOPS {
        return Err(Error::InvalidParameter(format!(
            "path enumeration is limited to {ENUMERATION_MAX_NODES} nodes and {ENUMERATION_MAX_HOPS} hops"
        )));
    }
    fn extend(a: &DMatrix<f64>, beta: f64, at: usize, hops: usize, weight: f64, max_hops: usize) -> f64 {
        let mut total = 0.0;
        for next in 0..a.ncols() {
            let link = a[(at, next)];
            if link == 0.0 {
                continue;
            }
            let path = weight * link;
            total += path;
            if hops + 1 < max_hops {
                total += extend(a, beta, next, hops + 1, path * beta, max_hops);
            }
        }
        total
    }
    Ok(DVector::from_fn(n, |i, _| {
        if max_hops == 0 {
            0.0
        } else {
            extend(a, beta, i, 0, 1.0, max_hops)
        }
    }))
}
