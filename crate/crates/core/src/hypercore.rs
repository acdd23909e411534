// SPDX-License-Identifier: Apache-2.0

//! Weighted hypergraphs.
//!
//! A hypergraph on `n` nodes and `m` hyperedges is stored as a dense `n × m`
//! weight matrix `W`, where `W[(i, j)] ∈ [0, 1]` is the weight of node `i` in
//! edge `j`. The incidence pattern is the support of `W`. A directed hypergraph
//! adds a second `n × m` matrix `Z` holding edge-to-node weights.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// A single finding of [`validate_weights`].
#[derive(Debug, Clone, PartialEq)]
pub enum Issue {
    NonFinite { node: usize, edge: usize },
    WeightOutOfRange { node: usize, edge: usize, value: f64 },
    EmptyEdge { edge: usize },
    IsolatedNode { node: usize },
}

impl Issue {
    /// Empty edges and isolated nodes are legal, everything else is not.
    pub fn is_error(&self) -> bool {
        matches!(self, Issue::NonFinite { .. } | Issue::WeightOutOfRange { .. })
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub issues: Vec<Issue>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        !self.issues.iter().any(Issue::is_error)
    }

    pub fn errors(&self) -> impl Iterator<Item = &Issue> {
        self.issues.iter().filter(|i| i.is_error())
    }

    pub fn warnings(&self) -> impl Iterator<Item = &Issue> {
        self.issues.iter().filter(|i| !i.is_error())
    }
}

/// Checks a raw weight matrix without building a [`Hypergraph`].
pub fn validate_weights(weights: &DMatrix<f64>) -> ValidationReport {
    let mut issues = Vec::new();
    for j in 0..weights.ncols() {
        for i in 0..weights.nrows() {
            let w = weights[(i, j)];
            if !w.is_finite() {
                issues.push(Issue::NonFinite { node: i, edge: j });
            } else if !(0.0..=1.0).contains(&w) {
                issues.push(Issue::WeightOutOfRange {
                    node: i,
                    edge: j,
                    value: w,
                });
            }
        }
    }
    for j in 0..weights.ncols() {
        if weights.column(j).iter().all(|&w| w == 0.0) {
            issues.push(Issue::EmptyEdge { edge: j });
        }
    }
    for i in 0..weights.nrows() {
        if weights.row(i).iter().all(|&w| w == 0.0) {
            issues.push(Issue::IsolatedNode { node: i });
        }
    }
    ValidationReport { issues }
}

fn first_error(weights: &DMatrix<f64>) -> Result<()> {
    match validate_weights(weights).errors().next() {
        None => Ok(()),
        Some(&Issue::WeightOutOfRange { node, edge, value }) => Err(Error::WeightOutOfRange { node, edge, value }),
        Some(&Issue::NonFinite { node, edge }) => Err(Error::WeightOutOfRange {
            node,
            edge,
            value: weights[(node, edge)],
        }),
        Some(_) => unreachable!("only range issues are errors"),
    }
}

pub(crate) fn default_labels(prefix: &str, count: usize) -> Vec<String> {
    (0..count).map(|i| format!("{prefix}{i}")).collect()
}

/// An undirected weighted hypergraph. Immutable once built, except through
/// the crate's single-writer learning routines.
#[derive(Debug, Clone, PartialEq)]
pub struct Hypergraph {
    weights: DMatrix<f64>,
    node_labels: Vec<String>,
    edge_labels: Vec<String>,
}

impl Hypergraph {
    /// Builds a hypergraph from its `|V| × |E|` weight matrix, with labels
    /// `n0, n1, ...` and `e0, e1, ...`.
    pub fn new(weights: DMatrix<f64>) -> Result<Self> {
        let node_labels = default_labels("n", weights.nrows());
        let edge_labels = default_labels("e", weights.ncols());
        Self::with_labels(weights, node_labels, edge_labels)
    }

    pub fn with_labels(weights: DMatrix<f64>, node_labels: Vec<String>, edge_labels: Vec<String>) -> Result<Self> {
        if weights.nrows() == 0 {
            return Err(Error::NoNodes);
        }
        if node_labels.len() != weights.nrows() || edge_labels.len() != weights.ncols() {
            return Err(Error::DimensionMismatch {
                expected: format!("{} node and {} edge labels", weights.nrows(), weights.ncols()),
                found: format!("{} and {}", node_labels.len(), edge_labels.len()),
            });
        }
        first_error(&weights)?;
        Ok(Self {
            weights,
            node_labels,
            edge_labels,
        })
    }

    /// Row-major convenience constructor, mostly for tests and examples.
    pub fn from_rows(rows: &[&[f64]]) -> Result<Self> {
        let n = rows.len();
        let m = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != m) {
            return Err(Error::DimensionMismatch {
                expected: format!("{m} columns in every row"),
                found: "ragged rows".into(),
            });
        }
        Self::new(DMatrix::from_fn(n, m, |i, j| rows[i][j]))
    }

    pub fn node_count(&self) -> usize {
        self.weights.nrows()
    }

    pub fn edge_count(&self) -> usize {
        self.weights.ncols()
    }

    pub fn weights(&self) -> &DMatrix<f64> {
        &self.weights
    }

    pub fn weight(&self, node: usize, edge: usize) -> f64 {
        self.weights[(node, edge)]
    }

    pub(crate) fn set_weight(&mut self, node: usize, edge: usize, value: f64) {
        debug_assert!((0.0..=1.0).contains(&value));
        self.weights[(node, edge)] = value;
    }

    pub fn node_labels(&self) -> &[String] {
        &self.node_labels
    }

    pub fn edge_labels(&self) -> &[String] {
        &self.edge_labels
    }

    pub fn contains(&self, node: usize, edge: usize) -> bool {
        self.weights[(node, edge)] > 0.0
    }

    /// Members of `edge` in index order.
    pub fn members(&self, edge: usize) -> Vec<usize> {
        (0..self.node_count()).filter(|&i| self.contains(i, edge)).collect()
    }

    /// The 0/1 incidence pattern `R`.
    pub fn incidence(&self) -> DMatrix<f64> {
        self.weights.map(|w| if w > 0.0 { 1.0 } else { 0.0 })
    }

    pub fn validate(&self) -> ValidationReport {
        validate_weights(&self.weights)
    }

    /// Node-node projection `A = W Wᵀ`. The diagonal keeps `Σⱼ W_ij²`.
    pub fn project(&self) -> ProjectedGraph {
        ProjectedGraph {
            adjacency: &self.weights * self.weights.transpose(),
            directed: false,
        }
    }

    pub fn to_bipartite(&self) -> BipartiteGraph {
        BipartiteGraph {
            biadjacency: self.weights.clone(),
            left_labels: self.node_labels.clone(),
            right_labels: self.edge_labels.clone(),
        }
    }

    pub fn from_bipartite(b: &BipartiteGraph) -> Result<Self> {
        Self::with_labels(b.biadjacency.clone(), b.left_labels.clone(), b.right_labels.clone())
    }

    /// Number of edges containing each node, or `W·1` when `weighted`.
    pub fn node_degrees(&self, weighted: bool) -> DVector<f64> {
        DVector::from_fn(self.node_count(), |i, _| {
            let row = self.weights.row(i);
            if weighted {
                row.sum()
            } else {
                row.iter().filter(|&&w| w > 0.0).count() as f64
            }
        })
    }

    /// Number of members of each edge, or `Wᵀ·1` when `weighted`.
    pub fn edge_degrees(&self, weighted: bool) -> DVector<f64> {
        DVector::from_fn(self.edge_count(), |j, _| {
            let col = self.weights.column(j);
            if weighted {
                col.sum()
            } else {
                col.iter().filter(|&&w| w > 0.0).count() as f64
            }
        })
    }
}

/// A hypergraph with separate input (`W`, node → edge) and output
/// (`Z`, edge → node) weights. Both matrices are `|V| × |E|`; `Z[(k, j)]` is
/// the weight with which edge `j` reaches node `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectedHypergraph {
    base: Hypergraph,
    z: DMatrix<f64>,
}

impl DirectedHypergraph {
    pub fn new(base: Hypergraph, z: DMatrix<f64>) -> Result<Self> {
        if z.shape() != base.weights.shape() {
            return Err(Error::DimensionMismatch {
                expected: format!("{:?}", base.weights.shape()),
                found: format!("{:?}", z.shape()),
            });
        }
        first_error(&z)?;
        Ok(Self { base, z })
    }

    pub fn base(&self) -> &Hypergraph {
        &self.base
    }

    pub fn w(&self) -> &DMatrix<f64> {
        &self.base.weights
    }

    pub fn z(&self) -> &DMatrix<f64> {
        &self.z
    }

    pub fn inputs(&self, edge: usize) -> Vec<usize> {
        self.base.members(edge)
    }

    pub fn outputs(&self, edge: usize) -> Vec<usize> {
        (0..self.z.nrows()).filter(|&k| self.z[(k, edge)] > 0.0).collect()
    }

    /// `A = W Zᵀ`: `A[(i, k)]` sums, over edges, the weight of `i` entering
    /// the edge times the weight of the edge reaching `k`.
    pub fn project(&self) -> ProjectedGraph {
        ProjectedGraph {
            adjacency: &self.base.weights * self.z.transpose(),
            directed: true,
        }
    }
}

/// Node-node graph induced by a hypergraph.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectedGraph {
    pub adjacency: DMatrix<f64>,
    pub directed: bool,
}

/// Two-mode view: nodes on the left, hyperedges on the right.
#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteGraph {
    pub biadjacency: DMatrix<f64>,
    pub left_labels: Vec<String>,
    pub right_labels: Vec<String>,
}

impl BipartiteGraph {
    pub fn left_count(&self) -> usize {
        self.biadjacency.nrows()
    }

    pub fn right_count(&self) -> usize {
        self.biadjacency.ncols()
    }

    /// `(left, right, weight)` for every nonzero entry, column by column.
    pub fn links(&self) -> Vec<(usize, usize, f64)> {
        let mut out = Vec::new();
        for j in 0..self.right_count() {
            for i in 0..self.left_count() {
                let w = self.biadjacency[(i, j)];
                if w != 0.0 {
                    out.push((i, j, w));
                }
            }
        }
        out
    }
}
