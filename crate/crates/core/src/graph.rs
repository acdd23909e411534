// SPDX-License-Identifier: Apache-2.0

//! Simple weighted undirected graphs (no self-links, no parallel links).

use std::collections::BTreeMap;

use nalgebra::DMatrix;

use crate::hypercore::default_labels;

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Graph {
    labels: Vec<String>,
    adj: Vec<BTreeMap<usize, f64>>,
}

impl Graph {
    pub fn new(node_count: usize) -> Self {
        Self {
            labels: default_labels("n", node_count),
            adj: vec![BTreeMap::new(); node_count],
        }
    }

    pub fn with_labels(labels: Vec<String>) -> Self {
        let n = labels.len();
        Self {
            labels,
            adj: vec![BTreeMap::new(); n],
        }
    }

    /// Complete graph on three nodes, every link of weight `weight`.
    pub fn triangle(weight: f64) -> Self {
        let mut g = Self::new(3);
        g.add_link(0, 1, weight);
        g.add_link(0, 2, weight);
        g.add_link(1, 2, weight);
        g
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    pub fn link_count(&self) -> usize {
        self.adj.iter().map(BTreeMap::len).sum::<usize>() / 2
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn add_node(&mut self) -> usize {
        let id = self.adj.len();
        self.labels.push(format!("n{id}"));
        self.adj.push(BTreeMap::new());
        id
    }

    /// Adds an undirected link. Returns `false` (and changes nothing) for
    /// self-links and links that already exist.
    pub fn add_link(&mut self, u: usize, v: usize, weight: f64) -> bool {
        if u == v || self.adj[u].contains_key(&v) {
            return false;
        }
        self.adj[u].insert(v, weight);
        self.adj[v].insert(u, weight);
        true
    }

    pub fn has_link(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains_key(&v)
    }

    pub fn weight(&self, u: usize, v: usize) -> f64 {
        self.adj[u].get(&v).copied().unwrap_or(0.0)
    }

    pub fn neighbors(&self, u: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.adj[u].iter().map(|(&v, &w)| (v, w))
    }

    /// Number of links at `u`.
    pub fn degree(&self, u: usize) -> usize {
        self.adj[u].len()
    }

    pub fn weighted_degree(&self, u: usize) -> f64 {
        self.adj[u].values().sum()
    }

    /// Each link once, as `(u, v, weight)` with `u < v`.
    pub fn links(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, nbrs)| nbrs.range(u + 1..).map(move |(&v, &w)| (u, v, w)))
    }

    pub fn adjacency(&self) -> DMatrix<f64> {
        let n = self.node_count();
        let mut a = DMatrix::zeros(n, n);
        for (u, nbrs) in self.adj.iter().enumerate() {
            for (&v, &w) in nbrs {
                a[(u, v)] = w;
            }
        }
        a
    }

    /// True when every node is linked to every other node.
    pub fn is_complete(&self) -> bool {
        let n = self.node_count();
        self.adj.iter().all(|nbrs| nbrs.len() + 1 == n)
    }
}
