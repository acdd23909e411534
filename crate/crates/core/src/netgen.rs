// SPDX-License-Identifier: Apache-2.0

//! Network growth by generalized preferential attachment, and topology
//! reports for finished networks.
//!
//! Each growth step picks a starting node (a fresh one, a uniformly random
//! existing one, or one drawn by degree) and links it to targets drawn in
//! proportion to a preference score. Scores are recomputed before every
//! attachment, so centrality preferences see the network as it grows.

use std::collections::{BTreeMap, BTreeSet};

use log::debug;
use nalgebra::DMatrix;
use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::adapt::{node_to_node_scores, ScoreOptions};
use crate::centrality::{
    general_centrality_directed, general_centrality_graph, general_centrality_hyper, resolvent_apply,
    GraphCentralityParams, HyperCentralityParams, Method,
};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::hypercore::{default_labels, Hypergraph};
use crate::io::Network;
use crate::spectral;

/// Added to clipped centrality scores so that every candidate stays reachable.
pub const UNIFORM_FLOOR: f64 = 1e-9;
pub const MIN_FIT_BINS: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum StartMode {
    #[default]
    New,
    Random,
    PreferentialByDegree,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Preference {
    #[default]
    Degree,
    Centrality,
    /// Chance of communication from the starting node to the target.
    LocalCentrality,
    ClusterCoefficient,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GrowthMode {
    #[default]
    Graph,
    Hypergraph,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenConfig {
    pub start: StartMode,
    pub preference: Preference,
    pub iterations: usize,
    pub links_per_step: usize,
    pub edge_weight: f64,
    pub beta: f64,
    pub seed: u64,
    pub mode: GrowthMode,
    /// Hypergraph mode: chance that an action joins an existing hyperedge
    /// rather than founding a new two-node one.
    pub p_join: f64,
}

impl Default for GenConfig {
    fn default() -> Self {
        Self {
            start: StartMode::New,
            preference: Preference::Degree,
            iterations: 100,
            links_per_step: 1,
            edge_weight: 0.1,
            beta: 0.5,
            seed: 0,
            mode: GrowthMode::Graph,
            p_join: 0.5,
        }
    }
}

impl GenConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidParameter(msg.to_string()));
        if self.iterations == 0 {
            return bad("iterations must be positive");
        }
        if self.links_per_step == 0 {
            return bad("links per step must be positive");
        }
        if !(self.edge_weight > 0.0 && self.edge_weight <= 1.0) {
            return bad("edge weight must lie in (0, 1]");
        }
        if !self.beta.is_finite() {
            return bad("beta must be finite");
        }
        if !(0.0..=1.0).contains(&self.p_join) {
            return bad("p_join must lie in [0, 1]");
        }
        if self.preference == Preference::LocalCentrality && self.start == StartMode::New {
            return bad("local centrality needs an existing starting node");
        }
        if self.preference == Preference::ClusterCoefficient && self.mode == GrowthMode::Hypergraph {
            return bad("cluster coefficient preference is only defined for graphs");
        }
        Ok(())
    }

    fn hyper_params(&self) -> HyperCentralityParams {
        HyperCentralityParams {
            alpha1: 1.0,
            alpha2: 1.0,
            beta1: 1.0,
            beta2: self.beta,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    /// A new link (graph) or a new two-node hyperedge with this node.
    Node(usize),
    /// Joined an existing hyperedge.
    Edge(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Attachment {
    pub step: usize,
    pub source: usize,
    pub target: Target,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GrowthEvent {
    /// Every candidate scored zero; the draw was uniform.
    UniformFallback { step: usize, candidates: usize },
    /// Some candidates scored zero and could not be drawn.
    ZeroPreference {
        step: usize,
        excluded: usize,
        candidates: usize,
    },
    /// The starting node had no legal target left.
    Saturated { step: usize, node: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Growth {
    pub network: Network,
    pub attachments: Vec<Attachment>,
    pub events: Vec<GrowthEvent>,
}

/// Weighted hyperedges kept as sparse rows while growing.
#[derive(Debug, Clone)]
struct HyperState {
    nodes: usize,
    edges: Vec<BTreeMap<usize, f64>>,
}

impl HyperState {
    fn from_hypergraph(h: &Hypergraph) -> Self {
        let edges = (0..h.edge_count())
            .map(|j| h.members(j).into_iter().map(|i| (i, h.weight(i, j))).collect())
            .collect();
        Self {
            nodes: h.node_count(),
            edges,
        }
    }

    fn to_hypergraph(&self) -> Hypergraph {
        let mut w = DMatrix::zeros(self.nodes, self.edges.len());
        for (j, edge) in self.edges.iter().enumerate() {
            for (&i, &x) in edge {
                w[(i, j)] = x;
            }
        }
        Hypergraph::with_labels(
            w,
            default_labels("n", self.nodes),
            default_labels("e", self.edges.len()),
        )
        .expect("growth keeps weights in range")
    }

    fn degree(&self, i: usize) -> usize {
        self.edges.iter().filter(|e| e.contains_key(&i)).count()
    }

    fn share_edge(&self, a: usize, b: usize) -> bool {
        self.edges.iter().any(|e| e.contains_key(&a) && e.contains_key(&b))
    }
}

#[derive(Debug, Clone)]
enum State {
    Graph(Graph),
    Hyper(HyperState),
}

impl State {
    fn from_network(net: &Network) -> Result<Self> {
        match net {
            Network::Graph(g) => Ok(State::Graph(g.clone())),
            Network::Hyper(h) => Ok(State::Hyper(HyperState::from_hypergraph(h))),
            Network::Directed(_) => Err(Error::InvalidParameter("directed hypergraphs cannot be grown".into())),
        }
    }

    fn into_network(self) -> Network {
        match self {
            State::Graph(g) => Network::Graph(g),
            State::Hyper(h) => Network::Hyper(h.to_hypergraph()),
        }
    }

    fn node_count(&self) -> usize {
        match self {
            State::Graph(g) => g.node_count(),
            State::Hyper(h) => h.nodes,
        }
    }

    fn add_node(&mut self) -> usize {
        match self {
            State::Graph(g) => g.add_node(),
            State::Hyper(h) => {
                h.nodes += 1;
                h.nodes - 1
            }
        }
    }

    fn degree(&self, i: usize) -> usize {
        match self {
            State::Graph(g) => g.degree(i),
            State::Hyper(h) => h.degree(i),
        }
    }

    /// `t` may be linked to `s` by a new link or a new two-node hyperedge.
    fn is_legal(&self, s: usize, t: usize) -> bool {
        s != t
            && match self {
                State::Graph(g) => !g.has_link(s, t),
                State::Hyper(h) => !h.share_edge(s, t),
            }
    }

    fn legal_targets(&self, s: usize) -> Vec<usize> {
        (0..self.node_count()).filter(|&t| self.is_legal(s, t)).collect()
    }

    fn connect(&mut self, s: usize, t: usize, weight: f64) {
        match self {
            State::Graph(g) => {
                g.add_link(s, t, weight);
            }
            State::Hyper(h) => h.edges.push(BTreeMap::from([(s, weight), (t, weight)])),
        }
    }
}

/// Three mutually linked nodes. In hypergraph mode every pair shares its
/// own two-node hyperedge.
pub fn seed_network(mode: GrowthMode, edge_weight: f64) -> Result<Network> {
    if !(edge_weight > 0.0 && edge_weight <= 1.0) {
        return Err(Error::InvalidParameter("edge weight must lie in (0, 1]".into()));
    }
    Ok(seed_state(mode, edge_weight).into_network())
}

fn seed_state(mode: GrowthMode, w: f64) -> State {
    match mode {
        GrowthMode::Graph => State::Graph(Graph::triangle(w)),
        GrowthMode::Hypergraph => State::Hyper(HyperState {
            nodes: 3,
            edges: [(0, 1), (0, 2), (1, 2)]
                .into_iter()
                .map(|(a, b)| BTreeMap::from([(a, w), (b, w)]))
                .collect(),
        }),
    }
}

fn unit_vector(n: usize, s: usize) -> DMatrix<f64> {
    let mut e = DMatrix::zeros(n, 1);
    e[(s, 0)] = 1.0;
    e
}

fn node_scores(state: &State, pref: Preference, start: usize, config: &GenConfig) -> Result<Vec<f64>> {
    let n = state.node_count();
    Ok(match (pref, state) {
        (Preference::Degree, _) => (0..n).map(|i| state.degree(i) as f64).collect(),
        (Preference::ClusterCoefficient, State::Graph(g)) => clustering(&graph_neighbours(g)),
        (Preference::ClusterCoefficient, State::Hyper(h)) => cluster_coefficient(&Network::Hyper(h.to_hypergraph())),
        (Preference::Centrality, State::Graph(g)) => {
            let params = GraphCentralityParams {
                alpha: 1.0,
                beta: config.beta,
            };
            general_centrality_graph(&g.adjacency(), params, Method::Solve)?
                .node_scores
                .as_slice()
                .to_vec()
        }
        (Preference::Centrality, State::Hyper(h)) => {
            general_centrality_hyper(&h.to_hypergraph(), config.hyper_params(), Method::Solve)?
                .node_scores
                .as_slice()
                .to_vec()
        }
        (Preference::LocalCentrality, State::Graph(g)) => {
            // (I − βA)⁻¹A is symmetric, so row `start` is the solve against A e_s.
            let a = g.adjacency();
            let rhs = DMatrix::from_column_slice(n, 1, a.column(start).as_slice());
            resolvent_apply(&a, config.beta, rhs, Method::Solve)?
                .values
                .as_slice()
                .to_vec()
        }
        (Preference::LocalCentrality, State::Hyper(h)) => {
            let scores = node_to_node_scores(&h.to_hypergraph(), config.hyper_params(), ScoreOptions::default())?;
            scores.row(start).iter().copied().collect()
        }
    })
}

fn edge_scores(h: &HyperState, pref: Preference, start: usize, config: &GenConfig) -> Result<Vec<f64>> {
    Ok(match pref {
        Preference::Degree => h.edges.iter().map(|e| e.len() as f64).collect(),
        Preference::Centrality => general_centrality_hyper(&h.to_hypergraph(), config.hyper_params(), Method::Solve)?
            .edge_scores
            .expect("hypergraph centrality has edge scores")
            .as_slice()
            .to_vec(),
        Preference::LocalCentrality => {
            // Row `start` of (I − β₁β₂WWᵀ)⁻¹W, through the symmetric resolvent.
            let hg = h.to_hypergraph();
            let p = config.hyper_params();
            let reach = resolvent_apply(
                &hg.project().adjacency,
                p.product(),
                unit_vector(h.nodes, start),
                Method::Solve,
            )?
            .values;
            (hg.weights().transpose() * reach).as_slice().to_vec()
        }
        Preference::ClusterCoefficient => {
            return Err(Error::InvalidParameter(
                "cluster coefficient preference is only defined for graphs".into(),
            ))
        }
    })
}

/// Lottery weight of a score. Degree and cluster scores are used as they
/// are; centralities can be negative and get clipped plus a small floor.
fn lottery_weight(pref: Preference, score: f64) -> f64 {
    match pref {
        Preference::Degree | Preference::ClusterCoefficient => score.max(0.0),
        Preference::Centrality | Preference::LocalCentrality => score.max(0.0) + UNIFORM_FLOOR,
    }
}

/// Draws an index with probability proportional to `weights`. Returns
/// `None` for an empty or all-zero slice.
pub fn sample_weighted<R: Rng>(rng: &mut R, weights: &[f64]) -> Option<usize> {
    WeightedIndex::new(weights).ok().map(|d| d.sample(rng))
}

fn draw(
    rng: &mut ChaCha8Rng,
    candidates: &[usize],
    weights: &[f64],
    step: usize,
    events: &mut Vec<GrowthEvent>,
) -> Option<usize> {
    if candidates.is_empty() {
        return None;
    }
    let zero = weights.iter().filter(|&&w| w <= 0.0).count();
    match sample_weighted(rng, weights) {
        Some(k) => {
            if zero > 0 {
                events.push(GrowthEvent::ZeroPreference {
                    step,
                    excluded: zero,
                    candidates: candidates.len(),
                });
            }
            Some(candidates[k])
        }
        None => {
            debug!(
                "step {step}: all {} candidates scored zero, drawing uniformly",
                candidates.len()
            );
            events.push(GrowthEvent::UniformFallback {
                step,
                candidates: candidates.len(),
            });
            Some(candidates[rng.gen_range(0..candidates.len())])
        }
    }
}

fn pick_start(
    state: &mut State,
    start: StartMode,
    pool: Option<Vec<usize>>,
    rng: &mut ChaCha8Rng,
    step: usize,
    events: &mut Vec<GrowthEvent>,
) -> Option<usize> {
    let pool = pool.unwrap_or_else(|| (0..state.node_count()).collect());
    match start {
        StartMode::New => Some(state.add_node()),
        StartMode::Random if pool.is_empty() => None,
        StartMode::Random => Some(pool[rng.gen_range(0..pool.len())]),
        StartMode::PreferentialByDegree => {
            let weights: Vec<f64> = pool.iter().map(|&i| state.degree(i) as f64).collect();
            draw(rng, &pool, &weights, step, events)
        }
    }
}

/// One attachment from `s`. Returns false if `s` had nothing left to link to.
fn attach(
    state: &mut State,
    s: usize,
    config: &GenConfig,
    rng: &mut ChaCha8Rng,
    step: usize,
    out: &mut Growth,
) -> Result<bool> {
    if let State::Hyper(h) = &*state {
        if rng.gen_bool(config.p_join) {
            let open: Vec<usize> = (0..h.edges.len()).filter(|&j| !h.edges[j].contains_key(&s)).collect();
            if !open.is_empty() {
                let scores = edge_scores(h, config.preference, s, config)?;
                let weights: Vec<f64> = open
                    .iter()
                    .map(|&j| lottery_weight(config.preference, scores[j]))
                    .collect();
                let j = draw(rng, &open, &weights, step, &mut out.events).expect("non-empty");
                if let State::Hyper(h) = state {
                    h.edges[j].insert(s, config.edge_weight);
                }
                out.attachments.push(Attachment {
                    step,
                    source: s,
                    target: Target::Edge(j),
                });
                return Ok(true);
            }
        }
    }
    let candidates = state.legal_targets(s);
    if candidates.is_empty() {
        out.events.push(GrowthEvent::Saturated { step, node: s });
        return Ok(false);
    }
    let scores = node_scores(state, config.preference, s, config)?;
    let weights: Vec<f64> = candidates
        .iter()
        .map(|&t| lottery_weight(config.preference, scores[t]))
        .collect();
    let t = draw(rng, &candidates, &weights, step, &mut out.events).expect("non-empty");
    state.connect(s, t, config.edge_weight);
    out.attachments.push(Attachment {
        step,
        source: s,
        target: Target::Node(t),
    });
    Ok(true)
}

fn at_step(step: usize) -> impl Fn(Error) -> Error {
    move |e| Error::AtStep {
        step,
        source: Box::new(e),
    }
}

/// Grows a network from the three-node seed. Steps are numbered from 1;
/// errors raised inside a step carry its number.
pub fn grow(config: &GenConfig) -> Result<Growth> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut state = seed_state(config.mode, config.edge_weight);
    let mut out = Growth {
        network: Network::Graph(Graph::new(0)),
        attachments: Vec::new(),
        events: Vec::new(),
    };
    for step in 1..=config.iterations {
        let Some(s) = pick_start(&mut state, config.start, None, &mut rng, step, &mut out.events) else {
            continue;
        };
        for _ in 0..config.links_per_step {
            if !attach(&mut state, s, config, &mut rng, step, &mut out).map_err(at_step(step))? {
                break;
            }
        }
    }
    out.network = state.into_network();
    Ok(out)
}

/// Adds up to `count` links between existing nodes. Returns early, with the
/// number actually added, once no node has a legal partner left.
pub fn add_edges(network: &Network, config: &GenConfig, count: usize) -> Result<(Growth, usize)> {
    if config.start == StartMode::New {
        return Err(Error::InvalidParameter(
            "adding edges needs an existing starting node".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut state = State::from_network(network)?;
    let mut out = Growth {
        network: Network::Graph(Graph::new(0)),
        attachments: Vec::new(),
        events: Vec::new(),
    };
    // Only links to nodes are added here, never hyperedge joins.
    let config = GenConfig { p_join: 0.0, ..*config };
    let mut added = 0;
    for step in 1..=count {
        let open: Vec<usize> = (0..state.node_count())
            .filter(|&s| !state.legal_targets(s).is_empty())
            .collect();
        let Some(s) = pick_start(&mut state, config.start, Some(open), &mut rng, step, &mut out.events) else {
            out.events.push(GrowthEvent::Saturated { step, node: usize::MAX });
            break;
        };
        attach(&mut state, s, &config, &mut rng, step, &mut out).map_err(at_step(step))?;
        added += 1;
    }
    out.network = state.into_network();
    Ok((out, added))
}

fn graph_neighbours(g: &Graph) -> Vec<BTreeSet<usize>> {
    (0..g.node_count())
        .map(|u| g.neighbors(u).filter(|&(_, w)| w > 0.0).map(|(v, _)| v).collect())
        .collect()
}

fn clustering(neighbours: &[BTreeSet<usize>]) -> Vec<f64> {
    neighbours
        .iter()
        .map(|nb| {
            let d = nb.len();
            if d < 2 {
                return 0.0;
            }
            let list: Vec<usize> = nb.iter().copied().collect();
            let mut closed = 0usize;
            for (k, &a) in list.iter().enumerate() {
                closed += list[k + 1..].iter().filter(|&&b| neighbours[a].contains(&b)).count();
            }
            closed as f64 / (d * (d - 1) / 2) as f64
        })
        .collect()
}

/// Local clustering coefficient on the simple graph of positive links.
/// Self-loops are ignored and nodes of degree below 2 score 0.
pub fn cluster_coefficient(network: &Network) -> Vec<f64> {
    let a = network.adjacency();
    let n = a.nrows();
    let neighbours: Vec<BTreeSet<usize>> = (0..n)
        .map(|i| {
            (0..n)
                .filter(|&j| j != i && (a[(i, j)] > 0.0 || a[(j, i)] > 0.0))
                .collect()
        })
        .collect();
    clustering(&neighbours)
}

/// Unweighted degree: neighbours in a graph, incident edges in a hypergraph.
pub fn degrees(network: &Network) -> Vec<usize> {
    match network {
        Network::Graph(g) => (0..g.node_count()).map(|u| g.degree(u)).collect(),
        Network::Hyper(h) => h.node_degrees(false).iter().map(|&d| d as usize).collect(),
        Network::Directed(d) => d.base().node_degrees(false).iter().map(|&d| d as usize).collect(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogBin {
    /// Degrees in `lo..hi`.
    pub lo: usize,
    pub hi: usize,
    pub count: usize,
    pub centre: f64,
    /// Fraction of nodes per unit degree.
    pub density: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PowerLawFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub bins: Vec<LogBin>,
}

/// Least-squares line through `log10 density` against `log10 centre` of
/// logarithmic degree bins. Zero degrees and empty bins are left out.
/// `None` with fewer than two occupied bins.
pub fn power_law_fit(degrees: &[usize]) -> Option<PowerLawFit> {
    let positive: Vec<usize> = degrees.iter().copied().filter(|&d| d > 0).collect();
    let top = *positive.iter().max()?;
    let span = (top + 1) as f64;
    let count = MIN_FIT_BINS.max(span.log2().ceil() as usize);
    let mut edges: Vec<usize> = (0..=count)
        .map(|k| span.powf(k as f64 / count as f64).ceil() as usize)
        .collect();
    edges[0] = 1;
    edges[count] = top + 1;
    edges.dedup();

    let total = positive.len() as f64;
    let bins: Vec<LogBin> = edges
        .windows(2)
        .map(|e| {
            let (lo, hi) = (e[0], e[1]);
            let count = positive.iter().filter(|&&d| d >= lo && d < hi).count();
            LogBin {
                lo,
                hi,
                count,
                centre: ((lo * (hi - 1)) as f64).sqrt(),
                density: count as f64 / (total * (hi - lo) as f64),
            }
        })
        .collect();

    let points: Vec<(f64, f64)> = bins
        .iter()
        .filter(|b| b.count > 0)
        .map(|b| (b.centre.log10(), b.density.log10()))
        .collect();
    if points.len() < 2 {
        return None;
    }
    let k = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / k;
    let my = points.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = points.iter().map(|p| (p.1 - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = points.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum();
    let r_squared = if syy > 0.0 { 1.0 - sse / syy } else { 1.0 };
    Some(PowerLawFit {
        slope,
        intercept,
        r_squared,
        bins,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct TopologyReport {
    pub beta: f64,
    pub degrees: Vec<usize>,
    /// `(degree, node count)`, ascending, zero counts omitted.
    pub histogram: Vec<(usize, usize)>,
    /// `None` when β is a pole of the network; see `centrality_note`.
    pub centrality: Option<Vec<f64>>,
    pub centrality_note: Option<String>,
    pub cluster: Vec<f64>,
    pub fit: Option<PowerLawFit>,
    pub lambda_max: f64,
}

impl TopologyReport {
    pub fn centrality_vs_degree(&self) -> Vec<(usize, f64)> {
        match &self.centrality {
            Some(c) => self.degrees.iter().copied().zip(c.iter().copied()).collect(),
            None => Vec::new(),
        }
    }

    pub fn cluster_vs_degree(&self) -> Vec<(usize, f64)> {
        self.degrees.iter().copied().zip(self.cluster.iter().copied()).collect()
    }

    pub fn max_degree(&self) -> usize {
        self.degrees.iter().copied().max().unwrap_or(0)
    }

    pub fn median_degree(&self) -> f64 {
        median(&self.degrees)
    }
}

pub fn median(values: &[usize]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    let mut v = values.to_vec();
    v.sort_unstable();
    let mid = v.len() / 2;
    if v.len() % 2 == 1 {
        v[mid] as f64
    } else {
        (v[mid - 1] + v[mid]) as f64 / 2.0
    }
}

/// Centrality with `α = 1` (graphs) or `α₁ = α₂ = β₁ = 1, β₂ = β`
/// (hypergraphs). A pole yields `Ok(None)` plus the reason.
fn centrality_column(network: &Network, beta: f64) -> Result<(Option<Vec<f64>>, Option<String>)> {
    let result = match network {
        Network::Graph(g) => general_centrality_graph(
            &g.adjacency(),
            GraphCentralityParams { alpha: 1.0, beta },
            Method::Solve,
        ),
        Network::Hyper(h) => general_centrality_hyper(h, hyper_params(beta), Method::Solve),
        Network::Directed(d) => general_centrality_directed(d, hyper_params(beta), Method::Solve),
    };
    match result {
        Ok(r) => Ok((Some(r.node_scores.as_slice().to_vec()), None)),
        Err(e @ Error::Pole { .. }) => Ok((None, Some(e.to_string()))),
        Err(e) => Err(e),
    }
}

fn hyper_params(beta: f64) -> HyperCentralityParams {
    HyperCentralityParams {
        beta2: beta,
        ..Default::default()
    }
}

/// Largest real eigenvalue of a network's (projected) adjacency matrix.
pub fn network_lambda_max(network: &Network) -> Result<f64> {
    let a = network.adjacency();
    if spectral::is_symmetric(&a) {
        spectral::lambda_max(&a)
    } else {
        Ok(spectral::real_eigenvalues(&a).into_iter().fold(0.0, f64::max))
    }
}

pub fn analyze(network: &Network, beta: f64) -> Result<TopologyReport> {
    let degrees = degrees(network);
    let mut histogram = BTreeMap::new();
    for &d in &degrees {
        *histogram.entry(d).or_insert(0usize) += 1;
    }
    let (centrality, centrality_note) = centrality_column(network, beta)?;
    Ok(TopologyReport {
        beta,
        fit: power_law_fit(&degrees),
        histogram: histogram.into_iter().collect(),
        centrality,
        centrality_note,
        cluster: cluster_coefficient(network),
        lambda_max: network_lambda_max(network)?,
        degrees,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub beta: f64,
    pub centrality: Option<Vec<f64>>,
    pub note: Option<String>,
}

/// Centrality of every node for each β, for centrality-vs-degree plots.
pub fn beta_sweep(network: &Network, betas: &[f64]) -> Result<Vec<SweepRow>> {
    betas
        .iter()
        .map(|&beta| {
            let (centrality, note) = centrality_column(network, beta)?;
            Ok(SweepRow { beta, centrality, note })
        })
        .collect()
}

/// `0, 0.1, ..., 1`.
pub fn default_sweep_betas() -> Vec<f64> {
    (0..=10).map(|k| k as f64 / 10.0).collect()
}
