// SPDX-License-Identifier: Apache-2.0

//! Learning on hypergraphs: delta-rule weight updates, punishment, hyperedge
//! fitness and scores for growing hyperedges.
//!
//! A challenge `c` is a vector; a node processes it with its processing
//! function `f` and the amount of relaxation is `‖c‖ − ‖f(c)‖`.

use nalgebra::{DMatrix, DVector};

use crate::centrality::{resolvent_apply, HyperCentralityParams, Method};
use crate::error::{Error, Result};
use crate::hypercore::Hypergraph;

pub const DEFAULT_CHALLENGE_DIM: usize = 4;
pub const FITNESS_EPSILON: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct Challenge(pub DVector<f64>);

impl Challenge {
    pub fn new(values: Vec<f64>) -> Self {
        Self(DVector::from_vec(values))
    }

    pub fn norm(&self) -> f64 {
        self.0.norm()
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }
}

/// How an agent relaxes a challenge.
pub trait ProcessingFunction {
    fn process(&self, challenge: &Challenge) -> Challenge;
}

impl<F: Fn(&Challenge) -> Challenge> ProcessingFunction for F {
    fn process(&self, challenge: &Challenge) -> Challenge {
        self(challenge)
    }
}

/// `f(c) = κ c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearContraction {
    pub kappa: f64,
}

impl Default for LinearContraction {
    fn default() -> Self {
        Self { kappa: 0.5 }
    }
}

impl ProcessingFunction for LinearContraction {
    fn process(&self, challenge: &Challenge) -> Challenge {
        Challenge(&challenge.0 * self.kappa)
    }
}

pub fn relaxation(challenge: &Challenge, processed: &Challenge) -> f64 {
    challenge.norm() - processed.norm()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LearningConfig {
    /// Reward step `r`.
    pub rate: f64,
    /// Punishment `p` for a challenge that is not selected.
    pub punishment: f64,
}

impl Default for LearningConfig {
    fn default() -> Self {
        Self {
            rate: 0.1,
            punishment: 0.01,
        }
    }
}

/// What a single update did to `W_ij`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightUpdate {
    pub node: usize,
    pub edge: usize,
    pub old: f64,
    pub new: f64,
    /// The raw update left `[0, 1]` and was clamped.
    pub clamped: bool,
}

fn apply(h: &mut Hypergraph, node: usize, edge: usize, delta: f64) -> Result<WeightUpdate> {
    if node >= h.node_count() || edge >= h.edge_count() || !h.contains(node, edge) {
        return Err(Error::NotMember { node, edge });
    }
    if !delta.is_finite() {
        return Err(Error::InvalidParameter(format!("weight update {delta} is not finite")));
    }
    let old = h.weight(node, edge);
    let raw = old + delta;
    let new = raw.clamp(0.0, 1.0);
    h.set_weight(node, edge, new);
    Ok(WeightUpdate {
        node,
        edge,
        old,
        new,
        clamped: new != raw,
    })
}

/// `W_ij ← W_ij + r(‖c‖ − ‖f(c)‖)`, clamped to `[0, 1]`, in place.
pub fn delta_update_in_place(
    h: &mut Hypergraph,
    node: usize,
    edge: usize,
    challenge: &Challenge,
    processor: &dyn ProcessingFunction,
    config: &LearningConfig,
) -> Result<WeightUpdate> {
    let relaxed = processor.process(challenge);
    if relaxed.dim() != challenge.dim() {
        return Err(Error::DimensionMismatch {
            expected: format!("challenge of dimension {}", challenge.dim()),
            found: format!("{}", relaxed.dim()),
        });
    }
    apply(h, node, edge, config.rate * relaxation(challenge, &relaxed))
}

pub fn delta_update(
    h: &Hypergraph,
    node: usize,
    edge: usize,
    challenge: &Challenge,
    processor: &dyn ProcessingFunction,
    config: &LearningConfig,
) -> Result<(Hypergraph, WeightUpdate)> {
    let mut out = h.clone();
    let update = delta_update_in_place(&mut out, node, edge, challenge, processor, config)?;
    Ok((out, update))
}

/// `W_ij ← W_ij − p`, floored at 0. A zero weight drops the node from the edge.
pub fn punish_in_place(h: &mut Hypergraph, node: usize, edge: usize, config: &LearningConfig) -> Result<WeightUpdate> {
    apply(h, node, edge, -config.punishment)
}

pub fn punish(h: &Hypergraph, node: usize, edge: usize, config: &LearningConfig) -> Result<(Hypergraph, WeightUpdate)> {
    let mut out = h.clone();
    let update = punish_in_place(&mut out, node, edge, config)?;
    Ok((out, update))
}

/// Maps fitness to a mutation rate `constant / fitness`, bounded for
/// non-positive fitness.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MutationModel {
    pub constant: f64,
}

impl Default for MutationModel {
    fn default() -> Self {
        Self { constant: 1.0 }
    }
}

impl MutationModel {
    pub fn rate_cap(&self) -> f64 {
        1e6 * self.constant
    }

    pub fn rate(&self, fitness: f64) -> f64 {
        (self.constant / fitness.max(FITNESS_EPSILON)).min(self.rate_cap())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitnessEntry {
    pub edge: usize,
    pub fitness: f64,
    pub mutation_rate: f64,
    pub samples: usize,
}

/// Summed relaxation of the processed `(challenge, relaxed)` pairs divided by
/// the number of members of `edge`.
pub fn edge_fitness(
    h: &Hypergraph,
    edge: usize,
    processed: &[(Challenge, Challenge)],
    model: &MutationModel,
) -> Result<FitnessEntry> {
    let size = h.members(edge).len();
    if size == 0 {
        return Err(Error::EmptyEdge { edge });
    }
    let mut terms: Vec<f64> = processed.iter().map(|(c, r)| relaxation(c, r)).collect();
    // Fixed summation order keeps the result independent of input order.
    terms.sort_by(f64::total_cmp);
    let fitness = terms.iter().sum::<f64>() / size as f64;
    Ok(FitnessEntry {
        edge,
        fitness,
        mutation_rate: model.rate(fitness),
        samples: processed.len(),
    })
}

/// Fitness of every non-empty edge; `processed[j]` belongs to edge `j`.
pub fn fitness_report(
    h: &Hypergraph,
    processed: &[Vec<(Challenge, Challenge)>],
    model: &MutationModel,
) -> Result<Vec<FitnessEntry>> {
    if processed.len() != h.edge_count() {
        return Err(Error::DimensionMismatch {
            expected: format!("{} edge lists", h.edge_count()),
            found: format!("{}", processed.len()),
        });
    }
    (0..h.edge_count())
        .filter(|&j| !h.members(j).is_empty())
        .map(|j| edge_fitness(h, j, &processed[j], model))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ScoreHorizon {
    /// Only the shortest detour through one other node.
    OneStep,
    /// All communications, through the resolvent.
    #[default]
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ScoreOptions {
    pub horizon: ScoreHorizon,
    pub method: Method,
    /// Subtract the direct term so that existing members or neighbours do
    /// not count. May leave negative entries.
    pub exclude_existing: bool,
}

/// Chance of communication from each node to each edge:
/// `(I − β₁β₂WWᵀ)⁻¹ W`, or `β₁β₂ WWᵀW` for one step.
pub fn node_to_edge_scores(
    h: &Hypergraph,
    params: HyperCentralityParams,
    options: ScoreOptions,
) -> Result<DMatrix<f64>> {
    let w = h.weights();
    let projection = h.project().adjacency;
    let beta = params.beta1 * params.beta2;
    let mut scores = match options.horizon {
        ScoreHorizon::OneStep => &projection * w * beta,
        ScoreHorizon::Full => resolvent_apply(&projection, beta, w.clone(), options.method)?.values,
    };
    if options.exclude_existing {
        scores -= w;
    }
    Ok(scores)
}

/// Chance of communication between nodes: `β₁(I − β₁β₂WWᵀ)⁻¹WWᵀ`, or
/// `β₁²β₂(WWᵀ)²` for the closest nodes only.
pub fn node_to_node_scores(
    h: &Hypergraph,
    params: HyperCentralityParams,
    options: ScoreOptions,
) -> Result<DMatrix<f64>> {
    let projection = h.project().adjacency;
    let (b1, b2) = (params.beta1, params.beta2);
    let mut scores = match options.horizon {
        ScoreHorizon::OneStep => &projection * &projection * (b1 * b1 * b2),
        ScoreHorizon::Full => resolvent_apply(&projection, b1 * b2, projection.clone(), options.method)?.values * b1,
    };
    if options.exclude_existing {
        scores -= &projection * b1;
    }
    Ok(scores)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Proposal {
    pub seed: usize,
    pub members: Vec<usize>,
    /// Fewer candidates with a positive score than requested.
    pub short_list: bool,
}

/// Best `size` partners for a new hyperedge around `seed`, ranked by the
/// seed's row of [`node_to_node_scores`]. Ties go to the lower index; zero
/// and negative scores are never proposed.
pub fn propose_hyperedge(
    h: &Hypergraph,
    seed: usize,
    params: HyperCentralityParams,
    size: usize,
    options: ScoreOptions,
) -> Result<Proposal> {
    if seed >= h.node_count() {
        return Err(Error::InvalidParameter(format!("no node {seed}")));
    }
    if size == 0 {
        return Err(Error::InvalidParameter("proposal size must be at least 1".into()));
    }
    let scores = node_to_node_scores(h, params, options)?;
    let linked = h.project().adjacency;
    let mut ranked: Vec<(usize, f64)> = (0..h.node_count())
        .filter(|&k| k != seed)
        .filter(|&k| !options.exclude_existing || linked[(seed, k)] == 0.0)
        .map(|k| (k, scores[(seed, k)].max(0.0)))
        .filter(|&(_, s)| s > 0.0)
        .collect();
    ranked.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    let short_list = ranked.len() < size;
    ranked.truncate(size);
    Ok(Proposal {
        seed,
        members: ranked.into_iter().map(|(k, _)| k).collect(),
        short_list,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn identity(c: &Challenge) -> Challenge {
        c.clone()
    }

    fn halve(c: &Challenge) -> Challenge {
        Challenge(&c.0 * 0.5)
    }

    fn sample() -> Hypergraph {
        Hypergraph::from_rows(&[&[0.5, 0.1], &[1.0, 0.0], &[0.0, 0.9]]).unwrap()
    }

    #[test]
    fn delta_update_examples() {
        let h = sample();
        let c = Challenge::new(vec![2.0, 0.0]);
        let cfg = LearningConfig {
            rate: 0.1,
            punishment: 0.0,
        };
        let (same, u) = delta_update(&h, 0, 0, &c, &identity, &cfg).unwrap();
        assert_eq!(same, h);
        assert!(!u.clamped);

        let (next, u) = delta_update(&h, 0, 0, &c, &halve, &cfg).unwrap();
        assert_relative_eq!(next.weight(0, 0), 0.6, epsilon = 1e-15);
        assert_eq!(next.weight(1, 0), h.weight(1, 0));
        assert_eq!(u.old, 0.5);

        let (top, u) = delta_update(&h, 1, 0, &c, &halve, &cfg).unwrap();
        assert_eq!(top.weight(1, 0), 1.0);
        assert!(u.clamped);

        assert!(matches!(
            delta_update(&h, 1, 1, &c, &halve, &cfg),
            Err(Error::NotMember { node: 1, edge: 1 })
        ));
    }

    #[test]
    fn default_processor_halves_norm() {
        let c = Challenge::new(vec![3.0, 4.0]);
        let r = LinearContraction::default().process(&c);
        assert_relative_eq!(relaxation(&c, &r), 2.5, epsilon = 1e-15);
    }

    #[test]
    fn punish_examples() {
        let h = sample();
        let (same, _) = punish(
            &h,
            0,
            0,
            &LearningConfig {
                rate: 0.0,
                punishment: 0.0,
            },
        )
        .unwrap();
        assert_eq!(same, h);

        let (next, u) = punish(
            &h,
            0,
            1,
            &LearningConfig {
                rate: 0.0,
                punishment: 0.3,
            },
        )
        .unwrap();
        assert_eq!(next.weight(0, 1), 0.0);
        assert!(u.clamped);
        assert!(!next.contains(0, 1));

        let (next, _) = punish(
            &h,
            0,
            0,
            &LearningConfig {
                rate: 0.0,
                punishment: 0.1,
            },
        )
        .unwrap();
        assert_relative_eq!(next.weight(0, 0), 0.4, epsilon = 1e-15);
    }

    #[test]
    fn fitness_examples() {
        let h = Hypergraph::from_rows(&[&[1.0, 1.0], &[1.0, 1.0], &[0.0, 1.0], &[0.0, 1.0]]).unwrap();
        let model = MutationModel::default();
        let none = edge_fitness(&h, 0, &[], &model).unwrap();
        assert_eq!(none.fitness, 0.0);
        assert_eq!(none.mutation_rate, model.rate_cap());

        let c = Challenge::new(vec![3.0, 0.0]);
        let r = Challenge::new(vec![1.0, 0.0]);
        let one = edge_fitness(&h, 0, &[(c.clone(), r.clone())], &model).unwrap();
        assert_relative_eq!(one.fitness, 1.0);
        assert_relative_eq!(one.mutation_rate, 1.0);

        let big = edge_fitness(&h, 1, &[(c, r)], &model).unwrap();
        assert_relative_eq!(one.fitness / big.fitness, 2.0);

        let empty = Hypergraph::from_rows(&[&[1.0, 0.0]]).unwrap();
        assert!(matches!(
            edge_fitness(&empty, 1, &[], &model),
            Err(Error::EmptyEdge { edge: 1 })
        ));
        let report = fitness_report(&empty, &[vec![], vec![]], &model).unwrap();
        assert_eq!(report.len(), 1);
    }

    #[test]
    fn node_to_edge_examples() {
        let h = sample();
        let zero = HyperCentralityParams {
            beta1: 1.0,
            beta2: 0.0,
            ..Default::default()
        };
        assert_eq!(
            &node_to_edge_scores(&h, zero, ScoreOptions::default()).unwrap(),
            h.weights()
        );

        // One step on W = [[1],[1]] with β₁ = 1, β₂ = 0.5: WWᵀ = [[1,1],[1,1]],
        // WWᵀW = [[2],[2]], times 0.5 gives [[1],[1]].
        let k2 = Hypergraph::from_rows(&[&[1.0], &[1.0]]).unwrap();
        let p = HyperCentralityParams {
            beta1: 1.0,
            beta2: 0.5,
            ..Default::default()
        };
        let one = node_to_edge_scores(
            &k2,
            p,
            ScoreOptions {
                horizon: ScoreHorizon::OneStep,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(one, DMatrix::from_element(2, 1, 1.0));

        let p = HyperCentralityParams {
            beta1: 1.0,
            beta2: 0.2,
            ..Default::default()
        };
        let full = node_to_edge_scores(&h, p, ScoreOptions::default()).unwrap();
        let excl = node_to_edge_scores(
            &h,
            p,
            ScoreOptions {
                exclude_existing: true,
                ..Default::default()
            },
        )
        .unwrap();
        assert_relative_eq!(full[(1, 0)] - excl[(1, 0)], 1.0, epsilon = 1e-15);
    }

    #[test]
    fn node_to_node_examples() {
        let h = Hypergraph::from_rows(&[&[1.0, 0.0], &[1.0, 1.0], &[0.0, 1.0]]).unwrap();
        let a = h.project().adjacency;
        let p = HyperCentralityParams {
            beta1: 0.7,
            beta2: 0.0,
            ..Default::default()
        };
        assert_eq!(node_to_node_scores(&h, p, ScoreOptions::default()).unwrap(), &a * 0.7);

        let p = HyperCentralityParams {
            beta1: 0.0,
            beta2: 0.3,
            ..Default::default()
        };
        assert_eq!(
            node_to_node_scores(&h, p, ScoreOptions::default()).unwrap(),
            DMatrix::zeros(3, 3)
        );

        // Closest-only matrix versus the k = 1 term β₁(β₁β₂)(WWᵀ)², by hand:
        // (WWᵀ)² = [[2,3,1],[3,6,3],[1,3,2]].
        let p = HyperCentralityParams {
            beta1: 0.5,
            beta2: 0.4,
            ..Default::default()
        };
        let closest = node_to_node_scores(
            &h,
            p,
            ScoreOptions {
                horizon: ScoreHorizon::OneStep,
                ..Default::default()
            },
        )
        .unwrap();
        let hand = DMatrix::from_row_slice(3, 3, &[2.0, 3.0, 1.0, 3.0, 6.0, 3.0, 1.0, 3.0, 2.0]) * (0.5 * 0.5 * 0.4);
        assert_relative_eq!(closest, hand, epsilon = 1e-15);
    }

    #[test]
    fn proposal_examples() {
        let h = Hypergraph::from_rows(&[&[1.0], &[1.0], &[0.0]]).unwrap();
        let p = HyperCentralityParams {
            beta1: 0.0,
            beta2: 0.3,
            ..Default::default()
        };
        let empty = propose_hyperedge(&h, 0, p, 1, ScoreOptions::default()).unwrap();
        assert!(empty.members.is_empty());
        assert!(empty.short_list);

        let p = HyperCentralityParams {
            beta1: 1.0,
            beta2: 0.3,
            ..Default::default()
        };
        let prop = propose_hyperedge(&h, 0, p, 2, ScoreOptions::default()).unwrap();
        assert_eq!(prop.members, vec![1]);
        assert!(prop.short_list);

        let tie = Hypergraph::from_rows(&[&[1.0], &[1.0], &[1.0]]).unwrap();
        let p = HyperCentralityParams {
            beta1: 1.0,
            beta2: 0.1,
            ..Default::default()
        };
        let prop = propose_hyperedge(&tie, 1, p, 2, ScoreOptions::default()).unwrap();
        assert_eq!(prop.members, vec![0, 2]);
        assert!(!prop.short_list);
    }

    proptest! {
        #[test]
        fn updates_stay_in_bounds(
            ops in proptest::collection::vec((0usize..3, 0usize..2, any::<bool>(), 0.0..2.0f64), 1..200),
        ) {
            let mut h = Hypergraph::from_rows(&[&[0.5, 0.1], &[1.0, 0.3], &[0.2, 0.9]]).unwrap();
            let cfg = LearningConfig { rate: 0.3, punishment: 0.05 };
            for (node, edge, reward, scale) in ops {
                let before = h.clone();
                let res = if reward {
                    let c = Challenge::new(vec![scale, 1.0]);
                    delta_update_in_place(&mut h, node, edge, &c, &LinearContraction::default(), &cfg)
                } else {
                    punish_in_place(&mut h, node, edge, &cfg)
                };
                prop_assert!(h.weights().iter().all(|w| (0.0..=1.0).contains(w)));
                for i in 0..3 {
                    for j in 0..2 {
                        if (i, j) != (node, edge) || res.is_err() {
                            prop_assert_eq!(h.weight(i, j).to_bits(), before.weight(i, j).to_bits());
                        }
                    }
                }
            }
        }

        #[test]
        fn functional_and_in_place_agree(scale in 0.0..3.0f64, node in 0usize..3) {
            let h = Hypergraph::from_rows(&[&[0.5], &[1.0], &[0.2]]).unwrap();
            let c = Challenge::new(vec![scale, -scale, 0.5]);
            let cfg = LearningConfig::default();
            let (functional, _) = delta_update(&h, node, 0, &c, &LinearContraction::default(), &cfg).unwrap();
            let mut in_place = h.clone();
            delta_update_in_place(&mut in_place, node, 0, &c, &LinearContraction::default(), &cfg).unwrap();
            prop_assert_eq!(functional, in_place);
        }

        #[test]
        fn fitness_ignores_order(norms in proptest::collection::vec((0.0..5.0f64, 0.0..5.0f64), 0..20)) {
            let h = Hypergraph::from_rows(&[&[1.0], &[1.0]]).unwrap();
            let list: Vec<_> = norms.iter().map(|&(a, b)| (Challenge::new(vec![a]), Challenge::new(vec![b]))).collect();
            let mut rev = list.clone();
            rev.reverse();
            let model = MutationModel::default();
            prop_assert_eq!(
                edge_fitness(&h, 0, &list, &model).unwrap(),
                edge_fitness(&h, 0, &rev, &model).unwrap()
            );
        }

        #[test]
        fn score_series_matches_solve(v in proptest::collection::vec(prop_oneof![Just(0.0), 0.0..=1.0f64], 4 * 3), rho in 0.0..0.9f64) {
            let h = Hypergraph::new(DMatrix::from_vec(4, 3, v)).unwrap();
            let lmax = crate::spectral::lambda_max(&h.project().adjacency).unwrap();
            prop_assume!(lmax > 0.0);
            let p = HyperCentralityParams { beta1: 1.0, beta2: rho / lmax, ..Default::default() };
            for f in [node_to_edge_scores, node_to_node_scores] {
                let solve = f(&h, p, ScoreOptions::default()).unwrap();
                let series = f(&h, p, ScoreOptions { method: Method::Series, ..Default::default() }).unwrap();
                for (s, t) in solve.iter().zip(series.iter()) {
                    prop_assert!((s - t).abs() <= 1e-8 * s.abs().max(1e-6));
                }
            }
        }
    }
}
