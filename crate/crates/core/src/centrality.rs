// SPDX-License-Identifier: Apache-2.0

//! Eigenvector and generalized (Bonacich-style) centrality on graphs and
//! hypergraphs.
//!
//! For a graph with adjacency `A` the generalized centrality is
//! `c(α, β) = α (I − βA)⁻¹ A 1`. For a hypergraph with weights `W`, node and
//! edge centralities solve the coupled system
//!
//! ```text
//! x = α₁ W 1 + β₁ W y
//! y = α₂ Wᵀ 1 + β₂ Wᵀ x
//! ```
//!
//! so that `x = (I − β₁β₂ WWᵀ)⁻¹ W (α₁ 1 + β₁ α₂ Wᵀ 1)`. Directed hypergraphs
//! use `Zᵀ` in place of `Wᵀ`. Every computation goes through one resolvent
//! kernel, which either factorizes `I − βA` or sums the Neumann series
//! `Σ (βA)ᵏ`, and refuses `β` values at a pole `1/λ`.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::hypercore::{DirectedHypergraph, Hypergraph};
use crate::spectral::{self, PoleCheck};

/// Series stops once a term's ∞-norm drops below this.
pub const SERIES_TOLERANCE: f64 = 1e-12;
pub const SERIES_MAX_TERMS: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Method {
    #[default]
    Solve,
    Series,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CentralityMethod {
    DirectSolve,
    NeumannSeries,
    Eigenvector,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GraphCentralityParams {
    pub alpha: f64,
    pub beta: f64,
}

impl Default for GraphCentralityParams {
    fn default() -> Self {
        Self { alpha: 1.0, beta: 0.5 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HyperCentralityParams {
    pub alpha1: f64,
    pub alpha2: f64,
    /// Chance an edge passes a message on to its members.
    pub beta1: f64,
    /// Chance a node passes a message on to its edges.
    pub beta2: f64,
}

impl Default for HyperCentralityParams {
    fn default() -> Self {
        Self {
            alpha1: 1.0,
            alpha2: 1.0,
            beta1: 1.0,
            beta2: 0.5,
        }
    }
}

impl HyperCentralityParams {
    /// The attenuation of one node → edge → node round trip.
    pub fn product(&self) -> f64 {
        self.beta1 * self.beta2
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct CentralityMeta {
    pub lambda_max: Option<f64>,
    pub series_terms: Option<usize>,
    /// ∞-norm residual of the linear system the scores satisfy.
    pub residual: f64,
    pub nearest_pole_distance: Option<f64>,
    /// `β λmax > 1`: the series diverges and scores may be negative.
    pub non_communicative: bool,
    /// `0 ≤ β ≤ 1` and `β λmax < 1`, so scores count expected communications.
    pub probability_interpretation: bool,
}

/// The two parts of hypergraph node centrality: communications that end at
/// hyperedges and communications that end at nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct CommunicationSplit {
    pub to_edges: DVector<f64>,
    pub to_nodes: DVector<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CentralityResult {
    pub node_scores: DVector<f64>,
    pub edge_scores: Option<DVector<f64>>,
    pub method: CentralityMethod,
    pub meta: CentralityMeta,
    pub split: Option<CommunicationSplit>,
}

pub(crate) struct Resolved {
    pub values: DMatrix<f64>,
    pub meta: CentralityMeta,
}

/// Computes `(I − βA)⁻¹ rhs` column by column.
pub(crate) fn resolvent_apply(a: &DMatrix<f64>, beta: f64, rhs: DMatrix<f64>, method: Method) -> Result<Resolved> {
    if !a.is_square() || a.nrows() != rhs.nrows() {
        return Err(Error::DimensionMismatch {
            expected: format!("square matrix matching {} rows", rhs.nrows()),
            found: format!("{:?}", a.shape()),
        });
    }
    if !beta.is_finite() {
        return Err(Error::InvalidParameter(format!("beta = {beta}")));
    }
    let symmetric = spectral::is_symmetric(a);
    if method == Method::Series && !symmetric {
        return Err(Error::NotSymmetric);
    }
    let eigenvalues = spectral::real_eigenvalues(a);
    let lambda_max = eigenvalues.iter().copied().reduce(f64::max);
    let guard: PoleCheck = spectral::pole_check_eigenvalues(beta, &eigenvalues).into_result(beta)?;

    let mut meta = CentralityMeta {
        lambda_max,
        nearest_pole_distance: Some(guard.nearest_pole_distance),
        ..Default::default()
    };
    if let Some(l) = lambda_max {
        meta.non_communicative = beta * l > 1.0;
        meta.probability_interpretation = (0.0..=1.0).contains(&beta) && beta * l < 1.0;
    }
    if meta.non_communicative {
        log::warn!(
            "beta = {beta} exceeds 1/lambda_max = {}: non-communicative regime",
            1.0 / lambda_max.unwrap_or(f64::NAN)
        );
    }

    let system = DMatrix::<f64>::identity(a.nrows(), a.nrows()) - a * beta;
    let values = if beta == 0.0 {
        rhs.clone()
    } else {
        match method {
            Method::Solve => system.clone().lu().solve(&rhs).ok_or(Error::Pole {
                beta,
                lambda: guard.nearest_eigenvalue.unwrap_or(f64::NAN),
                distance: guard.nearest_pole_distance,
            })?,
            Method::Series => {
                if beta.abs() * guard.spectral_radius >= 1.0 {
                    return Err(Error::SeriesDivergence {
                        beta,
                        lambda_max: guard.spectral_radius,
                    });
                }
                let (sum, terms) = neumann_sum(a, beta, &rhs);
                meta.series_terms = Some(terms);
                sum
            }
        }
    };
    meta.residual = (&system * &values - &rhs).amax();
    Ok(Resolved { values, meta })
}

/// `Σ (βA)ᵏ rhs` until a term's ∞-norm falls below [`SERIES_TOLERANCE`].
fn neumann_sum(a: &DMatrix<f64>, beta: f64, rhs: &DMatrix<f64>) -> (DMatrix<f64>, usize) {
    let mut term = rhs.clone();
    let mut sum = rhs.clone();
    let mut terms = 1;
    while term.amax() >= SERIES_TOLERANCE && terms < SERIES_MAX_TERMS {
        term = a * &term * beta;
        sum += &term;
        terms += 1;
    }
    (sum, terms)
}

fn ones(n: usize) -> DVector<f64> {
    DVector::from_element(n, 1.0)
}

/// Perron vector of a symmetric non-negative adjacency.
pub fn eigencentrality_graph(a: &DMatrix<f64>) -> Result<CentralityResult> {
    let (lambda, v) = spectral::perron_pair(a)?;
    let residual = (a * &v - &v * lambda).amax();
    Ok(CentralityResult {
        node_scores: v,
        edge_scores: None,
        method: CentralityMethod::Eigenvector,
        meta: CentralityMeta {
            lambda_max: Some(lambda),
            residual,
            ..Default::default()
        },
        split: None,
    })
}

/// Node scores from `W Wᵀ`, edge scores from `Wᵀ W`; both unit norm.
pub fn eigencentrality_hyper(h: &Hypergraph) -> Result<CentralityResult> {
    let w = h.weights();
    if w.iter().all(|&x| x == 0.0) {
        return Err(Error::ZeroSpectrum);
    }
    let (lambda, x) = spectral::perron_pair(&(w * w.transpose()))?;
    let (_, y) = spectral::perron_pair(&(w.transpose() * w))?;
    let residual = (w * w.transpose() * &x - &x * lambda).amax();
    Ok(CentralityResult {
        node_scores: x,
        edge_scores: Some(y),
        method: CentralityMethod::Eigenvector,
        meta: CentralityMeta {
            lambda_max: Some(lambda),
            residual,
            ..Default::default()
        },
        split: None,
    })
}

fn method_tag(method: Method) -> CentralityMethod {
    match method {
        Method::Solve => CentralityMethod::DirectSolve,
        Method::Series => CentralityMethod::NeumannSeries,
    }
}

/// `c(α, β) = α (I − βA)⁻¹ A 1`. At `β = 0` this is exactly `α · (A 1)`.
pub fn general_centrality_graph(
    a: &DMatrix<f64>,
    params: GraphCentralityParams,
    method: Method,
) -> Result<CentralityResult> {
    let rhs = (a * ones(a.ncols())) * params.alpha;
    let resolved = resolvent_apply(
        a,
        params.beta,
        DMatrix::from_column_slice(a.nrows(), 1, rhs.as_slice()),
        method,
    )?;
    Ok(CentralityResult {
        node_scores: resolved.values.column(0).into_owned(),
        edge_scores: None,
        method: method_tag(method),
        meta: resolved.meta,
        split: None,
    })
}

/// Shared path for undirected (`out = W`) and directed (`out = Z`) hypergraphs.
fn hyper_kernel(
    w: &DMatrix<f64>,
    out: &DMatrix<f64>,
    params: HyperCentralityParams,
    method: Method,
) -> Result<CentralityResult> {
    let HyperCentralityParams {
        alpha1,
        alpha2,
        beta1,
        beta2,
    } = params;
    let projection = w * out.transpose();
    let n = w.nrows();
    let mut rhs = DMatrix::zeros(n, 2);
    rhs.set_column(0, &((w * ones(w.ncols())) * alpha1));
    rhs.set_column(1, &((&projection * ones(n)) * (alpha2 * beta1)));
    let resolved = resolvent_apply(&projection, beta1 * beta2, rhs, method)?;
    let to_edges = resolved.values.column(0).into_owned();
    let to_nodes = resolved.values.column(1).into_owned();
    let x = &to_edges + &to_nodes;
    let y = out.transpose() * (ones(n) * alpha2 + &x * beta2);
    Ok(CentralityResult {
        node_scores: x,
        edge_scores: Some(y),
        method: method_tag(method),
        meta: resolved.meta,
        split: Some(CommunicationSplit { to_edges, to_nodes }),
    })
}

/// Node scores `x` and edge scores `y` of a hypergraph. The returned split
/// separates communications ending at edges from those ending at nodes.
pub fn general_centrality_hyper(
    h: &Hypergraph,
    params: HyperCentralityParams,
    method: Method,
) -> Result<CentralityResult> {
    hyper_kernel(h.weights(), h.weights(), params, method)
}

/// Directed variant: `Zᵀ` replaces `Wᵀ`. Only [`Method::Solve`] is accepted
/// unless `W Zᵀ` happens to be symmetric.
pub fn general_centrality_directed(
    d: &DirectedHypergraph,
    params: HyperCentralityParams,
    method: Method,
) -> Result<CentralityResult> {
    hyper_kernel(d.w(), d.z(), params, method)
}

/// `Sₙ v = Σ_{k ≤ n} (cA)ᵏ v` for `n = 0..=k_max`.
pub fn neumann_partial_sums(a: &DMatrix<f64>, c: f64, k_max: usize, v: &DVector<f64>) -> Vec<DVector<f64>> {
    let mut out = Vec::with_capacity(k_max + 1);
    let mut term = v.clone();
    let mut sum = v.clone();
    out.push(sum.clone());
    for _ in 0..k_max {
        term = a * &term * c;
        sum += &term;
        out.push(sum.clone());
    }
    out
}

/// Residual of `(I − cA) Sₙ v = v − (cA)ⁿ⁺¹ v` for one partial sum.
pub fn partial_sum_identity_residual(
    a: &DMatrix<f64>,
    c: f64,
    n: usize,
    v: &DVector<f64>,
    partial: &DVector<f64>,
) -> f64 {
    let mut power = v.clone();
    for _ in 0..=n {
        power = a * &power * c;
    }
    let lhs = partial - a * partial * c;
    (lhs - (v - power)).amax()
}

/// Rescales so that `Σ cᵢ² = |V|`: a node scoring 1 is average. Edge scores
/// get the same factor, which is the same as rescaling `α₁ = α₂`.
pub fn rescale_to_average(result: &CentralityResult) -> Result<CentralityResult> {
    let n = result.node_scores.len() as f64;
    let sum_sq = result.node_scores.norm_squared();
    if sum_sq == 0.0 {
        return Err(Error::ZeroVector);
    }
    let s = (n / sum_sq).sqrt();
    let mut out = result.clone();
    out.node_scores *= s;
    if let Some(y) = out.edge_scores.as_mut() {
        *y *= s;
    }
    if let Some(split) = out.split.as_mut() {
        split.to_edges *= s;
        split.to_nodes *= s;
    }
    Ok(out)
}

/// Expected number of hops of one communication, `1 + β + β² + … = 1/(1 − β)`.
pub fn expected_communication_length(beta: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&beta) {
        return Err(Error::InvalidParameter(format!(
            "expected communication length needs 0 <= beta < 1, got {beta}"
        )));
    }
    Ok(1.0 / (1.0 - beta))
}

#[derive(Debug, Clone, PartialEq)]
pub struct BalanceRow {
    pub degree: f64,
    /// `Σ A_ij c_j` over neighbours with positive centrality.
    pub positive_sum: f64,
    /// `Σ A_ij c_j` over neighbours with negative centrality.
    pub negative_sum: f64,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BalanceReport {
    pub rows: Vec<BalanceRow>,
    pub max_residual: f64,
}

/// Splits each score of a graph solve with `α = 1` into its degree part and
/// the pull of positively and negatively scored neighbours:
/// `cᵢ = dᵢ + β Σ_{N⁺} A_ij c_j + β Σ_{N⁻} A_ij c_j`.
pub fn balance_report(a: &DMatrix<f64>, beta: f64, result: &CentralityResult) -> Result<BalanceReport> {
    let c = &result.node_scores;
    if !a.is_square() || a.nrows() != c.len() {
        return Err(Error::DimensionMismatch {
            expected: format!("{} scores", a.nrows()),
            found: format!("{}", c.len()),
        });
    }
    let rows: Vec<BalanceRow> = (0..a.nrows())
        .map(|i| {
            let degree = a.row(i).sum();
            let (mut positive_sum, mut negative_sum) = (0.0, 0.0);
            for j in 0..a.ncols() {
                let contribution = a[(i, j)] * c[j];
                if c[j] > 0.0 {
                    positive_sum += contribution;
                } else if c[j] < 0.0 {
                    negative_sum += contribution;
                }
            }
            let residual = degree + beta * (positive_sum + negative_sum) - c[i];
            BalanceRow {
                degree,
                positive_sum,
                negative_sum,
                residual,
            }
        })
        .collect();
    let max_residual = rows.iter().fold(0.0f64, |m, r| m.max(r.residual.abs()));
    Ok(BalanceReport { rows, max_residual })
}
