// SPDX-License-Identifier: Apache-2.0

//! Command-line front end.
//!
//! [`run`] parses the arguments, executes one subcommand and returns the
//! process exit code: 0 on success, 1 on a usage error, 2 on a domain error.
//! Domain errors print a single `error_code=...` line on stderr.
//!
//! Every run that writes files also writes a manifest next to the first one
//! (`<output>.manifest.json`). `replay --manifest <file>` re-executes the
//! recorded arguments and checks each output against its recorded digest.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use log::{info, warn, LevelFilter};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::adapt::{
    delta_update_in_place, fitness_report, punish_in_place, Challenge, LearningConfig, LinearContraction,
    MutationModel, ProcessingFunction,
};
use crate::centrality::{
    eigencentrality_graph, eigencentrality_hyper, general_centrality_directed, general_centrality_graph,
    general_centrality_hyper, rescale_to_average, CentralityResult, GraphCentralityParams, HyperCentralityParams,
    Method,
};
use crate::error::{Error, Result};
use crate::io::{self, format_number, Network};
use crate::netgen::{self, GenConfig, GrowthEvent, GrowthMode, Preference, StartMode, TopologyReport};
use crate::propagation::{simulate_graph, simulate_hyper, PropagationConfig};
use crate::spectral;

#[derive(Parser, Debug)]
#[command(
    name = "hypercen",
    version,
    about = "Centrality and communication on graphs and hypergraphs"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    /// Grow a network by preferential attachment.
    Gen(GenArgs),
    /// Generalized or eigenvector centrality of every node (and edge).
    Centrality(CentralityArgs),
    /// Largest eigenvalue, Perron vector, spectrum and pole check.
    Spectrum(SpectrumArgs),
    /// Monte-Carlo communication counts.
    Simulate(SimulateArgs),
    /// Run a seeded learning demo on a hypergraph.
    Learn(LearnArgs),
    /// Degree histogram, centrality and cluster coefficients, power-law fit.
    Analyze(AnalyzeArgs),
    /// Node-node projection or bipartite links of a network.
    Project(ProjectArgs),
    /// Convert between JSON documents and node,edge,weight CSV.
    Convert(ConvertArgs),
    /// Re-run a recorded invocation and verify its outputs.
    Replay(ReplayArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeArg {
    Graph,
    Hyper,
}

#[derive(ValueEnum, Clone, Copy, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum StartArg {
    New,
    Random,
    #[value(name = "prefdegree")]
    PrefDegree,
}

#[derive(ValueEnum, Clone, Copy, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PrefArg {
    Degree,
    Centrality,
    #[value(name = "localcentrality")]
    LocalCentrality,
    Cluster,
}

#[derive(ValueEnum, Clone, Copy, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MethodArg {
    Solve,
    Series,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Solve => Method::Solve,
            MethodArg::Series => Method::Series,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FormatArg {
    Json,
    Csv,
}

#[derive(Args, Debug, Serialize)]
pub struct ManifestArgs {
    /// Where to write the run manifest [default: <first output>.manifest.json]
    #[arg(long)]
    pub manifest: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
pub struct GenArgs {
    #[arg(long, value_enum, default_value_t = ModeArg::Graph)]
    pub mode: ModeArg,
    #[arg(long, value_enum, default_value_t = StartArg::New)]
    pub start: StartArg,
    #[arg(long, value_enum, default_value_t = PrefArg::Degree)]
    pub pref: PrefArg,
    #[arg(long, default_value_t = 100)]
    pub iters: usize,
    /// Links per step.
    #[arg(long, default_value_t = 1)]
    pub m: usize,
    #[arg(long, default_value_t = 0.1)]
    pub weight: f64,
    #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
    pub beta: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Hypergraph mode: chance of joining an existing hyperedge.
    #[arg(long, default_value_t = 0.5)]
    pub p_join: f64,
    /// Network JSON; stdout when absent or `-`.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// CSV with node,degree,centrality,cluster_coeff.
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// CSV log of fallback and saturation events.
    #[arg(long)]
    pub events: Option<PathBuf>,
    #[command(flatten)]
    pub manifest: ManifestArgs,
}

#[derive(Args, Debug, Serialize)]
pub struct CentralityArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Graph inputs: α.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub alpha: f64,
    /// Graph inputs: β.
    #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
    pub beta: f64,
    /// Hypergraph inputs: α₁.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub alpha1: f64,
    /// Hypergraph inputs: α₂.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub alpha2: f64,
    /// Hypergraph inputs: β₁, the edge pass chance.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub beta1: f64,
    /// Hypergraph inputs: β₂, the node pass chance.
    #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
    pub beta2: f64,
    #[arg(long, value_enum, default_value_t = MethodArg::Solve)]
    pub method: MethodArg,
    /// Eigenvector centrality instead of the generalized one.
    #[arg(long, default_value_t = false)]
    pub eigen: bool,
    /// Rescale node scores to average 1.
    #[arg(long, default_value_t = false)]
    pub rescale: bool,
    /// CSV with id,kind,score; stdout when absent or `-`.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[command(flatten)]
    pub manifest: ManifestArgs,
}

#[derive(Args, Debug, Serialize)]
pub struct SpectrumArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Include every eigenvalue.
    #[arg(long, default_value_t = false)]
    pub full: bool,
    /// Report whether this β is a pole.
    #[arg(long, allow_negative_numbers = true)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[command(flatten)]
    pub manifest: ManifestArgs,
}

#[derive(Args, Debug, Serialize)]
pub struct SimulateArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Node pass chance β₂ (the only one on graphs).
    #[arg(long, visible_alias = "beta", default_value_t = 0.5)]
    pub beta2: f64,
    /// Edge pass chance β₁.
    #[arg(long, default_value_t = 1.0)]
    pub beta1: f64,
    #[arg(long, default_value_t = 10_000)]
    pub walks: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 64)]
    pub max_hops: usize,
    /// Worker threads [default: all cores]. Results do not depend on it.
    #[arg(long)]
    #[serde(skip)]
    pub threads: Option<usize>,
    /// CSV with id,estimate,stderr,mean_chain_length.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[command(flatten)]
    pub manifest: ManifestArgs,
}

#[derive(Args, Debug, Serialize)]
pub struct LearnArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, default_value_t = 100)]
    pub steps: usize,
    #[arg(long, default_value_t = 0.1)]
    pub rate: f64,
    #[arg(long, default_value_t = 0.01)]
    pub punishment: f64,
    /// Every node relaxes a challenge `c` to `kappa * c`.
    #[arg(long, default_value_t = 0.5)]
    pub kappa: f64,
    /// Challenge dimension.
    #[arg(long, default_value_t = 4)]
    pub dim: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Updated hypergraph JSON.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// CSV with edge,fitness,mutation_rate,samples.
    #[arg(long)]
    pub fitness: Option<PathBuf>,
    #[command(flatten)]
    pub manifest: ManifestArgs,
}

#[derive(Args, Debug, Serialize)]
pub struct AnalyzeArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
    pub beta: f64,
    /// CSV with node,degree,centrality,cluster_coeff.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// CSV with degree,count.
    #[arg(long)]
    pub histogram: Option<PathBuf>,
    /// JSON with the power-law fit and λmax.
    #[arg(long)]
    pub summary: Option<PathBuf>,
    /// CSV with node,degree,beta,centrality for β = 0, 0.1, ..., 1.
    #[arg(long)]
    pub sweep: Option<PathBuf>,
    #[command(flatten)]
    pub manifest: ManifestArgs,
}

#[derive(Args, Debug, Serialize)]
pub struct ProjectArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Emit node,edge,weight bipartite links instead of the projection.
    #[arg(long, default_value_t = false)]
    pub bipartite: bool,
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[command(flatten)]
    pub manifest: ManifestArgs,
}

#[derive(Args, Debug, Serialize)]
pub struct ConvertArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub output: PathBuf,
    /// Output format [default: from the output extension].
    #[arg(long, value_enum)]
    pub to: Option<FormatArg>,
    #[command(flatten)]
    pub manifest: ManifestArgs,
}

#[derive(Args, Debug, Serialize)]
pub struct ReplayArgs {
    #[arg(long)]
    pub manifest: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileDigest {
    pub path: String,
    pub sha256: String,
}

/// Everything needed to repeat a run. No timestamps, so identical runs
/// produce identical manifests.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub subcommand: String,
    pub argv: Vec<String>,
    pub flags: serde_json::Value,
    pub seeds: Vec<u64>,
    pub inputs: Vec<FileDigest>,
    pub outputs: Vec<FileDigest>,
}

#[derive(Debug, Default)]
struct Record {
    inputs: Vec<PathBuf>,
    outputs: Vec<PathBuf>,
    seeds: Vec<u64>,
}

impl Record {
    fn read(&mut self, path: &Path) -> Result<Network> {
        self.inputs.push(path.to_path_buf());
        load_input(path)
    }

    fn write(&mut self, path: Option<&Path>, bytes: &[u8]) -> Result<()> {
        match path {
            Some(p) if p != Path::new("-") => {
                fs::write(p, bytes)?;
                self.outputs.push(p.to_path_buf());
            }
            _ => std::io::stdout().lock().write_all(bytes)?,
        }
        Ok(())
    }
}

fn is_csv(path: &Path) -> bool {
    path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv"))
}

fn load_input(path: &Path) -> Result<Network> {
    if is_csv(path) {
        Ok(Network::Hyper(io::read_matrix_csv(fs::File::open(path)?)?))
    } else {
        io::load_network(path)
    }
}

fn csv_bytes(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<Vec<u8>> {
    let to_io = |e: csv::Error| Error::Io(e.into());
    let mut wtr = csv::Writer::from_writer(Vec::new());
    wtr.write_record(header).map_err(to_io)?;
    for row in rows {
        wtr.write_record(&row).map_err(to_io)?;
    }
    wtr.into_inner().map_err(|e| Error::Io(e.into_error()))
}

fn json_bytes<T: Serialize>(value: &T) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(value).expect("serializable");
    out.push(b'\n');
    out
}

fn digest_file(path: &Path) -> Result<FileDigest> {
    let bytes = fs::read(path)?;
    Ok(FileDigest {
        path: path.to_string_lossy().into_owned(),
        sha256: format!("{:x}", Sha256::digest(&bytes)),
    })
}

fn report_rows(network: &Network, report: &TopologyReport) -> Vec<Vec<String>> {
    (0..report.degrees.len())
        .map(|i| {
            vec![
                network.node_labels()[i].clone(),
                report.degrees[i].to_string(),
                report
                    .centrality
                    .as_ref()
                    .map(|c| format_number(c[i]))
                    .unwrap_or_default(),
                format_number(report.cluster[i]),
            ]
        })
        .collect()
}

const REPORT_HEADER: [&str; 4] = ["node", "degree", "centrality", "cluster_coeff"];

fn cmd_gen(a: &GenArgs, rec: &mut Record) -> Result<()> {
    let config = GenConfig {
        start: match a.start {
            StartArg::New => StartMode::New,
            StartArg::Random => StartMode::Random,
            StartArg::PrefDegree => StartMode::PreferentialByDegree,
        },
        preference: match a.pref {
            PrefArg::Degree => Preference::Degree,
            PrefArg::Centrality => Preference::Centrality,
            PrefArg::LocalCentrality => Preference::LocalCentrality,
            PrefArg::Cluster => Preference::ClusterCoefficient,
        },
        iterations: a.iters,
        links_per_step: a.m,
        edge_weight: a.weight,
        beta: a.beta,
        seed: a.seed,
        mode: match a.mode {
            ModeArg::Graph => GrowthMode::Graph,
            ModeArg::Hyper => GrowthMode::Hypergraph,
        },
        p_join: a.p_join,
    };
    rec.seeds.push(a.seed);
    let growth = netgen::grow(&config)?;
    info!(
        "grew {} nodes, {} attachments, {} events",
        growth.network.node_count(),
        growth.attachments.len(),
        growth.events.len()
    );
    rec.write(a.output.as_deref(), io::to_json_string(&growth.network).as_bytes())?;
    if let Some(path) = &a.report {
        let report = netgen::analyze(&growth.network, a.beta)?;
        rec.write(
            Some(path),
            &csv_bytes(&REPORT_HEADER, report_rows(&growth.network, &report))?,
        )?;
    }
    if let Some(path) = &a.events {
        let rows = growth.events.iter().map(|e| match *e {
            GrowthEvent::UniformFallback { step, candidates } => {
                vec![
                    step.to_string(),
                    "uniform_fallback".into(),
                    format!("candidates={candidates}"),
                ]
            }
            GrowthEvent::ZeroPreference {
                step,
                excluded,
                candidates,
            } => vec![
                step.to_string(),
                "zero_preference".into(),
                format!("excluded={excluded} candidates={candidates}"),
            ],
            GrowthEvent::Saturated { step, node } => {
                vec![step.to_string(), "saturated".into(), format!("node={node}")]
            }
        });
        rec.write(Some(path), &csv_bytes(&["step", "event", "detail"], rows)?)?;
    }
    Ok(())
}

fn cmd_centrality(a: &CentralityArgs, rec: &mut Record) -> Result<()> {
    let network = rec.read(&a.input)?;
    let method = Method::from(a.method);
    let hyper = HyperCentralityParams {
        alpha1: a.alpha1,
        alpha2: a.alpha2,
        beta1: a.beta1,
        beta2: a.beta2,
    };
    let mut result: CentralityResult = match (&network, a.eigen) {
        (Network::Graph(g), true) => eigencentrality_graph(&g.adjacency())?,
        (Network::Graph(g), false) => general_centrality_graph(
            &g.adjacency(),
            GraphCentralityParams {
                alpha: a.alpha,
                beta: a.beta,
            },
            method,
        )?,
        (Network::Hyper(h), true) => eigencentrality_hyper(h)?,
        (Network::Hyper(h), false) => general_centrality_hyper(h, hyper, method)?,
        (Network::Directed(d), true) => eigencentrality_graph(&d.project().adjacency)?,
        (Network::Directed(d), false) => general_centrality_directed(d, hyper, method)?,
    };
    if a.rescale {
        result = rescale_to_average(&result)?;
    }
    let mut rows: Vec<Vec<String>> = result
        .node_scores
        .iter()
        .zip(network.node_labels())
        .map(|(s, id)| vec![id.clone(), "node".into(), format_number(*s)])
        .collect();
    if let (Some(y), Network::Hyper(_) | Network::Directed(_)) = (&result.edge_scores, &network) {
        let h = network.to_hypergraph();
        rows.extend(
            y.iter()
                .zip(h.edge_labels())
                .map(|(s, id)| vec![id.clone(), "edge".into(), format_number(*s)]),
        );
    }
    rec.write(a.output.as_deref(), &csv_bytes(&["id", "kind", "score"], rows)?)
}

#[derive(Serialize)]
struct PoleReport {
    beta: f64,
    is_pole: bool,
    nearest_eigenvalue: Option<f64>,
    nearest_pole_distance: Option<f64>,
}

#[derive(Serialize)]
struct SpectrumReport {
    nodes: usize,
    symmetric: bool,
    lambda_max: f64,
    perron_vector: Option<Vec<f64>>,
    spectrum: Option<Vec<f64>>,
    pole: Option<PoleReport>,
}

fn cmd_spectrum(a: &SpectrumArgs, rec: &mut Record) -> Result<()> {
    let network = rec.read(&a.input)?;
    let adj = network.adjacency();
    let symmetric = spectral::is_symmetric(&adj);
    let mut eigenvalues = if symmetric {
        spectral::spectrum(&adj)?
    } else {
        spectral::real_eigenvalues(&adj)
    };
    eigenvalues.sort_by(|x, y| y.total_cmp(x));
    let lambda_max = netgen::network_lambda_max(&network)?;
    let perron_vector = if symmetric {
        spectral::perron_vector(&adj).ok().map(|v| v.as_slice().to_vec())
    } else {
        None
    };
    let pole = a.beta.map(|beta| {
        let check = spectral::pole_check_eigenvalues(beta, &eigenvalues);
        PoleReport {
            beta,
            is_pole: check.is_pole,
            nearest_eigenvalue: check.nearest_eigenvalue,
            nearest_pole_distance: check
                .nearest_pole_distance
                .is_finite()
                .then_some(check.nearest_pole_distance),
        }
    });
    let report = SpectrumReport {
        nodes: network.node_count(),
        symmetric,
        lambda_max,
        perron_vector,
        spectrum: a.full.then_some(eigenvalues),
        pole,
    };
    rec.write(a.output.as_deref(), &json_bytes(&report))
}

fn cmd_simulate(a: &SimulateArgs, rec: &mut Record) -> Result<()> {
    let network = rec.read(&a.input)?;
    rec.seeds.push(a.seed);
    let config = PropagationConfig {
        pass_probability_node: a.beta2,
        pass_probability_edge: a.beta1,
        walks_per_node: a.walks,
        rng_seed: a.seed,
        max_hops: a.max_hops,
        threads: a.threads,
    };
    let stats = match &network {
        Network::Graph(g) => simulate_graph(&g.adjacency(), &config)?,
        Network::Hyper(h) => simulate_hyper(h, &config)?,
        Network::Directed(_) => {
            return Err(Error::InvalidParameter("simulation needs an undirected network".into()));
        }
    };
    if stats.truncation_bound.is_none() {
        warn!(
            "pass chances reach or exceed 1/λmax; estimates are cut at {} hops",
            a.max_hops
        );
    }
    let rows = stats.nodes.iter().zip(network.node_labels()).map(|(s, id)| {
        vec![
            id.clone(),
            format_number(s.estimate.mean),
            format_number(s.estimate.stderr),
            format_number(s.mean_chain_length),
        ]
    });
    rec.write(
        a.output.as_deref(),
        &csv_bytes(&["id", "estimate", "stderr", "mean_chain_length"], rows)?,
    )
}

fn cmd_learn(a: &LearnArgs, rec: &mut Record) -> Result<()> {
    let network = rec.read(&a.input)?;
    let Network::Hyper(mut h) = network else {
        return Err(Error::InvalidParameter(
            "learning needs an undirected hypergraph document".into(),
        ));
    };
    if a.dim == 0 {
        return Err(Error::InvalidParameter("challenge dimension must be positive".into()));
    }
    rec.seeds.push(a.seed);
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let processor = LinearContraction { kappa: a.kappa };
    let config = LearningConfig {
        rate: a.rate,
        punishment: a.punishment,
    };
    let mut processed = vec![Vec::new(); h.edge_count()];
    // Each step one member of a random edge handles a challenge and is
    // rewarded; the other members were passed over and are punished.
    for _ in 0..a.steps {
        let live: Vec<usize> = (0..h.edge_count()).filter(|&j| !h.members(j).is_empty()).collect();
        if live.is_empty() {
            break;
        }
        let edge = live[rng.gen_range(0..live.len())];
        let members = h.members(edge);
        let chosen = members[rng.gen_range(0..members.len())];
        let challenge = Challenge::new((0..a.dim).map(|_| rng.gen_range(-1.0..1.0)).collect());
        delta_update_in_place(&mut h, chosen, edge, &challenge, &processor, &config)?;
        for &other in members.iter().filter(|&&k| k != chosen) {
            punish_in_place(&mut h, other, edge, &config)?;
        }
        let relaxed = processor.process(&challenge);
        processed[edge].push((challenge, relaxed));
    }
    let fitness = fitness_report(&h, &processed, &MutationModel::default())?;
    rec.write(
        a.output.as_deref(),
        io::to_json_string(&Network::Hyper(h.clone())).as_bytes(),
    )?;
    if let Some(path) = &a.fitness {
        let rows = fitness.iter().map(|f| {
            vec![
                h.edge_labels()[f.edge].clone(),
                format_number(f.fitness),
                format_number(f.mutation_rate),
                f.samples.to_string(),
            ]
        });
        rec.write(
            Some(path),
            &csv_bytes(&["edge", "fitness", "mutation_rate", "samples"], rows)?,
        )?;
    }
    Ok(())
}

#[derive(Serialize)]
struct FitSummary {
    slope: f64,
    intercept: f64,
    r_squared: f64,
    bins: Vec<(usize, usize, usize)>,
}

#[derive(Serialize)]
struct AnalyzeSummary {
    nodes: usize,
    beta: f64,
    lambda_max: f64,
    max_degree: usize,
    median_degree: f64,
    centrality_note: Option<String>,
    fit: Option<FitSummary>,
}

fn cmd_analyze(a: &AnalyzeArgs, rec: &mut Record) -> Result<()> {
    let network = rec.read(&a.input)?;
    let report = netgen::analyze(&network, a.beta)?;
    rec.write(
        a.output.as_deref(),
        &csv_bytes(&REPORT_HEADER, report_rows(&network, &report))?,
    )?;
    if let Some(path) = &a.histogram {
        let rows = report.histogram.iter().map(|(d, c)| vec![d.to_string(), c.to_string()]);
        rec.write(Some(path), &csv_bytes(&["degree", "count"], rows)?)?;
    }
    if let Some(path) = &a.summary {
        let summary = AnalyzeSummary {
            nodes: network.node_count(),
            beta: a.beta,
            lambda_max: report.lambda_max,
            max_degree: report.max_degree(),
            median_degree: report.median_degree(),
            centrality_note: report.centrality_note.clone(),
            fit: report.fit.as_ref().map(|f| FitSummary {
                slope: f.slope,
                intercept: f.intercept,
                r_squared: f.r_squared,
                bins: f.bins.iter().map(|b| (b.lo, b.hi, b.count)).collect(),
            }),
        };
        rec.write(Some(path), &json_bytes(&summary))?;
    }
    if let Some(path) = &a.sweep {
        let sweep = netgen::beta_sweep(&network, &netgen::default_sweep_betas())?;
        let mut rows = Vec::new();
        for row in &sweep {
            for (i, &d) in report.degrees.iter().enumerate() {
                rows.push(vec![
                    network.node_labels()[i].clone(),
                    d.to_string(),
                    format_number(row.beta),
                    row.centrality.as_ref().map(|c| format_number(c[i])).unwrap_or_default(),
                ]);
            }
        }
        rec.write(Some(path), &csv_bytes(&["node", "degree", "beta", "centrality"], rows)?)?;
    }
    Ok(())
}

fn cmd_project(a: &ProjectArgs, rec: &mut Record) -> Result<()> {
    let network = rec.read(&a.input)?;
    let bytes = if a.bipartite {
        let h = network.to_hypergraph();
        let b = h.to_bipartite();
        let rows = b
            .links()
            .into_iter()
            .map(|(i, j, w)| vec![b.left_labels[i].clone(), b.right_labels[j].clone(), format_number(w)]);
        csv_bytes(&["node", "edge", "weight"], rows)?
    } else {
        let adj = network.adjacency();
        let labels = network.node_labels();
        let mut rows = Vec::new();
        for i in 0..adj.nrows() {
            for j in 0..adj.ncols() {
                if adj[(i, j)] != 0.0 {
                    rows.push(vec![labels[i].clone(), labels[j].clone(), format_number(adj[(i, j)])]);
                }
            }
        }
        csv_bytes(&["source", "target", "weight"], rows)?
    };
    rec.write(a.output.as_deref(), &bytes)
}

fn cmd_convert(a: &ConvertArgs, rec: &mut Record) -> Result<()> {
    let network = rec.read(&a.input)?;
    let to_csv = match a.to {
        Some(FormatArg::Csv) => true,
        Some(FormatArg::Json) => false,
        None => is_csv(&a.output),
    };
    let bytes = if to_csv {
        let mut out = Vec::new();
        io::write_matrix_csv(&network.to_hypergraph(), &mut out)?;
        out
    } else {
        io::to_json_string(&network).into_bytes()
    };
    rec.write(Some(&a.output), &bytes)
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Gen(_) => "gen",
            Command::Centrality(_) => "centrality",
            Command::Spectrum(_) => "spectrum",
            Command::Simulate(_) => "simulate",
            Command::Learn(_) => "learn",
            Command::Analyze(_) => "analyze",
            Command::Project(_) => "project",
            Command::Convert(_) => "convert",
            Command::Replay(_) => "replay",
        }
    }

    fn manifest_path(&self) -> Option<&Path> {
        match self {
            Command::Gen(a) => a.manifest.manifest.as_deref(),
            Command::Centrality(a) => a.manifest.manifest.as_deref(),
            Command::Spectrum(a) => a.manifest.manifest.as_deref(),
            Command::Simulate(a) => a.manifest.manifest.as_deref(),
            Command::Learn(a) => a.manifest.manifest.as_deref(),
            Command::Analyze(a) => a.manifest.manifest.as_deref(),
            Command::Project(a) => a.manifest.manifest.as_deref(),
            Command::Convert(a) => a.manifest.manifest.as_deref(),
            Command::Replay(_) => None,
        }
    }
}

fn execute(command: &Command, rec: &mut Record) -> Result<()> {
    match command {
        Command::Gen(a) => cmd_gen(a, rec),
        Command::Centrality(a) => cmd_centrality(a, rec),
        Command::Spectrum(a) => cmd_spectrum(a, rec),
        Command::Simulate(a) => cmd_simulate(a, rec),
        Command::Learn(a) => cmd_learn(a, rec),
        Command::Analyze(a) => cmd_analyze(a, rec),
        Command::Project(a) => cmd_project(a, rec),
        Command::Convert(a) => cmd_convert(a, rec),
        Command::Replay(a) => replay(&a.manifest),
    }
}

fn build_manifest(command: &Command, argv: &[String], rec: &Record) -> Result<RunManifest> {
    Ok(RunManifest {
        tool: env!("CARGO_PKG_NAME").into(),
        version: env!("CARGO_PKG_VERSION").into(),
        subcommand: command.name().into(),
        argv: argv.to_vec(),
        flags: serde_json::to_value(command).expect("serializable flags"),
        seeds: rec.seeds.clone(),
        inputs: rec.inputs.iter().map(|p| digest_file(p)).collect::<Result<_>>()?,
        outputs: rec.outputs.iter().map(|p| digest_file(p)).collect::<Result<_>>()?,
    })
}

/// Re-executes the recorded arguments from the current directory and checks
/// inputs and outputs against their recorded digests.
pub fn replay(manifest_path: &Path) -> Result<()> {
    let text = fs::read_to_string(manifest_path)?;
    let manifest: RunManifest = serde_json::from_str(&text).map_err(|e| Error::Parse {
        location: format!("line {} column {}", e.line(), e.column()),
        message: e.to_string(),
    })?;
    for input in &manifest.inputs {
        if digest_file(Path::new(&input.path))? != *input {
            return Err(Error::ReplayMismatch {
                path: input.path.clone(),
            });
        }
    }
    let argv = std::iter::once("hypercen".to_string()).chain(manifest.argv.iter().cloned());
    let cli = Cli::try_parse_from(argv).map_err(|e| Error::InvalidParameter(e.to_string()))?;
    if matches!(cli.command, Command::Replay(_)) {
        return Err(Error::InvalidParameter("a manifest cannot record a replay".into()));
    }
    let mut rec = Record::default();
    execute(&cli.command, &mut rec)?;
    let produced: Vec<FileDigest> = rec.outputs.iter().map(|p| digest_file(p)).collect::<Result<_>>()?;
    for expected in &manifest.outputs {
        if !produced.contains(expected) {
            return Err(Error::ReplayMismatch {
                path: expected.path.clone(),
            });
        }
    }
    info!(
        "replayed {}: {} outputs identical",
        manifest.subcommand,
        manifest.outputs.len()
    );
    Ok(())
}

fn detail(e: &Error) -> String {
    match e {
        Error::Pole { beta, lambda, distance } => format!("beta={beta} lambda={lambda} distance={distance:e}"),
        Error::SeriesDivergence { beta, lambda_max } => format!("beta={beta} lambda={lambda_max}"),
        Error::Parse { location, message } => format!("location={location:?} message={message:?}"),
        Error::AtStep { step, source } => format!("step={step} {}", detail(source)),
        Error::ReplayMismatch { path } => format!("path={path:?}"),
        other => format!("message={:?}", other.to_string()),
    }
}

/// The machine-readable line printed on stderr for a domain error.
pub fn error_line(e: &Error) -> String {
    format!("error_code={} {}", e.code(), detail(e))
}

fn init_logging() {
    let level = match std::env::var("HYPERCEN_LOG").as_deref() {
        Ok("quiet") => LevelFilter::Off,
        Ok("info") => LevelFilter::Info,
        Ok("debug") => LevelFilter::Debug,
        _ => LevelFilter::Warn,
    };
    let _ = env_logger::Builder::new()
        .filter_level(level)
        .format_timestamp(None)
        .try_init();
}

/// Runs one invocation; `args` includes the program name.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    init_logging();
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
        }
    };
    let argv: Vec<String> = args.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    let mut rec = Record::default();
    let outcome = execute(&cli.command, &mut rec).and_then(|()| {
        let target = match cli.command.manifest_path() {
            Some(p) => Some(p.to_path_buf()),
            None => rec.outputs.first().map(|p| {
                let mut name = p.clone().into_os_string();
                name.push(".manifest.json");
                PathBuf::from(name)
            }),
        };
        match target {
            Some(path) if !matches!(cli.command, Command::Replay(_)) => {
                let manifest = build_manifest(&cli.command, &argv, &rec)?;
                fs::write(path, json_bytes(&manifest))?;
                Ok(())
            }
            _ => Ok(()),
        }
    });
    match outcome {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("{}", error_line(&e));
            2
        }
    }
}
