// SPDX-License-Identifier: Apache-2.0

//! JSON network documents and the sparse `node,edge,weight` CSV export.
//!
//! ```json
//! { "nodes": ["n1", "n2"],
//!   "edges": [ { "id": "e1",
//!                "members": [ {"node": "n1", "w": 0.1}, {"node": "n2", "w": 0.1} ],
//!                "out_members": [ {"node": "n2", "z": 0.1} ] } ] }
//! ```
//!
//! `out_members` marks a directed hypergraph. An optional top-level
//! `"kind": "graph"` marks a simple graph: every edge then has exactly two
//! members carrying the same weight, which is the link weight.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::hypercore::{DirectedHypergraph, Hypergraph};

/// Anything that can be stored in a network document.
#[derive(Debug, Clone, PartialEq)]
pub enum Network {
    Graph(Graph),
    Hyper(Hypergraph),
    Directed(DirectedHypergraph),
}

impl Network {
    pub fn node_count(&self) -> usize {
        match self {
            Network::Graph(g) => g.node_count(),
            Network::Hyper(h) => h.node_count(),
            Network::Directed(d) => d.base().node_count(),
        }
    }

    pub fn node_labels(&self) -> &[String] {
        match self {
            Network::Graph(g) => g.labels(),
            Network::Hyper(h) => h.node_labels(),
            Network::Directed(d) => d.base().node_labels(),
        }
    }

    /// Node-node adjacency: the graph itself, `W Wᵀ`, or `W Zᵀ`.
    pub fn adjacency(&self) -> DMatrix<f64> {
        match self {
            Network::Graph(g) => g.adjacency(),
            Network::Hyper(h) => h.project().adjacency,
            Network::Directed(d) => d.project().adjacency,
        }
    }

    /// The hypergraph view; a graph becomes one 2-member edge per link.
    pub fn to_hypergraph(&self) -> Hypergraph {
        match self {
            Network::Graph(g) => graph_as_hypergraph(g),
            Network::Hyper(h) => h.clone(),
            Network::Directed(d) => d.base().clone(),
        }
    }
}

pub fn graph_as_hypergraph(g: &Graph) -> Hypergraph {
    let links: Vec<_> = g.links().collect();
    let mut w = DMatrix::zeros(g.node_count(), links.len());
    for (j, &(u, v, weight)) in links.iter().enumerate() {
        w[(u, j)] = weight;
        w[(v, j)] = weight;
    }
    let edge_labels = (0..links.len()).map(|j| format!("e{j}")).collect();
    Hypergraph::with_labels(w, g.labels().to_vec(), edge_labels).expect("graph link weights are validated on insertion")
}

#[derive(Debug, Serialize, Deserialize)]
struct Document {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    kind: Option<String>,
    nodes: Vec<String>,
    edges: Vec<EdgeDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeDoc {
    id: String,
    members: Vec<MemberDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    out_members: Option<Vec<OutMemberDoc>>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MemberDoc {
    node: String,
    w: f64,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct OutMemberDoc {
    node: String,
    z: f64,
}

fn parse_err(location: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Parse {
        location: location.into(),
        message: message.into(),
    }
}

fn check_weight(value: f64, location: String) -> Result<f64> {
    if value.is_finite() && (0.0..=1.0).contains(&value) {
        Ok(value)
    } else {
        Err(parse_err(location, format!("weight {value} is outside [0, 1]")))
    }
}

pub fn from_json_str(text: &str) -> Result<Network> {
    let doc: Document = serde_json::from_str(text)
        .map_err(|e| parse_err(format!("line {} column {}", e.line(), e.column()), e.to_string()))?;
    from_document(doc)
}

fn from_document(doc: Document) -> Result<Network> {
    let mut index = HashMap::with_capacity(doc.nodes.len());
    for (i, id) in doc.nodes.iter().enumerate() {
        if index.insert(id.clone(), i).is_some() {
            return Err(parse_err(format!("nodes[{i}]"), format!("duplicate node id {id:?}")));
        }
    }
    let lookup = |id: &str, location: &str| {
        index
            .get(id)
            .copied()
            .ok_or_else(|| parse_err(location, format!("unknown node {id:?}")))
    };

    let n = doc.nodes.len();
    let m = doc.edges.len();
    let mut w = DMatrix::zeros(n, m);
    let mut z = DMatrix::zeros(n, m);
    let mut directed = false;
    for (j, edge) in doc.edges.iter().enumerate() {
        for (k, member) in edge.members.iter().enumerate() {
            let loc = format!("edges[{j}].members[{k}]");
            let i = lookup(&member.node, &loc)?;
            if w[(i, j)] != 0.0 {
                return Err(parse_err(loc, format!("node {:?} listed twice", member.node)));
            }
            w[(i, j)] = check_weight(member.w, format!("{loc}.w"))?;
        }
        if let Some(outs) = &edge.out_members {
            directed = true;
            for (k, member) in outs.iter().enumerate() {
                let loc = format!("edges[{j}].out_members[{k}]");
                let i = lookup(&member.node, &loc)?;
                if z[(i, j)] != 0.0 {
                    return Err(parse_err(loc, format!("node {:?} listed twice", member.node)));
                }
                z[(i, j)] = check_weight(member.z, format!("{loc}.z"))?;
            }
        }
    }

    match doc.kind.as_deref() {
        None | Some("hypergraph") => {}
        Some("graph") => {
            if directed {
                return Err(parse_err("kind", "a graph document cannot have out_members"));
            }
            let mut g = Graph::with_labels(doc.nodes.clone());
            for (j, edge) in doc.edges.iter().enumerate() {
                let loc = format!("edges[{j}]");
                let [a, b] = edge.members.as_slice() else {
                    return Err(parse_err(loc, "a graph link needs exactly two members"));
                };
                if a.w != b.w {
                    return Err(parse_err(loc, "both ends of a graph link need the same weight"));
                }
                let (u, v) = (lookup(&a.node, &loc)?, lookup(&b.node, &loc)?);
                if !g.add_link(u, v, a.w) {
                    return Err(parse_err(loc, "duplicate or self link"));
                }
            }
            return Ok(Network::Graph(g));
        }
        Some(other) => return Err(parse_err("kind", format!("unknown kind {other:?}"))),
    }

    let edge_labels = doc.edges.into_iter().map(|e| e.id).collect();
    let h = Hypergraph::with_labels(w, doc.nodes, edge_labels)?;
    if directed {
        Ok(Network::Directed(DirectedHypergraph::new(h, z)?))
    } else {
        Ok(Network::Hyper(h))
    }
}

fn members_of(w: &DMatrix<f64>, labels: &[String], j: usize) -> Vec<MemberDoc> {
    (0..w.nrows())
        .filter(|&i| w[(i, j)] != 0.0)
        .map(|i| MemberDoc {
            node: labels[i].clone(),
            w: w[(i, j)],
        })
        .collect()
}

fn to_document(net: &Network) -> Document {
    match net {
        Network::Graph(g) => Document {
            kind: Some("graph".into()),
            nodes: g.labels().to_vec(),
            edges: g
                .links()
                .enumerate()
                .map(|(j, (u, v, w))| EdgeDoc {
                    id: format!("e{j}"),
                    members: vec![
                        MemberDoc {
                            node: g.labels()[u].clone(),
                            w,
                        },
                        MemberDoc {
                            node: g.labels()[v].clone(),
                            w,
                        },
                    ],
                    out_members: None,
                })
                .collect(),
        },
        Network::Hyper(h) => Document {
            kind: None,
            nodes: h.node_labels().to_vec(),
            edges: (0..h.edge_count())
                .map(|j| EdgeDoc {
                    id: h.edge_labels()[j].clone(),
                    members: members_of(h.weights(), h.node_labels(), j),
                    out_members: None,
                })
                .collect(),
        },
        Network::Directed(d) => {
            let h = d.base();
            Document {
                kind: None,
                nodes: h.node_labels().to_vec(),
                edges: (0..h.edge_count())
                    .map(|j| EdgeDoc {
                        id: h.edge_labels()[j].clone(),
                        members: members_of(h.weights(), h.node_labels(), j),
                        out_members: Some(
                            members_of(d.z(), h.node_labels(), j)
                                .into_iter()
                                .map(|m| OutMemberDoc { node: m.node, z: m.w })
                                .collect(),
                        ),
                    })
                    .collect(),
            }
        }
    }
}

pub fn to_json_string(net: &Network) -> String {
    let mut s = serde_json::to_string_pretty(&to_document(net)).expect("document serializes");
    s.push('\n');
    s
}

pub fn load_network(path: impl AsRef<Path>) -> Result<Network> {
    let mut text = String::new();
    BufReader::new(File::open(path)?).read_to_string(&mut text)?;
    from_json_str(&text)
}

pub fn save_network(net: &Network, path: impl AsRef<Path>) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    out.write_all(to_json_string(net).as_bytes())?;
    out.flush()?;
    Ok(())
}

/// Loads any document as an undirected hypergraph (see [`Network::to_hypergraph`]).
pub fn load(path: impl AsRef<Path>) -> Result<Hypergraph> {
    Ok(load_network(path)?.to_hypergraph())
}

pub fn save(h: &Hypergraph, path: impl AsRef<Path>) -> Result<()> {
    save_network(&Network::Hyper(h.clone()), path)
}

/// Decimal rendering with at most 12 significant digits.
pub fn format_number(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { "0".into() } else { x.to_string() };
    }
    let rounded: f64 = format!("{x:.11e}").parse().expect("formatted float parses");
    rounded.to_string()
}

/// Writes one `node,edge,weight` row per nonzero entry of `W`.
pub fn write_matrix_csv<W: Write>(h: &Hypergraph, out: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(out);
    let to_io = |e: csv::Error| Error::Io(e.into());
    wtr.write_record(["node", "edge", "weight"]).map_err(to_io)?;
    for j in 0..h.edge_count() {
        for i in 0..h.node_count() {
            let w = h.weight(i, j);
            if w != 0.0 {
                wtr.write_record([
                    h.node_labels()[i].as_str(),
                    h.edge_labels()[j].as_str(),
                    &format_number(w),
                ])
                .map_err(to_io)?;
            }
        }
    }
    wtr.flush()?;
    Ok(())
}

/// Reads the `node,edge,weight` export. Nodes and edges are numbered in
/// order of first appearance, so isolated nodes and empty edges are lost.
pub fn read_matrix_csv<R: Read>(input: R) -> Result<Hypergraph> {
    let mut rdr = csv::Reader::from_reader(input);
    let header = rdr.headers().map_err(|e| parse_err("line 1", e.to_string()))?.clone();
    if header.iter().collect::<Vec<_>>() != ["node", "edge", "weight"] {
        return Err(parse_err("line 1", "expected header node,edge,weight"));
    }
    let mut nodes: Vec<String> = Vec::new();
    let mut edges: Vec<String> = Vec::new();
    let mut node_ix = HashMap::new();
    let mut edge_ix = HashMap::new();
    let mut entries = Vec::new();
    for (row, record) in rdr.records().enumerate() {
        let line = row + 2;
        let record = record.map_err(|e| parse_err(format!("line {line}"), e.to_string()))?;
        if record.len() != 3 {
            return Err(parse_err(format!("line {line}"), "expected 3 fields"));
        }
        let i = *node_ix.entry(record[0].to_string()).or_insert_with(|| {
            nodes.push(record[0].to_string());
            nodes.len() - 1
        });
        let j = *edge_ix.entry(record[1].to_string()).or_insert_with(|| {
            edges.push(record[1].to_string());
            edges.len() - 1
        });
        let w: f64 = record[2]
            .parse()
            .map_err(|_| parse_err(format!("line {line}, field weight"), "not a number"))?;
        entries.push((i, j, check_weight(w, format!("line {line}, field weight"))?));
    }
    let mut w = DMatrix::zeros(nodes.len(), edges.len());
    for (i, j, value) in entries {
        w[(i, j)] = value;
    }
    Hypergraph::with_labels(w, nodes, edges)
}
