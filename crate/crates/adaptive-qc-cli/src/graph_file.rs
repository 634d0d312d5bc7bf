//! The JSON graph file format.
//!
//! ```json
//! {"model": "M", "m": 1, "n": 1, "k": 0, "l": 0,
//!  "vertices": [{"id": "v1", "label": "M", "params": {"alpha": {"pi_num": 1, "pi_den": 4}}}],
//!  "h_wires": [{"from": {"boundary": 1}, "to": {"vertex": "v1", "port": 1}}],
//!  "v_wires": []}
//! ```
//!
//! Boundary and port indices are 1-based.

use std::collections::BTreeMap;

use adaptive_qc::dpg::{Dpg, Endpoint, Label, Vertex, Wire};
use adaptive_qc::models::{gadget, labels, semantics, Model};
use adaptive_qc::paste::{paste, GadgetDictionary};
use adaptive_qc::quantum::Angle;
use serde::{Deserialize, Serialize};

use crate::CliError;

/// An angle `(pi_num / pi_den)·π`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AngleJson {
    pub pi_num: i64,
    pub pi_den: i64,
}

/// A wire endpoint.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EndpointJson {
    Boundary { boundary: usize },
    Port { vertex: String, port: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WireJson {
    pub from: EndpointJson,
    pub to: EndpointJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexJson {
    pub id: String,
    pub label: String,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub params: BTreeMap<String, AngleJson>,
}

/// One graph together with the model its labels belong to.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphFile {
    pub model: String,
    pub m: usize,
    pub n: usize,
    pub k: usize,
    pub l: usize,
    pub vertices: Vec<VertexJson>,
    #[serde(default)]
    pub h_wires: Vec<WireJson>,
    #[serde(default)]
    pub v_wires: Vec<WireJson>,
}

fn endpoint_from(e: &EndpointJson) -> Endpoint {
    match e {
        EndpointJson::Boundary { boundary } => Endpoint::Boundary(*boundary),
        EndpointJson::Port { vertex, port } => Endpoint::port(vertex.clone(), *port),
    }
}

fn endpoint_to(e: &Endpoint) -> EndpointJson {
    match e {
        Endpoint::Boundary(i) => EndpointJson::Boundary { boundary: *i },
        Endpoint::Port { vertex, port } => EndpointJson::Port { vertex: vertex.clone(), port: *port },
    }
}

fn wires_from(ws: &[WireJson]) -> Vec<Wire> {
    ws.iter().map(|w| Wire::new(endpoint_from(&w.from), endpoint_from(&w.to))).collect()
}

fn wires_to(ws: &[Wire]) -> Vec<WireJson> {
    ws.iter().map(|w| WireJson { from: endpoint_to(&w.from), to: endpoint_to(&w.to) }).collect()
}

fn params_from(p: &BTreeMap<String, AngleJson>) -> Result<BTreeMap<String, Angle>, CliError> {
    p.iter()
        .map(|(k, a)| Ok((k.clone(), Angle::new(a.pi_num, a.pi_den)?)))
        .collect()
}

/// The gadget a non-builtin label stands for: `J` with an `alpha` parameter,
/// or any name accepted by [`gadget`].
fn gadget_for(name: &str, params: &BTreeMap<String, Angle>) -> Result<Dpg, CliError> {
    let key = match params.get(labels::ALPHA) {
        Some(a) if name == "J" => format!("J({}pi/{})", a.numerator(), a.denominator()),
        _ => name.to_string(),
    };
    Ok(gadget(&key)?.1)
}

impl GraphFile {
    /// Parses the declared model and graph, expanding gadget labels when asked,
    /// and checks that every label belongs to the model.
    pub fn to_graph(&self, expand_gadgets: bool) -> Result<(Model, Dpg), CliError> {
        let model: Model = self.model.parse()?;
        let mut dict = GadgetDictionary::new();
        let mut vertices = Vec::with_capacity(self.vertices.len());
        for v in &self.vertices {
            let params = params_from(&v.params)?;
            let label = match labels::builtin(&v.label, &params) {
                Ok(label) => label,
                Err(err) if !expand_gadgets => return Err(err.into()),
                Err(_) => {
                    let g = gadget_for(&v.label, &params)?;
                    let mut label = Label::new(v.label.clone(), g.arity());
                    for (k, a) in &params {
                        label = label.with_param(k.clone(), *a);
                    }
                    dict.insert(label.clone(), g)?;
                    label
                }
            };
            vertices.push(Vertex::new(v.id.clone(), label));
        }
        let g = Dpg::build(
            self.m,
            self.n,
            self.k,
            self.l,
            vertices,
            wires_from(&self.h_wires),
            wires_from(&self.v_wires),
        )?;
        let g = if dict.entries().is_empty() {
            g
        } else {
            let dict = dict.with_identity_for(g.labels());
            paste(&g, &dict)?
        };
        semantics(model).check_graph(&g)?;
        Ok((model, g))
    }

    /// The file of a graph.
    pub fn from_graph(model: Model, g: &Dpg) -> GraphFile {
        let vertices = g
            .vertices()
            .iter()
            .map(|v| VertexJson {
                id: v.id.clone(),
                label: v.label.name().to_string(),
                params: v
                    .label
                    .params()
                    .iter()
                    .map(|(k, a)| (k.clone(), AngleJson { pi_num: a.numerator(), pi_den: a.denominator() }))
                    .collect(),
            })
            .collect();
        GraphFile {
            model: model.name().to_string(),
            m: g.m(),
            n: g.n(),
            k: g.k(),
            l: g.l(),
            vertices,
            h_wires: wires_to(g.h_wires()),
            v_wires: wires_to(g.v_wires()),
        }
    }
}
