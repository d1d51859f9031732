//! JSON form of a diagram.
//!
//! ```json
//! {
//!   "types": {"n": true},
//!   "nodes": [{"id": 0, "kind": "cup", "dom": [], "cod": ["n.L", "n"]}],
//!   "edges": [["in", 0, 0, 0], [0, 1, "out", 0]],
//!   "inputs": ["n"],
//!   "outputs": ["n"]
//! }
//! ```
//!
//! Edges are `[from-node, from-port, to-node, to-port]`; the open boundary is
//! written as the node `"in"` (as a source) or `"out"` (as a destination).

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::{Diagram, DiagramError, Dst, Edge, Generator, GeneratorKind, PayloadMode, Src};
use crate::types::TypeList;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagramJson {
    pub types: BTreeMap<String, bool>,
    pub nodes: Vec<NodeJson>,
    pub edges: Vec<(EndJson, usize, EndJson, usize)>,
    pub inputs: TypeList,
    pub outputs: TypeList,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeJson {
    pub id: usize,
    pub kind: GeneratorKind,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub name: String,
    pub dom: TypeList,
    pub cod: TypeList,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub payload: Option<String>,
    #[serde(default, skip_serializing_if = "is_pure")]
    pub mode: PayloadMode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub arity: Option<(usize, usize)>,
}

fn is_pure(m: &PayloadMode) -> bool {
    *m == PayloadMode::Pure
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EndJson {
    Node(usize),
    Boundary(String),
}

impl Diagram {
    pub fn to_json_value(&self) -> DiagramJson {
        DiagramJson {
            types: self.types.iter().map(|b| (b.clone(), true)).collect(),
            nodes: self
                .nodes
                .iter()
                .enumerate()
                .map(|(id, g)| NodeJson {
                    id,
                    kind: g.kind,
                    name: g.name.clone(),
                    dom: g.dom.clone(),
                    cod: g.cod.clone(),
                    payload: g.payload.clone(),
                    mode: g.mode,
                    arity: g.is(GeneratorKind::Spider).then(|| g.arity()),
                })
                .collect(),
            edges: self
                .edges
                .iter()
                .map(|e| {
                    let (a, p) = match e.src {
                        Src::Input(i) => (EndJson::Boundary("in".into()), i),
                        Src::Node(n, p) => (EndJson::Node(n), p),
                    };
                    let (b, q) = match e.dst {
                        Dst::Output(j) => (EndJson::Boundary("out".into()), j),
                        Dst::Node(n, q) => (EndJson::Node(n), q),
                    };
                    (a, p, b, q)
                })
                .collect(),
            inputs: self.inputs.clone(),
            outputs: self.outputs.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_value()).expect("diagram serializes")
    }

    /// Reads a diagram without validating it.
    pub fn from_json_value_unchecked(j: &DiagramJson) -> Result<Diagram, DiagramError> {
        let mut index = HashMap::new();
        for (k, node) in j.nodes.iter().enumerate() {
            if index.insert(node.id, k).is_some() {
                return Err(DiagramError::Json(format!("duplicate node id {}", node.id)));
            }
            if let (GeneratorKind::Spider, Some((a, b))) = (node.kind, node.arity) {
                if (a, b) != (node.dom.len(), node.cod.len()) {
                    return Err(DiagramError::Json(format!(
                        "spider {} arity disagrees with its ports",
                        node.id
                    )));
                }
            }
        }
        let node_of = |id: usize| {
            index
                .get(&id)
                .copied()
                .ok_or_else(|| DiagramError::Json(format!("edge refers to unknown node {id}")))
        };
        let nodes = j
            .nodes
            .iter()
            .map(|n| {
                Generator::from_raw(
                    n.kind,
                    n.name.clone(),
                    n.dom.clone(),
                    n.cod.clone(),
                    n.payload.clone(),
                    n.mode,
                )
            })
            .collect();
        let mut edges = Vec::with_capacity(j.edges.len());
        for (a, p, b, q) in &j.edges {
            let src = match a {
                EndJson::Boundary(s) if s == "in" => Src::Input(*p),
                EndJson::Node(n) => Src::Node(node_of(*n)?, *p),
                EndJson::Boundary(s) => {
                    return Err(DiagramError::Json(format!("bad edge source `{s}`")))
                }
            };
            let dst = match b {
                EndJson::Boundary(s) if s == "out" => Dst::Output(*q),
                EndJson::Node(n) => Dst::Node(node_of(*n)?, *q),
                EndJson::Boundary(s) => {
                    return Err(DiagramError::Json(format!("bad edge target `{s}`")))
                }
            };
            edges.push(Edge::new(src, dst));
        }
        let types = j
            .types
            .iter()
            .filter(|(_, &v)| v)
            .map(|(k, _)| k.clone())
            .collect();
        Ok(Diagram::from_parts_unchecked(
            types,
            nodes,
            edges,
            j.inputs.clone(),
            j.outputs.clone(),
        ))
    }

    /// Reads and validates a diagram.
    pub fn from_json(s: &str) -> Result<Diagram, DiagramError> {
        let j: DiagramJson =
            serde_json::from_str(s).map_err(|e| DiagramError::Json(e.to_string()))?;
        let d = Diagram::from_json_value_unchecked(&j)?;
        let v = d.validate();
        if v.is_empty() {
            Ok(d)
        } else {
            Err(DiagramError::Invalid(v))
        }
    }
}
