//! Typed string diagrams stored as port-graphs.
//!
//! A [`Diagram`] is a list of generator nodes plus a list of edges, each edge
//! joining exactly one source port (an open input or a node output) to one
//! destination port (an open output or a node input). Because composition is
//! graph gluing, the associativity, unit and interchange laws of sequential
//! and parallel composition hold up to node renumbering, and associativity of
//! `⊗` and `∘` holds on the nose.
//!
//! ```text
//!   outputs:   0     1
//!              │     │
//!            ┌─┴─┐   │
//!            │ g │   │
//!            └─┬─┘   │
//!            ┌─┴─┐ ┌─┴─┐
//!            │ f │ │ h │
//!            └─┬─┘ └─┬─┘
//!   inputs:    0     1
//! ```

mod canon;
mod json;
mod validate;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::types::{Signature, TypeError, TypeList, WireType};

pub use json::DiagramJson;
pub use validate::Violation;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DiagramError {
    #[error("undeclared base `{0}`")]
    UnknownBase(String),
    #[error("type mismatch at port {position}: {left} vs {right}")]
    TypeMismatch {
        position: usize,
        left: String,
        right: String,
    },
    #[error("spider needs at least one leg")]
    ZeroArity,
    #[error("generator name must be nonempty")]
    EmptyName,
    #[error("invalid diagram: {}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
    #[error("malformed diagram json: {0}")]
    Json(String),
}

impl From<TypeError> for DiagramError {
    fn from(e: TypeError) -> Self {
        match e {
            TypeError::UnknownBase(b) => DiagramError::UnknownBase(b),
            other => DiagramError::Json(other.to_string()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GeneratorKind {
    Box,
    Cup,
    Cap,
    Swap,
    Spider,
    Identity,
}

/// How a box's payload is read by the tensor semantics.
#[derive(
    Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(rename_all = "lowercase")]
pub enum PayloadMode {
    /// Plain vector/tensor payload.
    #[default]
    Pure,
    /// Entrywise complex conjugate of the referenced payload.
    Conjugate,
    /// A density-matrix payload placed on thin wires; only meaningful after doubling.
    Mixed,
    /// A density-matrix payload on doubled wires.
    Thick,
}

/// One node of a diagram. Immutable once built.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Generator {
    kind: GeneratorKind,
    name: String,
    dom: TypeList,
    cod: TypeList,
    payload: Option<String>,
    mode: PayloadMode,
}

impl Generator {
    pub fn boxed(
        name: impl Into<String>,
        dom: TypeList,
        cod: TypeList,
        payload: Option<String>,
    ) -> Self {
        Self {
            kind: GeneratorKind::Box,
            name: name.into(),
            dom,
            cod,
            payload,
            mode: PayloadMode::Pure,
        }
    }

    pub fn with_mode(mut self, mode: PayloadMode) -> Self {
        self.mode = mode;
        self
    }

    /// `[] → [b^(z+1), b^z]`
    pub fn cup(base: &str, z: i32) -> Self {
        Self::structural(
            GeneratorKind::Cup,
            TypeList::unit(),
            TypeList(vec![WireType::new(base, z + 1), WireType::new(base, z)]),
        )
    }

    /// `[b^z, b^(z+1)] → []`
    pub fn cap(base: &str, z: i32) -> Self {
        Self::structural(
            GeneratorKind::Cap,
            TypeList(vec![WireType::new(base, z), WireType::new(base, z + 1)]),
            TypeList::unit(),
        )
    }

    pub fn swap(u: WireType, v: WireType) -> Self {
        Self::structural(
            GeneratorKind::Swap,
            TypeList(vec![u.clone(), v.clone()]),
            TypeList(vec![v, u]),
        )
    }

    pub fn spider(base: &str, n_in: usize, m_out: usize) -> Self {
        let w = WireType::plain(base);
        Self::structural(
            GeneratorKind::Spider,
            TypeList(vec![w.clone(); n_in]),
            TypeList(vec![w; m_out]),
        )
    }

    pub fn identity(w: WireType) -> Self {
        Self::structural(
            GeneratorKind::Identity,
            TypeList(vec![w.clone()]),
            TypeList(vec![w]),
        )
    }

    fn structural(kind: GeneratorKind, dom: TypeList, cod: TypeList) -> Self {
        Self {
            kind,
            name: String::new(),
            dom,
            cod,
            payload: None,
            mode: PayloadMode::Pure,
        }
    }

    pub(crate) fn from_raw(
        kind: GeneratorKind,
        name: String,
        dom: TypeList,
        cod: TypeList,
        payload: Option<String>,
        mode: PayloadMode,
    ) -> Self {
        Self {
            kind,
            name,
            dom,
            cod,
            payload,
            mode,
        }
    }

    pub fn kind(&self) -> GeneratorKind {
        self.kind
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dom(&self) -> &TypeList {
        &self.dom
    }

    pub fn cod(&self) -> &TypeList {
        &self.cod
    }

    pub fn payload(&self) -> Option<&str> {
        self.payload.as_deref()
    }

    /// Key used to look up the payload tensor: the explicit reference, or the box name.
    pub fn payload_key(&self) -> &str {
        self.payload.as_deref().unwrap_or(&self.name)
    }

    pub fn mode(&self) -> PayloadMode {
        self.mode
    }

    pub fn arity(&self) -> (usize, usize) {
        (self.dom.len(), self.cod.len())
    }

    pub fn is(&self, kind: GeneratorKind) -> bool {
        self.kind == kind
    }
}

/// Source end of an edge: an open input of the diagram or an output port of a node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Src {
    Input(usize),
    Node(usize, usize),
}

/// Destination end of an edge: an open output of the diagram or an input port of a node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Dst {
    Output(usize),
    Node(usize, usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub src: Src,
    pub dst: Dst,
}

impl Edge {
    pub fn new(src: Src, dst: Dst) -> Self {
        Self { src, dst }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bend {
    Cup,
    Cap,
}

/// A string diagram. `PartialEq` compares the raw port-graph; use
/// [`Diagram::structurally_eq`] to compare up to node renumbering.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Diagram {
    types: BTreeSet<String>,
    nodes: Vec<Generator>,
    edges: Vec<Edge>,
    inputs: TypeList,
    outputs: TypeList,
}

impl Diagram {
    /// The empty diagram `[] → []`.
    pub fn empty() -> Self {
        Self::default()
    }

    /// Bare wires on `types`, no nodes.
    pub fn identity(types: &TypeList) -> Self {
        let edges = (0..types.len())
            .map(|i| Edge::new(Src::Input(i), Dst::Output(i)))
            .collect();
        Self {
            types: types.bases().map(str::to_string).collect(),
            nodes: Vec::new(),
            edges,
            inputs: types.clone(),
            outputs: types.clone(),
        }
    }

    /// Wraps a single generator, exposing its ports as the open boundary.
    pub fn from_generator(sig: &Signature, g: Generator) -> Self {
        let inputs = g.dom.clone();
        let outputs = g.cod.clone();
        let mut edges = Vec::with_capacity(inputs.len() + outputs.len());
        edges.extend((0..inputs.len()).map(|i| Edge::new(Src::Input(i), Dst::Node(0, i))));
        edges.extend((0..outputs.len()).map(|j| Edge::new(Src::Node(0, j), Dst::Output(j))));
        edges.sort();
        Self {
            types: sig.bases().clone(),
            nodes: vec![g],
            edges,
            inputs,
            outputs,
        }
    }

    /// Assembles a diagram from raw parts without checking invariants.
    pub fn from_parts_unchecked(
        types: BTreeSet<String>,
        nodes: Vec<Generator>,
        edges: Vec<Edge>,
        inputs: TypeList,
        outputs: TypeList,
    ) -> Self {
        Self {
            types,
            nodes,
            edges,
            inputs,
            outputs,
        }
    }

    pub fn types(&self) -> &BTreeSet<String> {
        &self.types
    }

    pub fn nodes(&self) -> &[Generator] {
        &self.nodes
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn inputs(&self) -> &TypeList {
        &self.inputs
    }

    pub fn outputs(&self) -> &TypeList {
        &self.outputs
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn count(&self, kind: GeneratorKind) -> usize {
        self.nodes.iter().filter(|g| g.kind == kind).count()
    }

    /// Sequential composition `g ∘ f`: outputs of `self` glued to inputs of `next`.
    pub fn then(&self, next: &Diagram) -> Result<Diagram, DiagramError> {
        compose_seq(self, next)
    }

    /// Parallel composition `self ⊗ other`.
    pub fn tensor(&self, other: &Diagram) -> Diagram {
        compose_par(self, other)
    }

    pub(crate) fn wiring(&self) -> Wiring {
        Wiring::of(self)
    }

    pub(crate) fn src_type(&self, src: Src) -> Option<&WireType> {
        match src {
            Src::Input(i) => self.inputs.0.get(i),
            Src::Node(n, p) => self.nodes.get(n).and_then(|g| g.cod.0.get(p)),
        }
    }

    pub(crate) fn dst_type(&self, dst: Dst) -> Option<&WireType> {
        match dst {
            Dst::Output(j) => self.outputs.0.get(j),
            Dst::Node(n, p) => self.nodes.get(n).and_then(|g| g.dom.0.get(p)),
        }
    }
}

/// Port lookup tables for a valid diagram.
#[derive(Debug, Clone)]
pub(crate) struct Wiring {
    /// For each node and input port, the source feeding it.
    pub in_src: Vec<Vec<Option<Src>>>,
    /// For each node and output port, where it goes.
    pub out_dst: Vec<Vec<Option<Dst>>>,
    pub input_dst: Vec<Option<Dst>>,
    pub output_src: Vec<Option<Src>>,
}

impl Wiring {
    fn of(d: &Diagram) -> Self {
        let mut w = Wiring {
            in_src: d.nodes.iter().map(|g| vec![None; g.dom.len()]).collect(),
            out_dst: d.nodes.iter().map(|g| vec![None; g.cod.len()]).collect(),
            input_dst: vec![None; d.inputs.len()],
            output_src: vec![None; d.outputs.len()],
        };
        for e in &d.edges {
            match e.src {
                Src::Input(i) => {
                    if let Some(slot) = w.input_dst.get_mut(i) {
                        *slot = Some(e.dst);
                    }
                }
                Src::Node(n, p) => {
                    if let Some(slot) = w.out_dst.get_mut(n).and_then(|v| v.get_mut(p)) {
                        *slot = Some(e.dst);
                    }
                }
            }
            match e.dst {
                Dst::Output(j) => {
                    if let Some(slot) = w.output_src.get_mut(j) {
                        *slot = Some(e.src);
                    }
                }
                Dst::Node(n, p) => {
                    if let Some(slot) = w.in_src.get_mut(n).and_then(|v| v.get_mut(p)) {
                        *slot = Some(e.src);
                    }
                }
            }
        }
        w
    }
}

/// Incremental construction of a diagram by adding nodes and connecting ports.
#[derive(Debug, Clone)]
pub struct DiagramBuilder {
    types: BTreeSet<String>,
    inputs: TypeList,
    nodes: Vec<Generator>,
    edges: Vec<Edge>,
}

impl DiagramBuilder {
    pub fn new(sig: &Signature, inputs: TypeList) -> Self {
        Self {
            types: sig.bases().clone(),
            inputs,
            nodes: Vec::new(),
            edges: Vec::new(),
        }
    }

    fn bare(types: BTreeSet<String>, inputs: TypeList) -> Self {
        Self {
            types,
            inputs,
            nodes: Vec::new(),
            edges: Vec::new(),
        }
    }

    /// Sources for the open inputs, in order.
    pub fn input_srcs(&self) -> Vec<Src> {
        (0..self.inputs.len()).map(Src::Input).collect()
    }

    /// Adds a node and returns its id.
    pub fn add(&mut self, g: Generator) -> usize {
        self.nodes.push(g);
        self.nodes.len() - 1
    }

    /// Adds a node whose inputs are fed by `srcs`; returns its output sources.
    pub fn apply(&mut self, g: Generator, srcs: &[Src]) -> Vec<Src> {
        let n_out = g.cod.len();
        let id = self.add(g);
        for (p, &s) in srcs.iter().enumerate() {
            self.connect(s, Dst::Node(id, p));
        }
        (0..n_out).map(|p| Src::Node(id, p)).collect()
    }

    pub fn connect(&mut self, src: Src, dst: Dst) {
        self.edges.push(Edge::new(src, dst));
    }

    /// Inlines a copy of `d`, feeding its open inputs from `srcs`.
    /// Returns the sources now carrying `d`'s open outputs.
    pub fn inline(&mut self, d: &Diagram, srcs: &[Src]) -> Vec<Src> {
        debug_assert_eq!(srcs.len(), d.inputs.len());
        self.types.extend(d.types.iter().cloned());
        let offset = self.nodes.len();
        self.nodes.extend(d.nodes.iter().cloned());
        let mut outs = vec![None; d.outputs.len()];
        for e in &d.edges {
            let src = match e.src {
                Src::Input(i) => srcs[i],
                Src::Node(n, p) => Src::Node(n + offset, p),
            };
            match e.dst {
                Dst::Output(j) => outs[j] = Some(src),
                Dst::Node(n, p) => self.edges.push(Edge::new(src, Dst::Node(n + offset, p))),
            }
        }
        outs.into_iter()
            .map(|s| s.expect("inlined diagram leaves an output unconnected"))
            .collect()
    }

    pub fn src_type(&self, src: Src) -> Option<&WireType> {
        match src {
            Src::Input(i) => self.inputs.0.get(i),
            Src::Node(n, p) => self.nodes.get(n).and_then(|g| g.cod.0.get(p)),
        }
    }

    /// Finishes with the given sources as open outputs and validates the result.
    pub fn finish(self, outputs: &[Src]) -> Result<Diagram, DiagramError> {
        let d = self.finish_unchecked(outputs);
        let violations = d.validate();
        if violations.is_empty() {
            Ok(d)
        } else {
            Err(DiagramError::Invalid(violations))
        }
    }

    pub(crate) fn finish_unchecked(mut self, outputs: &[Src]) -> Diagram {
        let out_types: TypeList = outputs
            .iter()
            .map(|&s| {
                self.src_type(s)
                    .cloned()
                    .unwrap_or_else(|| WireType::plain("?"))
            })
            .collect();
        for (j, &s) in outputs.iter().enumerate() {
            self.edges.push(Edge::new(s, Dst::Output(j)));
        }
        self.edges.sort();
        Diagram {
            types: self.types,
            nodes: self.nodes,
            edges: self.edges,
            inputs: self.inputs,
            outputs: out_types,
        }
    }
}

/// Single-box diagram. A box with no inputs is a state, one with no outputs an effect.
pub fn make_generator(
    sig: &Signature,
    name: &str,
    dom: TypeList,
    cod: TypeList,
    payload: Option<&str>,
) -> Result<Diagram, DiagramError> {
    if name.is_empty() {
        return Err(DiagramError::EmptyName);
    }
    sig.check(&dom)?;
    sig.check(&cod)?;
    let g = Generator::boxed(name, dom, cod, payload.map(str::to_string));
    Ok(Diagram::from_generator(sig, g))
}

/// Sequential composition: `f`'s outputs glued to `g`'s inputs.
pub fn compose_seq(f: &Diagram, g: &Diagram) -> Result<Diagram, DiagramError> {
    let n = f.outputs.len().max(g.inputs.len());
    for i in 0..n {
        let left = f.outputs.0.get(i);
        let right = g.inputs.0.get(i);
        if left != right {
            let show = |w: Option<&WireType>| w.map_or("<none>".to_string(), ToString::to_string);
            return Err(DiagramError::TypeMismatch {
                position: i,
                left: show(left),
                right: show(right),
            });
        }
    }
    let mut types = f.types.clone();
    types.extend(g.types.iter().cloned());
    let mut b = DiagramBuilder::bare(types, f.inputs.clone());
    let srcs = b.input_srcs();
    let mid = b.inline(f, &srcs);
    let outs = b.inline(g, &mid);
    Ok(b.finish_unchecked(&outs))
}

/// Parallel composition: disjoint union with boundaries concatenated.
pub fn compose_par(f: &Diagram, g: &Diagram) -> Diagram {
    let mut types = f.types.clone();
    types.extend(g.types.iter().cloned());
    let mut b = DiagramBuilder::bare(types, f.inputs.concat(&g.inputs));
    let srcs = b.input_srcs();
    let (left, right) = srcs.split_at(f.inputs.len());
    let mut outs = b.inline(f, left);
    outs.extend(b.inline(g, right));
    b.finish_unchecked(&outs)
}

/// Cup `[] → [b^(z+1), b^z]` or cap `[b^z, b^(z+1)] → []`.
pub fn bend(sig: &Signature, base: &str, z: i32, direction: Bend) -> Result<Diagram, DiagramError> {
    sig.check_base(base)?;
    let g = match direction {
        Bend::Cup => Generator::cup(base, z),
        Bend::Cap => Generator::cap(base, z),
    };
    Ok(Diagram::from_generator(sig, g))
}

/// Frobenius spider with `n_in` inputs and `m_out` outputs on the plain wire `base`.
pub fn spider(
    sig: &Signature,
    base: &str,
    n_in: usize,
    m_out: usize,
) -> Result<Diagram, DiagramError> {
    sig.check_base(base)?;
    if n_in + m_out == 0 {
        return Err(DiagramError::ZeroArity);
    }
    Ok(Diagram::from_generator(
        sig,
        Generator::spider(base, n_in, m_out),
    ))
}

/// Explicit swap node `[u, v] → [v, u]`.
pub fn swap(sig: &Signature, u: WireType, v: WireType) -> Result<Diagram, DiagramError> {
    sig.check_base(&u.base)?;
    sig.check_base(&v.base)?;
    Ok(Diagram::from_generator(sig, Generator::swap(u, v)))
}

/// Explicit identity node on one wire. Normalization removes these.
pub fn identity_node(sig: &Signature, w: WireType) -> Result<Diagram, DiagramError> {
    sig.check_base(&w.base)?;
    Ok(Diagram::from_generator(sig, Generator::identity(w)))
}

/// The snake `(id ⊗ cup) ; (cap ⊗ id)` on the wire `b^z`.
pub fn snake(sig: &Signature, base: &str, z: i32) -> Result<Diagram, DiagramError> {
    let w = WireType::new(base, z);
    let id = Diagram::identity(&TypeList(vec![w.clone()]));
    let cup = bend(sig, base, z, Bend::Cup)?;
    let cap = bend(sig, base, z, Bend::Cap)?;
    compose_seq(&compose_par(&id, &cup), &compose_par(&cap, &id))
}

/// The mirror snake `(cup ⊗ id) ; (id ⊗ cap)` on the wire `b^(z+1)`.
pub fn snake_mirror(sig: &Signature, base: &str, z: i32) -> Result<Diagram, DiagramError> {
    let w = WireType::new(base, z + 1);
    let id = Diagram::identity(&TypeList(vec![w]));
    let cup = bend(sig, base, z, Bend::Cup)?;
    let cap = bend(sig, base, z, Bend::Cap)?;
    compose_seq(&compose_par(&cup, &id), &compose_par(&id, &cap))
}
