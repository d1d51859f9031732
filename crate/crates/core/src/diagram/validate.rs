use std::fmt;

use super::{Diagram, Dst, GeneratorKind, Src};

/// One broken invariant found by [`Diagram::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// Edge joins ports of different wire types.
    TypeMismatch {
        edge: usize,
        src: String,
        dst: String,
    },
    /// A port is the endpoint of more than one edge.
    PortReuse {
        port: String,
    },
    /// A port is not the endpoint of any edge.
    UnusedPort {
        port: String,
    },
    /// Edge refers to a node or port that does not exist.
    DanglingReference {
        edge: usize,
    },
    /// Node participates in a directed cycle.
    Cycle {
        node: usize,
    },
    /// Generator's shape breaks its kind's rules.
    MalformedGenerator {
        node: usize,
        reason: String,
    },
    UnknownBase {
        base: String,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::TypeMismatch { edge, src, dst } => {
                write!(f, "edge {edge} joins {src} to {dst}")
            }
            Violation::PortReuse { port } => write!(f, "port {port} used more than once"),
            Violation::UnusedPort { port } => write!(f, "port {port} is not connected"),
            Violation::DanglingReference { edge } => {
                write!(f, "edge {edge} refers to a missing port")
            }
            Violation::Cycle { node } => write!(f, "node {node} lies on a cycle"),
            Violation::MalformedGenerator { node, reason } => write!(f, "node {node}: {reason}"),
            Violation::UnknownBase { base } => write!(f, "undeclared base `{base}`"),
        }
    }
}

fn src_name(s: Src) -> String {
    match s {
        Src::Input(i) => format!("in[{i}]"),
        Src::Node(n, p) => format!("node{n}.out[{p}]"),
    }
}

fn dst_name(d: Dst) -> String {
    match d {
        Dst::Output(j) => format!("out[{j}]"),
        Dst::Node(n, p) => format!("node{n}.in[{p}]"),
    }
}

impl Diagram {
    /// Checks every structural invariant and reports each violation found.
    /// Returns an empty list for a well-formed diagram.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();

        let unknown: std::collections::BTreeSet<&str> = self
            .nodes
            .iter()
            .flat_map(|g| g.dom.iter().chain(g.cod.iter()))
            .chain(self.inputs.iter())
            .chain(self.outputs.iter())
            .map(|w| w.base.as_str())
            .filter(|b| !self.types.contains(*b))
            .collect();
        out.extend(unknown.into_iter().map(|b| Violation::UnknownBase {
            base: b.to_string(),
        }));

        for (i, g) in self.nodes.iter().enumerate() {
            if let Some(reason) = generator_problem(g) {
                out.push(Violation::MalformedGenerator { node: i, reason });
            }
        }

        let mut src_uses: Vec<Vec<usize>> =
            self.nodes.iter().map(|g| vec![0; g.cod.len()]).collect();
        let mut dst_uses: Vec<Vec<usize>> =
            self.nodes.iter().map(|g| vec![0; g.dom.len()]).collect();
        let mut in_uses = vec![0usize; self.inputs.len()];
        let mut out_uses = vec![0usize; self.outputs.len()];

        for (k, e) in self.edges.iter().enumerate() {
            let st = self.src_type(e.src);
            let dt = self.dst_type(e.dst);
            let (Some(st), Some(dt)) = (st, dt) else {
                out.push(Violation::DanglingReference { edge: k });
                continue;
            };
            if st != dt {
                out.push(Violation::TypeMismatch {
                    edge: k,
                    src: st.to_string(),
                    dst: dt.to_string(),
                });
            }
            match e.src {
                Src::Input(i) => in_uses[i] += 1,
                Src::Node(n, p) => src_uses[n][p] += 1,
            }
            match e.dst {
                Dst::Output(j) => out_uses[j] += 1,
                Dst::Node(n, p) => dst_uses[n][p] += 1,
            }
        }

        let mut check = |count: usize, name: String| match count {
            0 => out.push(Violation::UnusedPort { port: name }),
            1 => {}
            _ => out.push(Violation::PortReuse { port: name }),
        };
        for (i, &c) in in_uses.iter().enumerate() {
            check(c, src_name(Src::Input(i)));
        }
        for (n, ports) in src_uses.iter().enumerate() {
            for (p, &c) in ports.iter().enumerate() {
                check(c, src_name(Src::Node(n, p)));
            }
        }
        for (j, &c) in out_uses.iter().enumerate() {
            check(c, dst_name(Dst::Output(j)));
        }
        for (n, ports) in dst_uses.iter().enumerate() {
            for (p, &c) in ports.iter().enumerate() {
                check(c, dst_name(Dst::Node(n, p)));
            }
        }

        if let Some(node) = self.find_cycle() {
            out.push(Violation::Cycle { node });
        }
        out
    }

    /// Kahn's algorithm over node-to-node edges; returns a node left on a cycle.
    fn find_cycle(&self) -> Option<usize> {
        self.topological_order().err()
    }

    /// Node ids in an order where every edge goes forward. Ties are broken
    /// by smallest node id first. Errs with a node that lies on a cycle.
    pub(crate) fn topological_order(&self) -> Result<Vec<usize>, usize> {
        let n = self.nodes.len();
        let mut indeg = vec![0usize; n];
        let mut succ: Vec<Vec<usize>> = vec![Vec::new(); n];
        for e in &self.edges {
            if let (Src::Node(a, _), Dst::Node(b, _)) = (e.src, e.dst) {
                if a < n && b < n {
                    indeg[b] += 1;
                    succ[a].push(b);
                }
            }
        }
        let mut ready: std::collections::BTreeSet<usize> =
            (0..n).filter(|&i| indeg[i] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(&i) = ready.iter().next() {
            ready.remove(&i);
            order.push(i);
            for &j in &succ[i] {
                indeg[j] -= 1;
                if indeg[j] == 0 {
                    ready.insert(j);
                }
            }
        }
        if order.len() == n {
            Ok(order)
        } else {
            Err((0..n).find(|&i| indeg[i] > 0).unwrap_or(0))
        }
    }
}

fn generator_problem(g: &super::Generator) -> Option<String> {
    let dom = &g.dom.0;
    let cod = &g.cod.0;
    match g.kind {
        GeneratorKind::Box => g.name.is_empty().then(|| "box without a name".to_string()),
        GeneratorKind::Cup => {
            let ok = dom.is_empty()
                && cod.len() == 2
                && cod[0].base == cod[1].base
                && cod[0].order == cod[1].order + 1;
            (!ok).then(|| {
                format!(
                    "cup must be [] -> [b^(z+1), b^z], got {} -> {}",
                    g.dom, g.cod
                )
            })
        }
        GeneratorKind::Cap => {
            let ok = cod.is_empty() && dom.len() == 2 && dom[0].cancels_with(&dom[1]);
            (!ok).then(|| {
                format!(
                    "cap must be [b^z, b^(z+1)] -> [], got {} -> {}",
                    g.dom, g.cod
                )
            })
        }
        GeneratorKind::Swap => {
            let ok = dom.len() == 2 && cod.len() == 2 && dom[0] == cod[1] && dom[1] == cod[0];
            (!ok).then(|| format!("swap must be [u, v] -> [v, u], got {} -> {}", g.dom, g.cod))
        }
        GeneratorKind::Spider => {
            let first = dom.first().or(cod.first());
            match first {
                None => Some("spider with no legs".to_string()),
                Some(w) => {
                    let ok = dom
                        .iter()
                        .chain(cod.iter())
                        .all(|x| x.base == w.base && x.order == 0);
                    (!ok).then(|| "spider legs must share one plain base".to_string())
                }
            }
        }
        GeneratorKind::Identity => {
            let ok = dom.len() == 1 && dom == cod;
            (!ok).then(|| "identity must be [w] -> [w]".to_string())
        }
    }
}
