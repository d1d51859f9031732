//! Normalization of diagrams under the yanking, identity and swap-involution
//! laws, and equality checks built on it.
//!
//! Redexes are searched bottom-up in topological order of the canonical
//! numbering and the first one found is rewritten. Every rule deletes nodes,
//! so normalization terminates.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::diagram::{Diagram, Dst, Edge, GeneratorKind, Src, Violation};
use crate::par::{self, Execution};
use crate::semantics::{evaluate, EvalError, Model};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RewriteError {
    #[error("diagram does not validate: {0:?}")]
    InvalidDiagram(Vec<Violation>),
    #[error("open ports differ: {0} vs {1}")]
    ShapeMismatch(String, String),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rule {
    /// Drop an explicit identity node.
    Identity,
    /// A cup feeding a cap through one wire straightens to a bare wire.
    Snake,
    /// Two stacked swaps on the same wire pair cancel.
    SwapSwap,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rule::Identity => "identity",
            Rule::Snake => "snake",
            Rule::SwapSwap => "swap-swap",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RewriteStep {
    pub rule: Rule,
    /// Ids of the rewritten nodes, in the numbering current at that step.
    pub nodes: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NormalForm {
    pub diagram: Diagram,
    pub trace: Vec<RewriteStep>,
}

struct Redex {
    step: RewriteStep,
    new_edges: Vec<Edge>,
}

/// Rewrites `d` until no redex remains, returning the canonical result.
pub fn normalize(d: &Diagram) -> Result<NormalForm, RewriteError> {
    let v = d.validate();
    if !v.is_empty() {
        return Err(RewriteError::InvalidDiagram(v));
    }
    let mut cur = d.canonical();
    let mut trace = Vec::new();
    while let Some(r) = find_redex(&cur) {
        cur = splice(&cur, &r.step.nodes, r.new_edges).canonical();
        trace.push(r.step);
    }
    Ok(NormalForm {
        diagram: cur,
        trace,
    })
}

fn find_redex(d: &Diagram) -> Option<Redex> {
    let order = d
        .topological_order()
        .expect("validated diagrams are acyclic");
    let w = d.wiring();
    for k in order {
        let g = &d.nodes()[k];
        match g.kind() {
            GeneratorKind::Identity => {
                let s = w.in_src[k][0]?;
                let t = w.out_dst[k][0]?;
                return Some(Redex {
                    step: RewriteStep {
                        rule: Rule::Identity,
                        nodes: vec![k],
                    },
                    new_edges: vec![Edge::new(s, t)],
                });
            }
            GeneratorKind::Swap => {
                if let (Some(Dst::Node(b, 0)), Some(Dst::Node(b2, 1))) =
                    (w.out_dst[k][0], w.out_dst[k][1])
                {
                    if b == b2 && d.nodes()[b].is(GeneratorKind::Swap) {
                        let edges = vec![
                            Edge::new(w.in_src[k][0]?, w.out_dst[b][0]?),
                            Edge::new(w.in_src[k][1]?, w.out_dst[b][1]?),
                        ];
                        return Some(Redex {
                            step: RewriteStep {
                                rule: Rule::SwapSwap,
                                nodes: vec![k, b],
                            },
                            new_edges: edges,
                        });
                    }
                }
            }
            GeneratorKind::Cup => {
                if let Some(r) = snake_at(d, &w, k) {
                    return Some(r);
                }
            }
            _ => {}
        }
    }
    None
}

fn snake_at(d: &Diagram, w: &crate::diagram::Wiring, cup: usize) -> Option<Redex> {
    for p in 0..2 {
        let Some(Dst::Node(cap, q)) = w.out_dst[cup][p] else {
            continue;
        };
        if !d.nodes()[cap].is(GeneratorKind::Cap) {
            continue;
        }
        let s = w.in_src[cap][1 - q]?;
        let t = w.out_dst[cup][1 - p]?;
        if s == Src::Node(cup, 1 - p) {
            // closed loop: a scalar, not a snake
            continue;
        }
        if d.nodes()[cap].dom()[1 - q] != d.nodes()[cup].cod()[1 - p] {
            continue;
        }
        if let (Src::Node(a, _), Dst::Node(b, _)) = (s, t) {
            if reaches(w, b, a) {
                // straightening would close a trace into a cycle
                continue;
            }
        }
        return Some(Redex {
            step: RewriteStep {
                rule: Rule::Snake,
                nodes: vec![cup, cap],
            },
            new_edges: vec![Edge::new(s, t)],
        });
    }
    None
}

fn reaches(w: &crate::diagram::Wiring, from: usize, to: usize) -> bool {
    let mut stack = vec![from];
    let mut seen = BTreeSet::new();
    while let Some(n) = stack.pop() {
        if n == to {
            return true;
        }
        if !seen.insert(n) {
            continue;
        }
        for dst in w.out_dst[n].iter().flatten() {
            if let Dst::Node(m, _) = *dst {
                stack.push(m);
            }
        }
    }
    false
}

/// Removes `remove` from `d`, drops their edges, adds `new_edges` and
/// compacts node ids.
fn splice(d: &Diagram, remove: &[usize], new_edges: Vec<Edge>) -> Diagram {
    let n = d.nodes().len();
    let mut new_id = vec![None; n];
    let mut nodes = Vec::with_capacity(n - remove.len());
    for (i, g) in d.nodes().iter().enumerate() {
        if !remove.contains(&i) {
            new_id[i] = Some(nodes.len());
            nodes.push(g.clone());
        }
    }
    let map_src = |s: Src| match s {
        Src::Node(m, p) => new_id[m].map(|x| Src::Node(x, p)),
        s => Some(s),
    };
    let map_dst = |t: Dst| match t {
        Dst::Node(m, p) => new_id[m].map(|x| Dst::Node(x, p)),
        t => Some(t),
    };
    let mut edges: Vec<Edge> = d
        .edges()
        .iter()
        .chain(&new_edges)
        .filter_map(|e| Some(Edge::new(map_src(e.src)?, map_dst(e.dst)?)))
        .collect();
    edges.sort();
    Diagram::from_parts_unchecked(
        d.types().clone(),
        nodes,
        edges,
        d.inputs().clone(),
        d.outputs().clone(),
    )
}

/// Settings for the probabilistic equality check.
#[derive(Debug, Clone)]
pub struct SemanticCheck {
    /// Dimensions, plus any payloads that should not be randomized.
    pub model: Model,
    pub seed: u64,
    pub tolerance: f64,
    /// Accept results that agree up to a global complex factor.
    pub up_to_scalar: bool,
    /// Number of independent payload draws; all must agree.
    pub trials: usize,
    pub exec: Execution,
}

impl SemanticCheck {
    pub fn new(model: Model, seed: u64) -> Self {
        Self {
            model,
            seed,
            tolerance: 1e-9,
            up_to_scalar: false,
            trials: 1,
            exec: Execution::Parallel,
        }
    }

    pub fn with_execution(mut self, exec: Execution) -> Self {
        self.exec = exec;
        self
    }

    pub fn up_to_scalar(mut self) -> Self {
        self.up_to_scalar = true;
        self
    }

    pub fn with_tolerance(mut self, tol: f64) -> Self {
        self.tolerance = tol;
        self
    }

    pub fn with_trials(mut self, trials: usize) -> Self {
        self.trials = trials.max(1);
        self
    }
}

#[derive(Debug, Clone)]
pub enum EqualityMode {
    Syntactic,
    Semantic(SemanticCheck),
}

/// Decides `d1 = d2`. Syntactic mode compares normal forms; semantic mode
/// compares tensor evaluations under seeded random payloads.
pub fn equal(d1: &Diagram, d2: &Diagram, mode: &EqualityMode) -> Result<bool, RewriteError> {
    if d1.inputs() != d2.inputs() || d1.outputs() != d2.outputs() {
        return Err(RewriteError::ShapeMismatch(
            format!("{} -> {}", d1.inputs(), d1.outputs()),
            format!("{} -> {}", d2.inputs(), d2.outputs()),
        ));
    }
    match mode {
        EqualityMode::Syntactic => {
            let a = normalize(d1)?;
            let b = normalize(d2)?;
            Ok(a.diagram.structurally_eq(&b.diagram))
        }
        EqualityMode::Semantic(check) => {
            let results = par::map_range(
                check.exec,
                check.trials,
                |k| -> Result<bool, RewriteError> {
                    let seed = check.seed.wrapping_add(k as u64);
                    let mut model = check.model.clone();
                    model.fill_random_payloads(d1, seed)?;
                    model.fill_random_payloads(d2, seed)?;
                    let t1 = evaluate(d1, &model)?;
                    let t2 = evaluate(d2, &model)?;
                    let err = if check.up_to_scalar {
                        t1.proportionality(&t2).map_err(EvalError::from)?.1
                    } else {
                        t1.rel_diff(&t2).map_err(EvalError::from)?
                    };
                    Ok(err <= check.tolerance)
                },
            );
            results.into_iter().try_fold(true, |acc, r| Ok(acc && r?))
        }
    }
}
