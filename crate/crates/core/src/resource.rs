//! Finitely presented resource theories over multisets of atoms.
//!
//! A rule `from → to` rewrites any state containing `from` as a
//! sub-multiset. Convertibility is decided by breadth-first search, so
//! witnesses are shortest.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::par::{self, Execution};

pub type Multiset = BTreeMap<String, usize>;

/// Multiset from a list of atoms, repeats counted.
pub fn multiset<S: AsRef<str>>(atoms: &[S]) -> Multiset {
    let mut m = Multiset::new();
    for a in atoms {
        *m.entry(a.as_ref().to_string()).or_default() += 1;
    }
    m
}

pub fn show(m: &Multiset) -> String {
    let parts: Vec<String> = m
        .iter()
        .flat_map(|(a, &k)| std::iter::repeat_n(a.clone(), k))
        .collect();
    format!("{{{}}}", parts.join(","))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ResourceError {
    #[error("undeclared atom `{0}`")]
    UnknownAtom(String),
    #[error("search visited more than {0} states")]
    StateExplosion(usize),
    #[error("malformed presentation: {0}")]
    Json(String),
    #[error("cannot read {path}: {reason}")]
    Io { path: String, reason: String },
    #[error("witness step {step} does not apply")]
    BadWitness { step: usize },
    #[error("n_max must be at least 1")]
    ZeroBound,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleJson {
    pub from: Vec<String>,
    pub to: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresentationJson {
    pub atoms: Vec<String>,
    pub rules: Vec<RuleJson>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    pub from: Multiset,
    pub to: Multiset,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResourcePresentation {
    atoms: Vec<String>,
    rules: Vec<Rule>,
    // count-vector form of the rules, indexed like `atoms`
    deltas: Vec<(Vec<u32>, Vec<u32>)>,
}

impl ResourcePresentation {
    pub fn new<S: Into<String>>(
        atoms: impl IntoIterator<Item = S>,
        rules: Vec<Rule>,
    ) -> Result<Self, ResourceError> {
        let mut atoms: Vec<String> = atoms.into_iter().map(Into::into).collect();
        atoms.sort();
        atoms.dedup();
        let mut p = Self {
            atoms,
            rules: Vec::new(),
            deltas: Vec::new(),
        };
        for r in rules {
            let from = p.vector(&r.from)?;
            let to = p.vector(&r.to)?;
            p.deltas.push((from, to));
            p.rules.push(r);
        }
        Ok(p)
    }

    pub fn from_json(text: &str) -> Result<Self, ResourceError> {
        let j: PresentationJson =
            serde_json::from_str(text).map_err(|e| ResourceError::Json(e.to_string()))?;
        let rules = j
            .rules
            .iter()
            .map(|r| Rule {
                from: multiset(&r.from),
                to: multiset(&r.to),
            })
            .collect();
        Self::new(j.atoms, rules)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, ResourceError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| ResourceError::Io {
            path: path.display().to_string(),
            reason: e.to_string(),
        })?;
        Self::from_json(&text)
    }

    pub fn atoms(&self) -> &[String] {
        &self.atoms
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    fn vector(&self, m: &Multiset) -> Result<Vec<u32>, ResourceError> {
        let mut v = vec![0u32; self.atoms.len()];
        for (a, &k) in m {
            let i = self
                .atoms
                .binary_search(a)
                .map_err(|_| ResourceError::UnknownAtom(a.clone()))?;
            v[i] += k as u32;
        }
        Ok(v)
    }

    fn multiset_of(&self, v: &[u32]) -> Multiset {
        self.atoms
            .iter()
            .zip(v)
            .filter(|(_, &k)| k > 0)
            .map(|(a, &k)| (a.clone(), k as usize))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchLimits {
    pub max_steps: usize,
    pub max_states: usize,
}

impl Default for SearchLimits {
    fn default() -> Self {
        Self {
            max_steps: 64,
            max_states: 1_000_000,
        }
    }
}

/// One rule application: `from + context → to + context`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step {
    pub rule: usize,
    pub context: Multiset,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ConversionWitness {
    pub steps: Vec<Step>,
}

impl ConversionWitness {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Applies the steps to `src` and returns the final state.
    pub fn replay(
        &self,
        src: &Multiset,
        p: &ResourcePresentation,
    ) -> Result<Multiset, ResourceError> {
        let mut state = src.clone();
        for (k, s) in self.steps.iter().enumerate() {
            let r = p
                .rules
                .get(s.rule)
                .ok_or(ResourceError::BadWitness { step: k })?;
            if union(&r.from, &s.context) != state {
                return Err(ResourceError::BadWitness { step: k });
            }
            state = union(&r.to, &s.context);
        }
        Ok(state)
    }
}

fn union(a: &Multiset, b: &Multiset) -> Multiset {
    let mut m = a.clone();
    for (k, &v) in b {
        *m.entry(k.clone()).or_default() += v;
    }
    m.retain(|_, v| *v > 0);
    m
}

/// Shortest rewrite sequence from `src` to exactly `dst`, or `None` if there
/// is none within `limits.max_steps`.
pub fn convertible(
    src: &Multiset,
    dst: &Multiset,
    p: &ResourcePresentation,
    limits: SearchLimits,
) -> Result<Option<ConversionWitness>, ResourceError> {
    let start = p.vector(src)?;
    let goal = p.vector(dst)?;
    let mut parent: HashMap<Vec<u32>, Option<(Vec<u32>, usize)>> = HashMap::new();
    parent.insert(start.clone(), None);
    let mut queue = VecDeque::from([(start, 0usize)]);
    while let Some((state, depth)) = queue.pop_front() {
        if state == goal {
            return Ok(Some(rebuild(p, &parent, state)));
        }
        if depth == limits.max_steps {
            continue;
        }
        for (ri, (from, to)) in p.deltas.iter().enumerate() {
            if state.iter().zip(from).any(|(s, f)| s < f) {
                continue;
            }
            let next: Vec<u32> = state
                .iter()
                .zip(from)
                .zip(to)
                .map(|((s, f), t)| s - f + t)
                .collect();
            if parent.contains_key(&next) {
                continue;
            }
            if parent.len() >= limits.max_states {
                return Err(ResourceError::StateExplosion(limits.max_states));
            }
            parent.insert(next.clone(), Some((state.clone(), ri)));
            queue.push_back((next, depth + 1));
        }
    }
    Ok(None)
}

fn rebuild(
    p: &ResourcePresentation,
    parent: &HashMap<Vec<u32>, Option<(Vec<u32>, usize)>>,
    mut state: Vec<u32>,
) -> ConversionWitness {
    let mut steps = Vec::new();
    while let Some(Some((prev, ri))) = parent.get(&state) {
        let from = &p.deltas[*ri].0;
        let context: Vec<u32> = prev.iter().zip(from).map(|(s, f)| s - f).collect();
        steps.push(Step {
            rule: *ri,
            context: p.multiset_of(&context),
        });
        state = prev.clone();
    }
    steps.reverse();
    ConversionWitness { steps }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RateSearch {
    pub n_max: usize,
    /// Largest `m` tried for each `n`.
    pub m_max: usize,
    pub limits: SearchLimits,
}

impl RateSearch {
    pub fn new(n_max: usize) -> Self {
        Self {
            n_max,
            m_max: 4 * n_max.max(1),
            limits: SearchLimits::default(),
        }
    }
}

/// Best verified `m/n`, a lower bound on the conversion rate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rate {
    /// `(n, m)` attaining the best ratio, smallest `n` first; `None` when no
    /// `m ≥ 1` was reachable for any `n`.
    pub best: Option<(usize, usize)>,
    pub search: RateSearch,
}

impl Rate {
    pub fn value(&self) -> f64 {
        self.best.map_or(0.0, |(n, m)| m as f64 / n as f64)
    }

    /// Reduced fraction `(num, den)`.
    pub fn fraction(&self) -> (usize, usize) {
        match self.best {
            None => (0, 1),
            Some((n, m)) => {
                let g = gcd(m, n);
                (m / g, n / g)
            }
        }
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a.max(1)
    } else {
        gcd(b, a % b)
    }
}

impl fmt::Display for Rate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.best {
            Some((n, m)) => {
                let (num, den) = self.fraction();
                write!(f, "{num}/{den} at n={n},m={m}")
            }
            None => write!(f, "0 (nothing reachable for n<={})", self.search.n_max),
        }
    }
}

/// For each `n ≤ n_max` finds the largest `m ≤ m_max` with `n·a → m·b`, and
/// keeps the best ratio. Values of `n` are searched in parallel under
/// `Execution::Parallel`; the result does not depend on the mode.
pub fn conversion_rate(
    a: &str,
    b: &str,
    p: &ResourcePresentation,
    search: RateSearch,
    exec: Execution,
) -> Result<Rate, ResourceError> {
    if search.n_max == 0 {
        return Err(ResourceError::ZeroBound);
    }
    p.vector(&multiset(&[a]))?;
    p.vector(&multiset(&[b]))?;
    let per_n = par::map_range(
        exec,
        search.n_max,
        |i| -> Result<Option<usize>, ResourceError> {
            let n = i + 1;
            let src = multiset(&vec![a; n]);
            let mut best = None;
            for m in 1..=search.m_max {
                if convertible(&src, &multiset(&vec![b; m]), p, search.limits)?.is_some() {
                    best = Some(m);
                }
            }
            Ok(best)
        },
    );
    let mut best: Option<(usize, usize)> = None;
    for (i, r) in per_n.into_iter().enumerate() {
        let Some(m) = r? else { continue };
        let n = i + 1;
        // strictly better ratio only, so the smallest n wins ties
        if best.is_none_or(|(bn, bm)| m * bn > bm * n) {
            best = Some((n, m));
        }
    }
    Ok(Rate { best, search })
}
