//! Type reduction by non-crossing cancellation links.
//!
//! The flat type string is split as `E0 r1 E1 r2 … rk Ek`, where each `Ei`
//! reduces to nothing and the residual wires `r1 … rk` spell out the target.
//! Residual wires never sit under a link, so the links together with the
//! outgoing residual wires draw without crossings.

use std::fmt;

use thiserror::Error;

use super::lexicon::Lexicon;
use crate::types::{TypeList, WireType};

pub const DEFAULT_COMBINATION_LIMIT: usize = 64;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("unknown word `{0}`")]
    UnknownWord(String),
    #[error("no parse; {}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    NoParse(Vec<ResidualReport>),
    #[error("{count} entry combinations exceed the limit of {limit}")]
    TooManyCombinations { count: usize, limit: usize },
    #[error("empty sentence")]
    Empty,
}

/// Best-effort leftover of a failed entry combination, from greedy
/// left-to-right cancellation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidualReport {
    pub entries: Vec<usize>,
    pub residual: TypeList,
}

impl fmt::Display for ResidualReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "entries {:?} leave {}", self.entries, self.residual)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseWitness {
    pub words: Vec<String>,
    /// Chosen lexicon entry per word.
    pub entries: Vec<usize>,
    pub flat: TypeList,
    /// `boundaries[k]..boundaries[k + 1]` are the flat positions of word `k`.
    pub boundaries: Vec<usize>,
    /// Sorted `(i, j)` with `i < j` and `flat[i]` canceling `flat[j]`.
    pub links: Vec<(usize, usize)>,
    pub residual: Vec<usize>,
}

impl ParseWitness {
    pub fn residual_type(&self) -> TypeList {
        self.residual
            .iter()
            .map(|&i| self.flat[i].clone())
            .collect()
    }

    /// Word that owns flat position `i`.
    pub fn word_at(&self, i: usize) -> usize {
        self.boundaries.partition_point(|&b| b <= i) - 1
    }

    /// Replays the links: each index used at most once, each pair cancels,
    /// arcs nest, no residual under an arc, and the leftover spells `target`.
    pub fn check(&self, target: &TypeList) -> bool {
        let n = self.flat.len();
        let mut used = vec![false; n];
        for &(i, j) in &self.links {
            if i >= j || j >= n || used[i] || used[j] || !self.flat[i].cancels_with(&self.flat[j]) {
                return false;
            }
            used[i] = true;
            used[j] = true;
        }
        for &(a, b) in &self.links {
            for &(c, d) in &self.links {
                if a < c && c < b && b < d {
                    return false;
                }
            }
        }
        let leftover: Vec<usize> = (0..n).filter(|&i| !used[i]).collect();
        if leftover != self.residual {
            return false;
        }
        let covered = |r: usize| self.links.iter().any(|&(a, b)| a < r && r < b);
        if self.residual.iter().any(|&r| covered(r)) {
            return false;
        }
        &self.residual_type() == target
    }
}

impl fmt::Display for ParseWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, w) in self.words.iter().enumerate() {
            if k > 0 {
                f.write_str(" | ")?;
            }
            let part: TypeList = self.flat.0[self.boundaries[k]..self.boundaries[k + 1]]
                .to_vec()
                .into();
            write!(f, "{w}: {part}")?;
        }
        let links: Vec<String> = self
            .links
            .iter()
            .map(|(i, j)| format!("({i},{j})"))
            .collect();
        write!(
            f,
            "; links {}; residual {:?}",
            links.join(","),
            self.residual
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ParseOptions {
    pub max_combinations: usize,
}

impl Default for ParseOptions {
    fn default() -> Self {
        Self {
            max_combinations: DEFAULT_COMBINATION_LIMIT,
        }
    }
}

/// All parses of `words` to `target`, over every choice of lexicon entries.
/// Ordered by entry choice (first word varying slowest), then by link list.
pub fn parse(
    lex: &Lexicon,
    words: &[&str],
    target: &TypeList,
) -> Result<Vec<ParseWitness>, ParseError> {
    parse_with(lex, words, target, ParseOptions::default())
}

pub fn parse_with(
    lex: &Lexicon,
    words: &[&str],
    target: &TypeList,
    opts: ParseOptions,
) -> Result<Vec<ParseWitness>, ParseError> {
    if words.is_empty() {
        return Err(ParseError::Empty);
    }
    let mut options = Vec::with_capacity(words.len());
    for w in words {
        let e = lex
            .entries(w)
            .ok_or_else(|| ParseError::UnknownWord(w.to_string()))?;
        options.push(e);
    }
    let count = options
        .iter()
        .try_fold(1usize, |acc, e| acc.checked_mul(e.len()))
        .unwrap_or(usize::MAX);
    if count > opts.max_combinations {
        return Err(ParseError::TooManyCombinations {
            count,
            limit: opts.max_combinations,
        });
    }
    let mut out = Vec::new();
    let mut reports = Vec::new();
    let mut choice = vec![0usize; words.len()];
    loop {
        let mut flat = Vec::new();
        let mut boundaries = vec![0];
        for (k, &c) in choice.iter().enumerate() {
            flat.extend(options[k][c].ty.iter().cloned());
            boundaries.push(flat.len());
        }
        let found = reductions(&flat, &target.0);
        if found.is_empty() {
            reports.push(ResidualReport {
                entries: choice.clone(),
                residual: greedy_residual(&flat),
            });
        }
        for (links, residual) in found {
            out.push(ParseWitness {
                words: words.iter().map(|w| w.to_string()).collect(),
                entries: choice.clone(),
                flat: TypeList(flat.clone()),
                boundaries: boundaries.clone(),
                links,
                residual,
            });
        }
        // odometer with the last word fastest
        let mut k = words.len();
        loop {
            if k == 0 {
                return if out.is_empty() {
                    Err(ParseError::NoParse(reports))
                } else {
                    Ok(out)
                };
            }
            k -= 1;
            choice[k] += 1;
            if choice[k] < options[k].len() {
                break;
            }
            choice[k] = 0;
        }
    }
}

/// Sorted links and the residual positions left over.
pub type Reduction = (Vec<(usize, usize)>, Vec<usize>);

/// Every way to reduce `flat` to `target`, sorted by links.
pub fn reductions(flat: &[WireType], target: &[WireType]) -> Vec<Reduction> {
    let table = EmptyTable::new(flat);
    let mut out = Vec::new();
    let mut links = Vec::new();
    let mut residual = Vec::new();
    thread(
        &table,
        flat,
        target,
        0,
        0,
        &mut links,
        &mut residual,
        &mut out,
    );
    for (l, _) in &mut out {
        l.sort_unstable();
    }
    out.sort();
    out
}

/// `empty[i][j]`: the span `flat[i..j]` reduces to nothing.
struct EmptyTable {
    n: usize,
    empty: Vec<bool>,
}

impl EmptyTable {
    fn new(flat: &[WireType]) -> Self {
        let n = flat.len();
        let mut empty = vec![false; (n + 1) * (n + 1)];
        for i in 0..=n {
            empty[i * (n + 1) + i] = true;
        }
        // span lengths are even
        for len in (2..=n).step_by(2) {
            for i in 0..=n - len {
                let j = i + len;
                let ok = (i + 1..j).step_by(2).any(|k| {
                    flat[i].cancels_with(&flat[k])
                        && empty[(i + 1) * (n + 1) + k]
                        && empty[(k + 1) * (n + 1) + j]
                });
                empty[i * (n + 1) + j] = ok;
            }
        }
        Self { n, empty }
    }

    fn get(&self, i: usize, j: usize) -> bool {
        self.empty[i * (self.n + 1) + j]
    }
}

#[allow(clippy::too_many_arguments)]
fn thread(
    t: &EmptyTable,
    flat: &[WireType],
    target: &[WireType],
    p: usize,
    k: usize,
    links: &mut Vec<(usize, usize)>,
    residual: &mut Vec<usize>,
    out: &mut Vec<Reduction>,
) {
    let n = flat.len();
    if k == target.len() {
        if t.get(p, n) {
            let mut acc = Vec::new();
            matchings(t, flat, p, n, links, &mut |l| acc.push(l.to_vec()));
            for l in acc {
                out.push((l, residual.clone()));
            }
        }
        return;
    }
    for q in (p..n).step_by(2) {
        if flat[q] != target[k] || !t.get(p, q) {
            continue;
        }
        let mut prefixes = Vec::new();
        matchings(t, flat, p, q, links, &mut |l| prefixes.push(l.to_vec()));
        residual.push(q);
        for mut pre in prefixes {
            thread(t, flat, target, q + 1, k + 1, &mut pre, residual, out);
        }
        residual.pop();
    }
}

type LinkSink<'a> = dyn FnMut(&[(usize, usize)]) + 'a;

/// Calls `emit` with `links` extended by each perfect non-crossing matching of `flat[i..j]`.
fn matchings(
    t: &EmptyTable,
    flat: &[WireType],
    i: usize,
    j: usize,
    links: &mut Vec<(usize, usize)>,
    emit: &mut LinkSink,
) {
    if i == j {
        emit(links);
        return;
    }
    for k in (i + 1..j).step_by(2) {
        if !(flat[i].cancels_with(&flat[k]) && t.get(i + 1, k) && t.get(k + 1, j)) {
            continue;
        }
        links.push((i, k));
        matchings(t, flat, i + 1, k, links, &mut |inner| {
            let mut inner = inner.to_vec();
            matchings(t, flat, k + 1, j, &mut inner, emit);
        });
        links.pop();
    }
}

/// Stack reduction canceling whenever the top of the stack meets its partner.
pub fn greedy_residual(flat: &[WireType]) -> TypeList {
    let mut stack: Vec<WireType> = Vec::new();
    for w in flat {
        if stack.last().is_some_and(|top| top.cancels_with(w)) {
            stack.pop();
        } else {
            stack.push(w.clone());
        }
    }
    TypeList(stack)
}
