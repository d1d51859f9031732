//! Lexicons: words with pregroup types and payloads.
//!
//! ```json
//! { "bases": {"n": 4, "s": 2},
//!   "words": [
//!     {"word": "Alice", "type": "n", "payload": "dense", "data": [1, 0, 0, 0]},
//!     {"word": "queen", "type": "n", "payload": "mixed",
//!      "senses": [{"weight": 0.5, "data": [1, 0, 0, 0]}, {"weight": 0.5, "data": [0, 1, 0, 0]}]},
//!     {"word": "not", "type": "(n.L s) (n.L s).R", "payload": "structural:negation",
//!      "data": [0, 1, 1, 0]}
//!   ],
//!   "targets": ["s", "n"] }
//! ```
//!
//! Data entries are either plain reals or `[re, im]` pairs, read row-major
//! over the type's wires. Mixed payloads are density matrices on the doubled
//! wires `[w0, w̄0, w1, w̄1, …]`; they may be given directly as `data` or as
//! weighted `senses` (pure vectors).

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::semantics::Model;
use crate::tensor::{Tensor, C64};
use crate::types::{Signature, TypeError, TypeList};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LexiconError {
    #[error("malformed lexicon: {0}")]
    Json(String),
    #[error("cannot read {path}: {reason}")]
    Io { path: String, reason: String },
    #[error("word `{word}`: {source}")]
    Type { word: String, source: TypeError },
    #[error("base `{0}` needs a positive dimension")]
    BadDimension(String),
    #[error("word `{word}` has an empty type")]
    EmptyType { word: String },
    #[error("word `{word}`: unknown payload kind `{kind}`")]
    UnknownPayloadKind { word: String, kind: String },
    #[error("word `{word}`: payload has {found} entries, type needs {expected}")]
    DataShape {
        word: String,
        expected: usize,
        found: usize,
    },
    #[error("word `{word}`: {reason}")]
    BadStructural { word: String, reason: String },
    #[error("target `{target}`: {source}")]
    Target { target: String, source: TypeError },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Structural {
    /// Nested cups; a word that only passes wires through.
    Identity,
    /// Nested cups with the negation box on the innermost cup's left leg.
    Negation,
    /// Subject relative pronoun `b.L b c.R b`: copies the noun wire into
    /// the clause and deletes the clause's sentence wire.
    Relative,
}

#[derive(Debug, Clone, PartialEq)]
pub enum PayloadKind {
    Dense(Option<Tensor>),
    Mixed(Option<Tensor>),
    Structural(Structural, Option<Tensor>),
}

impl PayloadKind {
    pub fn label(&self) -> &'static str {
        match self {
            PayloadKind::Dense(_) => "dense",
            PayloadKind::Mixed(_) => "mixed",
            PayloadKind::Structural(Structural::Identity, _) => "structural:identity",
            PayloadKind::Structural(Structural::Negation, _) => "structural:negation",
            PayloadKind::Structural(Structural::Relative, _) => "structural:relative",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Entry {
    pub ty: TypeList,
    pub payload: PayloadKind,
    /// Key under which the payload tensor is stored in the model.
    pub key: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Lexicon {
    dims: BTreeMap<String, usize>,
    entries: BTreeMap<String, Vec<Entry>>,
    targets: Vec<TypeList>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Number {
    Real(f64),
    Complex([f64; 2]),
}

impl From<&Number> for C64 {
    fn from(n: &Number) -> C64 {
        match *n {
            Number::Real(x) => C64::new(x, 0.0),
            Number::Complex([re, im]) => C64::new(re, im),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SenseJson {
    pub weight: f64,
    pub data: Vec<Number>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WordJson {
    pub word: String,
    #[serde(rename = "type")]
    pub ty: String,
    pub payload: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub data: Option<Vec<Number>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub senses: Option<Vec<SenseJson>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LexiconJson {
    pub bases: BTreeMap<String, usize>,
    pub words: Vec<WordJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub targets: Option<Vec<String>>,
}

impl Lexicon {
    pub fn from_json(text: &str) -> Result<Self, LexiconError> {
        let j: LexiconJson =
            serde_json::from_str(text).map_err(|e| LexiconError::Json(e.to_string()))?;
        Self::from_spec(j)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, LexiconError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| LexiconError::Io {
            path: path.display().to_string(),
            reason: e.to_string(),
        })?;
        Self::from_json(&text)
    }

    pub fn from_spec(j: LexiconJson) -> Result<Self, LexiconError> {
        for (b, &d) in &j.bases {
            if d == 0 {
                return Err(LexiconError::BadDimension(b.clone()));
            }
        }
        let sig = Signature::new(j.bases.keys().cloned());
        let mut lex = Lexicon {
            dims: j.bases.clone(),
            entries: BTreeMap::new(),
            targets: Vec::new(),
        };
        for w in j.words {
            let entry = lex.build_entry(&sig, w.clone())?;
            lex.entries.entry(w.word).or_default().push(entry);
        }
        for t in j.targets.unwrap_or_default() {
            let ty = parse_type(&sig, &t).map_err(|source| LexiconError::Target {
                target: t.clone(),
                source,
            })?;
            lex.targets.push(ty);
        }
        Ok(lex)
    }

    fn build_entry(&self, sig: &Signature, w: WordJson) -> Result<Entry, LexiconError> {
        let word = w.word.clone();
        let ty = parse_type(sig, &w.ty).map_err(|source| LexiconError::Type {
            word: word.clone(),
            source,
        })?;
        if ty.is_empty() {
            return Err(LexiconError::EmptyType { word });
        }
        let index = self.entries.get(&word).map_or(0, Vec::len);
        let key = if index == 0 {
            word.clone()
        } else {
            format!("{word}#{index}")
        };
        let shape = self.shape(&ty);
        let data = |expected: usize| -> Result<Option<Vec<C64>>, LexiconError> {
            match &w.data {
                None => Ok(None),
                Some(d) if d.len() == expected => Ok(Some(d.iter().map(C64::from).collect())),
                Some(d) => Err(LexiconError::DataShape {
                    word: word.clone(),
                    expected,
                    found: d.len(),
                }),
            }
        };
        let payload = match w.payload.as_str() {
            "dense" => {
                let t = data(shape.iter().product())?
                    .map(|v| Tensor::new(shape.clone(), v).expect("length checked"));
                PayloadKind::Dense(t)
            }
            "mixed" => PayloadKind::Mixed(self.mixed_payload(&word, &shape, &w, data)?),
            kind => {
                let s = match kind {
                    "structural:identity" => Structural::Identity,
                    "structural:negation" => Structural::Negation,
                    "structural:relative" => Structural::Relative,
                    _ => {
                        return Err(LexiconError::UnknownPayloadKind {
                            word,
                            kind: kind.to_string(),
                        })
                    }
                };
                check_structural(&word, &ty, s)?;
                let extra = match s {
                    Structural::Negation => {
                        let leg = &ty[ty.len() / 2 - 1];
                        let d = self.dims[&leg.base];
                        let v = data(d * d)?.ok_or_else(|| LexiconError::BadStructural {
                            word: word.clone(),
                            reason: "negation needs a matrix in `data`".into(),
                        })?;
                        // stored as (in, out) so that `data` acts as a matrix on column vectors
                        let m = Tensor::new(vec![d, d], v).expect("length checked");
                        Some(m.permute(&[1, 0]))
                    }
                    _ => None,
                };
                PayloadKind::Structural(s, extra)
            }
        };
        Ok(Entry { ty, payload, key })
    }

    fn mixed_payload(
        &self,
        word: &str,
        shape: &[usize],
        w: &WordJson,
        data: impl Fn(usize) -> Result<Option<Vec<C64>>, LexiconError>,
    ) -> Result<Option<Tensor>, LexiconError> {
        let doubled: Vec<usize> = shape.iter().flat_map(|&d| [d, d]).collect();
        let len: usize = shape.iter().product();
        if let Some(senses) = &w.senses {
            let mut vecs = Vec::with_capacity(senses.len());
            for s in senses {
                if s.data.len() != len {
                    return Err(LexiconError::DataShape {
                        word: word.to_string(),
                        expected: len,
                        found: s.data.len(),
                    });
                }
                vecs.push((s.weight, s.data.iter().map(C64::from).collect::<Vec<_>>()));
            }
            return Ok(Some(density_from_senses(shape, &vecs)));
        }
        Ok(data(len * len)?.map(|v| Tensor::new(doubled, v).expect("length checked")))
    }

    pub fn dims(&self) -> &BTreeMap<String, usize> {
        &self.dims
    }

    pub fn signature(&self) -> Signature {
        Signature::new(self.dims.keys().cloned())
    }

    pub fn shape(&self, ty: &TypeList) -> Vec<usize> {
        ty.iter().map(|w| self.dims[&w.base]).collect()
    }

    pub fn entries(&self, word: &str) -> Option<&[Entry]> {
        self.entries.get(word).map(Vec::as_slice)
    }

    pub fn words(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    /// Targets tried by automatic parsing; `[s]` then `[n]` when the lexicon
    /// names none and those bases exist.
    pub fn targets(&self) -> Vec<TypeList> {
        if !self.targets.is_empty() {
            return self.targets.clone();
        }
        ["s", "n"]
            .iter()
            .filter(|b| self.dims.contains_key(**b))
            .map(|b| b.parse().expect("plain base parses"))
            .collect()
    }

    /// Dimensions plus every stored payload.
    pub fn model(&self) -> Model {
        let mut m = self.structural_model();
        for e in self.entries.values().flatten() {
            if let PayloadKind::Dense(Some(t)) | PayloadKind::Mixed(Some(t)) = &e.payload {
                m.insert_payload(e.key.clone(), t.clone());
            }
        }
        m
    }

    /// Dimensions plus structural payloads only, for filling word meanings
    /// from elsewhere.
    pub fn structural_model(&self) -> Model {
        let mut m = Model::new(self.dims.iter().map(|(b, &d)| (b.clone(), d)));
        for e in self.entries.values().flatten() {
            if let PayloadKind::Structural(_, Some(t)) = &e.payload {
                m.insert_payload(e.key.clone(), t.clone());
            }
        }
        m
    }

    /// Replaces the payload of `word`'s entry `index`.
    pub fn set_payload(&mut self, word: &str, index: usize, t: Tensor) -> Option<()> {
        let e = self.entries.get_mut(word)?.get_mut(index)?;
        match &mut e.payload {
            PayloadKind::Dense(p) | PayloadKind::Mixed(p) | PayloadKind::Structural(_, p) => {
                *p = Some(t)
            }
        }
        Some(())
    }
}

fn parse_type(sig: &Signature, s: &str) -> Result<TypeList, TypeError> {
    let ty: TypeList = s.parse()?;
    sig.check(&ty)?;
    Ok(ty)
}

/// Checks the shape rules of structural entries.
fn check_structural(word: &str, ty: &TypeList, s: Structural) -> Result<(), LexiconError> {
    let bad = |reason: &str| LexiconError::BadStructural {
        word: word.to_string(),
        reason: reason.to_string(),
    };
    match s {
        Structural::Identity | Structural::Negation => {
            let k = ty.len();
            if !k.is_multiple_of(2) {
                return Err(bad("type must pair up into nested cups"));
            }
            for i in 0..k / 2 {
                let (l, r) = (&ty[i], &ty[k - 1 - i]);
                if l.base != r.base || l.order != r.order + 1 {
                    return Err(bad("type must pair up into nested cups"));
                }
            }
            Ok(())
        }
        Structural::Relative => {
            let ok = ty.len() == 4
                && ty[0].order == 1
                && ty[1].order == 0
                && ty[3].order == 0
                && ty[2].order == -1
                && ty[0].base == ty[1].base
                && ty[1].base == ty[3].base;
            if ok {
                Ok(())
            } else {
                Err(bad("relative pronoun type must be `b.L b c.R b`"))
            }
        }
    }
}

/// `Σ_k w_k v_k v_k†` laid out on doubled wires `[w0, w̄0, w1, w̄1, …]`.
pub fn density_from_senses(shape: &[usize], senses: &[(f64, Vec<C64>)]) -> Tensor {
    let len: usize = shape.iter().product();
    let mut rho = vec![C64::new(0.0, 0.0); len * len];
    for (w, v) in senses {
        for i in 0..len {
            for j in 0..len {
                rho[i * len + j] += *w * v[i] * v[j].conj();
            }
        }
    }
    let k = shape.len();
    let full: Vec<usize> = shape.iter().chain(shape.iter()).copied().collect();
    let t = Tensor::new(full, rho).expect("square matrix");
    // axes [w0..wk, w̄0..w̄k] -> [w0, w̄0, w1, w̄1, …]
    let perm: Vec<usize> = (0..k).flat_map(|i| [i, k + i]).collect();
    t.permute(&perm)
}

impl fmt::Display for Entry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({})", self.ty, self.payload.label())
    }
}
