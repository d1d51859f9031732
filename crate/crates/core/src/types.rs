//! Wire types: an atomic base symbol together with an integer adjoint order.
//!
//! Order `0` is the plain type. Taking the left anti-type (`.L`) raises the
//! order by one, the right anti-type (`.R`) lowers it by one. A pair of
//! adjacent wires `(b^z, b^(z+1))` is exactly what a cap consumes and what a
//! cup produces in reverse order.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TypeError {
    #[error("empty base symbol in type token `{0}`")]
    EmptyBase(String),
    #[error("unknown adjoint suffix `{suffix}` in type token `{token}`")]
    BadSuffix { token: String, suffix: String },
    #[error("unbalanced parentheses in type expression `{0}`")]
    Unbalanced(String),
    #[error("undeclared base `{0}`")]
    UnknownBase(String),
}

/// A single wire: base symbol plus adjoint order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WireType {
    pub base: String,
    pub order: i32,
}

impl WireType {
    pub fn new(base: impl Into<String>, order: i32) -> Self {
        Self {
            base: base.into(),
            order,
        }
    }

    pub fn plain(base: impl Into<String>) -> Self {
        Self::new(base, 0)
    }

    /// Left anti-type (`x.L`), order + 1.
    pub fn anti_left(&self) -> Self {
        Self::new(self.base.clone(), self.order + 1)
    }

    /// Right anti-type (`x.R`), order - 1.
    pub fn anti_right(&self) -> Self {
        Self::new(self.base.clone(), self.order - 1)
    }

    /// True when `self` followed by `next` is a cancelable pair.
    pub fn cancels_with(&self, next: &WireType) -> bool {
        self.base == next.base && self.order + 1 == next.order
    }
}

impl fmt::Display for WireType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.base)?;
        let suffix = if self.order > 0 { ".L" } else { ".R" };
        for _ in 0..self.order.unsigned_abs() {
            f.write_str(suffix)?;
        }
        Ok(())
    }
}

impl FromStr for WireType {
    type Err = TypeError;

    /// Parses a single token such as `n`, `n.L`, `s.R.R`.
    fn from_str(token: &str) -> Result<Self, Self::Err> {
        let mut parts = token.split('.');
        let base = parts.next().unwrap_or_default();
        if base.is_empty() {
            return Err(TypeError::EmptyBase(token.to_string()));
        }
        let mut order = 0;
        for suffix in parts {
            match suffix {
                "L" => order += 1,
                "R" => order -= 1,
                other => {
                    return Err(TypeError::BadSuffix {
                        token: token.to_string(),
                        suffix: other.to_string(),
                    })
                }
            }
        }
        Ok(WireType::new(base, order))
    }
}

impl Serialize for WireType {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for WireType {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Ordered list of wires. The empty list is the monoidal unit.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TypeList(pub Vec<WireType>);

impl TypeList {
    pub fn unit() -> Self {
        Self(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, WireType> {
        self.0.iter()
    }

    pub fn concat(&self, other: &TypeList) -> TypeList {
        let mut wires = self.0.clone();
        wires.extend(other.0.iter().cloned());
        TypeList(wires)
    }

    /// Left adjoint of a compound type: reverse order, each wire `.L`.
    pub fn anti_left(&self) -> TypeList {
        TypeList(self.0.iter().rev().map(WireType::anti_left).collect())
    }

    /// Right adjoint of a compound type: reverse order, each wire `.R`.
    pub fn anti_right(&self) -> TypeList {
        TypeList(self.0.iter().rev().map(WireType::anti_right).collect())
    }

    pub fn bases(&self) -> impl Iterator<Item = &str> {
        self.0.iter().map(|w| w.base.as_str())
    }
}

impl From<Vec<WireType>> for TypeList {
    fn from(wires: Vec<WireType>) -> Self {
        Self(wires)
    }
}

impl FromIterator<WireType> for TypeList {
    fn from_iter<I: IntoIterator<Item = WireType>>(iter: I) -> Self {
        Self(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a TypeList {
    type Item = &'a WireType;
    type IntoIter = std::slice::Iter<'a, WireType>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl std::ops::Index<usize> for TypeList {
    type Output = WireType;

    fn index(&self, index: usize) -> &WireType {
        &self.0[index]
    }
}

impl fmt::Display for TypeList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("I");
        }
        for (i, w) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{w}")?;
        }
        Ok(())
    }
}

impl FromStr for TypeList {
    type Err = TypeError;

    /// Parses the whitespace-separated type syntax, including parenthesized
    /// groups: `(n.L s).R` distributes the suffix over the group with order
    /// reversal, giving `s.R n`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let tokens = tokenize(s);
        let mut pos = 0;
        let list = parse_seq(&tokens, &mut pos, s)?;
        if pos != tokens.len() {
            return Err(TypeError::Unbalanced(s.to_string()));
        }
        Ok(list)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Open,
    Close,
    Atom(String),
}

fn tokenize(s: &str) -> Vec<Tok> {
    let mut out = Vec::new();
    let mut cur = String::new();
    for ch in s.chars() {
        match ch {
            '(' | ')' => {
                if !cur.is_empty() {
                    out.push(Tok::Atom(std::mem::take(&mut cur)));
                }
                out.push(if ch == '(' { Tok::Open } else { Tok::Close });
            }
            c if c.is_whitespace() => {
                if !cur.is_empty() {
                    out.push(Tok::Atom(std::mem::take(&mut cur)));
                }
            }
            c => cur.push(c),
        }
    }
    if !cur.is_empty() {
        out.push(Tok::Atom(cur));
    }
    out
}

fn parse_seq(tokens: &[Tok], pos: &mut usize, src: &str) -> Result<TypeList, TypeError> {
    let mut wires = Vec::new();
    while *pos < tokens.len() {
        match &tokens[*pos] {
            Tok::Close => break,
            Tok::Atom(a) => {
                wires.push(a.parse::<WireType>()?);
                *pos += 1;
            }
            Tok::Open => {
                *pos += 1;
                let inner = parse_seq(tokens, pos, src)?;
                if tokens.get(*pos) != Some(&Tok::Close) {
                    return Err(TypeError::Unbalanced(src.to_string()));
                }
                *pos += 1;
                // A suffix attached to the closing paren arrives as an atom
                // starting with '.', e.g. ".R" or ".L.L".
                let mut group = inner;
                if let Some(Tok::Atom(a)) = tokens.get(*pos) {
                    if let Some(suffixes) = a.strip_prefix('.') {
                        for suffix in suffixes.split('.') {
                            group = match suffix {
                                "L" => group.anti_left(),
                                "R" => group.anti_right(),
                                other => {
                                    return Err(TypeError::BadSuffix {
                                        token: a.clone(),
                                        suffix: other.to_string(),
                                    })
                                }
                            };
                        }
                        *pos += 1;
                    }
                }
                wires.extend(group.0);
            }
        }
    }
    Ok(TypeList(wires))
}

/// The set of declared base symbols.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Signature {
    bases: BTreeSet<String>,
}

impl Signature {
    pub fn new<I, S>(bases: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self {
            bases: bases.into_iter().map(Into::into).collect(),
        }
    }

    pub fn declare(&mut self, base: impl Into<String>) {
        self.bases.insert(base.into());
    }

    pub fn contains(&self, base: &str) -> bool {
        self.bases.contains(base)
    }

    pub fn bases(&self) -> &BTreeSet<String> {
        &self.bases
    }

    pub fn check_base(&self, base: &str) -> Result<(), TypeError> {
        if self.contains(base) {
            Ok(())
        } else {
            Err(TypeError::UnknownBase(base.to_string()))
        }
    }

    pub fn check(&self, types: &TypeList) -> Result<(), TypeError> {
        types.bases().try_for_each(|b| self.check_base(b))
    }
}
