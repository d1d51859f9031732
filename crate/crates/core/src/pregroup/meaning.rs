//! Sentence meanings: parse, wire up, evaluate.

use thiserror::Error;

use super::grammar::{grammar_diagram, GrammarError};
use super::lexicon::{Lexicon, PayloadKind, Structural};
use super::parse::{parse, ParseError, ParseWitness};
use crate::diagram::Diagram;
use crate::semantics::{entropy, evaluate, Doubling, EvalError, Model};
use crate::tensor::{Tensor, TensorError};
use crate::types::TypeList;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SentenceError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("{count} parses; pick one by index")]
    Ambiguous { count: usize },
    #[error("parse index {index} out of range ({count} parses)")]
    BadIndex { index: usize, count: usize },
    #[error(transparent)]
    Grammar(#[from] GrammarError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Tensor(#[from] TensorError),
    #[error("lexicon has no relative pronoun to attach a context with")]
    NoRelativePronoun,
}

/// Which target types to try.
#[derive(Debug, Clone, PartialEq)]
pub enum Target {
    Type(TypeList),
    /// The lexicon's target list, first one with a parse wins.
    Auto,
}

/// A sentence split on whitespace.
pub fn words(sentence: &str) -> Vec<&str> {
    sentence.split_whitespace().collect()
}

/// The chosen parse and its diagram.
#[derive(Debug, Clone, PartialEq)]
pub struct Sentence {
    pub witness: ParseWitness,
    pub diagram: Diagram,
    /// Number of parses found for the chosen target.
    pub parses: usize,
}

/// Parses `words` and builds the diagram of parse `index`, which may be
/// omitted only when the parse is unique.
pub fn sentence(
    lex: &Lexicon,
    words: &[&str],
    target: &Target,
    index: Option<usize>,
) -> Result<Sentence, SentenceError> {
    let all = match target {
        Target::Type(t) => parse(lex, words, t)?,
        Target::Auto => {
            let mut first_err = None;
            let mut found = None;
            for t in lex.targets() {
                match parse(lex, words, &t) {
                    Ok(ws) => {
                        found = Some(ws);
                        break;
                    }
                    Err(e @ ParseError::NoParse(_)) => {
                        first_err.get_or_insert(e);
                    }
                    Err(e) => return Err(e.into()),
                }
            }
            match found {
                Some(ws) => ws,
                None => return Err(first_err.unwrap_or(ParseError::NoParse(Vec::new())).into()),
            }
        }
    };
    let count = all.len();
    let i = match index {
        Some(i) if i < count => i,
        Some(i) => return Err(SentenceError::BadIndex { index: i, count }),
        None if count == 1 => 0,
        None => return Err(SentenceError::Ambiguous { count }),
    };
    let witness = all.into_iter().nth(i).expect("index checked");
    let diagram = grammar_diagram(lex, &witness)?;
    Ok(Sentence {
        witness,
        diagram,
        parses: count,
    })
}

/// Sentence tensor. Thick meanings come back as density matrices with the
/// wires as rows and their conjugates as columns.
pub fn meaning(s: &Sentence, model: &Model, thick: bool) -> Result<Tensor, SentenceError> {
    if thick {
        let m = model.clone().with_doubling(Doubling::Thick);
        Ok(evaluate(&s.diagram, &m)?.deinterleave())
    } else {
        Ok(evaluate(&s.diagram, model)?)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Disambiguation {
    pub phrase: Vec<String>,
    pub before: f64,
    pub after: f64,
}

impl Disambiguation {
    pub fn decreased(&self) -> bool {
        self.after < self.before
    }
}

/// Entropy of `word` alone and of `word <pronoun> context…`, both thick.
pub fn disambiguate(
    lex: &Lexicon,
    word: &str,
    context: &[&str],
) -> Result<Disambiguation, SentenceError> {
    let pronoun = lex
        .words()
        .find(|w| {
            lex.entries(w).is_some_and(|es| {
                es.iter()
                    .any(|e| matches!(e.payload, PayloadKind::Structural(Structural::Relative, _)))
            })
        })
        .ok_or(SentenceError::NoRelativePronoun)?
        .to_string();
    let model = lex.model();
    let target = Target::Type(
        lex.entries(word)
            .map_or_else(TypeList::unit, |es| es[0].ty.clone()),
    );
    let alone = sentence(lex, &[word], &target, None)?;
    let before = entropy(&meaning(&alone, &model, true)?)?;
    let mut phrase = vec![word, pronoun.as_str()];
    phrase.extend_from_slice(context);
    let s = sentence(lex, &phrase, &target, None)?;
    let after = entropy(&meaning(&s, &model, true)?)?;
    Ok(Disambiguation {
        phrase: phrase.iter().map(|w| w.to_string()).collect(),
        before,
        after,
    })
}
