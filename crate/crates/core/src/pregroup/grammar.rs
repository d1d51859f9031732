//! From a parse to a diagram: word states side by side, one cap per link.

use thiserror::Error;

use super::lexicon::{Entry, Lexicon, PayloadKind, Structural};
use super::parse::ParseWitness;
use crate::diagram::{Diagram, DiagramBuilder, DiagramError, Generator, PayloadMode, Src};
use crate::types::{Signature, TypeList, WireType};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GrammarError {
    #[error("no payload data for `{0}`")]
    PayloadMissing(String),
    #[error("witness does not belong to this lexicon or sentence")]
    ForeignWitness,
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}

/// The meaning state of one lexicon entry, as a diagram with no inputs and
/// the entry's type as outputs.
pub fn word_diagram(sig: &Signature, word: &str, e: &Entry) -> Result<Diagram, GrammarError> {
    let mut b = DiagramBuilder::new(sig, TypeList::unit());
    let outs = match &e.payload {
        PayloadKind::Dense(p) | PayloadKind::Mixed(p) => {
            if p.is_none() {
                return Err(GrammarError::PayloadMissing(word.to_string()));
            }
            let mode = if matches!(e.payload, PayloadKind::Mixed(_)) {
                PayloadMode::Mixed
            } else {
                PayloadMode::Pure
            };
            let g = Generator::boxed(word, TypeList::unit(), e.ty.clone(), Some(e.key.clone()))
                .with_mode(mode);
            b.apply(g, &[])
        }
        PayloadKind::Structural(Structural::Identity, _) => nested_cups(&mut b, &e.ty),
        PayloadKind::Structural(Structural::Negation, p) => {
            if p.is_none() {
                return Err(GrammarError::PayloadMissing(word.to_string()));
            }
            let mut outs = nested_cups(&mut b, &e.ty);
            let leg = e.ty.len() / 2 - 1;
            let w = e.ty[leg].clone();
            let g = Generator::boxed(
                word,
                TypeList(vec![w.clone()]),
                TypeList(vec![w]),
                Some(e.key.clone()),
            );
            outs[leg] = b.apply(g, &[outs[leg]])[0];
            outs
        }
        PayloadKind::Structural(Structural::Relative, _) => {
            // b.L b c.R b: noun cup whose right leg is copied, clause cup whose
            // sentence leg is deleted
            let noun = &e.ty[1].base;
            let clause = &e.ty[2].base;
            let cup_n = b.apply(Generator::cup(noun, 0), &[]);
            let copies = b.apply(Generator::spider(noun, 1, 2), &[cup_n[1]]);
            let cup_s = b.apply(Generator::cup(clause, -1), &[]);
            b.apply(Generator::spider(clause, 1, 0), &[cup_s[0]]);
            vec![cup_n[0], copies[0], cup_s[1], copies[1]]
        }
    };
    Ok(b.finish(&outs)?)
}

/// Cups pairing position `i` with `len-1-i`, outermost first.
fn nested_cups(b: &mut DiagramBuilder, ty: &TypeList) -> Vec<Src> {
    let k = ty.len();
    let mut outs = vec![Src::Input(usize::MAX); k];
    for i in 0..k / 2 {
        let r: &WireType = &ty[k - 1 - i];
        let legs = b.apply(Generator::cup(&r.base, r.order), &[]);
        outs[i] = legs[0];
        outs[k - 1 - i] = legs[1];
    }
    outs
}

/// Word states in a row, a cap on every link, residual wires left open.
pub fn grammar_diagram(lex: &Lexicon, witness: &ParseWitness) -> Result<Diagram, GrammarError> {
    let sig = lex.signature();
    let mut b = DiagramBuilder::new(&sig, TypeList::unit());
    let mut srcs = Vec::with_capacity(witness.flat.len());
    for (k, word) in witness.words.iter().enumerate() {
        let e = lex
            .entries(word)
            .and_then(|es| es.get(witness.entries[k]))
            .ok_or(GrammarError::ForeignWitness)?;
        if e.ty.0[..] != witness.flat.0[witness.boundaries[k]..witness.boundaries[k + 1]] {
            return Err(GrammarError::ForeignWitness);
        }
        let d = word_diagram(&sig, word, e)?;
        srcs.extend(b.inline(&d, &[]));
    }
    for &(i, j) in &witness.links {
        let w = &witness.flat[i];
        b.apply(Generator::cap(&w.base, w.order), &[srcs[i], srcs[j]]);
    }
    let outs: Vec<Src> = witness.residual.iter().map(|&r| srcs[r]).collect();
    Ok(b.finish(&outs)?)
}
