//! Pregroup grammar: lexicons, parsing by type reduction, and the diagrams
//! that wire word meanings together along a parse.

mod grammar;
mod lexicon;
mod meaning;
mod parse;

pub use grammar::{grammar_diagram, word_diagram, GrammarError};
pub use lexicon::{
    density_from_senses, Entry, Lexicon, LexiconError, LexiconJson, Number, PayloadKind, SenseJson,
    Structural, WordJson,
};
pub use meaning::{
    disambiguate, meaning, sentence, words, Disambiguation, Sentence, SentenceError, Target,
};
pub use parse::{
    greedy_residual, parse, parse_with, reductions, ParseError, ParseOptions, ParseWitness,
    Reduction, ResidualReport, DEFAULT_COMBINATION_LIMIT,
};
