use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anticart::diagram::Diagram;
use anticart::par::Execution;
use anticart::pregroup::{
    disambiguate, meaning, parse, sentence, words, Lexicon, ParseError, ParseWitness,
    SentenceError, Target,
};
use anticart::protocols::{ProtocolError, TeleportCheck};
use anticart::resource::{conversion_rate, RateSearch, ResourceError, ResourcePresentation};
use anticart::semantics::{entropy, similarity, SimilarityKind};
use anticart::tensor::Tensor;
use anticart::types::TypeList;
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

#[derive(Parser)]
#[command(
    name = "anticart",
    version,
    about = "String diagrams, pregroup meanings and process-theory demos"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Seed for every random draw.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Numerical tolerance.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Run batch work on one thread.
    #[arg(long, global = true)]
    sequential: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Tsv,
}

#[derive(Subcommand)]
enum Command {
    /// List every reduction of a sentence to the target type.
    Parse {
        lexicon: PathBuf,
        sentence: String,
        /// Target type, or `auto` for the lexicon's target list.
        #[arg(long, default_value = "auto")]
        target: String,
    },
    /// Evaluate a sentence to its meaning tensor.
    Meaning {
        lexicon: PathBuf,
        sentence: String,
        #[arg(long, default_value = "auto")]
        target: String,
        #[arg(long)]
        parse_index: Option<usize>,
        /// Doubled semantics: print a density matrix and its entropy.
        #[arg(long)]
        thick: bool,
    },
    /// Cosine similarity of two sentence meanings (overlap of densities with --thick).
    Similarity {
        lexicon: PathBuf,
        first: String,
        second: String,
        #[arg(long, default_value = "auto")]
        target: String,
        #[arg(long)]
        thick: bool,
    },
    /// Entropy of a word before and after attaching a relative clause.
    Disambiguate {
        lexicon: PathBuf,
        word: String,
        context: String,
    },
    /// Rewrite a diagram to normal form.
    Normalize { diagram: PathBuf },
    /// Check every branch of qudit teleportation.
    Teleport {
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = 25)]
        trials: usize,
    },
    /// Best verified conversion rate from one atom to another.
    Rate {
        presentation: PathBuf,
        from: String,
        to: String,
        #[arg(long, default_value_t = 3)]
        nmax: usize,
    },
}

/// A message for stderr and the exit code that goes with it.
struct Failure {
    code: u8,
    message: String,
}

const NEGATIVE: u8 = 1;
const INPUT: u8 = 2;
const AMBIGUOUS: u8 = 3;
const EXHAUSTED: u8 = 4;

fn fail(code: u8, message: impl ToString) -> Failure {
    Failure {
        code,
        message: message.to_string(),
    }
}

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Self {
        let code = match e {
            ParseError::NoParse(_) => NEGATIVE,
            ParseError::TooManyCombinations { .. } => EXHAUSTED,
            ParseError::UnknownWord(_) | ParseError::Empty => INPUT,
        };
        fail(code, e)
    }
}

impl From<SentenceError> for Failure {
    fn from(e: SentenceError) -> Self {
        match e {
            SentenceError::Parse(p) => p.into(),
            SentenceError::Ambiguous { .. } => fail(AMBIGUOUS, e),
            _ => fail(INPUT, e),
        }
    }
}

impl From<ResourceError> for Failure {
    fn from(e: ResourceError) -> Self {
        let code = match e {
            ResourceError::StateExplosion(_) => EXHAUSTED,
            ResourceError::BadWitness { .. } => NEGATIVE,
            _ => INPUT,
        };
        fail(code, e)
    }
}

impl From<ProtocolError> for Failure {
    fn from(e: ProtocolError) -> Self {
        let code = match e {
            ProtocolError::VerificationFailure { .. } => NEGATIVE,
            _ => INPUT,
        };
        fail(code, e)
    }
}

fn load_lexicon(path: &Path) -> Result<Lexicon, Failure> {
    Lexicon::load(path).map_err(|e| fail(INPUT, e))
}

fn target(s: &str) -> Result<Target, Failure> {
    if s == "auto" {
        return Ok(Target::Auto);
    }
    s.parse::<TypeList>()
        .map(Target::Type)
        .map_err(|e| fail(INPUT, format!("bad target `{s}`: {e}")))
}

fn run(cli: &Cli) -> Result<String, Failure> {
    let exec = if cli.sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    };
    match &cli.command {
        Command::Parse {
            lexicon,
            sentence,
            target: t,
        } => {
            let lex = load_lexicon(lexicon)?;
            let ws = words(sentence);
            let found = match target(t)? {
                Target::Type(ty) => parse(&lex, &ws, &ty)?,
                Target::Auto => {
                    let mut result = Err(ParseError::NoParse(Vec::new()));
                    for ty in lex.targets() {
                        result = parse(&lex, &ws, &ty);
                        if !matches!(result, Err(ParseError::NoParse(_))) {
                            break;
                        }
                    }
                    result?
                }
            };
            Ok(parse_report(&found, cli.format))
        }
        Command::Meaning {
            lexicon,
            sentence: text,
            target: t,
            parse_index,
            thick,
        } => {
            let lex = load_lexicon(lexicon)?;
            let s = sentence(&lex, &words(text), &target(t)?, *parse_index)?;
            let v = meaning(&s, &lex.model(), *thick)?.folded();
            let h = if *thick {
                Some(entropy(&v).map_err(|e| fail(INPUT, e))?)
            } else {
                None
            };
            Ok(tensor_report(&v, h, cli.format))
        }
        Command::Similarity {
            lexicon,
            first,
            second,
            target: t,
            thick,
        } => {
            let lex = load_lexicon(lexicon)?;
            let t = target(t)?;
            let model = lex.model();
            let eval = |text: &str| -> Result<Tensor, Failure> {
                let s = sentence(&lex, &words(text), &t, None)?;
                Ok(meaning(&s, &model, *thick)?)
            };
            let kind = if *thick {
                SimilarityKind::NormalizedOverlap
            } else {
                SimilarityKind::Cosine
            };
            let x = similarity(&eval(first)?, &eval(second)?, kind).map_err(|e| fail(INPUT, e))?;
            Ok(match cli.format {
                Format::Json => json!({ "similarity": x }).to_string(),
                _ => format!("{x}"),
            })
        }
        Command::Disambiguate {
            lexicon,
            word,
            context,
        } => {
            let lex = load_lexicon(lexicon)?;
            let d = disambiguate(&lex, word, &words(context))?;
            let phrase = d.phrase.join(" ");
            Ok(match cli.format {
                Format::Json => json!({
                    "phrase": phrase,
                    "before": d.before,
                    "after": d.after,
                    "decreased": d.decreased(),
                })
                .to_string(),
                Format::Tsv => {
                    format!("phrase\tbefore\tafter\n{phrase}\t{}\t{}", d.before, d.after)
                }
                Format::Text => format!(
                    "{word}: {:.6} bits\n{phrase}: {:.6} bits\n{}",
                    d.before,
                    d.after,
                    if d.decreased() {
                        "decreased"
                    } else {
                        "not decreased"
                    }
                ),
            })
        }
        Command::Normalize { diagram } => {
            let text = std::fs::read_to_string(diagram)
                .map_err(|e| fail(INPUT, format!("{}: {e}", diagram.display())))?;
            let d = Diagram::from_json(&text).map_err(|e| fail(INPUT, e))?;
            let nf = anticart::rewrite::normalize(&d).map_err(|e| fail(INPUT, e))?;
            Ok(match cli.format {
                Format::Json => {
                    let trace: Vec<_> = nf
                        .trace
                        .iter()
                        .map(|s| json!({ "rule": s.rule.to_string(), "nodes": s.nodes }))
                        .collect();
                    json!({ "diagram": nf.diagram.to_json_value(), "trace": trace }).to_string()
                }
                _ => nf.diagram.to_json(),
            })
        }
        Command::Teleport { dim, trials } => {
            let check = TeleportCheck::new(*dim, *trials, cli.tol, cli.seed).with_execution(exec);
            let reports = check.reports()?;
            let out = match cli.format {
                Format::Json => serde_json::Value::from(
                    reports
                        .iter()
                        .map(|r| {
                            json!({
                                "branch": r.branch,
                                "fidelity": r.fidelity,
                                "probability": r.probability,
                                "deviation": r.deviation,
                            })
                        })
                        .collect::<Vec<_>>(),
                )
                .to_string(),
                _ => {
                    let mut s = String::from("branch\tfidelity\tprobability");
                    for r in &reports {
                        write!(
                            s,
                            "\n{}\t{:.12}\t{:.12}",
                            r.branch, r.fidelity, r.probability
                        )
                        .unwrap();
                    }
                    s
                }
            };
            if let Some(bad) = reports.iter().find(|r| r.deviation > cli.tol) {
                emit(&out);
                return Err(ProtocolError::VerificationFailure {
                    branch: bad.branch,
                    deviation: bad.deviation,
                }
                .into());
            }
            Ok(out)
        }
        Command::Rate {
            presentation,
            from,
            to,
            nmax,
        } => {
            let p = ResourcePresentation::load(presentation)?;
            let r = conversion_rate(from, to, &p, RateSearch::new(*nmax), exec)?;
            let (num, den) = r.fraction();
            Ok(match cli.format {
                Format::Json => json!({
                    "rate": r.value(),
                    "fraction": [num, den],
                    "n": r.best.map(|b| b.0),
                    "m": r.best.map(|b| b.1),
                    "n_max": r.search.n_max,
                    "m_max": r.search.m_max,
                })
                .to_string(),
                Format::Tsv => {
                    let (n, m) = r.best.map_or((String::new(), String::new()), |(n, m)| {
                        (n.to_string(), m.to_string())
                    });
                    format!("rate\tn\tm\n{num}/{den}\t{n}\t{m}")
                }
                Format::Text => r.to_string(),
            })
        }
    }
}

fn parse_report(found: &[ParseWitness], format: Format) -> String {
    let links = |w: &ParseWitness| -> String {
        w.links
            .iter()
            .map(|(i, j)| format!("({i},{j})"))
            .collect::<Vec<_>>()
            .join(",")
    };
    match format {
        Format::Json => serde_json::Value::from(
            found
                .iter()
                .map(|w| {
                    json!({
                        "entries": w.entries,
                        "flat": w.flat.to_string(),
                        "links": w.links,
                        "residual": w.residual_type().to_string(),
                        "residual_positions": w.residual,
                    })
                })
                .collect::<Vec<_>>(),
        )
        .to_string(),
        Format::Tsv => {
            let mut s = String::from("index\tentries\tlinks\tresidual");
            for (k, w) in found.iter().enumerate() {
                write!(
                    s,
                    "\n{k}\t{:?}\t{}\t{}",
                    w.entries,
                    links(w),
                    w.residual_type()
                )
                .unwrap();
            }
            s
        }
        Format::Text => {
            let mut s = format!("{} parse(s)", found.len());
            for (k, w) in found.iter().enumerate() {
                write!(
                    s,
                    "\n{k}: links {}; residual {}\n   {w}",
                    links(w),
                    w.residual_type()
                )
                .unwrap();
            }
            s
        }
    }
}

fn tensor_report(t: &Tensor, entropy: Option<f64>, format: Format) -> String {
    match format {
        Format::Json => {
            let mut v = json!({ "tensor": t });
            if let Some(h) = entropy {
                v["entropy"] = json!(h);
            }
            v.to_string()
        }
        Format::Tsv => {
            let mut s = String::from("index\tre\tim");
            let mut idx = vec![0usize; t.shape().len()];
            for x in t.values() {
                let label: Vec<String> = idx.iter().map(ToString::to_string).collect();
                write!(s, "\n{}\t{}\t{}", label.join(","), x.re, x.im).unwrap();
                for k in (0..idx.len()).rev() {
                    idx[k] += 1;
                    if idx[k] < t.shape()[k] {
                        break;
                    }
                    idx[k] = 0;
                }
            }
            if let Some(h) = entropy {
                write!(s, "\nentropy\t{h}").unwrap();
            }
            s
        }
        Format::Text => {
            let mut s = serde_json::to_string(t).expect("tensors serialize");
            if let Some(h) = entropy {
                write!(s, "\nentropy {h}").unwrap();
            }
            s
        }
    }
}

/// Writes a line to stdout, ignoring a closed pipe.
fn emit(out: &str) {
    let _ = writeln!(std::io::stdout().lock(), "{out}");
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            emit(&out);
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
