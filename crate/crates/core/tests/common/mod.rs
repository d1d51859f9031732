//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

pub mod criteria;

use std::collections::BTreeMap;
use std::path::PathBuf;

use anticart::diagram::{Diagram, Dst, GeneratorKind, PayloadMode, Src};
use anticart::pregroup::{Lexicon, Reduction};
use anticart::semantics::Model;
use anticart::tensor::{Tensor, C64};
use anticart::types::{TypeList, WireType};
use rand::Rng;

pub fn asset(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../assets")
        .join(name)
}

pub fn demo_lexicon() -> Lexicon {
    Lexicon::load(asset("demo.json")).unwrap()
}

pub fn tl(s: &str) -> TypeList {
    s.parse().unwrap()
}

/// Every non-crossing way to link `flat` with no leftover wire under an arc,
/// found by walking left to right with a stack of open arcs. Returns
/// `(links, residual)` pairs.
pub fn brute_reductions(flat: &[WireType]) -> Vec<Reduction> {
    fn go(
        flat: &[WireType],
        i: usize,
        open: &mut Vec<usize>,
        links: &mut Vec<(usize, usize)>,
        residual: &mut Vec<usize>,
        out: &mut Vec<Reduction>,
    ) {
        if i == flat.len() {
            if open.is_empty() {
                let mut l = links.clone();
                l.sort();
                out.push((l, residual.clone()));
            }
            return;
        }
        if open.is_empty() {
            residual.push(i);
            go(flat, i + 1, open, links, residual, out);
            residual.pop();
        }
        open.push(i);
        go(flat, i + 1, open, links, residual, out);
        open.pop();
        if let Some(&top) = open.last() {
            if flat[top].base == flat[i].base && flat[top].order + 1 == flat[i].order {
                open.pop();
                links.push((top, i));
                go(flat, i + 1, open, links, residual, out);
                links.pop();
                open.push(top);
            }
        }
    }
    let mut out = Vec::new();
    go(
        flat,
        0,
        &mut Vec::new(),
        &mut Vec::new(),
        &mut Vec::new(),
        &mut out,
    );
    out
}

/// Brute-force evaluation: sums over every assignment of a basis index to
/// every edge, multiplying node entries read straight from the definitions.
pub fn brute_evaluate(d: &Diagram, model: &Model) -> Tensor {
    let dim = |w: &WireType| model.dims()[&w.base];
    let edges = d.edges();
    let edge_dims: Vec<usize> = edges
        .iter()
        .map(|e| match e.src {
            Src::Input(i) => dim(&d.inputs()[i]),
            Src::Node(n, p) => dim(&d.nodes()[n].cod()[p]),
        })
        .collect();
    // edge index at each node port
    let mut in_edge: Vec<Vec<usize>> = d.nodes().iter().map(|g| vec![0; g.dom().len()]).collect();
    let mut out_edge: Vec<Vec<usize>> = d.nodes().iter().map(|g| vec![0; g.cod().len()]).collect();
    let mut input_edge = vec![0; d.inputs().len()];
    let mut output_edge = vec![0; d.outputs().len()];
    for (k, e) in edges.iter().enumerate() {
        match e.src {
            Src::Input(i) => input_edge[i] = k,
            Src::Node(n, p) => out_edge[n][p] = k,
        }
        match e.dst {
            Dst::Output(j) => output_edge[j] = k,
            Dst::Node(n, p) => in_edge[n][p] = k,
        }
    }
    let open_dims: Vec<usize> = input_edge
        .iter()
        .chain(&output_edge)
        .map(|&k| edge_dims[k])
        .collect();
    let mut data = vec![C64::new(0.0, 0.0); open_dims.iter().product()];
    let total: usize = edge_dims.iter().product();
    let mut assign = vec![0usize; edges.len()];
    for _ in 0..total {
        let mut prod = C64::new(1.0, 0.0);
        for (n, g) in d.nodes().iter().enumerate() {
            let ins: Vec<usize> = in_edge[n].iter().map(|&k| assign[k]).collect();
            let outs: Vec<usize> = out_edge[n].iter().map(|&k| assign[k]).collect();
            prod *= node_entry(g.kind(), g, &ins, &outs, model);
            if prod == C64::new(0.0, 0.0) {
                break;
            }
        }
        if prod != C64::new(0.0, 0.0) {
            let mut flat = 0;
            for (&k, &dk) in input_edge.iter().chain(&output_edge).zip(&open_dims) {
                flat = flat * dk + assign[k];
            }
            data[flat] += prod;
        }
        for k in (0..assign.len()).rev() {
            assign[k] += 1;
            if assign[k] < edge_dims[k] {
                break;
            }
            assign[k] = 0;
        }
    }
    Tensor::new(open_dims, data).unwrap()
}

fn node_entry(
    kind: GeneratorKind,
    g: &anticart::diagram::Generator,
    ins: &[usize],
    outs: &[usize],
    model: &Model,
) -> C64 {
    let one = C64::new(1.0, 0.0);
    let zero = C64::new(0.0, 0.0);
    let all_equal = |xs: &[usize]| xs.windows(2).all(|w| w[0] == w[1]);
    match kind {
        GeneratorKind::Cup => {
            if outs[0] == outs[1] {
                one
            } else {
                zero
            }
        }
        GeneratorKind::Cap => {
            if ins[0] == ins[1] {
                one
            } else {
                zero
            }
        }
        GeneratorKind::Identity => {
            if ins[0] == outs[0] {
                one
            } else {
                zero
            }
        }
        GeneratorKind::Swap => {
            if ins[0] == outs[1] && ins[1] == outs[0] {
                one
            } else {
                zero
            }
        }
        GeneratorKind::Spider => {
            let legs: Vec<usize> = ins.iter().chain(outs).copied().collect();
            if all_equal(&legs) {
                one
            } else {
                zero
            }
        }
        GeneratorKind::Box => {
            assert!(matches!(
                g.mode(),
                PayloadMode::Pure | PayloadMode::Conjugate
            ));
            let p = model.payload(g.payload_key()).expect("payload present");
            let idx: Vec<usize> = ins.iter().chain(outs).copied().collect();
            let shape: Vec<usize> = g
                .dom()
                .iter()
                .chain(g.cod().iter())
                .map(|w| model.dims()[&w.base])
                .collect();
            let mut flat = 0;
            for (&i, &d) in idx.iter().zip(&shape) {
                flat = flat * d + i;
            }
            let v = p.values()[flat];
            if g.mode() == PayloadMode::Conjugate {
                v.conj()
            } else {
                v
            }
        }
    }
}

/// Random dimensions in `1..=max` for the given bases.
pub fn random_dims(rng: &mut impl Rng, bases: &[String], max: usize) -> BTreeMap<String, usize> {
    bases
        .iter()
        .map(|b| (b.clone(), rng.random_range(1..=max)))
        .collect()
}

/// Largest entry magnitude.
pub fn scale_of(t: &Tensor) -> f64 {
    t.values().iter().map(|x| x.norm()).fold(0.0, f64::max)
}

/// A random lexicon with a handful of sentences and a target to parse them to.
pub struct ParseCase {
    pub lexicon: Lexicon,
    pub sentences: Vec<Vec<String>>,
    pub target: TypeList,
}

fn random_wire(rng: &mut impl Rng, bases: usize) -> WireType {
    WireType::new(
        format!("b{}", rng.random_range(0..bases)),
        rng.random_range(-2..=2),
    )
}

/// A flat string that reduces to nothing: nested and concatenated cancel
/// pairs, `pairs` of them in total.
fn reducible(rng: &mut impl Rng, bases: usize, pairs: usize) -> Vec<WireType> {
    if pairs == 0 {
        return Vec::new();
    }
    let inside = rng.random_range(0..pairs);
    let w = random_wire(rng, bases);
    let mut out = vec![w.clone()];
    out.extend(reducible(rng, bases, inside));
    out.push(w.anti_left());
    out.extend(reducible(rng, bases, pairs - 1 - inside));
    out
}

/// Lexicons of up to six words over up to five bases with orders in -2..=2.
/// Half of the cases plant a sentence that is known to reduce to the target.
pub fn random_parse_case(rng: &mut impl Rng) -> ParseCase {
    let bases = rng.random_range(1..=5);
    let n_words = rng.random_range(1..=6);
    let mut entries: Vec<Vec<TypeList>> = Vec::new();
    for _ in 0..n_words {
        let senses = rng.random_range(1..=2);
        let e = (0..senses)
            .map(|_| {
                let len = rng.random_range(1..=3);
                (0..len).map(|_| random_wire(rng, bases)).collect()
            })
            .collect();
        entries.push(e);
    }
    let target: TypeList = (0..rng.random_range(0..=1))
        .map(|_| random_wire(rng, bases))
        .collect();
    let mut sentences = Vec::new();
    if rng.random_bool(0.5) {
        // E0 r E1 split into consecutive words of at most three wires
        let pairs = rng.random_range(1..=5);
        let left = rng.random_range(0..=pairs);
        let mut flat = reducible(rng, bases, left);
        flat.extend(target.iter().cloned());
        flat.extend(reducible(rng, bases, pairs - left));
        let mut words = Vec::new();
        let mut at = 0;
        while at < flat.len() {
            let len = rng.random_range(1..=3).min(flat.len() - at);
            words.push(TypeList(flat[at..at + len].to_vec()));
            at += len;
        }
        let mut sentence = Vec::new();
        for w in words {
            sentence.push(format!("p{}", entries.len()));
            entries.push(vec![w]);
        }
        sentences.push(sentence);
    }
    for _ in 0..3 {
        let len = rng.random_range(1..=4);
        sentences.push(
            (0..len)
                .map(|_| format!("w{}", rng.random_range(0..n_words)))
                .collect(),
        );
    }
    let mut words = Vec::new();
    for (k, es) in entries.iter().enumerate() {
        let name = if k < n_words {
            format!("w{k}")
        } else {
            format!("p{k}")
        };
        for ty in es {
            words.push(anticart::pregroup::WordJson {
                word: name.clone(),
                ty: ty.to_string(),
                payload: "dense".into(),
                data: Some(vec![anticart::pregroup::Number::Real(1.0); 1 << ty.len()]),
                senses: None,
            });
        }
    }
    let json = anticart::pregroup::LexiconJson {
        bases: (0..bases).map(|b| (format!("b{b}"), 2)).collect(),
        words,
        targets: None,
    };
    ParseCase {
        lexicon: Lexicon::from_spec(json).unwrap(),
        sentences,
        target,
    }
}

/// Parser output against brute-force enumeration over every entry choice.
/// Returns whether any parse exists, or a description of the mismatch.
pub fn compare_with_brute_force(case: &ParseCase, sentence: &[String]) -> Result<bool, String> {
    use anticart::pregroup::{parse, ParseError};
    use std::collections::BTreeSet;
    let words: Vec<&str> = sentence.iter().map(String::as_str).collect();
    let mut want = BTreeSet::new();
    let options: Vec<_> = words
        .iter()
        .map(|w| case.lexicon.entries(w).unwrap())
        .collect();
    let mut choice = vec![0usize; words.len()];
    'outer: loop {
        let flat: Vec<WireType> = choice
            .iter()
            .zip(&options)
            .flat_map(|(&c, es)| es[c].ty.iter().cloned())
            .collect();
        for (links, residual) in brute_reductions(&flat) {
            let rt: TypeList = residual.iter().map(|&i| flat[i].clone()).collect();
            if rt == case.target {
                want.insert((choice.clone(), links, residual));
            }
        }
        for k in (0..choice.len()).rev() {
            choice[k] += 1;
            if choice[k] < options[k].len() {
                continue 'outer;
            }
            choice[k] = 0;
        }
        break;
    }
    let got = match parse(&case.lexicon, &words, &case.target) {
        Ok(ws) => {
            for w in &ws {
                if !w.check(&case.target) {
                    return Err(format!("witness fails its own check: {w}"));
                }
            }
            let set: BTreeSet<_> = ws
                .iter()
                .map(|w| (w.entries.clone(), w.links.clone(), w.residual.clone()))
                .collect();
            if set.len() != ws.len() {
                return Err("duplicate witnesses".into());
            }
            set
        }
        Err(ParseError::NoParse(_)) => BTreeSet::new(),
        Err(e) => return Err(e.to_string()),
    };
    if got != want {
        return Err(format!(
            "{sentence:?} to {}: parser {got:?}, brute force {want:?}",
            case.target
        ));
    }
    Ok(!got.is_empty())
}
