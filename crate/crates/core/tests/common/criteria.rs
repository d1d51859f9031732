//! The acceptance criteria as reusable checks. Each returns a short detail
//! line on success and the first failure otherwise.

use anticart::diagram::{compose_par, compose_seq, snake, snake_mirror, Bend, Diagram};
use anticart::par::Execution;
use anticart::pregroup::{disambiguate, meaning, parse, sentence, words, Lexicon, Target};
use anticart::protocols::{
    teleportation_diagram, teleportation_model, TeleportCheck, TeleportationSpec, QUDIT,
};
use anticart::random::{complex_tensor, rng, rng_for, state_vector, DiagramSampler};
use anticart::resource::{
    conversion_rate, convertible, multiset, RateSearch, ResourcePresentation, SearchLimits,
};
use anticart::rewrite::normalize;
use anticart::semantics::{entropy, evaluate, Model};
use anticart::tensor::{Tensor, C64};
use anticart::types::{Signature, TypeList, WireType};
use rand::Rng;
use serde_json::Value;

use super::{
    asset, brute_evaluate, compare_with_brute_force, demo_lexicon, random_dims, random_parse_case,
    tl,
};

pub type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn laws_sampler() -> DiagramSampler {
    DiagramSampler {
        bases: vec!["a".into(), "b".into(), "c".into()],
        max_order: 2,
        max_wires: 5,
        box_labels: 3,
    }
}

/// Snakes of both chiralities, composed up to three deep, at orders -2..=2.
pub fn yanking() -> Check {
    let sig = Signature::new(["A"]);
    let mut checked = 0;
    for d in 1..=4 {
        let m = Model::new([("A", d)]);
        for z in -2..=2 {
            for depth in 1..=3 {
                for mask in 0..(1u32 << depth) {
                    let mut diag = Diagram::identity(&TypeList(vec![WireType::new("A", z)]));
                    for k in 0..depth {
                        let s = if mask >> k & 1 == 0 {
                            snake(&sig, "A", z)
                        } else {
                            snake_mirror(&sig, "A", z - 1)
                        };
                        diag = compose_seq(&diag, &s.map_err(|e| e.to_string())?)
                            .map_err(|e| e.to_string())?;
                    }
                    let nf = normalize(&diag).map_err(|e| e.to_string())?.diagram;
                    ensure(nf == Diagram::identity(diag.inputs()), || {
                        format!("d={d} z={z} depth={depth}: not the identity")
                    })?;
                    let t = evaluate(&diag, &m).map_err(|e| e.to_string())?;
                    let err = t
                        .rel_diff(&Tensor::identity(d))
                        .map_err(|e| e.to_string())?;
                    ensure(err <= 1e-9, || {
                        format!("d={d} z={z} depth={depth}: error {err:e}")
                    })?;
                    checked += 1;
                }
            }
        }
    }
    Ok(format!("{checked} snakes"))
}

/// 1000 instances each of associativity, units and interchange.
pub fn tautologies() -> Check {
    let s = laws_sampler();
    for seed in 0..1000u64 {
        let mut r = rng(seed);
        let k = r.random_range(0..3);
        let inputs = s.types(&mut r, k);
        let (a, b, c) = (
            r.random_range(0..5),
            r.random_range(0..5),
            r.random_range(0..5),
        );
        let f1 = s.sample(&mut r, &inputs, a);
        let f2 = s.sample(&mut r, f1.outputs(), b);
        let f3 = s.sample(&mut r, f2.outputs(), c);
        let seq = |x: &Diagram, y: &Diagram| compose_seq(x, y).map_err(|e| e.to_string());
        let left = seq(&seq(&f1, &f2)?, &f3)?;
        let right = seq(&f1, &seq(&f2, &f3)?)?;
        ensure(left.structurally_eq(&right), || {
            format!("seed {seed}: associativity")
        })?;
        let unit = seq(
            &seq(&Diagram::identity(f1.inputs()), &f1)?,
            &Diagram::identity(f1.outputs()),
        )?;
        ensure(unit.structurally_eq(&f1), || format!("seed {seed}: units"))?;
        ensure(
            compose_par(&Diagram::empty(), &f1).structurally_eq(&f1),
            || format!("seed {seed}: monoidal unit"),
        )?;
        let g1 = s.sample(&mut r, &inputs, c);
        let g2 = s.sample(&mut r, g1.outputs(), a);
        let lhs = seq(&compose_par(&f1, &g1), &compose_par(&f2, &g2))?;
        let rhs = compose_par(&seq(&f1, &f2)?, &seq(&g1, &g2)?);
        ensure(lhs.structurally_eq(&rhs), || {
            format!("seed {seed}: interchange")
        })?;
        let p3 = compose_par(&compose_par(&f1, &f2), &f3);
        ensure(
            p3.structurally_eq(&compose_par(&f1, &compose_par(&f2, &f3))),
            || format!("seed {seed}: tensor associativity"),
        )?;
    }
    Ok("1000 instances".into())
}

/// Parser against brute force on 200 random lexicons.
pub fn parser_oracle() -> Check {
    let (mut sentences, mut parsed) = (0, 0);
    for seed in 0..200u64 {
        let mut r = rng_for(seed, "parser-oracle");
        let case = random_parse_case(&mut r);
        for s in &case.sentences {
            sentences += 1;
            if compare_with_brute_force(&case, s).map_err(|e| format!("seed {seed}: {e}"))? {
                parsed += 1;
            }
        }
    }
    ensure(parsed > 0, || "no sentence parsed at all".into())?;
    Ok(format!("{sentences} sentences, {parsed} with parses"))
}

/// A lexicon with `n = 2`, `s = 2` and seeded random word tensors.
pub fn small_lexicon(seed: u64) -> (Lexicon, [Tensor; 3]) {
    let text = r#"{"bases": {"n": 2, "s": 2}, "words": [
        {"word": "Alice", "type": "n", "payload": "dense"},
        {"word": "hates", "type": "n.L s n.R", "payload": "dense"},
        {"word": "Bob", "type": "n", "payload": "dense"}]}"#;
    let mut lex = Lexicon::from_json(text).unwrap();
    let mut r = rng_for(seed, "alice-hates-bob");
    let a = complex_tensor(vec![2], &mut r);
    let h = complex_tensor(vec![2, 2, 2], &mut r);
    let b = complex_tensor(vec![2], &mut r);
    lex.set_payload("Alice", 0, a.clone());
    lex.set_payload("hates", 0, h.clone());
    lex.set_payload("Bob", 0, b.clone());
    (lex, [a, h, b])
}

pub fn alice_hates_bob() -> Check {
    for seed in 0..5 {
        let (lex, [a, h, b]) = small_lexicon(seed);
        let ws = parse(&lex, &["Alice", "hates", "Bob"], &tl("s")).map_err(|e| e.to_string())?;
        ensure(ws.len() == 1, || format!("{} witnesses", ws.len()))?;
        let w = &ws[0];
        ensure(w.links == [(0, 1), (3, 4)], || {
            format!("links {:?}", w.links)
        })?;
        ensure(w.residual_type() == tl("s"), || {
            format!("residual {}", w.residual_type())
        })?;
        let s = sentence(
            &lex,
            &["Alice", "hates", "Bob"],
            &Target::Type(tl("s")),
            None,
        )
        .map_err(|e| e.to_string())?;
        let v = meaning(&s, &lex.model(), false).map_err(|e| e.to_string())?;
        for k in 0..2 {
            let mut want = C64::new(0.0, 0.0);
            for i in 0..2 {
                for j in 0..2 {
                    want += a.get(&[i]) * h.get(&[i, k, j]) * b.get(&[j]);
                }
            }
            let err = (v.get(&[k]) - want).norm();
            ensure(err <= 1e-12, || format!("seed {seed} s={k}: error {err:e}"))?;
        }
    }
    Ok("links (0,1),(3,4), residual s".into())
}

/// The negation matrix read straight from the demo lexicon file.
fn negation_matrix() -> (usize, Vec<f64>) {
    let j: Value =
        serde_json::from_str(&std::fs::read_to_string(asset("demo.json")).unwrap()).unwrap();
    let not = j["words"]
        .as_array()
        .unwrap()
        .iter()
        .find(|w| w["word"] == "not")
        .unwrap();
    let data: Vec<f64> = not["data"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_f64().unwrap())
        .collect();
    ((data.len() as f64).sqrt() as usize, data)
}

pub fn negation() -> Check {
    let lex = demo_lexicon();
    let (d, nm) = negation_matrix();
    let neg = sentence(&lex, &words("Alice does not like Bob"), &Target::Auto, None)
        .map_err(|e| e.to_string())?;
    let pos = sentence(&lex, &words("Alice likes Bob"), &Target::Auto, None)
        .map_err(|e| e.to_string())?;
    for seed in 0..20u64 {
        let mut m = lex.structural_model();
        let mut r = rng_for(seed, "negation");
        for w in ["Alice", "Bob", "like"] {
            let shape = lex.shape(&lex.entries(w).unwrap()[0].ty);
            m.insert_payload(w, complex_tensor(shape, &mut r));
        }
        m.insert_payload("likes", m.payload("like").unwrap().clone());
        let vn = meaning(&neg, &m, false).map_err(|e| e.to_string())?;
        let vp = meaning(&pos, &m, false).map_err(|e| e.to_string())?;
        let want: Vec<C64> = (0..d)
            .map(|i| (0..d).map(|j| vp.get(&[j]) * nm[i * d + j]).sum())
            .collect();
        let err = vn
            .rel_diff(&Tensor::new(vec![d], want).unwrap())
            .map_err(|e| e.to_string())?;
        ensure(err <= 1e-9, || format!("seed {seed}: error {err:e}"))?;
    }
    Ok("20 payload sets".into())
}

/// `X^p Z^q` built from its matrix entries.
pub fn shift_clock(d: usize, branch: usize) -> Vec<Vec<C64>> {
    let (p, q) = (branch / d, branch % d);
    let w = C64::from_polar(1.0, 2.0 * std::f64::consts::PI / d as f64);
    let mut m = vec![vec![C64::new(0.0, 0.0); d]; d];
    for j in 0..d {
        // Z^q |j> = ω^{qj} |j>, then X^p shifts to |j + p>
        m[(j + p) % d][j] = w.powu((q * j) as u32);
    }
    m
}

/// Evaluates a teleportation branch fed with the state `psi`.
pub fn teleport_output(spec: &TeleportationSpec, psi: &Tensor) -> Result<Tensor, String> {
    let sig = Signature::new([QUDIT]);
    let state = anticart::diagram::make_generator(&sig, "psi", TypeList::unit(), tl(QUDIT), None)
        .map_err(|e| e.to_string())?;
    let d = state
        .then(&teleportation_diagram(spec).map_err(|e| e.to_string())?)
        .map_err(|e| e.to_string())?;
    let model = teleportation_model(spec.dim).with_payload("psi", psi.clone());
    evaluate(&d, &model).map_err(|e| e.to_string())
}

pub fn teleportation() -> Check {
    let trials = 25;
    for d in [2, 3] {
        TeleportCheck::new(d, trials, 1e-9, 7)
            .run()
            .map_err(|e| e.to_string())?;
        for k in 0..trials {
            let psi = Tensor::new(
                vec![d],
                state_vector(d, &mut rng_for(k as u64, "teleport-acceptance")),
            )
            .unwrap();
            let mut total = 0.0;
            for branch in 0..d * d {
                let spec = TeleportationSpec::new(d, branch, true).map_err(|e| e.to_string())?;
                let out = teleport_output(&spec, &psi)?;
                let overlap = psi.inner(&out).unwrap().norm_sqr();
                let fidelity = overlap / (psi.norm().powi(2) * out.norm().powi(2));
                ensure(fidelity >= 1.0 - 1e-9, || {
                    format!("d={d} branch {branch}: fidelity {fidelity}")
                })?;
                let raw = teleport_output(
                    &TeleportationSpec {
                        corrected: false,
                        ..spec
                    },
                    &psi,
                )?;
                let prob = raw.norm().powi(2) / psi.norm().powi(2);
                let expected = 1.0 / (d * d) as f64;
                ensure((prob - expected).abs() <= 1e-9, || {
                    format!("d={d} branch {branch}: probability {prob}")
                })?;
                total += prob;
            }
            ensure((total - 1.0).abs() <= 1e-9, || {
                format!("d={d}: probabilities sum to {total}")
            })?;
        }
    }
    Ok(format!("d=2,3, {trials} states per branch"))
}

pub fn anti_cartesian() -> Check {
    let sig = Signature::new(["A"]);
    for d in 2..=8 {
        let m = Model::new([("A", d)]);
        let cup = evaluate(
            &anticart::diagram::bend(&sig, "A", 0, Bend::Cup).unwrap(),
            &m,
        )
        .unwrap();
        let rank = cup.to_matrix(1).rank(1e-9);
        ensure(rank == d, || format!("d={d}: cup rank {rank}"))?;
    }
    let s = DiagramSampler {
        bases: vec!["a".into(), "b".into()],
        max_order: 2,
        max_wires: 4,
        box_labels: 3,
    };
    let mut pairs = 0;
    for seed in 0..400u64 {
        let mut r = rng(seed);
        let k = r.random_range(0..3);
        let inputs = s.types(&mut r, k);
        let (a, b) = (r.random_range(0..7), r.random_range(0..7));
        let f = s.sample(&mut r, &inputs, a);
        let g = s.sample(&mut r, &inputs, b);
        if f.outputs().len() != g.outputs().len() {
            continue;
        }
        let mut m = Model::uniform(s.bases.iter(), 1);
        m.fill_random_payloads(&f, seed).unwrap();
        m.fill_random_payloads(&g, seed).unwrap();
        let (tf, tg) = (evaluate(&f, &m).unwrap(), evaluate(&g, &m).unwrap());
        let (_, err) = tf.proportionality(&tg).map_err(|e| e.to_string())?;
        ensure(err <= 1e-9, || {
            format!("seed {seed}: not proportional ({err:e})")
        })?;
        pairs += 1;
    }
    Ok(format!(
        "cup rank d for d=2..8; {pairs} dim-1 pairs proportional"
    ))
}

pub fn ambiguity() -> Check {
    let lex = demo_lexicon();
    let queen =
        sentence(&lex, &["queen"], &Target::Type(tl("n")), None).map_err(|e| e.to_string())?;
    let rho = meaning(&queen, &lex.model(), true).map_err(|e| e.to_string())?;
    let h = entropy(&rho).map_err(|e| e.to_string())?;
    ensure((h - 3f64.log2()).abs() <= 1e-6, || {
        format!("queen entropy {h}")
    })?;
    let j: Value =
        serde_json::from_str(&std::fs::read_to_string(asset("disambiguation.json")).unwrap())
            .unwrap();
    let cases = j["cases"].as_array().unwrap();
    let mut worst: f64 = 0.0;
    for c in cases {
        let word = c["word"].as_str().unwrap();
        let ctx = words(c["context"].as_str().unwrap());
        let r = disambiguate(&lex, word, &ctx).map_err(|e| e.to_string())?;
        ensure(r.after < r.before, || {
            format!("{}: {} -> {}", r.phrase.join(" "), r.before, r.after)
        })?;
        worst = worst.max(r.after);
    }
    Ok(format!(
        "H = {h:.9}; {} contexts, largest after {worst:.4}",
        cases.len()
    ))
}

pub fn resources() -> Check {
    let limits = SearchLimits::default();
    let plumber = ResourcePresentation::load(asset("plumber.json")).map_err(|e| e.to_string())?;
    let w = convertible(&multiset(&["A", "A"]), &multiset(&["A"]), &plumber, limits)
        .map_err(|e| e.to_string())?
        .ok_or("plumber: not convertible")?;
    ensure(w.len() == 1, || {
        format!("plumber witness has {} steps", w.len())
    })?;
    let catalyst = ResourcePresentation::load(asset("catalyst.json")).map_err(|e| e.to_string())?;
    let none = convertible(&multiset(&["A"]), &multiset(&["B"]), &catalyst, limits)
        .map_err(|e| e.to_string())?;
    ensure(none.is_none(), || {
        "catalyst: converted without the catalyst".into()
    })?;
    let with = convertible(
        &multiset(&["A", "C"]),
        &multiset(&["B", "C"]),
        &catalyst,
        limits,
    )
    .map_err(|e| e.to_string())?;
    ensure(with.is_some(), || {
        "catalyst: refused with the catalyst present".into()
    })?;
    let doubling =
        ResourcePresentation::load(asset("resources.json")).map_err(|e| e.to_string())?;
    let rate = conversion_rate("A", "B", &doubling, RateSearch::new(3), Execution::Parallel)
        .map_err(|e| e.to_string())?;
    ensure(
        rate.best == Some((1, 2)) && rate.fraction() == (2, 1),
        || format!("rate {rate}"),
    )?;
    Ok(format!("rate {rate}"))
}

pub fn soundness() -> Check {
    let s = DiagramSampler {
        bases: vec!["a".into(), "b".into()],
        max_order: 2,
        max_wires: 4,
        box_labels: 3,
    };
    let mut worst: f64 = 0.0;
    for seed in 0..500u64 {
        let mut r = rng_for(seed, "soundness");
        let k = r.random_range(0..3);
        let inputs = s.types(&mut r, k);
        let n = r.random_range(0..=12);
        let d = s.sample(&mut r, &inputs, n);
        let mut m = Model::new(random_dims(&mut r, &s.bases, 4));
        m.fill_random_payloads(&d, seed)
            .map_err(|e| e.to_string())?;
        let before = evaluate(&d, &m).map_err(|e| e.to_string())?;
        let after = evaluate(&normalize(&d).map_err(|e| e.to_string())?.diagram, &m)
            .map_err(|e| e.to_string())?;
        let err = before.rel_diff(&after).map_err(|e| e.to_string())?;
        ensure(err <= 1e-9, || {
            format!("seed {seed}: relative error {err:e}")
        })?;
        worst = worst.max(err);
    }
    Ok(format!("500 diagrams, worst {worst:.1e}"))
}

/// Small diagrams against the brute-force contraction, used as a sanity
/// check that the evaluator itself is right before trusting soundness.
pub fn evaluator_matches_brute_force(seeds: u64) -> Check {
    let s = DiagramSampler {
        bases: vec!["a".into(), "b".into()],
        max_order: 2,
        max_wires: 3,
        box_labels: 2,
    };
    let mut compared = 0;
    for seed in 0..seeds {
        let mut r = rng_for(seed, "brute");
        let inputs = s.types(&mut r, 1);
        let n = r.random_range(0..6);
        let d = s.sample(&mut r, &inputs, n);
        if d.edges().len() > 14 {
            continue;
        }
        let mut m = Model::new(random_dims(&mut r, &s.bases, 2));
        m.fill_random_payloads(&d, seed).unwrap();
        let err = evaluate(&d, &m)
            .unwrap()
            .rel_diff(&brute_evaluate(&d, &m))
            .unwrap();
        ensure(err <= 1e-9, || format!("seed {seed}: {err:e}"))?;
        compared += 1;
    }
    Ok(format!("{compared} diagrams"))
}
