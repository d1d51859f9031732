use std::hint::black_box;

use anticart::par::Execution;
use anticart::protocols::{sophisticated_composition_demo, TeleportCheck};
use anticart::random::{rng, DiagramSampler};
use anticart::resource::{conversion_rate, RateSearch, ResourcePresentation};
use anticart::rewrite::{equal, normalize, EqualityMode, SemanticCheck};
use anticart::semantics::Model;
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

const MODES: [(&str, Execution); 2] = [
    ("sequential", Execution::Sequential),
    ("parallel", Execution::Parallel),
];

fn teleport(c: &mut Criterion) {
    let mut g = c.benchmark_group("teleport_check");
    for d in [2, 3] {
        for (name, exec) in MODES {
            let check = TeleportCheck::new(d, 25, 1e-9, 1).with_execution(exec);
            g.bench_with_input(BenchmarkId::new(name, d), &check, |b, check| {
                b.iter(|| black_box(check.run().unwrap()))
            });
        }
    }
    g.finish();
}

fn rate(c: &mut Criterion) {
    let p = ResourcePresentation::from_json(
        r#"{"atoms": ["A", "B", "C"], "rules": [
            {"from": ["A", "A"], "to": ["B", "B", "B"]},
            {"from": ["B", "C"], "to": ["A", "C"]},
            {"from": ["A"], "to": ["C"]}]}"#,
    )
    .unwrap();
    let mut g = c.benchmark_group("conversion_rate");
    for (name, exec) in MODES {
        g.bench_function(name, |b| {
            b.iter(|| black_box(conversion_rate("A", "B", &p, RateSearch::new(6), exec).unwrap()))
        });
    }
    g.finish();
}

fn semantic_equality(c: &mut Criterion) {
    let demo = sophisticated_composition_demo(4, 3).unwrap();
    let mut g = c.benchmark_group("semantic_equality");
    for (name, exec) in MODES {
        let mode = EqualityMode::Semantic(
            SemanticCheck::new(demo.model.clone(), 1)
                .with_trials(64)
                .with_execution(exec),
        );
        g.bench_function(name, |b| {
            b.iter(|| black_box(equal(&demo.before, &demo.after, &mode).unwrap()))
        });
    }
    g.finish();
}

fn soundness_sweep(c: &mut Criterion) {
    let s = DiagramSampler {
        bases: vec!["a".into(), "b".into()],
        max_order: 2,
        max_wires: 4,
        box_labels: 3,
    };
    let cases: Vec<_> = (0..64u64)
        .map(|seed| {
            let mut r = rng(seed);
            let inputs = s.types(&mut r, 1);
            let d = s.sample(&mut r, &inputs, 10);
            let nf = normalize(&d).unwrap().diagram;
            (d, nf)
        })
        .collect();
    let model = Model::uniform(s.bases.iter(), 3);
    let mut g = c.benchmark_group("soundness_sweep");
    for (name, exec) in MODES {
        g.bench_function(name, |b| {
            b.iter(|| {
                let ok = anticart::par::map_slice(exec, &cases, |(d, nf)| {
                    let mode = EqualityMode::Semantic(
                        SemanticCheck::new(model.clone(), 7).with_execution(Execution::Sequential),
                    );
                    equal(d, nf, &mode).unwrap()
                });
                black_box(ok)
            })
        });
    }
    g.finish();
}

criterion_group!(benches, teleport, rate, semantic_equality, soundness_sweep);
criterion_main!(benches);
