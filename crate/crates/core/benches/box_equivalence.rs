use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use ftpda::finite_turn::cfg_to_finite_turn_pipeline;
use ftpda::oracle::{box_equivalence, CapOverrides, EnumerationBox, Exec, Subject, Verdict};
use ftpda::text::parse_alphabet;
use ftpda::parse_grammar;

const GRAMMAR: &str = "start: S
S -> A1 E
E -> S A3 | S' A3
S' -> A B
A -> A1 F | A1 A2
F -> A A2
B -> A2 G | A2 A3
G -> B A3
A1 -> a1
A2 -> a2
A3 -> a3
";

fn bench(c: &mut Criterion) {
    let g = parse_grammar(GRAMMAR).unwrap();
    let alphabet = parse_alphabet("a1,a2,a3").unwrap();
    let pipeline = cfg_to_finite_turn_pipeline(&g, &alphabet, Default::default()).unwrap();
    let m = &pipeline.result.machine;
    let mut group = c.benchmark_group("box_equivalence");
    group.sample_size(10);
    for bound in [4, 6] {
        for (label, exec) in [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)] {
            group.bench_with_input(BenchmarkId::new(label, bound), &bound, |b, &bound| {
                b.iter(|| {
                    let v = box_equivalence(
                        Subject::Grammar(&g),
                        Subject::Pda(m),
                        EnumerationBox { bound },
                        &alphabet,
                        CapOverrides::default(),
                        exec,
                    )
                    .unwrap();
                    assert_eq!(v, Verdict::Equal);
                })
            });
        }
    }
    group.finish();
}

criterion_group!(benches, bench);
criterion_main!(benches);
