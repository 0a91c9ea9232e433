use cobweave_core::par::Exec;
use cobweave_core::suite::{self, SuiteConfig};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn suite_criteria(c: &mut Criterion) {
    let mut group = c.benchmark_group("suite");
    group.sample_size(10);
    // Acceptance law (200 machines), functoriality (20 categorical machines)
    // and the operad laws.
    for id in [1u8, 6, 7] {
        for (name, exec) in [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)] {
            let cfg = SuiteConfig {
                exec,
                ..SuiteConfig::default()
            };
            group.bench_with_input(BenchmarkId::new(name, format!("criterion {id}")), &cfg, |b, cfg| {
                b.iter(|| {
                    let r = suite::run(id, cfg);
                    assert!(r.passed);
                    r.checks
                })
            });
        }
    }
    group.finish();
}

criterion_group!(benches, suite_criteria);
criterion_main!(benches);
