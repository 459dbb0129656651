//! Parallel against sequential execution of the sample-parallel stages.
//!
//! cargo bench -p protogame
//! cargo bench -p protogame --no-default-features   (both groups run sequentially)

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use protogame::analysis::{verify, AnalysisOptions};
use protogame::audit::AuditConfig;
use protogame::{get_protocol, Exec};

const MODES: [(&str, Exec); 2] = [("parallel", Exec::Auto), ("sequential", Exec::Sequential)];

fn sampling(c: &mut Criterion) {
    let entry = get_protocol("s2pc").unwrap();
    let mut group = c.benchmark_group("sample_params/s2pc");
    for n in [100, 1000] {
        for (label, exec) in MODES {
            let cfg = AuditConfig::new(42, n).with_exec(exec);
            group.bench_with_input(BenchmarkId::new(label, n), &cfg, |b, cfg| {
                b.iter(|| black_box(cfg.draw(&entry.model).unwrap()))
            });
        }
    }
    group.finish();
}

fn verification(c: &mut Criterion) {
    let mut group = c.benchmark_group("verify");
    group.sample_size(10);
    for name in ["fair_exchange", "s2pc"] {
        let entry = get_protocol(name).unwrap();
        for (label, exec) in MODES {
            let opts = AnalysisOptions {
                samples: 200,
                exec,
                ..AnalysisOptions::default()
            };
            group.bench_with_input(BenchmarkId::new(label, name), &opts, |b, opts| {
                b.iter(|| black_box(verify(&entry, opts).unwrap()))
            });
        }
    }
    group.finish();
}

criterion_group!(benches, sampling, verification);
criterion_main!(benches);
