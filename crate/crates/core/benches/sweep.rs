use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use dadt::harness::{run_experiment, ExperimentConfig, PairSpec, Regime, SynthConfig};

fn config(threads: Option<usize>) -> ExperimentConfig {
    let pairs = (0..16)
        .map(|i| PairSpec::Synth {
            id: format!("s{i}"),
            synth: SynthConfig {
                n_attrs: 4,
                source_agreement: 0.08,
                target_correlation: 0.8,
                label_noise: 0.1,
                protected: true,
                seed: i,
                ..Default::default()
            },
        })
        .collect();
    let regimes = ["tt", "ntdk", "ptdk2", "ptdk3", "ftdk"]
        .iter()
        .map(|n| Regime::parse(n).unwrap())
        .collect();
    let mut cfg = ExperimentConfig::new(7, pairs, regimes);
    cfg.parallelism = threads;
    cfg
}

fn sweep(c: &mut Criterion) {
    let mut g = c.benchmark_group("sweep_16_pairs");
    g.sample_size(10);
    for (name, threads) in [("sequential", Some(1)), ("rayon", None)] {
        let cfg = config(threads);
        g.bench_function(name, |b| b.iter(|| run_experiment(black_box(&cfg)).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, sweep);
criterion_main!(benches);
