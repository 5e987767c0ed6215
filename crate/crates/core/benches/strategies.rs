use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use twophase::elab::elaborate_program;
use twophase::harness::{fuzz, gen_program, FuzzConfig};
use twophase::logic::Vc;
use twophase::par::Strategy;
use twophase::refine::{discharge, gen_vcs, RefEnv, RefineConfig};

const STRATEGIES: [(&str, Strategy); 2] = [("sequential", Strategy::Sequential), ("parallel", Strategy::Parallel)];

fn fuzz_trials(c: &mut Criterion) {
    let mut group = c.benchmark_group("fuzz");
    group.sample_size(10);
    for (name, strategy) in STRATEGIES {
        let config = FuzzConfig { trials: 64, strategy, ..FuzzConfig::default() };
        group.bench_with_input(BenchmarkId::new(name, config.trials), &config, |b, config| b.iter(|| fuzz(config)));
    }
    group.finish();
}

fn vc_discharge(c: &mut Criterion) {
    let vcs: Vec<Vc> = (0..200)
        .filter_map(|seed| {
            let p = gen_program(seed, 30);
            let w = elaborate_program(&p).ok()?.target;
            gen_vcs(&RefEnv::new(), &w, None).ok().map(|(_, vcs)| vcs)
        })
        .flatten()
        .collect();
    let mut group = c.benchmark_group("discharge");
    for (name, strategy) in STRATEGIES {
        let config = RefineConfig { strategy, ..RefineConfig::default() };
        group.bench_with_input(BenchmarkId::new(name, vcs.len()), &vcs, |b, vcs| b.iter(|| discharge(vcs, config)));
    }
    group.finish();
}

criterion_group!(benches, fuzz_trials, vc_discharge);
criterion_main!(benches);
