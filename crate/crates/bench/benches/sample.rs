use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use cutclass::classify::ConstantLabeler;
use cutclass::sample::{ContinuousSamplerConfig, DiscreteWeights, ParticleState};
use cutclass::{BoxSpace, Decision, DiscreteSpace, SoftLabeler};
use cutclass_bench::{cloud, rng};

/// Cuts the half-space `x_0 > 0`.
struct HalfSpace;

impl SoftLabeler for HalfSpace {
    fn decide(&self, x: &[f64]) -> Decision {
        if x[0] > 0.0 {
            Decision::Cut
        } else {
            Decision::Keep
        }
    }
}

fn discrete(c: &mut Criterion) {
    let mut g = c.benchmark_group("multiplicative_weights");
    for &len in &[1024usize, 65536] {
        let points = cloud(len, 8, 1)
            .into_iter()
            .enumerate()
            .map(|(i, x)| (format!("p{i}"), x))
            .collect();
        let space = DiscreteSpace::new(points).unwrap();
        g.bench_function(BenchmarkId::new("update", len), |b| {
            b.iter(|| {
                let mut w = DiscreteWeights::uniform(len, 0.5).unwrap();
                w.mw_update(&HalfSpace, &space)
            })
        });
        let mut w = DiscreteWeights::uniform(len, 0.5).unwrap();
        w.mw_update(&HalfSpace, &space);
        g.bench_function(BenchmarkId::new("draw_100", len), |b| b.iter(|| w.draw(100, &mut rng(2)).unwrap()));
    }
    g.finish();
}

fn continuous(c: &mut Criterion) {
    let mut g = c.benchmark_group("particle_sampler");
    g.sample_size(20);
    for &d in &[4usize, 30] {
        let space = BoxSpace::cube(d, -1.0, 1.0).unwrap();
        let mut state = ParticleState::new(space, 0.5, ContinuousSamplerConfig::default()).unwrap();
        for _ in 0..5 {
            state.push_classifier(Box::new(HalfSpace));
        }
        state.push_classifier(Box::new(ConstantLabeler(Decision::Abstain)));
        state.set_latest_batch(cloud(100, d, 3));
        g.bench_function(BenchmarkId::new("draw_100", d), |b| b.iter(|| state.draw(100, &mut rng(4)).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, discrete, continuous);
criterion_main!(benches);
