use std::sync::Arc;

use rand::{Rng as _, SeedableRng};
use statrs::distribution::{ContinuousCDF, Normal};

use cutclass::classify::ClassifierSpec;
use cutclass::objectives::{gen_discrete_random_linear, Objective};
use cutclass::optimize::{pairwise_labels, pairwise_labels_exhaustive};
use cutclass::seed::Rng;
use cutclass::{
    median_threshold, run_classify_opt, run_random, run_random2x, ActionSpace, BoxSpace, OptimizerConfig, SeedPolicy,
};

fn discrete_problem(seed: u64, size: usize) -> (ActionSpace, Arc<dyn Objective>) {
    let (space, f) = gen_discrete_random_linear(size, 4, &mut Rng::seed_from_u64(seed)).unwrap();
    (ActionSpace::Discrete(space), Arc::new(f))
}

/// Two-sided Mann-Whitney p-value with mid-ranks and the normal approximation.
fn mann_whitney_p(a: &[f64], b: &[f64]) -> f64 {
    let mut all: Vec<(f64, bool)> = a.iter().map(|&v| (v, true)).chain(b.iter().map(|&v| (v, false))).collect();
    all.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut ranks = vec![0.0; all.len()];
    let mut i = 0;
    let mut tie_term = 0.0;
    while i < all.len() {
        let mut j = i;
        while j + 1 < all.len() && all[j + 1].0 == all[i].0 {
            j += 1;
        }
        let t = (j - i + 1) as f64;
        tie_term += t * t * t - t;
        for r in ranks.iter_mut().take(j + 1).skip(i) {
            *r = (i + j) as f64 / 2.0 + 1.0;
        }
        i = j + 1;
    }
    let (n1, n2) = (a.len() as f64, b.len() as f64);
    let r1: f64 = all.iter().zip(&ranks).filter(|(x, _)| x.1).map(|(_, r)| r).sum();
    let u = r1 - n1 * (n1 + 1.0) / 2.0;
    let n = n1 + n2;
    let var = n1 * n2 / 12.0 * ((n + 1.0) - tie_term / (n * (n - 1.0)));
    let z = (u - n1 * n2 / 2.0) / var.sqrt();
    2.0 * (1.0 - Normal::new(0.0, 1.0).unwrap().cdf(z.abs()))
}

#[test]
fn zero_step_size_is_random_search() {
    let (space, f) = discrete_problem(1, 1024);
    let mut cfg = OptimizerConfig::new(5, 16, ClassifierSpec::Oracle);
    cfg.eta = 0.0;
    let (mut ours, mut theirs) = (Vec::new(), Vec::new());
    for s in 0..50 {
        let tr = run_classify_opt(f.clone(), &space, &cfg, SeedPolicy::new(10, s)).unwrap();
        // rounds 0..=4 hold the same 80 draws as random rounds 1..=5
        ours.push(tr.round(4).unwrap().best_so_far);
        let rr = run_random(f.as_ref(), &space, 16, 5, SeedPolicy::new(20, s)).unwrap();
        theirs.push(rr.round(5).unwrap().best_so_far);
    }
    let p = mann_whitney_p(&ours, &theirs);
    assert!(p > 0.01, "p = {p}");
}

#[test]
fn random_search_hits_the_top_set_at_the_order_statistic_rate() {
    let (space, f) = discrete_problem(2, 200);
    let ActionSpace::Discrete(ds) = &space else { unreachable!() };
    let mut values: Vec<f64> = ds.points().map(|x| f.evaluate(x).unwrap()).collect();
    values.sort_by(f64::total_cmp);
    let (k, n, rounds) = (5usize, 4usize, 3usize);
    let cutoff = values[k - 1];
    let runs = 2000;
    let hits = (0..runs)
        .filter(|&s| {
            let tr = run_random(f.as_ref(), &space, n, rounds, SeedPolicy::new(3, s)).unwrap();
            tr.round(rounds).unwrap().best_so_far <= cutoff
        })
        .count();
    let p = 1.0 - (1.0 - k as f64 / 200.0).powi((n * rounds) as i32);
    let freq = hits as f64 / runs as f64;
    let se = (p * (1.0 - p) / runs as f64).sqrt();
    assert!((freq - p).abs() < 4.0 * se, "{freq} vs {p}");
}

#[test]
fn evaluation_counts() {
    let space = ActionSpace::Box(BoxSpace::cube(2, -1.0, 1.0).unwrap());
    let mut rng = Rng::seed_from_u64(4);
    let f: Arc<dyn Objective> = Arc::new(cutclass::objectives::gen_random_linear(2, &mut rng).unwrap());
    let r2 = run_random2x(f.as_ref(), &space, 7, 3, SeedPolicy::new(0, 0)).unwrap();
    assert!(r2.rounds.iter().all(|r| r.values.len() == 14));
    assert_eq!(r2.total_evaluations(), 42);
    let r1 = run_random(f.as_ref(), &space, 7, 3, SeedPolicy::new(0, 0)).unwrap();
    assert_eq!(r1.total_evaluations(), 21);

    let cfg = OptimizerConfig::new(1, 10, ClassifierSpec::Oracle);
    let tr = run_classify_opt(f, &space, &cfg, SeedPolicy::new(0, 0)).unwrap();
    assert_eq!(tr.rounds.iter().map(|r| r.t).collect::<Vec<_>>(), vec![0, 1]);
    assert_eq!(tr.total_evaluations(), 20);
    assert_eq!(tr.result.unwrap().total_evaluations, 20);
}

/// Expected agreement between the `c`-comparison label and the exact
/// above-median label for a point of uniform rank, by midpoint quadrature.
fn agreement_integral(c: usize) -> f64 {
    let steps = 20_000;
    (0..steps)
        .map(|k| {
            let u = (k as f64 + 0.5) / steps as f64;
            let above: f64 = (c / 2 + 1..=c)
                .map(|w| {
                    let binom = (0..w).fold(1.0, |acc, i| acc * (c - i) as f64 / (i + 1) as f64);
                    binom * u.powi(w as i32) * (1.0 - u).powi((c - w) as i32)
                })
                .sum();
            if u > 0.5 {
                above
            } else {
                1.0 - above
            }
        })
        .sum::<f64>()
        / steps as f64
}

#[test]
fn pairwise_label_agreement() {
    let mut rng = Rng::seed_from_u64(5);
    let mut mean = |c: usize| {
        let mut agree = 0usize;
        let mut total = 0usize;
        for _ in 0..50 {
            let batch: Vec<f64> = (0..100).map(|_| rng.random::<f64>()).collect();
            let alpha = median_threshold(&batch).unwrap();
            let labels = pairwise_labels(&batch, &batch, c, &mut rng);
            agree += batch.iter().zip(&labels).filter(|(y, &z)| (**y > alpha) == z).count();
            total += batch.len();
        }
        agree as f64 / total as f64
    };
    let (a5, a10, a20) = (mean(5), mean(10), mean(20));
    assert!(a5 < a10 && a10 < a20, "{a5} {a10} {a20}");
    let expected = agreement_integral(10);
    assert!((expected - 0.8769).abs() < 1e-3, "{expected}");
    assert!((a10 - expected).abs() < 0.02, "{a10} vs {expected}");
}

#[test]
fn exhaustive_comparisons_reproduce_median_labels() {
    let mut rng = Rng::seed_from_u64(6);
    for n in [5usize, 6, 51, 100] {
        let batch: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
        let labels = pairwise_labels_exhaustive(&batch, &batch);
        let mut sorted = batch.clone();
        sorted.sort_by(f64::total_cmp);
        // odd n: the lower median; even n: the upper median
        let alpha = if n % 2 == 1 { median_threshold(&batch).unwrap() } else { sorted[n / 2] };
        let direct: Vec<bool> = batch.iter().map(|&y| y > alpha).collect();
        assert_eq!(labels, direct, "n = {n}");
    }
}

#[test]
fn classifier_only_sees_observed_points() {
    // a run on a finite space never reports values it did not evaluate
    let (space, f) = discrete_problem(7, 300);
    let ActionSpace::Discrete(ds) = &space else { unreachable!() };
    let mut cfg = OptimizerConfig::new(4, 12, ClassifierSpec::TreeEnsemble(Default::default()));
    cfg.eta = 0.5;
    let tr = run_classify_opt(f.clone(), &space, &cfg, SeedPolicy::new(1, 1)).unwrap();
    let mut best = f64::INFINITY;
    for r in &tr.rounds {
        let idx = r.indices.as_ref().unwrap();
        for (&i, &y) in idx.iter().zip(&r.values) {
            assert_eq!(f.evaluate(ds.point(i)).unwrap(), y);
            best = best.min(y);
        }
        assert_eq!(r.best_so_far, best);
    }
}
