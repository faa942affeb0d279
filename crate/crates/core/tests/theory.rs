use rand::{Rng as _, SeedableRng};

use cutclass::classify::{BootstrapLinearConfig, CssLinear, OracleSublevel};
use cutclass::objectives::{gen_random_linear, Objective};
use cutclass::seed::Rng;
use cutclass::space::SpaceSummary;
use cutclass::theory::{
    abstention_rate, chisq_ball_bound, corollary_eta_and_bound, gaussian_min_bound, log_prob_trajectory,
    mc_chisq_ball, mc_gaussian_min, thm1_lower_bound, verify_thm1,
};
use cutclass::trace::{encode_mask, TraceHeader};
use cutclass::{Learner, LabeledSet, RoundRecord, RunTrace, SeedPolicy};

#[test]
fn bound_arithmetic() {
    let v = thm1_lower_bound(0.5, 0.5, 10, 0, 16).unwrap();
    assert!((v - (1.0 - 32f64.ln())).abs() < 1e-12);
    assert!((v - -2.4657).abs() < 1e-4);
    let (eta, bound) = corollary_eta_and_bound(0.1, 0.5, 40, 16).unwrap();
    assert!(eta > 0.0 && eta <= 0.5);
    assert!((bound - -1.4657).abs() < 1e-4, "{bound}");
}

/// A 16-point trace whose every round cuts x* = 0 together with points 1..=8.
fn adversarial_trace(eta: f64, rounds: usize) -> RunTrace {
    let mask: Vec<bool> = (0..16).map(|i| i <= 8).collect();
    let mut tr = RunTrace::new(TraceHeader {
        method: "adversarial".into(),
        seed: SeedPolicy::new(0, 0),
        space: SpaceSummary {
            kind: "discrete".into(),
            dim: 1,
            size: Some(16),
            optimum_index: Some(0),
            optimum_value: None,
        },
        config: serde_json::json!({ "eta": eta }),
    });
    for t in 0..=rounds {
        let prev = (1.0 - eta).powi(t as i32 - 1);
        let coverage = 9.0 * prev / (9.0 * prev + 7.0);
        tr.rounds.push(RoundRecord {
            t,
            points: vec![],
            indices: Some(vec![0]),
            values: vec![0.0],
            alpha: None,
            coverage: (t > 0).then_some(coverage),
            best_so_far: 0.0,
            cut_mask: (t > 0).then(|| encode_mask(&mask)),
            bandwidth: None,
            notes: vec![],
        });
    }
    tr
}

#[test]
fn always_cutting_the_optimum_still_respects_the_bound() {
    let (eta, rounds) = (0.5, 10);
    let tr = adversarial_trace(eta, rounds);
    let rep = verify_thm1(&tr, None).unwrap();
    assert!(rep.verdict);
    assert!(rep.notes.is_empty(), "{:?}", rep.notes);
    let last = rep.rounds.last().unwrap();
    assert_eq!(last.cuts_of_x_star, rounds);
    let q = (1.0 - eta).powi(rounds as i32);
    assert!((last.lhs - (q / (9.0 * q + 7.0)).ln()).abs() < 1e-12);
    let traj = log_prob_trajectory(&tr, 0).unwrap();
    assert_eq!(traj.len(), rounds + 1);
    assert!((traj[0] + 16f64.ln()).abs() < 1e-12);
}

#[test]
fn monte_carlo_limits() {
    let mut rng = Rng::seed_from_u64(1);
    let eye = vec![vec![1.0]];
    let half = mc_gaussian_min(&eye, &[1.0], 0.0, 0.0, 1, 100_000, &mut rng).unwrap();
    assert!((half.estimate - 0.5).abs() < 4.0 * half.std_error.max(1e-3), "{}", half.estimate);
    assert!((gaussian_min_bound(0.0, 0.0, 1) - 0.5).abs() < 1e-12);

    let never = mc_gaussian_min(&eye, &[1.0], 1.0, 50.0, 5, 10_000, &mut rng).unwrap();
    assert_eq!(never.estimate, 0.0);
    let never = mc_chisq_ball(4, 10, 1e3, 10_000, &mut rng).unwrap();
    assert_eq!(never.estimate, 0.0);

    let vacuous = mc_chisq_ball(3, 1, 1.0 + 1e-9, 10_000, &mut rng).unwrap();
    assert!(vacuous.bound > 0.999 && vacuous.estimate <= 1.0);
    assert!((chisq_ball_bound(10, 20, 3.0) - 20.0 * (3.0 * (-2.0f64).exp()).powi(5)).abs() < 1e-12);
}

fn planted_sample(seed: u64, n: usize) -> (LabeledSet, Vec<f64>) {
    let mut rng = Rng::seed_from_u64(seed);
    let f = gen_random_linear(2, &mut rng).unwrap();
    let rows: Vec<Vec<f64>> = (0..n).map(|_| vec![rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)]).collect();
    let values: Vec<f64> = rows.iter().map(|x| f.evaluate(x).unwrap()).collect();
    let labels = values.iter().map(|&y| y > 0.1).collect();
    let cutclass::objectives::SyntheticObjective::RandomLinear { w } = f else { unreachable!() };
    (LabeledSet::new(rows, labels, None).unwrap(), w)
}

fn probes(seed: u64, m: usize) -> Vec<Vec<f64>> {
    let mut rng = Rng::seed_from_u64(seed);
    (0..m).map(|_| vec![rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)]).collect()
}

#[test]
fn abstention_of_non_abstaining_classifiers_is_zero() {
    let mut rng = Rng::seed_from_u64(2);
    let f = std::sync::Arc::new(gen_random_linear(2, &mut rng).unwrap());
    let oracle = OracleSublevel::new(f, 0.0);
    let p = probes(3, 2000);
    assert_eq!(abstention_rate(&oracle, &p), 0.0);

    let (data, _) = planted_sample(4, 30);
    let single = BootstrapLinearConfig {
        b: 1,
        ..Default::default()
    };
    let h = single.fit(&data, &mut rng).unwrap();
    assert_eq!(abstention_rate(h.as_ref(), &p), 0.0);
}

#[test]
fn css_abstention_matches_the_disagreement_area() {
    for seed in 0..4u64 {
        let (data, _) = planted_sample(10 + seed, 8);
        if data.count_positive() == 0 || data.count_positive() == data.len() {
            continue;
        }
        let css = CssLinear::fit(&data).unwrap();
        // disagreement area measured on a 200 x 200 grid against a dense sweep
        // of consistent separators
        let mut seps = Vec::new();
        for ai in 0..720 {
            let a = ai as f64 * std::f64::consts::TAU / 720.0;
            let (c, s) = (a.cos(), a.sin());
            for bi in 0..=800 {
                let b = -2.0 + bi as f64 * 0.005;
                if data
                    .rows
                    .iter()
                    .zip(&data.labels)
                    .all(|(x, &z)| (c * x[0] + s * x[1] + b > 0.0) == z)
                {
                    seps.push([c, s, b]);
                }
            }
        }
        let grid: Vec<Vec<f64>> = (0..200)
            .flat_map(|i| (0..200).map(move |j| vec![-1.0 + (i as f64 + 0.5) / 100.0, -1.0 + (j as f64 + 0.5) / 100.0]))
            .collect();
        let area = grid
            .iter()
            .filter(|x| {
                let pos = seps.iter().filter(|g| g[0] * x[0] + g[1] * x[1] + g[2] > 0.0).count();
                pos > 0 && pos < seps.len()
            })
            .count() as f64
            / grid.len() as f64;
        let m = 20_000;
        let rate = abstention_rate(&css, &probes(50 + seed, m));
        let se = (area * (1.0 - area) / m as f64).sqrt();
        // the sweep sits inside the version space, so it can only shrink the area
        assert!((rate - area).abs() < 4.0 * se + 0.01, "seed {seed}: {rate} vs {area}");
    }
}
