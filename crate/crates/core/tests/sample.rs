use rand::{Rng as _, SeedableRng};

use cutclass::sample::{ContinuousSamplerConfig, DiscreteWeights, ParticleState};
use cutclass::seed::Rng;
use cutclass::{BoxSpace, Decision, SoftLabeler};

struct HalfBox;

impl SoftLabeler for HalfBox {
    fn decide(&self, x: &[f64]) -> Decision {
        if x[0] > 0.0 {
            Decision::Cut
        } else {
            Decision::Keep
        }
    }
}

#[test]
fn repeated_updates_match_the_closed_form_product() {
    let eta = 0.3;
    let mut w = DiscreteWeights::uniform(10, eta).unwrap();
    let mut rng = Rng::seed_from_u64(1);
    let mut cuts = [0i32; 10];
    for _ in 0..6 {
        let mask: Vec<bool> = (0..10).map(|i| i == 3 || rng.random::<f64>() < 0.4).collect();
        for (c, &m) in cuts.iter_mut().zip(&mask) {
            *c += m as i32;
        }
        w.update_mask(&mask);
    }
    assert_eq!(cuts[3], 6);
    let raw: Vec<f64> = cuts.iter().map(|&m| (1.0 - eta).powi(m)).collect();
    let total: f64 = raw.iter().sum();
    for (i, p) in w.probabilities().iter().enumerate() {
        assert!((p - raw[i] / total).abs() < 1e-14);
    }
    assert!((w.log_prob(3) - (0.7f64.powi(6) / total).ln()).abs() < 1e-12);
}

#[test]
fn uniform_draw_frequencies() {
    let w = DiscreteWeights::uniform(4, 0.5).unwrap();
    let n = 100_000;
    let draws = w.draw(n, &mut Rng::seed_from_u64(2)).unwrap();
    let sd = (n as f64 * 0.25 * 0.75).sqrt();
    for k in 0..4 {
        let c = draws.iter().filter(|&&i| i == k).count() as f64;
        assert!((c - 0.25 * n as f64).abs() < 4.0 * sd, "point {k}: {c}");
    }
}

#[test]
fn half_box_cut_keeps_a_third_of_the_mass_on_the_cut_side() {
    let space = BoxSpace::cube(3, -1.0, 1.0).unwrap();
    let mut rng = Rng::seed_from_u64(3);
    // mirrored cloud, so the candidate distribution is symmetric in x_0
    let mut batch = Vec::new();
    for _ in 0..100 {
        let x = space.sample_uniform(&mut rng);
        let mut m = x.clone();
        m[0] = -m[0];
        batch.push(x);
        batch.push(m);
    }
    let mut state = ParticleState::new(space.clone(), 0.5, ContinuousSamplerConfig::default()).unwrap();
    state.push_classifier(Box::new(HalfBox));
    state.set_latest_batch(batch);
    let n = 10_000;
    let out = state.draw(n, &mut rng).unwrap();
    assert_eq!(out.points.len(), n);
    let frac = out.points.iter().filter(|x| x[0] > 0.0).count() as f64 / n as f64;
    let expected = (1.0 - 0.5) / (2.0 - 0.5);
    assert!((frac - expected).abs() < 0.02, "{frac}");
    assert!(out.points.iter().all(|x| space.contains(x)));
}

#[test]
fn draws_stay_in_the_box() {
    let space = BoxSpace::new(vec![0.0, -5.0], vec![0.1, 5.0]).unwrap();
    let mut rng = Rng::seed_from_u64(4);
    let cfg = ContinuousSamplerConfig {
        bandwidth_frac: 2.0,
        ..Default::default()
    };
    let mut state = ParticleState::new(space.clone(), 0.5, cfg).unwrap();
    let first = state.draw(50, &mut rng).unwrap();
    assert!(first.points.iter().all(|x| space.contains(x)));
    state.set_latest_batch(vec![vec![0.1, 5.0]; 5]);
    state.push_classifier(Box::new(HalfBox));
    let next = state.draw(500, &mut rng).unwrap();
    assert!(next.points.iter().all(|x| space.contains(x)));
}
