use rand::Rng;
use rand_distr::StandardNormal;

use super::{benchmarks, check_box, Objective};
use crate::error::{Error, Result};
use crate::linalg::dot;
use crate::space::DiscreteSpace;

/// Synthetic test problems. Linear and linear-plus-quadratic problems live on
/// `[-1, 1]^d`; Shekel on `[0, 10]^4`; Hartmann on `[0, 1]^6`.
#[derive(Debug, Clone, PartialEq)]
pub enum SyntheticObjective {
    RandomLinear {
        w: Vec<f64>,
    },
    LinearQuadratic {
        w: Vec<f64>,
        /// Row-major `d x d` positive semidefinite matrix.
        a: Vec<f64>,
        x0: Vec<f64>,
        mix: f64,
    },
    Shekel4 {
        m: usize,
        a: [[f64; 4]; 10],
        c: [f64; 10],
    },
    Hartmann6 {
        alpha: [f64; 4],
        a: [[f64; 6]; 4],
        p: [[f64; 6]; 4],
    },
}

fn unit_normal<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Vec<f64> {
    loop {
        let w: Vec<f64> = (0..d).map(|_| rng.sample(StandardNormal)).collect();
        let n = dot(&w, &w).sqrt();
        if n > 0.0 {
            return w.into_iter().map(|v| v / n).collect();
        }
    }
}

/// `f(x) = w'x` with `w` a uniformly random unit vector.
pub fn gen_random_linear<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Result<SyntheticObjective> {
    if d == 0 {
        return Err(Error::Config("dimension must be at least 1".into()));
    }
    Ok(SyntheticObjective::RandomLinear {
        w: unit_normal(d, rng),
    })
}

/// A random linear function restricted to `size` points drawn uniformly from
/// `[-1, 1]^d`. Point ids are `p0`, `p1`, ...
pub fn gen_discrete_random_linear<R: Rng + ?Sized>(
    size: usize,
    d: usize,
    rng: &mut R,
) -> Result<(DiscreteSpace, SyntheticObjective)> {
    let f = gen_random_linear(d, rng)?;
    let points = (0..size)
        .map(|i| (format!("p{i}"), (0..d).map(|_| rng.random_range(-1.0..=1.0)).collect()))
        .collect();
    Ok((DiscreteSpace::new(points)?, f))
}

/// `f(x) = w'x + mix (x - x0)' A (x - x0)` with `A = G'G / d`. The linear part
/// is drawn first, so `mix = 0` reproduces `gen_random_linear` on the same stream.
pub fn gen_linear_quadratic<R: Rng + ?Sized>(
    d: usize,
    mix: f64,
    rng: &mut R,
) -> Result<SyntheticObjective> {
    if d == 0 {
        return Err(Error::Config("dimension must be at least 1".into()));
    }
    if !(mix >= 0.0) {
        return Err(Error::Config(format!("mix must be nonnegative, got {mix}")));
    }
    let w = unit_normal(d, rng);
    let g: Vec<f64> = (0..d * d).map(|_| rng.sample(StandardNormal)).collect();
    let mut a = vec![0.0; d * d];
    for i in 0..d {
        for j in i..d {
            let s: f64 = (0..d).map(|k| g[k * d + i] * g[k * d + j]).sum::<f64>() / d as f64;
            a[i * d + j] = s;
            a[j * d + i] = s;
        }
    }
    let x0 = (0..d).map(|_| rng.random_range(-1.0..=1.0)).collect();
    Ok(SyntheticObjective::LinearQuadratic { w, a, x0, mix })
}

impl SyntheticObjective {
    pub fn shekel(m: usize) -> Result<Self> {
        if !(1..=10).contains(&m) {
            return Err(Error::Config(format!("Shekel m must be in 1..=10, got {m}")));
        }
        Ok(SyntheticObjective::Shekel4 {
            m,
            a: benchmarks::SHEKEL_A,
            c: benchmarks::SHEKEL_C,
        })
    }

    pub fn hartmann6() -> Self {
        SyntheticObjective::Hartmann6 {
            alpha: benchmarks::HARTMANN6_ALPHA,
            a: benchmarks::HARTMANN6_A,
            p: benchmarks::HARTMANN6_P,
        }
    }

    /// Bounds of the (cubic) domain.
    pub fn bounds(&self) -> (f64, f64) {
        match self {
            SyntheticObjective::RandomLinear { .. } | SyntheticObjective::LinearQuadratic { .. } => {
                (-1.0, 1.0)
            }
            SyntheticObjective::Shekel4 { .. } => (0.0, 10.0),
            SyntheticObjective::Hartmann6 { .. } => (0.0, 1.0),
        }
    }

    /// Quadratic part alone; zero for the other variants.
    pub fn quadratic_part(&self, x: &[f64]) -> f64 {
        match self {
            SyntheticObjective::LinearQuadratic { a, x0, mix, .. } => {
                let d = x0.len();
                let diff: Vec<f64> = x.iter().zip(x0).map(|(u, v)| u - v).collect();
                let q: f64 = (0..d)
                    .map(|i| diff[i] * dot(&a[i * d..(i + 1) * d], &diff))
                    .sum();
                mix * q
            }
            _ => 0.0,
        }
    }

    /// Exact minimum of a linear objective on the cube: `-||w||_1` at `-sign(w)`.
    pub fn linear_minimum(&self) -> Option<(f64, Vec<f64>)> {
        match self {
            SyntheticObjective::RandomLinear { w } => Some((
                -w.iter().map(|v| v.abs()).sum::<f64>(),
                w.iter().map(|&v| if v > 0.0 { -1.0 } else { 1.0 }).collect(),
            )),
            _ => None,
        }
    }

    /// Gradient, used by the multi-start descent oracles in tests and tools.
    pub fn gradient(&self, x: &[f64]) -> Option<Vec<f64>> {
        match self {
            SyntheticObjective::RandomLinear { w } => Some(w.clone()),
            SyntheticObjective::LinearQuadratic { w, a, x0, mix } => {
                let d = w.len();
                let diff: Vec<f64> = x.iter().zip(x0).map(|(u, v)| u - v).collect();
                Some(
                    (0..d)
                        .map(|i| w[i] + 2.0 * mix * dot(&a[i * d..(i + 1) * d], &diff))
                        .collect(),
                )
            }
            _ => None,
        }
    }
}

impl Objective for SyntheticObjective {
    fn dim(&self) -> usize {
        match self {
            SyntheticObjective::RandomLinear { w } | SyntheticObjective::LinearQuadratic { w, .. } => {
                w.len()
            }
            SyntheticObjective::Shekel4 { .. } => 4,
            SyntheticObjective::Hartmann6 { .. } => 6,
        }
    }

    fn evaluate(&self, x: &[f64]) -> Result<f64> {
        match self {
            SyntheticObjective::RandomLinear { w } => {
                check_box(x, -1.0, 1.0, w.len(), "random linear")?;
                Ok(dot(w, x))
            }
            SyntheticObjective::LinearQuadratic { w, .. } => {
                check_box(x, -1.0, 1.0, w.len(), "linear+quadratic")?;
                Ok(dot(w, x) + self.quadratic_part(x))
            }
            SyntheticObjective::Shekel4 { m, a, c } => {
                check_box(x, 0.0, 10.0, 4, "shekel4")?;
                Ok(benchmarks::shekel_with(x, &a[..*m], &c[..*m]))
            }
            SyntheticObjective::Hartmann6 { alpha, a, p } => {
                check_box(x, 0.0, 1.0, 6, "hartmann6")?;
                Ok(benchmarks::hartmann_with(x, alpha, a, p))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn linear_examples() {
        let one = SyntheticObjective::RandomLinear { w: vec![1.0] };
        assert_eq!(one.evaluate(&[-1.0]).unwrap(), -1.0);
        assert_eq!(one.linear_minimum().unwrap().0, -1.0);
        let two = SyntheticObjective::RandomLinear { w: vec![0.6, 0.8] };
        let (v, x) = two.linear_minimum().unwrap();
        assert!((v + 1.4).abs() < 1e-12);
        assert_eq!(x, vec![-1.0, -1.0]);
        assert!((two.evaluate(&x).unwrap() - v).abs() < 1e-12);
        assert!(two.evaluate(&[1.5, 0.0]).is_err());
    }

    #[test]
    fn random_linear_is_unit_norm() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let SyntheticObjective::RandomLinear { w } = gen_random_linear(50, &mut rng).unwrap() else {
            unreachable!()
        };
        assert!((dot(&w, &w) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_mix_reduces_to_linear() {
        let lin = gen_random_linear(7, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        let quad = gen_linear_quadratic(7, 0.0, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..20 {
            let x: Vec<f64> = (0..7).map(|_| rng.random_range(-1.0..=1.0)).collect();
            assert_eq!(lin.evaluate(&x).unwrap(), quad.evaluate(&x).unwrap());
        }
    }

    #[test]
    fn quadratic_part_nonnegative() {
        let quad = gen_linear_quadratic(12, 1.0, &mut ChaCha8Rng::seed_from_u64(4)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let x: Vec<f64> = (0..12).map(|_| rng.random_range(-1.0..=1.0)).collect();
            assert!(quad.quadratic_part(&x) >= -1e-12);
        }
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let quad = gen_linear_quadratic(5, 1.0, &mut ChaCha8Rng::seed_from_u64(8)).unwrap();
        let x = vec![0.1, -0.3, 0.5, 0.0, -0.7];
        let g = quad.gradient(&x).unwrap();
        for j in 0..5 {
            let h = 1e-6;
            let mut xp = x.clone();
            let mut xm = x.clone();
            xp[j] += h;
            xm[j] -= h;
            let fd = (quad.evaluate(&xp).unwrap() - quad.evaluate(&xm).unwrap()) / (2.0 * h);
            assert!((fd - g[j]).abs() < 1e-6);
        }
    }
}
