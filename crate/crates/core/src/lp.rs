//! Dense simplex for `max c'x  s.t.  A x <= b, x >= 0` with `b >= 0`, so the
//! all-slack basis is feasible and no phase one is needed. Bland's rule keeps
//! the highly degenerate margin problems from cycling.

const EPS: f64 = 1e-11;

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum LpOutcome {
    Optimal { value: f64, x: Vec<f64> },
    Unbounded,
    IterationLimit,
}

pub(crate) fn maximize(c: &[f64], a: &[Vec<f64>], b: &[f64]) -> LpOutcome {
    let n = c.len();
    let m = a.len();
    debug_assert_eq!(b.len(), m);
    debug_assert!(b.iter().all(|&v| v >= 0.0));

    // Dictionary: x_B = rhs - T x_N ; z = z0 + obj' x_N
    let mut t: Vec<Vec<f64>> = a.to_vec();
    let mut rhs = b.to_vec();
    let mut obj = c.to_vec();
    let mut z0 = 0.0;
    let mut nonbasic: Vec<usize> = (0..n).collect();
    let mut basic: Vec<usize> = (n..n + m).collect();

    let limit = 50 * (n + m) + 100;
    for _ in 0..limit {
        let entering = (0..n)
            .filter(|&k| obj[k] > EPS)
            .min_by_key(|&k| nonbasic[k]);
        let Some(k) = entering else {
            let mut x = vec![0.0; n];
            for (r, &v) in basic.iter().enumerate() {
                if v < n {
                    x[v] = rhs[r];
                }
            }
            return LpOutcome::Optimal { value: z0, x };
        };

        let mut leave: Option<(usize, f64)> = None;
        for r in 0..m {
            let p = t[r][k];
            if p > EPS {
                let ratio = rhs[r] / p;
                leave = match leave {
                    None => Some((r, ratio)),
                    Some((lr, lratio)) => {
                        if ratio < lratio - EPS
                            || (ratio <= lratio + EPS && basic[r] < basic[lr])
                        {
                            Some((r, ratio))
                        } else {
                            Some((lr, lratio))
                        }
                    }
                };
            }
        }
        let Some((r, _)) = leave else {
            return LpOutcome::Unbounded;
        };

        let p = t[r][k];
        let pivot_row: Vec<f64> = t[r]
            .iter()
            .enumerate()
            .map(|(j, &v)| if j == k { 1.0 / p } else { v / p })
            .collect();
        let pivot_rhs = rhs[r] / p;
        for i in 0..m {
            if i == r {
                continue;
            }
            let f = t[i][k];
            if f == 0.0 {
                continue;
            }
            for j in 0..n {
                if j == k {
                    t[i][j] = -f / p;
                } else {
                    t[i][j] -= f * pivot_row[j];
                }
            }
            rhs[i] -= f * pivot_rhs;
            if rhs[i] < 0.0 && rhs[i] > -1e-12 {
                rhs[i] = 0.0;
            }
        }
        let f = obj[k];
        z0 += f * pivot_rhs;
        for j in 0..n {
            if j == k {
                obj[j] = -f / p;
            } else {
                obj[j] -= f * pivot_row[j];
            }
        }
        t[r] = pivot_row;
        rhs[r] = pivot_rhs;
        std::mem::swap(&mut nonbasic[k], &mut basic[r]);
    }
    LpOutcome::IterationLimit
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn textbook_problem() {
        // max 3x + 5y  s.t. x <= 4, 2y <= 12, 3x + 2y <= 18  -> 36 at (2, 6)
        let out = maximize(
            &[3.0, 5.0],
            &[vec![1.0, 0.0], vec![0.0, 2.0], vec![3.0, 2.0]],
            &[4.0, 12.0, 18.0],
        );
        match out {
            LpOutcome::Optimal { value, x } => {
                assert!((value - 36.0).abs() < 1e-9);
                assert!((x[0] - 2.0).abs() < 1e-9 && (x[1] - 6.0).abs() < 1e-9);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn detects_unbounded() {
        assert_eq!(maximize(&[1.0, 0.0], &[vec![-1.0, 1.0]], &[1.0]), LpOutcome::Unbounded);
    }

    #[test]
    fn degenerate_rows_terminate() {
        // many zero right-hand sides
        let a = vec![vec![1.0, -1.0, 1.0], vec![-1.0, 1.0, 1.0], vec![1.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]];
        let out = maximize(&[0.0, 0.0, 1.0], &a, &[0.0, 0.0, 1.0, 1.0]);
        match out {
            LpOutcome::Optimal { value, .. } => assert!(value.abs() < 1e-12),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn agrees_with_vertex_enumeration() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let c: Vec<f64> = (0..2).map(|_| rng.random_range(-1.0..2.0)).collect();
            let a: Vec<Vec<f64>> = (0..4)
                .map(|_| (0..2).map(|_| rng.random_range(0.1..2.0)).collect())
                .collect();
            let b: Vec<f64> = (0..4).map(|_| rng.random_range(0.5..3.0)).collect();
            // brute force over intersections of constraint lines and axes
            let mut lines: Vec<(f64, f64, f64)> = a.iter().zip(&b).map(|(r, &v)| (r[0], r[1], v)).collect();
            lines.push((1.0, 0.0, 0.0));
            lines.push((0.0, 1.0, 0.0));
            let mut best = f64::NEG_INFINITY;
            for i in 0..lines.len() {
                for j in i + 1..lines.len() {
                    let (a1, b1, c1) = lines[i];
                    let (a2, b2, c2) = lines[j];
                    let det = a1 * b2 - a2 * b1;
                    if det.abs() < 1e-12 {
                        continue;
                    }
                    let x = (c1 * b2 - c2 * b1) / det;
                    let y = (a1 * c2 - a2 * c1) / det;
                    let feasible = x >= -1e-9
                        && y >= -1e-9
                        && a.iter().zip(&b).all(|(r, &v)| r[0] * x + r[1] * y <= v + 1e-9);
                    if feasible {
                        best = best.max(c[0] * x + c[1] * y);
                    }
                }
            }
            match maximize(&c, &a, &b) {
                LpOutcome::Optimal { value, .. } => assert!((value - best).abs() < 1e-8, "{value} vs {best}"),
                other => panic!("{other:?}"),
            }
        }
    }
}
