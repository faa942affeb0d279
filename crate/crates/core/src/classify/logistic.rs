//! Weighted, ridge-penalized logistic regression by damped Newton.
//!
//! Minimizes `(1/n) sum_i w_i * l(z_i, theta . x_i) + (ridge/2) |theta|^2` where
//! `x_i` already carries the trailing bias coordinate.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg::{augment, dot, norm};
use crate::observe::LabeledSet;

#[derive(Debug, Clone, PartialEq)]
pub struct LogisticFit {
    pub theta: Vec<f64>,
    pub iterations: usize,
    pub grad_norm: f64,
}

fn softplus(s: f64) -> f64 {
    s.max(0.0) + (-s.abs()).exp().ln_1p()
}

fn sigmoid(s: f64) -> f64 {
    if s >= 0.0 {
        1.0 / (1.0 + (-s).exp())
    } else {
        let e = s.exp();
        e / (1.0 + e)
    }
}

pub fn logistic_objective(x: &[Vec<f64>], z: &[bool], w: &[f64], ridge: f64, theta: &[f64]) -> f64 {
    let n = x.len() as f64;
    let loss: f64 = x
        .iter()
        .zip(z)
        .zip(w)
        .map(|((xi, &zi), &wi)| {
            let s = dot(xi, theta);
            wi * if zi { softplus(-s) } else { softplus(s) }
        })
        .sum();
    loss / n + 0.5 * ridge * dot(theta, theta)
}

pub fn logistic_gradient(x: &[Vec<f64>], z: &[bool], w: &[f64], ridge: f64, theta: &[f64]) -> Vec<f64> {
    let n = x.len() as f64;
    let mut g: Vec<f64> = theta.iter().map(|t| ridge * t).collect();
    for ((xi, &zi), &wi) in x.iter().zip(z).zip(w) {
        let r = wi * (sigmoid(dot(xi, theta)) - zi as u8 as f64) / n;
        for (gj, xj) in g.iter_mut().zip(xi) {
            *gj += r * xj;
        }
    }
    g
}

fn hessian(x: &[Vec<f64>], w: &[f64], ridge: f64, theta: &[f64]) -> DMatrix<f64> {
    let d = theta.len();
    let n = x.len() as f64;
    let mut h = DMatrix::<f64>::zeros(d, d);
    for (xi, &wi) in x.iter().zip(w) {
        let p = sigmoid(dot(xi, theta));
        let c = wi * p * (1.0 - p) / n;
        if c == 0.0 {
            continue;
        }
        for a in 0..d {
            let ca = c * xi[a];
            for b in a..d {
                h[(a, b)] += ca * xi[b];
            }
        }
    }
    for a in 0..d {
        h[(a, a)] += ridge;
        for b in 0..a {
            h[(a, b)] = h[(b, a)];
        }
    }
    h
}

fn newton_direction(h: DMatrix<f64>, g: &[f64]) -> Vec<f64> {
    let d = g.len();
    let rhs = DVector::from_column_slice(g);
    let mut h = h;
    let mut jitter = 1e-10;
    for _ in 0..8 {
        if let Some(ch) = h.clone().cholesky() {
            return ch.solve(&rhs).as_slice().to_vec();
        }
        for a in 0..d {
            h[(a, a)] += jitter;
        }
        jitter *= 100.0;
    }
    g.to_vec()
}

/// Rows in `x` must already be augmented with the bias coordinate.
pub fn fit_weighted_logistic(
    x: &[Vec<f64>],
    z: &[bool],
    w: &[f64],
    ridge: f64,
    tol: f64,
    max_iter: usize,
    init: Option<&[f64]>,
) -> Result<LogisticFit> {
    if x.is_empty() {
        return Err(Error::EmptyBatch);
    }
    if ridge < 0.0 || !ridge.is_finite() {
        return Err(Error::Config(format!("ridge {ridge} must be finite and non-negative")));
    }
    let d = x[0].len();
    let mut theta = init.map_or_else(|| vec![0.0; d], <[f64]>::to_vec);
    let mut f = logistic_objective(x, z, w, ridge, &theta);
    let mut g = logistic_gradient(x, z, w, ridge, &theta);
    let mut gn = norm(&g);
    for it in 0..max_iter {
        if gn <= tol {
            return Ok(LogisticFit { theta, iterations: it, grad_norm: gn });
        }
        let dir = newton_direction(hessian(x, w, ridge, &theta), &g);
        let slope = dot(&g, &dir);
        let mut step = 1.0;
        let mut next = theta.clone();
        let mut f_next = f;
        for _ in 0..60 {
            for j in 0..d {
                next[j] = theta[j] - step * dir[j];
            }
            f_next = logistic_objective(x, z, w, ridge, &next);
            if f_next <= f - 1e-4 * step * slope {
                break;
            }
            step *= 0.5;
        }
        if !(f_next <= f) {
            break;
        }
        theta = next;
        f = f_next;
        g = logistic_gradient(x, z, w, ridge, &theta);
        gn = norm(&g);
    }
    if gn <= tol {
        return Ok(LogisticFit { theta, iterations: max_iter, grad_norm: gn });
    }
    Err(Error::NonConvergence { iterations: max_iter, grad_norm: gn })
}

/// Unit-weight fit on raw features; a bias coordinate is appended internally.
pub fn fit_logistic_mle(data: &LabeledSet, ridge: f64, tol: f64, max_iter: usize) -> Result<LogisticFit> {
    let x: Vec<Vec<f64>> = data.rows.iter().map(|r| augment(r)).collect();
    let w = vec![1.0; x.len()];
    fit_weighted_logistic(&x, &data.labels, &w, ridge, tol, max_iter, None)
}
