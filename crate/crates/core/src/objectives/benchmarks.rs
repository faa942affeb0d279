//! Shekel and Hartmann functions with the standard Dixon-Szego parameter
//! tables (as tabulated in Dixon & Szegő, "The global optimisation problem",
//! 1978, and reproduced in most benchmark collections).

use super::check_box;
use crate::error::Result;

pub const SHEKEL_A: [[f64; 4]; 10] = [
    [4.0, 4.0, 4.0, 4.0],
    [1.0, 1.0, 1.0, 1.0],
    [8.0, 8.0, 8.0, 8.0],
    [6.0, 6.0, 6.0, 6.0],
    [3.0, 7.0, 3.0, 7.0],
    [2.0, 9.0, 2.0, 9.0],
    [5.0, 5.0, 3.0, 3.0],
    [8.0, 1.0, 8.0, 1.0],
    [6.0, 2.0, 6.0, 2.0],
    [7.0, 3.6, 7.0, 3.6],
];

pub const SHEKEL_C: [f64; 10] = [0.1, 0.2, 0.2, 0.4, 0.4, 0.6, 0.3, 0.7, 0.5, 0.5];

pub const HARTMANN6_ALPHA: [f64; 4] = [1.0, 1.2, 3.0, 3.2];

pub const HARTMANN6_A: [[f64; 6]; 4] = [
    [10.0, 3.0, 17.0, 3.5, 1.7, 8.0],
    [0.05, 10.0, 17.0, 0.1, 8.0, 14.0],
    [3.0, 3.5, 1.7, 10.0, 17.0, 8.0],
    [17.0, 8.0, 0.05, 10.0, 0.1, 14.0],
];

pub const HARTMANN6_P: [[f64; 6]; 4] = [
    [0.1312, 0.1696, 0.5569, 0.0124, 0.8283, 0.5886],
    [0.2329, 0.4135, 0.8307, 0.3736, 0.1004, 0.9991],
    [0.2348, 0.1451, 0.3522, 0.2883, 0.3047, 0.6650],
    [0.4047, 0.8828, 0.8732, 0.5743, 0.1091, 0.0381],
];

pub(crate) fn shekel_with(x: &[f64], a: &[[f64; 4]], c: &[f64]) -> f64 {
    -a.iter()
        .zip(c)
        .map(|(ai, ci)| {
            let d2: f64 = x.iter().zip(ai).map(|(u, v)| (u - v) * (u - v)).sum();
            1.0 / (d2 + ci)
        })
        .sum::<f64>()
}

pub(crate) fn hartmann_with(
    x: &[f64],
    alpha: &[f64; 4],
    a: &[[f64; 6]; 4],
    p: &[[f64; 6]; 4],
) -> f64 {
    -(0..4)
        .map(|i| {
            let e: f64 = (0..6).map(|j| a[i][j] * (x[j] - p[i][j]).powi(2)).sum();
            alpha[i] * (-e).exp()
        })
        .sum::<f64>()
}

/// Shekel function with all ten terms on `[0, 10]^4`.
pub fn shekel4(x: &[f64]) -> Result<f64> {
    check_box(x, 0.0, 10.0, 4, "shekel4")?;
    Ok(shekel_with(x, &SHEKEL_A, &SHEKEL_C))
}

/// Six-dimensional Hartmann function on `[0, 1]^6`.
pub fn hartmann6(x: &[f64]) -> Result<f64> {
    check_box(x, 0.0, 1.0, 6, "hartmann6")?;
    Ok(hartmann_with(x, &HARTMANN6_ALPHA, &HARTMANN6_A, &HARTMANN6_P))
}
