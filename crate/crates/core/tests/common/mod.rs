//! Independent oracles shared by the integration tests. Nothing here calls into the
//! library.
#![allow(dead_code)]

use nalgebra::DMatrix;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Moments of the arcsine law on `[alpha, beta]` by the trapezoid rule in the angle
/// variable `x = alpha + (beta - alpha)(1 - cos t)/2`, where the density turns into the
/// uniform measure on `[0, 2 pi)`. The rule is exact for trigonometric polynomials of
/// degree below `nodes`.
pub fn arcsine_moment(alpha: f64, beta: f64, j: usize, nodes: usize) -> f64 {
    let h = 2.0 * std::f64::consts::PI / nodes as f64;
    (0..nodes)
        .map(|i| {
            let x = alpha + (beta - alpha) * (1.0 - (i as f64 * h).cos()) / 2.0;
            x.powi(j as i32)
        })
        .sum::<f64>()
        / nodes as f64
}

/// Smallest eigenvalue of a real symmetric matrix.
pub fn lambda_min(a: &DMatrix<f64>) -> f64 {
    a.clone().symmetric_eigen().eigenvalues.min()
}

pub fn hankel(values: &[f64], n: usize) -> DMatrix<f64> {
    DMatrix::from_fn(n + 1, n + 1, |i, k| values[i + k])
}

/// Whether the scalar sequence `t_0..t_l` passes the two Hankel positivity tests of the
/// nonnegative Hausdorff class on `[alpha, beta]`.
pub fn feasible(t: &[f64], alpha: f64, beta: f64) -> bool {
    let l = t.len() - 1;
    if l % 2 == 1 {
        let n = (l - 1) / 2;
        let left: Vec<f64> = (0..l).map(|j| -alpha * t[j] + t[j + 1]).collect();
        let right: Vec<f64> = (0..l).map(|j| beta * t[j] - t[j + 1]).collect();
        lambda_min(&hankel(&left, n)) >= 0.0 && lambda_min(&hankel(&right, n)) >= 0.0
    } else {
        let n = l / 2;
        if lambda_min(&hankel(t, n)) < 0.0 {
            return false;
        }
        if n == 0 {
            return true;
        }
        let two: Vec<f64> = (0..l - 1)
            .map(|j| -alpha * beta * t[j] + (alpha + beta) * t[j + 1] - t[j + 2])
            .collect();
        lambda_min(&hankel(&two, n - 1)) >= 0.0
    }
}

/// Bisects for the boundary of `{x : feasible(s, x)}` between a feasible and an
/// infeasible point.
pub fn bisect(s: &[f64], alpha: f64, beta: f64, mut inside: f64, mut outside: f64) -> f64 {
    let mut t = s.to_vec();
    t.push(0.0);
    let last = t.len() - 1;
    for _ in 0..200 {
        let mid = 0.5 * (inside + outside);
        t[last] = mid;
        if feasible(&t, alpha, beta) {
            inside = mid;
        } else {
            outside = mid;
        }
    }
    0.5 * (inside + outside)
}

/// Power moments `0..=count` of a random measure with eight atoms in the open interval.
pub fn measure_moments(rng: &mut ChaCha8Rng, alpha: f64, beta: f64, count: usize) -> Vec<f64> {
    let atoms: Vec<(f64, f64)> = (0..8)
        .map(|_| {
            let t = rng.random_range(0.02..0.98);
            (alpha + (beta - alpha) * t, rng.random_range(0.1..1.0))
        })
        .collect();
    (0..=count)
        .map(|j| atoms.iter().map(|(x, w)| w * x.powi(j as i32)).sum())
        .collect()
}
