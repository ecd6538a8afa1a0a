//! Support-point solver for intersections of unit balls in dimension >= 3:
//! maximize <u, y> over ∩ⱼ B(cⱼ, 1).
//!
//! Projected-gradient ascent, with each iterate projected back onto the
//! intersection by Dykstra's alternating-projection scheme. The loose PG
//! solution is then polished by Newton iteration on the KKT system of the
//! active constraints, which brings the contact point to ~1e-13 — tight
//! enough to finite-difference Hessians through it.

use crate::error::{Error, Result};
use crate::linalg::{axpy, dot, norm, solve_dense, sub, Mat};

const PG_MAX_ITERS: usize = 10_000;
const PG_STEP: f64 = 0.5;
const PG_TOL: f64 = 1e-10;
const DYKSTRA_MAX_CYCLES: usize = 500;
const DYKSTRA_TOL: f64 = 1e-13;
const ACTIVE_TOL: f64 = 1e-6;

fn project_ball(y: &[f64], c: &[f64]) -> Vec<f64> {
    let d = sub(y, c);
    let n = norm(&d);
    if n <= 1.0 {
        y.to_vec()
    } else {
        axpy(c, 1.0 / n, &d)
    }
}

/// Dykstra projection of `y` onto ∩ⱼ B(cⱼ, 1).
fn dykstra_project(centers: &[Vec<f64>], y: &[f64]) -> Vec<f64> {
    let dim = y.len();
    let m = centers.len();
    if m == 1 {
        return project_ball(y, &centers[0]);
    }
    let mut x = y.to_vec();
    let mut corrections = vec![vec![0.0; dim]; m];
    for _ in 0..DYKSTRA_MAX_CYCLES {
        let start = x.clone();
        for (j, c) in centers.iter().enumerate() {
            let shifted = add_vec(&x, &corrections[j]);
            let projected = project_ball(&shifted, c);
            corrections[j] = sub(&shifted, &projected);
            x = projected;
        }
        if norm(&sub(&x, &start)) < DYKSTRA_TOL {
            break;
        }
    }
    x
}

fn add_vec(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// Feasible starting point: centroid of the centers, pulled inside.
fn interior_start(centers: &[Vec<f64>]) -> Vec<f64> {
    let dim = centers[0].len();
    let mut y = vec![0.0; dim];
    for c in centers {
        for (yi, ci) in y.iter_mut().zip(c) {
            *yi += ci / centers.len() as f64;
        }
    }
    dykstra_project(centers, &y)
}

/// Newton polish of the KKT system
///   u = Σⱼ λⱼ (y - cⱼ),  |y - cⱼ|² = 1  for j in the active set.
fn kkt_polish(centers: &[Vec<f64>], u: &[f64], y0: &[f64], active: &[usize]) -> Option<Vec<f64>> {
    let dim = u.len();
    let k = active.len();
    if k == 0 {
        return None;
    }
    let mut y = y0.to_vec();
    // initial multipliers from least squares against u (diagonal guess)
    let mut lambda = vec![1.0 / k as f64; k];
    for _ in 0..30 {
        // residuals
        let mut res = vec![0.0; dim + k];
        let mut grad = u.to_vec();
        for (a, &j) in active.iter().enumerate() {
            let d = sub(&y, &centers[j]);
            for (g, di) in grad.iter_mut().zip(&d) {
                *g -= lambda[a] * di;
            }
            res[dim + a] = 0.5 * (dot(&d, &d) - 1.0);
        }
        res[..dim].copy_from_slice(&grad);
        let rn = norm(&res);
        if rn < 1e-13 {
            break;
        }
        // Jacobian of F(y, λ) = [u - Σλⱼ(y-cⱼ); ½(|y-cⱼ|²-1)]
        let n = dim + k;
        let mut jac = Mat::zeros(n);
        let lam_sum: f64 = lambda.iter().sum();
        for i in 0..dim {
            jac.set(i, i, -lam_sum);
        }
        for (a, &j) in active.iter().enumerate() {
            let d = sub(&y, &centers[j]);
            for (i, di) in d.iter().enumerate() {
                jac.set(i, dim + a, -di);
                jac.set(dim + a, i, *di);
            }
        }
        let mut rhs: Vec<f64> = res.iter().map(|r| -r).collect();
        let delta = solve_dense(&mut jac, &mut rhs).ok()?;
        for i in 0..dim {
            y[i] += delta[i];
        }
        for a in 0..k {
            lambda[a] += delta[dim + a];
        }
    }
    // validate: multipliers nonnegative-ish, all constraints satisfied
    if lambda.iter().any(|&l| l < -1e-7) {
        return None;
    }
    for c in centers {
        if norm(&sub(&y, c)) > 1.0 + 1e-9 {
            return None;
        }
    }
    // stationarity must hold
    let mut grad = u.to_vec();
    for (a, &j) in active.iter().enumerate() {
        let d = sub(&y, &centers[j]);
        for (g, di) in grad.iter_mut().zip(&d) {
            *g -= lambda[a] * di;
        }
    }
    if norm(&grad) > 1e-9 {
        return None;
    }
    Some(y)
}

/// Maximizer of <u, y> over ∩ⱼ B(cⱼ, 1); `u` must be a unit vector.
pub fn support_point(centers: &[Vec<f64>], u: &[f64]) -> Result<Vec<f64>> {
    if centers.is_empty() {
        return Err(Error::EmptyBody("no centers".into()));
    }
    // single ball: closed form
    if centers.len() == 1 {
        return Ok(add_vec(&centers[0], u));
    }
    let mut y = interior_start(centers);
    let mut last_move = f64::INFINITY;
    for _ in 0..PG_MAX_ITERS {
        let trial = axpy(&y, PG_STEP, u);
        let next = dykstra_project(centers, &trial);
        last_move = norm(&sub(&next, &y));
        y = next;
        if last_move < PG_TOL {
            break;
        }
    }
    // active constraints at the PG solution
    let mut active: Vec<usize> = centers
        .iter()
        .enumerate()
        .filter(|(_, c)| 1.0 - norm(&sub(&y, c)) < ACTIVE_TOL)
        .map(|(j, _)| j)
        .collect();
    if active.is_empty() {
        // maximizer of a linear functional sits on the boundary
        let nearest = centers
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| {
                let da = 1.0 - norm(&sub(&y, a));
                let db = 1.0 - norm(&sub(&y, b));
                da.partial_cmp(&db).unwrap()
            })
            .map(|(j, _)| j)
            .unwrap();
        active = vec![nearest];
    }
    if let Some(polished) = kkt_polish(centers, u, &y, &active) {
        return Ok(polished);
    }
    if last_move >= PG_TOL {
        return Err(Error::Convergence {
            context: "projected-gradient support solver".into(),
            residual: last_move,
        });
    }
    Ok(y)
}

/// Lower bound on the inradius of ∩ⱼ B(cⱼ, 1) by Badoiu-Clarkson iteration
/// toward the minimum enclosing ball of the centers.
pub fn inradius_lower_bound(centers: &[Vec<f64>]) -> f64 {
    if centers.len() == 1 {
        return 1.0;
    }
    let dim = centers[0].len();
    let mut y = vec![0.0; dim];
    for c in centers {
        for (yi, ci) in y.iter_mut().zip(c) {
            *yi += ci / centers.len() as f64;
        }
    }
    let mut best = f64::NEG_INFINITY;
    for k in 1..=2000usize {
        let far = centers
            .iter()
            .max_by(|a, b| {
                let da = norm(&sub(&y, a));
                let db = norm(&sub(&y, b));
                da.partial_cmp(&db).unwrap()
            })
            .unwrap();
        best = best.max(1.0 - norm(&sub(&y, far)));
        let step = 1.0 / (k as f64 + 1.0);
        for (yi, fi) in y.iter_mut().zip(far) {
            *yi += step * (fi - *yi);
        }
    }
    best
}
