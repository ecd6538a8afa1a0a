//! Exact 2D geometry of ball polytopes: intersections of unit discs.
//!
//! The boundary of K = ∩ⱼ B(cⱼ, 1) consists of unit-circle arcs meeting at
//! vertices. Everything here works off the feasible angular intervals of
//! each circle (the set of angles t for which cᵢ + (cos t, sin t) lies in
//! every other disc), so areas and supports come out exact up to rounding,
//! with no polygonal approximation.

use crate::error::{Error, Result};

const TAU: f64 = 2.0 * std::f64::consts::PI;
/// Feasibility slack for boundary candidates (squared distances).
const FEAS_TOL: f64 = 1e-11;

#[derive(Debug, Clone, Copy)]
pub struct P2 {
    pub x: f64,
    pub y: f64,
}

impl P2 {
    pub fn new(x: f64, y: f64) -> Self {
        P2 { x, y }
    }

    pub fn from_slice(s: &[f64]) -> Self {
        P2 { x: s[0], y: s[1] }
    }

    pub fn dist2(self, o: P2) -> f64 {
        (self.x - o.x).powi(2) + (self.y - o.y).powi(2)
    }

    pub fn dot(self, o: P2) -> f64 {
        self.x * o.x + self.y * o.y
    }

    pub fn cross(self, o: P2) -> f64 {
        self.x * o.y - self.y * o.x
    }
}

fn unit(t: f64) -> P2 {
    P2::new(t.cos(), t.sin())
}

pub fn dedupe(centers: &[P2]) -> Vec<P2> {
    let mut out: Vec<P2> = Vec::with_capacity(centers.len());
    for &c in centers {
        if !out.iter().any(|o| o.dist2(c) < 1e-24) {
            out.push(c);
        }
    }
    out
}

/// Intersection points of the unit circles around a and b, or None when the
/// circles do not cross (d = 0 or d >= 2).
pub fn circle_pair_points(a: P2, b: P2) -> Option<(P2, P2)> {
    let d2 = a.dist2(b);
    if !(1e-24..4.0).contains(&d2) {
        return None;
    }
    let d = d2.sqrt();
    let mid = P2::new((a.x + b.x) / 2.0, (a.y + b.y) / 2.0);
    let q = (1.0 - d2 / 4.0).max(0.0).sqrt();
    let n = P2::new(-(b.y - a.y) / d, (b.x - a.x) / d);
    Some((
        P2::new(mid.x + q * n.x, mid.y + q * n.y),
        P2::new(mid.x - q * n.x, mid.y - q * n.y),
    ))
}

fn norm_angle(t: f64) -> f64 {
    let mut t = t % TAU;
    if t < 0.0 {
        t += TAU;
    }
    t
}

/// Feasible angular intervals of circle `i`: subsets of [0, 2π) whose points
/// lie inside every other disc. Returns (start, end) pairs with start < end
/// (a full circle is the single pair (0, 2π)).
fn feasible_intervals(centers: &[P2], i: usize) -> Result<Vec<(f64, f64)>> {
    let ci = centers[i];
    let mut excluded: Vec<(f64, f64)> = Vec::new();
    for (j, &cj) in centers.iter().enumerate() {
        if j == i {
            continue;
        }
        let d2 = ci.dist2(cj);
        if d2 >= 4.0 {
            return Err(Error::EmptyBody(format!(
                "unit balls around ({},{}) and ({},{}) are {} apart",
                ci.x,
                ci.y,
                cj.x,
                cj.y,
                d2.sqrt()
            )));
        }
        let d = d2.sqrt();
        let alpha = (cj.y - ci.y).atan2(cj.x - ci.x);
        let beta = (d / 2.0).clamp(-1.0, 1.0).acos();
        // feasible on [alpha - beta, alpha + beta]; exclude the rest
        let start = norm_angle(alpha + beta);
        let len = TAU - 2.0 * beta;
        let end = start + len;
        if end <= TAU {
            excluded.push((start, end));
        } else {
            excluded.push((start, TAU));
            excluded.push((0.0, end - TAU));
        }
    }
    if excluded.is_empty() {
        return Ok(vec![(0.0, TAU)]);
    }
    excluded.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let mut merged: Vec<(f64, f64)> = Vec::new();
    for (s, e) in excluded {
        match merged.last_mut() {
            Some(last) if s <= last.1 + 1e-14 => last.1 = last.1.max(e),
            _ => merged.push((s, e)),
        }
    }
    // complement inside [0, 2π)
    let mut feasible = Vec::new();
    let mut cursor = 0.0;
    for &(s, e) in &merged {
        if s > cursor + 1e-14 {
            feasible.push((cursor, s));
        }
        cursor = cursor.max(e);
    }
    if cursor < TAU - 1e-14 {
        feasible.push((cursor, TAU));
    }
    Ok(feasible)
}

/// Exact area of ∩ⱼ B(cⱼ, 1) by Green's theorem over the boundary arcs:
/// each arc of circle c from t0 to t1 contributes
/// ½ [(t1 - t0) + c × (u(t1) - u(t0))].
pub fn area(centers: &[P2]) -> Result<f64> {
    let centers = dedupe(centers);
    if centers.is_empty() {
        return Err(Error::EmptyBody("no centers".into()));
    }
    let mut total = 0.0;
    for i in 0..centers.len() {
        let c = centers[i];
        for (t0, t1) in feasible_intervals(&centers, i)? {
            let (u0, u1) = (unit(t0), unit(t1));
            total += 0.5 * ((t1 - t0) + c.cross(P2::new(u1.x - u0.x, u1.y - u0.y)));
        }
    }
    Ok(total)
}

/// Total boundary length: every arc has unit radius, so this is the sum of
/// the feasible angular intervals.
pub fn boundary_length(centers: &[P2]) -> Result<f64> {
    let centers = dedupe(centers);
    if centers.is_empty() {
        return Err(Error::EmptyBody("no centers".into()));
    }
    let mut total = 0.0;
    for i in 0..centers.len() {
        for (t0, t1) in feasible_intervals(&centers, i)? {
            total += t1 - t0;
        }
    }
    Ok(total)
}

fn feasible_point(centers: &[P2], p: P2, skip: usize) -> bool {
    centers
        .iter()
        .enumerate()
        .all(|(k, c)| k == skip || c.dist2(p) <= 1.0 + FEAS_TOL)
}

/// Support value and contact point in direction u (unit). The maximizer of a
/// linear functional over a ball polytope is either an arc point cⱼ + u or a
/// vertex, so enumerating those candidates is exact.
pub fn support(centers: &[P2], u: P2) -> Result<(f64, P2)> {
    let centers = dedupe(centers);
    if centers.is_empty() {
        return Err(Error::EmptyBody("no centers".into()));
    }
    let mut best: Option<(f64, P2)> = None;
    let mut push = |p: P2| {
        let v = p.dot(u);
        if best.is_none_or(|(b, _)| v > b) {
            best = Some((v, p));
        }
    };
    for (i, &c) in centers.iter().enumerate() {
        let p = P2::new(c.x + u.x, c.y + u.y);
        if feasible_point(&centers, p, i) {
            push(p);
        }
    }
    for i in 0..centers.len() {
        for j in i + 1..centers.len() {
            if let Some((a, b)) = circle_pair_points(centers[i], centers[j]) {
                if feasible_point(&centers, a, usize::MAX) {
                    push(a);
                }
                if feasible_point(&centers, b, usize::MAX) {
                    push(b);
                }
            }
        }
    }
    best.ok_or_else(|| Error::EmptyBody("ball intersection has no boundary candidates".into()))
}

/// Vertices of the ball polytope (feasible pairwise circle intersections).
pub fn vertices(centers: &[P2]) -> Vec<P2> {
    let centers = dedupe(centers);
    let mut out: Vec<P2> = Vec::new();
    for i in 0..centers.len() {
        for j in i + 1..centers.len() {
            if let Some((a, b)) = circle_pair_points(centers[i], centers[j]) {
                for p in [a, b] {
                    if feasible_point(&centers, p, usize::MAX)
                        && !out.iter().any(|o| o.dist2(p) < 1e-20)
                    {
                        out.push(p);
                    }
                }
            }
        }
    }
    out
}

pub fn contains(centers: &[P2], p: P2, tol: f64) -> bool {
    centers.iter().all(|c| c.dist2(p).sqrt() <= 1.0 + tol)
}

/// Lower bound on the inradius via the minimum enclosing ball of the
/// centers (the Chebyshev center of an intersection of unit balls is the
/// MEB center of the defining centers). Badoiu-Clarkson iteration.
pub fn inradius_lower_bound(centers: &[P2]) -> f64 {
    let centers = dedupe(centers);
    if centers.len() == 1 {
        return 1.0;
    }
    let mut y = P2::new(
        centers.iter().map(|c| c.x).sum::<f64>() / centers.len() as f64,
        centers.iter().map(|c| c.y).sum::<f64>() / centers.len() as f64,
    );
    let mut best = f64::NEG_INFINITY;
    for k in 1..=2000usize {
        let far = centers
            .iter()
            .copied()
            .max_by(|a, b| a.dist2(y).partial_cmp(&b.dist2(y)).unwrap())
            .unwrap();
        let slack = 1.0 - far.dist2(y).sqrt();
        best = best.max(slack);
        let step = 1.0 / (k as f64 + 1.0);
        y = P2::new(y.x + step * (far.x - y.x), y.y + step * (far.y - y.y));
    }
    best
}
