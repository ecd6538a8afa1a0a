//! Inequality verification between the functionals of a body and of its
//! c-dual, plus an extremal search over families and a midpoint scan of the
//! symmetrized c-affine surface area of balls.
//!
//! Each kind evaluates a left and right hand side with pass defined as
//! slack = rhs - lhs >= -tol. The documented extremizers are flagged
//! through `near_equality` (|slack| < 10 tol).

use serde::Serialize;

use crate::body::{c_dual, Body, TrigTerm};
use crate::curvature::curvature_duality_residual;
use crate::error::{Error, Result};
use crate::functionals::{
    ball_volume, mean_width_half, omega_c, omega_c_ball, omega_classical, sphere_surface,
    surface_area, volume,
};
use crate::sphere::SphereGrid;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum InequalityKind {
    /// Ω^c(K) <= Ω^c((n/(n+1)) B)
    ExtremalMax,
    /// Ω^c(K) Ω^c(K^c) <= Ω^c(½B)²
    SantaloProduct,
    /// Ω^c(K) <= S(K)^{(n-1)/n} Ω^c(K^c)^{1/n}
    HolderLink,
    /// Ω^c(K) Ω^c(K^c) <= S(K) S(K^c)
    ProductVsSurface,
    /// Ω^c(K) <= S(K)^{n/(n+1)} S(K^c)^{1/(n+1)}
    IteratedSurface,
    /// S(K)^{n/(n+1)} S(K^c)^{1/(n+1)} <= same at K = (n/(n+1)) B
    SurfaceBallBound,
    /// (S(K)/S(B))^{1/(n-1)} <= M*(K)
    Alexandrov,
    /// Ω^c(K) <= Ω(K) <= n Vol(B)^{2/(n+1)} Vol(K)^{(n-1)/(n+1)}, both links
    Isoperimetric,
    /// S(K)^{1/2} S(K^c)^{1/2} <= S(½(K - K^c)) = S(½B)
    BmSurface,
    /// max over the grid of |r_i(u) + s_{n-i}(-u) - 1|
    CurvatureDuality,
}

pub const ALL_KINDS: [InequalityKind; 10] = [
    InequalityKind::ExtremalMax,
    InequalityKind::SantaloProduct,
    InequalityKind::HolderLink,
    InequalityKind::ProductVsSurface,
    InequalityKind::IteratedSurface,
    InequalityKind::SurfaceBallBound,
    InequalityKind::Alexandrov,
    InequalityKind::Isoperimetric,
    InequalityKind::BmSurface,
    InequalityKind::CurvatureDuality,
];

impl InequalityKind {
    pub fn name(&self) -> &'static str {
        match self {
            InequalityKind::ExtremalMax => "EXTREMAL_MAX",
            InequalityKind::SantaloProduct => "SANTALO_PRODUCT",
            InequalityKind::HolderLink => "HOLDER_LINK",
            InequalityKind::ProductVsSurface => "PRODUCT_VS_SURFACE",
            InequalityKind::IteratedSurface => "ITERATED_SURFACE",
            InequalityKind::SurfaceBallBound => "SURFACE_BALL_BOUND",
            InequalityKind::Alexandrov => "ALEXANDROV",
            InequalityKind::Isoperimetric => "ISOPERIMETRIC",
            InequalityKind::BmSurface => "BM_SURFACE",
            InequalityKind::CurvatureDuality => "CURVATURE_DUALITY",
        }
    }

    pub fn parse(s: &str) -> Option<InequalityKind> {
        ALL_KINDS
            .iter()
            .copied()
            .find(|k| k.name().eq_ignore_ascii_case(s))
    }

    /// Kinds whose right hand side involves the c-dual; they require K to be
    /// neither a point nor a translate of the unit ball.
    fn needs_dual(&self) -> bool {
        !matches!(
            self,
            InequalityKind::ExtremalMax | InequalityKind::Alexandrov | InequalityKind::Isoperimetric
        )
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct InequalityRecord {
    pub kind: InequalityKind,
    pub lhs: f64,
    pub rhs: f64,
    /// rhs - lhs; pass means slack >= -tol.
    pub slack: f64,
    pub tol: f64,
    pub pass: bool,
    /// |slack| < 10 tol: the body sits at (or numerically at) the equality case.
    pub near_equality: bool,
}

fn record(kind: InequalityKind, lhs: f64, rhs: f64, tol: f64) -> InequalityRecord {
    let slack = rhs - lhs;
    InequalityRecord {
        kind,
        lhs,
        rhs,
        slack,
        tol,
        pass: slack >= -tol && lhs.is_finite() && rhs.is_finite(),
        near_equality: slack.abs() < 10.0 * tol,
    }
}

/// Evaluates one inequality on one body.
pub fn verify(
    kind: InequalityKind,
    body: &Body,
    grid: &SphereGrid,
    tol: f64,
) -> Result<InequalityRecord> {
    if body.is_point() {
        return Err(Error::UnsupportedBody(
            "inequalities are undefined for a single point".into(),
        ));
    }
    if kind.needs_dual() && body.is_unit_ball() {
        return Err(Error::UnsupportedBody(
            "translate of the unit ball: the c-dual degenerates to a point".into(),
        ));
    }
    let n = body.dim();
    let nf = n as f64;
    match kind {
        InequalityKind::ExtremalMax => {
            let lhs = omega_c(body, grid)?;
            let rhs = omega_c_ball(n, nf / (nf + 1.0))?;
            Ok(record(kind, lhs, rhs, tol))
        }
        InequalityKind::SantaloProduct => {
            let dual = c_dual(body);
            let lhs = omega_c(body, grid)? * omega_c(&dual, grid)?;
            let rhs = omega_c_ball(n, 0.5)?.powi(2);
            Ok(record(kind, lhs, rhs, tol))
        }
        InequalityKind::HolderLink => {
            let dual = c_dual(body);
            let lhs = omega_c(body, grid)?;
            let rhs = surface_area(body, grid)?.powf((nf - 1.0) / nf)
                * omega_c(&dual, grid)?.powf(1.0 / nf);
            Ok(record(kind, lhs, rhs, tol))
        }
        InequalityKind::ProductVsSurface => {
            let dual = c_dual(body);
            let lhs = omega_c(body, grid)? * omega_c(&dual, grid)?;
            let rhs = surface_area(body, grid)? * surface_area(&dual, grid)?;
            Ok(record(kind, lhs, rhs, tol))
        }
        InequalityKind::IteratedSurface => {
            let dual = c_dual(body);
            let lhs = omega_c(body, grid)?;
            let rhs = surface_area(body, grid)?.powf(nf / (nf + 1.0))
                * surface_area(&dual, grid)?.powf(1.0 / (nf + 1.0));
            Ok(record(kind, lhs, rhs, tol))
        }
        InequalityKind::SurfaceBallBound => {
            let dual = c_dual(body);
            let lhs = surface_area(body, grid)?.powf(nf / (nf + 1.0))
                * surface_area(&dual, grid)?.powf(1.0 / (nf + 1.0));
            // S(rB) = ω_n r^{n-1}
            let omega_n = sphere_surface(n);
            let rhs = (omega_n * (nf / (nf + 1.0)).powf(nf - 1.0)).powf(nf / (nf + 1.0))
                * (omega_n * (1.0 / (nf + 1.0)).powf(nf - 1.0)).powf(1.0 / (nf + 1.0));
            Ok(record(kind, lhs, rhs, tol))
        }
        InequalityKind::Alexandrov => {
            let lhs = (surface_area(body, grid)? / sphere_surface(n)).powf(1.0 / (nf - 1.0));
            let rhs = mean_width_half(body, grid)?;
            Ok(record(kind, lhs, rhs, tol))
        }
        InequalityKind::Isoperimetric => {
            // chain: Ω^c <= Ω <= n Vol(B)^{2/(n+1)} Vol(K)^{(n-1)/(n+1)};
            // the record carries the link with the smaller slack
            let oc = omega_c(body, grid)?;
            let ocl = omega_classical(body, grid)?;
            let bound = nf
                * ball_volume(n).powf(2.0 / (nf + 1.0))
                * volume(body, grid)?.powf((nf - 1.0) / (nf + 1.0));
            let first = record(kind, oc, ocl, tol);
            let second = record(kind, ocl, bound, tol);
            Ok(if first.slack <= second.slack { first } else { second })
        }
        InequalityKind::BmSurface => {
            // S(½K + ½(-K^c)) >= S(K)^{1/2} S(K^c)^{1/2}; the combination is
            // exactly ½B, reproducing the Santaló proof chain
            let dual = c_dual(body);
            let lhs = (surface_area(body, grid)? * surface_area(&dual, grid)?).sqrt();
            let mid = Body::minkowski(vec![(0.5, body.clone()), (0.5, dual.reflect())])?;
            let rhs = surface_area(&mid, grid)?;
            Ok(record(kind, lhs, rhs, tol))
        }
        InequalityKind::CurvatureDuality => {
            let mut max_residual: f64 = 0.0;
            let mut skipped = 0usize;
            for u in grid.nodes() {
                let check = curvature_duality_residual(body, u)?;
                if check.smooth {
                    max_residual = max_residual.max(check.residual);
                } else {
                    skipped += 1;
                }
            }
            if skipped * 50 > grid.len() {
                return Err(Error::Geometry(format!(
                    "{skipped} of {} directions were non-smooth",
                    grid.len()
                )));
            }
            Ok(record(kind, max_residual, 0.0, tol))
        }
    }
}

/// All ten kinds on one body.
pub fn verify_all(body: &Body, grid: &SphereGrid, tol: f64) -> Result<Vec<InequalityRecord>> {
    ALL_KINDS
        .iter()
        .map(|k| verify(*k, body, grid, tol))
        .collect()
}

/// Golden-section maximization of Ω^c over the ball family r in (0, 1);
/// returns (argmax radius, max value).
pub fn extremal_search_balls(n: usize, grid: &SphereGrid) -> Result<(f64, f64)> {
    if grid.dim() != n {
        return Err(Error::InvalidArgument("grid dimension mismatch".into()));
    }
    let f = |r: f64| -> Result<f64> {
        let b = Body::ball(vec![0.0; n], r)?;
        omega_c(&b, grid)
    };
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut lo, mut hi) = (1e-6, 1.0 - 1e-6);
    let mut x1 = hi - phi * (hi - lo);
    let mut x2 = lo + phi * (hi - lo);
    let (mut f1, mut f2) = (f(x1)?, f(x2)?);
    while hi - lo > 1e-9 {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + phi * (hi - lo);
            f2 = f(x2)?;
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - phi * (hi - lo);
            f1 = f(x1)?;
        }
    }
    let r = 0.5 * (lo + hi);
    Ok((r, f(r)?))
}

/// Nelder-Mead maximization of Ω^c over the Trig2D family (a, ε) with one
/// k = 2 term, under the class-membership constraint; returns ((a, ε), value).
pub fn extremal_search_trig2d(grid: &SphereGrid) -> Result<((f64, f64), f64)> {
    if grid.dim() != 2 {
        return Err(Error::InvalidArgument("trig search is 2D".into()));
    }
    let f = |a: f64, eps: f64| -> f64 {
        // membership: ρ(θ) = a - 3 ε cos 2θ must stay inside [0, 1]
        if a - 3.0 * eps.abs() < 0.0 || a + 3.0 * eps.abs() > 1.0 {
            return f64::NEG_INFINITY;
        }
        match Body::trig2d(a, vec![TrigTerm { k: 2, eps }]) {
            Ok(b) => omega_c(&b, grid).unwrap_or(f64::NEG_INFINITY),
            Err(_) => f64::NEG_INFINITY,
        }
    };
    // standard Nelder-Mead on -f
    let mut simplex = [
        (0.55, 0.02),
        (0.70, 0.01),
        (0.60, -0.03),
    ];
    let mut values = simplex.map(|(a, e)| f(a, e));
    for _ in 0..600 {
        // order descending by value (we maximize)
        let mut idx = [0usize, 1, 2];
        idx.sort_by(|&i, &j| values[j].partial_cmp(&values[i]).unwrap());
        simplex = [simplex[idx[0]], simplex[idx[1]], simplex[idx[2]]];
        values = [values[idx[0]], values[idx[1]], values[idx[2]]];
        let spread = (values[0] - values[2]).abs();
        let size = ((simplex[0].0 - simplex[2].0).powi(2)
            + (simplex[0].1 - simplex[2].1).powi(2))
        .sqrt();
        if spread < 1e-14 && size < 1e-9 {
            break;
        }
        let centroid = (
            (simplex[0].0 + simplex[1].0) / 2.0,
            (simplex[0].1 + simplex[1].1) / 2.0,
        );
        let worst = simplex[2];
        let reflect = (
            centroid.0 + (centroid.0 - worst.0),
            centroid.1 + (centroid.1 - worst.1),
        );
        let fr = f(reflect.0, reflect.1);
        if fr > values[0] {
            let expand = (
                centroid.0 + 2.0 * (centroid.0 - worst.0),
                centroid.1 + 2.0 * (centroid.1 - worst.1),
            );
            let fe = f(expand.0, expand.1);
            if fe > fr {
                simplex[2] = expand;
                values[2] = fe;
            } else {
                simplex[2] = reflect;
                values[2] = fr;
            }
        } else if fr > values[1] {
            simplex[2] = reflect;
            values[2] = fr;
        } else {
            let contract = (
                centroid.0 + 0.5 * (worst.0 - centroid.0),
                centroid.1 + 0.5 * (worst.1 - centroid.1),
            );
            let fc = f(contract.0, contract.1);
            if fc > values[2] {
                simplex[2] = contract;
                values[2] = fc;
            } else {
                // shrink toward the best vertex
                for i in 1..3 {
                    simplex[i] = (
                        simplex[0].0 + 0.5 * (simplex[i].0 - simplex[0].0),
                        simplex[0].1 + 0.5 * (simplex[i].1 - simplex[0].1),
                    );
                    values[i] = f(simplex[i].0, simplex[i].1);
                }
            }
        }
    }
    let best = simplex[0];
    Ok((best, values[0]))
}

/// Scans g(r) = ½(Ω^c(rB) + Ω^c((1-r)B)) - Ω^c(½B) over a radius window
/// using the ball closed form; returns (argmax r, max gain).
pub fn santalo_midpoint_scan(
    n: usize,
    window: (f64, f64),
    steps: usize,
) -> Result<(f64, f64)> {
    if n < 2 {
        return Err(Error::InvalidArgument("dimension < 2".into()));
    }
    let (lo, hi) = window;
    if !(0.0 < lo && lo < hi && hi < 1.0) {
        return Err(Error::InvalidArgument("window must sit inside (0, 1)".into()));
    }
    if steps < 3 {
        return Err(Error::InvalidArgument("need at least 3 scan steps".into()));
    }
    let mid = omega_c_ball(n, 0.5)?;
    let mut best_r = lo;
    let mut best_gain = f64::NEG_INFINITY;
    for i in 0..steps {
        let r = lo + (hi - lo) * i as f64 / (steps - 1) as f64;
        let gain = 0.5 * (omega_c_ball(n, r)? + omega_c_ball(n, 1.0 - r)?) - mid;
        if gain > best_gain {
            best_gain = gain;
            best_r = r;
        }
    }
    Ok((best_r, best_gain))
}

/// Second difference of f(r) = r^a (1-r)^b + r^b (1-r)^a at ½ (the profile
/// of the symmetrized ball functional, a = n(n-1)/(n+1), b = (n-1)/(n+1)),
/// together with the closed-form second derivative
/// (½)^{a+b-3} ((a-b)² - (a+b)).
pub fn midpoint_second_derivative(n: usize, h: f64) -> Result<(f64, f64)> {
    if n < 2 {
        return Err(Error::InvalidArgument("dimension < 2".into()));
    }
    let nf = n as f64;
    let a = nf * (nf - 1.0) / (nf + 1.0);
    let b = (nf - 1.0) / (nf + 1.0);
    let f = |r: f64| r.powf(a) * (1.0 - r).powf(b) + r.powf(b) * (1.0 - r).powf(a);
    let second_diff = (f(0.5 + h) - 2.0 * f(0.5) + f(0.5 - h)) / (h * h);
    let closed = 0.5f64.powf(a + b - 3.0) * ((a - b).powi(2) - (a + b));
    Ok((second_diff, closed))
}
