//! Convex bodies in the ball-body class (intersections of translates of the
//! unit Euclidean ball), represented through their support functions.
//!
//! Every shape evaluates h_K(x) = max_{y in K} <y, x> and its gradient (the
//! contact point). The c-dual K^c = ∩_{x in K} (x + B) is kept lazy as a
//! wrapper: by the duality identity h_K(x) + h_{K^c}(-x) = |x| its support
//! is O(1) over the inner body. Shapes:
//!
//! - `Ball`: center + radius in [0, 1] (a summand of the unit ball),
//! - `Trig2D`: 2D support h(θ) = a + Σ ε_k cos(kθ), k >= 2, with radius of
//!   curvature ρ(θ) = a + Σ ε_k (1-k²) cos(kθ) in [0, 1],
//! - `BallIntersection`: ∩ⱼ (cⱼ + B); exact arc geometry in 2D, projected
//!   gradient with Dykstra projection in higher dimensions,
//! - `MinkowskiCombo`: convex combination, support = weighted sum,
//! - `CDualOf`: lazy c-dual.

use serde::{Deserialize, Serialize};

use crate::arc2d::{self, P2};
use crate::dykstra;
use crate::error::{Error, Result};
use crate::linalg::{dot, norm};
use crate::sphere::{make_grid, Direction, GridScheme, SphereGrid};

/// Grid size for the Trig2D class-membership check at construction.
const TRIG_VALIDATION_GRID: usize = 4096;
/// Grid size for the sampled outer-approximation membership test.
const CONTAINS_GRID: usize = 2048;
/// Seed for the fixed membership grid in dimensions >= 4.
const CONTAINS_SEED: u64 = 0x5EED;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrigTerm {
    pub k: u32,
    pub eps: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Body {
    Ball {
        center: Vec<f64>,
        radius: f64,
    },
    Trig2D {
        a: f64,
        terms: Vec<TrigTerm>,
    },
    BallIntersection {
        centers: Vec<Vec<f64>>,
    },
    MinkowskiCombo {
        parts: Vec<(f64, Body)>,
    },
    CDualOf {
        inner: Box<Body>,
    },
}

/// Boundary point x(u) with its outer normal direction.
#[derive(Debug, Clone, PartialEq)]
pub struct ContactPoint {
    pub direction: Direction,
    pub point: Vec<f64>,
}

impl Body {
    pub fn ball(center: Vec<f64>, radius: f64) -> Result<Body> {
        let b = Body::Ball { center, radius };
        b.validate()?;
        Ok(b)
    }

    pub fn trig2d(a: f64, terms: Vec<TrigTerm>) -> Result<Body> {
        let b = Body::Trig2D { a, terms };
        b.validate()?;
        Ok(b)
    }

    pub fn ball_intersection(centers: Vec<Vec<f64>>) -> Result<Body> {
        let b = Body::BallIntersection { centers };
        b.validate()?;
        Ok(b)
    }

    pub fn minkowski(parts: Vec<(f64, Body)>) -> Result<Body> {
        let b = Body::MinkowskiCombo { parts };
        b.validate()?;
        Ok(b)
    }

    pub fn dim(&self) -> usize {
        match self {
            Body::Ball { center, .. } => center.len(),
            Body::Trig2D { .. } => 2,
            Body::BallIntersection { centers } => centers.first().map_or(0, |c| c.len()),
            Body::MinkowskiCombo { parts } => parts.first().map_or(0, |(_, b)| b.dim()),
            Body::CDualOf { inner } => inner.dim(),
        }
    }

    /// Checks every invariant of the representation (recursively).
    pub fn validate(&self) -> Result<()> {
        match self {
            Body::Ball { center, radius } => {
                if center.len() < 2 {
                    return Err(Error::InvalidArgument("ball needs dim >= 2".into()));
                }
                if !center.iter().all(|c| c.is_finite()) || !radius.is_finite() {
                    return Err(Error::InvalidArgument("non-finite ball data".into()));
                }
                if *radius < -1e-12 || *radius > 1.0 + 1e-12 {
                    return Err(Error::InvalidArgument(format!(
                        "ball radius {radius} outside [0, 1]"
                    )));
                }
                Ok(())
            }
            Body::Trig2D { a, terms } => {
                if !a.is_finite() || !terms.iter().all(|t| t.eps.is_finite()) {
                    return Err(Error::InvalidArgument("non-finite trig data".into()));
                }
                for t in terms {
                    if t.k < 2 {
                        return Err(Error::InvalidArgument(format!(
                            "trig term k = {} < 2 (k = 1 is a translation)",
                            t.k
                        )));
                    }
                }
                for i in 0..TRIG_VALIDATION_GRID {
                    let theta = 2.0 * std::f64::consts::PI * i as f64 / TRIG_VALIDATION_GRID as f64;
                    let rho = trig_rho(*a, terms, theta);
                    if !(-1e-12..=1.0 + 1e-12).contains(&rho) {
                        return Err(Error::InvalidArgument(format!(
                            "trig radius of curvature {rho:.6} at angle {theta:.4} leaves [0, 1]"
                        )));
                    }
                }
                Ok(())
            }
            Body::BallIntersection { centers } => {
                if centers.is_empty() {
                    return Err(Error::InvalidArgument("no centers".into()));
                }
                let dim = centers[0].len();
                if dim < 2 {
                    return Err(Error::InvalidArgument("ball intersection needs dim >= 2".into()));
                }
                for c in centers {
                    if c.len() != dim {
                        return Err(Error::InvalidArgument("mixed center dimensions".into()));
                    }
                    if !c.iter().all(|x| x.is_finite()) {
                        return Err(Error::InvalidArgument("non-finite center".into()));
                    }
                }
                for i in 0..centers.len() {
                    for j in i + 1..centers.len() {
                        let d = norm(&crate::linalg::sub(&centers[i], &centers[j]));
                        if d >= 2.0 {
                            return Err(Error::EmptyBody(format!(
                                "centers {i} and {j} are {d:.6} >= 2 apart"
                            )));
                        }
                    }
                }
                let slack = if dim == 2 {
                    let pts: Vec<P2> = centers.iter().map(|c| P2::from_slice(c)).collect();
                    arc2d::inradius_lower_bound(&pts)
                } else {
                    dykstra::inradius_lower_bound(centers)
                };
                if slack < 1e-6 {
                    return Err(Error::EmptyBody(format!(
                        "intersection interior too thin (Chebyshev slack {slack:.2e} < 1e-6)"
                    )));
                }
                Ok(())
            }
            Body::MinkowskiCombo { parts } => {
                if parts.is_empty() {
                    return Err(Error::InvalidArgument("empty combination".into()));
                }
                let mut sum = 0.0;
                let dim = parts[0].1.dim();
                for (w, b) in parts {
                    if *w < -1e-15 {
                        return Err(Error::InvalidArgument(format!("negative weight {w}")));
                    }
                    sum += w;
                    b.validate()?;
                    if b.dim() != dim {
                        return Err(Error::InvalidArgument("mixed part dimensions".into()));
                    }
                }
                if (sum - 1.0).abs() > 1e-12 {
                    return Err(Error::InvalidArgument(format!(
                        "weights sum to {sum}, expected 1"
                    )));
                }
                Ok(())
            }
            Body::CDualOf { inner } => {
                inner.validate()?;
                if let Some((_, r)) = inner.as_effective_ball() {
                    if r < 1e-12 {
                        return Err(Error::UnsupportedBody(
                            "c-dual wrapper around a single point".into(),
                        ));
                    }
                }
                Ok(())
            }
        }
    }

    /// Support function h(x) for any nonzero x (1-homogeneous).
    pub fn support(&self, x: &[f64]) -> Result<f64> {
        let nx = norm(x);
        if nx < 1e-14 {
            return Err(Error::InvalidArgument("support at x = 0".into()));
        }
        match self {
            Body::Ball { center, radius } => Ok(dot(center, x) + radius * nx),
            Body::Trig2D { a, terms } => {
                let theta = x[1].atan2(x[0]);
                Ok(nx * trig_h(*a, terms, theta))
            }
            Body::BallIntersection { centers } => {
                let unit: Vec<f64> = x.iter().map(|v| v / nx).collect();
                if self.dim() == 2 {
                    let pts: Vec<P2> = centers.iter().map(|c| P2::from_slice(c)).collect();
                    let (h, _) = arc2d::support(&pts, P2::from_slice(&unit))?;
                    Ok(nx * h)
                } else {
                    let y = dykstra::support_point(centers, &unit)?;
                    Ok(nx * dot(&y, &unit))
                }
            }
            Body::MinkowskiCombo { parts } => {
                let mut s = 0.0;
                for (w, b) in parts {
                    s += w * b.support(x)?;
                }
                Ok(s)
            }
            Body::CDualOf { inner } => {
                let neg: Vec<f64> = x.iter().map(|v| -v).collect();
                Ok(nx - inner.support(&neg)?)
            }
        }
    }

    /// Gradient of the support function (0-homogeneous in x); for a unit
    /// direction this is the contact point x(u).
    pub fn support_gradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        let nx = norm(x);
        if nx < 1e-14 {
            return Err(Error::InvalidArgument("gradient at x = 0".into()));
        }
        let unit: Vec<f64> = x.iter().map(|v| v / nx).collect();
        match self {
            Body::Ball { center, radius } => {
                Ok(center.iter().zip(&unit).map(|(c, u)| c + radius * u).collect())
            }
            Body::Trig2D { a, terms } => {
                let theta = unit[1].atan2(unit[0]);
                let h = trig_h(*a, terms, theta);
                let hp = trig_hp(terms, theta);
                Ok(vec![
                    h * theta.cos() - hp * theta.sin(),
                    h * theta.sin() + hp * theta.cos(),
                ])
            }
            Body::BallIntersection { centers } => {
                if self.dim() == 2 {
                    let pts: Vec<P2> = centers.iter().map(|c| P2::from_slice(c)).collect();
                    let (_, p) = arc2d::support(&pts, P2::from_slice(&unit))?;
                    Ok(vec![p.x, p.y])
                } else {
                    dykstra::support_point(centers, &unit)
                }
            }
            Body::MinkowskiCombo { parts } => {
                let mut g = vec![0.0; x.len()];
                for (w, b) in parts {
                    let gb = b.support_gradient(x)?;
                    for (gi, v) in g.iter_mut().zip(&gb) {
                        *gi += w * v;
                    }
                }
                Ok(g)
            }
            Body::CDualOf { inner } => {
                let neg: Vec<f64> = unit.iter().map(|v| -v).collect();
                let gi = inner.support_gradient(&neg)?;
                Ok(unit.iter().zip(&gi).map(|(u, g)| u + g).collect())
            }
        }
    }

    /// Contact point x(u) = ∇h(u) at a unit direction.
    pub fn contact_point(&self, u: &Direction) -> Result<ContactPoint> {
        let point = self.support_gradient(u.coords())?;
        Ok(ContactPoint {
            direction: u.clone(),
            point,
        })
    }

    /// Membership test. Ball and BallIntersection use exact distance checks;
    /// the other shapes use the support inequality <p, u> <= h(u) + tol over
    /// a fixed 2048-node grid, i.e. an outer approximation of K.
    pub fn contains(&self, p: &[f64], tol: f64) -> bool {
        match self {
            Body::Ball { center, radius } => {
                norm(&crate::linalg::sub(p, center)) <= radius + tol
            }
            Body::BallIntersection { centers } => centers
                .iter()
                .all(|c| norm(&crate::linalg::sub(p, c)) <= 1.0 + tol),
            _ => {
                let grid = membership_grid(self.dim());
                grid.nodes().iter().all(|u| {
                    match self.support(u.coords()) {
                        Ok(h) => dot(p, u.coords()) <= h + tol,
                        Err(_) => false,
                    }
                })
            }
        }
    }

    /// Reflection -K.
    pub fn reflect(&self) -> Body {
        match self {
            Body::Ball { center, radius } => Body::Ball {
                center: center.iter().map(|c| -c).collect(),
                radius: *radius,
            },
            Body::Trig2D { a, terms } => Body::Trig2D {
                a: *a,
                terms: terms
                    .iter()
                    .map(|t| TrigTerm {
                        k: t.k,
                        eps: if t.k % 2 == 0 { t.eps } else { -t.eps },
                    })
                    .collect(),
            },
            Body::BallIntersection { centers } => Body::BallIntersection {
                centers: centers
                    .iter()
                    .map(|c| c.iter().map(|x| -x).collect())
                    .collect(),
            },
            Body::MinkowskiCombo { parts } => Body::MinkowskiCombo {
                parts: parts.iter().map(|(w, b)| (*w, b.reflect())).collect(),
            },
            Body::CDualOf { inner } => Body::CDualOf {
                inner: Box::new(inner.reflect()),
            },
        }
    }

    /// When the body is a Euclidean ball in disguise, returns (center, radius).
    pub fn as_effective_ball(&self) -> Option<(Vec<f64>, f64)> {
        match self {
            Body::Ball { center, radius } => Some((center.clone(), *radius)),
            Body::Trig2D { a, terms } => {
                if terms.iter().all(|t| t.eps == 0.0) {
                    Some((vec![0.0, 0.0], *a))
                } else {
                    None
                }
            }
            Body::BallIntersection { centers } => {
                let pts: Vec<Vec<f64>> = {
                    let mut out: Vec<Vec<f64>> = Vec::new();
                    for c in centers {
                        if !out
                            .iter()
                            .any(|o| norm(&crate::linalg::sub(o, c)) < 1e-12)
                        {
                            out.push(c.clone());
                        }
                    }
                    out
                };
                if pts.len() == 1 {
                    Some((pts[0].clone(), 1.0))
                } else {
                    None
                }
            }
            Body::MinkowskiCombo { parts } => {
                let mut center = vec![0.0; self.dim()];
                let mut radius = 0.0;
                for (w, b) in parts {
                    let (c, r) = b.as_effective_ball()?;
                    for (ci, cj) in center.iter_mut().zip(&c) {
                        *ci += w * cj;
                    }
                    radius += w * r;
                }
                Some((center, radius))
            }
            Body::CDualOf { inner } => inner
                .as_effective_ball()
                .map(|(c, r)| (c, 1.0 - r)),
        }
    }

    /// True when the body is a single point (the dual of a full unit ball).
    pub fn is_point(&self) -> bool {
        matches!(self.as_effective_ball(), Some((_, r)) if r < 1e-12)
    }

    /// True when the body is a translate of the full unit ball (whose dual
    /// is a point).
    pub fn is_unit_ball(&self) -> bool {
        matches!(self.as_effective_ball(), Some((_, r)) if (r - 1.0).abs() < 1e-12)
    }
}

/// The c-dual K ↦ K^c, with algebraic simplifications: balls dualize to
/// balls (K - K^c = B forces radius 1 - r) and the double dual unwraps
/// (K^cc = K).
pub fn c_dual(body: &Body) -> Body {
    match body {
        Body::Ball { center, radius } => Body::Ball {
            center: center.clone(),
            radius: 1.0 - radius,
        },
        Body::CDualOf { inner } => (**inner).clone(),
        other => Body::CDualOf {
            inner: Box::new(other.clone()),
        },
    }
}

/// Closed-form dual representation where one exists; used where the dual
/// side of an identity must be computed by an independent route. Falls back
/// to the lazy wrapper for ball intersections.
pub(crate) fn explicit_dual(body: &Body) -> Body {
    match body {
        Body::Ball { center, radius } => Body::Ball {
            center: center.clone(),
            radius: 1.0 - radius,
        },
        // 1 - h(θ+π) is again a trig support: a' = 1-a, ε'_k = -(-1)^k ε_k
        Body::Trig2D { a, terms } => Body::Trig2D {
            a: 1.0 - a,
            terms: terms
                .iter()
                .map(|t| TrigTerm {
                    k: t.k,
                    eps: if t.k % 2 == 0 { -t.eps } else { t.eps },
                })
                .collect(),
        },
        // dual of a convex combination is the combination of the duals
        Body::MinkowskiCombo { parts } => Body::MinkowskiCombo {
            parts: parts.iter().map(|(w, b)| (*w, explicit_dual(b))).collect(),
        },
        Body::CDualOf { inner } => (**inner).clone(),
        Body::BallIntersection { .. } => Body::CDualOf {
            inner: Box::new(body.clone()),
        },
    }
}

pub fn minkowski(parts: Vec<(f64, Body)>) -> Result<Body> {
    Body::minkowski(parts)
}

/// Sampled necessary test for membership in the ball-body class: at every
/// grid node all principal radii of curvature must lie in [-tol, 1 + tol].
pub fn is_ball_body(body: &Body, grid: &SphereGrid, tol: f64) -> Result<bool> {
    Ok(ball_body_violation(body, grid, tol)?.is_none())
}

/// First grid direction violating the radii bound, with the radii found.
pub fn ball_body_violation(
    body: &Body,
    grid: &SphereGrid,
    tol: f64,
) -> Result<Option<(Direction, Vec<f64>)>> {
    if grid.dim() != body.dim() {
        return Err(Error::InvalidArgument(format!(
            "grid dim {} != body dim {}",
            grid.dim(),
            body.dim()
        )));
    }
    for u in grid.nodes() {
        let spectrum = crate::curvature::principal_radii(body, u)?;
        if spectrum
            .radii
            .iter()
            .any(|r| *r < -tol || *r > 1.0 + tol)
        {
            return Ok(Some((u.clone(), spectrum.radii)));
        }
    }
    Ok(None)
}

pub(crate) fn trig_h(a: f64, terms: &[TrigTerm], theta: f64) -> f64 {
    a + terms
        .iter()
        .map(|t| t.eps * (t.k as f64 * theta).cos())
        .sum::<f64>()
}

pub(crate) fn trig_hp(terms: &[TrigTerm], theta: f64) -> f64 {
    -terms
        .iter()
        .map(|t| t.eps * t.k as f64 * (t.k as f64 * theta).sin())
        .sum::<f64>()
}

/// Radius of curvature ρ = h + h'' of a trig support function.
pub(crate) fn trig_rho(a: f64, terms: &[TrigTerm], theta: f64) -> f64 {
    a + terms
        .iter()
        .map(|t| {
            let k2 = (t.k as f64).powi(2);
            t.eps * (1.0 - k2) * (t.k as f64 * theta).cos()
        })
        .sum::<f64>()
}

fn membership_grid(dim: usize) -> SphereGrid {
    match dim {
        2 => make_grid(2, CONTAINS_GRID, GridScheme::UniformAngle2D).unwrap(),
        3 => make_grid(3, 32, GridScheme::ProductGaussTrapezoid3D).unwrap(),
        _ => make_grid(dim, CONTAINS_GRID, GridScheme::MonteCarlo { seed: CONTAINS_SEED }).unwrap(),
    }
}

// ---------------------------------------------------------------------------
// JSON wire format
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PartSpec {
    pub weight: f64,
    pub body: BodySpec,
}

/// Serialized body description, the schema consumed and emitted by the CLI.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum BodySpec {
    Ball {
        dim: usize,
        center: Vec<f64>,
        radius: f64,
    },
    #[serde(rename = "trig2d")]
    Trig2D {
        a: f64,
        terms: Vec<TrigTerm>,
    },
    BallIntersection {
        dim: usize,
        centers: Vec<Vec<f64>>,
    },
    Minkowski {
        parts: Vec<PartSpec>,
    },
    CDual {
        of: Box<BodySpec>,
    },
}

impl BodySpec {
    /// Validates and converts into a `Body` (applying the c-dual
    /// simplifications).
    pub fn into_body(self) -> Result<Body> {
        match self {
            BodySpec::Ball { dim, center, radius } => {
                if center.len() != dim {
                    return Err(Error::InvalidArgument(format!(
                        "ball dim {dim} does not match center length {}",
                        center.len()
                    )));
                }
                Body::ball(center, radius)
            }
            BodySpec::Trig2D { a, terms } => Body::trig2d(a, terms),
            BodySpec::BallIntersection { dim, centers } => {
                if centers.iter().any(|c| c.len() != dim) {
                    return Err(Error::InvalidArgument(
                        "ball_intersection dim does not match centers".into(),
                    ));
                }
                Body::ball_intersection(centers)
            }
            BodySpec::Minkowski { parts } => {
                let mut converted = Vec::with_capacity(parts.len());
                for p in parts {
                    converted.push((p.weight, p.body.into_body()?));
                }
                Body::minkowski(converted)
            }
            BodySpec::CDual { of } => {
                let inner = of.into_body()?;
                let dual = c_dual(&inner);
                dual.validate()?;
                Ok(dual)
            }
        }
    }

    pub fn from_body(body: &Body) -> BodySpec {
        match body {
            Body::Ball { center, radius } => BodySpec::Ball {
                dim: center.len(),
                center: center.clone(),
                radius: *radius,
            },
            Body::Trig2D { a, terms } => BodySpec::Trig2D {
                a: *a,
                terms: terms.clone(),
            },
            Body::BallIntersection { centers } => BodySpec::BallIntersection {
                dim: centers.first().map_or(0, |c| c.len()),
                centers: centers.clone(),
            },
            Body::MinkowskiCombo { parts } => BodySpec::Minkowski {
                parts: parts
                    .iter()
                    .map(|(w, b)| PartSpec {
                        weight: *w,
                        body: BodySpec::from_body(b),
                    })
                    .collect(),
            },
            Body::CDualOf { inner } => BodySpec::CDual {
                of: Box::new(BodySpec::from_body(inner)),
            },
        }
    }
}
