//! Hessians of support functions (in the Alexandrov sense), principal radii
//! of curvature, and the curvature duality check r_i(K, u) + s_{n-i}(K^c, -u) = 1.
//!
//! Closed forms:
//! - ball: ∇²h(u) = r (I - u ⊗ u),
//! - trig support in 2D: ρ(θ) u⊥ ⊗ u⊥ with ρ = h + h'',
//! - Minkowski combination: weighted sum,
//! - c-dual: ∇²h_{K^c}(-u) = (I - u ⊗ u) - ∇²h_K(u).
//!
//! Ball intersections have no closed form; their Hessian is a central finite
//! difference of the contact map (which is 0-homogeneous, so ambient
//! differencing is legitimate), symmetrized and projected back onto u^⊥.
//! A two-step Richardson ladder (h, h/2) refines the estimate whenever the
//! two stencils disagree; gross disagreement marks the direction as
//! non-smooth (normal-cone boundaries), which callers may exclude.

use crate::body::{explicit_dual, Body};
use crate::error::{Error, Result};
use crate::linalg::{jacobi_eigenvalues, Mat};
use crate::sphere::{tangent_frame, Direction};

/// Default finite-difference step: 2D contact maps are exact arc geometry,
/// higher dimensions go through the iterative solver and need a larger step.
pub fn default_fd_step(body: &Body) -> f64 {
    if body.dim() == 2 {
        1e-6
    } else {
        1e-4
    }
}

const RICHARDSON_THRESHOLD: f64 = 1e-5;
const NON_SMOOTH_THRESHOLD: f64 = 1e-3;

/// Hessian together with its numerical quality markers.
#[derive(Debug, Clone)]
pub struct HessianInfo {
    pub matrix: Mat,
    /// Symmetry defect |A - Aᵀ|/2 discarded by symmetrization (0 for closed forms).
    pub asym_residual: f64,
    /// Max entrywise disagreement of the (h, h/2) stencils, when finite
    /// differences were used.
    pub fd_disagreement: Option<f64>,
}

/// Sorted principal radii of curvature at a direction.
#[derive(Debug, Clone)]
pub struct CurvatureSpectrum {
    pub direction: Direction,
    /// r_1 <= ... <= r_{n-1}; not clamped here (clamping is a policy of the
    /// functionals that consume them).
    pub radii: Vec<f64>,
    pub hessian_residual: f64,
}

/// Result of the duality check at one direction.
#[derive(Debug, Clone, Copy)]
pub struct DualityCheck {
    pub residual: f64,
    /// False at directions where finite differences straddled a normal-cone
    /// boundary; such nodes are excluded from aggregate statistics.
    pub smooth: bool,
}

/// n x n Hessian of the 1-homogeneous support extension at a unit direction.
pub fn hessian_homogeneous(body: &Body, u: &Direction, step: f64) -> Result<Mat> {
    if !(1e-6..=1e-2).contains(&step) {
        return Err(Error::InvalidArgument(format!(
            "fd step {step} outside [1e-6, 1e-2]"
        )));
    }
    Ok(hessian_info(body, u, step)?.matrix)
}

pub(crate) fn hessian_info(body: &Body, u: &Direction, step: f64) -> Result<HessianInfo> {
    match body {
        Body::Ball { radius, .. } => {
            let mut m = Mat::tangent_projector(u.coords());
            m.scale(*radius);
            Ok(HessianInfo {
                matrix: m,
                asym_residual: 0.0,
                fd_disagreement: None,
            })
        }
        Body::Trig2D { a, terms } => {
            let theta = u.angle();
            let rho = crate::body::trig_rho(*a, terms, theta);
            let perp = [-theta.sin(), theta.cos()];
            let mut m = Mat::zeros(2);
            for i in 0..2 {
                for j in 0..2 {
                    m.set(i, j, rho * perp[i] * perp[j]);
                }
            }
            Ok(HessianInfo {
                matrix: m,
                asym_residual: 0.0,
                fd_disagreement: None,
            })
        }
        Body::MinkowskiCombo { parts } => {
            let n = body.dim();
            let mut m = Mat::zeros(n);
            let mut res: f64 = 0.0;
            let mut dis: Option<f64> = None;
            for (w, b) in parts {
                let info = hessian_info(b, u, step)?;
                m.add_scaled(*w, &info.matrix);
                res = res.max(info.asym_residual);
                dis = match (dis, info.fd_disagreement) {
                    (None, d) => d,
                    (d, None) => d,
                    (Some(a), Some(b)) => Some(a.max(b)),
                };
            }
            Ok(HessianInfo {
                matrix: m,
                asym_residual: res,
                fd_disagreement: dis,
            })
        }
        Body::CDualOf { inner } => {
            let info = hessian_info(inner, &u.negated(), step)?;
            let mut m = Mat::tangent_projector(u.coords());
            m.add_scaled(-1.0, &info.matrix);
            Ok(HessianInfo {
                matrix: m,
                asym_residual: info.asym_residual,
                fd_disagreement: info.fd_disagreement,
            })
        }
        Body::BallIntersection { .. } => hessian_fd(body, u, step),
    }
}

/// Finite-difference Hessian of the contact map, for any body. This is the
/// route used when a Hessian must be computed without algebraic shortcuts.
pub(crate) fn hessian_fd(body: &Body, u: &Direction, step: f64) -> Result<HessianInfo> {
    let coarse = fd_stencil(body, u, step)?;
    let fine = fd_stencil(body, u, step / 2.0)?;
    let disagreement = coarse.max_abs_diff(&fine);
    let mut m = if disagreement > RICHARDSON_THRESHOLD {
        // Richardson extrapolation of the O(h²) central difference
        let mut r = fine.clone();
        r.scale(4.0 / 3.0);
        r.add_scaled(-1.0 / 3.0, &coarse);
        r
    } else {
        fine
    };
    let asym = m.symmetrize();
    m.project_onto_tangent(u.coords());
    Ok(HessianInfo {
        matrix: m,
        asym_residual: asym,
        fd_disagreement: Some(disagreement),
    })
}

fn fd_stencil(body: &Body, u: &Direction, step: f64) -> Result<Mat> {
    let n = u.dim();
    let mut m = Mat::zeros(n);
    for k in 0..n {
        let mut plus = u.coords().to_vec();
        plus[k] += step;
        let mut minus = u.coords().to_vec();
        minus[k] -= step;
        let gp = body.support_gradient(&plus)?;
        let gm = body.support_gradient(&minus)?;
        for i in 0..n {
            m.set(i, k, (gp[i] - gm[i]) / (2.0 * step));
        }
    }
    Ok(m)
}

/// Eigenvalues of the Hessian restricted to u^⊥ (cyclic Jacobi on the
/// (n-1) x (n-1) projection), sorted ascending. Values are reported raw.
pub fn principal_radii(body: &Body, u: &Direction) -> Result<CurvatureSpectrum> {
    let info = hessian_info(body, u, default_fd_step(body))?;
    spectrum_from_info(u, &info)
}

fn spectrum_from_info(u: &Direction, info: &HessianInfo) -> Result<CurvatureSpectrum> {
    let frame = tangent_frame(u);
    let n = u.dim();
    let mut projected = Mat::zeros(n - 1);
    for i in 0..n - 1 {
        let hbi = info.matrix.mul_vec(&frame.basis[i]);
        for j in 0..n - 1 {
            projected.set(i, j, crate::linalg::dot(&frame.basis[j], &hbi));
        }
    }
    projected.symmetrize();
    let radii = jacobi_eigenvalues(&projected)?;
    Ok(CurvatureSpectrum {
        direction: u.clone(),
        radii,
        hessian_residual: info.asym_residual,
    })
}

/// max_i |r_i(K, u) + s_{n-i}(K^c, -u) - 1|, with the dual side computed by
/// an independent route: closed forms re-derived from the dual's support
/// where they exist, finite differences of the dual's own contact points
/// when the body is a ball intersection. The Hessian-complement shortcut is
/// never used here.
pub fn curvature_duality_residual(body: &Body, u: &Direction) -> Result<DualityCheck> {
    if body.is_point() {
        return Err(Error::UnsupportedBody("point has no curvature".into()));
    }
    if body.is_unit_ball() {
        return Err(Error::UnsupportedBody(
            "translate of the unit ball: its dual is a point".into(),
        ));
    }
    let primal_info = hessian_info(body, u, default_fd_step(body))?;
    let primal = spectrum_from_info(u, &primal_info)?;

    let dual = explicit_dual(body);
    let neg = u.negated();
    let dual_info = if contains_wrapper(&dual) {
        hessian_fd(&dual, &neg, default_fd_step(&dual))?
    } else {
        hessian_info(&dual, &neg, default_fd_step(&dual))?
    };
    let dual_spec = spectrum_from_info(&neg, &dual_info)?;

    let n1 = primal.radii.len();
    let mut residual: f64 = 0.0;
    for i in 0..n1 {
        let pair = primal.radii[i] + dual_spec.radii[n1 - 1 - i];
        residual = residual.max((pair - 1.0).abs());
    }
    let smooth = primal_info.fd_disagreement.unwrap_or(0.0) < NON_SMOOTH_THRESHOLD
        && dual_info.fd_disagreement.unwrap_or(0.0) < NON_SMOOTH_THRESHOLD;
    Ok(DualityCheck { residual, smooth })
}

fn contains_wrapper(body: &Body) -> bool {
    match body {
        Body::CDualOf { .. } => true,
        Body::MinkowskiCombo { parts } => parts.iter().any(|(_, b)| contains_wrapper(b)),
        _ => false,
    }
}
