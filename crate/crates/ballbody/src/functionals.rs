//! Geometric functionals of ball-bodies, all computed as quadratures over
//! the principal radii of curvature r_i(u) on the sphere:
//!
//! - c-affine surface area  Ω^c = ω_n ∫ ∏ (1 - r_i)^{1/(n+1)} r_i^{n/(n+1)} dσ,
//! - affine surface area    Ω   = ω_n ∫ ∏ r_i^{n/(n+1)} dσ,
//! - surface area           S   = ω_n ∫ ∏ r_i dσ,
//! - half mean width        M*  = ∫ h dσ,
//! - volume                 V   = (ω_n / n) ∫ h ∏ r_i dσ.
//!
//! σ is the probability measure; the sphere surface constant
//! ω_n = Vol_{n-1}(S^{n-1}) = 2 π^{n/2} / Γ(n/2) is kept separate.
//!
//! Finite-difference noise can push a radius to 1 + 1e-9 or -1e-9, where the
//! fractional powers above are undefined; radii are clamped into [0, 1]
//! before fractional powers and clamps larger than 1e-6 are counted.

use std::sync::atomic::{AtomicUsize, Ordering};

use serde::Serialize;

use crate::arc2d::{self, P2};
use crate::body::Body;
use crate::curvature::principal_radii;
use crate::error::{Error, Result};
use crate::sphere::{Direction, SphereGrid};

/// Clamp magnitudes beyond this threshold are reported in `clamp_count`.
const CLAMP_REPORT: f64 = 1e-6;
/// Radii this close to 0 or 1 are snapped onto the boundary before the
/// fractional powers: (1 - r)^{1/(n+1)} amplifies O(1e-12) differencing
/// noise on unit-sphere arcs into O(1e-4) integrand values otherwise.
const SNAP_BAND: f64 = 1e-9;

/// ln Γ(x) by the Lanczos approximation (g = 7, 9 terms); relative error
/// below 1e-13 on the positive axis.
pub fn ln_gamma(x: f64) -> f64 {
    const G: f64 = 7.0;
    #[allow(clippy::excessive_precision)]
    const COEF: [f64; 9] = [
        0.999_999_999_999_809_93,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_13,
        -176.615_029_162_140_59,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_571_6e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if x < 0.5 {
        // reflection formula
        let pi = std::f64::consts::PI;
        return (pi / (pi * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut a = COEF[0];
    for (i, c) in COEF.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    let t = x + G + 0.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + a.ln()
}

pub fn gamma(x: f64) -> f64 {
    ln_gamma(x).exp()
}

/// ω_n = Vol_{n-1}(S^{n-1}) = 2 π^{n/2} / Γ(n/2).
pub fn sphere_surface(n: usize) -> f64 {
    2.0 * std::f64::consts::PI.powf(n as f64 / 2.0) / gamma(n as f64 / 2.0)
}

/// Vol_n(B_2^n) = π^{n/2} / Γ(n/2 + 1) = ω_n / n.
pub fn ball_volume(n: usize) -> f64 {
    std::f64::consts::PI.powf(n as f64 / 2.0) / gamma(n as f64 / 2.0 + 1.0)
}

/// All five functionals of one body on one grid.
#[derive(Debug, Clone, Serialize)]
pub struct FunctionalReport {
    pub omega_c: f64,
    pub omega_classical: f64,
    pub surface_area: f64,
    pub mean_width_half: f64,
    pub volume: f64,
    pub grid_scheme: String,
    pub clamp_count: usize,
}

fn check_dims(body: &Body, grid: &SphereGrid) -> Result<()> {
    if body.dim() != grid.dim() {
        return Err(Error::InvalidArgument(format!(
            "body dim {} != grid dim {}",
            body.dim(),
            grid.dim()
        )));
    }
    Ok(())
}

fn reject_point(body: &Body) -> Result<()> {
    if body.is_point() {
        return Err(Error::UnsupportedBody(
            "functional undefined for a single point".into(),
        ));
    }
    Ok(())
}

fn clamped_radii(body: &Body, u: &Direction, clamps: &AtomicUsize) -> Result<Vec<f64>> {
    let spectrum = principal_radii(body, u)?;
    Ok(spectrum
        .radii
        .into_iter()
        .map(|r| {
            let mut c = r.clamp(0.0, 1.0);
            if c < SNAP_BAND {
                c = 0.0;
            } else if c > 1.0 - SNAP_BAND {
                c = 1.0;
            }
            if (c - r).abs() > CLAMP_REPORT {
                clamps.fetch_add(1, Ordering::Relaxed);
            }
            c
        })
        .collect())
}

fn omega_c_impl(body: &Body, grid: &SphereGrid, clamps: &AtomicUsize) -> Result<f64> {
    check_dims(body, grid)?;
    reject_point(body)?;
    let n = body.dim() as f64;
    let omega_n = sphere_surface(body.dim());
    let value = grid.try_integrate(|u| {
        let radii = clamped_radii(body, u, clamps)?;
        Ok(radii
            .iter()
            .map(|r| (1.0 - r).powf(1.0 / (n + 1.0)) * r.powf(n / (n + 1.0)))
            .product::<f64>())
    })?;
    Ok(omega_n * value)
}

/// c-affine surface area Ω^c(K).
pub fn omega_c(body: &Body, grid: &SphereGrid) -> Result<f64> {
    omega_c_impl(body, grid, &AtomicUsize::new(0))
}

/// Classical affine surface area Ω(K), rewritten on the sphere.
pub fn omega_classical(body: &Body, grid: &SphereGrid) -> Result<f64> {
    check_dims(body, grid)?;
    reject_point(body)?;
    let n = body.dim() as f64;
    let omega_n = sphere_surface(body.dim());
    let clamps = AtomicUsize::new(0);
    let value = grid.try_integrate(|u| {
        let radii = clamped_radii(body, u, &clamps)?;
        Ok(radii.iter().map(|r| r.powf(n / (n + 1.0))).product::<f64>())
    })?;
    Ok(omega_n * value)
}

/// Lebesgue surface area S(K) = ω_n ∫ ∏ r_i dσ (radii unclamped).
pub fn surface_area(body: &Body, grid: &SphereGrid) -> Result<f64> {
    check_dims(body, grid)?;
    let omega_n = sphere_surface(body.dim());
    let value = grid.try_integrate(|u| {
        let spectrum = principal_radii(body, u)?;
        Ok(spectrum.radii.iter().product::<f64>())
    })?;
    Ok(omega_n * value)
}

/// Half mean width M*(K) = ∫ h dσ.
pub fn mean_width_half(body: &Body, grid: &SphereGrid) -> Result<f64> {
    check_dims(body, grid)?;
    grid.try_integrate(|u| body.support(u.coords()))
}

/// Volume. For 2D ball intersections the exact arc-structure area is used;
/// everything else goes through the support-function formula.
pub fn volume(body: &Body, grid: &SphereGrid) -> Result<f64> {
    check_dims(body, grid)?;
    if let Body::BallIntersection { centers } = body {
        if body.dim() == 2 {
            let pts: Vec<P2> = centers.iter().map(|c| P2::from_slice(c)).collect();
            return arc2d::area(&pts);
        }
    }
    volume_quadrature(body, grid)
}

/// Support-function volume formula V = (ω_n / n) ∫ h ∏ r_i dσ, regardless of
/// shape; used as the cross-check route for bodies with exact areas.
pub fn volume_quadrature(body: &Body, grid: &SphereGrid) -> Result<f64> {
    check_dims(body, grid)?;
    let omega_n = sphere_surface(body.dim());
    let n = body.dim() as f64;
    let value = grid.try_integrate(|u| {
        let spectrum = principal_radii(body, u)?;
        let prod: f64 = spectrum.radii.iter().product();
        Ok(body.support(u.coords())? * prod)
    })?;
    Ok(omega_n / n * value)
}

/// Closed form Ω^c(r B_2^n) = ω_n (1-r)^{(n-1)/(n+1)} r^{n(n-1)/(n+1)}.
pub fn omega_c_ball(n: usize, r: f64) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("dimension {n} < 2")));
    }
    if !(0.0..=1.0).contains(&r) {
        return Err(Error::InvalidArgument(format!("radius {r} outside [0, 1]")));
    }
    let nf = n as f64;
    Ok(sphere_surface(n)
        * (1.0 - r).powf((nf - 1.0) / (nf + 1.0))
        * r.powf(nf * (nf - 1.0) / (nf + 1.0)))
}

/// Every functional of `body` on `grid`, with clamp statistics.
pub fn report(body: &Body, grid: &SphereGrid) -> Result<FunctionalReport> {
    let clamps = AtomicUsize::new(0);
    let omega_c = omega_c_impl(body, grid, &clamps)?;
    Ok(FunctionalReport {
        omega_c,
        omega_classical: omega_classical(body, grid)?,
        surface_area: surface_area(body, grid)?,
        mean_width_half: mean_width_half(body, grid)?,
        volume: volume(body, grid)?,
        grid_scheme: grid.scheme().describe(),
        clamp_count: clamps.load(Ordering::Relaxed),
    })
}
