//! Deterministic grids, quadrature rules and tangent frames on the unit
//! sphere S^{n-1}, for the normalized (probability) Haar measure σ.
//!
//! Scheme choice by dimension:
//! - n = 2: equally spaced angles (trapezoid rule; spectrally accurate on
//!   smooth periodic integrands),
//! - n = 3: Gauss–Legendre in the polar cosine crossed with a trapezoid
//!   rule in azimuth,
//! - n ≥ 4: seeded Monte Carlo from normalized Gaussian samples.
//!
//! Deterministic grids carry a fixed rotation offset of 1e-3 radians so
//! that nodes avoid symmetry directions of test bodies, where support
//! functions may fail to be twice differentiable.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{dot, norm, pairwise_sum};

/// Rotation offset applied to all deterministic grids (radians).
pub const GRID_OFFSET: f64 = 1e-3;

/// A unit vector on S^{n-1}. The constructor enforces |u| = 1 to 1e-12.
#[derive(Debug, Clone, PartialEq)]
pub struct Direction(Vec<f64>);

impl Direction {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.len() < 2 {
            return Err(Error::InvalidArgument(
                "direction needs dimension >= 2".into(),
            ));
        }
        let n = norm(&coords);
        if (n - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidArgument(format!(
                "direction norm {n} differs from 1 by more than 1e-12"
            )));
        }
        Ok(Direction(coords))
    }

    /// Normalizes an arbitrary nonzero vector.
    pub fn normalized(coords: &[f64]) -> Result<Self> {
        let n = norm(coords);
        if n < 1e-14 {
            return Err(Error::InvalidArgument("cannot normalize zero vector".into()));
        }
        Ok(Direction(coords.iter().map(|x| x / n).collect()))
    }

    /// 2D direction from a polar angle.
    pub fn from_angle(theta: f64) -> Self {
        Direction(vec![theta.cos(), theta.sin()])
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// Polar angle, only meaningful in dimension 2.
    pub fn angle(&self) -> f64 {
        self.0[1].atan2(self.0[0])
    }

    pub fn negated(&self) -> Direction {
        Direction(self.0.iter().map(|x| -x).collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridScheme {
    UniformAngle2D,
    ProductGaussTrapezoid3D,
    MonteCarlo { seed: u64 },
}

impl GridScheme {
    pub fn describe(&self) -> String {
        match self {
            GridScheme::UniformAngle2D => "uniform_angle_2d".into(),
            GridScheme::ProductGaussTrapezoid3D => "product_gauss_trapezoid_3d".into(),
            GridScheme::MonteCarlo { seed } => format!("monte_carlo(seed={seed})"),
        }
    }
}

/// Quadrature nodes and weights for σ on S^{n-1}; weights sum to 1.
#[derive(Debug, Clone)]
pub struct SphereGrid {
    dim: usize,
    nodes: Vec<Direction>,
    weights: Vec<f64>,
    scheme: GridScheme,
}

/// Builds a grid.
///
/// - `UniformAngle2D`: `resolution` equally spaced angles, equal weights.
/// - `ProductGaussTrapezoid3D`: `resolution` Gauss–Legendre nodes in
///   cos(polar) × `2*resolution` trapezoid nodes in azimuth.
/// - `MonteCarlo`: `resolution` i.i.d. uniform directions, equal weights,
///   reproducible from the seed.
pub fn make_grid(dim: usize, resolution: usize, scheme: GridScheme) -> Result<SphereGrid> {
    if dim < 2 {
        return Err(Error::InvalidArgument(format!("dim {dim} < 2")));
    }
    if resolution < 4 {
        return Err(Error::InvalidArgument(format!("resolution {resolution} < 4")));
    }
    match scheme {
        GridScheme::UniformAngle2D => {
            if dim != 2 {
                return Err(Error::InvalidArgument(
                    "UniformAngle2D grid requires dim = 2".into(),
                ));
            }
            let m = resolution;
            let w = 1.0 / m as f64;
            let nodes = (0..m)
                .map(|k| {
                    Direction::from_angle(GRID_OFFSET + 2.0 * std::f64::consts::PI * k as f64 / m as f64)
                })
                .collect();
            Ok(SphereGrid {
                dim,
                nodes,
                weights: vec![w; m],
                scheme,
            })
        }
        GridScheme::ProductGaussTrapezoid3D => {
            if dim != 3 {
                return Err(Error::InvalidArgument(
                    "ProductGaussTrapezoid3D grid requires dim = 3".into(),
                ));
            }
            let (gl_nodes, gl_weights) = gauss_legendre(resolution);
            let m_az = 2 * resolution;
            let mut nodes = Vec::with_capacity(resolution * m_az);
            let mut weights = Vec::with_capacity(resolution * m_az);
            for (t, wt) in gl_nodes.iter().zip(&gl_weights) {
                let s = (1.0 - t * t).max(0.0).sqrt();
                for j in 0..m_az {
                    let phi = GRID_OFFSET + 2.0 * std::f64::consts::PI * j as f64 / m_az as f64;
                    nodes.push(Direction(vec![s * phi.cos(), s * phi.sin(), *t]));
                    // dσ = dt dφ / (4π); GL weights sum to 2, trapezoid to 2π/m_az each
                    weights.push(wt / (2.0 * m_az as f64));
                }
            }
            Ok(SphereGrid {
                dim,
                nodes,
                weights,
                scheme,
            })
        }
        GridScheme::MonteCarlo { seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut nodes = Vec::with_capacity(resolution);
            while nodes.len() < resolution {
                let v = gaussian_vector(&mut rng, dim);
                let n = norm(&v);
                if n < 1e-8 {
                    continue;
                }
                nodes.push(Direction(v.iter().map(|x| x / n).collect()));
            }
            let w = 1.0 / resolution as f64;
            Ok(SphereGrid {
                dim,
                nodes,
                weights: vec![w; resolution],
                scheme,
            })
        }
    }
}

fn uniform_01(rng: &mut ChaCha8Rng) -> f64 {
    // 53 random mantissa bits, strictly inside (0, 1)
    ((rng.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
}

fn gaussian_vector(rng: &mut ChaCha8Rng, dim: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(dim);
    while out.len() < dim {
        // Box-Muller
        let u1 = uniform_01(rng);
        let u2 = uniform_01(rng);
        let r = (-2.0 * u1.ln()).sqrt();
        let phi = 2.0 * std::f64::consts::PI * u2;
        out.push(r * phi.cos());
        if out.len() < dim {
            out.push(r * phi.sin());
        }
    }
    out
}

impl SphereGrid {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nodes(&self) -> &[Direction] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn scheme(&self) -> GridScheme {
        self.scheme
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Σ wᵢ f(uᵢ). Node evaluation may run in parallel; the reduction is a
    /// fixed-order pairwise sum, so results do not depend on thread count.
    pub fn integrate<F>(&self, f: F) -> Result<f64>
    where
        F: Fn(&Direction) -> f64 + Sync,
    {
        let values: Vec<f64> = if self.nodes.len() >= 4096 {
            self.nodes.par_iter().map(&f).collect()
        } else {
            self.nodes.iter().map(&f).collect()
        };
        for (i, v) in values.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFinite {
                    index: i,
                    coords: self.nodes[i].coords().to_vec(),
                    value: *v,
                });
            }
        }
        let terms: Vec<f64> = values
            .iter()
            .zip(&self.weights)
            .map(|(v, w)| v * w)
            .collect();
        Ok(pairwise_sum(&terms))
    }

    /// Fallible-integrand variant used by the functional quadratures.
    pub fn try_integrate<F>(&self, f: F) -> Result<f64>
    where
        F: Fn(&Direction) -> Result<f64> + Sync,
    {
        let values: Vec<Result<f64>> = if self.nodes.len() >= 4096 {
            self.nodes.par_iter().map(&f).collect()
        } else {
            self.nodes.iter().map(&f).collect()
        };
        let mut terms = Vec::with_capacity(values.len());
        for (i, v) in values.into_iter().enumerate() {
            let v = v?;
            if !v.is_finite() {
                return Err(Error::NonFinite {
                    index: i,
                    coords: self.nodes[i].coords().to_vec(),
                    value: v,
                });
            }
            terms.push(v * self.weights[i]);
        }
        Ok(pairwise_sum(&terms))
    }
}

/// Orthonormal basis of u^⊥ together with the base direction.
#[derive(Debug, Clone, PartialEq)]
pub struct TangentFrame {
    pub base: Direction,
    pub basis: Vec<Vec<f64>>,
}

/// Deterministic orthonormal basis of u^⊥ via a Householder reflection that
/// maps e_n to ±u (the sign branch keeps the reflector away from
/// cancellation); the basis is the image of e_1 … e_{n-1}.
pub fn tangent_frame(u: &Direction) -> TangentFrame {
    let n = u.dim();
    let c = u.coords();
    let last = c[n - 1];
    if (last - 1.0).abs() < 1e-14 {
        // u = e_n: identity frame
        let basis = (0..n - 1)
            .map(|i| {
                let mut e = vec![0.0; n];
                e[i] = 1.0;
                e
            })
            .collect();
        return TangentFrame {
            base: u.clone(),
            basis,
        };
    }
    // v = u + sign(u_n) e_n, H = I - 2 v vᵀ / (vᵀv); H e_n = ∓u
    let sign = if last >= 0.0 { 1.0 } else { -1.0 };
    let mut v = c.to_vec();
    v[n - 1] += sign;
    let vv = dot(&v, &v);
    let basis = (0..n - 1)
        .map(|i| {
            let mut e = vec![0.0; n];
            e[i] = 1.0;
            let f = 2.0 * v[i] / vv;
            for (ek, vk) in e.iter_mut().zip(&v) {
                *ek -= f * vk;
            }
            e
        })
        .collect();
    TangentFrame {
        base: u.clone(),
        basis,
    }
}

/// Gauss-Legendre nodes and weights on [-1, 1] (Newton iteration on the
/// Legendre recurrence).
pub fn gauss_legendre(m: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; m];
    let mut weights = vec![0.0; m];
    for i in 0..m.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // Legendre P_m(x) and P'_m(x)
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=m {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = m as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[m - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[m - 1 - i] = w;
    }
    (nodes, weights)
}
