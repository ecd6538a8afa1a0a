//! Small dense linear algebra: n stays below ~8 everywhere in this crate,
//! so everything is plain `Vec<f64>` with no external solver.

use crate::error::{Error, Result};

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn scaled(a: &[f64], s: f64) -> Vec<f64> {
    a.iter().map(|x| x * s).collect()
}

pub fn add(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// a + s*b
pub fn axpy(a: &[f64], s: f64, b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + s * y).collect()
}

/// Pairwise (cascade) summation. Order of operations depends only on the
/// slice length, which keeps parallel quadrature deterministic.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 32 {
        let mut acc = 0.0;
        for &x in xs {
            acc += x;
        }
        acc
    } else {
        let mid = xs.len() / 2;
        pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
    }
}

/// Dense square matrix, row major.
#[derive(Debug, Clone, PartialEq)]
pub struct Mat {
    pub n: usize,
    pub a: Vec<f64>,
}

impl Mat {
    pub fn zeros(n: usize) -> Self {
        Mat {
            n,
            a: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    /// I - u ⊗ u for a unit vector u (orthogonal projector onto u^⊥).
    pub fn tangent_projector(u: &[f64]) -> Self {
        let n = u.len();
        let mut m = Mat::identity(n);
        for i in 0..n {
            for j in 0..n {
                *m.at_mut(i, j) -= u[i] * u[j];
            }
        }
        m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.a[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.a[i * self.n + j] = v;
    }

    #[inline]
    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut f64 {
        &mut self.a[i * self.n + j]
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j) * v[j]).sum())
            .collect()
    }

    pub fn add_scaled(&mut self, s: f64, other: &Mat) {
        debug_assert_eq!(self.n, other.n);
        for (x, y) in self.a.iter_mut().zip(&other.a) {
            *x += s * y;
        }
    }

    pub fn scale(&mut self, s: f64) {
        for x in self.a.iter_mut() {
            *x *= s;
        }
    }

    pub fn max_abs_diff(&self, other: &Mat) -> f64 {
        self.a
            .iter()
            .zip(&other.a)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max)
    }

    /// Splits into the symmetric part; returns the largest discarded
    /// asymmetry |A - Aᵀ|/2.
    pub fn symmetrize(&mut self) -> f64 {
        let mut defect: f64 = 0.0;
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                let s = 0.5 * (self.get(i, j) + self.get(j, i));
                let d = 0.5 * (self.get(i, j) - self.get(j, i)).abs();
                defect = defect.max(d);
                self.set(i, j, s);
                self.set(j, i, s);
            }
        }
        defect
    }

    /// P M P with P = I - u ⊗ u. Enforces the 1-homogeneity null space of
    /// support-function Hessians: M' = M - u vᵀ - w uᵀ + s u uᵀ with
    /// v = Mᵀu, w = Mu, s = uᵀMu.
    pub fn project_onto_tangent(&mut self, u: &[f64]) {
        let n = self.n;
        let w = self.mul_vec(u);
        let s = dot(u, &w);
        let v: Vec<f64> = (0..n)
            .map(|j| (0..n).map(|k| self.get(k, j) * u[k]).sum())
            .collect();
        for i in 0..n {
            for j in 0..n {
                let val = self.get(i, j) - u[i] * v[j] - w[i] * u[j] + s * u[i] * u[j];
                self.set(i, j, val);
            }
        }
    }
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, sorted
/// ascending. Iterates until the off-diagonal Frobenius norm drops below
/// 1e-12 (or 64 sweeps).
pub fn jacobi_eigenvalues(m: &Mat) -> Result<Vec<f64>> {
    const OFF_TOL: f64 = 1e-12;
    const MAX_SWEEPS: usize = 64;
    let n = m.n;
    if n == 0 {
        return Ok(Vec::new());
    }
    if n == 1 {
        return Ok(vec![m.get(0, 0)]);
    }
    let mut a = m.clone();

    let off_norm = |a: &Mat| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a.get(i, j) * a.get(i, j);
                }
            }
        }
        s.sqrt()
    };

    for _ in 0..MAX_SWEEPS {
        if off_norm(&a) < OFF_TOL {
            let mut eig: Vec<f64> = (0..n).map(|i| a.get(i, i)).collect();
            eig.sort_by(|x, y| x.partial_cmp(y).unwrap());
            return Ok(eig);
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = a.get(p, q);
                if apq.abs() < OFF_TOL * 1e-3 {
                    continue;
                }
                let app = a.get(p, p);
                let aqq = a.get(q, q);
                let theta = 0.5 * (aqq - app) / apq;
                let t = if theta.abs() > 1e12 {
                    0.5 / theta
                } else {
                    let s = if theta >= 0.0 { 1.0 } else { -1.0 };
                    s / (theta.abs() + (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // rotate rows/columns p and q
                for k in 0..n {
                    let akp = a.get(k, p);
                    let akq = a.get(k, q);
                    a.set(k, p, c * akp - s * akq);
                    a.set(k, q, s * akp + c * akq);
                }
                for k in 0..n {
                    let apk = a.get(p, k);
                    let aqk = a.get(q, k);
                    a.set(p, k, c * apk - s * aqk);
                    a.set(q, k, s * apk + c * aqk);
                }
            }
        }
    }
    if off_norm(&a) < OFF_TOL {
        let mut eig: Vec<f64> = (0..n).map(|i| a.get(i, i)).collect();
        eig.sort_by(|x, y| x.partial_cmp(y).unwrap());
        return Ok(eig);
    }
    Err(Error::Convergence {
        context: "jacobi eigenvalue iteration".into(),
        residual: off_norm(&a),
    })
}

/// Gaussian elimination with partial pivoting; solves A x = b in place.
/// Only used for tiny KKT and least-squares systems.
pub fn solve_dense(a: &mut Mat, b: &mut [f64]) -> Result<Vec<f64>> {
    let n = a.n;
    debug_assert_eq!(b.len(), n);
    for col in 0..n {
        let mut piv = col;
        let mut best = a.get(col, col).abs();
        for r in col + 1..n {
            let v = a.get(r, col).abs();
            if v > best {
                best = v;
                piv = r;
            }
        }
        if best < 1e-14 {
            return Err(Error::Geometry("singular linear system".into()));
        }
        if piv != col {
            for j in 0..n {
                let tmp = a.get(col, j);
                a.set(col, j, a.get(piv, j));
                a.set(piv, j, tmp);
            }
            b.swap(col, piv);
        }
        let d = a.get(col, col);
        for r in col + 1..n {
            let f = a.get(r, col) / d;
            if f == 0.0 {
                continue;
            }
            for j in col..n {
                let v = a.get(r, j) - f * a.get(col, j);
                a.set(r, j, v);
            }
            b[r] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut s = b[i];
        for j in i + 1..n {
            s -= a.get(i, j) * x[j];
        }
        x[i] = s / a.get(i, i);
    }
    Ok(x)
}
