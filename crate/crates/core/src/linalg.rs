//! Small dense kernels over [`Real`] and [`BigComplex`].

use crate::error::{Error, Result};
use crate::scalars::{BigComplex, Real};

/// Square complex matrix.
#[derive(Debug, Clone)]
pub(crate) struct CMatrix {
    n: usize,
    data: Vec<BigComplex>,
}

impl CMatrix {
    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> BigComplex) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        CMatrix { n, data }
    }

    pub fn from_rows(rows: Vec<Vec<BigComplex>>) -> Self {
        let n = rows.len();
        CMatrix {
            n,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn identity(n: usize, prec: usize) -> Self {
        Self::from_fn(n, |i, j| {
            if i == j {
                BigComplex::one(prec)
            } else {
                BigComplex::zero(prec)
            }
        })
    }

    pub fn diagonal(d: &[BigComplex]) -> Self {
        let p = d.first().map_or(64, BigComplex::precision);
        Self::from_fn(d.len(), |i, j| {
            if i == j {
                d[i].clone()
            } else {
                BigComplex::zero(p)
            }
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &BigComplex {
        &self.data[i * self.n + j]
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.n;
        let p = self.get(0, 0).precision();
        Self::from_fn(n, |i, j| {
            let mut acc = BigComplex::zero(p);
            for k in 0..n {
                acc = &acc + &(self.get(i, k) * other.get(k, j));
            }
            acc
        })
    }

    pub fn conj_transpose(&self) -> Self {
        Self::from_fn(self.n, |i, j| self.get(j, i).conj())
    }

    pub fn scale(&self, k: &BigComplex) -> Self {
        Self::from_fn(self.n, |i, j| self.get(i, j) * k)
    }

    /// Largest entrywise distance to `other`.
    pub fn max_dist(&self, other: &Self) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.dist(b))
            .fold(0.0, f64::max)
    }
}

/// Rectangular real matrix.
#[derive(Debug, Clone)]
pub(crate) struct RMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Real>,
}

impl RMatrix {
    pub fn zeros(rows: usize, cols: usize, prec: usize) -> Self {
        RMatrix {
            rows,
            cols,
            data: vec![Real::zero(prec); rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<Real>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        RMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Real {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Real) {
        self.data[i * self.cols + j] = v;
    }

    /// `selfᵀ · self`.
    pub fn gram(&self) -> RMatrix {
        let p = self.data.first().map_or(64, Real::precision);
        let mut g = RMatrix::zeros(self.cols, self.cols, p);
        for a in 0..self.cols {
            for b in a..self.cols {
                let mut acc = Real::zero(p);
                for i in 0..self.rows {
                    acc = acc + self.get(i, a) * self.get(i, b);
                }
                g.set(b, a, acc.clone());
                g.set(a, b, acc);
            }
        }
        g
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }
}

/// Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.
///
/// Returns eigenvalues and a matrix whose columns are the eigenvectors.
pub(crate) fn jacobi_eigen(a: &RMatrix) -> (Vec<Real>, RMatrix) {
    let n = a.rows();
    let p = a.data.first().map_or(64, Real::precision);
    let mut a = a.clone();
    let mut v = RMatrix::zeros(n, n, p);
    for i in 0..n {
        v.set(i, i, Real::one(p));
    }
    let mut frob = Real::zero(p);
    for x in &a.data {
        frob = frob + x.square();
    }
    // Stop once the off-diagonal mass is below the working precision.
    let tiny = &frob * &Real::from_f64(2f64.powi(-(p as i32 - 8)), p).square();
    let one = Real::one(p);
    let two = Real::from_i64(2, p);
    for _sweep in 0..100 {
        let mut off = Real::zero(p);
        for i in 0..n {
            for j in (i + 1)..n {
                off = off + a.get(i, j).square();
            }
        }
        if off <= tiny || off.is_zero() {
            break;
        }
        for pi in 0..n {
            for qi in (pi + 1)..n {
                let apq = a.get(pi, qi).clone();
                if apq.is_zero() || apq.square() * Real::from_i64(n as i64 * n as i64, p) <= tiny {
                    continue;
                }
                let theta = (a.get(qi, qi) - a.get(pi, pi)) / (&two * &apq);
                let root = (theta.square() + &one).sqrt();
                let t = if theta.is_negative() {
                    -(&one / (theta.abs() + root))
                } else {
                    &one / (theta.abs() + root)
                };
                let c = &one / (t.square() + &one).sqrt();
                let s = &t * &c;
                for k in 0..n {
                    let akp = a.get(k, pi).clone();
                    let akq = a.get(k, qi).clone();
                    a.set(k, pi, &c * &akp - &s * &akq);
                    a.set(k, qi, &s * &akp + &c * &akq);
                }
                for k in 0..n {
                    let apk = a.get(pi, k).clone();
                    let aqk = a.get(qi, k).clone();
                    a.set(pi, k, &c * &apk - &s * &aqk);
                    a.set(qi, k, &s * &apk + &c * &aqk);
                }
                for k in 0..n {
                    let vkp = v.get(k, pi).clone();
                    let vkq = v.get(k, qi).clone();
                    v.set(k, pi, &c * &vkp - &s * &vkq);
                    v.set(k, qi, &s * &vkp + &c * &vkq);
                }
            }
        }
    }
    let eig = (0..n).map(|i| a.get(i, i).clone()).collect();
    (eig, v)
}

/// Solves `a · x = b` by Gaussian elimination with partial pivoting.
pub(crate) fn solve(a: &RMatrix, b: &RMatrix, eps: &Real) -> Result<RMatrix> {
    let n = a.rows();
    if a.cols() != n || b.rows() != n {
        return Err(Error::Dimension("solve needs a square system".into()));
    }
    let mut a = a.clone();
    let mut b = b.clone();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| {
                a.get(i, col)
                    .abs()
                    .partial_cmp(&a.get(j, col).abs())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
            .unwrap_or(col);
        if a.get(piv, col).abs() <= *eps {
            return Err(Error::Inconsistent(format!(
                "singular system at column {col}"
            )));
        }
        a.swap_rows(col, piv);
        b.swap_rows(col, piv);
        let d = a.get(col, col).clone();
        for r in 0..n {
            if r == col {
                continue;
            }
            let f = a.get(r, col) / &d;
            if f.is_zero() {
                continue;
            }
            for k in col..n {
                let v = a.get(r, k) - &(&f * a.get(col, k));
                a.set(r, k, v);
            }
            for k in 0..b.cols() {
                let v = b.get(r, k) - &(&f * b.get(col, k));
                b.set(r, k, v);
            }
        }
    }
    for r in 0..n {
        let d = a.get(r, r).clone();
        for k in 0..b.cols() {
            let v = b.get(r, k) / &d;
            b.set(r, k, v);
        }
    }
    Ok(b)
}

/// `f64` Gaussian elimination for small well-conditioned systems.
pub(crate) fn solve_f64(a: &[Vec<f64>], b: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
    let n = a.len();
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-12 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in 0..n {
            if r != col {
                let f = a[r][col] / a[col][col];
                for k in 0..n {
                    a[r][k] -= f * a[col][k];
                }
                for k in 0..b[r].len() {
                    b[r][k] -= f * b[col][k];
                }
            }
        }
    }
    for r in 0..n {
        let d = a[r][r];
        for x in &mut b[r] {
            *x /= d;
        }
    }
    Some(b)
}
