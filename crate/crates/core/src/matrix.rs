//! Dense square matrices over a [`Scalar`] backend.

use std::ops::{Index, IndexMut};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{param, Result};
use crate::scalar::Scalar;

/// Row-major `n x n` matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<S> {
    n: usize,
    data: Vec<S>,
}

/// Complex double matrix, the float backend.
pub type CMatrix = Matrix<Complex64>;

impl<S: Scalar> Matrix<S> {
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Self { n, data }
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return param(format!("matrix rows must all have length {n}"));
        }
        Ok(Self { n, data: rows.into_iter().flatten().collect() })
    }

    pub fn zeros(n: usize) -> Self {
        Self::from_fn(n, |_, _| S::zero())
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |i, j| if i == j { S::one() } else { S::zero() })
    }

    /// The all-ones matrix `1_{n x n}`.
    pub fn ones(n: usize) -> Self {
        Self::from_fn(n, |_, _| S::one())
    }

    pub fn diagonal(d: &[S]) -> Self {
        Self::from_fn(d.len(), |i, j| if i == j { d[i].clone() } else { S::zero() })
    }

    /// `u v^T` (no conjugation).
    pub fn outer(u: &[S], v: &[S]) -> Result<Self> {
        if u.len() != v.len() {
            return param("outer product needs vectors of equal length");
        }
        Ok(Self::from_fn(u.len(), |i, j| u[i].clone() * v[j].clone()))
    }

    /// `u u^*`.
    pub fn gram_rank_one(u: &[S]) -> Self {
        Self::from_fn(u.len(), |i, j| u[i].clone() * u[j].conj())
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn entries(&self) -> impl Iterator<Item = &S> {
        self.data.iter()
    }

    pub fn map(&self, f: impl Fn(&S) -> S) -> Self {
        Self { n: self.n, data: self.data.iter().map(f).collect() }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n, |i, j| self[(j, i)].clone())
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.n, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, s: &S) -> Self {
        self.map(|x| x.clone() * s.clone())
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.n, other.n);
        Self::from_fn(self.n, |i, j| self[(i, j)].clone() + other[(i, j)].clone())
    }

    pub fn sub(&self, other: &Self) -> Self {
        debug_assert_eq!(self.n, other.n);
        Self::from_fn(self.n, |i, j| self[(i, j)].clone() - other[(i, j)].clone())
    }

    pub fn matmul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.n, other.n);
        Self::from_fn(self.n, |i, j| {
            (0..self.n).fold(S::zero(), |acc, k| acc + self[(i, k)].clone() * other[(k, j)].clone())
        })
    }

    pub fn mul_vec(&self, v: &[S]) -> Vec<S> {
        (0..self.n)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(S::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
            })
            .collect()
    }

    /// Entrywise (Schur) product.
    pub fn hadamard(&self, other: &Self) -> Self {
        debug_assert_eq!(self.n, other.n);
        Self::from_fn(self.n, |i, j| self[(i, j)].clone() * other[(i, j)].clone())
    }

    /// Principal submatrix on the given (ordered) index set.
    pub fn principal(&self, idx: &[usize]) -> Self {
        Self::from_fn(idx.len(), |a, b| self[(idx[a], idx[b])].clone())
    }

    /// Rows `rows`, columns `cols` (not necessarily square, returned row-major).
    pub fn block(&self, rows: &[usize], cols: &[usize]) -> Vec<Vec<S>> {
        rows.iter()
            .map(|&i| cols.iter().map(|&j| self[(i, j)].clone()).collect())
            .collect()
    }

    /// Determinant: fraction-free (Bareiss) elimination on exact backends,
    /// partial pivoting on floats.
    pub fn det(&self) -> S {
        if S::EXACT {
            det_bareiss(self)
        } else {
            det_partial_pivot(self)
        }
    }

    /// Solves `self x = b`; `None` when singular.
    pub fn solve(&self, b: &[S]) -> Option<Vec<S>> {
        let n = self.n;
        assert_eq!(b.len(), n);
        let mut a: Vec<Vec<S>> = (0..n)
            .map(|i| {
                let mut r = self.row(i).to_vec();
                r.push(b[i].clone());
                r
            })
            .collect();
        for k in 0..n {
            let piv = pick_pivot(&a, k)?;
            a.swap(k, piv);
            let p = a[k][k].clone();
            for j in k..=n {
                a[k][j] = a[k][j].clone() / p.clone();
            }
            for i in 0..n {
                if i != k && !a[i][k].is_zero() {
                    let f = a[i][k].clone();
                    for j in k..=n {
                        a[i][j] = a[i][j].clone() - f.clone() * a[k][j].clone();
                    }
                }
            }
        }
        Some(a.into_iter().map(|r| r[n].clone()).collect())
    }
}

fn pick_pivot<S: Scalar>(a: &[Vec<S>], k: usize) -> Option<usize> {
    if S::EXACT {
        (k..a.len()).find(|&i| !a[i][k].is_zero())
    } else {
        let (best, mag) = (k..a.len())
            .map(|i| (i, a[i][k].magnitude()))
            .fold((k, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        (mag > 0.0).then_some(best)
    }
}

fn det_bareiss<S: Scalar>(m: &Matrix<S>) -> S {
    let n = m.n;
    if n == 0 {
        return S::one();
    }
    let mut a: Vec<Vec<S>> = (0..n).map(|i| m.row(i).to_vec()).collect();
    let mut negate = false;
    let mut prev = S::one();
    for k in 0..n - 1 {
        match pick_pivot(&a, k) {
            None => return S::zero(),
            Some(p) if p != k => {
                a.swap(p, k);
                negate = !negate;
            }
            Some(_) => {}
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = a[i][j].clone() * a[k][k].clone() - a[i][k].clone() * a[k][j].clone();
                a[i][j] = v / prev.clone();
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

fn det_partial_pivot<S: Scalar>(m: &Matrix<S>) -> S {
    let n = m.n;
    let mut a: Vec<Vec<S>> = (0..n).map(|i| m.row(i).to_vec()).collect();
    let mut det = S::one();
    for k in 0..n {
        let Some(p) = pick_pivot(&a, k) else {
            return S::zero();
        };
        if p != k {
            a.swap(p, k);
            det = -det;
        }
        let piv = a[k][k].clone();
        det = det * piv.clone();
        for i in k + 1..n {
            let f = a[i][k].clone() / piv.clone();
            for j in k + 1..n {
                a[i][j] = a[i][j].clone() - f.clone() * a[k][j].clone();
            }
        }
    }
    det
}

impl<S> Index<(usize, usize)> for Matrix<S> {
    type Output = S;
    fn index(&self, (i, j): (usize, usize)) -> &S {
        &self.data[i * self.n + j]
    }
}

impl<S> IndexMut<(usize, usize)> for Matrix<S> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut S {
        &mut self.data[i * self.n + j]
    }
}

impl CMatrix {
    pub fn to_dmatrix(&self) -> DMatrix<Complex64> {
        DMatrix::from_fn(self.n, self.n, |i, j| self[(i, j)])
    }

    pub fn from_dmatrix(m: &DMatrix<Complex64>) -> Self {
        assert_eq!(m.nrows(), m.ncols(), "square matrix expected");
        Self::from_fn(m.nrows(), |i, j| m[(i, j)])
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect())
                .collect(),
        )
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

impl<S: Scalar> Matrix<S> {
    pub fn to_complex(&self) -> CMatrix {
        Matrix { n: self.n, data: self.data.iter().map(Scalar::to_complex64).collect() }
    }
}
