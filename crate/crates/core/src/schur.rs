//! Point evaluation of Schur polynomials.
//!
//! `s_lambda(x)` is computed from the Jacobi-Trudi determinant
//! `det(h_{lambda_i - i + j})`, which is a polynomial in the complete
//! homogeneous values `h_k(x)` and therefore well defined at repeated
//! coordinates. The bialternant ratio is only ever used to test it.

use crate::error::{param, Error, Result};
use crate::matrix::Matrix;
use crate::partitions::{hook_partition, Partition};
use crate::scalar::Scalar;

/// Largest number of tableaux [`schur_eval_ssyt_oracle`] will visit.
pub const SSYT_BUDGET: u64 = 10_000_000;

/// `prod_{i<j} (x_i - x_j)`.
pub fn vandermonde_det<S: Scalar>(x: &[S]) -> S {
    let mut acc = S::one();
    for i in 0..x.len() {
        for j in i + 1..x.len() {
            acc = acc * (x[i].clone() - x[j].clone());
        }
    }
    acc
}

/// `[h_0(x), ..., h_kmax(x)]`, adding one variable at a time:
/// `h_k(x_1..x_m) = h_k(x_1..x_{m-1}) + x_m h_{k-1}(x_1..x_m)`.
pub fn complete_homogeneous<S: Scalar>(x: &[S], kmax: usize) -> Vec<S> {
    let mut h = vec![S::zero(); kmax + 1];
    h[0] = S::one();
    for xm in x {
        for k in 1..=kmax {
            h[k] = h[k].clone() + xm.clone() * h[k - 1].clone();
        }
    }
    h
}

/// `s_lambda(x_1, ..., x_N)` with `N = lambda.len() = x.len()`.
pub fn schur_eval<S: Scalar>(lambda: &Partition, x: &[S]) -> Result<S> {
    check_len(lambda, x)?;
    let parts = lambda.parts();
    let ell = lambda.length();
    if ell == 0 {
        return Ok(S::one());
    }
    let kmax = parts[0] as usize + ell - 1;
    let h = complete_homogeneous(x, kmax);
    let jt = Matrix::from_fn(ell, |i, j| {
        let k = parts[i] as i64 - i as i64 + j as i64;
        if k < 0 {
            S::zero()
        } else {
            h[k as usize].clone()
        }
    });
    Ok(jt.det())
}

/// The hook values `[s_{mu(M,N,0)}(x), ..., s_{mu(M,N,N-1)}(x)]`.
pub fn hook_schur_values<S: Scalar>(m: u32, x: &[S]) -> Result<Vec<S>> {
    let n = x.len();
    (0..n).map(|j| schur_eval(&hook_partition(m, n, j)?, x)).collect()
}

/// Sum of `x^weight(T)` over semistandard tableaux `T` of shape `lambda`
/// with entries in `1..=N`. Slow; intended as a test oracle.
pub fn schur_eval_ssyt_oracle<S: Scalar>(lambda: &Partition, x: &[S]) -> Result<S> {
    check_len(lambda, x)?;
    let shape: Vec<usize> = lambda.parts().iter().map(|&p| p as usize).collect();
    let cells: Vec<(usize, usize)> = shape
        .iter()
        .enumerate()
        .flat_map(|(r, &len)| (0..len).map(move |c| (r, c)))
        .collect();
    let mut walk = TableauWalk {
        cells: &cells,
        x,
        filling: shape.iter().map(|&len| vec![0usize; len]).collect(),
        visited: 0,
    };
    walk.sum(0, S::one())
}

struct TableauWalk<'a, S> {
    cells: &'a [(usize, usize)],
    x: &'a [S],
    filling: Vec<Vec<usize>>,
    visited: u64,
}

impl<S: Scalar> TableauWalk<'_, S> {
    fn sum(&mut self, k: usize, monomial: S) -> Result<S> {
        if k == self.cells.len() {
            self.visited += 1;
            if self.visited > SSYT_BUDGET {
                return Err(Error::Resource(format!("more than {SSYT_BUDGET} tableaux")));
            }
            return Ok(monomial);
        }
        let (r, c) = self.cells[k];
        let left = if c > 0 { self.filling[r][c - 1] } else { 0 };
        let above = if r > 0 { self.filling[r - 1][c] + 1 } else { 0 };
        let mut total = S::zero();
        for v in left.max(above)..self.x.len() {
            self.filling[r][c] = v;
            total = total + self.sum(k + 1, monomial.clone() * self.x[v].clone())?;
        }
        Ok(total)
    }
}

/// `s_lambda(1, z, ..., z^{N-1})` from the product formula
/// `prod_{i<j} (z^{n_j+j} - z^{n_i+i}) / (z^j - z^i)` (parts indexed
/// increasingly, `n_1 <= ... <= n_N`). At `z = 1` the integer form
/// `prod_{i<j} (n_j - n_i + j - i) / (j - i)` is used.
pub fn principal_specialization<S: Scalar>(lambda: &Partition, z: &S, n: usize) -> Result<S> {
    if lambda.len() != n {
        return param(format!("partition {lambda} has length {}, expected {n}", lambda.len()));
    }
    // n_i for i = 1..=N, increasing.
    let inc: Vec<i64> = lambda.parts().iter().rev().map(|&p| p as i64).collect();
    let mut acc = S::one();
    if (z.clone() - S::one()).is_zero() {
        for i in 1..=n as i64 {
            for j in i + 1..=n as i64 {
                let num = inc[(j - 1) as usize] - inc[(i - 1) as usize] + j - i;
                acc = acc * S::from_i64(num) / S::from_i64(j - i);
            }
        }
        return Ok(acc);
    }
    for i in 1..=n {
        for j in i + 1..=n {
            let den = z.pow(j as u32) - z.pow(i as u32);
            if den.is_zero() {
                return Err(Error::Domain(format!(
                    "z^{j} = z^{i}: principal specialization formula undefined at this z"
                )));
            }
            let ej = (inc[j - 1] + j as i64) as u32;
            let ei = (inc[i - 1] + i as i64) as u32;
            acc = acc * (z.pow(ej) - z.pow(ei)) / den;
        }
    }
    Ok(acc)
}

fn check_len<S>(lambda: &Partition, x: &[S]) -> Result<()> {
    if lambda.len() != x.len() {
        return param(format!(
            "partition {lambda} has {} parts but {} variables were given",
            lambda.len(),
            x.len()
        ));
    }
    Ok(())
}
