//! Hadamard powers, entrywise polynomial maps, and the determinantal
//! identities for linear pencils of Hadamard powers of rank-one matrices.

use std::collections::BTreeMap;

use itertools::Itertools;

use crate::error::{param, Error, Result};
use crate::matrix::Matrix;
use crate::partitions::{staircase_complement, StrictTuple};
use crate::scalar::{Scalar, FLOAT_REL_TOL};
use crate::schur::{hook_schur_values, schur_eval, vandermonde_det};

/// Entrywise `n`-th power; `A∘0` is the all-ones matrix.
pub fn hadamard_power<S: Scalar>(a: &Matrix<S>, n: u32) -> Matrix<S> {
    a.map(|x| x.pow(n))
}

/// Polynomial stored as exponent -> coefficient.
#[derive(Clone, Debug, PartialEq)]
pub struct SparsePoly<S> {
    terms: BTreeMap<u32, S>,
}

impl<S: Scalar> SparsePoly<S> {
    pub fn new() -> Self {
        Self { terms: BTreeMap::new() }
    }

    /// `c_0 + c_1 z + ... + c_{k-1} z^{k-1}`.
    pub fn from_dense(coeffs: &[S]) -> Self {
        let mut p = Self::new();
        for (k, c) in coeffs.iter().enumerate() {
            p = p.with_term(k as u32, c.clone());
        }
        p
    }

    /// Adds `c z^exp` (accumulating if the exponent is already present).
    pub fn with_term(mut self, exp: u32, c: S) -> Self {
        let entry = self.terms.entry(exp).or_insert_with(S::zero);
        *entry = entry.clone() + c;
        self
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, &S)> {
        self.terms.iter().map(|(&e, c)| (e, c))
    }

    pub fn coefficient(&self, exp: u32) -> S {
        self.terms.get(&exp).cloned().unwrap_or_else(S::zero)
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.iter().rev().find(|(_, c)| !c.is_zero()).map(|(&e, _)| e)
    }

    pub fn eval(&self, z: &S) -> S {
        self.terms
            .iter()
            .fold(S::zero(), |acc, (&e, c)| acc + c.clone() * z.pow(e))
    }
}

impl<S: Scalar> Default for SparsePoly<S> {
    fn default() -> Self {
        Self::new()
    }
}

/// `f[A] = (f(a_ij))`.
pub fn entrywise_poly<S: Scalar>(f: &SparsePoly<S>, a: &Matrix<S>) -> Matrix<S> {
    a.map(|x| f.eval(x))
}

/// `h_c[A] = c_0 1 + c_1 A + ... + c_{N-1} A∘(N-1)`.
pub fn lower_hadamard_combination<S: Scalar>(coeffs: &[S], a: &Matrix<S>) -> Matrix<S> {
    entrywise_poly(&SparsePoly::from_dense(coeffs), a)
}

/// The pencil `p_t(z) = t (c_0 + ... + c_{N-1} z^{N-1}) - z^M`.
#[derive(Clone, Debug, PartialEq)]
pub struct PencilSpec<S> {
    pub t: S,
    pub coeffs: Vec<S>,
    pub m: u32,
}

impl<S: Scalar> PencilSpec<S> {
    pub fn new(t: S, coeffs: Vec<S>, m: u32) -> Result<Self> {
        if coeffs.is_empty() {
            return param("pencil needs at least one coefficient");
        }
        Ok(Self { t, coeffs, m })
    }

    pub fn n(&self) -> usize {
        self.coeffs.len()
    }

    pub fn polynomial(&self) -> SparsePoly<S> {
        let scaled: Vec<S> = self.coeffs.iter().map(|c| self.t.clone() * c.clone()).collect();
        SparsePoly::from_dense(&scaled).with_term(self.m, -S::one())
    }

    fn check_vectors(&self, u: &[S], v: &[S]) -> Result<()> {
        if u.len() != self.n() || v.len() != self.n() {
            return param(format!(
                "vectors must have length N = {}, got {} and {}",
                self.n(),
                u.len(),
                v.len()
            ));
        }
        Ok(())
    }
}

/// `p_t[u v^T]`.
pub fn pencil_matrix<S: Scalar>(spec: &PencilSpec<S>, u: &[S], v: &[S]) -> Result<Matrix<S>> {
    spec.check_vectors(u, v)?;
    Ok(entrywise_poly(&spec.polynomial(), &Matrix::outer(u, v)?))
}

/// `det p_t[u v^T]` by elimination.
pub fn pencil_det_direct<S: Scalar>(spec: &PencilSpec<S>, u: &[S], v: &[S]) -> Result<S> {
    Ok(pencil_matrix(spec, u, v)?.det())
}

/// `det p_t[u v^T]` from the Schur-polynomial closed form
/// `t^{N-1} Δ(u) Δ(v) prod_j c_j (t - sum_j s_mu_j(u) s_mu_j(v) / c_j)`
/// with hooks `mu_j = mu(M, N, j)`.
pub fn pencil_det_closed_form<S: Scalar>(spec: &PencilSpec<S>, u: &[S], v: &[S]) -> Result<S> {
    spec.check_vectors(u, v)?;
    let n = spec.n();
    if (spec.m as usize) < n {
        return param(format!("closed form needs M >= N, got M = {}, N = {n}", spec.m));
    }
    if spec.coeffs.iter().any(Scalar::is_zero) {
        return param("closed form needs every c_j non-zero");
    }
    let su = hook_schur_values(spec.m, u)?;
    let sv = hook_schur_values(spec.m, v)?;
    let correction = su
        .into_iter()
        .zip(sv)
        .zip(&spec.coeffs)
        .fold(S::zero(), |acc, ((a, b), c)| acc + a * b / c.clone());
    let prod_c = spec.coeffs.iter().fold(S::one(), |acc, c| acc * c.clone());
    Ok(spec.t.pow(n as u32 - 1)
        * vandermonde_det(u)
        * vandermonde_det(v)
        * prod_c
        * (spec.t.clone() - correction))
}

/// Coefficients `c_{n_j}` attached to a strict exponent tuple.
#[derive(Clone, Debug, PartialEq)]
pub struct ExponentCoeffs<S> {
    exps: StrictTuple,
    coeffs: Vec<S>,
}

impl<S: Scalar> ExponentCoeffs<S> {
    pub fn new(exps: StrictTuple, coeffs: Vec<S>) -> Result<Self> {
        if exps.len() != coeffs.len() {
            return param("one coefficient per exponent is required");
        }
        Ok(Self { exps, coeffs })
    }

    pub fn exponents(&self) -> &StrictTuple {
        &self.exps
    }

    pub fn pairs(&self) -> impl Iterator<Item = (u32, &S)> {
        self.exps.entries().iter().copied().zip(&self.coeffs)
    }
}

/// `det sum_j c_{n_j} (u v^T)∘n_j` by elimination.
pub fn cauchy_binet_lhs<S: Scalar>(cs: &ExponentCoeffs<S>, u: &[S], v: &[S]) -> Result<S> {
    let a = Matrix::outer(u, v)?;
    let sum = cs.pairs().fold(Matrix::zeros(u.len()), |acc, (e, c)| {
        acc.add(&hadamard_power(&a, e).scale(c))
    });
    Ok(sum.det())
}

/// `Δ(u) Δ(v) sum_{n' ⊂ n, |n'| = N} s_λ(n')(u) s_λ(n')(v) prod_k c_{n'_k}`.
pub fn cauchy_binet_rhs<S: Scalar>(cs: &ExponentCoeffs<S>, u: &[S], v: &[S]) -> Result<S> {
    let n = u.len();
    if v.len() != n {
        return param("u and v must have equal length");
    }
    let pairs: Vec<(u32, S)> = cs.pairs().map(|(e, c)| (e, c.clone())).collect();
    let mut total = S::zero();
    // Combinations preserve the decreasing order of `pairs`.
    for subset in pairs.iter().combinations(n) {
        let sub = StrictTuple::new(subset.iter().map(|(e, _)| *e).collect())?;
        let lambda = staircase_complement(&sub)?;
        let prod = subset.iter().fold(S::one(), |acc, (_, c)| acc * c.clone());
        total = total + schur_eval(&lambda, u)? * schur_eval(&lambda, v)? * prod;
    }
    Ok(vandermonde_det(u) * vandermonde_det(v) * total)
}

/// Diagonal matrices `D_{M,j}(A) = (-1)^{N-j-1} diag(s_mu(M,N,j)(a_1), ..., s_mu(M,N,j)(a_N))`
/// over the rows `a_i` of `A`, so that `A∘M = sum_j D_{M,j}(A) A∘j`.
///
/// For `M < N` the decomposition is the single term `A∘M = I · A∘M`.
pub fn hadamard_decomposition<S: Scalar>(a: &Matrix<S>, m: u32) -> Result<Vec<Matrix<S>>> {
    let n = a.dim();
    if n == 0 {
        return param("empty matrix");
    }
    if (m as usize) < n {
        return Ok((0..n)
            .map(|j| if j == m as usize { Matrix::identity(n) } else { Matrix::zeros(n) })
            .collect());
    }
    let per_row: Vec<Vec<S>> = (0..n)
        .map(|i| hook_schur_values(m, a.row(i)))
        .collect::<Result<_>>()?;
    Ok((0..n)
        .map(|j| {
            let sign_negative = (n - j - 1) % 2 == 1;
            let d: Vec<S> = per_row
                .iter()
                .map(|s| if sign_negative { -s[j].clone() } else { s[j].clone() })
                .collect();
            Matrix::diagonal(&d)
        })
        .collect())
}

/// `A∘M - sum_j D_j A∘j`.
pub fn decomposition_residual<S: Scalar>(a: &Matrix<S>, m: u32, ds: &[Matrix<S>]) -> Matrix<S> {
    let recombined = ds.iter().enumerate().fold(Matrix::zeros(a.dim()), |acc, (j, d)| {
        acc.add(&d.matmul(&hadamard_power(a, j as u32)))
    });
    hadamard_power(a, m).sub(&recombined)
}

/// `V(u) = (u_i^{j-1})`.
pub fn vandermonde_matrix<S: Scalar>(u: &[S]) -> Matrix<S> {
    Matrix::from_fn(u.len(), |i, j| u[i].pow(j as u32))
}

/// Solution of `V(u) s = u∘M` via `s_i = (-1)^{N-i} s_mu(M,N,i-1)(u)`.
pub fn vandermonde_solve_moments<S: Scalar>(u: &[S], m: u32) -> Result<Vec<S>> {
    let n = u.len();
    for i in 0..n {
        for j in i + 1..n {
            if u[i].approx_eq(&u[j], FLOAT_REL_TOL) {
                return Err(Error::Domain(format!("u has repeated entries at {i} and {j}")));
            }
        }
    }
    let s = hook_schur_values(m, u)?;
    Ok(s.into_iter()
        .enumerate()
        .map(|(k, v)| if (n - k - 1) % 2 == 1 { -v } else { v })
        .collect())
}
