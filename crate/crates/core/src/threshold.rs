//! Sharp threshold constants for `h_c(z) + c' z^M` on PSD matrices of a
//! fixed dimension, with sampling and grid searches around them.

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{param, Result};
use crate::hadamard::{entrywise_poly, hadamard_power, SparsePoly};
use crate::matrix::CMatrix;
use crate::partitions::generalized_binomial;
use crate::psd::{psd_floor, require_psd, HermitianEigen};
use crate::sampling::{rng_for, sample_psd_in_disc, SampleKind};
use crate::schur::hook_schur_values;

/// Relative window around `-1/C` inside which a `c'` is reported as
/// [`Admissibility::Boundary`].
pub const BOUNDARY_TOL: f64 = 1e-12;

/// `(c_0, ..., c_{N-1})` and an optional coefficient `c'` at degree `M`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoefficientTuple {
    c: Vec<f64>,
    cprime: Option<f64>,
}

impl CoefficientTuple {
    /// Any finite real coefficients; threshold formulas additionally need
    /// [`Self::require_positive`].
    pub fn new(c: Vec<f64>, cprime: Option<f64>) -> Result<Self> {
        if c.is_empty() {
            return param("coefficient tuple is empty");
        }
        if c.iter().chain(cprime.iter()).any(|x| !x.is_finite()) {
            return param("coefficients must be finite");
        }
        Ok(Self { c, cprime })
    }

    pub fn positive(c: Vec<f64>) -> Result<Self> {
        let t = Self::new(c, None)?;
        t.require_positive()?;
        Ok(t)
    }

    pub fn require_positive(&self) -> Result<()> {
        match self.c.iter().position(|&x| x <= 0.0) {
            Some(j) => param(format!("c_{j} = {} must be positive", self.c[j])),
            None => Ok(()),
        }
    }

    pub fn with_cprime(mut self, cprime: f64) -> Self {
        self.cprime = Some(cprime);
        self
    }

    /// `N`.
    pub fn len(&self) -> usize {
        self.c.len()
    }

    pub fn is_empty(&self) -> bool {
        self.c.is_empty()
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.c
    }

    pub fn cprime(&self) -> Option<f64> {
        self.cprime
    }

    /// `c_m = (c_{N-m}, ..., c_{N-1})`.
    pub fn tail(&self, m: usize) -> Result<Self> {
        if m == 0 || m > self.len() {
            return param(format!("tail length {m} out of range 1..={}", self.len()));
        }
        Ok(Self { c: self.c[self.len() - m..].to_vec(), cprime: None })
    }

    /// `(c_1, 2 c_2, ..., (N-1) c_{N-1})`, the coefficients of `h_c'`.
    pub fn derivative_tuple(&self) -> Result<Self> {
        if self.len() < 2 {
            return param("derivative tuple needs N >= 2");
        }
        Ok(Self {
            c: self.c.iter().enumerate().skip(1).map(|(j, &x)| j as f64 * x).collect(),
            cprime: None,
        })
    }

    /// `(c_j rho^j)_j`.
    pub fn rescaled(&self, rho: f64) -> Self {
        Self {
            c: self.c.iter().enumerate().map(|(j, &x)| x * rho.powi(j as i32)).collect(),
            cprime: self.cprime,
        }
    }

    /// `h_c(z) = sum_{j<N} c_j z^j`.
    pub fn polynomial(&self) -> SparsePoly<Complex64> {
        let dense: Vec<Complex64> = self.c.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        SparsePoly::from_dense(&dense)
    }

    /// `h_c(z) + c' z^M`; a missing `c'` counts as zero.
    pub fn preserver(&self, m: u32) -> SparsePoly<Complex64> {
        self.polynomial().with_term(m, Complex64::new(self.cprime.unwrap_or(0.0), 0.0))
    }

    pub fn h(&self, x: f64) -> f64 {
        self.c.iter().rev().fold(0.0, |acc, &cj| acc * x + cj)
    }
}

/// `C(c; z^M; N, rho) = sum_{j<N} binom(M,j)^2 binom(M-j-1, N-j-1)^2 rho^(M-j) / c_j`
/// with `N = c.len()`. The generalized binomial makes this `1/c_M` when
/// `M < N`.
pub fn threshold_constant(c: &CoefficientTuple, m: u32, rho: f64) -> Result<f64> {
    c.require_positive()?;
    if !(rho > 0.0 && rho.is_finite()) {
        return param(format!("rho must be positive, got {rho}"));
    }
    let n = c.len();
    let mut total = 0.0;
    for (j, &cj) in c.coeffs().iter().enumerate() {
        let a = generalized_binomial(m as i64, j as u64);
        let b = generalized_binomial(m as i64 - j as i64 - 1, (n - j - 1) as u64);
        if a == 0 || b == 0 {
            continue;
        }
        let w = (a as f64) * (b as f64);
        total += w * w * rho.powi(m as i32 - j as i32) / cj;
    }
    Ok(total)
}

/// `(C_1, ..., C_N)` with `C_m = C(c_m; z^(M-N+m); m, rho)`.
pub fn partial_constants(c: &CoefficientTuple, m: u32, rho: f64) -> Result<Vec<f64>> {
    let n = c.len();
    if (m as usize) < n {
        return param(format!("partial constants need M >= N, got M = {m}, N = {n}"));
    }
    (1..=n)
        .map(|k| threshold_constant(&c.tail(k)?, m - (n - k) as u32, rho))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Admissibility {
    Admissible,
    /// `c'` within [`BOUNDARY_TOL`] of `-1/C`.
    Boundary,
    Inadmissible,
}

impl Admissibility {
    pub fn as_str(self) -> &'static str {
        match self {
            Admissibility::Admissible => "admissible",
            Admissibility::Boundary => "boundary",
            Admissibility::Inadmissible => "inadmissible",
        }
    }
}

/// Classifies `c'` against `-1/C(c; z^M; N, rho)`.
pub fn admissibility(c: &CoefficientTuple, m: u32, rho: f64) -> Result<Admissibility> {
    let Some(cp) = c.cprime() else {
        return param("admissibility needs a coefficient c'");
    };
    let bound = -1.0 / threshold_constant(c, m, rho)?;
    if (cp - bound).abs() <= BOUNDARY_TOL * bound.abs().max(1.0) {
        Ok(Admissibility::Boundary)
    } else if cp >= 0.0 || cp > bound {
        Ok(Admissibility::Admissible)
    } else {
        Ok(Admissibility::Inadmissible)
    }
}

/// `c' >= -1/C`, counting the boundary band as admissible.
pub fn admissible(c: &CoefficientTuple, m: u32, rho: f64) -> Result<bool> {
    Ok(admissibility(c, m, rho)? != Admissibility::Inadmissible)
}

/// A PSD matrix whose image under an entrywise map is not PSD.
#[derive(Clone, Debug)]
pub struct Witness {
    pub matrix: CMatrix,
    pub min_eigenvalue: f64,
    /// Sample index within the search.
    pub index: u64,
    pub kind: Option<SampleKind>,
}

#[derive(Clone, Debug)]
pub struct ThresholdReport {
    pub constant: f64,
    pub partials: Vec<f64>,
    pub admissibility: Option<Admissibility>,
    pub witness: Option<Witness>,
}

/// Constant, partial constants (when `M >= N`) and the verdict on `c'`.
pub fn threshold_report(c: &CoefficientTuple, m: u32, rho: f64) -> Result<ThresholdReport> {
    let constant = threshold_constant(c, m, rho)?;
    let partials = if m as usize >= c.len() { partial_constants(c, m, rho)? } else { Vec::new() };
    let admissibility = match c.cprime() {
        Some(_) => Some(admissibility(c, m, rho)?),
        None => None,
    };
    Ok(ThresholdReport { constant, partials, admissibility, witness: None })
}

/// Outcome of a randomized search for a positivity violation.
#[derive(Clone, Debug)]
pub struct SearchVerdict {
    pub trials: u64,
    pub witness: Option<Witness>,
}

fn violation(image: &CMatrix, tol: f64) -> Option<f64> {
    let eig = HermitianEigen::of_hermitian(&image.to_dmatrix());
    (eig.min() < -psd_floor(&eig, tol)).then(|| eig.min())
}

/// Applies `f` entrywise to `samples` draws from the PSD mixture on the closed
/// disc of radius `rho` and reports the lowest-index draw with `f[A]` not PSD
/// within `tol`.
pub fn preserves_positivity_check(
    f: &SparsePoly<Complex64>,
    n: usize,
    rho: f64,
    samples: u64,
    seed: u64,
    tol: f64,
) -> Result<SearchVerdict> {
    if samples == 0 || n == 0 {
        return param("need at least one sample and N >= 1");
    }
    let witness = (0..samples).into_par_iter().find_map_first(|i| {
        let (a, kind) = sample_psd_in_disc(seed, i, n, rho);
        violation(&entrywise_poly(f, &a), tol).map(|min_eigenvalue| Witness {
            matrix: a,
            min_eigenvalue,
            index: i,
            kind: Some(kind),
        })
    });
    Ok(SearchVerdict { trials: samples, witness })
}

/// Grid estimate of `sup_u sum_j s_mu(M,N,j)(u)^2 / c_j` over `u` with
/// distinct coordinates from the levels `sqrt(rho) (1 - k/grid^2)`,
/// `k = 0..grid`. The sum has non-negative coefficients, so the supremum
/// over distinct levels sits at the `N` largest ones.
pub fn empirical_sharpness(c: &CoefficientTuple, m: u32, rho: f64, grid: usize) -> Result<f64> {
    c.require_positive()?;
    let n = c.len();
    if grid < 2 || grid < n {
        return param(format!("grid must be at least max(2, N), got {grid}"));
    }
    if (m as usize) < n {
        return param("empirical sharpness needs M >= N");
    }
    let g2 = (grid * grid) as f64;
    let u: Vec<f64> = (0..n).map(|k| rho.sqrt() * (1.0 - k as f64 / g2)).collect();
    rank_one_objective(c, m, &u)
}

/// `sum_j s_mu(M,N,j)(u)^2 / c_j` for real `u`.
pub fn rank_one_objective(c: &CoefficientTuple, m: u32, u: &[f64]) -> Result<f64> {
    let uc: Vec<Complex64> = u.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    let s = hook_schur_values(m, &uc)?;
    Ok(s.iter().zip(c.coeffs()).map(|(v, cj)| v.norm_sqr() / cj).sum())
}

#[derive(Clone, Debug)]
pub struct HornWitness {
    pub u: Vec<f64>,
    pub matrix: CMatrix,
    pub min_eigenvalue: f64,
    /// `true` when found on the geometric grid `u_k = x q^k`.
    pub geometric: bool,
}

/// Searches rank-one `u u^T`, `u` in `(0, sqrt(rho))^N`, for `f[u u^T]` not
/// PSD: first geometric vectors `u_k = x q^k` on an `(x, q)` grid, then
/// uniform random vectors, using at most `budget` trials in total.
pub fn horn_necessity_witness(
    f: &SparsePoly<Complex64>,
    n: usize,
    rho: f64,
    budget: u64,
    seed: u64,
    tol: f64,
) -> Result<Option<HornWitness>> {
    if n == 0 || !(rho > 0.0) {
        return param("need N >= 1 and rho > 0");
    }
    let r = rho.sqrt();
    let side = ((budget / 2) as f64).sqrt().floor().max(1.0) as u64;
    let grid: Vec<(f64, f64)> = (1..=side)
        .flat_map(|a| {
            (1..=side).map(move |b| {
                let t = |k: u64| {
                    // log-spaced in (0, 1)
                    let s = k as f64 / (side + 1) as f64;
                    10f64.powf(-6.0 * (1.0 - s))
                };
                (r * t(a), 1.0 - t(b) * (1.0 - 1e-9))
            })
        })
        .collect();
    let test = |u: Vec<f64>, geometric: bool| {
        let uc: Vec<Complex64> = u.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        let a = CMatrix::gram_rank_one(&uc);
        violation(&entrywise_poly(f, &a), tol).map(|min_eigenvalue| HornWitness {
            u,
            matrix: a,
            min_eigenvalue,
            geometric,
        })
    };
    let geometric = grid.par_iter().take(budget as usize).find_map_first(|&(x, q)| {
        test((0..n).map(|k| x * q.powi(k as i32)).collect(), true)
    });
    if geometric.is_some() {
        return Ok(geometric);
    }
    let remaining = budget.saturating_sub(grid.len() as u64);
    Ok((0..remaining).into_par_iter().find_map_first(|i| {
        let mut rng = rng_for(seed, i);
        test((0..n).map(|_| r * rng.random_range(f64::EPSILON..1.0)).collect(), false)
    }))
}

#[derive(Clone, Debug, Serialize)]
pub struct CrossDimCheck {
    /// `C(c; z^M; N, rho)`.
    pub lhs: f64,
    /// `M C(c'; z^(M-1); N-1, rho)` with `c' = (c_1, 2c_2, ...)`.
    pub rhs: f64,
    pub ratio: f64,
    pub holds: bool,
}

pub fn cross_dim_inequality_check(c: &CoefficientTuple, m: u32, rho: f64) -> Result<CrossDimCheck> {
    if c.len() < 2 || (m as usize) < c.len() {
        return param("cross-dimension check needs N >= 2 and M >= N");
    }
    let lhs = threshold_constant(c, m, rho)?;
    let rhs = m as f64 * threshold_constant(&c.derivative_tuple()?, m - 1, rho)?;
    Ok(CrossDimCheck { lhs, rhs, ratio: lhs / rhs, holds: lhs >= rhs })
}

#[derive(Clone, Debug, Serialize)]
pub struct CrossDimDraw {
    pub c: Vec<f64>,
    pub m: u32,
    pub rho: f64,
    pub check: CrossDimCheck,
}

#[derive(Clone, Debug, Serialize)]
pub struct CrossDimSweep {
    pub draws: usize,
    pub all_hold: bool,
    pub min_ratio: f64,
    /// The draw attaining `min_ratio`.
    pub argmin: Option<CrossDimDraw>,
}

/// Random draw of `(c, M, rho)` with `2 <= N <= max_n`, `N <= M <= max_m`,
/// log-uniform `c_j` and `rho` in `[0.1, 10]`.
pub fn random_threshold_inputs<R: Rng + ?Sized>(rng: &mut R, min_n: usize, max_n: usize, max_m: u32) -> (CoefficientTuple, u32, f64) {
    let n = rng.random_range(min_n..=max_n);
    let m = rng.random_range(n as u32..=max_m.max(n as u32));
    let c = (0..n).map(|_| 10f64.powf(rng.random_range(-1.0..1.0))).collect();
    let rho = 10f64.powf(rng.random_range(-1.0..1.0));
    (CoefficientTuple { c, cprime: None }, m, rho)
}

/// Evaluates the cross-dimension inequality on `draws` random inputs and
/// records the smallest ratio `lhs / rhs` seen.
pub fn cross_dim_sweep(draws: usize, max_n: usize, max_m: u32, seed: u64) -> Result<CrossDimSweep> {
    if max_n < 2 || (max_m as usize) < max_n {
        return param("cross-dimension sweep needs N >= 2 and M >= N");
    }
    let results: Vec<CrossDimDraw> = (0..draws as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng_for(seed, i);
            let (c, m, rho) = random_threshold_inputs(&mut rng, 2, max_n, max_m);
            let check = cross_dim_inequality_check(&c, m, rho)?;
            Ok(CrossDimDraw { c: c.c, m, rho, check })
        })
        .collect::<Result<_>>()?;
    let all_hold = results.iter().all(|d| d.check.holds);
    let argmin = results.into_iter().min_by(|a, b| a.check.ratio.total_cmp(&b.check.ratio));
    Ok(CrossDimSweep {
        draws,
        all_hold,
        min_ratio: argmin.as_ref().map_or(f64::NAN, |d| d.check.ratio),
        argmin,
    })
}

fn require_in_disc(a: &CMatrix, rho: f64, tol: f64) -> Result<()> {
    if a.max_abs() > rho * (1.0 + tol) {
        return param(format!("matrix has an entry of modulus {} > rho = {rho}", a.max_abs()));
    }
    Ok(())
}

/// `C h_c[A] - A∘M` is PSD within `tol`, with `C = C(c; z^M; N, rho)`.
pub fn lmi_check(c: &CoefficientTuple, m: u32, rho: f64, a: &CMatrix, tol: f64) -> Result<bool> {
    Ok(lmi_min_eigenvalue(c, m, rho, a, tol)? >= 0.0)
}

/// Smallest eigenvalue of `C h_c[A] - A∘M` shifted by the PSD floor, so a
/// non-negative value means the LMI holds within `tol`.
pub fn lmi_min_eigenvalue(c: &CoefficientTuple, m: u32, rho: f64, a: &CMatrix, tol: f64) -> Result<f64> {
    if c.len() != a.dim() {
        return param("coefficient count must equal the matrix size");
    }
    require_psd(a, tol)?;
    require_in_disc(a, rho, tol)?;
    let k = threshold_constant(c, m, rho)?;
    let lhs = entrywise_poly(&c.polynomial(), a).map(|z| z * k).sub(&hadamard_power(a, m));
    let eig = HermitianEigen::of_hermitian(&lhs.to_dmatrix());
    Ok(eig.min() + psd_floor(&eig, tol))
}

/// `f[A]` is positive definite, `min eig > tol * max(1, |lambda|_max)`, for
/// `f = h_c - z^M / C(c; z^M; N, rho)`.
pub fn pd_refinement_check(c: &CoefficientTuple, m: u32, rho: f64, a: &CMatrix, tol: f64) -> Result<bool> {
    let n = a.dim();
    if n < 2 || c.len() != n {
        return param("PD refinement needs N > 1 and N coefficients");
    }
    require_psd(a, tol)?;
    require_in_disc(a, rho, tol)?;
    let sep = tol * a.max_abs().max(1.0);
    let distinct_row = (0..n).any(|i| {
        let row = a.row(i);
        (0..n).all(|p| (p + 1..n).all(|q| (row[p] - row[q]).norm() > sep))
    });
    if !distinct_row {
        return param("no row of A has pairwise distinct entries");
    }
    let k = threshold_constant(c, m, rho)?;
    let f = c.polynomial().with_term(m, Complex64::new(-1.0 / k, 0.0));
    let eig = HermitianEigen::of_hermitian(&entrywise_poly(&f, a).to_dmatrix());
    Ok(eig.min() > psd_floor(&eig, tol))
}

/// `A∘alpha` for a matrix with positive real entries.
pub fn real_hadamard_power(a: &CMatrix, alpha: f64) -> Result<CMatrix> {
    if a.entries().any(|z| z.im != 0.0 || z.re <= 0.0) {
        return param("real powers need positive real entries");
    }
    Ok(a.map(|z| Complex64::new(z.re.powf(alpha), 0.0)))
}

/// Searches `P_{N+1}((0, rho))` for `A` with `A∘alpha` not PSD. Even trials
/// use `a 1 + t u u^T` with distinct `u`, odd trials rescaled real Gram
/// matrices.
pub fn power_nonpreservation_search(
    n: usize,
    alpha: f64,
    rho: f64,
    budget: u64,
    seed: u64,
    tol: f64,
) -> Result<SearchVerdict> {
    if n == 0 || !(alpha > 0.0) || !(rho > 0.0) {
        return param("need N >= 1, alpha > 0 and rho > 0");
    }
    let size = n + 1;
    let witness = (0..budget).into_par_iter().find_map_first(|i| {
        let mut rng = rng_for(seed, i);
        let a = if i % 2 == 0 {
            let u: Vec<f64> = (0..size).map(|_| rng.random_range(0.0..1.0)).collect();
            let base = rng.random_range(0.05..0.9);
            let t = rng.random_range(0.0..(1.0 - base));
            CMatrix::from_fn(size, |p, q| Complex64::new(rho * (base + t * u[p] * u[q]), 0.0))
        } else {
            let k = rng.random_range(1..=size);
            let b: Vec<Vec<f64>> = (0..size).map(|_| (0..k).map(|_| rng.random_range(0.0..1.0)).collect()).collect();
            let g = CMatrix::from_fn(size, |p, q| {
                Complex64::new(b[p].iter().zip(&b[q]).map(|(x, y)| x * y).sum(), 0.0)
            });
            let s = rho * rng.random_range(0.5..1.0) / g.max_abs();
            g.map(|z| z * s)
        };
        if a.entries().any(|z| !(z.re > 0.0 && z.re < rho)) {
            return None;
        }
        let image = real_hadamard_power(&a, alpha).ok()?;
        violation(&image, tol).map(|min_eigenvalue| Witness { matrix: a, min_eigenvalue, index: i, kind: None })
    });
    Ok(SearchVerdict { trials: budget, witness })
}
