//! Spectral utilities on Hermitian PSD matrices and the generalized Rayleigh
//! quotient `C(h_c; z^M; A)`: the least `alpha` with `A∘M <= alpha h_c[A]`.

use nalgebra::{Cholesky, DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{param, Error, Result};
use crate::hadamard::{entrywise_poly, hadamard_power};
use crate::matrix::CMatrix;
use crate::schur::hook_schur_values;
use crate::strata::{kernel_for_partition, stratify, GroupTag};
use crate::threshold::{threshold_constant, CoefficientTuple};

/// Eigenvalues at or below `PINV_RANK_CUT * lambda_max` are treated as zero
/// by the pseudo-inverse.
pub const PINV_RANK_CUT: f64 = 1e-12;

/// Eigendecomposition of a Hermitian matrix, eigenvalues ascending.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub eigenvalues: Vec<f64>,
    /// Unitary; column `k` belongs to `eigenvalues[k]`.
    pub eigenvectors: DMatrix<Complex64>,
}

impl HermitianEigen {
    /// Checks that `a` is Hermitian within `tol * max(1, max |a_ij|)`.
    pub fn new(a: &CMatrix, tol: f64) -> Result<Self> {
        let scale = a.max_abs().max(1.0);
        let n = a.dim();
        for i in 0..n {
            for j in i..n {
                let gap = (a[(i, j)] - a[(j, i)].conj()).norm();
                if gap > tol * scale {
                    return param(format!("matrix is not Hermitian: |a_{i}{j} - conj(a_{j}{i})| = {gap:e}"));
                }
            }
        }
        if !a.is_finite() {
            return param("matrix has non-finite entries");
        }
        Ok(Self::of_hermitian(&a.to_dmatrix()))
    }

    /// Decomposes the Hermitian part `(a + a^*)/2` without checking.
    pub fn of_hermitian(a: &DMatrix<Complex64>) -> Self {
        let h = (a + a.adjoint()) * Complex64::new(0.5, 0.0);
        let eig = SymmetricEigen::new(h);
        let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
        order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
        let eigenvalues = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        let eigenvectors = DMatrix::from_fn(a.nrows(), order.len(), |r, c| eig.eigenvectors[(r, order[c])]);
        Self { eigenvalues, eigenvectors }
    }

    pub fn min(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }

    pub fn max(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }

    pub fn spectral_radius(&self) -> f64 {
        self.min().abs().max(self.max().abs())
    }

    /// Number of eigenvalues above `rel_cut * lambda_max`.
    pub fn rank(&self, rel_cut: f64) -> usize {
        let cut = rel_cut * self.spectral_radius();
        self.eigenvalues.iter().filter(|&&l| l > cut).count()
    }

    /// `U f(Λ) U^*`.
    pub fn apply(&self, f: impl Fn(f64) -> f64) -> DMatrix<Complex64> {
        let d = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            self.eigenvalues.len(),
            self.eigenvalues.iter().map(|&l| Complex64::new(f(l), 0.0)),
        ));
        &self.eigenvectors * d * self.eigenvectors.adjoint()
    }

    pub fn reconstruct(&self) -> DMatrix<Complex64> {
        self.apply(|l| l)
    }
}

/// The relative floor `tol * max(1, |lambda|_max)` below which an eigenvalue
/// counts as negative.
pub fn psd_floor(eig: &HermitianEigen, tol: f64) -> f64 {
    tol * eig.spectral_radius().max(1.0)
}

/// `true` iff the smallest eigenvalue is at least `-tol * max(1, ‖A‖)`.
pub fn psd_check(a: &CMatrix, tol: f64) -> Result<bool> {
    let eig = HermitianEigen::new(a, tol)?;
    Ok(eig.min() >= -psd_floor(&eig, tol))
}

/// Eigendecomposition of `a`, failing with [`Error::NotPsd`] when `a` is not
/// PSD within `tol`.
pub fn require_psd(a: &CMatrix, tol: f64) -> Result<HermitianEigen> {
    let eig = HermitianEigen::new(a, tol)?;
    let floor = psd_floor(&eig, tol);
    if eig.min() < -floor {
        return Err(Error::NotPsd { eigenvalue: eig.min(), floor: -floor });
    }
    Ok(eig)
}

fn pinv_power(eig: &HermitianEigen, rel_cut: f64, power: f64) -> DMatrix<Complex64> {
    let cut = rel_cut * eig.max().max(0.0);
    eig.apply(|l| if l > cut && l > 0.0 { l.powf(-power) } else { 0.0 })
}

/// `A^{†/2}`: inverts the square roots of eigenvalues above `tol * lambda_max`
/// and zeroes the rest.
pub fn moore_penrose_sqrt(a: &CMatrix, tol: f64) -> Result<CMatrix> {
    let eig = require_psd(a, tol)?;
    Ok(CMatrix::from_dmatrix(&pinv_power(&eig, tol, 0.5)))
}

/// Moore-Penrose inverse of a PSD matrix.
pub fn pseudo_inverse(a: &CMatrix, tol: f64) -> Result<CMatrix> {
    let eig = require_psd(a, tol)?;
    Ok(CMatrix::from_dmatrix(&pinv_power(&eig, tol, 1.0)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RayleighMethod {
    SpectralRadius,
    RankOneClosedForm,
    Variational,
}

#[derive(Clone, Debug, Serialize)]
pub struct RayleighResult {
    pub value: f64,
    /// A vector in `K(A)^⊥` attaining `value`, when the method produces one.
    pub maximizer: Option<Vec<Complex64>>,
    pub method: RayleighMethod,
}

fn check_rayleigh_inputs(c: &CoefficientTuple, a: &CMatrix) -> Result<()> {
    c.require_positive()?;
    if c.len() != a.dim() {
        return param(format!("{} coefficients given for a {}x{} matrix", c.len(), a.dim(), a.dim()));
    }
    if a.max_abs() == 0.0 {
        return param("the Rayleigh constant is undefined at the zero matrix");
    }
    Ok(())
}

/// `h_c[A]`.
pub fn h_matrix(c: &CoefficientTuple, a: &CMatrix) -> CMatrix {
    entrywise_poly(&c.polynomial(), a)
}

/// `u^* A∘M u / u^* h_c[A] u`.
pub fn rayleigh_quotient(c: &CoefficientTuple, m: u32, a: &CMatrix, u: &[Complex64]) -> f64 {
    let form = |b: &CMatrix| {
        let bu = b.mul_vec(u);
        u.iter().zip(&bu).map(|(x, y)| x.conj() * y).sum::<Complex64>().re
    };
    form(&hadamard_power(a, m)) / form(&h_matrix(c, a))
}

/// Spectral radius of `h_c[A]^{†/2} A∘M h_c[A]^{†/2}`.
pub fn rayleigh_constant(c: &CoefficientTuple, m: u32, a: &CMatrix, tol: f64) -> Result<RayleighResult> {
    check_rayleigh_inputs(c, a)?;
    require_psd(a, tol)?;
    let h = HermitianEigen::of_hermitian(&h_matrix(c, a).to_dmatrix());
    let root = pinv_power(&h, PINV_RANK_CUT, 0.5);
    let b = &root * hadamard_power(a, m).to_dmatrix() * &root;
    let eig = HermitianEigen::of_hermitian(&b);
    let top = eig.eigenvectors.column(eig.eigenvalues.len() - 1);
    let maximizer = (&root * top).iter().copied().collect();
    Ok(RayleighResult {
        value: eig.spectral_radius(),
        maximizer: Some(maximizer),
        method: RayleighMethod::SpectralRadius,
    })
}

/// `sum_j |s_mu(M,N,j)(u)|^2 / c_j`, the Rayleigh constant of `u u^*` for `u`
/// with distinct coordinates.
pub fn rayleigh_rank_one(c: &CoefficientTuple, m: u32, u: &[Complex64]) -> Result<f64> {
    c.require_positive()?;
    if c.len() != u.len() {
        return param(format!("{} coefficients given for a vector of length {}", c.len(), u.len()));
    }
    let scale = u.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let closest = (0..u.len())
        .flat_map(|i| (i + 1..u.len()).map(move |j| (i, j)))
        .map(|(i, j)| (u[i] - u[j]).norm())
        .fold(f64::INFINITY, f64::min);
    if closest <= 1e-6 * scale {
        log::warn!("rank-one Rayleigh closed form evaluated at near-coincident coordinates");
    }
    let s = hook_schur_values(m, u)?;
    Ok(s.iter().zip(c.coeffs()).map(|(v, cj)| v.norm_sqr() / cj).sum())
}

/// Maximizes `u^* A∘M u / u^* h_c[A] u` over `u ⟂ K(A)`, with `K(A)` taken
/// from the block structure of `A` and the restricted problem solved as a
/// Cholesky-reduced Hermitian eigenproblem.
pub fn rayleigh_variational(c: &CoefficientTuple, m: u32, a: &CMatrix, tol: f64) -> Result<RayleighResult> {
    check_rayleigh_inputs(c, a)?;
    let pi = stratify(a, GroupTag::Trivial, tol)?;
    let q = kernel_for_partition(&pi).orthogonal_complement();
    let qd = q.to_dmatrix();
    let hr = qd.adjoint() * h_matrix(c, a).to_dmatrix() * &qd;
    let gr = qd.adjoint() * hadamard_power(a, m).to_dmatrix() * &qd;
    let hr = (&hr + hr.adjoint()) * Complex64::new(0.5, 0.0);
    let chol = Cholesky::new(hr).ok_or_else(|| {
        Error::Domain("h_c[A] is not positive definite on the complement of K(A)".into())
    })?;
    let l = chol.l();
    let l_inv = l
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::Domain("singular Cholesky factor".into()))?;
    let reduced = &l_inv * gr * l_inv.adjoint();
    let eig = HermitianEigen::of_hermitian(&reduced);
    let k = eig.eigenvalues.len();
    let y = eig.eigenvectors.column(k - 1).into_owned();
    let x = l_inv.adjoint() * y;
    let maximizer = (&qd * x).iter().copied().collect();
    Ok(RayleighResult {
        value: eig.max(),
        maximizer: Some(maximizer),
        method: RayleighMethod::Variational,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ProbeRow {
    pub epsilon: f64,
    /// Closed-form value along the path.
    pub psi: f64,
    /// Spectral-radius value, when `h_c[A_eps]` is well enough conditioned
    /// for it to be meaningful.
    pub psi_spectral: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DiscontinuityTable {
    pub rows: Vec<ProbeRow>,
    /// `Psi(rho 1_N)`.
    pub on_point: f64,
    /// Value at the smallest epsilon.
    pub limit_estimate: f64,
    /// `C(c; z^M; N, rho)`, the exact limit along the path.
    pub threshold: f64,
    /// `|limit - on_point| / max(|limit|, |on_point|)`.
    pub relative_gap: f64,
}

/// `Psi(A) = C(h_c; z^M; A)` along `A_eps = u_eps u_eps^*`,
/// `u_eps,k = sqrt(rho) (1 - eps k / N)`, and at `rho 1_N` itself.
pub fn discontinuity_probe(
    c: &CoefficientTuple,
    m: u32,
    rho: f64,
    epsilons: &[f64],
) -> Result<DiscontinuityTable> {
    c.require_positive()?;
    let n = c.len();
    if !(rho > 0.0) {
        return param("rho must be positive");
    }
    if epsilons.is_empty() || epsilons.windows(2).any(|w| w[0] <= w[1]) || epsilons.iter().any(|&e| e <= 0.0) {
        return param("epsilons must be positive and strictly decreasing");
    }
    if (m as usize) < n {
        return param("the probe needs M >= N");
    }
    let r = rho.sqrt();
    let mut rows = Vec::with_capacity(epsilons.len());
    for &eps in epsilons {
        let u: Vec<Complex64> = (1..=n)
            .map(|k| Complex64::new(r * (1.0 - eps * k as f64 / n as f64), 0.0))
            .collect();
        let psi = rayleigh_rank_one(c, m, &u)?;
        let a = CMatrix::gram_rank_one(&u);
        let h = HermitianEigen::of_hermitian(&h_matrix(c, &a).to_dmatrix());
        let psi_spectral = if h.min() > 1e-8 * h.max() {
            Some(rayleigh_constant(c, m, &a, 1e-9)?.value)
        } else {
            None
        };
        rows.push(ProbeRow { epsilon: eps, psi, psi_spectral });
    }
    let on_point = rayleigh_constant(c, m, &CMatrix::from_fn(n, |_, _| Complex64::new(rho, 0.0)), 1e-9)?.value;
    let limit_estimate = rows.last().map(|r| r.psi).unwrap_or(f64::NAN);
    let relative_gap = (limit_estimate - on_point).abs() / limit_estimate.abs().max(on_point.abs());
    Ok(DiscontinuityTable {
        rows,
        on_point,
        limit_estimate,
        threshold: threshold_constant(c, m, rho)?,
        relative_gap,
    })
}

/// Smallest eigenvalue of `C h_c[A] - A∘M`, the Loewner gap of the LMI
/// for a given constant `C`.
pub fn loewner_gap(c: &CoefficientTuple, m: u32, a: &CMatrix, constant: f64) -> HermitianEigen {
    let lhs = h_matrix(c, a).map(|z| z * constant).sub(&hadamard_power(a, m));
    HermitianEigen::of_hermitian(&lhs.to_dmatrix())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::{rng_for, sample_psd_in_disc, SampleKind};
    use rand::Rng;

    fn cm(rows: &[&[f64]]) -> CMatrix {
        CMatrix::from_real_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
    }

    fn dist(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
        (a - b).norm()
    }

    #[test]
    fn psd_check_examples() {
        assert!(psd_check(&CMatrix::identity(3), 1e-9).unwrap());
        assert!(!psd_check(&cm(&[&[1.0, 0.0], &[0.0, -1.0]]), 1e-9).unwrap());
        let ones = CMatrix::ones(4);
        assert!(psd_check(&ones, 1e-9).unwrap());
        let eig = HermitianEigen::new(&ones, 1e-9).unwrap();
        assert!((eig.max() - 4.0).abs() < 1e-12);
        assert!(eig.eigenvalues[..3].iter().all(|l| l.abs() < 1e-12));
        assert!(psd_check(&cm(&[&[1.0, 2.0], &[0.0, 1.0]]), 1e-9).is_err());
    }

    #[test]
    fn eigen_reconstruction() {
        for i in 0..20 {
            let (a, _) = sample_psd_in_disc(1, i, 5, 1.0);
            let eig = HermitianEigen::new(&a, 1e-9).unwrap();
            assert!(dist(&eig.reconstruct(), &a.to_dmatrix()) <= 1e-10 * a.frobenius_norm().max(1.0));
            assert!(eig.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn moore_penrose_sqrt_examples() {
        let id = CMatrix::identity(3);
        assert!(dist(&moore_penrose_sqrt(&id, 1e-12).unwrap().to_dmatrix(), &id.to_dmatrix()) < 1e-12);
        let d = moore_penrose_sqrt(&cm(&[&[4.0, 0.0], &[0.0, 0.0]]), 1e-12).unwrap();
        assert!(dist(&d.to_dmatrix(), &cm(&[&[0.5, 0.0], &[0.0, 0.0]]).to_dmatrix()) < 1e-12);
        assert!(moore_penrose_sqrt(&cm(&[&[1.0, 0.0], &[0.0, -1.0]]), 1e-12).is_err());
    }

    #[test]
    fn moore_penrose_sqrt_projector_and_square() {
        for i in 0..40 {
            let (a, _) = sample_psd_in_disc(2, i, 4, 1.0);
            let ad = a.to_dmatrix();
            let r = moore_penrose_sqrt(&a, 1e-12).unwrap().to_dmatrix();
            let p = &r * &ad * &r;
            // projector: P^2 = P, P A = A
            assert!(dist(&(&p * &p), &p) < 1e-9, "sample {i}");
            assert!(dist(&(&p * &ad), &ad) < 1e-9 * ad.norm().max(1.0), "sample {i}");
            // (A^{†/2})^2 = A^† via the Penrose conditions
            let pinv = &r * &r;
            assert!(dist(&(&ad * &pinv * &ad), &ad) < 1e-8 * ad.norm().max(1.0));
            assert!(dist(&(&pinv * &ad * &pinv), &pinv) < 1e-8 * pinv.norm().max(1.0));
        }
    }

    #[test]
    fn scalar_rayleigh() {
        let c = CoefficientTuple::positive(vec![2.0]).unwrap();
        let a = cm(&[&[3.0]]);
        let v = rayleigh_constant(&c, 4, &a, 1e-9).unwrap().value;
        assert!(close(v, 81.0 / 2.0, 1e-12));
        let u = [Complex64::new(3f64.sqrt(), 0.0)];
        assert!(close(rayleigh_rank_one(&c, 4, &u).unwrap(), 81.0 / 2.0, 1e-12));
        assert!(close(rayleigh_variational(&c, 4, &a, 1e-9).unwrap().value, 40.5, 1e-12));
        assert!(rayleigh_constant(&c, 4, &cm(&[&[0.0]]), 1e-9).is_err());
    }

    #[test]
    fn rank_one_three_way_small() {
        let mut rng = rng_for(5, 0);
        for _ in 0..30 {
            let n = rng.random_range(2..=4);
            let m = rng.random_range(n as u32..=n as u32 + 4);
            let c = CoefficientTuple::positive((0..n).map(|_| rng.random_range(0.5..2.0)).collect()).unwrap();
            let u: Vec<Complex64> = (0..n)
                .map(|k| {
                    let th = std::f64::consts::TAU * k as f64 / n as f64 + rng.random_range(-0.3..0.3);
                    Complex64::from_polar(rng.random_range(0.6..1.0), th)
                })
                .collect();
            let a = CMatrix::gram_rank_one(&u);
            let closed = rayleigh_rank_one(&c, m, &u).unwrap();
            let spec = rayleigh_constant(&c, m, &a, 1e-9).unwrap();
            let var = rayleigh_variational(&c, m, &a, 1e-9).unwrap();
            assert!(close(closed, spec.value, 1e-8), "{closed} vs {}", spec.value);
            assert!(close(closed, var.value, 1e-8), "{closed} vs {}", var.value);
            for r in [&spec, &var] {
                let x = r.maximizer.as_ref().unwrap();
                assert!(close(rayleigh_quotient(&c, m, &a, x), closed, 1e-8));
            }
        }
    }

    #[test]
    fn all_ones_has_finite_constant() {
        let c = CoefficientTuple::positive(vec![1.0, 2.0, 3.0]).unwrap();
        let a = CMatrix::ones(3);
        let var = rayleigh_variational(&c, 5, &a, 1e-9).unwrap();
        let spec = rayleigh_constant(&c, 5, &a, 1e-9).unwrap();
        // u^* 1 u / (6 u^* 1 u)
        assert!(close(var.value, 1.0 / 6.0, 1e-12));
        assert!(close(spec.value, 1.0 / 6.0, 1e-12));
    }

    #[test]
    fn rayleigh_bounded_by_threshold_and_lmi_tight() {
        let c = CoefficientTuple::positive(vec![1.0, 0.5, 2.0]).unwrap();
        let rho = 1.5;
        let bound = threshold_constant(&c, 5, rho).unwrap();
        for i in 0..100 {
            let (a, kind) = sample_psd_in_disc(8, i, 3, rho);
            let r = rayleigh_constant(&c, 5, &a, 1e-9).unwrap();
            assert!(r.value <= bound * (1.0 + 1e-9), "{} > {bound}", r.value);
            // h_c[A] of a near-extremal rank-one sample is singular to working precision
            if kind == SampleKind::NearExtremalRankOne {
                continue;
            }
            let gap = loewner_gap(&c, 5, &a, r.value);
            assert!(gap.min() >= -1e-8 * gap.spectral_radius().max(1.0));
        }
    }

    #[test]
    fn permutation_invariance() {
        let c = CoefficientTuple::positive(vec![1.0, 2.0, 0.5]).unwrap();
        for i in 0..40 {
            let (a, kind) = sample_psd_in_disc(4, i, 3, 1.0);
            if kind == SampleKind::NearExtremalRankOne {
                continue;
            }
            let perm = [2, 0, 1];
            let p = CMatrix::from_fn(3, |r, s| a[(perm[r], perm[s])]);
            let v1 = rayleigh_constant(&c, 4, &a, 1e-9).unwrap().value;
            let v2 = rayleigh_constant(&c, 4, &p, 1e-9).unwrap().value;
            assert!(close(v1, v2, 1e-8));
        }
    }

    #[test]
    fn probe_shows_a_jump() {
        let c = CoefficientTuple::positive(vec![1.0, 1.0]).unwrap();
        let t = discontinuity_probe(&c, 2, 1.0, &[0.5, 0.1, 1e-2, 1e-3, 1e-5]).unwrap();
        assert!(close(t.threshold, 5.0, 1e-12));
        // rho^M / h_c(rho) at the all-ones point
        assert!(close(t.on_point, 0.5, 1e-12));
        assert!(close(t.limit_estimate, 5.0, 1e-4));
        assert!(t.relative_gap > 0.1);
        for row in &t.rows {
            if let Some(s) = row.psi_spectral {
                assert!(close(s, row.psi, 1e-7), "{row:?}");
            }
        }
        assert!(t.rows[0].psi_spectral.is_some());
        assert!(discontinuity_probe(&c, 2, 1.0, &[0.1, 0.2]).is_err());
    }
}
