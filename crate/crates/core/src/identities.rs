//! Randomized batches checking the determinantal identities on either
//! backend, with reproducible per-trial inputs.

use rand::seq::index::sample;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{param, Error, Result};
use crate::hadamard::{
    cauchy_binet_lhs, cauchy_binet_rhs, decomposition_residual, hadamard_decomposition, hadamard_power,
    pencil_det_closed_form, pencil_det_direct, pencil_matrix, vandermonde_matrix, vandermonde_solve_moments, ExponentCoeffs, PencilSpec,
};
use crate::matrix::Matrix;
use crate::partitions::StrictTuple;
use crate::sampling::rng_for;
use crate::scalar::{random_gaussian, random_nonzero_rational, GaussianRational, Scalar};

/// Largest exponent used for random Cauchy-Binet exponent tuples.
pub const CAUCHY_BINET_MAX_EXPONENT: u32 = 9;
const MAX_COUNTEREXAMPLES: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum IdentityKind {
    /// `det p_t[u v^T]` against its Schur-polynomial closed form.
    Pencil,
    /// `det sum c_n (u v^T)∘n` against the sum over `N`-subsets.
    CauchyBinet,
    /// `A∘M = sum_j D_{M,j}(A) A∘j`.
    Decomposition,
    /// `V(u) s = u∘M` for the hook-Schur moments `s`.
    Moments,
}

impl IdentityKind {
    pub const ALL: [IdentityKind; 4] =
        [IdentityKind::Pencil, IdentityKind::CauchyBinet, IdentityKind::Decomposition, IdentityKind::Moments];

    pub fn as_str(self) -> &'static str {
        match self {
            IdentityKind::Pencil => "pencil",
            IdentityKind::CauchyBinet => "cauchy-binet",
            IdentityKind::Decomposition => "decomposition",
            IdentityKind::Moments => "moments",
        }
    }

    /// `(N, second size)` pairs covered for size bounds `max_n`, `max_m`.
    /// The second size is `M` for all kinds except Cauchy-Binet, where it is
    /// the number of exponents.
    pub fn cases(self, max_n: usize, max_m: u32) -> Vec<(usize, u32)> {
        let mut out = Vec::new();
        for n in 1..=max_n {
            let lo = match self {
                IdentityKind::Pencil | IdentityKind::Moments => n as u32,
                IdentityKind::CauchyBinet => 1,
                IdentityKind::Decomposition => 0,
            };
            out.extend((lo..=max_m).map(|m| (n, m)));
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Backend {
    Exact,
    Float,
}

#[derive(Clone, Debug, Serialize)]
pub struct Counterexample {
    pub n: usize,
    pub m: u32,
    pub trial: usize,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct CaseSummary {
    pub n: usize,
    pub m: u32,
    pub trials: usize,
    pub failures: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityReport {
    pub kind: IdentityKind,
    pub backend: Backend,
    pub cases: Vec<CaseSummary>,
    pub total_trials: usize,
    pub failures: usize,
    /// The first few failing inputs in case order.
    pub counterexamples: Vec<Counterexample>,
}

fn stream(n: usize, m: u32, trial: usize) -> u64 {
    ((n as u64) << 48) | ((m as u64) << 32) | trial as u64
}

fn vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<GaussianRational> {
    (0..n).map(|_| random_gaussian(rng)).collect()
}

fn convert<S: Scalar>(xs: &[GaussianRational]) -> Vec<S> {
    xs.iter().map(S::from_gaussian).collect()
}

fn fmt_vec(xs: &[GaussianRational]) -> String {
    let parts: Vec<String> = xs.iter().map(crate::scalar::format_gaussian).collect();
    format!("[{}]", parts.join(", "))
}

/// `(max_i ‖row_i‖)^N`, a bound on `|det a|` that stays positive when a row
/// vanishes; float determinants are compared relative to it.
fn det_scale<S: Scalar>(a: &Matrix<S>) -> f64 {
    let top = (0..a.dim())
        .map(|i| a.row(i).iter().map(|z| z.magnitude().powi(2)).sum::<f64>().sqrt())
        .fold(0.0, f64::max);
    top.powi(a.dim() as i32)
}

fn dets_agree<S: Scalar>(x: &S, y: &S, a: &Matrix<S>, tol: f64) -> bool {
    if S::EXACT {
        return x == y;
    }
    let scale = det_scale(a).max(x.magnitude()).max(y.magnitude()).max(1.0);
    (x.clone() - y.clone()).magnitude() <= tol * scale
}

fn matrix_ok<S: Scalar>(residual: &Matrix<S>, reference: &Matrix<S>, tol: f64) -> bool {
    if S::EXACT {
        return residual.entries().all(Scalar::is_zero);
    }
    let scale = reference.entries().map(Scalar::magnitude).fold(1.0, f64::max);
    residual.entries().all(|z| z.magnitude() <= tol * scale)
}

/// One trial; `Ok(None)` on agreement, `Ok(Some(detail))` on a mismatch.
pub fn check_trial<S: Scalar>(kind: IdentityKind, n: usize, m: u32, seed: u64, trial: usize, tol: f64) -> Result<Option<String>> {
    let mut rng = rng_for(seed, stream(n, m, trial));
    match kind {
        IdentityKind::Pencil => {
            let u = vector(&mut rng, n);
            let v = vector(&mut rng, n);
            let t = random_nonzero_rational(&mut rng);
            let c: Vec<GaussianRational> = (0..n).map(|_| random_nonzero_rational(&mut rng)).collect();
            let spec = PencilSpec::new(S::from_gaussian(&t), convert(&c), m)?;
            let (us, vs) = (convert::<S>(&u), convert::<S>(&v));
            let direct = pencil_det_direct(&spec, &us, &vs)?;
            let closed = pencil_det_closed_form(&spec, &us, &vs)?;
            let p = pencil_matrix(&spec, &us, &vs)?;
            Ok((!dets_agree(&direct, &closed, &p, tol)).then(|| {
                format!("u={} v={} t={} c={}", fmt_vec(&u), fmt_vec(&v), crate::scalar::format_gaussian(&t), fmt_vec(&c))
            }))
        }
        IdentityKind::CauchyBinet => {
            let count = m as usize;
            let mut exps: Vec<u32> = sample(&mut rng, CAUCHY_BINET_MAX_EXPONENT as usize + 1, count)
                .into_iter()
                .map(|e| e as u32)
                .collect();
            exps.sort_unstable_by(|a, b| b.cmp(a));
            let c: Vec<GaussianRational> = (0..count).map(|_| random_nonzero_rational(&mut rng)).collect();
            let u = vector(&mut rng, n);
            let v = vector(&mut rng, n);
            let cs = ExponentCoeffs::new(StrictTuple::new(exps.clone())?, convert::<S>(&c))?;
            let (us, vs) = (convert::<S>(&u), convert::<S>(&v));
            let lhs = cauchy_binet_lhs(&cs, &us, &vs)?;
            let rhs = cauchy_binet_rhs(&cs, &us, &vs)?;
            let outer = Matrix::outer(&us, &vs)?;
            let sum = cs.pairs().fold(Matrix::zeros(n), |acc, (e, c)| acc.add(&hadamard_power(&outer, e).scale(c)));
            Ok((!dets_agree(&lhs, &rhs, &sum, tol))
                .then(|| format!("exponents={exps:?} c={} u={} v={}", fmt_vec(&c), fmt_vec(&u), fmt_vec(&v))))
        }
        IdentityKind::Decomposition => {
            let rows: Vec<Vec<GaussianRational>> = (0..n).map(|_| vector(&mut rng, n)).collect();
            let a = Matrix::from_rows(rows.iter().map(|r| convert::<S>(r)).collect())?;
            let ds = hadamard_decomposition(&a, m)?;
            let residual = decomposition_residual(&a, m, &ds);
            let reference = hadamard_power(&a, m);
            Ok((!matrix_ok(&residual, &reference, tol)).then(|| {
                let r: Vec<String> = rows.iter().map(|r| fmt_vec(r)).collect();
                format!("A=[{}]", r.join(", "))
            }))
        }
        IdentityKind::Moments => {
            let u = loop {
                let u = vector(&mut rng, n);
                if (0..n).all(|i| (i + 1..n).all(|j| u[i] != u[j])) {
                    break u;
                }
            };
            let us = convert::<S>(&u);
            let s = vandermonde_solve_moments(&us, m)?;
            let v = vandermonde_matrix(&us);
            let target: Vec<S> = us.iter().map(|x| x.pow(m)).collect();
            let vs = v.mul_vec(&s);
            let residual = Matrix::diagonal(&vs.iter().zip(&target).map(|(a, b)| a.clone() - b.clone()).collect::<Vec<_>>());
            let reference = Matrix::diagonal(&target);
            let solved = v.solve(&target).ok_or_else(|| Error::Domain("singular Vandermonde matrix".into()))?;
            let agree = solved.iter().zip(&s).all(|(a, b)| a.approx_eq(b, tol));
            Ok((!(agree && matrix_ok(&residual, &reference, tol))).then(|| format!("u={}", fmt_vec(&u))))
        }
    }
}

/// Runs `trials` random trials for every `(N, M)` case of `kind` up to the
/// bounds. Results are in case order whatever the scheduling.
pub fn run_identity_batch(
    kind: IdentityKind,
    backend: Backend,
    max_n: usize,
    max_m: u32,
    trials: usize,
    seed: u64,
    tol: f64,
) -> Result<IdentityReport> {
    if max_n == 0 || trials == 0 {
        return param("need N >= 1 and at least one trial");
    }
    if kind == IdentityKind::CauchyBinet && max_m > CAUCHY_BINET_MAX_EXPONENT + 1 {
        return param(format!("at most {} exponents are supported", CAUCHY_BINET_MAX_EXPONENT + 1));
    }
    run_cases(kind, backend, &kind.cases(max_n, max_m), trials, seed, tol)
}

/// As [`run_identity_batch`] over an explicit case list.
pub fn run_cases(
    kind: IdentityKind,
    backend: Backend,
    cases: &[(usize, u32)],
    trials: usize,
    seed: u64,
    tol: f64,
) -> Result<IdentityReport> {
    let jobs: Vec<(usize, u32, usize)> =
        cases.iter().flat_map(|&(n, m)| (0..trials).map(move |t| (n, m, t))).collect();
    let outcomes: Vec<Option<String>> = jobs
        .par_iter()
        .map(|&(n, m, t)| match backend {
            Backend::Exact => check_trial::<GaussianRational>(kind, n, m, seed, t, tol),
            Backend::Float => check_trial::<num_complex::Complex64>(kind, n, m, seed, t, tol),
        })
        .collect::<Result<_>>()?;
    let mut summaries = Vec::with_capacity(cases.len());
    let mut counterexamples = Vec::new();
    for (k, &(n, m)) in cases.iter().enumerate() {
        let slice = &outcomes[k * trials..(k + 1) * trials];
        let failures = slice.iter().filter(|o| o.is_some()).count();
        for (t, o) in slice.iter().enumerate() {
            if let (Some(detail), true) = (o, counterexamples.len() < MAX_COUNTEREXAMPLES) {
                counterexamples.push(Counterexample { n, m, trial: t, detail: detail.clone() });
            }
        }
        summaries.push(CaseSummary { n, m, trials, failures });
    }
    let failures = summaries.iter().map(|s| s.failures).sum();
    Ok(IdentityReport {
        kind,
        backend,
        cases: summaries,
        total_trials: jobs.len(),
        failures,
        counterexamples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cases_cover_requested_ranges() {
        assert_eq!(IdentityKind::Pencil.cases(2, 3), vec![(1, 1), (1, 2), (1, 3), (2, 2), (2, 3)]);
        assert_eq!(IdentityKind::Decomposition.cases(1, 1), vec![(1, 0), (1, 1)]);
    }

    #[test]
    fn small_exact_batches_pass() {
        for kind in IdentityKind::ALL {
            let r = run_identity_batch(kind, Backend::Exact, 3, 5, 4, 1, 0.0).unwrap();
            assert_eq!(r.failures, 0, "{kind:?}: {:?}", r.counterexamples);
            assert!(r.total_trials > 0);
        }
    }

    #[test]
    fn small_float_batches_pass() {
        for kind in IdentityKind::ALL {
            let r = run_identity_batch(kind, Backend::Float, 3, 4, 4, 2, 1e-9).unwrap();
            assert_eq!(r.failures, 0, "{kind:?}: {:?}", r.counterexamples);
        }
    }

    #[test]
    fn batches_are_reproducible() {
        let a = run_identity_batch(IdentityKind::Pencil, Backend::Float, 2, 3, 3, 9, 1e-9).unwrap();
        let b = run_identity_batch(IdentityKind::Pencil, Backend::Float, 2, 3, 3, 9, 1e-9).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }
}
