//! Reproducible random matrices on the PSD cone.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::matrix::CMatrix;

/// Independent stream `stream` of the generator seeded by `seed`.
pub fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Families mixed by [`sample_psd_in_disc`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SampleKind {
    /// `B B^*` with complex Gaussian `B`, rescaled so `max |a_ij| = rho`.
    ComplexWishart,
    /// `u u^T` with `u` uniform in `(0, sqrt(rho))^N`.
    RankOneReal,
    /// `u u^T` with `u_k = sqrt(rho) (1 - t eps_k)`, `t` log-uniform in `[1e-4, 0.5]`.
    NearExtremalRankOne,
    /// `rho` times a complex correlation matrix.
    Correlation,
}

impl SampleKind {
    pub const ALL: [SampleKind; 4] = [
        SampleKind::ComplexWishart,
        SampleKind::RankOneReal,
        SampleKind::NearExtremalRankOne,
        SampleKind::Correlation,
    ];

    pub fn is_rank_one(self) -> bool {
        matches!(self, SampleKind::RankOneReal | SampleKind::NearExtremalRankOne)
    }
}

pub fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

fn gram<R: Rng + ?Sized>(rng: &mut R, n: usize, k: usize) -> CMatrix {
    let b: Vec<Vec<Complex64>> = (0..n).map(|_| (0..k).map(|_| complex_normal(rng)).collect()).collect();
    CMatrix::from_fn(n, |i, j| {
        (0..k).fold(Complex64::new(0.0, 0.0), |acc, l| acc + b[i][l] * b[j][l].conj())
    })
}

pub fn complex_wishart<R: Rng + ?Sized>(rng: &mut R, n: usize, rho: f64) -> CMatrix {
    let rank = rng.random_range(1..=n);
    let a = gram(rng, n, rank);
    let s = rho / a.max_abs();
    a.map(|z| z * s)
}

pub fn rank_one_real<R: Rng + ?Sized>(rng: &mut R, n: usize, rho: f64) -> CMatrix {
    let r = rho.sqrt();
    let u: Vec<Complex64> = (0..n)
        .map(|_| Complex64::new(r * rng.random_range(f64::EPSILON..1.0), 0.0))
        .collect();
    CMatrix::gram_rank_one(&u)
}

pub fn near_extremal_rank_one<R: Rng + ?Sized>(rng: &mut R, n: usize, rho: f64) -> CMatrix {
    let r = rho.sqrt();
    let t = 10f64.powf(rng.random_range(-4.0..(0.5f64).log10()));
    let u: Vec<Complex64> = (0..n)
        .map(|_| Complex64::new(r * (1.0 - t * rng.random_range(f64::EPSILON..1.0)), 0.0))
        .collect();
    CMatrix::gram_rank_one(&u)
}

pub fn correlation<R: Rng + ?Sized>(rng: &mut R, n: usize, rho: f64) -> CMatrix {
    let rank = rng.random_range(1..=n);
    let a = gram(rng, n, rank);
    let d: Vec<f64> = (0..n).map(|i| a[(i, i)].re.sqrt()).collect();
    CMatrix::from_fn(n, |i, j| {
        if i == j {
            Complex64::new(rho, 0.0)
        } else {
            a[(i, j)] * (rho / (d[i] * d[j]))
        }
    })
}

pub fn sample_kind<R: Rng + ?Sized>(rng: &mut R, kind: SampleKind, n: usize, rho: f64) -> CMatrix {
    match kind {
        SampleKind::ComplexWishart => complex_wishart(rng, n, rho),
        SampleKind::RankOneReal => rank_one_real(rng, n, rho),
        SampleKind::NearExtremalRankOne => near_extremal_rank_one(rng, n, rho),
        SampleKind::Correlation => correlation(rng, n, rho),
    }
}

/// Sample `index` of the mixture over the PSD matrices with entries in the
/// closed disc of radius `rho`; the family cycles with `index`.
pub fn sample_psd_in_disc(seed: u64, index: u64, n: usize, rho: f64) -> (CMatrix, SampleKind) {
    let kind = SampleKind::ALL[(index % 4) as usize];
    let mut rng = rng_for(seed, index);
    (sample_kind(&mut rng, kind, n, rho), kind)
}
