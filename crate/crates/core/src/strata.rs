//! Block decomposition of PSD matrices into G-orbit blocks, the
//! corresponding strata of the cone and their simultaneous kernels.

use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use crate::error::{param, Error, Result};
use crate::hadamard::lower_hadamard_combination;
use crate::matrix::CMatrix;
use crate::psd::{require_psd, HermitianEigen};
use crate::sampling::{complex_normal, rng_for};

/// Subgroup of `C^x` whose orbits group the entries of a block.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupTag {
    /// `{1}`: entries of a block are equal.
    Trivial,
    /// `S^1`: entries of a block have equal modulus.
    UnitCircle,
    /// `C^x`: entries of a block are all non-zero or all zero.
    NonzeroComplex,
}

impl GroupTag {
    pub const ALL: [GroupTag; 3] = [GroupTag::Trivial, GroupTag::UnitCircle, GroupTag::NonzeroComplex];

    pub fn as_str(self) -> &'static str {
        match self {
            GroupTag::Trivial => "trivial",
            GroupTag::UnitCircle => "unit_circle",
            GroupTag::NonzeroComplex => "nonzero_complex",
        }
    }

    /// Orbit membership with absolute tolerance `eps`.
    pub fn same_orbit(self, x: Complex64, y: Complex64, eps: f64) -> bool {
        match self {
            GroupTag::Trivial => (x - y).norm() <= eps,
            GroupTag::UnitCircle => (x.norm() - y.norm()).abs() <= eps,
            GroupTag::NonzeroComplex => (x.norm() > eps) == (y.norm() > eps),
        }
    }

    fn single_orbit(self, entries: &[Complex64], eps: f64) -> bool {
        match entries.split_first() {
            Some((first, rest)) => rest.iter().all(|&z| self.same_orbit(*first, z, eps)),
            None => true,
        }
    }
}

impl fmt::Display for GroupTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for GroupTag {
    type Err = Error;

    /// Accepts the snake-case names and the short forms `1`, `s1`, `cx`.
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "1" => Ok(GroupTag::Trivial),
            "s1" => Ok(GroupTag::UnitCircle),
            "cx" => Ok(GroupTag::NonzeroComplex),
            _ => GroupTag::ALL
                .into_iter()
                .find(|g| g.as_str() == s)
                .ok_or_else(|| Error::Parameter(format!("unknown group {s:?}"))),
        }
    }
}

/// Set partition of `{0, ..., n-1}` in canonical order: each block sorted,
/// blocks sorted by their smallest element. Displayed 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct IndexPartition {
    n: usize,
    blocks: Vec<Vec<usize>>,
}

impl IndexPartition {
    pub fn new(n: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; n];
        for &i in blocks.iter().flatten() {
            if i >= n || seen[i] {
                return param(format!("blocks {blocks:?} are not a partition of 0..{n}"));
            }
            seen[i] = true;
        }
        if blocks.iter().any(|b| b.is_empty()) || seen.contains(&false) {
            return param(format!("blocks {blocks:?} are not a partition of 0..{n}"));
        }
        Ok(Self::canonical(n, blocks))
    }

    fn canonical(n: usize, mut blocks: Vec<Vec<usize>>) -> Self {
        for b in &mut blocks {
            b.sort_unstable();
        }
        blocks.sort_unstable_by_key(|b| b[0]);
        Self { n, blocks }
    }

    /// Block `labels[i]` contains `i`; labels are arbitrary integers.
    pub fn from_labels(labels: &[usize]) -> Self {
        let mut blocks: Vec<(usize, Vec<usize>)> = Vec::new();
        for (i, &l) in labels.iter().enumerate() {
            match blocks.iter_mut().find(|(m, _)| *m == l) {
                Some((_, b)) => b.push(i),
                None => blocks.push((l, vec![i])),
            }
        }
        Self::canonical(labels.len(), blocks.into_iter().map(|(_, b)| b).collect())
    }

    pub fn singletons(n: usize) -> Self {
        Self { n, blocks: (0..n).map(|i| vec![i]).collect() }
    }

    pub fn whole(n: usize) -> Self {
        Self { n, blocks: if n == 0 { vec![] } else { vec![(0..n).collect()] } }
    }

    /// Size of the ground set.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    /// Number of blocks `|pi|`.
    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// `labels[i]` is the position of the block containing `i`.
    pub fn labels(&self) -> Vec<usize> {
        let mut labels = vec![0; self.n];
        for (k, b) in self.blocks.iter().enumerate() {
            for &i in b {
                labels[i] = k;
            }
        }
        labels
    }

    /// Image under the relabelling `i -> perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        Self::canonical(self.n, self.blocks.iter().map(|b| b.iter().map(|&i| perm[i]).collect()).collect())
    }

    /// Parses `{{1,2},{3}}` (1-based).
    pub fn parse(s: &str, n: usize) -> Result<Self> {
        let body = s.trim();
        let inner = body
            .strip_prefix('{')
            .and_then(|r| r.strip_suffix('}'))
            .ok_or_else(|| Error::Parameter(format!("partition {s:?} must look like {{{{1,2}},{{3}}}}")))?;
        let mut blocks = Vec::new();
        for part in inner.split('}') {
            let part = part.trim().trim_start_matches(',').trim();
            if part.is_empty() {
                continue;
            }
            let part = part
                .strip_prefix('{')
                .ok_or_else(|| Error::Parameter(format!("malformed partition {s:?}")))?;
            let block = part
                .split(',')
                .map(|x| match x.trim().parse::<usize>() {
                    Ok(i) if i >= 1 => Ok(i - 1),
                    _ => param(format!("bad index {x:?} in partition {s:?}")),
                })
                .collect::<Result<Vec<_>>>()?;
            blocks.push(block);
        }
        Self::new(n, blocks)
    }
}

impl fmt::Display for IndexPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, b) in self.blocks.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{{")?;
            for (t, i) in b.iter().enumerate() {
                if t > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", i + 1)?;
            }
            write!(f, "}}")?;
        }
        write!(f, "}}")
    }
}

/// `pi1 ≺ pi2`: every block of `pi1` lies inside a block of `pi2`.
pub fn refinement_leq(pi1: &IndexPartition, pi2: &IndexPartition) -> Result<bool> {
    if pi1.n != pi2.n {
        return param(format!("ground sets differ: {} vs {}", pi1.n, pi2.n));
    }
    let labels = pi2.labels();
    Ok(pi1.blocks.iter().all(|b| b.iter().all(|&i| labels[i] == labels[b[0]])))
}

/// Subspace of `C^n` with orthonormal basis columns.
#[derive(Clone, Debug)]
pub struct SubspaceBasis {
    basis: DMatrix<Complex64>,
}

impl SubspaceBasis {
    pub fn new(basis: DMatrix<Complex64>) -> Self {
        Self { basis }
    }

    pub fn zero(n: usize) -> Self {
        Self { basis: DMatrix::zeros(n, 0) }
    }

    pub fn ambient(&self) -> usize {
        self.basis.nrows()
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn basis(&self) -> &DMatrix<Complex64> {
        &self.basis
    }

    pub fn to_dmatrix(&self) -> DMatrix<Complex64> {
        self.basis.clone()
    }

    /// `max |Q^* Q - I|`.
    pub fn orthonormality_defect(&self) -> f64 {
        let g = self.basis.adjoint() * &self.basis - DMatrix::identity(self.dim(), self.dim());
        g.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn projector(&self) -> DMatrix<Complex64> {
        &self.basis * self.basis.adjoint()
    }

    pub fn orthogonal_complement(&self) -> Self {
        let n = self.ambient();
        let eig = HermitianEigen::of_hermitian(&self.projector());
        let keep: Vec<usize> = (0..n).filter(|&k| eig.eigenvalues[k] < 0.5).collect();
        Self { basis: DMatrix::from_fn(n, keep.len(), |r, c| eig.eigenvectors[(r, keep[c])]) }
    }

    /// Largest principal angle, `asin ‖(I - Q1 Q1^*) Q2‖_2`; `pi/2` when the
    /// dimensions differ.
    pub fn max_principal_angle(&self, other: &Self) -> f64 {
        if self.dim() != other.dim() || self.ambient() != other.ambient() {
            return std::f64::consts::FRAC_PI_2;
        }
        if self.dim() == 0 {
            return 0.0;
        }
        let n = self.ambient();
        let r = (DMatrix::identity(n, n) - self.projector()) * &other.basis;
        let eig = HermitianEigen::of_hermitian(&(r.adjoint() * r));
        eig.max().max(0.0).sqrt().min(1.0).asin()
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self { parent: (0..n).collect() }
    }

    fn find(&mut self, i: usize) -> usize {
        let p = self.parent[i];
        if p == i {
            return i;
        }
        let root = self.find(p);
        self.parent[i] = root;
        root
    }

    fn union(&mut self, i: usize, j: usize) {
        let (a, b) = (self.find(i), self.find(j));
        if a != b {
            self.parent[a.max(b)] = a.min(b);
        }
    }
}

struct PairRelation<'a> {
    a: &'a CMatrix,
    g: GroupTag,
    eps: f64,
    eps2: f64,
}

impl<'a> PairRelation<'a> {
    fn new(a: &'a CMatrix, g: GroupTag, tol: f64) -> Self {
        let scale = a.max_abs();
        Self { a, g, eps: tol * scale, eps2: tol * scale * scale }
    }

    /// The principal 2x2 submatrix on `{i, j}` has rank at most one and its
    /// entries lie in one orbit.
    fn related(&self, i: usize, j: usize) -> bool {
        let a = self.a;
        let minor = a[(i, i)] * a[(j, j)] - a[(i, j)] * a[(j, i)];
        minor.norm() <= self.eps2
            && self.g.single_orbit(&[a[(i, i)], a[(i, j)], a[(j, i)], a[(j, j)]], self.eps)
    }

    fn clique(&self, block: &[usize]) -> bool {
        block.iter().enumerate().all(|(s, &i)| block[s + 1..].iter().all(|&j| self.related(i, j)))
    }
}

/// `pi^G(A)`: the coarsest partition whose diagonal blocks have rank at most
/// one with entries in a single `G`-orbit. The zero matrix maps to the
/// one-block partition.
pub fn stratify(a: &CMatrix, g: GroupTag, tol: f64) -> Result<IndexPartition> {
    require_psd(a, tol)?;
    let n = a.dim();
    if a.max_abs() == 0.0 {
        return Ok(IndexPartition::whole(n));
    }
    let rel = PairRelation::new(a, g, tol);
    let mut uf = UnionFind::new(n);
    for i in 0..n {
        for j in i + 1..n {
            if rel.related(i, j) {
                uf.union(i, j);
            }
        }
    }
    let labels: Vec<usize> = (0..n).map(|i| uf.find(i)).collect();
    let components = IndexPartition::from_labels(&labels);
    let mut blocks = Vec::new();
    for b in components.blocks {
        if rel.clique(&b) {
            blocks.push(b);
            continue;
        }
        log::debug!("splitting non-transitive component {b:?}");
        let mut cliques: Vec<Vec<usize>> = Vec::new();
        for &i in &b {
            match cliques.iter_mut().find(|c| c.iter().all(|&j| rel.related(i, j))) {
                Some(c) => c.push(i),
                None => cliques.push(vec![i]),
            }
        }
        blocks.extend(cliques);
    }
    Ok(IndexPartition::canonical(n, blocks))
}

/// Every block `A_{I x J}` has numerical rank at most one with entries in a
/// single `G`-orbit.
pub fn verify_offdiagonal_structure(a: &CMatrix, pi: &IndexPartition, g: GroupTag, tol: f64) -> bool {
    if pi.n() != a.dim() {
        return false;
    }
    let scale = a.max_abs();
    let (eps, eps2) = (tol * scale, tol * scale * scale);
    for bi in pi.blocks() {
        for bj in pi.blocks() {
            let entries: Vec<Complex64> = bi.iter().flat_map(|&p| bj.iter().map(move |&q| a[(p, q)])).collect();
            if !g.single_orbit(&entries, eps) {
                return false;
            }
            for (s, &p) in bi.iter().enumerate() {
                for &p2 in &bi[s + 1..] {
                    for (t, &q) in bj.iter().enumerate() {
                        for &q2 in &bj[t + 1..] {
                            let minor = a[(p, q)] * a[(p2, q2)] - a[(p, q2)] * a[(p2, q)];
                            if minor.norm() > eps2 {
                                return false;
                            }
                        }
                    }
                }
            }
        }
    }
    true
}

/// `K(A) = ker sum_{j<N} A∘j`; eigenvalues at most `tol * max(1, lambda_max)`
/// count as zero.
pub fn simultaneous_kernel(a: &CMatrix, tol: f64) -> Result<SubspaceBasis> {
    require_psd(a, tol)?;
    let n = a.dim();
    let h = lower_hadamard_combination(&vec![Complex64::new(1.0, 0.0); n], a);
    let eig = HermitianEigen::of_hermitian(&h.to_dmatrix());
    let cut = tol * eig.max().max(1.0);
    let keep: Vec<usize> = (0..n).filter(|&k| eig.eigenvalues[k] <= cut).collect();
    Ok(SubspaceBasis::new(DMatrix::from_fn(n, keep.len(), |r, c| eig.eigenvectors[(r, keep[c])])))
}

/// `K_pi = ker (direct sum of 1_{I x I})`, spanned by Helmert contrasts on
/// each block; dimension `N - |pi|`.
pub fn kernel_for_partition(pi: &IndexPartition) -> SubspaceBasis {
    let n = pi.n();
    let mut cols: Vec<Vec<f64>> = Vec::new();
    for b in pi.blocks() {
        for k in 1..b.len() {
            let norm = ((k * (k + 1)) as f64).sqrt();
            let mut v = vec![0.0; n];
            for &i in &b[..k] {
                v[i] = 1.0 / norm;
            }
            v[b[k]] = -(k as f64) / norm;
            cols.push(v);
        }
    }
    SubspaceBasis::new(DMatrix::from_fn(n, cols.len(), |r, c| Complex64::new(cols[c][r], 0.0)))
}

#[derive(Clone, Debug, Serialize)]
pub struct RankBound {
    pub rank: usize,
    pub blocks: usize,
    pub holds: bool,
}

/// `rank(A) <= |pi^{C^x}(A)|`.
pub fn rank_bound_check(a: &CMatrix, tol: f64) -> Result<RankBound> {
    let eig = require_psd(a, tol)?;
    let rank = eig.rank(tol);
    let blocks = stratify(a, GroupTag::NonzeroComplex, tol)?.len();
    Ok(RankBound { rank, blocks, holds: rank <= blocks })
}

/// Tolerance used to confirm that generated matrices land in their stratum.
pub const GENERATOR_TOL: f64 = 1e-9;
const GENERATOR_ATTEMPTS: u64 = 16;

/// Random well-conditioned PD `k x k` core with eigenvalues in `[1/2, ~3/2]`.
fn pd_core<R: Rng + ?Sized>(rng: &mut R, k: usize) -> DMatrix<Complex64> {
    let b = DMatrix::from_fn(k, k, |_, _| complex_normal(rng));
    let g = &b * b.adjoint();
    let top = HermitianEigen::of_hermitian(&g).max().max(1e-300);
    g * Complex64::new(1.0 / top, 0.0) + DMatrix::identity(k, k) * Complex64::new(0.5, 0.0)
}

/// Per-index scalars `w_p` such that entries of `w` within a block share a
/// `G`-orbit.
fn orbit_weights<R: Rng + ?Sized>(rng: &mut R, n: usize, g: GroupTag) -> Vec<Complex64> {
    (0..n)
        .map(|_| match g {
            GroupTag::Trivial => Complex64::new(1.0, 0.0),
            GroupTag::UnitCircle => Complex64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU)),
            GroupTag::NonzeroComplex => {
                Complex64::from_polar(rng.random_range(0.5..1.5), rng.random_range(0.0..std::f64::consts::TAU))
            }
        })
        .collect()
}

/// `diag(w) P K P^T diag(w)^*` with `P` the block indicator of `pi`.
fn assemble(pi: &IndexPartition, core: &DMatrix<Complex64>, w: &[Complex64]) -> CMatrix {
    let labels = pi.labels();
    CMatrix::from_fn(pi.n(), |p, q| w[p] * core[(labels[p], labels[q])] * w[q].conj())
}

/// A PSD matrix in the stratum of `pi`: blocks `c_ij u_i u_j^*` from a random
/// PD core `C = (c_ij)` and per-block vectors with entries in one `G`-orbit.
pub fn generate_in_stratum(pi: &IndexPartition, g: GroupTag, seed: u64) -> Result<CMatrix> {
    for attempt in 0..GENERATOR_ATTEMPTS {
        let mut rng = rng_for(seed, attempt);
        let core = pd_core(&mut rng, pi.len());
        let w = orbit_weights(&mut rng, pi.n(), g);
        let a = assemble(pi, &core, &w);
        if stratify(&a, g, GENERATOR_TOL)? == *pi {
            return Ok(a);
        }
        log::debug!("generated matrix left stratum {pi} on attempt {attempt}");
    }
    Err(Error::Construction(format!("no matrix generated in stratum {pi} for group {g}")))
}

#[derive(Clone, Debug, Serialize)]
pub struct ClosureRow {
    pub epsilon: f64,
    /// Frobenius distance to the limit point.
    pub distance: f64,
    pub label: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClosureTable {
    pub source: String,
    pub target: String,
    pub rows: Vec<ClosureRow>,
    pub limit_label: String,
    /// Every path label equals the source and the limit label equals the
    /// target.
    pub consistent: bool,
}

/// Path `A_eps = diag(w) P_s (K + eps D) P_s^T diag(w)^*` in the stratum of
/// `source`, converging as `eps = 2^-k -> 0` to a generated matrix of the
/// coarser stratum `target`. Stops at `steps` points or `eps < 1e-6`.
pub fn closure_probe(
    target: &IndexPartition,
    source: &IndexPartition,
    g: GroupTag,
    steps: usize,
    seed: u64,
) -> Result<ClosureTable> {
    if !refinement_leq(source, target)? {
        return param(format!("source {source} must refine target {target}"));
    }
    if steps == 0 {
        return param("closure probe needs at least one step");
    }
    let mut rng = rng_for(seed, 0);
    let core_t = pd_core(&mut rng, target.len());
    let d = pd_core(&mut rng, source.len());
    let w = orbit_weights(&mut rng, source.n(), g);
    let tl = target.labels();
    let up = DMatrix::from_fn(source.len(), source.len(), |i, j| {
        core_t[(tl[source.blocks()[i][0]], tl[source.blocks()[j][0]])]
    });
    let limit = assemble(target, &core_t, &w);
    let limit_label = stratify(&limit, g, GENERATOR_TOL)?.to_string();
    let mut rows = Vec::new();
    for k in 0..steps {
        let eps = 0.5f64.powi(k as i32);
        if eps < 1e-6 {
            break;
        }
        let a = assemble(source, &(&up + &d * Complex64::new(eps, 0.0)), &w);
        rows.push(ClosureRow {
            epsilon: eps,
            distance: a.sub(&limit).frobenius_norm(),
            label: stratify(&a, g, GENERATOR_TOL)?.to_string(),
        });
    }
    let source_label = source.to_string();
    let target_label = target.to_string();
    let consistent = rows.iter().all(|r| r.label == source_label) && limit_label == target_label;
    Ok(ClosureTable { source: source_label, target: target_label, rows, limit_label, consistent })
}

/// All set partitions of `{0, ..., n-1}` in canonical form.
pub fn all_partitions(n: usize) -> Vec<IndexPartition> {
    // restricted growth strings
    let mut out = Vec::new();
    let mut rgs = vec![0usize; n];
    fn go(i: usize, max: usize, rgs: &mut Vec<usize>, out: &mut Vec<IndexPartition>) {
        if i == rgs.len() {
            out.push(IndexPartition::from_labels(rgs));
            return;
        }
        for v in 0..=max + 1 {
            rgs[i] = v;
            go(i + 1, max.max(v), rgs, out);
        }
    }
    if n == 0 {
        return vec![IndexPartition::whole(0)];
    }
    go(1, 0, &mut rgs, &mut out);
    out
}
