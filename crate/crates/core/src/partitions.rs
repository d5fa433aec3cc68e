//! Integer partitions of fixed length, hook partitions and the binomial
//! counts attached to them.

use std::fmt;

use serde::Serialize;

use crate::error::{param, Result};

/// Weakly decreasing tuple of non-negative integers with explicit trailing
/// zeros, so `len()` is the number of variables `N`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return param(format!("partition parts must be weakly decreasing: {parts:?}"));
        }
        Ok(Self { parts })
    }

    /// The zero partition of length `n`.
    pub fn zero(n: usize) -> Self {
        Self { parts: vec![0; n] }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Sum of the parts.
    pub fn weight(&self) -> u64 {
        self.parts.iter().map(|&p| p as u64).sum()
    }

    /// Number of non-zero parts.
    pub fn length(&self) -> usize {
        self.parts.iter().take_while(|&&p| p > 0).count()
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// Strictly decreasing tuple of exponents `n_m > ... > n_1 >= 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct StrictTuple {
    entries: Vec<u32>,
}

impl StrictTuple {
    pub fn new(entries: Vec<u32>) -> Result<Self> {
        if entries.windows(2).any(|w| w[0] <= w[1]) {
            return param(format!("tuple must be strictly decreasing: {entries:?}"));
        }
        Ok(Self { entries })
    }

    /// `(n-1, ..., 1, 0)`.
    pub fn staircase(n: usize) -> Self {
        Self { entries: (0..n as u32).rev().collect() }
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// The hook `(M-N+1, 1^(N-j-1), 0^j)` of length `N`.
pub fn hook_partition(m: u32, n: usize, j: usize) -> Result<Partition> {
    check_hook_args(m, n, j)?;
    let mut parts = vec![0u32; n];
    parts[0] = m - n as u32 + 1;
    for p in parts.iter_mut().take(n - j).skip(1) {
        *p = 1;
    }
    Ok(Partition { parts })
}

fn check_hook_args(m: u32, n: usize, j: usize) -> Result<()> {
    if n == 0 || j >= n {
        return param(format!("hook index needs 0 <= j < N, got j = {j}, N = {n}"));
    }
    if (m as usize) < n {
        return param(format!("hook partition needs M >= N, got M = {m}, N = {n}"));
    }
    Ok(())
}

/// Subtracts the staircase `(N-1, ..., 0)` from a strict tuple of length `N`.
pub fn staircase_complement(nprime: &StrictTuple) -> Result<Partition> {
    let n = nprime.len();
    let mut parts = Vec::with_capacity(n);
    for (k, &e) in nprime.entries().iter().enumerate() {
        let shift = (n - 1 - k) as u32;
        if e < shift {
            return param(format!("{:?} does not dominate the staircase", nprime.entries()));
        }
        parts.push(e - shift);
    }
    Partition::new(parts)
}

/// `binom(M, j) * binom(M-j-1, N-j-1)`: the number of semistandard tableaux
/// of hook shape `mu(M, N, j)` with entries in `1..=N`.
pub fn hook_dimension(m: u32, n: usize, j: usize) -> Result<u128> {
    check_hook_args(m, n, j)?;
    let a = generalized_binomial(m as i64, j as u64);
    let b = generalized_binomial(m as i64 - j as i64 - 1, (n - j - 1) as u64);
    Ok((a * b) as u128)
}

/// `n (n-1) ... (n-k+1) / k!` for any integer `n`; `binom(-1, k) = (-1)^k`.
///
/// Panics on `i128` overflow, which needs arguments far beyond anything the
/// threshold formulas use.
pub fn generalized_binomial(n: i64, k: u64) -> i128 {
    let mut acc: i128 = 1;
    for i in 0..k as i128 {
        // acc * (n - i) is divisible by (i + 1) at every step.
        acc = acc
            .checked_mul(n as i128 - i)
            .expect("binomial overflow")
            / (i + 1);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Counts SSYT of shape `shape` with entries in 1..=n by filling cells
    /// row by row.
    fn ssyt_count(shape: &[u32], n: u32) -> u64 {
        let cells: Vec<(usize, usize)> = shape
            .iter()
            .enumerate()
            .flat_map(|(r, &len)| (0..len as usize).map(move |c| (r, c)))
            .collect();
        let mut filling = vec![vec![0u32; shape.first().copied().unwrap_or(0) as usize]; shape.len()];
        fn go(k: usize, cells: &[(usize, usize)], filling: &mut Vec<Vec<u32>>, n: u32) -> u64 {
            if k == cells.len() {
                return 1;
            }
            let (r, c) = cells[k];
            let lo_row = if c > 0 { filling[r][c - 1] } else { 1 };
            let lo_col = if r > 0 { filling[r - 1][c] + 1 } else { 1 };
            let mut total = 0;
            for v in lo_row.max(lo_col)..=n {
                filling[r][c] = v;
                total += go(k + 1, cells, filling, n);
            }
            total
        }
        go(0, &cells, &mut filling, n)
    }

    #[test]
    fn hook_partition_examples() {
        assert_eq!(hook_partition(3, 2, 0).unwrap().parts(), &[2, 1]);
        assert_eq!(hook_partition(5, 3, 2).unwrap().parts(), &[3, 0, 0]);
        assert_eq!(hook_partition(4, 4, 1).unwrap().parts(), &[1, 1, 1, 0]);
    }

    #[test]
    fn hook_partition_rejects_bad_ranges() {
        assert!(hook_partition(2, 3, 0).is_err());
        assert!(hook_partition(5, 3, 3).is_err());
        assert!(hook_partition(5, 0, 0).is_err());
        assert!(hook_dimension(1, 2, 0).is_err());
    }

    #[test]
    fn staircase_complement_examples() {
        let z = staircase_complement(&StrictTuple::new(vec![2, 1, 0]).unwrap()).unwrap();
        assert_eq!(z, Partition::zero(3));
        let p = staircase_complement(&StrictTuple::new(vec![4, 2, 1]).unwrap()).unwrap();
        assert_eq!(p.parts(), &[2, 1, 1]);
        for n in 0..8 {
            assert_eq!(staircase_complement(&StrictTuple::staircase(n)).unwrap(), Partition::zero(n));
        }
    }

    #[test]
    fn omitting_one_staircase_exponent_gives_the_hook() {
        // (M, N-1, ..., j+1, j-1, ..., 0) -> mu(M, N, j)
        for n in 1..=5usize {
            for m in n as u32..=n as u32 + 4 {
                for j in 0..n {
                    let mut e = vec![m];
                    e.extend((0..n as u32).rev().filter(|&x| x != j as u32));
                    let lam = staircase_complement(&StrictTuple::new(e).unwrap()).unwrap();
                    assert_eq!(lam, hook_partition(m, n, j).unwrap(), "M={m} N={n} j={j}");
                }
            }
        }
    }

    #[test]
    fn hook_dimension_examples() {
        assert_eq!(hook_dimension(3, 2, 0).unwrap(), 2);
        assert_eq!(hook_dimension(5, 3, 2).unwrap(), 10);
        for m in 1..10 {
            assert_eq!(hook_dimension(m, 1, 0).unwrap(), 1);
        }
    }

    #[test]
    fn hook_dimension_matches_ssyt_enumeration() {
        for n in 1..=4usize {
            for m in n as u32..=8 {
                for j in 0..n {
                    let shape = hook_partition(m, n, j).unwrap();
                    assert_eq!(
                        hook_dimension(m, n, j).unwrap() as u64,
                        ssyt_count(shape.parts(), n as u32),
                        "M={m} N={n} j={j}"
                    );
                }
            }
        }
    }

    #[test]
    fn last_hook_is_a_row() {
        for n in 1..=5usize {
            for m in n as u32..12 {
                let mut row = vec![0u32; n];
                row[0] = m - n as u32 + 1;
                assert_eq!(hook_partition(m, n, n - 1).unwrap().parts(), &row[..]);
                assert_eq!(
                    hook_dimension(m, n, n - 1).unwrap() as i128,
                    generalized_binomial(m as i64, n as u64 - 1)
                );
            }
        }
    }

    #[test]
    fn generalized_binomial_examples() {
        assert_eq!(generalized_binomial(-1, 3), -1);
        assert_eq!(generalized_binomial(4, 2), 6);
        assert_eq!(generalized_binomial(2, 5), 0);
        for k in 0..10 {
            assert_eq!(generalized_binomial(-1, k), if k % 2 == 0 { 1 } else { -1 });
        }
    }

    #[test]
    fn partition_validation() {
        assert!(Partition::new(vec![1, 2]).is_err());
        assert!(StrictTuple::new(vec![2, 2]).is_err());
        let p = Partition::new(vec![3, 1, 0]).unwrap();
        assert_eq!((p.weight(), p.length(), p.to_string()), (4, 2, "(3,1,0)".to_string()));
    }
}
