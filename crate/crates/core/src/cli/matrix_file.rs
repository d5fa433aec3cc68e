//! JSON matrix files: `{"n": 2, "entries": [[{"re": 1, "im": 0}, ...], ...]}`
//! with optional `rho` and `description`. Real entries may omit `im`.

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{param, Result};
use crate::matrix::CMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Entry {
    pub re: f64,
    #[serde(default, skip_serializing_if = "is_zero")]
    pub im: f64,
}

fn is_zero(x: &f64) -> bool {
    *x == 0.0
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixFile {
    pub n: usize,
    pub entries: Vec<Vec<Entry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
}

impl MatrixFile {
    pub fn from_matrix(a: &CMatrix) -> Self {
        let n = a.dim();
        Self {
            n,
            entries: (0..n)
                .map(|i| a.row(i).iter().map(|z| Entry { re: z.re, im: z.im }).collect())
                .collect(),
            rho: None,
            description: None,
        }
    }

    pub fn with_rho(mut self, rho: f64) -> Self {
        self.rho = Some(rho);
        self
    }

    pub fn with_description(mut self, d: impl Into<String>) -> Self {
        self.description = Some(d.into());
        self
    }

    /// Checks shape and finiteness.
    pub fn validate(&self) -> Result<()> {
        if self.entries.len() != self.n || self.entries.iter().any(|r| r.len() != self.n) {
            return param(format!("matrix file declares n = {} but entries are not {0}x{0}", self.n));
        }
        if self.entries.iter().flatten().any(|e| !e.re.is_finite() || !e.im.is_finite()) {
            return param("matrix file has non-finite entries");
        }
        if let Some(r) = self.rho {
            if !(r > 0.0 && r.is_finite()) {
                return param(format!("rho must be positive, got {r}"));
            }
        }
        Ok(())
    }

    pub fn to_matrix(&self) -> Result<CMatrix> {
        self.validate()?;
        Ok(CMatrix::from_fn(self.n, |i, j| {
            let e = self.entries[i][j];
            Complex64::new(e.re, e.im)
        }))
    }

    pub fn parse(text: &str) -> Result<Self> {
        let f: Self = serde_json::from_str(text)?;
        f.validate()?;
        Ok(f)
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("matrix files always serialize")
    }
}

/// Parses `1`, `-2.5`, `3i`, `-i`, `1+2i`, `0.5-0.25i`, `1e-3+2e2i`.
pub fn parse_complex(s: &str) -> Result<Complex64> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || crate::error::Error::Parameter(format!("cannot parse complex literal {s:?}"));
    if t.is_empty() {
        return Err(bad());
    }
    let Some(body) = t.strip_suffix('i') else {
        return t.parse::<f64>().map(|re| Complex64::new(re, 0.0)).map_err(|_| bad());
    };
    // split at the last sign that is not part of an exponent
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("", body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        x => x.parse::<f64>().map_err(|_| bad())?,
    };
    let re = if re.is_empty() { 0.0 } else { re.parse::<f64>().map_err(|_| bad())? };
    Ok(Complex64::new(re, im))
}

/// Comma-separated complex literals.
pub fn parse_complex_list(s: &str) -> Result<Vec<Complex64>> {
    s.split(',').map(parse_complex).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_complex_literals() {
        let c = |re, im| Complex64::new(re, im);
        assert_eq!(parse_complex("1").unwrap(), c(1.0, 0.0));
        assert_eq!(parse_complex("-2.5").unwrap(), c(-2.5, 0.0));
        assert_eq!(parse_complex("3i").unwrap(), c(0.0, 3.0));
        assert_eq!(parse_complex("-i").unwrap(), c(0.0, -1.0));
        assert_eq!(parse_complex("1+2i").unwrap(), c(1.0, 2.0));
        assert_eq!(parse_complex("0.5-0.25i").unwrap(), c(0.5, -0.25));
        assert_eq!(parse_complex("1e-3+2e2i").unwrap(), c(1e-3, 200.0));
        assert_eq!(parse_complex(" 1 - i ").unwrap(), c(1.0, -1.0));
        assert!(parse_complex("").is_err());
        assert!(parse_complex("1+2j").is_err());
        assert!(parse_complex("abc").is_err());
        assert_eq!(parse_complex_list("1,2+i").unwrap().len(), 2);
    }

    #[test]
    fn real_entries_may_omit_im() {
        let f = MatrixFile::parse(r#"{"n": 2, "entries": [[{"re": 1}, {"re": 2, "im": -1}], [{"re": 2, "im": 1}, {"re": 5}]], "rho": 5}"#)
            .unwrap();
        let a = f.to_matrix().unwrap();
        assert_eq!(a[(0, 1)], Complex64::new(2.0, -1.0));
        assert_eq!(f.rho, Some(5.0));
    }

    #[test]
    fn rejects_malformed_files() {
        assert!(MatrixFile::parse(r#"{"n": 2, "entries": [[{"re": 1}]]}"#).is_err());
        assert!(MatrixFile::parse(r#"{"n": 1, "entries": [[{"im": 1}]]}"#).is_err());
        assert!(MatrixFile::parse("[1, 2]").is_err());
        assert!(MatrixFile::parse(r#"{"n": 1, "entries": [[{"re": 1}]], "rho": -1}"#).is_err());
    }

    fn finite() -> impl Strategy<Value = f64> {
        use proptest::num::f64::{NEGATIVE, NORMAL, POSITIVE, SUBNORMAL, ZERO};
        POSITIVE | NEGATIVE | NORMAL | SUBNORMAL | ZERO
    }

    proptest! {
        #[test]
        fn roundtrip_is_exact(vals in proptest::collection::vec((finite(), finite()), 9)) {
            let a = CMatrix::from_fn(3, |i, j| Complex64::new(vals[3 * i + j].0, vals[3 * i + j].1));
            let text = MatrixFile::from_matrix(&a).with_rho(0.75).to_json();
            let back = MatrixFile::parse(&text).unwrap();
            prop_assert_eq!(back.rho, Some(0.75));
            let b = back.to_matrix().unwrap();
            for (x, y) in a.entries().zip(b.entries()) {
                prop_assert_eq!(x, y);
            }
        }
    }
}
