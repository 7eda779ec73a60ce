//! JSON files for states and pure vectors.
//!
//! ```text
//! state:  {"dims": [dA, dB], "re": [[...], ...], "im": [[...], ...]}   row-major, square
//! vector: {"dims": [dA, dB], "re": [...], "im": [...]}
//! ```
//! `im` may be omitted for real data. A vector file holds one vector object
//! or an array of them.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, C64};
use crate::state::DensityMatrix;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateFile {
    pub dims: Vec<usize>,
    pub re: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im: Option<Vec<Vec<f64>>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VectorFile {
    pub dims: Vec<usize>,
    pub re: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im: Option<Vec<f64>>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum VectorList {
    One(VectorFile),
    Many(Vec<VectorFile>),
}

impl StateFile {
    pub fn from_state(rho: &DensityMatrix) -> Self {
        let m = rho.matrix();
        let n = m.rows();
        let re = (0..n).map(|r| (0..n).map(|c| m[(r, c)].re).collect()).collect();
        let im = (0..n).map(|r| (0..n).map(|c| m[(r, c)].im).collect()).collect();
        Self { dims: rho.dims().to_vec(), re, im: Some(im) }
    }

    /// Validates shape and the density-matrix invariants.
    pub fn into_state(self) -> Result<DensityMatrix> {
        let n = self.re.len();
        let rows_ok = self.re.iter().all(|r| r.len() == n);
        let im_ok = self.im.as_ref().is_none_or(|im| im.len() == n && im.iter().all(|r| r.len() == n));
        if !rows_ok || !im_ok {
            return Err(Error::Parse(format!("matrix must be square with {n} rows in both re and im")));
        }
        let mut data = Vec::with_capacity(n * n);
        for r in 0..n {
            for c in 0..n {
                let im = self.im.as_ref().map_or(0.0, |m| m[r][c]);
                data.push(C64::new(self.re[r][c], im));
            }
        }
        DensityMatrix::new(self.dims, ComplexMatrix::new(n, n, data)?)
    }
}

impl VectorFile {
    pub fn from_vector(dims: &[usize], v: &[C64]) -> Self {
        Self { dims: dims.to_vec(), re: v.iter().map(|z| z.re).collect(), im: Some(v.iter().map(|z| z.im).collect()) }
    }

    pub fn into_vector(self) -> Result<(Vec<usize>, Vec<C64>)> {
        let n = self.re.len();
        if self.im.as_ref().is_some_and(|im| im.len() != n) {
            return Err(Error::Parse("re and im lengths differ".into()));
        }
        if self.dims.iter().product::<usize>() != n {
            return Err(Error::Parse(format!("dims {:?} do not match vector length {n}", self.dims)));
        }
        let v: Vec<C64> = (0..n).map(|i| C64::new(self.re[i], self.im.as_ref().map_or(0.0, |m| m[i]))).collect();
        if v.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok((self.dims, v))
    }
}

pub fn parse_state(text: &str) -> Result<DensityMatrix> {
    let file: StateFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    file.into_state()
}

pub fn read_state(path: &Path) -> Result<DensityMatrix> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    parse_state(&text)
}

pub fn state_to_json(rho: &DensityMatrix) -> String {
    serde_json::to_string_pretty(&StateFile::from_state(rho)).expect("plain data serializes")
}

/// Parses one vector or an array of vectors; all must share `dims`.
pub fn parse_vectors(text: &str) -> Result<(Vec<usize>, Vec<Vec<C64>>)> {
    let list = match serde_json::from_str::<VectorList>(text).map_err(|e| Error::Parse(e.to_string()))? {
        VectorList::One(v) => vec![v],
        VectorList::Many(v) => v,
    };
    let mut dims: Option<Vec<usize>> = None;
    let mut out = Vec::with_capacity(list.len());
    for file in list {
        let (d, v) = file.into_vector()?;
        match &dims {
            Some(prev) if *prev != d => return Err(Error::Parse(format!("mixed dims {prev:?} and {d:?}"))),
            _ => dims = Some(d),
        }
        out.push(v);
    }
    let dims = dims.ok_or_else(|| Error::Parse("no vectors".into()))?;
    Ok((dims, out))
}

pub fn read_vectors(path: &Path) -> Result<(Vec<usize>, Vec<Vec<C64>>)> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    parse_vectors(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::states::isotropic;

    #[test]
    fn state_round_trip() {
        let rho = isotropic(2, 0.8).unwrap();
        let back = parse_state(&state_to_json(&rho)).unwrap();
        assert!(back.matrix().max_abs_diff(rho.matrix()) < 1e-15);
        assert_eq!(back.dims(), rho.dims());
    }

    #[test]
    fn real_state_without_imaginary_part() {
        let rho = parse_state(r#"{"dims": [1, 2], "re": [[0.5, 0], [0, 0.5]]}"#).unwrap();
        assert_eq!(rho.dim(), 2);
    }

    #[test]
    fn non_positive_state_reports_eigenvalue() {
        let err = parse_state(r#"{"dims": [1, 2], "re": [[1.5, 0], [0, -0.5]]}"#).unwrap_err();
        assert!(matches!(err, Error::NotPositive { .. }), "{err:?}");
    }

    #[test]
    fn ragged_matrix_rejected() {
        assert!(matches!(parse_state(r#"{"dims": [2], "re": [[1, 0], [0]]}"#), Err(Error::Parse(_))));
    }

    #[test]
    fn vectors_single_and_list() {
        let (dims, vs) = parse_vectors(r#"{"dims": [2, 2], "re": [1, 0, 0, 0]}"#).unwrap();
        assert_eq!((dims, vs.len()), (vec![2, 2], 1));
        let text = r#"[{"dims": [2, 2], "re": [1, 0, 0, 0]}, {"dims": [2, 2], "re": [0, 0, 0, 1], "im": [0, 0, 0, 0]}]"#;
        assert_eq!(parse_vectors(text).unwrap().1.len(), 2);
        assert!(parse_vectors(r#"{"dims": [3], "re": [1, 0]}"#).is_err());
    }
}
