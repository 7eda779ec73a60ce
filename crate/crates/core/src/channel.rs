//! Completely positive maps in Choi form, and the transfer-matrix
//! representation obtained from it by an entry permutation.

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, ONE, ZERO};
use crate::state::{partial_trace_matrix, HERMITIAN_TOL};

/// A linear map held as its unnormalized Choi operator `Σ |i><j| ⊗ N(|i><j|)`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuantumMap {
    dim_in: usize,
    dim_out: usize,
    choi: ComplexMatrix,
}

impl QuantumMap {
    pub fn new(dim_in: usize, dim_out: usize, choi: ComplexMatrix) -> Result<Self> {
        let n = dim_in * dim_out;
        if choi.rows() != n || choi.cols() != n {
            return Err(Error::DimensionMismatch(format!("Choi operator is {}x{}, expected side {n}", choi.rows(), choi.cols())));
        }
        let deviation = choi.hermiticity_deviation();
        if deviation > HERMITIAN_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        Ok(Self { dim_in, dim_out, choi: choi.hermitian_part() })
    }

    /// Builds the map `X ↦ Σ K X K†` from Kraus operators of shape `dim_out × dim_in`.
    pub fn from_kraus(kraus: &[ComplexMatrix]) -> Result<Self> {
        let first = kraus.first().ok_or_else(|| Error::InvalidParameter("no Kraus operators".into()))?;
        let (dim_out, dim_in) = (first.rows(), first.cols());
        let n = dim_in * dim_out;
        let mut choi = ComplexMatrix::zeros(n, n);
        for k in kraus {
            if k.rows() != dim_out || k.cols() != dim_in {
                return Err(Error::DimensionMismatch("Kraus operators of differing shapes".into()));
            }
            // (1 ⊗ K)|Ω> has entries K[b, a] at index (a, b)
            let v: Vec<_> = (0..n).map(|idx| k[(idx % dim_out, idx / dim_out)]).collect();
            choi = &choi + &ComplexMatrix::projector(&v);
        }
        Ok(Self { dim_in, dim_out, choi })
    }

    pub fn identity(d: usize) -> Self {
        Self::from_kraus(&[ComplexMatrix::identity(d)]).expect("identity Kraus operator")
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    pub fn choi(&self) -> &ComplexMatrix {
        &self.choi
    }

    /// `N(X) = tr_in[(X^T ⊗ 1) J]`.
    pub fn apply(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        if x.rows() != self.dim_in || x.cols() != self.dim_in {
            return Err(Error::DimensionMismatch("input operator size".into()));
        }
        let (di, d_o) = (self.dim_in, self.dim_out);
        let mut out = ComplexMatrix::zeros(d_o, d_o);
        for i in 0..di {
            for j in 0..di {
                let xij = x[(i, j)];
                if xij == ZERO {
                    continue;
                }
                for a in 0..d_o {
                    for b in 0..d_o {
                        out[(a, b)] += xij * self.choi[(i * d_o + a, j * d_o + b)];
                    }
                }
            }
        }
        Ok(out)
    }

    /// `(id_A ⊗ N)(X)` for an operator on `A ⊗ in`.
    pub fn apply_to_second(&self, x: &ComplexMatrix, d_a: usize) -> Result<ComplexMatrix> {
        let (di, d_o) = (self.dim_in, self.dim_out);
        if x.rows() != d_a * di || x.cols() != d_a * di {
            return Err(Error::DimensionMismatch("operator size for id ⊗ N".into()));
        }
        let n = d_a * d_o;
        let mut out = ComplexMatrix::zeros(n, n);
        for a in 0..d_a {
            for a2 in 0..d_a {
                for i in 0..di {
                    for j in 0..di {
                        let xv = x[(a * di + i, a2 * di + j)];
                        if xv == ZERO {
                            continue;
                        }
                        for y in 0..d_o {
                            for y2 in 0..d_o {
                                out[(a * d_o + y, a2 * d_o + y2)] += xv * self.choi[(i * d_o + y, j * d_o + y2)];
                            }
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// `self ∘ first`, computed directly on Choi operators.
    pub fn compose(&self, first: &QuantumMap) -> Result<QuantumMap> {
        if first.dim_out != self.dim_in {
            return Err(Error::DimensionMismatch("composition dimensions".into()));
        }
        let (di, dm, d_o) = (first.dim_in, first.dim_out, self.dim_out);
        let n = di * d_o;
        let mut choi = ComplexMatrix::zeros(n, n);
        for i in 0..di {
            for j in 0..di {
                // N(M(|i><j|)) with M(|i><j|) read off the Choi block
                let block = ComplexMatrix::from_fn(dm, dm, |x, y| first.choi[(i * dm + x, j * dm + y)]);
                let out = self.apply(&block)?;
                for a in 0..d_o {
                    for b in 0..d_o {
                        choi[(i * d_o + a, j * d_o + b)] = out[(a, b)];
                    }
                }
            }
        }
        QuantumMap::new(di, d_o, choi)
    }

    pub fn min_choi_eigenvalue(&self) -> f64 {
        self.choi.min_eigenvalue()
    }

    pub fn is_cp(&self, tol: f64) -> bool {
        self.min_choi_eigenvalue() >= -tol
    }

    /// `max |tr_out J − 1_in|` entrywise.
    pub fn tp_residual(&self) -> f64 {
        let t = partial_trace_matrix(&self.choi, &[self.dim_in, self.dim_out], &[0]).expect("consistent dims");
        t.max_abs_diff(&ComplexMatrix::identity(self.dim_in))
    }

    pub fn is_tp(&self, tol: f64) -> bool {
        self.tp_residual() <= tol
    }

    pub fn transfer_matrix(&self) -> ComplexMatrix {
        choi_to_transfer(&self.choi, self.dim_in, self.dim_out)
    }

    pub fn from_transfer_matrix(t: &ComplexMatrix, dim_in: usize, dim_out: usize) -> Result<Self> {
        if t.rows() != dim_out * dim_out || t.cols() != dim_in * dim_in {
            return Err(Error::DimensionMismatch("transfer matrix shape".into()));
        }
        Ok(Self { dim_in, dim_out, choi: transfer_to_choi(t, dim_in, dim_out) })
    }
}

/// `T[(i,j),(k,l)] = J[(l,j),(k,i)]`, with `i, j` output and `k, l` input indices.
pub fn choi_to_transfer(choi: &ComplexMatrix, dim_in: usize, dim_out: usize) -> ComplexMatrix {
    let (di, d_o) = (dim_in, dim_out);
    ComplexMatrix::from_fn(d_o * d_o, di * di, |r, col| {
        let (i, j) = (r / d_o, r % d_o);
        let (k, l) = (col / di, col % di);
        choi[(l * d_o + j, k * d_o + i)]
    })
}

/// Inverse of [`choi_to_transfer`].
pub fn transfer_to_choi(t: &ComplexMatrix, dim_in: usize, dim_out: usize) -> ComplexMatrix {
    let (di, d_o) = (dim_in, dim_out);
    let mut choi = ComplexMatrix::zeros(di * d_o, di * d_o);
    for i in 0..d_o {
        for j in 0..d_o {
            for k in 0..di {
                for l in 0..di {
                    choi[(l * d_o + j, k * d_o + i)] = t[(i * d_o + j, k * di + l)];
                }
            }
        }
    }
    choi
}

/// Choi operator of the completely depolarizing map `X ↦ tr(X) 1/d_out`.
pub fn replacer_choi(dim_in: usize, dim_out: usize) -> ComplexMatrix {
    let s = 1.0 / dim_out as f64;
    ComplexMatrix::from_fn(dim_in * dim_out, dim_in * dim_out, |r, c| if r == c { ONE * s } else { ZERO })
}
