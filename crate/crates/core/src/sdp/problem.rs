use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, C64, ZERO};

/// One nonzero of a Hermitian constraint matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Entry {
    pub block: usize,
    pub row: usize,
    pub col: usize,
    pub value: C64,
}

/// Sparse Hermitian `A_i` and right-hand side `b_i` of `<A_i, X> = b_i`,
/// where `<A, X> = Re Σ conj(A_jk) X_jk`.
#[derive(Clone, Debug, PartialEq)]
pub struct Constraint {
    pub entries: Vec<Entry>,
    pub rhs: f64,
}

/// `minimize Σ <C_k, X_k>` subject to the linear constraints and `X_k ⪰ 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct SdpProblem {
    block_dims: Vec<usize>,
    cost: Vec<ComplexMatrix>,
    constraints: Vec<Constraint>,
}

impl SdpProblem {
    pub fn new(block_dims: Vec<usize>) -> Self {
        let cost = block_dims.iter().map(|&n| ComplexMatrix::zeros(n, n)).collect();
        Self { block_dims, cost, constraints: Vec::new() }
    }

    pub fn block_dims(&self) -> &[usize] {
        &self.block_dims
    }

    pub fn cost(&self) -> &[ComplexMatrix] {
        &self.cost
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn num_constraints(&self) -> usize {
        self.constraints.len()
    }

    pub fn set_cost(&mut self, block: usize, c: ComplexMatrix) -> Result<()> {
        let n = *self.block_dims.get(block).ok_or(Error::IndexOutOfRange { index: block, count: self.block_dims.len() })?;
        if c.rows() != n || c.cols() != n {
            return Err(Error::DimensionMismatch(format!("cost for block {block} must be {n}x{n}")));
        }
        let deviation = c.hermiticity_deviation();
        if deviation > 1e-10 {
            return Err(Error::NotHermitian { deviation });
        }
        self.cost[block] = c.hermitian_part();
        Ok(())
    }

    /// Adds the constraint `Re Σ w · X_block[r, c] = rhs` given as `(block, r, c, w)` terms.
    pub fn add_functional(&mut self, terms: &[(usize, usize, usize, C64)], rhs: f64) -> Result<()> {
        let mut merged: BTreeMap<(usize, usize, usize), C64> = BTreeMap::new();
        for &(block, r, c, w) in terms {
            let n = *self.block_dims.get(block).ok_or(Error::IndexOutOfRange { index: block, count: self.block_dims.len() })?;
            if r >= n || c >= n {
                return Err(Error::InvalidParameter(format!("entry ({r},{c}) outside block {block} of side {n}")));
            }
            // Re(w X_rc) = <A, X> with A_rc = conj(w)/2 and A_cr = w/2
            *merged.entry((block, r, c)).or_insert(ZERO) += w.conj() * 0.5;
            *merged.entry((block, c, r)).or_insert(ZERO) += w * 0.5;
        }
        let entries: Vec<Entry> = merged
            .into_iter()
            .filter(|(_, v)| v.norm() > 0.0)
            .map(|((block, row, col), value)| Entry { block, row, col, value })
            .collect();
        if entries.is_empty() {
            return Err(Error::InvalidParameter("constraint has no nonzero coefficient".into()));
        }
        if !rhs.is_finite() {
            return Err(Error::NonFinite);
        }
        self.constraints.push(Constraint { entries, rhs });
        Ok(())
    }

    /// Adds `<A, X_block> = rhs` for a dense Hermitian `A`.
    pub fn add_dense(&mut self, block: usize, a: &ComplexMatrix, rhs: f64) -> Result<()> {
        let deviation = a.hermiticity_deviation();
        if deviation > 1e-10 {
            return Err(Error::NotHermitian { deviation });
        }
        let mut terms = Vec::new();
        for r in 0..a.rows() {
            for c in 0..a.cols() {
                let v = a[(r, c)];
                if v != ZERO {
                    // Re Σ conj(A_rc) X_rc
                    terms.push((block, r, c, v.conj()));
                }
            }
        }
        self.add_functional(&terms, rhs)
    }

    /// Constrains the Hermitian expression `Σ_k coeff_k · X_{b_k}[r_k, c_k]`
    /// (given per output entry by `terms(r, c)`) to equal `target` entrywise,
    /// using `Re` on and above the diagonal and `Im` strictly above it.
    pub fn add_hermitian_equality(
        &mut self,
        side: usize,
        mut terms: impl FnMut(usize, usize) -> Vec<(usize, usize, usize, C64)>,
        target: &ComplexMatrix,
    ) -> Result<()> {
        for r in 0..side {
            for c in r..side {
                let t = terms(r, c);
                self.add_functional(&t, target[(r, c)].re)?;
                if c > r {
                    let im: Vec<_> = t.iter().map(|&(b, i, j, w)| (b, i, j, w * C64::new(0.0, -1.0))).collect();
                    self.add_functional(&im, target[(r, c)].im)?;
                }
            }
        }
        Ok(())
    }

    /// Appends a constraint whose entries are already Hermitian-paired.
    pub(crate) fn push_constraint(&mut self, con: Constraint) {
        self.constraints.push(con);
    }

    /// `A(X)`.
    pub fn apply(&self, x: &[ComplexMatrix]) -> Vec<f64> {
        self.constraints
            .iter()
            .map(|con| con.entries.iter().map(|e| (e.value.conj() * x[e.block][(e.row, e.col)]).re).sum())
            .collect()
    }

    /// `A*(y) = Σ y_i A_i`.
    pub fn adjoint_apply(&self, y: &[f64]) -> Vec<ComplexMatrix> {
        let mut out: Vec<ComplexMatrix> = self.block_dims.iter().map(|&n| ComplexMatrix::zeros(n, n)).collect();
        for (con, &yi) in self.constraints.iter().zip(y) {
            if yi == 0.0 {
                continue;
            }
            for e in &con.entries {
                out[e.block][(e.row, e.col)] += e.value * yi;
            }
        }
        out
    }

    pub fn rhs(&self) -> Vec<f64> {
        self.constraints.iter().map(|c| c.rhs).collect()
    }

    /// `Σ <C_k, X_k>`.
    pub fn objective(&self, x: &[ComplexMatrix]) -> f64 {
        block_inner(&self.cost, x)
    }

    /// Line-oriented text dump for debugging; not a stable interchange format.
    ///
    /// ```text
    /// blocks <n_1> <n_2> ...
    /// cost <block> <row> <col> <re> <im>
    /// constraint <index> <rhs>
    /// a <block> <row> <col> <re> <im>
    /// ```
    pub fn dump(&self) -> String {
        let mut s = String::new();
        let dims: Vec<String> = self.block_dims.iter().map(|d| d.to_string()).collect();
        let _ = writeln!(s, "blocks {}", dims.join(" "));
        for (k, c) in self.cost.iter().enumerate() {
            for r in 0..c.rows() {
                for col in 0..c.cols() {
                    let v = c[(r, col)];
                    if v != ZERO {
                        let _ = writeln!(s, "cost {k} {r} {col} {:e} {:e}", v.re, v.im);
                    }
                }
            }
        }
        for (i, con) in self.constraints.iter().enumerate() {
            let _ = writeln!(s, "constraint {i} {:e}", con.rhs);
            for e in &con.entries {
                let _ = writeln!(s, "a {} {} {} {:e} {:e}", e.block, e.row, e.col, e.value.re, e.value.im);
            }
        }
        s
    }
}

/// `Σ_k Re tr(A_k† B_k)`.
pub fn block_inner(a: &[ComplexMatrix], b: &[ComplexMatrix]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x.data().iter().zip(y.data()).map(|(u, v)| (u.conj() * v).re).sum::<f64>()).sum()
}

pub fn block_norm(a: &[ComplexMatrix]) -> f64 {
    a.iter().map(|m| m.frobenius_norm().powi(2)).sum::<f64>().sqrt()
}
