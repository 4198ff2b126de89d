//! Dense density matrices and their Weyl-side tables.
//!
//! Matrices are `2ⁿ × 2ⁿ`, row-major in the computational basis with qubit 1 as
//! the most significant bit of the basis index, matching the bit layout of
//! [`PauliVector`](crate::gf2::PauliVector).

mod gen;
mod tables;
mod weyl;

use std::path::Path;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{ensure_same_n, Error, Result};

pub use gen::{gen_state, random_stabilizer_state, StateKind};
pub use tables::{bias_report, p_hat_hermitian, p_hat_table, p_table, q_table, BiasReport};
pub use weyl::{conjugate_by_weyl, weyl_coefficients, weyl_matrix};

pub type CMatrix = DMatrix<C64>;

/// Largest qubit count handled by dense matrices.
pub const MAX_DENSE_QUBITS: usize = 6;

pub const HERMITIAN_TOL: f64 = 1e-12;
pub const TRACE_TOL: f64 = 1e-9;
pub const PSD_TOL: f64 = 1e-9;

pub const STATE_FORMAT: &str = "stabtest-state-v1";

/// A validated `n`-qubit density matrix: Hermitian, unit trace, PSD.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    n: usize,
    matrix: CMatrix,
}

fn qubits_for_dim(dim: usize) -> Result<usize> {
    if dim < 2 || !dim.is_power_of_two() {
        return Err(Error::InvalidState(format!(
            "matrix dimension {dim} is not 2^n with n >= 1"
        )));
    }
    let n = dim.trailing_zeros() as usize;
    if n > MAX_DENSE_QUBITS {
        return Err(Error::TooLarge {
            n,
            reason: "dense matrices are limited to n <= 6",
        });
    }
    Ok(n)
}

impl DensityMatrix {
    /// Validates `matrix` against every density-matrix invariant.
    pub fn new(matrix: CMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::InvalidState("matrix is not square".into()));
        }
        let n = qubits_for_dim(matrix.nrows())?;
        if matrix
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::InvalidState("matrix has non-finite entries".into()));
        }
        let herm = (&matrix - matrix.adjoint())
            .iter()
            .fold(0.0f64, |m, z| m.max(z.norm()));
        if herm > HERMITIAN_TOL {
            return Err(Error::InvalidState(format!(
                "not Hermitian: max |rho - rho^dag| = {herm:e}"
            )));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::InvalidState(format!("trace {tr} is not 1")));
        }
        let min_eig = matrix.clone().symmetric_eigenvalues().min();
        if min_eig < -PSD_TOL {
            return Err(Error::InvalidState(format!(
                "not PSD: min eigenvalue {min_eig:e}"
            )));
        }
        Ok(Self { n, matrix })
    }

    /// `(M + M†)/2` followed by validation; absorbs roundoff from products.
    pub(crate) fn from_hermitian_part(m: CMatrix) -> Result<Self> {
        let h = (&m + m.adjoint()).scale(0.5);
        Self::new(h)
    }

    /// `|ψ⟩⟨ψ|` for a (not necessarily normalized) nonzero vector.
    pub fn from_pure(psi: &[C64]) -> Result<Self> {
        let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::InvalidState(
                "zero or non-finite state vector".into(),
            ));
        }
        let dim = psi.len();
        qubits_for_dim(dim)?;
        let m = CMatrix::from_fn(dim, dim, |i, j| psi[i] * psi[j].conj() / (norm * norm));
        Self::from_hermitian_part(m)
    }

    pub fn basis_state(n: usize, k: usize) -> Result<Self> {
        let dim = 1usize << n;
        if k >= dim {
            return Err(Error::InvalidParameter(format!(
                "basis index {k} out of range"
            )));
        }
        let mut psi = vec![C64::new(0.0, 0.0); dim];
        psi[k] = C64::new(1.0, 0.0);
        Self::from_pure(&psi)
    }

    /// `I / 2ⁿ`.
    pub fn maximally_mixed(n: usize) -> Result<Self> {
        let dim = 1usize << n;
        qubits_for_dim(dim)?;
        Self::new(CMatrix::identity(dim, dim).scale(1.0 / dim as f64))
    }

    /// `(1 - t) self + t other`.
    pub fn mix(&self, other: &Self, t: f64) -> Result<Self> {
        ensure_same_n(self.n, other.n)?;
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::InvalidParameter(format!(
                "mixing weight {t} outside [0, 1]"
            )));
        }
        Self::from_hermitian_part(self.matrix.scale(1.0 - t) + other.matrix.scale(t))
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn dim(&self) -> usize {
        1 << self.n
    }

    #[inline]
    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// `tr(ρ²)`.
    pub fn purity(&self) -> f64 {
        self.matrix.iter().map(|z| z.norm_sqr()).sum()
    }

    /// `Re tr(ρ σ)` for Hermitian `σ`.
    pub fn overlap(&self, sigma: &CMatrix) -> f64 {
        // tr(ρσ) = Σ_ij ρ_ij σ_ji
        let d = self.dim();
        let mut acc = 0.0;
        for i in 0..d {
            for j in 0..d {
                acc += (self.matrix[(i, j)] * sigma[(j, i)]).re;
            }
        }
        acc
    }

    /// `W_x ρ W_x`, still a valid state.
    pub fn conjugated_by(&self, x: &crate::gf2::PauliVector) -> Result<Self> {
        ensure_same_n(self.n, x.n())?;
        Ok(Self {
            n: self.n,
            matrix: conjugate_by_weyl(&self.matrix, x),
        })
    }

    pub fn to_file_repr(&self) -> StateFile {
        let d = self.dim();
        StateFile {
            format: STATE_FORMAT.to_string(),
            n: self.n,
            matrix_re: (0..d)
                .map(|i| (0..d).map(|j| self.matrix[(i, j)].re).collect())
                .collect(),
            matrix_im: (0..d)
                .map(|i| (0..d).map(|j| self.matrix[(i, j)].im).collect())
                .collect(),
        }
    }

    pub fn from_file_repr(f: &StateFile) -> Result<Self> {
        if f.format != STATE_FORMAT {
            return Err(Error::InvalidState(format!(
                "unknown state format `{}`",
                f.format
            )));
        }
        if f.n == 0 || f.n > MAX_DENSE_QUBITS {
            return Err(Error::TooLarge {
                n: f.n,
                reason: "dense matrices are limited to n <= 6",
            });
        }
        let d = 1usize << f.n;
        let shape_ok = f.matrix_re.len() == d
            && f.matrix_im.len() == d
            && f.matrix_re
                .iter()
                .chain(&f.matrix_im)
                .all(|row| row.len() == d);
        if !shape_ok {
            return Err(Error::InvalidState(format!(
                "matrix rows must be {d} x {d}"
            )));
        }
        let m = CMatrix::from_fn(d, d, |i, j| C64::new(f.matrix_re[i][j], f.matrix_im[i][j]));
        Self::new(m)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(&self.to_file_repr())?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let f: StateFile = serde_json::from_str(s)?;
        Self::from_file_repr(&f)
    }

    pub fn read_file(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn write_file(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json()?)?;
        Ok(())
    }
}

/// On-disk state layout, `{"format":"stabtest-state-v1","n":..,"matrix_re":..,"matrix_im":..}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StateFile {
    pub format: String,
    pub n: usize,
    pub matrix_re: Vec<Vec<f64>>,
    pub matrix_im: Vec<Vec<f64>>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_invalid_matrices() {
        let c = |re: f64| C64::new(re, 0.0);
        let not_herm = CMatrix::from_row_slice(2, 2, &[c(0.5), c(0.1), c(0.0), c(0.5)]);
        assert!(DensityMatrix::new(not_herm).is_err());
        let bad_trace = CMatrix::from_row_slice(2, 2, &[c(0.5), c(0.0), c(0.0), c(0.6)]);
        assert!(DensityMatrix::new(bad_trace).is_err());
        let not_psd = CMatrix::from_row_slice(2, 2, &[c(1.2), c(0.0), c(0.0), c(-0.2)]);
        assert!(DensityMatrix::new(not_psd).is_err());
        assert!(DensityMatrix::new(CMatrix::identity(3, 3).scale(1.0 / 3.0)).is_err());
        assert!(DensityMatrix::maximally_mixed(7).is_err());
    }

    #[test]
    fn file_roundtrip_is_exact() {
        let rho = gen_state(&StateKind::MixedGinibre { rank: 2 }, 2, 7).unwrap();
        let back = DensityMatrix::from_json(&rho.to_json().unwrap()).unwrap();
        assert_eq!(back, rho);
    }

    #[test]
    fn file_reader_validates() {
        let mut f = DensityMatrix::maximally_mixed(1).unwrap().to_file_repr();
        f.matrix_re[0][0] = 0.9;
        assert!(DensityMatrix::from_file_repr(&f).is_err());
        let mut f = DensityMatrix::maximally_mixed(1).unwrap().to_file_repr();
        f.format = "other".into();
        assert!(DensityMatrix::from_file_repr(&f).is_err());
        let mut f = DensityMatrix::maximally_mixed(1).unwrap().to_file_repr();
        f.matrix_im.pop();
        assert!(DensityMatrix::from_file_repr(&f).is_err());
        assert!(DensityMatrix::from_json("{\"format\":1}").is_err());
    }

    #[test]
    fn purity_values() {
        assert!((DensityMatrix::basis_state(2, 3).unwrap().purity() - 1.0).abs() < 1e-15);
        assert!((DensityMatrix::maximally_mixed(2).unwrap().purity() - 0.25).abs() < 1e-15);
    }
}
