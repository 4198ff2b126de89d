//! Weyl operators `W_x = i^{a·b} ⊗ⱼ X^{aⱼ} Z^{bⱼ}`.
//!
//! `W_x` is monomial: `W_x |k⟩ = i^{|a∧b|} (-1)^{b·k} |k ⊕ a⟩`. Everything
//! here works off that structure instead of dense products.

use num_complex::Complex64 as C64;

use super::{CMatrix, MAX_DENSE_QUBITS};
use crate::error::{Error, Result};
use crate::gf2::PauliVector;

#[inline]
fn i_pow(k: u32) -> C64 {
    match k & 3 {
        0 => C64::new(1.0, 0.0),
        1 => C64::new(0.0, 1.0),
        2 => C64::new(-1.0, 0.0),
        _ => C64::new(0.0, -1.0),
    }
}

#[inline]
fn parity(v: u64) -> bool {
    v.count_ones() & 1 == 1
}

/// Dense `W_x`.
pub fn weyl_matrix(x: &PauliVector) -> Result<CMatrix> {
    let n = x.n();
    if n > MAX_DENSE_QUBITS {
        return Err(Error::TooLarge {
            n,
            reason: "dense Weyl matrices are limited to n <= 6",
        });
    }
    let dim = 1usize << n;
    let (a, b) = (x.x_part(), x.z_part());
    let phase = i_pow((a & b).count_ones());
    let mut m = CMatrix::zeros(dim, dim);
    for k in 0..dim as u64 {
        let s = if parity(b & k) { -phase } else { phase };
        m[((k ^ a) as usize, k as usize)] = s;
    }
    Ok(m)
}

/// `tr(W_x H)` for every `x`, in canonical index order. Real for Hermitian `H`.
pub fn weyl_coefficients(h: &CMatrix) -> Vec<C64> {
    let dim = h.nrows();
    let n = dim.trailing_zeros() as usize;
    let mut out = Vec::with_capacity(dim * dim);
    for a in 0..dim as u64 {
        for b in 0..dim as u64 {
            let phase = i_pow((a & b).count_ones());
            let mut acc = C64::new(0.0, 0.0);
            for k in 0..dim as u64 {
                let v = h[(k as usize, (k ^ a) as usize)];
                if parity(b & k) {
                    acc -= v;
                } else {
                    acc += v;
                }
            }
            out.push(acc * phase);
        }
    }
    debug_assert_eq!(out.len(), 1 << (2 * n));
    out
}

/// `W_x H W_x`, entrywise `(-1)^{b·(i⊕j)} H[i⊕a, j⊕a]`.
pub fn conjugate_by_weyl(h: &CMatrix, x: &PauliVector) -> CMatrix {
    let dim = h.nrows();
    let (a, b) = (x.x_part() as usize, x.z_part() as usize);
    CMatrix::from_fn(dim, dim, |i, j| {
        let v = h[(i ^ a, j ^ a)];
        if parity((b & (i ^ j)) as u64) {
            -v
        } else {
            v
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2::sp_word;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn single(a: bool, b: bool) -> CMatrix {
        match (a, b) {
            (false, false) => CMatrix::identity(2, 2),
            (false, true) => {
                CMatrix::from_row_slice(2, 2, &[c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)])
            }
            (true, false) => {
                CMatrix::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)])
            }
            (true, true) => {
                CMatrix::from_row_slice(2, 2, &[c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)])
            }
        }
    }

    /// Kronecker product of single-qubit Paulis, qubit 1 leftmost.
    fn kron_oracle(x: &PauliVector) -> CMatrix {
        let n = x.n();
        let mut m = CMatrix::identity(1, 1);
        for q in 0..n {
            let bit = n - 1 - q;
            let p = single(x.x_part() >> bit & 1 == 1, x.z_part() >> bit & 1 == 1);
            m = m.kronecker(&p);
        }
        m
    }

    fn close(a: &CMatrix, b: &CMatrix, tol: f64) -> bool {
        (a - b).iter().all(|z| z.norm() <= tol)
    }

    #[test]
    fn single_qubit_examples() {
        let y = weyl_matrix(&"x:1,z:1".parse().unwrap()).unwrap();
        assert_eq!(
            y,
            CMatrix::from_row_slice(2, 2, &[c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)])
        );
        let id = weyl_matrix(&"x:0,z:0".parse().unwrap()).unwrap();
        assert_eq!(id, CMatrix::identity(2, 2));
    }

    #[test]
    fn matches_kronecker_products() {
        for n in 1..=3 {
            for x in PauliVector::all(n) {
                assert_eq!(weyl_matrix(&x).unwrap(), kron_oracle(&x), "{x}");
            }
        }
    }

    #[test]
    fn algebraic_properties_n2() {
        let n = 2;
        let id = CMatrix::identity(4, 4);
        let ws: Vec<CMatrix> = PauliVector::all(n)
            .map(|x| weyl_matrix(&x).unwrap())
            .collect();
        for (i, wi) in ws.iter().enumerate() {
            assert!(close(wi, &wi.adjoint(), 0.0));
            assert!(close(&(wi * wi), &id, 1e-15));
            for (j, wj) in ws.iter().enumerate() {
                let tr = (wi * wj).trace();
                let expect = if i == j { 4.0 } else { 0.0 };
                assert!((tr - c(expect, 0.0)).norm() < 1e-14);
                let sign = if sp_word(n, i as u64, j as u64) == 1 {
                    -1.0
                } else {
                    1.0
                };
                assert!(close(&(wi * wj * wi), &wj.scale(sign), 1e-14));
            }
        }
    }

    #[test]
    fn fast_coefficients_and_conjugation_match_dense() {
        let n = 3;
        let h = CMatrix::from_fn(8, 8, |i, j| {
            c((i * 3 + j) as f64 * 0.1, (i as f64 - j as f64) * 0.05)
        });
        let coeffs = weyl_coefficients(&h);
        for x in PauliVector::all(n) {
            let w = weyl_matrix(&x).unwrap();
            assert!((coeffs[x.index()] - (&w * &h).trace()).norm() < 1e-12);
            assert!(close(&conjugate_by_weyl(&h, &x), &(&w * &h * &w), 1e-12));
        }
    }

    #[test]
    fn too_large() {
        assert!(weyl_matrix(&PauliVector::zero(7)).is_err());
    }
}
