//! The tables `p_ρ`, `p̂_ρ`, `q_ρ` and the bias functionals built from them.

use serde::{Deserialize, Serialize};

use super::{weyl_coefficients, CMatrix, DensityMatrix};
use crate::fourier::{inverse_symplectic_transform, Domain, FourierTable};

/// Roundoff allowance when clamping distribution entries.
pub(crate) const CLAMP_TOL: f64 = 1e-12;

/// `p_ρ(x) = 2^{-n} tr²(W_x ρ)`.
pub fn p_table(rho: &DensityMatrix) -> FourierTable {
    let n = rho.n();
    let scale = 1.0 / rho.dim() as f64;
    let values = weyl_coefficients(rho.matrix())
        .into_iter()
        .map(|c| c.re * c.re * scale)
        .collect();
    FourierTable::new(n, values).expect("4^n finite entries")
}

/// `4^{-n} tr(W_a H W_a H)` for any Hermitian `H`; the transform of `p_H`.
pub fn p_hat_hermitian(h: &CMatrix) -> FourierTable {
    let dim = h.nrows();
    let n = dim.trailing_zeros() as usize;
    let scale = 1.0 / (dim * dim) as f64;
    let mut values = Vec::with_capacity(dim * dim);
    for a in 0..dim {
        for b in 0..dim {
            // tr(W H W H) = Σ_ij (-1)^{b·(i⊕j)} H[i⊕a, j⊕a] H[j, i]
            let mut acc = 0.0;
            for i in 0..dim {
                for j in 0..dim {
                    let t = (h[(i ^ a, j ^ a)] * h[(j, i)]).re;
                    if (b & (i ^ j)).count_ones() & 1 == 1 {
                        acc -= t;
                    } else {
                        acc += t;
                    }
                }
            }
            values.push(acc * scale);
        }
    }
    FourierTable::with_domain(n, values, Domain::Hat).expect("4^n finite entries")
}

/// `p̂_ρ(a) = 4^{-n} tr(W_a ρ W_a ρ)`.
pub fn p_hat_table(rho: &DensityMatrix) -> FourierTable {
    p_hat_hermitian(rho.matrix())
}

/// `q_ρ`, the Bell-difference law: the inverse transform of `p_ρ²`.
///
/// Entries are clamped at zero (roundoff only) and renormalized if the total
/// drifts from 1 by more than `1e-12`.
pub fn q_table(rho: &DensityMatrix) -> FourierTable {
    let p = p_table(rho);
    let mut sq = p.map(|v| v * v);
    sq.set_domain(Domain::Hat);
    let q = inverse_symplectic_transform(&sq);
    let n = q.n();
    let mut values = q.into_values();
    for v in values.iter_mut() {
        debug_assert!(*v >= -1e-9, "q entry {v} far below zero");
        if *v < 0.0 {
            *v = 0.0;
        }
    }
    let total: f64 = values.iter().sum();
    if (total - 1.0).abs() > CLAMP_TOL {
        values.iter_mut().for_each(|v| *v /= total);
    }
    FourierTable::new(n, values).expect("4^n finite entries")
}

/// The test biases of a state.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BiasReport {
    /// `4ⁿ Σ p³`, the mean of the 6-copy estimator.
    pub eta: f64,
    /// `4ⁿ Σ q p̂`, the same quantity through the sampling route.
    pub eta_from_q: f64,
    /// `2ⁿ Σ q p`, the bias of the pure-state Bell-difference test.
    pub eta_gnw: f64,
    /// `32ⁿ Σ p̂³`.
    pub eta_prime: f64,
    pub purity: f64,
}

pub fn bias_report(rho: &DensityMatrix) -> BiasReport {
    let p = p_table(rho);
    let ph = p_hat_table(rho);
    let q = q_table(rho);
    let d = rho.dim() as f64;
    let eta = d * d * p.values().iter().map(|v| v * v * v).sum::<f64>();
    let eta_from_q = d * d * q.dot(&ph).expect("same n");
    let eta_gnw = d * q.dot(&p).expect("same n");
    let eta_prime = d.powi(5) * ph.values().iter().map(|v| v * v * v).sum::<f64>();
    BiasReport {
        eta,
        eta_from_q,
        eta_gnw,
        eta_prime,
        purity: rho.purity(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fourier::{convolve, symplectic_transform};
    use crate::gf2::sp_word;
    use crate::quantum::{gen_state, StateKind};
    use num_complex::Complex64 as C64;

    fn zero1() -> DensityMatrix {
        DensityMatrix::basis_state(1, 0).unwrap()
    }

    fn mixed1() -> DensityMatrix {
        DensityMatrix::maximally_mixed(1).unwrap()
    }

    fn assert_table(t: &FourierTable, want: &[f64], tol: f64) {
        for (a, b) in t.values().iter().zip(want) {
            assert!((a - b).abs() <= tol, "{:?} vs {want:?}", t.values());
        }
    }

    /// q straight from its definition: 4^{-n} Σ_x (-1)^{[a,x]} tr⁴(W_x ρ).
    fn q_by_definition(rho: &DensityMatrix) -> Vec<f64> {
        let n = rho.n();
        let c: Vec<f64> = weyl_coefficients(rho.matrix())
            .iter()
            .map(|z| z.re)
            .collect();
        let len = c.len() as u64;
        (0..len)
            .map(|a| {
                (0..len)
                    .map(|x| {
                        let s = if sp_word(n, a, x) == 1 { -1.0 } else { 1.0 };
                        s * c[x as usize].powi(4)
                    })
                    .sum::<f64>()
                    / len as f64
            })
            .collect()
    }

    fn samples() -> Vec<DensityMatrix> {
        let mut v = Vec::new();
        for seed in 0..6 {
            for n in 1..=3 {
                v.push(gen_state(&StateKind::MixedGinibre { rank: 2 }, n, seed).unwrap());
                v.push(gen_state(&StateKind::PureHaar, n, seed).unwrap());
                v.push(gen_state(&StateKind::MixedGinibre { rank: 1 << n }, n, seed).unwrap());
            }
        }
        v
    }

    #[test]
    fn p_examples() {
        assert_table(&p_table(&zero1()), &[0.5, 0.5, 0.0, 0.0], 1e-15);
        assert_table(&p_table(&mixed1()), &[0.5, 0.0, 0.0, 0.0], 1e-15);
        for rho in samples() {
            let p = p_table(&rho);
            let d = rho.dim() as f64;
            assert!((p.sum() - rho.purity()).abs() <= 1e-10);
            assert!((p.at(0) - 1.0 / d).abs() <= 1e-14);
            assert!(p
                .values()
                .iter()
                .all(|&v| (-1e-15..=1.0 / d + 1e-12).contains(&v)));
        }
    }

    #[test]
    fn p_hat_examples() {
        assert_table(&p_hat_table(&mixed1()), &[0.125; 4], 1e-15);
        assert_table(&p_hat_table(&zero1()), &[0.25, 0.25, 0.0, 0.0], 1e-15);
        for rho in samples() {
            let ph = p_hat_table(&rho);
            let via_transform = symplectic_transform(&p_table(&rho));
            assert!(ph.max_abs_diff(&via_transform).unwrap() <= 1e-10);
            let d = rho.dim() as f64;
            assert!((ph.sum() * d - 1.0).abs() <= 1e-10);
            assert!(ph
                .values()
                .iter()
                .all(|&v| v >= -1e-12 && v <= 1.0 / (d * d) + 1e-12));
        }
    }

    #[test]
    fn p_hat_for_general_hermitian() {
        let h = CMatrix::from_fn(4, 4, |i, j| {
            let re = ((i + j) as f64).cos();
            let im = if i == j {
                0.0
            } else {
                (i as f64 - j as f64) * 0.3
            };
            C64::new(re, im)
        });
        let ph = p_hat_hermitian(&h);
        let coeffs = weyl_coefficients(&h);
        let p = FourierTable::new(2, coeffs.iter().map(|z| z.re * z.re / 4.0).collect()).unwrap();
        assert!(ph.max_abs_diff(&symplectic_transform(&p)).unwrap() <= 1e-12);
    }

    #[test]
    fn pure_states_collapse() {
        for seed in 0..5 {
            let rho = gen_state(&StateKind::PureHaar, 2, seed).unwrap();
            let p = p_table(&rho);
            assert!(p_hat_table(&rho).max_abs_diff(&p.scaled(0.25)).unwrap() <= 1e-12);
        }
    }

    #[test]
    fn q_examples() {
        assert_table(&q_table(&zero1()), &[0.5, 0.5, 0.0, 0.0], 1e-15);
        assert_table(&q_table(&mixed1()), &[0.25; 4], 1e-15);
        for rho in samples() {
            let q = q_table(&rho);
            assert!((q.sum() - 1.0).abs() <= 1e-10);
            assert!(q.values().iter().all(|&v| v >= 0.0));
            for (a, b) in q.values().iter().zip(q_by_definition(&rho)) {
                assert!((a - b).abs() <= 1e-10);
            }
            let p = p_table(&rho);
            let qh = symplectic_transform(&q);
            assert!(qh.max_abs_diff(&p.map(|v| v * v)).unwrap() <= 1e-10);
            if rho.n() <= 2 {
                let ph = p_hat_table(&rho);
                let conv = convolve(&ph, &ph)
                    .unwrap()
                    .scaled(16f64.powi(rho.n() as i32));
                assert!(q.max_abs_diff(&conv).unwrap() <= 1e-10);
            }
        }
    }

    #[test]
    fn bias_examples() {
        let b = bias_report(&zero1());
        assert!((b.eta - 1.0).abs() < 1e-15 && (b.eta_gnw - 1.0).abs() < 1e-15);
        let b = bias_report(&mixed1());
        assert!((b.eta - 0.5).abs() < 1e-15);
        assert!((b.eta_gnw - 0.25).abs() < 1e-15);
        for rho in samples() {
            let b = bias_report(&rho);
            assert!((b.eta - b.eta_from_q).abs() <= 1e-10);
            assert!((0.0..=1.0 + 1e-12).contains(&b.eta));
            assert!(b.eta >= b.eta_prime - 1e-10 && b.eta_prime >= b.eta * b.eta - 1e-10);
            if (b.purity - 1.0).abs() < 1e-9 {
                assert!((b.eta - b.eta_gnw).abs() <= 1e-10);
            }
        }
    }
}
