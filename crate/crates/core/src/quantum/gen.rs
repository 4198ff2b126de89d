//! Seeded test-state generation.

use std::path::PathBuf;

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::{CMatrix, DensityMatrix, MAX_DENSE_QUBITS};
use crate::error::{Error, Result};
use crate::gf2::{random_lagrangian_extension, Subspace};
use crate::stabilizer::{stabilizer_catalog, StabilizerState};

/// What kind of state to generate.
#[derive(Clone, Debug, PartialEq)]
pub enum StateKind {
    /// Haar-random pure state (normalized complex Gaussian vector).
    PureHaar,
    /// `G G† / tr(G G†)` with `G` a `2ⁿ × rank` complex Gaussian matrix.
    MixedGinibre {
        rank: usize,
    },
    /// Entry `index` of the stabilizer enumeration (n ≤ 3).
    Stabilizer {
        index: usize,
    },
    /// `(1 - p)|φ⟩⟨φ| + p I/2ⁿ`; `φ` is catalog entry `index`, or seeded-random if `None`.
    DepolarizedStabilizer {
        p: f64,
        index: Option<usize>,
    },
    FromFile(PathBuf),
}

fn gaussian_c64<R: Rng>(rng: &mut R) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// A seeded random stabilizer state for any `n ≤ 6`.
pub fn random_stabilizer_state<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<StabilizerState> {
    let l = random_lagrangian_extension(&Subspace::zero(n), rng)?;
    let signs = (0..n)
        .map(|_| if rng.random::<bool>() { 1 } else { -1 })
        .collect();
    StabilizerState::new(l, signs)
}

fn catalog_state(n: usize, index: usize) -> Result<StabilizerState> {
    let cat = stabilizer_catalog(n)?;
    cat.states().get(index).cloned().ok_or_else(|| {
        Error::InvalidParameter(format!(
            "stabilizer index {index} out of range (n = {n} has {})",
            cat.len()
        ))
    })
}

/// Builds a state deterministically from `(kind, n, seed)`.
pub fn gen_state(kind: &StateKind, n: usize, seed: u64) -> Result<DensityMatrix> {
    if let StateKind::FromFile(path) = kind {
        let rho = DensityMatrix::read_file(path)?;
        if rho.n() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: rho.n(),
            });
        }
        return Ok(rho);
    }
    if n == 0 || n > MAX_DENSE_QUBITS {
        return Err(Error::TooLarge {
            n,
            reason: "state generation supports 1 <= n <= 6",
        });
    }
    let dim = 1usize << n;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match kind {
        StateKind::PureHaar => {
            let psi: Vec<C64> = (0..dim).map(|_| gaussian_c64(&mut rng)).collect();
            DensityMatrix::from_pure(&psi)
        }
        StateKind::MixedGinibre { rank } => {
            if *rank == 0 || *rank > dim {
                return Err(Error::InvalidParameter(format!(
                    "rank {rank} outside 1..={dim}"
                )));
            }
            let g = CMatrix::from_fn(dim, *rank, |_, _| gaussian_c64(&mut rng));
            let m = &g * g.adjoint();
            let tr = m.trace().re;
            DensityMatrix::from_hermitian_part(m.unscale(tr))
        }
        StateKind::Stabilizer { index } => catalog_state(n, *index)?.projector(),
        StateKind::DepolarizedStabilizer { p, index } => {
            if !(0.0..=1.0).contains(p) {
                return Err(Error::InvalidParameter(format!(
                    "depolarizing p = {p} outside [0, 1]"
                )));
            }
            let phi = match index {
                Some(i) => catalog_state(n, *i)?,
                None => random_stabilizer_state(n, &mut rng)?,
            };
            phi.projector()?
                .mix(&DensityMatrix::maximally_mixed(n)?, *p)
        }
        StateKind::FromFile(_) => unreachable!(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::bias_report;

    #[test]
    fn stabilizer_index_zero_has_unit_bias() {
        let rho = gen_state(&StateKind::Stabilizer { index: 0 }, 1, 0).unwrap();
        assert!((rho.purity() - 1.0).abs() < 1e-12);
        assert!((bias_report(&rho).eta - 1.0).abs() < 1e-12);
    }

    #[test]
    fn fully_depolarized_is_maximally_mixed() {
        for n in 1..=3 {
            let rho = gen_state(
                &StateKind::DepolarizedStabilizer {
                    p: 1.0,
                    index: None,
                },
                n,
                3,
            )
            .unwrap();
            let mm = DensityMatrix::maximally_mixed(n).unwrap();
            assert!((rho.matrix() - mm.matrix())
                .iter()
                .all(|z| z.norm() < 1e-15));
        }
    }

    #[test]
    fn deterministic_and_valid() {
        let kinds = [
            StateKind::PureHaar,
            StateKind::MixedGinibre { rank: 2 },
            StateKind::DepolarizedStabilizer {
                p: 0.3,
                index: None,
            },
        ];
        for kind in &kinds {
            for n in 1..=4 {
                let a = gen_state(kind, n, 7).unwrap();
                let b = gen_state(kind, n, 7).unwrap();
                assert_eq!(a, b);
                assert!(DensityMatrix::new(a.matrix().clone()).is_ok());
            }
        }
        let r = gen_state(&StateKind::MixedGinibre { rank: 2 }, 2, 7).unwrap();
        let eig = r.matrix().clone().symmetric_eigenvalues();
        assert_eq!(eig.iter().filter(|&&e| e > 1e-9).count(), 2);
    }

    #[test]
    fn random_stabilizers_up_to_six_qubits() {
        let rho = gen_state(
            &StateKind::DepolarizedStabilizer {
                p: 0.0,
                index: None,
            },
            6,
            1,
        )
        .unwrap();
        assert!((rho.purity() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn parameter_errors() {
        assert!(gen_state(&StateKind::MixedGinibre { rank: 5 }, 2, 0).is_err());
        assert!(gen_state(&StateKind::MixedGinibre { rank: 0 }, 2, 0).is_err());
        assert!(gen_state(
            &StateKind::DepolarizedStabilizer {
                p: 1.5,
                index: None
            },
            2,
            0
        )
        .is_err());
        assert!(gen_state(&StateKind::Stabilizer { index: 6 }, 1, 0).is_err());
        assert!(gen_state(&StateKind::PureHaar, 7, 0).is_err());
        assert!(gen_state(&StateKind::FromFile("/nonexistent/state.json".into()), 1, 0).is_err());
    }
}
