//! Tolerant testing of stabilizer fidelity for mixed states.
//!
//! The crate is organized bottom-up:
//!
//! - [`gf2`]: the symplectic space F₂^{2n}, subspaces, Gram–Schmidt, isotropic covers.
//! - [`fourier`]: dense tables on F₂^{2n} and the symplectic Fourier transform.
//! - [`quantum`]: density matrices, Weyl operators, the `p`, `p̂`, `q` tables and biases.
//! - [`stabilizer`]: stabilizer states, brute-force stabilizer fidelity, Weyl sets.
//! - [`sampling`]: Monte Carlo simulation of Bell difference sampling, the
//!   ancilla-free SWAP test and the 6-copy bias estimator.
//! - [`tester`]: plans and runs the tolerant test.
//! - [`verify`]: named numerical checks of every identity and inequality used.
//! - [`cli`]: the `stabtest` command line.

pub mod cli;
pub mod error;
pub mod fourier;
pub mod gf2;
pub mod quantum;
pub mod sampling;
pub mod stabilizer;
pub mod tester;
pub mod verify;

pub use error::{Error, Result};
pub use fourier::FourierTable;
pub use gf2::{PauliVector, Subspace, SubspaceKind};
pub use quantum::{BiasReport, DensityMatrix, StateKind};
pub use stabilizer::StabilizerState;
