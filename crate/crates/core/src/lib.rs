//! Finite-dimensional simulation of stationary clock/rest universes.
//!
//! A "universe" here is a finite Hilbert space split into a clock factor and
//! a rest factor by a non-interacting Hamiltonian `H = H_C ⊗ I + I ⊗ H_R`.
//! The crate builds globally stationary states on such universes, extracts
//! the dynamics of the rest conditioned on clock readings, and probes what
//! happens to that dynamics under changes of the tensor-product structure.
//!
//! Module map:
//!
//! * [`qla`]: dense complex linear algebra kernel (tensor products, partial
//!   traces, Hermitian eigendecomposition, evolution unitaries, entropies).
//! * [`clock`]: finite clocks: the orthogonal Fourier-conjugate clock and
//!   the Gaussian-overlap clock with non-orthogonal hands.
//! * [`universe`]: non-interacting total Hamiltonians, their zero-energy
//!   eigenspaces, and entangled history states.
//! * [`relstate`]: conditional (relative) states of the rest, per-tick
//!   purities, and finite-difference checks of the emergent equation of
//!   motion.
//! * [`tps`]: tensor-product-structure maps, the local/non-local
//!   classification, interaction decomposition, and the end-to-end
//!   clock-ambiguity experiment.
//! * [`emergence`]: the observer/record model for the flow of time and the
//!   entanglement arrow.

pub mod clock;
pub mod emergence;
mod error;
pub mod qla;
pub mod relstate;
pub mod tol;
pub mod tps;
pub mod universe;

pub use error::{Error, Result};
