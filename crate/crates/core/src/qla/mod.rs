//! Dense complex linear algebra kernel.
//!
//! Every higher module is a thin layer over these operations: Kronecker
//! products, partial traces, Hermitian eigendecomposition, spectral matrix
//! functions, kernels, fidelities, and entropies. Storage is dense
//! throughout; the crate targets total dimensions up to a few thousand, where
//! dense `f64` linear algebra is both fastest and simplest.

mod linalg;
mod random;

pub use linalg::{
    eig_hermitian, expm_hermitian, fidelity_densities, kernel_basis, sqrtm_psd,
    von_neumann_entropy, Spectrum,
};
pub use random::{random_density, random_ginibre, random_hermitian, random_state, random_unitary};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;

use crate::error::{Error, Result};
use crate::tol;

/// Complex scalar used everywhere in the crate.
pub type C64 = Complex<f64>;
/// Dense complex matrix (operators, unitaries, density matrices).
pub type CMatrix = DMatrix<C64>;
/// Dense complex column vector (raw amplitudes).
pub type CVector = DVector<C64>;

/// Shorthand complex constructor.
pub const fn c64(re: f64, im: f64) -> C64 {
    Complex::new(re, im)
}

/// A normalized pure state on a finite Hilbert space.
///
/// The constructor enforces unit Euclidean norm within [`tol::NORM_TOL`], so
/// holding a `StateVector` is proof of normalization.
#[derive(Clone, Debug)]
pub struct StateVector {
    amplitudes: CVector,
}

impl StateVector {
    /// Wraps an already-normalized amplitude vector.
    pub fn new(amplitudes: CVector) -> Result<Self> {
        let norm = amplitudes.norm();
        let defect = (norm - 1.0).abs();
        if defect > tol::NORM_TOL {
            return Err(Error::NotNormalized { defect });
        }
        Ok(Self { amplitudes })
    }

    /// Normalizes an arbitrary nonzero vector.
    pub fn normalized(amplitudes: CVector) -> Result<Self> {
        let norm = amplitudes.norm();
        if norm < tol::ZERO_NORM_TOL {
            return Err(Error::ZeroVector { norm });
        }
        Ok(Self {
            amplitudes: amplitudes / c64(norm, 0.0),
        })
    }

    /// Computational basis vector `|k>` in dimension `dim`.
    pub fn basis(dim: usize, k: usize) -> Self {
        assert!(k < dim, "basis index {k} out of range for dimension {dim}");
        let mut amplitudes = CVector::zeros(dim);
        amplitudes[k] = c64(1.0, 0.0);
        Self { amplitudes }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> CVector {
        self.amplitudes
    }

    /// Inner product `<self|other>` (conjugate-linear in `self`).
    pub fn inner(&self, other: &StateVector) -> C64 {
        self.amplitudes.dotc(&other.amplitudes)
    }

    /// Rank-1 projector `|v><v|`.
    pub fn projector(&self) -> CMatrix {
        let v = &self.amplitudes;
        let mut p = CMatrix::zeros(v.len(), v.len());
        for i in 0..v.len() {
            for j in 0..v.len() {
                p[(i, j)] = v[i] * v[j].conj();
            }
        }
        p
    }

    /// Applies an operator and renormalizes (valid for unitaries and any map
    /// that preserves the norm up to rounding).
    pub fn apply(&self, op: &CMatrix) -> Result<Self> {
        if op.ncols() != self.dim() {
            return Err(Error::DimensionMismatch {
                context: "operator application",
                expected: op.ncols(),
                got: self.dim(),
            });
        }
        Self::normalized(op * &self.amplitudes)
    }
}

/// Kronecker product with the left factor as the slow index.
pub fn tensor(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Kronecker product of states; the left factor is the slow index, so
/// `tensor_states(|a>, |b>)` puts amplitude `a_i b_j` at index `i*dim_b + j`.
pub fn tensor_states(a: &StateVector, b: &StateVector) -> StateVector {
    let v = a.amplitudes.kronecker(&b.amplitudes);
    StateVector::normalized(v).expect("product of unit vectors has unit norm")
}

/// Which factor `partial_trace` keeps.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Keep {
    A,
    B,
}

/// Partial trace of an operator on a bipartite space with `dims = (d_A, d_B)`
/// and the A factor as the slow index.
///
/// Density-matrix callers get a Hermitian, trace-1 result whenever the input
/// is one; the arithmetic itself is valid for any operator (it computes the
/// marginal), which higher modules use on Hamiltonians.
pub fn partial_trace(rho: &CMatrix, dims: (usize, usize), keep: Keep) -> Result<CMatrix> {
    let (da, db) = dims;
    let n = da * db;
    if rho.nrows() != n || rho.ncols() != n {
        return Err(Error::DimensionMismatch {
            context: "partial_trace",
            expected: n,
            got: rho.nrows(),
        });
    }
    match keep {
        Keep::A => {
            let mut out = CMatrix::zeros(da, da);
            for a in 0..da {
                for ap in 0..da {
                    let mut acc = c64(0.0, 0.0);
                    for b in 0..db {
                        acc += rho[(a * db + b, ap * db + b)];
                    }
                    out[(a, ap)] = acc;
                }
            }
            Ok(out)
        }
        Keep::B => {
            let mut out = CMatrix::zeros(db, db);
            for b in 0..db {
                for bp in 0..db {
                    let mut acc = c64(0.0, 0.0);
                    for a in 0..da {
                        acc += rho[(a * db + b, a * db + bp)];
                    }
                    out[(b, bp)] = acc;
                }
            }
            Ok(out)
        }
    }
}

/// `|<a|b>|^2` for pure states.
pub fn fidelity_states(a: &StateVector, b: &StateVector) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            context: "fidelity_states",
            expected: a.dim(),
            got: b.dim(),
        });
    }
    Ok(a.inner(b).norm_sqr())
}

/// `<a|rho|a>`: fidelity between a pure state and a density matrix.
pub fn fidelity_state_density(a: &StateVector, rho: &CMatrix) -> Result<f64> {
    if rho.nrows() != a.dim() || rho.ncols() != a.dim() {
        return Err(Error::DimensionMismatch {
            context: "fidelity_state_density",
            expected: a.dim(),
            got: rho.nrows(),
        });
    }
    let v = a.amplitudes();
    Ok(v.dotc(&(rho * v)).re.clamp(0.0, 1.0))
}

/// `Tr(rho^2)`, equal to the squared Frobenius norm for Hermitian input.
pub fn purity(rho: &CMatrix) -> f64 {
    let n = rho.norm();
    n * n
}

/// Frobenius norm of `(m - m^dag)`; zero exactly when `m` is Hermitian.
pub fn hermitian_defect(m: &CMatrix) -> f64 {
    (m - m.adjoint()).norm()
}

/// Frobenius norm of `(m^dag m - I)`; zero exactly when `m` is unitary.
pub fn unitary_defect(m: &CMatrix) -> f64 {
    let d = m.ncols();
    (m.adjoint() * m - CMatrix::identity(d, d)).norm()
}

/// Validates Hermiticity at [`tol::HERMITIAN_TOL`] relative to the norm.
pub fn ensure_hermitian(m: &CMatrix) -> Result<()> {
    let defect = hermitian_defect(m);
    if defect > tol::HERMITIAN_TOL * m.norm().max(1.0) {
        return Err(Error::NotHermitian { defect });
    }
    Ok(())
}

/// Validates unitarity at [`tol::UNITARY_TOL`].
pub fn ensure_unitary(m: &CMatrix) -> Result<()> {
    let defect = unitary_defect(m);
    if defect > tol::UNITARY_TOL {
        return Err(Error::NotUnitary { defect });
    }
    Ok(())
}

pub fn identity(d: usize) -> CMatrix {
    CMatrix::identity(d, d)
}

/// Standard Pauli matrices: `[s_i, s_j] = 2i e_ijk s_k`, `s_i^2 = I`.
pub fn pauli_x() -> CMatrix {
    CMatrix::from_row_slice(
        2,
        2,
        &[c64(0.0, 0.0), c64(1.0, 0.0), c64(1.0, 0.0), c64(0.0, 0.0)],
    )
}

pub fn pauli_y() -> CMatrix {
    CMatrix::from_row_slice(
        2,
        2,
        &[c64(0.0, 0.0), c64(0.0, -1.0), c64(0.0, 1.0), c64(0.0, 0.0)],
    )
}

pub fn pauli_z() -> CMatrix {
    CMatrix::from_row_slice(
        2,
        2,
        &[c64(1.0, 0.0), c64(0.0, 0.0), c64(0.0, 0.0), c64(-1.0, 0.0)],
    )
}

/// `(|0> + |1>)/sqrt(2)`.
pub fn ket_plus() -> StateVector {
    StateVector::normalized(CVector::from_vec(vec![c64(1.0, 0.0), c64(1.0, 0.0)])).expect("nonzero")
}

/// `(|0> - |1>)/sqrt(2)`.
pub fn ket_minus() -> StateVector {
    StateVector::normalized(CVector::from_vec(vec![c64(1.0, 0.0), c64(-1.0, 0.0)]))
        .expect("nonzero")
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn diag4(entries: [f64; 4]) -> CMatrix {
        CMatrix::from_diagonal(&CVector::from_vec(
            entries.iter().map(|&x| c64(x, 0.0)).collect(),
        ))
    }

    #[test]
    fn tensor_of_identities_is_identity() {
        let i2 = identity(2);
        assert_relative_eq!((tensor(&i2, &i2) - identity(4)).norm(), 0.0);
    }

    #[test]
    fn kronecker_sum_of_pauli_z_is_diag_2_0_0_minus_2() {
        let h = tensor(&pauli_z(), &identity(2)) + tensor(&identity(2), &pauli_z());
        assert!((h - diag4([2.0, 0.0, 0.0, -2.0])).norm() < 1e-15);
    }

    #[test]
    fn tensor_states_uses_left_slow_index() {
        let v = tensor_states(&StateVector::basis(2, 0), &StateVector::basis(2, 1));
        let e1 = StateVector::basis(4, 1);
        assert_relative_eq!(fidelity_states(&v, &e1).unwrap(), 1.0, epsilon = 1e-15);
        assert_relative_eq!(v.amplitudes()[1].re, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn partial_trace_of_product_basis_state() {
        let v = tensor_states(&StateVector::basis(2, 0), &StateVector::basis(2, 1));
        let reduced = partial_trace(&v.projector(), (2, 2), Keep::B).unwrap();
        let expected = StateVector::basis(2, 1).projector();
        assert!((reduced - expected).norm() < 1e-15);
    }

    #[test]
    fn partial_trace_of_bell_state_is_maximally_mixed() {
        // (|01> + |10>)/sqrt(2); the 4x4 projector has 1/2 entries at
        // indices {1,2}x{1,2}, and both marginals are I/2.
        let bell = StateVector::normalized(CVector::from_vec(vec![
            c64(0.0, 0.0),
            c64(1.0, 0.0),
            c64(1.0, 0.0),
            c64(0.0, 0.0),
        ]))
        .unwrap();
        let reduced = partial_trace(&bell.projector(), (2, 2), Keep::A).unwrap();
        assert!((reduced - identity(2).scale(0.5)).norm() < 1e-15);
    }

    #[test]
    fn partial_trace_of_factorized_operator_recovers_left_factor() {
        // For trace-1 right factor: Tr_B(rho_A x rho_B) = rho_A.
        let rho_a = StateVector::basis(2, 0).projector();
        let rho_b = ket_plus().projector();
        let reduced = partial_trace(&tensor(&rho_a, &rho_b), (2, 2), Keep::A).unwrap();
        assert!((reduced - rho_a).norm() < 1e-15);
    }

    #[test]
    fn partial_trace_rejects_wrong_dims() {
        let rho = identity(4).scale(0.25);
        assert!(matches!(
            partial_trace(&rho, (2, 3), Keep::A),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn fidelity_is_one_on_identical_states() {
        let v = ket_plus();
        assert_relative_eq!(fidelity_states(&v, &v).unwrap(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn fidelity_is_zero_on_orthogonal_states() {
        let f = fidelity_states(&StateVector::basis(2, 0), &StateVector::basis(2, 1)).unwrap();
        assert_relative_eq!(f, 0.0);
    }

    #[test]
    fn fidelity_plus_zero_is_one_half() {
        let f = fidelity_states(&ket_plus(), &StateVector::basis(2, 0)).unwrap();
        assert_relative_eq!(f, 0.5, epsilon = 1e-15);
    }

    #[test]
    fn state_constructor_rejects_unnormalized_input() {
        let v = CVector::from_vec(vec![c64(1.0, 0.0), c64(1.0, 0.0)]);
        assert!(matches!(
            StateVector::new(v),
            Err(Error::NotNormalized { .. })
        ));
    }

    #[test]
    fn normalized_rejects_zero_vector() {
        let v = CVector::zeros(3);
        assert!(matches!(
            StateVector::normalized(v),
            Err(Error::ZeroVector { .. })
        ));
    }

    #[test]
    fn pauli_algebra_standard_conventions() {
        // [s_x, s_y] = 2i s_z and s_x^2 = I.
        let comm = pauli_x() * pauli_y() - pauli_y() * pauli_x();
        assert!((comm - pauli_z().map(|z| z * c64(0.0, 2.0))).norm() < 1e-15);
        assert!((pauli_x() * pauli_x() - identity(2)).norm() < 1e-15);
    }

    #[test]
    fn purity_matches_trace_of_square() {
        let rho = identity(2).scale(0.5);
        assert_relative_eq!(purity(&rho), 0.5, epsilon = 1e-15);
        assert_relative_eq!(purity(&ket_plus().projector()), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn defects_flag_non_hermitian_and_non_unitary() {
        let m = CMatrix::from_row_slice(
            2,
            2,
            &[c64(0.0, 0.0), c64(1.0, 0.0), c64(0.0, 0.0), c64(0.0, 0.0)],
        );
        assert!(hermitian_defect(&m) > 1.0);
        assert!(unitary_defect(&m) > 0.5);
        assert!(ensure_hermitian(&pauli_y()).is_ok());
        assert!(ensure_unitary(&pauli_y()).is_ok());
    }
}
