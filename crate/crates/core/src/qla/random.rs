//! Seeded random ensembles: Ginibre matrices and the derived Hermitian,
//! unitary (Haar), pure-state, and density-matrix samplers.
//!
//! All samplers draw from a caller-supplied RNG so that every randomized
//! experiment in the crate is reproducible from a single seed.

use nalgebra::DVector;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::qla::{c64, CMatrix, StateVector, C64};

fn standard_complex(rng: &mut impl Rng) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    c64(re, im)
}

/// Matrix of iid standard complex Gaussians (Ginibre ensemble).
pub fn random_ginibre(rows: usize, cols: usize, rng: &mut impl Rng) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| standard_complex(rng))
}

/// Haar-like random pure state: normalized complex Gaussian vector.
pub fn random_state(dim: usize, rng: &mut impl Rng) -> StateVector {
    loop {
        let v = DVector::from_fn(dim, |_, _| standard_complex(rng));
        if let Ok(state) = StateVector::normalized(v) {
            return state;
        }
    }
}

/// GUE-like random Hermitian matrix `(G + G^dag)/2`.
pub fn random_hermitian(dim: usize, rng: &mut impl Rng) -> CMatrix {
    let g = random_ginibre(dim, dim, rng);
    (&g + g.adjoint()).scale(0.5)
}

/// Haar random unitary: modified Gram-Schmidt orthonormalization of a
/// Ginibre matrix (equivalent to QR with positive-real diagonal of R).
pub fn random_unitary(dim: usize, rng: &mut impl Rng) -> CMatrix {
    loop {
        let g = random_ginibre(dim, dim, rng);
        if let Some(u) = gram_schmidt(&g) {
            return u;
        }
    }
}

fn gram_schmidt(m: &CMatrix) -> Option<CMatrix> {
    let dim = m.nrows();
    let mut q = m.clone();
    for k in 0..dim {
        for j in 0..k {
            let proj = q.column(j).dotc(&q.column(k));
            let correction = q.column(j).into_owned() * proj;
            let mut col = q.column_mut(k);
            col -= correction;
        }
        let norm = q.column(k).norm();
        if norm < 1e-10 {
            return None;
        }
        q.column_mut(k).unscale_mut(norm);
    }
    Some(q)
}

/// Random full-rank density matrix `G G^dag / Tr(G G^dag)` (Wishart).
pub fn random_density(dim: usize, rng: &mut impl Rng) -> CMatrix {
    let g = random_ginibre(dim, dim, rng);
    let w = &g * g.adjoint();
    let trace = w.trace().re;
    w.unscale(trace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qla::{hermitian_defect, unitary_defect};
    use crate::tol;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn samplers_are_deterministic_under_seed() {
        let mut a = ChaCha8Rng::seed_from_u64(7);
        let mut b = ChaCha8Rng::seed_from_u64(7);
        assert_eq!(random_hermitian(5, &mut a), random_hermitian(5, &mut b));
        assert_eq!(random_unitary(4, &mut a), random_unitary(4, &mut b));
    }

    #[test]
    fn random_hermitian_is_hermitian() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let h = random_hermitian(8, &mut rng);
        assert!(hermitian_defect(&h) < 1e-14);
    }

    #[test]
    fn random_unitary_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let u = random_unitary(8, &mut rng);
        assert!(unitary_defect(&u) < tol::UNITARY_TOL);
    }

    #[test]
    fn random_density_is_normalized_psd() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let rho = random_density(6, &mut rng);
        assert!((rho.trace().re - 1.0).abs() < 1e-12);
        assert!(hermitian_defect(&rho) < 1e-14);
        let s = crate::qla::eig_hermitian(&rho).unwrap();
        assert!(s.eigenvalues.iter().all(|&l| l > -tol::PSD_TOL));
    }

    #[test]
    fn random_state_is_normalized() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let v = random_state(10, &mut rng);
        assert!((v.amplitudes().norm() - 1.0).abs() < tol::NORM_TOL);
    }
}
