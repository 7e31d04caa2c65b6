//! Conditional (relative) states of the rest and their emergent dynamics.
//!
//! Conditioning works on the branch decomposition of the global state: the
//! amplitudes are expanded over the clock hands (through the dual frame when
//! the hands are not orthogonal), and the state conditioned on reading `k`
//! is the ensemble of branches weighted by their squared overlap with hand
//! `k`. For orthonormal hands only branch `k` survives, reproducing the
//! projective conditioning exactly, and the result is pure. For
//! Gaussian-overlap hands, neighboring branches leak in and the conditional
//! state is mixed: a hand that cannot be perfectly distinguished from its
//! neighbors cannot select a single branch.

use crate::clock::FiniteClock;
use crate::error::{Error, Result};
use crate::qla::{
    c64, eig_hermitian, ensure_hermitian, expm_hermitian, fidelity_state_density, purity, CMatrix,
    CVector, StateVector,
};
use crate::tol;
use crate::universe::HistoryState;

/// The clock-indexed family of conditional rest states.
///
/// Entry `k` is `None` when reading `k` has no support in the state (a zero
/// branch weight under an orthonormal clock); gaps are recorded explicitly
/// so downstream checks can see them.
#[derive(Clone, Debug)]
pub struct RelativeStateFamily {
    times: Vec<f64>,
    rhos: Vec<Option<CMatrix>>,
    purities: Vec<Option<f64>>,
    rest_dim: usize,
}

impl RelativeStateFamily {
    pub fn len(&self) -> usize {
        self.rhos.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rhos.is_empty()
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn rest_dim(&self) -> usize {
        self.rest_dim
    }

    pub fn rho(&self, k: usize) -> Option<&CMatrix> {
        self.rhos[k].as_ref()
    }

    pub fn rhos(&self) -> &[Option<CMatrix>] {
        &self.rhos
    }

    pub fn purities(&self) -> &[Option<f64>] {
        &self.purities
    }

    pub fn gap_count(&self) -> usize {
        self.rhos.iter().filter(|r| r.is_none()).count()
    }

    pub fn min_purity(&self) -> Option<f64> {
        self.purities
            .iter()
            .flatten()
            .copied()
            .min_by(|a, b| a.partial_cmp(b).expect("purities are finite"))
    }

    pub fn max_purity(&self) -> Option<f64> {
        self.purities
            .iter()
            .flatten()
            .copied()
            .max_by(|a, b| a.partial_cmp(b).expect("purities are finite"))
    }
}

/// Branch vectors of `psi` over the clock hands: the rows `v_n` of the
/// solution of `T V = M`, where `T` collects the hands as columns and `M` is
/// the `(d_C, d_R)` reshape of `psi`. Then `psi = sum_n |t_n> (x) v_n`
/// exactly; for orthonormal hands `v_n = (<t_n| (x) I) psi`.
fn branch_vectors(psi: &StateVector, clock: &FiniteClock) -> Result<Vec<CVector>> {
    let d_c = clock.dim();
    if !psi.dim().is_multiple_of(d_c) {
        return Err(Error::DimensionMismatch {
            context: "branch expansion",
            expected: d_c,
            got: psi.dim(),
        });
    }
    let d_r = psi.dim() / d_c;
    let m = CMatrix::from_fn(d_c, d_r, |c, r| psi.amplitudes()[c * d_r + r]);
    let v = clock
        .hand_matrix()
        .lu()
        .solve(&m)
        .ok_or_else(|| Error::InvalidClock {
            reason: "hand matrix is singular; cannot expand over the hands".into(),
        })?;
    Ok((0..d_c)
        .map(|n| v.row(n).transpose().into_owned())
        .collect())
}

fn conditional_from_branches(branches: &[CVector], gram: &CMatrix, k: usize) -> Result<CMatrix> {
    let d_r = branches[0].len();
    let mut numerator = CMatrix::zeros(d_r, d_r);
    let mut denominator = 0.0;
    for (n, v) in branches.iter().enumerate() {
        let weight = gram[(k, n)].norm_sqr();
        if weight == 0.0 {
            continue;
        }
        denominator += weight * v.norm_squared();
        for i in 0..d_r {
            for j in 0..d_r {
                numerator[(i, j)] += v[i] * v[j].conj() * c64(weight, 0.0);
            }
        }
    }
    if denominator <= tol::SUPPORT_TOL {
        return Err(Error::UndefinedRelativeState {
            weight: denominator,
        });
    }
    let rho = numerator.unscale(denominator);
    Ok((&rho + rho.adjoint()).scale(0.5))
}

/// Conditional state of the rest given clock reading `k`: a normalized
/// density operator on the rest factor. Errors with
/// [`Error::UndefinedRelativeState`] when reading `k` has no support (the
/// branch weight is zero), which signals `alpha_k = 0`.
pub fn relative_state(psi: &StateVector, clock: &FiniteClock, k: usize) -> Result<CMatrix> {
    assert!(k < clock.dim(), "clock reading {k} out of range");
    let branches = branch_vectors(psi, clock)?;
    conditional_from_branches(&branches, clock.gram(), k)
}

/// Conditional states at every clock reading of an arbitrary global state.
/// Zero-support readings become explicit gaps.
pub fn relative_family_from(psi: &StateVector, clock: &FiniteClock) -> Result<RelativeStateFamily> {
    let branches = branch_vectors(psi, clock)?;
    let d_r = branches[0].len();
    let mut rhos = Vec::with_capacity(clock.dim());
    let mut purities = Vec::with_capacity(clock.dim());
    for k in 0..clock.dim() {
        match conditional_from_branches(&branches, clock.gram(), k) {
            Ok(rho) => {
                purities.push(Some(purity(&rho)));
                rhos.push(Some(rho));
            }
            Err(Error::UndefinedRelativeState { .. }) => {
                purities.push(None);
                rhos.push(None);
            }
            Err(e) => return Err(e),
        }
    }
    Ok(RelativeStateFamily {
        times: clock.times().to_vec(),
        rhos,
        purities,
        rest_dim: d_r,
    })
}

/// Conditional states at every reading of a history state's clock.
pub fn relative_family(hist: &HistoryState) -> Result<RelativeStateFamily> {
    relative_family_from(hist.psi(), hist.clock())
}

/// Central-difference residual of the emergent equation of motion
/// `d rho / dt = i [rho, H_R]`, per interior grid point:
/// `||(rho_{k+1} - rho_{k-1}) / (2 dt) - i [rho_k, H_R]||_F`.
///
/// Endpoints and points adjacent to gaps are `None`. For an exact unitary
/// family the residual is pure discretization error, second order in the
/// grid spacing.
pub fn schrodinger_residual(
    family: &RelativeStateFamily,
    h_r: &CMatrix,
) -> Result<Vec<Option<f64>>> {
    if family.len() < 3 {
        return Err(Error::InsufficientGrid {
            needed: 3,
            got: family.len(),
        });
    }
    ensure_hermitian(h_r)?;
    let times = family.times();
    let steps: Vec<f64> = times.windows(2).map(|w| w[1] - w[0]).collect();
    let mean_step = steps.iter().sum::<f64>() / steps.len() as f64;
    let deviation = steps
        .iter()
        .map(|s| (s - mean_step).abs())
        .fold(0.0, f64::max);
    if deviation > tol::GRID_UNIFORM_TOL * mean_step.abs() {
        return Err(Error::NonUniformGrid { deviation });
    }
    let grid = family.len();
    let mut residuals = vec![None; grid];
    for (k, slot) in residuals.iter_mut().enumerate().take(grid - 1).skip(1) {
        let (Some(prev), Some(here), Some(next)) =
            (family.rho(k - 1), family.rho(k), family.rho(k + 1))
        else {
            continue;
        };
        let derivative = (next - prev).unscale(2.0 * mean_step);
        let commutator = (here * h_r - h_r * here).map(|z| z * c64(0.0, 1.0));
        *slot = Some((derivative - commutator).norm());
    }
    Ok(residuals)
}

/// Per-reading fidelity of a pure family against the orbit that `h_r`
/// generates from the family's first defined state. Gaps stay `None`.
pub fn orbit_fidelities(family: &RelativeStateFamily, h_r: &CMatrix) -> Result<Vec<Option<f64>>> {
    if let Some(min) = family.min_purity() {
        if min < 1.0 - tol::PURE_FAMILY_TOL {
            return Err(Error::MixedFamily { purity: min });
        }
    }
    let anchor = family
        .rhos()
        .iter()
        .position(|r| r.is_some())
        .ok_or(Error::InsufficientGrid { needed: 1, got: 0 })?;
    let rho_a = family.rho(anchor).expect("anchor is defined");
    let spectrum = eig_hermitian(rho_a)?;
    let top = spectrum.dim() - 1;
    let phi_a = StateVector::normalized(spectrum.eigenvectors.column(top).into_owned())?;
    let t_a = family.times()[anchor];
    let mut fidelities = vec![None; family.len()];
    for (k, slot) in fidelities.iter_mut().enumerate() {
        let Some(rho) = family.rho(k) else { continue };
        let u = expm_hermitian(h_r, family.times()[k] - t_a)?;
        let evolved = phi_a.apply(&u)?;
        *slot = Some(fidelity_state_density(&evolved, rho)?);
    }
    Ok(fidelities)
}

/// Minimum orbit fidelity over the family: 1 (within 1e-9) exactly when the
/// family is the `h_r`-generated orbit of its first state. Requires a pure
/// family; mixed families are rejected (use [`schrodinger_residual`] there).
pub fn unitary_evolution_fidelity(family: &RelativeStateFamily, h_r: &CMatrix) -> Result<f64> {
    let fidelities = orbit_fidelities(family, h_r)?;
    fidelities
        .into_iter()
        .flatten()
        .min_by(|a, b| a.partial_cmp(b).expect("fidelities are finite"))
        .ok_or(Error::InsufficientGrid { needed: 1, got: 0 })
}
