//! Tensor product structure changes.
//!
//! A unitary `W` on the joint space relabels which degrees of freedom count
//! as "clock" and which as "rest": states map by `W†`, operators by
//! conjugation, so all matrix elements are preserved and only the
//! factorization changes. This module classifies such relabelings (local
//! product maps leave the factorization equivalent, nonlocal ones do not),
//! splits any Hermitian operator into identity + local parts + a
//! traceless-marginal interaction remainder, and runs the end-to-end
//! experiment showing that a nonlocal relabeling of a non-interacting
//! universe manufactures an interaction and breaks the unitary evolution of
//! the relative states read off the new clock factor.

use crate::clock::FiniteClock;
use crate::qla::{
    eig_hermitian, ensure_hermitian, ensure_unitary, expm_hermitian, identity, partial_trace,
    random_hermitian, random_unitary, tensor, CMatrix, Keep, StateVector,
};
use crate::relstate::{orbit_fidelities, relative_family_from, schrodinger_residual};
use crate::universe::{constraint_residual, UniverseHamiltonian};
use crate::{tol, Error, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// A change of tensor product structure: a unitary `W` on the joint space
/// together with the factor dimensions it is meant to act across.
#[derive(Debug, Clone)]
pub struct TpsMap {
    w: CMatrix,
    partition: (usize, usize),
}

impl TpsMap {
    /// Wraps a unitary as a structure map over the given partition.
    pub fn new(w: CMatrix, partition: (usize, usize)) -> Result<Self> {
        let (d_a, d_b) = partition;
        let dim = d_a * d_b;
        if !w.is_square() || w.nrows() != dim {
            return Err(Error::DimensionMismatch {
                context: "structure map",
                expected: dim,
                got: w.nrows(),
            });
        }
        ensure_unitary(&w)?;
        Ok(Self { w, partition })
    }

    /// The identity relabeling: nothing changes.
    pub fn trivial(partition: (usize, usize)) -> Self {
        let (d_a, d_b) = partition;
        Self {
            w: identity(d_a * d_b),
            partition,
        }
    }

    /// Builds `W = P ⊗ Q` from unitaries on the two factors.
    pub fn from_local(p: &CMatrix, q: &CMatrix) -> Result<Self> {
        ensure_unitary(p)?;
        ensure_unitary(q)?;
        let partition = (p.nrows(), q.nrows());
        Ok(Self {
            w: tensor(p, q),
            partition,
        })
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.w
    }

    pub fn partition(&self) -> (usize, usize) {
        self.partition
    }

    pub fn dim(&self) -> usize {
        self.partition.0 * self.partition.1
    }

    /// Relabels a state: `psi ↦ W† psi`.
    pub fn apply_to_state(&self, psi: &StateVector) -> Result<StateVector> {
        psi.apply(&self.w.adjoint())
    }

    /// Relabels an operator: `H ↦ W† H W`, preserving every matrix element
    /// between relabeled states.
    pub fn apply_to_operator(&self, h: &CMatrix) -> Result<CMatrix> {
        if !h.is_square() || h.nrows() != self.dim() {
            return Err(Error::DimensionMismatch {
                context: "operator relabeling",
                expected: self.dim(),
                got: h.nrows(),
            });
        }
        Ok(self.w.adjoint() * h * &self.w)
    }

    /// The map that applies `self` first and `next` second; its matrix is
    /// `W_self · W_next`, so conjugations compose in application order.
    pub fn then(&self, next: &TpsMap) -> Result<TpsMap> {
        if self.partition != next.partition {
            return Err(Error::DimensionMismatch {
                context: "structure map composition",
                expected: self.dim(),
                got: next.dim(),
            });
        }
        TpsMap::new(&self.w * &next.w, self.partition)
    }
}

/// The unique split `H = c0·I + H_A⊗I + I⊗H_B + H_int` in which the local
/// parts are traceless and both marginals of the interaction vanish.
#[derive(Debug, Clone)]
pub struct LocalDecomposition {
    c0: f64,
    h_a: CMatrix,
    h_b: CMatrix,
    h_int: CMatrix,
    interaction_norm: f64,
    partition: (usize, usize),
}

impl LocalDecomposition {
    /// Coefficient of the identity.
    pub fn identity_coefficient(&self) -> f64 {
        self.c0
    }

    /// Traceless local term on the first factor.
    pub fn part_a(&self) -> &CMatrix {
        &self.h_a
    }

    /// Traceless local term on the second factor.
    pub fn part_b(&self) -> &CMatrix {
        &self.h_b
    }

    /// Interaction remainder; both its partial traces vanish.
    pub fn interaction(&self) -> &CMatrix {
        &self.h_int
    }

    /// Frobenius norm of the interaction remainder.
    pub fn interaction_norm(&self) -> f64 {
        self.interaction_norm
    }

    pub fn partition(&self) -> (usize, usize) {
        self.partition
    }

    /// Reassembles `c0·I + H_A⊗I + I⊗H_B + H_int`.
    pub fn reconstruct(&self) -> CMatrix {
        let (d_a, d_b) = self.partition;
        let mut h = tensor(&self.h_a, &identity(d_b)) + tensor(&identity(d_a), &self.h_b);
        h += &self.h_int;
        for k in 0..h.nrows() {
            h[(k, k)] += self.c0;
        }
        h
    }
}

/// Splits a Hermitian operator across a partition into identity, traceless
/// local parts, and a traceless-marginal interaction remainder. The split is
/// unique under those conditions, so `interaction_norm` is a well-defined
/// measure of how non-local the operator is.
pub fn decompose_local(h: &CMatrix, partition: (usize, usize)) -> Result<LocalDecomposition> {
    let (d_a, d_b) = partition;
    let dim = d_a * d_b;
    if !h.is_square() || h.nrows() != dim {
        return Err(Error::DimensionMismatch {
            context: "local decomposition",
            expected: dim,
            got: h.nrows(),
        });
    }
    ensure_hermitian(h)?;
    let c0 = h.trace().re / dim as f64;
    let mut shifted = h.clone();
    for k in 0..dim {
        shifted[(k, k)] -= c0;
    }
    let h_a = partial_trace(&shifted, partition, Keep::A)?.unscale(d_b as f64);
    let h_b = partial_trace(&shifted, partition, Keep::B)?.unscale(d_a as f64);
    let h_int = shifted - tensor(&h_a, &identity(d_b)) - tensor(&identity(d_a), &h_b);
    let interaction_norm = h_int.norm();
    Ok(LocalDecomposition {
        c0,
        h_a,
        h_b,
        h_int,
        interaction_norm,
        partition,
    })
}

/// Operator Schmidt coefficients of a joint-space operator across a
/// partition, descending. These are the singular values of the realignment
/// that groups the two row indices of `W[(a b), (a' b')]` together; the
/// operator is a product `P ⊗ Q` exactly when one coefficient is nonzero.
pub fn operator_schmidt_values(w: &CMatrix, partition: (usize, usize)) -> Result<Vec<f64>> {
    let (d_a, d_b) = partition;
    let dim = d_a * d_b;
    if !w.is_square() || w.nrows() != dim {
        return Err(Error::DimensionMismatch {
            context: "operator Schmidt values",
            expected: dim,
            got: w.nrows(),
        });
    }
    let realigned = CMatrix::from_fn(d_a * d_a, d_b * d_b, |row, col| {
        let (a, a2) = (row / d_a, row % d_a);
        let (b, b2) = (col / d_b, col % d_b);
        w[(a * d_b + b, a2 * d_b + b2)]
    });
    // Eigenvalues of the Hermitian dilation [[0, R], [R†, 0]] are ±(singular
    // values of R), padded with zeros. Unlike the Gram matrix R†R this keeps
    // absolute accuracy near zero, so exact products stay rank 1 at the
    // relative cutoff.
    let (rows, cols) = (realigned.nrows(), realigned.ncols());
    let mut dilation = CMatrix::zeros(rows + cols, rows + cols);
    dilation
        .view_mut((0, rows), (rows, cols))
        .copy_from(&realigned);
    dilation
        .view_mut((rows, 0), (cols, rows))
        .copy_from(&realigned.adjoint());
    let spectrum = eig_hermitian(&dilation)?;
    let count = rows.min(cols);
    let values: Vec<f64> = spectrum
        .eigenvalues
        .iter()
        .rev()
        .take(count)
        .map(|lambda| lambda.max(0.0))
        .collect();
    Ok(values)
}

/// Number of operator Schmidt coefficients above `cutoff` relative to the
/// largest one.
pub fn operator_schmidt_rank(values: &[f64], cutoff: f64) -> usize {
    let Some(top) = values.first().copied() else {
        return 0;
    };
    if top <= 0.0 {
        return 0;
    }
    values.iter().filter(|v| **v > cutoff * top).count()
}

/// Whether the map is a product of factor-local unitaries (up to phase),
/// decided by operator Schmidt rank 1 at the given relative cutoff. A local
/// map relabels each factor separately, so the new structure is equivalent
/// to the old one: at worst it is the same universe with a poorer clock.
pub fn is_local_product(map: &TpsMap, cutoff: f64) -> Result<bool> {
    let values = operator_schmidt_values(map.matrix(), map.partition())?;
    Ok(operator_schmidt_rank(&values, cutoff) == 1)
}

/// Which kind of structure map to sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Locality {
    Local,
    Nonlocal,
}

/// Samples `W = P ⊗ Q` with independent Haar-like factors, returning the map
/// together with the factors so callers can conjugate clocks consistently.
pub fn random_local_tps(
    partition: (usize, usize),
    seed: u64,
) -> Result<(TpsMap, CMatrix, CMatrix)> {
    let (d_a, d_b) = partition;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = random_unitary(d_a, &mut rng);
    let q = random_unitary(d_b, &mut rng);
    let map = TpsMap::from_local(&p, &q)?;
    Ok((map, p, q))
}

/// Samples a structure map, deterministic in the seed. Local maps are
/// factor products; nonlocal maps are `exp(-i(A⊗I + I⊗B + strength·V))`
/// with `V` a unit-norm coupling whose marginals vanish, so `strength`
/// directly dials how far the map is from any product.
pub fn random_tps(
    partition: (usize, usize),
    locality: Locality,
    strength: f64,
    seed: u64,
) -> Result<TpsMap> {
    assert!(
        strength >= 0.0 && strength.is_finite(),
        "coupling strength must be finite and nonnegative"
    );
    let (d_a, d_b) = partition;
    match locality {
        Locality::Local => Ok(random_local_tps(partition, seed)?.0),
        Locality::Nonlocal => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let local_a = random_hermitian(d_a, &mut rng);
            let local_b = random_hermitian(d_b, &mut rng);
            let coupling = loop {
                let raw = random_hermitian(d_a * d_b, &mut rng);
                let split = decompose_local(&raw, partition)?;
                if split.interaction_norm() > 1e-6 {
                    break split.interaction().unscale(split.interaction_norm());
                }
            };
            let generator = tensor(&local_a, &identity(d_b))
                + tensor(&identity(d_a), &local_b)
                + coupling.scale(strength);
            TpsMap::new(expm_hermitian(&generator, 1.0)?, partition)
        }
    }
}

/// Outcome of relabeling a stationary universe and reading it with a clock
/// in the new first factor.
#[derive(Debug, Clone)]
pub struct AmbiguityReport {
    input_residual: f64,
    interaction_norm: f64,
    local_map: bool,
    min_orbit_fidelity: f64,
    max_eom_residual: f64,
    times: Vec<f64>,
    orbit_fidelities: Vec<Option<f64>>,
    eom_residuals: Vec<Option<f64>>,
}

impl AmbiguityReport {
    /// Constraint residual of the input state (diagnostic; small by
    /// precondition).
    pub fn input_residual(&self) -> f64 {
        self.input_residual
    }

    /// Interaction norm of the relabeled total Hamiltonian.
    pub fn interaction_norm(&self) -> f64 {
        self.interaction_norm
    }

    /// Whether the map was a factor-local product.
    pub fn local_map(&self) -> bool {
        self.local_map
    }

    /// Worst fidelity of the new relative family against the orbit its own
    /// local rest generator produces; 1 means the relabeled universe still
    /// looks like closed unitary evolution.
    pub fn min_orbit_fidelity(&self) -> f64 {
        self.min_orbit_fidelity
    }

    /// Largest central-difference equation-of-motion residual against the
    /// new local rest generator.
    pub fn max_eom_residual(&self) -> f64 {
        self.max_eom_residual
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn orbit_fidelities(&self) -> &[Option<f64>] {
        &self.orbit_fidelities
    }

    pub fn eom_residuals(&self) -> &[Option<f64>] {
        &self.eom_residuals
    }
}

/// Relabels a stationary universe by `map`, splits the new total Hamiltonian
/// across the same partition, conditions the relabeled state on the supplied
/// clock, and scores the resulting family against the new local rest
/// generator. A local map reports zero interaction and fidelity 1 (with the
/// clock conjugated to match); a generic nonlocal map manufactures an
/// interaction term, and the family stops being a closed unitary orbit.
pub fn clock_ambiguity_experiment(
    universe: &UniverseHamiltonian,
    psi: &StateVector,
    map: &TpsMap,
    new_clock: &FiniteClock,
) -> Result<AmbiguityReport> {
    let input_residual = constraint_residual(psi, universe)?;
    if input_residual > tol::EXPERIMENT_STATIONARITY_TOL {
        return Err(Error::NotStationary {
            reason: format!(
                "input state has constraint residual {input_residual:.3e}, above {:.1e}",
                tol::EXPERIMENT_STATIONARITY_TOL
            ),
        });
    }
    if map.partition() != universe.partition() {
        return Err(Error::DimensionMismatch {
            context: "experiment partition",
            expected: universe.partition().0 * universe.partition().1,
            got: map.dim(),
        });
    }
    if new_clock.dim() != map.partition().0 {
        return Err(Error::DimensionMismatch {
            context: "experiment clock",
            expected: map.partition().0,
            got: new_clock.dim(),
        });
    }
    let h_new = map.apply_to_operator(universe.total())?;
    let psi_new = map.apply_to_state(psi)?;
    let split = decompose_local(&h_new, map.partition())?;
    let local_map = is_local_product(map, tol::SCHMIDT_CUTOFF)?;
    let family = relative_family_from(&psi_new, new_clock)?;
    let fidelities = orbit_fidelities(&family, split.part_b())?;
    let residuals = schrodinger_residual(&family, split.part_b())?;
    let min_orbit_fidelity = fidelities
        .iter()
        .flatten()
        .copied()
        .fold(f64::INFINITY, f64::min);
    let max_eom_residual = residuals.iter().flatten().copied().fold(0.0, f64::max);
    Ok(AmbiguityReport {
        input_residual,
        interaction_norm: split.interaction_norm(),
        local_map,
        min_orbit_fidelity,
        max_eom_residual,
        times: family.times().to_vec(),
        orbit_fidelities: fidelities,
        eom_residuals: residuals,
    })
}
