//! Finite-dimensional clocks.
//!
//! Two constructions are provided. The ideal clock is the discrete Fourier
//! pair: an equally spaced energy ladder `H_C = diag(0, dE, ..., (d-1)dE)`
//! whose hand states are the Fourier-conjugate basis, so the hands are
//! orthonormal and evolution shifts one hand to the next. The Gaussian-
//! overlap clock has hands whose mutual overlaps decay exponentially in
//! their time separation; its hands are not orthogonal, which is what makes
//! the conditional states of the rest mixed.

use crate::error::{Error, Result};
use crate::qla::{c64, eig_hermitian, ensure_unitary, CMatrix, CVector, StateVector, C64};
use crate::tol;

/// Which clock construction a [`FiniteClock`] came from.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ClockKind {
    /// Fourier-conjugate clock with orthonormal hands and level spacing
    /// `delta_e`.
    Ideal { delta_e: f64 },
    /// Non-orthogonal clock with hand overlaps `exp(-gamma |t_n - t_m|)` on
    /// the uniform grid `t_k = k * spacing`.
    Gaussian { gamma: f64, spacing: f64 },
}

/// A finite clock: `d` hand states with their reading times, plus the clock
/// Hamiltonian when the construction defines one.
#[derive(Clone, Debug)]
pub struct FiniteClock {
    kind: ClockKind,
    states: Vec<StateVector>,
    times: Vec<f64>,
    hamiltonian: Option<CMatrix>,
    gram: CMatrix,
}

impl FiniteClock {
    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn kind(&self) -> ClockKind {
        self.kind
    }

    pub fn is_ideal(&self) -> bool {
        matches!(self.kind, ClockKind::Ideal { .. })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn time(&self, k: usize) -> f64 {
        self.times[k]
    }

    pub fn states(&self) -> &[StateVector] {
        &self.states
    }

    pub fn state(&self, k: usize) -> &StateVector {
        &self.states[k]
    }

    /// Clock Hamiltonian; `None` for Gaussian clocks, which are defined by
    /// their overlap structure rather than by a generator.
    pub fn hamiltonian(&self) -> Option<&CMatrix> {
        self.hamiltonian.as_ref()
    }

    /// Gram matrix of the hands, `gram[(n, m)] = <t_n|t_m>`.
    pub fn gram(&self) -> &CMatrix {
        &self.gram
    }

    /// Matrix whose column `k` is hand state `k`.
    pub fn hand_matrix(&self) -> CMatrix {
        let d = self.dim();
        let n = self.states[0].dim();
        CMatrix::from_fn(n, d, |i, k| self.states[k].amplitudes()[i])
    }

    /// The same clock re-expressed after a unitary change of basis `p` on
    /// the clock factor: hands become `p^dag |t_k>`, the Hamiltonian is
    /// conjugated, and times and overlaps are unchanged.
    pub fn conjugated(&self, p: &CMatrix) -> Result<Self> {
        if p.nrows() != self.dim() {
            return Err(Error::DimensionMismatch {
                context: "clock conjugation",
                expected: self.dim(),
                got: p.nrows(),
            });
        }
        ensure_unitary(p)?;
        let pd = p.adjoint();
        let states = self
            .states
            .iter()
            .map(|s| StateVector::normalized(&pd * s.amplitudes()))
            .collect::<Result<Vec<_>>>()?;
        let hamiltonian = self.hamiltonian.as_ref().map(|h| &pd * h * p);
        Ok(Self {
            kind: self.kind,
            states,
            times: self.times.clone(),
            hamiltonian,
            gram: self.gram.clone(),
        })
    }
}

fn gram_of(states: &[StateVector]) -> CMatrix {
    let d = states.len();
    CMatrix::from_fn(d, d, |n, m| states[n].inner(&states[m]))
}

/// Ideal clock: `H_C = diag(0, dE, ..., (d-1)dE)` with the Fourier hands
/// `|t_k> = d^{-1/2} sum_n exp(-i e_n t_k) |n>` at times `t_k = 2 pi k /
/// (d dE)`. Evolution for one grid spacing maps each hand exactly onto the
/// next (cyclically), which is what lets a stationary entangled state carry
/// a whole orbit of the rest.
pub fn ideal_finite_clock(d: usize, delta_e: f64) -> Result<FiniteClock> {
    if d < 2 {
        return Err(Error::InvalidClock {
            reason: format!("need at least 2 hands, got {d}"),
        });
    }
    if !(delta_e > 0.0 && delta_e.is_finite()) {
        return Err(Error::InvalidClock {
            reason: format!("energy step must be positive and finite, got {delta_e}"),
        });
    }
    let energies: Vec<f64> = (0..d).map(|k| k as f64 * delta_e).collect();
    let times: Vec<f64> = (0..d)
        .map(|k| 2.0 * std::f64::consts::PI * k as f64 / (d as f64 * delta_e))
        .collect();
    let norm = 1.0 / (d as f64).sqrt();
    let states: Vec<StateVector> = (0..d)
        .map(|k| {
            let v = CVector::from_fn(d, |n, _| C64::from_polar(norm, -energies[n] * times[k]));
            StateVector::new(v).expect("Fourier vectors are unit norm")
        })
        .collect();
    let hamiltonian = CMatrix::from_fn(d, d, |i, j| {
        if i == j {
            c64(energies[i], 0.0)
        } else {
            c64(0.0, 0.0)
        }
    });
    let gram = gram_of(&states);
    Ok(FiniteClock {
        kind: ClockKind::Ideal { delta_e },
        states,
        times,
        hamiltonian: Some(hamiltonian),
        gram,
    })
}

/// Gaussian-overlap clock: hands with `<t_n|t_m> = exp(-gamma spacing
/// |n - m|)` at times `t_k = k * spacing`, realized as rows of the
/// symmetric square root of the overlap Gram matrix (so `L L^dag = G` by
/// construction). The overlap is symmetrized with the absolute value so the
/// Gram matrix is Hermitian.
pub fn gaussian_clock(d: usize, gamma: f64, spacing: f64) -> Result<FiniteClock> {
    if d < 2 {
        return Err(Error::InvalidClock {
            reason: format!("need at least 2 hands, got {d}"),
        });
    }
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(Error::InvalidClock {
            reason: format!("overlap rate must be positive and finite, got {gamma}"),
        });
    }
    if !(spacing > 0.0 && spacing.is_finite()) {
        return Err(Error::InvalidClock {
            reason: format!("grid spacing must be positive and finite, got {spacing}"),
        });
    }
    let kernel = CMatrix::from_fn(d, d, |n, m| {
        let sep = (n as f64 - m as f64).abs() * spacing;
        c64((-gamma * sep).exp(), 0.0)
    });
    let spectrum = eig_hermitian(&kernel)?;
    let min_eigenvalue = spectrum.eigenvalues[0];
    if min_eigenvalue <= tol::HERMITIAN_TOL {
        return Err(Error::GramNotPositiveDefinite { min_eigenvalue });
    }
    let factor = spectrum.map_eigenvalues(|lambda| c64(lambda.sqrt(), 0.0));
    let states: Vec<StateVector> = (0..d)
        .map(|k| StateVector::normalized(factor.row(k).transpose().into_owned()))
        .collect::<Result<Vec<_>>>()?;
    let times: Vec<f64> = (0..d).map(|k| k as f64 * spacing).collect();
    let gram = gram_of(&states);
    Ok(FiniteClock {
        kind: ClockKind::Gaussian { gamma, spacing },
        states,
        times,
        hamiltonian: None,
        gram,
    })
}

/// The clock-reading observable `T_C = sum_k t_k |t_k><t_k|` of an ideal
/// clock, together with the finite-dimensional defect of the canonical
/// commutation relation.
#[derive(Clone, Debug)]
pub struct ClockObservable {
    t_c: CMatrix,
    times: Vec<f64>,
    commutator_defect: f64,
}

impl ClockObservable {
    pub fn operator(&self) -> &CMatrix {
        &self.t_c
    }

    /// Eigenvalues of the observable: the reading times.
    pub fn times(&self) -> &[f64] {
        &self.times
    }

    /// `||[H_C, T_C] - iI||_F`: how far the finite pair is from the
    /// continuum conjugacy. Reported as a diagnostic, never asserted zero;
    /// no finite-dimensional pair satisfies the relation exactly.
    pub fn commutator_defect(&self) -> f64 {
        self.commutator_defect
    }
}

/// Builds the reading observable of an ideal clock. Gaussian hands are not
/// orthogonal, so no projective observable reads them and the construction
/// is rejected.
pub fn clock_observable(clock: &FiniteClock) -> Result<ClockObservable> {
    if !clock.is_ideal() {
        return Err(Error::InvalidClock {
            reason: "reading observable requires orthogonal hands (ideal kind only)".into(),
        });
    }
    let d = clock.dim();
    let mut t_c = CMatrix::zeros(d, d);
    for k in 0..d {
        t_c += clock.state(k).projector().scale(clock.time(k));
    }
    let h_c = clock
        .hamiltonian()
        .expect("ideal clocks carry a Hamiltonian");
    let commutator = h_c * &t_c - &t_c * h_c;
    let defect = (commutator - CMatrix::identity(d, d).map(|x| x * c64(0.0, 1.0))).norm();
    Ok(ClockObservable {
        t_c,
        times: clock.times().to_vec(),
        commutator_defect: defect,
    })
}
