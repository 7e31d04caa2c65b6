//! Observer model: a memory of blank registers records a measured sequence,
//! one register per step, while the observed system advances by a fixed
//! permutation. The whole sequence embeds statically as history-state
//! branches; relative states at different clock readings then contain ever
//! longer record chains, and the entanglement across the memory|observed cut
//! never decreases. Record states are kept sparse (amplitudes on explicit
//! configurations), so hundred-step histories stay cheap even though the
//! dense joint space is astronomically large.

use std::collections::BTreeMap;

use crate::clock::FiniteClock;
use crate::qla::{c64, CMatrix, CVector, StateVector, C64};
use crate::universe::{HistoryState, Weights};
use crate::{tol, Error, Result};

/// The record-keeping setup: how many steps, how many observable symbols,
/// and the permutation the observed system undergoes after each record.
#[derive(Debug, Clone)]
pub struct ObserverModel {
    n_steps: usize,
    d_a: usize,
    permutation: Vec<usize>,
}

impl ObserverModel {
    /// Model whose observed system advances cyclically: symbol `i` becomes
    /// `i + 1 mod d_a` after each record.
    pub fn cyclic(n_steps: usize, d_a: usize) -> Result<Self> {
        let permutation = (0..d_a).map(|i| (i + 1) % d_a).collect();
        Self::with_permutation(n_steps, d_a, permutation)
    }

    /// Model with an arbitrary permutation on the observed symbols.
    pub fn with_permutation(n_steps: usize, d_a: usize, permutation: Vec<usize>) -> Result<Self> {
        if d_a == 0 {
            return Err(Error::ModelViolation {
                reason: "observed system needs at least one symbol".into(),
            });
        }
        if d_a > u8::MAX as usize {
            return Err(Error::ModelViolation {
                reason: format!("at most {} symbols are supported", u8::MAX),
            });
        }
        let mut seen = vec![false; d_a];
        if permutation.len() != d_a || permutation.iter().any(|&i| i >= d_a) {
            return Err(Error::ModelViolation {
                reason: "permutation must map 0..d_a onto itself".into(),
            });
        }
        for &i in &permutation {
            if seen[i] {
                return Err(Error::ModelViolation {
                    reason: "permutation repeats a symbol".into(),
                });
            }
            seen[i] = true;
        }
        Ok(Self {
            n_steps,
            d_a,
            permutation,
        })
    }

    pub fn n_steps(&self) -> usize {
        self.n_steps
    }

    /// Number of observable symbols.
    pub fn symbol_count(&self) -> usize {
        self.d_a
    }

    pub fn permutation(&self) -> &[usize] {
        &self.permutation
    }

    /// Dimension of one memory register: blank plus one state per symbol.
    pub fn register_dim(&self) -> usize {
        self.d_a + 1
    }

    /// Initial state: all registers blank, observed amplitudes as given.
    pub fn initial(&self, observed_amplitudes: &[C64]) -> Result<SparseState> {
        if observed_amplitudes.len() != self.d_a {
            return Err(Error::DimensionMismatch {
                context: "initial observed amplitudes",
                expected: self.d_a,
                got: observed_amplitudes.len(),
            });
        }
        let norm: f64 = observed_amplitudes
            .iter()
            .map(|a| a.norm_sqr())
            .sum::<f64>()
            .sqrt();
        if norm < tol::ZERO_NORM_TOL {
            return Err(Error::ZeroVector { norm });
        }
        let mut terms = BTreeMap::new();
        for (symbol, amp) in observed_amplitudes.iter().enumerate() {
            if amp.norm_sqr() == 0.0 {
                continue;
            }
            terms.insert(
                Config {
                    memory: vec![0; self.n_steps],
                    observed: symbol as u8,
                },
                amp / c64(norm, 0.0),
            );
        }
        Ok(SparseState { terms })
    }

    /// Initial state with the observed system in one definite symbol.
    pub fn initial_eigenstate(&self, symbol: usize) -> Result<SparseState> {
        if symbol >= self.d_a {
            return Err(Error::DimensionMismatch {
                context: "observed symbol",
                expected: self.d_a,
                got: symbol,
            });
        }
        let mut amplitudes = vec![c64(0.0, 0.0); self.d_a];
        amplitudes[symbol] = c64(1.0, 0.0);
        self.initial(&amplitudes)
    }

    /// Dense dimension of the joint memory (x) observed space, when it fits.
    fn dense_dim(&self) -> Result<usize> {
        let base = self.register_dim();
        let mut dim: usize = self.d_a;
        for _ in 0..self.n_steps {
            dim = dim.checked_mul(base).ok_or(Error::ModelViolation {
                reason: "dense joint dimension overflows".into(),
            })?;
            if dim > MAX_DENSE_DIM {
                return Err(Error::ModelViolation {
                    reason: format!("dense joint dimension exceeds {MAX_DENSE_DIM}"),
                });
            }
        }
        Ok(dim)
    }
}

/// Largest joint dimension the dense bridge will materialize.
const MAX_DENSE_DIM: usize = 1 << 22;

/// One basis configuration: the memory register contents (0 is blank,
/// `j + 1` records symbol `j`) and the current observed symbol.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Config {
    pub memory: Vec<u8>,
    pub observed: u8,
}

impl Config {
    /// Number of written (non-blank) registers.
    pub fn written_count(&self) -> usize {
        self.memory.iter().filter(|&&m| m != 0).count()
    }

    /// True when registers `0..written` hold records and the rest are blank.
    pub fn records_fill_prefix(&self, written: usize) -> bool {
        self.memory
            .iter()
            .enumerate()
            .all(|(i, &m)| (i < written) == (m != 0))
    }
}

/// A pure state with amplitudes on explicitly listed configurations.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseState {
    terms: BTreeMap<Config, C64>,
}

impl SparseState {
    pub fn terms(&self) -> &BTreeMap<Config, C64> {
        &self.terms
    }

    pub fn amplitude(&self, config: &Config) -> C64 {
        self.terms.get(config).copied().unwrap_or(c64(0.0, 0.0))
    }

    pub fn norm(&self) -> f64 {
        self.terms
            .values()
            .map(|a| a.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn inner(&self, other: &SparseState) -> C64 {
        self.terms
            .iter()
            .map(|(config, amp)| amp.conj() * other.amplitude(config))
            .sum()
    }

    /// The one configuration carrying all amplitude, when there is exactly
    /// one term.
    pub fn sole_config(&self) -> Option<&Config> {
        if self.terms.len() == 1 {
            self.terms.keys().next()
        } else {
            None
        }
    }

    /// True when both states have the same support and amplitudes within
    /// `tolerance` per configuration.
    pub fn close_to(&self, other: &SparseState, tolerance: f64) -> bool {
        let keys: std::collections::BTreeSet<&Config> =
            self.terms.keys().chain(other.terms.keys()).collect();
        keys.into_iter()
            .all(|k| (self.amplitude(k) - other.amplitude(k)).norm() <= tolerance)
    }
}

/// One record event: after `step` steps, the full memory contents and the
/// observed symbol (well-defined for classical record chains).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HistoryRecord {
    pub step: usize,
    pub memory: Vec<u8>,
    pub observed: u8,
}

/// Writes the current observed symbol into register `k` (1-based) and then
/// advances the observed by the model's permutation. The configuration map
/// is injective, so the step is unitary on the spanned space; overwriting an
/// already written register is a model violation.
pub fn record_step(model: &ObserverModel, state: &SparseState, k: usize) -> Result<SparseState> {
    if k == 0 || k > model.n_steps() {
        return Err(Error::ModelViolation {
            reason: format!("step {k} outside 1..={}", model.n_steps()),
        });
    }
    let mut terms = BTreeMap::new();
    for (config, amp) in state.terms() {
        if config.memory.len() != model.n_steps() {
            return Err(Error::DimensionMismatch {
                context: "memory register count",
                expected: model.n_steps(),
                got: config.memory.len(),
            });
        }
        if config.memory[k - 1] != 0 {
            return Err(Error::ModelViolation {
                reason: format!("register {k} already holds a record"),
            });
        }
        let mut memory = config.memory.clone();
        memory[k - 1] = config.observed + 1;
        let observed = model.permutation()[config.observed as usize] as u8;
        let previous = terms.insert(Config { memory, observed }, *amp);
        debug_assert!(previous.is_none(), "record map must be injective");
    }
    Ok(SparseState { terms })
}

/// Dense variant of [`record_step`] on the joint memory (x) observed space,
/// register 1 as the slowest index and the observed as the fastest.
pub fn record_step_dense(
    model: &ObserverModel,
    state: &StateVector,
    k: usize,
) -> Result<StateVector> {
    let sparse = sparse_from_dense(model, state)?;
    let stepped = record_step(model, &sparse, k)?;
    dense_from_sparse(model, &stepped)
}

fn dense_index(model: &ObserverModel, config: &Config) -> usize {
    let base = model.register_dim();
    let mut index = 0usize;
    for &m in &config.memory {
        index = index * base + m as usize;
    }
    index * model.symbol_count() + config.observed as usize
}

fn sparse_from_dense(model: &ObserverModel, state: &StateVector) -> Result<SparseState> {
    let dim = model.dense_dim()?;
    if state.dim() != dim {
        return Err(Error::DimensionMismatch {
            context: "dense observer state",
            expected: dim,
            got: state.dim(),
        });
    }
    let base = model.register_dim();
    let mut terms = BTreeMap::new();
    for (index, amp) in state.amplitudes().iter().enumerate() {
        if amp.norm_sqr() == 0.0 {
            continue;
        }
        let observed = (index % model.symbol_count()) as u8;
        let mut rest = index / model.symbol_count();
        let mut memory = vec![0u8; model.n_steps()];
        for slot in memory.iter_mut().rev() {
            *slot = (rest % base) as u8;
            rest /= base;
        }
        terms.insert(Config { memory, observed }, *amp);
    }
    Ok(SparseState { terms })
}

fn dense_from_sparse(model: &ObserverModel, state: &SparseState) -> Result<StateVector> {
    let dim = model.dense_dim()?;
    let mut amplitudes = CVector::zeros(dim);
    for (config, amp) in state.terms() {
        amplitudes[dense_index(model, config)] = *amp;
    }
    StateVector::new(amplitudes)
}

/// The observer's whole history: one sparse branch per clock reading, where
/// the branch at reading `k` is the state after `min(k, N)` record steps
/// (the memory is complete from reading `N` on).
#[derive(Debug, Clone)]
pub struct ObserverHistory {
    model: ObserverModel,
    clock: FiniteClock,
    branches: Vec<SparseState>,
}

impl ObserverHistory {
    pub fn model(&self) -> &ObserverModel {
        &self.model
    }

    pub fn clock(&self) -> &FiniteClock {
        &self.clock
    }

    pub fn branches(&self) -> &[SparseState] {
        &self.branches
    }

    pub fn branch(&self, k: usize) -> &SparseState {
        &self.branches[k]
    }

    /// Number of records present in every configuration of branch `k`.
    pub fn records_at(&self, k: usize) -> usize {
        k.min(self.model.n_steps())
    }

    /// The record chain at reading `k`, when it is classical (single
    /// configuration, i.e. an observed eigenstate input).
    pub fn classical_record(&self, k: usize) -> Option<HistoryRecord> {
        self.branches[k].sole_config().map(|config| HistoryRecord {
            step: self.records_at(k),
            memory: config.memory.clone(),
            observed: config.observed,
        })
    }

    /// Dense history state over the stored clock, for conditioning through
    /// the relative-state machinery. Only feasible for small models.
    pub fn to_history_state(&self) -> Result<HistoryState> {
        let branches = self
            .branches
            .iter()
            .map(|b| dense_from_sparse(&self.model, b))
            .collect::<Result<Vec<_>>>()?;
        HistoryState::from_parts(self.clock.clone(), branches, Weights::Uniform, None)
    }
}

/// Runs the record sequence and lays the step states out as branches over
/// the clock readings. The clock needs at least `N + 1` readings so every
/// stage of the memory appears; extra readings repeat the completed memory.
pub fn build_history_universe(
    model: &ObserverModel,
    clock: &FiniteClock,
    observed_amplitudes: &[C64],
) -> Result<ObserverHistory> {
    if clock.dim() < model.n_steps() + 1 {
        return Err(Error::InsufficientGrid {
            needed: model.n_steps() + 1,
            got: clock.dim(),
        });
    }
    let mut branches = Vec::with_capacity(clock.dim());
    branches.push(model.initial(observed_amplitudes)?);
    for k in 1..clock.dim() {
        let next = if k <= model.n_steps() {
            record_step(model, &branches[k - 1], k)?
        } else {
            branches[k - 1].clone()
        };
        branches.push(next);
    }
    Ok(ObserverHistory {
        model: model.clone(),
        clock: clock.clone(),
        branches,
    })
}

/// Replays every branch from the initial state in the given evaluation
/// order and confirms that branch contents are a function of the reading
/// alone: same amplitudes as the stored branch, and records filling exactly
/// the first `min(k, N)` registers. The order being a permutation is
/// validated; the result does not depend on it, which is the point.
pub fn meta_time_reordering_check(hist: &ObserverHistory, order: &[usize]) -> Result<bool> {
    let n = hist.branches().len();
    if order.len() != n {
        return Err(Error::ModelViolation {
            reason: format!("evaluation order must list all {n} readings"),
        });
    }
    let mut seen = vec![false; n];
    for &k in order {
        if k >= n || seen[k] {
            return Err(Error::ModelViolation {
                reason: "evaluation order is not a permutation of the readings".into(),
            });
        }
        seen[k] = true;
    }
    for &k in order {
        let steps = hist.records_at(k);
        let mut fresh = hist.branch(0).clone();
        for step in 1..=steps {
            fresh = record_step(hist.model(), &fresh, step)?;
        }
        if !fresh.close_to(hist.branch(k), 1e-12) {
            return Ok(false);
        }
        let well_formed = hist
            .branch(k)
            .terms()
            .keys()
            .all(|config| config.records_fill_prefix(steps));
        if !well_formed {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Entanglement entropy (base 2) of each branch across the memory|observed
/// cut. Branches are pure by construction; the reduced memory state is
/// evaluated on the spanned configurations only, so the cost scales with the
/// number of terms, not with the dense dimension.
pub fn entanglement_monotone(hist: &ObserverHistory) -> Result<Vec<f64>> {
    hist.branches().iter().map(branch_entropy).collect()
}

fn branch_entropy(state: &SparseState) -> Result<f64> {
    let mut groups: BTreeMap<&[u8], Vec<(u8, C64)>> = BTreeMap::new();
    for (config, amp) in state.terms() {
        groups
            .entry(config.memory.as_slice())
            .or_default()
            .push((config.observed, *amp));
    }
    let keys: Vec<&[u8]> = groups.keys().copied().collect();
    let overlap = |i: usize, j: usize| -> C64 {
        // <observed part of memory string j | observed part of string i>
        let mut sum = c64(0.0, 0.0);
        for &(o_i, a_i) in &groups[keys[i]] {
            for &(o_j, a_j) in &groups[keys[j]] {
                if o_i == o_j {
                    sum += a_i * a_j.conj();
                }
            }
        }
        sum
    };
    let reduced = CMatrix::from_fn(keys.len(), keys.len(), overlap);
    crate::qla::von_neumann_entropy(&reduced)
}
