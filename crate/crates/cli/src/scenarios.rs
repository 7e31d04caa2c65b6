//! The builtin scenario pipelines. Each one builds its universe from the
//! config (falling back to pinned defaults), measures a fixed set of named
//! checks, and returns a report with a plot-ready time series. All
//! randomness flows from the master seed through per-use substreams, so a
//! config reproduces a run bit for bit.

use std::f64::consts::FRAC_PI_2;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qclock::clock::ideal_finite_clock;
use qclock::emergence::{
    build_history_universe, entanglement_monotone, meta_time_reordering_check, ObserverModel,
};
use qclock::qla::{
    c64, eig_hermitian, expm_hermitian, fidelity_state_density, fidelity_states, ket_minus,
    ket_plus, pauli_z, random_hermitian, random_state, random_unitary, tensor, tensor_states,
    von_neumann_entropy, CMatrix, StateVector,
};
use qclock::relstate::{
    orbit_fidelities, relative_family, schrodinger_residual, unitary_evolution_fidelity,
    RelativeStateFamily,
};
use qclock::tol;
use qclock::tps::{
    clock_ambiguity_experiment, decompose_local, random_local_tps, random_tps, AmbiguityReport,
    Locality,
};
use qclock::universe::{
    constraint_residual, history_state, total_hamiltonian, zero_eigenspace_dimension, BranchMode,
    Weights,
};

use crate::config::{
    ClockKindSpec, ClockSpec, LocalitySpec, ObserverSpec, RestSpec, ScenarioConfig,
};
use crate::error::{Error, Result};
use crate::report::{Check, CheckOp, RunReport, TimeSeries};

/// Builtin scenario names, in listing order.
pub const SCENARIOS: [&str; 6] = [
    "two-qubit",
    "history-state",
    "ambiguity",
    "gaussian-clock",
    "observer-records",
    "arrow",
];

/// One-line description of a builtin scenario.
pub fn describe(name: &str) -> Option<&'static str> {
    match name {
        "two-qubit" => Some(
            "minimal two-qubit universe: exact kernel states, the clock-hand dictionary, and the quarter-period shift",
        ),
        "history-state" => Some(
            "seeded history state: orbit fidelity, grid-halving residual scaling, and the exactly stationary fold with its resonance oracle",
        ),
        "ambiguity" => Some(
            "banks of relabelings: factor products keep the dynamics, couplings create interaction and break it, and the interaction norm is invariant under local changes",
        ),
        "gaussian-clock" => Some(
            "overlapping-hand clock sweep: relative states turn mixed and their purity climbs toward the orthogonal-hand limit",
        ),
        "observer-records" => Some(
            "record-keeping observer: the final reading holds every record in order and replay order is irrelevant",
        ),
        "arrow" => Some(
            "entanglement arrow: branch entropy never decreases for superposed inputs and stays zero for eigenstates",
        ),
        _ => None,
    }
}

/// Default config for a builtin, with its frozen default seed unless one is
/// supplied.
pub fn builtin(name: &str, seed: Option<u64>) -> Result<ScenarioConfig> {
    let default_seed = match name {
        "two-qubit" => None,
        "history-state" => Some(11),
        "ambiguity" => Some(40),
        "gaussian-clock" => Some(5),
        "observer-records" => Some(17),
        "arrow" => Some(29),
        other => return Err(unknown_scenario(other)),
    };
    Ok(ScenarioConfig::named(name, seed.or(default_seed)))
}

fn unknown_scenario(name: &str) -> Error {
    Error::Config(format!(
        "unknown scenario \"{name}\"; available: {}",
        SCENARIOS.join(", ")
    ))
}

/// Executes the named pipeline and returns its report.
pub fn run_scenario(config: &ScenarioConfig) -> Result<RunReport> {
    match config.scenario.as_str() {
        "two-qubit" => run_two_qubit(config),
        "history-state" => run_history_state(config),
        "ambiguity" => run_ambiguity(config),
        "gaussian-clock" => run_gaussian_clock(config),
        "observer-records" => run_observer_records(config),
        "arrow" => run_arrow(config),
        other => Err(unknown_scenario(other)),
    }
}

/// Accumulates named checks, applying tolerance overrides from the config
/// and rejecting overrides that name no check.
struct Checks<'a> {
    config: &'a ScenarioConfig,
    list: Vec<Check>,
}

impl<'a> Checks<'a> {
    fn new(config: &'a ScenarioConfig) -> Self {
        Checks {
            config,
            list: Vec::new(),
        }
    }

    fn push(&mut self, name: &str, value: f64, op: CheckOp, default_threshold: f64) {
        let threshold = self
            .config
            .tolerances
            .get(name)
            .copied()
            .unwrap_or(default_threshold);
        self.list.push(Check::new(name, value, op, threshold));
    }

    fn finish(self, timeseries: TimeSeries) -> Result<RunReport> {
        for key in self.config.tolerances.keys() {
            if !self.list.iter().any(|c| &c.name == key) {
                let known: Vec<&str> = self.list.iter().map(|c| c.name.as_str()).collect();
                return Err(Error::Config(format!(
                    "unknown tolerance \"{key}\" for scenario \"{}\"; checks: {}",
                    self.config.scenario,
                    known.join(", ")
                )));
            }
        }
        Ok(RunReport::new(
            self.config.scenario.clone(),
            self.config.seed.unwrap_or(0),
            self.list,
            timeseries,
        ))
    }
}

fn diag(values: &[f64]) -> CMatrix {
    CMatrix::from_fn(values.len(), values.len(), |i, j| {
        if i == j {
            c64(values[i], 0.0)
        } else {
            c64(0.0, 0.0)
        }
    })
}

fn max_defined(values: &[Option<f64>]) -> f64 {
    values.iter().flatten().copied().fold(0.0, f64::max)
}

fn require_ideal(spec: &ClockSpec, scenario: &str) -> Result<f64> {
    match spec.kind {
        ClockKindSpec::Ideal => spec
            .delta_e
            .ok_or_else(|| Error::Config("ideal clocks need delta_e".into())),
        ClockKindSpec::Gaussian => Err(Error::Config(format!(
            "scenario \"{scenario}\" needs an ideal clock"
        ))),
    }
}

/// Time series over a conditional family: per-reading orbit fidelity,
/// purity, equation-of-motion residual, and entropy.
fn family_series(
    family: &RelativeStateFamily,
    h_r: &CMatrix,
    with_fidelity: bool,
) -> Result<TimeSeries> {
    let fidelities = if with_fidelity {
        orbit_fidelities(family, h_r)?
    } else {
        vec![None; family.len()]
    };
    let residuals = schrodinger_residual(family, h_r)?;
    let mut series = TimeSeries::empty();
    for k in 0..family.len() {
        let entropy = match family.rho(k) {
            Some(rho) => Some(von_neumann_entropy(rho)?),
            None => None,
        };
        series.push_row(
            family.times()[k],
            fidelities[k],
            family.purities()[k],
            residuals[k],
            entropy,
        );
    }
    Ok(series)
}

/// The smallest universe with exact stationary states: two qubits, energies
/// on the resonant lattice, kernel spanned by the paired levels. Pins the
/// whole dictionary: kernel dimension, the hand-conditioned relative states,
/// and the quarter-period shift between the two hands.
fn run_two_qubit(config: &ScenarioConfig) -> Result<RunReport> {
    let mut checks = Checks::new(config);

    // Energy-basis face: a pair of identical splittings annihilates the
    // antisymmetric-energy pair states.
    let universe = total_hamiltonian(&pauli_z(), &pauli_z())?;
    let paired = StateVector::normalized(
        tensor_states(&StateVector::basis(2, 0), &StateVector::basis(2, 1)).amplitudes()
            + tensor_states(&StateVector::basis(2, 1), &StateVector::basis(2, 0)).amplitudes(),
    )?;
    checks.push(
        "constraint_residual",
        constraint_residual(&paired, &universe)?,
        CheckOp::AtMost,
        1e-12,
    );
    checks.push(
        "kernel_dimension",
        zero_eigenspace_dimension(&universe, tol::KERNEL_TOL)? as f64,
        CheckOp::Equal,
        2.0,
    );

    // Clock face: hands {|+>, |->} at times {0, pi/2} against the rest
    // Hamiltonian diag(0, -2); the history state is (|+ -> + |- +>)/sqrt(2).
    let clock = ideal_finite_clock(2, 2.0)?;
    let h_r = diag(&[0.0, -2.0]);
    let hist = history_state(
        &clock,
        &h_r,
        &ket_minus(),
        Weights::Uniform,
        BranchMode::Stationary,
    )?;
    let folded = hist
        .rest_hamiltonian()
        .expect("stationary mode stores its Hamiltonian");
    let clock_h = clock
        .hamiltonian()
        .expect("ideal clocks have a Hamiltonian");
    let total = total_hamiltonian(clock_h, folded)?;
    checks.push(
        "history_state_residual",
        constraint_residual(hist.psi(), &total)?,
        CheckOp::AtMost,
        1e-12,
    );
    let expected = StateVector::normalized(
        tensor_states(&ket_plus(), &ket_minus()).amplitudes()
            + tensor_states(&ket_minus(), &ket_plus()).amplitudes(),
    )?;
    checks.push(
        "history_state_fidelity",
        fidelity_states(hist.psi(), &expected)?,
        CheckOp::AtLeast,
        1.0 - 1e-12,
    );

    // Reading the clock at |+> leaves the rest in |->.
    let family = relative_family(&hist)?;
    let rho0 = family.rho(0).expect("uniform weights leave no gaps");
    checks.push(
        "relative_state_fidelity",
        fidelity_state_density(&ket_minus(), rho0)?,
        CheckOp::AtLeast,
        1.0 - 1e-12,
    );

    // One quarter period shifts |+> to |-> up to a global phase.
    let shifted = ket_plus().apply(&expm_hermitian(&pauli_z(), FRAC_PI_2)?)?;
    checks.push(
        "shift_fidelity",
        fidelity_states(&shifted, &ket_minus())?,
        CheckOp::AtLeast,
        1.0 - 1e-12,
    );

    let mut series = TimeSeries::empty();
    let targets = [ket_minus(), ket_plus()];
    for (k, target) in targets.iter().enumerate() {
        let rho = family.rho(k).expect("uniform weights leave no gaps");
        series.push_row(
            family.times()[k],
            Some(fidelity_state_density(target, rho)?),
            family.purities()[k],
            None,
            Some(von_neumann_entropy(rho)?),
        );
    }
    checks.finish(series)
}

/// Maximum defect of the resonance condition over populated joint-energy
/// pairs: projects the state onto clock-energy x rest-energy products and
/// requires every populated pair to sit at total energy zero. Returns the
/// defect and how many pairs carry amplitude.
fn resonance_oracle(
    psi: &StateVector,
    folded: &CMatrix,
    d_c: usize,
    delta_e: f64,
) -> Result<(f64, usize)> {
    let spectrum = eig_hermitian(folded)?;
    let d_r = folded.nrows();
    let amps = psi.amplitudes();
    let mut defect: f64 = 0.0;
    let mut populated = 0;
    for n in 0..d_c {
        for i in 0..d_r {
            let mut overlap = c64(0.0, 0.0);
            for r in 0..d_r {
                overlap += spectrum.eigenvectors[(r, i)].conj() * amps[n * d_r + r];
            }
            if overlap.norm() > 1e-10 {
                populated += 1;
                defect = defect.max((n as f64 * delta_e + spectrum.eigenvalues[i]).abs());
            }
        }
    }
    Ok((defect, populated))
}

/// Free-mode history states: conditioning on the clock recovers the unitary
/// orbit of the rest, the discrete equation-of-motion residual scales as the
/// square of the grid spacing, and the stationary fold of the same universe
/// is annihilated exactly, cross-checked in the joint energy basis.
fn run_history_state(config: &ScenarioConfig) -> Result<RunReport> {
    let seed = config.require_seed()?;
    let clock_spec = config
        .clock
        .clone()
        .unwrap_or_else(|| ClockSpec::ideal(64, 1.0));
    let delta_e = require_ideal(&clock_spec, "history-state")?;
    let rest = config.rest.clone().unwrap_or_else(|| RestSpec::random(4));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let h_r = rest.hamiltonian(&mut rng)?;
    let phi0 = rest.initial_state(&mut rng)?;
    let weights = match &config.weights {
        Some(spec) => spec.to_weights(clock_spec.dim)?,
        None => Weights::Uniform,
    };

    let clock = clock_spec.build()?;
    let hist = history_state(&clock, &h_r, &phi0, weights.clone(), BranchMode::Free)?;
    let family = relative_family(&hist)?;
    let mut checks = Checks::new(config);
    checks.push(
        "min_orbit_fidelity",
        unitary_evolution_fidelity(&family, &h_r)?,
        CheckOp::AtLeast,
        1.0 - 1e-10,
    );

    // Halving the grid spacing must cut the central-difference residual by
    // four, the signature of a second-order discretization of a true
    // derivative.
    let coarse = max_defined(&schrodinger_residual(&family, &h_r)?);
    let fine_clock = ideal_finite_clock(2 * clock_spec.dim, delta_e)?;
    let fine_hist = history_state(&fine_clock, &h_r, &phi0, weights, BranchMode::Free)?;
    let fine = max_defined(&schrodinger_residual(&relative_family(&fine_hist)?, &h_r)?);
    let ratio = coarse / fine;
    checks.push("residual_ratio_lower", ratio, CheckOp::AtLeast, 3.0);
    checks.push("residual_ratio_upper", ratio, CheckOp::AtMost, 5.0);

    // Stationary face on a 16-reading clock: the folded spectrum sits on the
    // resonant lattice, so the constraint annihilates the state exactly.
    let st_clock = ideal_finite_clock(16, delta_e)?;
    let h_st = rest.hamiltonian(&mut rng)?;
    let phi_st = rest.initial_state(&mut rng)?;
    let st = history_state(
        &st_clock,
        &h_st,
        &phi_st,
        Weights::Uniform,
        BranchMode::Stationary,
    )?;
    let folded = st
        .rest_hamiltonian()
        .expect("stationary mode stores its Hamiltonian");
    let st_total = total_hamiltonian(
        st_clock
            .hamiltonian()
            .expect("ideal clocks have a Hamiltonian"),
        folded,
    )?;
    checks.push(
        "stationary_constraint_residual",
        constraint_residual(st.psi(), &st_total)?,
        CheckOp::AtMost,
        1e-9,
    );
    let (defect, populated) = resonance_oracle(st.psi(), folded, 16, delta_e)?;
    checks.push("resonance_oracle_defect", defect, CheckOp::AtMost, 1e-9);
    checks.push(
        "populated_energy_pairs",
        populated as f64,
        CheckOp::AtLeast,
        1.0,
    );

    let series = family_series(&family, &h_r, true)?;
    checks.finish(series)
}

/// Outcome summaries of one bank of relabeling experiments.
struct BankSummary {
    min_interaction: f64,
    max_interaction: f64,
    min_fidelity: f64,
    max_fidelity: f64,
    classified_local: usize,
    first: Option<AmbiguityReport>,
}

impl BankSummary {
    fn new() -> Self {
        BankSummary {
            min_interaction: f64::INFINITY,
            max_interaction: 0.0,
            min_fidelity: f64::INFINITY,
            max_fidelity: 0.0,
            classified_local: 0,
            first: None,
        }
    }

    fn absorb(&mut self, report: AmbiguityReport) {
        self.min_interaction = self.min_interaction.min(report.interaction_norm());
        self.max_interaction = self.max_interaction.max(report.interaction_norm());
        self.min_fidelity = self.min_fidelity.min(report.min_orbit_fidelity());
        self.max_fidelity = self.max_fidelity.max(report.min_orbit_fidelity());
        self.classified_local += report.local_map() as usize;
        if self.first.is_none() {
            self.first = Some(report);
        }
    }
}

/// Relabeling banks over one stationary universe. Factor-product maps (with
/// the clock carried along) keep zero interaction and perfect orbit
/// fidelity; coupled maps manufacture an interaction term and break the
/// closed orbit; and the interaction norm itself is invariant under local
/// relabelings. With `strength = 0` or `locality = "local"` the second bank
/// degenerates to factor products and is scored as an equivalence control.
fn run_ambiguity(config: &ScenarioConfig) -> Result<RunReport> {
    let seed = config.require_seed()?;
    let clock_spec = config
        .clock
        .clone()
        .unwrap_or_else(|| ClockSpec::ideal(8, 1.0));
    require_ideal(&clock_spec, "ambiguity")?;
    let rest = config.rest.clone().unwrap_or_else(|| RestSpec::random(4));
    let tps_spec = config.tps.clone().unwrap_or_default();
    if tps_spec.count == 0 {
        return Err(Error::Config("tps count must be at least 1".into()));
    }
    let base = tps_spec.seed.unwrap_or(seed);

    let clock = clock_spec.build()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let h_r = rest.hamiltonian(&mut rng)?;
    let phi0 = rest.initial_state(&mut rng)?;
    let hist = history_state(
        &clock,
        &h_r,
        &phi0,
        Weights::Uniform,
        BranchMode::Stationary,
    )?;
    let total = total_hamiltonian(
        clock
            .hamiltonian()
            .expect("ideal clocks have a Hamiltonian"),
        hist.rest_hamiltonian()
            .expect("stationary mode stores its Hamiltonian"),
    )?;
    let psi = hist.psi();
    let partition = (clock_spec.dim, rest.dim);

    // Factor-product bank: relabeling both factors and carrying the clock
    // along is a change of description, not of physics.
    let mut local = BankSummary::new();
    for i in 0..tps_spec.count {
        let (map, p, _) = random_local_tps(partition, base + 1 + i as u64)?;
        let moved_clock = clock.conjugated(&p)?;
        local.absorb(clock_ambiguity_experiment(&total, psi, &map, &moved_clock)?);
    }
    let mut checks = Checks::new(config);
    checks.push(
        "local_max_interaction_norm",
        local.max_interaction,
        CheckOp::AtMost,
        1e-9,
    );
    checks.push(
        "local_min_orbit_fidelity",
        local.min_fidelity,
        CheckOp::AtLeast,
        1.0 - 1e-8,
    );
    checks.push(
        "local_classified_count",
        local.classified_local as f64,
        CheckOp::Equal,
        tps_spec.count as f64,
    );

    // Coupled bank: a genuine coupling in the generator leaves no clock
    // choice with interaction-free, closed unitary dynamics. A bank with
    // zero strength or forced-local maps carries no coupling, so it runs as
    // an equivalence control instead.
    let coupled_bank =
        tps_spec.strength > 0.0 && matches!(tps_spec.locality, LocalitySpec::Nonlocal);
    let mut coupled = BankSummary::new();
    if coupled_bank {
        for i in 0..tps_spec.count {
            let map = random_tps(
                partition,
                Locality::Nonlocal,
                tps_spec.strength,
                base + 101 + i as u64,
            )?;
            coupled.absorb(clock_ambiguity_experiment(&total, psi, &map, &clock)?);
        }
        checks.push(
            "nonlocal_min_interaction_norm",
            coupled.min_interaction,
            CheckOp::Above,
            0.05,
        );
        checks.push(
            "nonlocal_max_orbit_fidelity",
            coupled.max_fidelity,
            CheckOp::Below,
            0.99,
        );
        checks.push(
            "nonlocal_classified_count",
            (tps_spec.count - coupled.classified_local) as f64,
            CheckOp::Equal,
            tps_spec.count as f64,
        );
    } else {
        // The control bank reduces to factor products and must report no
        // interaction and fidelity one.
        for i in 0..tps_spec.count {
            let (map, p, _) = random_local_tps(partition, base + 101 + i as u64)?;
            let moved_clock = clock.conjugated(&p)?;
            coupled.absorb(clock_ambiguity_experiment(&total, psi, &map, &moved_clock)?);
        }
        checks.push(
            "nonlocal_max_interaction_norm",
            coupled.max_interaction,
            CheckOp::AtMost,
            1e-10,
        );
        checks.push(
            "nonlocal_min_orbit_fidelity",
            coupled.min_fidelity,
            CheckOp::AtLeast,
            1.0 - 1e-8,
        );
    }

    // Interaction norm is a property of the split, not of local labels.
    let mut invariance_defect: f64 = 0.0;
    for i in 0..tps_spec.invariance_count {
        let mut case_rng = ChaCha8Rng::seed_from_u64(base + 201 + i as u64);
        let d_a = case_rng.gen_range(2..=8);
        let d_b = case_rng.gen_range(2..=8);
        let h = random_hermitian(d_a * d_b, &mut case_rng);
        let p = random_unitary(d_a, &mut case_rng);
        let q = random_unitary(d_b, &mut case_rng);
        let w = tensor(&p, &q);
        let relabeled = w.adjoint() * &h * &w;
        let original = decompose_local(&h, (d_a, d_b))?.interaction_norm();
        let moved = decompose_local(&relabeled, (d_a, d_b))?.interaction_norm();
        invariance_defect = invariance_defect.max((original - moved).abs());
    }
    if tps_spec.invariance_count > 0 {
        checks.push(
            "invariance_max_defect",
            invariance_defect,
            CheckOp::AtMost,
            1e-9,
        );
    }

    let mut series = TimeSeries::empty();
    if let Some(first) = coupled.first.as_ref().or(local.first.as_ref()) {
        for k in 0..first.times().len() {
            series.push_row(
                first.times()[k],
                first.orbit_fidelities()[k],
                None,
                first.eom_residuals()[k],
                None,
            );
        }
    }
    checks.finish(series)
}

/// Overlapping-hand clocks: conditioning mixes neighboring branches, so
/// relative states are mixed at strong overlap and approach purity as the
/// overlap dies. Sweeps the overlap product and pins the unit-overlap point.
fn run_gaussian_clock(config: &ScenarioConfig) -> Result<RunReport> {
    let seed = config.require_seed()?;
    let (dim, spacing) = match &config.clock {
        Some(spec) => match spec.kind {
            ClockKindSpec::Gaussian => (spec.dim, spec.spacing_or_default()),
            ClockKindSpec::Ideal => {
                return Err(Error::Config(
                    "scenario \"gaussian-clock\" needs a gaussian clock".into(),
                ))
            }
        },
        None => (8, 1.0),
    };
    let rest = config.rest.clone().unwrap_or_else(|| RestSpec::random(3));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let h_r = rest.hamiltonian(&mut rng)?;
    let phi0 = rest.initial_state(&mut rng)?;

    // Overlap products gamma * spacing swept from strong to negligible.
    let products = [0.1, 1.0, 10.0, 30.0];
    let mut min_purities = Vec::with_capacity(products.len());
    let mut unit_family: Option<RelativeStateFamily> = None;
    let mut unit_max_purity = f64::NAN;
    for &product in &products {
        let clock = qclock::clock::gaussian_clock(dim, product / spacing, spacing)?;
        let hist = history_state(&clock, &h_r, &phi0, Weights::Uniform, BranchMode::Free)?;
        let family = relative_family(&hist)?;
        let min_p = family
            .min_purity()
            .ok_or_else(|| Error::Config("every reading lost support; widen the grid".into()))?;
        let max_p = family
            .max_purity()
            .expect("min purity defined implies max defined");
        min_purities.push(min_p);
        if product == 1.0 {
            unit_max_purity = max_p;
            unit_family = Some(family);
        }
    }

    let mut checks = Checks::new(config);
    checks.push(
        "unit_overlap_max_purity",
        unit_max_purity,
        CheckOp::AtMost,
        1.0 - 1e-3,
    );
    let min_increase = min_purities
        .windows(2)
        .map(|pair| pair[1] - pair[0])
        .fold(f64::INFINITY, f64::min);
    checks.push(
        "purity_sweep_min_increase",
        min_increase,
        CheckOp::Above,
        0.0,
    );
    checks.push(
        "final_min_purity",
        *min_purities.last().expect("sweep is nonempty"),
        CheckOp::AtLeast,
        1.0 - 1e-6,
    );

    let family = unit_family.expect("sweep contains the unit product");
    let series = family_series(&family, &h_r, false)?;
    checks.finish(series)
}

/// Record-keeping observer on an eigenstate input: after N steps the memory
/// holds all N records in generation order, and replaying the readings in
/// any order reproduces identical branch contents.
fn run_observer_records(config: &ScenarioConfig) -> Result<RunReport> {
    let seed = config.require_seed()?;
    let spec = config.observer.clone().unwrap_or(ObserverSpec {
        steps: 100,
        symbols: 4,
        initial_symbol: 0,
        reorderings: 100,
        cases: 50,
    });
    if spec.initial_symbol >= spec.symbols {
        return Err(Error::Config(format!(
            "initial symbol {} outside the {} symbols",
            spec.initial_symbol, spec.symbols
        )));
    }
    let model = ObserverModel::cyclic(spec.steps, spec.symbols)?;
    let clock = ideal_finite_clock(spec.steps + 1, 1.0)?;
    let mut amps = vec![c64(0.0, 0.0); spec.symbols];
    amps[spec.initial_symbol] = c64(1.0, 0.0);
    let hist = build_history_universe(&model, &clock, &amps)?;

    // The final branch is a single configuration whose memory replays the
    // permutation orbit of the initial symbol.
    let final_config = hist.branch(spec.steps).sole_config().ok_or_else(|| {
        Error::Config("final branch is not a single record chain; use an eigenstate input".into())
    })?;
    let mut expected = Vec::with_capacity(spec.steps);
    let mut symbol = spec.initial_symbol;
    for _ in 0..spec.steps {
        expected.push((symbol + 1) as u8);
        symbol = model.permutation()[symbol];
    }
    let order_defects = final_config
        .memory
        .iter()
        .zip(&expected)
        .filter(|(got, want)| got != want)
        .count();

    let mut checks = Checks::new(config);
    checks.push(
        "final_record_count",
        final_config.written_count() as f64,
        CheckOp::Equal,
        spec.steps as f64,
    );
    checks.push(
        "record_order_defects",
        order_defects as f64,
        CheckOp::Equal,
        0.0,
    );

    // Evaluation order of the readings is unobservable: every permutation
    // replays to identical branches.
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut passes = 0;
    for _ in 0..spec.reorderings {
        let mut order: Vec<usize> = (0..hist.branches().len()).collect();
        order.shuffle(&mut rng);
        passes += meta_time_reordering_check(&hist, &order)? as usize;
    }
    checks.push(
        "reorder_pass_count",
        passes as f64,
        CheckOp::Equal,
        spec.reorderings as f64,
    );

    let entropies = entanglement_monotone(&hist)?;
    let mut series = TimeSeries::empty();
    for (k, entropy) in entropies.iter().enumerate() {
        series.push_row(clock.time(k), None, None, None, Some(*entropy));
    }
    checks.finish(series)
}

/// Entanglement arrow: for superposed inputs the branch entropy never
/// decreases along the record chain, and eigenstate inputs stay exactly
/// unentangled. Cases sample model sizes and inputs from per-case seeds.
fn run_arrow(config: &ScenarioConfig) -> Result<RunReport> {
    let seed = config.require_seed()?;
    let spec = config.observer.clone().unwrap_or(ObserverSpec {
        steps: 6,
        symbols: 4,
        initial_symbol: 0,
        reorderings: 100,
        cases: 50,
    });
    if spec.steps < 2 || spec.symbols < 2 {
        return Err(Error::Config(
            "arrow cases need at least 2 steps and 2 symbols".into(),
        ));
    }

    let mut worst_violation: f64 = 0.0;
    let mut first_series: Option<(Vec<f64>, Vec<f64>)> = None;
    for i in 0..spec.cases {
        let mut case_rng = ChaCha8Rng::seed_from_u64(seed + 1 + i as u64);
        let symbols = case_rng.gen_range(2..=spec.symbols);
        let steps = case_rng.gen_range(2..=spec.steps);
        // Draw until genuinely superposed; eigenstates are checked apart.
        let amps = loop {
            let state = random_state(symbols, &mut case_rng);
            let top = state
                .amplitudes()
                .iter()
                .map(|a| a.norm_sqr())
                .fold(0.0, f64::max);
            if top <= 0.99 {
                break state.into_amplitudes();
            }
        };
        let model = ObserverModel::cyclic(steps, symbols)?;
        let clock = ideal_finite_clock(steps + 1, 1.0)?;
        let hist = build_history_universe(&model, &clock, amps.as_slice())?;
        let entropies = entanglement_monotone(&hist)?;
        let violation = entropies
            .windows(2)
            .map(|pair| pair[0] - pair[1])
            .fold(0.0, f64::max);
        worst_violation = worst_violation.max(violation);
        if first_series.is_none() {
            first_series = Some((clock.times().to_vec(), entropies));
        }
    }

    // Eigenstate inputs carry no entanglement at any reading.
    let mut eigenstate_max: f64 = 0.0;
    let model = ObserverModel::cyclic(spec.steps, spec.symbols)?;
    let clock = ideal_finite_clock(spec.steps + 1, 1.0)?;
    for symbol in 0..spec.symbols {
        let mut amps = vec![c64(0.0, 0.0); spec.symbols];
        amps[symbol] = c64(1.0, 0.0);
        let hist = build_history_universe(&model, &clock, &amps)?;
        for entropy in entanglement_monotone(&hist)? {
            eigenstate_max = eigenstate_max.max(entropy.abs());
        }
    }

    let mut checks = Checks::new(config);
    checks.push(
        "monotone_max_violation",
        worst_violation,
        CheckOp::AtMost,
        1e-10,
    );
    checks.push(
        "eigenstate_max_entropy",
        eigenstate_max,
        CheckOp::AtMost,
        1e-12,
    );

    let mut series = TimeSeries::empty();
    if let Some((times, entropies)) = first_series {
        for (k, entropy) in entropies.iter().enumerate() {
            series.push_row(times[k], None, None, None, Some(*entropy));
        }
    }
    checks.finish(series)
}
