//! Exit-gate suite: every release-blocking behavior of the simulator, one
//! test per behavior, each printing a single pass/fail line with the
//! measured numbers (run with --nocapture to see them). Thresholds and
//! runtime budgets are pinned here on purpose; loosening them is a design
//! change, not a tuning knob.

use std::time::{Duration, Instant};

use sha2::{Digest, Sha256};

use qclock_cli::config::ScenarioConfig;
use qclock_cli::report::RunReport;
use qclock_cli::scenarios::{builtin, run_scenario, SCENARIOS};

fn run_builtin(name: &str) -> RunReport {
    run_scenario(&builtin(name, None).expect("builtin exists")).expect("scenario runs")
}

fn value(report: &RunReport, check: &str) -> f64 {
    report
        .check(check)
        .unwrap_or_else(|| panic!("report carries check {check}"))
        .value
}

/// Prints the single verdict line, then enforces it.
fn conclude(name: &str, ok: bool, detail: &str, elapsed: Duration, budget: Option<Duration>) {
    let within = budget.is_none_or(|b| elapsed <= b);
    let verdict = if ok && within { "PASS" } else { "FAIL" };
    println!("{verdict} {name}: {detail} ({:.3}s)", elapsed.as_secs_f64());
    assert!(ok, "{name}: {detail}");
    if let Some(b) = budget {
        assert!(
            within,
            "{name} finished in {:.3}s, over the {:.1}s budget",
            elapsed.as_secs_f64(),
            b.as_secs_f64()
        );
    }
}

#[test]
fn minimal_two_qubit_universe_matches_the_dictionary() {
    let t0 = Instant::now();
    let report = run_builtin("two-qubit");
    let residual = value(&report, "constraint_residual");
    let kernel = value(&report, "kernel_dimension");
    let paired = value(&report, "history_state_fidelity");
    let paired_residual = value(&report, "history_state_residual");
    let relative = value(&report, "relative_state_fidelity");
    let shift = value(&report, "shift_fidelity");
    let ok = residual <= 1e-12
        && kernel == 2.0
        && paired >= 1.0 - 1e-12
        && paired_residual <= 1e-12
        && relative >= 1.0 - 1e-12
        && shift >= 1.0 - 1e-12;
    conclude(
        "minimal_two_qubit_universe_matches_the_dictionary",
        ok,
        &format!(
            "residual={residual:.2e} kernel={kernel} paired_hands_fidelity={paired:.12} relative_fidelity={relative:.12} shift_fidelity={shift:.12}"
        ),
        t0.elapsed(),
        Some(Duration::from_millis(100)),
    );
}

#[test]
fn conditioned_orbits_follow_the_unitary_flow_and_residuals_scale() {
    let t0 = Instant::now();
    let report = run_builtin("history-state");
    let fidelity = value(&report, "min_orbit_fidelity");
    let ratio = value(&report, "residual_ratio_lower");
    let ok = fidelity >= 1.0 - 1e-10 && (3.0..=5.0).contains(&ratio);
    conclude(
        "conditioned_orbits_follow_the_unitary_flow_and_residuals_scale",
        ok,
        &format!("min_fidelity={fidelity:.12} halving_ratio={ratio:.3}"),
        t0.elapsed(),
        Some(Duration::from_secs(5)),
    );
}

#[test]
fn stationary_fold_is_annihilated_and_sits_on_resonance() {
    let t0 = Instant::now();
    let report = run_builtin("history-state");
    let residual = value(&report, "stationary_constraint_residual");
    let defect = value(&report, "resonance_oracle_defect");
    let populated = value(&report, "populated_energy_pairs");
    let ok = residual <= 1e-9 && defect <= 1e-9 && populated >= 1.0;
    conclude(
        "stationary_fold_is_annihilated_and_sits_on_resonance",
        ok,
        &format!(
            "residual={residual:.2e} resonance_defect={defect:.2e} populated_pairs={populated}"
        ),
        t0.elapsed(),
        Some(Duration::from_secs(1)),
    );
}

#[test]
fn couplings_break_relabeled_dynamics_and_factor_maps_do_not() {
    let t0 = Instant::now();
    let report = run_builtin("ambiguity");
    let local_norm = value(&report, "local_max_interaction_norm");
    let local_fid = value(&report, "local_min_orbit_fidelity");
    let coupled_norm = value(&report, "nonlocal_min_interaction_norm");
    let coupled_fid = value(&report, "nonlocal_max_orbit_fidelity");
    let ok =
        local_norm <= 1e-9 && local_fid >= 1.0 - 1e-8 && coupled_norm > 0.05 && coupled_fid < 0.99;
    conclude(
        "couplings_break_relabeled_dynamics_and_factor_maps_do_not",
        ok,
        &format!(
            "factor: norm<={local_norm:.2e} fidelity>={local_fid:.10}; coupled: norm>={coupled_norm:.3} fidelity<={coupled_fid:.3}"
        ),
        t0.elapsed(),
        Some(Duration::from_secs(30)),
    );
}

#[test]
fn interaction_norm_is_invariant_under_local_relabelings() {
    let t0 = Instant::now();
    let report = run_builtin("ambiguity");
    let defect = value(&report, "invariance_max_defect");
    let ok = defect <= 1e-9;
    conclude(
        "interaction_norm_is_invariant_under_local_relabelings",
        ok,
        &format!("max_defect={defect:.2e} over 50 relabeled operators"),
        t0.elapsed(),
        Some(Duration::from_secs(5)),
    );
}

#[test]
fn observer_memory_holds_every_record_in_order() {
    let t0 = Instant::now();
    let report = run_builtin("observer-records");
    let count = value(&report, "final_record_count");
    let defects = value(&report, "record_order_defects");
    let reorders = value(&report, "reorder_pass_count");
    let ok = count == 100.0 && defects == 0.0 && reorders == 100.0;
    conclude(
        "observer_memory_holds_every_record_in_order",
        ok,
        &format!("records={count} order_defects={defects} reorderings_passed={reorders}/100"),
        t0.elapsed(),
        Some(Duration::from_secs(10)),
    );
}

#[test]
fn branch_entropy_never_decreases_for_superposed_inputs() {
    let t0 = Instant::now();
    let report = run_builtin("arrow");
    let violation = value(&report, "monotone_max_violation");
    let eigen = value(&report, "eigenstate_max_entropy");
    let ok = violation <= 1e-10 && eigen <= 1e-12;
    conclude(
        "branch_entropy_never_decreases_for_superposed_inputs",
        ok,
        &format!("max_violation={violation:.2e} eigenstate_entropy={eigen:.2e} over 50 cases"),
        t0.elapsed(),
        Some(Duration::from_secs(5)),
    );
}

#[test]
fn overlapping_hands_mix_relative_states_and_purify_with_separation() {
    let t0 = Instant::now();
    let report = run_builtin("gaussian-clock");
    let unit_purity = value(&report, "unit_overlap_max_purity");
    let min_increase = value(&report, "purity_sweep_min_increase");
    let final_purity = value(&report, "final_min_purity");
    let ok = unit_purity <= 1.0 - 1e-3 && min_increase > 0.0 && final_purity >= 1.0 - 1e-6;
    conclude(
        "overlapping_hands_mix_relative_states_and_purify_with_separation",
        ok,
        &format!(
            "unit_overlap_purity={unit_purity:.4} sweep_min_increase={min_increase:.2e} final_purity={final_purity:.8}"
        ),
        t0.elapsed(),
        None,
    );
}

#[test]
fn every_builtin_reproduces_byte_identical_reports() {
    let t0 = Instant::now();
    let mut mismatches = Vec::new();
    for name in SCENARIOS {
        let cfg: ScenarioConfig = builtin(name, None).expect("builtin exists");
        let first = run_scenario(&cfg).expect("scenario runs");
        let second = run_scenario(&cfg).expect("scenario runs");
        let digest = |r: &RunReport| {
            let mut h = Sha256::new();
            h.update(r.to_json().as_bytes());
            h.update(r.timeseries.to_csv().as_bytes());
            h.finalize()
        };
        if digest(&first) != digest(&second) {
            mismatches.push(name);
        }
    }
    let ok = mismatches.is_empty();
    conclude(
        "every_builtin_reproduces_byte_identical_reports",
        ok,
        &format!(
            "{} scenarios re-run, mismatches: {mismatches:?}",
            SCENARIOS.len()
        ),
        t0.elapsed(),
        None,
    );
}
