use qclock_cli::config::LocalitySpec;
use qclock_cli::scenarios::{builtin, describe, run_scenario, SCENARIOS};

#[test]
fn two_qubit_dictionary_values_are_pinned() {
    let report = run_scenario(&builtin("two-qubit", None).unwrap()).unwrap();
    assert!(report.passed);
    let residual = report.check("constraint_residual").unwrap();
    assert!(residual.passed && residual.value <= 1e-12);
    assert_eq!(report.check("kernel_dimension").unwrap().value, 2.0);
    assert!(report.check("relative_state_fidelity").unwrap().value >= 1.0 - 1e-12);
    assert!(report.check("shift_fidelity").unwrap().value >= 1.0 - 1e-12);
}

#[test]
fn zero_strength_relabelings_are_equivalence_controls() {
    let mut cfg = builtin("ambiguity", None).unwrap();
    {
        let tps = cfg.tps.get_or_insert_with(Default::default);
        tps.strength = 0.0;
        tps.count = 4;
        tps.invariance_count = 5;
    }
    let report = run_scenario(&cfg).unwrap();
    assert!(report.passed, "{}", report.render_text());
    assert!(report.check("nonlocal_max_interaction_norm").unwrap().value <= 1e-10);
    assert!(report.check("nonlocal_min_orbit_fidelity").unwrap().value >= 1.0 - 1e-8);
}

#[test]
fn forced_local_banks_are_equivalence_controls_too() {
    let mut cfg = builtin("ambiguity", None).unwrap();
    {
        let tps = cfg.tps.get_or_insert_with(Default::default);
        tps.locality = LocalitySpec::Local;
        tps.count = 3;
        tps.invariance_count = 2;
    }
    let report = run_scenario(&cfg).unwrap();
    assert!(report.passed, "{}", report.render_text());
    assert!(report.check("nonlocal_max_interaction_norm").unwrap().value <= 1e-10);
}

#[test]
fn gaussian_sweep_purities_rise_with_hand_separation() {
    let report = run_scenario(&builtin("gaussian-clock", None).unwrap()).unwrap();
    assert!(report.passed, "{}", report.render_text());
    assert!(report.check("purity_sweep_min_increase").unwrap().value > 0.0);
    assert!(report.check("unit_overlap_max_purity").unwrap().value <= 1.0 - 1e-3);
}

#[test]
fn identical_configs_reproduce_reports_exactly() {
    for name in ["two-qubit", "gaussian-clock"] {
        let one = run_scenario(&builtin(name, Some(9)).unwrap()).unwrap();
        let two = run_scenario(&builtin(name, Some(9)).unwrap()).unwrap();
        assert_eq!(one.to_json(), two.to_json());
        assert_eq!(one.timeseries.to_csv(), two.timeseries.to_csv());
    }
}

#[test]
fn every_builtin_is_listed_and_described() {
    assert_eq!(SCENARIOS.len(), 6);
    for name in SCENARIOS {
        assert!(describe(name).is_some());
        assert!(builtin(name, None).is_ok());
    }
    assert!(describe("warp-drive").is_none());
}

#[test]
fn reports_echo_seed_and_version() {
    let report = run_scenario(&builtin("arrow", Some(123)).unwrap()).unwrap();
    assert_eq!(report.seed, 123);
    assert_eq!(report.version, env!("CARGO_PKG_VERSION"));
}
