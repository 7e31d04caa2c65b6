//! Declarative run configuration: a single TOML file selects a scenario and
//! parameterizes its clock, rest factor, weights, structure maps, observer
//! model, tolerances, and output paths. Every randomized element draws from
//! a stream derived from the one master seed, so a config file identifies a
//! run completely.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

use qclock::clock::{gaussian_clock, ideal_finite_clock, FiniteClock};
use qclock::qla::{
    c64, pauli_x, pauli_y, pauli_z, random_hermitian, random_state, CMatrix, CVector, StateVector,
};
use qclock::universe::Weights;

use crate::error::{Error, Result};

/// Complete description of one scenario run.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    /// Builtin pipeline to execute; see `list-scenarios`.
    pub scenario: String,
    /// Master seed. Required by every scenario that draws randomness.
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub clock: Option<ClockSpec>,
    #[serde(default)]
    pub rest: Option<RestSpec>,
    #[serde(default)]
    pub weights: Option<WeightsSpec>,
    #[serde(default)]
    pub tps: Option<TpsSpec>,
    #[serde(default)]
    pub observer: Option<ObserverSpec>,
    /// Per-check threshold overrides, keyed by check name.
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
    #[serde(default)]
    pub output: Option<OutputSpec>,
}

impl ScenarioConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(format!("config parse error: {e}")))
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            action: "read",
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_toml(&text)
    }

    /// A bare named scenario with no sections filled in.
    pub fn named(scenario: &str, seed: Option<u64>) -> Self {
        ScenarioConfig {
            scenario: scenario.to_string(),
            seed,
            clock: None,
            rest: None,
            weights: None,
            tps: None,
            observer: None,
            tolerances: BTreeMap::new(),
            output: None,
        }
    }

    pub fn require_seed(&self) -> Result<u64> {
        self.seed.ok_or_else(|| {
            Error::Config(format!(
                "scenario \"{}\" draws randomness; set a seed in the config or with --seed",
                self.scenario
            ))
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClockKindSpec {
    Ideal,
    Gaussian,
}

/// Clock factor: an orthogonal Fourier-conjugate clock (`kind = "ideal"`,
/// needs `delta_e`) or an overlapping-hand clock (`kind = "gaussian"`, needs
/// `gamma`; `spacing` defaults to 1).
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClockSpec {
    pub kind: ClockKindSpec,
    pub dim: usize,
    #[serde(default)]
    pub delta_e: Option<f64>,
    #[serde(default)]
    pub gamma: Option<f64>,
    #[serde(default)]
    pub spacing: Option<f64>,
}

impl ClockSpec {
    pub fn ideal(dim: usize, delta_e: f64) -> Self {
        ClockSpec {
            kind: ClockKindSpec::Ideal,
            dim,
            delta_e: Some(delta_e),
            gamma: None,
            spacing: None,
        }
    }

    pub fn build(&self) -> Result<FiniteClock> {
        match self.kind {
            ClockKindSpec::Ideal => {
                if self.gamma.is_some() || self.spacing.is_some() {
                    return Err(Error::Config(
                        "ideal clocks take delta_e only, not gamma/spacing".into(),
                    ));
                }
                let delta_e = self
                    .delta_e
                    .ok_or_else(|| Error::Config("ideal clocks need delta_e".into()))?;
                Ok(ideal_finite_clock(self.dim, delta_e)?)
            }
            ClockKindSpec::Gaussian => {
                if self.delta_e.is_some() {
                    return Err(Error::Config(
                        "gaussian clocks take gamma and spacing, not delta_e".into(),
                    ));
                }
                let gamma = self
                    .gamma
                    .ok_or_else(|| Error::Config("gaussian clocks need gamma".into()))?;
                Ok(gaussian_clock(
                    self.dim,
                    gamma,
                    self.spacing.unwrap_or(1.0),
                )?)
            }
        }
    }

    /// Grid spacing of the hand times, for scenarios that sweep overlaps.
    pub fn spacing_or_default(&self) -> f64 {
        self.spacing.unwrap_or(1.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RestSource {
    #[default]
    Random,
    Named,
    Explicit,
}

/// Rest factor: its dimension, where its Hamiltonian comes from, and an
/// optional explicit initial state (complex entries as `[re, im]` pairs,
/// row-major for matrices). Random draws come from the scenario's seeded
/// stream: first the Hamiltonian, then the initial state.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RestSpec {
    pub dim: usize,
    #[serde(default)]
    pub source: RestSource,
    #[serde(default)]
    pub name: Option<String>,
    #[serde(default)]
    pub matrix: Option<Vec<[f64; 2]>>,
    #[serde(default)]
    pub initial: Option<Vec<[f64; 2]>>,
}

impl RestSpec {
    pub fn random(dim: usize) -> Self {
        RestSpec {
            dim,
            source: RestSource::Random,
            name: None,
            matrix: None,
            initial: None,
        }
    }

    pub fn hamiltonian(&self, rng: &mut ChaCha8Rng) -> Result<CMatrix> {
        if self.dim == 0 {
            return Err(Error::Config("rest dim must be at least 1".into()));
        }
        match self.source {
            RestSource::Random => {
                if self.name.is_some() || self.matrix.is_some() {
                    return Err(Error::Config(
                        "rest source \"random\" takes neither name nor matrix".into(),
                    ));
                }
                Ok(random_hermitian(self.dim, rng))
            }
            RestSource::Named => {
                let name = self
                    .name
                    .as_deref()
                    .ok_or_else(|| Error::Config("rest source \"named\" needs name".into()))?;
                let op = match name {
                    "pauli-x" => pauli_x(),
                    "pauli-y" => pauli_y(),
                    "pauli-z" => pauli_z(),
                    "zero" => CMatrix::zeros(self.dim, self.dim),
                    other => {
                        let known = "pauli-x, pauli-y, pauli-z, zero";
                        return Err(Error::Config(format!(
                            "unknown rest operator \"{other}\"; known: {known}"
                        )));
                    }
                };
                if op.nrows() != self.dim {
                    return Err(Error::Config(format!(
                        "rest operator \"{name}\" has dimension {}, config says {}",
                        op.nrows(),
                        self.dim
                    )));
                }
                Ok(op)
            }
            RestSource::Explicit => {
                let entries = self
                    .matrix
                    .as_ref()
                    .ok_or_else(|| Error::Config("rest source \"explicit\" needs matrix".into()))?;
                let want = self.dim * self.dim;
                if entries.len() != want {
                    return Err(Error::Config(format!(
                        "rest matrix needs {want} entries for dim {}, got {}",
                        self.dim,
                        entries.len()
                    )));
                }
                Ok(CMatrix::from_fn(self.dim, self.dim, |i, j| {
                    let [re, im] = entries[i * self.dim + j];
                    c64(re, im)
                }))
            }
        }
    }

    pub fn initial_state(&self, rng: &mut ChaCha8Rng) -> Result<StateVector> {
        match &self.initial {
            None => Ok(random_state(self.dim, rng)),
            Some(entries) => {
                if entries.len() != self.dim {
                    return Err(Error::Config(format!(
                        "rest initial state needs {} entries, got {}",
                        self.dim,
                        entries.len()
                    )));
                }
                let amps =
                    CVector::from_iterator(self.dim, entries.iter().map(|[re, im]| c64(*re, *im)));
                Ok(StateVector::normalized(amps)?)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WeightsKindSpec {
    #[default]
    Uniform,
    Custom,
}

/// Branch weights for history-state construction.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightsSpec {
    #[serde(default)]
    pub kind: WeightsKindSpec,
    #[serde(default)]
    pub values: Option<Vec<[f64; 2]>>,
}

impl WeightsSpec {
    pub fn to_weights(&self, grid: usize) -> Result<Weights> {
        match self.kind {
            WeightsKindSpec::Uniform => {
                if self.values.is_some() {
                    return Err(Error::Config("uniform weights take no values".into()));
                }
                Ok(Weights::Uniform)
            }
            WeightsKindSpec::Custom => {
                let values = self
                    .values
                    .as_ref()
                    .ok_or_else(|| Error::Config("custom weights need values".into()))?;
                if values.len() != grid {
                    return Err(Error::Config(format!(
                        "weights need {grid} entries, got {}",
                        values.len()
                    )));
                }
                Ok(Weights::Custom(
                    values.iter().map(|[re, im]| c64(*re, *im)).collect(),
                ))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LocalitySpec {
    Local,
    #[default]
    Nonlocal,
}

/// Structure-map banks for the relabeling experiments: how many maps, how
/// strong the coupling, and an optional bank seed (defaults to the master
/// seed). Map `i` of the product bank uses seed `base + 1 + i`, map `i` of
/// the coupled bank `base + 101 + i`, and invariance case `i` `base + 201 + i`.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TpsSpec {
    #[serde(default)]
    pub locality: LocalitySpec,
    #[serde(default = "default_strength")]
    pub strength: f64,
    #[serde(default = "default_map_count")]
    pub count: usize,
    #[serde(default = "default_invariance_count")]
    pub invariance_count: usize,
    #[serde(default)]
    pub seed: Option<u64>,
}

fn default_strength() -> f64 {
    0.5
}

fn default_map_count() -> usize {
    20
}

fn default_invariance_count() -> usize {
    50
}

impl Default for TpsSpec {
    fn default() -> Self {
        TpsSpec {
            locality: LocalitySpec::Nonlocal,
            strength: default_strength(),
            count: default_map_count(),
            invariance_count: default_invariance_count(),
            seed: None,
        }
    }
}

/// Observer/record model parameters. For the record scenario `steps` and
/// `symbols` are exact; for the entanglement-arrow scenario they are upper
/// bounds that each seeded case samples under.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObserverSpec {
    pub steps: usize,
    pub symbols: usize,
    #[serde(default)]
    pub initial_symbol: usize,
    #[serde(default = "default_reorderings")]
    pub reorderings: usize,
    #[serde(default = "default_arrow_cases")]
    pub cases: usize,
}

fn default_reorderings() -> usize {
    100
}

fn default_arrow_cases() -> usize {
    50
}

/// Where to write `report.json` and `timeseries.csv`.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    pub dir: PathBuf,
}
