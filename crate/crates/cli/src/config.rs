//! Run configuration files.
//!
//! A config is TOML with a `[model]` table and one table per run type.
//! Unknown keys anywhere are errors.
//!
//! ```toml
//! seed = 7
//!
//! [model]
//! dims = 1
//! extents = [8]
//! periodic = true
//! J = 1.0
//! kappa = 0.25
//! h = 2.0
//! omega = 30.0
//!
//! [timeseries]
//! t_over_T = [0.0, 0.5, 1.0]
//! methods = ["exact", "qhiffs"]
//! ```

use floquet_kick::ModelDescription;
use serde::Deserialize;

use crate::RunError;

#[derive(Deserialize, Clone, Debug, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct Config {
    /// Master seed; `--seed` overrides it.
    #[serde(default)]
    pub seed: Option<u64>,
    pub model: Option<ModelDescription>,
    pub timeseries: Option<TimeseriesConfig>,
    pub sweep: Option<SweepConfig>,
    pub error_scan: Option<ErrorScanConfig>,
    pub compile: Option<CompileConfig>,
}

impl Config {
    pub fn parse(text: &str) -> Result<Self, RunError> {
        let cfg: Self = toml::from_str(text).map_err(|e| RunError::Config(e.to_string()))?;
        if let Some(m) = &cfg.model {
            m.lattice().map_err(|e| RunError::Config(format!("model: {e}")))?;
        }
        Ok(cfg)
    }

    pub fn model(&self) -> Result<&ModelDescription, RunError> {
        self.model.as_ref().ok_or_else(|| RunError::Config("missing [model] table".into()))
    }
}

#[derive(Deserialize, Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Exact,
    Qhiffs,
    Trotter,
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::Exact => "exact",
            Method::Qhiffs => "qhiffs",
            Method::Trotter => "trotter",
        }
    }
}

/// Initial state of correlation runs.
#[derive(Deserialize, Clone, Copy, Debug, PartialEq, Eq, Default)]
#[serde(rename_all = "lowercase")]
pub enum InitialState {
    /// Ground state of `H(t₀)`.
    #[default]
    Ground,
    /// `|0…0⟩`.
    Zero,
}

/// Settings shared by the correlation runs.
#[derive(Clone, Debug, PartialEq)]
pub struct EvolutionConfig {
    pub methods: Vec<Method>,
    pub qhiffs_order: usize,
    pub trotter_order: usize,
    pub trotter_steps_per_period: usize,
    pub shots: usize,
    pub initial: InitialState,
    pub t0: f64,
}

macro_rules! evolution_of {
    ($t:ty) => {
        impl $t {
            pub fn evolution(&self) -> EvolutionConfig {
                EvolutionConfig {
                    methods: self.methods.clone(),
                    qhiffs_order: self.qhiffs_order,
                    trotter_order: self.trotter_order,
                    trotter_steps_per_period: self.trotter_steps_per_period,
                    shots: self.shots,
                    initial: self.initial,
                    t0: self.t0,
                }
            }
        }
    };
}
evolution_of!(TimeseriesConfig);
evolution_of!(SweepConfig);

fn default_methods() -> Vec<Method> {
    vec![Method::Exact, Method::Qhiffs]
}
fn one() -> usize {
    1
}
fn default_steps_per_period() -> usize {
    20
}

#[derive(Deserialize, Clone, Debug, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct TimeseriesConfig {
    /// Evaluation times in units of the drive period.
    #[serde(rename = "t_over_T")]
    pub t_over_t: Vec<f64>,
    #[serde(default = "default_methods")]
    pub methods: Vec<Method>,
    #[serde(default = "one")]
    pub qhiffs_order: usize,
    #[serde(default = "one")]
    pub trotter_order: usize,
    #[serde(default = "default_steps_per_period")]
    pub trotter_steps_per_period: usize,
    /// Shots per point; 0 reports the exact expectation value.
    #[serde(default)]
    pub shots: usize,
    #[serde(default)]
    pub initial: InitialState,
    #[serde(default)]
    pub t0: f64,
}

#[derive(Deserialize, Clone, Debug, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub h: Vec<f64>,
    pub kappa: Vec<f64>,
    #[serde(rename = "t_over_T")]
    pub t_over_t: Vec<f64>,
    #[serde(default = "default_methods")]
    pub methods: Vec<Method>,
    #[serde(default = "one")]
    pub qhiffs_order: usize,
    #[serde(default = "one")]
    pub trotter_order: usize,
    #[serde(default = "default_steps_per_period")]
    pub trotter_steps_per_period: usize,
    /// Shots per point; 0 reports the exact expectation value.
    #[serde(default)]
    pub shots: usize,
    #[serde(default)]
    pub initial: InitialState,
    #[serde(default)]
    pub t0: f64,
}

#[derive(Deserialize, Clone, Copy, Debug, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum ScanVariable {
    T,
    Omega,
    N,
}

#[derive(Deserialize, Clone, Copy, Debug, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum ScanColumn {
    Measured,
    ClosedForm,
    Engine,
}

#[derive(Deserialize, Clone, Debug, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ErrorScanConfig {
    pub variable: ScanVariable,
    /// Times in units of T, drive frequencies, or chain lengths.
    pub values: Vec<f64>,
    /// Evaluation time in units of T when the scan is not over time.
    #[serde(rename = "t_over_T", default = "default_scan_time")]
    pub t_over_t: f64,
    #[serde(default = "default_columns")]
    pub methods: Vec<ScanColumn>,
    #[serde(default = "default_states")]
    pub n_states: usize,
    #[serde(default = "one")]
    pub qhiffs_order: usize,
    #[serde(default)]
    pub r_numeric: bool,
    #[serde(default)]
    pub r_analytic: bool,
    #[serde(default = "two")]
    pub trotter_order: usize,
    #[serde(default = "default_cap")]
    pub r_cap: usize,
}

fn default_scan_time() -> f64 {
    10.0
}
fn default_columns() -> Vec<ScanColumn> {
    vec![ScanColumn::Measured, ScanColumn::Engine]
}
fn default_states() -> usize {
    16
}
fn two() -> usize {
    2
}
fn default_cap() -> usize {
    1 << 14
}

#[derive(Deserialize, Clone, Debug, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct CompileConfig {
    #[serde(rename = "t_over_T")]
    pub t_over_t: f64,
    #[serde(default)]
    pub t0: f64,
    /// Drop diagonal gates that only precede the final Z-basis measurement.
    #[serde(default)]
    pub peephole: bool,
}
