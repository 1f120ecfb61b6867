use std::cmp::Ordering;

use floquet_kick::error_analysis::{
    avg_infidelity_stochastic, coefficient_table, leading_error_trace, overhead_ratio_analytic, overhead_ratio_numeric,
    qhiffs_error_closed_form, ErrorModelParams, OverheadOptions,
};
use floquet_kick::{
    compile_qhiffs, evolve_exact, ground_state, nnn_correlation, qhiffs_evolve, sample_correlation, trotter_evolve,
    Circuit, EvolutionSettings, Exact, FloquetHamiltonian, GateCounts, LatticeSpec, ModelDescription, Qhiffs,
    StateVector,
};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{Config, EvolutionConfig, InitialState, Method, ScanColumn, ScanVariable};
use crate::{to_csv, RunError, HEADER};

/// Seed of grid point `index`, independent of execution order.
fn point_seed(master: u64, index: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(index);
    rng.next_u64()
}

fn require<T>(section: Option<&T>, name: &str) -> Result<T, RunError>
where
    T: Clone,
{
    section.cloned().ok_or_else(|| RunError::Config(format!("missing [{name}] table")))
}

fn check_evolution(ev: &EvolutionConfig) -> Result<(), RunError> {
    if ev.methods.is_empty() {
        return Err(RunError::Config("methods: empty list".into()));
    }
    if !(1..=2).contains(&ev.trotter_order) {
        return Err(RunError::Config(format!("trotter_order: {} is not 1 or 2", ev.trotter_order)));
    }
    if ev.qhiffs_order > 2 {
        return Err(RunError::Config(format!("qhiffs_order: {} exceeds 2", ev.qhiffs_order)));
    }
    if ev.trotter_steps_per_period == 0 {
        return Err(RunError::Config("trotter_steps_per_period: must be positive".into()));
    }
    Ok(())
}

fn initial_state(h: &FloquetHamiltonian, ev: &EvolutionConfig) -> Result<StateVector, RunError> {
    let n = h.n_qubits();
    Ok(match ev.initial {
        InitialState::Ground => ground_state(&h.hamiltonian_at(ev.t0), n)?.1,
        InitialState::Zero => StateVector::zero_state(n)?,
    })
}

fn evolve(
    h: &FloquetHamiltonian,
    psi: &StateVector,
    t: f64,
    method: Method,
    ev: &EvolutionConfig,
) -> Result<StateVector, RunError> {
    let t0 = ev.t0;
    if t == t0 {
        return Ok(psi.clone());
    }
    Ok(match method {
        Method::Exact => evolve_exact(h, psi, t0, t, &EvolutionSettings::default())?,
        Method::Qhiffs => qhiffs_evolve(h, psi, t0, t, ev.qhiffs_order)?.0,
        Method::Trotter => {
            let periods = ((t - t0) / h.period()).abs();
            let m = ((periods * ev.trotter_steps_per_period as f64).ceil() as usize).max(1);
            trotter_evolve(h, psi, t0, t, m, ev.trotter_order)?
        }
    })
}

fn measure(psi: &StateVector, spec: &LatticeSpec, shots: usize, seed: u64) -> Result<(f64, Option<f64>), RunError> {
    if shots == 0 {
        Ok((nnn_correlation(psi, spec)?, None))
    } else {
        let s = sample_correlation(psi, spec, shots, seed)?;
        Ok((s.mean, Some(s.two_sigma)))
    }
}

#[derive(Serialize, Clone, Debug, PartialEq)]
pub struct TimeseriesRow {
    pub t: f64,
    pub t_over_t: f64,
    pub method: &'static str,
    pub correlation: f64,
    pub two_sigma: Option<f64>,
}

pub const TIMESERIES_COLUMNS: [&str; 5] = ["t", "t_over_T", "method", "correlation", "two_sigma"];

/// Correlation function along a time grid for each method, starting from
/// one initial state.
pub fn run_timeseries(cfg: &Config, seed: u64) -> Result<Vec<TimeseriesRow>, RunError> {
    let model = cfg.model()?;
    let ts = require(cfg.timeseries.as_ref(), "timeseries")?;
    let ev = ts.evolution();
    check_evolution(&ev)?;
    if ts.t_over_t.is_empty() {
        return Err(RunError::Config("t_over_T: empty list".into()));
    }
    let spec = model.lattice()?;
    let h: FloquetHamiltonian = model.build()?;
    let psi0 = initial_state(&h, &ev)?;
    let points: Vec<(usize, f64, Method)> = ts
        .t_over_t
        .iter()
        .flat_map(|&q| ev.methods.iter().map(move |&m| (q, m)))
        .enumerate()
        .map(|(i, (q, m))| (i, q, m))
        .collect();
    let mut rows: Vec<TimeseriesRow> = points
        .par_iter()
        .map(|&(i, q, method)| {
            let t = q * h.period();
            let psi = evolve(&h, &psi0, t, method, &ev)?;
            let (correlation, two_sigma) = measure(&psi, &spec, ev.shots, point_seed(seed, i as u64))?;
            Ok(TimeseriesRow { t, t_over_t: q, method: method.name(), correlation, two_sigma })
        })
        .collect::<Result<_, RunError>>()?;
    rows.sort_by(|a, b| a.t.total_cmp(&b.t).then(a.method.cmp(b.method)));
    Ok(rows)
}

#[derive(Serialize, Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub h: f64,
    pub kappa: f64,
    pub t: f64,
    pub method: &'static str,
    pub correlation: f64,
}

pub const SWEEP_COLUMNS: [&str; 5] = ["h", "kappa", "t", "method", "correlation"];

fn with_couplings(model: &ModelDescription, h: f64, kappa: f64) -> ModelDescription {
    let mut m = model.clone();
    m.h = h;
    m.kappa = kappa;
    m
}

/// Correlation on an `h × κ` grid; each grid point starts from the ground
/// state of its own `H(t₀)`.
pub fn run_sweep(cfg: &Config, seed: u64) -> Result<Vec<SweepRow>, RunError> {
    let model = cfg.model()?;
    let sw = require(cfg.sweep.as_ref(), "sweep")?;
    let ev = sw.evolution();
    check_evolution(&ev)?;
    if sw.h.is_empty() || sw.kappa.is_empty() || sw.t_over_t.is_empty() {
        return Err(RunError::Config("sweep grids must be non-empty".into()));
    }
    let spec = model.lattice()?;
    let grid: Vec<(usize, f64, f64)> =
        sw.h.iter()
            .flat_map(|&h| sw.kappa.iter().map(move |&k| (h, k)))
            .enumerate()
            .map(|(i, (h, k))| (i, h, k))
            .collect();
    let per_point: Vec<Vec<SweepRow>> = grid
        .par_iter()
        .map(|&(i, hv, kv)| {
            let ham: FloquetHamiltonian = with_couplings(model, hv, kv).build()?;
            let psi0 = initial_state(&ham, &ev)?;
            let mut rows = Vec::new();
            for (j, &q) in sw.t_over_t.iter().enumerate() {
                let t = q * ham.period();
                for (k, &method) in ev.methods.iter().enumerate() {
                    let psi = evolve(&ham, &psi0, t, method, &ev)?;
                    let idx = ((i * sw.t_over_t.len() + j) * ev.methods.len() + k) as u64;
                    let (correlation, _) = measure(&psi, &spec, ev.shots, point_seed(seed, idx))?;
                    rows.push(SweepRow { h: hv, kappa: kv, t, method: method.name(), correlation });
                }
            }
            Ok(rows)
        })
        .collect::<Result<_, RunError>>()?;
    let mut rows: Vec<SweepRow> = per_point.into_iter().flatten().collect();
    rows.sort_by(|a, b| {
        a.h.total_cmp(&b.h).then(a.kappa.total_cmp(&b.kappa)).then(a.t.total_cmp(&b.t)).then(a.method.cmp(b.method))
    });
    Ok(rows)
}

#[derive(Serialize, Clone, Debug, PartialEq)]
pub struct ErrorScanRow {
    pub sweep_value: f64,
    pub infidelity_measured: Option<f64>,
    pub infidelity_closed_form: Option<f64>,
    pub infidelity_engine: Option<f64>,
    #[serde(rename = "R_numeric")]
    pub r_numeric: Option<usize>,
    #[serde(rename = "R_analytic")]
    pub r_analytic: Option<f64>,
}

pub const ERROR_SCAN_COLUMNS: [&str; 6] =
    ["sweep_value", "infidelity_measured", "infidelity_closed_form", "infidelity_engine", "R_numeric", "R_analytic"];

/// QHiFFS infidelity (measured, closed form, symbolic engine) and overhead
/// ratios along a scan of `t`, `ω` or chain length, with `t₀ = 0`.
pub fn run_error_scan(cfg: &Config, seed: u64) -> Result<Vec<ErrorScanRow>, RunError> {
    let base = cfg.model()?;
    let sc = require(cfg.error_scan.as_ref(), "error_scan")?;
    if sc.values.is_empty() {
        return Err(RunError::Config("values: empty list".into()));
    }
    if sc.n_states < 2 {
        return Err(RunError::Config("n_states: need at least 2".into()));
    }
    let wants = |c: ScanColumn| sc.methods.contains(&c);
    if wants(ScanColumn::Engine) && sc.qhiffs_order > 1 {
        return Err(RunError::Config("engine column needs qhiffs_order 0 or 1".into()));
    }
    if sc.variable == ScanVariable::N && base.dims != 1 {
        return Err(RunError::Config("variable = \"n\" needs a one-dimensional model".into()));
    }
    let mut rows = Vec::with_capacity(sc.values.len());
    for (i, &v) in sc.values.iter().enumerate() {
        let mut model = base.clone();
        match sc.variable {
            ScanVariable::Omega => model.omega = v,
            ScanVariable::N => {
                if v < 1.0 || v.fract() != 0.0 {
                    return Err(RunError::Config(format!("values: {v} is not a chain length")));
                }
                model.extents = vec![v as usize];
            }
            ScanVariable::T => {}
        }
        let spec = model.lattice()?;
        let h: FloquetHamiltonian = model.build()?;
        let q = if sc.variable == ScanVariable::T { v } else { sc.t_over_t };
        let t = q * h.period();
        let point = point_seed(seed, i as u64);
        let params = ErrorModelParams::from_model(&spec, &model.params()?)?;

        let infidelity_measured = if wants(ScanColumn::Measured) {
            let exact = Exact { h: &h, t0: 0.0, t, settings: EvolutionSettings::default() };
            let qh = Qhiffs::new(&h, 0.0, t, sc.qhiffs_order)?;
            Some(avg_infidelity_stochastic(&exact, &qh, sc.n_states, point)?.mean)
        } else {
            None
        };
        let infidelity_closed_form =
            (wants(ScanColumn::ClosedForm) && spec.dims() == 2).then(|| 2.0 * qhiffs_error_closed_form(&params, t));
        let infidelity_engine = if wants(ScanColumn::Engine) {
            Some(2.0 * leading_error_trace(&h, sc.qhiffs_order + 1, 0.0, t)?)
        } else {
            None
        };
        let r_numeric = if sc.r_numeric {
            let opts = OverheadOptions {
                qhiffs_order: sc.qhiffs_order,
                n_states: sc.n_states,
                seed: point,
                m_cap: sc.r_cap,
                exact: EvolutionSettings::default(),
            };
            let r = overhead_ratio_numeric(&h, 0.0, t, sc.trotter_order, &opts)?;
            if r.cap_hit {
                log::warn!("step cap {} reached at sweep value {v}", sc.r_cap);
            }
            Some(r.ratio)
        } else {
            None
        };
        let r_analytic = if sc.r_analytic {
            Some(overhead_ratio_analytic(&params, t, sc.qhiffs_order.max(1) as u32)?.ratio)
        } else {
            None
        };
        rows.push(ErrorScanRow {
            sweep_value: v,
            infidelity_measured,
            infidelity_closed_form,
            infidelity_engine,
            r_numeric,
            r_analytic,
        });
    }
    rows.sort_by(|a, b| a.sweep_value.partial_cmp(&b.sweep_value).unwrap_or(Ordering::Equal));
    Ok(rows)
}

/// Compiled circuit with its listing.
#[derive(Clone, Debug)]
pub struct CompileOutput {
    pub circuit: Circuit,
    pub counts: GateCounts,
    pub text: String,
}

/// First-order QHiFFS circuit for the configured model.
pub fn run_compile(cfg: &Config) -> Result<CompileOutput, RunError> {
    let model = cfg.model()?;
    let cc = require(cfg.compile.as_ref(), "compile")?;
    let h: FloquetHamiltonian = model.build()?;
    let t = cc.t_over_t * h.period();
    let mut circuit = compile_qhiffs(&h, cc.t0, t, 1)?;
    if cc.peephole {
        circuit = circuit.strip_trailing_diagonal();
    }
    let counts = circuit.counts();
    let text = format!("{HEADER}\n# qubits {}\n# {counts}\n{}", circuit.n_qubits(), circuit.emit());
    Ok(CompileOutput { circuit, counts, text })
}

#[derive(Serialize, Clone, Debug, PartialEq)]
pub struct CoefficientCsvRow {
    #[serde(rename = "D")]
    pub d: u32,
    pub model: &'static str,
    pub two_nn: u32,
    pub c_t2_num: i128,
    pub c_t2_den: i128,
    pub c_t2_float: f64,
}

pub const COEFFS_COLUMNS: [&str; 6] = ["D", "model", "two_nn", "c_t2_num", "c_t2_den", "c_t2_float"];

/// The exact quadratic-error coefficient table.
pub fn run_coeffs() -> Vec<CoefficientCsvRow> {
    coefficient_table::<i128>()
        .into_iter()
        .map(|r| CoefficientCsvRow {
            d: r.dim,
            model: r.class.name(),
            two_nn: r.two_nn,
            c_t2_num: *r.ct2.numer(),
            c_t2_den: *r.ct2.denom(),
            c_t2_float: r.value_f64(),
        })
        .collect()
}

/// CSV text for each run type.
pub fn render_timeseries(rows: &[TimeseriesRow]) -> Result<String, RunError> {
    to_csv(&TIMESERIES_COLUMNS, rows)
}

pub fn render_sweep(rows: &[SweepRow]) -> Result<String, RunError> {
    to_csv(&SWEEP_COLUMNS, rows)
}

pub fn render_error_scan(rows: &[ErrorScanRow]) -> Result<String, RunError> {
    to_csv(&ERROR_SCAN_COLUMNS, rows)
}

pub fn render_coeffs(rows: &[CoefficientCsvRow]) -> Result<String, RunError> {
    to_csv(&COEFFS_COLUMNS, rows)
}
