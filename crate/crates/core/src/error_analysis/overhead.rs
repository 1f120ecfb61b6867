//! Trotter discretization bounds and the Trotter-to-QHiFFS overhead ratio.

use crate::error::{Error, Result};
use crate::evolve::EvolutionSettings;
use crate::lattice::FloquetHamiltonian;
use crate::propagators::{Exact, Propagator, Qhiffs, Trotter};
use crate::scalar::Real;
use crate::state::StateVector;

use super::infidelity::{haar_state, state_infidelity, Estimate};
use super::ErrorModelParams;

/// Riemann-sum bound on first-order Trotter infidelity over `τ = t` with `m`
/// steps and drive offset `delta`.
pub fn trotter_error_bound<T: Real>(p: &ErrorModelParams<T>, t: T, m: usize, delta: T) -> Result<T> {
    if m == 0 {
        return Err(Error::InvalidArgument("m must be at least 1".into()));
    }
    if delta < T::zero() || delta >= T::of(2.0) * T::PI() / p.omega {
        return Err(Error::InvalidArgument("delta must lie in [0, 2π/ω)".into()));
    }
    let m2 = T::of_usize(m).powi(2);
    let base = p.h * p.h * T::of_usize(p.n);
    if delta == T::zero() {
        return Ok(base * t.powi(4) * p.omega.powi(2) / (T::of(8.0) * m2));
    }
    let inner = (t - delta) * p.omega / T::of(2.0) + T::PI();
    Ok(base * t * t / (T::of(2.0) * m2) * inner * inner)
}

/// Analytic overhead ratio with an optional regime warning.
#[derive(Clone, Debug, PartialEq)]
pub struct AnalyticOverhead<T: Real = f64> {
    pub ratio: T,
    pub warning: Option<String>,
}

/// `R = t ω² (ω/h)^k / (J √(1+κ²))`; `k = 1` gives `tω³/(Jh√(1+κ²))`.
pub fn overhead_ratio_analytic<T: Real>(p: &ErrorModelParams<T>, t: T, k: u32) -> Result<AnalyticOverhead<T>> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    let root = (T::one() + p.kappa * p.kappa).sqrt();
    let ratio = t * p.omega.powi(2) * (p.omega / p.h).powi(k as i32) / (p.j * root);
    // local H₀ norm per site: 2D bonds of each range
    let local = T::of(2.0 * p.dim as f64) * p.j.abs() * (T::one() + p.kappa.abs());
    let scale = local.max(p.h.abs());
    let warning = (p.omega < T::of(5.0) * scale)
        .then(|| format!("ω = {} is not well above the local energy scale {}", p.omega, scale));
    if let Some(w) = &warning {
        log::warn!("{w}");
    }
    Ok(AnalyticOverhead { ratio, warning })
}

/// Settings of the numeric overhead search.
#[derive(Clone, Debug)]
pub struct OverheadOptions<T: Real = f64> {
    /// QHiFFS truncation order.
    pub qhiffs_order: usize,
    pub n_states: usize,
    pub seed: u64,
    /// Largest Trotter step count tried.
    pub m_cap: usize,
    pub exact: EvolutionSettings<T>,
}

impl<T: Real> Default for OverheadOptions<T> {
    fn default() -> Self {
        Self { qhiffs_order: 1, n_states: 8, seed: 1, m_cap: 1 << 16, exact: EvolutionSettings::default() }
    }
}

/// Outcome of [`overhead_ratio_numeric`].
#[derive(Clone, Debug, PartialEq)]
pub struct NumericOverhead<T: Real = f64> {
    /// Minimal step count meeting the target, or the cap.
    pub ratio: usize,
    pub cap_hit: bool,
    /// QHiFFS infidelity against the exact propagator.
    pub target: Estimate<T>,
    /// Trotter infidelity at `ratio` steps.
    pub trotter: Estimate<T>,
}

/// Smallest Trotter step count whose infidelity (vs exact) does not exceed
/// the QHiFFS infidelity, both averaged over the same Haar states. Each
/// Trotter step costs the two-qubit gates of one QHiFFS circuit, so the
/// step count is the depth ratio.
pub fn overhead_ratio_numeric<T: Real>(
    h: &FloquetHamiltonian<T>,
    t0: T,
    t: T,
    trotter_order: usize,
    opts: &OverheadOptions<T>,
) -> Result<NumericOverhead<T>> {
    use rayon::prelude::*;
    let n = h.n_qubits();
    if opts.n_states < 2 {
        return Err(Error::InvalidArgument("need at least two states".into()));
    }
    let states: Vec<StateVector<T>> =
        (0..opts.n_states as u64).map(|i| haar_state(n, opts.seed, i)).collect::<Result<_>>()?;
    let exact = Exact { h, t0, t, settings: opts.exact };
    let reference: Vec<StateVector<T>> = states.par_iter().map(|s| exact.apply(s)).collect::<Result<_>>()?;
    let qh = Qhiffs::new(h, t0, t, opts.qhiffs_order)?;
    let measure = |p: &(dyn Propagator<T> + Sync)| -> Result<Estimate<T>> {
        let xs: Vec<T> = states
            .par_iter()
            .zip(&reference)
            .map(|(s, r)| Ok(state_infidelity(r, &p.apply(s)?)))
            .collect::<Result<_>>()?;
        Ok(Estimate::from_samples(&xs))
    };
    let target = measure(&qh)?;
    let trotter_at = |m: usize| measure(&Trotter { h, t0, t, m, order: trotter_order });

    let mut lo = 0usize;
    let mut m = 1usize;
    let mut est = trotter_at(m)?;
    while est.mean > target.mean {
        if m >= opts.m_cap {
            return Ok(NumericOverhead { ratio: opts.m_cap, cap_hit: true, target, trotter: est });
        }
        lo = m;
        m = (m * 2).min(opts.m_cap);
        est = trotter_at(m)?;
    }
    // invariant: lo fails (or is 0), m passes
    let mut hi = m;
    let mut best = est;
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        let e = trotter_at(mid)?;
        if e.mean <= target.mean {
            hi = mid;
            best = e;
        } else {
            lo = mid;
        }
    }
    Ok(NumericOverhead { ratio: hi, cap_hit: false, target, trotter: best })
}
