//! Reference solution of the time-ordered propagator.
//!
//! Each substep is the symmetric product `D/2 · R/2 · G · R/2 · D/2` where `D`
//! is the diagonal part of `H₀`, `R` its off-diagonal rest and `G` the drive
//! integrated exactly over the substep. Step counts double until two
//! successive states agree to the tolerance.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::lattice::FloquetHamiltonian;
use crate::pauli::PauliSum;
use crate::scalar::{cr, Real, C};
use crate::state::{apply_one_local, diagonal_energies, exp_apply_in_place, StateVector};

/// Splitting scheme of [`evolve_exact`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scheme {
    StrangSplit,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EvolutionSettings<T: Real = f64> {
    /// Initial substep; `None` means one two-hundredth of the drive period.
    pub dt: Option<T>,
    pub scheme: Scheme,
    /// Target state error for the halving loop.
    pub tolerance: T,
    pub max_halvings: usize,
}

impl<T: Real> Default for EvolutionSettings<T> {
    fn default() -> Self {
        Self { dt: None, scheme: Scheme::StrangSplit, tolerance: T::of(1e-8), max_halvings: 14 }
    }
}

/// Outcome of a certified evolution.
#[derive(Clone, Debug)]
pub struct ExactEvolution<T: Real = f64> {
    pub state: StateVector<T>,
    pub steps: usize,
    /// Distance between the last two refinements.
    pub last_change: T,
}

/// Precomputed pieces shared by all substeps of one step size.
struct Stepper<'a, T: Real> {
    h: &'a FloquetHamiltonian<T>,
    energies: Vec<T>,
    offdiag: PauliSum<T>,
    one_local_drive: bool,
}

impl<'a, T: Real> Stepper<'a, T> {
    fn new(h: &'a FloquetHamiltonian<T>) -> Result<Self> {
        let n = h.n_qubits();
        let mut diag = PauliSum::zero(n);
        let mut offdiag = PauliSum::zero(n);
        for (p, c) in h.h0().iter() {
            if p.is_diagonal() {
                diag.add_term(p, c);
            } else {
                offdiag.add_term(p, c);
            }
        }
        let one_local_drive = h.harmonics().values().all(|v| v.is_one_local() && v.normalized_trace() == cr(T::zero()));
        Ok(Self { h, energies: diagonal_energies(&diag)?, offdiag, one_local_drive })
    }

    fn phase_table(&self, theta: T) -> Vec<C<T>> {
        self.energies
            .iter()
            .map(|e| {
                let a = -theta * *e;
                Complex::new(a.cos(), a.sin())
            })
            .collect()
    }

    fn run(&self, psi: &StateVector<T>, t0: T, t: T, steps: usize) -> Result<StateVector<T>> {
        let mut out = psi.clone();
        let dt = (t - t0) / T::of_usize(steps);
        let half = self.phase_table(dt * T::of(0.5));
        let full = self.phase_table(dt);
        let half_dt = dt * T::of(0.5);
        out.apply_diagonal(|b| half[b]);
        for k in 0..steps {
            let a = t0 + dt * T::of_usize(k);
            let b = if k + 1 == steps { t } else { t0 + dt * T::of_usize(k + 1) };
            if !self.offdiag.is_empty() {
                exp_apply_in_place(&self.offdiag, half_dt, &mut out)?;
            }
            let g = self.h.drive_integral(a, b);
            if self.one_local_drive {
                apply_one_local(&g, T::one(), &mut out);
            } else {
                exp_apply_in_place(&g, T::one(), &mut out)?;
            }
            if !self.offdiag.is_empty() {
                exp_apply_in_place(&self.offdiag, half_dt, &mut out)?;
            }
            // adjacent half steps of the diagonal part merge
            let table = if k + 1 == steps { &half } else { &full };
            out.apply_diagonal(|b| table[b]);
        }
        Ok(out)
    }
}

/// Evolves with exactly `steps` substeps (no certification).
pub fn evolve_fixed_steps<T: Real>(
    h: &FloquetHamiltonian<T>,
    psi: &StateVector<T>,
    t0: T,
    t: T,
    steps: usize,
) -> Result<StateVector<T>> {
    if steps == 0 {
        return Err(Error::InvalidArgument("zero steps".into()));
    }
    if psi.n_qubits() != h.n_qubits() {
        return Err(Error::QubitMismatch(h.n_qubits(), psi.n_qubits()));
    }
    if t == t0 {
        return Ok(psi.clone());
    }
    Stepper::new(h)?.run(psi, t0, t, steps)
}

/// Certified reference evolution from `t0` to `t`.
pub fn evolve_exact<T: Real>(
    h: &FloquetHamiltonian<T>,
    psi: &StateVector<T>,
    t0: T,
    t: T,
    settings: &EvolutionSettings<T>,
) -> Result<StateVector<T>> {
    Ok(evolve_exact_report(h, psi, t0, t, settings)?.state)
}

/// [`evolve_exact`] with the step count and final refinement change.
pub fn evolve_exact_report<T: Real>(
    h: &FloquetHamiltonian<T>,
    psi: &StateVector<T>,
    t0: T,
    t: T,
    settings: &EvolutionSettings<T>,
) -> Result<ExactEvolution<T>> {
    if psi.n_qubits() != h.n_qubits() {
        return Err(Error::QubitMismatch(h.n_qubits(), psi.n_qubits()));
    }
    if psi.n_qubits() > 20 {
        return Err(Error::Capacity(format!("{} qubits exceed the reference cap of 20", psi.n_qubits())));
    }
    if t == t0 {
        return Ok(ExactEvolution { state: psi.clone(), steps: 0, last_change: T::zero() });
    }
    let dt = settings.dt.unwrap_or(h.period() / T::of(200.0));
    if !(dt > T::zero()) {
        return Err(Error::InvalidArgument("dt must be positive".into()));
    }
    let stepper = Stepper::new(h)?;
    let mut steps = ((t - t0).abs() / dt).ceil().to_usize().unwrap_or(1).max(1);
    let mut prev = stepper.run(psi, t0, t, steps)?;
    for _ in 0..settings.max_halvings {
        steps *= 2;
        let next = stepper.run(psi, t0, t, steps)?;
        let change = next.distance(&prev);
        if change < settings.tolerance {
            return Ok(ExactEvolution { state: next, steps, last_change: change });
        }
        prev = next;
    }
    Err(Error::NonConvergence(format!(
        "state change above {} after {} halvings",
        settings.tolerance, settings.max_halvings
    )))
}
