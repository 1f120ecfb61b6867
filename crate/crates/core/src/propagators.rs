//! QHiFFS, Trotter and exact propagators behind one interface, plus dense
//! unitary extraction.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::evolve::{evolve_exact, EvolutionSettings};
use crate::kick::{expand, heff_truncated, kick_at_order, HighFreqExpansion};
use crate::lattice::FloquetHamiltonian;
use crate::pauli::PauliSum;
use crate::scalar::{c0, Real, C};
use crate::state::{apply_one_local, diagonal_energies, exp_apply_in_place, ExpPath, StateVector};

/// Largest register for [`unitary_of`].
pub const MAX_UNITARY_QUBITS: usize = 12;

/// Anything that maps a state to an evolved state.
pub trait Propagator<T: Real> {
    fn n_qubits(&self) -> usize;
    fn apply(&self, psi: &StateVector<T>) -> Result<StateVector<T>>;
}

/// Which kernels a QHiFFS evolution needed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QhiffsReport {
    pub initial_kick: ExpPath,
    pub heff: ExpPath,
    pub final_kick: ExpPath,
}

impl QhiffsReport {
    /// True when some factor had no exact structured kernel and was applied
    /// by the series fallback.
    pub fn used_fallback(&self) -> bool {
        [self.initial_kick, self.heff, self.final_kick].contains(&ExpPath::Series)
    }
}

/// QHiFFS propagator `e^{−iK(t)} e^{−i(t−t₀)H_eff} e^{+iK(t₀)}` truncated at
/// `order` (0 gives plain `H₀` evolution).
#[derive(Clone, Debug)]
pub struct Qhiffs<T: Real = f64> {
    pub expansion: HighFreqExpansion<T>,
    pub omega: T,
    pub t0: T,
    pub t: T,
    pub order: usize,
}

impl<T: Real> Qhiffs<T> {
    pub fn new(h: &FloquetHamiltonian<T>, t0: T, t: T, order: usize) -> Result<Self> {
        let expansion = expand(h, order)?;
        Ok(Self { expansion, omega: h.omega(), t0, t, order })
    }

    pub fn evolve(&self, psi: &StateVector<T>) -> Result<(StateVector<T>, QhiffsReport)> {
        let n = psi.n_qubits();
        if n != self.expansion.heff[0].n_qubits() {
            return Err(Error::QubitMismatch(self.expansion.heff[0].n_qubits(), n));
        }
        let mut out = psi.clone();
        let k0 = kick_at_order(&self.expansion, self.t0, self.omega, self.order);
        let initial_kick = exp_apply_in_place(&k0, -T::one(), &mut out)?;
        let heff = heff_truncated(&self.expansion, self.omega, self.order);
        let heff_path = exp_apply_in_place(&heff, self.t - self.t0, &mut out)?;
        let k1 = kick_at_order(&self.expansion, self.t, self.omega, self.order);
        let final_kick = exp_apply_in_place(&k1, T::one(), &mut out)?;
        Ok((out, QhiffsReport { initial_kick, heff: heff_path, final_kick }))
    }
}

impl<T: Real> Propagator<T> for Qhiffs<T> {
    fn n_qubits(&self) -> usize {
        self.expansion.heff[0].n_qubits()
    }
    fn apply(&self, psi: &StateVector<T>) -> Result<StateVector<T>> {
        Ok(self.evolve(psi)?.0)
    }
}

/// QHiFFS evolution of order 1 or 2; reports whether a fallback kernel ran.
pub fn qhiffs_evolve<T: Real>(
    h: &FloquetHamiltonian<T>,
    psi: &StateVector<T>,
    t0: T,
    t: T,
    order: usize,
) -> Result<(StateVector<T>, QhiffsReport)> {
    Qhiffs::new(h, t0, t, order)?.evolve(psi)
}

/// Product-formula propagator with `m` steps.
#[derive(Clone, Debug)]
pub struct Trotter<'a, T: Real = f64> {
    pub h: &'a FloquetHamiltonian<T>,
    pub t0: T,
    pub t: T,
    pub m: usize,
    pub order: usize,
}

impl<T: Real> Propagator<T> for Trotter<'_, T> {
    fn n_qubits(&self) -> usize {
        self.h.n_qubits()
    }
    fn apply(&self, psi: &StateVector<T>) -> Result<StateVector<T>> {
        trotter_evolve(self.h, psi, self.t0, self.t, self.m, self.order)
    }
}

/// Splits `H₀` into its diagonal part and the remaining terms.
fn split_h0<T: Real>(h: &FloquetHamiltonian<T>) -> (PauliSum<T>, PauliSum<T>) {
    let n = h.n_qubits();
    let (mut d, mut r) = (PauliSum::zero(n), PauliSum::zero(n));
    for (p, c) in h.h0().iter() {
        if p.is_diagonal() {
            d.add_term(p, c);
        } else {
            r.add_term(p, c);
        }
    }
    (d, r)
}

/// Trotter evolution over `m` equal steps.
///
/// Order 1 applies `e^{−iδt V(t_r)}` then `e^{−iδt H₀}` for each step with
/// the drive sampled at the right endpoint `t_r = t₀ + rδt`. Order 2 is the
/// symmetric `H₀/2 · V(midpoint) · H₀/2` product.
pub fn trotter_evolve<T: Real>(
    h: &FloquetHamiltonian<T>,
    psi: &StateVector<T>,
    t0: T,
    t: T,
    m: usize,
    order: usize,
) -> Result<StateVector<T>> {
    if m == 0 {
        return Err(Error::InvalidArgument("m must be at least 1".into()));
    }
    if !(1..=2).contains(&order) {
        return Err(Error::UnsupportedOrder(order));
    }
    if psi.n_qubits() != h.n_qubits() {
        return Err(Error::QubitMismatch(h.n_qubits(), psi.n_qubits()));
    }
    let dt = (t - t0) / T::of_usize(m);
    let (diag, rest) = split_h0(h);
    let energies = diagonal_energies(&diag)?;
    let table = |theta: T| -> Vec<C<T>> {
        energies
            .iter()
            .map(|e| {
                let a = -theta * *e;
                Complex::new(a.cos(), a.sin())
            })
            .collect()
    };
    let one_local = h.harmonics().values().all(|v| v.is_one_local() && v.normalized_trace() == c0());
    let mut out = psi.clone();
    let apply_drive = |out: &mut StateVector<T>, s: T| -> Result<()> {
        let v = h.drive_at(s);
        if one_local {
            apply_one_local(&v, dt, out);
        } else {
            exp_apply_in_place(&v, dt, out)?;
        }
        Ok(())
    };
    match order {
        1 => {
            let full = table(dt);
            for r in 1..=m {
                apply_drive(&mut out, t0 + dt * T::of_usize(r))?;
                // the diagonal part and the remaining static part are separate factors
                if !rest.is_empty() {
                    exp_apply_in_place(&rest, dt, &mut out)?;
                }
                out.apply_diagonal(|b| full[b]);
            }
        }
        _ => {
            let half = table(dt * T::of(0.5));
            let half_dt = dt * T::of(0.5);
            for r in 0..m {
                out.apply_diagonal(|b| half[b]);
                if !rest.is_empty() {
                    exp_apply_in_place(&rest, half_dt, &mut out)?;
                }
                apply_drive(&mut out, t0 + dt * (T::of_usize(r) + T::of(0.5)))?;
                if !rest.is_empty() {
                    exp_apply_in_place(&rest, half_dt, &mut out)?;
                }
                out.apply_diagonal(|b| half[b]);
            }
        }
    }
    Ok(out)
}

/// Certified exact propagator.
#[derive(Clone, Debug)]
pub struct Exact<'a, T: Real = f64> {
    pub h: &'a FloquetHamiltonian<T>,
    pub t0: T,
    pub t: T,
    pub settings: EvolutionSettings<T>,
}

impl<T: Real> Propagator<T> for Exact<'_, T> {
    fn n_qubits(&self) -> usize {
        self.h.n_qubits()
    }
    fn apply(&self, psi: &StateVector<T>) -> Result<StateVector<T>> {
        evolve_exact(self.h, psi, self.t0, self.t, &self.settings)
    }
}

/// The identity map on `n` qubits.
#[derive(Clone, Copy, Debug)]
pub struct Identity(pub usize);

impl<T: Real> Propagator<T> for Identity {
    fn n_qubits(&self) -> usize {
        self.0
    }
    fn apply(&self, psi: &StateVector<T>) -> Result<StateVector<T>> {
        Ok(psi.clone())
    }
}

/// Dense column-major matrix over `2^n` basis states.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseUnitary<T: Real = f64> {
    dim: usize,
    data: Vec<C<T>>,
}

impl<T: Real> DenseUnitary<T> {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> C<T> {
        self.data[col * self.dim + row]
    }

    pub fn column(&self, col: usize) -> &[C<T>] {
        &self.data[col * self.dim..(col + 1) * self.dim]
    }

    /// `Tr(self† other)`.
    pub fn trace_adjoint_product(&self, other: &Self) -> C<T> {
        self.data.iter().zip(&other.data).fold(c0(), |acc, (a, b)| acc + a.conj() * b)
    }

    /// `max |(U†U − I)_{ij}|`.
    pub fn unitarity_defect(&self) -> T {
        let d = self.dim;
        let mut worst = T::zero();
        for i in 0..d {
            for j in 0..d {
                let s = self.column(i).iter().zip(self.column(j)).fold(c0::<T>(), |acc, (a, b)| acc + a.conj() * b);
                let target = if i == j { T::one() } else { T::zero() };
                worst = worst.max((s - Complex::new(target, T::zero())).norm());
            }
        }
        worst
    }
}

/// Dense unitary whose columns are the propagator applied to basis states.
pub fn unitary_of<T: Real, P: Propagator<T> + Sync + ?Sized>(p: &P) -> Result<DenseUnitary<T>> {
    use rayon::prelude::*;
    let n = p.n_qubits();
    if n > MAX_UNITARY_QUBITS {
        return Err(Error::Capacity(format!("{n} qubits exceed {MAX_UNITARY_QUBITS}")));
    }
    let dim = 1usize << n;
    let cols: Result<Vec<Vec<C<T>>>> =
        (0..dim).into_par_iter().map(|b| Ok(p.apply(&StateVector::basis(n, b)?)?.into_amplitudes())).collect();
    Ok(DenseUnitary { dim, data: cols?.concat() })
}
