//! Dense statevectors and the kernels acting on them.
//!
//! Amplitude `b` belongs to the basis state whose bit `q` is the value of
//! qubit `q`.

use std::io::{Read, Write};

use num_complex::Complex;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::pauli::{PauliString, PauliSum};
use crate::scalar::{c0, cr, i_pow, Real, C};

/// Largest register the dense kernels accept.
pub const MAX_STATE_QUBITS: usize = 24;

/// Arrays at least this long are processed in parallel.
const PAR_THRESHOLD: usize = 1 << 14;

/// Dense amplitude vector over `2^n` basis states.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector<T: Real = f64> {
    n_qubits: usize,
    amps: Vec<C<T>>,
}

impl<T: Real> StateVector<T> {
    /// `|b⟩`.
    pub fn basis(n_qubits: usize, b: usize) -> Result<Self> {
        check_size(n_qubits)?;
        if b >= 1 << n_qubits {
            return Err(Error::InvalidArgument(format!("basis index {b} out of range")));
        }
        let mut amps = vec![c0(); 1 << n_qubits];
        amps[b] = cr(T::one());
        Ok(Self { n_qubits, amps })
    }

    /// `|0…0⟩`.
    pub fn zero_state(n_qubits: usize) -> Result<Self> {
        Self::basis(n_qubits, 0)
    }

    /// Wraps raw amplitudes (not normalized).
    pub fn from_amplitudes(amps: Vec<C<T>>) -> Result<Self> {
        let len = amps.len();
        if len == 0 || !len.is_power_of_two() {
            return Err(Error::InvalidArgument(format!("length {len} is not a power of two")));
        }
        let n_qubits = len.trailing_zeros() as usize;
        check_size(n_qubits.max(1))?;
        Ok(Self { n_qubits, amps })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }
    pub fn dim(&self) -> usize {
        self.amps.len()
    }
    pub fn amplitudes(&self) -> &[C<T>] {
        &self.amps
    }
    pub fn amplitudes_mut(&mut self) -> &mut [C<T>] {
        &mut self.amps
    }
    pub fn into_amplitudes(self) -> Vec<C<T>> {
        self.amps
    }

    pub fn norm(&self) -> T {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<T>().sqrt()
    }

    pub fn normalize(&mut self) {
        let n = self.norm();
        if n > T::zero() {
            let inv = T::one() / n;
            self.amps.iter_mut().for_each(|a| *a = *a * inv);
        }
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> C<T> {
        self.amps.iter().zip(&other.amps).fold(c0(), |acc, (a, b)| acc + a.conj() * b)
    }

    /// `‖self − other‖`.
    pub fn distance(&self, other: &Self) -> T {
        self.amps.iter().zip(&other.amps).map(|(a, b)| (a - b).norm_sqr()).sum::<T>().sqrt()
    }

    /// `|b⟩` probabilities.
    pub fn probabilities(&self) -> Vec<T> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    fn check(&self, n: usize) -> Result<()> {
        if self.n_qubits != n {
            Err(Error::QubitMismatch(n, self.n_qubits))
        } else {
            Ok(())
        }
    }

    /// Multiplies amplitude `b` by `phase(b)`.
    pub fn apply_diagonal(&mut self, phase: impl Fn(usize) -> C<T> + Sync) {
        if self.amps.len() >= PAR_THRESHOLD {
            self.amps.par_iter_mut().enumerate().for_each(|(b, a)| *a = *a * phase(b));
        } else {
            self.amps.iter_mut().enumerate().for_each(|(b, a)| *a = *a * phase(b));
        }
    }

    /// Applies a 2×2 matrix `[[u00, u01], [u10, u11]]` to qubit `q`.
    pub fn apply_single_qubit(&mut self, q: usize, u: [[C<T>; 2]; 2]) {
        let bit = 1usize << q;
        let kernel = |chunk: &mut [C<T>]| {
            let (lo, hi) = chunk.split_at_mut(bit);
            for (a0, a1) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x0, x1) = (*a0, *a1);
                *a0 = u[0][0] * x0 + u[0][1] * x1;
                *a1 = u[1][0] * x0 + u[1][1] * x1;
            }
        };
        if self.amps.len() >= PAR_THRESHOLD {
            self.amps.par_chunks_mut(2 * bit).for_each(kernel);
        } else {
            self.amps.chunks_mut(2 * bit).for_each(kernel);
        }
    }
}

fn check_size(n: usize) -> Result<()> {
    if n == 0 || n > MAX_STATE_QUBITS {
        Err(Error::Capacity(format!("{n} qubits outside 1..={MAX_STATE_QUBITS}")))
    } else {
        Ok(())
    }
}

/// `P|ψ⟩` for a single string.
pub fn apply_string<T: Real>(p: &PauliString, psi: &StateVector<T>) -> Result<StateVector<T>> {
    psi.check(p.n_qubits())?;
    let mut out = vec![c0(); psi.dim()];
    let phases: [C<T>; 4] = [i_pow(0), i_pow(1), i_pow(2), i_pow(3)];
    for (b, a) in psi.amps.iter().enumerate() {
        let (b2, k) = p.apply_to_basis(b as u64);
        out[b2 as usize] = phases[k as usize] * a;
    }
    Ok(StateVector { n_qubits: psi.n_qubits, amps: out })
}

/// `A|ψ⟩`, unnormalized.
pub fn apply_sum<T: Real>(a: &PauliSum<T>, psi: &StateVector<T>) -> Result<StateVector<T>> {
    psi.check(a.n_qubits())?;
    let terms: Vec<(PauliString, C<T>)> = a.iter().collect();
    let phases: [C<T>; 4] = [i_pow(0), i_pow(1), i_pow(2), i_pow(3)];
    // gather form: out[b] = Σ_P c_P ⟨b|P|b⊕x⟩ ψ[b⊕x], which parallelizes over b
    let amp = |b: usize| {
        let mut acc = c0::<T>();
        for (p, c) in &terms {
            let src = b ^ p.x_mask() as usize;
            let (_, k) = p.apply_to_basis(src as u64);
            acc = acc + *c * phases[k as usize] * psi.amps[src];
        }
        acc
    };
    let out: Vec<C<T>> = if psi.dim() >= PAR_THRESHOLD {
        (0..psi.dim()).into_par_iter().map(amp).collect()
    } else {
        (0..psi.dim()).map(amp).collect()
    };
    Ok(StateVector { n_qubits: psi.n_qubits, amps: out })
}

/// `exp(−i(θ/2)P)|ψ⟩` for a Hermitian (phase 0) string `P`.
pub fn rotate_pauli<T: Real>(p: &PauliString, theta: T, psi: &StateVector<T>) -> Result<StateVector<T>> {
    let mut out = psi.clone();
    rotate_pauli_in_place(p, theta, &mut out)?;
    Ok(out)
}

/// In-place form of [`rotate_pauli`].
pub fn rotate_pauli_in_place<T: Real>(p: &PauliString, theta: T, psi: &mut StateVector<T>) -> Result<()> {
    psi.check(p.n_qubits())?;
    if p.phase_exp() & 1 == 1 {
        return Err(Error::InvalidArgument("rotation generator must be Hermitian".into()));
    }
    let half = theta * T::of(0.5);
    let (c, s) = (half.cos(), half.sin());
    let sign = if p.phase_exp() == 2 { -T::one() } else { T::one() };
    let mis = Complex::new(T::zero(), -s * sign);
    let phases: [C<T>; 4] = [i_pow(0), i_pow(1), i_pow(2), i_pow(3)];
    let x = p.x_mask() as usize;
    if x == 0 {
        psi.apply_diagonal(|b| {
            let (_, k) = p.apply_to_basis(b as u64);
            cr(c) + mis * phases[k as usize]
        });
        return Ok(());
    }
    // pair up b and b⊕x, visiting each pair once from its lower member
    let top = 1usize << (usize::BITS - 1 - x.leading_zeros());
    let amps = &mut psi.amps;
    for b in 0..amps.len() {
        if b & top != 0 {
            continue;
        }
        let b2 = b ^ x;
        let (_, k1) = p.apply_to_basis(b as u64);
        let (_, k2) = p.apply_to_basis(b2 as u64);
        let (a1, a2) = (amps[b], amps[b2]);
        // (Pψ)[b2] = i^{k1} ψ[b], (Pψ)[b] = i^{k2} ψ[b2]
        amps[b] = a1 * c + mis * phases[k2 as usize] * a2;
        amps[b2] = a2 * c + mis * phases[k1 as usize] * a1;
    }
    Ok(())
}

/// Energies `E(b) = ⟨b|D|b⟩` of a diagonal operator (real part).
pub fn diagonal_energies<T: Real>(d: &PauliSum<T>) -> Result<Vec<T>> {
    if !d.is_diagonal() {
        return Err(Error::InvalidArgument("operator is not diagonal".into()));
    }
    let n = d.n_qubits();
    if n > MAX_STATE_QUBITS {
        return Err(Error::Capacity(format!("{n} qubits")));
    }
    let terms: Vec<(u64, T)> = d.iter().map(|(p, c)| (p.z_mask(), c.re)).collect();
    let energy = |b: usize| {
        terms.iter().map(|&(z, c)| if (z & b as u64).count_ones().is_multiple_of(2) { c } else { -c }).sum::<T>()
    };
    Ok(if n >= 14 {
        (0..1usize << n).into_par_iter().map(energy).collect()
    } else {
        (0..1usize << n).map(energy).collect()
    })
}

/// Precomputed `exp(−iθE(b))` table for a diagonal Hermitian operator.
#[derive(Clone, Debug)]
pub struct DiagonalPhases<T: Real = f64> {
    energies: Vec<T>,
}

impl<T: Real> DiagonalPhases<T> {
    pub fn new(d: &PauliSum<T>) -> Result<Self> {
        Ok(Self { energies: diagonal_energies(d)? })
    }

    pub fn energies(&self) -> &[T] {
        &self.energies
    }

    /// `ψ ← exp(−iθD)ψ`.
    pub fn apply(&self, theta: T, psi: &mut StateVector<T>) -> Result<()> {
        if psi.dim() != self.energies.len() {
            return Err(Error::QubitMismatch(self.energies.len().trailing_zeros() as usize, psi.n_qubits()));
        }
        let e = &self.energies;
        psi.apply_diagonal(|b| {
            let a = -theta * e[b];
            Complex::new(a.cos(), a.sin())
        });
        Ok(())
    }
}

/// `exp(−iθ(aX + bY + cZ))` as a 2×2 matrix.
pub fn su2<T: Real>(theta: T, a: T, b: T, c: T) -> [[C<T>; 2]; 2] {
    let r = (a * a + b * b + c * c).sqrt();
    if r == T::zero() {
        return [[cr(T::one()), c0()], [c0(), cr(T::one())]];
    }
    let (cs, sn) = ((theta * r).cos(), (theta * r).sin());
    let (nx, ny, nz) = (a / r, b / r, c / r);
    // cos·I − i sin·(n·σ)
    [
        [Complex::new(cs, -sn * nz), Complex::new(-sn * ny, -sn * nx)],
        [Complex::new(sn * ny, -sn * nx), Complex::new(cs, sn * nz)],
    ]
}

/// How [`exp_apply`] realized the exponential.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExpPath {
    /// Nothing to do.
    Identity,
    /// Per-basis-state phase table.
    Diagonal,
    /// Product of single-qubit rotations.
    OneLocal,
    /// Sequence of commuting Pauli rotations.
    Commuting,
    /// Scaled Taylor series (no exploitable structure).
    Series,
}

/// `exp(−iθA)|ψ⟩` for Hermitian `A`, choosing an exact structured kernel when
/// one applies and a converged Taylor series otherwise.
pub fn exp_apply<T: Real>(a: &PauliSum<T>, theta: T, psi: &StateVector<T>) -> Result<(StateVector<T>, ExpPath)> {
    let mut out = psi.clone();
    let path = exp_apply_in_place(a, theta, &mut out)?;
    Ok((out, path))
}

/// In-place form of [`exp_apply`].
pub fn exp_apply_in_place<T: Real>(a: &PauliSum<T>, theta: T, psi: &mut StateVector<T>) -> Result<ExpPath> {
    psi.check(a.n_qubits())?;
    if !a.is_hermitian() {
        return Err(Error::NotHermitian(a.hermiticity_defect().as_f64()));
    }
    let n = a.n_qubits();
    // identity part is a global phase
    let id = a.normalized_trace().re;
    let mut rest = PauliSum::zero(n);
    for (p, c) in a.iter() {
        if !p.is_identity() {
            rest.add_term(p, cr(c.re));
        }
    }
    if id != T::zero() && theta != T::zero() {
        let ph = Complex::new((theta * id).cos(), -(theta * id).sin());
        psi.amps.iter_mut().for_each(|x| *x = *x * ph);
    }
    if rest.is_empty() || theta == T::zero() {
        return Ok(ExpPath::Identity);
    }
    if rest.is_diagonal() {
        DiagonalPhases::new(&rest)?.apply(theta, psi)?;
        return Ok(ExpPath::Diagonal);
    }
    if rest.is_one_local() {
        apply_one_local(&rest, theta, psi);
        return Ok(ExpPath::OneLocal);
    }
    if rest.is_commuting() {
        for (p, c) in rest.iter() {
            rotate_pauli_in_place(&p, T::of(2.0) * theta * c.re, psi)?;
        }
        return Ok(ExpPath::Commuting);
    }
    let out = taylor_exp(&rest, theta, psi.clone())?;
    *psi = out;
    Ok(ExpPath::Series)
}

/// `exp(−iθA)` for a 1-local Hermitian `A` without identity part.
pub(crate) fn apply_one_local<T: Real>(a: &PauliSum<T>, theta: T, psi: &mut StateVector<T>) {
    let mut axes = vec![[T::zero(); 3]; a.n_qubits()];
    for (p, c) in a.iter() {
        let Some(&q) = p.support().first() else {
            continue;
        };
        let k = match (p.x_mask() >> q & 1, p.z_mask() >> q & 1) {
            (1, 0) => 0,
            (1, 1) => 1,
            _ => 2,
        };
        axes[q][k] = c.re;
    }
    for (q, v) in axes.iter().enumerate() {
        if v.iter().any(|x| *x != T::zero()) {
            psi.apply_single_qubit(q, su2(theta, v[0], v[1], v[2]));
        }
    }
}

fn taylor_exp<T: Real>(a: &PauliSum<T>, theta: T, mut psi: StateVector<T>) -> Result<StateVector<T>> {
    let scale = (theta.abs() * a.norm_bound()).as_f64();
    let steps = (scale / 0.5).ceil().max(1.0) as usize;
    let h = theta / T::of_usize(steps);
    let mi = Complex::new(T::zero(), -h);
    let eps = T::epsilon() * T::of(0.1);
    for _ in 0..steps {
        let mut term = psi.clone();
        let mut acc = psi.clone();
        let mut k = 1usize;
        loop {
            term = apply_sum(a, &term)?;
            let f = mi / cr(T::of_usize(k));
            term.amps.iter_mut().for_each(|x| *x = *x * f);
            acc.amps.iter_mut().zip(&term.amps).for_each(|(x, y)| *x = *x + y);
            if term.norm() <= eps * acc.norm() {
                break;
            }
            k += 1;
            if k > 200 {
                return Err(Error::NonConvergence("Taylor series of the exponential".into()));
            }
        }
        psi = acc;
    }
    Ok(psi)
}

/// `⟨ψ|A|ψ⟩`.
pub fn expectation<T: Real>(a: &PauliSum<T>, psi: &StateVector<T>) -> Result<C<T>> {
    let ap = apply_sum(a, psi)?;
    Ok(psi.inner(&ap))
}

/// Writes the binary dump: `u64` qubit count then `(re, im)` `f64` pairs, all
/// little-endian.
pub fn write_state<T: Real, W: Write>(psi: &StateVector<T>, mut w: W) -> Result<()> {
    w.write_all(&(psi.n_qubits as u64).to_le_bytes())?;
    for a in &psi.amps {
        w.write_all(&a.re.as_f64().to_le_bytes())?;
        w.write_all(&a.im.as_f64().to_le_bytes())?;
    }
    Ok(())
}

/// Reads the format written by [`write_state`].
pub fn read_state<T: Real, R: Read>(mut r: R) -> Result<StateVector<T>> {
    let mut buf = [0u8; 8];
    r.read_exact(&mut buf)?;
    let n = u64::from_le_bytes(buf) as usize;
    check_size(n)?;
    let mut amps = Vec::with_capacity(1 << n);
    for _ in 0..1usize << n {
        r.read_exact(&mut buf)?;
        let re = f64::from_le_bytes(buf);
        r.read_exact(&mut buf)?;
        let im = f64::from_le_bytes(buf);
        amps.push(Complex::new(T::of(re), T::of(im)));
    }
    Ok(StateVector { n_qubits: n, amps })
}
