//! Ground states: diagonal scan, Lanczos with full reorthogonalization, and a
//! dense fallback for small registers.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::pauli::PauliSum;
use crate::scalar::{c0, cr, Real, C};
use crate::state::{apply_sum, diagonal_energies, StateVector, MAX_STATE_QUBITS};

/// Largest register for [`ground_state_dense`].
pub const MAX_DENSE_QUBITS: usize = 12;

/// Eigensolver selection.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EigenMethod {
    /// Diagonal scan when possible, dense up to 8 qubits, Lanczos beyond.
    Auto,
    Lanczos,
    Dense,
}

#[derive(Clone, Copy, Debug)]
pub struct GroundStateOptions {
    pub method: EigenMethod,
    pub seed: u64,
    /// Residual target relative to `norm_bound(H)`.
    pub rel_tol: f64,
    pub max_restarts: usize,
}

impl Default for GroundStateOptions {
    fn default() -> Self {
        Self { method: EigenMethod::Auto, seed: 0x5eed, rel_tol: 1e-8, max_restarts: 30 }
    }
}

/// Lowest eigenpair of Hermitian `h` on `n` qubits with default options.
pub fn ground_state<T: Real>(h: &PauliSum<T>, n: usize) -> Result<(T, StateVector<T>)> {
    ground_state_with(h, n, &GroundStateOptions::default())
}

pub fn ground_state_with<T: Real>(h: &PauliSum<T>, n: usize, opts: &GroundStateOptions) -> Result<(T, StateVector<T>)> {
    if h.n_qubits() != n {
        return Err(Error::QubitMismatch(n, h.n_qubits()));
    }
    if n > MAX_STATE_QUBITS {
        return Err(Error::Capacity(format!("{n} qubits exceed {MAX_STATE_QUBITS}")));
    }
    if !h.is_hermitian() {
        return Err(Error::NotHermitian(h.hermiticity_defect().as_f64()));
    }
    if h.is_diagonal() {
        return ground_state_diagonal(h);
    }
    match opts.method {
        EigenMethod::Dense => ground_state_dense(h),
        EigenMethod::Auto if n <= 8 => ground_state_dense(h),
        _ => lanczos(h, opts),
    }
}

/// Lowest-index minimum of a diagonal operator.
fn ground_state_diagonal<T: Real>(h: &PauliSum<T>) -> Result<(T, StateVector<T>)> {
    let e = diagonal_energies(h)?;
    let mut best = 0;
    for (b, &v) in e.iter().enumerate() {
        if v < e[best] {
            best = b;
        }
    }
    Ok((e[best], StateVector::basis(h.n_qubits(), best)?))
}

/// Fixes the global phase: the first amplitude of maximal modulus becomes
/// real and positive.
fn fix_phase<T: Real>(psi: &mut StateVector<T>) {
    let amps = psi.amplitudes();
    let max = amps.iter().map(|a| a.norm()).fold(T::zero(), T::max);
    let thresh = max * (T::one() - T::of(1e-9));
    if let Some(a) = amps.iter().find(|a| a.norm() >= thresh).copied() {
        let ph = a.conj() / cr(a.norm());
        psi.amplitudes_mut().iter_mut().for_each(|x| *x = *x * ph);
    }
}

/// Dense Hermitian matrix of `h` in `f64`.
pub fn dense_matrix<T: Real>(h: &PauliSum<T>) -> Result<DMatrix<Complex<f64>>> {
    let n = h.n_qubits();
    if n > MAX_DENSE_QUBITS {
        return Err(Error::Capacity(format!("{n} qubits exceed dense cap {MAX_DENSE_QUBITS}")));
    }
    let d = 1usize << n;
    let mut m = DMatrix::from_element(d, d, Complex::new(0.0, 0.0));
    for (p, c) in h.iter() {
        let c = Complex::new(c.re.as_f64(), c.im.as_f64());
        for col in 0..d {
            let (row, k) = p.apply_to_basis(col as u64);
            let ph = [Complex::new(1.0, 0.0), Complex::new(0.0, 1.0), Complex::new(-1.0, 0.0), Complex::new(0.0, -1.0)]
                [k as usize];
            m[(row as usize, col)] += c * ph;
        }
    }
    Ok(m)
}

/// Full diagonalization (n ≤ 12), computed in `f64`.
pub fn ground_state_dense<T: Real>(h: &PauliSum<T>) -> Result<(T, StateVector<T>)> {
    let m = dense_matrix(h)?;
    let eig = SymmetricEigen::new(m);
    let (idx, e) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .fold((0, f64::INFINITY), |acc, (i, &v)| if v < acc.1 { (i, v) } else { acc });
    let col = eig.eigenvectors.column(idx);
    let amps = col.iter().map(|z| Complex::new(T::of(z.re), T::of(z.im))).collect();
    let mut psi = StateVector::from_amplitudes(amps)?;
    psi.normalize();
    fix_phase(&mut psi);
    Ok((T::of(e), psi))
}

fn random_start<T: Real>(dim: usize, seed: u64) -> Vec<C<T>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v: Vec<C<T>> = (0..dim)
        .map(|_| {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            Complex::new(T::of(re), T::of(im))
        })
        .collect();
    normalize(&mut v);
    v
}

fn dot<T: Real>(a: &[C<T>], b: &[C<T>]) -> C<T> {
    a.iter().zip(b).fold(c0(), |acc, (x, y)| acc + x.conj() * y)
}

fn nrm<T: Real>(a: &[C<T>]) -> T {
    a.iter().map(|x| x.norm_sqr()).sum::<T>().sqrt()
}

fn normalize<T: Real>(a: &mut [C<T>]) -> T {
    let n = nrm(a);
    if n > T::zero() {
        let inv = T::one() / n;
        a.iter_mut().for_each(|x| *x = *x * inv);
    }
    n
}

/// Restarted Lanczos with full reorthogonalization.
fn lanczos<T: Real>(h: &PauliSum<T>, opts: &GroundStateOptions) -> Result<(T, StateVector<T>)> {
    let n = h.n_qubits();
    let dim = 1usize << n;
    let budget = (1usize << 26) / dim;
    let m_max = budget.clamp(20, 200).min(dim);
    let tol = T::of(opts.rel_tol) * h.norm_bound().max(T::min_positive_value());
    let mut start = random_start::<T>(dim, opts.seed);

    for _restart in 0..=opts.max_restarts {
        let mut basis: Vec<Vec<C<T>>> = Vec::with_capacity(m_max);
        let mut alpha: Vec<f64> = Vec::new();
        let mut beta: Vec<f64> = Vec::new();
        basis.push(start.clone());
        let ritz = loop {
            let k = basis.len() - 1;
            let psi = StateVector::from_amplitudes(basis[k].clone())?;
            let mut w = apply_sum(h, &psi)?.into_amplitudes();
            let a = dot(&basis[k], &w).re;
            alpha.push(a.as_f64());
            // two passes of classical Gram-Schmidt against the whole basis
            for _ in 0..2 {
                for v in &basis {
                    let c = dot(v, &w);
                    w.iter_mut().zip(v).for_each(|(x, y)| *x = *x - c * y);
                }
            }
            let b = nrm(&w);
            let m = alpha.len();
            let exhausted = b <= T::of(1e-12) * h.norm_bound().max(T::one());
            if m.is_multiple_of(5) || m == m_max || exhausted {
                let ritz = lowest_ritz(&alpha, &beta);
                let est = (b.as_f64() * ritz.1[m - 1]).abs();
                if est <= 0.1 * tol.as_f64() || m == m_max || exhausted {
                    break ritz;
                }
            }
            beta.push(b.as_f64());
            let inv = T::one() / b;
            w.iter_mut().for_each(|x| *x = *x * inv);
            basis.push(w);
        };
        let mut v = vec![c0::<T>(); dim];
        for (coef, b) in ritz.1.iter().zip(&basis) {
            let c = T::of(*coef);
            v.iter_mut().zip(b).for_each(|(x, y)| *x = *x + *y * c);
        }
        normalize(&mut v);
        let mut psi = StateVector::from_amplitudes(v)?;
        let hpsi = apply_sum(h, &psi)?;
        let e = psi.inner(&hpsi).re;
        let res =
            hpsi.amplitudes().iter().zip(psi.amplitudes()).map(|(a, b)| (*a - *b * e).norm_sqr()).sum::<T>().sqrt();
        if res <= tol {
            fix_phase(&mut psi);
            return Ok((e, psi));
        }
        start = psi.into_amplitudes();
    }
    Err(Error::NonConvergence(format!("Lanczos after {} restarts", opts.max_restarts)))
}

/// Lowest eigenpair of the real symmetric tridiagonal matrix.
fn lowest_ritz(alpha: &[f64], beta: &[f64]) -> (f64, Vec<f64>) {
    let m = alpha.len();
    let mut t = DMatrix::<f64>::zeros(m, m);
    for i in 0..m {
        t[(i, i)] = alpha[i];
        if i + 1 < m {
            t[(i, i + 1)] = beta[i];
            t[(i + 1, i)] = beta[i];
        }
    }
    let eig = SymmetricEigen::new(t);
    let (idx, e) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .fold((0, f64::INFINITY), |acc, (i, &v)| if v < acc.1 { (i, v) } else { acc });
    (e, eig.eigenvectors.column(idx).iter().copied().collect())
}
