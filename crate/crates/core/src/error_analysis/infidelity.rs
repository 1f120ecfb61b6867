//! Propagator infidelities: exact (dense) and Haar-sampled.

use num_complex::Complex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::propagators::{DenseUnitary, Propagator};
use crate::scalar::Real;
use crate::state::StateVector;

/// `1 − |Tr U₁†U₂|²/d²`.
pub fn avg_infidelity_exact<T: Real>(u1: &DenseUnitary<T>, u2: &DenseUnitary<T>) -> Result<T> {
    if u1.dim() != u2.dim() {
        return Err(Error::InvalidArgument(format!("dimensions {} and {} differ", u1.dim(), u2.dim())));
    }
    if u1.dim() > 4096 {
        return Err(Error::Capacity(format!("dimension {} exceeds 4096", u1.dim())));
    }
    let d = T::of_usize(u1.dim());
    Ok(T::one() - u1.trace_adjoint_product(u2).norm_sqr() / (d * d))
}

/// Haar-averaged state infidelity implied by the exact infidelity:
/// `d ε/(d+1)`.
pub fn haar_average_from_exact<T: Real>(eps: T, dim: usize) -> T {
    let d = T::of_usize(dim);
    d * eps / (d + T::one())
}

/// `1 − |⟨ψ|φ⟩|²`.
pub fn state_infidelity<T: Real>(psi: &StateVector<T>, phi: &StateVector<T>) -> T {
    T::one() - psi.inner(phi).norm_sqr()
}

/// Haar-random state number `index` of the stream seeded by `seed`.
pub fn haar_state<T: Real>(n_qubits: usize, seed: u64, index: u64) -> Result<StateVector<T>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let amps = (0..1usize << n_qubits)
        .map(|_| {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            Complex::new(T::of(re), T::of(im))
        })
        .collect();
    let mut psi = StateVector::from_amplitudes(amps)?;
    psi.normalize();
    Ok(psi)
}

/// Sample mean with its standard error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate<T: Real = f64> {
    pub mean: T,
    pub std_error: T,
    pub samples: usize,
}

impl<T: Real> Estimate<T> {
    pub fn from_samples(xs: &[T]) -> Self {
        let n = xs.len();
        let nf = T::of_usize(n.max(1));
        let mean = xs.iter().copied().sum::<T>() / nf;
        let var =
            if n > 1 { xs.iter().map(|x| (*x - mean).powi(2)).sum::<T>() / T::of_usize(n - 1) } else { T::zero() };
        Self { mean, std_error: (var / nf).sqrt(), samples: n }
    }
}

/// Mean state infidelity between two propagators over `n_states` Haar
/// states. Results do not depend on the thread count.
pub fn avg_infidelity_stochastic<T, P1, P2>(p1: &P1, p2: &P2, n_states: usize, seed: u64) -> Result<Estimate<T>>
where
    T: Real,
    P1: Propagator<T> + Sync + ?Sized,
    P2: Propagator<T> + Sync + ?Sized,
{
    let n = p1.n_qubits();
    if p2.n_qubits() != n {
        return Err(Error::QubitMismatch(n, p2.n_qubits()));
    }
    if n_states < 2 {
        return Err(Error::InvalidArgument("need at least two states".into()));
    }
    let xs: Result<Vec<T>> = (0..n_states as u64)
        .into_par_iter()
        .map(|i| {
            let psi = haar_state(n, seed, i)?;
            Ok(state_infidelity(&p1.apply(&psi)?, &p2.apply(&psi)?))
        })
        .collect();
    Ok(Estimate::from_samples(&xs?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn haar_states_are_reproducible_and_normalized() {
        let a = haar_state::<f64>(3, 9, 4).unwrap();
        let b = haar_state::<f64>(3, 9, 4).unwrap();
        let c = haar_state::<f64>(3, 9, 5).unwrap();
        assert_eq!(a, b);
        assert!((a.norm() - 1.0).abs() < 1e-14);
        assert!(state_infidelity(&a, &c) > 1e-3);
    }
}
