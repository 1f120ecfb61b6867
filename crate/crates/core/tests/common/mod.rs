//! Dense-matrix oracles shared by the integration tests.
#![allow(dead_code)]

use floquet_kick::{PauliString, PauliSum, StateVector};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as Z;

pub type M = DMatrix<Z>;

fn single(ch: char) -> [[Z; 2]; 2] {
    let (o, z, i) = (Z::new(1.0, 0.0), Z::new(0.0, 0.0), Z::new(0.0, 1.0));
    match ch {
        'I' => [[o, z], [z, o]],
        'X' => [[z, o], [o, z]],
        'Y' => [[z, -i], [i, z]],
        'Z' => [[o, z], [z, -o]],
        _ => unreachable!(),
    }
}

/// Matrix of `i^phase · word` with qubit `q` on bit `q` of the basis index.
pub fn dense_string(p: &PauliString) -> M {
    let n = p.n_qubits();
    let mats: Vec<[[Z; 2]; 2]> = p.word().chars().map(single).collect();
    let dim = 1usize << n;
    let phase = Z::new(0.0, 1.0).powu(p.phase_exp() as u32);
    M::from_fn(dim, dim, |r, c| {
        let mut v = phase;
        for (q, m) in mats.iter().enumerate() {
            v *= m[(r >> q) & 1][(c >> q) & 1];
        }
        v
    })
}

pub fn dense_sum(s: &PauliSum) -> M {
    let dim = 1usize << s.n_qubits();
    let mut out = M::zeros(dim, dim);
    for (p, c) in s.iter() {
        out += dense_string(&p) * c;
    }
    out
}

/// `e^{-iθA}` through the Hermitian eigendecomposition.
pub fn expm_herm(a: &M, theta: f64) -> M {
    let eig = a.clone().symmetric_eigen();
    let phases = eig.eigenvalues.map(|e| Z::new(0.0, -theta * e).exp());
    &eig.eigenvectors * M::from_diagonal(&phases) * eig.eigenvectors.adjoint()
}

pub fn to_vec(psi: &StateVector) -> DVector<Z> {
    DVector::from_column_slice(psi.amplitudes())
}

pub fn from_vec(v: &DVector<Z>) -> StateVector {
    StateVector::from_amplitudes(v.iter().copied().collect()).unwrap()
}

pub fn max_abs(m: &M) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Fine midpoint product of `e^{-iδ H(t)}` factors; second-order accurate.
pub fn dense_propagator(h: &floquet_kick::FloquetHamiltonian, t0: f64, t: f64, steps: usize) -> M {
    let dim = 1usize << h.n_qubits();
    let dt = (t - t0) / steps as f64;
    let mut u = M::identity(dim, dim);
    for k in 0..steps {
        let mid = t0 + (k as f64 + 0.5) * dt;
        u = expm_herm(&dense_sum(&h.hamiltonian_at(mid)), dt) * u;
    }
    u
}
