//! Gate-level compilation of first-order QHiFFS for diagonal `H₀`.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::kick::{expand, heff_truncated, kick_at_order};
use crate::lattice::FloquetHamiltonian;
use crate::pauli::{PauliString, PauliSum};
use crate::scalar::Real;
use crate::state::{rotate_pauli_in_place, StateVector};

/// Angles with magnitude below this are treated as zero.
pub const ZERO_ANGLE: f64 = 1e-14;

/// Native gates; `R*(θ) = exp(−iθσ/2)` and `ZZ(θ) = exp(−iθ Z⊗Z/2)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Gate<T: Real = f64> {
    Rx { q: usize, theta: T },
    Ry { q: usize, theta: T },
    Rz { q: usize, theta: T },
    Zz { q1: usize, q2: usize, theta: T },
}

impl<T: Real> Gate<T> {
    pub fn is_two_qubit(&self) -> bool {
        matches!(self, Gate::Zz { .. })
    }

    pub fn is_diagonal(&self) -> bool {
        matches!(self, Gate::Rz { .. } | Gate::Zz { .. })
    }

    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::Rx { q, .. } | Gate::Ry { q, .. } | Gate::Rz { q, .. } => vec![q],
            Gate::Zz { q1, q2, .. } => vec![q1, q2],
        }
    }

    pub fn theta(&self) -> T {
        match *self {
            Gate::Rx { theta, .. } | Gate::Ry { theta, .. } | Gate::Rz { theta, .. } | Gate::Zz { theta, .. } => theta,
        }
    }

    fn generator(&self, n: usize) -> PauliString {
        match *self {
            Gate::Rx { q, .. } => PauliString::single(n, q, 'X'),
            Gate::Ry { q, .. } => PauliString::single(n, q, 'Y'),
            Gate::Rz { q, .. } => PauliString::single(n, q, 'Z'),
            Gate::Zz { q1, q2, .. } => PauliString::new(n, 0, (1 << q1) | (1 << q2), 0),
        }
        .expect("validated gate")
    }
}

/// Gate totals by arity.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GateCounts {
    pub one_qubit: usize,
    pub two_qubit: usize,
}

impl std::fmt::Display for GateCounts {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "2q={} 1q={}", self.two_qubit, self.one_qubit)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Circuit<T: Real = f64> {
    n_qubits: usize,
    gates: Vec<Gate<T>>,
}

impl<T: Real> Circuit<T> {
    pub fn new(n_qubits: usize) -> Self {
        Self { n_qubits, gates: Vec::new() }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }
    pub fn gates(&self) -> &[Gate<T>] {
        &self.gates
    }
    pub fn len(&self) -> usize {
        self.gates.len()
    }
    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// Appends a gate after checking its qubit indices.
    pub fn push(&mut self, g: Gate<T>) -> Result<()> {
        let qs = g.qubits();
        if qs.iter().any(|&q| q >= self.n_qubits) {
            return Err(Error::InvalidArgument(format!("gate {g:?} outside {} qubits", self.n_qubits)));
        }
        if qs.len() == 2 && qs[0] == qs[1] {
            return Err(Error::InvalidArgument("two-qubit gate on a single qubit".into()));
        }
        self.gates.push(g);
        Ok(())
    }

    /// Appends unless the angle is negligible.
    fn push_nonzero(&mut self, g: Gate<T>) -> Result<()> {
        if g.theta().abs() > T::of(ZERO_ANGLE) {
            self.push(g)?;
        }
        Ok(())
    }

    pub fn counts(&self) -> GateCounts {
        let two = self.gates.iter().filter(|g| g.is_two_qubit()).count();
        GateCounts { one_qubit: self.gates.len() - two, two_qubit: two }
    }

    /// Removes diagonal gates that only precede a Z-basis measurement, i.e.
    /// those followed by no non-diagonal gate on any of their qubits.
    pub fn strip_trailing_diagonal(&self) -> Self {
        let mut blocked = vec![false; self.n_qubits];
        let mut keep = Vec::with_capacity(self.gates.len());
        for g in self.gates.iter().rev() {
            let qs = g.qubits();
            if g.is_diagonal() {
                if qs.iter().any(|&q| blocked[q]) {
                    keep.push(*g);
                }
            } else {
                qs.iter().for_each(|&q| blocked[q] = true);
                keep.push(*g);
            }
        }
        keep.reverse();
        Self { n_qubits: self.n_qubits, gates: keep }
    }

    /// One gate per line, angles at 17 significant digits.
    pub fn emit(&self) -> String {
        let mut s = String::new();
        for g in &self.gates {
            let th = g.theta().as_f64();
            match *g {
                Gate::Rx { q, .. } => writeln!(s, "RX {q} {th:.16e}"),
                Gate::Ry { q, .. } => writeln!(s, "RY {q} {th:.16e}"),
                Gate::Rz { q, .. } => writeln!(s, "RZ {q} {th:.16e}"),
                Gate::Zz { q1, q2, .. } => writeln!(s, "ZZ {q1} {q2} {th:.16e}"),
            }
            .expect("writing to a String");
        }
        s
    }

    /// Parses [`Circuit::emit`] output.
    pub fn parse(text: &str, n_qubits: usize) -> Result<Self> {
        let mut c = Self::new(n_qubits);
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let perr = |m: &str| Error::Parse { line: i + 1, msg: m.to_string() };
            let f: Vec<&str> = line.split_whitespace().collect();
            let q = |s: &str| s.parse::<usize>().map_err(|_| perr("bad qubit index"));
            let th = |s: &str| s.parse::<f64>().map(T::of).map_err(|_| perr("bad angle"));
            let g = match f.as_slice() {
                ["RX", a, t] => Gate::Rx { q: q(a)?, theta: th(t)? },
                ["RY", a, t] => Gate::Ry { q: q(a)?, theta: th(t)? },
                ["RZ", a, t] => Gate::Rz { q: q(a)?, theta: th(t)? },
                ["ZZ", a, b, t] => Gate::Zz { q1: q(a)?, q2: q(b)?, theta: th(t)? },
                _ => return Err(perr("unknown gate line")),
            };
            c.push(g).map_err(|e| perr(&e.to_string()))?;
        }
        Ok(c)
    }
}

/// Single-axis rotations realizing `exp(−i s K)` for a 1-local kick `K`.
fn kick_gates<T: Real>(c: &mut Circuit<T>, k: &PauliSum<T>, s: T) -> Result<()> {
    let n = c.n_qubits;
    let mut per_qubit: Vec<Vec<(char, T)>> = vec![Vec::new(); n];
    for (p, coef) in k.real_terms()? {
        let q = p.support()[0];
        let axis = p.word().chars().nth(q).expect("in range");
        per_qubit[q].push((axis, coef));
    }
    for (q, terms) in per_qubit.into_iter().enumerate() {
        match terms.as_slice() {
            [] => {}
            [(axis, coef)] => {
                // exp(−i s c σ) = R_σ(2 s c)
                let theta = T::of(2.0) * s * *coef;
                let g = match axis {
                    'X' => Gate::Rx { q, theta },
                    'Y' => Gate::Ry { q, theta },
                    _ => Gate::Rz { q, theta },
                };
                c.push_nonzero(g)?;
            }
            _ => {
                return Err(Error::Unsupported(format!("kick on qubit {q} mixes rotation axes")));
            }
        }
    }
    Ok(())
}

/// First-order QHiFFS circuit: kick at `t0`, one rotation per term of the
/// diagonal effective Hamiltonian, kick back at `t`. Zero-angle gates are
/// pruned and the identity part (a global phase) is dropped.
pub fn compile_qhiffs<T: Real>(h: &FloquetHamiltonian<T>, t0: T, t: T, order: usize) -> Result<Circuit<T>> {
    if order != 1 {
        return Err(Error::UnsupportedOrder(order));
    }
    if !h.h0().is_diagonal() {
        return Err(Error::Unsupported("compilation needs a diagonal H0".into()));
    }
    if !h.harmonics().values().all(|v| v.is_one_local()) {
        return Err(Error::Unsupported("compilation needs a 1-local drive".into()));
    }
    let exp = expand(h, 1)?;
    let heff = heff_truncated(&exp, h.omega(), 1);
    if !heff.is_diagonal() {
        return Err(Error::Unsupported("first-order effective Hamiltonian is not diagonal".into()));
    }
    let n = h.n_qubits();
    let mut c = Circuit::new(n);
    let k0 = kick_at_order(&exp, t0, h.omega(), 1);
    kick_gates(&mut c, &k0, -T::one())?;
    let tau = t - t0;
    for (p, coef) in heff.real_terms()? {
        let qs = p.support();
        let theta = T::of(2.0) * coef * tau;
        match qs.as_slice() {
            [] => {}
            [q] => c.push_nonzero(Gate::Rz { q: *q, theta })?,
            [q1, q2] => c.push_nonzero(Gate::Zz { q1: *q1, q2: *q2, theta })?,
            _ => return Err(Error::Unsupported(format!("{}-body term in H0", qs.len()))),
        }
    }
    let k1 = kick_at_order(&exp, t, h.omega(), 1);
    kick_gates(&mut c, &k1, T::one())?;
    Ok(c)
}

/// Applies the gates in order.
pub fn simulate_circuit<T: Real>(c: &Circuit<T>, psi: &StateVector<T>) -> Result<StateVector<T>> {
    if psi.n_qubits() != c.n_qubits {
        return Err(Error::QubitMismatch(c.n_qubits, psi.n_qubits()));
    }
    let mut out = psi.clone();
    for g in &c.gates {
        rotate_pauli_in_place(&g.generator(c.n_qubits), g.theta(), &mut out)?;
    }
    Ok(out)
}

impl<T: Real> crate::propagators::Propagator<T> for Circuit<T> {
    fn n_qubits(&self) -> usize {
        self.n_qubits
    }
    fn apply(&self, psi: &StateVector<T>) -> Result<StateVector<T>> {
        simulate_circuit(self, psi)
    }
}
