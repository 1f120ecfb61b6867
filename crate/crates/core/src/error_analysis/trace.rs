//! Leading-order error trace of a truncated QHiFFS propagator.
//!
//! With `k` the first omitted order, `a = ω^{-k}K⁽ᵏ⁾(t₀)`,
//! `B(τ) = ω^{-k}K⁽ᵏ⁾(t₀+τ)`, `E = ω^{-k}H_eff⁽ᵏ⁾` and the retained
//! effective Hamiltonian `H̃` (required diagonal),
//!
//! `ξ = (1/d)[½Tr a² + ½Tr B² + ½Tr D² − Tr aD − Tr aB' + Tr DB']`
//!
//! where `D = ∫₀^τ e^{isH̃}Ee^{−isH̃} ds` and `B' = e^{iτH̃}Be^{−iτH̃}`. The
//! infidelity against the exact propagator is `2ξ` to leading order. Every
//! trace is evaluated symbolically as a trigonometric polynomial in `τ`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::kick::{expand, heff_truncated, kick_order_at};
use crate::lattice::{harmonic_phase, FloquetHamiltonian};
use crate::pauli::PauliString;
use crate::scalar::Real;

use super::conjugation::DiagonalFrame;
use super::trigpoly::{
    double_integrate_even, integrate, integrate_backward, Freq, FrequencyBasis, SecularTrigPoly, TrigPoly,
};

/// The six traces making up `ξ`, each as a function of `τ = t − t₀`.
#[derive(Clone, Debug)]
pub struct ErrorSeries<T: Real = f64> {
    pub omitted_order: usize,
    pub t0: T,
    pub basis: FrequencyBasis<T>,
    /// `½Tr a²/d`.
    pub initial_kick: T,
    /// `½Tr B²/d`.
    pub final_kick: SecularTrigPoly<T>,
    /// `½Tr D²/d`.
    pub drift: SecularTrigPoly<T>,
    /// `−Tr aD/d`.
    pub initial_drift: SecularTrigPoly<T>,
    /// `−Tr aB'/d`.
    pub kick_overlap: SecularTrigPoly<T>,
    /// `Tr DB'/d`.
    pub drift_final: SecularTrigPoly<T>,
}

impl<T: Real> ErrorSeries<T> {
    /// `ξ` as one polynomial.
    pub fn total(&self) -> SecularTrigPoly<T> {
        let mut s = SecularTrigPoly::from_poly(TrigPoly::constant(self.initial_kick));
        for part in [&self.final_kick, &self.drift, &self.initial_drift, &self.kick_overlap, &self.drift_final] {
            s.add_assign(part);
        }
        s
    }

    /// `ξ` at time `t`.
    pub fn eval(&self, t: T) -> T {
        self.total().eval(t - self.t0, &self.basis)
    }

    /// Coefficient of `τ²` with resonant frequencies counted as constant.
    pub fn quadratic_coefficient(&self) -> T {
        self.total().power(2).secular_constant(&self.basis)
    }

    /// `(cos, sin)` coefficients of the `τ⁰` part at angular frequency `nu`.
    pub fn oscillation_at(&self, nu: T) -> (T, T) {
        self.total().power(0).coefficient_at(nu, &self.basis)
    }
}

/// Real-coefficient term list of an operator.
fn terms_of<T: Real>(op: &crate::pauli::PauliSum<T>) -> Result<Vec<(PauliString, T)>> {
    Ok(op.real_terms()?.into_iter().filter(|(p, c)| !p.is_identity() && *c != T::zero()).collect())
}

/// Builds the symbolic error trace for omitted order `k ∈ {1, 2}`.
pub fn leading_error_series<T: Real>(h: &FloquetHamiltonian<T>, k: usize, t0: T) -> Result<ErrorSeries<T>> {
    if !(1..=2).contains(&k) {
        return Err(Error::UnsupportedOrder(k));
    }
    let n = h.n_qubits();
    let omega = h.omega();
    let exp = expand(h, k)?;
    let frame_h = heff_truncated(&exp, omega, k - 1);
    let mut basis = FrequencyBasis::new();
    let frame = DiagonalFrame::new(&frame_h, &mut basis)
        .map_err(|_| Error::Unsupported("retained effective Hamiltonian is not diagonal".into()))?;
    let w_idx = basis.intern(omega, "ω")?;
    let scale = omega.powi(-(k as i32));

    let e = terms_of(&exp.heff[k].scale_re(scale))?;
    let a = terms_of(&kick_order_at(&exp.kick[k], n, t0, omega).scale_re(scale))?;

    // B_Q(τ) = Re Σ_m c_{m,Q} e^{imω(t₀+τ)}
    let mut b: BTreeMap<PauliString, TrigPoly<T>> = BTreeMap::new();
    for ht in &exp.kick[k] {
        let (c0, s0) = harmonic_phase(ht.m, omega, t0);
        let f = Freq::unit(w_idx, ht.m as i32);
        for (p, c) in ht.op.iter() {
            let z_re = (c.re * c0 - c.im * s0) * scale;
            let z_im = (c.re * s0 + c.im * c0) * scale;
            let entry = b.entry(p).or_default();
            entry.add_cos(f, z_re);
            entry.add_sin(f, -z_im);
        }
    }
    b.retain(|_, v| !v.is_zero());
    let b: Vec<(PauliString, TrigPoly<T>)> = b.into_iter().collect();

    let initial_kick = T::of(0.5) * a.iter().map(|(_, c)| *c * *c).sum::<T>();

    let mut final_kick = SecularTrigPoly::zero();
    for (_, bq) in &b {
        final_kick.add_at(0, &bq.mul(bq).scale(T::of(0.5)));
    }

    // f(u) = Σ_P e_P [P in E(u)]
    let mut f = TrigPoly::zero();
    for (q, eq) in &e {
        for (p, ep) in &e {
            let c = frame.component(q, p, true)?;
            f.add_assign(&c.scale(*eq * *ep));
        }
    }
    let drift = double_integrate_even(&f, &basis).scale(T::of(0.5));

    // g(s) = Σ_P a_P [P in E(s)]
    let mut g = TrigPoly::zero();
    for (q, eq) in &e {
        for (p, ap) in &a {
            g.add_assign(&frame.component(q, p, true)?.scale(*eq * *ap));
        }
    }
    let initial_drift = integrate(&g, &basis).scale(-T::one());

    let mut kick_overlap = SecularTrigPoly::zero();
    for (q, bq) in &b {
        let mut inner = TrigPoly::zero();
        for (p, ap) in &a {
            inner.add_assign(&frame.component(q, p, true)?.scale(*ap));
        }
        if !inner.is_zero() {
            kick_overlap.add_at(0, &inner.mul(bq).scale(-T::one()));
        }
    }

    // Tr(D B')/d = Σ_Q B_Q(τ) ∫_{−τ}^0 [Q in E(u)] du
    let mut drift_final = SecularTrigPoly::zero();
    for (q, bq) in &b {
        let mut hq = TrigPoly::zero();
        for (p, ep) in &e {
            hq.add_assign(&frame.component(p, q, true)?.scale(*ep));
        }
        if !hq.is_zero() {
            drift_final.add_assign(&integrate_backward(&hq, &basis).mul_poly(bq));
        }
    }

    let resonant: Vec<String> = f
        .iter()
        .chain(g.iter())
        .filter(|(fr, _)| !fr.is_zero() && basis.is_resonant(fr))
        .map(|(fr, _)| basis.describe(fr))
        .collect();
    if !resonant.is_empty() {
        log::warn!("resonant frequency combinations treated as constant: {}", resonant.join(", "));
    }

    Ok(ErrorSeries {
        omitted_order: k,
        t0,
        basis,
        initial_kick,
        final_kick,
        drift,
        initial_drift,
        kick_overlap,
        drift_final,
    })
}

/// `ξ(t)` for omitted order `k`; the predicted infidelity is `2ξ`.
pub fn leading_error_trace<T: Real>(h: &FloquetHamiltonian<T>, k: usize, t0: T, t: T) -> Result<T> {
    Ok(leading_error_series(h, k, t0)?.eval(t))
}
