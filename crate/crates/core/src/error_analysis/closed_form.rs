//! Closed-form leading error of first-order QHiFFS for the 2D BNNNI model.

use crate::scalar::Real;

use super::coefficients::ct2;
use super::ErrorModelParams;

/// `A · sin²(g J (p + qκ) t)/(p + qκ)²`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OscillatoryTerm {
    pub weight: f64,
    pub g: f64,
    pub p: f64,
    pub q: f64,
}

const fn term(weight: f64, g: f64, p: f64, q: f64) -> OscillatoryTerm {
    OscillatoryTerm { weight, g, p, q }
}

/// The oscillatory terms of the bracket, in printed order.
pub const OSCILLATORY_TERMS: [OscillatoryTerm; 24] = [
    term(75.0 / 512.0, 2.0, 1.0, 0.0),
    term(15.0 / 1024.0, 4.0, 1.0, 0.0),
    term(1.0 / 18432.0, 6.0, 1.0, 1.0),
    term(5.0 / 4608.0, 6.0, 1.0, 0.0),
    term(15.0 / 2048.0, 2.0, -3.0, 1.0),
    term(45.0 / 1024.0, 2.0, -2.0, 1.0),
    term(225.0 / 2048.0, 2.0, -1.0, 1.0),
    term(9.0 / 2048.0, 4.0, -1.0, 1.0),
    term(1.0 / 18432.0, 6.0, -1.0, 1.0),
    term(75.0 / 512.0, 2.0, 0.0, 1.0),
    term(15.0 / 1024.0, 4.0, 0.0, 1.0),
    term(5.0 / 4608.0, 6.0, 0.0, 1.0),
    term(225.0 / 2048.0, 2.0, 1.0, 1.0),
    term(9.0 / 2048.0, 4.0, 1.0, 1.0),
    term(45.0 / 1024.0, 2.0, 2.0, 1.0),
    term(15.0 / 2048.0, 2.0, 3.0, 1.0),
    term(3.0 / 1024.0, 2.0, -3.0, 2.0),
    term(45.0 / 1024.0, 2.0, -1.0, 2.0),
    term(45.0 / 1024.0, 2.0, 1.0, 2.0),
    term(3.0 / 1024.0, 2.0, 3.0, 2.0),
    term(3.0 / 1024.0, 2.0, -2.0, 3.0),
    term(15.0 / 2048.0, 2.0, -1.0, 3.0),
    term(15.0 / 2048.0, 2.0, 1.0, 3.0),
    term(3.0 / 1024.0, 2.0, 2.0, 3.0),
];

impl OscillatoryTerm {
    /// `(p + qκ)`.
    pub fn lambda<T: Real>(&self, kappa: T) -> T {
        T::of(self.p) + T::of(self.q) * kappa
    }

    /// Value of the term; `sin²(gJλt)/λ² → (gJt)²` as `λ → 0`.
    pub fn eval<T: Real>(&self, j: T, kappa: T, t: T) -> T {
        let lam = self.lambda(kappa);
        let gj = T::of(self.g) * j;
        let v = if lam.abs() < T::of(1e-9) { (gj * t).powi(2) } else { (gj * lam * t).sin().powi(2) / (lam * lam) };
        T::of(self.weight) * v
    }

    /// Angular frequency `2gJλ` of the `cos` part.
    pub fn frequency<T: Real>(&self, j: T, kappa: T) -> T {
        T::of(2.0 * self.g) * j * self.lambda(kappa)
    }
}

/// Bracket coefficient of `J²t²`.
pub fn quadratic_weight() -> f64 {
    let c = ct2::<i64>(2, 3, 3);
    *c.numer() as f64 / *c.denom() as f64
}

/// `n h⁴(1+κ²)/ω⁴`, the prefactor shared by the bracketed terms.
fn drift_prefactor<T: Real>(p: &ErrorModelParams<T>) -> T {
    T::of_usize(p.n) * p.h.powi(4) * (T::one() + p.kappa * p.kappa) / p.omega.powi(4)
}

/// Long-time quadratic coefficient of `ξ`: `(281/64) n J² h⁴(1+κ²)/ω⁴`.
pub fn quadratic_coefficient<T: Real>(p: &ErrorModelParams<T>) -> T {
    T::of(quadratic_weight()) * p.j * p.j * drift_prefactor(p)
}

/// `(frequency, cos coefficient)` of the bracket's oscillations expanded via
/// `sin²x = (1 − cos 2x)/2`, scaled like `ξ`.
pub fn oscillation_coefficients<T: Real>(p: &ErrorModelParams<T>) -> Vec<(T, T)> {
    let pre = drift_prefactor(p);
    OSCILLATORY_TERMS
        .iter()
        .filter(|o| o.lambda(p.kappa).abs() >= T::of(1e-9))
        .map(|o| {
            let lam = o.lambda(p.kappa);
            (o.frequency(p.j, p.kappa).abs(), -T::of(o.weight * 0.5) * pre / (lam * lam))
        })
        .collect()
}

/// The two trailing kick terms outside the bracket, before the `nh²/ω⁴`
/// scale.
pub fn kick_terms<T: Real>(p: &ErrorModelParams<T>, t: T) -> T {
    let (j, k) = (p.j, p.kappa);
    let one_k2 = T::one() + k * k;
    let cw = (p.omega * t).cos();
    let c2 = (T::of(2.0) * j * t).cos().powi(2);
    let ck4 = (T::of(2.0) * j * k * t).cos().powi(4);
    T::of(8.0) * j * j * (T::one() + cw * cw) * one_k2
        - T::of(16.0) * j * j * cw * c2 * ck4 * (one_k2 * c2 - T::of(3.0) * (j * k * t).sin())
}

/// `ξ(t)` from the closed-form expression with reference time `t₀ = 0`.
pub fn qhiffs_error_closed_form<T: Real>(p: &ErrorModelParams<T>, t: T) -> T {
    let (j, k, h) = (p.j, p.kappa, p.h);
    let mut bracket = T::of(quadratic_weight()) * j * j * t * t;
    for o in &OSCILLATORY_TERMS {
        bracket = bracket + o.eval(j, k, t);
    }
    let inner = h * h * (T::one() + k * k) * bracket + kick_terms(p, t);
    T::of_usize(p.n) * h * h / p.omega.powi(4) * inner
}
