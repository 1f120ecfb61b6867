//! Trigonometric polynomials over integer combinations of base frequencies.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Maximum number of base frequencies.
pub const MAX_BASIS: usize = 8;

/// Integer coordinates of a frequency on a [`FrequencyBasis`].
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Freq(pub [i32; MAX_BASIS]);

impl Freq {
    pub const ZERO: Freq = Freq([0; MAX_BASIS]);

    /// `k · e_i`.
    pub fn unit(i: usize, k: i32) -> Self {
        let mut f = [0; MAX_BASIS];
        f[i] = k;
        Freq(f)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&k| k == 0)
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut f = self.0;
        f.iter_mut().zip(o.0).for_each(|(a, b)| *a += b);
        Freq(f)
    }

    pub fn sub(&self, o: &Self) -> Self {
        let mut f = self.0;
        f.iter_mut().zip(o.0).for_each(|(a, b)| *a -= b);
        Freq(f)
    }

    pub fn neg(&self) -> Self {
        Freq(self.0.map(|a| -a))
    }

    /// Canonical sign: first nonzero coordinate positive. Returns the
    /// canonical key and whether it was flipped.
    pub fn canonical(&self) -> (Self, bool) {
        match self.0.iter().find(|&&k| k != 0) {
            Some(&k) if k < 0 => (self.neg(), true),
            _ => (*self, false),
        }
    }
}

/// Numeric values of the base frequencies.
#[derive(Clone, Debug, PartialEq)]
pub struct FrequencyBasis<T: Real = f64> {
    values: Vec<T>,
    labels: Vec<String>,
}

impl<T: Real> FrequencyBasis<T> {
    pub fn new() -> Self {
        Self { values: Vec::new(), labels: Vec::new() }
    }

    /// Index of `value` (matched to relative 1e-12), appending when new.
    pub fn intern(&mut self, value: T, label: &str) -> Result<usize> {
        let tol = T::of(1e-12) * value.abs().max(T::one());
        if let Some(i) = self.values.iter().position(|v| (*v - value).abs() <= tol) {
            return Ok(i);
        }
        if self.values.len() == MAX_BASIS {
            return Err(Error::Unsupported(format!("more than {MAX_BASIS} independent frequencies")));
        }
        self.values.push(value);
        self.labels.push(label.to_string());
        Ok(self.values.len() - 1)
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Numeric value of `f`.
    pub fn value(&self, f: &Freq) -> T {
        self.values.iter().zip(f.0).map(|(v, k)| *v * T::of(k as f64)).sum()
    }

    /// Scale below which a frequency counts as zero.
    pub fn zero_tol(&self) -> T {
        let m = self.values.iter().fold(T::zero(), |a, v| a.max(v.abs()));
        T::of(1e-9) * m.max(T::min_positive_value())
    }

    pub fn is_resonant(&self, f: &Freq) -> bool {
        self.value(f).abs() <= self.zero_tol()
    }

    /// Human-readable form such as `4·J − 2·Jκ`.
    pub fn describe(&self, f: &Freq) -> String {
        let parts: Vec<String> =
            f.0.iter()
                .enumerate()
                .filter(|(_, k)| **k != 0)
                .map(|(i, k)| format!("{k}·{}", self.labels.get(i).map(String::as_str).unwrap_or("?")))
                .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

impl<T: Real> Default for FrequencyBasis<T> {
    fn default() -> Self {
        Self::new()
    }
}

/// `c₀ + Σ_ν (a_ν cos νt + b_ν sin νt)` with canonical frequency keys; the
/// constant lives at [`Freq::ZERO`].
#[derive(Clone, PartialEq, Debug)]
pub struct TrigPoly<T: Real = f64> {
    terms: BTreeMap<Freq, (T, T)>,
}

impl<T: Real> Default for TrigPoly<T> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<T: Real> TrigPoly<T> {
    pub fn zero() -> Self {
        Self { terms: BTreeMap::new() }
    }

    pub fn constant(c: T) -> Self {
        let mut p = Self::zero();
        p.add_cos(Freq::ZERO, c);
        p
    }

    pub fn cos(f: Freq, a: T) -> Self {
        let mut p = Self::zero();
        p.add_cos(f, a);
        p
    }

    pub fn sin(f: Freq, b: T) -> Self {
        let mut p = Self::zero();
        p.add_sin(f, b);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Adds `a cos(f t)`.
    pub fn add_cos(&mut self, f: Freq, a: T) {
        let (k, _) = f.canonical();
        self.accumulate(k, a, T::zero());
    }

    /// Adds `b sin(f t)`; dropped when `f` is zero.
    pub fn add_sin(&mut self, f: Freq, b: T) {
        if f.is_zero() {
            return;
        }
        let (k, flipped) = f.canonical();
        self.accumulate(k, T::zero(), if flipped { -b } else { b });
    }

    fn accumulate(&mut self, k: Freq, a: T, b: T) {
        let e = self.terms.entry(k).or_insert((T::zero(), T::zero()));
        e.0 = e.0 + a;
        e.1 = e.1 + b;
        if e.0 == T::zero() && e.1 == T::zero() {
            self.terms.remove(&k);
        }
    }

    /// Constant part (zero key only; see [`TrigPoly::secular_constant`]).
    pub fn constant_term(&self) -> T {
        self.terms.get(&Freq::ZERO).map(|c| c.0).unwrap_or_else(T::zero)
    }

    /// Constant part including terms whose frequency vanishes numerically.
    pub fn secular_constant(&self, basis: &FrequencyBasis<T>) -> T {
        self.terms.iter().filter(|(f, _)| basis.is_resonant(f)).map(|(_, c)| c.0).sum()
    }

    /// `(cos, sin)` coefficients at key `f` (canonicalized).
    pub fn coefficient(&self, f: &Freq) -> (T, T) {
        let (k, flipped) = f.canonical();
        let (a, b) = self.terms.get(&k).copied().unwrap_or((T::zero(), T::zero()));
        (a, if flipped { -b } else { b })
    }

    /// Summed `(cos, sin)` coefficients of all keys whose numeric frequency
    /// equals `|nu|`.
    pub fn coefficient_at(&self, nu: T, basis: &FrequencyBasis<T>) -> (T, T) {
        let tol = basis.zero_tol();
        let mut acc = (T::zero(), T::zero());
        for (f, (a, b)) in &self.terms {
            let v = basis.value(f);
            if (v - nu.abs()).abs() <= tol {
                acc = (acc.0 + *a, acc.1 + *b);
            } else if (v + nu.abs()).abs() <= tol {
                acc = (acc.0 + *a, acc.1 - *b);
            }
        }
        acc
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Freq, &(T, T))> {
        self.terms.iter()
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut p = self.clone();
        p.add_assign(o);
        p
    }

    pub fn add_assign(&mut self, o: &Self) {
        for (k, (a, b)) in &o.terms {
            self.accumulate(*k, *a, *b);
        }
    }

    pub fn scale(&self, s: T) -> Self {
        if s == T::zero() {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|(k, (a, b))| (*k, (*a * s, *b * s))).collect() }
    }

    /// Product by the angle-addition identities.
    pub fn mul(&self, o: &Self) -> Self {
        let half = T::of(0.5);
        let mut p = Self::zero();
        for (fa, &(ca, sa)) in &self.terms {
            for (fb, &(cb, sb)) in &o.terms {
                let sum = fa.add(fb);
                let diff = fa.sub(fb);
                p.add_cos(sum, half * (ca * cb - sa * sb));
                p.add_sin(sum, half * (sa * cb + ca * sb));
                p.add_cos(diff, half * (ca * cb + sa * sb));
                p.add_sin(diff, half * (sa * cb - ca * sb));
            }
        }
        p
    }

    /// Value at `t`.
    pub fn eval(&self, t: T, basis: &FrequencyBasis<T>) -> T {
        self.terms
            .iter()
            .map(|(f, (a, b))| {
                let x = basis.value(f) * t;
                *a * x.cos() + *b * x.sin()
            })
            .sum()
    }
}

impl<T: Real> fmt::Display for TrigPoly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(
                |(k, (a, b))| {
                    if k.is_zero() {
                        format!("{a}")
                    } else {
                        format!("{a}·cos{:?} + {b}·sin{:?}", k.0, k.0)
                    }
                },
            )
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// `Σ_p τ^p · P_p(τ)`, the form taken by time integrals of a [`TrigPoly`].
#[derive(Clone, PartialEq, Debug, Default)]
pub struct SecularTrigPoly<T: Real = f64> {
    pub coeffs: Vec<TrigPoly<T>>,
}

impl<T: Real> SecularTrigPoly<T> {
    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn from_poly(p: TrigPoly<T>) -> Self {
        Self { coeffs: vec![p] }
    }

    /// Coefficient of `τ^p`.
    pub fn power(&self, p: usize) -> TrigPoly<T> {
        self.coeffs.get(p).cloned().unwrap_or_default()
    }

    pub fn add_at(&mut self, p: usize, poly: &TrigPoly<T>) {
        while self.coeffs.len() <= p {
            self.coeffs.push(TrigPoly::zero());
        }
        self.coeffs[p].add_assign(poly);
    }

    pub fn add_assign(&mut self, o: &Self) {
        for (p, poly) in o.coeffs.iter().enumerate() {
            self.add_at(p, poly);
        }
    }

    pub fn scale(&self, s: T) -> Self {
        Self { coeffs: self.coeffs.iter().map(|p| p.scale(s)).collect() }
    }

    /// Product with a plain trigonometric polynomial.
    pub fn mul_poly(&self, o: &TrigPoly<T>) -> Self {
        Self { coeffs: self.coeffs.iter().map(|p| p.mul(o)).collect() }
    }

    pub fn eval(&self, tau: T, basis: &FrequencyBasis<T>) -> T {
        self.coeffs.iter().enumerate().map(|(p, poly)| poly.eval(tau, basis) * tau.powi(p as i32)).sum()
    }
}

/// `∫₀^τ f(s) ds`. Numerically vanishing frequencies integrate as constants.
pub fn integrate<T: Real>(f: &TrigPoly<T>, basis: &FrequencyBasis<T>) -> SecularTrigPoly<T> {
    let mut out = SecularTrigPoly::zero();
    for (k, &(a, b)) in f.iter() {
        if basis.is_resonant(k) {
            out.add_at(1, &TrigPoly::constant(a));
            continue;
        }
        let nu = basis.value(k);
        // ∫ a cos = a sin/ν, ∫ b sin = b (1 − cos)/ν
        let mut p = TrigPoly::sin(*k, a / nu);
        p.add_cos(Freq::ZERO, b / nu);
        p.add_cos(*k, -b / nu);
        out.add_at(0, &p);
    }
    out
}

/// `∫_{−τ}^0 f(u) du`.
pub fn integrate_backward<T: Real>(f: &TrigPoly<T>, basis: &FrequencyBasis<T>) -> SecularTrigPoly<T> {
    let mut out = SecularTrigPoly::zero();
    for (k, &(a, b)) in f.iter() {
        if basis.is_resonant(k) {
            out.add_at(1, &TrigPoly::constant(a));
            continue;
        }
        let nu = basis.value(k);
        // ∫ a cos = a sin(ντ)/ν, ∫ b sin = b (cos(ντ) − 1)/ν
        let mut p = TrigPoly::sin(*k, a / nu);
        p.add_cos(Freq::ZERO, -b / nu);
        p.add_cos(*k, b / nu);
        out.add_at(0, &p);
    }
    out
}

/// `∫₀^τ∫₀^τ f(s₂ − s₁) ds₁ ds₂` for even `f` (odd parts integrate to zero).
pub fn double_integrate_even<T: Real>(f: &TrigPoly<T>, basis: &FrequencyBasis<T>) -> SecularTrigPoly<T> {
    let mut out = SecularTrigPoly::zero();
    for (k, &(a, _)) in f.iter() {
        if basis.is_resonant(k) {
            out.add_at(2, &TrigPoly::constant(a));
            continue;
        }
        let nu = basis.value(k);
        // |∫₀^τ e^{iνs} ds|² = 2(1 − cos ντ)/ν²
        let w = T::of(2.0) * a / (nu * nu);
        let mut p = TrigPoly::constant(w);
        p.add_cos(*k, -w);
        out.add_at(0, &p);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn basis() -> FrequencyBasis<f64> {
        let mut b = FrequencyBasis::new();
        b.intern(1.0, "J").unwrap();
        b.intern(0.3, "Jk").unwrap();
        b
    }

    #[test]
    fn canonical_sign_folding() {
        let b = basis();
        let mut p = TrigPoly::<f64>::zero();
        p.add_sin(Freq::unit(0, -2), 1.5);
        p.add_cos(Freq::unit(0, -2), 0.5);
        assert_eq!(p.coefficient(&Freq::unit(0, 2)), (0.5, -1.5));
        for t in [0.1f64, 0.7, 2.3] {
            let direct = 0.5 * (-2.0 * t).cos() + 1.5 * (-2.0 * t).sin();
            assert!((p.eval(t, &b) - direct).abs() < 1e-14);
        }
    }

    #[test]
    fn integral_of_constant_is_secular() {
        let b = basis();
        let s = integrate(&TrigPoly::constant(3.0), &b);
        assert!((s.eval(2.0, &b) - 6.0).abs() < 1e-14);
    }
}
