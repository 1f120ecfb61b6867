//! High-frequency expansion: effective Hamiltonian and kick operator up to
//! second order in `1/ω`.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::lattice::{harmonic_phase, FloquetHamiltonian};
use crate::pauli::{commutator, PauliSum};
use crate::scalar::{cr, Real, C};

/// Highest supported expansion order.
pub const MAX_ORDER: usize = 2;

/// `op · e^{imωt}`.
#[derive(Clone, Debug, PartialEq)]
pub struct HarmonicTerm<T: Real = f64> {
    pub m: i64,
    pub op: PauliSum<T>,
}

/// Order-indexed `H_eff⁽ᵏ⁾` and harmonic kick terms `K⁽ᵏ⁾(t)`; both are
/// coefficients of `ω^{-k}`. `kick[0]` is always empty.
#[derive(Clone, Debug, PartialEq)]
pub struct HighFreqExpansion<T: Real = f64> {
    pub max_order: usize,
    pub omega: T,
    pub heff: Vec<PauliSum<T>>,
    pub kick: Vec<Vec<HarmonicTerm<T>>>,
}

/// Special-case families of the expansion.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CaseTag {
    /// `[H₀,V]=0`, one frequency, `[V⁽ʲ⁾,V⁽⁻ʲ⁾]=0`: the kick form is exact.
    Trivial,
    /// `[H₀,V]=0` otherwise.
    CommutingMultiFreq,
    /// `[H₀,V]≠0`, one frequency with commuting pair.
    NonCommutingSingleFreq,
    General,
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CaseTag::Trivial => "trivial",
            CaseTag::CommutingMultiFreq => "commuting-multifreq",
            CaseTag::NonCommutingSingleFreq => "noncommuting-singlefreq",
            CaseTag::General => "general",
        })
    }
}

/// Collects `Σ (A_m e^{imωt} − h.c.)·c` style contributions by harmonic.
struct Harmonics<T: Real> {
    n: usize,
    by_m: BTreeMap<i64, PauliSum<T>>,
}

impl<T: Real> Harmonics<T> {
    fn new(n: usize) -> Self {
        Self { n, by_m: BTreeMap::new() }
    }

    /// Adds `c·(A e^{imωt} − A† e^{−imωt})`.
    fn add_antihermitian_pair(&mut self, m: i64, a: &PauliSum<T>, c: C<T>) {
        let plus = a.scale(c);
        let minus = a.dagger().scale(-c);
        self.add(m, &plus);
        self.add(-m, &minus);
    }

    fn add(&mut self, m: i64, a: &PauliSum<T>) {
        let e = self.by_m.entry(m).or_insert_with(|| PauliSum::zero(self.n));
        *e = e.add(a).expect("sizes agree");
    }

    fn finish(self) -> Vec<HarmonicTerm<T>> {
        self.by_m
            .into_iter()
            .filter(|(m, op)| *m != 0 && !op.is_empty())
            .map(|(m, op)| HarmonicTerm { m, op })
            .collect()
    }
}

fn plus_hc<T: Real>(a: &PauliSum<T>) -> PauliSum<T> {
    a.add(&a.dagger()).expect("sizes agree")
}

/// Computes the expansion to `max_order` (0, 1 or 2).
pub fn expand<T: Real>(h: &FloquetHamiltonian<T>, max_order: usize) -> Result<HighFreqExpansion<T>> {
    if max_order > MAX_ORDER {
        return Err(Error::UnsupportedOrder(max_order));
    }
    let n = h.n_qubits();
    let h0 = h.h0();
    let js: Vec<i64> = h.harmonics().keys().map(|&j| j as i64).collect();
    let v = |m: i64| h.harmonic(m).unwrap_or_else(|| PauliSum::zero(n));
    let rf = |x: f64| T::of(x);
    let minus_i: C<T> = Complex::new(T::zero(), -T::one());

    let mut heff = vec![h0.clone()];
    let mut kick = vec![Vec::new()];

    if max_order >= 1 {
        let mut h1 = PauliSum::zero(n);
        let mut k1 = Harmonics::new(n);
        for &j in &js {
            let c = commutator(&v(j), &v(-j))?;
            h1 = h1.add(&c.scale_re(rf(1.0 / j as f64)))?;
            k1.add_antihermitian_pair(j, &v(j), minus_i * cr(rf(1.0 / j as f64)));
        }
        heff.push(h1);
        kick.push(k1.finish());
    }

    if max_order >= 2 {
        let mut h2 = PauliSum::zero(n);
        let mut k2 = Harmonics::new(n);
        let half_minus_i = minus_i * cr(rf(0.5));
        for &j in &js {
            let jf = j as f64;
            let vj_h0 = commutator(&v(j), h0)?;
            // −½ Σ 1/j² ([V⁽ʲ⁾,[V⁽⁻ʲ⁾,H₀]] + h.c.)
            let t1 = commutator(&v(j), &commutator(&v(-j), h0)?)?;
            h2 = h2.add(&plus_hc(&t1).scale_re(rf(-0.5 / (jf * jf))))?;
            // −i Σ 1/j² ([V⁽ʲ⁾,H₀] e^{ijωt} − h.c.)
            k2.add_antihermitian_pair(j, &vj_h0, minus_i * cr(rf(1.0 / (jf * jf))));
            for &k in &js {
                let kf = k as f64;
                // ⅓ Σ_{j,k} 1/(jk) ([V⁽ʲ⁾,[V⁽ᵏ⁾,V⁽⁻ʲ⁻ᵏ⁾]] + h.c.)
                let far = v(-j - k);
                if !far.is_empty() {
                    let t2 = commutator(&v(j), &commutator(&v(k), &far)?)?;
                    h2 = h2.add(&plus_hc(&t2).scale_re(rf(1.0 / (3.0 * jf * kf))))?;
                }
                // −(i/2) Σ_{j,k} 1/(j(j+k)) ([V⁽ʲ⁾,V⁽ᵏ⁾] e^{i(j+k)ωt} − h.c.)
                let vjvk = commutator(&v(j), &v(k))?;
                k2.add_antihermitian_pair(j + k, &vjvk, half_minus_i * cr(rf(1.0 / (jf * (jf + kf)))));
                if j != k {
                    // −⅓ Σ_{j≠k} 1/(jk) ([V⁽ʲ⁾,[V⁽⁻ᵏ⁾,V⁽ᵏ⁻ʲ⁾]] + h.c.)
                    let t3 = commutator(&v(j), &commutator(&v(-k), &v(k - j))?)?;
                    h2 = h2.add(&plus_hc(&t3).scale_re(rf(-SECOND_ORDER_CROSS_WEIGHT / (jf * kf))))?;
                    // −(i/2) Σ_{j≠k} 1/(j(j−k)) ([V⁽ʲ⁾,V⁽⁻ᵏ⁾] e^{i(j−k)ωt} − h.c.)
                    let vjvmk = commutator(&v(j), &v(-k))?;
                    k2.add_antihermitian_pair(j - k, &vjvmk, half_minus_i * cr(rf(1.0 / (jf * (jf - kf)))));
                }
            }
        }
        heff.push(h2);
        kick.push(k2.finish());
    }

    Ok(HighFreqExpansion { max_order, omega: h.omega(), heff, kick })
}

/// Weight of the `[V⁽ʲ⁾,[V⁽⁻ᵏ⁾,V⁽ᵏ⁻ʲ⁾]]` family in `H_eff⁽²⁾`.
const SECOND_ORDER_CROSS_WEIGHT: f64 = 1.0 / 3.0;

/// `Σ_m op_m e^{imωt}` for one kick order.
pub fn kick_order_at<T: Real>(terms: &[HarmonicTerm<T>], n: usize, t: T, omega: T) -> PauliSum<T> {
    let mut out = PauliSum::zero(n);
    for ht in terms {
        let (c, s) = harmonic_phase(ht.m, omega, t);
        let ph = Complex::new(c, s);
        for (p, a) in ht.op.iter() {
            out.add_term(p, a * ph);
        }
    }
    out
}

/// `K(t) = Σₖ ω^{-k} K⁽ᵏ⁾(t)` through the expansion's order.
pub fn kick_at<T: Real>(exp: &HighFreqExpansion<T>, t: T, omega: T) -> PauliSum<T> {
    kick_at_order(exp, t, omega, exp.max_order)
}

/// Kick operator truncated at `order`.
pub fn kick_at_order<T: Real>(exp: &HighFreqExpansion<T>, t: T, omega: T, order: usize) -> PauliSum<T> {
    let n = exp.heff[0].n_qubits();
    let mut out = PauliSum::zero(n);
    for k in 1..=order.min(exp.max_order) {
        let part = kick_order_at(&exp.kick[k], n, t, omega).scale_re(omega.powi(-(k as i32)));
        out = out.add(&part).expect("sizes agree");
    }
    // the harmonic sum is Hermitian; drop rounding residue in the imaginary parts
    let mut clean = PauliSum::zero(n);
    for (p, c) in out.iter() {
        clean.add_term(p, cr(c.re));
    }
    clean
}

/// `Σ_{k≤order} ω^{-k} H_eff⁽ᵏ⁾`.
pub fn heff_truncated<T: Real>(exp: &HighFreqExpansion<T>, omega: T, order: usize) -> PauliSum<T> {
    let mut out = exp.heff[0].clone();
    for k in 1..=order.min(exp.max_order) {
        out = out.add(&exp.heff[k].scale_re(omega.powi(-(k as i32)))).expect("sizes agree");
    }
    out
}

/// Decides the special-case family by symbolic commutator tests.
pub fn classify<T: Real>(h: &FloquetHamiltonian<T>) -> CaseTag {
    let h0 = h.h0();
    let comm_h0 = h.harmonics().values().all(|v| commutator(h0, v).map(|c| c.is_empty()).unwrap_or(false));
    let single = h.harmonics().len() <= 1;
    let pairs = h.harmonics().keys().all(|&j| {
        let (a, b) = (h.harmonic(j as i64).unwrap(), h.harmonic(-(j as i64)).unwrap());
        commutator(&a, &b).map(|c| c.is_empty()).unwrap_or(false)
    });
    match (comm_h0, single && pairs) {
        (true, true) => CaseTag::Trivial,
        (true, false) => CaseTag::CommutingMultiFreq,
        (false, true) => CaseTag::NonCommutingSingleFreq,
        (false, false) => CaseTag::General,
    }
}

impl<T: Real> fmt::Display for HighFreqExpansion<T> {
    /// One block per `(k, m)`: a header line then the PauliSum text format.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, h) in self.heff.iter().enumerate() {
            writeln!(f, "# heff k={k}")?;
            f.write_str(&h.to_text())?;
        }
        for (k, terms) in self.kick.iter().enumerate().skip(1) {
            for ht in terms {
                writeln!(f, "# kick k={k} m={}", ht.m)?;
                f.write_str(&ht.op.to_text())?;
            }
        }
        Ok(())
    }
}
