//! Bit-encoded Pauli strings and complex-weighted sums of them.
//!
//! A string stores `i^phase · ⊗_q σ_q` where qubit `q` carries `X` if only bit
//! `q` of `x` is set, `Z` if only bit `q` of `z` is set and `Y` if both are.
//! Qubit `q` corresponds to bit `q` of a computational basis index.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{c0, cr, i_pow, Real, C};

/// Largest register supported by the bit encoding.
pub const MAX_QUBITS: usize = 64;

/// Default magnitude below which coefficients are dropped.
pub const DEFAULT_PRUNE_TOL: f64 = 1e-12;

#[inline]
fn mask_for(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// An n-qubit Pauli operator with a global factor `i^phase`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct PauliString {
    n_qubits: usize,
    x: u64,
    z: u64,
    phase: u8,
}

impl PauliString {
    /// Builds a string from masks; rejects bits beyond `n_qubits`.
    pub fn new(n_qubits: usize, x_mask: u64, z_mask: u64, phase_exp: u8) -> Result<Self> {
        if n_qubits == 0 || n_qubits > MAX_QUBITS {
            return Err(Error::InvalidArgument(format!("qubit count {n_qubits} outside 1..={MAX_QUBITS}")));
        }
        let m = mask_for(n_qubits);
        if x_mask & !m != 0 || z_mask & !m != 0 {
            return Err(Error::InvalidArgument("mask has bits beyond the register".into()));
        }
        Ok(Self { n_qubits, x: x_mask, z: z_mask, phase: phase_exp & 3 })
    }

    /// Identity on `n_qubits` qubits.
    pub fn identity(n_qubits: usize) -> Self {
        Self::new(n_qubits, 0, 0, 0).expect("valid register")
    }

    /// Single-qubit operator `p` ∈ {I,X,Y,Z} on qubit `q`.
    pub fn single(n_qubits: usize, q: usize, p: char) -> Result<Self> {
        if q >= n_qubits {
            return Err(Error::InvalidArgument(format!("qubit {q} out of range")));
        }
        let b = 1u64 << q;
        let (x, z) = match p {
            'I' => (0, 0),
            'X' => (b, 0),
            'Y' => (b, b),
            'Z' => (0, b),
            _ => return Err(Error::InvalidPauliWord(p.to_string())),
        };
        Self::new(n_qubits, x, z, 0)
    }

    /// Parses a word over {I,X,Y,Z}, qubit 0 leftmost.
    pub fn from_word(word: &str) -> Result<Self> {
        let n = word.chars().count();
        if n == 0 || n > MAX_QUBITS {
            return Err(Error::InvalidPauliWord(word.to_string()));
        }
        let (mut x, mut z) = (0u64, 0u64);
        for (q, ch) in word.chars().enumerate() {
            let b = 1u64 << q;
            match ch {
                'I' => {}
                'X' => x |= b,
                'Y' => {
                    x |= b;
                    z |= b
                }
                'Z' => z |= b,
                _ => return Err(Error::InvalidPauliWord(word.to_string())),
            }
        }
        Self::new(n, x, z, 0)
    }

    /// Word over {I,X,Y,Z} ignoring the phase, qubit 0 leftmost.
    pub fn word(&self) -> String {
        (0..self.n_qubits)
            .map(|q| match ((self.x >> q) & 1, (self.z >> q) & 1) {
                (0, 0) => 'I',
                (1, 0) => 'X',
                (1, 1) => 'Y',
                _ => 'Z',
            })
            .collect()
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }
    pub fn x_mask(&self) -> u64 {
        self.x
    }
    pub fn z_mask(&self) -> u64 {
        self.z
    }
    pub fn phase_exp(&self) -> u8 {
        self.phase
    }

    /// Same string with phase 0.
    pub fn normalized(&self) -> Self {
        Self { phase: 0, ..*self }
    }

    pub fn with_phase(&self, phase_exp: u8) -> Self {
        Self { phase: phase_exp & 3, ..*self }
    }

    pub fn is_identity(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    /// True when the operator is diagonal in the computational basis.
    pub fn is_diagonal(&self) -> bool {
        self.x == 0
    }

    /// Number of non-identity sites.
    pub fn weight(&self) -> u32 {
        (self.x | self.z).count_ones()
    }

    /// Qubits carrying a non-identity factor, ascending.
    pub fn support(&self) -> Vec<usize> {
        let s = self.x | self.z;
        (0..self.n_qubits).filter(|q| (s >> q) & 1 == 1).collect()
    }

    /// Whether `self` and `other` commute.
    pub fn commutes_with(&self, other: &Self) -> bool {
        ((self.x & other.z) ^ (self.z & other.x)).count_ones().is_multiple_of(2)
    }

    /// Product `self · other`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::QubitMismatch(self.n_qubits, other.n_qubits));
        }
        Ok(self.mul_unchecked(other))
    }

    #[inline]
    pub(crate) fn mul_unchecked(&self, other: &Self) -> Self {
        let (x1, z1, x2, z2) = (self.x, self.z, other.x, other.z);
        let (ya, xa, za) = (x1 & z1, x1 & !z1, !x1 & z1);
        let (yb, xb, zb) = (x2 & z2, x2 & !z2, !x2 & z2);
        let plus = (ya & zb).count_ones() + (xa & yb).count_ones() + (za & xb).count_ones();
        let minus = (ya & xb).count_ones() + (xa & zb).count_ones() + (za & yb).count_ones();
        let phase = (self.phase as u32 + other.phase as u32 + plus + 4 * 64 - minus) & 3;
        Self { n_qubits: self.n_qubits, x: x1 ^ x2, z: z1 ^ z2, phase: phase as u8 }
    }

    /// Hermitian conjugate; only the phase can change.
    pub fn dagger(&self) -> Self {
        Self { phase: (4 - self.phase) & 3, ..*self }
    }

    /// Action on basis state `b`: returns `(b', k)` with `P|b⟩ = i^k |b'⟩`.
    #[inline]
    pub fn apply_to_basis(&self, b: u64) -> (u64, u8) {
        let ny = (self.x & self.z).count_ones();
        let sign = 2 * ((self.z & b).count_ones() & 1);
        (b ^ self.x, ((self.phase as u32 + ny + sign) & 3) as u8)
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = ["", "i·", "-", "-i·"][self.phase as usize];
        write!(f, "{p}{}", self.word())
    }
}

/// Key of a phase-normalized string, ordered by `(z_mask, x_mask)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
struct Key {
    z: u64,
    x: u64,
}

/// Complex-weighted sum of phase-normalized Pauli strings.
#[derive(Clone, PartialEq, Debug)]
pub struct PauliSum<T: Real = f64> {
    n_qubits: usize,
    terms: BTreeMap<Key, C<T>>,
    tol: T,
}

impl<T: Real> PauliSum<T> {
    /// Empty (zero) operator.
    pub fn zero(n_qubits: usize) -> Self {
        assert!((1..=MAX_QUBITS).contains(&n_qubits), "qubit count {n_qubits} outside 1..={MAX_QUBITS}");
        Self { n_qubits, terms: BTreeMap::new(), tol: T::of(DEFAULT_PRUNE_TOL) }
    }

    /// Zero operator with a custom pruning tolerance.
    pub fn zero_with_tol(n_qubits: usize, tol: T) -> Self {
        let mut s = Self::zero(n_qubits);
        s.tol = tol;
        s
    }

    /// `c · I`.
    pub fn identity(n_qubits: usize, c: C<T>) -> Self {
        Self::from_string(PauliString::identity(n_qubits), c)
    }

    /// `c · P`, with the phase of `P` folded into the coefficient.
    pub fn from_string(p: PauliString, c: C<T>) -> Self {
        let mut s = Self::zero(p.n_qubits);
        s.add_term(p, c);
        s
    }

    /// Builds a sum from `(coefficient, word)` pairs.
    pub fn from_words(terms: &[(C<T>, &str)]) -> Result<Self> {
        let first = terms.first().ok_or_else(|| Error::InvalidArgument("no terms".into()))?;
        let n = first.1.chars().count();
        let mut s = Self::zero(n.max(1));
        for (c, w) in terms {
            let p = PauliString::from_word(w)?;
            if p.n_qubits != n {
                return Err(Error::QubitMismatch(n, p.n_qubits));
            }
            s.add_term(p, *c);
        }
        Ok(s)
    }

    /// Real-weighted single-qubit Paulis on each listed qubit.
    pub fn sum_single(n_qubits: usize, qubits: impl IntoIterator<Item = usize>, p: char, c: T) -> Result<Self> {
        let mut s = Self::zero(n_qubits);
        for q in qubits {
            s.add_term(PauliString::single(n_qubits, q, p)?, cr(c));
        }
        Ok(s)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }
    pub fn tolerance(&self) -> T {
        self.tol
    }
    pub fn len(&self) -> usize {
        self.terms.len()
    }
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Adds `c · p` in place and prunes the affected entry.
    pub fn add_term(&mut self, p: PauliString, c: C<T>) {
        assert_eq!(p.n_qubits, self.n_qubits, "qubit count mismatch");
        let c = c * i_pow::<T>(p.phase);
        let key = Key { z: p.z, x: p.x };
        let e = self.terms.entry(key).or_insert_with(c0);
        *e = *e + c;
        if e.norm() < self.tol {
            self.terms.remove(&key);
        }
    }

    /// Coefficient of the phase-0 string `p` (zero when absent).
    pub fn coeff(&self, p: &PauliString) -> C<T> {
        let c = self.terms.get(&Key { z: p.z, x: p.x }).copied().unwrap_or_else(c0);
        // c·P0 = (c·i^-k)·(i^k P0)
        c * i_pow::<T>((4 - p.phase) & 3)
    }

    /// Iterates `(phase-0 string, coefficient)` in canonical order.
    pub fn iter(&self) -> impl Iterator<Item = (PauliString, C<T>)> + '_ {
        let n = self.n_qubits;
        self.terms.iter().map(move |(k, c)| (PauliString { n_qubits: n, x: k.x, z: k.z, phase: 0 }, *c))
    }

    /// Strings with real coefficients; fails on a non-negligible imaginary part.
    pub fn real_terms(&self) -> Result<Vec<(PauliString, T)>> {
        self.iter()
            .map(|(p, c)| {
                if c.im.abs() > self.tol.max(T::of(1e-10) * c.norm()) {
                    Err(Error::NotHermitian(c.im.as_f64()))
                } else {
                    Ok((p, c.re))
                }
            })
            .collect()
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.n_qubits != other.n_qubits {
            Err(Error::QubitMismatch(self.n_qubits, other.n_qubits))
        } else {
            Ok(())
        }
    }

    /// `self + other`.
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut s = self.clone();
        for (p, c) in other.iter() {
            s.add_term(p, c);
        }
        Ok(s)
    }

    /// `self − other`.
    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(cr(-T::one())))
    }

    /// `c · self`.
    pub fn scale(&self, c: C<T>) -> Self {
        let mut s = Self::zero_with_tol(self.n_qubits, self.tol);
        for (p, v) in self.iter() {
            s.add_term(p, v * c);
        }
        s
    }

    /// `t · self` for real `t`.
    pub fn scale_re(&self, t: T) -> Self {
        self.scale(cr(t))
    }

    /// Operator product `self · other`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut s = Self::zero_with_tol(self.n_qubits, self.tol);
        for (a, ca) in self.iter() {
            for (b, cb) in other.iter() {
                s.add_term(a.mul_unchecked(&b), ca * cb);
            }
        }
        Ok(s)
    }

    /// Hermitian conjugate.
    pub fn dagger(&self) -> Self {
        let mut s = self.clone();
        for c in s.terms.values_mut() {
            *c = c.conj();
        }
        s
    }

    /// Largest `|A − A†|` coefficient.
    pub fn hermiticity_defect(&self) -> T {
        self.terms.values().map(|c| c.im.abs()).fold(T::zero(), T::max) * (T::one() + T::one())
    }

    /// `A = A†` up to the pruning tolerance.
    pub fn is_hermitian(&self) -> bool {
        self.hermiticity_defect() <= self.tol
    }

    /// `Σ |c|`, an upper bound on the spectral norm.
    pub fn norm_bound(&self) -> T {
        self.terms.values().map(|c| c.norm()).sum()
    }

    /// `Tr(A) / 2^n`.
    pub fn normalized_trace(&self) -> C<T> {
        self.terms.get(&Key { z: 0, x: 0 }).copied().unwrap_or_else(c0)
    }

    /// `Tr(A B) / 2^n`.
    pub fn normalized_trace_product(&self, other: &Self) -> Result<C<T>> {
        self.check(other)?;
        let mut acc = c0::<T>();
        for (p, c) in self.iter() {
            // P·P = I for phase-0 strings, other pairs are traceless
            if let Some(d) = other.terms.get(&Key { z: p.z, x: p.x }) {
                acc = acc + c * *d;
            }
        }
        Ok(acc)
    }

    pub fn is_diagonal(&self) -> bool {
        self.terms.keys().all(|k| k.x == 0)
    }

    /// Every term acts on at most one qubit.
    pub fn is_one_local(&self) -> bool {
        self.terms.keys().all(|k| (k.x | k.z).count_ones() <= 1)
    }

    /// All pairs of terms commute.
    pub fn is_commuting(&self) -> bool {
        let ps: Vec<PauliString> = self.iter().map(|(p, _)| p).collect();
        ps.iter().enumerate().all(|(i, a)| ps[i + 1..].iter().all(|b| a.commutes_with(b)))
    }

    /// Drops terms with magnitude below `tol`.
    pub fn pruned(&self, tol: T) -> Self {
        let mut s = self.clone();
        s.terms.retain(|_, c| c.norm() >= tol);
        s
    }

    /// Maximum coefficient deviation from `other`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<T> {
        let d = self.sub(other)?;
        Ok(d.terms.values().map(|c| c.norm()).fold(T::zero(), T::max))
    }

    /// Serializes as `<re> <im> <word>` lines in canonical order.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (p, c) in self.iter() {
            out.push_str(&format!("{} {} {}\n", c.re, c.im, p.word()));
        }
        out
    }

    /// Parses the format written by [`PauliSum::to_text`]. Blank lines and
    /// lines starting with `#` are skipped. An empty document needs `n_qubits`.
    pub fn from_text(text: &str, n_qubits: Option<usize>) -> Result<Self> {
        let mut sum: Option<Self> = n_qubits.map(Self::zero);
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let perr = |msg: &str| Error::Parse { line: i + 1, msg: msg.to_string() };
            let mut it = line.split_whitespace();
            let (re, im, w) = match (it.next(), it.next(), it.next(), it.next()) {
                (Some(a), Some(b), Some(c), None) => (a, b, c),
                _ => return Err(perr("expected `<re> <im> <word>`")),
            };
            let re: T = re.parse().map_err(|_| perr("bad real part"))?;
            let im: T = im.parse().map_err(|_| perr("bad imaginary part"))?;
            let p = PauliString::from_word(w).map_err(|e| perr(&e.to_string()))?;
            let s = sum.get_or_insert_with(|| Self::zero(p.n_qubits));
            if s.n_qubits != p.n_qubits {
                return Err(perr("word length differs from register size"));
            }
            // keep parsed values verbatim so the round trip is exact
            s.terms.insert(Key { z: p.z, x: p.x }, Complex::new(re, im));
        }
        sum.ok_or_else(|| Error::Parse { line: 0, msg: "empty document without qubit count".into() })
    }
}

impl<T: Real> fmt::Display for PauliSum<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.iter().map(|(p, c)| format!("({}{:+}i)·{}", c.re, c.im, p.word())).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Commutator `[A, B] = AB − BA`.
pub fn commutator<T: Real>(a: &PauliSum<T>, b: &PauliSum<T>) -> Result<PauliSum<T>> {
    a.check(b)?;
    let mut s = PauliSum::zero_with_tol(a.n_qubits, a.tol);
    let two = cr(T::one() + T::one());
    for (p, cp) in a.iter() {
        for (q, cq) in b.iter() {
            // commuting pairs cancel, anticommuting ones double
            if !p.commutes_with(&q) {
                s.add_term(p.mul_unchecked(&q), cp * cq * two);
            }
        }
    }
    Ok(s)
}

/// `q`-fold nested commutator `[A, [A, … [A, B]]]`.
pub fn nested_commutator<T: Real>(a: &PauliSum<T>, b: &PauliSum<T>, q: usize) -> Result<PauliSum<T>> {
    a.check(b)?;
    let mut acc = b.clone();
    for _ in 0..q {
        acc = commutator(a, &acc)?;
    }
    Ok(acc)
}

/// Product of two strings; see [`PauliString::mul`].
pub fn mul(a: &PauliString, b: &PauliString) -> Result<PauliString> {
    a.mul(b)
}

/// Free-function form of [`PauliSum::norm_bound`].
pub fn norm_bound<T: Real>(a: &PauliSum<T>) -> T {
    a.norm_bound()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_qubit_table() {
        let x = PauliString::from_word("X").unwrap();
        let z = PauliString::from_word("Z").unwrap();
        let y = PauliString::from_word("Y").unwrap();
        assert_eq!(x.mul(&z).unwrap(), y.with_phase(3));
        assert_eq!(z.mul(&z).unwrap(), PauliString::identity(1));
        assert_eq!(x.mul(&y).unwrap(), z.with_phase(1));
        assert_eq!(y.mul(&z).unwrap(), x.with_phase(1));
        assert_eq!(z.mul(&x).unwrap(), y.with_phase(1));
    }

    #[test]
    fn size_mismatch() {
        let a = PauliString::from_word("X").unwrap();
        let b = PauliString::from_word("XX").unwrap();
        assert!(matches!(a.mul(&b), Err(Error::QubitMismatch(1, 2))));
    }

    #[test]
    fn commutator_basics() {
        let z = PauliSum::<f64>::from_words(&[(cr(1.0), "Z")]).unwrap();
        let x = PauliSum::<f64>::from_words(&[(cr(1.0), "X")]).unwrap();
        let c = commutator(&z, &x).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c.coeff(&PauliString::from_word("Y").unwrap()), Complex::new(0.0, 2.0));
        assert!(commutator(&x, &x).unwrap().is_empty());
        let n2 = nested_commutator(&x, &z, 2).unwrap();
        assert_eq!(n2.coeff(&PauliString::from_word("Z").unwrap()), cr(4.0));
        assert_eq!(nested_commutator(&x, &z, 0).unwrap(), z);
    }

    #[test]
    fn norm_bound_examples() {
        assert_eq!(PauliSum::<f64>::zero(1).norm_bound(), 0.0);
        let s = PauliSum::<f64>::from_words(&[(cr(3.0), "Z"), (cr(-4.0), "X")]).unwrap();
        assert_eq!(s.norm_bound(), 7.0);
    }

    #[test]
    fn phase_folding() {
        let y = PauliString::from_word("Y").unwrap().with_phase(1);
        let s = PauliSum::<f64>::from_string(y, cr(2.0));
        assert_eq!(s.coeff(&PauliString::from_word("Y").unwrap()), Complex::new(0.0, 2.0));
        assert_eq!(s.coeff(&y), cr(2.0));
    }

    #[test]
    fn text_round_trip() {
        let s = PauliSum::<f64>::from_words(&[
            (Complex::new(0.1, -1e-3), "XIZ"),
            (Complex::new(1.0 / 3.0, 0.0), "YYI"),
            (Complex::new(-2.5e-7, 7.0), "IIZ"),
        ])
        .unwrap();
        let t = s.to_text();
        let back = PauliSum::<f64>::from_text(&t, None).unwrap();
        assert_eq!(back, s);
        assert_eq!(back.to_text(), t);
    }

    #[test]
    fn ordering_is_z_then_x() {
        let s = PauliSum::<f64>::from_words(&[(cr(1.0), "Z"), (cr(1.0), "X"), (cr(1.0), "Y")]).unwrap();
        let words: Vec<String> = s.iter().map(|(p, _)| p.word()).collect();
        assert_eq!(words, ["X", "Z", "Y"]);
    }
}
