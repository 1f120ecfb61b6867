//! Lattices, Floquet Hamiltonians and the driven BNNNI family.

use std::collections::{BTreeMap, BTreeSet};

use num_complex::Complex;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::pauli::{PauliString, PauliSum, MAX_QUBITS};
use crate::scalar::{cr, Real, C};

/// Hypercubic lattice with per-axis extents and boundary conditions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeSpec {
    extents: Vec<usize>,
    periodic: Vec<bool>,
}

impl LatticeSpec {
    pub fn new(extents: Vec<usize>, periodic: Vec<bool>) -> Result<Self> {
        if extents.is_empty() || extents.len() > 3 {
            return Err(Error::InvalidLattice(format!("{} dimensions (expected 1-3)", extents.len())));
        }
        if extents.len() != periodic.len() {
            return Err(Error::InvalidLattice("extents and periodic flags differ in length".into()));
        }
        if extents.contains(&0) {
            return Err(Error::InvalidLattice("zero extent".into()));
        }
        let n: usize = extents.iter().product();
        if n > MAX_QUBITS {
            return Err(Error::Capacity(format!("{n} sites exceed {MAX_QUBITS}")));
        }
        Ok(Self { extents, periodic })
    }

    /// Periodic chain of `n` sites.
    pub fn chain(n: usize, periodic: bool) -> Result<Self> {
        Self::new(vec![n], vec![periodic])
    }

    pub fn dims(&self) -> usize {
        self.extents.len()
    }
    pub fn extents(&self) -> &[usize] {
        &self.extents
    }
    pub fn periodic(&self) -> &[bool] {
        &self.periodic
    }
    pub fn n_sites(&self) -> usize {
        self.extents.iter().product()
    }

    /// Row-major index `x + ex·y + ex·ey·z`.
    pub fn index(&self, coords: &[usize]) -> usize {
        let mut idx = 0;
        let mut stride = 1;
        for (c, e) in coords.iter().zip(&self.extents) {
            idx += c * stride;
            stride *= e;
        }
        idx
    }

    pub fn coords(&self, mut site: usize) -> Vec<usize> {
        self.extents
            .iter()
            .map(|e| {
                let c = site % e;
                site /= e;
                c
            })
            .collect()
    }

    /// Site `dist` steps along `axis`, or `None` past an open boundary.
    pub fn shift(&self, site: usize, axis: usize, dist: usize) -> Option<usize> {
        let mut c = self.coords(site);
        let e = self.extents[axis];
        let moved = c[axis] + dist;
        if moved >= e {
            if !self.periodic[axis] {
                return None;
            }
            c[axis] = moved % e;
        } else {
            c[axis] = moved;
        }
        Some(self.index(&c))
    }
}

/// Axial pairs at distance `range` (1 = nearest, 2 = next-nearest), sorted
/// and deduplicated as unordered `(low, high)` pairs.
pub fn neighbor_pairs(spec: &LatticeSpec, range: usize) -> Result<Vec<(usize, usize)>> {
    if !(1..=2).contains(&range) {
        return Err(Error::InvalidArgument(format!("range {range} (expected 1 or 2)")));
    }
    if range == 2 {
        for (axis, (&e, &p)) in spec.extents.iter().zip(&spec.periodic).enumerate() {
            // extent 1 has no pairs at all; 2 folds onto self, 3 onto the nearest neighbour
            if p && (2..=3).contains(&e) {
                return Err(Error::DegenerateLattice(format!(
                    "axis {axis} has periodic extent {e}; next-nearest pairs coincide with nearest or self"
                )));
            }
        }
    }
    let mut set = BTreeSet::new();
    for site in 0..spec.n_sites() {
        for axis in 0..spec.dims() {
            if let Some(other) = spec.shift(site, axis, range) {
                if other != site {
                    set.insert((site.min(other), site.max(other)));
                }
            }
        }
    }
    Ok(set.into_iter().collect())
}

/// Couplings of the driven BNNNI model.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BnnniParams<T: Real = f64> {
    pub j: T,
    pub kappa: T,
    pub h: T,
    pub omega: T,
}

impl<T: Real> BnnniParams<T> {
    pub fn new(j: T, kappa: T, h: T, omega: T) -> Result<Self> {
        let p = Self { j, kappa, h, omega };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.omega > T::zero()) || !self.omega.is_finite() {
            return Err(Error::InvalidModel(format!("omega must be positive, got {}", self.omega)));
        }
        if ![self.j, self.kappa, self.h].iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidModel("non-finite coupling".into()));
        }
        Ok(())
    }

    pub fn period(&self) -> T {
        T::TAU() / self.omega
    }
}

/// `H(t) = H₀ + Σⱼ (V⁽ʲ⁾ e^{ijωt} + h.c.)` with finitely many harmonics.
#[derive(Clone, Debug, PartialEq)]
pub struct FloquetHamiltonian<T: Real = f64> {
    h0: PauliSum<T>,
    harmonics: BTreeMap<u32, PauliSum<T>>,
    omega: T,
}

/// `(cos mωt, sin mωt)` with exact values when `mωt` sits on a multiple of π/2.
pub fn harmonic_phase<T: Real>(m: i64, omega: T, t: T) -> (T, T) {
    let quarter_turns = T::of(m as f64) * omega * t / T::FRAC_PI_2();
    let r = quarter_turns.round();
    let tol = T::of(64.0) * T::epsilon() * quarter_turns.abs().max(T::one());
    if (quarter_turns - r).abs() <= tol {
        let k = r.to_i64().unwrap_or(0).rem_euclid(4);
        let (o, z) = (T::one(), T::zero());
        return match k {
            0 => (o, z),
            1 => (z, o),
            2 => (-o, z),
            _ => (z, -o),
        };
    }
    let x = T::of(m as f64) * omega * t;
    (x.cos(), x.sin())
}

impl<T: Real> FloquetHamiltonian<T> {
    /// Validated constructor: `h0` Hermitian, consistent sizes, `omega > 0`,
    /// harmonic indices ≥ 1.
    pub fn new(h0: PauliSum<T>, harmonics: BTreeMap<u32, PauliSum<T>>, omega: T) -> Result<Self> {
        if !h0.is_hermitian() {
            return Err(Error::NotHermitian(h0.hermiticity_defect().as_f64()));
        }
        if !(omega > T::zero()) || !omega.is_finite() {
            return Err(Error::InvalidModel(format!("omega must be positive, got {omega}")));
        }
        for (&j, v) in &harmonics {
            if j == 0 {
                return Err(Error::InvalidModel("harmonic index 0 belongs in h0".into()));
            }
            if v.n_qubits() != h0.n_qubits() {
                return Err(Error::QubitMismatch(h0.n_qubits(), v.n_qubits()));
            }
        }
        let harmonics = harmonics.into_iter().filter(|(_, v)| !v.is_empty()).collect();
        Ok(Self { h0, harmonics, omega })
    }

    pub fn n_qubits(&self) -> usize {
        self.h0.n_qubits()
    }
    pub fn h0(&self) -> &PauliSum<T> {
        &self.h0
    }
    pub fn harmonics(&self) -> &BTreeMap<u32, PauliSum<T>> {
        &self.harmonics
    }
    pub fn omega(&self) -> T {
        self.omega
    }
    pub fn period(&self) -> T {
        T::TAU() / self.omega
    }

    /// Same model at a different drive frequency.
    pub fn with_omega(&self, omega: T) -> Result<Self> {
        Self::new(self.h0.clone(), self.harmonics.clone(), omega)
    }

    /// `V⁽ᵐ⁾` for any nonzero `m`, using `V⁽⁻ʲ⁾ = V⁽ʲ⁾†`.
    pub fn harmonic(&self, m: i64) -> Option<PauliSum<T>> {
        if m == 0 {
            return None;
        }
        let v = self.harmonics.get(&(m.unsigned_abs() as u32))?;
        Some(if m > 0 { v.clone() } else { v.dagger() })
    }

    /// `V(t)`.
    pub fn drive_at(&self, t: T) -> PauliSum<T> {
        let mut out = PauliSum::zero(self.n_qubits());
        for (&j, v) in &self.harmonics {
            let (c, s) = harmonic_phase(j as i64, self.omega, t);
            let ph = Complex::new(c, s);
            for (p, a) in v.iter() {
                out.add_term(p, a * ph);
                out.add_term(p, (a * ph).conj());
            }
        }
        out
    }

    /// `H(t) = H₀ + V(t)`.
    pub fn hamiltonian_at(&self, t: T) -> PauliSum<T> {
        self.h0.add(&self.drive_at(t)).expect("sizes agree")
    }

    /// `∫ₐᵇ V(s) ds`, integrated analytically.
    pub fn drive_integral(&self, a: T, b: T) -> PauliSum<T> {
        let mut out = PauliSum::zero(self.n_qubits());
        for (&j, v) in &self.harmonics {
            let (cb, sb) = harmonic_phase(j as i64, self.omega, b);
            let (ca, sa) = harmonic_phase(j as i64, self.omega, a);
            // (e^{ijωb} − e^{ijωa}) / (ijω)
            let w = T::of(j as f64) * self.omega;
            let f: C<T> = Complex::new(sb - sa, -(cb - ca)) / cr(w);
            for (p, c) in v.iter() {
                out.add_term(p, c * f);
                out.add_term(p, (c * f).conj());
            }
        }
        out
    }
}

/// Driven BNNNI model: `H₀ = −J Σ_NN ZZ + Jκ Σ_NNN ZZ`, `V(t) = −h cos(ωt) Σ X`.
/// Next-nearest pairs are omitted entirely when `κ = 0`.
pub fn build_bnnni<T: Real>(spec: &LatticeSpec, p: &BnnniParams<T>) -> Result<FloquetHamiltonian<T>> {
    p.validate()?;
    let n = spec.n_sites();
    let mut h0 = PauliSum::zero(n);
    let zz = |a: usize, b: usize| PauliString::new(n, 0, (1u64 << a) | (1u64 << b), 0).expect("in range");
    for (a, b) in neighbor_pairs(spec, 1)? {
        h0.add_term(zz(a, b), cr(-p.j));
    }
    if p.kappa != T::zero() {
        for (a, b) in neighbor_pairs(spec, 2)? {
            h0.add_term(zz(a, b), cr(p.j * p.kappa));
        }
    }
    let mut harmonics = BTreeMap::new();
    let half = T::of(0.5);
    harmonics.insert(1, PauliSum::sum_single(n, 0..n, 'X', -p.h * half)?);
    FloquetHamiltonian::new(h0, harmonics, p.omega)
}

/// Validated generic model; see [`FloquetHamiltonian::new`].
pub fn build_custom<T: Real>(
    h0: PauliSum<T>,
    harmonics: BTreeMap<u32, PauliSum<T>>,
    omega: T,
) -> Result<FloquetHamiltonian<T>> {
    FloquetHamiltonian::new(h0, harmonics, omega)
}

#[derive(Deserialize, Clone, Debug, PartialEq)]
#[serde(untagged)]
enum PeriodicField {
    All(bool),
    PerAxis(Vec<bool>),
}

/// Model description file: `dims`, `extents`, `periodic`, `J`, `kappa`, `h`,
/// `omega` as `key = value` lines. `periodic` is a bool or a per-axis list.
#[derive(Deserialize, Clone, Debug, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ModelDescription {
    pub dims: usize,
    pub extents: Vec<usize>,
    periodic: PeriodicField,
    #[serde(rename = "J")]
    pub j: f64,
    pub kappa: f64,
    pub h: f64,
    pub omega: f64,
}

impl ModelDescription {
    pub fn parse(text: &str) -> Result<Self> {
        let d: Self = toml::from_str(text).map_err(|e| Error::Parse { line: 0, msg: e.to_string() })?;
        d.lattice()?;
        Ok(d)
    }

    pub fn periodic(&self) -> Vec<bool> {
        match &self.periodic {
            PeriodicField::All(b) => vec![*b; self.dims],
            PeriodicField::PerAxis(v) => v.clone(),
        }
    }

    pub fn lattice(&self) -> Result<LatticeSpec> {
        if self.extents.len() != self.dims {
            return Err(Error::InvalidLattice(format!(
                "dims = {} but {} extents given",
                self.dims,
                self.extents.len()
            )));
        }
        LatticeSpec::new(self.extents.clone(), self.periodic())
    }

    pub fn params<T: Real>(&self) -> Result<BnnniParams<T>> {
        BnnniParams::new(T::of(self.j), T::of(self.kappa), T::of(self.h), T::of(self.omega))
    }

    pub fn build<T: Real>(&self) -> Result<FloquetHamiltonian<T>> {
        build_bnnni(&self.lattice()?, &self.params()?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_counts() {
        let l = LatticeSpec::new(vec![4, 5], vec![true, true]).unwrap();
        assert_eq!(neighbor_pairs(&l, 1).unwrap().len(), 40);
        assert_eq!(neighbor_pairs(&l, 2).unwrap().len(), 30);
        let c = LatticeSpec::chain(4, true).unwrap();
        assert_eq!(neighbor_pairs(&c, 2).unwrap(), vec![(0, 2), (1, 3)]);
        let c3 = LatticeSpec::chain(3, true).unwrap();
        assert!(matches!(neighbor_pairs(&c3, 2), Err(Error::DegenerateLattice(_))));
        let open = LatticeSpec::chain(5, false).unwrap();
        assert_eq!(neighbor_pairs(&open, 1).unwrap().len(), 4);
        assert_eq!(neighbor_pairs(&open, 2).unwrap().len(), 3);
    }

    #[test]
    fn bnnni_structure() {
        let l = LatticeSpec::chain(6, true).unwrap();
        let h = build_bnnni(&l, &BnnniParams::new(1.0, 0.25, 2.0, 30.0).unwrap()).unwrap();
        assert_eq!(h.h0().len(), 12);
        let v0 = h.drive_at(0.0);
        assert_eq!(v0.coeff(&PauliString::from_word("XIIIII").unwrap()), cr(-2.0));
        let k0 = build_bnnni(&l, &BnnniParams::new(1.0, 0.0, 2.0, 30.0).unwrap()).unwrap();
        assert_eq!(k0.h0().len(), 6);
    }

    #[test]
    fn half_period_phase_is_exact() {
        let w = 30.0_f64;
        let t = 7.0 * std::f64::consts::PI / w;
        assert_eq!(harmonic_phase(1, w, t), (-1.0, 0.0));
        assert_eq!(harmonic_phase(2, w, t), (1.0, 0.0));
    }

    #[test]
    fn model_file() {
        let d = ModelDescription::parse(
            "dims = 2\nextents = [4, 5]\nperiodic = true\nJ = 1.0\nkappa = 0.25\nh = 2.0\nomega = 30.0\n",
        )
        .unwrap();
        assert_eq!(d.build::<f64>().unwrap().n_qubits(), 20);
        assert!(ModelDescription::parse("dims = 1\nextents=[4]\nperiodic=true\nJ=1\nkappa=0\nh=1\nomega=1\nfoo=2\n")
            .is_err());
    }
}
