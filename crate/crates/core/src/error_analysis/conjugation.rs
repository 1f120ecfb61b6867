//! Pauli strings conjugated by a diagonal Hamiltonian, as trigonometric
//! polynomials in the evolution time.
//!
//! For `H̃ = Σ_S c_S S` with diagonal `S`,
//! `e^{iuH̃} P e^{−iuH̃} = P Π_{S anticommuting with P} (cos 2c_S u − i sin 2c_S u S)`.
//! The component along a target string `Q` collects the subsets `B` of the
//! anticommuting terms whose product flips `P`'s Z-mask into `Q`'s; these
//! are the solutions of a linear system over GF(2).

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::pauli::{PauliString, PauliSum};
use crate::scalar::Real;

use super::trigpoly::{Freq, FrequencyBasis, TrigPoly};

/// Largest kernel dimension enumerated before giving up.
pub const MAX_KERNEL_DIM: usize = 20;

/// Diagonal frame `H̃` with its terms mapped onto a frequency basis.
#[derive(Clone, Debug)]
pub struct DiagonalFrame<T: Real = f64> {
    n_qubits: usize,
    /// `(z-mask, c_S, basis index of |c_S|)`, identity dropped.
    terms: Vec<(u64, T, usize)>,
}

impl<T: Real> DiagonalFrame<T> {
    /// Registers every `|c_S|` on `basis`.
    pub fn new(h: &PauliSum<T>, basis: &mut FrequencyBasis<T>) -> Result<Self> {
        if !h.is_diagonal() {
            return Err(Error::Unsupported("conjugation frame must be diagonal".into()));
        }
        let mut terms = Vec::new();
        for (p, c) in h.real_terms()? {
            if p.is_identity() || c == T::zero() {
                continue;
            }
            let idx = basis.intern(c.abs(), &format!("{:.6}", c.abs().as_f64()))?;
            terms.push((p.z_mask(), c, idx));
        }
        Ok(Self { n_qubits: h.n_qubits(), terms })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    /// Coefficient of `dst` in `e^{iuH̃} src e^{−iuH̃}` (`forward`) or in
    /// `e^{−iuH̃} src e^{iuH̃}`, as a function of `u`. Phases of the inputs
    /// are ignored.
    pub fn component(&self, src: &PauliString, dst: &PauliString, forward: bool) -> Result<TrigPoly<T>> {
        if src.x_mask() != dst.x_mask() {
            return Ok(TrigPoly::zero());
        }
        let anti: Vec<&(u64, T, usize)> =
            self.terms.iter().filter(|(z, _, _)| (z & src.x_mask()).count_ones() % 2 == 1).collect();
        if anti.len() > 128 {
            return Err(Error::Capacity(format!("{} anticommuting frame terms", anti.len())));
        }
        let target = src.z_mask() ^ dst.z_mask();
        let Some((particular, kernel)) = solve_gf2(&anti.iter().map(|t| t.0).collect::<Vec<_>>(), target) else {
            return Ok(TrigPoly::zero());
        };
        if kernel.len() > MAX_KERNEL_DIM {
            return Err(Error::Capacity(format!("kernel dimension {} in conjugation", kernel.len())));
        }
        let src0 = src.normalized();
        let mut powers = PowerCache::default();
        let mut out = TrigPoly::zero();
        for mask in 0u64..(1u64 << kernel.len()) {
            let mut subset = particular;
            for (i, k) in kernel.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    subset ^= k;
                }
            }
            // P · Π_B S = i^k Q
            let mut prod = src0;
            let mut sign = T::one();
            let mut counts: HashMap<usize, (u32, u32)> = HashMap::new();
            for (j, &&(z, c, idx)) in anti.iter().enumerate() {
                let e = counts.entry(idx).or_insert((0, 0));
                if subset >> j & 1 == 1 {
                    let s = PauliString::new(self.n_qubits, 0, z, 0).expect("frame term");
                    prod = prod.mul_unchecked(&s);
                    if c < T::zero() {
                        sign = -sign;
                    }
                    e.1 += 1;
                } else {
                    e.0 += 1;
                }
            }
            let nb = subset.count_ones();
            // (∓i)^{|B|}: forward uses −i
            let step = if forward { 3 } else { 1 };
            let total = (prod.phase_exp() as u32 + step * nb) % 4;
            match total {
                0 => {}
                2 => sign = -sign,
                _ => return Err(Error::NotHermitian(1.0)),
            }
            let mut term = TrigPoly::constant(sign);
            let mut keys: Vec<_> = counts.into_iter().collect();
            keys.sort_unstable();
            for (idx, (nc, ns)) in keys {
                term = term.mul(powers.get(idx, nc, ns));
            }
            out.add_assign(&term);
        }
        Ok(out)
    }

    /// Full expansion of the conjugated string onto the strings in `targets`.
    pub fn components(&self, src: &PauliString, targets: &[PauliString], forward: bool) -> Result<Vec<TrigPoly<T>>> {
        targets.iter().map(|q| self.component(src, q, forward)).collect()
    }
}

/// `e^{−itH₀} P e^{itH₀}` expanded onto Pauli strings, with coefficients as
/// trigonometric polynomials in `t` over the returned basis.
pub fn conjugate_by_diagonal<T: Real>(
    p: &PauliString,
    h0: &PauliSum<T>,
) -> Result<(Vec<(PauliString, TrigPoly<T>)>, FrequencyBasis<T>)> {
    let mut basis = FrequencyBasis::new();
    let frame = DiagonalFrame::new(h0, &mut basis)?;
    let cols: Vec<u64> =
        frame.terms.iter().filter(|(z, _, _)| (z & p.x_mask()).count_ones() % 2 == 1).map(|t| t.0).collect();
    // reachable Z-masks form the coset p.z + span(cols)
    let mut span = vec![0u64];
    let mut gens: Vec<u64> = Vec::new();
    for c in cols {
        if solve_gf2(&gens, c).is_none() {
            gens.push(c);
            if span.len() >= 1 << MAX_KERNEL_DIM {
                return Err(Error::Capacity("conjugation family too large".into()));
            }
            let more: Vec<u64> = span.iter().map(|s| s ^ c).collect();
            span.extend(more);
        }
    }
    span.sort_unstable();
    let mut out = Vec::new();
    for s in span {
        let q = PauliString::new(p.n_qubits(), p.x_mask(), p.z_mask() ^ s, 0)?;
        let c = frame.component(p, &q, false)?;
        if !c.is_zero() {
            out.push((q, c));
        }
    }
    Ok((out, basis))
}

/// Memoized `cos^a(2x_i u) sin^b(2x_i u)`.
#[derive(Default)]
struct PowerCache<T: Real> {
    map: HashMap<(usize, u32, u32), TrigPoly<T>>,
}

impl<T: Real> PowerCache<T> {
    fn get(&mut self, idx: usize, nc: u32, ns: u32) -> &TrigPoly<T> {
        self.map.entry((idx, nc, ns)).or_insert_with(|| {
            let f = Freq::unit(idx, 2);
            let c = TrigPoly::cos(f, T::one());
            let s = TrigPoly::sin(f, T::one());
            let mut p = TrigPoly::constant(T::one());
            for _ in 0..nc {
                p = p.mul(&c);
            }
            for _ in 0..ns {
                p = p.mul(&s);
            }
            p
        })
    }
}

/// Solves `Σ_{j∈B} cols[j] = target` over GF(2). Returns one solution and a
/// kernel basis, both as column bitsets.
pub fn solve_gf2(cols: &[u64], target: u64) -> Option<(u128, Vec<u128>)> {
    let mut pivots: [Option<(u64, u128)>; 64] = [None; 64];
    let mut kernel = Vec::new();
    let reduce = |pivots: &[Option<(u64, u128)>; 64], mut v: u64, mut combo: u128| -> (u64, u128) {
        while v != 0 {
            let lb = 63 - v.leading_zeros() as usize;
            match pivots[lb] {
                Some((pm, pc)) => {
                    v ^= pm;
                    combo ^= pc;
                }
                None => break,
            }
        }
        (v, combo)
    };
    for (j, &c) in cols.iter().enumerate() {
        let (v, combo) = reduce(&pivots, c, 1u128 << j);
        if v == 0 {
            kernel.push(combo);
        } else {
            pivots[63 - v.leading_zeros() as usize] = Some((v, combo));
        }
    }
    let (v, combo) = reduce(&pivots, target, 0);
    (v == 0).then_some((combo, kernel))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gf2_solutions_reproduce_target() {
        let cols = [0b011u64, 0b110, 0b101, 0b100];
        let (p, k) = solve_gf2(&cols, 0b001).unwrap();
        let combine = |s: u128| (0..cols.len()).filter(|j| s >> j & 1 == 1).fold(0, |a, j| a ^ cols[j]);
        assert_eq!(combine(p), 0b001);
        assert_eq!(k.len(), 1);
        assert_eq!(combine(k[0]), 0);
        assert!(solve_gf2(&[0b01], 0b10).is_none());
    }

    #[test]
    fn single_spin_precession() {
        // e^{iuJZ} Y e^{−iuJZ} = cos(2Ju) Y + sin(2Ju) X
        let h = PauliSum::<f64>::from_words(&[(crate::scalar::C::new(0.7, 0.0), "Z")]).unwrap();
        let mut b = FrequencyBasis::new();
        let f = DiagonalFrame::new(&h, &mut b).unwrap();
        let y = PauliString::from_word("Y").unwrap();
        let x = PauliString::from_word("X").unwrap();
        let cy = f.component(&y, &y, true).unwrap();
        let cx = f.component(&y, &x, true).unwrap();
        for u in [0.0, 0.3, 1.1] {
            assert!((cy.eval(u, &b) - (1.4 * u).cos()).abs() < 1e-14);
            assert!((cx.eval(u, &b) - (1.4 * u).sin()).abs() < 1e-14);
        }
    }
}
