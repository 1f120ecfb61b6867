//! Exact time-average coefficients of the quadratic error term.
//!
//! `c(n₁,n₂)` is the long-time average of `cos^{2n₁}(a₁x) cos^{2n₂}(a₂x)` for
//! incommensurate `a₁, a₂`. Writing `cos²y = (1 + cos 2y)/2` and keeping the
//! even powers that survive averaging gives
//! `c(n₁,n₂) = 2^{−(n₁+n₂)} Σ_{x₁,x₂} C(n₁,2x₁) C(n₂,2x₂) c(x₁,x₂)`.

use std::collections::HashMap;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{FromPrimitive, One, ToPrimitive, Zero};

/// Integer types usable as exact numerators and denominators.
pub trait ExactInt: Integer + Clone + FromPrimitive + ToPrimitive + std::fmt::Display {}
impl<I: Integer + Clone + FromPrimitive + ToPrimitive + std::fmt::Display> ExactInt for I {}

fn int<I: ExactInt>(v: u64) -> I {
    I::from_u64(v).expect("value fits the integer type")
}

fn binomial<I: ExactInt>(n: u32, k: u32) -> I {
    let mut acc = I::one();
    for i in 0..k {
        acc = acc * int::<I>((n - i) as u64) / int::<I>((i + 1) as u64);
    }
    acc
}

fn recurse<I: ExactInt>(n1: u32, n2: u32, memo: &mut HashMap<(u32, u32), Ratio<I>>) -> Ratio<I> {
    match (n1, n2) {
        (0, 0) => return Ratio::one(),
        (1, 0) | (0, 1) => return Ratio::new(I::one(), int(2)),
        _ => {}
    }
    if let Some(v) = memo.get(&(n1, n2)) {
        return v.clone();
    }
    let mut sum = Ratio::<I>::zero();
    for x1 in 0..=n1 / 2 {
        for x2 in 0..=n2 / 2 {
            let w = binomial::<I>(n1, 2 * x1) * binomial::<I>(n2, 2 * x2);
            sum = sum + recurse(x1, x2, memo) * Ratio::from_integer(w);
        }
    }
    let v = sum / Ratio::from_integer(num_traits::pow(int::<I>(2), (n1 + n2) as usize));
    memo.insert((n1, n2), v.clone());
    v
}

/// Exact average of `cos^{2n₁}(a₁x) cos^{2n₂}(a₂x)` for incommensurate
/// nonzero `a₁, a₂`; a zero multiplier makes its factor identically one.
pub fn coeff_recursion<I: ExactInt>(a1: i64, a2: i64, n1: u32, n2: u32) -> Ratio<I> {
    let n1 = if a1 == 0 { 0 } else { n1 };
    let n2 = if a2 == 0 { 0 } else { n2 };
    recurse(n1, n2, &mut HashMap::new())
}

/// Quadratic-term coefficient `2D(1 + c(n₁,n₂))`.
pub fn ct2<I: ExactInt>(d: u32, n1: u32, n2: u32) -> Ratio<I> {
    let c = coeff_recursion::<I>(1, 1, n1, n2);
    Ratio::from_integer(int::<I>(2 * d as u64)) * (Ratio::one() + c)
}

/// Interaction family of a coefficient-table row.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InteractionClass {
    /// Nearest and next-nearest neighbours.
    Nnni,
    /// Nearest neighbours only.
    Nni,
}

impl InteractionClass {
    pub fn name(&self) -> &'static str {
        match self {
            InteractionClass::Nnni => "NNNI",
            InteractionClass::Nni => "NNI",
        }
    }
}

/// One line of the coefficient table.
#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientRow<I: ExactInt> {
    pub dim: u32,
    pub class: InteractionClass,
    /// `2n_n`, the count of non-commuting terms per Y-interaction.
    pub two_nn: u32,
    pub ct2: Ratio<I>,
}

impl<I: ExactInt> CoefficientRow<I> {
    pub fn value_f64(&self) -> f64 {
        self.ct2.numer().to_f64().unwrap_or(f64::NAN) / self.ct2.denom().to_f64().unwrap_or(f64::NAN)
    }
}

/// Rows for `D ∈ {1,2,3}`, NNNI before NNI.
pub fn coefficient_table<I: ExactInt>() -> Vec<CoefficientRow<I>> {
    let mut rows = Vec::new();
    for class in [InteractionClass::Nnni, InteractionClass::Nni] {
        for d in 1..=3u32 {
            let nn = 2 * d - 1;
            let n2 = if class == InteractionClass::Nnni { nn } else { 0 };
            rows.push(CoefficientRow { dim: d, class, two_nn: 2 * nn, ct2: ct2::<I>(d, nn, n2) });
        }
    }
    rows
}

#[cfg(test)]
mod tests {
    use super::*;

    type Q = Ratio<i128>;

    #[test]
    fn termination_values() {
        assert_eq!(coeff_recursion::<i128>(1, 1, 0, 0), Q::from_integer(1));
        assert_eq!(coeff_recursion::<i128>(1, 1, 1, 0), Q::new(1, 2));
        assert_eq!(coeff_recursion::<i128>(1, 1, 3, 3), Q::new(25, 256));
        assert_eq!(coeff_recursion::<i128>(1, 1, 3, 0), Q::new(5, 16));
    }

    #[test]
    fn works_with_narrow_integers() {
        assert_eq!(ct2::<i64>(2, 3, 3), Ratio::new(281, 64));
    }
}
