//! Infidelity metrics, analytic QHiFFS and Trotter error formulas, exact
//! error coefficients and Trotter overhead ratios.

pub mod closed_form;
pub mod coefficients;
pub mod conjugation;
pub mod infidelity;
pub mod overhead;
pub mod trace;
pub mod trigpoly;

use crate::error::{Error, Result};
use crate::lattice::{BnnniParams, LatticeSpec};
use crate::scalar::Real;

pub use closed_form::{qhiffs_error_closed_form, quadratic_coefficient};
pub use coefficients::{coeff_recursion, coefficient_table, ct2, CoefficientRow, InteractionClass};
pub use conjugation::{conjugate_by_diagonal, DiagonalFrame};
pub use infidelity::{
    avg_infidelity_exact, avg_infidelity_stochastic, haar_average_from_exact, haar_state, state_infidelity, Estimate,
};
pub use overhead::{
    overhead_ratio_analytic, overhead_ratio_numeric, trotter_error_bound, AnalyticOverhead, NumericOverhead,
    OverheadOptions,
};
pub use trace::{leading_error_series, leading_error_trace, ErrorSeries};
pub use trigpoly::{Freq, FrequencyBasis, SecularTrigPoly, TrigPoly};

/// Model constants entering the analytic error formulas.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ErrorModelParams<T: Real = f64> {
    pub j: T,
    pub kappa: T,
    pub h: T,
    pub omega: T,
    /// Number of sites.
    pub n: usize,
    /// Spatial dimension.
    pub dim: usize,
    /// Half the number of terms not commuting with one Y-interaction.
    pub nn_half: usize,
}

impl<T: Real> ErrorModelParams<T> {
    pub fn new(j: T, kappa: T, h: T, omega: T, n: usize, dim: usize) -> Result<Self> {
        let p = Self { j, kappa, h, omega, n, dim, nn_half: 2 * dim.max(1) - 1 };
        p.validate()?;
        Ok(p)
    }

    pub fn from_model(spec: &LatticeSpec, b: &BnnniParams<T>) -> Result<Self> {
        Self::new(b.j, b.kappa, b.h, b.omega, spec.n_sites(), spec.dims())
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.omega > T::zero()) {
            return Err(Error::InvalidArgument("omega must be positive".into()));
        }
        if self.n == 0 {
            return Err(Error::InvalidArgument("need at least one site".into()));
        }
        if !(1..=3).contains(&self.dim) {
            return Err(Error::InvalidArgument(format!("dimension {} outside 1..=3", self.dim)));
        }
        Ok(())
    }

    pub fn with_omega(&self, omega: T) -> Self {
        Self { omega, ..*self }
    }
}
