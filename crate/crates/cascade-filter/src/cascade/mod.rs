//! Moment-equation engine for the atom cascaded into two filter arrays.
//!
//! Filter operators never materialize; only their normally ordered moments
//! with an optional trailing atomic operator do. Because the filters exert no
//! back-action, the equations are lower-triangular in the number of filter
//! operators and every steady state follows from lower levels by a scalar
//! division or a shifted 3x3 solve.

mod hierarchy;
mod regression;
mod residual;

pub use hierarchy::{accumulate_fourth_order, solve_steady_moments, Depth, Mom, MomentHierarchy, Op};
pub use regression::{
    g1_initials, g1_sum, g2_initials, regression_evolve, regression_evolve_checked, regression_evolve_rk4,
    regression_evolve_state, G1State, G2State, RegressionState,
};
pub use residual::{hierarchy_residuals, ResidualReport};

use crate::config::{mode_couplings, mode_detunings, AtomParams, Coupling, TwoFilterConfig};
use crate::error::Result;
use crate::scalar::{Cplx, Real};

/// Everything the moment equations need, with per-mode quantities resolved.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemDescriptor<T: Real> {
    pub atom: AtomParams<T>,
    pub banks: TwoFilterConfig<T>,
    pub detunings_a: Vec<T>,
    pub detunings_b: Vec<T>,
    /// E_j, shared by both banks.
    pub couplings: Vec<Cplx<T>>,
    pub coupling: Coupling,
}

impl<T: Real> SystemDescriptor<T> {
    pub fn n_modes(&self) -> usize {
        self.couplings.len()
    }

    pub fn kappa(&self) -> T {
        self.banks.bank_a.mode_halfwidth
    }

    pub fn gamma(&self) -> T {
        self.atom.gamma
    }

    /// Largest rate or frequency scale in the problem.
    pub fn dominant_rate(&self) -> T {
        let mut r = self.atom.gamma.max(self.atom.omega_rabi);
        r = r.max(self.banks.bank_a.effective_halfwidth());
        r = r.max(self.kappa());
        for d in self.detunings_a.iter().chain(&self.detunings_b) {
            r = r.max(d.abs());
        }
        r
    }

    /// Same system with the roles of banks A and B exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            atom: self.atom,
            banks: self.banks.swapped(),
            detunings_a: self.detunings_b.clone(),
            detunings_b: self.detunings_a.clone(),
            couplings: self.couplings.clone(),
            coupling: self.coupling,
        }
    }
}

/// Two arrays behind a 50:50 splitter.
pub fn build_two_filter_system<T: Real>(cfg: &TwoFilterConfig<T>) -> Result<SystemDescriptor<T>> {
    cfg.validate()?;
    Ok(SystemDescriptor {
        atom: cfg.atom,
        banks: *cfg,
        detunings_a: mode_detunings(&cfg.bank_a),
        detunings_b: mode_detunings(&cfg.bank_b),
        couplings: mode_couplings(&cfg.atom, &cfg.bank_a, Coupling::TwoFilter),
        coupling: Coupling::TwoFilter,
    })
}

/// A single array collecting all fluorescence. Bank B mirrors bank A so the
/// same engine applies; only bank-A quantities are meaningful.
pub fn build_one_filter_system<T: Real>(
    atom: &AtomParams<T>,
    bank: &crate::config::FilterBank<T>,
) -> Result<SystemDescriptor<T>> {
    let cfg = TwoFilterConfig::auto(*atom, *bank)?;
    Ok(SystemDescriptor {
        atom: cfg.atom,
        banks: cfg,
        detunings_a: mode_detunings(&cfg.bank_a),
        detunings_b: mode_detunings(&cfg.bank_b),
        couplings: mode_couplings(&cfg.atom, &cfg.bank_a, Coupling::OneFilter),
        coupling: Coupling::OneFilter,
    })
}
