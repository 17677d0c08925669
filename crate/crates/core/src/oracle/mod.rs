//! Numerical oracles for the exact algebra.
//!
//! [`matrix`] realizes the Weyl relations with finite clock and shift
//! matrices; it checks the algebra of phases and products, not any
//! particular Hilbert space. [`grid`] discretizes the position
//! representation on a periodic lattice, where modulations and shifts are
//! exact unitaries and delta functions are ordinary basis vectors.

pub mod grid;
pub mod matrix;

use serde::Serialize;

/// Default tolerance for algebraic identities (max norm).
pub const TOL_ALGEBRAIC: f64 = 1e-10;
/// Default tolerance for eigenvector residuals (max norm).
pub const TOL_EIGEN: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Tolerances {
    pub algebraic: f64,
    pub eigen: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            algebraic: TOL_ALGEBRAIC,
            eigen: TOL_EIGEN,
        }
    }
}

/// Which side of the tolerance a passing residual lies on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Bound {
    AtMost,
    Above,
}

/// One numerically checked claim.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClaimCheck {
    pub claim: String,
    pub residual: f64,
    pub tolerance: f64,
    pub bound: Bound,
    pub pass: bool,
}

impl ClaimCheck {
    pub fn new(claim: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        ClaimCheck {
            claim: claim.into(),
            residual,
            tolerance,
            bound: Bound::AtMost,
            pass: residual <= tolerance,
        }
    }

    /// A claim that holds when the residual exceeds `threshold`.
    pub fn at_least(claim: impl Into<String>, residual: f64, threshold: f64) -> Self {
        ClaimCheck {
            claim: claim.into(),
            residual,
            tolerance: threshold,
            bound: Bound::Above,
            pass: residual > threshold,
        }
    }
}
