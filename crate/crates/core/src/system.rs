use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::phase::parse_rational;

/// A fixed set of `n_dof` degrees of freedom with symplectic ratios
/// `theta_j = a_j b_j / (πħ)`, with `ħ = 1`.
///
/// Only the ratio matters to the algebra: the generators of dof `j` obey
/// `U_j V_j = e^{-iπθ_j} V_j U_j`. Zero ratios are rejected; drop the
/// generators instead.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DofSystem {
    theta: Vec<BigRational>,
}

impl DofSystem {
    pub fn new(theta: Vec<BigRational>) -> Result<Arc<Self>> {
        if theta.is_empty() {
            return Err(Error::NoDofs);
        }
        if let Some(dof) = theta.iter().position(Zero::is_zero) {
            return Err(Error::ZeroTheta { dof: dof + 1 });
        }
        Ok(Arc::new(DofSystem { theta }))
    }

    /// `n_dof` degrees of freedom with `θ_j = 1`, i.e. `a_j b_j = πħ`.
    pub fn standard(n_dof: usize) -> Result<Arc<Self>> {
        Self::new(vec![BigRational::one(); n_dof])
    }

    pub fn from_integers(theta: &[i64]) -> Result<Arc<Self>> {
        Self::new(
            theta
                .iter()
                .map(|&t| BigRational::from_integer(t.into()))
                .collect(),
        )
    }

    /// Parses ratios written as `"p/q"` strings.
    pub fn from_strs<S: AsRef<str>>(theta: &[S]) -> Result<Arc<Self>> {
        let theta = theta
            .iter()
            .map(|s| parse_rational(s.as_ref()).ok_or_else(|| Error::BadTheta(s.as_ref().into())))
            .collect::<Result<Vec<_>>>()?;
        Self::new(theta)
    }

    pub fn n_dof(&self) -> usize {
        self.theta.len()
    }

    pub fn theta(&self) -> &[BigRational] {
        &self.theta
    }

    /// Every ratio is an odd integer: all commutation phases are `±1`.
    pub fn is_odd_integral(&self) -> bool {
        self.theta
            .iter()
            .all(|t| t.is_integer() && t.numer().is_odd())
    }

    /// Every ratio is an even integer: every pair of monomials commutes.
    pub fn is_even_integral(&self) -> bool {
        self.theta
            .iter()
            .all(|t| t.is_integer() && t.numer().is_even())
    }

    /// Least common multiple of the ratio denominators.
    pub fn theta_denominator_lcm(&self) -> BigInt {
        self.theta
            .iter()
            .fold(BigInt::one(), |acc, t| acc.lcm(t.denom()))
    }

    pub fn theta_strings(&self) -> Vec<String> {
        self.theta.iter().map(|t| t.to_string()).collect()
    }
}

impl fmt::Display for DofSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "θ=({})", self.theta_strings().join(", "))
    }
}

/// Equality of shared systems, short-circuiting on pointer identity.
pub(crate) fn same_system(a: &Arc<DofSystem>, b: &Arc<DofSystem>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}
