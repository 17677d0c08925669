//! Normal-ordered Weyl monomials.
//!
//! A monomial is `e^{iπq} · ∏_j U_j^{m_j} V_j^{n_j}` with dofs in ascending
//! order and, within each dof, every `U` factor to the left of every `V`
//! factor. This is the only ordering convention in the crate; all phases are
//! relative to it. Generators of one dof satisfy
//!
//! ```text
//! V_j U_j = e^{+iπθ_j} U_j V_j      (equivalently U_j V_j = e^{-iπθ_j} V_j U_j)
//! ```
//!
//! and generators of different dofs commute. Moving `V_j^n` to the right of
//! `U_j^m` therefore contributes the phase exponent `n·m·θ_j`.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::phase::PhaseExp;
use crate::system::{same_system, DofSystem};

/// Which of the two generator families a factor belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    /// Position modulation `U_j = e^{-i a_j x_j}`.
    U,
    /// Momentum translation `V_j = e^{-i b_j p_j}`.
    V,
}

#[derive(Clone, Debug)]
pub struct WeylMonomial {
    phase: PhaseExp,
    m: Vec<BigInt>,
    n: Vec<BigInt>,
    system: Arc<DofSystem>,
}

impl PartialEq for WeylMonomial {
    fn eq(&self, other: &Self) -> bool {
        self.phase == other.phase
            && self.m == other.m
            && self.n == other.n
            && same_system(&self.system, &other.system)
    }
}

impl Eq for WeylMonomial {}

impl WeylMonomial {
    pub fn identity(system: &Arc<DofSystem>) -> Self {
        let k = system.n_dof();
        WeylMonomial {
            phase: PhaseExp::one(),
            m: vec![BigInt::zero(); k],
            n: vec![BigInt::zero(); k],
            system: Arc::clone(system),
        }
    }

    /// A scalar multiple of the identity.
    pub fn scalar(system: &Arc<DofSystem>, phase: PhaseExp) -> Self {
        Self::identity(system).with_phase(phase)
    }

    /// Builds the canonical monomial from its data; panics if the exponent
    /// vectors do not match the system size.
    pub fn from_exponents(
        system: &Arc<DofSystem>,
        phase: PhaseExp,
        m: Vec<BigInt>,
        n: Vec<BigInt>,
    ) -> Self {
        assert_eq!(m.len(), system.n_dof(), "U exponent vector length");
        assert_eq!(n.len(), system.n_dof(), "V exponent vector length");
        WeylMonomial {
            phase,
            m,
            n,
            system: Arc::clone(system),
        }
    }

    pub fn from_i64(system: &Arc<DofSystem>, phase: PhaseExp, m: &[i64], n: &[i64]) -> Self {
        Self::from_exponents(
            system,
            phase,
            m.iter().map(|&x| BigInt::from(x)).collect(),
            n.iter().map(|&x| BigInt::from(x)).collect(),
        )
    }

    /// The single generator power `U_dof^power` or `V_dof^power`; `dof` is
    /// zero-based.
    pub fn generator(system: &Arc<DofSystem>, gen: Generator, dof: usize, power: i64) -> Self {
        let mut out = Self::identity(system);
        match gen {
            Generator::U => out.m[dof] = power.into(),
            Generator::V => out.n[dof] = power.into(),
        }
        out
    }

    pub fn with_phase(mut self, phase: PhaseExp) -> Self {
        self.phase = phase;
        self
    }

    pub fn phase(&self) -> &PhaseExp {
        &self.phase
    }

    pub fn u_exponents(&self) -> &[BigInt] {
        &self.m
    }

    pub fn v_exponents(&self) -> &[BigInt] {
        &self.n
    }

    pub fn system(&self) -> &Arc<DofSystem> {
        &self.system
    }

    /// All exponents vanish (the monomial is a scalar).
    pub fn is_scalar(&self) -> bool {
        self.m.iter().chain(&self.n).all(Zero::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_scalar() && self.phase.is_one()
    }

    /// The monomial with its scalar phase dropped.
    pub fn phase_free(&self) -> Self {
        self.clone().with_phase(PhaseExp::one())
    }

    /// A power of exactly one generator, e.g. `U_2^{-3}`.
    pub fn single_generator(&self) -> Option<(Generator, usize, &BigInt)> {
        let mut found = None;
        for (j, (m, n)) in self.m.iter().zip(&self.n).enumerate() {
            for (g, e) in [(Generator::U, m), (Generator::V, n)] {
                if !e.is_zero() {
                    if found.is_some() {
                        return None;
                    }
                    found = Some((g, j, e));
                }
            }
        }
        found
    }

    fn check_system(&self, other: &Self) -> Result<()> {
        if same_system(&self.system, &other.system) {
            Ok(())
        } else {
            Err(Error::SystemMismatch)
        }
    }

    /// `Σ_j θ_j n_j^A m_j^B`: the phase exponent picked up by moving the `V`
    /// factors of `self` right past the `U` factors of `rhs`.
    fn reorder_exponent(&self, rhs: &Self) -> BigRational {
        let mut acc = BigRational::zero();
        for (j, theta) in self.system.theta().iter().enumerate() {
            let k = &self.n[j] * &rhs.m[j];
            if !k.is_zero() {
                acc += theta * BigRational::from_integer(k);
            }
        }
        acc
    }

    pub fn try_mul(&self, rhs: &Self) -> Result<Self> {
        self.check_system(rhs)?;
        let phase = &(&self.phase * &rhs.phase) * &PhaseExp::new(self.reorder_exponent(rhs));
        Ok(WeylMonomial {
            phase,
            m: self.m.iter().zip(&rhs.m).map(|(a, b)| a + b).collect(),
            n: self.n.iter().zip(&rhs.n).map(|(a, b)| a + b).collect(),
            system: Arc::clone(&self.system),
        })
    }

    /// The phase `c` with `AB = e^{iπc} BA`.
    pub fn try_symplectic_phase(&self, rhs: &Self) -> Result<PhaseExp> {
        self.check_system(rhs)?;
        Ok(PhaseExp::new(
            self.reorder_exponent(rhs) - rhs.reorder_exponent(self),
        ))
    }

    pub fn commutes_with(&self, rhs: &Self) -> Result<bool> {
        Ok(self.try_symplectic_phase(rhs)?.is_one())
    }

    /// The exact inverse: `(U^m V^n)^{-1} = V^{-n} U^{-m} = e^{iπ θ m n} U^{-m} V^{-n}`.
    pub fn inverse(&self) -> Self {
        let mut fix = BigRational::zero();
        for (j, theta) in self.system.theta().iter().enumerate() {
            let k = &self.m[j] * &self.n[j];
            if !k.is_zero() {
                fix += theta * BigRational::from_integer(k);
            }
        }
        WeylMonomial {
            phase: &self.phase.inv() * &PhaseExp::new(fix),
            m: self.m.iter().map(|x| -x).collect(),
            n: self.n.iter().map(|x| -x).collect(),
            system: Arc::clone(&self.system),
        }
    }

    /// `self^k` for any integer `k`.
    pub fn pow(&self, k: i64) -> Self {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut out = Self::identity(&self.system);
        for _ in 0..k.unsigned_abs() {
            out = monomial_mul(&out, &base);
        }
        out
    }

    /// Exponent data ordered `(m_1, n_1, m_2, n_2, ...)`, used as a class key.
    pub fn exponent_key(&self) -> Vec<BigInt> {
        self.m
            .iter()
            .zip(&self.n)
            .flat_map(|(m, n)| [m.clone(), n.clone()])
            .collect()
    }

    /// First nonzero exponent in `(m_1, n_1, m_2, ...)` order is positive.
    pub fn is_positively_oriented(&self) -> bool {
        self.m
            .iter()
            .zip(&self.n)
            .flat_map(|(m, n)| [m, n])
            .find(|e| !e.is_zero())
            .is_none_or(|e| e.is_positive())
    }
}

/// Canonical product of two monomials of the same system.
///
/// Panics on mismatched systems; see [`WeylMonomial::try_mul`].
pub fn monomial_mul(a: &WeylMonomial, b: &WeylMonomial) -> WeylMonomial {
    a.try_mul(b).expect("monomials from different systems")
}

/// The `c` with `AB = e^{iπc} BA`; `0` means commuting, `1` anticommuting.
pub fn symplectic_phase(a: &WeylMonomial, b: &WeylMonomial) -> Result<PhaseExp> {
    a.try_symplectic_phase(b)
}

pub fn inverse(a: &WeylMonomial) -> WeylMonomial {
    a.inverse()
}

/// Ordered product of a sequence; the empty product is the identity.
pub fn product<'a, I>(system: &Arc<DofSystem>, factors: I) -> Result<WeylMonomial>
where
    I: IntoIterator<Item = &'a WeylMonomial>,
{
    factors
        .into_iter()
        .try_fold(WeylMonomial::identity(system), |acc, f| acc.try_mul(f))
}

impl std::ops::Mul for &WeylMonomial {
    type Output = WeylMonomial;
    fn mul(self, rhs: &WeylMonomial) -> WeylMonomial {
        monomial_mul(self, rhs)
    }
}

impl fmt::Display for WeylMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::syntax::format_monomial(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_monomial;

    fn sys(theta: &[i64]) -> Arc<DofSystem> {
        DofSystem::from_integers(theta).unwrap()
    }

    fn p(s: &Arc<DofSystem>, text: &str) -> WeylMonomial {
        parse_monomial(s, text).unwrap()
    }

    #[test]
    fn vu_is_minus_uv() {
        let s = sys(&[1]);
        let u = WeylMonomial::generator(&s, Generator::U, 0, 1);
        let v = WeylMonomial::generator(&s, Generator::V, 0, 1);
        let vu = monomial_mul(&v, &u);
        assert_eq!(vu, p(&s, "-1 * U1 V1"));
        assert_eq!(monomial_mul(&u, &v), p(&s, "U1 V1"));
    }

    #[test]
    fn inverse_pair_cancels() {
        let s = sys(&[1]);
        let u = WeylMonomial::generator(&s, Generator::U, 0, 1);
        assert!(monomial_mul(&u, &u.inverse()).is_identity());
        assert_eq!(
            u.inverse(),
            WeylMonomial::generator(&s, Generator::U, 0, -1)
        );
    }

    #[test]
    fn peres_fourfold_products_multiply_to_minus_identity() {
        let s = sys(&[1, 1]);
        let a = p(&s, "U1^-1 U2 V1^-1 V2^-1");
        let b = p(&s, "U1 V2 V1 U2^-1");
        let ab = monomial_mul(&a, &b);
        assert!(ab.is_scalar());
        assert!(ab.phase().is_minus_one());
    }

    #[test]
    fn mermin_products_multiply_to_minus_identity() {
        let s = sys(&[1, 1, 1]);
        let prod = product(
            &s,
            &[
                p(&s, "U1 V2^-1 V3^-1"),
                p(&s, "V1^-1 U2 V3"),
                p(&s, "V1 V2 U3"),
                p(&s, "U1^-1 U2^-1 U3^-1"),
            ],
        )
        .unwrap();
        assert!(prod.is_scalar());
        assert!(prod.phase().is_minus_one());
    }

    #[test]
    fn symplectic_examples() {
        let s = sys(&[1, 1]);
        let sp = |a: &str, b: &str| symplectic_phase(&p(&s, a), &p(&s, b)).unwrap();
        assert!(sp("U1", "V1").is_minus_one());
        assert!(sp("U1", "V2").is_one());
        assert!(sp("U1^-1 U2 V1^-1 V2^-1", "U1 V2 V1 U2^-1").is_one());
        assert!(sp("U1 V2", "V1 U2^-1").is_one());
    }

    #[test]
    fn inverse_examples() {
        let s = sys(&[1]);
        let id = WeylMonomial::identity(&s);
        assert_eq!(id.inverse(), id);
        let uv = p(&s, "U1 V1");
        let inv = uv.inverse();
        assert_eq!(inv, p(&s, "-1 * U1^-1 V1^-1"));
        assert!(monomial_mul(&uv, &inv).is_identity());
        assert!(monomial_mul(&inv, &uv).is_identity());
    }

    #[test]
    fn rational_theta_phases() {
        let s = DofSystem::from_strs(&["1/3"]).unwrap();
        let u = WeylMonomial::generator(&s, Generator::U, 0, 1);
        let v = WeylMonomial::generator(&s, Generator::V, 0, 1);
        assert_eq!(
            symplectic_phase(&u, &v).unwrap(),
            PhaseExp::from_ratio(-1, 3)
        );
        assert_eq!(u.pow(3).u_exponents()[0], BigInt::from(3));
        assert!(monomial_mul(&v.pow(-2), &v.pow(2)).is_identity());
    }

    #[test]
    fn mismatched_systems_error() {
        let a = WeylMonomial::identity(&sys(&[1]));
        let b = WeylMonomial::identity(&sys(&[3]));
        assert!(matches!(a.try_mul(&b), Err(Error::SystemMismatch)));
        assert!(symplectic_phase(&a, &b).is_err());
        // Structurally equal systems built separately are the same system.
        let c = WeylMonomial::identity(&sys(&[1]));
        assert!(a.try_mul(&c).is_ok());
    }

    #[test]
    fn single_generator_detection() {
        let s = sys(&[1, 1]);
        let (g, j, e) = p(&s, "V2^-2")
            .single_generator()
            .map(|(g, j, e)| (g, j, e.clone()))
            .unwrap();
        assert_eq!((g, j, e), (Generator::V, 1, BigInt::from(-2)));
        assert!(p(&s, "U1 V2").single_generator().is_none());
        assert!(WeylMonomial::identity(&s).single_generator().is_none());
    }
}
