//! Exact unit-circle phases `e^{iπq}` with rational `q`.

use std::fmt;
use std::ops::{Mul, MulAssign, Neg};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// The phase `e^{iπq}`, stored as `q` reduced into `[0, 2)`.
///
/// `Mul` is the phase product (exponents add). `Neg` multiplies by `-1`; the
/// group inverse is [`PhaseExp::inv`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PhaseExp(BigRational);

impl PhaseExp {
    pub fn new(q: BigRational) -> Self {
        let two = BigRational::from_integer(BigInt::from(2));
        let k = (&q / &two).floor();
        PhaseExp(q - k * two)
    }

    pub fn from_ratio(p: i64, q: i64) -> Self {
        Self::new(BigRational::new(BigInt::from(p), BigInt::from(q)))
    }

    pub fn from_integer(p: BigInt) -> Self {
        Self::new(BigRational::from_integer(p))
    }

    /// `+1`.
    pub fn one() -> Self {
        PhaseExp(BigRational::zero())
    }

    /// `-1`.
    pub fn minus_one() -> Self {
        Self::from_ratio(1, 1)
    }

    /// `+i`.
    pub fn i() -> Self {
        Self::from_ratio(1, 2)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_minus_one(&self) -> bool {
        self.0.is_one()
    }

    /// The exponent `q` in `[0, 2)`.
    pub fn exponent(&self) -> &BigRational {
        &self.0
    }

    pub fn inv(&self) -> Self {
        Self::new(-self.0.clone())
    }

    pub fn pow(&self, k: &BigInt) -> Self {
        Self::new(&self.0 * BigRational::from_integer(k.clone()))
    }

    pub fn to_complex(&self) -> Complex64 {
        let q = self.0.to_f64().unwrap_or(0.0);
        // Exact values for the four quarter turns so that ±1, ±i carry no rounding.
        if self.0.denom() <= &BigInt::from(2) {
            let twice = (&self.0 * BigRational::from_integer(BigInt::from(2)))
                .to_integer()
                .mod_floor(&BigInt::from(4));
            return match twice.to_u8() {
                Some(0) => Complex64::new(1.0, 0.0),
                Some(1) => Complex64::new(0.0, 1.0),
                Some(2) => Complex64::new(-1.0, 0.0),
                _ => Complex64::new(0.0, -1.0),
            };
        }
        Complex64::from_polar(1.0, std::f64::consts::PI * q)
    }
}

/// Phase group product: `e^{iπp} · e^{iπq} = e^{iπ(p+q)}`.
pub fn phase_mul(p: &PhaseExp, q: &PhaseExp) -> PhaseExp {
    PhaseExp::new(&p.0 + &q.0)
}

impl Mul for PhaseExp {
    type Output = PhaseExp;
    fn mul(self, rhs: PhaseExp) -> PhaseExp {
        phase_mul(&self, &rhs)
    }
}

impl Mul<&PhaseExp> for &PhaseExp {
    type Output = PhaseExp;
    fn mul(self, rhs: &PhaseExp) -> PhaseExp {
        phase_mul(self, rhs)
    }
}

impl MulAssign<&PhaseExp> for PhaseExp {
    fn mul_assign(&mut self, rhs: &PhaseExp) {
        *self = phase_mul(self, rhs);
    }
}

/// Negation of the phase value, i.e. multiplication by `-1`.
impl Neg for PhaseExp {
    type Output = PhaseExp;
    fn neg(self) -> PhaseExp {
        self * PhaseExp::minus_one()
    }
}

impl From<BigRational> for PhaseExp {
    fn from(q: BigRational) -> Self {
        PhaseExp::new(q)
    }
}

/// Prints the exponent `q` as `p/q`, or a bare integer.
impl fmt::Display for PhaseExp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Parses an exponent written as `p/q` or `p`.
impl FromStr for PhaseExp {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_rational(s)
            .map(PhaseExp::new)
            .ok_or_else(|| Error::Parse {
                input: s.to_string(),
                pos: 0,
                msg: "expected a rational p/q".into(),
            })
    }
}

pub(crate) fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s, "1"),
    };
    let p = BigInt::from_str(p.strip_prefix('+').unwrap_or(p)).ok()?;
    let q = BigInt::from_str(q).ok()?;
    if q.is_zero() {
        return None;
    }
    Some(BigRational::new(p, q))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_examples() {
        assert_eq!(PhaseExp::one() * PhaseExp::one(), PhaseExp::one());
        assert_eq!(
            PhaseExp::minus_one() * PhaseExp::minus_one(),
            PhaseExp::one()
        );
        assert_eq!(
            PhaseExp::from_ratio(1, 2) * PhaseExp::from_ratio(3, 2),
            PhaseExp::one()
        );
    }

    #[test]
    fn normalization() {
        assert_eq!(PhaseExp::from_ratio(5, 2), PhaseExp::from_ratio(1, 2));
        assert_eq!(PhaseExp::from_ratio(-1, 3), PhaseExp::from_ratio(5, 3));
        assert_eq!(PhaseExp::from_ratio(4, 1), PhaseExp::one());
        assert_eq!(PhaseExp::from_ratio(2, 4).to_string(), "1/2");
        assert!(PhaseExp::from_ratio(-7, 1).is_minus_one());
    }

    #[test]
    fn complex_values() {
        let close = |a: Complex64, b: Complex64| (a - b).norm() < 1e-15;
        assert!(close(
            PhaseExp::one().to_complex(),
            Complex64::new(1.0, 0.0)
        ));
        assert!(close(PhaseExp::i().to_complex(), Complex64::new(0.0, 1.0)));
        assert!(close(
            PhaseExp::from_ratio(1, 3).to_complex(),
            Complex64::from_polar(1.0, std::f64::consts::PI / 3.0)
        ));
    }

    #[test]
    fn parse() {
        assert_eq!(
            "3/2".parse::<PhaseExp>().unwrap(),
            PhaseExp::from_ratio(3, 2)
        );
        assert_eq!("-1".parse::<PhaseExp>().unwrap(), PhaseExp::minus_one());
        assert!("1/0".parse::<PhaseExp>().is_err());
        assert!("x".parse::<PhaseExp>().is_err());
    }
}
