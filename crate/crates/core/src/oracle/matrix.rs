//! Clock-and-shift representations of the Weyl relations.
//!
//! For `θ_j = p_j/q_j` the per-dof dimension is `d = 2·lcm(q_j)` and
//! `ω = e^{2πi/d}`. `U_j` is the clock `Z = diag(ω^k)` and `V_j` is the
//! cyclic shift `X^{s_j}` with `s_j ≡ −θ_j d/2 (mod d)`, so that
//! `Z X^{s} = ω^{s} X^{s} Z = e^{−iπθ_j} X^{s} Z`. Dof 1 is the most
//! significant tensor factor.

use std::f64::consts::PI;
use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::certificate::Certificate;
use crate::error::{Error, Result};
use crate::linalg::{
    commutator_norm, hermitian_im, hermitian_re, max_abs, simultaneous_eigenbasis, CMatrix,
    JointEigenpair,
};
use crate::monomial::WeylMonomial;
use crate::phase::PhaseExp;
use crate::system::{same_system, DofSystem};

use super::{ClaimCheck, Tolerances};

/// Largest total dimension `d^{n_dof}` the oracle will build.
pub const MAX_TOTAL_DIM: usize = 4096;

#[derive(Clone, Debug)]
pub struct MatrixRep {
    system: Arc<DofSystem>,
    d: usize,
    omega: Complex64,
    shift_power: Vec<usize>,
    total_dim: usize,
}

fn root_of_unity(k: usize, d: usize) -> Complex64 {
    let k = k % d;
    if (4 * k).is_multiple_of(d) {
        match 4 * k / d {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        }
    } else {
        Complex64::from_polar(1.0, 2.0 * PI * k as f64 / d as f64)
    }
}

fn reduce(e: &BigInt, d: usize) -> usize {
    e.mod_floor(&BigInt::from(d))
        .to_usize()
        .expect("reduced below d")
}

/// Builds the smallest clock-and-shift representation, `d = 2·lcm(q_j)`.
pub fn build_rep(system: &Arc<DofSystem>) -> Result<MatrixRep> {
    let lcm = system.theta_denominator_lcm();
    let d = (lcm * 2u32)
        .to_usize()
        .filter(|&d| d <= MAX_TOTAL_DIM)
        .ok_or(Error::DimensionTooLarge {
            dim: usize::MAX,
            limit: MAX_TOTAL_DIM,
        })?;
    build_rep_with_dim(system, d)
}

/// Builds a representation with per-dof dimension `d`; every `θ_j d / 2`
/// must be an integer.
pub fn build_rep_with_dim(system: &Arc<DofSystem>, d: usize) -> Result<MatrixRep> {
    let mut shift_power = Vec::with_capacity(system.n_dof());
    for (j, theta) in system.theta().iter().enumerate() {
        let s = -theta * BigRational::from_integer(BigInt::from(d))
            / BigRational::from_integer(2.into());
        if d == 0 || !s.is_integer() {
            return Err(Error::Unrepresentable {
                dof: j + 1,
                theta: theta.to_string(),
                dim: d,
            });
        }
        shift_power.push(reduce(&s.to_integer(), d));
    }
    let total_dim = (0..system.n_dof())
        .try_fold(1usize, |acc, _| acc.checked_mul(d))
        .filter(|&t| t <= MAX_TOTAL_DIM)
        .ok_or(Error::DimensionTooLarge {
            dim: d.saturating_pow(system.n_dof() as u32),
            limit: MAX_TOTAL_DIM,
        })?;
    Ok(MatrixRep {
        system: Arc::clone(system),
        d,
        omega: root_of_unity(1, d),
        shift_power,
        total_dim,
    })
}

impl MatrixRep {
    pub fn system(&self) -> &Arc<DofSystem> {
        &self.system
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn total_dim(&self) -> usize {
        self.total_dim
    }

    pub fn omega(&self) -> Complex64 {
        self.omega
    }

    /// `d × d` factor `Z^m X^{s_j n}` for dof `j`.
    fn factor(&self, j: usize, m: &BigInt, n: &BigInt) -> CMatrix {
        let d = self.d;
        let m = reduce(m, d);
        let shift = reduce(&(n * BigInt::from(self.shift_power[j])), d);
        let mut f = CMatrix::zeros(d, d);
        // (Z^m X^shift) e_k = ω^{m(k+shift)} e_{k+shift}
        for k in 0..d {
            let row = (k + shift) % d;
            f[(row, k)] = root_of_unity(m * row, d);
        }
        f
    }

    /// `rep(U_j)` on the full space; `dof` is zero-based.
    pub fn u(&self, dof: usize) -> CMatrix {
        let mut m = vec![0i64; self.system.n_dof()];
        m[dof] = 1;
        let n = vec![0i64; self.system.n_dof()];
        self.evaluate(&WeylMonomial::from_i64(
            &self.system,
            PhaseExp::one(),
            &m,
            &n,
        ))
    }

    /// `rep(V_j)` on the full space; `dof` is zero-based.
    pub fn v(&self, dof: usize) -> CMatrix {
        let m = vec![0i64; self.system.n_dof()];
        let mut n = vec![0i64; self.system.n_dof()];
        n[dof] = 1;
        self.evaluate(&WeylMonomial::from_i64(
            &self.system,
            PhaseExp::one(),
            &m,
            &n,
        ))
    }

    /// The matrix of `e^{iπq} ∏_j U_j^{m_j} V_j^{n_j}`.
    pub fn evaluate(&self, a: &WeylMonomial) -> CMatrix {
        assert!(
            same_system(a.system(), &self.system),
            "monomial from a different system"
        );
        let mut out = CMatrix::identity(1, 1) * a.phase().to_complex();
        for (j, (m, n)) in a.u_exponents().iter().zip(a.v_exponents()).enumerate() {
            out = out.kronecker(&self.factor(j, m, n));
        }
        out
    }

    pub fn try_evaluate(&self, a: &WeylMonomial) -> Result<CMatrix> {
        if same_system(a.system(), &self.system) {
            Ok(self.evaluate(a))
        } else {
            Err(Error::SystemMismatch)
        }
    }
}

/// Largest commutator among the Hermitian parts `(M+M†)/2`, `i(M†−M)/2` of
/// `A` and `B`.
pub fn re_im_commutator_residual(rep: &MatrixRep, a: &WeylMonomial, b: &WeylMonomial) -> f64 {
    let (ma, mb) = (rep.evaluate(a), rep.evaluate(b));
    let parts = [
        hermitian_re(&ma),
        hermitian_im(&ma),
        hermitian_re(&mb),
        hermitian_im(&mb),
    ];
    let mut worst = 0.0f64;
    for i in 0..parts.len() {
        for j in i + 1..parts.len() {
            worst = worst.max(commutator_norm(&parts[i], &parts[j]));
        }
    }
    worst
}

/// The four Hermitian parts of commuting `A`, `B` pairwise commute.
pub fn check_re_im_commutation(rep: &MatrixRep, a: &WeylMonomial, b: &WeylMonomial) -> bool {
    re_im_commutator_residual(rep, a, b) <= super::TOL_ALGEBRAIC
}

/// Simultaneous eigenbasis of a symbolically commuting family.
pub fn common_eigenstates(
    rep: &MatrixRep,
    monomials: &[WeylMonomial],
    seed: u64,
) -> Result<Vec<JointEigenpair>> {
    common_eigenstates_tol(rep, monomials, seed, super::TOL_EIGEN)
}

pub fn common_eigenstates_tol(
    rep: &MatrixRep,
    monomials: &[WeylMonomial],
    seed: u64,
    tol: f64,
) -> Result<Vec<JointEigenpair>> {
    for (i, a) in monomials.iter().enumerate() {
        for (j, b) in monomials.iter().enumerate().skip(i + 1) {
            let phase = a.try_symplectic_phase(b)?;
            if !phase.is_one() {
                return Err(Error::NonCommutingFamily { a: i, b: j, phase });
            }
        }
    }
    let family = monomials
        .iter()
        .map(|m| rep.try_evaluate(m))
        .collect::<Result<Vec<_>>>()?;
    simultaneous_eigenbasis(&family, seed, tol)
}

/// Re-checks every algebraic claim of a certificate in the matrix model:
/// the commutation of each context's members, the Hermitian-part
/// commutation, the context product, and for scalar products the
/// eigenvalue-product law on a joint eigenbasis.
pub fn check_certificate(
    rep: &MatrixRep,
    cert: &Certificate,
    seed: u64,
    tol: Tolerances,
) -> Result<Vec<ClaimCheck>> {
    let mut out = Vec::new();
    for u in 0..rep.system.n_dof() {
        let (mu, mv) = (rep.u(u), rep.v(u));
        let phase = PhaseExp::new(-rep.system.theta()[u].clone()).to_complex();
        out.push(ClaimCheck::new(
            format!("U{0} V{0} = e^(-i pi theta) V{0} U{0}", u + 1),
            max_abs(&(&mu * &mv - &mv * &mu * phase)),
            tol.algebraic,
        ));
    }
    for (ci, ctx) in cert.contexts().iter().enumerate() {
        let members = cert.members(ci)?;
        let mats: Vec<CMatrix> = members.iter().map(|m| rep.evaluate(m)).collect();
        let mut comm = 0.0f64;
        let mut reim = 0.0f64;
        for i in 0..mats.len() {
            for j in i + 1..mats.len() {
                comm = comm.max(commutator_norm(&mats[i], &mats[j]));
                reim = reim.max(re_im_commutator_residual(rep, members[i], members[j]));
            }
        }
        let label = ctx.members.join(", ");
        out.push(ClaimCheck::new(
            format!("context {}: [{label}] pairwise commute", ci + 1),
            comm,
            tol.algebraic,
        ));
        out.push(ClaimCheck::new(
            format!("context {}: Hermitian parts commute", ci + 1),
            reim,
            tol.algebraic,
        ));
        let product = cert.context_product(ci)?;
        let numeric = mats
            .iter()
            .fold(CMatrix::identity(rep.total_dim, rep.total_dim), |acc, m| {
                acc * m
            });
        out.push(ClaimCheck::new(
            format!("context {}: product = {product}", ci + 1),
            max_abs(&(numeric - rep.evaluate(&product))),
            tol.algebraic,
        ));
        if product.is_scalar() && !members.is_empty() {
            let owned: Vec<WeylMonomial> = members.iter().map(|m| (*m).clone()).collect();
            let pairs = common_eigenstates_tol(rep, &owned, seed, tol.eigen)?;
            let want = product.phase().to_complex();
            let worst = pairs
                .iter()
                .map(|p| (p.eigenvalues.iter().product::<Complex64>() - want).norm())
                .fold(0.0f64, f64::max);
            out.push(ClaimCheck::new(
                format!(
                    "context {}: eigenvalue products = {} on {} joint eigenstates",
                    ci + 1,
                    product,
                    pairs.len()
                ),
                worst,
                tol.eigen,
            ));
        }
    }
    Ok(out)
}

/// Worst `|evaluate(AB) − evaluate(A)evaluate(B)|` over all ordered pairs.
pub fn homomorphism_residual(rep: &MatrixRep, monomials: &[WeylMonomial]) -> f64 {
    let mats: Vec<CMatrix> = monomials.iter().map(|m| rep.evaluate(m)).collect();
    let mut worst = 0.0f64;
    for (a, ma) in monomials.iter().zip(&mats) {
        for (b, mb) in monomials.iter().zip(&mats) {
            let sym = rep.evaluate(&(a * b));
            worst = worst.max(max_abs(&(sym - ma * mb)));
        }
    }
    worst
}

/// All phase-free monomials with every exponent in `[-k, k]`.
pub fn exponent_box(system: &Arc<DofSystem>, k: i64) -> Vec<WeylMonomial> {
    let n = system.n_dof();
    let width = (2 * k + 1) as usize;
    let count = width.pow(2 * n as u32);
    (0..count)
        .map(|mut idx| {
            let mut m = vec![BigInt::zero(); n];
            let mut v = vec![BigInt::zero(); n];
            for j in (0..n).rev() {
                v[j] = BigInt::from((idx % width) as i64 - k);
                idx /= width;
                m[j] = BigInt::from((idx % width) as i64 - k);
                idx /= width;
            }
            WeylMonomial::from_exponents(system, PhaseExp::one(), m, v)
        })
        .collect()
}
