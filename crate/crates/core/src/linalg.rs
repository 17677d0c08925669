//! Dense complex helpers shared by the oracles.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

const CLUSTER_TOL: f64 = 1e-7;
const MAX_DEPTH: usize = 12;

/// Largest entry modulus.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn max_abs_vec(v: &CVector) -> f64 {
    v.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

/// `(M + M†)/2`.
pub fn hermitian_re(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()) * Complex64::new(0.5, 0.0)
}

/// `i(M† − M)/2`.
pub fn hermitian_im(m: &CMatrix) -> CMatrix {
    (m.adjoint() - m) * Complex64::new(0.0, 0.5)
}

/// `max |AB − BA|`.
pub fn commutator_norm(a: &CMatrix, b: &CMatrix) -> f64 {
    max_abs(&(a * b - b * a))
}

/// `max |M M† − I|`.
pub fn unitarity_defect(m: &CMatrix) -> f64 {
    max_abs(&(m * m.adjoint() - CMatrix::identity(m.nrows(), m.ncols())))
}

/// A joint eigenvector and its eigenvalue under each operator of the family.
#[derive(Clone, Debug)]
pub struct JointEigenpair {
    pub vector: CVector,
    pub eigenvalues: Vec<Complex64>,
    /// Worst `‖M v − λ v‖∞` over the family.
    pub residual: f64,
}

fn is_scalar_block(m: &CMatrix, tol: f64) -> bool {
    let k = m.nrows();
    let mean = m.trace() / Complex64::new(k as f64, 0.0);
    max_abs(&(m - CMatrix::identity(k, k) * mean)) <= tol
}

fn split(
    family: &[CMatrix],
    basis: CMatrix,
    rng: &mut ChaCha8Rng,
    depth: usize,
    out: &mut Vec<CVector>,
) -> Result<()> {
    let k = basis.ncols();
    let restricted: Vec<CMatrix> = family
        .iter()
        .map(|m| basis.adjoint() * m * &basis)
        .collect();
    if restricted.iter().all(|m| is_scalar_block(m, 1e-9)) {
        out.extend(basis.column_iter().map(|c| c.into_owned()));
        return Ok(());
    }
    if depth == MAX_DEPTH {
        return Err(Error::Diagonalization(format!(
            "no splitting of a {k}-dimensional block after {MAX_DEPTH} rounds"
        )));
    }
    let mut h = CMatrix::zeros(k, k);
    for m in &restricted {
        let r: f64 = rng.random_range(-1.0..1.0);
        let s: f64 = rng.random_range(-1.0..1.0);
        h += hermitian_re(m) * Complex64::new(r, 0.0) + hermitian_im(m) * Complex64::new(s, 0.0);
    }
    let h = hermitian_re(&h);
    let eig = h.symmetric_eigen();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let scale = 1.0 + eig.eigenvalues.iter().fold(0.0f64, |a, x| a.max(x.abs()));
    let mut start = 0;
    while start < k {
        let mut end = start + 1;
        while end < k
            && eig.eigenvalues[order[end]] - eig.eigenvalues[order[end - 1]] <= CLUSTER_TOL * scale
        {
            end += 1;
        }
        let cols: Vec<CVector> = order[start..end]
            .iter()
            .map(|&i| eig.eigenvectors.column(i).into_owned())
            .collect();
        let sub = &basis * CMatrix::from_columns(&cols);
        if end - start == k {
            // The random combination was degenerate on this block; draw again.
            split(family, sub, rng, depth + 1, out)?;
        } else {
            split(family, sub, rng, depth, out)?;
        }
        start = end;
    }
    Ok(())
}

/// Orthonormal basis of joint eigenvectors of a commuting family of normal
/// matrices, by diagonalizing random real combinations of their Hermitian
/// parts and refining inside degenerate clusters. Deterministic for a fixed
/// `seed`. Every pair is checked against `tol`.
pub fn simultaneous_eigenbasis(
    family: &[CMatrix],
    seed: u64,
    tol: f64,
) -> Result<Vec<JointEigenpair>> {
    let Some(first) = family.first() else {
        return Ok(Vec::new());
    };
    let dim = first.nrows();
    for (i, a) in family.iter().enumerate() {
        for b in &family[i + 1..] {
            let c = commutator_norm(a, b);
            if c > 1e-8 {
                return Err(Error::Diagonalization(format!(
                    "family does not commute (commutator norm {c:.3e})"
                )));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut vectors = Vec::with_capacity(dim);
    split(
        family,
        CMatrix::identity(dim, dim),
        &mut rng,
        0,
        &mut vectors,
    )?;
    vectors
        .into_iter()
        .map(|v| {
            let mut residual = 0.0f64;
            let eigenvalues = family
                .iter()
                .map(|m| {
                    let mv = m * &v;
                    let lambda = v.dotc(&mv);
                    residual = residual.max(max_abs_vec(&(mv - &v * lambda)));
                    lambda
                })
                .collect();
            if residual > tol {
                return Err(Error::Diagonalization(format!(
                    "eigenpair residual {residual:.3e} exceeds {tol:.1e}"
                )));
            }
            Ok(JointEigenpair {
                vector: v,
                eigenvalues,
                residual,
            })
        })
        .collect()
}
