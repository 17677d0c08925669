//! Exact integer row reduction.
//!
//! [`RowEchelon::new`] reduces an integer matrix `A` (m × n) with unimodular
//! row operations, recording them in `transform` so that
//! `transform · A = echelon`. Rows `rank..m` of `echelon` are zero, hence the
//! matching rows of `transform` form a basis of the integer left kernel
//! `{ t ∈ Z^m : tᵀA = 0 }`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

#[derive(Clone, Debug)]
pub struct RowEchelon {
    pub echelon: Vec<Vec<BigInt>>,
    pub transform: Vec<Vec<BigInt>>,
    /// Pivot column of each of the first `rank` rows.
    pub pivots: Vec<usize>,
}

fn axpy(dst: &mut [BigInt], k: &BigInt, src: &[BigInt]) {
    for (d, s) in dst.iter_mut().zip(src) {
        if !s.is_zero() {
            *d -= k * s;
        }
    }
}

impl RowEchelon {
    pub fn new(a: &[Vec<BigInt>], n_cols: usize) -> Self {
        let m = a.len();
        let mut h: Vec<Vec<BigInt>> = a.to_vec();
        let mut p: Vec<Vec<BigInt>> = (0..m)
            .map(|i| {
                (0..m)
                    .map(|j| {
                        if i == j {
                            BigInt::one()
                        } else {
                            BigInt::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..n_cols {
            if row == m {
                break;
            }
            loop {
                // Smallest nonzero magnitude at or below `row` becomes the pivot.
                let best = (row..m)
                    .filter(|&i| !h[i][col].is_zero())
                    .min_by(|&i, &j| h[i][col].abs().cmp(&h[j][col].abs()).then(i.cmp(&j)));
                let Some(best) = best else { break };
                h.swap(row, best);
                p.swap(row, best);
                let mut done = true;
                for i in row + 1..m {
                    if h[i][col].is_zero() {
                        continue;
                    }
                    let q = h[i][col].div_floor(&h[row][col]);
                    let (top, bottom) = h.split_at_mut(i);
                    axpy(&mut bottom[0], &q, &top[row]);
                    let (ptop, pbottom) = p.split_at_mut(i);
                    axpy(&mut pbottom[0], &q, &ptop[row]);
                    if !h[i][col].is_zero() {
                        done = false;
                    }
                }
                if done {
                    break;
                }
            }
            if row < m && !h[row][col].is_zero() {
                if h[row][col].is_negative() {
                    h[row].iter_mut().for_each(|x| *x = -&*x);
                    p[row].iter_mut().for_each(|x| *x = -&*x);
                }
                pivots.push(col);
                row += 1;
            }
        }
        RowEchelon {
            echelon: h,
            transform: p,
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Basis of the integer left kernel.
    pub fn left_kernel(&self) -> &[Vec<BigInt>] {
        &self.transform[self.rank()..]
    }
}

/// `tᵀA` for a row-major `A`.
pub fn left_mul(t: &[BigInt], a: &[Vec<BigInt>], n_cols: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); n_cols];
    for (ti, row) in t.iter().zip(a) {
        if ti.is_zero() {
            continue;
        }
        for (o, x) in out.iter_mut().zip(row) {
            *o += ti * x;
        }
    }
    out
}

/// Divides out the content and makes the first nonzero entry positive.
pub fn primitive(mut v: Vec<BigInt>) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if g.is_zero() {
        return v;
    }
    let neg = v
        .iter()
        .find(|x| !x.is_zero())
        .is_some_and(|x| x.is_negative());
    for x in v.iter_mut() {
        *x = &*x / &g;
        if neg {
            *x = -&*x;
        }
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect()
    }

    #[test]
    fn kernel_annihilates() {
        let a = mat(&[&[2, 4, 0], &[1, 2, 3], &[3, 6, 3], &[0, 0, 6]]);
        let ech = RowEchelon::new(&a, 3);
        assert_eq!(ech.rank(), 2);
        assert_eq!(ech.left_kernel().len(), 2);
        for t in ech.left_kernel() {
            assert!(left_mul(t, &a, 3).iter().all(Zero::is_zero));
        }
        // transform · A = echelon
        for (t, row) in ech.transform.iter().zip(&ech.echelon) {
            assert_eq!(&left_mul(t, &a, 3), row);
        }
    }

    #[test]
    fn empty_and_zero() {
        let ech = RowEchelon::new(&[], 0);
        assert_eq!(ech.rank(), 0);
        let z = mat(&[&[0, 0], &[0, 0]]);
        let ech = RowEchelon::new(&z, 2);
        assert_eq!(ech.left_kernel().len(), 2);
    }

    #[test]
    fn primitive_normalizes() {
        let v = primitive(vec![BigInt::from(0), BigInt::from(-4), BigInt::from(6)]);
        assert_eq!(v, vec![BigInt::from(0), BigInt::from(2), BigInt::from(-3)]);
    }
}
