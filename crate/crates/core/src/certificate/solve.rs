use indexmap::IndexMap;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::intlin::{left_mul, primitive, RowEchelon};
use crate::phase::PhaseExp;

use super::compile::{AssignmentSystem, ValueRef};

/// Integer combination of constraint rows under which every unknown cancels
/// while the phases accumulate to something other than `0 mod 2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContradictionWitness {
    pub t: Vec<BigInt>,
    pub accumulated_phase: PhaseExp,
}

impl ContradictionWitness {
    /// Rows with nonzero multiplier.
    pub fn support(&self) -> Vec<usize> {
        self.t
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(|(i, _)| i)
            .collect()
    }
}

/// Unit-circle values `e^{iπ y}` for every unknown, and the induced value of
/// every named monomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Assignment {
    pub unknowns: Vec<PhaseExp>,
    pub values: IndexMap<String, PhaseExp>,
}

fn accumulate(t: &[BigInt], phi: &[PhaseExp]) -> PhaseExp {
    let mut acc = PhaseExp::one();
    for (k, p) in t.iter().zip(phi) {
        if !k.is_zero() {
            acc *= &p.pow(k);
        }
    }
    acc
}

pub fn check_witness(sys: &AssignmentSystem, w: &ContradictionWitness) -> bool {
    w.t.len() == sys.n_rows()
        && left_mul(&w.t, &sys.e, sys.n_unknowns())
            .iter()
            .all(Zero::is_zero)
        && accumulate(&w.t, &sys.phi) == w.accumulated_phase
        && !w.accumulated_phase.is_one()
}

fn support_len(t: &[BigInt]) -> usize {
    t.iter().filter(|x| !x.is_zero()).count()
}

/// Searches the integer left kernel of `E` for a combination with nonzero
/// accumulated phase. Candidates are the kernel basis vectors and their
/// pairwise sums and differences; the one with the smallest support wins,
/// ties broken lexicographically.
pub fn find_contradiction(sys: &AssignmentSystem) -> Option<ContradictionWitness> {
    let ech = RowEchelon::new(&sys.e, sys.n_unknowns());
    let basis = ech.left_kernel();
    let mut candidates: Vec<Vec<BigInt>> = basis.iter().cloned().map(primitive).collect();
    for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            let sum = basis[i].iter().zip(&basis[j]).map(|(a, b)| a + b).collect();
            let diff = basis[i].iter().zip(&basis[j]).map(|(a, b)| a - b).collect();
            candidates.push(primitive(sum));
            candidates.push(primitive(diff));
        }
    }
    candidates
        .into_iter()
        .filter(|t| support_len(t) > 0)
        .map(|t| {
            let accumulated_phase = accumulate(&t, &sys.phi);
            ContradictionWitness {
                t,
                accumulated_phase,
            }
        })
        .filter(|w| !w.accumulated_phase.is_one())
        .min_by(|a, b| {
            support_len(&a.t)
                .cmp(&support_len(&b.t))
                .then_with(|| a.t.cmp(&b.t))
        })
}

fn value_of(r: &ValueRef, y: &[PhaseExp]) -> PhaseExp {
    match r {
        ValueRef::Scalar(p) => p.clone(),
        ValueRef::Class {
            column,
            sign,
            phase,
        } => {
            let v = if *sign < 0 {
                y[*column].inv()
            } else {
                y[*column].clone()
            };
            &v * phase
        }
    }
}

/// Checks every constraint by substitution.
pub fn check_assignment(sys: &AssignmentSystem, a: &Assignment) -> bool {
    if a.unknowns.len() != sys.n_unknowns() {
        return false;
    }
    sys.e.iter().zip(&sys.phi).all(|(row, phi)| {
        let lhs = accumulate(row, &a.unknowns);
        &lhs == phi
    })
}

/// Solves `E y ≡ φ (mod 2)` exactly, or returns `None` when some kernel
/// combination forces a nonzero phase. Free unknowns are set to `0`.
pub fn find_assignment(sys: &AssignmentSystem) -> Option<Assignment> {
    let n = sys.n_unknowns();
    let ech = RowEchelon::new(&sys.e, n);
    let rank = ech.rank();
    let rhs: Vec<BigRational> = ech
        .transform
        .iter()
        .map(|t| {
            let mut acc = BigRational::zero();
            for (k, p) in t.iter().zip(&sys.phi) {
                if !k.is_zero() {
                    acc += BigRational::from_integer(k.clone()) * p.exponent();
                }
            }
            acc
        })
        .collect();
    for r in &rhs[rank..] {
        if !PhaseExp::new(r.clone()).is_one() {
            return None;
        }
    }
    let mut y = vec![BigRational::zero(); n];
    for r in (0..rank).rev() {
        let col = ech.pivots[r];
        let row = &ech.echelon[r];
        let mut acc = rhs[r].clone();
        for (c, coeff) in row.iter().enumerate().skip(col + 1) {
            if !coeff.is_zero() {
                acc -= BigRational::from_integer(coeff.clone()) * &y[c];
            }
        }
        debug_assert!(row[col].is_positive());
        y[col] = acc / BigRational::from_integer(row[col].clone());
    }
    let unknowns: Vec<PhaseExp> = y.into_iter().map(PhaseExp::new).collect();
    let values = sys
        .refs
        .iter()
        .map(|(id, r)| (id.clone(), value_of(r, &unknowns)))
        .collect();
    let a = Assignment { unknowns, values };
    check_assignment(sys, &a).then_some(a)
}
