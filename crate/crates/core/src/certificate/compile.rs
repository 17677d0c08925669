use indexmap::IndexMap;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::Result;
use crate::monomial::WeylMonomial;
use crate::phase::PhaseExp;

use super::Certificate;

/// How the value of a named monomial is expressed through the unknowns:
/// `[M] = e^{iπ phase} · v_column^{sign}`, or a bare phase for scalars.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ValueRef {
    Scalar(PhaseExp),
    Class {
        column: usize,
        sign: i8,
        phase: PhaseExp,
    },
}

/// Splits `mono` into `e^{iπφ} · K^{ε}` with `K` the phase-free class
/// representative. A power of a single generator shares its class with the
/// inverse power (`U^{-k} = (U^k)^{-1}` exactly); every other monomial is
/// its own class. Scalars have no class.
pub fn value_class(mono: &WeylMonomial) -> Option<(WeylMonomial, i8, PhaseExp)> {
    if mono.is_scalar() {
        return None;
    }
    let phase = mono.phase().clone();
    let free = mono.phase_free();
    match mono.single_generator() {
        Some((_, _, e)) if e.is_negative() => Some((free.inverse(), -1, phase)),
        _ => Some((free, 1, phase)),
    }
}

/// One product-rule constraint, from one context.
#[derive(Clone, Debug)]
pub struct ConstraintRow {
    pub context: usize,
    /// Canonical product of the context members.
    pub product: WeylMonomial,
    pub phi: PhaseExp,
}

/// The linear system `E y ≡ φ (mod 2)` over the arguments `π y_c` of the
/// unknown values, one row per context.
#[derive(Clone, Debug)]
pub struct AssignmentSystem {
    pub unknowns: Vec<WeylMonomial>,
    pub e: Vec<Vec<BigInt>>,
    pub phi: Vec<PhaseExp>,
    pub rows: Vec<ConstraintRow>,
    /// Value expression of every named monomial used by a context.
    pub refs: IndexMap<String, ValueRef>,
}

impl AssignmentSystem {
    pub fn n_rows(&self) -> usize {
        self.e.len()
    }

    pub fn n_unknowns(&self) -> usize {
        self.unknowns.len()
    }
}

#[derive(Default)]
struct Columns {
    keys: IndexMap<Vec<BigInt>, WeylMonomial>,
}

impl Columns {
    fn value_ref(&mut self, mono: &WeylMonomial) -> ValueRef {
        match value_class(mono) {
            None => ValueRef::Scalar(mono.phase().clone()),
            Some((class, sign, phase)) => {
                let entry = self.keys.entry(class.exponent_key());
                let column = entry.index();
                entry.or_insert(class);
                ValueRef::Class {
                    column,
                    sign,
                    phase,
                }
            }
        }
    }
}

fn add_term(row: &mut Vec<BigInt>, phi: &mut PhaseExp, r: &ValueRef, k: i64) {
    match r {
        ValueRef::Scalar(p) => {
            if k > 0 {
                *phi = &*phi * &p.inv();
            } else {
                *phi = &*phi * p;
            }
        }
        ValueRef::Class {
            column,
            sign,
            phase,
        } => {
            if row.len() <= *column {
                row.resize(*column + 1, BigInt::zero());
            }
            row[*column] += BigInt::from(k * i64::from(*sign));
            if k > 0 {
                *phi = &*phi * &phase.inv();
            } else {
                *phi = &*phi * phase;
            }
        }
    }
}

/// Compiles every context into the constraint
/// `Σ_i ε_i y_{c_i} − ε_P y_{c_P} ≡ φ_P − Σ_i φ_i (mod 2)`.
pub fn compile(cert: &Certificate) -> Result<AssignmentSystem> {
    cert.validate()?;
    let mut cols = Columns::default();
    let mut refs = IndexMap::new();
    let mut raw = Vec::new();
    let mut rows = Vec::new();
    for ci in 0..cert.contexts().len() {
        let product = cert.context_product(ci)?;
        let mut coeffs = Vec::new();
        let mut phi = PhaseExp::one();
        for id in &cert.contexts()[ci].members {
            let mono = &cert.monomials()[id];
            let r = cols.value_ref(mono);
            add_term(&mut coeffs, &mut phi, &r, 1);
            refs.insert(id.clone(), r);
        }
        let p = cols.value_ref(&product);
        add_term(&mut coeffs, &mut phi, &p, -1);
        raw.push(coeffs);
        rows.push(ConstraintRow {
            context: ci,
            product,
            phi: phi.clone(),
        });
    }
    let n = cols.keys.len();
    let e = raw
        .into_iter()
        .map(|mut r| {
            r.resize(n, BigInt::zero());
            r
        })
        .collect();
    Ok(AssignmentSystem {
        unknowns: cols.keys.into_values().collect(),
        phi: rows.iter().map(|r| r.phi.clone()).collect(),
        e,
        rows,
        refs,
    })
}
