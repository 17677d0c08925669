use std::sync::Arc;

use indexmap::IndexMap;

use crate::error::{Error, Result};
use crate::syntax::parse_monomial;
use crate::system::DofSystem;

use super::{Certificate, Context};

pub const BUILTIN_NAMES: [&str; 2] = ["peres2", "mermin3"];

const PERES2_MONOMIALS: [&str; 14] = [
    "U1",
    "U1^-1",
    "U2",
    "U2^-1",
    "V1",
    "V1^-1",
    "V2",
    "V2^-1",
    "U1^-1 U2",
    "U1 V2",
    "V1 U2^-1",
    "V1^-1 V2^-1",
    "U1^-1 U2 V1^-1 V2^-1",
    "U1 V2 V1 U2^-1",
];

const PERES2_CONTEXTS: [&[&str]; 7] = [
    &["U1^-1", "U2"],
    &["U1", "V2"],
    &["V1", "U2^-1"],
    &["V1^-1", "V2^-1"],
    &["U1^-1 U2", "V1^-1 V2^-1"],
    &["U1 V2", "V1 U2^-1"],
    &["U1^-1 U2 V1^-1 V2^-1", "U1 V2 V1 U2^-1"],
];

const MERMIN3_MONOMIALS: [&str; 16] = [
    "U1",
    "U1^-1",
    "U2",
    "U2^-1",
    "U3",
    "U3^-1",
    "V1",
    "V1^-1",
    "V2",
    "V2^-1",
    "V3",
    "V3^-1",
    "U1 V2^-1 V3^-1",
    "V1^-1 U2 V3",
    "V1 V2 U3",
    "U1^-1 U2^-1 U3^-1",
];

const MERMIN3_CONTEXTS: [&[&str]; 5] = [
    &["U1", "V2^-1", "V3^-1"],
    &["V1^-1", "U2", "V3"],
    &["V1", "V2", "U3"],
    &["U1^-1", "U2^-1", "U3^-1"],
    &[
        "U1 V2^-1 V3^-1",
        "V1^-1 U2 V3",
        "V1 V2 U3",
        "U1^-1 U2^-1 U3^-1",
    ],
];

fn shaped(
    system: &Arc<DofSystem>,
    monomials: &[&str],
    contexts: &[&[&str]],
) -> Result<Certificate> {
    let mut named = IndexMap::new();
    for text in monomials {
        named.insert(text.to_string(), parse_monomial(system, text)?);
    }
    let contexts = contexts
        .iter()
        .map(|c| Context::new(c.iter().copied()))
        .collect();
    Certificate::new(Arc::clone(system), named, contexts)
}

/// The two-dof pair-product certificate over an arbitrary two-dof system.
/// Fails with [`Error::NonCommuting`] when `θ` breaks a context.
pub fn peres2_shape(system: &Arc<DofSystem>) -> Result<Certificate> {
    shaped(system, &PERES2_MONOMIALS, &PERES2_CONTEXTS)
}

/// The three-dof triple-product certificate over an arbitrary three-dof
/// system.
pub fn mermin3_shape(system: &Arc<DofSystem>) -> Result<Certificate> {
    shaped(system, &MERMIN3_MONOMIALS, &MERMIN3_CONTEXTS)
}

/// Two dofs, `θ = (1, 1)`: four pair-product contexts, two regrouping
/// contexts, and the final context whose product is `−I`.
pub fn builtin_peres2() -> Certificate {
    let s = DofSystem::standard(2).expect("two dofs");
    peres2_shape(&s).expect("builtin certificate is valid")
}

/// Three dofs, `θ = (1, 1, 1)`: four triple-product contexts and the final
/// context of the four triple products, whose product is `−I`.
pub fn builtin_mermin3() -> Certificate {
    let s = DofSystem::standard(3).expect("three dofs");
    mermin3_shape(&s).expect("builtin certificate is valid")
}

pub fn builtin(name: &str) -> Result<Certificate> {
    match name {
        "peres2" => Ok(builtin_peres2()),
        "mermin3" => Ok(builtin_mermin3()),
        _ => Err(Error::UnknownBuiltin(name.to_string())),
    }
}
