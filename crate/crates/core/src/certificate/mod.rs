//! Kochen-Specker obstruction certificates.
//!
//! A certificate names a set of Weyl monomials and lists contexts: ordered
//! lists of pairwise-commuting monomials. Every context asserts the product
//! rule `[M_1 ⋯ M_k] = [M_1] ⋯ [M_k]` for a unit-circle value assignment
//! `[·]`, with `[e^{iπq} I] = e^{iπq}`. [`compile`] turns those assertions
//! into an integer linear system over the arguments of the unknown values;
//! [`find_contradiction`] and [`find_assignment`] decide it exactly.

mod builtin;
mod compile;
mod file;
mod solve;

use std::sync::Arc;

use indexmap::IndexMap;

use crate::error::{Error, Result};
use crate::monomial::{product, WeylMonomial};
use crate::system::DofSystem;

pub use builtin::{
    builtin, builtin_mermin3, builtin_peres2, mermin3_shape, peres2_shape, BUILTIN_NAMES,
};
pub use compile::{compile, value_class, AssignmentSystem, ConstraintRow, ValueRef};
pub use file::CertificateFile;
pub use solve::{
    check_assignment, check_witness, find_assignment, find_contradiction, Assignment,
    ContradictionWitness,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Context {
    pub members: Vec<String>,
}

impl Context {
    pub fn new<S: Into<String>>(members: impl IntoIterator<Item = S>) -> Self {
        Context {
            members: members.into_iter().map(Into::into).collect(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Certificate {
    system: Arc<DofSystem>,
    monomials: IndexMap<String, WeylMonomial>,
    contexts: Vec<Context>,
}

impl Certificate {
    /// Builds and validates a certificate: every context member must be a
    /// named monomial of `system`, and members of a context must pairwise
    /// commute.
    pub fn new(
        system: Arc<DofSystem>,
        monomials: IndexMap<String, WeylMonomial>,
        contexts: Vec<Context>,
    ) -> Result<Self> {
        let cert = Certificate {
            system,
            monomials,
            contexts,
        };
        cert.validate()?;
        Ok(cert)
    }

    pub fn validate(&self) -> Result<()> {
        for mono in self.monomials.values() {
            if !crate::system::same_system(mono.system(), &self.system) {
                return Err(Error::SystemMismatch);
            }
        }
        for (ci, ctx) in self.contexts.iter().enumerate() {
            let members = self.members(ci)?;
            for (i, id) in ctx.members.iter().enumerate() {
                if ctx.members[..i].contains(id) {
                    return Err(Error::DuplicateMember {
                        context: ci,
                        id: id.clone(),
                    });
                }
            }
            for (i, a) in members.iter().enumerate() {
                for (j, b) in members.iter().enumerate().skip(i + 1) {
                    let phase = a.try_symplectic_phase(b)?;
                    if !phase.is_one() {
                        return Err(Error::NonCommuting {
                            context: ci,
                            a: ctx.members[i].clone(),
                            b: ctx.members[j].clone(),
                            phase,
                        });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn system(&self) -> &Arc<DofSystem> {
        &self.system
    }

    pub fn monomials(&self) -> &IndexMap<String, WeylMonomial> {
        &self.monomials
    }

    pub fn contexts(&self) -> &[Context] {
        &self.contexts
    }

    pub fn monomial(&self, id: &str) -> Option<&WeylMonomial> {
        self.monomials.get(id)
    }

    /// The monomials of context `ci`, in listed order.
    pub fn members(&self, ci: usize) -> Result<Vec<&WeylMonomial>> {
        self.contexts[ci]
            .members
            .iter()
            .map(|id| {
                self.monomials
                    .get(id)
                    .ok_or_else(|| Error::UnknownMonomial {
                        context: ci,
                        id: id.clone(),
                    })
            })
            .collect()
    }

    /// Canonical product of the members of context `ci`.
    pub fn context_product(&self, ci: usize) -> Result<WeylMonomial> {
        product(&self.system, self.members(ci)?)
    }

    /// The certificate restricted to the given contexts, keeping only the
    /// monomials they use.
    pub fn restrict(&self, keep: &[usize]) -> Certificate {
        let contexts: Vec<Context> = keep.iter().map(|&i| self.contexts[i].clone()).collect();
        let monomials = self
            .monomials
            .iter()
            .filter(|(id, _)| contexts.iter().any(|c| c.members.contains(id)))
            .map(|(id, m)| (id.clone(), m.clone()))
            .collect();
        Certificate {
            system: Arc::clone(&self.system),
            monomials,
            contexts,
        }
    }

    /// Applies `f` to every named monomial. Contexts are kept; the result is
    /// re-validated, so `f` must preserve commutation.
    pub fn map_monomials(
        &self,
        system: &Arc<DofSystem>,
        f: impl Fn(&WeylMonomial) -> WeylMonomial,
    ) -> Result<Certificate> {
        let monomials = self
            .monomials
            .iter()
            .map(|(id, m)| (id.clone(), f(m)))
            .collect();
        Certificate::new(Arc::clone(system), monomials, self.contexts.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_monomial;

    #[test]
    fn rejects_non_commuting_context() {
        let s = DofSystem::standard(1).unwrap();
        let mut monos = IndexMap::new();
        monos.insert("U1".to_string(), parse_monomial(&s, "U1").unwrap());
        monos.insert("V1".to_string(), parse_monomial(&s, "V1").unwrap());
        let err = Certificate::new(s, monos, vec![Context::new(["U1", "V1"])]).unwrap_err();
        match err {
            Error::NonCommuting {
                context,
                a,
                b,
                phase,
            } => {
                assert_eq!((context, a.as_str(), b.as_str()), (0, "U1", "V1"));
                assert!(phase.is_minus_one());
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn rejects_unknown_member() {
        let s = DofSystem::standard(1).unwrap();
        let err = Certificate::new(s, IndexMap::new(), vec![Context::new(["X"])]).unwrap_err();
        assert!(matches!(err, Error::UnknownMonomial { context: 0, .. }));
    }

    #[test]
    fn restrict_drops_unused_monomials() {
        let cert = builtin_peres2();
        let sub = cert.restrict(&[0]);
        assert_eq!(sub.contexts().len(), 1);
        let ids: Vec<_> = sub.monomials().keys().cloned().collect();
        assert_eq!(ids, vec!["U1^-1".to_string(), "U2".to_string()]);
    }
}
