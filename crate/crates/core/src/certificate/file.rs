use std::fmt;

use indexmap::IndexMap;
use serde::de::{MapAccess, Visitor};
use serde::{Deserialize, Deserializer, Serialize};

use crate::error::{Error, Result};
use crate::syntax::parse_monomial;
use crate::system::DofSystem;

use super::{Certificate, Context};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
enum Ratio {
    Int(i64),
    Text(String),
}

impl Ratio {
    fn text(&self) -> String {
        match self {
            Ratio::Int(k) => k.to_string(),
            Ratio::Text(s) => s.clone(),
        }
    }
}

/// Monomial map that rejects repeated keys instead of keeping the last one.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(transparent)]
struct UniqueMap(IndexMap<String, String>);

impl<'de> Deserialize<'de> for UniqueMap {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = UniqueMap;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a map from monomial id to monomial text")
            }
            fn visit_map<A: MapAccess<'de>>(
                self,
                mut map: A,
            ) -> std::result::Result<UniqueMap, A::Error> {
                let mut out = IndexMap::new();
                while let Some((k, v)) = map.next_entry::<String, String>()? {
                    if out.contains_key(&k) {
                        return Err(serde::de::Error::custom(format!(
                            "duplicate monomial id {k:?}"
                        )));
                    }
                    out.insert(k, v);
                }
                Ok(UniqueMap(out))
            }
        }
        de.deserialize_map(V)
    }
}

/// On-disk JSON form of a certificate.
///
/// ```json
/// {
///   "dofs": 1,
///   "theta": ["1/1"],
///   "monomials": { "a": "U1", "b": "U1^-1" },
///   "contexts": [["a", "b"]]
/// }
/// ```
///
/// `theta` may hold integers or `"p/q"` strings and defaults to all ones.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateFile {
    pub dofs: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    theta: Option<Vec<Ratio>>,
    monomials: UniqueMap,
    pub contexts: Vec<Vec<String>>,
}

impl CertificateFile {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("certificate serializes");
        s.push('\n');
        s
    }

    pub fn theta_strings(&self) -> Vec<String> {
        match &self.theta {
            Some(t) => t.iter().map(Ratio::text).collect(),
            None => vec!["1".to_string(); self.dofs],
        }
    }

    pub fn monomial_texts(&self) -> &IndexMap<String, String> {
        &self.monomials.0
    }

    pub fn to_certificate(&self) -> Result<Certificate> {
        let theta = self.theta_strings();
        if theta.len() != self.dofs {
            return Err(Error::ThetaLength {
                expected: self.dofs,
                got: theta.len(),
            });
        }
        let system = DofSystem::from_strs(&theta)?;
        let monomials = self
            .monomials
            .0
            .iter()
            .map(|(id, text)| Ok((id.clone(), parse_monomial(&system, text)?)))
            .collect::<Result<IndexMap<_, _>>>()?;
        let contexts = self
            .contexts
            .iter()
            .map(|c| Context::new(c.iter().cloned()))
            .collect();
        Certificate::new(system, monomials, contexts)
    }

    pub fn from_certificate(cert: &Certificate) -> Self {
        CertificateFile {
            dofs: cert.system().n_dof(),
            theta: Some(
                cert.system()
                    .theta_strings()
                    .into_iter()
                    .map(Ratio::Text)
                    .collect(),
            ),
            monomials: UniqueMap(
                cert.monomials()
                    .iter()
                    .map(|(id, m)| (id.clone(), m.to_string()))
                    .collect(),
            ),
            contexts: cert.contexts().iter().map(|c| c.members.clone()).collect(),
        }
    }
}

impl Certificate {
    pub fn from_json(text: &str) -> Result<Self> {
        CertificateFile::from_json(text)?.to_certificate()
    }

    pub fn to_json(&self) -> String {
        CertificateFile::from_certificate(self).to_json()
    }
}
