//! Bounded search for obstruction certificates.
//!
//! The search grows the set of values forced by the product rule, one
//! context at a time, starting from the single-generator powers, and stops
//! at the cheapest clash: a monomial forced to two different values, or a
//! scalar context whose product rule fails. Cost is the number of contexts
//! in the derivation trees. The clash is turned into a certificate, pruned
//! to the support of its contradiction witness, and re-verified.

mod engine;
mod symmetry;

use std::sync::Arc;
use std::time::{Duration, Instant};

use indexmap::IndexMap;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};

use crate::certificate::{compile, find_contradiction, Certificate, Context, ContradictionWitness};
use crate::error::{Error, Result};
use crate::monomial::WeylMonomial;
use crate::phase::PhaseExp;
use crate::system::DofSystem;

use engine::{Config, Engine, Stop};

pub use symmetry::Relabel;

pub const MAX_SEARCH_DOFS: usize = 8;
pub const MAX_SEARCH_EXPONENT: i64 = 7;

#[derive(Clone, Debug, PartialEq)]
pub struct SearchParams {
    pub n_dof: usize,
    pub max_exponent: i64,
    pub max_context_size: usize,
    /// Upper bound on the contexts of a returned certificate.
    pub max_contexts: usize,
    /// Explored contexts before giving up; deterministic.
    pub node_budget: Option<u64>,
    /// Wall-clock limit; results under it are not reproducible.
    pub time_budget: Option<Duration>,
    /// Defaults to `θ_j = 1`.
    pub theta: Option<Vec<BigRational>>,
    /// Only `U` generators.
    pub u_only: bool,
    pub symmetry: bool,
}

impl SearchParams {
    pub fn new(n_dof: usize) -> Self {
        SearchParams {
            n_dof,
            max_exponent: 1,
            max_context_size: 4,
            max_contexts: 8,
            node_budget: None,
            time_budget: None,
            theta: None,
            u_only: false,
            symmetry: true,
        }
    }

    pub fn system(&self) -> Result<Arc<DofSystem>> {
        match &self.theta {
            Some(t) => {
                if t.len() != self.n_dof {
                    return Err(Error::ThetaLength {
                        expected: self.n_dof,
                        got: t.len(),
                    });
                }
                DofSystem::new(t.clone())
            }
            None => DofSystem::standard(self.n_dof),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::SearchParams(msg));
        if self.n_dof == 0 || self.n_dof > MAX_SEARCH_DOFS {
            return bad(format!("dofs must be in 1..={MAX_SEARCH_DOFS}"));
        }
        if !(0..=MAX_SEARCH_EXPONENT).contains(&self.max_exponent) {
            return bad(format!("max exponent must be in 0..={MAX_SEARCH_EXPONENT}"));
        }
        if self.max_context_size < 2 {
            return bad("contexts need at least 2 members".into());
        }
        if self.max_contexts == 0 {
            return bad("max contexts must be positive".into());
        }
        if self.node_budget == Some(0) {
            return bad("node budget must be positive".into());
        }
        self.system().map(|_| ())
    }

    /// Every ratio is an odd integer; other systems are searched but the
    /// results are flagged experimental.
    pub fn is_standard_regime(&self) -> bool {
        self.system().is_ok_and(|s| s.is_odd_integral())
    }
}

/// Size of the space returned by [`enumerate_monomials`], without building it.
pub fn space_size(params: &SearchParams) -> BigInt {
    let per = BigInt::from(2 * params.max_exponent + 1);
    let gens = if params.u_only {
        params.n_dof
    } else {
        2 * params.n_dof
    };
    let all = num_traits::pow(per, gens);
    (all - 1u32) / 2u32 + 1u32
}

/// All phase-free canonical monomials with exponents in
/// `[-max_exponent, max_exponent]`, one per inverse pair (the positively
/// oriented one), plus the identity, sorted by `(m_1, n_1, m_2, ...)`.
pub fn enumerate_monomials(params: &SearchParams) -> Result<Vec<WeylMonomial>> {
    params.validate()?;
    let system = params.system()?;
    let k = params.max_exponent;
    let n = params.n_dof;
    let width = (2 * k + 1) as u64;
    let slots = if params.u_only { n } else { 2 * n };
    let total = width
        .checked_pow(slots as u32)
        .filter(|&t| t <= 1 << 24)
        .ok_or_else(|| Error::SearchParams("monomial space too large to list".into()))?;
    let mut out = Vec::new();
    for mut idx in 0..total {
        let mut digits = vec![0i64; slots];
        for d in digits.iter_mut().rev() {
            *d = (idx % width) as i64 - k;
            idx /= width;
        }
        let (m, v): (Vec<i64>, Vec<i64>) = if params.u_only {
            (digits, vec![0; n])
        } else {
            (0..n).map(|j| (digits[2 * j], digits[2 * j + 1])).unzip()
        };
        let mono = WeylMonomial::from_i64(&system, PhaseExp::one(), &m, &v);
        if mono.is_identity() || (mono.is_positively_oriented() && !mono.is_scalar()) {
            out.push(mono);
        }
    }
    out.sort_by_key(|a| a.exponent_key());
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchStatus {
    /// A verified certificate.
    Found,
    /// Exhaustive within the bounds: no clash of cost `max_contexts` or less.
    Absent,
    /// The node or time budget ran out first.
    Exhausted,
}

impl SearchStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            SearchStatus::Found => "found",
            SearchStatus::Absent => "absent",
            SearchStatus::Exhausted => "exhausted",
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    /// Monomial classes in the bounded space.
    pub space: BigInt,
    pub nodes: u64,
    pub states: usize,
    /// New states per level, level 0 being the leaves and the identity.
    pub level_counts: Vec<usize>,
    /// Derivation-tree cost of the returned clash.
    pub clash_cost: Option<u32>,
    /// No further state is derivable at any level.
    pub saturated: bool,
    /// Every level up to the clash cost was finished, so the clash is
    /// cheapest.
    pub complete: bool,
}

#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub status: SearchStatus,
    pub certificate: Option<Certificate>,
    pub witness: Option<ContradictionWitness>,
    pub stats: SearchStats,
    pub experimental: bool,
}

fn theta_numerators(system: &DofSystem) -> Result<(Vec<i64>, i64)> {
    let d = system.theta_denominator_lcm();
    let nums = system
        .theta()
        .iter()
        .map(|t| {
            (t * BigRational::from_integer(d.clone()))
                .to_integer()
                .to_i64()
        })
        .collect::<Option<Vec<_>>>();
    match (nums, d.to_i64()) {
        (Some(n), Some(d)) if d < 1 << 20 && n.iter().all(|x| x.abs() < 1 << 20) => Ok((n, d)),
        _ => Err(Error::SearchParams(
            "symplectic ratios too large for the search".into(),
        )),
    }
}

fn phase_free(system: &Arc<DofSystem>, exps: &[i8]) -> WeylMonomial {
    let m: Vec<i64> = exps.iter().step_by(2).map(|&e| e as i64).collect();
    let n: Vec<i64> = exps.iter().skip(1).step_by(2).map(|&e| e as i64).collect();
    WeylMonomial::from_i64(system, PhaseExp::one(), &m, &n)
}

fn build_certificate(
    system: &Arc<DofSystem>,
    engine: &Engine,
    contexts: &[Vec<u32>],
) -> Result<Certificate> {
    let mut named: IndexMap<String, WeylMonomial> = IndexMap::new();
    let mut out = Vec::new();
    for ctx in contexts {
        let mut ids = Vec::new();
        for &s in ctx {
            let mono = phase_free(system, engine.mono_of(s));
            let id = mono.to_string();
            named.entry(id.clone()).or_insert(mono);
            ids.push(id);
        }
        out.push(Context::new(ids));
    }
    Certificate::new(Arc::clone(system), named, out)
}

/// Cuts a contradictory certificate down to the contexts its witness uses.
pub fn prune_to_witness(cert: &Certificate) -> Result<Option<(Certificate, ContradictionWitness)>> {
    let sys = compile(cert)?;
    let Some(w) = find_contradiction(&sys) else {
        return Ok(None);
    };
    let pruned = cert.restrict(&w.support());
    let sys = compile(&pruned)?;
    Ok(find_contradiction(&sys).map(|w| (pruned, w)))
}

/// Runs the bounded search.
pub fn search_obstruction(params: &SearchParams) -> Result<SearchOutcome> {
    params.validate()?;
    let system = params.system()?;
    let (theta_num, denom) = theta_numerators(&system)?;
    let started = Instant::now();
    let mut engine = Engine::new(Config {
        theta_num,
        denom,
        bound: params.max_exponent as i8,
        max_context_size: params.max_context_size,
        max_total: params.max_contexts as u32,
        u_only: params.u_only,
        symmetry: params.symmetry,
        node_budget: params.node_budget,
        deadline: params.time_budget.map(|d| started + d),
    });
    let mut status = SearchStatus::Absent;
    let mut saturated = false;
    let mut complete = false;
    let s = params.max_context_size as u32;
    for level in 1..=params.max_contexts as u32 {
        if level - 1 > s * engine.max_cost() {
            saturated = true;
            break;
        }
        match engine.run_level(level) {
            Ok(_) => {}
            Err(Stop::Nodes) | Err(Stop::Time) => {
                status = SearchStatus::Exhausted;
                break;
            }
        }
        if engine.best.as_ref().is_some_and(|b| b.total <= level) {
            complete = true;
            break;
        }
    }
    if status == SearchStatus::Absent && engine.best.is_none() {
        complete = true;
    }
    let stats = SearchStats {
        space: space_size(params),
        nodes: engine.nodes,
        states: engine.states.len(),
        level_counts: engine.level_counts.clone(),
        clash_cost: engine.best.as_ref().map(|b| b.total),
        saturated,
        complete,
    };
    let experimental = !system.is_odd_integral();
    let Some(clash) = engine.best.clone() else {
        return Ok(SearchOutcome {
            status,
            certificate: None,
            witness: None,
            stats,
            experimental,
        });
    };
    let contexts = engine.clash_contexts(&clash);
    let cert = build_certificate(&system, &engine, &contexts)?;
    match prune_to_witness(&cert)? {
        Some((cert, witness)) => Ok(SearchOutcome {
            status: SearchStatus::Found,
            certificate: Some(cert),
            witness: Some(witness),
            stats,
            experimental,
        }),
        None => Err(Error::SearchParams(format!(
            "internal: clash of cost {} did not verify",
            clash.total
        ))),
    }
}

/// `true` when `cert` uses only monomials inside the bounded space of
/// `params`.
pub fn within_bounds(cert: &Certificate, params: &SearchParams) -> bool {
    let k = BigInt::from(params.max_exponent);
    cert.monomials().values().all(|m| {
        m.u_exponents()
            .iter()
            .chain(m.v_exponents())
            .all(|e| e.abs() <= k)
    })
}
