//! Exact Weyl-algebra arithmetic and Kochen-Specker obstruction certificates
//! for position-momentum systems, with numerical oracles and a bounded
//! certificate search.

pub mod certificate;
pub mod error;
pub mod intlin;
pub mod linalg;
pub mod monomial;
pub mod oracle;
pub mod phase;
pub mod search;
pub mod syntax;
pub mod system;

pub use certificate::{
    compile, find_assignment, find_contradiction, AssignmentSystem, Certificate, Context,
    ContradictionWitness,
};
pub use error::{Error, Result};
pub use monomial::{inverse, monomial_mul, symplectic_phase, Generator, WeylMonomial};
pub use num_complex::Complex64;
pub use phase::{phase_mul, PhaseExp};
pub use search::{
    enumerate_monomials, search_obstruction, space_size, SearchOutcome, SearchParams, SearchStats,
    SearchStatus,
};
pub use syntax::{format_monomial, parse_monomial};
pub use system::DofSystem;
