//! Fixtures shared by the benchmarks.

use std::sync::Arc;

use weylks_core::oracle::matrix::exponent_box;
use weylks_core::{DofSystem, SearchParams, WeylMonomial};

/// Phase-free monomials over `n` dofs with every exponent in `[-k, k]`.
pub fn monomial_box(n: usize, k: i64) -> (Arc<DofSystem>, Vec<WeylMonomial>) {
    let s = DofSystem::standard(n).expect("standard system");
    let monos = exponent_box(&s, k);
    (s, monos)
}

pub fn search_params(n: usize) -> SearchParams {
    SearchParams::new(n)
}
