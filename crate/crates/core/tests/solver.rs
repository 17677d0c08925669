use std::sync::Arc;

use indexmap::IndexMap;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use proptest::prelude::*;
use weylks_core::certificate::{
    builtin_mermin3, builtin_peres2, check_assignment, check_witness, compile, find_assignment,
    find_contradiction, value_class, AssignmentSystem, ValueRef,
};
use weylks_core::{
    monomial_mul, Certificate, Context, DofSystem, Generator, PhaseExp, WeylMonomial,
};

/// Unknowns live on the grid `k/24 mod 2`. With at most three unknowns,
/// coefficients in `{-1, 0, 1}` and phases in half-units, every solvable
/// system has a solution there: a basic solution has denominators dividing
/// `2·det`, and `|det| ≤ 4`.
fn brute_force_consistent(e: &[Vec<i64>], phi_halves: &[i64], n: usize) -> bool {
    const GRID: i64 = 24;
    let total = (2 * GRID).pow(n as u32);
    (0..total).any(|mut idx| {
        let mut k = vec![0i64; n];
        for x in k.iter_mut() {
            *x = idx % (2 * GRID);
            idx /= 2 * GRID;
        }
        e.iter().zip(phi_halves).all(|(row, &p)| {
            let lhs: i64 = row.iter().zip(&k).map(|(a, b)| a * b).sum();
            (lhs - p * GRID / 2).rem_euclid(2 * GRID) == 0
        })
    })
}

fn raw_system(e: &[Vec<i64>], phi_halves: &[i64], n: usize) -> AssignmentSystem {
    let s = DofSystem::from_integers(&vec![1; n]).unwrap();
    AssignmentSystem {
        unknowns: (0..n)
            .map(|j| WeylMonomial::generator(&s, Generator::U, j, 1))
            .collect(),
        e: e.iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect(),
        phi: phi_halves
            .iter()
            .map(|&p| PhaseExp::from_ratio(p, 2))
            .collect(),
        rows: Vec::new(),
        refs: IndexMap::new(),
    }
}

fn small_system() -> impl Strategy<Value = (Vec<Vec<i64>>, Vec<i64>, usize)> {
    (1usize..=3, 1usize..=4).prop_flat_map(|(n, rows)| {
        (
            prop::collection::vec(prop::collection::vec(-1i64..=1, n), rows),
            prop::collection::vec(0i64..4, rows),
            Just(n),
        )
    })
}

fn u_only_certificate() -> impl Strategy<Value = Certificate> {
    (1usize..=4).prop_flat_map(|n| {
        let theta = prop::collection::vec((1i64..5, 1i64..4), n);
        let mono = prop::collection::vec(-2i64..=2, n);
        let ctx = prop::collection::vec(mono, 1..=4);
        (theta, prop::collection::vec(ctx, 1..=6)).prop_map(move |(theta, ctxs)| {
            let theta = theta
                .into_iter()
                .map(|(p, q)| BigRational::new(p.into(), q.into()))
                .collect();
            let s = DofSystem::new(theta).unwrap();
            let mut monos = IndexMap::new();
            let mut contexts = Vec::new();
            for ctx in ctxs {
                let mut ids = Vec::new();
                for m in ctx {
                    let mono = WeylMonomial::from_i64(&s, PhaseExp::one(), &m, &vec![0; n]);
                    let id = mono.to_string();
                    monos.insert(id.clone(), mono);
                    if !ids.contains(&id) {
                        ids.push(id);
                    }
                }
                contexts.push(Context::new(ids));
            }
            Certificate::new(s, monos, contexts).unwrap()
        })
    })
}

fn value_of(sys: &AssignmentSystem, y: &[PhaseExp], mono: &WeylMonomial) -> PhaseExp {
    match value_class(mono) {
        None => mono.phase().clone(),
        Some((class, sign, phase)) => {
            let col = sys.unknowns.iter().position(|u| *u == class).unwrap();
            let v = if sign < 0 {
                y[col].inv()
            } else {
                y[col].clone()
            };
            &phase * &v
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn solver_agrees_with_brute_force((e, phi, n) in small_system()) {
        let sys = raw_system(&e, &phi, n);
        let expected = brute_force_consistent(&e, &phi, n);
        let witness = find_contradiction(&sys);
        let assignment = find_assignment(&sys);
        prop_assert_eq!(witness.is_none(), expected);
        prop_assert_eq!(assignment.is_some(), expected);
        if let Some(w) = witness {
            prop_assert!(check_witness(&sys, &w));
        }
        if let Some(a) = assignment {
            prop_assert!(check_assignment(&sys, &a));
        }
    }

    #[test]
    fn u_only_certificates_are_consistent(cert in u_only_certificate()) {
        let sys = compile(&cert).unwrap();
        prop_assert!(find_contradiction(&sys).is_none());
        let a = find_assignment(&sys).unwrap();
        for (ci, _) in cert.contexts().iter().enumerate() {
            let members = cert.members(ci).unwrap();
            let lhs = members
                .iter()
                .fold(PhaseExp::one(), |acc, m| &acc * &value_of(&sys, &a.unknowns, m));
            let product = cert.context_product(ci).unwrap();
            prop_assert_eq!(lhs, value_of(&sys, &a.unknowns, &product));
        }
        for (id, v) in &a.values {
            prop_assert_eq!(v, &value_of(&sys, &a.unknowns, cert.monomial(id).unwrap()));
        }
    }

    #[test]
    fn context_order_is_irrelevant(seed in any::<u64>(), which in 0usize..2) {
        let cert = if which == 0 { builtin_peres2() } else { builtin_mermin3() };
        let n = cert.contexts().len();
        let mut order: Vec<usize> = (0..n).collect();
        let mut x = seed;
        for i in (1..n).rev() {
            x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            order.swap(i, (x >> 33) as usize % (i + 1));
        }
        let contexts = order
            .iter()
            .map(|&i| {
                let mut m = cert.contexts()[i].members.clone();
                let k = (seed as usize + i) % m.len();
                m.rotate_left(k);
                Context::new(m)
            })
            .collect();
        let shuffled = Certificate::new(
            Arc::clone(cert.system()),
            cert.monomials().clone(),
            contexts,
        )
        .unwrap();
        let w = find_contradiction(&compile(&shuffled).unwrap()).unwrap();
        prop_assert!(w.accumulated_phase.is_minus_one());
        prop_assert_eq!(w.support().len(), n);
    }
}

#[test]
fn peres2_counts() {
    let sys = compile(&builtin_peres2()).unwrap();
    assert_eq!(sys.n_rows(), 7);
    assert_eq!(sys.n_unknowns(), 10);
    let w = find_contradiction(&sys).unwrap();
    assert!(w.accumulated_phase.is_minus_one());
    assert!(w.t.iter().all(|x| x.to_i64().unwrap().abs() == 1));
}

#[test]
fn mermin3_counts() {
    let sys = compile(&builtin_mermin3()).unwrap();
    assert_eq!(sys.n_rows(), 5);
    let w = find_contradiction(&sys).unwrap();
    assert!(w.accumulated_phase.is_minus_one());
    assert_eq!(w.support(), vec![0, 1, 2, 3, 4]);
}

#[test]
fn inverse_powers_share_a_column() {
    let s = DofSystem::from_integers(&[1, 1]).unwrap();
    let u = WeylMonomial::generator(&s, Generator::U, 0, 2);
    let u_inv = WeylMonomial::generator(&s, Generator::U, 0, -2);
    let v = WeylMonomial::generator(&s, Generator::V, 1, 1);
    let mut monos = IndexMap::new();
    for m in [&u, &u_inv, &v] {
        monos.insert(m.to_string(), m.clone());
    }
    let cert = Certificate::new(
        s,
        monos,
        vec![
            Context::new([u.to_string(), v.to_string()]),
            Context::new([u_inv.to_string(), v.to_string()]),
        ],
    )
    .unwrap();
    let sys = compile(&cert).unwrap();
    let (a, b) = (&sys.refs[&u.to_string()], &sys.refs[&u_inv.to_string()]);
    match (a, b) {
        (
            ValueRef::Class {
                column: c1,
                sign: s1,
                ..
            },
            ValueRef::Class {
                column: c2,
                sign: s2,
                ..
            },
        ) => {
            assert_eq!(c1, c2);
            assert_eq!(*s1, -*s2);
        }
        _ => panic!("expected class references"),
    }
    let asg = find_assignment(&sys).unwrap();
    let prod = &asg.values[&u.to_string()] * &asg.values[&u_inv.to_string()];
    assert!(prod.is_one());
    assert!(monomial_mul(&u, &u_inv).is_identity());
}

#[test]
fn composite_inverse_is_separate_class() {
    let s = DofSystem::from_integers(&[1]).unwrap();
    let uv = WeylMonomial::from_i64(&s, PhaseExp::one(), &[1], &[1]);
    let inv = uv.inverse();
    assert_ne!(value_class(&uv).unwrap().0, value_class(&inv).unwrap().0);
}
