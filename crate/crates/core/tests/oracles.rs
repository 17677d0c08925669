use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use num_rational::BigRational;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use weylks_core::certificate::{builtin_mermin3, builtin_peres2};
use weylks_core::linalg::{commutator_norm, max_abs, unitarity_defect, CMatrix};
use weylks_core::oracle::grid::{
    self, apply_monomial, check_eigenstate, epr_momentum_leakage, find_ghz_analogues,
    make_epr_delta, monomial_matrix, GridBinding, GridSpec, GridState,
};
use weylks_core::oracle::matrix::{self, build_rep, common_eigenstates, homomorphism_residual};
use weylks_core::oracle::{Tolerances, TOL_EIGEN};
use weylks_core::{
    monomial_mul, parse_monomial, symplectic_phase, DofSystem, Error, Generator, PhaseExp,
    WeylMonomial,
};

fn sys(theta: &[i64]) -> Arc<DofSystem> {
    DofSystem::from_integers(theta).unwrap()
}

fn peres_pair(s: &Arc<DofSystem>) -> (WeylMonomial, WeylMonomial) {
    (
        parse_monomial(s, "U1^-1 U2 V1^-1 V2^-1").unwrap(),
        parse_monomial(s, "U1 V2 V1 U2^-1").unwrap(),
    )
}

fn mermin_triples(s: &Arc<DofSystem>) -> Vec<WeylMonomial> {
    let cert = builtin_mermin3();
    let last = cert.contexts().len() - 1;
    cert.members(last)
        .unwrap()
        .into_iter()
        .map(|m| parse_monomial(s, &m.to_string()).unwrap())
        .collect()
}

fn quadruple_product(ops: &[WeylMonomial]) -> WeylMonomial {
    ops.iter()
        .skip(1)
        .fold(ops[0].clone(), |acc, m| monomial_mul(&acc, m))
}

// Matrix oracle

#[test]
fn generators_anticommute_as_matrices() {
    for theta in [1, 3, -5] {
        let s = sys(&[theta, 1]);
        let rep = build_rep(&s).unwrap();
        let (u, v) = (rep.u(0), rep.v(0));
        assert!(max_abs(&(&u * &v + &v * &u)) < 1e-12);
        assert!(unitarity_defect(&u) < 1e-12 && unitarity_defect(&v) < 1e-12);
        assert!(commutator_norm(&rep.u(0), &rep.v(1)) < 1e-12);
    }
}

#[test]
fn rational_theta_weyl_relation() {
    let theta = vec![
        BigRational::new(2.into(), 3.into()),
        BigRational::new((-1).into(), 4.into()),
    ];
    let s = DofSystem::new(theta.clone()).unwrap();
    let rep = build_rep(&s).unwrap();
    assert_eq!(rep.dim(), 24);
    for (j, t) in theta.iter().enumerate() {
        let (u, v) = (rep.u(j), rep.v(j));
        let phase = PhaseExp::new(-t.clone()).to_complex();
        assert!(max_abs(&(&u * &v - &v * &u * phase)) < 1e-12);
    }
}

#[test]
fn clock_and_shift_against_direct_construction() {
    let s = sys(&[1]);
    let rep = build_rep(&s).unwrap();
    let d = rep.dim();
    let omega = Complex64::from_polar(1.0, 2.0 * PI / d as f64);
    let mut z = CMatrix::zeros(d, d);
    for k in 0..d {
        z[(k, k)] = omega.powu(k as u32);
    }
    assert!(max_abs(&(rep.u(0) - z)) < 1e-12);
    let v = rep.v(0);
    for c in 0..d {
        let nonzero: Vec<usize> = (0..d).filter(|&r| v[(r, c)].norm() > 0.5).collect();
        assert_eq!(nonzero.len(), 1);
    }
}

#[test]
fn homomorphism_over_two_dof_box() {
    let s = sys(&[1, 1]);
    let rep = build_rep(&s).unwrap();
    let box1 = matrix::exponent_box(&s, 1);
    assert_eq!(box1.len(), 81);
    assert!(homomorphism_residual(&rep, &box1) < 1e-10);
}

#[test]
fn minus_identity_products_in_matrix_model() {
    let s = sys(&[1, 1]);
    let rep = build_rep(&s).unwrap();
    let (a, b) = peres_pair(&s);
    let prod = rep.evaluate(&a) * rep.evaluate(&b);
    let minus = -CMatrix::identity(rep.total_dim(), rep.total_dim());
    assert!(max_abs(&(prod - &minus)) < 1e-10);

    let s3 = sys(&[1, 1, 1]);
    let rep3 = build_rep(&s3).unwrap();
    let ops = mermin_triples(&s3);
    let prod = ops
        .iter()
        .fold(CMatrix::identity(8, 8), |acc, m| acc * rep3.evaluate(m));
    assert!(max_abs(&(prod + CMatrix::identity(8, 8))) < 1e-10);
}

#[test]
fn builtin_claims_pass_in_matrix_model() {
    for cert in [builtin_peres2(), builtin_mermin3()] {
        let rep = build_rep(cert.system()).unwrap();
        let checks = matrix::check_certificate(&rep, &cert, 7, Tolerances::default()).unwrap();
        assert!(checks.iter().all(|c| c.pass), "{checks:?}");
    }
}

#[test]
fn representation_limits() {
    let s = DofSystem::new(vec![BigRational::new(1.into(), 3.into())]).unwrap();
    assert!(matches!(
        matrix::build_rep_with_dim(&s, 4),
        Err(Error::Unrepresentable { dof: 1, .. })
    ));
    let big = sys(&[1; 13]);
    assert!(matches!(
        build_rep(&big),
        Err(Error::DimensionTooLarge { .. })
    ));
}

#[test]
fn noncommuting_family_is_rejected() {
    let s = sys(&[1]);
    let rep = build_rep(&s).unwrap();
    let u = WeylMonomial::generator(&s, Generator::U, 0, 1);
    let v = WeylMonomial::generator(&s, Generator::V, 0, 1);
    assert!(matches!(
        common_eigenstates(&rep, &[u, v], 0),
        Err(Error::NonCommutingFamily { .. })
    ));
}

fn two_dof_mono() -> impl Strategy<Value = WeylMonomial> {
    (
        prop::collection::vec(-2i64..=2, 2),
        prop::collection::vec(-2i64..=2, 2),
        0i64..4,
    )
        .prop_map(|(m, n, q)| {
            WeylMonomial::from_i64(&sys(&[1, 1]), PhaseExp::from_ratio(q, 2), &m, &n)
        })
}

fn rational_system() -> impl Strategy<Value = Arc<DofSystem>> {
    prop::collection::vec((1i64..4, 1i64..4, any::<bool>()), 1..=2).prop_map(|t| {
        DofSystem::new(
            t.into_iter()
                .map(|(p, q, neg)| BigRational::new((if neg { -p } else { p }).into(), q.into()))
                .collect(),
        )
        .unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn homomorphism_for_rational_theta(
        s in rational_system(),
        raw in prop::collection::vec((prop::collection::vec(-2i64..=2, 4), prop::collection::vec(-2i64..=2, 4)), 4),
    ) {
        let n = s.n_dof();
        let monos: Vec<WeylMonomial> = raw
            .iter()
            .map(|(m, v)| WeylMonomial::from_i64(&s, PhaseExp::one(), &m[..n], &v[..n]))
            .collect();
        let rep = build_rep(&s).unwrap();
        prop_assert!(homomorphism_residual(&rep, &monos) < 1e-10);
    }

    #[test]
    fn matrix_phase_fidelity(a in two_dof_mono(), b in two_dof_mono()) {
        let s = a.system().clone();
        let b = WeylMonomial::from_exponents(&s, b.phase().clone(), b.u_exponents().to_vec(), b.v_exponents().to_vec());
        let rep = build_rep(&s).unwrap();
        let (ma, mb) = (rep.evaluate(&a), rep.evaluate(&b));
        let c = symplectic_phase(&a, &b).unwrap();
        prop_assert!(max_abs(&(&ma * &mb - &mb * &ma * c.to_complex())) < 1e-10);
        if c.is_minus_one() {
            prop_assert!(max_abs(&(&ma * &mb + &mb * &ma)) < 1e-10);
        }
    }

    #[test]
    fn eigenvalue_product_law(a in two_dof_mono(), b in two_dof_mono(), q in 0i64..4, seed in any::<u64>()) {
        let s = a.system().clone();
        let b = WeylMonomial::from_exponents(&s, b.phase().clone(), b.u_exponents().to_vec(), b.v_exponents().to_vec());
        prop_assume!(symplectic_phase(&a, &b).unwrap().is_one());
        let closing = monomial_mul(&a, &b).inverse().with_phase(PhaseExp::from_ratio(q, 2));
        let closing = monomial_mul(&closing, &WeylMonomial::scalar(&s, monomial_mul(&a, &b).phase().inv()));
        let family = vec![a.clone(), b.clone(), closing];
        let total = quadruple_product(&family);
        prop_assert!(total.is_scalar());
        let rep = build_rep(&s).unwrap();
        let pairs = common_eigenstates(&rep, &family, seed).unwrap();
        prop_assert_eq!(pairs.len(), rep.total_dim());
        for p in &pairs {
            let prod: Complex64 = p.eigenvalues.iter().product();
            prop_assert!((prod - total.phase().to_complex()).norm() < TOL_EIGEN);
        }
    }
}

// Grid oracle

fn spec(n_dof: usize, n: usize) -> GridSpec {
    GridSpec::new(n_dof, n, 2.0 * PI).unwrap()
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `e^{−i a·x}` and `ψ(x − b)` evaluated point by point from the grid
/// coordinates.
fn direct_u(s: &GridState, a: &[f64]) -> Vec<Complex64> {
    let sp = s.spec();
    (0..sp.n_points())
        .map(|idx| {
            let mut rest = idx;
            let mut dot = 0.0;
            for j in (0..sp.n_dof).rev() {
                dot += a[j] * (rest % sp.n) as f64 * sp.spacing();
                rest /= sp.n;
            }
            Complex64::from_polar(1.0, -dot) * s.amplitudes()[idx]
        })
        .collect()
}

fn direct_v(s: &GridState, shift: &[i64]) -> Vec<Complex64> {
    let sp = s.spec();
    let n = sp.n as i64;
    (0..sp.n_points())
        .map(|idx| {
            let mut rest = idx;
            let mut src = 0usize;
            let mut stride = 1usize;
            for j in (0..sp.n_dof).rev() {
                let x = (rest % sp.n) as i64;
                rest /= sp.n;
                src += ((x - shift[j]).rem_euclid(n) as usize) * stride;
                stride *= sp.n;
            }
            s.amplitudes()[src]
        })
        .collect()
}

fn close(a: &[Complex64], b: &[Complex64], tol: f64) -> bool {
    a.iter().zip(b).all(|(x, y)| (x - y).norm() <= tol)
}

#[test]
fn grid_actions_match_direct_formulas() {
    let sp = spec(2, 6);
    let s = GridState::random(&sp, &mut rng(1));
    let a = [2.0 * 2.0 * PI / sp.period, -2.0 * PI / sp.period];
    let b = [sp.spacing() * 3.0, -sp.spacing()];
    assert!(close(
        s.apply_u(&a).unwrap().amplitudes(),
        &direct_u(&s, &a),
        1e-12
    ));
    assert!(close(
        s.apply_v(&b).unwrap().amplitudes(),
        &direct_v(&s, &[3, -1]),
        1e-12
    ));
}

#[test]
fn incommensurate_parameters_are_rejected() {
    let sp = spec(1, 4);
    let s = GridState::random(&sp, &mut rng(2));
    assert!(matches!(
        s.apply_u(&[0.3]),
        Err(Error::Incommensurate { what: "a", .. })
    ));
    assert!(matches!(
        s.apply_v(&[0.3]),
        Err(Error::Incommensurate { what: "b", .. })
    ));
    assert!(GridSpec::new(1, 5, 1.0).is_err());
}

#[test]
fn minus_identity_on_random_grid_states() {
    let s2 = sys(&[1, 1]);
    let sp = spec(2, 8);
    let bind = GridBinding::standard(&sp, &s2).unwrap();
    let (a, b) = peres_pair(&s2);
    let mut r = rng(3);
    for _ in 0..100 {
        let psi = GridState::random(&sp, &mut r);
        let out = apply_monomial(&a, &bind, &apply_monomial(&b, &bind, &psi).unwrap()).unwrap();
        assert!(out.distance(&psi.scale(Complex64::new(-1.0, 0.0))) < 1e-10);
    }

    let s3 = sys(&[1, 1, 1]);
    let sp3 = spec(3, 4);
    let bind3 = GridBinding::standard(&sp3, &s3).unwrap();
    let ops = mermin_triples(&s3);
    for _ in 0..100 {
        let psi = GridState::random(&sp3, &mut r);
        let mut acc = psi.clone();
        for m in ops.iter().rev() {
            acc = apply_monomial(m, &bind3, &acc).unwrap();
        }
        assert!(acc.distance(&psi.scale(Complex64::new(-1.0, 0.0))) < 1e-10);
    }
}

#[test]
fn epr_delta_solves_both_eigen_equations() {
    let s = sys(&[1, 1]);
    let sp = spec(2, 8);
    let bind = GridBinding::standard(&sp, &s).unwrap();
    assert_eq!(bind.k[0], bind.k[1]);
    let psi = make_epr_delta(&sp, 0.0).unwrap();
    assert!(!psi.is_normalized());
    let (a, b) = peres_pair(&s);
    let ca = check_eigenstate(&psi, &a, &bind, 1e-10).unwrap();
    let cb = check_eigenstate(&psi, &b, &bind, 1e-10).unwrap();
    assert!(ca.is_eigen && ca.residual < 1e-10);
    assert!(cb.is_eigen && cb.residual < 1e-10);
    assert!((ca.c * cb.c + 1.0).norm() < 1e-10);

    let cross = parse_monomial(&s, "U1 V2").unwrap();
    let chk = check_eigenstate(&psi, &cross, &bind, 1e-10).unwrap();
    assert!(!chk.is_eigen && chk.residual > 0.5);

    assert!(epr_momentum_leakage(&psi).unwrap() < 1e-10);
    let shifted = make_epr_delta(&sp, 3.0 * sp.spacing()).unwrap();
    assert!(
        check_eigenstate(&shifted, &a, &bind, 1e-10)
            .unwrap()
            .is_eigen
    );
    assert!(make_epr_delta(&sp, 0.1).is_err());
}

#[test]
fn ghz_analogues_on_small_grid() {
    let s = sys(&[1, 1, 1]);
    let sp = spec(3, 4);
    let bind = GridBinding::standard(&sp, &s).unwrap();
    let states = find_ghz_analogues(&sp, &bind, 11, TOL_EIGEN).unwrap();
    assert_eq!(states.len(), sp.n_points());
    let u1 = WeylMonomial::generator(&s, Generator::U, 0, 1);
    let mut quads = Vec::new();
    for g in &states {
        let prod: Complex64 = g.eigenvalues.iter().product();
        assert!((prod + 1.0).norm() < 1e-8);
        assert!(g.residual <= 1e-8);
        assert!(
            !check_eigenstate(&g.state, &u1, &bind, 1e-8)
                .unwrap()
                .is_eigen
        );
        quads.push(g.eigenvalues.clone());
    }
    let want = [1.0, 1.0, 1.0, -1.0].map(|x| Complex64::new(x, 0.0));
    assert!(quads
        .iter()
        .any(|q| q.iter().zip(&want).all(|(a, b)| (a - b).norm() < 1e-8)));
}

#[test]
fn builtin_claims_pass_on_grid() {
    for (cert, n) in [(builtin_peres2(), 8), (builtin_mermin3(), 4)] {
        let sp = spec(cert.system().n_dof(), n);
        let bind = GridBinding::standard(&sp, cert.system()).unwrap();
        let checks =
            grid::check_certificate(&cert, &sp, &bind, 5, 9, Tolerances::default()).unwrap();
        assert!(checks.iter().all(|c| c.pass), "{checks:?}");
    }
}

#[test]
fn binding_mismatch_is_reported() {
    let s = sys(&[1, 1]);
    let sp = spec(2, 8);
    let bad = GridBinding {
        k: vec![1, 1],
        m: vec![4, 2],
    };
    assert!(matches!(
        bad.check(&sp, &s),
        Err(Error::BindingMismatch { dof: 2, .. })
    ));
    let u = WeylMonomial::generator(&s, Generator::U, 0, 1);
    let psi = GridState::random(&sp, &mut rng(4));
    assert!(apply_monomial(&u, &bad, &psi).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn grid_is_unitary(seed in any::<u64>(), k in -3i64..=3, m in -3i64..=3) {
        let sp = spec(2, 6);
        let psi = GridState::random(&sp, &mut rng(seed));
        let a = [2.0 * PI * k as f64 / sp.period, 0.0];
        let b = [0.0, m as f64 * sp.spacing()];
        let u = psi.apply_u(&a).unwrap();
        let v = psi.apply_v(&b).unwrap();
        prop_assert!((u.norm() - psi.norm()).abs() < 1e-12);
        prop_assert!((v.norm() - psi.norm()).abs() < 1e-12);
        let back = u.apply_u(&[-a[0], -a[1]]).unwrap();
        prop_assert!(back.distance(&psi) < 1e-12);
    }

    #[test]
    fn grid_weyl_relation_is_exact(seed in any::<u64>(), k in -3i64..=3, m in -5i64..=5) {
        let sp = spec(1, 6);
        let psi = GridState::random(&sp, &mut rng(seed));
        let a = [2.0 * PI * k as f64 / sp.period];
        let b = [m as f64 * sp.spacing()];
        let uv = psi.apply_v(&b).unwrap().apply_u(&a).unwrap();
        let vu = psi.apply_u(&a).unwrap().apply_v(&b).unwrap();
        let phase = Complex64::from_polar(1.0, -a[0] * b[0]);
        prop_assert!(uv.distance(&vu.scale(phase)) < 1e-12);
    }

    #[test]
    fn oracles_agree_on_products_and_commutation(a in two_dof_mono(), b in two_dof_mono()) {
        let s = a.system().clone();
        let b = WeylMonomial::from_exponents(&s, b.phase().clone(), b.u_exponents().to_vec(), b.v_exponents().to_vec());
        let rep = build_rep(&s).unwrap();
        let sp = spec(2, 4);
        let bind = GridBinding::standard(&sp, &s).unwrap();
        let ga = monomial_matrix(&a, &bind, &sp).unwrap();
        let gb = monomial_matrix(&b, &bind, &sp).unwrap();
        let gab = monomial_matrix(&monomial_mul(&a, &b), &bind, &sp).unwrap();
        prop_assert!(max_abs(&(&ga * &gb - gab)) < 1e-10);
        let (ma, mb) = (rep.evaluate(&a), rep.evaluate(&b));
        let grid_commute = commutator_norm(&ga, &gb) < 1e-10;
        let matrix_commute = commutator_norm(&ma, &mb) < 1e-10;
        prop_assert_eq!(grid_commute, matrix_commute);
        prop_assert_eq!(matrix_commute, symplectic_phase(&a, &b).unwrap().is_one());
    }
}
