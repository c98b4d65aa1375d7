use hmom_core::classes::{is_f_nnd, is_f_pd, reflect, reflect_class_dual};
use hmom_core::extensions::{next_moment, random_f, ExtensionMode};
use hmom_core::intervals::{membership, IntervalTable};
use hmom_core::matrix::{
    block2x2, block_psd, hermitian_part, identity, is_psd, min_eig, norm2, parallel_sum, pinv,
    proj_range_floor, psd_sqrt, real_diag, rel_diff, subspace_intersection_projector, CMatrix,
};
use hmom_core::verify::{run_suite, Suite};
use hmom_core::{MomentSequence, Status, Tolerances};
use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;

fn complex_matrix(rows: usize, cols: usize) -> impl Strategy<Value = CMatrix> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), rows * cols).prop_map(move |v| {
        let data: Vec<Complex64> = v.into_iter().map(|(a, b)| Complex64::new(a, b)).collect();
        DMatrix::from_row_slice(rows, cols, &data)
    })
}

/// `G G*` with `G` of size `q x rank`.
fn psd(q: usize, rank: usize) -> impl Strategy<Value = CMatrix> {
    complex_matrix(q, rank).prop_map(|g| hermitian_part(&(&g * g.adjoint())))
}

fn psd_any(q: usize) -> impl Strategy<Value = CMatrix> {
    (1..=q).prop_flat_map(move |r| psd(q, r))
}

fn hermitian(q: usize) -> impl Strategy<Value = CMatrix> {
    complex_matrix(q, q).prop_map(|g| hermitian_part(&g))
}

fn interval() -> impl Strategy<Value = (f64, f64)> {
    prop_oneof![
        Just((0.0, 1.0)),
        Just((-1.0, 1.0)),
        Just((-2.0, 3.0)),
        Just((0.5, 2.5)),
        Just((-3.0, -1.0)),
    ]
}

fn tol() -> Tolerances {
    Tolerances::default()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn parallel_sum_is_symmetric_in_its_arguments(a in psd_any(3), b in psd_any(3)) {
        let ab = parallel_sum(&a, &b, &tol()).unwrap().value;
        let ba = parallel_sum(&b, &a, &tol()).unwrap().value;
        prop_assert!(rel_diff(&ab, &ba) < 1e-9);
    }

    #[test]
    fn parallel_sum_is_below_both_summands(a in psd_any(3), b in psd_any(3)) {
        let ps = parallel_sum(&a, &b, &tol()).unwrap().value;
        let scale = 1f64.max(norm2(&a)).max(norm2(&b));
        prop_assert!(min_eig(&ps) >= -1e-9 * scale);
        prop_assert!(min_eig(&(&a - &ps)) >= -1e-9 * scale);
        prop_assert!(min_eig(&(&b - &ps)) >= -1e-9 * scale);
    }

    #[test]
    fn sum_minus_four_parallel_sums(a in psd_any(3), b in psd_any(3)) {
        let t = tol();
        let s = &a + &b;
        let lhs = &s - parallel_sum(&a, &b, &t).unwrap().value * Complex64::new(4.0, 0.0);
        let diff = &a - &b;
        let rhs = &diff * pinv(&s, &t) * &diff;
        let scale = 1f64.max(norm2(&a)).max(norm2(&b));
        prop_assert!(norm2(&(lhs - rhs)) <= 1e-8 * scale);
    }

    #[test]
    fn parallel_sum_range_is_the_intersection(
        (a, b) in (1usize..=3, 1usize..=3).prop_flat_map(|(ra, rb)| (psd(3, ra), psd(3, rb))),
    ) {
        let t = tol();
        let reference = norm2(&a).max(norm2(&b));
        let ps = parallel_sum(&a, &b, &t).unwrap().value;
        let cap = subspace_intersection_projector(&a, &b, &t, reference);
        prop_assert!(norm2(&(proj_range_floor(&ps, &t, reference) - cap)) < 1e-6);
    }

    #[test]
    fn pseudo_inverse_penrose_conditions(a in complex_matrix(3, 2)) {
        let p = pinv(&a, &tol());
        let s = 1f64.max(norm2(&a)).max(norm2(&p));
        prop_assert!(norm2(&(&a * &p * &a - &a)) < 1e-10 * s * s);
        prop_assert!(norm2(&(&p * &a * &p - &p)) < 1e-10 * s * s);
        prop_assert!(norm2(&((&a * &p).adjoint() - &a * &p)) < 1e-10 * s * s);
        prop_assert!(norm2(&((&p * &a).adjoint() - &p * &a)) < 1e-10 * s * s);
    }

    #[test]
    fn square_root_squares_back(a in psd_any(3)) {
        let r = psd_sqrt(&a, &tol()).unwrap();
        prop_assert!(norm2(&(&r * &r - &a)) <= 1e-10 * norm2(&a).max(1.0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn block_test_agrees_with_direct_eigenvalues(
        a in psd_any(2),
        x in complex_matrix(2, 2),
        e in hermitian(2),
        range_kind in 0usize..3,
        shift in -0.5f64..0.5,
    ) {
        let t = tol();
        // `B` inside `R(A)` for kinds 0 and 1, generic otherwise.
        let b = if range_kind < 2 { &a * &x } else { x.clone() };
        let c = b.adjoint();
        let d = &c * pinv(&a, &t) * &b + &e * Complex64::new(1.0, 0.0)
            + identity(2) * Complex64::new(shift, 0.0);
        let full = block2x2(&a, &b, &c, &d);
        let scale = 1f64.max(norm2(&full));
        let direct = min_eig(&full);
        let verdict = block_psd(&a, &b, &c, &d, &t).unwrap();
        if direct > 1e-6 * scale {
            prop_assert!(verdict.status.holds(), "direct {direct:e} verdict {:?}", verdict);
        } else if direct < -1e-6 * scale {
            prop_assert_eq!(verdict.status, Status::Outside, "direct {:e}", direct);
        }
    }
}

fn hermitian_sequence(q: usize, m: usize) -> impl Strategy<Value = Vec<CMatrix>> {
    prop::collection::vec(hermitian(q), m + 1)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn linear_hankel_identities_hold_for_any_hermitian_data(
        s in (1usize..=3, 1usize..=6).prop_flat_map(|(q, m)| hermitian_sequence(q, m)),
        (alpha, beta) in interval(),
    ) {
        let seq = MomentSequence::new(alpha, beta, s, tol()).unwrap();
        let report = run_suite(&seq, Suite::HankelIdentities).unwrap();
        for c in report.checks.iter().filter(|c| !c.name.starts_with("gap_is")) {
            prop_assert!(c.passed(), "{} {:e}", c.name, c.residual);
        }
    }

    #[test]
    fn reflection_is_an_involution(s in hermitian_sequence(2, 5), (alpha, beta) in interval()) {
        let twice = reflect(&reflect(&s));
        prop_assert_eq!(twice, s.clone());
        let seq = MomentSequence::new(alpha, beta, s, tol()).unwrap();
        let back = reflect_class_dual(&reflect_class_dual(&seq).unwrap()).unwrap();
        prop_assert_eq!(back.alpha(), alpha);
        prop_assert_eq!(back.beta(), beta);
    }

    #[test]
    fn reflection_preserves_the_class_verdict(s in hermitian_sequence(2, 4), (alpha, beta) in interval()) {
        let seq = MomentSequence::new(alpha, beta, s, tol()).unwrap();
        let r = reflect_class_dual(&seq).unwrap();
        prop_assert_eq!(is_f_nnd(&seq).unwrap().status, is_f_nnd(&r).unwrap().status);
    }

    #[test]
    fn random_positive_sequences_stay_positive(
        q in 1usize..=3,
        m in 0usize..=6,
        (alpha, beta) in interval(),
        seed in any::<u64>(),
    ) {
        let seq = random_f(q, alpha, beta, m, seed, true).unwrap();
        for l in 0..=m {
            prop_assert_eq!(is_f_pd(&seq.prefix(l).unwrap()).unwrap().status, Status::Inside);
        }
    }

    #[test]
    fn ball_points_are_admissible(
        q in 1usize..=3,
        m in 0usize..=5,
        (alpha, beta) in interval(),
        seed in any::<u64>(),
        values in prop::collection::vec(0.0f64..=1.0, 3),
        basis in complex_matrix(3, 3),
    ) {
        let seq = random_f(q, alpha, beta, m, seed, false).unwrap();
        let u = basis.view((0, 0), (q, q)).into_owned().qr().q();
        let k = hermitian_part(&(&u * real_diag(&values[..q]) * u.adjoint()));
        let x = next_moment(&seq, &ExtensionMode::Ball(k)).unwrap();
        let v = membership(&seq, &x).unwrap();
        prop_assert!(v.status.holds(), "{:?}", v);
        let t = IntervalTable::new(&seq).unwrap();
        let lo = is_psd(&(&x - &t.a[m]), seq.tol()).unwrap();
        let hi = is_psd(&(&t.b[m] - &x), seq.tol()).unwrap();
        prop_assert!(lo.status.holds() && hi.status.holds());
    }
}
