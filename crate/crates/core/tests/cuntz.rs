use gkernel::cuntz::{
    amp_endofunctor, conjugate_amplified, parse, q, row_unitary_check, row_unitary_check_of, Cuntz, CuntzEndo,
    CuntzMatrix, CuntzWord, FormalSym, QComplex, RowVerdict,
};
use gkernel::Error;
use num_complex::Complex;
use num_rational::Rational64;
use proptest::prelude::*;

fn word(n: u32, max: usize) -> impl Strategy<Value = CuntzWord> {
    let letters = move || prop::collection::vec(1..=n, 0..=max);
    (letters(), letters()).prop_map(|(mu, nu)| CuntzWord::new(mu, nu))
}

fn coeff() -> impl Strategy<Value = QComplex> {
    (-3i64..=3, -2i64..=2, 1i64..=3)
        .prop_map(|(a, b, d)| Complex::new(Rational64::new(a, d), Rational64::new(b, d)))
}

/// Random element of O_n with words of length at most 2 on each side.
fn element(n: u32) -> impl Strategy<Value = Cuntz> {
    prop::collection::vec((word(n, 2), coeff()), 0..4).prop_map(move |ts| Cuntz::from_terms(n, ts).unwrap())
}

fn triple() -> impl Strategy<Value = (u32, Cuntz, Cuntz, Cuntz)> {
    (1u32..=3).prop_flat_map(|n| (Just(n), element(n), element(n), element(n)))
}

/// λ_u for u = Σ c_i v_{π(i)} v_i* with a permutation π and signs c_i.
fn lambda_instance(n: u32) -> impl Strategy<Value = CuntzEndo> {
    (Just((1..=n).collect::<Vec<u32>>()).prop_shuffle(), prop::collection::vec(any::<bool>(), n as usize)).prop_map(
        move |(perm, signs)| {
            let terms = (1..=n)
                .map(|i| {
                    let c = if signs[i as usize - 1] { q(1, 0) } else { q(-1, 0) };
                    (CuntzWord::new(vec![perm[i as usize - 1]], vec![i]), c)
                })
                .collect();
            CuntzEndo::lambda(&Cuntz::from_terms(n, terms).unwrap()).unwrap()
        },
    )
}

fn v(n: u32, i: u32) -> Cuntz {
    Cuntz::generator(n, i)
}

#[test]
fn rows_pass_for_small_n() {
    for n in 1..=4 {
        assert_eq!(row_unitary_check(n).unwrap(), RowVerdict::Pass);
    }
    assert!(row_unitary_check(0).is_err());
}

#[test]
fn summed_relation_and_refutation() {
    let one = Cuntz::one(2);
    let sum = v(2, 1).multiply(&v(2, 1).adjoint()).unwrap().add(&v(2, 2).multiply(&v(2, 2).adjoint()).unwrap()).unwrap();
    assert!(sum.equals(&one).unwrap());
    assert!(!v(2, 1).multiply(&v(2, 1).adjoint()).unwrap().equals(&one).unwrap());
}

#[test]
fn incomplete_rows_are_located() {
    let n = 3;
    let short = vec![v(n, 1), v(n, 2), v(n, 2)];
    assert_eq!(row_unitary_check_of(n, &short).unwrap(), RowVerdict::EntryFails { i: 2, j: 3 });
    // (v_1 v_1, v_1 v_2, v_2): isometries with orthogonal ranges not summing to 1
    let partial = vec![v(n, 1).multiply(&v(n, 1)).unwrap(), v(n, 1).multiply(&v(n, 2)).unwrap(), v(n, 2)];
    assert_eq!(row_unitary_check_of(n, &partial).unwrap(), RowVerdict::SumFails);
    assert!(matches!(CuntzEndo::new(n, partial), Err(Error::InvalidEndomorphism(_))));
}

#[test]
fn level_cap_is_reported() {
    let n = 2;
    let mut deep = Cuntz::one(n);
    for _ in 0..10 {
        deep = deep.multiply(&v(n, 1).adjoint()).unwrap();
    }
    let err = deep.equals_capped(&Cuntz::zero(n), 4).unwrap_err();
    assert!(matches!(err, Error::UndecidedAtLevel { .. }), "{err}");
}

#[test]
fn formal_symbols_commute_only_through_words() {
    let n = 2;
    let m = Cuntz::formal(n, FormalSym::new("m"));
    let t = vec![vec![q(1, 0), q(0, 0)], vec![q(0, 0), q(1, 0)]];
    // Σ_i v_i m v_i* with T = 1
    let conj = conjugate_amplified(n, Some(&FormalSym::new("m")), &t).unwrap();
    let direct = v(n, 1).multiply(&m).unwrap().multiply(&v(n, 1).adjoint()).unwrap()
        .add(&v(n, 2).multiply(&m).unwrap().multiply(&v(n, 2).adjoint()).unwrap()).unwrap();
    assert!(conj.equals(&direct).unwrap());
    assert!(matches!(m.multiply(&m), Err(Error::Unsupported(_))));
}

#[test]
fn amplified_identity_rows() {
    let n = 2;
    let row = CuntzMatrix::new(1, 2, vec![v(n, 1), v(n, 2)]).unwrap();
    assert!(row.multiply(&row.adjoint()).unwrap().equals(&CuntzMatrix::identity(n, 1)).unwrap());
    assert!(row.adjoint().multiply(&row).unwrap().equals(&CuntzMatrix::identity(n, 2)).unwrap());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn multiplication_is_associative((n, a, b, c) in triple()) {
        let l = a.multiply(&b).unwrap().multiply(&c).unwrap();
        let r = a.multiply(&b.multiply(&c).unwrap()).unwrap();
        prop_assert!(l.equals(&r).unwrap());
        prop_assert!(l.sub(&r).unwrap().equals(&Cuntz::zero(n)).unwrap());
    }

    #[test]
    fn equality_is_a_congruence((_n, a, b, c) in triple(), k1 in 1usize..3, k2 in 1usize..3) {
        let a2 = a.expand_to(a.level() + k1);
        let b2 = b.expand_to(b.level() + k2);
        prop_assert!(a.equals(&a2).unwrap());
        prop_assert!(a.multiply(&b).unwrap().equals(&a2.multiply(&b2).unwrap()).unwrap());
        prop_assert!(a.add(&b).unwrap().equals(&a2.add(&b2).unwrap()).unwrap());
        prop_assert!(c.multiply(&a).unwrap().equals(&c.multiply(&a2).unwrap()).unwrap());
    }

    #[test]
    fn level_expansion_is_consistent((_n, a, b, _c) in triple(), extra in 0usize..2) {
        let base = a.level().max(b.level()) + extra;
        let at_l = a.equals_at_level(&b, base).unwrap();
        let at_l1 = a.equals_at_level(&b, base + 1).unwrap();
        prop_assert_eq!(at_l, at_l1);
        let direct = a.expand_to(base + 1) == b.expand_to(base + 1);
        prop_assert_eq!(at_l1, direct);
    }

    #[test]
    fn adjoint_is_an_involutive_antihomomorphism((_n, a, b, _c) in triple()) {
        prop_assert_eq!(a.adjoint().adjoint(), a.clone());
        let l = a.multiply(&b).unwrap().adjoint();
        let r = b.adjoint().multiply(&a.adjoint()).unwrap();
        prop_assert!(l.equals(&r).unwrap());
    }

    #[test]
    fn printer_round_trips((n, a, _b, _c) in triple()) {
        let text = a.to_string();
        let back = parse(n, &text).unwrap();
        prop_assert_eq!(back, a, "{}", text);
    }

    #[test]
    fn lambda_respects_equality(
        (n, a, b, rho) in (1u32..=3).prop_flat_map(|n| (Just(n), element(n), element(n), lambda_instance(n))),
    ) {
        let a2 = a.expand_to(a.level() + 1);
        prop_assert!(rho.apply(&a).unwrap().equals(&rho.apply(&a2).unwrap()).unwrap());
        let ab = a.multiply(&b).unwrap();
        let prod = rho.apply(&a).unwrap().multiply(&rho.apply(&b).unwrap()).unwrap();
        prop_assert!(rho.apply(&ab).unwrap().equals(&prod).unwrap());
        prop_assert!(rho.apply(&a.adjoint()).unwrap().equals(&rho.apply(&a).unwrap().adjoint()).unwrap());
        prop_assert!(rho.apply(&Cuntz::one(n)).unwrap().equals(&Cuntz::one(n)).unwrap());
    }

    #[test]
    fn amp_endofunctor_is_multiplicative(
        (n, es, rho) in (1u32..=2).prop_flat_map(|n| (Just(n), prop::collection::vec(element(n), 8), lambda_instance(n))),
    ) {
        let a = CuntzMatrix::new(2, 2, es[..4].to_vec()).unwrap();
        let b = CuntzMatrix::new(2, 2, es[4..].to_vec()).unwrap();
        let lhs = amp_endofunctor(&rho, &a.multiply(&b).unwrap()).unwrap();
        let rhs = amp_endofunctor(&rho, &a).unwrap().multiply(&amp_endofunctor(&rho, &b).unwrap()).unwrap();
        prop_assert!(lhs.equals(&rhs).unwrap());
        let adj = amp_endofunctor(&rho, &a.adjoint()).unwrap();
        prop_assert!(adj.equals(&amp_endofunctor(&rho, &a).unwrap().adjoint()).unwrap());
        let id = CuntzMatrix::identity(n, 2);
        prop_assert!(amp_endofunctor(&rho, &id).unwrap().equals(&id).unwrap());
    }

    #[test]
    fn float_coefficients_agree_with_exact((_n, a, b, _c) in triple()) {
        let exact = a.multiply(&b).unwrap().to_float();
        let float = a.to_float().multiply(&b.to_float()).unwrap();
        prop_assert!(exact.equals(&float).unwrap());
    }
}
