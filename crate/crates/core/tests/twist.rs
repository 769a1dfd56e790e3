use std::sync::Arc;

use cqh_core::comodule::{verify_comodule_algebra, Coaction, ComoduleAlgebra};
use cqh_core::coquasi::{verify_all, CoquasiHopf};
use cqh_core::exactlin::{Field, LinMap};
use cqh_core::fixtures::{cayley_fixture, cayley_signs, cq_z2, h4_twisted, hopf_z2, oct, sweedler_h4};
use cqh_core::twist::{
    compute_drinfeld_twist, drinfeld_twist, monoidal_iso_check, twist_bialgebra, twist_comodule_algebra, twisted_associator_of_f,
    verify_gauge_twist, GaugeTwist, DRINFELD_IDENTITIES, UL_READINGS,
};
use cqh_core::CheckReport;
use proptest::prelude::*;

const Q: Field = Field::Rational;

fn assert_clean(name: &str, report: &CheckReport) {
    assert!(report.all_pass(), "{name}:\n{report}");
}

/// Cayley-Dickson doubling `(a,b)(c,d) = (ac − d̄b, da + bc̄)` on integer coordinates.
fn doubling_mul(a: &[i64], b: &[i64]) -> Vec<i64> {
    if a.len() == 1 {
        return vec![a[0] * b[0]];
    }
    let h = a.len() / 2;
    let conj = |v: &[i64]| -> Vec<i64> { v.iter().enumerate().map(|(i, &c)| if i == 0 { c } else { -c }).collect() };
    let (a1, a2, b1, b2) = (&a[..h], &a[h..], &b[..h], &b[h..]);
    let lo: Vec<i64> = doubling_mul(a1, b1).iter().zip(doubling_mul(&conj(b2), a2)).map(|(x, y)| x - y).collect();
    let hi: Vec<i64> = doubling_mul(b2, a1).iter().zip(doubling_mul(a2, &conj(b1))).map(|(x, y)| x + y).collect();
    lo.into_iter().chain(hi).collect()
}

fn doubling_sign(n: u32, x: usize, y: usize) -> i64 {
    let size = 1usize << n;
    let mut ex = vec![0; size];
    let mut ey = vec![0; size];
    ex[x] = 1;
    ey[y] = 1;
    let p = doubling_mul(&ex, &ey);
    let support: Vec<usize> = (0..size).filter(|&k| p[k] != 0).collect();
    assert_eq!(support, vec![x ^ y]);
    p[x ^ y]
}

#[test]
#[allow(clippy::needless_range_loop)]
fn shipped_sign_tables_match_an_independent_doubling() {
    for n in 1..=3 {
        let signs = cayley_signs(n).unwrap();
        for x in 0..1usize << n {
            for y in 0..1usize << n {
                assert_eq!(signs[x][y], doubling_sign(n, x, y), "n={n} x={x} y={y}");
            }
        }
    }
    assert!(cayley_signs(4).is_err());
}

#[test]
fn twisted_group_algebra_multiplies_by_signs() {
    for n in 1..=3 {
        let fx = cayley_fixture(n, Q).unwrap();
        let a = &fx.twisted_algebra;
        for x in 0..1usize << n {
            for y in 0..1usize << n {
                assert_eq!(a.mul_basis(x, y), &vec![(x ^ y, Q.int(doubling_sign(n, x, y)))]);
            }
        }
    }
}

#[test]
fn octonion_host_and_algebra_pass_all_axioms() {
    let fx = oct(Q).unwrap();
    assert_clean("twist", &verify_gauge_twist(fx.host.bialgebra(), &fx.twist));
    assert_clean("oct host", &verify_all(&fx.twisted_host));
    assert_clean("oct algebra", &verify_comodule_algebra(&fx.twisted_algebra));
}

#[test]
fn octonions_are_not_associative_but_quaternions_are() {
    let assoc_defect = |a: &ComoduleAlgebra| {
        let d = a.dim();
        (0..d).flat_map(|x| (0..d).flat_map(move |y| (0..d).map(move |z| (x, y, z)))).find(|&(x, y, z)| {
            let left = a.mul(a.mul_basis(x, y), &a.basis(z));
            let right = a.mul(&a.basis(x), a.mul_basis(y, z));
            left != right
        })
    };
    let oct_algebra = oct(Q).unwrap().twisted_algebra;
    let (x, y, z) = assoc_defect(&oct_algebra).expect("octonions are non-associative");
    assert_eq!(oct_algebra.mul(oct_algebra.mul_basis(x, y), &oct_algebra.basis(z)).len(), 1);
    assert!(assoc_defect(&cayley_fixture(2, Q).unwrap().twisted_algebra).is_none());
    let host = oct(Q).unwrap().twisted_host;
    let nontrivial = (0..8).any(|x| (0..8).any(|y| (0..8).any(|z| !host.omega_at(x, y, z).is_one())));
    assert!(nontrivial);
}

#[test]
fn octonion_reassociator_matches_coboundary_of_signs() {
    let fx = oct(Q).unwrap();
    let s = cayley_signs(3).unwrap();
    for (x, y, z) in (0..8).flat_map(|x| (0..8).flat_map(move |y| (0..8).map(move |z| (x, y, z)))) {
        let cob = s[y][z] * s[x][y ^ z] * s[x ^ y][z] * s[x][y];
        assert_eq!(fx.twisted_host.omega_at(x, y, z), &Q.int(cob), "({x},{y},{z})");
    }
}

#[test]
fn twisting_back_recovers_the_original() {
    let h4 = h4_twisted(Q).unwrap();
    let oct_fx = oct(Q).unwrap();
    for (name, host, twist, twisted_host, algebra, twisted_algebra) in [
        ("h4", &h4.host, &h4.twist, &h4.twisted_host, &h4.algebra, &h4.twisted_algebra),
        ("oct", &oct_fx.host, &oct_fx.twist, &oct_fx.twisted_host, &oct_fx.algebra, &oct_fx.twisted_algebra),
    ] {
        let back = twist_bialgebra(twisted_host, &twist.inverse()).unwrap();
        assert_eq!(&back, host.as_ref(), "{name} host");
        let back_alg = twist_comodule_algebra(twisted_algebra, &twist.inverse(), Arc::new(back)).unwrap();
        assert!(back_alg.mult().same_matrix(algebra.mult()), "{name} algebra");
    }
}

#[test]
fn generic_h4_twist_has_nontrivial_reassociator_and_passes_axioms() {
    let fx = h4_twisted(Q).unwrap();
    assert_clean("h4 twisted", &verify_all(&fx.twisted_host));
    assert_clean("h4 twisted algebra", &verify_comodule_algebra(&fx.twisted_algebra));
    let h = &fx.twisted_host;
    assert!((0..4).any(|x| (0..4).any(|y| (0..4).any(|z| *h.omega_at(x, y, z) != h.counit_at(x).clone() * h.counit_at(y) * h.counit_at(z)))));
}

#[test]
fn trivial_twist_is_the_identity() {
    let h = sweedler_h4(Q).unwrap();
    let t = GaugeTwist::trivial(h.bialgebra());
    assert_eq!(twist_bialgebra(&h, &t).unwrap(), h);
}

#[test]
fn non_invertible_twist_is_rejected() {
    let h = hopf_z2(Q);
    let zero = LinMap::functional(h.space().power(2), Q, vec![Q.zero(); 4]);
    assert!(matches!(GaugeTwist::new(h.bialgebra(), zero), Err(cqh_core::Error::UNotConvolutionInvertible)));
}

#[test]
fn unnormalized_twist_is_rejected() {
    let h = hopf_z2(Q);
    let vals = vec![Q.int(2), Q.one(), Q.one(), Q.one()];
    assert!(GaugeTwist::new(h.bialgebra(), LinMap::functional(h.space().power(2), Q, vals)).is_err());
}

fn regular_coaction(h: &CoquasiHopf) -> Coaction {
    Coaction::new(h.comult().clone(), h.dim()).unwrap()
}

#[test]
fn gauge_iso_is_colinear_and_monoidal() {
    for (name, host, twist, twisted) in [
        ("oct", oct(Q).unwrap().host, oct(Q).unwrap().twist, oct(Q).unwrap().twisted_host),
        ("h4", h4_twisted(Q).unwrap().host, h4_twisted(Q).unwrap().twist, h4_twisted(Q).unwrap().twisted_host),
    ] {
        let u = regular_coaction(&twisted);
        let report = monoidal_iso_check(&host, &twisted, &twist, &u, &u, &u).unwrap();
        assert_clean(name, &report);
    }
}

#[test]
fn drinfeld_identities_hold_on_group_fixtures() {
    for (name, h) in [("hopf_z2", hopf_z2(Q)), ("cq_z2", cq_z2(Q)), ("oct", (*oct(Q).unwrap().twisted_host).clone())] {
        let data = drinfeld_twist(&h).unwrap();
        for id in DRINFELD_IDENTITIES {
            assert!(data.report.passed(id), "{name}: {id}\n{}", data.report);
        }
        assert_clean(&format!("{name} associator"), &twisted_associator_of_f(&h).unwrap());
    }
}

#[test]
fn drinfeld_identities_on_twisted_h4() {
    let fx = h4_twisted(Q).unwrap();
    let data = compute_drinfeld_twist(&fx.twisted_host).unwrap();
    let held: Vec<&str> = UL_READINGS.iter().filter(|(_, _, n)| data.report.passed(n)).map(|(_, _, n)| *n).collect();
    for id in DRINFELD_IDENTITIES.iter().filter(|id| **id != "relatie UL pR h") {
        assert!(data.report.passed(id), "{id}\n{}", data.report);
    }
    assert_eq!(held, vec![UL_READINGS.iter().find(|(l, r, _)| *l && *r).unwrap().2]);
    assert!(data.report.passed("relatie UL pR h"));
    assert_clean("h4 associator", &twisted_associator_of_f(&fx.twisted_host).unwrap());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn random_twists_of_z2_stay_coquasi_hopf(v in prop::sample::select(vec![-3i64, -2, -1, 1, 2, 3, 5])) {
        let h = hopf_z2(Q);
        let vals = vec![Q.one(), Q.one(), Q.one(), Q.int(v)];
        let t = GaugeTwist::new(h.bialgebra(), LinMap::functional(h.space().power(2), Q, vals)).unwrap();
        let twisted = twist_bialgebra(&h, &t).unwrap();
        prop_assert!(verify_all(&twisted).all_pass());
        let a = Arc::new(ComoduleAlgebra::regular(Arc::new(h.clone())));
        let at = twist_comodule_algebra(&a, &t, Arc::new(twisted.clone())).unwrap();
        prop_assert!(verify_comodule_algebra(&at).all_pass());
        let back = twist_bialgebra(&twisted, &t.inverse()).unwrap();
        prop_assert_eq!(back, h);
    }

    #[test]
    fn random_h4_twists_compose(a in 1i64..6, b in -4i64..5, c in -4i64..5) {
        let h = sweedler_h4(Q).unwrap();
        let mut vals = vec![Q.zero(); 16];
        for i in 0..4 {
            vals[i] = h.counit_at(i).clone();
            vals[i * 4] = h.counit_at(i).clone();
        }
        vals[5] = Q.int(a);
        vals[2 * 4 + 3] = Q.int(b);
        vals[3 * 4 + 2] = Q.int(c);
        let t = GaugeTwist::new(h.bialgebra(), LinMap::functional(h.space().power(2), Q, vals)).unwrap();
        let twisted = twist_bialgebra(&h, &t).unwrap();
        prop_assert!(verify_all(&twisted).all_pass());
        prop_assert_eq!(twist_bialgebra(&twisted, &t.inverse()).unwrap(), h);
    }
}
