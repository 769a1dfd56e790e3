use std::sync::Arc;

use cqh_core::comodule::{ComoduleAlgebra, RelHopfModule, Side};
use cqh_core::exactlin::{Field, LinMap};
use cqh_core::fixtures::{cayley_fixture, cayley_twist, cq_dual, h4_twisted, mat_z2, notsg, oct, self_z2};
use cqh_core::galois::{
    build_can, build_can_prime, can_m, change_antipode_compat, cleft_change_antipode, cleft_counit_inverse, cleft_from_galois_nb,
    colinear_splitting_search, epsilon_is_twisted_can, inversecleaving_implied, normal_basis_from_cleft, normal_basis_search,
    splitting_counit_inverse, strongly_graded_check, theorem_big_battery, translation_map, twist_invariance, verify_cleft, CleftData,
    Flatness, Verdict, XiReading, CAN_PRIME_IDENTITIES, CHANGE_ANTIPODE_READINGS, XI_INVERSE_DISPLAYED,
};
use cqh_core::twist::GaugeTwist;
use cqh_core::{CheckReport, Error};
use proptest::prelude::*;

const Q: Field = Field::Rational;

fn assert_clean(name: &str, report: &CheckReport) {
    assert!(report.all_pass(), "{name}:\n{report}");
}

fn galois_fixtures() -> Vec<(&'static str, Arc<ComoduleAlgebra>)> {
    vec![("self", self_z2(Q)), ("mat", mat_z2(Q)), ("oct", oct(Q).unwrap().twisted_algebra), ("h4", h4_twisted(Q).unwrap().twisted_algebra)]
}

#[test]
fn galois_ranks() {
    let expect = [("self", 4, 4), ("mat", 8, 8), ("oct", 64, 64)];
    for ((name, a), (_, src, tgt)) in galois_fixtures().into_iter().zip(expect) {
        let g = build_can(&a);
        assert_clean(name, &g.report);
        assert_eq!((g.rank, g.source_dim(), g.target_dim()), (src, src, tgt), "{name}");
        assert_eq!(g.verdict, Verdict::Galois, "{name}");
    }
    let g = build_can(&notsg(Q));
    assert_clean("notsg", &g.report);
    assert_eq!(g.verdict, Verdict::NotGalois { rank: 2, corank: 2 });
    assert!(g.can_inverse.is_none());
    let g = build_can(&cq_dual(Q));
    assert_clean("cq_dual", &g.report);
    assert!(!g.verdict.is_galois());
}

#[test]
fn self_can_sends_e_g_to_g_g() {
    let a = self_z2(Q);
    let g = build_can(&a);
    assert_eq!(g.lifted.column(1), cqh_core::exactlin::unit_vector(Q, 4, 3));
    assert_eq!(g.lifted.column(0), cqh_core::exactlin::unit_vector(Q, 4, 0));
}

#[test]
fn change_of_antipode_factors_through_psi_inverse() {
    let fx = oct(Q).unwrap();
    let u = LinMap::functional(fx.twisted_host.space().clone(), Q, (1..=8).map(|k| Q.int(if k % 2 == 0 { k } else { -k })).collect());
    let r = change_antipode_compat(&fx.twisted_algebra, &u).unwrap();
    assert!(r.passed("change antipode galois"), "{r}");
    assert!(r.passed(CHANGE_ANTIPODE_READINGS[1]));
    assert!(!r.passed(CHANGE_ANTIPODE_READINGS[0]), "ψ_U should differ from ψ_U⁻¹ for this U");
    assert!(r.passed("change antipode verdicts agree"));
}

#[test]
fn change_of_antipode_rejects_non_invertible_u() {
    let a = self_z2(Q);
    let u = LinMap::functional(a.host().space().clone(), Q, vec![Q.zero(), Q.one()]);
    assert!(matches!(change_antipode_compat(&a, &u), Err(Error::UNotConvolutionInvertible)));
}

#[test]
fn can_prime_matches_xi_with_last_leg() {
    for (name, a) in galois_fixtures() {
        let g = build_can(&a);
        let cp = build_can_prime(&g).unwrap();
        for id in CAN_PRIME_IDENTITIES {
            assert!(cp.report.passed(id), "{name}: {id}\n{}", cp.report);
        }
        assert!(cp.report.passed("can prime bijective iff can bijective"));
    }
    let h4 = h4_twisted(Q).unwrap();
    let cp = build_can_prime(&build_can(&h4.twisted_algebra)).unwrap();
    for reading in [XiReading::Printed, XiReading::LastLeg] {
        assert!(!cp.report.passed(reading.check_name()), "{reading:?} should be discriminated on H4τ");
    }
    assert!(!cp.report.passed(XI_INVERSE_DISPLAYED));
    let oct_cp = build_can_prime(&build_can(&oct(Q).unwrap().twisted_algebra)).unwrap();
    assert!(oct_cp.report.passed(XiReading::LastLeg.check_name()));
}

#[test]
fn twist_invariance_on_cayley_algebras() {
    for n in 1..=3 {
        let fx = cayley_fixture(n, Q).unwrap();
        let t = cayley_twist(n, Q).unwrap();
        assert_clean(&format!("n={n}"), &twist_invariance(&fx.algebra, &t).unwrap());
        let trivial = GaugeTwist::trivial(fx.twisted_host.bialgebra());
        assert_clean(&format!("trivial n={n}"), &twist_invariance(&fx.twisted_algebra, &trivial).unwrap());
    }
    let h4 = h4_twisted(Q).unwrap();
    assert_clean("h4", &twist_invariance(&h4.algebra, &h4.twist).unwrap());
    let wrong = cayley_twist(1, Q).unwrap();
    assert!(matches!(twist_invariance(&oct(Q).unwrap().algebra, &wrong), Err(Error::HostMismatch(_))));
}

#[test]
fn counit_on_a_tensor_h_is_twisted_can() {
    for (name, a) in galois_fixtures().into_iter().take(3) {
        let r = epsilon_is_twisted_can(&build_can(&a)).unwrap();
        assert_clean(name, &r);
    }
}

#[test]
fn translation_map_identities() {
    for (name, a) in galois_fixtures() {
        let t = translation_map(&build_can(&a)).unwrap();
        assert_clean(name, &t.report);
    }
    assert!(matches!(translation_map(&build_can(&notsg(Q))), Err(Error::NotGalois { rank: 2, corank: 2 })));
}

#[test]
fn can_m_bijective_on_regular_modules() {
    for (name, a) in galois_fixtures() {
        let g = build_can(&a);
        let m = RelHopfModule::regular(a.clone(), Side::Right);
        let c = can_m(&m, &g).unwrap();
        assert_clean(name, &c.report);
        assert!(c.map.is_bijective());
    }
    let a = notsg(Q);
    let c = can_m(&RelHopfModule::regular(a.clone(), Side::Right), &build_can(&a)).unwrap();
    assert!(c.report.passed("can_M factorization"));
    assert!(!c.map.is_bijective());
}

#[test]
fn cleft_pipeline_round_trips() {
    for (name, a) in galois_fixtures().into_iter().take(3) {
        let g = build_can(&a);
        let search = normal_basis_search(&a, 0);
        let nb = search.data.unwrap_or_else(|| panic!("{name}: no normal basis"));
        assert_clean(name, &nb.report);
        let cleft = cleft_from_galois_nb(&g, &nb).unwrap();
        assert_clean(name, &verify_cleft(&cleft));
        assert_eq!(inversecleaving_implied(&a, &cleft.gamma), Some(true), "{name}");
        let back = normal_basis_from_cleft(&cleft).unwrap();
        assert_clean(name, &back.report);
        let base = g.base.clone();
        let m = cqh_core::comodule::induced_action_on_ah(&a).unwrap().module;
        assert_clean(name, &cleft_counit_inverse(&cleft, &m, &base).unwrap());
    }
}

#[test]
fn notsg_is_neither_cleft_nor_normal_basis() {
    let a = notsg(Q);
    let search = normal_basis_search(&a, 0);
    assert!(search.data.is_none() && !search.inconclusive);
    let g = build_can(&a);
    assert!(!g.verdict.is_galois());
    let gamma = LinMap::from_columns(a.host().space().clone(), a.space().clone(), Q, |_| a.one().clone());
    let cleft = CleftData { algebra: a.clone(), gamma: gamma.clone(), delta: gamma };
    assert!(!verify_cleft(&cleft).all_pass());
}

#[test]
fn cleft_under_change_of_antipode() {
    let a = mat_z2(Q);
    let g = build_can(&a);
    let cleft = cleft_from_galois_nb(&g, &normal_basis_search(&a, 0).data.unwrap()).unwrap();
    let u = LinMap::functional(a.host().space().clone(), Q, vec![Q.int(2), Q.int(-3)]);
    let changed = cleft_change_antipode(&cleft, &u).unwrap();
    assert_clean("changed", &verify_cleft(&changed));
}

#[test]
fn bad_normal_basis_is_rejected() {
    let a = mat_z2(Q);
    let g = build_can(&a);
    let mut nb = normal_basis_search(&a, 0).data.unwrap();
    nb.nu_inverse = nb.nu_inverse.add(&nb.nu_inverse).unwrap();
    assert!(matches!(cleft_from_galois_nb(&g, &nb), Err(Error::NormalBasisInvalid(_))));
}

#[test]
fn normal_basis_search_is_deterministic() {
    let a = oct(Q).unwrap().twisted_algebra;
    let x = normal_basis_search(&a, 7).data.unwrap();
    let y = normal_basis_search(&a, 7).data.unwrap();
    assert!(x.nu.same_matrix(&y.nu));
}

#[test]
fn colinear_splittings() {
    for (name, a) in galois_fixtures() {
        let g = build_can(&a);
        let s = colinear_splitting_search(&g).unwrap();
        assert_clean(name, &s.report);
        let m = RelHopfModule::regular(a.clone(), Side::Right);
        assert_clean(name, &splitting_counit_inverse(&s, &m, &g.base).unwrap());
    }
    assert!(matches!(colinear_splitting_search(&build_can(&notsg(Q))), Err(Error::CanNotSurjective)));
}

#[test]
fn strongly_graded_agrees_with_galois() {
    for (name, a) in [("mat", mat_z2(Q)), ("oct", oct(Q).unwrap().twisted_algebra), ("notsg", notsg(Q))] {
        assert_clean(name, &strongly_graded_check(&a).unwrap());
    }
    assert!(matches!(strongly_graded_check(&h4_twisted(Q).unwrap().twisted_algebra), Err(Error::HostNotGroupAlgebra)));
}

#[test]
fn structure_theorem_battery() {
    for (name, a) in galois_fixtures() {
        let r = theorem_big_battery(&a, 0).unwrap();
        assert_clean(name, &r.report);
        assert!(r.condition_1 && r.condition_2_proxy, "{name}");
        assert_eq!(r.condition_4, Some(true), "{name}");
    }
    let r = theorem_big_battery(&notsg(Q), 0).unwrap();
    assert_clean("notsg", &r.report);
    assert!(r.total_integral && !r.can_surjective && !r.condition_1);
    assert_eq!(r.flatness, Flatness::Undetermined);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn antipode_change_on_mat(u0 in prop::sample::select(vec![-3i64, -1, 1, 2, 5]), u1 in prop::sample::select(vec![-2i64, -1, 1, 3])) {
        let a = mat_z2(Q);
        let u = LinMap::functional(a.host().space().clone(), Q, vec![Q.int(u0), Q.int(u1)]);
        let r = change_antipode_compat(&a, &u).unwrap();
        prop_assert!(r.passed("change antipode galois"));
    }

    #[test]
    fn splitting_search_on_seeded_fixtures(seed in 0u64..1000) {
        let a = mat_z2(Q);
        let nb = normal_basis_search(&a, seed).data.unwrap();
        prop_assert!(nb.report.all_pass());
    }
}
