use std::sync::Arc;

use cqh_core::bialgebroid::{
    build_l, coinvariants_l_action, equivalence_round_trip, induced_left_action, lemma_iso, tensor_over_a, unit_constraint,
    verify_l_module, verify_two_sided, BialgebroidL, LModule, TwoSidedModule,
};
use cqh_core::comodule::{BModule, ComoduleAlgebra, RelHopfModule, Side};
use cqh_core::exactlin::{Field, LinMap};
use cqh_core::fixtures::{h4_twisted, mat_z2, notsg, oct, self_z2};
use cqh_core::galois::build_can;
use cqh_core::{CheckReport, Error};
use proptest::prelude::*;

const Q: Field = Field::Rational;

fn assert_clean(name: &str, report: &CheckReport) {
    assert!(report.all_pass(), "{name}:\n{report}");
}

fn oct_algebra() -> Arc<ComoduleAlgebra> {
    oct(Q).unwrap().twisted_algebra
}

fn regular_l(l: &Arc<BialgebroidL>) -> LModule {
    LModule::new(l.clone(), l.carrier.space.clone(), l.mult.clone()).unwrap()
}

/// `Σ_g dim A_g · dim A_{g⁻¹}` for the graded fixtures.
fn graded_l_dim(a: &ComoduleAlgebra) -> usize {
    let h = a.host();
    let mut degree_dims = vec![0usize; h.dim()];
    for i in 0..a.dim() {
        let co = a.coact(i);
        assert_eq!(co.len(), 1, "homogeneous basis expected");
        degree_dims[co[0].1] += 1;
    }
    (0..h.dim())
        .map(|g| {
            let inv = (0..h.dim()).find(|&k| h.mul_basis(g, k).iter().any(|(i, c)| *i == 0 && !c.is_zero())).unwrap();
            degree_dims[g] * degree_dims[inv]
        })
        .sum()
}

#[test]
fn l_dimensions_and_axioms() {
    for (name, a, dim) in [("self", self_z2(Q), 2), ("mat", mat_z2(Q), 8), ("oct", oct_algebra(), 8), ("notsg", notsg(Q), 4)] {
        let l = build_l(&a);
        assert_clean(name, &l.report);
        assert_eq!(l.dim(), dim, "{name}");
        assert_eq!(l.dim(), graded_l_dim(&a), "{name}");
    }
    let h4 = build_l(&h4_twisted(Q).unwrap().twisted_algebra);
    assert_clean("h4", &h4.report);
    assert_eq!(h4.dim(), 4);
}

#[test]
fn self_l_square_of_g_is_unit() {
    let a = self_z2(Q);
    let l = build_l(&a);
    let gg = l.coordinates(&[Q.zero(), Q.zero(), Q.zero(), Q.one()]).expect("g⊗g is coinvariant");
    assert_eq!(l.mul(&gg, &gg), l.unit);
}

#[test]
fn regular_modules_are_two_sided() {
    for (name, a) in [("self", self_z2(Q)), ("mat", mat_z2(Q)), ("oct", oct_algebra()), ("h4", h4_twisted(Q).unwrap().twisted_algebra)] {
        assert_clean(name, &verify_two_sided(&TwoSidedModule::regular(a)));
    }
}

#[test]
fn broken_left_action_is_rejected() {
    let a = mat_z2(Q);
    let l = Arc::new(build_l(&a));
    let mut m = TwoSidedModule::regular(a.clone());
    m.left = m.left.add(&m.left).unwrap();
    assert!(matches!(coinvariants_l_action(&l, &m), Err(Error::ModuleNotTwoSided(_))));
}

#[test]
fn a_over_a_is_unit_for_the_tensor() {
    for (name, a) in [("self", self_z2(Q)), ("oct", oct_algebra()), ("h4", h4_twisted(Q).unwrap().twisted_algebra)] {
        assert_clean(name, &unit_constraint(&a).unwrap());
    }
}

#[test]
fn tensor_requires_matching_sides_and_algebra() {
    let a = self_z2(Q);
    let right = RelHopfModule::regular(a.clone(), Side::Right);
    assert!(matches!(tensor_over_a(&right, &right), Err(Error::InvalidStructure(_))));
    let other = RelHopfModule::regular(mat_z2(Q), Side::Left);
    assert!(matches!(tensor_over_a(&right, &other), Err(Error::HostMismatch(_))));
}

#[test]
fn lemma_iso_on_oct_ground_module() {
    let a = oct_algebra();
    let g = build_can(&a);
    let k = BModule::ground(g.base.clone()).unwrap();
    let left = RelHopfModule::regular(a.clone(), Side::Left);
    let r = lemma_iso(&k, &left).unwrap();
    assert_clean("oct", &r);
    let induced = cqh_core::comodule::induce_module(&k, &a).unwrap();
    assert_eq!(tensor_over_a(&induced.module, &left).unwrap().dim(), 8);
}

#[test]
fn lemma_iso_on_mat_base() {
    let a = mat_z2(Q);
    let g = build_can(&a);
    let left = RelHopfModule::regular(a.clone(), Side::Left);
    assert_clean("mat B", &lemma_iso(&BModule::regular(g.base.clone()), &left).unwrap());
    assert_clean("mat B²", &lemma_iso(&BModule::free(g.base.clone(), 2), &left).unwrap());
}

#[test]
fn zero_module_tensors_to_zero() {
    let a = oct_algebra();
    let g = build_can(&a);
    let zero = BModule::free(g.base.clone(), 0);
    let induced = cqh_core::comodule::induce_module(&zero, &a).unwrap();
    let t = tensor_over_a(&induced.module, &RelHopfModule::regular(a, Side::Left)).unwrap();
    assert_eq!(t.dim(), 0);
}

#[test]
fn coinvariants_of_regular_are_an_l_module() {
    for (name, a) in [("self", self_z2(Q)), ("mat", mat_z2(Q)), ("oct", oct_algebra())] {
        let l = Arc::new(build_l(&a));
        let c = coinvariants_l_action(&l, &TwoSidedModule::regular(a.clone())).unwrap();
        assert_clean(name, &c.report);
        assert_eq!(c.subspace.dim(), l.base.dim(), "{name}");
    }
}

#[test]
fn induced_left_action_is_two_sided() {
    for (name, a) in [("self", self_z2(Q)), ("mat", mat_z2(Q)), ("oct", oct_algebra()), ("h4", h4_twisted(Q).unwrap().twisted_algebra)] {
        let l = Arc::new(build_l(&a));
        let g = build_can(&a);
        let n = coinvariants_l_action(&l, &TwoSidedModule::regular(a.clone())).unwrap().module;
        let induced = induced_left_action(&g, &l, &n).unwrap();
        assert_clean(name, &induced.report);
        assert_eq!(induced.module.dim(), a.dim(), "{name}");
    }
}

#[test]
fn equivalence_round_trip_oct() {
    let a = oct_algebra();
    let l = Arc::new(build_l(&a));
    let g = build_can(&a);
    let k = coinvariants_l_action(&l, &TwoSidedModule::regular(a.clone())).unwrap().module;
    assert_eq!(k.dim(), 1);
    assert_clean("oct L", &verify_l_module(&regular_l(&l)));
    let r = equivalence_round_trip(&l, &g, &[k, regular_l(&l)], &[TwoSidedModule::regular(a.clone())]).unwrap();
    assert_clean("oct", &r);
}

#[test]
fn equivalence_round_trip_mat() {
    let a = mat_z2(Q);
    let l = Arc::new(build_l(&a));
    let g = build_can(&a);
    let b = coinvariants_l_action(&l, &TwoSidedModule::regular(a.clone())).unwrap().module;
    assert_eq!(b.dim(), 2);
    let r = equivalence_round_trip(&l, &g, &[b, regular_l(&l)], &[TwoSidedModule::regular(a.clone())]).unwrap();
    assert_clean("mat", &r);
}

#[test]
fn equivalence_round_trip_h4() {
    let a = h4_twisted(Q).unwrap().twisted_algebra;
    let l = Arc::new(build_l(&a));
    let g = build_can(&a);
    let r = equivalence_round_trip(&l, &g, &[regular_l(&l)], &[TwoSidedModule::regular(a.clone())]).unwrap();
    assert_clean("h4", &r);
}

#[test]
fn induced_action_needs_galois() {
    let a = notsg(Q);
    let l = Arc::new(build_l(&a));
    let g = build_can(&a);
    let n = regular_l(&l);
    assert!(matches!(induced_left_action(&g, &l, &n), Err(Error::NotGalois { .. })));
}

#[test]
fn l_module_shape_is_checked() {
    let l = Arc::new(build_l(&self_z2(Q)));
    let bad = LinMap::zero(l.carrier.space.clone(), l.carrier.space.clone(), Q);
    assert!(matches!(LModule::new(l.clone(), l.carrier.space.clone(), bad), Err(Error::DimensionMismatch(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn oct_l_product_is_associative(x in prop::collection::vec(-3i64..4, 8), y in prop::collection::vec(-3i64..4, 8), z in prop::collection::vec(-3i64..4, 8)) {
        let l = build_l(&oct_algebra());
        let v = |c: &[i64]| c.iter().map(|&n| Q.int(n)).collect::<Vec<_>>();
        let (x, y, z) = (v(&x), v(&y), v(&z));
        prop_assert_eq!(l.mul(&l.mul(&x, &y), &z), l.mul(&x, &l.mul(&y, &z)));
    }
}
