use std::sync::Arc;

use cqh_core::comodule::{RelHopfModule, Side};
use cqh_core::coquasi::CoquasiHopf;
use cqh_core::cqhfile::{emit_cqh, parse_cqh, CqhDocument, Kind};
use cqh_core::exactlin::{BasedSpace, Field, LinMap};
use cqh_core::fixtures::{cayley_twist, cq_dual, cq_z2, h4_twisted, hopf_z2, mat_z2, notsg, oct, self_z2, sweedler_h4};
use cqh_core::Error;
use proptest::prelude::*;

const Q: Field = Field::Rational;

fn hosts() -> Vec<(&'static str, CoquasiHopf)> {
    let o = oct(Q).unwrap();
    let h4 = h4_twisted(Q).unwrap();
    vec![
        ("hopf_z2", hopf_z2(Q)),
        ("cq_z2", cq_z2(Q)),
        ("cq_z2 mod 7", cq_z2(Field::prime(7).unwrap())),
        ("h4", sweedler_h4(Q).unwrap()),
        ("h4 twisted", (*h4.twisted_host).clone()),
        ("oct host", (*o.twisted_host).clone()),
    ]
}

fn round_trip(doc: &CqhDocument) -> CqhDocument {
    let text = emit_cqh(doc);
    let back = parse_cqh(&text).unwrap();
    assert_eq!(emit_cqh(&back), text, "emit∘parse is not the identity");
    back
}

#[test]
fn hosts_round_trip() {
    for (name, h) in hosts() {
        let back = round_trip(&CqhDocument::from_coquasi_hopf(&h)).to_coquasi_hopf().unwrap();
        assert_eq!(back, h, "{name}");
    }
}

#[test]
fn algebras_round_trip() {
    let algebras = [self_z2(Q), mat_z2(Q), notsg(Q), cq_dual(Q), oct(Q).unwrap().twisted_algebra, h4_twisted(Q).unwrap().twisted_algebra];
    for a in algebras {
        let back = round_trip(&CqhDocument::from_algebra(&a)).to_algebra(a.host().clone()).unwrap();
        assert_eq!(back, *a);
    }
}

#[test]
fn modules_round_trip() {
    let a = mat_z2(Q);
    for side in [Side::Right, Side::Left] {
        let m = RelHopfModule::regular(a.clone(), side);
        let back = round_trip(&CqhDocument::from_module(&m)).to_module(a.clone()).unwrap();
        assert_eq!(back.side(), side);
        assert!(back.action().same_matrix(m.action()) && back.coaction().same_matrix(m.coaction()));
    }
}

#[test]
fn twists_and_maps_round_trip() {
    let host = oct(Q).unwrap().host;
    let t = cayley_twist(3, Q).unwrap();
    let back = round_trip(&CqhDocument::from_twist(&t, &host)).to_twist(&host).unwrap();
    assert_eq!(back, t);
    let h4 = h4_twisted(Q).unwrap();
    assert_eq!(round_trip(&CqhDocument::from_twist(&h4.twist, &h4.host)).to_twist(&h4.host).unwrap(), h4.twist);
    let map = LinMap::from_rows(BasedSpace::numbered("x", 2), BasedSpace::numbered("y", 3), Q, &[
        vec![Q.one(), Q.zero()],
        vec![Q.ratio(-2, 3).unwrap(), Q.int(4)],
        vec![Q.zero(), Q.zero()],
    ])
    .unwrap();
    assert!(round_trip(&CqhDocument::from_linmap(&map)).to_linmap().unwrap().same_matrix(&map));
}

#[test]
fn omega_inverse_is_computed_when_absent() {
    let h = cq_z2(Q);
    let mut doc = CqhDocument::from_coquasi_hopf(&h);
    doc.entries.remove(&cqh_core::cqhfile::Tag::OmegaInv);
    let text = emit_cqh(&doc);
    assert!(text.contains("omega 2 2 2 -1") && !text.contains("omegainv"));
    let back = parse_cqh(&text).unwrap().to_coquasi_hopf().unwrap();
    assert!(back.omega_inv().same_matrix(h.omega_inv()));
}

#[test]
fn cq_z2_file_text() {
    let text = emit_cqh(&CqhDocument::from_coquasi_hopf(&cq_z2(Q)));
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(&lines[..3], &["field Q", "kind coquasihopf", "dim 2"]);
    assert!(lines.contains(&"beta 2 -1"));
    assert!(lines.contains(&"m 2 2 1 1"));
    assert_eq!(lines.last(), Some(&"end"));
}

#[test]
fn truncated_input_is_rejected() {
    let text = emit_cqh(&CqhDocument::from_coquasi_hopf(&hopf_z2(Q)));
    let cut = &text[..text.len() / 2];
    assert!(matches!(parse_cqh(cut), Err(Error::ParseError { .. })));
    let cut_mid_line = &text[..text.find("delta").unwrap() + 8];
    assert!(matches!(parse_cqh(cut_mid_line), Err(Error::ParseError { .. })));
}

#[test]
fn diagnostics_carry_line_and_column() {
    let bad = "field Q\nkind twist\ndim 2\ntau 1 1 x/2\nend\n";
    assert_eq!(parse_cqh(bad).unwrap_err(), Error::ParseError { line: 4, col: 9, reason: "bad integer `x`".into() });
    let bad = "field Q\nkind twist\ndim 2\ntau 0 1 1\nend\n";
    assert!(matches!(parse_cqh(bad), Err(Error::ParseError { line: 4, col: 5, .. })));
    let bad = "field Q\nkind twist\ndim 2\nrho 1 1 1 1\nend\n";
    assert!(matches!(parse_cqh(bad), Err(Error::ParseError { .. })));
    let bad = "field F 6\n";
    assert!(matches!(parse_cqh(bad), Err(Error::ParseError { line: 1, col: 9, .. })));
    let bad = "field Q\nkind twist\ndim 1\ntau 1 1 1\ntau 1 1 1\nend\n";
    assert!(matches!(parse_cqh(bad), Err(Error::ParseError { line: 5, .. })));
}

#[test]
fn kind_mismatch_and_field_mismatch() {
    let doc = parse_cqh(&emit_cqh(&CqhDocument::from_coquasi_hopf(&hopf_z2(Q)))).unwrap();
    assert_eq!(doc.kind, Kind::CoquasiHopf);
    assert!(matches!(doc.to_linmap(), Err(Error::InvalidStructure(_))));
    let a = CqhDocument::from_algebra(&self_z2(Q));
    let other = Arc::new(hopf_z2(Field::prime(3).unwrap()));
    assert!(matches!(a.to_algebra(other), Err(Error::FieldMismatch)));
}

proptest! {
    #[test]
    fn random_maps_round_trip(entries in prop::collection::vec((0usize..4, 0usize..3, -9i64..10, 1i64..5), 0..12)) {
        let mut rows = vec![vec![Q.zero(); 4]; 3];
        for (c, r, n, d) in entries {
            rows[r][c] = Q.ratio(n, d).unwrap();
        }
        let map = LinMap::from_rows(BasedSpace::numbered("x", 4), BasedSpace::numbered("y", 3), Q, &rows).unwrap();
        let doc = CqhDocument::from_linmap(&map);
        let text = emit_cqh(&doc);
        let back = parse_cqh(&text).unwrap();
        prop_assert_eq!(emit_cqh(&back), text);
        prop_assert!(back.to_linmap().unwrap().same_matrix(&map));
    }
}
