use addact_core::algebra::local_view;
use addact_core::format::{parse_document, parse_spair, spair_to_json, Document};
use addact_core::geometry::implicitize;
use addact_core::hirzebruch::{normalized_spair, twisted_spair, HDivisor};
use addact_core::isomorphy::{decide_monomial_2gen, fingerprint, verify_certificate, VerdictKind, DEFAULT_BOUND};
use addact_core::spair::spair_from_operators;

#[test]
fn twisted_pairs_survive_a_json_round_trip() {
    for (a, b) in [(1, 2), (1, 3), (2, 4)] {
        let p = twisted_spair(1, a, b).unwrap();
        let back = parse_spair(&spair_to_json(&p)).unwrap();
        assert_eq!(back.algebra(), p.algebra());
        assert_eq!(back.u_basis(), p.u_basis());
        assert_eq!(fingerprint(back.view()), fingerprint(p.view()));
    }
}

#[test]
fn operators_of_a_monomial_pair_give_back_the_pair() {
    let p = normalized_spair(1, 1, 3).unwrap();
    let names = vec!["x".to_string(), "y".to_string()];
    let back = spair_from_operators(&p.ht_matrices(), &names).unwrap();
    assert_eq!(back.view().hilbert_samuel(), p.view().hilbert_samuel());
    let v = decide_monomial_2gen(back.view(), DEFAULT_BOUND).unwrap();
    assert_eq!(v.kind, VerdictKind::Monomial);
    assert_eq!(v.candidate.unwrap().dim(), HDivisor::new(1, 1, 3).section_count_formula() as usize);
}

#[test]
fn twisted_algebras_on_the_first_surface() {
    // dim 5 is monomial; dim 7 with the same embedding is not.
    let verdicts: Vec<VerdictKind> = [(1, 2), (1, 3)]
        .iter()
        .map(|&(a, b)| decide_monomial_2gen(twisted_spair(1, a, b).unwrap().view(), DEFAULT_BOUND).unwrap().kind)
        .collect();
    assert_eq!(verdicts, vec![VerdictKind::Monomial, VerdictKind::NonMonomial]);
}

#[test]
fn certificates_from_documents_verify() {
    let text = r#"{"dim":4,"basis":["1","u","v","u^2"],"unit":0,
        "mult":[[0,0,0,1],[0,1,1,1],[0,2,2,1],[0,3,3,1],[1,1,3,1],[2,2,3,"-1"]]}"#;
    let Document::Algebra(table) = parse_document(&serde_json::from_str(text).unwrap()).unwrap() else {
        panic!("algebra document expected");
    };
    let view = local_view(&table).unwrap();
    assert!(view.is_gorenstein());
    let v = decide_monomial_2gen(&view, DEFAULT_BOUND).unwrap();
    assert_eq!(v.kind, VerdictKind::Monomial);
    verify_certificate(v.certificate.as_ref().unwrap()).unwrap();
    assert_eq!(v.candidate.unwrap().is_box(), Some(vec![1, 1]));
}

#[test]
fn normalized_orbits_have_no_linear_equations() {
    for (n, a, b) in [(0, 1, 1), (1, 1, 2), (2, 1, 3)] {
        let orbit = normalized_spair(n, a, b).unwrap().parametrize_orbit();
        assert_eq!(implicitize(&orbit, 1).unwrap().dim(), 0);
    }
}
