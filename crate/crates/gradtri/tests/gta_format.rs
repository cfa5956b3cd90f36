use gradtri::corpus;
use gradtri::error::Error;
use gradtri::gta::{export_gta, parse_gta};

#[test]
fn corpus_round_trips() {
    for spec in ["ground", "matrix:2", "matrix:3", "poly:8", "e1:16", "nilhecke2:8", "twin:4"] {
        let data = corpus::by_name(spec).unwrap();
        let text = export_gta(&data);
        let back = parse_gta(&text).unwrap_or_else(|e| panic!("{spec}: {e}\n{text}"));
        assert_eq!(back.data, data, "{spec}");
        assert_eq!(export_gta(&back.data), text, "{spec}");
    }
}

#[test]
fn mutants_round_trip_when_closed() {
    for m in corpus::mutants(8) {
        let text = export_gta(&m.data);
        match parse_gta(&text) {
            Ok(back) => assert_eq!(back.data, m.data, "{}", m.name),
            Err(Error::Integrity(msg)) => assert!(msg.contains("eta"), "{}: {msg}", m.name),
            Err(e) => panic!("{}: {e}", m.name),
        }
    }
}

#[test]
fn undeclared_basis_id_names_the_id() {
    let text = "[objects]\nu\n[poset]\n0\n[special]\nu -> 0\n[basis]\n1 IDEMPOTENT u u 0 (u,u)\n[mul]\n1 * 1 = 1\n1 * zz = zz\n";
    match parse_gta(text) {
        Err(Error::Integrity(msg)) => assert!(msg.contains("`zz`"), "{msg}"),
        other => panic!("expected an integrity error, got {other:?}"),
    }
}

#[test]
fn empty_objects_give_the_zero_algebra() {
    let file = parse_gta("[objects]\n").unwrap();
    assert!(file.data.objects.is_empty());
    let tri = gradtri::algcore::TriangularAlgebra::build(file.data).unwrap();
    assert_eq!(tri.alg.dim(), 0);
    assert!(tri.verify_axioms(1).passed());
}

#[test]
fn parse_errors_carry_line_and_column() {
    let cases = [
        ("[objects]\nu\n[bogus]\n", 3, 2),
        ("[cutoff]\ndegree = ten\n", 2, 10),
        ("[cutoff]\nspeed = 3\n", 2, 1),
        ("u\n", 1, 1),
        ("[basis]\nx Q u u 0 (u,u)\n", 2, 3),
        ("[mul] complete=maybe\n", 1, 16),
        ("[objects]\n[objects]\n", 2, 2),
    ];
    for (text, line, col) in cases {
        match parse_gta(text) {
            Err(Error::Parse { line: l, col: c, msg }) => assert_eq!((l, c), (line, col), "{text:?}: {msg}"),
            other => panic!("{text:?}: expected a parse error, got {other:?}"),
        }
    }
}

#[test]
fn comments_fractions_and_negative_terms() {
    let text = "# two objects\n[field]\nfp:7\n[objects]\nu\n[poset]\n0\n[special]\nu -> 0\n[basis]\n1 IDEMPOTENT u u 0 (u,u)\nh H u u 2 (u,u)\n[mul] complete=true\n1 * 1 = 1\n1 * h = - 1/2*h + 3*h - h\n";
    let data = parse_gta(text).unwrap().data;
    assert!(data.complete);
    let (_, _, terms) = &data.products[1];
    assert_eq!(terms.len(), 3);
    assert_eq!(terms[0].1, data.field.parse("-1/2").unwrap());
    assert_eq!(terms[2].1, data.field.int(-1));
}
