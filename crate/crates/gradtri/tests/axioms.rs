use gradtri::algcore::TriangularAlgebra;
use gradtri::corpus;

#[test]
fn corpus_passes_at_several_cutoffs() {
    for d in [4, 8, 16] {
        for data in [corpus::ground(), corpus::matrix(2), corpus::poly(d), corpus::e1(d), corpus::nilhecke2(d)] {
            let a = TriangularAlgebra::build(data).unwrap();
            let r = a.verify_axioms(2);
            assert!(r.passed(), "{} at {d}: {:?}", a.name(), r.checks);
        }
    }
}

#[test]
fn mutants_fail_the_named_axiom() {
    for m in corpus::mutants(8) {
        let a = TriangularAlgebra::build(m.data).unwrap();
        let r = a.verify_axioms(1);
        assert_eq!(r.failing(), vec![m.axiom], "{}: {:?}", m.name, r.checks);
    }
}
