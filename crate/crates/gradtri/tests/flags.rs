//! Standard flags of projectives, BGG reciprocity and the summation identities.

use gradtri::corpus;
use gradtri::error::Error;
use gradtri::modfun::{Family, Theory};
use gradtri::qseries::QSeries;
use gradtri::report::Verdict;

fn theory(data: gradtri::algcore::AlgebraData) -> Theory {
    Theory::new(corpus::build(data)).unwrap()
}

fn terms(s: &QSeries) -> Vec<(i64, u64)> {
    s.terms().filter(|(_, c)| *c != 0).collect()
}

#[test]
fn projective_flag_of_the_top_block() {
    let t = theory(corpus::e1(8));
    let b1 = t.block("1#0").unwrap();
    let (q, flag) = t.build_projective_flag(&b1).unwrap();
    assert_eq!(flag.layers.len(), 2);
    let top = &flag.layers[0];
    assert_eq!(t.tri.poset.labels[top.weight], "1");
    assert_eq!(top.mult.keys().collect::<Vec<_>>(), vec!["1#0"]);
    assert_eq!(terms(&top.mult["1#0"]), vec![(0, 1)]);
    let bottom = &flag.layers[1];
    assert_eq!(bottom.mult.keys().collect::<Vec<_>>(), vec!["0#0"]);
    assert_eq!(terms(&bottom.mult["0#0"]), vec![(-1, 1)]);
    for c in t.verify_flag(&q, &flag).unwrap() {
        assert_eq!(c.verdict, Verdict::Pass, "{}: {:?}", c.name, c.details);
    }
}

#[test]
fn projective_flag_of_the_bottom_block_is_standard() {
    let t = theory(corpus::e1(8));
    let b0 = t.block("0#0").unwrap();
    let (q, flag) = t.build_projective_flag(&b0).unwrap();
    assert_eq!(flag.layers.len(), 1);
    assert_eq!(terms(&flag.layers[0].mult["0#0"]), vec![(0, 1)]);
    assert!(t.isomorphic(&q, &t.standard(&b0, Family::Std).unwrap()).unwrap().iso);
}

#[test]
fn flags_pass_on_the_corpus() {
    for t in [theory(corpus::matrix(2)), theory(corpus::twin(8)), theory(corpus::poly(8)), theory(corpus::ground())] {
        for b in t.blocks() {
            let (q, flag) = t.build_projective_flag(&b).unwrap();
            for c in t.verify_flag(&q, &flag).unwrap() {
                assert_eq!(c.verdict, Verdict::Pass, "{} {}: {}: {:?}", t.tri.name(), b.label, c.name, c.details);
            }
        }
    }
}

#[test]
fn bgg_reciprocity_holds() {
    let t = theory(corpus::e1(8));
    for b in t.blocks() {
        let r = t.bgg_check(&b, 8, true).unwrap();
        assert_eq!(r.verdict, Verdict::Pass, "{}: {:?}", b.label, r.rows);
    }
    // (P(b1) : Delta(b0)) = q^-1 = conj [NablaBar(b0) : L(b1)].
    let r = t.bgg_check(&t.block("1#0").unwrap(), 8, false).unwrap();
    let row = r.rows.iter().find(|row| row.standard == "0#0").unwrap();
    assert_eq!(terms(&row.flag_side), vec![(-1, 1)]);
    assert_eq!(terms(&row.composition_side), vec![(-1, 1)]);
    for t in [theory(corpus::matrix(2)), theory(corpus::twin(8)), theory(corpus::poly(8))] {
        for b in t.blocks() {
            let r = t.bgg_check(&b, 8, false).unwrap();
            assert_eq!(r.verdict, Verdict::Pass, "{} {}: {:?}", t.tri.name(), b.label, r.rows);
        }
    }
}

#[test]
fn bgg_with_tau_needs_a_declared_tau() {
    let t = theory(corpus::poly(8));
    let b = t.blocks()[0].clone();
    assert!(matches!(t.bgg_check(&b, 8, true), Err(Error::Usage(_))));
}

#[test]
fn summation_identities_hold_on_flagged_modules() {
    let t = theory(corpus::e1(8));
    for b in t.blocks() {
        let (q, _) = t.build_projective_flag(&b).unwrap();
        let r = t.standard_sum_check(&q, 8).unwrap();
        assert_eq!(r.verdict, Verdict::Pass, "{:?}", r.details);
        let r = t.composition_sum_check(&q, 8).unwrap();
        assert_eq!(r.verdict, Verdict::Pass, "{:?}", r.details);
        let pb = t.standard(&b, Family::ProperStd).unwrap();
        let r = t.composition_sum_check(&pb, 8).unwrap();
        assert_eq!(r.verdict, Verdict::Pass, "{:?}", r.details);
    }
}

#[test]
fn ascending_flags_of_a_projective() {
    let t = theory(corpus::e1(8));
    let p1 = t.projective(&t.block("1#0").unwrap()).unwrap();
    let checks = t.ascending_flag_check(&p1, &[vec![0], vec![0, 1]]).unwrap();
    assert_eq!(checks.len(), 3);
    for c in checks {
        assert_eq!(c.verdict, Verdict::Pass, "{}: {:?}", c.name, c.details);
    }
    assert!(matches!(t.ascending_flag_check(&p1, &[vec![1]]), Err(Error::NotLowerSet(_))));
}

#[test]
fn supports_of_standard_modules() {
    let t = theory(corpus::e1(8));
    for b in t.blocks() {
        let d = t.standard(&b, Family::Std).unwrap();
        let s = t.support(&d, Family::Std).unwrap();
        assert_eq!(s.weights.into_iter().collect::<Vec<_>>(), vec![t.tri.poset.labels[b.weight].clone()]);
    }
}

#[test]
fn reports_are_deterministic() {
    let render = || {
        let t = theory(corpus::e1(8));
        let b = t.block("1#0").unwrap();
        let (_, flag) = t.build_projective_flag(&b).unwrap();
        let bgg = t.bgg_check(&b, 8, true).unwrap();
        format!("{}{}", flag.to_json(&t), bgg.to_json())
    };
    assert_eq!(render(), render());
}
