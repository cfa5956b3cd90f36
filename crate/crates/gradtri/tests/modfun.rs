//! Standard modules, duality, Hom and Ext on the corpus.

use gradtri::cartanrep::{projective_cartan, simple_cartan};
use gradtri::corpus;
use gradtri::error::Error;
use gradtri::module::GradedModule;
use gradtri::modfun::{BlockRef, Family, Theory};
use gradtri::qseries::{Direction, QSeries};

fn theory(data: gradtri::algcore::AlgebraData) -> Theory {
    Theory::new(corpus::build(data)).unwrap()
}

fn e1() -> Theory {
    theory(corpus::e1(8))
}

fn terms(s: &QSeries) -> Vec<(i64, u64)> {
    s.terms().filter(|(_, c)| *c != 0).collect()
}

fn iso(t: &Theory, a: &GradedModule, b: &GradedModule) -> bool {
    t.isomorphic(a, b).unwrap().iso
}

fn delta(b: &BlockRef, c: &BlockRef) -> Vec<(i64, u64)> {
    if b == c {
        vec![(0, 1)]
    } else {
        vec![]
    }
}

/// The corpus algebras with nonnegatively graded Cartan algebras.
fn corpus_theories() -> Vec<Theory> {
    vec![
        theory(corpus::ground()),
        theory(corpus::matrix(2)),
        theory(corpus::poly(8)),
        e1(),
        theory(corpus::twin(8)),
    ]
}

#[test]
fn restriction_undoes_standardization() {
    for t in corpus_theories() {
        for b in t.blocks() {
            let c = t.cartan(b.weight).unwrap();
            let pairs = [
                (Family::Std, projective_cartan(c, b.index).unwrap()),
                (Family::ProperStd, simple_cartan(c, b.index).unwrap()),
                (Family::ProperCostd, simple_cartan(c, b.index).unwrap()),
            ];
            for (f, want) in pairs {
                let m = t.standard(&b, f).unwrap();
                let back = t.cartan_truncate(b.weight, &m).unwrap();
                let hi = back.window.hi.min(want.window.hi);
                let cut = |m: &GradedModule| {
                    m.character().into_iter().filter(|((_, d), n)| *d <= hi && *n > 0).collect::<Vec<_>>()
                };
                assert_eq!(cut(&back), cut(&want), "{}: {}", t.tri.name(), m.name);
            }
        }
    }
}

#[test]
fn simples_are_classified() {
    for t in [e1(), theory(corpus::poly(8)), theory(corpus::matrix(2)), theory(corpus::twin(8))] {
        let bs = t.blocks();
        let ls: Vec<GradedModule> = bs.iter().map(|b| t.irreducible(b).unwrap()).collect();
        for (i, b) in bs.iter().enumerate() {
            for j in 0..i {
                assert!(!iso(&t, &ls[i], &ls[j]), "{} ~ {}", b.label, bs[j].label);
            }
            let local = t.cartan_truncate(b.weight, &ls[i]).unwrap();
            let want = t.cartan_simple(b).unwrap();
            assert_eq!(local.character(), want.character(), "{}", b.label);
            // Schur: degree-zero endomorphisms are scalars.
            let end = t.hom_degree(&ls[i], &ls[i], 0).unwrap().1;
            assert_eq!(end.len(), 1, "End L({})", b.label);
        }
    }
}

#[test]
fn proper_standards_are_unitriangular() {
    let t = e1();
    let poset = &t.tri.poset;
    for b in t.blocks() {
        let m = t.standard(&b, Family::ProperStd).unwrap();
        for c in t.blocks() {
            let mult = t.multiplicity(&m, &c).unwrap();
            if c == b {
                assert_eq!(terms(&mult), vec![(0, 1)], "[DeltaBar({}) : L({})]", b.label, c.label);
            } else if !poset.lt(b.weight, c.weight) {
                assert!(mult.is_zero(), "[DeltaBar({}) : L({})] = {}", b.label, c.label, mult);
            }
        }
    }
}

#[test]
fn standards_are_orthogonal_to_costandards() {
    let t = e1();
    for b in t.blocks() {
        for c in t.blocks() {
            let h = t.hom_space(&t.standard(&b, Family::Std).unwrap(), &t.standard(&c, Family::ProperCostd).unwrap());
            assert_eq!(terms(&h.unwrap().series), delta(&b, &c), "Hom(Delta({}), NablaBar({}))", b.label, c.label);
            let h = t.hom_space(&t.standard(&b, Family::ProperStd).unwrap(), &t.standard(&c, Family::Costd).unwrap());
            assert_eq!(terms(&h.unwrap().series), delta(&b, &c), "Hom(DeltaBar({}), Nabla({}))", b.label, c.label);
        }
    }
}

#[test]
fn hom_is_bilinear_over_direct_sums() {
    // Hom out of and into finite direct sums splits into the Homs between summands.
    let t = e1();
    let alg = t.alg();
    for b in t.blocks() {
        let d = t.standard(&b, Family::Std).unwrap();
        let n = t.standard(&b, Family::ProperCostd).unwrap();
        let (s1, s2) = (d.shift(1), d.shift(3));
        let src = GradedModule::direct_sum(alg, &[&s1, &s2], "f").unwrap();
        let n2 = n.shift(2);
        let tgt = GradedModule::direct_sum(alg, &[&n, &n2], "g").unwrap();
        let h = t.hom_space(&src, &tgt).unwrap();
        let mut total = 0;
        for a in [&s1, &s2] {
            for c in [&n, &n2] {
                let single = t.hom_space(a, c).unwrap();
                total += single.series.terms().map(|(_, k)| k).sum::<u64>();
            }
        }
        assert_eq!(h.series.terms().map(|(_, k)| k).sum::<u64>(), total, "{}", b.label);
        assert_eq!(total, 4);
    }
}

#[test]
fn ext1_vanishes_between_standard_and_costandard() {
    let t = e1();
    for b in t.blocks() {
        for c in t.blocks() {
            for (f, g) in [(Family::Std, Family::ProperCostd), (Family::ProperStd, Family::Costd)] {
                let e = t.ext1(&t.standard(&b, f).unwrap(), &t.standard(&c, g).unwrap()).unwrap();
                assert!(e.series.is_zero(), "Ext1({}({}), {}({})) = {}", f.symbol(), b.label, g.symbol(), c.label, e.series);
                // A finite target makes the answer exact in every degree.
                let exact = e.series.direction() == Direction::Poly;
                assert!(exact || e.range.1 - e.range.0 >= 6, "window {:?}", e.range);
            }
        }
    }
}

#[test]
fn double_dual_is_identity() {
    let t = e1();
    for b in t.blocks() {
        for f in Family::ALL {
            let m = t.standard(&b, f).unwrap();
            let dd = t.dualize(&t.dualize(&m).unwrap()).unwrap();
            assert!(iso(&t, &m, &dd), "{}", m.name);
            let op = t.opposite_standard(&b, f).unwrap();
            let dd = t.dualize(&t.dualize(&op).unwrap()).unwrap();
            assert!(iso(&t, &op, &dd), "{}", op.name);
        }
    }
}

#[test]
fn duality_exchanges_families() {
    let t = e1();
    for b in t.blocks() {
        for (f, g) in [(Family::Std, Family::Costd), (Family::ProperStd, Family::ProperCostd)] {
            let d = t.dual_of_opposite(&b, f).unwrap();
            assert!(iso(&t, &d, &t.standard(&b, g).unwrap()), "{}", d.name);
        }
    }
}

#[test]
fn tau_duality_fixes_simples() {
    let t = e1();
    for b in t.blocks() {
        let d = t.tau_dualize(&t.standard(&b, Family::Std).unwrap()).unwrap();
        assert!(iso(&t, &d, &t.standard(&b, Family::Costd).unwrap()), "{}", b.label);
        let l = t.irreducible(&b).unwrap();
        assert!(iso(&t, &t.tau_dualize(&l).unwrap(), &l), "{}", b.label);
    }
    let m = theory(corpus::poly(8));
    let l = m.irreducible(&m.blocks()[0]).unwrap();
    assert!(matches!(m.tau_dualize(&l), Err(Error::NotAntiAutomorphism(_))));
}

#[test]
fn nonzero_modules_map_to_some_proper_costandard() {
    let t = e1();
    let bs = t.blocks();
    let mut mods = Vec::new();
    for b in &bs {
        mods.push(t.projective(b).unwrap());
        mods.push(t.irreducible(b).unwrap());
        for f in Family::ALL {
            mods.push(t.standard(b, f).unwrap());
        }
    }
    for v in mods.into_iter().filter(|v| v.window.exact_below) {
        let found = bs.iter().any(|c| {
            let n = t.standard(c, Family::ProperCostd).unwrap();
            !t.hom_space(&v, &n).unwrap().series.is_zero()
        });
        assert!(found, "{} maps to no proper costandard", v.name);
    }
}

#[test]
fn minimal_weight_standards_are_projective() {
    for t in corpus_theories() {
        for b in t.blocks() {
            if !t.tri.poset.lower_set(b.weight).iter().all(|&m| m == b.weight) {
                continue;
            }
            let p = t.projective(&b).unwrap();
            let d = t.standard(&b, Family::Std).unwrap();
            assert!(iso(&t, &p, &d), "{}: {}", t.tri.name(), b.label);
        }
    }
}

#[test]
fn truncation_recovers_projectives() {
    let t = e1();
    let b0 = t.block("0#0").unwrap();
    let g = t.gamma_algebra(&[0]).unwrap();
    let pg = t.gamma_projective(&g, &b0).unwrap();
    let sh = t.gamma_shriek(&g, &pg).unwrap();
    assert!(iso(&t, &sh, &t.projective(&b0).unwrap()));
    let p1 = t.projective(&t.block("1#0").unwrap()).unwrap();
    let r = t.counit_unit_check(&[0], &p1).unwrap();
    assert!(r.epsilon_iso, "{:?}", r.details);
}

#[test]
fn unknown_blocks_are_reported() {
    let t = e1();
    assert!(matches!(t.block("7#0"), Err(Error::UnknownBlock(_))));
}
