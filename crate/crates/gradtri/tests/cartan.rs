//! Blocks, simples, projectives and injectives of the Cartan algebras.

use gradtri::algebra::{elem_add_scaled, Elem};
use gradtri::cartanrep::{injective_cartan, projective_cartan, simple_cartan};
use gradtri::corpus;
use gradtri::modfun::Theory;

fn theories() -> Vec<Theory> {
    [corpus::ground(), corpus::matrix(2), corpus::matrix(3), corpus::poly(8), corpus::e1(8), corpus::twin(8)]
        .into_iter()
        .map(|d| Theory::new(corpus::build(d)).unwrap())
        .collect()
}

#[test]
fn blocks_account_for_the_semisimple_quotient() {
    for t in theories() {
        for c in &t.cartans {
            let alg = c.alg();
            let dim0 = alg.basis.iter().filter(|b| b.degree == 0).count();
            let ss: usize = c.blocks.iter().map(|b| b.dim * b.dim).sum();
            assert_eq!(ss, dim0 - c.radical0.len(), "{} weight {}", t.tri.name(), c.weight_label);
        }
    }
}

#[test]
fn idempotents_are_orthogonal_and_sum_to_the_unit() {
    for t in theories() {
        for c in &t.cartans {
            let alg = c.alg();
            let f = alg.field;
            let mut sum = Elem::new();
            for (i, (e, _)) in c.idempotents.iter().enumerate() {
                assert_eq!(&alg.mul(e, e).unwrap(), e);
                for (j, (g, _)) in c.idempotents.iter().enumerate() {
                    if i != j {
                        assert!(alg.mul(e, g).unwrap().is_empty());
                    }
                }
                elem_add_scaled(&mut sum, &f.one(), e);
            }
            sum.retain(|_, x| !x.is_zero());
            assert_eq!(sum, c.raw.unit, "{} weight {}", t.tri.name(), c.weight_label);
        }
    }
}

#[test]
fn simples_sit_in_degree_zero_with_block_dimension() {
    for t in theories() {
        for c in &t.cartans {
            for (i, b) in c.blocks.iter().enumerate() {
                let l = simple_cartan(c, i).unwrap();
                assert_eq!(l.dim(), b.dim, "{}", b.label);
                assert!(l.basis.iter().all(|x| x.degree == 0));
                // The injective hull is cogenerated in degree zero.
                let inj = injective_cartan(c, i).unwrap();
                let top: usize = inj.basis.iter().filter(|x| x.degree == 0).count();
                assert!(top >= b.dim, "{}", b.label);
                assert!(inj.basis.iter().all(|x| x.degree <= 0));
            }
        }
    }
}

#[test]
fn graded_local_cartan_algebras_are_their_own_projective() {
    for t in theories() {
        for c in &t.cartans {
            if c.blocks.len() != 1 || c.blocks[0].dim != 1 || c.raw.alg.objects.len() != 1 {
                continue;
            }
            let p = projective_cartan(c, 0).unwrap();
            assert_eq!(p.dim(), c.alg().dim(), "{} weight {}", t.tri.name(), c.weight_label);
        }
    }
}

#[test]
fn block_labels_are_stable() {
    let labels = |d| Theory::new(corpus::build(d)).unwrap().blocks().into_iter().map(|b| b.label).collect::<Vec<_>>();
    assert_eq!(labels(corpus::e1(8)), vec!["0#0", "1#0"]);
    assert_eq!(labels(corpus::matrix(2)), vec!["0#0"]);
    assert_eq!(labels(corpus::e1(8)), labels(corpus::e1(8)));
}
