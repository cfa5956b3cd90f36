//! Property tests for series arithmetic, exact linear algebra, algebra
//! construction and the text format.

#![allow(clippy::needless_range_loop)]

use std::collections::BTreeSet;

use proptest::prelude::*;

use gradtri::algcore::TriangularAlgebra;
use gradtri::corpus;
use gradtri::glinalg::{is_zero_vec, FinDimAlgebra, Matrix, Vector};
use gradtri::gta::{export_gta, parse_gta};
use gradtri::module::GradedModule;
use gradtri::modfun::{Family, Theory};
use gradtri::qseries::{Direction, QSeries};
use gradtri::scalar::{Field, Scalar};

fn series() -> impl Strategy<Value = QSeries> {
    let terms = prop::collection::vec((-6i64..=6, 0u64..4), 0..6);
    (0..3u8, 0i64..8, terms).prop_map(|(d, trunc, terms)| {
        let dir = match d {
            0 => Direction::Down,
            1 => Direction::Up,
            _ => Direction::Poly,
        };
        QSeries::from_terms(dir, trunc, terms)
    })
}

/// Two or three series of one direction, so that arithmetic is defined.
fn same_direction(n: usize) -> impl Strategy<Value = Vec<QSeries>> {
    let terms = prop::collection::vec((-6i64..=6, 0u64..4), 0..6);
    (0..3u8, prop::collection::vec((0i64..8, terms), n)).prop_map(|(d, parts)| {
        parts
            .into_iter()
            .map(|(trunc, terms)| {
                let dir = match d {
                    0 => Direction::Down,
                    1 => Direction::Up,
                    _ => Direction::Poly,
                };
                QSeries::from_terms(dir, trunc, terms)
            })
            .collect()
    })
}

const W: i64 = 12;

proptest! {
    #[test]
    fn bar_is_an_involution(f in series()) {
        prop_assert_eq!(f.bar().bar(), f);
    }

    #[test]
    fn addition_and_multiplication_commute(v in same_direction(2)) {
        let (a, b) = (&v[0], &v[1]);
        prop_assert_eq!(a.add(b).unwrap(), b.add(a).unwrap());
        prop_assert_eq!(a.mul(b).unwrap(), b.mul(a).unwrap());
    }

    #[test]
    fn arithmetic_is_associative_and_distributive(v in same_direction(3)) {
        let (a, b, c) = (&v[0], &v[1], &v[2]);
        let l = a.add(b).unwrap().add(c).unwrap();
        let r = a.add(&b.add(c).unwrap()).unwrap();
        prop_assert!(l.eq_known(&r, W));
        let l = a.mul(b).unwrap().mul(c).unwrap();
        let r = a.mul(&b.mul(c).unwrap()).unwrap();
        prop_assert!(l.eq_known(&r, W), "{} vs {}", l, r);
        let l = a.mul(&b.add(c).unwrap()).unwrap();
        let r = a.mul(b).unwrap().add(&a.mul(c).unwrap()).unwrap();
        prop_assert!(l.eq_known(&r, W), "{} vs {}", l, r);
    }

    #[test]
    fn one_dimensional_space_has_monomial_dimension(d in -10i64..10) {
        let t = Theory::new(corpus::build(corpus::ground())).unwrap();
        let l = t.irreducible(&t.blocks()[0]).unwrap();
        let m = l.shift(-d);
        prop_assert_eq!(m.basis[0].degree, d);
        prop_assert_eq!(m.dim_q(None), QSeries::monomial(-d, 1));
    }
}

fn field(p: u8) -> Field {
    match p {
        0 => Field::Rational,
        _ => Field::prime(7).unwrap(),
    }
}

fn matrix(f: Field, rows: &[Vec<i64>], cols: usize) -> Matrix {
    let rows: Vec<Vector> = rows.iter().map(|r| r.iter().map(|&x| f.int(x)).collect()).collect();
    Matrix::from_rows(f, cols, &rows)
}

fn entries() -> impl Strategy<Value = (usize, Vec<Vec<i64>>, Vec<i64>)> {
    (1usize..5, 1usize..5).prop_flat_map(|(r, c)| {
        (Just(c), prop::collection::vec(prop::collection::vec(-3i64..=3, c), r), prop::collection::vec(-3i64..=3, r))
    })
}

proptest! {
    #[test]
    fn solutions_back_substitute((cols, rows, t) in entries(), p in 0u8..2) {
        let f = field(p);
        let m = matrix(f, &rows, cols);
        let t: Vector = t.iter().map(|&x| f.int(x)).collect();
        if let Some(x) = m.solve(&t) {
            prop_assert_eq!(m.apply(&x), t.clone());
        }
        let kernel = m.kernel();
        prop_assert_eq!(kernel.len() + m.rank(), cols);
        for k in &kernel {
            prop_assert!(is_zero_vec(&m.apply(k)));
        }
        // A target in the image is always solvable.
        let x0: Vector = (0..cols).map(|i| f.int(i as i64 - 1)).collect();
        let image = m.apply(&x0);
        let x = m.solve(&image);
        prop_assert!(x.is_some());
        prop_assert_eq!(m.apply(&x.unwrap()), image);
    }
}

/// The incidence algebra of a random order on `0..n` refining the usual one.
fn incidence(n: usize, bits: &[bool]) -> (FinDimAlgebra, usize) {
    let mut rel = vec![vec![false; n]; n];
    let mut k = 0;
    for i in 0..n {
        for j in i + 1..n {
            rel[i][j] = bits[k];
            k += 1;
        }
    }
    for m in 0..n {
        for i in 0..n {
            for j in 0..n {
                if rel[i][m] && rel[m][j] {
                    rel[i][j] = true;
                }
            }
        }
    }
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).filter(|&(i, j)| i == j || rel[i][j]).collect();
    let f = Field::Rational;
    let dim = pairs.len();
    let unit_vec = |k: usize| -> Vector { (0..dim).map(|x| if x == k { f.one() } else { f.zero() }).collect() };
    let table = pairs
        .iter()
        .map(|&(i, j)| {
            pairs
                .iter()
                .map(|&(k, l)| {
                    if j == k {
                        unit_vec(pairs.iter().position(|&p| p == (i, l)).unwrap())
                    } else {
                        vec![f.zero(); dim]
                    }
                })
                .collect()
        })
        .collect();
    let unit = pairs.iter().map(|&(i, j)| if i == j { f.one() } else { f.zero() }).collect();
    let labels = pairs.iter().map(|(i, j)| format!("E{i}{j}")).collect();
    let strict = pairs.iter().filter(|(i, j)| i != j).count();
    (FinDimAlgebra { field: f, labels, table, unit }, strict)
}

fn add(a: &[Scalar], b: &[Scalar]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x.add(y)).collect()
}

proptest! {
    #[test]
    fn radical_and_idempotents_of_incidence_algebras(n in 1usize..5, bits in prop::collection::vec(any::<bool>(), 6)) {
        let (a, strict) = incidence(n, &bits);
        let rad = a.radical().unwrap();
        prop_assert_eq!(rad.dim(), strict);
        // The radical is nilpotent: products of n radical elements vanish.
        let mut power: Vec<Vector> = rad.basis().to_vec();
        for _ in 1..n {
            let mut next = Vec::new();
            for x in &power {
                for y in rad.basis() {
                    next.push(a.mul(x, y));
                }
            }
            power = next;
        }
        prop_assert!(power.iter().all(|v| is_zero_vec(v)));
        let idem = a.split_idempotents().unwrap();
        prop_assert_eq!(idem.len(), n);
        let blocks: BTreeSet<usize> = idem.iter().map(|e| e.block).collect();
        prop_assert_eq!(blocks.len(), n);
        let mut sum = vec![a.field.zero(); a.dim()];
        for (i, e) in idem.iter().enumerate() {
            prop_assert_eq!(a.mul(&e.idempotent, &e.idempotent), e.idempotent.clone());
            for (j, f) in idem.iter().enumerate() {
                if i != j {
                    prop_assert!(is_zero_vec(&a.mul(&e.idempotent, &f.idempotent)));
                }
            }
            let (corner, _) = a.corner(&e.idempotent);
            prop_assert_eq!(corner.dim() - corner.radical().unwrap().dim(), 1);
            sum = add(&sum, &e.idempotent);
        }
        prop_assert_eq!(sum, a.unit.clone());
    }
}

fn e1_or_nh2(which: bool, cutoff: i64) -> TriangularAlgebra {
    corpus::build(if which { corpus::e1(cutoff) } else { corpus::nilhecke2(cutoff) })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn multiplication_is_associative(which in any::<bool>(), cutoff in 0i64..12) {
        let a = e1_or_nh2(which, cutoff);
        prop_assert!(a.alg.associativity_failures(5, 1).is_empty());
    }

    #[test]
    fn upper_quotients_compose(cutoff in 0i64..12) {
        let a = corpus::build(corpus::e1(cutoff));
        let all: Vec<usize> = (0..a.poset.len()).collect();
        let top = a.poset.index("1").unwrap();
        let one_step = a.quotient_upper_set(&[top]).unwrap();
        let first = a.quotient_upper_set(&all).unwrap();
        let second = first.quotient_upper_set(&[first.poset.index("1").unwrap()]).unwrap();
        let strip = |t: &TriangularAlgebra| gradtri::algcore::AlgebraData { name: String::new(), ..t.to_data() };
        prop_assert_eq!(strip(&one_step), strip(&second));
        prop_assert_eq!(one_step.basis_dims(), second.basis_dims());
    }

    #[test]
    fn text_format_round_trips(which in 0usize..4, cutoff in 0i64..10, p in 0u8..2, name in "[a-z][a-z0-9_]{0,8}", scale in 1i64..5) {
        let mut data = match which {
            0 => corpus::e1(cutoff),
            1 => corpus::nilhecke2(cutoff),
            2 => corpus::poly(cutoff),
            _ => corpus::matrix(2),
        };
        data.name = name;
        data = data.with_field(field(p)).unwrap();
        let f = data.field;
        for (_, _, terms) in data.products.iter_mut() {
            for (_, c) in terms.iter_mut() {
                *c = c.mul(&f.int(scale)).mul(&f.int(scale + 1).inv().unwrap());
            }
        }
        let text = export_gta(&data);
        let back = parse_gta(&text).unwrap();
        prop_assert_eq!(&back.data, &data);
        prop_assert_eq!(export_gta(&back.data), text);
    }

    #[test]
    fn hom_is_additive_in_both_arguments(k in 0i64..3, l in 0i64..3) {
        let t = Theory::new(corpus::build(corpus::e1(8))).unwrap();
        let alg = t.alg();
        for b in t.blocks() {
            for c in t.blocks() {
                let d = t.standard(&b, Family::Std).unwrap();
                let n = t.standard(&c, Family::ProperCostd).unwrap();
                let (d1, d2) = (d.shift(k), d.clone());
                let (n1, n2) = (n.shift(l), n.clone());
                let src = GradedModule::direct_sum(alg, &[&d1, &d2], "f").unwrap();
                let tgt = GradedModule::direct_sum(alg, &[&n1, &n2], "g").unwrap();
                let whole = t.hom_space(&src, &tgt).unwrap().series;
                let mut parts = QSeries::zero_poly();
                for x in [&d1, &d2] {
                    for y in [&n1, &n2] {
                        parts = parts.add(&t.hom_space(x, y).unwrap().series).unwrap();
                    }
                }
                prop_assert_eq!(&whole, &parts);
                // Delta(b) shifted by k against NablaBar(c) shifted by l contributes delta_{bc} q^{l-k}.
                let expected: Vec<(i64, u64)> = if b == c {
                    let mut v = std::collections::BTreeMap::new();
                    for kk in [k, 0] {
                        for ll in [l, 0] {
                            *v.entry(ll - kk).or_insert(0u64) += 1;
                        }
                    }
                    v.into_iter().collect()
                } else {
                    vec![]
                };
                prop_assert_eq!(whole.terms().collect::<Vec<_>>(), expected);
            }
        }
    }
}
