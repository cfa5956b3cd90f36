//! The two-weight example against its matrix model: 2×2 matrices over `k[x]`
//! whose `(1,0)` entry lies in `x k[x]`, with `deg(E_ij x^k) = 2k - i + j`.

use std::collections::BTreeMap;

use gradtri::corpus;
use gradtri::module::GradedModule;
use gradtri::modfun::{Family, Theory};
use gradtri::scalar::Field;

/// Entry `(i, j)` of the matrix maps to a polynomial `power -> coefficient`.
type Mat = BTreeMap<(u8, u8, i64), i64>;

fn unit(i: u8, j: u8, k: i64) -> Mat {
    [((i, j, k), 1)].into()
}

fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    let mut out = Mat::new();
    for (&(i, j, k), &c) in a {
        for (&(l, m, n), &d) in b {
            if j == l {
                *out.entry((i, m, k + n)).or_default() += c * d;
            }
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

fn model_degree(&(i, j, k): &(u8, u8, i64)) -> i64 {
    2 * k - i as i64 + j as i64
}

/// The model matrix of one factor id.
fn factor_matrix(id: &str) -> Mat {
    match id {
        "e0" => unit(0, 0, 0),
        "e1" => unit(1, 1, 0),
        "xi" => unit(1, 0, 1),
        "eta" => unit(0, 1, 0),
        "x" => unit(0, 0, 1),
        _ => {
            let a = id.strip_prefix("x^").and_then(|s| s.parse().ok()).unwrap_or_else(|| panic!("unknown factor {id}"));
            unit(0, 0, a)
        }
    }
}

/// The model matrix of a basis id `x.h.y`.
fn basis_matrix(id: &str) -> Mat {
    id.split('.').map(factor_matrix).reduce(|a, b| mat_mul(&a, &b)).unwrap()
}

fn theory(d: i64) -> Theory {
    Theory::new(corpus::build(corpus::e1(d))).unwrap()
}

#[test]
fn basis_matches_monomials_up_to_cutoff() {
    for d in [4, 8, 16] {
        let t = theory(d);
        let alg = t.alg();
        let mut seen = BTreeMap::new();
        for b in &alg.basis {
            let m = basis_matrix(&b.id);
            assert_eq!(m.len(), 1, "{} is not a monomial", b.id);
            let (&cell, &c) = m.iter().next().unwrap();
            assert_eq!(c, 1);
            assert_eq!(model_degree(&cell), b.degree, "degree of {}", b.id);
            assert!(seen.insert(cell, b.id.clone()).is_none(), "{} repeats a monomial", b.id);
        }
        let mut expected = 0;
        for i in 0..2u8 {
            for j in 0..2u8 {
                let k0 = if (i, j) == (1, 0) { 1 } else { 0 };
                expected += (k0..=d).filter(|&k| model_degree(&(i, j, k)) <= d).count();
            }
        }
        assert_eq!(alg.dim(), expected, "cutoff {d}");
    }
}

#[test]
fn products_match_matrix_multiplication() {
    let t = theory(10);
    let alg = t.alg();
    let f = Field::Rational;
    for a in 0..alg.dim() {
        for b in 0..alg.dim() {
            if alg.degree(a) + alg.degree(b) > alg.cutoff {
                continue;
            }
            let model = mat_mul(&basis_matrix(&alg.basis[a].id), &basis_matrix(&alg.basis[b].id));
            let mut engine = Mat::new();
            for (k, c) in alg.product(a, b).unwrap() {
                let m = basis_matrix(&alg.basis[*k].id);
                let c = c.to_i64().unwrap();
                for (cell, x) in m {
                    *engine.entry(cell).or_default() += c * x;
                }
            }
            engine.retain(|_, c| *c != 0);
            assert_eq!(engine, model, "{} * {}", alg.basis[a].id, alg.basis[b].id);
        }
    }
    assert_eq!(f, t.field());
}

/// Character of a module on its tabulated degrees, keyed by object name.
fn character(m: &GradedModule) -> BTreeMap<(String, i64), usize> {
    m.character().into_iter().filter(|(_, n)| *n > 0).map(|((o, d), n)| ((m.objects[o].clone(), d), n)).collect()
}

/// Expected character restricted to the tabulated degrees of `m`.
fn expected(m: &GradedModule, cells: impl IntoIterator<Item = (&'static str, i64)>) -> BTreeMap<(String, i64), usize> {
    let mut out = BTreeMap::new();
    for (o, d) in cells {
        if m.window.contains(d) {
            *out.entry((o.to_string(), d)).or_default() += 1;
        }
    }
    out
}

/// Column `j` of the model: the projective `A 1_{s_j}`.
fn column(j: u8, d: i64) -> Vec<(&'static str, i64)> {
    let mut out = Vec::new();
    for i in 0..2u8 {
        let k0 = if (i, j) == (1, 0) { 1 } else { 0 };
        for k in k0..=d {
            out.push((if i == 0 { "s0" } else { "s1" }, model_degree(&(i, j, k))));
        }
    }
    out
}

/// Row `i` of the model, dualized: degrees negate.
fn dual_row(i: u8, d: i64) -> Vec<(&'static str, i64)> {
    let mut out = Vec::new();
    for j in 0..2u8 {
        let k0 = if (i, j) == (1, 0) { 1 } else { 0 };
        for k in k0..=d {
            out.push((if j == 0 { "s0" } else { "s1" }, -model_degree(&(i, j, k))));
        }
    }
    out
}

#[test]
fn module_characters_match_the_model() {
    let d = 8;
    let t = theory(d);
    let b0 = t.block("0#0").unwrap();
    let b1 = t.block("1#0").unwrap();

    let p0 = t.projective(&b0).unwrap();
    assert_eq!(character(&p0), expected(&p0, column(0, d)));
    let p1 = t.projective(&b1).unwrap();
    assert_eq!(character(&p1), expected(&p1, column(1, d)));

    // The minimal weight: the standard module is the projective cover.
    let s0 = t.standard(&b0, Family::Std).unwrap();
    assert_eq!(character(&s0), expected(&s0, column(0, d)));
    // Proper standard: the column modulo x.
    let ps0 = t.standard(&b0, Family::ProperStd).unwrap();
    assert_eq!(character(&ps0), expected(&ps0, [("s0", 0), ("s1", 1)]));
    // Costandard: the dual of row 0.
    let c0 = t.standard(&b0, Family::Costd).unwrap();
    assert_eq!(character(&c0), expected(&c0, dual_row(0, d)));
    let pc0 = t.standard(&b0, Family::ProperCostd).unwrap();
    assert_eq!(character(&pc0), expected(&pc0, [("s0", 0), ("s1", -1)]));

    // The maximal weight: everything collapses to the simple.
    for f in Family::ALL {
        let m = t.standard(&b1, f).unwrap();
        assert_eq!(character(&m), expected(&m, [("s1", 0)]), "{}", m.name);
    }
    let l0 = t.irreducible(&b0).unwrap();
    assert_eq!(character(&l0), expected(&l0, [("s0", 0)]));
    let l1 = t.irreducible(&b1).unwrap();
    assert_eq!(character(&l1), expected(&l1, [("s1", 0)]));
}

#[test]
fn hom_dimensions_match_the_model() {
    // Hom(P(b), W) = 1_s W, read off from a source cut down to its generators.
    let t = theory(8);
    let b0 = t.block("0#0").unwrap();
    let b1 = t.block("1#0").unwrap();
    let p0 = t.projective(&b0).unwrap();
    let p1 = t.projective(&b1).unwrap();
    // End(P(b0)) = 1_{s0} A 1_{s0} = k[x].
    let h = t.hom_space(&p0.truncate_above(2), &p0).unwrap();
    assert_eq!(h.range, (0, 6));
    for d in 0..=6 {
        let want = if d % 2 == 0 { 1 } else { 0 };
        assert_eq!(h.dims[&d], want, "End P(b0) in degree {d}: {}", h.series);
    }
    // Hom(P(b1), P(b0)) = 1_{s1} A 1_{s0}: xi x^k in degree 2k + 1.
    let h = t.hom_space(&p1.truncate_above(2), &p0).unwrap();
    for d in h.range.0..=h.range.1 {
        let want = if d >= 1 && d % 2 == 1 { 1 } else { 0 };
        assert_eq!(h.dims[&d], want, "Hom(P(b1), P(b0)) in degree {d}: {}", h.series);
    }
    assert!(h.range.1 >= 5);
}
