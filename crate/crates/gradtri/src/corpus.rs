//! Built-in example algebras, parameterized by the degree cutoff.
//!
//! Structure constants come from concrete models: matrix units for `M_n`,
//! 2×2 matrices over `k[x]` for the two-weight example, and the polynomial
//! representation for the nil-Hecke algebra on two strands.

use std::collections::BTreeMap;

use crate::algcore::{AlgebraData, Product, FactorData, Kind, SpecialData, TriangularAlgebra};
use crate::error::{Error, Result};
use crate::scalar::{Field, Scalar};

type Products = Vec<Product>;

fn factor(id: &str, kind: Kind, from: &str, to: &str, degree: i64, pair: (&str, &str)) -> FactorData {
    FactorData {
        id: id.to_string(),
        kind,
        from: from.to_string(),
        to: to.to_string(),
        degree,
        pair: (pair.0.to_string(), pair.1.to_string()),
    }
}

fn special(label: &str, weight: &str) -> SpecialData {
    SpecialData { label: label.to_string(), weight: weight.to_string(), object: label.to_string() }
}

fn strings(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

fn power(var: &str, a: i64) -> String {
    if a == 1 {
        var.to_string()
    } else {
        format!("{var}^{a}")
    }
}

fn base(name: &str, cutoff: i64) -> AlgebraData {
    AlgebraData {
        name: name.to_string(),
        field: Field::Rational,
        objects: Vec::new(),
        weights: Vec::new(),
        covers: Vec::new(),
        specials: Vec::new(),
        factors: Vec::new(),
        products: Vec::new(),
        cutoff,
        complete: true,
        lower: Vec::new(),
        tau: Vec::new(),
        finite_xy: true,
        finite: false,
    }
}

/// Fills the product table from a model in which every basis element is a
/// single monomial, skipping products beyond the cutoff.
fn monomial_products<K: Ord + Clone>(
    basis: &[(String, i64, K)],
    cutoff: i64,
    mul: impl Fn(&K, &K) -> Vec<(K, i64)>,
) -> Products {
    let f = Field::Rational;
    let back: BTreeMap<&K, &str> = basis.iter().map(|(id, _, k)| (k, id.as_str())).collect();
    let mut out = Vec::new();
    for (a, da, ka) in basis {
        for (b, db, kb) in basis {
            if da + db > cutoff {
                continue;
            }
            let terms: Vec<(String, Scalar)> = mul(ka, kb)
                .into_iter()
                .filter(|(_, c)| *c != 0)
                .map(|(k, c)| {
                    let id = back.get(&k).unwrap_or_else(|| panic!("model product of {a} and {b} leaves the basis"));
                    (id.to_string(), f.int(c))
                })
                .collect();
            if !terms.is_empty() {
                out.push((a.clone(), b.clone(), terms));
            }
        }
    }
    out
}

/// The ground field: one object and the basis `{1}`.
pub fn ground() -> AlgebraData {
    let mut d = base("ground", 0);
    d.finite = true;
    d.objects = strings(&["u"]);
    d.weights = strings(&["0"]);
    d.specials = vec![special("u", "0")];
    d.factors = vec![factor("1", Kind::Idempotent, "u", "u", 0, ("u", "u"))];
    d.products = vec![("1".into(), "1".into(), vec![("1".into(), Field::Rational.one())])];
    d
}

/// `M_n(k)` in degree zero with `H = {1} ∪ {E_ij : (i,j) != (1,1)}`.
pub fn matrix(n: usize) -> AlgebraData {
    assert!(n >= 1, "matrix size must be positive");
    let f = Field::Rational;
    let mut d = base(&format!("matrix{n}"), 0);
    d.finite = true;
    d.objects = strings(&["u"]);
    d.weights = strings(&["0"]);
    d.specials = vec![special("u", "0")];
    let unit_id = |i: usize, j: usize| format!("E{}{}", i + 1, j + 1);
    d.factors.push(factor("1", Kind::Idempotent, "u", "u", 0, ("u", "u")));
    let cells: Vec<(usize, usize)> =
        (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).filter(|&c| c != (0, 0)).collect();
    for &(i, j) in &cells {
        d.factors.push(factor(&unit_id(i, j), Kind::H, "u", "u", 0, ("u", "u")));
    }
    // E11 = 1 - sum_{i>1} E_ii.
    let expand = |i: usize, j: usize| -> Vec<(String, Scalar)> {
        if (i, j) != (0, 0) {
            return vec![(unit_id(i, j), f.one())];
        }
        let mut v = vec![("1".to_string(), f.one())];
        v.extend((1..n).map(|k| (unit_id(k, k), f.int(-1))));
        v
    };
    // Each element as an integer combination of matrix units.
    type Combination = Vec<((usize, usize), i64)>;
    let mut elems: Vec<(String, Combination)> =
        vec![("1".to_string(), (0..n).map(|k| ((k, k), 1)).collect())];
    elems.extend(cells.iter().map(|&(i, j)| (unit_id(i, j), vec![((i, j), 1)])));
    for (a, ma) in &elems {
        for (b, mb) in &elems {
            let mut acc: BTreeMap<String, Scalar> = BTreeMap::new();
            for &((i, j), ca) in ma {
                for &((k, l), cb) in mb {
                    if j != k {
                        continue;
                    }
                    for (id, c) in expand(i, l) {
                        let e = acc.entry(id).or_insert_with(|| f.zero());
                        *e = e.add(&c.mul(&f.int(ca * cb)));
                    }
                }
            }
            let terms: Vec<(String, Scalar)> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
            if !terms.is_empty() {
                d.products.push((a.clone(), b.clone(), terms));
            }
        }
    }
    d
}

/// `k[x]` with `deg x = 2`.
pub fn poly(cutoff: i64) -> AlgebraData {
    let mut d = base("poly", cutoff);
    d.objects = strings(&["s"]);
    d.weights = strings(&["0"]);
    d.specials = vec![special("s", "0")];
    d.factors.push(factor("1", Kind::Idempotent, "s", "s", 0, ("s", "s")));
    let mut basis = vec![("1".to_string(), 0, 0i64)];
    for a in 1..=cutoff / 2 {
        d.factors.push(factor(&power("x", a), Kind::H, "s", "s", 2 * a, ("s", "s")));
        basis.push((power("x", a), 2 * a, a));
    }
    d.products = monomial_products(&basis, cutoff, |a, b| vec![(a + b, 1)]);
    d
}

/// Matrix-unit model of the two-weight example: `(i, j, k)` stands for `E_ij x^k`.
type Cell = (u8, u8, i64);

/// The two-weight example: objects `s0 < s1` by weight, `ξ ∈ X(s1,s0)`,
/// `η ∈ Y(s0,s1)`, `H(s0,s0) = {x^a}` and `η ξ = x`.
pub fn e1(cutoff: i64) -> AlgebraData {
    let mut d = base("E1", cutoff);
    d.objects = strings(&["s0", "s1"]);
    d.weights = strings(&["0", "1"]);
    d.covers = vec![("0".into(), "1".into())];
    d.specials = vec![special("s0", "0"), special("s1", "1")];
    d.factors = vec![
        factor("e0", Kind::Idempotent, "s0", "s0", 0, ("s0", "s0")),
        factor("e1", Kind::Idempotent, "s1", "s1", 0, ("s1", "s1")),
        factor("xi", Kind::X, "s0", "s1", 1, ("s1", "s0")),
        factor("eta", Kind::Y, "s1", "s0", 1, ("s0", "s1")),
    ];
    let mut basis: Vec<(String, i64, Cell)> = vec![
        ("e0".into(), 0, (0, 0, 0)),
        ("e1".into(), 0, (1, 1, 0)),
        ("xi".into(), 1, (1, 0, 1)),
        ("eta".into(), 1, (0, 1, 0)),
        ("xi.eta".into(), 2, (1, 1, 1)),
    ];
    for a in 1..=cutoff / 2 {
        let xa = power("x", a);
        d.factors.push(factor(&xa, Kind::H, "s0", "s0", 2 * a, ("s0", "s0")));
        basis.push((xa.clone(), 2 * a, (0, 0, a)));
        basis.push((format!("xi.{xa}"), 2 * a + 1, (1, 0, a + 1)));
        basis.push((format!("{xa}.eta"), 2 * a + 1, (0, 1, a)));
        basis.push((format!("xi.{xa}.eta"), 2 * a + 2, (1, 1, a + 1)));
    }
    basis.retain(|(_, deg, _)| *deg <= cutoff);
    d.products = monomial_products(&basis, cutoff, |&(i, j, k), &(l, m, n)| {
        if j == l {
            vec![((i, m, k + n), 1)]
        } else {
            Vec::new()
        }
    });
    d.tau = vec![("xi".into(), "eta".into())];
    d
}

/// Normal-form monomial `x1^a x2^b ∂^e` of the nil-Hecke algebra.
type NhMono = (i64, i64, u8);

fn nh_name((a, b, e): NhMono) -> String {
    let mut parts = Vec::new();
    if a > 0 {
        parts.push(power("x1", a));
    }
    if b > 0 {
        parts.push(power("x2", b));
    }
    if e == 1 {
        parts.push("d".to_string());
    }
    if parts.is_empty() {
        "1".to_string()
    } else {
        parts.join("")
    }
}

fn nh_degree((a, b, e): NhMono) -> i64 {
    2 * (a + b) - 2 * e as i64
}

/// Demazure operator on a monomial: `(f - s f) / (x1 - x2)`.
pub fn demazure(a: i64, b: i64) -> Vec<((i64, i64), i64)> {
    let (lo, hi, sign) = if a >= b { (b, a, 1) } else { (a, b, -1) };
    (0..hi - lo).map(|i| ((lo + i, lo + (hi - lo - 1 - i)), sign)).collect()
}

/// Nil-Hecke algebra on two strands: basis `x1^a x2^b ∂^e`, `deg x = 2`, `deg ∂ = -2`.
pub fn nilhecke2(cutoff: i64) -> AlgebraData {
    let mut d = base("NH2", cutoff);
    d.objects = strings(&["s"]);
    d.weights = strings(&["0"]);
    d.specials = vec![special("s", "0")];
    let mut basis: Vec<(String, i64, NhMono)> = Vec::new();
    let top = (cutoff + 2).max(0) / 2;
    for total in 0..=top {
        for a in 0..=total {
            for e in 0..=1u8 {
                let m = (a, total - a, e);
                if nh_degree(m) <= cutoff {
                    basis.push((nh_name(m), nh_degree(m), m));
                }
            }
        }
    }
    for (id, deg, m) in &basis {
        let kind = if *m == (0, 0, 0) { Kind::Idempotent } else { Kind::H };
        d.factors.push(factor(id, kind, "s", "s", *deg, ("s", "s")));
    }
    d.products = monomial_products(&basis, cutoff, |&(a, b, e), &(c, dd, f)| {
        if e == 0 {
            return vec![((a + c, b + dd, f), 1)];
        }
        // ∂ p = s(p) ∂ + ∂(p), and ∂² = 0.
        let mut out = Vec::new();
        if f == 0 {
            out.push(((a + dd, b + c, 1), 1));
        }
        for ((u, v), s) in demazure(c, dd) {
            out.push(((a + u, b + v, f), s));
        }
        out
    });
    d.lower = vec![("s".into(), "s".into(), -2)];
    d
}

/// Two objects of the same weight, used to exercise weight contraction.
pub fn twin(cutoff: i64) -> AlgebraData {
    let f = Field::Rational;
    let mut d = base("twin", cutoff);
    d.finite = true;
    d.objects = strings(&["s", "t"]);
    d.weights = strings(&["0"]);
    d.specials = vec![special("s", "0"), special("t", "0")];
    d.factors = vec![
        factor("es", Kind::Idempotent, "s", "s", 0, ("s", "s")),
        factor("et", Kind::Idempotent, "t", "t", 0, ("t", "t")),
        factor("h", Kind::H, "t", "s", 0, ("s", "t")),
    ];
    let p = |a: &str, b: &str, c: &str| (a.to_string(), b.to_string(), vec![(c.to_string(), f.one())]);
    d.products = vec![p("es", "es", "es"), p("et", "et", "et"), p("es", "h", "h"), p("h", "et", "h")];
    d
}

/// Names of the corpus algebras accepted by [`by_name`].
pub const NAMES: [&str; 6] = ["ground", "matrix", "poly", "e1", "nilhecke2", "twin"];

/// Looks up a corpus algebra as `name` or `name:param`, where the parameter is
/// the cutoff (or the size for `matrix`).
pub fn by_name(spec: &str) -> Result<AlgebraData> {
    let (name, param) = match spec.split_once(':') {
        Some((n, p)) => {
            let v: i64 = p.parse().map_err(|_| Error::Usage(format!("bad corpus parameter `{p}`")))?;
            (n, Some(v))
        }
        None => (spec, None),
    };
    Ok(match name {
        "ground" => ground(),
        "matrix" => matrix(param.unwrap_or(2).max(1) as usize),
        "poly" => poly(param.unwrap_or(16)),
        "e1" => e1(param.unwrap_or(16)),
        "nilhecke2" => nilhecke2(param.unwrap_or(16)),
        "twin" => twin(param.unwrap_or(0)),
        _ => return Err(Error::Unknown { kind: "corpus algebra", name: name.to_string() }),
    })
}

/// Convenience constructor; corpus data always builds.
pub fn build(data: AlgebraData) -> TriangularAlgebra {
    TriangularAlgebra::build(data).expect("corpus data is consistent")
}

/// A deliberately broken variant of the two-weight example.
#[derive(Clone, Debug)]
pub struct Mutant {
    pub name: &'static str,
    /// The axiom whose check must fail.
    pub axiom: &'static str,
    pub data: AlgebraData,
}

/// Six mutants of the two-weight example, each breaking one axiom.
pub fn mutants(cutoff: i64) -> Vec<Mutant> {
    let good = e1(cutoff);
    let f = Field::Rational;
    let mut out = Vec::new();

    let mut d = good.clone();
    d.name = "E1-no-eta".into();
    d.factors.retain(|x| x.id != "eta");
    out.push(Mutant { name: "deleted-y", axiom: "basis.closure", data: d });

    let mut d = good.clone();
    d.name = "E1-heavy-xi".into();
    d.factors.iter_mut().filter(|x| x.id == "xi").for_each(|x| x.degree = 2);
    out.push(Mutant { name: "wrong-degree", axiom: "degree", data: d });

    let mut d = good.clone();
    d.name = "E1-reversed".into();
    d.covers = vec![("1".into(), "0".into())];
    out.push(Mutant { name: "reversed-order", axiom: "direction", data: d });

    let mut d = good.clone();
    d.name = "E1-extra-x".into();
    d.factors.push(factor("z", Kind::X, "s0", "s0", 1, ("s0", "s0")));
    out.push(Mutant { name: "extra-x-diagonal", axiom: "identity", data: d });

    let mut d = good.clone();
    d.name = "E1-scaled".into();
    for (a, b, t) in d.products.iter_mut() {
        if a == "eta" && b == "xi" {
            *t = vec![("x".into(), f.int(2))];
        }
    }
    out.push(Mutant { name: "scaled-product", axiom: "basis.associativity", data: d });

    let mut d = good;
    d.name = "E1-bound".into();
    d.lower = vec![("s0".into(), "s0".into(), 1)];
    out.push(Mutant { name: "violated-bound", axiom: "lower-bound", data: d });

    out
}
