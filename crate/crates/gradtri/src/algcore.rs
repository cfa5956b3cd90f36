//! Algebras presented by a graded triangular basis.
//!
//! Basis data is declarative ([`AlgebraData`]): factor families `X`, `H`, `Y`,
//! special labels with weights, and structure constants keyed by the ids of
//! full basis elements `x h y`. [`TriangularAlgebra::build`] materializes every
//! product `x h y` up to the degree cutoff.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use crate::algebra::{Algebra, BasisElem, Elem};
use crate::error::{Error, Result};
use crate::glinalg::RowSpace;
use crate::poset::WeightPoset;
use crate::report::Verdict;
use crate::scalar::{Field, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    X,
    H,
    Y,
    Idempotent,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::X => "X",
            Kind::H => "H",
            Kind::Y => "Y",
            Kind::Idempotent => "IDEMPOTENT",
        }
    }

    pub fn parse(s: &str) -> Option<Kind> {
        Some(match s {
            "X" => Kind::X,
            "H" => Kind::H,
            "Y" => Kind::Y,
            "IDEMPOTENT" => Kind::Idempotent,
            _ => return None,
        })
    }
}

/// One element of `X(i,s)`, `H(s,t)` or `Y(t,j)`, or the identity `1_s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorData {
    pub id: String,
    pub kind: Kind,
    pub from: String,
    pub to: String,
    pub degree: i64,
    /// Index pair of the family: `(i,s)` for `X(i,s)`, `(s,t)` for `H(s,t)`, `(t,j)` for `Y(t,j)`.
    pub pair: (String, String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecialData {
    pub label: String,
    pub weight: String,
    /// Object carrying `1_s`; equal to `label` unless weights were contracted.
    pub object: String,
}

/// `a * b = sum c * id`, as `(a, b, [(id, c)])`.
pub type Product = (String, String, Vec<(String, Scalar)>);

/// Declarative description of an algebra with a triangular basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraData {
    pub name: String,
    pub field: Field,
    pub objects: Vec<String>,
    pub weights: Vec<String>,
    /// Pairs `(mu, lambda)` meaning `mu < lambda`.
    pub covers: Vec<(String, String)>,
    pub specials: Vec<SpecialData>,
    pub factors: Vec<FactorData>,
    /// `a * b = sum c * id`; pairs not listed are zero only when `complete`.
    pub products: Vec<Product>,
    pub cutoff: i64,
    pub complete: bool,
    /// Declared lower bounds `N_{i,j}` on degrees of `1_i A 1_j`.
    pub lower: Vec<(String, String, i64)>,
    /// Anti-involution on factor ids, as swapped pairs; unlisted ids are fixed.
    pub tau: Vec<(String, String)>,
    /// The `X` and `Y` families are finite and listed in full.
    pub finite_xy: bool,
    /// Every family is finite and listed in full, so the algebra is finite-dimensional.
    pub finite: bool,
}

impl AlgebraData {
    /// Reinterprets every structure constant over another field.
    pub fn with_field(&self, field: Field) -> Result<AlgebraData> {
        let conv = |c: &Scalar| -> Result<Scalar> {
            field
                .parse(&c.to_string())
                .ok_or_else(|| Error::Invalid(format!("constant {c} has no image in {}", field.label())))
        };
        let mut products = Vec::with_capacity(self.products.len());
        for (a, b, t) in &self.products {
            let terms = t.iter().map(|(id, c)| Ok((id.clone(), conv(c)?))).collect::<Result<Vec<_>>>()?;
            products.push((a.clone(), b.clone(), terms));
        }
        Ok(AlgebraData { field, products, ..self.clone() })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factor {
    pub id: String,
    pub kind: Kind,
    pub from: usize,
    pub to: usize,
    pub degree: i64,
    pub pair: (String, String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Special {
    pub label: String,
    pub weight: usize,
    pub object: usize,
    /// Full-basis index of `1_s`, if declared.
    pub idempotent: Option<usize>,
}

/// Factor indices of a full basis element `x h y`; `None` stands for an identity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Triple {
    pub x: Option<usize>,
    pub h: usize,
    pub y: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Reduction {
    ToSpecial,
    ContractWeights,
}

#[derive(Clone, Debug)]
pub struct TriangularAlgebra {
    pub alg: Algebra,
    pub data: AlgebraData,
    pub poset: WeightPoset,
    pub specials: Vec<Special>,
    pub factors: Vec<Factor>,
    pub triples: Vec<Triple>,
    special_index: HashMap<String, usize>,
    triple_index: HashMap<Triple, usize>,
    declared_pairs: HashSet<(usize, usize)>,
    /// Problems found while resolving the product table.
    pub dangling: Vec<String>,
    /// Product terms naming elements whose degree lies beyond the cutoff.
    pub misdegree: Vec<String>,
}

/// Name of the full basis element `x h y`, omitting identities.
pub fn triple_name(x: Option<&str>, h: &str, h_is_identity: bool, y: Option<&str>) -> String {
    let mut parts: Vec<&str> = Vec::new();
    if let Some(x) = x {
        parts.push(x);
    }
    if !(h_is_identity && (x.is_some() || y.is_some())) {
        parts.push(h);
    }
    if let Some(y) = y {
        parts.push(y);
    }
    parts.join(".")
}

/// One named axiom with its verdict.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomCheck {
    pub name: &'static str,
    pub verdict: Verdict,
    pub details: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    pub algebra: String,
    pub cutoff: i64,
    pub checks: Vec<AxiomCheck>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.verdict == Verdict::Pass)
    }

    pub fn verdict(&self) -> Verdict {
        Verdict::combine(self.checks.iter().map(|c| c.verdict))
    }

    pub fn failing(&self) -> Vec<&'static str> {
        self.checks.iter().filter(|c| c.verdict == Verdict::Fail).map(|c| c.name).collect()
    }
}

/// The unital graded algebra `A_lambda` with its relation to `A`.
#[derive(Clone, Debug)]
pub struct CartanRaw {
    pub weight: usize,
    pub alg: Algebra,
    pub unit: Elem,
    /// `A_lambda` basis index to full-basis index of `A`.
    pub to_full: Vec<usize>,
    pub from_full: HashMap<usize, usize>,
    /// Special labels of the fiber, in object order of `alg`.
    pub fiber: Vec<usize>,
}

impl TriangularAlgebra {
    pub fn build(data: AlgebraData) -> Result<TriangularAlgebra> {
        let field = data.field;
        let mut objects = data.objects.clone();
        objects.sort();
        if objects.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Integrity("duplicate object".into()));
        }
        let obj = |s: &str| objects.iter().position(|o| o == s).ok_or_else(|| Error::Integrity(s.to_string()));
        let mut weights = data.weights.clone();
        weights.sort();
        weights.dedup();
        let poset = WeightPoset::new(weights, &data.covers).map_err(|e| Error::Integrity(e.to_string()))?;

        let mut specials = Vec::new();
        let mut special_index = HashMap::new();
        let mut sorted_specials = data.specials.clone();
        sorted_specials.sort_by(|a, b| a.label.cmp(&b.label));
        for s in &sorted_specials {
            if special_index.contains_key(&s.label) {
                return Err(Error::Integrity(s.label.clone()));
            }
            let weight = poset.index(&s.weight).ok_or_else(|| Error::Integrity(s.weight.clone()))?;
            special_index.insert(s.label.clone(), specials.len());
            specials.push(Special { label: s.label.clone(), weight, object: obj(&s.object)?, idempotent: None });
        }

        let mut factors = Vec::new();
        let mut seen = HashSet::new();
        for f in &data.factors {
            if f.id.is_empty() || f.id.contains('.') || !seen.insert(f.id.clone()) {
                return Err(Error::Integrity(f.id.clone()));
            }
            let (from, to) = (obj(&f.from)?, obj(&f.to)?);
            let needs_special = |l: &str| -> Result<()> {
                if special_index.contains_key(l) {
                    Ok(())
                } else {
                    Err(Error::Integrity(format!("{} (special label {l} of {})", f.id, f.id)))
                }
            };
            match f.kind {
                Kind::X => needs_special(&f.pair.1)?,
                Kind::Y => needs_special(&f.pair.0)?,
                Kind::H | Kind::Idempotent => {
                    needs_special(&f.pair.0)?;
                    needs_special(&f.pair.1)?;
                }
            }
            if f.kind == Kind::Idempotent && (f.pair.0 != f.pair.1 || f.degree != 0 || from != to) {
                return Err(Error::Integrity(f.id.clone()));
            }
            factors.push(Factor { id: f.id.clone(), kind: f.kind, from, to, degree: f.degree, pair: f.pair.clone() });
        }

        let identity_of: HashMap<&str, usize> = factors
            .iter()
            .enumerate()
            .filter(|(_, f)| f.kind == Kind::Idempotent)
            .map(|(i, f)| (f.pair.0.as_str(), i))
            .collect();
        let hs: Vec<usize> = (0..factors.len()).filter(|&i| matches!(factors[i].kind, Kind::H | Kind::Idempotent)).collect();
        let xs: Vec<usize> = (0..factors.len()).filter(|&i| factors[i].kind == Kind::X).collect();
        let ys: Vec<usize> = (0..factors.len()).filter(|&i| factors[i].kind == Kind::Y).collect();

        let mut elems: Vec<(BasisElem, Triple)> = Vec::new();
        let mut beyond: HashMap<String, i64> = HashMap::new();
        for &h in &hs {
            let hf = &factors[h];
            let mut xopts: Vec<Option<usize>> = vec![None];
            xopts.extend(xs.iter().filter(|&&x| factors[x].pair.1 == hf.pair.0 && factors[x].from == hf.to).map(|&x| Some(x)));
            let mut yopts: Vec<Option<usize>> = vec![None];
            yopts.extend(ys.iter().filter(|&&y| factors[y].pair.0 == hf.pair.1 && factors[y].to == hf.from).map(|&y| Some(y)));
            for x in &xopts {
                for y in &yopts {
                    let degree = hf.degree + x.map_or(0, |i| factors[i].degree) + y.map_or(0, |i| factors[i].degree);
                    let is_id = hf.kind == Kind::Idempotent;
                    let id = triple_name(x.map(|i| factors[i].id.as_str()), &hf.id, is_id, y.map(|i| factors[i].id.as_str()));
                    if degree > data.cutoff {
                        beyond.insert(id, degree);
                        continue;
                    }
                    let to = x.map_or(hf.to, |i| factors[i].to);
                    let from = y.map_or(hf.from, |i| factors[i].from);
                    elems.push((BasisElem { id, from, to, degree }, Triple { x: *x, h, y: *y }));
                }
            }
        }
        elems.sort_by(|a, b| (a.0.degree, &a.0.id).cmp(&(b.0.degree, &b.0.id)));
        let mut ids = HashSet::new();
        for (e, _) in &elems {
            if !ids.insert(e.id.clone()) {
                return Err(Error::Integrity(format!("{} (ambiguous full basis name)", e.id)));
            }
        }
        let basis: Vec<BasisElem> = elems.iter().map(|(e, _)| e.clone()).collect();
        let triples: Vec<Triple> = elems.iter().map(|(_, t)| *t).collect();
        let triple_index = triples.iter().enumerate().map(|(i, t)| (*t, i)).collect();
        let index: HashMap<&str, usize> = basis.iter().enumerate().map(|(i, b)| (b.id.as_str(), i)).collect();

        for s in specials.iter_mut() {
            if let Some(&f) = identity_of.get(s.label.as_str()) {
                s.idempotent = index.get(factors[f].id.as_str()).copied();
            }
        }

        let mut products = HashMap::new();
        let mut declared = HashSet::new();
        let mut dangling = Vec::new();
        let mut misdegree = Vec::new();
        for (a, b, terms) in &data.products {
            let (Some(&ia), Some(&ib)) = (index.get(a.as_str()), index.get(b.as_str())) else {
                for id in [a, b] {
                    if !index.contains_key(id.as_str()) && !beyond.contains_key(id.as_str()) {
                        dangling.push(format!("product {a} * {b} references undeclared element {id}"));
                    }
                }
                continue;
            };
            if basis[ia].degree + basis[ib].degree > data.cutoff {
                continue;
            }
            declared.insert((ia, ib));
            let mut resolved: BTreeMap<usize, Scalar> = BTreeMap::new();
            for (id, c) in terms {
                match index.get(id.as_str()) {
                    Some(&k) => {
                        let e = resolved.entry(k).or_insert_with(|| field.zero());
                        *e = e.add(c);
                    }
                    None => match beyond.get(id.as_str()) {
                        Some(d) => misdegree.push(format!(
                            "{a} * {b} has term {id} of degree {d} != {}",
                            basis[ia].degree + basis[ib].degree
                        )),
                        None => dangling.push(format!("product {a} * {b} references undeclared element {id}")),
                    },
                }
            }
            resolved.retain(|_, c| !c.is_zero());
            if !resolved.is_empty() {
                products.insert((ia, ib), resolved.into_iter().collect::<Vec<_>>());
            }
        }
        let alg = Algebra::new(data.name.clone(), field, objects, basis, data.cutoff, products);
        Ok(TriangularAlgebra {
            alg,
            data,
            poset,
            specials,
            factors,
            triples,
            special_index,
            triple_index,
            declared_pairs: declared,
            dangling,
            misdegree,
        })
    }

    pub fn name(&self) -> &str {
        &self.alg.name
    }

    pub fn field(&self) -> Field {
        self.alg.field
    }

    pub fn cutoff(&self) -> i64 {
        self.alg.cutoff
    }

    pub fn special(&self, label: &str) -> Option<usize> {
        self.special_index.get(label).copied()
    }

    /// Weight of a full basis element: the weight of its `H` factor.
    pub fn elem_weight(&self, b: usize) -> usize {
        let h = &self.factors[self.triples[b].h];
        self.specials[self.special_index[&h.pair.0]].weight
    }

    pub fn is_pure_h(&self, b: usize) -> bool {
        let t = self.triples[b];
        t.x.is_none() && t.y.is_none()
    }

    pub fn triple_lookup(&self, t: &Triple) -> Option<usize> {
        self.triple_index.get(t).copied()
    }

    /// Special labels of weight `l`, in label order.
    pub fn fiber(&self, l: usize) -> Vec<usize> {
        (0..self.specials.len()).filter(|&s| self.specials[s].weight == l).collect()
    }

    /// Weight of an object carrying special idempotents, if all share one weight.
    pub fn object_weight(&self, o: usize) -> Option<usize> {
        let ws: BTreeSet<usize> = self.specials.iter().filter(|s| s.object == o).map(|s| s.weight).collect();
        if ws.len() == 1 {
            ws.into_iter().next()
        } else {
            None
        }
    }

    /// Objects carrying the special idempotents of the given weights.
    pub fn objects_of_weights(&self, ws: &[usize]) -> BTreeSet<usize> {
        self.specials.iter().filter(|s| ws.contains(&s.weight)).map(|s| s.object).collect()
    }

    /// Every special label sits on its own object.
    pub fn is_uncontracted(&self) -> bool {
        let objs: BTreeSet<usize> = self.specials.iter().map(|s| s.object).collect();
        objs.len() == self.specials.len() && self.specials.iter().all(|s| self.alg.objects[s.object] == s.label)
    }

    fn require_uncontracted(&self) -> Result<()> {
        if self.is_uncontracted() {
            Ok(())
        } else {
            Err(Error::Invalid("operation needs one object per special label".into()))
        }
    }

    /// Checks the axioms of a graded triangular basis on the materialized data.
    pub fn verify_axioms(&self, threads: usize) -> VerificationReport {
        let a = &self.alg;
        let name = |i: usize| a.basis[i].id.clone();
        let mut checks = Vec::new();

        // Closure: the table only produces declared basis elements of the right profile.
        let mut closure = self.dangling.clone();
        for ((i, j), terms) in a.table() {
            let (ei, ej) = (&a.basis[i], &a.basis[j]);
            if ei.from != ej.to {
                closure.push(format!("{} * {} is not composable but has a product", name(i), name(j)));
            }
            for (k, _) in terms {
                let ek = &a.basis[*k];
                if ek.to != ei.to || ek.from != ej.from {
                    let prof = format!("({},{})", a.objects[ei.to], a.objects[ej.from]);
                    closure.push(format!("{} * {} has term {} outside profile {prof}", name(i), name(j), name(*k)));
                }
            }
        }
        let mut unknown = 0usize;
        if !self.data.complete {
            for i in 0..a.dim() {
                for j in 0..a.dim() {
                    if a.basis[i].from == a.basis[j].to
                        && a.degree(i) + a.degree(j) <= a.cutoff
                        && !self.declared_pairs.contains(&(i, j))
                    {
                        unknown += 1;
                    }
                }
            }
        }
        let verdict = if !closure.is_empty() {
            Verdict::Fail
        } else if unknown > 0 {
            closure.push(format!("{unknown} products unknown (table not marked complete)"));
            Verdict::Inconclusive
        } else {
            Verdict::Pass
        };
        closure.truncate(20);
        checks.push(AxiomCheck { name: "basis.closure", verdict, details: closure });

        let bad = a.associativity_failures(10, threads);
        checks.push(AxiomCheck {
            name: "basis.associativity",
            verdict: if bad.is_empty() { Verdict::Pass } else { Verdict::Fail },
            details: bad.iter().map(|(x, y, z)| format!("({} {}) {} != {} ({} {})", name(*x), name(*y), name(*z), name(*x), name(*y), name(*z))).collect(),
        });

        // Identities.
        let mut ident = Vec::new();
        for f in &self.factors {
            let diag = f.pair.0 == f.pair.1 && self.special_index.contains_key(&f.pair.0);
            if matches!(f.kind, Kind::X | Kind::Y) && diag {
                ident.push(format!("{} lies in {}({},{}) which must be the identity only", f.id, f.kind.name(), f.pair.0, f.pair.1));
            }
        }
        for s in &self.specials {
            let used = self.factors.iter().any(|f| f.pair.0 == s.label || f.pair.1 == s.label);
            match s.idempotent {
                None if used => ident.push(format!("special {} has elements but no declared identity", s.label)),
                Some(e) if self.is_uncontracted() => {
                    for b in 0..a.dim() {
                        let eb = &a.basis[b];
                        let one = a.basis_elem(b);
                        let idem = a.basis_elem(e);
                        if eb.to == s.object && a.degree(b) <= a.cutoff {
                            if let Ok(p) = a.mul(&idem, &one) {
                                if p != one {
                                    ident.push(format!("1_{} * {} != {}", s.label, name(b), name(b)));
                                }
                            }
                        }
                        if eb.from == s.object {
                            if let Ok(p) = a.mul(&one, &idem) {
                                if p != one {
                                    ident.push(format!("{} * 1_{} != {}", name(b), s.label, name(b)));
                                }
                            }
                        }
                    }
                }
                _ => {}
            }
        }
        ident.truncate(20);
        checks.push(AxiomCheck {
            name: "identity",
            verdict: if ident.is_empty() { Verdict::Pass } else { Verdict::Fail },
            details: ident,
        });

        // Directions.
        let mut dir = Vec::new();
        if !self.poset.is_partial_order() {
            dir.push("the weight order has a cycle".to_string());
        }
        let wt = |l: &str| self.special(l).map(|s| self.specials[s].weight);
        for f in &self.factors {
            let (a0, a1) = (wt(&f.pair.0), wt(&f.pair.1));
            let lbl = |w: usize| self.poset.labels[w].clone();
            match (f.kind, a0, a1) {
                (Kind::X, Some(s), Some(t)) if f.pair.0 != f.pair.1 && !self.poset.lt(t, s) => {
                    dir.push(format!("{} in X({},{}) needs {} > {}", f.id, f.pair.0, f.pair.1, lbl(s), lbl(t)))
                }
                (Kind::Y, Some(s), Some(t)) if f.pair.0 != f.pair.1 && !self.poset.lt(s, t) => {
                    dir.push(format!("{} in Y({},{}) needs {} < {}", f.id, f.pair.0, f.pair.1, lbl(s), lbl(t)))
                }
                (Kind::H, Some(s), Some(t)) if s != t => {
                    dir.push(format!("{} in H({},{}) joins weights {} and {}", f.id, f.pair.0, f.pair.1, lbl(s), lbl(t)))
                }
                _ => {}
            }
        }
        checks.push(AxiomCheck {
            name: "direction",
            verdict: if dir.is_empty() { Verdict::Pass } else { Verdict::Fail },
            details: dir,
        });

        // Finiteness: fibers are finite by construction; the final axiom for non-special objects.
        let special_objects: BTreeSet<usize> = self.specials.iter().map(|s| s.object).collect();
        let mut fin = Vec::new();
        for (o, oname) in a.objects.iter().enumerate() {
            if special_objects.contains(&o) {
                continue;
            }
            let reach: BTreeSet<&str> = self
                .factors
                .iter()
                .filter(|f| (f.kind == Kind::X && f.to == o) || (f.kind == Kind::Y && f.from == o))
                .map(|f| if f.kind == Kind::X { f.pair.1.as_str() } else { f.pair.0.as_str() })
                .collect();
            fin.push(format!("object {oname} meets {} special labels", reach.len()));
        }
        checks.push(AxiomCheck { name: "finiteness", verdict: Verdict::Pass, details: fin });

        // Degree additivity.
        let mut deg = self.misdegree.clone();
        for ((i, j), terms) in a.table() {
            for (k, _) in terms {
                if a.degree(*k) != a.degree(i) + a.degree(j) {
                    deg.push(format!(
                        "{} * {} has term {} of degree {} != {}",
                        name(i),
                        name(j),
                        name(*k),
                        a.degree(*k),
                        a.degree(i) + a.degree(j)
                    ));
                }
            }
        }
        deg.truncate(20);
        checks.push(AxiomCheck {
            name: "degree",
            verdict: if deg.is_empty() { Verdict::Pass } else { Verdict::Fail },
            details: deg,
        });

        // Declared lower bounds.
        let mut low = Vec::new();
        for (ti, fj, n) in &self.data.lower {
            let (Some(t), Some(f)) = (a.object(ti), a.object(fj)) else {
                low.push(format!("bound for unknown objects ({ti},{fj})"));
                continue;
            };
            for b in &a.basis {
                if b.to == t && b.from == f && b.degree < *n {
                    low.push(format!("{} has degree {} below the bound {n} for ({ti},{fj})", b.id, b.degree));
                }
            }
        }
        checks.push(AxiomCheck {
            name: "lower-bound",
            verdict: if low.is_empty() { Verdict::Pass } else { Verdict::Fail },
            details: low,
        });

        VerificationReport { algebra: self.name().to_string(), cutoff: a.cutoff, checks }
    }

    /// Declarative data regenerated from the materialized algebra.
    pub fn to_data(&self) -> AlgebraData {
        let a = &self.alg;
        let mut products: Vec<Product> = a
            .table()
            .into_iter()
            .map(|((i, j), t)| {
                (a.basis[i].id.clone(), a.basis[j].id.clone(), t.iter().map(|(k, c)| (a.basis[*k].id.clone(), c.clone())).collect())
            })
            .collect();
        products.sort_by(|x, y| (&x.0, &x.1).cmp(&(&y.0, &y.1)));
        let mut data = self.data.clone();
        data.products = products;
        data.complete = self.data.complete || self.declared_pairs.len() >= self.composable_pairs();
        data
    }

    fn composable_pairs(&self) -> usize {
        let a = &self.alg;
        let mut n = 0;
        for i in 0..a.dim() {
            for j in 0..a.dim() {
                if a.basis[i].from == a.basis[j].to && a.degree(i) + a.degree(j) <= a.cutoff {
                    n += 1;
                }
            }
        }
        n
    }

    /// Keeps the named factors and specials; product terms outside the kept basis are dropped.
    fn restrict(
        &self,
        name: String,
        keep_objects: &BTreeSet<usize>,
        keep_weights: &[usize],
        keep_factor: impl Fn(&Factor) -> bool,
    ) -> Result<TriangularAlgebra> {
        let base = self.to_data();
        let objects: Vec<String> = keep_objects.iter().map(|&o| self.alg.objects[o].clone()).collect();
        let weights: Vec<String> = keep_weights.iter().map(|&w| self.poset.labels[w].clone()).collect();
        let covers = base.covers.iter().filter(|(m, l)| weights.contains(m) && weights.contains(l)).cloned().collect();
        let specials: Vec<SpecialData> = base
            .specials
            .iter()
            .filter(|s| weights.contains(&s.weight) && objects.contains(&s.object))
            .cloned()
            .collect();
        let factors: Vec<FactorData> = self
            .factors
            .iter()
            .zip(&base.factors)
            .filter(|(f, _)| {
                keep_objects.contains(&f.from) && keep_objects.contains(&f.to) && keep_factor(f)
            })
            .map(|(_, d)| d.clone())
            .collect();
        let provisional = AlgebraData {
            name: name.clone(),
            products: Vec::new(),
            objects: objects.clone(),
            weights: weights.clone(),
            covers,
            specials,
            factors,
            lower: base.lower.iter().filter(|(i, j, _)| objects.contains(i) && objects.contains(j)).cloned().collect(),
            tau: Vec::new(),
            ..base.clone()
        };
        let shell = TriangularAlgebra::build(provisional.clone())?;
        let keep: HashSet<&str> = shell.alg.basis.iter().map(|b| b.id.as_str()).collect();
        let products = base
            .products
            .iter()
            .filter(|(a, b, _)| keep.contains(a.as_str()) && keep.contains(b.as_str()))
            .map(|(a, b, t)| (a.clone(), b.clone(), t.iter().filter(|(c, _)| keep.contains(c.as_str())).cloned().collect()))
            .collect();
        let kept_ids: HashSet<&str> = provisional.factors.iter().map(|f| f.id.as_str()).collect();
        let tau = base.tau.iter().filter(|(a, b)| kept_ids.contains(a.as_str()) && kept_ids.contains(b.as_str())).cloned().collect();
        TriangularAlgebra::build(AlgebraData { products, tau, ..provisional })
    }

    /// The quotient by the ideal generated by `1_s` for weights outside the upper set.
    pub fn quotient_upper_set(&self, upper: &[usize]) -> Result<TriangularAlgebra> {
        if !self.poset.is_upper(upper) {
            return Err(Error::NotUpperSet(self.poset.names(upper).join(",")));
        }
        let keep_label = |l: &str| self.special(l).is_some_and(|s| upper.contains(&self.specials[s].weight));
        let objects: BTreeSet<usize> = (0..self.alg.objects.len()).collect();
        let name = format!("{}>=[{}]", self.name(), self.poset.names(upper).join(","));
        self.restrict(name, &objects, upper, |f| match f.kind {
            Kind::X => keep_label(&f.pair.1),
            Kind::Y => keep_label(&f.pair.0),
            _ => keep_label(&f.pair.0),
        })
    }

    /// `A_{>= lambda}`.
    pub fn upper_quotient(&self, l: usize) -> Result<TriangularAlgebra> {
        self.quotient_upper_set(&self.poset.upper_set(l))
    }

    /// The idempotent truncation `e_G A e_G` for a set of weights `G`.
    pub fn corner(&self, ws: &[usize]) -> Result<TriangularAlgebra> {
        self.require_uncontracted()?;
        let objects = self.objects_of_weights(ws);
        let name = format!("{}|[{}]", self.name(), self.poset.names(ws).join(","));
        self.restrict(name, &objects, ws, |_| true)
    }

    /// The Cartan algebra `A_lambda`: pure `H` elements of weight `lambda`.
    pub fn cartan_algebra(&self, l: usize) -> Result<CartanRaw> {
        self.require_uncontracted()?;
        let fiber = self.fiber(l);
        if fiber.is_empty() {
            return Err(Error::EmptyFiber(self.poset.labels[l].clone()));
        }
        let a = &self.alg;
        let fiber_objs: Vec<usize> = fiber.iter().map(|&s| self.specials[s].object).collect();
        let objects: Vec<String> = fiber_objs.iter().map(|&o| a.objects[o].clone()).collect();
        let local = |o: usize| fiber_objs.iter().position(|&x| x == o).unwrap();
        let to_full: Vec<usize> = (0..a.dim()).filter(|&b| self.is_pure_h(b) && self.elem_weight(b) == l).collect();
        let from_full: HashMap<usize, usize> = to_full.iter().enumerate().map(|(i, b)| (*b, i)).collect();
        let basis = to_full
            .iter()
            .map(|&b| BasisElem { id: a.basis[b].id.clone(), from: local(a.basis[b].from), to: local(a.basis[b].to), degree: a.basis[b].degree })
            .collect();
        let mut products = HashMap::new();
        for (i, &bi) in to_full.iter().enumerate() {
            for (j, &bj) in to_full.iter().enumerate() {
                if a.basis[bi].from != a.basis[bj].to || a.degree(bi) + a.degree(bj) > a.cutoff {
                    continue;
                }
                let terms: Vec<(usize, Scalar)> = a
                    .product(bi, bj)?
                    .iter()
                    .filter_map(|(k, c)| from_full.get(k).map(|&p| (p, c.clone())))
                    .collect();
                if !terms.is_empty() {
                    products.insert((i, j), terms);
                }
            }
        }
        let mut unit = Elem::new();
        for &s in &fiber {
            if let Some(e) = self.specials[s].idempotent {
                unit.insert(from_full[&e], self.field().one());
            }
        }
        let name = format!("{}_{}", self.name(), self.poset.labels[l]);
        let alg = Algebra::new(name, self.field(), objects, basis, a.cutoff, products);
        Ok(CartanRaw { weight: l, alg, unit, to_full, from_full, fiber })
    }

    /// The opposite algebra, with `X` and `Y` exchanged.
    pub fn opposite(&self) -> Result<TriangularAlgebra> {
        let base = self.to_data();
        let rename: HashMap<String, String> = self
            .triples
            .iter()
            .enumerate()
            .map(|(b, t)| {
                let h = &self.factors[t.h];
                let new = triple_name(
                    t.y.map(|i| self.factors[i].id.as_str()),
                    &h.id,
                    h.kind == Kind::Idempotent,
                    t.x.map(|i| self.factors[i].id.as_str()),
                );
                (self.alg.basis[b].id.clone(), new)
            })
            .collect();
        let factors = base
            .factors
            .iter()
            .map(|f| FactorData {
                id: f.id.clone(),
                kind: match f.kind {
                    Kind::X => Kind::Y,
                    Kind::Y => Kind::X,
                    k => k,
                },
                from: f.to.clone(),
                to: f.from.clone(),
                degree: f.degree,
                pair: (f.pair.1.clone(), f.pair.0.clone()),
            })
            .collect();
        let r = |s: &String| rename.get(s).cloned().unwrap_or_else(|| s.clone());
        let products = base
            .products
            .iter()
            .map(|(a, b, t)| (r(b), r(a), t.iter().map(|(c, s)| (r(c), s.clone())).collect()))
            .collect();
        let name = match base.name.strip_suffix("^op") {
            Some(n) => n.to_string(),
            None => format!("{}^op", base.name),
        };
        let lower = base.lower.iter().map(|(i, j, n)| (j.clone(), i.clone(), *n)).collect();
        TriangularAlgebra::build(AlgebraData { name, factors, products, lower, ..base })
    }

    /// Basis index map into [`TriangularAlgebra::opposite`]: `xhy` goes to `y h x`.
    pub fn opposite_map(&self, op: &TriangularAlgebra) -> Result<Vec<usize>> {
        let f = |i: usize| -> Result<usize> {
            op.factors
                .iter()
                .position(|g| g.id == self.factors[i].id)
                .ok_or_else(|| Error::Invalid(format!("factor {} missing from the opposite", self.factors[i].id)))
        };
        self.triples
            .iter()
            .enumerate()
            .map(|(b, t)| {
                let new = Triple { x: t.y.map(f).transpose()?, h: f(t.h)?, y: t.x.map(f).transpose()? };
                op.triple_lookup(&new)
                    .ok_or_else(|| Error::Invalid(format!("{} has no opposite", self.alg.basis[b].id)))
            })
            .collect()
    }

    /// Checks that `tau` fixes identities, is an involution and reverses products.
    pub fn check_anti_automorphism(&self, tau: &[usize]) -> Result<()> {
        let a = &self.alg;
        for b in 0..a.dim() {
            if tau[tau[b]] != b {
                return Err(Error::NotAntiAutomorphism(format!("not an involution at {}", a.basis[b].id)));
            }
            let (x, y) = (&a.basis[b], &a.basis[tau[b]]);
            if x.from != y.to || x.to != y.from || x.degree != y.degree {
                return Err(Error::NotAntiAutomorphism(format!("{} and {} do not match", x.id, y.id)));
            }
        }
        for s in &self.specials {
            if let Some(e) = s.idempotent {
                if tau[e] != e {
                    return Err(Error::NotAntiAutomorphism(format!("moves {}", a.basis[e].id)));
                }
            }
        }
        for i in 0..a.dim() {
            for j in 0..a.dim() {
                if a.basis[i].from != a.basis[j].to || a.degree(i) + a.degree(j) > a.cutoff {
                    continue;
                }
                let lhs: Elem = a.product(i, j)?.iter().map(|(k, c)| (tau[*k], c.clone())).collect();
                let rhs: Elem = a.product(tau[j], tau[i])?.iter().cloned().collect();
                if lhs != rhs {
                    return Err(Error::NotAntiAutomorphism(format!(
                        "tau({} {}) differs from tau({}) tau({})",
                        a.basis[i].id, a.basis[j].id, a.basis[j].id, a.basis[i].id
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn reduce_presentation(&self, mode: Reduction) -> Result<TriangularAlgebra> {
        match mode {
            Reduction::ToSpecial => {
                let objects: BTreeSet<usize> = self.specials.iter().map(|s| s.object).collect();
                let all: Vec<usize> = (0..self.poset.len()).collect();
                self.restrict(format!("{}|S", self.name()), &objects, &all, |_| true)
            }
            Reduction::ContractWeights => self.contract_weights(),
        }
    }

    fn contract_weights(&self) -> Result<TriangularAlgebra> {
        let base = self.to_data();
        let special_objects: BTreeSet<String> = self.specials.iter().map(|s| self.alg.objects[s.object].clone()).collect();
        let used: BTreeSet<usize> = self.specials.iter().map(|s| s.weight).collect();
        let wname = |w: usize| self.poset.labels[w].clone();
        if self.alg.objects.iter().any(|o| !special_objects.contains(o) && used.iter().any(|&w| wname(w) == *o)) {
            return Err(Error::Invalid("weight labels clash with non-special objects".into()));
        }
        let obj_map = |o: &str| -> String {
            match self.specials.iter().find(|s| self.alg.objects[s.object] == o) {
                Some(s) => wname(s.weight),
                None => o.to_string(),
            }
        };
        let mut objects: Vec<String> = self.alg.objects.iter().filter(|o| !special_objects.contains(*o)).cloned().collect();
        objects.extend(used.iter().map(|&w| wname(w)));
        let specials = base
            .specials
            .iter()
            .map(|s| SpecialData { label: s.label.clone(), weight: s.weight.clone(), object: wname(self.poset.require(&s.weight).unwrap()) })
            .collect();
        let factors = base
            .factors
            .iter()
            .map(|f| FactorData { from: obj_map(&f.from), to: obj_map(&f.to), ..f.clone() })
            .collect();
        let lower = base.lower.iter().map(|(i, j, n)| (obj_map(i), obj_map(j), *n)).collect();
        let weights: Vec<String> = used.iter().map(|&w| wname(w)).collect();
        let covers = base.covers.iter().filter(|(m, l)| weights.contains(m) && weights.contains(l)).cloned().collect();
        TriangularAlgebra::build(AlgebraData {
            name: format!("{}~", base.name),
            objects,
            weights,
            covers,
            specials,
            factors,
            lower,
            ..base
        })
    }

    /// Dimensions of `A / A e A` per `(to, from, degree)`, where `e` is the sum of
    /// `1_s` over specials of the given weights, computed by linear algebra on products.
    pub fn ideal_quotient_dims(&self, killed: &[usize]) -> Result<BTreeMap<(String, String, i64), usize>> {
        let a = &self.alg;
        let f = self.field();
        let killed_objs = self.objects_of_weights(killed);
        let mut spans: BTreeMap<(usize, usize, i64), RowSpace> = BTreeMap::new();
        let mut pos: HashMap<usize, usize> = HashMap::new();
        for (i, b) in a.basis.iter().enumerate() {
            let key = (b.to, b.from, b.degree);
            pos.insert(i, a.profile(b.to, b.from, b.degree).iter().position(|&x| x == i).unwrap());
            spans.entry(key).or_insert_with(|| RowSpace::new(f, a.profile(b.to, b.from, b.degree).len()));
        }
        for &o in &killed_objs {
            let left: Vec<usize> = (0..a.dim()).filter(|&i| a.basis[i].from == o).collect();
            let right: Vec<usize> = (0..a.dim()).filter(|&j| a.basis[j].to == o).collect();
            for &i in &left {
                for &j in &right {
                    let d = a.degree(i) + a.degree(j);
                    if d > a.cutoff {
                        continue;
                    }
                    let key = (a.basis[i].to, a.basis[j].from, d);
                    let Some(span) = spans.get_mut(&key) else { continue };
                    let mut v = vec![f.zero(); span.ambient];
                    for (k, c) in a.product(i, j)? {
                        v[pos[k]] = c.clone();
                    }
                    span.insert(v);
                }
            }
        }
        Ok(spans
            .into_iter()
            .map(|((t, fr, d), s)| ((a.objects[t].clone(), a.objects[fr].clone(), d), s.ambient - s.dim()))
            .collect())
    }

    /// Dimensions per `(to, from, degree)` of the basis of the algebra.
    pub fn basis_dims(&self) -> BTreeMap<(String, String, i64), usize> {
        let mut m = BTreeMap::new();
        for b in &self.alg.basis {
            *m.entry((self.alg.objects[b.to].clone(), self.alg.objects[b.from].clone(), b.degree)).or_insert(0) += 1;
        }
        m
    }

    /// The anti-involution on full basis elements induced by the factor map `tau`.
    pub fn tau_map(&self) -> Result<Option<Vec<usize>>> {
        if self.data.tau.is_empty() {
            return Ok(None);
        }
        let mut on_factor: HashMap<&str, &str> = HashMap::new();
        for (a, b) in &self.data.tau {
            on_factor.insert(a, b);
            on_factor.insert(b, a);
        }
        let fidx = |id: &str| self.factors.iter().position(|f| f.id == id);
        let image = |i: usize| -> Result<usize> {
            let id = self.factors[i].id.as_str();
            let t = on_factor.get(id).copied().unwrap_or(id);
            fidx(t).ok_or_else(|| Error::NotAntiAutomorphism(format!("unknown factor {t}")))
        };
        let mut out = Vec::with_capacity(self.alg.dim());
        for (b, t) in self.triples.iter().enumerate() {
            let new = Triple { x: t.y.map(image).transpose()?, h: image(t.h)?, y: t.x.map(image).transpose()? };
            let kinds_ok = new.x.is_none_or(|i| self.factors[i].kind == Kind::X)
                && new.y.is_none_or(|i| self.factors[i].kind == Kind::Y)
                && matches!(self.factors[new.h].kind, Kind::H | Kind::Idempotent);
            let img = self.triple_lookup(&new).filter(|_| kinds_ok).ok_or_else(|| {
                Error::NotAntiAutomorphism(format!("image of {} is not a basis element", self.alg.basis[b].id))
            })?;
            out.push(img);
        }
        Ok(Some(out))
    }
}
