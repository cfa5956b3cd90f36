//! Locally unital graded algebras given by a homogeneous basis and structure
//! constants up to a degree cutoff.

use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::glinalg::{FinDimAlgebra, Vector};
use crate::scalar::{Field, Scalar};

/// Sparse element: basis index to nonzero coefficient.
pub type Elem = BTreeMap<usize, Scalar>;

/// Basis indices `(a, b)` of a product `a * b`.
pub type Pair = (usize, usize);

pub fn elem_add_scaled(out: &mut Elem, c: &Scalar, x: &Elem) {
    for (k, v) in x {
        let entry = out.entry(*k).or_insert_with(|| c.field().zero());
        *entry = entry.add(&c.mul(v));
        if entry.is_zero() {
            out.remove(k);
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisElem {
    pub id: String,
    /// Source object `j` for an element of `1_i A 1_j`.
    pub from: usize,
    /// Target object `i`.
    pub to: usize,
    pub degree: i64,
}

/// Basis, objects and multiplication table of a locally unital graded algebra.
#[derive(Clone, Debug)]
pub struct Algebra {
    pub name: String,
    pub field: Field,
    pub objects: Vec<String>,
    pub basis: Vec<BasisElem>,
    /// Products of basis elements with total degree at most `cutoff` are known.
    pub cutoff: i64,
    products: HashMap<(usize, usize), Vec<(usize, Scalar)>>,
    index: HashMap<String, usize>,
    by_profile: HashMap<(usize, usize, i64), Vec<usize>>,
    by_from: BTreeMap<(usize, i64), Vec<usize>>,
}

impl Algebra {
    pub fn new(
        name: impl Into<String>,
        field: Field,
        objects: Vec<String>,
        basis: Vec<BasisElem>,
        cutoff: i64,
        products: HashMap<(usize, usize), Vec<(usize, Scalar)>>,
    ) -> Algebra {
        let index = basis.iter().enumerate().map(|(i, b)| (b.id.clone(), i)).collect();
        let mut by_profile: HashMap<(usize, usize, i64), Vec<usize>> = HashMap::new();
        let mut by_from: BTreeMap<(usize, i64), Vec<usize>> = BTreeMap::new();
        for (i, b) in basis.iter().enumerate() {
            by_profile.entry((b.to, b.from, b.degree)).or_default().push(i);
            by_from.entry((b.from, b.degree)).or_default().push(i);
        }
        Algebra { name: name.into(), field, objects, basis, cutoff, products, index, by_profile, by_from }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn lookup(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn object(&self, name: &str) -> Option<usize> {
        self.objects.iter().position(|o| o == name)
    }

    pub fn degree(&self, i: usize) -> i64 {
        self.basis[i].degree
    }

    /// Basis elements of `1_to A_degree 1_from`.
    pub fn profile(&self, to: usize, from: usize, degree: i64) -> &[usize] {
        self.by_profile.get(&(to, from, degree)).map_or(&[], Vec::as_slice)
    }

    /// Basis elements with source `from` and the given degree.
    pub fn from_degree(&self, from: usize, degree: i64) -> &[usize] {
        self.by_from.get(&(from, degree)).map_or(&[], Vec::as_slice)
    }

    /// Basis elements with source `from`, by increasing degree.
    pub fn from_object(&self, from: usize) -> impl Iterator<Item = usize> + '_ {
        self.by_from.range((from, i64::MIN)..=(from, i64::MAX)).flat_map(|(_, v)| v.iter().copied())
    }

    pub fn min_degree(&self) -> Option<i64> {
        self.basis.iter().map(|b| b.degree).min()
    }

    /// Smallest degree of a basis element of `1_to A 1_from`, if any exists up to the cutoff.
    pub fn min_profile_degree(&self, to: usize, from: usize) -> Option<i64> {
        self.basis.iter().filter(|b| b.to == to && b.from == from).map(|b| b.degree).min()
    }

    /// Product of two basis elements.
    pub fn product(&self, a: usize, b: usize) -> Result<&[(usize, Scalar)]> {
        let (ea, eb) = (&self.basis[a], &self.basis[b]);
        if ea.from != eb.to {
            return Ok(&[]);
        }
        let d = ea.degree + eb.degree;
        if d > self.cutoff {
            return Err(Error::CutoffExceeded(d));
        }
        Ok(self.products.get(&(a, b)).map_or(&[], Vec::as_slice))
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Result<Elem> {
        let mut out = Elem::new();
        for (i, x) in a {
            for (j, y) in b {
                let c = x.mul(y);
                for (k, z) in self.product(*i, *j)? {
                    let e = out.entry(*k).or_insert_with(|| self.field.zero());
                    *e = e.add(&c.mul(z));
                }
            }
        }
        out.retain(|_, v| !v.is_zero());
        Ok(out)
    }

    pub fn basis_elem(&self, i: usize) -> Elem {
        Elem::from([(i, self.field.one())])
    }

    /// All stored nonzero products, sorted by factor indices.
    pub fn table(&self) -> Vec<(Pair, &[(usize, Scalar)])> {
        let mut v: Vec<_> = self.products.iter().map(|(k, t)| (*k, t.as_slice())).collect();
        v.sort_by_key(|(k, _)| *k);
        v
    }

    /// The opposite algebra: same basis ids, endpoints swapped, products reversed.
    pub fn opposite(&self, name: impl Into<String>) -> Algebra {
        let basis = self
            .basis
            .iter()
            .map(|b| BasisElem { id: b.id.clone(), from: b.to, to: b.from, degree: b.degree })
            .collect();
        let products = self.products.iter().map(|((a, b), t)| ((*b, *a), t.clone())).collect();
        Algebra::new(name, self.field, self.objects.clone(), basis, self.cutoff, products)
    }

    /// The degree-zero part, as a finite-dimensional algebra with the given unit.
    ///
    /// Fails if the degree-zero part is not closed under multiplication within the cutoff.
    pub fn degree_zero(&self, unit: &Elem) -> Result<(FinDimAlgebra, Vec<usize>)> {
        let idx: Vec<usize> = (0..self.dim()).filter(|&i| self.degree(i) == 0).collect();
        let pos: HashMap<usize, usize> = idx.iter().enumerate().map(|(p, i)| (*i, p)).collect();
        let n = idx.len();
        let mut table = vec![vec![vec![self.field.zero(); n]; n]; n];
        for (p, &i) in idx.iter().enumerate() {
            for (q, &j) in idx.iter().enumerate() {
                for (k, c) in self.product(i, j)? {
                    table[p][q][pos[k]] = c.clone();
                }
            }
        }
        let mut u: Vector = vec![self.field.zero(); n];
        for (k, c) in unit {
            let p = *pos.get(k).ok_or_else(|| Error::Invalid("unit is not in degree zero".into()))?;
            u[p] = c.clone();
        }
        let labels = idx.iter().map(|&i| self.basis[i].id.clone()).collect();
        Ok((FinDimAlgebra { field: self.field, labels, table, unit: u }, idx))
    }

    /// Checks `(ab)c = a(bc)` on every composable triple whose partial products are known.
    ///
    /// Returns the failing triples (at most `limit`). Work is split over `threads`
    /// and merged in index order, so the output does not depend on the thread count.
    pub fn associativity_failures(&self, limit: usize, threads: usize) -> Vec<(usize, usize, usize)> {
        let n = self.dim();
        let threads = threads.max(1).min(n.max(1));
        let chunk = n.div_ceil(threads).max(1);
        let check = |range: std::ops::Range<usize>| -> Vec<(usize, usize, usize)> {
            let mut bad = Vec::new();
            for a in range {
                for b in 0..n {
                    if self.basis[a].from != self.basis[b].to
                        || self.basis[a].degree + self.basis[b].degree > self.cutoff
                    {
                        continue;
                    }
                    for c in 0..n {
                        let (da, db, dc) = (self.degree(a), self.degree(b), self.degree(c));
                        if self.basis[b].from != self.basis[c].to
                            || db + dc > self.cutoff
                            || da + db + dc > self.cutoff
                        {
                            continue;
                        }
                        let (ea, eb, ec) = (self.basis_elem(a), self.basis_elem(b), self.basis_elem(c));
                        let left = self.mul(&ea, &eb).and_then(|ab| self.mul(&ab, &ec));
                        let right = self.mul(&eb, &ec).and_then(|bc| self.mul(&ea, &bc));
                        match (left, right) {
                            (Ok(l), Ok(r)) if l == r => {}
                            (Err(_), _) | (_, Err(_)) => {}
                            _ => {
                                bad.push((a, b, c));
                                if bad.len() >= limit {
                                    return bad;
                                }
                            }
                        }
                    }
                }
            }
            bad
        };
        let mut out: Vec<(usize, usize, usize)> = if threads == 1 {
            check(0..n)
        } else {
            std::thread::scope(|s| {
                let handles: Vec<_> = (0..threads)
                    .map(|t| {
                        let lo = (t * chunk).min(n);
                        let hi = ((t + 1) * chunk).min(n);
                        s.spawn(move || check(lo..hi))
                    })
                    .collect();
                handles.into_iter().flat_map(|h| h.join().expect("worker panicked")).collect()
            })
        };
        out.sort();
        out.truncate(limit);
        out
    }
}
