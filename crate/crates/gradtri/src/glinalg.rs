//! Exact linear algebra over a [`Field`]: dense matrices, incremental row
//! spaces, graded maps, and the structure theory of finite-dimensional algebras
//! (radical and primitive idempotents).

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::scalar::{Field, Scalar};

pub type Vector = Vec<Scalar>;

pub fn zero_vec(field: Field, n: usize) -> Vector {
    vec![field.zero(); n]
}

pub fn unit_vec(field: Field, n: usize, i: usize) -> Vector {
    let mut v = zero_vec(field, n);
    v[i] = field.one();
    v
}

pub fn is_zero_vec(v: &[Scalar]) -> bool {
    v.iter().all(Scalar::is_zero)
}

pub fn axpy(y: &mut [Scalar], a: &Scalar, x: &[Scalar]) {
    if a.is_zero() {
        return;
    }
    for (yi, xi) in y.iter_mut().zip(x) {
        if !xi.is_zero() {
            *yi = yi.add(&a.mul(xi));
        }
    }
}

pub fn scale(v: &[Scalar], a: &Scalar) -> Vector {
    v.iter().map(|x| x.mul(a)).collect()
}

/// Dense row-major matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub field: Field,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Matrix {
        Matrix { rows, cols, field, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: Field, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_rows(field: Field, cols: usize, rows: &[Vector]) -> Matrix {
        let mut m = Matrix::zeros(field, rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            for (j, x) in r.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    pub fn from_cols(field: Field, rows: usize, cols: &[Vector]) -> Matrix {
        let mut m = Matrix::zeros(field, rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            for (i, x) in c.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: Scalar) {
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> Vector {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> Vector {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        is_zero_vec(&self.data)
    }

    pub fn apply(&self, v: &[Scalar]) -> Vector {
        let mut out = zero_vec(self.field, self.rows);
        for (j, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (i, o) in out.iter_mut().enumerate() {
                let a = self.get(i, j);
                if !a.is_zero() {
                    *o = o.add(&a.mul(x));
                }
            }
        }
        out
    }

    pub fn matmul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix shapes");
        let mut out = Matrix::zeros(self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let v = out.get(i, j).add(&a.mul(b));
                        out.set(i, j, v);
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a.add(b)).collect();
        Matrix { data, ..*self }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a.sub(b)).collect();
        Matrix { data, ..*self }
    }

    pub fn scale(&self, a: &Scalar) -> Matrix {
        Matrix { data: scale(&self.data, a), ..*self }
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else { continue };
            if p != r {
                for j in 0..m.cols {
                    m.data.swap(p * m.cols + j, r * m.cols + j);
                }
            }
            let inv = m.get(r, c).inv().expect("nonzero pivot");
            for j in 0..m.cols {
                let v = m.get(r, j).mul(&inv);
                m.set(r, j, v);
            }
            let pivot_row = m.row(r);
            for i in 0..m.rows {
                if i != r {
                    let f = m.get(i, c).clone();
                    if !f.is_zero() {
                        for j in 0..m.cols {
                            if !pivot_row[j].is_zero() {
                                let v = m.get(i, j).sub(&f.mul(&pivot_row[j]));
                                m.set(i, j, v);
                            }
                        }
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right kernel `{x : Mx = 0}`.
    pub fn kernel(&self) -> Vec<Vector> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = unit_vec(self.field, self.cols, f);
                for (i, &p) in pivots.iter().enumerate() {
                    v[p] = r.get(i, f).neg();
                }
                v
            })
            .collect()
    }

    /// A particular solution of `Mx = b`, if one exists.
    pub fn solve(&self, b: &[Scalar]) -> Option<Vector> {
        let mut aug = Matrix::zeros(self.field, self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols, b[i].clone());
        }
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = zero_vec(self.field, self.cols);
        for (i, &p) in pivots.iter().enumerate() {
            x[p] = r.get(i, self.cols).clone();
        }
        Some(x)
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }
}

/// A subspace of `k^n` kept as reduced echelon rows, grown one vector at a time.
#[derive(Clone, Debug)]
pub struct RowSpace {
    pub field: Field,
    pub ambient: usize,
    rows: Vec<Vector>,
    pivots: Vec<usize>,
}

impl RowSpace {
    pub fn new(field: Field, ambient: usize) -> RowSpace {
        RowSpace { field, ambient, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn spanned_by(field: Field, ambient: usize, vecs: impl IntoIterator<Item = Vector>) -> RowSpace {
        let mut s = RowSpace::new(field, ambient);
        for v in vecs {
            s.insert(v);
        }
        s
    }

    pub fn full(field: Field, ambient: usize) -> RowSpace {
        RowSpace::spanned_by(field, ambient, (0..ambient).map(|i| unit_vec(field, ambient, i)))
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> &[Vector] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Remainder of `v` after elimination against the stored rows.
    pub fn reduce(&self, v: &[Scalar]) -> Vector {
        let mut v = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if !v[p].is_zero() {
                let f = v[p].neg();
                axpy(&mut v, &f, row);
            }
        }
        v
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        is_zero_vec(&self.reduce(v))
    }

    /// Adds `v`; returns whether the dimension grew.
    pub fn insert(&mut self, v: Vector) -> bool {
        let mut v = self.reduce(&v);
        let Some(p) = v.iter().position(|x| !x.is_zero()) else { return false };
        let inv = v[p].inv().unwrap();
        v = scale(&v, &inv);
        for row in self.rows.iter_mut() {
            if !row[p].is_zero() {
                let f = row[p].neg();
                axpy(row, &f, &v);
            }
        }
        let at = self.pivots.partition_point(|&q| q < p);
        self.rows.insert(at, v);
        self.pivots.insert(at, p);
        true
    }

    /// Coordinates of `v` in the echelon basis, if `v` lies in the space.
    pub fn coordinates(&self, v: &[Scalar]) -> Option<Vector> {
        if !self.contains(v) {
            return None;
        }
        Some(self.pivots.iter().map(|&p| v[p].clone()).collect())
    }

    pub fn is_subspace_of(&self, other: &RowSpace) -> bool {
        self.rows.iter().all(|r| other.contains(r))
    }

    pub fn intersect(&self, other: &RowSpace) -> RowSpace {
        // Solve sum a_i r_i = sum b_j s_j.
        let n = self.dim() + other.dim();
        let mut cols: Vec<Vector> = self.rows.clone();
        cols.extend(other.rows.iter().map(|r| r.iter().map(Scalar::neg).collect()));
        let m = Matrix::from_cols(self.field, self.ambient, &cols);
        let mut out = RowSpace::new(self.field, self.ambient);
        for k in m.kernel() {
            let mut v = zero_vec(self.field, self.ambient);
            for (i, row) in self.rows.iter().enumerate() {
                axpy(&mut v, &k[i], row);
            }
            out.insert(v);
        }
        debug_assert!(n >= out.dim());
        out
    }

    /// Standard basis vectors completing this space to the whole ambient space.
    pub fn complement_indices(&self) -> Vec<usize> {
        (0..self.ambient).filter(|i| !self.pivots.contains(i)).collect()
    }
}

/// A degree-homogeneous linear map given blockwise: `V_n -> W_{n+shift}`.
#[derive(Clone, Debug)]
pub struct GradedMap {
    pub shift: i64,
    pub window: (i64, i64),
    pub blocks: BTreeMap<i64, Matrix>,
}

/// Per-degree solution: a particular solution and a kernel basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub particular: Vector,
    pub kernel: Vec<Vector>,
}

/// Solves `M x = t` for each target `(degree, t)`, where `t` lies in `W_{degree+shift}`.
pub fn solve_degreewise(map: &GradedMap, targets: &[(i64, Vector)]) -> Result<Vec<Option<Solution>>> {
    targets
        .iter()
        .map(|(d, t)| {
            if *d < map.window.0 || *d > map.window.1 {
                return Err(Error::DegreeOutsideWindow(*d));
            }
            let Some(m) = map.blocks.get(d) else {
                return Ok(if is_zero_vec(t) { Some(Solution { particular: vec![], kernel: vec![] }) } else { None });
            };
            Ok(m.solve(t).map(|x| {
                debug_assert_eq!(&m.apply(&x), t);
                Solution { particular: x, kernel: m.kernel() }
            }))
        })
        .collect()
}

/// A unital finite-dimensional algebra given by structure constants.
#[derive(Clone, Debug)]
pub struct FinDimAlgebra {
    pub field: Field,
    pub labels: Vec<String>,
    /// `table[i][j]` is the coordinate vector of `b_i * b_j`.
    pub table: Vec<Vec<Vector>>,
    pub unit: Vector,
}

/// A primitive idempotent with the simple block it belongs to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockIdempotent {
    pub idempotent: Vector,
    pub block: usize,
    pub block_dim: usize,
}

impl FinDimAlgebra {
    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn mul(&self, a: &[Scalar], b: &[Scalar]) -> Vector {
        let mut out = zero_vec(self.field, self.dim());
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    axpy(&mut out, &x.mul(y), &self.table[i][j]);
                }
            }
        }
        out
    }

    pub fn basis_vec(&self, i: usize) -> Vector {
        unit_vec(self.field, self.dim(), i)
    }

    /// Matrix of left multiplication by `a`.
    pub fn left_mult(&self, a: &[Scalar]) -> Matrix {
        let cols: Vec<Vector> = (0..self.dim()).map(|j| self.mul(a, &self.basis_vec(j))).collect();
        Matrix::from_cols(self.field, self.dim(), &cols)
    }

    pub fn is_associative(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| {
            (0..n).all(|j| {
                (0..n).all(|k| {
                    let (a, b, c) = (self.basis_vec(i), self.basis_vec(j), self.basis_vec(k));
                    self.mul(&self.mul(&a, &b), &c) == self.mul(&a, &self.mul(&b, &c))
                })
            })
        })
    }

    fn trace(&self, a: &[Scalar]) -> Scalar {
        let m = self.left_mult(a);
        (0..self.dim()).fold(self.field.zero(), |acc, i| acc.add(m.get(i, i)))
    }

    /// Jacobson radical via the trace form `(a, b) -> tr(L_{ab})`.
    ///
    /// Valid in characteristic zero and in characteristic `p > dim A`.
    pub fn radical(&self) -> Result<RowSpace> {
        let n = self.dim();
        let p = self.field.characteristic();
        if p != 0 && (n as u64) >= p {
            return Err(Error::CharacteristicTooSmall { p, dim: n });
        }
        let mut gram = Matrix::zeros(self.field, n, n);
        for i in 0..n {
            for j in 0..n {
                let prod = self.table[i][j].clone();
                gram.set(i, j, self.trace(&prod));
            }
        }
        Ok(RowSpace::spanned_by(self.field, n, gram.kernel()))
    }

    /// The corner algebra `eAe` with unit `e`, plus its embedding into `A`.
    pub fn corner(&self, e: &[Scalar]) -> (FinDimAlgebra, Vec<Vector>) {
        let mut span = RowSpace::new(self.field, self.dim());
        for i in 0..self.dim() {
            span.insert(self.mul(&self.mul(e, &self.basis_vec(i)), e));
        }
        let basis: Vec<Vector> = span.basis().to_vec();
        let coords = |v: &Vector| span.coordinates(v).expect("corner is closed");
        let table = basis
            .iter()
            .map(|a| basis.iter().map(|b| coords(&self.mul(a, b))).collect())
            .collect();
        let labels = (0..basis.len()).map(|i| format!("c{i}")).collect();
        let unit = coords(&e.to_vec());
        (FinDimAlgebra { field: self.field, labels, table, unit }, basis)
    }

    /// Complete set of orthogonal primitive idempotents refining each of `starts`
    /// (pairwise orthogonal idempotents), grouped into simple blocks.
    ///
    /// Blocks are ordered by their minimal basis label, then by dimension.
    pub fn split_idempotents_from(&self, starts: &[Vector]) -> Result<Vec<BlockIdempotent>> {
        let mut prims = Vec::new();
        for e in starts {
            if !is_zero_vec(e) {
                self.decompose(e.clone(), &mut prims)?;
            }
        }
        let rad = self.radical()?;
        let n = prims.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut Vec<usize>, i: usize) -> usize {
            if p[i] != i {
                let r = find(p, p[i]);
                p[i] = r;
            }
            p[i]
        }
        for i in 0..n {
            for j in 0..n {
                if i != j && self.links(&prims[i], &prims[j], &rad) {
                    let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                    parent[a] = b;
                }
            }
        }
        let min_label = |v: &Vector| -> String {
            v.iter()
                .enumerate()
                .filter(|(_, x)| !x.is_zero())
                .map(|(i, _)| self.labels[i].clone())
                .min()
                .unwrap_or_default()
        };
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for i in 0..n {
            let r = find(&mut parent, i);
            groups.entry(r).or_default().push(i);
        }
        let mut blocks: Vec<(String, usize, Vec<usize>)> = groups
            .into_values()
            .map(|members| {
                let lab = members.iter().map(|&i| min_label(&prims[i])).min().unwrap_or_default();
                (lab, members.len(), members)
            })
            .collect();
        blocks.sort_by(|a, b| (&a.0, a.1).cmp(&(&b.0, b.1)));
        let mut out = Vec::new();
        for (b, (_, dim, members)) in blocks.into_iter().enumerate() {
            for i in members {
                out.push(BlockIdempotent { idempotent: prims[i].clone(), block: b, block_dim: dim });
            }
        }
        Ok(out)
    }

    /// Primitive idempotents refining the unit.
    pub fn split_idempotents(&self) -> Result<Vec<BlockIdempotent>> {
        self.split_idempotents_from(std::slice::from_ref(&self.unit))
    }

    fn links(&self, e: &[Scalar], f: &[Scalar], rad: &RowSpace) -> bool {
        (0..self.dim()).any(|k| {
            let x = self.mul(&self.mul(e, &self.basis_vec(k)), f);
            !rad.contains(&x)
        })
    }

    fn decompose(&self, e: Vector, out: &mut Vec<Vector>) -> Result<()> {
        let (c, emb) = self.corner(&e);
        let rad = c.radical()?;
        if c.dim() - rad.dim() <= 1 {
            out.push(e);
            return Ok(());
        }
        for a in candidates(&c) {
            if let Some(f) = c.split_with(&a) {
                let big = |v: &Vector| {
                    let mut x = zero_vec(self.field, self.dim());
                    for (i, s) in v.iter().enumerate() {
                        axpy(&mut x, s, &emb[i]);
                    }
                    x
                };
                let f_big = big(&f);
                let rest: Vector = e.iter().zip(&f_big).map(|(x, y)| x.sub(y)).collect();
                self.decompose(f_big, out)?;
                return self.decompose(rest, out);
            }
        }
        Err(Error::NotSplit)
    }

    /// Powers `1, a, a^2, ...` until dependence; returns the monic minimal polynomial
    /// (coefficients by increasing degree).
    pub fn min_poly(&self, a: &[Scalar]) -> Vec<Scalar> {
        let n = self.dim();
        let mut powers: Vec<Vector> = vec![self.unit.clone()];
        loop {
            let k = powers.len();
            let next = self.mul(&powers[k - 1], a);
            let m = Matrix::from_cols(self.field, n, &powers);
            if let Some(x) = m.solve(&next) {
                let mut poly: Vec<Scalar> = x.iter().map(Scalar::neg).collect();
                poly.push(self.field.one());
                return poly;
            }
            powers.push(next);
        }
    }

    fn eval(&self, poly: &[Scalar], a: &[Scalar]) -> Vector {
        let mut acc = zero_vec(self.field, self.dim());
        for c in poly.iter().rev() {
            acc = self.mul(&acc, a);
            axpy(&mut acc, c, &self.unit);
        }
        acc
    }

    /// Newton iteration `e <- 3e^2 - 2e^3` until `e` is idempotent.
    pub fn lift_idempotent(&self, e: &[Scalar]) -> Vector {
        let three = self.field.int(3);
        let two = self.field.int(2);
        let mut e = e.to_vec();
        loop {
            let e2 = self.mul(&e, &e);
            if e2 == e {
                return e;
            }
            let e3 = self.mul(&e2, &e);
            e = e2.iter().zip(&e3).map(|(x, y)| three.mul(x).sub(&two.mul(y))).collect();
        }
    }

    /// A proper nonzero idempotent in `k[a]` when `a` has a rational eigenvalue
    /// and at least one other eigenvalue.
    fn split_with(&self, a: &[Scalar]) -> Option<Vector> {
        let m = self.min_poly(a);
        let sf = squarefree_part(&m);
        if sf.len() < 3 {
            return None;
        }
        let r = rational_root(&sf)?;
        let g = divide_linear(&sf, &r);
        let gr = eval_poly(&g, &r);
        let g = scale(&g, &gr.inv()?);
        let e0 = self.eval(&g, a);
        let e = self.lift_idempotent(&e0);
        if is_zero_vec(&e) || e == self.unit {
            return None;
        }
        Some(e)
    }
}

fn candidates(c: &FinDimAlgebra) -> Vec<Vector> {
    let n = c.dim();
    let mut out: Vec<Vector> = (0..n).map(|i| c.basis_vec(i)).collect();
    for k in 1..=3 {
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    let mut v = c.basis_vec(i);
                    axpy(&mut v, &c.field.int(k), &c.basis_vec(j));
                    out.push(v);
                }
            }
        }
    }
    out
}

pub fn eval_poly(p: &[Scalar], x: &Scalar) -> Scalar {
    let f = x.field();
    p.iter().rev().fold(f.zero(), |acc, c| acc.mul(x).add(c))
}

fn trim(mut p: Vec<Scalar>) -> Vec<Scalar> {
    while p.last().is_some_and(Scalar::is_zero) {
        p.pop();
    }
    p
}

fn poly_rem(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    let mut r = trim(a.to_vec());
    let lead = b.last().unwrap().inv().unwrap();
    while r.len() >= b.len() && !r.is_empty() {
        let f = r.last().unwrap().mul(&lead);
        let shift = r.len() - b.len();
        for (i, c) in b.iter().enumerate() {
            r[i + shift] = r[i + shift].sub(&f.mul(c));
        }
        r = trim(r);
    }
    r
}

fn poly_div(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    let f = a[0].field();
    let mut r = trim(a.to_vec());
    let lead = b.last().unwrap().inv().unwrap();
    let mut q = vec![f.zero(); r.len().saturating_sub(b.len()) + 1];
    while r.len() >= b.len() && !r.is_empty() {
        let c = r.last().unwrap().mul(&lead);
        let shift = r.len() - b.len();
        q[shift] = c.clone();
        for (i, bc) in b.iter().enumerate() {
            r[i + shift] = r[i + shift].sub(&c.mul(bc));
        }
        r = trim(r);
    }
    q
}

fn poly_gcd(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
    while !b.is_empty() {
        let r = poly_rem(&a, &b);
        a = b;
        b = r;
    }
    let inv = a.last().unwrap().inv().unwrap();
    scale(&a, &inv)
}

fn squarefree_part(p: &[Scalar]) -> Vec<Scalar> {
    let f = p[0].field();
    let deriv: Vec<Scalar> = p.iter().enumerate().skip(1).map(|(i, c)| c.mul(&f.int(i as i64))).collect();
    let deriv = trim(deriv);
    if deriv.is_empty() {
        return p.to_vec();
    }
    let g = poly_gcd(p, &deriv);
    let q = poly_div(p, &g);
    let inv = q.last().unwrap().inv().unwrap();
    scale(&q, &inv)
}

fn divide_linear(p: &[Scalar], r: &Scalar) -> Vec<Scalar> {
    let f = r.field();
    poly_div(p, &[r.neg(), f.one()])
}

/// A root in the prime field or in `Q` (by the rational root test), if any.
fn rational_root(p: &[Scalar]) -> Option<Scalar> {
    let f = p[0].field();
    match f {
        Field::Prime(q) => (0..q as i64).map(|x| f.int(x)).find(|x| eval_poly(p, x).is_zero()),
        Field::Rational => {
            // Clear denominators.
            let parse = |s: &Scalar| -> (BigInt, BigInt) {
                let t = s.to_string();
                match t.split_once('/') {
                    Some((n, d)) => (n.parse().unwrap(), d.parse().unwrap()),
                    None => (t.parse().unwrap(), BigInt::from(1)),
                }
            };
            let parts: Vec<(BigInt, BigInt)> = p.iter().map(parse).collect();
            let l = parts.iter().fold(BigInt::from(1), |acc, (_, d)| acc.lcm(d));
            let ints: Vec<BigInt> = parts.iter().map(|(n, d)| n * (&l / d)).collect();
            let lowest = ints.iter().position(|c| !c.is_zero())?;
            if lowest > 0 {
                return Some(f.zero());
            }
            let a0 = ints[0].abs().to_u64()?;
            let an = ints.last()?.abs().to_u64()?;
            if a0 > 1_000_000 || an > 1_000_000 {
                return None;
            }
            for num in divisors(a0) {
                for den in divisors(an) {
                    for sign in [1i64, -1] {
                        let x = f.int(sign * num as i64).mul(&f.int(den as i64).inv().unwrap());
                        if eval_poly(p, &x).is_zero() {
                            return Some(x);
                        }
                    }
                }
            }
            None
        }
    }
}

fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::Rational
    }

    /// Algebra from a multiplication rule on basis indices.
    fn algebra(labels: &[&str], rule: impl Fn(usize, usize) -> Option<usize>, unit: Vector) -> FinDimAlgebra {
        let n = labels.len();
        let table = (0..n)
            .map(|i| (0..n).map(|j| rule(i, j).map_or(zero_vec(q(), n), |k| unit_vec(q(), n, k))).collect())
            .collect();
        FinDimAlgebra { field: q(), labels: labels.iter().map(|s| s.to_string()).collect(), table, unit }
    }

    fn matrix_units(n: usize) -> FinDimAlgebra {
        let labels: Vec<String> = (0..n * n).map(|k| format!("E{}{}", k / n, k % n)).collect();
        let refs: Vec<&str> = labels.iter().map(String::as_str).collect();
        let mut unit = zero_vec(q(), n * n);
        for i in 0..n {
            unit[i * n + i] = q().one();
        }
        algebra(&refs, |a, b| if a % n == b / n { Some((a / n) * n + b % n) } else { None }, unit)
    }

    #[test]
    fn solve_small_system() {
        let m = Matrix::from_rows(q(), 2, &[vec![q().one(), q().one()]]);
        let map = GradedMap { shift: 0, window: (0, 0), blocks: [(0, m)].into() };
        let sol = solve_degreewise(&map, &[(0, vec![q().one()])]).unwrap();
        let sol = sol[0].clone().unwrap();
        assert_eq!(sol.particular, vec![q().one(), q().zero()]);
        assert_eq!(sol.kernel, vec![vec![q().int(-1), q().one()]]);
        assert!(solve_degreewise(&map, &[(3, vec![])]).is_err());
    }

    #[test]
    fn identity_and_zero_blocks() {
        let id = Matrix::identity(q(), 2);
        let z = Matrix::zeros(q(), 2, 2);
        let map = GradedMap { shift: 0, window: (0, 1), blocks: [(0, id), (1, z)].into() };
        let e1 = unit_vec(q(), 2, 0);
        let sol = solve_degreewise(&map, &[(0, e1.clone()), (1, zero_vec(q(), 2))]).unwrap();
        assert_eq!(sol[0].as_ref().unwrap().particular, e1);
        assert!(sol[0].as_ref().unwrap().kernel.is_empty());
        assert_eq!(sol[1].as_ref().unwrap().kernel.len(), 2);
    }

    #[test]
    fn radical_of_dual_numbers() {
        let a = algebra(&["1", "x"], |i, j| if i + j <= 1 { Some(i + j) } else { None }, unit_vec(q(), 2, 0));
        let r = a.radical().unwrap();
        assert_eq!(r.basis(), &[unit_vec(q(), 2, 1)]);
        let e = a.split_idempotents().unwrap();
        assert_eq!(e.len(), 1);
        assert_eq!(e[0].idempotent, a.unit);
    }

    #[test]
    fn radical_of_upper_triangular() {
        // basis E00, E01, E11
        let rule = |a: usize, b: usize| match (a, b) {
            (0, 0) => Some(0),
            (0, 1) => Some(1),
            (1, 2) => Some(1),
            (2, 2) => Some(2),
            _ => None,
        };
        let mut unit = zero_vec(q(), 3);
        unit[0] = q().one();
        unit[2] = q().one();
        let a = algebra(&["E00", "E01", "E11"], rule, unit);
        assert!(a.is_associative());
        let r = a.radical().unwrap();
        assert_eq!(r.basis(), &[unit_vec(q(), 3, 1)]);
        let e = a.split_idempotents().unwrap();
        assert_eq!(e.len(), 2);
        assert_ne!(e[0].block, e[1].block);
    }

    #[test]
    fn matrix_algebra_is_one_block() {
        let a = matrix_units(2);
        assert_eq!(a.radical().unwrap().dim(), 0);
        let e = a.split_idempotents().unwrap();
        assert_eq!(e.len(), 2);
        assert_eq!((e[0].block, e[1].block), (0, 0));
        assert_eq!(e[0].block_dim, 2);
    }

    #[test]
    fn product_of_fields_has_two_blocks() {
        let a = algebra(&["e1", "e2"], |i, j| if i == j { Some(i) } else { None }, vec![q().one(), q().one()]);
        let e = a.split_idempotents().unwrap();
        assert_eq!(e.len(), 2);
        assert_eq!(e[0].idempotent, unit_vec(q(), 2, 0));
        assert_eq!((e[0].block, e[1].block), (0, 1));
    }

    #[test]
    fn gaussian_field_is_not_split() {
        // Q(i) with basis 1, i.
        let n = 2;
        let mut table = vec![vec![zero_vec(q(), n); n]; n];
        table[0][0] = unit_vec(q(), 2, 0);
        table[0][1] = unit_vec(q(), 2, 1);
        table[1][0] = unit_vec(q(), 2, 1);
        table[1][1] = vec![q().int(-1), q().zero()];
        let a = FinDimAlgebra { field: q(), labels: vec!["1".into(), "i".into()], table, unit: unit_vec(q(), 2, 0) };
        assert_eq!(a.radical().unwrap().dim(), 0);
        assert_eq!(a.split_idempotents(), Err(Error::NotSplit));
    }

    #[test]
    fn small_characteristic_rejected() {
        let mut a = matrix_units(2);
        a.field = Field::prime(3).unwrap();
        assert!(matches!(a.radical(), Err(Error::CharacteristicTooSmall { .. })));
    }

    #[test]
    fn intersection_and_complement() {
        let f = q();
        let a = RowSpace::spanned_by(f, 3, [unit_vec(f, 3, 0), unit_vec(f, 3, 1)]);
        let b = RowSpace::spanned_by(f, 3, [unit_vec(f, 3, 1), unit_vec(f, 3, 2)]);
        let c = a.intersect(&b);
        assert_eq!(c.basis(), &[unit_vec(f, 3, 1)]);
        assert_eq!(a.complement_indices(), vec![2]);
    }
}
