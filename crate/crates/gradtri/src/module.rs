//! Graded modules given by a homogeneous basis, an action table and a window
//! of degrees on which everything is known exactly.

use std::collections::{BTreeMap, HashMap};

use crate::algebra::{elem_add_scaled, Algebra, Elem};
use crate::error::{Error, Result};
use crate::glinalg::{RowSpace, Vector};
use crate::qseries::{Direction, QSeries};
use crate::scalar::{Field, Scalar};

/// Degrees `lo..=hi` are tabulated; beyond them the module is zero on the
/// sides flagged exact and unknown otherwise.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Window {
    pub lo: i64,
    pub hi: i64,
    pub exact_below: bool,
    pub exact_above: bool,
}

impl Window {
    pub fn finite(lo: i64, hi: i64) -> Window {
        Window { lo, hi, exact_below: true, exact_above: true }
    }

    pub fn empty() -> Window {
        Window::finite(0, -1)
    }

    pub fn contains(&self, d: i64) -> bool {
        self.lo <= d && d <= self.hi
    }

    /// Whether the degree-`d` piece is known (tabulated or certainly zero).
    pub fn knows(&self, d: i64) -> bool {
        self.contains(d) || (d < self.lo && self.exact_below) || (d > self.hi && self.exact_above)
    }

    pub fn is_finite(&self) -> bool {
        self.exact_below && self.exact_above
    }

    pub fn describe(&self) -> String {
        let l = if self.exact_below { format!("[{}", self.lo) } else { format!("(..{}", self.lo) };
        let h = if self.exact_above { format!("{}]", self.hi) } else { format!("{}..)", self.hi) };
        format!("{l}, {h}")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModBasis {
    pub label: String,
    pub object: usize,
    pub degree: i64,
}

/// A graded left module over an [`Algebra`], tabulated on a window.
#[derive(Clone, Debug)]
pub struct GradedModule {
    pub name: String,
    pub algebra: String,
    pub field: Field,
    pub objects: Vec<String>,
    pub basis: Vec<ModBasis>,
    pub window: Window,
    /// The module is generated by its pieces of degree at most `gen_max`.
    pub gen_max: Option<i64>,
    /// Every nonzero submodule meets the degrees `>= cogen_min`.
    pub cogen_min: Option<i64>,
    action: HashMap<(usize, usize), Elem>,
    blocks: BTreeMap<(usize, i64), Vec<usize>>,
    pos: Vec<usize>,
}

/// Subspaces of the blocks of a module, in block-local coordinates.
#[derive(Clone, Debug)]
pub struct Span {
    pub spaces: BTreeMap<(usize, i64), RowSpace>,
}

impl Span {
    pub fn dim(&self) -> usize {
        self.spaces.values().map(RowSpace::dim).sum()
    }
}

impl GradedModule {
    /// Tabulates `g . v` for every algebra basis element `g` whose target degree
    /// lies in the window.
    pub fn build(
        name: impl Into<String>,
        alg: &Algebra,
        basis: Vec<ModBasis>,
        window: Window,
        gen_max: Option<i64>,
        mut act: impl FnMut(usize, usize) -> Result<Elem>,
    ) -> Result<GradedModule> {
        let mut m = GradedModule::skeleton(name, alg, basis, window, gen_max);
        for v in 0..m.basis.len() {
            let (o, n) = (m.basis[v].object, m.basis[v].degree);
            let gs: Vec<usize> = alg.from_object(o).filter(|&g| window.contains(n + alg.degree(g))).collect();
            for g in gs {
                let r = act(g, v)?;
                if !r.is_empty() {
                    m.action.insert((g, v), r);
                }
            }
        }
        Ok(m)
    }

    fn skeleton(
        name: impl Into<String>,
        alg: &Algebra,
        basis: Vec<ModBasis>,
        window: Window,
        gen_max: Option<i64>,
    ) -> GradedModule {
        let mut blocks: BTreeMap<(usize, i64), Vec<usize>> = BTreeMap::new();
        let mut pos = Vec::with_capacity(basis.len());
        for (i, b) in basis.iter().enumerate() {
            let e = blocks.entry((b.object, b.degree)).or_default();
            pos.push(e.len());
            e.push(i);
        }
        GradedModule {
            name: name.into(),
            algebra: alg.name.clone(),
            field: alg.field,
            objects: alg.objects.clone(),
            basis,
            window,
            gen_max,
            cogen_min: if window.is_finite() { Some(window.lo) } else { None },
            action: HashMap::new(),
            blocks,
            pos,
        }
    }

    pub fn zero(name: impl Into<String>, alg: &Algebra) -> GradedModule {
        GradedModule::skeleton(name, alg, Vec::new(), Window::empty(), Some(i64::MIN))
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty() && self.window.is_finite()
    }

    pub fn block(&self, object: usize, degree: i64) -> &[usize] {
        self.blocks.get(&(object, degree)).map_or(&[], Vec::as_slice)
    }

    pub fn blocks(&self) -> impl Iterator<Item = (&(usize, i64), &Vec<usize>)> {
        self.blocks.iter()
    }

    /// Position of a basis vector inside its block.
    pub fn local(&self, v: usize) -> usize {
        self.pos[v]
    }

    pub fn vector(&self, v: usize) -> Elem {
        Elem::from([(v, self.field.one())])
    }

    pub fn degrees(&self) -> impl Iterator<Item = i64> + '_ {
        let mut ds: Vec<i64> = self.basis.iter().map(|b| b.degree).collect();
        ds.sort();
        ds.dedup();
        ds.into_iter()
    }

    /// `g . v` for a basis vector, or `None` when the target degree is unknown.
    pub fn act_basis(&self, alg: &Algebra, g: usize, v: usize) -> Option<Elem> {
        let b = &self.basis[v];
        if alg.basis[g].from != b.object {
            return Some(Elem::new());
        }
        let t = b.degree + alg.degree(g);
        if self.window.contains(t) {
            Some(self.action.get(&(g, v)).cloned().unwrap_or_default())
        } else if self.window.knows(t) {
            Some(Elem::new())
        } else {
            None
        }
    }

    pub fn act(&self, alg: &Algebra, g: usize, v: &Elem) -> Option<Elem> {
        let mut out = Elem::new();
        for (k, c) in v {
            elem_add_scaled(&mut out, c, &self.act_basis(alg, g, *k)?);
        }
        Some(out)
    }

    pub fn act_elem(&self, alg: &Algebra, a: &Elem, v: &Elem) -> Option<Elem> {
        let mut out = Elem::new();
        for (g, c) in a {
            elem_add_scaled(&mut out, c, &self.act(alg, *g, v)?);
        }
        Some(out)
    }

    /// Stored action entries, sorted.
    pub fn action_entries(&self) -> Vec<((usize, usize), &Elem)> {
        let mut v: Vec<_> = self.action.iter().map(|(k, e)| (*k, e)).collect();
        v.sort_by_key(|(k, _)| *k);
        v
    }

    /// Dimension of each nonzero `(object, degree)` piece.
    pub fn character(&self) -> BTreeMap<(usize, i64), usize> {
        self.blocks.iter().map(|(k, v)| (*k, v.len())).collect()
    }

    /// `dim_q 1_o V` (or of all of `V`), with the direction given by the window.
    pub fn dim_q(&self, object: Option<usize>) -> QSeries {
        let mut terms: BTreeMap<i64, u64> = BTreeMap::new();
        for b in &self.basis {
            if object.is_none_or(|o| o == b.object) {
                *terms.entry(-b.degree).or_insert(0) += 1;
            }
        }
        let w = self.window;
        match (w.exact_below, w.exact_above) {
            (true, true) => QSeries::from_terms(Direction::Poly, 0, terms),
            (true, false) => QSeries::from_terms(Direction::Down, w.hi, terms),
            (false, true) => QSeries::from_terms(Direction::Up, -w.lo, terms),
            (false, false) => QSeries::from_terms(Direction::Down, w.hi, terms.into_iter().filter(|(e, _)| -*e >= w.lo)),
        }
    }

    /// Block-local coordinates of the `(object, degree)` component of `v`.
    pub fn local_coords(&self, object: usize, degree: i64, v: &Elem) -> Vector {
        let blk = self.block(object, degree);
        let mut out = vec![self.field.zero(); blk.len()];
        for (k, c) in v {
            let b = &self.basis[*k];
            if b.object == object && b.degree == degree {
                out[self.pos[*k]] = c.clone();
            }
        }
        out
    }

    pub fn from_local(&self, object: usize, degree: i64, x: &[Scalar]) -> Elem {
        self.block(object, degree)
            .iter()
            .zip(x)
            .filter(|(_, c)| !c.is_zero())
            .map(|(v, c)| (*v, c.clone()))
            .collect()
    }

    /// Splits a vector into its homogeneous `(object, degree)` components.
    pub fn components(&self, v: &Elem) -> BTreeMap<(usize, i64), Elem> {
        let mut out: BTreeMap<(usize, i64), Elem> = BTreeMap::new();
        for (k, c) in v {
            let b = &self.basis[*k];
            out.entry((b.object, b.degree)).or_default().insert(*k, c.clone());
        }
        out
    }

    pub fn empty_span(&self) -> Span {
        Span { spaces: BTreeMap::new() }
    }

    /// The submodule generated by homogeneous vectors, on the window.
    pub fn span(&self, alg: &Algebra, gens: &[Elem]) -> Span {
        let mut spaces: BTreeMap<(usize, i64), RowSpace> = BTreeMap::new();
        for gen in gens {
            for ((o, n), part) in self.components(gen) {
                for g in alg.from_object(o) {
                    let t = n + alg.degree(g);
                    if !self.window.contains(t) {
                        continue;
                    }
                    let Some(img) = self.act(alg, g, &part) else { continue };
                    for ((to, td), piece) in self.components(&img) {
                        let len = self.block(to, td).len();
                        let x = self.local_coords(to, td, &piece);
                        spaces.entry((to, td)).or_insert_with(|| RowSpace::new(self.field, len)).insert(x);
                    }
                }
            }
        }
        spaces.retain(|_, s| s.dim() > 0);
        Span { spaces }
    }

    /// Sum of two spans.
    pub fn span_sum(&self, a: &Span, b: &Span) -> Span {
        let mut out = a.clone();
        for (k, s) in &b.spaces {
            let e = out.spaces.entry(*k).or_insert_with(|| RowSpace::new(self.field, s.ambient));
            for v in s.basis() {
                e.insert(v.clone());
            }
        }
        out
    }

    pub fn span_contains(&self, s: &Span, v: &Elem) -> bool {
        self.components(v).iter().all(|((o, d), part)| {
            let x = self.local_coords(*o, *d, part);
            s.spaces.get(&(*o, *d)).map_or(crate::glinalg::is_zero_vec(&x), |sp| sp.contains(&x))
        })
    }

    /// Whether every vector of `a` lies in `b`.
    pub fn span_le(&self, a: &Span, b: &Span) -> bool {
        a.spaces.iter().all(|(k, s)| match b.spaces.get(k) {
            Some(t) => s.is_subspace_of(t),
            None => s.dim() == 0,
        })
    }

    /// Vectors of a span, as module elements.
    pub fn span_vectors(&self, s: &Span) -> Vec<Elem> {
        s.spaces.iter().flat_map(|((o, d), sp)| sp.basis().iter().map(move |r| self.from_local(*o, *d, r))).collect()
    }

    /// The span as a module in its own right; basis vectors are echelon rows.
    pub fn submodule(&self, alg: &Algebra, s: &Span, name: impl Into<String>) -> Result<(GradedModule, Vec<Elem>)> {
        let mut basis = Vec::new();
        let mut reps = Vec::new();
        for ((o, d), sp) in &s.spaces {
            for (k, r) in sp.basis().iter().enumerate() {
                basis.push(ModBasis { label: format!("{}[{}]", self.block_label(*o, *d), k), object: *o, degree: *d });
                reps.push(self.from_local(*o, *d, r));
            }
        }
        let index: BTreeMap<(usize, i64, usize), usize> = {
            let mut m = BTreeMap::new();
            let mut i = 0;
            for ((o, d), sp) in &s.spaces {
                for k in 0..sp.dim() {
                    m.insert((*o, *d, k), i);
                    i += 1;
                }
            }
            m
        };
        let sub = GradedModule::build(name, alg, basis, self.window, None, |g, v| {
            let img = self.act(alg, g, &reps[v]).ok_or_else(|| Error::WindowTooSmall("submodule action".into()))?;
            let mut out = Elem::new();
            for ((o, d), part) in self.components(&img) {
                let x = self.local_coords(o, d, &part);
                let sp = s.spaces.get(&(o, d)).ok_or_else(|| Error::Invalid("span is not a submodule".into()))?;
                let c = sp.coordinates(&x).ok_or_else(|| Error::Invalid("span is not a submodule".into()))?;
                for (k, val) in c.into_iter().enumerate() {
                    if !val.is_zero() {
                        out.insert(index[&(o, d, k)], val);
                    }
                }
            }
            Ok(out)
        })?;
        let mut sub = sub;
        if sub.cogen_min.is_none() {
            sub.cogen_min = self.cogen_min;
        }
        Ok((sub, reps))
    }

    /// Coordinates of `v` in the basis of [`GradedModule::submodule`] built from `s`.
    pub fn sub_coords(&self, s: &Span, v: &Elem) -> Option<Elem> {
        let mut out = Elem::new();
        let mut offset = 0;
        let comps = self.components(v);
        for ((o, d), sp) in &s.spaces {
            if let Some(part) = comps.get(&(*o, *d)) {
                let c = sp.coordinates(&self.local_coords(*o, *d, part))?;
                for (k, val) in c.into_iter().enumerate() {
                    if !val.is_zero() {
                        out.insert(offset + k, val);
                    }
                }
            }
            offset += sp.dim();
        }
        if comps.keys().any(|k| !s.spaces.contains_key(k)) {
            return None;
        }
        Some(out)
    }

    fn block_label(&self, o: usize, d: i64) -> String {
        format!("{}@{}", self.objects[o], d)
    }

    /// `V / S` with representatives taken from the original basis.
    pub fn quotient(&self, alg: &Algebra, s: &Span, name: impl Into<String>) -> Result<(GradedModule, Vec<usize>)> {
        let mut keep = Vec::new();
        for (&(o, d), blk) in &self.blocks {
            match s.spaces.get(&(o, d)) {
                Some(sp) => keep.extend(sp.complement_indices().into_iter().map(|i| blk[i])),
                None => keep.extend(blk.iter().copied()),
            }
        }
        keep.sort();
        let new_index: HashMap<usize, usize> = keep.iter().enumerate().map(|(i, v)| (*v, i)).collect();
        let basis = keep.iter().map(|&v| self.basis[v].clone()).collect();
        let q = GradedModule::build(name, alg, basis, self.window, self.gen_max, |g, v| {
            let img = self
                .act_basis(alg, g, keep[v])
                .ok_or_else(|| Error::WindowTooSmall("quotient action".into()))?;
            Ok(self.reduce_mod(s, &img, &new_index))
        })?;
        Ok((q, keep))
    }

    fn reduce_mod(&self, s: &Span, v: &Elem, new_index: &HashMap<usize, usize>) -> Elem {
        let mut out = Elem::new();
        for ((o, d), part) in self.components(v) {
            let x = self.local_coords(o, d, &part);
            let r = match s.spaces.get(&(o, d)) {
                Some(sp) => sp.reduce(&x),
                None => x,
            };
            for (i, c) in r.into_iter().enumerate() {
                if !c.is_zero() {
                    out.insert(new_index[&self.block(o, d)[i]], c);
                }
            }
        }
        out
    }

    /// Image in the quotient by `s` (as built by [`GradedModule::quotient`]).
    pub fn project(&self, s: &Span, keep: &[usize], v: &Elem) -> Elem {
        let new_index: HashMap<usize, usize> = keep.iter().enumerate().map(|(i, v)| (*v, i)).collect();
        self.reduce_mod(s, v, &new_index)
    }

    /// `q^k V`, whose degree-`d` piece is `V_{d+k}`.
    pub fn shift(&self, k: i64) -> GradedModule {
        let mut m = self.clone();
        for b in m.basis.iter_mut() {
            b.degree -= k;
        }
        m.blocks = m.blocks.into_iter().map(|((o, d), v)| ((o, d - k), v)).collect();
        m.window.lo -= k;
        m.window.hi -= k;
        m.gen_max = m.gen_max.map(|g| g.saturating_sub(k));
        m.cogen_min = m.cogen_min.map(|c| c.saturating_sub(k));
        if k != 0 {
            m.name = format!("q^{k} {}", self.name);
        }
        m
    }

    /// Keeps degrees `<= hi`.
    pub fn truncate_above(&self, hi: i64) -> GradedModule {
        if hi >= self.window.hi {
            return self.clone();
        }
        let keep: Vec<usize> = (0..self.dim()).filter(|&v| self.basis[v].degree <= hi).collect();
        let index: HashMap<usize, usize> = keep.iter().enumerate().map(|(i, v)| (*v, i)).collect();
        let basis = keep.iter().map(|&v| self.basis[v].clone()).collect();
        let mut m = GradedModule {
            basis,
            window: Window { hi, exact_above: false, ..self.window },
            action: HashMap::new(),
            blocks: BTreeMap::new(),
            pos: Vec::new(),
            ..self.clone()
        };
        let mut blocks: BTreeMap<(usize, i64), Vec<usize>> = BTreeMap::new();
        for (i, b) in m.basis.iter().enumerate() {
            let e = blocks.entry((b.object, b.degree)).or_default();
            m.pos.push(e.len());
            e.push(i);
        }
        m.blocks = blocks;
        for ((g, v), e) in &self.action {
            if let Some(&nv) = index.get(v) {
                let img: Elem = e.iter().filter_map(|(k, c)| index.get(k).map(|&nk| (nk, c.clone()))).collect();
                if !img.is_empty() {
                    m.action.insert((*g, nv), img);
                }
            }
        }
        m
    }

    /// Direct sum; the window is the intersection of the windows.
    pub fn direct_sum(alg: &Algebra, mods: &[&GradedModule], name: impl Into<String>) -> Result<GradedModule> {
        if mods.is_empty() {
            return Ok(GradedModule::zero(name, alg));
        }
        let mut window = Window { lo: i64::MIN, hi: i64::MAX, exact_below: true, exact_above: true };
        for m in mods {
            if m.basis.is_empty() && m.window.is_finite() {
                continue;
            }
            window.lo = window.lo.max(if m.window.exact_below { i64::MIN } else { m.window.lo });
            window.hi = window.hi.min(if m.window.exact_above { i64::MAX } else { m.window.hi });
            window.exact_below &= m.window.exact_below;
            window.exact_above &= m.window.exact_above;
        }
        let min_deg = mods.iter().flat_map(|m| m.basis.iter().map(|b| b.degree)).min().unwrap_or(0);
        let max_deg = mods.iter().flat_map(|m| m.basis.iter().map(|b| b.degree)).max().unwrap_or(-1);
        if window.lo == i64::MIN {
            window.lo = min_deg;
        }
        if window.hi == i64::MAX {
            window.hi = max_deg;
        }
        let mut basis = Vec::new();
        let mut origin = Vec::new();
        let mut offsets = Vec::new();
        for (i, m) in mods.iter().enumerate() {
            offsets.push(basis.len());
            for (v, b) in m.basis.iter().enumerate() {
                if window.contains(b.degree) {
                    basis.push(ModBasis { label: format!("{}:{}", i, b.label), ..b.clone() });
                    origin.push((i, v));
                }
            }
        }
        let back: HashMap<(usize, usize), usize> = origin.iter().enumerate().map(|(n, k)| (*k, n)).collect();
        let gen_max = mods.iter().map(|m| m.gen_max).try_fold(i64::MIN, |acc, g| g.map(|g| acc.max(g)));
        let cogen_min = mods.iter().map(|m| m.cogen_min).try_fold(i64::MAX, |acc, c| c.map(|c| acc.min(c)));
        let mut m = GradedModule::build(name, alg, basis, window, gen_max, |g, v| {
            let (i, ov) = origin[v];
            let img = mods[i].act_basis(alg, g, ov).ok_or_else(|| Error::WindowTooSmall("direct sum".into()))?;
            Ok(img.into_iter().filter_map(|(k, c)| back.get(&(i, k)).map(|&n| (n, c))).collect())
        })?;
        if m.cogen_min.is_none() {
            m.cogen_min = cogen_min;
        }
        Ok(m)
    }

    /// The graded dual, a module over the opposite algebra `op` (same basis indices as `alg`).
    pub fn dual(&self, alg: &Algebra, op: &Algebra, name: impl Into<String>) -> Result<GradedModule> {
        let basis = self
            .basis
            .iter()
            .map(|b| ModBasis { label: format!("{}*", b.label), object: b.object, degree: -b.degree })
            .collect();
        let window = Window {
            lo: -self.window.hi,
            hi: -self.window.lo,
            exact_below: self.window.exact_above,
            exact_above: self.window.exact_below,
        };
        let gen_max = if window.is_finite() { Some(window.hi) } else { self.cogen_min.map(|c| -c) };
        let cogen_min = if window.is_finite() { Some(window.lo) } else { self.gen_max.map(|g| -g) };
        // (g . phi_k)(v_l) = phi_k(g v_l).
        let mut m = GradedModule::build(name, op, basis, window, gen_max, |g, k| {
            let n = self.basis[k].degree;
            let mut out = Elem::new();
            for &l in self.block(op.basis[g].to, n - op.degree(g)) {
                let img = self.act_basis(alg, g, l).ok_or_else(|| Error::WindowTooSmall("dual".into()))?;
                if let Some(c) = img.get(&k) {
                    out.insert(l, c.clone());
                }
            }
            Ok(out)
        })?;
        m.cogen_min = cogen_min;
        Ok(m)
    }

    /// Same vector space with `g` of `target` acting as `perm[g]` of `own`.
    pub fn twist(&self, own: &Algebra, target: &Algebra, perm: &[usize], name: impl Into<String>) -> Result<GradedModule> {
        let mut m = GradedModule::build(name, target, self.basis.clone(), self.window, self.gen_max, |g, v| {
            self.act_basis(own, perm[g], v).ok_or_else(|| Error::WindowTooSmall("twist".into()))
        })?;
        m.cogen_min = self.cogen_min;
        Ok(m)
    }

    /// Restriction along an embedding `sub -> alg`: `obj_map` sends objects of
    /// `sub` to objects of `alg`, `elem_map` basis elements likewise.
    pub fn restrict(
        &self,
        alg: &Algebra,
        sub: &Algebra,
        obj_map: &[usize],
        elem_map: &[usize],
        name: impl Into<String>,
    ) -> Result<GradedModule> {
        let mut keep = Vec::new();
        let mut basis = Vec::new();
        for (v, b) in self.basis.iter().enumerate() {
            if let Some(no) = obj_map.iter().position(|&o| o == b.object) {
                keep.push(v);
                basis.push(ModBasis { object: no, ..b.clone() });
            }
        }
        let index: HashMap<usize, usize> = keep.iter().enumerate().map(|(i, v)| (*v, i)).collect();
        GradedModule::build(name, sub, basis, self.window, None, |g, v| {
            let img = self
                .act_basis(alg, elem_map[g], keep[v])
                .ok_or_else(|| Error::WindowTooSmall("restriction".into()))?;
            Ok(img.into_iter().filter_map(|(k, c)| index.get(&k).map(|&n| (n, c))).collect())
        })
    }

    /// Checks `a (b v) = (ab) v` and degree additivity wherever everything is known.
    pub fn check_action(&self, alg: &Algebra) -> Vec<String> {
        let mut bad = Vec::new();
        for ((g, v), img) in self.action_entries() {
            let t = self.basis[v].degree + alg.degree(g);
            if img.keys().any(|k| self.basis[*k].degree != t || self.basis[*k].object != alg.basis[g].to) {
                bad.push(format!("{} . {} leaves its (object, degree) piece", alg.basis[g].id, self.basis[v].label));
            }
        }
        for v in 0..self.dim() {
            let o = self.basis[v].object;
            for b in alg.from_object(o) {
                let Some(bv) = self.act_basis(alg, b, v) else { continue };
                for a in alg.from_object(alg.basis[b].to) {
                    if alg.degree(a) + alg.degree(b) > alg.cutoff {
                        continue;
                    }
                    let Some(left) = self.act(alg, a, &bv) else { continue };
                    let Ok(ab) = alg.mul(&alg.basis_elem(a), &alg.basis_elem(b)) else { continue };
                    let Some(right) = self.act_elem(alg, &ab, &self.vector(v)) else { continue };
                    if left != right {
                        bad.push(format!(
                            "{} ({} {}) differs from ({} {}) {}",
                            alg.basis[a].id, alg.basis[b].id, self.basis[v].label, alg.basis[a].id, alg.basis[b].id, self.basis[v].label
                        ));
                        if bad.len() >= 10 {
                            return bad;
                        }
                    }
                }
            }
        }
        bad
    }

    /// Declares the module generated by the greedy generators found inside its window.
    pub fn assume_generated(&mut self, alg: &Algebra) {
        let top = self.generators(alg).iter().map(|&g| self.basis[g].degree).max();
        self.gen_max = Some(top.unwrap_or(self.window.lo));
    }

    /// Greedy generating set: in increasing degree, basis vectors not yet in the
    /// submodule generated by earlier choices.
    pub fn generators(&self, alg: &Algebra) -> Vec<usize> {
        let mut gens: Vec<usize> = Vec::new();
        let mut span = self.empty_span();
        for (_, blk) in self.blocks_by_degree() {
            for &v in blk {
                let x = self.vector(v);
                if !self.span_contains(&span, &x) {
                    gens.push(v);
                    let more = self.span(alg, &[x]);
                    span = self.span_sum(&span, &more);
                }
            }
        }
        gens
    }

    fn blocks_by_degree(&self) -> Vec<(&(usize, i64), &Vec<usize>)> {
        let mut v: Vec<_> = self.blocks.iter().collect();
        v.sort_by_key(|((o, d), _)| (*d, *o));
        v
    }
}
