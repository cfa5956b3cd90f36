//! Graded Hom spaces by generators and relations, isomorphism search and `Ext^1`.

use std::collections::{BTreeMap, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{Algebra, Elem};
use crate::error::{Error, Result};
use crate::glinalg::{Matrix, RowSpace, Vector};
use crate::module::{GradedModule, ModBasis, Span, Window};
use crate::qseries::{Direction, QSeries};

use super::Theory;

/// `dim_q Hom(V, W) = sum_d dim Hom(V, W)_d q^-d` on its certified window.
#[derive(Clone, Debug)]
pub struct HomSpace {
    pub series: QSeries,
    /// Dimension per map degree `d`, for every certified `d` that was solved.
    pub dims: BTreeMap<i64, usize>,
    /// Certified range of map degrees.
    pub range: (i64, i64),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsoResult {
    pub iso: bool,
    pub reason: String,
}

impl IsoResult {
    fn no(reason: impl Into<String>) -> IsoResult {
        IsoResult { iso: false, reason: reason.into() }
    }
}

/// Relations among `g v_k` in one block `(o, n)` of `V`.
struct RelBlock {
    pairs: Vec<(usize, usize)>,
    kernel: Vec<Vector>,
}

/// Presentation data of `V` used to solve for maps `V -> W`.
pub(crate) struct Presentation<'a> {
    alg: &'a Algebra,
    v: &'a GradedModule,
    pub gens: Vec<usize>,
    rels: BTreeMap<(usize, i64), RelBlock>,
}

const UNBOUNDED: i64 = i64::MAX / 4;
/// Random combinations of the degree-zero Hom basis tried by the iso search.
const ISO_TRIALS: usize = 16;

impl<'a> Presentation<'a> {
    /// Needs `V` bounded below with all generators inside the window.
    pub fn new(alg: &'a Algebra, v: &'a GradedModule) -> Result<Presentation<'a>> {
        if !v.window.exact_below {
            return Err(Error::WindowTooSmall(format!("{} is not bounded below", v.name)));
        }
        let gens = v.generators(alg);
        let gmax = gens.iter().map(|&g| v.basis[g].degree).max();
        let declared = v.gen_max.unwrap_or(UNBOUNDED);
        if !v.window.exact_above && declared.max(gmax.unwrap_or(i64::MIN)) > v.window.hi {
            return Err(Error::WindowTooSmall(format!("generators of {} not certified", v.name)));
        }
        let mut p = Presentation { alg, v, gens, rels: BTreeMap::new() };
        p.build_relations();
        Ok(p)
    }

    pub fn gen_max(&self) -> Option<i64> {
        self.gens.iter().map(|&g| self.v.basis[g].degree).max()
    }

    fn build_relations(&mut self) {
        let (alg, v) = (self.alg, self.v);
        let Some(gmax) = self.gen_max() else { return };
        let top = if v.window.exact_above { gmax + alg.cutoff } else { v.window.hi };
        let mut by_block: BTreeMap<(usize, i64), Vec<(usize, usize)>> = BTreeMap::new();
        for (k, &vk) in self.gens.iter().enumerate() {
            let (o, n0) = (v.basis[vk].object, v.basis[vk].degree);
            for g in alg.from_object(o) {
                let n = n0 + alg.degree(g);
                if n <= top {
                    by_block.entry((alg.basis[g].to, n)).or_default().push((k, g));
                }
            }
        }
        for ((o, n), pairs) in by_block {
            let blk = v.block(o, n);
            let kernel = if blk.is_empty() {
                (0..pairs.len()).map(|i| crate::glinalg::unit_vec(v.field, pairs.len(), i)).collect()
            } else {
                let cols: Option<Vec<Vector>> = pairs
                    .iter()
                    .map(|&(k, g)| v.act_basis(alg, g, self.gens[k]).map(|e| v.local_coords(o, n, &e)))
                    .collect();
                let Some(cols) = cols else { continue };
                Matrix::from_cols(v.field, blk.len(), &cols).kernel()
            };
            if !kernel.is_empty() {
                self.rels.insert((o, n), RelBlock { pairs, kernel });
            }
        }
    }

    /// Variables of degree `d`: coordinates of each `f(v_k)` in its `W` block.
    fn vars(&self, w: &GradedModule, d: i64) -> Result<Vec<(usize, usize)>> {
        let mut out = Vec::new();
        for (k, &vk) in self.gens.iter().enumerate() {
            let (o, n) = (self.v.basis[vk].object, self.v.basis[vk].degree + d);
            if !w.window.knows(n) {
                return Err(Error::WindowTooSmall(format!("{} unknown in degree {n}", w.name)));
            }
            out.extend(w.block(o, n).iter().map(|&x| (k, x)));
        }
        Ok(out)
    }

    /// Basis of `Hom(V, W)_d`, each map given by the images of the generators.
    pub fn solve(&self, w: &GradedModule, d: i64) -> Result<Vec<Vec<Elem>>> {
        let vars = self.vars(w, d)?;
        if vars.is_empty() {
            return Ok(Vec::new());
        }
        let var_index: HashMap<(usize, usize), usize> = vars.iter().enumerate().map(|(i, x)| (*x, i)).collect();
        let field = w.field;
        let mut eqs = RowSpace::new(field, vars.len());
        for (&(o, n), rel) in &self.rels {
            let t = n + d;
            if !w.window.contains(t) {
                continue;
            }
            let width = w.block(o, t).len();
            if width == 0 {
                continue;
            }
            // images[(k, g)]: for each variable of generator k, coordinates of g . w.
            let mut images: Vec<Option<Vec<(usize, Vector)>>> = Vec::new();
            for &(k, g) in &rel.pairs {
                let vk = self.gens[k];
                let src = (self.v.basis[vk].object, self.v.basis[vk].degree + d);
                let mut cols = Vec::new();
                let mut ok = true;
                for &x in w.block(src.0, src.1) {
                    match w.act_basis(self.alg, g, x) {
                        Some(e) => cols.push((var_index[&(k, x)], w.local_coords(o, t, &e))),
                        None => {
                            ok = false;
                            break;
                        }
                    }
                }
                images.push(ok.then_some(cols));
            }
            for r in &rel.kernel {
                let mut rows = vec![vec![field.zero(); vars.len()]; width];
                let mut known = true;
                for (p, c) in r.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let Some(cols) = &images[p] else {
                        known = false;
                        break;
                    };
                    for (var, coords) in cols {
                        for (i, x) in coords.iter().enumerate() {
                            if !x.is_zero() {
                                rows[i][*var] = rows[i][*var].add(&c.mul(x));
                            }
                        }
                    }
                }
                if known {
                    for row in rows {
                        if !crate::glinalg::is_zero_vec(&row) {
                            eqs.insert(row);
                        }
                    }
                }
            }
        }
        let sol = if eqs.dim() == 0 {
            (0..vars.len()).map(|i| crate::glinalg::unit_vec(field, vars.len(), i)).collect()
        } else {
            Matrix::from_rows(field, vars.len(), eqs.basis()).kernel()
        };
        Ok(sol
            .into_iter()
            .map(|x| {
                let mut imgs = vec![Elem::new(); self.gens.len()];
                for (i, c) in x.into_iter().enumerate() {
                    if !c.is_zero() {
                        imgs[vars[i].0].insert(vars[i].1, c);
                    }
                }
                imgs
            })
            .collect())
    }

    /// `f(g v_k) = g f(v_k)`.
    fn eval_on(&self, w: &GradedModule, f: &[Elem], k: usize, g: usize) -> Option<Elem> {
        w.act(self.alg, g, &f[k])
    }

    /// Checks that `f` is bijective on every block of `V` and `W` up to degree `top`.
    fn is_bijective(&self, w: &GradedModule, f: &[Elem], top: i64) -> Option<bool> {
        let mut spanning: BTreeMap<(usize, i64), Vec<(usize, usize)>> = BTreeMap::new();
        for (k, &vk) in self.gens.iter().enumerate() {
            let (o, n0) = (self.v.basis[vk].object, self.v.basis[vk].degree);
            for g in self.alg.from_object(o) {
                let n = n0 + self.alg.degree(g);
                if n <= top {
                    spanning.entry((self.alg.basis[g].to, n)).or_default().push((k, g));
                }
            }
        }
        let mut keys: Vec<(usize, i64)> =
            self.v.blocks().map(|(k, _)| *k).chain(w.blocks().map(|(k, _)| *k)).filter(|k| k.1 <= top).collect();
        keys.sort();
        keys.dedup();
        for (o, n) in keys {
            let dim_v = self.v.block(o, n).len();
            if dim_v != w.block(o, n).len() {
                return Some(false);
            }
            if dim_v == 0 {
                continue;
            }
            let mut src = RowSpace::new(self.v.field, dim_v);
            let mut img = RowSpace::new(self.v.field, dim_v);
            for &(k, g) in spanning.get(&(o, n)).map_or(&[][..], Vec::as_slice) {
                let x = self.v.local_coords(o, n, &self.v.act_basis(self.alg, g, self.gens[k])?);
                if src.insert(x) {
                    img.insert(w.local_coords(o, n, &self.eval_on(w, f, k, g)?));
                }
            }
            if src.dim() < dim_v {
                return None;
            }
            if img.dim() < dim_v {
                return Some(false);
            }
        }
        Some(true)
    }
}

/// Certified range of map degrees for `Hom(V, W)` with the series direction.
fn certified_range(v: &GradedModule, w: &GradedModule, gmax: i64) -> Result<(i64, i64, Direction, i64)> {
    let (vw, ww) = (v.window, w.window);
    if !ww.exact_below && !ww.exact_above {
        return Err(Error::WindowTooSmall(format!("{} is bounded on neither side", w.name)));
    }
    let clo = if ww.exact_below { -UNBOUNDED } else { ww.lo - vw.lo };
    let chi = if ww.exact_above { UNBOUNDED } else { ww.hi - vw.hi };
    let dlo = if ww.exact_below { ww.lo - gmax } else { -UNBOUNDED };
    let dhi = if ww.exact_above { ww.hi - vw.lo } else { UNBOUNDED };
    let (lo, hi) = (clo.max(dlo), chi.min(dhi));
    let (dir, trunc) = if ww.is_finite() {
        (Direction::Poly, 0)
    } else if ww.exact_below {
        (Direction::Down, chi)
    } else {
        (Direction::Up, -clo)
    };
    Ok((lo, hi, dir, trunc))
}

impl Theory {
    /// `dim_q Hom(V, W)` on the window where it is certified.
    pub fn hom_space(&self, v: &GradedModule, w: &GradedModule) -> Result<HomSpace> {
        let alg = self.same_side(v, w)?;
        let p = Presentation::new(alg, v)?;
        let Some(gmax) = p.gen_max() else {
            let (dir, trunc) = if w.window.is_finite() { (Direction::Poly, 0) } else { (Direction::Down, 0) };
            return Ok(HomSpace { series: QSeries::zero(dir, trunc), dims: BTreeMap::new(), range: (0, -1) });
        };
        let (lo, hi, dir, trunc) = certified_range(v, w, gmax)?;
        let mut dims = BTreeMap::new();
        if lo <= hi {
            for d in lo..=hi {
                let n = p.solve(w, d)?.len();
                dims.insert(d, n);
            }
        }
        let series = QSeries::from_terms(dir, trunc, dims.iter().map(|(d, n)| (-d, *n as u64)));
        Ok(HomSpace { series, dims, range: (lo, hi) })
    }

    /// Basis of degree-`d` maps, by images of the generators of `V`.
    pub fn hom_degree(&self, v: &GradedModule, w: &GradedModule, d: i64) -> Result<(Vec<usize>, Vec<Vec<Elem>>)> {
        let alg = self.same_side(v, w)?;
        let p = Presentation::new(alg, v)?;
        let sols = p.solve(w, d)?;
        Ok((p.gens.clone(), sols))
    }

    fn same_side<'s>(&'s self, v: &GradedModule, w: &GradedModule) -> Result<&'s Algebra> {
        let a = self.alg_of(v)?;
        if w.algebra != v.algebra {
            return Err(Error::Invalid(format!("{} and {} live over different algebras", v.name, w.name)));
        }
        Ok(a)
    }

    /// Isomorphism test on the common window: characters first, then a search
    /// over combinations of degree-zero maps.
    pub fn isomorphic(&self, v: &GradedModule, w: &GradedModule) -> Result<IsoResult> {
        self.same_side(v, w)?;
        let (vw, ww) = (v.window, w.window);
        let lo = vw.lo.max(ww.lo);
        let hi = vw.hi.min(ww.hi);
        let cv = v.character();
        let cw = w.character();
        let in_range = |d: i64| {
            (d >= lo || (vw.exact_below && ww.exact_below)) && (d <= hi || (vw.exact_above && ww.exact_above))
        };
        let keys: Vec<(usize, i64)> = cv.keys().chain(cw.keys()).copied().filter(|k| in_range(k.1)).collect();
        for k in keys {
            if cv.get(&k) != cw.get(&k) {
                return Ok(IsoResult::no(format!("characters differ at ({}, {})", v.objects[k.0], k.1)));
            }
        }
        if vw.exact_below && ww.exact_below {
            self.iso_search(v, w)
        } else if vw.exact_above && ww.exact_above {
            self.iso_search(&self.dualize(v)?, &self.dualize(w)?)
        } else {
            Err(Error::WindowTooSmall(format!("cannot compare {} and {}", v.name, w.name)))
        }
    }

    fn iso_search(&self, v: &GradedModule, w: &GradedModule) -> Result<IsoResult> {
        let alg = self.alg_of(v)?;
        if v.dim() == 0 && w.dim() == 0 {
            return Ok(IsoResult { iso: true, reason: "both zero on the window".into() });
        }
        let p = Presentation::new(alg, v)?;
        let sols = p.solve(w, 0)?;
        if sols.is_empty() {
            return Ok(IsoResult::no("no nonzero degree-zero map"));
        }
        let top = v.window.hi.min(w.window.hi);
        let field = v.field;
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        for trial in 0..ISO_TRIALS {
            let mut f = vec![Elem::new(); p.gens.len()];
            for s in &sols {
                let coef = if trial == 0 { field.one() } else { field.int(rng.gen_range(1..=997)) };
                for (k, img) in s.iter().enumerate() {
                    for (x, c) in img {
                        let e = f[k].entry(*x).or_insert_with(|| field.zero());
                        *e = e.add(&coef.mul(c));
                    }
                }
            }
            for img in f.iter_mut() {
                img.retain(|_, c| !c.is_zero());
            }
            match p.is_bijective(w, &f, top) {
                Some(true) => {
                    return Ok(IsoResult { iso: true, reason: format!("degree-zero map bijective up to degree {top}") })
                }
                Some(false) => {}
                None => return Err(Error::WindowTooSmall(format!("{} not spanned by its generators", v.name))),
            }
        }
        Ok(IsoResult::no("no bijective degree-zero map among the tried combinations"))
    }

    /// `dim_q Ext^1(V, W)` via a projective cover `P0 -> V` and `K = ker`.
    pub fn ext1(&self, v: &GradedModule, w: &GradedModule) -> Result<HomSpace> {
        let alg = self.same_side(v, w)?;
        let pv = Presentation::new(alg, v)?;
        let gens: Vec<(usize, i64)> = pv.gens.iter().map(|&g| (v.basis[g].object, v.basis[g].degree)).collect();
        if gens.is_empty() {
            let dir = if w.window.is_finite() { Direction::Poly } else { Direction::Down };
            return Ok(HomSpace { series: QSeries::zero(dir, 0), dims: BTreeMap::new(), range: (0, -1) });
        }
        let (p0, origin) = self.free_cover(alg, &gens, v)?;
        let mut spaces = BTreeMap::new();
        for (&(o, n), blk) in p0.blocks() {
            let target = v.block(o, n);
            let kernel = if target.is_empty() {
                RowSpace::full(p0.field, blk.len())
            } else {
                let cols: Option<Vec<Vector>> = blk
                    .iter()
                    .map(|&m| {
                        let (k, g) = origin[m];
                        v.act_basis(alg, g, pv.gens[k]).map(|e| v.local_coords(o, n, &e))
                    })
                    .collect();
                let cols = cols.ok_or_else(|| Error::WindowTooSmall(format!("{} above its window", v.name)))?;
                RowSpace::spanned_by(p0.field, blk.len(), Matrix::from_cols(p0.field, target.len(), &cols).kernel())
            };
            spaces.insert((o, n), kernel);
        }
        let span = Span { spaces };
        let (mut k, reps) = p0.submodule(alg, &span, format!("ker({})", v.name))?;
        k.assume_generated(alg);
        let pk = Presentation::new(alg, &k)?;
        let Some(gmax) = pk.gen_max() else {
            let dir = if w.window.is_finite() { Direction::Poly } else { Direction::Down };
            return Ok(HomSpace { series: QSeries::zero(dir, 0), dims: BTreeMap::new(), range: (0, -1) });
        };
        let (lo, hi, dir, trunc) = certified_range(&k, w, gmax)?;
        let mut dims = BTreeMap::new();
        if lo <= hi {
            for d in lo..=hi {
                let homk = pk.solve(w, d)?;
                if homk.is_empty() {
                    dims.insert(d, 0);
                    continue;
                }
                // Restrictions of maps P0 -> W, flattened over the generators of K.
                let kvars = pk.vars(w, d)?;
                let kindex: HashMap<(usize, usize), usize> = kvars.iter().enumerate().map(|(i, x)| (*x, i)).collect();
                let mut restricted = RowSpace::new(w.field, kvars.len());
                for (j, &(o, n)) in gens.iter().enumerate() {
                    if !w.window.knows(n + d) {
                        return Err(Error::WindowTooSmall(format!("{} unknown in degree {}", w.name, n + d)));
                    }
                    for &x in w.block(o, n + d) {
                        let mut row: Vector = vec![w.field.zero(); kvars.len()];
                        for (gk, &kv) in pk.gens.iter().enumerate() {
                            for (m, c) in &reps[kv] {
                                let (jj, g) = origin[*m];
                                if jj != j {
                                    continue;
                                }
                                let img = w
                                    .act_basis(alg, g, x)
                                    .ok_or_else(|| Error::WindowTooSmall(format!("{} action", w.name)))?;
                                for (y, c2) in img {
                                    let idx = *kindex
                                        .get(&(gk, y))
                                        .ok_or_else(|| Error::Invalid("restriction leaves its block".into()))?;
                                    row[idx] = row[idx].add(&c.mul(&c2));
                                }
                            }
                        }
                        restricted.insert(row);
                    }
                }
                dims.insert(d, homk.len() - restricted.dim());
            }
        }
        let series = QSeries::from_terms(dir, trunc, dims.iter().map(|(d, n)| (-d, *n as u64)));
        Ok(HomSpace { series, dims, range: (lo, hi) })
    }

    /// `P0 = sum_k q^{-n_k} A 1_{o_k}`, known as far as the cutoff and `V` allow.
    /// `origin[m] = (k, g)` for the basis vector `g` of summand `k`.
    fn free_cover(
        &self,
        alg: &Algebra,
        gens: &[(usize, i64)],
        v: &GradedModule,
    ) -> Result<(GradedModule, Vec<(usize, usize)>)> {
        let nmin = gens.iter().map(|g| g.1).min().unwrap_or(0);
        let nmax = gens.iter().map(|g| g.1).max().unwrap_or(0);
        let amax = (0..alg.dim()).map(|g| alg.degree(g)).max().unwrap_or(0);
        let (hi, exact) = if self.tri.data.finite && v.window.exact_above {
            (nmax + amax, true)
        } else {
            let mut hi = nmin + alg.cutoff;
            if !v.window.exact_above {
                hi = hi.min(v.window.hi);
            }
            (hi, false)
        };
        let mut basis = Vec::new();
        let mut origin = Vec::new();
        let mut index: HashMap<(usize, usize), usize> = HashMap::new();
        for (k, &(o, n)) in gens.iter().enumerate() {
            for g in alg.from_object(o) {
                let deg = n + alg.degree(g);
                if deg <= hi {
                    index.insert((k, g), basis.len());
                    basis.push(ModBasis { label: format!("{}.g{k}", alg.basis[g].id), object: alg.basis[g].to, degree: deg });
                    origin.push((k, g));
                }
            }
        }
        let lo = basis.iter().map(|b| b.degree).min().unwrap_or(nmin);
        let window = Window { lo, hi, exact_below: true, exact_above: exact };
        let m = GradedModule::build("P0", alg, basis, window, Some(nmax), |h, m| {
            let (k, g) = origin[m];
            let mut out = Elem::new();
            for (t, c) in alg.product(h, g)? {
                let i = index.get(&(k, *t)).ok_or_else(|| Error::WindowTooSmall("free cover".into()))?;
                out.insert(*i, c.clone());
            }
            Ok(out)
        })?;
        Ok((m, origin))
    }
}
