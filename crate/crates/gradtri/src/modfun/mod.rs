//! Module theory over a graded triangular algebra: standardization functors,
//! the four standard families, simple modules, duality and truncation.

mod gamma;
mod hom;
mod peel;

use std::collections::{BTreeMap, BTreeSet, HashMap};

pub use gamma::{CounitReport, GammaOp};
pub use hom::{HomSpace, IsoResult};
pub use peel::Decomposition;

use crate::algcore::{Kind, TriangularAlgebra, Triple};
use crate::algebra::{elem_add_scaled, Algebra, Elem};
use crate::cartanrep::{analyze_cartan, injective_cartan, projective_cartan, simple_cartan, CartanAlgebra};
use crate::error::{Error, Result};
use crate::glinalg::{Matrix, RowSpace};
use crate::module::{GradedModule, ModBasis, Span, Window};

/// The four standard families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    Std,
    ProperStd,
    ProperCostd,
    Costd,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::Std, Family::ProperStd, Family::ProperCostd, Family::Costd];

    pub fn name(self) -> &'static str {
        match self {
            Family::Std => "STD",
            Family::ProperStd => "PROPER_STD",
            Family::ProperCostd => "PROPER_COSTD",
            Family::Costd => "COSTD",
        }
    }

    /// Short symbol used in module names.
    pub fn symbol(self) -> &'static str {
        match self {
            Family::Std => "Delta",
            Family::ProperStd => "DeltaBar",
            Family::ProperCostd => "NablaBar",
            Family::Costd => "Nabla",
        }
    }

    pub fn parse(s: &str) -> Option<Family> {
        match s.to_ascii_uppercase().replace('-', "_").as_str() {
            "STD" | "DELTA" => Some(Family::Std),
            "PROPER_STD" | "DELTABAR" => Some(Family::ProperStd),
            "PROPER_COSTD" | "NABLABAR" => Some(Family::ProperCostd),
            "COSTD" | "NABLA" => Some(Family::Costd),
            _ => None,
        }
    }
}

/// A block `b` of some Cartan algebra.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BlockRef {
    pub weight: usize,
    pub index: usize,
    pub label: String,
}

/// A triangular algebra together with the analysis of all its Cartan algebras.
#[derive(Clone, Debug)]
pub struct Theory {
    pub tri: TriangularAlgebra,
    /// `A^op` with the same basis indices as `A`.
    pub op_alg: Algebra,
    pub cartans: Vec<CartanAlgebra>,
    pub tau: Option<Vec<usize>>,
}

impl Theory {
    pub fn new(tri: TriangularAlgebra) -> Result<Theory> {
        let mut cartans = Vec::new();
        for l in 0..tri.poset.len() {
            let raw = tri.cartan_algebra(l)?;
            cartans.push(analyze_cartan(raw, &tri.poset.labels[l], tri.data.finite)?);
        }
        let op_alg = tri.alg.opposite(format!("{}^op", tri.alg.name));
        let tau = tri.tau_map()?;
        if let Some(t) = &tau {
            tri.check_anti_automorphism(t)?;
        }
        Ok(Theory { tri, op_alg, cartans, tau })
    }

    pub fn alg(&self) -> &Algebra {
        &self.tri.alg
    }

    pub fn field(&self) -> crate::scalar::Field {
        self.tri.field()
    }

    /// The algebra a module is defined over: `A` or `A^op`.
    pub fn alg_of(&self, m: &GradedModule) -> Result<&Algebra> {
        if m.algebra == self.tri.alg.name {
            Ok(&self.tri.alg)
        } else if m.algebra == self.op_alg.name {
            Ok(&self.op_alg)
        } else {
            Err(Error::Invalid(format!("module {} lives over {}", m.name, m.algebra)))
        }
    }

    /// The other side of `alg_of(m)`.
    pub fn other_side(&self, m: &GradedModule) -> Result<&Algebra> {
        if m.algebra == self.tri.alg.name {
            Ok(&self.op_alg)
        } else {
            self.alg_of(m).map(|_| &self.tri.alg)
        }
    }

    pub fn cartan(&self, l: usize) -> Result<&CartanAlgebra> {
        self.cartans.get(l).ok_or_else(|| Error::Unknown { kind: "weight", name: l.to_string() })
    }

    pub fn blocks(&self) -> Vec<BlockRef> {
        let mut out = Vec::new();
        for (l, c) in self.cartans.iter().enumerate() {
            for (i, b) in c.blocks.iter().enumerate() {
                out.push(BlockRef { weight: l, index: i, label: b.label.clone() });
            }
        }
        out
    }

    pub fn blocks_of(&self, l: usize) -> Vec<BlockRef> {
        self.blocks().into_iter().filter(|b| b.weight == l).collect()
    }

    pub fn block(&self, label: &str) -> Result<BlockRef> {
        self.blocks().into_iter().find(|b| b.label == label).ok_or_else(|| Error::UnknownBlock(label.to_string()))
    }

    /// Objects carrying the special idempotents of weight `l`, in fiber order.
    pub fn fiber_objects(&self, l: usize) -> Vec<usize> {
        self.cartans[l].raw.fiber.iter().map(|&s| self.tri.specials[s].object).collect()
    }

    fn idem_factor(&self, s: usize) -> Result<(usize, usize)> {
        let e = self.tri.specials[s]
            .idempotent
            .ok_or_else(|| Error::Invalid(format!("special {} has no idempotent", self.tri.specials[s].label)))?;
        Ok((e, self.tri.triples[e].h))
    }

    /// Pure-`H` part `h` of a full basis element, as an index of `A_lambda`.
    fn cartan_index(&self, c: &CartanAlgebra, h: usize) -> Result<usize> {
        let full = self
            .tri
            .triple_lookup(&Triple { x: None, h, y: None })
            .ok_or_else(|| Error::Invalid(format!("factor {} is not a basis element", self.tri.factors[h].id)))?;
        c.raw.from_full.get(&full).copied().ok_or_else(|| Error::Invalid("H factor of the wrong weight".into()))
    }

    /// `j^lambda_! V` for a graded `A_lambda`-module `V` bounded below.
    ///
    /// Basis `x (x) v` with `x` running over `X(-, s)` and the identity. Known
    /// up to degree `D + lo(V)`; exact when `V` is finite and `X` is fully listed.
    pub fn standardize(&self, l: usize, vbar: &GradedModule, name: &str) -> Result<GradedModule> {
        let c = self.cartan(l)?;
        let a = self.alg();
        let w = vbar.window;
        if !w.exact_below {
            return Err(Error::WindowTooSmall(format!("{} is not bounded below", vbar.name)));
        }
        let d = a.cutoff;
        let mut xs: Vec<Vec<(Option<usize>, usize)>> = Vec::new();
        for &s in &c.raw.fiber {
            let (e, hf) = self.idem_factor(s)?;
            let mut opts = vec![(None, e)];
            for (fi, f) in self.tri.factors.iter().enumerate() {
                if f.kind == Kind::X && f.pair.1 == self.tri.specials[s].label {
                    if let Some(b) = self.tri.triple_lookup(&Triple { x: Some(fi), h: hf, y: None }) {
                        opts.push((Some(fi), b));
                    }
                }
            }
            xs.push(opts);
        }
        let degs = xs.iter().flatten().map(|(_, b)| a.degree(*b));
        let (xmin, xmax) = (degs.clone().min().unwrap_or(0), degs.max().unwrap_or(0));
        let window = if w.exact_above && self.tri.data.finite_xy && w.hi + xmax - w.lo <= d {
            Window::finite(w.lo + xmin, w.hi + xmax)
        } else {
            let mut hi = d + w.lo;
            if !w.exact_above {
                hi = hi.min(w.hi + xmin);
            }
            Window { lo: w.lo + xmin, hi, exact_below: true, exact_above: false }
        };
        let mut basis = Vec::new();
        let mut origin = Vec::new();
        let mut index: HashMap<(Option<usize>, usize), usize> = HashMap::new();
        for (v, vb) in vbar.basis.iter().enumerate() {
            for &(x, b) in &xs[vb.object] {
                let deg = a.degree(b) + vb.degree;
                if deg > window.hi {
                    continue;
                }
                let label = match x {
                    None => format!("1(x){}", vb.label),
                    Some(fi) => format!("{}(x){}", self.tri.factors[fi].id, vb.label),
                };
                index.insert((x, v), basis.len());
                basis.push(ModBasis { label, object: a.basis[b].to, degree: deg });
                origin.push((b, v));
            }
        }
        let gen_max = vbar.gen_max;
        GradedModule::build(name, a, basis, window, gen_max, |g, m| {
            let (b, v) = origin[m];
            let mut out = Elem::new();
            for (k, coef) in a.product(g, b)? {
                let t = self.tri.triples[*k];
                if t.y.is_some() || self.tri.elem_weight(*k) != l {
                    continue;
                }
                let hl = self.cartan_index(c, t.h)?;
                let hv = vbar
                    .act_basis(c.alg(), hl, v)
                    .ok_or_else(|| Error::WindowTooSmall(format!("{} above its window", vbar.name)))?;
                for (v2, c2) in hv {
                    let tgt = index
                        .get(&(t.x, v2))
                        .ok_or_else(|| Error::WindowTooSmall(format!("standardization of {}", vbar.name)))?;
                    elem_add_scaled(&mut out, coef, &Elem::from([(*tgt, c2)]));
                }
            }
            out.retain(|_, c| !c.is_zero());
            Ok(out)
        })
    }

    /// `j^lambda_* V` for a graded `A_lambda`-module `V` bounded above.
    ///
    /// Basis `delta_{y,v}` of degree `deg v - deg y`; `(g . phi)(y') = phi(y' g)`.
    pub fn costandardize(&self, l: usize, vbar: &GradedModule, name: &str) -> Result<GradedModule> {
        let c = self.cartan(l)?;
        let a = self.alg();
        let w = vbar.window;
        if !w.exact_above {
            return Err(Error::WindowTooSmall(format!("{} is not bounded above", vbar.name)));
        }
        let d = a.cutoff;
        let mut ys: Vec<Vec<(Option<usize>, usize)>> = Vec::new();
        for &s in &c.raw.fiber {
            let (e, hf) = self.idem_factor(s)?;
            let mut opts = vec![(None, e)];
            for (fi, f) in self.tri.factors.iter().enumerate() {
                if f.kind == Kind::Y && f.pair.0 == self.tri.specials[s].label {
                    if let Some(b) = self.tri.triple_lookup(&Triple { x: None, h: hf, y: Some(fi) }) {
                        opts.push((Some(fi), b));
                    }
                }
            }
            ys.push(opts);
        }
        let degs = ys.iter().flatten().map(|(_, b)| a.degree(*b));
        let (ymin, ymax) = (degs.clone().min().unwrap_or(0), degs.max().unwrap_or(0));
        let window = if w.exact_below && self.tri.data.finite_xy && w.hi - (w.lo - ymax) <= d {
            Window::finite(w.lo - ymax, w.hi - ymin)
        } else {
            let mut lo = w.hi - d;
            if !w.exact_below {
                lo = lo.max(w.lo - ymin);
            }
            Window { lo, hi: w.hi - ymin, exact_below: false, exact_above: true }
        };
        let mut basis = Vec::new();
        let mut origin = Vec::new();
        let mut index: HashMap<(usize, usize), usize> = HashMap::new();
        let mut at_object: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (v, vb) in vbar.basis.iter().enumerate() {
            for &(y, b) in &ys[vb.object] {
                let deg = vb.degree - a.degree(b);
                if deg < window.lo {
                    continue;
                }
                let label = match y {
                    None => format!("d[1,{}]", vb.label),
                    Some(fi) => format!("d[{},{}]", self.tri.factors[fi].id, vb.label),
                };
                index.insert((b, v), basis.len());
                basis.push(ModBasis { label, object: a.basis[b].from, degree: deg });
                origin.push((b, v));
            }
        }
        for opts in &ys {
            for &(_, b) in opts {
                at_object.entry(a.basis[b].from).or_default().push(b);
            }
        }
        // Full index of the element `1_s y` named by a term `h y` of `y' g`.
        let ybar = |t: &Triple, h_full: usize| -> Option<usize> {
            let from = a.basis[h_full].from;
            let s = self.tri.specials.iter().position(|sp| sp.object == from)?;
            let (_, hf) = self.idem_factor(s).ok()?;
            self.tri.triple_lookup(&Triple { x: None, h: hf, y: t.y })
        };
        let gen_max = if window.is_finite() { Some(window.hi) } else { None };
        let cogen_min = vbar.cogen_min;
        let mut out_mod = GradedModule::build(name, a, basis, window, gen_max, |g, m| {
            let (b, v) = origin[m];
            let mut out = Elem::new();
            for &b2 in at_object.get(&a.basis[g].to).map_or(&[][..], Vec::as_slice) {
                for (k, coef) in a.product(b2, g)? {
                    let t = self.tri.triples[*k];
                    if t.x.is_some() || self.tri.elem_weight(*k) != l {
                        continue;
                    }
                    let h_full = self.tri.triple_lookup(&Triple { x: None, h: t.h, y: None });
                    if h_full.and_then(|h| ybar(&t, h)) != Some(b) {
                        continue;
                    }
                    let hl = self.cartan_index(c, t.h)?;
                    let hv = vbar
                        .act_basis(c.alg(), hl, v)
                        .ok_or_else(|| Error::WindowTooSmall(format!("{} below its window", vbar.name)))?;
                    for (v2, c2) in hv {
                        let tgt = index
                            .get(&(b2, v2))
                            .ok_or_else(|| Error::WindowTooSmall(format!("costandardization of {}", vbar.name)))?;
                        elem_add_scaled(&mut out, coef, &Elem::from([(*tgt, c2)]));
                    }
                }
            }
            out.retain(|_, c| !c.is_zero());
            Ok(out)
        })?;
        if out_mod.cogen_min.is_none() {
            out_mod.cogen_min = cogen_min;
        }
        Ok(out_mod)
    }

    /// Weights `mu` with `e_mu V != 0`.
    pub fn weights_of(&self, v: &GradedModule) -> BTreeSet<usize> {
        let objs: BTreeSet<usize> = v.basis.iter().map(|b| b.object).collect();
        self.tri.specials.iter().filter(|s| objs.contains(&s.object)).map(|s| s.weight).collect()
    }

    /// `j^lambda V = e_lambda V` as an `A_lambda`-module.
    pub fn cartan_truncate(&self, l: usize, v: &GradedModule) -> Result<GradedModule> {
        let c = self.cartan(l)?;
        if self.weights_of(v).iter().any(|&m| self.tri.poset.lt(m, l)) {
            return Err(Error::WeightNotMinimal(self.tri.poset.labels[l].clone()));
        }
        let objs = self.fiber_objects(l);
        v.restrict(self.alg(), c.alg(), &objs, &c.raw.to_full, format!("j^{} {}", c.weight_label, v.name))
    }

    /// One of the four standard modules attached to `b`.
    pub fn standard(&self, b: &BlockRef, family: Family) -> Result<GradedModule> {
        let c = self.cartan(b.weight)?;
        let name = format!("{}({})", family.symbol(), b.label);
        match family {
            Family::Std => self.standardize(b.weight, &projective_cartan(c, b.index)?, &name),
            Family::ProperStd => self.standardize(b.weight, &simple_cartan(c, b.index)?, &name),
            Family::ProperCostd => self.costandardize(b.weight, &simple_cartan(c, b.index)?, &name),
            Family::Costd => self.costandardize(b.weight, &injective_cartan(c, b.index)?, &name),
        }
    }

    /// `L_lambda(b)` over the Cartan algebra.
    pub fn cartan_simple(&self, b: &BlockRef) -> Result<GradedModule> {
        simple_cartan(self.cartan(b.weight)?, b.index)
    }

    /// The largest submodule `{v : g v` has no component at `objs` for every `g}`.
    pub fn annihilated_span(&self, alg: &Algebra, v: &GradedModule, objs: &BTreeSet<usize>) -> Span {
        let mut spaces = BTreeMap::new();
        let field = v.field;
        for (&(o, n), blk) in v.blocks() {
            let mut rows = Vec::new();
            for g in alg.from_object(o) {
                let to = alg.basis[g].to;
                if !objs.contains(&to) {
                    continue;
                }
                let t = n + alg.degree(g);
                let width = v.block(to, t).len();
                if width == 0 {
                    continue;
                }
                let imgs: Option<Vec<Vec<_>>> =
                    blk.iter().map(|&u| v.act_basis(alg, g, u).map(|e| v.local_coords(to, t, &e))).collect();
                let Some(imgs) = imgs else { continue };
                for i in 0..width {
                    rows.push(imgs.iter().map(|col| col[i].clone()).collect());
                }
            }
            let kernel = if rows.is_empty() {
                RowSpace::full(field, blk.len())
            } else {
                RowSpace::spanned_by(field, blk.len(), Matrix::from_rows(field, blk.len(), &rows).kernel())
            };
            spaces.insert((o, n), kernel);
        }
        Span { spaces }
    }

    /// `L(b) = DeltaBar(b) / M`, `M` the largest submodule killed by `e_lambda`.
    pub fn irreducible(&self, b: &BlockRef) -> Result<GradedModule> {
        let a = self.alg();
        let dbar = self.standard(b, Family::ProperStd)?;
        let objs: BTreeSet<usize> = self.fiber_objects(b.weight).into_iter().collect();
        let m = self.annihilated_span(a, &dbar, &objs);
        let (mut l, _) = dbar.quotient(a, &m, format!("L({})", b.label))?;
        if !l.window.exact_above {
            let top = self.cartan_simple(b)?.window.hi;
            let nmin = (0..a.dim()).filter(|&g| objs.contains(&a.basis[g].to)).map(|g| a.degree(g)).min().unwrap_or(0);
            let bound = top - nmin;
            if bound <= l.window.hi && l.basis.iter().all(|x| x.degree <= bound) {
                l.window.exact_above = true;
            }
        }
        Ok(l)
    }

    /// The graded dual, over the other side.
    pub fn dualize(&self, v: &GradedModule) -> Result<GradedModule> {
        let own = self.alg_of(v)?;
        let other = self.other_side(v)?;
        v.dual(own, other, format!("{}^*", v.name))
    }

    /// `V^{*tau}`: the dual pulled back along `tau`, a left `A`-module again.
    pub fn tau_dualize(&self, v: &GradedModule) -> Result<GradedModule> {
        let tau = self.tau.as_ref().ok_or_else(|| Error::NotAntiAutomorphism("no tau declared".into()))?;
        let d = v.dual(self.alg(), &self.op_alg, "dual")?;
        d.twist(&self.op_alg, self.alg(), tau, format!("{}^*tau", v.name))
    }

    /// The theory of `A^op`, with the index map from `A` into it.
    pub fn opposite(&self) -> Result<(Theory, Vec<usize>)> {
        let op = self.tri.opposite()?;
        let map = self.tri.opposite_map(&op)?;
        Ok((Theory::new(op)?, map))
    }

    /// A module over the opposite theory's algebra, transported to `self.op_alg`.
    pub fn from_opposite(&self, op: &Theory, map: &[usize], v: &GradedModule) -> Result<GradedModule> {
        v.twist(op.alg(), &self.op_alg, map, v.name.clone())
    }

    /// A standard-family module of `A^op` for the block matched to `b` by
    /// position, as a module over `self.op_alg`.
    pub fn opposite_standard(&self, b: &BlockRef, family: Family) -> Result<GradedModule> {
        let (op, map) = self.opposite()?;
        let ob = op
            .blocks_of(b.weight)
            .into_iter()
            .nth(b.index)
            .ok_or_else(|| Error::UnknownBlock(b.label.clone()))?;
        let v = op.standard(&ob, family)?;
        let mut t = self.from_opposite(&op, &map, &v)?;
        t.name = format!("{}^op({})", family.symbol(), b.label);
        Ok(t)
    }

    /// `(Delta^op(b))^*` and relatives, computed through the opposite algebra.
    pub fn dual_of_opposite(&self, b: &BlockRef, family: Family) -> Result<GradedModule> {
        let t = self.opposite_standard(b, family)?;
        t.dual(&self.op_alg, self.alg(), format!("{}^op({})^*", family.symbol(), b.label))
    }
}
