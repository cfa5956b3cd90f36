//! Truncation to a finite lower set `Gamma` of weights and its adjoints.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::algcore::TriangularAlgebra;
use crate::algebra::{elem_add_scaled, Algebra, Elem};
use crate::cartanrep::cyclic_projective;
use crate::error::{Error, Result};
use crate::glinalg::RowSpace;
use crate::module::{GradedModule, ModBasis, Span, Window};

use super::{BlockRef, IsoResult, Theory};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GammaOp {
    Truncate,
    Shriek,
    Star,
    Sub,
    Quot,
}

impl GammaOp {
    pub fn parse(s: &str) -> Option<GammaOp> {
        match s.to_ascii_uppercase().as_str() {
            "TRUNCATE" => Some(GammaOp::Truncate),
            "SHRIEK" => Some(GammaOp::Shriek),
            "STAR" => Some(GammaOp::Star),
            "SUB" => Some(GammaOp::Sub),
            "QUOT" => Some(GammaOp::Quot),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            GammaOp::Truncate => "TRUNCATE",
            GammaOp::Shriek => "SHRIEK",
            GammaOp::Star => "STAR",
            GammaOp::Sub => "SUB",
            GammaOp::Quot => "QUOT",
        }
    }
}

/// `A_Gamma = e_Gamma A e_Gamma` with its embedding into `A`.
#[derive(Clone, Debug)]
pub struct GammaAlgebra {
    pub gamma: Vec<usize>,
    pub tri: TriangularAlgebra,
    pub obj_map: Vec<usize>,
    pub elem_map: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct CounitReport {
    /// `j_! j V -> V_Gamma` is bijective on the window.
    pub epsilon_iso: bool,
    /// Highest degree compared.
    pub top: i64,
    /// `V / V^Gamma` against `j_* j V`, when both sides are computable.
    pub eta: Option<IsoResult>,
    pub details: Vec<String>,
}

impl Theory {
    pub fn gamma_algebra(&self, gamma: &[usize]) -> Result<GammaAlgebra> {
        let poset = &self.tri.poset;
        if !poset.is_lower(gamma) {
            return Err(Error::NotLowerSet(poset.names(gamma).join(",")));
        }
        let tri = self.tri.corner(gamma)?;
        let a = self.alg();
        let obj_map = tri
            .alg
            .objects
            .iter()
            .map(|o| a.object(o).ok_or_else(|| Error::Invalid(format!("object {o} missing"))))
            .collect::<Result<Vec<_>>>()?;
        let elem_map = tri
            .alg
            .basis
            .iter()
            .map(|b| a.lookup(&b.id).ok_or_else(|| Error::Invalid(format!("element {} missing", b.id))))
            .collect::<Result<Vec<_>>>()?;
        let mut gamma = gamma.to_vec();
        gamma.sort();
        Ok(GammaAlgebra { gamma, tri, obj_map, elem_map })
    }

    fn gamma_objects(&self, gamma: &[usize]) -> BTreeSet<usize> {
        self.tri.objects_of_weights(gamma)
    }

    /// `j^Gamma V = e_Gamma V` as an `A_Gamma`-module.
    pub fn gamma_truncate(&self, g: &GammaAlgebra, v: &GradedModule) -> Result<GradedModule> {
        v.restrict(self.alg(), &g.tri.alg, &g.obj_map, &g.elem_map, format!("j^G {}", v.name))
    }

    /// `j^Gamma_! U = A e_Gamma (x)_{A_Gamma} U`.
    pub fn gamma_shriek(&self, g: &GammaAlgebra, u: &GradedModule) -> Result<GradedModule> {
        induce(self.alg(), &g.tri.alg, &g.obj_map, &g.elem_map, u, self.tri.data.finite, &format!("j_!^G {}", u.name))
    }

    /// `j^Gamma_* U = Hom_{A_Gamma}(e_Gamma A, U)`, as the dual of induction on the opposite side.
    pub fn gamma_star(&self, g: &GammaAlgebra, u: &GradedModule) -> Result<GradedModule> {
        let small = &g.tri.alg;
        let small_op = small.opposite(format!("{}^op", small.name));
        let ud = u.dual(small, &small_op, "dual")?;
        let ind = induce(&self.op_alg, &small_op, &g.obj_map, &g.elem_map, &ud, self.tri.data.finite, "ind")?;
        ind.dual(&self.op_alg, self.alg(), format!("j_*^G {}", u.name))
    }

    /// `V_Gamma = A e_Gamma V`.
    pub fn gamma_sub(&self, gamma: &[usize], v: &GradedModule) -> Result<(GradedModule, Span)> {
        let objs = self.gamma_objects(gamma);
        let gens: Vec<Elem> = (0..v.dim()).filter(|&i| objs.contains(&v.basis[i].object)).map(|i| v.vector(i)).collect();
        let span = v.span(self.alg(), &gens);
        let (mut m, _) = v.submodule(self.alg(), &span, format!("{}_G", v.name))?;
        m.assume_generated(self.alg());
        Ok((m, span))
    }

    /// `V / V^Gamma` with `V^Gamma = {v : e_Gamma A v = 0}`.
    pub fn gamma_quot(&self, gamma: &[usize], v: &GradedModule) -> Result<GradedModule> {
        let objs = self.gamma_objects(gamma);
        let span = self.annihilated_span(self.alg(), v, &objs);
        let (m, _) = v.quotient(self.alg(), &span, format!("{}/{}^G", v.name, v.name))?;
        Ok(m)
    }

    /// `A f` for the block idempotent `f` of `b`, when it is an idempotent of `A`.
    pub fn projective(&self, b: &BlockRef) -> Result<GradedModule> {
        let f = self.lifted_idempotent(b)?;
        let mut p = cyclic_projective(self.alg(), &f, self.tri.data.finite, &format!("P({})", b.label))?;
        p.gen_max = Some(0);
        Ok(p)
    }

    /// `A_Gamma f` for a block of a weight in `Gamma`.
    pub fn gamma_projective(&self, g: &GammaAlgebra, b: &BlockRef) -> Result<GradedModule> {
        if !g.gamma.contains(&b.weight) {
            return Err(Error::Invalid(format!("block {} is outside the lower set", b.label)));
        }
        let f = self.lifted_idempotent(b)?;
        let back: HashMap<usize, usize> = g.elem_map.iter().enumerate().map(|(i, e)| (*e, i)).collect();
        let fg: Elem = f.iter().map(|(k, c)| (back[k], c.clone())).collect();
        cyclic_projective(&g.tri.alg, &fg, self.tri.data.finite, &format!("P_G({})", b.label))
    }

    fn lifted_idempotent(&self, b: &BlockRef) -> Result<Elem> {
        let c = self.cartan(b.weight)?;
        let f: Elem = c.blocks[b.index].idempotent.iter().map(|(k, v)| (c.raw.to_full[*k], v.clone())).collect();
        if self.alg().mul(&f, &f)? != f {
            return Err(Error::Invalid(format!("idempotent of {} does not lift to A", b.label)));
        }
        Ok(f)
    }

    /// Builds the counit `j_! j V -> V_Gamma` and tests it for bijectivity;
    /// compares `V / V^Gamma` with `j_* j V` when both are computable.
    pub fn counit_unit_check(&self, gamma: &[usize], v: &GradedModule) -> Result<CounitReport> {
        let a = self.alg();
        let g = self.gamma_algebra(gamma)?;
        let keep: Vec<usize> = (0..v.dim()).filter(|&i| g.obj_map.contains(&v.basis[i].object)).collect();
        let jv = self.gamma_truncate(&g, v)?;
        let (t, pairs) = induce_with_pairs(a, &g.tri.alg, &g.obj_map, &g.elem_map, &jv, self.tri.data.finite, "jj")?;
        let (vg, span) = self.gamma_sub(gamma, v)?;
        let top = t.window.hi.min(v.window.hi);
        let mut details = Vec::new();
        let mut ok = true;
        let mut keys: Vec<(usize, i64)> = t.blocks().map(|(k, _)| *k).chain(vg.blocks().map(|(k, _)| *k)).collect();
        keys.sort();
        keys.dedup();
        for (o, n) in keys.into_iter().filter(|k| k.1 <= top) {
            let width = v.block(o, n).len();
            let mut img = RowSpace::new(v.field, width);
            for &m in t.block(o, n) {
                let (x, u) = pairs[m];
                let e = v
                    .act_basis(a, x, keep[u])
                    .ok_or_else(|| Error::WindowTooSmall(format!("{} above its window", v.name)))?;
                img.insert(v.local_coords(o, n, &e));
            }
            let dim_sub = span.spaces.get(&(o, n)).map_or(0, RowSpace::dim);
            let dim_t = t.block(o, n).len();
            if img.dim() != dim_t || dim_t != dim_sub {
                ok = false;
                details.push(format!(
                    "({}, {n}): source {dim_t}, image {}, target {dim_sub}",
                    v.objects[o],
                    img.dim()
                ));
            }
        }
        let eta = match (v.window.exact_above, jv.window.exact_above) {
            (_, true) => {
                let quot = self.gamma_quot(gamma, v)?;
                let star = self.gamma_star(&g, &jv)?;
                Some(self.isomorphic(&quot, &star)?)
            }
            _ => None,
        };
        Ok(CounitReport { epsilon_iso: ok, top, eta, details })
    }
}

fn induce(
    big: &Algebra,
    small: &Algebra,
    obj_map: &[usize],
    elem_map: &[usize],
    u: &GradedModule,
    finite: bool,
    name: &str,
) -> Result<GradedModule> {
    induce_with_pairs(big, small, obj_map, elem_map, u, finite, name).map(|(m, _)| m)
}

/// `big e (x)_{small} U` as a quotient of the free module on pairs `(a, u)`.
/// Returns the module with the pair behind each kept basis vector.
fn induce_with_pairs(
    big: &Algebra,
    small: &Algebra,
    obj_map: &[usize],
    elem_map: &[usize],
    u: &GradedModule,
    finite: bool,
    name: &str,
) -> Result<(GradedModule, Vec<(usize, usize)>)> {
    let w = u.window;
    if !w.exact_below {
        return Err(Error::WindowTooSmall(format!("{} is not bounded below", u.name)));
    }
    let d = big.cutoff;
    let column = |k: usize| big.from_object(obj_map[k]);
    let objs_used: BTreeSet<usize> = u.basis.iter().map(|b| b.object).collect();
    let degs: Vec<i64> = objs_used.iter().flat_map(|&k| column(k).map(|a| big.degree(a))).collect();
    let amin = degs.iter().copied().min().unwrap_or(0);
    let amax = degs.iter().copied().max().unwrap_or(0);
    let window = if finite && w.exact_above && w.hi + amax - w.lo <= d {
        Window::finite(w.lo + amin, w.hi + amax)
    } else {
        let mut hi = d + w.lo;
        if !w.exact_above {
            hi = hi.min(w.hi + amin);
        }
        Window { lo: w.lo + amin, hi, exact_below: true, exact_above: false }
    };
    let mut basis = Vec::new();
    let mut pairs = Vec::new();
    let mut index: HashMap<(usize, usize), usize> = HashMap::new();
    for (ui, ub) in u.basis.iter().enumerate() {
        for a in column(ub.object) {
            let deg = big.degree(a) + ub.degree;
            if deg <= window.hi {
                index.insert((a, ui), basis.len());
                basis.push(ModBasis {
                    label: format!("{}(x){}", big.basis[a].id, ub.label),
                    object: big.basis[a].to,
                    degree: deg,
                });
                pairs.push((a, ui));
            }
        }
    }
    let free = GradedModule::build(name, big, basis, window, u.gen_max, |g, m| {
        let (a, ui) = pairs[m];
        let mut out = Elem::new();
        for (k, c) in big.product(g, a)? {
            let i = index.get(&(*k, ui)).ok_or_else(|| Error::WindowTooSmall("induction".into()))?;
            out.insert(*i, c.clone());
        }
        Ok(out)
    })?;
    // Relations a b (x) u - a (x) b u.
    let mut spaces: BTreeMap<(usize, i64), RowSpace> = BTreeMap::new();
    for (&key, blk) in free.blocks() {
        spaces.insert(key, RowSpace::new(free.field, blk.len()));
    }
    for (ui, ub) in u.basis.iter().enumerate() {
        for b in small.from_object(ub.object) {
            let bu = match u.act_basis(small, b, ui) {
                Some(e) => e,
                None => continue,
            };
            let k = small.basis[b].to;
            for a in column(k) {
                let n = big.degree(a) + small.degree(b) + ub.degree;
                if n > window.hi {
                    continue;
                }
                let mut rel = Elem::new();
                for (t, c) in big.product(a, elem_map[b])? {
                    let i = index.get(&(*t, ui)).ok_or_else(|| Error::WindowTooSmall("induction".into()))?;
                    elem_add_scaled(&mut rel, c, &free.vector(*i));
                }
                for (u2, c) in &bu {
                    if let Some(i) = index.get(&(a, *u2)) {
                        elem_add_scaled(&mut rel, &c.neg(), &free.vector(*i));
                    }
                }
                rel.retain(|_, c| !c.is_zero());
                if rel.is_empty() {
                    continue;
                }
                let o = big.basis[a].to;
                let coords = free.local_coords(o, n, &rel);
                spaces.get_mut(&(o, n)).expect("block of a relation").insert(coords);
            }
        }
    }
    spaces.retain(|_, s| s.dim() > 0);
    let span = Span { spaces };
    let (q, keep) = free.quotient(big, &span, name)?;
    let kept_pairs = keep.iter().map(|&i| pairs[i]).collect();
    Ok((q, kept_pairs))
}
