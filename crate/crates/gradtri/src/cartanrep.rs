//! Representations of the Cartan algebras `A_lambda`: blocks, simple modules,
//! projective covers and injective hulls, for nonnegatively graded `A_lambda`.

use crate::algcore::CartanRaw;
use crate::algebra::{Algebra, Elem};
use crate::error::{Error, Result};
use crate::module::{GradedModule, ModBasis, Window};

#[derive(Clone, Debug)]
pub struct CartanBlock {
    /// `lambda#k`.
    pub label: String,
    /// A primitive idempotent of degree zero belonging to the block.
    pub idempotent: Elem,
    /// Object of `A_lambda` carrying the idempotent.
    pub object: usize,
    /// Number of primitive idempotents in the block, the dimension of the simple module.
    pub dim: usize,
}

#[derive(Clone, Debug)]
pub struct CartanAlgebra {
    pub raw: CartanRaw,
    pub op: Algebra,
    pub weight_label: String,
    pub blocks: Vec<CartanBlock>,
    /// All primitive idempotents with their block index.
    pub idempotents: Vec<(Elem, usize)>,
    /// Basis of the radical of the degree-zero part.
    pub radical0: Vec<Elem>,
    /// The algebra is finite-dimensional and fully listed.
    pub finite: bool,
}

impl CartanAlgebra {
    pub fn alg(&self) -> &Algebra {
        &self.raw.alg
    }

    pub fn block_index(&self, label: &str) -> Result<usize> {
        self.blocks.iter().position(|b| b.label == label).ok_or_else(|| Error::UnknownBlock(label.to_string()))
    }
}

pub fn analyze_cartan(raw: CartanRaw, weight_label: &str, finite: bool) -> Result<CartanAlgebra> {
    let alg = &raw.alg;
    if alg.basis.iter().any(|b| b.degree < 0) {
        return Err(Error::NegativeDegreePresent(weight_label.to_string()));
    }
    let (fd, idx) = alg.degree_zero(&raw.unit)?;
    let to_fd = |e: &Elem| -> Vec<crate::scalar::Scalar> {
        idx.iter().map(|i| e.get(i).cloned().unwrap_or_else(|| alg.field.zero())).collect()
    };
    let from_fd = |v: &[crate::scalar::Scalar]| -> Elem {
        v.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(p, c)| (idx[p], c.clone())).collect()
    };
    let starts: Vec<Vec<crate::scalar::Scalar>> =
        raw.unit.iter().map(|(k, c)| to_fd(&Elem::from([(*k, c.clone())]))).collect();
    let split = fd.split_idempotents_from(&starts)?;
    let radical0 = fd.radical()?.basis().iter().map(|r| from_fd(r)).collect();
    let mut blocks: Vec<CartanBlock> = Vec::new();
    let mut idempotents = Vec::new();
    for bi in &split {
        let e = from_fd(&bi.idempotent);
        let object = alg.basis[*e.keys().next().expect("nonzero idempotent")].to;
        if bi.block == blocks.len() {
            blocks.push(CartanBlock {
                label: format!("{weight_label}#{}", bi.block),
                idempotent: e.clone(),
                object,
                dim: bi.block_dim,
            });
        }
        idempotents.push((e, bi.block));
    }
    let op = alg.opposite(format!("{}^op", alg.name));
    Ok(CartanAlgebra { raw, op, weight_label: weight_label.to_string(), blocks, idempotents, radical0, finite })
}

/// The left ideal `A 1_o`, tabulated up to the cutoff.
pub fn regular(alg: &Algebra, object: usize, finite: bool) -> Result<GradedModule> {
    let column: Vec<usize> = alg.from_object(object).collect();
    let basis: Vec<ModBasis> = column
        .iter()
        .map(|&g| ModBasis { label: alg.basis[g].id.clone(), object: alg.basis[g].to, degree: alg.degree(g) })
        .collect();
    let pos: std::collections::HashMap<usize, usize> = column.iter().enumerate().map(|(i, g)| (*g, i)).collect();
    let lo = basis.iter().map(|b| b.degree).min().unwrap_or(0);
    let window = Window { lo, hi: alg.cutoff, exact_below: true, exact_above: finite };
    let name = format!("{} 1_{}", alg.name, alg.objects[object]);
    GradedModule::build(name, alg, basis, window, Some(lo), |g, v| {
        Ok(alg.product(g, column[v])?.iter().map(|(k, c)| (pos[k], c.clone())).collect())
    })
}

/// Elements of `A 1_o` as vectors of [`regular`].
fn in_regular(alg: &Algebra, object: usize, e: &Elem) -> Elem {
    let column: Vec<usize> = alg.from_object(object).collect();
    e.iter().filter_map(|(k, c)| column.iter().position(|g| g == k).map(|p| (p, c.clone()))).collect()
}

/// `A f` for an idempotent `f` of degree zero at one object.
pub fn cyclic_projective(alg: &Algebra, f: &Elem, finite: bool, name: &str) -> Result<GradedModule> {
    let object = alg.basis[*f.keys().next().ok_or(Error::Invalid("zero idempotent".into()))?].from;
    let r = regular(alg, object, finite)?;
    let span = r.span(alg, &[in_regular(alg, object, f)]);
    let (mut p, _) = r.submodule(alg, &span, name)?;
    p.gen_max = Some(0);
    Ok(p)
}

/// `P_lambda(b) = A_lambda f_b`.
pub fn projective_cartan(c: &CartanAlgebra, block: usize) -> Result<GradedModule> {
    let b = c.blocks.get(block).ok_or_else(|| Error::UnknownBlock(block.to_string()))?;
    cyclic_projective(c.alg(), &b.idempotent, c.finite, &format!("P_{}({})", c.weight_label, b.label))
}

/// `L_lambda(b)`: the head of `P_lambda(b)`, concentrated in degree zero.
pub fn simple_cartan(c: &CartanAlgebra, block: usize) -> Result<GradedModule> {
    let b = c.blocks.get(block).ok_or_else(|| Error::UnknownBlock(block.to_string()))?;
    let alg = c.alg();
    let r = regular(alg, b.object, c.finite)?;
    let f = in_regular(alg, b.object, &b.idempotent);
    let span = r.span(alg, std::slice::from_ref(&f));
    let (p, _) = r.submodule(alg, &span, "P")?;
    let mut rad_gens = Vec::new();
    let mut radical: Vec<Elem> = c.radical0.clone();
    radical.extend((0..alg.dim()).filter(|&g| alg.degree(g) > 0).map(|g| alg.basis_elem(g)));
    for j in &radical {
        if let Some(v) = r.act_elem(alg, j, &f) {
            rad_gens.push(r.sub_coords(&span, &v).ok_or_else(|| Error::Invalid("radical leaves P".into()))?);
        }
    }
    let rad = p.span(alg, &rad_gens);
    let (l, _) = p.quotient(alg, &rad, format!("L_{}({})", c.weight_label, b.label))?;
    let top = l.basis.iter().map(|x| x.degree).max().unwrap_or(0);
    let lo = l.basis.iter().map(|x| x.degree).min().unwrap_or(0);
    let l = GradedModule::build(l.name.clone(), alg, l.basis.clone(), Window::finite(lo, top), Some(top), |g, v| {
        Ok(l.act_basis(alg, g, v).unwrap_or_default())
    })?;
    Ok(l)
}

/// `I_lambda(b)`: the graded dual of the projective of the opposite Cartan algebra.
pub fn injective_cartan(c: &CartanAlgebra, block: usize) -> Result<GradedModule> {
    let b = c.blocks.get(block).ok_or_else(|| Error::UnknownBlock(block.to_string()))?;
    let p_op = cyclic_projective(&c.op, &b.idempotent, c.finite, "P^op")?;
    p_op.dual(&c.op, c.alg(), format!("I_{}({})", c.weight_label, b.label))
}
