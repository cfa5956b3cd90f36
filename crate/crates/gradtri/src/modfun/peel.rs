//! Graded composition multiplicities `[V : L(b)]_q` by character peeling.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::glinalg::Matrix;
use crate::module::GradedModule;
use crate::qseries::{Direction, QSeries};
use crate::scalar::Scalar;

use super::{BlockRef, Theory};

#[derive(Clone, Debug)]
pub struct Decomposition {
    /// `[V : L(b)]_q` for every block of the weights considered, zeros included.
    pub mult: BTreeMap<String, QSeries>,
}

impl Decomposition {
    pub fn nonzero(&self) -> impl Iterator<Item = (&String, &QSeries)> {
        self.mult.iter().filter(|(_, s)| !s.is_zero())
    }

    pub fn get(&self, label: &str) -> Option<&QSeries> {
        self.mult.get(label)
    }
}

impl Theory {
    /// Peels simple characters off `char V`, weight by weight in increasing order.
    /// `gamma` defaults to all weights.
    pub fn multiplicities(&self, v: &GradedModule, gamma: Option<&[usize]>) -> Result<Decomposition> {
        let poset = &self.tri.poset;
        let all: Vec<usize> = (0..poset.len()).collect();
        let gamma = gamma.unwrap_or(&all);
        if !poset.is_lower(gamma) {
            return Err(Error::NotLowerSet(poset.names(gamma).join(",")));
        }
        let mut order = poset.linear_extension_desc(gamma);
        order.reverse();
        let mut rem: BTreeMap<(usize, i64), i64> = v.character().into_iter().map(|(k, n)| (k, n as i64)).collect();
        let w = v.window;
        let mut kb = if w.exact_below { i64::MIN } else { w.lo };
        let mut kt = if w.exact_above { i64::MAX } else { w.hi };
        let mut mult: BTreeMap<String, BTreeMap<i64, u64>> = BTreeMap::new();
        for &mu in &order {
            let blocks = self.blocks_of(mu);
            let objs = self.fiber_objects(mu);
            let mut simples = Vec::new();
            for b in &blocks {
                let l = self.irreducible(b)?;
                if !l.window.is_finite() {
                    return Err(Error::WindowTooSmall(format!("L({}) is not known to be finite", b.label)));
                }
                simples.push(l.character());
            }
            let field = self.field();
            let cols: Vec<Vec<Scalar>> = simples
                .iter()
                .map(|ch| objs.iter().map(|o| field.int(*ch.get(&(*o, 0)).unwrap_or(&0) as i64)).collect())
                .collect();
            let m = Matrix::from_cols(field, objs.len(), &cols);
            if m.rank() < blocks.len() {
                return Err(Error::AmbiguousCharacters(poset.labels[mu].clone()));
            }
            let degrees: Vec<i64> = {
                let mut ds: Vec<i64> =
                    rem.iter().filter(|((o, _), n)| objs.contains(o) && **n != 0).map(|((_, d), _)| *d).collect();
                ds.dedup();
                ds.sort();
                ds.dedup();
                ds
            };
            let (mut lmin, mut lmax) = (0i64, 0i64);
            for ch in &simples {
                for (_, d) in ch.keys() {
                    lmin = lmin.min(*d);
                    lmax = lmax.max(*d);
                }
            }
            for d in degrees {
                if d < kb || d > kt {
                    continue;
                }
                let rhs: Vec<Scalar> = objs.iter().map(|o| field.int(*rem.get(&(*o, d)).unwrap_or(&0))).collect();
                let sol = m.solve(&rhs).ok_or_else(|| {
                    Error::NegativeCoefficient(format!("weight {} in degree {d} is not a sum of simples", poset.labels[mu]))
                })?;
                for (b, c) in blocks.iter().zip(sol) {
                    let n = c.to_i64().ok_or_else(|| {
                        Error::NegativeCoefficient(format!("non-integral multiplicity of L({}) in degree {d}", b.label))
                    })?;
                    if n < 0 {
                        return Err(Error::NegativeCoefficient(format!("L({}) in degree {d}", b.label)));
                    }
                    if n == 0 {
                        continue;
                    }
                    *mult.entry(b.label.clone()).or_default().entry(-d).or_insert(0) += n as u64;
                    let ch = &simples[blocks.iter().position(|x| x == b).unwrap()];
                    for ((o, e), k) in ch {
                        let r = rem.entry((*o, e + d)).or_insert(0);
                        *r -= n * (*k as i64);
                    }
                }
            }
            if kb != i64::MIN {
                kb = kb.saturating_add(lmax);
            }
            if kt != i64::MAX {
                kt = kt.saturating_add(lmin);
            }
        }
        let known = |d: i64| d >= kb && d <= kt && (w.exact_below || d >= w.lo) && (w.exact_above || d <= w.hi);
        if let Some(((o, d), n)) = rem.iter().find(|((_, d), n)| **n != 0 && known(*d)) {
            return Err(if *n < 0 {
                Error::NegativeCoefficient(format!("remainder {n} at ({}, {d})", v.objects[*o]))
            } else {
                Error::Invalid(format!("composition factors outside the given weights at ({}, {d})", v.objects[*o]))
            });
        }
        let (dir, trunc) = match (kb == i64::MIN, kt == i64::MAX) {
            (true, true) => (Direction::Poly, 0),
            (true, false) => (Direction::Down, kt),
            (false, true) => (Direction::Up, -kb),
            (false, false) => {
                return Err(Error::WindowTooSmall(format!("{} is bounded on neither side", v.name)));
            }
        };
        let mut out = BTreeMap::new();
        for &mu in &order {
            for b in self.blocks_of(mu) {
                let terms = mult.remove(&b.label).unwrap_or_default();
                out.insert(b.label.clone(), QSeries::from_terms(dir, trunc, terms));
            }
        }
        Ok(Decomposition { mult: out })
    }

    /// `[V : L(b)]_q` for one block.
    pub fn multiplicity(&self, v: &GradedModule, b: &BlockRef) -> Result<QSeries> {
        let d = self.multiplicities(v, None)?;
        d.get(&b.label).cloned().ok_or_else(|| Error::UnknownBlock(b.label.clone()))
    }
}
