//! Standard flags: the explicit flag of the modules `q^d A 1_u`, flag
//! verification, flag multiplicities, supports, BGG reciprocity and
//! ascending-flag checks.

use std::collections::{BTreeMap, BTreeSet};

use serde_json::{json, Value};

use crate::algebra::Elem;
use crate::cartanrep::regular;
use crate::error::{Error, Result};
use crate::modfun::{BlockRef, Family, Theory};
use crate::module::{GradedModule, Span};
use crate::qseries::{Direction, QSeries};
use crate::report::Verdict;

/// One layer of a flag: the generators of the layer inside the module, its
/// weight and the multiplicity of each standard module of that weight.
#[derive(Clone, Debug)]
pub struct FlagLayer {
    pub weight: usize,
    pub generators: Vec<Elem>,
    pub mult: BTreeMap<String, QSeries>,
}

/// A descending chain `V = V_0 ⊇ V_1 ⊇ … ⊇ V_n = 0`; `layers[r]` describes
/// `V_r / V_{r+1}` and `V_r` is generated by the generators of layers `r..`.
#[derive(Clone, Debug)]
pub struct FlagDescription {
    pub module: String,
    /// `Std` for a Delta-flag, `ProperStd` for a DeltaBar-flag.
    pub family: Family,
    pub layers: Vec<FlagLayer>,
}

impl FlagDescription {
    pub fn to_json(&self, theory: &Theory) -> Value {
        json!({
            "module": self.module,
            "family": self.family.name(),
            "layers": self.layers.iter().map(|l| json!({
                "weight": theory.tri.poset.labels[l.weight],
                "generators": l.generators.len(),
                "multiplicities": l.mult.iter().map(|(b, s)| (b.clone(), s.to_json())).collect::<serde_json::Map<_, _>>(),
            })).collect::<Vec<_>>(),
        })
    }
}

#[derive(Clone, Debug)]
pub struct CheckReport {
    pub name: String,
    pub verdict: Verdict,
    pub details: Vec<String>,
}

impl CheckReport {
    fn new(name: impl Into<String>, ok: bool, details: Vec<String>) -> CheckReport {
        CheckReport { name: name.into(), verdict: Verdict::from_bool(ok), details }
    }

    pub fn to_json(&self) -> Value {
        json!({ "check": self.name, "verdict": self.verdict.name(), "details": self.details })
    }
}

/// One standard module `Delta(a)` in a reciprocity check for `P(b)`.
#[derive(Clone, Debug)]
pub struct BggRow {
    pub standard: String,
    /// `(P(b):Delta(a))_q` read off the flag.
    pub flag_side: QSeries,
    /// `conj [NablaBar(a):L(b)]_q`.
    pub composition_side: QSeries,
    /// `[DeltaBar(a):L(b)]_q`, when the anti-involution is used.
    pub tau_side: Option<QSeries>,
}

#[derive(Clone, Debug)]
pub struct BggReport {
    pub block: String,
    pub window: i64,
    /// `Q(b)` is a sum of several projectives and the check is aggregated.
    pub aggregate: bool,
    pub rows: Vec<BggRow>,
    pub verdict: Verdict,
}

impl BggReport {
    pub fn to_json(&self) -> Value {
        json!({
            "block": self.block,
            "window": self.window,
            "aggregate": self.aggregate,
            "rows": self.rows.iter().map(|r| json!({
                "standard": r.standard,
                "flag_side": r.flag_side.to_json(),
                "composition_side": r.composition_side.to_json(),
                "tau_side": r.tau_side.as_ref().map(QSeries::to_json),
            })).collect::<Vec<_>>(),
            "verdict": self.verdict.name(),
        })
    }
}

#[derive(Clone, Debug)]
pub struct SupportReport {
    pub family: Family,
    pub weights: BTreeSet<String>,
    pub witnesses: Vec<String>,
}

/// Direct sum of shifted copies of one family, as declared by a multiplicity table.
fn declared_sum(theory: &Theory, family: Family, mult: &BTreeMap<String, QSeries>, name: &str) -> Result<GradedModule> {
    let mut parts = Vec::new();
    for (label, s) in mult {
        let b = theory.block(label)?;
        let base = theory.standard(&b, family)?;
        for (e, c) in s.terms() {
            for _ in 0..c {
                parts.push(base.shift(e));
            }
        }
    }
    let refs: Vec<&GradedModule> = parts.iter().collect();
    if refs.is_empty() {
        return Ok(GradedModule::zero(name, theory.alg()));
    }
    GradedModule::direct_sum(theory.alg(), &refs, name)
}

/// Agreement on `[-window, window]`; inconclusive when either side is not known there.
fn compare(lhs: &QSeries, rhs: &QSeries, window: i64) -> Verdict {
    if !lhs.eq_known(rhs, window) {
        Verdict::Fail
    } else if lhs.known_window(window).min(rhs.known_window(window)) < window {
        Verdict::Inconclusive
    } else {
        Verdict::Pass
    }
}

fn combine(reports: &[CheckReport]) -> Verdict {
    Verdict::combine(reports.iter().map(|r| r.verdict))
}

impl Theory {
    /// A special of weight `lambda` meeting `L_lambda(b)`, and the shift `d`.
    fn witness(&self, b: &BlockRef) -> Result<(usize, i64)> {
        let l = self.cartan_simple(b)?;
        let c = self.cartan(b.weight)?;
        let piece = l
            .basis
            .iter()
            .min_by_key(|x| (x.degree, x.object))
            .ok_or_else(|| Error::NoSpecialWitness(b.label.clone()))?;
        Ok((c.raw.fiber[piece.object], -piece.degree))
    }

    /// Number of primitive idempotents of block `b` inside `1_s`.
    fn idempotent_count(&self, b: &BlockRef, s: usize) -> usize {
        let c = &self.cartans[b.weight];
        c.idempotents
            .iter()
            .filter(|(e, blk)| {
                *blk == b.index && e.keys().next().is_some_and(|k| c.raw.fiber[c.raw.alg.basis[*k].to] == s)
            })
            .count()
    }

    /// `Q(b) = q^d A 1_u` with its flag: layer `r` collects the basis
    /// elements `x h y` whose `H` factor has the `r`-th weight of a
    /// descending linear extension of `{mu <= lambda}`.
    pub fn build_projective_flag(&self, b: &BlockRef) -> Result<(GradedModule, FlagDescription)> {
        let a = self.alg();
        let (s0, d) = self.witness(b)?;
        let u = self.tri.specials[s0].object;
        let base = regular(a, u, self.tri.data.finite)?;
        let column: Vec<usize> = a.from_object(u).collect();
        let mut q = base.shift(d);
        q.gen_max = Some(-d);
        q.name = format!("Q({})", b.label);
        let poset = &self.tri.poset;
        let below: Vec<usize> = (0..poset.len()).filter(|&m| poset.le(m, b.weight)).collect();
        let order = poset.linear_extension_desc(&below);
        let mut layers = Vec::new();
        for &mu in &order {
            let mut generators = Vec::new();
            let mut mult: BTreeMap<String, BTreeMap<i64, u64>> = BTreeMap::new();
            for (i, &g) in column.iter().enumerate() {
                let t = self.tri.triples[g];
                if t.x.is_some() || self.tri.elem_weight(g) != mu {
                    continue;
                }
                let s = self.tri.specials.iter().position(|sp| sp.idempotent.is_some_and(|e| self.tri.triples[e].h == t.h));
                let Some(s) = s else { continue };
                generators.push(q.vector(i));
                let shift = d - a.degree(g);
                for c in self.blocks_of(mu) {
                    let n = self.idempotent_count(&c, s);
                    if n > 0 {
                        *mult.entry(c.label.clone()).or_default().entry(shift).or_insert(0) += n as u64;
                    }
                }
            }
            let mult = mult
                .into_iter()
                .map(|(k, v)| (k, QSeries::from_terms(Direction::Poly, 0, v)))
                .collect();
            layers.push(FlagLayer { weight: mu, generators, mult });
        }
        let flag = FlagDescription { module: q.name.clone(), family: Family::Std, layers };
        Ok((q, flag))
    }

    /// The submodules `V_r` of a flag, as spans.
    fn flag_chain(&self, v: &GradedModule, flag: &FlagDescription) -> Vec<Span> {
        let a = self.alg();
        let mut chain = vec![v.empty_span()];
        for layer in flag.layers.iter().rev() {
            let more = v.span(a, &layer.generators);
            let last = chain.last().unwrap();
            chain.push(v.span_sum(last, &more));
        }
        chain.reverse();
        chain
    }

    /// `V_r / V_{r+1}` as a module.
    fn subquotient(&self, v: &GradedModule, upper: &Span, lower: &Span, name: &str) -> Result<GradedModule> {
        let a = self.alg();
        let (sub, _) = v.submodule(a, upper, "sub")?;
        let inner: Vec<Elem> =
            v.span_vectors(lower).iter().map(|x| v.sub_coords(upper, x).unwrap_or_default()).collect();
        let inner_span = sub.span(a, &inner);
        let (mut q, _) = sub.quotient(a, &inner_span, name)?;
        q.assume_generated(a);
        Ok(q)
    }

    /// Checks chain inclusions, exhaustion, distinct weights and each layer
    /// against the declared direct sum.
    pub fn verify_flag(&self, v: &GradedModule, flag: &FlagDescription) -> Result<Vec<CheckReport>> {
        let mut out = Vec::new();
        let chain = self.flag_chain(v, flag);
        let weights: BTreeSet<usize> = flag.layers.iter().map(|l| l.weight).collect();
        out.push(CheckReport::new("distinct-weights", weights.len() == flag.layers.len(), Vec::new()));
        let full = chain[0].dim() == v.dim();
        out.push(CheckReport::new(
            "exhaustive",
            full,
            if full { Vec::new() } else { vec![format!("{} of {} dimensions reached", chain[0].dim(), v.dim())] },
        ));
        for r in 0..flag.layers.len() {
            let ok = v.span_le(&chain[r + 1], &chain[r]);
            out.push(CheckReport::new(format!("inclusion-{r}"), ok, Vec::new()));
        }
        for (r, layer) in flag.layers.iter().enumerate() {
            let name = format!("layer {r} of {}", v.name);
            let q = self.subquotient(v, &chain[r], &chain[r + 1], &name)?;
            let declared = declared_sum(self, flag.family, &layer.mult, "declared")?;
            let res = self.isomorphic(&q, &declared)?;
            out.push(CheckReport::new(format!("layer-{r}"), res.iso, vec![res.reason]));
        }
        Ok(out)
    }

    /// `(V : Delta(b))_q` and relatives:
    /// Delta-side `conj dim_q Hom(V, NablaBar(b))`, `conj dim_q Hom(V, Nabla(b))`;
    /// Nabla-side `dim_q Hom(Delta(b), V)`, `dim_q Hom(DeltaBar(b), V)`.
    pub fn flag_multiplicity(&self, v: &GradedModule, b: &BlockRef, family: Family) -> Result<QSeries> {
        Ok(match family {
            Family::Std => self.hom_space(v, &self.standard(b, Family::ProperCostd)?)?.series.bar(),
            Family::ProperStd => self.hom_space(v, &self.standard(b, Family::Costd)?)?.series.bar(),
            Family::ProperCostd => self.hom_space(&self.standard(b, Family::Std)?, v)?.series,
            Family::Costd => self.hom_space(&self.standard(b, Family::ProperStd)?, v)?.series,
        })
    }

    /// Weights `ḃ` with nonzero flag multiplicity, with witnesses.
    pub fn support(&self, v: &GradedModule, family: Family) -> Result<SupportReport> {
        let mut weights = BTreeSet::new();
        let mut witnesses = Vec::new();
        for b in self.blocks() {
            let s = self.flag_multiplicity(v, &b, family)?;
            if !s.is_zero() {
                weights.insert(self.tri.poset.labels[b.weight].clone());
                witnesses.push(format!("{}: {}", b.label, s));
            }
        }
        Ok(SupportReport { family, weights, witnesses })
    }

    /// BGG reciprocity `(P(b):Delta(a))_q = conj [NablaBar(a):L(b)]_q` for every
    /// block `a`. The left side comes from the flag of `Q(b)`; when `1_u` is not
    /// primitive the comparison is made for `Q(b)` as a sum of projectives.
    /// With `with_tau`, also compares against `[DeltaBar(a):L(b)]_q`.
    pub fn bgg_check(&self, b: &BlockRef, window: i64, with_tau: bool) -> Result<BggReport> {
        let (_, flag) = self.build_projective_flag(b)?;
        let (u, _) = self.witness(b)?;
        let counts: Vec<(BlockRef, usize)> = self
            .blocks_of(b.weight)
            .into_iter()
            .map(|c| {
                let n = self.idempotent_count(&c, u);
                (c, n)
            })
            .collect();
        let aggregate = counts.iter().map(|(_, n)| n).sum::<usize>() != 1;
        let with_tau = with_tau && !aggregate;
        if with_tau && self.tau.is_none() {
            return Err(Error::Usage("no anti-involution declared".into()));
        }
        let mut rows = Vec::new();
        let mut verdicts = Vec::new();
        for a in self.blocks() {
            let flag_side = flag
                .layers
                .iter()
                .find_map(|l| l.mult.get(&a.label).cloned())
                .unwrap_or_else(QSeries::zero_poly);
            let dec = self.multiplicities(&self.standard(&a, Family::ProperCostd)?, None)?;
            let mut composition_side = QSeries::zero_poly();
            for (c, n) in &counts {
                let m = dec.get(&c.label).cloned().unwrap_or_else(QSeries::zero_poly).bar();
                for _ in 0..*n {
                    composition_side = composition_side.add(&m)?;
                }
            }
            let tau_side = if with_tau {
                let dec = self.multiplicities(&self.standard(&a, Family::ProperStd)?, None)?;
                Some(dec.get(&b.label).cloned().unwrap_or_else(QSeries::zero_poly))
            } else {
                None
            };
            let mut known = flag_side.known_window(window).min(composition_side.known_window(window));
            let mut agree = flag_side.eq_known(&composition_side, window);
            if let Some(t) = &tau_side {
                known = known.min(t.known_window(window));
                agree &= flag_side.eq_known(t, window);
            }
            verdicts.push(match (agree, known >= window) {
                (false, _) => Verdict::Fail,
                (true, true) => Verdict::Pass,
                (true, false) => Verdict::Inconclusive,
            });
            rows.push(BggRow { standard: a.label.clone(), flag_side, composition_side, tau_side });
        }
        Ok(BggReport { block: b.label.clone(), window, aggregate, rows, verdict: Verdict::combine(verdicts) })
    }

    /// Greedy Delta-flag discovery on `V_Gamma`, peeling off the maximal weight each time.
    pub fn discover_flag(&self, v: &GradedModule, gamma: &[usize]) -> Result<FlagDescription> {
        let poset = &self.tri.poset;
        let mut rest: Vec<usize> = poset.linear_extension_desc(gamma);
        let (vg, _) = self.gamma_sub(gamma, v)?;
        let mut layers = Vec::new();
        while let Some(&lambda) = rest.first() {
            let upper = self.gamma_sub(&rest, &vg)?.1;
            let lower = self.gamma_sub(&rest[1..], &vg)?.1;
            let layer = self.subquotient(&vg, &upper, &lower, &format!("layer {}", poset.labels[lambda]))?;
            let mut mult = BTreeMap::new();
            for b in self.blocks_of(lambda) {
                let s = self.flag_multiplicity(&layer, &b, Family::Std)?;
                if !s.is_zero() {
                    mult.insert(b.label.clone(), s);
                }
            }
            let declared = declared_sum(self, Family::Std, &mult, "declared")?;
            let res = self.isomorphic(&layer, &declared)?;
            if !res.iso {
                return Err(Error::Invalid(format!(
                    "flag discovery failed at weight {}: {}",
                    poset.labels[lambda], res.reason
                )));
            }
            let objs = self.fiber_objects(lambda);
            let generators: Vec<Elem> =
                (0..vg.dim()).filter(|&i| objs.contains(&vg.basis[i].object)).map(|i| vg.vector(i)).collect();
            layers.push(FlagLayer { weight: lambda, generators, mult });
            rest.remove(0);
        }
        Ok(FlagDescription { module: vg.name.clone(), family: Family::Std, layers })
    }

    /// For each lower set: `V_Gamma`, a discovered Delta-flag and its verification;
    /// for nested pairs `Gamma ⊆ Pi` also `(V_Pi)_Gamma = V_Gamma`.
    pub fn ascending_flag_check(&self, v: &GradedModule, gammas: &[Vec<usize>]) -> Result<Vec<CheckReport>> {
        let poset = &self.tri.poset;
        let mut out = Vec::new();
        let mut spans = Vec::new();
        for g in gammas {
            let label = format!("{{{}}}", poset.names(g).join(","));
            if !poset.is_lower(g) {
                return Err(Error::NotLowerSet(label));
            }
            let (vg, span) = self.gamma_sub(g, v)?;
            spans.push(span);
            match self.discover_flag(v, g) {
                Ok(flag) => {
                    let checks = self.verify_flag(&vg, &flag)?;
                    let verdict = combine(&checks);
                    let mut details: Vec<String> = flag
                        .layers
                        .iter()
                        .map(|l| {
                            let m: Vec<String> = l.mult.iter().map(|(b, s)| format!("{b}: {s}")).collect();
                            format!("weight {}: {}", poset.labels[l.weight], m.join(", "))
                        })
                        .collect();
                    details.extend(checks.iter().filter(|c| c.verdict != Verdict::Pass).map(|c| format!("{} failed", c.name)));
                    out.push(CheckReport { name: format!("flag of V_{label}"), verdict, details });
                }
                Err(e) => out.push(CheckReport::new(format!("flag of V_{label}"), false, vec![e.to_string()])),
            }
        }
        for (i, g) in gammas.iter().enumerate() {
            for (j, p) in gammas.iter().enumerate() {
                if i == j || !g.iter().all(|x| p.contains(x)) {
                    continue;
                }
                let (vp, _) = self.gamma_sub(p, v)?;
                let inner = self.gamma_sub(g, &vp)?.1;
                let same = inner.dim() == spans[i].dim() && v.span_le(&spans[i], &spans[j]);
                out.push(CheckReport::new(
                    format!("nested {{{}}} in {{{}}}", poset.names(g).join(","), poset.names(p).join(",")),
                    same,
                    Vec::new(),
                ));
            }
        }
        Ok(out)
    }

    /// `(V:DeltaBar(b)) = sum_a (V:Delta(a)) (Delta(a):DeltaBar(b))` on the window.
    pub fn standard_sum_check(&self, v: &GradedModule, window: i64) -> Result<CheckReport> {
        let mut verdicts = Vec::new();
        let mut details = Vec::new();
        for b in self.blocks() {
            let lhs = self.flag_multiplicity(v, &b, Family::ProperStd)?;
            let mut rhs: Option<QSeries> = None;
            for a in self.blocks() {
                let f = self.flag_multiplicity(v, &a, Family::Std)?;
                let g = self.flag_multiplicity(&self.standard(&a, Family::Std)?, &b, Family::ProperStd)?;
                let t = f.mul(&g)?;
                rhs = Some(match rhs {
                    None => t,
                    Some(r) => r.add(&t)?,
                });
            }
            let rhs = rhs.unwrap_or_else(QSeries::zero_poly);
            verdicts.push(compare(&lhs, &rhs, window));
            details.push(format!("({}:DeltaBar({})) = {} vs {}", v.name, b.label, lhs, rhs));
        }
        Ok(CheckReport { name: format!("standard sum {}", v.name), verdict: Verdict::combine(verdicts), details })
    }

    /// `[V:L(b)] = sum_a (V:DeltaBar(a)) [DeltaBar(a):L(b)]` on the window.
    pub fn composition_sum_check(&self, v: &GradedModule, window: i64) -> Result<CheckReport> {
        let mut verdicts = Vec::new();
        let mut details = Vec::new();
        let dec = self.multiplicities(v, None)?;
        let mut inner = BTreeMap::new();
        for a in self.blocks() {
            inner.insert(a.label.clone(), self.multiplicities(&self.standard(&a, Family::ProperStd)?, None)?);
        }
        for b in self.blocks() {
            let lhs = dec.get(&b.label).cloned().unwrap_or_else(QSeries::zero_poly);
            let mut rhs: Option<QSeries> = None;
            for a in self.blocks() {
                let f = self.flag_multiplicity(v, &a, Family::ProperStd)?;
                let g = inner[&a.label].get(&b.label).cloned().unwrap_or_else(QSeries::zero_poly);
                let t = f.mul(&g)?;
                rhs = Some(match rhs {
                    None => t,
                    Some(r) => r.add(&t)?,
                });
            }
            let rhs = rhs.unwrap_or_else(QSeries::zero_poly);
            verdicts.push(compare(&lhs, &rhs, window));
            details.push(format!("[{}:L({})] = {} vs {}", v.name, b.label, lhs, rhs));
        }
        Ok(CheckReport { name: format!("composition sum {}", v.name), verdict: Verdict::combine(verdicts), details })
    }
}

