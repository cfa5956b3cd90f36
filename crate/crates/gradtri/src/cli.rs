//! Commands of the `gta` front end, shared by the binary and the browser demo.
//!
//! Every command turns a source algebra and options into a [`Report`]; the
//! report renders as text or JSON and carries the verdict that decides the
//! exit code.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde_json::{json, Value};

use crate::algcore::{AlgebraData, Kind, TriangularAlgebra};
use crate::corpus;
use crate::error::{Error, Result};
use crate::flags::CheckReport;
use crate::gta::{export_gta, parse_gta};
use crate::modfun::{Family, GammaOp, Theory};
use crate::module::GradedModule;
use crate::report::Verdict;
use crate::scalar::Field;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Text,
    Json,
}

impl Format {
    pub fn parse(s: &str) -> Result<Format> {
        match s {
            "text" => Ok(Format::Text),
            "json" => Ok(Format::Json),
            _ => Err(Error::Usage(format!("unknown format `{s}`, expected text or json"))),
        }
    }
}

/// Where the algebra comes from.
#[derive(Clone, Debug)]
pub enum Source {
    /// A built-in algebra such as `e1:16`.
    Corpus(String),
    /// The contents of a `.gta` file.
    Text(String),
}

impl Source {
    /// `corpus:<name>[:<cutoff>]` names a built-in algebra; anything else is file text.
    pub fn from_arg(arg: &str, read: impl FnOnce(&str) -> std::io::Result<String>) -> Result<Source> {
        match arg.strip_prefix("corpus:") {
            Some(spec) => Ok(Source::Corpus(spec.to_string())),
            None => read(arg).map(Source::Text).map_err(|e| Error::Usage(format!("cannot read {arg}: {e}"))),
        }
    }

    pub fn data(&self) -> Result<AlgebraData> {
        match self {
            Source::Corpus(spec) => corpus::by_name(spec),
            Source::Text(text) => parse_gta(text).map(|f| f.data),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Options {
    /// Comparison window; defaults to `min(8, cutoff)`.
    pub window: Option<i64>,
    pub field: Option<Field>,
    pub format: Format,
    /// Dualities use the declared anti-involution.
    pub tau: bool,
    pub threads: usize,
}

impl Default for Options {
    fn default() -> Options {
        Options { window: None, field: None, format: Format::Text, tau: false, threads: 1 }
    }
}

#[derive(Clone, Debug)]
pub enum Command {
    Verify,
    Info,
    Cartan,
    Module { module: String },
    Decompose { module: String },
    Hom { from: String, to: String },
    Ext1 { from: String, to: String },
    Flag { block: Option<String>, module: Option<String> },
    Bgg { block: Option<String> },
    Truncate { gamma: String, op: String, module: String },
    Ascending { module: String, gammas: Vec<String> },
    Export,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Verify => "verify",
            Command::Info => "info",
            Command::Cartan => "cartan",
            Command::Module { .. } => "module",
            Command::Decompose { .. } => "decompose",
            Command::Hom { .. } => "hom",
            Command::Ext1 { .. } => "ext1",
            Command::Flag { .. } => "flag",
            Command::Bgg { .. } => "bgg",
            Command::Truncate { .. } => "truncate",
            Command::Ascending { .. } => "ascending",
            Command::Export => "export",
        }
    }
}

/// Result of one command.
#[derive(Clone, Debug)]
pub struct Report {
    pub command: String,
    pub algebra: String,
    pub verdict: Verdict,
    pub lines: Vec<String>,
    pub json: Value,
    /// Output printed verbatim in text mode instead of the lines.
    pub raw: Option<String>,
}

impl Report {
    fn new(command: &str, algebra: &str) -> Report {
        Report {
            command: command.to_string(),
            algebra: algebra.to_string(),
            verdict: Verdict::Pass,
            lines: Vec::new(),
            json: Value::Null,
            raw: None,
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => {
                if let Some(raw) = &self.raw {
                    return raw.clone();
                }
                let mut out = format!("{} {}\n", self.command, self.algebra);
                for l in &self.lines {
                    let _ = writeln!(out, "  {l}");
                }
                let _ = writeln!(out, "verdict: {}", self.verdict.name());
                out
            }
            Format::Json => {
                let v = json!({
                    "command": self.command,
                    "algebra": self.algebra,
                    "result": self.json,
                    "verdict": self.verdict.name(),
                });
                let mut s = serde_json::to_string_pretty(&v).expect("reports serialize");
                s.push('\n');
                s
            }
        }
    }
}

/// Exit code and rendered streams of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Runs one command; errors become exit codes 1, 2 or 3 with a message on stderr.
pub fn run(source: &Source, command: &Command, opts: &Options) -> Outcome {
    match execute(source, command, opts) {
        Ok(r) => Outcome { code: r.verdict.exit_code(), stdout: r.render(opts.format), stderr: String::new() },
        Err(e) => {
            let stdout = match opts.format {
                Format::Json => {
                    let v = json!({ "command": command.name(), "error": e.to_string(), "exit_code": e.exit_code() });
                    format!("{}\n", serde_json::to_string_pretty(&v).expect("reports serialize"))
                }
                Format::Text => String::new(),
            };
            Outcome { code: e.exit_code(), stdout, stderr: format!("error: {e}\n") }
        }
    }
}

/// Runs one command and returns its report.
pub fn execute(source: &Source, command: &Command, opts: &Options) -> Result<Report> {
    let mut data = source.data()?;
    if let Some(f) = opts.field {
        data = data.with_field(f)?;
    }
    if let Command::Export = command {
        return Ok(export(&data));
    }
    let tri = TriangularAlgebra::build(data)?;
    let window = match opts.window {
        Some(w) if w > tri.cutoff() => {
            return Err(Error::WindowExceedsCutoff(format!("window {w} exceeds the cutoff {}", tri.cutoff())));
        }
        Some(w) if w < 0 => return Err(Error::Usage(format!("negative window {w}"))),
        Some(w) => w,
        None => tri.cutoff().clamp(0, 8),
    };
    let mut r = Report::new(command.name(), tri.name());
    match command {
        Command::Verify => verify(&tri, opts.threads, &mut r),
        Command::Info => info(&tri, &mut r),
        Command::Export => unreachable!("handled above"),
        _ => {
            let theory = Theory::new(tri)?;
            let ctx = Ctx { t: &theory, tau: opts.tau, window };
            match command {
                Command::Cartan => ctx.cartan(&mut r)?,
                Command::Module { module } => ctx.module(module, &mut r)?,
                Command::Decompose { module } => ctx.decompose(module, &mut r)?,
                Command::Hom { from, to } => ctx.hom(from, to, false, &mut r)?,
                Command::Ext1 { from, to } => ctx.hom(from, to, true, &mut r)?,
                Command::Flag { block, module } => ctx.flag(block.as_deref(), module.as_deref(), &mut r)?,
                Command::Bgg { block } => ctx.bgg(block.as_deref(), &mut r)?,
                Command::Truncate { gamma, op, module } => ctx.truncate(gamma, op, module, &mut r)?,
                Command::Ascending { module, gammas } => ctx.ascending(module, gammas, &mut r)?,
                _ => unreachable!("handled above"),
            }
        }
    }
    Ok(r)
}

fn export(data: &AlgebraData) -> Report {
    let mut r = Report::new("export", &data.name);
    let text = export_gta(data);
    r.json = json!({ "gta": text });
    r.raw = Some(text);
    r
}

fn verify(tri: &TriangularAlgebra, threads: usize, r: &mut Report) {
    let report = tri.verify_axioms(threads.max(1));
    let width = report.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
    for c in &report.checks {
        r.lines.push(format!("{:width$}  {}", c.name, c.verdict.name()));
        r.lines.extend(c.details.iter().map(|d| format!("  {d}")));
    }
    r.verdict = report.verdict();
    r.json = json!({
        "cutoff": report.cutoff,
        "checks": report.checks.iter().map(|c| json!({
            "axiom": c.name,
            "verdict": c.verdict.name(),
            "details": c.details,
        })).collect::<Vec<_>>(),
    });
}

fn info(tri: &TriangularAlgebra, r: &mut Report) {
    let d = &tri.data;
    let mut by_kind: BTreeMap<&str, usize> = BTreeMap::new();
    for f in &d.factors {
        *by_kind.entry(f.kind.name()).or_insert(0) += 1;
    }
    let mut dims: BTreeMap<i64, usize> = BTreeMap::new();
    for b in &tri.alg.basis {
        *dims.entry(b.degree).or_insert(0) += 1;
    }
    let covers: Vec<String> = d.covers.iter().map(|(a, b)| format!("{a} < {b}")).collect();
    let specials: Vec<String> =
        tri.specials.iter().map(|s| format!("{} -> {}", s.label, tri.poset.labels[s.weight])).collect();
    r.lines = vec![
        format!("field: {}", tri.field().label()),
        format!("cutoff: {}", tri.cutoff()),
        format!("complete: {}, finite: {}, finite_xy: {}", d.complete, d.finite, d.finite_xy),
        format!("objects: {}", tri.alg.objects.join(" ")),
        format!("weights: {}", tri.poset.labels.join(" ")),
        format!("covers: {}", covers.join(", ")),
        format!("specials: {}", specials.join(", ")),
        format!(
            "factors: {}",
            [Kind::Idempotent, Kind::X, Kind::H, Kind::Y]
                .iter()
                .map(|k| format!("{} {}", by_kind.get(k.name()).unwrap_or(&0), k.name()))
                .collect::<Vec<_>>()
                .join(", ")
        ),
        format!("basis: {} elements, by degree {}", tri.alg.dim(), degree_list(&dims)),
        format!("anti-involution: {}", if d.tau.is_empty() { "none".to_string() } else { format!("{} pairs", d.tau.len()) }),
        format!("one object per special: {}", tri.is_uncontracted()),
    ];
    r.json = json!({
        "field": tri.field().label(),
        "cutoff": tri.cutoff(),
        "complete": d.complete,
        "finite": d.finite,
        "finite_xy": d.finite_xy,
        "objects": tri.alg.objects,
        "weights": tri.poset.labels,
        "covers": d.covers,
        "specials": tri.specials.iter().map(|s| json!([s.label, tri.poset.labels[s.weight]])).collect::<Vec<_>>(),
        "factors": by_kind,
        "basis_by_degree": dims.iter().map(|(d, n)| json!([d, n])).collect::<Vec<_>>(),
        "tau": d.tau,
        "uncontracted": tri.is_uncontracted(),
    });
}

fn degree_list(dims: &BTreeMap<i64, usize>) -> String {
    dims.iter().map(|(d, n)| format!("{d}:{n}")).collect::<Vec<_>>().join(" ")
}

fn character_json(m: &GradedModule) -> Value {
    json!({
        "name": m.name,
        "window": {
            "lo": m.window.lo,
            "hi": m.window.hi,
            "exact_below": m.window.exact_below,
            "exact_above": m.window.exact_above,
        },
        "character": m.character().iter().map(|((o, d), n)| json!([m.objects[*o], d, n])).collect::<Vec<_>>(),
    })
}

fn character_lines(m: &GradedModule) -> Vec<String> {
    let mut per: BTreeMap<usize, BTreeMap<i64, usize>> = BTreeMap::new();
    for ((o, d), n) in m.character() {
        per.entry(o).or_default().insert(d, n);
    }
    let mut lines = vec![format!("{} on degrees {}", m.name, m.window.describe())];
    for (o, dims) in per {
        lines.push(format!("  {}: {}", m.objects[o], degree_list(&dims)));
    }
    lines
}

fn checks_json(checks: &[CheckReport]) -> Value {
    Value::Array(checks.iter().map(CheckReport::to_json).collect())
}

fn check_lines(checks: &[CheckReport], r: &mut Report) {
    for c in checks {
        r.lines.push(format!("{}: {}", c.name, c.verdict.name()));
        r.lines.extend(c.details.iter().map(|d| format!("  {d}")));
    }
}

/// A parsed module expression `FAMILY:block`, optionally followed by `^*`.
struct ModuleSpec {
    kind: String,
    block: String,
    dual: bool,
}

fn parse_module_spec(s: &str) -> Result<ModuleSpec> {
    let (body, dual) = match s.strip_suffix("^*") {
        Some(b) => (b, true),
        None => (s, false),
    };
    let (kind, block) = body
        .split_once(':')
        .ok_or_else(|| Error::Usage(format!("module `{s}` is not of the form FAMILY:block")))?;
    Ok(ModuleSpec { kind: kind.to_ascii_uppercase(), block: block.to_string(), dual })
}

struct Ctx<'a> {
    t: &'a Theory,
    tau: bool,
    window: i64,
}

impl Ctx<'_> {
    /// Builds a module from `FAMILY:block[^*]`. Families are the four standard
    /// ones, the same four over `A^op` (suffix `_OP`), `L` (simple) and `P`
    /// (projective cover).
    fn build(&self, spec: &str) -> Result<GradedModule> {
        let s = parse_module_spec(spec)?;
        let b = self.t.block(&s.block)?;
        let m = match s.kind.as_str() {
            "L" | "SIMPLE" => self.t.irreducible(&b)?,
            "P" | "PROJECTIVE" => self.t.projective(&b)?,
            k => {
                let (name, op) = match k.strip_suffix("_OP") {
                    Some(n) => (n, true),
                    None => (k, false),
                };
                let f = Family::parse(name).ok_or_else(|| {
                    Error::Usage(format!(
                        "unknown family `{k}`, expected STD, PROPER_STD, PROPER_COSTD, COSTD (optionally with _OP), L or P"
                    ))
                })?;
                if op {
                    self.t.opposite_standard(&b, f)?
                } else {
                    self.t.standard(&b, f)?
                }
            }
        };
        match (s.dual, self.tau) {
            (false, _) => Ok(m),
            (true, true) => self.t.tau_dualize(&m),
            (true, false) => self.t.dualize(&m),
        }
    }

    fn cartan(&self, r: &mut Report) -> Result<()> {
        let t = self.t;
        let mut weights = Vec::new();
        for (l, c) in t.cartans.iter().enumerate() {
            let mut dims: BTreeMap<i64, usize> = BTreeMap::new();
            for g in &c.alg().basis {
                *dims.entry(g.degree).or_insert(0) += 1;
            }
            let fiber: Vec<&str> = c.raw.fiber.iter().map(|&s| t.tri.specials[s].label.as_str()).collect();
            r.lines.push(format!(
                "weight {}: specials {}, A_lambda by degree {}{}",
                t.tri.poset.labels[l],
                fiber.join(" "),
                degree_list(&dims),
                if c.finite { "" } else { " (truncated)" }
            ));
            let mut blocks = Vec::new();
            for (i, b) in c.blocks.iter().enumerate() {
                let p = crate::cartanrep::projective_cartan(c, i)?;
                let mut pd: BTreeMap<i64, usize> = BTreeMap::new();
                for x in &p.basis {
                    *pd.entry(x.degree).or_insert(0) += 1;
                }
                r.lines.push(format!(
                    "  block {}: simple of dimension {}, projective by degree {}",
                    b.label,
                    b.dim,
                    degree_list(&pd)
                ));
                blocks.push(json!({
                    "label": b.label,
                    "simple_dim": b.dim,
                    "projective_by_degree": pd.iter().map(|(d, n)| json!([d, n])).collect::<Vec<_>>(),
                }));
            }
            weights.push(json!({
                "weight": t.tri.poset.labels[l],
                "specials": fiber,
                "by_degree": dims.iter().map(|(d, n)| json!([d, n])).collect::<Vec<_>>(),
                "finite": c.finite,
                "blocks": blocks,
            }));
        }
        r.json = json!({ "weights": weights });
        Ok(())
    }

    fn module(&self, spec: &str, r: &mut Report) -> Result<()> {
        let m = self.build(spec)?;
        r.lines = character_lines(&m);
        let series = m.dim_q(None);
        r.lines.push(format!("dim_q = {series}"));
        let mut j = character_json(&m);
        j["dim_q"] = series.to_json();
        r.json = j;
        Ok(())
    }

    fn decompose(&self, spec: &str, r: &mut Report) -> Result<()> {
        let m = self.build(spec)?;
        let d = self.t.multiplicities(&m, None)?;
        let mut out = serde_json::Map::new();
        for (label, s) in &d.mult {
            r.lines.push(format!("[{}:L({label})] = {s}", m.name));
            out.insert(label.clone(), s.to_json());
        }
        r.json = json!({ "module": m.name, "multiplicities": out });
        Ok(())
    }

    fn hom(&self, from: &str, to: &str, ext: bool, r: &mut Report) -> Result<()> {
        let v = self.build(from)?;
        let w = self.build(to)?;
        let h = if ext { self.t.ext1(&v, &w)? } else { self.t.hom_space(&v, &w)? };
        let what = if ext { "Ext^1" } else { "Hom" };
        r.lines.push(format!("dim_q {what}({}, {}) = {}", v.name, w.name, h.series));
        r.lines.push(format!("degrees computed: {}..{}", h.range.0, h.range.1));
        r.json = json!({
            "from": v.name,
            "to": w.name,
            "series": h.series.to_json(),
            "degrees": h.dims.iter().map(|(d, n)| json!([d, n])).collect::<Vec<_>>(),
        });
        Ok(())
    }

    fn flag(&self, block: Option<&str>, module: Option<&str>, r: &mut Report) -> Result<()> {
        let t = self.t;
        let (m, flag) = match (block, module) {
            (Some(b), None) => t.build_projective_flag(&t.block(b)?)?,
            (None, Some(spec)) => {
                let m = self.build(spec)?;
                let all: Vec<usize> = (0..t.tri.poset.len()).collect();
                let f = t.discover_flag(&m, &all)?;
                (m, f)
            }
            _ => return Err(Error::Usage("flag needs exactly one of --b and --module".into())),
        };
        for l in &flag.layers {
            let ms: Vec<String> = l.mult.iter().map(|(b, s)| format!("Delta({b}): {s}")).collect();
            r.lines.push(format!("layer weight {}: {}", t.tri.poset.labels[l.weight], ms.join(", ")));
        }
        let checks = t.verify_flag(&m, &flag)?;
        check_lines(&checks, r);
        r.verdict = Verdict::combine(checks.iter().map(|c| c.verdict));
        r.json = json!({ "flag": flag.to_json(t), "checks": checks_json(&checks) });
        Ok(())
    }

    fn bgg(&self, block: Option<&str>, r: &mut Report) -> Result<()> {
        let t = self.t;
        let blocks = match block {
            Some(b) => vec![t.block(b)?],
            None => t.blocks(),
        };
        let mut reports = Vec::new();
        for b in &blocks {
            let rep = t.bgg_check(b, self.window, self.tau)?;
            r.lines.push(format!("P({}){}: {}", rep.block, if rep.aggregate { " (aggregate)" } else { "" }, rep.verdict.name()));
            for row in &rep.rows {
                r.lines.push(format!("  (P({}):Delta({})) = {}", rep.block, row.standard, row.flag_side));
                r.lines.push(format!("  conj [NablaBar({}):L({})] = {}", row.standard, rep.block, row.composition_side));
                if let Some(s) = &row.tau_side {
                    r.lines.push(format!("  [DeltaBar({}):L({})] = {}", row.standard, rep.block, s));
                }
            }
            reports.push(rep);
        }
        r.verdict = Verdict::combine(reports.iter().map(|x| x.verdict));
        r.json = json!({ "window": self.window, "blocks": reports.iter().map(|x| x.to_json()).collect::<Vec<_>>() });
        Ok(())
    }

    fn gamma(&self, list: &str) -> Result<Vec<usize>> {
        let names: Vec<String> = list.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect();
        let set = self.t.tri.poset.parse_set(&names)?;
        if !self.t.tri.poset.is_lower(&set) {
            return Err(Error::NotLowerSet(list.to_string()));
        }
        Ok(set)
    }

    fn truncate(&self, gamma: &str, op: &str, spec: &str, r: &mut Report) -> Result<()> {
        let t = self.t;
        let g = self.gamma(gamma)?;
        let op = GammaOp::parse(op)
            .ok_or_else(|| Error::Usage(format!("unknown operation `{op}`, expected TRUNCATE, SHRIEK, STAR, SUB or QUOT")))?;
        let v = self.build(spec)?;
        let ga = t.gamma_algebra(&g)?;
        let out = match op {
            GammaOp::Truncate => t.gamma_truncate(&ga, &v)?,
            GammaOp::Shriek => t.gamma_shriek(&ga, &t.gamma_truncate(&ga, &v)?)?,
            GammaOp::Star => t.gamma_star(&ga, &t.gamma_truncate(&ga, &v)?)?,
            GammaOp::Sub => t.gamma_sub(&g, &v)?.0,
            GammaOp::Quot => t.gamma_quot(&g, &v)?,
        };
        r.lines = character_lines(&out);
        let mut j = json!({ "operation": op.name(), "gamma": t.tri.poset.names(&g), "result": character_json(&out) });
        if let GammaOp::Sub = op {
            let c = t.counit_unit_check(&g, &v)?;
            r.lines.push(format!("counit onto V_Gamma: {}", Verdict::from_bool(c.epsilon_iso).name()));
            if let Some(e) = &c.eta {
                r.lines.push(format!("unit V/V^Gamma -> j_* j V: {} ({})", Verdict::from_bool(e.iso).name(), e.reason));
            }
            r.lines.extend(c.details.iter().map(|d| format!("  {d}")));
            r.verdict = Verdict::from_bool(c.epsilon_iso && c.eta.as_ref().is_none_or(|e| e.iso));
            j["counit"] = json!({
                "epsilon_iso": c.epsilon_iso,
                "top": c.top,
                "eta": c.eta.as_ref().map(|e| json!({ "iso": e.iso, "reason": e.reason })),
                "details": c.details,
            });
        }
        r.json = j;
        Ok(())
    }

    fn ascending(&self, spec: &str, gammas: &[String], r: &mut Report) -> Result<()> {
        let v = self.build(spec)?;
        let sets = gammas.iter().map(|g| self.gamma(g)).collect::<Result<Vec<_>>>()?;
        let checks = self.t.ascending_flag_check(&v, &sets)?;
        check_lines(&checks, r);
        r.verdict = Verdict::combine(checks.iter().map(|c| c.verdict));
        if r.verdict == Verdict::Pass {
            r.lines.push("consistent with an ascending flag".into());
        }
        r.json = json!({ "module": v.name, "checks": checks_json(&checks) });
        Ok(())
    }
}
