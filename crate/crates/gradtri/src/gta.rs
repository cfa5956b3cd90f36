//! The `.gta` text format for algebras with a triangular basis.
//!
//! A file is a sequence of sections. Each section starts with a header line
//! `[name]`, optionally followed by `key=value` options. Blank lines and lines
//! whose first non-blank character is `#` are ignored.
//!
//! ```text
//! [algebra]   name = <text>
//! [field]     rational | fp:<p>
//! [objects]   <id> <id> ...
//! [poset]     <weight> <weight> ...          declares weights
//!             <mu> < <lambda> [< ...]        cover relations
//! [special]   <s> -> <lambda> [@ <object>]
//! [basis]     <id> <X|H|Y|IDEMPOTENT> <from> <to> <degree> (<s>,<t>)
//! [mul] complete=<bool>
//!             <a> * <b> = [-] [<c>*]<id> (+|-) [<c>*]<id> ...   or `= 0`
//! [cutoff]    degree = <n> | finite = <bool> | finite_xy = <bool>
//!             lower <i> <j> = <n>
//! [tau]       <id> <-> <id>
//! ```
//!
//! Identifiers consist of letters, digits and `_ . ^ ' # : /`. Product ids
//! name full basis elements `x.h.y` by their factor ids joined with `.`.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::algcore::{AlgebraData, FactorData, Kind, SpecialData};
use crate::error::{Error, Result};
use crate::scalar::{Field, Scalar};

/// A parsed `.gta` file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GtaFile {
    pub data: AlgebraData,
}

const SECTIONS: [&str; 9] = ["algebra", "field", "objects", "poset", "special", "basis", "mul", "cutoff", "tau"];

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric() || "_.^'#:/".contains(c)
}

/// Position-tracking cursor over one line.
struct Cursor<'a> {
    line: usize,
    text: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(line: usize, text: &'a str) -> Cursor<'a> {
        Cursor { line, text, pos: 0 }
    }

    fn col(&self) -> usize {
        self.text[..self.pos].chars().count() + 1
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { line: self.line, col: self.col(), msg: msg.into() })
    }

    fn rest(&self) -> &'a str {
        &self.text[self.pos..]
    }

    fn ws(&mut self) {
        let r = self.rest();
        self.pos += r.len() - r.trim_start().len();
    }

    fn at_end(&mut self) -> bool {
        self.ws();
        self.rest().is_empty()
    }

    fn eat(&mut self, lit: &str) -> bool {
        self.ws();
        if self.rest().starts_with(lit) {
            self.pos += lit.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, lit: &str) -> Result<()> {
        if self.eat(lit) {
            Ok(())
        } else {
            self.err(format!("expected `{lit}`"))
        }
    }

    fn peek_word(&mut self) -> Option<&'a str> {
        self.ws();
        let r = self.rest();
        let n = r.find(|c: char| !is_word_char(c)).unwrap_or(r.len());
        (n > 0).then(|| &r[..n])
    }

    fn word(&mut self, what: &str) -> Result<Spanned> {
        self.ws();
        let col = self.col();
        match self.peek_word() {
            Some(w) => {
                self.pos += w.len();
                Ok(Spanned { text: w.to_string(), line: self.line, col })
            }
            None => self.err(format!("expected {what}")),
        }
    }

    fn int(&mut self, what: &str) -> Result<i64> {
        self.ws();
        let neg = self.eat("-");
        let w = self.word(what)?;
        match w.text.parse::<i64>() {
            Ok(n) => Ok(if neg { -n } else { n }),
            Err(_) => Err(w.error(format!("expected {what}, found `{}`", w.text))),
        }
    }

    fn boolean(&mut self) -> Result<bool> {
        let w = self.word("true or false")?;
        match w.text.as_str() {
            "true" => Ok(true),
            "false" => Ok(false),
            _ => Err(w.error(format!("expected true or false, found `{}`", w.text))),
        }
    }

    fn finish(&mut self) -> Result<()> {
        if self.at_end() {
            Ok(())
        } else {
            self.err(format!("unexpected `{}`", self.rest()))
        }
    }
}

/// A token with its source position.
#[derive(Clone, Debug)]
struct Spanned {
    text: String,
    line: usize,
    col: usize,
}

impl Spanned {
    fn error(&self, msg: impl Into<String>) -> Error {
        Error::Parse { line: self.line, col: self.col, msg: msg.into() }
    }
}

struct RawProduct {
    a: Spanned,
    b: Spanned,
    terms: Vec<(bool, Option<Spanned>, Spanned)>,
}

#[derive(Default)]
struct Raw {
    name: Option<String>,
    field: Option<Field>,
    objects: Vec<Spanned>,
    weights: Vec<Spanned>,
    covers: Vec<(Spanned, Spanned)>,
    specials: Vec<(Spanned, Spanned, Option<Spanned>)>,
    factors: Vec<(Spanned, Kind, Spanned, Spanned, i64, Spanned, Spanned)>,
    products: Vec<RawProduct>,
    complete: bool,
    cutoff: Option<i64>,
    finite: Option<bool>,
    finite_xy: Option<bool>,
    lower: Vec<(Spanned, Spanned, i64)>,
    tau: Vec<(Spanned, Spanned)>,
}

/// Parses a `.gta` file, checking that every referenced name is declared.
pub fn parse_gta(text: &str) -> Result<GtaFile> {
    let mut raw = Raw::default();
    let mut section: Option<&str> = None;
    let mut seen = BTreeSet::new();
    for (i, line) in text.lines().enumerate() {
        let mut c = Cursor::new(i + 1, line);
        if c.at_end() || c.rest().starts_with('#') {
            continue;
        }
        if c.eat("[") {
            let name = c.word("section name")?;
            c.expect("]")?;
            let Some(&s) = SECTIONS.iter().find(|s| **s == name.text) else {
                return Err(name.error(format!("unknown section `{}`", name.text)));
            };
            if !seen.insert(s) {
                return Err(name.error(format!("section `{s}` repeated")));
            }
            while !c.at_end() {
                let key = c.word("option")?;
                c.expect("=")?;
                match (s, key.text.as_str()) {
                    ("mul", "complete") => raw.complete = c.boolean()?,
                    _ => return Err(key.error(format!("unknown option `{}` for [{s}]", key.text))),
                }
            }
            section = Some(s);
            continue;
        }
        match section {
            None => return c.err("content before the first section"),
            Some(s) => parse_line(s, &mut c, &mut raw)?,
        }
    }
    finish(raw).map(|data| GtaFile { data })
}

fn parse_line(section: &str, c: &mut Cursor, raw: &mut Raw) -> Result<()> {
    match section {
        "algebra" => {
            let key = c.word("key")?;
            if key.text != "name" {
                return Err(key.error(format!("unknown key `{}`", key.text)));
            }
            c.expect("=")?;
            c.ws();
            let name = c.rest().trim();
            if name.is_empty() {
                return c.err("expected a name");
            }
            raw.name = Some(name.to_string());
            return Ok(());
        }
        "field" => {
            if raw.field.is_some() {
                return c.err("field declared twice");
            }
            let w = c.word("field")?;
            raw.field = Some(parse_field(&w.text).map_err(|e| w.error(e.to_string()))?);
        }
        "objects" => {
            while !c.at_end() {
                raw.objects.push(c.word("object id")?);
            }
        }
        "poset" => {
            let first = c.word("weight")?;
            if c.eat("<") {
                let mut prev = first;
                loop {
                    let next = c.word("weight")?;
                    raw.covers.push((prev, next.clone()));
                    prev = next;
                    if !c.eat("<") {
                        break;
                    }
                }
            } else {
                raw.weights.push(first);
                while !c.at_end() {
                    raw.weights.push(c.word("weight")?);
                }
            }
        }
        "special" => {
            let s = c.word("special label")?;
            c.expect("->")?;
            let w = c.word("weight")?;
            let o = if c.eat("@") { Some(c.word("object id")?) } else { None };
            raw.specials.push((s, w, o));
        }
        "basis" => {
            let id = c.word("basis id")?;
            let k = c.word("kind")?;
            let kind = Kind::parse(&k.text)
                .ok_or_else(|| k.error(format!("unknown kind `{}`, expected X, H, Y or IDEMPOTENT", k.text)))?;
            let from = c.word("source object")?;
            let to = c.word("target object")?;
            let degree = c.int("degree")?;
            c.expect("(")?;
            let s = c.word("pair entry")?;
            c.expect(",")?;
            let t = c.word("pair entry")?;
            c.expect(")")?;
            raw.factors.push((id, kind, from, to, degree, s, t));
        }
        "mul" => {
            let a = c.word("basis id")?;
            c.expect("*")?;
            let b = c.word("basis id")?;
            c.expect("=")?;
            let mut terms = Vec::new();
            let zero = c.peek_word() == Some("0") && {
                let save = c.pos;
                c.word("0")?;
                let end = c.at_end();
                c.pos = save;
                end
            };
            if zero {
                c.word("0")?;
            } else {
                let mut neg = c.eat("-");
                loop {
                    let w = c.word("coefficient or basis id")?;
                    let term = if c.eat("*") { (neg, Some(w), c.word("basis id")?) } else { (neg, None, w) };
                    terms.push(term);
                    if c.eat("+") {
                        neg = false;
                    } else if c.eat("-") {
                        neg = true;
                    } else {
                        break;
                    }
                }
            }
            raw.products.push(RawProduct { a, b, terms });
        }
        "cutoff" => {
            let key = c.word("key")?;
            match key.text.as_str() {
                "lower" => {
                    let i = c.word("object id")?;
                    let j = c.word("object id")?;
                    c.expect("=")?;
                    let n = c.int("bound")?;
                    raw.lower.push((i, j, n));
                }
                k @ ("degree" | "finite" | "finite_xy") => {
                    c.expect("=")?;
                    match k {
                        "degree" => raw.cutoff = Some(c.int("degree")?),
                        "finite" => raw.finite = Some(c.boolean()?),
                        _ => raw.finite_xy = Some(c.boolean()?),
                    }
                }
                _ => return Err(key.error(format!("unknown key `{}`", key.text))),
            }
        }
        "tau" => {
            let a = c.word("basis id")?;
            c.expect("<->")?;
            let b = c.word("basis id")?;
            raw.tau.push((a, b));
        }
        _ => unreachable!("section names are checked on entry"),
    }
    c.finish()
}

/// `rational` or `fp:<p>`.
pub fn parse_field(s: &str) -> Result<Field> {
    if s == "rational" {
        return Ok(Field::Rational);
    }
    match s.strip_prefix("fp:").map(str::parse::<u64>) {
        Some(Ok(p)) => Field::prime(p),
        _ => Err(Error::Usage(format!("unknown field `{s}`, expected rational or fp:<p>"))),
    }
}

fn finish(raw: Raw) -> Result<AlgebraData> {
    let field = raw.field.unwrap_or(Field::Rational);
    let objects: BTreeSet<&str> = raw.objects.iter().map(|o| o.text.as_str()).collect();
    let need_object = |o: &Spanned| -> Result<()> {
        if objects.contains(o.text.as_str()) {
            Ok(())
        } else {
            Err(Error::Integrity(format!("undeclared object `{}` (line {})", o.text, o.line)))
        }
    };
    let mut weights: Vec<String> = Vec::new();
    for w in raw.weights.iter().chain(raw.covers.iter().flat_map(|(a, b)| [a, b])) {
        if !weights.contains(&w.text) {
            weights.push(w.text.clone());
        }
    }
    let mut specials = Vec::new();
    for (s, w, o) in &raw.specials {
        if !weights.contains(&w.text) {
            return Err(Error::Integrity(format!("undeclared weight `{}` (line {})", w.text, w.line)));
        }
        let object = o.as_ref().unwrap_or(s);
        need_object(object)?;
        specials.push(SpecialData { label: s.text.clone(), weight: w.text.clone(), object: object.text.clone() });
    }
    let labels: BTreeSet<&str> = raw.specials.iter().map(|(s, _, _)| s.text.as_str()).collect();
    let mut factors = Vec::new();
    let mut ids = BTreeSet::new();
    for (id, kind, from, to, degree, s, t) in &raw.factors {
        if !ids.insert(id.text.as_str()) {
            return Err(Error::Integrity(format!("basis id `{}` declared twice (line {})", id.text, id.line)));
        }
        need_object(from)?;
        need_object(to)?;
        for x in [s, t] {
            if !labels.contains(x.text.as_str()) && !objects.contains(x.text.as_str()) {
                return Err(Error::Integrity(format!("undeclared label `{}` (line {})", x.text, x.line)));
            }
        }
        factors.push(FactorData {
            id: id.text.clone(),
            kind: *kind,
            from: from.text.clone(),
            to: to.text.clone(),
            degree: *degree,
            pair: (s.text.clone(), t.text.clone()),
        });
    }
    let need_id = |x: &Spanned| -> Result<()> {
        if ids.contains(x.text.as_str()) || x.text.split('.').all(|p| ids.contains(p)) {
            Ok(())
        } else {
            Err(Error::Integrity(format!("undeclared basis id `{}` (line {})", x.text, x.line)))
        }
    };
    let mut products = Vec::new();
    for p in &raw.products {
        need_id(&p.a)?;
        need_id(&p.b)?;
        let mut terms = Vec::new();
        for (neg, coef, id) in &p.terms {
            need_id(id)?;
            let c = match coef {
                Some(w) => field
                    .parse(&w.text)
                    .ok_or_else(|| w.error(format!("`{}` is not a scalar of {}", w.text, field.label())))?,
                None => field.one(),
            };
            terms.push((id.text.clone(), if *neg { c.neg() } else { c }));
        }
        products.push((p.a.text.clone(), p.b.text.clone(), terms));
    }
    let mut lower = Vec::new();
    for (i, j, n) in &raw.lower {
        need_object(i)?;
        need_object(j)?;
        lower.push((i.text.clone(), j.text.clone(), *n));
    }
    let mut tau = Vec::new();
    for (a, b) in &raw.tau {
        for x in [a, b] {
            if !ids.contains(x.text.as_str()) {
                return Err(Error::Integrity(format!("undeclared basis id `{}` (line {})", x.text, x.line)));
            }
        }
        tau.push((a.text.clone(), b.text.clone()));
    }
    Ok(AlgebraData {
        name: raw.name.unwrap_or_else(|| "gta".to_string()),
        field,
        objects: raw.objects.iter().map(|o| o.text.clone()).collect(),
        weights,
        covers: raw.covers.iter().map(|(a, b)| (a.text.clone(), b.text.clone())).collect(),
        specials,
        factors,
        products,
        cutoff: raw.cutoff.unwrap_or(0),
        complete: raw.complete,
        lower,
        tau,
        finite_xy: raw.finite_xy.unwrap_or(false),
        finite: raw.finite.unwrap_or(false),
    })
}

fn write_terms(out: &mut String, terms: &[(String, Scalar)]) {
    if terms.is_empty() {
        out.push('0');
        return;
    }
    for (k, (id, c)) in terms.iter().enumerate() {
        let neg = c.sign() == std::cmp::Ordering::Less;
        let abs = if neg { c.neg() } else { c.clone() };
        match (k, neg) {
            (0, true) => out.push_str("- "),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        if abs.is_one() {
            out.push_str(id);
        } else {
            let _ = write!(out, "{abs}*{id}");
        }
    }
}

/// Renders algebra data as a `.gta` file; [`parse_gta`] reads it back unchanged.
pub fn export_gta(data: &AlgebraData) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "[algebra]\nname = {}\n", data.name);
    let _ = writeln!(out, "[field]\n{}\n", data.field.label());
    out.push_str("[objects]\n");
    if !data.objects.is_empty() {
        let _ = writeln!(out, "{}", data.objects.join(" "));
    }
    out.push_str("\n[poset]\n");
    if !data.weights.is_empty() {
        let _ = writeln!(out, "{}", data.weights.join(" "));
    }
    for (a, b) in &data.covers {
        let _ = writeln!(out, "{a} < {b}");
    }
    out.push_str("\n[special]\n");
    for s in &data.specials {
        if s.object == s.label {
            let _ = writeln!(out, "{} -> {}", s.label, s.weight);
        } else {
            let _ = writeln!(out, "{} -> {} @ {}", s.label, s.weight, s.object);
        }
    }
    out.push_str("\n[basis]\n");
    for f in &data.factors {
        let _ = writeln!(out, "{} {} {} {} {} ({},{})", f.id, f.kind.name(), f.from, f.to, f.degree, f.pair.0, f.pair.1);
    }
    let _ = writeln!(out, "\n[mul] complete={}", data.complete);
    for (a, b, terms) in &data.products {
        let _ = write!(out, "{a} * {b} = ");
        write_terms(&mut out, terms);
        out.push('\n');
    }
    let _ = writeln!(
        out,
        "\n[cutoff]\ndegree = {}\nfinite = {}\nfinite_xy = {}",
        data.cutoff, data.finite, data.finite_xy
    );
    for (i, j, n) in &data.lower {
        let _ = writeln!(out, "lower {i} {j} = {n}");
    }
    if !data.tau.is_empty() {
        out.push_str("\n[tau]\n");
        for (a, b) in &data.tau {
            let _ = writeln!(out, "{a} <-> {b}");
        }
    }
    out
}
