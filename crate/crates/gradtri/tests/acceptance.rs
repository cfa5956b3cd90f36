//! Acceptance criteria: one pass/fail line per criterion.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use gradtri::algcore::TriangularAlgebra;
use gradtri::cli::{run, Command, Format, Options, Source};
use gradtri::corpus;
use gradtri::error::Error;
use gradtri::module::GradedModule;
use gradtri::modfun::{BlockRef, Family, Theory};
use gradtri::qseries::{Direction, QSeries};
use gradtri::report::Verdict;

type Check = Result<(), String>;

fn msg(e: Error) -> String {
    e.to_string()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Check {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn theory(data: gradtri::algcore::AlgebraData) -> Result<Theory, String> {
    Theory::new(TriangularAlgebra::build(data).map_err(msg)?).map_err(msg)
}

fn terms(s: &QSeries) -> Vec<(i64, u64)> {
    s.terms().filter(|(_, c)| *c != 0).collect()
}

fn block(t: &Theory, label: &str) -> Result<BlockRef, String> {
    t.block(label).map_err(msg)
}

fn axiom_gate() -> Check {
    let start = Instant::now();
    for d in [4, 8, 16] {
        for data in [corpus::ground(), corpus::matrix(2), corpus::poly(d), corpus::e1(d), corpus::nilhecke2(d)] {
            let a = TriangularAlgebra::build(data).map_err(msg)?;
            let r = a.verify_axioms(1);
            ensure(r.passed(), || format!("{} at D={d}: {:?}", a.name(), r.failing()))?;
        }
    }
    let mutants = corpus::mutants(8);
    ensure(mutants.len() == 6, || format!("{} mutants", mutants.len()))?;
    for m in mutants {
        let a = TriangularAlgebra::build(m.data).map_err(msg)?;
        let failing = a.verify_axioms(1).failing();
        ensure(failing == vec![m.axiom], || format!("{}: {failing:?}", m.name))?;
    }
    let took = start.elapsed();
    ensure(took < Duration::from_secs(5), || format!("took {took:?}"))
}

fn quotient_consistency() -> Check {
    for data in [corpus::e1(16), corpus::nilhecke2(16)] {
        let a = TriangularAlgebra::build(data).map_err(msg)?;
        for l in 0..a.poset.len() {
            let upper = a.poset.upper_set(l);
            let killed: Vec<usize> = (0..a.poset.len()).filter(|w| !upper.contains(w)).collect();
            let q = a.upper_quotient(l).map_err(msg)?;
            let nonzero = |m: BTreeMap<(String, String, i64), usize>| -> BTreeMap<_, _> {
                m.into_iter().filter(|(_, n)| *n > 0).collect()
            };
            let from_basis = nonzero(q.basis_dims());
            let from_ideal = nonzero(a.ideal_quotient_dims(&killed).map_err(msg)?);
            ensure(from_basis == from_ideal, || format!("{} at weight {}", a.name(), a.poset.labels[l]))?;
        }
    }
    Ok(())
}

fn classification() -> Check {
    for t in [theory(corpus::e1(8))?, theory(corpus::poly(8))?] {
        let bs = t.blocks();
        let ls: Vec<_> = bs.iter().map(|b| t.irreducible(b)).collect::<Result<_, _>>().map_err(msg)?;
        for i in 0..bs.len() {
            for j in 0..i {
                let r = t.isomorphic(&ls[i], &ls[j]).map_err(msg)?;
                ensure(!r.iso, || format!("L({}) ~ L({})", bs[i].label, bs[j].label))?;
            }
            let local = t.cartan_truncate(bs[i].weight, &ls[i]).map_err(msg)?;
            let want = t.cartan_simple(&bs[i]).map_err(msg)?;
            ensure(local.character() == want.character(), || format!("e L({}) is not L_lambda", bs[i].label))?;
        }
    }
    Ok(())
}

fn hom_orthogonality() -> Check {
    let t = theory(corpus::e1(8))?;
    for b in t.blocks() {
        for c in t.blocks() {
            let want = if b == c { vec![(0, 1)] } else { vec![] };
            for (f, g) in [(Family::Std, Family::ProperCostd), (Family::ProperStd, Family::Costd)] {
                let v = t.standard(&b, f).map_err(msg)?;
                let w = t.standard(&c, g).map_err(msg)?;
                let h = t.hom_space(&v, &w).map_err(msg)?;
                ensure(terms(&h.series) == want, || format!("Hom({}, {}) = {}", v.name, w.name, h.series))?;
            }
        }
    }
    Ok(())
}

fn bgg_reciprocity() -> Check {
    let t = theory(corpus::e1(8))?;
    for b in t.blocks() {
        let r = t.bgg_check(&b, 8, false).map_err(msg)?;
        ensure(r.verdict == Verdict::Pass, || format!("E1 {}", b.label))?;
    }
    let r = t.bgg_check(&block(&t, "1#0")?, 8, false).map_err(msg)?;
    let row = r.rows.iter().find(|row| row.standard == "0#0").ok_or("no row for 0#0")?;
    let qinv = vec![(-1, 1)];
    ensure(terms(&row.flag_side) == qinv && terms(&row.composition_side) == qinv, || {
        format!("(P(1#0):Delta(0#0)) = {}, [NablaBar(0#0):L(1#0)] conj = {}", row.flag_side, row.composition_side)
    })?;
    let m = theory(corpus::matrix(2))?;
    for b in m.blocks() {
        let r = m.bgg_check(&b, 8, false).map_err(msg)?;
        ensure(r.verdict == Verdict::Pass, || format!("matrix(2) {}", b.label))?;
    }
    Ok(())
}

fn explicit_flag() -> Check {
    let t = theory(corpus::e1(8))?;
    let (q, flag) = t.build_projective_flag(&block(&t, "1#0")?).map_err(msg)?;
    type Layer = Vec<(String, Vec<(i64, u64)>)>;
    let layers: Vec<Layer> =
        flag.layers.iter().map(|l| l.mult.iter().map(|(b, s)| (b.clone(), terms(s))).collect()).collect();
    let want = vec![vec![("1#0".to_string(), vec![(0, 1)])], vec![("0#0".to_string(), vec![(-1, 1)])]];
    ensure(layers == want, || format!("layers {layers:?}"))?;
    for c in t.verify_flag(&q, &flag).map_err(msg)? {
        ensure(c.verdict == Verdict::Pass, || format!("{}: {:?}", c.name, c.details))?;
    }
    Ok(())
}

fn ext_vanishing() -> Check {
    let t = theory(corpus::e1(8))?;
    for b in t.blocks() {
        for c in t.blocks() {
            for (f, g) in [(Family::Std, Family::ProperCostd), (Family::ProperStd, Family::Costd)] {
                let v = t.standard(&b, f).map_err(msg)?;
                let w = t.standard(&c, g).map_err(msg)?;
                let e = t.ext1(&v, &w).map_err(msg)?;
                ensure(e.series.is_zero(), || format!("Ext1({}, {}) = {}", v.name, w.name, e.series))?;
                let exact = e.series.direction() == Direction::Poly;
                ensure(exact || e.range.1 - e.range.0 >= 6, || format!("Ext1({}, {}) window {:?}", v.name, w.name, e.range))?;
            }
        }
    }
    Ok(())
}

fn iso(t: &Theory, a: &GradedModule, b: &GradedModule) -> Result<bool, String> {
    t.isomorphic(a, b).map(|r| r.iso).map_err(msg)
}

fn duality() -> Check {
    let t = theory(corpus::e1(8))?;
    for b in t.blocks() {
        for f in Family::ALL {
            let m = t.standard(&b, f).map_err(msg)?;
            let dd = t.dualize(&t.dualize(&m).map_err(msg)?).map_err(msg)?;
            ensure(iso(&t, &m, &dd)?, || format!("{} double dual", m.name))?;
        }
        let d = t.standard(&b, Family::Std).map_err(msg)?;
        let n = t.standard(&b, Family::Costd).map_err(msg)?;
        ensure(iso(&t, &t.tau_dualize(&d).map_err(msg)?, &n)?, || format!("Delta({})^tau", b.label))?;
        let l = t.irreducible(&b).map_err(msg)?;
        ensure(iso(&t, &t.tau_dualize(&l).map_err(msg)?, &l)?, || format!("L({})^tau", b.label))?;
    }
    Ok(())
}

fn truncation() -> Check {
    let t = theory(corpus::e1(8))?;
    let b0 = block(&t, "0#0")?;
    let g = t.gamma_algebra(&[0]).map_err(msg)?;
    let pg = t.gamma_projective(&g, &b0).map_err(msg)?;
    let sh = t.gamma_shriek(&g, &pg).map_err(msg)?;
    let p0 = t.projective(&b0).map_err(msg)?;
    let r = t.isomorphic(&sh, &p0).map_err(msg)?;
    ensure(r.iso, || format!("j_! P_Gamma(0#0) vs P(0#0): {}", r.reason))?;
    let p1 = t.projective(&block(&t, "1#0")?).map_err(msg)?;
    let c = t.counit_unit_check(&[0], &p1).map_err(msg)?;
    ensure(c.epsilon_iso && c.top >= 8, || format!("counit on P(1#0): {:?}", c.details))
}

fn multiplicity_algebra() -> Check {
    let t = theory(corpus::e1(8))?;
    for b in t.blocks() {
        let (q, _) = t.build_projective_flag(&b).map_err(msg)?;
        for r in [t.standard_sum_check(&q, 8), t.composition_sum_check(&q, 8)] {
            let r = r.map_err(msg)?;
            ensure(r.verdict == Verdict::Pass, || format!("{} on Q({}): {:?}", r.name, b.label, r.details))?;
        }
    }
    Ok(())
}

fn determinism() -> Check {
    let commands = [
        Command::Verify,
        Command::Cartan,
        Command::Bgg { block: None },
        Command::Flag { block: Some("1#0".into()), module: None },
        Command::Decompose { module: "P:1#0".into() },
        Command::Ascending { module: "P:1#0".into(), gammas: vec!["0".into(), "0,1".into()] },
    ];
    for src in ["e1:8", "twin:8", "matrix:2"] {
        let source = Source::Corpus(src.into());
        for cmd in &commands {
            let mut outs = Vec::new();
            for threads in [1, 1, 4] {
                for format in [Format::Text, Format::Json] {
                    let opts = Options { threads, format, ..Options::default() };
                    outs.push(run(&source, cmd, &opts));
                }
            }
            for k in 2..outs.len() {
                let (a, b) = (&outs[k % 2], &outs[k]);
                ensure(a.stdout == b.stdout && a.code == b.code, || format!("{} {src}", cmd.name()))?;
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    type Criterion = (&'static str, fn() -> Check);
    let criteria: [Criterion; 11] = [
        ("axiom gate on the corpus and mutants", axiom_gate),
        ("basis and quotient dimensions agree", quotient_consistency),
        ("simples classified", classification),
        ("Hom orthogonality", hom_orthogonality),
        ("BGG reciprocity", bgg_reciprocity),
        ("explicit projective flag", explicit_flag),
        ("Ext1 vanishing", ext_vanishing),
        ("duality", duality),
        ("truncation", truncation),
        ("summation identities", multiplicity_algebra),
        ("determinism", determinism),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let result = check();
        let secs = t.elapsed().as_secs_f64();
        match result {
            Ok(()) => println!("criterion {:>2}: pass  {name} ({secs:.2} s)", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {:>2}: FAIL  {name} ({secs:.2} s): {msg}", i + 1);
            }
        }
    }
    println!("{} of {} criteria pass in {:.2} s", criteria.len() - failed, criteria.len(), start.elapsed().as_secs_f64());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
