//! One pass/fail line per acceptance criterion. Runs without the libtest
//! harness so the lines always print; exits non-zero if any criterion fails.

use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

use serde_json::Value;

use xtt::conv::Verdict;
use xtt::elab::{Checker, DeclReport, Options, Status};
use xtt::harness::corpus::{corpus, round_trips};
use xtt::harness::laws::{com_instances, el_equations, kan_equations, Law};
use xtt::harness::oracle::compare_grid;
use xtt::sexp;
use xtt::surface::{parse_context, parse_expr};
use xtt::syntax::alpha_equal;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn xtt(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_xtt"))
        .args(args)
        .output()
        .expect("xtt binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

fn corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

fn source(name: &str) -> &'static str {
    corpus().into_iter().find(|(n, _)| *n == name).expect("corpus file").1
}

fn checked(name: &str) -> Result<(Checker, Vec<DeclReport>), String> {
    let src = source(name);
    let mut checker = Checker::new(Options {
        continue_on_error: true,
        ..Options::default()
    });
    let reports = checker.check_source(src).map_err(|d| d.render(name, src))?;
    match reports.iter().find_map(|r| r.error.as_ref()) {
        Some(e) => Err(e.render(name, src)),
        None => Ok((checker, reports)),
    }
}

fn equal(law: &Law, checker: &Checker) -> Result<(), String> {
    match law.decide(checker) {
        Ok(Verdict::Equal) => Ok(()),
        other => Err(format!("{}: {other:?}", law.role)),
    }
}

fn canonicity() -> Outcome {
    let start = Instant::now();
    let (code, out, err) = xtt(&["fuzz", "-n", "1000", "--seed", "42", "--report", "json-lines"]);
    let secs = start.elapsed().as_secs_f64();
    let cases: Vec<Value> = out.lines().map(|l| serde_json::from_str(l).expect("json line")).collect();
    let canonical = cases.iter().filter(|c| c["status"] == "canonical").count();
    let detail = format!("{canonical}/{} canonical, exit {code}, {secs:.2}s", cases.len());
    if code == 0 && canonical == 1000 && cases.len() == 1000 && secs < 60.0 {
        Ok(detail)
    } else {
        Err(format!("{detail}\n{err}"))
    }
}

fn uip() -> Outcome {
    let law = Law {
        role: "UIP".into(),
        context: "A : U, a : El A, b : El A, p : path (_. El A) a b, q : path (_. El A) a b".into(),
        ty: Some("path (_. El A) a b".into()),
        lhs: "p".into(),
        rhs: "q".into(),
    };
    equal(&law, &Checker::new(Options::default()))?;
    checked("uip.xtt")?;
    Ok("p ≡ q for generic p q : path (_. El A) a b; uip.xtt checks".into())
}

fn funext() -> Outcome {
    let checker = Checker::new(Options::default());
    let entries = parse_context(
        "A : U, B : El A -> U, f : (x : El A) -> El (B x), g : (x : El A) -> El (B x), \
         h : (x : El A) -> path (_. El (B x)) (f x) (g x)",
    )
    .map_err(|d| d.to_string())?;
    let cx = checker.context(&entries).map_err(|d| d.to_string())?;
    let term = parse_expr("<i> \\x. h x @ i").map_err(|d| d.to_string())?;
    let ty = parse_expr("path (_. (x : El A) -> El (B x)) f g").map_err(|d| d.to_string())?;
    checker.normalize(&cx, &term, &ty).map_err(|d| d.to_string())?;
    Ok("<i> \\x. h x @ i : path (_. (x : El A) -> El (B x)) f g".into())
}

fn prelude_law(role: &str, context: &str, ty: &str, lhs: &str, rhs: &str) -> Result<(), String> {
    let (checker, _) = checked("prelude.xtt")?;
    let law = Law {
        role: role.into(),
        context: context.into(),
        ty: Some(ty.into()),
        lhs: lhs.into(),
        rhs: rhs.into(),
    };
    equal(&law, &checker)
}

/// The corpus's `#normalize` declarations, in order, must all agree.
fn prelude_normalizations() -> Result<Vec<DeclReport>, String> {
    let (_, reports) = checked("prelude.xtt")?;
    let normals: Vec<DeclReport> = reports.into_iter().filter(|r| r.kind == "normalize").collect();
    match normals.iter().find(|r| r.status != Status::Ok) {
        Some(r) => Err(format!("{} at byte {} failed", r.name, r.span.start)),
        None => Ok(normals),
    }
}

fn j_on_refl() -> Outcome {
    let normals = prelude_normalizations()?;
    if normals.is_empty() {
        return Err("prelude.xtt has no #normalize".into());
    }
    prelude_law(
        "J on refl",
        "A : U, C : (x y : El A) -> path (_. El A) x y -> U, a : El A, \
         c : (x : El A) -> El (C x x (<_> x))",
        "El (C a a (<_> a))",
        "J A C a a (<_> a) c",
        "c a",
    )?;
    Ok("#normalize agrees; J A C a a (<_> a) c ≡ c a".into())
}

fn kan() -> Outcome {
    let eqs = kan_equations();
    let mut instances = 0;
    for (_, laws) in &eqs {
        for law in laws {
            equal(law, &Checker::new(Options::default()))?;
            instances += 1;
        }
    }
    if eqs.len() != 7 {
        return Err(format!("{} equations, expected 7", eqs.len()));
    }
    let names: Vec<&str> = eqs.iter().map(|(n, _)| *n).collect();
    Ok(format!("7/7 equations ({instances} instances, j free): {}", names.join(", ")))
}

fn decomposition() -> Outcome {
    let instances = com_instances(42, 20);
    for c in &instances {
        equal(&c.via_target, &Checker::new(Options::default()))?;
    }
    let source = instances
        .iter()
        .filter(|c| matches!(c.via_source.decide(&Checker::new(Options::default())), Ok(Verdict::Equal)))
        .count();
    Ok(format!(
        "20/20 com ≡ coe∘hcom through the target fibre (source-fibre variant: {source}/20, see README)"
    ))
}

fn el() -> Outcome {
    let laws = el_equations();
    for law in &laws {
        equal(law, &Checker::new(Options::default()))?;
    }
    Ok(format!("{}/4 decodings", laws.len()))
}

fn strictness() -> Outcome {
    prelude_normalizations()?;
    let paths = "A : U, a : El A, b : El A, c : El A, d : El A, p : path (_. El A) a b, \
                 q : path (_. El A) b c, w : path (_. El A) c d";
    prelude_law(
        "trans is associative",
        paths,
        "path (_. El A) a d",
        "trans A a c d (trans A a b c p q) w",
        "trans A a b d p (trans A b c d q w)",
    )?;
    prelude_law(
        "trans (sym p) p is reflexivity",
        paths,
        "path (_. El A) b b",
        "trans A b a b (sym A a b p) p",
        "<_> b",
    )?;
    Ok("(p·q)·w ≡ p·(q·w); trans(sym p, p) ≡ <_> b".into())
}

fn face_grid() -> Outcome {
    let start = Instant::now();
    let report = compare_grid(3, 3);
    let secs = start.elapsed().as_secs_f64();
    let detail = format!(
        "{} sequents, {} disagreements, {secs:.1}s",
        report.sequents,
        report.disagreements.len()
    );
    if report.disagreements.is_empty() && secs < 30.0 {
        Ok(detail)
    } else {
        Err(format!("{detail}; first: {:?}", report.disagreements.first()))
    }
}

fn negatives() -> Outcome {
    let (_, reports) = checked("negatives.xtt")?;
    let expected = [
        ("abort in a consistent context", "E033"),
        ("uncovered split", "E031"),
        ("∂i for a free i", "E031"),
        ("overlapping branches disagree", "E032"),
        ("path-λ boundary mismatch", "E030"),
        ("U : U", "E026"),
    ];
    let mut seen = Vec::new();
    for ((what, code), r) in expected.iter().zip(&reports) {
        let got = r.rejected_with.as_ref().map(|d| d.code.as_str());
        if got != Some(*code) {
            return Err(format!("{what}: expected {code}, got {got:?}"));
        }
        seen.push(format!("{what} → {code}"));
    }
    let (code, out, _) = xtt(&["face", "-c", "i", "-q", "dd i"]);
    if code != 0 || !out.contains("verdict: false") {
        return Err(format!("xtt face -c i -q 'dd i': exit {code}\n{out}"));
    }
    Ok(format!("{}; face solver: i ⊬ ∂i", seen.join(", ")))
}

fn round_trip() -> Outcome {
    let mut count = 0;
    for (name, _) in corpus() {
        let (checker, reports) = checked(name)?;
        for rt in round_trips(&checker, &reports) {
            if !(rt.normal_form && rt.emitted) {
                return Err(format!("{name}: {rt:?}"));
            }
            count += 1;
        }
        // The binary's emit-core output parses back to the same core.
        let path = corpus_dir().join(name);
        let (code, out, err) = xtt(&["emit-core", path.to_str().expect("utf-8 path")]);
        if code != 0 {
            return Err(format!("emit-core {name}: exit {code}\n{err}"));
        }
        let cores: Vec<_> = reports.iter().filter_map(|r| r.core.as_ref()).collect();
        let lines: Vec<&str> = out.lines().collect();
        if lines.len() != cores.len() {
            return Err(format!("emit-core {name}: {} lines for {} declarations", lines.len(), cores.len()));
        }
        for (line, (ty, t)) in lines.iter().zip(cores) {
            let (_, _, ty2, t2) = sexp::parse_decl(line).map_err(|d| d.to_string())?;
            if !alpha_equal(ty, &ty2) || !alpha_equal(t, &t2) {
                return Err(format!("emit-core {name}: {line} does not round-trip"));
            }
        }
    }
    Ok(format!("{count} declarations: eval∘quote stable, emit-core → parse alpha-equal"))
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("canonicity", canonicity),
        ("definitional UIP", uip),
        ("funext", funext),
        ("J on refl", j_on_refl),
        ("Kan equations", kan),
        ("com decomposition", decomposition),
        ("El equations", el),
        ("strictness of trans", strictness),
        ("face solver vs oracle", face_grid),
        ("negative suite", negatives),
        ("NbE and emit-core round trips", round_trip),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("criterion {:>2} PASS {name}: {detail}", k + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name}: {why}", k + 1);
            }
        }
    }
    println!("acceptance: {}/{} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
