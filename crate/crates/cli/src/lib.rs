//! The `xtt` command line. [`run`] does everything; `main` only wires it to
//! the process.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use xtt::diag::{line_col, Diagnostic};
use xtt::elab::{Checker, DeclReport, Options, Status};
use xtt::harness::fuzz::{self, Case, Verdict};
use xtt::sexp;
use xtt::surface::{parse_context, parse_expr, parse_file, parse_formula};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "xtt", version, about = "Proof checker for XTT, a cubical type theory for Bishop sets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Elaborate every declaration of the given files.
    Check {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[command(flatten)]
        run: RunFlags,
        /// Keep going after a failing declaration.
        #[arg(long)]
        continue_on_error: bool,
        /// Print each declaration's elaborated type and term.
        #[arg(long)]
        trace: bool,
        /// Re-elaborate each core term from its printed form.
        #[arg(long)]
        double_check: bool,
        /// Include `elapsed-ms` in reports (makes output nondeterministic).
        #[arg(long)]
        timings: bool,
    },
    /// Print the normal form of `EXPR : TYPE`.
    Normalize {
        #[arg(short = 'e', long = "expr")]
        expr: String,
        #[arg(short = 't', long = "type")]
        ty: String,
        /// Context entries, e.g. "A : U, a : El A, i, i = 0".
        #[arg(short = 'c', long = "context", default_value = "")]
        context: String,
        /// Files whose definitions are in scope.
        #[arg(short = 'f', long = "file")]
        files: Vec<PathBuf>,
        #[command(flatten)]
        run: RunFlags,
    },
    /// Print the face solver's branch table for a context and whether it
    /// entails a formula.
    Face {
        #[arg(short = 'c', long = "context", default_value = "")]
        context: String,
        #[arg(short = 'q', long = "query")]
        query: String,
    },
    /// Print elaborated core terms, one `(kind name type term)` per line.
    EmitCore {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[command(flatten)]
        run: RunFlags,
    },
    /// Run the canonicity fuzzer on generated closed booleans.
    Fuzz {
        #[arg(short = 'n', default_value_t = 1000)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        run: RunFlags,
    },
}

#[derive(Args, Debug, Clone)]
struct RunFlags {
    /// Dimension variables to split on before a conversion is undecided.
    /// XTT_MAX_SPLITS takes precedence.
    #[arg(long)]
    max_splits: Option<usize>,
    #[arg(long, value_enum, default_value_t = Report::Human)]
    report: Report,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Report {
    Human,
    JsonLines,
}

struct Usage(String);

impl RunFlags {
    fn options(&self) -> Result<Options, Usage> {
        let mut options = Options::default();
        if let Some(n) = self.max_splits {
            options.max_splits = n;
        }
        if let Ok(v) = std::env::var("XTT_MAX_SPLITS") {
            options.max_splits = v
                .trim()
                .parse()
                .map_err(|_| Usage(format!("XTT_MAX_SPLITS: not a non-negative integer: {v:?}")))?;
        }
        Ok(options)
    }
}

/// Runs one invocation and returns its exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    let status = match cli.command {
        Command::Check {
            files,
            run,
            continue_on_error,
            trace,
            double_check,
            timings,
        } => run.options().map(|mut options| {
            options.continue_on_error = continue_on_error;
            options.double_check = double_check;
            let mode = CheckMode {
                report: run.report,
                trace,
                timings,
                emit: false,
            };
            check_files(&files, &options, mode, out, err)
        }),
        Command::Normalize {
            expr,
            ty,
            context,
            files,
            run,
        } => run.options().map(|options| normalize(&expr, &ty, &context, &files, options, out, err)),
        Command::Face { context, query } => Ok(face(&context, &query, out, err)),
        Command::EmitCore { files, run } => run.options().map(|mut options| {
            options.continue_on_error = true;
            let mode = CheckMode {
                report: run.report,
                trace: false,
                timings: false,
                emit: true,
            };
            check_files(&files, &options, mode, out, err)
        }),
        Command::Fuzz { n, seed, run } => run.options().map(|options| run_fuzz(n, seed, &options, run.report, out)),
    };
    status.unwrap_or_else(|Usage(msg)| {
        let _ = writeln!(err, "xtt: {msg}");
        EXIT_USAGE
    })
}

#[derive(Clone, Copy)]
struct CheckMode {
    report: Report,
    trace: bool,
    timings: bool,
    emit: bool,
}

/// What checking one file produced, already rendered so it can cross
/// threads (sessions are not `Send`).
struct FileOutcome {
    out: Vec<String>,
    err: Vec<String>,
    status: i32,
}

fn check_files(files: &[PathBuf], options: &Options, mode: CheckMode, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let outcomes: Vec<FileOutcome> = std::thread::scope(|s| {
        let workers: Vec<_> = files
            .iter()
            .map(|path| s.spawn(move || check_file(path, options, mode)))
            .collect();
        workers.into_iter().map(|w| w.join().expect("checker thread panicked")).collect()
    });
    // One writer, in command-line order.
    let mut status = EXIT_OK;
    for o in outcomes {
        for line in &o.out {
            let _ = writeln!(out, "{line}");
        }
        for line in &o.err {
            let _ = writeln!(err, "{line}");
        }
        status = status.max(o.status);
    }
    status
}

fn read(path: &Path) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("xtt: cannot read {}: {e}", path.display()))
}

fn check_file(path: &Path, options: &Options, mode: CheckMode) -> FileOutcome {
    let file = path.display().to_string();
    let mut o = FileOutcome {
        out: Vec::new(),
        err: Vec::new(),
        status: EXIT_OK,
    };
    let src = match read(path) {
        Ok(s) => s,
        Err(e) => {
            o.err.push(e);
            o.status = EXIT_USAGE;
            return o;
        }
    };
    let decls = match parse_file(&src) {
        Ok(d) => d,
        Err(d) => {
            o.err.push(d.render(&file, &src));
            o.status = EXIT_USAGE;
            return o;
        }
    };
    let mut checker = Checker::new(options.clone());
    let reports = checker.check_declarations(&decls);
    for r in &reports {
        if r.status == Status::Failed {
            o.status = EXIT_FAILED;
        }
        if mode.emit {
            if let Some((ty, t)) = &r.core {
                o.out.push(sexp::emit_decl(r.kind, &r.name, ty, t));
            }
            if let Some(e) = &r.error {
                o.err.push(e.render(&file, &src));
            }
            continue;
        }
        match mode.report {
            Report::JsonLines => {
                o.out.push(json_report(r, mode.timings).to_string());
                if let Some(e) = &r.error {
                    o.err.push(e.render(&file, &src));
                }
            }
            Report::Human => human_report(&mut o, r, &checker, &file, &src, mode),
        }
    }
    if mode.report == Report::Human && !mode.emit {
        let failed = reports.iter().filter(|r| r.status == Status::Failed).count();
        let skipped = decls.len() - reports.len();
        let mut summary = format!("{file}: {} checked, {failed} failed", reports.len());
        if skipped > 0 {
            summary.push_str(&format!(", {skipped} skipped"));
        }
        o.out.push(summary);
    }
    o
}

fn json_report(r: &DeclReport, timings: bool) -> Value {
    let mut m = Map::new();
    m.insert("name".into(), json!(r.name));
    m.insert("kind".into(), json!(r.kind));
    m.insert("status".into(), json!(status_str(r)));
    if timings {
        m.insert("elapsed-ms".into(), json!(r.elapsed_ms as u64));
    }
    if let Some(d) = r.error.as_ref().or(r.rejected_with.as_ref()) {
        m.insert("error-code".into(), json!(d.code.as_str()));
    }
    if r.branches_split > 0 {
        m.insert("branches-split".into(), json!(r.branches_split));
    }
    Value::Object(m)
}

fn status_str(r: &DeclReport) -> &'static str {
    match r.status {
        Status::Ok => "ok",
        Status::Failed => "failed",
    }
}

fn human_report(o: &mut FileOutcome, r: &DeclReport, checker: &Checker, file: &str, src: &str, mode: CheckMode) {
    let (row, _) = line_col(src, r.span.start);
    let mut line = format!("{file}:{row}: {:<6} {} {}", status_str(r), r.kind, r.name);
    if let Some(d) = &r.rejected_with {
        line.push_str(&format!(" (rejected: {})", d.code));
    }
    if r.branches_split > 0 {
        line.push_str(&format!(" [splits: {}]", r.branches_split));
    }
    if mode.timings {
        line.push_str(&format!(" {}ms", r.elapsed_ms));
    }
    o.out.push(line);
    if let Some(e) = &r.error {
        o.err.push(e.render(file, src));
    }
    if mode.trace {
        if let Some((ty, t)) = &r.core {
            let cx = checker.empty_ctx();
            o.out.push(format!("    : {}", cx.show(ty)));
            o.out.push(format!("    = {}", cx.show(t)));
        }
    }
}

fn load(checker: &mut Checker, files: &[PathBuf]) -> Result<(), (i32, String)> {
    for path in files {
        let src = read(path).map_err(|e| (EXIT_USAGE, e))?;
        let file = path.display().to_string();
        let decls = parse_file(&src).map_err(|d| (EXIT_USAGE, d.render(&file, &src)))?;
        for r in checker.check_declarations(&decls) {
            if let Some(e) = r.error {
                return Err((EXIT_FAILED, e.render(&file, &src)));
            }
        }
    }
    Ok(())
}

fn normalize(
    expr: &str,
    ty: &str,
    context: &str,
    files: &[PathBuf],
    options: Options,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    let mut checker = Checker::new(options);
    if let Err((code, msg)) = load(&mut checker, files) {
        let _ = writeln!(err, "{msg}");
        return code;
    }
    let parsed = (|| Ok::<_, (&str, &str, Diagnostic)>((
        parse_context(context).map_err(|d| ("<context>", context, d))?,
        parse_expr(expr).map_err(|d| ("<expr>", expr, d))?,
        parse_expr(ty).map_err(|d| ("<type>", ty, d))?,
    )))();
    let (entries, e, t) = match parsed {
        Ok(p) => p,
        Err((what, src, d)) => {
            let _ = writeln!(err, "{}", d.render(what, src));
            return EXIT_USAGE;
        }
    };
    let result = checker
        .context(&entries)
        .map_err(|d| d.render("<context>", context))
        .and_then(|cx| {
            checker
                .normalize(&cx, &e, &t)
                .map(|nf| cx.show(&nf))
                .map_err(|d| d.render("<expr>", expr))
        });
    match result {
        Ok(nf) => {
            let _ = writeln!(out, "{nf}");
            EXIT_OK
        }
        Err(msg) => {
            let _ = writeln!(err, "{msg}");
            EXIT_FAILED
        }
    }
}

fn face(context: &str, query: &str, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let parsed = parse_context(context)
        .map_err(|d| d.render("<context>", context))
        .and_then(|c| Ok((c, parse_formula(query).map_err(|d| d.render("<query>", query))?)));
    let (entries, phi) = match parsed {
        Ok(p) => p,
        Err(msg) => {
            let _ = writeln!(err, "{msg}");
            return EXIT_USAGE;
        }
    };
    let checker = Checker::new(Options::default());
    let cx = match checker.context(&entries) {
        Ok(cx) => cx,
        Err(d) => {
            let _ = writeln!(err, "{}", d.render("<context>", context));
            return EXIT_FAILED;
        }
    };
    let sem = match checker.formula(&cx, &phi) {
        Ok((_, sem)) => sem,
        Err(d) => {
            let _ = writeln!(err, "{}", d.render("<query>", query));
            return EXIT_FAILED;
        }
    };
    let _ = writeln!(out, "branches:");
    for b in cx.branch_table() {
        let _ = writeln!(out, "  {b}");
    }
    let _ = writeln!(out, "verdict: {}", cx.state().entails(&sem));
    EXIT_OK
}

fn run_fuzz(n: usize, seed: u64, options: &Options, report: Report, out: &mut dyn Write) -> i32 {
    let start = Instant::now();
    let cases = fuzz::fuzz(n, seed, options);
    let failures = cases.iter().filter(|c| !c.passed()).count();
    match report {
        Report::JsonLines => {
            for c in &cases {
                let _ = writeln!(out, "{}", json_case(c));
            }
        }
        Report::Human => {
            for c in cases.iter().filter(|c| !c.passed()) {
                let _ = writeln!(out, "FAIL seed {} size {}: {}", c.term.seed, c.term.size, describe(&c.verdict));
                let _ = writeln!(out, "  term:   {}", c.term.source);
                if let Some(s) = &c.shrunk {
                    let _ = writeln!(out, "  shrunk: {} (size {})", s.source, s.size);
                }
            }
            let _ = writeln!(
                out,
                "{}/{} canonical, seed {seed}, {:.2}s",
                n - failures,
                n,
                start.elapsed().as_secs_f64()
            );
        }
    }
    if failures == 0 {
        EXIT_OK
    } else {
        EXIT_FAILED
    }
}

fn describe(v: &Verdict) -> String {
    match v {
        Verdict::Canonical(b) => format!("canonical {}", lit(*b)),
        Verdict::Rejected(d) => format!("rejected: {d}"),
        Verdict::NotCanonical(nf) => format!("not canonical: {nf}"),
        Verdict::WrongValue(b) => format!("normalized to the wrong literal {}", lit(*b)),
    }
}

fn lit(b: bool) -> &'static str {
    if b {
        "tt"
    } else {
        "ff"
    }
}

fn json_case(c: &Case) -> Value {
    let mut m = Map::new();
    m.insert("seed".into(), json!(c.term.seed));
    m.insert("size".into(), json!(c.term.size));
    let status = match &c.verdict {
        Verdict::Canonical(_) => "canonical",
        Verdict::Rejected(_) => "rejected",
        Verdict::NotCanonical(_) => "not-canonical",
        Verdict::WrongValue(_) => "wrong-value",
    };
    m.insert("status".into(), json!(status));
    m.insert("expected".into(), json!(lit(c.term.expected)));
    match &c.verdict {
        Verdict::Canonical(b) | Verdict::WrongValue(b) => {
            m.insert("value".into(), json!(lit(*b)));
        }
        Verdict::Rejected(d) => {
            m.insert("error-code".into(), json!(d.code.as_str()));
        }
        Verdict::NotCanonical(nf) => {
            m.insert("normal-form".into(), json!(nf));
        }
    }
    if c.branches_split > 0 {
        m.insert("branches-split".into(), json!(c.branches_split));
    }
    if let Some(s) = &c.shrunk {
        m.insert("shrunk".into(), json!(s.source));
    }
    Value::Object(m)
}
