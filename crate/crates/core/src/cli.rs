//! The `oclam` command line.
//!
//! [`run`] takes the full argument vector and returns an exit code with the
//! text to print, so the binary and the tests share one code path.
//!
//! Exit codes: 0 success, 1 usage or parse error, 2 semantic failure (type
//! error, distinguished terms, failed property), 3 unknown result or fuel
//! exhausted, 4 internal error.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use crate::denot::{basis, decidable, BangMode, DenotError, Evaluator, SemEnv, SemValue};
use crate::encode::{is_vector_type, matrix_to_term, term_to_matrix, EncodeError, Matrix};
use crate::equiv::{obs_equiv, EquivOptions, EquivVerdict};
use crate::reduce::{normalize, NormalizeOptions, ReduceError, Strategy, DEFAULT_FUEL};
use crate::semiring::Semiring;
use crate::suites::{self, Prop, SuiteConfig};
use crate::syntax::{parse_term, parse_type, pinned_type, DualContext, ParseError, Term, Type};
use crate::typecheck::{check, check_closed, infer_closed, TypeError};

#[derive(Parser, Debug, Serialize)]
#[command(
    name = "oclam",
    version,
    about = "Linear lambda calculus with scalars: typing, reduction, matrices and semantics"
)]
struct Cli {
    /// Scalars: trivial, nat, rat or crat.
    #[arg(long, global = true, default_value = "nat", value_parser = parse_semiring)]
    #[serde(serialize_with = "ser_semiring")]
    semiring: Semiring,
    /// Maximum number of reduction steps per normalisation.
    #[arg(long, global = true, default_value_t = DEFAULT_FUEL)]
    fuel: u64,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Print one JSON document instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Add elapsed wall-clock time to the timings. Makes output
    /// non-reproducible.
    #[arg(long, global = true)]
    wall_clock: bool,
    #[command(subcommand)]
    command: Command,
}

fn parse_semiring(s: &str) -> Result<Semiring, String> {
    Semiring::ALL
        .into_iter()
        .find(|r| r.name() == s)
        .ok_or_else(|| format!("unknown semiring `{s}` (trivial, nat, rat, crat)"))
}

fn ser_semiring<S: serde::Serializer>(s: &Semiring, ser: S) -> Result<S::Ok, S::Error> {
    ser.serialize_str(s.name())
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
enum Command {
    /// Typecheck a closed term.
    Check(CheckArgs),
    /// Reduce a term to normal form.
    Normalize(NormalizeArgs),
    /// Translate between matrices and terms.
    #[command(subcommand)]
    Matrix(MatrixCommand),
    /// Evaluate a term in the semimodule model.
    Eval(EvalArgs),
    /// Compare two closed terms under elimination contexts.
    Equiv(EquivArgs),
    /// Run property suites on generated terms.
    Fuzz(FuzzArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Check(_) => "check",
            Command::Normalize(_) => "normalize",
            Command::Matrix(MatrixCommand::Compile(_)) => "matrix compile",
            Command::Matrix(MatrixCommand::Extract(_)) => "matrix extract",
            Command::Eval(_) => "eval",
            Command::Equiv(_) => "equiv",
            Command::Fuzz(_) => "fuzz",
        }
    }
}

#[derive(Args, Debug, Serialize)]
struct CheckArgs {
    file: PathBuf,
    /// Expected type; defaults to the file's `-- type:` line, else inferred.
    #[arg(long = "type")]
    ty: Option<String>,
}

#[derive(Args, Debug, Serialize)]
struct NormalizeArgs {
    file: PathBuf,
    /// Print every intermediate term.
    #[arg(long)]
    trace: bool,
    /// `lo` for leftmost-outermost or `rand:SEED`.
    #[arg(long, default_value = "lo")]
    strategy: String,
    /// Also use the rules that drop summands and scalars.
    #[arg(long)]
    ultra: bool,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
enum MatrixCommand {
    /// Matrix JSON file to a term of type `DOMAIN -o CODOMAIN`.
    Compile(MatrixArgs),
    /// Term file to matrix JSON.
    Extract(MatrixArgs),
}

#[derive(Args, Debug, Serialize)]
struct MatrixArgs {
    file: PathBuf,
    #[arg(long)]
    domain: String,
    #[arg(long)]
    codomain: String,
}

#[derive(Args, Debug, Serialize)]
struct EvalArgs {
    file: PathBuf,
    #[arg(long = "type")]
    ty: Option<String>,
    /// For a function, apply it to this basis element of its domain.
    #[arg(long, conflicts_with = "env")]
    at: Option<usize>,
    /// Values for free variables, one `x : T = TERM` per line; `!x : T =
    /// TERM` binds `x` intuitionistically to a term of type `!T`.
    #[arg(long)]
    env: Option<PathBuf>,
    /// Where intuitionistic bindings are split into atoms.
    #[arg(long, default_value = "eager", value_parser = ["eager", "deferred"])]
    bang_mode: String,
}

#[derive(Args, Debug, Serialize)]
struct EquivArgs {
    left: PathBuf,
    right: PathBuf,
    #[arg(long = "type")]
    ty: Option<String>,
    /// Maximum number of eliminators around the hole.
    #[arg(long, default_value_t = 2)]
    depth: usize,
    /// Size bound of generated arguments and continuations.
    #[arg(long, default_value_t = 8)]
    budget: usize,
    /// Generated candidates per eliminator.
    #[arg(long, default_value_t = 2)]
    samples: usize,
    /// Also observe contexts that end at a vector type.
    #[arg(long)]
    vector_observations: bool,
}

#[derive(Args, Debug, Serialize)]
struct FuzzArgs {
    /// Comma-separated property names.
    #[arg(long, default_value = "sr,confluence,intro,linearity,soundness")]
    props: String,
    #[arg(long, default_value_t = 100)]
    n: usize,
    /// Size bound of generated terms.
    #[arg(long, default_value_t = 40)]
    size: usize,
}

#[derive(Debug, Serialize, Clone, PartialEq)]
struct Diagnostic {
    severity: &'static str,
    code: &'static str,
    message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    file: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    line: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    col: Option<usize>,
}

impl Diagnostic {
    fn error(code: &'static str, message: impl Into<String>) -> Self {
        Diagnostic {
            severity: "error",
            code,
            message: message.into(),
            file: None,
            line: None,
            col: None,
        }
    }

    fn warning(code: &'static str, message: impl Into<String>) -> Self {
        Diagnostic {
            severity: "warning",
            ..Diagnostic::error(code, message)
        }
    }

    fn render(&self) -> String {
        let at = match (&self.file, self.line, self.col) {
            (Some(f), Some(l), Some(c)) => format!("{f}:{l}:{c}: "),
            (Some(f), _, _) => format!("{f}: "),
            _ => String::new(),
        };
        format!("{}: {at}{}", self.severity, self.message)
    }
}

/// A failed command: exit code, diagnostic and whatever partial result
/// there is.
#[derive(Debug)]
struct Failure {
    code: i32,
    diagnostic: Box<Diagnostic>,
    result: Value,
}

impl Failure {
    fn new(code: i32, d: Diagnostic) -> Self {
        Failure {
            code,
            diagnostic: Box::new(d),
            result: Value::Null,
        }
    }

    fn usage(msg: impl Into<String>) -> Self {
        Failure::new(1, Diagnostic::error("usage", msg))
    }

    fn parse(file: &Path, e: &ParseError) -> Self {
        let mut d = Diagnostic::error("parse", e.to_string());
        d.file = Some(file.display().to_string());
        d.line = Some(e.line);
        d.col = Some(e.col);
        d.message = match &e.message {
            Some(m) => m.clone(),
            None => format!("expected {}, found {}", e.expected.join(" or "), e.found),
        };
        Failure::new(1, d)
    }

    fn type_error(what: &str, e: &TypeError) -> Self {
        Failure::new(2, Diagnostic::error("type", format!("{what}: {e}")))
    }

    fn reduce(e: &ReduceError) -> Self {
        match e {
            ReduceError::FuelExhausted { last, steps } => Failure {
                code: 3,
                diagnostic: Box::new(Diagnostic::error("fuel", e.to_string())),
                result: json!({ "last": last.to_string(), "steps": steps }),
            },
            ReduceError::InvalidSite { .. } => Failure::new(4, Diagnostic::error("internal", e.to_string())),
        }
    }

    fn encode(e: &EncodeError) -> Self {
        match e {
            EncodeError::Reduce(r) => Failure::reduce(r),
            EncodeError::Scalar(_) | EncodeError::Malformed(_) => {
                Failure::new(1, Diagnostic::error("input", e.to_string()))
            }
            _ => Failure::new(2, Diagnostic::error("encode", e.to_string())),
        }
    }

    fn denot(e: &DenotError) -> Self {
        match e {
            DenotError::Unsupported(_) => Failure::new(3, Diagnostic::error("unsupported", e.to_string())),
            DenotError::Type(t) => Failure::type_error("term", t),
            DenotError::Shape(_) => Failure::new(4, Diagnostic::error("internal", e.to_string())),
        }
    }
}

/// What a successful command produced.
struct Output {
    code: i32,
    text: String,
    result: Value,
    diagnostics: Vec<Diagnostic>,
    counters: BTreeMap<&'static str, u64>,
}

impl Output {
    fn new(text: impl Into<String>, result: Value) -> Self {
        Output {
            code: 0,
            text: text.into(),
            result,
            diagnostics: Vec::new(),
            counters: BTreeMap::new(),
        }
    }
}

type CmdResult = Result<Output, Failure>;

/// Parse `argv` (including the program name) and run the command.
pub fn run<I, S>(argv: I) -> (i32, String)
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let argv: Vec<std::ffi::OsString> = argv.into_iter().map(Into::into).collect();
    let json_requested = argv.iter().any(|a| a == "--json");
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                return (0, e.to_string());
            }
            let msg = e.kind().to_string();
            let detail = e.to_string();
            if json_requested {
                let doc = json!({
                    "command": Value::Null,
                    "inputs": Value::Null,
                    "result": Value::Null,
                    "diagnostics": [Diagnostic::error("usage", first_line(&detail, &msg))],
                    "timings": {},
                });
                return (1, pretty(&doc));
            }
            return (1, detail);
        }
    };
    let start = Instant::now();
    let outcome = catch_unwind(AssertUnwindSafe(|| dispatch(&cli))).unwrap_or_else(|p| {
        let msg = p
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "panic".into());
        Err(Failure::new(4, Diagnostic::error("internal", msg)))
    });
    let elapsed = start.elapsed();
    let (code, text, result, diagnostics, counters) = match outcome {
        Ok(o) => (o.code, o.text, o.result, o.diagnostics, o.counters),
        Err(f) => (
            f.code,
            String::new(),
            f.result,
            vec![*f.diagnostic],
            BTreeMap::new(),
        ),
    };
    if cli.json {
        let mut timings = serde_json::Map::new();
        for (k, v) in counters {
            timings.insert(k.to_string(), json!(v));
        }
        if cli.wall_clock {
            timings.insert("wall_ms".into(), json!(elapsed.as_secs_f64() * 1000.0));
        }
        let doc = json!({
            "command": cli.command.name(),
            "inputs": inputs(&cli),
            "result": result,
            "diagnostics": diagnostics,
            "timings": timings,
        });
        return (code, pretty(&doc));
    }
    let mut out = text;
    for d in &diagnostics {
        if !out.is_empty() && !out.ends_with('\n') {
            out.push('\n');
        }
        out.push_str(&d.render());
    }
    if cli.wall_clock {
        out.push_str(&format!("\n({:.1} ms)", elapsed.as_secs_f64() * 1000.0));
    }
    if !out.ends_with('\n') {
        out.push('\n');
    }
    (code, out)
}

fn first_line(detail: &str, fallback: &str) -> String {
    detail
        .lines()
        .next()
        .map(|l| l.trim_start_matches("error: ").to_string())
        .unwrap_or_else(|| fallback.to_string())
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

fn inputs(cli: &Cli) -> Value {
    let mut v = serde_json::to_value(cli).expect("arguments serialize");
    if let Value::Object(m) = &mut v {
        m.remove("json");
        m.remove("wall_clock");
        // flatten the subcommand's own arguments next to the global flags
        if let Some(Value::Object(cmd)) = m.remove("command") {
            for (_, args) in cmd {
                if let Value::Object(a) = args {
                    for (k, x) in a {
                        match x {
                            Value::Object(inner) => m.extend(inner),
                            other => {
                                m.insert(k, other);
                            }
                        }
                    }
                }
            }
        }
    }
    v
}

fn dispatch(cli: &Cli) -> CmdResult {
    match &cli.command {
        Command::Check(a) => cmd_check(cli, a),
        Command::Normalize(a) => cmd_normalize(cli, a),
        Command::Matrix(MatrixCommand::Compile(a)) => cmd_compile(cli, a),
        Command::Matrix(MatrixCommand::Extract(a)) => cmd_extract(cli, a),
        Command::Eval(a) => cmd_eval(cli, a),
        Command::Equiv(a) => cmd_equiv(cli, a),
        Command::Fuzz(a) => cmd_fuzz(cli, a),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| {
        let mut d = Diagnostic::error("io", e.to_string());
        d.file = Some(path.display().to_string());
        Failure::new(1, d)
    })
}

/// A term file with its pinned type, if any.
fn read_term(path: &Path, semiring: Semiring) -> Result<(Term, Option<Type>), Failure> {
    let text = read(path)?;
    let t = parse_term(&text, semiring).map_err(|e| Failure::parse(path, &e))?;
    let pinned = pinned_type(&text).map_err(|e| Failure::parse(path, &e))?;
    Ok((t, pinned))
}

fn type_arg(text: &str) -> Result<Type, Failure> {
    parse_type(text).map_err(|e| Failure::usage(format!("bad type `{text}`: {e}")))
}

/// The flag if given, else the pinned type, else inference.
fn resolve_type(flag: Option<&String>, pinned: Option<Type>, t: &Term) -> Result<Type, Failure> {
    match (flag, pinned) {
        (Some(s), _) => type_arg(s),
        (None, Some(ty)) => Ok(ty),
        (None, None) => infer_closed(t).map_err(|e| Failure::type_error("term", &e)),
    }
}

fn cmd_check(cli: &Cli, a: &CheckArgs) -> CmdResult {
    let (t, pinned) = read_term(&a.file, cli.semiring)?;
    let ty = resolve_type(a.ty.as_ref(), pinned, &t)?;
    check_closed(&t, &ty).map_err(|e| Failure::type_error("term", &e))?;
    Ok(Output::new(
        format!("{t}\n  : {ty}"),
        json!({ "term": t.to_string(), "type": ty.to_string() }),
    ))
}

fn strategy(s: &str) -> Result<Strategy, Failure> {
    if s == "lo" {
        return Ok(Strategy::LeftmostOutermost);
    }
    s.strip_prefix("rand:")
        .and_then(|n| n.parse().ok())
        .map(Strategy::Random)
        .ok_or_else(|| Failure::usage(format!("bad strategy `{s}`; use lo or rand:SEED")))
}

fn cmd_normalize(cli: &Cli, a: &NormalizeArgs) -> CmdResult {
    let (t, _) = read_term(&a.file, cli.semiring)?;
    let opts = NormalizeOptions {
        strategy: strategy(&a.strategy)?,
        fuel: cli.fuel,
        ultra: a.ultra,
        trace: a.trace,
    };
    let n = normalize(&t, opts).map_err(|e| Failure::reduce(&e))?;
    let trace: Option<Vec<String>> = n
        .trace
        .as_ref()
        .map(|tr| tr.iter().map(|t| t.to_string()).collect());
    let text = match &trace {
        Some(lines) => lines.join("\n"),
        None => n.term.to_string(),
    };
    let mut out = Output::new(
        text,
        json!({ "normal_form": n.term.to_string(), "steps": n.steps, "trace": trace }),
    );
    out.counters.insert("steps", n.steps);
    Ok(out)
}

fn cmd_compile(cli: &Cli, a: &MatrixArgs) -> CmdResult {
    let text = read(&a.file)?;
    let m = Matrix::from_json(&text, cli.semiring).map_err(|e| Failure::encode(&e))?;
    let (dom, cod) = (type_arg(&a.domain)?, type_arg(&a.codomain)?);
    let t = matrix_to_term(&m, &dom, &cod).map_err(|e| Failure::encode(&e))?;
    let ty = Type::lolli(dom, cod);
    Ok(Output::new(
        t.to_string(),
        json!({ "term": t.to_string(), "type": ty.to_string() }),
    ))
}

fn cmd_extract(cli: &Cli, a: &MatrixArgs) -> CmdResult {
    let (t, _) = read_term(&a.file, cli.semiring)?;
    let (dom, cod) = (type_arg(&a.domain)?, type_arg(&a.codomain)?);
    check_closed(&t, &Type::lolli(dom.clone(), cod.clone()))
        .map_err(|e| Failure::type_error("term", &e))?;
    let m = term_to_matrix(&t, &dom, &cod, cli.semiring).map_err(|e| Failure::encode(&e))?;
    let result = serde_json::from_str::<Value>(&m.to_json()).expect("matrix json parses");
    Ok(Output::new(m.to_string(), result))
}

/// Parse an environment file: `x : T = TERM` binds linearly, `!x : T =
/// TERM` binds intuitionistically with `TERM : !T`. `--` starts a comment.
fn read_env(path: &Path, ev: &Evaluator) -> Result<SemEnv, Failure> {
    let text = read(path)?;
    let mut env = SemEnv::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split("--").next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let bad = |msg: String| {
            let mut d = Diagnostic::error("env", msg);
            d.file = Some(path.display().to_string());
            d.line = Some(i + 1);
            Failure::new(1, d)
        };
        let (lhs, term) = line
            .split_once('=')
            .ok_or_else(|| bad("expected `x : T = TERM`".into()))?;
        let (name, ty) = lhs
            .split_once(':')
            .ok_or_else(|| bad("expected `x : T = TERM`".into()))?;
        let name = name.trim();
        let (intuitionistic, name) = match name.strip_prefix('!') {
            Some(n) => (true, n.trim()),
            None => (false, name),
        };
        let ty = parse_type(ty).map_err(|e| bad(format!("type: {e}")))?;
        let t = parse_term(term, ev.semiring).map_err(|e| bad(format!("term: {e}")))?;
        let vty = if intuitionistic {
            Type::bang(ty.clone())
        } else {
            ty.clone()
        };
        check_closed(&t, &vty).map_err(|e| bad(format!("{name}: {e}")))?;
        let v = ev.eval_closed(&t, &vty).map_err(|e| bad(e.to_string()))?;
        env = if intuitionistic {
            env.with_intuitionistic(name, ty, v)
        } else {
            env.with_linear(name, ty, v)
        };
    }
    Ok(env)
}

fn describe(ev: &Evaluator, ty: &Type, v: &SemValue) -> (String, Value, Vec<Diagnostic>) {
    if !decidable(ty) {
        return (
            v.to_string(),
            json!({ "type": ty.to_string(), "value": v.to_string() }),
            vec![Diagnostic::warning(
                "unsupported",
                format!("no canonical form at `{ty}`; raw value shown"),
            )],
        );
    }
    match ev.canonicalize(ty, v) {
        Ok(c) => {
            let mut result = json!({ "type": ty.to_string(), "value": c.to_string() });
            let mut text = c.to_string();
            if is_vector_type(ty) {
                if let Ok(cs) = ev.coefficients(ty, v) {
                    let parts: Vec<String> = cs.iter().map(|s| s.to_string()).collect();
                    text = format!("({})", parts.join(", "));
                    result["coefficients"] = json!(parts);
                }
            }
            (text, result, vec![])
        }
        Err(e) => (
            v.to_string(),
            json!({ "type": ty.to_string(), "value": v.to_string() }),
            vec![Diagnostic::warning("unsupported", e.to_string())],
        ),
    }
}

fn cmd_eval(cli: &Cli, a: &EvalArgs) -> CmdResult {
    let (t, pinned) = read_term(&a.file, cli.semiring)?;
    let mode = if a.bang_mode == "deferred" {
        BangMode::Deferred
    } else {
        BangMode::Eager
    };
    let ev = Evaluator::new(cli.semiring).with_mode(mode);
    let env = match &a.env {
        Some(p) => read_env(p, &ev)?,
        None => SemEnv::new(),
    };
    let ctx: DualContext = env.context();
    let ty = match (&a.ty, pinned) {
        (Some(s), _) => type_arg(s)?,
        (None, Some(ty)) => ty,
        (None, None) => crate::typecheck::infer(&ctx, &t)
            .map_err(|e| Failure::type_error("term", &e))?
            .ty,
    };
    let typing = check(&ctx, &t, &ty).map_err(|e| Failure::type_error("term", &e))?;
    if let Some(x) = ctx.linear.keys().find(|x| !typing.used.contains(*x)) {
        return Err(Failure::new(
            2,
            Diagnostic::error("type", format!("linear variable `{x}` is never used")),
        ));
    }
    let v = ev.eval(&t, &env, &ty).map_err(|e| Failure::denot(&e))?;
    let (v, ty) = match a.at {
        None => (v, ty),
        Some(i) => {
            let Type::Lolli(dom, cod) = &ty else {
                return Err(Failure::usage(format!("--at needs a function type, not `{ty}`")));
            };
            let Some(b) = basis(dom, cli.semiring) else {
                return Err(Failure::usage(format!("`{dom}` has no finite basis")));
            };
            let e = b.get(i).ok_or_else(|| {
                Failure::usage(format!("basis index {i} out of range (dimension {})", b.len()))
            })?;
            let r = ev.apply(&v, e, cod).map_err(|e| Failure::denot(&e))?;
            (r, (**cod).clone())
        }
    };
    let (text, result, diagnostics) = describe(&ev, &ty, &v);
    let mut out = Output::new(text, result);
    out.diagnostics = diagnostics;
    Ok(out)
}

fn cmd_equiv(cli: &Cli, a: &EquivArgs) -> CmdResult {
    let (l, pl) = read_term(&a.left, cli.semiring)?;
    let (r, pr) = read_term(&a.right, cli.semiring)?;
    let ty = resolve_type(a.ty.as_ref(), pl.or(pr), &l)?;
    check_closed(&l, &ty).map_err(|e| Failure::type_error("left term", &e))?;
    check_closed(&r, &ty).map_err(|e| Failure::type_error("right term", &e))?;
    let opts = EquivOptions {
        depth: a.depth,
        budget: a.budget,
        fuel: cli.fuel,
        seed: cli.seed,
        semiring: cli.semiring,
        samples: a.samples,
        vector_observations: a.vector_observations,
    };
    let verdict = obs_equiv(&l, &r, &ty, &opts);
    let result = serde_json::to_value(&verdict).expect("verdicts serialize");
    let mut out = match &verdict {
        EquivVerdict::EquivalentUpToBound { depth, contexts } => {
            let mut o = Output::new(
                format!("equivalent up to depth {depth} ({contexts} contexts)"),
                result,
            );
            o.counters.insert("contexts", *contexts as u64);
            o
        }
        EquivVerdict::Distinguished {
            context,
            left,
            right,
        } => {
            let mut o = Output::new(
                format!("distinguished by {context}\n  left:  {left}\n  right: {right}"),
                result,
            );
            o.code = 2;
            o
        }
        EquivVerdict::Unknown { reason } => {
            let mut o = Output::new(format!("unknown: {reason}"), result);
            o.code = 3;
            o
        }
    };
    out.counters.insert("depth", a.depth as u64);
    Ok(out)
}

fn cmd_fuzz(cli: &Cli, a: &FuzzArgs) -> CmdResult {
    let props: Vec<Prop> = a
        .props
        .split(',')
        .map(|p| p.trim().parse::<Prop>())
        .collect::<Result<_, _>>()
        .map_err(Failure::usage)?;
    let cfg = SuiteConfig {
        max_size: a.size,
        semiring: cli.semiring,
        fuel: cli.fuel,
        ..SuiteConfig::new(a.n, cli.seed)
    };
    let reports: Vec<suites::PropReport> = props.iter().map(|p| suites::run(*p, &cfg)).collect();
    let failed: usize = reports.iter().map(|r| r.failures.len()).sum();
    let result = json!({
        "seed": cli.seed,
        "n": a.n,
        "size": a.size,
        "semiring": cli.semiring.name(),
        "reports": reports,
    });
    let mut out = Output::new(pretty(&result).trim_end().to_string(), result);
    out.counters.insert(
        "iterations",
        reports.iter().map(|r| (r.passes + r.failures.len()) as u64).sum(),
    );
    if failed > 0 {
        out.code = 2;
        out.diagnostics.push(Diagnostic::error(
            "property",
            format!("{failed} property failure(s)"),
        ));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_flags_are_usage_errors() {
        let (code, out) = run(["oclam", "check", "x.term", "--frobnicate"]);
        assert_eq!(code, 1);
        assert!(out.contains("frobnicate"), "{out}");
        let (code, out) = run(["oclam", "--json", "check", "x.term", "--frobnicate"]);
        assert_eq!(code, 1);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["diagnostics"][0]["code"], "usage");
    }

    #[test]
    fn missing_file_is_reported() {
        let (code, out) = run(["oclam", "check", "/nonexistent/file.term"]);
        assert_eq!(code, 1);
        assert!(out.contains("/nonexistent/file.term"), "{out}");
    }

    #[test]
    fn strategies_parse() {
        assert_eq!(strategy("lo").unwrap(), Strategy::LeftmostOutermost);
        assert_eq!(strategy("rand:5").unwrap(), Strategy::Random(5));
        assert!(strategy("rand:x").is_err());
    }

    #[test]
    fn help_exits_zero() {
        let (code, out) = run(["oclam", "--help"]);
        assert_eq!(code, 0);
        assert!(out.contains("normalize"));
    }
}
