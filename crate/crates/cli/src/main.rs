//! `lifted`: run IMP programs, trace and solve DSL fixpoints, and check
//! functionals on finite function spaces.
//!
//! Exit codes: 0 value or all checks pass, 1 fault or bad input, 2 no result
//! within the fuel, 3 a check failed.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::{json, Value as Json};

use lifted_core::cpo_checker::SpaceBounds;
use lifted_core::functional::TableFunctional;
use lifted_core::imp::{denot_run, parse, State};
use lifted_core::kleene::{fix, run_unbounded, trace};
use lifted_core::{
    check_continuous, check_monotone, check_tarski, iterates_are_chain, to_table_functional,
    CheckError, CheckReport, EvalError, FiniteFunSpace, FunExpr, Functional, GraphFunctional,
    GraphPair, ImpError, Partial,
};

const EXIT_BOTTOM: u8 = 2;
const EXIT_CHECK_FAILED: u8 = 3;

/// Spaces accepted by `check`. Larger than the library default; the chain
/// walk is `|A|! * |B|^|A|` paths.
const CLI_BOUNDS: SpaceBounds = SpaceBounds {
    max_domain: 4,
    max_codomain: 4,
};

#[derive(Parser)]
#[command(
    name = "lifted",
    version,
    about = "Least fixpoints over lifted flat domains"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an IMP program with its loops approximated by `--fuel` iterations.
    Run(RunArgs),
    /// Print the chain F^n(⊥)(x) for n = 0..=fuel.
    Trace(TraceArgs),
    /// Least fixpoint value and minimal witness, plus the guarded recursive run.
    Fix(FixArgs),
    /// Check monotonicity, continuity and the Kleene limit on a finite space.
    Check(CheckArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Json,
}

#[derive(Args)]
struct RunArgs {
    /// Program file.
    #[arg(required_unless_present = "source")]
    program: Option<PathBuf>,
    /// Program text, instead of a file.
    #[arg(short = 'e', long = "eval", conflicts_with = "program")]
    source: Option<String>,
    /// Initial state as a JSON object of integers.
    #[arg(long, default_value = "{}")]
    state: String,
    #[arg(long, default_value_t = 10_000)]
    fuel: usize,
    #[arg(long, value_enum, default_value = "human")]
    format: Format,
}

#[derive(Args)]
struct ExprSource {
    /// File holding a functional body as JSON.
    #[arg(required_unless_present = "expr")]
    file: Option<PathBuf>,
    /// Functional body as inline JSON, e.g. '["rec",["-",["input"],["lit",1]]]'.
    #[arg(short = 'e', long, conflicts_with = "file")]
    expr: Option<String>,
}

#[derive(Args)]
struct TraceArgs {
    #[command(flatten)]
    source: ExprSource,
    #[arg(long, allow_hyphen_values = true)]
    input: i64,
    #[arg(long, default_value_t = 10_000)]
    fuel: usize,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args)]
struct FixArgs {
    #[command(flatten)]
    source: ExprSource,
    #[arg(long, allow_hyphen_values = true)]
    input: i64,
    #[arg(long, default_value_t = 10_000)]
    fuel: usize,
    /// Recursion depth limit for the unbounded run.
    #[arg(long, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(1..))]
    guard: u64,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args)]
struct CheckArgs {
    /// Functional given by its graph: {"domain", "codomain", "graph": [[in, out], ...]}.
    #[arg(long, conflicts_with_all = ["file", "expr", "domain", "clip"])]
    graph: Option<PathBuf>,
    /// File holding a functional body as JSON.
    file: Option<PathBuf>,
    /// Functional body as inline JSON.
    #[arg(short = 'e', long, conflicts_with = "file")]
    expr: Option<String>,
    /// Table domain, e.g. 0,1,2.
    #[arg(
        long,
        value_delimiter = ',',
        allow_hyphen_values = true,
        requires = "clip"
    )]
    domain: Option<Vec<i64>>,
    /// Inclusive integer range kept by the table functional, e.g. 0..2.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_range)]
    clip: Option<(i64, i64)>,
    /// Codomain of the space. Defaults to every integer in the clip.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    codomain: Option<Vec<i64>>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

fn parse_range(s: &str) -> Result<(i64, i64), String> {
    let (lo, hi) = s
        .split_once("..=")
        .or_else(|| s.split_once(".."))
        .ok_or_else(|| format!("expected lo..hi, got {s:?}"))?;
    let lo: i64 = lo
        .trim()
        .parse()
        .map_err(|e| format!("bad lower bound {lo:?}: {e}"))?;
    let hi: i64 = hi
        .trim()
        .parse()
        .map_err(|e| format!("bad upper bound {hi:?}: {e}"))?;
    if lo > hi {
        return Err(format!("empty range {lo}..{hi}"));
    }
    Ok((lo, hi))
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Imp(#[from] ImpError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Check(#[from] CheckError),
    #[error("{0}")]
    Input(String),
}

/// What a command produced: the document for stdout and the exit code.
struct Report {
    human: String,
    json: Json,
    code: u8,
}

fn read(path: &PathBuf) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.clone(),
        source,
    })
}

fn load_expr(file: Option<&PathBuf>, inline: Option<&str>) -> Result<FunExpr, CliError> {
    let text = match (file, inline) {
        (_, Some(text)) => text.to_owned(),
        (Some(path), None) => read(path)?,
        (None, None) => return Err(CliError::Input("no functional given".into())),
    };
    Ok(FunExpr::parse_json(&text)?)
}

fn partial_json(p: &Partial<i64>) -> Json {
    p.value().map_or(Json::Null, |v| json!(v))
}

fn cmd_run(args: &RunArgs) -> Result<Report, CliError> {
    let src = match (&args.source, &args.program) {
        (Some(text), _) => text.clone(),
        (None, Some(path)) => read(path)?,
        (None, None) => return Err(CliError::Input("no program given".into())),
    };
    let program = parse(&src)?;
    let state = State::from_json(&args.state)?;
    Ok(match denot_run(&program, state, args.fuel)? {
        Partial::Value(s) => Report {
            human: s.to_json(),
            json: json!({ "status": "value", "fuel": args.fuel, "state": s }),
            code: 0,
        },
        Partial::Bottom => Report {
            human: format!("no result within fuel {}", args.fuel),
            json: json!({ "status": "bottom", "fuel": args.fuel, "state": null }),
            code: EXIT_BOTTOM,
        },
    })
}

fn cmd_trace(args: &TraceArgs) -> Result<Report, CliError> {
    let e = load_expr(args.source.file.as_ref(), args.source.expr.as_deref())?;
    let t = trace(&e, args.fuel, args.input)?;
    let mut human = String::new();
    for (n, s) in t.samples.iter().enumerate() {
        writeln!(human, "F^{n}(⊥)({}) = {s}", t.input).expect("writing to a string");
    }
    match t.stabilized_at {
        Some(n) => write!(human, "stabilized at {n}"),
        None => write!(human, "no value within fuel {}", args.fuel),
    }
    .expect("writing to a string");
    Ok(Report {
        human,
        json: serde_json::to_value(&t).expect("trace serializes"),
        code: 0,
    })
}

fn cmd_fix(args: &FixArgs) -> Result<Report, CliError> {
    let e = load_expr(args.source.file.as_ref(), args.source.expr.as_deref())?;
    let outcome = fix(&e, args.fuel, args.input)?;
    let guard = usize::try_from(args.guard).unwrap_or(usize::MAX);
    let unbounded = run_unbounded(&e, args.input, guard);
    if let Err(err @ EvalError::Overflow { .. }) = &unbounded {
        return Err(CliError::Eval(err.clone()));
    }
    let (unbounded_json, unbounded_human) = match &unbounded {
        Ok(v) => (
            json!({ "result": partial_json(v) }),
            format!("unbounded run = {v}"),
        ),
        Err(err) => (
            json!({ "error": err.to_string() }),
            format!("unbounded run: {err}"),
        ),
    };
    let human = match (&outcome.result, outcome.witness) {
        (Partial::Value(v), Some(n)) => format!("fix = {v} (witness {n})\n{unbounded_human}"),
        _ => format!("no result within fuel {}\n{unbounded_human}", args.fuel),
    };
    Ok(Report {
        human,
        json: json!({
            "input": args.input,
            "fuel": args.fuel,
            "result": partial_json(&outcome.result),
            "witness": outcome.witness,
            "unbounded": unbounded_json,
        }),
        code: if outcome.result.is_value() {
            0
        } else {
            EXIT_BOTTOM
        },
    })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphFile {
    domain: Vec<i64>,
    codomain: Vec<i64>,
    graph: Vec<GraphPair<i64, i64>>,
}

type NamedReport = (&'static str, CheckReport<i64, i64>);

fn run_checks<F>(f: &F, space: &FiniteFunSpace<i64, i64>) -> Result<Vec<NamedReport>, CliError>
where
    F: Functional<i64, i64> + ?Sized,
{
    let n = space.len();
    Ok(vec![
        ("monotone", check_monotone(f, space)?),
        ("continuous", check_continuous(f, space)?),
        ("iterates_chain", iterates_are_chain(f, space, n)?),
        ("tarski", check_tarski(f, space, n)?),
    ])
}

fn cmd_check(args: &CheckArgs) -> Result<Report, CliError> {
    let (space, reports) = if let Some(path) = &args.graph {
        let g: GraphFile = serde_json::from_str(&read(path)?)
            .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        let space = FiniteFunSpace::with_bounds(g.domain, g.codomain, CLI_BOUNDS)?;
        let f = GraphFunctional::from_pairs(space.clone(), &g.graph)?;
        let reports = run_checks(&f, &space)?;
        (space, reports)
    } else {
        let e = load_expr(args.file.as_ref(), args.expr.as_deref())?;
        let (Some(domain), Some((lo, hi))) = (args.domain.clone(), args.clip) else {
            return Err(CliError::Input(
                "a functional body needs --domain and --clip".into(),
            ));
        };
        let codomain = match &args.codomain {
            Some(c) => c.clone(),
            None if hi - lo < CLI_BOUNDS.max_codomain as i64 => (lo..=hi).collect(),
            None => {
                return Err(CliError::Input(format!(
                    "clip {lo}..{hi} is too wide; pass --codomain"
                )))
            }
        };
        let space = FiniteFunSpace::with_bounds(domain.clone(), codomain, CLI_BOUNDS)?;
        let f: TableFunctional = to_table_functional(e, domain, move |v| (lo..=hi).contains(&v))?;
        let reports = run_checks(&f, &space)?;
        (space, reports)
    };

    let passed = reports.iter().all(|(_, r)| r.passed());
    let mut doc = serde_json::Map::new();
    let mut human = format!("space: {} tables\n", space.len());
    for (name, r) in &reports {
        doc.insert(
            (*name).into(),
            serde_json::to_value(r).expect("report serializes"),
        );
        let verdict = if r.passed() { "pass" } else { "fail" };
        writeln!(human, "{name}: {verdict}").expect("writing to a string");
        if let Some(cx) = &r.counterexample {
            writeln!(
                human,
                "  {}",
                serde_json::to_string(cx).expect("counterexample serializes")
            )
            .expect("writing to a string");
        }
    }
    doc.insert(
        "verdict".into(),
        json!(if passed { "pass" } else { "fail" }),
    );
    doc.insert(
        "space".into(),
        json!({ "domain": space.domain(), "codomain": space.codomain(), "size": space.len() }),
    );
    Ok(Report {
        human: human.trim_end().to_owned(),
        json: Json::Object(doc),
        code: if passed { 0 } else { EXIT_CHECK_FAILED },
    })
}

fn main() -> ExitCode {
    // Usage errors are bad input (1); clap's own code 2 means Bottom here.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return if err.use_stderr() {
                ExitCode::FAILURE
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let (format, result) = match &cli.command {
        Command::Run(a) => (a.format, cmd_run(a)),
        Command::Trace(a) => (a.format, cmd_trace(a)),
        Command::Fix(a) => (a.format, cmd_fix(a)),
        Command::Check(a) => (a.format, cmd_check(a)),
    };
    match result {
        Ok(report) => {
            match format {
                Format::Human => println!("{}", report.human),
                Format::Json => println!("{}", report.json),
            }
            ExitCode::from(report.code)
        }
        Err(err) => {
            eprintln!("error: {err}");
            if format == Format::Json {
                println!("{}", json!({ "status": "error", "error": err.to_string() }));
            }
            ExitCode::FAILURE
        }
    }
}
