use std::collections::BTreeSet;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use haarlie::mathieu::{mathieu_report_with, origin_in_hull, power_integral_sequence};
use haarlie::numeric::{monte_carlo_expr, quadrature_expr};
use haarlie::rational::WireRational;
use haarlie::verify::{run_suite, SUITES};
use haarlie::{Error, Expr, GroupModel, GroupSpec, ReducedWord};

const GRAMMAR: &str = "\
group:      GROUP  := FACTOR ('x' FACTOR)*
            FACTOR := 'SU(' NAT ')' | 'T^' NAT | TYPE NAT   (TYPE in A..G, e.g. G2, E8)
expression: expr   := term (('+' | '-') term)*
            term   := unary ('*' unary)*
            unary  := '-' unary | factor
            factor := atom ('^' NAT)?
            atom   := RATIONAL | 'i' | 'a' NAT '[' NAT ',' NAT ']' | 'c' NAT '[' NAT ',' NAT ']'
                    | 'u' '[' NAT ']' ('^-1')? | '(' expr ')'
spectrum:   '[' '(' INT (',' INT)* ')' (',' '(' ... ')')* ']'";

#[derive(Parser)]
#[command(name = "haarlie", version, about = "Exact Haar integrals on compact Lie groups")]
struct Cli {
    /// Write the JSON result to this file instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GroupArgs {
    /// Group, e.g. "SU(3)" or "SU(2)xSU(2)xT^1".
    #[arg(long)]
    group: String,
    /// Reduced word for one simple factor, e.g. 2,1,2. Repeat once per factor.
    #[arg(long = "word", value_name = "LETTERS")]
    words: Vec<String>,
}

#[derive(Args)]
struct ExprArgs {
    #[command(flatten)]
    group: GroupArgs,
    /// Polynomial in entries a<f>[i,j], conjugates c<f>[i,j] and torus u[k].
    #[arg(long)]
    expr: String,
}

#[derive(Subcommand)]
enum Command {
    /// Variable layout, weight exponents and constant of the measure.
    Measure(GroupArgs),
    /// Exact Haar integral of an expression.
    Integrate(ExprArgs),
    /// The reduced Laurent polynomial of an expression.
    Reduce(ExprArgs),
    /// Circle-exponent spectrum of the reduced expression.
    Spectrum(ExprArgs),
    /// Origin-in-convex-hull certificate.
    Hull {
        /// Explicit point set, e.g. "[(1,0),(-1,0)]".
        #[arg(long, conflicts_with_all = ["group", "expr"])]
        spectrum: Option<String>,
        #[arg(long, requires = "expr")]
        group: Option<String>,
        #[arg(long, requires = "group")]
        expr: Option<String>,
        #[arg(long = "word", value_name = "LETTERS")]
        words: Vec<String>,
    },
    /// Power integrals, hull certificate and vanishing threshold for f and g.
    Mathieu {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long)]
        f: String,
        #[arg(long, default_value = "1")]
        g: String,
        #[arg(long, default_value_t = 20)]
        n_max: u32,
    },
    /// Exact integrals of f^n for n = 1..n-max.
    PowerSeq {
        #[command(flatten)]
        expr: ExprArgs,
        #[arg(long, default_value_t = 10)]
        n_max: u32,
    },
    /// Monte Carlo estimate through the unitary chart.
    Mc {
        #[command(flatten)]
        expr: ExprArgs,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Tensor-product quadrature through the unitary chart.
    Quad {
        #[command(flatten)]
        expr: ExprArgs,
        /// Polynomial degree budget; defaults to the expression degree.
        #[arg(long)]
        degree: Option<u32>,
    },
    /// Run built-in verification suites.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
    },
}

enum Failure {
    Usage(String),
    Verification(Value),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<Value, Failure>;

fn parse_words(raw: &[String]) -> Result<Option<Vec<ReducedWord>>, Failure> {
    if raw.is_empty() {
        return Ok(None);
    }
    raw.iter()
        .map(|w| {
            w.split(',')
                .map(|t| t.trim().parse::<usize>())
                .collect::<Result<Vec<_>, _>>()
                .map(ReducedWord::new)
                .map_err(|_| Failure::Usage(format!("bad word {w:?}: expected comma-separated letters like 1,2,1")))
        })
        .collect::<Result<Vec<_>, _>>()
        .map(Some)
}

fn model_from(group: &str, words: &[String]) -> Result<GroupModel, Failure> {
    let spec: GroupSpec = group.parse().map_err(|e| Failure::Usage(format!("group {group:?}: {e}")))?;
    let words = parse_words(words)?;
    Ok(GroupModel::new(&spec, words.as_deref())?)
}

fn parse_expr(text: &str) -> Result<Expr, Failure> {
    text.parse().map_err(|e| Failure::Usage(format!("expression {text:?}: {e}")))
}

fn envelope(command: &str, mut body: Value) -> Value {
    let obj = body.as_object_mut().expect("object body");
    obj.insert("schema".into(), json!(format!("haarlie.{command}.v1")));
    body
}

fn parse_spectrum(text: &str) -> Result<BTreeSet<Vec<i64>>, Failure> {
    let bad = |msg: &str| Failure::Usage(format!("spectrum {text:?}: {msg}"));
    let inner = text
        .trim()
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| bad("expected [ ... ]"))?;
    let mut out = BTreeSet::new();
    let mut rest = inner.trim();
    while !rest.is_empty() {
        let body = rest.strip_prefix('(').ok_or_else(|| bad("expected '('"))?;
        let close = body.find(')').ok_or_else(|| bad("missing ')'"))?;
        let point = body[..close]
            .split(',')
            .map(|t| t.trim().parse::<i64>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| bad("coordinates must be integers"))?;
        out.insert(point);
        rest = body[close + 1..].trim_start();
        if let Some(r) = rest.strip_prefix(',') {
            rest = r.trim_start();
            if rest.is_empty() {
                return Err(bad("trailing ','"));
            }
        } else if !rest.is_empty() {
            return Err(bad("expected ',' between points"));
        }
    }
    if out.is_empty() {
        return Err(bad("at least one point is required"));
    }
    Ok(out)
}

fn run(cmd: Command) -> Outcome {
    match cmd {
        Command::Measure(g) => {
            let model = model_from(&g.group, &g.words)?;
            let m = model.measure();
            let (xn, cn) = m.variable_names();
            let factors: Vec<Value> = m
                .factors
                .iter()
                .map(|l| {
                    json!({
                        "label": l.factor.to_string(),
                        "word": l.word,
                        "betas": l.betas,
                        "exponents": l.exponents,
                    })
                })
                .collect();
            let mut body = json!({
                "group": m.group.to_string(),
                "N": m.n_x,
                "M": m.n_circle,
                "exponents": m.exponents,
                "weight_powers": m.weight_powers(),
                "constant": WireRational(m.constant.clone()),
                "words": m.factors.iter().map(|l| &l.word).collect::<Vec<_>>(),
                "factors": factors,
                "variables": {"x": xn, "circle": cn},
            });
            if let [only] = m.factors.as_slice() {
                body["word"] = json!(only.word);
                body["betas"] = json!(only.betas);
            }
            Ok(envelope("measure", body))
        }
        Command::Integrate(a) => {
            let model = model_from(&a.group.group, &a.group.words)?;
            let e = parse_expr(&a.expr)?;
            let v = model.integrate(&e)?;
            Ok(envelope(
                "integrate",
                json!({"group": model.spec().to_string(), "expr": e.to_string(), "re": WireRational(v.re), "im": WireRational(v.im)}),
            ))
        }
        Command::Reduce(a) => {
            let model = model_from(&a.group.group, &a.group.words)?;
            let e = parse_expr(&a.expr)?;
            let p = model.reduce(&e)?;
            let (xn, cn) = model.measure().variable_names();
            Ok(envelope(
                "reduce",
                json!({
                    "group": model.spec().to_string(),
                    "expr": e.to_string(),
                    "variables": {"x": xn, "circle": cn},
                    "text": p.to_text(&xn, &cn),
                    "poly": p,
                }),
            ))
        }
        Command::Spectrum(a) => {
            let model = model_from(&a.group.group, &a.group.words)?;
            let e = parse_expr(&a.expr)?;
            let sp = model.reduce(&e)?.spectrum();
            let (_, cn) = model.measure().variable_names();
            Ok(envelope(
                "spectrum",
                json!({"group": model.spec().to_string(), "expr": e.to_string(), "circle_variables": cn, "spectrum": sp}),
            ))
        }
        Command::Hull {
            spectrum,
            group,
            expr,
            words,
        } => {
            let points = match (spectrum, group, expr) {
                (Some(s), _, _) => parse_spectrum(&s)?,
                (None, Some(g), Some(e)) => model_from(&g, &words)?.reduce(&parse_expr(&e)?)?.spectrum(),
                _ => return Err(Failure::Usage("hull needs --spectrum, or --group with --expr".into())),
            };
            let cert = origin_in_hull(&points)?;
            let verified = cert.verify();
            let mut body = serde_json::to_value(&cert).expect("serializable");
            body["verified"] = json!(verified);
            Ok(envelope("hull", body))
        }
        Command::Mathieu { group, f, g, n_max } => {
            let model = model_from(&group.group, &group.words)?;
            let r = mathieu_report_with(&model, &parse_expr(&f)?, &parse_expr(&g)?, n_max)?;
            Ok(envelope("mathieu", serde_json::to_value(&r).expect("serializable")))
        }
        Command::PowerSeq { expr, n_max } => {
            let model = model_from(&expr.group.group, &expr.group.words)?;
            let e = parse_expr(&expr.expr)?;
            let p = model.reduce(&e)?;
            let values = power_integral_sequence(&p, model.measure(), n_max)?;
            let items: Vec<Value> = values
                .iter()
                .enumerate()
                .map(|(k, v)| json!({"n": k + 1, "value": v}))
                .collect();
            Ok(envelope(
                "power-seq",
                json!({"group": model.spec().to_string(), "expr": e.to_string(), "values": items}),
            ))
        }
        Command::Mc { expr, samples, seed } => {
            let model = model_from(&expr.group.group, &expr.group.words)?;
            let e = parse_expr(&expr.expr)?;
            let r = monte_carlo_expr(&model, &e, samples, seed)?;
            let mut body = serde_json::to_value(&r).expect("serializable");
            body["group"] = json!(model.spec().to_string());
            body["expr"] = json!(e.to_string());
            Ok(envelope("mc", body))
        }
        Command::Quad { expr, degree } => {
            let model = model_from(&expr.group.group, &expr.group.words)?;
            let e = parse_expr(&expr.expr)?;
            let r = quadrature_expr(&model, &e, degree)?;
            for w in &r.warnings {
                eprintln!("warning: {w}");
            }
            let mut body = serde_json::to_value(&r).expect("serializable");
            body["group"] = json!(model.spec().to_string());
            body["expr"] = json!(e.to_string());
            Ok(envelope("quad", body))
        }
        Command::Verify { suite } => {
            let results = run_suite(&suite)
                .ok_or_else(|| Failure::Usage(format!("unknown suite {suite:?}; choose one of {}", SUITES.join(", "))))?;
            for r in &results {
                eprintln!("[{}] {:>2} {}: {}", if r.passed { "PASS" } else { "FAIL" }, r.id, r.name, r.detail);
            }
            let passed = results.iter().all(|r| r.passed);
            let body = envelope("verify", json!({"suite": suite, "passed": passed, "results": results}));
            if passed {
                Ok(body)
            } else {
                Err(Failure::Verification(body))
            }
        }
    }
}

fn emit(value: &Value, output: Option<&PathBuf>) -> Result<(), String> {
    let text = serde_json::to_string_pretty(value).expect("json");
    match output {
        Some(path) => std::fs::write(path, text + "\n").map_err(|e| format!("writing {}: {e}", path.display())),
        None => match writeln!(std::io::stdout().lock(), "{text}") {
            // a closed pipe (e.g. `| head`) is not an error
            Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(format!("writing output: {e}")),
            _ => Ok(()),
        },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let output = cli.output.clone();
    match run(cli.command) {
        Ok(v) => match emit(&v, output.as_ref()) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(2)
            }
        },
        Err(Failure::Verification(v)) => {
            let _ = emit(&v, output.as_ref());
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}\n\n{GRAMMAR}");
            ExitCode::from(2)
        }
    }
}
