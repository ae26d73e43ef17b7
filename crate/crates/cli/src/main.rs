use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use aclab::acouple::{self, YesNoUnknown};
use aclab::expr::parse_frac;
use aclab::extend::{self, Kind};
use aclab::logts;
use aclab::pcseq::{self, PCSeq};
use aclab::setprops::{self, Property};
use aclab::{suites, CoupleDescriptor, Error, GroupElem, SetDescriptor};

#[derive(Parser)]
#[command(name = "aclab", version, about = "Exact computations in the logarithmic asymptotic couple and K_log")]
struct Cli {
    /// Indented JSON.
    #[arg(long, global = true)]
    pretty: bool,
    /// Compact JSON (default).
    #[arg(long, global = true, conflicts_with = "pretty")]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Valuation of an expression.
    Val { expr: String },
    /// ψ of a group element such as "[0, 1, -1/2]".
    Psi { elem: String },
    /// Order and dominance between two expressions.
    Cmp { a: String, b: String },
    /// The n-th term of the λ-sequence.
    Lambda { n: usize },
    /// Trichotomy of a couple: trunc:N, logfull or loggap.
    Classify {
        couple: String,
        /// Also report the number of Liouville closures given λ-freeness.
        #[arg(long, value_enum)]
        lambda_free: Option<Tri>,
    },
    /// Run a property suite, or `all`.
    Suite {
        name: String,
        #[arg(long)]
        cases: Option<usize>,
        #[command(flatten)]
        seed: Seed,
    },
    /// Yardstick steps in an immediate extension scenario.
    Extend {
        #[command(subcommand)]
        cmd: ExtendCmd,
    },
    /// Query a convex set given as an s-expression.
    Set {
        descriptor: String,
        #[arg(value_enum)]
        query: Query,
        /// Element for `member`.
        #[arg(long)]
        elem: Option<String>,
    },
    /// Pseudocauchy analysis of lambda, lambda-perturbed, geometric, const:<expr> or expand:<expr>.
    PcAnalyze {
        seq: String,
        #[arg(long, default_value_t = 8)]
        len: usize,
        /// Candidate pseudolimit.
        #[arg(long)]
        limit: Option<String>,
    },
}

#[derive(Args)]
struct Seed {
    #[arg(long, env = "ACLAB_SEED", default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum ExtendCmd {
    Step {
        /// A shipped scenario name.
        #[arg(long, conflicts_with_all = ["kind", "s", "g"])]
        scenario: Option<String>,
        #[arg(long, requires = "s")]
        kind: Option<String>,
        #[arg(long)]
        s: Option<String>,
        #[arg(long)]
        g: Option<String>,
        #[arg(long, default_value_t = 5)]
        iters: usize,
    },
    /// Names of the shipped scenarios.
    List,
}

#[derive(Clone, Copy, ValueEnum)]
enum Tri {
    Yes,
    No,
    Unknown,
}

#[derive(Clone, Copy, ValueEnum)]
enum Query {
    Member,
    Jammed,
    Yardstick,
    DerivedYardstick,
    Sup,
    Simplify,
}

enum Failure {
    Usage(String),
    Core(Error),
    Suite(Value),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::DivisionByZero => "division_by_zero",
        Error::Precondition(_) => "precondition",
        Error::UnsupportedDescriptor(_) => "unsupported",
        Error::Syntax { .. } => "syntax",
        Error::Semantic(_) => "semantic",
        Error::Certificate(_) => "certificate",
        Error::SearchExhausted(_) => "search_exhausted",
    }
}

fn error_json(e: &Error) -> Value {
    let mut v = json!({"error": {"kind": error_kind(e), "message": e.to_string()}});
    if let Error::Syntax { offset, .. } = e {
        v["error"]["offset"] = json!(offset);
    }
    v
}

fn parse_elem(s: &str) -> Result<GroupElem, Failure> {
    Ok(s.parse::<GroupElem>()?)
}

fn suite_json(name: &str, cases: Option<usize>, seed: u64) -> Result<Value, Failure> {
    let t = Instant::now();
    let rep = suites::run(name, cases, seed)?;
    Ok(json!({
        "suite": rep.suite,
        "seed": seed,
        "cases": rep.cases,
        "failures": rep.failures,
        "wall_time": t.elapsed().as_secs_f64(),
    }))
}

fn run(cmd: Cmd) -> Result<Value, Failure> {
    Ok(match cmd {
        Cmd::Val { expr } => json!({"valuation": logts::valuation(&parse_frac(&expr)?).to_json()}),
        Cmd::Psi { elem } => json!({"psi": acouple::psi(&parse_elem(&elem)?).to_json()}),
        Cmd::Cmp { a, b } => {
            let (a, b) = (parse_frac(&a)?, parse_frac(&b)?);
            json!({"order": format!("{:?}", a.cmp(&b)).to_lowercase(), "dominance": logts::dominance(&a, &b)})
        }
        Cmd::Lambda { n } => json!({"expr": pcseq::lambda_term(n).to_string()}),
        Cmd::Classify { couple, lambda_free } => {
            let c: CoupleDescriptor = couple.parse()?;
            let res = acouple::classify_couple(&c)?;
            let mut out = res.to_json();
            if let Some(t) = lambda_free {
                let t = match t {
                    Tri::Yes => YesNoUnknown::Yes,
                    Tri::No => YesNoUnknown::No,
                    Tri::Unknown => YesNoUnknown::Unknown,
                };
                out["closures"] = json!(acouple::closure_count(&res, t)?);
            }
            out
        }
        Cmd::Suite { name, cases, seed } => {
            let names: Vec<&str> = if name == "all" { suites::SUITES.to_vec() } else { vec![name.as_str()] };
            let reports = names.iter().map(|n| suite_json(n, cases, seed.seed)).collect::<Result<Vec<_>, _>>()?;
            let failed = reports.iter().any(|r| r["failures"].as_array().is_some_and(|f| !f.is_empty()));
            let out = if name == "all" { Value::Array(reports) } else { reports.into_iter().next().unwrap() };
            if failed {
                return Err(Failure::Suite(out));
            }
            out
        }
        Cmd::Extend { cmd: ExtendCmd::List } => json!({"scenarios": extend::SHIPPED}),
        Cmd::Extend { cmd: ExtendCmd::Step { scenario, kind, s, g, iters } } => {
            let sc = match (scenario, s) {
                (Some(name), _) => extend::scenario(&name)?,
                (None, Some(s)) => {
                    let kind: Kind = kind.as_deref().unwrap_or("smallint").parse()?;
                    Arc::new(extend::custom(kind, &s, g.as_deref())?)
                }
                (None, None) => return Err(Failure::Usage("extend step needs --scenario or --s".into())),
            };
            json!(extend::step_chain(&sc, iters)?)
        }
        Cmd::Set { descriptor, query, elem } => {
            let d: SetDescriptor = descriptor.parse()?;
            match query {
                Query::Member => {
                    let e = elem.ok_or_else(|| Failure::Usage("member needs --elem".into()))?;
                    json!({"member": setprops::member(&d, &parse_elem(&e)?)?})
                }
                Query::Jammed => checked(&d, Property::Jammed, setprops::is_jammed(&d))?,
                Query::Yardstick => checked(&d, Property::Yardstick, setprops::has_yardstick(&d))?,
                Query::DerivedYardstick => {
                    checked(&d, Property::DerivedYardstick, setprops::has_derived_yardstick(&d)?)?
                }
                Query::Sup => json!({"sup": setprops::sup_in_divhull(&d)?}),
                Query::Simplify => json!({"descriptor": d.simplify().to_string()}),
            }
        }
        Cmd::PcAnalyze { seq, len, limit } => {
            let s = sequence(&seq)?;
            let pc = pcseq::is_pc_prefix(&s, len)?;
            let mut out = json!({"sequence": s.label(), "len": len, "pc": pc});
            if pc.is_yes() {
                out["width"] = json!(pcseq::width_prefix(&s, len)?);
            }
            if let Some(a) = limit {
                out["pseudolimit"] = json!(pcseq::pseudolimit_check(&s, &parse_frac(&a)?, len));
            }
            out
        }
    })
}

fn checked(d: &SetDescriptor, p: Property, v: setprops::PropertyVerdict) -> Result<Value, Failure> {
    setprops::check_certificate(d, p, &v)?;
    Ok(json!(v))
}

fn sequence(spec: &str) -> Result<PCSeq, Failure> {
    Ok(match spec {
        "lambda" => PCSeq::lambda(),
        "lambda-perturbed" => PCSeq::lambda_perturbed(),
        "geometric" => PCSeq::geometric(),
        _ => match spec.split_once(':') {
            Some(("const", e)) => PCSeq::constant(parse_frac(e)?),
            Some(("expand", e)) => PCSeq::truncations(parse_frac(e)?),
            _ => return Err(Failure::Usage(format!("unknown sequence `{spec}`"))),
        },
    })
}

fn emit(v: &Value, pretty: bool) {
    let text = if pretty { serde_json::to_string_pretty(v) } else { serde_json::to_string(v) };
    println!("{}", text.expect("JSON values always serialize"));
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            emit(&json!({"error": {"kind": "usage", "message": e.to_string().trim_end()}}), false);
            return ExitCode::from(2);
        }
    };
    match run(cli.cmd) {
        Ok(v) => {
            emit(&v, cli.pretty);
            ExitCode::SUCCESS
        }
        Err(Failure::Suite(v)) => {
            emit(&v, cli.pretty);
            ExitCode::from(1)
        }
        Err(Failure::Usage(m)) => {
            emit(&json!({"error": {"kind": "usage", "message": m}}), cli.pretty);
            ExitCode::from(2)
        }
        Err(Failure::Core(e)) => {
            emit(&error_json(&e), cli.pretty);
            ExitCode::from(if matches!(e, Error::Certificate(_)) { 1 } else { 2 })
        }
    }
}
