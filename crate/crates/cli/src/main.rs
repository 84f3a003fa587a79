use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde_json::{json, Value};

use fincomp::definability::{definable_elements, is_definable, SearchOutcome};
use fincomp::enumerator::{
    enumerate_normal_terms, enumerate_same_length, EnumerationBudget, DEFAULT_MAX_COUNT,
};
use fincomp::matching::{
    close_problem, close_solutions, match_bruteforce, match_semantic, MatchVerdict, MatchingProblem,
};
use fincomp::random::Sampler;
use fincomp::rewrite::{beta_eta_eq, eta_long, normal_eta_long, normalize, term_length};
use fincomp::semantics::{interpret, Assignment, Element, Model, DEFAULT_CAP};
use fincomp::statman::{build_finite_model_with_cap, separator_set};
use fincomp::syntax::{parse_context, parse_term, parse_type, print_context};
use fincomp::{infer_type, Context, Error, Name, Term, Type};

#[derive(Parser)]
#[command(
    name = "fincomp",
    version,
    about = "Beta-eta normalization, finite models and matching for the simply typed lambda calculus"
)]
struct Cli {
    /// Free variables, e.g. "x:i, f:i->i"
    #[arg(long, global = true, default_value = "")]
    context: String,
    /// Length bound for enumerations and searches
    #[arg(long, global = true, default_value_t = 8)]
    bound: usize,
    /// Largest function space that may be tabulated
    #[arg(long, global = true, default_value_t = DEFAULT_CAP)]
    cap: u64,
    /// Largest number of terms an enumeration may produce
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_COUNT)]
    max_count: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Seed for the random sampler
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    /// JSON with function elements expanded into value tables
    JsonTable,
}

#[derive(Subcommand)]
enum Command {
    /// Beta-eta normal form
    Normalize {
        #[arg(long)]
        term: String,
    },
    /// Type of a term
    Typecheck {
        #[arg(long)]
        term: String,
    },
    /// Eta-long normal form
    Etalong {
        #[arg(long)]
        term: String,
        /// Defaults to the inferred type
        #[arg(long = "type")]
        ty: Option<String>,
    },
    /// Length of the eta-long normal form
    Length {
        #[arg(long)]
        term: String,
    },
    /// Beta-eta equality
    Eq {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// Eta-long normal terms of a type over the context
    Enumerate {
        #[arg(long = "type")]
        ty: String,
        /// Only closed terms of exactly this length
        #[arg(long)]
        exact_length: Option<usize>,
    },
    /// Separator terms for a closed term
    Separators {
        #[arg(long)]
        t: String,
    },
    /// Finite standard models and per-term models
    #[command(subcommand)]
    Model(ModelCommand),
    /// Search for a closed term denoting an element
    Definable {
        #[arg(long = "type")]
        ty: String,
        /// Size of the base set
        #[arg(long)]
        size: u32,
        /// Element code
        #[arg(long, conflicts_with = "table")]
        code: Option<String>,
        /// Value table as a JSON array of codomain codes
        #[arg(long)]
        table: Option<String>,
        /// List every definable element instead
        #[arg(long, conflicts_with_all = ["code", "table"])]
        all: bool,
    },
    /// Higher-order matching
    #[command(subcommand)]
    Match(MatchCommand),
    /// Random well-typed terms
    Sample {
        #[arg(long, default_value_t = 10)]
        count: usize,
    },
}

#[derive(Subcommand)]
enum ModelCommand {
    /// Finite model deciding equality with a closed term
    Build {
        #[arg(long)]
        t: String,
    },
    /// Interpret a term in a finite standard model
    Eval {
        #[arg(long)]
        term: String,
        #[arg(long)]
        size: u32,
        /// Element codes for the context, e.g. "x=1, f=2"
        #[arg(long, default_value = "")]
        assign: String,
    },
    /// Number of elements of a type
    Size {
        #[arg(long = "type")]
        ty: String,
        #[arg(long)]
        size: u32,
    },
    /// Decide beta-eta equality of two closed terms in the model of the first
    Decide {
        #[arg(long)]
        t: String,
        #[arg(long)]
        u: String,
    },
}

#[derive(Subcommand)]
enum MatchCommand {
    /// Solve a matching problem `a t1 .. tn = b`
    Solve {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long, value_enum, default_value_t = Method::Semantic)]
        method: Method,
    },
    /// Equivalent problem with the context abstracted away
    CloseProblem {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// Problem whose closed solutions match the open ones of a closed problem
    CloseSolutions {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Normalize { .. } => "normalize",
            Command::Typecheck { .. } => "typecheck",
            Command::Etalong { .. } => "etalong",
            Command::Length { .. } => "length",
            Command::Eq { .. } => "eq",
            Command::Enumerate { .. } => "enumerate",
            Command::Separators { .. } => "separators",
            Command::Model(ModelCommand::Build { .. }) => "model build",
            Command::Model(ModelCommand::Eval { .. }) => "model eval",
            Command::Model(ModelCommand::Size { .. }) => "model size",
            Command::Model(ModelCommand::Decide { .. }) => "model decide",
            Command::Definable { .. } => "definable",
            Command::Match(MatchCommand::Solve { .. }) => "match solve",
            Command::Match(MatchCommand::CloseProblem { .. }) => "match close-problem",
            Command::Match(MatchCommand::CloseSolutions { .. }) => "match close-solutions",
            Command::Sample { .. } => "sample",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Semantic,
    Bruteforce,
}

/// What a command produced, rendered as text or JSON.
struct Report {
    command: &'static str,
    verdict: Option<&'static str>,
    holds: bool,
    witness: Value,
    base_size: Option<u32>,
    result: Value,
    text: String,
}

impl Report {
    fn new(command: &'static str, text: impl Into<String>, result: Value) -> Self {
        Report {
            command,
            verdict: None,
            holds: true,
            witness: Value::Null,
            base_size: None,
            result,
            text: text.into(),
        }
    }

    fn verdict(mut self, verdict: &'static str, holds: bool) -> Self {
        self.verdict = Some(verdict);
        self.holds = holds;
        self
    }

    fn witness(mut self, witness: Value) -> Self {
        self.witness = witness;
        self
    }

    fn base_size(mut self, n: u32) -> Self {
        self.base_size = Some(n);
        self
    }
}

struct Env {
    ctx: Context,
    budget: EnumerationBudget,
    cap: u64,
    tables: bool,
}

impl Env {
    fn term(&self, src: &str) -> Result<Term, Error> {
        let t = parse_term(src)?;
        infer_type(&self.ctx, &t)?;
        Ok(t)
    }

    fn closed(&self, src: &str) -> Result<(Term, Type), Error> {
        let t = parse_term(src)?;
        if let Some(n) = t.free_vars().into_iter().next() {
            return Err(Error::NotClosed(n));
        }
        let ty = infer_type(&Context::new(), &t)?;
        Ok((t, ty))
    }

    fn model(&self, size: u32) -> Result<Model, Error> {
        Model::with_cap(size, self.cap)
    }

    fn element(&self, model: &Model, e: &Element) -> Result<Value, Error> {
        let mut v = serde_json::to_value(e).expect("elements serialize");
        if self.tables && !e.ty().is_base() {
            let table: Vec<Value> = e
                .table(model)?
                .iter()
                .map(|x| self.element(model, x))
                .collect::<Result<_, _>>()?;
            v["table"] = Value::Array(table);
        }
        Ok(v)
    }
}

fn terms_json(ts: &[Term]) -> Value {
    Value::Array(ts.iter().map(|t| json!(t.to_string())).collect())
}

fn run(cli: &Cli) -> Result<Report, Error> {
    let env = Env {
        ctx: parse_context(&cli.context)?,
        budget: EnumerationBudget::new(cli.bound, cli.max_count)?,
        cap: cli.cap,
        tables: cli.format == Format::JsonTable,
    };
    match &cli.command {
        Command::Normalize { term } => {
            let nf = normalize(&env.ctx, &env.term(term)?)?;
            let s = nf.term().to_string();
            Ok(Report::new("normalize", s.clone(), json!(s)))
        }
        Command::Typecheck { term } => {
            let ty = infer_type(&env.ctx, &env.term(term)?)?.to_string();
            Ok(Report::new("typecheck", ty.clone(), json!(ty)))
        }
        Command::Etalong { term, ty } => {
            let t = env.term(term)?;
            let long = match ty {
                Some(ty) => {
                    let nf = normalize(&env.ctx, &t)?;
                    eta_long(&env.ctx, nf.term(), &parse_type(ty)?)?
                }
                None => normal_eta_long(&env.ctx, &t)?,
            };
            let s = long.term().to_string();
            Ok(Report::new(
                "etalong",
                s.clone(),
                json!({"term": s, "type": long.ty()}),
            ))
        }
        Command::Length { term } => {
            let n = term_length(&normal_eta_long(&env.ctx, &env.term(term)?)?);
            Ok(Report::new("length", n.to_string(), json!(n)))
        }
        Command::Eq { a, b } => {
            let equal = beta_eta_eq(&env.ctx, &env.term(a)?, &env.term(b)?)?;
            let v = if equal { "equal" } else { "distinct" };
            Ok(Report::new("eq", v, json!(equal)).verdict(v, equal))
        }
        Command::Enumerate { ty, exact_length } => {
            let ty = parse_type(ty)?;
            let terms = match exact_length {
                Some(len) => enumerate_same_length(&ty, *len, &env.budget)?,
                None => enumerate_normal_terms(&env.ctx, &ty, &env.budget)?,
            };
            let rows: Vec<(usize, String)> = terms
                .iter()
                .map(|t| (term_length(t), t.term().to_string()))
                .collect();
            let text = rows
                .iter()
                .map(|(l, s)| format!("{l}\t{s}"))
                .collect::<Vec<_>>()
                .join("\n");
            let result = rows
                .iter()
                .map(|(l, s)| json!({"length": l, "term": s}))
                .collect();
            Ok(Report::new("enumerate", text, Value::Array(result)))
        }
        Command::Separators { t } => {
            let (t, ty) = env.closed(t)?;
            let ws = separator_set(&t, &ty, &env.budget)?;
            let mut text = format!("context: {}", print_context(ws.context()));
            for w in ws.separators() {
                text.push_str(&format!("\n{w}"));
            }
            Ok(Report::new(
                "separators",
                text,
                serde_json::to_value(&ws).expect("serializable"),
            ))
        }
        Command::Model(cmd) => run_model(&env, cmd),
        Command::Definable {
            ty,
            size,
            code,
            table,
            all,
        } => {
            let ty = parse_type(ty)?;
            let model = env.model(*size)?;
            if *all {
                let found = definable_elements(&model, &ty, &env.budget)?;
                let mut text = Vec::new();
                let mut result = Vec::new();
                for (e, t) in &found {
                    text.push(format!("{}\t{t}", e.code()));
                    result.push(json!({"element": env.element(&model, e)?, "witness": t}));
                }
                return Ok(
                    Report::new("definable", text.join("\n"), Value::Array(result))
                        .base_size(*size),
                );
            }
            let element = match (code, table) {
                (Some(c), _) => {
                    let code: BigUint = c
                        .trim()
                        .parse()
                        .map_err(|_| Error::InvalidElement(format!("`{c}` is not a code")))?;
                    Element::new(&model, ty.clone(), code)?
                }
                (None, Some(tab)) => {
                    let codes: Vec<u64> = serde_json::from_str(tab)
                        .map_err(|e| Error::InvalidElement(format!("bad table: {e}")))?;
                    let cod = ty
                        .split()
                        .ok_or_else(|| Error::InvalidElement("a base type has no table".into()))?
                        .1
                        .clone();
                    let entries = codes
                        .into_iter()
                        .map(|c| Element::new(&model, cod.clone(), BigUint::from(c)))
                        .collect::<Result<Vec<_>, _>>()?;
                    Element::from_table(&model, &ty, &entries)?
                }
                (None, None) => {
                    return Err(Error::InvalidElement(
                        "give --code, --table or --all".into(),
                    ))
                }
            };
            let outcome = is_definable(&model, &ty, &element, &env.budget)?;
            let result = serde_json::to_value(&outcome).expect("serializable");
            let report = match outcome {
                SearchOutcome::Definable { witness } => {
                    Report::new("definable", format!("definable\t{witness}"), result)
                        .verdict("definable", true)
                        .witness(json!(witness))
                }
                SearchOutcome::Unknown { exhausted_length } => Report::new(
                    "definable",
                    format!("unknown\tno witness up to length {exhausted_length}"),
                    result,
                )
                .verdict("unknown", false),
            };
            Ok(report.base_size(*size))
        }
        Command::Match(cmd) => run_match(&env, cmd),
        Command::Sample { count } => {
            let mut sampler = Sampler::new(cli.seed);
            let mut text = Vec::new();
            let mut result = Vec::new();
            for _ in 0..*count {
                let (ctx, t, ty) = sampler.sample_typed();
                text.push(format!("{} |- {t} : {ty}", print_context(&ctx)));
                result.push(json!({"context": ctx, "term": t, "type": ty}));
            }
            Ok(Report::new("sample", text.join("\n"), Value::Array(result)))
        }
    }
}

fn parse_assignment(src: &str, ctx: &Context, model: &Model) -> Result<Assignment, Error> {
    let mut nu = Assignment::new();
    for item in src.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (name, code) = item
            .split_once('=')
            .ok_or_else(|| Error::InvalidElement(format!("expected `name=code`, got `{item}`")))?;
        let name = Name::new(name.trim());
        let ty = ctx
            .get(&name)
            .ok_or_else(|| Error::InvalidElement(format!("`{name}` is not in the context")))?;
        let code: BigUint = code
            .trim()
            .parse()
            .map_err(|_| Error::InvalidElement(format!("`{code}` is not a code")))?;
        nu.insert(name, Element::new(model, ty.clone(), code)?);
    }
    nu.covers(ctx)?;
    Ok(nu)
}

fn run_model(env: &Env, cmd: &ModelCommand) -> Result<Report, Error> {
    match cmd {
        ModelCommand::Build { t } => {
            let (t, ty) = env.closed(t)?;
            let fm = build_finite_model_with_cap(&t, &ty, &env.budget, env.cap)?;
            let base = fm.base();
            let n = fm.model().base_size();
            let mut text = format!("base_size: {n}");
            for (i, a) in base.allowed().iter().enumerate() {
                text.push_str(&format!("\n{i}\t{a}"));
            }
            match base.bottom() {
                Some(b) => text.push_str(&format!("\n{}\tbottom, e.g. {b}", base.bottom_index())),
                None => text.push_str(&format!("\n{}\tbottom (empty)", base.bottom_index())),
            }
            let mut assignment = serde_json::Map::new();
            for (x, e) in fm.assignment().iter() {
                assignment.insert(x.to_string(), env.element(fm.model(), e)?);
            }
            let result = json!({
                "base": base,
                "separators": fm.separators(),
                "assignment": assignment,
            });
            Ok(Report::new("model build", text, result).base_size(n))
        }
        ModelCommand::Eval { term, size, assign } => {
            let model = env.model(*size)?;
            let t = env.term(term)?;
            let nu = parse_assignment(assign, &env.ctx, &model)?;
            let e = interpret(&model, &env.ctx, &nu, &t)?;
            Ok(Report::new("model eval", e.to_string(), env.element(&model, &e)?).base_size(*size))
        }
        ModelCommand::Size { ty, size } => {
            let n = env.model(*size)?.space_size_big(&parse_type(ty)?)?;
            let result = match u64::try_from(&n) {
                Ok(small) => json!(small),
                Err(_) => json!(n.to_string()),
            };
            Ok(Report::new("model size", n.to_string(), result).base_size(*size))
        }
        ModelCommand::Decide { t, u } => {
            let (t, ty) = env.closed(t)?;
            let (u, uty) = env.closed(u)?;
            if uty != ty {
                return Err(Error::TypeMismatch {
                    expected: ty,
                    found: uty,
                });
            }
            let fm = build_finite_model_with_cap(&t, &ty, &env.budget, env.cap)?;
            let equal = fm.decide_eq(&u)?;
            let n = fm.model().base_size();
            let v = if equal { "equal" } else { "distinct" };
            Ok(
                Report::new("model decide", format!("{v}\nbase_size: {n}"), json!(equal))
                    .verdict(v, equal)
                    .base_size(n),
            )
        }
    }
}

fn run_match(env: &Env, cmd: &MatchCommand) -> Result<Report, Error> {
    let problem =
        |a: &str, b: &str| MatchingProblem::new(parse_term(a)?, parse_term(b)?, env.ctx.clone());
    match cmd {
        MatchCommand::Solve { a, b, method } => {
            let p = problem(a, b)?;
            let verdict = match method {
                Method::Semantic => match_semantic(&p, &env.budget)?,
                Method::Bruteforce => match_bruteforce(&p, &env.budget)?,
            };
            let result = serde_json::to_value(&verdict).expect("serializable");
            Ok(match verdict {
                MatchVerdict::Solved { solution } => {
                    let text = std::iter::once("solved".to_string())
                        .chain(solution.iter().map(|t| t.to_string()))
                        .collect::<Vec<_>>()
                        .join("\n");
                    Report::new("match solve", text, result)
                        .verdict("solved", true)
                        .witness(terms_json(&solution))
                }
                MatchVerdict::NoSolutionWithin { bound, exhaustive } => {
                    let text = if exhaustive {
                        "unsolvable".to_string()
                    } else {
                        format!("no solution up to length {bound}")
                    };
                    Report::new("match solve", text, result)
                        .verdict(if exhaustive { "unsolvable" } else { "unknown" }, false)
                }
            })
        }
        MatchCommand::CloseProblem { a, b } => {
            let closed = close_problem(&problem(a, b)?)?;
            let q = closed.problem();
            let text = format!("a: {}\nb: {}", q.a(), q.b());
            Ok(Report::new(
                "match close-problem",
                text,
                json!({"a": q.a(), "b": q.b()}),
            ))
        }
        MatchCommand::CloseSolutions { a, b } => {
            let closed = close_solutions(&problem(a, b)?)?;
            let q = closed.problem();
            let text = format!("a: {}\nb: {}", q.a(), q.b());
            Ok(Report::new(
                "match close-solutions",
                text,
                json!({"a": q.a(), "b": q.b()}),
            ))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json_mode = cli.format != Format::Text;
    match run(&cli) {
        Ok(report) => {
            if json_mode {
                let out = json!({
                    "command": report.command,
                    "verdict": report.verdict,
                    "witness": report.witness,
                    "model": report.base_size.map(|n| json!({"base_size": n})),
                    "result": report.result,
                    "error": null,
                });
                println!("{out}");
            } else {
                println!("{}", report.text);
            }
            if report.holds {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            if json_mode {
                let out = json!({
                    "command": cli.command.name(),
                    "verdict": null,
                    "witness": null,
                    "model": null,
                    "result": null,
                    "error": {"code": e.code(), "message": e.to_string()},
                });
                println!("{out}");
            } else {
                eprintln!("error[{}]: {e}", e.code());
            }
            ExitCode::from(2)
        }
    }
}
