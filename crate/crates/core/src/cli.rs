//! The `ls2` command line.
//!
//! Exit codes: 0 success, 1 type error, 2 step limit, 3 property failure,
//! 4 parse or input error.

use std::fs;
use std::io::{self, Read, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use thiserror::Error;

use crate::encode::{
    apply_matrix, is_v_type, iterate, mat_pow, mat_vec, matrix_to_term, vec_to_term, DenseMat, DenseVec, EncodeError,
    VShape,
};
use crate::metatheory::{self, linearity_of, Report, Suite, SuiteConfig, SweepError};
use crate::reduce::{equiv, normalize, normalize_random, Mode, Normal, ReduceError};
use crate::semiring::Semiring;
use crate::syntax::{Prop, Term};
use crate::text::{parse_ctx, parse_file, parse_matrix, parse_prop, parse_term, parse_vector, ParseError, SourceSpan};
use crate::typing::{infer, TypeError, TypingCtx};

const MAX_STEPS: usize = 100_000;
const SUITE_MAX_STEPS: usize = 10_000;

#[derive(Debug, Parser)]
#[command(name = "ls2", version, about = "Type-check, normalize and test proof terms of linear logic with sums and scalars")]
pub struct Cli {
    /// Scalar semiring: rat, nat, gauss or unit.
    #[arg(long, global = true, env = "LS2_SEMIRING", default_value = "rat", value_parser = parse_semiring)]
    pub semiring: Semiring,
    /// Reduction step limit (default 100000, or 10000 for property suites).
    #[arg(long, global = true)]
    pub max_steps: Option<usize>,
    /// Print one JSON object per report instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

fn parse_semiring(s: &str) -> Result<Semiring, String> {
    s.parse().map_err(|e| format!("{e}"))
}

#[derive(Debug, Args)]
pub struct Input {
    /// A `.ls2` file, `-` for standard input, or term text with `-e`.
    pub input: String,
    /// Read INPUT as the text of a term instead of a path.
    #[arg(short = 'e', long = "expr")]
    pub expr: bool,
}

#[derive(Debug, Args)]
pub struct Context {
    /// Linear hypotheses, `x:A, y:B`.
    #[arg(long, default_value = "")]
    pub ctx: String,
    /// Non-linear hypotheses, `z:C`.
    #[arg(long, default_value = "")]
    pub nonlinear: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Standard,
    Ultra,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Infer the type of every definition.
    Check {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        context: Context,
    },
    /// Type-check, then print the normal form of `main` (or the last definition).
    Normalize {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        context: Context,
        /// Print each step as `<n> <rule> <position>` before the result.
        #[arg(long)]
        trace: bool,
        /// `ultra` adds the erasing rules and picks redexes at random.
        #[arg(long, value_enum, default_value = "standard")]
        mode: ModeArg,
        /// Seed for the random strategy of ultra mode.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Decide whether two closed terms have the same normal form.
    Equiv {
        left: String,
        right: String,
        /// Read both arguments as term text instead of paths.
        #[arg(short = 'e', long = "expr")]
        expr: bool,
    },
    /// Print the term of a matrix `[[a, b], [c, d]]` or a vector `[a, b]`.
    Encode {
        literal: String,
        /// Vector type of the input space, such as `1 & (1 & 1)`.
        #[arg(long)]
        domain: Option<String>,
        /// Vector type of the output space.
        #[arg(long)]
        codomain: Option<String>,
    },
    /// Apply a compiled matrix to a vector by normalization.
    Apply {
        matrix: String,
        vector: String,
        /// Apply the matrix this many times through the iterator.
        #[arg(long)]
        pow: Option<u32>,
        #[arg(long)]
        domain: Option<String>,
        #[arg(long)]
        codomain: Option<String>,
    },
    /// Check the linearity equations on random arguments of a closed
    /// `A -o B`, or on generated instances when no input is given.
    Linearity {
        input: Option<String>,
        #[arg(short = 'e', long = "expr")]
        expr: bool,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run randomized property suites.
    Metatheory {
        /// sr, confluence, sn, intro, semimodule, linearity, measure or all.
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Check { .. } => "check",
            Command::Normalize { .. } => "normalize",
            Command::Equiv { .. } => "equiv",
            Command::Encode { .. } => "encode",
            Command::Apply { .. } => "apply",
            Command::Linearity { .. } => "linearity",
            Command::Metatheory { .. } => "metatheory",
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Input(String),
    #[error("{message}")]
    Type { kind: String, message: String },
    #[error("{0}")]
    StepLimit(String),
    #[error("{0}")]
    Property(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Type { .. } => 1,
            CliError::StepLimit(_) => 2,
            CliError::Property(_) => 3,
            CliError::Parse(_) | CliError::Input(_) => 4,
        }
    }

    fn kind(&self) -> String {
        match self {
            CliError::Parse(_) => "ParseError".into(),
            CliError::Input(_) => "InputError".into(),
            CliError::Type { kind, .. } => kind.clone(),
            CliError::StepLimit(_) => "StepLimitExceeded".into(),
            CliError::Property(_) => "PropertyFailure".into(),
        }
    }
}

/// The variant name of an error, from its `Debug` form.
fn variant<E: std::fmt::Debug>(e: &E) -> String {
    let text = format!("{e:?}");
    text.split(|c: char| !c.is_alphanumeric()).next().unwrap_or_default().to_string()
}

fn type_error(e: TypeError, place: &str) -> CliError {
    CliError::Type {
        kind: variant(&e),
        message: format!("{place}{e}"),
    }
}

impl From<ReduceError> for CliError {
    fn from(e: ReduceError) -> Self {
        CliError::StepLimit(e.to_string())
    }
}

impl From<EncodeError> for CliError {
    fn from(e: EncodeError) -> Self {
        match e {
            EncodeError::IllTyped(e) => type_error(e, ""),
            EncodeError::Reduce(e) => e.into(),
            other => CliError::Input(other.to_string()),
        }
    }
}

fn parse_error(label: &str, e: ParseError) -> CliError {
    CliError::Parse(format!("{label}:{e}"))
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct JsonFailure {
    pub kind: String,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub property: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub size: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub term: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct JsonProperty {
    pub name: String,
    pub checked: usize,
    pub ok: bool,
}

/// One report. Serialized as is with `--json`; `text` is the plain output.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Output {
    pub command: &'static str,
    pub ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(rename = "type", skip_serializing_if = "Option::is_none")]
    pub ty: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub uses: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub normal_form: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub equivalent: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub term: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vector: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub properties: Option<Vec<JsonProperty>>,
    pub failures: Vec<JsonFailure>,
    #[serde(skip)]
    pub text: String,
}

impl Output {
    fn new(command: &'static str, text: String) -> Self {
        Output {
            command,
            ok: true,
            text,
            ..Output::default()
        }
    }
}

/// Settings shared by all commands.
struct Env {
    semiring: Semiring,
    max_steps: Option<usize>,
}

impl Env {
    fn steps(&self) -> usize {
        self.max_steps.unwrap_or(MAX_STEPS)
    }
}

/// A term to work on, with where it came from.
struct Named {
    name: String,
    term: Term,
    /// `file:line:col: in `name`: `, or empty for inline terms.
    place: String,
}

fn read_source(path: &str) -> Result<String, CliError> {
    if path == "-" {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| CliError::Input(format!("<stdin>: {e}")))?;
        return Ok(s);
    }
    fs::read_to_string(path).map_err(|e| CliError::Input(format!("{path}: {e}")))
}

/// Every term item of the input; inline text is a single term named `main`.
fn load(env: &Env, input: &str, expr: bool) -> Result<Vec<Named>, CliError> {
    if expr {
        let term = parse_term(input, env.semiring).map_err(|e| parse_error("<expr>", e))?;
        return Ok(vec![Named {
            name: "main".into(),
            term,
            place: String::new(),
        }]);
    }
    let src = read_source(input)?;
    let program = parse_file(&src, env.semiring).map_err(|e| parse_error(input, e))?;
    let items: Vec<Named> = program
        .terms()
        .map(|(name, term, span): (_, _, SourceSpan)| Named {
            name: name.clone(),
            term: term.clone(),
            place: format!("{input}:{span}: in `{name}`: "),
        })
        .collect();
    if items.is_empty() {
        return Err(CliError::Input(format!("{input}: no term definitions")));
    }
    Ok(items)
}

/// `main` if present, otherwise the last definition.
fn load_main(env: &Env, input: &str, expr: bool) -> Result<Named, CliError> {
    let mut items = load(env, input, expr)?;
    let i = items.iter().position(|n| n.name == "main").unwrap_or(items.len() - 1);
    Ok(items.swap_remove(i))
}

fn context(c: &Context) -> Result<TypingCtx, CliError> {
    let parse = |s: &str, what: &str| {
        if s.trim().is_empty() {
            Ok(Vec::new())
        } else {
            parse_ctx(s).map_err(|e| parse_error(what, e))
        }
    };
    let mut ctx = TypingCtx::linear(parse(&c.ctx, "--ctx")?);
    for (x, a) in parse(&c.nonlinear, "--nonlinear")? {
        ctx = ctx.with_nonlinear(x, a);
    }
    Ok(ctx)
}

fn shape(arg: &Option<String>, what: &str, default: VShape) -> Result<VShape, CliError> {
    let Some(src) = arg else {
        return Ok(default);
    };
    let a = parse_prop(src).map_err(|e| parse_error(what, e))?;
    is_v_type(&a).ok_or_else(|| CliError::Input(format!("{what}: `{a}` is not a vector type")))
}

fn matrix(env: &Env, src: &str, domain: &Option<String>, codomain: &Option<String>) -> Result<DenseMat, CliError> {
    let rows = parse_matrix(src, env.semiring).map_err(|e| parse_error("<matrix>", e))?;
    let (n, m) = (rows.len(), rows.first().map_or(0, Vec::len));
    let dom = shape(domain, "--domain", VShape::right_comb(m.max(1)))?;
    let cod = shape(codomain, "--codomain", VShape::right_comb(n.max(1)))?;
    Ok(DenseMat::with_shapes(rows, dom, cod)?)
}

fn check_cmd(env: &Env, input: &Input, c: &Context, out: &mut Vec<Output>) -> Result<(), CliError> {
    let ctx = context(c)?;
    let items = load(env, &input.input, input.expr)?;
    for item in items {
        let report = infer(&ctx, &item.term).map_err(|e| type_error(e, &item.place))?;
        let uses: Vec<String> = report.usage.consumed.iter().cloned().collect();
        let mut text = if input.expr {
            report.prop.to_string()
        } else {
            format!("{} : {}", item.name, report.prop)
        };
        if !uses.is_empty() {
            text.push_str(&format!("\n  uses {}", uses.join(", ")));
        }
        out.push(Output {
            name: Some(item.name),
            ty: Some(report.prop.to_string()),
            uses: Some(uses),
            ..Output::new("check", text)
        });
    }
    Ok(())
}

fn normalize_cmd(
    env: &Env,
    input: &Input,
    c: &Context,
    trace: bool,
    mode: ModeArg,
    seed: u64,
    out: &mut Vec<Output>,
) -> Result<(), CliError> {
    let ctx = context(c)?;
    let item = load_main(env, &input.input, input.expr)?;
    let ty = infer(&ctx, &item.term).map_err(|e| type_error(e, &item.place))?.prop;
    let Normal { term, trace: steps } = match mode {
        ModeArg::Standard => normalize(&item.term, env.steps())?,
        ModeArg::Ultra => normalize_random(&item.term, seed, env.steps(), Mode::Ultra)?,
    };
    let lines: Vec<String> = steps.to_string().lines().map(str::to_string).collect();
    let mut text = String::new();
    if trace {
        for l in &lines {
            text.push_str(l);
            text.push('\n');
        }
    }
    text.push_str(&term.to_string());
    out.push(Output {
        name: Some(item.name),
        ty: Some(ty.to_string()),
        normal_form: Some(term.to_string()),
        trace: trace.then_some(lines),
        ..Output::new("normalize", text)
    });
    Ok(())
}

fn equiv_cmd(env: &Env, left: &str, right: &str, expr: bool, out: &mut Vec<Output>) -> Result<(), CliError> {
    let typed = |src: &str| -> Result<(Term, Prop), CliError> {
        let item = load_main(env, src, expr)?;
        let ty = infer(&TypingCtx::empty(), &item.term)
            .map_err(|e| type_error(e, &item.place))?
            .prop;
        Ok((item.term, ty))
    };
    let (t, a) = typed(left)?;
    let (u, b) = typed(right)?;
    let same = a == b && equiv(&t, &u, env.steps())?;
    out.push(Output {
        equivalent: Some(same),
        ty: (a == b).then(|| a.to_string()),
        ..Output::new("equiv", same.to_string())
    });
    Ok(())
}

fn encode_cmd(
    env: &Env,
    literal: &str,
    domain: &Option<String>,
    codomain: &Option<String>,
    out: &mut Vec<Output>,
) -> Result<(), CliError> {
    let term = if literal.trim_start().starts_with("[[") {
        matrix_to_term(&matrix(env, literal, domain, codomain)?)
    } else {
        let entries = parse_vector(literal, env.semiring).map_err(|e| parse_error("<vector>", e))?;
        let s = shape(domain, "--domain", VShape::right_comb(entries.len().max(1)))?;
        vec_to_term(&DenseVec::new(entries, s)?)
    };
    let ty = crate::typing::type_of_closed(&term).map_err(|e| type_error(e, ""))?;
    out.push(Output {
        ty: Some(ty.to_string()),
        term: Some(term.to_string()),
        ..Output::new("encode", term.to_string())
    });
    Ok(())
}

fn apply_cmd(
    env: &Env,
    m: &str,
    v: &str,
    pow: Option<u32>,
    domain: &Option<String>,
    codomain: &Option<String>,
    out: &mut Vec<Output>,
) -> Result<(), CliError> {
    let m = matrix(env, m, domain, codomain)?;
    let entries = parse_vector(v, env.semiring).map_err(|e| parse_error("<vector>", e))?;
    if entries.len() != m.cols() {
        return Err(EncodeError::DimMismatch {
            expected: m.cols(),
            found: entries.len(),
        }
        .into());
    }
    let v = DenseVec::new(entries, m.domain().clone())?;
    let (result, oracle) = match pow {
        None => (apply_matrix(&m, &v, env.steps())?, mat_vec(&m, &v)?),
        Some(n) => (iterate(&m, n, &v, env.steps())?, mat_vec(&mat_pow(&m, n)?, &v)?),
    };
    if result != oracle {
        return Err(CliError::Property(format!(
            "normalization gives {result} but the dense product is {oracle}"
        )));
    }
    let shown = crate::text::print_vector(result.entries());
    out.push(Output {
        vector: Some(shown.clone()),
        ..Output::new("apply", shown)
    });
    Ok(())
}

fn report_output(command: &'static str, report: &Report) -> Output {
    let failures = report
        .failures()
        .map(|f| JsonFailure {
            kind: "PropertyFailure".into(),
            message: f.detail.clone(),
            property: Some(f.property.to_string()),
            seed: Some(f.seed),
            size: Some(f.size),
            term: Some(f.term.clone()),
        })
        .collect();
    let properties = report
        .properties
        .iter()
        .map(|p| JsonProperty {
            name: p.property.to_string(),
            checked: p.checked,
            ok: p.ok(),
        })
        .collect();
    Output {
        ok: report.ok(),
        name: Some(report.name.clone()),
        properties: Some(properties),
        failures,
        ..Output::new(command, report.to_string().trim_end().to_string())
    }
}

fn suite_config(env: &Env, samples: usize, seed: u64) -> SuiteConfig {
    SuiteConfig::new(env.semiring)
        .samples(samples)
        .seed(seed)
        .max_steps(env.max_steps.unwrap_or(SUITE_MAX_STEPS))
}

fn linearity_cmd(
    env: &Env,
    input: &Option<String>,
    expr: bool,
    samples: usize,
    seed: u64,
    out: &mut Vec<Output>,
) -> Result<(), CliError> {
    let cfg = suite_config(env, samples, seed);
    let report = match input {
        None => metatheory::run(Suite::Linearity, &cfg),
        Some(src) => {
            let item = load_main(env, src, expr)?;
            linearity_of(&item.term, &cfg).map_err(|e| match e {
                SweepError::IllTyped(e) => type_error(e, &item.place),
                other => CliError::Type {
                    kind: variant(&other),
                    message: format!("{}{other}", item.place),
                },
            })?
        }
    };
    out.push(report_output("linearity", &report));
    Ok(())
}

fn metatheory_cmd(env: &Env, suite: &str, samples: usize, seed: u64, out: &mut Vec<Output>) -> Result<(), CliError> {
    let suites = if suite == "all" {
        Suite::ALL.to_vec()
    } else {
        vec![suite.parse::<Suite>().map_err(|e| CliError::Input(e.to_string()))?]
    };
    let cfg = suite_config(env, samples, seed);
    for s in suites {
        out.push(report_output("metatheory", &metatheory::run(s, &cfg)));
    }
    Ok(())
}

fn dispatch(cli: &Cli, out: &mut Vec<Output>) -> Result<(), CliError> {
    let env = Env {
        semiring: cli.semiring,
        max_steps: cli.max_steps,
    };
    match &cli.command {
        Command::Check { input, context } => check_cmd(&env, input, context, out),
        Command::Normalize {
            input,
            context,
            trace,
            mode,
            seed,
        } => normalize_cmd(&env, input, context, *trace, *mode, *seed, out),
        Command::Equiv { left, right, expr } => equiv_cmd(&env, left, right, *expr, out),
        Command::Encode {
            literal,
            domain,
            codomain,
        } => encode_cmd(&env, literal, domain, codomain, out),
        Command::Apply {
            matrix,
            vector,
            pow,
            domain,
            codomain,
        } => apply_cmd(&env, matrix, vector, *pow, domain, codomain, out),
        Command::Linearity {
            input,
            expr,
            samples,
            seed,
        } => linearity_cmd(&env, input, *expr, *samples, *seed, out),
        Command::Metatheory { suite, samples, seed } => metatheory_cmd(&env, suite, *samples, *seed, out),
    }
}

/// Runs a parsed command line, writing reports to `stdout` and errors to
/// `stderr`. Returns the exit code.
pub fn run(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> io::Result<u8> {
    let mut outputs = Vec::new();
    let result = dispatch(cli, &mut outputs);
    let mut code = if outputs.iter().all(|o| o.ok) { 0 } else { 3 };
    if let Err(e) = &result {
        code = e.code();
        outputs.push(Output {
            ok: false,
            failures: vec![JsonFailure {
                kind: e.kind(),
                message: e.to_string(),
                ..JsonFailure::default()
            }],
            ..Output::new(cli.command.name(), String::new())
        });
    }
    for o in &outputs {
        if cli.json {
            writeln!(stdout, "{}", serde_json::to_string(o).expect("reports serialize"))?;
        } else if !o.text.is_empty() {
            writeln!(stdout, "{}", o.text)?;
        }
    }
    if let (Err(e), false) = (&result, cli.json) {
        writeln!(stderr, "error: {e}")?;
    }
    Ok(code)
}

/// Entry point of the `ls2` binary.
pub fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 4 } else { 0 });
        }
    };
    let code = run(&cli, &mut io::stdout().lock(), &mut io::stderr().lock()).unwrap_or(4);
    ExitCode::from(code)
}
