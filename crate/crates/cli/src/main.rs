//! Command-line driver: parse, normalize, translate, evaluate, enumerate,
//! and check dynamic formulas over finite traces.
//!
//! Exit codes: 0 success / property passed; 1 property failed (a
//! counterexample was found); 2 usage, parse, or unsupported-input error;
//! 3 enumeration budget exceeded. Diagnostics go to stderr; results go to
//! stdout, either human-readable or as a `{"command","status","data"}`
//! JSON envelope.

use std::io::Read;

use clap::{Parser as ClapParser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use deltrace::parser::{parse_formula, parse_theory, print_formula};
use deltrace::program_text::{print_program, rules_to_json};
use deltrace::telingo::emit_del;
use deltrace::trace_text::{parse_ht_trace, print_ht_trace, trace_to_json};
use deltrace_core::ast::{converse_normal_form, size, Alphabet};
use deltrace_core::{
    candidate_count, check_dht_equivalence, check_strong_faithfulness, del_models_range,
    dht_models_range, fl_closure, program_as_formulas, satisfies, translate,
    translate_as_constraint, trivalue, verify_normal_form, EnumError, Formula, ModelSet,
    NormalFormMode, Trace, TranslateError, DEFAULT_BUDGET,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Human,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TranslateFormat {
    /// Temporal logic program rules.
    Program,
    /// The rules expanded back into plain formulas.
    Formulas,
    /// A telingo `&del` theory atom for the input formula itself.
    Telingo,
}

#[derive(ClapParser)]
#[command(
    name = "deltrace",
    about = "Dynamic equilibrium logic on finite traces",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Human)]
    output: OutputFormat,
    /// Enumeration budget: the largest candidate space any single
    /// enumeration may visit.
    #[arg(
        long,
        global = true,
        env = "DELTRACE_BUDGET",
        default_value_t = DEFAULT_BUDGET,
        value_parser = clap::value_parser!(u64).range(1..)
    )]
    budget: u64,
    /// Worker threads for model enumeration.
    #[arg(long, global = true, default_value_t = 1,
          value_parser = clap::value_parser!(u64).range(1..=256))]
    jobs: u64,
    /// Random seed, reserved for future sampling subcommands; accepted so
    /// that identical invocations stay identical when it arrives.
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a formula and echo its canonical form.
    Parse { expr: String },
    /// Rewrite a formula into converse normal form.
    Cnf { expr: String },
    /// List the syntactic closure of a formula.
    Closure { expr: String },
    /// Translate a formula into a temporal logic program.
    Translate {
        expr: String,
        #[arg(long, value_enum, default_value_t = TranslateFormat::Program)]
        format: TranslateFormat,
        /// Translate the formula as a constraint (forbid it) instead of
        /// asserting it.
        #[arg(long)]
        as_constraint: bool,
    },
    /// Evaluate a formula on a trace at a point; prints the boolean
    /// satisfaction and the three-valued degree.
    Eval {
        expr: String,
        /// Trace file (`-` for stdin).
        #[arg(long)]
        trace: String,
        /// Evaluation point, 0-based.
        #[arg(long)]
        k: usize,
    },
    /// Enumerate the models of a theory file at one trace length.
    Models {
        /// Theory file, one formula per line (`-` for stdin).
        file: String,
        #[arg(long)]
        lambda: usize,
        /// Extra atoms for the enumeration alphabet, comma-separated; the
        /// theory's own atoms are always included.
        #[arg(long)]
        alphabet: Option<String>,
        /// Enumerate equilibrium (stable) models instead of all models.
        #[arg(long)]
        equilibrium: bool,
    },
    /// Check that a formula and its translation have the same models at
    /// every length up to a bound.
    CheckNf {
        expr: String,
        #[arg(long)]
        lambda_max: usize,
        /// Additionally enumerate the translation over the extended
        /// alphabet and compare the restricted model sets exactly.
        #[arg(long)]
        full: bool,
    },
    /// Check two formulas for satisfaction agreement at every point of
    /// every trace up to a length bound.
    CheckEquiv {
        expr1: String,
        expr2: String,
        #[arg(long)]
        lambda_max: usize,
    },
    /// Check that translating the first formula preserves equilibrium
    /// models in the context of the second.
    CheckFaithful {
        gamma: String,
        gamma_prime: String,
        #[arg(long)]
        lambda: usize,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Parse { .. } => "parse",
            Command::Cnf { .. } => "cnf",
            Command::Closure { .. } => "closure",
            Command::Translate { .. } => "translate",
            Command::Eval { .. } => "eval",
            Command::Models { .. } => "models",
            Command::CheckNf { .. } => "check-nf",
            Command::CheckEquiv { .. } => "check-equiv",
            Command::CheckFaithful { .. } => "check-faithful",
        }
    }
}

/// A finished run: what to print and how to exit.
struct Outcome {
    /// `ok` for queries, `pass`/`fail` for checks.
    status: &'static str,
    human: String,
    data: Value,
    /// Warnings for the diagnostic stream (also mirrored into JSON data by
    /// the producing command).
    warnings: Vec<String>,
}

impl Outcome {
    fn ok(human: String, data: Value) -> Outcome {
        Outcome {
            status: "ok",
            human,
            data,
            warnings: Vec::new(),
        }
    }

    fn verdict(passed: bool, human: String, data: Value) -> Outcome {
        Outcome {
            status: if passed { "pass" } else { "fail" },
            human,
            data,
            warnings: Vec::new(),
        }
    }

    fn exit_code(&self) -> i32 {
        if self.status == "fail" {
            1
        } else {
            0
        }
    }
}

/// A failed run: the message goes to stderr, the code to the shell.
struct Failure {
    message: String,
    code: i32,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Failure {
        Failure {
            message: message.into(),
            code: 2,
        }
    }
}

impl From<deltrace::parser::ParseError> for Failure {
    fn from(e: deltrace::parser::ParseError) -> Failure {
        Failure::usage(format!("{e}"))
    }
}

impl From<TranslateError> for Failure {
    fn from(e: TranslateError) -> Failure {
        Failure::usage(format!("{e}"))
    }
}

impl From<EnumError> for Failure {
    fn from(e: EnumError) -> Failure {
        let code = match e {
            EnumError::BudgetExceeded { .. } => 3,
            _ => 2,
        };
        Failure {
            message: format!("{e}"),
            code,
        }
    }
}

fn read_input(path: &str) -> Result<String, Failure> {
    if path == "-" {
        let mut text = String::new();
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| Failure::usage(format!("cannot read stdin: {e}")))?;
        Ok(text)
    } else {
        std::fs::read_to_string(path)
            .map_err(|e| Failure::usage(format!("cannot read `{path}`: {e}")))
    }
}

fn alphabet_json(alphabet: &Alphabet) -> Value {
    Value::Array(
        alphabet
            .iter()
            .map(|a| Value::String(String::from(a)))
            .collect(),
    )
}

fn model_set_human(set: &ModelSet, what: &str) -> String {
    let mut out = String::new();
    for trace in set.iter() {
        out.push_str(&print_ht_trace(trace));
        out.push_str("\n\n");
    }
    out.push_str(&format!("# {} {what}", set.len()));
    out
}

fn model_set_json(set: &ModelSet) -> Value {
    Value::Array(set.iter().map(trace_to_json).collect())
}

/// Splits `0..total` into roughly even chunks and runs the worker body on
/// each; preserves index order, which the model-set constructor then
/// canonicalizes.
fn enumerate_parallel(
    theory: &[Formula],
    lambda: usize,
    alphabet: &Alphabet,
    equilibrium: bool,
    jobs: u64,
    budget: u64,
) -> Result<ModelSet, EnumError> {
    if lambda == 0 {
        return Err(EnumError::ZeroLength);
    }
    if lambda > deltrace_core::semantics::MAX_TRACE_LEN {
        return Err(EnumError::TooLong { lambda });
    }
    let required = candidate_count(alphabet, lambda);
    if required > u128::from(budget) {
        return Err(EnumError::BudgetExceeded {
            required,
            budget,
        });
    }
    // The budget test above keeps both counts within u64.
    let cells = alphabet.len() * lambda;
    let total: u64 = if equilibrium {
        1u64 << cells.min(63)
    } else {
        required as u64
    };
    let run = |start: u64, end: u64| -> Vec<Trace> {
        if equilibrium {
            del_models_range(theory, lambda, alphabet, start, end)
        } else {
            dht_models_range(theory, lambda, alphabet, start, end)
        }
    };
    let jobs = jobs.min(total.max(1));
    let traces = if jobs <= 1 {
        run(0, total)
    } else {
        let chunk = total.div_ceil(jobs);
        std::thread::scope(|scope| {
            let workers: Vec<_> = (0..jobs)
                .map(|i| {
                    let start = i * chunk;
                    let end = total.min(start + chunk);
                    scope.spawn(move || run(start, end))
                })
                .collect();
            let mut all = Vec::new();
            for worker in workers {
                all.extend(worker.join().expect("enumeration workers do not panic"));
            }
            all
        })
    };
    Ok(ModelSet::new(lambda, alphabet.clone(), traces))
}

fn cmd_parse(expr: &str) -> Result<Outcome, Failure> {
    let formula = parse_formula(expr)?;
    let printed = print_formula(&formula);
    Ok(Outcome::ok(
        printed.clone(),
        json!({ "formula": printed, "size": size(&formula) }),
    ))
}

fn cmd_cnf(expr: &str) -> Result<Outcome, Failure> {
    let formula = converse_normal_form(&parse_formula(expr)?);
    let printed = print_formula(&formula);
    Ok(Outcome::ok(printed.clone(), json!({ "formula": printed })))
}

fn cmd_closure(expr: &str) -> Result<Outcome, Failure> {
    let formula = parse_formula(expr)?;
    let closure = fl_closure(&formula).map_err(|e| Failure::usage(format!("{e}")))?;
    let members: Vec<String> = closure.iter().map(print_formula).collect();
    Ok(Outcome::ok(
        members.join("\n"),
        json!({ "members": members, "count": members.len() }),
    ))
}

fn cmd_translate(
    expr: &str,
    format: TranslateFormat,
    as_constraint: bool,
) -> Result<Outcome, Failure> {
    let formula = parse_formula(expr)?;
    if format == TranslateFormat::Telingo {
        if as_constraint {
            return Err(Failure::usage(
                "--as-constraint has no `&del` form; it changes the program, not the formula",
            ));
        }
        let (text, warnings) =
            emit_del(&formula).map_err(|e| Failure::usage(format!("{e}")))?;
        return Ok(Outcome {
            status: "ok",
            human: text.clone(),
            data: json!({ "telingo": text, "warnings": warnings }),
            warnings,
        });
    }
    let program = if as_constraint {
        translate_as_constraint(&formula)?
    } else {
        translate(&formula)?
    };
    match format {
        TranslateFormat::Program => {
            let labels: Vec<Value> = program
                .registry
                .fresh_labels()
                .iter()
                .map(|(name, f)| json!({ "label": name, "formula": print_formula(f) }))
                .collect();
            Ok(Outcome::ok(
                print_program(&program),
                json!({
                    "rules": rules_to_json(&program.rules),
                    "alphabet": alphabet_json(&program.alphabet),
                    "extended": alphabet_json(&program.extended),
                    "labels": labels,
                }),
            ))
        }
        TranslateFormat::Formulas => {
            let formulas: Vec<String> =
                program_as_formulas(&program).iter().map(print_formula).collect();
            Ok(Outcome::ok(
                formulas.join("\n"),
                json!({ "formulas": formulas }),
            ))
        }
        TranslateFormat::Telingo => unreachable!("handled above"),
    }
}

fn cmd_eval(expr: &str, trace_path: &str, k: usize) -> Result<Outcome, Failure> {
    let formula = parse_formula(expr)?;
    let trace = parse_ht_trace(&read_input(trace_path)?)?;
    let holds = satisfies(&trace, k, &formula)
        .map_err(|e| Failure::usage(format!("{e}")))?;
    let value = trivalue(&trace, k, &formula)
        .map_err(|e| Failure::usage(format!("{e}")))?;
    Ok(Outcome::ok(
        format!("{holds} / {}", value.as_u8()),
        json!({ "holds": holds, "value": value.as_u8(), "k": k }),
    ))
}

fn cmd_models(
    file: &str,
    lambda: usize,
    alphabet: Option<&str>,
    equilibrium: bool,
    jobs: u64,
    budget: u64,
) -> Result<Outcome, Failure> {
    let theory = parse_theory(&read_input(file)?)?;
    let mut alpha = Alphabet::of_formulas(theory.iter());
    if let Some(extra) = alphabet {
        let mut names = Vec::new();
        for name in extra.split(',') {
            let name = name.trim();
            if !deltrace::parser::valid_atom(name) {
                return Err(Failure::usage(format!(
                    "`{name}` is not a valid atom name for --alphabet"
                )));
            }
            names.push(name);
        }
        alpha = alpha.union(&Alphabet::new(names));
    }
    let set = enumerate_parallel(&theory, lambda, &alpha, equilibrium, jobs, budget)?;
    let what = if equilibrium { "stable models" } else { "models" };
    Ok(Outcome::ok(
        model_set_human(&set, what),
        json!({
            "lambda": lambda,
            "alphabet": alphabet_json(&alpha),
            "equilibrium": equilibrium,
            "count": set.len(),
            "models": model_set_json(&set),
        }),
    ))
}

fn cmd_check_nf(
    expr: &str,
    lambda_max: usize,
    full: bool,
    budget: u64,
) -> Result<Outcome, Failure> {
    let formula = parse_formula(expr)?;
    let mode = if full {
        NormalFormMode::Full
    } else {
        NormalFormMode::Forced
    };
    if lambda_max == 0 {
        return Err(Failure::usage("--lambda-max must be at least 1"));
    }
    let mut lines = Vec::new();
    let mut per_lambda = Vec::new();
    let mut passed = true;
    for lambda in 1..=lambda_max {
        let report = verify_normal_form(&formula, lambda, mode, budget)?;
        passed &= report.passed();
        let failures: Vec<&Trace> = report
            .forced_failures
            .iter()
            .chain(&report.missing_from_translation)
            .chain(&report.extra_in_translation)
            .collect();
        if failures.is_empty() {
            lines.push(format!(
                "lambda {lambda}: ok ({} models checked)",
                report.models_checked
            ));
        } else {
            lines.push(format!(
                "lambda {lambda}: FAILED on {} trace(s), first:\n{}",
                failures.len(),
                print_ht_trace(failures[0])
            ));
        }
        per_lambda.push(json!({
            "lambda": lambda,
            "models_checked": report.models_checked,
            "forced_failures": report.forced_failures.iter().map(trace_to_json).collect::<Vec<_>>(),
            "missing_from_translation": report.missing_from_translation.iter().map(trace_to_json).collect::<Vec<_>>(),
            "extra_in_translation": report.extra_in_translation.iter().map(trace_to_json).collect::<Vec<_>>(),
        }));
    }
    lines.push(String::from(if passed {
        "normal form verified"
    } else {
        "normal form FAILED"
    }));
    Ok(Outcome::verdict(
        passed,
        lines.join("\n"),
        json!({ "full": full, "per_lambda": per_lambda }),
    ))
}

fn cmd_check_equiv(
    expr1: &str,
    expr2: &str,
    lambda_max: usize,
    budget: u64,
) -> Result<Outcome, Failure> {
    let phi = parse_formula(expr1)?;
    let psi = parse_formula(expr2)?;
    let report = check_dht_equivalence(&phi, &psi, lambda_max, budget)?;
    match &report.counterexample {
        None => Ok(Outcome::verdict(
            true,
            format!(
                "equivalent on all {} traces up to length {lambda_max}",
                report.traces_checked
            ),
            json!({
                "traces_checked": report.traces_checked,
                "counterexample": Value::Null,
            }),
        )),
        Some((trace, k)) => Ok(Outcome::verdict(
            false,
            format!(
                "counterexample at point k={k} of this length-{} trace:\n{}",
                trace.lambda(),
                print_ht_trace(trace)
            ),
            json!({
                "traces_checked": report.traces_checked,
                "counterexample": { "k": k, "trace": trace_to_json(trace) },
            }),
        )),
    }
}

fn cmd_check_faithful(
    gamma: &str,
    gamma_prime: &str,
    lambda: usize,
    budget: u64,
) -> Result<Outcome, Failure> {
    let gamma = parse_formula(gamma)?;
    let gamma_prime = parse_formula(gamma_prime)?;
    let report = check_strong_faithfulness(&gamma, &gamma_prime, lambda, budget)?;
    let passed = report.passed();
    let mut lines = vec![format!(
        "{} equilibrium models of the original theory at lambda {lambda}",
        report.direct.len()
    )];
    if !report.exhaustive {
        lines.push(String::from(
            "note: extended space over budget; only the subset direction was checked",
        ));
    }
    for trace in &report.missing {
        lines.push(format!("missing from translation:\n{}", print_ht_trace(trace)));
    }
    for trace in &report.extra {
        lines.push(format!("extra in translation:\n{}", print_ht_trace(trace)));
    }
    lines.push(String::from(if passed {
        "faithful"
    } else {
        "NOT faithful"
    }));
    Ok(Outcome::verdict(
        passed,
        lines.join("\n"),
        json!({
            "lambda": lambda,
            "exhaustive": report.exhaustive,
            "direct": model_set_json(&report.direct),
            "missing": report.missing.iter().map(trace_to_json).collect::<Vec<_>>(),
            "extra": report.extra.iter().map(trace_to_json).collect::<Vec<_>>(),
        }),
    ))
}

fn run(cli: &Cli) -> Result<Outcome, Failure> {
    match &cli.command {
        Command::Parse { expr } => cmd_parse(expr),
        Command::Cnf { expr } => cmd_cnf(expr),
        Command::Closure { expr } => cmd_closure(expr),
        Command::Translate {
            expr,
            format,
            as_constraint,
        } => cmd_translate(expr, *format, *as_constraint),
        Command::Eval { expr, trace, k } => cmd_eval(expr, trace, *k),
        Command::Models {
            file,
            lambda,
            alphabet,
            equilibrium,
        } => cmd_models(
            file,
            *lambda,
            alphabet.as_deref(),
            *equilibrium,
            cli.jobs,
            cli.budget,
        ),
        Command::CheckNf {
            expr,
            lambda_max,
            full,
        } => cmd_check_nf(expr, *lambda_max, *full, cli.budget),
        Command::CheckEquiv {
            expr1,
            expr2,
            lambda_max,
        } => cmd_check_equiv(expr1, expr2, *lambda_max, cli.budget),
        Command::CheckFaithful {
            gamma,
            gamma_prime,
            lambda,
        } => cmd_check_faithful(gamma, gamma_prime, *lambda, cli.budget),
    }
}

/// Writes a line to stdout. A broken pipe is not an error — the consumer
/// has simply stopped reading — so the exit code still reports the verdict.
fn write_stdout(text: &str) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    let written = out
        .write_all(text.as_bytes())
        .and_then(|()| out.write_all(b"\n"))
        .and_then(|()| out.flush());
    if let Err(e) = written {
        if e.kind() != std::io::ErrorKind::BrokenPipe {
            eprintln!("error: cannot write to stdout: {e}");
            std::process::exit(2);
        }
    }
}

fn main() {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(outcome) => {
            for warning in &outcome.warnings {
                eprintln!("warning: {warning}");
            }
            match cli.output {
                OutputFormat::Human => {
                    if !outcome.human.is_empty() {
                        write_stdout(&outcome.human);
                    }
                }
                OutputFormat::Json => {
                    let envelope = json!({
                        "command": cli.command.name(),
                        "status": outcome.status,
                        "data": outcome.data,
                    });
                    write_stdout(&envelope.to_string());
                }
            }
            std::process::exit(outcome.exit_code());
        }
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            std::process::exit(failure.code);
        }
    }
}
