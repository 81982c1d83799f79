//! End-to-end tests against the compiled binary: exit codes, human output,
//! the JSON envelope, and stdin/file plumbing.

use std::io::Write;
use std::process::{Command, Output, Stdio};

fn deltrace(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_deltrace"))
        .args(args)
        .output()
        .expect("binary must run")
}

fn deltrace_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_deltrace"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary must spawn");
    child
        .stdin
        .take()
        .unwrap()
        .write_all(input.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).unwrap()
}

fn stderr(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).unwrap()
}

#[test]
fn translate_prints_the_program_rules() {
    let out = deltrace(&["translate", "p until q"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("global: l0 -> q | l1"), "{text}");
    assert!(text.contains("initial: -> l0"), "{text}");
    assert_eq!(text.lines().count(), 12, "{text}");
}

#[test]
fn translate_as_constraint_flips_the_fact() {
    let out = deltrace(&["translate", "--as-constraint", "p until q"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(text.lines().next(), Some("initial: l0 ->"), "{text}");
}

#[test]
fn telingo_surface_is_pinned() {
    let out = deltrace(&["translate", "--format", "telingo", "p until q"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim_end(), "&del{ * (?p ;; &true) . >? q }");

    let out = deltrace(&["translate", "--format", "telingo", "alw p"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim_end(), "&del{ * &true . >* p }");

    // Past-directed paths have no surface there.
    let out = deltrace(&["translate", "--format", "telingo", "once p"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("unsupported"), "{}", stderr(&out));

    // Constraint form changes the program, not the formula, so it cannot
    // be rendered as a formula.
    let out = deltrace(&[
        "translate",
        "--format",
        "telingo",
        "--as-constraint",
        "p until q",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn eval_reports_truth_and_degree() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("trace.txt");
    std::fs::write(&path, "p\np\nq\n").unwrap();
    let path = path.to_str().unwrap();

    let out = deltrace(&["eval", "--trace", path, "--k", "0", "p until q"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim_end(), "true / 2");

    // A false verdict is still a successful evaluation.
    let out = deltrace(&["eval", "--trace", path, "--k", "0", "false"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim_end(), "false / 0");

    // Out-of-range points are usage errors.
    let out = deltrace(&["eval", "--trace", path, "--k", "9", "p"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn eval_accepts_the_json_trace_form() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("trace.json");
    std::fs::write(&path, r#"{"states": [{"h": ["p"], "t": ["p", "q"]}]}"#).unwrap();
    let out = deltrace(&["eval", "--trace", path.to_str().unwrap(), "--k", "0", "q"]);
    assert!(out.status.success());
    // q is settled there but not here: degree 1.
    assert_eq!(stdout(&out).trim_end(), "false / 1");
}

#[test]
fn models_reads_the_theory_from_stdin() {
    let out = deltrace_stdin(&["models", "-", "--lambda", "1"], "p until q\n");
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.ends_with("# 3 models\n"), "{text}");
    assert!(text.contains("H: q | T: p q"), "{text}");
}

#[test]
fn models_equilibrium_finds_the_stable_trace() {
    let theory = "[(!h)*] (!h -> s)\n";
    let out = deltrace_stdin(
        &["models", "-", "--lambda", "3", "--equilibrium"],
        theory,
    );
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.ends_with("# 1 stable models\n"), "{text}");
    assert!(text.contains("s\ns\ns"), "{text}");
}

#[test]
fn models_jobs_agree_with_serial() {
    let theory = "p until q\nwnext q\n";
    let serial = deltrace_stdin(&["models", "-", "--lambda", "2"], theory);
    let parallel = deltrace_stdin(&["models", "-", "--lambda", "2", "--jobs", "4"], theory);
    assert!(serial.status.success());
    assert!(parallel.status.success());
    assert_eq!(stdout(&serial), stdout(&parallel));
}

#[test]
fn budget_overrun_exits_three() {
    let out = deltrace_stdin(
        &["models", "-", "--lambda", "4", "--budget", "100"],
        "p until q\n",
    );
    assert_eq!(out.status.code(), Some(3));
    assert!(stdout(&out).is_empty());
    assert!(stderr(&out).contains("budget"), "{}", stderr(&out));
}

#[test]
fn budget_env_variable_is_honoured() {
    let out = Command::new(env!("CARGO_BIN_EXE_deltrace"))
        .args(["check-equiv", "p until q", "<(p? ; step)*> q", "--lambda-max", "4"])
        .env("DELTRACE_BUDGET", "10")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn closure_lists_every_member_once() {
    let out = deltrace(&["closure", "p until q"]);
    assert!(out.status.success());
    let expected = "\
<(p? ; step)*> q
q
<p? ; step> <(p? ; step)*> q
p && <step> <(p? ; step)*> q
p
<step> <(p? ; step)*> q
";
    assert_eq!(stdout(&out), expected);
}

#[test]
fn cnf_pushes_converse_onto_steps() {
    let out = deltrace(&["cnf", "<((p? ; step)*)^-> q"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim_end(), "<(step^- ; p?)*> q");
}

#[test]
fn check_equiv_passes_on_the_iteration_form() {
    let out = deltrace(&[
        "check-equiv",
        "p until q",
        "<(p? ; step)*> q",
        "--lambda-max",
        "3",
    ]);
    assert!(out.status.success());
}

#[test]
fn check_equiv_reports_the_counterexample() {
    let out = deltrace(&["check-equiv", "prev true", "false", "--lambda-max", "2"]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.contains("k=1"), "{text}");
    assert!(text.contains("counterexample"), "{text}");
}

#[test]
fn check_nf_verifies_both_lengths() {
    let out = deltrace(&["check-nf", "p until q", "--lambda-max", "2", "--full"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("lambda 1: ok"), "{text}");
    assert!(text.contains("lambda 2: ok"), "{text}");
    assert!(text.contains("normal form verified"), "{text}");
}

#[test]
fn check_faithful_passes_in_context() {
    let out = deltrace(&["check-faithful", "p until q", "alw !q", "--lambda", "2"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("faithful"), "{}", stdout(&out));
}

#[test]
fn json_envelope_is_schema_stable() {
    let out = deltrace(&["--output", "json", "parse", "p && q -> r"]);
    assert!(out.status.success());
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(value["command"], "parse");
    assert_eq!(value["status"], "ok");
    assert_eq!(value["data"]["formula"], "p && q -> r");

    // Semantic failures keep the envelope and carry the verdict in both
    // the status field and the exit code.
    let out = deltrace(&[
        "--output",
        "json",
        "check-equiv",
        "prev true",
        "false",
        "--lambda-max",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(value["command"], "check-equiv");
    assert_eq!(value["status"], "fail");
    assert!(value["data"]["counterexample"].is_object(), "{value}");
}

#[test]
fn parse_errors_exit_two_with_empty_stdout() {
    let out = deltrace(&["parse", "p &&"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).is_empty());
    assert!(stderr(&out).starts_with("error:"), "{}", stderr(&out));

    let out = deltrace(&["--bogus-flag"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn two_way_iteration_is_a_clean_refusal() {
    let out = deltrace(&["translate", "<(step + step^-)*> p"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).is_empty());
}

#[test]
fn seeded_runs_are_reproducible() {
    let args = ["--seed", "7", "models", "-", "--lambda", "2"];
    let first = deltrace_stdin(&args, "p until q\n");
    let second = deltrace_stdin(&args, "p until q\n");
    assert!(first.status.success());
    assert_eq!(stdout(&first), stdout(&second));
}

#[test]
fn printer_round_trips_random_formulas() {
    use deltrace::parser::{parse_formula, print_formula};
    use deltrace_core::corpus::{gen_formula, Rng};

    let mut rng = Rng::new(0xc11_0001);
    for case in 0..500 {
        let formula = gen_formula(&mut rng, &["p", "q", "r"], 4);
        let printed = print_formula(&formula);
        let reparsed = parse_formula(&printed)
            .unwrap_or_else(|e| panic!("case {case}: `{printed}` does not reparse: {e}"));
        assert_eq!(reparsed, formula, "case {case}: `{printed}` changed shape");
    }
}
