//! One-way bridge to the telingo `&del` theory-atom surface.
//!
//! Only constructs whose printed form is actually witnessed in that surface
//! are emitted without comment: the step `&true`, atomic tests `?a`,
//! sequence `;;`, iteration prefix `*`, and the trailing `. >?` / `. >*`
//! goal markers. Choice has no witnessed spelling; it is emitted as `+`
//! together with a warning. Converse and non-atomic subterms have no known
//! spelling at all and are refused rather than guessed.

use deltrace_core::ast::converse_normal_form;
use deltrace_core::{Formula, Path};

/// A construct with no known `&del` spelling.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unsupported construct: {message}")]
pub struct EmitError {
    pub message: String,
}

impl EmitError {
    fn new(message: impl Into<String>) -> EmitError {
        EmitError {
            message: message.into(),
        }
    }
}

/// What the emitted fragment sits inside, for deciding parentheses. The
/// target grammar's precedence is unknown, so everything compound nests in
/// parentheses; only same-operator chains stay flat, which is safe because
/// sequence and choice are associative.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Context {
    Top,
    Seq,
    Choice,
    Star,
}

fn emit_path(path: &Path, context: Context, warnings: &mut Vec<String>) -> Result<String, EmitError> {
    match path {
        Path::Step => Ok(String::from("&true")),
        Path::Test(body) => match body.as_ref() {
            Formula::Atom(name) => Ok(format!("?{name}")),
            other => Err(EmitError::new(format!(
                "only atomic tests have a known `&del` spelling, got a compound test on {other:?}"
            ))),
        },
        Path::Seq(first, second) => {
            let text = format!(
                "{} ;; {}",
                emit_path(first, Context::Seq, warnings)?,
                emit_path(second, Context::Seq, warnings)?
            );
            Ok(match context {
                Context::Top | Context::Seq => text,
                Context::Choice | Context::Star => format!("({text})"),
            })
        }
        Path::Choice(left, right) => {
            let text = format!(
                "{} + {}",
                emit_path(left, Context::Choice, warnings)?,
                emit_path(right, Context::Choice, warnings)?
            );
            let warning = "choice `+` is not witnessed in the target surface; \
                           emitted best-effort";
            if !warnings.iter().any(|w| w == warning) {
                warnings.push(String::from(warning));
            }
            Ok(match context {
                Context::Top | Context::Choice => text,
                Context::Seq | Context::Star => format!("({text})"),
            })
        }
        Path::Star(inner) => {
            let text = format!("* {}", emit_path(inner, Context::Star, warnings)?);
            Ok(match context {
                Context::Top => text,
                _ => format!("({text})"),
            })
        }
        Path::Converse(_) => Err(EmitError::new(
            "the converse operator has no `&del` spelling",
        )),
    }
}

/// Emits a modal formula as a telingo `&del` theory atom, plus any warnings
/// about best-effort constructs.
///
/// The formula is brought into converse normal form first; a converse that
/// survives (one on the step itself) is refused.
pub fn emit_del(formula: &Formula) -> Result<(String, Vec<String>), EmitError> {
    let normal = converse_normal_form(formula);
    let (path, goal, marker) = match &normal {
        Formula::Diamond(path, body) => (path, body, ">?"),
        Formula::Box(path, body) => (path, body, ">*"),
        other => {
            return Err(EmitError::new(format!(
                "`&del` holds a single modality; got a non-modal formula {other:?}"
            )))
        }
    };
    let goal = match goal.as_ref() {
        Formula::Atom(name) => name.clone(),
        other => {
            return Err(EmitError::new(format!(
                "only an atomic goal has a known `&del` spelling, got {other:?}"
            )))
        }
    };
    let mut warnings = Vec::new();
    let path_text = emit_path(path, Context::Top, &mut warnings)?;
    Ok((format!("&del{{ {path_text} . {marker} {goal} }}"), warnings))
}
