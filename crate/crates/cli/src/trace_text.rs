//! Text formats for HT-traces.
//!
//! The line format holds one state per line, earliest first:
//!
//! ```text
//! H: a b | T: a b c     # split state: proved here / assumed there
//! a b                   # total-state shorthand, H = T = {a, b}
//! ```
//!
//! `#` starts a comment and blank lines are skipped, so the trace length is
//! the number of state lines. A document whose first meaningful character
//! is `{` is instead read as JSON: `{"states":[{"h":[...],"t":[...]}]}`.

use std::collections::BTreeSet;

use deltrace_core::semantics::State;
use deltrace_core::Trace;
use serde::Deserialize;

use crate::parser::{valid_atom, ParseError, SourceSpan};

#[derive(Deserialize)]
struct JsonTrace {
    states: Vec<JsonState>,
}

#[derive(Deserialize)]
struct JsonState {
    h: Vec<String>,
    t: Vec<String>,
}

fn whole(text: &str) -> SourceSpan {
    SourceSpan {
        start: 0,
        end: text.len(),
    }
}

fn state_from_atoms<I>(atoms: I, span: SourceSpan) -> Result<State, ParseError>
where
    I: IntoIterator,
    I::Item: AsRef<str>,
{
    let mut state = BTreeSet::new();
    for raw in atoms {
        let name = raw.as_ref();
        if !valid_atom(name) {
            return Err(ParseError::new(
                format!("`{name}` is not a valid atom name (lowercase `a-z`, `0-9`, `_`)"),
                span,
            ));
        }
        // Duplicates collapse silently; a set has no multiplicity.
        state.insert(String::from(name));
    }
    Ok(state)
}

fn check_state(h: &State, t: &State, place: &str, span: SourceSpan) -> Result<(), ParseError> {
    let stray: Vec<&str> = h.difference(t).map(String::as_str).collect();
    if stray.is_empty() {
        Ok(())
    } else {
        Err(ParseError::new(
            format!(
                "{place}: H must be a subset of T, but {} {} only in H",
                stray.join(", "),
                if stray.len() == 1 { "is" } else { "are" }
            ),
            span,
        ))
    }
}

fn parse_json_trace(text: &str) -> Result<Trace, ParseError> {
    let doc: JsonTrace = serde_json::from_str(text)
        .map_err(|e| ParseError::new(format!("malformed trace JSON: {e}"), whole(text)))?;
    let mut here = Vec::new();
    let mut there = Vec::new();
    for (i, state) in doc.states.iter().enumerate() {
        let h = state_from_atoms(&state.h, whole(text))?;
        let t = state_from_atoms(&state.t, whole(text))?;
        check_state(&h, &t, &format!("state {i}"), whole(text))?;
        here.push(h);
        there.push(t);
    }
    finish(here, there, text)
}

fn parse_line_trace(text: &str) -> Result<Trace, ParseError> {
    let mut here = Vec::new();
    let mut there = Vec::new();
    let mut offset = 0;
    for raw in text.split_inclusive('\n') {
        let line = raw.strip_suffix('\n').unwrap_or(raw);
        let code = line.split('#').next().unwrap_or("");
        let span = SourceSpan {
            start: offset,
            end: offset + code.len(),
        };
        offset += raw.len();
        if code.trim().is_empty() {
            continue;
        }
        let lineno = here.len() + 1;
        let (h, t) = if let Some((left, right)) = code.split_once('|') {
            let h_part = left.trim().strip_prefix("H:").ok_or_else(|| {
                ParseError::new(
                    format!("state line {lineno}: expected `H: ... | T: ...`"),
                    span,
                )
            })?;
            let t_part = right.trim().strip_prefix("T:").ok_or_else(|| {
                ParseError::new(
                    format!("state line {lineno}: expected `H: ... | T: ...`"),
                    span,
                )
            })?;
            let h = state_from_atoms(h_part.split_whitespace(), span)?;
            let t = state_from_atoms(t_part.split_whitespace(), span)?;
            check_state(&h, &t, &format!("state line {lineno}"), span)?;
            (h, t)
        } else if code.contains(':') {
            return Err(ParseError::new(
                format!("state line {lineno}: expected `H: ... | T: ...` or a plain atom list"),
                span,
            ));
        } else {
            let t = state_from_atoms(code.split_whitespace(), span)?;
            (t.clone(), t)
        };
        here.push(h);
        there.push(t);
    }
    finish(here, there, text)
}

fn finish(here: Vec<State>, there: Vec<State>, text: &str) -> Result<Trace, ParseError> {
    if here.is_empty() {
        return Err(ParseError::new(
            "a trace needs at least one state (evaluation starts at point 0)",
            whole(text),
        ));
    }
    Trace::new(here, there).map_err(|e| ParseError::new(format!("{e}"), whole(text)))
}

/// Parses an HT-trace from either surface form.
pub fn parse_ht_trace(text: &str) -> Result<Trace, ParseError> {
    if text.trim_start().starts_with('{') {
        parse_json_trace(text)
    } else {
        parse_line_trace(text)
    }
}

fn atoms_line(state: &State) -> String {
    state
        .iter()
        .map(String::as_str)
        .collect::<Vec<_>>()
        .join(" ")
}

/// Prints a trace in the line format, one state per line.
///
/// Total traces whose states are all non-empty use the shorthand; anything
/// else uses the explicit form, because a shorthand empty state would print
/// as a blank line and vanish on reparse.
pub fn print_ht_trace(trace: &Trace) -> String {
    let shorthand =
        trace.is_total() && (0..trace.lambda()).all(|k| !trace.there(k).is_empty());
    let mut lines = Vec::with_capacity(trace.lambda());
    for k in 0..trace.lambda() {
        if shorthand {
            lines.push(atoms_line(trace.there(k)));
        } else {
            lines.push(format!(
                "H: {} | T: {}",
                atoms_line(trace.here(k)),
                atoms_line(trace.there(k))
            ));
        }
    }
    lines.join("\n")
}

/// The JSON form of a trace, mirroring the accepted input document.
pub fn trace_to_json(trace: &Trace) -> serde_json::Value {
    let states: Vec<serde_json::Value> = (0..trace.lambda())
        .map(|k| {
            serde_json::json!({
                "h": trace.here(k).iter().collect::<Vec<_>>(),
                "t": trace.there(k).iter().collect::<Vec<_>>(),
            })
        })
        .collect();
    serde_json::json!({ "states": states })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn state(atoms: &[&str]) -> State {
        atoms.iter().map(|a| String::from(*a)).collect()
    }

    #[test]
    fn split_and_shorthand_lines_mix() {
        let trace = parse_ht_trace("H: | T: p\np q\n").unwrap();
        assert_eq!(trace.lambda(), 2);
        assert_eq!(*trace.here(0), state(&[]));
        assert_eq!(*trace.there(0), state(&["p"]));
        assert_eq!(*trace.here(1), state(&["p", "q"]));
        assert_eq!(*trace.there(1), state(&["p", "q"]));
    }

    #[test]
    fn comments_blank_lines_and_duplicates_are_tolerated() {
        let trace = parse_ht_trace("# a trace\n\np p q # same state\n").unwrap();
        assert_eq!(trace.lambda(), 1);
        assert_eq!(*trace.there(0), state(&["p", "q"]));
    }

    #[test]
    fn violations_are_rejected_with_positions() {
        let err = parse_ht_trace("H: p | T:\n").unwrap_err();
        assert!(err.message.contains("subset"), "{err}");
        assert!(err.span.end <= "H: p | T:\n".len());

        let err = parse_ht_trace("").unwrap_err();
        assert!(err.message.contains("at least one state"), "{err}");

        let err = parse_ht_trace("p\nq:\n").unwrap_err();
        assert!(err.message.contains("state line 2"), "{err}");

        let err = parse_ht_trace("Phi\n").unwrap_err();
        assert!(err.message.contains("not a valid atom"), "{err}");
    }

    #[test]
    fn json_documents_parse_and_reject_like_lines() {
        let trace =
            parse_ht_trace(r#"{"states":[{"h":[],"t":["p"]},{"h":["q"],"t":["q"]}]}"#).unwrap();
        assert_eq!(trace.lambda(), 2);
        assert_eq!(*trace.there(0), state(&["p"]));
        assert_eq!(*trace.here(1), state(&["q"]));

        let err = parse_ht_trace(r#"{"states":[{"h":["p"],"t":[]}]}"#).unwrap_err();
        assert!(err.message.contains("subset"), "{err}");
        let err = parse_ht_trace(r#"{"states":[]}"#).unwrap_err();
        assert!(err.message.contains("at least one state"), "{err}");
        let err = parse_ht_trace("{ not json").unwrap_err();
        assert!(err.message.contains("malformed trace JSON"), "{err}");
    }

    #[test]
    fn print_parse_round_trip_holds_even_for_empty_states() {
        let cases = [
            Trace::total(vec![state(&["p"]), state(&["p", "q"])]).unwrap(),
            Trace::total(vec![state(&[]), state(&["p"])]).unwrap(),
            Trace::new(
                vec![state(&[]), state(&["q"])],
                vec![state(&["p"]), state(&["q"])],
            )
            .unwrap(),
        ];
        for trace in cases {
            let printed = print_ht_trace(&trace);
            assert_eq!(parse_ht_trace(&printed).unwrap(), trace, "via:\n{printed}");
            let via_json = serde_json::to_string(&trace_to_json(&trace)).unwrap();
            assert_eq!(parse_ht_trace(&via_json).unwrap(), trace, "via {via_json}");
        }
    }
}
