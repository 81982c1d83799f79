//! Text form for temporal logic programs: one rule per line,
//!
//! ```text
//! global: l0 -> q | l1
//! dynamic: 'l2 -> l0
//! final: l2 ->
//! initial: -> l0
//! ```
//!
//! with body literals joined by `&`, head literals by `|`, previous-state
//! literals marked `'a`, and negation `!a`. An empty body reads as truth
//! (a fact), an empty head as falsity (a constraint).

use deltrace_core::translate::{Rule, RuleKind, TemporalLiteral, TemporalProgram};

use crate::parser::{valid_atom, ParseError, SourceSpan};

fn kind_marker(kind: RuleKind) -> &'static str {
    match kind {
        RuleKind::Initial => "initial",
        RuleKind::Dynamic => "dynamic",
        RuleKind::Final => "final",
        RuleKind::Global => "global",
    }
}

/// Prints one literal: `a`, `!a`, `'a`, or `!'a`.
pub fn print_literal(lit: &TemporalLiteral) -> String {
    let mut out = String::new();
    if lit.negated {
        out.push('!');
    }
    if lit.prev {
        out.push('\'');
    }
    out.push_str(&lit.atom);
    out
}

/// Prints one rule as a `kind: body -> head` line.
pub fn print_rule(rule: &Rule) -> String {
    let mut out = String::from(kind_marker(rule.kind));
    out.push(':');
    for (i, lit) in rule.body.iter().enumerate() {
        out.push_str(if i == 0 { " " } else { " & " });
        out.push_str(&print_literal(lit));
    }
    out.push_str(" ->");
    for (i, lit) in rule.head.iter().enumerate() {
        out.push_str(if i == 0 { " " } else { " | " });
        out.push_str(&print_literal(lit));
    }
    out
}

/// Prints a whole program, one rule per line in translation order.
pub fn print_program(program: &TemporalProgram) -> String {
    program
        .rules
        .iter()
        .map(print_rule)
        .collect::<Vec<_>>()
        .join("\n")
}

fn parse_literal(text: &str, span: SourceSpan) -> Result<TemporalLiteral, ParseError> {
    let text = text.trim();
    let (negated, rest) = match text.strip_prefix('!') {
        Some(rest) => (true, rest.trim_start()),
        None => (false, text),
    };
    let (prev, atom) = match rest.strip_prefix('\'') {
        Some(rest) => (true, rest),
        None => (false, rest),
    };
    if valid_atom(atom) {
        Ok(TemporalLiteral {
            negated,
            prev,
            atom: String::from(atom),
        })
    } else {
        Err(ParseError::new(
            format!("`{text}` is not a literal (expected `a`, `!a`, `'a`, or `!'a`)"),
            span,
        ))
    }
}

fn split_literals(
    side: &str,
    separator: char,
    span: SourceSpan,
) -> Result<Vec<TemporalLiteral>, ParseError> {
    if side.trim().is_empty() {
        return Ok(Vec::new());
    }
    side.split(separator)
        .map(|piece| parse_literal(piece, span))
        .collect()
}

/// Parses the rule lines back into rules; `#` comments and blank lines are
/// skipped. The inverse of [`print_program`] on its output.
pub fn parse_rules(text: &str) -> Result<Vec<Rule>, ParseError> {
    let mut rules = Vec::new();
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
        let (marker, rest) = code.split_once(':').ok_or_else(|| {
            ParseError::new("a rule starts with `initial:`, `dynamic:`, `final:`, or `global:`", span)
        })?;
        let kind = match marker.trim() {
            "initial" => RuleKind::Initial,
            "dynamic" => RuleKind::Dynamic,
            "final" => RuleKind::Final,
            "global" => RuleKind::Global,
            other => {
                return Err(ParseError::new(
                    format!("unknown rule kind `{other}`"),
                    span,
                ))
            }
        };
        let (body_text, head_text) = rest.split_once("->").ok_or_else(|| {
            ParseError::new("a rule needs `->` between body and head", span)
        })?;
        if head_text.contains("->") {
            return Err(ParseError::new("a rule has exactly one `->`", span));
        }
        rules.push(Rule {
            kind,
            body: split_literals(body_text, '&', span)?,
            head: split_literals(head_text, '|', span)?,
        });
    }
    Ok(rules)
}

/// The JSON form of a rule list.
pub fn rules_to_json(rules: &[Rule]) -> serde_json::Value {
    let items: Vec<serde_json::Value> = rules
        .iter()
        .map(|rule| {
            let side = |lits: &[TemporalLiteral]| -> Vec<serde_json::Value> {
                lits.iter()
                    .map(|l| {
                        serde_json::json!({
                            "negated": l.negated,
                            "prev": l.prev,
                            "atom": l.atom,
                        })
                    })
                    .collect()
            };
            serde_json::json!({
                "kind": kind_marker(rule.kind),
                "body": side(&rule.body),
                "head": side(&rule.head),
            })
        })
        .collect();
    serde_json::Value::Array(items)
}
