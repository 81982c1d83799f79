//! Concrete syntax for dynamic formulas: lexer, recursive-descent parser,
//! and a precedence-aware printer.
//!
//! The grammar is ASCII-only with word keywords so that every operator can
//! be typed in a theory file. Identifiers are lowercase (`[a-z][a-z0-9_]*`)
//! and keywords are reserved.
//!
//! ```text
//! formula := implication
//! implication := temporal ("->" implication)?                 right-assoc
//! temporal := disjunction (("until"|"since"|"release"|"trigger") temporal)?
//! disjunction := conjunction ("||" conjunction)*               left-assoc
//! conjunction := unary ("&&" unary)*                           left-assoc
//! unary := "!" unary | "<" path ">" unary | "[" path "]" unary
//!        | prefixop unary | primary
//! prefixop := "next"|"wnext"|"prev"|"wprev"|"ev"|"alw"|"once"|"palw"
//! primary := "true" | "false" | "final" | "initial" | ident
//!          | "(" formula ")"
//!
//! path := choice
//! choice := seqp ("+" seqp)*                                   left-assoc
//! seqp := postfix (";" postfix)*                               left-assoc
//! postfix := primaryp ("*" | "^-")*
//! primaryp := "step" | formula "?" | formula | "(" path ")"
//! ```
//!
//! A bare formula in path position is sugar for `(formula? ; step)`, with
//! one exception: a bare `true` reads as `step` itself, since guarding the
//! step with a trivially true test changes nothing. An explicit `true?`
//! still denotes the identity test. Parenthesized input is first tried as
//! a formula (so `(p && q)?` works) and reparsed as a path on failure (so
//! `(p? ; step)` works).

use deltrace_core::ast::{
    always, and, atom, boxm, choice, converse, dia, eventually, implies, next, not, once, or,
    past_always, prev, release, seq, since, star, step, test, trace_final, trace_initial,
    trigger, until, wnext, wprev,
};
use deltrace_core::{Formula, Path};

/// Byte range into the input text; attached to every parse error.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SourceSpan {
    pub start: usize,
    pub end: usize,
}

impl SourceSpan {
    fn new(start: usize, end: usize) -> SourceSpan {
        debug_assert!(start <= end);
        SourceSpan { start, end }
    }

    /// Shifts the span by a byte offset, for errors reported out of a
    /// larger document (theory files report file positions, not line
    /// positions).
    pub fn offset(self, by: usize) -> SourceSpan {
        SourceSpan::new(self.start + by, self.end + by)
    }
}

/// A parse failure, with the byte range it points at.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{message} at {}..{}", span.start, span.end)]
pub struct ParseError {
    pub message: String,
    pub span: SourceSpan,
}

impl ParseError {
    pub fn new(message: impl Into<String>, span: SourceSpan) -> ParseError {
        ParseError {
            message: message.into(),
            span,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    True,
    False,
    Final,
    Initial,
    Step,
    Next,
    WNext,
    Prev,
    WPrev,
    Ev,
    Alw,
    Once,
    Palw,
    Until,
    Since,
    Release,
    Trigger,
    Ident(String),
    LParen,
    RParen,
    LAngle,
    RAngle,
    LBracket,
    RBracket,
    Bang,
    Question,
    Semi,
    Plus,
    Star,
    Conv,
    AndAnd,
    OrOr,
    Arrow,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(name) => format!("identifier `{name}`"),
            Tok::True => "`true`".into(),
            Tok::False => "`false`".into(),
            Tok::Final => "`final`".into(),
            Tok::Initial => "`initial`".into(),
            Tok::Step => "`step`".into(),
            Tok::Next => "`next`".into(),
            Tok::WNext => "`wnext`".into(),
            Tok::Prev => "`prev`".into(),
            Tok::WPrev => "`wprev`".into(),
            Tok::Ev => "`ev`".into(),
            Tok::Alw => "`alw`".into(),
            Tok::Once => "`once`".into(),
            Tok::Palw => "`palw`".into(),
            Tok::Until => "`until`".into(),
            Tok::Since => "`since`".into(),
            Tok::Release => "`release`".into(),
            Tok::Trigger => "`trigger`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LAngle => "`<`".into(),
            Tok::RAngle => "`>`".into(),
            Tok::LBracket => "`[`".into(),
            Tok::RBracket => "`]`".into(),
            Tok::Bang => "`!`".into(),
            Tok::Question => "`?`".into(),
            Tok::Semi => "`;`".into(),
            Tok::Plus => "`+`".into(),
            Tok::Star => "`*`".into(),
            Tok::Conv => "`^-`".into(),
            Tok::AndAnd => "`&&`".into(),
            Tok::OrOr => "`||`".into(),
            Tok::Arrow => "`->`".into(),
        }
    }
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    span: SourceSpan,
}

fn keyword(word: &str) -> Option<Tok> {
    Some(match word {
        "true" => Tok::True,
        "false" => Tok::False,
        "final" => Tok::Final,
        "initial" => Tok::Initial,
        "step" => Tok::Step,
        "next" => Tok::Next,
        "wnext" => Tok::WNext,
        "prev" => Tok::Prev,
        "wprev" => Tok::WPrev,
        "ev" => Tok::Ev,
        "alw" => Tok::Alw,
        "once" => Tok::Once,
        "palw" => Tok::Palw,
        "until" => Tok::Until,
        "since" => Tok::Since,
        "release" => Tok::Release,
        "trigger" => Tok::Trigger,
        _ => return None,
    })
}

/// Whether a string is a well-formed atom name.
pub fn valid_atom(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some('a'..='z'))
        && chars.all(|c| matches!(c, 'a'..='z' | '0'..='9' | '_'))
        && keyword(name).is_none()
}

fn lex(text: &str) -> Result<Vec<Token>, ParseError> {
    let bytes = text.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let start = i;
        let c = bytes[i];
        let tok = match c {
            b' ' | b'\t' | b'\r' | b'\n' => {
                i += 1;
                continue;
            }
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'<' => Tok::LAngle,
            b'>' => Tok::RAngle,
            b'[' => Tok::LBracket,
            b']' => Tok::RBracket,
            b'!' => Tok::Bang,
            b'?' => Tok::Question,
            b';' => Tok::Semi,
            b'+' => Tok::Plus,
            b'*' => Tok::Star,
            b'^' => {
                if bytes.get(i + 1) == Some(&b'-') {
                    i += 1;
                    Tok::Conv
                } else {
                    return Err(ParseError::new(
                        "lexical error: `^` must be followed by `-`",
                        SourceSpan::new(start, start + 1),
                    ));
                }
            }
            b'-' => {
                if bytes.get(i + 1) == Some(&b'>') {
                    i += 1;
                    Tok::Arrow
                } else {
                    return Err(ParseError::new(
                        "lexical error: `-` must be followed by `>`",
                        SourceSpan::new(start, start + 1),
                    ));
                }
            }
            b'&' => {
                if bytes.get(i + 1) == Some(&b'&') {
                    i += 1;
                    Tok::AndAnd
                } else {
                    return Err(ParseError::new(
                        "lexical error: `&` must be followed by `&`",
                        SourceSpan::new(start, start + 1),
                    ));
                }
            }
            b'|' => {
                if bytes.get(i + 1) == Some(&b'|') {
                    i += 1;
                    Tok::OrOr
                } else {
                    return Err(ParseError::new(
                        "lexical error: `|` must be followed by `|`",
                        SourceSpan::new(start, start + 1),
                    ));
                }
            }
            b'a'..=b'z' => {
                let mut end = i + 1;
                while end < bytes.len()
                    && matches!(bytes[end], b'a'..=b'z' | b'0'..=b'9' | b'_')
                {
                    end += 1;
                }
                let word = &text[i..end];
                i = end - 1;
                keyword(word).unwrap_or_else(|| Tok::Ident(String::from(word)))
            }
            _ => {
                let end = start
                    + text[start..]
                        .chars()
                        .next()
                        .map(char::len_utf8)
                        .unwrap_or(1);
                return Err(ParseError::new(
                    format!(
                        "lexical error: unexpected character `{}` \
                         (identifiers are lowercase `a-z`, `0-9`, `_`)",
                        &text[start..end]
                    ),
                    SourceSpan::new(start, end),
                ));
            }
        };
        i += 1;
        tokens.push(Token {
            tok,
            span: SourceSpan::new(start, i),
        });
    }
    Ok(tokens)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    input_len: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|t| &t.tok)
    }

    fn here(&self) -> SourceSpan {
        self.tokens
            .get(self.pos)
            .map(|t| t.span)
            .unwrap_or(SourceSpan::new(self.input_len, self.input_len))
    }

    fn bump(&mut self) -> Tok {
        let tok = self.tokens[self.pos].tok.clone();
        self.pos += 1;
        tok
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        if self.eat(&tok) {
            Ok(())
        } else {
            Err(self.unexpected(&format!("expected {}", tok.describe())))
        }
    }

    fn unexpected(&self, wanted: &str) -> ParseError {
        let found = match self.peek() {
            Some(tok) => format!("found {}", tok.describe()),
            None => String::from("found end of input"),
        };
        ParseError::new(format!("syntax error: {wanted}, {found}"), self.here())
    }

    fn implication(&mut self) -> Result<Formula, ParseError> {
        let left = self.temporal()?;
        if self.eat(&Tok::Arrow) {
            let right = self.implication()?;
            Ok(implies(left, right))
        } else {
            Ok(left)
        }
    }

    fn temporal(&mut self) -> Result<Formula, ParseError> {
        let left = self.disjunction()?;
        let build = match self.peek() {
            Some(Tok::Until) => until,
            Some(Tok::Since) => since,
            Some(Tok::Release) => release,
            Some(Tok::Trigger) => trigger,
            _ => return Ok(left),
        };
        self.bump();
        let right = self.temporal()?;
        Ok(build(left, right))
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        let mut left = self.conjunction()?;
        while self.eat(&Tok::OrOr) {
            left = or(left, self.conjunction()?);
        }
        Ok(left)
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut left = self.unary()?;
        while self.eat(&Tok::AndAnd) {
            left = and(left, self.unary()?);
        }
        Ok(left)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        let build = match self.peek() {
            Some(Tok::Bang) => {
                self.bump();
                return Ok(not(self.unary()?));
            }
            Some(Tok::LAngle) => {
                self.bump();
                let path = self.path()?;
                self.expect(Tok::RAngle)?;
                return Ok(dia(path, self.unary()?));
            }
            Some(Tok::LBracket) => {
                self.bump();
                let path = self.path()?;
                self.expect(Tok::RBracket)?;
                return Ok(boxm(path, self.unary()?));
            }
            Some(Tok::Next) => next,
            Some(Tok::WNext) => wnext,
            Some(Tok::Prev) => prev,
            Some(Tok::WPrev) => wprev,
            Some(Tok::Ev) => eventually,
            Some(Tok::Alw) => always,
            Some(Tok::Once) => once,
            Some(Tok::Palw) => past_always,
            _ => return self.primary(),
        };
        self.bump();
        Ok(build(self.unary()?))
    }

    fn primary(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Some(Tok::True) => {
                self.bump();
                Ok(Formula::Truth)
            }
            Some(Tok::False) => {
                self.bump();
                Ok(Formula::Falsity)
            }
            Some(Tok::Final) => {
                self.bump();
                Ok(trace_final())
            }
            Some(Tok::Initial) => {
                self.bump();
                Ok(trace_initial())
            }
            Some(Tok::Ident(_)) => {
                let Tok::Ident(name) = self.bump() else {
                    unreachable!("peeked an identifier");
                };
                Ok(atom(&name))
            }
            Some(Tok::LParen) => {
                self.bump();
                let inner = self.implication()?;
                self.expect(Tok::RParen)?;
                Ok(inner)
            }
            _ => Err(self.unexpected("expected a formula")),
        }
    }

    fn path(&mut self) -> Result<Path, ParseError> {
        let mut left = self.seqp()?;
        while self.eat(&Tok::Plus) {
            left = choice(left, self.seqp()?);
        }
        Ok(left)
    }

    fn seqp(&mut self) -> Result<Path, ParseError> {
        let mut left = self.postfix()?;
        while self.eat(&Tok::Semi) {
            left = seq(left, self.postfix()?);
        }
        Ok(left)
    }

    fn postfix(&mut self) -> Result<Path, ParseError> {
        let mut base = self.primary_path()?;
        loop {
            if self.eat(&Tok::Star) {
                base = star(base);
            } else if self.eat(&Tok::Conv) {
                base = converse(base);
            } else {
                return Ok(base);
            }
        }
    }

    fn primary_path(&mut self) -> Result<Path, ParseError> {
        if self.eat(&Tok::Step) {
            return Ok(step());
        }
        // A path position may hold a test or a bare guard formula. Try the
        // formula reading first; `(p && q)?` and `(p? ; step)` disambiguate
        // only at the failure point, so back up and reparse as `( path )`.
        let checkpoint = self.pos;
        match self.implication() {
            Ok(f) => {
                if self.eat(&Tok::Question) {
                    Ok(test(f))
                } else if f == Formula::Truth {
                    // `(true? ; step)` is just `step`.
                    Ok(step())
                } else {
                    Ok(seq(test(f), step()))
                }
            }
            Err(formula_error) => {
                self.pos = checkpoint;
                if self.peek() == Some(&Tok::LParen) {
                    self.bump();
                    let inner = self.path()?;
                    self.expect(Tok::RParen)?;
                    Ok(inner)
                } else {
                    Err(formula_error)
                }
            }
        }
    }
}

/// Parses one formula; the whole input must be consumed.
pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    let mut parser = Parser {
        tokens: lex(text)?,
        pos: 0,
        input_len: text.len(),
    };
    let formula = parser.implication()?;
    if parser.pos < parser.tokens.len() {
        return Err(parser.unexpected("expected end of input"));
    }
    Ok(formula)
}

/// Parses a theory file: one formula per line, `#` starts a comment, blank
/// lines are skipped. Error spans point into the whole document.
pub fn parse_theory(text: &str) -> Result<Vec<Formula>, ParseError> {
    let mut theory = Vec::new();
    let mut offset = 0;
    for raw in text.split_inclusive('\n') {
        let line = raw.strip_suffix('\n').unwrap_or(raw);
        let code = line.split('#').next().unwrap_or("");
        if !code.trim().is_empty() {
            theory.push(parse_formula(code).map_err(|e| ParseError {
                message: e.message,
                span: e.span.offset(offset),
            })?);
        }
        offset += raw.len();
    }
    Ok(theory)
}

// Printing. Binding levels from loosest to tightest; a subterm is
// parenthesized when its own level is below what its position requires.
const LVL_IMPLIES: u8 = 0;
const LVL_OR: u8 = 2;
const LVL_AND: u8 = 3;
const LVL_UNARY: u8 = 4;
const LVL_PRIMARY: u8 = 5;

const PATH_CHOICE: u8 = 0;
const PATH_SEQ: u8 = 1;
const PATH_POSTFIX: u8 = 2;
const PATH_PRIMARY: u8 = 3;

/// The derived connectives the printer folds back into surface syntax.
/// Everything else prints as an explicit modality, so the printed form of
/// these exact shapes must reparse to the same tree — which holds because
/// the parser desugars the connectives into the same shapes.
enum Sugar<'a> {
    Keyword(&'a str),
    Not(&'a Formula),
    And(&'a Formula, &'a Formula),
    Or(&'a Formula, &'a Formula),
    Implies(&'a Formula, &'a Formula),
    Diamond(&'a Path, &'a Formula),
    Box(&'a Path, &'a Formula),
}

fn classify(f: &Formula) -> (Sugar<'_>, u8) {
    match f {
        Formula::Truth => (Sugar::Keyword("true"), LVL_PRIMARY),
        Formula::Falsity => (Sugar::Keyword("false"), LVL_PRIMARY),
        Formula::Atom(name) => (Sugar::Keyword(name), LVL_PRIMARY),
        Formula::Box(path, body) => match (path.as_ref(), body.as_ref()) {
            (Path::Step, Formula::Falsity) => (Sugar::Keyword("final"), LVL_PRIMARY),
            (Path::Converse(inner), Formula::Falsity) if **inner == Path::Step => {
                (Sugar::Keyword("initial"), LVL_PRIMARY)
            }
            (Path::Test(premise), Formula::Falsity) => (Sugar::Not(premise), LVL_UNARY),
            (Path::Test(premise), conclusion) => {
                (Sugar::Implies(premise, conclusion), LVL_IMPLIES)
            }
            (path, body) => (Sugar::Box(path, body), LVL_UNARY),
        },
        Formula::Diamond(path, body) => match (path.as_ref(), body.as_ref()) {
            (Path::Choice(left, right), Formula::Truth) => {
                if let (Path::Test(l), Path::Test(r)) = (left.as_ref(), right.as_ref()) {
                    (Sugar::Or(l, r), LVL_OR)
                } else {
                    (Sugar::Diamond(path, body), LVL_UNARY)
                }
            }
            (Path::Test(left), right) => (Sugar::And(left, right), LVL_AND),
            (path, body) => (Sugar::Diamond(path, body), LVL_UNARY),
        },
    }
}

fn fmt_formula(f: &Formula, min_level: u8, out: &mut String) {
    let (sugar, level) = classify(f);
    if level < min_level {
        out.push('(');
        fmt_formula(f, LVL_IMPLIES, out);
        out.push(')');
        return;
    }
    match sugar {
        Sugar::Keyword(word) => out.push_str(word),
        Sugar::Not(body) => {
            out.push('!');
            fmt_formula(body, LVL_UNARY, out);
        }
        Sugar::And(left, right) => {
            fmt_formula(left, LVL_AND, out);
            out.push_str(" && ");
            fmt_formula(right, LVL_AND + 1, out);
        }
        Sugar::Or(left, right) => {
            fmt_formula(left, LVL_OR, out);
            out.push_str(" || ");
            fmt_formula(right, LVL_OR + 1, out);
        }
        Sugar::Implies(premise, conclusion) => {
            fmt_formula(premise, LVL_IMPLIES + 1, out);
            out.push_str(" -> ");
            fmt_formula(conclusion, LVL_IMPLIES, out);
        }
        Sugar::Diamond(path, body) => {
            out.push('<');
            fmt_path(path, PATH_CHOICE, out);
            out.push_str("> ");
            fmt_formula(body, LVL_UNARY, out);
        }
        Sugar::Box(path, body) => {
            out.push('[');
            fmt_path(path, PATH_CHOICE, out);
            out.push_str("] ");
            fmt_formula(body, LVL_UNARY, out);
        }
    }
}

fn fmt_path(p: &Path, min_level: u8, out: &mut String) {
    let level = match p {
        Path::Step | Path::Test(_) => PATH_PRIMARY,
        Path::Star(_) | Path::Converse(_) => PATH_POSTFIX,
        Path::Seq(..) => PATH_SEQ,
        Path::Choice(..) => PATH_CHOICE,
    };
    if level < min_level {
        out.push('(');
        fmt_path(p, PATH_CHOICE, out);
        out.push(')');
        return;
    }
    match p {
        Path::Step => out.push_str("step"),
        Path::Test(f) => {
            // The test marker binds to the whole preceding formula, so only
            // single-token bodies go bare.
            if classify(f).1 == LVL_PRIMARY {
                fmt_formula(f, LVL_PRIMARY, out);
            } else {
                out.push('(');
                fmt_formula(f, LVL_IMPLIES, out);
                out.push(')');
            }
            out.push('?');
        }
        Path::Choice(left, right) => {
            fmt_path(left, PATH_CHOICE, out);
            out.push_str(" + ");
            fmt_path(right, PATH_CHOICE + 1, out);
        }
        Path::Seq(first, second) => {
            fmt_path(first, PATH_SEQ, out);
            out.push_str(" ; ");
            fmt_path(second, PATH_SEQ + 1, out);
        }
        Path::Star(inner) => {
            fmt_path(inner, PATH_POSTFIX, out);
            out.push('*');
        }
        Path::Converse(inner) => {
            fmt_path(inner, PATH_POSTFIX, out);
            out.push_str("^-");
        }
    }
}

/// Prints a formula so that parsing the result gives back the same tree.
///
/// Propositional connectives and the endpoint constants print as their
/// surface forms; every modality prints explicitly, so `<step> p` stays
/// `<step> p` rather than collapsing to a derived keyword.
pub fn print_formula(f: &Formula) -> String {
    let mut out = String::new();
    fmt_formula(f, LVL_IMPLIES, &mut out);
    out
}

/// Prints a path expression in the same surface syntax.
pub fn print_path(p: &Path) -> String {
    let mut out = String::new();
    fmt_path(p, PATH_CHOICE, &mut out);
    out
}
