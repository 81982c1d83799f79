//! Translation of dynamic formulas into temporal logic programs.
//!
//! Every modal member of the closure of the input gets a fresh label atom;
//! constants and atoms stand for themselves. Each labelled formula is then
//! *defined* by a fixed axiom pattern keyed on its outermost path shape: a
//! step ties the label to its body across time, a test to a conjunction or
//! implication, a choice to the labels of its branches, an iteration to its
//! one-step unrolling, and a sequence simply borrows the label of its
//! unrolled form. The axioms live in four shells (initial, global, dynamic,
//! final) and unfold into disjunctive rules over *temporal literals*:
//! `a`, `!a`, `'a` (previous), `!'a`.
//!
//! The unfolding of each axiom is a here-and-there equivalence, checked
//! exhaustively by the test suite over all three-valued assignments.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::ast::{
    always, and, atom, boxm, choice, converse, converse_normal_form, dia, implies, not, or, prev,
    seq, star, test, trace_final, wnext, Alphabet, Formula, Path,
};
use crate::closure::{fl_closure, unroll_seq, ClosureSet};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TranslateError {
    /// Defining axioms exist only for modal formulas.
    NotModal,
    /// The formula is not a member of the registry's closure.
    NotInClosure(Formula),
    /// Converse must be pushed onto `step` before translating.
    NotConverseNormal,
    /// An iteration body moves both forward and backward in time. The
    /// anchored fixpoint axioms need every pass through the loop to advance
    /// in one fixed direction, and this body cannot be rewritten into that
    /// shape.
    TwoWayStar(Path),
}

impl core::fmt::Display for TranslateError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            TranslateError::NotModal => write!(f, "only modal formulas have defining axioms"),
            TranslateError::NotInClosure(g) => {
                write!(f, "formula is outside the labelled closure: {g:?}")
            }
            TranslateError::NotConverseNormal => {
                write!(f, "translation requires converse normal form")
            }
            TranslateError::TwoWayStar(p) => {
                write!(
                    f,
                    "iteration body moves both forward and backward in time \
                     and cannot be translated: {p:?}"
                )
            }
        }
    }
}

impl core::error::Error for TranslateError {}

/// What a closure member is called inside rules: a constant, or an atom
/// (user atom or fresh label) possibly shifted one step into the past.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum LabelTerm {
    True,
    False,
    Atom { name: String, prev: bool },
}

impl LabelTerm {
    fn named(name: &str) -> LabelTerm {
        LabelTerm::Atom {
            name: String::from(name),
            prev: false,
        }
    }

    /// Shifts the term into the previous state. Constants are unaffected:
    /// the shift only ever appears under the dynamic shell, where every
    /// state has a predecessor.
    fn shifted(self) -> LabelTerm {
        match self {
            LabelTerm::Atom { name, .. } => LabelTerm::Atom { name, prev: true },
            constant => constant,
        }
    }
}

/// Maps closure members to the terms that stand for them in rules.
///
/// Fresh labels are numbered in closure insertion order, skipping any name
/// already taken by a user atom; sequence modalities share the label of
/// their unrolled form rather than receiving their own.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelRegistry {
    user: Alphabet,
    names: BTreeMap<Formula, String>,
    fresh: Vec<(String, Formula)>,
}

/// Builds the registry for a closure, fresh with respect to `user`.
pub fn label_registry(closure: &ClosureSet, user: &Alphabet) -> LabelRegistry {
    let mut names = BTreeMap::new();
    let mut fresh = Vec::new();
    let mut counter = 0usize;
    for member in closure.iter() {
        let is_modal = matches!(member, Formula::Diamond(..) | Formula::Box(..));
        if !is_modal || unroll_seq(member).is_some() {
            continue;
        }
        let name = loop {
            let candidate = format!("l{counter}");
            counter += 1;
            if !user.contains(&candidate) {
                break candidate;
            }
        };
        names.insert(member.clone(), name.clone());
        fresh.push((name, member.clone()));
    }
    LabelRegistry {
        user: user.clone(),
        names,
        fresh,
    }
}

impl LabelRegistry {
    /// The term standing for a closure member.
    pub fn term(&self, f: &Formula) -> Result<LabelTerm, TranslateError> {
        match f {
            Formula::Truth => Ok(LabelTerm::True),
            Formula::Falsity => Ok(LabelTerm::False),
            Formula::Atom(name) => Ok(LabelTerm::named(name)),
            Formula::Diamond(..) | Formula::Box(..) => {
                if let Some(unrolled) = unroll_seq(f) {
                    return self.term(&unrolled);
                }
                self.names
                    .get(f)
                    .map(|n| LabelTerm::named(n))
                    .ok_or_else(|| TranslateError::NotInClosure(f.clone()))
            }
        }
    }

    /// Fresh labels with a representative formula each, in numbering order.
    pub fn fresh_labels(&self) -> &[(String, Formula)] {
        &self.fresh
    }

    pub fn user_alphabet(&self) -> &Alphabet {
        &self.user
    }

    /// User atoms plus all fresh labels.
    pub fn extended_alphabet(&self) -> Alphabet {
        self.user
            .union(&Alphabet::new(self.fresh.iter().map(|(n, _)| n.clone())))
    }
}

/// Where an axiom applies: at the first state, at every state, at every
/// non-initial state (with access to the previous one), or at the last.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shell {
    Initial,
    Global,
    Dynamic,
    Final,
}

/// The propositional cores the defining axioms use.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoreShape {
    Fact(LabelTerm),
    Negated(LabelTerm),
    Equiv(LabelTerm, Rhs),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Rhs {
    Term(LabelTerm),
    And(LabelTerm, LabelTerm),
    Or(LabelTerm, LabelTerm),
    Implies(LabelTerm, LabelTerm),
}

/// A defining axiom: a shell around a small propositional core.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntermediateFormula {
    pub shell: Shell,
    pub core: CoreShape,
}

fn axiom(shell: Shell, core: CoreShape) -> IntermediateFormula {
    IntermediateFormula { shell, core }
}

/// Conservative bounds on the net displacement of one pass through a path:
/// how far it can move the evaluation point, with negative values pointing
/// toward the initial state. `i64::MIN`/`i64::MAX` stand in for unbounded.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Span {
    lo: i64,
    hi: i64,
}

impl Span {
    /// Every walk ends where it started, so the relation sits inside the
    /// identity (on a linear trace, net displacement zero pins the
    /// endpoints together).
    fn is_stationary(self) -> bool {
        self == Span { lo: 0, hi: 0 }
    }

    /// Every walk moves strictly toward the end of the trace.
    fn is_forward(self) -> bool {
        self.lo >= 1
    }

    /// Every walk moves strictly toward the start of the trace.
    fn is_backward(self) -> bool {
        self.hi <= -1
    }
}

fn span(path: &Path) -> Span {
    match path {
        Path::Step => Span { lo: 1, hi: 1 },
        Path::Test(_) => Span { lo: 0, hi: 0 },
        Path::Converse(inner) => {
            let s = span(inner);
            Span {
                lo: s.hi.saturating_neg(),
                hi: s.lo.saturating_neg(),
            }
        }
        Path::Choice(a, b) => {
            let (sa, sb) = (span(a), span(b));
            Span {
                lo: sa.lo.min(sb.lo),
                hi: sa.hi.max(sb.hi),
            }
        }
        Path::Seq(a, b) => {
            let (sa, sb) = (span(a), span(b));
            Span {
                lo: sa.lo.saturating_add(sb.lo),
                hi: sa.hi.saturating_add(sb.hi),
            }
        }
        Path::Star(inner) => {
            let s = span(inner);
            Span {
                lo: if s.lo >= 0 { 0 } else { i64::MIN },
                hi: if s.hi <= 0 { 0 } else { i64::MAX },
            }
        }
    }
}

/// An exact split of a path's relation into a provably stationary part (a
/// subset of the identity) and alternatives covering every walk that may
/// move.
struct SplitPath {
    stationary: Option<Path>,
    moving: Vec<Path>,
}

/// Bails out of splitting once an alternative list stops being small.
const SPLIT_CAP: usize = 64;

fn esplit(path: &Path) -> Option<SplitPath> {
    let s = span(path);
    if s.is_stationary() {
        return Some(SplitPath {
            stationary: Some(path.clone()),
            moving: vec![],
        });
    }
    if s.is_forward() || s.is_backward() {
        return Some(SplitPath {
            stationary: None,
            moving: vec![path.clone()],
        });
    }
    match path {
        Path::Choice(a, b) => {
            let (sa, sb) = (esplit(a)?, esplit(b)?);
            let stationary = match (sa.stationary, sb.stationary) {
                (Some(x), Some(y)) => Some(choice(x, y)),
                (x, y) => x.or(y),
            };
            let mut moving = sa.moving;
            moving.extend(sb.moving);
            (moving.len() <= SPLIT_CAP).then_some(SplitPath { stationary, moving })
        }
        // `x* = true? + x;x*`, with the reflexive part made explicit.
        Path::Star(x) => Some(SplitPath {
            stationary: Some(test(Formula::Truth)),
            moving: vec![seq((**x).clone(), path.clone())],
        }),
        Path::Seq(a, b) => {
            let (sa, sb) = (esplit(a)?, esplit(b)?);
            let mut moving = Vec::new();
            for x in &sa.moving {
                for y in &sb.moving {
                    moving.push(seq(x.clone(), y.clone()));
                }
            }
            // A stationary factor shrinks into the other side's walks, so
            // pairing it with each of them keeps the split exact.
            if let Some(z) = &sa.stationary {
                moving.extend(sb.moving.iter().map(|y| seq(z.clone(), y.clone())));
            }
            if let Some(z) = &sb.stationary {
                moving.extend(sa.moving.iter().map(|x| seq(x.clone(), z.clone())));
            }
            let stationary = match (sa.stationary, sb.stationary) {
                (Some(x), Some(y)) => Some(seq(x, y)),
                _ => None,
            };
            (moving.len() <= SPLIT_CAP).then_some(SplitPath { stationary, moving })
        }
        // Steps, tests and lone converse steps always classify by span;
        // compound converses never reach here on converse normal forms.
        _ => Some(SplitPath {
            stationary: None,
            moving: vec![path.clone()],
        }),
    }
}

/// Rewrites `body*` into an equivalent iteration whose body moves in one
/// fixed direction, or into a plain test when the body never moves. The
/// anchored fixpoint axioms are only sound for such loops: an iteration
/// that can stand still or turn around admits circular support that the
/// axioms cannot rule out. Every rewrite used here is a relation identity,
/// valid for the three-valued path matrices as well: stationary
/// alternatives are absorbed by the reflexive closure, nested iterations
/// flatten into the outer one, and zero-crossing sequences are split into
/// their stationary and moving parts.
fn orient_star(body: Path) -> Result<Path, TranslateError> {
    let original = star(body.clone());
    let mut queue = vec![body];
    let mut forward: Vec<Path> = Vec::new();
    let mut backward: Vec<Path> = Vec::new();
    let mut fuel: usize = 16;
    while let Some(part) = queue.pop() {
        if forward.len() + backward.len() + queue.len() > SPLIT_CAP {
            return Err(TranslateError::TwoWayStar(original));
        }
        let s = span(&part);
        if s.is_stationary() {
            continue;
        }
        if s.is_forward() {
            forward.push(part);
        } else if s.is_backward() {
            backward.push(part);
        } else {
            match &part {
                Path::Choice(a, b) => {
                    queue.push((**b).clone());
                    queue.push((**a).clone());
                }
                Path::Star(x) => queue.push((**x).clone()),
                Path::Seq(..) => {
                    if fuel == 0 {
                        return Err(TranslateError::TwoWayStar(original));
                    }
                    fuel -= 1;
                    let split =
                        esplit(&part).ok_or_else(|| TranslateError::TwoWayStar(original.clone()))?;
                    queue.extend(split.moving);
                }
                Path::Converse(_) => return Err(TranslateError::NotConverseNormal),
                Path::Step | Path::Test(_) => unreachable!("classified by span"),
            }
        }
    }
    Ok(match (rebuild_choice(forward), rebuild_choice(backward)) {
        (Some(f), None) => star(f),
        (None, Some(b)) => star(b),
        (None, None) => test(Formula::Truth),
        (Some(_), Some(_)) => return Err(TranslateError::TwoWayStar(original)),
    })
}

fn rebuild_choice(mut parts: Vec<Path>) -> Option<Path> {
    parts.reverse();
    let mut it = parts.into_iter();
    let first = it.next()?;
    Some(it.fold(first, choice))
}

/// Rewrites every iteration body in the formula into a one-directional
/// form, leaving everything else untouched. Fails on bodies that genuinely
/// move both ways; those have no equivalent of the required shape.
fn orient_formula(f: &Formula) -> Result<Formula, TranslateError> {
    Ok(match f {
        Formula::Truth | Formula::Falsity | Formula::Atom(_) => f.clone(),
        Formula::Diamond(p, b) => dia(orient_path(p)?, orient_formula(b)?),
        Formula::Box(p, b) => boxm(orient_path(p)?, orient_formula(b)?),
    })
}

fn orient_path(p: &Path) -> Result<Path, TranslateError> {
    Ok(match p {
        Path::Step => Path::Step,
        Path::Test(t) => test(orient_formula(t)?),
        Path::Choice(a, b) => choice(orient_path(a)?, orient_path(b)?),
        Path::Seq(a, b) => seq(orient_path(a)?, orient_path(b)?),
        Path::Converse(x) => converse(orient_path(x)?),
        Path::Star(x) => orient_star(orient_path(x)?)?,
    })
}

/// The defining axioms of one modal closure member.
pub fn eta(
    mu: &Formula,
    reg: &LabelRegistry,
) -> Result<Vec<IntermediateFormula>, TranslateError> {
    let (path, body, is_box): (&Path, &Formula, bool) = match mu {
        Formula::Diamond(p, b) => (p, b, false),
        Formula::Box(p, b) => (p, b, true),
        _ => return Err(TranslateError::NotModal),
    };
    let l_mu = reg.term(mu)?;
    Ok(match path {
        // The label holds one step after its body: `'L_mu <-> L_phi` at
        // every non-initial state. A diamond additionally fails at the last
        // state (no successor), a box holds there vacuously.
        Path::Step => {
            let l_phi = reg.term(body)?;
            vec![
                axiom(
                    Shell::Dynamic,
                    CoreShape::Equiv(l_mu.clone().shifted(), Rhs::Term(l_phi)),
                ),
                axiom(
                    Shell::Final,
                    if is_box {
                        CoreShape::Fact(l_mu)
                    } else {
                        CoreShape::Negated(l_mu)
                    },
                ),
            ]
        }
        Path::Converse(inner) => {
            if !matches!(**inner, Path::Step) {
                return Err(TranslateError::NotConverseNormal);
            }
            // Mirror image: the label reads its body from the previous
            // state, and the initial state settles the boundary case.
            let l_phi = reg.term(body)?;
            vec![
                axiom(
                    Shell::Dynamic,
                    CoreShape::Equiv(l_mu.clone(), Rhs::Term(l_phi.shifted())),
                ),
                axiom(
                    Shell::Initial,
                    if is_box {
                        CoreShape::Fact(l_mu)
                    } else {
                        CoreShape::Negated(l_mu)
                    },
                ),
            ]
        }
        Path::Test(t) => {
            let l_t = reg.term(t)?;
            let l_phi = reg.term(body)?;
            let rhs = if is_box {
                Rhs::Implies(l_t, l_phi)
            } else {
                Rhs::And(l_t, l_phi)
            };
            vec![axiom(Shell::Global, CoreShape::Equiv(l_mu, rhs))]
        }
        Path::Choice(left, right) => {
            let rebuild = |p: &Path| {
                if is_box {
                    boxm(p.clone(), body.clone())
                } else {
                    dia(p.clone(), body.clone())
                }
            };
            let l_left = reg.term(&rebuild(left))?;
            let l_right = reg.term(&rebuild(right))?;
            let rhs = if is_box {
                Rhs::And(l_left, l_right)
            } else {
                Rhs::Or(l_left, l_right)
            };
            vec![axiom(Shell::Global, CoreShape::Equiv(l_mu, rhs))]
        }
        // A sequence is defined exactly like its unrolled form (they share
        // a label, so this recursion produces the same axioms).
        Path::Seq(..) => eta(&unroll_seq(mu).expect("sequence shape"), reg)?,
        Path::Star(inner) => {
            // The label is a fixpoint of the unrolling: body now, or (for a
            // box: and) one turn of the loop. The loop degenerates at the
            // state its body cannot leave — the last state for a
            // forward-moving body, the first for a backward-moving one —
            // and there the label collapses to its body. That anchor is
            // what makes the fixpoint equations uniquely solvable, so a
            // body moving both ways is rejected (see [`TranslateError`]).
            let anchor = match span(inner) {
                s if s.is_forward() => Shell::Final,
                s if s.is_backward() => Shell::Initial,
                _ => return Err(TranslateError::TwoWayStar(path.clone())),
            };
            let unrolled = if is_box {
                boxm((**inner).clone(), mu.clone())
            } else {
                dia((**inner).clone(), mu.clone())
            };
            let l_phi = reg.term(body)?;
            let l_alpha = reg.term(&unrolled)?;
            let rhs = if is_box {
                Rhs::And(l_phi.clone(), l_alpha)
            } else {
                Rhs::Or(l_phi.clone(), l_alpha)
            };
            vec![
                axiom(Shell::Global, CoreShape::Equiv(l_mu.clone(), rhs)),
                axiom(anchor, CoreShape::Equiv(l_mu, Rhs::Term(l_phi))),
            ]
        }
    })
}

/// The full axiom set of `gamma`: the bare fact for its own label, then the
/// defining axioms of every modal closure member in insertion order
/// (sequence members are skipped; their axioms are those of their unrolled
/// form, which is itself a member). Iteration bodies are first rewritten
/// into one-directional form; bodies that genuinely move both ways are
/// rejected.
pub fn sigma(
    gamma: &Formula,
) -> Result<(Vec<IntermediateFormula>, LabelRegistry), TranslateError> {
    sigma_over(gamma, &Alphabet::of_formula(gamma))
}

fn sigma_over(
    gamma: &Formula,
    user: &Alphabet,
) -> Result<(Vec<IntermediateFormula>, LabelRegistry), TranslateError> {
    let gamma = orient_formula(gamma)?;
    let closure = fl_closure(&gamma).map_err(|_| TranslateError::NotConverseNormal)?;
    let registry = label_registry(&closure, user);
    let mut out = vec![axiom(
        Shell::Initial,
        CoreShape::Fact(registry.term(&gamma)?),
    )];
    for member in closure.iter() {
        let is_modal = matches!(member, Formula::Diamond(..) | Formula::Box(..));
        if !is_modal || unroll_seq(member).is_some() {
            continue;
        }
        out.extend(eta(member, &registry)?);
    }
    Ok((out, registry))
}

/// Rule flavours, by shell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum RuleKind {
    Initial,
    Dynamic,
    Final,
    Global,
}

/// One of the four literal shapes `a`, `!a`, `'a`, `!'a`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct TemporalLiteral {
    pub negated: bool,
    pub prev: bool,
    pub atom: String,
}

/// A disjunctive rule `b_1 & ... & b_n -> a_1 | ... | a_m` (either side may
/// be empty: an empty body is a fact, an empty head a constraint).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    pub kind: RuleKind,
    pub body: Vec<TemporalLiteral>,
    pub head: Vec<TemporalLiteral>,
}

impl Rule {
    /// Previous-state literals belong to dynamic rules only.
    pub fn is_well_formed(&self) -> bool {
        self.kind == RuleKind::Dynamic
            || self.body.iter().chain(&self.head).all(|l| !l.prev)
    }
}

enum Folded {
    Constant(bool),
    Literal(TemporalLiteral),
}

fn fold_term(negated: bool, term: &LabelTerm) -> Folded {
    match term {
        LabelTerm::True => Folded::Constant(!negated),
        LabelTerm::False => Folded::Constant(negated),
        LabelTerm::Atom { name, prev } => Folded::Literal(TemporalLiteral {
            negated,
            prev: *prev,
            atom: name.clone(),
        }),
    }
}

/// Unfolds one axiom into rules.
///
/// Biconditionals split by the usual strong-equivalence patterns; the
/// implication core needs the classical excluded-middle disjunct in a head
/// to stay faithful under here-and-there semantics. Constant terms fold
/// away: a true body literal or false head literal disappears, a false body
/// or true head discharges the whole rule.
pub fn unfold(f: &IntermediateFormula) -> Vec<Rule> {
    let pos = |t: &LabelTerm| -> (bool, LabelTerm) { (false, t.clone()) };
    let neg = |t: &LabelTerm| -> (bool, LabelTerm) { (true, t.clone()) };
    let kind = match f.shell {
        Shell::Initial => RuleKind::Initial,
        Shell::Global => RuleKind::Global,
        Shell::Dynamic => RuleKind::Dynamic,
        Shell::Final => RuleKind::Final,
    };
    let raw: Vec<(Vec<(bool, LabelTerm)>, Vec<(bool, LabelTerm)>)> = match &f.core {
        CoreShape::Fact(t) => vec![(vec![], vec![pos(t)])],
        CoreShape::Negated(t) => vec![(vec![pos(t)], vec![])],
        CoreShape::Equiv(t, Rhs::Term(u)) => vec![
            (vec![pos(t)], vec![pos(u)]),
            (vec![pos(u)], vec![pos(t)]),
        ],
        CoreShape::Equiv(t, Rhs::And(x, y)) => vec![
            (vec![pos(t)], vec![pos(x)]),
            (vec![pos(t)], vec![pos(y)]),
            (vec![pos(x), pos(y)], vec![pos(t)]),
        ],
        CoreShape::Equiv(t, Rhs::Or(x, y)) => vec![
            (vec![pos(t)], vec![pos(x), pos(y)]),
            (vec![pos(x)], vec![pos(t)]),
            (vec![pos(y)], vec![pos(t)]),
        ],
        CoreShape::Equiv(t, Rhs::Implies(x, y)) => vec![
            (vec![pos(t), pos(x)], vec![pos(y)]),
            (vec![pos(y)], vec![pos(t)]),
            (vec![neg(x)], vec![pos(t)]),
            (vec![], vec![pos(t), pos(x), neg(y)]),
        ],
    };
    let mut rules = Vec::new();
    'rules: for (body_terms, head_terms) in raw {
        let mut body = Vec::new();
        let mut head = Vec::new();
        for (negated, term) in &body_terms {
            match fold_term(*negated, term) {
                Folded::Constant(true) => {}
                Folded::Constant(false) => continue 'rules,
                Folded::Literal(l) => body.push(l),
            }
        }
        for (negated, term) in &head_terms {
            match fold_term(*negated, term) {
                Folded::Constant(false) => {}
                Folded::Constant(true) => continue 'rules,
                Folded::Literal(l) => head.push(l),
            }
        }
        rules.push(Rule { kind, body, head });
    }
    rules
}

/// A temporal logic program over a user alphabet and its label extension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TemporalProgram {
    pub rules: Vec<Rule>,
    /// The user atoms.
    pub alphabet: Alphabet,
    /// User atoms plus fresh labels.
    pub extended: Alphabet,
    pub registry: LabelRegistry,
}

/// Translates `gamma` into a temporal logic program. Converse normal form
/// is applied first and iteration bodies are rewritten into
/// one-directional form, so the only formulas rejected are those with an
/// iteration body that genuinely moves both ways.
pub fn translate(gamma: &Formula) -> Result<TemporalProgram, TranslateError> {
    translate_over(gamma, &Alphabet::of_formula(gamma))
}

/// As [`translate`], but fresh labels also avoid the given alphabet. Useful
/// when the program will be combined with other formulas.
pub fn translate_over(
    gamma: &Formula,
    user: &Alphabet,
) -> Result<TemporalProgram, TranslateError> {
    let normalized = converse_normal_form(gamma);
    let user = user.union(&Alphabet::of_formula(&normalized));
    let (axioms, registry) = sigma_over(&normalized, &user)?;
    Ok(build_program(&axioms, registry, user))
}

/// Translates `gamma` read as a constraint: the program forbids `gamma`
/// instead of asserting it (the label fact becomes `L_gamma -> bottom`).
pub fn translate_as_constraint(gamma: &Formula) -> Result<TemporalProgram, TranslateError> {
    let normalized = converse_normal_form(gamma);
    let user = Alphabet::of_formula(&normalized);
    let (mut axioms, registry) = sigma_over(&normalized, &user)?;
    match &mut axioms[0] {
        IntermediateFormula {
            shell: Shell::Initial,
            core,
        } => {
            let term = match core {
                CoreShape::Fact(t) => t.clone(),
                _ => unreachable!("sigma starts with the label fact"),
            };
            *core = CoreShape::Negated(term);
        }
        _ => unreachable!("sigma starts with the label fact"),
    }
    Ok(build_program(&axioms, registry, user))
}

fn build_program(
    axioms: &[IntermediateFormula],
    registry: LabelRegistry,
    user: Alphabet,
) -> TemporalProgram {
    TemporalProgram {
        rules: axioms.iter().flat_map(unfold).collect(),
        alphabet: user,
        extended: registry.extended_alphabet(),
        registry,
    }
}

fn literal_as_formula(l: &TemporalLiteral) -> Formula {
    let mut f = atom(&l.atom);
    if l.prev {
        f = prev(f);
    }
    if l.negated {
        f = not(f);
    }
    f
}

fn conjunction(literals: &[TemporalLiteral]) -> Formula {
    literals
        .iter()
        .rev()
        .fold(None, |acc, l| {
            let lf = literal_as_formula(l);
            Some(match acc {
                None => lf,
                Some(rest) => and(lf, rest),
            })
        })
        .unwrap_or(Formula::Truth)
}

fn disjunction(literals: &[TemporalLiteral]) -> Formula {
    literals
        .iter()
        .rev()
        .fold(None, |acc, l| {
            let lf = literal_as_formula(l);
            Some(match acc {
                None => lf,
                Some(rest) => or(lf, rest),
            })
        })
        .unwrap_or(Formula::Falsity)
}

/// A rule as the dynamic formulas it abbreviates: the bare implication for
/// initial rules, under `wnext always` for dynamic rules, guarded by the
/// final marker for final rules, and the initial/dynamic pair for global
/// rules. The initial component of a global rule reuses the same core, so
/// it must contain no previous-state literals (it never does: only step
/// axioms produce them, and those are dynamic).
pub fn rule_as_formulas(rule: &Rule) -> Vec<Formula> {
    let core = implies(conjunction(&rule.body), disjunction(&rule.head));
    match rule.kind {
        RuleKind::Initial => vec![core],
        RuleKind::Dynamic => vec![wnext(always(core))],
        RuleKind::Final => vec![always(implies(trace_final(), core))],
        RuleKind::Global => {
            debug_assert!(rule.is_well_formed());
            vec![core.clone(), wnext(always(core))]
        }
    }
}

/// The whole program as a list of dynamic formulas, for evaluation.
pub fn program_as_formulas(program: &TemporalProgram) -> Vec<Formula> {
    program.rules.iter().flat_map(rule_as_formulas).collect()
}

/// One axiom as a dynamic formula, for checking the unfolding against it.
pub fn intermediate_as_formula(f: &IntermediateFormula) -> Formula {
    let term = |t: &LabelTerm| -> Formula {
        match t {
            LabelTerm::True => Formula::Truth,
            LabelTerm::False => Formula::Falsity,
            LabelTerm::Atom { name, prev: p } => {
                if *p {
                    prev(atom(name))
                } else {
                    atom(name)
                }
            }
        }
    };
    let core = match &f.core {
        CoreShape::Fact(t) => term(t),
        CoreShape::Negated(t) => not(term(t)),
        CoreShape::Equiv(t, rhs) => {
            let lhs = term(t);
            let r = match rhs {
                Rhs::Term(u) => term(u),
                Rhs::And(x, y) => and(term(x), term(y)),
                Rhs::Or(x, y) => or(term(x), term(y)),
                Rhs::Implies(x, y) => implies(term(x), term(y)),
            };
            and(implies(lhs.clone(), r.clone()), implies(r, lhs))
        }
    };
    match f.shell {
        Shell::Initial => core,
        Shell::Global => always(core),
        Shell::Dynamic => wnext(always(core)),
        Shell::Final => always(implies(trace_final(), core)),
    }
}
