//! Traces, accessibility relations, and satisfaction.
//!
//! A trace here is a *here-and-there* trace: two sequences of states
//! `H_i ⊆ T_i` of the same length. The `T` sequence says what may hold, the
//! `H` sequence what is actually founded. Total traces (`H = T`) recover the
//! classical reading.
//!
//! Satisfaction comes in three independently implemented routes:
//!
//! * [`satisfies`] walks the model-theoretic definition directly, computing
//!   accessibility relations per path (boxes quantify over the relation of
//!   the trace itself *and* of its total counterpart);
//! * [`satisfies_classical`] is a plain finite-trace evaluator over the `T`
//!   sequence, sharing no machinery with the other two;
//! * [`trivalue`] evaluates the equivalent three-valued (Gödel) valuation,
//!   where paths take values in `{0, 1, 2}` and iteration is a closure in
//!   the (max, min) semiring.
//!
//! Keeping the routes separate is deliberate: the test suite checks them
//! against each other on large random corpora.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::ast::{Alphabet, Formula, Path};

/// Traces longer than this are rejected; relation rows are single machine
/// words and enumeration budgets keep realistic lengths far below it.
pub const MAX_TRACE_LEN: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TraceError {
    /// Traces have at least one state.
    Empty,
    /// The here and there sequences must have the same length.
    LengthMismatch { here: usize, there: usize },
    /// `H_i` must be a subset of `T_i`.
    HereNotSubset { index: usize },
    TooLong { lambda: usize },
}

impl core::fmt::Display for TraceError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            TraceError::Empty => write!(f, "a trace needs at least one state"),
            TraceError::LengthMismatch { here, there } => write!(
                f,
                "here sequence has {here} state(s) but there sequence has {there}"
            ),
            TraceError::HereNotSubset { index } => {
                write!(f, "state {index}: here component is not a subset of there")
            }
            TraceError::TooLong { lambda } => {
                write!(f, "trace length {lambda} exceeds the supported maximum {MAX_TRACE_LEN}")
            }
        }
    }
}

impl core::error::Error for TraceError {}

/// A set of atoms holding at one time point.
pub type State = BTreeSet<String>;

/// A here-and-there trace of length `lambda() >= 1`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Trace {
    here: Vec<State>,
    there: Vec<State>,
}

impl Trace {
    pub fn new(here: Vec<State>, there: Vec<State>) -> Result<Trace, TraceError> {
        if here.len() != there.len() {
            return Err(TraceError::LengthMismatch {
                here: here.len(),
                there: there.len(),
            });
        }
        if here.is_empty() {
            return Err(TraceError::Empty);
        }
        if here.len() > MAX_TRACE_LEN {
            return Err(TraceError::TooLong { lambda: here.len() });
        }
        for (i, (h, t)) in here.iter().zip(&there).enumerate() {
            if !h.is_subset(t) {
                return Err(TraceError::HereNotSubset { index: i });
            }
        }
        Ok(Trace { here, there })
    }

    /// A total trace: both components equal.
    pub fn total(states: Vec<State>) -> Result<Trace, TraceError> {
        Trace::new(states.clone(), states)
    }

    pub fn lambda(&self) -> usize {
        self.here.len()
    }

    pub fn here(&self, k: usize) -> &State {
        &self.here[k]
    }

    pub fn there(&self, k: usize) -> &State {
        &self.there[k]
    }

    pub fn is_total(&self) -> bool {
        self.here == self.there
    }

    /// The total trace `<T, T>` this trace is compared against.
    pub fn to_total(&self) -> Trace {
        Trace {
            here: self.there.clone(),
            there: self.there.clone(),
        }
    }

    /// True when the here component is strictly below the there component:
    /// pointwise included and somewhere properly so.
    pub fn here_strictly_below_there(&self) -> bool {
        self.here != self.there
    }

    /// Drops every atom outside `alphabet`, pointwise.
    pub fn restrict(&self, alphabet: &Alphabet) -> Trace {
        let filter = |states: &[State]| -> Vec<State> {
            states
                .iter()
                .map(|s| s.iter().filter(|a| alphabet.contains(a)).cloned().collect())
                .collect()
        };
        Trace {
            here: filter(&self.here),
            there: filter(&self.there),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SemanticsError {
    PointOutOfRange { k: usize, lambda: usize },
}

impl core::fmt::Display for SemanticsError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            SemanticsError::PointOutOfRange { k, lambda } => {
                write!(f, "time point {k} out of range for a trace of length {lambda}")
            }
        }
    }
}

impl core::error::Error for SemanticsError {}

/// A set of time-point pairs `(k, i)` within `0..lambda`, stored as one
/// bitmask row per source point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    lambda: usize,
    rows: Vec<u64>,
}

impl Relation {
    pub fn empty(lambda: usize) -> Relation {
        debug_assert!(lambda <= MAX_TRACE_LEN);
        Relation {
            lambda,
            rows: vec![0; lambda],
        }
    }

    pub fn identity(lambda: usize) -> Relation {
        let mut r = Relation::empty(lambda);
        for k in 0..lambda {
            r.insert(k, k);
        }
        r
    }

    /// The step relation, connecting each point to its successor.
    pub fn successor(lambda: usize) -> Relation {
        let mut r = Relation::empty(lambda);
        for k in 0..lambda.saturating_sub(1) {
            r.insert(k, k + 1);
        }
        r
    }

    pub fn lambda(&self) -> usize {
        self.lambda
    }

    pub fn insert(&mut self, k: usize, i: usize) {
        debug_assert!(k < self.lambda && i < self.lambda);
        self.rows[k] |= 1 << i;
    }

    pub fn contains(&self, k: usize, i: usize) -> bool {
        k < self.lambda && i < self.lambda && self.rows[k] >> i & 1 == 1
    }

    pub fn union(&self, other: &Relation) -> Relation {
        debug_assert_eq!(self.lambda, other.lambda);
        Relation {
            lambda: self.lambda,
            rows: self
                .rows
                .iter()
                .zip(&other.rows)
                .map(|(a, b)| a | b)
                .collect(),
        }
    }

    /// Relational composition: `(k, j)` when some `i` has `(k, i)` here and
    /// `(i, j)` in `other`.
    pub fn compose(&self, other: &Relation) -> Relation {
        debug_assert_eq!(self.lambda, other.lambda);
        let mut out = Relation::empty(self.lambda);
        for k in 0..self.lambda {
            let mut row = self.rows[k];
            while row != 0 {
                let i = row.trailing_zeros() as usize;
                row &= row - 1;
                out.rows[k] |= other.rows[i];
            }
        }
        out
    }

    pub fn transpose(&self) -> Relation {
        let mut out = Relation::empty(self.lambda);
        for k in 0..self.lambda {
            for i in 0..self.lambda {
                if self.contains(k, i) {
                    out.insert(i, k);
                }
            }
        }
        out
    }

    /// Reflexive-transitive closure. Optimal connections lie on simple
    /// paths, so `lambda` rounds of composition always reach the fixpoint.
    pub fn star(&self) -> Relation {
        let mut out = Relation::identity(self.lambda).union(self);
        for _ in 0..self.lambda {
            let next = out.union(&out.compose(self));
            if next == out {
                break;
            }
            out = next;
        }
        out
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for k in 0..self.lambda {
            for i in 0..self.lambda {
                if self.contains(k, i) {
                    out.push((k, i));
                }
            }
        }
        out
    }

    pub fn is_subset(&self, other: &Relation) -> bool {
        self.rows
            .iter()
            .zip(&other.rows)
            .all(|(a, b)| a & !b == 0)
    }
}

/// Which component of the trace atoms are read from. `There` is the total
/// counterpart `<T, T>` of the trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum View {
    Here,
    There,
}

/// Per-trace evaluation context: memoizes one relation per (path, view).
pub(crate) struct Evaluator<'t> {
    trace: &'t Trace,
    relations: BTreeMap<(Path, View), Relation>,
}

impl<'t> Evaluator<'t> {
    pub(crate) fn new(trace: &'t Trace) -> Evaluator<'t> {
        Evaluator {
            trace,
            relations: BTreeMap::new(),
        }
    }

    pub(crate) fn holds(&mut self, k: usize, f: &Formula) -> bool {
        self.sat(View::Here, k, f)
    }

    fn state(&self, view: View, k: usize) -> &State {
        match view {
            View::Here => self.trace.here(k),
            View::There => self.trace.there(k),
        }
    }

    fn sat(&mut self, view: View, k: usize, f: &Formula) -> bool {
        match f {
            Formula::Truth => true,
            Formula::Falsity => false,
            Formula::Atom(name) => self.state(view, k).contains(name),
            Formula::Diamond(p, body) => {
                let rel = self.relation(view, p);
                (0..self.trace.lambda()).any(|i| rel.contains(k, i) && self.sat(view, i, body))
            }
            Formula::Box(p, body) => {
                // A box is a box in *both* worlds: the body must hold along
                // the trace's own relation and along the relation of its
                // total counterpart.
                let rel = self.relation(view, p);
                let here_ok = (0..self.trace.lambda())
                    .all(|i| !rel.contains(k, i) || self.sat(view, i, body));
                if !here_ok {
                    return false;
                }
                if view == View::There {
                    return true;
                }
                let total_rel = self.relation(View::There, p);
                (0..self.trace.lambda())
                    .all(|i| !total_rel.contains(k, i) || self.sat(View::There, i, body))
            }
        }
    }

    fn relation(&mut self, view: View, p: &Path) -> Relation {
        if let Some(r) = self.relations.get(&(p.clone(), view)) {
            return r.clone();
        }
        let lambda = self.trace.lambda();
        let rel = match p {
            Path::Step => Relation::successor(lambda),
            Path::Test(body) => {
                let mut r = Relation::empty(lambda);
                for k in 0..lambda {
                    if self.sat(view, k, body) {
                        r.insert(k, k);
                    }
                }
                r
            }
            Path::Choice(l, r) => self.relation(view, l).union(&self.relation(view, r)),
            Path::Seq(l, r) => self.relation(view, l).compose(&self.relation(view, r)),
            Path::Star(inner) => self.relation(view, inner).star(),
            Path::Converse(inner) => self.relation(view, inner).transpose(),
        };
        self.relations.insert((p.clone(), view), rel.clone());
        rel
    }
}

fn check_point(trace: &Trace, k: usize) -> Result<(), SemanticsError> {
    if k < trace.lambda() {
        Ok(())
    } else {
        Err(SemanticsError::PointOutOfRange {
            k,
            lambda: trace.lambda(),
        })
    }
}

/// The accessibility relation of `path` over `trace`, with tests evaluated
/// by here-and-there satisfaction on that trace.
pub fn accessibility(path: &Path, trace: &Trace) -> Relation {
    Evaluator::new(trace).relation(View::Here, path)
}

/// Here-and-there satisfaction at point `k`.
pub fn satisfies(trace: &Trace, k: usize, f: &Formula) -> Result<bool, SemanticsError> {
    check_point(trace, k)?;
    Ok(Evaluator::new(trace).holds(k, f))
}

/// Whether every formula of `theory` holds at point 0.
pub(crate) fn theory_holds(trace: &Trace, theory: &[Formula]) -> bool {
    let mut ev = Evaluator::new(trace);
    theory.iter().all(|f| ev.holds(0, f))
}

/// Classical finite-trace satisfaction, evaluated over the `T` component.
///
/// This is a self-contained evaluator: it builds path connections as plain
/// pair sets and never consults the here component, so it can serve as an
/// independent oracle for the total case.
pub fn satisfies_classical(trace: &Trace, k: usize, f: &Formula) -> Result<bool, SemanticsError> {
    check_point(trace, k)?;
    Ok(classical_holds(trace, k, f))
}

fn classical_holds(trace: &Trace, k: usize, f: &Formula) -> bool {
    match f {
        Formula::Truth => true,
        Formula::Falsity => false,
        Formula::Atom(name) => trace.there(k).contains(name),
        Formula::Diamond(p, body) => classical_pairs(trace, p)
            .iter()
            .any(|&(a, b)| a == k && classical_holds(trace, b, body)),
        Formula::Box(p, body) => classical_pairs(trace, p)
            .iter()
            .all(|&(a, b)| a != k || classical_holds(trace, b, body)),
    }
}

fn classical_pairs(trace: &Trace, p: &Path) -> BTreeSet<(usize, usize)> {
    let lambda = trace.lambda();
    match p {
        Path::Step => (0..lambda.saturating_sub(1)).map(|i| (i, i + 1)).collect(),
        Path::Test(body) => (0..lambda)
            .filter(|&i| classical_holds(trace, i, body))
            .map(|i| (i, i))
            .collect(),
        Path::Choice(l, r) => {
            let mut out = classical_pairs(trace, l);
            out.extend(classical_pairs(trace, r));
            out
        }
        Path::Seq(l, r) => {
            let left = classical_pairs(trace, l);
            let right = classical_pairs(trace, r);
            let mut out = BTreeSet::new();
            for &(a, m) in &left {
                for &(m2, b) in &right {
                    if m == m2 {
                        out.insert((a, b));
                    }
                }
            }
            out
        }
        Path::Star(inner) => {
            let base = classical_pairs(trace, inner);
            let mut out: BTreeSet<(usize, usize)> = (0..lambda).map(|i| (i, i)).collect();
            loop {
                let mut grew = false;
                let mut next = out.clone();
                for &(a, m) in &out {
                    for &(m2, b) in &base {
                        if m == m2 && next.insert((a, b)) {
                            grew = true;
                        }
                    }
                }
                out = next;
                if !grew {
                    break;
                }
            }
            out
        }
        Path::Converse(inner) => classical_pairs(trace, inner)
            .into_iter()
            .map(|(a, b)| (b, a))
            .collect(),
    }
}

/// The three truth values: `0` false, `1` justified only in the there
/// component, `2` fully justified.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ThreeVal {
    Zero = 0,
    One = 1,
    Two = 2,
}

impl ThreeVal {
    /// Gödel implication: `2` when the premise does not exceed the
    /// conclusion, otherwise the conclusion itself.
    pub fn imp(self, other: ThreeVal) -> ThreeVal {
        if self <= other {
            ThreeVal::Two
        } else {
            other
        }
    }

    pub fn neg(self) -> ThreeVal {
        self.imp(ThreeVal::Zero)
    }

    pub fn as_u8(self) -> u8 {
        self as u8
    }
}

impl core::fmt::Display for ThreeVal {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "{}", *self as u8)
    }
}

fn min3(a: ThreeVal, b: ThreeVal) -> ThreeVal {
    if a <= b {
        a
    } else {
        b
    }
}

fn max3(a: ThreeVal, b: ThreeVal) -> ThreeVal {
    if a >= b {
        a
    } else {
        b
    }
}

/// A lambda-by-lambda matrix of three-valued path values.
#[derive(Debug, Clone, PartialEq, Eq)]
struct TriMatrix {
    lambda: usize,
    cells: Vec<ThreeVal>,
}

impl TriMatrix {
    fn filled(lambda: usize, v: ThreeVal) -> TriMatrix {
        TriMatrix {
            lambda,
            cells: vec![v; lambda * lambda],
        }
    }

    fn get(&self, k: usize, j: usize) -> ThreeVal {
        self.cells[k * self.lambda + j]
    }

    fn set(&mut self, k: usize, j: usize, v: ThreeVal) {
        self.cells[k * self.lambda + j] = v;
    }

    /// (max, min) composition.
    fn compose(&self, other: &TriMatrix) -> TriMatrix {
        let n = self.lambda;
        let mut out = TriMatrix::filled(n, ThreeVal::Zero);
        for k in 0..n {
            for j in 0..n {
                let mut best = ThreeVal::Zero;
                for i in 0..n {
                    best = max3(best, min3(self.get(k, i), other.get(i, j)));
                }
                out.set(k, j, best);
            }
        }
        out
    }

    fn join(&self, other: &TriMatrix) -> TriMatrix {
        let mut out = self.clone();
        for (c, o) in out.cells.iter_mut().zip(&other.cells) {
            *c = max3(*c, *o);
        }
        out
    }
}

pub(crate) struct TriEvaluator<'t> {
    trace: &'t Trace,
    matrices: BTreeMap<Path, TriMatrix>,
}

impl<'t> TriEvaluator<'t> {
    pub(crate) fn new(trace: &'t Trace) -> TriEvaluator<'t> {
        TriEvaluator {
            trace,
            matrices: BTreeMap::new(),
        }
    }

    pub(crate) fn value(&mut self, k: usize, f: &Formula) -> ThreeVal {
        let lambda = self.trace.lambda();
        match f {
            Formula::Truth => ThreeVal::Two,
            Formula::Falsity => ThreeVal::Zero,
            Formula::Atom(name) => {
                if self.trace.here(k).contains(name) {
                    ThreeVal::Two
                } else if self.trace.there(k).contains(name) {
                    ThreeVal::One
                } else {
                    ThreeVal::Zero
                }
            }
            Formula::Diamond(p, body) => {
                let m = self.path_value(p);
                let mut best = ThreeVal::Zero;
                for i in 0..lambda {
                    best = max3(best, min3(m.get(k, i), self.value(i, body)));
                }
                best
            }
            Formula::Box(p, body) => {
                let m = self.path_value(p);
                let mut worst = ThreeVal::Two;
                for i in 0..lambda {
                    worst = min3(worst, m.get(k, i).imp(self.value(i, body)));
                }
                worst
            }
        }
    }

    fn path_value(&mut self, p: &Path) -> TriMatrix {
        if let Some(m) = self.matrices.get(p) {
            return m.clone();
        }
        let lambda = self.trace.lambda();
        let m = match p {
            Path::Step => {
                let mut m = TriMatrix::filled(lambda, ThreeVal::Zero);
                for k in 0..lambda.saturating_sub(1) {
                    m.set(k, k + 1, ThreeVal::Two);
                }
                m
            }
            Path::Test(body) => {
                let mut m = TriMatrix::filled(lambda, ThreeVal::Zero);
                for k in 0..lambda {
                    let v = self.value(k, body);
                    m.set(k, k, v);
                }
                m
            }
            Path::Choice(l, r) => self.path_value(l).join(&self.path_value(r)),
            Path::Seq(l, r) => self.path_value(l).compose(&self.path_value(r)),
            Path::Star(inner) => {
                let base = self.path_value(inner);
                let mut out = TriMatrix::filled(lambda, ThreeVal::Zero);
                for k in 0..lambda {
                    out.set(k, k, ThreeVal::Two);
                }
                out = out.join(&base);
                // As with the Boolean closure, values only improve along
                // simple paths, so lambda rounds suffice.
                for _ in 0..lambda {
                    let next = out.join(&out.compose(&base));
                    if next == out {
                        break;
                    }
                    out = next;
                }
                out
            }
            Path::Converse(inner) => {
                let base = self.path_value(inner);
                let mut out = TriMatrix::filled(lambda, ThreeVal::Zero);
                for k in 0..lambda {
                    for j in 0..lambda {
                        out.set(j, k, base.get(k, j));
                    }
                }
                out
            }
        };
        self.matrices.insert(p.clone(), m.clone());
        m
    }
}

/// The three-valued degree of `f` at point `k`.
pub fn trivalue(trace: &Trace, k: usize, f: &Formula) -> Result<ThreeVal, SemanticsError> {
    check_point(trace, k)?;
    Ok(TriEvaluator::new(trace).value(k, f))
}

/// The three-valued degree of the connection `(k, j)` along `path`.
pub fn trivalue_path(
    trace: &Trace,
    k: usize,
    j: usize,
    path: &Path,
) -> Result<ThreeVal, SemanticsError> {
    check_point(trace, k)?;
    check_point(trace, j)?;
    Ok(TriEvaluator::new(trace).path_value(path).get(k, j))
}
