//! Formula and path-expression syntax.
//!
//! The core language is deliberately small: truth constants, atoms, and the
//! two modalities `<rho> phi` / `[rho] phi` over path expressions built from
//! the single step `tau`, tests `phi?`, choice, sequence, iteration, and
//! converse. Everything else (Boolean connectives, LTL operators, past
//! operators) is a derived form that expands eagerly into this core, so
//! downstream passes only ever see the six path shapes and five formula
//! shapes below.

use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

/// A dynamic formula over finite traces.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Truth,
    Falsity,
    Atom(String),
    /// `<rho> phi`: some state reachable via `rho` satisfies `phi`.
    Diamond(Box<Path>, Box<Formula>),
    /// `[rho] phi`: every state reachable via `rho` satisfies `phi`.
    Box(Box<Path>, Box<Formula>),
}

/// A path expression.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Path {
    /// The atomic step `tau`, connecting each state to its successor.
    Step,
    /// `phi?`: stay in place if `phi` holds here.
    Test(Box<Formula>),
    /// `rho + rho'`: follow either operand.
    Choice(Box<Path>, Box<Path>),
    /// `rho ; rho'`: follow one, then the other.
    Seq(Box<Path>, Box<Path>),
    /// `rho*`: finitely many repetitions, including zero.
    Star(Box<Path>),
    /// `rho^-`: the same connections, walked backwards.
    Converse(Box<Path>),
}

pub fn atom(name: &str) -> Formula {
    Formula::Atom(String::from(name))
}

pub fn dia(path: Path, body: Formula) -> Formula {
    Formula::Diamond(Box::new(path), Box::new(body))
}

pub fn boxm(path: Path, body: Formula) -> Formula {
    Formula::Box(Box::new(path), Box::new(body))
}

pub fn step() -> Path {
    Path::Step
}

pub fn test(body: Formula) -> Path {
    Path::Test(Box::new(body))
}

pub fn choice(left: Path, right: Path) -> Path {
    Path::Choice(Box::new(left), Box::new(right))
}

pub fn seq(first: Path, second: Path) -> Path {
    Path::Seq(Box::new(first), Box::new(second))
}

pub fn star(inner: Path) -> Path {
    Path::Star(Box::new(inner))
}

pub fn converse(inner: Path) -> Path {
    Path::Converse(Box::new(inner))
}

// Derived connectives. Each expands into the core immediately; none of these
// shapes survive into the AST.

/// `phi && psi`, encoded as `<phi?> psi`.
pub fn and(left: Formula, right: Formula) -> Formula {
    dia(test(left), right)
}

/// `phi || psi`, encoded as `<phi? + psi?> true`.
pub fn or(left: Formula, right: Formula) -> Formula {
    dia(choice(test(left), test(right)), Formula::Truth)
}

/// `phi -> psi`, encoded as `[phi?] psi`.
pub fn implies(premise: Formula, conclusion: Formula) -> Formula {
    boxm(test(premise), conclusion)
}

/// `!phi`, encoded as `phi -> false`.
pub fn not(body: Formula) -> Formula {
    implies(body, Formula::Falsity)
}

/// Holds exactly at the last state: `[step] false`.
pub fn trace_final() -> Formula {
    boxm(step(), Formula::Falsity)
}

/// Holds exactly at the first state: `[step^-] false`.
pub fn trace_initial() -> Formula {
    boxm(converse(step()), Formula::Falsity)
}

/// Strong next: `<step> phi`.
pub fn next(body: Formula) -> Formula {
    dia(step(), body)
}

/// Weak next: `[step] phi`, vacuously true at the last state.
pub fn wnext(body: Formula) -> Formula {
    boxm(step(), body)
}

/// Strong previous: `<step^-> phi`.
pub fn prev(body: Formula) -> Formula {
    dia(converse(step()), body)
}

/// Weak previous: `[step^-] phi`, vacuously true at the first state.
pub fn wprev(body: Formula) -> Formula {
    boxm(converse(step()), body)
}

/// `<step*> phi`: now or at some later state.
pub fn eventually(body: Formula) -> Formula {
    dia(star(step()), body)
}

/// `[step*] phi`: now and at every later state.
pub fn always(body: Formula) -> Formula {
    boxm(star(step()), body)
}

/// `<step*^-> phi`: now or at some earlier state.
pub fn once(body: Formula) -> Formula {
    dia(converse(star(step())), body)
}

/// `[step*^-] phi`: now and at every earlier state.
pub fn past_always(body: Formula) -> Formula {
    boxm(converse(star(step())), body)
}

/// `phi until psi`, encoded as `<(phi? ; step)*> psi`.
pub fn until(cond: Formula, goal: Formula) -> Formula {
    dia(star(seq(test(cond), step())), goal)
}

/// `phi since psi`, the past mirror of `until`.
pub fn since(cond: Formula, goal: Formula) -> Formula {
    dia(converse(star(seq(test(cond), step()))), goal)
}

/// `phi release psi`: `(psi until (phi && psi)) || always psi`.
pub fn release(cond: Formula, goal: Formula) -> Formula {
    or(until(goal.clone(), and(cond, goal.clone())), always(goal))
}

/// `phi trigger psi`: `(psi since (phi && psi)) || past_always psi`.
pub fn trigger(cond: Formula, goal: Formula) -> Formula {
    or(since(goal.clone(), and(cond, goal.clone())), past_always(goal))
}

/// Errors from the syntax layer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AstError {
    UnknownOperator(String),
    WrongArity {
        op: String,
        expected: usize,
        got: usize,
    },
    /// A non-propositional formula was used where a path was expected.
    NotPropositional,
}

impl core::fmt::Display for AstError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            AstError::UnknownOperator(name) => write!(f, "unknown operator `{name}`"),
            AstError::WrongArity { op, expected, got } => {
                write!(f, "operator `{op}` takes {expected} argument(s), got {got}")
            }
            AstError::NotPropositional => {
                write!(f, "only propositional formulas can be read as paths")
            }
        }
    }
}

impl core::error::Error for AstError {}

/// Builds a derived operator by name. This is the dynamic face of the
/// constructor functions above, used where operator names arrive as data.
pub fn derived(name: &str, mut args: Vec<Formula>) -> Result<Formula, AstError> {
    fn arity(op: &str, expected: usize, args: &[Formula]) -> Result<(), AstError> {
        if args.len() == expected {
            Ok(())
        } else {
            Err(AstError::WrongArity {
                op: String::from(op),
                expected,
                got: args.len(),
            })
        }
    }
    let unary = |args: &mut Vec<Formula>| args.pop().expect("arity checked");
    let binary = |args: &mut Vec<Formula>| {
        let right = args.pop().expect("arity checked");
        let left = args.pop().expect("arity checked");
        (left, right)
    };
    match name {
        "final" | "initial" => arity(name, 0, &args)?,
        "not" | "next" | "wnext" | "prev" | "wprev" | "ev" | "alw" | "once" | "palw" => {
            arity(name, 1, &args)?
        }
        "and" | "or" | "implies" | "until" | "since" | "release" | "trigger" => {
            arity(name, 2, &args)?
        }
        _ => return Err(AstError::UnknownOperator(String::from(name))),
    }
    Ok(match name {
        "final" => trace_final(),
        "initial" => trace_initial(),
        "not" => not(unary(&mut args)),
        "next" => next(unary(&mut args)),
        "wnext" => wnext(unary(&mut args)),
        "prev" => prev(unary(&mut args)),
        "wprev" => wprev(unary(&mut args)),
        "ev" => eventually(unary(&mut args)),
        "alw" => always(unary(&mut args)),
        "once" => once(unary(&mut args)),
        "palw" => past_always(unary(&mut args)),
        "and" => {
            let (l, r) = binary(&mut args);
            and(l, r)
        }
        "or" => {
            let (l, r) = binary(&mut args);
            or(l, r)
        }
        "implies" => {
            let (l, r) = binary(&mut args);
            implies(l, r)
        }
        "until" => {
            let (l, r) = binary(&mut args);
            until(l, r)
        }
        "since" => {
            let (l, r) = binary(&mut args);
            since(l, r)
        }
        "release" => {
            let (l, r) = binary(&mut args);
            release(l, r)
        }
        "trigger" => {
            let (l, r) = binary(&mut args);
            trigger(l, r)
        }
        _ => unreachable!("operator name matched above"),
    })
}

impl Formula {
    /// True when the formula is built from Booleans only: constants, atoms,
    /// and modalities whose paths contain nothing but tests and choices
    /// (the shapes the Boolean constructors produce).
    pub fn is_propositional(&self) -> bool {
        fn path_is_boolean(p: &Path) -> bool {
            match p {
                Path::Test(body) => body.is_propositional(),
                Path::Choice(l, r) => path_is_boolean(l) && path_is_boolean(r),
                _ => false,
            }
        }
        match self {
            Formula::Truth | Formula::Falsity | Formula::Atom(_) => true,
            Formula::Diamond(p, body) | Formula::Box(p, body) => {
                path_is_boolean(p) && body.is_propositional()
            }
        }
    }

    /// Converse applies only to the atomic step.
    pub fn is_converse_normal(&self) -> bool {
        match self {
            Formula::Truth | Formula::Falsity | Formula::Atom(_) => true,
            Formula::Diamond(p, body) | Formula::Box(p, body) => {
                p.is_converse_normal() && body.is_converse_normal()
            }
        }
    }

    /// All atom names occurring in the formula, tests included.
    pub fn atoms(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Truth | Formula::Falsity => {}
            Formula::Atom(name) => {
                out.insert(name.clone());
            }
            Formula::Diamond(p, body) | Formula::Box(p, body) => {
                p.collect_atoms(out);
                body.collect_atoms(out);
            }
        }
    }
}

impl Path {
    pub fn is_converse_normal(&self) -> bool {
        match self {
            Path::Step => true,
            Path::Test(body) => body.is_converse_normal(),
            Path::Choice(l, r) | Path::Seq(l, r) => {
                l.is_converse_normal() && r.is_converse_normal()
            }
            Path::Star(inner) => inner.is_converse_normal(),
            Path::Converse(inner) => matches!(**inner, Path::Step),
        }
    }

    fn collect_atoms(&self, out: &mut BTreeSet<String>) {
        match self {
            Path::Step => {}
            Path::Test(body) => body.collect_atoms(out),
            Path::Choice(l, r) | Path::Seq(l, r) => {
                l.collect_atoms(out);
                r.collect_atoms(out);
            }
            Path::Star(inner) | Path::Converse(inner) => inner.collect_atoms(out),
        }
    }
}

/// Reads a propositional formula as the path `(phi? ; step)`.
pub fn path_of_formula(f: &Formula) -> Result<Path, AstError> {
    if f.is_propositional() {
        Ok(seq(test(f.clone()), step()))
    } else {
        Err(AstError::NotPropositional)
    }
}

/// `rho^n`: `rho^0` is `true?`, and each further power prepends `rho ;`.
pub fn power(p: &Path, n: usize) -> Path {
    if n == 0 {
        test(Formula::Truth)
    } else {
        seq(p.clone(), power(p, n - 1))
    }
}

/// Pushes converse inward until it wraps only `step`. Test bodies are
/// rewritten too, since they may contain further paths.
pub fn converse_normal_form(f: &Formula) -> Formula {
    match f {
        Formula::Truth | Formula::Falsity | Formula::Atom(_) => f.clone(),
        Formula::Diamond(p, body) => dia(converse_normal_form_path(p), converse_normal_form(body)),
        Formula::Box(p, body) => boxm(converse_normal_form_path(p), converse_normal_form(body)),
    }
}

pub fn converse_normal_form_path(p: &Path) -> Path {
    match p {
        Path::Step => Path::Step,
        Path::Test(body) => test(converse_normal_form(body)),
        Path::Choice(l, r) => choice(converse_normal_form_path(l), converse_normal_form_path(r)),
        Path::Seq(l, r) => seq(converse_normal_form_path(l), converse_normal_form_path(r)),
        Path::Star(inner) => star(converse_normal_form_path(inner)),
        Path::Converse(inner) => conversed(inner),
    }
}

/// Normal form of `inner^-`, distributing the converse over `inner`.
fn conversed(inner: &Path) -> Path {
    match inner {
        Path::Step => converse(Path::Step),
        // `(phi?)^-` is `phi?`: a test relates a state only to itself.
        Path::Test(body) => test(converse_normal_form(body)),
        Path::Choice(l, r) => choice(conversed(l), conversed(r)),
        // Walking a sequence backwards swaps the legs.
        Path::Seq(l, r) => seq(conversed(r), conversed(l)),
        Path::Star(body) => star(conversed(body)),
        // `(rho^-)^-` collapses.
        Path::Converse(body) => converse_normal_form_path(body),
    }
}

/// Number of AST nodes, counting formula and path nodes alike.
pub fn size(f: &Formula) -> usize {
    match f {
        Formula::Truth | Formula::Falsity | Formula::Atom(_) => 1,
        Formula::Diamond(p, body) | Formula::Box(p, body) => 1 + path_size(p) + size(body),
    }
}

pub fn path_size(p: &Path) -> usize {
    match p {
        Path::Step => 1,
        Path::Test(body) => 1 + size(body),
        Path::Choice(l, r) | Path::Seq(l, r) => 1 + path_size(l) + path_size(r),
        Path::Star(inner) | Path::Converse(inner) => 1 + path_size(inner),
    }
}

/// An ordered set of atom names. Iteration order is lexicographic, which
/// keeps every enumeration downstream deterministic.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Alphabet {
    atoms: Vec<String>,
}

impl Alphabet {
    pub fn new<I, S>(atoms: I) -> Alphabet
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let set: BTreeSet<String> = atoms.into_iter().map(Into::into).collect();
        Alphabet {
            atoms: set.into_iter().collect(),
        }
    }

    pub fn empty() -> Alphabet {
        Alphabet { atoms: Vec::new() }
    }

    /// The atoms of a formula, as an alphabet.
    pub fn of_formula(f: &Formula) -> Alphabet {
        Alphabet::new(f.atoms())
    }

    /// The union of the atoms of several formulas.
    pub fn of_formulas<'a, I: IntoIterator<Item = &'a Formula>>(formulas: I) -> Alphabet {
        let mut all = BTreeSet::new();
        for f in formulas {
            all.extend(f.atoms());
        }
        Alphabet::new(all)
    }

    pub fn union(&self, other: &Alphabet) -> Alphabet {
        Alphabet::new(self.atoms.iter().chain(other.atoms.iter()).cloned())
    }

    pub fn contains(&self, name: &str) -> bool {
        self.atoms.binary_search_by(|a| a.as_str().cmp(name)).is_ok()
    }

    pub fn is_subset_of(&self, other: &Alphabet) -> bool {
        self.atoms.iter().all(|a| other.contains(a))
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.atoms.iter().map(String::as_str)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn until_expands_to_star_of_test_then_step() {
        let expected = dia(star(seq(test(atom("p")), step())), atom("q"));
        assert_eq!(until(atom("p"), atom("q")), expected);
    }

    #[test]
    fn boolean_connectives_expand_to_modalities() {
        assert_eq!(and(atom("p"), atom("q")), dia(test(atom("p")), atom("q")));
        assert_eq!(
            or(atom("p"), atom("q")),
            dia(choice(test(atom("p")), test(atom("q"))), Formula::Truth)
        );
        assert_eq!(
            implies(atom("p"), atom("q")),
            boxm(test(atom("p")), atom("q"))
        );
        assert_eq!(not(atom("p")), boxm(test(atom("p")), Formula::Falsity));
    }

    #[test]
    fn endpoint_markers() {
        assert_eq!(trace_final(), boxm(step(), Formula::Falsity));
        assert_eq!(trace_initial(), boxm(converse(step()), Formula::Falsity));
    }

    #[test]
    fn past_operators_use_converse() {
        assert_eq!(prev(atom("p")), dia(converse(step()), atom("p")));
        assert_eq!(once(atom("p")), dia(converse(star(step())), atom("p")));
        assert_eq!(
            since(atom("p"), atom("q")),
            dia(converse(star(seq(test(atom("p")), step()))), atom("q"))
        );
    }

    #[test]
    fn derived_dispatch_matches_constructors() {
        assert_eq!(
            derived("until", alloc::vec![atom("p"), atom("q")]),
            Ok(until(atom("p"), atom("q")))
        );
        assert_eq!(derived("final", alloc::vec![]), Ok(trace_final()));
        assert_eq!(
            derived("frobnicate", alloc::vec![]),
            Err(AstError::UnknownOperator(String::from("frobnicate")))
        );
        assert_eq!(
            derived("not", alloc::vec![]),
            Err(AstError::WrongArity {
                op: String::from("not"),
                expected: 1,
                got: 0
            })
        );
    }

    #[test]
    fn derived_operators_only_produce_core_shapes() {
        // Trivially true by construction, but pin it down: expansions must
        // never smuggle in a connective the later passes do not know.
        fn core_only(f: &Formula) -> bool {
            match f {
                Formula::Truth | Formula::Falsity | Formula::Atom(_) => true,
                Formula::Diamond(p, b) | Formula::Box(p, b) => path_core_only(p) && core_only(b),
            }
        }
        fn path_core_only(p: &Path) -> bool {
            match p {
                Path::Step => true,
                Path::Test(b) => core_only(b),
                Path::Choice(l, r) | Path::Seq(l, r) => path_core_only(l) && path_core_only(r),
                Path::Star(i) | Path::Converse(i) => path_core_only(i),
            }
        }
        let samples = [
            release(atom("p"), atom("q")),
            trigger(atom("p"), atom("q")),
            and(or(atom("p"), atom("q")), not(atom("r"))),
            wprev(eventually(atom("p"))),
        ];
        for f in &samples {
            assert!(core_only(f), "{f:?}");
        }
    }

    #[test]
    fn propositional_check_accepts_boolean_shapes_only() {
        assert!(and(atom("p"), or(atom("q"), not(atom("r")))).is_propositional());
        assert!(!next(atom("p")).is_propositional());
        assert!(!until(atom("p"), atom("q")).is_propositional());
    }

    #[test]
    fn path_of_formula_builds_test_then_step() {
        assert_eq!(
            path_of_formula(&atom("p")),
            Ok(seq(test(atom("p")), step()))
        );
        assert_eq!(
            path_of_formula(&Formula::Truth),
            Ok(seq(test(Formula::Truth), step()))
        );
        assert_eq!(
            path_of_formula(&next(atom("p"))),
            Err(AstError::NotPropositional)
        );
    }

    #[test]
    fn power_unrolls_sequences() {
        assert_eq!(power(&step(), 0), test(Formula::Truth));
        assert_eq!(power(&step(), 1), seq(step(), test(Formula::Truth)));
        assert_eq!(
            power(&step(), 3),
            seq(step(), seq(step(), seq(step(), test(Formula::Truth))))
        );
    }

    #[test]
    fn converse_pushes_through_sequences_and_stars() {
        // ((step ; step)^-)  =>  step^- ; step^-
        let p = converse(seq(step(), step()));
        assert_eq!(
            converse_normal_form_path(&p),
            seq(converse(step()), converse(step()))
        );
        // ((step*)^-)  =>  (step^-)*
        assert_eq!(
            converse_normal_form_path(&converse(star(step()))),
            star(converse(step()))
        );
        // Double converse cancels.
        assert_eq!(
            converse_normal_form_path(&converse(converse(step()))),
            step()
        );
        // Converse is absorbed by tests, including nested ones.
        let nested = converse(test(dia(converse(seq(step(), step())), atom("p"))));
        assert_eq!(
            converse_normal_form_path(&nested),
            test(dia(seq(converse(step()), converse(step())), atom("p")))
        );
    }

    #[test]
    fn converse_normal_form_is_idempotent_on_samples() {
        let samples = [
            since(atom("p"), atom("q")),
            once(trigger(atom("p"), atom("q"))),
            dia(converse(star(choice(step(), test(atom("p"))))), atom("q")),
        ];
        for f in &samples {
            let once_applied = converse_normal_form(f);
            assert!(once_applied.is_converse_normal());
            assert_eq!(converse_normal_form(&once_applied), once_applied);
        }
    }

    #[test]
    fn size_counts_every_node() {
        assert_eq!(size(&atom("p")), 1);
        assert_eq!(size(&next(atom("p"))), 3);
        // <(p? ; step)*> q: Diamond, Star, Seq, Test, p, step, q.
        assert_eq!(size(&until(atom("p"), atom("q"))), 7);
    }

    #[test]
    fn size_of_powers_grows_linearly() {
        let rho = seq(test(atom("p")), step());
        let step_size = path_size(&rho) + 1;
        for n in 0..6 {
            assert_eq!(
                path_size(&power(&rho, n + 1)) - path_size(&power(&rho, n)),
                step_size
            );
        }
    }

    #[test]
    fn alphabet_is_sorted_and_deduplicated() {
        let a = Alphabet::new(["q", "p", "q"]);
        assert_eq!(a.len(), 2);
        let names: Vec<&str> = a.iter().collect();
        assert_eq!(names, ["p", "q"]);
        assert!(a.contains("p") && !a.contains("r"));
        assert!(Alphabet::new(["p"]).is_subset_of(&a));
    }

    #[test]
    fn formula_atoms_include_test_bodies() {
        let f = boxm(star(seq(test(not(atom("h"))), step())), atom("s"));
        let atoms: Vec<String> = f.atoms().into_iter().collect();
        assert_eq!(atoms, ["h", "s"]);
    }
}
