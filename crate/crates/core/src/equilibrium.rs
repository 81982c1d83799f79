//! Brute-force model enumeration and the verification harnesses built on it.
//!
//! Everything here is exhaustive search over a finite candidate space: each
//! (atom, time) cell of an HT-trace takes one of three values (absent, there
//! only, here and there), so a trace is a base-3 number and enumeration is
//! counting. Total traces count in base 2. The space is guarded by an
//! explicit budget; exceeding it is an error, never silent truncation.
//!
//! Enumeration ranges are plain index intervals, so callers may split them
//! across workers and merge the results; all public sets are canonically
//! ordered.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

use crate::ast::{Alphabet, Formula};
use crate::semantics::{theory_holds, ThreeVal, Trace, TriEvaluator, MAX_TRACE_LEN};
use crate::translate::{
    program_as_formulas, translate, translate_over, LabelRegistry, TemporalProgram,
    TranslateError,
};

/// Default enumeration budget: the candidate count a single call may visit.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EnumError {
    /// The candidate space is larger than the allowed budget.
    BudgetExceeded { required: u128, budget: u64 },
    /// Traces have length at least 1.
    ZeroLength,
    /// Trace length beyond what the representation supports.
    TooLong { lambda: usize },
    /// The check needed a translation and the formula has none.
    Translation(TranslateError),
}

impl core::fmt::Display for EnumError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            EnumError::BudgetExceeded { required, budget } => write!(
                f,
                "enumeration needs {required} candidates but the budget is {budget}"
            ),
            EnumError::ZeroLength => write!(f, "traces have length at least 1"),
            EnumError::TooLong { lambda } => {
                write!(f, "length {lambda} exceeds the supported maximum {MAX_TRACE_LEN}")
            }
            EnumError::Translation(e) => write!(f, "{e}"),
        }
    }
}

impl From<TranslateError> for EnumError {
    fn from(e: TranslateError) -> EnumError {
        EnumError::Translation(e)
    }
}

impl core::error::Error for EnumError {}

/// All models of one theory at one length, canonically ordered.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelSet {
    lambda: usize,
    alphabet: Alphabet,
    traces: Vec<Trace>,
}

impl ModelSet {
    /// Builds a set, sorting and deduplicating the traces.
    pub fn new(lambda: usize, alphabet: Alphabet, mut traces: Vec<Trace>) -> ModelSet {
        traces.sort();
        traces.dedup();
        ModelSet {
            lambda,
            alphabet,
            traces,
        }
    }

    pub fn lambda(&self) -> usize {
        self.lambda
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn traces(&self) -> &[Trace] {
        &self.traces
    }

    pub fn len(&self) -> usize {
        self.traces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.traces.is_empty()
    }

    pub fn contains(&self, trace: &Trace) -> bool {
        self.traces.binary_search(trace).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Trace> {
        self.traces.iter()
    }
}

/// The number of HT-traces of length `lambda` over `alphabet`, i.e. the
/// candidate count of one exhaustive search (saturating).
pub fn candidate_count(alphabet: &Alphabet, lambda: usize) -> u128 {
    saturating_power(3, alphabet.len() * lambda)
}

fn total_candidate_count(alphabet: &Alphabet, lambda: usize) -> u128 {
    saturating_power(2, alphabet.len() * lambda)
}

fn saturating_power(base: u128, exp: usize) -> u128 {
    let mut out: u128 = 1;
    for _ in 0..exp {
        out = out.saturating_mul(base);
    }
    out
}

fn check_space(
    alphabet: &Alphabet,
    lambda: usize,
    budget: u64,
) -> Result<u64, EnumError> {
    if lambda == 0 {
        return Err(EnumError::ZeroLength);
    }
    if lambda > MAX_TRACE_LEN {
        return Err(EnumError::TooLong { lambda });
    }
    let required = candidate_count(alphabet, lambda);
    if required > budget as u128 {
        return Err(EnumError::BudgetExceeded { required, budget });
    }
    Ok(required as u64)
}

/// Decodes candidate `index` as an HT-trace. The least significant base-3
/// digit is the first alphabet atom at point 0; digits advance through the
/// alphabet, then through time. Digit 0 leaves the atom out, 1 puts it in
/// the there-state only, 2 in both.
fn decode_ht(index: u64, lambda: usize, alphabet: &Alphabet) -> Trace {
    let mut rest = index;
    let mut here = Vec::with_capacity(lambda);
    let mut there = Vec::with_capacity(lambda);
    for _ in 0..lambda {
        let mut h = BTreeSet::new();
        let mut t = BTreeSet::new();
        for a in alphabet.iter() {
            match rest % 3 {
                0 => {}
                1 => {
                    t.insert(String::from(a));
                }
                _ => {
                    h.insert(String::from(a));
                    t.insert(String::from(a));
                }
            }
            rest /= 3;
        }
        here.push(h);
        there.push(t);
    }
    Trace::new(here, there).expect("decoded candidates are valid traces")
}

/// Decodes candidate `index` as a total trace, base 2, same digit order.
fn decode_total(index: u64, lambda: usize, alphabet: &Alphabet) -> Trace {
    let mut rest = index;
    let mut states = Vec::with_capacity(lambda);
    for _ in 0..lambda {
        let mut t = BTreeSet::new();
        for a in alphabet.iter() {
            if rest % 2 == 1 {
                t.insert(String::from(a));
            }
            rest /= 2;
        }
        states.push(t);
    }
    Trace::total(states).expect("decoded candidates are valid traces")
}

/// The models of `theory` among HT-trace candidates `start..end`, in index
/// order. Budget checking is the caller's job; this is the worker body that
/// [`dht_models`] runs over the whole range and that parallel drivers may
/// run over subranges.
pub fn dht_models_range(
    theory: &[Formula],
    lambda: usize,
    alphabet: &Alphabet,
    start: u64,
    end: u64,
) -> Vec<Trace> {
    (start..end)
        .map(|index| decode_ht(index, lambda, alphabet))
        .filter(|trace| theory_holds(trace, theory))
        .collect()
}

/// All HT-models of `theory` at length `lambda` over `alphabet`.
pub fn dht_models(
    theory: &[Formula],
    lambda: usize,
    alphabet: &Alphabet,
    budget: u64,
) -> Result<ModelSet, EnumError> {
    let required = check_space(alphabet, lambda, budget)?;
    Ok(ModelSet::new(
        lambda,
        alphabet.clone(),
        dht_models_range(theory, lambda, alphabet, 0, required),
    ))
}

/// Whether some strictly smaller here-component turns `total` into a model.
fn has_smaller_model(total: &Trace, theory: &[Formula]) -> bool {
    let lambda = total.lambda();
    let mut positions: Vec<(usize, &str)> = Vec::new();
    for k in 0..lambda {
        for a in total.there(k) {
            positions.push((k, a));
        }
    }
    let bits = positions.len();
    debug_assert!(bits < 64, "budget keeps the subset space in range");
    // Every strict subset of the true cells; the full mask is H = T.
    for mask in 0..(1u64 << bits) - 1 {
        let mut here: Vec<BTreeSet<String>> =
            (0..lambda).map(|_| BTreeSet::new()).collect();
        for (i, (k, a)) in positions.iter().enumerate() {
            if mask & (1 << i) != 0 {
                here[*k].insert(String::from(*a));
            }
        }
        let there = (0..lambda).map(|k| total.there(k).clone()).collect();
        let candidate = Trace::new(here, there).expect("subsets of T are valid");
        if theory_holds(&candidate, theory) {
            return true;
        }
    }
    false
}

/// The equilibrium models of `theory` among total candidates `start..end`,
/// in index order (indices count in base 2 over the same digit layout).
pub fn del_models_range(
    theory: &[Formula],
    lambda: usize,
    alphabet: &Alphabet,
    start: u64,
    end: u64,
) -> Vec<Trace> {
    (start..end)
        .map(|index| decode_total(index, lambda, alphabet))
        .filter(|trace| theory_holds(trace, theory) && !has_smaller_model(trace, theory))
        .collect()
}

/// All equilibrium (stable) models of `theory` at length `lambda`: total
/// models with no strictly smaller here-component that still models the
/// theory. The budget is measured as for [`dht_models`], which also bounds
/// the worst-case minimality work.
pub fn del_models(
    theory: &[Formula],
    lambda: usize,
    alphabet: &Alphabet,
    budget: u64,
) -> Result<ModelSet, EnumError> {
    check_space(alphabet, lambda, budget)?;
    let totals = total_candidate_count(alphabet, lambda) as u64;
    Ok(ModelSet::new(
        lambda,
        alphabet.clone(),
        del_models_range(theory, lambda, alphabet, 0, totals),
    ))
}

/// Pointwise restriction of every member to a subalphabet; traces that
/// collapse onto each other are merged.
pub fn restrict(set: &ModelSet, alphabet: &Alphabet) -> ModelSet {
    debug_assert!(alphabet.is_subset_of(set.alphabet()));
    ModelSet::new(
        set.lambda(),
        alphabet.clone(),
        set.iter().map(|t| t.restrict(alphabet)).collect(),
    )
}

/// Extends a trace over the user alphabet to the labelled alphabet, giving
/// each fresh label the membership its formula earns: into the here-state
/// where the formula has value 2, into the there-state where it is nonzero.
pub fn label_extension(trace: &Trace, registry: &LabelRegistry) -> Trace {
    let lambda = trace.lambda();
    let mut here: Vec<BTreeSet<String>> =
        (0..lambda).map(|k| trace.here(k).clone()).collect();
    let mut there: Vec<BTreeSet<String>> =
        (0..lambda).map(|k| trace.there(k).clone()).collect();
    let mut values = TriEvaluator::new(trace);
    for (name, representative) in registry.fresh_labels() {
        for k in 0..lambda {
            match values.value(k, representative) {
                ThreeVal::Zero => {}
                ThreeVal::One => {
                    there[k].insert(name.clone());
                }
                ThreeVal::Two => {
                    here[k].insert(name.clone());
                    there[k].insert(name.clone());
                }
            }
        }
    }
    Trace::new(here, there).expect("extension preserves the here-there order")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormalFormMode {
    /// Check that the label extension of every model of the formula models
    /// the translated program (membership by direct satisfaction).
    Forced,
    /// Additionally enumerate the program's models over the extended
    /// alphabet and compare the restricted set exactly.
    Full,
}

/// Outcome of [`verify_normal_form`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalFormReport {
    pub mode: NormalFormMode,
    pub lambda: usize,
    /// Models of the formula itself that were checked.
    pub models_checked: usize,
    /// Models of the formula whose label extension fails the program.
    pub forced_failures: Vec<Trace>,
    /// Full mode only: models of the formula missing from the restriction
    /// of the program's models.
    pub missing_from_translation: Vec<Trace>,
    /// Full mode only: restricted program models that the formula rejects.
    pub extra_in_translation: Vec<Trace>,
}

impl NormalFormReport {
    pub fn passed(&self) -> bool {
        self.forced_failures.is_empty()
            && self.missing_from_translation.is_empty()
            && self.extra_in_translation.is_empty()
    }
}

/// Checks that the translation of `gamma` has the same models as `gamma`
/// itself at length `lambda`, over the user alphabet.
///
/// Forced mode costs one enumeration over the user alphabet; full mode adds
/// one over the extended alphabet, which is exponentially larger, so it is
/// gated by the same budget.
pub fn verify_normal_form(
    gamma: &Formula,
    lambda: usize,
    mode: NormalFormMode,
    budget: u64,
) -> Result<NormalFormReport, EnumError> {
    let program = translate(gamma)?;
    let user = program.alphabet.clone();
    let pi = program_as_formulas(&program);
    let direct = dht_models(core::slice::from_ref(gamma), lambda, &user, budget)?;

    let mut forced_failures = Vec::new();
    for model in direct.iter() {
        let extended = label_extension(model, &program.registry);
        if !theory_holds(&extended, &pi) {
            forced_failures.push(model.clone());
        }
    }

    let mut missing_from_translation = Vec::new();
    let mut extra_in_translation = Vec::new();
    if mode == NormalFormMode::Full {
        let translated = dht_models(&pi, lambda, &program.extended, budget)?;
        let restricted = restrict(&translated, &user);
        for model in direct.iter() {
            if !restricted.contains(model) {
                missing_from_translation.push(model.clone());
            }
        }
        for model in restricted.iter() {
            if !direct.contains(model) {
                extra_in_translation.push(model.clone());
            }
        }
    }

    Ok(NormalFormReport {
        mode,
        lambda,
        models_checked: direct.len(),
        forced_failures,
        missing_from_translation,
        extra_in_translation,
    })
}

/// Outcome of [`check_dht_equivalence`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivalenceReport {
    pub lambda_max: usize,
    pub traces_checked: u64,
    /// The first trace and point where the two formulas disagree.
    pub counterexample: Option<(Trace, usize)>,
}

impl EquivalenceReport {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// Exhaustively compares two formulas at every point of every HT-trace over
/// their joint alphabet, for every length up to `lambda_max`. A pass is a
/// bounded verdict, not a proof beyond the bound.
pub fn check_dht_equivalence(
    phi: &Formula,
    psi: &Formula,
    lambda_max: usize,
    budget: u64,
) -> Result<EquivalenceReport, EnumError> {
    let alphabet = Alphabet::of_formulas([phi, psi].into_iter());
    let mut traces_checked = 0u64;
    for lambda in 1..=lambda_max {
        let required = check_space(&alphabet, lambda, budget)?;
        for index in 0..required {
            let trace = decode_ht(index, lambda, &alphabet);
            traces_checked += 1;
            let mut evaluator = crate::semantics::Evaluator::new(&trace);
            for k in 0..lambda {
                if evaluator.holds(k, phi) != evaluator.holds(k, psi) {
                    return Ok(EquivalenceReport {
                        lambda_max,
                        traces_checked,
                        counterexample: Some((trace, k)),
                    });
                }
            }
        }
    }
    Ok(EquivalenceReport {
        lambda_max,
        traces_checked,
        counterexample: None,
    })
}

/// Outcome of [`check_strong_faithfulness`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaithfulnessReport {
    pub lambda: usize,
    /// Whether the translated side was fully enumerated over the extended
    /// alphabet. When false, only the subset direction was checked, by the
    /// forced-label argument.
    pub exhaustive: bool,
    /// Equilibrium models of the original theory, over the user alphabet.
    pub direct: ModelSet,
    /// Full mode only: the restriction of the translated side's models.
    pub translated: Option<ModelSet>,
    /// Direct models absent from the translated side.
    pub missing: Vec<Trace>,
    /// Full mode only: translated-side models the direct side rejects.
    pub extra: Vec<Trace>,
}

impl FaithfulnessReport {
    pub fn passed(&self) -> bool {
        self.missing.is_empty() && self.extra.is_empty()
    }
}

/// Checks that replacing `gamma` by its translation preserves equilibrium
/// models in any context `gamma_prime`: compares the stable models of
/// `{gamma, gamma_prime}` with the restriction of the stable models of
/// `program(gamma) + gamma_prime` over the labelled alphabet.
///
/// When the extended space fits the budget both directions are compared
/// exactly; otherwise only the subset direction is checked (each direct
/// model's label extension must be stable on the translated side is too
/// costly to decide, so the check weakens to satisfaction) and the report
/// says so.
pub fn check_strong_faithfulness(
    gamma: &Formula,
    gamma_prime: &Formula,
    lambda: usize,
    budget: u64,
) -> Result<FaithfulnessReport, EnumError> {
    let user = Alphabet::of_formulas([gamma, gamma_prime].into_iter());
    let program: TemporalProgram = translate_over(gamma, &user)?;
    let mut side = program_as_formulas(&program);
    side.push(gamma_prime.clone());

    let direct = del_models(
        &[gamma.clone(), gamma_prime.clone()],
        lambda,
        &user,
        budget,
    )?;

    let exhaustive = candidate_count(&program.extended, lambda) <= budget as u128;
    if exhaustive {
        let translated = restrict(&del_models(&side, lambda, &program.extended, budget)?, &user);
        let missing = direct
            .iter()
            .filter(|m| !translated.contains(m))
            .cloned()
            .collect();
        let extra = translated
            .iter()
            .filter(|m| !direct.contains(m))
            .cloned()
            .collect();
        Ok(FaithfulnessReport {
            lambda,
            exhaustive,
            direct,
            translated: Some(translated),
            missing,
            extra,
        })
    } else {
        // Subset direction only: the label extension of each direct model
        // must at least satisfy the translated side.
        let missing = direct
            .iter()
            .filter(|m| !theory_holds(&label_extension(m, &program.registry), &side))
            .cloned()
            .collect();
        Ok(FaithfulnessReport {
            lambda,
            exhaustive,
            direct,
            translated: None,
            missing,
            extra: Vec::new(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ast::*;
    use alloc::string::String;
    use alloc::vec;

    fn state(atoms: &[&str]) -> BTreeSet<String> {
        atoms.iter().map(|a| String::from(*a)).collect()
    }

    fn total(states: &[&[&str]]) -> Trace {
        Trace::total(states.iter().map(|s| state(s)).collect()).unwrap()
    }

    fn ht(pairs: &[(&[&str], &[&str])]) -> Trace {
        Trace::new(
            pairs.iter().map(|(h, _)| state(h)).collect(),
            pairs.iter().map(|(_, t)| state(t)).collect(),
        )
        .unwrap()
    }

    fn alpha(atoms: &[&str]) -> Alphabet {
        Alphabet::new(atoms.iter().map(|a| String::from(*a)))
    }

    #[test]
    fn single_atom_has_one_model_among_three_candidates() {
        let set = dht_models(&[atom("p")], 1, &alpha(&["p"]), DEFAULT_BUDGET).unwrap();
        assert_eq!(set.traces(), &[total(&[&["p"]])]);
    }

    #[test]
    fn empty_theory_admits_every_trace() {
        let set = dht_models(&[], 2, &alpha(&["p"]), DEFAULT_BUDGET).unwrap();
        assert_eq!(set.len(), 9);
    }

    #[test]
    fn previous_truth_is_unsatisfiable_at_the_start() {
        for lambda in 1..=2 {
            let set =
                dht_models(&[prev(Formula::Truth)], lambda, &alpha(&["p"]), DEFAULT_BUDGET)
                    .unwrap();
            assert!(set.is_empty());
        }
    }

    #[test]
    fn budget_and_length_guards() {
        let err = dht_models(&[], 10, &alpha(&["p", "q"]), 1000).unwrap_err();
        assert_eq!(
            err,
            EnumError::BudgetExceeded {
                required: 3u128.pow(20),
                budget: 1000
            }
        );
        assert_eq!(
            dht_models(&[], 0, &alpha(&["p"]), 1000).unwrap_err(),
            EnumError::ZeroLength
        );
        assert_eq!(
            dht_models(&[], 65, &alpha(&[]), 1000).unwrap_err(),
            EnumError::TooLong { lambda: 65 }
        );
    }

    #[test]
    fn range_split_agrees_with_the_full_run() {
        let theory = [until(atom("p"), atom("q"))];
        let a = alpha(&["p", "q"]);
        let full = dht_models(&theory, 2, &a, DEFAULT_BUDGET).unwrap();
        let mid = 40;
        let mut split = dht_models_range(&theory, 2, &a, 0, mid);
        split.extend(dht_models_range(&theory, 2, &a, mid, 81));
        assert_eq!(ModelSet::new(2, a, split), full);
    }

    #[test]
    fn keep_sending_sos_has_one_stable_trace_per_length() {
        // "While not helped, send an sos": [((!h)? ; step)*](!h -> s).
        let sos = boxm(
            star(path_of_formula(&not(atom("h"))).unwrap()),
            implies(not(atom("h")), atom("s")),
        );
        for lambda in 1..=3 {
            let set = del_models(
                core::slice::from_ref(&sos),
                lambda,
                &alpha(&["h", "s"]),
                DEFAULT_BUDGET,
            )
            .unwrap();
            let expected = Trace::total(vec![state(&["s"]); lambda]).unwrap();
            assert_eq!(set.traces(), &[expected], "lambda = {lambda}");
        }
    }

    #[test]
    fn empty_theory_has_only_the_empty_stable_trace() {
        let set = del_models(&[], 2, &alpha(&["p"]), DEFAULT_BUDGET).unwrap();
        assert_eq!(set.traces(), &[total(&[&[], &[]])]);
    }

    #[test]
    fn stable_traces_are_classical_models() {
        let sos = boxm(
            star(path_of_formula(&not(atom("h"))).unwrap()),
            implies(not(atom("h")), atom("s")),
        );
        let theory = [sos, dia(power(&step(), 2), atom("h"))];
        let set = del_models(&theory, 4, &alpha(&["h", "s"]), DEFAULT_BUDGET).unwrap();
        assert!(!set.is_empty());
        for model in set.iter() {
            assert!(model.is_total());
            for f in &theory {
                assert!(crate::semantics::satisfies_classical(model, 0, f).unwrap());
            }
        }
    }

    #[test]
    fn restriction_merges_and_is_monotone() {
        let full = alpha(&["p", "l0"]);
        let set = ModelSet::new(
            1,
            full,
            vec![total(&[&["p", "l0"]]), total(&[&["p"]])],
        );
        let restricted = restrict(&set, &alpha(&["p"]));
        assert_eq!(restricted.traces(), &[total(&[&["p"]])]);
        // Restricting in two hops equals one hop.
        let two_hop = restrict(&restricted, &alpha(&[]));
        assert_eq!(two_hop, restrict(&set, &alpha(&[])));
    }

    #[test]
    fn label_extension_of_the_until_example() {
        let gamma = until(atom("p"), atom("q"));
        let program = translate(&gamma).unwrap();
        // q alone on a single state: gamma holds, the step label cannot.
        let extended = label_extension(&total(&[&["q"]]), &program.registry);
        assert_eq!(extended, total(&[&["q", "l0"]]));
        // The empty state: gamma fails, no labels at all.
        let extended = label_extension(&total(&[&[]]), &program.registry);
        assert_eq!(extended, total(&[&[]]));
        // Restriction undoes extension.
        let m = ht(&[(&[], &["p"]), (&["q"], &["p", "q"])]);
        assert_eq!(
            label_extension(&m, &program.registry).restrict(&alpha(&["p", "q"])),
            m
        );
    }

    #[test]
    fn label_extension_keeps_totality() {
        let gamma = until(atom("p"), atom("q"));
        let program = translate(&gamma).unwrap();
        let m = total(&[&["p"], &["p"], &["q"]]);
        assert!(label_extension(&m, &program.registry).is_total());
    }

    #[test]
    fn normal_form_holds_for_the_until_example() {
        let gamma = until(atom("p"), atom("q"));
        for lambda in 1..=3 {
            let report =
                verify_normal_form(&gamma, lambda, NormalFormMode::Forced, DEFAULT_BUDGET)
                    .unwrap();
            assert!(report.passed(), "lambda = {lambda}: {report:?}");
            assert!(report.models_checked > 0);
        }
    }

    #[test]
    fn normal_form_holds_in_full_mode_for_the_iteration_example() {
        let gamma = boxm(star(seq(step(), step())), atom("p"));
        for lambda in 1..=2 {
            let report =
                verify_normal_form(&gamma, lambda, NormalFormMode::Full, DEFAULT_BUDGET).unwrap();
            assert!(report.passed(), "lambda = {lambda}: {report:?}");
        }
    }

    #[test]
    fn normal_form_of_a_bare_atom() {
        let report =
            verify_normal_form(&atom("q"), 1, NormalFormMode::Full, DEFAULT_BUDGET).unwrap();
        assert!(report.passed());
        assert_eq!(report.models_checked, 1);
    }

    #[test]
    fn until_is_equivalent_to_its_iteration_form() {
        // Different syntax trees for the same connective.
        let report = check_dht_equivalence(
            &eventually(atom("q")),
            &until(Formula::Truth, atom("q")),
            3,
            DEFAULT_BUDGET,
        )
        .unwrap();
        assert!(report.passed());
    }

    #[test]
    fn previous_truth_differs_from_falsity_beyond_the_start() {
        let report = check_dht_equivalence(
            &prev(Formula::Truth),
            &Formula::Falsity,
            2,
            DEFAULT_BUDGET,
        )
        .unwrap();
        let (_, k) = report.counterexample.expect("distinguishable at k = 1");
        assert_eq!(k, 1);
    }

    #[test]
    fn weak_next_previous_truth_is_valid() {
        let report = check_dht_equivalence(
            &wnext(prev(Formula::Truth)),
            &Formula::Truth,
            3,
            DEFAULT_BUDGET,
        )
        .unwrap();
        assert!(report.passed());
    }

    #[test]
    fn faithfulness_on_the_until_example() {
        let gamma = until(atom("p"), atom("q"));
        // Double negation never pushes p into the here-component, so every
        // total candidate has a smaller model: both sides must agree on the
        // empty set.
        let context = always(not(not(atom("p"))));
        let report =
            check_strong_faithfulness(&gamma, &context, 2, DEFAULT_BUDGET).unwrap();
        assert!(report.exhaustive);
        assert!(report.passed(), "{report:?}");
        assert!(report.direct.is_empty());
    }

    #[test]
    fn faithfulness_with_a_forcing_context() {
        let gamma = until(atom("p"), atom("q"));
        // An unconditional p makes q the only minimisation degree of
        // freedom: q must appear exactly once, at either state.
        let context = always(atom("p"));
        let report =
            check_strong_faithfulness(&gamma, &context, 2, DEFAULT_BUDGET).unwrap();
        assert!(report.exhaustive);
        assert!(report.passed(), "{report:?}");
        assert_eq!(
            report.direct.traces(),
            &[
                total(&[&["p"], &["p", "q"]]),
                total(&[&["p", "q"], &["p"]]),
            ]
        );
    }

    #[test]
    fn faithfulness_with_a_trivial_context() {
        let gamma = until(atom("p"), atom("q"));
        let report =
            check_strong_faithfulness(&gamma, &Formula::Truth, 1, DEFAULT_BUDGET).unwrap();
        assert!(report.passed(), "{report:?}");
    }

    #[test]
    fn faithfulness_of_a_contradiction_is_vacuous() {
        let report = check_strong_faithfulness(&atom("q"), &not(atom("q")), 1, DEFAULT_BUDGET)
            .unwrap();
        assert!(report.passed());
        assert!(report.direct.is_empty());
        assert!(report.translated.unwrap().is_empty());
    }
}
