//! Property suites for the translation: the translated program has the same
//! models as the formula it came from, labels carry no information of their
//! own, the unfolded rules agree with the axioms they unfold, and stable
//! models computed directly agree with an independent derivation.

use deltrace_core::corpus::{gen_formula, Rng};
use deltrace_core::translate::{intermediate_as_formula, sigma};
use deltrace_core::{
    candidate_count, del_models, dht_models, label_extension, program_as_formulas, restrict,
    translate, verify_normal_form, Formula, ModelSet, NormalFormMode, Trace, DEFAULT_BUDGET,
};

const ATOMS: [&str; 2] = ["p", "q"];

/// Full-enumeration ceiling for the small-scale suites: 3^12 candidates.
const TINY: u128 = 531_441;

/// Random formulas keep their models through translation. Forced mode
/// checks every model of the formula against the program; where the
/// extended space is tiny the model sets are compared exactly.
#[test]
fn translation_preserves_models_on_random_formulas() {
    let seed = 0x7a61_0001;
    let mut rng = Rng::new(seed);
    let mut full_runs = 0;
    let mut case = 0;
    let mut refused = 0;
    while case < 60 {
        let gamma = gen_formula(&mut rng, &ATOMS, 2);
        // Two-way iteration bodies have no translation; they are refused
        // loudly, never translated wrongly, so the property skips them.
        let Ok(program) = translate(&gamma) else {
            refused += 1;
            assert!(refused < 120, "refusals dominate the corpus");
            continue;
        };
        case += 1;
        for lambda in 1..=2usize {
            let mode = if candidate_count(&program.extended, lambda) <= TINY {
                full_runs += 1;
                NormalFormMode::Full
            } else {
                NormalFormMode::Forced
            };
            let report = verify_normal_form(&gamma, lambda, mode, DEFAULT_BUDGET).unwrap();
            assert!(
                report.passed(),
                "seed {seed:#x}, case {case}, lambda {lambda}: {gamma:?} -> {report:?}"
            );
        }
    }
    assert!(full_runs >= 40, "too few full comparisons: {full_runs}");
}

/// Labels are forced: every model of the translated program is the label
/// extension of its own restriction, so no exotic label assignment exists.
#[test]
fn labels_carry_no_information() {
    let seed = 0x7a61_0002;
    let mut rng = Rng::new(seed);
    let mut checked_models = 0usize;
    let mut draws = 0;
    while checked_models < 1000 && draws < 400 {
        draws += 1;
        let gamma = gen_formula(&mut rng, &ATOMS, 2);
        let Ok(program) = translate(&gamma) else {
            continue;
        };
        let lambda = 1 + rng.below(2);
        if candidate_count(&program.extended, lambda) > TINY {
            continue;
        }
        let pi = program_as_formulas(&program);
        let models = dht_models(&pi, lambda, &program.extended, DEFAULT_BUDGET).unwrap();
        for model in models.iter() {
            let rebuilt =
                label_extension(&model.restrict(&program.alphabet), &program.registry);
            assert_eq!(
                &rebuilt, model,
                "exotic labels: seed {seed:#x}, {gamma:?}, lambda {lambda}"
            );
            checked_models += 1;
        }
    }
    assert!(
        checked_models >= 1000,
        "too few models exercised: {checked_models}"
    );
}

/// The unfolded rules mean exactly what the defining axioms say: same model
/// sets over the extended alphabet.
#[test]
fn unfolding_agrees_with_the_axioms() {
    let seed = 0x7a61_0003;
    let mut rng = Rng::new(seed);
    let mut compared = 0;
    for _ in 0..40 {
        let gamma =
            deltrace_core::ast::converse_normal_form(&gen_formula(&mut rng, &ATOMS, 2));
        let Ok(program) = translate(&gamma) else {
            continue;
        };
        let lambda = 1 + rng.below(2);
        if candidate_count(&program.extended, lambda) > TINY {
            continue;
        }
        let (axioms, _) = sigma(&gamma).unwrap();
        let as_axioms: Vec<Formula> = axioms.iter().map(intermediate_as_formula).collect();
        let as_rules = program_as_formulas(&program);
        let from_axioms =
            dht_models(&as_axioms, lambda, &program.extended, DEFAULT_BUDGET).unwrap();
        let from_rules =
            dht_models(&as_rules, lambda, &program.extended, DEFAULT_BUDGET).unwrap();
        assert_eq!(
            from_axioms, from_rules,
            "unfolding changed the models: seed {seed:#x}, {gamma:?}, lambda {lambda}"
        );
        compared += 1;
    }
    assert!(compared >= 25, "too few comparisons: {compared}");
}

/// Every rule of a random translation is well formed (previous-state
/// literals only under the dynamic shell) and mentions only atoms of the
/// extended alphabet.
#[test]
fn translated_rules_are_well_formed() {
    let seed = 0x7a61_0004;
    let mut rng = Rng::new(seed);
    let mut supported = 0;
    for _ in 0..200 {
        let gamma = gen_formula(&mut rng, &ATOMS, 3);
        let Ok(program) = translate(&gamma) else {
            continue;
        };
        supported += 1;
        for rule in &program.rules {
            assert!(rule.is_well_formed(), "{gamma:?} -> {rule:?}");
            for literal in rule.body.iter().chain(&rule.head) {
                assert!(
                    program.extended.contains(&literal.atom),
                    "foreign atom {} in {gamma:?}",
                    literal.atom
                );
            }
        }
    }
    assert!(supported >= 150, "too few supported formulas: {supported}");
}

/// Stable models by direct minimality search agree with an independent
/// derivation that filters the full HT-model set: a total model is stable
/// exactly when the set contains no other model with the same
/// there-component.
#[test]
fn stable_models_agree_with_the_model_set_derivation() {
    let seed = 0x7a61_0005;
    let mut rng = Rng::new(seed);
    let alphabet = deltrace_core::Alphabet::new(ATOMS.iter().map(|a| a.to_string()));
    for case in 0..150 {
        let theory = [gen_formula(&mut rng, &ATOMS, 3)];
        let lambda = 1 + rng.below(2);
        let direct = del_models(&theory, lambda, &alphabet, DEFAULT_BUDGET).unwrap();
        let all = dht_models(&theory, lambda, &alphabet, DEFAULT_BUDGET).unwrap();
        let stable: Vec<Trace> = all
            .iter()
            .filter(|m| m.is_total())
            .filter(|t| !all.iter().any(|m| m != *t && &m.to_total() == *t))
            .cloned()
            .collect();
        assert_eq!(
            direct,
            ModelSet::new(lambda, alphabet.clone(), stable),
            "derivations disagree: seed {seed:#x}, case {case}, {theory:?}, lambda {lambda}"
        );
    }
}

/// Restricting the translated program's stable models to the user alphabet
/// gives the formula's stable models: the equilibrium half of the story, on
/// the two worked examples plus a few random formulas.
#[test]
fn translation_preserves_stable_models() {
    let until_example = deltrace_core::ast::until(
        deltrace_core::ast::atom("p"),
        deltrace_core::ast::atom("q"),
    );
    let iteration_example = deltrace_core::ast::boxm(
        deltrace_core::ast::star(deltrace_core::ast::seq(
            deltrace_core::ast::step(),
            deltrace_core::ast::step(),
        )),
        deltrace_core::ast::atom("p"),
    );
    let seed = 0x7a61_0006;
    let mut rng = Rng::new(seed);
    let mut cases = vec![until_example, iteration_example];
    while cases.len() < 12 {
        let gamma = gen_formula(&mut rng, &ATOMS, 2);
        if let Ok(program) = translate(&gamma) {
            if candidate_count(&program.extended, 2) <= TINY {
                cases.push(gamma);
            }
        }
    }
    for gamma in &cases {
        let program = translate(gamma).unwrap();
        let pi = program_as_formulas(&program);
        for lambda in 1..=2usize {
            let direct = del_models(
                core::slice::from_ref(gamma),
                lambda,
                &program.alphabet,
                DEFAULT_BUDGET,
            )
            .unwrap();
            let translated = restrict(
                &del_models(&pi, lambda, &program.extended, DEFAULT_BUDGET).unwrap(),
                &program.alphabet,
            );
            assert_eq!(
                direct, translated,
                "stable models differ: {gamma:?}, lambda {lambda}"
            );
        }
    }
}
