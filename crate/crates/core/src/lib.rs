//! Dynamic equilibrium logic on finite traces.
//!
//! This crate implements a dynamic modal language over finite traces,
//! interpreted both classically and under a here-and-there semantics whose
//! equilibrium models give the language a stable-model (answer set) reading.
//! On top of the semantics it provides the translation of a dynamic formula
//! into a temporal logic program: a label is introduced for every formula in
//! the closure of the input, each label is defined by a small fixed axiom
//! pattern, and the axioms unfold into initial / dynamic / final / global
//! rules over atoms and labels.
//!
//! The crate is organised as a pipeline:
//!
//! * [`ast`] - formulas, path expressions, derived operators, converse
//!   normal form;
//! * [`semantics`] - traces, accessibility relations, satisfaction, and the
//!   three-valued characterisation that makes the here-and-there semantics
//!   executable;
//! * [`closure`] - the syntactic closure that drives label introduction;
//! * [`translate`] - labels, defining axioms, and unfolding into rules;
//! * [`equilibrium`] - bounded brute-force model enumeration, equilibrium
//!   (stable) models, and the verification harnesses that check the
//!   translation against the semantics;
//! * [`corpus`] - deterministic random formulas and traces for those
//!   harnesses.
//!
//! Everything is pure and deterministic: no IO, no global state, no hash
//! randomisation. Enumeration work can be split into index ranges (see
//! `dht_models_range`) and farmed out to threads by callers; results merge
//! by simple concatenation.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod ast;
pub mod closure;
pub mod corpus;
pub mod equilibrium;
pub mod semantics;
pub mod translate;

pub use ast::{Alphabet, AstError, Formula, Path};
pub use closure::{fl_closure, is_closed, ClosureError, ClosureSet};
pub use equilibrium::{
    candidate_count, check_dht_equivalence, check_strong_faithfulness, del_models,
    del_models_range, dht_models, dht_models_range, label_extension, restrict,
    verify_normal_form, EnumError, EquivalenceReport, FaithfulnessReport, ModelSet,
    NormalFormMode, NormalFormReport, DEFAULT_BUDGET,
};
pub use semantics::{
    accessibility, satisfies, satisfies_classical, trivalue, trivalue_path, Relation,
    SemanticsError, ThreeVal, Trace, TraceError,
};
pub use translate::{
    eta, label_registry, program_as_formulas, sigma, translate, translate_as_constraint,
    translate_over, IntermediateFormula, LabelRegistry, Rule, RuleKind, TemporalLiteral,
    TemporalProgram, TranslateError,
};
