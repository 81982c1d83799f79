//! The syntactic closure of a formula.
//!
//! The closure collects every subformula the translation needs a label for:
//! bodies of modalities, test formulas, the two branches of a choice, the
//! unrolled form of a sequence, and the one-step unrolling of an iteration.
//! It is computed as a worklist saturation; the insertion order (the order
//! in which new members are first reached from the input) is deterministic
//! and later fixes label numbering.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use crate::ast::{boxm, dia, Formula, Path};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClosureError {
    /// The closure rules assume converse has been pushed onto `step`.
    NotConverseNormal,
}

impl core::fmt::Display for ClosureError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            ClosureError::NotConverseNormal => {
                write!(f, "closure requires a formula in converse normal form")
            }
        }
    }
}

impl core::error::Error for ClosureError {}

/// A closure: a membership set plus the deterministic insertion order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosureSet {
    order: Vec<Formula>,
    members: BTreeSet<Formula>,
}

impl ClosureSet {
    pub fn contains(&self, f: &Formula) -> bool {
        self.members.contains(f)
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Members in insertion order.
    pub fn iter(&self) -> impl Iterator<Item = &Formula> {
        self.order.iter()
    }

    pub fn as_set(&self) -> &BTreeSet<Formula> {
        &self.members
    }
}

/// `<rho ; rho'> phi` rewritten as `<rho> <rho'> phi` (and the box twin).
pub(crate) fn unroll_seq(f: &Formula) -> Option<Formula> {
    match f {
        Formula::Diamond(p, body) => match &**p {
            Path::Seq(l, r) => Some(dia((**l).clone(), dia((**r).clone(), (**body).clone()))),
            _ => None,
        },
        Formula::Box(p, body) => match &**p {
            Path::Seq(l, r) => Some(boxm((**l).clone(), boxm((**r).clone(), (**body).clone()))),
            _ => None,
        },
        _ => None,
    }
}

/// The formulas a member forces into the closure, in insertion order.
///
/// For a modality `<rho> phi` / `[rho] phi`:
/// * any path shape contributes the body `phi`;
/// * a test `psi?` contributes `psi` (before the body, which is the order
///   the test rule lists them in);
/// * a choice contributes the modality over each branch;
/// * a sequence contributes its unrolled two-step form;
/// * an iteration `rho*` contributes the unrolling `<rho> <rho*> phi`
///   (diamond) or `[rho] [rho*] phi` (box), matching the defining axioms
///   the translation emits.
fn required(f: &Formula) -> Vec<Formula> {
    let (path, body, is_box): (&Path, &Formula, bool) = match f {
        Formula::Diamond(p, b) => (p, b, false),
        Formula::Box(p, b) => (p, b, true),
        _ => return Vec::new(),
    };
    let rebuild = |p: Path, b: Formula| if is_box { boxm(p, b) } else { dia(p, b) };
    let body = body.clone();
    match path {
        Path::Step | Path::Converse(_) => alloc::vec![body],
        Path::Test(t) => alloc::vec![(**t).clone(), body],
        Path::Seq(_, _) => alloc::vec![body, unroll_seq(f).expect("sequence shape")],
        Path::Choice(l, r) => alloc::vec![
            body.clone(),
            rebuild((**l).clone(), body.clone()),
            rebuild((**r).clone(), body),
        ],
        Path::Star(inner) => alloc::vec![body, rebuild((**inner).clone(), f.clone())],
    }
}

/// The closure of `gamma`, which must be in converse normal form.
pub fn fl_closure(gamma: &Formula) -> Result<ClosureSet, ClosureError> {
    if !gamma.is_converse_normal() {
        return Err(ClosureError::NotConverseNormal);
    }
    let mut order = Vec::new();
    let mut members = BTreeSet::new();
    let mut queue = Vec::new();
    order.push(gamma.clone());
    members.insert(gamma.clone());
    queue.push(gamma.clone());
    let mut next = 0;
    while next < queue.len() {
        let current = queue[next].clone();
        next += 1;
        for child in required(&current) {
            if members.insert(child.clone()) {
                order.push(child.clone());
                queue.push(child);
            }
        }
    }
    Ok(ClosureSet { order, members })
}

/// Whether a set is closed: every member's required formulas are present.
pub fn is_closed(set: &BTreeSet<Formula>) -> bool {
    set.iter()
        .all(|f| required(f).iter().all(|child| set.contains(child)))
}
