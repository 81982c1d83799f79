//! Deterministic generators for randomized tests.
//!
//! Everything here is driven by an explicit seed, so a failing case can be
//! replayed by quoting the seed and iteration number from the test output.
//! The generator is SplitMix64: tiny, stateless apart from one counter, and
//! good enough for shape coverage (we are sampling syntax trees, not doing
//! statistics).

use alloc::string::String;
use alloc::vec::Vec;

use crate::ast::{
    always, and, atom, boxm, choice, converse, dia, eventually, implies, next, not, once, or,
    past_always, prev, release, seq, since, star, step, test, trace_final, trace_initial,
    trigger, until, wnext, wprev, Formula, Path,
};
use crate::semantics::Trace;

/// SplitMix64 stream.
#[derive(Debug, Clone)]
pub struct Rng(u64);

impl Rng {
    pub fn new(seed: u64) -> Rng {
        Rng(seed)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform in `0..n`. Modulo bias is irrelevant at these ranges.
    pub fn below(&mut self, n: usize) -> usize {
        debug_assert!(n > 0);
        (self.next_u64() % n as u64) as usize
    }

    pub fn coin(&mut self) -> bool {
        self.next_u64() & 1 == 1
    }
}

fn leaf(rng: &mut Rng, atoms: &[&str]) -> Formula {
    match rng.below(atoms.len() + 2) {
        0 => Formula::Truth,
        1 => Formula::Falsity,
        k => atom(atoms[k - 2]),
    }
}

/// A random formula of syntactic depth at most `depth`, drawing atoms from
/// `atoms`. All sugared operators appear, so generated formulas exercise
/// converse paths, tests, and the Boolean encodings.
pub fn gen_formula(rng: &mut Rng, atoms: &[&str], depth: usize) -> Formula {
    if depth == 0 {
        return leaf(rng, atoms);
    }
    let sub = |rng: &mut Rng| gen_formula(rng, atoms, depth - 1);
    match rng.below(20) {
        0 | 1 => leaf(rng, atoms),
        2 => not(sub(rng)),
        3 => and(sub(rng), sub(rng)),
        4 => or(sub(rng), sub(rng)),
        5 => implies(sub(rng), sub(rng)),
        6 => next(sub(rng)),
        7 => wnext(sub(rng)),
        8 => prev(sub(rng)),
        9 => wprev(sub(rng)),
        10 => eventually(sub(rng)),
        11 => always(sub(rng)),
        12 => once(sub(rng)),
        13 => past_always(sub(rng)),
        14 => until(sub(rng), sub(rng)),
        15 => since(sub(rng), sub(rng)),
        16 => {
            if rng.coin() {
                release(sub(rng), sub(rng))
            } else {
                trigger(sub(rng), sub(rng))
            }
        }
        17 => {
            if rng.coin() {
                trace_final()
            } else {
                trace_initial()
            }
        }
        18 => dia(gen_path(rng, atoms, depth - 1), sub(rng)),
        _ => boxm(gen_path(rng, atoms, depth - 1), sub(rng)),
    }
}

/// A random propositional formula (no paths beyond the Boolean encodings).
pub fn gen_propositional(rng: &mut Rng, atoms: &[&str], depth: usize) -> Formula {
    if depth == 0 {
        return leaf(rng, atoms);
    }
    let sub = |rng: &mut Rng| gen_propositional(rng, atoms, depth - 1);
    match rng.below(6) {
        0 | 1 => leaf(rng, atoms),
        2 => not(sub(rng)),
        3 => and(sub(rng), sub(rng)),
        4 => or(sub(rng), sub(rng)),
        _ => implies(sub(rng), sub(rng)),
    }
}

/// A random path expression of depth at most `depth`. Converse appears over
/// arbitrary subpaths, so these are generally *not* in converse normal
/// form.
pub fn gen_path(rng: &mut Rng, atoms: &[&str], depth: usize) -> Path {
    if depth == 0 {
        return if rng.coin() {
            step()
        } else {
            test(leaf(rng, atoms))
        };
    }
    match rng.below(7) {
        0 | 1 => step(),
        2 => test(gen_formula(rng, atoms, depth - 1)),
        3 => choice(
            gen_path(rng, atoms, depth - 1),
            gen_path(rng, atoms, depth - 1),
        ),
        4 => seq(
            gen_path(rng, atoms, depth - 1),
            gen_path(rng, atoms, depth - 1),
        ),
        5 => star(gen_path(rng, atoms, depth - 1)),
        _ => converse(gen_path(rng, atoms, depth - 1)),
    }
}

/// A random trace of length `1..=max_lambda` over `atoms`, with each state
/// an independent random pair `H <= T`.
pub fn gen_trace(rng: &mut Rng, atoms: &[&str], max_lambda: usize) -> Trace {
    let lambda = 1 + rng.below(max_lambda);
    let mut here = Vec::with_capacity(lambda);
    let mut there = Vec::with_capacity(lambda);
    for _ in 0..lambda {
        let mut h = alloc::collections::BTreeSet::new();
        let mut t = alloc::collections::BTreeSet::new();
        for a in atoms {
            // Three equally interesting fates: absent, there only, or both.
            match rng.below(3) {
                0 => {}
                1 => {
                    t.insert(String::from(*a));
                }
                _ => {
                    h.insert(String::from(*a));
                    t.insert(String::from(*a));
                }
            }
        }
        here.push(h);
        there.push(t);
    }
    Trace::new(here, there).expect("generated states satisfy H <= T")
}

/// A random total trace (`H = T`) of length `1..=max_lambda`.
pub fn gen_total_trace(rng: &mut Rng, atoms: &[&str], max_lambda: usize) -> Trace {
    let lambda = 1 + rng.below(max_lambda);
    let mut states = Vec::with_capacity(lambda);
    for _ in 0..lambda {
        let mut t = alloc::collections::BTreeSet::new();
        for a in atoms {
            if rng.coin() {
                t.insert(String::from(*a));
            }
        }
        states.push(t);
    }
    Trace::total(states).expect("total traces always validate")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generator_is_deterministic() {
        let mut a = Rng::new(7);
        let mut b = Rng::new(7);
        for _ in 0..50 {
            assert_eq!(
                gen_formula(&mut a, &["p", "q"], 3),
                gen_formula(&mut b, &["p", "q"], 3)
            );
        }
    }

    #[test]
    fn traces_validate_and_cover_partial_states() {
        let mut rng = Rng::new(11);
        let mut saw_partial = false;
        for _ in 0..100 {
            let trace = gen_trace(&mut rng, &["p", "q"], 4);
            assert!(trace.lambda() >= 1 && trace.lambda() <= 4);
            if !trace.is_total() {
                saw_partial = true;
            }
        }
        assert!(saw_partial, "seed 11 should produce partial traces");
    }

    #[test]
    fn paths_eventually_use_converse() {
        let mut rng = Rng::new(3);
        let mut saw_converse = false;
        for _ in 0..100 {
            let path = gen_path(&mut rng, &["p"], 3);
            if !path.is_converse_normal() {
                saw_converse = true;
            }
        }
        assert!(saw_converse, "seed 3 should produce non-normal paths");
    }
}
