//! Seeded random generators for terms, specifications and LTSs.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::multiactions::{Action, ActionSet, MultiAction};
use crate::process::{
    AllowSet, CommRule, CommSet, Definition, ProcName, ProcessTerm, RenameMap, Specification,
};
use crate::semantics::{Lts, Transition};

pub type Rng64 = ChaCha8Rng;

/// Deterministic generator for a seed and a stream label.
pub fn rng(seed: u64, stream: &str) -> Rng64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in stream.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    ChaCha8Rng::seed_from_u64(seed ^ h)
}

/// Actions named `a`, `b`, ... (`n ≤ 26`).
pub fn letters(n: usize) -> Vec<Action> {
    (b'a'..b'a' + n as u8)
        .map(|c| Action::new(&(c as char).to_string()).expect("letter"))
        .collect()
}

pub fn multi_action(rng: &mut Rng64, alphabet: &[Action], min: usize, max: usize) -> MultiAction {
    let n = rng.gen_range(min..=max);
    (0..n)
        .map(|_| alphabet.choose(rng).expect("nonempty alphabet").clone())
        .collect()
}

pub fn nonempty_multi_action(rng: &mut Rng64, alphabet: &[Action], max: usize) -> MultiAction {
    multi_action(rng, alphabet, 1, max.max(1))
}

pub fn action_set(rng: &mut Rng64, alphabet: &[Action]) -> ActionSet {
    alphabet.iter().filter(|_| rng.gen_bool(0.5)).cloned().collect()
}

pub fn allow_set(rng: &mut Rng64, alphabet: &[Action]) -> AllowSet {
    let n = rng.gen_range(0..=3);
    (0..n).map(|_| nonempty_multi_action(rng, alphabet, 2)).collect()
}

pub fn rename_map(rng: &mut Rng64, alphabet: &[Action]) -> RenameMap {
    let mut map = RenameMap::new();
    for a in alphabet {
        if rng.gen_bool(0.5) {
            map.insert(a.clone(), alphabet.choose(rng).expect("nonempty").clone());
        }
    }
    map
}

/// Communication rules with pairwise action-disjoint left-hand sides.
pub fn comm_set(rng: &mut Rng64, alphabet: &[Action]) -> CommSet {
    let mut pool: Vec<Action> = alphabet.to_vec();
    pool.shuffle(rng);
    let mut out = CommSet::new();
    let rules = rng.gen_range(0..=2);
    for _ in 0..rules {
        if pool.is_empty() {
            break;
        }
        let first = pool.pop().expect("nonempty");
        let second = if rng.gen_bool(0.3) || pool.is_empty() {
            first.clone()
        } else {
            pool.pop().expect("nonempty")
        };
        let rhs = alphabet.choose(rng).expect("nonempty").clone();
        let lhs = MultiAction::from_actions([first, second]);
        out.insert(CommRule::new(lhs, rhs).expect("two actions"));
    }
    out
}

/// Which constructors a random term may use.
#[derive(Clone, Copy, Debug)]
pub struct TermShape {
    pub depth: usize,
    pub allow_tau: bool,
    pub parallel: bool,
    pub unary: bool,
    /// Largest multi-action at a leaf.
    pub leaf_size: usize,
}

impl TermShape {
    pub fn sequential(depth: usize) -> Self {
        TermShape {
            depth,
            allow_tau: false,
            parallel: false,
            unary: false,
            leaf_size: 2,
        }
    }

    pub fn general(depth: usize) -> Self {
        TermShape {
            depth,
            allow_tau: true,
            parallel: true,
            unary: true,
            leaf_size: 2,
        }
    }
}

fn leaf(rng: &mut Rng64, alphabet: &[Action], shape: &TermShape) -> ProcessTerm {
    let roll = rng.gen_range(0..10);
    if roll == 0 {
        ProcessTerm::Delta
    } else if roll == 1 && shape.allow_tau {
        ProcessTerm::tau()
    } else {
        ProcessTerm::act(nonempty_multi_action(rng, alphabet, shape.leaf_size))
    }
}

/// A random closed term (no references) of depth at most `shape.depth`.
pub fn term(rng: &mut Rng64, alphabet: &[Action], shape: &TermShape) -> ProcessTerm {
    if shape.depth <= 1 || rng.gen_bool(0.25) {
        return leaf(rng, alphabet, shape);
    }
    let sub = TermShape {
        depth: shape.depth - 1,
        ..*shape
    };
    let mut choices = vec![0, 1];
    if shape.parallel {
        choices.extend([2, 3, 4]);
    }
    if shape.unary {
        choices.extend([5, 6, 7, 8, 9]);
    }
    match *choices.choose(rng).expect("nonempty") {
        0 => ProcessTerm::alt(term(rng, alphabet, &sub), term(rng, alphabet, &sub)),
        1 => ProcessTerm::seq(term(rng, alphabet, &sub), term(rng, alphabet, &sub)),
        2 => ProcessTerm::par(term(rng, alphabet, &sub), term(rng, alphabet, &sub)),
        3 => ProcessTerm::left_merge(term(rng, alphabet, &sub), term(rng, alphabet, &sub)),
        4 => ProcessTerm::sync(term(rng, alphabet, &sub), term(rng, alphabet, &sub)),
        5 => ProcessTerm::allow(allow_set(rng, alphabet), term(rng, alphabet, &sub)),
        6 => ProcessTerm::block(action_set(rng, alphabet), term(rng, alphabet, &sub)),
        7 => ProcessTerm::rename(rename_map(rng, alphabet), term(rng, alphabet, &sub)),
        8 => ProcessTerm::comm(comm_set(rng, alphabet), term(rng, alphabet, &sub)),
        _ => ProcessTerm::hide(action_set(rng, alphabet), term(rng, alphabet, &sub)),
    }
}

/// A single self-recursive, τ-free definition `P = Σ sᵢ · P + Σ tⱼ` whose
/// summands are sequential or parallel compositions of sequential terms.
pub fn recursive_spec(rng: &mut Rng64, alphabet: &[Action], name: &str) -> Specification {
    let name = ProcName::new(name).expect("identifier");
    let shape = TermShape::sequential(3);
    let summand = |rng: &mut Rng64| {
        let s = term(rng, alphabet, &shape);
        if rng.gen_bool(0.3) {
            ProcessTerm::par(s, term(rng, alphabet, &shape))
        } else {
            s
        }
    };
    let mut summands = Vec::new();
    for _ in 0..rng.gen_range(1..=2) {
        summands.push(ProcessTerm::seq(summand(rng), ProcessTerm::Ref(name.clone())));
    }
    for _ in 0..rng.gen_range(0..=1) {
        summands.push(summand(rng));
    }
    summands.shuffle(rng);
    let body = ProcessTerm::fold_right(summands, ProcessTerm::alt).expect("nonempty");
    Specification::single(Definition::new(name, body)).expect("valid")
}

/// A random valid specification for syntax round-trips: several definitions,
/// references along an acyclic order plus self-loops, every operator, and
/// names that need quoting.
pub fn specification(rng: &mut Rng64) -> Specification {
    let mut alphabet = letters(3);
    if rng.gen_bool(0.3) {
        alphabet.push(Action::quoted("a#f#12").expect("quotable"));
    }
    if rng.gen_bool(0.2) {
        alphabet.push(Action::quoted("tau").expect("quotable"));
    }
    let count = rng.gen_range(1..=3);
    let names: Vec<ProcName> = (0..count)
        .map(|i| {
            if rng.gen_bool(0.2) {
                ProcName::quoted(&format!("P{i}#split#a#1")).expect("quotable")
            } else {
                ProcName::new(&format!("P{i}")).expect("identifier")
            }
        })
        .collect();
    let defs: Vec<Definition> = names
        .iter()
        .enumerate()
        .map(|(i, name)| {
            let shape = TermShape::general(rng.gen_range(1..=4));
            let mut body = term(rng, &alphabet, &shape);
            // Later definitions may be referenced by earlier ones.
            let targets: Vec<&ProcName> = std::iter::once(name).chain(&names[i + 1..]).collect();
            for _ in 0..rng.gen_range(0..=2) {
                let target = (*targets.choose(rng).expect("nonempty")).clone();
                let guard = ProcessTerm::act(nonempty_multi_action(rng, &alphabet, 2));
                let r = ProcessTerm::seq(guard, ProcessTerm::Ref(target));
                body = if rng.gen_bool(0.5) {
                    ProcessTerm::alt(body, r)
                } else {
                    ProcessTerm::par(r, body)
                };
            }
            Definition::new(name.clone(), body)
        })
        .collect();
    let root = names[0].clone();
    Specification::new(defs, root).expect("generated specification is valid")
}

/// A random LTS over labels `a`, `b`, `c` with `1..=max_states` states.
pub fn lts(rng: &mut Rng64, max_states: usize) -> Lts {
    let n = rng.gen_range(1..=max_states);
    let labels = letters(3);
    let mut seen = BTreeSet::new();
    let count = rng.gen_range(0..=2 * n + 1);
    let mut transitions = Vec::new();
    for _ in 0..count {
        let t = (rng.gen_range(0..n), rng.gen_range(0..labels.len()), rng.gen_range(0..n));
        if seen.insert(t) {
            transitions.push(Transition {
                source: t.0,
                label: MultiAction::single(labels[t.1].clone()),
                target: t.2,
            });
        }
    }
    let terminating = (0..n).filter(|_| rng.gen_bool(0.2)).collect();
    Lts::new(n, 0, transitions, terminating)
}
