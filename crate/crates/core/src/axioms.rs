//! Semantic soundness checks for the axioms of the algebra.
//!
//! Every axiom is instantiated with random closed terms respecting its side
//! condition; both sides are explored and compared under strong bisimulation.

use std::fmt;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::Rng;

use crate::equivalence::{bisimilar, Witness};
use crate::multiactions::{Action, ActionSet, MultiAction};
use crate::process::{
    alphabet, comm_domain, downclose, gamma, Definitions, ProcessTerm, RenameMap,
};
use crate::random::{self, Rng64, TermShape};
use crate::semantics::explore_process;
use crate::splitting::{qmark, BranchWord, SubstitutionEnvironment};

use ProcessTerm as T;

const MAX_STATES: usize = 100_000;

type Instance = (ProcessTerm, ProcessTerm);

/// A named equation schema with a generator for instances of it.
pub struct Axiom {
    pub name: &'static str,
    instantiate: fn(&mut Rng64) -> Instance,
}

impl Axiom {
    pub fn instance(&self, rng: &mut Rng64) -> Instance {
        (self.instantiate)(rng)
    }
}

fn abc() -> Vec<Action> {
    random::letters(3)
}

fn p(rng: &mut Rng64) -> ProcessTerm {
    random::term(rng, &abc(), &TermShape::general(3))
}

fn ma(rng: &mut Rng64) -> MultiAction {
    random::multi_action(rng, &abc(), 0, 2)
}

fn nonempty(rng: &mut Rng64) -> MultiAction {
    random::nonempty_multi_action(rng, &abc(), 2)
}

/// A multi-action or `δ`.
fn ma_delta(rng: &mut Rng64) -> ProcessTerm {
    if rng.gen_bool(0.2) {
        T::Delta
    } else {
        T::act(ma(rng))
    }
}

fn act(rng: &mut Rng64) -> Action {
    abc().choose(rng).expect("nonempty").clone()
}

fn set(rng: &mut Rng64) -> ActionSet {
    random::action_set(rng, &abc())
}

fn rename(rng: &mut Rng64) -> RenameMap {
    random::rename_map(rng, &abc())
}

fn environment(rng: &mut Rng64) -> SubstitutionEnvironment {
    let words = ["", "1", "2", "12"]
        .iter()
        .filter(|_| rng.gen_bool(0.5))
        .map(|w| BranchWord::parse(w).expect("valid word"));
    SubstitutionEnvironment::new(random::letters(2).into_iter().collect())
        .expect("plain actions")
        .with_words(std::iter::once(BranchWord::epsilon()).chain(words))
}

/// A term over plain actions and the fresh images of `env`.
fn env_term(rng: &mut Rng64, env: &SubstitutionEnvironment) -> ProcessTerm {
    let mut alphabet = random::letters(2);
    alphabet.extend(env.img());
    random::term(rng, &alphabet, &TermShape::general(3))
}

macro_rules! axiom {
    ($name:literal, |$rng:ident| $body:expr) => {
        Axiom {
            name: $name,
            instantiate: |$rng: &mut Rng64| $body,
        }
    };
}

/// All axiom schemas, in table order.
pub fn axioms() -> Vec<Axiom> {
    vec![
        axiom!("MA1", |r| {
            let (x, y) = (ma(r), ma(r));
            (T::act(x.join(&y)), T::act(y.join(&x)))
        }),
        axiom!("MA2", |r| {
            let (x, y, z) = (ma(r), ma(r), ma(r));
            (T::act(x.join(&y).join(&z)), T::act(x.join(&y.join(&z))))
        }),
        axiom!("MA3", |r| {
            let x = ma(r);
            (T::act(x.join(&MultiAction::tau())), T::act(x))
        }),
        axiom!("A1", |r| {
            let (x, y) = (p(r), p(r));
            (T::alt(x.clone(), y.clone()), T::alt(y, x))
        }),
        axiom!("A2", |r| {
            let (x, y, z) = (p(r), p(r), p(r));
            (
                T::alt(x.clone(), T::alt(y.clone(), z.clone())),
                T::alt(T::alt(x, y), z),
            )
        }),
        axiom!("A3", |r| {
            let x = p(r);
            (T::alt(x.clone(), x.clone()), x)
        }),
        axiom!("A4", |r| {
            let (x, y, z) = (p(r), p(r), p(r));
            (
                T::seq(T::alt(x.clone(), y.clone()), z.clone()),
                T::alt(T::seq(x, z.clone()), T::seq(y, z)),
            )
        }),
        axiom!("A5", |r| {
            let (x, y, z) = (p(r), p(r), p(r));
            (
                T::seq(T::seq(x.clone(), y.clone()), z.clone()),
                T::seq(x, T::seq(y, z)),
            )
        }),
        axiom!("A6", |r| {
            let x = p(r);
            (T::alt(x.clone(), T::Delta), x)
        }),
        axiom!("A7", |r| (T::seq(T::Delta, p(r)), T::Delta)),
        axiom!("M", |r| {
            let (x, y) = (p(r), p(r));
            (
                T::par(x.clone(), y.clone()),
                T::alt(
                    T::left_merge(x.clone(), y.clone()),
                    T::alt(T::left_merge(y.clone(), x.clone()), T::sync(x, y)),
                ),
            )
        }),
        axiom!("LM1", |r| {
            let (a, x) = (ma_delta(r), p(r));
            (T::left_merge(a.clone(), x.clone()), T::seq(a, x))
        }),
        axiom!("LM2", |r| (T::left_merge(T::Delta, p(r)), T::Delta)),
        axiom!("LM3", |r| {
            let (a, x, y) = (T::act(ma(r)), p(r), p(r));
            (
                T::left_merge(T::seq(a.clone(), x.clone()), y.clone()),
                T::seq(a, T::par(x, y)),
            )
        }),
        axiom!("LM4", |r| {
            let (x, y, z) = (p(r), p(r), p(r));
            (
                T::left_merge(T::alt(x.clone(), y.clone()), z.clone()),
                T::alt(T::left_merge(x, z.clone()), T::left_merge(y, z)),
            )
        }),
        axiom!("S1", |r| {
            let (x, y) = (p(r), p(r));
            (T::sync(x.clone(), y.clone()), T::sync(y, x))
        }),
        axiom!("S2", |r| {
            let (x, y, z) = (p(r), p(r), p(r));
            (
                T::sync(T::sync(x.clone(), y.clone()), z.clone()),
                T::sync(x, T::sync(y, z)),
            )
        }),
        axiom!("S3", |r| {
            let x = p(r);
            (T::sync(x.clone(), T::tau()), x)
        }),
        axiom!("S4", |r| (T::sync(ma_delta(r), T::Delta), T::Delta)),
        axiom!("S5", |r| {
            let (a, b, x) = (ma_delta(r), ma_delta(r), p(r));
            (
                T::sync(T::seq(a.clone(), x.clone()), b.clone()),
                T::seq(T::sync(a, b), x),
            )
        }),
        axiom!("S6", |r| {
            let (a, b, x, y) = (ma_delta(r), ma_delta(r), p(r), p(r));
            (
                T::sync(T::seq(a.clone(), x.clone()), T::seq(b.clone(), y.clone())),
                T::seq(T::sync(a, b), T::par(x, y)),
            )
        }),
        axiom!("S7", |r| {
            let (x, y, z) = (p(r), p(r), p(r));
            (
                T::sync(T::alt(x.clone(), y.clone()), z.clone()),
                T::alt(T::sync(x, z.clone()), T::sync(y, z)),
            )
        }),
        axiom!("SMA", |r| {
            let (x, y) = (ma(r), ma(r));
            (T::sync(T::act(x.clone()), T::act(y.clone())), T::act(x.join(&y)))
        }),
        axiom!("V1", |r| {
            let x = ma(r);
            let mut v = random::allow_set(r, &abc());
            if !x.is_tau() {
                v.insert(x.clone());
            }
            (T::allow(v, T::act(x.clone())), T::act(x))
        }),
        axiom!("V2", |r| {
            let x = nonempty(r);
            let mut v = random::allow_set(r, &abc());
            v.remove(&x);
            (T::allow(v, T::act(x)), T::Delta)
        }),
        axiom!("V3", |r| (T::allow(random::allow_set(r, &abc()), T::Delta), T::Delta)),
        axiom!("V4", |r| {
            let (v, x, y) = (random::allow_set(r, &abc()), p(r), p(r));
            (
                T::allow(v.clone(), T::alt(x.clone(), y.clone())),
                T::alt(T::allow(v.clone(), x), T::allow(v, y)),
            )
        }),
        axiom!("V5", |r| {
            let (v, x, y) = (random::allow_set(r, &abc()), p(r), p(r));
            (
                T::allow(v.clone(), T::seq(x.clone(), y.clone())),
                T::seq(T::allow(v.clone(), x), T::allow(v, y)),
            )
        }),
        axiom!("B1", |r| (T::block(set(r), T::tau()), T::tau())),
        axiom!("B2", |r| {
            let a = act(r);
            let b: ActionSet = set(r).into_iter().filter(|x| *x != a).collect();
            (T::block(b, T::action(a.clone())), T::action(a))
        }),
        axiom!("B3", |r| {
            let (a, mut b) = (act(r), set(r));
            b.insert(a.clone());
            (T::block(b, T::action(a)), T::Delta)
        }),
        axiom!("B4", |r| {
            let (b, x, y) = (set(r), T::act(ma(r)), T::act(ma(r)));
            (
                T::block(b.clone(), T::sync(x.clone(), y.clone())),
                T::sync(T::block(b.clone(), x), T::block(b, y)),
            )
        }),
        axiom!("B5", |r| (T::block(set(r), T::Delta), T::Delta)),
        axiom!("B6", |r| {
            let (b, x, y) = (set(r), p(r), p(r));
            (
                T::block(b.clone(), T::alt(x.clone(), y.clone())),
                T::alt(T::block(b.clone(), x), T::block(b, y)),
            )
        }),
        axiom!("B7", |r| {
            let (b, x, y) = (set(r), p(r), p(r));
            (
                T::block(b.clone(), T::seq(x.clone(), y.clone())),
                T::seq(T::block(b.clone(), x), T::block(b, y)),
            )
        }),
        axiom!("R1", |r| (T::rename(rename(r), T::tau()), T::tau())),
        axiom!("R2", |r| {
            let (a, b, mut m) = (act(r), act(r), rename(r));
            m.insert(a.clone(), b.clone());
            (T::rename(m, T::action(a)), T::action(b))
        }),
        axiom!("R3", |r| {
            let (a, mut m) = (act(r), rename(r));
            m.remove(&a);
            (T::rename(m, T::action(a.clone())), T::action(a))
        }),
        axiom!("R4", |r| {
            let (m, x, y) = (rename(r), T::act(ma(r)), T::act(ma(r)));
            (
                T::rename(m.clone(), T::sync(x.clone(), y.clone())),
                T::sync(T::rename(m.clone(), x), T::rename(m, y)),
            )
        }),
        axiom!("R5", |r| (T::rename(rename(r), T::Delta), T::Delta)),
        axiom!("R6", |r| {
            let (m, x, y) = (rename(r), p(r), p(r));
            (
                T::rename(m.clone(), T::alt(x.clone(), y.clone())),
                T::alt(T::rename(m.clone(), x), T::rename(m, y)),
            )
        }),
        axiom!("R7", |r| {
            let (m, x, y) = (rename(r), p(r), p(r));
            (
                T::rename(m.clone(), T::seq(x.clone(), y.clone())),
                T::seq(T::rename(m.clone(), x), T::rename(m, y)),
            )
        }),
        axiom!("C1", |r| {
            let (c, x) = (random::comm_set(r, &abc()), ma(r));
            let y = gamma(&c, &x).expect("generated rules are valid");
            (T::comm(c, T::act(x)), T::act(y))
        }),
        axiom!("C2", |r| (T::comm(random::comm_set(r, &abc()), T::Delta), T::Delta)),
        axiom!("C3", |r| {
            let (c, x, y) = (random::comm_set(r, &abc()), p(r), p(r));
            (
                T::comm(c.clone(), T::alt(x.clone(), y.clone())),
                T::alt(T::comm(c.clone(), x), T::comm(c, y)),
            )
        }),
        axiom!("C4", |r| {
            let (c, x, y) = (random::comm_set(r, &abc()), p(r), p(r));
            (
                T::comm(c.clone(), T::seq(x.clone(), y.clone())),
                T::seq(T::comm(c.clone(), x), T::comm(c, y)),
            )
        }),
        axiom!("CL1", |r| {
            let shape = TermShape {
                allow_tau: true,
                ..TermShape::sequential(3)
            };
            loop {
                let x = random::term(r, &abc(), &shape);
                let c = random::comm_set(r, &abc());
                let used = downclose(&alphabet(&x).expect("basic term"));
                if comm_domain(&c).is_disjoint(&used) {
                    break (T::comm(c, x.clone()), x);
                }
            }
        }),
        axiom!("H1", |r| (T::hide(set(r), T::tau()), T::tau())),
        axiom!("H2", |r| {
            let (a, mut i) = (act(r), set(r));
            i.insert(a.clone());
            (T::hide(i, T::action(a)), T::tau())
        }),
        axiom!("H3", |r| {
            let a = act(r);
            let i: ActionSet = set(r).into_iter().filter(|x| *x != a).collect();
            (T::hide(i, T::action(a.clone())), T::action(a))
        }),
        axiom!("H4", |r| {
            let (i, x, y) = (set(r), T::act(ma(r)), T::act(ma(r)));
            (
                T::hide(i.clone(), T::sync(x.clone(), y.clone())),
                T::sync(T::hide(i.clone(), x), T::hide(i, y)),
            )
        }),
        axiom!("H5", |r| (T::hide(set(r), T::Delta), T::Delta)),
        axiom!("H6", |r| {
            let (i, x, y) = (set(r), p(r), p(r));
            (
                T::hide(i.clone(), T::alt(x.clone(), y.clone())),
                T::alt(T::hide(i.clone(), x), T::hide(i, y)),
            )
        }),
        axiom!("H7", |r| {
            let (i, x, y) = (set(r), p(r), p(r));
            (
                T::hide(i.clone(), T::seq(x.clone(), y.clone())),
                T::seq(T::hide(i.clone(), x), T::hide(i, y)),
            )
        }),
        axiom!("Q1", |r| (qmark(T::tau(), &environment(r)), T::tau())),
        axiom!("Q2", |r| (qmark(T::Delta, &environment(r)), T::Delta)),
        axiom!("Q3", |r| {
            let env = environment(r);
            let (x, y) = (env_term(r, &env), env_term(r, &env));
            (
                qmark(T::alt(x.clone(), y.clone()), &env),
                T::alt(qmark(x, &env), qmark(y, &env)),
            )
        }),
        axiom!("Q4", |r| {
            let env = environment(r);
            let (x, y) = (env_term(r, &env), env_term(r, &env));
            (
                qmark(T::seq(x.clone(), y.clone()), &env),
                T::seq(qmark(x, &env), qmark(y, &env)),
            )
        }),
    ]
}

/// A failed instance: the two sides and why they differ.
#[derive(Clone, Debug)]
pub struct Failure {
    pub lhs: ProcessTerm,
    pub rhs: ProcessTerm,
    pub witness: Option<Witness>,
    pub error: Option<String>,
}

#[derive(Clone, Debug)]
pub struct AxiomReport {
    pub name: &'static str,
    pub instances: usize,
    pub failures: Vec<Failure>,
    pub elapsed: Duration,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub seed: u64,
    pub axioms: Vec<AxiomReport>,
    pub elapsed: Duration,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.axioms.iter().all(AxiomReport::passed)
    }

    pub fn failed(&self) -> impl Iterator<Item = &AxiomReport> {
        self.axioms.iter().filter(|a| !a.passed())
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for a in &self.axioms {
            let status = if a.passed() { "ok" } else { "FAILED" };
            writeln!(
                f,
                "{:<4} {:>4} instances  {:>8.1?}  {status}",
                a.name, a.instances, a.elapsed
            )?;
            if let Some(fail) = a.failures.first() {
                writeln!(f, "     lhs: {}", fail.lhs)?;
                writeln!(f, "     rhs: {}", fail.rhs)?;
                if let Some(w) = &fail.witness {
                    writeln!(f, "     witness: {w}")?;
                }
                if let Some(e) = &fail.error {
                    writeln!(f, "     error: {e}")?;
                }
            }
        }
        let failed = self.failed().count();
        write!(
            f,
            "{} axioms, {} failed, seed {}, {:.1?}",
            self.axioms.len(),
            failed,
            self.seed,
            self.elapsed
        )
    }
}

/// Checks one instance; `None` when both sides are bisimilar.
pub fn check_instance(lhs: &ProcessTerm, rhs: &ProcessTerm) -> Option<Failure> {
    let defs = Definitions::new();
    let explored = explore_process(lhs, &defs, MAX_STATES)
        .and_then(|l| Ok((l, explore_process(rhs, &defs, MAX_STATES)?)));
    let fail = |witness, error| Failure {
        lhs: lhs.clone(),
        rhs: rhs.clone(),
        witness,
        error,
    };
    match explored {
        Err(e) => Some(fail(None, Some(e.to_string()))),
        Ok((l, r)) => {
            let verdict = bisimilar(&l, &r);
            (!verdict.bisimilar).then(|| fail(verdict.witness, None))
        }
    }
}

pub fn run_axiom(axiom: &Axiom, seed: u64, per_axiom: usize) -> AxiomReport {
    let start = Instant::now();
    let mut rng = random::rng(seed, axiom.name);
    let failures = (0..per_axiom)
        .filter_map(|_| {
            let (lhs, rhs) = axiom.instance(&mut rng);
            check_instance(&lhs, &rhs)
        })
        .collect();
    AxiomReport {
        name: axiom.name,
        instances: per_axiom,
        failures,
        elapsed: start.elapsed(),
    }
}

/// Runs every axiom on `per_axiom` instances, spreading axioms over threads.
pub fn run_suite(seed: u64, per_axiom: usize) -> SuiteReport {
    let start = Instant::now();
    let all = axioms();
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(all.len());
    let mut reports: Vec<Option<AxiomReport>> = vec![None; all.len()];
    std::thread::scope(|s| {
        let handles: Vec<_> = (0..workers)
            .map(|k| {
                let all = &all;
                s.spawn(move || {
                    (k..all.len())
                        .step_by(workers)
                        .map(|i| (i, run_axiom(&all[i], seed, per_axiom)))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        for h in handles {
            for (i, rep) in h.join().expect("axiom worker panicked") {
                reports[i] = Some(rep);
            }
        }
    });
    SuiteReport {
        seed,
        axioms: reports.into_iter().map(|r| r.expect("every axiom ran")).collect(),
        elapsed: start.elapsed(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    #[test]
    fn names_are_unique_and_complete() {
        let names: BTreeSet<&str> = axioms().iter().map(|a| a.name).collect();
        assert_eq!(names.len(), axioms().len());
        for family in ["MA", "A", "LM", "S", "V", "B", "R", "C", "H", "Q"] {
            assert!(names.iter().any(|n| n.strip_prefix(family).is_some_and(|d| d.starts_with('1'))));
        }
        assert_eq!(axioms().len(), 58);
    }

    #[test]
    fn every_axiom_holds_on_a_few_instances() {
        let report = run_suite(1, 5);
        assert!(report.passed(), "{report}");
    }

    #[test]
    fn a_false_law_is_caught() {
        // a·(b + c) and a·b + a·c differ.
        let m = |s: &str| T::action(Action::new(s).unwrap());
        let lhs = T::seq(m("a"), T::alt(m("b"), m("c")));
        let rhs = T::alt(T::seq(m("a"), m("b")), T::seq(m("a"), m("c")));
        let fail = check_instance(&lhs, &rhs).expect("not bisimilar");
        assert!(fail.witness.is_some());
    }

    #[test]
    fn instances_are_reproducible() {
        for ax in axioms() {
            let a = ax.instance(&mut random::rng(9, ax.name));
            let b = ax.instance(&mut random::rng(9, ax.name));
            assert_eq!(a, b, "{}", ax.name);
        }
    }
}
