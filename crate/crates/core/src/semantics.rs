//! Structural operational semantics and explicit state-space exploration.
//!
//! Termination is modelled by [`Successor::Terminated`], which becomes a
//! dedicated state (marked terminating) in an explored [`Lts`]. States are
//! identified by their term after local normalization: `+` and `·` nested to
//! the right, and a state equal to the body of a definition folded into a
//! reference to it.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::multiactions::{Action, MultiAction};
use crate::process::{gamma_unchecked, Definition, Definitions, ProcName, ProcessTerm, Specification};

pub const DEFAULT_MAX_STATES: usize = 100_000;

/// Target of a transition.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Successor {
    Terminated,
    Term(Arc<ProcessTerm>),
}

impl Successor {
    fn wrap(self, f: impl FnOnce(Arc<ProcessTerm>) -> ProcessTerm) -> Successor {
        match self {
            Successor::Terminated => Successor::Terminated,
            Successor::Term(p) => Successor::Term(Arc::new(f(p))),
        }
    }
}

pub type Steps = BTreeSet<(MultiAction, Successor)>;

/// Parallel continuation of two components.
fn merge(x: Successor, y: Successor) -> Successor {
    match (x, y) {
        (Successor::Terminated, y) => y,
        (x, Successor::Terminated) => x,
        (Successor::Term(p), Successor::Term(q)) => Successor::Term(Arc::new(ProcessTerm::Par(p, q))),
    }
}

/// `p · q`, keeping sequential composition nested to the right.
fn seq_right(p: Arc<ProcessTerm>, q: Arc<ProcessTerm>) -> Arc<ProcessTerm> {
    match &*p {
        ProcessTerm::Seq(p1, p2) => Arc::new(ProcessTerm::Seq(p1.clone(), seq_right(p2.clone(), q))),
        _ => Arc::new(ProcessTerm::Seq(p, q)),
    }
}

fn alt_right(p: Arc<ProcessTerm>, q: Arc<ProcessTerm>) -> Arc<ProcessTerm> {
    match &*p {
        ProcessTerm::Alt(p1, p2) => Arc::new(ProcessTerm::Alt(p1.clone(), alt_right(p2.clone(), q))),
        _ => Arc::new(ProcessTerm::Alt(p, q)),
    }
}

/// Re-associates `+` and `·` to the right throughout the term.
pub fn normalize(p: &ProcessTerm) -> ProcessTerm {
    match p {
        ProcessTerm::Alt(a, b) => {
            let n = alt_right(Arc::new(normalize(a)), Arc::new(normalize(b)));
            Arc::unwrap_or_clone(n)
        }
        ProcessTerm::Seq(a, b) => {
            let n = seq_right(Arc::new(normalize(a)), Arc::new(normalize(b)));
            Arc::unwrap_or_clone(n)
        }
        _ => p.map_children(normalize),
    }
}

/// One-step transitions of `p`.
pub fn step(p: &ProcessTerm, defs: &Definitions) -> Result<Steps> {
    let mut unfolding = Vec::new();
    step_in(p, defs, &mut unfolding)
}

fn step_in(p: &ProcessTerm, defs: &Definitions, unfolding: &mut Vec<ProcName>) -> Result<Steps> {
    use ProcessTerm::*;
    let mut out = Steps::new();
    match p {
        Act(alpha) => {
            out.insert((alpha.clone(), Successor::Terminated));
        }
        Delta => {}
        Ref(name) => {
            if unfolding.contains(name) {
                return Err(Error::UnguardedRecursion(name.to_string()));
            }
            let def = defs
                .get(name)
                .ok_or_else(|| Error::UnknownReference(name.to_string()))?;
            unfolding.push(name.clone());
            let r = step_in(&def.body, defs, unfolding);
            unfolding.pop();
            return r;
        }
        Alt(p, q) => {
            out = step_in(p, defs, unfolding)?;
            out.extend(step_in(q, defs, unfolding)?);
        }
        Seq(p, q) => {
            for (alpha, x) in step_in(p, defs, unfolding)? {
                let next = match x {
                    Successor::Terminated => Successor::Term(q.clone()),
                    Successor::Term(p1) => Successor::Term(seq_right(p1, q.clone())),
                };
                out.insert((alpha, next));
            }
        }
        Par(p, q) => {
            let left = step_in(p, defs, unfolding)?;
            let right = step_in(q, defs, unfolding)?;
            for (alpha, x) in &left {
                out.insert((alpha.clone(), merge(x.clone(), Successor::Term(q.clone()))));
            }
            for (beta, y) in &right {
                out.insert((beta.clone(), merge(Successor::Term(p.clone()), y.clone())));
            }
            for (alpha, x) in &left {
                for (beta, y) in &right {
                    out.insert((alpha.join(beta), merge(x.clone(), y.clone())));
                }
            }
        }
        LeftMerge(p, q) => {
            for (alpha, x) in step_in(p, defs, unfolding)? {
                out.insert((alpha, merge(x, Successor::Term(q.clone()))));
            }
        }
        Sync(p, q) => {
            let left = step_in(p, defs, unfolding)?;
            let right = step_in(q, defs, unfolding)?;
            for (alpha, x) in &left {
                for (beta, y) in &right {
                    out.insert((alpha.join(beta), merge(x.clone(), y.clone())));
                }
            }
        }
        Allow(v, p) => {
            for (alpha, x) in step_in(p, defs, unfolding)? {
                if alpha.is_tau() || v.contains(&alpha) {
                    out.insert((alpha, x.wrap(|p1| Allow(v.clone(), p1))));
                }
            }
        }
        Block(b, p) => {
            for (alpha, x) in step_in(p, defs, unfolding)? {
                if !alpha.intersects(b) {
                    out.insert((alpha, x.wrap(|p1| Block(b.clone(), p1))));
                }
            }
        }
        Rename(r, p) => {
            for (alpha, x) in step_in(p, defs, unfolding)? {
                let renamed = alpha.map_actions(|a| r.get(a).unwrap_or(a).clone());
                out.insert((renamed, x.wrap(|p1| Rename(r.clone(), p1))));
            }
        }
        Comm(c, p) => {
            for (alpha, x) in step_in(p, defs, unfolding)? {
                out.insert((gamma_unchecked(c, &alpha), x.wrap(|p1| Comm(c.clone(), p1))));
            }
        }
        Hide(i, p) => {
            for (alpha, x) in step_in(p, defs, unfolding)? {
                out.insert((alpha.without(i), x.wrap(|p1| Hide(i.clone(), p1))));
            }
        }
    }
    Ok(out)
}

/// A labelled transition (`source --label--> target`).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Transition {
    pub source: usize,
    pub label: MultiAction,
    pub target: usize,
}

/// An explicit labelled transition system.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Lts {
    pub num_states: usize,
    pub initial: usize,
    pub transitions: Vec<Transition>,
    /// States that have terminated successfully.
    pub terminating: BTreeSet<usize>,
    /// Term of each state when the LTS was explored from a process.
    /// `None` marks the terminated state (or an LTS built from raw data).
    pub state_terms: Vec<Option<Arc<ProcessTerm>>>,
}

impl Lts {
    pub fn new(
        num_states: usize,
        initial: usize,
        transitions: Vec<Transition>,
        terminating: BTreeSet<usize>,
    ) -> Self {
        assert!(initial < num_states, "initial state out of range");
        assert!(
            transitions
                .iter()
                .all(|t| t.source < num_states && t.target < num_states),
            "transition endpoint out of range"
        );
        assert!(terminating.iter().all(|&s| s < num_states));
        Lts {
            num_states,
            initial,
            transitions,
            terminating,
            state_terms: vec![None; num_states],
        }
    }

    /// Outgoing `(label, target)` pairs per state.
    pub fn successors(&self) -> Vec<Vec<(&MultiAction, usize)>> {
        let mut out = vec![Vec::new(); self.num_states];
        for t in &self.transitions {
            out[t.source].push((&t.label, t.target));
        }
        out
    }

    pub fn labels(&self) -> BTreeSet<&MultiAction> {
        self.transitions.iter().map(|t| &t.label).collect()
    }

    /// All actions occurring in some transition label.
    pub fn label_actions(&self) -> BTreeSet<Action> {
        self.transitions
            .iter()
            .flat_map(|t| t.label.actions().iter().cloned())
            .collect()
    }

    /// Aldebaran rendering. Terminating states follow in a trailing
    /// `-- term:` comment line, which standard readers ignore.
    pub fn to_aut(&self) -> String {
        let mut out = String::new();
        writeln!(
            out,
            "des ({}, {}, {})",
            self.initial,
            self.transitions.len(),
            self.num_states
        )
        .unwrap();
        for t in &self.transitions {
            writeln!(out, "({},\"{}\",{})", t.source, t.label, t.target).unwrap();
        }
        if !self.terminating.is_empty() {
            out.push_str("-- term:");
            for s in &self.terminating {
                write!(out, " {s}").unwrap();
            }
            out.push('\n');
        }
        out
    }

    /// Reads the format written by [`Lts::to_aut`].
    pub fn from_aut(text: &str) -> Result<Lts> {
        let syntax = |line: usize, message: &str| Error::Syntax {
            line,
            col: 1,
            message: message.to_string(),
        };
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (hl, header) = lines.next().ok_or_else(|| syntax(1, "missing des header"))?;
        let header = header.trim();
        let inner = header
            .strip_prefix("des")
            .map(str::trim)
            .and_then(|s| s.strip_prefix('('))
            .and_then(|s| s.strip_suffix(')'))
            .ok_or_else(|| syntax(hl + 1, "malformed des header"))?;
        let nums: Vec<usize> = inner
            .split(',')
            .map(|s| s.trim().parse())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| syntax(hl + 1, "malformed des header"))?;
        let [initial, count, num_states] = nums[..] else {
            return Err(syntax(hl + 1, "des header needs three numbers"));
        };
        let mut transitions = Vec::with_capacity(count);
        let mut terminating = BTreeSet::new();
        for (ln, line) in lines {
            let line = line.trim();
            if let Some(rest) = line.strip_prefix("-- term:") {
                for tok in rest.split_whitespace() {
                    terminating.insert(tok.parse().map_err(|_| syntax(ln + 1, "bad state index"))?);
                }
                continue;
            }
            let body = line
                .strip_prefix('(')
                .and_then(|s| s.strip_suffix(')'))
                .ok_or_else(|| syntax(ln + 1, "malformed transition"))?;
            let first = body.find(',').ok_or_else(|| syntax(ln + 1, "malformed transition"))?;
            let last = body.rfind(',').ok_or_else(|| syntax(ln + 1, "malformed transition"))?;
            if first == last {
                return Err(syntax(ln + 1, "malformed transition"));
            }
            let source = body[..first]
                .trim()
                .parse()
                .map_err(|_| syntax(ln + 1, "bad source state"))?;
            let target = body[last + 1..]
                .trim()
                .parse()
                .map_err(|_| syntax(ln + 1, "bad target state"))?;
            let label = body[first + 1..last].trim().trim_matches('"');
            let label = if label == "tau" {
                MultiAction::tau()
            } else {
                label
                    .split('|')
                    .map(Action::quoted)
                    .collect::<Result<MultiAction>>()?
            };
            transitions.push(Transition {
                source,
                label,
                target,
            });
        }
        if transitions.len() != count {
            return Err(syntax(hl + 1, "transition count does not match header"));
        }
        if initial >= num_states
            || transitions
                .iter()
                .any(|t| t.source >= num_states || t.target >= num_states)
            || terminating.iter().any(|&s| s >= num_states)
        {
            return Err(syntax(hl + 1, "state index out of range"));
        }
        Ok(Lts::new(num_states, initial, transitions, terminating))
    }
}

/// Explores the state space of the root of `spec`.
pub fn explore(spec: &Specification, max_states: usize) -> Result<Lts> {
    explore_process(
        &ProcessTerm::Ref(spec.root().clone()),
        spec.definitions(),
        max_states,
    )
}

/// Explores the state space reachable from `p`, breadth first.
pub fn explore_process(p: &ProcessTerm, defs: &Definitions, max_states: usize) -> Result<Lts> {
    let defs: Definitions = defs
        .iter()
        .map(|(n, d)| (n.clone(), Definition::new(n.clone(), normalize(&d.body))))
        .collect();
    let mut folds: HashMap<&ProcessTerm, &ProcName> = HashMap::new();
    for (n, d) in &defs {
        folds.entry(&d.body).or_insert(n);
    }
    let fold = |t: Arc<ProcessTerm>| -> Arc<ProcessTerm> {
        match folds.get(&*t) {
            Some(n) => Arc::new(ProcessTerm::Ref((*n).clone())),
            None => t,
        }
    };

    let mut index: HashMap<Successor, usize> = HashMap::new();
    let mut states: Vec<Successor> = Vec::new();
    let mut queue = VecDeque::new();
    let mut transitions = Vec::new();

    let mut intern = |s: Successor, states: &mut Vec<Successor>, queue: &mut VecDeque<usize>| -> Result<usize> {
        if let Some(&i) = index.get(&s) {
            return Ok(i);
        }
        if states.len() >= max_states {
            return Err(Error::StateBoundExceeded(max_states));
        }
        let i = states.len();
        index.insert(s.clone(), i);
        states.push(s);
        queue.push_back(i);
        Ok(i)
    };

    let initial = Successor::Term(fold(Arc::new(normalize(p))));
    intern(initial, &mut states, &mut queue)?;
    while let Some(i) = queue.pop_front() {
        let Successor::Term(term) = states[i].clone() else {
            continue;
        };
        for (label, next) in step(&term, &defs)? {
            let next = match next {
                Successor::Term(t) => Successor::Term(fold(t)),
                s => s,
            };
            let target = intern(next, &mut states, &mut queue)?;
            transitions.push(Transition {
                source: i,
                label,
                target,
            });
        }
    }

    let terminating = states
        .iter()
        .enumerate()
        .filter(|(_, s)| **s == Successor::Terminated)
        .map(|(i, _)| i)
        .collect();
    let mut lts = Lts::new(states.len(), 0, transitions, terminating);
    lts.state_terms = states
        .into_iter()
        .map(|s| match s {
            Successor::Term(t) => Some(t),
            Successor::Terminated => None,
        })
        .collect();
    Ok(lts)
}
