//! Strong bisimulation by signature-based partition refinement.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;

use crate::multiactions::MultiAction;
use crate::semantics::{Lts, Transition};

/// Disjoint, exhaustive blocks of state indices.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Partition {
    pub blocks: Vec<Vec<usize>>,
}

impl Partition {
    fn from_assignment(block_of: &[usize]) -> Self {
        let count = block_of.iter().map(|b| b + 1).max().unwrap_or(0);
        let mut blocks = vec![Vec::new(); count];
        for (s, &b) in block_of.iter().enumerate() {
            blocks[b].push(s);
        }
        Partition { blocks }
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }
}

/// Why the last pair of states on a witness path differ.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Distinction {
    /// Only the left state has successfully terminated.
    TerminatedLeft,
    TerminatedRight,
    /// The left state can do this label into a class the right cannot reach.
    LeftOnly(MultiAction),
    RightOnly(MultiAction),
}

/// A distinguishing path: labels taken in lock-step from both initial states,
/// followed by the point where the two sides part ways.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Witness {
    pub trace: Vec<MultiAction>,
    pub distinction: Distinction,
}

impl Witness {
    /// Full label sequence, including the final separating label if any.
    pub fn labels(&self) -> Vec<MultiAction> {
        let mut out = self.trace.clone();
        match &self.distinction {
            Distinction::LeftOnly(a) | Distinction::RightOnly(a) => out.push(a.clone()),
            _ => {}
        }
        out
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: Vec<String> = self.labels().iter().map(ToString::to_string).collect();
        let path = if labels.is_empty() {
            "(initial states)".to_string()
        } else {
            labels.join(" -> ")
        };
        let note = match &self.distinction {
            Distinction::TerminatedLeft => "only the left side has terminated",
            Distinction::TerminatedRight => "only the right side has terminated",
            Distinction::LeftOnly(_) => "last step matched only on the left",
            Distinction::RightOnly(_) => "last step matched only on the right",
        };
        write!(f, "{path} ({note})")
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Verdict {
    pub bisimilar: bool,
    pub witness: Option<Witness>,
}

/// Interned successor lists: `succ[s]` holds `(label id, target)`.
struct Graph {
    succ: Vec<Vec<(usize, usize)>>,
    terminating: Vec<bool>,
    labels: Vec<MultiAction>,
}

impl Graph {
    fn new(ltss: &[&Lts]) -> (Graph, Vec<usize>) {
        let mut label_ids: BTreeMap<&MultiAction, usize> = BTreeMap::new();
        for lts in ltss {
            for t in &lts.transitions {
                let next = label_ids.len();
                label_ids.entry(&t.label).or_insert(next);
            }
        }
        let total: usize = ltss.iter().map(|l| l.num_states).sum();
        let mut succ = vec![Vec::new(); total];
        let mut terminating = vec![false; total];
        let mut offsets = Vec::new();
        let mut offset = 0;
        for lts in ltss {
            offsets.push(offset);
            for t in &lts.transitions {
                succ[offset + t.source].push((label_ids[&t.label], offset + t.target));
            }
            for &s in &lts.terminating {
                terminating[offset + s] = true;
            }
            offset += lts.num_states;
        }
        let mut labels = vec![MultiAction::tau(); label_ids.len()];
        for (l, i) in label_ids {
            labels[i] = l.clone();
        }
        (
            Graph {
                succ,
                terminating,
                labels,
            },
            offsets,
        )
    }

    /// Block assignment after every refinement round; the last entry is the
    /// coarsest bisimulation.
    fn refine(&self) -> Vec<Vec<usize>> {
        let n = self.succ.len();
        let mut current: Vec<usize> = self.terminating.iter().map(|&t| usize::from(t)).collect();
        // Keep ids dense even when only one class is present.
        if !current.is_empty() && current.iter().all(|&b| b == 1) {
            current.iter_mut().for_each(|b| *b = 0);
        }
        let mut history = vec![current.clone()];
        let mut count = current.iter().collect::<BTreeSet<_>>().len();
        loop {
            let mut ids: HashMap<(usize, Vec<(usize, usize)>), usize> = HashMap::new();
            let mut next = Vec::with_capacity(n);
            for s in 0..n {
                let mut sig: Vec<(usize, usize)> =
                    self.succ[s].iter().map(|&(l, t)| (l, current[t])).collect();
                sig.sort_unstable();
                sig.dedup();
                let fresh = ids.len();
                next.push(*ids.entry((current[s], sig)).or_insert(fresh));
            }
            let new_count = ids.len();
            history.push(next.clone());
            if new_count == count {
                return history;
            }
            count = new_count;
            current = next;
        }
    }

    fn has_move(&self, s: usize, label: usize, block: usize, assignment: &[usize]) -> bool {
        self.succ[s]
            .iter()
            .any(|&(l, t)| l == label && assignment[t] == block)
    }

    /// First round in which `s` and `t` are in different blocks.
    fn separation(history: &[Vec<usize>], s: usize, t: usize) -> Option<usize> {
        history.iter().position(|round| round[s] != round[t])
    }

    fn witness(&self, history: &[Vec<usize>], mut s: usize, mut t: usize) -> Witness {
        let mut trace = Vec::new();
        loop {
            let k = Self::separation(history, s, t).expect("states are separated");
            if k == 0 {
                let distinction = if self.terminating[s] {
                    Distinction::TerminatedLeft
                } else {
                    Distinction::TerminatedRight
                };
                return Witness { trace, distinction };
            }
            let prev = &history[k - 1];
            let left_move = self.succ[s]
                .iter()
                .find(|&&(l, u)| !self.has_move(t, l, prev[u], prev))
                .map(|&(l, u)| (l, u, true));
            let (label, u, from_left) = left_move.unwrap_or_else(|| {
                let &(l, u) = self.succ[t]
                    .iter()
                    .find(|&&(l, u)| !self.has_move(s, l, prev[u], prev))
                    .expect("signatures differ");
                (l, u, false)
            });
            let other = if from_left { t } else { s };
            // Among the other side's moves with the same label, follow the one
            // separated earliest so the witness stays short.
            let matching = self.succ[other]
                .iter()
                .filter(|&&(l, _)| l == label)
                .map(|&(_, v)| v)
                .min_by_key(|&v| Self::separation(history, u, v));
            let action = self.labels[label].clone();
            match matching {
                None => {
                    let distinction = if from_left {
                        Distinction::LeftOnly(action)
                    } else {
                        Distinction::RightOnly(action)
                    };
                    return Witness { trace, distinction };
                }
                Some(v) => {
                    trace.push(action);
                    if from_left {
                        (s, t) = (u, v);
                    } else {
                        (s, t) = (v, u);
                    }
                }
            }
        }
    }
}

/// Decides strong bisimilarity of the initial states of `l1` and `l2`.
pub fn bisimilar(l1: &Lts, l2: &Lts) -> Verdict {
    let (graph, offsets) = Graph::new(&[l1, l2]);
    let history = graph.refine();
    let last = history.last().expect("at least one round");
    let (s, t) = (l1.initial, offsets[1] + l2.initial);
    if last[s] == last[t] {
        Verdict {
            bisimilar: true,
            witness: None,
        }
    } else {
        Verdict {
            bisimilar: false,
            witness: Some(graph.witness(&history, s, t)),
        }
    }
}

pub fn is_bisimilar(l1: &Lts, l2: &Lts) -> bool {
    bisimilar(l1, l2).bisimilar
}

/// The coarsest strong bisimulation on the states of `l`.
pub fn coarsest_partition(l: &Lts) -> Partition {
    let (graph, _) = Graph::new(&[l]);
    let history = graph.refine();
    Partition::from_assignment(history.last().expect("at least one round"))
}

/// Quotient of `l` by its coarsest bisimulation, restricted to reachable
/// classes and numbered in breadth-first order from the initial class.
pub fn reduce(l: &Lts) -> Lts {
    let (graph, _) = Graph::new(&[l]);
    let history = graph.refine();
    let block_of = history.last().expect("at least one round");
    let mut representative: BTreeMap<usize, usize> = BTreeMap::new();
    for (s, &b) in block_of.iter().enumerate().take(l.num_states) {
        representative.entry(b).or_insert(s);
    }
    let succ = l.successors();
    let mut number: HashMap<usize, usize> = HashMap::new();
    let mut queue = VecDeque::new();
    number.insert(block_of[l.initial], 0);
    queue.push_back(block_of[l.initial]);
    let mut transitions = BTreeSet::new();
    let mut terminating = BTreeSet::new();
    while let Some(b) = queue.pop_front() {
        let rep = representative[&b];
        let src = number[&b];
        if l.terminating.contains(&rep) {
            terminating.insert(src);
        }
        let mut moves = succ[rep].clone();
        moves.sort();
        for (label, target) in moves {
            let tb = block_of[target];
            let next = number.len();
            let dst = *number.entry(tb).or_insert_with(|| {
                queue.push_back(tb);
                next
            });
            transitions.insert((src, label.clone(), dst));
        }
    }
    let transitions = transitions
        .into_iter()
        .map(|(source, label, target)| Transition {
            source,
            label,
            target,
        })
        .collect();
    Lts::new(number.len(), 0, transitions, terminating)
}

#[cfg(test)]
pub(crate) mod oracle {
    use super::*;

    /// Greatest bisimulation computed naively as a fixpoint over relations.
    pub fn bisimilar_by_relations(l1: &Lts, l2: &Lts) -> bool {
        let (g, offsets) = Graph::new(&[l1, l2]);
        let n = g.succ.len();
        let mut rel: Vec<Vec<bool>> = (0..n)
            .map(|s| (0..n).map(|t| g.terminating[s] == g.terminating[t]).collect())
            .collect();
        let transfers = |rel: &Vec<Vec<bool>>, s: usize, t: usize| {
            g.succ[s]
                .iter()
                .all(|&(l, u)| g.succ[t].iter().any(|&(m, v)| l == m && rel[u][v]))
        };
        loop {
            let mut changed = false;
            for s in 0..n {
                for t in 0..n {
                    if rel[s][t] && !(transfers(&rel, s, t) && transfers(&rel, t, s)) {
                        rel[s][t] = false;
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        rel[l1.initial][offsets[1] + l2.initial]
    }
}
