//! Process terms, specifications and the auxiliary functions on them
//! (communication application, alphabets, downward closure).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::multiactions::{is_identifier, is_quotable, Action, ActionSet, MultiAction};

/// Name of a process definition.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProcName(Arc<str>);

impl ProcName {
    pub fn new(name: &str) -> Result<Self> {
        if is_identifier(name) {
            Ok(ProcName(Arc::from(name)))
        } else {
            Err(Error::InvalidProcessName(name.to_string()))
        }
    }

    pub fn quoted(name: &str) -> Result<Self> {
        if is_quotable(name) {
            Ok(ProcName(Arc::from(name)))
        } else {
            Err(Error::InvalidProcessName(name.to_string()))
        }
    }

    pub(crate) fn generated(name: String) -> Self {
        ProcName(Arc::from(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for ProcName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for ProcName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A communication rule `lhs → rhs`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CommRule {
    lhs: MultiAction,
    rhs: Action,
}

impl CommRule {
    pub fn new(lhs: MultiAction, rhs: Action) -> Result<Self> {
        let rule = CommRule { lhs, rhs };
        rule.check()?;
        Ok(rule)
    }

    fn check(&self) -> Result<()> {
        if self.lhs.is_tau() {
            return Err(Error::TauInCommRule(self.to_string()));
        }
        if self.lhs.len() < 2 {
            return Err(Error::CommRuleTooSmall(self.to_string()));
        }
        Ok(())
    }

    pub fn lhs(&self) -> &MultiAction {
        &self.lhs
    }

    pub fn rhs(&self) -> &Action {
        &self.rhs
    }
}

impl fmt::Display for CommRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}->{}", self.lhs, self.rhs)
    }
}

impl fmt::Debug for CommRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

pub type CommSet = BTreeSet<CommRule>;
pub type AllowSet = BTreeSet<MultiAction>;
pub type RenameMap = BTreeMap<Action, Action>;

/// Process syntax tree. Subterms are shared through `Arc`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum ProcessTerm {
    Act(MultiAction),
    Delta,
    Ref(ProcName),
    Alt(Arc<ProcessTerm>, Arc<ProcessTerm>),
    Seq(Arc<ProcessTerm>, Arc<ProcessTerm>),
    Par(Arc<ProcessTerm>, Arc<ProcessTerm>),
    LeftMerge(Arc<ProcessTerm>, Arc<ProcessTerm>),
    Sync(Arc<ProcessTerm>, Arc<ProcessTerm>),
    Allow(AllowSet, Arc<ProcessTerm>),
    Block(ActionSet, Arc<ProcessTerm>),
    Rename(RenameMap, Arc<ProcessTerm>),
    Comm(CommSet, Arc<ProcessTerm>),
    Hide(ActionSet, Arc<ProcessTerm>),
}

use ProcessTerm::*;

impl ProcessTerm {
    pub fn act(alpha: MultiAction) -> Self {
        Act(alpha)
    }

    pub fn tau() -> Self {
        Act(MultiAction::tau())
    }

    pub fn action(a: Action) -> Self {
        Act(MultiAction::single(a))
    }

    pub fn reference(name: ProcName) -> Self {
        Ref(name)
    }

    pub fn alt(p: ProcessTerm, q: ProcessTerm) -> Self {
        Alt(Arc::new(p), Arc::new(q))
    }

    pub fn seq(p: ProcessTerm, q: ProcessTerm) -> Self {
        Seq(Arc::new(p), Arc::new(q))
    }

    pub fn par(p: ProcessTerm, q: ProcessTerm) -> Self {
        Par(Arc::new(p), Arc::new(q))
    }

    pub fn left_merge(p: ProcessTerm, q: ProcessTerm) -> Self {
        LeftMerge(Arc::new(p), Arc::new(q))
    }

    pub fn sync(p: ProcessTerm, q: ProcessTerm) -> Self {
        Sync(Arc::new(p), Arc::new(q))
    }

    pub fn allow(v: AllowSet, p: ProcessTerm) -> Self {
        Allow(v, Arc::new(p))
    }

    pub fn block(b: ActionSet, p: ProcessTerm) -> Self {
        Block(b, Arc::new(p))
    }

    pub fn rename(r: RenameMap, p: ProcessTerm) -> Self {
        Rename(r, Arc::new(p))
    }

    pub fn comm(c: CommSet, p: ProcessTerm) -> Self {
        Comm(c, Arc::new(p))
    }

    pub fn hide(i: ActionSet, p: ProcessTerm) -> Self {
        Hide(i, Arc::new(p))
    }

    /// Folds a nonempty list with a binary constructor, nesting to the right.
    pub fn fold_right(
        mut items: Vec<ProcessTerm>,
        op: fn(ProcessTerm, ProcessTerm) -> ProcessTerm,
    ) -> Option<ProcessTerm> {
        let mut acc = items.pop()?;
        while let Some(p) = items.pop() {
            acc = op(p, acc);
        }
        Some(acc)
    }

    /// Immediate subterms, left to right.
    pub fn children(&self) -> Vec<&Arc<ProcessTerm>> {
        match self {
            Act(_) | Delta | Ref(_) => vec![],
            Alt(p, q) | Seq(p, q) | Par(p, q) | LeftMerge(p, q) | Sync(p, q) => vec![p, q],
            Allow(_, p) | Block(_, p) | Rename(_, p) | Comm(_, p) | Hide(_, p) => vec![p],
        }
    }

    /// Calls `f` on every node of the tree (pre-order), without following references.
    pub fn visit<'a>(&'a self, f: &mut impl FnMut(&'a ProcessTerm)) {
        f(self);
        for c in self.children() {
            c.visit(f);
        }
    }

    /// Names referenced directly in this term.
    pub fn references(&self) -> BTreeSet<ProcName> {
        let mut out = BTreeSet::new();
        self.visit(&mut |t| {
            if let Ref(n) = t {
                out.insert(n.clone());
            }
        });
        out
    }

    /// Replaces every reference to `from` by a reference to `to`.
    pub fn substitute_ref(&self, from: &ProcName, to: &ProcName) -> ProcessTerm {
        match self {
            Ref(n) if n == from => Ref(to.clone()),
            Act(_) | Delta | Ref(_) => self.clone(),
            _ => self.map_children(|c| c.substitute_ref(from, to)),
        }
    }

    /// Rebuilds this node with `f` applied to each immediate subterm.
    pub fn map_children(&self, mut f: impl FnMut(&ProcessTerm) -> ProcessTerm) -> ProcessTerm {
        let mut g = |p: &Arc<ProcessTerm>| Arc::new(f(p));
        match self {
            Act(_) | Delta | Ref(_) => self.clone(),
            Alt(p, q) => Alt(g(p), g(q)),
            Seq(p, q) => Seq(g(p), g(q)),
            Par(p, q) => Par(g(p), g(q)),
            LeftMerge(p, q) => LeftMerge(g(p), g(q)),
            Sync(p, q) => Sync(g(p), g(q)),
            Allow(v, p) => Allow(v.clone(), g(p)),
            Block(b, p) => Block(b.clone(), g(p)),
            Rename(r, p) => Rename(r.clone(), g(p)),
            Comm(c, p) => Comm(c.clone(), g(p)),
            Hide(i, p) => Hide(i.clone(), g(p)),
        }
    }

    pub fn depth(&self) -> usize {
        1 + self.children().iter().map(|c| c.depth()).max().unwrap_or(0)
    }
}

/// A process definition `name ↦ body`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Definition {
    pub name: ProcName,
    pub body: ProcessTerm,
}

impl Definition {
    pub fn new(name: ProcName, body: ProcessTerm) -> Self {
        Definition { name, body }
    }
}

pub type Definitions = BTreeMap<ProcName, Definition>;

/// A validated set of definitions with a designated root.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Specification {
    definitions: Definitions,
    root: ProcName,
}

impl Specification {
    pub fn new(definitions: Vec<Definition>, root: ProcName) -> Result<Self> {
        let mut map = Definitions::new();
        for d in definitions {
            let name = d.name.clone();
            if map.insert(name.clone(), d).is_some() {
                return Err(Error::DuplicateDefinition(name.to_string()));
            }
        }
        let spec = Specification {
            definitions: map,
            root,
        };
        validate(&spec)?;
        Ok(spec)
    }

    /// Specification consisting of a single definition, which is the root.
    pub fn single(def: Definition) -> Result<Self> {
        let root = def.name.clone();
        Self::new(vec![def], root)
    }

    pub fn root(&self) -> &ProcName {
        &self.root
    }

    pub fn root_definition(&self) -> &Definition {
        &self.definitions[&self.root]
    }

    pub fn definitions(&self) -> &Definitions {
        &self.definitions
    }

    pub fn get(&self, name: &ProcName) -> Option<&Definition> {
        self.definitions.get(name)
    }

    /// Same definitions, different root.
    pub fn with_root(&self, root: ProcName) -> Result<Self> {
        if !self.definitions.contains_key(&root) {
            return Err(Error::UnknownReference(root.to_string()));
        }
        Ok(Specification {
            definitions: self.definitions.clone(),
            root,
        })
    }
}

fn lookup<'a>(defs: &'a Definitions, name: &ProcName) -> Result<&'a Definition> {
    defs.get(name)
        .ok_or_else(|| Error::UnknownReference(name.to_string()))
}

/// Visits `p` and, once each, the bodies of all definitions reachable from it.
fn visit_reachable<'a>(
    p: &'a ProcessTerm,
    defs: &'a Definitions,
    f: &mut impl FnMut(&'a ProcessTerm),
) -> Result<()> {
    let mut seen = BTreeSet::new();
    let mut stack = vec![p];
    while let Some(t) = stack.pop() {
        let mut refs = Vec::new();
        t.visit(&mut |n| {
            f(n);
            if let Ref(name) = n {
                refs.push(name);
            }
        });
        for name in refs {
            if seen.insert(name.clone()) {
                stack.push(&lookup(defs, name)?.body);
            }
        }
    }
    Ok(())
}

/// Actions occurring in multi-action leaves of `p` and of the definitions it
/// reaches. Operator sets are not included.
pub fn acts(p: &ProcessTerm, defs: &Definitions) -> Result<ActionSet> {
    let mut out = ActionSet::new();
    visit_reachable(p, defs, &mut |t| {
        if let Act(alpha) = t {
            out.extend(alpha.actions().iter().cloned());
        }
    })?;
    Ok(out)
}

/// Actions occurring anywhere in `p` and reachable definitions, operator sets included.
pub fn all_actions(p: &ProcessTerm, defs: &Definitions) -> Result<ActionSet> {
    let mut out = ActionSet::new();
    visit_reachable(p, defs, &mut |t| match t {
        Act(alpha) => out.extend(alpha.actions().iter().cloned()),
        Allow(v, _) => out.extend(v.iter().flat_map(|m| m.actions().iter().cloned())),
        Block(s, _) | Hide(s, _) => out.extend(s.iter().cloned()),
        Rename(r, _) => out.extend(r.iter().flat_map(|(a, b)| [a.clone(), b.clone()])),
        Comm(c, _) => out.extend(c.iter().flat_map(|rule| {
            rule.lhs
                .actions()
                .iter()
                .cloned()
                .chain(std::iter::once(rule.rhs.clone()))
        })),
        _ => {}
    })?;
    Ok(out)
}

/// True iff `p` uses only multi-actions, `δ`, `+` and `·`.
pub fn is_sequential(p: &ProcessTerm) -> bool {
    match p {
        Act(_) | Delta => true,
        Alt(p, q) | Seq(p, q) => is_sequential(p) && is_sequential(q),
        _ => false,
    }
}

/// True iff no multi-action leaf reachable from `p` is `τ`.
pub fn is_tau_free(p: &ProcessTerm, defs: &Definitions) -> Result<bool> {
    let mut free = true;
    visit_reachable(p, defs, &mut |t| {
        if let Act(alpha) = t {
            if alpha.is_tau() {
                free = false;
            }
        }
    })?;
    Ok(free)
}

/// Checks that left-hand sides of distinct rules share no actions.
pub fn check_comm_set(c: &CommSet) -> Result<()> {
    let rules: Vec<&CommRule> = c.iter().collect();
    for (i, r1) in rules.iter().enumerate() {
        r1.check()?;
        let s1 = r1.lhs.acts();
        for r2 in &rules[i + 1..] {
            if !s1.is_disjoint(&r2.lhs.acts()) {
                return Err(Error::OverlappingCommRules(r1.to_string(), r2.to_string()));
            }
        }
    }
    Ok(())
}

/// Applies the communications in `c` to `alpha`: every embedded occurrence of
/// a left-hand side is replaced by its result action. All rules act on the
/// original multi-action, so results are never fed into other rules.
pub fn gamma(c: &CommSet, alpha: &MultiAction) -> Result<MultiAction> {
    check_comm_set(c)?;
    Ok(gamma_unchecked(c, alpha))
}

pub(crate) fn gamma_unchecked(c: &CommSet, alpha: &MultiAction) -> MultiAction {
    let mut removed = MultiAction::tau();
    let mut produced = Vec::new();
    for rule in c {
        let mut rest = alpha.clone();
        while rule.lhs.is_submulti_of(&rest) {
            rest = rest.subtract(&rule.lhs);
            removed = removed.join(&rule.lhs);
            produced.push(rule.rhs.clone());
        }
    }
    if produced.is_empty() {
        return alpha.clone();
    }
    alpha.subtract(&removed).join(&MultiAction::from_actions(produced))
}

/// The alphabet of a basic process: the multi-actions occurring in it, `τ` excluded.
pub fn alphabet(p: &ProcessTerm) -> Result<BTreeSet<MultiAction>> {
    let mut out = BTreeSet::new();
    fn go(p: &ProcessTerm, out: &mut BTreeSet<MultiAction>) -> Result<()> {
        match p {
            Act(alpha) => {
                if !alpha.is_tau() {
                    out.insert(alpha.clone());
                }
                Ok(())
            }
            Delta => Ok(()),
            Alt(p, q) | Seq(p, q) => {
                go(p, out)?;
                go(q, out)
            }
            _ => Err(Error::NotBasicProcess),
        }
    }
    go(p, &mut out)?;
    Ok(out)
}

/// All nonempty sub-multisets of members of `v`.
pub fn downclose(v: &BTreeSet<MultiAction>) -> BTreeSet<MultiAction> {
    let mut out = BTreeSet::new();
    for alpha in v {
        // group by action with multiplicities, then enumerate count vectors
        let mut groups: Vec<(Action, usize)> = Vec::new();
        for a in alpha.actions() {
            match groups.last_mut() {
                Some((b, n)) if b == a => *n += 1,
                _ => groups.push((a.clone(), 1)),
            }
        }
        let mut counts = vec![0usize; groups.len()];
        loop {
            let sub: Vec<Action> = groups
                .iter()
                .zip(&counts)
                .flat_map(|((a, _), &k)| std::iter::repeat_n(a.clone(), k))
                .collect();
            if !sub.is_empty() {
                out.insert(MultiAction::from_actions(sub));
            }
            let mut i = 0;
            while i < counts.len() {
                if counts[i] < groups[i].1 {
                    counts[i] += 1;
                    break;
                }
                counts[i] = 0;
                i += 1;
            }
            if i == counts.len() {
                break;
            }
        }
    }
    out
}

/// Left-hand sides of `c`.
pub fn comm_domain(c: &CommSet) -> BTreeSet<MultiAction> {
    c.iter().map(|r| r.lhs.clone()).collect()
}

/// Checks references, recursion shape and operator-set invariants.
///
/// A definition may refer to itself and to other definitions, but the
/// reference graph may not contain a cycle through two or more definitions.
pub fn validate(spec: &Specification) -> Result<()> {
    let defs = &spec.definitions;
    lookup(defs, &spec.root)?;
    let proc_names: BTreeSet<&str> = defs.keys().map(|n| n.as_str()).collect();

    let mut graph: BTreeMap<&ProcName, BTreeSet<ProcName>> = BTreeMap::new();
    for (name, def) in defs {
        let mut err = None;
        def.body.visit(&mut |t| {
            if err.is_some() {
                return;
            }
            let r = match t {
                Ref(n) => lookup(defs, n).map(|_| ()),
                Act(alpha) => alpha
                    .actions()
                    .iter()
                    .find(|a| proc_names.contains(a.name()))
                    .map_or(Ok(()), |a| Err(Error::NameClash(a.to_string()))),
                Allow(v, _) if v.iter().any(|m| m.is_tau()) => Err(Error::TauInAllowSet),
                Comm(c, _) => check_comm_set(c),
                _ => Ok(()),
            };
            if let Err(e) = r {
                err = Some(e);
            }
        });
        if let Some(e) = err {
            return Err(e);
        }
        let mut refs = def.body.references();
        refs.remove(name);
        graph.insert(name, refs);
    }

    // cycle detection on the reference graph without self-loops
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        Fresh,
        Active,
        Done,
    }
    let mut marks: BTreeMap<&ProcName, Mark> = graph.keys().map(|k| (*k, Mark::Fresh)).collect();
    fn dfs<'a>(
        n: &'a ProcName,
        graph: &'a BTreeMap<&'a ProcName, BTreeSet<ProcName>>,
        marks: &mut BTreeMap<&'a ProcName, Mark>,
    ) -> Result<()> {
        marks.insert(n, Mark::Active);
        for m in &graph[n] {
            match marks[m] {
                Mark::Active => return Err(Error::MutualRecursion(m.to_string())),
                Mark::Fresh => dfs(m, graph, marks)?,
                Mark::Done => {}
            }
        }
        marks.insert(n, Mark::Done);
        Ok(())
    }
    for n in graph.keys() {
        if marks[n] == Mark::Fresh {
            dfs(n, &graph, &mut marks)?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(names: &[&str]) -> MultiAction {
        MultiAction::parse_names(names)
    }
    fn a(name: &str) -> Action {
        Action::new(name).unwrap()
    }
    fn act(names: &[&str]) -> ProcessTerm {
        ProcessTerm::act(m(names))
    }
    fn pn(name: &str) -> ProcName {
        ProcName::new(name).unwrap()
    }
    fn rule(lhs: &[&str], rhs: &str) -> CommRule {
        CommRule::new(m(lhs), a(rhs)).unwrap()
    }

    fn fifo() -> Specification {
        let body = ProcessTerm::seq(
            act(&["a"]),
            ProcessTerm::seq(act(&["b"]), ProcessTerm::reference(pn("Fifo"))),
        );
        Specification::single(Definition::new(pn("Fifo"), body)).unwrap()
    }

    #[test]
    fn acts_examples() {
        let spec = fifo();
        let root = ProcessTerm::reference(pn("Fifo"));
        assert_eq!(
            acts(&root, spec.definitions()).unwrap(),
            ActionSet::parse_names(&["a", "b"])
        );
        assert!(acts(&ProcessTerm::Delta, spec.definitions()).unwrap().is_empty());
        let blocked = ProcessTerm::block(ActionSet::parse_names(&["a"]), act(&["a", "b"]));
        assert_eq!(
            acts(&blocked, spec.definitions()).unwrap(),
            ActionSet::parse_names(&["a", "b"])
        );
        let dangling = ProcessTerm::reference(pn("Nope"));
        assert_eq!(
            acts(&dangling, spec.definitions()),
            Err(Error::UnknownReference("Nope".into()))
        );
    }

    #[test]
    fn sequential_examples() {
        let p = ProcessTerm::alt(ProcessTerm::seq(act(&["a"]), act(&["b"])), act(&["c"]));
        assert!(is_sequential(&p));
        assert!(!is_sequential(&ProcessTerm::par(act(&["a"]), act(&["b"]))));
        assert!(!is_sequential(&ProcessTerm::reference(pn("P"))));
    }

    #[test]
    fn tau_free_examples() {
        let spec = fifo();
        let d = spec.definitions();
        let p = ProcessTerm::seq(act(&["a", "b"]), act(&["c"]));
        assert!(is_tau_free(&p, d).unwrap());
        assert!(!is_tau_free(&ProcessTerm::alt(act(&["a"]), ProcessTerm::tau()), d).unwrap());
        let q = ProcessTerm::seq(
            act(&["a"]),
            ProcessTerm::seq(act(&["b"]), ProcessTerm::reference(pn("Fifo"))),
        );
        assert!(is_tau_free(&q, d).unwrap());
        // hiding does not count syntactically
        let h = ProcessTerm::hide(ActionSet::parse_names(&["a"]), act(&["a"]));
        assert!(is_tau_free(&h, d).unwrap());
    }

    #[test]
    fn gamma_examples() {
        let f = Action::quoted("a#f#").unwrap();
        let g = Action::quoted("a#g#").unwrap();
        let t = Action::quoted("#tau").unwrap();
        let c: CommSet = [CommRule::new(
            MultiAction::from_actions([f.clone(), g.clone()]),
            t.clone(),
        )
        .unwrap()]
        .into();
        let alpha = MultiAction::from_actions([a("a"), f, g]);
        assert_eq!(gamma(&c, &alpha).unwrap(), MultiAction::from_actions([a("a"), t]));

        let c: CommSet = [rule(&["a", "b"], "c")].into();
        assert_eq!(gamma(&c, &m(&["a"])).unwrap(), m(&["a"]));
        assert_eq!(gamma(&c, &m(&["a", "b", "a", "b"])).unwrap(), m(&["c", "c"]));
        assert_eq!(gamma(&c, &m(&["a", "b", "a"])).unwrap(), m(&["a", "c"]));
    }

    #[test]
    fn gamma_rejects_overlap() {
        let c: CommSet = [rule(&["a", "b"], "c"), rule(&["b", "d"], "e")].into();
        assert!(matches!(
            gamma(&c, &m(&["a"])),
            Err(Error::OverlappingCommRules(..))
        ));
    }

    #[test]
    fn comm_rule_constraints() {
        assert!(matches!(
            CommRule::new(MultiAction::tau(), a("c")),
            Err(Error::TauInCommRule(_))
        ));
        assert!(matches!(
            CommRule::new(m(&["a"]), a("c")),
            Err(Error::CommRuleTooSmall(_))
        ));
    }

    #[test]
    fn alphabet_examples() {
        let p = ProcessTerm::alt(
            ProcessTerm::seq(act(&["a", "b"]), act(&["c"])),
            ProcessTerm::Delta,
        );
        assert_eq!(alphabet(&p).unwrap(), [m(&["a", "b"]), m(&["c"])].into());
        assert!(alphabet(&ProcessTerm::tau()).unwrap().is_empty());
        assert_eq!(
            alphabet(&ProcessTerm::alt(act(&["a"]), act(&["a"]))).unwrap(),
            [m(&["a"])].into()
        );
        assert_eq!(
            alphabet(&ProcessTerm::par(act(&["a"]), act(&["b"]))),
            Err(Error::NotBasicProcess)
        );
    }

    #[test]
    fn downclose_examples() {
        assert_eq!(
            downclose(&[m(&["a", "b"])].into()),
            [m(&["a"]), m(&["b"]), m(&["a", "b"])].into()
        );
        assert!(downclose(&BTreeSet::new()).is_empty());
        assert_eq!(downclose(&[m(&["a"])].into()), [m(&["a"])].into());
        assert_eq!(
            downclose(&[m(&["a", "a"])].into()),
            [m(&["a"]), m(&["a", "a"])].into()
        );
    }

    #[test]
    fn comm_domain_examples() {
        let c: CommSet = [rule(&["a", "b"], "c"), rule(&["d", "e"], "f")].into();
        assert_eq!(comm_domain(&c), [m(&["a", "b"]), m(&["d", "e"])].into());
        assert!(comm_domain(&CommSet::new()).is_empty());
    }

    #[test]
    fn validate_examples() {
        let p = Definition::new(
            pn("P"),
            ProcessTerm::seq(act(&["a"]), ProcessTerm::reference(pn("P"))),
        );
        assert!(Specification::single(p).is_ok());

        let p = Definition::new(
            pn("P"),
            ProcessTerm::seq(act(&["a"]), ProcessTerm::reference(pn("Q"))),
        );
        let q = Definition::new(
            pn("Q"),
            ProcessTerm::seq(act(&["b"]), ProcessTerm::reference(pn("P"))),
        );
        assert!(matches!(
            Specification::new(vec![p, q], pn("P")),
            Err(Error::MutualRecursion(_))
        ));

        // non-cyclic references to other definitions are fine
        let top = Definition::new(
            pn("Top"),
            ProcessTerm::par(ProcessTerm::reference(pn("P")), act(&["c"])),
        );
        let p = Definition::new(
            pn("P"),
            ProcessTerm::seq(act(&["a"]), ProcessTerm::reference(pn("P"))),
        );
        assert!(Specification::new(vec![top, p], pn("Top")).is_ok());

        let bad = Definition::new(pn("P"), ProcessTerm::reference(pn("Q")));
        assert_eq!(
            Specification::single(bad),
            Err(Error::UnknownReference("Q".into()))
        );

        let clash = Definition::new(pn("P"), act(&["P"]));
        assert_eq!(Specification::single(clash), Err(Error::NameClash("P".into())));

        let allow = Definition::new(
            pn("P"),
            ProcessTerm::allow([MultiAction::tau()].into(), act(&["a"])),
        );
        assert_eq!(Specification::single(allow), Err(Error::TauInAllowSet));
    }

    #[test]
    fn substitute_ref_rewrites_all_occurrences() {
        let p = ProcessTerm::alt(
            ProcessTerm::reference(pn("P")),
            ProcessTerm::seq(act(&["a"]), ProcessTerm::reference(pn("P"))),
        );
        let q = p.substitute_ref(&pn("P"), &pn("Q"));
        assert_eq!(q.references(), [pn("Q")].into());
    }
}
