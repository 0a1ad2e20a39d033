//! Process splitting: isolation, coisolation, the `⟨·⟩` wrapper and the
//! splitting function with generated recursive definitions.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::multiactions::{Action, ActionSet, MultiAction, RESERVED_SEPARATOR};
use crate::process::{
    acts, is_sequential, is_tau_free, CommRule, CommSet, Definition, Definitions, ProcName,
    ProcessTerm, Specification,
};

/// A finite string over `{1, 2}`; the empty word is `ε`.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BranchWord(String);

impl BranchWord {
    pub fn epsilon() -> Self {
        BranchWord(String::new())
    }

    /// Parses a digit string; `""` and `"ε"` both denote the empty word.
    pub fn parse(s: &str) -> Result<Self> {
        if s == "ε" {
            return Ok(Self::epsilon());
        }
        if s.chars().all(|c| c == '1' || c == '2') {
            Ok(BranchWord(s.to_string()))
        } else {
            Err(Error::InvalidBranchWord(s.to_string()))
        }
    }

    pub fn left(&self) -> Self {
        BranchWord(format!("{}1", self.0))
    }

    pub fn right(&self) -> Self {
        BranchWord(format!("{}2", self.0))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn is_epsilon(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for BranchWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for BranchWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            f.write_str("ε")
        } else {
            f.write_str(&self.0)
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum FreshKind {
    /// Announces that the isolating side performed the action.
    F,
    /// Observes that the other side performed the action.
    G,
}

/// Renders the fresh action for `(kind, a, w)` as `a#f#w` or `a#g#w`.
pub fn fresh(kind: FreshKind, a: &Action, w: &BranchWord) -> Result<Action> {
    if a.has_reserved_separator() {
        return Err(Error::ReservedSeparatorInAction(a.to_string()));
    }
    let k = match kind {
        FreshKind::F => 'f',
        FreshKind::G => 'g',
    };
    let sep = RESERVED_SEPARATOR;
    Ok(Action::generated(format!("{a}{sep}{k}{sep}{w}")))
}

fn fresh_unchecked(kind: FreshKind, a: &Action, w: &BranchWord) -> Action {
    fresh(kind, a, w).expect("alphabet checked for reserved separator")
}

/// Alphabet, placeholder action and the branch words in use.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SubstitutionEnvironment {
    pub alphabet: ActionSet,
    pub tau_action: Action,
    pub words: BTreeSet<BranchWord>,
}

impl SubstitutionEnvironment {
    pub fn new(alphabet: ActionSet) -> Result<Self> {
        if let Some(a) = alphabet.iter().find(|a| a.has_reserved_separator()) {
            return Err(Error::ReservedSeparatorInAction(a.to_string()));
        }
        Ok(SubstitutionEnvironment {
            alphabet,
            tau_action: Action::generated(format!("{RESERVED_SEPARATOR}tau")),
            words: BTreeSet::new(),
        })
    }

    pub fn with_words<I: IntoIterator<Item = BranchWord>>(mut self, words: I) -> Self {
        self.words.extend(words);
        self
    }

    pub fn dom(&self) -> BTreeSet<(Action, BranchWord)> {
        self.alphabet
            .iter()
            .flat_map(|a| self.words.iter().map(move |w| (a.clone(), w.clone())))
            .collect()
    }

    pub fn img(&self) -> ActionSet {
        self.dom()
            .iter()
            .flat_map(|(a, w)| {
                [
                    fresh_unchecked(FreshKind::F, a, w),
                    fresh_unchecked(FreshKind::G, a, w),
                ]
            })
            .collect()
    }

    /// `{ f_w(a) ⊔ g_w(a) → tau }` over the domain.
    pub fn comm(&self) -> CommSet {
        self.dom()
            .iter()
            .map(|(a, w)| {
                let lhs = MultiAction::from_actions([
                    fresh_unchecked(FreshKind::F, a, w),
                    fresh_unchecked(FreshKind::G, a, w),
                ]);
                CommRule::new(lhs, self.tau_action.clone()).expect("two distinct actions")
            })
            .collect()
    }

    fn check_actions(&self, actions: &ActionSet) -> Result<()> {
        match actions.iter().find(|a| !self.alphabet.contains(a)) {
            Some(a) => Err(Error::ActionOutsideAlphabet(a.to_string())),
            None => Ok(()),
        }
    }
}

/// How branch words evolve at choice nodes.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum WordMode {
    /// Append `1`/`2` at every `+`.
    #[default]
    Advance,
    /// Never change the word. Unsound; kept to demonstrate why words exist.
    Frozen,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Side {
    Isolate,
    Coisolate,
}

fn isol_in(
    p: &ProcessTerm,
    a_set: &ActionSet,
    w: &BranchWord,
    side: Side,
    mode: WordMode,
    words: &mut BTreeSet<BranchWord>,
) -> ProcessTerm {
    use ProcessTerm::*;
    match p {
        Act(alpha) => {
            if !alpha.is_empty() {
                words.insert(w.clone());
            }
            let mut out = Vec::with_capacity(alpha.len() * 2);
            for a in alpha.actions() {
                let inside = a_set.contains(a);
                match (side, inside) {
                    (Side::Isolate, true) | (Side::Coisolate, false) => {
                        out.push(a.clone());
                        out.push(fresh_unchecked(FreshKind::F, a, w));
                    }
                    _ => out.push(fresh_unchecked(FreshKind::G, a, w)),
                }
            }
            Act(MultiAction::from_actions(out))
        }
        Delta => Delta,
        Seq(p, q) => ProcessTerm::seq(
            isol_in(p, a_set, w, side, mode, words),
            isol_in(q, a_set, w, side, mode, words),
        ),
        Alt(p, q) => {
            let (wl, wr) = match mode {
                WordMode::Advance => (w.left(), w.right()),
                WordMode::Frozen => (w.clone(), w.clone()),
            };
            ProcessTerm::alt(
                isol_in(p, a_set, &wl, side, mode, words),
                isol_in(q, a_set, &wr, side, mode, words),
            )
        }
        _ => unreachable!("caller checked the term is sequential"),
    }
}

fn check_isol_args(p: &ProcessTerm, a_set: &ActionSet, env: &SubstitutionEnvironment) -> Result<()> {
    if !is_sequential(p) {
        return Err(Error::NotSequential);
    }
    env.check_actions(&acts(p, &Definitions::new())?)?;
    env.check_actions(a_set)
}

/// The `A`-isolation of a sequential process.
pub fn isolate(
    p: &ProcessTerm,
    a_set: &ActionSet,
    w: &BranchWord,
    env: &SubstitutionEnvironment,
) -> Result<ProcessTerm> {
    check_isol_args(p, a_set, env)?;
    Ok(isol_in(p, a_set, w, Side::Isolate, WordMode::Advance, &mut BTreeSet::new()))
}

/// The `A`-coisolation of a sequential process.
pub fn coisolate(
    p: &ProcessTerm,
    a_set: &ActionSet,
    w: &BranchWord,
    env: &SubstitutionEnvironment,
) -> Result<ProcessTerm> {
    check_isol_args(p, a_set, env)?;
    Ok(isol_in(p, a_set, w, Side::Coisolate, WordMode::Advance, &mut BTreeSet::new()))
}

/// `∂_img(hide_{tau}(Γ_comm(p)))`.
pub fn qmark(p: ProcessTerm, env: &SubstitutionEnvironment) -> ProcessTerm {
    let hide: ActionSet = [env.tau_action.clone()].into_iter().collect();
    ProcessTerm::block(env.img(), ProcessTerm::hide(hide, ProcessTerm::comm(env.comm(), p)))
}

/// Key of a generated definition: original name, split set, word.
pub type SplitKey = (ProcName, ActionSet, BranchWord);

/// Name of the generated definition `⊛(P, A, w)`.
pub fn split_name(name: &ProcName, a_set: &ActionSet, w: &BranchWord) -> ProcName {
    let sep = RESERVED_SEPARATOR;
    ProcName::generated(format!("{name}{sep}split{sep}{a_set}{sep}{w}"))
}

#[derive(Clone, Debug)]
pub struct SplitResult {
    pub term: ProcessTerm,
    pub new_definitions: BTreeMap<SplitKey, Definition>,
    pub env: SubstitutionEnvironment,
    pub warnings: Vec<String>,
}

impl SplitResult {
    pub fn definitions(&self) -> Vec<Definition> {
        self.new_definitions.values().cloned().collect()
    }

    /// Generated definitions plus a root definition `name = term`.
    pub fn into_specification(&self, name: ProcName) -> Result<Specification> {
        let mut defs = self.definitions();
        defs.push(Definition::new(name.clone(), self.term.clone()));
        Specification::new(defs, name)
    }
}

#[derive(Clone, Debug, Default)]
pub struct SplitOptions {
    /// Alphabet of the environment; defaults to the actions of the process
    /// together with the split set.
    pub alphabet: Option<ActionSet>,
    pub word_mode: WordMode,
}

struct Splitter<'a> {
    defs: &'a Definitions,
    a_set: &'a ActionSet,
    mode: WordMode,
    env: SubstitutionEnvironment,
    words: BTreeSet<BranchWord>,
    pending: Vec<(ProcName, BranchWord)>,
    done: BTreeMap<SplitKey, Definition>,
    saw_hide: bool,
}

impl Splitter<'_> {
    fn qmark_of(&mut self, p: &ProcessTerm, w: &BranchWord) -> ProcessTerm {
        let i = isol_in(p, self.a_set, w, Side::Isolate, self.mode, &mut self.words);
        let c = isol_in(p, self.a_set, w, Side::Coisolate, self.mode, &mut self.words);
        qmark(ProcessTerm::par(i, c), &self.env)
    }

    fn split(&mut self, p: &ProcessTerm, w: &BranchWord) -> ProcessTerm {
        use ProcessTerm::*;
        if is_sequential(p) {
            return self.qmark_of(p, w);
        }
        match p {
            Ref(name) => {
                let key = (name.clone(), self.a_set.clone(), w.clone());
                if !self.done.contains_key(&key) && !self.pending.iter().any(|(n, v)| n == name && v == w) {
                    self.pending.push((name.clone(), w.clone()));
                }
                Ref(split_name(name, self.a_set, w))
            }
            Seq(..) => {
                // Maximal runs of sequential factors are split as one unit.
                let mut factors = Vec::new();
                flatten_seq(p, &mut factors);
                let mut parts = Vec::new();
                let mut run: Vec<ProcessTerm> = Vec::new();
                for f in factors {
                    if is_sequential(f) {
                        run.push(f.clone());
                    } else {
                        if let Some(s) = ProcessTerm::fold_right(std::mem::take(&mut run), ProcessTerm::seq) {
                            parts.push(self.qmark_of(&s, w));
                        }
                        parts.push(self.split(f, w));
                    }
                }
                if let Some(s) = ProcessTerm::fold_right(run, ProcessTerm::seq) {
                    parts.push(self.qmark_of(&s, w));
                }
                ProcessTerm::fold_right(parts, ProcessTerm::seq).expect("nonempty chain")
            }
            Hide(..) => {
                self.saw_hide = true;
                p.map_children(|c| self.split(c, w))
            }
            _ => p.map_children(|c| self.split(c, w)),
        }
    }

    fn run(&mut self, p: &ProcessTerm, w: &BranchWord) -> ProcessTerm {
        let term = self.split(p, w);
        while let Some((name, v)) = self.pending.pop() {
            let key = (name.clone(), self.a_set.clone(), v.clone());
            if self.done.contains_key(&key) {
                continue;
            }
            // Reserve the key first so recursive references do not requeue it.
            let placeholder = Definition::new(split_name(&name, self.a_set, &v), ProcessTerm::Delta);
            self.done.insert(key.clone(), placeholder);
            let body = self.split(&self.defs[&name].body.clone(), &v);
            self.done.get_mut(&key).expect("reserved").body = body;
        }
        term
    }
}

fn flatten_seq<'a>(p: &'a ProcessTerm, out: &mut Vec<&'a ProcessTerm>) {
    match p {
        ProcessTerm::Seq(a, b) => {
            flatten_seq(a, out);
            flatten_seq(b, out);
        }
        _ => out.push(p),
    }
}

/// Splits `p` along `a_set` starting from word `w`. References are replaced by
/// references to generated definitions, one per reachable definition.
pub fn split_term(
    p: &ProcessTerm,
    defs: &Definitions,
    a_set: &ActionSet,
    w: &BranchWord,
    options: &SplitOptions,
) -> Result<SplitResult> {
    let p_acts = acts(p, defs)?;
    if !is_tau_free(p, defs)? {
        return Err(Error::NotTauFree(p.to_string()));
    }
    let alphabet = options
        .alphabet
        .clone()
        .unwrap_or_else(|| p_acts.union(a_set));
    let mut env = SubstitutionEnvironment::new(alphabet)?;
    env.check_actions(&p_acts)?;
    env.check_actions(a_set)?;

    // First pass discovers the branch words; the wrapper depends on them.
    let mut splitter = Splitter {
        defs,
        a_set,
        mode: options.word_mode,
        env: env.clone(),
        words: BTreeSet::new(),
        pending: Vec::new(),
        done: BTreeMap::new(),
        saw_hide: false,
    };
    splitter.run(p, w);
    env.words = std::mem::take(&mut splitter.words);

    let mut splitter = Splitter {
        env: env.clone(),
        pending: Vec::new(),
        done: BTreeMap::new(),
        saw_hide: false,
        ..splitter
    };
    let term = splitter.run(p, w);
    debug_assert_eq!(splitter.words, env.words);
    let mut warnings = Vec::new();
    if splitter.saw_hide {
        warnings.push(
            "the process uses hiding; the result may not be bisimilar to the original".to_string(),
        );
    }
    Ok(SplitResult {
        term,
        new_definitions: splitter.done,
        env,
        warnings,
    })
}

/// Splits the root of `spec`; the result's root is `⊛(root, A, w)`.
pub fn split(spec: &Specification, a_set: &ActionSet, w: &BranchWord) -> Result<SplitResult> {
    split_with(spec, a_set, w, &SplitOptions::default())
}

pub fn split_with(
    spec: &Specification,
    a_set: &ActionSet,
    w: &BranchWord,
    options: &SplitOptions,
) -> Result<SplitResult> {
    split_term(
        &ProcessTerm::Ref(spec.root().clone()),
        spec.definitions(),
        a_set,
        w,
        options,
    )
}

/// Specification whose root is the generated definition for the root of `spec`.
pub fn split_specification(spec: &Specification, result: &SplitResult) -> Result<Specification> {
    let ProcessTerm::Ref(root) = &result.term else {
        unreachable!("splitting a reference yields a reference")
    };
    debug_assert!(spec.get(root).is_none());
    Specification::new(result.definitions(), root.clone())
}

/// Replaces definition `name` inside `spec` by its split: every reference to
/// `name` elsewhere now points to `⊛(name, A, w)`.
pub fn split_in_context(
    spec: &Specification,
    name: &ProcName,
    a_set: &ActionSet,
    w: &BranchWord,
) -> Result<Specification> {
    if spec.get(name).is_none() {
        return Err(Error::UnknownReference(name.to_string()));
    }
    let result = split_term(
        &ProcessTerm::Ref(name.clone()),
        spec.definitions(),
        a_set,
        w,
        &SplitOptions::default(),
    )?;
    let target = split_name(name, a_set, w);
    let mut defs: Vec<Definition> = spec
        .definitions()
        .values()
        .map(|d| Definition::new(d.name.clone(), d.body.substitute_ref(name, &target)))
        .collect();
    defs.extend(result.definitions());
    let root = if spec.root() == name {
        target
    } else {
        spec.root().clone()
    };
    Specification::new(defs, root)
}

/// Helper for building expected terms in tests and docs.
pub fn fresh_term(parts: &[(FreshKind, &str)], plain: &[&str], w: &BranchWord) -> ProcessTerm {
    let mut actions: Vec<Action> = plain.iter().map(|n| Action::new(n).expect("identifier")).collect();
    for (k, n) in parts {
        actions.push(fresh_unchecked(*k, &Action::new(n).expect("identifier"), w));
    }
    ProcessTerm::Act(MultiAction::from_actions(actions))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equivalence::{bisimilar, is_bisimilar};
    use crate::semantics::{explore, explore_process, DEFAULT_MAX_STATES};
    use FreshKind::{F, G};

    fn act(names: &[&str]) -> ProcessTerm {
        ProcessTerm::act(MultiAction::parse_names(names))
    }
    fn set(names: &[&str]) -> ActionSet {
        ActionSet::parse_names(names)
    }
    fn word(s: &str) -> BranchWord {
        BranchWord::parse(s).unwrap()
    }
    fn pn(s: &str) -> ProcName {
        ProcName::new(s).unwrap()
    }
    fn env(names: &[&str]) -> SubstitutionEnvironment {
        SubstitutionEnvironment::new(set(names)).unwrap()
    }
    fn a(s: &str) -> Action {
        Action::new(s).unwrap()
    }

    #[test]
    fn fresh_rendering() {
        assert_eq!(fresh(F, &a("a"), &BranchWord::epsilon()).unwrap().name(), "a#f#");
        assert_eq!(fresh(G, &a("b"), &word("12")).unwrap().name(), "b#g#12");
        let x = fresh(F, &a("a"), &word("1")).unwrap();
        let y = fresh(F, &a("a"), &word("2")).unwrap();
        let z = fresh(G, &a("a"), &word("1")).unwrap();
        assert!(x != y && y != z && x != z);
        let bad = Action::quoted("a#b").unwrap();
        assert_eq!(
            fresh(F, &bad, &BranchWord::epsilon()),
            Err(Error::ReservedSeparatorInAction("a#b".into()))
        );
    }

    #[test]
    fn branch_words() {
        assert!(BranchWord::parse("1212").is_ok());
        assert!(BranchWord::parse("").unwrap().is_epsilon());
        assert_eq!(BranchWord::parse("13"), Err(Error::InvalidBranchWord("13".into())));
        assert_eq!(word("1").right().as_str(), "12");
    }

    #[test]
    fn environment_sets() {
        let e = env(&["a", "b"]).with_words([BranchWord::epsilon()]);
        let rules: Vec<String> = e.comm().iter().map(ToString::to_string).collect();
        assert_eq!(rules, vec!["a#f#|a#g#->#tau", "b#f#|b#g#->#tau"]);
        assert_eq!(e.img().len(), 4);
        assert!(env(&["a", "b"]).comm().is_empty());
        let e = env(&["a"]).with_words([word("1"), word("2")]);
        assert_eq!(e.comm().len(), 2);
        crate::process::check_comm_set(&e.comm()).unwrap();
        assert!(!e.alphabet.contains(&e.tau_action));
    }

    #[test]
    fn isolate_examples() {
        let e = env(&["a", "b", "c"]);
        let eps = BranchWord::epsilon();
        let ab = ProcessTerm::seq(act(&["a"]), act(&["b"]));
        assert_eq!(
            isolate(&ab, &set(&["a"]), &eps, &e).unwrap(),
            ProcessTerm::seq(fresh_term(&[(F, "a")], &["a"], &eps), fresh_term(&[(G, "b")], &[], &eps))
        );
        assert_eq!(
            coisolate(&ab, &set(&["a"]), &eps, &e).unwrap(),
            ProcessTerm::seq(fresh_term(&[(G, "a")], &[], &eps), fresh_term(&[(F, "b")], &["b"], &eps))
        );
        assert_eq!(isolate(&ProcessTerm::Delta, &set(&["a"]), &eps, &e).unwrap(), ProcessTerm::Delta);
        assert_eq!(coisolate(&ProcessTerm::tau(), &set(&["a"]), &eps, &e).unwrap(), ProcessTerm::tau());

        let r = ProcessTerm::alt(
            ProcessTerm::seq(act(&["a"]), act(&["b"])),
            ProcessTerm::seq(act(&["a"]), act(&["c"])),
        );
        let (w1, w2) = (word("1"), word("2"));
        assert_eq!(
            isolate(&r, &set(&["a"]), &eps, &e).unwrap(),
            ProcessTerm::alt(
                ProcessTerm::seq(fresh_term(&[(F, "a")], &["a"], &w1), fresh_term(&[(G, "b")], &[], &w1)),
                ProcessTerm::seq(fresh_term(&[(F, "a")], &["a"], &w2), fresh_term(&[(G, "c")], &[], &w2)),
            )
        );
        assert_eq!(
            coisolate(&r, &set(&["a"]), &eps, &e).unwrap(),
            ProcessTerm::alt(
                ProcessTerm::seq(fresh_term(&[(G, "a")], &[], &w1), fresh_term(&[(F, "b")], &["b"], &w1)),
                ProcessTerm::seq(fresh_term(&[(G, "a")], &[], &w2), fresh_term(&[(F, "c")], &["c"], &w2)),
            )
        );
    }

    #[test]
    fn isolate_errors() {
        let e = env(&["a"]);
        let eps = BranchWord::epsilon();
        let par = ProcessTerm::par(act(&["a"]), act(&["a"]));
        assert_eq!(isolate(&par, &set(&["a"]), &eps, &e), Err(Error::NotSequential));
        assert_eq!(
            isolate(&act(&["b"]), &set(&["a"]), &eps, &e),
            Err(Error::ActionOutsideAlphabet("b".into()))
        );
    }

    fn shape(p: &ProcessTerm) -> String {
        match p {
            ProcessTerm::Act(_) => "x".into(),
            ProcessTerm::Delta => "d".into(),
            ProcessTerm::Alt(l, r) => format!("({}+{})", shape(l), shape(r)),
            ProcessTerm::Seq(l, r) => format!("({}.{})", shape(l), shape(r)),
            _ => unreachable!(),
        }
    }

    #[test]
    fn isolation_preserves_shape() {
        let p = ProcessTerm::seq(
            ProcessTerm::alt(act(&["a", "b"]), ProcessTerm::Delta),
            ProcessTerm::alt(act(&["c"]), ProcessTerm::seq(act(&["a"]), act(&["b"]))),
        );
        let e = env(&["a", "b", "c"]);
        let i = isolate(&p, &set(&["a", "c"]), &word("2"), &e).unwrap();
        let c = coisolate(&p, &set(&["a", "c"]), &word("2"), &e).unwrap();
        assert_eq!(shape(&i), shape(&p));
        assert_eq!(shape(&c), shape(&p));
    }

    fn fifo() -> Specification {
        let body = ProcessTerm::seq(act(&["a"]), ProcessTerm::seq(act(&["b"]), ProcessTerm::Ref(pn("Fifo"))));
        Specification::single(Definition::new(pn("Fifo"), body)).unwrap()
    }

    #[test]
    fn split_fifo_matches_display() {
        let spec = fifo();
        let eps = BranchWord::epsilon();
        let res = split(&spec, &set(&["a"]), &eps).unwrap();
        let star = split_name(&pn("Fifo"), &set(&["a"]), &eps);
        assert_eq!(star.as_str(), "Fifo#split#a#");
        assert_eq!(res.term, ProcessTerm::Ref(star.clone()));
        assert_eq!(res.new_definitions.len(), 1);
        let e = env(&["a", "b"]).with_words([eps.clone()]);
        assert_eq!(res.env, e);
        let isol = ProcessTerm::seq(fresh_term(&[(F, "a")], &["a"], &eps), fresh_term(&[(G, "b")], &[], &eps));
        let coisol = ProcessTerm::seq(fresh_term(&[(G, "a")], &[], &eps), fresh_term(&[(F, "b")], &["b"], &eps));
        let expected = ProcessTerm::seq(qmark(ProcessTerm::par(isol, coisol), &e), ProcessTerm::Ref(star.clone()));
        let def = &res.new_definitions[&(pn("Fifo"), set(&["a"]), eps)];
        assert_eq!(def.name, star);
        assert_eq!(def.body, expected);

        let out = split_specification(&spec, &res).unwrap();
        let l1 = explore(&spec, DEFAULT_MAX_STATES).unwrap();
        let l2 = explore(&out, DEFAULT_MAX_STATES).unwrap();
        assert!(is_bisimilar(&l1, &l2));
    }

    #[test]
    fn split_sync_matches_display() {
        let body = ProcessTerm::seq(act(&["a", "b"]), ProcessTerm::Ref(pn("Sync")));
        let spec = Specification::single(Definition::new(pn("Sync"), body)).unwrap();
        let eps = BranchWord::epsilon();
        let res = split(&spec, &set(&["a"]), &eps).unwrap();
        let e = env(&["a", "b"]).with_words([eps.clone()]);
        let isol = fresh_term(&[(F, "a"), (G, "b")], &["a"], &eps);
        let coisol = fresh_term(&[(G, "a"), (F, "b")], &["b"], &eps);
        let star = split_name(&pn("Sync"), &set(&["a"]), &eps);
        let expected = ProcessTerm::seq(qmark(ProcessTerm::par(isol, coisol), &e), ProcessTerm::Ref(star));
        assert_eq!(res.definitions()[0].body, expected);
        let out = split_specification(&spec, &res).unwrap();
        assert!(is_bisimilar(
            &explore(&spec, 1000).unwrap(),
            &explore(&out, 1000).unwrap()
        ));
    }

    #[test]
    fn split_multi_action_is_identity() {
        let alpha = act(&["a"]);
        let res = split_term(&alpha, &Definitions::new(), &set(&["a"]), &BranchWord::epsilon(), &SplitOptions::default()).unwrap();
        let l1 = explore_process(&alpha, &Definitions::new(), 100).unwrap();
        let l2 = explore_process(&res.term, &Definitions::new(), 100).unwrap();
        assert!(is_bisimilar(&l1, &l2));
    }

    #[test]
    fn frozen_words_break_choice() {
        let r = ProcessTerm::alt(
            ProcessTerm::seq(act(&["a"]), act(&["b"])),
            ProcessTerm::seq(act(&["a"]), act(&["c"])),
        );
        let d = Definitions::new();
        let eps = BranchWord::epsilon();
        let original = explore_process(&r, &d, 1000).unwrap();
        let good = split_term(&r, &d, &set(&["a"]), &eps, &SplitOptions::default()).unwrap();
        assert!(is_bisimilar(&original, &explore_process(&good.term, &d, 1000).unwrap()));
        let frozen = SplitOptions {
            word_mode: WordMode::Frozen,
            ..Default::default()
        };
        let bad = split_term(&r, &d, &set(&["a"]), &eps, &frozen).unwrap();
        let v = bisimilar(&original, &explore_process(&bad.term, &d, 1000).unwrap());
        assert!(!v.bisimilar);
        assert!(!v.witness.unwrap().labels().is_empty());
    }

    #[test]
    fn split_rejects_tau() {
        let p = ProcessTerm::alt(act(&["a"]), ProcessTerm::tau());
        let r = split_term(&p, &Definitions::new(), &set(&["a"]), &BranchWord::epsilon(), &SplitOptions::default());
        assert!(matches!(r, Err(Error::NotTauFree(_))));
    }

    #[test]
    fn split_outside_alphabet() {
        let opts = SplitOptions {
            alphabet: Some(set(&["a"])),
            ..Default::default()
        };
        let r = split_term(&act(&["a", "b"]), &Definitions::new(), &set(&["a"]), &BranchWord::epsilon(), &opts);
        assert_eq!(r.unwrap_err(), Error::ActionOutsideAlphabet("b".into()));
    }

    #[test]
    fn hide_produces_warning() {
        let p = ProcessTerm::hide(set(&["b"]), ProcessTerm::par(act(&["a"]), act(&["b"])));
        let r = split_term(&p, &Definitions::new(), &set(&["a"]), &BranchWord::epsilon(), &SplitOptions::default()).unwrap();
        assert_eq!(r.warnings.len(), 1);
    }

    #[test]
    fn freshness_against_original() {
        let spec = fifo();
        let res = split(&spec, &set(&["b"]), &word("21")).unwrap();
        let original = acts(&ProcessTerm::Ref(spec.root().clone()), spec.definitions()).unwrap();
        assert!(res.env.img().is_disjoint(&original));
        assert!(!original.contains(&res.env.tau_action));
    }

    #[test]
    fn split_in_context_replaces_references() {
        let fifo_body = ProcessTerm::seq(act(&["a"]), ProcessTerm::seq(act(&["b"]), ProcessTerm::Ref(pn("Fifo"))));
        let root_body = ProcessTerm::par(ProcessTerm::Ref(pn("Fifo")), act(&["c"]));
        let spec = Specification::new(
            vec![
                Definition::new(pn("Root"), root_body),
                Definition::new(pn("Fifo"), fifo_body),
            ],
            pn("Root"),
        )
        .unwrap();
        let s2 = split_in_context(&spec, &pn("Fifo"), &set(&["a"]), &BranchWord::epsilon()).unwrap();
        assert_eq!(s2.root(), &pn("Root"));
        assert!(s2.get(&split_name(&pn("Fifo"), &set(&["a"]), &BranchWord::epsilon())).is_some());
        assert!(is_bisimilar(&explore(&spec, 1000).unwrap(), &explore(&s2, 1000).unwrap()));
    }
}
