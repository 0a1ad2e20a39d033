//! Actions, multi-actions and action sets.
//!
//! A [`MultiAction`] is a finite multiset of actions kept in canonical form: a
//! name-sorted vector with repetitions. Commutativity, associativity and the
//! unit law for `τ` (the empty multi-action) therefore hold as plain equality.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Separator reserved for generated names; user identifiers never contain it.
pub const RESERVED_SEPARATOR: char = '#';

/// Returns true for `[A-Za-z][A-Za-z0-9_]*`.
pub fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

pub(crate) fn is_quotable(name: &str) -> bool {
    !name.is_empty() && name.chars().all(|c| c != '`' && !c.is_whitespace() && !c.is_control())
}

/// A single action name.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Action(Arc<str>);

impl Action {
    /// Creates a user action; the name must be a plain identifier.
    pub fn new(name: &str) -> Result<Self> {
        if is_identifier(name) {
            Ok(Action(Arc::from(name)))
        } else {
            Err(Error::InvalidActionName(name.to_string()))
        }
    }

    /// Creates an action from a name that may contain punctuation such as the
    /// reserved separator (what backtick quoting admits in the text syntax).
    pub fn quoted(name: &str) -> Result<Self> {
        if is_quotable(name) {
            Ok(Action(Arc::from(name)))
        } else {
            Err(Error::InvalidActionName(name.to_string()))
        }
    }

    pub(crate) fn generated(name: String) -> Self {
        debug_assert!(is_quotable(&name));
        Action(Arc::from(name))
    }

    pub fn name(&self) -> &str {
        &self.0
    }

    pub fn has_reserved_separator(&self) -> bool {
        self.0.contains(RESERVED_SEPARATOR)
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A multiset of actions occurring together; the empty multiset is `τ`.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiAction(Vec<Action>);

impl MultiAction {
    pub fn tau() -> Self {
        MultiAction(Vec::new())
    }

    pub fn single(a: Action) -> Self {
        MultiAction(vec![a])
    }

    pub fn from_actions<I: IntoIterator<Item = Action>>(actions: I) -> Self {
        let mut bag: Vec<Action> = actions.into_iter().collect();
        bag.sort();
        MultiAction(bag)
    }

    /// Builds a multi-action from plain identifiers. Panics on invalid names;
    /// meant for tests and literals.
    pub fn parse_names(names: &[&str]) -> Self {
        Self::from_actions(names.iter().map(|n| Action::new(n).expect("valid action name")))
    }

    /// Multiset union `α ⊔ β`.
    pub fn join(&self, other: &MultiAction) -> MultiAction {
        let mut bag = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            if self.0[i] <= other.0[j] {
                bag.push(self.0[i].clone());
                i += 1;
            } else {
                bag.push(other.0[j].clone());
                j += 1;
            }
        }
        bag.extend_from_slice(&self.0[i..]);
        bag.extend_from_slice(&other.0[j..]);
        MultiAction(bag)
    }

    /// Multiset inclusion `self ⊑ other`.
    pub fn is_submulti_of(&self, other: &MultiAction) -> bool {
        let mut j = 0;
        for a in &self.0 {
            while j < other.0.len() && other.0[j] < *a {
                j += 1;
            }
            if j == other.0.len() || other.0[j] != *a {
                return false;
            }
            j += 1;
        }
        true
    }

    /// Multiset difference `self \ other`; absent actions are ignored.
    pub fn subtract(&self, other: &MultiAction) -> MultiAction {
        let mut bag = Vec::with_capacity(self.0.len());
        let mut j = 0;
        for a in &self.0 {
            while j < other.0.len() && other.0[j] < *a {
                j += 1;
            }
            if j < other.0.len() && other.0[j] == *a {
                j += 1;
            } else {
                bag.push(a.clone());
            }
        }
        MultiAction(bag)
    }

    /// Support set of the bag.
    pub fn acts(&self) -> ActionSet {
        self.0.iter().cloned().collect()
    }

    pub fn is_tau(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn count(&self, a: &Action) -> usize {
        self.0.iter().filter(|b| *b == a).count()
    }

    pub fn contains(&self, a: &Action) -> bool {
        self.0.binary_search(a).is_ok()
    }

    /// Actions in canonical order, with repetitions.
    pub fn actions(&self) -> &[Action] {
        &self.0
    }

    /// Applies `f` to every occurrence and re-canonicalizes.
    pub fn map_actions<F: FnMut(&Action) -> Action>(&self, f: F) -> MultiAction {
        MultiAction::from_actions(self.0.iter().map(f))
    }

    /// Drops every occurrence of the actions in `set`.
    pub fn without(&self, set: &ActionSet) -> MultiAction {
        MultiAction(self.0.iter().filter(|a| !set.contains(a)).cloned().collect())
    }

    pub fn intersects(&self, set: &ActionSet) -> bool {
        self.0.iter().any(|a| set.contains(a))
    }
}

impl fmt::Display for MultiAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("tau");
        }
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("|")?;
            }
            write!(f, "{a}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for MultiAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromIterator<Action> for MultiAction {
    fn from_iter<I: IntoIterator<Item = Action>>(iter: I) -> Self {
        MultiAction::from_actions(iter)
    }
}

/// A set of actions (split sets, block and hide sets).
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ActionSet(BTreeSet<Action>);

impl ActionSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn parse_names(names: &[&str]) -> Self {
        names.iter().map(|n| Action::new(n).expect("valid action name")).collect()
    }

    pub fn try_from_names(names: &[&str]) -> Result<Self> {
        names.iter().map(|n| Action::new(n)).collect()
    }

    pub fn insert(&mut self, a: Action) -> bool {
        self.0.insert(a)
    }

    pub fn contains(&self, a: &Action) -> bool {
        self.0.contains(a)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Action> {
        self.0.iter()
    }

    pub fn extend<I: IntoIterator<Item = Action>>(&mut self, iter: I) {
        self.0.extend(iter)
    }

    pub fn union(&self, other: &ActionSet) -> ActionSet {
        self.0.union(&other.0).cloned().collect()
    }

    pub fn is_subset(&self, other: &ActionSet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn is_disjoint(&self, other: &ActionSet) -> bool {
        self.0.is_disjoint(&other.0)
    }

    pub fn as_set(&self) -> &BTreeSet<Action> {
        &self.0
    }
}

impl FromIterator<Action> for ActionSet {
    fn from_iter<I: IntoIterator<Item = Action>>(iter: I) -> Self {
        ActionSet(iter.into_iter().collect())
    }
}

impl IntoIterator for ActionSet {
    type Item = Action;
    type IntoIter = std::collections::btree_set::IntoIter<Action>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.into_iter()
    }
}

impl<'a> IntoIterator for &'a ActionSet {
    type Item = &'a Action;
    type IntoIter = std::collections::btree_set::Iter<'a, Action>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

/// Sorted, comma-joined rendering.
impl fmt::Display for ActionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{a}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for ActionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{self}}}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(names: &[&str]) -> MultiAction {
        MultiAction::parse_names(names)
    }

    #[test]
    fn join_examples() {
        assert_eq!(m(&["a"]).join(&MultiAction::tau()), m(&["a"]));
        assert_eq!(m(&["a"]).join(&m(&["b"])), m(&["b"]).join(&m(&["a"])));
        let aab = m(&["a"]).join(&m(&["a", "b"]));
        assert_eq!(aab.count(&Action::new("a").unwrap()), 2);
        assert_eq!(aab.to_string(), "a|a|b");
    }

    #[test]
    fn submulti_examples() {
        assert!(MultiAction::tau().is_submulti_of(&m(&["a", "b"])));
        assert!(m(&["a"]).is_submulti_of(&m(&["a", "b"])));
        assert!(!m(&["a", "a"]).is_submulti_of(&m(&["a", "b"])));
    }

    #[test]
    fn subtract_examples() {
        assert_eq!(m(&["a", "b"]).subtract(&m(&["a"])), m(&["b"]));
        assert_eq!(m(&["a", "c"]).subtract(&MultiAction::tau()), m(&["a", "c"]));
        assert_eq!(m(&["b"]).subtract(&m(&["c"])), m(&["b"]));
        assert!(m(&["a"]).subtract(&m(&["a"])).is_tau());
    }

    #[test]
    fn acts_examples() {
        assert_eq!(m(&["a", "a", "b"]).acts(), ActionSet::parse_names(&["a", "b"]));
        assert!(MultiAction::tau().acts().is_empty());
        assert_eq!(m(&["a"]).acts(), ActionSet::parse_names(&["a"]));
    }

    #[test]
    fn rendering() {
        assert_eq!(MultiAction::tau().to_string(), "tau");
        assert_eq!(m(&["b", "a"]).to_string(), "a|b");
        assert_eq!(ActionSet::parse_names(&["c", "a"]).to_string(), "a,c");
    }

    #[test]
    fn identifiers() {
        assert!(Action::new("a_1").is_ok());
        assert!(Action::new("1a").is_err());
        assert!(Action::new("a#f#").is_err());
        assert!(Action::new("").is_err());
        assert!(Action::quoted("a#f#12").unwrap().has_reserved_separator());
        assert!(Action::quoted("a b").is_err());
    }

    // MD1–MD5 and MS1–MS4 read as rewrite rules over unsorted word lists.
    fn md(alpha: &[u8], beta: &[u8]) -> Vec<u8> {
        fn single(alpha: &[u8], b: u8) -> Vec<u8> {
            match alpha.split_first() {
                None => vec![],
                Some((&a, rest)) if a == b => rest.to_vec(),
                Some((&a, rest)) => std::iter::once(a).chain(single(rest, b)).collect(),
            }
        }
        match beta.split_first() {
            None => alpha.to_vec(),
            Some((&b, rest)) => md(&single(alpha, b), rest),
        }
    }

    fn ms(alpha: &[u8], beta: &[u8]) -> bool {
        match (alpha.split_first(), beta.split_first()) {
            (None, _) => true,
            (Some(_), None) => false,
            (Some((&a, ra)), Some((&b, rb))) if a == b => ms(ra, rb),
            (Some((&a, ra)), Some((&b, rb))) => {
                let lhs: Vec<u8> = std::iter::once(a).chain(md(ra, &[b])).collect();
                ms(&lhs, rb)
            }
        }
    }

    fn from_word(w: &[u8]) -> MultiAction {
        w.iter()
            .map(|c| Action::new(&(char::from(b'a' + c)).to_string()).unwrap())
            .collect()
    }

    proptest::proptest! {
        #[test]
        fn subtract_and_submulti_agree_with_rewriting(
            alpha in proptest::collection::vec(0u8..3, 0..5),
            beta in proptest::collection::vec(0u8..3, 0..5),
        ) {
            let (x, y) = (from_word(&alpha), from_word(&beta));
            proptest::prop_assert_eq!(x.subtract(&y), from_word(&md(&alpha, &beta)));
            proptest::prop_assert_eq!(x.is_submulti_of(&y), ms(&alpha, &beta));
        }

        #[test]
        fn join_is_commutative_associative_with_unit(
            alpha in proptest::collection::vec(0u8..3, 0..4),
            beta in proptest::collection::vec(0u8..3, 0..4),
            gamma in proptest::collection::vec(0u8..3, 0..4),
        ) {
            let (x, y, z) = (from_word(&alpha), from_word(&beta), from_word(&gamma));
            proptest::prop_assert_eq!(x.join(&y), y.join(&x));
            proptest::prop_assert_eq!(x.join(&y).join(&z), x.join(&y.join(&z)));
            proptest::prop_assert_eq!(x.join(&MultiAction::tau()), x.clone());
            proptest::prop_assert_eq!(x.join(&y).subtract(&y), x);
        }
    }
}
