//! Synchronous regions of an LTS and the asynchronous links between them.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use petgraph::unionfind::UnionFind;

use crate::multiactions::{Action, ActionSet};
use crate::reo::ConnectorTopology;
use crate::semantics::Lts;

/// A partition of actions into synchronous regions.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct RegionSet {
    pub regions: BTreeSet<ActionSet>,
}

impl RegionSet {
    pub fn region_of(&self, a: &Action) -> Option<&ActionSet> {
        self.regions.iter().find(|r| r.contains(a))
    }

    pub fn len(&self) -> usize {
        self.regions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.regions.is_empty()
    }

    pub fn actions(&self) -> ActionSet {
        self.regions.iter().flat_map(|r| r.iter().cloned()).collect()
    }

    /// Regions are nonempty and pairwise disjoint.
    pub fn is_partition(&self) -> bool {
        let total: usize = self.regions.iter().map(ActionSet::len).sum();
        self.regions.iter().all(|r| !r.is_empty()) && total == self.actions().len()
    }
}

/// One region per line, actions comma-joined.
impl fmt::Display for RegionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.regions {
            writeln!(f, "{r}")?;
        }
        Ok(())
    }
}

/// Unordered pairs of channel-connected actions in different regions.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct AsyncPairs {
    pub pairs: BTreeSet<(Action, Action)>,
}

impl AsyncPairs {
    pub fn contains(&self, a: &Action, b: &Action) -> bool {
        let key = if a <= b { (a.clone(), b.clone()) } else { (b.clone(), a.clone()) };
        self.pairs.contains(&key)
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

impl fmt::Display for AsyncPairs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (a, b) in &self.pairs {
            writeln!(f, "{a} -- {b}")?;
        }
        Ok(())
    }
}

/// Joins actions occurring in one label, and actions enabled in one state.
fn classes(lts: &Lts) -> (Vec<Action>, UnionFind<usize>) {
    let actions: Vec<Action> = lts.label_actions().into_iter().collect();
    let index: BTreeMap<&Action, usize> = actions.iter().enumerate().map(|(i, a)| (a, i)).collect();
    let mut uf = UnionFind::new(actions.len());
    let mut first_at_state: BTreeMap<usize, usize> = BTreeMap::new();
    for t in &lts.transitions {
        for a in t.label.actions() {
            let i = index[a];
            let anchor = *first_at_state.entry(t.source).or_insert(i);
            uf.union(anchor, i);
        }
    }
    (actions, uf)
}

/// The least set containing `a` that is closed under label co-occurrence and
/// co-enabledness in a common state. `{a}` if `a` labels no transition.
pub fn sync_region(lts: &Lts, a: &Action) -> ActionSet {
    let (actions, uf) = classes(lts);
    match actions.iter().position(|b| b == a) {
        None => [a.clone()].into_iter().collect(),
        Some(i) => actions
            .iter()
            .enumerate()
            .filter(|(j, _)| uf.equiv(i, *j))
            .map(|(_, b)| b.clone())
            .collect(),
    }
}

/// All synchronous regions of the labelled actions of `lts`.
pub fn sync_regions(lts: &Lts) -> RegionSet {
    sync_regions_with(lts, &ActionSet::new())
}

/// As [`sync_regions`], with every action of `extra` that labels nothing
/// added as a singleton region.
pub fn sync_regions_with(lts: &Lts, extra: &ActionSet) -> RegionSet {
    let (actions, uf) = classes(lts);
    let mut groups: BTreeMap<usize, ActionSet> = BTreeMap::new();
    for (i, a) in actions.iter().enumerate() {
        groups.entry(uf.find(i)).or_default().insert(a.clone());
    }
    let mut regions: BTreeSet<ActionSet> = groups.into_values().collect();
    let labelled: BTreeSet<&Action> = actions.iter().collect();
    for a in extra {
        if !labelled.contains(a) {
            regions.insert([a.clone()].into_iter().collect());
        }
    }
    let set = RegionSet { regions };
    debug_assert!(set.is_partition());
    set
}

/// Channel-connected pairs of actions lying in different regions. Region
/// actions the topology does not know are skipped with a warning.
pub fn async_regions(x: &RegionSet, topo: &ConnectorTopology) -> AsyncPairs {
    let mut known: Vec<(&Action, &ActionSet, BTreeSet<usize>)> = Vec::new();
    for region in &x.regions {
        for a in region {
            match topo.channels_of(a) {
                Ok(channels) => known.push((a, region, channels)),
                Err(e) => log::warn!("ignoring action outside the topology: {e}"),
            }
        }
    }
    let mut pairs = BTreeSet::new();
    for (i, (a, ra, ca)) in known.iter().enumerate() {
        for (b, rb, cb) in &known[i + 1..] {
            if ra != rb && !ca.is_disjoint(cb) {
                let key = if a <= b { ((*a).clone(), (*b).clone()) } else { ((*b).clone(), (*a).clone()) };
                pairs.insert(key);
            }
        }
    }
    AsyncPairs { pairs }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multiactions::MultiAction;
    use crate::process::{Definitions, ProcessTerm};
    use crate::reo::Primitive;
    use crate::semantics::{explore, explore_process};
    use crate::syntax::parse;

    fn a(s: &str) -> Action {
        Action::new(s).unwrap()
    }
    fn set(names: &[&str]) -> ActionSet {
        ActionSet::parse_names(names)
    }
    fn regions(sets: &[&[&str]]) -> RegionSet {
        RegionSet {
            regions: sets.iter().map(|s| set(s)).collect(),
        }
    }

    fn walkthrough() -> Lts {
        let spec = parse("P = a|b . c + d;").unwrap();
        explore(&spec, 100).unwrap()
    }

    #[test]
    fn walkthrough_regions() {
        let lts = walkthrough();
        assert_eq!(sync_region(&lts, &a("a")), set(&["a", "b", "d"]));
        assert_eq!(sync_region(&lts, &a("c")), set(&["c"]));
        assert_eq!(sync_region(&lts, &a("z")), set(&["z"]));
        assert_eq!(sync_regions(&lts), regions(&[&["a", "b", "d"], &["c"]]));
    }

    #[test]
    fn single_action_and_join() {
        let single = explore_process(&ProcessTerm::act(MultiAction::parse_names(&["a"])), &Definitions::new(), 10).unwrap();
        assert_eq!(sync_region(&single, &a("a")), set(&["a"]));
        let join = explore_process(&ProcessTerm::act(MultiAction::parse_names(&["a", "b"])), &Definitions::new(), 10).unwrap();
        assert_eq!(sync_regions(&join), regions(&[&["a", "b"]]));
    }

    #[test]
    fn fifo_regions_and_async_pairs() {
        let lts = explore(&Primitive::Fifo.standalone(), 100).unwrap();
        let x = sync_regions(&lts);
        assert_eq!(x, regions(&[&["a"], &["b"]]));
        // A lone channel: its ends are named after nodes `a` and `b`.
        let topo = ConnectorTopology::parse("fifo a -> b\nboundary a, b").unwrap();
        let y = async_regions(&x, &topo);
        assert!(y.contains(&a("a"), &a("b")));
        assert_eq!(y.len(), 1);
        assert_eq!(y.to_string(), "a -- b\n");
    }

    #[test]
    fn sync_has_no_async_pairs() {
        let lts = explore(&Primitive::Sync.standalone(), 100).unwrap();
        let x = sync_regions(&lts);
        assert_eq!(x, regions(&[&["a", "b"]]));
        let topo = ConnectorTopology::parse("sync a -> b\nboundary a, b").unwrap();
        assert!(async_regions(&x, &topo).is_empty());
        assert!(async_regions(&x, &ConnectorTopology::default()).is_empty());
    }

    #[test]
    fn chain_has_two_regions() {
        let topo = ConnectorTopology::parse("sync a -> b\nfifo b -> c\nsync c -> d\nboundary a, d").unwrap();
        let lts = explore(&topo.compose().unwrap(), 1000).unwrap();
        let x = sync_regions(&lts);
        assert_eq!(x, regions(&[&["a", "b"], &["c", "d"]]));
        let y = async_regions(&x, &topo);
        assert!(y.contains(&a("b"), &a("c")));
        assert_eq!(y.len(), 1);
    }

    #[test]
    fn unused_actions_become_singletons() {
        let lts = walkthrough();
        let x = sync_regions_with(&lts, &set(&["a", "q"]));
        assert!(x.regions.contains(&set(&["q"])));
        assert!(x.is_partition());
    }

    #[test]
    fn display_one_region_per_line() {
        assert_eq!(sync_regions(&walkthrough()).to_string(), "a,b,d\nc\n");
    }
}
