use std::collections::{BTreeMap, BTreeSet};

use proptest::prelude::*;

use procsplit::equivalence::{is_bisimilar, reduce};
use procsplit::multiactions::{Action, ActionSet, MultiAction};
use procsplit::process::{gamma, CommSet, Definitions};
use procsplit::random::{self, TermShape};
use procsplit::regions::sync_regions;
use procsplit::semantics::{explore, explore_process, DEFAULT_MAX_STATES};
use procsplit::splitting::{split, split_specification, BranchWord};
use procsplit::{format, parse};

fn word(i: usize) -> BranchWord {
    BranchWord::parse(["", "1", "2", "12"][i % 4]).unwrap()
}

fn counts(alpha: &MultiAction) -> BTreeMap<Action, usize> {
    let mut m = BTreeMap::new();
    for a in alpha.actions() {
        *m.entry(a.clone()).or_insert(0) += 1;
    }
    m
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn recursive_split_is_bisimilar(seed in any::<u64>(), w in 0usize..4) {
        let mut rng = random::rng(seed, "recursive");
        let abc = random::letters(3);
        let spec = random::recursive_spec(&mut rng, &abc, "P");
        let a_set = random::action_set(&mut rng, &abc);
        let res = split(&spec, &a_set, &word(w)).unwrap();
        let out = split_specification(&spec, &res).unwrap();
        let l1 = explore(&spec, DEFAULT_MAX_STATES).unwrap();
        let l2 = explore(&out, DEFAULT_MAX_STATES).unwrap();
        prop_assert!(is_bisimilar(&l1, &l2), "{}\nalong {{{}}}", spec, a_set);
    }

    #[test]
    fn round_trip(seed in any::<u64>()) {
        let spec = random::specification(&mut random::rng(seed, "specs"));
        let text = format(&spec);
        prop_assert_eq!(parse(&text).unwrap(), spec);
    }

    #[test]
    fn gamma_keeps_untouched_actions_and_size(seed in any::<u64>()) {
        let mut rng = random::rng(seed, "gamma");
        let abc = random::letters(3);
        let c: CommSet = random::comm_set(&mut rng, &abc);
        let alpha = random::multi_action(&mut rng, &abc, 0, 5);
        let out = gamma(&c, &alpha).unwrap();
        if c.is_empty() {
            prop_assert_eq!(&out, &alpha);
        }
        let lhs_actions: BTreeSet<Action> = c.iter().flat_map(|r| r.lhs().actions().to_vec()).collect();
        let rhs_actions: BTreeSet<Action> = c.iter().map(|r| r.rhs().clone()).collect();
        let (before, after) = (counts(&alpha), counts(&out));
        for (a, n) in &before {
            if !lhs_actions.contains(a) && !rhs_actions.contains(a) {
                prop_assert_eq!(after.get(a), Some(n));
            }
        }
        // every rule of size two shrinks the multi-action by one per firing
        let fired = alpha.len() - out.len();
        prop_assert!(fired <= alpha.len() / 2);
        if c.iter().all(|r| !r.lhs().is_submulti_of(&alpha)) {
            prop_assert_eq!(out, alpha);
        }
    }

    #[test]
    fn regions_partition_labels(seed in any::<u64>()) {
        let mut rng = random::rng(seed, "regions");
        let p = random::term(&mut rng, &random::letters(3), &TermShape::general(3));
        let lts = explore_process(&p, &Definitions::new(), DEFAULT_MAX_STATES).unwrap();
        let x = sync_regions(&lts);
        prop_assert!(x.is_partition());
        prop_assert_eq!(x.actions(), lts.label_actions().into_iter().collect::<ActionSet>());
        for t in &lts.transitions {
            let Some(first) = t.label.actions().first() else { continue };
            let region = x.region_of(first).unwrap();
            prop_assert!(t.label.actions().iter().all(|a| region.contains(a)));
            for u in lts.transitions.iter().filter(|u| u.source == t.source) {
                prop_assert!(u.label.actions().iter().all(|a| region.contains(a)));
            }
        }
    }

    #[test]
    fn reduction_preserves_behaviour(seed in any::<u64>()) {
        let mut rng = random::rng(seed, "reduce");
        let p = random::term(&mut rng, &random::letters(3), &TermShape::general(3));
        let lts = explore_process(&p, &Definitions::new(), DEFAULT_MAX_STATES).unwrap();
        let small = reduce(&lts);
        prop_assert!(small.num_states <= lts.num_states);
        prop_assert!(is_bisimilar(&lts, &small));
    }
}
