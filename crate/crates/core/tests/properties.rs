use proptest::prelude::*;

use ucsc_core::checkers::{self, Conjecture, Status};
use ucsc_core::format::{family_from_json, family_to_json, parse_family};
use ucsc_core::{ElementId, Permutation, SetFamily, SetMask};

fn family_strategy(max_n: u32) -> impl Strategy<Value = SetFamily> {
    (1..=max_n).prop_flat_map(|n| {
        let full = (1u32 << n) - 1;
        prop::collection::vec(0..=full, 1..10)
            .prop_map(move |bits| SetFamily::new(n, bits.into_iter().map(|b| SetMask(b as u16))).unwrap())
    })
}

/// Union-closed families with ∅ and a nonempty member.
fn closed_strategy(max_n: u32) -> impl Strategy<Value = SetFamily> {
    family_strategy(max_n).prop_filter_map("needs a nonempty member", |g| {
        let mut members = g.members().to_vec();
        members.push(SetMask::EMPTY);
        let f = SetFamily::new(g.n(), members).unwrap().union_closure();
        f.t_value().is_ok().then_some(f)
    })
}

fn with_permutation(max_n: u32) -> impl Strategy<Value = (SetFamily, Permutation)> {
    closed_strategy(max_n).prop_flat_map(|f| {
        let n = f.n();
        let perm = Just((1..=n).collect::<Vec<u32>>())
            .prop_shuffle()
            .prop_map(|v| Permutation::new(v).unwrap());
        (Just(f), perm)
    })
}

proptest! {
    #[test]
    fn closure_is_sound_minimal_and_idempotent(g in family_strategy(10)) {
        let c = g.union_closure();
        prop_assert!(c.is_union_closed());
        prop_assert_eq!(c.union_closure(), c.clone());
        for &m in g.members() {
            prop_assert!(c.contains(m));
        }
        for &x in c.members() {
            let reach = g.members().iter().filter(|m| m.is_subset(x)).fold(SetMask::EMPTY, |a, &b| a.union(b));
            prop_assert_eq!(reach, x);
        }
    }

    #[test]
    fn frequency_conservation(f in family_strategy(16)) {
        let total: u64 = f.members().iter().map(|m| m.len() as u64).sum();
        prop_assert_eq!(f.frequency_profile().total(), total);
        prop_assert_eq!(f.size_profile().by_size.iter().map(|&c| c as usize).sum::<usize>(), f.m());
    }

    #[test]
    fn closed_families_contain_their_universe(f in closed_strategy(12)) {
        prop_assert!(f.contains(f.universe()));
        prop_assert_eq!(f.size_profile().min_nonempty_size(), f.t_value().ok());
    }

    #[test]
    fn text_and_json_round_trip(f in family_strategy(16)) {
        let text = f.to_string();
        prop_assert_eq!(parse_family(&text).unwrap(), f.clone());
        let json = family_to_json(&f).to_string();
        prop_assert_eq!(family_from_json(&json).unwrap(), f);
    }

    #[test]
    fn permutation_equivariance((f, p) in with_permutation(8)) {
        let g = f.permute(&p).unwrap();
        prop_assert_eq!(g.m(), f.m());
        prop_assert_eq!(g.t_value(), f.t_value());
        prop_assert_eq!(g.size_profile(), f.size_profile());
        prop_assert!(g.is_union_closed());
        let mut mapped: Vec<ElementId> = f.abundant_elements().iter().map(|&e| p.apply(e)).collect();
        mapped.sort();
        prop_assert_eq!(g.abundant_elements(), mapped);
        prop_assert_eq!(g.canonical_form().unwrap(), f.canonical_form().unwrap());
    }

    #[test]
    fn witnesses_are_abundant_and_chain_holds(f in closed_strategy(9)) {
        let abundant = f.abundant_elements();
        let mut statuses = Vec::new();
        for c in Conjecture::ALL {
            let v = checkers::check(&f, c).unwrap();
            for w in v.witnesses() {
                prop_assert!(abundant.contains(w));
            }
            if let ucsc_core::Verdict::Fails { required, achieved } = v {
                prop_assert!(achieved < required);
            }
            statuses.push(v.status());
        }
        let (frankl, s1, s2) = (statuses[0], statuses[1], statuses[2]);
        if s1 == Status::Holds {
            prop_assert_eq!(s2, Status::Holds);
        }
        if s2 == Status::Holds {
            prop_assert_eq!(frankl, Status::Holds);
        }
    }

    #[test]
    fn averaging_witness_is_abundant(f in closed_strategy(9)) {
        let full = SetMask::full(f.n());
        prop_assume!(f.universe() == full);
        if let Some(e) = checkers::averaging_argument(&f).unwrap() {
            prop_assert!(f.abundant_elements().contains(&e));
        }
    }
}
