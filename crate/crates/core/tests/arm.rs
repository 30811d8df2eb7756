mod common;

use std::collections::BTreeMap;

use finsent::arm::{generate_rules, mine_frequent, mine_rules, Item, ItemSet, Transaction};
use finsent::{RuleBase, SemTag};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn names(set: ItemSet) -> Vec<String> {
    let mut v: Vec<String> = set.iter().map(|i| i.to_string()).collect();
    v.sort();
    v
}

fn mined_rules(tx: &[Transaction], minsup: f64, minconf: f64) -> BTreeMap<(Vec<String>, String), (f64, f64)> {
    mine_rules(tx, minsup, minconf)
        .unwrap()
        .iter()
        .map(|r| {
            let mut ante: Vec<String> = r.antecedent.iter().map(|t| t.to_string()).collect();
            ante.sort();
            ((ante, r.consequent.to_string()), (r.support, r.confidence))
        })
        .collect()
}

fn same_rules(a: &BTreeMap<(Vec<String>, String), (f64, f64)>, b: &BTreeMap<(Vec<String>, String), (f64, f64)>) -> bool {
    a.len() == b.len()
        && a.iter().zip(b).all(|((ka, va), (kb, vb))| {
            ka == kb && (va.0 - vb.0).abs() < 1e-9 && (va.1 - vb.1).abs() < 1e-9
        })
}

#[test]
fn sample_table_contains_every_reference_rule() {
    let rb = mine_rules(&common::sample_transactions(), 16.0, 60.0).unwrap();
    for &(ante, class, support, confidence) in &common::SAMPLE_RULES {
        let a = finsent::TagSet::parse(ante).unwrap();
        let r = rb
            .iter()
            .find(|r| r.antecedent == a && r.consequent.as_str() == class)
            .unwrap_or_else(|| panic!("missing {ante} -> {class}"));
        assert!((r.support - support).abs() < 0.01, "{r}");
        assert!((r.confidence - confidence).abs() < 0.01, "{r}");
    }
}

#[test]
fn sample_table_also_yields_rules_from_the_last_transaction() {
    // LagInd, POS, NEG, neutral is the only transaction with NEG, so each
    // of its remaining tag combinations is a 100% rule at 1/6 support.
    let rb = mine_rules(&common::sample_transactions(), 16.0, 60.0).unwrap();
    assert_eq!(rb.len(), 12);
    let extra: Vec<String> = rb
        .iter()
        .filter(|r| {
            !common::SAMPLE_RULES
                .iter()
                .any(|&(a, c, _, _)| finsent::TagSet::parse(a).unwrap() == r.antecedent && c == r.consequent.as_str())
        })
        .map(|r| r.antecedent.to_string())
        .collect();
    assert_eq!(extra, vec!["LagInd, POS, NEG", "LagInd, POS", "LagInd, NEG", "POS, NEG", "NEG"]);
}

#[test]
fn frequent_itemsets_match_oracle_on_sample() {
    let tx = common::sample_transactions();
    let mined: BTreeMap<Vec<String>, usize> = mine_frequent::<f64>(&tx, 16.0)
        .unwrap()
        .into_iter()
        .map(|f| (names(f.items), f.count))
        .collect();
    assert_eq!(mined, common::brute_force_frequent(&tx, 16.0));
}

#[test]
fn fig_rulebase_round_trips_through_text() {
    let rb = common::sample_rulebase();
    let text = rb.to_text();
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 7);
    assert_eq!(RuleBase::parse(&text).unwrap(), rb);
}

#[test]
fn rulebase_f32_matches_f64_ordering() {
    let tx = common::sample_transactions();
    let a = mine_rules::<f64>(&tx, 16.0, 60.0).unwrap();
    let b = mine_rules::<f32>(&tx, 16.0, 60.0).unwrap();
    let ka: Vec<_> = a.iter().map(|r| (r.antecedent, r.consequent)).collect();
    let kb: Vec<_> = b.iter().map(|r| (r.antecedent, r.consequent)).collect();
    assert_eq!(ka, kb);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn miner_equals_exhaustive_enumeration(seed in any::<u64>(), minsup in 1.0f64..60.0, minconf in 1.0f64..100.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let tx = common::random_transactions(&mut rng, 12, 5);
        let frequent: BTreeMap<Vec<String>, usize> = mine_frequent::<f64>(&tx, minsup)
            .unwrap()
            .into_iter()
            .map(|f| (names(f.items), f.count))
            .collect();
        prop_assert_eq!(frequent, common::brute_force_frequent(&tx, minsup));
        prop_assert!(same_rules(&mined_rules(&tx, minsup, minconf), &common::brute_force_rules(&tx, minsup, minconf)));
    }

    #[test]
    fn downward_closure(seed in any::<u64>(), minsup in 1.0f64..50.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let tx = common::random_transactions(&mut rng, 12, 8);
        let frequent = mine_frequent::<f64>(&tx, minsup).unwrap();
        let by_set: BTreeMap<ItemSet, f64> = frequent.iter().map(|f| (f.items, f.support)).collect();
        for f in &frequent {
            for item in f.items.iter() {
                let sub = f.items.without(item);
                if sub.is_empty() { continue; }
                let s = by_set.get(&sub);
                prop_assert!(s.is_some(), "subset {} of {} missing", sub, f.items);
                prop_assert!(*s.unwrap() >= f.support);
            }
        }
    }

    #[test]
    fn raising_minconf_never_adds_rules(seed in any::<u64>(), lo in 1.0f64..100.0, hi in 1.0f64..100.0) {
        let (lo, hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let tx = common::random_transactions(&mut rng, 12, 8);
        let frequent = mine_frequent::<f64>(&tx, 5.0).unwrap();
        let a = generate_rules(&frequent, 5.0, lo).unwrap();
        let b = generate_rules(&frequent, 5.0, hi).unwrap();
        prop_assert!(b.len() <= a.len());
        prop_assert!(b.iter().all(|r| a.iter().any(|q| q == r)));
    }

    #[test]
    fn rule_invariants(seed in any::<u64>(), minsup in 1.0f64..40.0, minconf in 1.0f64..100.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let tx = common::random_transactions(&mut rng, 12, 8);
        let rb = mine_rules::<f64>(&tx, minsup, minconf).unwrap();
        prop_assert!(rb.is_ordered());
        for r in &rb {
            prop_assert!(!r.antecedent.is_empty());
            prop_assert!(r.support + 1e-9 >= minsup);
            prop_assert!(r.confidence + 1e-9 >= minconf);
            prop_assert!(r.support <= r.confidence + 1e-9);
            prop_assert!(r.confidence <= 100.0 + 1e-9);
        }
        prop_assert_eq!(RuleBase::parse(&rb.to_text()).unwrap(), rb);
    }

    #[test]
    fn full_support_means_present_everywhere(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let tx = common::random_transactions(&mut rng, 12, 8);
        for f in mine_frequent::<f64>(&tx, 100.0).unwrap() {
            prop_assert!(tx.iter().all(|t| f.items.is_subset(ItemSet::from_transaction(t))));
        }
    }
}

#[test]
fn items_cover_tags_and_classes() {
    assert_eq!(Item::COUNT, SemTag::ALL.len() + 4);
}
