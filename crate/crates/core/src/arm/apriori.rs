use std::collections::{BTreeMap, BTreeSet};

use super::{ClassLabel, Item, ItemSet, Rule, RuleBase, Transaction};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A frequent itemset with its absolute count and percentage support.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrequentItemset<T> {
    pub items: ItemSet,
    pub count: usize,
    pub support: T,
}

fn check_percent<T: Scalar>(name: &'static str, value: T) -> Result<()> {
    if value > T::zero() && value <= T::hundred() {
        Ok(())
    } else {
        Err(Error::PercentOutOfRange {
            name,
            value: value.to_f64().unwrap_or(f64::NAN),
        })
    }
}

/// Slack for comparing a computed percentage against a threshold, so that a
/// threshold written as `100.0 / 6.0` admits exactly one-in-six.
fn tolerance<T: Scalar>() -> T {
    T::epsilon() * T::hundred() * T::from_f64_lossy(4.0)
}

fn meets<T: Scalar>(value: T, threshold: T) -> bool {
    value + tolerance::<T>() >= threshold
}

/// Level-wise Apriori. The class label of each transaction is mined as an
/// ordinary item; supports are percentages of all transactions. Results are
/// sorted by itemset size, then bit pattern.
pub fn mine_frequent<T: Scalar>(transactions: &[Transaction], minsup: T) -> Result<Vec<FrequentItemset<T>>> {
    check_percent("minsup", minsup)?;
    if transactions.is_empty() {
        return Err(Error::NoTransactions);
    }
    let n = transactions.len();
    let rows: Vec<ItemSet> = transactions.iter().map(ItemSet::from_transaction).collect();
    let count = |set: ItemSet| rows.iter().filter(|r| set.is_subset(**r)).count();
    let frequent = |c: usize| meets(T::percent(c, n), minsup);

    let mut out = Vec::new();
    let mut level: BTreeSet<ItemSet> = BTreeSet::new();
    for i in 0..Item::COUNT {
        let set = ItemSet::from_bits(1 << i);
        let c = count(set);
        if c > 0 && frequent(c) {
            level.insert(set);
            out.push(FrequentItemset {
                items: set,
                count: c,
                support: T::percent(c, n),
            });
        }
    }

    while !level.is_empty() {
        let prev: Vec<ItemSet> = level.iter().copied().collect();
        let mut candidates = BTreeSet::new();
        for (i, &a) in prev.iter().enumerate() {
            for &b in &prev[i + 1..] {
                let u = a.union(b);
                if u.len() == a.len() + 1 && u.iter().all(|it| level.contains(&u.without(it))) {
                    candidates.insert(u);
                }
            }
        }
        level = BTreeSet::new();
        for cand in candidates {
            let c = count(cand);
            if c > 0 && frequent(c) {
                level.insert(cand);
                out.push(FrequentItemset {
                    items: cand,
                    count: c,
                    support: T::percent(c, n),
                });
            }
        }
    }
    Ok(out)
}

/// Emits `tags -> class` for every frequent itemset holding exactly one class
/// item and at least one tag, keeping rules whose confidence reaches
/// `minconf`. `minsup` is only recorded in the returned rule base.
pub fn generate_rules<T: Scalar>(frequent: &[FrequentItemset<T>], minsup: T, minconf: T) -> Result<RuleBase<T>> {
    check_percent("minconf", minconf)?;
    let counts: BTreeMap<ItemSet, usize> = frequent.iter().map(|f| (f.items, f.count)).collect();
    let mut rules = Vec::new();
    for f in frequent {
        let classes: Vec<ClassLabel> = f.items.classes().collect();
        let [class] = classes[..] else { continue };
        let antecedent = f.items.tags();
        if antecedent.is_empty() {
            continue;
        }
        let Some(&ante_count) = counts.get(&ItemSet::from(antecedent)) else {
            continue;
        };
        let confidence = T::percent(f.count, ante_count);
        if meets(confidence, minconf) {
            rules.push(Rule::new(antecedent, class, f.support, confidence));
        }
    }
    Ok(RuleBase::new(rules, minsup, minconf))
}

/// `mine_frequent` followed by `generate_rules`.
pub fn mine_rules<T: Scalar>(transactions: &[Transaction], minsup: T, minconf: T) -> Result<RuleBase<T>> {
    check_percent("minconf", minconf)?;
    let frequent = mine_frequent(transactions, minsup)?;
    generate_rules(&frequent, minsup, minconf)
}
