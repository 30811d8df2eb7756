//! Class association rule mining over tagged transactions.

mod apriori;
mod rules;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::semtag::{SemTag, TagSet};

pub use apriori::{generate_rules, mine_frequent, mine_rules, FrequentItemset};
pub use rules::{Rule, RuleBase};

/// Sentence polarity, plus the `polarized` pseudo-class used by the first
/// stage of the hierarchical classifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClassLabel {
    Positive,
    Neutral,
    Negative,
    Polarized,
}

impl ClassLabel {
    pub const ALL: [ClassLabel; 4] = [
        ClassLabel::Positive,
        ClassLabel::Neutral,
        ClassLabel::Negative,
        ClassLabel::Polarized,
    ];

    /// The three gold polarity classes, in reporting order.
    pub const POLARITIES: [ClassLabel; 3] = [ClassLabel::Positive, ClassLabel::Neutral, ClassLabel::Negative];

    pub fn as_str(self) -> &'static str {
        match self {
            ClassLabel::Positive => "positive",
            ClassLabel::Neutral => "neutral",
            ClassLabel::Negative => "negative",
            ClassLabel::Polarized => "polarized",
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    /// Position in the score tie-break order: neutral, negative, positive,
    /// polarized.
    pub fn tie_rank(self) -> usize {
        match self {
            ClassLabel::Neutral => 0,
            ClassLabel::Negative => 1,
            ClassLabel::Positive => 2,
            ClassLabel::Polarized => 3,
        }
    }

    pub fn is_polar(self) -> bool {
        matches!(self, ClassLabel::Positive | ClassLabel::Negative)
    }
}

impl fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ClassLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        ClassLabel::ALL
            .into_iter()
            .find(|c| c.as_str().eq_ignore_ascii_case(t))
            .ok_or_else(|| Error::UnknownLabel(t.to_string()))
    }
}

/// A mining item: either a semantic tag or a class label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Item {
    Tag(SemTag),
    Class(ClassLabel),
}

impl Item {
    const CLASS_OFFSET: usize = SemTag::ALL.len();
    pub const COUNT: usize = SemTag::ALL.len() + ClassLabel::ALL.len();

    pub fn index(self) -> usize {
        match self {
            Item::Tag(t) => t.index(),
            Item::Class(c) => Self::CLASS_OFFSET + c.index(),
        }
    }

    pub fn from_index(i: usize) -> Option<Item> {
        if i < Self::CLASS_OFFSET {
            SemTag::ALL.get(i).copied().map(Item::Tag)
        } else {
            ClassLabel::ALL.get(i - Self::CLASS_OFFSET).copied().map(Item::Class)
        }
    }
}

impl fmt::Display for Item {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Item::Tag(t) => t.fmt(f),
            Item::Class(c) => c.fmt(f),
        }
    }
}

/// Bitset over the fourteen mining items.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ItemSet(u32);

impl ItemSet {
    const TAG_MASK: u32 = (1 << SemTag::ALL.len()) - 1;

    pub fn new() -> Self {
        ItemSet(0)
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn from_bits(bits: u32) -> Self {
        ItemSet(bits & ((1 << Item::COUNT) - 1))
    }

    pub fn from_transaction(t: &Transaction) -> Self {
        let mut s = ItemSet(t.items.bits() as u32);
        s.insert(Item::Class(t.label));
        s
    }

    pub fn insert(&mut self, item: Item) {
        self.0 |= 1 << item.index();
    }

    pub fn contains(self, item: Item) -> bool {
        self.0 & (1 << item.index()) != 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset(self, other: ItemSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: ItemSet) -> ItemSet {
        ItemSet(self.0 | other.0)
    }

    pub fn without(self, item: Item) -> ItemSet {
        ItemSet(self.0 & !(1 << item.index()))
    }

    pub fn tags(self) -> TagSet {
        TagSet::from_bits((self.0 & Self::TAG_MASK) as u16)
    }

    pub fn classes(self) -> impl Iterator<Item = ClassLabel> {
        ClassLabel::ALL
            .into_iter()
            .filter(move |&c| self.contains(Item::Class(c)))
    }

    pub fn iter(self) -> impl Iterator<Item = Item> {
        (0..Item::COUNT)
            .filter(move |&i| self.0 & (1 << i) != 0)
            .filter_map(Item::from_index)
    }
}

impl From<TagSet> for ItemSet {
    fn from(t: TagSet) -> Self {
        ItemSet(t.bits() as u32)
    }
}

impl FromIterator<Item> for ItemSet {
    fn from_iter<I: IntoIterator<Item = Item>>(iter: I) -> Self {
        let mut s = ItemSet::new();
        for i in iter {
            s.insert(i);
        }
        s
    }
}

impl fmt::Display for ItemSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, item) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            item.fmt(f)?;
        }
        Ok(())
    }
}

/// Tags of one sentence together with its class label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Transaction {
    pub items: TagSet,
    pub label: ClassLabel,
}

impl Transaction {
    pub fn new(items: TagSet, label: ClassLabel) -> Self {
        Transaction { items, label }
    }

    pub fn relabelled(self, label: ClassLabel) -> Self {
        Transaction { label, ..self }
    }
}

/// `LagInd::UP, positive` — tags then the label, comma separated.
impl fmt::Display for Transaction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.items.is_empty() {
            self.label.fmt(f)
        } else {
            write!(f, "{}, {}", self.items, self.label)
        }
    }
}

/// Accepts both `tags<TAB>label` and the comma form `tag, tag, label`.
impl FromStr for Transaction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (tags, label) = match s.rsplit_once('\t') {
            Some((tags, label)) => (tags, label),
            None => match s.rsplit_once(',') {
                Some((tags, label)) => (tags, label),
                None => ("", s),
            },
        };
        Ok(Transaction {
            items: TagSet::parse(tags)?,
            label: label.parse()?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn item_indices_are_dense_and_invertible() {
        for i in 0..Item::COUNT {
            assert_eq!(Item::from_index(i).unwrap().index(), i);
        }
        assert_eq!(Item::from_index(Item::COUNT), None);
    }

    #[test]
    fn transaction_text_forms() {
        let t: Transaction = "LagInd, POS, NEG, neutral".parse().unwrap();
        assert_eq!(t.label, ClassLabel::Neutral);
        assert_eq!(t.items.len(), 3);
        assert_eq!(t.to_string(), "LagInd, POS, NEG, neutral");
        let t: Transaction = "LagInd::UP\tpositive".parse().unwrap();
        assert_eq!(t.to_string(), "LagInd::UP, positive");
        let t: Transaction = "\tneutral".parse().unwrap();
        assert!(t.items.is_empty());
        assert_eq!(t.to_string(), "neutral");
        assert!("UP, maybe".parse::<Transaction>().is_err());
    }

    #[test]
    fn itemset_splits_tags_and_classes() {
        let t: Transaction = "UP, POS, neutral".parse().unwrap();
        let s = ItemSet::from_transaction(&t);
        assert_eq!(s.len(), 3);
        assert_eq!(s.tags(), t.items);
        assert_eq!(s.classes().collect::<Vec<_>>(), vec![ClassLabel::Neutral]);
        assert_eq!(s.to_string(), "UP, POS, neutral");
    }
}
