//! Domain lexicon: performance indicators, directionality words and
//! finance-specific sentiment words, plus the list of indicators whose
//! direction must be reversed (cost-like measures where "down" is good).
//!
//! File format is one `phrase,CATEGORY` entry per line with `#` comments.
//! Reversal terms live in a separate file, one phrase per line.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const BUNDLED_LEXICON: &str = include_str!("../resources/lexicon.txt");
const BUNDLED_REVERSALS: &str = include_str!("../resources/reversals.txt");

/// Category sizes of the original lexicon (2,931 entries). The
/// bundled lexicon is a reconstruction and is not expected to match them.
pub const REFERENCE_CATEGORY_COUNTS: [(LexCategory, usize); 6] = [
    (LexCategory::LagInd, 67),
    (LexCategory::LeadInd, 70),
    (LexCategory::Down, 53),
    (LexCategory::Up, 51),
    (LexCategory::Neg, 2337),
    (LexCategory::Pos, 353),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum LexCategory {
    LagInd,
    LeadInd,
    Up,
    Down,
    Pos,
    Neg,
}

impl LexCategory {
    pub const ALL: [LexCategory; 6] = [
        LexCategory::LagInd,
        LexCategory::LeadInd,
        LexCategory::Up,
        LexCategory::Down,
        LexCategory::Pos,
        LexCategory::Neg,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            LexCategory::LagInd => "LagInd",
            LexCategory::LeadInd => "LeadInd",
            LexCategory::Up => "UP",
            LexCategory::Down => "DOWN",
            LexCategory::Pos => "POS",
            LexCategory::Neg => "NEG",
        }
    }

    pub fn is_indicator(self) -> bool {
        matches!(self, LexCategory::LagInd | LexCategory::LeadInd)
    }

    pub fn is_direction(self) -> bool {
        matches!(self, LexCategory::Up | LexCategory::Down)
    }

    pub fn is_sentiment(self) -> bool {
        matches!(self, LexCategory::Pos | LexCategory::Neg)
    }
}

impl fmt::Display for LexCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for LexCategory {
    type Err = ();

    fn from_str(s: &str) -> std::result::Result<Self, ()> {
        LexCategory::ALL
            .into_iter()
            .find(|c| c.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or(())
    }
}

/// Lower-cases and collapses internal whitespace.
pub fn normalize(phrase: &str) -> String {
    phrase
        .split_whitespace()
        .map(|w| w.to_lowercase())
        .collect::<Vec<_>>()
        .join(" ")
}

fn normalize_tokens<S: AsRef<str>>(tokens: &[S]) -> String {
    normalize(
        &tokens
            .iter()
            .map(|t| t.as_ref())
            .collect::<Vec<_>>()
            .join(" "),
    )
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Lexicon {
    entries: HashMap<String, LexCategory>,
    reversal_terms: BTreeSet<String>,
    max_phrase_words: usize,
}

impl Lexicon {
    /// The reconstructed lexicon and reversal list shipped with the crate.
    pub fn bundled() -> Lexicon {
        let mut lex = Lexicon::parse(BUNDLED_LEXICON).expect("bundled lexicon is valid");
        lex.set_reversals(Lexicon::parse_reversals(BUNDLED_REVERSALS))
            .expect("bundled reversal list is valid");
        lex
    }

    pub fn bundled_lexicon_text() -> &'static str {
        BUNDLED_LEXICON
    }

    pub fn bundled_reversals_text() -> &'static str {
        BUNDLED_REVERSALS
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Lexicon> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Lexicon::parse(&text)
    }

    /// Loads a reversal list and attaches it, replacing any existing one.
    pub fn load_reversals(&mut self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        self.set_reversals(Lexicon::parse_reversals(&text))
    }

    pub fn parse(text: &str) -> Result<Lexicon> {
        let mut lex = Lexicon::default();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = strip_comment(raw).trim();
            if line.is_empty() {
                continue;
            }
            let (phrase, category) = line.rsplit_once(',').ok_or_else(|| Error::MalformedLexiconLine {
                line: line_no,
                text: raw.to_string(),
            })?;
            let phrase = normalize(phrase);
            if phrase.is_empty() {
                return Err(Error::MalformedLexiconLine {
                    line: line_no,
                    text: raw.to_string(),
                });
            }
            let category: LexCategory = category.parse().map_err(|_| Error::UnknownCategory {
                line: line_no,
                category: category.trim().to_string(),
            })?;
            lex.insert(phrase, category)?;
        }
        Ok(lex)
    }

    pub fn parse_reversals(text: &str) -> Vec<String> {
        text.lines()
            .map(|l| normalize(strip_comment(l)))
            .filter(|l| !l.is_empty())
            .collect()
    }

    /// Adds an entry. Re-adding a phrase under the same category is a no-op;
    /// adding it under a different category is an error.
    pub fn insert(&mut self, phrase: impl AsRef<str>, category: LexCategory) -> Result<()> {
        let phrase = normalize(phrase.as_ref());
        match self.entries.get(&phrase) {
            Some(&existing) if existing != category => Err(Error::DuplicateEntry {
                word: phrase,
                first: existing.to_string(),
                second: category.to_string(),
            }),
            Some(_) => Ok(()),
            None => {
                self.max_phrase_words = self.max_phrase_words.max(phrase.split(' ').count());
                self.entries.insert(phrase, category);
                Ok(())
            }
        }
    }

    pub fn set_reversals<I, S>(&mut self, terms: I) -> Result<()>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut set = BTreeSet::new();
        for term in terms {
            let term = normalize(term.as_ref());
            match self.entries.get(&term) {
                Some(c) if c.is_indicator() => {
                    set.insert(term);
                }
                _ => return Err(Error::ReversalNotIndicator(term)),
            }
        }
        self.reversal_terms = set;
        Ok(())
    }

    /// Exact-phrase lookup; case and internal spacing are ignored.
    pub fn lookup<S: AsRef<str>>(&self, phrase: &[S]) -> Option<LexCategory> {
        if phrase.is_empty() {
            return None;
        }
        self.entries.get(&normalize_tokens(phrase)).copied()
    }

    pub fn lookup_str(&self, phrase: &str) -> Option<LexCategory> {
        self.entries.get(&normalize(phrase)).copied()
    }

    pub fn is_reversal<S: AsRef<str>>(&self, phrase: &[S]) -> bool {
        !phrase.is_empty() && self.reversal_terms.contains(&normalize_tokens(phrase))
    }

    pub fn reversal_terms(&self) -> impl Iterator<Item = &str> {
        self.reversal_terms.iter().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Longest entry, in words.
    pub fn max_phrase_words(&self) -> usize {
        self.max_phrase_words
    }

    pub fn category_counts(&self) -> BTreeMap<LexCategory, usize> {
        let mut counts = BTreeMap::new();
        for &c in self.entries.values() {
            *counts.entry(c).or_insert(0) += 1;
        }
        counts
    }

    pub fn entries(&self) -> impl Iterator<Item = (&str, LexCategory)> {
        self.entries.iter().map(|(k, &v)| (k.as_str(), v))
    }

    /// Serializes entries in the lexicon file format, grouped by category and
    /// sorted within each group.
    pub fn to_lexicon_text(&self) -> String {
        let mut rows: Vec<(LexCategory, &str)> = self.entries.iter().map(|(k, &v)| (v, k.as_str())).collect();
        rows.sort();
        let mut out = String::new();
        for (c, phrase) in rows {
            out.push_str(phrase);
            out.push(',');
            out.push_str(c.as_str());
            out.push('\n');
        }
        out
    }

    pub fn to_reversals_text(&self) -> String {
        self.reversal_terms.iter().map(|t| format!("{t}\n")).collect()
    }

    pub fn save(&self, lexicon_path: impl AsRef<Path>, reversals_path: impl AsRef<Path>) -> Result<()> {
        let (lp, rp) = (lexicon_path.as_ref(), reversals_path.as_ref());
        std::fs::write(lp, self.to_lexicon_text()).map_err(|e| Error::io(lp, e))?;
        std::fs::write(rp, self.to_reversals_text()).map_err(|e| Error::io(rp, e))?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn two_entry_file_counts() {
        let lex = Lexicon::parse("market share,LagInd\nincrease,UP\n").unwrap();
        assert_eq!(lex.len(), 2);
        let counts = lex.category_counts();
        assert_eq!(counts[&LexCategory::LagInd], 1);
        assert_eq!(counts[&LexCategory::Up], 1);
        assert_eq!(counts.len(), 2);
    }

    #[test]
    fn duplicate_across_categories_names_word() {
        let err = Lexicon::parse("cost,LagInd\ncost,LeadInd\n").unwrap_err();
        match err {
            Error::DuplicateEntry { word, .. } => assert_eq!(word, "cost"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn malformed_and_unknown_category_report_line() {
        match Lexicon::parse("# header\nsales,LagInd\nno separator here\n").unwrap_err() {
            Error::MalformedLexiconLine { line, .. } => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
        match Lexicon::parse("sales,Lagging\n").unwrap_err() {
            Error::UnknownCategory { line, category } => {
                assert_eq!(line, 1);
                assert_eq!(category, "Lagging");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn lookup_examples() {
        let lex = Lexicon::parse("market share,LagInd\nincrease,UP\n").unwrap();
        assert_eq!(lex.lookup(&["market", "share"]), Some(LexCategory::LagInd));
        assert_eq!(lex.lookup(&["Market", "  SHARE"]), Some(LexCategory::LagInd));
        assert_eq!(lex.lookup(&["Increase"]), Some(LexCategory::Up));
        assert_eq!(lex.lookup(&["banana"]), None);
        // exact phrase only, no prefix back-off
        assert_eq!(lex.lookup(&["market"]), None);
        assert_eq!(lex.lookup::<&str>(&[]), None);
    }

    #[test]
    fn reversal_examples() {
        let mut lex = Lexicon::parse(
            "operating cost,LagInd\noperating loss,LagInd\nexpenses,LagInd\nmarket share,LagInd\n",
        )
        .unwrap();
        lex.set_reversals(["operating cost", "operating loss", "expenses"]).unwrap();
        assert!(lex.is_reversal(&["operating", "cost"]));
        assert!(!lex.is_reversal(&["market", "share"]));
        assert!(lex.is_reversal(&["Expenses"]));
    }

    #[test]
    fn reversal_must_be_indicator() {
        let mut lex = Lexicon::parse("rise,UP\n").unwrap();
        assert!(matches!(
            lex.set_reversals(["rise"]),
            Err(Error::ReversalNotIndicator(_))
        ));
        assert!(matches!(
            lex.set_reversals(["missing"]),
            Err(Error::ReversalNotIndicator(_))
        ));
    }

    #[test]
    fn bundled_lexicon_is_consistent() {
        let lex = Lexicon::bundled();
        let counts = lex.category_counts();
        for c in LexCategory::ALL {
            assert!(counts.get(&c).copied().unwrap_or(0) > 0, "{c} empty");
        }
        assert_eq!(counts.values().sum::<usize>(), lex.len());
        for (word, seed) in [
            ("turnover", LexCategory::LagInd),
            ("eps", LexCategory::LagInd),
            ("market share", LexCategory::LagInd),
            ("operating profit", LexCategory::LagInd),
            ("production capacity", LexCategory::LeadInd),
            ("productivity", LexCategory::LeadInd),
            ("layoff", LexCategory::Down),
            ("terminated", LexCategory::Down),
            ("awarded", LexCategory::Up),
        ] {
            assert_eq!(lex.lookup_str(word), Some(seed), "{word}");
        }
        for term in ["operating cost", "operating loss", "expenses"] {
            assert!(lex.is_reversal(&[term]), "{term}");
        }
    }

    #[test]
    fn bundled_files_round_trip() {
        let lex = Lexicon::bundled();
        let mut again = Lexicon::parse(&lex.to_lexicon_text()).unwrap();
        again
            .set_reversals(Lexicon::parse_reversals(&lex.to_reversals_text()))
            .unwrap();
        assert_eq!(again, lex);
    }

    fn arb_lexicon() -> impl Strategy<Value = Vec<(String, usize)>> {
        proptest::collection::vec(("[a-z]{1,6}( [a-z]{1,6})?", 0usize..6), 0..30)
    }

    proptest! {
        #[test]
        fn save_load_round_trip_and_lookup(rows in arb_lexicon()) {
            let mut lex = Lexicon::default();
            for (phrase, c) in &rows {
                let _ = lex.insert(phrase, LexCategory::ALL[*c]);
            }
            let reloaded = Lexicon::parse(&lex.to_lexicon_text()).unwrap();
            prop_assert_eq!(&reloaded, &lex);
            for (word, c) in lex.entries() {
                prop_assert_eq!(lex.lookup_str(&word.to_uppercase()), Some(c));
            }
            prop_assert_eq!(lex.category_counts().values().sum::<usize>(), lex.len());
        }
    }
}
