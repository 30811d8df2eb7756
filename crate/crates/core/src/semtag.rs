//! Conversion of a POS-tagged sentence into the ten-tag semantic vocabulary.
//!
//! Pipeline per sentence:
//! 1. chunk with the indicator grammar; every (indicator, modifier) pair
//!    whose parts resolve to an indicator and a direction yields an
//!    interaction tag such as `LagInd::UP` (one per modifier);
//! 2. NPJJ chunks that produced no interaction contribute bare tags for any
//!    indicator or direction words they contain;
//! 3. if no interaction was found and the sentence carries a comparison
//!    marker, the numeric grammar compares the two quoted values;
//! 4. sentiment words are collected token by token;
//! 5. with reversal enabled, interactions on cost-like indicators flip.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::chunk::{chunk, extract_pairs, Candidate, ChunkGrammar, ChunkTree, Span};
use crate::error::Error;
use crate::lexicon::{LexCategory, Lexicon};
use crate::pos::{PosSentence, PosTag};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SemTag {
    LagInd,
    LeadInd,
    Up,
    Down,
    Pos,
    Neg,
    LagIndUp,
    LagIndDown,
    LeadIndUp,
    LeadIndDown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Indicator {
    Lagging,
    Leading,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Up,
    Down,
}

impl Direction {
    pub fn flipped(self) -> Direction {
        match self {
            Direction::Up => Direction::Down,
            Direction::Down => Direction::Up,
        }
    }
}

impl SemTag {
    pub const ALL: [SemTag; 10] = [
        SemTag::LagInd,
        SemTag::LeadInd,
        SemTag::Up,
        SemTag::Down,
        SemTag::Pos,
        SemTag::Neg,
        SemTag::LagIndUp,
        SemTag::LagIndDown,
        SemTag::LeadIndUp,
        SemTag::LeadIndDown,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SemTag::LagInd => "LagInd",
            SemTag::LeadInd => "LeadInd",
            SemTag::Up => "UP",
            SemTag::Down => "DOWN",
            SemTag::Pos => "POS",
            SemTag::Neg => "NEG",
            SemTag::LagIndUp => "LagInd::UP",
            SemTag::LagIndDown => "LagInd::DOWN",
            SemTag::LeadIndUp => "LeadInd::UP",
            SemTag::LeadIndDown => "LeadInd::DOWN",
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn interaction(indicator: Indicator, direction: Direction) -> SemTag {
        match (indicator, direction) {
            (Indicator::Lagging, Direction::Up) => SemTag::LagIndUp,
            (Indicator::Lagging, Direction::Down) => SemTag::LagIndDown,
            (Indicator::Leading, Direction::Up) => SemTag::LeadIndUp,
            (Indicator::Leading, Direction::Down) => SemTag::LeadIndDown,
        }
    }

    /// `(indicator, direction)` for interaction tags.
    pub fn decompose(self) -> Option<(Indicator, Direction)> {
        match self {
            SemTag::LagIndUp => Some((Indicator::Lagging, Direction::Up)),
            SemTag::LagIndDown => Some((Indicator::Lagging, Direction::Down)),
            SemTag::LeadIndUp => Some((Indicator::Leading, Direction::Up)),
            SemTag::LeadIndDown => Some((Indicator::Leading, Direction::Down)),
            _ => None,
        }
    }

    pub fn is_interaction(self) -> bool {
        self.decompose().is_some()
    }

    /// Flips the direction of an interaction tag; other tags are unchanged.
    pub fn reversed(self) -> SemTag {
        match self.decompose() {
            Some((i, d)) => SemTag::interaction(i, d.flipped()),
            None => self,
        }
    }

    pub fn from_category(c: LexCategory) -> SemTag {
        match c {
            LexCategory::LagInd => SemTag::LagInd,
            LexCategory::LeadInd => SemTag::LeadInd,
            LexCategory::Up => SemTag::Up,
            LexCategory::Down => SemTag::Down,
            LexCategory::Pos => SemTag::Pos,
            LexCategory::Neg => SemTag::Neg,
        }
    }
}

impl fmt::Display for SemTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SemTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        SemTag::ALL
            .into_iter()
            .find(|t| t.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnknownTag(s.to_string()))
    }
}

/// Set of semantic tags, iterated in canonical order.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TagSet(u16);

impl TagSet {
    pub fn new() -> Self {
        TagSet(0)
    }

    pub fn bits(self) -> u16 {
        self.0
    }

    pub fn from_bits(bits: u16) -> Self {
        TagSet(bits & ((1 << SemTag::ALL.len()) - 1))
    }

    pub fn insert(&mut self, t: SemTag) -> bool {
        let had = self.contains(t);
        self.0 |= 1 << t.index();
        !had
    }

    pub fn remove(&mut self, t: SemTag) {
        self.0 &= !(1 << t.index());
    }

    pub fn contains(self, t: SemTag) -> bool {
        self.0 & (1 << t.index()) != 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset(self, other: TagSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: TagSet) -> TagSet {
        TagSet(self.0 | other.0)
    }

    pub fn intersection(self, other: TagSet) -> TagSet {
        TagSet(self.0 & other.0)
    }

    pub fn iter(self) -> impl Iterator<Item = SemTag> {
        SemTag::ALL.into_iter().filter(move |&t| self.contains(t))
    }

    /// Every interaction tag with its direction flipped.
    pub fn reversed(self) -> TagSet {
        self.iter().map(SemTag::reversed).collect()
    }

    /// Parses tags separated by whitespace and/or commas.
    pub fn parse(text: &str) -> Result<TagSet, Error> {
        text.split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .map(str::parse::<SemTag>)
            .collect()
    }
}

impl FromIterator<SemTag> for TagSet {
    fn from_iter<I: IntoIterator<Item = SemTag>>(iter: I) -> Self {
        let mut set = TagSet::new();
        for t in iter {
            set.insert(t);
        }
        set
    }
}

impl fmt::Display for TagSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str(t.as_str())?;
        }
        Ok(())
    }
}

impl Serialize for TagSet {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.iter().map(SemTag::as_str))
    }
}

impl<'de> Deserialize<'de> for TagSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let names = Vec::<String>::deserialize(d)?;
        names
            .iter()
            .map(|n| n.parse::<SemTag>())
            .collect::<Result<TagSet, _>>()
            .map_err(serde::de::Error::custom)
    }
}

/// Tag subsets used to study the contribution of each kind of evidence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// Lagging indicators plus directionality.
    LagOnly,
    /// Lagging and leading indicators plus directionality.
    LagLead,
    /// Every tag, sentiment words included.
    #[default]
    All,
}

impl Mode {
    pub fn allowed(self) -> TagSet {
        use SemTag::*;
        match self {
            Mode::LagOnly => [LagInd, LagIndUp, LagIndDown, Up, Down].into_iter().collect(),
            Mode::LagLead => [LagInd, LagIndUp, LagIndDown, Up, Down, LeadInd, LeadIndUp, LeadIndDown]
                .into_iter()
                .collect(),
            Mode::All => SemTag::ALL.into_iter().collect(),
        }
    }

    pub fn filter(self, tags: TagSet) -> TagSet {
        tags.intersection(self.allowed())
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Mode::LagOnly => "lag",
            Mode::LagLead => "lag-lead",
            Mode::All => "all",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "lag" | "lag-only" | "lagonly" => Ok(Mode::LagOnly),
            "lag-lead" | "laglead" => Ok(Mode::LagLead),
            "all" => Ok(Mode::All),
            other => Err(format!("unknown mode {other:?} (expected lag, lag-lead or all)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TaggedSentence {
    pub tags: TagSet,
    pub source: PosSentence,
}

impl TaggedSentence {
    pub fn filtered(&self, mode: Mode) -> TaggedSentence {
        filter_mode(self, mode)
    }
}

pub fn filter_mode(t: &TaggedSentence, mode: Mode) -> TaggedSentence {
    TaggedSentence {
        tags: mode.filter(t.tags),
        source: t.source.clone(),
    }
}

/// Lexicon hit inside a span.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Hit {
    span: Span,
    category: LexCategory,
}

fn find_hit(s: &PosSentence, lex: &Lexicon, span: Span, wanted: impl Fn(LexCategory) -> bool) -> Option<Hit> {
    let max = lex.max_phrase_words().min(span.len());
    for len in (1..=max).rev() {
        for start in span.start..=span.end - len {
            let sub = Span::new(start, start + len);
            if let Some(c) = lex.lookup(&sub.words(s)) {
                if wanted(c) {
                    return Some(Hit { span: sub, category: c });
                }
            }
        }
    }
    None
}

/// Non-overlapping hits, longest first then leftmost.
fn all_hits(s: &PosSentence, lex: &Lexicon, span: Span, wanted: impl Fn(LexCategory) -> bool) -> Vec<Hit> {
    let mut hits: Vec<Hit> = Vec::new();
    let max = lex.max_phrase_words().min(span.len());
    for len in (1..=max).rev() {
        for start in span.start..=span.end - len {
            let sub = Span::new(start, start + len);
            if hits.iter().any(|h| h.span.overlaps(&sub)) {
                continue;
            }
            if let Some(c) = lex.lookup(&sub.words(s)) {
                if wanted(c) {
                    hits.push(Hit { span: sub, category: c });
                }
            }
        }
    }
    hits.sort_by_key(|h| h.span);
    hits
}

fn indicator_of(c: LexCategory) -> Option<Indicator> {
    match c {
        LexCategory::LagInd => Some(Indicator::Lagging),
        LexCategory::LeadInd => Some(Indicator::Leading),
        _ => None,
    }
}

fn direction_of(c: LexCategory) -> Option<Direction> {
    match c {
        LexCategory::Up => Some(Direction::Up),
        LexCategory::Down => Some(Direction::Down),
        _ => None,
    }
}

/// Comparison phrases that trigger numeric directionality.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ComparisonMarker {
    ComparedTo,
    Versus,
    DownFrom,
    UpFrom,
}

impl ComparisonMarker {
    fn words(self) -> &'static [&'static str] {
        match self {
            ComparisonMarker::ComparedTo => &["compared", "to"],
            ComparisonMarker::Versus => &["versus"],
            ComparisonMarker::DownFrom => &["down", "from"],
            ComparisonMarker::UpFrom => &["up", "from"],
        }
    }

    /// First marker occurrence as `(marker, token index)`.
    pub fn find(s: &PosSentence) -> Option<(ComparisonMarker, usize)> {
        let lower: Vec<String> = s.surfaces().map(str::to_lowercase).collect();
        (0..lower.len()).find_map(|i| {
            [
                ComparisonMarker::ComparedTo,
                ComparisonMarker::Versus,
                ComparisonMarker::DownFrom,
                ComparisonMarker::UpFrom,
            ]
            .into_iter()
            .find(|m| {
                let w = m.words();
                i + w.len() <= lower.len() && lower[i..i + w.len()].iter().zip(w).all(|(a, b)| a == b)
            })
            .map(|m| (m, i))
        })
    }
}

fn scale_of(word: &str) -> Option<f64> {
    match word.to_lowercase().trim_end_matches('.') {
        "thousand" | "k" => Some(1e3),
        "million" | "mn" | "m" | "mln" => Some(1e6),
        "billion" | "bn" | "b" | "bln" => Some(1e9),
        _ => None,
    }
}

/// Parses numerals such as `8.3`, `85,432.50`, `21mn`, `-4`.
pub fn parse_numeral(word: &str) -> Option<f64> {
    let cleaned: String = word.chars().filter(|&c| c != ',').collect();
    let digits_end = cleaned
        .char_indices()
        .find(|&(i, c)| !(c.is_ascii_digit() || c == '.' || ((c == '-' || c == '+') && i == 0)))
        .map(|(i, _)| i)
        .unwrap_or(cleaned.len());
    let value: f64 = cleaned[..digits_end].parse().ok()?;
    let suffix = &cleaned[digits_end..];
    if suffix.is_empty() || suffix == "%" {
        Some(value)
    } else {
        scale_of(suffix).map(|k| value * k)
    }
}

/// Numeric expressions in `span`: runs of CD tokens, with trailing scale
/// words folded in. Returns `(first token index, value)`.
fn numbers_in(s: &PosSentence, span: Span) -> Vec<(usize, f64)> {
    let mut out = Vec::new();
    let mut i = span.start;
    while i < span.end {
        if s.tokens[i].pos != PosTag::CD {
            i += 1;
            continue;
        }
        let start = i;
        let mut value: Option<f64> = None;
        while i < span.end && s.tokens[i].pos == PosTag::CD {
            let w = &s.tokens[i].surface;
            match (value, parse_numeral(w), scale_of(w)) {
                (None, Some(v), _) => value = Some(v),
                (Some(v), _, Some(k)) => value = Some(v * k),
                _ => {}
            }
            i += 1;
        }
        if let Some(v) = value {
            out.push((start, v));
        }
    }
    out
}

/// Outcome of numeric directionality: the tag and the indicator span used.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NumericDirection {
    pub tag: SemTag,
    /// Lexicon phrase that resolved the indicator.
    pub indicator: Span,
    /// The noun-phrase chunk containing it.
    pub phrase: Span,
    pub marker: ComparisonMarker,
    pub values: Option<(f64, f64)>,
}

/// Compares the indicator's current value (before the marker) against the
/// reference value (after it): lower means DOWN, higher means UP, equal
/// yields nothing. `down from`/`up from` decide the direction outright.
pub fn derive_numeric_direction(s: &PosSentence, tree: &ChunkTree, lex: &Lexicon) -> Option<NumericDirection> {
    let (marker, at) = ComparisonMarker::find(s)?;
    for node in tree.chunks_labelled("NPJJ") {
        let Some((phrase, indicator)) = node
            .descendants()
            .into_iter()
            .filter(|c| c.label == "NP" || c.label == "NPP")
            .find_map(|c| find_hit(s, lex, c.span, LexCategory::is_indicator).map(|h| (c.span, h)))
        else {
            continue;
        };
        let Some(kind) = indicator_of(indicator.category) else { continue };
        let fixed = match marker {
            ComparisonMarker::DownFrom => Some(Direction::Down),
            ComparisonMarker::UpFrom => Some(Direction::Up),
            _ => None,
        };
        let numbers = numbers_in(s, node.span);
        let values = if node.span.start <= at && at < node.span.end {
            let before = numbers.iter().rev().find(|(i, _)| *i < at);
            let after = numbers.iter().find(|(i, _)| *i > at);
            before.zip(after).map(|(a, b)| (a.1, b.1))
        } else {
            match numbers.as_slice() {
                [a, b, ..] => Some((a.1, b.1)),
                _ => None,
            }
        };
        let direction = match (fixed, values) {
            (Some(d), _) => d,
            (None, Some((current, reference))) if current < reference => Direction::Down,
            (None, Some((current, reference))) if current > reference => Direction::Up,
            _ => return None,
        };
        return Some(NumericDirection {
            tag: SemTag::interaction(kind, direction),
            indicator: indicator.span,
            phrase,
            marker,
            values,
        });
    }
    None
}

/// Bundles the lexicon and both grammars for repeated tagging.
#[derive(Debug, Clone)]
pub struct SentenceTagger {
    pub lexicon: Lexicon,
    pub indicator_grammar: ChunkGrammar,
    pub numeric_grammar: ChunkGrammar,
    pub reversal: bool,
}

impl SentenceTagger {
    pub fn new(lexicon: Lexicon, reversal: bool) -> Self {
        SentenceTagger {
            lexicon,
            indicator_grammar: ChunkGrammar::indicator(),
            numeric_grammar: ChunkGrammar::numeric(),
            reversal,
        }
    }

    pub fn tag(&self, s: &PosSentence) -> TaggedSentence {
        tag_sentence(
            s,
            &self.lexicon,
            &self.indicator_grammar,
            &self.numeric_grammar,
            self.reversal,
        )
    }
}

fn reverse_if(lex: &Lexicon, s: &PosSentence, reversal: bool, tag: SemTag, indicator: Span) -> SemTag {
    if reversal && lex.is_reversal(&indicator.words(s)) {
        tag.reversed()
    } else {
        tag
    }
}

pub fn tag_sentence(
    s: &PosSentence,
    lex: &Lexicon,
    indicator_grammar: &ChunkGrammar,
    numeric_grammar: &ChunkGrammar,
    reversal: bool,
) -> TaggedSentence {
    let mut tags = TagSet::new();
    let tree = chunk(indicator_grammar, s);
    let candidates = extract_pairs(&tree);

    let mut contributing: Vec<Span> = Vec::new();
    let mut nodes_with_interaction: HashSet<usize> = HashSet::new();
    let mut used_modifiers: HashSet<(usize, Span)> = HashSet::new();
    for cand in &candidates {
        let Candidate::Pair { node, indicator, modifier } = *cand else { continue };
        if used_modifiers.contains(&(node, modifier)) {
            continue;
        }
        let Some(dir) = find_hit(s, lex, modifier, LexCategory::is_direction) else { continue };
        let Some(ind) = find_hit(s, lex, indicator, LexCategory::is_indicator) else { continue };
        let (Some(kind), Some(direction)) = (indicator_of(ind.category), direction_of(dir.category)) else {
            continue;
        };
        let tag = SemTag::interaction(kind, direction);
        tags.insert(reverse_if(lex, s, reversal, tag, ind.span));
        contributing.extend([ind.span, dir.span]);
        nodes_with_interaction.insert(node);
        used_modifiers.insert((node, modifier));
    }

    if nodes_with_interaction.is_empty() && ComparisonMarker::find(s).is_some() {
        let numeric_tree = chunk(numeric_grammar, s);
        if let Some(nd) = derive_numeric_direction(s, &numeric_tree, lex) {
            tags.insert(reverse_if(lex, s, reversal, nd.tag, nd.indicator));
            contributing.push(nd.phrase);
        }
    }

    let mut seen_spans: HashSet<Span> = HashSet::new();
    for cand in &candidates {
        if nodes_with_interaction.contains(&cand.node()) {
            continue;
        }
        let spans = match *cand {
            Candidate::Pair { indicator, modifier, .. } => vec![indicator, modifier],
            Candidate::Singleton { span, .. } => vec![span],
        };
        for span in spans {
            if !seen_spans.insert(span) {
                continue;
            }
            for hit in all_hits(s, lex, span, |c| c.is_indicator() || c.is_direction()) {
                if !contributing.iter().any(|c| c.overlaps(&hit.span)) {
                    tags.insert(SemTag::from_category(hit.category));
                }
            }
        }
    }

    for token in &s.tokens {
        if let Some(c) = lex.lookup_str(&token.surface) {
            if c.is_sentiment() {
                tags.insert(SemTag::from_category(c));
            }
        }
    }

    TaggedSentence {
        tags,
        source: s.clone(),
    }
}
