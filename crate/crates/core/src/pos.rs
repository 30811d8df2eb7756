//! POS-tagged sentences: Penn Treebank tags, the `surface_TAG` pre-tagged
//! line format, a tokenizer for raw text and a pluggable tagger interface
//! with a small rule-based fallback implementation.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lexicon::Lexicon;

macro_rules! penn_tags {
    ($($variant:ident => $s:literal),* $(,)?) => {
        /// Penn Treebank part-of-speech tag, including the punctuation tags
        /// emitted by common taggers.
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
        pub enum PosTag { $($variant),* }

        impl PosTag {
            pub const ALL: &'static [PosTag] = &[$(PosTag::$variant),*];

            pub fn as_str(self) -> &'static str {
                match self { $(PosTag::$variant => $s),* }
            }
        }

        impl FromStr for PosTag {
            type Err = ();
            fn from_str(s: &str) -> std::result::Result<Self, ()> {
                match s {
                    $($s => Ok(PosTag::$variant),)*
                    "-LRB-" => Ok(PosTag::LeftParen),
                    "-RRB-" => Ok(PosTag::RightParen),
                    _ => Err(()),
                }
            }
        }
    };
}

penn_tags! {
    CC => "CC", CD => "CD", DT => "DT", EX => "EX", FW => "FW", IN => "IN",
    JJ => "JJ", JJR => "JJR", JJS => "JJS", LS => "LS", MD => "MD",
    NN => "NN", NNS => "NNS", NNP => "NNP", NNPS => "NNPS", PDT => "PDT",
    Possessive => "POS", PRP => "PRP", PRPS => "PRP$", RB => "RB", RBR => "RBR",
    RBS => "RBS", RP => "RP", SYM => "SYM", TO => "TO", UH => "UH",
    VB => "VB", VBD => "VBD", VBG => "VBG", VBN => "VBN", VBP => "VBP", VBZ => "VBZ",
    WDT => "WDT", WP => "WP", WPS => "WP$", WRB => "WRB",
    Period => ".", Comma => ",", Colon => ":", LeftParen => "(", RightParen => ")",
    OpenQuote => "``", CloseQuote => "''", Dollar => "$", Hash => "#",
}

impl PosTag {
    pub fn is_noun(self) -> bool {
        matches!(self, PosTag::NN | PosTag::NNS | PosTag::NNP | PosTag::NNPS)
    }

    pub fn is_verb(self) -> bool {
        matches!(
            self,
            PosTag::VB | PosTag::VBD | PosTag::VBG | PosTag::VBN | PosTag::VBP | PosTag::VBZ
        )
    }
}

impl fmt::Display for PosTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosToken {
    pub surface: String,
    pub pos: PosTag,
}

impl PosToken {
    pub fn new(surface: impl Into<String>, pos: PosTag) -> Self {
        PosToken {
            surface: surface.into(),
            pos,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosSentence {
    pub tokens: Vec<PosToken>,
    pub raw: String,
}

impl PosSentence {
    pub fn new(tokens: Vec<PosToken>, raw: impl Into<String>) -> Self {
        PosSentence {
            tokens,
            raw: raw.into(),
        }
    }

    /// Builds a sentence from POS tags alone; surfaces repeat the tag.
    pub fn from_tags(tags: &[PosTag]) -> Self {
        let tokens: Vec<PosToken> = tags
            .iter()
            .map(|&t| PosToken::new(t.as_str(), t))
            .collect();
        let raw = tokens
            .iter()
            .map(|t| t.surface.as_str())
            .collect::<Vec<_>>()
            .join(" ");
        PosSentence { tokens, raw }
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn surfaces(&self) -> impl Iterator<Item = &str> {
        self.tokens.iter().map(|t| t.surface.as_str())
    }

    pub fn tags(&self) -> impl Iterator<Item = PosTag> + '_ {
        self.tokens.iter().map(|t| t.pos)
    }

    /// `surface_TAG surface_TAG ...`
    pub fn to_pretagged(&self) -> String {
        self.tokens
            .iter()
            .map(|t| format!("{}_{}", t.surface, t.pos))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// Parses one `surface_TAG surface_TAG ...` line. The tag is whatever follows
/// the last underscore, so surfaces may themselves contain underscores.
pub fn ingest_pretagged(line: &str) -> Result<PosSentence> {
    let mut tokens = Vec::new();
    let mut surfaces = Vec::new();
    for (i, unit) in line.split_whitespace().enumerate() {
        let (surface, tag) = unit
            .rsplit_once('_')
            .filter(|(s, t)| !s.is_empty() && !t.is_empty())
            .ok_or_else(|| Error::MalformedToken {
                index: i + 1,
                token: unit.to_string(),
            })?;
        let pos: PosTag = tag.parse().map_err(|_| Error::UnknownPosTag {
            index: i + 1,
            tag: tag.to_string(),
        })?;
        surfaces.push(surface);
        tokens.push(PosToken::new(surface, pos));
    }
    if tokens.is_empty() {
        return Err(Error::EmptySentence);
    }
    Ok(PosSentence::new(tokens, surfaces.join(" ")))
}

const LEADING_PUNCT: &[char] = &['(', '"', '\'', '`', '$', '[', '\u{201c}', '\u{2018}'];
const TRAILING_PUNCT: &[char] = &[
    '.', ',', ';', ':', '!', '?', ')', '"', '\'', '%', ']', '\u{201d}', '\u{2019}',
];

/// Splits on whitespace, then peels leading brackets/quotes/currency signs and
/// trailing punctuation, `%` and possessive `'s` into their own tokens.
/// No non-whitespace character is ever dropped.
pub fn tokenize(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    for word in text.split_whitespace() {
        let mut rest = word;
        while let Some(c) = rest.chars().next() {
            let possessive = rest.eq_ignore_ascii_case("'s") || rest == "\u{2019}s";
            if LEADING_PUNCT.contains(&c) && rest.len() > c.len_utf8() && !possessive {
                out.push(c.to_string());
                rest = &rest[c.len_utf8()..];
            } else {
                break;
            }
        }
        let mut tail = Vec::new();
        loop {
            let lower = rest.to_lowercase();
            if rest.len() > 2 && (lower.ends_with("'s") || lower.ends_with("\u{2019}s")) {
                let cut = rest.len() - if lower.ends_with("'s") { 2 } else { 4 };
                tail.push(rest[cut..].to_string());
                rest = &rest[..cut];
                continue;
            }
            match rest.chars().last() {
                Some(c) if TRAILING_PUNCT.contains(&c) && rest.len() > c.len_utf8() => {
                    // keep decimal points and abbreviations like "U.S." intact
                    if c == '.' && is_abbreviation(&rest[..rest.len() - 1]) {
                        break;
                    }
                    tail.push(c.to_string());
                    rest = &rest[..rest.len() - c.len_utf8()];
                }
                _ => break,
            }
        }
        if !rest.is_empty() {
            out.push(rest.to_string());
        }
        out.extend(tail.into_iter().rev());
    }
    out
}

// "U.S" / "e.g" style stems whose final period belongs to the word
fn is_abbreviation(stem: &str) -> bool {
    stem.contains('.')
        && stem
            .split('.')
            .all(|seg| (1..=2).contains(&seg.len()) && seg.chars().all(char::is_alphabetic))
}

/// A part-of-speech tagger over pre-split tokens.
pub trait PosTagger {
    fn tag(&self, tokens: &[String]) -> Result<Vec<PosTag>>;
}

/// Tokenizes `text` and tags it with `tagger`.
pub fn tag_raw(text: &str, tagger: &dyn PosTagger) -> Result<PosSentence> {
    let tokens = tokenize(text);
    if tokens.is_empty() {
        return Err(Error::EmptySentence);
    }
    let tags = tagger.tag(&tokens)?;
    if tags.len() != tokens.len() {
        return Err(Error::TaggerUnavailable(format!(
            "tagger returned {} tags for {} tokens",
            tags.len(),
            tokens.len()
        )));
    }
    let tokens = tokens
        .into_iter()
        .zip(tags)
        .map(|(s, t)| PosToken::new(s, t))
        .collect();
    Ok(PosSentence::new(tokens, text))
}

/// Tagger placeholder for configurations that expect externally tagged input.
#[derive(Debug, Default, Clone, Copy)]
pub struct NoTagger;

impl PosTagger for NoTagger {
    fn tag(&self, _tokens: &[String]) -> Result<Vec<PosTag>> {
        Err(Error::TaggerUnavailable(
            "no POS tagger configured; supply pre-tagged input".into(),
        ))
    }
}

const CLOSED_CLASS: &[(&str, PosTag)] = &[
    ("the", PosTag::DT), ("a", PosTag::DT), ("an", PosTag::DT), ("this", PosTag::DT),
    ("that", PosTag::IN), ("these", PosTag::DT), ("those", PosTag::DT), ("each", PosTag::DT),
    ("every", PosTag::DT), ("some", PosTag::DT), ("any", PosTag::DT), ("no", PosTag::DT),
    ("all", PosTag::DT), ("both", PosTag::DT), ("another", PosTag::DT), ("either", PosTag::DT),
    ("of", PosTag::IN), ("in", PosTag::IN), ("on", PosTag::IN), ("at", PosTag::IN),
    ("by", PosTag::IN), ("for", PosTag::IN), ("with", PosTag::IN), ("from", PosTag::IN),
    ("into", PosTag::IN), ("during", PosTag::IN), ("including", PosTag::VBG), ("until", PosTag::IN),
    ("against", PosTag::IN), ("among", PosTag::IN), ("through", PosTag::IN), ("over", PosTag::IN),
    ("between", PosTag::IN), ("after", PosTag::IN), ("before", PosTag::IN), ("under", PosTag::IN),
    ("about", PosTag::IN), ("than", PosTag::IN), ("per", PosTag::IN), ("via", PosTag::IN),
    ("since", PosTag::IN), ("as", PosTag::IN), ("while", PosTag::IN), ("because", PosTag::IN),
    ("if", PosTag::IN), ("whether", PosTag::IN), ("although", PosTag::IN), ("though", PosTag::IN),
    ("versus", PosTag::IN), ("vs", PosTag::IN), ("like", PosTag::IN), ("within", PosTag::IN),
    ("without", PosTag::IN), ("across", PosTag::IN), ("despite", PosTag::IN), ("upon", PosTag::IN),
    ("and", PosTag::CC), ("or", PosTag::CC), ("but", PosTag::CC), ("nor", PosTag::CC),
    ("plus", PosTag::CC), ("to", PosTag::TO),
    ("will", PosTag::MD), ("would", PosTag::MD), ("can", PosTag::MD), ("could", PosTag::MD),
    ("may", PosTag::MD), ("might", PosTag::MD), ("shall", PosTag::MD), ("should", PosTag::MD),
    ("must", PosTag::MD),
    ("it", PosTag::PRP), ("he", PosTag::PRP), ("she", PosTag::PRP), ("they", PosTag::PRP),
    ("we", PosTag::PRP), ("i", PosTag::PRP), ("you", PosTag::PRP), ("them", PosTag::PRP),
    ("us", PosTag::PRP), ("him", PosTag::PRP), ("itself", PosTag::PRP), ("themselves", PosTag::PRP),
    ("its", PosTag::PRPS), ("their", PosTag::PRPS), ("our", PosTag::PRPS), ("his", PosTag::PRPS),
    ("my", PosTag::PRPS), ("your", PosTag::PRPS), ("her", PosTag::PRPS),
    ("which", PosTag::WDT), ("who", PosTag::WP), ("what", PosTag::WP), ("whose", PosTag::WPS),
    ("when", PosTag::WRB), ("where", PosTag::WRB), ("how", PosTag::WRB), ("why", PosTag::WRB),
    ("there", PosTag::EX),
    ("be", PosTag::VB), ("is", PosTag::VBZ), ("are", PosTag::VBP), ("was", PosTag::VBD),
    ("were", PosTag::VBD), ("been", PosTag::VBN), ("being", PosTag::VBG), ("has", PosTag::VBZ),
    ("have", PosTag::VBP), ("had", PosTag::VBD), ("do", PosTag::VBP), ("does", PosTag::VBZ),
    ("did", PosTag::VBD), ("said", PosTag::VBD), ("says", PosTag::VBZ), ("say", PosTag::VBP),
    ("expects", PosTag::VBZ), ("expect", PosTag::VBP), ("estimates", PosTag::VBZ),
    ("intends", PosTag::VBZ), ("plans", PosTag::VBZ), ("aims", PosTag::VBZ), ("aim", PosTag::VB),
    ("rose", PosTag::VBD), ("fell", PosTag::VBD), ("grew", PosTag::VBD), ("made", PosTag::VBD),
    ("make", PosTag::VB), ("makes", PosTag::VBZ), ("shrank", PosTag::VBD), ("took", PosTag::VBD),
    ("gave", PosTag::VBD), ("sold", PosTag::VBD), ("bought", PosTag::VBD), ("won", PosTag::VBD),
    ("got", PosTag::VBD), ("paid", PosTag::VBN), ("set", PosTag::VBN), ("held", PosTag::VBD),
    ("remains", PosTag::VBZ), ("remain", PosTag::VBP), ("totalled", PosTag::VBD),
    ("totaled", PosTag::VBD), ("amounted", PosTag::VBD), ("stood", PosTag::VBD),
    ("enhances", PosTag::VBZ), ("welcome", PosTag::VB), ("laid", PosTag::VBN),
    ("not", PosTag::RB), ("also", PosTag::RB), ("very", PosTag::RB), ("only", PosTag::RB),
    ("still", PosTag::RB), ("already", PosTag::RB), ("now", PosTag::RB), ("up", PosTag::RB),
    ("down", PosTag::RB), ("earlier", PosTag::RBR), ("later", PosTag::RB), ("approximately", PosTag::RB),
    ("around", PosTag::RB), ("almost", PosTag::RB), ("nearly", PosTag::RB), ("further", PosTag::RB),
    ("however", PosTag::RB), ("well", PosTag::RB), ("more", PosTag::JJR), ("less", PosTag::JJR),
    ("most", PosTag::JJS), ("ago", PosTag::RB), ("so", PosTag::RB), ("too", PosTag::RB),
    ("new", PosTag::JJ), ("first", PosTag::JJ), ("last", PosTag::JJ), ("next", PosTag::JJ),
    ("other", PosTag::JJ), ("such", PosTag::JJ), ("same", PosTag::JJ), ("previous", PosTag::JJ),
    ("corresponding", PosTag::JJ), ("total", PosTag::JJ), ("higher", PosTag::JJR),
    ("lower", PosTag::JJR), ("strong", PosTag::JJ), ("good", PosTag::JJ), ("short-term", PosTag::JJ),
    ("private", PosTag::JJ), ("likely", PosTag::JJ), ("net", PosTag::JJ), ("second", PosTag::JJ),
    ("third", PosTag::JJ), ("fourth", PosTag::JJ), ("full", PosTag::JJ), ("single", PosTag::JJ),
    ("operating", PosTag::NN), ("percent", PosTag::NN), ("year", PosTag::NN), ("quarter", PosTag::NN),
    ("%", PosTag::NN), ("one", PosTag::CD), ("two", PosTag::CD), ("three", PosTag::CD),
    ("four", PosTag::CD), ("five", PosTag::CD), ("six", PosTag::CD), ("seven", PosTag::CD),
    ("eight", PosTag::CD), ("nine", PosTag::CD), ("ten", PosTag::CD), ("hundred", PosTag::CD),
    ("thousand", PosTag::CD), ("million", PosTag::CD), ("billion", PosTag::CD),
    ("'s", PosTag::Possessive), ("\u{2019}s", PosTag::Possessive),
];

/// Closed-vocabulary plus suffix-heuristic tagger. Good enough to drive the
/// chunk grammars on newswire sentences; pre-tagged corpora are preferred
/// for evaluation.
#[derive(Debug, Clone)]
pub struct RuleTagger {
    vocab: HashMap<String, PosTag>,
}

impl Default for RuleTagger {
    fn default() -> Self {
        RuleTagger {
            vocab: CLOSED_CLASS
                .iter()
                .map(|&(w, t)| (w.to_string(), t))
                .collect(),
        }
    }
}

fn is_numeral(word: &str) -> bool {
    let mut chars = word.chars();
    match chars.next() {
        Some(c) if c.is_ascii_digit() => true,
        Some('-') | Some('+') | Some('.') => chars.next().is_some_and(|c| c.is_ascii_digit()),
        _ => false,
    }
}

fn punctuation_tag(word: &str) -> Option<PosTag> {
    Some(match word {
        "." | "!" | "?" => PosTag::Period,
        "," => PosTag::Comma,
        ":" | ";" | "-" | "--" | "\u{2013}" | "\u{2014}" | "..." => PosTag::Colon,
        "(" | "[" => PosTag::LeftParen,
        ")" | "]" => PosTag::RightParen,
        "\"" | "``" | "\u{201c}" | "`" | "\u{2018}" => PosTag::OpenQuote,
        "''" | "\u{201d}" | "'" | "\u{2019}" => PosTag::CloseQuote,
        "$" | "\u{20ac}" | "\u{a3}" => PosTag::Dollar,
        "#" => PosTag::Hash,
        _ => return None,
    })
}

fn suffix_tag(lower: &str) -> PosTag {
    if lower.ends_with("ly") && lower.len() > 4 {
        PosTag::RB
    } else if lower.ends_with("ing") && lower.len() > 5 {
        PosTag::VBG
    } else if lower.ends_with("ed") && lower.len() > 4 {
        PosTag::VBD
    } else if lower.ends_with("est") && lower.len() > 5 {
        PosTag::JJS
    } else if (["ous", "ful", "ive", "able", "ible", "ical", "ary", "less", "ic"]
        .iter()
        .any(|s| lower.ends_with(s))
        && lower.len() > 4)
        || (lower.contains('-') && lower.chars().any(char::is_alphabetic))
    {
        PosTag::JJ
    } else if lower.ends_with('s')
        && !lower.ends_with("ss")
        && !lower.ends_with("us")
        && !lower.ends_with("is")
        && lower.len() > 3
    {
        PosTag::NNS
    } else {
        PosTag::NN
    }
}

impl RuleTagger {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds lexicon knowledge: indicator phrases become nouns and
    /// directionality words default to nouns (base form) or past tense
    /// verbs (`-ed`), with context fixing base forms after `to`/modals.
    pub fn with_lexicon(mut self, lex: &Lexicon) -> Self {
        for (phrase, cat) in lex.entries() {
            if cat.is_indicator() {
                for w in phrase.split(' ') {
                    if self.vocab.contains_key(w) {
                        continue;
                    }
                    let tag = if w.ends_with('s') && !w.ends_with("ss") && w.len() > 3 {
                        PosTag::NNS
                    } else {
                        PosTag::NN
                    };
                    self.vocab.insert(w.to_string(), tag);
                }
            } else if cat.is_direction() && !phrase.contains(' ') && !self.vocab.contains_key(phrase) {
                let tag = if phrase.ends_with("ed") {
                    PosTag::VBD
                } else if phrase.ends_with("ing") {
                    PosTag::VBG
                } else if phrase.ends_with('s') && !phrase.ends_with("ss") {
                    PosTag::VBZ
                } else {
                    PosTag::NN
                };
                self.vocab.insert(phrase.to_string(), tag);
            }
        }
        // keep the lexicon's directionality nouns/verbs from shadowing these
        for (w, t) in [("up", PosTag::RB), ("down", PosTag::RB), ("lower", PosTag::JJR), ("higher", PosTag::JJR)] {
            self.vocab.insert(w.into(), t);
        }
        self
    }

    fn tag_word(&self, word: &str, position: usize) -> PosTag {
        if let Some(t) = punctuation_tag(word) {
            return t;
        }
        if is_numeral(word) {
            return PosTag::CD;
        }
        let lower = word.to_lowercase();
        if let Some(&t) = self.vocab.get(&lower) {
            let capitalized = word.chars().next().is_some_and(char::is_uppercase);
            // mid-sentence capitalized words are names unless closed-class
            if capitalized && position > 0 && t.is_noun() {
                return PosTag::NNP;
            }
            return t;
        }
        let capitalized = word.chars().next().is_some_and(char::is_uppercase);
        if capitalized {
            if position == 0 {
                let guess = suffix_tag(&lower);
                return if guess == PosTag::NN { PosTag::NNP } else { guess };
            }
            return PosTag::NNP;
        }
        suffix_tag(&lower)
    }
}

impl PosTagger for RuleTagger {
    fn tag(&self, tokens: &[String]) -> Result<Vec<PosTag>> {
        let mut tags: Vec<PosTag> = tokens
            .iter()
            .enumerate()
            .map(|(i, w)| self.tag_word(w, i))
            .collect();
        for i in 1..tags.len() {
            let prev = tags[i - 1];
            let lower = tokens[i].to_lowercase();
            match tags[i] {
                // "to increase", "will fall"
                PosTag::NN | PosTag::VBP if matches!(prev, PosTag::TO | PosTag::MD) => {
                    if !tokens[i].chars().next().is_some_and(char::is_uppercase) {
                        tags[i] = PosTag::VB;
                    }
                }
                // "has increased", "was disclosed"
                PosTag::VBD
                    if matches!(
                        tokens[i - 1].to_lowercase().as_str(),
                        "has" | "have" | "had" | "was" | "were" | "is" | "are" | "be" | "been" | "being"
                    ) || (prev == PosTag::RB
                        && i >= 2
                        && matches!(
                            tokens[i - 2].to_lowercase().as_str(),
                            "has" | "have" | "had" | "was" | "were" | "is" | "are" | "be" | "been"
                        )) =>
                {
                    tags[i] = PosTag::VBN;
                }
                PosTag::VBD if lower == "compared" => tags[i] = PosTag::VBN,
                _ => {}
            }
        }
        Ok(tags)
    }
}
