use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::arm::{ClassLabel, Transaction};
use crate::error::{Error, Result};
use crate::pos::{ingest_pretagged, tag_raw, PosSentence, PosTagger};
use crate::semtag::SentenceTagger;

/// Text encoding of a corpus file.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Encoding {
    /// UTF-8; invalid sequences become U+FFFD.
    #[default]
    Utf8,
    /// ISO-8859-1, one byte per character.
    Latin1,
}

impl FromStr for Encoding {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('_', "-").as_str() {
            "utf-8" | "utf8" => Ok(Encoding::Utf8),
            "latin-1" | "latin1" | "iso-8859-1" | "iso8859-1" => Ok(Encoding::Latin1),
            other => Err(Error::UnsupportedEncoding(other.to_string())),
        }
    }
}

impl fmt::Display for Encoding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Encoding::Utf8 => "utf-8",
            Encoding::Latin1 => "latin-1",
        })
    }
}

impl Encoding {
    pub fn decode(self, bytes: &[u8]) -> String {
        match self {
            Encoding::Utf8 => String::from_utf8_lossy(bytes).into_owned(),
            Encoding::Latin1 => bytes.iter().map(|&b| b as char).collect(),
        }
    }
}

/// How the sentence part of each `sentence@label` line is written.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SentenceFormat {
    /// Plain text, POS-tagged at load time.
    #[default]
    Raw,
    /// Whitespace-separated `surface_TAG` tokens.
    Pretagged,
}

impl FromStr for SentenceFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "raw" | "text" => Ok(SentenceFormat::Raw),
            "pretagged" | "tagged" | "pos" => Ok(SentenceFormat::Pretagged),
            other => Err(format!("unknown sentence format {other:?} (expected raw or pretagged)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Example {
    pub text: String,
    pub label: ClassLabel,
    /// Present for pre-tagged corpora.
    pub pos: Option<PosSentence>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Corpus {
    pub name: String,
    pub examples: Vec<Example>,
}

/// Count and share (fraction of the corpus) of one class.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClassShare {
    pub label: ClassLabel,
    pub count: usize,
    pub share: f64,
}

impl Corpus {
    /// Parses `sentence@label` lines. The label follows the last `@`; blank
    /// lines are skipped.
    pub fn parse(name: impl Into<String>, text: &str, format: SentenceFormat) -> Result<Corpus> {
        let mut examples = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.trim_end_matches(['\r', '\n']).trim_start_matches('\u{feff}');
            if line.trim().is_empty() {
                continue;
            }
            let err = |message: String| Error::CorpusParse { line: line_no, message };
            let (sentence, label) = line
                .rsplit_once('@')
                .ok_or_else(|| err("missing '@' between sentence and label".into()))?;
            let label = match label.trim().parse::<ClassLabel>() {
                Ok(l) if l != ClassLabel::Polarized => l,
                _ => return Err(err(format!("unknown label {:?}", label.trim()))),
            };
            let sentence = sentence.trim();
            if sentence.is_empty() {
                return Err(err("empty sentence".into()));
            }
            let pos = match format {
                SentenceFormat::Raw => None,
                SentenceFormat::Pretagged => Some(ingest_pretagged(sentence).map_err(|e| err(e.to_string()))?),
            };
            let text = match &pos {
                Some(p) => p.surfaces().collect::<Vec<_>>().join(" "),
                None => sentence.to_string(),
            };
            examples.push(Example { text, label, pos });
        }
        Ok(Corpus {
            name: name.into(),
            examples,
        })
    }

    pub fn len(&self) -> usize {
        self.examples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.examples.is_empty()
    }

    pub fn labels(&self) -> Vec<ClassLabel> {
        self.examples.iter().map(|e| e.label).collect()
    }

    pub fn distribution(&self) -> Vec<ClassShare> {
        let n = self.examples.len();
        ClassLabel::POLARITIES
            .into_iter()
            .map(|label| {
                let count = self.examples.iter().filter(|e| e.label == label).count();
                ClassShare {
                    label,
                    count,
                    share: if n == 0 { 0.0 } else { count as f64 / n as f64 },
                }
            })
            .collect()
    }

    /// Tags every example, POS-tagging raw sentences with `pos_tagger`.
    pub fn to_transactions(&self, tagger: &SentenceTagger, pos_tagger: &dyn PosTagger) -> Result<Vec<Transaction>> {
        self.examples
            .iter()
            .map(|e| {
                let sentence = match &e.pos {
                    Some(p) => p.clone(),
                    None => tag_raw(&e.text, pos_tagger)?,
                };
                Ok(Transaction::new(tagger.tag(&sentence).tags, e.label))
            })
            .collect()
    }
}

/// Loads a Financial PhraseBank style file.
pub fn load_phrasebank(path: impl AsRef<Path>, encoding: Encoding) -> Result<Corpus> {
    load_corpus(path, encoding, SentenceFormat::Raw)
}

pub fn load_corpus(path: impl AsRef<Path>, encoding: Encoding, format: SentenceFormat) -> Result<Corpus> {
    let path = path.as_ref();
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    Corpus::parse(name, &encoding.decode(&bytes), format)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_label_after_last_at() {
        let c = Corpus::parse(
            "t",
            "Shares rose 5 % @ the open@positive\n\nSales were flat .@neutral\r\n",
            SentenceFormat::Raw,
        )
        .unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c.examples[0].text, "Shares rose 5 % @ the open");
        assert_eq!(c.examples[0].label, ClassLabel::Positive);
        assert_eq!(c.examples[1].label, ClassLabel::Neutral);
    }

    #[test]
    fn rejects_bad_lines_with_line_numbers() {
        let e = Corpus::parse("t", "ok@neutral\nHello world@maybe\n", SentenceFormat::Raw).unwrap_err();
        assert!(matches!(e, Error::CorpusParse { line: 2, .. }), "{e}");
        let e = Corpus::parse("t", "no delimiter here\n", SentenceFormat::Raw).unwrap_err();
        assert!(matches!(e, Error::CorpusParse { line: 1, .. }));
        let e = Corpus::parse("t", "x@polarized\n", SentenceFormat::Raw).unwrap_err();
        assert!(matches!(e, Error::CorpusParse { line: 1, .. }));
        let e = Corpus::parse("t", "  @neutral\n", SentenceFormat::Raw).unwrap_err();
        assert!(matches!(e, Error::CorpusParse { line: 1, .. }));
    }

    #[test]
    fn pretagged_sentences() {
        let c = Corpus::parse("t", "Sales_NNS rose_VBD ._.@positive\n", SentenceFormat::Pretagged).unwrap();
        assert_eq!(c.examples[0].text, "Sales rose .");
        assert_eq!(c.examples[0].pos.as_ref().unwrap().len(), 3);
        assert!(Corpus::parse("t", "Sales rose@positive\n", SentenceFormat::Pretagged).is_err());
    }

    #[test]
    fn encodings() {
        assert_eq!(Encoding::Latin1.decode(&[0x4d, 0xe4]), "Mä");
        assert_eq!(Encoding::Utf8.decode(&[0x4d, 0xe4]), "M\u{fffd}");
        assert_eq!("ISO-8859-1".parse::<Encoding>().unwrap(), Encoding::Latin1);
        assert!("cp1252".parse::<Encoding>().is_err());
    }

    #[test]
    fn distribution_shares() {
        let c = Corpus::parse("t", "a@positive\nb@neutral\nc@neutral\nd@negative\n", SentenceFormat::Raw).unwrap();
        let d = c.distribution();
        assert_eq!(d[1].count, 2);
        assert!((d[1].share - 0.5).abs() < 1e-12);
    }
}
