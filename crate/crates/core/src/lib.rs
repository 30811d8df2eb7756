//! Financial sentence sentiment from performance indicators.
//!
//! Sentences are POS-tagged, chunked with a cascaded tag grammar and mapped
//! to a small vocabulary of semantic tags (lagging/leading indicators,
//! directionality, sentiment words and their interactions such as
//! `LagInd::UP`). Class association rules mined from tagged sentences then
//! predict polarity, either directly or through a two-stage hierarchy.
//!
//! ```
//! use finsent::{Lexicon, RuleTagger, SentenceTagger, tag_raw};
//!
//! let lexicon = Lexicon::bundled();
//! let pos = RuleTagger::new().with_lexicon(&lexicon);
//! let tagger = SentenceTagger::new(lexicon, false);
//! let sentence = tag_raw("Olvi expects market share to increase in the first quarter of 2010", &pos).unwrap();
//! assert_eq!(tagger.tag(&sentence).tags.to_string(), "LagInd::UP");
//! ```

pub mod arm;
pub mod chunk;
pub mod classify;
pub mod error;
pub mod eval;
pub mod lexicon;
pub mod pos;
pub mod scalar;
pub mod semtag;

pub use arm::{ClassLabel, Item, ItemSet, Transaction};
pub use chunk::{chunk, extract_pairs, ChunkGrammar, ChunkTree};
pub use classify::{Arrangement, MatchPolicy, PredictOptions, Scoring};
pub use error::{Error, Result};
pub use eval::{Corpus, Encoding, FoldPlan};
pub use lexicon::{LexCategory, Lexicon};
pub use pos::{ingest_pretagged, tag_raw, PosSentence, PosTag, PosTagger, RuleTagger};
pub use scalar::Scalar;
pub use semtag::{filter_mode, tag_sentence, Mode, SemTag, SentenceTagger, TagSet, TaggedSentence};

pub type Rule = arm::Rule<f64>;
pub type RuleBase = arm::RuleBase<f64>;
pub type FrequentItemset = arm::FrequentItemset<f64>;
pub type ClassifierModel = classify::ClassifierModel<f64>;
pub type ModelConfig = classify::ModelConfig<f64>;
pub type EvalReport = eval::EvalReport<f64>;
pub type SweepPoint = eval::SweepPoint<f64>;

pub type Rule32 = arm::Rule<f32>;
pub type RuleBase32 = arm::RuleBase<f32>;
pub type ClassifierModel32 = classify::ClassifierModel<f32>;
pub type ModelConfig32 = classify::ModelConfig<f32>;
pub type EvalReport32 = eval::EvalReport<f32>;
