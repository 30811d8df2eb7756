//! Rule-based polarity prediction and the three classifier arrangements.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::arm::{mine_rules, ClassLabel, RuleBase, Transaction};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::semtag::{Mode, TagSet};

/// How a rule antecedent is matched against a sentence's tags.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MatchPolicy {
    /// The antecedent equals the whole tag set, or is a single tag of it.
    #[default]
    Exact,
    /// The antecedent is any subset of the tag set.
    Subset,
}

/// How accumulated confidences are turned into a class score.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scoring {
    /// Mean confidence of the matched rules per class.
    #[default]
    Average,
    /// Total confidence of the matched rules per class.
    Sum,
}

macro_rules! cli_enum {
    ($ty:ident { $($variant:ident => $name:literal),* $(,)? }) => {
        impl $ty {
            pub fn as_str(self) -> &'static str {
                match self { $($ty::$variant => $name),* }
            }
        }

        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }

        impl FromStr for $ty {
            type Err = String;

            fn from_str(s: &str) -> std::result::Result<Self, String> {
                match s.trim().to_ascii_lowercase().as_str() {
                    $($name => Ok($ty::$variant),)*
                    other => Err(format!(
                        "unknown {} {other:?} (expected one of: {})",
                        stringify!($ty),
                        [$($name),*].join(", ")
                    )),
                }
            }
        }
    };
}

cli_enum!(MatchPolicy { Exact => "exact", Subset => "subset" });
cli_enum!(Scoring { Average => "average", Sum => "sum" });
cli_enum!(Arrangement { Hsc => "hsc", MultiClass => "multiclass", OneVsOne => "ovo" });

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct PredictOptions {
    pub match_policy: MatchPolicy,
    pub scoring: Scoring,
}

/// Accumulated confidence and match count per class.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassScore<T> {
    pub sums: [T; 4],
    pub counts: [usize; 4],
}

impl<T: Scalar> Default for ClassScore<T> {
    fn default() -> Self {
        ClassScore {
            sums: [T::zero(); 4],
            counts: [0; 4],
        }
    }
}

impl<T: Scalar> ClassScore<T> {
    fn add(&mut self, class: ClassLabel, confidence: T) {
        self.sums[class.index()] = self.sums[class.index()] + confidence;
        self.counts[class.index()] += 1;
    }

    pub fn sum(&self, class: ClassLabel) -> T {
        self.sums[class.index()]
    }

    pub fn count(&self, class: ClassLabel) -> usize {
        self.counts[class.index()]
    }

    pub fn is_empty(&self) -> bool {
        self.counts.iter().all(|&c| c == 0)
    }

    pub fn value(&self, class: ClassLabel, scoring: Scoring) -> Option<T> {
        let n = self.count(class);
        (n > 0).then(|| match scoring {
            Scoring::Average => self.sum(class) / T::from_count(n),
            Scoring::Sum => self.sum(class),
        })
    }

    /// Highest-scoring class; ties go to neutral, then negative, positive,
    /// polarized. Scores within a few ulps of each other count as tied, so
    /// that rounding noise (e.g. after rescaling confidences) cannot decide.
    /// `None` when nothing matched.
    pub fn best(&self, scoring: Scoring) -> Option<ClassLabel> {
        let tol = T::epsilon() * T::from_f64_lossy(64.0);
        let mut best: Option<(ClassLabel, T)> = None;
        let mut order = ClassLabel::ALL;
        order.sort_by_key(|c| c.tie_rank());
        for class in order {
            if let Some(v) = self.value(class, scoring) {
                if best.is_none_or(|(_, b)| v - b > tol * v.abs().max(b.abs())) {
                    best = Some((class, v));
                }
            }
        }
        best.map(|(c, _)| c)
    }
}

/// Runs the matching loop over every rule and accumulates confidences.
///
/// With [`MatchPolicy::Exact`], a rule whose antecedent equals the whole tag
/// set scores once; otherwise it scores once for each tag equal to its
/// (single-item) antecedent.
pub fn score<T: Scalar>(tags: TagSet, rb: &RuleBase<T>, policy: MatchPolicy) -> ClassScore<T> {
    let mut score = ClassScore::default();
    if tags.is_empty() {
        return score;
    }
    for rule in rb {
        match policy {
            MatchPolicy::Exact => {
                if rule.antecedent == tags {
                    score.add(rule.consequent, rule.confidence);
                } else {
                    for t in tags.iter() {
                        if rule.antecedent.len() == 1 && rule.antecedent.contains(t) {
                            score.add(rule.consequent, rule.confidence);
                        }
                    }
                }
            }
            MatchPolicy::Subset => {
                if rule.antecedent.is_subset(tags) {
                    score.add(rule.consequent, rule.confidence);
                }
            }
        }
    }
    score
}

/// Class chosen by `rb` for `tags`, or `None` when no rule matched.
pub fn choose<T: Scalar>(tags: TagSet, rb: &RuleBase<T>, opts: PredictOptions) -> Option<ClassLabel> {
    score(tags, rb, opts.match_policy).best(opts.scoring)
}

/// Single rule base prediction with a fallback class.
pub fn predict_flat<T: Scalar>(tags: TagSet, rb: &RuleBase<T>, opts: PredictOptions, default: ClassLabel) -> ClassLabel {
    choose(tags, rb, opts).unwrap_or(default)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum Arrangement {
    /// Neutral vs polarized, then positive vs negative.
    #[default]
    #[serde(rename = "hsc")]
    Hsc,
    /// One rule base over all three classes.
    #[serde(rename = "multiclass")]
    MultiClass,
    /// Three pairwise rule bases combined by majority vote.
    #[serde(rename = "ovo")]
    OneVsOne,
}

/// Everything needed to train and apply a model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelConfig<T> {
    pub arrangement: Arrangement,
    pub minsup: T,
    pub minconf: T,
    pub mode: Mode,
    pub reversal: bool,
    pub predict: PredictOptions,
    /// Second-stage answer when no positive/negative rule matches.
    pub stage2_default: ClassLabel,
}

impl<T: Scalar> Default for ModelConfig<T> {
    fn default() -> Self {
        ModelConfig {
            arrangement: Arrangement::Hsc,
            minsup: T::from_f64_lossy(0.5),
            minconf: T::from_f64_lossy(60.0),
            mode: Mode::All,
            reversal: false,
            predict: PredictOptions::default(),
            stage2_default: ClassLabel::Negative,
        }
    }
}

/// A named rule base together with the classes it discriminates.
#[derive(Debug, Clone, PartialEq)]
pub struct Stage<T> {
    pub name: String,
    pub classes: Vec<ClassLabel>,
    pub rules: RuleBase<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassifierModel<T> {
    pub config: ModelConfig<T>,
    pub stages: Vec<Stage<T>>,
    /// Problems noticed while training, such as a class with no examples.
    pub warnings: Vec<String>,
}

const OVO_PAIRS: [(ClassLabel, ClassLabel); 3] = [
    (ClassLabel::Positive, ClassLabel::Neutral),
    (ClassLabel::Positive, ClassLabel::Negative),
    (ClassLabel::Neutral, ClassLabel::Negative),
];

fn mine_stage<T: Scalar>(
    name: &str,
    classes: Vec<ClassLabel>,
    transactions: &[Transaction],
    config: &ModelConfig<T>,
) -> Result<Stage<T>> {
    let rules = if transactions.is_empty() {
        RuleBase::empty(config.minsup, config.minconf)
    } else {
        mine_rules(transactions, config.minsup, config.minconf)?
    };
    Ok(Stage {
        name: name.to_string(),
        classes,
        rules: rules.with_mode(config.mode).with_stage(name),
    })
}

/// Mines the rule bases required by `config.arrangement`. Tags are first
/// restricted to `config.mode`.
pub fn train<T: Scalar>(transactions: &[Transaction], config: ModelConfig<T>) -> Result<ClassifierModel<T>> {
    if transactions.is_empty() {
        return Err(Error::NoTransactions);
    }
    let tx: Vec<Transaction> = transactions
        .iter()
        .map(|t| Transaction::new(config.mode.filter(t.items), t.label))
        .collect();

    let mut warnings = Vec::new();
    for class in ClassLabel::POLARITIES {
        if !tx.iter().any(|t| t.label == class) {
            warnings.push(format!("no {class} examples in training data; {class} cannot be predicted"));
        }
    }
    if let Some(t) = tx.iter().find(|t| !ClassLabel::POLARITIES.contains(&t.label)) {
        return Err(Error::UnknownLabel(t.label.to_string()));
    }
    for w in &warnings {
        log::warn!("{w}");
    }

    let stages = match config.arrangement {
        Arrangement::Hsc => {
            let stage1: Vec<Transaction> = tx
                .iter()
                .map(|t| {
                    if t.label.is_polar() {
                        t.relabelled(ClassLabel::Polarized)
                    } else {
                        *t
                    }
                })
                .collect();
            let stage2: Vec<Transaction> = tx.iter().filter(|t| t.label.is_polar()).copied().collect();
            vec![
                mine_stage("stage1", vec![ClassLabel::Polarized, ClassLabel::Neutral], &stage1, &config)?,
                mine_stage("stage2", vec![ClassLabel::Positive, ClassLabel::Negative], &stage2, &config)?,
            ]
        }
        Arrangement::MultiClass => vec![mine_stage("multiclass", ClassLabel::POLARITIES.to_vec(), &tx, &config)?],
        Arrangement::OneVsOne => OVO_PAIRS
            .iter()
            .map(|&(a, b)| {
                let subset: Vec<Transaction> = tx.iter().filter(|t| t.label == a || t.label == b).copied().collect();
                mine_stage(&format!("{a}-{b}"), vec![a, b], &subset, &config)
            })
            .collect::<Result<_>>()?,
    };
    Ok(ClassifierModel {
        config,
        stages,
        warnings,
    })
}

#[derive(Debug, Serialize, Deserialize)]
struct Manifest<T> {
    format: String,
    config: ModelConfig<T>,
    stages: Vec<ManifestStage>,
}

#[derive(Debug, Serialize, Deserialize)]
struct ManifestStage {
    name: String,
    classes: Vec<ClassLabel>,
    file: String,
}

const MANIFEST: &str = "manifest.json";
const FORMAT: &str = "finsent-model/1";

impl<T: Scalar> ClassifierModel<T> {
    pub fn predict(&self, tags: TagSet) -> ClassLabel {
        predict(self, tags)
    }

    pub fn stage(&self, name: &str) -> Option<&Stage<T>> {
        self.stages.iter().find(|s| s.name == name)
    }

    pub fn rule_count(&self) -> usize {
        self.stages.iter().map(|s| s.rules.len()).sum()
    }

    /// Writes `manifest.json` plus one rule file per stage into `dir`.
    pub fn save(&self, dir: impl AsRef<Path>) -> Result<()> {
        let dir = dir.as_ref();
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let mut stages = Vec::new();
        for s in &self.stages {
            let file = format!("{}.rules", s.name);
            s.rules.save(dir.join(&file))?;
            stages.push(ManifestStage {
                name: s.name.clone(),
                classes: s.classes.clone(),
                file,
            });
        }
        let manifest = Manifest {
            format: FORMAT.to_string(),
            config: self.config.clone(),
            stages,
        };
        let path = dir.join(MANIFEST);
        let json = serde_json::to_string_pretty(&manifest).map_err(|e| Error::ModelFormat(e.to_string()))?;
        std::fs::write(&path, json + "\n").map_err(|e| Error::io(path, e))
    }

    pub fn load(dir: impl AsRef<Path>) -> Result<Self> {
        let dir = dir.as_ref();
        let path = dir.join(MANIFEST);
        let text = std::fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
        let manifest: Manifest<T> =
            serde_json::from_str(&text).map_err(|e| Error::ModelFormat(format!("{}: {e}", path.display())))?;
        if manifest.format != FORMAT {
            return Err(Error::ModelFormat(format!(
                "unsupported model format {:?} (expected {FORMAT:?})",
                manifest.format
            )));
        }
        let expected: Vec<String> = expected_stage_names(manifest.config.arrangement);
        let found: Vec<String> = manifest.stages.iter().map(|s| s.name.clone()).collect();
        if expected != found {
            return Err(Error::ModelFormat(format!(
                "arrangement {} needs stages {expected:?}, manifest lists {found:?}",
                manifest.config.arrangement
            )));
        }
        let stages = manifest
            .stages
            .into_iter()
            .map(|s| {
                Ok(Stage {
                    rules: RuleBase::load(dir.join(&s.file))?,
                    name: s.name,
                    classes: s.classes,
                })
            })
            .collect::<Result<_>>()?;
        Ok(ClassifierModel {
            config: manifest.config,
            stages,
            warnings: Vec::new(),
        })
    }
}

fn expected_stage_names(arrangement: Arrangement) -> Vec<String> {
    match arrangement {
        Arrangement::Hsc => vec!["stage1".into(), "stage2".into()],
        Arrangement::MultiClass => vec!["multiclass".into()],
        Arrangement::OneVsOne => OVO_PAIRS.iter().map(|(a, b)| format!("{a}-{b}")).collect(),
    }
}

/// Predicts the polarity of one tag set.
///
/// HSC answers neutral unless stage one says polarized, in which case stage
/// two picks positive or negative. One-vs-one takes a majority vote of the
/// pairwise rule bases; a rule base with no matching rule abstains, and when
/// every one abstains the answer is neutral.
pub fn predict<T: Scalar>(model: &ClassifierModel<T>, tags: TagSet) -> ClassLabel {
    let tags = model.config.mode.filter(tags);
    let opts = model.config.predict;
    match model.config.arrangement {
        Arrangement::Hsc => {
            let first = model.stages.first().map(|s| predict_flat(tags, &s.rules, opts, ClassLabel::Neutral));
            if first != Some(ClassLabel::Polarized) {
                return ClassLabel::Neutral;
            }
            match model.stages.get(1) {
                Some(s) => predict_flat(tags, &s.rules, opts, model.config.stage2_default),
                None => model.config.stage2_default,
            }
        }
        Arrangement::MultiClass => model
            .stages
            .first()
            .map_or(ClassLabel::Neutral, |s| predict_flat(tags, &s.rules, opts, ClassLabel::Neutral)),
        Arrangement::OneVsOne => {
            let mut votes = [0usize; 4];
            for s in &model.stages {
                if let Some(c) = choose(tags, &s.rules, opts) {
                    votes[c.index()] += 1;
                }
            }
            let mut order = ClassLabel::POLARITIES;
            order.sort_by_key(|c| c.tie_rank());
            let mut best = ClassLabel::Neutral;
            for c in order {
                if votes[c.index()] > votes[best.index()] {
                    best = c;
                }
            }
            best
        }
    }
}
