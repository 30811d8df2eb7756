use std::cmp::Ordering;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::ClassLabel;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::semtag::{Mode, SemTag, TagSet};

/// Class association rule `antecedent -> consequent`. Support and confidence
/// are percentages.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rule<T> {
    pub antecedent: TagSet,
    pub consequent: ClassLabel,
    pub support: T,
    pub confidence: T,
}

impl<T: Scalar> Rule<T> {
    pub fn new(antecedent: TagSet, consequent: ClassLabel, support: T, confidence: T) -> Self {
        Rule {
            antecedent,
            consequent,
            support,
            confidence,
        }
    }

    /// Precedence order: higher confidence first, then higher support, then
    /// longer antecedent, then antecedent and consequent in canonical order.
    pub fn precedence(&self, other: &Self) -> Ordering {
        let by_float = |a: T, b: T| b.partial_cmp(&a).unwrap_or(Ordering::Equal);
        by_float(self.confidence, other.confidence)
            .then_with(|| by_float(self.support, other.support))
            .then_with(|| other.antecedent.len().cmp(&self.antecedent.len()))
            .then_with(|| {
                let a: Vec<usize> = self.antecedent.iter().map(SemTag::index).collect();
                let b: Vec<usize> = other.antecedent.iter().map(SemTag::index).collect();
                a.cmp(&b)
            })
            .then_with(|| self.consequent.cmp(&other.consequent))
    }

    /// Confidences are rescaled; used to check scale invariance of scoring.
    pub fn scaled(self, k: T) -> Self {
        Rule {
            confidence: self.confidence * k,
            ..self
        }
    }
}

/// `LagInd, POS -> neutral (33.33%, 100%)`
impl<T: Scalar> fmt::Display for Rule<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} -> {} ({:.2}%, {:.2}%)",
            self.antecedent,
            self.consequent,
            self.support.to_f64().unwrap_or(f64::NAN),
            self.confidence.to_f64().unwrap_or(f64::NAN)
        )
    }
}

/// Rules in precedence order, with the thresholds used to mine them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RuleBase<T> {
    pub rules: Vec<Rule<T>>,
    pub minsup: T,
    pub minconf: T,
    pub mode: Option<Mode>,
    pub stage: Option<String>,
}

const HEADER: &str = "# finsent rulebase";

impl<T: Scalar> RuleBase<T> {
    /// Builds a rule base, sorting the rules into precedence order.
    pub fn new(mut rules: Vec<Rule<T>>, minsup: T, minconf: T) -> Self {
        rules.sort_by(Rule::precedence);
        RuleBase {
            rules,
            minsup,
            minconf,
            mode: None,
            stage: None,
        }
    }

    pub fn empty(minsup: T, minconf: T) -> Self {
        Self::new(Vec::new(), minsup, minconf)
    }

    pub fn with_mode(mut self, mode: Mode) -> Self {
        self.mode = Some(mode);
        self
    }

    pub fn with_stage(mut self, stage: impl Into<String>) -> Self {
        self.stage = Some(stage.into());
        self
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Rule<T>> {
        self.rules.iter()
    }

    pub fn is_ordered(&self) -> bool {
        self.rules
            .windows(2)
            .all(|w| w[0].precedence(&w[1]) == Ordering::Less)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(HEADER);
        out.push('\n');
        out.push_str(&format!("# minsup={}\n# minconf={}\n", self.minsup, self.minconf));
        if let Some(mode) = self.mode {
            out.push_str(&format!("# mode={mode}\n"));
        }
        if let Some(stage) = &self.stage {
            out.push_str(&format!("# stage={stage}\n"));
        }
        for r in &self.rules {
            let ante: Vec<&str> = r.antecedent.iter().map(SemTag::as_str).collect();
            out.push_str(&format!(
                "{} -> {}\t{}\t{}\n",
                ante.join(","),
                r.consequent,
                r.support,
                r.confidence
            ));
        }
        out
    }

    /// Parses the text form. Rules keep the order they appear in.
    pub fn parse(text: &str) -> Result<Self> {
        let mut rb = RuleBase {
            rules: Vec::new(),
            minsup: T::zero(),
            minconf: T::zero(),
            mode: None,
            stage: None,
        };
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let err = |message: String| Error::RuleParse { line: line_no, message };
            let line = raw.trim_end_matches('\r');
            if line.trim().is_empty() {
                continue;
            }
            if let Some(comment) = line.strip_prefix('#') {
                if let Some((key, value)) = comment.trim().split_once('=') {
                    let value = value.trim();
                    match key.trim() {
                        "minsup" => rb.minsup = parse_number(value).map_err(err)?,
                        "minconf" => rb.minconf = parse_number(value).map_err(err)?,
                        "mode" => rb.mode = Some(value.parse().map_err(err)?),
                        "stage" => rb.stage = Some(value.to_string()),
                        _ => {}
                    }
                }
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            let [body, support, confidence] = fields[..] else {
                return Err(err(format!("expected 3 tab-separated fields, found {}", fields.len())));
            };
            let (ante, cons) = body
                .split_once("->")
                .ok_or_else(|| err("missing '->'".to_string()))?;
            let antecedent = TagSet::parse(ante).map_err(|e| err(e.to_string()))?;
            if antecedent.is_empty() {
                return Err(err("empty antecedent".to_string()));
            }
            let consequent: ClassLabel = cons.parse().map_err(|e: Error| err(e.to_string()))?;
            rb.rules.push(Rule {
                antecedent,
                consequent,
                support: parse_number(support).map_err(err)?,
                confidence: parse_number(confidence).map_err(err)?,
            });
        }
        Ok(rb)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_text()).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }
}

fn parse_number<T: Scalar>(s: &str) -> std::result::Result<T, String> {
    s.trim()
        .parse::<T>()
        .map_err(|_| format!("invalid number {:?}", s.trim()))
}

impl<'a, T> IntoIterator for &'a RuleBase<T> {
    type Item = &'a Rule<T>;
    type IntoIter = std::slice::Iter<'a, Rule<T>>;

    fn into_iter(self) -> Self::IntoIter {
        self.rules.iter()
    }
}
