use serde::{Deserialize, Serialize};

use crate::arm::ClassLabel;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// 3x3 confusion matrix; rows are gold classes, columns predictions, both in
/// the order positive, neutral, negative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub counts: [[usize; 3]; 3],
}

fn slot(label: ClassLabel) -> Option<usize> {
    ClassLabel::POLARITIES.iter().position(|&c| c == label)
}

impl ConfusionMatrix {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_counts(counts: [[usize; 3]; 3]) -> Self {
        ConfusionMatrix { counts }
    }

    /// Builds the matrix from parallel gold/predicted lists.
    pub fn from_pairs(gold: &[ClassLabel], predicted: &[ClassLabel]) -> Result<Self> {
        if gold.len() != predicted.len() {
            return Err(Error::LengthMismatch {
                gold: gold.len(),
                predicted: predicted.len(),
            });
        }
        let mut m = ConfusionMatrix::new();
        for (&g, &p) in gold.iter().zip(predicted) {
            m.add(g, p)?;
        }
        Ok(m)
    }

    pub fn add(&mut self, gold: ClassLabel, predicted: ClassLabel) -> Result<()> {
        let g = slot(gold).ok_or_else(|| Error::UnknownLabel(gold.to_string()))?;
        let p = slot(predicted).ok_or_else(|| Error::UnknownLabel(predicted.to_string()))?;
        self.counts[g][p] += 1;
        Ok(())
    }

    pub fn merge(&mut self, other: &ConfusionMatrix) {
        for g in 0..3 {
            for p in 0..3 {
                self.counts[g][p] += other.counts[g][p];
            }
        }
    }

    pub fn total(&self) -> usize {
        self.counts.iter().flatten().sum()
    }

    pub fn trace(&self) -> usize {
        (0..3).map(|i| self.counts[i][i]).sum()
    }

    pub fn get(&self, gold: ClassLabel, predicted: ClassLabel) -> usize {
        match (slot(gold), slot(predicted)) {
            (Some(g), Some(p)) => self.counts[g][p],
            _ => 0,
        }
    }

    pub fn gold_count(&self, class: ClassLabel) -> usize {
        slot(class).map_or(0, |i| self.counts[i].iter().sum())
    }

    pub fn predicted_count(&self, class: ClassLabel) -> usize {
        slot(class).map_or(0, |j| (0..3).map(|i| self.counts[i][j]).sum())
    }

    pub fn accuracy<T: Scalar>(&self) -> T {
        T::ratio(self.trace(), self.total())
    }

    /// Precision, recall, F-measure and one-vs-rest accuracy for `class`.
    pub fn class_metrics<T: Scalar>(&self, class: ClassLabel) -> ClassMetrics<T> {
        let tp = self.get(class, class);
        let predicted = self.predicted_count(class);
        let gold = self.gold_count(class);
        let total = self.total();
        let precision = T::ratio(tp, predicted);
        let recall = T::ratio(tp, gold);
        let f_measure = f_measure(precision, recall);
        // true negatives: neither gold nor predicted is `class`
        let tn = total + tp - predicted - gold;
        ClassMetrics {
            label: class,
            precision,
            recall,
            f_measure,
            accuracy: T::ratio(tp + tn, total),
            support: gold,
        }
    }
}

/// Harmonic mean of precision and recall; zero when both are zero.
pub fn f_measure<T: Scalar>(precision: T, recall: T) -> T {
    let s = precision + recall;
    if s > T::zero() {
        (T::one() + T::one()) * precision * recall / s
    } else {
        T::zero()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassMetrics<T> {
    pub label: ClassLabel,
    pub precision: T,
    pub recall: T,
    pub f_measure: T,
    /// One-vs-rest accuracy.
    pub accuracy: T,
    /// Number of gold examples of this class.
    pub support: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FoldMetrics<T> {
    pub fold: usize,
    pub size: usize,
    pub accuracy: T,
}

/// Metrics pooled over all held-out predictions, with a per-fold breakdown.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport<T> {
    pub classes: Vec<ClassMetrics<T>>,
    pub overall_accuracy: T,
    pub confusion: ConfusionMatrix,
    pub folds: Vec<FoldMetrics<T>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Free-form run configuration, embedded for replay.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub config: Option<serde_json::Value>,
}

impl<T: Scalar> EvalReport<T> {
    pub fn from_confusion(confusion: ConfusionMatrix, folds: Vec<FoldMetrics<T>>) -> Self {
        EvalReport {
            classes: ClassLabel::POLARITIES
                .iter()
                .map(|&c| confusion.class_metrics(c))
                .collect(),
            overall_accuracy: confusion.accuracy(),
            confusion,
            folds,
            seed: None,
            config: None,
        }
    }

    pub fn class(&self, label: ClassLabel) -> Option<&ClassMetrics<T>> {
        self.classes.iter().find(|c| c.label == label)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// One row per class plus an `overall` row.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("class,precision,recall,f_measure,accuracy,support\n");
        for c in &self.classes {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                c.label, c.precision, c.recall, c.f_measure, c.accuracy, c.support
            ));
        }
        out.push_str(&format!(
            "overall,,,,{},{}\n",
            self.overall_accuracy,
            self.confusion.total()
        ));
        out
    }

    /// Human-readable table.
    pub fn to_text(&self) -> String {
        let f = |v: T| v.to_f64().unwrap_or(f64::NAN);
        let mut out = format!("{:<10} {:>9} {:>9} {:>9} {:>9} {:>8}\n", "class", "precision", "recall", "F", "accuracy", "support");
        for c in &self.classes {
            out.push_str(&format!(
                "{:<10} {:>9.4} {:>9.4} {:>9.4} {:>9.4} {:>8}\n",
                c.label.as_str(),
                f(c.precision),
                f(c.recall),
                f(c.f_measure),
                f(c.accuracy),
                c.support
            ));
        }
        out.push_str(&format!(
            "overall accuracy {:.4} over {} examples\n",
            f(self.overall_accuracy),
            self.confusion.total()
        ));
        out
    }
}
