use serde::Serialize;

use super::folds::FoldPlan;
use super::metrics::{ConfusionMatrix, EvalReport, FoldMetrics};
use crate::arm::{ClassLabel, Transaction};
use crate::classify::{train, ClassifierModel, ModelConfig};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Anything that can be fitted on training transactions and asked for
/// predictions. `predict` receives the whole held-out transaction; real
/// learners look only at its tags, test stubs may look at the label.
pub trait Learner {
    type Model;

    fn fit(&self, train: &[Transaction]) -> Result<Self::Model>;

    fn predict(&self, model: &Self::Model, example: &Transaction) -> ClassLabel;
}

/// The associative classifier under a fixed configuration.
#[derive(Debug, Clone)]
pub struct RuleLearner<T> {
    pub config: ModelConfig<T>,
}

impl<T: Scalar> Learner for RuleLearner<T> {
    type Model = ClassifierModel<T>;

    fn fit(&self, train_set: &[Transaction]) -> Result<Self::Model> {
        train(train_set, self.config.clone())
    }

    fn predict(&self, model: &Self::Model, example: &Transaction) -> ClassLabel {
        model.predict(example.items)
    }
}

/// Always predicts the most frequent training class (ties toward neutral).
#[derive(Debug, Clone, Copy, Default)]
pub struct MajorityLearner;

impl Learner for MajorityLearner {
    type Model = ClassLabel;

    fn fit(&self, train_set: &[Transaction]) -> Result<ClassLabel> {
        let mut order = ClassLabel::POLARITIES;
        order.sort_by_key(|c| c.tie_rank());
        let count = |c: ClassLabel| train_set.iter().filter(|t| t.label == c).count();
        let mut best = order[0];
        for c in order {
            if count(c) > count(best) {
                best = c;
            }
        }
        Ok(best)
    }

    fn predict(&self, model: &ClassLabel, _: &Transaction) -> ClassLabel {
        *model
    }
}

/// Echoes the gold label; an upper bound for sanity checks.
#[derive(Debug, Clone, Copy, Default)]
pub struct OracleLearner;

impl Learner for OracleLearner {
    type Model = ();

    fn fit(&self, _: &[Transaction]) -> Result<()> {
        Ok(())
    }

    fn predict(&self, _: &(), example: &Transaction) -> ClassLabel {
        example.label
    }
}

/// Held-out prediction for every example, produced by the model that did
/// not see it.
pub fn cv_predictions<L: Learner>(data: &[Transaction], plan: &FoldPlan, learner: &L) -> Result<Vec<ClassLabel>> {
    if data.len() != plan.assignment.len() {
        return Err(Error::LengthMismatch {
            gold: data.len(),
            predicted: plan.assignment.len(),
        });
    }
    let mut predictions = vec![ClassLabel::Neutral; data.len()];
    for fold in 0..plan.k {
        let train_set: Vec<Transaction> = plan.train_indices(fold).into_iter().map(|i| data[i]).collect();
        let model = learner.fit(&train_set)?;
        for i in plan.test_indices(fold) {
            predictions[i] = learner.predict(&model, &data[i]);
        }
    }
    Ok(predictions)
}

/// k-fold cross-validation; the confusion matrix pools every fold.
pub fn cross_validate<T: Scalar, L: Learner>(data: &[Transaction], plan: &FoldPlan, learner: &L) -> Result<EvalReport<T>> {
    let predictions = cv_predictions(data, plan, learner)?;
    let mut pooled = ConfusionMatrix::new();
    let mut folds = Vec::new();
    for fold in 0..plan.k {
        let mut m = ConfusionMatrix::new();
        let test = plan.test_indices(fold);
        for &i in &test {
            m.add(data[i].label, predictions[i])?;
        }
        pooled.merge(&m);
        folds.push(FoldMetrics {
            fold,
            size: test.len(),
            accuracy: m.accuracy(),
        });
    }
    let mut report = EvalReport::from_confusion(pooled, folds);
    report.seed = Some(plan.seed);
    Ok(report)
}

/// Outcome of one minimum-confidence setting.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepPoint<T> {
    pub minconf: T,
    /// Rules in the model trained on all the data.
    pub rule_count: usize,
    pub report: EvalReport<T>,
}

/// Cross-validates the rule learner once per `minconf` in `grid`.
pub fn sweep_confidence<T: Scalar>(
    data: &[Transaction],
    plan: &FoldPlan,
    config: &ModelConfig<T>,
    grid: &[T],
) -> Result<Vec<SweepPoint<T>>> {
    grid.iter()
        .map(|&minconf| {
            let learner = RuleLearner {
                config: ModelConfig {
                    minconf,
                    ..config.clone()
                },
            };
            let report = cross_validate(data, plan, &learner)?;
            let rule_count = learner.fit(data)?.rule_count();
            Ok(SweepPoint {
                minconf,
                rule_count,
                report,
            })
        })
        .collect()
}

/// `minconf,class,precision,recall` rows, three classes per grid point.
pub fn sweep_csv<T: Scalar>(points: &[SweepPoint<T>]) -> String {
    let mut out = String::from("minconf,class,precision,recall\n");
    for p in points {
        for c in &p.report.classes {
            out.push_str(&format!("{},{},{},{}\n", p.minconf, c.label, c.precision, c.recall));
        }
    }
    out
}
