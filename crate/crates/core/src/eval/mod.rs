//! Corpus loading, stratified cross-validation and metrics.

mod corpus;
mod cv;
mod folds;
mod metrics;

pub use corpus::{load_corpus, load_phrasebank, ClassShare, Corpus, Encoding, Example, SentenceFormat};
pub use cv::{
    cross_validate, cv_predictions, sweep_confidence, sweep_csv, Learner, MajorityLearner, OracleLearner, RuleLearner,
    SweepPoint,
};
pub use folds::{make_folds, FoldPlan};
pub use metrics::{f_measure, ClassMetrics, ConfusionMatrix, EvalReport, FoldMetrics};
