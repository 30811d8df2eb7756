mod common;

use std::path::PathBuf;

use finsent::classify::Arrangement;
use finsent::eval::{
    cross_validate, cv_predictions, load_phrasebank, make_folds, sweep_confidence, sweep_csv, ConfusionMatrix, Encoding,
    MajorityLearner, OracleLearner, RuleLearner,
};
use finsent::{ClassLabel, EvalReport, Lexicon, ModelConfig, RuleTagger, SentenceTagger};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn mini_corpus_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data/mini_phrasebank.txt")
}

fn mini_transactions() -> Vec<finsent::Transaction> {
    let corpus = load_phrasebank(mini_corpus_path(), Encoding::Utf8).unwrap();
    let lex = Lexicon::bundled();
    let pos = RuleTagger::new().with_lexicon(&lex);
    corpus.to_transactions(&SentenceTagger::new(lex, false), &pos).unwrap()
}

#[test]
fn hand_computed_confusion_example() {
    let m = ConfusionMatrix::from_counts([[5, 1, 0], [2, 10, 1], [0, 1, 4]]);
    let r = EvalReport::from_confusion(m, vec![]);
    let pos = r.class(ClassLabel::Positive).unwrap();
    assert!((pos.precision - 5.0 / 7.0).abs() < 1e-12);
    assert!((pos.recall - 5.0 / 6.0).abs() < 1e-12);
    let f = 2.0 * (5.0 / 7.0) * (5.0 / 6.0) / (5.0 / 7.0 + 5.0 / 6.0);
    assert!((pos.f_measure - f).abs() < 1e-12);
    // one-vs-rest: 5 TP + 16 TN out of 24
    assert!((pos.accuracy - 21.0 / 24.0).abs() < 1e-12);
    assert!((r.overall_accuracy - 19.0 / 24.0).abs() < 1e-12);
    let neg = r.class(ClassLabel::Negative).unwrap();
    assert!((neg.precision - 4.0 / 5.0).abs() < 1e-12);
    assert!((neg.recall - 4.0 / 5.0).abs() < 1e-12);
}

#[test]
fn oracle_learner_scores_one_everywhere() {
    let tx = mini_transactions();
    let plan = make_folds(&tx.iter().map(|t| t.label).collect::<Vec<_>>(), 10, 1).unwrap();
    let r: EvalReport = cross_validate(&tx, &plan, &OracleLearner).unwrap();
    assert_eq!(r.overall_accuracy, 1.0);
    for c in &r.classes {
        assert_eq!((c.precision, c.recall, c.f_measure, c.accuracy), (1.0, 1.0, 1.0, 1.0));
    }
}

#[test]
fn majority_learner_scores_the_majority_share() {
    let tx = mini_transactions();
    let labels: Vec<ClassLabel> = tx.iter().map(|t| t.label).collect();
    let plan = make_folds(&labels, 10, 1).unwrap();
    let r: EvalReport = cross_validate(&tx, &plan, &MajorityLearner).unwrap();
    assert!((r.overall_accuracy - 20.0 / 45.0).abs() < 1e-12);
}

#[test]
fn rule_learner_end_to_end_on_mini_corpus() {
    let tx = mini_transactions();
    let labels: Vec<ClassLabel> = tx.iter().map(|t| t.label).collect();
    let plan = make_folds(&labels, 5, 3).unwrap();
    let learner = RuleLearner {
        config: ModelConfig {
            minsup: 2.0,
            ..ModelConfig::default()
        },
    };
    let a: EvalReport = cross_validate(&tx, &plan, &learner).unwrap();
    let b: EvalReport = cross_validate(&tx, &plan, &learner).unwrap();
    assert_eq!(a.to_json(), b.to_json());
    assert!(a.overall_accuracy > 20.0 / 45.0, "{}", a.to_text());
    assert_eq!(a.seed, Some(3));
    assert_eq!(a.folds.iter().map(|f| f.size).sum::<usize>(), 45);
}

#[test]
fn sweep_shapes() {
    let tx = mini_transactions();
    let labels: Vec<ClassLabel> = tx.iter().map(|t| t.label).collect();
    let plan = make_folds(&labels, 5, 3).unwrap();
    let config = ModelConfig {
        minsup: 2.0,
        arrangement: Arrangement::Hsc,
        ..ModelConfig::default()
    };
    assert!(sweep_confidence(&tx, &plan, &config, &[]).unwrap().is_empty());
    assert_eq!(sweep_csv::<f64>(&[]), "minconf,class,precision,recall\n");

    let points = sweep_confidence(&tx, &plan, &config, &[60.0, 70.0, 80.0, 90.0]).unwrap();
    assert_eq!(points.len(), 4);
    assert!(points.windows(2).all(|w| w[1].rule_count <= w[0].rule_count));
    assert_eq!(sweep_csv(&points).lines().count(), 1 + 4 * 3);

    let single = sweep_confidence(&tx, &plan, &config, &[60.0]).unwrap();
    let direct: EvalReport = cross_validate(&tx, &plan, &RuleLearner { config: config.clone() }).unwrap();
    assert_eq!(single[0].report, direct);
}

fn random_labels(rng: &mut impl Rng, k: usize) -> Vec<ClassLabel> {
    let mut v = Vec::new();
    for c in ClassLabel::POLARITIES {
        let n = rng.gen_range(k..k * 8);
        v.extend(std::iter::repeat_n(c, n));
    }
    for i in (1..v.len()).rev() {
        v.swap(i, rng.gen_range(0..=i));
    }
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn folds_are_stratified_partitions(seed in any::<u64>(), k in 2usize..12) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let labels = random_labels(&mut rng, k);
        let plan = make_folds(&labels, k, seed).unwrap();
        let mut seen = vec![0; labels.len()];
        for f in 0..k {
            for i in plan.test_indices(f) {
                seen[i] += 1;
            }
        }
        prop_assert!(seen.iter().all(|&s| s == 1));
        for c in ClassLabel::POLARITIES {
            let total = labels.iter().filter(|&&l| l == c).count() as f64;
            for f in 0..k {
                let n = plan.test_indices(f).iter().filter(|&&i| labels[i] == c).count() as f64;
                prop_assert!((n - total / k as f64).abs() <= 1.0);
            }
        }
    }

    #[test]
    fn prevalence_weighted_recall_is_accuracy(counts in proptest::array::uniform3(proptest::array::uniform3(0usize..30))) {
        let m = ConfusionMatrix::from_counts(counts);
        prop_assume!(m.total() > 0);
        let r = EvalReport::from_confusion(m, vec![]);
        let weighted: f64 = r.classes.iter().map(|c| c.recall * c.support as f64 / m.total() as f64).sum();
        prop_assert!((weighted - r.overall_accuracy).abs() < 1e-12);
        prop_assert!((r.overall_accuracy - m.trace() as f64 / m.total() as f64).abs() < 1e-15);
        for c in &r.classes {
            let s = c.precision + c.recall;
            let f = if s > 0.0 { 2.0 * c.precision * c.recall / s } else { 0.0 };
            prop_assert!((c.f_measure - f).abs() < 1e-12);
        }
    }

    #[test]
    fn every_example_predicted_once(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let tx = common::random_transactions(&mut rng, 40, 6);
        let labels: Vec<ClassLabel> = tx.iter().map(|t| t.label).collect();
        let Ok(plan) = make_folds(&labels, 2, seed) else { return Ok(()); };
        let preds = cv_predictions(&tx, &plan, &OracleLearner).unwrap();
        prop_assert_eq!(preds, labels);
    }
}
