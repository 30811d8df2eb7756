use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::arm::ClassLabel;
use crate::error::{Error, Result};

/// Assignment of every example to one of `k` folds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FoldPlan {
    pub k: usize,
    pub seed: u64,
    pub assignment: Vec<usize>,
}

impl FoldPlan {
    /// Indices held out in fold `i`.
    pub fn test_indices(&self, i: usize) -> Vec<usize> {
        (0..self.assignment.len()).filter(|&j| self.assignment[j] == i).collect()
    }

    /// Indices used for training when fold `i` is held out.
    pub fn train_indices(&self, i: usize) -> Vec<usize> {
        (0..self.assignment.len()).filter(|&j| self.assignment[j] != i).collect()
    }

    pub fn fold_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.k];
        for &f in &self.assignment {
            sizes[f] += 1;
        }
        sizes
    }
}

/// Stratified assignment: each class is shuffled with a seeded ChaCha
/// generator and dealt round-robin over the folds, so each fold holds either
/// `floor` or `ceil` of its proportional share of every class. The dealing
/// position carries over between classes to keep fold sizes even.
pub fn make_folds(labels: &[ClassLabel], k: usize, seed: u64) -> Result<FoldPlan> {
    if k < 2 {
        return Err(Error::TooFewFolds(k));
    }
    if labels.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut assignment = vec![0; labels.len()];
    let mut next = 0;
    for class in ClassLabel::ALL {
        let mut members: Vec<usize> = (0..labels.len()).filter(|&i| labels[i] == class).collect();
        if members.is_empty() {
            continue;
        }
        if members.len() < k {
            return Err(Error::ClassTooSmall {
                label: class.to_string(),
                count: members.len(),
                folds: k,
            });
        }
        members.shuffle(&mut rng);
        for idx in members {
            assignment[idx] = next;
            next = (next + 1) % k;
        }
    }
    Ok(FoldPlan { k, seed, assignment })
}
