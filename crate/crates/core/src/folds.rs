//! Subject-grouped cross-validation splits.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::rng::Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FoldScheme {
    /// Groups shuffled then dealt round-robin into `k` folds.
    GroupedKFold(usize),
    /// One fold per group.
    LeaveOneGroupOut,
}

/// Record indices on each side of one split.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fold {
    pub train: Vec<usize>,
    pub test: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FoldPlan {
    pub folds: Vec<Fold>,
}

impl FoldPlan {
    /// A single explicit train/test split.
    pub fn holdout(train: Vec<usize>, test: Vec<usize>) -> Self {
        FoldPlan {
            folds: alloc::vec![Fold { train, test }],
        }
    }

    pub fn len(&self) -> usize {
        self.folds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.folds.is_empty()
    }
}

/// Builds folds over records whose subject ids are `groups[i]`. No group is
/// ever split across train and test, and the test sets partition the records.
pub fn make_folds<G: AsRef<str>>(groups: &[G], scheme: FoldScheme, seed: u64) -> Result<FoldPlan> {
    let unique: Vec<&str> = groups
        .iter()
        .map(AsRef::as_ref)
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    if unique.len() < 2 {
        return Err(Error::InvalidConfig(alloc::format!(
            "grouped cross-validation needs at least 2 groups, found {}",
            unique.len()
        )));
    }
    let assignment: Vec<Vec<&str>> = match scheme {
        FoldScheme::LeaveOneGroupOut => unique.iter().map(|g| alloc::vec![*g]).collect(),
        FoldScheme::GroupedKFold(k) => {
            if k < 2 {
                return Err(Error::InvalidConfig(alloc::format!("k must be at least 2, got {k}")));
            }
            if k > unique.len() {
                return Err(Error::TooManyFolds {
                    folds: k,
                    groups: unique.len(),
                });
            }
            let mut shuffled = unique.clone();
            Rng::new(seed).shuffle(&mut shuffled);
            let mut folds = alloc::vec![Vec::new(); k];
            for (i, g) in shuffled.into_iter().enumerate() {
                folds[i % k].push(g);
            }
            folds
        }
    };
    let folds = assignment
        .into_iter()
        .map(|held_out| {
            let (test, train): (Vec<usize>, Vec<usize>) =
                (0..groups.len()).partition(|&i| held_out.contains(&groups[i].as_ref()));
            Fold { train, test }
        })
        .collect();
    Ok(FoldPlan { folds })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::format;
    use alloc::string::String;
    use proptest::prelude::*;

    fn groups(n_groups: usize, per: usize) -> Vec<String> {
        (0..n_groups * per).map(|i| format!("s{}", i % n_groups)).collect()
    }

    fn check_plan(groups: &[String], plan: &FoldPlan) {
        let mut seen = alloc::vec![0; groups.len()];
        for fold in &plan.folds {
            for &i in &fold.test {
                seen[i] += 1;
            }
            let test_groups: BTreeSet<&str> = fold.test.iter().map(|&i| groups[i].as_str()).collect();
            assert!(fold.train.iter().all(|&i| !test_groups.contains(groups[i].as_str())));
            assert_eq!(fold.train.len() + fold.test.len(), groups.len());
        }
        assert!(seen.iter().all(|&c| c == 1));
    }

    #[test]
    fn logo_one_fold_per_group() {
        let g = groups(25, 6);
        let plan = make_folds(&g, FoldScheme::LeaveOneGroupOut, 0).unwrap();
        assert_eq!(plan.len(), 25);
        check_plan(&g, &plan);
    }

    #[test]
    fn kfold_deterministic() {
        let g = groups(12, 3);
        let a = make_folds(&g, FoldScheme::GroupedKFold(10), 5).unwrap();
        assert_eq!(a, make_folds(&g, FoldScheme::GroupedKFold(10), 5).unwrap());
        assert_eq!(a.len(), 10);
        check_plan(&g, &a);
    }

    #[test]
    fn errors() {
        let g = groups(3, 2);
        assert_eq!(
            make_folds(&g, FoldScheme::GroupedKFold(4), 0),
            Err(Error::TooManyFolds { folds: 4, groups: 3 })
        );
        assert!(make_folds(&groups(1, 5), FoldScheme::LeaveOneGroupOut, 0).is_err());
        assert!(make_folds(&g, FoldScheme::GroupedKFold(1), 0).is_err());
    }

    proptest! {
        #[test]
        fn never_splits_a_group(n_groups in 2usize..15, per in 1usize..5, k in 2usize..15, seed in any::<u64>()) {
            let g = groups(n_groups, per);
            let scheme = if k <= n_groups { FoldScheme::GroupedKFold(k) } else { FoldScheme::LeaveOneGroupOut };
            let plan = make_folds(&g, scheme, seed).unwrap();
            check_plan(&g, &plan);
        }
    }
}
