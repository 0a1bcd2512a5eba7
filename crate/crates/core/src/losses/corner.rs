use crate::error::{Error, Result};
use crate::geom::{Obb, Point2};
use crate::losses::CornerSet;
use crate::scalar::{pairwise_sum, Scalar};

/// Relabellings of the target corners the corner loss may choose from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PermutationSet {
    /// The four cyclic shifts; winding is preserved.
    #[default]
    Cyclic4,
    /// Cyclic shifts plus their reflections.
    Dihedral8,
}

impl PermutationSet {
    pub fn permutations(self) -> Vec<[usize; 4]> {
        let cyclic = (0..4).map(|s| std::array::from_fn(|i| (i + s) % 4));
        match self {
            PermutationSet::Cyclic4 => cyclic.collect(),
            PermutationSet::Dihedral8 => {
                cyclic.clone().chain((0..4).map(|s| std::array::from_fn(|i| (s + 4 - i) % 4))).collect()
            }
        }
    }
}

/// Smallest L1 distance (over the 8 coordinates) between `pred` and an
/// allowed relabelling of `target`.
pub fn corner_l1<T: Scalar>(pred: &[Point2<T>; 4], target: &[Point2<T>; 4], perms: PermutationSet) -> T {
    perms
        .permutations()
        .into_iter()
        .map(|perm| {
            (0..4)
                .map(|i| {
                    let d = pred[i] - target[perm[i]];
                    d.x.abs() + d.y.abs()
                })
                .fold(T::zero(), |a, b| a + b)
        })
        .fold(T::infinity(), T::min)
}

/// Mean of [`corner_l1`] over samples; zero for an empty batch.
pub fn corner_loss<T: Scalar>(preds: &[CornerSet<T>], targets: &[Obb<T>], perms: PermutationSet) -> Result<T> {
    if preds.len() != targets.len() {
        return Err(Error::LengthMismatch(preds.len(), targets.len()));
    }
    if preds.is_empty() {
        return Ok(T::zero());
    }
    let per: Vec<T> = preds.iter().zip(targets).map(|(p, t)| corner_l1(&p.0, t.corners(), perms)).collect();
    Ok(pairwise_sum(&per) / T::from_usize(per.len()).unwrap())
}
