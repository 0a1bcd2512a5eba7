//! Image-level repeat-factor resampling for long-tailed datasets.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Default oversampling threshold.
pub const DEFAULT_BETA_THR: f64 = 0.3;

#[derive(Debug, Clone, Default, PartialEq)]
pub struct DatasetIndex {
    pub images: Vec<(String, BTreeSet<String>)>,
}

impl DatasetIndex {
    pub fn push(&mut self, image: impl Into<String>, categories: impl IntoIterator<Item = impl Into<String>>) {
        self.images.push((image.into(), categories.into_iter().map(Into::into).collect()));
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RepeatFactorTable<T> {
    pub beta_thr: T,
    /// Fraction of images containing each category.
    pub category_fraction: BTreeMap<String, T>,
    pub category_factor: BTreeMap<String, T>,
    /// Per image, in dataset order.
    pub image_factor: Vec<(String, T)>,
}

/// `r_c = max(1, sqrt(beta / F_c))`.
pub fn category_repeat_factor<T: Scalar>(fraction: T, beta_thr: T) -> T {
    T::one().max((beta_thr / fraction).sqrt())
}

pub fn repeat_factors<T: Scalar>(ds: &DatasetIndex, beta_thr: T) -> Result<RepeatFactorTable<T>> {
    if ds.images.is_empty() {
        return Err(Error::EmptyInput);
    }
    if !(beta_thr >= T::zero() && beta_thr <= T::one()) {
        return Err(Error::InvalidConfig("beta_thr must lie in [0, 1]".into()));
    }
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    for (_, cats) in &ds.images {
        for c in cats {
            *counts.entry(c.clone()).or_default() += 1;
        }
    }
    let n = T::from_usize(ds.images.len()).unwrap();
    let category_fraction: BTreeMap<String, T> =
        counts.into_iter().map(|(c, k)| (c, T::from_usize(k).unwrap() / n)).collect();
    let category_factor: BTreeMap<String, T> =
        category_fraction.iter().map(|(c, &f)| (c.clone(), category_repeat_factor(f, beta_thr))).collect();
    let image_factor = ds
        .images
        .iter()
        .map(|(id, cats)| {
            let r = cats.iter().map(|c| category_factor[c]).fold(T::one(), T::max);
            (id.clone(), r)
        })
        .collect();
    Ok(RepeatFactorTable { beta_thr, category_fraction, category_factor, image_factor })
}

/// One epoch of image ids: each image `floor(r)` times plus one more with
/// probability `frac(r)`, then shuffled. Same table and seed, same epoch.
pub fn build_epoch<T: Scalar>(table: &RepeatFactorTable<T>, seed: u64) -> Vec<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for (id, r) in &table.image_factor {
        let r = r.as_f64();
        let whole = r.floor();
        let mut copies = whole as usize;
        let frac = r - whole;
        if frac > 0.0 && rng.random_bool(frac) {
            copies += 1;
        }
        out.extend(std::iter::repeat_n(id.clone(), copies));
    }
    out.shuffle(&mut rng);
    out
}
