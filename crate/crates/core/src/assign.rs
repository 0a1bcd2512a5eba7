//! Matching ground truths to feature points and proposals.

use crate::error::{Error, Result};
use crate::geom::{obb_iou, Obb, Point2};
use crate::losses::{hull_iou, RepPoints};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevelConfig<T> {
    /// Area scale `s` in `log2(sqrt(w h / s))`.
    pub scale: T,
    pub l_min: i32,
    pub l_max: i32,
}

impl<T: Scalar> Default for LevelConfig<T> {
    fn default() -> Self {
        Self { scale: T::lit(16.0), l_min: 2, l_max: 6 }
    }
}

impl<T: Scalar> LevelConfig<T> {
    pub fn validate(&self) -> Result<()> {
        if !(self.scale > T::zero()) || self.l_min > self.l_max {
            return Err(Error::InvalidConfig("need scale > 0 and l_min <= l_max".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AssignConfig<T> {
    /// Refine stage: hull IoU must exceed this.
    pub tau: T,
    /// Second stage: rotated IoU must reach this.
    pub rcnn_iou: T,
}

impl<T: Scalar> Default for AssignConfig<T> {
    fn default() -> Self {
        Self { tau: T::lit(0.1), rcnn_iou: T::lit(0.5) }
    }
}

impl<T: Scalar> AssignConfig<T> {
    pub fn validate(&self) -> Result<()> {
        let unit = |v: T| v >= T::zero() && v <= T::one();
        if unit(self.tau) && unit(self.rcnn_iou) {
            Ok(())
        } else {
            Err(Error::InvalidConfig("thresholds must lie in [0, 1]".into()))
        }
    }
}

/// Lattice of feature-point centres at one pyramid level:
/// `origin + ((col + 0.5) stride, (row + 0.5) stride)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeatureGrid<T> {
    pub level: i32,
    pub origin: Point2<T>,
    pub width: T,
    pub height: T,
}

impl<T: Scalar> FeatureGrid<T> {
    pub fn new(level: i32, width: T, height: T) -> Result<Self> {
        Self::with_origin(level, Point2::default(), width, height)
    }

    pub fn with_origin(level: i32, origin: Point2<T>, width: T, height: T) -> Result<Self> {
        if !(width > T::zero() && height > T::zero()) {
            return Err(Error::InvalidConfig("grid extent must be positive".into()));
        }
        Ok(Self { level, origin, width, height })
    }

    pub fn stride(&self) -> T {
        T::lit(2.0).powi(self.level)
    }

    pub fn cols(&self) -> usize {
        (self.width / self.stride()).ceil().to_usize().unwrap().max(1)
    }

    pub fn rows(&self) -> usize {
        (self.height / self.stride()).ceil().to_usize().unwrap().max(1)
    }

    pub fn center(&self, row: usize, col: usize) -> Point2<T> {
        let s = self.stride();
        let half = T::lit(0.5);
        self.origin + Point2::new((T::from_usize(col).unwrap() + half) * s, (T::from_usize(row).unwrap() + half) * s)
    }

    /// Nearest lattice point; exact ties go to the smaller index. The flag
    /// reports a position outside the grid extent (result clamped).
    pub fn nearest(&self, p: Point2<T>) -> (usize, usize, bool) {
        let local = p - self.origin;
        let outside = local.x < T::zero() || local.y < T::zero() || local.x > self.width || local.y > self.height;
        let snap = |v: T, n: usize| -> usize {
            // nearest integer to v/stride - 0.5, rounding halves down
            let u = v / self.stride() - T::lit(0.5);
            let k = (u - T::lit(0.5)).ceil();
            k.max(T::zero()).min(T::from_usize(n - 1).unwrap()).to_usize().unwrap()
        };
        (snap(local.y, self.rows()), snap(local.x, self.cols()), outside)
    }
}

/// Pyramid level of a ground truth: `round(log2(sqrt(w h / s)))`, halves
/// rounded up, clamped to `[l_min, l_max]`.
pub fn level_of<T: Scalar>(gt: &Obb<T>, cfg: &LevelConfig<T>) -> Result<i32> {
    let fp = gt.to_five_param()?;
    let raw = (fp.w * fp.h / cfg.scale).sqrt().log2();
    let level = (raw + T::lit(0.5)).floor().to_i32().unwrap_or(cfg.l_max);
    Ok(level.clamp(cfg.l_min, cfg.l_max))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InitAssignment {
    pub level: i32,
    pub row: usize,
    pub col: usize,
    pub out_of_extent: bool,
}

/// Initial-stage positives: one feature point per ground truth, the one
/// nearest its centre on its projected level.
pub fn assign_init<T: Scalar>(
    gts: &[Obb<T>],
    grids: &[FeatureGrid<T>],
    cfg: &LevelConfig<T>,
) -> Result<Vec<InitAssignment>> {
    cfg.validate()?;
    if gts.is_empty() {
        return Err(Error::EmptyInput);
    }
    gts.iter()
        .map(|gt| {
            let level = level_of(gt, cfg)?;
            let grid = grids
                .iter()
                .find(|g| g.level == level)
                .ok_or_else(|| Error::InvalidConfig(format!("no feature grid for level {level}")))?;
            let (row, col, out_of_extent) = grid.nearest(gt.center());
            Ok(InitAssignment { level, row, col, out_of_extent })
        })
        .collect()
}

/// Refine-stage labels: `Some(gt)` when the best hull IoU exceeds `tau`
/// (ties to the lowest index), `None` for background.
pub fn assign_refine<T: Scalar>(
    preds: &[RepPoints<T>],
    gts: &[Obb<T>],
    cfg: &AssignConfig<T>,
) -> Result<Vec<Option<usize>>> {
    cfg.validate()?;
    Ok(preds
        .iter()
        .map(|p| best_match(gts, |g| hull_iou(p.points(), g)).and_then(|(i, v)| (v > cfg.tau).then_some(i)))
        .collect())
}

/// Second-stage labels: `Some(gt)` when the best rotated IoU reaches
/// `rcnn_iou`.
pub fn assign_rcnn<T: Scalar>(
    proposals: &[Obb<T>],
    gts: &[Obb<T>],
    cfg: &AssignConfig<T>,
) -> Result<Vec<Option<usize>>> {
    cfg.validate()?;
    Ok(proposals
        .iter()
        .map(|p| best_match(gts, |g| obb_iou(p, g)).and_then(|(i, v)| (v >= cfg.rcnn_iou).then_some(i)))
        .collect())
}

fn best_match<T: Scalar>(gts: &[Obb<T>], score: impl Fn(&Obb<T>) -> T) -> Option<(usize, T)> {
    let mut best: Option<(usize, T)> = None;
    for (i, g) in gts.iter().enumerate() {
        let v = score(g);
        if best.is_none_or(|(_, b)| v > b) {
            best = Some((i, v));
        }
    }
    best
}
