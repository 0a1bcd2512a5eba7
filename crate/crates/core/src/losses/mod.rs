//! Training objectives for point-set and corner regression.

mod ciou;
mod classification;
mod corner;
mod grad;

pub use ciou::{ciou, ciou_loc_loss, hull_iou};
pub use classification::{ce_loss, focal_loss, FocalConfig};
pub use corner::{corner_l1, corner_loss, PermutationSet};
pub use grad::{fd_grad_ciou, grad_ciou, grad_ciou_or_fd, grad_relative_error, GradSource};

use crate::error::{Error, Result};
use crate::geom::{check_finite, Obb, Point2};
use crate::scalar::Scalar;

/// Number of representative points per object unless configured otherwise.
pub const DEFAULT_K: usize = 9;

/// Learned representative points of one object.
#[derive(Debug, Clone, PartialEq)]
pub struct RepPoints<T> {
    points: Vec<Point2<T>>,
}

impl<T: Scalar> RepPoints<T> {
    pub fn new(points: Vec<Point2<T>>) -> Result<Self> {
        if points.len() < 3 {
            return Err(Error::PointCount { expected: 3, got: points.len() });
        }
        check_finite(&points)?;
        Ok(Self { points })
    }

    /// Like [`RepPoints::new`] but also requires exactly `k` points.
    pub fn with_k(points: Vec<Point2<T>>, k: usize) -> Result<Self> {
        if points.len() != k {
            return Err(Error::PointCount { expected: k, got: points.len() });
        }
        Self::new(points)
    }

    pub fn points(&self) -> &[Point2<T>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Four refined corner predictions; need not form a rectangle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CornerSet<T>(pub [Point2<T>; 4]);

impl<T: Scalar> CornerSet<T> {
    pub fn new(corners: [Point2<T>; 4]) -> Result<Self> {
        check_finite(&corners)?;
        Ok(Self(corners))
    }

    pub fn from_obb(obb: &Obb<T>) -> Self {
        Self(*obb.corners())
    }

    pub fn points(&self) -> &[Point2<T>] {
        &self.0
    }
}

/// Trade-off weights of the two detector stages.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LossWeights<T> {
    pub lambda1: T,
    pub lambda2: T,
    pub lambda3: T,
    pub mu1: T,
    pub mu2: T,
}

impl<T: Scalar> Default for LossWeights<T> {
    fn default() -> Self {
        Self { lambda1: T::lit(0.5), lambda2: T::one(), lambda3: T::one(), mu1: T::one(), mu2: T::one() }
    }
}

impl<T: Scalar> LossWeights<T> {
    pub fn validate(&self) -> Result<()> {
        let all = [self.lambda1, self.lambda2, self.lambda3, self.mu1, self.mu2];
        if all.iter().all(|w| w.is_finite() && *w >= T::zero()) {
            Ok(())
        } else {
            Err(Error::InvalidConfig("loss weights must be finite and nonnegative".into()))
        }
    }
}

/// Individual loss terms before weighting.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct LossParts<T> {
    /// Initial-stage hull GIoU loss over positives.
    pub init_loc: T,
    /// Refine-stage focal loss.
    pub refine_cls: T,
    /// Refine-stage hull GIoU loss over positives.
    pub refine_loc: T,
    /// Second-stage cross-entropy.
    pub reg_cls: T,
    /// Second-stage corner L1 loss.
    pub reg_loc: T,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LossTotals<T> {
    pub rpn_total: T,
    pub reg_total: T,
    pub grand_total: T,
}

pub fn composite_losses<T: Scalar>(parts: &LossParts<T>, w: &LossWeights<T>) -> LossTotals<T> {
    let rpn_total = w.lambda1 * parts.init_loc + w.lambda2 * parts.refine_cls + w.lambda3 * parts.refine_loc;
    let reg_total = w.mu1 * parts.reg_cls + w.mu2 * parts.reg_loc;
    LossTotals { rpn_total, reg_total, grand_total: rpn_total + reg_total }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn composite_examples() {
        let w = LossWeights::<f64>::default();
        let t =
            composite_losses(&LossParts { init_loc: 1.0, refine_cls: 1.0, refine_loc: 1.0, ..Default::default() }, &w);
        assert_eq!(t.rpn_total, 2.5);
        let t = composite_losses(&LossParts { reg_cls: 0.3, reg_loc: 0.7, ..Default::default() }, &w);
        assert_eq!(t.reg_total, 1.0);
        assert_eq!(t.grand_total, 1.0);
        let t = composite_losses(&LossParts::default(), &w);
        assert_eq!((t.rpn_total, t.reg_total, t.grand_total), (0.0, 0.0, 0.0));
    }

    #[test]
    fn weights_validate() {
        assert!(LossWeights::<f64>::default().validate().is_ok());
        let bad = LossWeights { lambda1: -1.0, ..LossWeights::<f64>::default() };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn rep_points_k() {
        let p = vec![Point2::new(0.0, 0.0); 9];
        assert!(RepPoints::with_k(p.clone(), DEFAULT_K).is_ok());
        assert_eq!(RepPoints::with_k(p, 5).unwrap_err(), Error::PointCount { expected: 5, got: 9 });
        assert!(RepPoints::new(vec![Point2::new(0.0, 0.0); 2]).is_err());
    }
}
