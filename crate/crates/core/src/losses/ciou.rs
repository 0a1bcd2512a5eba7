use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geom::{convex_hull, intersection_area, Obb, Point2};
use crate::losses::RepPoints;
use crate::scalar::{pairwise_sum, Scalar};

/// Convex-hull GIoU between the hull of `pred` and `target`.
///
/// `IoU(hull, target) - |P \ (hull ∪ target)| / |P|` with `P` the convex
/// hull of both. A degenerate prediction hull counts as having area
/// `Scalar::area_floor()`.
pub fn ciou<T: Scalar>(pred: &[Point2<T>], target: &Obb<T>) -> T {
    let terms = Terms::new(pred, target);
    terms.iou() - (terms.enclosing - terms.union()) / terms.enclosing
}

/// The IoU term alone (used for refine-stage assignment).
pub fn hull_iou<T: Scalar>(pred: &[Point2<T>], target: &Obb<T>) -> T {
    Terms::new(pred, target).iou()
}

struct Terms<T> {
    inter: T,
    pred_area: T,
    target_area: T,
    enclosing: T,
}

impl<T: Scalar> Terms<T> {
    fn new(pred: &[Point2<T>], target: &Obb<T>) -> Self {
        let hull = convex_hull(pred).expect("prediction points must be finite and nonempty");
        let tpoly = target.polygon();
        let inter = intersection_area(&hull, &tpoly);
        let pred_area = hull.area().max(T::area_floor());
        let mut all: Vec<Point2<T>> = hull.vertices().to_vec();
        all.extend_from_slice(target.corners());
        let enclosing = convex_hull(&all).expect("finite points").area().max(T::area_floor());
        Self { inter, pred_area, target_area: target.area(), enclosing }
    }

    fn union(&self) -> T {
        self.pred_area + self.target_area - self.inter
    }

    fn iou(&self) -> T {
        self.inter / self.union()
    }
}

/// Mean of `1 - ciou` over matched (prediction, target) pairs; zero when
/// there are no positives.
pub fn ciou_loc_loss<T: Scalar>(preds: &[RepPoints<T>], targets: &[Obb<T>]) -> Result<T> {
    if preds.len() != targets.len() {
        return Err(Error::LengthMismatch(preds.len(), targets.len()));
    }
    if preds.is_empty() {
        return Ok(T::zero());
    }
    let per: Vec<T> = preds.par_iter().zip(targets.par_iter()).map(|(p, t)| T::one() - ciou(p.points(), t)).collect();
    Ok(pairwise_sum(&per) / T::from_usize(per.len()).unwrap())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sq(x0: f64, y0: f64, s: f64) -> Obb<f64> {
        Obb::axis_aligned(x0, y0, x0 + s, y0 + s).unwrap()
    }

    #[test]
    fn worked_values() {
        let t = sq(0.0, 0.0, 1.0);
        assert_eq!(ciou(t.corners(), &t), 1.0);
        let far = sq(2.0, 2.0, 1.0);
        assert!((ciou(far.corners(), &t) + 0.6).abs() < 1e-12);
        let half = sq(0.5, 0.5, 1.0);
        let expected = 1.0 / 7.0 - 0.25 / 2.0;
        assert!((ciou(half.corners(), &t) - expected).abs() < 1e-12);
    }

    #[test]
    fn interior_points_do_not_matter() {
        let t = sq(0.0, 0.0, 4.0);
        let mut p = sq(1.0, 1.0, 2.0).corners().to_vec();
        let base = ciou(&p, &t);
        p.push(Point2::new(2.0, 2.0));
        assert_eq!(ciou(&p, &t), base);
    }

    #[test]
    fn degenerate_prediction_stays_finite() {
        let t = sq(0.0, 0.0, 1.0);
        let line = [Point2::new(0.0, 0.0), Point2::new(1.0, 1.0), Point2::new(0.5, 0.5)];
        let v = ciou(&line, &t);
        assert!(v.is_finite() && v > -1.0 && v <= 1.0);
    }

    #[test]
    fn loc_loss_means() {
        let t = sq(0.0, 0.0, 1.0);
        let on = RepPoints::new(t.corners().to_vec()).unwrap();
        assert_eq!(ciou_loc_loss(&[on.clone(), on.clone()], &[t, t]).unwrap(), 0.0);
        let far = RepPoints::new(sq(2.0, 2.0, 1.0).corners().to_vec()).unwrap();
        assert!((ciou_loc_loss(&[far], &[t]).unwrap() - 1.6).abs() < 1e-12);
        assert_eq!(ciou_loc_loss::<f64>(&[], &[]).unwrap(), 0.0);
        assert!(ciou_loc_loss(&[on], &[]).is_err());
    }
}
