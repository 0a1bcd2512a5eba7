//! Rotated-box detection metrics: greedy matching, precision/recall,
//! VOC07 (11-point) and VOC12 (area) average precision, proposal recall.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::data::{Annotation, DetectionRecord};
use crate::geom::obb_iou;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct PRCurve<T> {
    /// `(recall, precision)`, recall nondecreasing.
    pub points: Vec<(T, T)>,
    /// Non-difficult ground truths.
    pub n_gt: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ApMetric {
    Voc07,
    Voc12,
}

fn by_score_desc<T: Scalar>(dets: &[DetectionRecord<T>]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..dets.len()).collect();
    order.sort_by(|&a, &b| dets[b].det.score.partial_cmp(&dets[a].det.score).unwrap().then(a.cmp(&b)));
    order
}

/// Greedy matching in descending score order (input order on ties).
///
/// A detection is a true positive when its best-overlapping candidate
/// (a same-image, same-category ground truth not yet matched) reaches
/// `iou_thr`; a difficult candidate absorbs the detection without counting
/// it either way. Detections sharing a score contribute one curve point.
pub fn match_and_pr<T: Scalar>(dets: &[DetectionRecord<T>], gts: &[Annotation<T>], iou_thr: T) -> PRCurve<T> {
    let n_gt = gts.iter().filter(|g| !g.difficult).count();
    let mut by_key: HashMap<(&str, &str), Vec<usize>> = HashMap::new();
    for (i, g) in gts.iter().enumerate() {
        by_key.entry((g.image.as_str(), g.category.as_str())).or_default().push(i);
    }
    let mut matched = vec![false; gts.len()];
    let order = by_score_desc(dets);
    let (mut tp, mut fp) = (0usize, 0usize);
    let mut points = Vec::new();
    let n_gt_t = T::from_usize(n_gt).unwrap();
    for (pos, &i) in order.iter().enumerate() {
        let d = &dets[i];
        let candidates = by_key.get(&(d.image.as_str(), d.det.category.as_str()));
        let best = candidates
            .into_iter()
            .flatten()
            .filter(|&&g| gts[g].difficult || !matched[g])
            .map(|&g| (g, obb_iou(&d.det.obb, &gts[g].obb)))
            .filter(|&(_, iou)| iou >= iou_thr)
            .fold(None, |acc: Option<(usize, T)>, (g, iou)| match acc {
                Some((_, b)) if b >= iou => acc,
                _ => Some((g, iou)),
            });
        match best {
            Some((g, _)) if gts[g].difficult => {}
            Some((g, _)) => {
                matched[g] = true;
                tp += 1;
            }
            None => fp += 1,
        }
        let last_of_tie = order.get(pos + 1).is_none_or(|&j| dets[j].det.score != d.det.score);
        if last_of_tie && tp + fp > 0 {
            let recall = if n_gt == 0 { T::zero() } else { T::from_usize(tp).unwrap() / n_gt_t };
            let precision = T::from_usize(tp).unwrap() / T::from_usize(tp + fp).unwrap();
            points.push((recall, precision));
        }
    }
    PRCurve { points, n_gt }
}

pub fn average_precision<T: Scalar>(pr: &PRCurve<T>, metric: ApMetric) -> T {
    if pr.points.is_empty() {
        return T::zero();
    }
    match metric {
        ApMetric::Voc07 => {
            let slack = T::lit(1e-12);
            let sum: T = (0..=10)
                .map(|i| {
                    let t = T::from_usize(i).unwrap() / T::lit(10.0);
                    pr.points.iter().filter(|(r, _)| *r >= t - slack).map(|&(_, p)| p).fold(T::zero(), T::max)
                })
                .sum();
            sum / T::lit(11.0)
        }
        ApMetric::Voc12 => {
            let mut rec = vec![T::zero()];
            let mut pre = vec![T::zero()];
            for &(r, p) in &pr.points {
                rec.push(r);
                pre.push(p);
            }
            rec.push(T::one());
            pre.push(T::zero());
            for i in (0..pre.len() - 1).rev() {
                pre[i] = pre[i].max(pre[i + 1]);
            }
            (1..rec.len()).filter(|&i| rec[i] != rec[i - 1]).map(|i| (rec[i] - rec[i - 1]) * pre[i]).sum()
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MapReport<T> {
    pub per_category: BTreeMap<String, T>,
    pub map: T,
}

/// Per-category AP and their mean over categories with at least one
/// non-difficult ground truth.
pub fn mean_average_precision<T: Scalar>(
    dets: &[DetectionRecord<T>],
    gts: &[Annotation<T>],
    iou_thr: T,
    metric: ApMetric,
) -> MapReport<T> {
    let cats: BTreeSet<&str> = gts.iter().filter(|g| !g.difficult).map(|g| g.category.as_str()).collect();
    let per_category: BTreeMap<String, T> = cats
        .into_iter()
        .map(|c| {
            let d: Vec<DetectionRecord<T>> = dets.iter().filter(|d| d.det.category == c).cloned().collect();
            let g: Vec<Annotation<T>> = gts.iter().filter(|g| g.category == c).cloned().collect();
            (c.to_string(), average_precision(&match_and_pr(&d, &g, iou_thr), metric))
        })
        .collect();
    let map = if per_category.is_empty() {
        T::zero()
    } else {
        per_category.values().copied().sum::<T>() / T::from_usize(per_category.len()).unwrap()
    };
    MapReport { per_category, map }
}

/// Fraction of non-difficult ground truths covered (IoU `>= iou_thr`,
/// any category) by one of their image's `k` highest-scoring proposals.
pub fn recall_at_k<T: Scalar>(proposals: &[DetectionRecord<T>], gts: &[Annotation<T>], k: usize, iou_thr: T) -> T {
    let mut per_image: HashMap<&str, Vec<usize>> = HashMap::new();
    for i in by_score_desc(proposals) {
        let v = per_image.entry(proposals[i].image.as_str()).or_default();
        if v.len() < k {
            v.push(i);
        }
    }
    let counted: Vec<&Annotation<T>> = gts.iter().filter(|g| !g.difficult).collect();
    if counted.is_empty() {
        return T::zero();
    }
    let hit = counted
        .iter()
        .filter(|g| {
            per_image
                .get(g.image.as_str())
                .is_some_and(|ps| ps.iter().any(|&p| obb_iou(&proposals[p].det.obb, &g.obb) >= iou_thr))
        })
        .count();
    T::from_usize(hit).unwrap() / T::from_usize(counted.len()).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Obb;
    use crate::pipeline::Detection;

    fn bx(x: f64) -> Obb<f64> {
        Obb::axis_aligned(x, 0.0, x + 10.0, 10.0).unwrap()
    }

    fn gt(x: f64, difficult: bool) -> Annotation<f64> {
        Annotation { image: "im".into(), category: "car".into(), obb: bx(x), difficult }
    }

    fn det(x: f64, score: f64) -> DetectionRecord<f64> {
        DetectionRecord { image: "im".into(), det: Detection::new(bx(x), "car", score).unwrap() }
    }

    #[test]
    fn perfect_detector() {
        let gts = vec![gt(0.0, false), gt(50.0, false)];
        let dets = vec![det(0.0, 1.0), det(50.0, 1.0)];
        let pr = match_and_pr(&dets, &gts, 0.5);
        assert_eq!(pr.points, vec![(1.0, 1.0)]);
        assert_eq!(average_precision(&pr, ApMetric::Voc07), 1.0);
        assert_eq!(average_precision(&pr, ApMetric::Voc12), 1.0);
    }

    #[test]
    fn no_detections() {
        let pr = match_and_pr(&[], &[gt(0.0, false)], 0.5);
        assert!(pr.points.is_empty());
        assert_eq!(average_precision(&pr, ApMetric::Voc07), 0.0);
        assert_eq!(average_precision(&pr, ApMetric::Voc12), 0.0);
    }

    #[test]
    fn duplicate_trace() {
        let gts = vec![gt(0.0, false), gt(50.0, false)];
        let dets = vec![det(0.0, 0.9), det(0.5, 0.8)];
        let pr = match_and_pr(&dets, &gts, 0.5);
        assert_eq!(pr.points, vec![(0.5, 1.0), (0.5, 0.5)]);
        assert!((average_precision(&pr, ApMetric::Voc07) - 6.0 / 11.0).abs() < 1e-15);
        assert_eq!(average_precision(&pr, ApMetric::Voc12), 0.5);
    }

    #[test]
    fn single_point_curve() {
        let pr = PRCurve { points: vec![(0.5f64, 1.0)], n_gt: 2 };
        assert!((average_precision(&pr, ApMetric::Voc07) - 0.54545).abs() < 1e-5);
        assert_eq!(average_precision(&pr, ApMetric::Voc12), 0.5);
    }

    #[test]
    fn difficult_is_neither_tp_nor_fp() {
        let gts = vec![gt(0.0, false), gt(50.0, true)];
        let dets = vec![det(50.0, 0.9), det(50.0, 0.85), det(0.0, 0.8)];
        let pr = match_and_pr(&dets, &gts, 0.5);
        assert_eq!(pr.n_gt, 1);
        assert_eq!(pr.points, vec![(1.0, 1.0)]);
    }

    #[test]
    fn other_image_or_category_does_not_match() {
        let gts = vec![gt(0.0, false)];
        let mut d = det(0.0, 0.9);
        d.image = "other".into();
        let mut e = det(0.0, 0.8);
        e.det.category = "bus".into();
        let pr = match_and_pr(&[d, e], &gts, 0.5);
        assert_eq!(pr.points, vec![(0.0, 0.0), (0.0, 0.0)]);
    }

    #[test]
    fn map_over_categories() {
        let mut gts = vec![gt(0.0, false)];
        gts.push(Annotation { category: "bus".into(), ..gt(50.0, false) });
        let dets = vec![det(0.0, 0.9)];
        let r = mean_average_precision(&dets, &gts, 0.5, ApMetric::Voc12);
        assert_eq!(r.per_category["car"], 1.0);
        assert_eq!(r.per_category["bus"], 0.0);
        assert_eq!(r.map, 0.5);
    }

    #[test]
    fn recall_examples() {
        let gts = vec![gt(0.0, false), gt(50.0, false)];
        let props = vec![det(0.0, 0.9), det(50.0, 0.8), det(100.0, 0.95)];
        assert_eq!(recall_at_k(&props, &gts, 1, 0.5), 0.0);
        assert_eq!(recall_at_k(&props, &gts, 2, 0.5), 0.5);
        assert_eq!(recall_at_k(&props, &gts, 3, 0.5), 1.0);
        assert_eq!(recall_at_k(&props[..1], &gts, 1, 0.5), 0.5);
    }
}
