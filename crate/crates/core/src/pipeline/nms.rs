use crate::geom::obb_iou;
use crate::pipeline::Detection;
use crate::scalar::Scalar;

/// Greedy per-category suppression by rotated IoU.
///
/// Detections scoring below `score_thr` are dropped first. Survivors are
/// visited by descending score (input order on ties); one is kept unless it
/// overlaps an already kept box of the same category with IoU `>= iou_thr`.
/// The output keeps that visiting order.
pub fn rotated_nms<T: Scalar>(dets: &[Detection<T>], iou_thr: T, score_thr: T) -> Vec<Detection<T>> {
    let mut order: Vec<usize> = (0..dets.len()).filter(|&i| dets[i].score >= score_thr).collect();
    order.sort_by(|&a, &b| dets[b].score.partial_cmp(&dets[a].score).unwrap().then(a.cmp(&b)));
    let mut kept: Vec<usize> = Vec::new();
    for i in order {
        let d = &dets[i];
        let suppressed =
            kept.iter().any(|&k| dets[k].category == d.category && obb_iou(&dets[k].obb, &d.obb) >= iou_thr);
        if !suppressed {
            kept.push(i);
        }
    }
    kept.into_iter().map(|i| dets[i].clone()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Obb;

    fn det(x0: f64, y0: f64, x1: f64, y1: f64, cat: &str, score: f64) -> Detection<f64> {
        Detection::new(Obb::axis_aligned(x0, y0, x1, y1).unwrap(), cat, score).unwrap()
    }

    #[test]
    fn identical_boxes() {
        let d = [det(0.0, 0.0, 4.0, 4.0, "a", 0.8), det(0.0, 0.0, 4.0, 4.0, "a", 0.9)];
        let out = rotated_nms(&d, 0.5, 0.0);
        assert_eq!(out, vec![d[1].clone()]);
    }

    #[test]
    fn disjoint_all_kept() {
        let d = [det(0.0, 0.0, 1.0, 1.0, "a", 0.3), det(5.0, 5.0, 6.0, 6.0, "a", 0.9)];
        assert_eq!(rotated_nms(&d, 0.5, 0.0).len(), 2);
    }

    #[test]
    fn three_box_example() {
        // B is A shifted so that IoU(A, B) = 0.8
        let shift = 10.0 * (1.0 - 0.8) / 1.8;
        let a = det(0.0, 0.0, 10.0, 10.0, "a", 0.9);
        let b = det(shift, 0.0, 10.0 + shift, 10.0, "a", 0.8);
        let c = det(30.0, 30.0, 40.0, 40.0, "a", 0.7);
        assert!((obb_iou(&a.obb, &b.obb) - 0.8).abs() < 1e-12);
        let out = rotated_nms(&[a.clone(), b, c.clone()], 0.5, 0.0);
        assert_eq!(out, vec![a, c]);
    }

    #[test]
    fn per_category_and_score_threshold() {
        let d = [
            det(0.0, 0.0, 4.0, 4.0, "a", 0.9),
            det(0.0, 0.0, 4.0, 4.0, "b", 0.8),
            det(10.0, 0.0, 14.0, 4.0, "a", 0.005),
        ];
        let out = rotated_nms(&d, 0.5, 0.01);
        assert_eq!(out.len(), 2);
        assert_eq!(out[1].category, "b");
    }
}
