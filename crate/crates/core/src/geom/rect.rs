//! Minimum-area enclosing rectangle by rotating calipers.

use crate::error::{Error, Result};
use crate::geom::hull::convex_hull;
use crate::geom::obb::Obb;
use crate::geom::point::Point2;
use crate::scalar::Scalar;

/// Smallest-area rectangle enclosing `points`.
///
/// One side of the result is collinear with a hull edge. Among equal-area
/// candidates the one whose side direction, reduced to `[0, pi/2)`, is
/// smallest wins; corner 0 to corner 1 of the returned box runs along that
/// direction (see [`Obb::edge_angle`]).
pub fn min_area_rect<T: Scalar>(points: &[Point2<T>]) -> Result<Obb<T>> {
    let hull = convex_hull(points)?;
    if hull.is_degenerate() {
        return Err(Error::DegenerateHull);
    }
    let h = hull.vertices();
    let m = h.len();
    let quarter = T::FRAC_PI_2();
    let tie = T::lit(1e-9);

    let proj = |i: usize, d: Point2<T>| h[i % m].dot(d);

    let mut best: Option<(T, T)> = None; // (area, angle)
    let (mut right, mut top, mut left) = (0usize, 0usize, 0usize);
    for i in 0..m {
        let e = h[(i + 1) % m] - h[i];
        let u = e * (T::one() / e.norm());
        let v = u.perp();
        if i == 0 {
            right = (0..m).max_by(|&a, &b| proj(a, u).partial_cmp(&proj(b, u)).unwrap()).unwrap();
            top = (0..m).max_by(|&a, &b| proj(a, v).partial_cmp(&proj(b, v)).unwrap()).unwrap();
            left = (0..m).min_by(|&a, &b| proj(a, u).partial_cmp(&proj(b, u)).unwrap()).unwrap();
        } else {
            // each caliper only ever moves forward around a convex ring
            while proj(right + 1, u) > proj(right, u) {
                right = (right + 1) % m;
            }
            while proj(top + 1, v) > proj(top, v) {
                top = (top + 1) % m;
            }
            while proj(left + 1, u) < proj(left, u) {
                left = (left + 1) % m;
            }
        }
        let width = proj(right, u) - proj(left, u);
        let height = proj(top, v) - proj(i, v);
        let area = width * height;

        let mut angle = e.y.atan2(e.x) % quarter;
        if angle < T::zero() {
            angle = angle + quarter;
        }
        if angle >= quarter - tie {
            angle = T::zero();
        }
        best = match best {
            None => Some((area, angle)),
            Some((ba, bt)) => {
                let scale = ba.max(area);
                if area < ba - tie * scale || ((area - ba).abs() <= tie * scale && angle < bt) {
                    Some((area, angle))
                } else {
                    Some((ba, bt))
                }
            }
        };
    }
    let (_, angle) = best.expect("non-degenerate hull has edges");
    Ok(rect_along(h, angle))
}

/// Tightest rectangle around `pts` with sides along `angle` and its normal.
pub(crate) fn rect_along<T: Scalar>(pts: &[Point2<T>], angle: T) -> Obb<T> {
    let (s, c) = angle.sin_cos();
    let d = Point2::new(c, s);
    let n = d.perp();
    let (mut a0, mut a1, mut b0, mut b1) = (T::infinity(), T::neg_infinity(), T::infinity(), T::neg_infinity());
    for &p in pts {
        let a = p.dot(d);
        let b = p.dot(n);
        a0 = a0.min(a);
        a1 = a1.max(a);
        b0 = b0.min(b);
        b1 = b1.max(b);
    }
    Obb::from_corners_unchecked([d * a0 + n * b0, d * a1 + n * b0, d * a1 + n * b1, d * a0 + n * b1])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::obb::aligned_corner_distance;
    use std::f64::consts::{FRAC_PI_4, SQRT_2};

    fn pts(v: &[(f64, f64)]) -> Vec<Point2<f64>> {
        v.iter().map(|&(x, y)| Point2::new(x, y)).collect()
    }

    #[test]
    fn axis_aligned_square() {
        let r = min_area_rect(&pts(&[(0.0, 0.0), (2.0, 0.0), (2.0, 2.0), (0.0, 2.0)])).unwrap();
        assert_eq!(r.edge_angle(), 0.0);
        assert!(
            aligned_corner_distance(
                r.corners(),
                &[Point2::new(0.0, 0.0), Point2::new(2.0, 0.0), Point2::new(2.0, 2.0), Point2::new(0.0, 2.0),]
            ) < 1e-12
        );
    }

    #[test]
    fn diamond() {
        let r = min_area_rect(&pts(&[(0.0, 1.0), (1.0, 0.0), (2.0, 1.0), (1.0, 2.0)])).unwrap();
        assert!((r.edge_angle() - FRAC_PI_4).abs() < 1e-12);
        let c = r.center();
        assert!((c.x - 1.0).abs() < 1e-12 && (c.y - 1.0).abs() < 1e-12);
        let fp = r.to_five_param().unwrap();
        assert!((fp.w - SQRT_2).abs() < 1e-12 && (fp.h - SQRT_2).abs() < 1e-12);
        assert!((r.area() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn collinear_rejected() {
        assert_eq!(min_area_rect(&pts(&[(0.0, 0.0), (1.0, 1.0), (2.0, 2.0)])).unwrap_err(), Error::DegenerateHull);
        assert_eq!(min_area_rect::<f64>(&[]).unwrap_err(), Error::EmptyInput);
    }

    #[test]
    fn triangle_rectangle_contains_triangle() {
        let t = pts(&[(0.0, 0.0), (4.0, 0.0), (1.0, 3.0)]);
        let r = min_area_rect(&t).unwrap();
        let poly = r.polygon();
        for p in &t {
            assert!(poly.contains(*p));
        }
        // a triangle's minimal rectangle has exactly twice its area
        assert!((r.area() - 12.0).abs() < 1e-9);
    }
}
