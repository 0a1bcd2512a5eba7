//! Gift-wrapping (Jarvis march) convex hull.

use crate::error::{Error, Result};
use crate::geom::point::{check_finite, line_distance, Point2};
use crate::geom::polygon::ConvexPolygon;
use crate::scalar::Scalar;

/// Indices of the hull vertices of `points`, counter-clockwise, starting at
/// the lowest (then leftmost) point. Collinear runs keep only their end
/// points and coincident points (within `geom_eps`) collapse to one.
///
/// The returned flag is `true` when fewer than three hull vertices exist.
pub fn hull_indices<T: Scalar>(points: &[Point2<T>]) -> (Vec<usize>, bool) {
    let n = points.len();
    if n == 0 {
        return (Vec::new(), true);
    }
    let eps = T::geom_eps();
    let start = (0..n)
        .min_by(|&i, &j| {
            let (a, b) = (points[i], points[j]);
            a.y.partial_cmp(&b.y).unwrap().then(a.x.partial_cmp(&b.x).unwrap())
        })
        .unwrap();

    let mut hull = vec![start];
    let mut p = start;
    loop {
        let pp = points[p];
        let mut q: Option<usize> = None;
        for (r, &pr) in points.iter().enumerate() {
            if pr.dist(pp) <= eps {
                continue;
            }
            match q {
                None => q = Some(r),
                Some(qi) => {
                    let pq = points[qi];
                    let d = line_distance(pp, pq, pr);
                    if d < -eps || (d.abs() <= eps && pp.dist(pr) > pp.dist(pq)) {
                        q = Some(r);
                    }
                }
            }
        }
        let Some(q) = q else { break };
        if points[q].dist(points[start]) <= eps || hull.len() > n {
            break;
        }
        hull.push(q);
        p = q;
    }
    let degenerate = hull.len() < 3;
    (hull, degenerate)
}

/// Convex hull of a point set.
///
/// All-collinear (or all-coincident) input yields a polygon flagged
/// degenerate, holding the one or two extreme points, with zero area.
pub fn convex_hull<T: Scalar>(points: &[Point2<T>]) -> Result<ConvexPolygon<T>> {
    if points.is_empty() {
        return Err(Error::EmptyInput);
    }
    check_finite(points)?;
    let (idx, degenerate) = hull_indices(points);
    let vertices = idx.into_iter().map(|i| points[i]).collect();
    Ok(ConvexPolygon::from_parts(vertices, degenerate))
}
