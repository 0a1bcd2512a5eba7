use crate::error::{Error, Result};
use crate::geom::hull::convex_hull;
use crate::geom::point::{check_finite, line_distance, orient, Point2};
use crate::scalar::Scalar;

/// Convex polygon with counter-clockwise vertices.
///
/// Built by [`convex_hull`], [`ConvexPolygon::new`] or [`convex_intersect`];
/// a hull of collinear points is kept as a flagged degenerate polygon.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexPolygon<T> {
    vertices: Vec<Point2<T>>,
    degenerate: bool,
}

impl<T: Scalar> ConvexPolygon<T> {
    /// Validates that `vertices` already describe a strictly convex CCW
    /// polygon (no collinear or repeated vertices).
    pub fn new(vertices: Vec<Point2<T>>) -> Result<Self> {
        check_finite(&vertices)?;
        if vertices.len() < 3 {
            return Err(Error::NotConvex);
        }
        let eps = T::geom_eps();
        let n = vertices.len();
        for i in 0..n {
            let (a, b, c) = (vertices[i], vertices[(i + 1) % n], vertices[(i + 2) % n]);
            if a.dist(b) <= eps || line_distance(a, b, c) <= eps {
                return Err(Error::NotConvex);
            }
        }
        // a star polygon passes the local turn test but winds more than once
        let hull = convex_hull(&vertices)?;
        if hull.len() != n {
            return Err(Error::NotConvex);
        }
        Ok(Self { vertices, degenerate: false })
    }

    pub(crate) fn from_parts(vertices: Vec<Point2<T>>, degenerate: bool) -> Self {
        Self { vertices, degenerate }
    }

    pub fn vertices(&self) -> &[Point2<T>] {
        &self.vertices
    }

    pub fn into_vertices(self) -> Vec<Point2<T>> {
        self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn is_degenerate(&self) -> bool {
        self.degenerate
    }

    pub fn edges(&self) -> impl Iterator<Item = (Point2<T>, Point2<T>)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    /// Shoelace area; zero for degenerate polygons.
    pub fn area(&self) -> T {
        if self.degenerate {
            return T::zero();
        }
        polygon_area(&self.vertices).abs()
    }

    /// Point inside or on the boundary (within `geom_eps`).
    pub fn contains(&self, p: Point2<T>) -> bool {
        if self.degenerate {
            return false;
        }
        let eps = T::geom_eps();
        self.edges().all(|(a, b)| line_distance(a, b, p) >= -eps)
    }

    pub fn centroid(&self) -> Point2<T> {
        let n = T::from_usize(self.vertices.len()).unwrap();
        let s = self.vertices.iter().fold(Point2::new(T::zero(), T::zero()), |acc, &v| acc + v);
        Point2::new(s.x / n, s.y / n)
    }
}

/// Signed shoelace area of a closed vertex ring (positive when CCW).
pub fn polygon_area<T: Scalar>(vertices: &[Point2<T>]) -> T {
    let n = vertices.len();
    if n < 3 {
        return T::zero();
    }
    let twice: T = (0..n).map(|i| vertices[i].cross(vertices[(i + 1) % n])).sum();
    twice / T::lit(2.0)
}

/// Intersection of two convex polygons by Sutherland-Hodgman clipping of
/// `a` against each edge of `b`. `None` when the overlap has no area.
pub fn convex_intersect<T: Scalar>(a: &ConvexPolygon<T>, b: &ConvexPolygon<T>) -> Option<ConvexPolygon<T>> {
    if a.degenerate || b.degenerate {
        return None;
    }
    let mut out: Vec<Point2<T>> = a.vertices.clone();
    for (e0, e1) in b.edges() {
        if out.is_empty() {
            break;
        }
        let input = std::mem::take(&mut out);
        let m = input.len();
        for i in 0..m {
            let cur = input[i];
            let prev = input[(i + m - 1) % m];
            let dc = orient(e0, e1, cur);
            let dp = orient(e0, e1, prev);
            let cur_in = dc >= T::zero();
            let prev_in = dp >= T::zero();
            if cur_in {
                if !prev_in {
                    out.push(crossing(prev, cur, dp, dc));
                }
                out.push(cur);
            } else if prev_in {
                out.push(crossing(prev, cur, dp, dc));
            }
        }
    }
    let cleaned = cleanup(out);
    if cleaned.len() < 3 || polygon_area(&cleaned) <= T::zero() {
        return None;
    }
    Some(ConvexPolygon::from_parts(cleaned, false))
}

// Point on p→q where the signed distance changes sign (dp and dc differ in sign).
fn crossing<T: Scalar>(p: Point2<T>, q: Point2<T>, dp: T, dq: T) -> Point2<T> {
    let t = dp / (dp - dq);
    p + (q - p) * t
}

/// Drops near-coincident and collinear vertices left behind by clipping.
fn cleanup<T: Scalar>(mut v: Vec<Point2<T>>) -> Vec<Point2<T>> {
    let eps = T::geom_eps();
    loop {
        let n = v.len();
        if n < 3 {
            return v;
        }
        let drop = (0..n).find(|&i| {
            let prev = v[(i + n - 1) % n];
            let cur = v[i];
            let next = v[(i + 1) % n];
            cur.dist(prev) <= eps || line_distance(prev, next, cur).abs() <= eps
        });
        match drop {
            Some(i) => {
                v.remove(i);
            }
            None => return v,
        }
    }
}

/// Area of the intersection of two convex polygons (zero when disjoint).
pub fn intersection_area<T: Scalar>(a: &ConvexPolygon<T>, b: &ConvexPolygon<T>) -> T {
    convex_intersect(a, b).map_or(T::zero(), |p| p.area())
}

/// Intersection over union of two convex polygons.
pub fn polygon_iou<T: Scalar>(a: &ConvexPolygon<T>, b: &ConvexPolygon<T>) -> T {
    let inter = intersection_area(a, b);
    let union = a.area() + b.area() - inter;
    if union <= T::zero() {
        return T::zero();
    }
    (inter / union).max(T::zero()).min(T::one())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::hull::convex_hull;

    fn poly(v: &[(f64, f64)]) -> ConvexPolygon<f64> {
        ConvexPolygon::new(v.iter().map(|&(x, y)| Point2::new(x, y)).collect()).unwrap()
    }

    fn square(x0: f64, y0: f64, s: f64) -> ConvexPolygon<f64> {
        poly(&[(x0, y0), (x0 + s, y0), (x0 + s, y0 + s), (x0, y0 + s)])
    }

    // independent check: shoelace evaluated by the trapezoid formula
    fn trapezoid_area(v: &[(f64, f64)]) -> f64 {
        let n = v.len();
        (0..n)
            .map(|i| {
                let (x0, y0) = v[i];
                let (x1, y1) = v[(i + 1) % n];
                (x1 - x0) * (y1 + y0) / 2.0
            })
            .sum::<f64>()
            .abs()
    }

    #[test]
    fn areas() {
        assert_eq!(square(0.0, 0.0, 1.0).area(), 1.0);
        assert_eq!(poly(&[(0.0, 0.0), (2.0, 0.0), (0.0, 2.0)]).area(), 2.0);
        let hex = [(0.0, 0.0), (1.0, 0.0), (3.0, 2.0), (3.0, 3.0), (2.0, 3.0), (0.0, 1.0)];
        assert_eq!(trapezoid_area(&hex), 5.0);
        assert_eq!(poly(&hex).area(), 5.0);
    }

    #[test]
    fn intersections() {
        let a = square(0.0, 0.0, 1.0);
        let same = convex_intersect(&a, &a).unwrap();
        assert_eq!(same.area(), 1.0);
        assert!(convex_intersect(&a, &square(2.0, 2.0, 1.0)).is_none());
        let q = convex_intersect(&a, &square(0.5, 0.5, 1.0)).unwrap();
        assert_eq!(q.area(), 0.25);
        assert!(polygon_area(q.vertices()) > 0.0);
        // edge contact only
        assert!(convex_intersect(&a, &square(1.0, 0.0, 1.0)).is_none());
    }

    #[test]
    fn containment_intersection() {
        let outer = square(0.0, 0.0, 10.0);
        let inner = square(2.0, 3.0, 1.0);
        assert_eq!(intersection_area(&outer, &inner), 1.0);
        assert_eq!(intersection_area(&inner, &outer), 1.0);
        assert!((polygon_iou(&outer, &inner) - 0.01).abs() < 1e-15);
    }

    #[test]
    fn new_rejects_bad_rings() {
        let cw = vec![Point2::new(0.0, 0.0), Point2::new(0.0, 1.0), Point2::new(1.0, 1.0), Point2::new(1.0, 0.0)];
        assert_eq!(ConvexPolygon::new(cw).unwrap_err(), Error::NotConvex);
        let collinear =
            vec![Point2::new(0.0, 0.0), Point2::new(1.0, 0.0), Point2::new(2.0, 0.0), Point2::new(1.0, 1.0)];
        assert_eq!(ConvexPolygon::new(collinear).unwrap_err(), Error::NotConvex);
    }

    #[test]
    fn degenerate_never_intersects() {
        let line = convex_hull(&[Point2::new(0.0, 0.0), Point2::new(1.0, 1.0)]).unwrap();
        assert!(convex_intersect(&square(0.0, 0.0, 1.0), &line).is_none());
        assert!(!line.contains(Point2::new(0.5, 0.5)));
    }
}
