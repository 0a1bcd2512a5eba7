//! Analytic gradient of the hull GIoU with respect to the prediction points.
//!
//! The objective is `I/U - 1 + U/P` where `I` is the intersection area, `U`
//! the union and `P` the enclosing hull area. Each area is a shoelace sum
//! over vertices whose provenance is tracked: a vertex is either a
//! prediction point, a target corner (constant), or the crossing of a
//! prediction edge with a target edge. Crossings move along the fixed target
//! edge, so their derivative is the derivative of the crossing parameter
//! times that edge vector.

use crate::error::{Error, Result};
use crate::geom::{check_finite, hull_indices, line_distance, segment_distance, Obb, Point2};
use crate::losses::ciou;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GradSource {
    Analytic,
    FiniteDifference,
}

#[derive(Clone, Copy)]
enum Origin {
    /// Vertex `k` of the prediction hull.
    Pred(usize),
    Target,
    /// Crossing of prediction hull edge `k` (k to k+1) with target edge `j`.
    Cross(usize, usize),
}

/// d(shoelace area)/d(vertex) for every vertex of a CCW ring.
fn area_grads<T: Scalar>(ring: &[Point2<T>]) -> Vec<Point2<T>> {
    let n = ring.len();
    let half = T::lit(0.5);
    (0..n)
        .map(|i| {
            let prev = ring[(i + n - 1) % n];
            let next = ring[(i + 1) % n];
            Point2::new((next.y - prev.y) * half, (prev.x - next.x) * half)
        })
        .collect()
}

fn shoelace<T: Scalar>(ring: &[Point2<T>]) -> T {
    let n = ring.len();
    if n < 3 {
        return T::zero();
    }
    (0..n).map(|i| ring[i].cross(ring[(i + 1) % n])).sum::<T>() * T::lit(0.5)
}

fn dist_to_ring<T: Scalar>(ring: &[Point2<T>], p: Point2<T>) -> T {
    let n = ring.len();
    (0..n).map(|i| segment_distance(ring[i], ring[(i + 1) % n], p)).fold(T::infinity(), T::min)
}

/// Flags hull vertices that are almost collinear with their neighbours and
/// non-hull points that are almost on the hull boundary.
fn hull_is_stable<T: Scalar>(points: &[Point2<T>], hull: &[usize], tol: T) -> bool {
    let ring: Vec<Point2<T>> = hull.iter().map(|&i| points[i]).collect();
    let m = ring.len();
    for k in 0..m {
        let (prev, cur, next) = (ring[(k + m - 1) % m], ring[k], ring[(k + 1) % m]);
        if line_distance(prev, next, cur).abs() < tol {
            return false;
        }
    }
    let mut on_hull = vec![false; points.len()];
    for &i in hull {
        on_hull[i] = true;
    }
    points.iter().enumerate().filter(|(i, _)| !on_hull[*i]).all(|(_, &p)| dist_to_ring(&ring, p) >= tol)
}

/// Gradient of [`ciou`] with respect to each prediction coordinate, laid
/// out as `[dx0, dy0, dx1, dy1, ...]`.
///
/// Points strictly inside the prediction hull get a zero gradient. Returns
/// `Error::NearNonSmooth` when any point is within `Scalar::smooth_eps()`
/// of a change in hull membership or in the intersection's vertex
/// structure, and `Error::DegenerateHull` for a hull without area.
pub fn grad_ciou<T: Scalar>(pred: &[Point2<T>], target: &Obb<T>) -> Result<Vec<T>> {
    if pred.len() < 3 {
        return Err(Error::PointCount { expected: 3, got: pred.len() });
    }
    check_finite(pred)?;
    let tol = T::smooth_eps();
    let (hidx, degenerate) = hull_indices(pred);
    if degenerate {
        return Err(Error::DegenerateHull);
    }
    if !hull_is_stable(pred, &hidx, tol) {
        return Err(Error::NearNonSmooth);
    }
    let a: Vec<Point2<T>> = hidx.iter().map(|&i| pred[i]).collect();
    let b: &[Point2<T>; 4] = target.corners();
    let m = a.len();

    // intersection polygon with provenance
    let mut verts: Vec<(Point2<T>, Origin)> = Vec::new();
    for (k, &p) in a.iter().enumerate() {
        let d = (0..4).map(|j| line_distance(b[j], b[(j + 1) % 4], p)).fold(T::infinity(), T::min);
        if d.abs() < tol || dist_to_ring(b, p) < tol {
            return Err(Error::NearNonSmooth);
        }
        if d > T::zero() {
            verts.push((p, Origin::Pred(k)));
        }
    }
    for &q in b.iter() {
        let d = (0..m).map(|k| line_distance(a[k], a[(k + 1) % m], q)).fold(T::infinity(), T::min);
        if d.abs() < tol || dist_to_ring(&a, q) < tol {
            return Err(Error::NearNonSmooth);
        }
        if d > T::zero() {
            verts.push((q, Origin::Target));
        }
    }
    for k in 0..m {
        let (p1, p2) = (a[k], a[(k + 1) % m]);
        let da = p2 - p1;
        for j in 0..4 {
            let (q1, q2) = (b[j], b[(j + 1) % 4]);
            let eb = q2 - q1;
            let den = da.cross(eb);
            if den.abs() <= T::epsilon() * da.norm() * eb.norm() {
                // parallel edges: only a problem when they overlap
                if line_distance(q1, q2, p1).abs() < tol {
                    return Err(Error::NearNonSmooth);
                }
                continue;
            }
            let w = q1 - p1;
            let t = w.cross(eb) / den;
            let s = w.cross(da) / den;
            if t > T::zero() && t < T::one() && s > T::zero() && s < T::one() {
                verts.push((p1 + da * t, Origin::Cross(k, j)));
            }
        }
    }

    let mut grad = vec![Point2::<T>::default(); pred.len()];

    // intersection area and its gradient
    let mut inter = T::zero();
    let mut g_inter = vec![Point2::<T>::default(); pred.len()];
    if verts.len() >= 3 {
        let n = T::from_usize(verts.len()).unwrap();
        let c = verts.iter().fold(Point2::default(), |acc, (p, _)| acc + *p) * (T::one() / n);
        verts.sort_by(|(p, _), (q, _)| {
            let ap = (p.y - c.y).atan2(p.x - c.x);
            let aq = (q.y - c.y).atan2(q.x - c.x);
            ap.partial_cmp(&aq).unwrap()
        });
        let ring: Vec<Point2<T>> = verts.iter().map(|(p, _)| *p).collect();
        inter = shoelace(&ring).max(T::zero());
        for ((_, origin), gv) in verts.iter().zip(area_grads(&ring)) {
            match *origin {
                Origin::Pred(k) => {
                    let slot = &mut g_inter[hidx[k]];
                    *slot = *slot + gv;
                }
                Origin::Target => {}
                Origin::Cross(k, j) => {
                    let (p1, p2) = (a[k], a[(k + 1) % m]);
                    let q1 = b[j];
                    let e = b[(j + 1) % 4] - q1;
                    let d = p2 - p1;
                    // crossing = q1 + s e with s = N / D
                    let num = (p1 - q1).cross(d);
                    let den = e.cross(d);
                    let dn_p1 = Point2::new(p2.y - q1.y, q1.x - p2.x);
                    let dn_p2 = Point2::new(q1.y - p1.y, p1.x - q1.x);
                    let dd_p1 = Point2::new(e.y, -e.x);
                    let dd_p2 = Point2::new(-e.y, e.x);
                    let inv = T::one() / (den * den);
                    let ds_p1 = (dn_p1 * den - dd_p1 * num) * inv;
                    let ds_p2 = (dn_p2 * den - dd_p2 * num) * inv;
                    let along = gv.dot(e);
                    let s1 = &mut g_inter[hidx[k]];
                    *s1 = *s1 + ds_p1 * along;
                    let s2 = &mut g_inter[hidx[(k + 1) % m]];
                    *s2 = *s2 + ds_p2 * along;
                }
            }
        }
    }

    // prediction hull area
    let pred_area = shoelace(&a);
    let mut g_pred = vec![Point2::<T>::default(); pred.len()];
    for (k, gv) in area_grads(&a).into_iter().enumerate() {
        g_pred[hidx[k]] = gv;
    }

    // enclosing hull over prediction hull vertices and target corners
    let mut all: Vec<Point2<T>> = a.clone();
    all.extend_from_slice(b);
    let (eidx, _) = hull_indices(&all);
    if !hull_is_stable(&all, &eidx, tol) {
        return Err(Error::NearNonSmooth);
    }
    let ering: Vec<Point2<T>> = eidx.iter().map(|&i| all[i]).collect();
    let enclosing = shoelace(&ering);
    let mut g_enc = vec![Point2::<T>::default(); pred.len()];
    for (r, gv) in area_grads(&ering).into_iter().enumerate() {
        if eidx[r] < m {
            g_enc[hidx[eidx[r]]] = gv;
        }
    }

    let union = pred_area + target.area() - inter;
    let c_inter = T::one() / union + inter / (union * union) - T::one() / enclosing;
    let c_pred = T::one() / enclosing - inter / (union * union);
    let c_enc = -union / (enclosing * enclosing);
    for i in 0..pred.len() {
        grad[i] = g_inter[i] * c_inter + g_pred[i] * c_pred + g_enc[i] * c_enc;
    }
    Ok(grad.into_iter().flat_map(|g| [g.x, g.y]).collect())
}

/// Central finite-difference gradient of [`ciou`] with step `h`.
pub fn fd_grad_ciou<T: Scalar>(pred: &[Point2<T>], target: &Obb<T>, h: T) -> Vec<T> {
    let mut work = pred.to_vec();
    let two_h = h + h;
    let mut out = Vec::with_capacity(pred.len() * 2);
    for i in 0..pred.len() {
        for axis in 0..2 {
            let orig = work[i];
            let bump =
                |p: Point2<T>, d: T| if axis == 0 { Point2::new(p.x + d, p.y) } else { Point2::new(p.x, p.y + d) };
            work[i] = bump(orig, h);
            let up = ciou(&work, target);
            work[i] = bump(orig, -h);
            let down = ciou(&work, target);
            work[i] = orig;
            out.push((up - down) / two_h);
        }
    }
    out
}

/// Largest per-component relative difference between two gradients. Each
/// component is scaled by the larger magnitude of the pair, floored at 1e-3
/// of the largest reference component so that zeros compare absolutely.
pub fn grad_relative_error<T: Scalar>(analytic: &[T], reference: &[T]) -> T {
    let scale = reference.iter().fold(T::zero(), |m, v| m.max(v.abs()));
    let floor = (T::lit(1e-3) * scale).max(T::lit(1e-12));
    analytic
        .iter()
        .zip(reference)
        .map(|(&a, &f)| (a - f).abs() / a.abs().max(f.abs()).max(floor))
        .fold(T::zero(), T::max)
}

/// Analytic gradient, falling back to central differences (step `h`) near
/// non-smooth configurations.
pub fn grad_ciou_or_fd<T: Scalar>(pred: &[Point2<T>], target: &Obb<T>, h: T) -> Result<(Vec<T>, GradSource)> {
    match grad_ciou(pred, target) {
        Ok(g) => Ok((g, GradSource::Analytic)),
        Err(Error::NearNonSmooth) => Ok((fd_grad_ciou(pred, target, h), GradSource::FiniteDifference)),
        Err(e) => Err(e),
    }
}
