//! Oriented boxes: the four-corner form, the five-parameter
//! `(cx, cy, w, h, theta)` form, and the conversion between them.

use crate::error::{Error, Result};
use crate::geom::point::{check_finite, Point2};
use crate::geom::polygon::{polygon_area, polygon_iou, ConvexPolygon};
use crate::scalar::Scalar;

/// Rectangle given by four counter-clockwise corners.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Obb<T> {
    corners: [Point2<T>; 4],
}

/// Five-parameter box. `w` is the shorter edge, `h` the longer, and
/// `theta` the angle of the longer edge against +x in `[-pi/2, pi/2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FiveParam<T> {
    pub cx: T,
    pub cy: T,
    pub w: T,
    pub h: T,
    pub theta: T,
}

impl<T: Scalar> Obb<T> {
    /// Accepts corners in either winding and stores them counter-clockwise,
    /// keeping the first corner in place.
    pub fn new(corners: [Point2<T>; 4]) -> Result<Self> {
        Self::with_tolerance(corners, T::rect_tol())
    }

    /// [`Obb::new`] with a caller-chosen relative rectangle tolerance.
    pub fn with_tolerance(corners: [Point2<T>; 4], tol: T) -> Result<Self> {
        check_finite(&corners)?;
        let mut c = corners;
        let signed = polygon_area(&c);
        if signed.abs() <= T::geom_eps() {
            return Err(Error::DegenerateBox);
        }
        if signed < T::zero() {
            c.swap(1, 3);
        }
        let e: [Point2<T>; 4] = std::array::from_fn(|i| c[(i + 1) % 4] - c[i]);
        let len: [T; 4] = std::array::from_fn(|i| e[i].norm());
        if len.iter().any(|&l| l <= T::geom_eps()) {
            return Err(Error::DegenerateBox);
        }
        for i in 0..4 {
            let j = (i + 1) % 4;
            if (e[i].dot(e[j]) / (len[i] * len[j])).abs() > tol {
                return Err(Error::NotRectangle("adjacent edges not perpendicular"));
            }
        }
        for i in 0..2 {
            let (a, b) = (len[i], len[i + 2]);
            if (a - b).abs() > tol * a.max(b) {
                return Err(Error::NotRectangle("opposite edges differ in length"));
            }
        }
        Ok(Self { corners: c })
    }

    /// Axis-aligned box from its min and max corners.
    pub fn axis_aligned(x0: T, y0: T, x1: T, y1: T) -> Result<Self> {
        Self::new([Point2::new(x0, y0), Point2::new(x1, y0), Point2::new(x1, y1), Point2::new(x0, y1)])
    }

    pub(crate) fn from_corners_unchecked(corners: [Point2<T>; 4]) -> Self {
        Self { corners }
    }

    pub fn corners(&self) -> &[Point2<T>; 4] {
        &self.corners
    }

    pub fn polygon(&self) -> ConvexPolygon<T> {
        ConvexPolygon::from_parts(self.corners.to_vec(), false)
    }

    pub fn area(&self) -> T {
        polygon_area(&self.corners).abs()
    }

    /// Axis-aligned bounds as (min, max).
    pub fn bounds(&self) -> (Point2<T>, Point2<T>) {
        let c = &self.corners;
        let lo = c.iter().fold(c[0], |m, p| Point2::new(m.x.min(p.x), m.y.min(p.y)));
        let hi = c.iter().fold(c[0], |m, p| Point2::new(m.x.max(p.x), m.y.max(p.y)));
        (lo, hi)
    }

    pub fn center(&self) -> Point2<T> {
        let s = self.corners.iter().fold(Point2::default(), |a, &c| a + c);
        s * T::lit(0.25)
    }

    /// Angle of the first edge (corner 0 to corner 1) against +x.
    pub fn edge_angle(&self) -> T {
        let e = self.corners[1] - self.corners[0];
        e.y.atan2(e.x)
    }

    pub fn translate(&self, d: Point2<T>) -> Self {
        Self::from_corners_unchecked(self.corners.map(|c| c + d))
    }

    /// Rigid rotation about `pivot`.
    pub fn rotate_about(&self, pivot: Point2<T>, angle: T) -> Self {
        Self::from_corners_unchecked(self.corners.map(|c| pivot + (c - pivot).rotate(angle)))
    }

    pub fn to_five_param(&self) -> Result<FiveParam<T>> {
        encode(self)
    }

    pub fn cast<U: Scalar>(&self) -> Obb<U> {
        Obb::from_corners_unchecked(self.corners.map(Point2::cast))
    }
}

impl<T: Scalar> FiveParam<T> {
    pub fn to_obb(&self) -> Result<Obb<T>> {
        decode(self)
    }
}

/// Wraps an angle into `[-pi/2, pi/2)`.
pub fn wrap_half_pi<T: Scalar>(theta: T) -> T {
    let pi = T::PI();
    let half = T::FRAC_PI_2();
    let mut t = theta - pi * ((theta + half) / pi).floor();
    // floor can land one period off through rounding near the boundary
    if t >= half {
        t = t - pi;
    }
    if t < -half {
        t = t + pi;
    }
    t
}

/// Box to `(cx, cy, w, h, theta)`.
///
/// For a square both edge directions qualify as "longer"; the one whose
/// angle falls in `[-pi/4, pi/4)` is chosen.
pub fn encode<T: Scalar>(obb: &Obb<T>) -> Result<FiveParam<T>> {
    let c = &obb.corners;
    if obb.area() <= T::geom_eps() {
        return Err(Error::DegenerateBox);
    }
    let half = T::lit(0.5);
    let e0 = c[1] - c[0];
    let e1 = c[2] - c[1];
    let l0 = (e0.norm() + (c[3] - c[2]).norm()) * half;
    let l1 = (e1.norm() + (c[0] - c[3]).norm()) * half;
    let a0 = wrap_half_pi(e0.y.atan2(e0.x));
    let a1 = wrap_half_pi(e1.y.atan2(e1.x));
    let center = obb.center();

    let square = (l0 - l1).abs() <= T::rect_tol() * l0.max(l1);
    let quarter = T::FRAC_PI_4();
    let theta = if square {
        if a0 >= -quarter && a0 < quarter {
            a0
        } else {
            a1
        }
    } else if l0 > l1 {
        a0
    } else {
        a1
    };
    let (w, h) = if square {
        (l0.min(l1), l0.max(l1))
    } else if l0 > l1 {
        (l1, l0)
    } else {
        (l0, l1)
    };
    Ok(FiveParam { cx: center.x, cy: center.y, w, h, theta })
}

/// `(cx, cy, w, h, theta)` back to corners, CCW, starting at the corner
/// behind the centre along the long axis and to its right.
pub fn decode<T: Scalar>(fp: &FiveParam<T>) -> Result<Obb<T>> {
    if !(fp.cx.is_finite() && fp.cy.is_finite() && fp.w.is_finite() && fp.h.is_finite() && fp.theta.is_finite()) {
        return Err(Error::InvalidCoordinate);
    }
    if fp.w <= T::zero() || fp.h <= T::zero() {
        return Err(Error::DegenerateBox);
    }
    let half = T::lit(0.5);
    let (s, c) = fp.theta.sin_cos();
    let along = Point2::new(c, s) * (fp.h * half);
    let across = Point2::new(-s, c) * (fp.w * half);
    let ctr = Point2::new(fp.cx, fp.cy);
    Ok(Obb::from_corners_unchecked([
        ctr - along - across,
        ctr + along - across,
        ctr + along + across,
        ctr - along + across,
    ]))
}

/// Rotated-box IoU through convex polygon intersection.
pub fn obb_iou<T: Scalar>(a: &Obb<T>, b: &Obb<T>) -> T {
    let (amin, amax) = a.bounds();
    let (bmin, bmax) = b.bounds();
    if amax.x <= bmin.x || bmax.x <= amin.x || amax.y <= bmin.y || bmax.y <= amin.y {
        return T::zero();
    }
    polygon_iou(&a.polygon(), &b.polygon())
}

/// Largest corner distance after the best cyclic relabelling of `b`.
pub fn aligned_corner_distance<T: Scalar>(a: &[Point2<T>; 4], b: &[Point2<T>; 4]) -> T {
    (0..4)
        .map(|shift| (0..4).map(|i| a[i].dist(b[(i + shift) % 4])).fold(T::zero(), T::max))
        .fold(T::infinity(), T::min)
}
