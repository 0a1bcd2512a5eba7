use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point2<T> {
    pub x: T,
    pub y: T,
}

impl<T: Scalar> Point2<T> {
    #[inline]
    pub fn new(x: T, y: T) -> Self {
        Self { x, y }
    }

    pub fn from_f64(x: f64, y: f64) -> Self {
        Self::new(T::lit(x), T::lit(y))
    }

    #[inline]
    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    #[inline]
    pub fn dot(self, o: Self) -> T {
        self.x * o.x + self.y * o.y
    }

    /// z-component of the 3-D cross product.
    #[inline]
    pub fn cross(self, o: Self) -> T {
        self.x * o.y - self.y * o.x
    }

    #[inline]
    pub fn norm(self) -> T {
        self.x.hypot(self.y)
    }

    #[inline]
    pub fn dist(self, o: Self) -> T {
        (self - o).norm()
    }

    /// Counter-clockwise quarter turn.
    #[inline]
    pub fn perp(self) -> Self {
        Self::new(-self.y, self.x)
    }

    pub fn rotate(self, angle: T) -> Self {
        let (s, c) = angle.sin_cos();
        Self::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }

    pub fn cast<U: Scalar>(self) -> Point2<U> {
        Point2::new(U::lit(self.x.as_f64()), U::lit(self.y.as_f64()))
    }
}

/// Twice the signed area of triangle (a, b, c); positive when CCW.
#[inline]
pub fn orient<T: Scalar>(a: Point2<T>, b: Point2<T>, c: Point2<T>) -> T {
    (b - a).cross(c - a)
}

/// Signed distance of `p` from the directed line a→b (positive on the left).
/// Returns the plain distance to `a` when the segment is degenerate.
pub fn line_distance<T: Scalar>(a: Point2<T>, b: Point2<T>, p: Point2<T>) -> T {
    let len = a.dist(b);
    if len <= T::zero() {
        return a.dist(p);
    }
    orient(a, b, p) / len
}

/// Distance from `p` to the closed segment a-b.
pub fn segment_distance<T: Scalar>(a: Point2<T>, b: Point2<T>, p: Point2<T>) -> T {
    let d = b - a;
    let len2 = d.dot(d);
    if len2 <= T::zero() {
        return a.dist(p);
    }
    let t = ((p - a).dot(d) / len2).max(T::zero()).min(T::one());
    (a + d * t).dist(p)
}

pub fn check_finite<T: Scalar>(points: &[Point2<T>]) -> Result<()> {
    if points.iter().all(Point2::is_finite) {
        Ok(())
    } else {
        Err(Error::InvalidCoordinate)
    }
}

impl<T: Scalar> Add for Point2<T> {
    type Output = Self;
    #[inline]
    fn add(self, o: Self) -> Self {
        Self::new(self.x + o.x, self.y + o.y)
    }
}

impl<T: Scalar> Sub for Point2<T> {
    type Output = Self;
    #[inline]
    fn sub(self, o: Self) -> Self {
        Self::new(self.x - o.x, self.y - o.y)
    }
}

impl<T: Scalar> Mul<T> for Point2<T> {
    type Output = Self;
    #[inline]
    fn mul(self, k: T) -> Self {
        Self::new(self.x * k, self.y * k)
    }
}

impl<T: Scalar> Neg for Point2<T> {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y)
    }
}

impl<T: Scalar> From<(T, T)> for Point2<T> {
    fn from((x, y): (T, T)) -> Self {
        Self::new(x, y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orientation_sign() {
        let a = Point2::new(0.0, 0.0);
        let b = Point2::new(1.0, 0.0);
        assert!(orient(a, b, Point2::new(0.0, 1.0)) > 0.0);
        assert!(orient(a, b, Point2::new(0.0, -1.0)) < 0.0);
        assert_eq!(line_distance(a, b, Point2::new(3.0, 2.0)), 2.0);
    }

    #[test]
    fn segment_distance_clamps() {
        let a = Point2::new(0.0, 0.0);
        let b = Point2::new(1.0, 0.0);
        assert_eq!(segment_distance(a, b, Point2::new(2.0, 0.0)), 1.0);
        assert_eq!(segment_distance(a, b, Point2::new(0.5, 0.5)), 0.5);
    }
}
