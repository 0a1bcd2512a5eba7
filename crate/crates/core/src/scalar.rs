//! Scalar abstraction shared by every geometric routine.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating point type the geometry kernels are generic over.
///
/// Besides the arithmetic from `num_traits`, each implementor carries the
/// tolerances the predicates use, since what counts as "coincident" depends
/// on the precision of the representation.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + ToPrimitive + Sum + Debug + Display + Default + Send + Sync + 'static
{
    /// Absolute tolerance of geometric predicates, in coordinate units.
    fn geom_eps() -> Self;

    /// Relative tolerance for rectangle checks (perpendicularity and
    /// opposite-edge lengths).
    fn rect_tol() -> Self;

    /// Distance to a combinatorial boundary below which analytic
    /// gradients are reported as unreliable.
    fn smooth_eps() -> Self;

    /// Area substituted for a degenerate hull in ratio computations.
    fn area_floor() -> Self;

    #[inline]
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("literal representable in scalar type")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("scalar convertible to f64")
    }
}

impl Scalar for f64 {
    fn geom_eps() -> Self {
        1e-9
    }
    fn rect_tol() -> Self {
        1e-6
    }
    fn smooth_eps() -> Self {
        1e-7
    }
    fn area_floor() -> Self {
        1e-9
    }
}

impl Scalar for f32 {
    fn geom_eps() -> Self {
        1e-4
    }
    fn rect_tol() -> Self {
        1e-3
    }
    fn smooth_eps() -> Self {
        1e-3
    }
    fn area_floor() -> Self {
        1e-6
    }
}

/// Pairwise (cascade) summation; order-stable for a fixed input order.
pub fn pairwise_sum<T: Scalar>(values: &[T]) -> T {
    const LEAF: usize = 8;
    if values.len() <= LEAF {
        return values.iter().fold(T::zero(), |acc, &v| acc + v);
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}
