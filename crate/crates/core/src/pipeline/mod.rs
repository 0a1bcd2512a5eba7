//! Desk-scale end-to-end procedures built from the geometry and losses.

mod boundary;
mod fit;
mod nms;

pub use boundary::{boundary_demo, boundary_demo_with, BoundaryConfig, BoundaryReport, BoundaryRow};
pub use fit::{fit_points, random_fit_problem, FitConfig, FitResult, FitStep, GradMode};
pub use nms::rotated_nms;

use crate::error::{Error, Result};
use crate::geom::{min_area_rect, Obb};
use crate::losses::RepPoints;
use crate::scalar::Scalar;

/// A scored, categorised rotated box.
#[derive(Debug, Clone, PartialEq)]
pub struct Detection<T> {
    pub obb: Obb<T>,
    pub category: String,
    pub score: T,
}

impl<T: Scalar> Detection<T> {
    pub fn new(obb: Obb<T>, category: impl Into<String>, score: T) -> Result<Self> {
        if !(score.is_finite() && score >= T::zero() && score <= T::one()) {
            return Err(Error::InvalidConfig(format!("score {score} outside [0, 1]")));
        }
        Ok(Self { obb, category: category.into(), score })
    }
}

/// Rotated proposal from a point set: its minimum-area rectangle.
pub fn points_to_pseudo_obb<T: Scalar>(r: &RepPoints<T>) -> Result<Obb<T>> {
    min_area_rect(r.points())
}
