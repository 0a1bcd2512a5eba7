//! Planar convex geometry: hulls, clipping, oriented boxes.

mod hull;
mod obb;
mod point;
mod polygon;
mod rect;

pub use hull::{convex_hull, hull_indices};
pub use obb::{aligned_corner_distance, decode, encode, obb_iou, wrap_half_pi, FiveParam, Obb};
pub use point::{line_distance, orient, segment_distance, Point2};
pub use polygon::{convex_intersect, intersection_area, polygon_area, polygon_iou, ConvexPolygon};
pub use rect::min_area_rect;

pub(crate) use point::check_finite;
