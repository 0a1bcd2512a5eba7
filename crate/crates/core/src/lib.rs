//! Angle-free rotated object geometry.
//!
//! Representative point sets are turned into convex hulls and minimum-area
//! rectangles; convex-hull GIoU (with analytic gradients), focal,
//! cross-entropy and corner-permutation losses score them; assignment,
//! repeat-factor resampling, rotated NMS and VOC-style evaluation complete
//! the detection pipeline.
//!
//! Every geometric type is generic over [`Scalar`] (`f64` or `f32`); the
//! aliases below fix the common choices.

// `!(x > 0)` is deliberate throughout: NaN must fail validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod assign;
pub mod data;
pub mod error;
pub mod eval;
pub mod geom;
pub mod losses;
pub mod pipeline;
pub mod sampler;
pub mod scalar;

pub use error::{Error, Result};
pub use geom::{ConvexPolygon, FiveParam, Obb, Point2};
pub use scalar::Scalar;

pub type Point2d = Point2<f64>;
pub type Point2f = Point2<f32>;
pub type Obbd = Obb<f64>;
pub type Obbf = Obb<f32>;
pub type FiveParamd = FiveParam<f64>;
pub type FiveParamf = FiveParam<f32>;
pub type ConvexPolygond = ConvexPolygon<f64>;
pub type ConvexPolygonf = ConvexPolygon<f32>;
pub type RepPointsd = losses::RepPoints<f64>;
pub type RepPointsf = losses::RepPoints<f32>;
pub type CornerSetd = losses::CornerSet<f64>;
pub type Detectiond = pipeline::Detection<f64>;
pub type Annotationd = data::Annotation<f64>;
