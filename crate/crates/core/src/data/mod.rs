//! Ground-truth and detection records, their text formats, and synthetic
//! scene generation.

mod io;
mod synth;

pub use io::{
    format_annotation, format_detection, parse_annotations, parse_detections, parse_points, read_annotation_dir,
    read_annotations, read_detections, write_annotation_dir, write_annotations, write_detections, IO_RECT_TOL,
};
pub use synth::{
    generate_synthetic, jitter_obb, perfect_detections, synthetic_proposals, SyntheticDataset, SyntheticSceneConfig,
};

use std::collections::BTreeMap;

use crate::geom::Obb;
use crate::pipeline::Detection;
use crate::sampler::DatasetIndex;

/// One ground-truth object.
#[derive(Debug, Clone, PartialEq)]
pub struct Annotation<T> {
    pub image: String,
    pub category: String,
    pub obb: Obb<T>,
    pub difficult: bool,
}

/// A detection tied to the image it was made on.
#[derive(Debug, Clone, PartialEq)]
pub struct DetectionRecord<T> {
    pub image: String,
    pub det: Detection<T>,
}

/// Category sets per image, images in sorted id order.
pub fn dataset_index<T>(images: &[String], annotations: &[Annotation<T>]) -> DatasetIndex {
    let mut by_image: BTreeMap<&str, Vec<&str>> = images.iter().map(|i| (i.as_str(), Vec::new())).collect();
    for a in annotations {
        by_image.entry(a.image.as_str()).or_default().push(a.category.as_str());
    }
    let mut ds = DatasetIndex::default();
    for (img, cats) in by_image {
        ds.push(img, cats);
    }
    ds
}
