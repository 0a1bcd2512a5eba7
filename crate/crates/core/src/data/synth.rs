//! Seeded synthetic scenes.

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::data::{Annotation, DetectionRecord};
use crate::error::{Error, Result};
use crate::geom::{min_area_rect, FiveParam, Obb, Point2};
use crate::pipeline::Detection;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticSceneConfig {
    pub canvas_w: f64,
    pub canvas_h: f64,
    pub images: usize,
    pub objects_per_image: usize,
    /// Relative category frequencies; category `i` is named `c{i}`.
    pub category_freq: Vec<f64>,
    /// Short-edge length range.
    pub size_min: f64,
    pub size_max: f64,
    /// Long/short edge ratio range.
    pub aspect_min: f64,
    pub aspect_max: f64,
    pub rot_min: f64,
    pub rot_max: f64,
    pub seed: u64,
}

impl Default for SyntheticSceneConfig {
    fn default() -> Self {
        Self {
            canvas_w: 512.0,
            canvas_h: 512.0,
            images: 8,
            objects_per_image: 10,
            category_freq: vec![0.6, 0.3, 0.1],
            size_min: 16.0,
            size_max: 64.0,
            aspect_min: 1.0,
            aspect_max: 3.0,
            rot_min: -std::f64::consts::FRAC_PI_2,
            rot_max: std::f64::consts::FRAC_PI_2,
            seed: 0,
        }
    }
}

impl SyntheticSceneConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidConfig(m.to_string()));
        let all = [
            self.canvas_w,
            self.canvas_h,
            self.size_min,
            self.size_max,
            self.aspect_min,
            self.aspect_max,
            self.rot_min,
            self.rot_max,
        ];
        if all.iter().any(|v| !v.is_finite()) {
            return bad("non-finite value");
        }
        if self.canvas_w <= 0.0 || self.canvas_h <= 0.0 {
            return bad("canvas must be positive");
        }
        if !(self.size_min > 0.0 && self.size_min <= self.size_max) {
            return bad("size range must be positive and nonempty");
        }
        if !(self.aspect_min >= 1.0 && self.aspect_min <= self.aspect_max) {
            return bad("aspect range must be nonempty and >= 1");
        }
        if self.rot_min > self.rot_max {
            return bad("rotation range is empty");
        }
        if self.category_freq.is_empty()
            || self.category_freq.iter().any(|f| !f.is_finite() || *f < 0.0)
            || self.category_freq.iter().sum::<f64>() <= 0.0
        {
            return bad("category frequencies must be nonnegative with a positive sum");
        }
        // the largest box must fit at any rotation
        let long = self.size_max * self.aspect_max;
        if self.size_max.hypot(long) > self.canvas_w.min(self.canvas_h) {
            return Err(Error::InfeasibleConfig(format!(
                "a {}x{} box does not fit in a {}x{} canvas",
                self.size_max, long, self.canvas_w, self.canvas_h
            )));
        }
        Ok(())
    }

    pub fn category_names(&self) -> Vec<String> {
        (0..self.category_freq.len()).map(|i| format!("c{i}")).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticDataset<T> {
    /// Sorted image ids.
    pub images: Vec<String>,
    pub annotations: Vec<Annotation<T>>,
}

fn range(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    if lo == hi {
        lo
    } else {
        rng.random_range(lo..=hi)
    }
}

/// Boxes are placed wholly inside the canvas.
pub fn generate_synthetic<T: Scalar>(cfg: &SyntheticSceneConfig) -> Result<SyntheticDataset<T>> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let cats = cfg.category_names();
    let pick = WeightedIndex::new(&cfg.category_freq).map_err(|e| Error::InvalidConfig(e.to_string()))?;
    let width = (cfg.images.max(1) - 1).to_string().len().max(4);
    let mut images = Vec::with_capacity(cfg.images);
    let mut annotations = Vec::with_capacity(cfg.images * cfg.objects_per_image);
    for i in 0..cfg.images {
        let image = format!("img{i:0width$}");
        for _ in 0..cfg.objects_per_image {
            let cat = &cats[pick.sample(&mut rng)];
            let w = range(&mut rng, cfg.size_min, cfg.size_max);
            let h = w * range(&mut rng, cfg.aspect_min, cfg.aspect_max);
            let theta = range(&mut rng, cfg.rot_min, cfg.rot_max);
            // the long edge h lies along theta
            let (s, c) = theta.sin_cos();
            let hx = 0.5 * (h * c.abs() + w * s.abs());
            let hy = 0.5 * (h * s.abs() + w * c.abs());
            let cx = range(&mut rng, hx, cfg.canvas_w - hx);
            let cy = range(&mut rng, hy, cfg.canvas_h - hy);
            let fp = FiveParam { cx, cy, w, h, theta };
            let obb = fp.to_obb()?.cast::<T>();
            annotations.push(Annotation { image: image.clone(), category: cat.clone(), obb, difficult: false });
        }
        images.push(image);
    }
    Ok(SyntheticDataset { images, annotations })
}

/// Independent uniform noise in `[-max_px, max_px]` on every corner
/// coordinate, then the minimum-area rectangle of the noisy corners.
pub fn jitter_obb<T: Scalar, R: Rng>(obb: &Obb<T>, max_px: f64, rng: &mut R) -> Result<Obb<T>> {
    if max_px == 0.0 {
        return Ok(*obb);
    }
    let pts: Vec<Point2<T>> = obb
        .corners()
        .iter()
        .map(|p| {
            let dx = T::lit(rng.random_range(-max_px..=max_px));
            let dy = T::lit(rng.random_range(-max_px..=max_px));
            Point2::new(p.x + dx, p.y + dy)
        })
        .collect();
    min_area_rect(&pts)
}

/// Every ground truth returned as a detection with score 1.
pub fn perfect_detections<T: Scalar>(anns: &[Annotation<T>]) -> Vec<DetectionRecord<T>> {
    anns.iter()
        .map(|a| DetectionRecord {
            image: a.image.clone(),
            det: Detection { obb: a.obb, category: a.category.clone(), score: T::one() },
        })
        .collect()
}

/// `per_gt` jittered copies of each ground truth with uniform random scores.
/// Output is sorted by image id, then by descending score.
pub fn synthetic_proposals<T: Scalar>(
    anns: &[Annotation<T>],
    per_gt: usize,
    max_px: f64,
    seed: u64,
) -> Result<Vec<DetectionRecord<T>>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(anns.len() * per_gt);
    for a in anns {
        for _ in 0..per_gt {
            let obb = jitter_obb(&a.obb, max_px, &mut rng)?;
            let score = T::lit(rng.random_range(0.0..1.0));
            out.push(DetectionRecord {
                image: a.image.clone(),
                det: Detection { obb, category: a.category.clone(), score },
            });
        }
    }
    out.sort_by(|x, y| x.image.cmp(&y.image).then(y.det.score.partial_cmp(&x.det.score).unwrap()));
    Ok(out)
}
