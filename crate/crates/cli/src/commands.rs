use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, ensure, Context, Result};
use clap::Args;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use obbkit::assign::{assign_init, assign_rcnn, assign_refine, AssignConfig, FeatureGrid, LevelConfig};
use obbkit::data::{
    dataset_index, generate_synthetic, parse_points, perfect_detections, read_annotation_dir, read_annotations,
    read_detections, synthetic_proposals, write_annotation_dir, write_detections, Annotation, DetectionRecord,
    SyntheticSceneConfig, IO_RECT_TOL,
};
use obbkit::eval::{mean_average_precision, recall_at_k, ApMetric};
use obbkit::geom::{convex_hull, min_area_rect, FiveParam, Obb, Point2};
use obbkit::losses::{ciou as ciou_value, fd_grad_ciou, grad_ciou, grad_relative_error, hull_iou, RepPoints};
use obbkit::pipeline::{
    boundary_demo_with, fit_points, random_fit_problem, rotated_nms, BoundaryConfig, FitConfig, GradMode,
};
use obbkit::sampler::{self, build_epoch, DEFAULT_BETA_THR};
use obbkit::Error;

use crate::settings::Settings;
use crate::Common;

type P = Point2<f64>;

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn read_points(path: &Path) -> Result<Vec<P>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(parse_points(&text, &path.display().to_string())?)
}

fn read_box(path: &Path) -> Result<Obb<f64>> {
    let pts = read_points(path)?;
    let Ok(corners) = <[P; 4]>::try_from(pts.as_slice()) else {
        bail!("{}: a box needs exactly 4 corners, found {}", path.display(), pts.len());
    };
    Ok(Obb::with_tolerance(corners, IO_RECT_TOL).or_else(|_| min_area_rect(&corners))?)
}

/// A directory of per-image files or a single file.
fn read_gts(path: &Path) -> Result<(Vec<String>, Vec<Annotation<f64>>)> {
    if path.is_dir() {
        Ok(read_annotation_dir(path)?)
    } else {
        let anns = read_annotations(path)?;
        let image = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        Ok((vec![image], anns))
    }
}

fn xy_table(pts: &[P]) -> String {
    let mut s = String::from("x,y\n");
    for p in pts {
        writeln!(s, "{},{}", p.x, p.y).unwrap();
    }
    s
}

#[derive(Args, Debug)]
pub struct HullArgs {
    pub input: PathBuf,
    #[command(flatten)]
    pub common: Common,
}

pub fn hull(a: HullArgs) -> Result<()> {
    Settings::load(a.common.config.as_deref(), &[])?;
    let hull = convex_hull(&read_points(&a.input)?)?;
    if hull.is_degenerate() {
        eprintln!("obbkit: warning: hull is degenerate");
    }
    emit(a.common.out.as_deref(), &xy_table(hull.vertices()))
}

#[derive(Args, Debug)]
pub struct MinrectArgs {
    pub input: PathBuf,
    #[command(flatten)]
    pub common: Common,
}

pub fn minrect(a: MinrectArgs) -> Result<()> {
    Settings::load(a.common.config.as_deref(), &[])?;
    let r = min_area_rect(&read_points(&a.input)?)?;
    let fp = r.to_five_param()?;
    eprintln!(
        "area {} edge_angle {} cx {} cy {} w {} h {} theta {}",
        r.area(),
        r.edge_angle(),
        fp.cx,
        fp.cy,
        fp.w,
        fp.h,
        fp.theta
    );
    emit(a.common.out.as_deref(), &xy_table(r.corners()))
}

#[derive(Args, Debug)]
pub struct CiouArgs {
    /// Point file of the predicted set.
    #[arg(long)]
    pub pred: PathBuf,
    /// Point file with the four target corners.
    #[arg(long)]
    pub target: PathBuf,
    /// Also report the analytic gradient.
    #[arg(long)]
    pub grad: bool,
    #[command(flatten)]
    pub common: Common,
}

pub fn ciou(a: CiouArgs) -> Result<()> {
    Settings::load(a.common.config.as_deref(), &[])?;
    let pred = read_points(&a.pred)?;
    let target = read_box(&a.target)?;
    let v = ciou_value(&pred, &target);
    let mut s = format!("ciou,hull_iou,loss\n{},{},{}\n", v, hull_iou(&pred, &target), 1.0 - v);
    if a.grad {
        let g = grad_ciou(&pred, &target)?;
        s.push_str("\npoint,dx,dy\n");
        for (i, d) in g.chunks(2).enumerate() {
            writeln!(s, "{i},{},{}", d[0], d[1]).unwrap();
        }
    }
    emit(a.common.out.as_deref(), &s)
}

#[derive(Args, Debug)]
pub struct GradcheckArgs {
    #[arg(long)]
    pub draws: Option<usize>,
    /// Finite-difference step.
    #[arg(long)]
    pub h: Option<f64>,
    #[command(flatten)]
    pub common: Common,
}

fn random_gradcheck_case(seed: u64, draw: u64) -> (Vec<P>, Obb<f64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(draw);
    loop {
        let w = rng.random_range(4.0..24.0);
        let target = FiveParam {
            cx: rng.random_range(28.0..36.0),
            cy: rng.random_range(28.0..36.0),
            w,
            h: w * rng.random_range(1.0..3.0),
            theta: rng.random_range(-std::f64::consts::FRAC_PI_2..std::f64::consts::FRAC_PI_2),
        }
        .to_obb()
        .expect("positive edges");
        let c = target.center();
        let n = rng.random_range(4..=12);
        let pts: Vec<P> =
            (0..n).map(|_| P::new(c.x + rng.random_range(-24.0..24.0), c.y + rng.random_range(-24.0..24.0))).collect();
        if convex_hull(&pts).is_ok_and(|h| !h.is_degenerate() && h.area() > 1.0) {
            return (pts, target);
        }
    }
}

pub fn gradcheck(a: GradcheckArgs) -> Result<()> {
    let s = Settings::load(a.common.config.as_deref(), &["draws", "h"])?;
    let seed = s.get(a.common.seed, "seed", 0)?;
    let draws = s.get(a.draws, "draws", 200usize)?;
    let h = s.get(a.h, "h", 1e-5f64)?;
    ensure!(h > 0.0, "h must be positive");
    let rows: Vec<(usize, String, f64)> = (0..draws)
        .into_par_iter()
        .map(|i| {
            let (pts, target) = random_gradcheck_case(seed, i as u64);
            let fd = fd_grad_ciou(&pts, &target, h);
            match grad_ciou(&pts, &target) {
                Ok(g) => Ok((pts.len(), "analytic".to_string(), grad_relative_error(&g, &fd))),
                Err(Error::NearNonSmooth) => Ok((pts.len(), "near_non_smooth".to_string(), f64::NAN)),
                Err(e) => Err(e),
            }
        })
        .collect::<Result<_, _>>()?;
    let mut out = String::from("draw,points,status,max_rel_error\n");
    for (i, (n, status, err)) in rows.iter().enumerate() {
        writeln!(out, "{i},{n},{status},{err:e}").unwrap();
    }
    let flagged = rows.iter().filter(|r| r.1 != "analytic").count();
    let worst = rows.iter().map(|r| r.2).filter(|e| !e.is_nan()).fold(0.0, f64::max);
    eprintln!("draws {draws} near_non_smooth {flagged} max_rel_error {worst:e}");
    emit(a.common.out.as_deref(), &out)
}

#[derive(Args, Debug)]
pub struct AssignArgs {
    /// Annotation file or directory.
    #[arg(long)]
    pub gts: PathBuf,
    /// Detection file of proposals (refine and rcnn stages).
    #[arg(long)]
    pub proposals: Option<PathBuf>,
    /// init, refine or rcnn.
    #[arg(long)]
    pub stage: Option<String>,
    #[arg(long)]
    pub scale: Option<f64>,
    #[arg(long)]
    pub l_min: Option<i32>,
    #[arg(long)]
    pub l_max: Option<i32>,
    #[arg(long)]
    pub tau: Option<f64>,
    #[arg(long)]
    pub rcnn_iou: Option<f64>,
    #[arg(long)]
    pub canvas_w: Option<f64>,
    #[arg(long)]
    pub canvas_h: Option<f64>,
    #[command(flatten)]
    pub common: Common,
}

fn by_image<T: Clone>(items: &[T], image: impl Fn(&T) -> &str) -> BTreeMap<String, Vec<T>> {
    let mut m: BTreeMap<String, Vec<T>> = BTreeMap::new();
    for it in items {
        m.entry(image(it).to_string()).or_default().push(it.clone());
    }
    m
}

pub fn assign(a: AssignArgs) -> Result<()> {
    let s = Settings::load(
        a.common.config.as_deref(),
        &["stage", "scale", "l_min", "l_max", "tau", "rcnn_iou", "canvas_w", "canvas_h"],
    )?;
    let lv = LevelConfig::<f64>::default();
    let level = LevelConfig {
        scale: s.get(a.scale, "scale", lv.scale)?,
        l_min: s.get(a.l_min, "l_min", lv.l_min)?,
        l_max: s.get(a.l_max, "l_max", lv.l_max)?,
    };
    let ad = AssignConfig::<f64>::default();
    let cfg = AssignConfig { tau: s.get(a.tau, "tau", ad.tau)?, rcnn_iou: s.get(a.rcnn_iou, "rcnn_iou", ad.rcnn_iou)? };
    let stage = s.get(a.stage, "stage", "init".to_string())?;
    let (images, anns) = read_gts(&a.gts)?;
    let gts_by_image = by_image(&anns, |x| &x.image);
    let mut out = String::new();
    match stage.as_str() {
        "init" => {
            let w = s.get(a.canvas_w, "canvas_w", 1024.0)?;
            let h = s.get(a.canvas_h, "canvas_h", 1024.0)?;
            level.validate()?;
            let grids =
                (level.l_min..=level.l_max).map(|l| FeatureGrid::new(l, w, h)).collect::<Result<Vec<_>, _>>()?;
            out.push_str("image,gt,category,level,row,col,out_of_extent\n");
            for img in &images {
                let Some(gs) = gts_by_image.get(img) else { continue };
                let obbs: Vec<Obb<f64>> = gs.iter().map(|g| g.obb).collect();
                for (i, r) in assign_init(&obbs, &grids, &level)?.iter().enumerate() {
                    writeln!(out, "{img},{i},{},{},{},{},{}", gs[i].category, r.level, r.row, r.col, r.out_of_extent)
                        .unwrap();
                }
            }
        }
        "refine" | "rcnn" => {
            let Some(pp) = &a.proposals else { bail!("stage {stage} needs --proposals") };
            let props = read_detections::<f64>(pp)?;
            out.push_str("image,proposal,score,gt,category\n");
            for (img, ps) in by_image(&props, |x| &x.image) {
                let gs = gts_by_image.get(&img).cloned().unwrap_or_default();
                let obbs: Vec<Obb<f64>> = gs.iter().map(|g| g.obb).collect();
                let labels = if stage == "refine" {
                    let sets = ps
                        .iter()
                        .map(|p| RepPoints::new(p.det.obb.corners().to_vec()))
                        .collect::<Result<Vec<_>, _>>()?;
                    assign_refine(&sets, &obbs, &cfg)?
                } else {
                    let boxes: Vec<Obb<f64>> = ps.iter().map(|p| p.det.obb).collect();
                    assign_rcnn(&boxes, &obbs, &cfg)?
                };
                for (i, (p, l)) in ps.iter().zip(labels).enumerate() {
                    match l {
                        Some(g) => writeln!(out, "{img},{i},{},{g},{}", p.det.score, gs[g].category),
                        None => writeln!(out, "{img},{i},{},,background", p.det.score),
                    }
                    .unwrap();
                }
            }
        }
        other => bail!("unknown stage {other:?} (expected init, refine or rcnn)"),
    }
    emit(a.common.out.as_deref(), &out)
}

#[derive(Args, Debug)]
pub struct RepeatFactorsArgs {
    /// Annotation file or directory.
    pub gts: PathBuf,
    #[arg(long)]
    pub beta_thr: Option<f64>,
    /// category or image.
    #[arg(long)]
    pub table: Option<String>,
    #[command(flatten)]
    pub common: Common,
}

pub fn repeat_factors(a: RepeatFactorsArgs) -> Result<()> {
    let s = Settings::load(a.common.config.as_deref(), &["beta_thr", "table"])?;
    let beta = s.get(a.beta_thr, "beta_thr", DEFAULT_BETA_THR)?;
    let (images, anns) = read_gts(&a.gts)?;
    let t = sampler::repeat_factors(&dataset_index(&images, &anns), beta)?;
    let mut out = String::new();
    match s.get(a.table, "table", "category".to_string())?.as_str() {
        "category" => {
            out.push_str("category,fraction,factor\n");
            for (c, f) in &t.category_fraction {
                writeln!(out, "{c},{f},{}", t.category_factor[c]).unwrap();
            }
        }
        "image" => {
            out.push_str("image,factor\n");
            for (img, f) in &t.image_factor {
                writeln!(out, "{img},{f}").unwrap();
            }
        }
        other => bail!("unknown table {other:?} (expected category or image)"),
    }
    emit(a.common.out.as_deref(), &out)
}

#[derive(Args, Debug)]
pub struct EpochArgs {
    /// Annotation file or directory.
    pub gts: PathBuf,
    #[arg(long)]
    pub beta_thr: Option<f64>,
    #[command(flatten)]
    pub common: Common,
}

pub fn epoch(a: EpochArgs) -> Result<()> {
    let s = Settings::load(a.common.config.as_deref(), &["beta_thr"])?;
    let seed = s.get(a.common.seed, "seed", 0)?;
    let beta = s.get(a.beta_thr, "beta_thr", DEFAULT_BETA_THR)?;
    let (images, anns) = read_gts(&a.gts)?;
    let t = sampler::repeat_factors(&dataset_index(&images, &anns), beta)?;
    let mut out = String::from("position,image\n");
    for (i, img) in build_epoch(&t, seed).iter().enumerate() {
        writeln!(out, "{i},{img}").unwrap();
    }
    emit(a.common.out.as_deref(), &out)
}

#[derive(Args, Debug)]
pub struct FitArgs {
    /// Point file with the target's four corners; random when omitted.
    #[arg(long)]
    pub target: Option<PathBuf>,
    /// Point file with the initial set; random when omitted.
    #[arg(long)]
    pub init: Option<PathBuf>,
    #[arg(long)]
    pub steps: Option<usize>,
    #[arg(long)]
    pub lr: Option<f64>,
    /// analytic or fd.
    #[arg(long)]
    pub grad_mode: Option<String>,
    #[arg(long)]
    pub stop_ciou: Option<f64>,
    #[command(flatten)]
    pub common: Common,
}

pub fn fit(a: FitArgs) -> Result<()> {
    let s = Settings::load(a.common.config.as_deref(), &["steps", "lr", "grad_mode", "stop_ciou"])?;
    let seed = s.get(a.common.seed, "seed", 0)?;
    let d = FitConfig::<f64>::default();
    let grad_mode = match s.get(a.grad_mode, "grad_mode", "analytic".to_string())?.as_str() {
        "analytic" => GradMode::Analytic,
        "fd" => GradMode::FiniteDifference,
        other => bail!("unknown grad_mode {other:?} (expected analytic or fd)"),
    };
    let cfg = FitConfig {
        steps: s.get(a.steps, "steps", d.steps)?,
        lr: s.get(a.lr, "lr", d.lr)?,
        grad_mode,
        stop_ciou: s.get(a.stop_ciou, "stop_ciou", d.stop_ciou)?,
    };
    let (mut target, mut init) = random_fit_problem(&mut ChaCha8Rng::seed_from_u64(seed))?;
    if let Some(p) = &a.target {
        target = read_box(p)?;
    }
    if let Some(p) = &a.init {
        init = RepPoints::new(read_points(p)?)?;
    }
    let r = fit_points(&target, &init, &cfg)?;
    let n = init.points().len();
    let mut out = String::from("step,ciou");
    for i in 0..n {
        write!(out, ",x{i},y{i}").unwrap();
    }
    out.push('\n');
    for st in &r.trajectory {
        write!(out, "{},{}", st.step, st.ciou).unwrap();
        for p in &st.points {
            write!(out, ",{},{}", p.x, p.y).unwrap();
        }
        out.push('\n');
    }
    eprintln!("converged {} steps {} final_ciou {}", r.converged, r.trajectory.len() - 1, r.final_ciou());
    emit(a.common.out.as_deref(), &out)
}

#[derive(Args, Debug)]
pub struct NmsArgs {
    /// Detection file.
    pub dets: PathBuf,
    #[arg(long)]
    pub iou_thr: Option<f64>,
    #[arg(long)]
    pub score_thr: Option<f64>,
    #[command(flatten)]
    pub common: Common,
}

pub fn nms(a: NmsArgs) -> Result<()> {
    let s = Settings::load(a.common.config.as_deref(), &["iou_thr", "score_thr"])?;
    let iou_thr = s.get(a.iou_thr, "iou_thr", 0.5)?;
    let score_thr = s.get(a.score_thr, "score_thr", 0.0)?;
    let dets = read_detections::<f64>(&a.dets)?;
    let groups: Vec<(String, Vec<DetectionRecord<f64>>)> = by_image(&dets, |d| &d.image).into_iter().collect();
    let kept: Vec<Vec<DetectionRecord<f64>>> = groups
        .par_iter()
        .map(|(img, ds)| {
            let plain: Vec<_> = ds.iter().map(|d| d.det.clone()).collect();
            rotated_nms(&plain, iou_thr, score_thr)
                .into_iter()
                .map(|det| DetectionRecord { image: img.clone(), det })
                .collect()
        })
        .collect();
    let kept: Vec<DetectionRecord<f64>> = kept.into_iter().flatten().collect();
    eprintln!("kept {} of {}", kept.len(), dets.len());
    match &a.common.out {
        Some(p) => Ok(write_detections(p, &kept)?),
        None => {
            let mut out = String::new();
            for d in &kept {
                writeln!(out, "{}", obbkit::data::format_detection(d)).unwrap();
            }
            emit(None, &out)
        }
    }
}

#[derive(Args, Debug)]
pub struct EvalArgs {
    /// Annotation file or directory.
    #[arg(long)]
    pub gts: PathBuf,
    /// Detection file.
    #[arg(long)]
    pub dets: PathBuf,
    #[arg(long)]
    pub iou_thr: Option<f64>,
    #[command(flatten)]
    pub common: Common,
}

pub fn eval(a: EvalArgs) -> Result<()> {
    let s = Settings::load(a.common.config.as_deref(), &["iou_thr"])?;
    let iou_thr = s.get(a.iou_thr, "iou_thr", 0.5)?;
    let (_, anns) = read_gts(&a.gts)?;
    let dets = read_detections::<f64>(&a.dets)?;
    let (m07, m12) = rayon::join(
        || mean_average_precision(&dets, &anns, iou_thr, ApMetric::Voc07),
        || mean_average_precision(&dets, &anns, iou_thr, ApMetric::Voc12),
    );
    let mut out = String::from("category,ap07,ap12\n");
    for (c, v) in &m07.per_category {
        writeln!(out, "{c},{v},{}", m12.per_category[c]).unwrap();
    }
    writeln!(out, "mAP,{},{}", m07.map, m12.map).unwrap();
    emit(a.common.out.as_deref(), &out)
}

#[derive(Args, Debug)]
pub struct RecallArgs {
    /// Annotation file or directory.
    #[arg(long)]
    pub gts: PathBuf,
    /// Detection file of scored proposals.
    #[arg(long)]
    pub proposals: PathBuf,
    #[arg(long, value_delimiter = ',')]
    pub ks: Option<Vec<usize>>,
    #[arg(long)]
    pub iou_thr: Option<f64>,
    #[command(flatten)]
    pub common: Common,
}

pub fn recall(a: RecallArgs) -> Result<()> {
    let s = Settings::load(a.common.config.as_deref(), &["ks", "iou_thr"])?;
    let ks = s.get_list(a.ks, "ks", vec![300, 1000, 2000])?;
    let iou_thr = s.get(a.iou_thr, "iou_thr", 0.5)?;
    let (_, anns) = read_gts(&a.gts)?;
    let props = read_detections::<f64>(&a.proposals)?;
    let rs: Vec<f64> = ks.par_iter().map(|&k| recall_at_k(&props, &anns, k, iou_thr)).collect();
    let mut out = String::from("k,recall\n");
    for (k, r) in ks.iter().zip(rs) {
        writeln!(out, "{k},{r}").unwrap();
    }
    emit(a.common.out.as_deref(), &out)
}

#[derive(Args, Debug)]
pub struct BoundaryArgs {
    #[arg(long)]
    pub aspect: Option<f64>,
    #[arg(long)]
    pub steps: Option<usize>,
    #[arg(long)]
    pub base: Option<f64>,
    #[arg(long)]
    pub wobble: Option<f64>,
    #[command(flatten)]
    pub common: Common,
}

pub fn boundary(a: BoundaryArgs) -> Result<()> {
    let s = Settings::load(a.common.config.as_deref(), &["aspect", "steps", "base", "wobble"])?;
    let d = BoundaryConfig::<f64>::new(1.01, 360);
    let cfg = BoundaryConfig {
        aspect: s.get(a.aspect, "aspect", d.aspect)?,
        steps: s.get(a.steps, "steps", d.steps)?,
        base: s.get(a.base, "base", d.base)?,
        wobble: s.get(a.wobble, "wobble", d.wobble)?,
    };
    let r = boundary_demo_with(&cfg)?;
    let mut out = String::from("phi,theta,w,h,theta_jump,corner_step\n");
    for row in &r.rows {
        writeln!(out, "{},{},{},{},{},{}", row.phi, row.theta, row.w, row.h, row.theta_jump, row.corner_step).unwrap();
    }
    eprintln!(
        "max_theta_jump {} max_corner_step {} median_corner_step {} smooth_bound {}",
        r.max_theta_jump(),
        r.max_corner_step(),
        r.median_corner_step(),
        r.smooth_bound
    );
    emit(a.common.out.as_deref(), &out)
}

#[derive(Args, Debug)]
pub struct GenArgs {
    #[arg(long)]
    pub canvas_w: Option<f64>,
    #[arg(long)]
    pub canvas_h: Option<f64>,
    #[arg(long)]
    pub images: Option<usize>,
    #[arg(long)]
    pub objects_per_image: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    pub category_freq: Option<Vec<f64>>,
    #[arg(long)]
    pub size_min: Option<f64>,
    #[arg(long)]
    pub size_max: Option<f64>,
    #[arg(long)]
    pub aspect_min: Option<f64>,
    #[arg(long)]
    pub aspect_max: Option<f64>,
    #[arg(long)]
    pub rot_min: Option<f64>,
    #[arg(long)]
    pub rot_max: Option<f64>,
    /// none, perfect or jitter.
    #[arg(long)]
    pub detections: Option<String>,
    #[arg(long)]
    pub jitter_px: Option<f64>,
    #[arg(long)]
    pub per_gt: Option<usize>,
    #[command(flatten)]
    pub common: Common,
}

/// Writes `<out>/annotations/<image>.txt` and, unless disabled,
/// `<out>/detections.txt`.
pub fn gen(a: GenArgs) -> Result<()> {
    let s = Settings::load(
        a.common.config.as_deref(),
        &[
            "canvas_w",
            "canvas_h",
            "images",
            "objects_per_image",
            "category_freq",
            "size_min",
            "size_max",
            "aspect_min",
            "aspect_max",
            "rot_min",
            "rot_max",
            "detections",
            "jitter_px",
            "per_gt",
        ],
    )?;
    let Some(out) = &a.common.out else { bail!("gen needs --out <directory>") };
    let d = SyntheticSceneConfig::default();
    let cfg = SyntheticSceneConfig {
        canvas_w: s.get(a.canvas_w, "canvas_w", d.canvas_w)?,
        canvas_h: s.get(a.canvas_h, "canvas_h", d.canvas_h)?,
        images: s.get(a.images, "images", d.images)?,
        objects_per_image: s.get(a.objects_per_image, "objects_per_image", d.objects_per_image)?,
        category_freq: s.get_list(a.category_freq, "category_freq", d.category_freq)?,
        size_min: s.get(a.size_min, "size_min", d.size_min)?,
        size_max: s.get(a.size_max, "size_max", d.size_max)?,
        aspect_min: s.get(a.aspect_min, "aspect_min", d.aspect_min)?,
        aspect_max: s.get(a.aspect_max, "aspect_max", d.aspect_max)?,
        rot_min: s.get(a.rot_min, "rot_min", d.rot_min)?,
        rot_max: s.get(a.rot_max, "rot_max", d.rot_max)?,
        seed: s.get(a.common.seed, "seed", d.seed)?,
    };
    let mode = s.get(a.detections, "detections", "perfect".to_string())?;
    let jitter = s.get(a.jitter_px, "jitter_px", 2.0)?;
    let per_gt = s.get(a.per_gt, "per_gt", 1usize)?;
    let data = generate_synthetic::<f64>(&cfg)?;
    write_annotation_dir(&out.join("annotations"), &data.images, &data.annotations)?;
    let dets = match mode.as_str() {
        "none" => None,
        "perfect" => Some(perfect_detections(&data.annotations)),
        "jitter" => Some(synthetic_proposals(&data.annotations, per_gt, jitter, cfg.seed.wrapping_add(1))?),
        other => bail!("unknown detections mode {other:?} (expected none, perfect or jitter)"),
    };
    if let Some(d) = dets {
        write_detections(&out.join("detections.txt"), &d)?;
    }
    eprintln!("{} images, {} objects", data.images.len(), data.annotations.len());
    Ok(())
}
