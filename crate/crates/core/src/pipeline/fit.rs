use std::f64::consts::FRAC_PI_2;

use rand::Rng;

use crate::error::{Error, Result};
use crate::geom::{convex_hull, FiveParam, Obb, Point2};
use crate::losses::{ciou, fd_grad_ciou, grad_ciou_or_fd, RepPoints};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GradMode {
    Analytic,
    FiniteDifference,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitConfig<T> {
    pub steps: usize,
    /// Largest single-point displacement of a step, in pixels.
    pub lr: T,
    pub grad_mode: GradMode,
    pub stop_ciou: T,
}

impl<T: Scalar> Default for FitConfig<T> {
    fn default() -> Self {
        Self { steps: 500, lr: T::lit(0.1), grad_mode: GradMode::Analytic, stop_ciou: T::lit(0.99) }
    }
}

impl<T: Scalar> FitConfig<T> {
    pub fn validate(&self) -> Result<()> {
        if self.steps == 0 || !(self.lr > T::zero()) {
            return Err(Error::InvalidConfig("need steps >= 1 and lr > 0".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitStep<T> {
    pub step: usize,
    pub points: Vec<Point2<T>>,
    pub ciou: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitResult<T> {
    pub trajectory: Vec<FitStep<T>>,
    pub converged: bool,
}

impl<T: Scalar> FitResult<T> {
    pub fn final_ciou(&self) -> T {
        self.trajectory.last().map_or(T::zero(), |s| s.ciou)
    }
}

/// A random target in a 128x128 canvas and a perturbed initial point set.
///
/// The target has short edge in [16, 40], aspect in [1, 2.5] and its center
/// in [40, 88]^2. The initial set is the 3x3 grid over a copy of the target
/// shifted by up to 4 px, scaled by [0.6, 1.2] per edge and turned by up to
/// 0.3 rad, with up to 1 px of noise on every point.
pub fn random_fit_problem<R: Rng>(rng: &mut R) -> Result<(Obb<f64>, RepPoints<f64>)> {
    let cx = rng.random_range(40.0..88.0);
    let cy = rng.random_range(40.0..88.0);
    let w = rng.random_range(16.0..40.0);
    let h = w * rng.random_range(1.0..2.5);
    let theta = rng.random_range(0.0..std::f64::consts::PI) - FRAC_PI_2;
    let target = FiveParam { cx, cy, w, h, theta }.to_obb()?;
    let start = FiveParam {
        cx: cx + rng.random_range(-4.0..4.0),
        cy: cy + rng.random_range(-4.0..4.0),
        w: w * rng.random_range(0.6..1.2),
        h: h * rng.random_range(0.6..1.2),
        theta: theta + rng.random_range(-0.3..0.3),
    }
    .to_obb()?;
    let c = start.corners();
    let mut pts = Vec::with_capacity(9);
    for i in 0..3 {
        for j in 0..3 {
            let u = f64::from(i) / 2.0;
            let v = f64::from(j) / 2.0;
            let p = c[0] + (c[1] - c[0]) * u + (c[3] - c[0]) * v;
            pts.push(Point2::new(p.x + rng.random_range(-1.0..1.0), p.y + rng.random_range(-1.0..1.0)));
        }
    }
    Ok((target, RepPoints::new(pts)?))
}

const MAX_HALVINGS: usize = 10;
const FD_STEP: f64 = 1e-5;
const BETA1: f64 = 0.9;
const BETA2: f64 = 0.999;
const GROWTH: f64 = 1.5;
const MAX_LR_FACTOR: f64 = 20.0;

fn max_abs<T: Scalar>(v: &[T]) -> T {
    v.iter().fold(T::zero(), |m, g| m.max(g.abs()))
}

/// Gradient ascent on hull GIoU (descent on `1 - ciou`) with backtracking.
///
/// Each step moves the points along the gradient scaled so that the largest
/// coordinate change is `lr`. A step that would lower the objective is
/// halved up to ten times; if none helps the descent stops, so the recorded
/// objective never decreases.
pub fn fit_points<T: Scalar>(target: &Obb<T>, init: &RepPoints<T>, cfg: &FitConfig<T>) -> Result<FitResult<T>> {
    cfg.validate()?;
    if convex_hull(init.points())?.is_degenerate() {
        return Err(Error::DegenerateHull);
    }
    let h = T::lit(FD_STEP);
    let mut pts = init.points().to_vec();
    let mut cur = ciou(&pts, target);
    let mut trajectory = vec![FitStep { step: 0, points: pts.clone(), ciou: cur }];
    if cur >= cfg.stop_ciou {
        return Ok(FitResult { trajectory, converged: true });
    }
    let (b1, b2) = (T::lit(BETA1), T::lit(BETA2));
    let tiny = T::lit(1e-12);
    let grow = T::lit(GROWTH);
    let max_lr = cfg.lr * T::lit(MAX_LR_FACTOR);
    let mut lr = cfg.lr;
    let mut first = vec![T::zero(); pts.len() * 2];
    let mut second = vec![T::zero(); pts.len() * 2];
    let (mut b1t, mut b2t) = (T::one(), T::one());
    for step in 1..=cfg.steps {
        let grad = match cfg.grad_mode {
            GradMode::FiniteDifference => fd_grad_ciou(&pts, target, h),
            GradMode::Analytic => match grad_ciou_or_fd(&pts, target, h) {
                Ok((g, _)) => g,
                Err(Error::DegenerateHull) => fd_grad_ciou(&pts, target, h),
                Err(e) => return Err(e),
            },
        };
        let gmax = max_abs(&grad);
        if !(gmax > T::zero()) {
            break;
        }
        // per-coordinate normalised moment estimates; plain gradient is the
        // fallback direction when they fail to improve the objective
        b1t = b1t * b1;
        b2t = b2t * b2;
        let adaptive: Vec<T> = grad
            .iter()
            .zip(first.iter_mut().zip(second.iter_mut()))
            .map(|(&g, (m, v))| {
                let g = g / gmax;
                *m = b1 * *m + (T::one() - b1) * g;
                *v = b2 * *v + (T::one() - b2) * g * g;
                (*m / (T::one() - b1t)) / ((*v / (T::one() - b2t)).sqrt() + tiny)
            })
            .collect();
        let mut accepted = None;
        for dir in [&adaptive, &grad] {
            let dmax = max_abs(dir);
            if !(dmax > T::zero()) {
                continue;
            }
            let mut scale = lr / dmax;
            for _ in 0..=MAX_HALVINGS {
                let cand: Vec<Point2<T>> = pts
                    .iter()
                    .enumerate()
                    .map(|(i, p)| Point2::new(p.x + dir[2 * i] * scale, p.y + dir[2 * i + 1] * scale))
                    .collect();
                let v = ciou(&cand, target);
                if v >= cur {
                    accepted = Some((cand, v, scale * dmax));
                    break;
                }
                scale = scale / T::lit(2.0);
            }
            if accepted.is_some() {
                break;
            }
        }
        let Some((cand, v, used)) = accepted else { break };
        lr = if used >= lr { (lr * grow).min(max_lr) } else { used.max(cfg.lr * T::lit(1e-3)) };
        pts = cand;
        cur = v;
        trajectory.push(FitStep { step, points: pts.clone(), ciou: cur });
        if cur >= cfg.stop_ciou {
            return Ok(FitResult { trajectory, converged: true });
        }
    }
    Ok(FitResult { trajectory, converged: false })
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn grid_points(b: &Obb<f64>) -> Vec<Point2<f64>> {
        let c = b.corners();
        let mut out = vec![];
        for i in 0..3 {
            for j in 0..3 {
                let u = f64::from(i) / 2.0;
                let v = f64::from(j) / 2.0;
                out.push(c[0] + (c[1] - c[0]) * u + (c[3] - c[0]) * v);
            }
        }
        out
    }

    fn target() -> Obb<f64> {
        Obb::axis_aligned(40.0, 50.0, 80.0, 70.0).unwrap().rotate_about(Point2::new(60.0, 60.0), 0.5)
    }

    #[test]
    fn already_on_target() {
        let t = target();
        let init = RepPoints::new(t.corners().to_vec()).unwrap();
        let r = fit_points(&t, &init, &FitConfig::default()).unwrap();
        assert!(r.converged);
        assert_eq!(r.trajectory.len(), 1);
        assert_eq!(r.trajectory[0].step, 0);
    }

    #[test]
    fn half_scale_converges_with_both_gradients() {
        let t = target();
        let half = t.rotate_about(t.center(), 0.0);
        let c = t.center();
        let shrunk = Obb::new(half.corners().map(|p| c + (p - c) * 0.5)).unwrap();
        let init = RepPoints::new(grid_points(&shrunk)).unwrap();
        for mode in [GradMode::Analytic, GradMode::FiniteDifference] {
            let cfg = FitConfig { steps: 200, stop_ciou: 0.99, grad_mode: mode, ..FitConfig::default() };
            let r = fit_points(&t, &init, &cfg).unwrap();
            assert!(r.converged, "{mode:?}: {}", r.final_ciou());
            assert!(r.final_ciou() >= 0.99);
            assert!(r.trajectory.windows(2).all(|w| w[1].ciou >= w[0].ciou));
        }
    }

    #[test]
    fn not_converged_is_reported() {
        let t = target();
        let init = RepPoints::new(grid_points(&Obb::axis_aligned(0.0, 0.0, 5.0, 5.0).unwrap())).unwrap();
        let cfg = FitConfig { steps: 3, ..FitConfig::default() };
        let r = fit_points(&t, &init, &cfg).unwrap();
        assert!(!r.converged);
        assert_eq!(r.trajectory.len(), 4);
    }

    #[test]
    fn rejects_bad_config_and_degenerate_init() {
        let t = target();
        let init = RepPoints::new(t.corners().to_vec()).unwrap();
        assert!(fit_points(&t, &init, &FitConfig { steps: 0, ..FitConfig::default() }).is_err());
        let line = RepPoints::new(vec![Point2::new(0.0, 0.0), Point2::new(1.0, 1.0), Point2::new(2.0, 2.0)]).unwrap();
        assert_eq!(fit_points(&t, &line, &FitConfig::default()).unwrap_err(), Error::DegenerateHull);
    }
}
