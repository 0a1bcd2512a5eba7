//! Rotating a near-square box: the five-parameter angle jumps by about a
//! quarter turn whenever a small wobble in edge lengths swaps which edge is
//! the longer one, while the corners themselves move smoothly.

use crate::error::{Error, Result};
use crate::geom::{aligned_corner_distance, decode, encode, Obb, Point2};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryConfig<T> {
    /// Nominal long/short edge ratio, > 1.
    pub aspect: T,
    /// Rotation samples over `[0, pi)`, at least 8.
    pub steps: usize,
    /// Nominal short edge length.
    pub base: T,
    /// Relative edge-length wobble amplitude.
    pub wobble: T,
}

impl<T: Scalar> BoundaryConfig<T> {
    pub fn new(aspect: T, steps: usize) -> Self {
        Self { aspect, steps, base: T::lit(32.0), wobble: T::lit(0.01) }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryRow<T> {
    /// True rotation of the box.
    pub phi: T,
    pub theta: T,
    pub w: T,
    pub h: T,
    /// `|theta_k - theta_{k-1}|`; zero on the first row.
    pub theta_jump: T,
    /// Largest corner move from the previous row after best relabelling.
    pub corner_step: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryReport<T> {
    pub rows: Vec<BoundaryRow<T>>,
    /// `2 pi h / steps` for the longest edge attained.
    pub smooth_bound: T,
}

impl<T: Scalar> BoundaryReport<T> {
    pub fn max_theta_jump(&self) -> T {
        self.rows.iter().map(|r| r.theta_jump).fold(T::zero(), T::max)
    }

    fn steps(&self) -> Vec<T> {
        self.rows.iter().skip(1).map(|r| r.corner_step).collect()
    }

    pub fn max_corner_step(&self) -> T {
        self.steps().into_iter().fold(T::zero(), T::max)
    }

    pub fn min_corner_step(&self) -> T {
        self.steps().into_iter().fold(T::infinity(), T::min)
    }

    pub fn median_corner_step(&self) -> T {
        let mut s = self.steps();
        s.sort_by(|a, b| a.partial_cmp(b).unwrap());
        if s.is_empty() {
            return T::zero();
        }
        let n = s.len();
        if n % 2 == 1 {
            s[n / 2]
        } else {
            (s[n / 2 - 1] + s[n / 2]) / T::lit(2.0)
        }
    }

    /// Largest corner step on a row whose theta jumped by at least `jump`.
    pub fn corner_step_at_jumps(&self, jump: T) -> Option<T> {
        self.rows.iter().filter(|r| r.theta_jump >= jump).map(|r| r.corner_step).reduce(T::max)
    }
}

pub fn boundary_demo<T: Scalar>(aspect: T, steps: usize) -> Result<BoundaryReport<T>> {
    boundary_demo_with(&BoundaryConfig::new(aspect, steps))
}

/// Sweeps `phi` over `[0, pi)`. At each sample the first edge (direction
/// `phi`) has length `base (1 + wobble sin 4phi)` and the second
/// `aspect base (1 - wobble sin 4phi)`; the box is encoded to five
/// parameters, decoded again, and compared with the previous sample.
pub fn boundary_demo_with<T: Scalar>(cfg: &BoundaryConfig<T>) -> Result<BoundaryReport<T>> {
    if !(cfg.aspect > T::one())
        || cfg.steps < 8
        || !(cfg.base > T::zero())
        || !(cfg.wobble >= T::zero() && cfg.wobble < T::one())
    {
        return Err(Error::InvalidConfig("need aspect > 1, steps >= 8, base > 0, 0 <= wobble < 1".into()));
    }
    let n = T::from_usize(cfg.steps).unwrap();
    let center = Point2::new(T::lit(64.0), T::lit(64.0));
    let four = T::lit(4.0);
    let mut rows = Vec::with_capacity(cfg.steps);
    let mut prev: Option<(T, [Point2<T>; 4])> = None;
    let mut longest = T::zero();
    for k in 0..cfg.steps {
        let phi = T::PI() * T::from_usize(k).unwrap() / n;
        let wob = cfg.wobble * (four * phi).sin();
        let first = cfg.base * (T::one() + wob);
        let second = cfg.aspect * cfg.base * (T::one() - wob);
        longest = longest.max(first.max(second));
        let half = T::lit(0.5);
        let u = Point2::new(phi.cos(), phi.sin());
        let v = u.perp();
        let (a, b) = (u * (first * half), v * (second * half));
        let obb = Obb::new([center - a - b, center + a - b, center + a + b, center - a + b])?;
        let fp = encode(&obb)?;
        let corners = *decode(&fp)?.corners();
        let (theta_jump, corner_step) = match prev {
            None => (T::zero(), T::zero()),
            Some((t, c)) => ((fp.theta - t).abs(), aligned_corner_distance(&corners, &c)),
        };
        rows.push(BoundaryRow { phi, theta: fp.theta, w: fp.w, h: fp.h, theta_jump, corner_step });
        prev = Some((fp.theta, corners));
    }
    let smooth_bound = T::TAU() * longest / n;
    Ok(BoundaryReport { rows, smooth_bound })
}
