//! Discrete geometry kernel.
//!
//! Turns sampled representations of hypersurfaces into frames carrying all
//! first and second order data: principal curvatures, mean curvature H, its
//! intrinsic gradient and Laplace–Beltrami, plus quadrature weights.
//!
//! Two representations are supported:
//!   * plane curves (intrinsic dimension 1), cyclic or open chains,
//!   * O(d)-symmetric hypersurfaces of revolution (d >= 2) given by a
//!     meridian profile (axis coordinate, radius >= 0), open chains whose
//!     endpoints may touch the axis at poles.
//!
//! All derivatives are order-4 central differences in the node index, with
//! metric factors |dX/du| supplying the chain rule to arclength. Axis poles
//! are closed by parity ghosts (axis coordinate even, radius odd through the
//! pole), which realizes the removable-singularity limits lambda_rot ->
//! lambda_profile and Laplacian(H) -> d * H'' without order loss. Non-pole
//! open ends drop to order-2 one-sided stencils.

use crate::error::{Error, Result};
use crate::fd::{deriv1, deriv2, EndRule};
use crate::parallel;
use crate::spline::CurveSpline;
use crate::vec2::Vec2;

pub const MIN_POINTS: usize = 16;
pub const MAX_SPACING_RATIO: f64 = 10.0;

/// Sampled representation tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrameRep {
    PlaneCurve,
    Rotational,
}

impl FrameRep {
    pub fn label(self) -> &'static str {
        match self {
            FrameRep::PlaneCurve => "curve",
            FrameRep::Rotational => "rot",
        }
    }
}

/// Chain connectivity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Topology {
    Cyclic,
    Open { pole_start: bool, pole_end: bool },
}

impl Topology {
    pub fn pole_flags(self) -> (bool, bool) {
        match self {
            Topology::Cyclic => (false, false),
            Topology::Open {
                pole_start,
                pole_end,
            } => (pole_start, pole_end),
        }
    }
}

/// One sample of an immersed hypersurface.
///
/// `position` is the representing chart point: ambient (x, y) for plane
/// curves, meridian (axis, radius) for rotational frames. `lambda` holds the
/// d principal curvatures in ascending order and `grad_h` the components of
/// the intrinsic gradient of H in the matching orthonormal principal basis.
#[derive(Debug, Clone)]
pub struct FramePoint {
    pub position: Vec2,
    pub normal: Vec2,
    pub lambda: Vec<f64>,
    pub h: f64,
    pub a_norm_sq: f64,
    pub grad_h: Vec<f64>,
    pub lap_h: f64,
    pub area_weight: f64,
    /// Arclength along the chain from its first sample.
    pub coord: f64,
    pub pole: bool,
}

impl FramePoint {
    /// |grad H| in the principal basis.
    pub fn grad_h_norm(&self) -> f64 {
        self.grad_h.iter().map(|g| g * g).sum::<f64>().sqrt()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct FrameStats {
    pub max_h: f64,
    pub min_h: f64,
    /// Extrinsic diameter; `None` when not computed or not defined
    /// (open, truncated frames).
    pub diameter: Option<f64>,
}

/// A full time slice of a flow.
#[derive(Debug, Clone)]
pub struct FlowFrame {
    pub t: f64,
    /// Intrinsic dimension d of the hypersurface.
    pub dim: usize,
    pub rep: FrameRep,
    pub topology: Topology,
    pub points: Vec<FramePoint>,
    pub stats: FrameStats,
}

impl FlowFrame {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Closed = compact without boundary: a cyclic curve or a rotational
    /// profile capped by poles at both ends.
    pub fn is_closed(&self) -> bool {
        match self.topology {
            Topology::Cyclic => true,
            Topology::Open {
                pole_start,
                pole_end,
            } => self.rep == FrameRep::Rotational && pole_start && pole_end,
        }
    }

    pub fn max_abs_a_sq(&self) -> f64 {
        self.points.iter().map(|p| p.a_norm_sq).fold(0.0, f64::max)
    }

    /// Smallest adjacent sample distance; the grid scale for stability.
    pub fn min_spacing(&self) -> f64 {
        let n = self.points.len();
        let mut m = f64::INFINITY;
        for i in 0..n - 1 {
            m = m.min(self.points[i + 1].position.dist(self.points[i].position));
        }
        if self.topology == Topology::Cyclic {
            m = m.min(self.points[0].position.dist(self.points[n - 1].position));
        }
        m
    }

    pub fn total_arclength(&self) -> f64 {
        let n = self.points.len();
        let mut l = self.points[n - 1].coord;
        if self.topology == Topology::Cyclic {
            l += self.points[0].position.dist(self.points[n - 1].position);
        }
        l
    }

    pub fn positions(&self) -> Vec<Vec2> {
        self.points.iter().map(|p| p.position).collect()
    }

    /// Recomputes cached stats (without the diameter) from the points.
    pub fn refresh_stats(&mut self) {
        let max_h = self
            .points
            .iter()
            .map(|p| p.h)
            .fold(f64::NEG_INFINITY, f64::max);
        let min_h = self
            .points
            .iter()
            .map(|p| p.h)
            .fold(f64::INFINITY, f64::min);
        self.stats.max_h = max_h;
        self.stats.min_h = min_h;
    }

    /// Fills the cached diameter for closed frames.
    pub fn compute_diameter(&mut self) -> Result<f64> {
        let d = diameter(self)?;
        self.stats.diameter = Some(d);
        Ok(d)
    }

    /// Checks the per-point invariants; used by tests and ingest paths.
    pub fn validate(&self) -> Result<()> {
        if self.points.is_empty() {
            return Err(Error::InvalidArgument("frame has no points".into()));
        }
        for (i, p) in self.points.iter().enumerate() {
            if p.lambda.len() != self.dim || p.grad_h.len() != self.dim {
                return Err(Error::InvalidArgument(format!(
                    "point {i}: lambda/grad_h length != d"
                )));
            }
            let sum: f64 = p.lambda.iter().sum();
            let sq: f64 = p.lambda.iter().map(|l| l * l).sum();
            let scale = p.h.abs().max(1e-300);
            if (p.h - sum).abs() > 1e-12 * scale.max(sum.abs()) {
                return Err(Error::InvalidArgument(format!(
                    "point {i}: H != sum lambda"
                )));
            }
            if (p.a_norm_sq - sq).abs() > 1e-12 * p.a_norm_sq.max(sq).max(1e-300) {
                return Err(Error::InvalidArgument(format!(
                    "point {i}: |A|^2 != sum lambda^2"
                )));
            }
            if p.lambda.windows(2).any(|w| w[0] > w[1]) {
                return Err(Error::InvalidArgument(format!(
                    "point {i}: lambda not ascending"
                )));
            }
            if (p.normal.norm() - 1.0).abs() > 1e-12 {
                return Err(Error::InvalidArgument(format!("point {i}: |normal| != 1")));
            }
        }
        Ok(())
    }
}

/// Surface area of the unit k-sphere.
pub fn unit_sphere_area(k: usize) -> f64 {
    match k {
        0 => 2.0,
        1 => std::f64::consts::TAU,
        k => unit_sphere_area(k - 2) * std::f64::consts::TAU / (k as f64 - 1.0),
    }
}

fn check_chain(points: &[Vec2], cyclic: bool) -> Result<()> {
    let n = points.len();
    if n < MIN_POINTS {
        return Err(Error::TooFewPoints {
            min: MIN_POINTS,
            got: n,
        });
    }
    for (i, p) in points.iter().enumerate() {
        if !p.is_finite() {
            return Err(Error::NonFinite {
                field: "position",
                index: i,
            });
        }
    }
    let seg = |i: usize, j: usize| points[j].dist(points[i]);
    let mut dmin = f64::INFINITY;
    let mut dmax: f64 = 0.0;
    let m = if cyclic { n } else { n - 1 };
    for i in 0..m {
        let d = seg(i, (i + 1) % n);
        if d == 0.0 {
            return Err(Error::DegeneratePoints { index: i });
        }
        dmin = dmin.min(d);
        dmax = dmax.max(d);
    }
    let ratio = dmax / dmin;
    if ratio > MAX_SPACING_RATIO {
        return Err(Error::SpacingRatio {
            ratio,
            max: MAX_SPACING_RATIO,
        });
    }
    Ok(())
}

fn signed_area(points: &[Vec2]) -> f64 {
    let n = points.len();
    let mut a = 0.0;
    for i in 0..n {
        a += points[i].cross(points[(i + 1) % n]);
    }
    0.5 * a
}

fn scan_finite(name: &'static str, values: &[f64]) -> Result<()> {
    for (i, v) in values.iter().enumerate() {
        if !v.is_finite() {
            return Err(Error::NonFinite {
                field: name,
                index: i,
            });
        }
    }
    Ok(())
}

/// Curvature, normal and metric data of a sampled plane curve, derived by
/// index-space finite differences.
pub(crate) struct CurveGeometry {
    pub speed: Vec<f64>,
    pub kappa: Vec<f64>,
    pub normal: Vec<Vec2>,
}

pub(crate) fn curve_geometry(points: &[Vec2], cyclic: bool) -> Result<CurveGeometry> {
    let n = points.len();
    let (xs, ys): (Vec<f64>, Vec<f64>) = points.iter().map(|p| (p.x, p.y)).unzip();
    let (s, e) = if cyclic {
        (EndRule::Periodic, EndRule::Periodic)
    } else {
        (EndRule::OneSided, EndRule::OneSided)
    };
    let xu = deriv1(&xs, 1.0, s, e);
    let yu = deriv1(&ys, 1.0, s, e);
    let xuu = deriv2(&xs, 1.0, s, e);
    let yuu = deriv2(&ys, 1.0, s, e);
    let mut speed = vec![0.0; n];
    let mut kappa = vec![0.0; n];
    let mut normal = vec![Vec2::ZERO; n];
    for i in 0..n {
        let su = xu[i].hypot(yu[i]);
        speed[i] = su;
        kappa[i] = (xu[i] * yuu[i] - yu[i] * xuu[i]) / (su * su * su);
        normal[i] = Vec2::new(yu[i] / su, -xu[i] / su);
    }
    scan_finite("curvature", &kappa)?;
    Ok(CurveGeometry {
        speed,
        kappa,
        normal,
    })
}

fn cumulative_arclength(speed: &[f64]) -> Vec<f64> {
    let mut c = Vec::with_capacity(speed.len());
    c.push(0.0);
    for i in 1..speed.len() {
        c.push(c[i - 1] + 0.5 * (speed[i - 1] + speed[i]));
    }
    c
}

/// Assembles a full curve frame from positions laid out on a (close to)
/// uniform index grid. No resampling happens here; callers with uneven
/// input should go through [`build_curve_frame`] instead.
pub fn curve_frame_from_positions(points: Vec<Vec2>, cyclic: bool, t: f64) -> Result<FlowFrame> {
    let n = points.len();
    let geo = curve_geometry(&points, cyclic)?;
    let (s, e) = if cyclic {
        (EndRule::Periodic, EndRule::Periodic)
    } else {
        (EndRule::OneSided, EndRule::OneSided)
    };
    let ku = deriv1(&geo.kappa, 1.0, s, e);
    let grad: Vec<f64> = (0..n).map(|i| ku[i] / geo.speed[i]).collect();
    let gu = deriv1(&grad, 1.0, s, e);
    let lap: Vec<f64> = (0..n).map(|i| gu[i] / geo.speed[i]).collect();
    scan_finite("grad H", &grad)?;
    scan_finite("laplacian H", &lap)?;
    let coords = cumulative_arclength(&geo.speed);
    let pts: Vec<FramePoint> = (0..n)
        .map(|i| FramePoint {
            position: points[i],
            normal: geo.normal[i],
            lambda: vec![geo.kappa[i]],
            h: geo.kappa[i],
            a_norm_sq: geo.kappa[i] * geo.kappa[i],
            grad_h: vec![grad[i]],
            lap_h: lap[i],
            area_weight: geo.speed[i],
            coord: coords[i],
            pole: false,
        })
        .collect();
    let mut frame = FlowFrame {
        t,
        dim: 1,
        rep: FrameRep::PlaneCurve,
        topology: if cyclic {
            Topology::Cyclic
        } else {
            Topology::Open {
                pole_start: false,
                pole_end: false,
            }
        },
        points: pts,
        stats: FrameStats {
            max_h: 0.0,
            min_h: 0.0,
            diameter: None,
        },
    };
    frame.refresh_stats();
    Ok(frame)
}

/// Builds a frame for a closed plane curve from a cyclic chain of positions.
///
/// The chain is normalized to counterclockwise orientation (so the outward
/// normal convention gives H > 0 on convex curves) and resampled to uniform
/// arclength before differentiation.
pub fn build_curve_frame(points: &[Vec2], t: f64) -> Result<FlowFrame> {
    check_chain(points, true)?;
    let mut pts = points.to_vec();
    if signed_area(&pts) < 0.0 {
        pts.reverse();
    }
    let spline = CurveSpline::fit(&pts, true)?;
    let resampled = spline.resample(pts.len());
    let mut frame = curve_frame_from_positions(resampled, true, t)?;
    frame.compute_diameter()?;
    Ok(frame)
}

/// Open-chain variant of [`build_curve_frame`] (no orientation
/// normalization; the normal points to the right of the traversal).
pub fn build_open_curve_frame(points: &[Vec2], t: f64) -> Result<FlowFrame> {
    check_chain(points, false)?;
    let spline = CurveSpline::fit(points, false)?;
    let resampled = spline.resample(points.len());
    curve_frame_from_positions(resampled, false, t)
}

/// Curvature and normal data of a rotational profile.
pub(crate) struct RotationalGeometry {
    pub speed: Vec<f64>,
    pub lambda_profile: Vec<f64>,
    pub lambda_rot: Vec<f64>,
    pub normal: Vec<Vec2>,
    pub mean: Vec<f64>,
}

fn pole_rules(pole_start: bool, pole_end: bool, even: bool) -> (EndRule, EndRule) {
    let pick = |pole: bool| {
        if pole {
            if even {
                EndRule::ReflectEven
            } else {
                EndRule::ReflectOdd
            }
        } else {
            EndRule::OneSided
        }
    };
    (pick(pole_start), pick(pole_end))
}

pub(crate) fn rotational_geometry(
    profile: &[Vec2],
    d: usize,
    pole_start: bool,
    pole_end: bool,
) -> Result<RotationalGeometry> {
    let n = profile.len();
    let (xs, rs): (Vec<f64>, Vec<f64>) = profile.iter().map(|p| (p.x, p.y)).unzip();
    let (sx, ex) = pole_rules(pole_start, pole_end, true);
    let (sr, er) = pole_rules(pole_start, pole_end, false);
    let xu = deriv1(&xs, 1.0, sx, ex);
    let ru = deriv1(&rs, 1.0, sr, er);
    let xuu = deriv2(&xs, 1.0, sx, ex);
    let ruu = deriv2(&rs, 1.0, sr, er);
    let mut speed = vec![0.0; n];
    let mut lp = vec![0.0; n];
    let mut lr = vec![0.0; n];
    let mut normal = vec![Vec2::ZERO; n];
    let mut mean = vec![0.0; n];
    for i in 0..n {
        let su = xu[i].hypot(ru[i]);
        speed[i] = su;
        lp[i] = (ru[i] * xuu[i] - xu[i] * ruu[i]) / (su * su * su);
        let pole = (i == 0 && pole_start) || (i == n - 1 && pole_end);
        lr[i] = if pole { lp[i] } else { xu[i] / (rs[i] * su) };
        normal[i] = Vec2::new(-ru[i] / su, xu[i] / su);
        mean[i] = lp[i] + (d as f64 - 1.0) * lr[i];
    }
    scan_finite("profile curvature", &lp)?;
    scan_finite("rotational curvature", &lr)?;
    Ok(RotationalGeometry {
        speed,
        lambda_profile: lp,
        lambda_rot: lr,
        normal,
        mean,
    })
}

/// Assembles a full rotational frame from profile positions on a (close to)
/// uniform index grid. Pole flags must match the endpoint radii. No
/// resampling happens here; see [`build_rotational_frame`] for raw input.
pub fn rotational_frame_from_profile(
    profile: Vec<Vec2>,
    d: usize,
    pole_start: bool,
    pole_end: bool,
    t: f64,
) -> Result<FlowFrame> {
    let n = profile.len();
    let geo = rotational_geometry(&profile, d, pole_start, pole_end)?;
    let (sh, eh) = pole_rules(pole_start, pole_end, true);
    let hu = deriv1(&geo.mean, 1.0, sh, eh);
    let hs: Vec<f64> = (0..n).map(|i| hu[i] / geo.speed[i]).collect();
    let (sg, eg) = pole_rules(pole_start, pole_end, false);
    let hsu = deriv1(&hs, 1.0, sg, eg);
    let hss: Vec<f64> = (0..n).map(|i| hsu[i] / geo.speed[i]).collect();
    let rs: Vec<f64> = profile.iter().map(|p| p.y).collect();
    let rus = deriv1(&rs, 1.0, sg, eg);
    let dm1 = d as f64 - 1.0;
    let mut lap = vec![0.0; n];
    for i in 0..n {
        let pole = (i == 0 && pole_start) || (i == n - 1 && pole_end);
        lap[i] = if pole {
            d as f64 * hss[i]
        } else {
            let r = profile[i].y;
            let rs_over_r = rus[i] / (geo.speed[i] * r);
            hss[i] + dm1 * rs_over_r * hs[i]
        };
    }
    scan_finite("grad H", &hs)?;
    scan_finite("laplacian H", &lap)?;
    let coords = cumulative_arclength(&geo.speed);
    let area_const = unit_sphere_area(d - 1);
    let pts: Vec<FramePoint> = (0..n)
        .map(|i| {
            let pole = (i == 0 && pole_start) || (i == n - 1 && pole_end);
            let (lp, lr) = (geo.lambda_profile[i], geo.lambda_rot[i]);
            // principal curvatures ascending, grad H permuted alongside
            let (lambda, grad_h) = if lp <= lr {
                let mut l = vec![lp];
                l.extend(std::iter::repeat_n(lr, d - 1));
                let mut g = vec![hs[i]];
                g.extend(std::iter::repeat_n(0.0, d - 1));
                (l, g)
            } else {
                let mut l: Vec<f64> = std::iter::repeat_n(lr, d - 1).collect();
                l.push(lp);
                let mut g: Vec<f64> = std::iter::repeat_n(0.0, d - 1).collect();
                g.push(hs[i]);
                (l, g)
            };
            let h: f64 = lambda.iter().sum();
            let a2: f64 = lambda.iter().map(|l| l * l).sum();
            FramePoint {
                position: profile[i],
                normal: geo.normal[i],
                lambda,
                h,
                a_norm_sq: a2,
                grad_h,
                lap_h: lap[i],
                area_weight: geo.speed[i] * profile[i].y.powi(d as i32 - 1) * area_const,
                coord: coords[i],
                pole,
            }
        })
        .collect();
    let mut frame = FlowFrame {
        t,
        dim: d,
        rep: FrameRep::Rotational,
        topology: Topology::Open {
            pole_start,
            pole_end,
        },
        points: pts,
        stats: FrameStats {
            max_h: 0.0,
            min_h: 0.0,
            diameter: None,
        },
    };
    frame.refresh_stats();
    Ok(frame)
}

/// Builds a rotational frame of intrinsic dimension `d >= 2` from a meridian
/// profile (axis coordinate, radius).
///
/// Radii must be nonnegative with zeros only at endpoints; an endpoint with
/// r = 0 is an axis pole and the profile must meet the axis orthogonally.
/// The profile is normalized to increasing axis coordinate and resampled to
/// uniform arclength.
pub fn build_rotational_frame(profile: &[Vec2], d: usize, t: f64) -> Result<FlowFrame> {
    if d < 2 {
        return Err(Error::InvalidArgument(format!(
            "rotational frames need d >= 2, got {d}"
        )));
    }
    let n = profile.len();
    if n < MIN_POINTS {
        return Err(Error::TooFewPoints {
            min: MIN_POINTS,
            got: n,
        });
    }
    let mut prof = profile.to_vec();
    if prof[n - 1].x < prof[0].x {
        prof.reverse();
    }
    let scale = prof
        .iter()
        .map(|p| p.x.abs().max(p.y.abs()))
        .fold(0.0, f64::max);
    let snap = 1e-12 * scale.max(1.0);
    for (i, p) in prof.iter_mut().enumerate() {
        if !p.is_finite() {
            return Err(Error::NonFinite {
                field: "profile",
                index: i,
            });
        }
        if p.y < -snap {
            return Err(Error::InvalidProfile {
                reason: format!("negative radius {} at index {i}", p.y),
            });
        }
        if p.y.abs() <= snap {
            if i != 0 && i != n - 1 {
                return Err(Error::InvalidProfile {
                    reason: format!("interior sample {i} touches the axis"),
                });
            }
            p.y = 0.0;
        }
    }
    let pole_start = prof[0].y == 0.0;
    let pole_end = prof[n - 1].y == 0.0;
    let spline = CurveSpline::fit(&prof, false)?;
    let mut resampled = spline.resample(n);
    // the resampler preserves endpoints; re-pin exact zeros at poles
    if pole_start {
        resampled[0].y = 0.0;
    }
    if pole_end {
        resampled[n - 1].y = 0.0;
    }
    // orthogonal meeting check at poles: the one-sided slope of the axis
    // coordinate must vanish relative to arclength
    for (idx, is_pole) in [(0usize, pole_start), (n - 1, pole_end)] {
        if !is_pole {
            continue;
        }
        let (a, b, c) = if idx == 0 {
            (resampled[0], resampled[1], resampled[2])
        } else {
            (resampled[n - 1], resampled[n - 2], resampled[n - 3])
        };
        let dx = -3.0 * a.x + 4.0 * b.x - c.x;
        let dr = -3.0 * a.y + 4.0 * b.y - c.y;
        let slope = dx.abs() / dx.hypot(dr);
        if slope > 0.1 {
            return Err(Error::InvalidProfile {
                reason: format!(
                    "profile endpoint {idx} touches the axis without meeting it orthogonally (|dx/ds| = {slope:.3})"
                ),
            });
        }
    }
    let mut frame = rotational_frame_from_profile(resampled, d, pole_start, pole_end, t)?;
    if frame.is_closed() {
        frame.compute_diameter()?;
    }
    Ok(frame)
}

/// Redistributes a frame's samples to uniform arclength (cubic interpolation
/// of positions), recomputing all curvature fields.
pub fn resample_arclength(frame: &FlowFrame, n: usize) -> Result<FlowFrame> {
    if n < MIN_POINTS {
        return Err(Error::TooFewPoints {
            min: MIN_POINTS,
            got: n,
        });
    }
    let positions = frame.positions();
    match frame.rep {
        FrameRep::PlaneCurve => {
            let cyclic = frame.topology == Topology::Cyclic;
            let spline = CurveSpline::fit(&positions, cyclic)?;
            let resampled = spline.resample(n);
            let mut out = curve_frame_from_positions(resampled, cyclic, frame.t)?;
            if cyclic {
                out.compute_diameter()?;
            }
            Ok(out)
        }
        FrameRep::Rotational => {
            let (pole_start, pole_end) = frame.topology.pole_flags();
            let spline = CurveSpline::fit(&positions, false)?;
            let mut resampled = spline.resample(n);
            if pole_start {
                resampled[0].y = 0.0;
            }
            if pole_end {
                resampled[n - 1].y = 0.0;
            }
            let mut out =
                rotational_frame_from_profile(resampled, frame.dim, pole_start, pole_end, frame.t)?;
            if out.is_closed() {
                out.compute_diameter()?;
            }
            Ok(out)
        }
    }
}

/// Extrinsic diameter of a closed frame.
///
/// Curves take the max pairwise sample distance. Rotational frames compare
/// profile samples both on the same meridian and on antipodal meridians,
/// which turns the O(n^2) scan over profile pairs into the true diameter of
/// the revolved hypersurface.
pub fn diameter(frame: &FlowFrame) -> Result<f64> {
    if !frame.is_closed() {
        return Err(Error::UnsupportedFrame {
            rep: frame.rep.label(),
        });
    }
    let n = frame.points.len();
    match frame.rep {
        FrameRep::PlaneCurve => {
            let pos = frame.positions();
            let rows = parallel::map_range(n, |i| {
                let mut best: f64 = 0.0;
                for j in i + 1..n {
                    best = best.max(pos[i].dist(pos[j]));
                }
                best
            });
            Ok(rows.into_iter().fold(0.0, f64::max))
        }
        FrameRep::Rotational => {
            let pos = frame.positions();
            let rows = parallel::map_range(n, |i| {
                let mut best: f64 = 0.0;
                for j in i..n {
                    let dx = pos[i].x - pos[j].x;
                    let same = dx.hypot(pos[i].y - pos[j].y);
                    let anti = dx.hypot(pos[i].y + pos[j].y);
                    best = best.max(same.max(anti));
                }
                best
            });
            Ok(rows.into_iter().fold(0.0, f64::max))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::{PI, TAU};

    pub(crate) fn circle_points(n: usize, r: f64) -> Vec<Vec2> {
        (0..n)
            .map(|i| {
                let a = TAU * i as f64 / n as f64;
                Vec2::new(r * a.cos(), r * a.sin())
            })
            .collect()
    }

    pub(crate) fn semicircle_profile(n: usize, r: f64) -> Vec<Vec2> {
        (0..n)
            .map(|i| {
                let th = PI * i as f64 / (n - 1) as f64;
                Vec2::new(-r * th.cos(), r * th.sin())
            })
            .collect()
    }

    #[test]
    fn unit_circle_curvature() {
        let frame = build_curve_frame(&circle_points(256, 1.0), 0.0).unwrap();
        for p in &frame.points {
            assert!((p.lambda[0] - 1.0).abs() < 1e-6, "kappa {}", p.lambda[0]);
            assert!((p.h - 1.0).abs() < 1e-6);
            assert!(p.grad_h[0].abs() < 1e-6);
        }
        frame.validate().unwrap();
    }

    #[test]
    fn radius_two_circle() {
        let frame = build_curve_frame(&circle_points(256, 2.0), 0.0).unwrap();
        for p in &frame.points {
            assert!((p.h - 0.5).abs() < 1e-6);
        }
    }

    #[test]
    fn clockwise_input_is_reoriented() {
        let mut pts = circle_points(128, 1.0);
        pts.reverse();
        let frame = build_curve_frame(&pts, 0.0).unwrap();
        assert!(frame.stats.min_h > 0.9);
    }

    #[test]
    fn grim_reaper_curvature_from_samples() {
        let n = 1024;
        let pts: Vec<Vec2> = (0..n)
            .map(|i| {
                let x = -1.2 + 2.4 * i as f64 / (n - 1) as f64;
                Vec2::new(x, -(x.cos().ln()))
            })
            .collect();
        let frame = build_open_curve_frame(&pts, 0.0).unwrap();
        for p in &frame.points {
            let expect = p.position.x.cos();
            assert!(
                (p.h - expect).abs() < 1e-5,
                "kappa {} vs cos x {} at x = {}",
                p.h,
                expect,
                p.position.x
            );
        }
    }

    #[test]
    fn sphere_frame_is_umbilic() {
        let frame = build_rotational_frame(&semicircle_profile(512, 1.0), 2, 0.0).unwrap();
        for p in &frame.points {
            assert!((p.lambda[0] - 1.0).abs() < 1e-5, "l1 {}", p.lambda[0]);
            assert!((p.lambda[1] - 1.0).abs() < 1e-5, "l2 {}", p.lambda[1]);
            assert!((p.h - 2.0).abs() < 1e-5);
        }
        frame.validate().unwrap();
        assert!(frame.is_closed());
        assert_relative_eq!(frame.stats.diameter.unwrap(), 2.0, epsilon = 1e-6);
    }

    #[test]
    fn sphere_grad_and_laplacian_vanish() {
        let frame = build_rotational_frame(&semicircle_profile(256, 1.0), 2, 0.0).unwrap();
        for p in &frame.points {
            assert!(p.grad_h_norm() < 1e-5, "gradH {}", p.grad_h_norm());
            assert!(p.lap_h.abs() < 2e-3, "lapH {}", p.lap_h);
        }
    }

    #[test]
    fn cylinder_frame() {
        let n = 64;
        let prof: Vec<Vec2> = (0..n)
            .map(|i| Vec2::new(5.0 * i as f64 / (n - 1) as f64, 1.0))
            .collect();
        let frame = build_rotational_frame(&prof, 2, 0.0).unwrap();
        for p in &frame.points {
            assert!(p.lambda[0].abs() < 1e-9);
            assert!((p.lambda[1] - 1.0).abs() < 1e-9);
            assert!((p.h - 1.0).abs() < 1e-9);
        }
        assert!(!frame.is_closed());
        assert!(diameter(&frame).is_err());
    }

    #[test]
    fn ellipsoid_equator_curvature() {
        // spheroid with semi-axis a along the rotation axis, b transverse
        let (a, b) = (1.2, 1.0);
        let n = 513;
        let prof: Vec<Vec2> = (0..n)
            .map(|i| {
                let th = PI * i as f64 / (n - 1) as f64;
                Vec2::new(-a * th.cos(), b * th.sin())
            })
            .collect();
        let frame = build_rotational_frame(&prof, 2, 0.0).unwrap();
        let eq = frame
            .points
            .iter()
            .max_by(|p, q| p.position.y.partial_cmp(&q.position.y).unwrap())
            .unwrap();
        let expect = b / (a * a) + 1.0 / b;
        assert!(
            (eq.h - expect).abs() < 1e-4,
            "H {} vs closed form {}",
            eq.h,
            expect
        );
        assert_relative_eq!(frame.stats.diameter.unwrap(), 2.0 * a, epsilon = 1e-4);
    }

    #[test]
    fn fd_consistency_halving_spacing() {
        // order-4 interior scheme: halving spacing must cut the max error of
        // kappa by at least 8x on the circle. grad H and lap H vanish
        // identically there (their errors sit at the roundoff floor), so
        // they are checked below on a closed curve where they are nonzero.
        let errs: Vec<f64> = [128usize, 256]
            .iter()
            .map(|&n| {
                let f = build_curve_frame(&circle_points(n, 1.0), 0.0).unwrap();
                f.points
                    .iter()
                    .map(|p| (p.h - 1.0).abs())
                    .fold(0.0, f64::max)
            })
            .collect();
        assert!(
            errs[0] / errs[1] >= 8.0,
            "kappa ratio {}",
            errs[0] / errs[1]
        );

        // grad H and lap H are checked on the grim reaper (kappa = cos x,
        // sampled at uniform arclength by the oracle), away from the
        // order-2 one-sided ends. Past n ~ 512 the lap H error is pinned to
        // the 1/h^4 roundoff floor, so the doubling runs at 128 -> 256.
        let errs: Vec<(f64, f64, f64)> = [128usize, 256]
            .iter()
            .map(|&n| {
                let samples = crate::oracle::grim_reaper_frame(0.0, 1.2, n)
                    .unwrap()
                    .positions();
                let f = build_open_curve_frame(&samples, 0.0).unwrap();
                let (mut ek, mut eg, mut el) = (0.0f64, 0.0f64, 0.0f64);
                for p in &f.points[n / 10..n - n / 10] {
                    let x = p.position.x;
                    ek = ek.max((p.h - x.cos()).abs());
                    eg = eg.max((p.grad_h[0] + x.sin() * x.cos()).abs());
                    el = el.max((p.lap_h + (2.0 * x).cos() * x.cos()).abs());
                }
                (ek, eg, el)
            })
            .collect();
        assert!(
            errs[0].0 / errs[1].0 >= 8.0,
            "kappa ratio {}",
            errs[0].0 / errs[1].0
        );
        assert!(
            errs[0].1 / errs[1].1 >= 8.0,
            "grad ratio {}",
            errs[0].1 / errs[1].1
        );
        assert!(
            errs[0].2 / errs[1].2 >= 8.0,
            "lap ratio {}",
            errs[0].2 / errs[1].2
        );
    }

    #[test]
    fn fd_consistency_sphere() {
        let errs: Vec<f64> = [128usize, 256]
            .iter()
            .map(|&n| {
                let f = build_rotational_frame(&semicircle_profile(n, 1.0), 2, 0.0).unwrap();
                f.points
                    .iter()
                    .map(|p| (p.h - 2.0).abs())
                    .fold(0.0, f64::max)
            })
            .collect();
        assert!(errs[0] / errs[1] >= 8.0, "H ratio {}", errs[0] / errs[1]);
    }

    #[test]
    fn pole_regularity_three_resolutions() {
        let mut gaps = Vec::new();
        for n in [64usize, 128, 256] {
            let f = build_rotational_frame(&semicircle_profile(n, 1.0), 2, 0.0).unwrap();
            // first sample strictly after the pole
            let p = &f.points[1];
            gaps.push((p.lambda[1] - p.lambda[0]).abs());
        }
        assert!(gaps[0] < 1e-4);
        assert!(gaps[1] <= gaps[0] + 1e-12);
        assert!(gaps[2] <= gaps[1] + 1e-12);
    }

    #[test]
    fn resample_preserves_circle() {
        let f = build_curve_frame(&circle_points(256, 1.0), 0.0).unwrap();
        let r = resample_arclength(&f, 128).unwrap();
        assert_eq!(r.len(), 128);
        for p in &r.points {
            assert!((p.h - 1.0).abs() < 1e-6);
        }
        // measure both frames with the same quadrature ruler
        let l0 = CurveSpline::fit(&f.positions(), true)
            .unwrap()
            .total_arclength();
        let l1 = CurveSpline::fit(&r.positions(), true)
            .unwrap()
            .total_arclength();
        assert!(
            ((l0 - l1) / l0).abs() < 1e-8,
            "arclength drift {}",
            ((l0 - l1) / l0).abs()
        );
    }

    #[test]
    fn resample_is_idempotent_on_uniform_frames() {
        let f = build_curve_frame(&circle_points(200, 1.0), 0.0).unwrap();
        let r = resample_arclength(&f, 200).unwrap();
        let max_move = f
            .points
            .iter()
            .zip(&r.points)
            .map(|(a, b)| a.position.dist(b.position))
            .fold(0.0, f64::max);
        assert!(max_move < 1e-10, "moved {max_move}");
    }

    #[test]
    fn error_paths() {
        assert!(matches!(
            build_curve_frame(&circle_points(8, 1.0), 0.0),
            Err(Error::TooFewPoints { .. })
        ));
        let mut dup = circle_points(64, 1.0);
        dup[10] = dup[9];
        assert!(matches!(
            build_curve_frame(&dup, 0.0),
            Err(Error::DegeneratePoints { .. })
        ));
        let mut bad = circle_points(64, 1.0);
        bad[0] = Vec2::new(f64::NAN, 0.0);
        assert!(matches!(
            build_curve_frame(&bad, 0.0),
            Err(Error::NonFinite { .. })
        ));
        // interior axis touch
        let mut prof = semicircle_profile(64, 1.0);
        prof[32].y = 0.0;
        assert!(matches!(
            build_rotational_frame(&prof, 2, 0.0),
            Err(Error::InvalidProfile { .. })
        ));
        // oblique axis meeting: straight cone-like profile
        let cone: Vec<Vec2> = (0..32)
            .map(|i| {
                let s = i as f64 / 31.0;
                Vec2::new(s, s)
            })
            .collect();
        assert!(matches!(
            build_rotational_frame(&cone, 2, 0.0),
            Err(Error::InvalidProfile { .. })
        ));
        // negative radius
        let mut neg = semicircle_profile(64, 1.0);
        neg[10].y = -0.2;
        assert!(matches!(
            build_rotational_frame(&neg, 2, 0.0),
            Err(Error::InvalidProfile { .. })
        ));
    }

    #[test]
    fn spacing_ratio_rejected() {
        let mut pts = Vec::new();
        for i in 0..64 {
            let a = TAU * (i as f64 / 64.0).powi(3);
            pts.push(Vec2::new(a.cos(), a.sin()));
        }
        // cubic clustering gives a huge ratio
        assert!(matches!(
            build_curve_frame(&pts, 0.0),
            Err(Error::SpacingRatio { .. }) | Err(Error::DegeneratePoints { .. })
        ));
    }
}
