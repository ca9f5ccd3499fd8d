//! Closed-form exact solutions of mean curvature flow.
//!
//! These are the ground-truth fixtures every inequality check is calibrated
//! against: shrinking circles/spheres, shrinking cylinders, the grim reaper
//! translator, the rotationally symmetric bowl translator (profile obtained
//! by integrating the translator ODE from the tip), and the ancient paperclip
//! oval e^t cosh y = cos x.
//!
//! Every oracle can report, alongside a frame at time t, the positions its
//! material samples occupy a short time later under *normal* motion. The
//! self-test [`Oracle::residual`] compares the centered difference of those
//! world lines against the mean curvature vector; all shipped oracles must
//! pass it at 1e-6, and any new closed form must be gated the same way
//! before being trusted.

use crate::error::{Error, Result};
use crate::frame::{unit_sphere_area, FlowFrame, FramePoint, FrameRep, FrameStats, Topology};
use crate::history::FlowHistory;
use crate::vec2::Vec2;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleKind {
    Sphere,
    Cylinder,
    GrimReaper,
    Bowl,
    Paperclip,
}

impl OracleKind {
    pub fn label(self) -> &'static str {
        match self {
            OracleKind::Sphere => "sphere",
            OracleKind::Cylinder => "cylinder",
            OracleKind::GrimReaper => "grim-reaper",
            OracleKind::Bowl => "bowl",
            OracleKind::Paperclip => "paperclip",
        }
    }
}

/// Time convention: finite-time solutions start at t = 0 with radius
/// `scale`; ancient solutions use negative times with extinction at 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TimeMode {
    FiniteTime,
    Ancient,
}

#[derive(Debug, Clone)]
pub struct OracleSpec {
    pub kind: OracleKind,
    pub dim: usize,
    /// Initial radius (sphere/cylinder). Ignored by ancient-mode radius laws
    /// and by the translators, which are canonical unit-speed solutions.
    pub scale: f64,
    /// Parameter-domain cutoff for noncompact kinds.
    pub truncation: f64,
    pub resolution: usize,
    pub mode: TimeMode,
}

impl OracleSpec {
    pub fn sphere(dim: usize, r0: f64) -> Self {
        OracleSpec {
            kind: OracleKind::Sphere,
            dim,
            scale: r0,
            truncation: 0.0,
            resolution: 128,
            mode: TimeMode::FiniteTime,
        }
    }

    pub fn ancient_sphere(dim: usize) -> Self {
        OracleSpec {
            mode: TimeMode::Ancient,
            ..OracleSpec::sphere(dim, 1.0)
        }
    }

    pub fn cylinder(dim: usize, r0: f64, truncation: f64) -> Self {
        OracleSpec {
            kind: OracleKind::Cylinder,
            dim,
            scale: r0,
            truncation,
            resolution: 128,
            mode: TimeMode::FiniteTime,
        }
    }

    pub fn grim_reaper(truncation: f64) -> Self {
        OracleSpec {
            kind: OracleKind::GrimReaper,
            dim: 1,
            scale: 1.0,
            truncation,
            resolution: 128,
            mode: TimeMode::Ancient,
        }
    }

    pub fn bowl(dim: usize, truncation: f64) -> Self {
        OracleSpec {
            kind: OracleKind::Bowl,
            dim,
            scale: 1.0,
            truncation,
            resolution: 128,
            mode: TimeMode::Ancient,
        }
    }

    pub fn paperclip() -> Self {
        OracleSpec {
            kind: OracleKind::Paperclip,
            dim: 1,
            scale: 1.0,
            truncation: 0.0,
            resolution: 256,
            mode: TimeMode::Ancient,
        }
    }

    pub fn with_resolution(mut self, n: usize) -> Self {
        self.resolution = n;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.scale <= 0.0 {
            return Err(Error::InvalidArgument("oracle scale must be > 0".into()));
        }
        if self.resolution < 32 {
            return Err(Error::InvalidArgument(format!(
                "oracle resolution must be >= 32, got {}",
                self.resolution
            )));
        }
        match self.kind {
            OracleKind::Sphere => {
                if self.dim < 1 {
                    return Err(Error::InvalidArgument("sphere needs d >= 1".into()));
                }
            }
            OracleKind::Cylinder | OracleKind::Bowl => {
                if self.dim < 2 {
                    return Err(Error::InvalidArgument(format!(
                        "{} needs d >= 2",
                        self.kind.label()
                    )));
                }
                if !(self.truncation.is_finite() && self.truncation > 0.0) {
                    return Err(Error::InvalidArgument(
                        "noncompact oracle needs a finite positive truncation".into(),
                    ));
                }
            }
            OracleKind::GrimReaper => {
                if self.dim != 1 {
                    return Err(Error::InvalidArgument(
                        "grim reaper is a curve (d = 1)".into(),
                    ));
                }
                if !(self.truncation > 0.0 && self.truncation < std::f64::consts::FRAC_PI_2) {
                    return Err(Error::InvalidArgument(
                        "grim reaper truncation must lie in (0, pi/2)".into(),
                    ));
                }
            }
            OracleKind::Paperclip => {
                if self.dim != 1 {
                    return Err(Error::InvalidArgument(
                        "paperclip is a curve (d = 1)".into(),
                    ));
                }
            }
        }
        Ok(())
    }
}

/// A validated oracle, with the bowl's dense profile table cached.
#[derive(Debug, Clone)]
pub struct Oracle {
    pub spec: OracleSpec,
    bowl: Option<BowlProfile>,
}

impl Oracle {
    pub fn new(spec: OracleSpec) -> Result<Self> {
        spec.validate()?;
        let bowl = if spec.kind == OracleKind::Bowl {
            Some(BowlProfile::integrate(spec.dim, spec.truncation))
        } else {
            None
        };
        Ok(Oracle { spec, bowl })
    }

    /// Open time interval on which frames can be produced.
    pub fn time_interval(&self) -> (f64, f64) {
        let d = self.spec.dim as f64;
        match (self.spec.kind, self.spec.mode) {
            (OracleKind::Sphere, TimeMode::FiniteTime) => (
                f64::NEG_INFINITY,
                self.spec.scale * self.spec.scale / (2.0 * d),
            ),
            (OracleKind::Sphere, TimeMode::Ancient) => (f64::NEG_INFINITY, 0.0),
            (OracleKind::Cylinder, TimeMode::FiniteTime) => (
                f64::NEG_INFINITY,
                self.spec.scale * self.spec.scale / (2.0 * (d - 1.0)),
            ),
            (OracleKind::Cylinder, TimeMode::Ancient) => (f64::NEG_INFINITY, 0.0),
            (OracleKind::GrimReaper, _) | (OracleKind::Bowl, _) => {
                (f64::NEG_INFINITY, f64::INFINITY)
            }
            (OracleKind::Paperclip, _) => (-300.0, 0.0),
        }
    }

    fn check_time(&self, t: f64) -> Result<()> {
        let (lo, hi) = self.time_interval();
        if t <= lo || t >= hi {
            return Err(Error::InvalidTime { t, lo, hi });
        }
        Ok(())
    }

    fn radius(&self, t: f64) -> Result<f64> {
        let d = self.spec.dim as f64;
        let shrink = match self.spec.kind {
            OracleKind::Sphere => 2.0 * d,
            OracleKind::Cylinder => 2.0 * (d - 1.0),
            _ => unreachable!("radius law only applies to sphere/cylinder"),
        };
        let r_sq = match self.spec.mode {
            TimeMode::FiniteTime => self.spec.scale * self.spec.scale - shrink * t,
            TimeMode::Ancient => -shrink * t,
        };
        if r_sq <= 0.0 {
            let (_, hi) = self.time_interval();
            return Err(Error::Extinction { t, t_ext: hi });
        }
        Ok(r_sq.sqrt())
    }

    /// Exact frame at time t.
    pub fn frame(&self, t: f64) -> Result<FlowFrame> {
        self.check_time(t)?;
        match self.spec.kind {
            OracleKind::Sphere => self.sphere_frame(t),
            OracleKind::Cylinder => self.cylinder_frame(t),
            OracleKind::GrimReaper => self.grim_reaper_frame(t),
            OracleKind::Bowl => self.bowl_frame(t),
            OracleKind::Paperclip => self.paperclip_frame(t),
        }
    }

    /// Oracle history over the given (strictly increasing) times.
    pub fn history(&self, times: &[f64]) -> Result<FlowHistory> {
        let frames = times
            .iter()
            .map(|&t| self.frame(t))
            .collect::<Result<Vec<_>>>()?;
        FlowHistory::from_frames(frames)
    }

    /// Positions at time t + dt of the material samples of `frame(t)`,
    /// moving by normal velocity. `dt` may be negative.
    pub fn flow_positions(&self, t: f64, dt: f64) -> Result<Vec<Vec2>> {
        self.check_time(t)?;
        self.check_time(t + dt)?;
        match self.spec.kind {
            OracleKind::Sphere => {
                let r1 = self.radius(t + dt)?;
                Ok(self
                    .sphere_angles()
                    .into_iter()
                    .map(|th| self.sphere_position(th, r1))
                    .collect())
            }
            OracleKind::Cylinder => {
                let r1 = self.radius(t + dt)?;
                Ok(self
                    .cylinder_axials()
                    .into_iter()
                    .map(|x| Vec2::new(x, r1))
                    .collect())
            }
            OracleKind::GrimReaper => Ok(self
                .grim_reaper_xs(t)
                .into_iter()
                .map(|x| {
                    // normal world line: tan x(t) scales by e^{-t}
                    let x1 = (x.tan() * (-dt).exp()).atan();
                    Vec2::new(x1, t + dt - x1.cos().ln())
                })
                .collect()),
            OracleKind::Bowl => {
                let bowl = self.bowl.as_ref().expect("bowl profile cached");
                Ok(self
                    .bowl_radii()
                    .into_iter()
                    .map(|r0| {
                        let r1 = bowl.advect_radius(r0, dt);
                        Vec2::new(bowl.height(r1) + t + dt, r1)
                    })
                    .collect())
            }
            OracleKind::Paperclip => Ok(self
                .paperclip_points(t)
                .into_iter()
                .map(|p| paperclip_advect(p, t, dt))
                .collect()),
        }
    }

    /// Max deviation of the centered world-line velocity from the mean
    /// curvature vector over all samples of `frame(t)`.
    pub fn residual(&self, t: f64, dt_probe: f64) -> Result<f64> {
        if !(dt_probe > 0.0) {
            return Err(Error::InvalidArgument("dt_probe must be > 0".into()));
        }
        let frame = self.frame(t)?;
        let plus = self.flow_positions(t, dt_probe)?;
        let minus = self.flow_positions(t, -dt_probe)?;
        let mut worst: f64 = 0.0;
        for (i, p) in frame.points.iter().enumerate() {
            let vel = (plus[i] - minus[i]) / (2.0 * dt_probe);
            let hvec = p.normal * (-p.h);
            worst = worst.max((vel - hvec).norm());
        }
        Ok(worst)
    }

    fn sphere_angles(&self) -> Vec<f64> {
        let n = self.spec.resolution;
        if self.spec.dim == 1 {
            (0..n)
                .map(|i| std::f64::consts::TAU * i as f64 / n as f64)
                .collect()
        } else {
            (0..n)
                .map(|i| std::f64::consts::PI * i as f64 / (n - 1) as f64)
                .collect()
        }
    }

    fn sphere_position(&self, theta: f64, r: f64) -> Vec2 {
        if self.spec.dim == 1 {
            Vec2::new(r * theta.cos(), r * theta.sin())
        } else if theta == 0.0 {
            Vec2::new(-r, 0.0)
        } else if theta == std::f64::consts::PI {
            // sin(pi) is ~1.2e-16 in f64; poles sit exactly on the axis
            Vec2::new(r, 0.0)
        } else {
            Vec2::new(-r * theta.cos(), r * theta.sin())
        }
    }

    fn sphere_frame(&self, t: f64) -> Result<FlowFrame> {
        let d = self.spec.dim;
        let r = self.radius(t)?;
        let n = self.spec.resolution;
        let angles = self.sphere_angles();
        let lam = 1.0 / r;
        let h = d as f64 / r;
        let (rep, topology, dtheta) = if d == 1 {
            (
                FrameRep::PlaneCurve,
                Topology::Cyclic,
                std::f64::consts::TAU / n as f64,
            )
        } else {
            (
                FrameRep::Rotational,
                Topology::Open {
                    pole_start: true,
                    pole_end: true,
                },
                std::f64::consts::PI / (n - 1) as f64,
            )
        };
        let area_const = unit_sphere_area(d.saturating_sub(1).max(0));
        let points: Vec<FramePoint> = angles
            .iter()
            .enumerate()
            .map(|(i, &th)| {
                let pos = self.sphere_position(th, r);
                let normal = if d == 1 {
                    Vec2::new(th.cos(), th.sin())
                } else {
                    Vec2::new(-th.cos(), th.sin())
                };
                let pole = d > 1 && (i == 0 || i == n - 1);
                let end_half = if d > 1 && (i == 0 || i == n - 1) {
                    0.5
                } else {
                    1.0
                };
                let weight = if d == 1 {
                    r * dtheta
                } else {
                    end_half * r * dtheta * (r * th.sin()).powi(d as i32 - 1) * area_const
                };
                FramePoint {
                    position: pos,
                    normal,
                    lambda: vec![lam; d],
                    h,
                    a_norm_sq: d as f64 * lam * lam,
                    grad_h: vec![0.0; d],
                    lap_h: 0.0,
                    area_weight: weight,
                    coord: r * th,
                    pole,
                }
            })
            .collect();
        let mut frame = FlowFrame {
            t,
            dim: d,
            rep,
            topology,
            points,
            stats: FrameStats {
                max_h: h,
                min_h: h,
                diameter: None,
            },
        };
        frame.compute_diameter()?;
        Ok(frame)
    }

    fn cylinder_axials(&self) -> Vec<f64> {
        let n = self.spec.resolution;
        (0..n)
            .map(|i| self.spec.truncation * i as f64 / (n - 1) as f64)
            .collect()
    }

    fn cylinder_frame(&self, t: f64) -> Result<FlowFrame> {
        let d = self.spec.dim;
        let r = self.radius(t)?;
        let n = self.spec.resolution;
        let lam_rot = 1.0 / r;
        let h = (d as f64 - 1.0) / r;
        let dx = self.spec.truncation / (n - 1) as f64;
        let area_const = unit_sphere_area(d - 1);
        let points: Vec<FramePoint> = self
            .cylinder_axials()
            .into_iter()
            .enumerate()
            .map(|(i, x)| {
                let end_half = if i == 0 || i == n - 1 { 0.5 } else { 1.0 };
                let mut lambda = vec![lam_rot; d];
                lambda[0] = 0.0;
                FramePoint {
                    position: Vec2::new(x, r),
                    normal: Vec2::new(0.0, 1.0),
                    lambda,
                    h,
                    a_norm_sq: (d as f64 - 1.0) * lam_rot * lam_rot,
                    grad_h: vec![0.0; d],
                    lap_h: 0.0,
                    area_weight: end_half * dx * r.powi(d as i32 - 1) * area_const,
                    coord: x,
                    pole: false,
                }
            })
            .collect();
        let mut frame = FlowFrame {
            t,
            dim: d,
            rep: FrameRep::Rotational,
            topology: Topology::Open {
                pole_start: false,
                pole_end: false,
            },
            points,
            stats: FrameStats {
                max_h: 0.0,
                min_h: 0.0,
                diameter: None,
            },
        };
        frame.refresh_stats();
        Ok(frame)
    }

    /// Sample abscissas at uniform arclength: s = asinh(tan x) inverts to
    /// x = atan(sinh s).
    fn grim_reaper_xs(&self, _t: f64) -> Vec<f64> {
        let n = self.spec.resolution;
        let s_max = self.spec.truncation.tan().asinh();
        (0..n)
            .map(|i| {
                let s = -s_max + 2.0 * s_max * i as f64 / (n - 1) as f64;
                s.sinh().atan()
            })
            .collect()
    }

    fn grim_reaper_frame(&self, t: f64) -> Result<FlowFrame> {
        let n = self.spec.resolution;
        let s_max = self.spec.truncation.tan().asinh();
        let ds = 2.0 * s_max / (n - 1) as f64;
        let xs = self.grim_reaper_xs(t);
        let points: Vec<FramePoint> = xs
            .into_iter()
            .enumerate()
            .map(|(i, x)| {
                let kappa = x.cos();
                let end_half = if i == 0 || i == n - 1 { 0.5 } else { 1.0 };
                FramePoint {
                    position: Vec2::new(x, t - x.cos().ln()),
                    normal: Vec2::new(x.sin(), -x.cos()),
                    lambda: vec![kappa],
                    h: kappa,
                    a_norm_sq: kappa * kappa,
                    grad_h: vec![-x.sin() * x.cos()],
                    lap_h: -(2.0 * x).cos() * x.cos(),
                    area_weight: end_half * ds,
                    coord: (i as f64) * ds,
                    pole: false,
                }
            })
            .collect();
        let mut frame = FlowFrame {
            t,
            dim: 1,
            rep: FrameRep::PlaneCurve,
            topology: Topology::Open {
                pole_start: false,
                pole_end: false,
            },
            points,
            stats: FrameStats {
                max_h: 0.0,
                min_h: 0.0,
                diameter: None,
            },
        };
        frame.refresh_stats();
        Ok(frame)
    }

    fn bowl_radii(&self) -> Vec<f64> {
        let n = self.spec.resolution;
        (0..n)
            .map(|i| self.spec.truncation * i as f64 / (n - 1) as f64)
            .collect()
    }

    fn bowl_frame(&self, t: f64) -> Result<FlowFrame> {
        let d = self.spec.dim;
        let bowl = self.bowl.as_ref().expect("bowl profile cached");
        let n = self.spec.resolution;
        let area_const = unit_sphere_area(d - 1);
        let radii = self.bowl_radii();
        let mut coord = 0.0;
        let mut prev: Option<(f64, f64)> = None;
        let points: Vec<FramePoint> = radii
            .into_iter()
            .enumerate()
            .map(|(i, r)| {
                let f = bowl.fields(r);
                let ds_dr = (1.0 + f.slope * f.slope).sqrt();
                if let Some((r_prev, dsdr_prev)) = prev {
                    coord += 0.5 * (ds_dr + dsdr_prev) * (r - r_prev);
                }
                prev = Some((r, ds_dr));
                let (lambda, grad_h) = if f.lambda_profile <= f.lambda_rot {
                    let mut l = vec![f.lambda_profile];
                    l.extend(std::iter::repeat_n(f.lambda_rot, d - 1));
                    let mut g = vec![f.h_s];
                    g.extend(std::iter::repeat_n(0.0, d - 1));
                    (l, g)
                } else {
                    let mut l: Vec<f64> = std::iter::repeat_n(f.lambda_rot, d - 1).collect();
                    l.push(f.lambda_profile);
                    let mut g: Vec<f64> = std::iter::repeat_n(0.0, d - 1).collect();
                    g.push(f.h_s);
                    (l, g)
                };
                let h: f64 = lambda.iter().sum();
                let a2: f64 = lambda.iter().map(|l| l * l).sum();
                let end_half = if i == 0 || i == n - 1 { 0.5 } else { 1.0 };
                let dr = self.spec.truncation / (n - 1) as f64;
                FramePoint {
                    position: Vec2::new(bowl.height(r) + t, r),
                    normal: Vec2::new(-1.0, f.slope) / ds_dr,
                    lambda,
                    h,
                    a_norm_sq: a2,
                    grad_h,
                    lap_h: f.lap_h,
                    area_weight: end_half * ds_dr * dr * r.powi(d as i32 - 1) * area_const,
                    coord,
                    pole: i == 0,
                }
            })
            .collect();
        let mut frame = FlowFrame {
            t,
            dim: d,
            rep: FrameRep::Rotational,
            topology: Topology::Open {
                pole_start: true,
                pole_end: false,
            },
            points,
            stats: FrameStats {
                max_h: 0.0,
                min_h: 0.0,
                diameter: None,
            },
        };
        frame.refresh_stats();
        Ok(frame)
    }

    fn paperclip_points(&self, t: f64) -> Vec<Vec2> {
        let n = self.spec.resolution;
        let c = (1.0 - (2.0 * t).exp()).sqrt();
        (0..n)
            .map(|i| {
                let th = std::f64::consts::TAU * i as f64 / n as f64;
                paperclip_point(th, t, c)
            })
            .collect()
    }

    fn paperclip_frame(&self, t: f64) -> Result<FlowFrame> {
        let n = self.spec.resolution;
        let c = (1.0 - (2.0 * t).exp()).sqrt();
        if !(c > 0.0) {
            return Err(Error::InvalidTime {
                t,
                lo: -300.0,
                hi: 0.0,
            });
        }
        let mut coord = 0.0;
        let mut prev_kappa: Option<f64> = None;
        let dtheta = std::f64::consts::TAU / n as f64;
        let points: Vec<FramePoint> = (0..n)
            .map(|i| {
                let th = dtheta * i as f64;
                let pos = paperclip_point(th, t, c);
                let kappa = (1.0 - c * c * th.sin().powi(2)).sqrt() / c;
                // ds = dtheta / kappa along the Gauss-angle parameterization
                if let Some(k_prev) = prev_kappa {
                    coord += 0.5 * (1.0 / kappa + 1.0 / k_prev) * dtheta;
                }
                prev_kappa = Some(kappa);
                let kappa_s = -th.sin() * th.cos();
                let kappa_ss = -(2.0 * th).cos() * kappa;
                FramePoint {
                    position: pos,
                    normal: Vec2::new(th.sin(), -th.cos()),
                    lambda: vec![kappa],
                    h: kappa,
                    a_norm_sq: kappa * kappa,
                    grad_h: vec![kappa_s],
                    lap_h: kappa_ss,
                    area_weight: dtheta / kappa,
                    coord,
                    pole: false,
                }
            })
            .collect();
        let mut frame = FlowFrame {
            t,
            dim: 1,
            rep: FrameRep::PlaneCurve,
            topology: Topology::Cyclic,
            points,
            stats: FrameStats {
                max_h: 0.0,
                min_h: 0.0,
                diameter: None,
            },
        };
        frame.refresh_stats();
        frame.compute_diameter()?;
        Ok(frame)
    }
}

/// Point of the paperclip oval at Gauss angle theta: the tangent direction
/// is (cos theta, sin theta) and the support of e^t cosh y = cos x gives
/// sin x = c sin theta, e^t sinh y = -c cos theta.
fn paperclip_point(theta: f64, t: f64, c: f64) -> Vec2 {
    let x = (c * theta.sin()).asin();
    let y = (-c * theta.cos() * (-t).exp()).asinh();
    Vec2::new(x, y)
}

/// One RK4 step of the normal flow of the paperclip from a point on the
/// curve at time t.
fn paperclip_advect(p: Vec2, t: f64, dt: f64) -> Vec2 {
    let vel = |q: Vec2, tau: f64| -> Vec2 {
        let c2 = 1.0 - (2.0 * tau).exp();
        let cs = c2.sqrt();
        let kappa = q.x.cos() / cs;
        let nu = Vec2::new(q.x.sin(), tau.exp() * q.y.sinh()) / cs;
        nu * (-kappa)
    };
    let k1 = vel(p, t);
    let k2 = vel(p + k1 * (dt / 2.0), t + dt / 2.0);
    let k3 = vel(p + k2 * (dt / 2.0), t + dt / 2.0);
    let k4 = vel(p + k3 * dt, t + dt);
    p + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (dt / 6.0)
}

/// Dense solution of the bowl translator profile ODE
/// x'' = (1 + x'^2)(1 - (d-1) x'/r), integrated in the radius from the tip
/// with the regular series start x'(r) = r/d + r^3/(d^3 (d+2)) + O(r^5).
#[derive(Debug, Clone)]
struct BowlProfile {
    dim: usize,
    step: f64,
    height: Vec<f64>,
    slope: Vec<f64>,
}

#[derive(Debug, Clone, Copy)]
struct BowlFields {
    slope: f64,
    lambda_profile: f64,
    lambda_rot: f64,
    h_s: f64,
    lap_h: f64,
}

impl BowlProfile {
    fn integrate(dim: usize, r_max: f64) -> Self {
        let n = ((r_max / 2e-4).ceil() as usize).clamp(4001, 60001);
        let step = r_max / (n - 1) as f64;
        let d = dim as f64;
        let rhs = |r: f64, x: f64, p: f64| -> (f64, f64) {
            let _ = x;
            (p, (1.0 + p * p) * (1.0 - (d - 1.0) * p / r))
        };
        let mut height = vec![0.0; n];
        let mut slope = vec![0.0; n];
        // series start at the first node off the tip
        let b3 = 1.0 / (d * d * d * (d + 2.0));
        let r1 = step;
        height[1] = r1 * r1 / (2.0 * d) + b3 * r1.powi(4) / 4.0;
        slope[1] = r1 / d + b3 * r1.powi(3);
        for i in 1..n - 1 {
            let r = i as f64 * step;
            let (x, p) = (height[i], slope[i]);
            let (k1x, k1p) = rhs(r, x, p);
            let (k2x, k2p) = rhs(r + step / 2.0, x + k1x * step / 2.0, p + k1p * step / 2.0);
            let (k3x, k3p) = rhs(r + step / 2.0, x + k2x * step / 2.0, p + k2p * step / 2.0);
            let (k4x, k4p) = rhs(r + step, x + k3x * step, p + k3p * step);
            height[i + 1] = x + step * (k1x + 2.0 * k2x + 2.0 * k3x + k4x) / 6.0;
            slope[i + 1] = p + step * (k1p + 2.0 * k2p + 2.0 * k3p + k4p) / 6.0;
        }
        BowlProfile {
            dim,
            step,
            height,
            slope,
        }
    }

    fn locate(&self, r: f64) -> (usize, f64) {
        let n = self.height.len();
        let u = (r / self.step).floor() as usize;
        let i = u.min(n - 2);
        (i, r - i as f64 * self.step)
    }

    fn slope_deriv(&self, r: f64, p: f64) -> f64 {
        let d = self.dim as f64;
        if r == 0.0 {
            1.0 / d
        } else {
            (1.0 + p * p) * (1.0 - (d - 1.0) * p / r)
        }
    }

    /// Cubic Hermite interpolation of the slope.
    fn slope_at(&self, r: f64) -> f64 {
        let (i, dr) = self.locate(r);
        let h = self.step;
        let (p0, p1) = (self.slope[i], self.slope[i + 1]);
        let r0 = i as f64 * h;
        let (m0, m1) = (self.slope_deriv(r0, p0), self.slope_deriv(r0 + h, p1));
        let s = dr / h;
        let (s2, s3) = (s * s, s * s * s);
        p0 * (2.0 * s3 - 3.0 * s2 + 1.0)
            + m0 * h * (s3 - 2.0 * s2 + s)
            + p1 * (-2.0 * s3 + 3.0 * s2)
            + m1 * h * (s3 - s2)
    }

    /// Cubic Hermite interpolation of the height (derivative = slope).
    fn height(&self, r: f64) -> f64 {
        let (i, dr) = self.locate(r);
        let h = self.step;
        let (x0, x1) = (self.height[i], self.height[i + 1]);
        let (m0, m1) = (self.slope[i], self.slope[i + 1]);
        let s = dr / h;
        let (s2, s3) = (s * s, s * s * s);
        x0 * (2.0 * s3 - 3.0 * s2 + 1.0)
            + m0 * h * (s3 - 2.0 * s2 + s)
            + x1 * (-2.0 * s3 + 3.0 * s2)
            + m1 * h * (s3 - s2)
    }

    /// RK4 step of the radial component of the normal motion over dt:
    /// dr/dtau = -x'(r)/(1 + x'(r)^2).
    fn advect_radius(&self, r0: f64, dt: f64) -> f64 {
        let vel = |r: f64| -> f64 {
            let p = self.slope_at(r.max(0.0));
            -p / (1.0 + p * p)
        };
        let k1 = vel(r0);
        let k2 = vel(r0 + k1 * dt / 2.0);
        let k3 = vel(r0 + k2 * dt / 2.0);
        let k4 = vel(r0 + k3 * dt);
        r0 + dt * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0
    }

    fn fields(&self, r: f64) -> BowlFields {
        let d = self.dim as f64;
        if r < 1e-7 {
            return BowlFields {
                slope: 0.0,
                lambda_profile: 1.0 / d,
                lambda_rot: 1.0 / d,
                h_s: 0.0,
                lap_h: -1.0 / d,
            };
        }
        let p = self.slope_at(r);
        let one = 1.0 + p * p;
        let q = 1.0 - (d - 1.0) * p / r;
        let p_prime = one * q;
        let lambda_profile = q / one.sqrt();
        let lambda_rot = p / (r * one.sqrt());
        // H = 1/sqrt(1+p^2); H_s = dH/dr / sqrt(1+p^2)
        let h_s = -p * q / one;
        let q_prime = -(d - 1.0) * (p_prime / r - p / (r * r));
        let dhs_dr = -(p_prime * q + p * q_prime) / one + 2.0 * p * p_prime * p * q / (one * one);
        let h_ss = dhs_dr / one.sqrt();
        let lap_h = h_ss + (d - 1.0) * h_s / (r * one.sqrt());
        BowlFields {
            slope: p,
            lambda_profile,
            lambda_rot,
            h_s,
            lap_h,
        }
    }
}

/// Frame of a shrinking d-sphere of initial radius r0 at time t.
pub fn sphere_frame(d: usize, r0: f64, t: f64, resolution: usize) -> Result<FlowFrame> {
    Oracle::new(OracleSpec::sphere(d, r0).with_resolution(resolution))?.frame(t)
}

/// Ancient-convention shrinking sphere: r(t) = sqrt(-2 d t), t < 0.
pub fn ancient_sphere_frame(d: usize, t: f64, resolution: usize) -> Result<FlowFrame> {
    Oracle::new(OracleSpec::ancient_sphere(d).with_resolution(resolution))?.frame(t)
}

/// Frame of a shrinking cylinder (one flat direction) at time t.
pub fn cylinder_frame(
    d: usize,
    r0: f64,
    t: f64,
    truncation: f64,
    resolution: usize,
) -> Result<FlowFrame> {
    Oracle::new(OracleSpec::cylinder(d, r0, truncation).with_resolution(resolution))?.frame(t)
}

/// Grim reaper translator y = t - log cos x on |x| <= truncation.
pub fn grim_reaper_frame(t: f64, truncation: f64, resolution: usize) -> Result<FlowFrame> {
    Oracle::new(OracleSpec::grim_reaper(truncation).with_resolution(resolution))?.frame(t)
}

/// Rotationally symmetric bowl translator, truncated at the given radius.
pub fn bowl_frame(d: usize, t: f64, truncation: f64, resolution: usize) -> Result<FlowFrame> {
    Oracle::new(OracleSpec::bowl(d, truncation).with_resolution(resolution))?.frame(t)
}

/// Max-over-samples flow residual; the self-test gate for every oracle.
pub fn oracle_residual(spec: &OracleSpec, t: f64, dt_probe: f64) -> Result<f64> {
    Oracle::new(spec.clone())?.residual(t, dt_probe)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn sphere_radius_law() {
        let f = sphere_frame(2, 1.0, 0.125, 65).unwrap();
        let r = (1.0f64 - 2.0 * 2.0 * 0.125).sqrt();
        assert_relative_eq!(r, 0.7071067811865476, epsilon = 1e-10);
        for p in &f.points {
            assert_relative_eq!(p.position.norm(), r, epsilon = 1e-10);
            assert_relative_eq!(p.h, 2.0 / r, epsilon = 1e-10);
        }
        assert_relative_eq!(f.stats.max_h, 2.8284271247461903, epsilon = 1e-10);
        let f0 = sphere_frame(2, 1.0, 0.0, 65).unwrap();
        assert_relative_eq!(f0.stats.max_h, 2.0, epsilon = 1e-12);
    }

    #[test]
    fn ancient_sphere_radius() {
        let f = ancient_sphere_frame(2, -1.0, 65).unwrap();
        assert_relative_eq!(f.points[0].position.norm(), 2.0, epsilon = 1e-12);
        assert_relative_eq!(f.stats.max_h, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn sphere_extinction_rejected() {
        assert!(sphere_frame(2, 1.0, 0.25, 65).is_err());
        assert!(sphere_frame(2, 1.0, 0.3, 65).is_err());
    }

    #[test]
    fn cylinder_examples() {
        let f = cylinder_frame(2, 1.0, 0.0, 5.0, 64).unwrap();
        let p = &f.points[10];
        assert_relative_eq!(p.lambda[0], 0.0, epsilon = 1e-14);
        assert_relative_eq!(p.lambda[1], 1.0, epsilon = 1e-14);
        assert_relative_eq!(p.h, 1.0, epsilon = 1e-14);

        let f3 = cylinder_frame(3, 1.0, 0.0, 5.0, 64).unwrap();
        assert_relative_eq!(f3.points[0].h, 2.0, epsilon = 1e-14);
        assert_eq!(f3.points[0].lambda.len(), 3);

        let f_late = cylinder_frame(2, 1.0, 0.375, 5.0, 64).unwrap();
        assert_relative_eq!(f_late.points[0].position.y, 0.5, epsilon = 1e-12);
        assert_relative_eq!(f_late.points[0].h, 2.0, epsilon = 1e-12);
    }

    #[test]
    fn grim_reaper_fields() {
        let f = grim_reaper_frame(0.0, 1.2, 129).unwrap();
        let mid = &f.points[64];
        assert_relative_eq!(mid.position.x, 0.0, epsilon = 1e-12);
        assert_relative_eq!(mid.h, 1.0, epsilon = 1e-12);
        // kappa at x = pi/4 on a frame that samples it
        for p in &f.points {
            assert_relative_eq!(p.h, p.position.x.cos(), epsilon = 1e-12);
        }
    }

    #[test]
    fn residuals_are_small_and_second_order() {
        let cases: Vec<OracleSpec> = vec![
            OracleSpec::sphere(1, 1.0).with_resolution(64),
            OracleSpec::sphere(2, 1.0).with_resolution(64),
            OracleSpec::sphere(3, 1.0).with_resolution(64),
            OracleSpec::ancient_sphere(2).with_resolution(64),
            OracleSpec::cylinder(2, 1.0, 4.0).with_resolution(64),
            OracleSpec::cylinder(3, 1.0, 4.0).with_resolution(64),
            OracleSpec::grim_reaper(1.2).with_resolution(64),
            OracleSpec::bowl(2, 3.0).with_resolution(64),
            OracleSpec::bowl(3, 3.0).with_resolution(64),
            OracleSpec::paperclip().with_resolution(64),
        ];
        for spec in cases {
            let t = match (spec.kind, spec.mode) {
                (OracleKind::GrimReaper, _) | (OracleKind::Bowl, _) => 0.0,
                (_, TimeMode::Ancient) => -1.0,
                // keep a healthy margin to extinction so the probe stays
                // in the O(dt^2) regime
                (OracleKind::Sphere, _) if spec.dim >= 3 => 0.05,
                (_, TimeMode::FiniteTime) => 0.1,
            };
            let r1 = oracle_residual(&spec, t, 4e-4).unwrap();
            let r2 = oracle_residual(&spec, t, 2e-4).unwrap();
            let r3 = oracle_residual(&spec, t, 1e-4).unwrap();
            assert!(
                r3 <= 1e-6,
                "{} d={} residual {} too large",
                spec.kind.label(),
                spec.dim,
                r3
            );
            // O(dt^2) decay until the noise floor
            if r1 > 1e-12 {
                assert!(
                    r2 <= r1 / 3.0 + 1e-12,
                    "{}: {} -> {}",
                    spec.kind.label(),
                    r1,
                    r2
                );
                assert!(
                    r3 <= r2 / 3.0 + 1e-12,
                    "{}: {} -> {}",
                    spec.kind.label(),
                    r2,
                    r3
                );
            }
        }
    }

    #[test]
    fn bowl_tip_is_umbilic_and_convex() {
        let f = bowl_frame(2, 0.0, 3.0, 96).unwrap();
        let tip = &f.points[0];
        assert!((tip.lambda[0] - tip.lambda[1]).abs() < 1e-5);
        assert_relative_eq!(tip.h, 1.0, epsilon = 1e-9);
        for p in &f.points {
            assert!(
                p.lambda[0] > 0.0,
                "lambda1 {} at r {}",
                p.lambda[0],
                p.position.y
            );
        }
        // translator identity H = -<e_x, nu>
        for p in &f.points {
            assert_relative_eq!(p.h, -p.normal.x, epsilon = 1e-8);
        }
    }

    #[test]
    fn paperclip_matches_its_level_set() {
        let t = -0.7;
        let f = Oracle::new(OracleSpec::paperclip().with_resolution(128))
            .unwrap()
            .frame(t)
            .unwrap();
        for p in &f.points {
            let lhs = t.exp() * p.position.y.cosh();
            assert_relative_eq!(lhs, p.position.x.cos(), epsilon = 1e-12);
        }
        // frame is a closed convex curve
        assert!(f.is_closed());
        assert!(f.stats.min_h > 0.0);
    }

    #[test]
    fn oracle_frames_satisfy_frame_invariants() {
        for f in [
            sphere_frame(2, 1.0, 0.05, 64).unwrap(),
            cylinder_frame(3, 1.0, 0.1, 4.0, 64).unwrap(),
            grim_reaper_frame(0.5, 1.2, 64).unwrap(),
            bowl_frame(2, 0.0, 2.5, 64).unwrap(),
            Oracle::new(OracleSpec::paperclip())
                .unwrap()
                .frame(-1.0)
                .unwrap(),
        ] {
            f.validate().unwrap();
        }
    }
}
