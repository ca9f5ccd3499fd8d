//! Pinching ratios, monotonicity monitors, diameter laws, sphere-condition
//! reports, flatness profiles, umbilicity measurement and blow-up rescaling.

use crate::error::{Error, Result};
use crate::frame::{FlowFrame, FramePoint};
use crate::history::FlowHistory;

/// min over points of Q_k = (lambda_1 + .. + lambda_k)/H, with the argmin
/// index (ties break to the lowest index).
pub fn pinching_ratios(frame: &FlowFrame, k: usize) -> Result<(f64, usize)> {
    if k == 0 || k >= frame.dim.max(1) {
        return Err(Error::InvalidArgument(format!(
            "pinching index k = {k} must lie in 1..=d-1 (d = {})",
            frame.dim
        )));
    }
    let mut best = f64::INFINITY;
    let mut arg = 0usize;
    for (i, p) in frame.points.iter().enumerate() {
        if !(p.h > 0.0) {
            return Err(Error::HypothesisViolated(format!(
                "nonpositive H = {} at point {i}",
                p.h
            )));
        }
        let q = p.lambda[..k].iter().sum::<f64>() / p.h;
        if q < best {
            best = q;
            arg = i;
        }
    }
    Ok((best, arg))
}

#[derive(Debug, Clone, Copy)]
pub struct PinchingViolation {
    pub frame_from: usize,
    pub frame_to: usize,
    pub from_value: f64,
    pub to_value: f64,
    /// Amount by which the minimum dropped beyond the tolerance.
    pub excess: f64,
}

/// Flags consecutive frames where min Q_k decreases by more than `tol`.
/// An empty list is a pass: the minimum is nondecreasing along the flow.
pub fn pinching_monotonicity(
    history: &FlowHistory,
    k: usize,
    tol: f64,
) -> Result<Vec<PinchingViolation>> {
    let minima: Vec<f64> = history
        .frames
        .iter()
        .map(|f| pinching_ratios(f, k).map(|(q, _)| q))
        .collect::<Result<_>>()?;
    let mut violations = Vec::new();
    for j in 1..minima.len() {
        let drop = minima[j - 1] - minima[j];
        if drop > tol {
            violations.push(PinchingViolation {
                frame_from: j - 1,
                frame_to: j,
                from_value: minima[j - 1],
                to_value: minima[j],
                excess: drop - tol,
            });
        }
    }
    Ok(violations)
}

/// Per-index pinching summary over a history.
#[derive(Debug, Clone)]
pub struct PinchingReport {
    pub k: usize,
    /// (min Q_k, argmin point) per frame.
    pub per_frame: Vec<(f64, usize)>,
    pub global_inf: f64,
    pub violations: Vec<PinchingViolation>,
}

pub fn pinching_report(history: &FlowHistory, k: usize, tol: f64) -> Result<PinchingReport> {
    let per_frame: Vec<(f64, usize)> = history
        .frames
        .iter()
        .map(|f| pinching_ratios(f, k))
        .collect::<Result<_>>()?;
    let global_inf = per_frame.iter().map(|r| r.0).fold(f64::INFINITY, f64::min);
    let violations = pinching_monotonicity(history, k, tol)?;
    Ok(PinchingReport {
        k,
        per_frame,
        global_inf,
        violations,
    })
}

/// Extrinsic diameter of a closed frame (see [`crate::frame::diameter`]).
pub fn diameter(frame: &FlowFrame) -> Result<f64> {
    crate::frame::diameter(frame)
}

fn frame_diameter(frame: &FlowFrame) -> Result<f64> {
    match frame.stats.diameter {
        Some(d) => Ok(d),
        None => crate::frame::diameter(frame),
    }
}

#[derive(Debug, Clone, Copy)]
pub struct DiameterDecayRow {
    pub t0: f64,
    pub t1: f64,
    pub diam0: f64,
    pub diam1: f64,
    /// (diam1^2 - diam0^2)/(t1 - t0); for shrinking spheres this is -8d.
    pub rate: f64,
    /// -4d - rate: slack of the decay law per unit time.
    pub rate_margin: f64,
}

#[derive(Debug, Clone)]
pub struct DiameterDecayReport {
    pub rows: Vec<DiameterDecayRow>,
    /// diam nonincreasing within 1e-6 * diam.
    pub monotone_pass: bool,
    /// diam^2 decrement <= -4d dt + tol_coeff * diam^2 on every pair.
    pub decay_pass: bool,
    pub worst_rate_margin: f64,
}

/// Checks both diameter monotonicity and the quadratic decay law
/// diam^2(t1) - diam^2(t0) <= -4 d (t1 - t0) + tol_coeff * diam^2(t0).
pub fn diameter_decay_check(history: &FlowHistory, tol_coeff: f64) -> Result<DiameterDecayReport> {
    let d = history.frames[0].dim as f64;
    let diams: Vec<f64> = history
        .frames
        .iter()
        .map(frame_diameter)
        .collect::<Result<_>>()?;
    let mut rows = Vec::new();
    let mut monotone = true;
    let mut decay = true;
    let mut worst = f64::INFINITY;
    for j in 1..diams.len() {
        let (t0, t1) = (history.frames[j - 1].t, history.frames[j].t);
        let (d0, d1) = (diams[j - 1], diams[j]);
        if d1 > d0 + 1e-6 * d0 {
            monotone = false;
        }
        let dt = t1 - t0;
        let decrement = d1 * d1 - d0 * d0;
        if decrement > -4.0 * d * dt + tol_coeff * d0 * d0 {
            decay = false;
        }
        let rate = decrement / dt;
        let rate_margin = -4.0 * d - rate;
        worst = worst.min(rate_margin);
        rows.push(DiameterDecayRow {
            t0,
            t1,
            diam0: d0,
            diam1: d1,
            rate,
            rate_margin,
        });
    }
    Ok(DiameterDecayReport {
        rows,
        monotone_pass: monotone,
        decay_pass: decay,
        worst_rate_margin: worst,
    })
}

/// Mean and least-squares slope over the trailing window of a series.
#[derive(Debug, Clone, Copy)]
pub struct TrendSummary {
    pub window_mean: f64,
    pub slope: f64,
}

fn trend(ts: &[f64], ys: &[f64]) -> TrendSummary {
    // last quarter of the frames stands in for the t -> -inf asymptotics
    let n = ts.len();
    let start = n - (n / 4).max(1).min(n);
    let (ts, ys) = (&ts[start..], &ys[start..]);
    let m = ts.len() as f64;
    let mean_t = ts.iter().sum::<f64>() / m;
    let mean_y = ys.iter().sum::<f64>() / m;
    let mut num = 0.0;
    let mut den = 0.0;
    for (t, y) in ts.iter().zip(ys) {
        num += (t - mean_t) * (y - mean_y);
        den += (t - mean_t) * (t - mean_t);
    }
    TrendSummary {
        window_mean: mean_y,
        slope: if den > 0.0 { num / den } else { 0.0 },
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ConditionRow {
    pub t: f64,
    /// min lambda_1/H: the uniform-convexity scaling.
    pub min_q1: f64,
    /// max H * diam (closed frames only).
    pub max_h_diam: Option<f64>,
    /// phi * diam: the envelope variant of the same scaling.
    pub phi_diam: Option<f64>,
    /// max H / min H.
    pub ratio_h: f64,
    /// sqrt(-t) * max H (ancient runs only).
    pub sqrt_mt_max_h: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct ConditionReport {
    pub rows: Vec<ConditionRow>,
    pub diameter_supported: bool,
    pub trend_min_q1: TrendSummary,
    pub trend_ratio_h: TrendSummary,
    pub trend_max_h_diam: Option<TrendSummary>,
    pub trend_sqrt_mt_max_h: Option<TrendSummary>,
}

/// Time series of the shrinking-sphere characterization quantities with
/// trailing-window trend summaries. Diameter-based columns are flagged
/// unsupported for truncated frames rather than approximated.
pub fn sphere_conditions(history: &FlowHistory) -> Result<ConditionReport> {
    let diameter_supported = history.frames.iter().all(|f| f.is_closed());
    let ancient = history.frames.iter().all(|f| f.t < 0.0);
    let mut rows = Vec::with_capacity(history.len());
    for (k, frame) in history.frames.iter().enumerate() {
        let mut min_q1 = f64::INFINITY;
        for (i, p) in frame.points.iter().enumerate() {
            if !(p.h > 0.0) {
                return Err(Error::HypothesisViolated(format!(
                    "nonpositive H at frame {k} point {i}"
                )));
            }
            min_q1 = min_q1.min(p.lambda[0] / p.h);
        }
        let diam = if diameter_supported {
            Some(frame_diameter(frame)?)
        } else {
            None
        };
        rows.push(ConditionRow {
            t: frame.t,
            min_q1,
            max_h_diam: diam.map(|d| frame.stats.max_h * d),
            phi_diam: diam.map(|d| history.phi[k] * d),
            ratio_h: frame.stats.max_h / frame.stats.min_h,
            sqrt_mt_max_h: if ancient {
                Some((-frame.t).sqrt() * frame.stats.max_h)
            } else {
                None
            },
        });
    }
    let ts: Vec<f64> = rows.iter().map(|r| r.t).collect();
    let series = |f: &dyn Fn(&ConditionRow) -> f64| -> Vec<f64> { rows.iter().map(f).collect() };
    Ok(ConditionReport {
        trend_min_q1: trend(&ts, &series(&|r| r.min_q1)),
        trend_ratio_h: trend(&ts, &series(&|r| r.ratio_h)),
        trend_max_h_diam: if diameter_supported {
            Some(trend(&ts, &series(&|r| r.max_h_diam.unwrap_or(f64::NAN))))
        } else {
            None
        },
        trend_sqrt_mt_max_h: if ancient {
            Some(trend(
                &ts,
                &series(&|r| r.sqrt_mt_max_h.unwrap_or(f64::NAN)),
            ))
        } else {
            None
        },
        rows,
        diameter_supported,
    })
}

/// max over points of |A - (H/d) g| / H in the Frobenius norm of the
/// trace-free part: zero exactly at umbilic points.
pub fn umbilicity_residual(frame: &FlowFrame) -> Result<f64> {
    let d = frame.dim as f64;
    let mut worst: f64 = 0.0;
    for (i, p) in frame.points.iter().enumerate() {
        if !(p.h > 0.0) {
            return Err(Error::HypothesisViolated(format!(
                "nonpositive H at point {i}"
            )));
        }
        let mean = p.h / d;
        let frob: f64 = p
            .lambda
            .iter()
            .map(|l| (l - mean) * (l - mean))
            .sum::<f64>()
            .sqrt();
        worst = worst.max(frob / p.h);
    }
    Ok(worst)
}

/// For each epsilon, the largest delta such that H/phi < delta implies
/// Q_k > -epsilon over every sampled spacetime point: the minimum of H/phi
/// over offending points, or 1 when none offend.
pub fn flatness_profile(
    history: &FlowHistory,
    k: usize,
    eps_grid: &[f64],
) -> Result<Vec<(f64, f64)>> {
    struct Scatter {
        h_over_phi: f64,
        q_k: f64,
    }
    let mut scatter = Vec::new();
    for (j, frame) in history.frames.iter().enumerate() {
        if k == 0 || k >= frame.dim.max(1) {
            return Err(Error::InvalidArgument(format!(
                "flatness index k = {k} out of range for d = {}",
                frame.dim
            )));
        }
        let phi = history.phi[j];
        for (i, p) in frame.points.iter().enumerate() {
            if !(p.h > 0.0) {
                return Err(Error::HypothesisViolated(format!(
                    "nonpositive H at frame {j} point {i}"
                )));
            }
            scatter.push(Scatter {
                h_over_phi: p.h / phi,
                q_k: p.lambda[..k].iter().sum::<f64>() / p.h,
            });
        }
    }
    Ok(eps_grid
        .iter()
        .map(|&eps| {
            let delta = scatter
                .iter()
                .filter(|s| s.q_k <= -eps)
                .map(|s| s.h_over_phi)
                .fold(1.0f64, f64::min);
            (eps, delta)
        })
        .collect())
}

/// Base-point choice for rescaling.
#[derive(Debug, Clone, Copy)]
pub enum PointSelector {
    /// The point attaining min Q_k on the selected frame.
    ArgminQ(usize),
    Index(usize),
}

/// Blow-up rescaling of one stored slice: translate the frame so the
/// selected base point sits at the origin and scale by phi(t_j), so the
/// rescaled mean curvature is bounded by 1. The result is the rescaled
/// flow's time-0 slice; curvature fields scale accordingly. For rotational
/// frames the chart stays the meridian through the base point (positions
/// are recentered chart coordinates, no longer axis-aligned), so the cached
/// diameter is dropped.
pub fn rescale(
    history: &FlowHistory,
    frame_index: usize,
    selector: PointSelector,
) -> Result<FlowFrame> {
    let frame = history
        .frames
        .get(frame_index)
        .ok_or_else(|| Error::InvalidArgument(format!("frame index {frame_index} out of range")))?;
    let phi = history.phi[frame_index];
    if !(phi > 0.0) {
        return Err(Error::HypothesisViolated("phi must be positive".into()));
    }
    let base = match selector {
        PointSelector::Index(i) => {
            if i >= frame.len() {
                return Err(Error::InvalidArgument(format!(
                    "point index {i} out of range"
                )));
            }
            i
        }
        PointSelector::ArgminQ(k) => pinching_ratios(frame, k)?.1,
    };
    let origin = frame.points[base].position;
    let d = frame.dim as i32;
    let points: Vec<FramePoint> = frame
        .points
        .iter()
        .map(|p| FramePoint {
            position: (p.position - origin) * phi,
            normal: p.normal,
            lambda: p.lambda.iter().map(|l| l / phi).collect(),
            h: p.h / phi,
            a_norm_sq: p.a_norm_sq / (phi * phi),
            grad_h: p.grad_h.iter().map(|g| g / (phi * phi)).collect(),
            lap_h: p.lap_h / (phi * phi * phi),
            area_weight: p.area_weight * phi.powi(d),
            coord: p.coord * phi,
            pole: p.pole,
        })
        .collect();
    let mut out = FlowFrame {
        t: 0.0,
        dim: frame.dim,
        rep: frame.rep,
        topology: frame.topology,
        points,
        stats: crate::frame::FrameStats {
            max_h: 0.0,
            min_h: 0.0,
            diameter: None,
        },
    };
    out.refresh_stats();
    if out.stats.max_h > 1.0 + 1e-9 {
        return Err(Error::NumericalFailure(format!(
            "rescaled max H = {} exceeds 1",
            out.stats.max_h
        )));
    }
    Ok(out)
}

/// Rescales a sequence of slices with a common selector policy.
pub fn rescale_sequence(
    history: &FlowHistory,
    frame_indices: &[usize],
    selector: PointSelector,
) -> Result<Vec<FlowFrame>> {
    frame_indices
        .iter()
        .map(|&j| rescale(history, j, selector))
        .collect()
}
