//! Non-oracle test geometries: perturbed spheres for numerical runs and an
//! adversarial history with an injected pinching drop for detector
//! sensitivity checks.

use crate::error::Result;
use crate::frame::{build_curve_frame, build_rotational_frame, FlowFrame};
use crate::history::FlowHistory;
use crate::oracle::{Oracle, OracleSpec};
use crate::vec2::Vec2;

/// Meridian profile of a mode-2 perturbed sphere r(theta) = r0 (1 + a cos 2 theta),
/// sampled pole to pole. Amplitudes up to ~0.15 keep the surface convex.
pub fn perturbed_sphere_profile(r0: f64, amplitude: f64, n: usize) -> Vec<Vec2> {
    (0..n)
        .map(|i| {
            let th = std::f64::consts::PI * i as f64 / (n - 1) as f64;
            let rho = r0 * (1.0 + amplitude * (2.0 * th).cos());
            Vec2::new(-rho * th.cos(), rho * th.sin())
        })
        .collect()
}

/// Rotational frame of the perturbed sphere at time t.
pub fn perturbed_sphere_frame(r0: f64, amplitude: f64, n: usize, t: f64) -> Result<FlowFrame> {
    build_rotational_frame(&perturbed_sphere_profile(r0, amplitude, n), 2, t)
}

/// Closed plane curve r(theta) = r0 (1 + a cos(m theta)).
pub fn perturbed_circle_frame(
    r0: f64,
    amplitude: f64,
    mode: usize,
    n: usize,
    t: f64,
) -> Result<FlowFrame> {
    let pts: Vec<Vec2> = (0..n)
        .map(|i| {
            let th = std::f64::consts::TAU * i as f64 / n as f64;
            let rho = r0 * (1.0 + amplitude * (mode as f64 * th).cos());
            Vec2::new(rho * th.cos(), rho * th.sin())
        })
        .collect();
    build_curve_frame(&pts, t)
}

/// Sphere-oracle history with one point's principal curvatures rebalanced
/// at the middle frame so that min Q_1 dips there and recovers: the
/// pinching monotonicity detector must flag exactly that frame pair.
pub fn pinching_drop_history(
    dim: usize,
    times: &[f64],
    resolution: usize,
    dip: f64,
) -> Result<FlowHistory> {
    let oracle = Oracle::new(OracleSpec::ancient_sphere(dim).with_resolution(resolution))?;
    let mut frames = Vec::with_capacity(times.len());
    for &t in times {
        frames.push(oracle.frame(t)?);
    }
    let mid = frames.len() / 2;
    let frame = &mut frames[mid];
    let pick = frame.points.len() / 2;
    let p = &mut frame.points[pick];
    // shift weight from lambda_1 to lambda_d keeping H fixed
    let h = p.h;
    let shift = dip * h;
    p.lambda[0] -= shift;
    let last = p.lambda.len() - 1;
    p.lambda[last] += shift;
    p.a_norm_sq = p.lambda.iter().map(|l| l * l).sum();
    FlowHistory::from_frames(frames)
}
