//! Frame snapshot persistence.
//!
//! Text format, locale independent, one file per frame:
//!
//! ```text
//! MCFLAB v1 d=<d> rep=<curve|rot> t=<decimal> n=<count>
//! <index> <pos...> <lambda...> <H> <gradH...> <lapH> <weight>
//! ```
//!
//! Decimals carry 17 significant digits, which round-trips f64 exactly.
//! Re-ingesting a snapshot as an initial profile rebuilds the frame from
//! the positions alone (all curvature fields are recomputed); for curve
//! snapshots the chain is treated as cyclic when the end gap is comparable
//! to the sample spacing, open otherwise.

use mcflab_core::frame::{
    build_curve_frame, build_open_curve_frame, build_rotational_frame, FlowFrame, FrameRep,
};
use mcflab_core::vec2::Vec2;
use std::fmt::Write as _;
use std::path::Path;

#[derive(Debug)]
pub struct SnapshotError(pub String);

impl std::fmt::Display for SnapshotError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for SnapshotError {}

fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Serializes a frame to the snapshot text format.
pub fn render_snapshot(frame: &FlowFrame) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "MCFLAB v1 d={} rep={} t={} n={}",
        frame.dim,
        frame.rep.label(),
        fmt_f64(frame.t),
        frame.len()
    );
    for (i, p) in frame.points.iter().enumerate() {
        let _ = write!(
            out,
            "{i} {} {}",
            fmt_f64(p.position.x),
            fmt_f64(p.position.y)
        );
        for l in &p.lambda {
            let _ = write!(out, " {}", fmt_f64(*l));
        }
        let _ = write!(out, " {}", fmt_f64(p.h));
        for g in &p.grad_h {
            let _ = write!(out, " {}", fmt_f64(*g));
        }
        let _ = write!(out, " {}", fmt_f64(p.lap_h));
        let _ = writeln!(out, " {}", fmt_f64(p.area_weight));
    }
    out
}

pub fn write_snapshot(frame: &FlowFrame, path: &Path) -> std::io::Result<()> {
    std::fs::write(path, render_snapshot(frame))
}

/// Parsed snapshot payload: the header plus raw per-sample fields.
#[derive(Debug)]
pub struct Snapshot {
    pub dim: usize,
    pub rep: FrameRep,
    pub t: f64,
    pub positions: Vec<Vec2>,
    /// Stored mean curvature column; the rebuild recomputes H from the
    /// positions, this raw copy backs the round-trip checks.
    #[allow(dead_code)]
    pub h: Vec<f64>,
}

pub fn parse_snapshot(text: &str) -> Result<Snapshot, SnapshotError> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| SnapshotError("empty snapshot".into()))?;
    let tokens: Vec<&str> = header.split_whitespace().collect();
    if tokens.len() != 6 || tokens[0] != "MCFLAB" || tokens[1] != "v1" {
        return Err(SnapshotError(format!("bad snapshot header `{header}`")));
    }
    let field = |tok: &str, name: &str| -> Result<String, SnapshotError> {
        tok.strip_prefix(&format!("{name}="))
            .map(str::to_string)
            .ok_or_else(|| SnapshotError(format!("header field `{tok}` should be `{name}=...`")))
    };
    let dim: usize = field(tokens[2], "d")?
        .parse()
        .map_err(|_| SnapshotError("bad d".into()))?;
    let rep = match field(tokens[3], "rep")?.as_str() {
        "curve" => FrameRep::PlaneCurve,
        "rot" => FrameRep::Rotational,
        other => return Err(SnapshotError(format!("unknown rep `{other}`"))),
    };
    let t: f64 = field(tokens[4], "t")?
        .parse()
        .map_err(|_| SnapshotError("bad t".into()))?;
    let n: usize = field(tokens[5], "n")?
        .parse()
        .map_err(|_| SnapshotError("bad n".into()))?;
    let expected_cols = 1 + 2 + dim + 1 + dim + 1 + 1;
    let mut positions = Vec::with_capacity(n);
    let mut h = Vec::with_capacity(n);
    for (i, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split_whitespace().collect();
        if cols.len() != expected_cols {
            return Err(SnapshotError(format!(
                "sample line {} has {} columns, expected {}",
                i + 2,
                cols.len(),
                expected_cols
            )));
        }
        let num = |j: usize| -> Result<f64, SnapshotError> {
            cols[j]
                .parse::<f64>()
                .map_err(|_| SnapshotError(format!("bad number `{}` on line {}", cols[j], i + 2)))
        };
        positions.push(Vec2::new(num(1)?, num(2)?));
        h.push(num(3 + dim)?);
    }
    if positions.len() != n {
        return Err(SnapshotError(format!(
            "snapshot declares n={n} but carries {} samples",
            positions.len()
        )));
    }
    Ok(Snapshot {
        dim,
        rep,
        t,
        positions,
        h,
    })
}

pub fn read_snapshot(path: &Path) -> Result<Snapshot, SnapshotError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| SnapshotError(format!("cannot read {}: {e}", path.display())))?;
    parse_snapshot(&text)
}

/// Rebuilds a frame from snapshot positions (curvature recomputed).
///
/// Snapshots written by this crate carry uniform-arclength samples, so the
/// rebuild feeds them straight to the finite-difference kernels: the H
/// field then reproduces the written frame's bit for bit. Hand-made
/// profiles with uneven spacing fall back to the resampling builders.
pub fn rebuild_frame(snap: &Snapshot) -> Result<FlowFrame, SnapshotError> {
    let n = snap.positions.len();
    let mut spacings: Vec<f64> = snap.positions.windows(2).map(|w| w[0].dist(w[1])).collect();
    let gap = snap.positions[0].dist(snap.positions[n - 1]);
    spacings.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    let median = spacings[spacings.len() / 2];
    let cyclic = snap.rep == FrameRep::PlaneCurve && gap <= 3.0 * median;
    let mut all = spacings;
    if cyclic {
        all.push(gap);
    }
    let ratio = all.iter().cloned().fold(0.0f64, f64::max)
        / all.iter().cloned().fold(f64::INFINITY, f64::min);
    let uniform = ratio <= 1.001;
    let build = || -> mcflab_core::Result<FlowFrame> {
        match snap.rep {
            FrameRep::PlaneCurve => {
                if uniform {
                    let mut f = mcflab_core::frame::curve_frame_from_positions(
                        snap.positions.clone(),
                        cyclic,
                        snap.t,
                    )?;
                    if f.is_closed() {
                        f.compute_diameter()?;
                    }
                    Ok(f)
                } else if cyclic {
                    build_curve_frame(&snap.positions, snap.t)
                } else {
                    build_open_curve_frame(&snap.positions, snap.t)
                }
            }
            FrameRep::Rotational => {
                if uniform {
                    let scale = snap
                        .positions
                        .iter()
                        .map(|p| p.x.abs().max(p.y.abs()))
                        .fold(1.0f64, f64::max);
                    let mut positions = snap.positions.clone();
                    for i in [0, n - 1] {
                        if positions[i].y.abs() <= 1e-12 * scale {
                            positions[i].y = 0.0;
                        }
                    }
                    let pole_start = positions[0].y == 0.0;
                    let pole_end = positions[n - 1].y == 0.0;
                    let mut f = mcflab_core::frame::rotational_frame_from_profile(
                        positions, snap.dim, pole_start, pole_end, snap.t,
                    )?;
                    if f.is_closed() {
                        f.compute_diameter()?;
                    }
                    Ok(f)
                } else {
                    build_rotational_frame(&snap.positions, snap.dim, snap.t)
                }
            }
        }
    };
    build().map_err(|e| SnapshotError(format!("rebuilding frame: {e}")))
}
