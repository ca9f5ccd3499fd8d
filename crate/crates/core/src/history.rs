//! Time-ordered frame sequences with the running curvature envelope.

use crate::error::{Error, Result};
use crate::frame::FlowFrame;

/// Ordered frames plus the envelope phi(t_k) = sup of max H over all
/// recorded times <= t_k. Histories produced by the flow engine fold every
/// computed step into the envelope, not just the stored snapshots.
#[derive(Debug, Clone)]
pub struct FlowHistory {
    pub frames: Vec<FlowFrame>,
    pub phi: Vec<f64>,
}

impl FlowHistory {
    /// Builds a history from frames alone; the envelope is the running max
    /// of the frame-wise max H.
    pub fn from_frames(frames: Vec<FlowFrame>) -> Result<Self> {
        if frames.is_empty() {
            return Err(Error::InvalidArgument(
                "history needs at least one frame".into(),
            ));
        }
        for w in frames.windows(2) {
            if !(w[1].t > w[0].t) {
                return Err(Error::InvalidArgument(format!(
                    "frame times must be strictly increasing ({} then {})",
                    w[0].t, w[1].t
                )));
            }
        }
        let mut phi = Vec::with_capacity(frames.len());
        let mut run = f64::NEG_INFINITY;
        for f in &frames {
            run = run.max(f.stats.max_h);
            phi.push(run);
        }
        Ok(FlowHistory { frames, phi })
    }

    pub(crate) fn new_empty() -> Self {
        FlowHistory {
            frames: Vec::new(),
            phi: Vec::new(),
        }
    }

    /// Appends a frame with an externally tracked envelope value (used by
    /// the engine, whose running max covers non-snapshot steps too).
    pub(crate) fn push_with_envelope(&mut self, frame: FlowFrame, envelope: f64) {
        debug_assert!(envelope >= frame.stats.max_h - 1e-12 * frame.stats.max_h.abs());
        self.frames.push(frame);
        self.phi.push(envelope);
    }

    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }

    /// Index of the stored frame whose time matches `t` exactly (within a
    /// span-relative snap of 1e-12).
    pub fn frame_at_time(&self, t: f64) -> Result<usize> {
        let span = (self.frames.last().expect("nonempty").t - self.frames[0].t).abs();
        let tol = 1e-12 * span.max(1.0);
        self.frames
            .iter()
            .position(|f| (f.t - t).abs() <= tol)
            .ok_or(Error::EndpointOutsideHistory { t })
    }

    pub fn validate(&self) -> Result<()> {
        if self.phi.len() != self.frames.len() {
            return Err(Error::InvalidArgument("phi length mismatch".into()));
        }
        for (i, (f, &p)) in self.frames.iter().zip(&self.phi).enumerate() {
            if p + 1e-12 * p.abs().max(1.0) < f.stats.max_h {
                return Err(Error::InvalidArgument(format!(
                    "phi[{i}] below frame max H"
                )));
            }
            if i > 0 && self.phi[i] < self.phi[i - 1] {
                return Err(Error::InvalidArgument(format!("phi decreases at {i}")));
            }
        }
        Ok(())
    }
}
