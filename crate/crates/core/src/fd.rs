//! Finite-difference stencils on uniform grids.
//!
//! Interior nodes use order-4 central differences. Ends are closed in one of
//! three ways:
//!   * `Periodic` wraps the grid (closed curves),
//!   * `ReflectEven` / `ReflectOdd` extend by parity ghosts (rotational
//!     profiles at an axis pole: the axis coordinate is even in arclength
//!     through the pole, the radius is odd, so the order-4 interior stencil
//!     stays valid up to and including the pole node),
//!   * `OneSided` falls back to order-2 one-sided / narrow central stencils
//!     on the outermost two nodes (truncated open chains).

/// How a derivative stencil treats one end of the sample array.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EndRule {
    /// Wrap around; must be used at both ends.
    Periodic,
    /// Order-2 one-sided at the boundary node, order-2 central one node in.
    OneSided,
    /// Ghosts f[-k] = f[k] (even extension about the end node).
    ReflectEven,
    /// Ghosts f[-k] = -f[k] (odd extension about the end node).
    ReflectOdd,
}

/// Ghost-aware sample lookup. `i` ranges over -2..n+1.
#[inline]
fn sample(f: &[f64], i: isize, start: EndRule, end: EndRule) -> f64 {
    let n = f.len() as isize;
    if i >= 0 && i < n {
        return f[i as usize];
    }
    if i < 0 {
        match start {
            EndRule::Periodic => f[(i + n) as usize],
            EndRule::ReflectEven => f[(-i) as usize],
            EndRule::ReflectOdd => -f[(-i) as usize],
            EndRule::OneSided => unreachable!("one-sided ends never read ghosts"),
        }
    } else {
        match end {
            EndRule::Periodic => f[(i - n) as usize],
            EndRule::ReflectEven => f[(2 * (n - 1) - i) as usize],
            EndRule::ReflectOdd => -f[(2 * (n - 1) - i) as usize],
            EndRule::OneSided => unreachable!("one-sided ends never read ghosts"),
        }
    }
}

fn needs_special_start(rule: EndRule) -> bool {
    rule == EndRule::OneSided
}

/// First derivative on a uniform grid with spacing `h`.
pub fn deriv1(f: &[f64], h: f64, start: EndRule, end: EndRule) -> Vec<f64> {
    let n = f.len();
    assert!(n >= 5, "stencils need at least 5 samples");
    let mut out = vec![0.0; n];
    let central = |i: isize| -> f64 {
        let fm2 = sample(f, i - 2, start, end);
        let fm1 = sample(f, i - 1, start, end);
        let fp1 = sample(f, i + 1, start, end);
        let fp2 = sample(f, i + 2, start, end);
        (-fp2 + 8.0 * fp1 - 8.0 * fm1 + fm2) / (12.0 * h)
    };
    let lo = if needs_special_start(start) { 2 } else { 0 };
    let hi = if needs_special_start(end) { n - 2 } else { n };
    for i in lo..hi {
        out[i] = central(i as isize);
    }
    if needs_special_start(start) {
        out[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
        out[1] = (f[2] - f[0]) / (2.0 * h);
    }
    if needs_special_start(end) {
        out[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * h);
        out[n - 2] = (f[n - 1] - f[n - 3]) / (2.0 * h);
    }
    out
}

/// Second derivative on a uniform grid with spacing `h`.
pub fn deriv2(f: &[f64], h: f64, start: EndRule, end: EndRule) -> Vec<f64> {
    let n = f.len();
    assert!(n >= 5, "stencils need at least 5 samples");
    let h2 = h * h;
    let mut out = vec![0.0; n];
    let central = |i: isize| -> f64 {
        let fm2 = sample(f, i - 2, start, end);
        let fm1 = sample(f, i - 1, start, end);
        let f0 = sample(f, i, start, end);
        let fp1 = sample(f, i + 1, start, end);
        let fp2 = sample(f, i + 2, start, end);
        (-fp2 + 16.0 * fp1 - 30.0 * f0 + 16.0 * fm1 - fm2) / (12.0 * h2)
    };
    let lo = if needs_special_start(start) { 2 } else { 0 };
    let hi = if needs_special_start(end) { n - 2 } else { n };
    for i in lo..hi {
        out[i] = central(i as isize);
    }
    if needs_special_start(start) {
        out[0] = (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) / h2;
        out[1] = (f[2] - 2.0 * f[1] + f[0]) / h2;
    }
    if needs_special_start(end) {
        out[n - 1] = (2.0 * f[n - 1] - 5.0 * f[n - 2] + 4.0 * f[n - 3] - f[n - 4]) / h2;
        out[n - 2] = (f[n - 1] - 2.0 * f[n - 2] + f[n - 3]) / h2;
    }
    out
}
