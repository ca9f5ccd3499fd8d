//! Cubic spline interpolation and arclength resampling of sampled curves.
//!
//! Closed chains get a periodic spline, open chains a not-a-knot spline.
//! Arclength is measured by 5-point Gauss–Legendre quadrature of the spline
//! speed per knot interval, and resampling inverts the cumulative arclength
//! with a Newton iteration (bisection-guarded).

use crate::error::{Error, Result};
use crate::vec2::Vec2;

/// Scalar cubic spline in moment (second-derivative) form.
#[derive(Debug, Clone)]
pub struct Spline {
    knots: Vec<f64>,
    values: Vec<f64>,
    moments: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplineEnds {
    Periodic,
    NotAKnot,
}

impl Spline {
    /// Builds a spline through `(knots[i], values[i])`.
    ///
    /// For `Periodic`, the caller passes the closing knot explicitly:
    /// `values[n-1]` must equal `values[0]`'s periodic continuation (the
    /// wrapped sample), and the moment at the last knot is identified with
    /// the first.
    pub fn new(knots: Vec<f64>, values: Vec<f64>, ends: SplineEnds) -> Result<Self> {
        let n = knots.len();
        if n < 4 || values.len() != n {
            return Err(Error::InvalidArgument(format!(
                "spline needs >= 4 knots with matching values, got {n}"
            )));
        }
        for w in knots.windows(2) {
            if !(w[1] > w[0]) {
                return Err(Error::InvalidArgument(
                    "spline knots must be strictly increasing".into(),
                ));
            }
        }
        let moments = match ends {
            SplineEnds::NotAKnot => not_a_knot_moments(&knots, &values),
            SplineEnds::Periodic => periodic_moments(&knots, &values),
        };
        Ok(Spline {
            knots,
            values,
            moments,
        })
    }

    fn segment(&self, t: f64) -> usize {
        let n = self.knots.len();
        match self
            .knots
            .binary_search_by(|k| k.partial_cmp(&t).expect("finite knot"))
        {
            Ok(i) => i.min(n - 2),
            Err(i) => i.saturating_sub(1).min(n - 2),
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        let i = self.segment(t);
        let (t0, t1) = (self.knots[i], self.knots[i + 1]);
        let h = t1 - t0;
        let (a, b) = (t1 - t, t - t0);
        self.moments[i] * a * a * a / (6.0 * h)
            + self.moments[i + 1] * b * b * b / (6.0 * h)
            + (self.values[i] - self.moments[i] * h * h / 6.0) * a / h
            + (self.values[i + 1] - self.moments[i + 1] * h * h / 6.0) * b / h
    }

    pub fn deriv(&self, t: f64) -> f64 {
        let i = self.segment(t);
        let (t0, t1) = (self.knots[i], self.knots[i + 1]);
        let h = t1 - t0;
        let (a, b) = (t1 - t, t - t0);
        -self.moments[i] * a * a / (2.0 * h)
            + self.moments[i + 1] * b * b / (2.0 * h)
            + (self.values[i + 1] - self.values[i]) / h
            - (self.moments[i + 1] - self.moments[i]) * h / 6.0
    }
}

/// Thomas solve of a tridiagonal system; `a` sub, `b` diag, `c` super.
fn thomas(a: &[f64], b: &[f64], c: &[f64], d: &mut [f64]) -> Vec<f64> {
    let n = b.len();
    let mut cp = vec![0.0; n];
    let mut bp = b.to_vec();
    cp[0] = c[0] / bp[0];
    d[0] /= bp[0];
    for i in 1..n {
        let m = bp[i] - a[i] * cp[i - 1];
        cp[i] = c[i] / m;
        d[i] = (d[i] - a[i] * d[i - 1]) / m;
        bp[i] = m;
    }
    let mut x = vec![0.0; n];
    x[n - 1] = d[n - 1];
    for i in (0..n - 1).rev() {
        x[i] = d[i] - cp[i] * x[i + 1];
    }
    x
}

/// Not-a-knot moments: third-derivative continuity across the first and
/// last interior knots expresses the boundary moments through their two
/// neighbors, which folds into the interior tridiagonal system.
fn not_a_knot_moments(t: &[f64], f: &[f64]) -> Vec<f64> {
    let n = t.len();
    let h: Vec<f64> = t.windows(2).map(|w| w[1] - w[0]).collect();
    let m = n - 2;
    let mut sub = vec![0.0; m];
    let mut diag = vec![0.0; m];
    let mut sup = vec![0.0; m];
    let mut rhs = vec![0.0; m];
    for k in 0..m {
        let i = k + 1;
        sub[k] = h[i - 1] / 6.0;
        diag[k] = (h[i - 1] + h[i]) / 3.0;
        sup[k] = h[i] / 6.0;
        rhs[k] = (f[i + 1] - f[i]) / h[i] - (f[i] - f[i - 1]) / h[i - 1];
    }
    // M_0 = (1 + h0/h1) M_1 - (h0/h1) M_2
    let a0 = h[0] / h[1];
    diag[0] += sub[0] * (1.0 + a0);
    sup[0] -= sub[0] * a0;
    sub[0] = 0.0;
    // M_{n-1} = (1 + h[n-2]/h[n-3]) M_{n-2} - (h[n-2]/h[n-3]) M_{n-3}
    let a1 = h[n - 2] / h[n - 3];
    diag[m - 1] += sup[m - 1] * (1.0 + a1);
    sub[m - 1] -= sup[m - 1] * a1;
    sup[m - 1] = 0.0;
    let inner = thomas(&sub, &diag, &sup, &mut rhs);
    let mut moments = vec![0.0; n];
    moments[1..=m].copy_from_slice(&inner);
    moments[0] = (1.0 + a0) * moments[1] - a0 * moments[2];
    moments[n - 1] = (1.0 + a1) * moments[n - 2] - a1 * moments[n - 3];
    moments
}

/// Periodic moments: knots t_0..t_{n-1} where f[n-1] closes the loop and the
/// moment at the last knot equals the first. Sherman–Morrison on top of the
/// Thomas solve handles the cyclic corner terms.
fn periodic_moments(t: &[f64], f: &[f64]) -> Vec<f64> {
    let n = t.len() - 1; // independent moments
    let h: Vec<f64> = t.windows(2).map(|w| w[1] - w[0]).collect();
    let prev = |i: usize| (i + n - 1) % n;
    let mut sub = vec![0.0; n];
    let mut diag = vec![0.0; n];
    let mut sup = vec![0.0; n];
    let mut rhs = vec![0.0; n];
    let df = |i: usize| (f[i + 1] - f[i]) / h[i];
    for i in 0..n {
        let hm = h[prev(i)];
        let hp = h[i];
        sub[i] = hm / 6.0;
        diag[i] = (hm + hp) / 3.0;
        sup[i] = hp / 6.0;
        let dm = if i == 0 { df(n - 1) } else { df(i - 1) };
        rhs[i] = df(i) - dm;
    }
    // cyclic corners: row 0 column n-1 = sub[0]; row n-1 column 0 = sup[n-1].
    let alpha = sub[0];
    let beta = sup[n - 1];
    let gamma = -diag[0];
    let mut b = diag.clone();
    b[0] -= gamma;
    b[n - 1] -= alpha * beta / gamma;
    let mut rhs1 = rhs.clone();
    let x1 = thomas(&sub, &b, &sup, &mut rhs1);
    let mut u = vec![0.0; n];
    u[0] = gamma;
    u[n - 1] = beta;
    let x2 = thomas(&sub, &b, &sup, &mut u);
    let num = x1[0] + alpha * x1[n - 1] / gamma;
    let den = 1.0 + x2[0] + alpha * x2[n - 1] / gamma;
    let mut m: Vec<f64> = x1.iter().zip(&x2).map(|(a, c)| a - num / den * c).collect();
    m.push(m[0]);
    m
}

const GL_NODES: [f64; 5] = [
    -0.906179845938664,
    -0.5384693101056831,
    0.0,
    0.5384693101056831,
    0.906179845938664,
];
const GL_WEIGHTS: [f64; 5] = [
    0.23692688505618908,
    0.47862867049936647,
    0.5688888888888889,
    0.47862867049936647,
    0.23692688505618908,
];

/// Parametric plane curve backed by a pair of scalar splines over a chord
/// parameter, with arclength bookkeeping.
#[derive(Debug, Clone)]
pub struct CurveSpline {
    pub sx: Spline,
    pub sy: Spline,
    knots: Vec<f64>,
    cumulative: Vec<f64>,
    closed: bool,
}

impl CurveSpline {
    /// Fits a spline through the chain. For `closed`, `points` must not
    /// repeat the first point; the wrap segment is added internally.
    pub fn fit(points: &[Vec2], closed: bool) -> Result<Self> {
        let n = points.len();
        if n < 4 {
            return Err(Error::TooFewPoints { min: 4, got: n });
        }
        let mut knots = Vec::with_capacity(n + 1);
        knots.push(0.0);
        for i in 1..n {
            let d = points[i].dist(points[i - 1]);
            if d == 0.0 {
                return Err(Error::DegeneratePoints { index: i });
            }
            knots.push(knots[i - 1] + d);
        }
        let (xs, ys): (Vec<f64>, Vec<f64>) = points.iter().map(|p| (p.x, p.y)).unzip();
        let (knots, xs, ys, ends) = if closed {
            let d = points[0].dist(points[n - 1]);
            if d == 0.0 {
                return Err(Error::DegeneratePoints { index: n - 1 });
            }
            let mut k = knots;
            k.push(k[n - 1] + d);
            let mut xs = xs;
            let mut ys = ys;
            xs.push(points[0].x);
            ys.push(points[0].y);
            (k, xs, ys, SplineEnds::Periodic)
        } else {
            (knots, xs, ys, SplineEnds::NotAKnot)
        };
        let sx = Spline::new(knots.clone(), xs, ends)?;
        let sy = Spline::new(knots.clone(), ys, ends)?;
        let mut cumulative = Vec::with_capacity(knots.len());
        cumulative.push(0.0);
        for i in 1..knots.len() {
            let seg = gl_arclength(&sx, &sy, knots[i - 1], knots[i]);
            cumulative.push(cumulative[i - 1] + seg);
        }
        Ok(CurveSpline {
            sx,
            sy,
            knots,
            cumulative,
            closed,
        })
    }

    pub fn total_arclength(&self) -> f64 {
        *self.cumulative.last().expect("nonempty")
    }

    pub fn point(&self, t: f64) -> Vec2 {
        Vec2::new(self.sx.eval(t), self.sy.eval(t))
    }

    fn speed(&self, t: f64) -> f64 {
        self.sx.deriv(t).hypot(self.sy.deriv(t))
    }

    /// Parameter value at arclength `s` from the chain start.
    pub fn param_at_arclength(&self, s: f64) -> f64 {
        let m = self.cumulative.len();
        let s = s.clamp(0.0, self.total_arclength());
        let i = match self
            .cumulative
            .binary_search_by(|c| c.partial_cmp(&s).expect("finite"))
        {
            Ok(i) => i.min(m - 2),
            Err(i) => i.saturating_sub(1).min(m - 2),
        };
        let (mut lo, mut hi) = (self.knots[i], self.knots[i + 1]);
        let target = s - self.cumulative[i];
        let mut t = lo + (hi - lo) * (target / (self.cumulative[i + 1] - self.cumulative[i]));
        for _ in 0..40 {
            let g = gl_arclength(&self.sx, &self.sy, self.knots[i], t) - target;
            if g > 0.0 {
                hi = t;
            } else {
                lo = t;
            }
            let dg = self.speed(t);
            let mut next = t - g / dg;
            if !(next > lo && next < hi) {
                next = 0.5 * (lo + hi);
            }
            if (next - t).abs() < 1e-15 * self.knots[self.knots.len() - 1].max(1.0) {
                t = next;
                break;
            }
            t = next;
        }
        t
    }

    /// `n` points at uniform arclength. Closed chains distribute n points over
    /// the full loop (no duplicate); open chains place them inclusively from
    /// end to end.
    pub fn resample(&self, n: usize) -> Vec<Vec2> {
        let total = self.total_arclength();
        let step = if self.closed {
            total / n as f64
        } else {
            total / (n - 1) as f64
        };
        (0..n)
            .map(|j| {
                if !self.closed && j == n - 1 {
                    // keep the far endpoint exact
                    self.point(*self.knots.last().expect("nonempty"))
                } else {
                    self.point(self.param_at_arclength(j as f64 * step))
                }
            })
            .collect()
    }
}

fn gl_arclength(sx: &Spline, sy: &Spline, a: f64, b: f64) -> f64 {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut acc = 0.0;
    for (x, w) in GL_NODES.iter().zip(GL_WEIGHTS.iter()) {
        let t = mid + half * x;
        acc += w * sx.deriv(t).hypot(sy.deriv(t));
    }
    acc * half
}
