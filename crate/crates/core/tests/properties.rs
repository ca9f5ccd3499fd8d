//! Property-based invariants: frame algebra, minimizer optimality, scale
//! invariance and resampling behavior on randomized inputs.

use mcflab_core::diagnostics::{pinching_ratios, umbilicity_residual};
use mcflab_core::frame::{build_curve_frame, FlowFrame, FramePoint, FrameStats};
use mcflab_core::harnack::{harnack_min, harnack_quantity, HarnackMode, HarnackParams};
use mcflab_core::spline::CurveSpline;
use mcflab_core::vec2::Vec2;
use proptest::prelude::*;

fn radial_curve(amps: &[f64], phases: &[f64], n: usize) -> Vec<Vec2> {
    (0..n)
        .map(|i| {
            let th = std::f64::consts::TAU * i as f64 / n as f64;
            let mut rho = 1.0;
            for (k, (a, p)) in amps.iter().zip(phases).enumerate() {
                rho += a * ((k as f64 + 2.0) * th + p).cos();
            }
            Vec2::new(rho * th.cos(), rho * th.sin())
        })
        .collect()
}

fn synthetic_point(lambda: Vec<f64>, grad_h: Vec<f64>, lap_h: f64) -> FramePoint {
    let h: f64 = lambda.iter().sum();
    let a2: f64 = lambda.iter().map(|l| l * l).sum();
    FramePoint {
        position: Vec2::ZERO,
        normal: Vec2::new(1.0, 0.0),
        lambda,
        h,
        a_norm_sq: a2,
        grad_h,
        lap_h,
        area_weight: 1.0,
        coord: 0.0,
        pole: false,
    }
}

fn single_point_frame(p: FramePoint, dim: usize) -> FlowFrame {
    let mut f = FlowFrame {
        t: 0.0,
        dim,
        rep: mcflab_core::frame::FrameRep::Rotational,
        topology: mcflab_core::frame::Topology::Open {
            pole_start: false,
            pole_end: false,
        },
        points: vec![p],
        stats: FrameStats {
            max_h: 0.0,
            min_h: 0.0,
            diameter: None,
        },
    };
    f.refresh_stats();
    f
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    /// Every built frame satisfies the pointwise algebra: H = sum lambda,
    /// |A|^2 = sum lambda^2, unit normals, ascending lambda.
    #[test]
    fn built_frames_satisfy_invariants(
        amps in prop::collection::vec(-0.04f64..0.04, 4),
        phases in prop::collection::vec(0.0f64..std::f64::consts::TAU, 4),
    ) {
        let pts = radial_curve(&amps, &phases, 128);
        let frame = build_curve_frame(&pts, 0.0).unwrap();
        frame.validate().unwrap();
        prop_assert!(frame.stats.max_h >= frame.stats.min_h);
    }

    /// The closed-form minimizer never loses to random directions, and its
    /// term breakdown sums to the reported value.
    #[test]
    fn minimizer_beats_random_directions(
        l1 in -0.3f64..0.5,
        dl in 0.01f64..0.8,
        g in prop::collection::vec(-1.0f64..1.0, 2),
        lap in -2.0f64..2.0,
        dirs in prop::collection::vec(prop::collection::vec(-3.0f64..3.0, 2), 50),
    ) {
        let lambda = vec![l1, l1 + dl];
        let h: f64 = lambda.iter().sum();
        prop_assume!(h > 0.1);
        let eps0 = (-l1 / h).max(0.0) + 0.05;
        let pt = synthetic_point(lambda, g, lap);
        let params = HarnackParams::new(eps0, 2, 3.0, 1.0, HarnackMode::FiniteTime).unwrap();
        let r = harnack_min(&pt, &params).unwrap();
        let scale = r.z_min.abs().max(1.0);
        prop_assert!((r.terms.total() - r.z_min).abs() <= 1e-12 * scale);
        for v in &dirs {
            let z = harnack_quantity(&pt, v, &params).unwrap();
            prop_assert!(r.z_min <= z + 1e-12 * scale.max(z.abs()));
        }
    }

    /// Q_k is invariant under spatial scaling of the curvature data.
    #[test]
    fn pinching_scale_invariance(
        l1 in -0.2f64..0.5,
        d2 in 0.01f64..0.6,
        d3 in 0.01f64..0.6,
        s in prop::sample::select(vec![0.5f64, 2.0, 4.0]),
    ) {
        let lambda = vec![l1, l1 + d2, l1 + d2 + d3];
        let h: f64 = lambda.iter().sum();
        prop_assume!(h > 0.05);
        let base = single_point_frame(synthetic_point(lambda.clone(), vec![0.0; 3], 0.0), 3);
        let scaled = single_point_frame(
            synthetic_point(lambda.iter().map(|l| l / s).collect(), vec![0.0; 3], 0.0),
            3,
        );
        for k in 1..=2 {
            let (q, _) = pinching_ratios(&base, k).unwrap();
            let (qs, _) = pinching_ratios(&scaled, k).unwrap();
            prop_assert!((q - qs).abs() <= 1e-12);
        }
    }

    /// Umbilicity residual is zero exactly when all principal curvatures
    /// agree, positive otherwise.
    #[test]
    fn umbilicity_detects_eigenvalue_spread(
        l in 0.1f64..2.0,
        spread in 0.0f64..0.5,
    ) {
        let lambda = vec![l, l + spread, l + spread];
        let f = single_point_frame(synthetic_point(lambda, vec![0.0; 3], 0.0), 3);
        let u = umbilicity_residual(&f).unwrap();
        if spread == 0.0 {
            prop_assert!(u <= 1e-14);
        } else {
            prop_assert!(u > 0.0);
        }
    }

    /// Resampling a smooth closed chain preserves its arclength and evens
    /// out the spacing.
    #[test]
    fn resample_preserves_arclength(
        amps in prop::collection::vec(-0.03f64..0.03, 3),
        phases in prop::collection::vec(0.0f64..std::f64::consts::TAU, 3),
    ) {
        let pts = radial_curve(&amps, &phases, 160);
        let spline = CurveSpline::fit(&pts, true).unwrap();
        let resampled = spline.resample(120);
        let l0 = spline.total_arclength();
        let l1 = CurveSpline::fit(&resampled, true).unwrap().total_arclength();
        prop_assert!(((l0 - l1) / l0).abs() < 1e-6, "drift {}", ((l0 - l1) / l0).abs());
        let mut dmin = f64::INFINITY;
        let mut dmax: f64 = 0.0;
        for i in 0..resampled.len() {
            let d = resampled[i].dist(resampled[(i + 1) % resampled.len()]);
            dmin = dmin.min(d);
            dmax = dmax.max(d);
        }
        prop_assert!(dmax / dmin < 1.01, "ratio {}", dmax / dmin);
    }

    /// Harnack scaling covariance on synthetic data: X -> sX, t -> s^2 t
    /// sends Z_min to s^-3 Z_min.
    #[test]
    fn harnack_scaling_covariance(
        l1 in 0.05f64..0.5,
        dl in 0.0f64..0.5,
        g1 in -0.5f64..0.5,
        lap in -1.0f64..1.0,
        s in prop::sample::select(vec![0.5f64, 2.0]),
    ) {
        let lambda = vec![l1, l1 + dl];
        let pt = synthetic_point(lambda.clone(), vec![g1, 0.0], lap);
        let params = HarnackParams::new(0.0, 2, 2.0, 1.0, HarnackMode::FiniteTime).unwrap();
        let z = harnack_min(&pt, &params).unwrap().z_min;
        let pt_s = synthetic_point(
            lambda.iter().map(|l| l / s).collect(),
            vec![g1 / (s * s), 0.0],
            lap / (s * s * s),
        );
        let params_s =
            HarnackParams::new(0.0, 2, 2.0 / s, s * s, HarnackMode::FiniteTime).unwrap();
        let z_s = harnack_min(&pt_s, &params_s).unwrap().z_min;
        let scale = z.abs().max(1e-9);
        prop_assert!((z_s - z / (s * s * s)).abs() <= 1e-10 * scale);
    }
}
