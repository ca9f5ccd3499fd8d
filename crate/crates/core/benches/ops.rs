//! Hot-loop benchmarks used to compare the rayon build against the
//! sequential fallback:
//!
//! ```text
//! cargo bench -p mcflab-core --no-default-features -- --save-baseline seq
//! cargo bench -p mcflab-core -- --baseline seq
//! ```
//!
//! The numerical results are identical in both builds (order-preserving
//! maps, sequential reductions); only the wall time moves.

use criterion::{criterion_group, criterion_main, Criterion};
use mcflab_core::diagnostics::diameter;
use mcflab_core::fixtures::perturbed_sphere_frame;
use mcflab_core::flow::{run_flow, FlowControls};
use mcflab_core::frame::build_curve_frame;
use mcflab_core::harnack::{
    harnack_min_bruteforce, harnack_sweep, path_energy, Eps0Policy, HarnackMode, HarnackParams,
};
use mcflab_core::history::FlowHistory;
use mcflab_core::oracle::{sphere_frame, Oracle, OracleSpec};
use mcflab_core::vec2::Vec2;
use std::f64::consts::TAU;

fn circle(n: usize) -> Vec<Vec2> {
    (0..n)
        .map(|i| {
            let a = TAU * i as f64 / n as f64;
            Vec2::new(a.cos(), a.sin())
        })
        .collect()
}

fn bench_frame_build(c: &mut Criterion) {
    let pts = circle(2048);
    c.bench_function("frame/build_curve_2048", |b| {
        b.iter(|| build_curve_frame(&pts, 0.0).unwrap())
    });
}

fn bench_diameter(c: &mut Criterion) {
    let frame = sphere_frame(2, 1.0, 0.0, 2000).unwrap();
    c.bench_function("diagnostics/diameter_rot_2000", |b| {
        b.iter(|| diameter(&frame).unwrap())
    });
}

fn bench_harnack_sweep(c: &mut Criterion) {
    let frame = perturbed_sphere_frame(1.0, 0.1, 2048, 0.1).unwrap();
    let hist = FlowHistory::from_frames(vec![frame]).unwrap();
    c.bench_function("harnack/sweep_frame_2048", |b| {
        b.iter(|| harnack_sweep(&hist, HarnackMode::FiniteTime, Eps0Policy::Auto, 1e-3).unwrap())
    });
}

fn bench_bruteforce(c: &mut Criterion) {
    let frame = sphere_frame(3, 1.0, 0.05, 64).unwrap();
    let pt = frame.points[10].clone();
    let params = HarnackParams::new(0.1, 3, 10.0, 0.05, HarnackMode::FiniteTime).unwrap();
    c.bench_function("harnack/bruteforce_41cubed", |b| {
        b.iter(|| harnack_min_bruteforce(&pt, &params, 1.0, 41).unwrap())
    });
}

fn bench_flow_steps(c: &mut Criterion) {
    let initial = build_curve_frame(&circle(512), 0.0).unwrap();
    let controls = FlowControls {
        max_steps: 25,
        snapshot_every: 0,
        resample_every: 0,
        ..FlowControls::default()
    };
    c.bench_function("flow/25_rk4_steps_512", |b| {
        b.iter(|| run_flow(&initial, 0.1, &controls).unwrap())
    });
}

fn bench_path_energy(c: &mut Criterion) {
    let oracle = Oracle::new(OracleSpec::sphere(2, 1.0).with_resolution(128)).unwrap();
    let times: Vec<f64> = (0..24).map(|i| 0.1 + 0.004 * i as f64).collect();
    let hist = oracle.history(&times).unwrap();
    let n = hist.frames[0].len();
    c.bench_function("harnack/path_energy_128x24", |b| {
        b.iter(|| path_energy(&hist, 0, times[0], n - 1, times[23]).unwrap())
    });
}

criterion_group!(
    benches,
    bench_frame_build,
    bench_diameter,
    bench_harnack_sweep,
    bench_bruteforce,
    bench_flow_steps,
    bench_path_energy
);
criterion_main!(benches);
