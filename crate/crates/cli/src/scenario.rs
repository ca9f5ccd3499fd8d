//! Scenario orchestration: geometry construction, flow runs, verification
//! checks, and report/snapshot persistence.

use crate::config::{GeometryKind, ReportFormat, ScenarioConfig, ScenarioKind, TimeModeConfig};
use crate::report::{CheckVerdict, ReportRow, ReportTable, Verdict};
use crate::snapshot;
use mcflab_core::diagnostics::{
    diameter_decay_check, flatness_profile, pinching_monotonicity, pinching_ratios, rescale,
    sphere_conditions, umbilicity_residual, PointSelector,
};
use mcflab_core::fixtures;
use mcflab_core::flow::{run_flow, FlowControls, StopReason};
use mcflab_core::harnack::{
    harnack_min, harnack_min_bruteforce, harnack_quantity, harnack_sweep, integrated_bound_check,
    Eps0Policy, HarnackMode, HarnackParams,
};
use mcflab_core::history::FlowHistory;
use mcflab_core::oracle::{Oracle, OracleSpec, TimeMode};
use mcflab_core::sampling;
use mcflab_core::Error as CoreError;
use std::path::Path;

#[derive(Debug)]
pub enum CliError {
    /// Bad configuration or I/O: exit 1.
    Usage(String),
    /// Numerical failure: exit 2.
    Numerics(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Numerics(m) => write!(f, "numerical failure: {m}"),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Numerics(_) => 2,
        }
    }
}

fn core_err(e: CoreError) -> CliError {
    match e {
        CoreError::NonFinite { .. } | CoreError::NumericalFailure(_) => {
            CliError::Numerics(e.to_string())
        }
        other => CliError::Usage(other.to_string()),
    }
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| a + (b - a) * i as f64 / (n - 1) as f64)
        .collect()
}

fn oracle_spec(config: &ScenarioConfig) -> Option<OracleSpec> {
    let g = &config.geometry;
    let mode = match g.mode {
        TimeModeConfig::FiniteTime => TimeMode::FiniteTime,
        TimeModeConfig::Ancient => TimeMode::Ancient,
    };
    let spec = match g.kind {
        GeometryKind::Sphere => OracleSpec {
            mode,
            ..OracleSpec::sphere(g.dim, g.scale)
        },
        GeometryKind::Cylinder => OracleSpec {
            mode,
            ..OracleSpec::cylinder(g.dim, g.scale, g.truncation)
        },
        GeometryKind::GrimReaper => OracleSpec::grim_reaper(g.truncation),
        GeometryKind::Bowl => OracleSpec::bowl(g.dim, g.truncation),
        GeometryKind::Paperclip => OracleSpec::paperclip(),
        _ => return None,
    };
    Some(spec.with_resolution(g.resolution))
}

struct Prepared {
    history: FlowHistory,
    oracle: Option<Oracle>,
    stop: String,
    steps: usize,
}

fn prepare(config: &ScenarioConfig, config_dir: &Path) -> Result<Prepared, CliError> {
    let g = &config.geometry;
    let oracle = match oracle_spec(config) {
        Some(spec) => Some(Oracle::new(spec).map_err(core_err)?),
        None => None,
    };

    // fixture histories and pure oracle samplings skip the engine
    if g.kind == GeometryKind::PinchingFixture {
        let times = linspace(config.t_start, config.t_end, config.time_frames);
        let hist =
            fixtures::pinching_drop_history(g.dim.max(2), &times, g.resolution, g.perturbation)
                .map_err(core_err)?;
        return Ok(Prepared {
            history: hist,
            oracle: None,
            stop: "fixture".into(),
            steps: 0,
        });
    }
    if config.scenario == ScenarioKind::Oracle {
        let oracle = oracle.ok_or_else(|| {
            CliError::Usage(format!(
                "scenario `oracle` needs a closed-form geometry, got {}",
                g.kind.label()
            ))
        })?;
        let times = linspace(config.t_start, config.t_end, config.time_frames);
        let history = oracle.history(&times).map_err(core_err)?;
        return Ok(Prepared {
            history,
            oracle: Some(oracle),
            stop: "oracle-sampling".into(),
            steps: 0,
        });
    }

    let initial = match g.kind {
        GeometryKind::PerturbedSphere => {
            fixtures::perturbed_sphere_frame(g.scale, g.perturbation, g.resolution, config.t_start)
                .map_err(core_err)?
        }
        GeometryKind::ProfileFile => {
            let path = config_dir.join(g.profile.as_ref().expect("validated"));
            let snap =
                snapshot::read_snapshot(&path).map_err(|e| CliError::Usage(e.to_string()))?;
            let mut frame =
                snapshot::rebuild_frame(&snap).map_err(|e| CliError::Usage(e.to_string()))?;
            frame.t = config.t_start;
            frame
        }
        _ => oracle
            .as_ref()
            .expect("non-file geometries are oracles")
            .frame(config.t_start)
            .map_err(core_err)?,
    };
    let controls = FlowControls {
        cfl: config.engine.cfl,
        resample_every: config.engine.resample_every,
        snapshot_every: config.engine.snapshot_every,
        max_steps: config.engine.max_steps,
        blowup_factor: config.engine.blowup_factor,
    };
    let run = run_flow(&initial, config.t_end, &controls).map_err(core_err)?;
    if let StopReason::Failure { step, message } = &run.stop {
        return Err(CliError::Numerics(format!("at step {step}: {message}")));
    }
    Ok(Prepared {
        stop: run.stop.label().to_string(),
        steps: run.steps,
        history: run.history,
        oracle,
    })
}

/// All inequality checks on truncated geometries stay away from the cut:
/// stored open frames lose a 10% margin at each artificial end. Axis poles
/// are genuine smooth points and are kept. The envelope keeps the untrimmed
/// supremum, which is the stronger (valid) value.
fn trim_open_frames(history: &mut FlowHistory) {
    for frame in &mut history.frames {
        if frame.is_closed() {
            continue;
        }
        let (pole_start, pole_end) = frame.topology.pole_flags();
        let n = frame.len();
        let margin = n / 10;
        let cut_start = if pole_start { 0 } else { margin };
        let cut_end = if pole_end { 0 } else { margin };
        if cut_start + cut_end == 0 || n - cut_start - cut_end < mcflab_core::frame::MIN_POINTS {
            continue;
        }
        frame.points.drain(n - cut_end..);
        frame.points.drain(..cut_start);
        frame.refresh_stats();
    }
}

fn check_in_scenario(scenario: ScenarioKind, name: &str) -> bool {
    let all = [
        "oracle-residual",
        "harnack-sweep",
        "minimizer-oracle",
        "pinching-monotonicity",
        "diameter-decay",
        "sphere-conditions",
        "integrated-bound",
        "rescale",
    ];
    match scenario {
        ScenarioKind::Suite | ScenarioKind::Oracle => all.contains(&name),
        ScenarioKind::Flow => name == "flow-sanity",
        ScenarioKind::Harnack => {
            matches!(
                name,
                "harnack-sweep" | "minimizer-oracle" | "integrated-bound"
            )
        }
        ScenarioKind::Diagnose => matches!(
            name,
            "pinching-monotonicity" | "diameter-decay" | "sphere-conditions" | "flatness-profile"
        ),
        ScenarioKind::Rescale => name == "rescale",
    }
}

/// Runs the configured scenario and writes report, verdict and snapshots.
/// Returns the exit code: 0 all checks pass, 2 numerical failure,
/// 3 a verification margin breached.
pub fn run_scenario(
    config: &ScenarioConfig,
    tol_scale: f64,
    config_dir: &Path,
) -> Result<(i32, Verdict), CliError> {
    if !(tol_scale > 0.0) {
        return Err(CliError::Usage(format!(
            "tolerance scale must be > 0, got {tol_scale}"
        )));
    }
    let mut prepared = prepare(config, config_dir)?;
    trim_open_frames(&mut prepared.history);
    let history = &prepared.history;
    let dim = history.frames[0].dim;
    let ancient = config.t_end <= 0.0;
    let mode = if ancient {
        HarnackMode::Ancient
    } else {
        HarnackMode::FiniteTime
    };
    let closed = history.frames.iter().all(|f| f.is_closed());
    let mut checks: Vec<CheckVerdict> = Vec::new();
    let enabled = |name: &str, toggle: bool| toggle && check_in_scenario(config.scenario, name);

    // flow sanity: envelope and diameter monotonicity along the run
    if check_in_scenario(config.scenario, "flow-sanity") {
        let mut pass = true;
        let mut detail = String::from("envelope nondecreasing");
        for w in history.phi.windows(2) {
            if w[1] < w[0] {
                pass = false;
                detail = "envelope decreased".into();
            }
        }
        if closed {
            let mut prev = f64::INFINITY;
            for f in &history.frames {
                let d = f.stats.diameter.unwrap_or(f64::NAN);
                if d > prev + 1e-6 * d {
                    pass = false;
                    detail = format!("diameter grew at t = {}", f.t);
                }
                prev = d;
            }
        }
        checks.push(CheckVerdict {
            name: "flow-sanity".into(),
            pass,
            worst_margin: 0.0,
            location: String::new(),
            detail,
        });
    }

    if let (true, Some(oracle)) = (
        check_in_scenario(config.scenario, "oracle-residual"),
        prepared.oracle.as_ref(),
    ) {
        let t_mid = 0.5 * (config.t_start + config.t_end);
        let tol = 1e-6 * tol_scale;
        match oracle.residual(t_mid, 1e-4) {
            Ok(res) => checks.push(CheckVerdict {
                name: "oracle-residual".into(),
                pass: res <= tol,
                worst_margin: tol - res,
                location: format!("t = {t_mid}"),
                detail: format!("max flow residual {res:.3e} (tol {tol:.1e})"),
            }),
            Err(e) => return Err(core_err(e)),
        }
    }

    let policy = match config.harnack.eps0 {
        None => Eps0Policy::Auto,
        Some(e) => Eps0Policy::Fixed(e),
    };
    let mut sweep_by_frame: Vec<f64> = vec![f64::NAN; history.len()];
    if enabled("harnack-sweep", config.checks.harnack) {
        match harnack_sweep(history, mode, policy, config.harnack.tol3 * tol_scale) {
            Ok(report) => {
                for fr in &report.frames {
                    sweep_by_frame[fr.frame_index] = fr.z_min;
                }
                let worst = report
                    .frames
                    .iter()
                    .min_by(|a, b| {
                        (a.z_min + a.tol)
                            .partial_cmp(&(b.z_min + b.tol))
                            .expect("finite")
                    })
                    .expect("nonempty");
                checks.push(CheckVerdict {
                    name: "harnack-sweep".into(),
                    pass: report.pass,
                    worst_margin: worst.z_min + worst.tol,
                    location: format!(
                        "frame {} t = {} point {}",
                        worst.frame_index, worst.t, worst.argmin_point
                    ),
                    detail: format!(
                        "eps0 = {}, min Z = {:.6e}, {} frame(s) skipped by mode",
                        report.eps0, report.min_z, report.skipped_frames
                    ),
                });
            }
            Err(e) => checks.push(failed_check("harnack-sweep", e)?),
        }
    }

    if enabled("minimizer-oracle", config.checks.harnack) && config.harnack.spot_points > 0 {
        checks.push(minimizer_check(config, tol_scale)?);
    }

    if enabled("pinching-monotonicity", config.checks.pinching) && dim >= 2 {
        let tol = (config.pinching_tol + config.pinching_budget) * tol_scale;
        let mut ks = vec![1usize];
        if dim - 1 > 1 {
            ks.push(dim - 1);
        }
        let mut pass = true;
        let mut worst_margin = f64::INFINITY;
        let mut location = String::new();
        let mut details = Vec::new();
        let mut errored = None;
        for &k in &ks {
            match pinching_monotonicity(history, k, tol) {
                Ok(violations) => {
                    // slack: tolerance minus the largest drop seen
                    let mins: Vec<f64> = history
                        .frames
                        .iter()
                        .map(|f| pinching_ratios(f, k).map(|(q, _)| q))
                        .collect::<mcflab_core::Result<_>>()
                        .map_err(core_err)?;
                    for (j, w) in mins.windows(2).enumerate() {
                        let drop = w[0] - w[1];
                        if tol - drop < worst_margin {
                            worst_margin = tol - drop;
                            location = format!("k = {k} frames {} -> {}", j, j + 1);
                        }
                    }
                    if !violations.is_empty() {
                        pass = false;
                        let v = &violations[0];
                        location = format!("k = {k} frames {} -> {}", v.frame_from, v.frame_to);
                        details.push(format!(
                            "k = {k}: min Q dropped {:.3e} beyond tol at frames {} -> {}",
                            v.excess, v.frame_from, v.frame_to
                        ));
                    } else {
                        details.push(format!("k = {k}: no violations at tol {tol:.1e}"));
                    }
                }
                Err(e) => {
                    errored = Some(e);
                    break;
                }
            }
        }
        match errored {
            Some(e) => checks.push(failed_check("pinching-monotonicity", e)?),
            None => checks.push(CheckVerdict {
                name: "pinching-monotonicity".into(),
                pass,
                worst_margin,
                location,
                detail: details.join("; "),
            }),
        }
    }

    if enabled("diameter-decay", config.checks.diameter) {
        if closed {
            match diameter_decay_check(history, config.diameter_tol2 * tol_scale) {
                Ok(report) => {
                    let pass = report.monotone_pass && report.decay_pass;
                    checks.push(CheckVerdict {
                        name: "diameter-decay".into(),
                        pass,
                        worst_margin: report.worst_rate_margin,
                        location: String::new(),
                        detail: format!(
                            "worst rate margin {:.4} (law slack -4d - d(diam^2)/dt)",
                            report.worst_rate_margin
                        ),
                    });
                }
                Err(e) => checks.push(failed_check("diameter-decay", e)?),
            }
        } else {
            checks.push(CheckVerdict {
                name: "diameter-decay".into(),
                pass: true,
                worst_margin: f64::NAN,
                location: String::new(),
                detail: "skipped: diameter unsupported for truncated frames".into(),
            });
        }
    }

    if enabled("sphere-conditions", config.checks.conditions) {
        match sphere_conditions(history) {
            Ok(report) => {
                let mut detail = format!(
                    "min Q1 mean {:.4}; maxH/minH mean {:.4} slope {:.3e}",
                    report.trend_min_q1.window_mean,
                    report.trend_ratio_h.window_mean,
                    report.trend_ratio_h.slope
                );
                if let Some(tr) = report.trend_max_h_diam {
                    detail.push_str(&format!("; maxH*diam mean {:.4}", tr.window_mean));
                }
                if let Some(tr) = report.trend_sqrt_mt_max_h {
                    detail.push_str(&format!("; sqrt(-t)*maxH mean {:.4}", tr.window_mean));
                }
                if !report.diameter_supported {
                    detail.push_str("; diameter unsupported (truncated frames)");
                }
                checks.push(CheckVerdict {
                    name: "sphere-conditions".into(),
                    pass: true,
                    worst_margin: f64::NAN,
                    location: String::new(),
                    detail,
                });
            }
            Err(e) => checks.push(failed_check("sphere-conditions", e)?),
        }
    }

    if check_in_scenario(config.scenario, "flatness-profile") && dim >= 2 {
        match flatness_profile(history, 1, &[0.05, 0.1, 0.2]) {
            Ok(prof) => {
                let rows: Vec<String> = prof
                    .iter()
                    .map(|(e, d)| format!("eps {e}: delta {d:.4}"))
                    .collect();
                checks.push(CheckVerdict {
                    name: "flatness-profile".into(),
                    pass: true,
                    worst_margin: f64::NAN,
                    location: String::new(),
                    detail: rows.join("; "),
                });
            }
            Err(e) => checks.push(failed_check("flatness-profile", e)?),
        }
    }

    if enabled("integrated-bound", config.checks.integrated) {
        if ancient {
            checks.push(CheckVerdict {
                name: "integrated-bound".into(),
                pass: true,
                worst_margin: f64::NAN,
                location: String::new(),
                detail: "skipped: needs a finite-time window (0 < t1 < t2)".into(),
            });
        } else {
            let mut rng = sampling::rng(config.seed);
            let pairs = sampling::seeded_bound_pairs(history, config.harnack.pairs, &mut rng);
            if pairs.len() < 2 {
                checks.push(CheckVerdict {
                    name: "integrated-bound".into(),
                    pass: true,
                    worst_margin: f64::NAN,
                    location: String::new(),
                    detail: "skipped: fewer than two positive-time frames".into(),
                });
            } else {
                let eps0 = config.harnack.eps0.unwrap_or(0.0);
                match integrated_bound_check(history, &pairs, eps0, config.harnack.tol3 * tol_scale)
                {
                    Ok(report) => {
                        let worst = report
                            .checks
                            .iter()
                            .min_by(|a, b| a.margin.partial_cmp(&b.margin).expect("finite"))
                            .expect("nonempty");
                        checks.push(CheckVerdict {
                            name: "integrated-bound".into(),
                            pass: report.pass,
                            worst_margin: report.worst_margin,
                            location: format!(
                                "pair t1 = {} p1 = {} -> t2 = {} p2 = {}",
                                worst.pair.t1, worst.pair.p1, worst.pair.t2, worst.pair.p2
                            ),
                            detail: format!(
                                "{} pairs, worst LHS {:.5} vs RHS {:.5}",
                                report.checks.len(),
                                worst.lhs,
                                worst.rhs
                            ),
                        });
                    }
                    Err(e) => checks.push(failed_check("integrated-bound", e)?),
                }
            }
        }
    }

    if enabled("rescale", config.checks.rescale) {
        checks.push(rescale_check(config, history, dim)?);
    }

    // time series
    let table = build_table(config, history, &sweep_by_frame)?;

    // outputs
    let out = &config.output_dir;
    std::fs::create_dir_all(out.join("snapshots"))
        .map_err(|e| CliError::Usage(format!("cannot create {}: {e}", out.display())))?;
    for (i, frame) in history.frames.iter().enumerate() {
        let path = out.join("snapshots").join(format!("frame_{i:04}.txt"));
        snapshot::write_snapshot(frame, &path)
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))?;
    }
    let (report_name, report_text) = match config.output_format {
        ReportFormat::Csv => ("report.csv", table.to_csv()),
        ReportFormat::Json => ("report.json", table.to_json()),
    };
    std::fs::write(out.join(report_name), report_text)
        .map_err(|e| CliError::Usage(format!("cannot write report: {e}")))?;

    let all_pass = checks.iter().all(|c| c.pass);
    let exit_code = if all_pass { 0 } else { 3 };
    let verdict = Verdict {
        scenario: config.scenario.label().to_string(),
        geometry: format!(
            "{} d={} scale={} mode={}",
            config.geometry.kind.label(),
            config.geometry.dim,
            config.geometry.scale,
            match config.geometry.mode {
                TimeModeConfig::FiniteTime => "finite-time",
                TimeModeConfig::Ancient => "ancient",
            }
        ),
        seed: config.seed,
        tol_scale,
        stop: prepared.stop.clone(),
        steps: prepared.steps,
        frames: history.len(),
        checks,
        exit_code,
    };
    std::fs::write(out.join("verdict.json"), verdict.to_json())
        .map_err(|e| CliError::Usage(format!("cannot write verdict: {e}")))?;
    Ok((exit_code, verdict))
}

/// Check-level core errors become failed checks (exit 3); genuine
/// numerical failures abort with exit 2.
fn failed_check(name: &str, e: CoreError) -> Result<CheckVerdict, CliError> {
    match e {
        CoreError::NonFinite { .. } | CoreError::NumericalFailure(_) => {
            Err(CliError::Numerics(e.to_string()))
        }
        other => Ok(CheckVerdict {
            name: name.into(),
            pass: false,
            worst_margin: f64::NEG_INFINITY,
            location: String::new(),
            detail: other.to_string(),
        }),
    }
}

fn minimizer_check(config: &ScenarioConfig, tol_scale: f64) -> Result<CheckVerdict, CliError> {
    let mut rng = sampling::rng(config.seed.wrapping_add(1));
    let mut pass = true;
    let mut worst_margin = f64::INFINITY;
    let mut location = String::new();
    for i in 0..config.harnack.spot_points {
        let dim = 1 + i % 3;
        let (pt, eps0) = sampling::random_admissible_point(&mut rng, dim);
        let params =
            HarnackParams::new(eps0, dim, 2.0, 1.0, HarnackMode::FiniteTime).map_err(core_err)?;
        let exact = harnack_min(&pt, &params).map_err(core_err)?;
        let grid = config.harnack.grid;
        let vmax = exact
            .v_star
            .iter()
            .fold(1.0f64, |a, v| a.max(2.0 * v.abs()));
        let brute = harnack_min_bruteforce(&pt, &params, vmax, grid);
        let brute = match brute {
            Ok(b) => b,
            Err(e) => return failed_check("minimizer-oracle", e),
        };
        // grid optimum can exceed the closed form by at most the quadratic
        // curvature over one cell
        let spacing = 2.0 * brute.grid_radius.expect("grid search") / (grid - 1) as f64;
        let qmax = pt
            .lambda
            .iter()
            .map(|l| l + eps0 * pt.h)
            .fold(f64::NEG_INFINITY, f64::max);
        let bound = spacing * spacing * qmax * tol_scale;
        let margin = bound - (exact.z_min - brute.z_min).abs();
        if margin < worst_margin {
            worst_margin = margin;
            location = format!("spot point {i} (d = {dim})");
        }
        if margin < 0.0 {
            pass = false;
        }
        for _ in 0..100 {
            let v = sampling::random_direction(&mut rng, dim, vmax);
            let z = harnack_quantity(&pt, &v, &params).map_err(core_err)?;
            if exact.z_min > z + 1e-12 {
                pass = false;
                location = format!("spot point {i}: random direction beat V*");
            }
        }
    }
    Ok(CheckVerdict {
        name: "minimizer-oracle".into(),
        pass,
        worst_margin,
        location,
        detail: format!(
            "{} seeded points, closed form vs {}^d grid",
            config.harnack.spot_points, config.harnack.grid
        ),
    })
}

fn rescale_check(
    config: &ScenarioConfig,
    history: &FlowHistory,
    dim: usize,
) -> Result<CheckVerdict, CliError> {
    let count = config.rescale_count.max(2).min(history.len());
    let indices: Vec<usize> = (0..count)
        .map(|i| i * (history.len() - 1) / (count - 1))
        .collect();
    let selector = if dim >= 2 {
        PointSelector::ArgminQ(1)
    } else {
        PointSelector::Index(0)
    };
    let mut pass = true;
    let mut worst_margin = f64::INFINITY;
    let mut umb = Vec::new();
    for &j in &indices {
        match rescale(history, j, selector) {
            Ok(frame) => {
                let margin = 1.0 + 1e-9 - frame.stats.max_h;
                worst_margin = worst_margin.min(margin);
                if margin < 0.0 {
                    pass = false;
                }
                if dim >= 2 {
                    if let Ok(u) = umbilicity_residual(&frame) {
                        umb.push(u);
                    }
                }
            }
            Err(e) => return failed_check("rescale", e),
        }
    }
    let detail = if umb.len() >= 2 {
        format!(
            "max rescaled H <= 1 on {} slices; umbilicity {:.3e} -> {:.3e}",
            indices.len(),
            umb[0],
            umb[umb.len() - 1]
        )
    } else {
        format!("max rescaled H <= 1 on {} slices", indices.len())
    };
    Ok(CheckVerdict {
        name: "rescale".into(),
        pass,
        worst_margin,
        location: String::new(),
        detail,
    })
}

fn build_table(
    config: &ScenarioConfig,
    history: &FlowHistory,
    sweep_by_frame: &[f64],
) -> Result<ReportTable, CliError> {
    let dim = history.frames[0].dim;
    let q_columns = dim.saturating_sub(1);
    let mut rows = Vec::with_capacity(history.len());
    for (j, frame) in history.frames.iter().enumerate() {
        let diam = if frame.is_closed() {
            match frame.stats.diameter {
                Some(d) => d,
                None => mcflab_core::diagnostics::diameter(frame).map_err(core_err)?,
            }
        } else {
            f64::NAN
        };
        let mut min_q = Vec::with_capacity(q_columns);
        for k in 1..=q_columns {
            min_q.push(match pinching_ratios(frame, k) {
                Ok((q, _)) => q,
                Err(_) => f64::NAN,
            });
        }
        rows.push(ReportRow {
            t: frame.t,
            max_h: frame.stats.max_h,
            min_h: frame.stats.min_h,
            diam,
            min_q,
            min_z: if config.checks.harnack {
                sweep_by_frame[j]
            } else {
                f64::NAN
            },
            phi: history.phi[j],
        });
    }
    Ok(ReportTable { q_columns, rows })
}
