//! Scenario configuration: line-based `key = value` text with `#` comments
//! and dotted keys for sections. Unknown keys, duplicates and out-of-range
//! values are hard errors carrying line numbers.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;

#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for ConfigError {}

type Result<T> = std::result::Result<T, ConfigError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScenarioKind {
    Oracle,
    Flow,
    Harnack,
    Diagnose,
    Rescale,
    Suite,
}

impl ScenarioKind {
    pub fn label(self) -> &'static str {
        match self {
            ScenarioKind::Oracle => "oracle",
            ScenarioKind::Flow => "flow",
            ScenarioKind::Harnack => "harnack",
            ScenarioKind::Diagnose => "diagnose",
            ScenarioKind::Rescale => "rescale",
            ScenarioKind::Suite => "full-suite",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeometryKind {
    Sphere,
    Cylinder,
    GrimReaper,
    Bowl,
    Paperclip,
    PerturbedSphere,
    PinchingFixture,
    ProfileFile,
}

impl GeometryKind {
    pub fn label(self) -> &'static str {
        match self {
            GeometryKind::Sphere => "sphere",
            GeometryKind::Cylinder => "cylinder",
            GeometryKind::GrimReaper => "grim-reaper",
            GeometryKind::Bowl => "bowl",
            GeometryKind::Paperclip => "paperclip",
            GeometryKind::PerturbedSphere => "perturbed-sphere",
            GeometryKind::PinchingFixture => "pinching-fixture",
            GeometryKind::ProfileFile => "profile-file",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TimeModeConfig {
    FiniteTime,
    Ancient,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone)]
pub struct GeometryConfig {
    pub kind: GeometryKind,
    pub dim: usize,
    pub scale: f64,
    pub mode: TimeModeConfig,
    pub truncation: f64,
    pub resolution: usize,
    pub perturbation: f64,
    pub profile: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy)]
pub struct EngineConfig {
    pub cfl: f64,
    pub resample_every: usize,
    pub snapshot_every: usize,
    pub max_steps: usize,
    pub blowup_factor: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct HarnackConfig {
    /// None = auto (least admissible eps0 over the run).
    pub eps0: Option<f64>,
    /// Sweep tolerance coefficient (times phi^3).
    pub tol3: f64,
    /// Number of seeded spacetime pairs for the integrated bound.
    pub pairs: usize,
    /// Brute-force grid nodes per axis for minimizer spot checks.
    pub grid: usize,
    /// Number of seeded synthetic points for minimizer spot checks.
    pub spot_points: usize,
}

#[derive(Debug, Clone, Copy)]
pub struct CheckToggles {
    pub harnack: bool,
    pub pinching: bool,
    pub diameter: bool,
    pub conditions: bool,
    pub integrated: bool,
    pub rescale: bool,
}

#[derive(Debug, Clone)]
pub struct ScenarioConfig {
    pub scenario: ScenarioKind,
    pub seed: u64,
    pub geometry: GeometryConfig,
    pub t_start: f64,
    pub t_end: f64,
    /// Stored slices for oracle (no-flow) histories.
    pub time_frames: usize,
    pub engine: EngineConfig,
    pub harnack: HarnackConfig,
    pub checks: CheckToggles,
    pub pinching_tol: f64,
    pub pinching_budget: f64,
    pub diameter_tol2: f64,
    pub rescale_count: usize,
    pub output_dir: PathBuf,
    pub output_format: ReportFormat,
}

struct RawConfig {
    entries: BTreeMap<String, (String, usize)>,
    consumed: std::cell::RefCell<std::collections::BTreeSet<String>>,
}

impl RawConfig {
    fn parse(text: &str) -> Result<Self> {
        let mut entries: BTreeMap<String, (String, usize)> = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = match raw.find('#') {
                Some(i) => &raw[..i],
                None => raw,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            let eq = line.find('=').ok_or_else(|| {
                ConfigError(format!(
                    "line {}: expected `key = value`, got `{}`",
                    lineno + 1,
                    line
                ))
            })?;
            let key = line[..eq].trim().to_string();
            let value = line[eq + 1..].trim().to_string();
            if key.is_empty() || value.is_empty() {
                return Err(ConfigError(format!(
                    "line {}: empty key or value",
                    lineno + 1
                )));
            }
            if let Some((_, first)) = entries.get(&key) {
                return Err(ConfigError(format!(
                    "duplicate key `{}` on lines {} and {}",
                    key,
                    first + 1,
                    lineno + 1
                )));
            }
            entries.insert(key, (value, lineno));
        }
        Ok(RawConfig {
            entries,
            consumed: Default::default(),
        })
    }

    fn take(&self, key: &str) -> Option<&str> {
        self.consumed.borrow_mut().insert(key.to_string());
        self.entries.get(key).map(|(v, _)| v.as_str())
    }

    fn f64_or(&self, key: &str, default: f64) -> Result<f64> {
        match self.take(key) {
            None => Ok(default),
            Some(v) => v
                .parse::<f64>()
                .map_err(|_| self.value_error(key, "a number")),
        }
    }

    fn usize_or(&self, key: &str, default: usize) -> Result<usize> {
        match self.take(key) {
            None => Ok(default),
            Some(v) => v
                .parse::<usize>()
                .map_err(|_| self.value_error(key, "a nonnegative integer")),
        }
    }

    fn u64_or(&self, key: &str, default: u64) -> Result<u64> {
        match self.take(key) {
            None => Ok(default),
            Some(v) => v
                .parse::<u64>()
                .map_err(|_| self.value_error(key, "a nonnegative integer")),
        }
    }

    fn bool_or(&self, key: &str, default: bool) -> Result<bool> {
        match self.take(key) {
            None => Ok(default),
            Some("true") => Ok(true),
            Some("false") => Ok(false),
            Some(_) => Err(self.value_error(key, "true or false")),
        }
    }

    fn value_error(&self, key: &str, expected: &str) -> ConfigError {
        let line = self.entries.get(key).map(|(_, l)| l + 1).unwrap_or(0);
        ConfigError(format!(
            "line {line}: key `{key}` expects {expected}, got `{}`",
            self.entries.get(key).map(|(v, _)| v.as_str()).unwrap_or("")
        ))
    }

    fn check_unknown(&self) -> Result<()> {
        for (key, (_, line)) in &self.entries {
            if !self.consumed.borrow().contains(key) {
                return Err(ConfigError(format!(
                    "line {}: unknown key `{}`",
                    line + 1,
                    key
                )));
            }
        }
        Ok(())
    }
}

/// Parses and validates a scenario description, filling documented defaults.
pub fn parse_config(text: &str) -> Result<ScenarioConfig> {
    let raw = RawConfig::parse(text)?;

    let scenario = match raw.take("scenario").unwrap_or("suite") {
        "oracle" => ScenarioKind::Oracle,
        "flow" => ScenarioKind::Flow,
        "harnack" => ScenarioKind::Harnack,
        "diagnose" => ScenarioKind::Diagnose,
        "rescale" => ScenarioKind::Rescale,
        "suite" | "full-suite" => ScenarioKind::Suite,
        other => {
            return Err(ConfigError(format!(
                "scenario `{other}` is not one of oracle|flow|harnack|diagnose|rescale|suite"
            )))
        }
    };

    let kind = match raw.take("geometry.kind").unwrap_or("sphere") {
        "sphere" => GeometryKind::Sphere,
        "cylinder" => GeometryKind::Cylinder,
        "grim-reaper" => GeometryKind::GrimReaper,
        "bowl" => GeometryKind::Bowl,
        "paperclip" => GeometryKind::Paperclip,
        "perturbed-sphere" => GeometryKind::PerturbedSphere,
        "pinching-fixture" => GeometryKind::PinchingFixture,
        "profile-file" => GeometryKind::ProfileFile,
        other => {
            return Err(ConfigError(format!(
                "geometry.kind `{other}` is not a known geometry"
            )))
        }
    };

    let mode = match raw.take("geometry.mode") {
        None => match kind {
            GeometryKind::Paperclip => TimeModeConfig::Ancient,
            _ => TimeModeConfig::FiniteTime,
        },
        Some("finite-time") => TimeModeConfig::FiniteTime,
        Some("ancient") => TimeModeConfig::Ancient,
        Some(other) => {
            return Err(ConfigError(format!(
                "geometry.mode `{other}` is not finite-time|ancient"
            )))
        }
    };

    let geometry = GeometryConfig {
        kind,
        dim: raw.usize_or("geometry.d", 2)?,
        scale: raw.f64_or("geometry.scale", 1.0)?,
        mode,
        truncation: raw.f64_or("geometry.truncation", 1.2)?,
        resolution: raw.usize_or("geometry.resolution", 100)?,
        perturbation: raw.f64_or("geometry.perturbation", 0.1)?,
        profile: raw.take("geometry.profile").map(PathBuf::from),
    };

    let engine = EngineConfig {
        cfl: raw.f64_or("engine.cfl", 0.4)?,
        resample_every: raw.usize_or("engine.resample_every", 50)?,
        snapshot_every: raw.usize_or("engine.snapshot_every", 20)?,
        max_steps: raw.usize_or("engine.max_steps", 200_000)?,
        blowup_factor: raw.f64_or("engine.blowup_factor", 1e4)?,
    };

    let eps0 = match raw.take("harnack.eps0") {
        None => None,
        Some("auto") => None,
        Some(v) => Some(v.parse::<f64>().map_err(|_| {
            ConfigError(format!("harnack.eps0 expects auto or a number, got `{v}`"))
        })?),
    };
    let harnack = HarnackConfig {
        eps0,
        tol3: raw.f64_or("harnack.tol3", 1e-3)?,
        pairs: raw.usize_or("harnack.pairs", 50)?,
        grid: raw.usize_or("harnack.grid", 41)?,
        spot_points: raw.usize_or("harnack.spot_points", 20)?,
    };

    let checks = CheckToggles {
        harnack: raw.bool_or("checks.harnack", true)?,
        pinching: raw.bool_or("checks.pinching", true)?,
        diameter: raw.bool_or("checks.diameter", true)?,
        conditions: raw.bool_or("checks.conditions", true)?,
        integrated: raw.bool_or("checks.integrated", true)?,
        rescale: raw.bool_or("checks.rescale", true)?,
    };

    let output_format = match raw.take("output.format").unwrap_or("csv") {
        "csv" => ReportFormat::Csv,
        "json" => ReportFormat::Json,
        other => {
            return Err(ConfigError(format!(
                "output.format `{other}` is not csv|json"
            )))
        }
    };

    let config = ScenarioConfig {
        scenario,
        seed: raw.u64_or("seed", 42)?,
        t_start: raw.f64_or("time.start", 0.0)?,
        t_end: raw.f64_or("time.end", 0.2)?,
        time_frames: raw.usize_or("time.frames", 25)?,
        geometry,
        engine,
        harnack,
        checks,
        pinching_tol: raw.f64_or("pinching.tol", 1e-4)?,
        pinching_budget: raw.f64_or("pinching.budget", 0.0)?,
        diameter_tol2: raw.f64_or("diameter.tol2", 1e-3)?,
        rescale_count: raw.usize_or("rescale.count", 6)?,
        output_dir: PathBuf::from(raw.take("output.dir").unwrap_or("out")),
        output_format,
    };

    raw.check_unknown()?;
    validate(&config)?;
    Ok(config)
}

fn validate(c: &ScenarioConfig) -> Result<()> {
    if !(c.engine.cfl > 0.0 && c.engine.cfl <= 1.0) {
        return Err(ConfigError(format!("cfl out of (0,1]: {}", c.engine.cfl)));
    }
    if !(c.engine.blowup_factor > 1.0) {
        return Err(ConfigError("engine.blowup_factor must exceed 1".into()));
    }
    for (name, v) in [
        ("harnack.tol3", c.harnack.tol3),
        ("pinching.tol", c.pinching_tol),
        ("diameter.tol2", c.diameter_tol2),
    ] {
        if !(v > 0.0) {
            return Err(ConfigError(format!("{name} must be > 0, got {v}")));
        }
    }
    if c.pinching_budget < 0.0 {
        return Err(ConfigError("pinching.budget must be >= 0".into()));
    }
    if c.geometry.resolution < 32 {
        return Err(ConfigError(format!(
            "geometry.resolution must be >= 32, got {}",
            c.geometry.resolution
        )));
    }
    if !(c.geometry.scale > 0.0) {
        return Err(ConfigError("geometry.scale must be > 0".into()));
    }
    if c.time_frames < 2 {
        return Err(ConfigError("time.frames must be >= 2".into()));
    }
    if c.harnack.grid < 11 {
        return Err(ConfigError("harnack.grid must be >= 11".into()));
    }
    match c.geometry.kind {
        GeometryKind::Sphere | GeometryKind::PerturbedSphere | GeometryKind::PinchingFixture => {
            if c.geometry.dim < 1 {
                return Err(ConfigError("geometry.d must be >= 1".into()));
            }
        }
        GeometryKind::Cylinder | GeometryKind::Bowl => {
            if c.geometry.dim < 2 {
                return Err(ConfigError(format!(
                    "geometry.kind {} needs geometry.d >= 2",
                    c.geometry.kind.label()
                )));
            }
            if !(c.geometry.truncation > 0.0 && c.geometry.truncation.is_finite()) {
                return Err(ConfigError(
                    "noncompact geometry needs a finite positive geometry.truncation".into(),
                ));
            }
        }
        GeometryKind::GrimReaper => {
            if !(c.geometry.truncation > 0.0 && c.geometry.truncation < std::f64::consts::FRAC_PI_2)
            {
                return Err(ConfigError(
                    "grim-reaper truncation must lie in (0, pi/2)".into(),
                ));
            }
        }
        GeometryKind::Paperclip => {
            if c.geometry.mode != TimeModeConfig::Ancient {
                return Err(ConfigError(
                    "paperclip requires geometry.mode = ancient".into(),
                ));
            }
        }
        GeometryKind::ProfileFile => {
            if c.geometry.profile.is_none() {
                return Err(ConfigError(
                    "geometry.kind = profile-file requires geometry.profile = <path>".into(),
                ));
            }
        }
    }
    if c.geometry.mode == TimeModeConfig::Ancient
        && matches!(
            c.geometry.kind,
            GeometryKind::Sphere
                | GeometryKind::Cylinder
                | GeometryKind::Paperclip
                | GeometryKind::PerturbedSphere
                | GeometryKind::PinchingFixture
        )
        && !(c.t_end <= 0.0 && c.t_start < c.t_end)
    {
        return Err(ConfigError(format!(
            "ancient mode needs time.start < time.end <= 0, got [{}, {}]",
            c.t_start, c.t_end
        )));
    }
    if !(c.t_start < c.t_end) {
        return Err(ConfigError(format!(
            "time window [{}, {}] is empty",
            c.t_start, c.t_end
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_sphere_scenario_fills_defaults() {
        let c = parse_config(
            "geometry.kind = sphere\ngeometry.d = 2\ngeometry.scale = 1.0\ntime.end = 0.2\n",
        )
        .unwrap();
        assert_eq!(c.scenario, ScenarioKind::Suite);
        assert_eq!(c.engine.cfl, 0.4);
        assert_eq!(c.engine.snapshot_every, 20);
        assert_eq!(c.seed, 42);
        assert_eq!(c.geometry.resolution, 100);
    }

    #[test]
    fn cfl_out_of_range() {
        let err = parse_config("engine.cfl = 1.5\n").unwrap_err();
        assert!(err.0.contains("cfl out of (0,1]"), "{}", err.0);
    }

    #[test]
    fn duplicate_key_names_both_lines() {
        let err = parse_config("seed = 1\n# comment\nseed = 2\n").unwrap_err();
        assert!(err.0.contains("lines 1 and 3"), "{}", err.0);
    }

    #[test]
    fn unknown_key_is_fatal() {
        let err = parse_config("geometry.kindd = sphere\n").unwrap_err();
        assert!(err.0.contains("unknown key"), "{}", err.0);
    }

    #[test]
    fn comments_and_blank_lines_ignored() {
        let c = parse_config("# full line comment\n\nseed = 7 # trailing\n").unwrap();
        assert_eq!(c.seed, 7);
    }

    #[test]
    fn missing_equals_is_an_error() {
        let err = parse_config("seed 7\n").unwrap_err();
        assert!(err.0.contains("line 1"), "{}", err.0);
    }

    #[test]
    fn ancient_window_validation() {
        let bad = parse_config("geometry.mode = ancient\ntime.start = -1\ntime.end = 0.5\n");
        assert!(bad.is_err());
        let ok = parse_config("geometry.mode = ancient\ntime.start = -1\ntime.end = -0.1\n");
        assert!(ok.is_ok());
    }

    #[test]
    fn grim_reaper_truncation_range() {
        let err =
            parse_config("geometry.kind = grim-reaper\ngeometry.truncation = 2.0\n").unwrap_err();
        assert!(err.0.contains("pi/2"), "{}", err.0);
    }
}
