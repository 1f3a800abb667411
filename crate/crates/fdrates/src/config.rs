//! `key=value` run configuration for the flow subcommands.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

use fdrates_core::flow::initial::{InitialData, TargetShift};
use fdrates_core::numerics::forms::OuterBoundary;
use fdrates_core::numerics::grid::MIN_CELLS;
use fdrates_core::{ExponentSet, Grading, RadialGrid};

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("line {line}: {message}")]
    Line { line: usize, message: String },
    #[error("{0}")]
    Invalid(String),
}

pub struct KeySpec {
    pub name: &'static str,
    /// `None`: required, or optional without a default.
    pub default: Option<&'static str>,
    pub help: &'static str,
}

pub const KEYS: &[KeySpec] = &[
    KeySpec { name: "d", default: None, help: "space dimension (required)" },
    KeySpec { name: "m", default: None, help: "diffusion exponent, m < 1 (exactly one of m, alpha)" },
    KeySpec { name: "alpha", default: None, help: "profile exponent 1/(m-1) < 0 (exactly one of m, alpha)" },
    KeySpec { name: "tolerance", default: Some("1e-12"), help: "relative tolerance recognising m = m_c and m = m_*" },
    KeySpec { name: "D0", default: Some("2"), help: "lower sandwich profile V_D0" },
    KeySpec { name: "D1", default: Some("1"), help: "upper sandwich profile V_D1, 0 < D1 < D0" },
    KeySpec { name: "data.kind", default: Some("profile-blend"), help: "profile-blend | eigen-seeded | random-bump" },
    KeySpec { name: "data.seed", default: Some("0"), help: "RNG seed for random-bump" },
    KeySpec { name: "data.epsilon", default: Some("0.01"), help: "mode amplitude for eigen-seeded" },
    KeySpec { name: "data.k", default: Some("1"), help: "radial index of the seeding mode (l = 0 for the flow, data.l for evolve-linear)" },
    KeySpec { name: "data.D", default: Some("matched"), help: "target profile: matched (zero mass defect; the sandwich midpoint for evolve-linear) or a number in (D1, D0)" },
    KeySpec { name: "data.amplitude", default: Some("0.05"), help: "bump amplitude for random-bump" },
    KeySpec { name: "data.bumps", default: Some("4"), help: "number of bumps for random-bump" },
    KeySpec { name: "data.l", default: Some("0"), help: "angular sector for evolve-linear" },
    KeySpec { name: "grid.R_max", default: Some("20"), help: "truncation radius" },
    KeySpec { name: "grid.N", default: Some("400"), help: "number of cells" },
    KeySpec { name: "grid.grading", default: Some("sinh"), help: "sinh | uniform" },
    KeySpec { name: "grid.scale", default: Some("1"), help: "transition radius of the sinh grading" },
    KeySpec { name: "grid.boundary", default: Some("natural"), help: "outer condition for evolve-linear: natural | asymptotic" },
    KeySpec { name: "time.dt", default: Some("1e-3"), help: "time step" },
    KeySpec { name: "time.t_end", default: Some("1"), help: "final time" },
    KeySpec { name: "output.cadence", default: Some("10"), help: "steps between trace rows" },
    KeySpec { name: "output.path", default: Some("-"), help: "trace file, - for stdout" },
    KeySpec { name: "fit.window_start", default: None, help: "start of the rate-fit window (with fit.window_end)" },
    KeySpec { name: "fit.window_end", default: None, help: "end of the rate-fit window, <= time.t_end" },
];

/// Key table for `--help`.
pub fn keys_help() -> String {
    let mut out = String::from("Configuration keys (key=value per line, '#' starts a comment):\n");
    for k in KEYS {
        let default = k.default.map_or(String::new(), |d| format!(" [default: {d}]"));
        let _ = writeln!(out, "  {:<18} {}{}", k.name, k.help, default);
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DataKind {
    ProfileBlend,
    EigenSeeded,
    RandomBump,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub exponents: ExponentSet,
    pub d0: f64,
    pub d1: f64,
    pub kind: DataKind,
    pub seed: u64,
    pub epsilon: f64,
    pub k: u32,
    pub target: TargetShift,
    pub amplitude: f64,
    pub bumps: usize,
    pub l: u32,
    pub r_max: f64,
    pub cells: usize,
    pub grading: Grading,
    pub boundary: OuterBoundary,
    pub dt: f64,
    pub t_end: f64,
    pub cadence: usize,
    pub output: Option<PathBuf>,
    pub window: Option<(f64, f64)>,
    /// Resolved `key=value` pairs in table order, defaults included.
    pub echo: Vec<(String, String)>,
}

impl RunConfig {
    /// Initial data for the nonlinear flow; the seeding profile is the
    /// midpoint of the sandwich.
    pub fn initial_data(&self) -> InitialData {
        match self.kind {
            DataKind::ProfileBlend => InitialData::ProfileBlend,
            DataKind::EigenSeeded => {
                InitialData::EigenSeeded { k: self.k, epsilon: self.epsilon, shift: 0.5 * (self.d0 + self.d1) }
            }
            DataKind::RandomBump => {
                InitialData::RandomBump { seed: self.seed, amplitude: self.amplitude, bumps: self.bumps }
            }
        }
    }

    /// Weight `D` of the linear sector flow: `data.D`, or the sandwich
    /// midpoint when matched.
    pub fn sector_shift(&self) -> f64 {
        match self.target {
            TargetShift::Fixed(s) => s,
            TargetShift::Matched => 0.5 * (self.d0 + self.d1),
        }
    }

    pub fn grid(&self) -> RadialGrid {
        RadialGrid::new(self.r_max, self.cells, self.grading, self.exponents.d).expect("validated at parse time")
    }
}

struct Entries {
    map: HashMap<&'static str, (String, usize)>,
}

impl Entries {
    fn raw(&self, key: &'static str) -> Option<(&str, usize)> {
        self.map.get(key).map(|(v, l)| (v.as_str(), *l))
    }

    fn line(&self, key: &'static str) -> Option<usize> {
        self.map.get(key).map(|e| e.1)
    }

    fn err(&self, key: &'static str, message: String) -> ConfigError {
        match self.line(key) {
            Some(line) => ConfigError::Line { line, message },
            None => ConfigError::Invalid(message),
        }
    }

    /// The given value or the table default.
    fn text(&self, key: &'static str) -> Option<&str> {
        self.raw(key).map(|(v, _)| v).or_else(|| spec(key).default)
    }

    fn parse<T: FromStr>(&self, key: &'static str, what: &str) -> Result<Option<T>, ConfigError> {
        match self.text(key) {
            None => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|_| self.err(key, format!("{key}: expected {what}, got `{v}`"))),
        }
    }

    fn real(&self, key: &'static str) -> Result<Option<f64>, ConfigError> {
        let v: Option<f64> = self.parse(key, "a number")?;
        match v {
            Some(x) if !x.is_finite() => Err(self.err(key, format!("{key} must be finite"))),
            _ => Ok(v),
        }
    }

    fn positive(&self, key: &'static str) -> Result<f64, ConfigError> {
        let x = self.real(key)?.expect("key has a default");
        if !(x > 0.0) {
            return Err(self.err(key, format!("{key} must be positive, got {x}")));
        }
        Ok(x)
    }

    fn require<T>(&self, key: &'static str, v: Option<T>) -> Result<T, ConfigError> {
        v.ok_or_else(|| ConfigError::Invalid(format!("missing required key `{key}`")))
    }
}

fn spec(key: &str) -> &'static KeySpec {
    KEYS.iter().find(|k| k.name == key).expect("key is in the table")
}

fn lex(text: &str) -> Result<Entries, ConfigError> {
    let mut map: HashMap<&'static str, (String, usize)> = HashMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let Some((key, value)) = content.split_once('=') else {
            return Err(ConfigError::Line { line, message: format!("expected key=value, got `{content}`") });
        };
        let (key, value) = (key.trim(), value.trim());
        let Some(spec) = KEYS.iter().find(|k| k.name == key) else {
            return Err(ConfigError::Line { line, message: format!("unknown key `{key}`") });
        };
        if value.is_empty() {
            return Err(ConfigError::Line { line, message: format!("{key}: empty value") });
        }
        if let Some((_, first)) = map.get(spec.name) {
            return Err(ConfigError::Line {
                line,
                message: format!("duplicate key `{key}` (first set on line {first}, again on line {line})"),
            });
        }
        map.insert(spec.name, (value.to_owned(), line));
    }
    Ok(Entries { map })
}

fn core_err(e: &Entries, key: &'static str, err: fdrates_core::Error) -> ConfigError {
    e.err(key, err.to_string())
}

/// Parses and validates; nothing is computed before every check has passed.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let e = lex(text)?;

    // single-key bounds first, so they are reported even without `d`
    if let Some(m) = e.real("m")? {
        if !(m < 1.0) {
            return Err(e.err("m", format!("m must be < 1, got {m}")));
        }
    }
    if let Some(alpha) = e.real("alpha")? {
        if !(alpha < 0.0) {
            return Err(e.err("alpha", format!("alpha must be negative, got {alpha}")));
        }
    }
    let d: u32 = e.parse("d", "a positive integer")?.ok_or_else(|| ConfigError::Invalid("missing required key `d`".into()))?;
    let tolerance = e.real("tolerance")?.expect("default");
    let exponents = match (e.raw("m"), e.raw("alpha")) {
        (Some(_), Some(_)) => {
            return Err(ConfigError::Invalid(format!(
                "set either m or alpha, not both (lines {} and {})",
                e.line("m").unwrap_or(0),
                e.line("alpha").unwrap_or(0)
            )))
        }
        (None, None) => return Err(ConfigError::Invalid("missing required key `m` (or `alpha`)".into())),
        (Some(_), None) => {
            let m = e.require("m", e.real("m")?)?;
            ExponentSet::with_tolerance(d, m, tolerance).map_err(|err| core_err(&e, "m", err))?
        }
        (None, Some(_)) => {
            let alpha = e.require("alpha", e.real("alpha")?)?;
            ExponentSet::from_alpha(d, alpha, tolerance).map_err(|err| core_err(&e, "alpha", err))?
        }
    };

    let d0 = e.positive("D0")?;
    let d1 = e.positive("D1")?;
    if !(d0 > d1) {
        return Err(ConfigError::Invalid(format!("need D0 > D1, got D0 = {d0}, D1 = {d1}")));
    }

    let kind = match e.text("data.kind").expect("default") {
        "profile-blend" => DataKind::ProfileBlend,
        "eigen-seeded" => DataKind::EigenSeeded,
        "random-bump" => DataKind::RandomBump,
        other => {
            return Err(e.err(
                "data.kind",
                format!("data.kind: expected profile-blend, eigen-seeded or random-bump, got `{other}`"),
            ))
        }
    };
    let seed: u64 = e.parse("data.seed", "a nonnegative integer")?.expect("default");
    let epsilon = e.real("data.epsilon")?.expect("default");
    let k: u32 = e.parse("data.k", "a nonnegative integer")?.expect("default");
    let target = match e.text("data.D").expect("default") {
        "matched" => TargetShift::Matched,
        _ => {
            let s = e.real("data.D")?.expect("present");
            if !(s > d1 && s < d0) {
                return Err(e.err("data.D", format!("data.D = {s} must lie strictly between D1 = {d1} and D0 = {d0}")));
            }
            TargetShift::Fixed(s)
        }
    };
    let amplitude = e.real("data.amplitude")?.expect("default");
    if amplitude < 0.0 {
        return Err(e.err("data.amplitude", "data.amplitude must be nonnegative".into()));
    }
    let bumps: usize = e.parse("data.bumps", "a positive integer")?.expect("default");
    if bumps == 0 {
        return Err(e.err("data.bumps", "data.bumps must be at least 1".into()));
    }
    let l: u32 = e.parse("data.l", "a nonnegative integer")?.expect("default");

    let r_max = e.positive("grid.R_max")?;
    let cells: usize = e.parse("grid.N", "a positive integer")?.expect("default");
    if cells < MIN_CELLS {
        return Err(e.err("grid.N", format!("grid.N must be at least {MIN_CELLS}")));
    }
    let scale = e.positive("grid.scale")?;
    let grading = match e.text("grid.grading").expect("default") {
        "sinh" => Grading::Sinh { scale },
        "uniform" => Grading::Uniform,
        other => return Err(e.err("grid.grading", format!("grid.grading: expected sinh or uniform, got `{other}`"))),
    };
    let boundary = match e.text("grid.boundary").expect("default") {
        "natural" => OuterBoundary::Natural,
        "asymptotic" => OuterBoundary::Asymptotic,
        other => {
            return Err(e.err("grid.boundary", format!("grid.boundary: expected natural or asymptotic, got `{other}`")))
        }
    };
    RadialGrid::new(r_max, cells, grading, d).map_err(|err| core_err(&e, "grid.N", err))?;

    let dt = e.positive("time.dt")?;
    let t_end = e.real("time.t_end")?.expect("default");
    if !(t_end >= 0.0) {
        return Err(e.err("time.t_end", "time.t_end must be nonnegative".into()));
    }
    let cadence: usize = e.parse("output.cadence", "a positive integer")?.expect("default");
    if cadence == 0 {
        return Err(e.err("output.cadence", "output.cadence must be at least 1".into()));
    }
    let output = match e.text("output.path").expect("default") {
        "-" => None,
        p => Some(PathBuf::from(p)),
    };

    let window = match (e.real("fit.window_start")?, e.real("fit.window_end")?) {
        (None, None) => None,
        (Some(a), Some(b)) => {
            if !(0.0 <= a && a < b && b <= t_end) {
                return Err(ConfigError::Invalid(format!(
                    "fit window must satisfy 0 <= start < end <= time.t_end = {t_end}, got [{a}, {b}]"
                )));
            }
            Some((a, b))
        }
        _ => return Err(ConfigError::Invalid("fit.window_start and fit.window_end must be set together".into())),
    };

    let echo = KEYS
        .iter()
        .filter_map(|k| e.text(k.name).map(|v| (k.name.to_owned(), v.to_owned())))
        .collect();

    Ok(RunConfig {
        exponents,
        d0,
        d1,
        kind,
        seed,
        epsilon,
        k,
        target,
        amplitude,
        bumps,
        l,
        r_max,
        cells,
        grading,
        boundary,
        dt,
        t_end,
        cadence,
        output,
        window,
        echo,
    })
}
