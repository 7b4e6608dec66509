//! Flags, the flat `key = value` config file, and the resolved run settings.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use bathflow_core::lindblad::{Variant, DEFAULT_BOSON_N_MAX};
use bathflow_core::reservoirs::Statistics;
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "bathflow",
    version,
    about = "Two-bath oscillator: traces, transport factors, spectra and Grassmann checks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Trace,
    Transport,
    Spectrum,
    GrassmannVerify,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Occupation and current against time (CSV).
    Trace(Flags),
    /// Transport factors over a collector-temperature sweep (CSV).
    Transport(Flags),
    /// Continuous current spectrum for one or more collector temperatures (CSV).
    Spectrum(Flags),
    /// Coherent-state identities and the P-distribution derivation (text).
    GrassmannVerify(Flags),
}

impl Command {
    pub fn split(self) -> (CommandKind, Flags) {
        match self {
            Command::Trace(f) => (CommandKind::Trace, f),
            Command::Transport(f) => (CommandKind::Transport, f),
            Command::Spectrum(f) => (CommandKind::Spectrum, f),
            Command::GrassmannVerify(f) => (CommandKind::GrassmannVerify, f),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    Reference,
    PaperLiteral,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StatsArg {
    Fermi,
    Bose,
}

#[derive(Debug, Default, Args)]
pub struct Flags {
    /// System frequency ω_s, rad/s.
    #[arg(long)]
    pub omega: Option<f64>,
    /// Shifted frequency ω for the unitary term, rad/s (defaults to ω_s).
    #[arg(long)]
    pub omega_shifted: Option<f64>,
    /// Use the shifted ω in the fermionic transport prefactor.
    #[arg(long)]
    pub use_shifted_omega: bool,
    /// Emitter coupling γ_e, s⁻¹.
    #[arg(long)]
    pub gamma_e: Option<f64>,
    /// Collector coupling γ_c, s⁻¹.
    #[arg(long)]
    pub gamma_c: Option<f64>,
    /// Emitter temperature, K.
    #[arg(long)]
    pub temp_e: Option<f64>,
    /// Collector temperature(s), K; comma-separated for spectra.
    #[arg(long, value_delimiter = ',')]
    pub temp_c: Vec<f64>,
    /// Initial occupation.
    #[arg(long)]
    pub n0: Option<f64>,
    #[arg(long, value_enum)]
    pub variant: Option<VariantArg>,
    #[arg(long, value_enum)]
    pub stats: Option<StatsArg>,
    /// Highest Fock level kept for bosons.
    #[arg(long)]
    pub n_max: Option<usize>,
    /// Final time, s (default 5/(γ_e+γ_c)).
    #[arg(long)]
    pub t_max: Option<f64>,
    /// RK4 step, s (default 10⁻³/(γ_e+γ_c), lowered to the stable step for large n_max).
    #[arg(long)]
    pub dt: Option<f64>,
    /// T_e/T_c for the transport sweep.
    #[arg(long)]
    pub ratio: Option<f64>,
    /// Number of output rows per curve.
    #[arg(long)]
    pub points: Option<usize>,
    /// Add E_s, Q and matching-rate columns to the transport sweep.
    #[arg(long)]
    pub diagnostics: bool,
    /// Output file (stdout when absent).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write an SVG line plot next to --out.
    #[arg(long)]
    pub svg: bool,
    /// Worker threads for sweeps.
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Flat `key = value` file; flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

type Res<T> = std::result::Result<T, ConfigError>;

const KEYS: &[&str] = &[
    "omega",
    "omega-shifted",
    "use-shifted-omega",
    "gamma-e",
    "gamma-c",
    "temp-e",
    "temp-c",
    "n0",
    "variant",
    "stats",
    "n-max",
    "t-max",
    "dt",
    "ratio",
    "points",
    "diagnostics",
    "out",
    "svg",
    "jobs",
];

/// Reads `key = value` lines; `#` starts a comment, `_` and `-` are interchangeable in keys.
pub fn parse_config(text: &str) -> Res<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| ConfigError(format!("config line {}: expected key = value", i + 1)))?;
        let key = k.trim().replace('_', "-");
        if !KEYS.contains(&key.as_str()) {
            return Err(ConfigError(format!(
                "config line {}: unknown key `{}`",
                i + 1,
                k.trim()
            )));
        }
        map.insert(key, v.trim().to_string());
    }
    Ok(map)
}

fn read_config(path: &Path) -> Res<BTreeMap<String, String>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ConfigError(format!("cannot read config {}: {e}", path.display())))?;
    parse_config(&text)
}

fn parse_value<T: std::str::FromStr>(key: &str, v: &str) -> Res<T> {
    v.parse()
        .map_err(|_| ConfigError(format!("invalid value `{v}` for `{key}`")))
}

fn parse_bool(key: &str, v: &str) -> Res<bool> {
    match v {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        _ => Err(ConfigError(format!("invalid boolean `{v}` for `{key}`"))),
    }
}

/// Fully resolved settings; every field validated.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: CommandKind,
    pub omega_s: f64,
    pub omega_shifted: Option<f64>,
    pub use_shifted_omega: bool,
    pub gamma_e: f64,
    pub gamma_c: f64,
    pub temp_e: f64,
    pub temp_c: Vec<f64>,
    pub n0: f64,
    pub variant: Variant,
    pub statistics: Statistics,
    pub n_max: usize,
    pub t_max: Option<f64>,
    pub dt: Option<f64>,
    pub ratio: f64,
    pub points: usize,
    pub diagnostics: bool,
    pub out: Option<PathBuf>,
    pub svg: bool,
    pub jobs: usize,
}

/// Collector temperatures plotted by default for spectra, K.
pub const DEFAULT_SPECTRUM_TEMPS: [f64; 4] = [100.0, 150.0, 200.0, 250.0];

impl RunConfig {
    pub fn resolve(command: CommandKind, flags: Flags) -> Res<Self> {
        let file = match &flags.config {
            Some(p) => read_config(p)?,
            None => BTreeMap::new(),
        };
        let num = |key: &str, flag: Option<f64>, default: f64| -> Res<f64> {
            match (flag, file.get(key)) {
                (Some(v), _) => Ok(v),
                (None, Some(s)) => parse_value(key, s),
                (None, None) => Ok(default),
            }
        };
        let opt = |key: &str, flag: Option<f64>| -> Res<Option<f64>> {
            match (flag, file.get(key)) {
                (Some(v), _) => Ok(Some(v)),
                (None, Some(s)) => parse_value(key, s).map(Some),
                (None, None) => Ok(None),
            }
        };
        let count = |key: &str, flag: Option<usize>, default: usize| -> Res<usize> {
            match (flag, file.get(key)) {
                (Some(v), _) => Ok(v),
                (None, Some(s)) => parse_value(key, s),
                (None, None) => Ok(default),
            }
        };
        let switch = |key: &str, flag: bool| -> Res<bool> {
            if flag {
                return Ok(true);
            }
            file.get(key).map_or(Ok(false), |s| parse_bool(key, s))
        };

        let variant = match (flags.variant, file.get("variant")) {
            (Some(v), _) => v,
            (None, Some(s)) => VariantArg::from_str(s, true)
                .map_err(|_| ConfigError(format!("invalid variant `{s}`")))?,
            (None, None) => VariantArg::Reference,
        };
        let stats = match (flags.stats, file.get("stats")) {
            (Some(v), _) => v,
            (None, Some(s)) => StatsArg::from_str(s, true)
                .map_err(|_| ConfigError(format!("invalid stats `{s}`")))?,
            (None, None) => StatsArg::Fermi,
        };
        let temp_c = if !flags.temp_c.is_empty() {
            flags.temp_c.clone()
        } else if let Some(s) = file.get("temp-c") {
            s.split(',')
                .map(|t| parse_value("temp-c", t.trim()))
                .collect::<Res<Vec<f64>>>()?
        } else if command == CommandKind::Spectrum {
            DEFAULT_SPECTRUM_TEMPS.to_vec()
        } else {
            vec![150.0]
        };
        let default_points = match command {
            CommandKind::Trace => 201,
            CommandKind::Transport => 90,
            CommandKind::Spectrum => 513,
            CommandKind::GrassmannVerify => 0,
        };
        let out = flags
            .out
            .clone()
            .or_else(|| file.get("out").map(PathBuf::from));

        let cfg = Self {
            command,
            omega_s: num("omega", flags.omega, 1e12)?,
            omega_shifted: opt("omega-shifted", flags.omega_shifted)?,
            use_shifted_omega: switch("use-shifted-omega", flags.use_shifted_omega)?,
            gamma_e: num("gamma-e", flags.gamma_e, 1e9)?,
            gamma_c: num("gamma-c", flags.gamma_c, 1e9)?,
            temp_e: num("temp-e", flags.temp_e, 300.0)?,
            temp_c,
            n0: num("n0", flags.n0, 1.0)?,
            variant: match variant {
                VariantArg::Reference => Variant::ReferenceThermal,
                VariantArg::PaperLiteral => Variant::PaperLiteral,
            },
            statistics: match stats {
                StatsArg::Fermi => Statistics::Fermionic,
                StatsArg::Bose => Statistics::Bosonic,
            },
            n_max: count("n-max", flags.n_max, DEFAULT_BOSON_N_MAX)?,
            t_max: opt("t-max", flags.t_max)?,
            dt: opt("dt", flags.dt)?,
            ratio: num("ratio", flags.ratio, 2.0)?,
            points: count("points", flags.points, default_points)?,
            diagnostics: switch("diagnostics", flags.diagnostics)?,
            out,
            svg: switch("svg", flags.svg)?,
            jobs: count("jobs", flags.jobs, 1)?,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Res<()> {
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(ConfigError(format!(
                    "{name} must be positive and finite, got {v}"
                )))
            }
        };
        positive("omega", self.omega_s)?;
        if let Some(w) = self.omega_shifted {
            positive("omega-shifted", w)?;
        }
        if self.use_shifted_omega && self.omega_shifted.is_none() {
            return Err(ConfigError(
                "--use-shifted-omega needs --omega-shifted".into(),
            ));
        }
        for (name, g) in [("gamma-e", self.gamma_e), ("gamma-c", self.gamma_c)] {
            if !(g >= 0.0 && g.is_finite()) {
                return Err(ConfigError(format!("{name} must be non-negative, got {g}")));
            }
        }
        positive("gamma-e + gamma-c", self.gamma_e + self.gamma_c)?;
        positive("temp-e", self.temp_e)?;
        if self.temp_c.is_empty() {
            return Err(ConfigError(
                "need at least one collector temperature".into(),
            ));
        }
        for &t in &self.temp_c {
            positive("temp-c", t)?;
        }
        if let Some(t) = self.t_max {
            positive("t-max", t)?;
        }
        if let Some(dt) = self.dt {
            positive("dt", dt)?;
        }
        if !(self.ratio > 1.0 && self.ratio.is_finite()) {
            return Err(ConfigError(format!(
                "ratio must exceed 1, got {}",
                self.ratio
            )));
        }
        if self.command != CommandKind::GrassmannVerify && self.points < 2 {
            return Err(ConfigError(format!(
                "need at least 2 points, got {}",
                self.points
            )));
        }
        if self.jobs == 0 {
            return Err(ConfigError("jobs must be at least 1".into()));
        }
        match self.statistics {
            Statistics::Fermionic if !(0.0..=1.0).contains(&self.n0) => {
                return Err(ConfigError(format!(
                    "fermionic n0 must lie in [0, 1], got {}",
                    self.n0
                )));
            }
            Statistics::Bosonic if self.n0 < 0.0 || self.n0.fract() != 0.0 => {
                return Err(ConfigError(format!(
                    "bosonic n0 must be a non-negative integer (number state), got {}",
                    self.n0
                )));
            }
            Statistics::Bosonic if self.n0 as usize >= self.n_max => {
                return Err(ConfigError(format!(
                    "n0 = {} does not fit below n-max = {}",
                    self.n0, self.n_max
                )));
            }
            _ => {}
        }
        if self.svg && self.out.is_none() {
            return Err(ConfigError(
                "--svg writes next to --out; give an output path".into(),
            ));
        }
        Ok(())
    }

    /// `ω` for the unitary term.
    pub fn omega_unitary(&self) -> f64 {
        self.omega_shifted.unwrap_or(self.omega_s)
    }

    pub fn total_rate(&self) -> f64 {
        self.gamma_e + self.gamma_c
    }
}
