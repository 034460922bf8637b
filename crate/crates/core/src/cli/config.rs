//! Flat `key=value` run configuration.
//!
//! Keys carry a section prefix (`params.beta=2`). Blank lines and lines
//! starting with `#` are ignored. Every key has a default, and
//! [`RunConfig::to_text`] writes all of them in a fixed order so that the
//! emitted manifest parses back to the same configuration.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use sha2::{Digest, Sha256};

use crate::debye::UnitSystem;
use crate::decay::{KernelChannel, KernelWeight, Regime};
use crate::maxwell::{Mode, SourceFamily, SourceSpec};
use crate::polarization::Channel;
use crate::specfun::ThermalParams;

pub const PRECISION_RANGE: std::ops::RangeInclusive<usize> = 6..=17;

/// Configuration problem, reported with exit status 2.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub line: Option<usize>,
    pub field: String,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(line) => write!(f, "line {line}, field '{}': {}", self.field, self.message),
            None => write!(f, "field '{}': {}", self.field, self.message),
        }
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subcommand {
    Debye,
    Screening,
    Polarization,
    Decay,
    Limits,
}

impl Subcommand {
    pub fn name(self) -> &'static str {
        match self {
            Subcommand::Debye => "debye",
            Subcommand::Screening => "screening",
            Subcommand::Polarization => "polarization",
            Subcommand::Decay => "decay",
            Subcommand::Limits => "limits",
        }
    }
}

impl FromStr for Subcommand {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "debye" => Ok(Subcommand::Debye),
            "screening" => Ok(Subcommand::Screening),
            "polarization" => Ok(Subcommand::Polarization),
            "decay" => Ok(Subcommand::Decay),
            "limits" => Ok(Subcommand::Limits),
            other => Err(format!("unknown subcommand '{other}'")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Tolerances {
    /// Target accuracy of every quadrature.
    pub quadrature: f64,
    /// Truncation tolerance of the Bessel series.
    pub series: f64,
    /// Screening fit window, in screening lengths.
    pub fit_r_min: f64,
    pub fit_r_max: f64,
    /// Decay fit window, in units of `1/m`.
    pub decay_window_min: f64,
    pub decay_window_max: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Grids {
    pub p_min: f64,
    pub p_max: f64,
    pub p_points: usize,
    /// Radial grid in screening lengths, log spaced.
    pub r_min: f64,
    pub r_max: f64,
    pub r_per_decade: usize,
    /// Optional `(beta, m)` scan for the Debye table.
    pub betas: Vec<f64>,
    pub masses: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SourceConfig {
    pub family: String,
    /// `epsilon`, `sigma` or radius, depending on the family.
    pub width: f64,
    pub charge: f64,
    pub channel: Channel,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScreeningConfig {
    pub mode: Mode,
    pub delta_ladder: Vec<f64>,
    /// Probe radii of the ladder, in screening lengths.
    pub probes: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecayConfig {
    pub regime: Regime,
    pub channel: KernelChannel,
    pub weight: KernelWeight,
    pub u: f64,
    pub profile_width: f64,
    /// `None` means derived from the mass.
    pub z_min: Option<f64>,
    pub z_max: Option<f64>,
    pub z_points: usize,
    pub lemma2_small: usize,
    pub lemma2_large: usize,
    pub divergence_radii: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputConfig {
    pub csv_path: Option<String>,
    pub json_path: Option<String>,
    pub precision: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub subcommand: Subcommand,
    pub params: ThermalParams,
    pub units: UnitSystem,
    pub tol: Tolerances,
    pub grid: Grids,
    pub source: SourceConfig,
    pub screening: ScreeningConfig,
    pub polarization_channel: Channel,
    pub decay: DecayConfig,
    pub seed: u64,
    pub output: OutputConfig,
}

fn fmt_f64(v: f64) -> String {
    if v == f64::INFINITY {
        "inf".into()
    } else {
        format!("{v}")
    }
}

fn fmt_list(v: &[f64]) -> String {
    v.iter().map(|x| fmt_f64(*x)).collect::<Vec<_>>().join(",")
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt_f64).unwrap_or_else(|| "auto".into())
}

impl RunConfig {
    pub fn default_for(subcommand: Subcommand) -> Self {
        Self::parse_for(subcommand, "").expect("defaults are valid")
    }

    /// Parses `text`. A `subcommand` key, if present, must agree with
    /// `subcommand`.
    pub fn parse_for(subcommand: Subcommand, text: &str) -> Result<Self, ConfigError> {
        let mut raw = Raw::read(text)?;
        if let Some((line, v)) = raw.take("subcommand") {
            let parsed: Subcommand = v.parse().map_err(|m| err(Some(line), "subcommand", m))?;
            if parsed != subcommand {
                return Err(err(
                    Some(line),
                    "subcommand",
                    format!("config is for '{}' but '{}' was requested", parsed.name(), subcommand.name()),
                ));
            }
        }

        let beta = raw.f64_or("params.beta", 1.0)?;
        let mass = raw.f64_or("params.mass", 1.0)?;
        let charge_e = raw.f64_or("params.charge_e", 1.0)?;
        let lambda = raw.f64_or("params.lambda", 1.0)?;
        let a1 = raw.f64_or("params.a1", 0.0)?;
        let params = ThermalParams::new(beta, mass, charge_e, lambda, a1)
            .map_err(|e| err(raw.line_of("params.beta"), "params", e.to_string()))?;

        let hbar = raw.f64_or("units.hbar", 1.0)?;
        let c = raw.f64_or("units.c", 1.0)?;
        let epsilon0 = raw.f64_or("units.epsilon0", 1.0)?;
        let units = UnitSystem::new(hbar, c, epsilon0).map_err(|e| err(raw.line_of("units.hbar"), "units", e.to_string()))?;

        let tol = Tolerances {
            quadrature: raw.positive_or("tol.quadrature", 1e-10)?,
            series: raw.positive_or("tol.series", 1e-13)?,
            fit_r_min: raw.positive_or("tol.fit_r_min", 5.0)?,
            fit_r_max: raw.positive_or("tol.fit_r_max", 15.0)?,
            decay_window_min: raw.positive_or("tol.decay_window_min", 6.0)?,
            decay_window_max: raw.positive_or("tol.decay_window_max", 14.0)?,
        };
        raw.ordered("tol.fit_r_min", tol.fit_r_min, "tol.fit_r_max", tol.fit_r_max)?;
        raw.ordered("tol.decay_window_min", tol.decay_window_min, "tol.decay_window_max", tol.decay_window_max)?;

        let grid = Grids {
            p_min: raw.f64_or("grid.p_min", 0.0)?,
            p_max: raw.positive_or("grid.p_max", 2.0)?,
            p_points: raw.usize_or("grid.p_points", 21)?,
            r_min: raw.positive_or("grid.r_min", 0.1)?,
            r_max: raw.positive_or("grid.r_max", 15.0)?,
            r_per_decade: raw.usize_or("grid.r_per_decade", 32)?,
            betas: raw.list_or("grid.betas")?,
            masses: raw.list_or("grid.masses")?,
        };
        if !(grid.p_min >= 0.0) {
            return Err(err(raw.line_of("grid.p_min"), "grid.p_min", "must be >= 0".into()));
        }
        raw.ordered("grid.p_min", grid.p_min, "grid.p_max", grid.p_max)?;
        raw.ordered("grid.r_min", grid.r_min, "grid.r_max", grid.r_max)?;
        if grid.p_points < 2 {
            return Err(err(raw.line_of("grid.p_points"), "grid.p_points", "need at least 2 points".into()));
        }
        if grid.r_per_decade < 1 {
            return Err(err(raw.line_of("grid.r_per_decade"), "grid.r_per_decade", "must be >= 1".into()));
        }
        if grid.betas.is_empty() != grid.masses.is_empty() {
            return Err(err(
                raw.line_of("grid.betas").or(raw.line_of("grid.masses")),
                "grid.betas",
                "grid.betas and grid.masses must be given together".into(),
            ));
        }
        for (key, list) in [("grid.betas", &grid.betas), ("grid.masses", &grid.masses)] {
            if list.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
                return Err(err(raw.line_of(key), key, "scan values must be finite and > 0".into()));
            }
        }

        let source = SourceConfig {
            family: raw.string_or("source.family", "point"),
            width: raw.positive_or("source.width", 0.1)?,
            charge: raw.f64_or("source.charge", 1.0)?,
            channel: raw.parse_or("source.channel", Channel::Temporal)?,
        };
        let line = raw.line_of("source.family");
        source_spec(&source).map_err(|m| err(line, "source", m))?;

        let screening = ScreeningConfig {
            mode: raw.parse_or("screening.mode", Mode::ZerothOrder)?,
            delta_ladder: raw.list_or("screening.delta_ladder")?,
            probes: raw.list_or_default("screening.probes", vec![1.0])?,
        };
        if screening.delta_ladder.iter().any(|v| !(v.is_finite() && *v > 0.0))
            || screening.delta_ladder.windows(2).any(|w| !(w[1] < w[0]))
        {
            return Err(err(
                raw.line_of("screening.delta_ladder"),
                "screening.delta_ladder",
                "widths must be positive and strictly decreasing".into(),
            ));
        }
        if screening.probes.is_empty() || screening.probes.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
            return Err(err(raw.line_of("screening.probes"), "screening.probes", "need positive radii".into()));
        }
        if screening.mode == Mode::FullKernel && source.channel != Channel::Temporal {
            return Err(err(
                raw.line_of("screening.mode"),
                "screening.mode",
                "full_kernel supports the temporal channel only".into(),
            ));
        }

        let polarization_channel = raw.parse_or("polarization.channel", Channel::Temporal)?;

        let regime: Regime = raw.parse_or("decay.regime", Regime::ThermalSpatial)?;
        let decay = DecayConfig {
            regime,
            channel: raw.parse_or("decay.channel", KernelChannel::ScalarMass)?,
            weight: raw.parse_or("decay.weight", KernelWeight::Bare)?,
            u: raw.positive_or("decay.u", 0.5)?,
            profile_width: raw.positive_or("decay.profile_width", 0.5)?,
            z_min: raw.auto_or("decay.z_min")?,
            z_max: raw.auto_or("decay.z_max")?,
            z_points: raw.usize_or("decay.z_points", 17)?,
            lemma2_small: raw.usize_or("decay.lemma2_small", 0)?,
            lemma2_large: raw.usize_or("decay.lemma2_large", 0)?,
            divergence_radii: raw.list_or("decay.divergence_radii")?,
        };
        // Only the decay run evaluates at `decay.u`.
        if let (Subcommand::Decay, Some(b)) = (subcommand, params.beta().finite()) {
            if decay.u >= b {
                return Err(err(
                    raw.line_of("decay.u"),
                    "decay.u",
                    format!("imaginary time {} lies outside the strip (0, {b})", decay.u),
                ));
            }
        }
        if decay.z_points < 8 {
            return Err(err(raw.line_of("decay.z_points"), "decay.z_points", "need at least 8 points".into()));
        }
        for (key, v) in [("decay.z_min", decay.z_min), ("decay.z_max", decay.z_max)] {
            if let Some(v) = v {
                if !(v > 0.0 && v.is_finite()) {
                    return Err(err(raw.line_of(key), key, "must be > 0 or auto".into()));
                }
            }
        }
        if let (Some(a), Some(b)) = (decay.z_min, decay.z_max) {
            raw.ordered("decay.z_min", a, "decay.z_max", b)?;
        }
        if (decay.lemma2_small == 0) != (decay.lemma2_large == 0) || decay.lemma2_small > decay.lemma2_large {
            return Err(err(
                raw.line_of("decay.lemma2_small"),
                "decay.lemma2_small",
                "lemma2 sample sizes must both be 0 or satisfy small <= large".into(),
            ));
        }

        let seed = raw.u64_or("seed", 42)?;
        let output = OutputConfig {
            csv_path: raw.path("output.csv"),
            json_path: raw.path("output.json"),
            precision: raw.usize_or("output.precision", 10)?,
        };
        if !PRECISION_RANGE.contains(&output.precision) {
            return Err(err(raw.line_of("output.precision"), "output.precision", "must lie in 6..=17".into()));
        }
        raw.finish()?;
        Ok(Self {
            subcommand,
            params,
            units,
            tol,
            grid,
            source,
            screening,
            polarization_channel,
            decay,
            seed,
            output,
        })
    }

    /// All keys with their current values, in emission order.
    pub fn entries(&self) -> Vec<(&'static str, String)> {
        let p = &self.params;
        let o = |v: &Option<String>| v.clone().unwrap_or_default();
        vec![
            ("subcommand", self.subcommand.name().into()),
            ("params.beta", fmt_f64(p.beta().value())),
            ("params.mass", fmt_f64(p.mass())),
            ("params.charge_e", fmt_f64(p.charge_e())),
            ("params.lambda", fmt_f64(p.lambda())),
            ("params.a1", fmt_f64(p.a1())),
            ("units.hbar", fmt_f64(self.units.hbar())),
            ("units.c", fmt_f64(self.units.c())),
            ("units.epsilon0", fmt_f64(self.units.epsilon0())),
            ("tol.quadrature", fmt_f64(self.tol.quadrature)),
            ("tol.series", fmt_f64(self.tol.series)),
            ("tol.fit_r_min", fmt_f64(self.tol.fit_r_min)),
            ("tol.fit_r_max", fmt_f64(self.tol.fit_r_max)),
            ("tol.decay_window_min", fmt_f64(self.tol.decay_window_min)),
            ("tol.decay_window_max", fmt_f64(self.tol.decay_window_max)),
            ("grid.p_min", fmt_f64(self.grid.p_min)),
            ("grid.p_max", fmt_f64(self.grid.p_max)),
            ("grid.p_points", self.grid.p_points.to_string()),
            ("grid.r_min", fmt_f64(self.grid.r_min)),
            ("grid.r_max", fmt_f64(self.grid.r_max)),
            ("grid.r_per_decade", self.grid.r_per_decade.to_string()),
            ("grid.betas", fmt_list(&self.grid.betas)),
            ("grid.masses", fmt_list(&self.grid.masses)),
            ("source.family", self.source.family.clone()),
            ("source.width", fmt_f64(self.source.width)),
            ("source.charge", fmt_f64(self.source.charge)),
            ("source.channel", self.source.channel.name().into()),
            ("screening.mode", self.screening.mode.name().into()),
            ("screening.delta_ladder", fmt_list(&self.screening.delta_ladder)),
            ("screening.probes", fmt_list(&self.screening.probes)),
            ("polarization.channel", self.polarization_channel.name().into()),
            ("decay.regime", self.decay.regime.name().into()),
            ("decay.channel", self.decay.channel.name().into()),
            ("decay.weight", self.decay.weight.name().into()),
            ("decay.u", fmt_f64(self.decay.u)),
            ("decay.profile_width", fmt_f64(self.decay.profile_width)),
            ("decay.z_min", fmt_opt(self.decay.z_min)),
            ("decay.z_max", fmt_opt(self.decay.z_max)),
            ("decay.z_points", self.decay.z_points.to_string()),
            ("decay.lemma2_small", self.decay.lemma2_small.to_string()),
            ("decay.lemma2_large", self.decay.lemma2_large.to_string()),
            ("decay.divergence_radii", fmt_list(&self.decay.divergence_radii)),
            ("seed", self.seed.to_string()),
            ("output.csv", o(&self.output.csv_path)),
            ("output.json", o(&self.output.json_path)),
            ("output.precision", self.output.precision.to_string()),
        ]
    }

    /// Canonical text form; parses back to `self`.
    pub fn to_text(&self) -> String {
        self.entries().into_iter().map(|(k, v)| format!("{k}={v}\n")).collect()
    }

    /// SHA-256 of [`RunConfig::to_text`], hex encoded.
    pub fn hash(&self) -> String {
        let digest = Sha256::digest(self.to_text().as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn source_spec(&self) -> SourceSpec {
        source_spec(&self.source).expect("validated at parse time")
    }
}

fn source_spec(s: &SourceConfig) -> Result<SourceSpec, String> {
    let family = match s.family.as_str() {
        "point" => SourceFamily::Point,
        "smoothed_point" => SourceFamily::SmoothedPoint { epsilon: s.width },
        "gaussian" => SourceFamily::Gaussian { sigma: s.width },
        "uniform_ball" => SourceFamily::UniformBall { radius: s.width },
        other => {
            return Err(format!(
                "unknown family '{other}' (expected point, smoothed_point, gaussian or uniform_ball)"
            ))
        }
    };
    Ok(SourceSpec::new(family, s.charge).map_err(|e| e.to_string())?.with_channel(s.channel))
}

fn err(line: Option<usize>, field: &str, message: String) -> ConfigError {
    ConfigError {
        line,
        field: field.to_string(),
        message,
    }
}

/// Raw `key -> (line, value)` table, consumed key by key.
struct Raw {
    entries: BTreeMap<String, (usize, String)>,
    lines: BTreeMap<String, usize>,
}

impl Raw {
    fn read(text: &str) -> Result<Self, ConfigError> {
        let mut entries = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            let n = i + 1;
            let t = line.trim();
            if t.is_empty() || t.starts_with('#') {
                continue;
            }
            let Some((k, v)) = t.split_once('=') else {
                return Err(err(Some(n), t, "expected key=value".into()));
            };
            let k = k.trim().to_string();
            if k.is_empty() {
                return Err(err(Some(n), "", "empty key".into()));
            }
            if let Some((first, _)) = entries.get(&k) {
                return Err(err(Some(n), &k, format!("duplicate key (first set on line {first})")));
            }
            entries.insert(k, (n, v.trim().to_string()));
        }
        let lines = entries.iter().map(|(k, (n, _))| (k.clone(), *n)).collect();
        Ok(Self { entries, lines })
    }

    fn line_of(&self, key: &str) -> Option<usize> {
        self.lines.get(key).copied()
    }

    fn take(&mut self, key: &str) -> Option<(usize, String)> {
        self.entries.remove(key)
    }

    fn finish(self) -> Result<(), ConfigError> {
        match self.entries.into_iter().next() {
            Some((k, (n, _))) => Err(err(Some(n), &k, "unknown key".into())),
            None => Ok(()),
        }
    }

    fn f64_or(&mut self, key: &str, default: f64) -> Result<f64, ConfigError> {
        match self.take(key) {
            None => Ok(default),
            Some((n, v)) => parse_f64(&v).ok_or_else(|| err(Some(n), key, format!("not a number: '{v}'"))),
        }
    }

    fn positive_or(&mut self, key: &str, default: f64) -> Result<f64, ConfigError> {
        let line = self.line_of(key);
        let v = self.f64_or(key, default)?;
        if v > 0.0 && v.is_finite() {
            Ok(v)
        } else {
            Err(err(line, key, format!("must be finite and > 0, got {v}")))
        }
    }

    fn usize_or(&mut self, key: &str, default: usize) -> Result<usize, ConfigError> {
        match self.take(key) {
            None => Ok(default),
            Some((n, v)) => v
                .parse()
                .map_err(|_| err(Some(n), key, format!("not a non-negative integer: '{v}'"))),
        }
    }

    fn u64_or(&mut self, key: &str, default: u64) -> Result<u64, ConfigError> {
        match self.take(key) {
            None => Ok(default),
            Some((n, v)) => v
                .parse()
                .map_err(|_| err(Some(n), key, format!("not a non-negative integer: '{v}'"))),
        }
    }

    fn string_or(&mut self, key: &str, default: &str) -> String {
        self.take(key).map(|(_, v)| v).unwrap_or_else(|| default.to_string())
    }

    fn parse_or<T: FromStr<Err = String>>(&mut self, key: &str, default: T) -> Result<T, ConfigError> {
        match self.take(key) {
            None => Ok(default),
            Some((n, v)) => v.parse().map_err(|m| err(Some(n), key, m)),
        }
    }

    fn list_or(&mut self, key: &str) -> Result<Vec<f64>, ConfigError> {
        self.list_or_default(key, Vec::new())
    }

    fn list_or_default(&mut self, key: &str, default: Vec<f64>) -> Result<Vec<f64>, ConfigError> {
        match self.take(key) {
            None => Ok(default),
            Some((_, v)) if v.is_empty() => Ok(Vec::new()),
            Some((n, v)) => v
                .split(',')
                .map(|s| parse_f64(s.trim()).ok_or_else(|| err(Some(n), key, format!("not a number: '{}'", s.trim()))))
                .collect(),
        }
    }

    fn auto_or(&mut self, key: &str) -> Result<Option<f64>, ConfigError> {
        match self.take(key) {
            None => Ok(None),
            Some((_, v)) if v == "auto" => Ok(None),
            Some((n, v)) => parse_f64(&v)
                .map(Some)
                .ok_or_else(|| err(Some(n), key, format!("not a number or 'auto': '{v}'"))),
        }
    }

    fn path(&mut self, key: &str) -> Option<String> {
        self.take(key).map(|(_, v)| v).filter(|v| !v.is_empty())
    }

    fn ordered(&self, lo_key: &str, lo: f64, hi_key: &str, hi: f64) -> Result<(), ConfigError> {
        if lo < hi {
            Ok(())
        } else {
            Err(err(
                self.line_of(hi_key).or(self.line_of(lo_key)),
                hi_key,
                format!("{lo_key} ({lo}) must be below {hi_key} ({hi})"),
            ))
        }
    }
}

/// Float with the literal `inf` accepted.
fn parse_f64(s: &str) -> Option<f64> {
    match s {
        "inf" | "+inf" => Some(f64::INFINITY),
        "-inf" => Some(f64::NEG_INFINITY),
        _ => s.parse::<f64>().ok().filter(|v| v.is_finite()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_round_trip() {
        for sub in [
            Subcommand::Debye,
            Subcommand::Screening,
            Subcommand::Polarization,
            Subcommand::Decay,
            Subcommand::Limits,
        ] {
            let c = RunConfig::default_for(sub);
            let text = c.to_text();
            let back = RunConfig::parse_for(sub, &text).unwrap();
            assert_eq!(back, c);
            assert_eq!(back.to_text(), text);
        }
    }

    #[test]
    fn infinite_beta() {
        let c = RunConfig::parse_for(Subcommand::Debye, "params.beta=inf\n").unwrap();
        assert!(c.params.beta().is_ground());
        assert!(c.to_text().contains("params.beta=inf\n"));
    }

    #[test]
    fn errors_name_line_and_field() {
        let e = RunConfig::parse_for(Subcommand::Debye, "# comment\nparams.beta=abc\n").unwrap_err();
        assert_eq!(e.line, Some(2));
        assert_eq!(e.field, "params.beta");
        let e = RunConfig::parse_for(Subcommand::Debye, "params.mas=1\n").unwrap_err();
        assert_eq!(e.field, "params.mas");
        let e = RunConfig::parse_for(Subcommand::Debye, "output.precision=30").unwrap_err();
        assert_eq!(e.field, "output.precision");
        let e = RunConfig::parse_for(Subcommand::Debye, "subcommand=decay").unwrap_err();
        assert_eq!(e.field, "subcommand");
        assert!(RunConfig::parse_for(Subcommand::Debye, "seed=1\nseed=2").is_err());
        assert!(RunConfig::parse_for(Subcommand::Debye, "no equals sign").is_err());
        assert!(RunConfig::parse_for(Subcommand::Decay, "params.beta=0.4\ndecay.u=0.5").is_err());
    }

    #[test]
    fn hash_tracks_content() {
        let a = RunConfig::default_for(Subcommand::Debye);
        let mut b = a.clone();
        b.seed += 1;
        assert_eq!(a.hash().len(), 64);
        assert_ne!(a.hash(), b.hash());
    }
}
