//! Parameter sweeps over fixed and fading channels, and their CSV tables.
//!
//! A CSV file starts with `# key=value` metadata lines carrying the full
//! configuration, then a column header whose first column is `scheme`, then
//! one row per (scheme, grid value, axis value). Rows are grouped by scheme
//! and follow grid and axis order inside each group. Numbers are written
//! with 12 significant digits.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::channel::{average_key_rates, distance_to_transmissivity, FadingModel, QuadratureSpec};
use crate::error::{Error, Result};
use crate::exec::Executor;
use crate::fock::{Scheme, SchemeConfig};
use crate::keyrate::{key_rate, KeyRatePoint};

pub const VERSION: &str = concat!("psqkd ", env!("CARGO_PKG_VERSION"));

/// `x` with 12 significant digits in scientific notation.
pub fn format_number(x: f64) -> String {
    format!("{x:.11e}")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ExperimentKind {
    /// Key rate against a fixed transmissivity.
    TransmissivitySweep,
    /// Key rate against distance at a fixed attenuation per km.
    DistanceSweep,
    /// Distance sweep repeated for several channel-noise levels `β²`.
    NoiseGrid,
    /// Distance sweep repeated for several source photon numbers `α²`.
    PhotonGrid,
    /// Fading-averaged rate against beam-wander deviation.
    SatelliteSweep,
    /// Small-deviation close-up, repeated for several noise levels.
    SatelliteCloseup,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 6] = [
        ExperimentKind::TransmissivitySweep,
        ExperimentKind::DistanceSweep,
        ExperimentKind::NoiseGrid,
        ExperimentKind::PhotonGrid,
        ExperimentKind::SatelliteSweep,
        ExperimentKind::SatelliteCloseup,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ExperimentKind::TransmissivitySweep => "transmissivity-sweep",
            ExperimentKind::DistanceSweep => "distance-sweep",
            ExperimentKind::NoiseGrid => "noise-grid",
            ExperimentKind::PhotonGrid => "photon-grid",
            ExperimentKind::SatelliteSweep => "satellite-sweep",
            ExperimentKind::SatelliteCloseup => "satellite-closeup",
        }
    }

    pub fn axis_name(self) -> &'static str {
        match self {
            ExperimentKind::TransmissivitySweep => "t_e",
            ExperimentKind::DistanceSweep | ExperimentKind::NoiseGrid | ExperimentKind::PhotonGrid => "distance_km",
            ExperimentKind::SatelliteSweep | ExperimentKind::SatelliteCloseup => "sigma_b",
        }
    }

    /// Name of the second (list-valued) axis, if the experiment has one.
    pub fn grid_name(self) -> Option<&'static str> {
        match self {
            ExperimentKind::NoiseGrid | ExperimentKind::SatelliteCloseup => Some("beta_sq"),
            ExperimentKind::PhotonGrid => Some("alpha_sq"),
            _ => None,
        }
    }

    pub fn is_satellite(self) -> bool {
        matches!(self, ExperimentKind::SatelliteSweep | ExperimentKind::SatelliteCloseup)
    }

    /// Numeric columns, after the leading `scheme` column.
    pub fn columns(self) -> Vec<String> {
        let mut cols: Vec<String> = self.grid_name().into_iter().map(String::from).collect();
        if self.is_satellite() {
            cols.extend(
                [
                    "sigma_b",
                    "mean_transmissivity",
                    "mean_loss_db",
                    "k_avg",
                    "k_avg_normalized",
                ]
                .map(String::from),
            );
        } else {
            if self != ExperimentKind::TransmissivitySweep {
                cols.push("distance_km".into());
            }
            cols.extend(KeyRatePoint::CSV_HEADER.split(',').map(String::from));
        }
        cols
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ExperimentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm = s.trim().replace('_', "-");
        ExperimentKind::ALL
            .into_iter()
            .find(|k| k.as_str() == norm)
            .ok_or_else(|| Error::Config(format!("unknown experiment `{s}`")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Spacing {
    Linear,
    Log,
}

impl FromStr for Spacing {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "linear" | "lin" => Ok(Spacing::Linear),
            "log" => Ok(Spacing::Log),
            other => Err(Error::Config(format!("unknown spacing `{other}` (linear or log)"))),
        }
    }
}

impl fmt::Display for Spacing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Spacing::Linear => "linear",
            Spacing::Log => "log",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AxisSpec {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
    pub spacing: Spacing,
}

impl AxisSpec {
    pub fn linear(start: f64, stop: f64, points: usize) -> Self {
        AxisSpec {
            start,
            stop,
            points,
            spacing: Spacing::Linear,
        }
    }

    pub fn values(&self) -> Vec<f64> {
        if self.points == 1 {
            return vec![self.start];
        }
        let last = (self.points - 1) as f64;
        (0..self.points)
            .map(|i| {
                if i + 1 == self.points {
                    return self.stop;
                }
                let frac = i as f64 / last;
                match self.spacing {
                    Spacing::Linear => self.start + (self.stop - self.start) * frac,
                    Spacing::Log => (self.start.ln() + (self.stop.ln() - self.start.ln()) * frac).exp(),
                }
            })
            .collect()
    }
}

/// Complete description of one sweep.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub schemes: Vec<Scheme>,
    /// Physical parameters shared by all schemes; its `scheme` field is
    /// ignored.
    pub base: SchemeConfig,
    pub axis: AxisSpec,
    /// Values of the second axis (`β²` or `α²`), empty when unused.
    pub grid: Vec<f64>,
    pub atten_db_per_km: f64,
    pub beta_r: f64,
    pub w: f64,
    pub quad: QuadratureSpec,
    /// Worker count; does not affect the output.
    pub threads: Option<usize>,
    pub out: Option<PathBuf>,
}

impl ExperimentConfig {
    /// Defaults for `kind`: the reference parameter set, all three schemes,
    /// and axis ranges covering the region where the rates vanish.
    pub fn new(kind: ExperimentKind) -> Self {
        let (axis, grid) = match kind {
            ExperimentKind::TransmissivitySweep => (AxisSpec::linear(0.0, 1.0, 101), vec![]),
            ExperimentKind::DistanceSweep => (AxisSpec::linear(0.0, 120.0, 121), vec![]),
            ExperimentKind::NoiseGrid => (
                AxisSpec::linear(0.0, 120.0, 25),
                vec![0.0, 0.001, 0.005, 0.01, 0.02, 0.05],
            ),
            ExperimentKind::PhotonGrid => (
                AxisSpec::linear(0.0, 120.0, 25),
                vec![0.1, 0.3, 0.5, 0.8, 1.0, 1.3, 1.6, 2.0],
            ),
            ExperimentKind::SatelliteSweep => (AxisSpec::linear(0.1, 20.0, 21), vec![]),
            ExperimentKind::SatelliteCloseup => (AxisSpec::linear(0.05, 1.0, 20), vec![0.001, 0.01, 0.1]),
        };
        ExperimentConfig {
            kind,
            schemes: Scheme::ALL.to_vec(),
            base: SchemeConfig::default(),
            axis,
            grid,
            atten_db_per_km: 0.2,
            beta_r: 1.0,
            w: 1.0,
            quad: QuadratureSpec::default(),
            threads: None,
            out: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.schemes.is_empty() {
            return Err(Error::Config("no schemes selected".into()));
        }
        self.base.validate()?;
        self.quad.validate()?;
        let a = &self.axis;
        if a.points == 0 || (a.points == 1 && a.start != a.stop) {
            return Err(Error::Config(format!(
                "axis needs at least 2 points (or 1 with start = stop), got {}",
                a.points
            )));
        }
        if !(a.start.is_finite() && a.stop.is_finite()) {
            return Err(Error::Config("axis bounds must be finite".into()));
        }
        if a.spacing == Spacing::Log && !(a.start > 0.0 && a.stop > 0.0) {
            return Err(Error::Config("log spacing needs positive axis bounds".into()));
        }
        let (lo, hi) = (a.start.min(a.stop), a.start.max(a.stop));
        match self.kind.axis_name() {
            "t_e" if lo < 0.0 || hi > 1.0 => {
                return Err(Error::Config(format!("t_e axis [{lo}, {hi}] outside [0, 1]")));
            }
            "distance_km" if lo < 0.0 => {
                return Err(Error::Config("distance must be ≥ 0".into()));
            }
            "sigma_b" if lo <= 0.0 => {
                return Err(Error::Config("sigma_b must be > 0".into()));
            }
            _ => {}
        }
        if let Some(name) = self.kind.grid_name() {
            if self.grid.is_empty() {
                return Err(Error::Config(format!("{} needs at least one {name} value", self.kind)));
            }
            if self.grid.iter().any(|v| !(*v >= 0.0) || !v.is_finite()) {
                return Err(Error::Config(format!("{name} values must be finite and ≥ 0")));
            }
        }
        if self.kind.is_satellite() {
            FadingModel::new(1.0, self.beta_r, self.w)?;
        } else if !(self.atten_db_per_km >= 0.0) {
            return Err(Error::Config("attenuation must be ≥ 0".into()));
        }
        Ok(())
    }

    /// Applies one `key = value` setting. Keys accept `-` or `_`.
    pub fn apply_setting(&mut self, key: &str, value: &str) -> Result<()> {
        let key = key.trim().to_ascii_lowercase().replace('-', "_");
        let value = value.trim();
        let num = || -> Result<f64> {
            value
                .parse::<f64>()
                .map_err(|_| Error::Config(format!("`{key}` expects a number, got `{value}`")))
        };
        let count = || -> Result<usize> {
            value
                .parse::<usize>()
                .map_err(|_| Error::Config(format!("`{key}` expects a nonnegative integer, got `{value}`")))
        };
        match key.as_str() {
            "experiment" => {
                let kind: ExperimentKind = value.parse()?;
                if kind != self.kind {
                    return Err(Error::Config(format!(
                        "config file is for `{kind}`, running `{}`",
                        self.kind
                    )));
                }
            }
            "scheme" | "schemes" => {
                self.schemes = parse_list(value)?;
                self.schemes.dedup();
            }
            "alpha_sq" => self.base.alpha_sq = num()?,
            "beta_sq" => self.base.beta_sq = num()?,
            "t_s" => self.base.t_s = num()?,
            "recon_eff" => self.base.recon_eff = num()?,
            "trunc" | "trunc_n" => self.base.trunc_n = count()?,
            "nodes" => self.quad.node_count = count()?,
            "clamp_negative" => {
                self.quad.clamp_negative = parse_bool(value)
                    .ok_or_else(|| Error::Config(format!("`clamp_negative` expects true/false, got `{value}`")))?
            }
            "atten" | "atten_db_per_km" => self.atten_db_per_km = num()?,
            "beta_r" => self.beta_r = num()?,
            "w" | "beam_w" => self.w = num()?,
            "start" => self.axis.start = num()?,
            "stop" => self.axis.stop = num()?,
            "points" => self.axis.points = count()?,
            "spacing" => self.axis.spacing = value.parse()?,
            "grid" => self.grid = parse_list(value)?,
            "threads" => self.threads = Some(count()?).filter(|&n| n > 0),
            "out" => self.out = Some(PathBuf::from(value)),
            other => return Err(Error::Config(format!("unknown setting `{other}`"))),
        }
        Ok(())
    }

    /// The configuration as ordered `key=value` pairs, excluding execution
    /// knobs that cannot change the output.
    pub fn metadata(&self) -> Vec<(String, String)> {
        let b = &self.base;
        let schemes: Vec<&str> = self.schemes.iter().map(|s| s.as_str()).collect();
        let mut md = vec![
            ("experiment", self.kind.to_string()),
            ("version", VERSION.to_string()),
            ("schemes", schemes.join(",")),
            ("alpha_sq", b.alpha_sq.to_string()),
            ("beta_sq", b.beta_sq.to_string()),
            ("t_s", b.t_s.to_string()),
            ("recon_eff", b.recon_eff.to_string()),
            ("trunc_n", b.trunc_n.to_string()),
            ("axis", self.kind.axis_name().to_string()),
            ("start", self.axis.start.to_string()),
            ("stop", self.axis.stop.to_string()),
            ("points", self.axis.points.to_string()),
            ("spacing", self.axis.spacing.to_string()),
        ];
        if let Some(name) = self.kind.grid_name() {
            let vals: Vec<String> = self.grid.iter().map(|v| v.to_string()).collect();
            md.push(("grid", format!("{name}:{}", vals.join(","))));
        }
        if self.kind.is_satellite() {
            md.push(("beta_r", self.beta_r.to_string()));
            md.push(("w", self.w.to_string()));
            md.push(("nodes", self.quad.node_count.to_string()));
            md.push(("clamp_negative", self.quad.clamp_negative.to_string()));
        } else if self.kind != ExperimentKind::TransmissivitySweep {
            md.push(("atten_db_per_km", self.atten_db_per_km.to_string()));
        }
        md.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
    }
}

fn parse_list<T: FromStr>(value: &str) -> Result<Vec<T>>
where
    Error: From<T::Err>,
{
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<T>().map_err(Error::from))
        .collect()
}

impl From<std::num::ParseFloatError> for Error {
    fn from(e: std::num::ParseFloatError) -> Self {
        Error::Config(format!("bad number in list: {e}"))
    }
}

fn parse_bool(s: &str) -> Option<bool> {
    match s.to_ascii_lowercase().as_str() {
        "true" | "yes" | "1" | "on" => Some(true),
        "false" | "no" | "0" | "off" => Some(false),
        _ => None,
    }
}

/// Parses a plain-text config: one `key = value` per line, `#` comments.
pub fn parse_settings(text: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| Error::Parse {
            line: i + 1,
            msg: format!("expected `key = value`, got `{line}`"),
        })?;
        out.push((k.trim().to_string(), v.trim().to_string()));
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub scheme: Scheme,
    pub values: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepResult {
    pub kind: ExperimentKind,
    pub metadata: Vec<(String, String)>,
    /// Numeric column names, after `scheme`.
    pub columns: Vec<String>,
    pub rows: Vec<SweepRow>,
}

impl SweepResult {
    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Values of column `name` for `scheme`, in row order.
    pub fn series(&self, scheme: Scheme, name: &str) -> Option<Vec<f64>> {
        let idx = self.column(name)?;
        Some(
            self.rows
                .iter()
                .filter(|r| r.scheme == scheme)
                .map(|r| r.values[idx])
                .collect(),
        )
    }

    pub fn schemes(&self) -> Vec<Scheme> {
        let mut out: Vec<Scheme> = Vec::new();
        for r in &self.rows {
            if !out.contains(&r.scheme) {
                out.push(r.scheme);
            }
        }
        out
    }

    pub fn to_csv_string(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.metadata {
            out.push_str(&format!("# {k}={v}\n"));
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        let header = std::iter::once("scheme").chain(self.columns.iter().map(String::as_str));
        w.write_record(header).expect("in-memory write");
        for row in &self.rows {
            let fields =
                std::iter::once(row.scheme.as_str().to_string()).chain(row.values.iter().map(|v| format_number(*v)));
            w.write_record(fields).expect("in-memory write");
        }
        let body = w.into_inner().expect("in-memory flush");
        out.push_str(std::str::from_utf8(&body).expect("ascii fields"));
        out
    }

    pub fn parse_csv(text: &str) -> Result<Self> {
        let mut metadata = Vec::new();
        for (i, line) in text.lines().enumerate() {
            if let Some(md) = line.strip_prefix('#') {
                let (k, v) = md.trim().split_once('=').ok_or_else(|| Error::Parse {
                    line: i + 1,
                    msg: "metadata line without `=`".into(),
                })?;
                metadata.push((k.to_string(), v.to_string()));
            }
        }
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .comment(Some(b'#'))
            .from_reader(text.as_bytes());
        let mut columns: Option<Vec<String>> = None;
        let mut rows = Vec::new();
        for record in reader.records() {
            let record = record.map_err(|e| Error::Parse {
                line: e.position().map_or(0, |p| p.line() as usize),
                msg: e.to_string(),
            })?;
            let line = record.position().map_or(0, |p| p.line() as usize);
            let bad = |msg: String| Error::Parse { line, msg };
            let first = record.get(0).unwrap_or_default();
            match &columns {
                None => {
                    if first != "scheme" {
                        return Err(bad("header must start with `scheme`".into()));
                    }
                    columns = Some(record.iter().skip(1).map(String::from).collect());
                }
                Some(cols) => {
                    let scheme: Scheme = first.parse().map_err(|_| bad(format!("bad scheme `{first}`")))?;
                    let values = record
                        .iter()
                        .skip(1)
                        .map(|f| f.parse::<f64>().map_err(|_| bad(format!("bad number `{f}`"))))
                        .collect::<Result<Vec<f64>>>()?;
                    if values.len() != cols.len() {
                        return Err(bad(format!("expected {} values, got {}", cols.len(), values.len())));
                    }
                    rows.push(SweepRow { scheme, values });
                }
            }
        }
        let kind = metadata
            .iter()
            .find(|(k, _)| k == "experiment")
            .ok_or_else(|| Error::Parse {
                line: 1,
                msg: "missing `experiment` metadata".into(),
            })?
            .1
            .parse()?;
        Ok(SweepResult {
            kind,
            metadata,
            columns: columns.ok_or_else(|| Error::Parse {
                line: text.lines().count(),
                msg: "missing column header".into(),
            })?,
            rows,
        })
    }
}

/// Writes `result` as CSV. Refuses to create a file for a result without
/// any scheme.
pub fn emit_csv(result: &SweepResult, path: &Path) -> Result<()> {
    if result.rows.is_empty() || result.schemes().is_empty() {
        return Err(Error::Config("refusing to write a sweep with no schemes".into()));
    }
    fs::write(path, result.to_csv_string()).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

struct Task {
    scheme: Scheme,
    grid: Option<f64>,
    axis: f64,
}

impl Task {
    fn label(&self, kind: ExperimentKind) -> String {
        let mut s = format!("scheme={}", self.scheme);
        if let (Some(name), Some(g)) = (kind.grid_name(), self.grid) {
            s.push_str(&format!(" {name}={g}"));
        }
        s.push_str(&format!(" {}={}", kind.axis_name(), self.axis));
        s
    }
}

/// Runs the sweep with the worker count from `config.threads`.
pub fn run_experiment(config: &ExperimentConfig) -> Result<SweepResult> {
    let exec = Executor::with_threads(config.threads);
    exec.install(|| run_experiment_with(config, exec))?
}

/// Runs the sweep on `exec`, which is used both across grid points and
/// across quadrature nodes.
pub fn run_experiment_with(config: &ExperimentConfig, exec: Executor) -> Result<SweepResult> {
    config.validate()?;
    let kind = config.kind;
    let axis = config.axis.values();
    let grid: Vec<Option<f64>> = if kind.grid_name().is_some() {
        config.grid.iter().copied().map(Some).collect()
    } else {
        vec![None]
    };

    let mut tasks = Vec::with_capacity(config.schemes.len() * grid.len() * axis.len());
    for &scheme in &config.schemes {
        for &g in &grid {
            for &x in &axis {
                tasks.push(Task {
                    scheme,
                    grid: g,
                    axis: x,
                });
            }
        }
    }

    let rows = exec.try_map(&tasks, |index, task| {
        evaluate(config, task, exec).map_err(|e| Error::AtGridPoint {
            index,
            label: task.label(kind),
            source: Box::new(e),
        })
    })?;

    Ok(SweepResult {
        kind,
        metadata: config.metadata(),
        columns: kind.columns(),
        rows,
    })
}

fn evaluate(config: &ExperimentConfig, task: &Task, exec: Executor) -> Result<SweepRow> {
    let kind = config.kind;
    let mut cfg = config.base.with_scheme(task.scheme);
    match (kind.grid_name(), task.grid) {
        (Some("beta_sq"), Some(g)) => cfg.beta_sq = g,
        (Some("alpha_sq"), Some(g)) => cfg.alpha_sq = g,
        _ => {}
    }
    let mut values: Vec<f64> = task.grid.into_iter().collect();
    if kind.is_satellite() {
        let model = FadingModel::new(task.axis, config.beta_r, config.w)?;
        let avg = average_key_rates(&cfg, &model, &config.quad, exec)?;
        values.extend([
            task.axis,
            avg.mean_transmissivity,
            -10.0 * avg.mean_transmissivity.log10(),
            avg.k_avg,
            avg.k_avg_normalized,
        ]);
    } else {
        let t_e = if kind == ExperimentKind::TransmissivitySweep {
            task.axis
        } else {
            values.push(task.axis);
            distance_to_transmissivity(task.axis, config.atten_db_per_km)?
        };
        values.extend(key_rate(&cfg, t_e)?.values());
    }
    Ok(SweepRow {
        scheme: task.scheme,
        values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axis_values() {
        assert_eq!(AxisSpec::linear(0.0, 1.0, 3).values(), vec![0.0, 0.5, 1.0]);
        let log = AxisSpec {
            start: 1e-3,
            stop: 1.0,
            points: 4,
            spacing: Spacing::Log,
        };
        let v = log.values();
        assert!((v[1] - 1e-2).abs() < 1e-15 && v[3] == 1.0);
        assert_eq!(AxisSpec::linear(1.0, 1.0, 1).values(), vec![1.0]);
    }

    #[test]
    fn kind_names_round_trip() {
        for k in ExperimentKind::ALL {
            assert_eq!(k.as_str().parse::<ExperimentKind>().unwrap(), k);
        }
        assert_eq!(
            "noise_grid".parse::<ExperimentKind>().unwrap(),
            ExperimentKind::NoiseGrid
        );
        assert!("figure-9".parse::<ExperimentKind>().is_err());
    }

    #[test]
    fn settings_parse_and_apply() {
        let text = "# comment\nalpha_sq = 0.8\nscheme = nops, rps  # inline\nclamp-negative = false\nnodes=64\n\n";
        let mut cfg = ExperimentConfig::new(ExperimentKind::SatelliteSweep);
        for (k, v) in parse_settings(text).unwrap() {
            cfg.apply_setting(&k, &v).unwrap();
        }
        assert_eq!(cfg.base.alpha_sq, 0.8);
        assert_eq!(cfg.schemes, vec![Scheme::NoPs, Scheme::Rps]);
        assert!(!cfg.quad.clamp_negative);
        assert_eq!(cfg.quad.node_count, 64);
        assert!(parse_settings("novalue\n").is_err());
        assert!(cfg.apply_setting("bogus", "1").is_err());
        assert!(cfg.apply_setting("alpha_sq", "abc").is_err());
        assert!(cfg.apply_setting("experiment", "distance-sweep").is_err());
    }

    #[test]
    fn validation() {
        let mut cfg = ExperimentConfig::new(ExperimentKind::TransmissivitySweep);
        assert!(cfg.validate().is_ok());
        cfg.axis.stop = 1.5;
        assert!(cfg.validate().is_err());
        let mut cfg = ExperimentConfig::new(ExperimentKind::SatelliteSweep);
        cfg.axis.start = 0.0;
        assert!(cfg.validate().is_err());
        let mut cfg = ExperimentConfig::new(ExperimentKind::NoiseGrid);
        cfg.grid.clear();
        assert!(cfg.validate().is_err());
        let mut cfg = ExperimentConfig::new(ExperimentKind::DistanceSweep);
        cfg.schemes.clear();
        assert!(matches!(cfg.validate(), Err(Error::Config(_))));
        cfg.schemes.push(Scheme::Tps);
        cfg.axis.points = 1;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn columns_per_kind() {
        assert_eq!(ExperimentKind::TransmissivitySweep.columns().len(), 7);
        assert_eq!(ExperimentKind::DistanceSweep.columns()[0], "distance_km");
        assert_eq!(ExperimentKind::NoiseGrid.columns()[..2], ["beta_sq", "distance_km"]);
        assert_eq!(ExperimentKind::SatelliteCloseup.columns()[..2], ["beta_sq", "sigma_b"]);
    }

    #[test]
    fn number_format() {
        assert_eq!(format_number(1.755597061227), "1.75559706123e0");
        assert_eq!(format_number(-2.5e-7), "-2.50000000000e-7");
        assert_eq!("1.75559706123e0".parse::<f64>().unwrap(), 1.75559706123);
    }
}
