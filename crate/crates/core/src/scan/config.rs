use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{DifferentiationPlan, FdScheme};
use crate::zoo::{ModelSpec, ParameterizedModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Quantity {
    FsQgt,
    BerryCurvature,
    BerryPhase,
    HsMetric,
    BuresMetric,
    UhlmannMetric,
    UhlmannForm,
    BuresDistance,
    SjoqvistDistance,
    Holonomy,
    PythagoreanPure,
    PythagoreanMixed,
    TSweep,
}

impl Quantity {
    pub const ALL: [Quantity; 13] = [
        Quantity::FsQgt,
        Quantity::BerryCurvature,
        Quantity::BerryPhase,
        Quantity::HsMetric,
        Quantity::BuresMetric,
        Quantity::UhlmannMetric,
        Quantity::UhlmannForm,
        Quantity::BuresDistance,
        Quantity::SjoqvistDistance,
        Quantity::Holonomy,
        Quantity::PythagoreanPure,
        Quantity::PythagoreanMixed,
        Quantity::TSweep,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Quantity::FsQgt => "fs-qgt",
            Quantity::BerryCurvature => "berry-curvature",
            Quantity::BerryPhase => "berry-phase",
            Quantity::HsMetric => "hs-metric",
            Quantity::BuresMetric => "bures-metric",
            Quantity::UhlmannMetric => "uhlmann-metric",
            Quantity::UhlmannForm => "uhlmann-form",
            Quantity::BuresDistance => "bures-distance",
            Quantity::SjoqvistDistance => "sjoqvist-distance",
            Quantity::Holonomy => "holonomy",
            Quantity::PythagoreanPure => "pythagorean-pure",
            Quantity::PythagoreanMixed => "pythagorean-mixed",
            Quantity::TSweep => "t-sweep",
        }
    }

    /// Whether the quantity needs a temperature (mixed-state geometry).
    pub fn is_thermal(self) -> bool {
        matches!(
            self,
            Quantity::HsMetric
                | Quantity::BuresMetric
                | Quantity::UhlmannMetric
                | Quantity::UhlmannForm
                | Quantity::BuresDistance
                | Quantity::SjoqvistDistance
                | Quantity::Holonomy
                | Quantity::PythagoreanMixed
        )
    }

    pub fn needs_loop(self) -> bool {
        matches!(self, Quantity::BerryPhase | Quantity::Holonomy)
    }

    pub fn needs_pair(self) -> bool {
        matches!(self, Quantity::BuresDistance | Quantity::SjoqvistDistance)
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Quantity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Quantity::ALL.into_iter().find(|q| q.name() == s).ok_or_else(|| {
            let names: Vec<&str> = Quantity::ALL.iter().map(|q| q.name()).collect();
            Error::config("quantity", format!("unknown quantity `{s}` (expected one of {})", names.join(", ")))
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(Error::config("output.format", format!("unknown format `{other}` (expected csv or json)"))),
        }
    }
}

/// One scanned coordinate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Axis {
    /// Parameter name as reported by the model (e.g. `theta`, `kx`).
    pub param: String,
    pub min: f64,
    pub max: f64,
    pub count: usize,
    /// Include `max` as the last sample. Periodic Brillouin-zone grids use
    /// `false`.
    #[serde(default = "yes")]
    pub endpoint: bool,
}

impl Axis {
    pub fn values(&self) -> Vec<f64> {
        linear_values(self.min, self.max, self.count, self.endpoint)
    }
}

fn yes() -> bool {
    true
}

fn linear_values(min: f64, max: f64, count: usize, endpoint: bool) -> Vec<f64> {
    let denom = if endpoint { count.saturating_sub(1).max(1) } else { count } as f64;
    (0..count)
        .map(|i| {
            if endpoint && i + 1 == count {
                max
            } else {
                min + (max - min) * i as f64 / denom
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    #[default]
    Linear,
    Log,
}

/// Temperature (or, for `t-sweep`, inverse temperature) samples: either
/// explicit `values` or `min`/`max`/`count`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TemperatureGrid {
    pub values: Option<Vec<f64>>,
    pub min: Option<f64>,
    pub max: Option<f64>,
    pub count: Option<usize>,
    #[serde(default)]
    pub spacing: Spacing,
    /// Interpret the samples as inverse temperatures.
    #[serde(default)]
    pub beta: bool,
}

impl TemperatureGrid {
    fn samples(&self, field: &str) -> Result<Vec<f64>> {
        let vals = if let Some(v) = &self.values {
            if v.is_empty() {
                return Err(Error::config(format!("{field}.values"), "must not be empty"));
            }
            v.clone()
        } else {
            let (min, max, count) = match (self.min, self.max, self.count) {
                (Some(a), Some(b), Some(n)) => (a, b, n),
                _ => {
                    return Err(Error::config(
                        field,
                        "give either `values` or all of `min`, `max`, `count`",
                    ))
                }
            };
            if count < 2 {
                return Err(Error::config(format!("{field}.count"), format!("must be at least 2, got {count}")));
            }
            match self.spacing {
                Spacing::Linear => linear_values(min, max, count, true),
                Spacing::Log => {
                    if !(min > 0.0 && max > 0.0) {
                        return Err(Error::config(field, "log spacing needs positive bounds"));
                    }
                    let mut v: Vec<f64> = linear_values(min.ln(), max.ln(), count, true).into_iter().map(f64::exp).collect();
                    v[0] = min;
                    v[count - 1] = max;
                    v
                }
            }
        };
        if let Some(x) = vals.iter().find(|x| !(x.is_finite() && **x > 0.0)) {
            return Err(Error::config(field, format!("samples must be positive and finite, got {x}")));
        }
        Ok(vals)
    }

    /// Temperatures in ascending sample order (converted from `beta` if set).
    pub fn temperatures(&self, field: &str) -> Result<Vec<f64>> {
        let s = self.samples(field)?;
        Ok(if self.beta { s.into_iter().map(|b| 1.0 / b).collect() } else { s })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FdConfig {
    #[serde(default = "default_step")]
    pub step: f64,
    #[serde(default = "default_scheme")]
    pub scheme: String,
}

fn default_step() -> f64 {
    1e-5
}

fn default_scheme() -> String {
    "central-2".into()
}

impl Default for FdConfig {
    fn default() -> Self {
        FdConfig {
            step: default_step(),
            scheme: default_scheme(),
        }
    }
}

impl FdConfig {
    pub fn plan(&self) -> Result<DifferentiationPlan> {
        let scheme = FdScheme::parse(&self.scheme).ok_or_else(|| {
            Error::config("fd.scheme", format!("unknown scheme `{}` (expected central-2 or central-4)", self.scheme))
        })?;
        DifferentiationPlan::new(self.step, scheme).map_err(|e| Error::config("fd.step", e.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub path: Option<String>,
    #[serde(default = "csv")]
    pub format: OutputFormat,
}

fn csv() -> OutputFormat {
    OutputFormat::Csv
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig {
            path: None,
            format: OutputFormat::Csv,
        }
    }
}

/// Loop around each scan point: either a circle in one coordinate
/// (`param` from its row value to row value + 2 pi) or explicit closed points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LoopSpec {
    pub param: Option<String>,
    #[serde(default = "default_loop_count")]
    pub count: usize,
    pub points: Option<Vec<Vec<f64>>>,
}

fn default_loop_count() -> usize {
    256
}

/// Second state of a distance: the Gibbs state at a fixed `reference` point,
/// or at the row point displaced by `offset`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairSpec {
    pub reference: Option<Vec<f64>>,
    pub offset: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanConfig {
    pub quantity: Quantity,
    pub model: ModelSpec,
    #[serde(default)]
    pub seed: u64,
    /// Scanned coordinates; rows run over their Cartesian product with the
    /// first axis varying slowest.
    #[serde(default, rename = "axis")]
    pub axes: Vec<Axis>,
    /// Values of every model parameter; scanned ones are overwritten per row.
    pub point: Option<Vec<f64>>,
    pub temperature: Option<TemperatureGrid>,
    #[serde(default)]
    pub fd: FdConfig,
    #[serde(default)]
    pub output: OutputConfig,
    #[serde(rename = "loop")]
    pub loop_spec: Option<LoopSpec>,
    pub pair: Option<PairSpec>,
    /// Worker threads; 0 lets the pool decide.
    #[serde(default)]
    pub threads: usize,
    /// Fixed timestamp written into the metadata instead of the clock.
    pub timestamp: Option<String>,
}

/// A validated configuration with its resolved model, plan and samples.
#[derive(Debug, Clone)]
pub struct ResolvedScan {
    pub config: ScanConfig,
    pub model: ParameterizedModel,
    pub plan: DifferentiationPlan,
    /// Index into the model parameters for each axis.
    pub axis_params: Vec<usize>,
    pub base_point: Vec<f64>,
    /// Temperature samples (empty when the quantity is purely ground-state).
    pub temperatures: Vec<f64>,
}

impl ScanConfig {
    pub fn from_toml_str(s: &str) -> Result<Self> {
        toml::from_str(s).map_err(|e| {
            let msg = e.message().to_string();
            let field = e
                .span()
                .map(|sp| {
                    let line = s[..sp.start].lines().count().max(1);
                    format!("line {line}")
                })
                .unwrap_or_else(|| "config".into());
            Error::config(field, msg)
        })
    }

    pub fn from_path(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        Self::from_toml_str(&text)
    }

    /// A configuration with the given quantity and model and defaults
    /// elsewhere.
    pub fn new(quantity: Quantity, model: ModelSpec) -> Self {
        ScanConfig {
            quantity,
            model,
            seed: 0,
            axes: Vec::new(),
            point: None,
            temperature: None,
            fd: FdConfig::default(),
            output: OutputConfig::default(),
            loop_spec: None,
            pair: None,
            threads: 0,
            timestamp: None,
        }
    }

    pub fn validate(&self) -> Result<ResolvedScan> {
        let model = self.model.build()?;
        let k = model.k();
        let plan = self.fd.plan()?;
        plan.validate_for_extents(&model.extents())
            .map_err(|e| Error::config("fd.step", e.to_string()))?;

        let mut axis_params = Vec::with_capacity(self.axes.len());
        for (i, ax) in self.axes.iter().enumerate() {
            let idx = model.param_names.iter().position(|n| *n == ax.param).ok_or_else(|| {
                Error::config(
                    format!("axis[{i}].param"),
                    format!("model `{}` has no parameter `{}` (parameters: {})", model.name, ax.param, model.param_names.join(", ")),
                )
            })?;
            if axis_params.contains(&idx) {
                return Err(Error::config(format!("axis[{i}].param"), format!("`{}` is scanned twice", ax.param)));
            }
            if ax.count < 2 {
                return Err(Error::config(format!("axis[{i}].count"), format!("must be at least 2, got {}", ax.count)));
            }
            if !(ax.min.is_finite() && ax.max.is_finite() && ax.min < ax.max) {
                return Err(Error::config(format!("axis[{i}]"), "needs finite min < max"));
            }
            axis_params.push(idx);
        }
        let base_point = match &self.point {
            Some(p) if p.len() != k => {
                return Err(Error::config("point", format!("expected {k} coordinates, got {}", p.len())))
            }
            Some(p) => p.clone(),
            None => {
                if axis_params.len() != k && self.quantity != Quantity::TSweep {
                    let missing: Vec<&str> = (0..k)
                        .filter(|i| !axis_params.contains(i))
                        .map(|i| model.param_names[i].as_str())
                        .collect();
                    return Err(Error::config(
                        "point",
                        format!("required to fix the unscanned parameters {}", missing.join(", ")),
                    ));
                }
                if axis_params.len() != k {
                    return Err(Error::config("point", "t-sweep needs a point"));
                }
                vec![0.0; k]
            }
        };
        if let Some(x) = base_point.iter().find(|x| !x.is_finite()) {
            return Err(Error::config("point", format!("non-finite coordinate {x}")));
        }

        let temperatures = if self.quantity == Quantity::TSweep {
            let grid = self
                .temperature
                .as_ref()
                .ok_or_else(|| Error::config("temperature", "t-sweep needs a temperature or beta grid"))?;
            grid.temperatures("temperature")?
        } else if self.quantity.is_thermal() {
            match (&self.temperature, self.model.temperature) {
                (Some(grid), _) => grid.temperatures("temperature")?,
                (None, Some(t)) => vec![t],
                (None, None) => {
                    return Err(Error::config(
                        "temperature",
                        format!("quantity `{}` needs model.temperature or a [temperature] grid", self.quantity),
                    ))
                }
            }
        } else {
            Vec::new()
        };

        if self.quantity.needs_loop() {
            let spec = self
                .loop_spec
                .as_ref()
                .ok_or_else(|| Error::config("loop", format!("quantity `{}` needs a [loop] section", self.quantity)))?;
            match (&spec.param, &spec.points) {
                (Some(p), None) => {
                    if !model.param_names.contains(p) {
                        return Err(Error::config("loop.param", format!("unknown parameter `{p}`")));
                    }
                    if spec.count < 3 {
                        return Err(Error::config("loop.count", format!("must be at least 3, got {}", spec.count)));
                    }
                }
                (None, Some(points)) => {
                    if let Some(bad) = points.iter().find(|p| p.len() != k) {
                        return Err(Error::config("loop.points", format!("each point needs {k} coordinates, got {}", bad.len())));
                    }
                }
                _ => return Err(Error::config("loop", "give exactly one of `param` or `points`")),
            }
        }
        if self.quantity.needs_pair() {
            let spec = self
                .pair
                .as_ref()
                .ok_or_else(|| Error::config("pair", format!("quantity `{}` needs a [pair] section", self.quantity)))?;
            match (&spec.reference, &spec.offset) {
                (Some(p), None) | (None, Some(p)) if p.len() == k => {}
                (Some(_), None) | (None, Some(_)) => {
                    return Err(Error::config("pair", format!("coordinates must have length {k}")))
                }
                _ => return Err(Error::config("pair", "give exactly one of `reference` or `offset`")),
            }
        }
        Ok(ResolvedScan {
            config: self.clone(),
            model,
            plan,
            axis_params,
            base_point,
            temperatures,
        })
    }
}
