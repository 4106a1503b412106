//! Configuration schema, TOML loading, dotted-path overrides, and the
//! canonical config digest.
//!
//! Configs are canonicalized before overrides are applied: the user file is
//! deserialized (filling every default), re-serialized to a full TOML tree,
//! and only then patched. Override and sweep-axis paths must therefore name
//! real fields of the full schema, which turns typos into validation errors
//! before anything runs.

use crate::coeff::{CoefficientField, CoefficientKind, Sampler};
use crate::error::ConfigError;
use crate::frontsolver::DtPolicy;
use crate::harness::classify::ClassifyThresholds;
use crate::model::ModelParams;
use crate::profile::Profile;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::path::Path;

/// "auto" or an explicit number.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AutoOrValue {
    Auto,
    Value(f64),
}

impl AutoOrValue {
    pub fn resolve(&self, auto: impl FnOnce() -> f64) -> f64 {
        match self {
            AutoOrValue::Auto => auto(),
            AutoOrValue::Value(v) => *v,
        }
    }
}

impl Serialize for AutoOrValue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            AutoOrValue::Auto => s.serialize_str("auto"),
            AutoOrValue::Value(v) => s.serialize_f64(*v),
        }
    }
}

impl<'de> Deserialize<'de> for AutoOrValue {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(v) => Ok(AutoOrValue::Value(v)),
            Raw::Text(s) if s == "auto" => Ok(AutoOrValue::Auto),
            Raw::Text(s) => Err(serde::de::Error::custom(format!(
                "expected a number or \"auto\", got \"{s}\""
            ))),
        }
    }
}

/// Coefficient section with a shorthand for constant fields: either give
/// `a0`/`b0`, or full samplers plus all four declared bounds.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoefficientsSection {
    pub kind: CoefficientKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<Sampler>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<Sampler>,
    #[serde(default = "one")]
    pub period: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a_inf: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a_sup: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b_inf: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b_sup: Option<f64>,
    #[serde(default = "default_x_window")]
    pub x_window: (f64, f64),
}

fn one() -> f64 {
    1.0
}

fn default_x_window() -> (f64, f64) {
    (0.0, 50.0)
}

impl CoefficientsSection {
    pub fn constant(a0: f64, b0: f64) -> Self {
        CoefficientsSection {
            kind: CoefficientKind::Constant,
            a0: Some(a0),
            b0: Some(b0),
            a: None,
            b: None,
            period: 1.0,
            a_inf: None,
            a_sup: None,
            b_inf: None,
            b_sup: None,
            x_window: default_x_window(),
        }
    }

    pub fn build(&self) -> Result<CoefficientField, ConfigError> {
        let field = match (self.kind, self.a0, self.b0) {
            (CoefficientKind::Constant, Some(a0), Some(b0)) => {
                let mut f = CoefficientField::constant(a0, b0);
                f.x_window = self.x_window;
                f
            }
            (CoefficientKind::Constant, None, None)
            | (CoefficientKind::TimeOnly, _, _)
            | (CoefficientKind::SpaceTime, _, _) => {
                let missing = |name: &str| {
                    ConfigError::Validation(format!(
                        "coefficients.{name} is required unless kind = \"constant\" with a0/b0"
                    ))
                };
                CoefficientField {
                    kind: self.kind,
                    a: self.a.clone().ok_or_else(|| missing("a"))?,
                    b: self.b.clone().ok_or_else(|| missing("b"))?,
                    period: self.period,
                    a_inf: self.a_inf.ok_or_else(|| missing("a_inf"))?,
                    a_sup: self.a_sup.ok_or_else(|| missing("a_sup"))?,
                    b_inf: self.b_inf.ok_or_else(|| missing("b_inf"))?,
                    b_sup: self.b_sup.ok_or_else(|| missing("b_sup"))?,
                    x_window: self.x_window,
                }
            }
            _ => {
                return Err(ConfigError::Validation(
                    "coefficients: give both a0 and b0, or neither".into(),
                ))
            }
        };
        field.validate(BOUNDS_SAMPLES)?;
        Ok(field)
    }
}

/// Dense sample count for the declared-bounds check.
pub const BOUNDS_SAMPLES: usize = 10_000;

/// Domain geometry of the run.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Geometry {
    /// Moving front on [0, h(t)].
    Single { h0: f64 },
    /// Moving fronts on [g(t), h(t)].
    Double { g0: f64, h0: f64 },
    /// Fixed truncation [0, length] of the half line.
    Halfline { length: f64 },
    /// Single-species drift equation on [0, length], absorbing right end.
    FixedMixed {
        length: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        beta: Option<Sampler>,
    },
    /// Single-species drift equation on [left, right], absorbing both ends,
    /// constant coefficients a0, b0.
    FixedDirichlet {
        left: f64,
        right: f64,
        a0: f64,
        b0: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        beta: Option<Sampler>,
    },
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    #[serde(default = "default_grid_n")]
    pub n: usize,
}

fn default_grid_n() -> usize {
    128
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeConfig {
    #[serde(default)]
    pub dt: DtPolicy,
    pub t_end: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunKnobs {
    /// Front cap; "auto" scales the critical length by 50.
    #[serde(default = "default_auto")]
    pub h_max: AutoOrValue,
    #[serde(default = "default_sample_interval")]
    pub sample_interval: f64,
    #[serde(default)]
    pub snapshot_times: Vec<f64>,
    #[serde(default = "default_bound_tol")]
    pub bound_tol: f64,
    #[serde(default = "default_residual_tol_factor")]
    pub residual_tol_factor: f64,
    #[serde(default = "default_blowup_guard")]
    pub blowup_guard: f64,
}

fn default_auto() -> AutoOrValue {
    AutoOrValue::Auto
}
fn default_sample_interval() -> f64 {
    0.1
}
fn default_bound_tol() -> f64 {
    1e-3
}
fn default_residual_tol_factor() -> f64 {
    10.0
}
fn default_blowup_guard() -> f64 {
    1e3
}

impl Default for RunKnobs {
    fn default() -> Self {
        RunKnobs {
            h_max: default_auto(),
            sample_interval: default_sample_interval(),
            snapshot_times: Vec::new(),
            bound_tol: default_bound_tol(),
            residual_tol_factor: default_residual_tol_factor(),
            blowup_guard: default_blowup_guard(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassifySection {
    #[serde(default = "default_window_fraction")]
    pub window_fraction: f64,
    #[serde(default = "default_eps_vanish_sup")]
    pub eps_vanish_sup: f64,
    #[serde(default = "default_eps_vanish_front")]
    pub eps_vanish_front: f64,
    #[serde(default = "default_delta_spread")]
    pub delta_spread: f64,
    /// Interior probe length; "auto" uses the critical length.
    #[serde(default = "default_auto")]
    pub probe_length: AutoOrValue,
}

fn default_window_fraction() -> f64 {
    0.2
}
fn default_eps_vanish_sup() -> f64 {
    1e-6
}
fn default_eps_vanish_front() -> f64 {
    1e-8
}
fn default_delta_spread() -> f64 {
    1e-3
}

impl Default for ClassifySection {
    fn default() -> Self {
        ClassifySection {
            window_fraction: default_window_fraction(),
            eps_vanish_sup: default_eps_vanish_sup(),
            eps_vanish_front: default_eps_vanish_front(),
            delta_spread: default_delta_spread(),
            probe_length: AutoOrValue::Auto,
        }
    }
}

impl ClassifySection {
    pub fn thresholds(&self, h_max: f64) -> ClassifyThresholds {
        ClassifyThresholds {
            window_fraction: self.window_fraction,
            eps_vanish_sup: self.eps_vanish_sup,
            eps_vanish_front: self.eps_vanish_front,
            delta_spread: self.delta_spread,
            h_max,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    #[serde(default = "default_out_dir")]
    pub out_dir: String,
}

fn default_out_dir() -> String {
    "out".into()
}

impl Default for OutputSection {
    fn default() -> Self {
        OutputSection {
            out_dir: default_out_dir(),
        }
    }
}

/// A complete run description.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub model: ModelParams,
    pub coefficients: CoefficientsSection,
    pub geometry: Geometry,
    pub initial: Profile,
    #[serde(default = "default_grid")]
    pub grid: GridConfig,
    pub time: TimeConfig,
    #[serde(default)]
    pub run: RunKnobs,
    #[serde(default)]
    pub classify: ClassifySection,
    #[serde(default)]
    pub output: OutputSection,
}

fn default_grid() -> GridConfig {
    GridConfig { n: default_grid_n() }
}

impl RunConfig {
    /// Stable hash of the canonicalized (fully defaulted) config.
    pub fn digest(&self) -> String {
        let canonical = serde_json::to_string(self).expect("config serializes");
        let mut hasher = Sha256::new();
        hasher.update(canonical.as_bytes());
        let digest = hasher.finalize();
        let mut hex = String::with_capacity(16);
        for byte in digest.iter().take(8) {
            hex.push_str(&format!("{byte:02x}"));
        }
        hex
    }

    /// Structural validation before anything runs; the damping hypothesis is
    /// checked separately by the runner so it can honor the override flag.
    pub fn validate(&self) -> Result<CoefficientField, ConfigError> {
        self.model.validate()?;
        let field = self.coefficients.build()?;
        match &self.geometry {
            Geometry::Single { h0 } => {
                if !(*h0 > 0.0) {
                    return Err(ConfigError::Validation(format!(
                        "geometry.h0 must be positive, got {h0}"
                    )));
                }
            }
            Geometry::Double { g0, h0 } => {
                if !(g0 < h0) {
                    return Err(ConfigError::Validation(format!(
                        "geometry needs g0 < h0, got [{g0}, {h0}]"
                    )));
                }
            }
            Geometry::Halfline { length } | Geometry::FixedMixed { length, .. } => {
                if !(*length > 0.0) {
                    return Err(ConfigError::Validation(format!(
                        "geometry length must be positive, got {length}"
                    )));
                }
            }
            Geometry::FixedDirichlet {
                left,
                right,
                a0,
                b0,
                ..
            } => {
                if !(left < right) {
                    return Err(ConfigError::Validation(format!(
                        "geometry needs left < right, got [{left}, {right}]"
                    )));
                }
                if !(*a0 > 0.0 && *b0 > 0.0) {
                    return Err(ConfigError::Validation(
                        "fixed_dirichlet needs positive a0, b0".into(),
                    ));
                }
            }
        }
        if self.grid.n < 32 {
            return Err(ConfigError::Validation(format!(
                "grid.n must be at least 32, got {}",
                self.grid.n
            )));
        }
        if !(self.time.t_end > 0.0) {
            return Err(ConfigError::Validation(format!(
                "time.t_end must be positive, got {}",
                self.time.t_end
            )));
        }
        if let DtPolicy::Fixed { value } = self.time.dt {
            if !(value > 0.0) {
                return Err(ConfigError::Validation(format!(
                    "time.dt value must be positive, got {value}"
                )));
            }
        }
        if !(self.run.sample_interval > 0.0) {
            return Err(ConfigError::Validation(
                "run.sample_interval must be positive".into(),
            ));
        }
        self.classify
            .thresholds(f64::INFINITY)
            .validate()
            .map_err(ConfigError::Validation)?;
        Ok(field)
    }
}

/// Parse a run config from TOML text.
pub fn parse_run_config(text: &str) -> Result<RunConfig, ConfigError> {
    toml::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))
}

/// Load a run config from a TOML file, applying dotted-path overrides on the
/// canonicalized tree.
pub fn load_run_config(path: &Path, overrides: &[String]) -> Result<RunConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.display().to_string(),
        source,
    })?;
    apply_overrides(parse_run_config(&text)?, overrides)
}

/// Re-apply overrides to an already-typed config.
pub fn apply_overrides(config: RunConfig, overrides: &[String]) -> Result<RunConfig, ConfigError> {
    if overrides.is_empty() {
        return Ok(config);
    }
    let mut doc = to_toml_value(&config)?;
    for item in overrides {
        let (path, raw) = item.split_once('=').ok_or_else(|| {
            ConfigError::Validation(format!("override `{item}` is not of the form key=value"))
        })?;
        set_path(&mut doc, path.trim(), raw.trim())
            .map_err(|_| ConfigError::OverridePath(path.trim().to_string()))?;
    }
    doc.try_into()
        .map_err(|e: toml::de::Error| ConfigError::Parse(e.to_string()))
}

pub(crate) fn to_toml_value(config: &RunConfig) -> Result<toml::Value, ConfigError> {
    toml::Value::try_from(config).map_err(|e| ConfigError::Parse(e.to_string()))
}

/// Set `doc[path] = parse(raw)`, requiring every path component (including
/// the leaf) to already exist in the canonical tree.
pub(crate) fn set_path(doc: &mut toml::Value, path: &str, raw: &str) -> Result<(), ()> {
    set_path_value(doc, path, parse_toml_literal(raw))
}

pub(crate) fn set_path_value(
    doc: &mut toml::Value,
    path: &str,
    value: toml::Value,
) -> Result<(), ()> {
    let mut node = doc;
    let parts: Vec<&str> = path.split('.').collect();
    if parts.is_empty() {
        return Err(());
    }
    for part in &parts[..parts.len() - 1] {
        node = match node {
            toml::Value::Table(t) => t.get_mut(*part).ok_or(())?,
            toml::Value::Array(a) => {
                let idx: usize = part.parse().map_err(|_| ())?;
                a.get_mut(idx).ok_or(())?
            }
            _ => return Err(()),
        };
    }
    let leaf = parts[parts.len() - 1];
    match node {
        toml::Value::Table(t) => {
            if !t.contains_key(leaf) {
                return Err(());
            }
            t.insert(leaf.to_string(), value);
            Ok(())
        }
        toml::Value::Array(a) => {
            let idx: usize = leaf.parse().map_err(|_| ())?;
            if idx >= a.len() {
                return Err(());
            }
            a[idx] = value;
            Ok(())
        }
        _ => Err(()),
    }
}

/// Check that a dotted path names an existing field (for sweep axes).
pub(crate) fn path_exists(doc: &toml::Value, path: &str) -> bool {
    let mut node = doc;
    for part in path.split('.') {
        node = match node {
            toml::Value::Table(t) => match t.get(part) {
                Some(v) => v,
                None => return false,
            },
            toml::Value::Array(a) => match part.parse::<usize>().ok().and_then(|i| a.get(i)) {
                Some(v) => v,
                None => return false,
            },
            _ => return false,
        };
    }
    true
}

fn parse_toml_literal(raw: &str) -> toml::Value {
    // Reuse the TOML value grammar; fall back to a bare string.
    let wrapped = format!("v = {raw}");
    if let Ok(table) = wrapped.parse::<toml::Table>() {
        if let Some(v) = table.get("v") {
            return v.clone();
        }
    }
    toml::Value::String(raw.to_string())
}

/// One sweep axis: a dotted config path and the values it takes.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepAxis {
    pub path: String,
    pub values: Vec<toml::Value>,
}

#[derive(Debug, Clone, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    #[serde(default)]
    pub axes: Vec<SweepAxis>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub jobs: Option<usize>,
}

/// A sweep file: a full run config plus a `[sweep]` section.
#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub base: RunConfig,
    pub sweep: SweepSection,
}

pub fn load_sweep_config(path: &Path, overrides: &[String]) -> Result<SweepConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let mut doc: toml::Table =
        text.parse().map_err(|e: toml::de::Error| ConfigError::Parse(e.to_string()))?;
    let sweep: SweepSection = match doc.remove("sweep") {
        Some(v) => v
            .try_into()
            .map_err(|e: toml::de::Error| ConfigError::Parse(e.to_string()))?,
        None => SweepSection::default(),
    };
    let base: RunConfig = toml::Value::Table(doc)
        .try_into()
        .map_err(|e: toml::de::Error| ConfigError::Parse(e.to_string()))?;
    let base = apply_overrides(base, overrides)?;
    let config = SweepConfig { base, sweep };
    config.validate()?;
    Ok(config)
}

impl SweepConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        self.base.validate()?;
        let doc = to_toml_value(&self.base)?;
        for axis in &self.sweep.axes {
            if axis.values.is_empty() {
                return Err(ConfigError::Validation(format!(
                    "sweep axis `{}` has no values",
                    axis.path
                )));
            }
            if !path_exists(&doc, &axis.path) {
                return Err(ConfigError::AxisPath(axis.path.clone()));
            }
        }
        Ok(())
    }

    /// Cartesian product size.
    pub fn cell_count(&self) -> usize {
        self.sweep.axes.iter().map(|a| a.values.len()).product()
    }

    /// Config for the cell at flat index `idx`, row-major with the first axis
    /// slowest. Returns the axis values applied alongside the config.
    pub fn cell(&self, idx: usize) -> Result<(RunConfig, Vec<toml::Value>), ConfigError> {
        let mut doc = to_toml_value(&self.base)?;
        let mut values = Vec::with_capacity(self.sweep.axes.len());
        let mut rem = idx;
        let mut strides: Vec<usize> = Vec::with_capacity(self.sweep.axes.len());
        let mut acc = 1usize;
        for axis in self.sweep.axes.iter().rev() {
            strides.push(acc);
            acc *= axis.values.len();
        }
        strides.reverse();
        for (axis, stride) in self.sweep.axes.iter().zip(&strides) {
            let k = rem / stride;
            rem %= stride;
            let v = &axis.values[k];
            values.push(v.clone());
            set_path_value(&mut doc, &axis.path, v.clone())
                .map_err(|_| ConfigError::AxisPath(axis.path.clone()))?;
        }
        let config: RunConfig = doc
            .try_into()
            .map_err(|e: toml::de::Error| ConfigError::Parse(e.to_string()))?;
        Ok((config, values))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn minimal_toml() -> &'static str {
        r#"
[model]
chi1 = 0.0
chi2 = 0.0
lambda1 = 1.0
lambda2 = 1.0
mu1 = 1.0
mu2 = 1.0
nu = 1.0

[coefficients]
kind = "constant"
a0 = 1.0
b0 = 1.0

[geometry]
kind = "single"
h0 = 1.0

[initial]
shape = "cos_half"
amplitude = 0.5

[time]
t_end = 10.0
"#
    }

    fn parse(text: &str) -> RunConfig {
        toml::from_str(text).unwrap()
    }

    #[test]
    fn minimal_config_parses_with_defaults() {
        let cfg = parse(minimal_toml());
        assert_eq!(cfg.grid.n, 128);
        assert_eq!(cfg.run.sample_interval, 0.1);
        cfg.validate().unwrap();
    }

    #[test]
    fn digest_is_stable_and_sensitive() {
        let a = parse(minimal_toml());
        let b = parse(minimal_toml());
        assert_eq!(a.digest(), b.digest());
        let mut c = parse(minimal_toml());
        c.grid.n = 256;
        assert_ne!(a.digest(), c.digest());
    }

    #[test]
    fn override_replaces_nested_value() {
        let cfg = parse(minimal_toml());
        let cfg = apply_overrides(cfg, &["geometry.h0=2.5".to_string()]).unwrap();
        match cfg.geometry {
            Geometry::Single { h0 } => assert_eq!(h0, 2.5),
            _ => panic!("geometry changed kind"),
        }
    }

    #[test]
    fn override_with_bad_path_is_rejected() {
        let cfg = parse(minimal_toml());
        let err = apply_overrides(cfg, &["geometry.h00=2.5".to_string()]).unwrap_err();
        assert!(matches!(err, ConfigError::OverridePath(_)));
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let text = format!("{}\n[grid]\nn = 64\nextra = 1\n", minimal_toml());
        assert!(toml::from_str::<RunConfig>(&text).is_err());
    }

    #[test]
    fn sweep_cells_enumerate_cartesian_product() {
        let base = parse(minimal_toml());
        let sweep = SweepConfig {
            base,
            sweep: SweepSection {
                axes: vec![
                    SweepAxis {
                        path: "geometry.h0".into(),
                        values: vec![toml::Value::Float(0.5), toml::Value::Float(1.5)],
                    },
                    SweepAxis {
                        path: "grid.n".into(),
                        values: vec![toml::Value::Integer(64), toml::Value::Integer(96)],
                    },
                ],
                jobs: None,
            },
        };
        sweep.validate().unwrap();
        assert_eq!(sweep.cell_count(), 4);
        let (c0, v0) = sweep.cell(0).unwrap();
        assert_eq!(c0.grid.n, 64);
        assert_eq!(v0.len(), 2);
        let (c3, _) = sweep.cell(3).unwrap();
        assert_eq!(c3.grid.n, 96);
        match c3.geometry {
            Geometry::Single { h0 } => assert_eq!(h0, 1.5),
            _ => panic!(),
        }
    }

    #[test]
    fn time_periodic_and_tabulated_coefficients_parse() {
        let text = r#"
[model]
chi1 = 0.0
chi2 = 0.0
lambda1 = 1.0
lambda2 = 1.0
mu1 = 1.0
mu2 = 1.0
nu = 1.0

[coefficients]
kind = "time_only"
period = 1.0
a = { builtin = "sin_periodic", offset = 1.0, amplitude = 0.5, period = 1.0 }
b = { builtin = "constant", value = 1.0 }
a_inf = 0.5
a_sup = 1.5
b_inf = 1.0
b_sup = 1.0

[geometry]
kind = "single"
h0 = 1.0

[initial]
shape = "cos_half"
amplitude = 0.5

[time]
t_end = 5.0
"#;
        let cfg: RunConfig = toml::from_str(text).unwrap();
        let field = cfg.validate().unwrap();
        assert_eq!(field.kind, CoefficientKind::TimeOnly);
        assert!((field.a(0.25, 0.0) - 1.5).abs() < 1e-12);

        let table = r#"
[model]
chi1 = 0.0
chi2 = 0.0
lambda1 = 1.0
lambda2 = 1.0
mu1 = 1.0
mu2 = 1.0
nu = 1.0

[coefficients]
kind = "space_time"
period = 2.0
x_window = [0.0, 10.0]
a = { builtin = "table", t = [0.0, 2.0], x = [0.0, 10.0], values = [[1.0, 2.0], [1.0, 2.0]] }
b = { builtin = "constant", value = 1.0 }
a_inf = 1.0
a_sup = 2.0
b_inf = 1.0
b_sup = 1.0

[geometry]
kind = "single"
h0 = 1.0

[initial]
shape = "cos_half"
amplitude = 0.5

[time]
t_end = 5.0
"#;
        let cfg: RunConfig = toml::from_str(table).unwrap();
        let field = cfg.validate().unwrap();
        assert!((field.a(0.0, 5.0) - 1.5).abs() < 1e-12);
    }

    #[test]
    fn sweep_axis_typo_is_rejected() {
        let base = parse(minimal_toml());
        let sweep = SweepConfig {
            base,
            sweep: SweepSection {
                axes: vec![SweepAxis {
                    path: "geometry.h00".into(),
                    values: vec![toml::Value::Float(0.5)],
                }],
                jobs: None,
            },
        };
        assert!(matches!(
            sweep.validate(),
            Err(ConfigError::AxisPath(_))
        ));
    }
}
