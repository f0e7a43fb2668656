use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::RunnerError;
use crate::bath::{BathMode, CouplingMode, SpectralFamily, DEFAULT_ALPHA, DEFAULT_OMEGA_C, DEFAULT_TEMPERATURE};
use crate::model::{TopologyClass, MAX_QUBITS};

pub const DEFAULT_K: f64 = 0.24;
pub const DEFAULT_J: f64 = 0.595;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    SpectrumSweep,
    Evolve,
    Anneal,
    DfsScan,
    Verify,
}

impl ExperimentKind {
    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::SpectrumSweep => "spectrum-sweep",
            ExperimentKind::Evolve => "evolve",
            ExperimentKind::Anneal => "anneal",
            ExperimentKind::DfsScan => "dfs-scan",
            ExperimentKind::Verify => "verify",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Backend {
    #[default]
    Closed,
    Lindblad,
    ExactBath,
}

impl Backend {
    pub fn name(self) -> &'static str {
        match self {
            Backend::Closed => "closed",
            Backend::Lindblad => "lindblad",
            Backend::ExactBath => "exact-bath",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "closed" => Some(Backend::Closed),
            "lindblad" => Some(Backend::Lindblad),
            "exact-bath" => Some(Backend::ExactBath),
            _ => None,
        }
    }
}

fn default_k() -> f64 {
    DEFAULT_K
}

fn default_j() -> f64 {
    DEFAULT_J
}

/// Qubit-network and Ising parameters. Uniform `k`/`j` apply to every qubit
/// and every edge of the topology.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemConfig {
    #[serde(default)]
    pub n_qubits: Option<usize>,
    #[serde(default = "default_k")]
    pub k: f64,
    #[serde(default = "default_j")]
    pub j: f64,
    #[serde(default)]
    pub delta: Option<Vec<f64>>,
    /// Ising fields (anneal).
    #[serde(default)]
    pub h: Option<Vec<f64>>,
    /// Ising couplings (anneal), symmetric with zero diagonal.
    #[serde(default)]
    pub ising_j: Option<Vec<Vec<f64>>>,
}

impl Default for SystemConfig {
    fn default() -> Self {
        Self { n_qubits: None, k: DEFAULT_K, j: DEFAULT_J, delta: None, h: None, ising_j: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TopologySpec {
    /// `a`, `b`, `c`/`lambda`, `d`/`triangle`/`delta`.
    Label(String),
    Edges { edges: Vec<(usize, usize)> },
}

fn default_family() -> SpectralFamily {
    SpectralFamily::SuperOhmic
}
fn default_alpha() -> f64 {
    DEFAULT_ALPHA
}
fn default_omega_c() -> f64 {
    DEFAULT_OMEGA_C
}
fn default_temperature() -> f64 {
    DEFAULT_TEMPERATURE
}
fn default_coupling_mode() -> CouplingMode {
    CouplingMode::Common
}
fn default_scale() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BathConfig {
    #[serde(default = "default_family")]
    pub family: SpectralFamily,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    #[serde(default = "default_omega_c")]
    pub omega_c: f64,
    #[serde(default = "default_temperature")]
    pub temperature: f64,
    #[serde(default = "default_coupling_mode")]
    pub coupling_mode: CouplingMode,
    #[serde(default = "default_scale")]
    pub coupling_scale: f64,
    /// Frequency at which the Markovian rate is evaluated; the dominant gap
    /// of the system spectrum when absent.
    #[serde(default)]
    pub omega_ref: Option<f64>,
    /// Explicit rate overriding the spectral-density formula.
    #[serde(default)]
    pub gamma: Option<f64>,
    /// Modes for the exact-bath backend.
    #[serde(default)]
    pub modes: Vec<BathMode>,
}

impl Default for BathConfig {
    fn default() -> Self {
        Self {
            family: default_family(),
            alpha: DEFAULT_ALPHA,
            omega_c: DEFAULT_OMEGA_C,
            temperature: DEFAULT_TEMPERATURE,
            coupling_mode: CouplingMode::Common,
            coupling_scale: 1.0,
            omega_ref: None,
            gamma: None,
            modes: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeConfig {
    pub t_end: f64,
    #[serde(default = "default_dt")]
    pub dt: f64,
}

fn default_dt() -> f64 {
    crate::dynamics::DEFAULT_DT
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SweepParamName {
    K,
    J,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub param: SweepParamName,
    pub from: f64,
    pub to: f64,
    pub points: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScheduleKind {
    #[default]
    Linear,
    Cosine,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScheduleConfig {
    #[serde(default)]
    pub family: ScheduleKind,
    pub total_time: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DfsConfig {
    /// Groups to report; every group of the basis partition when empty.
    #[serde(default)]
    pub groups: Vec<String>,
    #[serde(default)]
    pub tol: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    #[serde(default)]
    pub system: SystemConfig,
    #[serde(default)]
    pub topology: Option<TopologySpec>,
    #[serde(default)]
    pub bath: Option<BathConfig>,
    #[serde(default)]
    pub backend: Backend,
    #[serde(default)]
    pub initial_state: Option<String>,
    #[serde(default)]
    pub time: Option<TimeConfig>,
    #[serde(default)]
    pub sweep: Option<SweepConfig>,
    #[serde(default)]
    pub schedule: Option<ScheduleConfig>,
    #[serde(default)]
    pub dfs: Option<DfsConfig>,
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
    /// Also write SVG line plots next to the CSVs.
    #[serde(default)]
    pub plot: bool,
}

impl ExperimentConfig {
    /// Number of qubits implied by `system.n_qubits`, the topology or the
    /// Ising fields, in that order; three by default.
    pub fn n_qubits(&self) -> usize {
        if let Some(n) = self.system.n_qubits {
            return n;
        }
        match &self.topology {
            Some(TopologySpec::Edges { edges }) => {
                return edges.iter().map(|&(a, b)| a.max(b) + 1).max().unwrap_or(3).max(2)
            }
            Some(TopologySpec::Label(_)) => return 3,
            None => {}
        }
        self.system.h.as_ref().map_or(3, |h| h.len())
    }

    /// Checks kind-specific requirements; errors carry the offending path.
    pub fn validate(&self) -> Result<(), RunnerError> {
        let bad = |path: &str, msg: String| Err(RunnerError::Validation { path: path.to_string(), message: msg });
        let n = self.n_qubits();
        if n == 0 || n > MAX_QUBITS {
            return bad("system.n_qubits", format!("must be in 1..={MAX_QUBITS}, got {n}"));
        }
        if !self.system.k.is_finite() {
            return bad("system.k", "must be finite".into());
        }
        if !self.system.j.is_finite() {
            return bad("system.j", "must be finite".into());
        }
        if let Some(d) = &self.system.delta {
            if d.len() != n {
                return bad("system.delta", format!("expected {n} entries, got {}", d.len()));
            }
        }
        match &self.topology {
            Some(TopologySpec::Label(l)) => {
                if TopologyClass::from_label(l).is_none() {
                    return bad("topology", format!("unknown topology '{l}'; expected a, b, c or d"));
                }
                if n != 3 {
                    return bad("topology", format!("class labels describe 3 qubits, system has {n}"));
                }
            }
            Some(TopologySpec::Edges { edges }) => {
                if let Some((a, b)) = edges.iter().find(|&&(a, b)| a == b || a >= n || b >= n) {
                    return bad("topology.edges", format!("invalid edge ({a}, {b}) for {n} qubits"));
                }
            }
            None => {}
        }
        if let Some(b) = &self.bath {
            if !(b.alpha >= 0.0) {
                return bad("bath.alpha", format!("must be ≥ 0, got {}", b.alpha));
            }
            if !(b.omega_c > 0.0) {
                return bad("bath.omega_c", format!("must be > 0, got {}", b.omega_c));
            }
            if !(b.temperature >= 0.0) {
                return bad("bath.temperature", format!("must be ≥ 0, got {}", b.temperature));
            }
            if !(b.coupling_scale >= 0.0) {
                return bad("bath.coupling_scale", format!("must be ≥ 0, got {}", b.coupling_scale));
            }
            if let Some(w) = b.omega_ref.filter(|w| !(*w > 0.0)) {
                return bad("bath.omega_ref", format!("must be > 0, got {w}"));
            }
            if let Some(g) = b.gamma.filter(|g| !(*g >= 0.0)) {
                return bad("bath.gamma", format!("must be ≥ 0, got {g}"));
            }
            for (i, m) in b.modes.iter().enumerate() {
                if let Err(e) = m.validate() {
                    return bad(&format!("bath.modes[{i}]"), e.to_string());
                }
            }
        }
        if let Some(t) = &self.time {
            if !(t.t_end > 0.0) || !t.t_end.is_finite() {
                return bad("time.t_end", format!("must be > 0, got {}", t.t_end));
            }
            if !(t.dt > 0.0) || !t.dt.is_finite() {
                return bad("time.dt", format!("must be > 0, got {}", t.dt));
            }
        }
        if let Some(tol) = self.dfs.as_ref().and_then(|d| d.tol).filter(|t| !(*t > 0.0)) {
            return bad("dfs.tol", format!("must be > 0, got {tol}"));
        }

        match self.kind {
            ExperimentKind::SpectrumSweep => {
                let Some(s) = &self.sweep else {
                    return bad("sweep", "required for spectrum-sweep".into());
                };
                if s.points == 0 {
                    return bad("sweep.points", "must be ≥ 1".into());
                }
                if !s.from.is_finite() || !s.to.is_finite() {
                    return bad("sweep", "bounds must be finite".into());
                }
            }
            ExperimentKind::Evolve | ExperimentKind::DfsScan => {
                if self.initial_state.is_none() {
                    return bad("initial_state", format!("required for {}", self.kind.name()));
                }
                if self.time.is_none() {
                    return bad("time", format!("required for {}", self.kind.name()));
                }
                if self.backend == Backend::ExactBath && self.bath.as_ref().is_none_or(|b| b.modes.is_empty()) {
                    return bad("bath.modes", "exact-bath backend needs at least one mode".into());
                }
            }
            ExperimentKind::Anneal => {
                let Some(h) = &self.system.h else {
                    return bad("system.h", "required for anneal".into());
                };
                if h.len() != n {
                    return bad("system.h", format!("expected {n} entries, got {}", h.len()));
                }
                match &self.system.ising_j {
                    None => return bad("system.ising_j", "required for anneal".into()),
                    Some(j) if j.len() != n || j.iter().any(|r| r.len() != n) => {
                        return bad("system.ising_j", format!("must be {n}×{n}"));
                    }
                    _ => {}
                }
                match &self.schedule {
                    None => return bad("schedule", "required for anneal".into()),
                    Some(s) if !(s.total_time > 0.0) => {
                        return bad("schedule.total_time", format!("must be > 0, got {}", s.total_time));
                    }
                    _ => {}
                }
            }
            ExperimentKind::Verify => {}
        }
        Ok(())
    }
}

/// Parses and validates a config from JSON text.
pub fn parse_config_str(text: &str) -> Result<ExperimentConfig, RunnerError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let config: ExperimentConfig = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        match inner.classify() {
            serde_json::error::Category::Data => {
                // serde reports a missing field at its parent; name the field itself
                let msg = inner.to_string();
                let path = match missing_field(&msg) {
                    Some(f) if path == "." => f.to_string(),
                    Some(f) => format!("{path}.{f}"),
                    None => path,
                };
                RunnerError::Validation { path, message: msg }
            }
            _ => RunnerError::Parse { message: inner.to_string() },
        }
    })?;
    config.validate()?;
    Ok(config)
}

fn missing_field(msg: &str) -> Option<&str> {
    let rest = msg.strip_prefix("missing field `")?;
    rest.split('`').next()
}

/// Reads, parses and validates a config file.
pub fn parse_config(path: &Path) -> Result<ExperimentConfig, RunnerError> {
    let text = std::fs::read_to_string(path).map_err(|e| RunnerError::Parse {
        message: format!("cannot read {}: {e}", path.display()),
    })?;
    parse_config_str(&text)
}
