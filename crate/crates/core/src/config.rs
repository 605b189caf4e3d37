//! Structured run configuration.
//!
//! One TOML file holds the physical, circuit, transport, sweep, throughput
//! and scenario tables plus repeated `[[nodes]]` sections. Unknown keys are
//! rejected. `key=value` overrides are applied to the parsed document before
//! it is typed, so an override goes through exactly the same validation as a
//! value in the file.

use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::charge_transport::TransportParams;
use crate::frequency_response::PhaseMode;
use crate::monomer_circuit::{CircuitMode, PhysicalParams, DEFAULT_N_EFF_PER_UM};
use crate::wannet::{ChannelModel, Dimension, Node, RelayPolicy, ScenarioConfig};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: String,
        source: std::io::Error,
    },
    #[error("{0}")]
    Parse(String),
    #[error("unknown config key `{0}`")]
    UnknownKey(String),
    #[error("config key `{key}` is ambiguous; qualify it as one of: {candidates}")]
    AmbiguousKey { key: String, candidates: String },
    #[error("override `{0}` is not of the form key=value")]
    MalformedOverride(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CircuitSection {
    pub n_eff_per_um: f64,
    pub circuit_mode: CircuitMode,
}

impl Default for CircuitSection {
    fn default() -> Self {
        Self {
            n_eff_per_um: DEFAULT_N_EFF_PER_UM,
            circuit_mode: CircuitMode::Paper,
        }
    }
}

/// Which phase columns a sweep emits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PhaseSelection {
    Literal,
    #[default]
    Standard,
    Both,
}

impl PhaseSelection {
    pub fn modes(self) -> &'static [PhaseMode] {
        match self {
            Self::Literal => &[PhaseMode::Literal],
            Self::Standard => &[PhaseMode::Standard],
            Self::Both => &[PhaseMode::Standard, PhaseMode::Literal],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepSection {
    pub distances_um: Vec<f64>,
    pub f_start_hz: f64,
    pub f_stop_hz: f64,
    pub n_points: usize,
    pub phase_mode: PhaseSelection,
}

impl Default for SweepSection {
    fn default() -> Self {
        Self {
            distances_um: vec![10.0, 20.0, 30.0, 40.0, 50.0],
            f_start_hz: 0.0,
            f_stop_hz: 900.0,
            n_points: 901,
            phase_mode: PhaseSelection::Standard,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ThroughputSection {
    pub t_start_s: f64,
    pub t_end_s: f64,
    pub n_points: usize,
    /// Throughput ceiling of the wireless molecular baseline.
    pub fret_ceiling_bps: f64,
}

impl Default for ThroughputSection {
    fn default() -> Self {
        Self {
            t_start_s: 0.0,
            t_end_s: 60e-6,
            n_points: 601,
            fret_ceiling_bps: 5.5e3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioSection {
    pub dimension: Dimension,
    pub wire_growth_um_s: f64,
    pub wire_max_length_um: f64,
    pub miss_timeout_s: f64,
    pub disassembly_s: f64,
    pub message_bits: u64,
    pub per_hop_overhead_bits: u64,
    pub relay_policy: RelayPolicy,
    pub rng_seed: u64,
    pub max_sim_time_s: f64,
    /// Number of consecutive seeds, starting at `rng_seed`, for `simulate`.
    pub seeds: u64,
    #[serde(with = "crate::serde_opt")]
    pub channel_delay_override_s: Option<f64>,
}

impl Default for ScenarioSection {
    fn default() -> Self {
        let base = ScenarioConfig::with_nodes(Vec::new(), Dimension::Two);
        Self {
            dimension: base.dimension,
            wire_growth_um_s: base.wire_growth_um_s,
            wire_max_length_um: base.wire_max_length_um,
            miss_timeout_s: base.miss_timeout_s,
            disassembly_s: base.disassembly_s,
            message_bits: base.message_bits,
            per_hop_overhead_bits: base.per_hop_overhead_bits,
            relay_policy: base.relay_policy,
            rng_seed: base.rng_seed,
            max_sim_time_s: base.max_sim_time_s,
            seeds: 100,
            channel_delay_override_s: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeEntry {
    pub id: u32,
    pub x_um: f64,
    pub y_um: f64,
    #[serde(default)]
    pub z_um: f64,
    pub radius_um: f64,
    #[serde(default)]
    pub gateway: bool,
    #[serde(default)]
    pub initial_detector: bool,
}

impl From<&NodeEntry> for Node {
    fn from(e: &NodeEntry) -> Self {
        Node {
            id: e.id,
            position: [e.x_um, e.y_um, e.z_um],
            radius_um: e.radius_um,
            is_gateway: e.gateway,
            initial_detector: e.initial_detector,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub physical: PhysicalParams,
    pub circuit: CircuitSection,
    pub transport: TransportParams,
    pub sweep: SweepSection,
    pub throughput: ThroughputSection,
    pub scenario: ScenarioSection,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub nodes: Vec<NodeEntry>,
}

/// Scalar keys accepted in each table. Bare override keys are resolved
/// against this list.
const SECTION_KEYS: &[(&str, &[&str])] = &[
    (
        "physical",
        &[
            "r_actin_m",
            "lambda_B_m",
            "epsilon_r",
            "mu_r",
            "rho_ohm_m",
            "l_monomer_m",
            "H_turns",
            "temperature_K",
        ],
    ),
    ("circuit", &["n_eff_per_um", "circuit_mode"]),
    (
        "transport",
        &[
            "Omega",
            "mu1",
            "mu2",
            "alpha_s",
            "beta_m",
            "charge_per_monomer",
            "monomers_per_um",
            "t_stop_s",
        ],
    ),
    (
        "sweep",
        &[
            "distances_um",
            "f_start_hz",
            "f_stop_hz",
            "n_points",
            "phase_mode",
        ],
    ),
    (
        "throughput",
        &["t_start_s", "t_end_s", "n_points", "fret_ceiling_bps"],
    ),
    (
        "scenario",
        &[
            "dimension",
            "wire_growth_um_s",
            "wire_max_length_um",
            "miss_timeout_s",
            "disassembly_s",
            "message_bits",
            "per_hop_overhead_bits",
            "relay_policy",
            "rng_seed",
            "max_sim_time_s",
            "seeds",
            "channel_delay_override_s",
        ],
    ),
];

fn resolve_key(key: &str) -> Result<(&'static str, &'static str), ConfigError> {
    if let Some((section, field)) = key.split_once('.') {
        return SECTION_KEYS
            .iter()
            .find(|(s, _)| *s == section)
            .and_then(|(s, keys)| keys.iter().find(|k| **k == field).map(|k| (*s, *k)))
            .ok_or_else(|| ConfigError::UnknownKey(key.to_string()));
    }
    let hits: Vec<(&'static str, &'static str)> = SECTION_KEYS
        .iter()
        .filter_map(|(s, keys)| keys.iter().find(|k| **k == key).map(|k| (*s, *k)))
        .collect();
    match hits.as_slice() {
        [] => Err(ConfigError::UnknownKey(key.to_string())),
        [one] => Ok(*one),
        many => Err(ConfigError::AmbiguousKey {
            key: key.to_string(),
            candidates: many
                .iter()
                .map(|(s, k)| format!("{s}.{k}"))
                .collect::<Vec<_>>()
                .join(", "),
        }),
    }
}

fn parse_override_value(raw: &str) -> toml::Value {
    let raw = raw.trim();
    toml::from_str::<toml::Table>(&format!("v = {raw}"))
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| toml::Value::String(raw.to_string()))
}

/// Applies `key=value` overrides to a parsed document. Values are parsed as
/// TOML literals and fall back to bare strings, so `t_stop_s=none` works.
pub fn apply_overrides<S: AsRef<str>>(
    doc: &mut toml::Table,
    overrides: &[S],
) -> Result<(), ConfigError> {
    for item in overrides {
        let item = item.as_ref();
        let (key, raw) = item
            .split_once('=')
            .ok_or_else(|| ConfigError::MalformedOverride(item.to_string()))?;
        let (section, field) = resolve_key(key.trim())?;
        let table = doc
            .entry(section)
            .or_insert_with(|| toml::Value::Table(toml::Table::new()));
        let toml::Value::Table(table) = table else {
            return Err(ConfigError::Parse(format!("`{section}` must be a table")));
        };
        table.insert(field.to_string(), parse_override_value(raw));
    }
    Ok(())
}

impl Config {
    pub fn from_toml_str<S: AsRef<str>>(text: &str, overrides: &[S]) -> Result<Self, ConfigError> {
        let mut doc: toml::Table =
            toml::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))?;
        apply_overrides(&mut doc, overrides)?;
        toml::Value::Table(doc)
            .try_into()
            .map_err(|e: toml::de::Error| ConfigError::Parse(e.to_string()))
    }

    /// Reads `path` (or starts from defaults when `None`) and applies overrides.
    pub fn load<S: AsRef<str>>(path: Option<&Path>, overrides: &[S]) -> Result<Self, ConfigError> {
        let text = match path {
            Some(p) => std::fs::read_to_string(p).map_err(|source| ConfigError::Read {
                path: p.display().to_string(),
                source,
            })?,
            None => String::new(),
        };
        Self::from_toml_str(&text, overrides)
    }

    /// Fully resolved configuration, as TOML.
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes to TOML")
    }

    /// First 16 hex digits of the SHA-256 of [`Config::to_toml`].
    pub fn hash_hex(&self) -> String {
        let digest = Sha256::digest(self.to_toml().as_bytes());
        digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }

    pub fn channel_model(&self) -> ChannelModel {
        ChannelModel {
            physical: self.physical,
            circuit_mode: self.circuit.circuit_mode,
            n_eff_per_um: self.circuit.n_eff_per_um,
            transport: self.transport,
            delay_override_s: self.scenario.channel_delay_override_s,
        }
    }

    pub fn scenario_config(&self) -> ScenarioConfig {
        let s = &self.scenario;
        ScenarioConfig {
            nodes: self.nodes.iter().map(Node::from).collect(),
            dimension: s.dimension,
            wire_growth_um_s: s.wire_growth_um_s,
            wire_max_length_um: s.wire_max_length_um,
            miss_timeout_s: s.miss_timeout_s,
            disassembly_s: s.disassembly_s,
            message_bits: s.message_bits,
            per_hop_overhead_bits: s.per_hop_overhead_bits,
            relay_policy: s.relay_policy,
            rng_seed: s.rng_seed,
            max_sim_time_s: s.max_sim_time_s,
            channel: self.channel_model(),
        }
    }
}
