//! Command parameters: flags layered over an optional flat TOML file.

use std::path::{Path, PathBuf};

use clap::Args;
use serde::Deserialize;

use crate::CliError;

/// A comma-separated list on the command line, or a list or string in the
/// config file.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum ListValue<T> {
    Items(Vec<T>),
    Text(String),
}

impl<T: std::str::FromStr + Clone> ListValue<T> {
    pub fn items(&self, key: &str) -> Result<Vec<T>, CliError> {
        match self {
            ListValue::Items(v) => Ok(v.clone()),
            ListValue::Text(s) => s
                .split(',')
                .map(str::trim)
                .filter(|p| !p.is_empty())
                .map(|p| p.parse::<T>().map_err(|_| CliError::Config(format!("{key}: cannot parse {p:?}"))))
                .collect(),
        }
    }
}

fn text_list<T>(s: Option<String>) -> Option<ListValue<T>> {
    s.map(ListValue::Text)
}

/// Flags shared by every command.
#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    /// Flat TOML file with default values for the flags below.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Named group (z2, z8, z2_3, s3, d4, pauli1, pauli2, clifford1,
    /// cnot_phase2) or a JSON file of generator matrices.
    #[arg(long, global = true)]
    pub group: Option<String>,
    /// Circuit file in JSON-lines format.
    #[arg(long, global = true)]
    pub circuit: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Largest group order closure may reach before giving up.
    #[arg(long, global = true, env = "CHARCOM_ORDER_CAP")]
    pub order_cap: Option<usize>,
    #[arg(long, global = true)]
    pub threshold: Option<f64>,
    /// verbatim or isotypic.
    #[arg(long, global = true)]
    pub mode: Option<String>,
    #[arg(long, global = true)]
    pub bins: Option<usize>,
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    #[arg(long, global = true)]
    pub out_dir: Option<PathBuf>,
    /// Conjugacy class whose representative is evaluated.
    #[arg(long, global = true)]
    pub class: Option<usize>,
    /// zero, random or basis:K
    #[arg(long, global = true)]
    pub state: Option<String>,
    /// Comma-separated thresholds for the truncation table.
    #[arg(long, global = true)]
    pub thresholds: Option<String>,
    /// random, qft or qaoa
    #[arg(long, global = true)]
    pub family: Option<String>,
    /// Gate set of the random family, e.g. X,Z,CNOT
    #[arg(long, global = true)]
    pub gate_set: Option<String>,
    /// Largest phase level of the qft and qaoa families.
    #[arg(long, global = true)]
    pub max_level: Option<u32>,
    /// Number of qubits.
    #[arg(long, global = true)]
    pub qubits: Option<u32>,
    /// Gates per circuit.
    #[arg(long, global = true)]
    pub gates: Option<usize>,
    /// Comma-separated qubit counts for heatmap rows.
    #[arg(long, global = true)]
    pub qubit_values: Option<String>,
    /// Comma-separated gate counts for heatmap columns or scaling points.
    #[arg(long, global = true)]
    pub gate_counts: Option<String>,
    /// uniform01 or circuit
    #[arg(long, global = true)]
    pub source: Option<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    group: Option<String>,
    circuit: Option<PathBuf>,
    seed: Option<u64>,
    order_cap: Option<usize>,
    threshold: Option<f64>,
    mode: Option<String>,
    bins: Option<usize>,
    samples: Option<usize>,
    out_dir: Option<PathBuf>,
    class: Option<usize>,
    state: Option<String>,
    thresholds: Option<ListValue<f64>>,
    family: Option<String>,
    gate_set: Option<String>,
    max_level: Option<u32>,
    qubits: Option<u32>,
    gates: Option<usize>,
    qubit_values: Option<ListValue<usize>>,
    gate_counts: Option<ListValue<usize>>,
    source: Option<String>,
}

/// Resolved parameters; `None` means the command default applies.
#[derive(Debug, Default)]
pub struct Params {
    pub group: Option<String>,
    pub circuit: Option<PathBuf>,
    pub seed: u64,
    pub order_cap: usize,
    pub threshold: Option<f64>,
    pub mode: Option<String>,
    pub bins: Option<usize>,
    pub samples: Option<usize>,
    pub out_dir: PathBuf,
    pub class: Option<usize>,
    pub state: Option<String>,
    pub thresholds: Option<ListValue<f64>>,
    pub family: Option<String>,
    pub gate_set: Option<String>,
    pub max_level: Option<u32>,
    pub qubits: Option<u32>,
    pub gates: Option<usize>,
    pub qubit_values: Option<ListValue<usize>>,
    pub gate_counts: Option<ListValue<usize>>,
    pub source: Option<String>,
}

fn read_file(path: &Path) -> Result<FileConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("reading {}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {}", path.display(), e.message())))
}

impl Params {
    pub fn resolve(flags: Flags) -> Result<Self, CliError> {
        let file = match &flags.config {
            Some(p) => read_file(p)?,
            None => FileConfig::default(),
        };
        let order_cap = flags
            .order_cap
            .or(file.order_cap)
            .unwrap_or(charcom::group::DEFAULT_ORDER_CAP);
        if order_cap == 0 {
            return Err(CliError::Config("order_cap must be >= 1".into()));
        }
        let params = Params {
            group: flags.group.or(file.group),
            circuit: flags.circuit.or(file.circuit),
            seed: flags.seed.or(file.seed).unwrap_or(0),
            order_cap,
            threshold: flags.threshold.or(file.threshold),
            mode: flags.mode.or(file.mode),
            bins: flags.bins.or(file.bins),
            samples: flags.samples.or(file.samples),
            out_dir: flags.out_dir.or(file.out_dir).unwrap_or_else(|| PathBuf::from(".")),
            class: flags.class.or(file.class),
            state: flags.state.or(file.state),
            thresholds: text_list(flags.thresholds).or(file.thresholds),
            family: flags.family.or(file.family),
            gate_set: flags.gate_set.or(file.gate_set),
            max_level: flags.max_level.or(file.max_level),
            qubits: flags.qubits.or(file.qubits),
            gates: flags.gates.or(file.gates),
            qubit_values: text_list(flags.qubit_values).or(file.qubit_values),
            gate_counts: text_list(flags.gate_counts).or(file.gate_counts),
            source: flags.source.or(file.source),
        };
        if let Some(t) = params.threshold {
            if t.is_nan() || t < 0.0 {
                return Err(CliError::Config(format!("threshold must be >= 0, got {t}")));
            }
        }
        if params.bins == Some(0) {
            return Err(CliError::Config("bins must be >= 1".into()));
        }
        Ok(params)
    }

    /// `name` inside the output directory.
    pub fn out_path(&self, name: &str) -> PathBuf {
        self.out_dir.join(name)
    }
}
