use std::fs::File;
use std::io::BufReader;
use std::path::Path;

use charcom::catalog::{generators_from_json, named_generators};
use charcom::chartable::{character_table, CharacterTable};
use charcom::circuit::{circuit_group, compile_circuit, parse_gate_set, Circuit, GateKind};
use charcom::complexity::character_complexity;
use charcom::emit::{write_all, Dataset};
use charcom::experiments::{
    complexity_heatmap, complexity_histogram, hypersphere_cloud, scaling_curve, ComplexitySource, Family,
};
use charcom::fmt::sig12;
use charcom::group::{close_group, ClosureOptions, ElementId, FiniteGroup};
use charcom::matrix::{c, CMatrix};
use charcom::sim::{significant_set, truncation_csv, Decomposer, Mode, StateVector};
use serde_json::json;

use crate::config::Params;
use crate::{CliError, Context, ExperimentKind};

fn write(params: &Params, name: &str, contents: &str) -> Result<(), CliError> {
    let path = params.out_path(name);
    std::fs::write(&path, contents).map_err(|source| CliError::Io {
        op: format!("writing {}", path.display()),
        source,
    })
}

fn load_group(params: &Params, op: &'static str) -> Result<Option<FiniteGroup>, CliError> {
    let Some(spec) = &params.group else {
        return Ok(None);
    };
    let gens = if Path::new(spec).is_file() {
        let text = std::fs::read_to_string(spec).map_err(|source| CliError::Io {
            op: format!("reading {spec}"),
            source,
        })?;
        generators_from_json(&text).during(op)?
    } else {
        named_generators(spec).during(op)?
    };
    Ok(Some(close_group(&gens, ClosureOptions::with_cap(params.order_cap)).during(op)?))
}

fn require_group(params: &Params, op: &'static str) -> Result<FiniteGroup, CliError> {
    load_group(params, op)?.ok_or_else(|| CliError::Config(format!("{op} needs --group")))
}

fn load_circuit(path: &Path, op: &'static str) -> Result<Circuit, CliError> {
    let file = File::open(path).map_err(|source| CliError::Io {
        op: format!("reading {}", path.display()),
        source,
    })?;
    Circuit::read_jsonl(BufReader::new(file)).during(op)
}

/// The group to work in and the circuit element inside it: the given group
/// if any, otherwise the group generated by the circuit's own gates.
fn circuit_element(params: &Params, op: &'static str) -> Result<(FiniteGroup, ElementId, Circuit), CliError> {
    let path = params
        .circuit
        .as_ref()
        .ok_or_else(|| CliError::Config(format!("{op} needs --circuit")))?;
    let circuit = load_circuit(path, op)?;
    match load_group(params, op)? {
        Some(g) => {
            let u = compile_circuit(&circuit).during(op)?;
            let id = g.element_lookup(u.matrix()).during(op)?;
            Ok((g, id, circuit))
        }
        None => {
            let (g, id) = circuit_group(&circuit, params.order_cap).during(op)?;
            Ok((g, id, circuit))
        }
    }
}

pub fn group_info(params: &Params) -> Result<(), CliError> {
    let op = "group-info";
    let g = require_group(params, op)?;
    out!("order {}", g.order());
    out!("classes {}", g.class_count());
    out!("abelian {}", g.is_abelian());
    write(params, "group.json", &g.dump().to_json().during(op)?)
}

pub fn char_table(params: &Params) -> Result<(), CliError> {
    let op = "char-table";
    let g = require_group(params, op)?;
    let t = character_table(&g).during(op)?;
    let rep = t.verify_orthogonality();
    out!("irreps {}", t.len());
    out!("dims {:?}", t.dims());
    out!("row_residual {}", sig12(rep.max_row_residual));
    out!("col_residual {}", sig12(rep.max_col_residual));
    write(params, "char_table.csv", &t.to_csv())?;
    let report = json!({
        "max_row_residual": rep.max_row_residual,
        "max_col_residual": rep.max_col_residual,
        "passed": rep.passed,
    });
    write(params, "orthogonality.json", &pretty(&report))
}

fn pretty(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json value serialises");
    s.push('\n');
    s
}

pub fn complexity(params: &Params) -> Result<(), CliError> {
    let op = "complexity";
    let (g, u) = if params.circuit.is_some() {
        let (g, u, _) = circuit_element(params, op)?;
        (g, u)
    } else {
        let g = require_group(params, op)?;
        let cls = params.class.unwrap_or(0);
        let class = g.conjugacy_classes().get(cls).ok_or_else(|| CliError::Core {
            op,
            source: charcom::Error::DomainError(format!("class {cls} out of range ({} classes)", g.class_count())),
        })?;
        let rep = class[0];
        (g, rep)
    };
    let t = character_table(&g).during(op)?;
    let report = character_complexity(&g, &t, u);
    let text = report.to_json().during(op)? + "\n";
    out!("{}", text.trim_end());
    write(params, "complexity.json", &text)
}

fn parse_mode(params: &Params) -> Result<Mode, CliError> {
    match &params.mode {
        None => Ok(Mode::Isotypic),
        Some(m) => m.parse().map_err(|e: charcom::Error| CliError::Config(e.to_string())),
    }
}

fn parse_state(params: &Params, dim: usize) -> Result<StateVector, CliError> {
    let spec = params.state.as_deref().unwrap_or("zero");
    let bad = || CliError::Config(format!("state must be zero, random or basis:K, got {spec:?}"));
    match spec {
        "zero" => StateVector::basis(dim, 0).during("simulate"),
        "random" => Ok(StateVector::random(dim, params.seed)),
        _ => {
            let k = spec.strip_prefix("basis:").ok_or_else(bad)?;
            let k: usize = k.parse().map_err(|_| bad())?;
            StateVector::basis(dim, k).during("simulate")
        }
    }
}

const DEFAULT_THRESHOLDS: [f64; 8] = [0.0, 1e-3, 1e-2, 0.05, 0.1, 0.25, 0.5, 1.0];

pub fn simulate(params: &Params) -> Result<(), CliError> {
    let op = "simulate";
    let (g, u, _) = circuit_element(params, op)?;
    let t: CharacterTable = character_table(&g).during(op)?;
    let dec = Decomposer::new(&g, &t).during(op)?;
    let mode = parse_mode(params)?;
    let psi = parse_state(params, g.dim())?;
    let n = psi.qubits();
    let set = significant_set(&g, &t, u, n, params.threshold);

    let components = dec.decompose(u, mode).during(op)?;
    let approx = dec.approx_state(u, &psi, &set, mode).during(op)?;
    out!("group_order {}", g.order());
    out!("element {u}");
    out!("mode {mode}");
    out!("threshold {}", sig12(set.threshold));
    out!("significant {}/{}", set.len(), t.len());
    out!("decomposition_residual {}", sig12(components.residual));
    out!("l2_error {}", sig12(approx.l2_error));

    let mut thresholds = match &params.thresholds {
        Some(list) => list.items("thresholds")?,
        None => DEFAULT_THRESHOLDS.to_vec(),
    };
    thresholds.push(set.threshold);
    thresholds.sort_by(f64::total_cmp);
    thresholds.dedup();
    let rows = dec.truncation_study(u, &psi, &thresholds).during(op)?;
    write(params, "truncation.csv", &truncation_csv(&rows))?;

    // computational-basis projectors: the outcome distribution of U~|psi>
    let exact = g.element(u).matrix() * psi.amplitudes();
    let mut csv = String::from("observable,value,imag_residue,oracle,abs_error\n");
    for k in 0..g.dim() {
        let mut proj = CMatrix::zeros(g.dim(), g.dim());
        proj[(k, k)] = c(1.0, 0.0);
        let m = dec.simulate_measurement(u, &proj, &psi, &set, mode).during(op)?;
        let oracle = exact[k].norm_sqr();
        csv.push_str(&format!(
            "P{k},{},{},{},{}\n",
            sig12(m.value),
            sig12(m.imag_residue),
            sig12(oracle),
            sig12((m.value - oracle).abs())
        ));
    }
    write(params, "measurement.csv", &csv)?;

    let summary = json!({
        "group_order": g.order(),
        "element_index": u.0,
        "mode": mode.to_string(),
        "threshold": set.threshold,
        "significant_set": set.indices,
        "decomposition_residual": components.residual,
        "l2_error": approx.l2_error,
    });
    write(params, "decomposition.json", &pretty(&summary))
}

fn family(params: &Params) -> Result<Family, CliError> {
    let max_level = params.max_level.unwrap_or(1);
    match params.family.as_deref().unwrap_or("random") {
        "random" => {
            let set: Vec<GateKind> = parse_gate_set(params.gate_set.as_deref().unwrap_or("X,Z,CNOT"))
                .map_err(|e| CliError::Config(e.to_string()))?;
            Ok(Family::Random(set))
        }
        "qft" => Ok(Family::Qft { max_level }),
        "qaoa" => Ok(Family::Qaoa { max_level }),
        other => Err(CliError::Config(format!("family must be random, qft or qaoa, got {other:?}"))),
    }
}

fn list_or(params_list: &Option<crate::config::ListValue<usize>>, key: &str, default: &[usize]) -> Result<Vec<usize>, CliError> {
    match params_list {
        Some(l) => l.items(key),
        None => Ok(default.to_vec()),
    }
}

fn emit<T: Dataset>(params: &Params, data: &T, stem: &str) -> Result<(), CliError> {
    let paths = write_all(data, &params.out_dir, stem).during("experiment")?;
    for p in paths {
        out!("wrote {}", p.display());
    }
    Ok(())
}

pub fn experiment(params: &Params, kind: ExperimentKind) -> Result<(), CliError> {
    let op = "experiment";
    let cap = params.order_cap;
    let seed = params.seed;
    match kind {
        ExperimentKind::Hist => {
            let fam = family(params)?;
            let n = params.qubits.unwrap_or(2) as usize;
            let data = complexity_histogram(
                &fam,
                n,
                params.gates.unwrap_or(20),
                params.samples.unwrap_or(200),
                params.bins.unwrap_or(charcom::experiments::DEFAULT_BINS),
                seed,
                cap,
            )
            .during(op)?;
            emit(params, &data, "hist")
        }
        ExperimentKind::Heatmap => {
            let fam = family(params)?;
            let qubits = list_or(&params.qubit_values, "qubit_values", &[1, 2])?;
            let gates = list_or(&params.gate_counts, "gate_counts", &[0, 4, 8, 12, 16, 20])?;
            let data = complexity_heatmap(&qubits, &gates, &fam, params.samples.unwrap_or(20), seed, cap).during(op)?;
            for m in &data.missing {
                out!("missing n={}: {}", m.n, m.reason);
            }
            emit(params, &data, "heatmap")
        }
        ExperimentKind::Scaling => {
            let fam = family(params)?;
            let n = params.qubits.unwrap_or(2) as usize;
            let gates = list_or(&params.gate_counts, "gate_counts", &[0, 2, 4, 8, 16, 32])?;
            let data = scaling_curve(&fam, n, &gates, params.samples.unwrap_or(50), seed, cap).during(op)?;
            emit(params, &data, "scaling")
        }
        ExperimentKind::Cloud => {
            let source = match params.source.as_deref().unwrap_or("uniform01") {
                "uniform01" => ComplexitySource::Uniform01,
                "circuit" => ComplexitySource::Circuit {
                    family: family(params)?,
                    gate_count: params.gates.unwrap_or(20),
                    order_cap: cap,
                },
                other => {
                    return Err(CliError::Config(format!("source must be uniform01 or circuit, got {other:?}")))
                }
            };
            let default_n = if matches!(source, ComplexitySource::Uniform01) { 10 } else { 2 };
            let n = params.qubits.unwrap_or(default_n);
            let data = hypersphere_cloud(n, params.samples.unwrap_or(500), seed, &source).during(op)?;
            emit(params, &data, "cloud")
        }
    }
}
