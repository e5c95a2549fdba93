//! Seeded sampling pipelines: complexity histogram, qubit x gate heatmap,
//! gate-count scaling and the hypersphere point cloud.
//!
//! Every sample `s` of a cell `(n, m)` draws its circuit from the sub-seed
//! `sub_seed(seed, [n, m, s])`, so results do not depend on how samples are
//! scheduled across threads. Circuit complexities are taken in the host
//! group of the family's gate set at width `n`, closed once per width.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chartable::{character_table, CharacterTable};
use crate::circuit::{
    embed_gate, gate_set_generators, qaoa_circuit, qft_circuit, random_circuit, target_tuples, Circuit, FamilyTag,
    Gate, GateKind,
};
use crate::complexity::{complexity, hypersphere_radius, identity_complexity};
use crate::error::{Error, Result};
use crate::group::{close_group, ClosureOptions, ElementId, FiniteGroup};
use crate::rng::{sub_seed, SplitMix64};

pub const DEFAULT_BINS: usize = 30;

/// A circuit family together with the gate set its host group is built from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Family {
    Random(Vec<GateKind>),
    /// QFT blocks with the phase cap drawn from `1..=max_level`.
    Qft { max_level: u32 },
    /// Path-graph QAOA layers with levels drawn from `0..=max_level`.
    Qaoa { max_level: u32 },
}

impl Family {
    pub fn tag(&self) -> FamilyTag {
        match self {
            Family::Random(_) => FamilyTag::Random,
            Family::Qft { .. } => FamilyTag::Qft,
            Family::Qaoa { .. } => FamilyTag::Qaoa,
        }
    }

    /// Gates that can occur at width `n`.
    pub fn gate_set(&self, n: usize) -> Vec<GateKind> {
        match self {
            Family::Random(set) => set.clone(),
            Family::Qft { max_level } => {
                let mut set = vec![GateKind::H, GateKind::Swap];
                set.extend((2..=(*max_level).min(n as u32)).map(GateKind::CPhase));
                set
            }
            Family::Qaoa { max_level } => {
                let mut set = vec![GateKind::Cnot, GateKind::H];
                set.extend((0..=*max_level).map(GateKind::T));
                set
            }
        }
    }

    /// A circuit of exactly `m` gates. Structured families repeat freshly
    /// drawn blocks until `m` gates are available and cut the rest.
    pub fn sample(&self, n: usize, m: usize, seed: u64) -> Result<Circuit> {
        let mut c = match self {
            Family::Random(set) => return random_circuit(n, m, seed, set),
            Family::Qft { max_level } => {
                let mut rng = SplitMix64::new(seed);
                let mut c = Circuit::new(n, FamilyTag::Qft);
                while c.len() < m {
                    let k_cap = 1 + rng.below((*max_level).max(1) as usize) as u32;
                    c = c.concat(&qft_circuit(n, k_cap)?)?;
                }
                c
            }
            Family::Qaoa { max_level } => {
                let edges: Vec<(usize, usize)> = (1..n).map(|q| (q - 1, q)).collect();
                let per_layer = 3 * (edges.len() + n);
                let layers = m.div_ceil(per_layer);
                let mut rng = SplitMix64::new(seed);
                let levels = *max_level as usize + 1;
                let mut gammas = Vec::with_capacity(layers);
                let mut betas = Vec::with_capacity(layers);
                for _ in 0..layers {
                    gammas.push(rng.below(levels) as u32);
                    betas.push(rng.below(levels) as u32);
                }
                qaoa_circuit(n, layers, &edges, &gammas, &betas)?
            }
        };
        c = c.truncated(m);
        c.seed = Some(seed);
        Ok(c)
    }

    pub fn describe_gate_set(&self, n: usize) -> Vec<String> {
        self.gate_set(n).iter().map(|k| k.to_string()).collect()
    }
}

/// Host group of a family at one width, with every embedded gate located.
#[derive(Debug)]
pub struct HostGroup {
    pub n: usize,
    pub group: FiniteGroup,
    pub table: CharacterTable,
    gate_ids: HashMap<(GateKind, Vec<usize>), ElementId>,
}

impl HostGroup {
    pub fn new(family: &Family, n: usize, order_cap: usize) -> Result<Self> {
        let set = family.gate_set(n);
        let gens = gate_set_generators(&set, n)?;
        let group = close_group(&gens, ClosureOptions::with_cap(order_cap))?;
        let table = character_table(&group)?;
        let mut gate_ids = HashMap::new();
        for &kind in &set {
            for t in target_tuples(kind, n) {
                let m = embed_gate(kind, &t, n)?;
                gate_ids.insert((kind, t), group.element_lookup(m.matrix())?);
            }
        }
        Ok(Self {
            n,
            group,
            table,
            gate_ids,
        })
    }

    /// The element `U_m ... U_1` of a circuit built from the family's gates.
    pub fn element_of(&self, circuit: &Circuit) -> Result<ElementId> {
        if circuit.n() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: circuit.n(),
            });
        }
        let mut acc = self.group.identity();
        for Gate { kind, targets } in circuit.gates() {
            let id = self
                .gate_ids
                .get(&(*kind, targets.clone()))
                .ok_or(Error::ElementNotFound)?;
            acc = self.group.multiply(*id, acc);
        }
        Ok(acc)
    }

    pub fn complexity_of(&self, circuit: &Circuit) -> Result<f64> {
        Ok(complexity(&self.group, &self.table, self.element_of(circuit)?))
    }

    pub fn identity_complexity(&self) -> f64 {
        identity_complexity(&self.group, &self.table)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HostSummary {
    pub n: usize,
    pub order: usize,
    pub classes: usize,
    pub gate_set: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunMetadata {
    pub hosts: Vec<HostSummary>,
    pub complexity_source: String,
    pub scale_note: String,
}

fn host_summary(family: &Family, host: &HostGroup) -> HostSummary {
    HostSummary {
        n: host.n,
        order: host.group.order(),
        classes: host.group.class_count(),
        gate_set: family.describe_gate_set(host.n),
    }
}

fn scale_note(widths: &[usize]) -> String {
    let list: Vec<String> = widths.iter().map(|n| n.to_string()).collect();
    format!(
        "reduced scale: widths {{{}}} over finite host groups replace the 6-qubit circuits, whose host groups are not finite",
        list.join(",")
    )
}

const CIRCUIT_SOURCE: &str = "circuit: C of the sampled circuit in its host group";

fn sample_complexities(host: &HostGroup, family: &Family, m: usize, samples: usize, seed: u64) -> Result<Vec<f64>> {
    (0..samples)
        .into_par_iter()
        .map(|s| {
            let circuit = family.sample(host.n, m, sub_seed(seed, &[host.n as u64, m as u64, s as u64]))?;
            host.complexity_of(&circuit)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HistogramData {
    pub family: FamilyTag,
    pub n: usize,
    pub gate_count: usize,
    pub bin_edges: Vec<f64>,
    pub counts: Vec<usize>,
    pub sample_count: usize,
    pub seed: u64,
    pub metadata: RunMetadata,
}

pub fn bin_index(value: f64, bins: usize) -> usize {
    ((value * bins as f64).floor().max(0.0) as usize).min(bins - 1)
}

pub fn complexity_histogram(
    family: &Family,
    n: usize,
    gate_count: usize,
    sample_count: usize,
    bins: usize,
    seed: u64,
    order_cap: usize,
) -> Result<HistogramData> {
    if bins == 0 {
        return Err(Error::DomainError("complexity_histogram: bins must be >= 1".into()));
    }
    let host = HostGroup::new(family, n, order_cap)?;
    let values = sample_complexities(&host, family, gate_count, sample_count, seed)?;
    let mut counts = vec![0; bins];
    for v in values {
        counts[bin_index(v, bins)] += 1;
    }
    Ok(HistogramData {
        family: family.tag(),
        n,
        gate_count,
        bin_edges: (0..=bins).map(|i| i as f64 / bins as f64).collect(),
        counts,
        sample_count,
        seed,
        metadata: RunMetadata {
            hosts: vec![host_summary(family, &host)],
            complexity_source: CIRCUIT_SOURCE.into(),
            scale_note: scale_note(&[n]),
        },
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MissingWidth {
    pub n: usize,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HeatmapGrid {
    pub family: FamilyTag,
    pub qubit_values: Vec<usize>,
    pub gate_values: Vec<usize>,
    /// `cells[q][g]`, `None` where the host group did not close.
    pub cells: Vec<Vec<Option<f64>>>,
    pub samples_per_cell: usize,
    pub seed: u64,
    pub missing: Vec<MissingWidth>,
    pub metadata: RunMetadata,
}

pub fn complexity_heatmap(
    qubit_values: &[usize],
    gate_values: &[usize],
    family: &Family,
    samples_per_cell: usize,
    seed: u64,
    order_cap: usize,
) -> Result<HeatmapGrid> {
    let mut cells = Vec::with_capacity(qubit_values.len());
    let mut missing = Vec::new();
    let mut hosts = Vec::new();
    for &n in qubit_values {
        let host = match HostGroup::new(family, n, order_cap) {
            Ok(h) => h,
            Err(e @ Error::GroupNotClosed { .. }) => {
                missing.push(MissingWidth { n, reason: e.to_string() });
                cells.push(vec![None; gate_values.len()]);
                continue;
            }
            Err(e) => return Err(e),
        };
        let row = gate_values
            .iter()
            .map(|&m| {
                let values = sample_complexities(&host, family, m, samples_per_cell, seed)?;
                Ok(mean_and_stderr(&values).map(|(mean, _)| mean))
            })
            .collect::<Result<Vec<_>>>()?;
        cells.push(row);
        hosts.push(host_summary(family, &host));
    }
    Ok(HeatmapGrid {
        family: family.tag(),
        qubit_values: qubit_values.to_vec(),
        gate_values: gate_values.to_vec(),
        cells,
        samples_per_cell,
        seed,
        missing,
        metadata: RunMetadata {
            hosts,
            complexity_source: CIRCUIT_SOURCE.into(),
            scale_note: scale_note(qubit_values),
        },
    })
}

/// Mean and standard error of the mean. The mean is accumulated relative to
/// the first sample so constant samples give that value exactly.
pub fn mean_and_stderr(values: &[f64]) -> Option<(f64, f64)> {
    let (&first, _) = values.split_first()?;
    let count = values.len() as f64;
    let mean = first + values.iter().map(|v| v - first).sum::<f64>() / count;
    if values.len() < 2 {
        return Some((mean, 0.0));
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (count - 1.0);
    Some((mean, (var / count).sqrt()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingSeries {
    pub family: FamilyTag,
    pub n: usize,
    pub gate_counts: Vec<usize>,
    pub mean_complexity: Vec<f64>,
    pub stderr: Vec<f64>,
    pub samples_per_point: usize,
    pub seed: u64,
    pub metadata: RunMetadata,
}

pub fn scaling_curve(
    family: &Family,
    n: usize,
    gate_counts: &[usize],
    samples_per_point: usize,
    seed: u64,
    order_cap: usize,
) -> Result<ScalingSeries> {
    if samples_per_point == 0 {
        return Err(Error::DomainError("scaling_curve: samples_per_point must be >= 1".into()));
    }
    let host = HostGroup::new(family, n, order_cap)?;
    let mut counts = gate_counts.to_vec();
    counts.sort_unstable();
    counts.dedup();
    let mut means = Vec::with_capacity(counts.len());
    let mut errs = Vec::with_capacity(counts.len());
    for &m in &counts {
        let values = sample_complexities(&host, family, m, samples_per_point, seed)?;
        let (mean, err) = mean_and_stderr(&values).expect("at least one sample");
        means.push(mean);
        errs.push(err);
    }
    Ok(ScalingSeries {
        family: family.tag(),
        n,
        gate_counts: counts,
        mean_complexity: means,
        stderr: errs,
        samples_per_point,
        seed,
        metadata: RunMetadata {
            hosts: vec![host_summary(family, &host)],
            complexity_source: CIRCUIT_SOURCE.into(),
            scale_note: scale_note(&[n]),
        },
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ComplexitySource {
    /// Complexities drawn uniformly from `[0, 1)`.
    Uniform01,
    /// Complexity of an `m`-gate circuit of the family on the same width.
    Circuit { family: Family, gate_count: usize, order_cap: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CloudPoint {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub radius: f64,
    pub complexity: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HypersphereCloud {
    pub n: u32,
    pub points: Vec<CloudPoint>,
    pub projection_seed: u64,
    pub metadata: RunMetadata,
}

fn unit_direction(rng: &mut SplitMix64) -> [f64; 3] {
    loop {
        let v = [rng.normal(), rng.normal(), rng.normal()];
        let norm = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if norm > 1e-6 {
            return [v[0] / norm, v[1] / norm, v[2] / norm];
        }
    }
}

pub fn hypersphere_cloud(
    n: u32,
    sample_count: usize,
    seed: u64,
    source: &ComplexitySource,
) -> Result<HypersphereCloud> {
    if n == 0 {
        return Err(Error::DomainError("hypersphere_cloud: n must be >= 1".into()));
    }
    let (complexities, metadata) = match source {
        ComplexitySource::Uniform01 => {
            let values = (0..sample_count)
                .map(|i| SplitMix64::new(sub_seed(seed, &[n as u64, i as u64, 0])).next_f64())
                .collect();
            let meta = RunMetadata {
                hosts: Vec::new(),
                complexity_source: "uniform01: complexities drawn uniformly from [0,1)".into(),
                scale_note: String::new(),
            };
            (values, meta)
        }
        ComplexitySource::Circuit {
            family,
            gate_count,
            order_cap,
        } => {
            let host = HostGroup::new(family, n as usize, *order_cap)?;
            let values = sample_complexities(&host, family, *gate_count, sample_count, seed)?;
            let meta = RunMetadata {
                hosts: vec![host_summary(family, &host)],
                complexity_source: "circuit: a state takes the complexity of its sampled preparing circuit".into(),
                scale_note: scale_note(&[n as usize]),
            };
            (values, meta)
        }
    };
    let points = complexities
        .into_par_iter()
        .enumerate()
        .map(|(i, c)| {
            let radius = hypersphere_radius(n, c)?;
            let mut rng = SplitMix64::new(sub_seed(seed, &[n as u64, i as u64, 1]));
            let [x, y, z] = unit_direction(&mut rng);
            Ok(CloudPoint {
                x: x * radius,
                y: y * radius,
                z: z * radius,
                radius,
                complexity: c,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(HypersphereCloud {
        n,
        points,
        projection_seed: seed,
        metadata,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{circuit_group, compile_circuit};
    use crate::group::DEFAULT_ORDER_CAP;

    fn xz() -> Family {
        Family::Random(vec![GateKind::X, GateKind::Z])
    }

    #[test]
    fn sampled_circuits_have_exact_length() {
        for fam in [xz(), Family::Qft { max_level: 1 }, Family::Qaoa { max_level: 1 }] {
            for m in [0, 1, 5, 17] {
                assert_eq!(fam.sample(2, m, 3).unwrap().len(), m);
            }
        }
    }

    #[test]
    fn cayley_fold_matches_compiled_unitary() {
        let fam = Family::Qaoa { max_level: 1 };
        let host = HostGroup::new(&fam, 2, DEFAULT_ORDER_CAP).unwrap();
        for seed in 0..10 {
            let c = fam.sample(2, 13, seed).unwrap();
            let id = host.element_of(&c).unwrap();
            let u = compile_circuit(&c).unwrap();
            assert!(host.group.element(id).distance(&u) < 1e-9);
        }
    }

    #[test]
    fn host_complexity_differs_from_circuit_group_only_through_host() {
        let fam = xz();
        let host = HostGroup::new(&fam, 1, DEFAULT_ORDER_CAP).unwrap();
        let c = fam.sample(1, 6, 11).unwrap();
        let (g, _) = circuit_group(&c, DEFAULT_ORDER_CAP).unwrap();
        assert!(g.order() <= host.group.order());
    }

    #[test]
    fn empty_histogram() {
        let h = complexity_histogram(&xz(), 1, 4, 0, 10, 1, DEFAULT_ORDER_CAP).unwrap();
        assert!(h.counts.iter().all(|&c| c == 0));
        assert_eq!(h.bin_edges.len(), 11);
    }

    #[test]
    fn bins_clamp_at_one() {
        assert_eq!(bin_index(1.0, 30), 29);
        assert_eq!(bin_index(0.0, 30), 0);
        assert_eq!(bin_index(0.5, 30), 15);
    }

    #[test]
    fn stderr_of_constant_samples_is_zero() {
        assert_eq!(mean_and_stderr(&[0.1; 7]), Some((0.1, 0.0)));
        assert_eq!(mean_and_stderr(&[]), None);
        let (m, e) = mean_and_stderr(&[0.0, 1.0]).unwrap();
        assert_eq!(m, 0.5);
        assert!((e - 0.5).abs() < 1e-15);
    }

    #[test]
    fn unclosable_width_is_missing() {
        let fam = Family::Qft { max_level: 2 };
        let grid = complexity_heatmap(&[1, 2], &[0, 3], &fam, 2, 5, DEFAULT_ORDER_CAP).unwrap();
        assert!(grid.cells[0].iter().all(Option::is_some));
        assert!(grid.cells[1].iter().all(Option::is_none));
        assert_eq!(grid.missing.len(), 1);
        assert_eq!(grid.missing[0].n, 2);
    }
}
