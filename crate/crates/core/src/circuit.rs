//! Gates, circuits, the three circuit families and their host groups.
//!
//! Qubit 0 is the most significant tensor factor: basis index
//! `|q0 q1 ... q(n-1)>` has `q0` as its highest bit. A compiled circuit is
//! `U = U_m ... U_2 U_1`, the first gate acting first.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{close_group, ClosureOptions, ElementId, FiniteGroup};
use crate::matrix::{c, CMatrix, CVector, UnitaryMatrix, C64};
use crate::rng::SplitMix64;

/// Widest circuit that is compiled to a dense matrix.
pub const MAX_DENSE_QUBITS: usize = 12;

/// `exp(2 pi i / 2^k)`, exact for k <= 3.
pub fn root_of_unity(k: u32) -> C64 {
    match k {
        0 => c(1.0, 0.0),
        1 => c(-1.0, 0.0),
        2 => c(0.0, 1.0),
        3 => c(FRAC_1_SQRT_2, FRAC_1_SQRT_2),
        _ => {
            let theta = std::f64::consts::TAU / (1u64 << k.min(62)) as f64;
            c(theta.cos(), theta.sin())
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GateKind {
    I,
    X,
    Y,
    Z,
    H,
    S,
    /// `diag(1, exp(2 pi i / 2^k))`
    T(u32),
    Cnot,
    Cz,
    Swap,
    /// Controlled `diag(1, exp(2 pi i / 2^k))`
    CPhase(u32),
}

impl GateKind {
    pub fn arity(self) -> usize {
        match self {
            GateKind::Cnot | GateKind::Cz | GateKind::Swap | GateKind::CPhase(_) => 2,
            _ => 1,
        }
    }

    /// Base name used in circuit files; the phase level travels separately.
    pub fn name(self) -> &'static str {
        match self {
            GateKind::I => "I",
            GateKind::X => "X",
            GateKind::Y => "Y",
            GateKind::Z => "Z",
            GateKind::H => "H",
            GateKind::S => "S",
            GateKind::T(_) => "T",
            GateKind::Cnot => "CNOT",
            GateKind::Cz => "CZ",
            GateKind::Swap => "SWAP",
            GateKind::CPhase(_) => "CPHASE",
        }
    }

    pub fn level(self) -> Option<u32> {
        match self {
            GateKind::T(k) | GateKind::CPhase(k) => Some(k),
            _ => None,
        }
    }

    pub fn from_parts(name: &str, k: Option<u32>) -> Result<Self> {
        let upper = name.to_ascii_uppercase();
        let need_k = || k.ok_or_else(|| Error::InvalidGate(format!("{name} needs a phase level k")));
        Ok(match upper.as_str() {
            "I" => GateKind::I,
            "X" => GateKind::X,
            "Y" => GateKind::Y,
            "Z" => GateKind::Z,
            "H" => GateKind::H,
            "S" => GateKind::S,
            "T" => GateKind::T(need_k()?),
            "CNOT" | "CX" => GateKind::Cnot,
            "CZ" => GateKind::Cz,
            "SWAP" => GateKind::Swap,
            "CPHASE" => GateKind::CPhase(need_k()?),
            _ => return Err(Error::InvalidGate(format!("unknown gate {name}"))),
        })
    }

    /// Local matrix; for two-qubit gates `targets[0]` is the high bit
    /// (the control of CNOT / CPHASE).
    pub fn matrix(self) -> CMatrix {
        let z = c(0.0, 0.0);
        let o = c(1.0, 0.0);
        let h = c(FRAC_1_SQRT_2, 0.0);
        match self {
            GateKind::I => CMatrix::identity(2, 2),
            GateKind::X => CMatrix::from_row_slice(2, 2, &[z, o, o, z]),
            GateKind::Y => CMatrix::from_row_slice(2, 2, &[z, c(0.0, -1.0), c(0.0, 1.0), z]),
            GateKind::Z => CMatrix::from_row_slice(2, 2, &[o, z, z, -o]),
            GateKind::H => CMatrix::from_row_slice(2, 2, &[h, h, h, -h]),
            GateKind::S => CMatrix::from_row_slice(2, 2, &[o, z, z, c(0.0, 1.0)]),
            GateKind::T(k) => CMatrix::from_row_slice(2, 2, &[o, z, z, root_of_unity(k)]),
            GateKind::Cnot => {
                CMatrix::from_row_slice(4, 4, &[o, z, z, z, z, o, z, z, z, z, z, o, z, z, o, z])
            }
            GateKind::Cz => CMatrix::from_diagonal(&CVector::from_vec(vec![o, o, o, -o])),
            GateKind::Swap => {
                CMatrix::from_row_slice(4, 4, &[o, z, z, z, z, z, o, z, z, o, z, z, z, z, z, o])
            }
            GateKind::CPhase(k) => CMatrix::from_diagonal(&CVector::from_vec(vec![o, o, o, root_of_unity(k)])),
        }
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.level() {
            Some(k) => write!(f, "{}{}", self.name(), k),
            None => f.write_str(self.name()),
        }
    }
}

impl FromStr for GateKind {
    type Err = Error;

    /// Accepts `X`, `CNOT`, `T3`, `T_3`, `CPHASE2`, ...
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let split = s.find(|ch: char| ch.is_ascii_digit()).unwrap_or(s.len());
        let (base, digits) = s.split_at(split);
        let base = base.trim_end_matches('_');
        let k = if digits.is_empty() {
            None
        } else {
            Some(
                digits
                    .parse::<u32>()
                    .map_err(|_| Error::InvalidGate(format!("bad phase level in {s}")))?,
            )
        };
        if k.is_some() && !matches!(base.to_ascii_uppercase().as_str(), "T" | "CPHASE") {
            return Err(Error::InvalidGate(format!("unknown gate {s}")));
        }
        GateKind::from_parts(base, k)
    }
}

/// Parses a comma separated gate set such as `"H,S,CNOT"`.
pub fn parse_gate_set(s: &str) -> Result<Vec<GateKind>> {
    let set: Vec<GateKind> = s
        .split(',')
        .filter(|p| !p.trim().is_empty())
        .map(str::parse)
        .collect::<Result<_>>()?;
    if set.is_empty() {
        return Err(Error::InvalidGate("empty gate set".into()));
    }
    Ok(set)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gate {
    pub kind: GateKind,
    pub targets: Vec<usize>,
}

impl Gate {
    pub fn new(kind: GateKind, targets: &[usize]) -> Self {
        Self {
            kind,
            targets: targets.to_vec(),
        }
    }

    fn validate(&self, n: usize) -> Result<()> {
        if self.targets.len() != self.kind.arity() {
            return Err(Error::InvalidGate(format!(
                "{} takes {} targets, got {}",
                self.kind,
                self.kind.arity(),
                self.targets.len()
            )));
        }
        if let Some(&q) = self.targets.iter().find(|&&q| q >= n) {
            return Err(Error::InvalidGate(format!("target {q} outside {n} qubits")));
        }
        if self.targets.len() == 2 && self.targets[0] == self.targets[1] {
            return Err(Error::InvalidGate("repeated target".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyTag {
    Random,
    Qft,
    Qaoa,
    Custom,
}

impl FromStr for FamilyTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "random" => Ok(FamilyTag::Random),
            "qft" => Ok(FamilyTag::Qft),
            "qaoa" => Ok(FamilyTag::Qaoa),
            "custom" => Ok(FamilyTag::Custom),
            _ => Err(Error::Parse(format!("unknown circuit family {s}"))),
        }
    }
}

impl fmt::Display for FamilyTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FamilyTag::Random => "random",
            FamilyTag::Qft => "qft",
            FamilyTag::Qaoa => "qaoa",
            FamilyTag::Custom => "custom",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circuit {
    n: usize,
    gates: Vec<Gate>,
    pub family_tag: FamilyTag,
    pub seed: Option<u64>,
}

impl Circuit {
    pub fn new(n: usize, family_tag: FamilyTag) -> Self {
        Self {
            n,
            gates: Vec::new(),
            family_tag,
            seed: None,
        }
    }

    pub fn push(&mut self, kind: GateKind, targets: &[usize]) -> Result<&mut Self> {
        let gate = Gate::new(kind, targets);
        gate.validate(self.n)?;
        self.gates.push(gate);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// `self` followed by `other`.
    pub fn concat(&self, other: &Circuit) -> Result<Circuit> {
        if other.n != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        let mut out = self.clone();
        out.gates.extend(other.gates.iter().cloned());
        out.family_tag = FamilyTag::Custom;
        Ok(out)
    }

    /// First `m` gates (all of them when `m >= len`).
    pub fn truncated(&self, m: usize) -> Circuit {
        let mut out = self.clone();
        out.gates.truncate(m);
        out
    }

    pub fn write_jsonl<W: Write>(&self, mut w: W) -> Result<()> {
        let header = CircuitHeader {
            n: self.n,
            family_tag: self.family_tag,
            seed: self.seed,
        };
        writeln!(w, "{}", serde_json::to_string(&header)?)?;
        for g in &self.gates {
            let line = GateLine {
                name: g.kind.name().to_string(),
                targets: g.targets.clone(),
                k: g.kind.level(),
            };
            writeln!(w, "{}", serde_json::to_string(&line)?)?;
        }
        Ok(())
    }

    pub fn to_jsonl(&self) -> String {
        let mut buf = Vec::new();
        self.write_jsonl(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("JSON is UTF-8")
    }

    pub fn read_jsonl<R: BufRead>(r: R) -> Result<Circuit> {
        let mut lines = r.lines().filter(|l| l.as_ref().map_or(true, |s| !s.trim().is_empty()));
        let header: CircuitHeader = match lines.next() {
            Some(line) => serde_json::from_str(&line?)?,
            None => return Err(Error::Parse("circuit file is empty".into())),
        };
        let mut circuit = Circuit::new(header.n, header.family_tag);
        circuit.seed = header.seed;
        for line in lines {
            let g: GateLine = serde_json::from_str(&line?)?;
            circuit.push(GateKind::from_parts(&g.name, g.k)?, &g.targets)?;
        }
        Ok(circuit)
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CircuitHeader {
    n: usize,
    family_tag: FamilyTag,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GateLine {
    name: String,
    targets: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    k: Option<u32>,
}

/// Applies one gate in place to a state of `n` qubits.
pub fn apply_gate(gate: &Gate, n: usize, state: &mut [C64]) {
    let m = gate.kind.matrix();
    match gate.targets.as_slice() {
        [q] => {
            let stride = 1usize << (n - 1 - q);
            for base in 0..state.len() {
                if base & stride != 0 {
                    continue;
                }
                let (a0, a1) = (state[base], state[base | stride]);
                state[base] = m[(0, 0)] * a0 + m[(0, 1)] * a1;
                state[base | stride] = m[(1, 0)] * a0 + m[(1, 1)] * a1;
            }
        }
        [qa, qb] => {
            let sa = 1usize << (n - 1 - qa);
            let sb = 1usize << (n - 1 - qb);
            for base in 0..state.len() {
                if base & (sa | sb) != 0 {
                    continue;
                }
                let idx = [base, base | sb, base | sa, base | sa | sb];
                let amp = idx.map(|i| state[i]);
                for (r, &i) in idx.iter().enumerate() {
                    state[i] = (0..4).map(|col| m[(r, col)] * amp[col]).sum();
                }
            }
        }
        _ => unreachable!("gates are validated on insertion"),
    }
}

/// Dense unitary of a circuit.
pub fn compile_circuit(circuit: &Circuit) -> Result<UnitaryMatrix> {
    let n = circuit.n;
    if n > MAX_DENSE_QUBITS {
        return Err(Error::WidthExceeded {
            n,
            max: MAX_DENSE_QUBITS,
        });
    }
    let dim = 1usize << n;
    let mut u = CMatrix::identity(dim, dim);
    for col in u.as_mut_slice().chunks_mut(dim) {
        for g in &circuit.gates {
            apply_gate(g, n, col);
        }
    }
    Ok(UnitaryMatrix::from_trusted(u))
}

/// A single gate embedded in the `2^n` space.
pub fn embed_gate(kind: GateKind, targets: &[usize], n: usize) -> Result<UnitaryMatrix> {
    let mut c = Circuit::new(n, FamilyTag::Custom);
    c.push(kind, targets)?;
    compile_circuit(&c)
}

/// Every ordered target tuple a gate kind can act on in `n` qubits, in
/// lexicographic order.
pub fn target_tuples(kind: GateKind, n: usize) -> Vec<Vec<usize>> {
    match kind.arity() {
        1 => (0..n).map(|q| vec![q]).collect(),
        _ => (0..n)
            .flat_map(|a| (0..n).filter(move |&b| b != a).map(move |b| vec![a, b]))
            .collect(),
    }
}

/// QFT on `n` qubits with every `CPHASE_k`, `k > k_cap`, omitted.
pub fn qft_circuit(n: usize, k_cap: u32) -> Result<Circuit> {
    if n == 0 {
        return Err(Error::DomainError("qft_circuit: n must be >= 1".into()));
    }
    let mut c = Circuit::new(n, FamilyTag::Qft);
    for j in 0..n {
        c.push(GateKind::H, &[j])?;
        for m in j + 1..n {
            let k = (m - j + 1) as u32;
            if k <= k_cap {
                c.push(GateKind::CPhase(k), &[m, j])?;
            }
        }
    }
    for i in 0..n / 2 {
        c.push(GateKind::Swap, &[i, n - 1 - i])?;
    }
    Ok(c)
}

/// QAOA with discretised angles: layer `l` uses cost phase
/// `2 pi / 2^gamma_levels[l]` and mixer phase `2 pi / 2^beta_levels[l]`
/// (level 0 is the zero angle).
pub fn qaoa_circuit(
    n: usize,
    layers: usize,
    edges: &[(usize, usize)],
    gamma_levels: &[u32],
    beta_levels: &[u32],
) -> Result<Circuit> {
    if let Some(&(a, b)) = edges.iter().find(|&&(a, b)| a == b || a >= n || b >= n) {
        return Err(Error::InvalidEdge(a, b));
    }
    if gamma_levels.len() < layers || beta_levels.len() < layers {
        return Err(Error::DomainError(format!(
            "qaoa_circuit: {layers} layers need {layers} gamma and beta levels"
        )));
    }
    let mut c = Circuit::new(n, FamilyTag::Qaoa);
    for l in 0..layers {
        for &(a, b) in edges {
            c.push(GateKind::Cnot, &[a, b])?;
            c.push(GateKind::T(gamma_levels[l]), &[b])?;
            c.push(GateKind::Cnot, &[a, b])?;
        }
        for q in 0..n {
            c.push(GateKind::H, &[q])?;
            c.push(GateKind::T(beta_levels[l]), &[q])?;
            c.push(GateKind::H, &[q])?;
        }
    }
    Ok(c)
}

/// `m` gates drawn i.i.d.: a gate kind uniformly among those that fit in
/// `n` qubits, then a target tuple uniformly among its valid tuples.
pub fn random_circuit(n: usize, m: usize, seed: u64, gate_set: &[GateKind]) -> Result<Circuit> {
    if gate_set.is_empty() {
        return Err(Error::InvalidGate("empty gate set".into()));
    }
    let usable: Vec<(GateKind, Vec<Vec<usize>>)> = gate_set
        .iter()
        .map(|&k| (k, target_tuples(k, n)))
        .filter(|(_, t)| !t.is_empty())
        .collect();
    let mut c = Circuit::new(n, FamilyTag::Random);
    c.seed = Some(seed);
    if m == 0 {
        return Ok(c);
    }
    if usable.is_empty() {
        return Err(Error::InvalidGate(format!("no gate in the set fits {n} qubits")));
    }
    let mut rng = SplitMix64::new(seed);
    for _ in 0..m {
        let (kind, tuples) = &usable[rng.below(usable.len())];
        let targets = &tuples[rng.below(tuples.len())];
        c.push(*kind, targets)?;
    }
    Ok(c)
}

/// Generators of the host group of a gate set at width `n`: every gate
/// embedded on every valid target tuple.
pub fn gate_set_generators(gate_set: &[GateKind], n: usize) -> Result<Vec<UnitaryMatrix>> {
    let mut out = Vec::new();
    for &kind in gate_set {
        for t in target_tuples(kind, n) {
            out.push(embed_gate(kind, &t, n)?);
        }
    }
    if out.is_empty() {
        out.push(UnitaryMatrix::identity(1 << n));
    }
    Ok(out)
}

/// Closes the group generated by the distinct embedded gates of `circuit`
/// and locates the compiled circuit in it.
pub fn circuit_group(circuit: &Circuit, order_cap: usize) -> Result<(FiniteGroup, ElementId)> {
    let unitary = compile_circuit(circuit)?;
    let mut gens: Vec<UnitaryMatrix> = Vec::new();
    for g in &circuit.gates {
        let m = embed_gate(g.kind, &g.targets, circuit.n)?;
        if !gens.iter().any(|h| h.distance(&m) < crate::group::ELEMENT_TOL) {
            gens.push(m);
        }
    }
    if gens.is_empty() {
        gens.push(UnitaryMatrix::identity(1 << circuit.n));
    }
    let group = close_group(&gens, ClosureOptions::with_cap(order_cap))?;
    let id = group.element_lookup(unitary.matrix())?;
    Ok((group, id))
}
