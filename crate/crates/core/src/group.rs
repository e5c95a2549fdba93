//! Finite groups of unitary matrices closed from quantum gates.
//!
//! Elements are numbered in breadth-first discovery order with the identity
//! at index 0. Two matrices are the same element when their Frobenius
//! distance is below [`ELEMENT_TOL`]; candidates are bucketed by a
//! fingerprint of their entries rounded to six decimals.

use std::collections::hash_map::DefaultHasher;
use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};

use serde::{Deserialize, Serialize};
use serde_json::value::RawValue;

use crate::error::{Error, Result};
use crate::matrix::{frobenius_distance, CMatrix, UnitaryMatrix, C64};

pub const ELEMENT_TOL: f64 = 1e-9;
pub const DEFAULT_ORDER_CAP: usize = 20_000;

/// Byte budget for the `|G| x |G|` multiplication table.
pub const CAYLEY_BUDGET_BYTES: usize = 1 << 31;

const FINGERPRINT_SCALE: f64 = 1e6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ElementId(pub usize);

impl ElementId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for ElementId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ClosureOptions {
    pub order_cap: usize,
    /// Quotient by the scalar subgroup: matrices are compared up to a global
    /// phase and stored in a phase-normalised form.
    pub projective: bool,
}

impl Default for ClosureOptions {
    fn default() -> Self {
        Self {
            order_cap: DEFAULT_ORDER_CAP,
            projective: false,
        }
    }
}

impl ClosureOptions {
    pub fn with_cap(order_cap: usize) -> Self {
        Self {
            order_cap,
            ..Self::default()
        }
    }
}

fn fingerprint(m: &CMatrix) -> u64 {
    let mut h = DefaultHasher::new();
    for z in m.iter() {
        ((z.re * FINGERPRINT_SCALE).round() as i64).hash(&mut h);
        ((z.im * FINGERPRINT_SCALE).round() as i64).hash(&mut h);
    }
    h.finish()
}

/// Rotates the global phase so the first entry (column-major) of
/// non-negligible magnitude is real and positive.
fn phase_normalised(m: CMatrix) -> CMatrix {
    match m.iter().find(|z| z.norm() > 1e-6) {
        Some(&z) => {
            let phase = z.conj() / z.norm();
            m * phase
        }
        None => m,
    }
}

#[derive(Debug, Clone, Default)]
struct FingerprintIndex {
    buckets: HashMap<u64, Vec<u32>>,
}

impl FingerprintIndex {
    fn find(&self, m: &CMatrix, elements: &[UnitaryMatrix]) -> Option<usize> {
        self.buckets.get(&fingerprint(m)).and_then(|ids| {
            ids.iter()
                .map(|&i| i as usize)
                .find(|&i| frobenius_distance(elements[i].matrix(), m) < ELEMENT_TOL)
        })
    }

    fn insert(&mut self, m: &CMatrix, id: usize) {
        self.buckets.entry(fingerprint(m)).or_default().push(id as u32);
    }
}

/// A finite group realised by unitary matrices, with its multiplication
/// table, inverses and conjugacy classes.
///
/// Immutable once built; share freely across threads.
#[derive(Debug, Clone)]
pub struct FiniteGroup {
    dim: usize,
    elements: Vec<UnitaryMatrix>,
    cayley: Vec<u32>,
    inverses: Vec<ElementId>,
    classes: Vec<Vec<ElementId>>,
    class_of: Vec<usize>,
    generators: Vec<UnitaryMatrix>,
    index: FingerprintIndex,
    projective: bool,
    /// False when distinct elements may share a matrix (abstract direct
    /// products whose factors both contain scalars).
    faithful: bool,
}

/// Closes `generators` under multiplication by breadth-first search.
pub fn close_group(generators: &[UnitaryMatrix], opts: ClosureOptions) -> Result<FiniteGroup> {
    if opts.order_cap == 0 {
        return Err(Error::DomainError("close_group: order_cap must be >= 1".into()));
    }
    let dim = generators
        .first()
        .ok_or_else(|| Error::DomainError("close_group: no generators".into()))?
        .dim();
    for (index, g) in generators.iter().enumerate() {
        if g.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: g.dim(),
            });
        }
        let residual = crate::matrix::unitarity_residual(g.matrix());
        if residual >= crate::matrix::UNITARY_TOL {
            return Err(Error::NotUnitary { index, residual });
        }
    }

    let normalise = |m: CMatrix| if opts.projective { phase_normalised(m) } else { m };

    // Distinct generators in order of first appearance.
    let mut gens: Vec<UnitaryMatrix> = Vec::new();
    for g in generators {
        let m = normalise(g.matrix().clone());
        if !gens.iter().any(|h| frobenius_distance(h.matrix(), &m) < ELEMENT_TOL) {
            gens.push(UnitaryMatrix::from_trusted(m));
        }
    }

    let mut elements = vec![UnitaryMatrix::identity(dim)];
    let mut index = FingerprintIndex::default();
    index.insert(elements[0].matrix(), 0);
    // right[x * s + j] = x * g_j ; parent/gen_of record the BFS tree
    let ns = gens.len();
    let mut right: Vec<u32> = Vec::new();
    let mut parent = vec![0usize];
    let mut gen_of = vec![0usize];

    let mut x = 0;
    while x < elements.len() {
        for (s, g) in gens.iter().enumerate() {
            let prod = normalise(elements[x].matrix() * g.matrix());
            let id = match index.find(&prod, &elements) {
                Some(id) => id,
                None => {
                    let id = elements.len();
                    if id + 1 > opts.order_cap {
                        return Err(Error::GroupNotClosed { cap: opts.order_cap });
                    }
                    index.insert(&prod, id);
                    elements.push(UnitaryMatrix::from_trusted(prod));
                    parent.push(x);
                    gen_of.push(s);
                    id
                }
            };
            right.push(id as u32);
        }
        x += 1;
    }

    let order = elements.len();
    check_cayley_budget(order)?;
    let mut cayley = vec![0u32; order * order];
    for a in 0..order {
        let row = &mut cayley[a * order..(a + 1) * order];
        row[0] = a as u32;
        for b in 1..order {
            let ap = row[parent[b]] as usize;
            row[b] = right[ap * ns + gen_of[b]];
        }
    }

    Ok(FiniteGroup::assemble(
        dim,
        elements,
        cayley,
        gens,
        index,
        opts.projective,
        true,
    ))
}

fn check_cayley_budget(order: usize) -> Result<()> {
    let required = order.saturating_mul(order).saturating_mul(4);
    if required > CAYLEY_BUDGET_BYTES {
        return Err(Error::MemoryBudgetExceeded {
            op: "close_group",
            required,
            budget: CAYLEY_BUDGET_BYTES,
        });
    }
    Ok(())
}

/// The abstract direct product `G1 x G2`, realised by Kronecker products.
///
/// Element `(a, b)` gets id `a * |G2| + b`. The realisation need not be
/// faithful: `(zI) x (z^-1 I)` maps to the identity matrix whenever both
/// factors contain the scalar `z`.
pub fn direct_product(g1: &FiniteGroup, g2: &FiniteGroup, order_cap: usize) -> Result<FiniteGroup> {
    let n1 = g1.order();
    let n2 = g2.order();
    let order = n1 * n2;
    if order > order_cap {
        return Err(Error::GroupNotClosed { cap: order_cap });
    }
    check_cayley_budget(order)?;
    let mut elements = Vec::with_capacity(order);
    for a in &g1.elements {
        for b in &g2.elements {
            elements.push(a.kron(b));
        }
    }
    let mut cayley = vec![0u32; order * order];
    for a1 in 0..n1 {
        for a2 in 0..n2 {
            let row = (a1 * n2 + a2) * order;
            for b1 in 0..n1 {
                let p1 = g1.cayley[a1 * n1 + b1] as usize;
                for b2 in 0..n2 {
                    let p2 = g2.cayley[a2 * n2 + b2] as usize;
                    cayley[row + b1 * n2 + b2] = (p1 * n2 + p2) as u32;
                }
            }
        }
    }
    let mut index = FingerprintIndex::default();
    let mut faithful = true;
    for (id, m) in elements.iter().enumerate() {
        if index.find(m.matrix(), &elements[..id]).is_some() {
            faithful = false;
        } else {
            index.insert(m.matrix(), id);
        }
    }
    let mut gens = Vec::new();
    let id1 = UnitaryMatrix::identity(g1.dim);
    let id2 = UnitaryMatrix::identity(g2.dim);
    gens.extend(g1.generators.iter().map(|g| g.kron(&id2)));
    gens.extend(g2.generators.iter().map(|g| id1.kron(g)));

    Ok(FiniteGroup::assemble(
        g1.dim * g2.dim,
        elements,
        cayley,
        gens,
        index,
        g1.projective || g2.projective,
        faithful,
    ))
}

impl FiniteGroup {
    fn assemble(
        dim: usize,
        elements: Vec<UnitaryMatrix>,
        cayley: Vec<u32>,
        generators: Vec<UnitaryMatrix>,
        index: FingerprintIndex,
        projective: bool,
        faithful: bool,
    ) -> Self {
        let order = elements.len();
        let inverses = (0..order)
            .map(|a| {
                let row = &cayley[a * order..(a + 1) * order];
                ElementId(row.iter().position(|&p| p == 0).expect("group has inverses"))
            })
            .collect::<Vec<_>>();

        let mut class_of = vec![usize::MAX; order];
        let mut classes: Vec<Vec<ElementId>> = Vec::new();
        for a in 0..order {
            if class_of[a] != usize::MAX {
                continue;
            }
            let k = classes.len();
            let mut members = Vec::new();
            for h in 0..order {
                let ha = cayley[h * order + a] as usize;
                let conj = cayley[ha * order + inverses[h].0] as usize;
                if class_of[conj] == usize::MAX {
                    class_of[conj] = k;
                    members.push(ElementId(conj));
                }
            }
            members.sort();
            classes.push(members);
        }

        Self {
            dim,
            elements,
            cayley,
            inverses,
            classes,
            class_of,
            generators,
            index,
            projective,
            faithful,
        }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn identity(&self) -> ElementId {
        ElementId(0)
    }

    pub fn ids(&self) -> impl ExactSizeIterator<Item = ElementId> {
        (0..self.order()).map(ElementId)
    }

    pub fn element(&self, id: ElementId) -> &UnitaryMatrix {
        &self.elements[id.0]
    }

    pub fn elements(&self) -> &[UnitaryMatrix] {
        &self.elements
    }

    pub fn generators(&self) -> &[UnitaryMatrix] {
        &self.generators
    }

    pub fn is_projective(&self) -> bool {
        self.projective
    }

    pub fn is_faithful(&self) -> bool {
        self.faithful
    }

    pub fn multiply(&self, a: ElementId, b: ElementId) -> ElementId {
        ElementId(self.cayley[a.0 * self.order() + b.0] as usize)
    }

    pub fn inverse(&self, a: ElementId) -> ElementId {
        self.inverses[a.0]
    }

    /// `h a h^-1`
    pub fn conjugate(&self, h: ElementId, a: ElementId) -> ElementId {
        self.multiply(self.multiply(h, a), self.inverse(h))
    }

    pub fn conjugacy_classes(&self) -> &[Vec<ElementId>] {
        &self.classes
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn class_of(&self, a: ElementId) -> usize {
        self.class_of[a.0]
    }

    pub fn class_sizes(&self) -> Vec<usize> {
        self.classes.iter().map(Vec::len).collect()
    }

    pub fn centralizer_order(&self, a: ElementId) -> usize {
        self.ids().filter(|&h| self.conjugate(h, a) == a).count()
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (a + 1..n).all(|b| self.cayley[a * n + b] == self.cayley[b * n + a]))
    }

    /// Id of the element `(a, b)` of a group built by [`direct_product`]
    /// whose second factor has order `second_order`.
    pub fn pair_id(a: ElementId, b: ElementId, second_order: usize) -> ElementId {
        ElementId(a.0 * second_order + b.0)
    }

    /// Locates a matrix among the elements (smallest id on ties).
    pub fn element_lookup(&self, m: &CMatrix) -> Result<ElementId> {
        if m.nrows() != self.dim || m.ncols() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: m.nrows(),
            });
        }
        let query = if self.projective {
            phase_normalised(m.clone())
        } else {
            m.clone()
        };
        if let Some(id) = self.index.find(&query, &self.elements) {
            return Ok(ElementId(id));
        }
        // A fingerprint can straddle a rounding boundary; fall back to a scan.
        self.elements
            .iter()
            .position(|e| frobenius_distance(e.matrix(), &query) < ELEMENT_TOL)
            .map(ElementId)
            .ok_or(Error::ElementNotFound)
    }

    /// Matrix of the product `a b` recomputed from the element matrices.
    pub fn matrix_product(&self, a: ElementId, b: ElementId) -> CMatrix {
        let p = self.element(a).matrix() * self.element(b).matrix();
        if self.projective {
            phase_normalised(p)
        } else {
            p
        }
    }

    pub fn dump(&self) -> GroupDump {
        GroupDump {
            order: self.order(),
            dim: self.dim,
            classes: self
                .classes
                .iter()
                .map(|c| c.iter().map(|e| e.0).collect())
                .collect(),
            generators_used: self.generators.iter().map(raw_matrix).collect(),
        }
    }
}

type RawPair = [Box<RawValue>; 2];

/// Serialisable summary of a group. Matrix entries carry 17 significant
/// digits.
#[derive(Debug, Serialize)]
pub struct GroupDump {
    pub order: usize,
    pub dim: usize,
    pub classes: Vec<Vec<usize>>,
    pub generators_used: Vec<Vec<Vec<RawPair>>>,
}

impl GroupDump {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

pub(crate) fn raw_f64(x: f64) -> Box<RawValue> {
    let x = if x == 0.0 { 0.0 } else { x };
    RawValue::from_string(format!("{x:.16e}")).expect("formatted float is valid JSON")
}

fn raw_matrix(u: &UnitaryMatrix) -> Vec<Vec<RawPair>> {
    let m = u.matrix();
    (0..m.nrows())
        .map(|r| {
            (0..m.ncols())
                .map(|col| {
                    let z: C64 = m[(r, col)];
                    [raw_f64(z.re), raw_f64(z.im)]
                })
                .collect()
        })
        .collect()
}
