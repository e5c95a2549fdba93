//! Character decomposition of a group element on the natural `2^n` space
//! and the truncated simulation built on it.
//!
//! Two decompositions are offered:
//!
//! * [`Mode::Verbatim`] takes the printed sum literally,
//!   `T_i = (chi_i(u) / d_i) sum_g chi_i(g^-1) rho(g)`. The inner sum is
//!   `(|G| / d_i) P_i`, so these terms do not add up to `rho(u)` in general;
//!   the residual is reported, never assumed to vanish.
//! * [`Mode::Isotypic`] uses `T_i = rho(u) P_i` with the central idempotents
//!   `P_i = (d_i / |G|) sum_g conj(chi_i(g)) rho(g)`, which sum to `rho(u)`.
//!
//! A truncated operator keeps only the terms of a [`SignificantSet`]. Errors
//! are measured on raw (not renormalised) vectors.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chartable::CharacterTable;
use crate::complexity::class_terms;
use crate::error::{Error, Result};
use crate::fmt::sig12;
use crate::group::{ElementId, FiniteGroup};
use crate::matrix::{c, frobenius_distance, hermitian_eigen, hermiticity_residual, CMatrix, CVector, UnitaryMatrix, C64};
use crate::rng::SplitMix64;

pub const NORM_TOL: f64 = 1e-10;
pub const PROJECTOR_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Mode {
    #[serde(rename = "verbatim-eq3")]
    Verbatim,
    #[serde(rename = "isotypic")]
    Isotypic,
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "verbatim-eq3" | "verbatim" => Ok(Mode::Verbatim),
            "isotypic" => Ok(Mode::Isotypic),
            _ => Err(Error::Parse(format!("unknown mode {s}; expected verbatim-eq3 or isotypic"))),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Verbatim => "verbatim-eq3",
            Mode::Isotypic => "isotypic",
        })
    }
}

/// Something that names a group element: an id, or a matrix to look up.
pub trait AsElement {
    fn resolve(&self, g: &FiniteGroup) -> Result<ElementId>;
}

impl AsElement for ElementId {
    fn resolve(&self, g: &FiniteGroup) -> Result<ElementId> {
        if self.0 < g.order() {
            Ok(*self)
        } else {
            Err(Error::ElementNotFound)
        }
    }
}

impl AsElement for &UnitaryMatrix {
    fn resolve(&self, g: &FiniteGroup) -> Result<ElementId> {
        g.element_lookup(self.matrix())
    }
}

impl AsElement for &CMatrix {
    fn resolve(&self, g: &FiniteGroup) -> Result<ElementId> {
        g.element_lookup(self)
    }
}

/// A normalised state vector.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: CVector,
}

impl StateVector {
    pub fn new(amplitudes: CVector) -> Result<Self> {
        let norm = amplitudes.norm();
        if (norm * norm - 1.0).abs() > NORM_TOL {
            return Err(Error::DomainError(format!("state norm^2 is {}", norm * norm)));
        }
        Ok(Self { amplitudes })
    }

    /// Computational basis state `|index>` in dimension `dim`.
    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        if index >= dim {
            return Err(Error::DomainError(format!("basis index {index} >= {dim}")));
        }
        let mut v = CVector::zeros(dim);
        v[index] = c(1.0, 0.0);
        Ok(Self { amplitudes: v })
    }

    /// Haar-like random state from normalised complex Gaussians.
    pub fn random(dim: usize, seed: u64) -> Self {
        let mut rng = SplitMix64::new(seed);
        let v = CVector::from_fn(dim, |_, _| c(rng.normal(), rng.normal()));
        let norm = v.norm();
        Self { amplitudes: v / c(norm, 0.0) }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    /// `ceil(log2(dim))`, at least 1.
    pub fn qubits(&self) -> u32 {
        qubits_for_dim(self.dim())
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }
}

pub fn qubits_for_dim(dim: usize) -> u32 {
    dim.next_power_of_two().trailing_zeros().max(1)
}

/// Random Hermitian matrix with Gaussian entries.
pub fn random_hermitian(dim: usize, seed: u64) -> CMatrix {
    let mut rng = SplitMix64::new(seed);
    let m = CMatrix::from_fn(dim, dim, |_, _| c(rng.normal(), rng.normal()));
    (&m + m.adjoint()).scale(0.5)
}

/// `U |psi>` by a dense matrix-vector product.
pub fn dense_oracle_apply(u: &UnitaryMatrix, psi: &StateVector) -> Result<StateVector> {
    if u.dim() != psi.dim() {
        return Err(Error::DimensionMismatch {
            expected: u.dim(),
            found: psi.dim(),
        });
    }
    Ok(StateVector {
        amplitudes: u.matrix() * &psi.amplitudes,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignificantSet {
    pub indices: Vec<usize>,
    pub threshold: f64,
    pub n_qubits: u32,
}

impl SignificantSet {
    pub fn full(t: &CharacterTable, n_qubits: u32) -> Self {
        Self {
            indices: (0..t.len()).collect(),
            threshold: 0.0,
            n_qubits,
        }
    }

    pub fn empty(n_qubits: u32) -> Self {
        Self {
            indices: Vec::new(),
            threshold: f64::INFINITY,
            n_qubits,
        }
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }
}

/// Irreps with `|chi_i(u)|^2 / d_i >= threshold`; the default threshold is
/// `1 / (n^2 |G|)`.
pub fn significant_set(
    g: &FiniteGroup,
    t: &CharacterTable,
    u: ElementId,
    n_qubits: u32,
    threshold_override: Option<f64>,
) -> SignificantSet {
    let threshold = threshold_override
        .unwrap_or_else(|| 1.0 / ((n_qubits as f64).powi(2) * g.order() as f64));
    let indices = class_terms(t, g.class_of(u))
        .iter()
        .enumerate()
        .filter(|(_, &term)| term >= threshold)
        .map(|(i, _)| i)
        .collect();
    SignificantSet {
        indices,
        threshold,
        n_qubits,
    }
}

#[derive(Debug, Clone)]
pub struct DecompositionComponents {
    pub mode: Mode,
    /// One term per irrep, on the natural space.
    pub terms: Vec<CMatrix>,
    /// `|sum_i T_i - rho(u)|_F`
    pub residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Measurement {
    pub value: f64,
    pub imag_residue: f64,
}

#[derive(Debug, Clone)]
pub struct ApproxState {
    pub state: CVector,
    pub l2_error: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruncationRow {
    pub threshold: f64,
    pub set_size: usize,
    pub l2_error: f64,
}

pub fn truncation_csv(rows: &[TruncationRow]) -> String {
    let mut out = String::from("threshold,set_size,l2_error\n");
    for r in rows {
        out.push_str(&format!("{},{},{}\n", sig12(r.threshold), r.set_size, sig12(r.l2_error)));
    }
    out
}

/// Isotypic projectors and literal character sums of a group's natural
/// representation, computed once and reused.
#[derive(Debug)]
pub struct Decomposer<'a> {
    g: &'a FiniteGroup,
    t: &'a CharacterTable,
    projectors: Vec<CMatrix>,
    literal_sums: Vec<CMatrix>,
}

impl<'a> Decomposer<'a> {
    pub fn new(g: &'a FiniteGroup, t: &'a CharacterTable) -> Result<Self> {
        if g.is_projective() {
            return Err(Error::ProjectiveGroup);
        }
        let dim = g.dim();
        let order = g.order() as f64;
        let mut projectors = Vec::with_capacity(t.len());
        let mut literal_sums = Vec::with_capacity(t.len());
        for i in 0..t.len() {
            let mut p = CMatrix::zeros(dim, dim);
            let mut s = CMatrix::zeros(dim, dim);
            for e in g.ids() {
                let m = g.element(e).matrix();
                p += m * t.value(i, g.class_of(e)).conj();
                s += m * t.value(i, g.class_of(g.inverse(e)));
            }
            projectors.push(p * c(t.dims()[i] as f64 / order, 0.0));
            literal_sums.push(s);
        }
        Ok(Self {
            g,
            t,
            projectors,
            literal_sums,
        })
    }

    pub fn projectors(&self) -> &[CMatrix] {
        &self.projectors
    }

    fn term(&self, u: ElementId, i: usize, mode: Mode) -> CMatrix {
        match mode {
            Mode::Verbatim => {
                let coeff = self.t.value(i, self.g.class_of(u)) / self.t.dims()[i] as f64;
                &self.literal_sums[i] * coeff
            }
            Mode::Isotypic => self.g.element(u).matrix() * &self.projectors[i],
        }
    }

    pub fn decompose(&self, u: impl AsElement, mode: Mode) -> Result<DecompositionComponents> {
        let u = u.resolve(self.g)?;
        let terms: Vec<CMatrix> = (0..self.t.len()).map(|i| self.term(u, i, mode)).collect();
        let dim = self.g.dim();
        let sum = terms.iter().fold(CMatrix::zeros(dim, dim), |acc, m| acc + m);
        let residual = frobenius_distance(&sum, self.g.element(u).matrix());
        Ok(DecompositionComponents {
            mode,
            terms,
            residual,
        })
    }

    /// `sum_{i in S} T_i`.
    pub fn truncated_operator(&self, u: ElementId, s: &SignificantSet, mode: Mode) -> CMatrix {
        let dim = self.g.dim();
        s.indices
            .iter()
            .fold(CMatrix::zeros(dim, dim), |acc, &i| acc + self.term(u, i, mode))
    }

    fn check_state(&self, psi: &StateVector) -> Result<()> {
        if psi.dim() != self.g.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.g.dim(),
                found: psi.dim(),
            });
        }
        Ok(())
    }

    fn check_observable(&self, a: &CMatrix) -> Result<()> {
        if a.nrows() != self.g.dim() || a.ncols() != self.g.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.g.dim(),
                found: a.nrows(),
            });
        }
        let residual = hermiticity_residual(a);
        if residual > NORM_TOL {
            return Err(Error::NotSelfAdjoint(residual));
        }
        Ok(())
    }

    /// `<psi| U~^dagger A U~ |psi>`.
    pub fn simulate_measurement(
        &self,
        u: impl AsElement,
        observable: &CMatrix,
        psi: &StateVector,
        s: &SignificantSet,
        mode: Mode,
    ) -> Result<Measurement> {
        let u = u.resolve(self.g)?;
        self.check_observable(observable)?;
        self.check_state(psi)?;
        let out = self.truncated_operator(u, s, mode) * psi.amplitudes();
        let z = out.dotc(&(observable * &out));
        Ok(Measurement {
            value: z.re,
            imag_residue: z.im.abs(),
        })
    }

    /// `Tr(U~^dagger A U~ rho)`.
    pub fn expectation_value(
        &self,
        u: impl AsElement,
        observable: &CMatrix,
        rho: &CMatrix,
        s: &SignificantSet,
        mode: Mode,
    ) -> Result<f64> {
        let u = u.resolve(self.g)?;
        self.check_observable(observable)?;
        validate_density(rho, self.g.dim())?;
        let op = self.truncated_operator(u, s, mode);
        Ok((op.adjoint() * observable * &op * rho).trace().re)
    }

    /// `U~ |psi>` and its distance from the exact `U |psi>`.
    pub fn approx_state(
        &self,
        u: impl AsElement,
        psi: &StateVector,
        s: &SignificantSet,
        mode: Mode,
    ) -> Result<ApproxState> {
        let u = u.resolve(self.g)?;
        self.check_state(psi)?;
        let state = self.truncated_operator(u, s, mode) * psi.amplitudes();
        let exact = dense_oracle_apply(self.g.element(u), psi)?;
        let l2_error = (&state - exact.amplitudes()).norm();
        Ok(ApproxState { state, l2_error })
    }

    /// Isotypic truncation error for each threshold, sorted by threshold.
    pub fn truncation_study(
        &self,
        u: impl AsElement,
        psi: &StateVector,
        thresholds: &[f64],
    ) -> Result<Vec<TruncationRow>> {
        let u = u.resolve(self.g)?;
        self.check_state(psi)?;
        let mut sorted = thresholds.to_vec();
        sorted.sort_by(f64::total_cmp);
        let n = psi.qubits();
        sorted
            .par_iter()
            .map(|&th| {
                let s = significant_set(self.g, self.t, u, n, Some(th));
                let approx = self.approx_state(u, psi, &s, Mode::Isotypic)?;
                Ok(TruncationRow {
                    threshold: th,
                    set_size: s.len(),
                    l2_error: approx.l2_error,
                })
            })
            .collect()
    }
}

fn validate_density(rho: &CMatrix, dim: usize) -> Result<()> {
    if rho.nrows() != dim || rho.ncols() != dim {
        return Err(Error::InvalidDensityMatrix(format!(
            "shape {}x{}, expected {dim}x{dim}",
            rho.nrows(),
            rho.ncols()
        )));
    }
    if hermiticity_residual(rho) > 1e-9 {
        return Err(Error::InvalidDensityMatrix("not Hermitian".into()));
    }
    let tr = rho.trace();
    if (tr - c(1.0, 0.0)).norm() > 1e-9 {
        return Err(Error::InvalidDensityMatrix(format!("trace {}", tr.re)));
    }
    let (values, _) = hermitian_eigen(rho);
    if values.first().is_some_and(|&v| v < -1e-9) {
        return Err(Error::InvalidDensityMatrix("not positive semidefinite".into()));
    }
    Ok(())
}

/// `|psi><psi|`
pub fn pure_density(psi: &StateVector) -> CMatrix {
    psi.amplitudes() * psi.amplitudes().adjoint()
}

pub fn natural_isotypic_projectors(g: &FiniteGroup, t: &CharacterTable) -> Result<Vec<CMatrix>> {
    Ok(Decomposer::new(g, t)?.projectors)
}

pub fn decompose(g: &FiniteGroup, t: &CharacterTable, u: impl AsElement, mode: Mode) -> Result<DecompositionComponents> {
    Decomposer::new(g, t)?.decompose(u, mode)
}

pub fn simulate_measurement(
    g: &FiniteGroup,
    t: &CharacterTable,
    u: impl AsElement,
    observable: &CMatrix,
    psi: &StateVector,
    s: &SignificantSet,
    mode: Mode,
) -> Result<Measurement> {
    Decomposer::new(g, t)?.simulate_measurement(u, observable, psi, s, mode)
}

pub fn expectation_value(
    g: &FiniteGroup,
    t: &CharacterTable,
    u: impl AsElement,
    observable: &CMatrix,
    rho: &CMatrix,
    s: &SignificantSet,
    mode: Mode,
) -> Result<f64> {
    Decomposer::new(g, t)?.expectation_value(u, observable, rho, s, mode)
}

pub fn approx_state(
    g: &FiniteGroup,
    t: &CharacterTable,
    u: impl AsElement,
    psi: &StateVector,
    s: &SignificantSet,
    mode: Mode,
) -> Result<ApproxState> {
    Decomposer::new(g, t)?.approx_state(u, psi, s, mode)
}

pub fn truncation_study(
    g: &FiniteGroup,
    t: &CharacterTable,
    u: impl AsElement,
    psi: &StateVector,
    thresholds: &[f64],
) -> Result<Vec<TruncationRow>> {
    Decomposer::new(g, t)?.truncation_study(u, psi, thresholds)
}

/// Full-set decomposition used as a sanity value: `sum_i P_i`.
pub fn projector_sum(projectors: &[CMatrix]) -> CMatrix {
    let dim = projectors.first().map_or(0, |p| p.nrows());
    projectors.iter().fold(CMatrix::zeros(dim, dim), |acc, p| acc + p)
}

#[allow(dead_code)]
fn _assert_send_sync() {
    fn is<T: Send + Sync>() {}
    is::<StateVector>();
    is::<C64>();
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mode_names() {
        assert_eq!("verbatim-eq3".parse::<Mode>().unwrap(), Mode::Verbatim);
        assert_eq!(Mode::Isotypic.to_string(), "isotypic");
        assert!("exact".parse::<Mode>().is_err());
    }

    #[test]
    fn random_state_is_normalised() {
        let psi = StateVector::random(8, 3);
        assert!((psi.amplitudes().norm() - 1.0).abs() < 1e-12);
        assert_eq!(psi.qubits(), 3);
        assert_eq!(StateVector::random(3, 1).qubits(), 2);
        assert_eq!(StateVector::random(2, 1).qubits(), 1);
        assert_eq!(StateVector::random(1, 1).qubits(), 1);
    }

    #[test]
    fn state_norm_is_checked() {
        assert!(StateVector::new(CVector::from_element(2, c(1.0, 0.0))).is_err());
        assert!(StateVector::basis(2, 2).is_err());
    }

    #[test]
    fn oracle_dimension_mismatch() {
        let u = UnitaryMatrix::identity(4);
        let psi = StateVector::basis(2, 0).unwrap();
        assert!(matches!(
            dense_oracle_apply(&u, &psi),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn truncation_csv_layout() {
        let rows = [TruncationRow {
            threshold: 0.01,
            set_size: 8,
            l2_error: 1.0,
        }];
        assert_eq!(truncation_csv(&rows), "threshold,set_size,l2_error\n0.01,8,1\n");
    }
}
