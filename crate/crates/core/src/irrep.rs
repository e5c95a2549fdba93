//! Explicit irreducible representations realised inside the regular
//! representation, and multiplicities of the natural action.

use crate::chartable::{CharacterTable, MAX_RESEEDS};
use crate::error::{Error, Result};
use crate::group::{ElementId, FiniteGroup};
use crate::matrix::{c, frobenius_distance, hermitian_eigen, CMatrix, C64};
use crate::rng::{sub_seed, SplitMix64};

pub const IRREP_TOL: f64 = 1e-7;
const IRREP_SEED: u64 = 0x1EEE_5EED;
const IRREP_BUDGET_BYTES: usize = 1 << 30;

/// An irreducible unitary representation `g -> images[g]`.
#[derive(Debug, Clone)]
pub struct Irrep {
    pub index: usize,
    pub dim: usize,
    pub images: Vec<CMatrix>,
}

impl Irrep {
    pub fn image(&self, g: ElementId) -> &CMatrix {
        &self.images[g.0]
    }

    /// Largest `|rho(ab) - rho(a) rho(b)|_F` over all pairs.
    pub fn homomorphism_residual(&self, g: &FiniteGroup) -> f64 {
        let mut worst: f64 = 0.0;
        for a in g.ids() {
            for b in g.ids() {
                let prod = &self.images[a.0] * &self.images[b.0];
                worst = worst.max(frobenius_distance(&prod, &self.images[g.multiply(a, b).0]));
            }
        }
        worst
    }

    pub fn trace_residual(&self, g: &FiniteGroup, t: &CharacterTable) -> f64 {
        g.ids()
            .map(|e| (self.images[e.0].trace() - t.value(self.index, g.class_of(e))).norm())
            .fold(0.0, f64::max)
    }

    /// `(1/|G|) sum_g |tr rho(g)|^2`, which is 1 exactly for irreducibles.
    pub fn irreducibility_norm(&self) -> f64 {
        self.images.iter().map(|m| m.trace().norm_sqr()).sum::<f64>() / self.images.len() as f64
    }

    /// The sum `sum_g chi(g^-1) rho(g)` taken literally; by Schur
    /// orthogonality this is `(|G| / d) * Id`.
    pub fn character_weighted_sum(&self, g: &FiniteGroup, t: &CharacterTable) -> CMatrix {
        let mut acc = CMatrix::zeros(self.dim, self.dim);
        for e in g.ids() {
            let chi_inv = t.value(self.index, g.class_of(g.inverse(e)));
            acc += &self.images[e.0] * chi_inv;
        }
        acc
    }

    fn verified(self, g: &FiniteGroup, t: &CharacterTable) -> Option<Self> {
        let ok = self.homomorphism_residual(g) < IRREP_TOL
            && self.trace_residual(g, t) < IRREP_TOL
            && (self.irreducibility_norm() - 1.0).abs() < IRREP_TOL
            && self
                .images
                .iter()
                .all(|m| crate::matrix::unitarity_residual(m) < IRREP_TOL);
        ok.then_some(self)
    }
}

/// Realises irrep `i` of `t` as explicit matrices.
///
/// The central idempotent `E_i` is applied to the regular representation,
/// its image (`d_i` copies of the irrep) is orthonormalised, and one copy is
/// split off by diagonalising the restriction of a random self-adjoint
/// element of the right group algebra, which commutes with the left action.
pub fn explicit_irrep(g: &FiniteGroup, t: &CharacterTable, i: usize) -> Result<Irrep> {
    let order = g.order();
    let d = t.dims()[i];
    if d == 1 {
        let images = g
            .ids()
            .map(|e| CMatrix::from_element(1, 1, t.value(i, g.class_of(e))))
            .collect();
        let irrep = Irrep { index: i, dim: 1, images };
        return irrep.verified(g, t).ok_or(Error::BlockSplitFailed {
            irrep: i,
            attempts: 1,
        });
    }

    let required = order * d * d * std::mem::size_of::<C64>() * 3;
    if required > IRREP_BUDGET_BYTES {
        return Err(Error::MemoryBudgetExceeded {
            op: "explicit_irrep",
            required,
            budget: IRREP_BUDGET_BYTES,
        });
    }

    let basis = isotypic_basis(g, t, i)?;

    for attempt in 0..=MAX_RESEEDS {
        let seed = sub_seed(IRREP_SEED, &[i as u64, attempt as u64]);
        let Some(block) = split_block(g, &basis, d, seed) else {
            continue;
        };
        let images = g
            .ids()
            .map(|e| {
                let inv = g.inverse(e);
                // (L(e) B)[y] = B[e^-1 y]
                let shifted = CMatrix::from_fn(order, d, |y, col| {
                    block[(g.multiply(inv, ElementId(y)).0, col)]
                });
                block.adjoint() * shifted
            })
            .collect();
        let irrep = Irrep { index: i, dim: d, images };
        if let Some(irrep) = irrep.verified(g, t) {
            return Ok(irrep);
        }
    }
    Err(Error::BlockSplitFailed {
        irrep: i,
        attempts: MAX_RESEEDS + 1,
    })
}

/// Orthonormal basis (columns) of `E_i C[G]`, of dimension `d_i^2`.
fn isotypic_basis(g: &FiniteGroup, t: &CharacterTable, i: usize) -> Result<CMatrix> {
    let order = g.order();
    let d = t.dims()[i];
    let target = d * d;
    let weight = d as f64 / order as f64;
    let mut basis: Vec<Vec<C64>> = Vec::with_capacity(target);
    for h in g.ids() {
        let h_inv = g.inverse(h);
        // column h of E_i: E[a][h] = (d/|G|) conj(chi(a h^-1))
        let mut v: Vec<C64> = g
            .ids()
            .map(|a| t.value(i, g.class_of(g.multiply(a, h_inv))).conj() * weight)
            .collect();
        for _ in 0..2 {
            for q in &basis {
                let proj: C64 = q.iter().zip(&v).map(|(x, y)| x.conj() * y).sum();
                v.iter_mut().zip(q).for_each(|(y, x)| *y -= proj * x);
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-8 {
            v.iter_mut().for_each(|z| *z /= norm);
            basis.push(v);
            if basis.len() == target {
                break;
            }
        }
    }
    if basis.len() != target {
        return Err(Error::InvalidTable(format!(
            "isotypic component {i} has dimension {} instead of {target}",
            basis.len()
        )));
    }
    Ok(CMatrix::from_fn(order, target, |r, col| basis[col][r]))
}

/// Picks one `d`-dimensional invariant block out of the isotypic basis.
fn split_block(g: &FiniteGroup, basis: &CMatrix, d: usize, seed: u64) -> Option<CMatrix> {
    let order = g.order();
    let width = basis.ncols();
    let mut rng = SplitMix64::new(seed);
    let coeffs: Vec<C64> = (0..order).map(|_| c(rng.symmetric(), rng.symmetric())).collect();

    // T = S + S^dagger with S = sum_h a_h r(h), r(h) e_x = e_{x h}
    // (S Q)[y] = sum_h a_h Q[y h^-1],  (S^dagger Q)[y] = sum_h conj(a_h) Q[y h]
    let mut tq = CMatrix::zeros(order, width);
    for h in g.ids() {
        let a = coeffs[h.0];
        let h_inv = g.inverse(h);
        for y in g.ids() {
            let fwd = g.multiply(y, h_inv).0;
            let back = g.multiply(y, h).0;
            for col in 0..width {
                tq[(y.0, col)] += a * basis[(fwd, col)] + a.conj() * basis[(back, col)];
            }
        }
    }
    let restricted = basis.adjoint() * tq;
    let (values, vectors) = hermitian_eigen(&restricted);
    let scale = values.iter().fold(1.0f64, |acc, v| acc.max(v.abs()));
    let cluster = values[d - 1] - values[0];
    let gap = values[d] - values[d - 1];
    if cluster > 1e-9 * scale || gap < 1e-6 * scale {
        return None;
    }
    Some(basis * vectors.columns(0, d))
}

/// Multiplicity of every irrep in the defining matrix representation.
pub fn natural_multiplicities(g: &FiniteGroup, t: &CharacterTable) -> Result<Vec<usize>> {
    if g.is_projective() {
        return Err(Error::ProjectiveGroup);
    }
    let order = g.order() as f64;
    let traces: Vec<C64> = t.class_reps().iter().map(|&r| g.element(r).trace()).collect();
    let mut out = Vec::with_capacity(t.len());
    for i in 0..t.len() {
        let m: C64 = (0..t.len())
            .map(|cls| traces[cls] * t.value(i, cls).conj() * t.class_sizes()[cls] as f64)
            .sum::<C64>()
            / order;
        let rounded = m.re.round();
        if (m - c(rounded, 0.0)).norm() > 1e-6 || rounded < 0.0 {
            return Err(Error::NonIntegralMultiplicity { irrep: i, value: m.re });
        }
        out.push(rounded as usize);
    }
    let total: usize = out.iter().zip(t.dims()).map(|(m, d)| m * d).sum();
    if total != g.dim() {
        return Err(Error::InvalidTable(format!(
            "multiplicities cover dimension {total}, representation has {}",
            g.dim()
        )));
    }
    Ok(out)
}
