//! Character tables by the Burnside class-sum method.
//!
//! With class sums `K_c` and class sizes `s_c`, left multiplication by a
//! central element `X = sum_j a_j K_j` acts on the class algebra with matrix
//! `M[c][a] = #{ x : x^-1 z_c in class a } weighted by a_class(x)`, where
//! `z_c` represents class `c`. In the orthonormal basis `K_c / sqrt(s_c)`
//! the adjoint of multiplication by `K_j` is multiplication by `K_{j^-1}`, so
//! `H = N + N^dagger` is Hermitian and shares the primitive central
//! idempotents as eigenvectors. An eigenvector `v` yields the character
//! `chi_c = lambda conj(v_c) / sqrt(s_c)` with `|lambda|^2 = |G|`.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::fmt::complex12;
use crate::group::{ElementId, FiniteGroup};
use crate::matrix::{c, hermitian_eigen, CMatrix, C64};
use crate::rng::{sub_seed, SplitMix64};

pub const TABLE_SEED: u64 = 0xC0FFEE;
pub const MAX_RESEEDS: usize = 8;
pub const TABLE_TOL: f64 = 1e-8;
const DIM_TOL: f64 = 1e-6;
const MAX_CLASSES: usize = 4096;

#[derive(Debug, Clone, PartialEq)]
pub struct CharacterTable {
    order: usize,
    /// `chars[i][c]` is irrep `i` on class `c`.
    chars: Vec<Vec<C64>>,
    dims: Vec<usize>,
    class_sizes: Vec<usize>,
    class_reps: Vec<ElementId>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrthogonalityReport {
    pub max_row_residual: f64,
    pub max_col_residual: f64,
    pub passed: bool,
}

pub fn character_table(g: &FiniteGroup) -> Result<CharacterTable> {
    let k = g.class_count();
    if k > MAX_CLASSES {
        return Err(Error::MemoryBudgetExceeded {
            op: "character_table",
            required: k * k * std::mem::size_of::<C64>(),
            budget: MAX_CLASSES * MAX_CLASSES * std::mem::size_of::<C64>(),
        });
    }
    for attempt in 0..=MAX_RESEEDS {
        let seed = if attempt == 0 {
            TABLE_SEED
        } else {
            sub_seed(TABLE_SEED, &[attempt as u64])
        };
        if let Some(table) = try_table(g, seed) {
            return Ok(table);
        }
    }
    Err(Error::DegenerateEigenproblem {
        attempts: MAX_RESEEDS + 1,
    })
}

fn try_table(g: &FiniteGroup, seed: u64) -> Option<CharacterTable> {
    let k = g.class_count();
    let order = g.order();
    let sizes = g.class_sizes();
    let reps: Vec<ElementId> = g.conjugacy_classes().iter().map(|c| c[0]).collect();

    let mut rng = SplitMix64::new(seed);
    let coeffs: Vec<C64> = (0..k).map(|_| c(rng.symmetric(), rng.symmetric())).collect();

    let mut m = CMatrix::zeros(k, k);
    for (ci, &z) in reps.iter().enumerate() {
        for x in g.ids() {
            let y = g.multiply(g.inverse(x), z);
            m[(ci, g.class_of(y))] += coeffs[g.class_of(x)];
        }
    }
    let n = CMatrix::from_fn(k, k, |r, col| {
        m[(r, col)] * (sizes[r] as f64 / sizes[col] as f64).sqrt()
    });
    let h = &n + n.adjoint();
    let (values, vectors) = hermitian_eigen(&h);

    let scale = values.iter().fold(1.0f64, |acc, v| acc.max(v.abs()));
    if values.windows(2).any(|w| w[1] - w[0] < 1e-7 * scale) {
        return None;
    }

    let root = (order as f64).sqrt();
    let mut rows: Vec<(usize, Vec<C64>)> = Vec::with_capacity(k);
    for col in 0..k {
        let v = vectors.column(col);
        let v0 = v[0];
        if v0.norm() < 1e-12 {
            return None;
        }
        let lambda = v0 / v0.norm() * root;
        let chi: Vec<C64> = (0..k)
            .map(|cls| clean(lambda * v[cls].conj() / (sizes[cls] as f64).sqrt()))
            .collect();
        let d = chi[0].re;
        let rounded = d.round();
        if rounded < 1.0 || (d - rounded).abs() > DIM_TOL || chi[0].im.abs() > DIM_TOL {
            return None;
        }
        rows.push((rounded as usize, chi));
    }
    rows.sort_by(compare_rows);

    let table = CharacterTable {
        order,
        dims: rows.iter().map(|r| r.0).collect(),
        chars: rows.into_iter().map(|r| r.1).collect(),
        class_sizes: sizes,
        class_reps: reps,
    };
    let dim_sq: usize = table.dims.iter().map(|d| d * d).sum();
    if dim_sq != order || !table.verify_orthogonality().passed {
        return None;
    }
    Some(table)
}

/// Snaps real and imaginary parts lying within 1e-9 of a multiple of 1/2.
fn clean(z: C64) -> C64 {
    let snap = |x: f64| {
        let h = (2.0 * x).round() / 2.0;
        if (x - h).abs() < 1e-9 {
            h + 0.0
        } else {
            x
        }
    };
    c(snap(z.re), snap(z.im))
}

fn rounded_key(z: &C64) -> (i64, i64) {
    ((z.re * 1e6).round() as i64, (z.im * 1e6).round() as i64)
}

/// Dimension ascending, then character values descending so the trivial
/// character heads each block of equal dimension.
fn compare_rows(a: &(usize, Vec<C64>), b: &(usize, Vec<C64>)) -> Ordering {
    a.0.cmp(&b.0).then_with(|| {
        let ka = a.1.iter().map(rounded_key);
        let kb = b.1.iter().map(rounded_key);
        kb.cmp(ka)
    })
}

impl CharacterTable {
    pub fn order(&self) -> usize {
        self.order
    }

    /// Number of irreducible characters (= number of classes).
    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn class_sizes(&self) -> &[usize] {
        &self.class_sizes
    }

    pub fn class_reps(&self) -> &[ElementId] {
        &self.class_reps
    }

    /// `chi_i` on class `c`.
    pub fn value(&self, irrep: usize, class: usize) -> C64 {
        self.chars[irrep][class]
    }

    pub fn row(&self, irrep: usize) -> &[C64] {
        &self.chars[irrep]
    }

    /// `(chi_1(u), ..., chi_k(u))`.
    pub fn character_of(&self, g: &FiniteGroup, u: ElementId) -> Vec<C64> {
        let cls = g.class_of(u);
        self.chars.iter().map(|row| row[cls]).collect()
    }

    pub fn verify_orthogonality(&self) -> OrthogonalityReport {
        let k = self.len();
        let order = self.order as f64;
        let mut max_row: f64 = 0.0;
        for i in 0..k {
            for j in 0..k {
                let s: C64 = (0..k)
                    .map(|cls| self.chars[i][cls] * self.chars[j][cls].conj() * self.class_sizes[cls] as f64)
                    .sum();
                let target = if i == j { order } else { 0.0 };
                max_row = max_row.max((s - c(target, 0.0)).norm());
            }
        }
        let mut max_col: f64 = 0.0;
        for a in 0..k {
            for b in 0..k {
                let s: C64 = (0..k).map(|i| self.chars[i][a] * self.chars[i][b].conj()).sum();
                let target = if a == b {
                    order / self.class_sizes[a] as f64
                } else {
                    0.0
                };
                max_col = max_col.max((s - c(target, 0.0)).norm());
            }
        }
        OrthogonalityReport {
            max_row_residual: max_row,
            max_col_residual: max_col,
            passed: max_row < TABLE_TOL && max_col < TABLE_TOL,
        }
    }

    /// One row per class: `class_rep,class_size,chi_1,...,chi_k`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("class_rep,class_size");
        for i in 1..=self.len() {
            out.push_str(&format!(",chi_{i}"));
        }
        out.push('\n');
        for (cls, rep) in self.class_reps.iter().enumerate() {
            out.push_str(&format!("{},{}", rep, self.class_sizes[cls]));
            for row in &self.chars {
                out.push(',');
                out.push_str(&complex12(row[cls]));
            }
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::named_group;
    use crate::group::ClosureOptions;

    fn table(name: &str) -> (FiniteGroup, CharacterTable) {
        let g = named_group(name, ClosureOptions::default()).unwrap();
        let t = character_table(&g).unwrap();
        (g, t)
    }

    #[test]
    fn z2_table_is_exact() {
        let (_, t) = table("z2");
        assert_eq!(t.dims(), &[1, 1]);
        assert_eq!(t.row(0), &[c(1.0, 0.0), c(1.0, 0.0)]);
        assert_eq!(t.row(1), &[c(1.0, 0.0), c(-1.0, 0.0)]);
        let rep = t.verify_orthogonality();
        assert_eq!(rep.max_row_residual, 0.0);
        assert_eq!(rep.max_col_residual, 0.0);
        assert!(rep.passed);
    }

    #[test]
    fn tables_are_deterministic() {
        let g = named_group("clifford1", ClosureOptions::default()).unwrap();
        let a = character_table(&g).unwrap();
        let b = character_table(&g).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_csv(), b.to_csv());
    }

    #[test]
    fn csv_layout() {
        let (_, t) = table("s3");
        let csv = t.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "class_rep,class_size,chi_1,chi_2,chi_3");
        assert_eq!(lines.next().unwrap(), "0,1,1+0j,1+0j,2+0j");
        assert_eq!(csv.lines().count(), 4);
    }

    #[test]
    fn abelian_groups_have_linear_characters() {
        for name in ["z8", "z2_3"] {
            let (g, t) = table(name);
            assert_eq!(t.len(), g.order());
            assert!(t.dims().iter().all(|&d| d == 1));
        }
    }
}
