//! Dense complex matrices and the unitary newtype used as group elements.

use nalgebra::{Complex, DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

/// Tolerance for the `U^dagger U = I` check on inputs.
pub const UNITARY_TOL: f64 = 1e-9;

pub fn c(re: f64, im: f64) -> C64 {
    Complex::new(re, im)
}

pub fn frobenius_distance(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

pub fn unitarity_residual(m: &CMatrix) -> f64 {
    let prod = m.adjoint() * m;
    frobenius_distance(&prod, &CMatrix::identity(m.nrows(), m.ncols()))
}

pub fn hermiticity_residual(m: &CMatrix) -> f64 {
    frobenius_distance(m, &m.adjoint())
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending.
/// The input is symmetrised first so round-off asymmetry cannot leak in.
pub fn hermitian_eigen(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let sym = (m + m.adjoint()).scale(0.5);
    let eig = SymmetricEigen::new(sym);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMatrix::from_fn(m.nrows(), order.len(), |r, col| {
        eig.eigenvectors[(r, order[col])]
    });
    (values, vectors)
}

/// A square matrix satisfying `U^dagger U = I` within [`UNITARY_TOL`].
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryMatrix(CMatrix);

impl UnitaryMatrix {
    pub fn new(m: CMatrix) -> Result<Self> {
        if m.nrows() != m.ncols() || m.nrows() == 0 {
            return Err(Error::DimensionMismatch {
                expected: m.nrows(),
                found: m.ncols(),
            });
        }
        let residual = unitarity_residual(&m);
        if residual.is_nan() || residual >= UNITARY_TOL {
            return Err(Error::NotUnitary { index: 0, residual });
        }
        Ok(Self(m))
    }

    /// Wraps a matrix known to be unitary (a product of checked unitaries).
    pub(crate) fn from_trusted(m: CMatrix) -> Self {
        Self(m)
    }

    pub fn identity(dim: usize) -> Self {
        Self(CMatrix::identity(dim, dim))
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let n = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: bad.len(),
            });
        }
        Self::new(CMatrix::from_fn(n, n, |r, col| rows[r][col]))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> CMatrix {
        self.0
    }

    pub fn mul(&self, rhs: &UnitaryMatrix) -> UnitaryMatrix {
        Self(&self.0 * &rhs.0)
    }

    pub fn adjoint(&self) -> UnitaryMatrix {
        Self(self.0.adjoint())
    }

    pub fn kron(&self, rhs: &UnitaryMatrix) -> UnitaryMatrix {
        Self(self.0.kronecker(&rhs.0))
    }

    pub fn trace(&self) -> C64 {
        self.0.trace()
    }

    pub fn distance(&self, other: &UnitaryMatrix) -> f64 {
        frobenius_distance(&self.0, &other.0)
    }

    /// Rows of `[re, im]` pairs.
    pub fn to_pairs(&self) -> Vec<Vec<[f64; 2]>> {
        (0..self.dim())
            .map(|r| {
                (0..self.dim())
                    .map(|col| {
                        let z = self.0[(r, col)];
                        [z.re, z.im]
                    })
                    .collect()
            })
            .collect()
    }

    pub fn from_pairs(rows: &[Vec<[f64; 2]>]) -> Result<Self> {
        let rows: Vec<Vec<C64>> = rows
            .iter()
            .map(|r| r.iter().map(|&[re, im]| c(re, im)).collect())
            .collect();
        Self::from_rows(&rows)
    }
}

/// JSON form of a matrix: rows of `[re, im]` pairs.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(transparent)]
pub struct MatrixPairs(pub Vec<Vec<[f64; 2]>>);

impl From<&UnitaryMatrix> for MatrixPairs {
    fn from(u: &UnitaryMatrix) -> Self {
        MatrixPairs(u.to_pairs())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_unitary() {
        let m = CMatrix::from_element(2, 2, c(1.0, 0.0));
        assert!(matches!(
            UnitaryMatrix::new(m),
            Err(Error::NotUnitary { .. })
        ));
    }

    #[test]
    fn rejects_non_square() {
        let m = CMatrix::zeros(2, 3);
        assert!(matches!(
            UnitaryMatrix::new(m),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn hermitian_eigen_reconstructs() {
        let h = CMatrix::from_row_slice(
            3,
            3,
            &[
                c(2.0, 0.0),
                c(0.5, 0.25),
                c(0.0, -1.0),
                c(0.5, -0.25),
                c(-1.0, 0.0),
                c(0.3, 0.0),
                c(0.0, 1.0),
                c(0.3, 0.0),
                c(0.5, 0.0),
            ],
        );
        let (vals, vecs) = hermitian_eigen(&h);
        assert!(vals.windows(2).all(|w| w[0] <= w[1]));
        for (i, &lam) in vals.iter().enumerate() {
            let v = vecs.column(i);
            let r = &h * v - v * c(lam, 0.0);
            assert!(r.norm() < 1e-12, "residual {}", r.norm());
        }
        let gram = vecs.adjoint() * &vecs;
        assert!(frobenius_distance(&gram, &CMatrix::identity(3, 3)) < 1e-12);
    }
}
