use std::ops::{Add, Mul, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tolerance::ToleranceConfig;

pub type C64 = Complex64;
pub type CMat = DMatrix<Complex64>;

/// A square complex matrix equal to its conjugate transpose.
///
/// Construction validates Hermiticity and then stores the exact Hermitian
/// part, so downstream code never sees an asymmetric entry.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    mat: CMat,
}

/// `(A + A*) / 2`.
pub fn hermitian_part(a: &CMat) -> CMat {
    (a + a.adjoint()).scale(0.5)
}

impl HermitianMatrix {
    pub fn new(mat: CMat, tol: &ToleranceConfig) -> Result<Self> {
        let (rows, cols) = mat.shape();
        if rows != cols {
            return Err(Error::NotSquare { rows, cols });
        }
        if rows == 0 {
            return Err(Error::Empty);
        }
        let scale = mat.iter().fold(1.0_f64, |m, z| m.max(z.norm()));
        for i in 0..rows {
            for j in i..rows {
                let defect = (mat[(i, j)] - mat[(j, i)].conj()).norm();
                if !defect.is_finite() || defect > tol.hermitian * scale {
                    return Err(Error::NonHermitian { row: i, col: j, defect });
                }
            }
        }
        Ok(HermitianMatrix { mat: hermitian_part(&mat) })
    }

    /// Takes the Hermitian part of any square matrix without validation.
    ///
    /// Panics on non-square input.
    pub fn from_hermitian_part(mat: CMat) -> Self {
        assert!(mat.is_square(), "Hermitian part of a non-square matrix");
        HermitianMatrix { mat: hermitian_part(&mat) }
    }

    /// Builds from row-major real entries.
    pub fn from_real(d: usize, entries: &[f64]) -> Result<Self> {
        if entries.len() != d * d {
            return Err(Error::DimMismatch { expected: d * d, found: entries.len() });
        }
        let m = CMat::from_row_iterator(d, d, entries.iter().map(|&x| C64::new(x, 0.0)));
        Self::new(m, &ToleranceConfig::default())
    }

    /// Builds from row-major complex entries.
    pub fn from_complex(d: usize, entries: &[C64]) -> Result<Self> {
        if entries.len() != d * d {
            return Err(Error::DimMismatch { expected: d * d, found: entries.len() });
        }
        Self::new(CMat::from_row_slice(d, d, entries), &ToleranceConfig::default())
    }

    pub fn identity(d: usize) -> Self {
        HermitianMatrix { mat: CMat::identity(d, d) }
    }

    pub fn zeros(d: usize) -> Self {
        HermitianMatrix { mat: CMat::zeros(d, d) }
    }

    pub fn diag(values: &[f64]) -> Self {
        let d = values.len();
        let mut m = CMat::zeros(d, d);
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = C64::new(v, 0.0);
        }
        HermitianMatrix { mat: m }
    }

    /// `|v><v|`.
    pub fn outer(v: &[C64]) -> Self {
        let col = nalgebra::DVector::from_column_slice(v);
        HermitianMatrix { mat: &col * col.adjoint() }
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn as_mat(&self) -> &CMat {
        &self.mat
    }

    pub fn into_mat(self) -> CMat {
        self.mat
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.mat[(i, j)]
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|i| self.mat[(i, i)].re).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.mat.norm()
    }

    pub fn scale(&self, s: f64) -> Self {
        HermitianMatrix { mat: self.mat.scale(s) }
    }

    /// `U A U*` for any (not necessarily square) `U`.
    pub fn conjugate_by(&self, u: &CMat) -> Self {
        HermitianMatrix::from_hermitian_part(u * &self.mat * u.adjoint())
    }

    /// `A M A`.
    pub fn sandwich(&self, middle: &HermitianMatrix) -> Self {
        HermitianMatrix::from_hermitian_part(&self.mat * &middle.mat * &self.mat)
    }

    /// Principal submatrix (or cross block when `rows != cols`) as a plain matrix.
    pub fn block(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> CMat {
        self.mat.view((rows.start, cols.start), (rows.len(), cols.len())).into_owned()
    }

    /// Frobenius distance `||A - B||_F`.
    pub fn distance(&self, other: &HermitianMatrix) -> f64 {
        (&self.mat - &other.mat).norm()
    }

    /// `||A - B||_F / max(||B||_F, tiny)`.
    pub fn relative_distance(&self, reference: &HermitianMatrix) -> f64 {
        self.distance(reference) / reference.frobenius_norm().max(f64::MIN_POSITIVE)
    }
}

impl AsRef<HermitianMatrix> for HermitianMatrix {
    fn as_ref(&self) -> &HermitianMatrix {
        self
    }
}

impl Add for &HermitianMatrix {
    type Output = HermitianMatrix;
    fn add(self, rhs: &HermitianMatrix) -> HermitianMatrix {
        HermitianMatrix { mat: &self.mat + &rhs.mat }
    }
}

impl Sub for &HermitianMatrix {
    type Output = HermitianMatrix;
    fn sub(self, rhs: &HermitianMatrix) -> HermitianMatrix {
        HermitianMatrix { mat: &self.mat - &rhs.mat }
    }
}

impl Mul<f64> for &HermitianMatrix {
    type Output = HermitianMatrix;
    fn mul(self, rhs: f64) -> HermitianMatrix {
        self.scale(rhs)
    }
}

/// Pauli matrices `sigma_1, sigma_2, sigma_3`.
pub fn pauli() -> [HermitianMatrix; 3] {
    let o = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    let i = C64::new(0.0, 1.0);
    [
        HermitianMatrix { mat: CMat::from_row_slice(2, 2, &[o, one, one, o]) },
        HermitianMatrix { mat: CMat::from_row_slice(2, 2, &[o, -i, i, o]) },
        HermitianMatrix { mat: CMat::from_row_slice(2, 2, &[one, o, o, -one]) },
    ]
}
