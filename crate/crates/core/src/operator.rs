//! Dense complex Hermitian linear algebra.
//!
//! Spectral decomposition is delegated to nalgebra; everything built on top of
//! it (Jordan split, norms, square roots, fidelity) lives here so that every
//! caller agrees on how near-zero eigenvalues are bucketed.

use alloc::vec::Vec;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::ensemble::DensityMatrix;
use crate::error::{Error, Result};
use crate::tolerance::{HERM_TOL, PSD_TOL, RECON_TOL, ZERO_TOL};

/// Dense complex square matrix, row/column indexed as `m[(row, col)]`.
pub type CMatrix = DMatrix<Complex64>;

const EIG_MAX_ITER: usize = 10_000;
const SQRT_NOISE_FACTOR: f64 = 8.0;

/// Largest absolute entry of a matrix, `0` for an empty one.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| f64::max(acc, z.norm()))
}

/// `tr(AB)` without forming the product.
pub fn trace_of_product(a: &CMatrix, b: &CMatrix) -> Complex64 {
    let n = a.nrows();
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..n {
        for k in 0..n {
            acc += a[(i, k)] * b[(k, i)];
        }
    }
    acc
}

/// Self-adjoint operator on a finite-dimensional Hilbert space.
///
/// Construction checks `max|A - A^dagger| <= HERM_TOL * max(1, max|A|)` and then
/// replaces the matrix by `(A + A^dagger) / 2`, so the stored matrix is exactly
/// Hermitian.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator {
    matrix: CMatrix,
}

impl HermitianOperator {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::NotSquare {
                rows: matrix.nrows(),
                cols: matrix.ncols(),
            });
        }
        if matrix.nrows() == 0 {
            return Err(Error::Empty);
        }
        if matrix
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::NonFinite);
        }
        let asym = max_abs(&(&matrix - matrix.adjoint()));
        if asym > HERM_TOL * f64::max(1.0, max_abs(&matrix)) {
            return Err(Error::NonHermitian(asym));
        }
        Ok(Self::symmetrized(matrix))
    }

    /// Hermitian part `(A + A^dagger) / 2` of an arbitrary square matrix.
    pub fn symmetrized(matrix: CMatrix) -> Self {
        let adj = matrix.adjoint();
        Self {
            matrix: (matrix + adj).scale(0.5),
        }
    }

    pub fn from_real_diagonal(diagonal: &[f64]) -> Self {
        let n = diagonal.len();
        Self {
            matrix: CMatrix::from_fn(n, n, |i, j| {
                if i == j {
                    Complex64::new(diagonal[i], 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            }),
        }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            matrix: CMatrix::zeros(dim, dim),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            matrix: CMatrix::identity(dim, dim),
        }
    }

    /// Rank-one projector `|v><v| / <v|v>`.
    pub fn projector_onto(vector: &[Complex64]) -> Self {
        let n = vector.len();
        let norm_sq: f64 = vector.iter().map(|z| z.norm_sqr()).sum();
        Self::symmetrized(CMatrix::from_fn(n, n, |i, j| {
            vector[i] * vector[j].conj() / norm_sq
        }))
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|i| self.matrix[(i, i)].re).sum()
    }

    pub fn max_abs(&self) -> f64 {
        max_abs(&self.matrix)
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self {
            matrix: self.matrix.scale(factor),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(Self {
            matrix: &self.matrix + &other.matrix,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(Self {
            matrix: &self.matrix - &other.matrix,
        })
    }

    /// `U^dagger A U` for a square `U` of matching size.
    pub fn conjugate_by(&self, unitary: &CMatrix) -> Self {
        Self::symmetrized(unitary.adjoint() * &self.matrix * unitary)
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(hermitian_eig(self)?.eigenvalues[0])
    }

    pub(crate) fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(())
    }
}

/// `A = V diag(eigenvalues) V^dagger` with eigenvalues in ascending order.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    /// Orthonormal eigenvectors stored as columns, ordered like `eigenvalues`.
    pub eigenvectors: CMatrix,
}

impl SpectralDecomposition {
    /// Functional calculus: `V diag(f(lambda)) V^dagger`.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> HermitianOperator {
        let n = self.eigenvalues.len();
        let mut scaled = self.eigenvectors.clone();
        for (k, &lambda) in self.eigenvalues.iter().enumerate() {
            let w = f(lambda);
            for row in 0..n {
                scaled[(row, k)] *= w;
            }
        }
        HermitianOperator::symmetrized(scaled * self.eigenvectors.adjoint())
    }

    pub fn reconstruct(&self) -> HermitianOperator {
        self.map(|lambda| lambda)
    }

    /// Sum of eigenvalues strictly above `ZERO_TOL`.
    pub fn positive_sum(&self) -> f64 {
        self.eigenvalues.iter().filter(|&&l| l > ZERO_TOL).sum()
    }

    /// Sum of `|lambda|` over eigenvalues below `-ZERO_TOL`.
    pub fn negative_sum(&self) -> f64 {
        -self
            .eigenvalues
            .iter()
            .filter(|&&l| l < -ZERO_TOL)
            .sum::<f64>()
    }

    /// Orthogonal projector onto the span of eigenvectors with `lambda > ZERO_TOL`.
    pub fn positive_projector(&self) -> HermitianOperator {
        self.map(|lambda| if lambda > ZERO_TOL { 1.0 } else { 0.0 })
    }
}

/// Positive and negative parts of a Hermitian operator, `A = positive - negative`.
#[derive(Debug, Clone)]
pub struct JordanParts {
    pub positive: HermitianOperator,
    pub negative: HermitianOperator,
}

pub fn hermitian_eig(a: &HermitianOperator) -> Result<SpectralDecomposition> {
    let n = a.dim();
    let eig = SymmetricEigen::try_new(a.matrix.clone(), f64::EPSILON, EIG_MAX_ITER)
        .ok_or(Error::NumericalFailure)?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let eigenvalues: Vec<f64> = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let eigenvectors = CMatrix::from_fn(n, n, |row, col| eig.eigenvectors[(row, order[col])]);

    if eigenvalues.iter().any(|l| !l.is_finite()) {
        return Err(Error::NumericalFailure);
    }
    let decomposition = SpectralDecomposition {
        eigenvalues,
        eigenvectors,
    };
    let scale = f64::max(1.0, a.max_abs());
    let recon = max_abs(&(decomposition.reconstruct().matrix - &a.matrix));
    if recon > RECON_TOL * scale {
        return Err(Error::NumericalFailure);
    }
    Ok(decomposition)
}

/// Split `A` into `A^(+)` (eigenvalues `> ZERO_TOL`) and `A^(-)` (absolute
/// values of eigenvalues `< -ZERO_TOL`). Eigenvalues with `|lambda| <= ZERO_TOL`
/// land in neither part.
pub fn jordan_parts(a: &HermitianOperator) -> Result<JordanParts> {
    let eig = hermitian_eig(a)?;
    Ok(JordanParts {
        positive: eig.map(|l| if l > ZERO_TOL { l } else { 0.0 }),
        negative: eig.map(|l| if l < -ZERO_TOL { -l } else { 0.0 }),
    })
}

/// `||A||_1 = sum |lambda_k|`.
pub fn trace_norm(a: &HermitianOperator) -> Result<f64> {
    Ok(hermitian_eig(a)?.eigenvalues.iter().map(|l| l.abs()).sum())
}

/// `||A||_0 = max |lambda_k|`.
pub fn operator_norm(a: &HermitianOperator) -> Result<f64> {
    Ok(hermitian_eig(a)?
        .eigenvalues
        .iter()
        .fold(0.0, |acc, l| f64::max(acc, l.abs())))
}

/// `||A^(+)||_1`, the sum of eigenvalues above `ZERO_TOL`.
pub fn positive_part_norm(a: &HermitianOperator) -> Result<f64> {
    Ok(hermitian_eig(a)?.positive_sum())
}

/// Projector onto the eigenspace of strictly positive eigenvalues.
pub fn positive_projector(a: &HermitianOperator) -> Result<HermitianOperator> {
    Ok(hermitian_eig(a)?.positive_projector())
}

/// Principal square root of a positive semidefinite operator.
///
/// Eigenvalues in `[-PSD_TOL, 0)` are clamped to zero, and so are positive
/// eigenvalues at the rounding-noise level `SQRT_NOISE_FACTOR * dim * eps * max|lambda|`:
/// the square root would otherwise turn `1e-17` of noise in a null direction
/// into `3e-9` of spurious weight.
pub fn sqrt_psd(a: &HermitianOperator) -> Result<HermitianOperator> {
    let eig = hermitian_eig(a)?;
    let min = eig.eigenvalues[0];
    if min < -PSD_TOL {
        return Err(Error::NotPsd(min));
    }
    let largest = eig
        .eigenvalues
        .iter()
        .fold(0.0, |acc: f64, l| acc.max(l.abs()));
    let floor = SQRT_NOISE_FACTOR * a.dim() as f64 * f64::EPSILON * largest;
    Ok(eig.map(|l| if l > floor { libm::sqrt(l) } else { 0.0 }))
}

/// Fidelity `F(rho, sigma) = ||sqrt(rho) sqrt(sigma)||_1`, evaluated as the sum of
/// singular values of the product.
pub fn fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    rho.operator().check_dim(sigma.operator())?;
    let product = sqrt_psd(rho.operator())?.matrix * sqrt_psd(sigma.operator())?.matrix;
    let svd = product.svd(false, false);
    Ok(svd.singular_values.iter().sum())
}

/// Largest entry of the commutator `AB - BA`.
pub fn commutator_max(a: &HermitianOperator, b: &HermitianOperator) -> f64 {
    max_abs(&(&a.matrix * &b.matrix - &b.matrix * &a.matrix))
}
