//! Complex-matrix toolkit for the fixed small dimensions this crate needs:
//! 2x2 operators, 3x3 real symmetric matrices, and 4x4 two-qubit operators.
//!
//! Everything here is dense, row-major and immutable after construction.
//! There is deliberately no general linear-algebra dependency: every
//! computation in this crate fits in a 4x4 matrix.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Default tolerance for floating-point comparisons of matrix entries.
pub const DEFAULT_TOL: f64 = 1e-9;

/// A dense complex matrix with row-major storage.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Complex64>,
}

/// Summary of the Hermiticity / positivity diagnostics of a square matrix.
#[derive(Debug, Clone, Copy)]
pub struct HermitianCheckReport {
    pub is_hermitian: bool,
    /// Largest |a_ij - conj(a_ji)| over all index pairs. Always >= 0.
    pub max_asymmetry: f64,
    /// Smallest eigenvalue of the Hermitian part (a + a^dagger)/2.
    pub min_eigenvalue: f64,
    pub trace: Complex64,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Complex64::new(1.0, 0.0));
        }
        m
    }

    /// Builds a matrix from row-major complex entries.
    pub fn from_entries(rows: usize, cols: usize, entries: Vec<Complex64>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::InvalidArgument(format!(
                "expected {} entries for a {}x{} matrix, got {}",
                rows * cols,
                rows,
                cols,
                entries.len()
            )));
        }
        Ok(Self {
            rows,
            cols,
            entries,
        })
    }

    /// Builds a matrix from row-major real entries.
    pub fn from_real(rows: usize, cols: usize, entries: &[f64]) -> Result<Self> {
        Self::from_entries(
            rows,
            cols,
            entries.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
        )
    }

    /// Rank-one outer product |v><v| of a complex vector.
    pub fn outer(v: &[Complex64]) -> Self {
        let n = v.len();
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                m.set(i, j, v[i] * v[j].conj());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Complex64) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other, "add")?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a + b)
            .collect();
        Self::from_entries(self.rows, self.cols, entries)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other, "sub")?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a - b)
            .collect();
        Self::from_entries(self.rows, self.cols, entries)
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|a| a * factor).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::InvalidArgument(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 0..self.cols {
                    acc += self.get(i, k) * other.get(k, j);
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).conj());
            }
        }
        out
    }

    /// Kronecker product of two 2x2 matrices, basis order |00>,|01>,|10>,|11>.
    ///
    /// Entry ((2i+k),(2j+l)) of the result is `a[i][j] * b[k][l]`.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        if self.rows != 2 || self.cols != 2 || other.rows != 2 || other.cols != 2 {
            return Err(Error::InvalidArgument(format!(
                "tensor expects two 2x2 matrices, got {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(4, 4);
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    for l in 0..2 {
                        out.set(2 * i + k, 2 * j + l, self.get(i, j) * other.get(k, l));
                    }
                }
            }
        }
        Ok(out)
    }

    /// Sum of diagonal entries. Errors on non-square input.
    pub fn trace(&self) -> Result<Complex64> {
        if self.rows != self.cols {
            return Err(Error::InvalidArgument(format!(
                "trace of a non-square {}x{} matrix",
                self.rows, self.cols
            )));
        }
        Ok((0..self.rows).map(|i| self.get(i, i)).sum())
    }

    /// Largest entrywise modulus of the difference with `other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Hermiticity and positivity diagnostics for a square matrix.
    pub fn hermitian_report(&self) -> Result<HermitianCheckReport> {
        if self.rows != self.cols {
            return Err(Error::InvalidArgument(format!(
                "hermitian check on a non-square {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        let mut max_asymmetry: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                max_asymmetry = max_asymmetry.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        // Eigenvalues of the Hermitian part via the real symmetric embedding
        // [[X, -Y], [Y, X]] of H = X + iY; its spectrum is that of H, doubled.
        let mut embed = vec![vec![0.0f64; 2 * n]; 2 * n];
        for i in 0..n {
            for j in 0..n {
                let h = (self.get(i, j) + self.get(j, i).conj()) * 0.5;
                embed[i][j] = h.re;
                embed[i + n][j + n] = h.re;
                embed[i][j + n] = -h.im;
                embed[i + n][j] = h.im;
            }
        }
        let min_eigenvalue = jacobi_min_eigenvalue(&mut embed);
        Ok(HermitianCheckReport {
            is_hermitian: max_asymmetry <= DEFAULT_TOL,
            max_asymmetry,
            min_eigenvalue,
            trace: self.trace()?,
        })
    }

    fn check_same_shape(&self, other: &Self, op: &str) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::InvalidArgument(format!(
                "{op} requires equal shapes, got {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }
}

/// Smallest eigenvalue of a small real symmetric matrix via cyclic Jacobi
/// rotations. Input is destroyed.
#[allow(clippy::needless_range_loop)]
fn jacobi_min_eigenvalue(a: &mut [Vec<f64>]) -> f64 {
    let n = a.len();
    for _sweep in 0..64 {
        let mut off: f64 = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off = off.max(a[p][q].abs());
            }
        }
        if off < 1e-13 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    (0..n).map(|i| a[i][i]).fold(f64::INFINITY, f64::min)
}

/// Eigenvalues of a 3x3 real symmetric matrix, sorted descending.
///
/// Closed-form trigonometric solution of the characteristic cubic; no
/// iteration. The input must be real and symmetric within [`DEFAULT_TOL`].
#[allow(clippy::needless_range_loop)]
pub fn sym3_eigenvalues(m: &ComplexMatrix) -> Result<[f64; 3]> {
    if m.rows() != 3 || m.cols() != 3 {
        return Err(Error::InvalidArgument(format!(
            "sym3_eigenvalues expects a 3x3 matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let mut a = [[0.0f64; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let v = m.get(i, j);
            if v.im.abs() > DEFAULT_TOL {
                return Err(Error::InvalidArgument(format!(
                    "entry ({i},{j}) has imaginary part {}",
                    v.im
                )));
            }
            a[i][j] = v.re;
        }
    }
    for i in 0..3 {
        for j in (i + 1)..3 {
            if (a[i][j] - a[j][i]).abs() > DEFAULT_TOL {
                return Err(Error::InvalidArgument(format!(
                    "matrix is asymmetric at ({i},{j}): {} vs {}",
                    a[i][j], a[j][i]
                )));
            }
            // Symmetrize so roundoff-level asymmetry cannot bias the roots.
            let avg = 0.5 * (a[i][j] + a[j][i]);
            a[i][j] = avg;
            a[j][i] = avg;
        }
    }

    let q = (a[0][0] + a[1][1] + a[2][2]) / 3.0;
    let p2 = (a[0][0] - q).powi(2)
        + (a[1][1] - q).powi(2)
        + (a[2][2] - q).powi(2)
        + 2.0 * (a[0][1].powi(2) + a[0][2].powi(2) + a[1][2].powi(2));
    let p = (p2 / 6.0).sqrt();
    if p < 1e-14 {
        return Ok([q, q, q]);
    }
    let b = |i: usize, j: usize| (a[i][j] - if i == j { q } else { 0.0 }) / p;
    let det_b = b(0, 0) * (b(1, 1) * b(2, 2) - b(1, 2) * b(2, 1))
        - b(0, 1) * (b(1, 0) * b(2, 2) - b(1, 2) * b(2, 0))
        + b(0, 2) * (b(1, 0) * b(2, 1) - b(1, 1) * b(2, 0));
    let r = (det_b / 2.0).clamp(-1.0, 1.0);
    // acos is infinitely sensitive at r = +-1, where a rounding-level error
    // in r costs sqrt(eps) in the angle. |r| at the boundary within 1e-11
    // means a genuinely repeated eigenvalue; snap so those come out exact.
    let phi = if r > 1.0 - 1e-11 {
        0.0
    } else if r < -1.0 + 1e-11 {
        std::f64::consts::PI / 3.0
    } else {
        r.acos() / 3.0
    };
    let e1 = q + 2.0 * p * phi.cos();
    let e3 = q + 2.0 * p * (phi + 2.0 * std::f64::consts::PI / 3.0).cos();
    let e2 = 3.0 * q - e1 - e3;
    let mut eigs = [e1, e2, e3];
    eigs.sort_by(|x, y| y.total_cmp(x));
    Ok(eigs)
}

/// The Pauli matrices (sigma_x, sigma_y, sigma_z) as 2x2 complex matrices.
pub fn pauli_matrices() -> [ComplexMatrix; 3] {
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    let sx = ComplexMatrix::from_entries(2, 2, vec![zero, one, one, zero]).unwrap();
    let sy = ComplexMatrix::from_entries(2, 2, vec![zero, -i, i, zero]).unwrap();
    let sz = ComplexMatrix::from_entries(2, 2, vec![one, zero, zero, -one]).unwrap();
    [sx, sy, sz]
}
