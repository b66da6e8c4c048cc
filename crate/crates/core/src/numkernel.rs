//! Dense complex linear algebra: SVD, pseudo-inverse, rank and smallest
//! singular values under a single tolerance policy.
//!
//! Every "closed range", "span" or "kernel" decision elsewhere in the crate
//! goes through [`Tolerance::cutoff`], so a report can always say which
//! threshold produced a verdict.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Relative and absolute singular-value thresholds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub rank_rel: f64,
    pub abs_floor: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            rank_rel: 1e-10,
            abs_floor: 1e-14,
        }
    }
}

impl Tolerance {
    pub fn new(rank_rel: f64, abs_floor: f64) -> Result<Self> {
        if !(rank_rel > 0.0 && rank_rel.is_finite() && abs_floor > 0.0 && abs_floor.is_finite()) {
            return Err(Error::Config(format!(
                "tolerances must be finite and strictly positive (rank_rel = {rank_rel}, abs_floor = {abs_floor})"
            )));
        }
        Ok(Self {
            rank_rel,
            abs_floor,
        })
    }

    /// Singular values at or below this value count as zero.
    pub fn cutoff(&self, sigma_max: f64) -> f64 {
        (self.rank_rel * sigma_max).max(self.abs_floor)
    }
}

/// Dense complex matrix. Indices are 0-based.
#[derive(Clone, PartialEq)]
pub struct CMatrix(DMatrix<C64>);

impl fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CMatrix {}x{} [", self.rows(), self.cols())?;
        for r in 0..self.rows() {
            write!(f, "\n  ")?;
            for c in 0..self.cols() {
                let z = self.get(r, c);
                write!(f, "{:+.6}{:+.6}i ", z.re, z.im)?;
            }
        }
        write!(f, "]")
    }
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self(DMatrix::zeros(rows, cols))
    }

    pub fn identity(n: usize) -> Self {
        Self(DMatrix::identity(n, n))
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl FnMut(usize, usize) -> C64) -> Self {
        Self(DMatrix::from_fn(rows, cols, f))
    }

    /// Real matrix given row by row. Panics on ragged input.
    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let ncols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == ncols), "ragged rows");
        Self::from_fn(rows.len(), ncols, |r, c| C64::new(rows[r][c], 0.0))
    }

    /// Builds a matrix whose `j`-th column is `columns[j]`.
    pub fn from_columns(nrows: usize, columns: &[Vec<C64>]) -> Result<Self> {
        for (j, col) in columns.iter().enumerate() {
            if col.len() != nrows {
                return Err(Error::Shape(format!(
                    "column {j} has length {}, expected {nrows}",
                    col.len()
                )));
            }
        }
        Ok(Self::from_fn(nrows, columns.len(), |r, c| columns[c][r]))
    }

    pub fn from_dmatrix(m: DMatrix<C64>) -> Self {
        Self(m)
    }

    pub fn as_dmatrix(&self) -> &DMatrix<C64> {
        &self.0
    }

    pub fn into_dmatrix(self) -> DMatrix<C64> {
        self.0
    }

    pub fn rows(&self) -> usize {
        self.0.nrows()
    }

    pub fn cols(&self) -> usize {
        self.0.ncols()
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.0[(row, col)]
    }

    pub fn set(&mut self, row: usize, col: usize, value: C64) {
        self.0[(row, col)] = value;
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        self.0.column(j).iter().copied().collect()
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn scale(&self, t: C64) -> Self {
        Self(&self.0 * t)
    }

    pub fn mul_vec(&self, v: &[C64]) -> Result<Vec<C64>> {
        if v.len() != self.cols() {
            return Err(Error::LengthMismatch {
                expected: self.cols(),
                found: v.len(),
            });
        }
        Ok((0..self.rows())
            .map(|r| (0..self.cols()).map(|c| self.get(r, c) * v[c]).sum())
            .collect())
    }

    /// Keeps the listed rows, in order.
    pub fn select_rows(&self, rows: &[usize]) -> Self {
        Self::from_fn(rows.len(), self.cols(), |r, c| self.get(rows[r], c))
    }

    /// Keeps the listed columns, in order.
    pub fn select_columns(&self, cols: &[usize]) -> Self {
        Self::from_fn(self.rows(), cols.len(), |r, c| self.get(r, cols[c]))
    }

    pub fn without_column(&self, j: usize) -> Self {
        let keep: Vec<usize> = (0..self.cols()).filter(|&c| c != j).collect();
        self.select_columns(&keep)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entrywise modulus of `self - other`. Shapes must agree.
    pub fn max_abs_diff(&self, other: &CMatrix) -> f64 {
        assert_eq!(
            (self.rows(), self.cols()),
            (other.rows(), other.cols()),
            "shape mismatch in max_abs_diff"
        );
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest entrywise modulus of `self - self*`.
    pub fn hermitian_defect(&self) -> f64 {
        if self.rows() != self.cols() {
            return f64::INFINITY;
        }
        self.max_abs_diff(&self.adjoint())
    }

    pub fn first_non_finite(&self) -> Option<(usize, usize)> {
        for c in 0..self.cols() {
            for r in 0..self.rows() {
                let z = self.get(r, c);
                if !(z.re.is_finite() && z.im.is_finite()) {
                    return Some((r, c));
                }
            }
        }
        None
    }

    fn check_finite(&self) -> Result<()> {
        match self.first_non_finite() {
            Some((row, col)) => Err(Error::NonFinite { row, col }),
            None => Ok(()),
        }
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;
    fn mul(self, rhs: &CMatrix) -> CMatrix {
        CMatrix(&self.0 * &rhs.0)
    }
}

impl Add for &CMatrix {
    type Output = CMatrix;
    fn add(self, rhs: &CMatrix) -> CMatrix {
        CMatrix(&self.0 + &rhs.0)
    }
}

impl Sub for &CMatrix {
    type Output = CMatrix;
    fn sub(self, rhs: &CMatrix) -> CMatrix {
        CMatrix(&self.0 - &rhs.0)
    }
}

/// Full singular value decomposition `M = U diag(σ) V*`.
///
/// `left_basis` is `rows x rows` and `right_basis` is `cols x cols`, both
/// unitary; `singular_values` has `min(rows, cols)` entries in non-increasing
/// order.
#[derive(Debug, Clone)]
pub struct SvdResult {
    pub singular_values: Vec<f64>,
    pub left_basis: CMatrix,
    pub right_basis: CMatrix,
}

impl SvdResult {
    /// `U diag(σ) V*` rebuilt from the factors.
    pub fn reconstruct(&self) -> CMatrix {
        let rows = self.left_basis.rows();
        let cols = self.right_basis.rows();
        let mut sigma = CMatrix::zeros(rows, cols);
        for (i, &s) in self.singular_values.iter().enumerate() {
            sigma.set(i, i, C64::new(s, 0.0));
        }
        &(&self.left_basis * &sigma) * &self.right_basis.adjoint()
    }

    pub fn sigma_max(&self) -> f64 {
        self.singular_values.first().copied().unwrap_or(0.0)
    }

    pub fn rank(&self, tol: &Tolerance) -> usize {
        let cut = tol.cutoff(self.sigma_max());
        self.singular_values.iter().filter(|&&s| s > cut).count()
    }
}

/// Thin SVD sorted by decreasing singular value: `(σ, U_thin, V_thin)`.
fn to_faer(m: &CMatrix) -> faer::Mat<C64> {
    faer::Mat::from_fn(m.rows(), m.cols(), |r, c| m.get(r, c))
}

fn no_convergence(what: &str) -> Error {
    Error::CheckFailed(format!("{what} did not converge"))
}

// nalgebra's complex SVD can return factors that do not reproduce a
// rank-deficient input, so factorizations go through faer.
fn thin_svd(m: &CMatrix) -> Result<(Vec<f64>, CMatrix, CMatrix)> {
    let (rows, cols) = (m.rows(), m.cols());
    let k = rows.min(cols);
    if k == 0 {
        return Ok((Vec::new(), CMatrix::zeros(rows, 0), CMatrix::zeros(cols, 0)));
    }
    let svd = to_faer(m).thin_svd().map_err(|_| no_convergence("SVD"))?;
    // already non-increasing
    let sigma = (0..k).map(|i| svd.S()[i].re.max(0.0)).collect();
    let u = CMatrix::from_fn(rows, k, |r, c| svd.U()[(r, c)]);
    let v = CMatrix::from_fn(cols, k, |r, c| svd.V()[(r, c)]);
    Ok((sigma, u, v))
}

/// Extends orthonormal columns `q` (n x k) to an n x n unitary matrix by
/// greedily orthogonalizing standard basis vectors.
fn complete_unitary(q: &CMatrix) -> CMatrix {
    let n = q.rows();
    let mut cols: Vec<Vec<C64>> = (0..q.cols()).map(|j| q.column(j)).collect();
    while cols.len() < n {
        let mut best: Option<(f64, Vec<C64>)> = None;
        for e in 0..n {
            let mut r = vec![C64::new(0.0, 0.0); n];
            r[e] = C64::new(1.0, 0.0);
            // two passes of modified Gram-Schmidt
            for _ in 0..2 {
                for c in &cols {
                    let proj: C64 = c.iter().zip(&r).map(|(ci, ri)| ci.conj() * ri).sum();
                    for (ri, ci) in r.iter_mut().zip(c) {
                        *ri -= proj * ci;
                    }
                }
            }
            let norm = r.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if best.as_ref().is_none_or(|(b, _)| norm > *b) {
                best = Some((norm, r));
            }
        }
        let (norm, r) = best.expect("n > 0 when completing");
        cols.push(r.into_iter().map(|z| z / norm).collect());
    }
    CMatrix::from_fn(n, n, |r, c| cols[c][r])
}

pub fn svd(m: &CMatrix) -> Result<SvdResult> {
    m.check_finite()?;
    let (sigma, u, v) = thin_svd(m)?;
    let left_basis = if u.cols() < u.rows() {
        complete_unitary(&u)
    } else {
        u
    };
    let right_basis = if v.cols() < v.rows() {
        complete_unitary(&v)
    } else {
        v
    };
    Ok(SvdResult {
        singular_values: sigma,
        left_basis,
        right_basis,
    })
}

/// Singular values only, non-increasing.
pub fn singular_values(m: &CMatrix) -> Result<Vec<f64>> {
    m.check_finite()?;
    if m.rows().min(m.cols()) == 0 {
        return Ok(Vec::new());
    }
    let s = to_faer(m)
        .singular_values()
        .map_err(|_| no_convergence("SVD"))?;
    Ok(s.into_iter().map(|x| x.max(0.0)).collect())
}

/// Moore-Penrose pseudo-inverse; singular values at or below
/// `tol.cutoff(σ_max)` are treated as zero.
pub fn pinv(m: &CMatrix, tol: &Tolerance) -> Result<CMatrix> {
    m.check_finite()?;
    let (sigma, u, v) = thin_svd(m)?;
    let cut = tol.cutoff(sigma.first().copied().unwrap_or(0.0));
    let mut out = CMatrix::zeros(m.cols(), m.rows());
    for (i, &s) in sigma.iter().enumerate() {
        if s <= cut {
            break;
        }
        let inv = 1.0 / s;
        for r in 0..m.cols() {
            let vr = v.get(r, i) * inv;
            for c in 0..m.rows() {
                let cur = out.get(r, c);
                out.set(r, c, cur + vr * u.get(c, i).conj());
            }
        }
    }
    Ok(out)
}

pub fn numeric_rank(m: &CMatrix, tol: &Tolerance) -> Result<usize> {
    let s = singular_values(m)?;
    let cut = tol.cutoff(s.first().copied().unwrap_or(0.0));
    Ok(s.iter().filter(|&&x| x > cut).count())
}

/// Smallest singular value of `m` viewed as a map on its full domain
/// `C^cols`: zero when `rows < cols` (structural kernel), `+inf` for an empty
/// domain.
pub fn sigma_min_full(m: &CMatrix) -> Result<f64> {
    if m.cols() == 0 {
        return Ok(f64::INFINITY);
    }
    if m.rows() < m.cols() {
        m.check_finite()?;
        return Ok(0.0);
    }
    Ok(singular_values(m)?.last().copied().unwrap_or(0.0))
}

/// Eigenvalues of a Hermitian matrix in ascending order.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Result<Vec<f64>> {
    m.check_finite()?;
    if m.rows() != m.cols() {
        return Err(Error::Shape(format!(
            "eigenvalues need a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    if m.rows() == 0 {
        return Ok(Vec::new());
    }
    // symmetrize so rounding noise above the diagonal cannot leak in
    let h = CMatrix::from_fn(m.rows(), m.cols(), |r, c| {
        (m.get(r, c) + m.get(c, r).conj()) * 0.5
    });
    to_faer(&h)
        .self_adjoint_eigenvalues(faer::Side::Lower)
        .map_err(|_| no_convergence("eigenvalue solver"))
}

/// Inverse of a Hermitian positive definite matrix via Cholesky.
pub fn inverse_hpd(m: &CMatrix) -> Result<CMatrix> {
    m.check_finite()?;
    if m.rows() != m.cols() {
        return Err(Error::Shape(format!(
            "inverse needs a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    if m.rows() == 0 {
        return Ok(CMatrix::zeros(0, 0));
    }
    use faer::linalg::solvers::DenseSolveCore;
    let n = m.rows();
    // only the lower triangle is read; symmetrize first so both halves count
    let h = CMatrix::from_fn(n, n, |r, c| (m.get(r, c) + m.get(c, r).conj()) * 0.5);
    let llt = to_faer(&h)
        .llt(faer::Side::Lower)
        .map_err(|_| Error::NotPositiveDefinite)?;
    let inv = llt.inverse();
    Ok(CMatrix::from_fn(n, n, |r, c| inv[(r, c)]))
}

pub fn inner(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x * y.conj()).sum()
}

pub fn norm(a: &[C64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx_eq::close;

    mod approx_eq {
        pub fn close(a: f64, b: f64, tol: f64) -> bool {
            (a - b).abs() <= tol
        }
    }

    fn upper() -> CMatrix {
        CMatrix::from_real_rows(&[&[1.0, 1.0], &[0.0, 1.0]])
    }

    #[test]
    fn svd_identity() {
        let s = svd(&CMatrix::identity(2)).unwrap();
        assert_eq!(s.singular_values, vec![1.0, 1.0]);
    }

    #[test]
    fn svd_golden_ratio_pair() {
        let s = svd(&upper()).unwrap();
        // eigenvalues of [[1,1],[1,2]]
        let hi = ((3.0 + 5f64.sqrt()) / 2.0).sqrt();
        let lo = ((3.0 - 5f64.sqrt()) / 2.0).sqrt();
        assert!(close(s.singular_values[0], hi, 1e-12));
        assert!(close(s.singular_values[1], lo, 1e-12));
        assert!(s.reconstruct().max_abs_diff(&upper()) < 1e-12);
    }

    #[test]
    fn svd_zero_matrix() {
        let s = svd(&CMatrix::zeros(2, 2)).unwrap();
        assert_eq!(s.singular_values, vec![0.0, 0.0]);
    }

    #[test]
    fn svd_rejects_nan() {
        let mut m = CMatrix::identity(2);
        m.set(1, 0, C64::new(f64::NAN, 0.0));
        assert!(matches!(svd(&m), Err(Error::NonFinite { row: 1, col: 0 })));
    }

    #[test]
    fn svd_rectangular_bases_are_unitary() {
        let m = CMatrix::from_real_rows(&[&[1.0, 0.0, 1.0], &[0.0, 1.0, 1.0]]);
        let s = svd(&m).unwrap();
        assert_eq!(s.left_basis.rows(), 2);
        assert_eq!(s.right_basis.rows(), 3);
        assert_eq!(s.right_basis.cols(), 3);
        let vv = &s.right_basis.adjoint() * &s.right_basis;
        assert!(vv.max_abs_diff(&CMatrix::identity(3)) < 1e-12);
        assert!(s.reconstruct().max_abs_diff(&m) < 1e-12);
    }

    #[test]
    fn pinv_examples() {
        let tol = Tolerance::default();
        let id = CMatrix::identity(3);
        assert!(pinv(&id, &tol).unwrap().max_abs_diff(&id) < 1e-14);

        let proj = CMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, 0.0]]);
        assert!(pinv(&proj, &tol).unwrap().max_abs_diff(&proj) < 1e-14);

        let m = CMatrix::from_real_rows(&[&[2.0, 1.0], &[1.0, 1.0]]);
        let expected = CMatrix::from_real_rows(&[&[1.0, -1.0], &[-1.0, 2.0]]);
        assert!(pinv(&m, &tol).unwrap().max_abs_diff(&expected) < 1e-12);
    }

    #[test]
    fn pinv_of_empty_matrix_has_transposed_shape() {
        let p = pinv(&CMatrix::zeros(0, 3), &Tolerance::default()).unwrap();
        assert_eq!((p.rows(), p.cols()), (3, 0));
    }

    #[test]
    fn rank_examples() {
        let tol = Tolerance::default();
        assert_eq!(numeric_rank(&CMatrix::identity(3), &tol).unwrap(), 3);
        let m = CMatrix::from_real_rows(&[&[1.0, 0.0, 1.0], &[0.0, 1.0, 1.0]]);
        assert_eq!(numeric_rank(&m, &tol).unwrap(), 2);
        assert_eq!(numeric_rank(&CMatrix::zeros(3, 4), &tol).unwrap(), 0);
    }

    #[test]
    fn sigma_min_examples() {
        assert_eq!(sigma_min_full(&CMatrix::identity(4)).unwrap(), 1.0);
        let lo = ((3.0 - 5f64.sqrt()) / 2.0).sqrt();
        assert!(close(sigma_min_full(&upper()).unwrap(), lo, 1e-12));
        let wide = CMatrix::from_real_rows(&[&[1.0, 0.0, 1.0], &[0.0, 1.0, 1.0]]);
        assert_eq!(sigma_min_full(&wide).unwrap(), 0.0);
        // kernel vector (1, 1, -1) confirms the structural zero
        let k = wide
            .mul_vec(&[C64::new(1.0, 0.0), C64::new(1.0, 0.0), C64::new(-1.0, 0.0)])
            .unwrap();
        assert_eq!(norm(&k), 0.0);
    }

    #[test]
    fn tolerance_rejects_non_positive() {
        assert!(Tolerance::new(0.0, 1e-14).is_err());
        assert!(Tolerance::new(1e-10, -1.0).is_err());
        assert!(Tolerance::new(1e-10, 1e-14).is_ok());
    }

    #[test]
    fn hpd_inverse_matches_direct() {
        let m = CMatrix::from_real_rows(&[&[2.0, 1.0], &[1.0, 1.0]]);
        let inv = inverse_hpd(&m).unwrap();
        let expected = CMatrix::from_real_rows(&[&[1.0, -1.0], &[-1.0, 2.0]]);
        assert!(inv.max_abs_diff(&expected) < 1e-12);
        let not_pd = CMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, -1.0]]);
        assert!(matches!(inverse_hpd(&not_pd), Err(Error::NotPositiveDefinite)));
    }
}
