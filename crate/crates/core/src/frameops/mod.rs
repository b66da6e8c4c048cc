//! Frame-related operators of a finite sequence.
//!
//! For `Ψ = (ψ_1, ..., ψ_m)` in `C^n`:
//!
//! * synthesis `D` (`n x m`), column `i` is `ψ_i`;
//! * analysis `C = D*` (`m x n`), `C f = (<f, ψ_i>)_i`;
//! * frame operator `S = D C` (`n x n`);
//! * Gram matrix `U = C D` (`m x m`), `U_{ji} = <ψ_i, ψ_j>`;
//! * `Γ`, the frame operator restricted to `span(Ψ)` and expressed in an
//!   orthonormal basis of that span, so that it is invertible.
//!
//! Inner products are linear in the first argument.
//!
//! The analytic counterpart for infinite families lives in [`profile`].

pub mod profile;

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numkernel::{self, CMatrix, Tolerance, C64};
use crate::sequences::FiniteSequence;

pub use profile::{domain_profile, DomainProfile, MassTail, Support};

#[derive(Debug, Clone)]
pub struct OperatorBundle {
    /// `n x m` synthesis matrix.
    pub synthesis: CMatrix,
    /// `m x n` analysis matrix, exactly the conjugate transpose of `synthesis`.
    pub analysis: CMatrix,
    pub frame_operator: CMatrix,
    pub gram: CMatrix,
    /// `Q* S Q` for the span basis `Q`.
    pub gamma_r: CMatrix,
    /// `n x r` orthonormal basis of `span(Ψ)`.
    pub span_basis: CMatrix,
    /// Singular values of the synthesis matrix, non-increasing.
    pub singular_values: Vec<f64>,
    /// 1-based basis indices of the ambient coordinates. For a bundle built
    /// by [`assemble`] this is `1..=n`; a restricted bundle keeps only the
    /// support indices.
    pub coordinates: Vec<usize>,
    pub tol: Tolerance,
}

impl OperatorBundle {
    pub fn space_dim(&self) -> usize {
        self.synthesis.rows()
    }

    pub fn len(&self) -> usize {
        self.synthesis.cols()
    }

    pub fn is_empty(&self) -> bool {
        self.synthesis.cols() == 0
    }

    pub fn span_dim(&self) -> usize {
        self.span_basis.cols()
    }

    pub fn sigma_max(&self) -> f64 {
        self.singular_values.first().copied().unwrap_or(0.0)
    }

    /// Singular-value threshold derived from the bundle's tolerance.
    pub fn cutoff(&self) -> f64 {
        self.tol.cutoff(self.sigma_max())
    }

    /// Element `ψ_i` (0-based) as a coordinate vector.
    pub fn element(&self, i: usize) -> Vec<C64> {
        self.synthesis.column(i)
    }

    /// Orthogonal projector onto `span(Ψ)` in ambient coordinates.
    pub fn span_projector(&self) -> CMatrix {
        &self.span_basis * &self.span_basis.adjoint()
    }
}

fn hermitian_part(m: &CMatrix) -> CMatrix {
    CMatrix::from_fn(m.rows(), m.cols(), |r, c| {
        (m.get(r, c) + m.get(c, r).conj()) * 0.5
    })
}

fn bundle_from_synthesis(
    synthesis: CMatrix,
    coordinates: Vec<usize>,
    tol: &Tolerance,
) -> Result<OperatorBundle> {
    let analysis = synthesis.adjoint();
    let frame_operator = hermitian_part(&(&synthesis * &analysis));
    let gram = hermitian_part(&(&analysis * &synthesis));
    let svd = numkernel::svd(&synthesis)?;
    let rank = svd.rank(tol);
    let span_cols: Vec<usize> = (0..rank).collect();
    let span_basis = svd.left_basis.select_columns(&span_cols);
    let gamma_r = hermitian_part(&(&(&span_basis.adjoint() * &frame_operator) * &span_basis));
    Ok(OperatorBundle {
        synthesis,
        analysis,
        frame_operator,
        gram,
        gamma_r,
        span_basis,
        singular_values: svd.singular_values,
        coordinates,
        tol: *tol,
    })
}

pub fn assemble(seq: &FiniteSequence, tol: &Tolerance) -> Result<OperatorBundle> {
    let n = seq.space_dim();
    bundle_from_synthesis(seq.synthesis_matrix(), (1..=n).collect(), tol)
}

/// Operators of the projected sequence `π Ψ`, assembled inside the subspace
/// spanned by the basis vectors listed in `support` (1-based). An empty
/// support gives a bundle over a 0-dimensional space.
pub fn restricted_bundle(
    seq: &FiniteSequence,
    support: &BTreeSet<usize>,
    tol: &Tolerance,
) -> Result<OperatorBundle> {
    let n = seq.space_dim();
    if let Some(&bad) = support.iter().find(|&&k| k == 0 || k > n) {
        return Err(Error::IndexOutOfRange { index: bad, dim: n });
    }
    let rows: Vec<usize> = support.iter().map(|&k| k - 1).collect();
    let synthesis = seq.synthesis_matrix().select_rows(&rows);
    bundle_from_synthesis(synthesis, support.iter().copied().collect(), tol)
}

/// `<U c, d> = Σ_{i,j} c_i conj(d_j) <ψ_i, ψ_j>`.
pub fn gram_quadratic_form(bundle: &OperatorBundle, c: &[C64], d: &[C64]) -> Result<C64> {
    let m = bundle.len();
    for v in [c, d] {
        if v.len() != m {
            return Err(Error::LengthMismatch {
                expected: m,
                found: v.len(),
            });
        }
    }
    let uc = bundle.gram.mul_vec(c)?;
    Ok(numkernel::inner(&uc, d))
}

/// JSON view of a bundle for reports: matrices as rows of `[re, im]` pairs.
#[derive(Debug, Serialize)]
pub struct BundleReport {
    pub space_dim: usize,
    pub elements: usize,
    pub span_dim: usize,
    pub coordinates: Vec<usize>,
    pub singular_values: Vec<f64>,
    pub synthesis: Vec<Vec<[f64; 2]>>,
    pub frame_operator: Vec<Vec<[f64; 2]>>,
    pub gram: Vec<Vec<[f64; 2]>>,
    pub gamma_r: Vec<Vec<[f64; 2]>>,
}

pub fn matrix_rows(m: &CMatrix) -> Vec<Vec<[f64; 2]>> {
    (0..m.rows())
        .map(|r| {
            (0..m.cols())
                .map(|c| {
                    let z = m.get(r, c);
                    [z.re, z.im]
                })
                .collect()
        })
        .collect()
}

impl From<&OperatorBundle> for BundleReport {
    fn from(b: &OperatorBundle) -> Self {
        Self {
            space_dim: b.space_dim(),
            elements: b.len(),
            span_dim: b.span_dim(),
            coordinates: b.coordinates.clone(),
            singular_values: b.singular_values.clone(),
            synthesis: matrix_rows(&b.synthesis),
            frame_operator: matrix_rows(&b.frame_operator),
            gram: matrix_rows(&b.gram),
            gamma_r: matrix_rows(&b.gamma_r),
        }
    }
}
