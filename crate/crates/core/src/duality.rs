//! Canonical duals and the identities built on them.
//!
//! Everything is inverted in span coordinates: with `Q` an orthonormal basis
//! of `span(Ψ)` and `Γ = Q* S Q`, the pseudo-inverse of `S` is
//! `S⁺ = Q Γ⁻¹ Q*` and the canonical dual is `ψ̃_i = S⁺ ψ_i`.
//! At finite scale `dom(C)` is the whole space, so the projection onto
//! `H_Ψ` is the identity.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::frameops::OperatorBundle;
use crate::numkernel::{self, CMatrix, C64};
use crate::sequences::{FiniteSequence, HVector};

#[derive(Debug, Clone)]
pub struct DualSystem {
    pub duals: FiniteSequence,
    /// `Γ⁻¹` in the span basis of the bundle (`r x r`).
    pub gamma_inv_on_span: CMatrix,
    /// `Q Γ⁻¹ Q*`.
    pub frame_operator_pinv: CMatrix,
    /// Smallest eigenvalue of `Γ`.
    pub span_lower_bound: f64,
    /// `λ_max(Γ) / λ_min(Γ)`.
    pub condition: f64,
    /// Largest reconstruction error over the span basis vectors.
    pub residual: f64,
}

impl DualSystem {
    pub fn synthesis(&self) -> CMatrix {
        self.duals.synthesis_matrix()
    }
}

fn check_len(v: &[C64], n: usize) -> Result<()> {
    if v.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            found: v.len(),
        });
    }
    Ok(())
}

fn columns_to_sequence(m: &CMatrix) -> Result<FiniteSequence> {
    let elements = (0..m.cols())
        .map(|j| HVector::new(m.column(j)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(FiniteSequence::new(m.rows(), elements)?)
}

pub fn canonical_dual(bundle: &OperatorBundle) -> Result<DualSystem> {
    let cut = bundle.cutoff();
    let threshold = cut * cut;
    if bundle.span_dim() == 0 {
        return Err(Error::DegenerateFrame {
            eigenvalue: 0.0,
            threshold,
        });
    }
    let ev = numkernel::hermitian_eigenvalues(&bundle.gamma_r)?;
    let (lo, hi) = (ev[0], ev[ev.len() - 1]);
    if lo <= threshold {
        return Err(Error::DegenerateFrame {
            eigenvalue: lo,
            threshold,
        });
    }
    let gamma_inv = numkernel::inverse_hpd(&bundle.gamma_r).map_err(|e| match e {
        Error::NotPositiveDefinite => Error::DegenerateFrame {
            eigenvalue: lo,
            threshold,
        },
        other => other,
    })?;
    let q = &bundle.span_basis;
    let s_pinv = &(q * &gamma_inv) * &q.adjoint();
    let dual_synthesis = &s_pinv * &bundle.synthesis;

    // f - Σ <f, ψ_i> ψ̃_i for each span basis vector f
    let recon = &dual_synthesis * &bundle.analysis;
    let mut residual: f64 = 0.0;
    for j in 0..q.cols() {
        let f = q.column(j);
        let g = recon.mul_vec(&f)?;
        let err: Vec<C64> = f.iter().zip(&g).map(|(a, b)| a - b).collect();
        residual = residual.max(numkernel::norm(&err));
    }

    Ok(DualSystem {
        duals: columns_to_sequence(&dual_synthesis)?,
        gamma_inv_on_span: gamma_inv,
        frame_operator_pinv: s_pinv,
        span_lower_bound: lo,
        condition: hi / lo,
        residual,
    })
}

/// `Σ_i <f, ψ̃_i> ψ̃_i`, checked against `Γ⁻¹ π f`.
pub fn dual_reconstruction_inverse(
    bundle: &OperatorBundle,
    dual: &DualSystem,
    f: &HVector,
) -> Result<HVector> {
    check_len(f.coords(), bundle.space_dim())?;
    let dd = dual.synthesis();
    let coeffs = dd.adjoint().mul_vec(f.coords())?;
    let out = dd.mul_vec(&coeffs)?;
    let direct = dual.frame_operator_pinv.mul_vec(f.coords())?;
    let diff: Vec<C64> = out.iter().zip(&direct).map(|(a, b)| a - b).collect();
    let err = numkernel::norm(&diff);
    if err > 1e-9 * (1.0 + numkernel::norm(&direct)) {
        return Err(Error::CheckFailed(format!(
            "dual series differs from the inverse frame operator by {err:e}"
        )));
    }
    Ok(HVector::new(out)?)
}

/// `C† = Γ⁻¹ C^r`, i.e. `Q Γ⁻¹ (Q* D)`, checked against the dual synthesis
/// matrix.
pub fn pseudo_inverse_analysis(bundle: &OperatorBundle, dual: &DualSystem) -> Result<CMatrix> {
    let q = &bundle.span_basis;
    let restricted = &q.adjoint() * &bundle.synthesis;
    let c_dagger = &(q * &dual.gamma_inv_on_span) * &restricted;
    let dd = dual.synthesis();
    let scale = c_dagger
        .as_dmatrix()
        .iter()
        .map(|z| z.norm())
        .fold(1.0, f64::max);
    let defect = c_dagger.max_abs_diff(&dd);
    if defect > 1e-10 * scale {
        return Err(Error::CheckFailed(format!(
            "pseudo-inverse of the analysis operator differs from the dual synthesis by {defect:e}"
        )));
    }
    Ok(c_dagger)
}

#[derive(Debug, Clone, Serialize)]
pub struct AlternativeCheck {
    pub norm_sq: f64,
    pub correction_sq: f64,
    /// `|Σ|c|² - Σ|c̃|² - Σ|c - c̃|²|`.
    pub pythagoras_defect: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct MinimalNormReport {
    pub coefficients: Vec<[f64; 2]>,
    pub norm_sq: f64,
    /// Distance from `h` to `span(Ψ)`.
    pub span_residual: f64,
    /// `false` when `h` is not in the span; the coefficients then represent
    /// its projection.
    pub representable: bool,
    pub alternative: Option<AlternativeCheck>,
    #[serde(skip)]
    pub raw: Vec<C64>,
}

pub fn minimal_norm_coefficients(
    bundle: &OperatorBundle,
    dual: &DualSystem,
    h: &HVector,
    alternative: Option<&[C64]>,
) -> Result<MinimalNormReport> {
    let n = bundle.space_dim();
    let m = bundle.len();
    check_len(h.coords(), n)?;
    let coeffs = dual.synthesis().adjoint().mul_vec(h.coords())?;
    let target = bundle.span_projector().mul_vec(h.coords())?;
    let off: Vec<C64> = h.coords().iter().zip(&target).map(|(a, b)| a - b).collect();
    let span_residual = numkernel::norm(&off);
    let h_norm = h.norm();
    let representable = span_residual <= 1e-9 * (1.0 + h_norm);
    let norm_sq: f64 = coeffs.iter().map(|z| z.norm_sqr()).sum();

    let alternative = match alternative {
        None => None,
        Some(c) => {
            check_len(c, m)?;
            let dc = bundle.synthesis.mul_vec(c)?;
            let diff: Vec<C64> = dc.iter().zip(&target).map(|(a, b)| a - b).collect();
            let residual = numkernel::norm(&diff);
            if residual > 1e-9 * (1.0 + h_norm) {
                return Err(Error::NotARepresentation { residual });
            }
            let alt_sq: f64 = c.iter().map(|z| z.norm_sqr()).sum();
            let correction_sq: f64 = c.iter().zip(&coeffs).map(|(a, b)| (a - b).norm_sqr()).sum();
            Some(AlternativeCheck {
                norm_sq: alt_sq,
                correction_sq,
                pythagoras_defect: (alt_sq - norm_sq - correction_sq).abs(),
            })
        }
    };

    Ok(MinimalNormReport {
        coefficients: coeffs.iter().map(|z| [z.re, z.im]).collect(),
        norm_sq,
        span_residual,
        representable,
        alternative,
        raw: coeffs,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Exactness {
    /// `a_j != 1`: the others still span, with this lower bound on the span.
    Removable { remaining_lower_bound: f64 },
    /// `a_j = 1`: deleting the element lowers the rank.
    CriticalElement { rank_before: usize, rank_after: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExactnessVerdict {
    /// 1-based element index.
    pub index: usize,
    pub a: f64,
    pub threshold: f64,
    pub verdict: Exactness,
}

/// Probes element `j` (1-based) with `a_j = <ψ_j, ψ̃_j>`.
pub fn exactness_probe(
    bundle: &OperatorBundle,
    dual: &DualSystem,
    j: usize,
) -> Result<ExactnessVerdict> {
    let m = bundle.len();
    if j == 0 || j > m {
        return Err(Error::IndexOutOfRange { index: j, dim: m });
    }
    let psi = bundle.element(j - 1);
    let a = numkernel::inner(&psi, dual.duals.elements()[j - 1].coords()).re;
    let tol = bundle.tol;
    let threshold = tol.rank_rel.max(tol.abs_floor) * dual.condition.max(1.0);

    let rest = bundle.synthesis.without_column(j - 1);
    let rank_before = bundle.span_dim();
    let rank_after = numkernel::numeric_rank(&rest, &tol)?;

    let verdict = if (a - 1.0).abs() > threshold {
        if rank_after != rank_before {
            return Err(Error::CheckFailed(format!(
                "element {j} judged removable (a = {a}) but deleting it drops the rank to {rank_after}"
            )));
        }
        // frame operator of the rest, restricted to the original span
        let q = &bundle.span_basis;
        let s_rest = &rest * &rest.adjoint();
        let g = &(&q.adjoint() * &s_rest) * q;
        let lo = numkernel::hermitian_eigenvalues(&g)?[0];
        // NaN must land here too
        if lo.is_nan() || lo <= 0.0 {
            return Err(Error::CheckFailed(format!(
                "element {j} judged removable but the remaining span bound is {lo:e}"
            )));
        }
        Exactness::Removable {
            remaining_lower_bound: lo,
        }
    } else {
        if rank_after >= rank_before {
            return Err(Error::CheckFailed(format!(
                "element {j} judged critical (a = {a}) but deleting it keeps rank {rank_after}"
            )));
        }
        Exactness::CriticalElement {
            rank_before,
            rank_after,
        }
    };
    Ok(ExactnessVerdict {
        index: j,
        a,
        threshold,
        verdict,
    })
}

/// First element (1-based) lying in the span of the others.
pub fn dependent_column(bundle: &OperatorBundle) -> Result<Option<usize>> {
    let rank = bundle.span_dim();
    for j in 0..bundle.len() {
        let rest = bundle.synthesis.without_column(j);
        if numkernel::numeric_rank(&rest, &bundle.tol)? >= rank {
            return Ok(Some(j + 1));
        }
    }
    Ok(None)
}

#[derive(Debug, Clone)]
pub struct BiorthogonalSystem {
    pub sequence: FiniteSequence,
    /// Entry `(i, j)` is `<ψ_i, ψ̃_j>`.
    pub matrix: CMatrix,
    pub max_defect: f64,
}

pub fn biorthogonal_system(
    bundle: &OperatorBundle,
    dual: &DualSystem,
) -> Result<BiorthogonalSystem> {
    if let Some(index) = dependent_column(bundle)? {
        return Err(Error::NotMinimal { index });
    }
    // <ψ_i, ψ̃_j> = (D̃* D)_{j i}
    let matrix = (&dual.synthesis().adjoint() * &bundle.synthesis).adjoint();
    let defect = matrix.max_abs_diff(&CMatrix::identity(bundle.len()));
    let limit = 1e-9 * dual.condition.max(1.0);
    if defect > limit {
        return Err(Error::CheckFailed(format!(
            "biorthogonality defect {defect:e} exceeds {limit:e}"
        )));
    }
    Ok(BiorthogonalSystem {
        sequence: dual.duals.clone(),
        matrix,
        max_defect: defect,
    })
}

/// `|<h, g> - Σ_i <h, ψ̃_i> <ψ_i, g>|`.
pub fn weak_representation_check(
    bundle: &OperatorBundle,
    dual: &DualSystem,
    h: &HVector,
    g: &HVector,
) -> Result<f64> {
    let n = bundle.space_dim();
    check_len(h.coords(), n)?;
    check_len(g.coords(), n)?;
    let direct = numkernel::inner(h.coords(), g.coords());
    let sum: C64 = dual
        .duals
        .elements()
        .iter()
        .enumerate()
        .map(|(i, d)| numkernel::inner(h.coords(), d.coords()) * numkernel::inner(&bundle.element(i), g.coords()))
        .sum();
    Ok((direct - sum).norm())
}

/// The seven finite-scale conditions equivalent for complete lower frame
/// sequences, each evaluated by its own route.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EquivalentConditions {
    pub riesz_fischer: bool,
    pub minimal: bool,
    pub omega_independent: bool,
    pub biorthogonal_exists: bool,
    pub biorthogonal_unique_on_span: bool,
    pub biorthogonal_with_dual: bool,
    pub exact: bool,
}

impl EquivalentConditions {
    pub fn as_array(&self) -> [bool; 7] {
        [
            self.riesz_fischer,
            self.minimal,
            self.omega_independent,
            self.biorthogonal_exists,
            self.biorthogonal_unique_on_span,
            self.biorthogonal_with_dual,
            self.exact,
        ]
    }

    pub fn all_agree(&self) -> bool {
        let a = self.as_array();
        a.iter().all(|&x| x == a[0])
    }
}

pub fn equivalent_conditions(
    bundle: &OperatorBundle,
    dual: &DualSystem,
) -> Result<EquivalentConditions> {
    let tol = bundle.tol;
    let m = bundle.len();
    let cut = bundle.cutoff();

    // coefficient-side lower bound
    let a_prime = numkernel::sigma_min_full(&bundle.synthesis)?;
    let riesz_fischer = a_prime > cut;

    let minimal = dependent_column(bundle)?.is_none();

    // ker(Gram) = ker(D); the Gram eigenvalues themselves carry eps·σmax² noise,
    // far above cut², so the rank is read off D
    let omega_independent = numkernel::numeric_rank(&bundle.synthesis, &tol)? == m;

    // Φ* D = I solved by least squares: Φ = (D⁺)*
    let d_pinv = numkernel::pinv(&bundle.synthesis, &tol)?;
    let check = &d_pinv * &bundle.synthesis;
    let biorthogonal_exists = check.max_abs_diff(&CMatrix::identity(m)) <= 1e-8;

    // within span(Ψ): M = Q* D, solutions Y with M* Y = I are unique iff M* is injective
    let restricted = &bundle.span_basis.adjoint() * &bundle.synthesis;
    let restricted_rank = numkernel::numeric_rank(&restricted, &tol)?;
    let biorthogonal_unique_on_span = restricted_rank == m && restricted_rank == bundle.span_dim();

    let cross = &dual.synthesis().adjoint() * &bundle.synthesis;
    let biorthogonal_with_dual =
        cross.max_abs_diff(&CMatrix::identity(m)) <= 1e-8 * dual.condition.max(1.0);

    let mut exact = true;
    for j in 1..=m {
        if matches!(
            exactness_probe(bundle, dual, j)?.verdict,
            Exactness::Removable { .. }
        ) {
            exact = false;
            break;
        }
    }

    Ok(EquivalentConditions {
        riesz_fischer,
        minimal,
        omega_independent,
        biorthogonal_exists,
        biorthogonal_unique_on_span,
        biorthogonal_with_dual,
        exact,
    })
}
