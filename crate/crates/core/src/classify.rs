//! Frame bounds and classification flags.
//!
//! Finite sequences are classified from the singular values of the synthesis
//! matrix `D` (`n x m`):
//!
//! * `B = σ_max(D)²`;
//! * `A = σ_min(C)²` over all of `C^n`, zero unless `D` has rank `n`;
//! * `A' = σ_min(D)²` over all of `C^m`, zero unless `D` has rank `m`.
//!
//! Structured families use the weight masses of their [`DomainProfile`].

use serde::Serialize;

use crate::bound::Bound;
use crate::error::{Error, Result};
use crate::frameops::profile::{weights_limit, weights_monotone_from};
use crate::frameops::{DomainProfile, OperatorBundle};
use crate::numkernel::{self, CMatrix, Tolerance};
use crate::sequences::{StructuredSequence, WeightForm};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    /// Computed from the matrices of a finite sequence; `size` is the
    /// truncation length when the sequence came from a structured family.
    Numeric { size: Option<usize> },
    Analytic,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassificationReport {
    pub provenance: Provenance,
    pub tolerance: Tolerance,
    pub bessel_bound: Bound,
    /// `Infinite` when the lower inequality holds vacuously (nothing in the
    /// domain besides 0).
    pub lower_frame_bound: Bound,
    pub riesz_fischer_bound: f64,
    pub is_bessel: bool,
    pub is_frame: bool,
    pub is_lower_frame: bool,
    pub is_riesz_fischer: bool,
    pub is_riesz_basis: bool,
    pub is_complete: bool,
    pub is_minimal: bool,
    pub is_omega_independent: bool,
    pub is_exact: bool,
    pub notes: Vec<String>,
}

impl ClassificationReport {
    /// Checks the implications every report must satisfy.
    pub fn check_consistency(&self) -> Result<()> {
        let fail = |what: &str| Err(Error::CheckFailed(format!("classification: {what}")));
        if self.is_frame != (self.is_bessel && self.is_lower_frame) {
            return fail("frame must equal bessel and lower frame");
        }
        if self.is_riesz_basis && !(self.is_frame && self.is_minimal) {
            return fail("riesz basis must be a minimal frame");
        }
        if let (Bound::Finite(a), Bound::Finite(b)) = (self.lower_frame_bound, self.bessel_bound) {
            if self.is_lower_frame && a > b * (1.0 + 1e-9) + 1e-12 {
                return fail("lower bound exceeds upper bound");
            }
        }
        Ok(())
    }
}

/// Smallest singular value of `d` over `C^{cols}`, with numerically zero
/// values (per `tol`) clamped to 0.
fn sigma_floor(m: &CMatrix, rank: usize, full: usize) -> Result<f64> {
    if rank < full {
        return Ok(0.0);
    }
    numkernel::sigma_min_full(m)
}

pub fn classify_finite(bundle: &OperatorBundle) -> Result<ClassificationReport> {
    classify_finite_at(bundle, None)
}

/// As [`classify_finite`], recording the truncation length.
pub fn classify_finite_at(
    bundle: &OperatorBundle,
    size: Option<usize>,
) -> Result<ClassificationReport> {
    let n = bundle.space_dim();
    let m = bundle.len();
    let tol = bundle.tol;
    let rank = bundle.span_dim();
    let b = bundle.sigma_max().powi(2);

    let complete = rank == n;
    let lower_bound = if n == 0 {
        Bound::Infinite
    } else {
        Bound::Finite(sigma_floor(&bundle.analysis, rank, n)?.powi(2))
    };
    let riesz_fischer = rank == m;
    let a_prime = if m == 0 {
        0.0
    } else {
        sigma_floor(&bundle.synthesis, rank, m)?.powi(2)
    };

    // ψ_j is outside the span of the others iff deleting it lowers the rank
    let mut minimal = true;
    for j in 0..m {
        let rest = bundle.synthesis.without_column(j);
        if numkernel::numeric_rank(&rest, &tol)? >= rank {
            minimal = false;
            break;
        }
    }

    let mut notes = Vec::new();
    if n == 0 {
        notes.push("ambient space is {0}: the lower inequality holds vacuously".to_string());
    }
    if minimal != riesz_fischer {
        notes.push(format!(
            "column deletion test and kernel test disagree near the rank cutoff {:e}",
            bundle.cutoff()
        ));
    }

    let is_bessel = true;
    let is_lower_frame = complete;
    let report = ClassificationReport {
        provenance: Provenance::Numeric { size },
        tolerance: tol,
        bessel_bound: Bound::Finite(b),
        lower_frame_bound: lower_bound,
        riesz_fischer_bound: a_prime,
        is_bessel,
        is_frame: is_bessel && is_lower_frame,
        is_lower_frame,
        is_riesz_fischer: riesz_fischer,
        is_riesz_basis: complete && riesz_fischer && is_bessel,
        is_complete: complete,
        is_minimal: minimal,
        is_omega_independent: riesz_fischer,
        is_exact: minimal,
        notes,
    };
    Ok(report)
}

/// Result of the analytic classification of a structured family.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum StructuredClassification {
    Resolved { report: ClassificationReport },
    /// No analytic verdict; numbers must come from a truncation study.
    Unresolved { reason: String },
}

impl StructuredClassification {
    pub fn report(&self) -> Option<&ClassificationReport> {
        match self {
            StructuredClassification::Resolved { report } => Some(report),
            StructuredClassification::Unresolved { .. } => None,
        }
    }
}

/// `(inf_i |w_i|², some w_i == 0)`.
fn weight_extremes(w: &WeightForm) -> Result<(f64, bool)> {
    let i0 = weights_monotone_from(w)?;
    let mut inf = f64::INFINITY;
    let mut zero = false;
    for i in 1..=i0 {
        let v = w.eval(i).powi(2);
        inf = inf.min(v);
        zero |= v == 0.0;
    }
    // monotone after i0, so the tail adds only its limit
    if let Bound::Finite(l) = weights_limit(w) {
        inf = inf.min(l);
    }
    Ok((inf, zero))
}

pub fn classify_structured(
    s: &StructuredSequence,
    profile: &DomainProfile,
    tol: &Tolerance,
) -> Result<StructuredClassification> {
    let (index_map, weights) = match s {
        StructuredSequence::WeightedOnb { index_map, weights } => (index_map, weights),
        StructuredSequence::AnchoredOnb { .. } => {
            return Ok(StructuredClassification::Unresolved {
                reason: "analytic: unresolved; the anchored family is classified empirically \
                         by a truncation study"
                    .to_string(),
            })
        }
    };
    if profile.family != *s {
        return Err(Error::CheckFailed(
            "domain profile belongs to a different family".to_string(),
        ));
    }

    let mut notes = Vec::new();
    let (lower_bound, is_lower_frame) = match profile.inf_finite_mass() {
        None => {
            notes.push(
                "every mass is infinite, dom(C) = {0}: the lower inequality holds vacuously"
                    .to_string(),
            );
            (Bound::Infinite, true)
        }
        Some(a) => (Bound::Finite(a), a > 0.0),
    };
    if profile.masses.iter().any(|m| !m.is_finite()) && lower_bound.is_finite() {
        notes.push("indices with infinite mass satisfy the lower inequality vacuously".to_string());
    }
    let bessel_bound = profile.sup_mass();
    let is_bessel = bessel_bound.is_finite();

    let injective = index_map.is_injective();
    let (inf_w, zero_weight) = weight_extremes(weights)?;
    let a_prime = if injective { inf_w } else { 0.0 };
    if !injective {
        notes.push("index map is not injective: repeated directions give a kernel".to_string());
    }
    let is_riesz_fischer = injective && a_prime > 0.0;
    let is_complete = !profile.has_zero_mass();
    let is_minimal = injective && !zero_weight;

    let report = ClassificationReport {
        provenance: Provenance::Analytic,
        tolerance: *tol,
        bessel_bound,
        lower_frame_bound: lower_bound,
        riesz_fischer_bound: a_prime,
        is_bessel,
        is_frame: is_bessel && is_lower_frame,
        is_lower_frame,
        is_riesz_fischer,
        is_riesz_basis: is_complete && is_riesz_fischer && is_bessel,
        is_complete,
        is_minimal,
        is_omega_independent: is_minimal,
        is_exact: is_minimal,
        notes,
    };
    report.check_consistency()?;
    Ok(StructuredClassification::Resolved { report })
}

/// Finite-scale invertibility properties of a matrix viewed as a map
/// `C^cols -> C^rows`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InvertibilityVerdict {
    /// Bounded below: `||M x|| >= m ||x||` with `m` above the rank cutoff.
    pub bb: bool,
    pub bb_constant: Bound,
    pub injective: bool,
    pub surjective: bool,
    /// Always true for matrices; kept so the taxonomy reads as in the
    /// infinite-dimensional setting.
    pub closed_range: bool,
    pub bir: bool,
    pub bi: bool,
    pub rank: usize,
}

pub fn invertibility(m: &CMatrix, tol: &Tolerance) -> Result<InvertibilityVerdict> {
    let sv = numkernel::singular_values(m)?;
    let sigma_max = sv.first().copied().unwrap_or(0.0);
    let cut = tol.cutoff(sigma_max);
    let rank = sv.iter().filter(|&&s| s > cut).count();
    let smin = numkernel::sigma_min_full(m)?;
    let bb_constant = if smin.is_finite() {
        Bound::Finite(smin)
    } else {
        Bound::Infinite
    };
    let bb = smin > cut;
    let injective = rank == m.cols();
    let surjective = rank == m.rows();
    let closed_range = true;
    Ok(InvertibilityVerdict {
        bb,
        bb_constant,
        injective,
        surjective,
        closed_range,
        bir: bb && closed_range,
        bi: bb && surjective,
        rank,
    })
}

/// `ψ_i = e_{i+1}` as an `(n+1) x n` matrix.
pub fn shift_embedding(n: usize) -> CMatrix {
    CMatrix::from_fn(n + 1, n, |r, c| {
        if r == c + 1 {
            numkernel::C64::new(1.0, 0.0)
        } else {
            numkernel::C64::new(0.0, 0.0)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frameops::{assemble, domain_profile};
    use crate::sequences::{FiniteSequence, IndexMap};

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-9 * (1.0 + b.abs())
    }

    fn finite(e: &[&[f64]]) -> ClassificationReport {
        let seq = FiniteSequence::from_real(e).unwrap();
        classify_finite(&assemble(&seq, &Tolerance::default()).unwrap()).unwrap()
    }

    #[test]
    fn onb_is_riesz_basis() {
        let r = classify_finite(
            &assemble(&FiniteSequence::standard_basis(3), &Tolerance::default()).unwrap(),
        )
        .unwrap();
        assert_eq!(r.bessel_bound, Bound::Finite(1.0));
        assert!(close(r.lower_frame_bound.finite().unwrap(), 1.0));
        assert!(close(r.riesz_fischer_bound, 1.0));
        assert!(
            r.is_bessel
                && r.is_frame
                && r.is_lower_frame
                && r.is_riesz_fischer
                && r.is_riesz_basis
                && r.is_complete
                && r.is_minimal
                && r.is_omega_independent
                && r.is_exact
        );
    }

    #[test]
    fn dependent_triple() {
        let r = finite(&[&[1.0, 0.0], &[0.0, 1.0], &[1.0, 1.0]]);
        assert!(close(r.lower_frame_bound.finite().unwrap(), 1.0));
        assert!(close(r.bessel_bound.finite().unwrap(), 3.0));
        assert!(!r.is_riesz_fischer);
        assert!(!r.is_minimal);
        assert_eq!(r.riesz_fischer_bound, 0.0);
        assert!(r.is_frame && r.is_complete);
    }

    #[test]
    fn two_vectors() {
        let r = finite(&[&[1.0, 0.0], &[1.0, 1.0]]);
        let lo = (3.0 - 5f64.sqrt()) / 2.0;
        let hi = (3.0 + 5f64.sqrt()) / 2.0;
        assert!(close(r.lower_frame_bound.finite().unwrap(), lo));
        assert!(close(r.bessel_bound.finite().unwrap(), hi));
        assert!(close(r.riesz_fischer_bound, lo));
        assert!(r.is_riesz_basis);
    }

    #[test]
    fn incomplete_sequence() {
        let r = finite(&[&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0]]);
        assert!(!r.is_complete && !r.is_lower_frame && !r.is_frame);
        assert_eq!(r.lower_frame_bound, Bound::Finite(0.0));
        assert!(r.is_riesz_fischer && r.is_minimal);
    }

    #[test]
    fn zero_column_is_not_minimal() {
        let r = finite(&[&[1.0, 0.0], &[0.0, 0.0]]);
        assert!(!r.is_minimal && !r.is_omega_independent);
    }

    fn structured(map: IndexMap, w: WeightForm) -> ClassificationReport {
        let s = StructuredSequence::weighted(map, w).unwrap();
        let p = domain_profile(&s).unwrap();
        classify_structured(&s, &p, &Tolerance::default())
            .unwrap()
            .report()
            .cloned()
            .unwrap()
    }

    #[test]
    fn growing_weights() {
        let r = structured(
            IndexMap::Identity,
            WeightForm::Poly {
                a: 1.0,
                p: 1.0,
                b: 1.0,
            },
        );
        assert!(r.is_lower_frame);
        assert_eq!(r.lower_frame_bound, Bound::Finite(4.0));
        assert!(!r.is_bessel);
        assert_eq!(r.bessel_bound, Bound::Infinite);
        assert!(r.is_riesz_fischer);
        assert_eq!(r.riesz_fischer_bound, 4.0);
        assert!(!r.is_riesz_basis);
    }

    #[test]
    fn round_robin() {
        let r = structured(IndexMap::Alternating { anchor: 1 }, WeightForm::Constant { c: 1.0 });
        assert!(r.is_lower_frame);
        assert_eq!(r.lower_frame_bound, Bound::Finite(1.0));
        assert!(!r.is_riesz_fischer);
        assert!(!r.is_bessel);
        assert!(r.is_complete);
    }

    #[test]
    fn constant_onb_is_frame() {
        let r = structured(IndexMap::Identity, WeightForm::Constant { c: 1.0 });
        assert!(r.is_frame && r.is_riesz_basis);
        assert_eq!(r.lower_frame_bound, Bound::Finite(1.0));
        assert_eq!(r.bessel_bound, Bound::Finite(1.0));
    }

    #[test]
    fn all_repeats_is_vacuous() {
        let r = structured(IndexMap::Triangular, WeightForm::Constant { c: 1.0 });
        assert!(r.is_lower_frame);
        assert_eq!(r.lower_frame_bound, Bound::Infinite);
        assert!(!r.is_bessel && !r.is_minimal);
    }

    #[test]
    fn decaying_weights_are_bessel_not_lower() {
        let r = structured(IndexMap::Identity, WeightForm::Exp { a: 1.0, r: 0.5 });
        assert!(r.is_bessel && !r.is_lower_frame);
        assert_eq!(r.lower_frame_bound, Bound::Finite(0.0));
        assert!(r.is_minimal && !r.is_riesz_fischer);
        assert!(r.is_complete);
    }

    #[test]
    fn anchored_is_unresolved() {
        let s = StructuredSequence::anchored(1).unwrap();
        let p = domain_profile(&s).unwrap();
        let c = classify_structured(&s, &p, &Tolerance::default()).unwrap();
        assert!(matches!(c, StructuredClassification::Unresolved { ref reason } if reason.contains("analytic: unresolved")));
    }

    #[test]
    fn shift_taxonomy() {
        let v = invertibility(&shift_embedding(5), &Tolerance::default()).unwrap();
        assert!(v.bb && v.injective && !v.surjective && !v.bi && v.bir);
        assert!(close(v.bb_constant.finite().unwrap(), 1.0));
    }

    #[test]
    fn identity_and_projector_taxonomy() {
        let v = invertibility(&CMatrix::identity(3), &Tolerance::default()).unwrap();
        assert!(v.bi && v.bir && v.bb);
        let p = CMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, 0.0]]);
        let v = invertibility(&p, &Tolerance::default()).unwrap();
        assert!(!v.injective && !v.surjective && v.closed_range && !v.bb);
    }
}
