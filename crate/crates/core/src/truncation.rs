//! Truncation studies of structured families.
//!
//! Each size `N` of a plan is truncated, assembled and measured. Trends are
//! only reported here; [`reconcile`] is the one place where they are compared
//! with the analytic classification.

use std::fmt::Write as _;

use serde::Serialize;

use crate::bound::Bound;
use crate::classify::{ClassificationReport, StructuredClassification};
use crate::error::{Error, Result};
use crate::frameops::{assemble, restricted_bundle, DomainProfile, OperatorBundle};
use crate::numkernel::{self, Tolerance};
use crate::sequences::{truncate, StructuredSequence, TruncationPlan, DEFAULT_MAX_DIM};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrendConfig {
    /// Number of trailing values that must agree for convergence.
    pub window: usize,
    pub converge_rel: f64,
    /// Diverging when `last > diverge_factor * (first + 1)`.
    pub diverge_factor: f64,
    /// ... or when every one of the last `window` steps grows by this ratio.
    pub growth_ratio: f64,
}

impl Default for TrendConfig {
    fn default() -> Self {
        Self {
            window: 3,
            converge_rel: 1e-6,
            diverge_factor: 1e6,
            growth_ratio: 2.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "trend", rename_all = "snake_case")]
pub enum Trend {
    Converged { value: f64 },
    Diverging,
    Inconclusive,
}

// rounding in σ_max² must not hide an exact doubling
const GROWTH_SLACK: f64 = 1e-9;

/// Trend of a sequence of non-negative values ordered by size.
///
/// With fewer than `window + 1` values the growth rule uses every available
/// step, but needs at least two.
pub fn trend(values: &[f64], cfg: &TrendConfig) -> Trend {
    let k = values.len();
    if k == 0 {
        return Trend::Inconclusive;
    }
    if k >= cfg.window {
        let tail = &values[k - cfg.window..];
        let hi = tail.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let lo = tail.iter().copied().fold(f64::INFINITY, f64::min);
        let scale = tail.iter().map(|x| x.abs()).fold(0.0, f64::max);
        if hi - lo <= cfg.converge_rel * scale {
            return Trend::Converged { value: values[k - 1] };
        }
    }
    let (first, last) = (values[0], values[k - 1]);
    if last > cfg.diverge_factor * (first.abs() + 1.0) {
        return Trend::Diverging;
    }
    let steps = (k - 1).min(cfg.window);
    if steps >= 2 {
        let grows = values[k - 1 - steps..]
            .windows(2)
            .all(|w| w[0] > 0.0 && w[1] >= cfg.growth_ratio * w[0] * (1.0 - GROWTH_SLACK));
        if grows {
            return Trend::Diverging;
        }
    }
    Trend::Inconclusive
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SizeSample {
    #[serde(rename = "N")]
    pub n: usize,
    pub space_dim: usize,
    #[serde(rename = "A")]
    pub a: f64,
    #[serde(rename = "B")]
    pub b: f64,
    #[serde(rename = "A_prime")]
    pub a_prime: f64,
    pub span_dim: usize,
    pub sigma_min_synthesis: f64,
    pub sigma_min_analysis: f64,
    /// Number of support coordinates within `1..=space_dim`.
    pub restricted_dim: usize,
    /// `None` when the restricted space is `{0}`.
    #[serde(rename = "restricted_A")]
    pub restricted_a: Option<f64>,
    #[serde(rename = "restricted_B")]
    pub restricted_b: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StudyTrends {
    #[serde(rename = "A")]
    pub a: Trend,
    #[serde(rename = "B")]
    pub b: Trend,
    #[serde(rename = "A_prime")]
    pub a_prime: Trend,
    /// `None` when the restricted space is `{0}` at every size.
    #[serde(rename = "restricted_A")]
    pub restricted_a: Option<Trend>,
    #[serde(rename = "restricted_B")]
    pub restricted_b: Option<Trend>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StudySeries {
    pub sizes: Vec<usize>,
    pub tolerance: Tolerance,
    pub trend_config: TrendConfig,
    pub samples: Vec<SizeSample>,
    pub trends: StudyTrends,
}

fn bounds(bundle: &OperatorBundle) -> Result<(f64, f64, f64)> {
    let rank = bundle.span_dim();
    let b = bundle.sigma_max().powi(2);
    let sigma_a = if rank < bundle.space_dim() {
        0.0
    } else {
        numkernel::sigma_min_full(&bundle.analysis)?
    };
    let sigma_s = if rank < bundle.len() {
        0.0
    } else {
        numkernel::sigma_min_full(&bundle.synthesis)?
    };
    Ok((sigma_a, b, sigma_s))
}

fn sample(
    s: &StructuredSequence,
    profile: &DomainProfile,
    plan: &TruncationPlan,
    n: usize,
    tol: &Tolerance,
    max_dim: usize,
) -> Result<SizeSample> {
    let seq = truncate(s, n, plan.space, max_dim)?;
    let bundle = assemble(&seq, tol)?;
    let (sigma_a, b, sigma_s) = bounds(&bundle)?;
    let support = profile.hil_psi_support.within(seq.space_dim());
    let (restricted_a, restricted_b) = if support.is_empty() {
        (None, None)
    } else {
        let r = restricted_bundle(&seq, &support, tol)?;
        let (ra, rb, _) = bounds(&r)?;
        (Some(ra * ra), Some(rb))
    };
    Ok(SizeSample {
        n,
        space_dim: seq.space_dim(),
        a: sigma_a * sigma_a,
        b,
        a_prime: sigma_s * sigma_s,
        span_dim: bundle.span_dim(),
        sigma_min_synthesis: sigma_s,
        sigma_min_analysis: sigma_a,
        restricted_dim: support.len(),
        restricted_a,
        restricted_b,
    })
}

pub fn run_study(
    s: &StructuredSequence,
    profile: &DomainProfile,
    plan: &TruncationPlan,
    tol: &Tolerance,
) -> Result<StudySeries> {
    run_study_with(s, profile, plan, tol, &TrendConfig::default(), DEFAULT_MAX_DIM)
}

pub fn run_study_with(
    s: &StructuredSequence,
    profile: &DomainProfile,
    plan: &TruncationPlan,
    tol: &Tolerance,
    cfg: &TrendConfig,
    max_dim: usize,
) -> Result<StudySeries> {
    if profile.family != *s {
        return Err(Error::CheckFailed(
            "domain profile belongs to a different family".to_string(),
        ));
    }
    let samples = plan
        .sizes()
        .iter()
        .map(|&n| sample(s, profile, plan, n, tol, max_dim))
        .collect::<Result<Vec<_>>>()?;

    // adding columns can only raise the sup and lower the coefficient-side inf
    for w in samples.windows(2) {
        let slack = |x: f64| 1e-9 * (1.0 + x.abs());
        if w[1].b < w[0].b - slack(w[0].b) {
            return Err(Error::CheckFailed(format!(
                "B(N) decreased from {} at N = {} to {} at N = {}",
                w[0].b, w[0].n, w[1].b, w[1].n
            )));
        }
        if w[1].a_prime > w[0].a_prime + slack(w[0].a_prime) {
            return Err(Error::CheckFailed(format!(
                "A'(N) increased from {} at N = {} to {} at N = {}",
                w[0].a_prime, w[0].n, w[1].a_prime, w[1].n
            )));
        }
    }

    let col = |f: fn(&SizeSample) -> f64| samples.iter().map(f).collect::<Vec<_>>();
    let restricted = |f: fn(&SizeSample) -> Option<f64>| {
        let v: Vec<f64> = samples.iter().filter_map(f).collect();
        (!v.is_empty()).then(|| trend(&v, cfg))
    };
    let trends = StudyTrends {
        a: trend(&col(|x| x.a), cfg),
        b: trend(&col(|x| x.b), cfg),
        a_prime: trend(&col(|x| x.a_prime), cfg),
        restricted_a: restricted(|x| x.restricted_a),
        restricted_b: restricted(|x| x.restricted_b),
    };
    Ok(StudySeries {
        sizes: plan.sizes().to_vec(),
        tolerance: *tol,
        trend_config: *cfg,
        samples,
        trends,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ReconcileStatus {
    Agree,
    Mismatch,
    Inconclusive,
    EmpiricalOnly,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReconcileEntry {
    pub quantity: &'static str,
    /// `None` when there is no analytic claim.
    pub analytic: Option<Bound>,
    /// `None` when no numeric values exist (restricted space `{0}`).
    pub numeric: Option<Trend>,
    pub status: ReconcileStatus,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Reconciliation {
    pub entries: Vec<ReconcileEntry>,
    pub mismatches: usize,
}

impl Reconciliation {
    pub fn has_mismatch(&self) -> bool {
        self.mismatches > 0
    }
}

fn compare(analytic: Bound, numeric: Option<Trend>, rel: f64) -> ReconcileStatus {
    match (analytic, numeric) {
        // nothing in the domain: the bound is vacuous and the space is empty
        (Bound::Infinite, None) => ReconcileStatus::Agree,
        (Bound::Finite(_), None) => ReconcileStatus::Mismatch,
        (_, Some(Trend::Inconclusive)) => ReconcileStatus::Inconclusive,
        (Bound::Infinite, Some(Trend::Diverging)) => ReconcileStatus::Agree,
        (Bound::Infinite, Some(Trend::Converged { .. })) => ReconcileStatus::Mismatch,
        (Bound::Finite(_), Some(Trend::Diverging)) => ReconcileStatus::Mismatch,
        (Bound::Finite(a), Some(Trend::Converged { value })) => {
            if (a - value).abs() <= rel * a.abs().max(value.abs()) + 1e-300 || a == value {
                ReconcileStatus::Agree
            } else {
                ReconcileStatus::Mismatch
            }
        }
    }
}

/// Pairs each analytic bound with the trend of its finite counterpart:
/// the lower bound with the restricted `A(N)`, the Bessel bound with `B(N)`
/// and the Riesz-Fischer bound with `A'(N)`.
pub fn reconcile(series: &StudySeries, analytic: &StructuredClassification) -> Reconciliation {
    let numeric = [
        ("A", series.trends.restricted_a),
        ("B", Some(series.trends.b)),
        ("A_prime", Some(series.trends.a_prime)),
    ];
    let claims: Option<[Bound; 3]> = analytic.report().map(|r: &ClassificationReport| {
        [
            r.lower_frame_bound,
            r.bessel_bound,
            Bound::Finite(r.riesz_fischer_bound),
        ]
    });
    let rel = series.trend_config.converge_rel;
    let entries: Vec<ReconcileEntry> = numeric
        .iter()
        .enumerate()
        .map(|(idx, &(quantity, trend))| match claims {
            None => ReconcileEntry {
                quantity,
                analytic: None,
                numeric: trend,
                status: ReconcileStatus::EmpiricalOnly,
            },
            Some(c) => ReconcileEntry {
                quantity,
                analytic: Some(c[idx]),
                numeric: trend,
                status: compare(c[idx], trend, rel),
            },
        })
        .collect();
    let mismatches = entries
        .iter()
        .filter(|e| e.status == ReconcileStatus::Mismatch)
        .count();
    Reconciliation {
        entries,
        mismatches,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MassCheckConfig {
    /// Basis indices `1..=max_index` are checked.
    pub max_index: usize,
    /// Truncated masses of an infinite `W_k` must exceed this at the largest size.
    pub divergence_threshold: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MassCheck {
    pub k: usize,
    pub analytic: Bound,
    /// `W_k(N)` for each size of the plan.
    pub truncated: Vec<f64>,
    pub status: ReconcileStatus,
}

/// Compares truncated masses `Σ_{i <= N} |<ψ_i, e_k>|²` with the analytic
/// `W_k`. Finite masses must be approached from below without overshoot,
/// otherwise the check is a mismatch. Infinite masses agree once the value at
/// the largest size passes the divergence threshold, and are inconclusive
/// before that.
pub fn mass_consistency(
    s: &StructuredSequence,
    profile: &DomainProfile,
    plan: &TruncationPlan,
    cfg: &MassCheckConfig,
) -> Vec<MassCheck> {
    let largest = *plan.sizes().last().expect("plans are non-empty");
    let mut running = vec![0.0; cfg.max_index + 1];
    let mut per_size = Vec::with_capacity(plan.sizes().len());
    let mut next = 0;
    for i in 1..=largest {
        for (k, w) in s.element_terms(i) {
            if k <= cfg.max_index {
                running[k] += w * w;
            }
        }
        if i == plan.sizes()[next] {
            per_size.push(running.clone());
            next += 1;
        }
    }
    (1..=cfg.max_index)
        .map(|k| {
            let truncated: Vec<f64> = per_size.iter().map(|m| m[k]).collect();
            let analytic = profile.mass(k);
            let monotone = truncated.windows(2).all(|w| w[1] >= w[0]);
            let last = *truncated.last().expect("one value per size");
            let status = match analytic {
                _ if !monotone => ReconcileStatus::Mismatch,
                Bound::Finite(w) if last <= w * (1.0 + 1e-12) => ReconcileStatus::Agree,
                Bound::Finite(_) => ReconcileStatus::Mismatch,
                Bound::Infinite if last > cfg.divergence_threshold => ReconcileStatus::Agree,
                Bound::Infinite => ReconcileStatus::Inconclusive,
            };
            MassCheck {
                k,
                analytic,
                truncated,
                status,
            }
        })
        .collect()
}

fn csv_float(out: &mut String, x: Option<f64>) {
    if let Some(x) = x {
        write!(out, "{x:.16e}").expect("writing to a String");
    }
}

pub const CSV_HEADER: &str = "N,A,B,A_prime,span_dim,sigma_min_synthesis,sigma_min_analysis,restricted_dim,restricted_A,restricted_B";

/// One row per size; floats carry 17 significant digits, absent restricted
/// values are empty fields.
pub fn to_csv(series: &StudySeries) -> String {
    let mut out = String::new();
    out.push_str(CSV_HEADER);
    out.push('\n');
    for s in &series.samples {
        write!(out, "{},", s.n).expect("writing to a String");
        for x in [s.a, s.b, s.a_prime] {
            csv_float(&mut out, Some(x));
            out.push(',');
        }
        write!(out, "{},", s.span_dim).expect("writing to a String");
        csv_float(&mut out, Some(s.sigma_min_synthesis));
        out.push(',');
        csv_float(&mut out, Some(s.sigma_min_analysis));
        write!(out, ",{},", s.restricted_dim).expect("writing to a String");
        csv_float(&mut out, s.restricted_a);
        out.push(',');
        csv_float(&mut out, s.restricted_b);
        out.push('\n');
    }
    out
}
