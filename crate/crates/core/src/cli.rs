//! Command-line front end.
//!
//! Exit codes: 0 success, 2 invalid input (parse, validation, unsupported
//! family, degenerate dual, non-minimal sequence under
//! `--require-biorthogonal`), 3 analytic/numeric mismatch, 1 anything else.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::classify::{
    classify_finite, classify_finite_at, classify_structured, invertibility,
    ClassificationReport, InvertibilityVerdict, StructuredClassification,
};
use crate::duality::{
    biorthogonal_system, canonical_dual, dependent_column, exactness_probe,
    pseudo_inverse_analysis, ExactnessVerdict,
};
use crate::error::{Error, Result};
use crate::frameops::{
    assemble, domain_profile, matrix_rows, BundleReport, DomainProfile, OperatorBundle,
};
use crate::numkernel::{self, Tolerance};
use crate::report::to_json;
use crate::sequences::{
    truncate, FiniteSequence, SpacePolicy, StructuredSequence, TruncationPlan, DEFAULT_MAX_DIM,
};
use crate::specfile::{load_spec, CheckedSequence};
use crate::truncation::{
    mass_consistency, reconcile, run_study_with, to_csv, MassCheck, MassCheckConfig,
    ReconcileStatus, Reconciliation, StudySeries, Trend, TrendConfig,
};

pub const MAX_DIM_ENV: &str = "FRAMEKIT_MAX_DIM";
const DEFAULT_SIZES: [usize; 3] = [8, 16, 32];
const MASS_CHECK_INDICES: usize = 8;

#[derive(Debug, Parser)]
#[command(name = "framekit", version, about = "Frame analysis of sequences in Hilbert spaces")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Operators, classification, dual and (for structured specs) a truncation study.
    Analyze(CommonArgs),
    /// Canonical dual, biorthogonality and exactness.
    Dual(DualArgs),
    /// Classification only.
    Classify(CommonArgs),
    /// Truncation study of a structured spec.
    Study(CommonArgs),
    /// Plain-text summary of `analyze`.
    Report(ReportArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
    Csv,
}

#[derive(Debug, Clone, Args)]
pub struct TolArgs {
    /// Relative singular-value cutoff.
    #[arg(long, value_name = "REL", allow_negative_numbers = true)]
    pub tol: Option<f64>,
    /// Absolute singular-value floor.
    #[arg(long, value_name = "ABS", allow_negative_numbers = true)]
    pub abs_floor: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    pub spec: PathBuf,
    /// Truncation sizes, comma separated and strictly increasing.
    #[arg(long, value_delimiter = ',', value_name = "N,...")]
    pub sizes: Option<Vec<usize>>,
    #[command(flatten)]
    pub tol: TolArgs,
    /// Truncated masses of infinite W_k must exceed this at the largest size.
    #[arg(long, default_value_t = 4.0, allow_negative_numbers = true)]
    pub divergence_threshold: f64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct DualArgs {
    pub spec: PathBuf,
    /// Fail unless the sequence is minimal.
    #[arg(long)]
    pub require_biorthogonal: bool,
    /// Truncation size for structured specs.
    #[arg(long)]
    pub size: Option<usize>,
    #[command(flatten)]
    pub tol: TolArgs,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ReportArgs {
    pub spec: PathBuf,
    #[arg(long, value_delimiter = ',', value_name = "N,...")]
    pub sizes: Option<Vec<usize>>,
    #[command(flatten)]
    pub tol: TolArgs,
    #[arg(long, default_value_t = 4.0, allow_negative_numbers = true)]
    pub divergence_threshold: f64,
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CommandKind {
    Analyze,
    Dual,
    Classify,
    Study,
    Report,
}

/// Everything a run depends on, resolved from arguments and environment.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: CommandKind,
    pub spec: PathBuf,
    pub sizes: Option<Vec<usize>>,
    pub tol: Tolerance,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub require_biorthogonal: bool,
    pub size: Option<usize>,
    pub divergence_threshold: f64,
    pub max_dim: usize,
}

fn tolerance(t: &TolArgs) -> Result<Tolerance> {
    let d = Tolerance::default();
    Tolerance::new(t.tol.unwrap_or(d.rank_rel), t.abs_floor.unwrap_or(d.abs_floor))
}

/// Parses the dimension cap taken from the environment.
pub fn max_dim_from(value: Option<&str>) -> Result<usize> {
    match value {
        None => Ok(DEFAULT_MAX_DIM),
        Some(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(n),
            _ => Err(Error::Config(format!(
                "{MAX_DIM_ENV} must be a positive integer, got {v:?}"
            ))),
        },
    }
}

impl RunConfig {
    pub fn from_cli(cli: Cli, max_dim: usize) -> Result<Self> {
        let common = |command, a: CommonArgs| -> Result<RunConfig> {
            if !(a.divergence_threshold.is_finite() && a.divergence_threshold >= 0.0) {
                return Err(Error::Config(
                    "--divergence-threshold must be finite and non-negative".into(),
                ));
            }
            Ok(RunConfig {
                command,
                spec: a.spec,
                sizes: a.sizes,
                tol: tolerance(&a.tol)?,
                format: a.format,
                out: a.out,
                require_biorthogonal: false,
                size: None,
                divergence_threshold: a.divergence_threshold,
                max_dim,
            })
        };
        match cli.command {
            Command::Analyze(a) => common(CommandKind::Analyze, a),
            Command::Classify(a) => common(CommandKind::Classify, a),
            Command::Study(a) => common(CommandKind::Study, a),
            Command::Report(a) => common(
                CommandKind::Report,
                CommonArgs {
                    spec: a.spec,
                    sizes: a.sizes,
                    tol: a.tol,
                    divergence_threshold: a.divergence_threshold,
                    format: Format::Text,
                    out: a.out,
                },
            ),
            Command::Dual(a) => Ok(RunConfig {
                command: CommandKind::Dual,
                spec: a.spec,
                sizes: None,
                tol: tolerance(&a.tol)?,
                format: a.format,
                out: a.out,
                require_biorthogonal: a.require_biorthogonal,
                size: a.size,
                divergence_threshold: 0.0,
                max_dim,
            }),
        }
    }
}

/// Rendered output and the exit code it should be reported with.
#[derive(Debug)]
pub struct Outcome {
    pub output: String,
    pub exit_code: i32,
}

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Validation(_)
        | Error::SpecFile(_)
        | Error::Config(_)
        | Error::UnsupportedFamily(_)
        | Error::DegenerateFrame { .. }
        | Error::NotMinimal { .. }
        | Error::NotARepresentation { .. }
        | Error::ResourceLimit { .. }
        | Error::IndexOutOfRange { .. }
        | Error::LengthMismatch { .. } => 2,
        _ => 1,
    }
}

// ---- report structures (field order is the JSON order) ----

#[derive(Debug, Serialize)]
struct DualSummary {
    duals: Vec<Vec<[f64; 2]>>,
    span_lower_bound: f64,
    condition: f64,
    reconstruction_residual: f64,
    /// `max |C† - pinv(C)|` against the SVD pseudo-inverse.
    pseudo_inverse_defect: f64,
    /// Entry `(i, j)` is `<ψ_i, ψ̃_j>`; absent when the sequence is not minimal.
    biorthogonality: Option<Vec<Vec<[f64; 2]>>>,
    biorthogonality_defect: Option<f64>,
    dependent_element: Option<usize>,
    exactness: Vec<ExactnessVerdict>,
}

#[derive(Debug, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
enum DualOutcome {
    Available(Box<DualSummary>),
    Unavailable { reason: String },
}

#[derive(Debug, Serialize)]
struct FiniteAnalysis<'a> {
    command: CommandKind,
    kind: &'static str,
    tolerance: Tolerance,
    operators: BundleReport,
    classification: &'a ClassificationReport,
    synthesis_invertibility: InvertibilityVerdict,
    analysis_invertibility: InvertibilityVerdict,
    dual: DualOutcome,
}

#[derive(Debug, Serialize)]
struct ProfileView<'a> {
    hil_psi_is_zero: bool,
    #[serde(flatten)]
    profile: &'a DomainProfile,
}

#[derive(Debug, Serialize)]
struct StructuredAnalysis<'a> {
    command: CommandKind,
    kind: &'static str,
    tolerance: Tolerance,
    family: &'a StructuredSequence,
    profile: ProfileView<'a>,
    classification: &'a StructuredClassification,
    study: &'a StudySeries,
    reconciliation: &'a Reconciliation,
    mass_checks: &'a [MassCheck],
}

#[derive(Debug, Serialize)]
struct FiniteClassification<'a> {
    command: CommandKind,
    kind: &'static str,
    tolerance: Tolerance,
    classification: &'a ClassificationReport,
    synthesis_invertibility: InvertibilityVerdict,
    analysis_invertibility: InvertibilityVerdict,
}

#[derive(Debug, Serialize)]
struct StructuredClassificationOutput<'a> {
    command: CommandKind,
    kind: &'static str,
    tolerance: Tolerance,
    family: &'a StructuredSequence,
    analytic: &'a StructuredClassification,
    numeric: Vec<ClassificationReport>,
}

#[derive(Debug, Serialize)]
struct StudyOutput<'a> {
    command: CommandKind,
    tolerance: Tolerance,
    family: &'a StructuredSequence,
    study: &'a StudySeries,
    reconciliation: &'a Reconciliation,
}

#[derive(Debug, Serialize)]
struct DualOutput<'a> {
    command: CommandKind,
    tolerance: Tolerance,
    size: Option<usize>,
    space_dim: usize,
    elements: usize,
    dual: &'a DualSummary,
}

// ---- pipeline ----

fn load(cfg: &RunConfig) -> Result<CheckedSequence> {
    Ok(load_spec(&cfg.spec)?.validate()?)
}

fn plan(cfg: &RunConfig, required: bool) -> Result<TruncationPlan> {
    let sizes = match &cfg.sizes {
        Some(s) => s.clone(),
        None if required => {
            return Err(Error::Config("--sizes is required for this command".into()))
        }
        None => DEFAULT_SIZES.to_vec(),
    };
    Ok(TruncationPlan::new(sizes)?)
}

fn reject_sizes(cfg: &RunConfig) -> Result<()> {
    if cfg.sizes.is_some() {
        return Err(Error::Config(
            "--sizes applies to structured specs only".into(),
        ));
    }
    Ok(())
}

fn dual_summary(seq: &FiniteSequence, tol: &Tolerance, require_biorthogonal: bool) -> Result<DualSummary> {
    let bundle = assemble(seq, tol)?;
    let dependent = dependent_column(&bundle)?;
    if require_biorthogonal {
        if let Some(index) = dependent {
            return Err(Error::NotMinimal { index });
        }
    }
    let dual = canonical_dual(&bundle)?;
    let c_dagger = pseudo_inverse_analysis(&bundle, &dual)?;
    let oracle = numkernel::pinv(&bundle.analysis, tol)?;
    let (biorthogonality, defect) = match dependent {
        None => {
            let b = biorthogonal_system(&bundle, &dual)?;
            (Some(matrix_rows(&b.matrix)), Some(b.max_defect))
        }
        Some(_) => (None, None),
    };
    let exactness = (1..=bundle.len())
        .map(|j| exactness_probe(&bundle, &dual, j))
        .collect::<Result<Vec<_>>>()?;
    Ok(DualSummary {
        duals: dual
            .duals
            .elements()
            .iter()
            .map(|v| v.coords().iter().map(|z| [z.re, z.im]).collect())
            .collect(),
        span_lower_bound: dual.span_lower_bound,
        condition: dual.condition,
        reconstruction_residual: dual.residual,
        pseudo_inverse_defect: c_dagger.max_abs_diff(&oracle),
        biorthogonality,
        biorthogonality_defect: defect,
        dependent_element: dependent,
        exactness,
    })
}

struct StructuredRun {
    family: StructuredSequence,
    profile: DomainProfile,
    classification: StructuredClassification,
    series: StudySeries,
    reconciliation: Reconciliation,
    masses: Vec<MassCheck>,
}

impl StructuredRun {
    fn mismatch(&self) -> bool {
        self.reconciliation.has_mismatch()
            || self
                .masses
                .iter()
                .any(|m| m.status == ReconcileStatus::Mismatch)
    }
}

fn structured_run(cfg: &RunConfig, family: StructuredSequence, required: bool) -> Result<StructuredRun> {
    let plan = plan(cfg, required)?;
    let profile = domain_profile(&family)?;
    let classification = classify_structured(&family, &profile, &cfg.tol)?;
    let series = run_study_with(
        &family,
        &profile,
        &plan,
        &cfg.tol,
        &TrendConfig::default(),
        cfg.max_dim,
    )?;
    let reconciliation = reconcile(&series, &classification);
    let largest = series.samples.last().map_or(1, |s| s.space_dim);
    let masses = mass_consistency(
        &family,
        &profile,
        &plan,
        &MassCheckConfig {
            max_index: MASS_CHECK_INDICES.min(largest),
            divergence_threshold: cfg.divergence_threshold,
        },
    );
    Ok(StructuredRun {
        family,
        profile,
        classification,
        series,
        reconciliation,
        masses,
    })
}

type FiniteVerdicts = (
    OperatorBundle,
    ClassificationReport,
    InvertibilityVerdict,
    InvertibilityVerdict,
);

fn finite_classification(seq: &FiniteSequence, tol: &Tolerance) -> Result<FiniteVerdicts> {
    let bundle = assemble(seq, tol)?;
    let report = classify_finite(&bundle)?;
    let d = invertibility(&bundle.synthesis, tol)?;
    let c = invertibility(&bundle.analysis, tol)?;
    Ok((bundle, report, d, c))
}

fn no_csv(what: &str) -> Error {
    Error::Config(format!("csv output is only available for truncation series, not {what}"))
}

fn exit_for(mismatch: bool) -> i32 {
    if mismatch {
        3
    } else {
        0
    }
}

/// Runs one command and renders its output.
pub fn execute(cfg: &RunConfig) -> Result<Outcome> {
    let checked = load(cfg)?;
    match cfg.command {
        CommandKind::Analyze | CommandKind::Report => analyze(cfg, checked),
        CommandKind::Classify => classify(cfg, checked),
        CommandKind::Study => study(cfg, checked),
        CommandKind::Dual => dual(cfg, checked),
    }
}

fn analyze(cfg: &RunConfig, checked: CheckedSequence) -> Result<Outcome> {
    match checked {
        CheckedSequence::Finite(seq) => {
            reject_sizes(cfg)?;
            if cfg.format == Format::Csv {
                return Err(no_csv("a finite analysis"));
            }
            let (bundle, report, d, c) = finite_classification(&seq, &cfg.tol)?;
            let dual = match dual_summary(&seq, &cfg.tol, false) {
                Ok(s) => DualOutcome::Available(Box::new(s)),
                Err(e @ Error::DegenerateFrame { .. }) => DualOutcome::Unavailable {
                    reason: e.to_string(),
                },
                Err(e) => return Err(e),
            };
            let out = FiniteAnalysis {
                command: cfg.command,
                kind: "explicit",
                tolerance: cfg.tol,
                operators: BundleReport::from(&bundle),
                classification: &report,
                synthesis_invertibility: d,
                analysis_invertibility: c,
                dual,
            };
            let output = match cfg.format {
                Format::Json => to_json(&out)?,
                _ => text_finite(&out),
            };
            Ok(Outcome {
                output,
                exit_code: 0,
            })
        }
        CheckedSequence::Structured(family) => {
            let run = structured_run(cfg, family, false)?;
            let output = match cfg.format {
                Format::Csv => to_csv(&run.series),
                Format::Json => to_json(&StructuredAnalysis {
                    command: cfg.command,
                    kind: "structured",
                    tolerance: cfg.tol,
                    family: &run.family,
                    profile: ProfileView {
                        hil_psi_is_zero: run.profile.hil_psi_support.is_empty(),
                        profile: &run.profile,
                    },
                    classification: &run.classification,
                    study: &run.series,
                    reconciliation: &run.reconciliation,
                    mass_checks: &run.masses,
                })?,
                Format::Text => text_structured(cfg, &run),
            };
            Ok(Outcome {
                output,
                exit_code: exit_for(run.mismatch()),
            })
        }
    }
}

fn classify(cfg: &RunConfig, checked: CheckedSequence) -> Result<Outcome> {
    if cfg.format == Format::Csv {
        return Err(no_csv("a classification"));
    }
    let output = match checked {
        CheckedSequence::Finite(seq) => {
            reject_sizes(cfg)?;
            let (_, report, d, c) = finite_classification(&seq, &cfg.tol)?;
            let out = FiniteClassification {
                command: cfg.command,
                kind: "explicit",
                tolerance: cfg.tol,
                classification: &report,
                synthesis_invertibility: d,
                analysis_invertibility: c,
            };
            match cfg.format {
                Format::Json => to_json(&out)?,
                _ => {
                    let mut s = String::new();
                    text_header(&mut s, cfg.command, &cfg.tol);
                    text_classification(&mut s, &report);
                    s
                }
            }
        }
        CheckedSequence::Structured(family) => {
            let plan = plan(cfg, false)?;
            let profile = domain_profile(&family)?;
            let analytic = classify_structured(&family, &profile, &cfg.tol)?;
            let numeric = plan
                .sizes()
                .iter()
                .map(|&n| {
                    let seq = truncate(&family, n, SpacePolicy::MaxIndex, cfg.max_dim)?;
                    classify_finite_at(&assemble(&seq, &cfg.tol)?, Some(n))
                })
                .collect::<Result<Vec<_>>>()?;
            let out = StructuredClassificationOutput {
                command: cfg.command,
                kind: "structured",
                tolerance: cfg.tol,
                family: &family,
                analytic: &analytic,
                numeric,
            };
            match cfg.format {
                Format::Json => to_json(&out)?,
                _ => {
                    let mut s = String::new();
                    text_header(&mut s, cfg.command, &cfg.tol);
                    text_analytic(&mut s, &analytic);
                    for r in &out.numeric {
                        text_classification(&mut s, r);
                    }
                    s
                }
            }
        }
    };
    Ok(Outcome {
        output,
        exit_code: 0,
    })
}

fn study(cfg: &RunConfig, checked: CheckedSequence) -> Result<Outcome> {
    let CheckedSequence::Structured(family) = checked else {
        return Err(Error::Config(
            "study needs a structured spec (weighted_onb or anchored_onb)".into(),
        ));
    };
    let run = structured_run(cfg, family, true)?;
    let output = match cfg.format {
        Format::Csv => to_csv(&run.series),
        Format::Json => to_json(&StudyOutput {
            command: cfg.command,
            tolerance: cfg.tol,
            family: &run.family,
            study: &run.series,
            reconciliation: &run.reconciliation,
        })?,
        Format::Text => text_structured(cfg, &run),
    };
    Ok(Outcome {
        output,
        exit_code: exit_for(run.reconciliation.has_mismatch()),
    })
}

fn dual(cfg: &RunConfig, checked: CheckedSequence) -> Result<Outcome> {
    if cfg.format == Format::Csv {
        return Err(no_csv("a dual system"));
    }
    let seq = match checked {
        CheckedSequence::Finite(seq) => {
            if cfg.size.is_some() {
                return Err(Error::Config("--size applies to structured specs only".into()));
            }
            seq
        }
        CheckedSequence::Structured(family) => {
            let n = cfg.size.ok_or_else(|| {
                Error::Config("dual of a structured spec needs --size N".into())
            })?;
            truncate(&family, n, SpacePolicy::MaxIndex, cfg.max_dim)?
        }
    };
    let summary = dual_summary(&seq, &cfg.tol, cfg.require_biorthogonal)?;
    let out = DualOutput {
        command: cfg.command,
        tolerance: cfg.tol,
        size: cfg.size,
        space_dim: seq.space_dim(),
        elements: seq.len(),
        dual: &summary,
    };
    let output = match cfg.format {
        Format::Json => to_json(&out)?,
        _ => {
            let mut s = String::new();
            text_header(&mut s, cfg.command, &cfg.tol);
            text_dual(&mut s, &summary);
            s
        }
    };
    Ok(Outcome {
        output,
        exit_code: 0,
    })
}

// ---- text rendering ----

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn text_header(s: &mut String, command: CommandKind, tol: &Tolerance) {
    let name = serde_json::to_value(command)
        .ok()
        .and_then(|v| v.as_str().map(str::to_owned))
        .unwrap_or_default();
    writeln!(s, "framekit {name}").unwrap();
    writeln!(
        s,
        "tolerance: rank_rel = {}, abs_floor = {}",
        num(tol.rank_rel),
        num(tol.abs_floor)
    )
    .unwrap();
}

fn text_classification(s: &mut String, r: &ClassificationReport) {
    let provenance = match r.provenance {
        crate::classify::Provenance::Analytic => "analytic".to_string(),
        crate::classify::Provenance::Numeric { size: None } => "numeric".to_string(),
        crate::classify::Provenance::Numeric { size: Some(n) } => format!("numeric at N = {n}"),
    };
    writeln!(s, "classification ({provenance})").unwrap();
    writeln!(s, "  A  (lower frame bound)    = {}", r.lower_frame_bound).unwrap();
    writeln!(s, "  B  (Bessel bound)         = {}", r.bessel_bound).unwrap();
    writeln!(s, "  A' (Riesz-Fischer bound)  = {}", r.riesz_fischer_bound).unwrap();
    let flags = [
        ("bessel", r.is_bessel),
        ("frame", r.is_frame),
        ("lower_frame", r.is_lower_frame),
        ("riesz_fischer", r.is_riesz_fischer),
        ("riesz_basis", r.is_riesz_basis),
        ("complete", r.is_complete),
        ("minimal", r.is_minimal),
        ("omega_independent", r.is_omega_independent),
        ("exact", r.is_exact),
    ];
    for (name, v) in flags {
        writeln!(s, "  {name:<18} {}", if v { "yes" } else { "no" }).unwrap();
    }
    for n in &r.notes {
        writeln!(s, "  note: {n}").unwrap();
    }
}

fn text_analytic(s: &mut String, c: &StructuredClassification) {
    match c {
        StructuredClassification::Resolved { report } => text_classification(s, report),
        StructuredClassification::Unresolved { reason } => {
            writeln!(s, "classification (analytic): {reason}").unwrap()
        }
    }
}

fn text_dual(s: &mut String, d: &DualSummary) {
    writeln!(s, "canonical dual").unwrap();
    for (i, v) in d.duals.iter().enumerate() {
        let coords: Vec<String> = v
            .iter()
            .map(|z| {
                if z[1] == 0.0 {
                    num(z[0])
                } else {
                    format!("{}{:+.16e}i", num(z[0]), z[1])
                }
            })
            .collect();
        writeln!(s, "  dual {}: ({})", i + 1, coords.join(", ")).unwrap();
    }
    writeln!(s, "  span lower bound        = {}", num(d.span_lower_bound)).unwrap();
    writeln!(s, "  reconstruction residual = {}", num(d.reconstruction_residual)).unwrap();
    match (d.dependent_element, d.biorthogonality_defect) {
        (Some(j), _) => writeln!(s, "  not minimal: element {j} lies in the span of the others").unwrap(),
        (None, Some(e)) => writeln!(s, "  biorthogonal, max defect = {}", num(e)).unwrap(),
        (None, None) => {}
    }
    for v in &d.exactness {
        let verdict = match v.verdict {
            crate::duality::Exactness::Removable { .. } => "removable",
            crate::duality::Exactness::CriticalElement { .. } => "critical",
        };
        writeln!(s, "  element {}: a = {} ({verdict})", v.index, num(v.a)).unwrap();
    }
}

fn text_finite(a: &FiniteAnalysis<'_>) -> String {
    let mut s = String::new();
    text_header(&mut s, a.command, &a.tolerance);
    writeln!(
        s,
        "sequence: {} elements in dimension {}, span dimension {}",
        a.operators.elements, a.operators.space_dim, a.operators.span_dim
    )
    .unwrap();
    text_classification(&mut s, a.classification);
    match &a.dual {
        DualOutcome::Available(d) => text_dual(&mut s, d),
        DualOutcome::Unavailable { reason } => writeln!(s, "canonical dual unavailable: {reason}").unwrap(),
    }
    s
}

fn trend_text(t: Option<Trend>) -> String {
    match t {
        None => "no values (restricted space is {0})".to_string(),
        Some(Trend::Converged { value }) => format!("converged to {}", num(value)),
        Some(Trend::Diverging) => "diverging".to_string(),
        Some(Trend::Inconclusive) => "inconclusive".to_string(),
    }
}

fn text_structured(cfg: &RunConfig, run: &StructuredRun) -> String {
    let mut s = String::new();
    text_header(&mut s, cfg.command, &cfg.tol);
    let p = &run.profile;
    writeln!(s, "domain profile").unwrap();
    let support = match &p.hil_psi_support {
        crate::frameops::Support::All => "all basis indices".to_string(),
        crate::frameops::Support::AllExcept(out) => format!("all basis indices except {out:?}"),
        crate::frameops::Support::Only(set) if set.is_empty() => "{0}".to_string(),
        crate::frameops::Support::Only(set) => format!("basis indices {set:?}"),
    };
    writeln!(s, "  H_psi: {support}").unwrap();
    let shown: Vec<String> = p.masses.iter().map(|m| m.to_string()).collect();
    writeln!(s, "  W_1..W_{}: {}", p.masses.len(), shown.join(", ")).unwrap();
    writeln!(s, "  analysis densely defined: {}", p.analysis_densely_defined).unwrap();
    writeln!(s, "  synthesis closable:       {}", p.synthesis_closable).unwrap();
    writeln!(s, "  frame operator closable:  {}", p.frame_operator_closable_on_h).unwrap();
    for n in &p.notes {
        writeln!(s, "  note: {n}").unwrap();
    }
    text_analytic(&mut s, &run.classification);
    writeln!(s, "truncation study").unwrap();
    writeln!(s, "  N  dim  A  B  A'  restricted A  restricted B").unwrap();
    for x in &run.series.samples {
        let opt = |v: Option<f64>| v.map_or("-".to_string(), num);
        writeln!(
            s,
            "  {} {} {} {} {} {} {}",
            x.n,
            x.space_dim,
            num(x.a),
            num(x.b),
            num(x.a_prime),
            opt(x.restricted_a),
            opt(x.restricted_b)
        )
        .unwrap();
    }
    let t = &run.series.trends;
    writeln!(s, "  A: {}", trend_text(Some(t.a))).unwrap();
    writeln!(s, "  B: {}", trend_text(Some(t.b))).unwrap();
    writeln!(s, "  A': {}", trend_text(Some(t.a_prime))).unwrap();
    writeln!(s, "  restricted A: {}", trend_text(t.restricted_a)).unwrap();
    writeln!(s, "  restricted B: {}", trend_text(t.restricted_b)).unwrap();
    writeln!(s, "reconciliation").unwrap();
    for e in &run.reconciliation.entries {
        let analytic = e.analytic.map_or("none".to_string(), |b| b.to_string());
        let status = serde_json::to_value(e.status)
            .ok()
            .and_then(|v| v.as_str().map(str::to_owned))
            .unwrap_or_default();
        writeln!(
            s,
            "  {}: analytic {analytic}, numeric {}: {status}",
            e.quantity,
            trend_text(e.numeric)
        )
        .unwrap();
    }
    for m in &run.masses {
        if m.status != ReconcileStatus::Agree {
            writeln!(s, "  mass W_{}: {:?}", m.k, m.status).unwrap();
        }
    }
    if run.mismatch() {
        writeln!(s, "MISMATCH between analytic and numeric results").unwrap();
    }
    s
}
