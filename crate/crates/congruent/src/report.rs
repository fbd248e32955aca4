//! Rank pipeline: theorem verdicts and descent bounds assembled into one
//! report, with the two proof sources cross-checked and never conflated.

use crate::descent::{
    compute_image, point_from_witness, rank_bounds, Curve, DescentError, DescentImage,
    Membership, ModuliPolicy, RankBounds, SolvabilityStatus, SquareClass, ENGINE_VERSION,
};
use crate::points::{
    dual_isogeny, point_search, triangle_from_point, PointError, RationalPoint, RightTriangle,
};
use crate::theory::{
    alpha_pm_pythagorean, classify, p_class_witness_from_alpha, rank2_criterion, theorem_rank,
    two_class_witness_scan, two_p_class_witness_scan, CongruentCase, Deferred, TheoremVerdict,
    TheoryError,
};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("theorem verdict and descent bounds disagree for n = {n}: rank {rank} outside [{lower}, {upper}]")]
    VerdictContradiction {
        n: u64,
        rank: u32,
        lower: u32,
        upper: u32,
    },
    #[error(transparent)]
    Descent(#[from] DescentError),
    #[error(transparent)]
    Theory(#[from] TheoryError),
    #[error(transparent)]
    Point(#[from] PointError),
}

/// Tunable bounds for one rank computation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DescentSettings {
    /// Coprime-pair bound for the quartic witness search.
    pub search_bound: u64,
    pub moduli: ModuliPolicy,
    /// `c`-bound for the α detector (prime family only).
    pub alpha_c_bound: u64,
    /// `(x, y)`-bound for the form scans (prime family only).
    pub form_xy_bound: u64,
}

impl Default for DescentSettings {
    fn default() -> Self {
        DescentSettings {
            search_bound: 1000,
            moduli: ModuliPolicy::Extended,
            alpha_c_bound: 1000,
            form_xy_bound: 1000,
        }
    }
}

impl DescentSettings {
    pub fn with_search_bound(bound: u64) -> Self {
        DescentSettings {
            search_bound: bound,
            ..Default::default()
        }
    }
}

/// Status of one square class, flattened for serialization.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClassEntry {
    pub class: i128,
    #[serde(flatten)]
    pub status: SolvabilityStatus,
}

/// Serializable summary of one descent image.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ImageReport {
    pub curve_a: i128,
    pub curve_b: i128,
    pub classes: Vec<ClassEntry>,
    pub proven: Vec<i128>,
    pub not_obstructed: usize,
}

impl ImageReport {
    fn from_image(image: &DescentImage) -> Self {
        ImageReport {
            curve_a: image.curve().a(),
            curve_b: image.curve().b(),
            classes: image
                .classes()
                .map(|(c, s)| ClassEntry {
                    class: c.representative(),
                    status: s.clone(),
                })
                .collect(),
            proven: image.proven().iter().map(|c| c.representative()).collect(),
            not_obstructed: image.not_obstructed_count(),
        }
    }
}

/// How the final rank statement is justified.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RankConclusion {
    /// Descent lower and upper bounds agree.
    Exact { rank: u32, congruent: bool },
    /// A verdict-table row fixes the rank; descent brackets but does not
    /// pin it at the configured bounds.
    TheoremBacked { rank: u32, congruent: bool },
    /// Only the window is certified.
    Bounded { lower: u32, upper: u32 },
}

impl RankConclusion {
    pub fn rank(&self) -> Option<u32> {
        match *self {
            RankConclusion::Exact { rank, .. } | RankConclusion::TheoremBacked { rank, .. } => {
                Some(rank)
            }
            RankConclusion::Bounded { .. } => None,
        }
    }
}

/// Full output of the rank pipeline for one `n`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RankReport {
    pub n: u64,
    /// `None` when `n` is not of a supported shape (raw descent fallback).
    pub case: Option<CongruentCase>,
    pub verdict: Option<TheoremVerdict>,
    pub alpha: ImageReport,
    pub alpha_bar: ImageReport,
    /// Raw descent window.
    pub lower: u32,
    pub upper: u32,
    /// Descent window sharpened by decisive detector facts (rank < 2).
    pub effective_upper: u32,
    pub conclusion: RankConclusion,
    /// Set when a theorem verdict exists but descent alone leaves a gap.
    pub descent_incomplete: bool,
    pub engine_version: String,
}

impl RankReport {
    pub fn exit_code(&self) -> i32 {
        if self.case.is_none() {
            3
        } else if matches!(self.conclusion, RankConclusion::Bounded { .. }) {
            2
        } else {
            0
        }
    }
}

/// Run the descent pair for a curve, with the prime-family witness bridges
/// applied to whatever the quartic search left undecided.
pub fn descent_pair(
    n: u64,
    case: Option<&CongruentCase>,
    settings: &DescentSettings,
) -> Result<(DescentImage, DescentImage, RankBounds), ReportError> {
    let curve = Curve::congruent(n);
    let image = compute_image(&curve, settings.search_bound, &settings.moduli)?;
    let mut image_bar = compute_image(&curve.isogenous(), settings.search_bound, &settings.moduli)?;

    if let Some(CongruentCase::P { p }) = case {
        let p = *p;
        // ᾱ-side classes p, 2, 2p factor through the detectors; their
        // parameterizations reach far beyond the raw pair scan.
        let pending = |image: &DescentImage, d: i128| {
            SquareClass::new(d)
                .ok()
                .and_then(|c| image.status(&c).cloned())
                .is_some_and(|s| matches!(s, SolvabilityStatus::Undecided { .. }))
        };
        if pending(&image_bar, p as i128) {
            if let Some(alpha) = alpha_pm_pythagorean(p, settings.alpha_c_bound)? {
                if let Some((space, witness)) = p_class_witness_from_alpha(p, &alpha) {
                    image_bar.augment_with_witness(&space, witness)?;
                }
            }
        }
        if pending(&image_bar, 2) {
            if let Some((space, witness)) = two_class_witness_scan(p, settings.form_xy_bound) {
                image_bar.augment_with_witness(&space, witness)?;
            }
        }
        if pending(&image_bar, 2 * p as i128) {
            if let Some((space, witness)) = two_p_class_witness_scan(p, settings.form_xy_bound) {
                image_bar.augment_with_witness(&space, witness)?;
            }
        }
    }

    let bounds = rank_bounds(&image, &image_bar)?;
    Ok((image, image_bar, bounds))
}

/// The rank pipeline: classify, take the verdict table, run descent (with
/// bridges), resolve the deferred `p ≡ 1 (mod 8)` row, and cross-check.
pub fn rank_report(n: u64, settings: &DescentSettings) -> Result<RankReport, ReportError> {
    let case = classify(n);
    let (image, image_bar, bounds) = descent_pair(n, case.as_ref(), settings)?;

    let mut verdict = case.as_ref().map(theorem_rank);
    if let (Some(CongruentCase::P { p }), Some(v)) = (&case, &verdict) {
        if v.condition == Some(Deferred::RankTwoCriterion) {
            verdict = Some(rank2_criterion(*p, settings.form_xy_bound)?);
        }
    }

    // A decisive "rank < 2" from the α detector caps the window.
    let mut effective_upper = bounds.upper;
    if let Some(v) = &verdict {
        if v.condition == Some(Deferred::RankBelowTwo) {
            effective_upper = effective_upper.min(1);
        }
        if let Some(rank) = v.rank {
            if rank < bounds.lower || rank > bounds.upper {
                return Err(ReportError::VerdictContradiction {
                    n,
                    rank,
                    lower: bounds.lower,
                    upper: bounds.upper,
                });
            }
        }
    }
    if effective_upper < bounds.lower {
        return Err(ReportError::Descent(DescentError::Inconsistency(format!(
            "detector cap {effective_upper} below descent lower bound {} for n = {n}",
            bounds.lower
        ))));
    }

    let theorem_rank_value = verdict.as_ref().and_then(|v| v.rank);
    let conclusion = if bounds.lower == effective_upper {
        RankConclusion::Exact {
            rank: bounds.lower,
            congruent: bounds.lower >= 1,
        }
    } else if let Some(rank) = theorem_rank_value {
        RankConclusion::TheoremBacked {
            rank,
            congruent: rank >= 1,
        }
    } else {
        RankConclusion::Bounded {
            lower: bounds.lower,
            upper: effective_upper,
        }
    };
    let descent_incomplete =
        theorem_rank_value.is_some() && bounds.lower != effective_upper;

    Ok(RankReport {
        n,
        case,
        verdict,
        alpha: ImageReport::from_image(&image),
        alpha_bar: ImageReport::from_image(&image_bar),
        lower: bounds.lower,
        upper: bounds.upper,
        effective_upper,
        conclusion,
        descent_incomplete,
        engine_version: ENGINE_VERSION.into(),
    })
}

/// A rational right triangle of area `n`, with the point it came from.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TriangleReport {
    pub n: u64,
    pub point: String,
    pub legs: [String; 2],
    pub hypotenuse: String,
    pub engine_version: String,
}

/// Find a non-torsion point on `y² = x³ − n²x` and convert it to a triangle.
///
/// Witnesses from the α side map directly; ᾱ-side witnesses map through the
/// dual isogeny; a bounded point search is the last resort. Returns `None`
/// when nothing is found at the configured bounds (in particular for every
/// rank-0 `n`).
pub fn triangle_report(
    n: u64,
    settings: &DescentSettings,
) -> Result<Option<TriangleReport>, ReportError> {
    let case = classify(n);
    let (image, image_bar, _) = descent_pair(n, case.as_ref(), settings)?;
    let curve = Curve::congruent(n);

    let mut point: Option<RationalPoint> = None;
    for (_, status) in image.classes() {
        if let SolvabilityStatus::ProvenSolvable {
            proof: Membership::Witness { space, witness },
        } = status
        {
            point = Some(point_from_witness(space, witness)?);
            break;
        }
    }
    if point.is_none() {
        for (_, status) in image_bar.classes() {
            if let SolvabilityStatus::ProvenSolvable {
                proof: Membership::Witness { space, witness },
            } = status
            {
                let bar_point = point_from_witness(space, witness)?;
                let mapped = dual_isogeny(&curve, &bar_point)?;
                if !mapped.is_two_torsion() {
                    point = Some(mapped);
                    break;
                }
            }
        }
    }
    if point.is_none() {
        point = point_search(&curve, settings.search_bound.min(200))?
            .into_iter()
            .find(|p| !p.is_two_torsion());
    }

    let Some(point) = point else {
        return Ok(None);
    };
    let triangle: RightTriangle = triangle_from_point(n, &point)?;
    Ok(Some(TriangleReport {
        n,
        point: point.to_string(),
        legs: [triangle.leg_a.to_string(), triangle.leg_b.to_string()],
        hypotenuse: triangle.hyp.to_string(),
        engine_version: ENGINE_VERSION.into(),
    }))
}
