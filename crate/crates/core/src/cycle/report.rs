//! Audit of the published closed forms against the exact construction.
//!
//! Every claim is evaluated twice: at the spec's well depth and with the
//! depth set to zero. Only the zero-depth verdicts gate success; the
//! finite-depth verdicts and deviations are diagnostics.

use serde::Serialize;

use super::{paper_heat_terms, CycleSpec};
use crate::error::Result;
use crate::numerics::{linspace, Tolerance};
use crate::processes::{
    coefficient_match_lengths, isotherm_pressure_exact, isotherm_pressure_paper,
    solve_isotherm_endpoint, IsothermBranch, Stroke, StrokeKind,
};
use crate::spectrum::{pressure_level, EngineParams, LevelIndex};

/// Threshold for "constant", "equal" and "matches" claims.
pub const CLAIM_TOLERANCE: f64 = 1e-10;

/// Number of interior weights at which coefficient-matching branches are tabulated.
pub const BRANCH_SAMPLES: usize = 10;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BranchSample {
    pub w1: f64,
    pub l_kinetic: f64,
    pub l_depth: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IsothermAudit {
    pub stroke: StrokeKind,
    /// `max |published - exact|` over the sampled stroke; absent when the
    /// exact isotherm is undefined somewhere on it.
    pub max_deviation: Option<f64>,
    pub midpoint_deviation: Option<f64>,
    pub exact_error: Option<String>,
    pub branch_samples: Vec<BranchSample>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClaimCheck {
    pub id: &'static str,
    pub description: &'static str,
    pub holds: bool,
    /// Measured spread or deviation behind `holds`.
    pub deviation: Option<f64>,
    pub holds_at_zero_depth: bool,
    pub deviation_at_zero_depth: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConsistencyReport {
    pub v0: f64,
    pub l1: f64,
    pub l2: f64,
    pub l3: f64,
    pub l4: f64,
    pub isotherms: Vec<IsothermAudit>,
    pub claims: Vec<ClaimCheck>,
    pub zero_depth_claims_hold: bool,
}

fn branch_of(spec: &CycleSpec, kind: StrokeKind) -> IsothermBranch {
    if kind.is_expansion() {
        IsothermBranch::Expansion { l1: spec.l1() }
    } else {
        IsothermBranch::Compression { l3: spec.l3() }
    }
}

/// `(max - min) / max |v|` of a sampled quantity.
fn relative_spread(values: &[f64]) -> f64 {
    let (lo, hi, mag) = values.iter().fold(
        (f64::INFINITY, f64::NEG_INFINITY, 0.0f64),
        |(lo, hi, mag), &v| (lo.min(v), hi.max(v), mag.max(v.abs())),
    );
    if mag == 0.0 {
        0.0
    } else {
        (hi - lo) / mag
    }
}

fn stroke_ls(spec: &CycleSpec, stroke: &Stroke) -> Vec<f64> {
    linspace(stroke.l_start(), stroke.l_end(), spec.samples_per_stroke())
}

fn isotherm_deviation(spec: &CycleSpec, stroke: &Stroke, l: f64) -> Result<f64> {
    let published = isotherm_pressure_paper(spec.params(), branch_of(spec, stroke.kind()), l)?;
    let exact = isotherm_pressure_exact(spec.params(), stroke.e_ref(), l)?;
    Ok((published - exact).abs())
}

fn max_isotherm_deviation(spec: &CycleSpec, stroke: &Stroke) -> Result<f64> {
    stroke_ls(spec, stroke)
        .into_iter()
        .try_fold(0.0f64, |worst, l| Ok(worst.max(isotherm_deviation(spec, stroke, l)?)))
}

fn audit_isotherm(spec: &CycleSpec, stroke: &Stroke) -> IsothermAudit {
    let mid = 0.5 * (stroke.l_start() + stroke.l_end());
    let (max_deviation, midpoint_deviation, exact_error) = match max_isotherm_deviation(spec, stroke)
        .and_then(|max| Ok((max, isotherm_deviation(spec, stroke, mid)?)))
    {
        Ok((max, m)) => (Some(max), Some(m), None),
        Err(e) => (None, isotherm_deviation(spec, stroke, mid).ok(), Some(e.to_string())),
    };

    let branch = branch_of(spec, stroke.kind());
    let branch_samples = (1..=BRANCH_SAMPLES)
        .map(|k| {
            let w1 = k as f64 / (BRANCH_SAMPLES + 1) as f64;
            let (l_kinetic, l_depth) =
                coefficient_match_lengths(branch, w1).expect("interior weight");
            BranchSample { w1, l_kinetic, l_depth }
        })
        .collect();

    IsothermAudit { stroke: stroke.kind(), max_deviation, midpoint_deviation, exact_error, branch_samples }
}

struct Verdict {
    holds: bool,
    deviation: Option<f64>,
}

impl Verdict {
    fn within(deviation: f64, tol: f64) -> Self {
        Self { holds: deviation <= tol, deviation: Some(deviation) }
    }

    fn undefined() -> Self {
        Self { holds: false, deviation: None }
    }
}

struct Claim {
    id: &'static str,
    description: &'static str,
    check: fn(&CycleSpec) -> Verdict,
}

/// Relative spread of `L^power * P(L)` along `stroke`.
fn product_spread(spec: &CycleSpec, stroke: &Stroke, power: i32) -> Verdict {
    let params = spec.params();
    let values: Result<Vec<f64>> = stroke_ls(spec, stroke)
        .into_iter()
        .map(|l| {
            let p = if stroke.kind().is_isothermal() {
                isotherm_pressure_paper(params, branch_of(spec, stroke.kind()), l)?
            } else {
                pressure_level(params, stroke.n_to(), l)?
            };
            Ok(l.powi(power) * p)
        })
        .collect();
    match values {
        Ok(v) => Verdict::within(relative_spread(&v), CLAIM_TOLERANCE),
        Err(_) => Verdict::undefined(),
    }
}

fn endpoint_ratio(spec: &CycleSpec, expansion: bool) -> Verdict {
    let tol = Tolerance::new(1e-15, 1e-15, 1000).expect("valid tolerance");
    let (g, x) = (LevelIndex::GROUND, LevelIndex::EXCITED);
    let (start, from, to, ratio) =
        if expansion { (spec.l1(), g, x, 1.5) } else { (spec.l3(), x, g, 2.0 / 3.0) };
    match solve_isotherm_endpoint(spec.params(), start, from, to, &tol) {
        Ok(l) => Verdict::within((l / start - ratio).abs(), CLAIM_TOLERANCE),
        Err(_) => Verdict::undefined(),
    }
}

const CLAIMS: &[Claim] = &[
    Claim {
        id: "hot_isotherm_l_p_constant",
        description: "L * P is constant along the published hot-isotherm pressure",
        check: |s| product_spread(s, &s.strokes()[0], 1),
    },
    Claim {
        id: "expansion_adiabat_l3_p_constant",
        description: "L^3 * P is constant along the adiabatic expansion",
        check: |s| product_spread(s, &s.strokes()[1], 3),
    },
    Claim {
        id: "cold_isotherm_l_p_constant",
        description: "L * P is constant along the published cold-isotherm pressure",
        check: |s| product_spread(s, &s.strokes()[2], 1),
    },
    Claim {
        id: "compression_adiabat_l3_p_constant",
        description: "L^3 * P is constant along the adiabatic compression",
        check: |s| product_spread(s, &s.strokes()[3], 3),
    },
    Claim {
        id: "hot_isotherm_endpoint_ratio",
        description: "root of E2(L) = E1(L1) sits at L = 1.5 L1",
        check: |s| endpoint_ratio(s, true),
    },
    Claim {
        id: "cold_isotherm_endpoint_ratio",
        description: "root of E1(L) = E2(L3) sits at L = 2 L3 / 3",
        check: |s| endpoint_ratio(s, false),
    },
    Claim {
        id: "published_isotherms_match_exact",
        description: "published isotherm pressures equal the energy-conserving ones on both isotherms",
        check: |s| {
            let strokes = s.strokes();
            let a = max_isotherm_deviation(s, &strokes[0]);
            let b = max_isotherm_deviation(s, &strokes[2]);
            match (a, b) {
                (Ok(a), Ok(b)) => Verdict::within(a.max(b), CLAIM_TOLERANCE),
                _ => Verdict::undefined(),
            }
        },
    },
    Claim {
        id: "excited_pressure_matches_exact_at_l2",
        description: "pure level-2 pressure equals the exact hot-isotherm pressure at L2",
        check: |s| {
            let stroke = s.strokes()[0];
            let l2 = s.l2();
            let (h, m, v0) = (s.params().hbar(), s.params().mass(), s.params().v0());
            let printed = v0 * v0 * m * l2 / (9.0 * h) - 9.0 * h * h / (4.0 * m * l2.powi(3));
            match isotherm_pressure_exact(s.params(), stroke.e_ref(), l2) {
                Ok(exact) => Verdict::within((printed - exact).abs(), CLAIM_TOLERANCE),
                Err(_) => Verdict::undefined(),
            }
        },
    },
    Claim {
        id: "coefficient_branches_meet_at_pure_states",
        description: "both coefficient-matching branches give the stroke corners at w1 = 0 and 1",
        check: |s| {
            let mut worst = 0.0f64;
            for kind in [StrokeKind::IsothermalExpansion, StrokeKind::IsothermalCompression] {
                let branch = branch_of(s, kind);
                for w1 in [0.0, 1.0] {
                    let (a, b) = coefficient_match_lengths(branch, w1).expect("pure weight");
                    worst = worst.max((a - b).abs() / a.abs());
                }
            }
            Verdict::within(worst, 1e-12)
        },
    },
    Claim {
        id: "free_particle_efficiency_law",
        description: "published efficiency equals 1 - 9 L1^2 / (4 L3^2)",
        check: |s| {
            let (hot, cold) = paper_heat_terms(s.params(), s.l1(), s.l3());
            let eta = 1.0 - cold / hot;
            let law = 1.0 - 9.0 * s.l1().powi(2) / (4.0 * s.l3().powi(2));
            Verdict::within((eta - law).abs(), 1e-12)
        },
    },
];

/// Audits the published closed forms for `spec`'s geometry.
pub fn consistency_report(spec: &CycleSpec) -> ConsistencyReport {
    let zero = spec.with_params(
        EngineParams::new(spec.params().hbar(), spec.params().mass(), 0.0)
            .expect("zero depth is valid"),
    );

    let strokes = spec.strokes();
    let isotherms = [strokes[0], strokes[2]].iter().map(|s| audit_isotherm(spec, s)).collect();

    let claims: Vec<ClaimCheck> = CLAIMS
        .iter()
        .map(|c| {
            let at_depth = (c.check)(spec);
            let at_zero = (c.check)(&zero);
            ClaimCheck {
                id: c.id,
                description: c.description,
                holds: at_depth.holds,
                deviation: at_depth.deviation,
                holds_at_zero_depth: at_zero.holds,
                deviation_at_zero_depth: at_zero.deviation,
            }
        })
        .collect();
    let zero_depth_claims_hold = claims.iter().all(|c| c.holds_at_zero_depth);

    ConsistencyReport {
        v0: spec.params().v0(),
        l1: spec.l1(),
        l2: spec.l2(),
        l3: spec.l3(),
        l4: spec.l4(),
        isotherms,
        claims,
        zero_depth_claims_hold,
    }
}
