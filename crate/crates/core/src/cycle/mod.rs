//! Carnot cycle assembly: geometry, stroke work, heat input and efficiency.
//!
//! Two evaluation modes are kept side by side. [`Mode::Paper`] reports the
//! published closed forms for work, heat input and efficiency. [`Mode::Exact`]
//! integrates the energy-conserving isotherm pressures and the eigenstate
//! adiabat pressures numerically and forms `W / Q_H` from those integrals.
//! Heat input keeps its sign (negative for bound states) and the efficiency
//! is the signed ratio.

mod diagram;
mod report;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{integrate, Tolerance};
use crate::processes::{
    adiabat_pressure, isotherm_endpoint, isotherm_pressure_exact, isotherm_pressure_paper,
    IsothermBranch, Stroke, StrokeKind,
};
use crate::spectrum::{energy_level, EngineParams, LevelIndex};

pub use diagram::{sample_pl_diagram, PlSample};
pub use report::{consistency_report, BranchSample, ClaimCheck, ConsistencyReport, IsothermAudit};

pub const DEFAULT_SAMPLES_PER_STROKE: usize = 256;

/// Absolute quadrature tolerance per stroke in exact mode.
pub const STROKE_QUADRATURE_TOL: f64 = 1e-10;

/// Heat input magnitude below which the efficiency is undefined.
pub const MIN_HEAT_INPUT: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Paper,
    Exact,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Paper => "paper",
            Mode::Exact => "exact",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "paper" => Ok(Mode::Paper),
            "exact" => Ok(Mode::Exact),
            other => Err(Error::Domain(format!("unknown mode '{other}' (expected paper or exact)"))),
        }
    }
}

/// Input geometry of a cycle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CycleSpec {
    params: EngineParams,
    l1: f64,
    l3: f64,
    mode: Mode,
    samples_per_stroke: usize,
}

impl CycleSpec {
    /// Requires `l1 > 0`, `l3 > 1.5 l1` and at least two samples per stroke
    /// (both corners of every stroke are sampled).
    pub fn new(
        params: EngineParams,
        l1: f64,
        l3: f64,
        mode: Mode,
        samples_per_stroke: usize,
    ) -> Result<Self> {
        if !(l1 > 0.0 && l1.is_finite()) {
            return Err(Error::Geometry(format!("l1 must be positive and finite, got {l1}")));
        }
        if !l3.is_finite() {
            return Err(Error::Geometry(format!("l3 must be finite, got {l3}")));
        }
        let l2 = isotherm_endpoint(&params, l1, LevelIndex::GROUND, LevelIndex::EXCITED)?;
        if l3 <= l2 {
            return Err(Error::Geometry(format!(
                "l3 = {l3} must exceed the hot-isotherm endpoint 1.5 * l1 = {l2}"
            )));
        }
        if samples_per_stroke < 2 {
            return Err(Error::Domain(format!(
                "samples per stroke must be at least 2, got {samples_per_stroke}"
            )));
        }
        Ok(Self { params, l1, l3, mode, samples_per_stroke })
    }

    /// Spec with the default sample count.
    pub fn with_defaults(params: EngineParams, l1: f64, l3: f64, mode: Mode) -> Result<Self> {
        Self::new(params, l1, l3, mode, DEFAULT_SAMPLES_PER_STROKE)
    }

    pub fn params(&self) -> &EngineParams {
        &self.params
    }

    pub fn l1(&self) -> f64 {
        self.l1
    }

    pub fn l2(&self) -> f64 {
        self.l1 * LevelIndex::EXCITED.factor() / LevelIndex::GROUND.factor()
    }

    pub fn l3(&self) -> f64 {
        self.l3
    }

    pub fn l4(&self) -> f64 {
        self.l3 * LevelIndex::GROUND.factor() / LevelIndex::EXCITED.factor()
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn samples_per_stroke(&self) -> usize {
        self.samples_per_stroke
    }

    pub fn with_mode(&self, mode: Mode) -> Self {
        Self { mode, ..*self }
    }

    /// Same geometry with a different engine. Geometry does not depend on
    /// the well depth, so this cannot fail.
    pub fn with_params(&self, params: EngineParams) -> Self {
        Self { params, ..*self }
    }

    /// Energy pinned on the hot isotherm, `E_1(l1)`.
    pub fn e_h(&self) -> f64 {
        energy_level(&self.params, LevelIndex::GROUND, self.l1).expect("l1 validated")
    }

    /// Energy pinned on the cold isotherm, `E_2(l3)`.
    pub fn e_c(&self) -> f64 {
        energy_level(&self.params, LevelIndex::EXCITED, self.l3).expect("l3 validated")
    }

    /// The four strokes in traversal order.
    pub fn strokes(&self) -> [Stroke; 4] {
        let (g, x) = (LevelIndex::GROUND, LevelIndex::EXCITED);
        let (l1, l2, l3, l4) = (self.l1, self.l2(), self.l3, self.l4());
        let (e_h, e_c) = (self.e_h(), self.e_c());
        let build = |kind, from, to, a, b, e| {
            Stroke::new(kind, from, to, a, b, e).expect("validated cycle geometry")
        };
        [
            build(StrokeKind::IsothermalExpansion, g, x, l1, l2, e_h),
            build(StrokeKind::AdiabaticExpansion, x, x, l2, l3, e_c),
            build(StrokeKind::IsothermalCompression, x, g, l3, l4, e_c),
            build(StrokeKind::AdiabaticCompression, g, g, l4, l1, e_h),
        ]
    }

    /// Wall pressure at `l` on `stroke` under this spec's mode.
    pub fn stroke_pressure(&self, stroke: &Stroke, l: f64) -> Result<f64> {
        let params = &self.params;
        match (stroke.kind(), self.mode) {
            (StrokeKind::IsothermalExpansion, Mode::Paper) => {
                isotherm_pressure_paper(params, IsothermBranch::Expansion { l1: self.l1 }, l)
            }
            (StrokeKind::IsothermalCompression, Mode::Paper) => {
                isotherm_pressure_paper(params, IsothermBranch::Compression { l3: self.l3 }, l)
            }
            (StrokeKind::IsothermalExpansion | StrokeKind::IsothermalCompression, Mode::Exact) => {
                isotherm_pressure_exact(params, stroke.e_ref(), l)
            }
            (StrokeKind::AdiabaticExpansion | StrokeKind::AdiabaticCompression, _) => {
                adiabat_pressure(params, stroke.n_to(), l)
            }
        }
    }
}

/// Computed cycle quantities. Field order is the serialized key order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CycleResult {
    pub l1: f64,
    pub l2: f64,
    pub l3: f64,
    pub l4: f64,
    /// Signed work of strokes 1->2, 2->3, 3->4, 4->1.
    pub work_per_stroke: [f64; 4],
    pub work_total: f64,
    pub heat_input: f64,
    pub e_h: f64,
    pub e_c: f64,
    pub efficiency: f64,
    pub mode: Mode,
}

/// `int F dL` over `[a, b]` for a fallible integrand; the first integrand
/// error wins over any quadrature error it caused.
pub(crate) fn integrate_fallible<F>(f: F, a: f64, b: f64, tol: &Tolerance) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let mut failure = None;
    let value = integrate(
        |x| match f(x) {
            Ok(v) => v,
            Err(e) => {
                failure.get_or_insert(e);
                f64::NAN
            }
        },
        a,
        b,
        tol,
    );
    match failure {
        Some(e) => Err(e),
        None => value,
    }
}

/// Work of each stroke by adaptive quadrature of the spec-mode pressures.
pub fn stroke_work_by_quadrature(spec: &CycleSpec, tol: &Tolerance) -> Result<[f64; 4]> {
    let strokes = spec.strokes();
    let mut work = [0.0; 4];
    for (w, stroke) in work.iter_mut().zip(strokes.iter()) {
        *w = integrate_fallible(
            |l| spec.stroke_pressure(stroke, l),
            stroke.l_start(),
            stroke.l_end(),
            tol,
        )?;
    }
    Ok(work)
}

/// Published closed forms `(Q_H, Q_C)` where `W = Q_H - Q_C`:
/// `Q_H = V0^2 m L1^2 / (72 hbar) - hbar^2 ln(3/2) / (m L1^2)` and
/// `Q_C = V0^2 m L3^2 / (72 hbar) - 9 hbar^2 ln(3/2) / (4 m L3^2)`.
pub fn paper_heat_terms(params: &EngineParams, l1: f64, l3: f64) -> (f64, f64) {
    let (h, m, v0) = (params.hbar(), params.mass(), params.v0());
    let ln = 1.5f64.ln();
    let hot = v0 * v0 * m * l1 * l1 / (72.0 * h) - h * h * ln / (m * l1 * l1);
    let cold = v0 * v0 * m * l3 * l3 / (72.0 * h) - 9.0 * h * h * ln / (4.0 * m * l3 * l3);
    (hot, cold)
}

pub fn run_cycle(spec: &CycleSpec) -> Result<CycleResult> {
    let params = spec.params();
    let (l1, l2, l3, l4) = (spec.l1(), spec.l2(), spec.l3(), spec.l4());
    let (g, x) = (LevelIndex::GROUND, LevelIndex::EXCITED);

    let (work_per_stroke, work_total, heat_input, efficiency) = match spec.mode() {
        Mode::Paper => {
            let (hot, cold) = paper_heat_terms(params, l1, l3);
            if hot.abs() < MIN_HEAT_INPUT {
                return Err(Error::UndefinedEfficiency { heat_input: hot });
            }
            // Adiabats: W = E(start) - E(end); the two cancel identically.
            let w23 = energy_level(params, x, l2)? - energy_level(params, x, l3)?;
            let w41 = energy_level(params, g, l4)? - energy_level(params, g, l1)?;
            ([hot, w23, -cold, w41], hot - cold, hot, 1.0 - cold / hot)
        }
        Mode::Exact => {
            let tol = Tolerance::absolute(STROKE_QUADRATURE_TOL)?;
            let work = stroke_work_by_quadrature(spec, &tol)?;
            let heat = work[0];
            if heat.abs() < MIN_HEAT_INPUT {
                return Err(Error::UndefinedEfficiency { heat_input: heat });
            }
            let total = work.iter().sum::<f64>();
            (work, total, heat, total / heat)
        }
    };

    Ok(CycleResult {
        l1,
        l2,
        l3,
        l4,
        work_per_stroke,
        work_total,
        heat_input,
        e_h: spec.e_h(),
        e_c: spec.e_c(),
        efficiency,
        mode: spec.mode(),
    })
}

fn check_limit_geometry(l1: f64, l3: f64) -> Result<()> {
    if !(l1 > 0.0 && l1.is_finite() && l3.is_finite()) {
        return Err(Error::Geometry(format!("invalid lengths l1 = {l1}, l3 = {l3}")));
    }
    if l3 < 1.5 * l1 {
        return Err(Error::Geometry(format!("l3 = {l3} must be at least 1.5 * l1 = {}", 1.5 * l1)));
    }
    Ok(())
}

/// Zero-depth efficiency `1 - 9 l1^2 / (4 l3^2)`. Accepts the degenerate
/// boundary `l3 = 1.5 l1`, where it returns 0.
pub fn efficiency_v0_zero(l1: f64, l3: f64) -> Result<f64> {
    check_limit_geometry(l1, l3)?;
    Ok(1.0 - 9.0 * l1 * l1 / (4.0 * l3 * l3))
}

/// Zero-depth efficiency as `1 - E_C / E_H` with
/// `E_H = hbar^2 / (2 m l1^2)` and `E_C = 9 hbar^2 / (8 m l3^2)`.
pub fn efficiency_energy_ratio(params: &EngineParams, l1: f64, l3: f64) -> Result<f64> {
    check_limit_geometry(l1, l3)?;
    let (h, m) = (params.hbar(), params.mass());
    let e_h = h * h / (2.0 * m * l1 * l1);
    let e_c = 9.0 * h * h / (8.0 * m * l3 * l3);
    Ok(1.0 - e_c / e_h)
}
