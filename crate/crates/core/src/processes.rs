//! The four strokes of the cycle.
//!
//! On an isotherm the wall moves while the energy expectation value stays
//! pinned at a reference value; the state is a superposition of levels 1 and
//! 2 whose weight is fixed by that single condition. On an adiabat the
//! system stays in one eigenstate.
//!
//! Two isotherm pressures are offered: [`isotherm_pressure_exact`] follows
//! from the energy-conserving weight, [`isotherm_pressure_paper`] is the
//! published closed form. They agree at `V0 = 0` and drift apart otherwise.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{find_root, Tolerance};
use crate::spectrum::{
    check_length, energy_level, mixture_pressure, pressure_level, EngineParams, LevelIndex,
    MixedState,
};

/// Slack allowed on a solved weight before it is treated as out of range.
pub const WEIGHT_TOLERANCE: f64 = 1e-9;

/// Level-gap magnitude below which the isotherm is treated as degenerate.
pub const DEGENERACY_THRESHOLD: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum StrokeKind {
    IsothermalExpansion,
    AdiabaticExpansion,
    IsothermalCompression,
    AdiabaticCompression,
}

impl StrokeKind {
    /// Traversal order 1 -> 2 -> 3 -> 4 -> 1.
    pub const CYCLE: [StrokeKind; 4] = [
        StrokeKind::IsothermalExpansion,
        StrokeKind::AdiabaticExpansion,
        StrokeKind::IsothermalCompression,
        StrokeKind::AdiabaticCompression,
    ];

    pub fn is_isothermal(self) -> bool {
        matches!(self, StrokeKind::IsothermalExpansion | StrokeKind::IsothermalCompression)
    }

    pub fn is_expansion(self) -> bool {
        matches!(self, StrokeKind::IsothermalExpansion | StrokeKind::AdiabaticExpansion)
    }

    pub fn name(self) -> &'static str {
        match self {
            StrokeKind::IsothermalExpansion => "IsothermalExpansion",
            StrokeKind::AdiabaticExpansion => "AdiabaticExpansion",
            StrokeKind::IsothermalCompression => "IsothermalCompression",
            StrokeKind::AdiabaticCompression => "AdiabaticCompression",
        }
    }
}

impl fmt::Display for StrokeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One leg of the cycle.
///
/// `e_ref` is the pinned expectation value on an isotherm and the energy at
/// `l_end` on an adiabat.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Stroke {
    kind: StrokeKind,
    n_from: LevelIndex,
    n_to: LevelIndex,
    l_start: f64,
    l_end: f64,
    e_ref: f64,
}

impl Stroke {
    pub fn new(
        kind: StrokeKind,
        n_from: LevelIndex,
        n_to: LevelIndex,
        l_start: f64,
        l_end: f64,
        e_ref: f64,
    ) -> Result<Self> {
        check_length(l_start)?;
        check_length(l_end)?;
        if kind.is_expansion() && l_end <= l_start {
            return Err(Error::Geometry(format!(
                "{kind} must increase L (from {l_start} to {l_end})"
            )));
        }
        if !kind.is_expansion() && l_end >= l_start {
            return Err(Error::Geometry(format!(
                "{kind} must decrease L (from {l_start} to {l_end})"
            )));
        }
        if kind.is_isothermal() == (n_from == n_to) {
            return Err(Error::Domain(format!(
                "{kind} cannot connect levels {} and {}",
                n_from.get(),
                n_to.get()
            )));
        }
        Ok(Self { kind, n_from, n_to, l_start, l_end, e_ref })
    }

    pub fn kind(&self) -> StrokeKind {
        self.kind
    }

    pub fn n_from(&self) -> LevelIndex {
        self.n_from
    }

    pub fn n_to(&self) -> LevelIndex {
        self.n_to
    }

    pub fn l_start(&self) -> f64 {
        self.l_start
    }

    pub fn l_end(&self) -> f64 {
        self.l_end
    }

    pub fn e_ref(&self) -> f64 {
        self.e_ref
    }
}

/// Which isotherm a closed-form expression refers to, with its anchor length.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum IsothermBranch {
    /// Hot isotherm starting from the ground state at `l1`.
    Expansion { l1: f64 },
    /// Cold isotherm starting from the excited state at `l3`.
    Compression { l3: f64 },
}

impl IsothermBranch {
    fn anchor(self) -> f64 {
        match self {
            IsothermBranch::Expansion { l1 } => l1,
            IsothermBranch::Compression { l3 } => l3,
        }
    }
}

fn clamp_weight(w1: f64, l: f64) -> Result<MixedState> {
    if !w1.is_finite() || !(-WEIGHT_TOLERANCE..=1.0 + WEIGHT_TOLERANCE).contains(&w1) {
        return Err(Error::IsothermOutOfRange { l, w1 });
    }
    MixedState::new(w1.clamp(0.0, 1.0))
}

/// Ground-state weight that keeps the (1, 2) mixture energy equal to `e_ref`
/// at width `l`.
pub fn solve_isotherm_weight(params: &EngineParams, e_ref: f64, l: f64) -> Result<MixedState> {
    check_length(l)?;
    let l2 = l * l;
    // E1 - E2, written out so that no cancellation happens between the V0/2 offsets.
    let gap = 5.0 * params.kinetic_coeff() / l2 - 5.0 * params.depth_coeff() * l2 / 36.0;
    if gap.abs() < DEGENERACY_THRESHOLD {
        return Err(Error::DegenerateIsotherm { l });
    }
    let excess = e_ref - energy_level(params, LevelIndex::EXCITED, l)?;
    clamp_weight(excess / gap, l)
}

/// Far end of an isotherm that starts in pure level `n_from` at `l_start`
/// and ends in pure level `n_to`: `l_start (n_to + 1) / (n_from + 1)`.
///
/// The spectrum depends on `L` only through `L / (n + 1)`, so the ratio holds
/// for every well depth.
pub fn isotherm_endpoint(
    params: &EngineParams,
    l_start: f64,
    n_from: LevelIndex,
    n_to: LevelIndex,
) -> Result<f64> {
    let _ = params;
    check_length(l_start)?;
    if n_from == n_to {
        return Err(Error::Domain("isotherm endpoints need two distinct levels".into()));
    }
    Ok(l_start * n_to.factor() / n_from.factor())
}

/// Width at which `E_{n_to}(L) = E_{n_from}(l_start)`, found by Brent's method
/// on the monotone branch of `E_{n_to}` that contains the closed-form
/// endpoint. Independent check of [`isotherm_endpoint`].
pub fn solve_isotherm_endpoint(
    params: &EngineParams,
    l_start: f64,
    n_from: LevelIndex,
    n_to: LevelIndex,
    tol: &Tolerance,
) -> Result<f64> {
    let predicted = isotherm_endpoint(params, l_start, n_from, n_to)?;
    let target = energy_level(params, n_from, l_start)?;

    let (mut lo, mut hi) = (0.5 * predicted, 2.0 * predicted);
    if params.v0() > 0.0 {
        // E_n(L) peaks where P_n vanishes: L^4 = (n+1)^4 hbar^3 / (4 m^2 V0^2).
        let turning = n_to.factor()
            * (params.hbar().powi(3) / (4.0 * params.mass().powi(2) * params.v0().powi(2)))
                .powf(0.25);
        if predicted > turning {
            lo = lo.max(turning);
        } else {
            hi = hi.min(turning);
        }
    }
    find_root(|l| energy_level(params, n_to, l).unwrap_or(f64::NAN) - target, lo, hi, tol)
}

/// Pressure on an isotherm pinned at `e_ref`, using the energy-conserving
/// weight at `l`.
pub fn isotherm_pressure_exact(params: &EngineParams, e_ref: f64, l: f64) -> Result<f64> {
    let state = solve_isotherm_weight(params, e_ref, l)?;
    mixture_pressure(params, state, LevelIndex::GROUND, LevelIndex::EXCITED, l)
}

/// Published isotherm pressures.
///
/// Expansion: `V0^2 m L / (9 hbar) - hbar^2 / (m L1^2 L)`.
/// Compression: `V0^2 m L / (4 hbar) - 9 hbar^2 / (4 m L3^2 L)`.
pub fn isotherm_pressure_paper(params: &EngineParams, branch: IsothermBranch, l: f64) -> Result<f64> {
    check_length(l)?;
    check_length(branch.anchor())?;
    let (h, m, v0) = (params.hbar(), params.mass(), params.v0());
    Ok(match branch {
        IsothermBranch::Expansion { l1 } => v0 * v0 * m * l / (9.0 * h) - h * h / (m * l1 * l1 * l),
        IsothermBranch::Compression { l3 } => {
            v0 * v0 * m * l / (4.0 * h) - 9.0 * h * h / (4.0 * m * l3 * l3 * l)
        }
    })
}

/// Pressure of a fixed eigenstate; adiabats never change level.
pub fn adiabat_pressure(params: &EngineParams, n: LevelIndex, l: f64) -> Result<f64> {
    pressure_level(params, n, l)
}

/// The two widths obtained by matching the `hbar^2 / L^2` and `V0^2 L^2`
/// coefficients separately on an isotherm, as `(kinetic, depth)`.
///
/// `w1` is the ground-state weight in both branches. Expansion gives
/// `L^2 = L1^2 (9 - 5 w1) / 4` and `L^2 = 9 L1^2 / (5 w1 + 4)`; compression
/// gives `L^2 = L3^2 (9 - 5 w1) / 9` and `L^2 = 4 L3^2 / (5 w1 + 4)`. The two
/// agree only at `w1 = 0` and `w1 = 1`.
pub fn coefficient_match_lengths(branch: IsothermBranch, w1: f64) -> Result<(f64, f64)> {
    let w = MixedState::new(w1)?.w1();
    let anchor = branch.anchor();
    check_length(anchor)?;
    let (kinetic, depth) = match branch {
        IsothermBranch::Expansion { .. } => ((9.0 - 5.0 * w) / 4.0, 9.0 / (5.0 * w + 4.0)),
        IsothermBranch::Compression { .. } => ((9.0 - 5.0 * w) / 9.0, 4.0 / (5.0 * w + 4.0)),
    };
    Ok((anchor * kinetic.sqrt(), anchor * depth.sqrt()))
}

/// Ground-state weight at `l` from the kinetic coefficient-matching branch.
/// This is the weight reported alongside the published isotherm pressures.
pub fn paper_isotherm_weight(branch: IsothermBranch, l: f64) -> Result<MixedState> {
    check_length(l)?;
    let anchor = branch.anchor();
    check_length(anchor)?;
    let r2 = (l / anchor).powi(2);
    let w1 = match branch {
        IsothermBranch::Expansion { .. } => (9.0 - 4.0 * r2) / 5.0,
        IsothermBranch::Compression { .. } => (9.0 - 9.0 * r2) / 5.0,
    };
    clamp_weight(w1, l)
}
