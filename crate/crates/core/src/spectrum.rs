//! Woods-Saxon level energies, wall pressures and two-level mixtures.
//!
//! Level energies follow
//!
//! ```text
//! E_n(L) = -[ V0/2 + (n+1)^2 hbar^2 / (8 m L^2) + V0^2 m L^2 / (2 hbar (n+1)^2) ]
//! ```
//!
//! with the ground state at `n = 1`. The last term carries `hbar` to the
//! first power. The pressure on the wall is `P_n(L) = -dE_n/dL`.
//! All energies and pressures are signed; bound states come out negative.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Constants of the working substance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EngineParams {
    hbar: f64,
    mass: f64,
    v0: f64,
}

impl EngineParams {
    pub fn new(hbar: f64, mass: f64, v0: f64) -> Result<Self> {
        if !(hbar.is_finite() && mass.is_finite() && v0.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "hbar, mass and v0 must be finite (got {hbar}, {mass}, {v0})"
            )));
        }
        if hbar <= 0.0 {
            return Err(Error::InvalidParams(format!("hbar must be positive, got {hbar}")));
        }
        if mass <= 0.0 {
            return Err(Error::InvalidParams(format!("mass must be positive, got {mass}")));
        }
        if v0 < 0.0 {
            return Err(Error::InvalidParams(format!("v0 must be non-negative, got {v0}")));
        }
        Ok(Self { hbar, mass, v0 })
    }

    /// Natural units with the given well depth.
    pub fn natural(v0: f64) -> Result<Self> {
        Self::new(1.0, 1.0, v0)
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn v0(&self) -> f64 {
        self.v0
    }

    /// Same constants with a different well depth.
    pub fn with_v0(&self, v0: f64) -> Result<Self> {
        Self::new(self.hbar, self.mass, v0)
    }

    /// Coefficient of the `L^2 / (n+1)^2` term: `V0^2 m / (2 hbar)`.
    pub(crate) fn depth_coeff(&self) -> f64 {
        self.v0 * self.v0 * self.mass / (2.0 * self.hbar)
    }

    /// Coefficient of the `(n+1)^2 / L^2` term: `hbar^2 / (8 m)`.
    pub(crate) fn kinetic_coeff(&self) -> f64 {
        self.hbar * self.hbar / (8.0 * self.mass)
    }
}

impl Default for EngineParams {
    fn default() -> Self {
        Self { hbar: 1.0, mass: 1.0, v0: 0.0 }
    }
}

/// Quantum number `n >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct LevelIndex(u32);

impl LevelIndex {
    pub const GROUND: LevelIndex = LevelIndex(1);
    pub const EXCITED: LevelIndex = LevelIndex(2);

    pub fn new(n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("level index must be >= 1".into()));
        }
        Ok(Self(n))
    }

    pub fn get(self) -> u32 {
        self.0
    }

    /// The `(n + 1)` factor the spectrum depends on.
    pub fn factor(self) -> f64 {
        f64::from(self.0) + 1.0
    }
}

impl TryFrom<u32> for LevelIndex {
    type Error = Error;

    fn try_from(n: u32) -> Result<Self> {
        Self::new(n)
    }
}

impl From<LevelIndex> for u32 {
    fn from(n: LevelIndex) -> u32 {
        n.0
    }
}

/// Occupation of a two-level superposition. Only the lower-level weight is
/// stored; the upper weight is always `1 - w1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MixedState {
    w1: f64,
}

impl MixedState {
    pub fn new(w1: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&w1) {
            return Err(Error::Domain(format!("weight w1 must lie in [0, 1], got {w1}")));
        }
        Ok(Self { w1 })
    }

    pub fn lower() -> Self {
        Self { w1: 1.0 }
    }

    pub fn upper() -> Self {
        Self { w1: 0.0 }
    }

    pub fn w1(&self) -> f64 {
        self.w1
    }

    pub fn w2(&self) -> f64 {
        1.0 - self.w1
    }
}

pub(crate) fn check_length(l: f64) -> Result<()> {
    if l > 0.0 && l.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("length must be positive and finite, got {l}")))
    }
}

fn check_pair(n_low: LevelIndex, n_high: LevelIndex) -> Result<()> {
    if n_low < n_high {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "mixture levels must satisfy n_low < n_high, got {} and {}",
            n_low.get(),
            n_high.get()
        )))
    }
}

/// Energy of level `n` in a well of width `l`.
pub fn energy_level(params: &EngineParams, n: LevelIndex, l: f64) -> Result<f64> {
    check_length(l)?;
    let k2 = n.factor().powi(2);
    let l2 = l * l;
    Ok(-(0.5 * params.v0 + params.kinetic_coeff() * k2 / l2 + params.depth_coeff() * l2 / k2))
}

/// Hellmann-Feynman pressure `-dE_n/dL` of level `n`:
/// `V0^2 m L / (hbar (n+1)^2) - (n+1)^2 hbar^2 / (4 m L^3)`.
pub fn pressure_level(params: &EngineParams, n: LevelIndex, l: f64) -> Result<f64> {
    check_length(l)?;
    let k2 = n.factor().powi(2);
    Ok(2.0 * params.depth_coeff() * l / k2 - 2.0 * params.kinetic_coeff() * k2 / (l * l * l))
}

/// Expectation value `w1 E_low + (1 - w1) E_high`.
pub fn mixture_energy(
    params: &EngineParams,
    state: MixedState,
    n_low: LevelIndex,
    n_high: LevelIndex,
    l: f64,
) -> Result<f64> {
    check_pair(n_low, n_high)?;
    let lo = energy_level(params, n_low, l)?;
    let hi = energy_level(params, n_high, l)?;
    Ok(state.w1() * lo + state.w2() * hi)
}

/// Weighted pressure `w1 P_low + (1 - w1) P_high`.
pub fn mixture_pressure(
    params: &EngineParams,
    state: MixedState,
    n_low: LevelIndex,
    n_high: LevelIndex,
    l: f64,
) -> Result<f64> {
    check_pair(n_low, n_high)?;
    let lo = pressure_level(params, n_low, l)?;
    let hi = pressure_level(params, n_high, l)?;
    Ok(state.w1() * lo + state.w2() * hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::derivative;
    use proptest::prelude::*;

    const G: LevelIndex = LevelIndex::GROUND;
    const X: LevelIndex = LevelIndex::EXCITED;

    fn p(v0: f64) -> EngineParams {
        EngineParams::natural(v0).unwrap()
    }

    fn lvl(n: u32) -> LevelIndex {
        LevelIndex::new(n).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
    }

    // Closed-form two-level expansion of the (1, 2) mixture energy.
    fn expanded_energy(pp: &EngineParams, w1: f64, l: f64) -> f64 {
        let (h, m, v0) = (pp.hbar(), pp.mass(), pp.v0());
        -v0 / 2.0 + h * h / (8.0 * m * l * l) * (5.0 * w1 - 9.0)
            - v0 * v0 * m * l * l / (72.0 * h) * (5.0 * w1 + 4.0)
    }

    fn expanded_pressure(pp: &EngineParams, w1: f64, l: f64) -> f64 {
        let (h, m, v0) = (pp.hbar(), pp.mass(), pp.v0());
        v0 * v0 * m * l / (36.0 * h) * (5.0 * w1 + 4.0)
            + h * h / (4.0 * m * l.powi(3)) * (5.0 * w1 - 9.0)
    }

    #[test]
    fn params_validation() {
        assert!(EngineParams::new(0.0, 1.0, 0.0).is_err());
        assert!(EngineParams::new(1.0, -1.0, 0.0).is_err());
        assert!(EngineParams::new(1.0, 1.0, -0.1).is_err());
        assert!(EngineParams::new(1.0, f64::INFINITY, 0.0).is_err());
        assert_eq!(EngineParams::default(), p(0.0));
    }

    #[test]
    fn level_index_is_one_based() {
        assert!(LevelIndex::new(0).is_err());
        assert_eq!(lvl(1), G);
        assert_eq!(G.factor(), 2.0);
    }

    #[test]
    fn mixed_state_range() {
        assert!(MixedState::new(-1e-3).is_err());
        assert!(MixedState::new(1.0 + 1e-12).is_err());
        assert!(MixedState::new(f64::NAN).is_err());
        let s = MixedState::new(0.3).unwrap();
        assert_eq!(s.w1() + s.w2(), 1.0);
    }

    #[test]
    fn energy_examples() {
        assert_eq!(energy_level(&p(0.0), G, 1.0).unwrap(), -0.5);
        assert_eq!(energy_level(&p(1.0), G, 1.0).unwrap(), -1.125);
        // Excited-level form -(V0/2 + 9/(8 L^2) + V0^2 L^2 / 18).
        let independent = -(0.5 + 9.0 / 8.0 + 1.0 / 18.0);
        let e2 = energy_level(&p(1.0), X, 1.0).unwrap();
        assert!((e2 - independent).abs() < 1e-15);
        assert!((e2 + 1.680_555_555_555_555_6).abs() < 1e-15);
    }

    #[test]
    fn non_positive_length_rejected() {
        assert!(energy_level(&p(1.0), G, 0.0).is_err());
        assert!(pressure_level(&p(1.0), G, -1.0).is_err());
        assert!(energy_level(&p(1.0), G, f64::NAN).is_err());
    }

    #[test]
    fn pressure_examples() {
        assert_eq!(pressure_level(&p(0.0), G, 1.0).unwrap(), -1.0);
        let p2 = pressure_level(&p(1.0), X, 1.0).unwrap();
        assert!((p2 - (1.0 / 9.0 - 9.0 / 4.0)).abs() < 1e-15);
    }

    #[test]
    fn mixture_examples() {
        let e = mixture_energy(&p(0.0), MixedState::lower(), G, X, 1.0).unwrap();
        assert_eq!(e, -0.5);
        let half = MixedState::new(0.5).unwrap();
        let e = mixture_energy(&p(0.0), half, G, X, 1.0).unwrap();
        assert!((e - 0.5 * (-0.5 - 1.125)).abs() < 1e-15);
        assert!((e + 0.8125).abs() < 1e-15);
        let e = mixture_energy(&p(1.0), MixedState::upper(), G, X, 1.0).unwrap();
        assert_eq!(e, energy_level(&p(1.0), X, 1.0).unwrap());

        let pr = mixture_pressure(&p(0.0), MixedState::lower(), G, X, 1.0).unwrap();
        assert_eq!(pr, -1.0);
        let pr = mixture_pressure(&p(1.0), MixedState::upper(), G, X, 1.0).unwrap();
        assert!((pr + 2.138_888_888_888_889).abs() < 1e-15);
        let pr = mixture_pressure(&p(0.0), half, G, X, 1.0).unwrap();
        assert!((pr + 1.625).abs() < 1e-15);
    }

    #[test]
    fn mixture_requires_ordered_levels() {
        let s = MixedState::new(0.5).unwrap();
        assert!(mixture_energy(&p(1.0), s, X, G, 1.0).is_err());
        assert!(mixture_pressure(&p(1.0), s, G, G, 1.0).is_err());
    }

    #[test]
    fn hellmann_feynman_on_excited_level() {
        let pp = p(1.0);
        let d = derivative(|l| energy_level(&pp, X, l).unwrap(), 1.3, 1e-5);
        let pr = pressure_level(&pp, X, 1.3).unwrap();
        assert!(rel(-d, pr) < 1e-6);
    }

    #[test]
    fn pure_mixtures_are_exact() {
        for &v0 in &[0.0, 0.5, 1.0, 5.0] {
            for &l in &[0.3, 1.0, 2.7] {
                let pp = p(v0);
                let lo = mixture_energy(&pp, MixedState::lower(), G, X, l).unwrap();
                let hi = mixture_energy(&pp, MixedState::upper(), G, X, l).unwrap();
                assert_eq!(lo, energy_level(&pp, G, l).unwrap());
                assert_eq!(hi, energy_level(&pp, X, l).unwrap());
            }
        }
    }

    #[test]
    fn scaling_collapse() {
        for &v0 in &[0.0, 1.0, 5.0] {
            let pp = p(v0);
            for n in 1..=5 {
                for &l in &[0.4, 1.0, 3.3] {
                    let direct = energy_level(&pp, lvl(n), l).unwrap();
                    let collapsed =
                        energy_level(&pp, G, 2.0 * l / (f64::from(n) + 1.0)).unwrap();
                    assert!(rel(collapsed, direct) < 1e-12, "n={n} l={l} v0={v0}");
                }
            }
        }
    }

    proptest! {
        #[test]
        fn pressure_is_minus_energy_slope(n in 1u32..=6, l in 0.3f64..5.0,
                                          v0 in 0.0f64..6.0, hbar in 0.5f64..2.0,
                                          mass in 0.5f64..2.0) {
            let pp = EngineParams::new(hbar, mass, v0).unwrap();
            let n = lvl(n);
            let h = 1e-5 * l;
            let fd = derivative(|x| energy_level(&pp, n, x).unwrap(), l, h);
            let pr = pressure_level(&pp, n, l).unwrap();
            // Pressure vanishes at the energy maximum; measure against the term scale there.
            let scale = pr.abs().max(1e-3 * (2.0 * pp.kinetic_coeff() * n.factor().powi(2) / l.powi(3)));
            prop_assert!((pr + fd).abs() / scale < 1e-6);
        }

        #[test]
        fn expanded_forms_match_weighted_sums(w1 in 0.0f64..=1.0, l in 0.2f64..5.0,
                                              v0 in 0.0f64..5.0) {
            let pp = p(v0);
            let s = MixedState::new(w1).unwrap();
            let e = mixture_energy(&pp, s, G, X, l).unwrap();
            let pr = mixture_pressure(&pp, s, G, X, l).unwrap();
            prop_assert!(rel(expanded_energy(&pp, w1, l), e) < 1e-12);
            let pe = expanded_pressure(&pp, w1, l);
            let scale = pr.abs().max(pp.depth_coeff() * l).max(1.0 / l.powi(3));
            prop_assert!((pe - pr).abs() / scale < 1e-12);
        }

        #[test]
        fn deeper_well_lowers_energy(n in 1u32..=5, l in 0.2f64..5.0,
                                     v0 in 0.0f64..5.0, dv in 1e-3f64..2.0) {
            let shallow = energy_level(&p(v0), lvl(n), l).unwrap();
            let deep = energy_level(&p(v0 + dv), lvl(n), l).unwrap();
            prop_assert!(deep < shallow);
        }
    }
}
