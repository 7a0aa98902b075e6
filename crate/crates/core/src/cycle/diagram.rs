use serde::Serialize;

use super::{CycleSpec, Mode};
use crate::error::Result;
use crate::numerics::linspace;
use crate::processes::{paper_isotherm_weight, solve_isotherm_weight, IsothermBranch, StrokeKind};
use crate::spectrum::{energy_level, mixture_energy, LevelIndex};

/// One point of the pressure-width diagram.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PlSample {
    pub stroke: StrokeKind,
    pub l: f64,
    pub pressure: f64,
    pub energy: f64,
    /// Ground-state weight; present only on isotherms.
    pub w1: Option<f64>,
}

/// `samples_per_stroke` points on each stroke, corners included, in the
/// order 1 -> 2 -> 3 -> 4 -> 1.
///
/// Paper mode pairs the published isotherm pressures with the weight from
/// the kinetic coefficient-matching branch and reports the pinned energy.
/// Exact mode reports the energy-conserving weight and the mixture energy it
/// produces.
pub fn sample_pl_diagram(spec: &CycleSpec) -> Result<Vec<PlSample>> {
    let params = spec.params();
    let n = spec.samples_per_stroke();
    let mut out = Vec::with_capacity(4 * n);

    for stroke in spec.strokes() {
        let kind = stroke.kind();
        for l in linspace(stroke.l_start(), stroke.l_end(), n) {
            let pressure = spec.stroke_pressure(&stroke, l)?;
            let (energy, w1) = if kind.is_isothermal() {
                match spec.mode() {
                    Mode::Paper => {
                        let branch = if kind.is_expansion() {
                            IsothermBranch::Expansion { l1: spec.l1() }
                        } else {
                            IsothermBranch::Compression { l3: spec.l3() }
                        };
                        (stroke.e_ref(), Some(paper_isotherm_weight(branch, l)?.w1()))
                    }
                    Mode::Exact => {
                        let state = solve_isotherm_weight(params, stroke.e_ref(), l)?;
                        let e = mixture_energy(
                            params,
                            state,
                            LevelIndex::GROUND,
                            LevelIndex::EXCITED,
                            l,
                        )?;
                        (e, Some(state.w1()))
                    }
                }
            } else {
                (energy_level(params, stroke.n_to(), l)?, None)
            };
            out.push(PlSample { stroke: kind, l, pressure, energy, w1 });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::processes::isotherm_pressure_paper;
    use crate::spectrum::{pressure_level, EngineParams};

    fn spec(v0: f64, l1: f64, l3: f64, mode: Mode, n: usize) -> CycleSpec {
        CycleSpec::new(EngineParams::natural(v0).unwrap(), l1, l3, mode, n).unwrap()
    }

    #[test]
    fn sample_count_and_order() {
        let s = sample_pl_diagram(&spec(0.0, 1.0, 3.0, Mode::Paper, 4)).unwrap();
        assert_eq!(s.len(), 16);
        let kinds: Vec<_> = s.chunks(4).map(|c| c[0].stroke).collect();
        assert_eq!(kinds, StrokeKind::CYCLE.to_vec());
        assert!(s.chunks(4).all(|c| c.iter().all(|x| x.stroke == c[0].stroke)));
        assert_eq!(s[0].l, 1.0);
        assert_eq!(s[0].stroke, StrokeKind::IsothermalExpansion);
    }

    #[test]
    fn corners() {
        for mode in [Mode::Paper, Mode::Exact] {
            let sp = spec(1.0, 1.0, 3.0, mode, 9);
            let s = sample_pl_diagram(&sp).unwrap();
            let first = s[0];
            assert_eq!(first.l, 1.0);
            assert!((first.w1.unwrap() - 1.0).abs() < 1e-12);
            let expected = match mode {
                Mode::Paper => {
                    isotherm_pressure_paper(sp.params(), IsothermBranch::Expansion { l1: 1.0 }, 1.0)
                        .unwrap()
                }
                Mode::Exact => pressure_level(sp.params(), LevelIndex::GROUND, 1.0).unwrap(),
            };
            assert!((first.pressure - expected).abs() < 1e-12);
            let last = s[8];
            assert_eq!(last.l, 1.5);
            assert!(last.w1.unwrap().abs() < 1e-9);
            let corner_ls: Vec<f64> = s.chunks(9).map(|c| c[0].l).collect();
            assert_eq!(corner_ls, vec![1.0, 1.5, 3.0, 2.0]);
        }
    }

    #[test]
    fn weights_only_on_isotherms() {
        let s = sample_pl_diagram(&spec(0.5, 1.0, 2.0, Mode::Exact, 5)).unwrap();
        for x in &s {
            assert_eq!(x.w1.is_some(), x.stroke.is_isothermal());
        }
    }

    #[test]
    fn exact_mode_corners_are_continuous() {
        for &(v0, l3) in &[(0.0, 3.0), (0.5, 2.0), (1.0, 3.0)] {
            let s = sample_pl_diagram(&spec(v0, 1.0, l3, Mode::Exact, 16)).unwrap();
            for k in 0..4 {
                let end = s[16 * k + 15];
                let next = s[(16 * (k + 1)) % 64];
                assert_eq!(end.l, next.l);
                assert!((end.pressure - next.pressure).abs() < 1e-10, "v0={v0} corner {k}");
            }
        }
    }
}
