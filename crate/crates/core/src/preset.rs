//! Named sweeps reproducing the standard figure regimes.
//!
//! Plot ranges are generous guesses that cover every feature of interest:
//! 200 points for one-dimensional axes, 101×101 for maps.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::model::{Drive, SystemParams};
use crate::sweep::{Axis, Output, ParamName, SweepSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Preset {
    Fig2a,
    Fig2b,
    Fig4a,
    Fig4b,
    Fig6a,
    Fig6b,
    Fig7a,
    Fig7b,
    Fig8a,
    Fig8b,
}

const LINE_POINTS: usize = 200;
const MAP_POINTS: usize = 101;

/// Physical rates of the experiment-like regime, in MHz (divided by 2π).
pub const FIG8_KAPPA_MHZ: f64 = 2.8;
pub const FIG8_GAMMA_MHZ: f64 = 3.0;
pub const FIG8_ETA_MHZ: f64 = 1.4;

impl Preset {
    pub const ALL: [Preset; 10] = [
        Preset::Fig2a,
        Preset::Fig2b,
        Preset::Fig4a,
        Preset::Fig4b,
        Preset::Fig6a,
        Preset::Fig6b,
        Preset::Fig7a,
        Preset::Fig7b,
        Preset::Fig8a,
        Preset::Fig8b,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Fig2a => "fig2a",
            Preset::Fig2b => "fig2b",
            Preset::Fig4a => "fig4a",
            Preset::Fig4b => "fig4b",
            Preset::Fig6a => "fig6a",
            Preset::Fig6b => "fig6b",
            Preset::Fig7a => "fig7a",
            Preset::Fig7b => "fig7b",
            Preset::Fig8a => "fig8a",
            Preset::Fig8b => "fig8b",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            Preset::Fig2a => "one atom, cavity drive: g2 vs g for gamma = kappa and kappa/2",
            Preset::Fig2b => "one atom, atom drive: g2 vs g for eta = 0.01, 0.3, 1",
            Preset::Fig4a => "cavity drive: g2 vs g for one and two atoms",
            Preset::Fig4b => "atom drive: g2 vs g for one and two atoms",
            Preset::Fig6a => "two atoms, atom drive, g = 0.5: g2 and |+,1> population vs delta_a",
            Preset::Fig6b => "two atoms, atom drive, g = 5: g2 and |+,1> population vs delta_a",
            Preset::Fig7a => "two atoms, atom drive, g = 0.5: g2 map over (delta_a, delta_c)",
            Preset::Fig7b => "two atoms, atom drive, g = 5: g2 map over (delta_a, delta_c)",
            Preset::Fig8a => "experimental rates: g2 map over (Delta, g) on delta_c = -2 delta_a",
            Preset::Fig8b => "experimental rates: counting rate map over (Delta, g) on delta_c = -2 delta_a",
        }
    }

    /// The sweep in units of κ.
    pub fn spec(self) -> SweepSpec {
        let lin = |p, a, b, n| Axis::linspace(p, a, b, n).expect("preset axes are valid");
        let list = |p, v: &[f64]| Axis::values(p, v.to_vec()).expect("preset axes are valid");
        let out = |names: &[&str]| -> Vec<Output> {
            names.iter().map(|s| s.parse().expect("preset outputs are valid")).collect()
        };
        let weak = SystemParams {
            kappa: 1.0,
            gamma: 1.0,
            eta: 0.01,
            n_max: 5,
            ..Default::default()
        };
        let coupling = lin(ParamName::G, 0.05, 3.0, LINE_POINTS);
        let detuned = |g| SystemParams {
            n_atoms: 2,
            g,
            delta_c: 20.0,
            drive: Drive::Atom,
            ..weak
        };

        let (base, axis1, axis2, outputs) = match self {
            Preset::Fig2a => (
                weak,
                coupling,
                Some(list(ParamName::Gamma, &[1.0, 0.5])),
                out(&["g2_zero", "g2_analytic", "mean_photons"]),
            ),
            Preset::Fig2b => (
                SystemParams {
                    drive: Drive::Atom,
                    n_max: 10,
                    ..weak
                },
                lin(ParamName::G, 0.05, 10.0, LINE_POINTS),
                Some(list(ParamName::Eta, &[0.01, 0.3, 1.0])),
                out(&["g2_zero", "mean_photons"]),
            ),
            Preset::Fig4a | Preset::Fig4b => (
                SystemParams {
                    drive: if self == Preset::Fig4a { Drive::Cavity } else { Drive::Atom },
                    ..weak
                },
                coupling,
                Some(list(ParamName::NAtoms, &[1.0, 2.0])),
                out(&["g2_zero", "g2_analytic", "mean_photons"]),
            ),
            Preset::Fig6a | Preset::Fig6b => (
                detuned(if self == Preset::Fig6a { 0.5 } else { 5.0 }),
                lin(ParamName::DeltaA, -20.0, 10.0, LINE_POINTS),
                None,
                out(&["g2_zero", "g2_analytic", "g2_large_detuning", "mean_photons", "pop:+,1"]),
            ),
            Preset::Fig7a | Preset::Fig7b => (
                detuned(if self == Preset::Fig7a { 0.5 } else { 5.0 }),
                lin(ParamName::DeltaA, -20.0, 20.0, MAP_POINTS),
                Some(lin(ParamName::DeltaC, -40.0, 40.0, MAP_POINTS)),
                out(&["g2_zero", "mean_photons"]),
            ),
            Preset::Fig8a | Preset::Fig8b => (
                SystemParams {
                    n_atoms: 2,
                    kappa: FIG8_KAPPA_MHZ,
                    gamma: FIG8_GAMMA_MHZ,
                    eta: FIG8_ETA_MHZ,
                    drive: Drive::Atom,
                    n_max: 10,
                    ..Default::default()
                },
                lin(ParamName::Delta, 0.0, 20.0 * FIG8_KAPPA_MHZ, MAP_POINTS),
                Some(lin(ParamName::G, FIG8_KAPPA_MHZ, 10.0 * FIG8_KAPPA_MHZ, MAP_POINTS)),
                if self == Preset::Fig8a {
                    out(&["g2_zero", "mean_photons"])
                } else {
                    out(&["counting_rate", "mean_photons"])
                },
            ),
        };
        SweepSpec {
            base,
            axis1,
            axis2,
            outputs,
            preset: Some(self),
        }
        .normalised()
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown preset {s:?}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sweep::AxisRange;

    /// Transcribed figure parameters, in units of κ:
    /// (preset, atoms, drive, g, γ, η, Δ_a, Δ_c, swept axes)
    #[allow(clippy::type_complexity)]
    const TABLE: [(Preset, usize, Drive, Option<f64>, Option<f64>, Option<f64>, Option<f64>, Option<f64>, &[&str]); 10] = [
        (Preset::Fig2a, 1, Drive::Cavity, None, None, Some(0.01), Some(0.0), Some(0.0), &["g", "gamma"]),
        (Preset::Fig2b, 1, Drive::Atom, None, Some(1.0), None, Some(0.0), Some(0.0), &["g", "eta"]),
        (Preset::Fig4a, 0, Drive::Cavity, None, Some(1.0), Some(0.01), Some(0.0), Some(0.0), &["g", "n_atoms"]),
        (Preset::Fig4b, 0, Drive::Atom, None, Some(1.0), Some(0.01), Some(0.0), Some(0.0), &["g", "n_atoms"]),
        (Preset::Fig6a, 2, Drive::Atom, Some(0.5), Some(1.0), Some(0.01), None, Some(20.0), &["delta_a"]),
        (Preset::Fig6b, 2, Drive::Atom, Some(5.0), Some(1.0), Some(0.01), None, Some(20.0), &["delta_a"]),
        (Preset::Fig7a, 2, Drive::Atom, Some(0.5), Some(1.0), Some(0.01), None, None, &["delta_a", "delta_c"]),
        (Preset::Fig7b, 2, Drive::Atom, Some(5.0), Some(1.0), Some(0.01), None, None, &["delta_a", "delta_c"]),
        (Preset::Fig8a, 2, Drive::Atom, None, Some(3.0 / 2.8), Some(1.4 / 2.8), None, None, &["Delta", "g"]),
        (Preset::Fig8b, 2, Drive::Atom, None, Some(3.0 / 2.8), Some(1.4 / 2.8), None, None, &["Delta", "g"]),
    ];

    #[test]
    fn presets_match_figure_parameters() {
        let close = |a: f64, b: f64| (a - b).abs() <= 1e-12 * b.abs().max(1.0);
        for (preset, atoms, drive, g, gamma, eta, da, dc, axes) in TABLE {
            let spec = preset.spec();
            let b = spec.base;
            assert_eq!(b.kappa, 1.0, "{preset}");
            if atoms != 0 {
                assert_eq!(b.n_atoms, atoms, "{preset}");
            }
            assert_eq!(b.drive, drive, "{preset}");
            for (name, want, got) in [("g", g, b.g), ("gamma", gamma, b.gamma), ("eta", eta, b.eta), ("delta_a", da, b.delta_a), ("delta_c", dc, b.delta_c)] {
                if let Some(w) = want {
                    assert!(close(got, w), "{preset} {name}: {got} vs {w}");
                }
            }
            let mut swept = vec![spec.axis1.param.key()];
            swept.extend(spec.axis2.as_ref().map(|a| a.param.key()));
            assert_eq!(swept, axes, "{preset}");
            assert_eq!(spec.preset, Some(preset));
            spec.validate().unwrap();
        }
    }

    #[test]
    fn swept_values_match_figures() {
        let axis2 = |p: Preset| p.spec().axis2.unwrap().points().to_vec();
        assert_eq!(axis2(Preset::Fig2a), vec![1.0, 0.5]);
        assert_eq!(axis2(Preset::Fig2b), vec![0.01, 0.3, 1.0]);
        assert_eq!(axis2(Preset::Fig4a), vec![1.0, 2.0]);
        let g = Preset::Fig8a.spec().axis2.unwrap();
        assert!((g.points()[0] - 1.0).abs() < 1e-12 && (g.points()[100] - 10.0).abs() < 1e-12);
        let delta = Preset::Fig8b.spec().axis1;
        assert!(matches!(delta.range, AxisRange::Linspace { count: 101, .. }));
        assert!((delta.points()[50] - 10.0).abs() < 1e-12);
        assert_eq!(Preset::Fig7a.spec().grid().len(), 101 * 101);
        assert_eq!(Preset::Fig6b.spec().grid().len(), 200);
    }

    #[test]
    fn names_round_trip() {
        for p in Preset::ALL {
            assert_eq!(p.name().parse::<Preset>().unwrap(), p);
        }
        assert!("fig3".parse::<Preset>().is_err());
    }
}
