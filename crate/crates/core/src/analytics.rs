//! Weak-drive amplitude equations and the closed forms derived from them.
//!
//! The wavefunction is truncated at two excitations and normalised so the
//! ground amplitude is exactly 1. Amplitude equations use the convention
//! `0 = (H − iΓ/2)·C` with κ and γ energy decay rates.

use std::collections::BTreeMap;

use faer::linalg::solvers::Solve;
use faer::Mat;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::hilbert::{AtomState, AtomicLabel, StateLabel, ZERO};
use crate::model::{Drive, SystemParams};

const SQRT2: f64 = std::f64::consts::SQRT_2;
const I: C64 = C64::new(0.0, 1.0);
const PIVOT_RATIO_MIN: f64 = 1e-14;
/// Largest `max(γ, κ) / min(|Δ_a|, |Δ_c|)` for which the detuned g²(0)
/// approximation is trusted.
pub const DETUNED_VALIDITY_RATIO: f64 = 0.2;

fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AmplitudeBasis {
    /// `|g,n⟩, |e,n⟩`
    OneAtomProduct,
    /// `|gg,n⟩, |+,n⟩, |−,n⟩, |ee,n⟩`
    TwoAtomDicke,
}

/// How the truncated amplitude system is solved.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SolveOrder {
    /// Every retained coupling, including drive terms that feed second-order
    /// amplitudes back into first-order ones.
    #[default]
    Full,
    /// First order without feedback, then second order driven by it.
    Strict,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeSet {
    pub basis: AmplitudeBasis,
    pub amplitudes: BTreeMap<StateLabel, C64>,
}

impl AmplitudeSet {
    fn new(basis: AmplitudeBasis, entries: &[(&str, C64)]) -> Self {
        let amplitudes = entries
            .iter()
            .map(|(k, v)| (k.parse().expect("static label"), *v))
            .collect();
        Self { basis, amplitudes }
    }

    /// Amplitude for a label such as `"gg,2"`; zero when not retained.
    pub fn get(&self, label: &str) -> Result<C64> {
        let l: StateLabel = label.parse()?;
        Ok(self.amplitudes.get(&l).copied().unwrap_or(ZERO))
    }

    fn ground_labels(&self) -> (StateLabel, StateLabel) {
        let atoms = match self.basis {
            AmplitudeBasis::OneAtomProduct => AtomicLabel::Single(AtomState::Ground),
            AmplitudeBasis::TwoAtomDicke => AtomicLabel::Pair(AtomState::Ground, AtomState::Ground),
        };
        (StateLabel::new(atoms, 1), StateLabel::new(atoms, 2))
    }

    /// `2|C_2|² / |C_1|⁴` on the atomic-ground ladder.
    pub fn perturbative_g2(&self) -> Result<f64> {
        let (l1, l2) = self.ground_labels();
        let c1 = self.amplitudes.get(&l1).copied().unwrap_or(ZERO).norm_sqr();
        let c2 = self.amplitudes.get(&l2).copied().unwrap_or(ZERO).norm_sqr();
        if c1 == 0.0 {
            return Err(Error::ZeroDenominator("perturbative g2 (vanishing one-photon amplitude)"));
        }
        Ok(2.0 * c2 / (c1 * c1))
    }
}

/// Solves `a·x = b` for a handful of unknowns.
fn solve_small(a: Mat<C64>, b: &[C64], what: &'static str) -> Result<Vec<C64>> {
    let n = b.len();
    let lu = a.partial_piv_lu();
    let u = lu.U();
    let mags: Vec<f64> = (0..n).map(|k| u[(k, k)].norm()).collect();
    let hi = mags.iter().cloned().fold(0.0, f64::max);
    let lo = mags.iter().cloned().fold(f64::INFINITY, f64::min);
    if !(hi > 0.0 && lo / hi >= PIVOT_RATIO_MIN) {
        return Err(Error::SingularSystem(what));
    }
    let rhs = Mat::from_fn(n, 1, |i, _| b[i]);
    let x = lu.solve(&rhs);
    let out: Vec<C64> = (0..n).map(|i| x[(i, 0)]).collect();
    if out.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::SingularSystem(what));
    }
    Ok(out)
}

fn system(rows: &[&[C64]]) -> Mat<C64> {
    Mat::from_fn(rows.len(), rows.len(), |i, j| rows[i][j])
}

fn require(ok: bool, what: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidParams(what.to_string()))
    }
}

fn require_one_atom_cavity_resonant(p: &SystemParams) -> Result<()> {
    p.validate()?;
    require(p.n_atoms == 1, "expected one atom")?;
    require(p.drive == Drive::Cavity, "expected cavity drive")?;
    require(p.delta_a == 0.0 && p.delta_c == 0.0, "expected zero detunings")
}

/// Steady amplitudes `{C_g1, C_g2, C_e0, C_e1}` of the one-atom cavity-driven
/// system at zero detuning, with `C_g0 = 1`.
///
/// The `|e,0⟩ ↔ |e,1⟩` drive element is η, the Hermitian partner of the
/// `|e,1⟩ ← |e,0⟩` element.
pub fn amplitude_steady_one_atom_cavity(p: &SystemParams, order: SolveOrder) -> Result<AmplitudeSet> {
    require_one_atom_cavity_resonant(p)?;
    let (g, k, gm, eta) = (re(p.g), re(p.kappa), re(p.gamma), re(p.eta));
    let s2 = re(SQRT2);
    let z = ZERO;
    let (g1, g2, e0, e1) = match order {
        SolveOrder::Full => {
            // unknowns: g1, g2, e0, e1
            let a = system(&[
                &[-I * k / 2.0, s2 * eta, g, z],
                &[s2 * eta, -I * k, z, s2 * g],
                &[g, z, -I * gm / 2.0, eta],
                &[z, s2 * g, eta, -I * (k + gm) / 2.0],
            ]);
            let x = solve_small(a, &[-eta, z, z, z], "one-atom amplitude system")?;
            (x[0], x[1], x[2], x[3])
        }
        SolveOrder::Strict => {
            let a1 = system(&[&[-I * k / 2.0, g], &[g, -I * gm / 2.0]]);
            let x1 = solve_small(a1, &[-eta, z], "one-atom first-order system")?;
            let a2 = system(&[&[-I * k, s2 * g], &[s2 * g, -I * (k + gm) / 2.0]]);
            let x2 = solve_small(a2, &[-s2 * eta * x1[0], -eta * x1[1]], "one-atom second-order system")?;
            (x1[0], x2[0], x1[1], x2[1])
        }
    };
    Ok(AmplitudeSet::new(
        AmplitudeBasis::OneAtomProduct,
        &[("g,0", re(1.0)), ("g,1", g1), ("g,2", g2), ("e,0", e0), ("e,1", e1)],
    ))
}

/// Closed-form two-photon amplitude of the resonant one-atom cavity-driven
/// system.
pub fn c_g2_closed_form(p: &SystemParams) -> Result<C64> {
    require_one_atom_cavity_resonant(p)?;
    let (g2, k, gm, e2) = (p.g * p.g, p.kappa, p.gamma, p.eta * p.eta);
    let x = 4.0 * e2 - 8.0 * g2 + gm * gm + k * k + gm * k;
    let den = (gm * k + 4.0 * g2) * (gm * k + 4.0 * g2 + k * k) + 4.0 * e2 * x;
    if den == 0.0 {
        return Err(Error::ZeroDenominator("one-atom two-photon amplitude"));
    }
    let num = 2.0 * SQRT2 * e2 * (-gm * gm - gm * k + 4.0 * g2 - 4.0 * e2);
    Ok(re(num / den))
}

/// Coupling at which the one-atom two-photon amplitude vanishes.
pub fn optimal_g(gamma: f64, kappa: f64, eta: f64) -> f64 {
    0.5 * (gamma * gamma + gamma * kappa + 4.0 * eta * eta).sqrt()
}

/// Closed-form `C_gg2` for two atoms, cavity drive, zero detuning.
pub fn c_gg2_two_atom_cavity(p: &SystemParams) -> Result<C64> {
    p.validate()?;
    require(p.n_atoms == 2, "expected two atoms")?;
    require(p.drive == Drive::Cavity, "expected cavity drive")?;
    require(p.delta_a == 0.0 && p.delta_c == 0.0, "expected zero detunings")?;
    let (g2, k, gm, e2) = (p.g * p.g, p.kappa, p.gamma, p.eta * p.eta);
    let den = (gm * k + 8.0 * g2) * (gm * gm * k + gm * k * k + 8.0 * gm * g2 + 4.0 * g2 * k);
    if den == 0.0 {
        return Err(Error::ZeroDenominator("two-atom cavity-driven two-photon amplitude"));
    }
    let num = 2.0 * SQRT2 * gm * e2 * (4.0 * g2 - gm * gm - gm * k - 4.0 * e2);
    Ok(re(num / den))
}

fn require_two_atom_driven(p: &SystemParams) -> Result<()> {
    p.validate()?;
    require(p.n_atoms == 2, "expected two atoms")?;
    require(p.drive == Drive::Atom, "expected atom drive")
}

/// Steady amplitudes `{C_gg1, C_gg2, C_+0, C_+1, C_ee0}` of the two-atom
/// atom-driven system with arbitrary detunings, `C_gg0 = 1`.
pub fn amplitude_steady_two_atom_driven(p: &SystemParams, order: SolveOrder) -> Result<AmplitudeSet> {
    require_two_atom_driven(p)?;
    let (g, k, gm) = (re(p.g), re(p.kappa), re(p.gamma));
    let (da, dc) = (re(p.delta_a), re(p.delta_c));
    let se = re(SQRT2 * p.eta);
    let sg = re(SQRT2 * p.g);
    let z = ZERO;
    let d_gg1 = -(I * k / 2.0 + dc);
    let d_gg2 = -2.0 * dc - I * k;
    let d_p0 = -(da + I * gm / 2.0);
    let d_p1 = -(da + dc + I * (gm + k) / 2.0);
    let d_ee = -(2.0 * da + I * gm);

    let (gg1, gg2, p0, p1, ee) = match order {
        SolveOrder::Full => {
            // unknowns: gg1, gg2, p0, p1, ee0
            let a = system(&[
                &[d_gg1, z, sg, se, z],
                &[z, d_gg2, z, 2.0 * g, z],
                &[sg, z, d_p0, z, se],
                &[se, 2.0 * g, z, d_p1, sg],
                &[z, z, se, sg, d_ee],
            ]);
            let x = solve_small(a, &[z, z, -se, z, z], "two-atom amplitude system")?;
            (x[0], x[1], x[2], x[3], x[4])
        }
        SolveOrder::Strict => {
            let a1 = system(&[&[d_gg1, sg], &[sg, d_p0]]);
            let x1 = solve_small(a1, &[z, -se], "two-atom first-order system")?;
            let a2 = system(&[&[d_gg2, 2.0 * g, z], &[2.0 * g, d_p1, sg], &[z, sg, d_ee]]);
            let x2 = solve_small(a2, &[z, -se * x1[0], -se * x1[1]], "two-atom second-order system")?;
            (x1[0], x2[0], x1[1], x2[1], x2[2])
        }
    };
    Ok(AmplitudeSet::new(
        AmplitudeBasis::TwoAtomDicke,
        &[
            ("gg,0", re(1.0)),
            ("gg,1", gg1),
            ("gg,2", gg2),
            ("+,0", p0),
            ("+,1", p1),
            ("ee,0", ee),
        ],
    ))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetunedAmplitudes {
    pub c_gg2: C64,
    pub c_gg1: C64,
    pub c_plus1: C64,
}

impl DetunedAmplitudes {
    pub fn perturbative_g2(&self) -> f64 {
        2.0 * self.c_gg2.norm_sqr() / self.c_gg1.norm_sqr().powi(2)
    }
}

/// Closed forms for `C_gg2`, `C_gg1` and `C_+1` of the detuned two-atom
/// atom-driven system.
pub fn closed_form_two_atom_detuned(p: &SystemParams) -> Result<DetunedAmplitudes> {
    require_two_atom_driven(p)?;
    let (g2, k, gm, eta) = (re(p.g * p.g), re(p.kappa), re(p.gamma), re(p.eta));
    let (da, dc) = (re(p.delta_a), re(p.delta_c));
    let x = da * (-4.0 * dc - 2.0 * I * k) - 2.0 * I * gm * dc + gm * k + 8.0 * g2;
    let y = -4.0 * da * da * (k - 2.0 * I * dc) + gm * gm * k - 4.0 * gm * dc * dc
        - 2.0 * I * dc * (gm * gm + 2.0 * gm * k + 4.0 * g2)
        + gm * k * k
        + 8.0 * gm * g2
        + 4.0 * g2 * k;
    let zz = -4.0 * I * dc * (gm + k) - 4.0 * dc * dc + 2.0 * gm * k + 8.0 * g2 + k * k;
    let den2 = x * (y - 2.0 * I * da * zz);
    let den1 = 8.0 * g2 - da * (4.0 * dc + 2.0 * I * k) - 2.0 * I * gm * dc + gm * k;
    if den2 == ZERO || den1 == ZERO {
        return Err(Error::ZeroDenominator("detuned two-atom amplitudes"));
    }
    let sum = 2.0 * da + dc;
    let c_gg2 = 16.0 * SQRT2 * g2 * eta * eta * (-2.0 * I * sum + 2.0 * gm + k) / den2;
    let c_gg1 = -8.0 * re(p.g) * eta / den1;
    let c_plus1 = 8.0 * SQRT2 * re(p.g) * eta * eta * (k - 2.0 * I * dc) * (2.0 * sum + I * (2.0 * gm + k)) / den2;
    Ok(DetunedAmplitudes { c_gg2, c_gg1, c_plus1 })
}

/// Large-detuning g²(0) estimate together with whether the parameters are
/// inside its regime of validity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetunedG2 {
    pub value: f64,
    /// False when `max(γ, κ) / min(|Δ_a|, |Δ_c|)` exceeds
    /// [`DETUNED_VALIDITY_RATIO`]; the value is still returned.
    pub valid: bool,
}

pub fn g2_approx_detuned(p: &SystemParams) -> Result<DetunedG2> {
    p.validate()?;
    let (g2, k, gm, da, dc) = (p.g * p.g, p.kappa, p.gamma, p.delta_a, p.delta_c);
    let d1 = -8.0 * da * dc * (gm + k) - 4.0 * k * da * da + gm * gm * k - 4.0 * gm * dc * dc
        + gm * k * k
        + 8.0 * gm * g2
        + 4.0 * g2 * k;
    let d2 = 8.0 * da * da * dc
        - 2.0 * da * (-4.0 * dc * dc + 2.0 * gm * k + 8.0 * g2 + k * k)
        - 2.0 * dc * (gm * gm + 2.0 * gm * k + 4.0 * g2);
    let d = d1 * d1 + d2 * d2;
    if d == 0.0 {
        return Err(Error::ZeroDenominator("detuned g2 approximation"));
    }
    let value = (2.0 * da + dc).powi(2) * (8.0 * g2 - 4.0 * da * dc).powi(2) / d;
    let smallest = da.abs().min(dc.abs());
    let valid = smallest > 0.0 && gm.max(k) / smallest <= DETUNED_VALIDITY_RATIO;
    Ok(DetunedG2 { value, valid })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlockadeConditions {
    /// `Δ_a = 2g²/Δ_c`
    pub conventional_delta_a: f64,
    /// `Δ_a = −Δ_c/2`
    pub interference_delta_a: f64,
}

pub fn blockade_conditions(g: f64, delta_c: f64) -> Result<BlockadeConditions> {
    if delta_c == 0.0 {
        return Err(Error::UndefinedCondition);
    }
    Ok(BlockadeConditions {
        conventional_delta_a: 2.0 * g * g / delta_c,
        interference_delta_a: -delta_c / 2.0,
    })
}

/// `|1/(ω_a + ω_c − 2ω_p) + 1/(ω_a − ω_p)|²`, the relative weight of the
/// two two-photon pathways into `|+,1⟩`.
pub fn golden_rule_weight(omega_a: f64, omega_c: f64, omega_p: f64) -> Result<f64> {
    let two_photon = omega_a + omega_c - 2.0 * omega_p;
    let one_photon = omega_a - omega_p;
    if two_photon == 0.0 || one_photon == 0.0 {
        return Err(Error::ZeroDenominator("golden-rule weight (pole)"));
    }
    Ok((1.0 / two_photon + 1.0 / one_photon).powi(2))
}
