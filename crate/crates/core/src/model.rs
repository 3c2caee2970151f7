//! Driven Jaynes–Cummings / Tavis–Cummings models in the frame rotating at
//! the drive frequency. All frequencies share one unit; the sweep layer
//! normalises them so that κ = 1.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert::{atom_lowering, embed, fock_annihilation, Operator, Slot, SpaceSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Drive {
    /// `η(a + a†)`
    Cavity,
    /// `η Σ_j (σ_j + σ_j†)`
    Atom,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemParams {
    pub n_atoms: usize,
    /// Atom–cavity coupling.
    pub g: f64,
    /// Cavity energy decay rate.
    pub kappa: f64,
    /// Atomic energy decay rate (per atom).
    pub gamma: f64,
    /// Drive strength.
    pub eta: f64,
    /// `ω_d − ω_a`
    pub delta_a: f64,
    /// `ω_d − ω_c`
    pub delta_c: f64,
    pub drive: Drive,
    /// Highest retained Fock level.
    pub n_max: usize,
    /// Phase φ of a generalised drive `η e^{iφ} X† + h.c.`; zero everywhere
    /// except in phase-invariance checks.
    #[serde(default)]
    pub drive_phase: f64,
}

impl Default for SystemParams {
    fn default() -> Self {
        Self {
            n_atoms: 1,
            g: 0.0,
            kappa: 1.0,
            gamma: 1.0,
            eta: 0.01,
            delta_a: 0.0,
            delta_c: 0.0,
            drive: Drive::Cavity,
            n_max: 5,
            drive_phase: 0.0,
        }
    }
}

/// Fock truncation used when none is given: 5 for weak drive, 10 otherwise.
pub fn recommended_n_max(eta_over_kappa: f64) -> usize {
    if eta_over_kappa <= 0.05 {
        5
    } else {
        10
    }
}

impl SystemParams {
    pub fn validate(&self) -> Result<()> {
        let named = [
            ("g", self.g),
            ("kappa", self.kappa),
            ("gamma", self.gamma),
            ("eta", self.eta),
            ("delta_a", self.delta_a),
            ("delta_c", self.delta_c),
            ("drive_phase", self.drive_phase),
        ];
        if let Some((name, _)) = named.iter().find(|(_, v)| !v.is_finite()) {
            return Err(Error::InvalidParams(format!("{name} is not finite")));
        }
        if self.kappa <= 0.0 {
            return Err(Error::InvalidParams("kappa must be positive".into()));
        }
        for (name, v) in [("gamma", self.gamma), ("eta", self.eta), ("g", self.g)] {
            if v < 0.0 {
                return Err(Error::InvalidParams(format!("{name} must be non-negative")));
            }
        }
        SpaceSpec::new(self.n_atoms, self.n_max)?;
        Ok(())
    }

    pub fn space(&self) -> Result<SpaceSpec> {
        SpaceSpec::new(self.n_atoms, self.n_max)
    }

    /// The same physics with every frequency divided by κ.
    pub fn in_kappa_units(&self) -> Self {
        let k = self.kappa;
        Self {
            g: self.g / k,
            kappa: 1.0,
            gamma: self.gamma / k,
            eta: self.eta / k,
            delta_a: self.delta_a / k,
            delta_c: self.delta_c / k,
            ..*self
        }
    }
}

/// Elementary operators lifted to the composite space.
#[derive(Debug, Clone)]
pub struct Ladder {
    pub space: SpaceSpec,
    pub a: Operator,
    /// `σ_j` for each atom, in order.
    pub sigma: Vec<Operator>,
}

impl Ladder {
    pub fn new(space: SpaceSpec) -> Result<Self> {
        let a = embed(&fock_annihilation(space.n_max())?, Slot::Cavity, &space)?;
        let sigma = (1..=space.n_atoms())
            .map(|j| embed(&atom_lowering(), Slot::Atom(j), &space))
            .collect::<Result<_>>()?;
        Ok(Self { space, a, sigma })
    }

    pub fn number(&self) -> Operator {
        &self.a.adjoint() * &self.a
    }

    /// `a†a + Σ_j σ_j†σ_j`
    pub fn total_excitation(&self) -> Operator {
        self.sigma
            .iter()
            .fold(self.number(), |acc, s| &acc + &(&s.adjoint() * s))
    }
}

/// System Hamiltonian (ħ = 1).
///
/// Assembled as `K + K†` so the result is Hermitian entrywise, bit for bit.
pub fn build_hamiltonian(params: &SystemParams) -> Result<Operator> {
    params.validate()?;
    let ops = Ladder::new(params.space()?)?;
    let re = |x: f64| C64::new(x, 0.0);
    let adag = ops.a.adjoint();

    let mut half = ops.number().scale(re(-0.5 * params.delta_c));
    for s in &ops.sigma {
        let sd = s.adjoint();
        half = &half + &(&sd * s).scale(re(-0.5 * params.delta_a));
        half = &half + &(s * &adag).scale(re(params.g));
    }
    let drive = C64::from_polar(params.eta, params.drive_phase);
    match params.drive {
        Drive::Cavity => half = &half + &adag.scale(drive),
        Drive::Atom => {
            for s in &ops.sigma {
                half = &half + &s.adjoint().scale(drive);
            }
        }
    }
    Ok(&half + &half.adjoint())
}

/// A dissipation channel `(rate/2)(2cρc† − c†cρ − ρc†c)`.
#[derive(Debug, Clone)]
pub struct Channel {
    pub op: Operator,
    pub rate: f64,
}

/// Cavity decay followed by one decay channel per atom.
pub fn collapse_operators(params: &SystemParams) -> Result<Vec<Channel>> {
    params.validate()?;
    let ops = Ladder::new(params.space()?)?;
    let mut channels = vec![Channel {
        op: ops.a,
        rate: params.kappa,
    }];
    channels.extend(ops.sigma.into_iter().map(|op| Channel {
        op,
        rate: params.gamma,
    }));
    Ok(channels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{dicke_vectors, state_vector, StateLabel};

    fn two_atom(drive: Drive) -> SystemParams {
        SystemParams {
            n_atoms: 2,
            g: 0.8,
            eta: 0.3,
            delta_a: -1.3,
            delta_c: 2.1,
            drive,
            n_max: 3,
            ..Default::default()
        }
    }

    #[test]
    fn one_atom_dimension_and_hermiticity() {
        let params = SystemParams {
            g: 0.7,
            delta_a: 0.4,
            delta_c: -0.9,
            n_max: 3,
            ..Default::default()
        };
        let h = build_hamiltonian(&params).unwrap();
        assert_eq!(h.dim(), 8);
        assert!(h.is_hermitian());
        for drive in [Drive::Cavity, Drive::Atom] {
            let mut p = two_atom(drive);
            p.drive_phase = 1.1;
            assert!(build_hamiltonian(&p).unwrap().is_hermitian());
        }
    }

    #[test]
    fn decoupled_cavity_limit() {
        let params = SystemParams {
            g: 0.0,
            eta: 0.25,
            n_max: 3,
            ..Default::default()
        };
        let h = build_hamiltonian(&params).unwrap();
        let ops = Ladder::new(params.space().unwrap()).unwrap();
        let expected = (&ops.a + &ops.a.adjoint()).scale(C64::new(0.25, 0.0));
        assert!(h.max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn collective_atom_drive_matrix_element() {
        let params = SystemParams {
            g: 0.0,
            delta_a: 0.0,
            delta_c: 0.0,
            ..two_atom(Drive::Atom)
        };
        let spec = params.space().unwrap();
        let h = build_hamiltonian(&params).unwrap();
        let gg0 = state_vector(&spec, &"gg,0".parse::<StateLabel>().unwrap()).unwrap();
        let plus0 = state_vector(&spec, &"+,0".parse::<StateLabel>().unwrap()).unwrap();
        let hv = h.apply(&gg0).unwrap();
        let elem: C64 = plus0.iter().zip(&hv).map(|(x, y)| x.conj() * y).sum();
        assert!((elem - C64::new(2f64.sqrt() * params.eta, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn excitation_number_conserved_without_drive() {
        for drive in [Drive::Cavity, Drive::Atom] {
            for n_atoms in [1, 2] {
                let params = SystemParams {
                    n_atoms,
                    eta: 0.0,
                    ..two_atom(drive)
                };
                let h = build_hamiltonian(&params).unwrap();
                let n = Ladder::new(params.space().unwrap()).unwrap().total_excitation();
                let c = h.commutator(&n);
                assert!(c.max_abs_diff(&Operator::zeros(h.dim())) < 1e-13);
            }
        }
    }

    #[test]
    fn antisymmetric_states_are_dark() {
        let params = SystemParams {
            eta: 0.0,
            ..two_atom(Drive::Cavity)
        };
        let spec = params.space().unwrap();
        let h = build_hamiltonian(&params).unwrap();
        for pair in dicke_vectors(&spec).unwrap() {
            let hv = h.apply(&pair.minus).unwrap();
            let energy: C64 = pair.minus.iter().zip(&hv).map(|(x, y)| x.conj() * y).sum();
            for (x, y) in hv.iter().zip(&pair.minus) {
                assert!((x - energy * y).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn channel_counts_and_rates() {
        let one = collapse_operators(&SystemParams::default()).unwrap();
        assert_eq!(one.len(), 2);
        let p = SystemParams {
            gamma: 0.0,
            ..two_atom(Drive::Atom)
        };
        let two = collapse_operators(&p).unwrap();
        assert_eq!(two.len(), 3);
        assert_eq!(two[0].rate, 1.0);
        assert!(two[1..].iter().all(|c| c.rate == 0.0));
    }

    #[test]
    fn invalid_params_rejected() {
        let bad = [
            SystemParams { kappa: 0.0, ..Default::default() },
            SystemParams { gamma: -1.0, ..Default::default() },
            SystemParams { eta: f64::NAN, ..Default::default() },
            SystemParams { n_atoms: 3, ..Default::default() },
            SystemParams { n_max: 0, ..Default::default() },
        ];
        for p in bad {
            assert!(build_hamiltonian(&p).is_err(), "{p:?}");
        }
    }

    #[test]
    fn kappa_units() {
        let p = SystemParams {
            kappa: 2.8,
            gamma: 3.0,
            eta: 1.4,
            g: 5.6,
            ..Default::default()
        }
        .in_kappa_units();
        assert_eq!(p.kappa, 1.0);
        assert!((p.eta - 0.5).abs() < 1e-15);
        assert!((p.g - 2.0).abs() < 1e-15);
    }
}
