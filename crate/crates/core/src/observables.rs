//! Photon statistics and state populations of a density matrix.

use std::collections::BTreeMap;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::hilbert::{state_vector, Operator, SpaceSpec, StateLabel, ZERO};
use crate::model::{Ladder, SystemParams};
use crate::steady::DensityMatrix;

/// Below this mean photon number g²(0) is reported as undefined.
pub const G2_PHOTON_THRESHOLD: f64 = 1e-12;

/// `Tr(op·ρ)`
pub fn expectation(op: &Operator, rho: &DensityMatrix) -> Result<C64> {
    op.check_dim(rho.dim())?;
    Ok(op
        .nonzeros()
        .into_iter()
        .fold(ZERO, |acc, (i, j, v)| acc + v * rho.get(j, i)))
}

fn ladder_for(rho: &DensityMatrix, space: &SpaceSpec) -> Result<Ladder> {
    if space.dim() != rho.dim() {
        return Err(Error::DimensionMismatch {
            expected: space.dim(),
            found: rho.dim(),
        });
    }
    Ladder::new(*space)
}

/// `⟨a†a⟩`
pub fn mean_photons(rho: &DensityMatrix, space: &SpaceSpec) -> Result<f64> {
    let ops = ladder_for(rho, space)?;
    Ok(expectation(&ops.number(), rho)?.re)
}

/// `⟨a†a†aa⟩ / ⟨a†a⟩²`
pub fn g2_zero(rho: &DensityMatrix, space: &SpaceSpec) -> Result<f64> {
    let ops = ladder_for(rho, space)?;
    let n = expectation(&ops.number(), rho)?.re;
    if !(n > G2_PHOTON_THRESHOLD) {
        return Err(Error::UndefinedStatistics { mean_photons: n });
    }
    let adag = ops.a.adjoint();
    let pairs = &(&adag * &adag) * &(&ops.a * &ops.a);
    let num = expectation(&pairs, rho)?.re;
    Ok(num.max(0.0) / (n * n))
}

/// Output photon flux `κ⟨a†a⟩`.
pub fn counting_rate(rho: &DensityMatrix, params: &SystemParams) -> Result<f64> {
    Ok(params.kappa * mean_photons(rho, &params.space()?)?)
}

/// `⟨ψ|ρ|ψ⟩` for a labelled product or Dicke basis state.
pub fn dicke_population(rho: &DensityMatrix, space: &SpaceSpec, label: &StateLabel) -> Result<f64> {
    ladder_for(rho, space)?;
    let psi = state_vector(space, label)?;
    let d = rho.dim();
    let mut acc = ZERO;
    for j in 0..d {
        if psi[j] == ZERO {
            continue;
        }
        for i in 0..d {
            acc += psi[i].conj() * rho.get(i, j) * psi[j];
        }
    }
    Ok(acc.re)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ObservableReport {
    /// `None` when the photon number is below [`G2_PHOTON_THRESHOLD`].
    pub g2_zero: Option<f64>,
    pub mean_photons: f64,
    pub counting_rate: f64,
    pub populations: BTreeMap<String, f64>,
}

pub fn report(rho: &DensityMatrix, params: &SystemParams, labels: &[StateLabel]) -> Result<ObservableReport> {
    let space = params.space()?;
    let mean = mean_photons(rho, &space)?;
    let g2 = match g2_zero(rho, &space) {
        Ok(v) => Some(v),
        Err(Error::UndefinedStatistics { .. }) => None,
        Err(e) => return Err(e),
    };
    let populations = labels
        .iter()
        .map(|l| Ok((l.to_string(), dicke_population(rho, &space, l)?)))
        .collect::<Result<_>>()?;
    Ok(ObservableReport {
        g2_zero: g2,
        mean_photons: mean,
        counting_rate: params.kappa * mean,
        populations,
    })
}
