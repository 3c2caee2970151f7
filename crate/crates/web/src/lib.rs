//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Results come back as flat `Float64Array`s, one fixed-width record per
//! point, with `NaN` standing in for gaps.

use blockade::analytics::{blockade_conditions, optimal_g};
use blockade::model::{recommended_n_max, Drive, SystemParams};
use blockade::sweep::{evaluate_point, Axis, Output, ParamName};
use wasm_bindgen::prelude::*;

/// Browser page sizes; the sweeps run on the main thread.
const MAX_POINTS: usize = 400;

fn axis(param: ParamName, start: f64, stop: f64, points: usize) -> blockade::Result<Vec<f64>> {
    if points > MAX_POINTS {
        return Err(blockade::Error::InvalidParams(format!("at most {MAX_POINTS} points")));
    }
    Ok(Axis::linspace(param, start, stop, points)?.points().to_vec())
}

fn records(points: &[(f64, SystemParams)], outputs: &[Output]) -> Vec<f64> {
    let mut flat = Vec::with_capacity(points.len() * (outputs.len() + 1));
    for (x, p) in points {
        flat.push(*x);
        let (cells, _) = evaluate_point(p, outputs);
        flat.extend(cells.iter().map(|c| c.value().unwrap_or(f64::NAN)));
    }
    flat
}

/// Records of `(g, g2, g2 from amplitudes)` on zero detuning.
pub fn coupling_records(n_atoms: usize, atom_drive: bool, gamma: f64, eta: f64, g_min: f64, g_max: f64, points: usize) -> blockade::Result<Vec<f64>> {
    let base = SystemParams {
        n_atoms,
        drive: if atom_drive { Drive::Atom } else { Drive::Cavity },
        gamma,
        eta,
        n_max: recommended_n_max(eta),
        ..SystemParams::default()
    };
    base.validate()?;
    let pts: Vec<(f64, SystemParams)> = axis(ParamName::G, g_min, g_max, points)?
        .into_iter()
        .map(|g| (g, SystemParams { g, ..base }))
        .collect();
    Ok(records(&pts, &[Output::G2Zero, Output::G2Analytic]))
}

/// Records of `(Δ_a, g2, |+,1⟩ population, large-detuning g2)` for two
/// directly driven atoms.
pub fn detuning_records(g: f64, delta_c: f64, gamma: f64, eta: f64, da_min: f64, da_max: f64, points: usize) -> blockade::Result<Vec<f64>> {
    let base = SystemParams {
        n_atoms: 2,
        drive: Drive::Atom,
        g,
        gamma,
        eta,
        delta_c,
        n_max: recommended_n_max(eta),
        ..SystemParams::default()
    };
    base.validate()?;
    let pts: Vec<(f64, SystemParams)> = axis(ParamName::DeltaA, da_min, da_max, points)?
        .into_iter()
        .map(|da| (da, SystemParams { delta_a: da, ..base }))
        .collect();
    let pop = "pop:+,1".parse()?;
    Ok(records(&pts, &[Output::G2Zero, pop, Output::G2LargeDetuning]))
}

/// `[conventional Δ_a, interference Δ_a, one-atom optimal g]`.
pub fn condition_summary(g: f64, delta_c: f64, gamma: f64, eta: f64) -> blockade::Result<Vec<f64>> {
    let c = blockade_conditions(g, delta_c)?;
    Ok(vec![c.conventional_delta_a, c.interference_delta_a, optimal_g(gamma, 1.0, eta)])
}

fn js(e: blockade::Error) -> JsError {
    JsError::new(&e.to_string())
}

#[wasm_bindgen]
pub fn coupling_scan(n_atoms: usize, atom_drive: bool, gamma: f64, eta: f64, g_min: f64, g_max: f64, points: usize) -> Result<Vec<f64>, JsError> {
    coupling_records(n_atoms, atom_drive, gamma, eta, g_min, g_max, points).map_err(js)
}

#[wasm_bindgen]
pub fn detuning_scan(g: f64, delta_c: f64, gamma: f64, eta: f64, da_min: f64, da_max: f64, points: usize) -> Result<Vec<f64>, JsError> {
    detuning_records(g, delta_c, gamma, eta, da_min, da_max, points).map_err(js)
}

#[wasm_bindgen]
pub fn blockade_lines(g: f64, delta_c: f64, gamma: f64, eta: f64) -> Result<Vec<f64>, JsError> {
    condition_summary(g, delta_c, gamma, eta).map_err(js)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coupling_records_have_three_fields() {
        let r = coupling_records(1, false, 1.0, 0.01, 0.5, 1.0, 6).unwrap();
        assert_eq!(r.len(), 18);
        assert_eq!((r[0], r[15]), (0.5, 1.0));
        assert!(r.chunks(3).all(|c| c[1] > 0.0 && c[2] > 0.0));
    }

    #[test]
    fn detuning_records_mark_gaps_with_nan() {
        let r = detuning_records(0.5, 20.0, 1.0, 0.01, -1.0, 1.0, 3).unwrap();
        assert_eq!(r.len(), 12);
        // |Δ_a| ≤ 1 is far outside the large-detuning regime.
        assert!(r.chunks(4).all(|c| c[3].is_nan() && c[1].is_finite()));
    }

    #[test]
    fn summary_and_limits() {
        let s = condition_summary(5.0, 20.0, 1.0, 0.01).unwrap();
        assert_eq!(&s[..2], &[2.5, -10.0]);
        assert!((s[2] - 0.70717).abs() < 1e-4);
        assert!(condition_summary(1.0, 0.0, 1.0, 0.01).is_err());
        assert!(coupling_records(1, false, 1.0, 0.01, 0.1, 2.0, MAX_POINTS + 1).is_err());
        assert!(coupling_records(3, false, 1.0, 0.01, 0.1, 2.0, 5).is_err());
    }
}
