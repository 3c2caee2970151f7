//! Parameter sweeps over one or two axes.

use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use crate::analytics::{
    amplitude_steady_one_atom_cavity, amplitude_steady_two_atom_driven, g2_approx_detuned, SolveOrder,
};
use crate::error::{Error, Result};
use crate::hilbert::{AtomicLabel, StateLabel};
use crate::model::{build_hamiltonian, collapse_operators, Drive, SystemParams};
use crate::observables::{dicke_population, g2_zero, mean_photons};
use crate::preset::Preset;
use crate::steady::{liouvillian, steady_state, DensityMatrix, StateDiagnostics};

/// Environment variable overriding the number of sweep workers.
pub const THREADS_ENV: &str = "BLOCKADE_THREADS";

/// Weak-drive amplitude estimates are only reported up to this `η/κ`.
pub const PERTURBATIVE_ETA_MAX: f64 = 0.05;

/// A sweepable parameter. Frequencies are in units of κ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ParamName {
    G,
    Gamma,
    Eta,
    DeltaA,
    DeltaC,
    /// `Δ_a = Δ`, `Δ_c = −2Δ`
    Delta,
    NAtoms,
    NMax,
}

impl ParamName {
    pub const ALL: [ParamName; 8] = [
        ParamName::G,
        ParamName::Gamma,
        ParamName::Eta,
        ParamName::DeltaA,
        ParamName::DeltaC,
        ParamName::Delta,
        ParamName::NAtoms,
        ParamName::NMax,
    ];

    pub fn key(self) -> &'static str {
        match self {
            ParamName::G => "g",
            ParamName::Gamma => "gamma",
            ParamName::Eta => "eta",
            ParamName::DeltaA => "delta_a",
            ParamName::DeltaC => "delta_c",
            ParamName::Delta => "Delta",
            ParamName::NAtoms => "n_atoms",
            ParamName::NMax => "n_max",
        }
    }

    /// CSV column header, with its unit.
    pub fn column(self) -> &'static str {
        match self {
            ParamName::G => "g_over_kappa",
            ParamName::Gamma => "gamma_over_kappa",
            ParamName::Eta => "eta_over_kappa",
            ParamName::DeltaA => "delta_a_over_kappa",
            ParamName::DeltaC => "delta_c_over_kappa",
            ParamName::Delta => "delta_over_kappa",
            ParamName::NAtoms => "n_atoms",
            ParamName::NMax => "n_max",
        }
    }

    pub fn is_integer(self) -> bool {
        matches!(self, ParamName::NAtoms | ParamName::NMax)
    }

    pub fn is_frequency(self) -> bool {
        !self.is_integer()
    }

    pub fn apply(self, params: &mut SystemParams, value: f64) -> Result<()> {
        let as_count = || {
            if value >= 0.0 && value.fract() == 0.0 && value <= u32::MAX as f64 {
                Ok(value as usize)
            } else {
                Err(Error::Config(format!("{} must be a non-negative integer, got {value}", self.key())))
            }
        };
        match self {
            ParamName::G => params.g = value,
            ParamName::Gamma => params.gamma = value,
            ParamName::Eta => params.eta = value,
            ParamName::DeltaA => params.delta_a = value,
            ParamName::DeltaC => params.delta_c = value,
            ParamName::Delta => {
                params.delta_a = value;
                params.delta_c = -2.0 * value;
            }
            ParamName::NAtoms => params.n_atoms = as_count()?,
            ParamName::NMax => params.n_max = as_count()?,
        }
        Ok(())
    }
}

impl fmt::Display for ParamName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

impl FromStr for ParamName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|p| p.key() == s)
            .ok_or_else(|| Error::Config(format!("unknown sweep parameter {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum AxisRange {
    Linspace { start: f64, stop: f64, count: usize },
    Values(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    pub param: ParamName,
    pub range: AxisRange,
    values: Vec<f64>,
}

impl Axis {
    /// `count` evenly spaced points including both ends.
    pub fn linspace(param: ParamName, start: f64, stop: f64, count: usize) -> Result<Self> {
        if count < 2 {
            return Err(Error::Config(format!("axis {param} needs at least 2 points")));
        }
        if !(start.is_finite() && stop.is_finite()) {
            return Err(Error::Config(format!("axis {param} bounds must be finite")));
        }
        let step = (stop - start) / (count - 1) as f64;
        let mut values: Vec<f64> = (0..count).map(|i| start + step * i as f64).collect();
        values[count - 1] = stop;
        Ok(Self {
            param,
            range: AxisRange::Linspace { start, stop, count },
            values,
        })
    }

    /// An explicit list of values, swept in the given order.
    pub fn values(param: ParamName, values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::Config(format!("axis {param} needs at least 2 points")));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Config(format!("axis {param} values must be finite")));
        }
        Ok(Self {
            param,
            range: AxisRange::Values(values.clone()),
            values,
        })
    }

    pub fn points(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Spacing of a linear axis; `None` for explicit lists.
    pub fn step(&self) -> Option<f64> {
        match self.range {
            AxisRange::Linspace { start, stop, count } => Some((stop - start) / (count - 1) as f64),
            AxisRange::Values(_) => None,
        }
    }

    /// Linear axes are rebuilt from scaled endpoints so that a sweep echoed
    /// as start/stop/count reproduces identical points.
    pub(crate) fn scaled(&self, factor: f64) -> Self {
        match &self.range {
            AxisRange::Linspace { start, stop, count } => {
                Self::linspace(self.param, start * factor, stop * factor, *count).expect("scaling keeps the axis valid")
            }
            AxisRange::Values(v) => {
                Self::values(self.param, v.iter().map(|x| x * factor).collect()).expect("scaling keeps the axis valid")
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Output {
    /// Master-equation g²(0).
    G2Zero,
    /// Weak-drive amplitude estimate `2|C_2|²/|C_1|⁴`, where a solvable
    /// amplitude system exists for the configuration.
    G2Analytic,
    /// Large-detuning closed form for two atoms, inside its validity regime.
    G2LargeDetuning,
    MeanPhotons,
    CountingRate,
    Population(StateLabel),
}

impl Output {
    pub fn key(&self) -> String {
        match self {
            Output::G2Zero => "g2_zero".into(),
            Output::G2Analytic => "g2_analytic".into(),
            Output::G2LargeDetuning => "g2_large_detuning".into(),
            Output::MeanPhotons => "mean_photons".into(),
            Output::CountingRate => "counting_rate".into(),
            Output::Population(l) => format!("pop:{l}"),
        }
    }

    pub fn column(&self) -> String {
        match self {
            Output::CountingRate => "counting_rate_over_kappa".into(),
            Output::Population(l) => {
                let atoms = match l.atoms {
                    AtomicLabel::Plus => "plus".to_string(),
                    AtomicLabel::Minus => "minus".to_string(),
                    _ => l.to_string().split(',').next().unwrap_or_default().to_string(),
                };
                format!("pop_{atoms}_{}", l.n)
            }
            other => other.key(),
        }
    }

    fn needs_state(&self) -> bool {
        !matches!(self, Output::G2Analytic | Output::G2LargeDetuning)
    }
}

impl FromStr for Output {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "g2_zero" => Output::G2Zero,
            "g2_analytic" => Output::G2Analytic,
            "g2_large_detuning" => Output::G2LargeDetuning,
            "mean_photons" => Output::MeanPhotons,
            "counting_rate" => Output::CountingRate,
            _ => match s.strip_prefix("pop:") {
                Some(label) => Output::Population(label.parse()?),
                None => return Err(Error::Config(format!("unknown output {s:?}"))),
            },
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    /// Fixed parameters, with κ = 1.
    pub base: SystemParams,
    pub axis1: Axis,
    pub axis2: Option<Axis>,
    pub outputs: Vec<Output>,
    pub preset: Option<Preset>,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.base.kappa != 1.0 {
            return Err(Error::Config("sweep parameters must be normalised to kappa = 1".into()));
        }
        if self.outputs.is_empty() {
            return Err(Error::Config("no outputs requested".into()));
        }
        if let Some(a2) = &self.axis2 {
            let clash = |a: ParamName, b: ParamName| {
                a == b
                    || matches!(
                        (a, b),
                        (ParamName::Delta, ParamName::DeltaA | ParamName::DeltaC)
                            | (ParamName::DeltaA | ParamName::DeltaC, ParamName::Delta)
                    )
            };
            if clash(self.axis1.param, a2.param) {
                return Err(Error::Config(format!(
                    "axes {} and {} set the same parameter",
                    self.axis1.param, a2.param
                )));
            }
        }
        Ok(())
    }

    /// Re-expresses a sweep given in arbitrary frequency units in units of κ.
    pub fn normalised(mut self) -> Self {
        let k = self.base.kappa;
        self.base = self.base.in_kappa_units();
        let scale = |axis: &Axis| {
            if axis.param.is_frequency() {
                axis.scaled(1.0 / k)
            } else {
                axis.clone()
            }
        };
        self.axis1 = scale(&self.axis1);
        self.axis2 = self.axis2.as_ref().map(scale);
        self
    }

    /// Grid points in axis1-major order.
    pub fn grid(&self) -> Vec<Vec<f64>> {
        let mut out = Vec::new();
        for &x in self.axis1.points() {
            match &self.axis2 {
                None => out.push(vec![x]),
                Some(a2) => out.extend(a2.points().iter().map(|&y| vec![x, y])),
            }
        }
        out
    }

    pub fn params_at(&self, point: &[f64]) -> Result<SystemParams> {
        let mut p = self.base;
        self.axis1.param.apply(&mut p, point[0])?;
        if let (Some(a2), Some(&y)) = (&self.axis2, point.get(1)) {
            a2.param.apply(&mut p, y)?;
        }
        Ok(p)
    }

    pub fn columns(&self) -> Vec<String> {
        let mut cols = vec![self.axis1.param.column().to_string()];
        if let Some(a2) = &self.axis2 {
            cols.push(a2.param.column().to_string());
        }
        cols.extend(self.outputs.iter().map(Output::column));
        cols
    }
}

/// Why a cell holds no value.
#[derive(Debug, Clone, PartialEq)]
pub enum Gap {
    /// g²(0) with (numerically) no photons.
    Undefined,
    /// The quantity is not defined for this configuration.
    NotApplicable,
    /// The point could not be solved.
    Failed(Error),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Value(f64),
    Gap(Gap),
}

impl Cell {
    pub fn value(&self) -> Option<f64> {
        match self {
            Cell::Value(v) => Some(*v),
            Cell::Gap(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub point: Vec<f64>,
    pub cells: Vec<Cell>,
    /// Invariants of the solved steady state, when one was needed and found.
    pub diagnostics: Option<StateDiagnostics>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub spec: SweepSpec,
    pub rows: Vec<Row>,
}

impl SweepResult {
    pub fn columns(&self) -> Vec<String> {
        self.spec.columns()
    }

    /// Values of one output column, `None` where the row holds a gap.
    pub fn output(&self, output: &Output) -> Option<Vec<Option<f64>>> {
        let k = self.spec.outputs.iter().position(|o| o == output)?;
        Some(self.rows.iter().map(|r| r.cells[k].value()).collect())
    }
}

/// Number of sweep workers: `BLOCKADE_THREADS` if set, otherwise the
/// available parallelism.
pub fn worker_count() -> Result<usize> {
    match std::env::var(THREADS_ENV) {
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(n),
            _ => Err(Error::Config(format!("{THREADS_ENV} must be a positive integer, got {s:?}"))),
        },
        Err(_) => Ok(std::thread::available_parallelism().map_or(1, |n| n.get())),
    }
}

pub fn run_sweep(spec: &SweepSpec) -> Result<SweepResult> {
    run_sweep_with(spec, worker_count()?)
}

/// As [`run_sweep`] with an explicit worker count. Rows always come back in
/// grid order whatever the count.
pub fn run_sweep_with(spec: &SweepSpec, workers: usize) -> Result<SweepResult> {
    spec.validate()?;
    let grid = spec.grid();
    let rows = par_map(&grid, workers, |point| evaluate_row(spec, point));
    Ok(SweepResult {
        spec: spec.clone(),
        rows,
    })
}

/// Maps `f` over `items` on up to `workers` threads, preserving order.
pub fn par_map<T: Sync, R: Send>(items: &[T], workers: usize, f: impl Fn(&T) -> R + Sync) -> Vec<R> {
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<R>>> = Mutex::new((0..items.len()).map(|_| None).collect());
    let workers = workers.clamp(1, items.len().max(1));
    std::thread::scope(|s| {
        for _ in 0..workers {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(item) = items.get(i) else { break };
                let out = f(item);
                slots.lock().expect("no worker panics while holding the lock")[i] = Some(out);
            });
        }
    });
    slots
        .into_inner()
        .expect("workers finished")
        .into_iter()
        .map(|r| r.expect("every item evaluated"))
        .collect()
}

fn evaluate_row(spec: &SweepSpec, point: &[f64]) -> Row {
    let (cells, diagnostics) = match spec.params_at(point) {
        Ok(p) => evaluate_point(&p, &spec.outputs),
        Err(e) => (vec![Cell::Gap(Gap::Failed(e)); spec.outputs.len()], None),
    };
    Row {
        point: point.to_vec(),
        cells,
        diagnostics,
    }
}

/// Solves one parameter point and extracts the requested outputs. Failures
/// end up in the cells, never as an error.
pub fn evaluate_point(params: &SystemParams, outputs: &[Output]) -> (Vec<Cell>, Option<StateDiagnostics>) {
    let state: Option<Result<DensityMatrix>> = outputs.iter().any(Output::needs_state).then(|| {
        let h = build_hamiltonian(params)?;
        steady_state(&liouvillian(&h, &collapse_operators(params)?)?)
    });
    let diagnostics = match &state {
        Some(Ok(rho)) => Some(rho.diagnostics()),
        _ => None,
    };
    let cells = outputs
        .iter()
        .map(|out| {
            let value = match (out, &state) {
                (Output::G2Analytic, _) => analytic_g2(params),
                (Output::G2LargeDetuning, _) => large_detuning_g2(params),
                (_, Some(Err(e))) => Err(e.clone()),
                (_, None) => unreachable!("state is solved whenever an output needs it"),
                (_, Some(Ok(rho))) => state_output(out, rho, params),
            };
            match value {
                Ok(Some(v)) => Cell::Value(v),
                Ok(None) => Cell::Gap(Gap::NotApplicable),
                Err(Error::UndefinedStatistics { .. }) => Cell::Gap(Gap::Undefined),
                Err(e) => Cell::Gap(Gap::Failed(e)),
            }
        })
        .collect();
    (cells, diagnostics)
}

fn state_output(out: &Output, rho: &DensityMatrix, p: &SystemParams) -> Result<Option<f64>> {
    let space = p.space()?;
    Ok(Some(match out {
        Output::G2Zero => g2_zero(rho, &space)?,
        Output::MeanPhotons => mean_photons(rho, &space)?,
        Output::CountingRate => p.kappa * mean_photons(rho, &space)?,
        Output::Population(label) => match dicke_population(rho, &space, label) {
            Ok(v) => v,
            Err(Error::UnknownLabel(_)) => return Ok(None),
            Err(e) => return Err(e),
        },
        Output::G2Analytic | Output::G2LargeDetuning => unreachable!("handled without a state"),
    }))
}

/// Weak-drive amplitude estimate where an amplitude system exists: one atom
/// driven through the cavity on resonance, or two atoms driven directly.
pub fn analytic_g2(p: &SystemParams) -> Result<Option<f64>> {
    if p.eta > PERTURBATIVE_ETA_MAX * p.kappa {
        return Ok(None);
    }
    let amps = match (p.n_atoms, p.drive) {
        (1, Drive::Cavity) if p.delta_a == 0.0 && p.delta_c == 0.0 => {
            amplitude_steady_one_atom_cavity(p, SolveOrder::Full)?
        }
        (2, Drive::Atom) => amplitude_steady_two_atom_driven(p, SolveOrder::Full)?,
        _ => return Ok(None),
    };
    amps.perturbative_g2().map(Some)
}

/// Large-detuning two-atom closed form, only inside its validity regime.
pub fn large_detuning_g2(p: &SystemParams) -> Result<Option<f64>> {
    if p.n_atoms != 2 || p.drive != Drive::Atom {
        return Ok(None);
    }
    let approx = g2_approx_detuned(p)?;
    Ok(approx.valid.then_some(approx.value))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_spec() -> SweepSpec {
        SweepSpec {
            base: SystemParams::default(),
            axis1: Axis::linspace(ParamName::G, 0.2, 1.0, 3).unwrap(),
            axis2: Some(Axis::values(ParamName::Gamma, vec![1.0, 0.5]).unwrap()),
            outputs: vec![Output::G2Zero, Output::G2Analytic, Output::MeanPhotons],
            preset: None,
        }
    }

    #[test]
    fn linspace_endpoints() {
        let a = Axis::linspace(ParamName::G, 0.1, 2.0, 200).unwrap();
        assert_eq!(a.points()[0], 0.1);
        assert_eq!(a.points()[199], 2.0);
        assert!((a.step().unwrap() - 1.9 / 199.0).abs() < 1e-15);
        assert!(Axis::linspace(ParamName::G, 0.0, 1.0, 1).is_err());
        assert!(Axis::values(ParamName::G, vec![1.0]).is_err());
    }

    #[test]
    fn composite_delta() {
        let mut p = SystemParams::default();
        ParamName::Delta.apply(&mut p, 3.0).unwrap();
        assert_eq!((p.delta_a, p.delta_c), (3.0, -6.0));
        assert!(ParamName::NAtoms.apply(&mut p, 1.5).is_err());
    }

    #[test]
    fn names_round_trip() {
        for p in ParamName::ALL {
            assert_eq!(p.key().parse::<ParamName>().unwrap(), p);
        }
        for s in ["g2_zero", "g2_analytic", "g2_large_detuning", "mean_photons", "counting_rate", "pop:+,1", "pop:gg,2"] {
            assert_eq!(s.parse::<Output>().unwrap().key(), s);
        }
        assert_eq!("pop:+,1".parse::<Output>().unwrap().column(), "pop_plus_1");
        assert_eq!("pop:gg,2".parse::<Output>().unwrap().column(), "pop_gg_2");
        assert!("bogus".parse::<Output>().is_err());
    }

    #[test]
    fn grid_order_is_axis1_major() {
        let spec = small_spec();
        let grid = spec.grid();
        assert_eq!(grid.len(), 6);
        assert_eq!(grid[0], vec![0.2, 1.0]);
        assert_eq!(grid[1], vec![0.2, 0.5]);
        assert!((grid[2][0] - 0.6).abs() < 1e-15 && grid[2][1] == 1.0);
    }

    #[test]
    fn worker_count_does_not_change_results() {
        let spec = small_spec();
        let one = run_sweep_with(&spec, 1).unwrap();
        let many = run_sweep_with(&spec, 4).unwrap();
        assert_eq!(one, many);
        assert_eq!(one.columns(), ["g_over_kappa", "gamma_over_kappa", "g2_zero", "g2_analytic", "mean_photons"]);
        for row in &one.rows {
            assert!(row.diagnostics.unwrap().is_valid());
            assert!(row.cells.iter().all(|c| c.value().is_some()));
        }
    }

    #[test]
    fn failures_become_gaps() {
        let spec = SweepSpec {
            base: SystemParams { n_atoms: 2, gamma: 0.0, eta: 0.0, n_max: 2, ..Default::default() },
            axis1: Axis::values(ParamName::G, vec![0.5, 1.0]).unwrap(),
            axis2: None,
            outputs: vec![Output::G2Zero, Output::G2Analytic, "pop:+,0".parse().unwrap()],
            preset: None,
        };
        let res = run_sweep_with(&spec, 1).unwrap();
        for row in &res.rows {
            assert_eq!(row.cells[0], Cell::Gap(Gap::Failed(Error::DegenerateSteadyState)));
            assert_eq!(row.cells[1], Cell::Gap(Gap::NotApplicable));
            assert!(row.diagnostics.is_none());
        }
        let undriven = SweepSpec {
            base: SystemParams { eta: 0.0, ..Default::default() },
            ..spec
        };
        let res = run_sweep_with(&undriven, 1).unwrap();
        assert_eq!(res.rows[0].cells[0], Cell::Gap(Gap::Undefined));
        assert_eq!(res.rows[0].cells[2], Cell::Gap(Gap::NotApplicable));
    }

    #[test]
    fn normalisation_divides_frequencies() {
        let spec = SweepSpec {
            base: SystemParams { kappa: 2.0, gamma: 3.0, eta: 1.0, ..Default::default() },
            axis1: Axis::linspace(ParamName::G, 2.0, 4.0, 3).unwrap(),
            axis2: Some(Axis::values(ParamName::NMax, vec![4.0, 6.0]).unwrap()),
            outputs: vec![Output::G2Zero],
            preset: None,
        }
        .normalised();
        assert_eq!(spec.base.kappa, 1.0);
        assert_eq!(spec.base.gamma, 1.5);
        assert_eq!(spec.axis1.points(), &[1.0, 1.5, 2.0]);
        assert_eq!(spec.axis2.unwrap().points(), &[4.0, 6.0]);
    }
}
