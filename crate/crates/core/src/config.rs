//! Flat TOML sweep configuration.
//!
//! ```toml
//! preset = "fig6a"        # optional starting point
//! kappa = 2.8             # optional; all frequencies are divided by it
//! g = 0.7
//! axis1 = "delta_a"
//! axis1_start = -20.0
//! axis1_stop = 10.0
//! axis1_count = 200
//! axis2 = "gamma"
//! axis2_values = [1.0, 0.5]
//! outputs = ["g2_zero", "mean_photons", "pop:+,1"]
//! ```
//!
//! Keys set explicitly always win over the preset.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{recommended_n_max, Drive, SystemParams};
use crate::preset::Preset;
use crate::sweep::{Axis, AxisRange, Output, ParamName, SweepSpec};

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_atoms: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub drive: Option<Drive>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kappa: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub g: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta_a: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta_c: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_max: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub axis1: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub axis1_start: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub axis1_stop: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub axis1_count: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub axis1_values: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub axis2: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub axis2_start: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub axis2_stop: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub axis2_count: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub axis2_values: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub outputs: Option<Vec<String>>,
}

struct AxisKeys<'a> {
    name: &'a Option<String>,
    start: Option<f64>,
    stop: Option<f64>,
    count: Option<usize>,
    values: &'a Option<Vec<f64>>,
}

impl AxisKeys<'_> {
    fn any(&self) -> bool {
        self.name.is_some() || self.start.is_some() || self.stop.is_some() || self.count.is_some() || self.values.is_some()
    }

    fn build(&self, label: &str) -> Result<Axis> {
        let param: ParamName = self
            .name
            .as_deref()
            .ok_or_else(|| Error::Config(format!("{label} parameter name missing")))?
            .parse()?;
        match (self.values, self.start, self.stop, self.count) {
            (Some(v), None, None, None) => Axis::values(param, v.clone()),
            (None, Some(a), Some(b), Some(n)) => Axis::linspace(param, a, b, n),
            _ => Err(Error::Config(format!(
                "{label} needs either {label}_values or all of {label}_start, {label}_stop, {label}_count"
            ))),
        }
    }
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("flat config always serialises")
    }

    fn axis(&self, which: u8) -> AxisKeys<'_> {
        if which == 1 {
            AxisKeys {
                name: &self.axis1,
                start: self.axis1_start,
                stop: self.axis1_stop,
                count: self.axis1_count,
                values: &self.axis1_values,
            }
        } else {
            AxisKeys {
                name: &self.axis2,
                start: self.axis2_start,
                stop: self.axis2_stop,
                count: self.axis2_count,
                values: &self.axis2_values,
            }
        }
    }

    /// Resolves the file into a κ-normalised sweep.
    pub fn into_spec(&self) -> Result<SweepSpec> {
        let preset: Option<Preset> = self.preset.as_deref().map(str::parse).transpose()?;
        // Preset specs are already κ-normalised, so a user κ rescales only
        // values given in this file.
        let kappa = self.kappa.unwrap_or(1.0);
        if !(kappa > 0.0 && kappa.is_finite()) {
            return Err(Error::Config("kappa must be positive".into()));
        }
        let from_preset = preset.map(Preset::spec);
        let mut base = from_preset.as_ref().map_or_else(SystemParams::default, |s| s.base);
        let freq = |v: Option<f64>, current: f64| v.map_or(current, |x| x / kappa);
        base.g = freq(self.g, base.g);
        base.gamma = freq(self.gamma, base.gamma);
        base.eta = freq(self.eta, base.eta);
        base.delta_a = freq(self.delta_a, base.delta_a);
        base.delta_c = freq(self.delta_c, base.delta_c);
        base.kappa = 1.0;
        if let Some(n) = self.n_atoms {
            base.n_atoms = n;
        }
        if let Some(d) = self.drive {
            base.drive = d;
        }
        base.n_max = match (self.n_max, &from_preset) {
            (Some(n), _) => n,
            (None, Some(s)) if self.eta.is_none() => s.base.n_max,
            _ => recommended_n_max(base.eta),
        };

        let scale_axis = |axis: Axis| -> Result<Axis> {
            Ok(if axis.param.is_frequency() && kappa != 1.0 {
                axis.scaled(1.0 / kappa)
            } else {
                axis
            })
        };
        let axis1 = match (self.axis(1).any(), &from_preset) {
            (true, _) => scale_axis(self.axis(1).build("axis1")?)?,
            (false, Some(s)) => s.axis1.clone(),
            (false, None) => return Err(Error::Config("axis1 is required without a preset".into())),
        };
        let axis2 = match (self.axis(2).any(), &from_preset) {
            (true, _) => Some(scale_axis(self.axis(2).build("axis2")?)?),
            (false, Some(s)) => s.axis2.clone(),
            (false, None) => None,
        };
        let outputs = match (&self.outputs, &from_preset) {
            (Some(list), _) => list.iter().map(|s| s.parse()).collect::<Result<Vec<Output>>>()?,
            (None, Some(s)) => s.outputs.clone(),
            (None, None) => vec![Output::G2Zero, Output::MeanPhotons],
        };
        let spec = SweepSpec {
            base,
            axis1,
            axis2,
            outputs,
            preset,
        };
        spec.base.validate()?;
        spec.validate()?;
        Ok(spec)
    }
}

fn axis_keys(axis: &Axis) -> (Option<String>, Option<f64>, Option<f64>, Option<usize>, Option<Vec<f64>>) {
    let name = Some(axis.param.key().to_string());
    match &axis.range {
        AxisRange::Linspace { start, stop, count } => (name, Some(*start), Some(*stop), Some(*count), None),
        AxisRange::Values(v) => (name, None, None, None, Some(v.clone())),
    }
}

/// The fully resolved configuration of a sweep, re-parseable by
/// [`ConfigFile::parse`].
pub fn effective_config(spec: &SweepSpec) -> ConfigFile {
    let b = &spec.base;
    let (axis1, axis1_start, axis1_stop, axis1_count, axis1_values) = axis_keys(&spec.axis1);
    let (axis2, axis2_start, axis2_stop, axis2_count, axis2_values) =
        spec.axis2.as_ref().map_or((None, None, None, None, None), axis_keys);
    ConfigFile {
        preset: spec.preset.map(|p| p.name().to_string()),
        n_atoms: Some(b.n_atoms),
        drive: Some(b.drive),
        kappa: Some(b.kappa),
        g: Some(b.g),
        gamma: Some(b.gamma),
        eta: Some(b.eta),
        delta_a: Some(b.delta_a),
        delta_c: Some(b.delta_c),
        n_max: Some(b.n_max),
        axis1,
        axis1_start,
        axis1_stop,
        axis1_count,
        axis1_values,
        axis2,
        axis2_start,
        axis2_stop,
        axis2_count,
        axis2_values,
        outputs: Some(spec.outputs.iter().map(Output::key).collect()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config() {
        let cfg = ConfigFile::parse(
            r#"
            g = 0.5
            axis1 = "eta"
            axis1_values = [0.01, 0.3]
            "#,
        )
        .unwrap();
        let spec = cfg.into_spec().unwrap();
        assert_eq!(spec.base.g, 0.5);
        assert_eq!(spec.base.n_max, 5);
        assert_eq!(spec.axis1.points(), &[0.01, 0.3]);
        assert_eq!(spec.outputs, vec![Output::G2Zero, Output::MeanPhotons]);
    }

    #[test]
    fn explicit_keys_override_preset() {
        let cfg = ConfigFile::parse(
            r#"
            preset = "fig6a"
            g = 1.5
            outputs = ["g2_zero"]
            "#,
        )
        .unwrap();
        let spec = cfg.into_spec().unwrap();
        let preset = Preset::Fig6a.spec();
        assert_eq!(spec.base.g, 1.5);
        assert_eq!(spec.base.delta_c, preset.base.delta_c);
        assert_eq!(spec.axis1, preset.axis1);
        assert_eq!(spec.outputs, vec![Output::G2Zero]);
    }

    #[test]
    fn physical_units_are_normalised() {
        let cfg = ConfigFile::parse(
            r#"
            kappa = 2.8
            gamma = 3.0
            eta = 1.4
            n_atoms = 2
            drive = "atom"
            axis1 = "g"
            axis1_start = 2.8
            axis1_stop = 28.0
            axis1_count = 10
            "#,
        )
        .unwrap();
        let spec = cfg.into_spec().unwrap();
        assert_eq!(spec.base.kappa, 1.0);
        assert!((spec.base.eta - 0.5).abs() < 1e-15);
        assert_eq!(spec.base.n_max, 10);
        assert!((spec.axis1.points()[9] - 10.0).abs() < 1e-12);
    }

    #[test]
    fn echo_round_trips() {
        for preset in Preset::ALL {
            let spec = preset.spec();
            let text = effective_config(&spec).to_toml();
            let again = ConfigFile::parse(&text).unwrap().into_spec().unwrap();
            assert_eq!(again, spec, "{preset}");
        }
    }

    #[test]
    fn bad_configs() {
        for text in [
            "bogus = 1",
            "axis1 = \"g\"",
            "axis1 = \"g\"\naxis1_values = [1.0]",
            "axis1 = \"chi\"\naxis1_values = [1.0, 2.0]",
            "axis1 = \"g\"\naxis1_values = [1.0, 2.0]\noutputs = [\"g3\"]",
            "axis1 = \"g\"\naxis1_values = [1.0, 2.0]\nn_atoms = 3",
            "axis1 = \"g\"\naxis1_values = [1.0, 2.0]\naxis2 = \"g\"\naxis2_values = [1.0, 2.0]",
            "preset = \"fig9\"",
            "g = 1.0",
        ] {
            let parsed = ConfigFile::parse(text).and_then(|c| c.into_spec());
            assert!(matches!(parsed, Err(Error::Config(_)) | Err(Error::InvalidParams(_)) | Err(Error::InvalidAtomCount(_))), "{text}: {parsed:?}");
        }
    }
}
