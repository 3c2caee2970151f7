//! CSV emission for sweep results.
//!
//! The effective configuration comes first as `# `-prefixed TOML lines, then
//! a header row and one row per grid point. Floats carry 12 significant
//! digits and gaps are written as `NA`.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::config::effective_config;
use crate::error::Result;
use crate::sweep::{Cell, SweepResult};

pub const GAP_MARKER: &str = "NA";

/// 12 significant digits in scientific notation.
pub fn format_float(v: f64) -> String {
    format!("{v:.11e}")
}

pub fn write_csv(result: &SweepResult, mut out: impl Write) -> Result<()> {
    let spec = &result.spec;
    for line in effective_config(spec).to_toml().lines() {
        writeln!(out, "# {line}")?;
    }
    writeln!(out, "{}", result.columns().join(","))?;
    let mut params = vec![spec.axis1.param];
    params.extend(spec.axis2.as_ref().map(|a| a.param));
    for row in &result.rows {
        let mut fields: Vec<String> = row
            .point
            .iter()
            .zip(&params)
            .map(|(v, p)| if p.is_integer() { format!("{v}") } else { format_float(*v) })
            .collect();
        fields.extend(row.cells.iter().map(|c| match c {
            Cell::Value(v) => format_float(*v),
            Cell::Gap(_) => GAP_MARKER.to_string(),
        }));
        writeln!(out, "{}", fields.join(","))?;
    }
    out.flush()?;
    Ok(())
}

pub fn emit_csv(result: &SweepResult, path: impl AsRef<Path>) -> Result<()> {
    write_csv(result, BufWriter::new(File::create(path)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::SystemParams;
    use crate::sweep::{Axis, Output, ParamName, SweepSpec};

    fn empty_result() -> SweepResult {
        SweepResult {
            spec: SweepSpec {
                base: SystemParams::default(),
                axis1: Axis::values(ParamName::NAtoms, vec![1.0, 2.0]).unwrap(),
                axis2: None,
                outputs: vec![Output::G2Zero, Output::CountingRate],
                preset: None,
            },
            rows: Vec::new(),
        }
    }

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(format_float(0.7071067811865476), "7.07106781187e-1");
        assert_eq!(format_float(-20.0), "-2.00000000000e1");
        let back: f64 = format_float(std::f64::consts::PI).parse().unwrap();
        assert!((back - std::f64::consts::PI).abs() < 1e-11);
    }

    #[test]
    fn header_only_for_empty_result() {
        let mut buf = Vec::new();
        write_csv(&empty_result(), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let body: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
        assert_eq!(body, ["n_atoms,g2_zero,counting_rate_over_kappa"]);
        assert!(text.lines().any(|l| l == "# axis1 = \"n_atoms\""));
    }
}
