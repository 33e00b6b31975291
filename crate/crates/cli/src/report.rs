//! Output helpers. Floats are written with 17 significant digits so that
//! every value parses back to the same `f64`.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use num_complex::Complex64;
use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

/// `x` with 17 significant digits in scientific notation.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// An `f64` that serializes as a 17-digit JSON number, or `null` if not
/// finite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Float(pub f64);

impl Serialize for Float {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return s.serialize_none();
        }
        RawValue::from_string(fmt_f64(self.0))
            .map_err(serde::ser::Error::custom)?
            .serialize(s)
    }
}

pub fn floats(xs: &[f64]) -> Vec<Float> {
    xs.iter().copied().map(Float).collect()
}

pub fn complex(z: Complex64) -> [Float; 2] {
    [Float(z.re), Float(z.im)]
}

/// Writes to `path`, or to stdout when it is `None`.
pub fn open_output(path: Option<&Path>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

pub fn write_json<T: Serialize>(value: &T, path: Option<&Path>) -> io::Result<()> {
    let mut out = open_output(path)?;
    serde_json::to_writer_pretty(&mut out, value).map_err(io::Error::other)?;
    writeln!(out)?;
    out.flush()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits_round_trip() {
        for x in [0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0, -0.0] {
            let s = fmt_f64(x);
            assert_eq!(s.parse::<f64>().unwrap().to_bits(), x.to_bits(), "{s}");
            let mantissa = s.split('e').next().unwrap().trim_start_matches('-');
            assert_eq!(mantissa.replace('.', "").len(), 17);
        }
    }

    #[test]
    fn json_numbers_and_nulls() {
        let text = serde_json::to_string(&floats(&[0.5, f64::NAN, 0.25e-20])).unwrap();
        assert_eq!(text, "[5.0000000000000000e-1,null,2.4999999999999999e-21]");
        let back: Vec<Option<f64>> = serde_json::from_str(&text).unwrap();
        assert_eq!(back, vec![Some(0.5), None, Some(0.25e-20)]);
    }
}
