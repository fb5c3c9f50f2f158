//! Trace files.
//!
//! * CSV: one value per line, first column used, optional non-numeric
//!   header line.
//! * Binary: the 8 bytes `KMUTRC01` followed by little-endian `f32` values.

use super::EnvelopeTrace;
use crate::error::{Error, Result};
use std::fs;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

pub const BINARY_MAGIC: &[u8; 8] = b"KMUTRC01";

/// What the numbers in a trace file represent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InputKind {
    #[default]
    Envelope,
    /// Received power; converted to envelope by square root.
    Power,
}

impl FromStr for InputKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "envelope" => Ok(InputKind::Envelope),
            "power" => Ok(InputKind::Power),
            other => Err(Error::InvalidParameter(format!(
                "unknown input kind '{other}' (expected envelope or power)"
            ))),
        }
    }
}

pub fn parse_csv(bytes: &[u8]) -> Result<Vec<f64>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(bytes);
    let mut out = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| Error::Format(format!("CSV record {}: {e}", i + 1)))?;
        let Some(field) = rec.get(0) else { continue };
        if field.is_empty() {
            continue;
        }
        match field.parse::<f64>() {
            Ok(v) => out.push(v),
            Err(_) if i == 0 => {}
            Err(_) => return Err(Error::Format(format!("line {}: '{field}' is not a number", i + 1))),
        }
    }
    if out.is_empty() {
        return Err(Error::Format("no numeric samples found".into()));
    }
    Ok(out)
}

pub fn parse_binary(bytes: &[u8]) -> Result<Vec<f64>> {
    let body = bytes
        .strip_prefix(BINARY_MAGIC.as_slice())
        .ok_or_else(|| Error::Format("missing KMUTRC01 magic".into()))?;
    if body.len() % 4 != 0 {
        return Err(Error::Format(format!(
            "payload of {} bytes is not a whole number of f32 values",
            body.len()
        )));
    }
    if body.is_empty() {
        return Err(Error::Format("binary trace has no samples".into()));
    }
    Ok(body
        .chunks_exact(4)
        .map(|c| f32::from_le_bytes([c[0], c[1], c[2], c[3]]) as f64)
        .collect())
}

/// Reads a trace, choosing the format from the leading magic bytes.
pub fn read_trace(path: &Path, kind: InputKind) -> Result<EnvelopeTrace> {
    let bytes = fs::read(path)?;
    let values = if bytes.starts_with(BINARY_MAGIC) {
        parse_binary(&bytes)?
    } else {
        parse_csv(&bytes)?
    };
    let trace = match kind {
        InputKind::Envelope => EnvelopeTrace::new(values, None),
        InputKind::Power => EnvelopeTrace::from_power(values, None),
    };
    trace.map_err(|e| Error::Format(e.to_string()))
}

pub fn write_csv(path: &Path, trace: &EnvelopeTrace) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| Error::Format(e.to_string()))?;
    w.write_record(["envelope"]).map_err(|e| Error::Format(e.to_string()))?;
    for v in &trace.samples {
        w.write_record([v.to_string()]).map_err(|e| Error::Format(e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_binary(path: &Path, trace: &EnvelopeTrace) -> Result<()> {
    let mut f = fs::File::create(path)?;
    f.write_all(BINARY_MAGIC)?;
    let mut buf = Vec::with_capacity(4 * trace.len());
    for &v in &trace.samples {
        buf.extend_from_slice(&(v as f32).to_le_bytes());
    }
    f.write_all(&buf)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_with_and_without_header() {
        assert_eq!(parse_csv(b"envelope\n1.5\n2\n").unwrap(), vec![1.5, 2.0]);
        assert_eq!(parse_csv(b"0.5\n0.25\n\n").unwrap(), vec![0.5, 0.25]);
        assert_eq!(parse_csv(b"1.0,extra\n2.0\n").unwrap(), vec![1.0, 2.0]);
        assert!(parse_csv(b"1.0\nabc\n").is_err());
        assert!(parse_csv(b"header only\n").is_err());
    }

    #[test]
    fn binary_layout() {
        let mut bytes = BINARY_MAGIC.to_vec();
        bytes.extend_from_slice(&1.5f32.to_le_bytes());
        bytes.extend_from_slice(&0.25f32.to_le_bytes());
        assert_eq!(parse_binary(&bytes).unwrap(), vec![1.5, 0.25]);
        bytes.push(0);
        assert!(matches!(parse_binary(&bytes).unwrap_err(), Error::Format(_)));
        assert!(parse_binary(b"KMUTRC02\0\0\0\0").is_err());
    }

    #[test]
    fn round_trips() {
        let dir = tempfile::tempdir().unwrap();
        let t = EnvelopeTrace::new(vec![0.5, 1.25, 3.0], None).unwrap();
        let c = dir.path().join("t.csv");
        write_csv(&c, &t).unwrap();
        assert_eq!(read_trace(&c, InputKind::Envelope).unwrap(), t);
        let b = dir.path().join("t.bin");
        write_binary(&b, &t).unwrap();
        assert_eq!(read_trace(&b, InputKind::Envelope).unwrap(), t);
        let p = read_trace(&b, InputKind::Power).unwrap();
        assert!((p.samples[2] - 3f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn negative_values_are_format_errors() {
        assert!(matches!(
            EnvelopeTrace::new(parse_csv(b"1\n-2\n").unwrap(), None)
                .map_err(|e| Error::Format(e.to_string()))
                .unwrap_err(),
            Error::Format(_)
        ));
        assert!("voltage".parse::<InputKind>().is_err());
    }
}
