//! CSV output. Reals are written with 17 significant digits in scientific
//! notation, which round-trips every `f64`; infinities are the literal `inf`.

use std::io::{Read, Write};

use quncert::uncertainty::Extended;
use quncert::Trajectory;

use crate::error::CliError;

pub fn format_number(x: f64) -> String {
    if x == f64::INFINITY {
        "inf".into()
    } else if x == f64::NEG_INFINITY {
        "-inf".into()
    } else if x.is_nan() {
        "nan".into()
    } else {
        format!("{x:.16e}")
    }
}

pub fn format_extended(x: Extended<f64>) -> String {
    format_number(x.to_scalar())
}

pub fn parse_number(s: &str) -> Result<f64, std::num::ParseFloatError> {
    s.trim().parse()
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Self { header: header.into_iter().map(Into::into).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn write<W: Write>(&self, out: W) -> Result<(), CliError> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row)?;
        }
        w.flush().map_err(|e| CliError::io("<csv>", e))?;
        Ok(())
    }

    pub fn to_bytes(&self) -> Result<Vec<u8>, CliError> {
        let mut buf = Vec::new();
        self.write(&mut buf)?;
        Ok(buf)
    }

    pub fn read<R: Read>(input: R) -> Result<Self, CliError> {
        let mut r = csv::Reader::from_reader(input);
        let header = r.headers()?.iter().map(str::to_string).collect();
        let mut rows = Vec::new();
        for rec in r.records() {
            rows.push(rec?.iter().map(str::to_string).collect());
        }
        Ok(Self { header, rows })
    }

    /// Column `name` parsed as numbers.
    pub fn column(&self, name: &str) -> Result<Vec<f64>, CliError> {
        let idx =
            self.header.iter().position(|h| h == name).ok_or_else(|| CliError::Usage(format!("no column `{name}`")))?;
        self.rows
            .iter()
            .map(|row| parse_number(&row[idx]).map_err(|e| CliError::Usage(format!("column `{name}`: {e}"))))
            .collect()
    }
}

/// `t`, then `<name>_mean,<name>_std` per observable, then
/// `energy_mean,energy_std,coherence,predictability`.
pub fn trajectory_table(tr: &Trajectory) -> Table {
    let mut header = vec!["t".to_string()];
    for (name, _) in &tr.series {
        header.push(format!("{name}_mean"));
        header.push(format!("{name}_std"));
    }
    header.extend(["energy_mean", "energy_std", "coherence", "predictability"].map(String::from));
    let mut table = Table::new(header);
    for (i, &t) in tr.times.iter().enumerate() {
        let mut row = vec![format_number(t)];
        for (_, series) in &tr.series {
            row.push(format_number(series[i].mean));
            row.push(format_number(series[i].stddev));
        }
        row.push(format_number(tr.energy[i].mean));
        row.push(format_number(tr.energy[i].stddev));
        row.push(format_number(tr.coherence[i].coherence));
        row.push(format_number(tr.coherence[i].predictability));
        table.push(row);
    }
    table
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_significant_digits() {
        assert_eq!(format_number(1.0), "1.0000000000000000e0");
        assert_eq!(format_number(-0.1), "-1.0000000000000001e-1");
        assert_eq!(format_number(f64::INFINITY), "inf");
    }

    #[test]
    fn numbers_round_trip_exactly() {
        for x in [0.1, 1.0 / 3.0, std::f64::consts::PI, 1e-300, -2.5e17, f64::MIN_POSITIVE, f64::MAX, f64::INFINITY] {
            assert_eq!(parse_number(&format_number(x)).unwrap(), x);
        }
    }

    #[test]
    fn table_round_trip() {
        let mut t = Table::new(["a", "b"]);
        t.push(vec![format_number(0.5), "inf".into()]);
        let back = Table::read(&t.to_bytes().unwrap()[..]).unwrap();
        assert_eq!(back, t);
        assert_eq!(back.column("b").unwrap(), vec![f64::INFINITY]);
        assert!(back.column("c").is_err());
    }
}
