//! CSV interchange: series (t, re, im), Wiener functions and kernels (k, re, im).
//!
//! Files start with `# key = value` lines carrying metadata (seed, tail bound,
//! causality, zero-fill flag). Floats are written in shortest round-trip form,
//! so a write/read cycle is bit-identical.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::signal::{Samples, SignalSource};
use crate::transfer::{Causality, Kernel};
use crate::wiener::WienerFunction;

pub type Meta = Vec<(String, String)>;

fn write_table<I>(path: &Path, meta: &Meta, header: &[&str], rows: I) -> Result<()>
where
    I: IntoIterator<Item = Vec<String>>,
{
    let mut out = BufWriter::new(File::create(path)?);
    for (k, v) in meta {
        writeln!(out, "# {k} = {v}")?;
    }
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header).map_err(csv_err)?;
    for row in rows {
        w.write_record(&row).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

fn csv_err(e: csv::Error) -> Error {
    let line = e.position().map_or(0, |p| p.line());
    Error::Csv {
        line,
        message: e.to_string(),
    }
}

/// Writes an arbitrary table with metadata lines.
pub fn write_rows(path: &Path, meta: &Meta, header: &[&str], rows: Vec<Vec<String>>) -> Result<()> {
    write_table(path, meta, header, rows)
}

/// Shortest round-trip text for `v`; exponent form outside [1e-4, 1e15).
pub fn num(v: f64) -> String {
    let a = v.abs();
    if v == 0.0 || !v.is_finite() || (1e-4..1e15).contains(&a) {
        v.to_string()
    } else {
        format!("{v:e}")
    }
}

fn triple(i: i64, v: Complex64) -> Vec<String> {
    vec![i.to_string(), num(v.re), num(v.im)]
}

pub fn write_series<I>(path: &Path, meta: &Meta, series: I) -> Result<()>
where
    I: IntoIterator<Item = (i64, Complex64)>,
{
    write_table(path, meta, &["t", "re", "im"], series.into_iter().map(|(t, v)| triple(t, v)))
}

pub fn write_wiener(path: &Path, meta: &Meta, f: &WienerFunction) -> Result<()> {
    write_table(path, meta, &["k", "re", "im"], f.iter().map(|(k, v)| triple(k, v)))
}

pub fn write_kernel(path: &Path, meta: &Meta, h: &Kernel) -> Result<()> {
    let mut all = meta.clone();
    all.push((
        "tail_bound".into(),
        h.tail_bound().map_or("unknown".to_string(), num),
    ));
    all.push(("causal".into(), h.causality().to_string()));
    write_table(path, &all, &["k", "re", "im"], h.iter().map(|(k, v)| triple(k, v)))
}

/// Parsed (index, value) rows plus metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub meta: Meta,
    pub rows: Vec<(i64, Complex64)>,
}

impl Table {
    pub fn meta(&self, key: &str) -> Option<&str> {
        self.meta.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }
}

fn read_triples(path: &Path, index: &str) -> Result<Table> {
    let file = File::open(path)?;
    let mut reader = BufReader::new(file);
    let mut meta = Vec::new();
    let mut line_no = 0u64;
    let mut rest = String::new();
    // Metadata lines first; keep the first non-comment line for the csv reader.
    loop {
        let mut line = String::new();
        if reader.read_line(&mut line)? == 0 {
            break;
        }
        line_no += 1;
        if let Some(body) = line.strip_prefix('#') {
            if let Some((k, v)) = body.split_once('=') {
                meta.push((k.trim().to_string(), v.trim().to_string()));
            }
        } else {
            rest = line;
            break;
        }
    }
    let header_line = line_no;
    let chained = std::io::Read::chain(std::io::Cursor::new(rest.into_bytes()), reader);
    let mut csv = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(chained);
    let headers = csv.headers().map_err(csv_err)?.clone();
    let col = |name: &str| {
        headers.iter().position(|h| h == name).ok_or_else(|| Error::Csv {
            line: header_line,
            message: format!("missing column '{name}'"),
        })
    };
    let (ci, cr, cm) = (col(index)?, col("re")?, col("im")?);
    let mut rows = Vec::new();
    for (i, record) in csv.records().enumerate() {
        let line = header_line + 1 + i as u64;
        let record = record.map_err(|e| Error::Csv {
            line,
            message: e.to_string(),
        })?;
        let field = |c: usize, name: &str| {
            record.get(c).ok_or_else(|| Error::Csv {
                line,
                message: format!("missing field '{name}'"),
            })
        };
        let idx: i64 = field(ci, index)?.parse().map_err(|_| Error::Csv {
            line,
            message: format!("'{index}' is not an integer"),
        })?;
        let parse_f = |c: usize, name: &str| -> Result<f64> {
            let v: f64 = field(c, name)?.parse().map_err(|_| Error::Csv {
                line,
                message: format!("'{name}' is not a number"),
            })?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(Error::Csv {
                    line,
                    message: format!("'{name}' is not finite"),
                })
            }
        };
        rows.push((idx, Complex64::new(parse_f(cr, "re")?, parse_f(cm, "im")?)));
    }
    Ok(Table { meta, rows })
}

/// A series read back from CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct ReadSeries {
    pub signal: SignalSource,
    pub meta: Meta,
    /// Times inside [min t, max t] absent from the file, filled with zero.
    pub zero_filled: Vec<i64>,
}

/// Reads (t, re, im). Rows may come in any order; gaps in t are filled with
/// zeros and listed in `zero_filled`. Duplicate times are rejected.
pub fn read_series(path: &Path) -> Result<ReadSeries> {
    let table = read_triples(path, "t")?;
    let mut rows = table.rows;
    if rows.is_empty() {
        return Err(Error::EmptyWindow);
    }
    rows.sort_by_key(|(t, _)| *t);
    for pair in rows.windows(2) {
        if pair[0].0 == pair[1].0 {
            return Err(Error::Csv {
                line: 0,
                message: format!("duplicate t = {}", pair[0].0),
            });
        }
    }
    let (lo, hi) = (rows[0].0, rows[rows.len() - 1].0);
    let mut values = vec![Complex64::new(0.0, 0.0); (hi - lo + 1) as usize];
    let mut present = vec![false; values.len()];
    for (t, v) in rows {
        values[(t - lo) as usize] = v;
        present[(t - lo) as usize] = true;
    }
    let zero_filled = present
        .iter()
        .enumerate()
        .filter(|(_, p)| !**p)
        .map(|(i, _)| lo + i as i64)
        .collect();
    Ok(ReadSeries {
        signal: SignalSource::Samples(Samples::new(lo, values)?),
        meta: table.meta,
        zero_filled,
    })
}

pub fn read_wiener(path: &Path) -> Result<WienerFunction> {
    WienerFunction::new(read_triples(path, "k")?.rows)
}

/// Reads a kernel; `tail_bound` and `causal` come from the metadata lines.
/// The stored causality is re-checked against the coefficients.
pub fn read_kernel(path: &Path) -> Result<Kernel> {
    let table = read_triples(path, "k")?;
    let tail = match table.meta("tail_bound") {
        None | Some("unknown") => None,
        Some(v) => Some(v.parse::<f64>().map_err(|_| Error::Csv {
            line: 0,
            message: format!("bad tail_bound '{v}'"),
        })?),
    };
    let w = WienerFunction::new(table.rows.iter().copied())?;
    let kernel = Kernel::new(w.offset(), w.coeffs().to_vec(), tail)?;
    match table.meta("causal").map(str::parse::<Causality>) {
        Some(Ok(Causality::Numeric(tol))) => Ok(kernel.with_causality_check(tol)),
        Some(Err(_)) => Err(Error::Csv {
            line: 0,
            message: "bad causal field".into(),
        }),
        _ => Ok(kernel),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn meta() -> Meta {
        vec![("seed".into(), "42".into())]
    }

    #[test]
    fn series_round_trip_is_exact() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("x.csv");
        let values: Vec<(i64, Complex64)> = (-50..=50)
            .map(|t| (t, Complex64::new((t as f64 * 0.37).sin() / 3.0, 1e-300 * t as f64)))
            .collect();
        write_series(&path, &meta(), values.iter().copied()).unwrap();
        let back = read_series(&path).unwrap();
        assert!(back.zero_filled.is_empty());
        assert_eq!(back.meta, meta());
        for (t, v) in values {
            assert_eq!(back.signal.sample(t).unwrap(), v);
        }
    }

    #[test]
    fn missing_column_is_named() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.csv");
        std::fs::write(&path, "# seed = 1\nt,re\n0,1.0\n").unwrap();
        match read_series(&path) {
            Err(Error::Csv { line, message }) => {
                assert!(message.contains("'im'"));
                assert_eq!(line, 2);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn malformed_row_reports_line() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.csv");
        std::fs::write(&path, "t,re,im\n0,1.0,0\n1,abc,0\n").unwrap();
        assert!(matches!(read_series(&path), Err(Error::Csv { line: 3, .. })));
    }

    #[test]
    fn gaps_are_zero_filled_and_flagged() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("gappy.csv");
        std::fs::write(&path, "t,re,im\n5,1,0\n2,2,0\n7,3,1\n").unwrap();
        let s = read_series(&path).unwrap();
        assert_eq!(s.zero_filled, vec![3, 4, 6]);
        assert_eq!(s.signal.window(), Some((2, 7)));
        assert_eq!(s.signal.sample(4).unwrap(), Complex64::new(0.0, 0.0));
        assert_eq!(s.signal.sample(7).unwrap(), Complex64::new(3.0, 1.0));
    }

    #[test]
    fn kernel_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("h.csv");
        let h = crate::transfer::trapezoid_kernel(0.5, 1.0, 16).unwrap();
        write_kernel(&path, &meta(), &h).unwrap();
        let back = read_kernel(&path).unwrap();
        assert_eq!(back, h);
        let f = WienerFunction::new([(-2, Complex64::new(0.5, -1.0)), (3, Complex64::new(1e-17, 0.0))]).unwrap();
        write_wiener(&path, &meta(), &f).unwrap();
        assert_eq!(read_wiener(&path).unwrap(), f);
    }
}
