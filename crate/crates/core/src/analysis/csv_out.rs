//! CSV writers with fixed headers. Floats carry 17 significant digits.

use std::fs::File;
use std::io::Write;
use std::path::Path;

use crate::analysis::delta::DeltaSeries;
use crate::analysis::norms::{ErrorReport, Norm};
use crate::error::{Error, Result};

pub const ERROR_TABLE_HEADER: [&str; 8] =
    ["nx", "t", "l1", "order_l1", "l2", "order_l2", "linf", "order_linf"];
pub const DELTA_HEADER: [&str; 6] = ["t", "delta", "k_min", "k_max", "residual", "quality"];
pub const SPECTRUM_HEADER: [&str; 3] = ["t", "k", "power"];
pub const ENERGY_HEADER: [&str; 2] = ["t", "energy"];

pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt_f64).unwrap_or_default()
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(e.to_string())
}

fn writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(w)
}

/// Equal-length numeric columns under the given header.
pub fn write_columns<W: Write>(w: W, header: &[&str], columns: &[&[f64]]) -> Result<()> {
    if header.len() != columns.len() {
        return Err(Error::Usage("header and column counts differ".into()));
    }
    let n = columns.first().map_or(0, |c| c.len());
    if columns.iter().any(|c| c.len() != n) {
        return Err(Error::Usage("columns have different lengths".into()));
    }
    let mut w = writer(w);
    w.write_record(header).map_err(csv_err)?;
    for i in 0..n {
        w.write_record(columns.iter().map(|c| fmt_f64(c[i]))).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

/// Snapshot: `x` followed by one column per field.
pub fn write_snapshot<W: Write>(w: W, x: &[f64], names: &[&str], fields: &[Vec<f64>]) -> Result<()> {
    let mut header = vec!["x"];
    header.extend_from_slice(names);
    let mut cols: Vec<&[f64]> = vec![x];
    cols.extend(fields.iter().map(|f| f.as_slice()));
    write_columns(w, &header, &cols)
}

/// Spectra at several times: `t, k, power`.
pub fn write_spectra<W: Write>(w: W, spectra: &[(f64, Vec<f64>)]) -> Result<()> {
    let mut w = writer(w);
    w.write_record(SPECTRUM_HEADER).map_err(csv_err)?;
    for (t, s) in spectra {
        for (k, p) in s.iter().enumerate() {
            w.write_record([fmt_f64(*t), k.to_string(), fmt_f64(*p)]).map_err(csv_err)?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn write_energy<W: Write>(w: W, records: &[(f64, f64)]) -> Result<()> {
    let (t, e): (Vec<f64>, Vec<f64>) = records.iter().copied().unzip();
    write_columns(w, &ENERGY_HEADER, &[&t, &e])
}

/// Error table with orders between adjacent resolutions at each time; undefined orders are blank.
pub fn write_error_table<W: Write>(w: W, report: &ErrorReport) -> Result<()> {
    let mut w = writer(w);
    w.write_record(ERROR_TABLE_HEADER).map_err(csv_err)?;
    for t in report.times() {
        let rows = report.at_time(t);
        let orders: Vec<Vec<Option<f64>>> = Norm::ALL.iter().map(|&n| report.orders(t, n)).collect();
        for (i, r) in rows.iter().enumerate() {
            w.write_record([
                r.nx.to_string(),
                fmt_f64(r.t),
                fmt_f64(r.norms.l1),
                fmt_opt(orders[0][i]),
                fmt_f64(r.norms.l2),
                fmt_opt(orders[1][i]),
                fmt_f64(r.norms.linf),
                fmt_opt(orders[2][i]),
            ])
            .map_err(csv_err)?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn write_delta_series<W: Write>(w: W, series: &DeltaSeries) -> Result<()> {
    let mut w = writer(w);
    w.write_record(DELTA_HEADER).map_err(csv_err)?;
    for p in &series.points {
        w.write_record([
            fmt_f64(p.t),
            fmt_f64(p.delta),
            p.k_min.to_string(),
            p.k_max.to_string(),
            fmt_f64(p.residual),
            p.quality.name().to_string(),
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

/// Create `path` (and its parent directory) and hand the file to `f`.
pub fn to_file(path: &Path, f: impl FnOnce(File) -> Result<()>) -> Result<()> {
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent)?;
    }
    f(File::create(path)?)
}
