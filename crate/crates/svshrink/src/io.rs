//! Matrix CSV: no header, row-major, comma-delimited, `.` decimal point.
//!
//! Positions in errors are 1-based data rows and columns (a tolerated
//! header line is not counted).

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use faer::Mat;

use crate::{Error, Result};

pub fn read_matrix<R: Read>(reader: R, header: bool) -> Result<Mat<f64>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(header)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (r, record) in rdr.records().enumerate() {
        let record = record.map_err(|e| Error::Csv {
            row: r + 1,
            col: 0,
            message: e.to_string(),
        })?;
        if record.len() == 1 && record[0].is_empty() {
            continue;
        }
        let row = record
            .iter()
            .enumerate()
            .map(|(c, cell)| {
                let v: f64 = cell.parse().map_err(|_| Error::Csv {
                    row: r + 1,
                    col: c + 1,
                    message: format!("not a number: {cell:?}"),
                })?;
                if !v.is_finite() {
                    return Err(Error::Csv {
                        row: r + 1,
                        col: c + 1,
                        message: format!("non-finite value: {cell:?}"),
                    });
                }
                Ok(v)
            })
            .collect::<Result<Vec<f64>>>()?;
        if let Some(first) = rows.first() {
            if row.len() != first.len() {
                return Err(Error::Csv {
                    row: r + 1,
                    col: row.len().min(first.len()) + 1,
                    message: format!("ragged row: {} fields, expected {}", row.len(), first.len()),
                });
            }
        }
        rows.push(row);
    }
    if rows.is_empty() || rows[0].is_empty() {
        return Err(Error::EmptyMatrix);
    }
    Ok(Mat::from_fn(rows.len(), rows[0].len(), |i, j| rows[i][j]))
}

pub fn write_matrix<W: Write>(writer: W, y: &Mat<f64>) -> Result<()> {
    let mut w = BufWriter::new(writer);
    for i in 0..y.nrows() {
        for j in 0..y.ncols() {
            if j > 0 {
                w.write_all(b",")?;
            }
            write!(w, "{}", y[(i, j)])?;
        }
        w.write_all(b"\n")?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_matrix_file(path: &Path, header: bool) -> Result<Mat<f64>> {
    read_matrix(BufReader::new(File::open(path)?), header)
}

pub fn write_matrix_file(path: &Path, y: &Mat<f64>) -> Result<()> {
    write_matrix(File::create(path)?, y)
}
