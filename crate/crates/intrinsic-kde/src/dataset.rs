//! Sample collections and their CSV form: one point per row, D columns, no header.

use std::io::{self, BufRead, BufWriter, Write};
use std::path::Path;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("empty dataset")]
    Empty,
    #[error("point length {got} does not match dimension {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("non-finite coordinate at row {row}")]
    NonFinite { row: usize },
    #[error("ragged CSV: row {row} has {got} columns, expected {expected}")]
    RaggedRow { row: usize, expected: usize, got: usize },
    #[error("CSV parse error at row {row}: {message}")]
    Parse { row: usize, message: String },
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// An n × D collection of sample points, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    points: Vec<f64>,
    dim: usize,
}

impl Dataset {
    /// Builds a dataset from a flat row-major buffer.
    pub fn from_rows(points: Vec<f64>, dim: usize) -> Result<Self, DatasetError> {
        if dim == 0 || points.is_empty() {
            return Err(DatasetError::Empty);
        }
        if points.len() % dim != 0 {
            return Err(DatasetError::DimensionMismatch {
                expected: dim,
                got: points.len() % dim,
            });
        }
        if let Some(pos) = points.iter().position(|v| !v.is_finite()) {
            return Err(DatasetError::NonFinite { row: pos / dim });
        }
        Ok(Dataset { points, dim })
    }

    pub fn len(&self) -> usize {
        self.points.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Ambient dimension D.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.points[i * self.dim..(i + 1) * self.dim]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[f64]> {
        self.points.chunks_exact(self.dim)
    }

    pub fn as_flat(&self) -> &[f64] {
        &self.points
    }

    /// Reads a headerless CSV, one point per row; rejects ragged rows.
    pub fn read_csv<R: BufRead>(reader: R) -> Result<Self, DatasetError> {
        let mut points = Vec::new();
        let mut dim = None;
        let mut row = 0usize;
        for line in reader.lines() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let mut count = 0usize;
            for field in line.split(',') {
                let v: f64 = field.trim().parse().map_err(|e| DatasetError::Parse {
                    row,
                    message: format!("{e} in field {field:?}"),
                })?;
                points.push(v);
                count += 1;
            }
            match dim {
                None => dim = Some(count),
                Some(d) if d != count => {
                    return Err(DatasetError::RaggedRow {
                        row,
                        expected: d,
                        got: count,
                    })
                }
                _ => {}
            }
            row += 1;
        }
        Dataset::from_rows(points, dim.ok_or(DatasetError::Empty)?)
    }

    pub fn read_csv_path(path: &Path) -> Result<Self, DatasetError> {
        let file = std::fs::File::open(path)?;
        Self::read_csv(io::BufReader::new(file))
    }

    /// Writes the headerless CSV form. Floats use Rust's shortest round-trip
    /// formatting, so output is deterministic and parses back bit-identically.
    pub fn write_csv<W: Write>(&self, writer: W) -> io::Result<()> {
        let mut w = BufWriter::new(writer);
        for point in self.iter() {
            let mut first = true;
            for v in point {
                if !first {
                    w.write_all(b",")?;
                }
                write!(w, "{v}")?;
                first = false;
            }
            w.write_all(b"\n")?;
        }
        w.flush()
    }

    pub fn write_csv_path(&self, path: &Path) -> Result<(), DatasetError> {
        let file = std::fs::File::create(path)?;
        Ok(self.write_csv(file)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Cursor;

    #[test]
    fn round_trip_preserves_bits() {
        let ds = Dataset::from_rows(vec![0.1, -2.5e-7, 3.0, 1.0 / 3.0, f64::MIN_POSITIVE, 9.9], 3)
            .unwrap();
        let mut buf = Vec::new();
        ds.write_csv(&mut buf).unwrap();
        let back = Dataset::read_csv(Cursor::new(buf)).unwrap();
        assert_eq!(ds, back);
    }

    #[test]
    fn rejects_ragged_rows() {
        let err = Dataset::read_csv(Cursor::new("1,2,3\n4,5\n")).unwrap_err();
        assert!(matches!(err, DatasetError::RaggedRow { row: 1, expected: 3, got: 2 }));
    }

    #[test]
    fn rejects_empty_and_non_finite() {
        assert!(matches!(
            Dataset::read_csv(Cursor::new("")).unwrap_err(),
            DatasetError::Empty
        ));
        assert!(matches!(
            Dataset::from_rows(vec![1.0, f64::NAN], 1).unwrap_err(),
            DatasetError::NonFinite { row: 1 }
        ));
    }

    #[test]
    fn rejects_garbage_fields() {
        let err = Dataset::read_csv(Cursor::new("1,2\nx,4\n")).unwrap_err();
        assert!(matches!(err, DatasetError::Parse { row: 1, .. }));
    }

    #[test]
    fn accessors() {
        let ds = Dataset::from_rows(vec![1.0, 2.0, 3.0, 4.0], 2).unwrap();
        assert_eq!(ds.len(), 2);
        assert_eq!(ds.dim(), 2);
        assert_eq!(ds.point(1), &[3.0, 4.0]);
    }
}
