//! Frame and symbol file formats.
//!
//! JSON frames look like `{"field":"real","dim":2,"vectors":[[1,0],[0,1]]}`;
//! complex entries are `[re, im]` pairs. CSV frames hold one vector per column
//! with an optional header row of labels (real field only).

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::complex::Complex;
use crate::error::{FrameError, Result};
use crate::frame::FrameMatrix;
use crate::matrix::Field;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Real(f64),
    Pair([f64; 2]),
}

impl Entry {
    fn to_complex(self) -> Complex {
        match self {
            Entry::Real(x) => Complex::real(x),
            Entry::Pair([re, im]) => Complex::new(re, im),
        }
    }

    fn encode(z: Complex, field: Field) -> Entry {
        match field {
            Field::Real => Entry::Real(z.re),
            Field::Complex => Entry::Pair([z.re, z.im]),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrameFile {
    pub field: Field,
    pub dim: usize,
    pub vectors: Vec<Vec<Entry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    /// Closed-form quantities attached by the gallery.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected: Option<BTreeMap<String, f64>>,
}

impl FrameFile {
    pub fn from_frame(frame: &FrameMatrix) -> Self {
        FrameFile {
            field: frame.field(),
            dim: frame.dim(),
            vectors: frame
                .vectors()
                .iter()
                .map(|v| v.iter().map(|&z| Entry::encode(z, frame.field())).collect())
                .collect(),
            labels: frame.labels().map(<[String]>::to_vec),
            expected: None,
        }
    }

    pub fn into_frame(self) -> Result<FrameMatrix> {
        if self.field == Field::Real {
            if let Some((i, k)) = self.vectors.iter().enumerate().find_map(|(i, v)| {
                v.iter().position(|e| matches!(e, Entry::Pair([_, im]) if *im != 0.0)).map(|k| (i, k))
            }) {
                return Err(FrameError::Validation(format!(
                    "vector {i} entry {k} is complex but the frame field is real"
                )));
            }
        }
        let vectors = self
            .vectors
            .into_iter()
            .map(|v| v.into_iter().map(Entry::to_complex).collect())
            .collect();
        let frame = FrameMatrix::new(self.field, self.dim, vectors)?;
        match self.labels {
            Some(l) => frame.with_labels(l),
            None => Ok(frame),
        }
    }
}

pub fn frame_from_json(text: &str) -> Result<FrameMatrix> {
    serde_json::from_str::<FrameFile>(text)?.into_frame()
}

pub fn frame_to_json(frame: &FrameMatrix) -> Result<String> {
    Ok(serde_json::to_string(&FrameFile::from_frame(frame))?)
}

/// One vector per column; a first row that does not parse as numbers is taken as labels.
pub fn frame_from_csv(text: &str) -> Result<FrameMatrix> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut labels: Option<Vec<String>> = None;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (r, record) in reader.records().enumerate() {
        let record = record.map_err(|e| FrameError::Parse {
            line: e.position().map_or(r + 1, |p| p.line() as usize),
            column: 1,
            message: e.to_string(),
        })?;
        if record.iter().all(|f| f.is_empty()) {
            continue;
        }
        let line = record.position().map_or(r + 1, |p| p.line() as usize);
        let parsed: std::result::Result<Vec<f64>, usize> = record
            .iter()
            .enumerate()
            .map(|(c, f)| f.parse::<f64>().map_err(|_| c))
            .collect();
        match parsed {
            Ok(row) => rows.push(row),
            Err(_) if r == 0 => labels = Some(record.iter().map(str::to_string).collect()),
            Err(c) => {
                return Err(FrameError::Parse {
                    line,
                    column: c + 1,
                    message: format!("not a number: {:?}", &record[c]),
                })
            }
        }
    }
    if rows.is_empty() {
        return Err(FrameError::Parse {
            line: 1,
            column: 1,
            message: "no numeric rows".into(),
        });
    }
    let count = rows[0].len();
    if let Some(r) = rows.iter().position(|row| row.len() != count) {
        return Err(FrameError::Validation(format!("CSV row {r} has {} columns, expected {count}", rows[r].len())));
    }
    let dim = rows.len();
    let vectors = (0..count).map(|c| rows.iter().map(|row| row[c]).collect()).collect();
    let frame = FrameMatrix::from_real(dim, vectors)?;
    match labels {
        Some(l) => frame.with_labels(l),
        None => Ok(frame),
    }
}

pub fn read_frame(path: &Path) -> Result<FrameMatrix> {
    let text = std::fs::read_to_string(path)?;
    let is_csv = path
        .extension()
        .and_then(|e| e.to_str())
        .is_some_and(|e| e.eq_ignore_ascii_case("csv"));
    if is_csv {
        frame_from_csv(&text)
    } else {
        frame_from_json(&text)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymbolFile {
    pub symbol: Vec<Entry>,
}

pub fn symbol_from_json(text: &str) -> Result<Vec<Complex>> {
    Ok(serde_json::from_str::<SymbolFile>(text)?
        .symbol
        .into_iter()
        .map(Entry::to_complex)
        .collect())
}
