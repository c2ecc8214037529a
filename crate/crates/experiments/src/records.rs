//! Result rows and their CSV/JSON forms.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use starloc_core::DesignKind;

use crate::error::{ExperimentError, Result};

/// Column order of every result file.
pub const COLUMNS: [&str; 17] = [
    "snr_db",
    "eps1",
    "eta1",
    "design",
    "seed",
    "crlb_theta1",
    "crlb_phi1",
    "crlb_d1",
    "crlb_theta2",
    "crlb_phi2",
    "crlb_d2",
    "crlb_theta3",
    "crlb_phi3",
    "crlb_d3",
    "rmse_outdoor",
    "rmse_indoor",
    "cond",
];

const SINGULAR: &str = "singular";

/// A bound that is either a number or unavailable because the Fisher
/// matrix could not be inverted.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Value(f64),
    Singular,
}

impl Cell {
    pub fn value(self) -> Option<f64> {
        match self {
            Self::Value(v) => Some(v),
            Self::Singular => None,
        }
    }

    fn render(self) -> String {
        match self {
            Self::Value(v) => format!("{v:.16e}"),
            Self::Singular => SINGULAR.to_owned(),
        }
    }

    fn parse(s: &str) -> Option<Self> {
        if s == SINGULAR {
            Some(Self::Singular)
        } else {
            s.parse().ok().map(Self::Value)
        }
    }
}

impl Serialize for Cell {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match *self {
            Self::Value(v) => s.serialize_f64(v),
            Self::Singular => s.serialize_str(SINGULAR),
        }
    }
}

impl<'de> Deserialize<'de> for Cell {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(v) => Ok(Self::Value(v)),
            Raw::Text(t) if t == SINGULAR => Ok(Self::Singular),
            Raw::Text(t) => Err(serde::de::Error::custom(format!(
                "expected a number or \"singular\", got {t:?}"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRecord {
    pub snr_db: f64,
    pub eps1: f64,
    pub eta1: f64,
    pub design: DesignKind,
    /// Only random designs carry a seed.
    pub seed: Option<u64>,
    /// Channel-parameter variances in `theta1..d3` order.
    pub crlb: [Cell; 9],
    pub rmse_outdoor: Cell,
    pub rmse_indoor: Cell,
    /// Condition number of the channel Fisher matrix, when finite.
    pub cond: Cell,
}

impl SweepRecord {
    pub fn is_singular(&self) -> bool {
        self.rmse_outdoor == Cell::Singular
    }

    fn fields(&self) -> Vec<String> {
        let mut row = vec![
            format!("{:.16e}", self.snr_db),
            format!("{:.16e}", self.eps1),
            format!("{:.16e}", self.eta1),
            self.design.name().to_owned(),
            self.seed.map(|s| s.to_string()).unwrap_or_default(),
        ];
        row.extend(self.crlb.iter().map(|c| c.render()));
        row.extend([self.rmse_outdoor, self.rmse_indoor, self.cond].map(Cell::render));
        row
    }

    fn from_fields(fields: &[&str]) -> Option<Self> {
        if fields.len() != COLUMNS.len() {
            return None;
        }
        let num = |i: usize| fields[i].parse::<f64>().ok();
        let cell = |i: usize| Cell::parse(fields[i]);
        let mut crlb = [Cell::Singular; 9];
        for (k, c) in crlb.iter_mut().enumerate() {
            *c = cell(5 + k)?;
        }
        Some(Self {
            snr_db: num(0)?,
            eps1: num(1)?,
            eta1: num(2)?,
            design: fields[3].parse().ok()?,
            seed: if fields[4].is_empty() {
                None
            } else {
                Some(fields[4].parse().ok()?)
            },
            crlb,
            rmse_outdoor: cell(14)?,
            rmse_indoor: cell(15)?,
            cond: cell(16)?,
        })
    }
}

/// JSON object layout, one field per CSV column.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonRow {
    snr_db: f64,
    eps1: f64,
    eta1: f64,
    design: String,
    seed: Option<u64>,
    crlb_theta1: Cell,
    crlb_phi1: Cell,
    crlb_d1: Cell,
    crlb_theta2: Cell,
    crlb_phi2: Cell,
    crlb_d2: Cell,
    crlb_theta3: Cell,
    crlb_phi3: Cell,
    crlb_d3: Cell,
    rmse_outdoor: Cell,
    rmse_indoor: Cell,
    cond: Cell,
}

impl From<&SweepRecord> for JsonRow {
    fn from(r: &SweepRecord) -> Self {
        let c = r.crlb;
        Self {
            snr_db: r.snr_db,
            eps1: r.eps1,
            eta1: r.eta1,
            design: r.design.name().to_owned(),
            seed: r.seed,
            crlb_theta1: c[0],
            crlb_phi1: c[1],
            crlb_d1: c[2],
            crlb_theta2: c[3],
            crlb_phi2: c[4],
            crlb_d2: c[5],
            crlb_theta3: c[6],
            crlb_phi3: c[7],
            crlb_d3: c[8],
            rmse_outdoor: r.rmse_outdoor,
            rmse_indoor: r.rmse_indoor,
            cond: r.cond,
        }
    }
}

impl JsonRow {
    fn into_record(self) -> Option<SweepRecord> {
        Some(SweepRecord {
            snr_db: self.snr_db,
            eps1: self.eps1,
            eta1: self.eta1,
            design: self.design.parse().ok()?,
            seed: self.seed,
            crlb: [
                self.crlb_theta1,
                self.crlb_phi1,
                self.crlb_d1,
                self.crlb_theta2,
                self.crlb_phi2,
                self.crlb_d2,
                self.crlb_theta3,
                self.crlb_phi3,
                self.crlb_d3,
            ],
            rmse_outdoor: self.rmse_outdoor,
            rmse_indoor: self.rmse_indoor,
            cond: self.cond,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            other => Err(format!("unknown format {other:?}, expected csv or json")),
        }
    }
}

/// Writes the rows in order. CSV numbers carry 17 significant digits.
pub fn write_results(
    records: &[SweepRecord],
    path: impl AsRef<Path>,
    format: Format,
) -> Result<()> {
    let path = path.as_ref();
    let io = |e: std::io::Error| ExperimentError::io(path, e);
    let file = File::create(path).map_err(io)?;
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(BufWriter::new(file));
            let csv_err = |e: csv::Error| io(e.into());
            w.write_record(COLUMNS).map_err(csv_err)?;
            for r in records {
                w.write_record(r.fields()).map_err(csv_err)?;
            }
            w.flush().map_err(io)?;
        }
        Format::Json => {
            let rows: Vec<JsonRow> = records.iter().map(JsonRow::from).collect();
            let mut w = BufWriter::new(file);
            serde_json::to_writer_pretty(&mut w, &rows).map_err(|e| io(e.into()))?;
            w.write_all(b"\n").map_err(io)?;
            w.flush().map_err(io)?;
        }
    }
    Ok(())
}

/// Reads a file produced by [`write_results`].
pub fn read_results(path: impl AsRef<Path>, format: Format) -> Result<Vec<SweepRecord>> {
    let path = path.as_ref();
    let bad = |msg: String| ExperimentError::Parse {
        path: path.to_path_buf(),
        message: msg,
    };
    match format {
        Format::Csv => {
            let mut r =
                csv::Reader::from_path(path).map_err(|e| ExperimentError::io(path, e.into()))?;
            let header = r.headers().map_err(|e| bad(e.to_string()))?;
            if header.iter().ne(COLUMNS) {
                return Err(bad(format!("unexpected header {header:?}")));
            }
            let mut out = Vec::new();
            for (line, row) in r.records().enumerate() {
                let row = row.map_err(|e| bad(e.to_string()))?;
                let fields: Vec<&str> = row.iter().collect();
                out.push(
                    SweepRecord::from_fields(&fields)
                        .ok_or_else(|| bad(format!("bad row {}", line + 2)))?,
                );
            }
            Ok(out)
        }
        Format::Json => {
            let text = std::fs::read_to_string(path).map_err(|e| ExperimentError::io(path, e))?;
            let rows: Vec<JsonRow> = serde_json::from_str(&text).map_err(|e| bad(e.to_string()))?;
            rows.into_iter()
                .enumerate()
                .map(|(i, r)| {
                    r.into_record()
                        .ok_or_else(|| bad(format!("bad design in row {i}")))
                })
                .collect()
        }
    }
}
