//! Measurement CSV ingestion.
//!
//! Two schemas are accepted, told apart by the header:
//!
//! ```text
//! delta_pump_hz,slope_rad_inv_s,fit_bandwidth_hz,stderr
//! delta_pump_hz,n_g
//! ```
//!
//! Lines starting with `#` are comments.

use std::io::Read;

use cadsim_core::cad::{GroupIndexPoint, SlopeMeasurement};

use crate::error::CliError;

#[derive(Debug, Clone)]
pub enum Measurements {
    Slopes(Vec<SlopeMeasurement>),
    GroupIndex(Vec<GroupIndexPoint>),
}

impl Measurements {
    pub fn schema(&self) -> &'static str {
        match self {
            Self::Slopes(_) => "slope",
            Self::GroupIndex(_) => "group_index",
        }
    }

    pub fn group_index_points(&self, carrier: f64) -> Vec<GroupIndexPoint> {
        match self {
            Self::Slopes(ms) => ms
                .iter()
                .map(|m| GroupIndexPoint::from_slope(m, carrier))
                .collect(),
            Self::GroupIndex(pts) => pts.clone(),
        }
    }
}

const SLOPE_COLUMNS: [&str; 4] = [
    "delta_pump_hz",
    "slope_rad_inv_s",
    "fit_bandwidth_hz",
    "stderr",
];
const NG_COLUMNS: [&str; 2] = ["delta_pump_hz", "n_g"];

fn parse_field(raw: &str, column: &str, line: u64) -> Result<f64, CliError> {
    let v: f64 = raw
        .trim()
        .parse()
        .map_err(|_| CliError::Data(format!("line {line}: {column} = {raw:?} is not a number")))?;
    if !v.is_finite() {
        return Err(CliError::Data(format!(
            "line {line}: {column} is not finite"
        )));
    }
    Ok(v)
}

pub fn read_measurements<R: Read>(input: R) -> Result<Measurements, CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(input);
    let header: Vec<String> = reader
        .headers()
        .map_err(|e| CliError::Data(format!("unreadable header: {e}")))?
        .iter()
        .map(str::to_string)
        .collect();
    let columns: &[&str] = if header == SLOPE_COLUMNS {
        &SLOPE_COLUMNS
    } else if header == NG_COLUMNS {
        &NG_COLUMNS
    } else {
        return Err(CliError::Data(format!(
            "header {header:?} matches neither {SLOPE_COLUMNS:?} nor {NG_COLUMNS:?}"
        )));
    };

    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| CliError::Data(e.to_string()))?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != columns.len() {
            return Err(CliError::Data(format!(
                "line {line}: expected {} fields, found {}",
                columns.len(),
                record.len()
            )));
        }
        let values = record
            .iter()
            .zip(columns)
            .map(|(raw, col)| parse_field(raw, col, line))
            .collect::<Result<Vec<f64>, _>>()?;
        rows.push(values);
    }

    let mut seen: Vec<f64> = rows.iter().map(|r| r[0]).collect();
    seen.sort_by(f64::total_cmp);
    if let Some(w) = seen.windows(2).find(|w| w[0] == w[1]) {
        return Err(CliError::Data(format!("duplicate delta_pump_hz {}", w[0])));
    }

    if columns.len() == SLOPE_COLUMNS.len() {
        rows.iter()
            .map(|r| {
                SlopeMeasurement::new(r[0], r[1], r[2], r[3])
                    .map_err(|e| CliError::Data(e.to_string()))
            })
            .collect::<Result<_, _>>()
            .map(Measurements::Slopes)
    } else {
        Ok(Measurements::GroupIndex(
            rows.iter()
                .map(|r| GroupIndexPoint {
                    pump_separation: r[0],
                    group_index: r[1],
                })
                .collect(),
        ))
    }
}
