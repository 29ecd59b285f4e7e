//! Job-information CSV exchange: exporting the runner's records and
//! ingesting externally produced files (StarExec-style) through a
//! header column map.

use std::collections::HashMap;
use std::io::Read;
use std::path::Path;

use crate::classify::TrackId;
use crate::runner::{normalize_verdict, ExitStatus, JobRecord};

/// Names of the CSV columns holding each job field. The defaults match
/// the headers of a StarExec job-information export.
#[derive(Debug, Clone)]
pub struct ColumnMap {
    pub benchmark: String,
    pub solver: String,
    pub configuration: String,
    pub result: String,
    pub cpu_time: String,
    pub wall_time: String,
    /// Optional: a column carrying the track name. When absent, the
    /// caller supplies the track.
    pub track: Option<String>,
}

impl Default for ColumnMap {
    fn default() -> Self {
        ColumnMap {
            benchmark: "benchmark".into(),
            solver: "solver".into(),
            configuration: "configuration".into(),
            result: "result".into(),
            cpu_time: "cpu time".into(),
            wall_time: "wallclock time".into(),
            track: None,
        }
    }
}

/// Parses a column map file: `field = column name` lines for the
/// fields benchmark, solver, configuration, result, cpu_time,
/// wall_time, track. Unset fields keep their defaults.
pub fn parse_column_map(text: &str) -> Result<ColumnMap, IngestError> {
    let mut map = ColumnMap::default();
    for (index, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| IngestError::Malformed {
            line: index + 1,
            msg: "expected `field = column`".into(),
        })?;
        let value = value.trim().to_string();
        match key.trim() {
            "benchmark" => map.benchmark = value,
            "solver" => map.solver = value,
            "configuration" => map.configuration = value,
            "result" => map.result = value,
            "cpu_time" => map.cpu_time = value,
            "wall_time" => map.wall_time = value,
            "track" => map.track = Some(value),
            other => {
                return Err(IngestError::Malformed {
                    line: index + 1,
                    msg: format!("unknown field `{}`", other),
                })
            }
        }
    }
    Ok(map)
}

#[derive(Debug, thiserror::Error)]
pub enum IngestError {
    #[error("missing mapped column `{0}` in the CSV header")]
    MissingColumn(String),
    #[error("column map line {line}: {msg}")]
    Malformed { line: usize, msg: String },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

/// A row that could not be turned into a job record.
#[derive(Debug, Clone)]
pub struct RejectedRow {
    pub line: u64,
    pub reason: String,
}

#[derive(Debug)]
pub struct IngestOutcome {
    pub records: Vec<JobRecord>,
    pub rejects: Vec<RejectedRow>,
}

pub fn ingest_job_csv(
    path: &Path,
    map: &ColumnMap,
    track: Option<TrackId>,
) -> Result<IngestOutcome, IngestError> {
    let file = std::fs::File::open(path)?;
    ingest_job_csv_reader(file, map, track)
}

/// Rows become [`JobRecord`]s with result strings pushed through the
/// verdict table; malformed rows are collected with their line number
/// instead of aborting the ingest. A mapped column missing from the
/// header is a hard error.
pub fn ingest_job_csv_reader<R: Read>(
    reader: R,
    map: &ColumnMap,
    track: Option<TrackId>,
) -> Result<IngestOutcome, IngestError> {
    let mut csv_reader = csv::ReaderBuilder::new()
        .flexible(true)
        .from_reader(reader);
    let headers = csv_reader.headers()?.clone();
    let index_of = |name: &str| -> Result<usize, IngestError> {
        headers
            .iter()
            .position(|h| h.trim() == name)
            .ok_or_else(|| IngestError::MissingColumn(name.to_string()))
    };
    let benchmark_col = index_of(&map.benchmark)?;
    let solver_col = index_of(&map.solver)?;
    let config_col = index_of(&map.configuration)?;
    let result_col = index_of(&map.result)?;
    let cpu_col = index_of(&map.cpu_time)?;
    let wall_col = index_of(&map.wall_time)?;
    let track_col = match &map.track {
        Some(name) => Some(index_of(name)?),
        None => None,
    };

    let mut records = Vec::new();
    let mut rejects = Vec::new();
    for row in csv_reader.records() {
        let row = row?;
        let line = row.position().map(|p| p.line()).unwrap_or(0);
        let reject = |reason: String| RejectedRow { line, reason };
        let cell = |i: usize| row.get(i).map(str::trim);
        let required = [benchmark_col, solver_col, config_col, result_col, cpu_col, wall_col];
        if let Some(&missing) = required.iter().find(|&&i| cell(i).is_none()) {
            rejects.push(reject(format!(
                "row has no value for column `{}`",
                headers.get(missing).unwrap_or("?")
            )));
            continue;
        }
        let parse_time = |i: usize| -> Result<f64, String> {
            let text = cell(i).unwrap();
            text.parse::<f64>()
                .map_err(|_| format!("non-numeric time `{}` in column `{}`", text, headers.get(i).unwrap_or("?")))
        };
        let cpu_time_s = match parse_time(cpu_col) {
            Ok(v) => v,
            Err(reason) => {
                rejects.push(reject(reason));
                continue;
            }
        };
        let wall_time_s = match parse_time(wall_col) {
            Ok(v) => v,
            Err(reason) => {
                rejects.push(reject(reason));
                continue;
            }
        };
        let row_track = match track_col {
            Some(i) => match cell(i).unwrap_or("").parse::<TrackId>() {
                Ok(t) => t,
                Err(msg) => {
                    rejects.push(reject(msg));
                    continue;
                }
            },
            None => track.unwrap_or(TrackId::Unclassified),
        };
        let status = ExitStatus::Imported;
        let first_line = cell(result_col).unwrap().to_string();
        records.push(JobRecord {
            solver: cell(solver_col).unwrap().to_string(),
            configuration: cell(config_col).unwrap().to_string(),
            benchmark: cell(benchmark_col).unwrap().to_string(),
            track: row_track,
            verdict: normalize_verdict(&first_line, &status),
            cpu_time_s,
            wall_time_s,
            status,
            first_line,
        });
    }
    Ok(IngestOutcome { records, rejects })
}

/// Serializes run output with the same header names the default
/// column map expects, so harness CSVs can be re-ingested as-is.
/// Times are written with decisecond precision: measurement noise
/// below that is meaningless for scoring and would break run-to-run
/// reproducibility of downstream artifacts.
pub fn write_jobs_csv(records: &[JobRecord]) -> String {
    let mut out = String::from("benchmark,solver,configuration,result,cpu time,wallclock time,status\n");
    for record in records {
        let field = |s: &str| {
            if s.contains(',') || s.contains('"') {
                format!("\"{}\"", s.replace('"', "\"\""))
            } else {
                s.to_string()
            }
        };
        out.push_str(&format!(
            "{},{},{},{},{:.1},{:.1},{}\n",
            field(&record.benchmark),
            field(&record.solver),
            field(&record.configuration),
            record.verdict,
            record.cpu_time_s,
            record.wall_time_s,
            record.status,
        ));
    }
    out
}

/// Map of solver names to a count of rows, useful for sanity summaries.
pub fn rows_per_solver(records: &[JobRecord]) -> HashMap<String, usize> {
    let mut counts = HashMap::new();
    for record in records {
        *counts.entry(record.solver.clone()).or_insert(0) += 1;
    }
    counts
}
