//! Renderers for the per-track standings tables and the competition
//! summary. Text tables round times to whole seconds; the CSV form
//! keeps full precision, and serializing parsed CSV standings back out
//! reproduces the file byte for byte.

use crate::classify::TrackId;
use crate::score::{Inconsistency, Ranking, SolverStanding};

pub const STANDINGS_HEADER: &str = "solver,score,sat,unsat,cpu_s,wall_s,unique";

/// Renders one track's table. Hors-concours rows are included (they
/// were evaluated) but marked in a flag column; row order is score
/// descending as in `standings`.
pub fn render_track_table(standings: &[SolverStanding], ranking: &Ranking) -> String {
    let hors_concours: Vec<&str> = ranking
        .excluded
        .iter()
        .filter(|(_, reason)| matches!(reason, crate::score::ExclusionReason::HorsConcours))
        .map(|(name, _)| name.as_str())
        .collect();
    let header = [
        "Solver",
        "Score",
        "#sat",
        "#unsat",
        "CPU time/s",
        "Wall-clock/s",
        "#unique",
        "",
    ];
    let mut rows: Vec<[String; 8]> = Vec::new();
    for s in standings {
        let flag = if hors_concours.contains(&s.solver.as_str()) {
            "hors-concours"
        } else {
            ""
        };
        rows.push([
            s.solver.clone(),
            s.score.to_string(),
            s.sat_count.to_string(),
            s.unsat_count.to_string(),
            format!("{}", s.cpu_time_total_s.round() as i64),
            format!("{}", s.wall_time_total_s.round() as i64),
            s.unique_count.to_string(),
            flag.to_string(),
        ]);
    }
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in &rows {
        for (w, cell) in widths.iter_mut().zip(row.iter()) {
            *w = (*w).max(cell.len());
        }
    }
    let mut out = String::new();
    let render_row = |cells: &[String]| -> String {
        let mut line = String::new();
        for (i, cell) in cells.iter().enumerate() {
            if i > 0 {
                line.push_str("  ");
            }
            line.push_str(&format!("{:<width$}", cell, width = widths[i]));
        }
        line.trim_end().to_string()
    };
    let header_cells: Vec<String> = header.iter().map(|s| s.to_string()).collect();
    out.push_str(&render_row(&header_cells));
    out.push('\n');
    for row in &rows {
        out.push_str(&render_row(row));
        out.push('\n');
    }
    for s in standings {
        if s.missing_count > 0 {
            out.push_str(&format!(
                "note: {} has no record on {} benchmark(s) of this run (counted unknown)\n",
                s.solver, s.missing_count
            ));
        }
    }
    out
}

/// Standings as CSV, full precision, appendix column order.
pub fn standings_to_csv(standings: &[SolverStanding]) -> String {
    let mut out = String::from(STANDINGS_HEADER);
    out.push('\n');
    for s in standings {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            csv_field(&s.solver),
            s.score,
            s.sat_count,
            s.unsat_count,
            s.cpu_time_total_s,
            s.wall_time_total_s,
            s.unique_count
        ));
    }
    out
}

fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Parses a standings CSV back; `standings_to_csv` of the result is
/// byte-identical to the input file.
pub fn standings_from_csv(text: &str, track: TrackId) -> Result<Vec<SolverStanding>, String> {
    let mut reader = csv::ReaderBuilder::new().from_reader(text.as_bytes());
    let mut out = Vec::new();
    for row in reader.records() {
        let row = row.map_err(|e| e.to_string())?;
        let get = |i: usize| row.get(i).ok_or_else(|| format!("missing column {}", i));
        let num = |i: usize| -> Result<usize, String> {
            get(i)?.parse().map_err(|e| format!("column {}: {}", i, e))
        };
        let time = |i: usize| -> Result<f64, String> {
            get(i)?.parse().map_err(|e| format!("column {}: {}", i, e))
        };
        out.push(SolverStanding {
            solver: get(0)?.to_string(),
            configuration: String::new(),
            track,
            score: num(1)?,
            sat_count: num(2)?,
            unsat_count: num(3)?,
            cpu_time_total_s: time(4)?,
            wall_time_total_s: time(5)?,
            unique_count: num(6)?,
            missing_count: 0,
        });
    }
    Ok(out)
}

/// The competition summary: winner/2nd/3rd per track, with places left
/// blank where no eligible solver remains.
pub fn render_summary(rankings: &[Ranking]) -> String {
    let labels = ["Winner", "2nd place", "3rd place"];
    let mut columns: Vec<Vec<String>> = Vec::new();
    let mut heads: Vec<String> = vec![String::new()];
    for ranking in rankings {
        heads.push(ranking.track.to_string());
        let mut column = Vec::new();
        for place in 1..=3 {
            column.push(
                ranking
                    .places
                    .iter()
                    .find(|(rank, _)| *rank == place)
                    .map(|(_, name)| name.clone())
                    .unwrap_or_default(),
            );
        }
        columns.push(column);
    }
    let mut widths: Vec<usize> = heads.iter().map(|h| h.len()).collect();
    widths[0] = widths[0].max(labels.iter().map(|l| l.len()).max().unwrap());
    for (i, column) in columns.iter().enumerate() {
        for cell in column {
            widths[i + 1] = widths[i + 1].max(cell.len());
        }
    }
    let mut out = String::new();
    let mut push_row = |cells: Vec<String>| {
        let mut line = String::new();
        for (i, cell) in cells.iter().enumerate() {
            if i > 0 {
                line.push_str("  ");
            }
            line.push_str(&format!("{:<width$}", cell, width = widths[i]));
        }
        out.push_str(line.trim_end());
        out.push('\n');
    };
    push_row(heads.clone());
    for (row_index, label) in labels.iter().enumerate() {
        let mut cells = vec![label.to_string()];
        for column in &columns {
            cells.push(column[row_index].clone());
        }
        push_row(cells);
    }
    out
}

/// Inconsistency export: `benchmark,sat_claimants,unsat_claimants`
/// with claimant lists `;`-joined — the artifact one mails to tool
/// authors.
pub fn inconsistencies_to_csv(inconsistencies: &[Inconsistency]) -> String {
    let mut out = String::from("benchmark,sat_claimants,unsat_claimants\n");
    for inc in inconsistencies {
        out.push_str(&format!(
            "{},{},{}\n",
            csv_field(&inc.benchmark),
            csv_field(&inc.sat_claimants.join(";")),
            csv_field(&inc.unsat_claimants.join(";"))
        ));
    }
    out
}
