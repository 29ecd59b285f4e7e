//! Aggregates job records into per-track standings, ranks the
//! competing solvers, and surfaces sat/unsat inconsistencies.
//!
//! Score is the number of sat plus unsat answers. A unique solve is a
//! sat/unsat answer on a benchmark where every other solver in the run
//! answered unknown; a solver with no record on a benchmark counts as
//! unknown there. Ranking excludes hors-concours solvers and solvers
//! with zero score, sorts by score, and breaks ties by lower CPU time
//! (wall-clock on the parallel track).

use std::collections::{BTreeMap, BTreeSet, HashSet};

use crate::classify::TrackId;
use crate::runner::{JobRecord, Verdict};

#[derive(Debug, Clone, PartialEq)]
pub struct SolverStanding {
    pub solver: String,
    pub configuration: String,
    pub track: TrackId,
    pub score: usize,
    pub sat_count: usize,
    pub unsat_count: usize,
    pub cpu_time_total_s: f64,
    pub wall_time_total_s: f64,
    pub unique_count: usize,
    /// Benchmarks of this run the solver has no record for (treated as
    /// unknown, reported so partial exports are visible).
    pub missing_count: usize,
}

#[derive(Debug, Clone, thiserror::Error)]
pub enum ScoreError {
    #[error("duplicate job for solver `{solver}` on benchmark `{benchmark}`")]
    DuplicateJob { solver: String, benchmark: String },
}

/// Builds one standing per (solver, configuration) present in the
/// track's jobs, ordered by score descending (CPU, then name, breaking
/// display ties).
pub fn standings(jobs: &[JobRecord], track: TrackId) -> Result<Vec<SolverStanding>, ScoreError> {
    let jobs: Vec<&JobRecord> = jobs.iter().filter(|j| j.track == track).collect();
    let mut seen: HashSet<(&str, &str, &str)> = HashSet::new();
    for job in &jobs {
        if !seen.insert((&job.solver, &job.configuration, &job.benchmark)) {
            return Err(ScoreError::DuplicateJob {
                solver: job.solver.clone(),
                benchmark: job.benchmark.clone(),
            });
        }
    }

    let benchmarks: BTreeSet<&str> = jobs.iter().map(|j| j.benchmark.as_str()).collect();
    let mut by_solver: BTreeMap<(&str, &str), Vec<&JobRecord>> = BTreeMap::new();
    for job in &jobs {
        by_solver
            .entry((&job.solver, &job.configuration))
            .or_default()
            .push(job);
    }

    // benchmark -> solvers that solved it (sat or unsat).
    let mut solvers_solving: BTreeMap<&str, Vec<(&str, &str)>> = BTreeMap::new();
    for job in &jobs {
        if matches!(job.verdict, Verdict::Sat | Verdict::Unsat) {
            solvers_solving
                .entry(&job.benchmark)
                .or_default()
                .push((&job.solver, &job.configuration));
        }
    }

    let mut result = Vec::new();
    for ((solver, configuration), solver_jobs) in &by_solver {
        let sat_count = solver_jobs
            .iter()
            .filter(|j| j.verdict == Verdict::Sat)
            .count();
        let unsat_count = solver_jobs
            .iter()
            .filter(|j| j.verdict == Verdict::Unsat)
            .count();
        let unique_count = solver_jobs
            .iter()
            .filter(|j| {
                matches!(j.verdict, Verdict::Sat | Verdict::Unsat)
                    && solvers_solving[j.benchmark.as_str()].len() == 1
            })
            .count();
        result.push(SolverStanding {
            solver: solver.to_string(),
            configuration: configuration.to_string(),
            track,
            score: sat_count + unsat_count,
            sat_count,
            unsat_count,
            cpu_time_total_s: solver_jobs.iter().map(|j| j.cpu_time_s).sum(),
            wall_time_total_s: solver_jobs.iter().map(|j| j.wall_time_s).sum(),
            unique_count,
            missing_count: benchmarks.len() - solver_jobs.len(),
        });
    }
    result.sort_by(|x, y| {
        y.score
            .cmp(&x.score)
            .then(x.cpu_time_total_s.total_cmp(&y.cpu_time_total_s))
            .then(x.solver.cmp(&y.solver))
            .then(x.configuration.cmp(&y.configuration))
    });
    Ok(result)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TieBreak {
    Cpu,
    Wall,
}

impl TieBreak {
    /// Wall-clock decides ties on the parallel track, CPU elsewhere.
    pub fn for_track(track: TrackId) -> TieBreak {
        if track == TrackId::LraTsPar {
            TieBreak::Wall
        } else {
            TieBreak::Cpu
        }
    }
}

impl std::str::FromStr for TieBreak {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "cpu" => Ok(TieBreak::Cpu),
            "wall" => Ok(TieBreak::Wall),
            other => Err(format!("unknown tie-break `{}` (expected cpu|wall)", other)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExclusionReason {
    HorsConcours,
    ZeroScore,
}

impl std::fmt::Display for ExclusionReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ExclusionReason::HorsConcours => write!(f, "hors concours"),
            ExclusionReason::ZeroScore => write!(f, "zero score"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Ranking {
    pub track: TrackId,
    /// 1-based places over competing solvers with a positive score.
    pub places: Vec<(usize, String)>,
    pub excluded: Vec<(String, ExclusionReason)>,
    /// Pairs whose (score, tie-break time) were exactly equal; their
    /// relative order fell back to solver-name order.
    pub unresolved_ties: Vec<(String, String)>,
}

/// Ranks one track's standings. Hors-concours solvers are excluded by
/// name; zero-score solvers are excluded rather than ranked last.
pub fn rank(
    standings: &[SolverStanding],
    hors_concours: &BTreeSet<String>,
    tie_break: TieBreak,
) -> Ranking {
    let track = standings.first().map(|s| s.track).unwrap_or(TrackId::Unclassified);
    let names_collide = {
        let names: Vec<&str> = standings.iter().map(|s| s.solver.as_str()).collect();
        let unique: HashSet<&str> = names.iter().copied().collect();
        unique.len() != names.len()
    };
    let display = |s: &SolverStanding| {
        if names_collide {
            format!("{} ({})", s.solver, s.configuration)
        } else {
            s.solver.clone()
        }
    };

    let mut excluded = Vec::new();
    let mut eligible: Vec<&SolverStanding> = Vec::new();
    for standing in standings {
        if hors_concours.contains(&standing.solver) {
            excluded.push((display(standing), ExclusionReason::HorsConcours));
        } else if standing.score == 0 {
            excluded.push((display(standing), ExclusionReason::ZeroScore));
        } else {
            eligible.push(standing);
        }
    }

    let time = |s: &SolverStanding| match tie_break {
        TieBreak::Cpu => s.cpu_time_total_s,
        TieBreak::Wall => s.wall_time_total_s,
    };
    eligible.sort_by(|x, y| {
        y.score
            .cmp(&x.score)
            .then(time(x).total_cmp(&time(y)))
            .then(x.solver.cmp(&y.solver))
            .then(x.configuration.cmp(&y.configuration))
    });
    let mut unresolved_ties = Vec::new();
    for pair in eligible.windows(2) {
        if pair[0].score == pair[1].score && time(pair[0]) == time(pair[1]) {
            unresolved_ties.push((display(pair[0]), display(pair[1])));
        }
    }
    let places = eligible
        .iter()
        .enumerate()
        .map(|(i, s)| (i + 1, display(s)))
        .collect();
    Ranking {
        track,
        places,
        excluded,
        unresolved_ties,
    }
}

/// A benchmark on which at least one solver answered sat and at least
/// one answered unsat.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Inconsistency {
    pub benchmark: String,
    pub sat_claimants: Vec<String>,
    pub unsat_claimants: Vec<String>,
}

/// Scans one track run for contradictory answers. Claimant lists are
/// exhaustive and sorted; entries are ordered by benchmark id.
/// Inconsistencies are reported, never scored away.
pub fn detect_inconsistencies(jobs: &[JobRecord]) -> Vec<Inconsistency> {
    let mut by_benchmark: BTreeMap<&str, (BTreeSet<&str>, BTreeSet<&str>)> = BTreeMap::new();
    for job in jobs {
        let entry = by_benchmark.entry(&job.benchmark).or_default();
        match job.verdict {
            Verdict::Sat => {
                entry.0.insert(&job.solver);
            }
            Verdict::Unsat => {
                entry.1.insert(&job.solver);
            }
            Verdict::Unknown => {}
        }
    }
    by_benchmark
        .into_iter()
        .filter(|(_, (sat, unsat))| !sat.is_empty() && !unsat.is_empty())
        .map(|(benchmark, (sat, unsat))| Inconsistency {
            benchmark: benchmark.to_string(),
            sat_claimants: sat.into_iter().map(str::to_string).collect(),
            unsat_claimants: unsat.into_iter().map(str::to_string).collect(),
        })
        .collect()
}
