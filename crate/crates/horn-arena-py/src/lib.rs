//! Python bindings for the horn-arena harness: benchmark parsing,
//! validation, normalization, fingerprinting, track classification,
//! suite selection, and scoring.

use std::collections::BTreeSet;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use horn_arena::classify::{self, TrackId};
use horn_arena::conformance::{validate_conformance, Profile};
use horn_arena::curate::{self, RaterConfig, RatingPools, SelectionQuota};
use horn_arena::runner::{ExitStatus, JobRecord, Verdict};
use horn_arena::score;

fn value_err(err: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(err.to_string())
}

fn parse_verdict(text: &str) -> PyResult<Verdict> {
    match text {
        "sat" => Ok(Verdict::Sat),
        "unsat" => Ok(Verdict::Unsat),
        "unknown" => Ok(Verdict::Unknown),
        other => Err(value_err(format!(
            "verdict must be sat|unsat|unknown, got `{}`",
            other
        ))),
    }
}

fn parse_track(text: &str) -> PyResult<TrackId> {
    text.parse::<TrackId>().map_err(value_err)
}

/// A parsed CHC benchmark.
#[pyclass(name = "Script", skip_from_py_object)]
#[derive(Clone)]
struct PyScript {
    inner: horn_arena::Script,
}

#[pymethods]
impl PyScript {
    /// Parses SMT-LIB text into a Script.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<PyScript> {
        horn_arena::parse_script(text)
            .map(|inner| PyScript { inner })
            .map_err(value_err)
    }

    #[getter]
    fn logic(&self) -> &str {
        &self.inner.logic
    }

    #[getter]
    fn predicate_count(&self) -> usize {
        self.inner.predicates.len()
    }

    #[getter]
    fn clause_count(&self) -> usize {
        self.inner.clauses.len()
    }

    #[getter]
    fn query_count(&self) -> usize {
        self.inner.query_count()
    }

    /// Deterministic SMT-LIB text; parsing it back gives an equal Script.
    fn to_smtlib(&self) -> String {
        horn_arena::print_script(&self.inner)
    }

    /// Hex digest of the canonical form (comments, whitespace, and
    /// set-info metadata do not contribute).
    fn fingerprint(&self) -> String {
        horn_arena::canonical_fingerprint(&self.inner).to_hex()
    }

    /// Conformance check. Returns (verdict, violations) where each
    /// violation is a (rule, location, message) triple.
    #[pyo3(signature = (profile = "strict"))]
    fn validate(&self, profile: &str) -> PyResult<(String, Vec<(String, String, String)>)> {
        let profile = match profile {
            "strict" => Profile::Strict,
            "lenient" => Profile::Lenient,
            other => return Err(value_err(format!("unknown profile `{}`", other))),
        };
        let report = validate_conformance(&self.inner, profile);
        let violations = report
            .violations
            .iter()
            .map(|v| {
                (
                    v.rule.to_string(),
                    v.location
                        .map(|p| p.to_string())
                        .unwrap_or_else(|| "-".into()),
                    v.message.clone(),
                )
            })
            .collect();
        Ok((report.verdict.to_string(), violations))
    }

    /// Strict-form rewrite (fresh head variables, flattened atom
    /// arguments). Raises ValueError on non-normalizable input.
    fn normalize(&self) -> PyResult<PyScript> {
        horn_arena::normalize(&self.inner)
            .map(|inner| PyScript { inner })
            .map_err(value_err)
    }

    /// Equisatisfiable script with at most one query clause.
    fn merge_queries(&self) -> PyScript {
        PyScript {
            inner: horn_arena::merge_queries(&self.inner),
        }
    }

    /// Competition track name, or "Unclassified".
    fn track(&self) -> String {
        classify::assign_track(&self.inner).to_string()
    }

    fn linearity(&self) -> String {
        classify::script_linearity(&self.inner).to_string()
    }

    fn theories(&self) -> String {
        classify::detect_theories(&self.inner).to_string()
    }

    fn is_transition_system(&self) -> bool {
        classify::is_transition_system(&self.inner)
    }

    fn __repr__(&self) -> String {
        format!(
            "Script(predicates={}, clauses={}, queries={})",
            self.inner.predicates.len(),
            self.inner.clauses.len(),
            self.inner.query_count()
        )
    }

    fn __eq__(&self, other: &PyScript) -> bool {
        self.inner == other.inner
    }
}

#[pyfunction]
fn parse_script(text: &str) -> PyResult<PyScript> {
    PyScript::parse(text)
}

/// Exact verdict normalization: "sat" and "unsat" match case
/// sensitively, everything else is "unknown".
#[pyfunction]
fn normalize_verdict(first_line: &str) -> String {
    horn_arena::normalize_verdict(first_line, &ExitStatus::Imported).to_string()
}

/// A/B/C/D rating from the two reference-solver outcomes.
#[pyfunction]
#[pyo3(signature = (winner, runner_up, winner_timeout = 5.0, runner_up_timeout = 10.0))]
fn rate_benchmark(
    winner: (String, f64),
    runner_up: (String, f64),
    winner_timeout: f64,
    runner_up_timeout: f64,
) -> PyResult<String> {
    let cfg = RaterConfig {
        winner_timeout_s: winner_timeout,
        runner_up_timeout_s: runner_up_timeout,
        ..RaterConfig::default()
    };
    let rating = curate::rate_benchmark(
        (parse_verdict(&winner.0)?, winner.1),
        (parse_verdict(&runner_up.0)?, runner_up.1),
        &cfg,
    );
    Ok(rating.to_string())
}

/// Per-rating take counts for pool sizes (a, b, c, d) under cap N_r.
#[pyfunction]
fn selection_counts(
    pool_sizes: (usize, usize, usize, usize),
    cap: usize,
) -> (usize, usize, usize, usize) {
    let quota = SelectionQuota {
        repository: String::new(),
        cap,
    };
    let [a, b, c, d] = curate::selection_counts(
        [pool_sizes.0, pool_sizes.1, pool_sizes.2, pool_sizes.3],
        &quota,
    );
    (a, b, c, d)
}

/// Seeded draw from per-rating pools: `pools` maps "A"/"B"/"C"/"D" to
/// benchmark id lists.
#[pyfunction]
#[pyo3(signature = (pools, repository, cap, seed = 0))]
fn select_from_repository(
    pools: &Bound<'_, PyDict>,
    repository: &str,
    cap: usize,
    seed: u64,
) -> PyResult<Vec<String>> {
    let mut rating_pools = RatingPools::default();
    for (key, value) in pools.iter() {
        let rating: String = key.extract()?;
        let ids: Vec<String> = value.extract()?;
        let rating = rating.parse::<curate::Rating>().map_err(value_err)?;
        for id in ids {
            rating_pools.insert(rating, id);
        }
    }
    let quota = SelectionQuota {
        repository: repository.to_string(),
        cap,
    };
    Ok(curate::select_from_repository(&rating_pools, &quota, seed))
}

fn jobs_from_tuples(
    jobs: Vec<(String, String, String, f64, f64)>,
    track: TrackId,
) -> Vec<JobRecord> {
    jobs.into_iter()
        .map(|(solver, benchmark, result, cpu, wall)| JobRecord {
            solver,
            configuration: "default".into(),
            benchmark,
            track,
            verdict: horn_arena::normalize_verdict(&result, &ExitStatus::Imported),
            cpu_time_s: cpu,
            wall_time_s: wall,
            status: ExitStatus::Imported,
            first_line: result,
        })
        .collect()
}

fn standing_to_dict<'py>(
    py: Python<'py>,
    s: &score::SolverStanding,
) -> PyResult<Bound<'py, PyDict>> {
    let dict = PyDict::new(py);
    dict.set_item("solver", &s.solver)?;
    dict.set_item("score", s.score)?;
    dict.set_item("sat", s.sat_count)?;
    dict.set_item("unsat", s.unsat_count)?;
    dict.set_item("cpu_s", s.cpu_time_total_s)?;
    dict.set_item("wall_s", s.wall_time_total_s)?;
    dict.set_item("unique", s.unique_count)?;
    Ok(dict)
}

/// Per-solver standings for one track run. `jobs` is a list of
/// (solver, benchmark, result, cpu_s, wall_s) tuples.
#[pyfunction]
#[pyo3(signature = (jobs, track = "LIA-lin"))]
fn standings<'py>(
    py: Python<'py>,
    jobs: Vec<(String, String, String, f64, f64)>,
    track: &str,
) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let track = parse_track(track)?;
    let records = jobs_from_tuples(jobs, track);
    let standings = score::standings(&records, track).map_err(value_err)?;
    standings.iter().map(|s| standing_to_dict(py, s)).collect()
}

/// Ranks one track run. Returns a dict with "places" (list of
/// (rank, solver)), "excluded" (list of (solver, reason)), and
/// "unresolved_ties".
#[pyfunction]
#[pyo3(signature = (jobs, track = "LIA-lin", hors_concours = vec![], tie_break = None))]
fn rank<'py>(
    py: Python<'py>,
    jobs: Vec<(String, String, String, f64, f64)>,
    track: &str,
    hors_concours: Vec<String>,
    tie_break: Option<&str>,
) -> PyResult<Bound<'py, PyDict>> {
    let track = parse_track(track)?;
    let records = jobs_from_tuples(jobs, track);
    let standings = score::standings(&records, track).map_err(value_err)?;
    let tie_break = match tie_break {
        Some(name) => name.parse::<score::TieBreak>().map_err(value_err)?,
        None => score::TieBreak::for_track(track),
    };
    let hc: BTreeSet<String> = hors_concours.into_iter().collect();
    let ranking = score::rank(&standings, &hc, tie_break);
    let dict = PyDict::new(py);
    dict.set_item("track", ranking.track.to_string())?;
    dict.set_item("places", ranking.places)?;
    dict.set_item(
        "excluded",
        ranking
            .excluded
            .iter()
            .map(|(name, reason)| (name.clone(), reason.to_string()))
            .collect::<Vec<_>>(),
    )?;
    dict.set_item("unresolved_ties", ranking.unresolved_ties)?;
    Ok(dict)
}

/// Benchmarks with contradictory sat/unsat answers, each as a dict
/// with "benchmark", "sat_claimants", "unsat_claimants".
#[pyfunction]
#[pyo3(signature = (jobs, track = "LIA-lin"))]
fn detect_inconsistencies<'py>(
    py: Python<'py>,
    jobs: Vec<(String, String, String, f64, f64)>,
    track: &str,
) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let track = parse_track(track)?;
    let records = jobs_from_tuples(jobs, track);
    score::detect_inconsistencies(&records)
        .iter()
        .map(|inc| {
            let dict = PyDict::new(py);
            dict.set_item("benchmark", &inc.benchmark)?;
            dict.set_item("sat_claimants", &inc.sat_claimants)?;
            dict.set_item("unsat_claimants", &inc.unsat_claimants)?;
            Ok(dict)
        })
        .collect()
}

#[pymodule]
fn horn_arena_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyScript>()?;
    m.add_function(wrap_pyfunction!(parse_script, m)?)?;
    m.add_function(wrap_pyfunction!(normalize_verdict, m)?)?;
    m.add_function(wrap_pyfunction!(rate_benchmark, m)?)?;
    m.add_function(wrap_pyfunction!(selection_counts, m)?)?;
    m.add_function(wrap_pyfunction!(select_from_repository, m)?)?;
    m.add_function(wrap_pyfunction!(standings, m)?)?;
    m.add_function(wrap_pyfunction!(rank, m)?)?;
    m.add_function(wrap_pyfunction!(detect_inconsistencies, m)?)?;
    Ok(())
}
