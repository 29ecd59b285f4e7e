//! Command-line entry point: one subcommand per pipeline stage.
//!
//! Exit codes: 0 success, 1 configuration error, 2 I/O error.
//! `HORN_ARENA_SEED` provides the default seed; flags override any
//! per-run config file.

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use horn_arena::classify::{classification_record, classify, TrackId};
use horn_arena::conformance::{parse_failure_record, validate_conformance, Profile};
use horn_arena::curate::{
    build_suite, parse_rating_table, parse_selection_plan, rate_benchmark, BenchmarkMeta,
    RaterConfig, RatingPools, SuiteManifest,
};
use horn_arena::fingerprint::{canonical_fingerprint, dedup, DedupEntry, DedupScope};
use horn_arena::jobs_csv::{ingest_job_csv, parse_column_map, write_jobs_csv, ColumnMap};
use horn_arena::normalize::{merge_queries, normalize};
use horn_arena::parser::parse_script;
use horn_arena::printer::print_script;
use horn_arena::report::{
    inconsistencies_to_csv, render_summary, render_track_table, standings_to_csv,
};
use horn_arena::runner::{
    parse_solver_specs, run_job, run_suite, LimitsProfile, ResourceLimits, SolverSpec,
    SuiteBenchmark, MEMORY_64_GB,
};
use horn_arena::score::{detect_inconsistencies, rank, standings, TieBreak};

#[derive(Parser)]
#[command(
    name = "horn-arena",
    version,
    about = "Competition harness for CHC solvers: validate, classify, curate, run, score"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check benchmarks for CHC-COMP conformance
    Check {
        /// Conformance profile: strict or lenient
        #[arg(long, default_value = "strict")]
        profile: String,
        /// Benchmark files or directories
        inputs: Vec<PathBuf>,
    },
    /// Rewrite benchmarks into strict CHC-COMP form
    Normalize {
        /// Directory receiving one output file per accepted input
        #[arg(long)]
        out_dir: PathBuf,
        /// Merge multiple queries into a single query
        #[arg(long)]
        merge_queries: bool,
        inputs: Vec<PathBuf>,
    },
    /// Assign benchmarks to competition tracks
    Classify { inputs: Vec<PathBuf> },
    /// Fingerprint benchmarks and report duplicates
    Dedup {
        /// Duplicate scope: per-repository or global
        #[arg(long, default_value = "per-repository")]
        scope: String,
        /// Corpus root; first path component below it names the repository
        #[arg(long)]
        corpus_root: PathBuf,
    },
    /// Rate benchmarks A/B/C/D against two reference solvers
    Rate {
        /// Winner launch command (template with {benchmark})
        #[arg(long)]
        winner: String,
        #[arg(long, default_value_t = 5.0)]
        winner_timeout: f64,
        /// Runner-up launch command (template with {benchmark})
        #[arg(long)]
        runner_up: String,
        #[arg(long, default_value_t = 10.0)]
        runner_up_timeout: f64,
        /// Rating table output (default stdout)
        #[arg(long)]
        out: Option<PathBuf>,
        inputs: Vec<PathBuf>,
    },
    /// Select the competition suite from rated pools
    Select {
        /// Corpus root (repository = first path component)
        #[arg(long)]
        corpus: PathBuf,
        /// Selection plan: <repository>\t<N_r> per line
        #[arg(long)]
        plan: PathBuf,
        /// Rating table: <benchmark>\t<rating> per line
        #[arg(long)]
        ratings: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        /// Manifest output path
        #[arg(long)]
        out: PathBuf,
    },
    /// Execute a suite manifest against solver specs
    Run {
        #[arg(long)]
        manifest: PathBuf,
        /// Solver spec file: name\tconfiguration\tcompeting\tcommand
        #[arg(long)]
        solvers: PathBuf,
        /// Directory the manifest ids resolve against
        #[arg(long)]
        benchmark_root: PathBuf,
        /// Limits profile: test (600 s) or competition (1800 s)
        #[arg(long, default_value = "test")]
        profile: String,
        /// Worker slots (parallel-track jobs take all of them)
        #[arg(long, default_value_t = 2)]
        slots: usize,
        /// Treat every manifest entry as this track (e.g. LRA-TS-par)
        #[arg(long)]
        as_track: Option<String>,
        /// Job CSV output path
        #[arg(long)]
        out: PathBuf,
    },
    /// Normalize an externally produced job CSV
    Ingest {
        #[arg(long)]
        csv: PathBuf,
        /// Column map file (field = column name lines)
        #[arg(long)]
        map: Option<PathBuf>,
        #[arg(long)]
        track: Option<String>,
        /// Normalized job CSV output (default stdout)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Score job CSVs: standings, ranking, inconsistencies
    Score {
        /// Job CSV; repeat to score several labeled runs side by side
        #[arg(long, required = true)]
        csv: Vec<PathBuf>,
        #[arg(long)]
        track: String,
        /// Solver names excluded from ranking (repeatable)
        #[arg(long)]
        hors_concours: Vec<String>,
        /// Tie-break: cpu or wall (default depends on the track)
        #[arg(long)]
        tie_break: Option<String>,
        #[arg(long)]
        map: Option<PathBuf>,
        /// Standings CSV output (single --csv only)
        #[arg(long)]
        standings_csv: Option<PathBuf>,
        /// Inconsistency CSV output (single --csv only)
        #[arg(long)]
        inconsistencies_csv: Option<PathBuf>,
    },
    /// Render the per-track tables and summary for a run directory
    Report {
        /// Run directory holding jobs-<track>.csv files and an
        /// optional `config`
        #[arg(long)]
        run: PathBuf,
        /// Override the config's hors-concours list
        #[arg(long)]
        hors_concours: Vec<String>,
    },
}

#[derive(Debug)]
enum CliError {
    Config(String),
    Io(String),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 1,
            CliError::Io(_) => 2,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "configuration error: {}", msg),
            CliError::Io(msg) => write!(f, "i/o error: {}", msg),
        }
    }
}

fn io_err(path: &Path, err: impl std::fmt::Display) -> CliError {
    CliError::Io(format!("{}: {}", path.display(), err))
}

fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| io_err(path, e))
}

fn write_file(path: &Path, content: &str) -> Result<(), CliError> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent).map_err(|e| io_err(parent, e))?;
        }
    }
    std::fs::write(path, content).map_err(|e| io_err(path, e))
}

fn parse_flag<T: std::str::FromStr<Err = String>>(what: &str, value: &str) -> Result<T, CliError> {
    value
        .parse()
        .map_err(|e: String| CliError::Config(format!("--{}: {}", what, e)))
}

fn profile_flag(value: &str) -> Result<Profile, CliError> {
    match value {
        "strict" => Ok(Profile::Strict),
        "lenient" => Ok(Profile::Lenient),
        other => Err(CliError::Config(format!(
            "--profile: unknown profile `{}` (expected strict|lenient)",
            other
        ))),
    }
}

/// Expands files and directories into a sorted list of `.smt2` files.
fn collect_inputs(inputs: &[PathBuf]) -> Result<Vec<PathBuf>, CliError> {
    if inputs.is_empty() {
        return Err(CliError::Config("no input files given".into()));
    }
    let mut files = Vec::new();
    for input in inputs {
        let meta = std::fs::metadata(input).map_err(|e| io_err(input, e))?;
        if meta.is_dir() {
            let mut found = Vec::new();
            for entry in walkdir::WalkDir::new(input).sort_by_file_name() {
                let entry = entry.map_err(|e| io_err(input, e))?;
                if entry.file_type().is_file()
                    && entry.path().extension().is_some_and(|e| e == "smt2")
                {
                    found.push(entry.into_path());
                }
            }
            files.extend(found);
        } else {
            files.push(input.clone());
        }
    }
    files.sort();
    Ok(files)
}

fn default_seed(flag: Option<u64>) -> Result<u64, CliError> {
    if let Some(seed) = flag {
        return Ok(seed);
    }
    match std::env::var("HORN_ARENA_SEED") {
        Ok(value) => value
            .trim()
            .parse()
            .map_err(|e| CliError::Config(format!("HORN_ARENA_SEED: {}", e))),
        Err(_) => Ok(0),
    }
}

/// Repository of a corpus file: the first path component below the
/// corpus root, or `.` for files directly at the root.
fn repository_of(root: &Path, file: &Path) -> (String, String) {
    let rel = file.strip_prefix(root).unwrap_or(file);
    let id = rel.to_string_lossy().into_owned();
    let mut components = rel.components();
    let first = components.next();
    match (first, components.next()) {
        (Some(first), Some(_)) => (first.as_os_str().to_string_lossy().into_owned(), id),
        _ => (".".into(), id),
    }
}

pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { 1 } else { 0 };
            let _ = err.print();
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(()) => 0,
        Err(err) => {
            eprintln!("horn-arena: {}", err);
            err.exit_code()
        }
    }
}

fn dispatch(command: Command) -> Result<(), CliError> {
    match command {
        Command::Check { profile, inputs } => cmd_check(&profile, &inputs),
        Command::Normalize {
            out_dir,
            merge_queries,
            inputs,
        } => cmd_normalize(&out_dir, merge_queries, &inputs),
        Command::Classify { inputs } => cmd_classify(&inputs),
        Command::Dedup { scope, corpus_root } => cmd_dedup(&scope, &corpus_root),
        Command::Rate {
            winner,
            winner_timeout,
            runner_up,
            runner_up_timeout,
            out,
            inputs,
        } => cmd_rate(
            &winner,
            winner_timeout,
            &runner_up,
            runner_up_timeout,
            out.as_deref(),
            &inputs,
        ),
        Command::Select {
            corpus,
            plan,
            ratings,
            seed,
            out,
        } => cmd_select(&corpus, &plan, &ratings, seed, &out),
        Command::Run {
            manifest,
            solvers,
            benchmark_root,
            profile,
            slots,
            as_track,
            out,
        } => cmd_run(
            &manifest,
            &solvers,
            &benchmark_root,
            &profile,
            slots,
            as_track.as_deref(),
            &out,
        ),
        Command::Ingest {
            csv,
            map,
            track,
            out,
        } => cmd_ingest(&csv, map.as_deref(), track.as_deref(), out.as_deref()),
        Command::Score {
            csv,
            track,
            hors_concours,
            tie_break,
            map,
            standings_csv,
            inconsistencies_csv,
        } => cmd_score(
            &csv,
            &track,
            &hors_concours,
            tie_break.as_deref(),
            map.as_deref(),
            standings_csv.as_deref(),
            inconsistencies_csv.as_deref(),
        ),
        Command::Report {
            run,
            hors_concours,
        } => cmd_report(&run, &hors_concours),
    }
}

fn cmd_check(profile: &str, inputs: &[PathBuf]) -> Result<(), CliError> {
    let profile = profile_flag(profile)?;
    let mut out = String::new();
    for file in collect_inputs(inputs)? {
        let name = file.display().to_string();
        let text = read_file(&file)?;
        match parse_script(&text) {
            Err(err) => out.push_str(&parse_failure_record(&name, &err)),
            Ok(script) => {
                let report = validate_conformance(&script, profile);
                out.push_str(&report.to_records(&name));
            }
        }
    }
    print!("{}", out);
    Ok(())
}

fn cmd_normalize(out_dir: &Path, merge: bool, inputs: &[PathBuf]) -> Result<(), CliError> {
    std::fs::create_dir_all(out_dir).map_err(|e| io_err(out_dir, e))?;
    let mut seen_basenames: BTreeSet<String> = BTreeSet::new();
    for file in collect_inputs(inputs)? {
        let name = file.display().to_string();
        let text = read_file(&file)?;
        let script = match parse_script(&text) {
            Ok(script) => script,
            Err(err) => {
                print!("{}", parse_failure_record(&name, &err));
                continue;
            }
        };
        let normalized = match normalize(&script) {
            Ok(normalized) => normalized,
            Err(err) => {
                println!("{}\trejected\tnot-normalizable\t-\t{}", name, err);
                continue;
            }
        };
        let finished = if merge {
            merge_queries(&normalized)
        } else {
            normalized
        };
        let basename = file
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_else(|| "out.smt2".into());
        if !seen_basenames.insert(basename.clone()) {
            eprintln!(
                "horn-arena: warning: basename `{}` written more than once under {}",
                basename,
                out_dir.display()
            );
        }
        let target = out_dir.join(&basename);
        write_file(&target, &print_script(&finished))?;
        println!("{}\taccepted\t-\t-\t{}", name, target.display());
    }
    Ok(())
}

fn cmd_classify(inputs: &[PathBuf]) -> Result<(), CliError> {
    for file in collect_inputs(inputs)? {
        let name = file.display().to_string();
        let text = read_file(&file)?;
        match parse_script(&text).and_then(|s| {
            normalize(&s).map_err(|e| horn_arena::ParseError::Syntax {
                pos: horn_arena::lexer::Position::start(),
                msg: e.to_string(),
            })
        }) {
            Ok(script) => print!("{}", classification_record(&name, &script)),
            Err(err) => println!(
                "{}\tUnclassified\t-\t-\t{}",
                name,
                err.reason_code()
            ),
        }
    }
    Ok(())
}

fn cmd_dedup(scope: &str, corpus_root: &Path) -> Result<(), CliError> {
    let scope: DedupScope = scope
        .parse()
        .map_err(|e: String| CliError::Config(format!("--scope: {}", e)))?;
    let files = collect_inputs(&[corpus_root.to_path_buf()])?;
    let mut entries = Vec::new();
    let mut names = Vec::new();
    for file in files {
        let name = file.display().to_string();
        let text = read_file(&file)?;
        match parse_script(&text) {
            Ok(script) => {
                let (repository, id) = repository_of(corpus_root, &file);
                entries.push(DedupEntry {
                    repository,
                    id,
                    digest: canonical_fingerprint(&script),
                });
                names.push(name);
            }
            Err(err) => {
                eprintln!("{}", parse_failure_record(&name, &err).trim_end());
            }
        }
    }
    let outcome = dedup(&entries, scope);
    let mut duplicate_of: BTreeMap<&str, &str> = BTreeMap::new();
    for (dup, first) in &outcome.duplicates {
        duplicate_of.insert(&dup.id, &first.id);
    }
    for entry in &entries {
        match duplicate_of.get(entry.id.as_str()) {
            Some(first) => println!("{}\t{}\tduplicate-of:{}", entry.id, entry.digest, first),
            None => println!("{}\t{}\tunique", entry.id, entry.digest),
        }
    }
    for (repository, counts) in &outcome.per_repository {
        eprintln!("{}\t{}/{}", repository, counts.total, counts.unique);
    }
    eprintln!("total\t{}/{}", outcome.total, outcome.unique);
    Ok(())
}

fn cmd_rate(
    winner: &str,
    winner_timeout: f64,
    runner_up: &str,
    runner_up_timeout: f64,
    out: Option<&Path>,
    inputs: &[PathBuf],
) -> Result<(), CliError> {
    if winner_timeout <= 0.0 || runner_up_timeout <= 0.0 {
        return Err(CliError::Config("rater timeouts must be positive".into()));
    }
    let cfg = RaterConfig {
        winner_command: winner.to_string(),
        winner_timeout_s: winner_timeout,
        runner_up_command: runner_up.to_string(),
        runner_up_timeout_s: runner_up_timeout,
    };
    let winner_spec = SolverSpec::new("winner", "rater", true, winner)
        .map_err(|e| CliError::Config(e.to_string()))?;
    let runner_up_spec = SolverSpec::new("runner-up", "rater", true, runner_up)
        .map_err(|e| CliError::Config(e.to_string()))?;
    let limits_for = |timeout: f64| ResourceLimits {
        cpu_seconds: Some(timeout),
        wall_seconds: timeout,
        memory_bytes: MEMORY_64_GB,
    };
    let mut table = String::new();
    for file in collect_inputs(inputs)? {
        let w = run_job(&winner_spec, &file, &limits_for(winner_timeout));
        let r = run_job(&runner_up_spec, &file, &limits_for(runner_up_timeout));
        let rating = rate_benchmark(
            (w.verdict, w.cpu_time_s),
            (r.verdict, r.cpu_time_s),
            &cfg,
        );
        table.push_str(&format!("{}\t{}\n", file.display(), rating));
    }
    match out {
        Some(path) => write_file(path, &table)?,
        None => print!("{}", table),
    }
    Ok(())
}

fn cmd_select(
    corpus: &Path,
    plan: &Path,
    ratings: &Path,
    seed: Option<u64>,
    out: &Path,
) -> Result<(), CliError> {
    let seed = default_seed(seed)?;
    let quotas = parse_selection_plan(&read_file(plan)?)
        .map_err(|e| CliError::Config(e.to_string()))?;
    let rating_table = parse_rating_table(&read_file(ratings)?)
        .map_err(|e| CliError::Config(e.to_string()))?;
    let ratings_by_id: BTreeMap<&str, horn_arena::curate::Rating> = rating_table
        .iter()
        .map(|(id, rating)| (id.as_str(), *rating))
        .collect();

    let mut corpus_meta: BTreeMap<(String, String), BenchmarkMeta> = BTreeMap::new();
    let mut pools: BTreeMap<String, RatingPools> = BTreeMap::new();
    let mut unrated = 0usize;
    for file in collect_inputs(&[corpus.to_path_buf()])? {
        let name = file.display().to_string();
        let text = read_file(&file)?;
        let script = match parse_script(&text).and_then(|s| {
            normalize(&s).map_err(|e| horn_arena::ParseError::Syntax {
                pos: horn_arena::lexer::Position::start(),
                msg: e.to_string(),
            })
        }) {
            Ok(script) => script,
            Err(err) => {
                eprintln!("{}", parse_failure_record(&name, &err).trim_end());
                continue;
            }
        };
        let (repository, id) = repository_of(corpus, &file);
        let Some(rating) = ratings_by_id.get(id.as_str()) else {
            unrated += 1;
            continue;
        };
        let (track, _) = classify(&script);
        corpus_meta.insert(
            (repository.clone(), id.clone()),
            BenchmarkMeta {
                track,
                rating: *rating,
                digest: canonical_fingerprint(&script),
            },
        );
        pools.entry(repository).or_default().insert(*rating, id);
    }
    if unrated > 0 {
        eprintln!("horn-arena: {} corpus file(s) without a rating were skipped", unrated);
    }

    let mut selections = Vec::new();
    for quota in &quotas {
        let Some(repo_pools) = pools.get(&quota.repository) else {
            eprintln!(
                "horn-arena: plan names repository `{}` but the corpus has no rated files there",
                quota.repository
            );
            continue;
        };
        let picked = horn_arena::curate::select_from_repository(repo_pools, quota, seed);
        selections.push((quota.repository.clone(), picked));
    }
    let manifest =
        build_suite(&selections, &corpus_meta, seed).map_err(|e| CliError::Config(e.to_string()))?;
    write_file(out, &manifest.to_tsv())?;
    eprintln!(
        "horn-arena: selected {} benchmark(s) into {}",
        manifest.entries.len(),
        out.display()
    );
    Ok(())
}

fn cmd_run(
    manifest_path: &Path,
    solvers: &Path,
    benchmark_root: &Path,
    profile: &str,
    slots: usize,
    as_track: Option<&str>,
    out: &Path,
) -> Result<(), CliError> {
    let profile: LimitsProfile = profile
        .parse()
        .map_err(|e: String| CliError::Config(format!("--profile: {}", e)))?;
    if slots == 0 {
        return Err(CliError::Config("--slots must be at least 1".into()));
    }
    let manifest = SuiteManifest::from_tsv(&read_file(manifest_path)?)
        .map_err(|e| CliError::Config(e.to_string()))?;
    let specs = parse_solver_specs(&read_file(solvers)?)
        .map_err(|e| CliError::Config(e.to_string()))?;
    if specs.is_empty() {
        return Err(CliError::Config("solver spec file declares no solvers".into()));
    }
    let track_override = match as_track {
        Some(name) => Some(parse_flag::<TrackId>("as-track", name)?),
        None => None,
    };
    let benchmarks: Vec<SuiteBenchmark> = manifest
        .entries
        .iter()
        .map(|entry| SuiteBenchmark {
            id: entry.id.clone(),
            track: track_override.unwrap_or(entry.track),
            path: benchmark_root.join(&entry.id),
        })
        .collect();
    let outcome = run_suite(&benchmarks, &specs, profile, slots);
    write_file(out, &write_jobs_csv(&outcome.records))?;
    eprintln!(
        "horn-arena: executed {} job(s) ({} solvers x {} benchmarks)",
        outcome.records.len(),
        specs.len(),
        benchmarks.len()
    );
    Ok(())
}

fn load_column_map(path: Option<&Path>) -> Result<ColumnMap, CliError> {
    match path {
        Some(path) => {
            parse_column_map(&read_file(path)?).map_err(|e| CliError::Config(e.to_string()))
        }
        None => Ok(ColumnMap::default()),
    }
}

fn cmd_ingest(
    csv: &Path,
    map: Option<&Path>,
    track: Option<&str>,
    out: Option<&Path>,
) -> Result<(), CliError> {
    let map = load_column_map(map)?;
    let track = match track {
        Some(name) => Some(parse_flag::<TrackId>("track", name)?),
        None => None,
    };
    let outcome = ingest_job_csv(csv, &map, track).map_err(|e| match e {
        horn_arena::jobs_csv::IngestError::Io(err) => io_err(csv, err),
        other => CliError::Config(other.to_string()),
    })?;
    for reject in &outcome.rejects {
        eprintln!("{}: line {}: {}", csv.display(), reject.line, reject.reason);
    }
    let text = write_jobs_csv(&outcome.records);
    match out {
        Some(path) => write_file(path, &text)?,
        None => print!("{}", text),
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_score(
    csvs: &[PathBuf],
    track: &str,
    hors_concours: &[String],
    tie_break: Option<&str>,
    map: Option<&Path>,
    standings_csv: Option<&Path>,
    inconsistencies_csv: Option<&Path>,
) -> Result<(), CliError> {
    let track: TrackId = parse_flag("track", track)?;
    let map = load_column_map(map)?;
    let tie_break = match tie_break {
        Some(name) => parse_flag::<TieBreak>("tie-break", name)?,
        None => TieBreak::for_track(track),
    };
    if csvs.len() > 1 && (standings_csv.is_some() || inconsistencies_csv.is_some()) {
        return Err(CliError::Config(
            "file outputs are only supported with a single --csv".into(),
        ));
    }
    let hc: BTreeSet<String> = hors_concours.iter().cloned().collect();
    for csv in csvs {
        let outcome = ingest_job_csv(csv, &map, Some(track)).map_err(|e| match e {
            horn_arena::jobs_csv::IngestError::Io(err) => io_err(csv, err),
            other => CliError::Config(other.to_string()),
        })?;
        for reject in &outcome.rejects {
            eprintln!("{}: line {}: {}", csv.display(), reject.line, reject.reason);
        }
        let standings = standings(&outcome.records, track)
            .map_err(|e| CliError::Config(e.to_string()))?;
        let ranking = rank(&standings, &hc, tie_break);
        let inconsistencies = detect_inconsistencies(&outcome.records);

        if csvs.len() > 1 {
            println!("== run: {}", csv.display());
        }
        println!("{} standings:", track);
        print!("{}", render_track_table(&standings, &ranking));
        println!();
        let tie_name = match tie_break {
            TieBreak::Cpu => "cpu",
            TieBreak::Wall => "wall",
        };
        println!("Ranking ({}, tie-break {}):", track, tie_name);
        for (place, solver) in &ranking.places {
            println!("  {}. {}", place, solver);
        }
        for (solver, reason) in &ranking.excluded {
            println!("  excluded: {} ({})", solver, reason);
        }
        for (x, y) in &ranking.unresolved_ties {
            println!("  unresolved tie between {} and {} (name order used)", x, y);
        }
        if inconsistencies.is_empty() {
            println!("No inconsistent results.");
        } else {
            println!("{} inconsistent result(s):", inconsistencies.len());
            for inc in &inconsistencies {
                println!(
                    "  {}: sat by {}; unsat by {}",
                    inc.benchmark,
                    inc.sat_claimants.join(", "),
                    inc.unsat_claimants.join(", ")
                );
            }
        }
        if let Some(path) = standings_csv {
            write_file(path, &standings_to_csv(&standings))?;
        }
        if let Some(path) = inconsistencies_csv {
            write_file(path, &inconsistencies_to_csv(&inconsistencies))?;
        }
    }
    Ok(())
}

/// Reads a run directory's optional `config` file: `key = value` lines
/// with keys `hors_concours` (comma-separated) and `tracks`
/// (comma-separated track names).
fn parse_run_config(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut map = BTreeMap::new();
    for (index, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            CliError::Config(format!("config line {}: expected `key = value`", index + 1))
        })?;
        map.insert(key.trim().to_string(), value.trim().to_string());
    }
    Ok(map)
}

fn cmd_report(run: &Path, hors_concours_flags: &[String]) -> Result<(), CliError> {
    if !run.is_dir() {
        return Err(CliError::Io(format!("{}: not a directory", run.display())));
    }
    let config_path = run.join("config");
    let config = if config_path.exists() {
        parse_run_config(&read_file(&config_path)?)?
    } else {
        BTreeMap::new()
    };
    let hc: BTreeSet<String> = if hors_concours_flags.is_empty() {
        config
            .get("hors_concours")
            .map(|v| {
                v.split(',')
                    .map(|s| s.trim().to_string())
                    .filter(|s| !s.is_empty())
                    .collect()
            })
            .unwrap_or_default()
    } else {
        hors_concours_flags.iter().cloned().collect()
    };
    let map = match config.get("column_map") {
        Some(rel) => load_column_map(Some(&run.join(rel)))?,
        None => ColumnMap::default(),
    };
    let tracks: Vec<TrackId> = match config.get("tracks") {
        Some(list) => list
            .split(',')
            .map(|name| parse_flag::<TrackId>("tracks", name.trim()))
            .collect::<Result<_, _>>()?,
        None => TrackId::ALL.to_vec(),
    };

    let report_dir = run.join("report");
    let mut rankings = Vec::new();
    let mut rendered_any = false;
    for track in tracks {
        let jobs_path = run.join(format!("jobs-{}.csv", track));
        if !jobs_path.exists() {
            continue;
        }
        rendered_any = true;
        let outcome = ingest_job_csv(&jobs_path, &map, Some(track)).map_err(|e| match e {
            horn_arena::jobs_csv::IngestError::Io(err) => io_err(&jobs_path, err),
            other => CliError::Config(other.to_string()),
        })?;
        let standings = standings(&outcome.records, track)
            .map_err(|e| CliError::Config(e.to_string()))?;
        let ranking = rank(&standings, &hc, TieBreak::for_track(track));
        let inconsistencies = detect_inconsistencies(&outcome.records);
        println!("Solver performance on {} track", track);
        print!("{}", render_track_table(&standings, &ranking));
        if !inconsistencies.is_empty() {
            println!("{} inconsistent result(s) on {}", inconsistencies.len(), track);
        }
        println!();
        write_file(
            &report_dir.join(format!("{}-standings.csv", track)),
            &standings_to_csv(&standings),
        )?;
        write_file(
            &report_dir.join(format!("{}-inconsistencies.csv", track)),
            &inconsistencies_to_csv(&inconsistencies),
        )?;
        rankings.push(ranking);
    }
    if !rendered_any {
        return Err(CliError::Config(format!(
            "{}: no jobs-<track>.csv files found",
            run.display()
        )));
    }
    println!("Results of the competition");
    print!("{}", render_summary(&rankings));
    Ok(())
}
