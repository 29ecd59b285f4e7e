//! Executes (solver, configuration, benchmark) jobs under CPU,
//! wall-clock, and memory limits.
//!
//! A job's child process is put in its own process group. Limits are
//! enforced twice over: rlimits on the child (address space, per-
//! process CPU) and a 100 ms watchdog in the harness that samples the
//! whole group through `/proc` — CPU time and resident set size are
//! summed over the tree, so portfolio solvers that fork are accounted
//! like a single job. On breach the entire group is killed and the
//! verdict is `unknown`.

use std::collections::BTreeMap;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::{Child, Command, Stdio};
use std::sync::mpsc;
use std::sync::{Arc, Condvar, Mutex};
use std::time::{Duration, Instant};

use crate::classify::TrackId;

/// Extra seconds a job may overshoot a limit before the harness is
/// considered to have failed enforcement.
pub const ENFORCEMENT_SLACK_S: f64 = 2.0;

const WATCHDOG_INTERVAL: Duration = Duration::from_millis(100);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Sat,
    Unsat,
    Unknown,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Verdict::Sat => write!(f, "sat"),
            Verdict::Unsat => write!(f, "unsat"),
            Verdict::Unknown => write!(f, "unknown"),
        }
    }
}

/// How a job's process ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    /// Exited on its own with this code.
    Normal(i32),
    /// Killed by this signal (not by the harness).
    Signaled(i32),
    WallTimeout,
    CpuTimeout,
    MemoryExceeded,
    /// The solver could not be launched at all.
    LaunchError,
    /// Record came from an external job-information CSV; the real exit
    /// status is unknown.
    Imported,
}

impl ExitStatus {
    fn is_clean(&self) -> bool {
        matches!(self, ExitStatus::Normal(0) | ExitStatus::Imported)
    }
}

impl std::fmt::Display for ExitStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ExitStatus::Normal(code) => write!(f, "exit({})", code),
            ExitStatus::Signaled(sig) => write!(f, "signal({})", sig),
            ExitStatus::WallTimeout => write!(f, "wall-timeout"),
            ExitStatus::CpuTimeout => write!(f, "cpu-timeout"),
            ExitStatus::MemoryExceeded => write!(f, "memout"),
            ExitStatus::LaunchError => write!(f, "launch-error"),
            ExitStatus::Imported => write!(f, "imported"),
        }
    }
}

/// Maps a solver's first output line to a verdict. Matching is exact
/// and case-sensitive (`UNSAT` does not count); anything else,
/// including empty output or an unclean exit, is `unknown`.
pub fn normalize_verdict(first_line: &str, status: &ExitStatus) -> Verdict {
    if !status.is_clean() {
        return Verdict::Unknown;
    }
    match first_line.trim() {
        "sat" => Verdict::Sat,
        "unsat" => Verdict::Unsat,
        _ => Verdict::Unknown,
    }
}

/// One solver configuration and how to launch it. The command template
/// must contain `{benchmark}` exactly once; `{output_dir}` is optional
/// and replaced with a scratch directory per job.
#[derive(Debug, Clone)]
pub struct SolverSpec {
    pub name: String,
    pub configuration: String,
    /// false marks a hors-concours entry: evaluated but not ranked.
    pub competing: bool,
    pub command: String,
}

impl SolverSpec {
    pub fn new(
        name: impl Into<String>,
        configuration: impl Into<String>,
        competing: bool,
        command: impl Into<String>,
    ) -> Result<SolverSpec, RunnerError> {
        let spec = SolverSpec {
            name: name.into(),
            configuration: configuration.into(),
            competing,
            command: command.into(),
        };
        let occurrences = spec.command.matches("{benchmark}").count();
        if occurrences != 1 {
            return Err(RunnerError::BadTemplate {
                solver: spec.name,
                msg: format!(
                    "command template must contain `{{benchmark}}` exactly once, found {}",
                    occurrences
                ),
            });
        }
        Ok(spec)
    }

    fn argv(&self, benchmark: &Path, output_dir: &Path) -> Vec<String> {
        self.command
            .split_whitespace()
            .map(|part| {
                part.replace("{benchmark}", &benchmark.to_string_lossy())
                    .replace("{output_dir}", &output_dir.to_string_lossy())
            })
            .collect()
    }

    /// Builds specs from a StarExec-style solver package: a directory
    /// whose `bin/` holds `starexec_run_<configuration>` entry scripts
    /// taking the benchmark path as last argument.
    pub fn from_package_dir(dir: &Path, competing: bool) -> Result<Vec<SolverSpec>, RunnerError> {
        let name = dir
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_else(|| "solver".into());
        let bin = dir.join("bin");
        let mut specs = Vec::new();
        let entries = std::fs::read_dir(&bin).map_err(|e| RunnerError::Io {
            path: bin.display().to_string(),
            msg: e.to_string(),
        })?;
        let mut scripts: Vec<PathBuf> = entries
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| {
                p.file_name()
                    .and_then(|n| n.to_str())
                    .is_some_and(|n| n.starts_with("starexec_run_"))
            })
            .collect();
        scripts.sort();
        for script in scripts {
            let file = script.file_name().unwrap().to_string_lossy().into_owned();
            let configuration = file.trim_start_matches("starexec_run_").to_string();
            specs.push(SolverSpec::new(
                name.clone(),
                configuration,
                competing,
                format!("{} {{benchmark}}", script.display()),
            )?);
        }
        if specs.is_empty() {
            return Err(RunnerError::Io {
                path: bin.display().to_string(),
                msg: "no starexec_run_* entry scripts found".into(),
            });
        }
        Ok(specs)
    }
}

/// Parses a solver spec file: one
/// `<name>\t<configuration>\t<competing>\t<command template>` per line.
pub fn parse_solver_specs(text: &str) -> Result<Vec<SolverSpec>, RunnerError> {
    let mut specs: Vec<SolverSpec> = Vec::new();
    for (index, line) in text.lines().enumerate() {
        let line = line.trim_end();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.splitn(4, '\t').collect();
        if fields.len() != 4 {
            return Err(RunnerError::BadTemplate {
                solver: format!("line {}", index + 1),
                msg: "expected `<name>\\t<configuration>\\t<competing>\\t<command>`".into(),
            });
        }
        let competing = match fields[2] {
            "yes" | "true" | "competing" => true,
            "no" | "false" | "hors-concours" => false,
            other => {
                return Err(RunnerError::BadTemplate {
                    solver: fields[0].to_string(),
                    msg: format!("bad competing flag `{}`", other),
                })
            }
        };
        let spec = SolverSpec::new(fields[0], fields[1], competing, fields[3])?;
        if specs
            .iter()
            .any(|s| s.name == spec.name && s.configuration == spec.configuration)
        {
            return Err(RunnerError::BadTemplate {
                solver: spec.name,
                msg: "duplicate (name, configuration)".into(),
            });
        }
        specs.push(spec);
    }
    Ok(specs)
}

#[derive(Debug, Clone, thiserror::Error)]
pub enum RunnerError {
    #[error("solver `{solver}`: {msg}")]
    BadTemplate { solver: String, msg: String },
    #[error("{path}: {msg}")]
    Io { path: String, msg: String },
}

/// CPU, wall-clock, and memory budget for one job. `cpu_seconds` is
/// absent only for the parallel-track profile, which is wall-clock
/// limited.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResourceLimits {
    pub cpu_seconds: Option<f64>,
    pub wall_seconds: f64,
    pub memory_bytes: u64,
}

pub const MEMORY_64_GB: u64 = 64 * 1024 * 1024 * 1024;

/// Test runs check solver set-up; competition runs decide the ranking.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LimitsProfile {
    Test,
    Competition,
}

impl std::str::FromStr for LimitsProfile {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "test" => Ok(LimitsProfile::Test),
            "competition" => Ok(LimitsProfile::Competition),
            other => Err(format!("unknown profile `{}` (expected test|competition)", other)),
        }
    }
}

impl ResourceLimits {
    /// Per-track limits: 600 s CPU/wall for test runs, 1800 s for
    /// competition runs, 64 GB memory in both; the parallel track gets
    /// a whole node and drops the CPU cap.
    pub fn for_track(track: TrackId, profile: LimitsProfile) -> ResourceLimits {
        let budget = match profile {
            LimitsProfile::Test => 600.0,
            LimitsProfile::Competition => 1800.0,
        };
        let cpu_seconds = if track == TrackId::LraTsPar {
            None
        } else {
            Some(budget)
        };
        ResourceLimits {
            cpu_seconds,
            wall_seconds: budget,
            memory_bytes: MEMORY_64_GB,
        }
    }
}

/// One executed (solver, benchmark) pair.
#[derive(Debug, Clone)]
pub struct JobRecord {
    pub solver: String,
    pub configuration: String,
    pub benchmark: String,
    pub track: TrackId,
    pub verdict: Verdict,
    pub cpu_time_s: f64,
    pub wall_time_s: f64,
    pub status: ExitStatus,
    pub first_line: String,
}

/// Runs one job to completion. Launch failures are retried once and
/// then reported as a record with a launch-error status; this function
/// never panics on solver misbehavior.
pub fn run_job(spec: &SolverSpec, benchmark: &Path, limits: &ResourceLimits) -> JobRecord {
    run_job_for_track(spec, benchmark, limits, TrackId::Unclassified, None)
}

pub fn run_job_for_track(
    spec: &SolverSpec,
    benchmark: &Path,
    limits: &ResourceLimits,
    track: TrackId,
    benchmark_id: Option<&str>,
) -> JobRecord {
    let benchmark_id = benchmark_id
        .map(str::to_string)
        .unwrap_or_else(|| benchmark.to_string_lossy().into_owned());
    let record = |verdict, cpu, wall, status, first_line: String| JobRecord {
        solver: spec.name.clone(),
        configuration: spec.configuration.clone(),
        benchmark: benchmark_id.clone(),
        track,
        verdict,
        cpu_time_s: cpu,
        wall_time_s: wall,
        status,
        first_line,
    };

    let scratch = match tempfile::tempdir() {
        Ok(dir) => dir,
        Err(_) => {
            return record(Verdict::Unknown, 0.0, 0.0, ExitStatus::LaunchError, String::new())
        }
    };
    let argv = spec.argv(benchmark, scratch.path());
    if argv.is_empty() {
        return record(Verdict::Unknown, 0.0, 0.0, ExitStatus::LaunchError, String::new());
    }

    // One retry on launch errors only; timeouts are never retried.
    let mut child = None;
    for _ in 0..2 {
        match spawn_limited(&argv, limits) {
            Ok(c) => {
                child = Some(c);
                break;
            }
            Err(_) => continue,
        }
    }
    let Some(child) = child else {
        return record(Verdict::Unknown, 0.0, 0.0, ExitStatus::LaunchError, String::new());
    };

    let outcome = supervise(child, limits);
    let first_line = outcome
        .stdout
        .lines()
        .find(|l| !l.trim().is_empty())
        .unwrap_or("")
        .to_string();
    let verdict = normalize_verdict(&first_line, &outcome.status);
    record(
        verdict,
        outcome.cpu_time_s,
        outcome.wall_time_s,
        outcome.status,
        first_line,
    )
}

struct JobOutcome {
    status: ExitStatus,
    cpu_time_s: f64,
    wall_time_s: f64,
    stdout: String,
}

fn spawn_limited(argv: &[String], limits: &ResourceLimits) -> std::io::Result<Child> {
    let mut command = Command::new(&argv[0]);
    command
        .args(&argv[1..])
        .stdin(Stdio::null())
        .stdout(Stdio::piped())
        .stderr(Stdio::null());
    #[cfg(unix)]
    {
        use std::os::unix::process::CommandExt;
        let memory = limits.memory_bytes;
        let cpu = limits.cpu_seconds;
        unsafe {
            command.pre_exec(move || {
                libc::setsid();
                let mem_limit = libc::rlimit {
                    rlim_cur: memory as libc::rlim_t,
                    rlim_max: memory as libc::rlim_t,
                };
                libc::setrlimit(libc::RLIMIT_AS, &mem_limit);
                let core = libc::rlimit {
                    rlim_cur: 0,
                    rlim_max: 0,
                };
                libc::setrlimit(libc::RLIMIT_CORE, &core);
                if let Some(cpu) = cpu {
                    // Per-process belt; the group watchdog is the
                    // authoritative tree-wide check.
                    let soft = cpu.ceil() as libc::rlim_t + 1;
                    let cpu_limit = libc::rlimit {
                        rlim_cur: soft,
                        rlim_max: soft + ENFORCEMENT_SLACK_S as libc::rlim_t,
                    };
                    libc::setrlimit(libc::RLIMIT_CPU, &cpu_limit);
                }
                Ok(())
            });
        }
    }
    command.spawn()
}

fn supervise(mut child: Child, limits: &ResourceLimits) -> JobOutcome {
    let start = Instant::now();
    let pid = child.id() as libc::pid_t;

    let mut stdout_pipe = child.stdout.take();
    let reader = std::thread::spawn(move || {
        let mut buf = Vec::new();
        if let Some(pipe) = stdout_pipe.as_mut() {
            let _ = pipe.read_to_end(&mut buf);
        }
        String::from_utf8_lossy(&buf).into_owned()
    });

    let mut kill_status: Option<ExitStatus> = None;
    let mut sampled_cpu = 0.0f64;
    let mut next_sample = Instant::now();
    let (wait_status, rusage_cpu) = loop {
        match try_reap(pid) {
            Reaped::Exited { status, cpu_s } => break (status, cpu_s),
            Reaped::Running => {}
        }
        let wall = start.elapsed().as_secs_f64();
        if kill_status.is_none() && wall > limits.wall_seconds {
            kill_status = Some(ExitStatus::WallTimeout);
            kill_group(pid);
        }
        // Resource sampling over /proc runs on the watchdog cadence;
        // reaping polls faster so short jobs record accurate times.
        if Instant::now() >= next_sample {
            next_sample = Instant::now() + WATCHDOG_INTERVAL;
            let (group_cpu, group_rss) = proc_group_usage(pid);
            sampled_cpu = sampled_cpu.max(group_cpu);
            if kill_status.is_none() {
                if limits.cpu_seconds.is_some_and(|cap| group_cpu > cap) {
                    kill_status = Some(ExitStatus::CpuTimeout);
                } else if group_rss > limits.memory_bytes {
                    kill_status = Some(ExitStatus::MemoryExceeded);
                }
                if kill_status.is_some() {
                    kill_group(pid);
                }
            }
        }
        if kill_status.is_some() {
            // SIGKILL is not ignorable; keep nudging until the group
            // leader is reaped.
            kill_group(pid);
        }
        std::thread::sleep(Duration::from_millis(2));
    };

    let wall_time_s = start.elapsed().as_secs_f64();
    let stdout = reader.join().unwrap_or_default();
    // Make sure no stragglers survive in the group.
    kill_group(pid);
    JobOutcome {
        status: kill_status.unwrap_or(wait_status),
        cpu_time_s: rusage_cpu.max(sampled_cpu),
        wall_time_s,
        stdout,
    }
}

enum Reaped {
    Running,
    Exited { status: ExitStatus, cpu_s: f64 },
}

/// Non-blocking wait that also captures the rusage of the child and
/// every descendant it reaped.
fn try_reap(pid: libc::pid_t) -> Reaped {
    unsafe {
        let mut status: libc::c_int = 0;
        let mut usage: libc::rusage = std::mem::zeroed();
        let r = libc::wait4(pid, &mut status, libc::WNOHANG, &mut usage);
        if r != pid {
            return Reaped::Running;
        }
        let cpu_s = timeval_s(usage.ru_utime) + timeval_s(usage.ru_stime);
        let exit = if libc::WIFEXITED(status) {
            ExitStatus::Normal(libc::WEXITSTATUS(status))
        } else if libc::WIFSIGNALED(status) {
            ExitStatus::Signaled(libc::WTERMSIG(status))
        } else {
            ExitStatus::Normal(-1)
        };
        Reaped::Exited {
            status: exit,
            cpu_s,
        }
    }
}

fn timeval_s(tv: libc::timeval) -> f64 {
    tv.tv_sec as f64 + tv.tv_usec as f64 / 1e6
}

fn kill_group(pid: libc::pid_t) {
    unsafe {
        libc::kill(-pid, libc::SIGKILL);
    }
}

/// Sums CPU seconds and resident set bytes over every live process in
/// the group led by `pgid`. `cutime`/`cstime` cover descendants the
/// group members already reaped.
fn proc_group_usage(pgid: libc::pid_t) -> (f64, u64) {
    let tick = unsafe { libc::sysconf(libc::_SC_CLK_TCK) } as f64;
    let page = unsafe { libc::sysconf(libc::_SC_PAGESIZE) } as u64;
    let mut cpu_ticks = 0u64;
    let mut rss_pages = 0u64;
    let Ok(entries) = std::fs::read_dir("/proc") else {
        return (0.0, 0);
    };
    for entry in entries.flatten() {
        let name = entry.file_name();
        let Some(_pid) = name.to_str().and_then(|s| s.parse::<u32>().ok()) else {
            continue;
        };
        let Ok(stat) = std::fs::read_to_string(entry.path().join("stat")) else {
            continue;
        };
        // comm can contain spaces and parens; fields resume after the
        // last ')'.
        let Some(end) = stat.rfind(')') else { continue };
        let fields: Vec<&str> = stat[end + 1..].split_whitespace().collect();
        let parse = |i: usize| fields.get(i).and_then(|f| f.parse::<i64>().ok());
        if parse(2) != Some(pgid as i64) {
            continue;
        }
        let utime = parse(11).unwrap_or(0).max(0) as u64;
        let stime = parse(12).unwrap_or(0).max(0) as u64;
        let cutime = parse(13).unwrap_or(0).max(0) as u64;
        let cstime = parse(14).unwrap_or(0).max(0) as u64;
        cpu_ticks += utime + stime + cutime + cstime;
        rss_pages += parse(21).unwrap_or(0).max(0) as u64;
    }
    (cpu_ticks as f64 / tick, rss_pages * page)
}

/// One benchmark of a suite destined for execution.
#[derive(Debug, Clone)]
pub struct SuiteBenchmark {
    pub id: String,
    pub track: TrackId,
    pub path: PathBuf,
}

/// When one job ran relative to the suite start, for scheduler
/// auditing.
#[derive(Debug, Clone)]
pub struct JobSpan {
    pub solver: String,
    pub benchmark: String,
    pub exclusive: bool,
    pub start: Duration,
    pub end: Duration,
}

#[derive(Debug)]
pub struct RunOutcome {
    pub records: Vec<JobRecord>,
    pub timeline: Vec<JobSpan>,
}

/// Runs every (spec, benchmark) pair exactly once on a bounded worker
/// pool. Parallel-track jobs weigh as much as the whole pool, so they
/// run exclusively, mirroring a whole-node reservation. Individual
/// failures are recorded per job; the suite always completes.
pub fn run_suite(
    benchmarks: &[SuiteBenchmark],
    specs: &[SolverSpec],
    profile: LimitsProfile,
    slots: usize,
) -> RunOutcome {
    let slots = slots.max(1);
    let semaphore = Arc::new((Mutex::new(slots), Condvar::new()));
    let origin = Instant::now();
    let (tx, rx) = mpsc::channel();
    let mut expected = 0usize;
    std::thread::scope(|scope| {
        for benchmark in benchmarks {
            for spec in specs {
                let weight = if benchmark.track == TrackId::LraTsPar {
                    slots
                } else {
                    1
                };
                acquire(&semaphore, weight);
                let index = expected;
                expected += 1;
                let tx = tx.clone();
                let semaphore = Arc::clone(&semaphore);
                let limits = ResourceLimits::for_track(benchmark.track, profile);
                scope.spawn(move || {
                    let start = origin.elapsed();
                    let record = run_job_for_track(
                        spec,
                        &benchmark.path,
                        &limits,
                        benchmark.track,
                        Some(&benchmark.id),
                    );
                    let span = JobSpan {
                        solver: spec.name.clone(),
                        benchmark: benchmark.id.clone(),
                        exclusive: weight > 1,
                        start,
                        end: origin.elapsed(),
                    };
                    let _ = tx.send((index, record, span));
                    release(&semaphore, weight);
                });
            }
        }
        drop(tx);
    });
    let mut results: BTreeMap<usize, (JobRecord, JobSpan)> = BTreeMap::new();
    while let Ok((index, record, span)) = rx.recv() {
        results.insert(index, (record, span));
    }
    debug_assert_eq!(results.len(), expected);
    let mut records = Vec::with_capacity(expected);
    let mut timeline = Vec::with_capacity(expected);
    for (_, (record, span)) in results {
        records.push(record);
        timeline.push(span);
    }
    RunOutcome { records, timeline }
}

fn acquire(semaphore: &Arc<(Mutex<usize>, Condvar)>, weight: usize) {
    let (lock, cvar) = &**semaphore;
    let mut available = lock.lock().unwrap();
    while *available < weight {
        available = cvar.wait(available).unwrap();
    }
    *available -= weight;
}

fn release(semaphore: &Arc<(Mutex<usize>, Condvar)>, weight: usize) {
    let (lock, cvar) = &**semaphore;
    let mut available = lock.lock().unwrap();
    *available += weight;
    cvar.notify_all();
}
