//! Benchmark rating and suite selection.
//!
//! Benchmarks are rated A/B/C/D against two reference solvers (both
//! solved / only the winner / only the runner-up / neither), then a
//! per-repository quota picks at most `0.2*N` benchmarks from each of
//! A, B, C and `0.4*N` from D. Unmet quota cascades strictly downward:
//! an A shortfall is split equally onto B and C (ceil to B, floor to
//! C), and B/C shortfalls land on D. Nothing ever flows back up, so
//! the number selected is a pure function of the pool sizes and the
//! cap, independent of the sampling seed.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::classify::TrackId;
use crate::fingerprint::Digest;
use crate::runner::Verdict;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rating {
    A,
    B,
    C,
    D,
}

impl Rating {
    pub const ALL: [Rating; 4] = [Rating::A, Rating::B, Rating::C, Rating::D];
}

impl std::fmt::Display for Rating {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Rating::A => write!(f, "A"),
            Rating::B => write!(f, "B"),
            Rating::C => write!(f, "C"),
            Rating::D => write!(f, "D"),
        }
    }
}

impl std::str::FromStr for Rating {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "A" => Ok(Rating::A),
            "B" => Ok(Rating::B),
            "C" => Ok(Rating::C),
            "D" => Ok(Rating::D),
            other => Err(format!("unknown rating `{}`", other)),
        }
    }
}

/// Reference solvers used for rating, with their per-solver timeouts.
/// The defaults mirror the previous edition's winner and runner-up
/// setup: 5 s for the winner, 10 s for the runner-up (the latter
/// compensating for JVM start-up).
#[derive(Debug, Clone)]
pub struct RaterConfig {
    pub winner_command: String,
    pub winner_timeout_s: f64,
    pub runner_up_command: String,
    pub runner_up_timeout_s: f64,
}

impl Default for RaterConfig {
    fn default() -> Self {
        RaterConfig {
            winner_command: String::new(),
            winner_timeout_s: 5.0,
            runner_up_command: String::new(),
            runner_up_timeout_s: 10.0,
        }
    }
}

fn solved(verdict: Verdict, time_s: f64, timeout_s: f64) -> bool {
    matches!(verdict, Verdict::Sat | Verdict::Unsat) && time_s <= timeout_s
}

/// A if both reference solvers solved the benchmark, B if only the
/// winner, C if only the runner-up, D if neither.
pub fn rate_benchmark(
    winner: (Verdict, f64),
    runner_up: (Verdict, f64),
    cfg: &RaterConfig,
) -> Rating {
    let by_winner = solved(winner.0, winner.1, cfg.winner_timeout_s);
    let by_runner_up = solved(runner_up.0, runner_up.1, cfg.runner_up_timeout_s);
    match (by_winner, by_runner_up) {
        (true, true) => Rating::A,
        (true, false) => Rating::B,
        (false, true) => Rating::C,
        (false, false) => Rating::D,
    }
}

/// Per-rating pools of benchmark ids for one repository.
#[derive(Debug, Clone, Default)]
pub struct RatingPools {
    pub a: Vec<String>,
    pub b: Vec<String>,
    pub c: Vec<String>,
    pub d: Vec<String>,
}

impl RatingPools {
    pub fn pool(&self, rating: Rating) -> &[String] {
        match rating {
            Rating::A => &self.a,
            Rating::B => &self.b,
            Rating::C => &self.c,
            Rating::D => &self.d,
        }
    }

    pub fn insert(&mut self, rating: Rating, id: String) {
        match rating {
            Rating::A => self.a.push(id),
            Rating::B => self.b.push(id),
            Rating::C => self.c.push(id),
            Rating::D => self.d.push(id),
        }
    }
}

/// Selection cap for one repository. The per-rating targets are
/// `floor(0.2*N)` for A, B, C and `floor(0.4*N)` for D; floor losses
/// are not redistributed.
#[derive(Debug, Clone)]
pub struct SelectionQuota {
    pub repository: String,
    pub cap: usize,
}

impl SelectionQuota {
    pub fn abc_target(&self) -> usize {
        self.cap / 5
    }

    pub fn d_target(&self) -> usize {
        self.cap * 2 / 5
    }
}

/// How many benchmarks the quota/cascade takes from each rating for
/// the given pool sizes. Pure integer arithmetic, no sampling.
pub fn selection_counts(pool_sizes: [usize; 4], quota: &SelectionQuota) -> [usize; 4] {
    let [a, b, c, d] = pool_sizes;
    let abc = quota.abc_target();
    let take_a = a.min(abc);
    let deficit_a = abc - take_a;
    let b_target = abc + deficit_a.div_ceil(2);
    let c_target = abc + deficit_a / 2;
    let take_b = b.min(b_target);
    let take_c = c.min(c_target);
    let d_target = quota.d_target() + (b_target - take_b) + (c_target - take_c);
    let take_d = d.min(d_target);
    [take_a, take_b, take_c, take_d]
}

/// Draws the selection for one repository: per pool, a seeded uniform
/// shuffle (the reproducible replacement for `sort -R | head -n`)
/// followed by taking the pool's share of the quota. Deterministic in
/// `(pools, quota, seed)`; the resulting counts do not depend on the
/// seed at all.
pub fn select_from_repository(
    pools: &RatingPools,
    quota: &SelectionQuota,
    seed: u64,
) -> Vec<String> {
    let counts = selection_counts(
        [pools.a.len(), pools.b.len(), pools.c.len(), pools.d.len()],
        quota,
    );
    let mut picked = Vec::new();
    for (rating, take) in Rating::ALL.into_iter().zip(counts) {
        let mut ids: Vec<&String> = pools.pool(rating).iter().collect();
        // Sort before shuffling so the draw does not depend on the
        // order the pool was assembled in.
        ids.sort();
        let pool_seed = mix_seed(seed, &[&quota.repository, &rating.to_string()]);
        shuffle(&mut ids, pool_seed);
        picked.extend(ids.into_iter().take(take).cloned());
    }
    picked
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e3779b97f4a7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Mixes string context into a seed (FNV-1a over the parts) so each
/// (repository, rating) pool draws from its own stream.
fn mix_seed(seed: u64, parts: &[&str]) -> u64 {
    let mut hash = 0xcbf29ce484222325u64 ^ seed;
    for part in parts {
        for byte in part.bytes() {
            hash ^= byte as u64;
            hash = hash.wrapping_mul(0x100000001b3);
        }
        hash ^= 0xff;
        hash = hash.wrapping_mul(0x100000001b3);
    }
    hash
}

/// Seeded Fisher-Yates.
fn shuffle<T>(items: &mut [T], seed: u64) {
    let mut state = seed;
    for i in (1..items.len()).rev() {
        let j = (splitmix64(&mut state) % (i as u64 + 1)) as usize;
        items.swap(i, j);
    }
}

/// Everything the manifest needs to know about one benchmark.
#[derive(Debug, Clone)]
pub struct BenchmarkMeta {
    pub track: TrackId,
    pub rating: Rating,
    pub digest: Digest,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifestEntry {
    pub repository: String,
    pub id: String,
    pub track: TrackId,
    pub rating: Rating,
    pub digest: Digest,
}

/// A cross-repository duplicate found while assembling the manifest:
/// the kept entry plus every (repository, id) that carried the same
/// digest.
#[derive(Debug, Clone)]
pub struct DuplicateProvenance {
    pub digest: Digest,
    pub kept: (String, String),
    pub also: Vec<(String, String)>,
}

/// The frozen, seed-stamped benchmark suite for a competition run.
#[derive(Debug, Clone)]
pub struct SuiteManifest {
    pub entries: Vec<ManifestEntry>,
    pub seed: u64,
    /// Per-repository selected counts (before digest deduplication).
    pub totals: BTreeMap<String, usize>,
    pub duplicates: Vec<DuplicateProvenance>,
}

#[derive(Debug, Clone, thiserror::Error)]
pub enum CurateError {
    #[error("selection references unknown benchmark `{repository}/{id}`")]
    UnknownBenchmark { repository: String, id: String },
    #[error("malformed {what} at line {line}: {msg}")]
    Malformed {
        what: &'static str,
        line: usize,
        msg: String,
    },
}

/// Resolves per-repository selections into a manifest: entries are
/// ordered by (repository, id), digests are unique (cross-repository
/// duplicates are kept once with dual provenance), and the seed is
/// recorded for reproducibility.
pub fn build_suite(
    selections: &[(String, Vec<String>)],
    corpus: &BTreeMap<(String, String), BenchmarkMeta>,
    seed: u64,
) -> Result<SuiteManifest, CurateError> {
    let mut resolved: Vec<ManifestEntry> = Vec::new();
    let mut totals: BTreeMap<String, usize> = BTreeMap::new();
    for (repository, ids) in selections {
        *totals.entry(repository.clone()).or_default() += ids.len();
        for id in ids {
            let key = (repository.clone(), id.clone());
            let meta = corpus
                .get(&key)
                .ok_or_else(|| CurateError::UnknownBenchmark {
                    repository: repository.clone(),
                    id: id.clone(),
                })?;
            resolved.push(ManifestEntry {
                repository: repository.clone(),
                id: id.clone(),
                track: meta.track,
                rating: meta.rating,
                digest: meta.digest,
            });
        }
    }
    resolved.sort_by(|x, y| (&x.repository, &x.id).cmp(&(&y.repository, &y.id)));

    let mut entries: Vec<ManifestEntry> = Vec::new();
    let mut duplicates: Vec<DuplicateProvenance> = Vec::new();
    let mut seen: BTreeMap<Digest, usize> = BTreeMap::new();
    for entry in resolved {
        match seen.get(&entry.digest) {
            None => {
                seen.insert(entry.digest, entries.len());
                entries.push(entry);
            }
            Some(&kept_index) => {
                let kept = &entries[kept_index];
                let provenance = (entry.repository.clone(), entry.id.clone());
                match duplicates.iter_mut().find(|d| d.digest == entry.digest) {
                    Some(dup) => dup.also.push(provenance),
                    None => duplicates.push(DuplicateProvenance {
                        digest: entry.digest,
                        kept: (kept.repository.clone(), kept.id.clone()),
                        also: vec![provenance],
                    }),
                }
            }
        }
    }
    Ok(SuiteManifest {
        entries,
        seed,
        totals,
        duplicates,
    })
}

impl SuiteManifest {
    /// Tab-separated manifest with the seed and duplicate provenance
    /// in `#` header lines.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# seed: {}", self.seed);
        for (repository, count) in &self.totals {
            let _ = writeln!(out, "# selected: {}\t{}", repository, count);
        }
        for dup in &self.duplicates {
            let also: Vec<String> = dup
                .also
                .iter()
                .map(|(r, i)| format!("{}/{}", r, i))
                .collect();
            let _ = writeln!(
                out,
                "# duplicate: {}\tkept={}/{}\talso={}",
                dup.digest,
                dup.kept.0,
                dup.kept.1,
                also.join(",")
            );
        }
        out.push_str("repository\tid\ttrack\trating\tdigest\n");
        for entry in &self.entries {
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}",
                entry.repository, entry.id, entry.track, entry.rating, entry.digest
            );
        }
        out
    }

    pub fn from_tsv(text: &str) -> Result<SuiteManifest, CurateError> {
        let mut manifest = SuiteManifest {
            entries: Vec::new(),
            seed: 0,
            totals: BTreeMap::new(),
            duplicates: Vec::new(),
        };
        let malformed = |line: usize, msg: String| CurateError::Malformed {
            what: "manifest",
            line,
            msg,
        };
        for (index, line) in text.lines().enumerate() {
            let lineno = index + 1;
            if let Some(rest) = line.strip_prefix("# seed:") {
                manifest.seed = rest
                    .trim()
                    .parse()
                    .map_err(|e| malformed(lineno, format!("bad seed: {}", e)))?;
                continue;
            }
            if line.starts_with('#') || line.is_empty() || line.starts_with("repository\t") {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            if fields.len() != 5 {
                return Err(malformed(
                    lineno,
                    format!("expected 5 columns, found {}", fields.len()),
                ));
            }
            let track: TrackId = fields[2].parse().map_err(|e: String| malformed(lineno, e))?;
            let rating: Rating = fields[3].parse().map_err(|e: String| malformed(lineno, e))?;
            let digest = Digest::from_hex(fields[4])
                .ok_or_else(|| malformed(lineno, "bad digest".into()))?;
            *manifest.totals.entry(fields[0].to_string()).or_default() += 1;
            manifest.entries.push(ManifestEntry {
                repository: fields[0].to_string(),
                id: fields[1].to_string(),
                track,
                rating,
                digest,
            });
        }
        Ok(manifest)
    }
}

/// Parses a selection plan: one `<repository>\t<N_r>` pair per line,
/// `#` comments allowed. The cap is operator input, never invented.
pub fn parse_selection_plan(text: &str) -> Result<Vec<SelectionQuota>, CurateError> {
    let mut quotas = Vec::new();
    for (index, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (repository, cap) = line.split_once('\t').ok_or(CurateError::Malformed {
            what: "selection plan",
            line: index + 1,
            msg: "expected `<repository>\\t<N_r>`".into(),
        })?;
        let cap: usize = cap.trim().parse().map_err(|e| CurateError::Malformed {
            what: "selection plan",
            line: index + 1,
            msg: format!("bad cap: {}", e),
        })?;
        quotas.push(SelectionQuota {
            repository: repository.to_string(),
            cap,
        });
    }
    Ok(quotas)
}

/// Parses a rating table: one `<benchmark>\t<rating>` pair per line.
pub fn parse_rating_table(text: &str) -> Result<Vec<(String, Rating)>, CurateError> {
    let mut ratings = Vec::new();
    for (index, line) in text.lines().enumerate() {
        let line = line.trim_end();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (benchmark, rating) = line.split_once('\t').ok_or(CurateError::Malformed {
            what: "rating table",
            line: index + 1,
            msg: "expected `<benchmark>\\t<rating>`".into(),
        })?;
        let rating: Rating = rating
            .trim()
            .parse()
            .map_err(|e: String| CurateError::Malformed {
                what: "rating table",
                line: index + 1,
                msg: e,
            })?;
        ratings.push((benchmark.to_string(), rating));
    }
    Ok(ratings)
}
