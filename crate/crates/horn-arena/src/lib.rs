//! horn-arena: a self-contained competition harness for CHC solvers.
//!
//! The pipeline mirrors how a CHC solver competition is run: validate
//! and normalize SMT-LIB benchmarks, classify them into tracks, rate
//! and select a benchmark suite, execute solvers under resource
//! limits, and aggregate results into scores, rankings, unique-solve
//! counts, and inconsistency reports.

pub mod ast;
pub mod classify;
pub mod conformance;
pub mod curate;
pub mod error;
pub mod fingerprint;
pub mod jobs_csv;
pub mod lexer;
pub mod normalize;
pub mod parser;
pub mod printer;
pub mod report;
pub mod runner;
pub mod score;
pub mod sexpr;
pub mod sorts;

pub use ast::{Atom, Clause, ClauseHead, Script, Sort, Term};
pub use classify::{
    assign_track, clause_linearity, detect_theories, is_transition_system, script_linearity,
    Linearity, TheorySet, TrackId,
};
pub use conformance::{validate_conformance, ConformanceReport, Profile, ReportVerdict};
pub use curate::{
    build_suite, rate_benchmark, select_from_repository, Rating, RatingPools, SelectionQuota,
    SuiteManifest,
};
pub use error::{NormalizeError, ParseError};
pub use fingerprint::{canonical_fingerprint, dedup, DedupScope, Digest};
pub use normalize::{merge_queries, normalize};
pub use parser::parse_script;
pub use printer::print_script;
pub use runner::{
    normalize_verdict, run_job, run_suite, JobRecord, ResourceLimits, SolverSpec, Verdict,
};
pub use score::{detect_inconsistencies, rank, standings, Inconsistency, Ranking, SolverStanding};
