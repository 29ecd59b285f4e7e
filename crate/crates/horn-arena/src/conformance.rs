//! Conformance checking against the strict CHC-COMP profile: HORN
//! logic, the canonical command sequence, and clause heads that apply
//! a predicate to pairwise-distinct bound variables (or are `false`).
//! Body atoms must apply predicates to variables, not compound terms.
//!
//! The lenient profile runs the same checks but treats everything the
//! normalizer can repair as a finding rather than a rejection.

use crate::ast::{ClauseHead, CommandIssue, Script, Term};
use crate::error::ParseError;
use crate::lexer::Position;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Profile {
    Strict,
    Lenient,
}

impl std::fmt::Display for Profile {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Profile::Strict => write!(f, "strict"),
            Profile::Lenient => write!(f, "lenient"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportVerdict {
    Conformant,
    Repaired,
    Rejected,
}

impl std::fmt::Display for ReportVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ReportVerdict::Conformant => write!(f, "conformant"),
            ReportVerdict::Repaired => write!(f, "repaired"),
            ReportVerdict::Rejected => write!(f, "rejected"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Violation {
    pub rule: &'static str,
    pub location: Option<Position>,
    pub message: String,
    /// Whether `normalize` can rewrite the construct away.
    pub repairable: bool,
}

#[derive(Debug, Clone)]
pub struct ConformanceReport {
    pub verdict: ReportVerdict,
    pub violations: Vec<Violation>,
    pub profile: Profile,
}

impl ConformanceReport {
    /// Line-oriented record form:
    /// `<file>\t<verdict>\t<rule-id>\t<line>:<col>\t<message>`.
    pub fn to_records(&self, file: &str) -> String {
        if self.violations.is_empty() {
            return format!("{}\t{}\t-\t-\t-\n", file, self.verdict);
        }
        let mut out = String::new();
        for v in &self.violations {
            let loc = v
                .location
                .map(|p| p.to_string())
                .unwrap_or_else(|| "-".into());
            out.push_str(&format!(
                "{}\t{}\t{}\t{}\t{}\n",
                file, self.verdict, v.rule, loc, v.message
            ));
        }
        out
    }
}

/// Record form for a file that failed to parse at all.
pub fn parse_failure_record(file: &str, err: &ParseError) -> String {
    format!(
        "{}\trejected\t{}\t{}\t{}\n",
        file,
        err.reason_code(),
        err.position(),
        err
    )
}

pub fn validate_conformance(script: &Script, profile: Profile) -> ConformanceReport {
    let mut violations = Vec::new();

    for issue in &script.command_issues {
        match issue {
            CommandIssue::MissingSetLogic => violations.push(Violation {
                rule: "missing-set-logic",
                location: None,
                message: "the script does not start with (set-logic HORN)".into(),
                repairable: true,
            }),
            CommandIssue::MissingCheckSat => violations.push(Violation {
                rule: "missing-check-sat",
                location: None,
                message: "the script has no (check-sat)".into(),
                repairable: true,
            }),
            CommandIssue::OutOfOrder { command, position } => violations.push(Violation {
                rule: "command-order",
                location: Some(*position),
                message: format!(
                    "`{}` is out of place in the sequence set-logic, set-info*, \
                     declare-datatypes*, declare-fun*, assert*, check-sat, exit",
                    command
                ),
                repairable: true,
            }),
            CommandIssue::DuplicateCheckSat { position } => violations.push(Violation {
                rule: "command-order",
                location: Some(*position),
                message: "duplicate (check-sat)".into(),
                repairable: true,
            }),
        }
    }

    if !script.logic.is_empty() && script.logic != "HORN" {
        violations.push(Violation {
            rule: "logic-horn",
            location: None,
            message: format!("logic is `{}`, expected HORN", script.logic),
            repairable: true,
        });
    }

    for (index, clause) in script.clauses.iter().enumerate() {
        let loc = clause.position;
        if let ClauseHead::Predicate(atom) = &clause.head {
            let mut seen = Vec::new();
            for arg in &atom.args {
                match arg {
                    Term::Var(name) => {
                        if seen.contains(&name.as_str()) {
                            violations.push(Violation {
                                rule: "head-args-distinct",
                                location: loc,
                                message: format!(
                                    "clause {}: head `{}` repeats variable `{}`",
                                    index, atom.predicate, name
                                ),
                                repairable: true,
                            });
                        } else {
                            seen.push(name);
                        }
                    }
                    _ => violations.push(Violation {
                        rule: "head-args-var",
                        location: loc,
                        message: format!(
                            "clause {}: head `{}` applies a compound term; arguments \
                             must be variables",
                            index, atom.predicate
                        ),
                        repairable: true,
                    }),
                }
            }
        }
        for atom in &clause.body_atoms {
            for arg in &atom.args {
                if !matches!(arg, Term::Var(_)) {
                    violations.push(Violation {
                        rule: "body-args-var",
                        location: loc,
                        message: format!(
                            "clause {}: body atom `{}` applies a compound term; arguments \
                             must be variables",
                            index, atom.predicate
                        ),
                        repairable: true,
                    });
                }
            }
        }

        // Defensive checks for hand-constructed scripts; the parser
        // already guarantees both properties.
        let mut constraint_preds = Vec::new();
        clause.constraint.for_each_subterm(&mut |t| {
            if let Term::App(op, _) = t {
                if script.predicate(op).is_some() {
                    constraint_preds.push(op.clone());
                }
            }
        });
        for pred in constraint_preds {
            violations.push(Violation {
                rule: "constraint-predicate-free",
                location: loc,
                message: format!(
                    "clause {}: predicate `{}` occurs inside the constraint",
                    index, pred
                ),
                repairable: false,
            });
        }
        let mut unbound = Vec::new();
        let mut check_closed = |t: &Term| {
            t.for_each_subterm(&mut |s| {
                if let Term::Var(name) = s {
                    if clause.sort_of_var(name).is_none() {
                        unbound.push(name.clone());
                    }
                }
            })
        };
        check_closed(&clause.constraint);
        for atom in &clause.body_atoms {
            atom.args.iter().for_each(&mut check_closed);
        }
        if let Some(atom) = clause.head.atom() {
            atom.args.iter().for_each(&mut check_closed);
        }
        for name in unbound {
            violations.push(Violation {
                rule: "clause-closed",
                location: loc,
                message: format!("clause {}: variable `{}` is not bound", index, name),
                repairable: false,
            });
        }
    }

    let verdict = match profile {
        Profile::Strict => {
            if violations.is_empty() {
                ReportVerdict::Conformant
            } else {
                ReportVerdict::Rejected
            }
        }
        Profile::Lenient => {
            if violations.is_empty() {
                ReportVerdict::Conformant
            } else if violations.iter().all(|v| v.repairable) {
                ReportVerdict::Repaired
            } else {
                ReportVerdict::Rejected
            }
        }
    };
    ConformanceReport {
        verdict,
        violations,
        profile,
    }
}
