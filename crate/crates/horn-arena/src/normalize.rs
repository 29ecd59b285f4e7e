//! Rewrites benchmarks into the strict CHC-COMP form and merges
//! multiple queries into one.

use std::collections::HashSet;

use crate::ast::{Atom, Clause, ClauseHead, PredicateDecl, Script, Sort, Term};
use crate::error::NormalizeError;

/// Puts a parsed script into strict CHC-COMP form: the logic becomes
/// HORN, head arguments become pairwise-distinct fresh variables with
/// defining equalities pushed into the constraint, and compound body
/// atom arguments are flattened the same way. Satisfiability is
/// preserved and already-strict scripts come back structurally
/// unchanged.
pub fn normalize(script: &Script) -> Result<Script, NormalizeError> {
    let mut out = script.clone();
    out.logic = "HORN".into();
    out.command_issues.clear();

    let reserved: HashSet<String> = script.declared_names().map(str::to_string).collect();

    for (index, clause) in out.clauses.iter_mut().enumerate() {
        let mut fresh = FreshNames::new(&reserved, clause);
        let mut equalities: Vec<Term> = Vec::new();
        let mut new_binders: Vec<(String, Sort)> = Vec::new();

        if let ClauseHead::Predicate(atom) = &mut clause.head {
            let decl = script
                .predicate(&atom.predicate)
                .ok_or_else(|| NormalizeError {
                    clause_index: index,
                    msg: format!("undeclared predicate `{}`", atom.predicate),
                })?;
            let mut seen: HashSet<String> = HashSet::new();
            for (arg, sort) in atom.args.iter_mut().zip(&decl.arg_sorts) {
                let keep = match arg {
                    Term::Var(name) => seen.insert(name.clone()),
                    _ => false,
                };
                if !keep {
                    let name = fresh.next();
                    let original = std::mem::replace(arg, Term::var(&name));
                    equalities.push(Term::equality(Term::var(&name), original));
                    new_binders.push((name, sort.clone()));
                }
            }
        }

        for atom in &mut clause.body_atoms {
            let decl = script
                .predicate(&atom.predicate)
                .ok_or_else(|| NormalizeError {
                    clause_index: index,
                    msg: format!("undeclared predicate `{}`", atom.predicate),
                })?;
            for (arg, sort) in atom.args.iter_mut().zip(&decl.arg_sorts) {
                if !matches!(arg, Term::Var(_)) {
                    let name = fresh.next();
                    let original = std::mem::replace(arg, Term::var(&name));
                    equalities.push(Term::equality(Term::var(&name), original));
                    new_binders.push((name, sort.clone()));
                }
            }
        }

        if !equalities.is_empty() {
            let mut parts = vec![clause.constraint.clone()];
            parts.extend(equalities);
            clause.constraint = Term::conjunction(parts);
            clause.bound_vars.extend(new_binders);
        }
    }
    Ok(out)
}

struct FreshNames {
    used: HashSet<String>,
    counter: usize,
}

impl FreshNames {
    fn new(reserved: &HashSet<String>, clause: &Clause) -> FreshNames {
        let mut used = reserved.clone();
        used.extend(clause.bound_vars.iter().map(|(n, _)| n.clone()));
        FreshNames { used, counter: 0 }
    }

    fn next(&mut self) -> String {
        loop {
            let candidate = format!("v!{}", self.counter);
            self.counter += 1;
            if self.used.insert(candidate.clone()) {
                return candidate;
            }
        }
    }
}

/// Replaces the `q` query clauses of a script (`q >= 2`) by `q` clauses
/// targeting a fresh nullary predicate plus the single query
/// `fresh => false`. The result is equisatisfiable and has exactly one
/// query; scripts with at most one query are returned unchanged.
pub fn merge_queries(script: &Script) -> Script {
    if script.query_count() <= 1 {
        return script.clone();
    }
    let mut out = script.clone();
    let taken: HashSet<String> = script.declared_names().map(str::to_string).collect();
    let mut name = String::from("merged_query");
    let mut suffix = 0usize;
    while taken.contains(&name) {
        name = format!("merged_query!{}", suffix);
        suffix += 1;
    }
    out.predicates.push(PredicateDecl {
        name: name.clone(),
        arg_sorts: Vec::new(),
    });
    let goal = Atom {
        predicate: name.clone(),
        args: Vec::new(),
    };
    for clause in &mut out.clauses {
        if clause.head.is_false() {
            clause.head = ClauseHead::Predicate(goal.clone());
        }
    }
    out.clauses.push(Clause {
        bound_vars: Vec::new(),
        body_atoms: vec![goal],
        constraint: Term::truth(),
        head: ClauseHead::False,
        position: None,
    });
    out
}
