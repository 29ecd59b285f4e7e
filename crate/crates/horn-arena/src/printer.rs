//! Deterministic SMT-LIB printer. `parse(print(s))` is structurally
//! identical to `s` for every parsed script; the canonical form used
//! for fingerprinting is the same text with `set-info` lines dropped.

use crate::ast::{Atom, Clause, ClauseHead, Script, Sort, Term};
use crate::lexer::is_simple_symbol;

/// Prints a whole script, one command per line.
pub fn print_script(script: &Script) -> String {
    print_with(script, true)
}

/// Canonical text for fingerprinting: comments and whitespace are
/// already gone (this is a print of the AST) and metadata is excluded.
pub fn canonical_form(script: &Script) -> String {
    print_with(script, false)
}

fn print_with(script: &Script, include_metadata: bool) -> String {
    let mut out = String::new();
    if !script.logic.is_empty() {
        out.push_str("(set-logic ");
        push_symbol(&mut out, &script.logic);
        out.push_str(")\n");
    }
    if include_metadata {
        for (keyword, value) in &script.metadata {
            out.push_str("(set-info :");
            out.push_str(keyword);
            if let Some(value) = value {
                out.push(' ');
                out.push_str(value);
            }
            out.push_str(")\n");
        }
    }
    if !script.datatypes.is_empty() {
        // One block for all datatypes so mutually recursive groups
        // that arrived in separate commands stay well-formed.
        out.push_str("(declare-datatypes (");
        for (i, datatype) in script.datatypes.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            out.push('(');
            push_symbol(&mut out, &datatype.name);
            out.push_str(" 0)");
        }
        out.push_str(") (");
        for (i, datatype) in script.datatypes.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            out.push('(');
            for (j, ctor) in datatype.constructors.iter().enumerate() {
                if j > 0 {
                    out.push(' ');
                }
                out.push('(');
                push_symbol(&mut out, &ctor.name);
                for (sel_name, sel_sort) in &ctor.selectors {
                    out.push_str(" (");
                    push_symbol(&mut out, sel_name);
                    out.push(' ');
                    push_sort(&mut out, sel_sort);
                    out.push(')');
                }
                out.push(')');
            }
            out.push(')');
        }
        out.push_str("))\n");
    }
    for pred in &script.predicates {
        out.push_str("(declare-fun ");
        push_symbol(&mut out, &pred.name);
        out.push_str(" (");
        for (i, sort) in pred.arg_sorts.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            push_sort(&mut out, sort);
        }
        out.push_str(") Bool)\n");
    }
    for clause in &script.clauses {
        push_clause(&mut out, clause);
    }
    out.push_str("(check-sat)\n");
    if script.has_exit {
        out.push_str("(exit)\n");
    }
    out
}

fn push_clause(out: &mut String, clause: &Clause) {
    out.push_str("(assert ");
    if !clause.bound_vars.is_empty() {
        out.push_str("(forall (");
        for (i, (name, sort)) in clause.bound_vars.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            out.push('(');
            push_symbol(out, name);
            out.push(' ');
            push_sort(out, sort);
            out.push(')');
        }
        out.push_str(") ");
    }
    let mut premises: Vec<String> = Vec::new();
    for atom in &clause.body_atoms {
        let mut s = String::new();
        push_atom(&mut s, atom);
        premises.push(s);
    }
    if !clause.constraint.is_truth() {
        let mut s = String::new();
        push_term(&mut s, &clause.constraint);
        premises.push(s);
    }
    if premises.is_empty() {
        push_head(out, &clause.head);
    } else {
        out.push_str("(=> ");
        if premises.len() == 1 {
            out.push_str(&premises[0]);
        } else {
            out.push_str("(and ");
            out.push_str(&premises.join(" "));
            out.push(')');
        }
        out.push(' ');
        push_head(out, &clause.head);
        out.push(')');
    }
    if !clause.bound_vars.is_empty() {
        out.push(')');
    }
    out.push_str(")\n");
}

fn push_head(out: &mut String, head: &ClauseHead) {
    match head {
        ClauseHead::False => out.push_str("false"),
        ClauseHead::Predicate(atom) => push_atom(out, atom),
    }
}

fn push_atom(out: &mut String, atom: &Atom) {
    if atom.args.is_empty() {
        push_symbol(out, &atom.predicate);
        return;
    }
    out.push('(');
    push_symbol(out, &atom.predicate);
    for arg in &atom.args {
        out.push(' ');
        push_term(out, arg);
    }
    out.push(')');
}

pub(crate) fn push_term(out: &mut String, term: &Term) {
    match term {
        Term::Var(name) => push_symbol(out, name),
        Term::Numeral(n) => {
            if n.sign() == num_bigint::Sign::Minus {
                out.push_str("(- ");
                out.push_str(&n.magnitude().to_string());
                out.push(')');
            } else {
                out.push_str(&n.to_string());
            }
        }
        Term::Decimal(d) => {
            if d.is_negative() {
                out.push_str("(- ");
                out.push_str(&d.to_string());
                out.push(')');
            } else {
                out.push_str(&d.to_string());
            }
        }
        Term::App(op, args) => {
            if args.is_empty() {
                push_symbol(out, op);
            } else {
                out.push('(');
                push_symbol(out, op);
                for arg in args {
                    out.push(' ');
                    push_term(out, arg);
                }
                out.push(')');
            }
        }
        Term::Tester(ctor, arg) => {
            out.push_str("((_ is ");
            push_symbol(out, ctor);
            out.push_str(") ");
            push_term(out, arg);
            out.push(')');
        }
    }
}

fn push_sort(out: &mut String, sort: &Sort) {
    match sort {
        Sort::Bool => out.push_str("Bool"),
        Sort::Int => out.push_str("Int"),
        Sort::Real => out.push_str("Real"),
        Sort::Array(index, element) => {
            out.push_str("(Array ");
            push_sort(out, index);
            out.push(' ');
            push_sort(out, element);
            out.push(')');
        }
        Sort::Datatype(name) => push_symbol(out, name),
    }
}

fn push_symbol(out: &mut String, name: &str) {
    if is_simple_symbol(name) {
        out.push_str(name);
    } else {
        out.push('|');
        out.push_str(name);
        out.push('|');
    }
}
