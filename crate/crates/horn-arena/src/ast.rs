//! AST for the CHC profile of SMT-LIB 2.6.
//!
//! A [`Script`] holds the command sequence
//! `set-logic, set-info*, declare-datatypes*, declare-fun*, assert*,
//! check-sat, exit?` in grouped form. Clause bodies are kept flattened:
//! uninterpreted applications live in `body_atoms`, everything else is
//! conjoined into `constraint`, so no predicate ever occurs inside a
//! constraint term.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::lexer::Position;

/// Sort of a term: the CHC-COMP tracks only need Bool, Int, Real,
/// Arrays, and declared algebraic datatypes.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Sort {
    Bool,
    Int,
    Real,
    Array(Box<Sort>, Box<Sort>),
    Datatype(String),
}

impl Sort {
    pub fn array(index: Sort, element: Sort) -> Sort {
        Sort::Array(Box::new(index), Box::new(element))
    }

    /// Collects every datatype name mentioned in this sort (nested
    /// array index/element sorts included).
    pub fn datatype_names<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            Sort::Datatype(name) => out.push(name),
            Sort::Array(index, element) => {
                index.datatype_names(out);
                element.datatype_names(out);
            }
            _ => {}
        }
    }
}

impl std::fmt::Display for Sort {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Sort::Bool => write!(f, "Bool"),
            Sort::Int => write!(f, "Int"),
            Sort::Real => write!(f, "Real"),
            Sort::Array(index, element) => write!(f, "(Array {} {})", index, element),
            Sort::Datatype(name) => write!(f, "{}", name),
        }
    }
}

/// Exact decimal literal, kept as `unscaled * 10^-scale`.
///
/// The representation is canonical: `scale >= 1` and the unscaled value
/// has no trailing zero unless removing it would drop the last
/// fractional digit. `1.50` and `1.5` therefore compare equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Decimal {
    unscaled: BigInt,
    scale: u32,
}

impl Decimal {
    pub fn new(mut unscaled: BigInt, mut scale: u32) -> Decimal {
        if scale == 0 {
            scale = 1;
            unscaled *= 10;
        }
        let ten = BigInt::from(10);
        while scale > 1 && (&unscaled % &ten).is_zero() {
            unscaled /= &ten;
            scale -= 1;
        }
        Decimal { unscaled, scale }
    }

    pub fn unscaled(&self) -> &BigInt {
        &self.unscaled
    }

    pub fn scale(&self) -> u32 {
        self.scale
    }

    pub fn is_negative(&self) -> bool {
        self.unscaled.is_negative()
    }

    pub fn negate(&self) -> Decimal {
        Decimal {
            unscaled: -self.unscaled.clone(),
            scale: self.scale,
        }
    }
}

impl std::fmt::Display for Decimal {
    /// Renders the magnitude only; a negative decimal is printed by the
    /// term printer as `(- d)`.
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let digits = self.unscaled.magnitude().to_string();
        let scale = self.scale as usize;
        if digits.len() > scale {
            let (int_part, frac_part) = digits.split_at(digits.len() - scale);
            write!(f, "{}.{}", int_part, frac_part)
        } else {
            write!(f, "0.{}{}", "0".repeat(scale - digits.len()), digits)
        }
    }
}

/// Quantifier-free term over the background theories. Uninterpreted
/// predicates never appear here; they live in [`Atom`]s.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    /// Reference to a clause-bound variable.
    Var(String),
    /// Integer literal (sign folded in, so `(- 1)` and `-1` coincide).
    Numeral(BigInt),
    /// Exact decimal literal.
    Decimal(Decimal),
    /// Application of a theory operator, datatype constructor, or
    /// selector. Nullary symbols (`true`, `zero`, ...) have no args.
    App(String, Vec<Term>),
    /// Datatype tester `((_ is ctor) term)`.
    Tester(String, Box<Term>),
}

impl Term {
    pub fn truth() -> Term {
        Term::App("true".into(), Vec::new())
    }

    pub fn is_truth(&self) -> bool {
        matches!(self, Term::App(op, args) if op == "true" && args.is_empty())
    }

    pub fn var(name: impl Into<String>) -> Term {
        Term::Var(name.into())
    }

    pub fn app(op: impl Into<String>, args: Vec<Term>) -> Term {
        Term::App(op.into(), args)
    }

    pub fn equality(lhs: Term, rhs: Term) -> Term {
        Term::app("=", vec![lhs, rhs])
    }

    /// Conjunction of `parts`, flattened: empty -> `true`, singleton ->
    /// the part itself.
    pub fn conjunction(parts: Vec<Term>) -> Term {
        let mut flat = Vec::with_capacity(parts.len());
        for part in parts {
            match part {
                Term::App(op, args) if op == "and" => flat.extend(args),
                other => {
                    if !other.is_truth() {
                        flat.push(other);
                    }
                }
            }
        }
        match flat.len() {
            0 => Term::truth(),
            1 => flat.pop().unwrap(),
            _ => Term::app("and", flat),
        }
    }

    /// True when a variable reference occurs anywhere in the term.
    pub fn mentions_variable(&self) -> bool {
        match self {
            Term::Var(_) => true,
            Term::Numeral(_) | Term::Decimal(_) => false,
            Term::App(_, args) => args.iter().any(Term::mentions_variable),
            Term::Tester(_, inner) => inner.mentions_variable(),
        }
    }

    pub fn for_each_subterm<'a>(&'a self, f: &mut impl FnMut(&'a Term)) {
        f(self);
        match self {
            Term::App(_, args) => args.iter().for_each(|t| t.for_each_subterm(f)),
            Term::Tester(_, inner) => inner.for_each_subterm(f),
            _ => {}
        }
    }
}

/// Application of a declared uninterpreted predicate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Atom {
    pub predicate: String,
    pub args: Vec<Term>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClauseHead {
    Predicate(Atom),
    False,
}

impl ClauseHead {
    pub fn is_false(&self) -> bool {
        matches!(self, ClauseHead::False)
    }

    pub fn atom(&self) -> Option<&Atom> {
        match self {
            ClauseHead::Predicate(atom) => Some(atom),
            ClauseHead::False => None,
        }
    }
}

/// One universally closed Horn clause: `body_atoms /\ constraint => head`.
#[derive(Debug, Clone)]
pub struct Clause {
    pub bound_vars: Vec<(String, Sort)>,
    pub body_atoms: Vec<Atom>,
    pub constraint: Term,
    pub head: ClauseHead,
    /// Source position of the defining `assert`, for diagnostics.
    /// Not part of structural equality.
    pub position: Option<Position>,
}

impl PartialEq for Clause {
    fn eq(&self, other: &Self) -> bool {
        self.bound_vars == other.bound_vars
            && self.body_atoms == other.body_atoms
            && self.constraint == other.constraint
            && self.head == other.head
    }
}

impl Eq for Clause {}

impl Clause {
    pub fn sort_of_var(&self, name: &str) -> Option<&Sort> {
        self.bound_vars
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, s)| s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstructorDecl {
    pub name: String,
    /// Typed selectors, in declaration order.
    pub selectors: Vec<(String, Sort)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DatatypeDecl {
    pub name: String,
    pub constructors: Vec<ConstructorDecl>,
}

/// Uninterpreted relation declaration; the codomain is always Bool.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PredicateDecl {
    pub name: String,
    pub arg_sorts: Vec<Sort>,
}

/// Structural irregularities observed while parsing the command
/// sequence. These are lenient-parse facts consumed by conformance
/// checking; they do not participate in structural equality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CommandIssue {
    MissingSetLogic,
    MissingCheckSat,
    OutOfOrder { command: String, position: Position },
    DuplicateCheckSat { position: Position },
}

/// A parsed CHC benchmark.
#[derive(Debug, Clone)]
pub struct Script {
    pub logic: String,
    /// `set-info` pairs: keyword (with leading `:`) and the canonical
    /// text of the attribute value, if any.
    pub metadata: Vec<(String, Option<String>)>,
    pub datatypes: Vec<DatatypeDecl>,
    pub predicates: Vec<PredicateDecl>,
    pub clauses: Vec<Clause>,
    pub has_exit: bool,
    pub command_issues: Vec<CommandIssue>,
}

impl PartialEq for Script {
    fn eq(&self, other: &Self) -> bool {
        self.logic == other.logic
            && self.metadata == other.metadata
            && self.datatypes == other.datatypes
            && self.predicates == other.predicates
            && self.clauses == other.clauses
            && self.has_exit == other.has_exit
    }
}

impl Eq for Script {}

impl Script {
    pub fn empty() -> Script {
        Script {
            logic: "HORN".into(),
            metadata: Vec::new(),
            datatypes: Vec::new(),
            predicates: Vec::new(),
            clauses: Vec::new(),
            has_exit: false,
            command_issues: Vec::new(),
        }
    }

    pub fn predicate(&self, name: &str) -> Option<&PredicateDecl> {
        self.predicates.iter().find(|p| p.name == name)
    }

    pub fn datatype(&self, name: &str) -> Option<&DatatypeDecl> {
        self.datatypes.iter().find(|d| d.name == name)
    }

    /// Looks up a constructor declaration and its owning datatype.
    pub fn constructor(&self, name: &str) -> Option<(&DatatypeDecl, &ConstructorDecl)> {
        self.datatypes.iter().find_map(|d| {
            d.constructors
                .iter()
                .find(|c| c.name == name)
                .map(|c| (d, c))
        })
    }

    /// Looks up a selector: returns the owning datatype, the
    /// constructor it belongs to, and the selector's result sort.
    pub fn selector(&self, name: &str) -> Option<(&DatatypeDecl, &ConstructorDecl, &Sort)> {
        self.datatypes.iter().find_map(|d| {
            d.constructors.iter().find_map(|c| {
                c.selectors
                    .iter()
                    .find(|(n, _)| n == name)
                    .map(|(_, sort)| (d, c, sort))
            })
        })
    }

    /// Number of query clauses (head `false`).
    pub fn query_count(&self) -> usize {
        self.clauses.iter().filter(|c| c.head.is_false()).count()
    }

    /// All names that already occupy the function/predicate namespace:
    /// predicates, datatype names, constructors, and selectors.
    pub fn declared_names(&self) -> impl Iterator<Item = &str> {
        let preds = self.predicates.iter().map(|p| p.name.as_str());
        let dts = self.datatypes.iter().flat_map(|d| {
            std::iter::once(d.name.as_str()).chain(d.constructors.iter().flat_map(|c| {
                std::iter::once(c.name.as_str()).chain(c.selectors.iter().map(|(n, _)| n.as_str()))
            }))
        });
        preds.chain(dts)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimal_canonical_form() {
        let a = Decimal::new(BigInt::from(150), 2);
        let b = Decimal::new(BigInt::from(15), 1);
        assert_eq!(a, b);
        assert_eq!(a.to_string(), "1.5");
        assert_eq!(Decimal::new(BigInt::from(10), 1).to_string(), "1.0");
        assert_eq!(Decimal::new(BigInt::from(25), 2).to_string(), "0.25");
        assert_eq!(Decimal::new(BigInt::from(5), 4).to_string(), "0.0005");
        assert_eq!(Decimal::new(BigInt::from(0), 3).to_string(), "0.0");
    }

    #[test]
    fn conjunction_flattens_and_drops_true() {
        let t = Term::conjunction(vec![
            Term::truth(),
            Term::app("and", vec![Term::var("a"), Term::var("b")]),
            Term::var("c"),
        ]);
        assert_eq!(
            t,
            Term::app("and", vec![Term::var("a"), Term::var("b"), Term::var("c")])
        );
        assert!(Term::conjunction(vec![]).is_truth());
        assert_eq!(Term::conjunction(vec![Term::var("x")]), Term::var("x"));
    }

    #[test]
    fn clause_equality_ignores_position() {
        let mk = |pos| Clause {
            bound_vars: vec![("x".into(), Sort::Int)],
            body_atoms: vec![],
            constraint: Term::truth(),
            head: ClauseHead::False,
            position: pos,
        };
        assert_eq!(mk(None), mk(Some(Position { line: 3, col: 9 })));
    }
}
