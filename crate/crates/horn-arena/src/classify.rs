//! Track assignment: clause linearity, background-theory detection,
//! and the transition-system shape test.

use std::collections::{HashMap, HashSet};

use crate::ast::{Clause, ClauseHead, Script, Sort, Term};
use crate::sorts::{sort_application, sort_tester, unify, Inferred};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Linearity {
    Linear,
    Nonlinear,
}

impl std::fmt::Display for Linearity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Linearity::Linear => write!(f, "linear"),
            Linearity::Nonlinear => write!(f, "nonlinear"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AdtRecursion {
    None,
    Nonrecursive,
    Recursive,
}

/// Which theories a script touches, plus whether its arithmetic stays
/// linear (no product of two variable-containing factors).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TheorySet {
    pub uses_int: bool,
    pub uses_real: bool,
    pub uses_arrays: bool,
    pub uses_adt: bool,
    pub adt_recursive: AdtRecursion,
    pub arithmetic_linear: bool,
}

impl std::fmt::Display for TheorySet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts: Vec<&str> = Vec::new();
        if self.uses_int {
            parts.push("int");
        }
        if self.uses_real {
            parts.push("real");
        }
        if self.uses_arrays {
            parts.push("arrays");
        }
        match self.adt_recursive {
            AdtRecursion::None => {}
            AdtRecursion::Nonrecursive => parts.push("adt(nonrec)"),
            AdtRecursion::Recursive => parts.push("adt(rec)"),
        }
        if !self.arithmetic_linear {
            parts.push("nonlinear-arith");
        }
        if parts.is_empty() {
            write!(f, "none")
        } else {
            write!(f, "{}", parts.join("+"))
        }
    }
}

/// The eight competition tracks. `LraTsPar` is a run mode over LRA-TS
/// benchmarks and is never produced by classification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TrackId {
    LiaLin,
    LiaNonlin,
    LiaLinArrays,
    LiaNonlinArrays,
    LraTs,
    LraTsPar,
    AdtNonlin,
    LiaNonlinArraysNonrecAdt,
    Unclassified,
}

impl TrackId {
    /// Canonical report order: the order the tracks are listed in.
    pub const ALL: [TrackId; 8] = [
        TrackId::LiaLin,
        TrackId::LiaNonlin,
        TrackId::LiaLinArrays,
        TrackId::LiaNonlinArrays,
        TrackId::LraTs,
        TrackId::LraTsPar,
        TrackId::AdtNonlin,
        TrackId::LiaNonlinArraysNonrecAdt,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            TrackId::LiaLin => "LIA-lin",
            TrackId::LiaNonlin => "LIA-nonlin",
            TrackId::LiaLinArrays => "LIA-lin-Arrays",
            TrackId::LiaNonlinArrays => "LIA-nonlin-Arrays",
            TrackId::LraTs => "LRA-TS",
            TrackId::LraTsPar => "LRA-TS-par",
            TrackId::AdtNonlin => "ADT-nonlin",
            TrackId::LiaNonlinArraysNonrecAdt => "LIA-nonlin-Arrays-nonrecADT",
            TrackId::Unclassified => "Unclassified",
        }
    }
}

impl std::fmt::Display for TrackId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.name())
    }
}

impl std::str::FromStr for TrackId {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        TrackId::ALL
            .iter()
            .copied()
            .chain(std::iter::once(TrackId::Unclassified))
            .find(|t| t.name() == s)
            .ok_or_else(|| format!("unknown track `{}`", s))
    }
}

/// A clause is linear when its premise holds at most one
/// uninterpreted atom.
pub fn clause_linearity(clause: &Clause) -> Linearity {
    if clause.body_atoms.len() <= 1 {
        Linearity::Linear
    } else {
        Linearity::Nonlinear
    }
}

/// A script is linear when every clause is.
pub fn script_linearity(script: &Script) -> Linearity {
    if script
        .clauses
        .iter()
        .all(|c| clause_linearity(c) == Linearity::Linear)
    {
        Linearity::Linear
    } else {
        Linearity::Nonlinear
    }
}

pub fn detect_theories(script: &Script) -> TheorySet {
    let mut flags = TheorySet {
        uses_int: false,
        uses_real: false,
        uses_arrays: false,
        uses_adt: !script.datatypes.is_empty(),
        adt_recursive: adt_recursion(script),
        arithmetic_linear: true,
    };
    for pred in &script.predicates {
        for sort in &pred.arg_sorts {
            note_sort(&mut flags, sort);
        }
    }
    for datatype in &script.datatypes {
        for ctor in &datatype.constructors {
            for (_, sort) in &ctor.selectors {
                note_sort(&mut flags, sort);
            }
        }
    }
    for clause in &script.clauses {
        for (_, sort) in &clause.bound_vars {
            note_sort(&mut flags, sort);
        }
        let mut visit = |term: &Term| {
            walk_term(script, clause, term, &mut flags);
        };
        visit(&clause.constraint);
        for atom in &clause.body_atoms {
            atom.args.iter().for_each(&mut visit);
        }
        if let ClauseHead::Predicate(atom) = &clause.head {
            atom.args.iter().for_each(&mut visit);
        }
    }
    flags
}

fn note_sort(flags: &mut TheorySet, sort: &Sort) {
    match sort {
        Sort::Bool => {}
        Sort::Int => flags.uses_int = true,
        Sort::Real => flags.uses_real = true,
        Sort::Array(index, element) => {
            flags.uses_arrays = true;
            note_sort(flags, index);
            note_sort(flags, element);
        }
        Sort::Datatype(_) => {}
    }
}

/// Infers the sort of every subterm (the script is sort-checked, so
/// inference cannot fail) and records theory usage along the way.
fn walk_term(script: &Script, clause: &Clause, term: &Term, flags: &mut TheorySet) -> Inferred {
    match term {
        Term::Var(name) => {
            let sort = clause
                .sort_of_var(name)
                .expect("sort-checked script")
                .clone();
            note_sort(flags, &sort);
            Inferred::Sort(sort)
        }
        Term::Numeral(_) => Inferred::Numeric,
        Term::Decimal(_) => {
            flags.uses_real = true;
            Inferred::Sort(Sort::Real)
        }
        Term::Tester(ctor, inner) => {
            let arg = walk_term(script, clause, inner, flags);
            let result = sort_tester(script, ctor, &arg).expect("sort-checked script");
            Inferred::Sort(result.resolve())
        }
        Term::App(op, args) => {
            let arg_sorts: Vec<Inferred> = args
                .iter()
                .map(|a| walk_term(script, clause, a, flags))
                .collect();
            // Sibling unification is what fixes the reading of bare
            // numerals, e.g. `(<= 0 1)` is integer arithmetic.
            if matches!(
                op.as_str(),
                "=" | "distinct" | "<=" | "<" | ">=" | ">" | "+" | "-" | "*"
            ) && !arg_sorts.is_empty()
            {
                if let Ok(unified) = unify(&arg_sorts) {
                    note_sort(flags, &unified.resolve());
                }
            }
            if op == "*" {
                let variable_factors = args.iter().filter(|a| a.mentions_variable()).count();
                if variable_factors > 1 {
                    flags.arithmetic_linear = false;
                }
            }
            let result = sort_application(script, op, &arg_sorts)
                .expect("sort-checked script")
                .expect("sort-checked script")
                .resolve();
            note_sort(flags, &result);
            Inferred::Sort(result)
        }
    }
}

fn adt_recursion(script: &Script) -> AdtRecursion {
    if script.datatypes.is_empty() {
        return AdtRecursion::None;
    }
    // Dependency edge D1 -> D2 when a constructor of D1 has a selector
    // whose sort mentions D2.
    let mut edges: HashMap<&str, HashSet<&str>> = HashMap::new();
    for datatype in &script.datatypes {
        let out = edges.entry(datatype.name.as_str()).or_default();
        for ctor in &datatype.constructors {
            for (_, sort) in &ctor.selectors {
                let mut names = Vec::new();
                sort.datatype_names(&mut names);
                out.extend(names);
            }
        }
    }
    // Cycle detection by iterative DFS with colors.
    #[derive(Clone, Copy, PartialEq)]
    enum Color {
        White,
        Gray,
        Black,
    }
    let mut color: HashMap<&str, Color> = edges.keys().map(|k| (*k, Color::White)).collect();
    fn dfs<'a>(
        node: &'a str,
        edges: &HashMap<&'a str, HashSet<&'a str>>,
        color: &mut HashMap<&'a str, Color>,
    ) -> bool {
        color.insert(node, Color::Gray);
        if let Some(next) = edges.get(node) {
            for succ in next {
                match color.get(succ).copied() {
                    Some(Color::Gray) => return true,
                    Some(Color::White) => {
                        if dfs(succ, edges, color) {
                            return true;
                        }
                    }
                    _ => {}
                }
            }
        }
        color.insert(node, Color::Black);
        false
    }
    let names: Vec<&str> = edges.keys().copied().collect();
    for name in names {
        if color[&name] == Color::White && dfs(name, &edges, &mut color) {
            return AdtRecursion::Recursive;
        }
    }
    AdtRecursion::Nonrecursive
}

/// The LRA-TS shape: exactly one uninterpreted relation and exactly
/// three linear clauses for initial states, transitions, and errors.
pub fn is_transition_system(script: &Script) -> bool {
    if script.predicates.len() != 1 || script.clauses.len() != 3 {
        return false;
    }
    let mut init = 0;
    let mut trans = 0;
    let mut error = 0;
    for clause in &script.clauses {
        match (clause.body_atoms.len(), &clause.head) {
            (0, ClauseHead::Predicate(_)) => init += 1,
            (1, ClauseHead::Predicate(_)) => trans += 1,
            (1, ClauseHead::False) => error += 1,
            _ => return false,
        }
    }
    init == 1 && trans == 1 && error == 1
}

/// Decision order for track assignment; `Unclassified` is a value,
/// not an error.
pub fn assign_track(script: &Script) -> TrackId {
    classify(script).0
}

/// Track plus, for unclassified scripts, the first disqualifying
/// feature.
pub fn classify(script: &Script) -> (TrackId, Option<&'static str>) {
    let theories = detect_theories(script);
    let linearity = script_linearity(script);

    if theories.uses_real
        && !theories.uses_int
        && !theories.uses_arrays
        && !theories.uses_adt
        && theories.arithmetic_linear
        && is_transition_system(script)
    {
        return (TrackId::LraTs, None);
    }
    if theories.uses_adt
        && theories.adt_recursive == AdtRecursion::Recursive
        && !theories.uses_arrays
        && !theories.uses_int
        && !theories.uses_real
    {
        return (TrackId::AdtNonlin, None);
    }
    if theories.uses_adt
        && theories.adt_recursive == AdtRecursion::Nonrecursive
        && theories.uses_int
        && theories.uses_arrays
        && !theories.uses_real
        && theories.arithmetic_linear
    {
        return (TrackId::LiaNonlinArraysNonrecAdt, None);
    }
    if theories.uses_int
        && !theories.uses_real
        && !theories.uses_adt
        && theories.arithmetic_linear
    {
        let track = match (linearity, theories.uses_arrays) {
            (Linearity::Linear, false) => TrackId::LiaLin,
            (Linearity::Nonlinear, false) => TrackId::LiaNonlin,
            (Linearity::Linear, true) => TrackId::LiaLinArrays,
            (Linearity::Nonlinear, true) => TrackId::LiaNonlinArrays,
        };
        return (track, None);
    }
    (TrackId::Unclassified, Some(disqualifier(&theories)))
}

fn disqualifier(theories: &TheorySet) -> &'static str {
    if !theories.arithmetic_linear {
        "nonlinear-arithmetic"
    } else if theories.uses_int && theories.uses_real {
        "mixed-int-real"
    } else if theories.adt_recursive == AdtRecursion::Recursive
        && (theories.uses_int || theories.uses_real)
    {
        "recursive-adt-mixed-with-arithmetic"
    } else if theories.adt_recursive == AdtRecursion::Recursive && theories.uses_arrays {
        "recursive-adt-with-arrays"
    } else if theories.adt_recursive == AdtRecursion::Nonrecursive
        && !(theories.uses_int && theories.uses_arrays)
    {
        "nonrecursive-adt-outside-lia-arrays"
    } else if theories.uses_real {
        "real-but-not-a-transition-system"
    } else {
        "no-recognized-background-theory"
    }
}

/// One classification record:
/// `<file>\t<track>\t<linearity>\t<theories>` with the disqualifying
/// feature appended as a fifth column for unclassified files.
pub fn classification_record(file: &str, script: &Script) -> String {
    let (track, reason) = classify(script);
    let theories = detect_theories(script);
    let linearity = script_linearity(script);
    match reason {
        None => format!("{}\t{}\t{}\t{}\n", file, track, linearity, theories),
        Some(reason) => format!(
            "{}\t{}\t{}\t{}\t{}\n",
            file, track, linearity, theories, reason
        ),
    }
}
