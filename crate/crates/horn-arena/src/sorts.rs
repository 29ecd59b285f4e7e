//! Sort rules for the CHC-COMP theory fragment: core Booleans, linear
//! integer/real arithmetic operators, array reads/writes, and datatype
//! constructors/selectors/testers.
//!
//! Numerals are sort-ambiguous until an application site resolves them
//! against Int or Real; a numeral left unconstrained defaults to Int.

use crate::ast::{Script, Sort};

/// Sort of a subterm during inference. `Numeric` marks a numeral whose
/// Int/Real reading is still open.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Inferred {
    Sort(Sort),
    Numeric,
}

impl Inferred {
    /// Final reading; unconstrained numerals are integers.
    pub fn resolve(self) -> Sort {
        match self {
            Inferred::Sort(s) => s,
            Inferred::Numeric => Sort::Int,
        }
    }

    fn describe(&self) -> String {
        match self {
            Inferred::Sort(s) => s.to_string(),
            Inferred::Numeric => "numeral".into(),
        }
    }
}

/// Unifies the sorts of sibling arguments (for `=`, `ite`, arithmetic).
pub fn unify(args: &[Inferred]) -> Result<Inferred, String> {
    let mut acc = Inferred::Numeric;
    for arg in args {
        acc = match (acc, arg) {
            (Inferred::Numeric, other) => other.clone(),
            (concrete, Inferred::Numeric) => {
                match &concrete {
                    Inferred::Sort(Sort::Int) | Inferred::Sort(Sort::Real) => {}
                    Inferred::Sort(other) => {
                        return Err(format!("numeral used where {} is expected", other))
                    }
                    Inferred::Numeric => {}
                }
                concrete
            }
            (Inferred::Sort(a), Inferred::Sort(b)) => {
                if a == *b {
                    Inferred::Sort(a)
                } else {
                    return Err(format!("mismatched sorts {} and {}", a, b));
                }
            }
        };
    }
    Ok(acc)
}

fn expect(arg: &Inferred, expected: &Sort) -> Result<(), String> {
    match arg {
        Inferred::Numeric if matches!(expected, Sort::Int | Sort::Real) => Ok(()),
        Inferred::Numeric => Err(format!("numeral used where {} is expected", expected)),
        Inferred::Sort(s) if s == expected => Ok(()),
        Inferred::Sort(s) => Err(format!("expected {}, found {}", expected, s)),
    }
}

fn expect_numeric(op: &str, arg: &Inferred) -> Result<(), String> {
    match arg {
        Inferred::Numeric | Inferred::Sort(Sort::Int) | Inferred::Sort(Sort::Real) => Ok(()),
        Inferred::Sort(s) => Err(format!("`{}` expects numeric arguments, found {}", op, s)),
    }
}

fn arity(op: &str, args: &[Inferred], min: usize, max: Option<usize>) -> Result<(), String> {
    let n = args.len();
    if n < min || max.is_some_and(|m| n > m) {
        let want = match max {
            Some(m) if m == min => format!("{}", min),
            Some(m) => format!("{}..{}", min, m),
            None => format!(">= {}", min),
        };
        Err(format!("`{}` expects {} argument(s), found {}", op, want, n))
    } else {
        Ok(())
    }
}

/// Typing rule for one application. Returns `Ok(None)` when `op` is
/// neither a theory operator nor a declared constructor/selector; the
/// caller decides whether that is an unknown symbol or a predicate in
/// an illegal position.
pub fn sort_application(
    script: &Script,
    op: &str,
    args: &[Inferred],
) -> Result<Option<Inferred>, String> {
    let bool_sort = || Ok(Some(Inferred::Sort(Sort::Bool)));
    match op {
        "true" | "false" => {
            arity(op, args, 0, Some(0))?;
            bool_sort()
        }
        "not" => {
            arity(op, args, 1, Some(1))?;
            expect(&args[0], &Sort::Bool)?;
            bool_sort()
        }
        "and" | "or" => {
            arity(op, args, 1, None)?;
            for a in args {
                expect(a, &Sort::Bool)?;
            }
            bool_sort()
        }
        "xor" | "=>" => {
            arity(op, args, 2, None)?;
            for a in args {
                expect(a, &Sort::Bool)?;
            }
            bool_sort()
        }
        "=" | "distinct" => {
            arity(op, args, 2, None)?;
            unify(args)?;
            bool_sort()
        }
        "ite" => {
            arity(op, args, 3, Some(3))?;
            expect(&args[0], &Sort::Bool)?;
            Ok(Some(unify(&args[1..])?))
        }
        "+" | "*" | "-" => {
            arity(op, args, 1, None)?;
            for a in args {
                expect_numeric(op, a)?;
            }
            Ok(Some(unify(args)?))
        }
        "div" | "mod" => {
            arity(op, args, 2, None)?;
            for a in args {
                expect(a, &Sort::Int)?;
            }
            Ok(Some(Inferred::Sort(Sort::Int)))
        }
        "abs" => {
            arity(op, args, 1, Some(1))?;
            expect(&args[0], &Sort::Int)?;
            Ok(Some(Inferred::Sort(Sort::Int)))
        }
        "/" => {
            arity(op, args, 2, None)?;
            for a in args {
                expect(a, &Sort::Real)?;
            }
            Ok(Some(Inferred::Sort(Sort::Real)))
        }
        "<=" | "<" | ">=" | ">" => {
            arity(op, args, 2, None)?;
            for a in args {
                expect_numeric(op, a)?;
            }
            unify(args)?;
            bool_sort()
        }
        "select" => {
            arity(op, args, 2, Some(2))?;
            match &args[0] {
                Inferred::Sort(Sort::Array(index, element)) => {
                    expect(&args[1], index)?;
                    Ok(Some(Inferred::Sort((**element).clone())))
                }
                other => Err(format!("`select` expects an array, found {}", other.describe())),
            }
        }
        "store" => {
            arity(op, args, 3, Some(3))?;
            match &args[0] {
                Inferred::Sort(sort @ Sort::Array(index, element)) => {
                    expect(&args[1], index)?;
                    expect(&args[2], element)?;
                    Ok(Some(Inferred::Sort(sort.clone())))
                }
                other => Err(format!("`store` expects an array, found {}", other.describe())),
            }
        }
        "to_real" => {
            arity(op, args, 1, Some(1))?;
            expect(&args[0], &Sort::Int)?;
            Ok(Some(Inferred::Sort(Sort::Real)))
        }
        "to_int" => {
            arity(op, args, 1, Some(1))?;
            expect(&args[0], &Sort::Real)?;
            Ok(Some(Inferred::Sort(Sort::Int)))
        }
        "is_int" => {
            arity(op, args, 1, Some(1))?;
            expect(&args[0], &Sort::Real)?;
            bool_sort()
        }
        _ => {
            if let Some((datatype, ctor)) = script.constructor(op) {
                arity(op, args, ctor.selectors.len(), Some(ctor.selectors.len()))?;
                for (arg, (sel_name, sel_sort)) in args.iter().zip(&ctor.selectors) {
                    expect(arg, sel_sort)
                        .map_err(|e| format!("field `{}` of `{}`: {}", sel_name, op, e))?;
                }
                Ok(Some(Inferred::Sort(Sort::Datatype(datatype.name.clone()))))
            } else if let Some((datatype, _, result)) = script.selector(op) {
                arity(op, args, 1, Some(1))?;
                expect(&args[0], &Sort::Datatype(datatype.name.clone()))?;
                Ok(Some(Inferred::Sort(result.clone())))
            } else {
                Ok(None)
            }
        }
    }
}

/// Whether `name` is one of the fixed theory operator symbols.
pub fn is_theory_symbol(name: &str) -> bool {
    matches!(
        name,
        "true"
            | "false"
            | "not"
            | "and"
            | "or"
            | "xor"
            | "=>"
            | "="
            | "distinct"
            | "ite"
            | "+"
            | "*"
            | "-"
            | "div"
            | "mod"
            | "abs"
            | "/"
            | "<="
            | "<"
            | ">="
            | ">"
            | "select"
            | "store"
            | "to_real"
            | "to_int"
            | "is_int"
    )
}

/// Typing rule for a tester `((_ is ctor) arg)`.
pub fn sort_tester(script: &Script, ctor: &str, arg: &Inferred) -> Result<Inferred, String> {
    match script.constructor(ctor) {
        Some((datatype, _)) => {
            expect(arg, &Sort::Datatype(datatype.name.clone()))?;
            Ok(Inferred::Sort(Sort::Bool))
        }
        None => Err(format!("`(_ is {})`: unknown constructor", ctor)),
    }
}
