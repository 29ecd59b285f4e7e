//! Recursive-descent parser for the CHC-COMP profile of SMT-LIB 2.6.
//!
//! The accepted command sequence is `set-logic`, `set-info*`,
//! `declare-datatypes*`, `declare-fun*`, `assert*`, `check-sat`,
//! optional `exit`. Parsing is deliberately lenient about command
//! order (violations are recorded as [`CommandIssue`]s and surface in
//! conformance checking) but strict about structure: clauses must be
//! universally closed implications whose premises flatten into
//! uninterpreted atoms plus a predicate-free constraint.
//!
//! `let` bindings and `!` annotations are expanded away; quantifiers
//! inside terms are rejected, so the resulting AST is quantifier-free
//! below the clause level.

use std::collections::HashMap;

use num_traits::Zero;

use crate::ast::{
    Atom, Clause, ClauseHead, CommandIssue, ConstructorDecl, DatatypeDecl, PredicateDecl, Script,
    Sort, Term,
};
use crate::error::ParseError;
use crate::lexer::{Position, Token};
use crate::sexpr::{read_all, SExpr};
use crate::sorts::{sort_application, sort_tester, Inferred};

/// Parses one benchmark document into a [`Script`].
pub fn parse_script(input: &str) -> Result<Script, ParseError> {
    let input = input.strip_prefix('\u{feff}').unwrap_or(input);
    let commands = read_all(input)?;
    let mut parser = Parser::new();
    for command in &commands {
        parser.command(command)?;
    }
    Ok(parser.finish())
}

fn syntax(pos: Position, msg: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        pos,
        msg: msg.into(),
    }
}

fn sort_err(pos: Position, msg: impl Into<String>) -> ParseError {
    ParseError::Sort {
        pos,
        msg: msg.into(),
    }
}

/// Canonical position of each command kind in the allowed sequence.
fn stage_of(command: &str) -> usize {
    match command {
        "set-logic" => 0,
        "set-info" => 1,
        "declare-datatypes" | "declare-datatype" => 2,
        "declare-fun" => 3,
        "assert" => 4,
        "check-sat" => 5,
        "exit" => 6,
        _ => unreachable!("not a profile command"),
    }
}

struct Parser {
    script: Script,
    max_stage: usize,
    saw_set_logic: bool,
    saw_check_sat: bool,
}

impl Parser {
    fn new() -> Parser {
        Parser {
            script: Script {
                logic: String::new(),
                metadata: Vec::new(),
                datatypes: Vec::new(),
                predicates: Vec::new(),
                clauses: Vec::new(),
                has_exit: false,
                command_issues: Vec::new(),
            },
            max_stage: 0,
            saw_set_logic: false,
            saw_check_sat: false,
        }
    }

    fn finish(mut self) -> Script {
        if !self.saw_set_logic {
            self.script
                .command_issues
                .insert(0, CommandIssue::MissingSetLogic);
        }
        if !self.saw_check_sat {
            self.script.command_issues.push(CommandIssue::MissingCheckSat);
        }
        self.script
    }

    fn note_order(&mut self, name: &str, pos: Position) {
        let stage = stage_of(name);
        if stage < self.max_stage {
            self.script.command_issues.push(CommandIssue::OutOfOrder {
                command: name.to_string(),
                position: pos,
            });
        } else {
            self.max_stage = stage;
        }
    }

    fn command(&mut self, command: &SExpr) -> Result<(), ParseError> {
        let items = command
            .as_list()
            .ok_or_else(|| syntax(command.pos(), "expected a command"))?;
        let head = items
            .first()
            .ok_or_else(|| syntax(command.pos(), "empty command"))?;
        let name = head
            .as_symbol()
            .ok_or_else(|| syntax(head.pos(), "command name must be a symbol"))?;
        let pos = command.pos();
        match name {
            "set-logic" => {
                self.expect_arity(items, 1, pos)?;
                let logic = items[1]
                    .as_symbol()
                    .ok_or_else(|| syntax(items[1].pos(), "logic name must be a symbol"))?;
                if self.saw_set_logic {
                    self.script.command_issues.push(CommandIssue::OutOfOrder {
                        command: "set-logic".into(),
                        position: pos,
                    });
                } else {
                    self.saw_set_logic = true;
                    self.script.logic = logic.to_string();
                    self.note_order(name, pos);
                }
            }
            "set-info" => {
                self.note_order(name, pos);
                self.set_info(items, pos)?;
            }
            "declare-datatypes" => {
                self.note_order(name, pos);
                self.declare_datatypes(items, pos)?;
            }
            "declare-datatype" => {
                self.note_order(name, pos);
                self.declare_datatype(items, pos)?;
            }
            "declare-fun" => {
                self.note_order(name, pos);
                self.declare_fun(items, pos)?;
            }
            "assert" => {
                self.note_order(name, pos);
                self.expect_arity(items, 1, pos)?;
                let clause = ClauseBuilder::new(&self.script).build(&items[1], pos)?;
                self.script.clauses.push(clause);
            }
            "check-sat" => {
                self.expect_arity(items, 0, pos)?;
                if self.saw_check_sat {
                    self.script
                        .command_issues
                        .push(CommandIssue::DuplicateCheckSat { position: pos });
                } else {
                    self.saw_check_sat = true;
                    self.note_order(name, pos);
                }
            }
            "exit" => {
                self.expect_arity(items, 0, pos)?;
                self.note_order(name, pos);
                self.script.has_exit = true;
            }
            other => {
                return Err(ParseError::UnknownCommand {
                    pos,
                    name: other.to_string(),
                })
            }
        }
        Ok(())
    }

    fn expect_arity(&self, items: &[SExpr], args: usize, pos: Position) -> Result<(), ParseError> {
        if items.len() != args + 1 {
            let name = items[0].as_symbol().unwrap_or("?");
            return Err(syntax(
                pos,
                format!("`{}` expects {} argument(s), found {}", name, args, items.len() - 1),
            ));
        }
        Ok(())
    }

    fn set_info(&mut self, items: &[SExpr], pos: Position) -> Result<(), ParseError> {
        if items.len() < 2 || items.len() > 3 {
            return Err(syntax(pos, "`set-info` expects a keyword and an optional value"));
        }
        let keyword = match &items[1] {
            SExpr::Atom {
                token: Token::Keyword(k),
                ..
            } => k.clone(),
            other => return Err(syntax(other.pos(), "expected a `:keyword`")),
        };
        let value = items.get(2).map(SExpr::canonical_text);
        self.script.metadata.push((keyword, value));
        Ok(())
    }

    fn check_fresh_function_name(&self, name: &str, pos: Position) -> Result<(), ParseError> {
        if self.script.predicate(name).is_some()
            || self.script.constructor(name).is_some()
            || self.script.selector(name).is_some()
        {
            return Err(sort_err(pos, format!("`{}` is already declared", name)));
        }
        Ok(())
    }

    fn declare_fun(&mut self, items: &[SExpr], pos: Position) -> Result<(), ParseError> {
        self.expect_arity(items, 3, pos)?;
        let name = items[1]
            .as_symbol()
            .ok_or_else(|| syntax(items[1].pos(), "predicate name must be a symbol"))?
            .to_string();
        self.check_fresh_function_name(&name, items[1].pos())?;
        let args = items[2]
            .as_list()
            .ok_or_else(|| syntax(items[2].pos(), "expected a sort list"))?;
        let arg_sorts = args
            .iter()
            .map(|s| self.resolve_sort(s))
            .collect::<Result<Vec<_>, _>>()?;
        match self.resolve_sort(&items[3])? {
            Sort::Bool => {}
            other => {
                return Err(sort_err(
                    items[3].pos(),
                    format!(
                        "declared function `{}` must have Bool codomain (uninterpreted \
                         relations only), found {}",
                        name, other
                    ),
                ))
            }
        }
        self.script.predicates.push(PredicateDecl { name, arg_sorts });
        Ok(())
    }

    fn declare_datatypes(&mut self, items: &[SExpr], pos: Position) -> Result<(), ParseError> {
        self.expect_arity(items, 2, pos)?;
        let decls = items[1]
            .as_list()
            .ok_or_else(|| syntax(items[1].pos(), "expected a datatype name list"))?;
        let bodies = items[2]
            .as_list()
            .ok_or_else(|| syntax(items[2].pos(), "expected a constructor list list"))?;
        if decls.len() != bodies.len() || decls.is_empty() {
            return Err(syntax(
                pos,
                "declare-datatypes needs matching, non-empty name and constructor lists",
            ));
        }
        let mut names = Vec::new();
        for decl in decls {
            let parts = decl
                .as_list()
                .ok_or_else(|| syntax(decl.pos(), "expected `(Name arity)`"))?;
            if parts.len() != 2 {
                return Err(syntax(decl.pos(), "expected `(Name arity)`"));
            }
            let name = parts[0]
                .as_symbol()
                .ok_or_else(|| syntax(parts[0].pos(), "datatype name must be a symbol"))?;
            match &parts[1] {
                SExpr::Atom {
                    token: Token::Numeral(n),
                    ..
                } if n.is_zero() => {}
                other => {
                    return Err(sort_err(
                        other.pos(),
                        "parametric datatypes are not supported (arity must be 0)",
                    ))
                }
            }
            self.register_datatype(name, parts[0].pos())?;
            names.push(name.to_string());
        }
        for (name, body) in names.iter().zip(bodies) {
            self.fill_constructors(name, body)?;
        }
        Ok(())
    }

    fn declare_datatype(&mut self, items: &[SExpr], pos: Position) -> Result<(), ParseError> {
        self.expect_arity(items, 2, pos)?;
        let name = items[1]
            .as_symbol()
            .ok_or_else(|| syntax(items[1].pos(), "datatype name must be a symbol"))?
            .to_string();
        self.register_datatype(&name, items[1].pos())?;
        self.fill_constructors(&name, &items[2])
    }

    fn register_datatype(&mut self, name: &str, pos: Position) -> Result<(), ParseError> {
        if matches!(name, "Bool" | "Int" | "Real" | "Array")
            || self.script.datatype(name).is_some()
        {
            return Err(sort_err(pos, format!("sort `{}` is already declared", name)));
        }
        self.script.datatypes.push(DatatypeDecl {
            name: name.to_string(),
            constructors: Vec::new(),
        });
        Ok(())
    }

    fn fill_constructors(&mut self, datatype: &str, body: &SExpr) -> Result<(), ParseError> {
        let ctor_exprs = body
            .as_list()
            .ok_or_else(|| syntax(body.pos(), "expected a constructor list"))?;
        if ctor_exprs.is_empty() {
            return Err(sort_err(
                body.pos(),
                format!("datatype `{}` must declare at least one constructor", datatype),
            ));
        }
        if ctor_exprs[0].as_symbol() == Some("par") {
            return Err(sort_err(body.pos(), "parametric datatypes are not supported"));
        }
        let mut constructors = Vec::new();
        for ctor in ctor_exprs {
            let parts = ctor
                .as_list()
                .ok_or_else(|| syntax(ctor.pos(), "expected `(ctor (selector Sort)*)`"))?;
            let name = parts
                .first()
                .and_then(SExpr::as_symbol)
                .ok_or_else(|| syntax(ctor.pos(), "constructor name must be a symbol"))?
                .to_string();
            self.check_fresh_function_name(&name, ctor.pos())?;
            let mut selectors = Vec::new();
            for sel in &parts[1..] {
                let sel_parts = sel
                    .as_list()
                    .ok_or_else(|| syntax(sel.pos(), "expected `(selector Sort)`"))?;
                if sel_parts.len() != 2 {
                    return Err(syntax(sel.pos(), "expected `(selector Sort)`"));
                }
                let sel_name = sel_parts[0]
                    .as_symbol()
                    .ok_or_else(|| syntax(sel_parts[0].pos(), "selector name must be a symbol"))?
                    .to_string();
                self.check_fresh_function_name(&sel_name, sel_parts[0].pos())?;
                if selectors.iter().any(|(n, _)| *n == sel_name)
                    || constructors
                        .iter()
                        .any(|c: &ConstructorDecl| c.selectors.iter().any(|(n, _)| *n == sel_name))
                {
                    return Err(sort_err(
                        sel_parts[0].pos(),
                        format!("selector `{}` is already declared", sel_name),
                    ));
                }
                let sel_sort = self.resolve_sort(&sel_parts[1])?;
                selectors.push((sel_name, sel_sort));
            }
            if constructors.iter().any(|c: &ConstructorDecl| c.name == name) {
                return Err(sort_err(
                    ctor.pos(),
                    format!("constructor `{}` is already declared", name),
                ));
            }
            constructors.push(ConstructorDecl { name, selectors });
        }
        let slot = self
            .script
            .datatypes
            .iter_mut()
            .find(|d| d.name == datatype)
            .expect("datatype was registered");
        slot.constructors = constructors;
        Ok(())
    }

    fn resolve_sort(&self, sexpr: &SExpr) -> Result<Sort, ParseError> {
        resolve_sort(&self.script, sexpr)
    }
}

fn resolve_sort(script: &Script, sexpr: &SExpr) -> Result<Sort, ParseError> {
    match sexpr {
        SExpr::Atom { .. } => {
            let name = sexpr
                .as_symbol()
                .ok_or_else(|| syntax(sexpr.pos(), "expected a sort"))?;
            match name {
                "Bool" => Ok(Sort::Bool),
                "Int" => Ok(Sort::Int),
                "Real" => Ok(Sort::Real),
                other if script.datatype(other).is_some() => {
                    Ok(Sort::Datatype(other.to_string()))
                }
                other => Err(sort_err(sexpr.pos(), format!("unknown sort `{}`", other))),
            }
        }
        SExpr::List { items, pos } => {
            if items.first().and_then(SExpr::as_symbol) == Some("Array") {
                if items.len() != 3 {
                    return Err(sort_err(*pos, "`Array` expects an index and an element sort"));
                }
                Ok(Sort::array(
                    resolve_sort(script, &items[1])?,
                    resolve_sort(script, &items[2])?,
                ))
            } else {
                Err(sort_err(*pos, "unknown sort constructor"))
            }
        }
    }
}

/// Scope of `let`-bound names active while translating one subtree.
type LetEnv = HashMap<String, (Term, Inferred)>;

struct ClauseBuilder<'a> {
    script: &'a Script,
    binders: Vec<(String, Sort)>,
    body_atoms: Vec<Atom>,
    conjuncts: Vec<Term>,
    head: Option<ClauseHead>,
}

impl<'a> ClauseBuilder<'a> {
    fn new(script: &'a Script) -> ClauseBuilder<'a> {
        ClauseBuilder {
            script,
            binders: Vec::new(),
            body_atoms: Vec::new(),
            conjuncts: Vec::new(),
            head: None,
        }
    }

    fn build(mut self, body: &SExpr, assert_pos: Position) -> Result<Clause, ParseError> {
        self.clause_formula(body, &LetEnv::new())?;
        Ok(Clause {
            bound_vars: self.binders,
            body_atoms: self.body_atoms,
            constraint: Term::conjunction(self.conjuncts),
            head: self.head.expect("clause_formula always sets a head"),
            position: Some(assert_pos),
        })
    }

    fn add_binders(&mut self, bindings: &SExpr, env: &mut LetEnv) -> Result<(), ParseError> {
        let list = bindings
            .as_list()
            .ok_or_else(|| syntax(bindings.pos(), "expected a sorted variable list"))?;
        for binding in list {
            let parts = binding
                .as_list()
                .ok_or_else(|| syntax(binding.pos(), "expected `(name Sort)`"))?;
            if parts.len() != 2 {
                return Err(syntax(binding.pos(), "expected `(name Sort)`"));
            }
            let name = parts[0]
                .as_symbol()
                .ok_or_else(|| syntax(parts[0].pos(), "variable name must be a symbol"))?;
            if self.binders.iter().any(|(n, _)| n == name) {
                return Err(sort_err(
                    parts[0].pos(),
                    format!("duplicate bound variable `{}`", name),
                ));
            }
            let sort = resolve_sort(self.script, &parts[1])?;
            // A quantified variable shadows any like-named let binding
            // from an enclosing scope.
            env.remove(name);
            self.binders.push((name.to_string(), sort));
        }
        Ok(())
    }

    /// Translates the clause-level formula: peels `forall`, splits
    /// implications into premises and conclusion, and accepts the
    /// negated spellings of queries.
    fn clause_formula(&mut self, node: &SExpr, env: &LetEnv) -> Result<(), ParseError> {
        if let Some(items) = node.as_list() {
            match items.first().and_then(SExpr::as_symbol) {
                Some("forall") => {
                    if !self.body_atoms.is_empty() || !self.conjuncts.is_empty() {
                        return Err(syntax(
                            node.pos(),
                            "universal quantifier is only allowed at the top of a clause",
                        ));
                    }
                    if items.len() != 3 {
                        return Err(syntax(node.pos(), "`forall` expects bindings and a body"));
                    }
                    let mut env = env.clone();
                    self.add_binders(&items[1], &mut env)?;
                    return self.clause_formula(&items[2], &env);
                }
                Some("let") => {
                    let (inner, env) = self.enter_let(items, node.pos(), env)?;
                    return self.clause_formula(inner, &env);
                }
                Some("=>") if !self.shadowed("=>", env) => {
                    if items.len() < 3 {
                        return Err(syntax(node.pos(), "`=>` expects at least two arguments"));
                    }
                    for premise in &items[1..items.len() - 1] {
                        self.collect_body(premise, env)?;
                    }
                    return self.clause_formula(&items[items.len() - 1], env);
                }
                Some("not") if !self.shadowed("not", env) => {
                    // `(not body)` and `(not (exists vars body))` are
                    // the negated spellings of a query clause.
                    if items.len() != 2 {
                        return Err(syntax(node.pos(), "`not` expects one argument"));
                    }
                    let negated = &items[1];
                    if let Some(inner) = negated.as_list() {
                        if inner.first().and_then(SExpr::as_symbol) == Some("exists") {
                            if inner.len() != 3 {
                                return Err(syntax(
                                    negated.pos(),
                                    "`exists` expects bindings and a body",
                                ));
                            }
                            let mut env = env.clone();
                            self.add_binders(&inner[1], &mut env)?;
                            self.collect_body(&inner[2], &env)?;
                            self.head = Some(ClauseHead::False);
                            return Ok(());
                        }
                    }
                    self.collect_body(negated, env)?;
                    self.head = Some(ClauseHead::False);
                    return Ok(());
                }
                _ => {}
            }
        }
        self.set_head(node, env)
    }

    fn enter_let<'b>(
        &self,
        items: &'b [SExpr],
        pos: Position,
        env: &LetEnv,
    ) -> Result<(&'b SExpr, LetEnv), ParseError> {
        if items.len() != 3 {
            return Err(syntax(pos, "`let` expects bindings and a body"));
        }
        let bindings = items[1]
            .as_list()
            .ok_or_else(|| syntax(items[1].pos(), "expected a binding list"))?;
        let mut extended = env.clone();
        for binding in bindings {
            let parts = binding
                .as_list()
                .ok_or_else(|| syntax(binding.pos(), "expected `(name term)`"))?;
            if parts.len() != 2 {
                return Err(syntax(binding.pos(), "expected `(name term)`"));
            }
            let name = parts[0]
                .as_symbol()
                .ok_or_else(|| syntax(parts[0].pos(), "let-bound name must be a symbol"))?;
            // Bindings of one let are parallel: built in the outer env.
            let value = self.term(&parts[1], env)?;
            extended.insert(name.to_string(), value);
        }
        Ok((&items[2], extended))
    }

    fn shadowed(&self, name: &str, env: &LetEnv) -> bool {
        env.contains_key(name) || self.binders.iter().any(|(n, _)| n == name)
    }

    /// Recognizes an application (or bare nullary occurrence) of a
    /// declared predicate that is not shadowed by a variable.
    fn atom_application<'b>(
        &self,
        node: &'b SExpr,
        env: &LetEnv,
    ) -> Option<(&'b str, &'b [SExpr])> {
        if let Some(name) = node.as_symbol() {
            if !self.shadowed(name, env) && self.script.predicate(name).is_some() {
                return Some((name, &[]));
            }
        }
        if let Some(items) = node.as_list() {
            if let Some(name) = items.first().and_then(SExpr::as_symbol) {
                if !self.shadowed(name, env) && self.script.predicate(name).is_some() {
                    return Some((name, &items[1..]));
                }
            }
        }
        None
    }

    fn collect_body(&mut self, node: &SExpr, env: &LetEnv) -> Result<(), ParseError> {
        if node.as_symbol() == Some("true") && !self.shadowed("true", env) {
            return Ok(());
        }
        if let Some(items) = node.as_list() {
            match items.first().and_then(SExpr::as_symbol) {
                Some("and") if !self.shadowed("and", env) => {
                    if items.len() < 2 {
                        return Err(syntax(node.pos(), "`and` expects at least one argument"));
                    }
                    for part in &items[1..] {
                        self.collect_body(part, env)?;
                    }
                    return Ok(());
                }
                Some("let") => {
                    let (inner, env) = self.enter_let(items, node.pos(), env)?;
                    return self.collect_body(inner, &env);
                }
                _ => {}
            }
        }
        if let Some((pred, args)) = self.atom_application(node, env) {
            let atom = self.atom(pred, args, node.pos(), env)?;
            self.body_atoms.push(atom);
            return Ok(());
        }
        let (term, inferred) = self.term(node, env)?;
        match inferred.resolve() {
            Sort::Bool => {
                self.conjuncts.push(term);
                Ok(())
            }
            other => Err(sort_err(
                node.pos(),
                format!("clause premise must be Boolean, found {}", other),
            )),
        }
    }

    fn set_head(&mut self, node: &SExpr, env: &LetEnv) -> Result<(), ParseError> {
        if let Some(items) = node.as_list() {
            if items.first().and_then(SExpr::as_symbol) == Some("let") {
                let (inner, env) = self.enter_let(items, node.pos(), env)?;
                return self.set_head(inner, &env);
            }
        }
        match node.as_symbol() {
            Some("false") if !self.shadowed("false", env) => {
                self.head = Some(ClauseHead::False);
                return Ok(());
            }
            Some("true") if !self.shadowed("true", env) => {
                return Err(syntax(node.pos(), "clause head cannot be `true`"));
            }
            _ => {}
        }
        if let Some((pred, args)) = self.atom_application(node, env) {
            let atom = self.atom(pred, args, node.pos(), env)?;
            self.head = Some(ClauseHead::Predicate(atom));
            return Ok(());
        }
        // Tell an undeclared predicate apart from structural misuse so
        // the error can name the missing declaration.
        let head_symbol = node
            .as_symbol()
            .or_else(|| node.as_list().and_then(|i| i.first().and_then(SExpr::as_symbol)));
        if let Some(name) = head_symbol {
            let known = self.shadowed(name, env)
                || self.script.constructor(name).is_some()
                || self.script.selector(name).is_some()
                || crate::sorts::is_theory_symbol(name)
                || matches!(name, "let" | "forall" | "exists" | "!" | "_");
            if !known {
                return Err(sort_err(
                    node.pos(),
                    format!("clause head applies undeclared predicate `{}`", name),
                ));
            }
        }
        Err(syntax(
            node.pos(),
            "clause head must be a predicate application or `false`",
        ))
    }

    fn atom(
        &self,
        pred: &str,
        args: &[SExpr],
        pos: Position,
        env: &LetEnv,
    ) -> Result<Atom, ParseError> {
        let decl = self.script.predicate(pred).expect("checked by caller");
        if args.len() != decl.arg_sorts.len() {
            return Err(sort_err(
                pos,
                format!(
                    "predicate `{}` expects {} argument(s), found {}",
                    pred,
                    decl.arg_sorts.len(),
                    args.len()
                ),
            ));
        }
        let expected: Vec<Sort> = decl.arg_sorts.clone();
        let mut terms = Vec::with_capacity(args.len());
        for (arg, want) in args.iter().zip(&expected) {
            let (term, inferred) = self.term(arg, env)?;
            let ok = match &inferred {
                Inferred::Numeric => matches!(want, Sort::Int | Sort::Real),
                Inferred::Sort(s) => s == want,
            };
            if !ok {
                return Err(sort_err(
                    arg.pos(),
                    format!(
                        "argument of `{}` has sort {}, expected {}",
                        pred,
                        inferred.resolve(),
                        want
                    ),
                ));
            }
            terms.push(term);
        }
        Ok(Atom {
            predicate: pred.to_string(),
            args: terms,
        })
    }

    /// Builds and sort-checks a constraint-level term.
    fn term(&self, node: &SExpr, env: &LetEnv) -> Result<(Term, Inferred), ParseError> {
        match node {
            SExpr::Atom { token, pos } => match token {
                Token::Numeral(n) => Ok((Term::Numeral(n.clone()), Inferred::Numeric)),
                Token::Decimal(d) => Ok((Term::Decimal(d.clone()), Inferred::Sort(Sort::Real))),
                Token::Symbol { name, .. } => self.symbol_term(name, *pos, env),
                Token::StringLit(_) => {
                    Err(syntax(*pos, "string literals are not allowed in terms"))
                }
                Token::Keyword(_) => Err(syntax(*pos, "keywords are not allowed in terms")),
                Token::LParen | Token::RParen => unreachable!("parens handled by the reader"),
            },
            SExpr::List { items, pos } => self.application(items, *pos, env),
        }
    }

    fn symbol_term(
        &self,
        name: &str,
        pos: Position,
        env: &LetEnv,
    ) -> Result<(Term, Inferred), ParseError> {
        if let Some((term, inferred)) = env.get(name) {
            return Ok((term.clone(), inferred.clone()));
        }
        if let Some((_, sort)) = self.binders.iter().find(|(n, _)| n == name) {
            return Ok((Term::var(name), Inferred::Sort(sort.clone())));
        }
        match sort_application(self.script, name, &[]) {
            Ok(Some(inferred)) => Ok((Term::app(name, vec![]), inferred)),
            Ok(None) => {
                if self.script.predicate(name).is_some() {
                    Err(sort_err(
                        pos,
                        format!(
                            "predicate `{}` cannot occur inside a constraint \
                             (only as a clause atom)",
                            name
                        ),
                    ))
                } else {
                    Err(sort_err(pos, format!("unknown symbol `{}`", name)))
                }
            }
            Err(msg) => Err(sort_err(pos, msg)),
        }
    }

    fn application(
        &self,
        items: &[SExpr],
        pos: Position,
        env: &LetEnv,
    ) -> Result<(Term, Inferred), ParseError> {
        let head = items
            .first()
            .ok_or_else(|| syntax(pos, "empty application"))?;
        // Indexed identifier: the only supported one is `(_ is ctor)`.
        if let Some(head_items) = head.as_list() {
            if head_items.first().and_then(SExpr::as_symbol) == Some("_") {
                if head_items.len() == 3
                    && head_items[1].as_symbol() == Some("is")
                    && head_items[2].as_symbol().is_some()
                {
                    let ctor = head_items[2].as_symbol().unwrap();
                    if items.len() != 2 {
                        return Err(syntax(pos, "a tester expects exactly one argument"));
                    }
                    let (arg, inferred) = self.term(&items[1], env)?;
                    let result = sort_tester(self.script, ctor, &inferred)
                        .map_err(|msg| sort_err(pos, msg))?;
                    return Ok((Term::Tester(ctor.to_string(), Box::new(arg)), result));
                }
                return Err(syntax(head.pos(), "unsupported indexed identifier"));
            }
        }
        let name = head
            .as_symbol()
            .ok_or_else(|| syntax(head.pos(), "expected an operator symbol"))?;
        match name {
            "let" => {
                let (inner, env) = self.enter_let(items, pos, env)?;
                return self.term(inner, &env);
            }
            "!" => {
                if items.len() < 2 {
                    return Err(syntax(pos, "`!` expects an annotated term"));
                }
                return self.term(&items[1], env);
            }
            "forall" | "exists" => {
                return Err(syntax(
                    pos,
                    "quantifiers are not allowed inside constraints",
                ));
            }
            "_" => return Err(syntax(pos, "unsupported indexed identifier")),
            _ => {}
        }
        if self.shadowed(name, env) {
            return Err(syntax(
                head.pos(),
                format!("`{}` is a variable and cannot be applied", name),
            ));
        }
        let mut args = Vec::with_capacity(items.len() - 1);
        let mut arg_sorts = Vec::with_capacity(items.len() - 1);
        for item in &items[1..] {
            let (term, inferred) = self.term(item, env)?;
            args.push(term);
            arg_sorts.push(inferred);
        }
        match sort_application(self.script, name, &arg_sorts) {
            Ok(Some(inferred)) => Ok((fold_negation(name, args), inferred)),
            Ok(None) => {
                if self.script.predicate(name).is_some() {
                    Err(sort_err(
                        pos,
                        format!(
                            "predicate `{}` cannot occur inside a constraint \
                             (only as a clause atom)",
                            name
                        ),
                    ))
                } else {
                    Err(sort_err(pos, format!("unknown function symbol `{}`", name)))
                }
            }
            Err(msg) => Err(sort_err(pos, msg)),
        }
    }
}

/// Folds `(- literal)` into a signed literal so that `-1`, `(- 1)` and
/// the parsed AST all coincide.
fn fold_negation(op: &str, mut args: Vec<Term>) -> Term {
    if op == "-" && args.len() == 1 {
        match args.pop().unwrap() {
            Term::Numeral(n) => return Term::Numeral(-n),
            Term::Decimal(d) => return Term::Decimal(d.negate()),
            other => args.push(other),
        }
    }
    Term::app(op, args)
}

#[cfg(test)]
mod tests {
    use super::*;

    const TWO_CLAUSES: &str = "(set-logic HORN)(declare-fun p (Int) Bool)\
        (assert (forall ((x Int)) (=> (= x 0) (p x))))\
        (assert (forall ((x Int)) (=> (p x) false)))(check-sat)";

    #[test]
    fn parses_the_two_clause_benchmark() {
        let script = parse_script(TWO_CLAUSES).unwrap();
        assert_eq!(script.predicates.len(), 1);
        assert_eq!(script.clauses.len(), 2);
        let fact = &script.clauses[0];
        assert!(fact.body_atoms.is_empty());
        assert_eq!(
            fact.constraint,
            Term::equality(Term::var("x"), Term::Numeral(0.into()))
        );
        assert!(matches!(fact.head, ClauseHead::Predicate(_)));
        let query = &script.clauses[1];
        assert_eq!(query.body_atoms.len(), 1);
        assert!(query.constraint.is_truth());
        assert!(query.head.is_false());
        assert!(script.command_issues.is_empty());
    }

    #[test]
    fn parses_the_empty_benchmark() {
        let script = parse_script("(set-logic HORN)(check-sat)").unwrap();
        assert_eq!(script.predicates.len(), 0);
        assert_eq!(script.clauses.len(), 0);
    }

    #[test]
    fn undeclared_head_predicate_is_a_sort_error() {
        let err = parse_script(
            "(set-logic HORN)(assert (forall ((x Int)) (=> (= x 0) (q x))))(check-sat)",
        )
        .unwrap_err();
        assert!(matches!(err, ParseError::Sort { .. }));
        assert!(err.to_string().contains("`q`"));
    }

    #[test]
    fn body_is_flattened_into_atoms_and_constraint() {
        let script = parse_script(
            "(set-logic HORN)(declare-fun p (Int) Bool)(declare-fun q (Int) Bool)\
             (assert (forall ((x Int) (y Int)) \
               (=> (and (p x) (<= x y) (q y) (and (>= y 0) true)) (p y))))(check-sat)",
        )
        .unwrap();
        let clause = &script.clauses[0];
        assert_eq!(clause.body_atoms.len(), 2);
        assert_eq!(
            clause.constraint,
            Term::app(
                "and",
                vec![
                    Term::app("<=", vec![Term::var("x"), Term::var("y")]),
                    Term::app(">=", vec![Term::var("y"), Term::Numeral(0.into())]),
                ]
            )
        );
    }

    #[test]
    fn nested_implications_and_negated_queries() {
        let script = parse_script(
            "(set-logic HORN)(declare-fun p (Int) Bool)\
             (assert (forall ((x Int)) (=> (> x 0) (=> (p x) (p x)))))\
             (assert (not (exists ((x Int)) (and (p x) (< x 0)))))\
             (assert (forall ((x Int)) (not (p x))))\
             (check-sat)",
        )
        .unwrap();
        assert_eq!(script.clauses[0].body_atoms.len(), 1);
        assert!(!script.clauses[0].head.is_false());
        assert!(script.clauses[1].head.is_false());
        assert_eq!(script.clauses[1].bound_vars.len(), 1);
        assert!(script.clauses[2].head.is_false());
    }

    #[test]
    fn let_bindings_expand() {
        let script = parse_script(
            "(set-logic HORN)(declare-fun p (Int) Bool)\
             (assert (forall ((x Int)) (let ((y (+ x 1))) (=> (= y 2) (p x)))))(check-sat)",
        )
        .unwrap();
        assert_eq!(
            script.clauses[0].constraint,
            Term::equality(
                Term::app("+", vec![Term::var("x"), Term::Numeral(1.into())]),
                Term::Numeral(2.into())
            )
        );
    }

    #[test]
    fn predicate_inside_constraint_is_rejected() {
        let err = parse_script(
            "(set-logic HORN)(declare-fun p (Int) Bool)\
             (assert (forall ((x Int)) (=> (or (p x) (= x 0)) false)))(check-sat)",
        )
        .unwrap_err();
        assert!(matches!(err, ParseError::Sort { .. }));
        assert!(err.to_string().contains("inside a constraint"));
    }

    #[test]
    fn unknown_command_is_reported() {
        let err = parse_script("(set-logic HORN)(push 1)(check-sat)").unwrap_err();
        assert!(matches!(err, ParseError::UnknownCommand { ref name, .. } if name == "push"));
    }

    #[test]
    fn non_bool_codomain_is_rejected() {
        let err =
            parse_script("(set-logic HORN)(declare-fun f (Int) Int)(check-sat)").unwrap_err();
        assert!(matches!(err, ParseError::Sort { .. }));
    }

    #[test]
    fn command_order_issues_are_recorded_not_fatal() {
        let script = parse_script(
            "(set-logic HORN)(declare-fun p () Bool)(set-info :status sat)\
             (assert p)(check-sat)",
        )
        .unwrap();
        assert!(script
            .command_issues
            .iter()
            .any(|i| matches!(i, CommandIssue::OutOfOrder { command, .. } if command == "set-info")));
        let script = parse_script("(set-logic HORN)").unwrap();
        assert!(script
            .command_issues
            .iter()
            .any(|i| matches!(i, CommandIssue::MissingCheckSat)));
    }

    #[test]
    fn datatypes_declare_and_type_check() {
        let script = parse_script(
            "(set-logic HORN)\
             (declare-datatypes ((Nat 0)) (((zero) (succ (pred Nat)))))\
             (declare-fun p (Nat) Bool)\
             (assert (forall ((n Nat)) (=> ((_ is succ) n) (p (pred n)))))\
             (assert (p zero))\
             (check-sat)",
        )
        .unwrap();
        assert_eq!(script.datatypes.len(), 1);
        assert_eq!(script.datatypes[0].constructors.len(), 2);
        let clause = &script.clauses[0];
        assert_eq!(clause.constraint, Term::Tester("succ".into(), Box::new(Term::var("n"))));
        let err = parse_script(
            "(set-logic HORN)\
             (declare-datatypes ((Nat 0)) (((zero) (succ (pred Nat)))))\
             (declare-fun p (Nat) Bool)\
             (assert (p (succ zero zero)))(check-sat)",
        )
        .unwrap_err();
        assert!(matches!(err, ParseError::Sort { .. }));
    }

    #[test]
    fn arrays_and_reals_type_check() {
        let script = parse_script(
            "(set-logic HORN)(declare-fun p ((Array Int Int) Real) Bool)\
             (assert (forall ((a (Array Int Int)) (r Real)) \
               (=> (and (= (select a 0) 1) (> r 0.5)) (p a r))))(check-sat)",
        )
        .unwrap();
        assert_eq!(script.clauses.len(), 1);
        let err = parse_script(
            "(set-logic HORN)(declare-fun p (Real) Bool)\
             (assert (forall ((r Real) (n Int)) (=> (= r n) (p r))))(check-sat)",
        )
        .unwrap_err();
        assert!(matches!(err, ParseError::Sort { .. }));
    }

    #[test]
    fn negative_literal_forms_coincide() {
        let a = parse_script(
            "(set-logic HORN)(declare-fun p (Int) Bool)(assert (p -1))(check-sat)",
        )
        .unwrap();
        let b = parse_script(
            "(set-logic HORN)(declare-fun p (Int) Bool)(assert (p (- 1)))(check-sat)",
        )
        .unwrap();
        assert_eq!(a, b);
        match &a.clauses[0].head {
            ClauseHead::Predicate(atom) => {
                assert_eq!(atom.args[0], Term::Numeral((-1).into()));
            }
            ClauseHead::False => panic!("expected a head atom"),
        }
    }

    #[test]
    fn ground_clauses_without_forall() {
        let script = parse_script(
            "(set-logic HORN)(declare-fun p () Bool)(assert p)(assert (=> p false))(check-sat)",
        )
        .unwrap();
        assert_eq!(script.clauses.len(), 2);
        assert!(script.clauses[0].bound_vars.is_empty());
        assert_eq!(script.clauses[1].body_atoms.len(), 1);
    }

    #[test]
    fn quantifier_inside_term_is_rejected() {
        let err = parse_script(
            "(set-logic HORN)(declare-fun p (Int) Bool)\
             (assert (forall ((x Int)) (=> (exists ((y Int)) (= y x)) (p x))))(check-sat)",
        )
        .unwrap_err();
        assert!(matches!(err, ParseError::Syntax { .. }));
    }
}
