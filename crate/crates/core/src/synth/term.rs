//! Shared integer/boolean term language.
//!
//! Used for synthesis specifications, loop-program definitions, and Houdini
//! predicates. Terms are written as s-expressions over `(+ a b)`, `(- a b)`,
//! `(<= a b)`, `(>= a b)`, `(= a b)`, `(and ...)`, `(or ...)`, `(not b)`,
//! `(ite c a b)`, integer literals, declared variable names, `true`/`false`,
//! and, where permitted, applications `(f x ...)` of the unknown function to
//! the declared inputs.

use std::fmt::Write as _;

use thiserror::Error;

/// Integer-valued term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IntTerm {
    Var(usize),
    Const(i64),
    Add(Box<IntTerm>, Box<IntTerm>),
    Sub(Box<IntTerm>, Box<IntTerm>),
    Ite(Box<BoolTerm>, Box<IntTerm>, Box<IntTerm>),
    /// Application of the unknown function to the listed input variables.
    App(Vec<usize>),
}

/// Boolean-valued term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BoolTerm {
    Const(bool),
    Le(IntTerm, IntTerm),
    Ge(IntTerm, IntTerm),
    Eq(IntTerm, IntTerm),
    And(Vec<BoolTerm>),
    Or(Vec<BoolTerm>),
    Not(Box<BoolTerm>),
}

/// Interpretation of `App` terms during evaluation.
pub type AppFn<'a> = &'a dyn Fn(&[i64]) -> i64;

pub fn eval_int(term: &IntTerm, env: &[i64], app: Option<AppFn>) -> i64 {
    match term {
        IntTerm::Var(i) => env[*i],
        IntTerm::Const(c) => *c,
        IntTerm::Add(a, b) => eval_int(a, env, app) + eval_int(b, env, app),
        IntTerm::Sub(a, b) => eval_int(a, env, app) - eval_int(b, env, app),
        IntTerm::Ite(c, a, b) => {
            if eval_bool(c, env, app) {
                eval_int(a, env, app)
            } else {
                eval_int(b, env, app)
            }
        }
        IntTerm::App(args) => {
            let f = app.expect("term applies the unknown function but no interpretation was given");
            let vals: Vec<i64> = args.iter().map(|&i| env[i]).collect();
            f(&vals)
        }
    }
}

pub fn eval_bool(term: &BoolTerm, env: &[i64], app: Option<AppFn>) -> bool {
    match term {
        BoolTerm::Const(b) => *b,
        BoolTerm::Le(a, b) => eval_int(a, env, app) <= eval_int(b, env, app),
        BoolTerm::Ge(a, b) => eval_int(a, env, app) >= eval_int(b, env, app),
        BoolTerm::Eq(a, b) => eval_int(a, env, app) == eval_int(b, env, app),
        BoolTerm::And(cs) => cs.iter().all(|c| eval_bool(c, env, app)),
        BoolTerm::Or(cs) => cs.iter().any(|c| eval_bool(c, env, app)),
        BoolTerm::Not(c) => !eval_bool(c, env, app),
    }
}

/// Does the term mention the unknown function?
pub fn int_term_uses_app(term: &IntTerm) -> bool {
    match term {
        IntTerm::Var(_) | IntTerm::Const(_) => false,
        IntTerm::Add(a, b) | IntTerm::Sub(a, b) => int_term_uses_app(a) || int_term_uses_app(b),
        IntTerm::Ite(c, a, b) => {
            bool_term_uses_app(c) || int_term_uses_app(a) || int_term_uses_app(b)
        }
        IntTerm::App(_) => true,
    }
}

pub fn bool_term_uses_app(term: &BoolTerm) -> bool {
    match term {
        BoolTerm::Const(_) => false,
        BoolTerm::Le(a, b) | BoolTerm::Ge(a, b) | BoolTerm::Eq(a, b) => {
            int_term_uses_app(a) || int_term_uses_app(b)
        }
        BoolTerm::And(cs) | BoolTerm::Or(cs) => cs.iter().any(bool_term_uses_app),
        BoolTerm::Not(c) => bool_term_uses_app(c),
    }
}

pub fn render_int(term: &IntTerm, vars: &[String]) -> String {
    let mut out = String::new();
    write_int(&mut out, term, vars);
    out
}

pub fn render_bool(term: &BoolTerm, vars: &[String]) -> String {
    let mut out = String::new();
    write_bool(&mut out, term, vars);
    out
}

fn write_int(out: &mut String, term: &IntTerm, vars: &[String]) {
    match term {
        IntTerm::Var(i) => out.push_str(&vars[*i]),
        IntTerm::Const(c) => {
            let _ = write!(out, "{c}");
        }
        IntTerm::Add(a, b) => write_binary(out, "+", a, b, vars),
        IntTerm::Sub(a, b) => write_binary(out, "-", a, b, vars),
        IntTerm::Ite(c, a, b) => {
            out.push_str("(ite ");
            write_bool(out, c, vars);
            out.push(' ');
            write_int(out, a, vars);
            out.push(' ');
            write_int(out, b, vars);
            out.push(')');
        }
        IntTerm::App(args) => {
            out.push_str("(f");
            for &i in args {
                out.push(' ');
                out.push_str(&vars[i]);
            }
            out.push(')');
        }
    }
}

fn write_binary(out: &mut String, op: &str, a: &IntTerm, b: &IntTerm, vars: &[String]) {
    let _ = write!(out, "({op} ");
    write_int(out, a, vars);
    out.push(' ');
    write_int(out, b, vars);
    out.push(')');
}

fn write_bool(out: &mut String, term: &BoolTerm, vars: &[String]) {
    match term {
        BoolTerm::Const(b) => {
            let _ = write!(out, "{b}");
        }
        BoolTerm::Le(a, b) => {
            out.push_str("(<= ");
            write_int(out, a, vars);
            out.push(' ');
            write_int(out, b, vars);
            out.push(')');
        }
        BoolTerm::Ge(a, b) => {
            out.push_str("(>= ");
            write_int(out, a, vars);
            out.push(' ');
            write_int(out, b, vars);
            out.push(')');
        }
        BoolTerm::Eq(a, b) => {
            out.push_str("(= ");
            write_int(out, a, vars);
            out.push(' ');
            write_int(out, b, vars);
            out.push(')');
        }
        BoolTerm::And(cs) => write_variadic(out, "and", cs, vars),
        BoolTerm::Or(cs) => write_variadic(out, "or", cs, vars),
        BoolTerm::Not(c) => {
            out.push_str("(not ");
            write_bool(out, c, vars);
            out.push(')');
        }
    }
}

fn write_variadic(out: &mut String, op: &str, terms: &[BoolTerm], vars: &[String]) {
    let _ = write!(out, "({op}");
    for t in terms {
        out.push(' ');
        write_bool(out, t, vars);
    }
    out.push(')');
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TermError {
    #[error("unbalanced parentheses")]
    Unbalanced,
    #[error("unexpected trailing input after the term")]
    TrailingInput,
    #[error("empty term")]
    Empty,
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("unknown operator `{0}`")]
    UnknownOperator(String),
    #[error("`{op}` expects {expected} arguments, got {got}")]
    Arity { op: String, expected: usize, got: usize },
    #[error("`{0}` needs at least one argument")]
    EmptyVariadic(String),
    #[error("expected an integer term, found a boolean one")]
    ExpectedInt,
    #[error("expected a boolean term, found an integer one")]
    ExpectedBool,
    #[error("the unknown function is not allowed in this term")]
    AppNotAllowed,
    #[error("the unknown function must be applied to the declared inputs in order")]
    AppShape,
}

#[derive(Debug, PartialEq)]
enum Sexp {
    Atom(String),
    List(Vec<Sexp>),
}

fn tokenize(src: &str) -> Vec<String> {
    let mut tokens = Vec::new();
    let mut current = String::new();
    for ch in src.chars() {
        match ch {
            '(' | ')' => {
                if !current.is_empty() {
                    tokens.push(std::mem::take(&mut current));
                }
                tokens.push(ch.to_string());
            }
            c if c.is_whitespace() => {
                if !current.is_empty() {
                    tokens.push(std::mem::take(&mut current));
                }
            }
            c => current.push(c),
        }
    }
    if !current.is_empty() {
        tokens.push(current);
    }
    tokens
}

fn parse_sexp(tokens: &[String], pos: &mut usize) -> Result<Sexp, TermError> {
    match tokens.get(*pos) {
        None => Err(TermError::Empty),
        Some(t) if t == "(" => {
            *pos += 1;
            let mut items = Vec::new();
            loop {
                match tokens.get(*pos) {
                    None => return Err(TermError::Unbalanced),
                    Some(t) if t == ")" => {
                        *pos += 1;
                        return Ok(Sexp::List(items));
                    }
                    Some(_) => items.push(parse_sexp(tokens, pos)?),
                }
            }
        }
        Some(t) if t == ")" => Err(TermError::Unbalanced),
        Some(atom) => {
            *pos += 1;
            Ok(Sexp::Atom(atom.clone()))
        }
    }
}

fn read_one(src: &str) -> Result<Sexp, TermError> {
    let tokens = tokenize(src);
    let mut pos = 0;
    let sexp = parse_sexp(&tokens, &mut pos)?;
    if pos != tokens.len() {
        return Err(TermError::TrailingInput);
    }
    Ok(sexp)
}

struct Lowerer<'a> {
    vars: &'a [String],
    /// Arity of the unknown function, when applications are permitted.
    app_arity: Option<usize>,
}

impl Lowerer<'_> {
    fn var(&self, name: &str) -> Result<usize, TermError> {
        self.vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| TermError::UnknownVariable(name.to_string()))
    }

    fn int(&self, sexp: &Sexp) -> Result<IntTerm, TermError> {
        match sexp {
            Sexp::Atom(a) => {
                if let Ok(c) = a.parse::<i64>() {
                    return Ok(IntTerm::Const(c));
                }
                if a == "true" || a == "false" {
                    return Err(TermError::ExpectedInt);
                }
                Ok(IntTerm::Var(self.var(a)?))
            }
            Sexp::List(items) => {
                let Some(Sexp::Atom(op)) = items.first() else {
                    return Err(TermError::Empty);
                };
                let args = &items[1..];
                match op.as_str() {
                    "+" | "-" => {
                        if args.len() != 2 {
                            return Err(TermError::Arity { op: op.clone(), expected: 2, got: args.len() });
                        }
                        let a = Box::new(self.int(&args[0])?);
                        let b = Box::new(self.int(&args[1])?);
                        Ok(if op == "+" { IntTerm::Add(a, b) } else { IntTerm::Sub(a, b) })
                    }
                    "ite" => {
                        if args.len() != 3 {
                            return Err(TermError::Arity { op: op.clone(), expected: 3, got: args.len() });
                        }
                        Ok(IntTerm::Ite(
                            Box::new(self.boolean(&args[0])?),
                            Box::new(self.int(&args[1])?),
                            Box::new(self.int(&args[2])?),
                        ))
                    }
                    "f" => {
                        let Some(arity) = self.app_arity else {
                            return Err(TermError::AppNotAllowed);
                        };
                        let indices: Result<Vec<usize>, TermError> = args
                            .iter()
                            .map(|a| match a {
                                Sexp::Atom(name) => self.var(name),
                                Sexp::List(_) => Err(TermError::AppShape),
                            })
                            .collect();
                        let indices = indices?;
                        // Lookup-table semantics need the canonical argument
                        // tuple: exactly the declared inputs, in order.
                        if indices != (0..arity).collect::<Vec<_>>() {
                            return Err(TermError::AppShape);
                        }
                        Ok(IntTerm::App(indices))
                    }
                    "<=" | ">=" | "=" | "and" | "or" | "not" => Err(TermError::ExpectedInt),
                    other => Err(TermError::UnknownOperator(other.to_string())),
                }
            }
        }
    }

    fn boolean(&self, sexp: &Sexp) -> Result<BoolTerm, TermError> {
        match sexp {
            Sexp::Atom(a) => match a.as_str() {
                "true" => Ok(BoolTerm::Const(true)),
                "false" => Ok(BoolTerm::Const(false)),
                _ => Err(TermError::ExpectedBool),
            },
            Sexp::List(items) => {
                let Some(Sexp::Atom(op)) = items.first() else {
                    return Err(TermError::Empty);
                };
                let args = &items[1..];
                match op.as_str() {
                    "<=" | ">=" | "=" => {
                        if args.len() != 2 {
                            return Err(TermError::Arity { op: op.clone(), expected: 2, got: args.len() });
                        }
                        let a = self.int(&args[0])?;
                        let b = self.int(&args[1])?;
                        Ok(match op.as_str() {
                            "<=" => BoolTerm::Le(a, b),
                            ">=" => BoolTerm::Ge(a, b),
                            _ => BoolTerm::Eq(a, b),
                        })
                    }
                    "and" | "or" => {
                        if args.is_empty() {
                            return Err(TermError::EmptyVariadic(op.clone()));
                        }
                        let parts: Result<Vec<BoolTerm>, TermError> =
                            args.iter().map(|a| self.boolean(a)).collect();
                        Ok(if op == "and" { BoolTerm::And(parts?) } else { BoolTerm::Or(parts?) })
                    }
                    "not" => {
                        if args.len() != 1 {
                            return Err(TermError::Arity { op: op.clone(), expected: 1, got: args.len() });
                        }
                        Ok(BoolTerm::Not(Box::new(self.boolean(&args[0])?)))
                    }
                    "+" | "-" | "ite" | "f" => Err(TermError::ExpectedBool),
                    other => Err(TermError::UnknownOperator(other.to_string())),
                }
            }
        }
    }
}

/// Parse a boolean term. `app_arity` permits `(f ...)` applications of the
/// unknown function with the given arity; `None` forbids them.
pub fn parse_bool_term(
    src: &str,
    vars: &[String],
    app_arity: Option<usize>,
) -> Result<BoolTerm, TermError> {
    let sexp = read_one(src)?;
    Lowerer { vars, app_arity }.boolean(&sexp)
}

/// Parse an integer term; applications are never allowed here.
pub fn parse_int_term(src: &str, vars: &[String]) -> Result<IntTerm, TermError> {
    let sexp = read_one(src)?;
    Lowerer { vars, app_arity: None }.int(&sexp)
}
