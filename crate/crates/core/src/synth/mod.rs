//! Expression synthesis from grounded specification samples.
//!
//! The hypothesis grammar is deliberately small: input variables, constants
//! from a declared finite set, `+`, `-`, and an if-then-else guarded by a
//! `<=` or `>=` comparison. A specification is a boolean formula over the
//! inputs and applications of the unknown function; the teacher grounds it
//! at concrete input valuations and verifies candidates by exhausting the
//! declared input box, so acceptance is never sample-relative.

pub mod term;

use std::fmt::Write as _;

use thiserror::Error;

use crate::audit::ConceptSemantics;
use crate::engine::{Domain, Learner, LearnerOutcome, Rank, SampleOf, Teacher, Verdict};
use crate::occam::{occam_learn, ComplexityOrdering};
use crate::samples::{GroundedLattice, GroundedSample, Point};
use term::{eval_bool, BoolTerm};

/// Comparison guard of an [`Expr::Ite`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Cond {
    Leq(Box<Expr>, Box<Expr>),
    Geq(Box<Expr>, Box<Expr>),
}

/// Expression over the synthesis grammar.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Expr {
    Var(usize),
    Const(i64),
    Plus(Box<Expr>, Box<Expr>),
    Minus(Box<Expr>, Box<Expr>),
    Ite(Cond, Box<Expr>, Box<Expr>),
}

impl Expr {
    /// Node count, condition nodes included.
    pub fn size(&self) -> usize {
        match self {
            Expr::Var(_) | Expr::Const(_) => 1,
            Expr::Plus(a, b) | Expr::Minus(a, b) => 1 + a.size() + b.size(),
            Expr::Ite(cond, t, e) => {
                let (Cond::Leq(a, b) | Cond::Geq(a, b)) = cond;
                1 + (1 + a.size() + b.size()) + t.size() + e.size()
            }
        }
    }

    /// Normal form for structural comparison: `a >= b` is rewritten to
    /// `b <= a` throughout, which identifies the two spellings of the same
    /// comparison.
    pub fn normalized(&self) -> Expr {
        match self {
            Expr::Var(_) | Expr::Const(_) => self.clone(),
            Expr::Plus(a, b) => Expr::Plus(Box::new(a.normalized()), Box::new(b.normalized())),
            Expr::Minus(a, b) => Expr::Minus(Box::new(a.normalized()), Box::new(b.normalized())),
            Expr::Ite(cond, t, e) => {
                let cond = match cond {
                    Cond::Leq(a, b) => Cond::Leq(Box::new(a.normalized()), Box::new(b.normalized())),
                    Cond::Geq(a, b) => Cond::Leq(Box::new(b.normalized()), Box::new(a.normalized())),
                };
                Expr::Ite(cond, Box::new(t.normalized()), Box::new(e.normalized()))
            }
        }
    }

    pub fn render(&self, vars: &[String]) -> String {
        let mut out = String::new();
        self.write(&mut out, vars);
        out
    }

    fn write(&self, out: &mut String, vars: &[String]) {
        match self {
            Expr::Var(i) => out.push_str(&vars[*i]),
            Expr::Const(c) => {
                let _ = write!(out, "{c}");
            }
            Expr::Plus(a, b) => {
                out.push_str("(+ ");
                a.write(out, vars);
                out.push(' ');
                b.write(out, vars);
                out.push(')');
            }
            Expr::Minus(a, b) => {
                out.push_str("(- ");
                a.write(out, vars);
                out.push(' ');
                b.write(out, vars);
                out.push(')');
            }
            Expr::Ite(cond, t, e) => {
                out.push_str("(ite ");
                let (op, a, b) = match cond {
                    Cond::Leq(a, b) => ("<=", a, b),
                    Cond::Geq(a, b) => (">=", a, b),
                };
                let _ = write!(out, "({op} ");
                a.write(out, vars);
                out.push(' ');
                b.write(out, vars);
                out.push_str(") ");
                t.write(out, vars);
                out.push(' ');
                e.write(out, vars);
                out.push(')');
            }
        }
    }
}

/// Exact integer semantics; results are not clamped to the input bounds.
pub fn eval_expr(e: &Expr, valuation: &[i64]) -> i64 {
    match e {
        Expr::Var(i) => valuation[*i],
        Expr::Const(c) => *c,
        Expr::Plus(a, b) => eval_expr(a, valuation) + eval_expr(b, valuation),
        Expr::Minus(a, b) => eval_expr(a, valuation) - eval_expr(b, valuation),
        Expr::Ite(cond, t, e2) => {
            let holds = match cond {
                Cond::Leq(a, b) => eval_expr(a, valuation) <= eval_expr(b, valuation),
                Cond::Geq(a, b) => eval_expr(a, valuation) >= eval_expr(b, valuation),
            };
            if holds {
                eval_expr(t, valuation)
            } else {
                eval_expr(e2, valuation)
            }
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SynthError {
    #[error("input `{0}` has an empty name")]
    EmptyInputName(usize),
    #[error("duplicate input name `{0}`")]
    DuplicateInput(String),
    #[error("constant set must not be empty")]
    NoConstants,
    #[error("input space has {count} points, above the cap of {cap}")]
    InputSpaceTooLarge { count: u64, cap: u64 },
    #[error("formula: {0}")]
    Formula(#[from] term::TermError),
}

/// A declared input: name and inclusive bounds. An inverted range is legal
/// and denotes an empty input space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InputVar {
    pub name: String,
    pub lo: i64,
    pub hi: i64,
}

/// A synthesis specification: inputs with bounds, the constant set available
/// to the learner, and a boolean formula over the inputs and `(f ...)`.
#[derive(Clone, Debug)]
pub struct SynthSpec {
    pub inputs: Vec<InputVar>,
    pub constants: Vec<i64>,
    pub formula: BoolTerm,
}

impl SynthSpec {
    /// Parse and validate a specification. `cap` bounds the number of input
    /// valuations the teacher may exhaust.
    pub fn new(
        inputs: Vec<InputVar>,
        constants: Vec<i64>,
        formula_src: &str,
        cap: u64,
    ) -> Result<Self, SynthError> {
        for (i, input) in inputs.iter().enumerate() {
            if input.name.is_empty() {
                return Err(SynthError::EmptyInputName(i));
            }
            if inputs[..i].iter().any(|other| other.name == input.name) {
                return Err(SynthError::DuplicateInput(input.name.clone()));
            }
        }
        if constants.is_empty() {
            return Err(SynthError::NoConstants);
        }
        let names: Vec<String> = inputs.iter().map(|i| i.name.clone()).collect();
        let formula = term::parse_bool_term(formula_src, &names, Some(inputs.len()))?;
        let spec = SynthSpec { inputs, constants, formula };
        let count = spec.input_space_size();
        if count > cap {
            return Err(SynthError::InputSpaceTooLarge { count, cap });
        }
        Ok(spec)
    }

    pub fn arity(&self) -> usize {
        self.inputs.len()
    }

    pub fn input_names(&self) -> Vec<String> {
        self.inputs.iter().map(|i| i.name.clone()).collect()
    }

    pub fn input_space_size(&self) -> u64 {
        self.inputs
            .iter()
            .map(|i| if i.lo > i.hi { 0 } else { (i.hi - i.lo) as u64 + 1 })
            .product()
    }

    /// All input valuations in lexicographic order, first input outermost.
    pub fn valuations(&self) -> Vec<Point> {
        let mut out = Vec::new();
        let mut current = vec![0i64; self.inputs.len()];
        self.collect(0, &mut current, &mut out);
        out
    }

    fn collect(&self, depth: usize, current: &mut Vec<i64>, out: &mut Vec<Point>) {
        if depth == self.inputs.len() {
            out.push(Point(current.clone()));
            return;
        }
        let input = &self.inputs[depth];
        for v in input.lo..=input.hi {
            current[depth] = v;
            self.collect(depth + 1, current, out);
        }
    }
}

/// Does the grounded formula hold with `f` interpreted as `e` and the inputs
/// bound to `v`?
pub fn spec_holds(spec: &SynthSpec, e: &Expr, v: &Point) -> bool {
    let f = |args: &[i64]| eval_expr(e, args);
    eval_bool(&spec.formula, &v.0, Some(&f))
}

/// Verification teacher: scans the whole input box in lexicographic order
/// and grounds the specification at the first violating valuation.
#[derive(Clone, Debug)]
pub struct CegisTeacher {
    pub spec: SynthSpec,
}

impl CegisTeacher {
    pub fn respond_expr(&self, e: &Expr) -> Verdict<GroundedSample> {
        for v in self.spec.valuations() {
            if !spec_holds(&self.spec, e, &v) {
                return Verdict::Feedback(GroundedSample::single(v));
            }
        }
        Verdict::Accept
    }
}

impl Teacher<ExprDomain> for CegisTeacher {
    fn respond(&self, e: &Expr) -> Verdict<GroundedSample> {
        self.respond_expr(e)
    }
}

/// Size-ranked expression enumeration.
///
/// Expressions are emitted in nondecreasing node count; within one size the
/// order is: variables (by index) then constants (in declared order) for the
/// leaves, and for composites the `+` block, the `-` block, then `ite` with
/// a `<=` guard and `ite` with a `>=` guard. Within a block, operand sizes
/// split lexicographically and operands iterate in emission order, rightmost
/// innermost. Every expression of each size appears exactly once, so the
/// stream is duplicate-free up to structural equality.
///
/// The per-size tables are pure syntax, independent of any sample, and are
/// cached inside the ordering so restarted streams replay without
/// rebuilding them.
#[derive(Clone, Debug)]
pub struct ExprOrdering {
    pub arity: usize,
    pub constants: Vec<i64>,
    cache: std::cell::RefCell<Vec<Vec<Expr>>>,
}

impl ExprOrdering {
    pub fn new(arity: usize, constants: Vec<i64>) -> Self {
        ExprOrdering { arity, constants, cache: std::cell::RefCell::new(vec![Vec::new()]) }
    }

    fn leaves(&self) -> Vec<Expr> {
        let mut out: Vec<Expr> = (0..self.arity).map(Expr::Var).collect();
        out.extend(self.constants.iter().map(|&c| Expr::Const(c)));
        out
    }

    fn ensure_size(&self, size: usize) {
        let mut cache = self.cache.borrow_mut();
        while cache.len() <= size {
            let next_size = cache.len();
            let exprs =
                if next_size == 1 { self.leaves() } else { compose(next_size, &cache) };
            cache.push(exprs);
        }
    }

    /// Visit every expression of exactly this size, in emission order.
    /// Sweeps bounded by a known size use this to avoid materializing the
    /// next size the way an iterator stop condition would.
    pub fn for_each_of_size(&self, size: usize, mut f: impl FnMut(&Expr)) {
        self.ensure_size(size);
        for e in &self.cache.borrow()[size] {
            f(e);
        }
    }
}

fn compose(size: usize, table: &[Vec<Expr>]) -> Vec<Expr> {
    let mut out = Vec::new();
    if size < 3 {
        return out;
    }
    // Binary operator blocks: |a| + |b| = size - 1.
    for op in 0..2 {
        for left in 1..=size - 2 {
            let right = size - 1 - left;
            for a in &table[left] {
                for b in &table[right] {
                    let (a, b) = (Box::new(a.clone()), Box::new(b.clone()));
                    out.push(if op == 0 { Expr::Plus(a, b) } else { Expr::Minus(a, b) });
                }
            }
        }
    }
    // Ite blocks: 2 + |c1| + |c2| + |t| + |e| = size.
    if size >= 6 {
        let budget = size - 2;
        for geq in [false, true] {
            for c1 in 1..=budget - 3 {
                for c2 in 1..=budget - c1 - 2 {
                    for t in 1..=budget - c1 - c2 - 1 {
                        let e = budget - c1 - c2 - t;
                        for ca in &table[c1] {
                            for cb in &table[c2] {
                                for tt in &table[t] {
                                    for ee in &table[e] {
                                        let cond = if geq {
                                            Cond::Geq(Box::new(ca.clone()), Box::new(cb.clone()))
                                        } else {
                                            Cond::Leq(Box::new(ca.clone()), Box::new(cb.clone()))
                                        };
                                        out.push(Expr::Ite(
                                            cond,
                                            Box::new(tt.clone()),
                                            Box::new(ee.clone()),
                                        ));
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

struct ExprStream<'a> {
    ordering: &'a ExprOrdering,
    size: usize,
    index: usize,
}

impl Iterator for ExprStream<'_> {
    type Item = Expr;

    fn next(&mut self) -> Option<Expr> {
        loop {
            self.ordering.ensure_size(self.size);
            let cache = self.ordering.cache.borrow();
            if let Some(e) = cache[self.size].get(self.index) {
                self.index += 1;
                return Some(e.clone());
            }
            drop(cache);
            self.size += 1;
            self.index = 0;
        }
    }
}

impl ComplexityOrdering for ExprOrdering {
    type Hypothesis = Expr;

    fn rank(&self, e: &Expr) -> Rank {
        Rank::of([e.size() as u64])
    }

    fn stream(&self) -> Box<dyn Iterator<Item = Expr> + '_> {
        Box::new(ExprStream { ordering: self, size: 1, index: 0 })
    }
}

/// Denotation of an expression on a finite input box: its output table in
/// valuation order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctionTable {
    pub outputs: Vec<i64>,
}

/// The expression-synthesis instance for one specification.
#[derive(Debug)]
pub struct ExprDomain {
    pub spec: SynthSpec,
    lattice: GroundedLattice,
}

impl ExprDomain {
    pub fn new(spec: SynthSpec) -> Self {
        ExprDomain { spec, lattice: GroundedLattice }
    }

    fn valuation_index(&self, v: &Point) -> Option<usize> {
        let mut index = 0u64;
        for (input, &value) in self.spec.inputs.iter().zip(&v.0) {
            if value < input.lo || value > input.hi {
                return None;
            }
            let width = (input.hi - input.lo) as u64 + 1;
            index = index * width + (value - input.lo) as u64;
        }
        Some(index as usize)
    }
}

impl Domain for ExprDomain {
    type Lattice = GroundedLattice;
    type Hypothesis = Expr;

    fn lattice(&self) -> &GroundedLattice {
        &self.lattice
    }

    fn consistent(&self, e: &Expr, sample: &GroundedSample) -> bool {
        sample.valuations.iter().all(|v| spec_holds(&self.spec, e, v))
    }

    fn render_hypothesis(&self, e: &Expr) -> String {
        e.render(&self.spec.input_names())
    }
}

impl ConceptSemantics for ExprDomain {
    type Concept = FunctionTable;

    fn concretize(&self, e: &Expr) -> FunctionTable {
        FunctionTable { outputs: self.spec.valuations().iter().map(|v| eval_expr(e, &v.0)).collect() }
    }

    fn concept_consistent(&self, table: &FunctionTable, sample: &GroundedSample) -> bool {
        let f = |args: &[i64]| {
            let index = self
                .valuation_index(&Point(args.to_vec()))
                .expect("function table only covers the declared input box");
            table.outputs[index]
        };
        sample.valuations.iter().all(|v| eval_bool(&self.spec.formula, &v.0, Some(&f)))
    }
}

/// Enumerative learner for expression synthesis. The learner reconstitutes
/// the formula from the specification; the sample carries only valuations.
#[derive(Clone, Debug)]
pub struct ExprOccamLearner {
    pub spec: SynthSpec,
    pub rank_cap: Rank,
    ordering: ExprOrdering,
}

impl ExprOccamLearner {
    pub fn new(spec: SynthSpec, rank_cap: Rank) -> Self {
        let ordering = ExprOrdering::new(spec.arity(), spec.constants.clone());
        ExprOccamLearner { spec, rank_cap, ordering }
    }
}

impl Learner<ExprDomain> for ExprOccamLearner {
    fn propose(&self, sample: &SampleOf<ExprDomain>) -> LearnerOutcome<Expr> {
        occam_learn(
            &self.ordering,
            |e: &Expr, s: &GroundedSample| s.valuations.iter().all(|v| spec_holds(&self.spec, e, v)),
            sample,
            &self.rank_cap,
        )
    }
}
