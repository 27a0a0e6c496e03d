//! Invariant and fixpoint instances over bounded-state loop programs.
//!
//! Programs and transition systems are compiled to dense tables over an
//! enumerated state space, so every teacher here is an exhaustive checker:
//! verdicts come from scanning all states in lexicographic order and
//! reporting the smallest witness. Positives always come from the initial
//! states, negatives from exit-condition failures or bad states, and
//! implications from genuine steps, which is what makes these teachers
//! honest for every adequate invariant or fixpoint.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::audit::{ConceptSemantics, UniverseError};
use crate::boxes::Rect;
use crate::engine::{Domain, Learner, LearnerOutcome, Rank, SampleOf, Teacher, Verdict};
use crate::occam::ComplexityOrdering;
use crate::samples::{ice_consistent, IceLattice, IceSample, PnLattice, PnSample, Point};
use crate::synth::term::{eval_bool, eval_int, BoolTerm, IntTerm};

/// Program states are points of the bounded variable space.
pub type State = Point;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum InvgenError {
    #[error("state space has {count} states, above the cap of {cap}")]
    TooManyStates { count: u64, cap: u64 },
    #[error("state space must have at least one variable")]
    NoVariables,
    #[error("variable {index} has lo > hi")]
    EmptyBounds { index: usize },
    #[error("adequate-invariant enumeration supports at most {cap} states, got {count}")]
    EnumerationTooLarge { count: u64, cap: u64 },
}

/// Bounded k-dimensional state space. States enumerate in lexicographic
/// order, first variable most significant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StateSpace {
    pub bounds: Vec<(i64, i64)>,
}

impl StateSpace {
    pub fn new(bounds: Vec<(i64, i64)>) -> Result<Self, InvgenError> {
        if bounds.is_empty() {
            return Err(InvgenError::NoVariables);
        }
        for (i, (lo, hi)) in bounds.iter().enumerate() {
            if lo > hi {
                return Err(InvgenError::EmptyBounds { index: i });
            }
        }
        Ok(StateSpace { bounds })
    }

    pub fn dim(&self) -> usize {
        self.bounds.len()
    }

    pub fn count(&self) -> u64 {
        self.bounds.iter().map(|(lo, hi)| (hi - lo) as u64 + 1).product()
    }

    pub fn state(&self, mut index: u64) -> State {
        let mut coords = vec![0i64; self.dim()];
        for d in (0..self.dim()).rev() {
            let (lo, hi) = self.bounds[d];
            let width = (hi - lo) as u64 + 1;
            coords[d] = lo + (index % width) as i64;
            index /= width;
        }
        Point(coords)
    }

    pub fn index(&self, state: &State) -> Option<u64> {
        if state.dim() != self.dim() {
            return None;
        }
        let mut index = 0u64;
        for (d, &c) in state.0.iter().enumerate() {
            let (lo, hi) = self.bounds[d];
            if c < lo || c > hi {
                return None;
            }
            index = index * ((hi - lo) as u64 + 1) + (c - lo) as u64;
        }
        Some(index)
    }

    pub fn states(&self) -> impl Iterator<Item = State> + '_ {
        (0..self.count()).map(|i| self.state(i))
    }

    pub fn clamp(&self, coords: &mut [i64]) {
        for (d, c) in coords.iter_mut().enumerate() {
            let (lo, hi) = self.bounds[d];
            *c = (*c).clamp(lo, hi);
        }
    }
}

/// A state predicate: a term over the variables, or an explicit set.
#[derive(Clone, Debug)]
pub enum PredDef {
    Term(BoolTerm),
    Table(BTreeSet<State>),
}

impl PredDef {
    fn holds(&self, state: &State) -> bool {
        match self {
            PredDef::Term(t) => eval_bool(t, &state.0, None),
            PredDef::Table(set) => set.contains(state),
        }
    }
}

/// A deterministic state update: one term per variable, or an explicit map.
#[derive(Clone, Debug)]
pub enum UpdateDef {
    Terms(Vec<IntTerm>),
    Table(BTreeMap<State, State>),
}

impl UpdateDef {
    /// Next state; term results are clamped back into the space.
    fn apply(&self, space: &StateSpace, state: &State) -> State {
        match self {
            UpdateDef::Terms(terms) => {
                let mut coords: Vec<i64> =
                    terms.iter().map(|t| eval_int(t, &state.0, None)).collect();
                space.clamp(&mut coords);
                Point(coords)
            }
            UpdateDef::Table(map) => map.get(state).cloned().unwrap_or_else(|| state.clone()),
        }
    }
}

/// A single-loop program: `Init`, loop `Guard`, deterministic `Body`, and
/// the `Post` states must satisfy on loop exit.
#[derive(Clone, Debug)]
pub struct LoopProgram {
    pub space: StateSpace,
    pub init: PredDef,
    pub guard: PredDef,
    pub body: UpdateDef,
    pub post: PredDef,
}

/// Loop program compiled to dense per-state tables.
#[derive(Clone, Debug)]
pub struct DenseProgram {
    pub space: StateSpace,
    pub init: Vec<bool>,
    pub guard: Vec<bool>,
    pub post: Vec<bool>,
    /// Successor state index under the loop body.
    pub step: Vec<u32>,
}

impl DenseProgram {
    pub fn compile(program: &LoopProgram, cap: u64) -> Result<Self, InvgenError> {
        let count = program.space.count();
        if count > cap {
            return Err(InvgenError::TooManyStates { count, cap });
        }
        let space = program.space.clone();
        let mut init = Vec::with_capacity(count as usize);
        let mut guard = Vec::with_capacity(count as usize);
        let mut post = Vec::with_capacity(count as usize);
        let mut step = Vec::with_capacity(count as usize);
        for state in space.states() {
            init.push(program.init.holds(&state));
            guard.push(program.guard.holds(&state));
            post.push(program.post.holds(&state));
            let next = program.body.apply(&space, &state);
            step.push(space.index(&next).expect("clamped update stays in bounds") as u32);
        }
        Ok(DenseProgram { space, init, guard, post, step })
    }

    pub fn state_count(&self) -> usize {
        self.init.len()
    }

    /// Is the state set (as a mask) an adequate invariant: contains the
    /// initial states, exits only into `Post`, and is closed under the body
    /// while the guard holds?
    pub fn is_adequate(&self, mask: &[bool]) -> bool {
        for i in 0..self.state_count() {
            if self.init[i] && !mask[i] {
                return false;
            }
            if mask[i] && !self.guard[i] && !self.post[i] {
                return false;
            }
            if mask[i] && self.guard[i] && !mask[self.step[i] as usize] {
                return false;
            }
        }
        true
    }
}

/// Exhaustive invariant teacher. Checks, in order: initial states are
/// covered (positive witness), exiting states satisfy `Post` (negative
/// witness), and the body cannot step out of the candidate (implication
/// witness). Witnesses are the lexicographically smallest failures.
pub fn ice_teacher(program: &DenseProgram, candidate: &[bool]) -> Verdict<IceSample<State>> {
    debug_assert_eq!(candidate.len(), program.state_count());
    for i in 0..program.state_count() {
        if program.init[i] && !candidate[i] {
            return Verdict::Feedback(IceSample::positive(program.space.state(i as u64)));
        }
    }
    for i in 0..program.state_count() {
        if candidate[i] && !program.guard[i] && !program.post[i] {
            return Verdict::Feedback(IceSample::negative(program.space.state(i as u64)));
        }
    }
    for i in 0..program.state_count() {
        let j = program.step[i] as usize;
        if candidate[i] && program.guard[i] && !candidate[j] {
            return Verdict::Feedback(IceSample::implication(
                program.space.state(i as u64),
                program.space.state(j as u64),
            ));
        }
    }
    Verdict::Accept
}

/// All adequate invariants of a small program, by scanning every subset of
/// the state space. Capped at 16 states.
pub fn enumerate_adequate_invariants(
    program: &DenseProgram,
) -> Result<Vec<BTreeSet<State>>, InvgenError> {
    let n = program.state_count();
    if n > 16 {
        return Err(InvgenError::EnumerationTooLarge { count: n as u64, cap: 16 });
    }
    let mut out = Vec::new();
    let mut mask = vec![false; n];
    for bits in 0u32..(1u32 << n) {
        for (i, m) in mask.iter_mut().enumerate() {
            *m = bits >> i & 1 == 1;
        }
        if program.is_adequate(&mask) {
            out.push(
                (0..n)
                    .filter(|&i| mask[i])
                    .map(|i| program.space.state(i as u64))
                    .collect(),
            );
        }
    }
    Ok(out)
}

/// A named predicate over states.
#[derive(Clone, Debug)]
pub struct Predicate {
    pub label: String,
    pub term: BoolTerm,
}

impl Predicate {
    pub fn new(label: impl Into<String>, term: BoolTerm) -> Self {
        Predicate { label: label.into(), term }
    }

    pub fn holds(&self, state: &State) -> bool {
        eval_bool(&self.term, &state.0, None)
    }
}

/// A conjunction of a subset of the declared predicates. The full set is the
/// strongest hypothesis, the empty set is `true`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ConjHypothesis {
    pub chosen: BTreeSet<usize>,
}

impl ConjHypothesis {
    pub fn all(count: usize) -> Self {
        ConjHypothesis { chosen: (0..count).collect() }
    }

    pub fn holds(&self, predicates: &[Predicate], state: &State) -> bool {
        self.chosen.iter().all(|&i| predicates[i].holds(state))
    }
}

/// Conjunctive learning to a fixpoint: drop every predicate falsified by a
/// positive, and promote the consequent of any implication whose antecedent
/// satisfies the current conjunction. The result is the semantically
/// smallest consistent conjunction; if a negative still satisfies it, no
/// conjunction over these predicates is consistent.
pub fn houdini_learn(
    predicates: &[Predicate],
    sample: &IceSample<State>,
) -> LearnerOutcome<ConjHypothesis> {
    let mut conj = ConjHypothesis::all(predicates.len());
    let mut positives: Vec<State> = sample.pos.iter().cloned().collect();
    let mut promoted: BTreeSet<State> = sample.pos.clone();

    loop {
        let mut changed = false;
        conj.chosen.retain(|&i| {
            let keep = positives.iter().all(|p| predicates[i].holds(p));
            if !keep {
                changed = true;
            }
            keep
        });
        for (from, to) in &sample.implications {
            if conj.holds(predicates, from) && promoted.insert(to.clone()) {
                positives.push(to.clone());
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }

    if sample.neg.iter().any(|n| conj.holds(predicates, n)) {
        return LearnerOutcome::Unrealizable;
    }
    LearnerOutcome::Hypothesis(conj)
}

/// The invariant-inference instance: a compiled program plus the predicate
/// vocabulary, with conjunctions as hypotheses and ICE samples as feedback.
#[derive(Debug)]
pub struct InvariantDomain {
    pub program: DenseProgram,
    pub predicates: Vec<Predicate>,
    lattice: IceLattice<State>,
    predicate_masks: Vec<Vec<bool>>,
}

impl InvariantDomain {
    pub fn new(program: DenseProgram, predicates: Vec<Predicate>) -> Self {
        let predicate_masks = predicates
            .iter()
            .map(|p| program.space.states().map(|s| p.holds(&s)).collect())
            .collect();
        InvariantDomain { program, predicates, lattice: IceLattice::new(), predicate_masks }
    }

    /// Dense mask of the states satisfying the conjunction.
    pub fn gamma_mask(&self, conj: &ConjHypothesis) -> Vec<bool> {
        let n = self.program.state_count();
        let mut mask = vec![true; n];
        for &p in &conj.chosen {
            for (m, &v) in mask.iter_mut().zip(&self.predicate_masks[p]) {
                *m &= v;
            }
        }
        mask
    }
}

impl Domain for InvariantDomain {
    type Lattice = IceLattice<State>;
    type Hypothesis = ConjHypothesis;

    fn lattice(&self) -> &Self::Lattice {
        &self.lattice
    }

    fn consistent(&self, conj: &ConjHypothesis, sample: &IceSample<State>) -> bool {
        sample.pos.iter().all(|p| conj.holds(&self.predicates, p))
            && sample.neg.iter().all(|n| !conj.holds(&self.predicates, n))
            && sample
                .implications
                .iter()
                .all(|(a, b)| !conj.holds(&self.predicates, a) || conj.holds(&self.predicates, b))
    }

    fn render_hypothesis(&self, conj: &ConjHypothesis) -> String {
        if conj.chosen.is_empty() {
            return "true".to_string();
        }
        let parts: Vec<&str> =
            conj.chosen.iter().map(|&i| self.predicates[i].label.as_str()).collect();
        if parts.len() == 1 {
            parts[0].to_string()
        } else {
            format!("(and {})", parts.join(" "))
        }
    }
}

impl ConceptSemantics for InvariantDomain {
    type Concept = BTreeSet<State>;

    fn concretize(&self, conj: &ConjHypothesis) -> BTreeSet<State> {
        let mask = self.gamma_mask(conj);
        (0..mask.len())
            .filter(|&i| mask[i])
            .map(|i| self.program.space.state(i as u64))
            .collect()
    }

    fn concept_consistent(&self, concept: &BTreeSet<State>, sample: &IceSample<State>) -> bool {
        ice_consistent(concept, sample)
    }

    fn concept_universe(&self, cap: u64) -> Result<Vec<BTreeSet<State>>, UniverseError> {
        subsets_of_space(&self.program.space, cap)
    }
}

/// Teacher wrapper binding [`ice_teacher`] to conjunction hypotheses.
#[derive(Debug)]
pub struct ConjIceTeacher<'a> {
    pub domain: &'a InvariantDomain,
}

impl Teacher<InvariantDomain> for ConjIceTeacher<'_> {
    fn respond(&self, conj: &ConjHypothesis) -> Verdict<IceSample<State>> {
        ice_teacher(&self.domain.program, &self.domain.gamma_mask(conj))
    }
}

/// Engine wrapper around [`houdini_learn`].
#[derive(Clone, Debug)]
pub struct HoudiniLearner {
    pub predicates: Vec<Predicate>,
}

impl Learner<InvariantDomain> for HoudiniLearner {
    fn propose(&self, sample: &SampleOf<InvariantDomain>) -> LearnerOutcome<ConjHypothesis> {
        houdini_learn(&self.predicates, sample)
    }
}

/// Ranked enumeration of predicate subsets: by subset size, then by bitmask
/// value with bit `i` standing for predicate `i`. The space is finite, so
/// the stream is exhaustive.
#[derive(Clone, Debug)]
pub struct ConjOrdering {
    pub predicate_count: usize,
}

impl ComplexityOrdering for ConjOrdering {
    type Hypothesis = ConjHypothesis;

    fn rank(&self, conj: &ConjHypothesis) -> Rank {
        Rank::of([conj.chosen.len() as u64])
    }

    fn stream(&self) -> Box<dyn Iterator<Item = ConjHypothesis> + '_> {
        let m = self.predicate_count;
        assert!(m <= 20, "conjunction enumeration is exponential in the predicate count");
        let all: u64 = 1u64 << m;
        Box::new((0..=m).flat_map(move |k| {
            (0..all)
                .filter(move |bits| bits.count_ones() as usize == k)
                .map(move |bits| ConjHypothesis {
                    chosen: (0..m).filter(|i| bits >> i & 1 == 1).collect(),
                })
        }))
    }

    fn exhaustive(&self) -> bool {
        true
    }
}

/// Smallest-first conjunction learner: the weakest consistent conjunction by
/// predicate count.
#[derive(Clone, Debug)]
pub struct ConjOccamLearner {
    pub predicates: Vec<Predicate>,
}

impl Learner<InvariantDomain> for ConjOccamLearner {
    fn propose(&self, sample: &SampleOf<InvariantDomain>) -> LearnerOutcome<ConjHypothesis> {
        let ordering = ConjOrdering { predicate_count: self.predicates.len() };
        crate::occam::occam_learn(
            &ordering,
            |conj: &ConjHypothesis, s: &IceSample<State>| {
                s.pos.iter().all(|p| conj.holds(&self.predicates, p))
                    && s.neg.iter().all(|n| !conj.holds(&self.predicates, n))
                    && s.implications.iter().all(|(a, b)| {
                        !conj.holds(&self.predicates, a) || conj.holds(&self.predicates, b)
                    })
            },
            sample,
            &Rank::of([self.predicates.len() as u64]),
        )
    }
}

/// A bounded transition system: initial states, a finitely branching step
/// relation, and bad states no fixpoint may touch.
#[derive(Clone, Debug)]
pub struct TransitionSystem {
    pub space: StateSpace,
    pub init: PredDef,
    /// Each branch is a deterministic update; the step relation is their
    /// union.
    pub branches: Vec<UpdateDef>,
    pub bad: PredDef,
}

/// Transition system compiled to dense tables.
#[derive(Clone, Debug)]
pub struct DenseTs {
    pub space: StateSpace,
    pub init: Vec<bool>,
    pub bad: Vec<bool>,
    /// Sorted successor indices per state.
    pub post: Vec<Vec<u32>>,
}

impl DenseTs {
    pub fn compile(ts: &TransitionSystem, cap: u64) -> Result<Self, InvgenError> {
        let count = ts.space.count();
        if count > cap {
            return Err(InvgenError::TooManyStates { count, cap });
        }
        let space = ts.space.clone();
        let mut init = Vec::with_capacity(count as usize);
        let mut bad = Vec::with_capacity(count as usize);
        let mut post = Vec::with_capacity(count as usize);
        for state in space.states() {
            init.push(ts.init.holds(&state));
            bad.push(ts.bad.holds(&state));
            let mut succ: Vec<u32> = ts
                .branches
                .iter()
                .map(|b| space.index(&b.apply(&space, &state)).unwrap() as u32)
                .collect();
            succ.sort_unstable();
            succ.dedup();
            post.push(succ);
        }
        Ok(DenseTs { space, init, bad, post })
    }

    pub fn state_count(&self) -> usize {
        self.init.len()
    }

    /// One application of the increasing transformer
    /// `F(X) = X ∪ Init ∪ post(X)`.
    pub fn transform(&self, mask: &[bool]) -> Vec<bool> {
        let mut next = mask.to_vec();
        for i in 0..self.state_count() {
            if self.init[i] {
                next[i] = true;
            }
            if mask[i] {
                for &j in &self.post[i] {
                    next[j as usize] = true;
                }
            }
        }
        next
    }

    /// Pure successor image `post(X)`, without `X` or `Init`.
    pub fn post_image(&self, mask: &[bool]) -> Vec<bool> {
        let mut image = vec![false; self.state_count()];
        for i in 0..self.state_count() {
            if mask[i] {
                for &j in &self.post[i] {
                    image[j as usize] = true;
                }
            }
        }
        image
    }

    /// Is the mask a fixpoint of the increasing transformer that avoids
    /// every bad state?
    pub fn is_adequate_fixpoint(&self, mask: &[bool]) -> bool {
        self.transform(mask) == mask && mask.iter().zip(&self.bad).all(|(&m, &b)| !(m && b))
    }

    pub fn mask_of_rect(&self, rect: &Rect) -> Vec<bool> {
        self.space.states().map(|s| rect.contains(&s)).collect()
    }
}

/// Teacher for adequate-fixpoint targets, driven by the concrete set the
/// hypothesis denotes. A bad state inside is a negative; otherwise the
/// smallest state the transformer adds is a positive when initial, or the
/// consequent of an implication from its smallest in-set predecessor.
pub fn fixpoint_teacher(ts: &DenseTs, gamma: &[bool]) -> Verdict<IceSample<State>> {
    debug_assert_eq!(gamma.len(), ts.state_count());
    for i in 0..ts.state_count() {
        if ts.bad[i] && gamma[i] {
            return Verdict::Feedback(IceSample::negative(ts.space.state(i as u64)));
        }
    }
    let transformed = ts.transform(gamma);
    for i in 0..ts.state_count() {
        if transformed[i] && !gamma[i] {
            if ts.init[i] {
                return Verdict::Feedback(IceSample::positive(ts.space.state(i as u64)));
            }
            let predecessor = (0..ts.state_count())
                .find(|&y| gamma[y] && ts.post[y].contains(&(i as u32)))
                .expect("a non-initial new state must be a successor of the current set");
            return Verdict::Feedback(IceSample::implication(
                ts.space.state(predecessor as u64),
                ts.space.state(i as u64),
            ));
        }
    }
    Verdict::Accept
}

/// Teacher for the most precise abstract image: accepts when the hypothesis
/// covers the concrete successor image of `xhat`, otherwise returns the
/// smallest missing state as a positive example.
pub fn abstract_post_teacher(ts: &DenseTs, xhat: &Rect, hypothesis: &Rect) -> Verdict<PnSample<State>> {
    let image = ts.post_image(&ts.mask_of_rect(xhat));
    for i in 0..ts.state_count() {
        let state = ts.space.state(i as u64);
        if image[i] && !hypothesis.contains(&state) {
            return Verdict::Feedback(PnSample::positive(state));
        }
    }
    Verdict::Accept
}

/// Join the current box with the abstraction of one positive point.
pub fn alpha_join(current: &Rect, positive: &State) -> Rect {
    current.hull_point(positive)
}

/// The adequate-fixpoint instance: box hypotheses over the state space,
/// ICE feedback on representative states.
#[derive(Debug)]
pub struct FixpointDomain {
    pub ts: DenseTs,
    lattice: IceLattice<State>,
}

impl FixpointDomain {
    pub fn new(ts: DenseTs) -> Self {
        FixpointDomain { ts, lattice: IceLattice::new() }
    }
}

impl Domain for FixpointDomain {
    type Lattice = IceLattice<State>;
    type Hypothesis = Rect;

    fn lattice(&self) -> &Self::Lattice {
        &self.lattice
    }

    fn consistent(&self, rect: &Rect, sample: &IceSample<State>) -> bool {
        sample.pos.iter().all(|p| rect.contains(p))
            && sample.neg.iter().all(|n| !rect.contains(n))
            && sample.implications.iter().all(|(a, b)| !rect.contains(a) || rect.contains(b))
    }

    fn render_hypothesis(&self, rect: &Rect) -> String {
        rect.to_string()
    }
}

impl ConceptSemantics for FixpointDomain {
    type Concept = BTreeSet<State>;

    fn concretize(&self, rect: &Rect) -> BTreeSet<State> {
        self.ts.space.states().filter(|s| rect.contains(s)).collect()
    }

    fn concept_consistent(&self, concept: &BTreeSet<State>, sample: &IceSample<State>) -> bool {
        ice_consistent(concept, sample)
    }

    fn concept_universe(&self, cap: u64) -> Result<Vec<BTreeSet<State>>, UniverseError> {
        subsets_of_space(&self.ts.space, cap)
    }
}

#[derive(Debug)]
pub struct FixpointTeacher<'a> {
    pub domain: &'a FixpointDomain,
}

impl Teacher<FixpointDomain> for FixpointTeacher<'_> {
    fn respond(&self, rect: &Rect) -> Verdict<IceSample<State>> {
        fixpoint_teacher(&self.domain.ts, &self.domain.ts.mask_of_rect(rect))
    }
}

/// Box-join learner over ICE samples: the least box covering the positives
/// and the implication closure. A negative inside that least box proves the
/// sample unrealizable in the box space.
#[derive(Clone, Copy, Debug, Default)]
pub struct BoxJoinIceLearner;

fn least_consistent_box(
    pos: impl IntoIterator<Item = State>,
    implications: &BTreeSet<(State, State)>,
) -> Rect {
    let mut forced: BTreeSet<State> = pos.into_iter().collect();
    let mut rect = forced.iter().fold(Rect::Empty, |r, p| r.hull_point(p));
    loop {
        let mut changed = false;
        for (from, to) in implications {
            if rect.contains(from) && !forced.contains(to) {
                forced.insert(to.clone());
                rect = rect.hull_point(to);
                changed = true;
            }
        }
        if !changed {
            return rect;
        }
    }
}

impl Learner<FixpointDomain> for BoxJoinIceLearner {
    fn propose(&self, sample: &SampleOf<FixpointDomain>) -> LearnerOutcome<Rect> {
        let rect = least_consistent_box(sample.pos.iter().cloned(), &sample.implications);
        if sample.neg.iter().any(|n| rect.contains(n)) {
            return LearnerOutcome::Unrealizable;
        }
        LearnerOutcome::Hypothesis(rect)
    }
}

/// The best-abstract-image instance for a fixed `xhat`: positive-only
/// samples, box hypotheses.
#[derive(Debug)]
pub struct AbstractPostDomain {
    pub ts: DenseTs,
    pub xhat: Rect,
    lattice: PnLattice<State>,
}

impl AbstractPostDomain {
    pub fn new(ts: DenseTs, xhat: Rect) -> Self {
        AbstractPostDomain { ts, xhat, lattice: PnLattice::new() }
    }

    /// The most precise abstract image: componentwise hull of the concrete
    /// successor image of `xhat`.
    pub fn best_abstract_image(&self) -> Rect {
        let image = self.ts.post_image(&self.ts.mask_of_rect(&self.xhat));
        let mut rect = Rect::Empty;
        for i in 0..self.ts.state_count() {
            if image[i] {
                rect = rect.hull_point(&self.ts.space.state(i as u64));
            }
        }
        rect
    }
}

impl Domain for AbstractPostDomain {
    type Lattice = PnLattice<State>;
    type Hypothesis = Rect;

    fn lattice(&self) -> &Self::Lattice {
        &self.lattice
    }

    fn consistent(&self, rect: &Rect, sample: &PnSample<State>) -> bool {
        sample.pos.iter().all(|p| rect.contains(p)) && sample.neg.iter().all(|n| !rect.contains(n))
    }

    fn render_hypothesis(&self, rect: &Rect) -> String {
        rect.to_string()
    }
}

impl ConceptSemantics for AbstractPostDomain {
    type Concept = BTreeSet<State>;

    fn concretize(&self, rect: &Rect) -> BTreeSet<State> {
        self.ts.space.states().filter(|s| rect.contains(s)).collect()
    }

    fn concept_consistent(&self, concept: &BTreeSet<State>, sample: &PnSample<State>) -> bool {
        crate::samples::pn_consistent(concept, sample)
    }

    fn concept_universe(&self, cap: u64) -> Result<Vec<BTreeSet<State>>, UniverseError> {
        subsets_of_space(&self.ts.space, cap)
    }
}

fn subsets_of_space(space: &StateSpace, cap: u64) -> Result<Vec<BTreeSet<State>>, UniverseError> {
    let n = space.count();
    if n >= 64 {
        return Err(UniverseError::TooLarge { count: u64::MAX, cap });
    }
    let count = 1u64 << n;
    if count > cap {
        return Err(UniverseError::TooLarge { count, cap });
    }
    let states: Vec<State> = space.states().collect();
    Ok((0..count)
        .map(|bits| {
            states
                .iter()
                .enumerate()
                .filter(|(i, _)| bits >> i & 1 == 1)
                .map(|(_, s)| s.clone())
                .collect()
        })
        .collect())
}

#[derive(Debug)]
pub struct AbstractPostTeacher<'a> {
    pub domain: &'a AbstractPostDomain,
}

impl Teacher<AbstractPostDomain> for AbstractPostTeacher<'_> {
    fn respond(&self, rect: &Rect) -> Verdict<PnSample<State>> {
        abstract_post_teacher(&self.domain.ts, &self.domain.xhat, rect)
    }
}

/// Positive-only box-join learner for abstract images.
#[derive(Clone, Copy, Debug, Default)]
pub struct BoxJoinPosLearner;

impl Learner<AbstractPostDomain> for BoxJoinPosLearner {
    fn propose(&self, sample: &SampleOf<AbstractPostDomain>) -> LearnerOutcome<Rect> {
        let rect = sample.pos.iter().fold(Rect::Empty, |r, p| r.hull_point(p));
        if sample.neg.iter().any(|n| rect.contains(n)) {
            return LearnerOutcome::Unrealizable;
        }
        LearnerOutcome::Hypothesis(rect)
    }
}
