//! Learner/teacher contracts and the iterative synthesis loop.
//!
//! A run repeatedly asks the learner for a hypothesis consistent with the
//! accumulated sample, hands it to the teacher, and joins the teacher's
//! feedback into the sample. The loop stops when the teacher accepts, when
//! the learner proves the sample unrealizable, or when the round budget is
//! spent. Every round is recorded in a [`Trace`] so runs can be audited and
//! replayed.

use std::fmt;

use thiserror::Error;

/// A bounded join-semilattice of samples.
///
/// `bottom` is the empty sample, `join` combines feedback, and `leq` is the
/// induced order: `leq(a, b)` holds exactly when `join(a, b) == b`.
pub trait SampleLattice {
    type Sample: Clone + PartialEq + fmt::Debug;

    fn bottom(&self) -> Self::Sample;
    fn join(&self, a: &Self::Sample, b: &Self::Sample) -> Self::Sample;
    fn leq(&self, a: &Self::Sample, b: &Self::Sample) -> bool;
}

/// Sample type of a domain, for shorter signatures.
pub type SampleOf<D> = <<D as Domain>::Lattice as SampleLattice>::Sample;

/// An instance domain: a sample lattice plus the consistency relation
/// between hypotheses and samples.
pub trait Domain {
    type Lattice: SampleLattice;
    type Hypothesis: Clone + PartialEq + fmt::Debug;

    fn lattice(&self) -> &Self::Lattice;

    /// Does the hypothesis agree with everything the sample records?
    fn consistent(&self, hypothesis: &Self::Hypothesis, sample: &SampleOf<Self>) -> bool;

    /// Printable form used in traces and summaries.
    fn render_hypothesis(&self, hypothesis: &Self::Hypothesis) -> String;
}

/// Teacher reply: acceptance, or a non-empty sample refuting the hypothesis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict<S> {
    Accept,
    Feedback(S),
}

impl<S> Verdict<S> {
    pub fn is_accept(&self) -> bool {
        matches!(self, Verdict::Accept)
    }

    pub fn feedback(&self) -> Option<&S> {
        match self {
            Verdict::Accept => None,
            Verdict::Feedback(s) => Some(s),
        }
    }
}

/// Rank in a complexity ordering: a tuple of naturals compared
/// lexicographically. Ranks compared against each other should have the same
/// arity; that is the enumerator's responsibility.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rank(pub Vec<u64>);

impl Rank {
    pub fn of(parts: impl IntoIterator<Item = u64>) -> Self {
        Rank(parts.into_iter().collect())
    }
}

impl fmt::Display for Rank {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// What a learner can report for a sample.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LearnerOutcome<H> {
    /// A hypothesis consistent with the sample.
    Hypothesis(H),
    /// No hypothesis in the space is consistent with the sample.
    Unrealizable,
    /// Enumeration passed the rank cap without finding a consistent
    /// hypothesis.
    CapExhausted(Rank),
}

pub trait Learner<D: Domain + ?Sized> {
    fn propose(&self, sample: &SampleOf<D>) -> LearnerOutcome<D::Hypothesis>;
}

pub trait Teacher<D: Domain + ?Sized> {
    fn respond(&self, hypothesis: &D::Hypothesis) -> Verdict<SampleOf<D>>;
}

/// Terminal state of a run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RunOutcome<H> {
    Converged { hypothesis: H, rounds: usize },
    Unrealizable { rounds: usize },
    BudgetExhausted { budget: usize },
}

impl<H> RunOutcome<H> {
    pub fn converged(&self) -> Option<&H> {
        match self {
            RunOutcome::Converged { hypothesis, .. } => Some(hypothesis),
            _ => None,
        }
    }
}

/// One completed round: the sample the learner saw, what it proposed, and
/// how the teacher replied.
#[derive(Clone, Debug, PartialEq)]
pub struct TraceStep<H, S> {
    pub round: usize,
    pub sample: S,
    pub hypothesis: H,
    pub verdict: Verdict<S>,
}

/// Full record of a run. Steps carry consecutive round indices from 0; for
/// `Unrealizable { rounds }` the learner gave up on round `rounds`, which has
/// no step of its own.
#[derive(Clone, Debug, PartialEq)]
pub struct Trace<H, S> {
    pub steps: Vec<TraceStep<H, S>>,
    pub outcome: RunOutcome<H>,
}

impl<H, S> Trace<H, S> {
    pub fn rounds(&self) -> usize {
        self.steps.len()
    }

    /// Samples returned by the teacher, in round order.
    pub fn feedback(&self) -> impl Iterator<Item = (usize, &S)> {
        self.steps.iter().filter_map(|s| s.verdict.feedback().map(|f| (s.round, f)))
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EngineError {
    #[error("learner exhausted its rank cap {cap} at round {round}")]
    CapExhausted { cap: Rank, round: usize },
    #[error("teacher returned the bottom sample as feedback at round {round}")]
    BottomFeedback { round: usize },
    #[error("learner proposed a hypothesis inconsistent with its sample at round {round}")]
    InconsistentProposal { round: usize },
    #[error("teacher feedback at round {round} does not rule out the proposed hypothesis")]
    NoProgress { round: usize },
    #[error("joining feedback at round {round} did not grow the sample monotonically")]
    NonMonotoneJoin { round: usize },
}

#[derive(Clone, Copy, Debug)]
pub struct RunOptions {
    /// Maximum number of learner proposals.
    pub budget: usize,
    /// Verify the learner/teacher contracts inline while running.
    pub checked: bool,
}

/// Run the learning loop from `initial` for at most `budget` rounds.
pub fn run_instance<D, L, T>(
    domain: &D,
    learner: &L,
    teacher: &T,
    initial: SampleOf<D>,
    budget: usize,
) -> Result<Trace<D::Hypothesis, SampleOf<D>>, EngineError>
where
    D: Domain + ?Sized,
    L: Learner<D>,
    T: Teacher<D>,
{
    run_with(domain, learner, teacher, initial, RunOptions { budget, checked: false })
}

/// Like [`run_instance`] with inline contract checks selectable.
///
/// The bottom-feedback check always runs: a teacher claiming "wrong" while
/// providing no information breaks the loop's progress argument. In checked
/// mode the learner's consistency and the teacher's progress obligation are
/// also verified each round.
pub fn run_with<D, L, T>(
    domain: &D,
    learner: &L,
    teacher: &T,
    initial: SampleOf<D>,
    options: RunOptions,
) -> Result<Trace<D::Hypothesis, SampleOf<D>>, EngineError>
where
    D: Domain + ?Sized,
    L: Learner<D>,
    T: Teacher<D>,
{
    let lattice = domain.lattice();
    let mut sample = initial;
    let mut steps: Vec<TraceStep<D::Hypothesis, SampleOf<D>>> = Vec::new();

    for round in 0..options.budget {
        let hypothesis = match learner.propose(&sample) {
            LearnerOutcome::Hypothesis(h) => h,
            LearnerOutcome::Unrealizable => {
                return Ok(Trace { steps, outcome: RunOutcome::Unrealizable { rounds: round } });
            }
            LearnerOutcome::CapExhausted(cap) => {
                return Err(EngineError::CapExhausted { cap, round });
            }
        };
        if options.checked && !domain.consistent(&hypothesis, &sample) {
            return Err(EngineError::InconsistentProposal { round });
        }

        let verdict = teacher.respond(&hypothesis);
        match verdict {
            Verdict::Accept => {
                steps.push(TraceStep {
                    round,
                    sample: sample.clone(),
                    hypothesis: hypothesis.clone(),
                    verdict: Verdict::Accept,
                });
                return Ok(Trace {
                    steps,
                    outcome: RunOutcome::Converged { hypothesis, rounds: round + 1 },
                });
            }
            Verdict::Feedback(feedback) => {
                if feedback == lattice.bottom() {
                    return Err(EngineError::BottomFeedback { round });
                }
                let joined = lattice.join(&sample, &feedback);
                if options.checked {
                    if !lattice.leq(&sample, &joined) {
                        return Err(EngineError::NonMonotoneJoin { round });
                    }
                    if domain.consistent(&hypothesis, &joined) {
                        return Err(EngineError::NoProgress { round });
                    }
                }
                steps.push(TraceStep {
                    round,
                    sample: std::mem::replace(&mut sample, joined),
                    hypothesis,
                    verdict: Verdict::Feedback(feedback),
                });
            }
        }
    }

    Ok(Trace { steps, outcome: RunOutcome::BudgetExhausted { budget: options.budget } })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samples::{PnLattice, PnSample};
    use std::collections::BTreeSet;

    /// Toy domain: hypotheses are finite subsets of 0..8, samples are PN
    /// samples over the same points.
    struct SetDomain {
        lattice: PnLattice<u8>,
    }

    impl SetDomain {
        fn new() -> Self {
            SetDomain { lattice: PnLattice::new() }
        }
    }

    impl Domain for SetDomain {
        type Lattice = PnLattice<u8>;
        type Hypothesis = BTreeSet<u8>;

        fn lattice(&self) -> &Self::Lattice {
            &self.lattice
        }

        fn consistent(&self, h: &BTreeSet<u8>, s: &PnSample<u8>) -> bool {
            crate::samples::pn_consistent(h, s)
        }

        fn render_hypothesis(&self, h: &BTreeSet<u8>) -> String {
            format!("{h:?}")
        }
    }

    /// Learner that proposes the positives themselves.
    struct EchoLearner;

    impl Learner<SetDomain> for EchoLearner {
        fn propose(&self, sample: &PnSample<u8>) -> LearnerOutcome<BTreeSet<u8>> {
            if sample.pos.intersection(&sample.neg).next().is_some() {
                return LearnerOutcome::Unrealizable;
            }
            LearnerOutcome::Hypothesis(sample.pos.clone())
        }
    }

    /// Teacher for a single hidden target set.
    struct SetTeacher {
        target: BTreeSet<u8>,
    }

    impl Teacher<SetDomain> for SetTeacher {
        fn respond(&self, h: &BTreeSet<u8>) -> Verdict<PnSample<u8>> {
            if let Some(missing) = self.target.difference(h).next() {
                return Verdict::Feedback(PnSample::positive(*missing));
            }
            if let Some(extra) = h.difference(&self.target).next() {
                return Verdict::Feedback(PnSample::negative(*extra));
            }
            Verdict::Accept
        }
    }

    #[test]
    fn budget_zero_runs_no_rounds() {
        let domain = SetDomain::new();
        let trace = run_instance(&domain, &EchoLearner, &SetTeacher { target: [1].into() }, PnSample::empty(), 0)
            .unwrap();
        assert!(trace.steps.is_empty());
        assert_eq!(trace.outcome, RunOutcome::BudgetExhausted { budget: 0 });
    }

    #[test]
    fn converges_on_small_target() {
        let domain = SetDomain::new();
        let target: BTreeSet<u8> = [1, 4, 6].into();
        let trace = run_with(
            &domain,
            &EchoLearner,
            &SetTeacher { target: target.clone() },
            PnSample::empty(),
            RunOptions { budget: 16, checked: true },
        )
        .unwrap();
        match &trace.outcome {
            RunOutcome::Converged { hypothesis, rounds } => {
                assert_eq!(hypothesis, &target);
                assert_eq!(*rounds, trace.steps.len());
                assert!(*rounds <= 4);
            }
            other => panic!("expected convergence, got {other:?}"),
        }
        // Round indices are consecutive from 0 and samples grow monotonically.
        for (i, step) in trace.steps.iter().enumerate() {
            assert_eq!(step.round, i);
        }
        for pair in trace.steps.windows(2) {
            assert!(pair[0].sample.leq(&pair[1].sample));
        }
    }

    #[test]
    fn unrealizable_reported_with_round_count() {
        struct ContradictingTeacher;
        impl Teacher<SetDomain> for ContradictingTeacher {
            fn respond(&self, h: &BTreeSet<u8>) -> Verdict<PnSample<u8>> {
                if h.contains(&3) {
                    Verdict::Feedback(PnSample::negative(3))
                } else {
                    Verdict::Feedback(PnSample::positive(3))
                }
            }
        }
        let domain = SetDomain::new();
        let trace =
            run_instance(&domain, &EchoLearner, &ContradictingTeacher, PnSample::empty(), 10).unwrap();
        assert_eq!(trace.outcome, RunOutcome::Unrealizable { rounds: 2 });
        assert_eq!(trace.steps.len(), 2);
    }

    #[test]
    fn bottom_feedback_is_rejected() {
        struct LazyTeacher;
        impl Teacher<SetDomain> for LazyTeacher {
            fn respond(&self, _: &BTreeSet<u8>) -> Verdict<PnSample<u8>> {
                Verdict::Feedback(PnSample::empty())
            }
        }
        let domain = SetDomain::new();
        let err = run_instance(&domain, &EchoLearner, &LazyTeacher, PnSample::empty(), 4).unwrap_err();
        assert_eq!(err, EngineError::BottomFeedback { round: 0 });
    }

    #[test]
    fn cap_exhaustion_is_an_error_outcome() {
        struct CappedLearner;
        impl Learner<SetDomain> for CappedLearner {
            fn propose(&self, _: &PnSample<u8>) -> LearnerOutcome<BTreeSet<u8>> {
                LearnerOutcome::CapExhausted(Rank::of([0]))
            }
        }
        let domain = SetDomain::new();
        let err = run_instance(&domain, &CappedLearner, &SetTeacher { target: [1].into() }, PnSample::empty(), 4)
            .unwrap_err();
        assert_eq!(err, EngineError::CapExhausted { cap: Rank::of([0]), round: 0 });
    }

    #[test]
    fn checked_mode_catches_unprogressive_teacher() {
        // Feedback that does not rule the hypothesis out.
        struct StallingTeacher;
        impl Teacher<SetDomain> for StallingTeacher {
            fn respond(&self, h: &BTreeSet<u8>) -> Verdict<PnSample<u8>> {
                Verdict::Feedback(PnSample::from_parts(h.iter().copied(), []))
            }
        }
        let domain = SetDomain::new();
        let err = run_with(
            &domain,
            &EchoLearner,
            &StallingTeacher,
            PnSample::positive(2),
            RunOptions { budget: 4, checked: true },
        )
        .unwrap_err();
        assert_eq!(err, EngineError::NoProgress { round: 0 });
    }

    #[test]
    fn checked_mode_catches_inconsistent_learner() {
        struct BadLearner;
        impl Learner<SetDomain> for BadLearner {
            fn propose(&self, _: &PnSample<u8>) -> LearnerOutcome<BTreeSet<u8>> {
                LearnerOutcome::Hypothesis(BTreeSet::new())
            }
        }
        let domain = SetDomain::new();
        let err = run_with(
            &domain,
            &BadLearner,
            &SetTeacher { target: [1].into() },
            PnSample::positive(1),
            RunOptions { budget: 4, checked: true },
        )
        .unwrap_err();
        assert_eq!(err, EngineError::InconsistentProposal { round: 0 });
    }

    #[test]
    fn hypotheses_stay_distinct_until_acceptance() {
        let domain = SetDomain::new();
        let target: BTreeSet<u8> = [0, 2, 5, 7].into();
        let trace = run_instance(&domain, &EchoLearner, &SetTeacher { target }, PnSample::empty(), 32).unwrap();
        let mut seen: Vec<&BTreeSet<u8>> = Vec::new();
        for step in &trace.steps {
            assert!(!seen.contains(&&step.hypothesis), "hypothesis repeated before acceptance");
            seen.push(&step.hypothesis);
        }
    }
}
