//! Building and executing instances from validated configurations.

use serde::Serialize;
use thiserror::Error;

use alfsynth_core::audit::verify_progress;
use alfsynth_core::boxes::{
    BoxTeacher, Interval, IntervalDomain, IntervalOccamLearner, IntervalWqoLearner, Rect,
    RectDomain, RectWqoLearner,
};
use alfsynth_core::engine::{
    run_with, Domain, EngineError, Learner, RunOptions, RunOutcome, SampleOf, Teacher, Trace,
};
use alfsynth_core::invgen::{
    AbstractPostDomain, AbstractPostTeacher, BoxJoinIceLearner, BoxJoinPosLearner, ConjHypothesis,
    ConjIceTeacher, ConjOccamLearner, FixpointDomain, FixpointTeacher, HoudiniLearner,
    InvariantDomain, State,
};
use alfsynth_core::samples::{GroundedSample, IceSample, PnSample, Point};
use alfsynth_core::synth::{CegisTeacher, Expr, ExprDomain, ExprOccamLearner};
use alfsynth_core::trace::{trace_document, TraceDocument};

use crate::config::{InstanceConfig, InstanceParams, LearnerChoice};

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error("checked mode: trace failed the progress audit with {0} violation(s)")]
    ProgressAudit(usize),
}

/// Outcome summary independent of the instance kind.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OutcomeKind {
    Converged,
    BudgetExhausted,
    Unrealizable,
}

impl OutcomeKind {
    pub fn name(&self) -> &'static str {
        match self {
            OutcomeKind::Converged => "converged",
            OutcomeKind::BudgetExhausted => "budget_exhausted",
            OutcomeKind::Unrealizable => "unrealizable",
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            OutcomeKind::Converged => 0,
            OutcomeKind::BudgetExhausted => 2,
            OutcomeKind::Unrealizable => 3,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Summary {
    pub kind: &'static str,
    pub outcome: OutcomeKind,
    pub rounds: usize,
    pub hypothesis: Option<String>,
}

/// The typed remains of a run, for audits that need the concrete domain.
pub enum TypedRun {
    Interval {
        domain: IntervalDomain,
        teacher: BoxTeacher,
        trace: Trace<Interval, PnSample<Point>>,
    },
    Rectangle {
        domain: RectDomain,
        teacher: BoxTeacher,
        trace: Trace<Rect, PnSample<Point>>,
    },
    Invariant {
        domain: InvariantDomain,
        trace: Trace<ConjHypothesis, IceSample<State>>,
    },
    Fixpoint {
        domain: FixpointDomain,
        trace: Trace<Rect, IceSample<State>>,
    },
    AbstractPost {
        domain: AbstractPostDomain,
        trace: Trace<Rect, PnSample<State>>,
    },
    Sygus {
        domain: ExprDomain,
        trace: Trace<Expr, GroundedSample>,
    },
}

pub struct RunArtifacts {
    pub summary: Summary,
    pub document: TraceDocument,
    pub typed: TypedRun,
}

fn drive<D, L, T>(
    domain: &D,
    learner: &L,
    teacher: &T,
    config: &InstanceConfig,
) -> Result<(Trace<D::Hypothesis, SampleOf<D>>, TraceDocument, Summary), RunError>
where
    D: Domain,
    L: Learner<D>,
    T: Teacher<D>,
    SampleOf<D>: Serialize,
{
    use alfsynth_core::engine::SampleLattice;
    let initial = domain.lattice().bottom();
    let trace = run_with(
        domain,
        learner,
        teacher,
        initial,
        RunOptions { budget: config.budget, checked: config.checked },
    )?;
    let violations = if config.checked { verify_progress(&trace, domain) } else { Vec::new() };
    if !violations.is_empty() {
        return Err(RunError::ProgressAudit(violations.len()));
    }
    let document = trace_document(domain, &trace, config.seed, &config.digest);
    let summary = Summary {
        kind: config.kind.name(),
        outcome: match &trace.outcome {
            RunOutcome::Converged { .. } => OutcomeKind::Converged,
            RunOutcome::Unrealizable { .. } => OutcomeKind::Unrealizable,
            RunOutcome::BudgetExhausted { .. } => OutcomeKind::BudgetExhausted,
        },
        rounds: match &trace.outcome {
            RunOutcome::Converged { rounds, .. } | RunOutcome::Unrealizable { rounds } => *rounds,
            RunOutcome::BudgetExhausted { budget } => *budget,
        },
        hypothesis: trace.outcome.converged().map(|h| domain.render_hypothesis(h)),
    };
    Ok((trace, document, summary))
}

/// Execute a validated configuration.
pub fn execute(config: &InstanceConfig) -> Result<RunArtifacts, RunError> {
    match &config.params {
        InstanceParams::Interval { teacher_pos, teacher_neg, rank_cap } => {
            let domain = IntervalDomain::new();
            let teacher = BoxTeacher::new(teacher_pos.iter().cloned(), teacher_neg.iter().cloned());
            let (trace, document, summary) = match config.learner {
                LearnerChoice::Wqo => drive(&domain, &IntervalWqoLearner, &teacher, config)?,
                _ => drive(
                    &domain,
                    &IntervalOccamLearner { rank_cap: rank_cap.clone() },
                    &teacher,
                    config,
                )?,
            };
            Ok(RunArtifacts {
                summary,
                document,
                typed: TypedRun::Interval { domain, teacher, trace },
            })
        }
        InstanceParams::Rectangle { dim, teacher_pos, teacher_neg } => {
            let domain = RectDomain::new(*dim);
            let teacher = BoxTeacher::new(teacher_pos.iter().cloned(), teacher_neg.iter().cloned());
            let learner = RectWqoLearner { dim: *dim };
            let (trace, document, summary) = drive(&domain, &learner, &teacher, config)?;
            Ok(RunArtifacts {
                summary,
                document,
                typed: TypedRun::Rectangle { domain, teacher, trace },
            })
        }
        InstanceParams::Invariant { program, predicates } => {
            let domain = InvariantDomain::new(program.clone(), predicates.clone());
            let teacher = ConjIceTeacher { domain: &domain };
            let (trace, document, summary) = match config.learner {
                LearnerChoice::ConjOccam => {
                    let learner = ConjOccamLearner { predicates: predicates.clone() };
                    drive(&domain, &learner, &teacher, config)?
                }
                _ => {
                    let learner = HoudiniLearner { predicates: predicates.clone() };
                    drive(&domain, &learner, &teacher, config)?
                }
            };
            Ok(RunArtifacts {
                summary,
                document,
                typed: TypedRun::Invariant { domain, trace },
            })
        }
        InstanceParams::Fixpoint { ts } => {
            let domain = FixpointDomain::new(ts.clone());
            let teacher = FixpointTeacher { domain: &domain };
            let (trace, document, summary) =
                drive(&domain, &BoxJoinIceLearner, &teacher, config)?;
            Ok(RunArtifacts {
                summary,
                document,
                typed: TypedRun::Fixpoint { domain, trace },
            })
        }
        InstanceParams::AbstractPost { ts, xhat } => {
            let domain = AbstractPostDomain::new(ts.clone(), xhat.clone());
            let teacher = AbstractPostTeacher { domain: &domain };
            let (trace, document, summary) =
                drive(&domain, &BoxJoinPosLearner, &teacher, config)?;
            Ok(RunArtifacts {
                summary,
                document,
                typed: TypedRun::AbstractPost { domain, trace },
            })
        }
        InstanceParams::Sygus { spec, rank_cap } => {
            let domain = ExprDomain::new(spec.clone());
            let teacher = CegisTeacher { spec: spec.clone() };
            let learner = ExprOccamLearner::new(spec.clone(), rank_cap.clone());
            let (trace, document, summary) = drive(&domain, &learner, &teacher, config)?;
            Ok(RunArtifacts {
                summary,
                document,
                typed: TypedRun::Sygus { domain, trace },
            })
        }
    }
}
