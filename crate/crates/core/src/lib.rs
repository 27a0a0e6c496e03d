//! Counterexample-guided inductive synthesis engine.
//!
//! The [`engine`] module defines the learner/teacher contracts and the
//! iterative loop; [`samples`] the sample lattices the two sides exchange;
//! [`occam`] a generic ranked enumerative learner; [`boxes`] interval and
//! hyperrectangle instances; [`invgen`] ICE invariant inference, Houdini,
//! fixpoint and abstract-transformer teachers over bounded-state programs;
//! [`synth`] a small expression-synthesis instance verified by exhaustive
//! input enumeration; [`audit`] trace and lattice-law checks; [`trace`] the
//! JSON trace document written by the command-line runner.

pub mod audit;
pub mod boxes;
pub mod engine;
pub mod invgen;
pub mod occam;
pub mod samples;
pub mod synth;
pub mod trace;

pub use audit::{verify_consistency_laws, verify_honesty, verify_progress, ConceptSemantics};
pub use engine::{
    run_instance, run_with, Domain, EngineError, Learner, LearnerOutcome, Rank, RunOptions,
    RunOutcome, SampleLattice, SampleOf, Teacher, Trace, TraceStep, Verdict,
};
pub use samples::{GroundedSample, IceSample, PnSample, Point};
