//! JSON trace documents.
//!
//! A trace document is the serialized form of a run: one record per round
//! with the sample the learner saw, the printed hypothesis, and the verdict,
//! followed by the outcome, the configured seed, and a digest of the
//! configuration that produced it. Samples serialize through their own JSON
//! encodings; hypotheses through each domain's printer. Field order is fixed
//! and sets are sorted, so equal runs serialize to identical bytes.

use serde::{Deserialize, Serialize};

use crate::engine::{Domain, RunOutcome, SampleOf, Trace, Verdict};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum VerdictRecord {
    Accept,
    Feedback { sample: serde_json::Value },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RoundRecord {
    pub round: usize,
    pub sample: serde_json::Value,
    pub hypothesis: String,
    pub verdict: VerdictRecord,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum OutcomeRecord {
    Converged { hypothesis: String, rounds: usize },
    Unrealizable { rounds: usize },
    BudgetExhausted { budget: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceDocument {
    pub rounds: Vec<RoundRecord>,
    pub outcome: OutcomeRecord,
    pub seed: u64,
    pub config_digest: String,
}

/// Build the document for a finished run.
pub fn trace_document<D>(
    domain: &D,
    trace: &Trace<D::Hypothesis, SampleOf<D>>,
    seed: u64,
    config_digest: &str,
) -> TraceDocument
where
    D: Domain + ?Sized,
    SampleOf<D>: Serialize,
{
    let rounds = trace
        .steps
        .iter()
        .map(|step| RoundRecord {
            round: step.round,
            sample: serde_json::to_value(&step.sample).expect("samples serialize"),
            hypothesis: domain.render_hypothesis(&step.hypothesis),
            verdict: match &step.verdict {
                Verdict::Accept => VerdictRecord::Accept,
                Verdict::Feedback(s) => VerdictRecord::Feedback {
                    sample: serde_json::to_value(s).expect("samples serialize"),
                },
            },
        })
        .collect();
    let outcome = match &trace.outcome {
        RunOutcome::Converged { hypothesis, rounds } => OutcomeRecord::Converged {
            hypothesis: domain.render_hypothesis(hypothesis),
            rounds: *rounds,
        },
        RunOutcome::Unrealizable { rounds } => OutcomeRecord::Unrealizable { rounds: *rounds },
        RunOutcome::BudgetExhausted { budget } => OutcomeRecord::BudgetExhausted { budget: *budget },
    };
    TraceDocument { rounds, outcome, seed, config_digest: config_digest.to_string() }
}

impl TraceDocument {
    /// Canonical byte encoding: pretty JSON with a trailing newline.
    pub fn to_json_bytes(&self) -> Vec<u8> {
        let mut bytes = serde_json::to_vec_pretty(self).expect("trace documents serialize");
        bytes.push(b'\n');
        bytes
    }

    pub fn from_json_bytes(bytes: &[u8]) -> Result<Self, serde_json::Error> {
        serde_json::from_slice(bytes)
    }
}
