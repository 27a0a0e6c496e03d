//! The `laws` subcommand: check the consistency laws of an instance's
//! sample space over its finite concept universe.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use alfsynth_core::audit::{
    verify_consistency_laws, ConceptSemantics, UniverseError, DEFAULT_CONCEPT_CAP,
};
use alfsynth_core::engine::{Domain, SampleOf};
use alfsynth_core::invgen::{AbstractPostDomain, FixpointDomain, InvariantDomain, State, StateSpace};
use alfsynth_core::samples::{IceSample, PnSample};

use crate::config::{InstanceConfig, InstanceParams};

/// Sample pairs generated per `laws` invocation.
pub const LAW_PAIRS: usize = 100;

#[derive(Debug, Error)]
pub enum LawsError {
    #[error("kind `{0}` has no finite concept universe to check")]
    NoUniverse(&'static str),
    #[error(transparent)]
    Universe(#[from] UniverseError),
}

#[derive(Debug)]
pub struct LawsReport {
    pub pairs: usize,
    pub concepts: usize,
    pub violations: usize,
}

fn random_state(rng: &mut ChaCha8Rng, space: &StateSpace) -> State {
    space.state(rng.gen_range(0..space.count()))
}

fn random_ice(rng: &mut ChaCha8Rng, space: &StateSpace) -> IceSample<State> {
    let pos = (0..rng.gen_range(0..=3)).map(|_| random_state(rng, space)).collect();
    let neg = (0..rng.gen_range(0..=3)).map(|_| random_state(rng, space)).collect();
    let implications = (0..rng.gen_range(0..=3))
        .map(|_| (random_state(rng, space), random_state(rng, space)))
        .collect();
    IceSample { pos, neg, implications }
}

fn random_pn(rng: &mut ChaCha8Rng, space: &StateSpace) -> PnSample<State> {
    let pos = (0..rng.gen_range(0..=3)).map(|_| random_state(rng, space)).collect();
    let neg = (0..rng.gen_range(0..=3)).map(|_| random_state(rng, space)).collect();
    PnSample { pos, neg }
}

fn check<D>(
    domain: &D,
    pairs: Vec<(SampleOf<D>, SampleOf<D>)>,
) -> Result<LawsReport, LawsError>
where
    D: Domain + ConceptSemantics,
{
    let concepts = domain.concept_universe(DEFAULT_CONCEPT_CAP)?.len();
    let violations = verify_consistency_laws(domain, &pairs, DEFAULT_CONCEPT_CAP)?.len();
    Ok(LawsReport { pairs: pairs.len(), concepts, violations })
}

/// Run the law checks for the instance's sample space with `LAW_PAIRS`
/// seeded random sample pairs.
pub fn run_laws(config: &InstanceConfig) -> Result<LawsReport, LawsError> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    match &config.params {
        InstanceParams::Invariant { program, predicates } => {
            let domain = InvariantDomain::new(program.clone(), predicates.clone());
            let space = domain.program.space.clone();
            let pairs = (0..LAW_PAIRS)
                .map(|_| (random_ice(&mut rng, &space), random_ice(&mut rng, &space)))
                .collect();
            check(&domain, pairs)
        }
        InstanceParams::Fixpoint { ts } => {
            let domain = FixpointDomain::new(ts.clone());
            let space = domain.ts.space.clone();
            let pairs = (0..LAW_PAIRS)
                .map(|_| (random_ice(&mut rng, &space), random_ice(&mut rng, &space)))
                .collect();
            check(&domain, pairs)
        }
        InstanceParams::AbstractPost { ts, xhat } => {
            let domain = AbstractPostDomain::new(ts.clone(), xhat.clone());
            let space = domain.ts.space.clone();
            let pairs = (0..LAW_PAIRS)
                .map(|_| (random_pn(&mut rng, &space), random_pn(&mut rng, &space)))
                .collect();
            check(&domain, pairs)
        }
        InstanceParams::Interval { .. } | InstanceParams::Rectangle { .. } => {
            Err(LawsError::NoUniverse(config.kind.name()))
        }
        InstanceParams::Sygus { .. } => Err(LawsError::NoUniverse(config.kind.name())),
    }
}
