//! Convergence properties of the shipped learners against honest teachers.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use alfsynth_core::boxes::{
    face_expansion_violations, BoxTeacher, IntervalDomain, IntervalOccamLearner, Rect, RectDomain,
    RectWqoLearner,
};
use alfsynth_core::engine::{run_instance, Rank, RunOutcome};
use alfsynth_core::invgen::{
    ConjIceTeacher, ConjOccamLearner, HoudiniLearner, InvariantDomain,
};
use alfsynth_core::samples::{IceSample, PnSample, Point};
use alfsynth_core::verify_progress;

fn random_points(rng: &mut ChaCha8Rng, dim: usize, lo: i64, hi: i64, count: usize) -> Vec<Point> {
    (0..count)
        .map(|_| Point((0..dim).map(|_| rng.gen_range(lo..=hi)).collect()))
        .collect()
}

fn random_realizable_teacher(
    rng: &mut ChaCha8Rng,
    dim: usize,
    lo: i64,
    hi: i64,
) -> BoxTeacher {
    loop {
        let pos_count = rng.gen_range(1..=3);
        let neg_count = rng.gen_range(0..=3);
        let pos = random_points(rng, dim, lo, hi, pos_count);
        let neg = random_points(rng, dim, lo, hi, neg_count);
        let teacher = BoxTeacher::new(pos, neg);
        if teacher.realizable(dim) {
            return teacher;
        }
    }
}

#[test]
fn wqo_learner_converges_within_the_point_budget() {
    // Each round's feedback is a hidden point not seen before, so rounds are
    // bounded by the number of distinct hidden points plus the accept round.
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for case in 0..500 {
        let dim = 1 + case % 3;
        let teacher = random_realizable_teacher(&mut rng, dim, -10, 10);
        let domain = RectDomain::new(dim);
        let learner = RectWqoLearner { dim };
        let budget = teacher.hidden_pos.len() + teacher.hidden_neg.len() + 1;
        let trace =
            run_instance(&domain, &learner, &teacher, PnSample::empty(), budget).unwrap();
        match &trace.outcome {
            RunOutcome::Converged { rounds, .. } => assert!(*rounds <= budget),
            other => panic!("case {case}: expected convergence, got {other:?}"),
        }
        assert!(verify_progress(&trace, &domain).is_empty());
        // After the first positive arrives every proposal is facewise
        // maximal for its sample.
        for step in trace.steps.iter().skip(1) {
            if let Rect::Product(_) = &step.hypothesis {
                assert!(
                    face_expansion_violations(&step.hypothesis, &step.sample).is_empty(),
                    "case {case}: round {} not maximal",
                    step.round
                );
            }
        }
    }
}

#[test]
fn interval_occam_converges_to_a_minimal_target() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for case in 0..200 {
        let teacher = random_realizable_teacher(&mut rng, 1, -20, 20);
        let domain = IntervalDomain::new();
        let learner = IntervalOccamLearner { rank_cap: Rank::of([64]) };
        let trace = run_instance(&domain, &learner, &teacher, PnSample::empty(), 200).unwrap();
        let RunOutcome::Converged { hypothesis, .. } = &trace.outcome else {
            panic!("case {case}: expected convergence, got {:?}", trace.outcome);
        };
        // Brute-force minimal complexity among target intervals.
        let target_sample = PnSample::from_parts(
            teacher.hidden_pos.iter().cloned(),
            teacher.hidden_neg.iter().cloned(),
        );
        let minimal = brute_force_minimal_complexity(&target_sample, 22)
            .expect("realizable target has a minimal element");
        assert_eq!(
            alfsynth_core::boxes::interval_complexity(hypothesis),
            minimal,
            "case {case}"
        );
    }
}

/// Minimal complexity among intervals consistent with the sample, over the
/// bounded endpoint grid (complexity of a minimal consistent interval never
/// exceeds the largest coordinate magnitude plus one).
fn brute_force_minimal_complexity(sample: &PnSample<Point>, bound: i64) -> Option<u64> {
    use alfsynth_core::boxes::{interval_complexity, ExtInt, Interval};
    let mut endpoints = vec![ExtInt::NegInf, ExtInt::PosInf];
    endpoints.extend((-bound..=bound).map(ExtInt::Fin));
    let mut best: Option<u64> = None;
    for &lo in &endpoints {
        for &hi in &endpoints {
            let Some(iv) = Interval::closed(lo, hi) else { continue };
            let ok = sample.pos.iter().all(|p| iv.contains(p.0[0]))
                && sample.neg.iter().all(|n| !iv.contains(n.0[0]));
            if ok {
                let c = interval_complexity(&iv);
                best = Some(best.map_or(c, |b: u64| b.min(c)));
            }
        }
    }
    best
}

#[test]
fn finite_space_budget_guarantees_a_decision() {
    // With a budget at least the hypothesis-space size, conjunction learners
    // either converge or prove unrealizability.
    let program = worked_program();
    let predicates = worked_predicates();
    let space_size = 1usize << predicates.len();

    let domain = InvariantDomain::new(program.clone(), predicates.clone());
    let teacher = ConjIceTeacher { domain: &domain };

    let houdini = HoudiniLearner { predicates: predicates.clone() };
    let trace =
        run_instance(&domain, &houdini, &teacher, IceSample::empty(), space_size + 1).unwrap();
    assert!(matches!(
        trace.outcome,
        RunOutcome::Converged { .. } | RunOutcome::Unrealizable { .. }
    ));

    let occam = ConjOccamLearner { predicates: predicates.clone() };
    let trace =
        run_instance(&domain, &occam, &teacher, IceSample::empty(), space_size + 1).unwrap();
    assert!(matches!(
        trace.outcome,
        RunOutcome::Converged { .. } | RunOutcome::Unrealizable { .. }
    ));
}

#[test]
fn reruns_reproduce_identical_traces() {
    let domain = RectDomain::new(2);
    let learner = RectWqoLearner { dim: 2 };
    let teacher = BoxTeacher::new(
        [Point(vec![1, 1]), Point(vec![3, 2])],
        [Point(vec![5, 5]), Point(vec![0, 4])],
    );
    let a = run_instance(&domain, &learner, &teacher, PnSample::empty(), 32).unwrap();
    let b = run_instance(&domain, &learner, &teacher, PnSample::empty(), 32).unwrap();
    assert_eq!(a, b);
    let doc_a = alfsynth_core::trace::trace_document(&domain, &a, 0, "d");
    let doc_b = alfsynth_core::trace::trace_document(&domain, &b, 0, "d");
    assert_eq!(doc_a.to_json_bytes(), doc_b.to_json_bytes());
}

// Worked program and predicates, mirrored from the invgen unit tests.
use alfsynth_core::invgen::{
    DenseProgram, LoopProgram, PredDef, Predicate, StateSpace, UpdateDef,
};
use alfsynth_core::synth::term::{parse_bool_term, parse_int_term};

fn worked_program() -> DenseProgram {
    let vars = vec!["x".to_string()];
    let program = LoopProgram {
        space: StateSpace::new(vec![(0, 15)]).unwrap(),
        init: PredDef::Term(parse_bool_term("(= x 0)", &vars, None).unwrap()),
        guard: PredDef::Term(parse_bool_term("(<= x 9)", &vars, None).unwrap()),
        body: UpdateDef::Terms(vec![parse_int_term("(+ x 2)", &vars).unwrap()]),
        post: PredDef::Term(parse_bool_term("(= x 10)", &vars, None).unwrap()),
    };
    DenseProgram::compile(&program, 1 << 20).unwrap()
}

fn worked_predicates() -> Vec<Predicate> {
    let vars = vec!["x".to_string()];
    let evens: Vec<String> = (0..=15).filter(|v| v % 2 == 0).map(|v| format!("(= x {v})")).collect();
    vec![
        Predicate::new("(<= x 10)", parse_bool_term("(<= x 10)", &vars, None).unwrap()),
        Predicate::new("(<= x 8)", parse_bool_term("(<= x 8)", &vars, None).unwrap()),
        Predicate::new(
            "even(x)",
            parse_bool_term(&format!("(or {})", evens.join(" ")), &vars, None).unwrap(),
        ),
    ]
}
