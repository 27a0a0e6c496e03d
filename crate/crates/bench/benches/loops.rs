use criterion::{black_box, criterion_group, criterion_main, Criterion};

use alfsynth_core::boxes::{
    BoxTeacher, IntervalDomain, IntervalOccamLearner, RectDomain, RectWqoLearner,
};
use alfsynth_core::engine::{run_instance, Rank};
use alfsynth_core::invgen::{
    ConjIceTeacher, DenseProgram, HoudiniLearner, InvariantDomain, LoopProgram, PredDef,
    Predicate, StateSpace, UpdateDef,
};
use alfsynth_core::occam::ComplexityOrdering;
use alfsynth_core::samples::{IceSample, PnSample, Point};
use alfsynth_core::synth::term::{parse_bool_term, parse_int_term};
use alfsynth_core::synth::ExprOrdering;

fn pt(coords: &[i64]) -> Point {
    Point(coords.to_vec())
}

fn interval_loop(c: &mut Criterion) {
    c.bench_function("interval occam loop", |b| {
        let domain = IntervalDomain::new();
        let teacher = BoxTeacher::new([pt(&[-2]), pt(&[5])], [pt(&[-8])]);
        let learner = IntervalOccamLearner { rank_cap: Rank::of([64]) };
        b.iter(|| {
            let trace =
                run_instance(&domain, &learner, &teacher, PnSample::empty(), 20).unwrap();
            black_box(trace.rounds())
        });
    });
}

fn rect_loop(c: &mut Criterion) {
    c.bench_function("rectangle expansion loop 3d", |b| {
        let domain = RectDomain::new(3);
        let teacher = BoxTeacher::new(
            [pt(&[0, 0, 0]), pt(&[2, 1, 1])],
            [pt(&[4, 4, 4]), pt(&[-3, 0, 0]), pt(&[0, 5, 1])],
        );
        let learner = RectWqoLearner { dim: 3 };
        b.iter(|| {
            let trace =
                run_instance(&domain, &learner, &teacher, PnSample::empty(), 16).unwrap();
            black_box(trace.rounds())
        });
    });
}

fn houdini_loop(c: &mut Criterion) {
    let vars = vec!["x".to_string()];
    let program = LoopProgram {
        space: StateSpace::new(vec![(0, 15)]).unwrap(),
        init: PredDef::Term(parse_bool_term("(= x 0)", &vars, None).unwrap()),
        guard: PredDef::Term(parse_bool_term("(<= x 9)", &vars, None).unwrap()),
        body: UpdateDef::Terms(vec![parse_int_term("(+ x 2)", &vars).unwrap()]),
        post: PredDef::Term(parse_bool_term("(= x 10)", &vars, None).unwrap()),
    };
    let dense = DenseProgram::compile(&program, 1 << 20).unwrap();
    let evens: Vec<String> =
        (0..=15).filter(|v| v % 2 == 0).map(|v| format!("(= x {v})")).collect();
    let predicates = vec![
        Predicate::new("(<= x 10)", parse_bool_term("(<= x 10)", &vars, None).unwrap()),
        Predicate::new("(<= x 8)", parse_bool_term("(<= x 8)", &vars, None).unwrap()),
        Predicate::new(
            "even(x)",
            parse_bool_term(&format!("(or {})", evens.join(" ")), &vars, None).unwrap(),
        ),
    ];
    c.bench_function("conjunction pruning loop", |b| {
        let domain = InvariantDomain::new(dense.clone(), predicates.clone());
        let learner = HoudiniLearner { predicates: predicates.clone() };
        b.iter(|| {
            let teacher = ConjIceTeacher { domain: &domain };
            let trace =
                run_instance(&domain, &learner, &teacher, IceSample::empty(), 10).unwrap();
            black_box(trace.rounds())
        });
    });
}

fn expression_enumeration(c: &mut Criterion) {
    c.bench_function("expression enumeration to size 7", |b| {
        b.iter(|| {
            let ordering = ExprOrdering::new(1, vec![-1, 0, 1, 2]);
            let count = ordering.stream().take_while(|e| e.size() <= 7).count();
            black_box(count)
        });
    });
}

criterion_group!(benches, interval_loop, rect_loop, houdini_loop, expression_enumeration);
criterion_main!(benches);
