use std::hint::black_box;
use std::sync::Arc;

use criterion::{criterion_group, criterion_main, Criterion};
use lifted_codes::analysis::min_distance;
use lifted_codes::codes::{construct, lift, BaseCode, ConstructionInputs};
use lifted_codes::degrees::{lift_degree_set, DegreeSet};
use lifted_codes::local::{monte_carlo, rs_decode_full, trial_rng, CodewordSampler, MonteCarloConfig, Scenario, Target};
use lifted_codes::space::coefficient_table;
use lifted_codes::Field;

fn degree_lifting(c: &mut Criterion) {
    let rs = |big_q: u32, d: u32| DegreeSet::univariate(big_q, big_q, &(0..=d).collect::<Vec<_>>()).unwrap();
    let q16 = rs(16, 12);
    c.bench_function("lift rs Q=16 d=12 m=2", |b| b.iter(|| lift_degree_set(black_box(&q16), 2).unwrap()));
    let q128 = rs(128, 126);
    c.bench_function("lift rs Q=128 d=126 m=2", |b| b.iter(|| lift_degree_set(black_box(&q128), 2).unwrap()));
    let parity = DegreeSet::univariate(4, 2, &[0, 1, 2]).unwrap();
    c.bench_function("lift parity Q=4 m=5", |b| b.iter(|| lift_degree_set(black_box(&parity), 5).unwrap()));
    let mut plane = DegreeSet::full(4, 2, 2).unwrap();
    plane.remove(&[3, 3]);
    c.bench_function("lift bivariate parity Q=4 m=3", |b| b.iter(|| lift_degree_set(black_box(&plane), 3).unwrap()));
}

fn transforms(c: &mut Criterion) {
    let (_, code) = construct(4, &ConstructionInputs { m: Some(2), s: Some(4), c: Some(2), ..Default::default() }).unwrap();
    let word = CodewordSampler::new(&code).unwrap().sample(&mut trial_rng(1, 0));
    c.bench_function("coefficients Q=16 m=2", |b| b.iter(|| coefficient_table(black_box(&word))));

    let field = Field::tower(16, 16).unwrap();
    let mut values: Vec<_> = field.elements().map(|x| field.mul(x, x)).collect();
    for i in [1usize, 5, 9, 12] {
        values[i] = field.add(values[i], lifted_codes::Elem(1));
    }
    c.bench_function("rs_decode Q=16 d=5 4 errors", |b| b.iter(|| rs_decode_full(&field, black_box(&values), 5).unwrap()));
}

fn oracles(c: &mut Criterion) {
    let field = Arc::new(Field::tower(2, 4).unwrap());
    let code = lift(BaseCode::parity_univariate(field).unwrap(), 2).unwrap();
    c.bench_function("min distance lifted parity Q=4 m=2", |b| b.iter(|| min_distance(black_box(&code)).unwrap()));

    let (_, rs) = construct(4, &ConstructionInputs { m: Some(2), s: Some(4), c: Some(2), ..Default::default() }).unwrap();
    let config = MonteCarloConfig { scenario: Scenario::CorrectRs, errors: 10, trials: 100, seed: 7, target: Target::Uniform };
    c.bench_function("correct_rs 100 trials Q=16 m=2", |b| b.iter(|| monte_carlo(black_box(&rs), &config).unwrap()));
}

criterion_group!(benches, degree_lifting, transforms, oracles);
criterion_main!(benches);
