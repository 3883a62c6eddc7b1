//! Acceptance suite: one line per criterion, nonzero exit if any fails.

use std::sync::Arc;
use std::time::{Duration, Instant};

use lifted_codes::analysis::{
    count_nikodym_subsets, min_distance_exhaustive, nikodym_lower_bound, oracle_equivalence, verify_affine_closure,
    verify_distance_theorem,
};
use lifted_codes::codes::{construct, lift, BaseCode, ConstructionInputs};
use lifted_codes::degrees::affine_invariant_degree_sets;
use lifted_codes::local::{
    monte_carlo, poly_eval, rs_decode_full, rs_radius, trial_rng, CodewordSampler, GenericCorrector, MonteCarloConfig,
    Oracle, Scenario, Target,
};
use lifted_codes::space::{affine_subspaces, point_of};
use lifted_codes::{Elem, Field};
use num_rational::Ratio;
use rand::Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn tower(q: u32, big_q: u32) -> Arc<Field> {
    Arc::new(Field::tower(q, big_q).unwrap())
}

fn c1_oracle_equivalence() -> Outcome {
    let base = BaseCode::parity_univariate(tower(2, 4)).unwrap();
    let r = oracle_equivalence(&base, 2, 0, 0).unwrap();
    let pass = r.mode == "exhaustive"
        && r.functions == 65_536
        && r.equal
        && r.members_by_restriction == 128
        && r.members_by_degrees == 128
        && r.dimension == 7;
    outcome(
        pass,
        format!(
            "{} functions, {} by restriction, {} by degrees, {} disagreements, dim {}",
            r.functions, r.members_by_restriction, r.members_by_degrees, r.disagreements, r.dimension
        ),
    )
}

fn c2_theorem3_dimension() -> Outcome {
    let (params, code) = construct(3, &ConstructionInputs { eps: Some(0.25), m: Some(3), ..Default::default() }).unwrap();
    let (ell, m) = (params.ell, params.m as u32);
    let formula = 2u64.pow(m * ell) - (m as u64 + 1).pow(ell);
    let dim = code.dimension() as u64;
    outcome(ell == 2 && dim == formula && dim == 48, format!("ell={ell} m={m}: dim {dim}, formula {formula}"))
}

fn c3_theorem1_dimension() -> Outcome {
    let (params, code) = construct(1, &ConstructionInputs { k: Some(4), m: Some(5), ..Default::default() }).unwrap();
    let bound = 10; // C(5, 2)
    let dim = code.dimension();
    outcome(params.big_q == 4 && dim >= bound, format!("Q=4 m=5: dim {dim} >= {bound}"))
}

fn c4_theorem4_dimension() -> Outcome {
    let (pa, a) = construct(4, &ConstructionInputs { m: Some(2), s: Some(4), c: Some(2), ..Default::default() }).unwrap();
    let bound_a = 5 * 256 / 16;
    let start = Instant::now();
    let (pb, b) = construct(4, &ConstructionInputs { m: Some(2), s: Some(7), c: Some(6), ..Default::default() }).unwrap();
    let dim_b = b.dimension();
    let elapsed = start.elapsed();
    // (4^6 - (5/4) 3^6 + 1/4) / 4^6 * 16384, scaled by 4 to stay integral
    let bound_b = (4 * 4096 - 5 * 729 + 1) * 16384 / (4 * 4096);
    let dim_a = a.dimension();
    outcome(
        pa.big_q == 16 && pb.big_q == 128 && dim_a >= bound_a && dim_b >= bound_b && elapsed < Duration::from_secs(600),
        format!("(a) Q=16: dim {dim_a} >= {bound_a}; (b) Q=128: dim {dim_b} >= {bound_b} in {elapsed:.1?}"),
    )
}

fn c5_distance_counterexample() -> Outcome {
    let field = tower(2, 4);
    let degrees = lifted_codes::degrees::DegreeSet::univariate(4, 2, &[0, 1, 2]).unwrap();
    let base = BaseCode::from_degrees(field, degrees).unwrap();
    let lifted = lift(base.clone(), 2).unwrap();
    let db = min_distance_exhaustive(&base.fam_code()).unwrap();
    let dl = min_distance_exhaustive(&lifted).unwrap();
    outcome(
        db == Ratio::new(1, 2) && dl == Ratio::new(3, 8) && lifted.dimension() == 7,
        format!("delta(F) = {db}, delta(Lift_2) = {dl} over {} codewords", 1u32 << lifted.dimension()),
    )
}

fn c6_distance_sweep() -> Outcome {
    let mut points = 0;
    let mut violations = Vec::new();
    let mut notes = Vec::new();
    // (Q, q) from the criterion, then Q = 2 and Q = 3 where the small-field bound applies
    for (big_q, q) in [(4u32, 2u32), (8, 2), (2, 2), (3, 3)] {
        let field = tower(q, big_q);
        for d in affine_invariant_degree_sets(big_q, q, 1).unwrap() {
            if d.is_empty() || d.len() == big_q as usize {
                continue;
            }
            let base = BaseCode::from_degrees(field.clone(), d.clone()).unwrap();
            let r = verify_distance_theorem(&base, 2).unwrap();
            points += 1;
            let degs: Vec<u32> = d.iter().map(|v| v[0]).collect();
            let label = format!("Q={big_q} D={degs:?}: {} -> {}", r.delta_base, r.delta_lift);
            if !r.lower {
                notes.push(format!("{label} below delta - Q^-t"));
            }
            let mut failed = Vec::new();
            if !r.upper {
                failed.push("upper");
            }
            if !r.general_strict {
                failed.push(if r.general { "general bound holds only with equality" } else { "general bound" });
            }
            if r.small_field == Some(false) {
                failed.push("small-field bound");
            }
            if !failed.is_empty() {
                violations.push(format!("{label} ({})", failed.join(", ")));
            }
        }
    }
    let mut detail = format!("{points} base codes, {} violations", violations.len());
    for v in violations.iter().chain(&notes) {
        detail.push_str("; ");
        detail.push_str(v);
    }
    outcome(violations.is_empty() && notes.is_empty(), detail)
}

fn c7_generic_corrector() -> Outcome {
    let (_, code) = construct(1, &ConstructionInputs { k: Some(4), m: Some(3), ..Default::default() }).unwrap();
    let corrector = GenericCorrector::new(&code).unwrap();
    let sampler = CodewordSampler::new(&code).unwrap();
    let trials = 1000u64;
    let mut successes = 0u64;
    let mut per_attempt_ok = true;
    let seed = 2024;
    for trial in 0..trials {
        let mut rng = trial_rng(seed, trial);
        let word = sampler.sample(&mut rng);
        let (received, positions) = sampler.corrupt(&word, 1, &mut rng).unwrap();
        let oracle = Oracle::new(&received);
        let x = point_of(positions[0], 4, 3);
        let report = corrector.correct(&oracle, &x, &mut rng).unwrap();
        per_attempt_ok &= report.attempts >= 1 && report.queries == 3 * report.attempts;
        successes += (report.value == Some(word.at(positions[0]))) as u64;
    }
    let ci = lifted_codes::local::wilson_interval(successes, trials).unwrap();
    let freq = successes as f64 / trials as f64;
    outcome(
        freq >= 2.0 / 3.0 && ci[0] > 0.60 && per_attempt_ok && code.block_length() == 64,
        format!("{successes}/{trials} = {freq:.3}, ci95 [{:.3}, {:.3}], 3 queries per attempt: {per_attempt_ok}", ci[0], ci[1]),
    )
}

fn c8_rs_corrector() -> Outcome {
    let (params, code) = construct(4, &ConstructionInputs { m: Some(2), s: Some(4), c: Some(2), ..Default::default() }).unwrap();
    let cfg = MonteCarloConfig { scenario: Scenario::CorrectRs, errors: 10, trials: 1000, seed: 7, target: Target::Uniform };
    let r = monte_carlo(&code, &cfg).unwrap();
    let freq = r.frequency.unwrap();
    outcome(
        params.big_q == 16 && freq >= 2.0 / 3.0 && r.queries_max <= 16,
        format!("{}/{} = {freq:.3}, max queries {}", r.successes, r.trials, r.queries_max),
    )
}

fn c9_tester() -> Vec<(String, Outcome)> {
    let code = lift(BaseCode::parity_univariate(tower(2, 4)).unwrap(), 2).unwrap();
    let run = |scenario, errors, trials| {
        monte_carlo(&code, &MonteCarloConfig { scenario, errors, trials, seed: 99, target: Target::Uniform }).unwrap()
    };
    let complete = run(Scenario::Test, 0, 1000);
    let a = outcome(
        complete.successes == complete.trials && complete.trials == 1000,
        format!("{}/{} codewords accepted", complete.successes, complete.trials),
    );

    // exact rejection: lines through a fixed point over all lines
    let field = tower(4, 4);
    let lines = affine_subspaces(&field, 2, 1).unwrap();
    let origin = vec![Elem::ZERO; 2];
    let through = lines.iter().filter(|l| l.contains(&field, &origin)).count();
    let exact = through as f64 / lines.len() as f64;
    let trials = 10_000u64;
    let flipped = run(Scenario::Test, 1, trials);
    let rejection = 1.0 - flipped.frequency.unwrap();
    let sigma = (exact * (1.0 - exact) / trials as f64).sqrt();
    let b = outcome(
        (rejection - exact).abs() <= 3.0 * sigma,
        format!("rejection {rejection:.4} vs exact {through}/{} = {exact:.4} (3 sigma = {:.4})", lines.len(), 3.0 * sigma),
    );

    let random = run(Scenario::TestRandom, 0, trials);
    let reject_random = 1.0 - random.frequency.unwrap();
    let c = outcome(reject_random > 0.9, format!("rejection on random functions {reject_random:.4} (needs > 0.9)"));
    vec![("9a".into(), a), ("9b".into(), b), ("9c".into(), c)]
}

fn c10_nikodym() -> Outcome {
    let bound = nikodym_lower_bound(4, 2).unwrap();
    let (total, hits) = count_nikodym_subsets(&tower(4, 4), 2, 6).unwrap();
    outcome(bound == 7 && total == 8008 && hits == 0, format!("bound {bound}; {hits} Nikodym sets among {total} six-point subsets"))
}

fn c11_affine_closure() -> Outcome {
    let code = lift(BaseCode::parity_univariate(tower(2, 4)).unwrap(), 2).unwrap();
    let r = verify_affine_closure(&code).unwrap();
    outcome(
        r.maps == 4096 && r.codewords == 128 && r.violations == 0,
        format!("{} maps ({} singular) x {} codewords, {} violations", r.maps, r.singular_maps, r.codewords, r.violations),
    )
}

fn c12_rs_decoder() -> Outcome {
    let mut exact_failures = 0u64;
    let mut contract_failures = 0u64;
    let mut cases = 0u64;
    for big_q in [8u32, 16] {
        let field = Field::tower(big_q, big_q).unwrap();
        let points: Vec<Elem> = field.elements().collect();
        let n = points.len();
        for d in 0..=big_q - 2 {
            let radius = rs_radius(n, d);
            for trial in 0..1000u64 {
                let mut rng = trial_rng(big_q as u64 * 1000 + d as u64, trial);
                let coeffs: Vec<Elem> = (0..=d).map(|_| Elem(rng.gen_range(0..big_q))).collect();
                let word: Vec<Elem> = points.iter().map(|&x| poly_eval(&field, &coeffs, x)).collect();
                for errors in [rng.gen_range(0..=radius), radius + 1] {
                    if errors > n {
                        continue;
                    }
                    let mut received = word.clone();
                    for i in rand::seq::index::sample(&mut rng, n, errors) {
                        received[i] = field.add(received[i], Elem(rng.gen_range(1..big_q)));
                    }
                    let decoded = rs_decode_full(&field, &received, d);
                    cases += 1;
                    if errors <= radius {
                        exact_failures += (decoded.as_ref().ok() != Some(&coeffs)) as u64;
                    } else if let Ok(g) = decoded {
                        let far = points.iter().zip(&received).filter(|(&x, &y)| poly_eval(&field, &g, x) != y).count();
                        contract_failures += (g.len() > d as usize + 1 || far > radius) as u64;
                    }
                }
            }
        }
    }
    outcome(
        exact_failures == 0 && contract_failures == 0,
        format!("{cases} decodes: {exact_failures} wrong within radius, {contract_failures} contract breaches at radius + 1"),
    )
}

fn main() {
    type Criterion = (&'static str, &'static str, Option<u64>, fn() -> Outcome);
    let criteria: [Criterion; 11] = [
        ("1", "oracle equivalence", Some(60), c1_oracle_equivalence),
        ("2", "theorem 3 dimension", Some(5), c2_theorem3_dimension),
        ("3", "theorem 1 dimension bound", None, c3_theorem1_dimension),
        ("4", "theorem 4 dimension claims", Some(600), c4_theorem4_dimension),
        ("5", "distance counterexample", None, c5_distance_counterexample),
        ("6", "distance theorem sweep", None, c6_distance_sweep),
        ("7", "generic local corrector", None, c7_generic_corrector),
        ("8", "line corrector for lifted Reed-Solomon", None, c8_rs_corrector),
        ("10", "Nikodym lower bound", Some(60), c10_nikodym),
        ("11", "affine closure", Some(60), c11_affine_closure),
        ("12", "Reed-Solomon decoder", None, c12_rs_decoder),
    ];
    let mut failed = Vec::new();
    let mut report = |id: &str, name: &str, limit: Option<u64>, o: Outcome, took: Duration| {
        let in_time = limit.is_none_or(|s| took <= Duration::from_secs(s));
        let pass = o.pass && in_time;
        let limit = limit.map(|s| format!(", limit {s} s")).unwrap_or_default();
        println!("criterion {id:>3} {} {name}: {} ({took:.2?}{limit})", if pass { "PASS" } else { "FAIL" }, o.detail);
        if !pass {
            failed.push(id.to_string());
        }
    };
    for (id, name, limit, run) in criteria.iter().take(8) {
        let start = Instant::now();
        let o = run();
        report(id, name, *limit, o, start.elapsed());
    }
    let start = Instant::now();
    for (id, o) in c9_tester() {
        report(&id, "local tester", None, o, start.elapsed());
    }
    for (id, name, limit, run) in criteria.iter().skip(8) {
        let start = Instant::now();
        let o = run();
        report(id, name, *limit, o, start.elapsed());
    }
    if failed.is_empty() {
        println!("acceptance: all criteria pass");
    } else {
        println!("acceptance: {} failing: {}", failed.len(), failed.join(", "));
        std::process::exit(1);
    }
}
