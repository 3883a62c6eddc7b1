//! Local correction, local testing, Reed-Solomon decoding and a seeded Monte
//! Carlo harness around them.

use std::cell::Cell;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::codes::{BaseKind, LiftedCode};
use crate::error::{usage, Error, Result};
use crate::gf::{Elem, Field};
use crate::space::{domain_size, index_of, point_of, random_subspace_through, restrict, solve_linear, AffineSubspace, FuncTable};

/// Query access to a table, counting every lookup.
pub struct Oracle<'a> {
    table: &'a FuncTable,
    queries: Cell<usize>,
}

impl<'a> Oracle<'a> {
    pub fn new(table: &'a FuncTable) -> Self {
        Oracle { table, queries: Cell::new(0) }
    }

    pub fn query(&self, x: &[Elem]) -> Elem {
        self.queries.set(self.queries.get() + 1);
        self.table.get(x)
    }

    pub fn queries(&self) -> usize {
        self.queries.get()
    }

    pub fn field(&self) -> &Field {
        self.table.field()
    }

    pub fn arity(&self) -> usize {
        self.table.arity()
    }
}

/// Outcome of one run of a local corrector. `value` is `None` when every
/// attempt failed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorrectorReport {
    pub value: Option<Elem>,
    pub queries: usize,
    pub attempts: usize,
    pub subspace: Option<AffineSubspace>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TestReport {
    pub accept: bool,
    pub queries: usize,
    pub subspace: AffineSubspace,
}

/// Unique decoding radius `⌊(n - d - 1)/2⌋` for `n` evaluation points.
pub fn rs_radius(n: usize, d: u32) -> usize {
    n.saturating_sub(d as usize + 1) / 2
}

/// Berlekamp–Welch: the polynomial of degree at most `d` (coefficients,
/// constant first) that disagrees with `values` on at most
/// [`rs_radius`] of the `points`.
pub fn rs_decode(field: &Field, points: &[Elem], values: &[Elem], d: u32) -> Result<Vec<Elem>> {
    let n = points.len();
    if values.len() != n {
        return usage(format!("{} points but {} values", n, values.len()));
    }
    if d as usize + 1 > n {
        return usage(format!("degree {d} needs more than {n} points"));
    }
    let e = rs_radius(n, d);
    let d = d as usize;
    // unknowns: E_0..E_{e-1} (E monic of degree e), N_0..N_{e+d}
    let width = e + e + d + 1;
    let mut a = Vec::with_capacity(n);
    let mut b = Vec::with_capacity(n);
    for (&x, &y) in points.iter().zip(values) {
        let mut row = Vec::with_capacity(width);
        let mut xp = Elem::ONE;
        let mut powers = Vec::with_capacity(e + d + 1);
        for _ in 0..=e + d {
            powers.push(xp);
            xp = field.mul(xp, x);
        }
        for &pw in &powers[..e] {
            row.push(field.neg(field.mul(y, pw)));
        }
        row.extend_from_slice(&powers);
        a.push(row);
        b.push(field.mul(y, powers[e]));
    }
    let sol = solve_linear(field, &a, &b)
        .ok_or_else(|| Error::DecodeFailure("no error locator fits".into()))?;
    let mut locator: Vec<Elem> = sol[..e].to_vec();
    locator.push(Elem::ONE);
    let numerator = &sol[e..];
    let (quotient, remainder) = poly_divmod(field, numerator, &locator);
    if remainder.iter().any(|c| !c.is_zero()) {
        return Err(Error::DecodeFailure("locator does not divide".into()));
    }
    let mut g = quotient;
    if g.iter().skip(d + 1).any(|c| !c.is_zero()) {
        return Err(Error::DecodeFailure("degree too high".into()));
    }
    g.resize(d + 1, Elem::ZERO);
    let disagreements = points.iter().zip(values).filter(|(&x, &y)| poly_eval(field, &g, x) != y).count();
    if disagreements > e {
        return Err(Error::DecodeFailure(format!("{disagreements} disagreements exceed radius {e}")));
    }
    Ok(g)
}

/// [`rs_decode`] with every element of the field as evaluation point, in
/// canonical order.
pub fn rs_decode_full(field: &Field, values: &[Elem], d: u32) -> Result<Vec<Elem>> {
    let points: Vec<Elem> = field.elements().collect();
    rs_decode(field, &points, values, d)
}

pub fn poly_eval(field: &Field, coeffs: &[Elem], x: Elem) -> Elem {
    coeffs.iter().rev().fold(Elem::ZERO, |acc, &c| field.add(field.mul(acc, x), c))
}

fn poly_divmod(field: &Field, num: &[Elem], den: &[Elem]) -> (Vec<Elem>, Vec<Elem>) {
    let mut rem = num.to_vec();
    let dd = den.iter().rposition(|c| !c.is_zero()).expect("nonzero divisor");
    let lead_inv = field.inv(den[dd]).unwrap();
    let nd = rem.iter().rposition(|c| !c.is_zero());
    let Some(nd) = nd else {
        return (vec![Elem::ZERO], rem);
    };
    if nd < dd {
        return (vec![Elem::ZERO], rem);
    }
    let mut quot = vec![Elem::ZERO; nd - dd + 1];
    for i in (0..=nd - dd).rev() {
        let c = field.mul(rem[i + dd], lead_inv);
        quot[i] = c;
        if c.is_zero() {
            continue;
        }
        for (j, &dj) in den[..=dd].iter().enumerate() {
            rem[i + j] = field.sub(rem[i + j], field.mul(c, dj));
        }
    }
    (quot, rem)
}

/// Subspace corrector for any lifted code: restrict to a random
/// `t`-dimensional subspace through the target, interpolate the base codeword
/// agreeing off the target, and read it at the target.
pub struct GenericCorrector {
    t: usize,
    big_q: u32,
    /// Base codeword basis, each evaluated on all of `F_Q^t`.
    basis: Vec<Vec<Elem>>,
    pub max_attempts: usize,
}

impl GenericCorrector {
    pub fn new(code: &LiftedCode) -> Result<Self> {
        let fam = code.base().fam_code();
        let basis = fam.basis_tables()?.into_iter().map(FuncTable::into_values).collect();
        Ok(GenericCorrector { t: code.base().arity(), big_q: code.field().order(), basis, max_attempts: 3 })
    }

    /// Queries per attempt, `Q^t - 1`.
    pub fn locality(&self) -> usize {
        (self.big_q as usize).pow(self.t as u32) - 1
    }

    pub fn correct<R: Rng + ?Sized>(&self, f: &Oracle, x: &[Elem], rng: &mut R) -> Result<CorrectorReport> {
        let field = f.field();
        if x.len() != f.arity() || field.order() != self.big_q {
            return usage("target point does not match the oracle's domain");
        }
        let before = f.queries();
        let size = self.locality() + 1;
        for attempt in 1..=self.max_attempts {
            let v = random_subspace_through(field, x, self.t, rng)?;
            let mut rows = Vec::with_capacity(size - 1);
            let mut rhs = Vec::with_capacity(size - 1);
            for u in 1..size {
                let y = f.query(&v.point(field, &point_of(u, self.big_q, self.t)));
                rows.push(self.basis.iter().map(|b| b[u]).collect::<Vec<_>>());
                rhs.push(y);
            }
            if let Some(c) = solve_linear(field, &rows, &rhs) {
                let value = field.sum(c.iter().zip(&self.basis).map(|(&ci, b)| field.mul(ci, b[0])));
                return Ok(CorrectorReport {
                    value: Some(value),
                    queries: f.queries() - before,
                    attempts: attempt,
                    subspace: Some(v),
                });
            }
        }
        Ok(CorrectorReport { value: None, queries: f.queries() - before, attempts: self.max_attempts, subspace: None })
    }
}

pub fn correct_generic<R: Rng + ?Sized>(
    f: &Oracle,
    x: &[Elem],
    code: &LiftedCode,
    rng: &mut R,
) -> Result<CorrectorReport> {
    GenericCorrector::new(code)?.correct(f, x, rng)
}

/// Line corrector for lifted Reed-Solomon codes: query `f(x + t b)` for every
/// `t` on a random line, decode, and output the decoded value at `t = 0`.
/// A single line; decoding failure is reported, not retried.
pub fn correct_rs_lifted<R: Rng + ?Sized>(
    f: &Oracle,
    x: &[Elem],
    code: &LiftedCode,
    rng: &mut R,
) -> Result<CorrectorReport> {
    let BaseKind::ReedSolomon { d } = *code.base().kind() else {
        return usage("line decoding needs a lifted Reed-Solomon code");
    };
    let field = f.field();
    if x.len() != f.arity() {
        return usage("target point does not match the oracle's domain");
    }
    let before = f.queries();
    let line = random_subspace_through(field, x, 1, rng)?;
    let points: Vec<Elem> = field.elements().collect();
    let values: Vec<Elem> = points.iter().map(|&t| f.query(&line.point(field, &[t]))).collect();
    let value = rs_decode(field, &points, &values, d).ok().map(|g| g[0]);
    Ok(CorrectorReport { value, queries: f.queries() - before, attempts: 1, subspace: Some(line) })
}

/// A uniformly random `t`-dimensional affine subspace of `F_Q^m`.
pub fn random_subspace<R: Rng + ?Sized>(field: &Field, m: usize, t: usize, rng: &mut R) -> Result<AffineSubspace> {
    let x: Vec<Elem> = (0..m).map(|_| Elem(rng.gen_range(0..field.order()))).collect();
    random_subspace_through(field, &x, t, rng)
}

/// One-sided tester: query a uniformly random `t`-dimensional subspace and
/// accept iff the restriction lies in the base code.
pub fn test_local<R: Rng + ?Sized>(f: &Oracle, code: &LiftedCode, rng: &mut R) -> Result<TestReport> {
    let field = f.field();
    let t = code.base().arity();
    let before = f.queries();
    let v = random_subspace(field, f.arity(), t, rng)?;
    let count = (field.order() as usize).pow(t as u32);
    let values: Vec<Elem> = (0..count).map(|u| f.query(&v.point(field, &point_of(u, field.order(), t)))).collect();
    let restricted = FuncTable::new(f.table.field().clone(), t, f.table.value_order(), values)?;
    debug_assert_eq!(restricted, restrict(f.table, &v)?);
    Ok(TestReport { accept: code.base().contains(&restricted), queries: f.queries() - before, subspace: v })
}

/// What a Monte Carlo trial does.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Scenario {
    /// Subspace corrector on a corrupted codeword.
    CorrectGeneric,
    /// Line corrector with Reed-Solomon decoding on a corrupted codeword.
    CorrectRs,
    /// Tester on a corrupted codeword (`errors = 0` gives codewords).
    Test,
    /// Tester on uniformly random functions.
    TestRandom,
}

impl Scenario {
    pub fn name(self) -> &'static str {
        match self {
            Scenario::CorrectGeneric => "correct_generic",
            Scenario::CorrectRs => "correct_rs",
            Scenario::Test => "test",
            Scenario::TestRandom => "test_random",
        }
    }
}

impl std::str::FromStr for Scenario {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "correct_generic" | "generic" => Scenario::CorrectGeneric,
            "correct_rs" | "rs" => Scenario::CorrectRs,
            "test" => Scenario::Test,
            "test_random" => Scenario::TestRandom,
            _ => return usage(format!("unknown scenario `{s}`")),
        })
    }
}

/// Where correctors are asked to decode.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Target {
    /// A uniformly random point.
    Uniform,
    /// The first corrupted point (uniform if there are no errors).
    Corrupted,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MonteCarloConfig {
    pub scenario: Scenario,
    pub errors: usize,
    pub trials: u64,
    pub seed: u64,
    pub target: Target,
}

/// Success counts with a Wilson 95% interval. For the tester scenarios a
/// success is an acceptance.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MonteCarloReport {
    pub scenario: String,
    pub errors: usize,
    pub trials: u64,
    pub successes: u64,
    pub frequency: Option<f64>,
    pub ci95: Option<[f64; 2]>,
    pub queries_max: usize,
    pub seed: u64,
}

/// Wilson score interval at `z = 1.96`.
pub fn wilson_interval(successes: u64, trials: u64) -> Option<[f64; 2]> {
    if trials == 0 {
        return None;
    }
    let z = 1.959_963_984_540_054_f64;
    let n = trials as f64;
    let p = successes as f64 / n;
    let denom = 1.0 + z * z / n;
    let centre = (p + z * z / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z * z / (4.0 * n * n)).sqrt() / denom;
    Some([(centre - half).max(0.0), (centre + half).min(1.0)])
}

/// Per-trial generator: the run seed with the trial index as stream, so
/// trials are reproducible in any order.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Random codewords as `F_q`-combinations of a precomputed basis.
pub struct CodewordSampler {
    field: std::sync::Arc<Field>,
    m: usize,
    q: u32,
    sub: Vec<Elem>,
    basis: Vec<Vec<Elem>>,
}

impl CodewordSampler {
    pub fn new(code: &LiftedCode) -> Result<Self> {
        let field = code.field().clone();
        let q = code.value_order();
        let sub = field.subfield_elements(q)?;
        let basis = code.basis_tables()?.into_iter().map(FuncTable::into_values).collect();
        Ok(CodewordSampler { field, m: code.arity(), q, sub, basis })
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> FuncTable {
        let n = (self.field.order() as usize).pow(self.m as u32);
        let mut values = vec![Elem::ZERO; n];
        for b in &self.basis {
            let c = self.sub[rng.gen_range(0..self.sub.len())];
            if c.is_zero() {
                continue;
            }
            for (v, &bi) in values.iter_mut().zip(b) {
                *v = self.field.add(*v, self.field.mul(c, bi));
            }
        }
        FuncTable::new(self.field.clone(), self.m, self.q, values).expect("combinations stay in the code")
    }

    pub fn uniform_function<R: Rng + ?Sized>(&self, rng: &mut R) -> FuncTable {
        let n = (self.field.order() as usize).pow(self.m as u32);
        let values = (0..n).map(|_| self.sub[rng.gen_range(0..self.sub.len())]).collect();
        FuncTable::new(self.field.clone(), self.m, self.q, values).expect("values drawn from F_q")
    }

    /// Changes `errors` distinct uniformly random positions to different
    /// uniformly random values of `F_q`; returns the positions in draw order.
    pub fn corrupt<R: Rng + ?Sized>(&self, f: &FuncTable, errors: usize, rng: &mut R) -> Result<(FuncTable, Vec<usize>)> {
        let n = f.len();
        if errors > n {
            return usage(format!("{errors} errors on {n} points"));
        }
        let positions = rand::seq::index::sample(rng, n, errors).into_vec();
        let mut values = f.values().to_vec();
        for &i in &positions {
            let offset = self.sub[rng.gen_range(1..self.sub.len())];
            values[i] = self.field.add(values[i], offset);
        }
        Ok((FuncTable::new(self.field.clone(), self.m, self.q, values)?, positions))
    }
}

pub fn monte_carlo(code: &LiftedCode, config: &MonteCarloConfig) -> Result<MonteCarloReport> {
    let field = code.field().clone();
    let n = domain_size(field.order(), code.arity())?;
    if config.errors > n {
        return usage(format!("{} errors on {n} points", config.errors));
    }
    let sampler = CodewordSampler::new(code)?;
    let generic = match config.scenario {
        Scenario::CorrectGeneric => Some(GenericCorrector::new(code)?),
        Scenario::CorrectRs => {
            if !matches!(code.base().kind(), BaseKind::ReedSolomon { .. }) {
                return usage("scenario correct_rs needs a lifted Reed-Solomon code");
            }
            None
        }
        _ => None,
    };
    let outcomes: Vec<Result<(bool, usize)>> = (0..config.trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = trial_rng(config.seed, trial);
            let word = if config.scenario == Scenario::TestRandom {
                sampler.uniform_function(&mut rng)
            } else {
                sampler.sample(&mut rng)
            };
            let (received, positions) = if config.scenario == Scenario::TestRandom {
                (word.clone(), Vec::new())
            } else {
                sampler.corrupt(&word, config.errors, &mut rng)?
            };
            let oracle = Oracle::new(&received);
            match config.scenario {
                Scenario::CorrectGeneric | Scenario::CorrectRs => {
                    let target = match (config.target, positions.first()) {
                        (Target::Corrupted, Some(&i)) => i,
                        _ => rng.gen_range(0..n),
                    };
                    let x = point_of(target, field.order(), code.arity());
                    let report = match &generic {
                        Some(c) => c.correct(&oracle, &x, &mut rng)?,
                        None => correct_rs_lifted(&oracle, &x, code, &mut rng)?,
                    };
                    debug_assert_eq!(index_of(&x, field.order()), target);
                    Ok((report.value == Some(word.at(target)), report.queries))
                }
                Scenario::Test | Scenario::TestRandom => {
                    let report = test_local(&oracle, code, &mut rng)?;
                    Ok((report.accept, report.queries))
                }
            }
        })
        .collect();
    let mut successes = 0u64;
    let mut queries_max = 0usize;
    for o in outcomes {
        let (ok, q) = o?;
        successes += ok as u64;
        queries_max = queries_max.max(q);
    }
    Ok(MonteCarloReport {
        scenario: config.scenario.name().to_string(),
        errors: config.errors,
        trials: config.trials,
        successes,
        frequency: (config.trials > 0).then(|| successes as f64 / config.trials as f64),
        ci95: wilson_interval(successes, config.trials),
        queries_max,
        seed: config.seed,
    })
}
