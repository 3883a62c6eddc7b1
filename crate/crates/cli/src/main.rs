//! `liftcode`: build lifted codes, run local correction and testing
//! experiments, and check them against the exhaustive oracles.

use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lifted_codes::analysis::{
    count_nikodym_subsets, greedy_nikodym, nikodym_lower_bound, oracle_equivalence,
    verify_distance_theorem,
};
use lifted_codes::codes::{construct, lift, BaseCode, ConstructionInputs, LiftedCode};
use lifted_codes::degrees::DegreeSet;
use lifted_codes::gf::prime_power;
use lifted_codes::local::{monte_carlo, trial_rng, CodewordSampler, MonteCarloConfig, Scenario, Target};
use lifted_codes::space::FuncTable;
use lifted_codes::{Error, Field, Result};
use rand::Rng;
use serde_json::{json, Map, Value};

#[derive(Parser)]
#[command(name = "liftcode", version, about = "Lifted affine-invariant codes: construction, local algorithms, oracles")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Tsv,
}

#[derive(Clone, Copy, ValueEnum)]
enum BaseArg {
    Parity,
    ParityMulti,
    Rs,
}

#[derive(Clone, Copy, ValueEnum)]
enum TargetArg {
    Uniform,
    Corrupted,
}

#[derive(Clone, Copy, ValueEnum)]
enum CorrectorArg {
    Auto,
    Generic,
    Rs,
}

/// Either `--theorem` with its inputs, or an explicit field tower and base code.
#[derive(Args, Clone, Default)]
struct CodeArgs {
    /// Construction to instantiate (1-4).
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=4))]
    theorem: Option<u8>,
    #[arg(long)]
    k: Option<u32>,
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    p: Option<u32>,
    #[arg(long)]
    n0: Option<u64>,
    /// Number of variables of the lifted code.
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    ell: Option<u32>,
    #[arg(long)]
    s: Option<u32>,
    #[arg(long)]
    c: Option<u32>,
    /// Domain field order.
    #[arg(long = "Q")]
    big_q: Option<u32>,
    /// Value field order (defaults to the characteristic, or Q for rs).
    #[arg(long)]
    q: Option<u32>,
    /// Arity of the base code.
    #[arg(long)]
    t: Option<usize>,
    /// Degree bound of the Reed-Solomon base code.
    #[arg(long)]
    d: Option<u32>,
    #[arg(long, value_enum)]
    base: Option<BaseArg>,
    /// Base degree set: `0,1,2`, or `0:0,1:0` for several variables.
    #[arg(long)]
    base_degs: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Derived parameters and claimed bounds of a construction.
    Params(CodeArgs),
    /// Dimension of a lifted code.
    Dim(CodeArgs),
    /// Degree set of a lifted code.
    LiftDegs(CodeArgs),
    /// Encode message symbols (or a seeded random message) as an evaluation table.
    Encode {
        #[command(flatten)]
        code: CodeArgs,
        /// Comma-separated `F_q` symbols in digit-string form.
        #[arg(long)]
        symbols: Option<String>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Corrupt a codeword (seeded random, or `--input` table JSON).
    Corrupt {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long)]
        errors: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Monte Carlo run of a local corrector.
    Correct {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long)]
        errors: usize,
        #[arg(long)]
        trials: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = TargetArg::Uniform)]
        target: TargetArg,
        #[arg(long, value_enum, default_value_t = CorrectorArg::Auto)]
        corrector: CorrectorArg,
    },
    /// Monte Carlo run of the local tester.
    Test {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long, default_value_t = 0)]
        errors: usize,
        #[arg(long)]
        trials: u64,
        #[arg(long)]
        seed: u64,
        /// Test uniformly random functions instead of corrupted codewords.
        #[arg(long)]
        random: bool,
    },
    /// Relative distances of the base code and its lift.
    Distance(CodeArgs),
    /// Nikodym lower bound, subset scan and greedy search in `F_q^m`.
    Nikodym {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        m: usize,
        /// Count the Nikodym sets among all subsets of this size.
        #[arg(long)]
        size: Option<usize>,
        /// Seed for a greedy minimal Nikodym set.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Compare the restriction and degree-set definitions of the lift.
    Oracle {
        #[command(flatten)]
        code: CodeArgs,
        /// Samples per kind when exhaustive enumeration is out of reach.
        #[arg(long, default_value_t = 10_000)]
        samples: u64,
        #[arg(long)]
        seed: Option<u64>,
    },
}

fn usage<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Usage(msg.into()))
}

fn tower(q: u32, big_q: u32) -> Result<Arc<Field>> {
    Ok(Arc::new(Field::tower(q, big_q)?))
}

fn parse_degrees(text: &str) -> Result<Vec<Vec<u32>>> {
    text.split(',')
        .map(|entry| {
            entry
                .split(':')
                .map(|c| c.trim().parse::<u32>().map_err(|_| Error::Usage(format!("bad degree `{entry}`"))))
                .collect()
        })
        .collect()
}

fn inputs(a: &CodeArgs) -> ConstructionInputs {
    ConstructionInputs { k: a.k, eps: a.eps, delta: a.delta, p: a.p, n0: a.n0, m: a.m, ell: a.ell, s: a.s, c: a.c }
}

fn base_code(a: &CodeArgs) -> Result<BaseCode> {
    let Some(big_q) = a.big_q else {
        return usage("give --theorem or --Q");
    };
    let Some((p, _)) = prime_power(big_q) else {
        return usage(format!("Q = {big_q} is not a prime power"));
    };
    if let Some(text) = &a.base_degs {
        let degrees = parse_degrees(text)?;
        let t = degrees.first().map_or(1, Vec::len);
        let q = a.q.unwrap_or(p);
        let set = DegreeSet::from_degrees(big_q, q, t, degrees)?;
        return BaseCode::from_degrees(tower(q, big_q)?, set);
    }
    match a.base.unwrap_or(BaseArg::Parity) {
        BaseArg::Parity if a.t.unwrap_or(1) == 1 => BaseCode::parity_univariate(tower(a.q.unwrap_or(p), big_q)?),
        BaseArg::Parity | BaseArg::ParityMulti => {
            BaseCode::parity_multivariate(tower(a.q.unwrap_or(p), big_q)?, a.t.unwrap_or(2))
        }
        BaseArg::Rs => {
            let Some(d) = a.d else {
                return usage("--base rs needs --d");
            };
            BaseCode::reed_solomon(tower(a.q.unwrap_or(big_q), big_q)?, d)
        }
    }
}

fn build(a: &CodeArgs) -> Result<(Value, LiftedCode)> {
    if let Some(theorem) = a.theorem {
        let (params, code) = construct(theorem, &inputs(a))?;
        let descriptor = code.descriptor(Some(theorem));
        return Ok((json!({ "params": params, "code": descriptor }), code));
    }
    let Some(m) = a.m else {
        return usage("--m is required");
    };
    let code = lift(base_code(a)?, m)?;
    Ok((json!({ "code": code.descriptor(None) }), code))
}

fn merge(mut head: Value, tail: Value) -> Value {
    if let (Some(h), Value::Object(t)) = (head.as_object_mut(), tail) {
        h.extend(t);
    }
    head
}

fn monte_carlo_json(code: &LiftedCode, config: &MonteCarloConfig) -> Result<Value> {
    let report = monte_carlo(code, config)?;
    Ok(serde_json::to_value(report).expect("reports serialise"))
}

fn run(command: Command) -> Result<Value> {
    Ok(match command {
        Command::Params(a) => {
            let Some(theorem) = a.theorem else {
                return usage("params needs --theorem");
            };
            let (params, code) = construct(theorem, &inputs(&a))?;
            let mut v = serde_json::to_value(params).expect("params serialise");
            v["dim"] = json!(code.dimension());
            v
        }
        Command::Dim(a) => {
            let (head, code) = build(&a)?;
            merge(head, json!({ "dim": code.dimension() }))
        }
        Command::LiftDegs(a) => {
            let (head, code) = build(&a)?;
            merge(head, json!({ "dim": code.dimension(), "degrees": code.degrees().to_vec() }))
        }
        Command::Encode { code: a, symbols, seed } => {
            let (head, code) = build(&a)?;
            let field = code.field().clone();
            let sub = field.subfield_elements(code.value_order())?;
            let symbols = match (symbols, seed) {
                (Some(text), _) => text.split(',').map(|s| field.parse(s.trim())).collect::<Result<Vec<_>>>()?,
                (None, Some(seed)) => {
                    let mut rng = trial_rng(seed, 0);
                    (0..code.dimension()).map(|_| sub[rng.gen_range(0..sub.len())]).collect()
                }
                (None, None) => return usage("encode needs --symbols or --seed"),
            };
            let word = code.encode_symbols(&symbols)?;
            let symbols: Vec<String> = symbols.iter().map(|&e| field.format(e)).collect();
            merge(head, json!({ "symbols": symbols, "function": word.to_json() }))
        }
        Command::Corrupt { code: a, errors, seed, input } => {
            let (head, code) = build(&a)?;
            let sampler = CodewordSampler::new(&code)?;
            let mut rng = trial_rng(seed, 0);
            let word = match input {
                Some(path) => {
                    let text = std::fs::read_to_string(&path)
                        .map_err(|e| Error::Usage(format!("cannot read {}: {e}", path.display())))?;
                    let v: Value = serde_json::from_str(&text).map_err(|e| Error::Usage(format!("bad JSON: {e}")))?;
                    FuncTable::from_json(v.get("function").unwrap_or(&v))?
                }
                None => sampler.sample(&mut rng),
            };
            let (received, positions) = sampler.corrupt(&word, errors, &mut rng)?;
            merge(
                head,
                json!({
                    "seed": seed,
                    "errors": errors,
                    "positions": positions,
                    "codeword": word.to_json(),
                    "received": received.to_json(),
                }),
            )
        }
        Command::Correct { code: a, errors, trials, seed, target, corrector } => {
            let (head, code) = build(&a)?;
            let rs = matches!(code.base().kind(), lifted_codes::codes::BaseKind::ReedSolomon { .. });
            let scenario = match corrector {
                CorrectorArg::Generic => Scenario::CorrectGeneric,
                CorrectorArg::Rs => Scenario::CorrectRs,
                CorrectorArg::Auto if rs => Scenario::CorrectRs,
                CorrectorArg::Auto => Scenario::CorrectGeneric,
            };
            let target = match target {
                TargetArg::Uniform => Target::Uniform,
                TargetArg::Corrupted => Target::Corrupted,
            };
            merge(head, monte_carlo_json(&code, &MonteCarloConfig { scenario, errors, trials, seed, target })?)
        }
        Command::Test { code: a, errors, trials, seed, random } => {
            let (head, code) = build(&a)?;
            let scenario = if random { Scenario::TestRandom } else { Scenario::Test };
            let config = MonteCarloConfig { scenario, errors, trials, seed, target: Target::Uniform };
            merge(head, monte_carlo_json(&code, &config)?)
        }
        Command::Distance(a) => {
            let (head, code) = build(&a)?;
            let report = verify_distance_theorem(code.base(), code.arity())?;
            let (b, l) = (report.delta_base_exact, report.delta_lift_exact);
            merge(
                head,
                merge(
                    json!({
                        "base": *b.numer() as f64 / *b.denom() as f64,
                        "lift": *l.numer() as f64 / *l.denom() as f64,
                    }),
                    serde_json::to_value(&report).expect("reports serialise"),
                ),
            )
        }
        Command::Nikodym { q, m, size, seed } => {
            let field = tower(q, q)?;
            let mut out = json!({ "q": q, "m": m, "points": (q as u64).pow(m as u32), "lower_bound": nikodym_lower_bound(q, m)? });
            if let Some(size) = size {
                let (subsets, nikodym) = count_nikodym_subsets(&field, m, size)?;
                out["size"] = json!(size);
                out["subsets"] = json!(subsets);
                out["nikodym_subsets"] = json!(nikodym);
            }
            if let Some(seed) = seed {
                let set = greedy_nikodym(field, m, seed)?;
                out["seed"] = json!(seed);
                out["greedy_size"] = json!(set.len());
                out["greedy_points"] = json!(set.indices());
            }
            out
        }
        Command::Oracle { code: a, samples, seed } => {
            let (head, code) = build(&a)?;
            let report = oracle_equivalence(code.base(), code.arity(), samples, seed.unwrap_or(0))?;
            if report.mode == "sampled" && seed.is_none() {
                return usage("sampled oracle runs need --seed");
            }
            let codewords = (code.value_order() as u128).checked_pow(code.dimension() as u32);
            let mut v = serde_json::to_value(&report).expect("reports serialise");
            v["codewords"] = json!(codewords.map(|c| c.to_string()));
            if report.mode == "exhaustive" {
                v["codewords"] = json!(report.members_by_degrees);
            }
            merge(head, v)
        }
    })
}

fn tsv_cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

fn render(v: &Value, format: Format) -> String {
    match format {
        Format::Json => v.to_string(),
        Format::Tsv => {
            let empty = Map::new();
            let obj = v.as_object().unwrap_or(&empty);
            let mut rows = Vec::new();
            // nested objects become prefixed columns
            for (k, val) in obj {
                match val {
                    Value::Object(inner) => {
                        rows.extend(inner.iter().map(|(ik, iv)| (format!("{k}.{ik}"), tsv_cell(iv))))
                    }
                    _ => rows.push((k.clone(), tsv_cell(val))),
                }
            }
            let header: Vec<&str> = rows.iter().map(|r| r.0.as_str()).collect();
            let values: Vec<&str> = rows.iter().map(|r| r.1.as_str()).collect();
            format!("{}\n{}", header.join("\t"), values.join("\t"))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli.command) {
        Ok(v) => {
            println!("{}", render(&v, cli.format));
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("liftcode: {e}");
            let code = match e {
                Error::Infeasible { .. } | Error::Guard(_) => 2,
                _ => 1,
            };
            let body = json!({ "error": e.to_string(), "exit_code": code });
            println!("{}", render(&body, cli.format));
            ExitCode::from(code)
        }
    }
}
