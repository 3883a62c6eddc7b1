//! Exhaustive oracles: minimum distance and weight distributions, the
//! restriction-versus-degree-set equivalence, affine closure, and Nikodym
//! sets.

use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::codes::{lift, BaseCode, LiftedCode, MemberMode};
use crate::degrees::{lift_degree_set, DegreeSet};
use crate::error::{usage, Error, Result};
use crate::gf::{Elem, Field};
use crate::space::{
    affine_subspaces, compose_affine, domain_size, linear_subspaces, monomial_trace_function, point_of, rref,
    AffineMap, FuncTable,
};

/// Most codewords enumerated directly.
pub const EXHAUSTIVE_LIMIT: u64 = 1 << 24;
/// Most dual codewords enumerated on the way to MacWilliams (binary only).
pub const DUAL_LIMIT: u64 = 1 << 28;
/// Most functions enumerated by the exhaustive equivalence oracle.
pub const FUNCTION_LIMIT: u64 = 1 << 20;

fn count_guard(q: u32, dim: usize, limit: u64, what: &str) -> Result<u64> {
    (q as u64)
        .checked_pow(dim as u32)
        .filter(|&c| c <= limit)
        .ok_or_else(|| Error::Guard(format!("{q}^{dim} {what} exceed the limit {limit}; use Monte Carlo instead")))
}

/// Rows of a generator matrix: the code's `F_q`-basis tables.
pub fn generator_matrix(code: &LiftedCode) -> Result<Vec<Vec<Elem>>> {
    Ok(code.basis_tables()?.into_iter().map(FuncTable::into_values).collect())
}

/// Generator of the dual code (under the standard dot product) from a
/// generator matrix with linearly independent rows.
pub fn dual_generator(field: &Field, n: usize, rows: &[Vec<Elem>]) -> Vec<Vec<Elem>> {
    let mut g = rows.to_vec();
    let pivots = rref(field, &mut g);
    (0..n)
        .filter(|j| !pivots.contains(j))
        .map(|j| {
            let mut h = vec![Elem::ZERO; n];
            h[j] = Elem::ONE;
            for (row, &p) in g.iter().zip(&pivots) {
                h[p] = field.neg(row[j]);
            }
            h
        })
        .collect()
}

/// Number of codewords of each weight `0..=n` in the span of `rows` over
/// `F_q`, by enumerating every combination.
pub fn enumerate_weights(field: &Field, q: u32, n: usize, rows: &[Vec<Elem>], limit: u64) -> Result<Vec<u64>> {
    count_guard(q, rows.len(), limit, "codewords")?;
    if q == 2 {
        return Ok(enumerate_binary(rows, n));
    }
    let sub = field.subfield_elements(q)?;
    let k = rows.len();
    let mut counts = vec![0u64; n + 1];
    let mut word = vec![Elem::ZERO; n];
    let mut digits = vec![0usize; k];
    counts[0] += 1;
    // odometer over messages; each digit change adds a multiple of its row
    loop {
        let mut i = 0;
        loop {
            if i == k {
                return Ok(counts);
            }
            let old = sub[digits[i]];
            digits[i] = (digits[i] + 1) % sub.len();
            let delta = field.sub(sub[digits[i]], old);
            for (w, &r) in word.iter_mut().zip(&rows[i]) {
                *w = field.add(*w, field.mul(delta, r));
            }
            if digits[i] != 0 {
                break;
            }
            i += 1;
        }
        counts[word.iter().filter(|w| !w.is_zero()).count()] += 1;
    }
}

fn enumerate_binary(rows: &[Vec<Elem>], n: usize) -> Vec<u64> {
    let words = n.div_ceil(64);
    let packed: Vec<Vec<u64>> = rows
        .iter()
        .map(|r| {
            let mut bits = vec![0u64; words];
            for (j, e) in r.iter().enumerate() {
                if e.0 & 1 == 1 {
                    bits[j / 64] |= 1 << (j % 64);
                }
            }
            bits
        })
        .collect();
    let k = rows.len();
    // split the Gray code on the top bits so chunks can run in parallel
    let split = k.min(6);
    let low = k - split;
    let chunks: Vec<Vec<u64>> = (0u64..1 << split)
        .into_par_iter()
        .map(|hi| {
            let mut counts = vec![0u64; n + 1];
            let mut cur = vec![0u64; words];
            for (b, row) in packed[low..].iter().enumerate() {
                if hi >> b & 1 == 1 {
                    cur.iter_mut().zip(row).for_each(|(c, r)| *c ^= r);
                }
            }
            counts[cur.iter().map(|w| w.count_ones() as usize).sum::<usize>()] += 1;
            for step in 1u64..1 << low {
                let flip = step.trailing_zeros() as usize;
                cur.iter_mut().zip(&packed[flip]).for_each(|(c, r)| *c ^= r);
                counts[cur.iter().map(|w| w.count_ones() as usize).sum::<usize>()] += 1;
            }
            counts
        })
        .collect();
    let mut counts = vec![0u64; n + 1];
    for c in chunks {
        counts.iter_mut().zip(c).for_each(|(a, b)| *a += b);
    }
    counts
}

fn binomial_big(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::from(0);
    }
    let mut acc = BigInt::from(1);
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// MacWilliams transform: the weight distribution of `C` from that of its
/// dual `C⊥` of dimension `dual_dim`.
pub fn macwilliams(dual_counts: &[u64], q: u32, dual_dim: usize) -> Result<Vec<BigUint>> {
    let n = dual_counts.len() - 1;
    let q_big = BigInt::from(q);
    let scale = q_big.pow(dual_dim as u32);
    (0..=n)
        .map(|j| {
            let mut total = BigInt::from(0);
            for (i, &a) in dual_counts.iter().enumerate() {
                if a == 0 {
                    continue;
                }
                let mut k = BigInt::from(0);
                for s in 0..=j.min(i) {
                    if j - s > n - i {
                        continue;
                    }
                    let term = binomial_big(i, s) * binomial_big(n - i, j - s) * BigInt::from(q - 1).pow((j - s) as u32);
                    if s % 2 == 0 {
                        k += term;
                    } else {
                        k -= term;
                    }
                }
                total += k * BigInt::from(a);
            }
            if &total % &scale != BigInt::from(0) {
                return Err(Error::Domain("MacWilliams transform is not integral".into()));
            }
            (total / &scale).to_biguint().ok_or_else(|| Error::Domain("negative weight count".into()))
        })
        .collect()
}

/// How a weight distribution was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightMethod {
    Direct,
    Dual,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightDistribution {
    pub counts: Vec<BigUint>,
    pub method: WeightMethod,
}

impl WeightDistribution {
    pub fn min_nonzero_weight(&self) -> Option<usize> {
        self.counts.iter().enumerate().skip(1).find(|(_, c)| **c != BigUint::from(0u32)).map(|(w, _)| w)
    }
}

/// Exact weight distribution, through the smaller of the code and its dual.
pub fn weight_distribution(code: &LiftedCode) -> Result<WeightDistribution> {
    let q = code.value_order();
    let n = code.block_length();
    let k = code.dimension();
    let field = code.field();
    let rows = generator_matrix(code)?;
    let dual_dim = n - k;
    if k <= dual_dim || q != 2 || count_guard(q, k, EXHAUSTIVE_LIMIT, "codewords").is_ok() {
        let counts = enumerate_weights(field, q, n, &rows, EXHAUSTIVE_LIMIT)?;
        return Ok(WeightDistribution { counts: counts.into_iter().map(BigUint::from).collect(), method: WeightMethod::Direct });
    }
    let dual = dual_generator(field, n, &rows);
    let dual_counts = enumerate_weights(field, q, n, &dual, DUAL_LIMIT)?;
    Ok(WeightDistribution { counts: macwilliams(&dual_counts, q, dual_dim)?, method: WeightMethod::Dual })
}

/// `δ` by enumerating every codeword, within [`EXHAUSTIVE_LIMIT`].
pub fn min_distance_exhaustive(code: &LiftedCode) -> Result<Ratio<u64>> {
    let rows = generator_matrix(code)?;
    let counts = enumerate_weights(code.field(), code.value_order(), code.block_length(), &rows, EXHAUSTIVE_LIMIT)?;
    let w = counts.iter().enumerate().skip(1).find(|(_, &c)| c > 0).map(|(w, _)| w);
    let w = w.ok_or_else(|| Error::Domain("the zero code has no minimum distance".into()))?;
    Ok(Ratio::new(w as u64, code.block_length() as u64))
}

/// `δ` through [`weight_distribution`].
pub fn min_distance(code: &LiftedCode) -> Result<Ratio<u64>> {
    let w = weight_distribution(code)?
        .min_nonzero_weight()
        .ok_or_else(|| Error::Domain("the zero code has no minimum distance".into()))?;
    Ok(Ratio::new(w as u64, code.block_length() as u64))
}

/// The inequalities relating `δ(F)` and `δ(Lift_m(F))`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DistanceReport {
    #[serde(rename = "Q")]
    pub big_q: u32,
    pub q: u32,
    pub t: usize,
    pub m: usize,
    pub base_degrees: Vec<Vec<u32>>,
    pub delta_base: String,
    pub delta_lift: String,
    /// `δ(L) <= δ(F)`.
    pub upper: bool,
    /// `δ(L) >= δ(F) - Q^{-t}`.
    pub lower: bool,
    /// `δ(L) >= δ(F)` where `Q ∈ {2, 3}` and `δ(F) > Q^{-t}`; `None` elsewhere.
    pub small_field: Option<bool>,
    /// `δ(L) > δ(F) - (1 - δ(F))/(Q^t - 1)`.
    pub general_strict: bool,
    /// The same bound with `>=`.
    pub general: bool,
    #[serde(skip)]
    pub delta_base_exact: Ratio<u64>,
    #[serde(skip)]
    pub delta_lift_exact: Ratio<u64>,
}

impl DistanceReport {
    /// Every inequality as stated, the general bound strictly.
    pub fn all_hold(&self) -> bool {
        self.upper && self.lower && self.small_field.unwrap_or(true) && self.general_strict
    }
}

fn ratio_i(r: Ratio<u64>) -> Ratio<i128> {
    Ratio::new(*r.numer() as i128, *r.denom() as i128)
}

pub fn verify_distance_theorem(base: &BaseCode, m: usize) -> Result<DistanceReport> {
    let fam = base.fam_code();
    let lifted = lift(base.clone(), m)?;
    let delta_f = min_distance(&fam)?;
    let delta_l = min_distance(&lifted)?;
    let big_q = base.field().order();
    let qt = (big_q as i128).pow(base.arity() as u32);
    let (f, l) = (ratio_i(delta_f), ratio_i(delta_l));
    let inv_qt = Ratio::new(1, qt);
    let one = Ratio::from_integer(1);
    let bound = f - (one - f) / Ratio::from_integer(qt - 1);
    Ok(DistanceReport {
        big_q,
        q: base.value_order(),
        t: base.arity(),
        m,
        base_degrees: base.degrees().to_vec(),
        delta_base: delta_f.to_string(),
        delta_lift: delta_l.to_string(),
        upper: l <= f,
        lower: l >= f - inv_qt,
        small_field: (big_q <= 3 && f > inv_qt).then_some(l >= f),
        general_strict: l > bound,
        general: l >= bound,
        delta_base_exact: delta_f,
        delta_lift_exact: delta_l,
    })
}

/// Checks every `t`-dimensional restriction against the base code, with the
/// subspaces' point lists computed once.
pub struct RestrictionChecker {
    base: BaseCode,
    subspaces: Vec<Vec<usize>>,
}

impl RestrictionChecker {
    pub fn new(code: &LiftedCode) -> Result<Self> {
        let field = code.field();
        let subspaces = affine_subspaces(field, code.arity(), code.base().arity())?
            .iter()
            .map(|v| v.point_indices(field))
            .collect();
        Ok(RestrictionChecker { base: code.base().clone(), subspaces })
    }

    pub fn contains(&self, f: &FuncTable) -> bool {
        let field = self.base.field();
        self.subspaces.iter().all(|pts| {
            let values = pts.iter().map(|&i| f.at(i)).collect();
            let r = FuncTable::new(field.clone(), self.base.arity(), f.value_order(), values);
            r.is_ok_and(|r| self.base.contains(&r))
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EquivalenceReport {
    pub mode: String,
    pub functions: u64,
    pub members_by_restriction: u64,
    pub members_by_degrees: u64,
    pub disagreements: u64,
    pub dimension: usize,
    pub equal: bool,
}

/// Compares the restriction definition of the lift with the degree-set
/// description. Exhaustive over all `F_Q^m -> F_q` within
/// [`FUNCTION_LIMIT`]; otherwise `samples` random codewords, random
/// functions and one-point perturbations of codewords.
pub fn oracle_equivalence(base: &BaseCode, m: usize, samples: u64, seed: u64) -> Result<EquivalenceReport> {
    let code = lift(base.clone(), m)?;
    let field = code.field().clone();
    let q = code.value_order();
    let n = domain_size(field.order(), m)?;
    let checker = RestrictionChecker::new(&code)?;
    let sub = field.subfield_elements(q)?;
    let exhaustive = (sub.len() as u64).checked_pow(n as u32).filter(|&c| c <= FUNCTION_LIMIT);
    let judge = |f: &FuncTable| -> (bool, bool) {
        let by_res = checker.contains(f);
        let by_deg = code.member(f, MemberMode::ByDegrees).expect("shapes match");
        (by_res, by_deg)
    };
    let outcomes: Vec<(bool, bool)> = match exhaustive {
        Some(total) => (0..total)
            .into_par_iter()
            .map(|mut index| {
                let values = (0..n)
                    .map(|_| {
                        let v = sub[(index % sub.len() as u64) as usize];
                        index /= sub.len() as u64;
                        v
                    })
                    .collect();
                judge(&FuncTable::new(field.clone(), m, q, values).expect("values in F_q"))
            })
            .collect(),
        None => {
            let sampler = crate::local::CodewordSampler::new(&code)?;
            (0..3 * samples)
                .into_par_iter()
                .map(|i| {
                    let mut rng = crate::local::trial_rng(seed, i);
                    let f = match i % 3 {
                        0 => sampler.sample(&mut rng),
                        1 => sampler.uniform_function(&mut rng),
                        _ => sampler.corrupt(&sampler.sample(&mut rng), 1, &mut rng).expect("one error fits").0,
                    };
                    judge(&f)
                })
                .collect()
        }
    };
    let members_by_restriction = outcomes.iter().filter(|o| o.0).count() as u64;
    let members_by_degrees = outcomes.iter().filter(|o| o.1).count() as u64;
    let disagreements = outcomes.iter().filter(|o| o.0 != o.1).count() as u64;
    Ok(EquivalenceReport {
        mode: if exhaustive.is_some() { "exhaustive" } else { "sampled" }.into(),
        functions: outcomes.len() as u64,
        members_by_restriction,
        members_by_degrees,
        disagreements,
        dimension: code.dimension(),
        equal: disagreements == 0,
    })
}

/// `Deg(Lift_m(F))` computed without degree-set lifting: `d` belongs iff
/// every `Tr(λ x^d)` passes the restriction test.
pub fn degree_set_by_restriction(base: &BaseCode, m: usize) -> Result<DegreeSet> {
    let code = lift(base.clone(), m)?;
    let field = code.field().clone();
    let q = code.value_order();
    let checker = RestrictionChecker::new(&code)?;
    let mut out = DegreeSet::empty(field.order(), q, m)?;
    let size = out.universe_size();
    let keep: Vec<bool> = (0..size)
        .into_par_iter()
        .map(|i| {
            let d = out.degree_at(i);
            field.elements().all(|lambda| {
                let f = monomial_trace_function(field.clone(), lambda, &d, q).expect("degree in range");
                checker.contains(&f)
            })
        })
        .collect();
    for (i, k) in keep.into_iter().enumerate() {
        if k {
            let d = out.degree_at(i);
            out.insert(&d)?;
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClosureReport {
    pub maps: u64,
    pub singular_maps: u64,
    pub codewords: u64,
    pub violations: u64,
}

/// Checks `f ∘ A ∈ L` for every affine map `A` of `F_Q^m` (singular ones
/// included) and every codeword `f`; falls back to a basis when the code
/// has more than `2^12` words, which suffices by linearity.
pub fn verify_affine_closure(code: &LiftedCode) -> Result<ClosureReport> {
    let field = code.field().clone();
    let big_q = field.order();
    let m = code.arity();
    let maps = count_guard(big_q, m * m + m, 1 << 20, "affine maps")?;
    let words: Vec<FuncTable> = match count_guard(code.value_order(), code.dimension(), 1 << 12, "codewords") {
        Ok(total) => {
            let sub = field.subfield_elements(code.value_order())?;
            (0..total)
                .map(|mut index| {
                    let msg: Vec<Elem> = (0..code.dimension())
                        .map(|_| {
                            let v = sub[(index % sub.len() as u64) as usize];
                            index /= sub.len() as u64;
                            v
                        })
                        .collect();
                    code.encode_symbols(&msg)
                })
                .collect::<Result<_>>()?
        }
        Err(_) => code.basis_tables()?,
    };
    let results: Vec<(bool, u64)> = (0..maps)
        .into_par_iter()
        .map(|index| {
            let e = point_of(index as usize, big_q, m * m + m);
            let matrix = (0..m).map(|i| e[i * m..(i + 1) * m].to_vec()).collect();
            let a = AffineMap::new(&field, matrix, e[m * m..].to_vec()).expect("square matrix");
            let bad = words
                .iter()
                .filter(|w| !code.member(&compose_affine(w, &a).expect("same arity"), MemberMode::ByDegrees).expect("same domain"))
                .count() as u64;
            (a.is_invertible(), bad)
        })
        .collect();
    Ok(ClosureReport {
        maps,
        singular_maps: results.iter().filter(|r| !r.0).count() as u64,
        codewords: words.len() as u64,
        violations: results.iter().map(|r| r.1).sum(),
    })
}

/// A set of points of `F_q^m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointSet {
    field: Arc<Field>,
    m: usize,
    members: Vec<bool>,
}

impl PointSet {
    pub fn empty(field: Arc<Field>, m: usize) -> Result<Self> {
        let n = domain_size(field.order(), m)?;
        Ok(PointSet { field, m, members: vec![false; n] })
    }

    pub fn full(field: Arc<Field>, m: usize) -> Result<Self> {
        let mut s = Self::empty(field, m)?;
        s.members.iter_mut().for_each(|b| *b = true);
        Ok(s)
    }

    pub fn from_indices(field: Arc<Field>, m: usize, indices: &[usize]) -> Result<Self> {
        let mut s = Self::empty(field, m)?;
        for &i in indices {
            if i >= s.members.len() {
                return usage(format!("point index {i} out of range"));
            }
            s.members[i] = true;
        }
        Ok(s)
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn arity(&self) -> usize {
        self.m
    }

    pub fn len(&self) -> usize {
        self.members.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn contains_index(&self, i: usize) -> bool {
        self.members[i]
    }

    pub fn insert(&mut self, i: usize) {
        self.members[i] = true;
    }

    pub fn remove(&mut self, i: usize) {
        self.members[i] = false;
    }

    /// Sorted member indices.
    pub fn indices(&self) -> Vec<usize> {
        self.members.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i).collect()
    }

    pub fn complement(&self) -> PointSet {
        PointSet { field: self.field.clone(), m: self.m, members: self.members.iter().map(|b| !b).collect() }
    }
}

/// Punctured lines `{x + t y : t ≠ 0}` of `F_q^m`, one direction per
/// projective point, as point-index lists grouped by `x`.
pub struct PuncturedLines {
    lines: Vec<Vec<Vec<usize>>>,
}

impl PuncturedLines {
    pub fn new(field: &Field, m: usize) -> Result<Self> {
        let big_q = field.order();
        let n = domain_size(big_q, m)?;
        let dirs: Vec<Vec<Elem>> = linear_subspaces(field, m, 1)?.into_iter().map(|mut b| b.remove(0)).collect();
        let lines = (0..n)
            .map(|i| {
                let x = point_of(i, big_q, m);
                dirs.iter()
                    .map(|y| {
                        field
                            .elements()
                            .skip(1)
                            .map(|t| {
                                let p: Vec<Elem> = x.iter().zip(y).map(|(&a, &b)| field.add(a, field.mul(t, b))).collect();
                                crate::space::index_of(&p, big_q)
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        Ok(PuncturedLines { lines })
    }

    pub fn is_nikodym(&self, members: &[bool]) -> bool {
        self.lines.iter().all(|through_x| through_x.iter().any(|line| line.iter().all(|&p| members[p])))
    }
}

/// Every point has a punctured line inside `S`.
pub fn is_nikodym(s: &PointSet) -> Result<bool> {
    Ok(PuncturedLines::new(&s.field, s.m)?.is_nikodym(&s.members))
}

/// `dim Lift_m({0..q-2})` for `F_q`-valued functions on `F_q^m`: a lower
/// bound on the size of every Nikodym set in `F_q^m`.
pub fn nikodym_lower_bound(q: u32, m: usize) -> Result<usize> {
    let degrees: Vec<u32> = (0..q.saturating_sub(1)).collect();
    let base = DegreeSet::univariate(q, q, &degrees)?;
    Ok(lift_degree_set(&base, m)?.len())
}

/// Number of Nikodym sets among all `size`-point subsets of `F_q^m`.
pub fn count_nikodym_subsets(field: &Field, m: usize, size: usize) -> Result<(u64, u64)> {
    let lines = PuncturedLines::new(field, m)?;
    let n = domain_size(field.order(), m)?;
    if n > 64 {
        return usage("subset scans are limited to 64 points");
    }
    let subsets: Vec<u64> = combinations_mask(n, size);
    let hits = subsets
        .par_iter()
        .filter(|&&mask| {
            let members: Vec<bool> = (0..n).map(|i| mask >> i & 1 == 1).collect();
            lines.is_nikodym(&members)
        })
        .count() as u64;
    Ok((subsets.len() as u64, hits))
}

fn combinations_mask(n: usize, k: usize) -> Vec<u64> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    if k == 0 {
        return vec![0];
    }
    // Gosper's hack over n-bit masks
    let mut mask: u64 = (1u64 << k) - 1;
    let limit: u128 = 1u128 << n;
    while (mask as u128) < limit {
        out.push(mask);
        let c = mask & mask.wrapping_neg();
        let r = mask + c;
        if r == 0 {
            break;
        }
        mask = (((r ^ mask) >> 2) / c) | r;
    }
    out
}

/// A minimal Nikodym set: start from everything and drop points in a seeded
/// random order while the set stays Nikodym.
pub fn greedy_nikodym(field: Arc<Field>, m: usize, seed: u64) -> Result<PointSet> {
    let lines = PuncturedLines::new(&field, m)?;
    let mut s = PointSet::full(field, m)?;
    let mut order: Vec<usize> = (0..s.members.len()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in (1..order.len()).rev() {
        order.swap(i, rng.gen_range(0..=i));
    }
    for i in order {
        s.members[i] = false;
        if !lines.is_nikodym(&s.members) {
            s.members[i] = true;
        }
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::construct;
    use crate::codes::ConstructionInputs;

    fn tower(q: u32, big_q: u32) -> Arc<Field> {
        Arc::new(Field::tower(q, big_q).unwrap())
    }

    fn fam(q: u32, big_q: u32, d: &[u32]) -> BaseCode {
        BaseCode::from_degrees(tower(q, big_q), DegreeSet::univariate(big_q, q, d).unwrap()).unwrap()
    }

    // Minimum weight by brute force over every F_q-valued function.
    fn brute_min_weight(code: &LiftedCode) -> usize {
        let field = code.field();
        let n = code.block_length();
        let q = code.value_order();
        let sub = field.subfield_elements(q).unwrap();
        let total = (sub.len() as u64).pow(n as u32);
        (1..total)
            .filter_map(|mut index| {
                let values: Vec<Elem> = (0..n)
                    .map(|_| {
                        let v = sub[(index % sub.len() as u64) as usize];
                        index /= sub.len() as u64;
                        v
                    })
                    .collect();
                let f = FuncTable::new(field.clone(), code.arity(), q, values).unwrap();
                code.member(&f, MemberMode::ByDegrees).unwrap().then(|| f.weight())
            })
            .min()
            .unwrap()
    }

    #[test]
    fn distance_examples() {
        let base = fam(2, 4, &[0, 1, 2]);
        assert_eq!(min_distance_exhaustive(&base.fam_code()).unwrap(), Ratio::new(1, 2));
        let lifted = lift(base, 2).unwrap();
        assert_eq!(min_distance_exhaustive(&lifted).unwrap(), Ratio::new(3, 8));
        assert_eq!(brute_min_weight(&lifted), 6);
    }

    #[test]
    fn distance_at_least_two_points() {
        for (q, big_q, d, m) in [(2u32, 4u32, vec![0u32, 1, 2], 2usize), (2, 8, vec![0, 1, 2, 4], 2), (3, 3, vec![0, 1], 2), (2, 4, vec![0, 1, 2], 3)] {
            let code = lift(fam(q, big_q, &d), m).unwrap();
            let delta = min_distance(&code).unwrap();
            assert!(delta >= Ratio::new(2, code.block_length() as u64));
        }
    }

    #[test]
    fn dual_and_direct_agree() {
        for (q, big_q, d, m) in [(2u32, 4u32, vec![0u32, 1, 2], 2usize), (2, 8, vec![0, 1, 2, 4, 3, 5, 6], 1), (2, 8, vec![0, 1, 2, 4], 1), (2, 2, vec![0], 4), (3, 3, vec![0, 1], 2), (4, 4, vec![0, 1], 2)] {
            let code = lift(fam(q, big_q, &d), m).unwrap();
            let rows = generator_matrix(&code).unwrap();
            let n = code.block_length();
            let direct = enumerate_weights(code.field(), q, n, &rows, EXHAUSTIVE_LIMIT).unwrap();
            let dual = dual_generator(code.field(), n, &rows);
            assert_eq!(rows.len() + dual.len(), code.block_length());
            // every dual row is orthogonal to every code row
            let f = code.field();
            for h in &dual {
                for g in &rows {
                    assert!(f.sum(h.iter().zip(g).map(|(&a, &b)| f.mul(a, b))).is_zero());
                }
            }
            let dual_counts = enumerate_weights(f, q, n, &dual, DUAL_LIMIT).unwrap();
            let via = macwilliams(&dual_counts, q, dual.len()).unwrap();
            let direct: Vec<BigUint> = direct.into_iter().map(BigUint::from).collect();
            assert_eq!(via, direct, "q={q} Q={big_q} m={m}");
        }
    }

    #[test]
    fn full_code_goes_through_an_empty_dual() {
        let code = lift(fam(2, 8, &[0, 1, 2, 3, 4, 5, 6, 7]), 2).unwrap();
        let w = weight_distribution(&code).unwrap();
        assert_eq!(w.method, WeightMethod::Dual);
        assert_eq!(w.counts.len(), 65);
        assert_eq!(min_distance(&code).unwrap(), Ratio::new(1, 64));
    }

    #[test]
    fn odd_field_weights_match_brute_force() {
        let code = lift(fam(3, 3, &[0, 1]), 2).unwrap();
        assert_eq!(code.dimension(), 3);
        let w = min_distance_exhaustive(&code).unwrap();
        assert_eq!(w, Ratio::new(brute_min_weight(&code) as u64, 9));
        assert_eq!(w, Ratio::new(2, 3));
    }

    #[test]
    fn guard_is_enforced() {
        let (_, code) = construct(4, &ConstructionInputs { m: Some(2), s: Some(4), c: Some(2), ..Default::default() }).unwrap();
        assert!(matches!(min_distance_exhaustive(&code), Err(Error::Guard(_))));
    }

    #[test]
    fn distance_theorem_examples() {
        let r = verify_distance_theorem(&fam(2, 4, &[0, 1, 2]), 2).unwrap();
        assert_eq!((r.delta_base.as_str(), r.delta_lift.as_str()), ("1/2", "3/8"));
        assert!(r.upper && r.lower && r.general_strict);
        assert_eq!(r.small_field, None);
        let full = verify_distance_theorem(&fam(2, 4, &[0, 1, 2, 3]), 2).unwrap();
        assert_eq!(full.delta_lift_exact, Ratio::new(1, 16));
        assert!(full.all_hold());
        let affine3 = verify_distance_theorem(&fam(3, 3, &[0, 1]), 2).unwrap();
        assert_eq!(affine3.small_field, Some(true));
        // constants: δ = 1 on both sides, so the general bound holds only with equality
        let constants = verify_distance_theorem(&fam(2, 8, &[0]), 2).unwrap();
        assert!(constants.general && !constants.general_strict);
    }

    #[test]
    fn equivalence_small_cases() {
        let r = oracle_equivalence(&BaseCode::parity_univariate(tower(2, 2)).unwrap(), 2, 0, 0).unwrap();
        assert_eq!((r.mode.as_str(), r.functions, r.disagreements), ("exhaustive", 16, 0));
        assert_eq!(r.members_by_degrees, 2);
        let sampled = oracle_equivalence(&BaseCode::parity_multivariate(tower(2, 4), 2).unwrap(), 3, 300, 1).unwrap();
        assert_eq!(sampled.mode, "sampled");
        assert!(sampled.equal);
        assert!(sampled.members_by_degrees >= 300);
    }

    #[test]
    fn degree_oracle_matches_lifting() {
        let cases = [
            (BaseCode::parity_univariate(tower(2, 4)).unwrap(), 2usize),
            (BaseCode::parity_univariate(tower(2, 4)).unwrap(), 3),
            (BaseCode::parity_univariate(tower(2, 8)).unwrap(), 2),
            (BaseCode::parity_univariate(tower(3, 9)).unwrap(), 2),
            (BaseCode::parity_multivariate(tower(2, 4), 2).unwrap(), 3),
            (BaseCode::reed_solomon(tower(8, 8), 5).unwrap(), 2),
            (fam(2, 8, &[0, 1, 2, 4]), 2),
        ];
        for (base, m) in cases {
            let by_restriction = degree_set_by_restriction(&base, m).unwrap();
            let lifted = lift(base.clone(), m).unwrap();
            assert_eq!(&by_restriction, lifted.degrees(), "{:?} m={m}", base.kind());
        }
    }

    #[test]
    fn affine_closure_small() {
        let code = lift(BaseCode::parity_univariate(tower(2, 4)).unwrap(), 2).unwrap();
        let r = verify_affine_closure(&code).unwrap();
        assert_eq!((r.maps, r.codewords, r.violations), (4096, 128, 0));
        // projection onto the first coordinate keeps codewords inside
        let field = code.field();
        let proj = AffineMap::new(field, vec![vec![Elem(1), Elem(0)], vec![Elem(0), Elem(0)]], vec![Elem(0); 2]).unwrap();
        for w in code.basis_tables().unwrap() {
            assert!(code.member(&compose_affine(&w, &proj).unwrap(), MemberMode::ByRestriction).unwrap());
        }
    }

    #[test]
    fn nikodym_basics() {
        let f4 = tower(4, 4);
        assert!(is_nikodym(&PointSet::full(f4.clone(), 2).unwrap()).unwrap());
        assert!(!is_nikodym(&PointSet::empty(f4.clone(), 2).unwrap()).unwrap());
        assert_eq!(nikodym_lower_bound(2, 2).unwrap(), 1);
        assert_eq!(nikodym_lower_bound(4, 2).unwrap(), 7);
    }

    fn direct_nikodym(field: &Field, s: &PointSet) -> bool {
        let big_q = field.order();
        (0..s.members.len()).all(|xi| {
            let x = point_of(xi, big_q, s.m);
            (1..s.members.len()).any(|yi| {
                let y = point_of(yi, big_q, s.m);
                field.elements().skip(1).all(|t| {
                    let p: Vec<Elem> = x.iter().zip(&y).map(|(&a, &b)| field.add(a, field.mul(t, b))).collect();
                    s.members[crate::space::index_of(&p, big_q)]
                })
            })
        })
    }

    #[test]
    fn greedy_nikodym_sets() {
        let f4 = tower(4, 4);
        for seed in 0..20 {
            let s = greedy_nikodym(f4.clone(), 2, seed).unwrap();
            assert!(direct_nikodym(&f4, &s));
            assert!(is_nikodym(&s).unwrap());
            assert!(s.len() >= 7);
            // minimal: removing any point breaks it
            for i in s.indices() {
                let mut t = s.clone();
                t.remove(i);
                assert!(!direct_nikodym(&f4, &t));
            }
        }
    }

    #[test]
    fn nikodym_supersets() {
        let f4 = tower(4, 4);
        let s = greedy_nikodym(f4.clone(), 2, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let mut t = s.clone();
            t.insert(rng.gen_range(0..16));
            assert!(is_nikodym(&t).unwrap());
        }
    }

    #[test]
    fn subset_scan_agrees_with_direct_check() {
        let f3 = tower(3, 3);
        for size in 0..=9 {
            let (total, hits) = count_nikodym_subsets(&f3, 2, size).unwrap();
            let direct = combinations_mask(9, size)
                .into_iter()
                .filter(|&mask| {
                    let idx: Vec<usize> = (0..9).filter(|i| mask >> i & 1 == 1).collect();
                    direct_nikodym(&f3, &PointSet::from_indices(f3.clone(), 2, &idx).unwrap())
                })
                .count() as u64;
            assert_eq!(BigInt::from(total), binomial_big(9, size));
            assert_eq!(hits, direct);
            if size < nikodym_lower_bound(3, 2).unwrap() {
                assert_eq!(hits, 0);
            }
        }
    }
}
