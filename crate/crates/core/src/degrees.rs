//! Degree vectors, `p`-shadows, `q`-shift orbits and lifted degree sets.
//!
//! A degree vector lives in `{0..Q-1}^m`. Sets of them are stored densely,
//! indexed in mixed radix `Q` with the first coordinate most significant, so
//! iteration order is lexicographic.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{usage, Error, Result};
use crate::gf::prime_power;

pub type Degree = Vec<u32>;

/// `a mod* Q`: `0` for `a = 0`, otherwise the representative of `a` modulo
/// `Q - 1` in `{1..Q-1}`.
#[inline]
pub fn modstar(a: u64, big_q: u32) -> u32 {
    if a == 0 {
        return 0;
    }
    let r = (a % (big_q as u64 - 1)) as u32;
    if r == 0 {
        big_q - 1
    } else {
        r
    }
}

/// Digitwise dominance in base `p`.
#[inline]
pub fn p_shadow_leq(e: u64, d: u64, p: u32) -> bool {
    let p = p as u64;
    let (mut e, mut d) = (e, d);
    while e > 0 {
        if e % p > d % p {
            return false;
        }
        e /= p;
        d /= p;
    }
    true
}

/// Coordinatewise [`p_shadow_leq`].
pub fn p_shadow_leq_vec(e: &[u32], d: &[u32], p: u32) -> Result<bool> {
    if e.len() != d.len() {
        return usage(format!("shape mismatch: {} vs {}", e.len(), d.len()));
    }
    Ok(e.iter().zip(d).all(|(&a, &b)| p_shadow_leq(a as u64, b as u64, p)))
}

/// All `e ≤_p d`, ascending.
pub fn shadow_enumerate(d: u32, p: u32) -> Vec<u32> {
    let mut out = vec![0u32];
    let (mut rest, mut place) = (d, 1u32);
    while rest > 0 {
        let digit = rest % p;
        if digit > 0 {
            let base = out.clone();
            for k in 1..=digit {
                out.extend(base.iter().map(|&x| x + k * place));
            }
        }
        rest /= p;
        place = place.saturating_mul(p);
    }
    out.sort_unstable();
    out
}

/// All vectors `e ≤_p d` (coordinatewise), in lexicographic order.
pub fn shadow_enumerate_vec(d: &[u32], p: u32) -> Vec<Degree> {
    let lists: Vec<Vec<u32>> = d.iter().map(|&x| shadow_enumerate(x, p)).collect();
    let mut out = vec![Vec::with_capacity(d.len())];
    for list in &lists {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                list.iter().map(move |&x| {
                    let mut v = prefix.clone();
                    v.push(x);
                    v
                })
            })
            .collect();
    }
    out
}

/// Vector-to-integer shadow in its definitional form: every `f ≤_p e` has
/// `Σ f_i ≤_p d`.
///
/// This is implied by, but not equivalent to, [`multinomial_nonzero_mod_p`]
/// (for `p = 2`, `e = (1, 1)` and `d = 3` it holds although `(3; 1, 1, 1) = 6`
/// is even). Lifting uses the multinomial criterion.
pub fn vector_shadow_leq(e: &[u32], d: u32, p: u32) -> bool {
    shadow_enumerate_vec(e, p)
        .iter()
        .all(|f| p_shadow_leq(f.iter().map(|&x| x as u64).sum(), d as u64, p))
}

/// `C(n, k) mod p` by Lucas' theorem.
pub fn binomial_mod_p(n: u64, k: u64, p: u32) -> u32 {
    let p64 = p as u64;
    let (mut n, mut k) = (n, k);
    let mut acc = 1u64;
    while n > 0 || k > 0 {
        let (a, b) = (n % p64, k % p64);
        if b > a {
            return 0;
        }
        acc = acc * small_binomial(a, b) % p64;
        n /= p64;
        k /= p64;
    }
    acc as u32
}

fn small_binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// Whether the multinomial coefficient `(d; e_1, ..., e_t, d - Σe)` is
/// nonzero mod `p`, via the factorisation
/// `C(d, e_1) · C(d - e_1, e_2) · ...` with Lucas' theorem on each factor.
pub fn multinomial_nonzero_mod_p(d: u32, e: &[u32], p: u32) -> Result<bool> {
    let total: u64 = e.iter().map(|&x| x as u64).sum();
    if total > d as u64 {
        return usage(format!("parts {e:?} sum past {d}"));
    }
    let mut rest = d as u64;
    for &part in e {
        if binomial_mod_p(rest, part as u64, p) == 0 {
            return Ok(false);
        }
        rest -= part as u64;
    }
    Ok(true)
}

/// Row vectors `e ∈ Z^t` whose multinomial `(d; e)` is nonzero mod `p`: the
/// digits of `e_1, ..., e_t` at each base-`p` position sum to at most the
/// corresponding digit of `d`.
pub fn multinomial_rows(d: u32, t: usize, p: u32) -> Vec<Degree> {
    let mut rows = vec![vec![0u32; t]];
    let (mut rest, mut place) = (d, 1u32);
    while rest > 0 {
        let digit = rest % p;
        if digit > 0 {
            let comps = compositions_at_most(digit, t);
            rows = rows
                .iter()
                .flat_map(|r| {
                    comps.iter().map(move |c| {
                        r.iter().zip(c).map(|(&x, &y)| x + y * place).collect::<Degree>()
                    })
                })
                .collect();
        }
        rest /= p;
        place = place.saturating_mul(p);
    }
    rows
}

fn compositions_at_most(total: u32, parts: usize) -> Vec<Vec<u32>> {
    if parts == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut tail in compositions_at_most(total - first, parts - 1) {
            tail.insert(0, first);
            out.push(tail);
        }
    }
    out
}

/// Coordinatewise `d ↦ q·d mod* Q`.
pub fn q_shift(d: &[u32], q: u32, big_q: u32) -> Degree {
    d.iter().map(|&x| modstar(x as u64 * q as u64, big_q)).collect()
}

/// The `q`-shift orbit of `d`, in shift order starting at `d`, together with
/// its size `b` (the least `b > 0` with `q^b·d mod* Q = d`).
pub fn q_shift_orbit(d: &[u32], q: u32, big_q: u32) -> (Vec<Degree>, usize) {
    let mut orbit = vec![d.to_vec()];
    loop {
        let next = q_shift(orbit.last().unwrap(), q, big_q);
        if next == d {
            break;
        }
        orbit.push(next);
    }
    let b = orbit.len();
    (orbit, b)
}

/// One `q`-shift orbit of a degree set, represented by its lexicographically
/// least member.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orbit {
    pub rep: Degree,
    pub members: Vec<Degree>,
}

impl Orbit {
    pub fn size(&self) -> usize {
        self.members.len()
    }
}

/// A set of degree vectors in `{0..Q-1}^m`, relative to the value field `F_q`.
#[derive(Clone, PartialEq, Eq)]
pub struct DegreeSet {
    big_q: u32,
    q: u32,
    p: u32,
    m: usize,
    members: Vec<bool>,
    count: usize,
}

impl std::fmt::Debug for DegreeSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("DegreeSet")
            .field("Q", &self.big_q)
            .field("q", &self.q)
            .field("m", &self.m)
            .field("degrees", &self.to_vec())
            .finish()
    }
}

impl DegreeSet {
    pub fn empty(big_q: u32, q: u32, m: usize) -> Result<Self> {
        let (p, k) = prime_power(big_q)
            .ok_or_else(|| Error::Usage(format!("Q = {big_q} is not a supported prime power")))?;
        match prime_power(q) {
            Some((pq, s)) if pq == p && k % s == 0 => {}
            _ => return usage(format!("F_{q} is not a subfield of F_{big_q}")),
        }
        if m == 0 {
            return usage("degree vectors need at least one coordinate");
        }
        let size = (big_q as u64).checked_pow(m as u32).filter(|&s| s <= 1 << 26).ok_or_else(
            || Error::Guard(format!("{big_q}^{m} degree vectors exceed the dense limit 2^26")),
        )?;
        Ok(DegreeSet { big_q, q, p, m, members: vec![false; size as usize], count: 0 })
    }

    pub fn full(big_q: u32, q: u32, m: usize) -> Result<Self> {
        let mut s = Self::empty(big_q, q, m)?;
        s.members.iter_mut().for_each(|b| *b = true);
        s.count = s.members.len();
        Ok(s)
    }

    pub fn from_degrees<I, D>(big_q: u32, q: u32, m: usize, degrees: I) -> Result<Self>
    where
        I: IntoIterator<Item = D>,
        D: AsRef<[u32]>,
    {
        let mut s = Self::empty(big_q, q, m)?;
        for d in degrees {
            s.insert(d.as_ref())?;
        }
        Ok(s)
    }

    /// Univariate set from plain integers.
    pub fn univariate(big_q: u32, q: u32, degrees: &[u32]) -> Result<Self> {
        Self::from_degrees(big_q, q, 1, degrees.iter().map(|&d| [d]))
    }

    pub fn big_q(&self) -> u32 {
        self.big_q
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn arity(&self) -> usize {
        self.m
    }

    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    /// Number of slots, `Q^m`.
    pub fn universe_size(&self) -> usize {
        self.members.len()
    }

    pub fn index_of(&self, d: &[u32]) -> Option<usize> {
        if d.len() != self.m || d.iter().any(|&x| x >= self.big_q) {
            return None;
        }
        Some(d.iter().fold(0usize, |acc, &x| acc * self.big_q as usize + x as usize))
    }

    pub fn degree_at(&self, mut index: usize) -> Degree {
        let mut d = vec![0u32; self.m];
        for slot in d.iter_mut().rev() {
            *slot = (index % self.big_q as usize) as u32;
            index /= self.big_q as usize;
        }
        d
    }

    pub fn insert(&mut self, d: &[u32]) -> Result<bool> {
        let i = self
            .index_of(d)
            .ok_or_else(|| Error::Usage(format!("degree {d:?} outside {{0..{}}}^{}", self.big_q - 1, self.m)))?;
        let fresh = !self.members[i];
        if fresh {
            self.members[i] = true;
            self.count += 1;
        }
        Ok(fresh)
    }

    pub fn remove(&mut self, d: &[u32]) -> bool {
        match self.index_of(d) {
            Some(i) if self.members[i] => {
                self.members[i] = false;
                self.count -= 1;
                true
            }
            _ => false,
        }
    }

    #[inline]
    pub fn contains(&self, d: &[u32]) -> bool {
        self.index_of(d).is_some_and(|i| self.members[i])
    }

    #[inline]
    pub fn contains_index(&self, i: usize) -> bool {
        self.members[i]
    }

    /// Members in lexicographic order.
    pub fn iter(&self) -> impl Iterator<Item = Degree> + '_ {
        self.members.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| self.degree_at(i))
    }

    pub fn to_vec(&self) -> Vec<Degree> {
        self.iter().collect()
    }

    pub fn is_subset(&self, other: &DegreeSet) -> bool {
        self.m == other.m
            && self.big_q == other.big_q
            && self.members.iter().zip(&other.members).all(|(&a, &b)| !a || b)
    }

    pub fn is_q_shift_closed(&self) -> bool {
        self.iter().all(|d| self.contains(&q_shift(&d, self.q, self.big_q)))
    }

    /// Closed under taking `p`-shadows.
    pub fn is_shadow_closed(&self) -> bool {
        self.iter().all(|d| shadow_enumerate_vec(&d, self.p).iter().all(|e| self.contains(e)))
    }

    /// `F_q`-dimension of the code with this degree set.
    pub fn dimension(&self) -> Result<usize> {
        if !self.is_q_shift_closed() {
            return usage("degree set is not q-shift closed");
        }
        Ok(self.count)
    }

    /// Orbit decomposition, ordered by representative.
    pub fn orbits(&self) -> Result<Vec<Orbit>> {
        if !self.is_q_shift_closed() {
            return usage("degree set is not q-shift closed");
        }
        let mut seen = vec![false; self.members.len()];
        let mut out = Vec::new();
        for (i, &member) in self.members.iter().enumerate() {
            if !member || seen[i] {
                continue;
            }
            let d = self.degree_at(i);
            let (orbit, _) = q_shift_orbit(&d, self.q, self.big_q);
            for e in &orbit {
                seen[self.index_of(e).unwrap()] = true;
            }
            let mut members = orbit;
            // `i` is the first unseen index, so `d` is the least member.
            members.sort();
            out.push(Orbit { rep: d, members });
        }
        Ok(out)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("degree sets serialise")
    }
}

#[derive(Serialize, Deserialize)]
struct DegreeSetRepr {
    #[serde(rename = "Q")]
    big_q: u32,
    q: u32,
    m: usize,
    degrees: Vec<Degree>,
}

impl Serialize for DegreeSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        DegreeSetRepr { big_q: self.big_q, q: self.q, m: self.m, degrees: self.to_vec() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for DegreeSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = DegreeSetRepr::deserialize(d)?;
        DegreeSet::from_degrees(r.big_q, r.q, r.m, &r.degrees).map_err(serde::de::Error::custom)
    }
}

/// Lexicographically least member of the `q`-shift orbit of `d`.
fn is_orbit_rep(d: &[u32], q: u32, big_q: u32) -> bool {
    let mut e = q_shift(d, q, big_q);
    while e.as_slice() != d {
        if e.as_slice() < d {
            return false;
        }
        e = q_shift(&e, q, big_q);
    }
    true
}

/// Evaluates `keep` on every candidate of `{0..Q-1}^m`, testing one
/// representative per `q`-shift orbit when `orbit_invariant` holds.
fn collect_lift<F>(base: &DegreeSet, m: usize, orbit_invariant: bool, keep: F) -> Result<DegreeSet>
where
    F: Fn(&[u32]) -> bool + Sync,
{
    let mut out = DegreeSet::empty(base.big_q, base.q, m)?;
    let (q, big_q) = (base.q, base.big_q);
    let candidates: Vec<usize> = (0..out.universe_size())
        .filter(|&i| !orbit_invariant || is_orbit_rep(&out.degree_at(i), q, big_q))
        .collect();
    let accepted: Vec<Degree> = candidates
        .par_iter()
        .map(|&i| out.degree_at(i))
        .filter(|d| keep(d))
        .collect();
    for d in accepted {
        if orbit_invariant {
            for e in q_shift_orbit(&d, q, big_q).0 {
                out.insert(&e)?;
            }
        } else {
            out.insert(&d)?;
        }
    }
    Ok(out)
}

/// `Lift_m(D)` for a univariate `D`: all `d` such that every `e ≤_p d` has
/// `Σ e_i mod* Q ∈ D`. Shadows are enumerated explicitly.
pub fn lift_degree_set_univariate(base: &DegreeSet, m: usize) -> Result<DegreeSet> {
    if base.m != 1 {
        return usage(format!("expected a univariate degree set, got arity {}", base.m));
    }
    let big_q = base.big_q;
    let p = base.p;
    let orbit_invariant = base.is_q_shift_closed();
    collect_lift(base, m, orbit_invariant, |d| {
        let lists: Vec<Vec<u32>> = d.iter().map(|&x| shadow_enumerate(x, p)).collect();
        let mut pos = vec![0usize; m];
        loop {
            let sum: u64 = pos.iter().zip(&lists).map(|(&i, l)| l[i] as u64).sum();
            if !base.contains(&[modstar(sum, big_q)]) {
                return false;
            }
            // odometer over the per-coordinate shadow lists
            let mut k = m;
            loop {
                if k == 0 {
                    return true;
                }
                k -= 1;
                pos[k] += 1;
                if pos[k] < lists[k].len() {
                    break;
                }
                pos[k] = 0;
            }
        }
    })
}

/// `Lift_m(D)` for `D ⊆ {0..Q-1}^t`: all `d` such that every matrix `E` whose
/// `i`-th row has a nonzero multinomial `(d_i; E_i)` mod `p` has column sums
/// `Σ(E) mod* Q ∈ D`.
///
/// Rows are combined one at a time, keeping the set of reachable reduced
/// column-sum vectors; `mod*` commutes with adding further rows, so this
/// visits the same sums as enumerating every matrix.
pub fn lift_degree_set_multivariate(base: &DegreeSet, m: usize) -> Result<DegreeSet> {
    let t = base.m;
    if t > m {
        return usage(format!("cannot lift a {t}-variate set to {m} variables"));
    }
    let big_q = base.big_q;
    let p = base.p;
    let orbit_invariant = base.is_q_shift_closed();
    let width = base.universe_size();
    collect_lift(base, m, orbit_invariant, |d| {
        let mut reach = vec![false; width];
        reach[0] = true;
        for &di in d {
            let rows = multinomial_rows(di, t, p);
            let mut next = vec![false; width];
            for (idx, _) in reach.iter().enumerate().filter(|(_, &r)| r) {
                let s = base.degree_at(idx);
                for row in &rows {
                    let v: Degree = s
                        .iter()
                        .zip(row)
                        .map(|(&a, &b)| modstar(a as u64 + b as u64, big_q))
                        .collect();
                    next[base.index_of(&v).unwrap()] = true;
                }
            }
            reach = next;
        }
        reach.iter().enumerate().all(|(i, &r)| !r || base.contains_index(i))
    })
}

/// Dispatches on the arity of `base`.
pub fn lift_degree_set(base: &DegreeSet, m: usize) -> Result<DegreeSet> {
    if base.m == 1 {
        lift_degree_set_univariate(base, m)
    } else {
        lift_degree_set_multivariate(base, m)
    }
}

/// All degree sets of affine-invariant codes in `t` variables: unions of
/// `q`-shift orbits with `Lift_t(D) = D`. For `t = 1` these are exactly the
/// shift- and shadow-closed sets. Enumerates unions of orbits, so the orbit
/// count must stay small.
pub fn affine_invariant_degree_sets(big_q: u32, q: u32, t: usize) -> Result<Vec<DegreeSet>> {
    let full = DegreeSet::full(big_q, q, t)?;
    let orbits = full.orbits()?;
    if orbits.len() > 24 {
        return Err(Error::Guard(format!("{} orbits is too many to enumerate unions", orbits.len())));
    }
    let mut out = Vec::new();
    for mask in 0u32..(1 << orbits.len()) {
        let mut s = DegreeSet::empty(big_q, q, t)?;
        for (i, o) in orbits.iter().enumerate() {
            if mask >> i & 1 == 1 {
                for d in &o.members {
                    s.insert(d)?;
                }
            }
        }
        if s.is_shadow_closed() && lift_degree_set(&s, t)? == s {
            out.push(s);
        }
    }
    Ok(out)
}

/// Members of `a` sorted, as a set; convenient for assertions.
pub fn as_btree(s: &DegreeSet) -> BTreeSet<Degree> {
    s.iter().collect()
}
