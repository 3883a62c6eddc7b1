//! Finite-field tower arithmetic `F_p ⊆ F_q ⊆ F_Q`.
//!
//! An element of `F_Q` is stored as its canonical index: the integer whose
//! base-`p` digits, least significant first, are the coefficients of the
//! element's polynomial representative modulo the defining irreducible.
//! Enumerating indices `0..Q` therefore lists `0` first, then `1`, then the
//! remaining elements ordered by their coefficient vectors.
//!
//! Multiplication goes through exp/log tables built from a primitive
//! element; addition in odd characteristic goes through a Zech table.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{usage, Error, Result};

/// Largest supported field order.
pub const MAX_ORDER: u32 = 1 << 16;

/// Lower coefficients (constant term first) of the monic irreducible used for
/// `F_{p^k}`; the leading `x^k` term is implicit.
const IRREDUCIBLES: &[(u32, u32, &[u32])] = &[
    (2, 1, &[0]),
    (2, 2, &[1, 1]),
    (2, 3, &[1, 1, 0]),
    (2, 4, &[1, 1, 0, 0]),
    (2, 5, &[1, 0, 1, 0, 0]),
    (2, 6, &[1, 1, 0, 0, 0, 0]),
    (2, 7, &[1, 1, 0, 0, 0, 0, 0]),
    (2, 8, &[1, 1, 0, 1, 1, 0, 0, 0]),
    (2, 9, &[1, 1, 0, 0, 0, 0, 0, 0, 0]),
    (2, 10, &[1, 0, 0, 1, 0, 0, 0, 0, 0, 0]),
    (2, 11, &[1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0]),
    (2, 12, &[1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0]),
    (2, 13, &[1, 1, 0, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0]),
    (2, 14, &[1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0]),
    (2, 15, &[1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0]),
    (2, 16, &[1, 1, 0, 1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0]),
    (3, 1, &[0]),
    (3, 2, &[1, 0]),
    (3, 3, &[1, 2, 0]),
    (3, 4, &[2, 1, 0, 0]),
    (3, 5, &[1, 2, 0, 0, 0]),
    (3, 6, &[2, 1, 0, 0, 0, 0]),
    (3, 7, &[2, 0, 1, 0, 0, 0, 0]),
    (3, 8, &[2, 0, 1, 0, 0, 0, 0, 0]),
    (3, 9, &[1, 0, 1, 2, 0, 0, 0, 0, 0]),
    (3, 10, &[1, 0, 2, 0, 0, 0, 0, 0, 0, 0]),
    (5, 1, &[0]),
    (5, 2, &[2, 0]),
    (5, 3, &[1, 1, 0]),
    (5, 4, &[2, 0, 0, 0]),
    (5, 5, &[1, 4, 0, 0, 0]),
    (5, 6, &[2, 1, 0, 0, 0, 0]),
];

const NO_LOG: u32 = u32::MAX;

/// Canonical index of a field element. Only meaningful together with the
/// [`Field`] it came from.
#[derive(
    Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct Elem(pub u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// Arithmetic context for the tower `F_p ⊆ F_q ⊆ F_Q` with `q = p^s` and
/// `Q = q^n`. Immutable after construction.
#[derive(Clone)]
pub struct Field {
    p: u32,
    s: u32,
    n: u32,
    degree: u32,
    order: u32,
    modulus: Vec<u32>,
    primitive: Elem,
    exp: Vec<u32>,
    log: Vec<u32>,
    zech: Vec<u32>,
    neg: Vec<u32>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Field")
            .field("p", &self.p)
            .field("q", &self.sub_order())
            .field("Q", &self.order)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.s == other.s && self.n == other.n && self.modulus == other.modulus
    }
}

impl Eq for Field {}

fn is_supported_prime(p: u32) -> bool {
    matches!(p, 2 | 3 | 5)
}

/// Writes `order = p^k` for a supported prime `p`.
pub fn prime_power(order: u32) -> Option<(u32, u32)> {
    for p in [2u32, 3, 5] {
        let mut v = order;
        let mut k = 0;
        while v > 1 && v % p == 0 {
            v /= p;
            k += 1;
        }
        if v == 1 && k > 0 {
            return Some((p, k));
        }
    }
    None
}

/// Parses a field specification of the form `"p^k"` (or a bare order such
/// as `"16"`) into `(p, k)`.
pub fn parse_field_spec(spec: &str) -> Result<(u32, u32)> {
    let spec = spec.trim();
    let (p, k) = match spec.split_once('^') {
        Some((p, k)) => {
            let p: u32 = p
                .trim()
                .parse()
                .map_err(|_| Error::Usage(format!("bad prime in field spec `{spec}`")))?;
            let k: u32 = k
                .trim()
                .parse()
                .map_err(|_| Error::Usage(format!("bad exponent in field spec `{spec}`")))?;
            (p, k)
        }
        None => {
            let order: u32 = spec
                .parse()
                .map_err(|_| Error::Usage(format!("bad field spec `{spec}`")))?;
            prime_power(order)
                .ok_or_else(|| Error::Usage(format!("{order} is not a supported prime power")))?
        }
    };
    if !is_supported_prime(p) || k == 0 {
        return usage(format!("unsupported field spec `{spec}`"));
    }
    Ok((p, k))
}

// Schoolbook arithmetic on digit vectors, only used while building tables.
fn to_digits(x: u32, p: u32, k: u32) -> Vec<u32> {
    let mut x = x;
    (0..k)
        .map(|_| {
            let d = x % p;
            x /= p;
            d
        })
        .collect()
}

fn from_digits(d: &[u32], p: u32) -> u32 {
    d.iter().rev().fold(0, |acc, &c| acc * p + c)
}

fn poly_rem(a: &mut Vec<u32>, b: &[u32], p: u32) {
    let lead_inv = inv_mod_p(*b.last().unwrap(), p);
    while a.len() >= b.len() {
        let c = a.last().unwrap() * lead_inv % p;
        let shift = a.len() - b.len();
        for (i, &bi) in b.iter().enumerate() {
            a[shift + i] = (a[shift + i] + p * p - c * bi % p) % p;
        }
        while a.last() == Some(&0) {
            a.pop();
        }
    }
}

fn inv_mod_p(a: u32, p: u32) -> u32 {
    (1..p).find(|&x| x * a % p == 1).expect("nonzero residue")
}

fn poly_mul_mod(a: &[u32], b: &[u32], modulus: &[u32], p: u32) -> Vec<u32> {
    let mut prod = vec![0u32; a.len() + b.len()];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + ai * bj) % p;
        }
    }
    while prod.last() == Some(&0) {
        prod.pop();
    }
    poly_rem(&mut prod, modulus, p);
    prod.resize(modulus.len() - 1, 0);
    prod
}

/// Trial division against every monic polynomial of degree `1..=deg/2`.
pub(crate) fn is_irreducible(modulus: &[u32], p: u32) -> bool {
    let deg = modulus.len() - 1;
    if deg <= 1 {
        return deg == 1;
    }
    // Roots first: the degree-1 divisors.
    for r in 0..p {
        let v = modulus.iter().rev().fold(0u64, |acc, &c| (acc * r as u64 + c as u64) % p as u64);
        if v == 0 {
            return false;
        }
    }
    for dg in 2..=deg / 2 {
        for low in 0..p.pow(dg as u32) {
            let mut g = to_digits(low, p, dg as u32);
            g.push(1);
            let mut r = modulus.to_vec();
            poly_rem(&mut r, &g, p);
            if r.is_empty() {
                return false;
            }
        }
    }
    true
}

fn prime_factors(mut n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

impl Field {
    /// Builds the tower with `q = p^s` and `Q = q^n` from the built-in table
    /// of irreducible polynomials.
    pub fn new(p: u32, s: u32, n: u32) -> Result<Field> {
        if !is_supported_prime(p) {
            return usage(format!("unsupported characteristic {p} (supported: 2, 3, 5)"));
        }
        if s == 0 || n == 0 {
            return usage("extension degrees must be positive");
        }
        let degree = s * n;
        let order = (p as u64).pow(degree);
        if order > MAX_ORDER as u64 {
            return usage(format!("field order {p}^{degree} exceeds {MAX_ORDER}"));
        }
        let order = order as u32;
        let low = IRREDUCIBLES
            .iter()
            .find(|(pp, kk, _)| *pp == p && *kk == degree)
            .map(|(_, _, c)| *c)
            .ok_or_else(|| Error::Usage(format!("no built-in irreducible for {p}^{degree}")))?;
        let mut modulus = low.to_vec();
        modulus.push(1);
        if !is_irreducible(&modulus, p) {
            return Err(Error::Domain(format!("table polynomial for {p}^{degree} is reducible")));
        }

        let mul_slow = |a: u32, b: u32| -> u32 {
            let da = to_digits(a, p, degree);
            let db = to_digits(b, p, degree);
            from_digits(&poly_mul_mod(&da, &db, &modulus, p), p)
        };
        let pow_slow = |a: u32, mut e: u32| -> u32 {
            let mut base = a;
            let mut acc = 1;
            while e > 0 {
                if e & 1 == 1 {
                    acc = mul_slow(acc, base);
                }
                base = mul_slow(base, base);
                e >>= 1;
            }
            acc
        };

        let group = order - 1;
        let factors = prime_factors(group);
        let primitive = (1..order)
            .find(|&g| factors.iter().all(|&r| pow_slow(g, group / r) != 1))
            .expect("multiplicative group of a finite field is cyclic");

        let mut exp = vec![0u32; 2 * group as usize];
        let mut log = vec![NO_LOG; order as usize];
        let mut x = 1u32;
        for i in 0..group {
            exp[i as usize] = x;
            exp[(i + group) as usize] = x;
            log[x as usize] = i;
            x = mul_slow(x, primitive);
        }
        debug_assert_eq!(x, 1);

        let neg: Vec<u32> = (0..order)
            .map(|a| {
                let d: Vec<u32> = to_digits(a, p, degree).iter().map(|&c| (p - c) % p).collect();
                from_digits(&d, p)
            })
            .collect();

        let zech = if p == 2 {
            Vec::new()
        } else {
            (0..group)
                .map(|i| {
                    let a = to_digits(exp[i as usize], p, degree);
                    let mut one = to_digits(1, p, degree);
                    for (o, c) in one.iter_mut().zip(&a) {
                        *o = (*o + c) % p;
                    }
                    let sum = from_digits(&one, p);
                    if sum == 0 {
                        NO_LOG
                    } else {
                        log[sum as usize]
                    }
                })
                .collect()
        };

        Ok(Field { p, s, n, degree, order, modulus, primitive: Elem(primitive), exp, log, zech, neg })
    }

    /// Convenience constructor returning a shareable context.
    pub fn shared(p: u32, s: u32, n: u32) -> Result<Arc<Field>> {
        Field::new(p, s, n).map(Arc::new)
    }

    /// Builds the tower from the two field orders `q` and `Q`.
    pub fn tower(q: u32, big_q: u32) -> Result<Field> {
        let (p, s) =
            prime_power(q).ok_or_else(|| Error::Usage(format!("q = {q} is not a supported prime power")))?;
        let (p2, k) = prime_power(big_q)
            .ok_or_else(|| Error::Usage(format!("Q = {big_q} is not a supported prime power")))?;
        if p != p2 || k % s != 0 {
            return usage(format!("F_{q} is not a subfield of F_{big_q}"));
        }
        Field::new(p, s, k / s)
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    /// Extension degree of `F_q` over `F_p`.
    pub fn s(&self) -> u32 {
        self.s
    }

    /// Extension degree of `F_Q` over `F_q`.
    pub fn n(&self) -> u32 {
        self.n
    }

    /// Degree of `F_Q` over `F_p`.
    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// `Q`, the order of the whole field.
    pub fn order(&self) -> u32 {
        self.order
    }

    /// `q`, the order of the intermediate field.
    pub fn sub_order(&self) -> u32 {
        self.p.pow(self.s)
    }

    /// Defining polynomial, constant term first, monic.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn primitive(&self) -> Elem {
        self.primitive
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> + Clone {
        (0..self.order).map(Elem)
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        if self.p == 2 {
            return Elem(a.0 ^ b.0);
        }
        if a.0 == 0 {
            return b;
        }
        if b.0 == 0 {
            return a;
        }
        let group = self.order - 1;
        let la = self.log[a.index()];
        let lb = self.log[b.index()];
        let z = self.zech[((lb + group - la) % group) as usize];
        if z == NO_LOG {
            Elem::ZERO
        } else {
            Elem(self.exp[(la + z) as usize])
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        if self.p == 2 {
            a
        } else {
            Elem(self.neg[a.index()])
        }
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a.0 == 0 || b.0 == 0 {
            return Elem::ZERO;
        }
        Elem(self.exp[(self.log[a.index()] + self.log[b.index()]) as usize])
    }

    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a.0 == 0 {
            return Err(Error::Domain("inversion of zero".into()));
        }
        let group = self.order - 1;
        Ok(Elem(self.exp[((group - self.log[a.index()]) % group) as usize]))
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `a^e` with `0^0 = 1`; the exponent is reduced mod `Q - 1` for nonzero `a`.
    #[inline]
    pub fn pow(&self, a: Elem, e: u64) -> Elem {
        if e == 0 {
            return Elem::ONE;
        }
        if a.0 == 0 {
            return Elem::ZERO;
        }
        let group = (self.order - 1) as u64;
        let l = self.log[a.index()] as u64 * (e % group) % group;
        Elem(self.exp[l as usize])
    }

    /// Sum of a sequence of elements.
    pub fn sum<I: IntoIterator<Item = Elem>>(&self, it: I) -> Elem {
        it.into_iter().fold(Elem::ZERO, |acc, x| self.add(acc, x))
    }

    /// Scalar multiple `k·a` for a nonnegative integer `k`.
    pub fn scale_int(&self, a: Elem, k: u64) -> Elem {
        let k = k % self.p as u64;
        (0..k).fold(Elem::ZERO, |acc, _| self.add(acc, a))
    }

    /// Discrete log base the stored primitive element.
    pub fn log(&self, a: Elem) -> Option<u32> {
        (a.0 != 0).then(|| self.log[a.index()])
    }

    pub fn exp(&self, i: u64) -> Elem {
        Elem(self.exp[(i % (self.order as u64 - 1)) as usize])
    }

    /// Extension degree `j` over `F_p` of the subfield of the given order.
    pub fn subfield_degree(&self, order: u32) -> Result<u32> {
        match prime_power(order) {
            Some((p, j)) if p == self.p && self.degree % j == 0 => Ok(j),
            _ => usage(format!("{order} is not the order of a subfield of F_{}", self.order)),
        }
    }

    /// `x^{q'} = x`, i.e. membership in the subfield of order `q'`.
    pub fn is_in_subfield(&self, x: Elem, order: u32) -> Result<bool> {
        self.subfield_degree(order)?;
        Ok(self.pow(x, order as u64) == x)
    }

    /// Elements of the subfield of the given order, in canonical order.
    pub fn subfield_elements(&self, order: u32) -> Result<Vec<Elem>> {
        self.subfield_degree(order)?;
        let step = (self.order - 1) / (order - 1);
        let mut out: Vec<Elem> = std::iter::once(Elem::ZERO)
            .chain((0..order - 1).map(|i| Elem(self.exp[(i * step) as usize])))
            .collect();
        out.sort_unstable();
        Ok(out)
    }

    /// Absolute trace `Tr_{Q -> q'}(x) = x + x^{q'} + ... + x^{q'^{r-1}}`.
    pub fn trace(&self, x: Elem, order: u32) -> Result<Elem> {
        self.relative_trace(x, self.order, order)
    }

    /// Relative trace `Tr_{big -> small}` for `x` in the subfield of order `big`.
    pub fn relative_trace(&self, x: Elem, big: u32, small: u32) -> Result<Elem> {
        let jb = self.subfield_degree(big)?;
        let js = self.subfield_degree(small)?;
        if jb % js != 0 {
            return usage(format!("F_{small} is not a subfield of F_{big}"));
        }
        if big != self.order && self.pow(x, big as u64) != x {
            return usage(format!("element {} does not lie in F_{big}", x.0));
        }
        Ok(self.relative_trace_unchecked(x, jb / js, small))
    }

    #[inline]
    pub(crate) fn relative_trace_unchecked(&self, x: Elem, terms: u32, small: u32) -> Elem {
        let mut acc = Elem::ZERO;
        let mut y = x;
        for _ in 0..terms {
            acc = self.add(acc, y);
            y = self.pow(y, small as u64);
        }
        acc
    }

    /// Coefficients over `F_p`, constant term first.
    pub fn digits(&self, x: Elem) -> Vec<u32> {
        to_digits(x.0, self.p, self.degree)
    }

    pub fn from_digits(&self, digits: &[u32]) -> Result<Elem> {
        if digits.len() != self.degree as usize || digits.iter().any(|&d| d >= self.p) {
            return usage(format!(
                "expected {} digits in 0..{}, got {:?}",
                self.degree, self.p, digits
            ));
        }
        Ok(Elem(from_digits(digits, self.p)))
    }

    /// Little-endian digit string, e.g. `"01"` for the generator `x` of `F_4`.
    pub fn format(&self, x: Elem) -> String {
        self.digits(x).iter().map(|d| char::from_digit(*d, 10).unwrap()).collect()
    }

    pub fn parse(&self, s: &str) -> Result<Elem> {
        let digits: Option<Vec<u32>> = s.trim().chars().map(|c| c.to_digit(10)).collect();
        match digits {
            Some(d) => self.from_digits(&d),
            None => usage(format!("bad element digit string `{s}`")),
        }
    }

    pub fn element(&self, x: Elem) -> Result<FieldElement<'_>> {
        FieldElement::new(self, x)
    }
}

/// An element bundled with a reference to its context. Operations check that
/// both operands come from the same field.
#[derive(Clone, Copy)]
pub struct FieldElement<'a> {
    ctx: &'a Field,
    value: Elem,
}

impl<'a> FieldElement<'a> {
    pub fn new(ctx: &'a Field, value: Elem) -> Result<Self> {
        if value.0 >= ctx.order {
            return usage(format!("{} is not an element of F_{}", value.0, ctx.order));
        }
        Ok(FieldElement { ctx, value })
    }

    pub fn value(&self) -> Elem {
        self.value
    }

    pub fn ctx(&self) -> &'a Field {
        self.ctx
    }

    fn check(&self, other: &Self) -> Result<()> {
        if std::ptr::eq(self.ctx, other.ctx) || self.ctx == other.ctx {
            Ok(())
        } else {
            usage("operands belong to different fields")
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(FieldElement { ctx: self.ctx, value: self.ctx.add(self.value, other.value) })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(FieldElement { ctx: self.ctx, value: self.ctx.sub(self.value, other.value) })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(FieldElement { ctx: self.ctx, value: self.ctx.mul(self.value, other.value) })
    }

    pub fn inv(&self) -> Result<Self> {
        Ok(FieldElement { ctx: self.ctx, value: self.ctx.inv(self.value)? })
    }

    pub fn pow(&self, e: u64) -> Self {
        FieldElement { ctx: self.ctx, value: self.ctx.pow(self.value, e) }
    }
}

impl PartialEq for FieldElement<'_> {
    fn eq(&self, other: &Self) -> bool {
        self.ctx == other.ctx && self.value == other.value
    }
}

impl fmt::Debug for FieldElement<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F{}({})", self.ctx.order, self.ctx.format(self.value))
    }
}

impl fmt::Display for FieldElement<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.ctx.format(self.value))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f4() -> Field {
        Field::new(2, 1, 2).unwrap()
    }

    // Independent schoolbook multiplication for binary fields.
    fn clmul_mod(a: u32, b: u32, modulus: u32, deg: u32) -> u32 {
        let mut acc = 0u32;
        for i in 0..deg {
            if b >> i & 1 == 1 {
                acc ^= a << i;
            }
        }
        for i in (deg..2 * deg).rev() {
            if acc >> i & 1 == 1 {
                acc ^= modulus << (i - deg);
            }
        }
        acc
    }

    #[test]
    fn omega_squared_in_f4() {
        let f = f4();
        let w = Elem(2);
        assert_eq!(f.mul(w, w), Elem(3));
        assert_eq!(f.format(Elem(3)), "11");
        assert_eq!(f.format(w), "01");
    }

    #[test]
    fn table_polynomials_are_irreducible() {
        for &(p, k, low) in IRREDUCIBLES {
            let mut m = low.to_vec();
            m.push(1);
            assert!(is_irreducible(&m, p), "{p}^{k}");
        }
        assert!(!is_irreducible(&[1, 0, 1], 2));
        assert!(!is_irreducible(&[1, 0, 0, 0, 1], 2));
        // x^2 + 1 has the roots 2 and 3 over F_5
        assert!(!is_irreducible(&[1, 0, 1], 5));
    }

    #[test]
    fn multiplication_matches_schoolbook_f16_and_f256() {
        for (n, modulus) in [(4u32, 0b1_0011u32), (8, 0b1_0001_1011)] {
            let f = Field::new(2, 1, n).unwrap();
            for a in 0..f.order() {
                for b in 0..f.order() {
                    assert_eq!(f.mul(Elem(a), Elem(b)).0, clmul_mod(a, b, modulus, n));
                }
            }
        }
    }

    #[test]
    fn inverse_exhaustive_f8() {
        let f = Field::new(2, 1, 3).unwrap();
        for a in f.elements().skip(1) {
            assert_eq!(f.mul(a, f.inv(a).unwrap()), Elem::ONE);
            assert_eq!(f.mul(a, Elem::ONE), a);
        }
        assert!(matches!(f.inv(Elem::ZERO), Err(Error::Domain(_))));
    }

    #[test]
    fn field_axioms_odd_characteristic() {
        for (p, k) in [(3, 2), (5, 2), (3, 3)] {
            let f = Field::new(p, 1, k).unwrap();
            for a in f.elements() {
                assert_eq!(f.add(a, f.neg(a)), Elem::ZERO);
                assert_eq!(f.sub(a, a), Elem::ZERO);
                for b in f.elements() {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    // digitwise addition oracle
                    let da = f.digits(a);
                    let db = f.digits(b);
                    let s: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                    assert_eq!(f.add(a, b), f.from_digits(&s).unwrap());
                    for c in f.elements().step_by(3) {
                        assert_eq!(
                            f.mul(a, f.add(b, c)),
                            f.add(f.mul(a, b), f.mul(a, c)),
                            "distributivity in {p}^{k}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn primitive_element_generates_group() {
        for (p, k) in [(2, 1), (2, 4), (2, 7), (3, 2), (5, 3), (2, 16)] {
            let f = Field::new(p, 1, k).unwrap();
            let g = f.primitive();
            let mut seen = std::collections::HashSet::new();
            let mut x = Elem::ONE;
            for _ in 0..f.order() - 1 {
                seen.insert(x);
                x = f.mul(x, g);
            }
            assert_eq!(x, Elem::ONE);
            assert_eq!(seen.len() as u32, f.order() - 1);
        }
    }

    #[test]
    fn f9_uses_x2_plus_1() {
        let f = Field::new(3, 1, 2).unwrap();
        assert_eq!(f.modulus(), &[1, 0, 1]);
        let x = f.from_digits(&[0, 1]).unwrap();
        assert_eq!(f.mul(x, x), f.neg(Elem::ONE));
    }

    #[test]
    fn frobenius_is_additive() {
        for (p, k) in [(2, 6), (3, 3), (5, 2)] {
            let f = Field::new(p, 1, k).unwrap();
            for a in f.elements() {
                for b in f.elements() {
                    let lhs = f.pow(f.add(a, b), p as u64);
                    let rhs = f.add(f.pow(a, p as u64), f.pow(b, p as u64));
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn pow_conventions() {
        let f = f4();
        assert_eq!(f.pow(Elem::ZERO, 0), Elem::ONE);
        assert_eq!(f.pow(Elem::ZERO, 5), Elem::ZERO);
        assert_eq!(f.pow(Elem(2), 3), Elem::ONE);
        assert_eq!(f.pow(Elem(2), 4), Elem(2));
    }

    #[test]
    fn trace_examples_f4() {
        let f = f4();
        assert_eq!(f.trace(Elem::ZERO, 2).unwrap(), Elem::ZERO);
        assert_eq!(f.trace(Elem(2), 2).unwrap(), Elem::ONE);
        assert_eq!(f.trace(Elem::ONE, 2).unwrap(), Elem::ZERO);
        assert_eq!(f.trace(Elem(3), 2).unwrap(), Elem::ONE);
        assert!(f.trace(Elem(2), 8).is_err());
    }

    #[test]
    fn trace_transitivity_and_fibres() {
        // F_64 ⊇ F_8 ⊇ F_2 and F_64 ⊇ F_4 ⊇ F_2
        let f = Field::new(2, 1, 6).unwrap();
        for mid in [4u32, 8] {
            for x in f.elements() {
                let direct = f.trace(x, 2).unwrap();
                let via = f.relative_trace(f.trace(x, mid).unwrap(), mid, 2).unwrap();
                assert_eq!(direct, via);
            }
        }
        for sub in [2u32, 4, 8, 64] {
            let mut counts = std::collections::HashMap::new();
            for x in f.elements() {
                let t = f.trace(x, sub).unwrap();
                assert!(f.is_in_subfield(t, sub).unwrap());
                *counts.entry(t).or_insert(0u32) += 1;
            }
            assert_eq!(counts.len() as u32, sub, "trace onto F_{sub} is surjective");
            assert!(counts.values().all(|&c| c == 64 / sub));
        }
        let g = Field::new(3, 1, 4).unwrap();
        for x in g.elements() {
            let direct = g.trace(x, 3).unwrap();
            let via = g.relative_trace(g.trace(x, 9).unwrap(), 9, 3).unwrap();
            assert_eq!(direct, via);
        }
    }

    #[test]
    fn trace_is_linear_over_subfield() {
        let f = Field::new(2, 2, 2).unwrap();
        let sub = f.subfield_elements(4).unwrap();
        for &c in &sub {
            for a in f.elements() {
                for b in f.elements().step_by(5) {
                    let lhs = f.trace(f.add(f.mul(c, a), b), 4).unwrap();
                    let rhs = f.add(f.mul(c, f.trace(a, 4).unwrap()), f.trace(b, 4).unwrap());
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn subfield_membership() {
        let f = f4();
        assert!(f.is_in_subfield(Elem::ZERO, 2).unwrap());
        assert!(!f.is_in_subfield(Elem(2), 2).unwrap());
        assert!(f.elements().all(|x| f.is_in_subfield(x, 4).unwrap()));
        assert!(f.is_in_subfield(Elem::ONE, 3).is_err());
        let g = Field::new(2, 1, 4).unwrap();
        assert_eq!(g.subfield_elements(4).unwrap().len(), 4);
        assert_eq!(g.subfield_elements(2).unwrap(), vec![Elem(0), Elem(1)]);
        assert!(g.subfield_elements(8).is_err());
    }

    #[test]
    fn digit_strings_round_trip() {
        let f = Field::new(3, 1, 3).unwrap();
        for x in f.elements() {
            assert_eq!(f.parse(&f.format(x)).unwrap(), x);
        }
        assert!(f.parse("0a1").is_err());
        assert!(f.parse("01").is_err());
        assert!(f.parse("301").is_err());
    }

    #[test]
    fn field_specs() {
        assert_eq!(parse_field_spec("2^4").unwrap(), (2, 4));
        assert_eq!(parse_field_spec("9").unwrap(), (3, 2));
        assert!(parse_field_spec("7^2").is_err());
        assert!(parse_field_spec("6").is_err());
        assert!(Field::new(2, 1, 17).is_err());
        assert!(Field::new(7, 1, 1).is_err());
        let t = Field::tower(4, 16).unwrap();
        assert_eq!((t.s(), t.n(), t.sub_order(), t.order()), (2, 2, 4, 16));
        assert!(Field::tower(4, 8).is_err());
        assert!(Field::tower(3, 8).is_err());
    }

    #[test]
    fn mismatched_contexts_are_rejected() {
        let a = f4();
        let b = Field::new(2, 1, 3).unwrap();
        let x = a.element(Elem(2)).unwrap();
        let y = b.element(Elem(2)).unwrap();
        assert!(matches!(x.add(&y), Err(Error::Usage(_))));
        let z = a.element(Elem(3)).unwrap();
        assert_eq!(x.mul(&x).unwrap(), z);
        assert!(a.element(Elem(4)).is_err());
        assert!(a.element(Elem::ZERO).unwrap().inv().is_err());
        assert_eq!(x.to_string(), "01");
    }
}
