//! Base codes, their lifts, membership, encoding and the four parameterised
//! constructions.

use std::sync::{Arc, OnceLock};

use serde::Serialize;
use serde_json::{json, Value};

use crate::degrees::{lift_degree_set, Degree, DegreeSet, Orbit};
use crate::error::{usage, Error, Result};
use crate::gf::{Elem, Field};
use crate::space::{
    affine_subspaces, coefficient_table, domain_size, evaluate_coefficient_table, restrict, support,
    FuncTable,
};

/// How a base code is specified.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum BaseKind {
    /// `Σ_α f(α) = 0` over `F_Q^t`.
    Parity,
    /// Univariate polynomials of degree at most `d`.
    ReedSolomon { d: u32 },
    /// `Fam(D)` for an explicit degree set.
    Degrees,
}

/// An affine-invariant code on `F_Q^t` with values in `F_q`.
#[derive(Clone, Debug)]
pub struct BaseCode {
    field: Arc<Field>,
    t: usize,
    q: u32,
    degrees: DegreeSet,
    kind: BaseKind,
}

impl BaseCode {
    /// Zero-sum functions `F_Q -> F_q`; degree set `{0..Q-2}`.
    pub fn parity_univariate(field: Arc<Field>) -> Result<Self> {
        Self::parity_multivariate(field, 1)
    }

    /// Zero-sum functions `F_Q^t -> F_q`; degree set everything but
    /// `(Q-1, ..., Q-1)`.
    pub fn parity_multivariate(field: Arc<Field>, t: usize) -> Result<Self> {
        let (big_q, q) = (field.order(), field.sub_order());
        let mut degrees = DegreeSet::full(big_q, q, t)?;
        degrees.remove(&vec![big_q - 1; t]);
        Ok(BaseCode { field, t, q, degrees, kind: BaseKind::Parity })
    }

    /// `{f : F_Q -> F_Q | deg f <= d}` for `d <= Q - 2`.
    pub fn reed_solomon(field: Arc<Field>, d: u32) -> Result<Self> {
        let big_q = field.order();
        if d + 2 > big_q {
            return usage(format!("Reed-Solomon degree {d} must be at most Q - 2 = {}", big_q - 2));
        }
        let degrees = DegreeSet::from_degrees(big_q, big_q, 1, (0..=d).map(|e| [e]))?;
        Ok(BaseCode { field, t: 1, q: big_q, degrees, kind: BaseKind::ReedSolomon { d } })
    }

    /// `Fam(D)`: `F_q`-valued functions supported on `D`, with `q` the
    /// set's value field.
    pub fn from_degrees(field: Arc<Field>, degrees: DegreeSet) -> Result<Self> {
        if degrees.big_q() != field.order() {
            return usage(format!("degree set over F_{} used with F_{}", degrees.big_q(), field.order()));
        }
        field.subfield_degree(degrees.q())?;
        if !degrees.is_q_shift_closed() {
            return usage("degree set is not q-shift closed");
        }
        Ok(BaseCode { t: degrees.arity(), q: degrees.q(), field, degrees, kind: BaseKind::Degrees })
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn arity(&self) -> usize {
        self.t
    }

    pub fn value_order(&self) -> u32 {
        self.q
    }

    pub fn degrees(&self) -> &DegreeSet {
        &self.degrees
    }

    pub fn kind(&self) -> &BaseKind {
        &self.kind
    }

    /// The defining constraint, where the code has one besides its degree set.
    pub fn direct_check(&self, f: &FuncTable) -> Option<bool> {
        match self.kind {
            BaseKind::Parity => Some(self.values_in_range(f) && self.field.sum(f.values().iter().copied()).is_zero()),
            _ => None,
        }
    }

    /// `f ∈ Fam(D)`.
    pub fn member_by_degrees(&self, f: &FuncTable) -> bool {
        self.values_in_range(f) && support(f).is_subset(&self.degrees)
    }

    /// Membership by the defining constraint when there is one, else by
    /// degree set.
    pub fn contains(&self, f: &FuncTable) -> bool {
        if f.arity() != self.t {
            return false;
        }
        self.direct_check(f).unwrap_or_else(|| self.member_by_degrees(f))
    }

    /// `Fam(D)` viewed as a code on `F_Q^t`, sharing the encoding machinery
    /// of lifted codes.
    pub fn fam_code(&self) -> LiftedCode {
        LiftedCode {
            base: self.clone(),
            m: self.t,
            degrees: OnceLock::from(self.degrees.clone()),
            orbits: OnceLock::new(),
        }
    }

    fn values_in_range(&self, f: &FuncTable) -> bool {
        f.value_order() == self.q
            || self.q == self.field.order()
            || f.values().iter().all(|&v| self.field.pow(v, self.q as u64) == v)
    }

    fn describe(&self) -> String {
        match self.kind {
            BaseKind::Parity if self.t == 1 => "parity".into(),
            BaseKind::Parity => format!("parity-{}", self.t),
            BaseKind::ReedSolomon { d } => format!("rs-{d}"),
            BaseKind::Degrees => "degrees".into(),
        }
    }
}

/// How to decide membership in a lifted code.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MemberMode {
    /// `supp(f) ⊆ Deg(L)`.
    ByDegrees,
    /// `f|_V` in the base code for every `t`-dimensional affine subspace `V`.
    ByRestriction,
}

/// One `q`-shift orbit of the lifted degree set. Its coefficient lives in
/// `F_{q^b}` with `b` the orbit size.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitInfo {
    pub orbit: Orbit,
    pub subfield_order: u32,
}

impl OrbitInfo {
    pub fn rep(&self) -> &Degree {
        &self.orbit.rep
    }

    pub fn size(&self) -> usize {
        self.orbit.size()
    }
}

/// `Lift_m(F)` for a base code `F` on `F_Q^t`.
#[derive(Debug)]
pub struct LiftedCode {
    base: BaseCode,
    m: usize,
    degrees: OnceLock<DegreeSet>,
    orbits: OnceLock<Vec<OrbitInfo>>,
}

impl Clone for LiftedCode {
    fn clone(&self) -> Self {
        LiftedCode { base: self.base.clone(), m: self.m, degrees: self.degrees.clone(), orbits: self.orbits.clone() }
    }
}

pub fn lift(base: BaseCode, m: usize) -> Result<LiftedCode> {
    if m < base.t {
        return usage(format!("cannot lift a {}-variate code to {m} variables", base.t));
    }
    domain_size(base.field.order(), m)?;
    Ok(LiftedCode { base, m, degrees: OnceLock::new(), orbits: OnceLock::new() })
}

impl LiftedCode {
    pub fn base(&self) -> &BaseCode {
        &self.base
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.base.field
    }

    pub fn arity(&self) -> usize {
        self.m
    }

    pub fn value_order(&self) -> u32 {
        self.base.q
    }

    pub fn block_length(&self) -> usize {
        (self.base.field.order() as usize).pow(self.m as u32)
    }

    /// `Deg(L) = Lift_m(Deg(F))`, computed on first use.
    pub fn degrees(&self) -> &DegreeSet {
        self.degrees.get_or_init(|| lift_degree_set(&self.base.degrees, self.m).expect("shape checked in lift"))
    }

    pub fn dimension(&self) -> usize {
        self.degrees().len()
    }

    /// Orbits of `Deg(L)` ordered by representative.
    pub fn orbits(&self) -> &[OrbitInfo] {
        self.orbits.get_or_init(|| {
            let q = self.base.q;
            self.degrees()
                .orbits()
                .expect("lifted sets are shift closed")
                .into_iter()
                .map(|orbit| OrbitInfo { subfield_order: q.pow(orbit.size() as u32), orbit })
                .collect()
        })
    }

    pub fn member(&self, f: &FuncTable, mode: MemberMode) -> Result<bool> {
        if *f.field() != self.base.field || f.arity() != self.m {
            return usage("table does not live on the code's domain");
        }
        Ok(match mode {
            MemberMode::ByDegrees => {
                self.base.values_in_range(f) && support(f).is_subset(self.degrees())
            }
            MemberMode::ByRestriction => {
                let field = &self.base.field;
                affine_subspaces(field, self.m, self.base.t)?
                    .iter()
                    .all(|v| self.base.contains(&restrict(f, v).expect("shapes match")))
            }
        })
    }

    /// `Σ_d Tr_{q^b -> q}(f_d x^d)` over orbit representatives `d`, with one
    /// coefficient `f_d ∈ F_{q^b}` per orbit in [`Self::orbits`] order.
    pub fn encode(&self, coefficients: &[Elem]) -> Result<FuncTable> {
        let orbits = self.orbits();
        if coefficients.len() != orbits.len() {
            return usage(format!("expected {} orbit coefficients, got {}", orbits.len(), coefficients.len()));
        }
        let field = &self.base.field;
        let q = self.base.q as u64;
        let degrees = self.degrees();
        let mut dense = vec![Elem::ZERO; degrees.universe_size()];
        for (info, &c) in orbits.iter().zip(coefficients) {
            if c.0 >= field.order() || !field.is_in_subfield(c, info.subfield_order)? {
                return usage(format!(
                    "coefficient {} for orbit of {:?} is not in F_{}",
                    field.format(c),
                    info.rep(),
                    info.subfield_order
                ));
            }
            // Tr(c x^d) = Σ_j c^{q^j} x^{q^j d}; the orbit lists d, qd, q^2 d, ... in
            // sorted order, so walk the shift sequence explicitly.
            let mut d = info.rep().clone();
            let mut cj = c;
            for _ in 0..info.size() {
                dense[degrees.index_of(&d).unwrap()] = cj;
                d = crate::degrees::q_shift(&d, self.base.q, field.order());
                cj = field.pow(cj, q);
            }
        }
        let table = evaluate_coefficient_table(field.clone(), self.m, dense)?;
        table.with_value_field(self.base.q)
    }

    /// Inverse of [`Self::encode`] on codewords.
    pub fn orbit_coefficients(&self, f: &FuncTable) -> Result<Vec<Elem>> {
        if !self.member(f, MemberMode::ByDegrees)? {
            return Err(Error::Domain("table is not a codeword".into()));
        }
        let coeffs = coefficient_table(f);
        let degrees = self.degrees();
        Ok(self.orbits().iter().map(|o| coeffs[degrees.index_of(o.rep()).unwrap()]).collect())
    }

    /// An `F_q`-basis of `F_{q^b}`: `1, g, ..., g^{b-1}` for a generator `g`.
    fn subfield_basis(&self, b: usize) -> Vec<Elem> {
        let field = &self.base.field;
        let order = self.base.q.pow(b as u32) as u64;
        let g = field.exp((field.order() as u64 - 1) / (order - 1));
        (0..b as u64).map(|j| field.pow(g, j)).collect()
    }

    /// Per-orbit coefficients from `dim` symbols of `F_q`, `b` symbols per
    /// orbit in orbit order.
    pub fn coefficients_from_symbols(&self, symbols: &[Elem]) -> Result<Vec<Elem>> {
        if symbols.len() != self.dimension() {
            return usage(format!("expected {} message symbols, got {}", self.dimension(), symbols.len()));
        }
        let field = &self.base.field;
        let mut rest = symbols;
        let mut out = Vec::with_capacity(self.orbits().len());
        for info in self.orbits() {
            let (mine, tail) = rest.split_at(info.size());
            rest = tail;
            for &s in mine {
                if !field.is_in_subfield(s, self.base.q)? || s.0 >= field.order() {
                    return usage(format!("symbol {} not in F_{}", field.format(s), self.base.q));
                }
            }
            let basis = self.subfield_basis(info.size());
            out.push(field.sum(mine.iter().zip(&basis).map(|(&s, &b)| field.mul(s, b))));
        }
        Ok(out)
    }

    /// Encodes `dim` symbols of `F_q`; an `F_q`-linear bijection onto the code.
    pub fn encode_symbols(&self, symbols: &[Elem]) -> Result<FuncTable> {
        self.encode(&self.coefficients_from_symbols(symbols)?)
    }

    /// Images of the unit messages: an `F_q`-basis of the code.
    pub fn basis_tables(&self) -> Result<Vec<FuncTable>> {
        let dim = self.dimension();
        (0..dim)
            .map(|i| {
                let mut msg = vec![Elem::ZERO; dim];
                msg[i] = Elem::ONE;
                self.encode_symbols(&msg)
            })
            .collect()
    }

    pub fn descriptor(&self, theorem: Option<u8>) -> Value {
        let field = &self.base.field;
        json!({
            "theorem": theorem,
            "p": field.characteristic(),
            "q": self.base.q,
            "Q": field.order(),
            "t": self.base.t,
            "m": self.m,
            "base": self.base.describe(),
            "D": self.base.degrees.to_vec(),
            "dim": self.dimension(),
            "N": self.block_length(),
            "locality": self.locality(),
        })
    }

    /// Queries made by the subspace corrector: `Q^t - 1`.
    pub fn locality(&self) -> usize {
        (self.base.field.order() as usize).pow(self.base.t as u32) - 1
    }
}

/// Inputs to [`construct`]. Missing values are derived; explicit `m`, `ell`,
/// `s` and `c` override the derivation for small runs.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ConstructionInputs {
    pub k: Option<u32>,
    pub eps: Option<f64>,
    pub delta: Option<f64>,
    pub p: Option<u32>,
    pub n0: Option<u64>,
    pub m: Option<usize>,
    pub ell: Option<u32>,
    pub s: Option<u32>,
    pub c: Option<u32>,
}

/// Derived parameters of a construction, with the dimension bound it claims.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConstructionParams {
    pub theorem: u8,
    pub k: Option<u32>,
    pub eps: Option<f64>,
    pub delta: Option<f64>,
    pub n0: Option<u64>,
    pub p: u32,
    pub q: u32,
    #[serde(rename = "Q")]
    pub big_q: u32,
    pub ell: u32,
    pub s: Option<u32>,
    pub m: usize,
    pub t: usize,
    #[serde(rename = "N")]
    pub n: u64,
    pub b: Option<u32>,
    pub c: Option<u32>,
    pub gamma: Option<f64>,
    pub tau: Option<f64>,
    pub d: Option<u32>,
    pub eps_prime: Option<f64>,
    pub c_k: Option<f64>,
    /// Lower bound on the dimension (exact value for theorem 3).
    pub claimed_dimension: f64,
    pub claim_is_exact: bool,
    pub locality: u64,
    /// Fraction of errors the local corrector is guaranteed to handle.
    pub correction_radius: f64,
}

fn infeasible<T>(constraint: impl Into<String>) -> Result<T> {
    Err(Error::Infeasible { constraint: constraint.into() })
}

fn ceil_log(base: u64, x: f64) -> u32 {
    // least e with base^e >= x
    let mut e = 0u32;
    let mut v = 1f64;
    while v < x {
        v *= base as f64;
        e += 1;
    }
    e
}

fn ceil_log_int(base: u64, x: u64) -> u32 {
    let mut e = 0u32;
    let mut v = 1u64;
    while v < x {
        v = v.saturating_mul(base);
        e += 1;
    }
    e
}

fn binomial(n: u64, k: u64) -> f64 {
    if k > n {
        return 0.0;
    }
    (0..k).fold(1f64, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn require_eps(eps: Option<f64>) -> Result<f64> {
    match eps {
        Some(e) if e > 0.0 && e < 1.0 => Ok(e),
        Some(_) => infeasible("0 < eps < 1"),
        None => usage("missing eps"),
    }
}

/// Builds the code of theorem 1–4 together with its derived parameters.
pub fn construct(theorem: u8, inputs: &ConstructionInputs) -> Result<(ConstructionParams, LiftedCode)> {
    let params = derive_params(theorem, inputs)?;
    // theorem 4 codes are F_Q-valued, the others F_p-valued
    let (s, n) = if theorem == 4 { (params.ell, 1) } else { (1, params.ell) };
    let field = Field::shared(params.p, s, n)?;
    let base = match theorem {
        1 | 2 => BaseCode::parity_univariate(field)?,
        3 => BaseCode::parity_multivariate(field, params.t)?,
        _ => BaseCode::reed_solomon(field, params.d.expect("theorem 4 sets d"))?,
    };
    let code = lift(base, params.m)?;
    Ok((params, code))
}

pub fn derive_params(theorem: u8, inputs: &ConstructionInputs) -> Result<ConstructionParams> {
    let mut out = ConstructionParams {
        theorem,
        k: inputs.k,
        eps: inputs.eps,
        delta: inputs.delta,
        n0: inputs.n0,
        p: 2,
        q: 2,
        big_q: 0,
        ell: 0,
        s: None,
        m: 0,
        t: 1,
        n: 0,
        b: None,
        c: None,
        gamma: None,
        tau: None,
        d: None,
        eps_prime: None,
        c_k: None,
        claimed_dimension: 0.0,
        claim_is_exact: false,
        locality: 0,
        correction_radius: 0.0,
    };
    let n0 = inputs.n0.unwrap_or(1).max(1);
    match theorem {
        1 => {
            let k = inputs.k.ok_or_else(|| Error::Usage("theorem 1 needs k".into()))?;
            if k < 2 || !k.is_power_of_two() {
                return infeasible("k = 2^ell with ell >= 1");
            }
            let ell = k.trailing_zeros();
            let m = match inputs.m {
                Some(m) => m,
                None => ceil_log_int(2, n0).div_ceil(ell).max(1) as usize,
            };
            out.ell = ell;
            out.big_q = k;
            out.m = m;
            out.c_k = Some(1.0 / ((k as f64).powi(k as i32 - 2) * (1..=k).map(f64::from).product::<f64>()));
            out.claimed_dimension = binomial(m as u64, k as u64 - 2);
        }
        2 => {
            let eps = require_eps(inputs.eps)?;
            let p = inputs.p.unwrap_or(2);
            if crate::gf::prime_power(p).map(|(_, k)| k) != Some(1) {
                return infeasible("p prime");
            }
            let m = inputs.m.unwrap_or((1.0 / eps).ceil() as usize);
            let ell = match inputs.ell {
                Some(l) => l,
                None => ceil_log(p as u64, n0 as f64).div_ceil(m as u32).max(1),
            };
            let b = 1 + ceil_log_int(p as u64, m as u64);
            out.p = p;
            out.q = p;
            out.ell = ell;
            out.big_q = p.checked_pow(ell).ok_or_else(|| Error::Guard("Q overflows".into()))?;
            out.m = m;
            out.b = Some(b);
            let mb = (m as u32 * b) as f64;
            out.eps_prime = Some(1.0 / (m as f64 * b as f64 * (p as f64).powf(mb)));
            // vectors outside the lift leave no block of b digit positions all
            // zero across coordinates
            let blocks = ell / b;
            let spare = ell - blocks * b;
            let pm = (p as f64).powf(mb);
            let outside = (pm - 1.0).powi(blocks as i32) * (p as f64).powi((m as u32 * spare) as i32);
            let n = (out.big_q as f64).powi(m as i32);
            out.claimed_dimension = (n - outside).max(0.0);
        }
        3 => {
            let ell = match inputs.ell {
                Some(l) => l,
                None => ceil_log(2, 1.0 / require_eps(inputs.eps)?),
            };
            if ell == 0 {
                return infeasible("ell >= 1");
            }
            let m = inputs.m.ok_or_else(|| Error::Usage("theorem 3 needs m".into()))?;
            if m < 2 {
                return infeasible("m >= 2");
            }
            out.ell = ell;
            out.big_q = 1 << ell;
            out.m = m;
            out.t = m - 1;
            out.claimed_dimension = 2f64.powi((m as u32 * ell) as i32) - ((m + 1) as f64).powi(ell as i32);
            out.claim_is_exact = true;
        }
        4 => {
            let m = match inputs.m {
                Some(m) => m,
                None => match inputs.delta {
                    Some(d) if d > 0.0 && d <= 1.0 => (1.0 / d).ceil() as usize,
                    Some(_) => return infeasible("0 < delta <= 1"),
                    None => return usage("theorem 4 needs delta or m"),
                },
            };
            let s = match inputs.s {
                Some(s) => s,
                None => {
                    let delta = inputs.delta.unwrap_or(1.0 / m as f64);
                    ceil_log(2, (n0 as f64).powf(delta)).max(1)
                }
            };
            let b = 1 + ceil_log_int(2, m as u64);
            let c = match inputs.c {
                Some(c) => c,
                None => {
                    let eps = require_eps(inputs.eps)?;
                    (b as f64 * 2f64.powi((b * m as u32) as i32) * (1.0 / eps).log2()).ceil() as u32
                }
            };
            if c == 0 {
                return infeasible("c >= 1");
            }
            if c > s {
                return infeasible(format!("c <= s (c = {c}, s = {s})"));
            }
            if c == s {
                return infeasible(format!("c < s so that d = Q - Q/2^c <= Q - 2 (c = s = {s})"));
            }
            if s > 16 {
                return infeasible("s <= 16");
            }
            let big_q = 1u32 << s;
            out.ell = s;
            out.s = Some(s);
            out.q = big_q;
            out.big_q = big_q;
            out.m = m;
            out.b = Some(b);
            out.c = Some(c);
            let gamma = 2f64.powi(-(c as i32));
            out.gamma = Some(gamma);
            out.tau = Some(gamma / 6.0);
            out.d = Some(big_q - (big_q >> c));
            let n = (big_q as f64).powi(m as i32);
            out.claimed_dimension = if m == 2 {
                let (f4, f3) = (4f64.powi(c as i32), 3f64.powi(c as i32));
                (f4 - 1.25 * f3 + 0.25) / f4 * n
            } else {
                (1.0 - (1.0 - 2f64.powi(-((m as u32 * b) as i32))).powi((c / b) as i32)) * n
            };
        }
        _ => return usage(format!("unknown theorem {theorem}; expected 1-4")),
    }
    if out.m == 0 {
        return infeasible("m >= 1");
    }
    out.n = (out.big_q as u64)
        .checked_pow(out.m as u32)
        .ok_or_else(|| Error::Guard("block length overflows".into()))?;
    if theorem == 4 {
        out.locality = out.big_q as u64;
        out.correction_radius = out.tau.unwrap();
    } else {
        let qt = (out.big_q as u64).pow(out.t as u32);
        out.locality = qt - 1;
        out.correction_radius = 1.0 / (3.0 * qt as f64);
    }
    Ok(out)
}
