//! Functions on `F_Q^m`, affine subspaces and maps, restrictions and
//! polynomial coefficients.
//!
//! Points of `F_Q^m` are indexed in mixed radix `Q` with the first coordinate
//! most significant. Degree vectors use the same layout, so a dense
//! coefficient table lines up with [`DegreeSet`] indices.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::degrees::{Degree, DegreeSet};
use crate::error::{usage, Error, Result};
use crate::gf::{Elem, Field};

/// Largest dense table we are willing to allocate.
pub const MAX_TABLE: u64 = 1 << 24;

pub fn domain_size(big_q: u32, m: usize) -> Result<usize> {
    (big_q as u64)
        .checked_pow(m as u32)
        .filter(|&n| n <= MAX_TABLE)
        .map(|n| n as usize)
        .ok_or_else(|| Error::Guard(format!("{big_q}^{m} points exceed the table limit 2^24")))
}

pub fn point_of(mut index: usize, big_q: u32, m: usize) -> Vec<Elem> {
    let mut x = vec![Elem::ZERO; m];
    for slot in x.iter_mut().rev() {
        *slot = Elem((index % big_q as usize) as u32);
        index /= big_q as usize;
    }
    x
}

pub fn index_of(x: &[Elem], big_q: u32) -> usize {
    x.iter().fold(0usize, |acc, e| acc * big_q as usize + e.index())
}

/// Reduces `rows` to reduced row echelon form in place and returns the pivot
/// columns. Zero rows are dropped.
pub fn rref(field: &Field, rows: &mut Vec<Vec<Elem>>) -> Vec<usize> {
    let width = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..width {
        let Some(pr) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = field.inv(rows[r][c]).expect("pivot is nonzero");
        for x in rows[r].iter_mut() {
            *x = field.mul(*x, inv);
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let factor = rows[i][c];
                for j in 0..width {
                    let t = field.mul(factor, rows[r][j]);
                    rows[i][j] = field.sub(rows[i][j], t);
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

/// Some solution of `A x = b`, with free variables set to zero, or `None` if
/// the system is inconsistent.
pub fn solve_linear(field: &Field, a: &[Vec<Elem>], b: &[Elem]) -> Option<Vec<Elem>> {
    let cols = a.first().map_or(0, Vec::len);
    let mut rows: Vec<Vec<Elem>> = a
        .iter()
        .zip(b)
        .map(|(row, &bi)| {
            let mut r = row.clone();
            r.push(bi);
            r
        })
        .collect();
    let pivots = rref(field, &mut rows);
    if pivots.last() == Some(&cols) {
        return None;
    }
    let mut x = vec![Elem::ZERO; cols];
    for (row, &c) in rows.iter().zip(&pivots) {
        x[c] = row[cols];
    }
    Some(x)
}

pub fn rank(field: &Field, vectors: &[Vec<Elem>]) -> usize {
    let mut rows = vectors.to_vec();
    rref(field, &mut rows).len()
}

/// A function `F_Q^m -> F_{q'}` stored as a dense table, where `F_{q'}` is the
/// declared value field (a subfield of `F_Q`).
#[derive(Clone)]
pub struct FuncTable {
    field: Arc<Field>,
    m: usize,
    value_order: u32,
    values: Vec<Elem>,
}

impl std::fmt::Debug for FuncTable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FuncTable")
            .field("Q", &self.field.order())
            .field("m", &self.m)
            .field("value_field", &self.value_order)
            .field("values", &self.values.iter().map(|e| e.0).collect::<Vec<_>>())
            .finish()
    }
}

impl PartialEq for FuncTable {
    fn eq(&self, other: &Self) -> bool {
        *self.field == *other.field && self.m == other.m && self.values == other.values
    }
}

impl Eq for FuncTable {}

impl FuncTable {
    pub fn new(field: Arc<Field>, m: usize, value_order: u32, values: Vec<Elem>) -> Result<Self> {
        let size = domain_size(field.order(), m)?;
        if values.len() != size {
            return usage(format!("table has {} values, expected {size}", values.len()));
        }
        field.subfield_degree(value_order)?;
        if value_order != field.order() {
            if let Some(bad) = values.iter().find(|&&v| field.pow(v, value_order as u64) != v) {
                return Err(Error::Domain(format!(
                    "value {} is not in F_{value_order}",
                    field.format(*bad)
                )));
            }
        } else if let Some(bad) = values.iter().find(|v| v.0 >= field.order()) {
            return Err(Error::Domain(format!("value index {} out of range", bad.0)));
        }
        Ok(FuncTable { field, m, value_order, values })
    }

    pub(crate) fn new_unchecked(field: Arc<Field>, m: usize, value_order: u32, values: Vec<Elem>) -> Self {
        debug_assert_eq!(values.len(), (field.order() as usize).pow(m as u32));
        FuncTable { field, m, value_order, values }
    }

    pub fn zero(field: Arc<Field>, m: usize, value_order: u32) -> Result<Self> {
        let size = domain_size(field.order(), m)?;
        Self::new(field, m, value_order, vec![Elem::ZERO; size])
    }

    pub fn constant(field: Arc<Field>, m: usize, value_order: u32, c: Elem) -> Result<Self> {
        let size = domain_size(field.order(), m)?;
        Self::new(field, m, value_order, vec![c; size])
    }

    pub fn from_fn(
        field: Arc<Field>,
        m: usize,
        value_order: u32,
        f: impl Fn(&[Elem]) -> Elem,
    ) -> Result<Self> {
        let size = domain_size(field.order(), m)?;
        let big_q = field.order();
        let values = (0..size).map(|i| f(&point_of(i, big_q, m))).collect();
        Self::new(field, m, value_order, values)
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn arity(&self) -> usize {
        self.m
    }

    pub fn value_order(&self) -> u32 {
        self.value_order
    }

    pub fn values(&self) -> &[Elem] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Elem> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    #[inline]
    pub fn at(&self, index: usize) -> Elem {
        self.values[index]
    }

    pub fn get(&self, x: &[Elem]) -> Elem {
        self.values[index_of(x, self.field.order())]
    }

    pub fn point(&self, index: usize) -> Vec<Elem> {
        point_of(index, self.field.order(), self.m)
    }

    /// Re-declares the value field, checking that every value lies in it.
    pub fn with_value_field(self, value_order: u32) -> Result<Self> {
        Self::new(self.field, self.m, value_order, self.values)
    }

    pub fn weight(&self) -> usize {
        self.values.iter().filter(|v| !v.is_zero()).count()
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.is_zero())
    }

    pub fn distance(&self, other: &FuncTable) -> Result<usize> {
        self.check_compatible(other)?;
        Ok(self.values.iter().zip(&other.values).filter(|(a, b)| a != b).count())
    }

    pub fn add(&self, other: &FuncTable) -> Result<FuncTable> {
        self.check_compatible(other)?;
        let values = self.values.iter().zip(&other.values).map(|(&a, &b)| self.field.add(a, b)).collect();
        Ok(Self::new_unchecked(
            self.field.clone(),
            self.m,
            self.joint_value_order(other),
            values,
        ))
    }

    pub fn sub(&self, other: &FuncTable) -> Result<FuncTable> {
        self.check_compatible(other)?;
        let values = self.values.iter().zip(&other.values).map(|(&a, &b)| self.field.sub(a, b)).collect();
        Ok(Self::new_unchecked(
            self.field.clone(),
            self.m,
            self.joint_value_order(other),
            values,
        ))
    }

    /// `c · f`; `c` must lie in the value field.
    pub fn scale(&self, c: Elem) -> Result<FuncTable> {
        if !self.field.is_in_subfield(c, self.value_order)? {
            return Err(Error::Domain(format!("scalar not in F_{}", self.value_order)));
        }
        let values = self.values.iter().map(|&a| self.field.mul(a, c)).collect();
        Ok(Self::new_unchecked(self.field.clone(), self.m, self.value_order, values))
    }

    fn joint_value_order(&self, other: &FuncTable) -> u32 {
        if self.value_order == other.value_order {
            self.value_order
        } else {
            self.field.order()
        }
    }

    fn check_compatible(&self, other: &FuncTable) -> Result<()> {
        if *self.field != *other.field || self.m != other.m {
            return usage("tables live on different domains");
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        let repr = TableRepr {
            p: self.field.characteristic(),
            s: self.field.s(),
            n: self.field.n(),
            m: self.m,
            value_field: self.value_order,
            values: self.values.iter().map(|&v| self.field.format(v)).collect(),
        };
        serde_json::to_value(repr).expect("tables serialise")
    }

    pub fn from_json(v: &Value) -> Result<FuncTable> {
        let repr: TableRepr = serde_json::from_value(v.clone())
            .map_err(|e| Error::Usage(format!("bad table JSON: {e}")))?;
        let field = Field::shared(repr.p, repr.s, repr.n)?;
        let values = repr.values.iter().map(|s| field.parse(s)).collect::<Result<Vec<_>>>()?;
        FuncTable::new(field, repr.m, repr.value_field, values)
    }
}

#[derive(Serialize, Deserialize)]
struct TableRepr {
    p: u32,
    s: u32,
    n: u32,
    m: usize,
    value_field: u32,
    values: Vec<String>,
}

/// `x ↦ x^d` for every `x ∈ F_Q`, as a dense table.
fn power_table(field: &Field, d: u32) -> Vec<Elem> {
    field.elements().map(|x| field.pow(x, d as u64)).collect()
}

/// Applies a linear map to every axis-`k` line of a dense `Q^m` array.
fn transform_axes(
    data: &mut [Elem],
    big_q: usize,
    m: usize,
    mut line_map: impl FnMut(&[Elem], &mut [Elem]),
) {
    let mut input = vec![Elem::ZERO; big_q];
    let mut output = vec![Elem::ZERO; big_q];
    for k in 0..m {
        let stride = big_q.pow((m - 1 - k) as u32);
        let block = stride * big_q;
        for start in (0..data.len()).step_by(block) {
            for offset in 0..stride {
                let base = start + offset;
                for (a, slot) in input.iter_mut().enumerate() {
                    *slot = data[base + a * stride];
                }
                line_map(&input, &mut output);
                for (a, &val) in output.iter().enumerate() {
                    data[base + a * stride] = val;
                }
            }
        }
    }
}

/// Dense coefficient table of the unique polynomial with per-variable degree
/// below `Q` that agrees with `f`, indexed like a [`DegreeSet`].
///
/// Per axis, for values `v(a)`: `c_0 = v(0)`, `c_d = -Σ_{a≠0} v(a) a^{-d}` for
/// `0 < d < Q-1`, and `c_{Q-1} = -Σ_a v(a)`.
pub fn coefficient_table(f: &FuncTable) -> Vec<Elem> {
    let field = &*f.field;
    let big_q = field.order() as usize;
    let group = big_q as u64 - 1;
    let logs: Vec<Option<u32>> = field.elements().map(|x| field.log(x)).collect();
    let mut data = f.values.clone();
    transform_axes(&mut data, big_q, f.m, |v, c| {
        c[0] = v[0];
        let mut total = Elem::ZERO;
        for &x in v {
            total = field.add(total, x);
        }
        c[big_q - 1] = field.neg(total);
        for d in 1..big_q.saturating_sub(1) {
            let mut acc = Elem::ZERO;
            for a in 1..big_q {
                if v[a].is_zero() {
                    continue;
                }
                let la = logs[a].unwrap() as u64;
                let inv_pow = field.exp(group - (d as u64 * la) % group);
                acc = field.add(acc, field.mul(v[a], inv_pow));
            }
            c[d] = field.neg(acc);
        }
    });
    data
}

/// Sparse coefficients, keyed by degree vector in lexicographic order.
pub fn coefficients(f: &FuncTable) -> BTreeMap<Degree, Elem> {
    let big_q = f.field.order();
    coefficient_table(f)
        .into_iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| (point_of(i, big_q, f.m).into_iter().map(|e| e.0).collect(), c))
        .collect()
}

/// Evaluates a dense coefficient table at every point.
pub fn evaluate_coefficient_table(field: Arc<Field>, m: usize, coeffs: Vec<Elem>) -> Result<FuncTable> {
    let big_q = field.order() as usize;
    if coeffs.len() != domain_size(field.order(), m)? {
        return usage("coefficient table has the wrong length");
    }
    let powers: Vec<Vec<Elem>> = (0..big_q as u32).map(|d| power_table(&field, d)).collect();
    let mut data = coeffs;
    {
        let field = &*field;
        transform_axes(&mut data, big_q, m, |c, v| {
            for (a, slot) in v.iter_mut().enumerate() {
                let mut acc = Elem::ZERO;
                for (d, &cd) in c.iter().enumerate() {
                    if !cd.is_zero() {
                        acc = field.add(acc, field.mul(cd, powers[d][a]));
                    }
                }
                *slot = acc;
            }
        });
    }
    let order = field.order();
    Ok(FuncTable::new_unchecked(field, m, order, data))
}

/// Pointwise evaluation of a sparse polynomial; the value field is `F_Q`.
pub fn evaluate_poly(coeffs: &BTreeMap<Degree, Elem>, field: Arc<Field>, m: usize) -> Result<FuncTable> {
    let big_q = field.order();
    let mut dense = vec![Elem::ZERO; domain_size(big_q, m)?];
    for (d, &c) in coeffs {
        if d.len() != m || d.iter().any(|&x| x >= big_q) {
            return usage(format!("degree {d:?} outside {{0..{}}}^{m}", big_q - 1));
        }
        if c.0 >= big_q {
            return Err(Error::Domain(format!("coefficient index {} out of range", c.0)));
        }
        let i = d.iter().fold(0usize, |acc, &x| acc * big_q as usize + x as usize);
        dense[i] = c;
    }
    evaluate_coefficient_table(field, m, dense)
}

/// Degree vectors with a nonzero coefficient. The set is relative to the
/// table's value field, so it is `q`-shift closed for `F_q`-valued tables.
pub fn support(f: &FuncTable) -> DegreeSet {
    let mut s = DegreeSet::empty(f.field.order(), f.value_order, f.m).expect("table shapes fit degree sets");
    for (i, c) in coefficient_table(f).into_iter().enumerate() {
        if !c.is_zero() {
            let d = s.degree_at(i);
            s.insert(&d).expect("in range");
        }
    }
    s
}

/// `x ↦ Tr_{Q -> q}(λ · x^d)`.
pub fn monomial_trace_function(field: Arc<Field>, lambda: Elem, d: &[u32], q: u32) -> Result<FuncTable> {
    let big_q = field.order();
    if d.iter().any(|&x| x >= big_q) {
        return usage(format!("degree {d:?} outside {{0..{}}}", big_q - 1));
    }
    field.subfield_degree(q)?;
    let terms = field.degree() / field.subfield_degree(q)?;
    let powers: Vec<Vec<Elem>> = d.iter().map(|&di| power_table(&field, di)).collect();
    let m = d.len();
    let size = domain_size(big_q, m)?;
    let values = (0..size)
        .map(|i| {
            let x = point_of(i, big_q, m);
            let mono = x.iter().zip(&powers).fold(lambda, |acc, (xi, pw)| field.mul(acc, pw[xi.index()]));
            field.relative_trace_unchecked(mono, terms, q)
        })
        .collect();
    Ok(FuncTable::new_unchecked(field, m, q, values))
}

/// `{b + Σ u_i b_i}` with linearly independent `b_1..b_t`. The ordered basis
/// fixes the identification of `F_Q^t` with the subspace.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineSubspace {
    base: Vec<Elem>,
    basis: Vec<Vec<Elem>>,
}

impl AffineSubspace {
    pub fn new(field: &Field, base: Vec<Elem>, basis: Vec<Vec<Elem>>) -> Result<Self> {
        let m = base.len();
        if basis.len() > m || basis.iter().any(|b| b.len() != m) {
            return usage(format!("basis of {} vectors does not fit F_Q^{m}", basis.len()));
        }
        if base.iter().chain(basis.iter().flatten()).any(|e| e.0 >= field.order()) {
            return Err(Error::Domain("coordinate outside the field".into()));
        }
        if rank(field, &basis) != basis.len() {
            return usage("subspace basis is linearly dependent");
        }
        Ok(AffineSubspace { base, basis })
    }

    pub fn base(&self) -> &[Elem] {
        &self.base
    }

    pub fn basis(&self) -> &[Vec<Elem>] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.base.len()
    }

    /// `b + Σ u_i b_i`.
    pub fn point(&self, field: &Field, u: &[Elem]) -> Vec<Elem> {
        let mut x = self.base.clone();
        for (&ui, bi) in u.iter().zip(&self.basis) {
            if ui.is_zero() {
                continue;
            }
            for (xj, &bij) in x.iter_mut().zip(bi) {
                *xj = field.add(*xj, field.mul(ui, bij));
            }
        }
        x
    }

    /// Domain indices of all points, in the order of `u ∈ F_Q^t`.
    pub fn point_indices(&self, field: &Field) -> Vec<usize> {
        let big_q = field.order();
        let t = self.dim();
        let count = (big_q as usize).pow(t as u32);
        (0..count).map(|i| index_of(&self.point(field, &point_of(i, big_q, t)), big_q)).collect()
    }

    pub fn contains(&self, field: &Field, x: &[Elem]) -> bool {
        let diff: Vec<Elem> = x.iter().zip(&self.base).map(|(&a, &b)| field.sub(a, b)).collect();
        let mut rows = self.basis.clone();
        rows.push(diff);
        rank(field, &rows) == self.dim()
    }
}

/// `f|_V` as a function on `F_Q^t`.
pub fn restrict(f: &FuncTable, v: &AffineSubspace) -> Result<FuncTable> {
    if v.ambient_dim() != f.m {
        return usage(format!("subspace lives in F_Q^{}, table in F_Q^{}", v.ambient_dim(), f.m));
    }
    let values = v.point_indices(&f.field).into_iter().map(|i| f.values[i]).collect();
    Ok(FuncTable::new_unchecked(f.field.clone(), v.dim(), f.value_order, values))
}

/// A uniformly random `t`-dimensional affine subspace through `x`, with basis
/// drawn uniformly among linearly independent `t`-tuples.
pub fn random_subspace_through<R: Rng + ?Sized>(
    field: &Field,
    x: &[Elem],
    t: usize,
    rng: &mut R,
) -> Result<AffineSubspace> {
    let m = x.len();
    if t > m {
        return usage(format!("cannot fit a {t}-dimensional subspace in F_Q^{m}"));
    }
    let big_q = field.order();
    loop {
        let basis: Vec<Vec<Elem>> =
            (0..t).map(|_| (0..m).map(|_| Elem(rng.gen_range(0..big_q))).collect()).collect();
        if rank(field, &basis) == t {
            return Ok(AffineSubspace { base: x.to_vec(), basis });
        }
    }
}

/// `x ↦ M x + b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineMap {
    matrix: Vec<Vec<Elem>>,
    translation: Vec<Elem>,
    invertible: bool,
}

impl AffineMap {
    pub fn new(field: &Field, matrix: Vec<Vec<Elem>>, translation: Vec<Elem>) -> Result<Self> {
        let m = translation.len();
        if matrix.len() != m || matrix.iter().any(|r| r.len() != m) {
            return usage(format!("matrix shape does not match dimension {m}"));
        }
        let invertible = rank(field, &matrix) == m;
        Ok(AffineMap { matrix, translation, invertible })
    }

    pub fn identity(m: usize) -> Self {
        let matrix = (0..m)
            .map(|i| (0..m).map(|j| if i == j { Elem::ONE } else { Elem::ZERO }).collect())
            .collect();
        AffineMap { matrix, translation: vec![Elem::ZERO; m], invertible: true }
    }

    pub fn matrix(&self) -> &[Vec<Elem>] {
        &self.matrix
    }

    pub fn translation(&self) -> &[Elem] {
        &self.translation
    }

    pub fn is_invertible(&self) -> bool {
        self.invertible
    }

    pub fn dim(&self) -> usize {
        self.translation.len()
    }

    pub fn apply(&self, field: &Field, x: &[Elem]) -> Vec<Elem> {
        self.matrix
            .iter()
            .zip(&self.translation)
            .map(|(row, &b)| {
                row.iter().zip(x).fold(b, |acc, (&mij, &xj)| field.add(acc, field.mul(mij, xj)))
            })
            .collect()
    }

    fn apply_linear(&self, field: &Field, x: &[Elem]) -> Vec<Elem> {
        self.matrix
            .iter()
            .map(|row| row.iter().zip(x).fold(Elem::ZERO, |acc, (&mij, &xj)| field.add(acc, field.mul(mij, xj))))
            .collect()
    }

    /// `A(V) = {A(b) + Σ u_i M b_i}`, keeping the ordered basis.
    pub fn image(&self, field: &Field, v: &AffineSubspace) -> Result<AffineSubspace> {
        if !self.invertible {
            return usage("image of a subspace under a singular map");
        }
        let base = self.apply(field, &v.base);
        let basis = v.basis.iter().map(|b| self.apply_linear(field, b)).collect();
        Ok(AffineSubspace { base, basis })
    }

    /// A uniformly random invertible affine map.
    pub fn random_invertible<R: Rng + ?Sized>(field: &Field, m: usize, rng: &mut R) -> Self {
        let big_q = field.order();
        loop {
            let matrix: Vec<Vec<Elem>> =
                (0..m).map(|_| (0..m).map(|_| Elem(rng.gen_range(0..big_q))).collect()).collect();
            if rank(field, &matrix) == m {
                let translation = (0..m).map(|_| Elem(rng.gen_range(0..big_q))).collect();
                return AffineMap { matrix, translation, invertible: true };
            }
        }
    }
}

/// `f ∘ A`.
pub fn compose_affine(f: &FuncTable, a: &AffineMap) -> Result<FuncTable> {
    if a.dim() != f.m {
        return usage(format!("map on F_Q^{} composed with a table on F_Q^{}", a.dim(), f.m));
    }
    let big_q = f.field.order();
    let values = (0..f.len())
        .map(|i| f.values[index_of(&a.apply(&f.field, &point_of(i, big_q, f.m)), big_q)])
        .collect();
    Ok(FuncTable::new_unchecked(f.field.clone(), f.m, f.value_order, values))
}

/// Every `t`-dimensional linear subspace of `F_Q^m`, as its reduced row
/// echelon basis.
pub fn linear_subspaces(field: &Field, m: usize, t: usize) -> Result<Vec<Vec<Vec<Elem>>>> {
    if t > m {
        return usage(format!("no {t}-dimensional subspaces of F_Q^{m}"));
    }
    let big_q = field.order();
    let mut out = Vec::new();
    for pivots in combinations(m, t) {
        // free slots: (row, col) with col > pivot of row and col not a pivot
        let free: Vec<(usize, usize)> = (0..t)
            .flat_map(|r| {
                let pivots = &pivots;
                ((pivots[r] + 1)..m).filter(move |c| !pivots.contains(c)).map(move |c| (r, c))
            })
            .collect();
        let count = (big_q as u64)
            .checked_pow(free.len() as u32)
            .filter(|&c| c + out.len() as u64 <= MAX_TABLE)
            .ok_or_else(|| Error::Guard("too many subspaces to enumerate".into()))?;
        for code in 0..count {
            let mut rows = vec![vec![Elem::ZERO; m]; t];
            for (r, &c) in pivots.iter().enumerate() {
                rows[r][c] = Elem::ONE;
            }
            let mut rest = code;
            for &(r, c) in free.iter().rev() {
                rows[r][c] = Elem((rest % big_q as u64) as u32);
                rest /= big_q as u64;
            }
            out.push(rows);
        }
    }
    Ok(out)
}

/// Every `t`-dimensional affine subspace of `F_Q^m`, each listed once: the
/// basis is in reduced row echelon form and the base point vanishes on the
/// pivot columns.
pub fn affine_subspaces(field: &Field, m: usize, t: usize) -> Result<Vec<AffineSubspace>> {
    let big_q = field.order();
    let mut out = Vec::new();
    for basis in linear_subspaces(field, m, t)? {
        let pivots: Vec<usize> =
            basis.iter().map(|r| r.iter().position(|e| !e.is_zero()).unwrap()).collect();
        let free: Vec<usize> = (0..m).filter(|c| !pivots.contains(c)).collect();
        let count = (big_q as usize).pow(free.len() as u32);
        if (out.len() + count) as u64 > MAX_TABLE {
            return Err(Error::Guard("too many subspaces to enumerate".into()));
        }
        for code in 0..count {
            let mut base = vec![Elem::ZERO; m];
            for (&c, e) in free.iter().zip(point_of(code, big_q, free.len())) {
                base[c] = e;
            }
            out.push(AffineSubspace { base, basis: basis.clone() });
        }
    }
    Ok(out)
}

fn combinations(m: usize, t: usize) -> Vec<Vec<usize>> {
    if t == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..t).collect();
    loop {
        out.push(idx.clone());
        let Some(i) = (0..t).rev().find(|&i| idx[i] < m - t + i) else {
            return out;
        };
        idx[i] += 1;
        for j in i + 1..t {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Degree maps as JSON objects keyed by comma-separated degree vectors.
pub fn coefficients_to_json(field: &Field, coeffs: &BTreeMap<Degree, Elem>) -> Value {
    let map: serde_json::Map<String, Value> = coeffs
        .iter()
        .map(|(d, &c)| {
            let key = d.iter().map(u32::to_string).collect::<Vec<_>>().join(",");
            (key, Value::String(field.format(c)))
        })
        .collect();
    Value::Object(map)
}

pub fn coefficients_from_json(field: &Field, v: &Value) -> Result<BTreeMap<Degree, Elem>> {
    let obj = v.as_object().ok_or_else(|| Error::Usage("degree map must be a JSON object".into()))?;
    obj.iter()
        .map(|(k, val)| {
            let d = k
                .split(',')
                .map(|x| x.trim().parse::<u32>())
                .collect::<std::result::Result<Degree, _>>()
                .map_err(|_| Error::Usage(format!("bad degree key `{k}`")))?;
            let s = val.as_str().ok_or_else(|| Error::Usage(format!("coefficient of `{k}` is not a string")))?;
            Ok((d, field.parse(s)?))
        })
        .collect()
}
