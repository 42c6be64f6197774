//! Truncated multivariate power series with big-integer coefficients.
//!
//! A series lives on a box `[0, bound]` (inclusive in every coordinate) and
//! never reads or writes outside it. Products `prod (1 - t^v)^e` are expanded
//! on a dense grid; everything else works on the sparse form.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::semigroup::membership::{cell_cap_from_env, cell_count, increment};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseSeries {
    bound: Vec<u64>,
    coeffs: BTreeMap<Vec<u64>, BigInt>,
}

fn inside(m: &[u64], bound: &[u64]) -> bool {
    m.len() == bound.len() && m.iter().zip(bound).all(|(x, b)| x <= b)
}

impl SparseSeries {
    pub fn zero(bound: &[u64]) -> Self {
        SparseSeries { bound: bound.to_vec(), coeffs: BTreeMap::new() }
    }

    pub fn one(bound: &[u64]) -> Self {
        Self::monomial(bound, &vec![0; bound.len()], BigInt::one())
    }

    /// `c * t^m`, or zero when `m` lies outside the box.
    pub fn monomial(bound: &[u64], m: &[u64], c: BigInt) -> Self {
        let mut s = Self::zero(bound);
        s.add_term(m, c);
        s
    }

    /// Sums the given terms, dropping those outside the box.
    pub fn from_terms<I: IntoIterator<Item = (Vec<u64>, BigInt)>>(bound: &[u64], terms: I) -> Self {
        let mut s = Self::zero(bound);
        for (m, c) in terms {
            s.add_term(&m, c);
        }
        s
    }

    fn add_term(&mut self, m: &[u64], c: BigInt) {
        if c.is_zero() || !inside(m, &self.bound) {
            return;
        }
        let slot = self.coeffs.entry(m.to_vec()).or_default();
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(m);
        }
    }

    pub fn bound(&self) -> &[u64] {
        &self.bound
    }

    pub fn arity(&self) -> usize {
        self.bound.len()
    }

    pub fn coeff(&self, m: &[u64]) -> BigInt {
        self.coeffs.get(m).cloned().unwrap_or_default()
    }

    /// Nonzero terms in lexicographic order of exponents.
    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u64>, &BigInt)> {
        self.coeffs.iter()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    fn check_same_box(&self, other: &SparseSeries) -> Result<()> {
        if self.arity() != other.arity() {
            return Err(Error::ArityMismatch { expected: self.arity(), found: other.arity() });
        }
        if self.bound != other.bound {
            return Err(Error::BoxMismatch { left: self.bound.clone(), right: other.bound.clone() });
        }
        Ok(())
    }

    pub fn add(&self, other: &SparseSeries) -> Result<SparseSeries> {
        self.check_same_box(other)?;
        let mut out = self.clone();
        for (m, c) in other.terms() {
            out.add_term(m, c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &SparseSeries) -> Result<SparseSeries> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> SparseSeries {
        self.scale(&BigInt::from(-1))
    }

    pub fn scale(&self, k: &BigInt) -> SparseSeries {
        SparseSeries::from_terms(&self.bound, self.terms().map(|(m, c)| (m.clone(), c * k)))
    }

    /// Truncated product.
    pub fn mul(&self, other: &SparseSeries) -> Result<SparseSeries> {
        self.check_same_box(other)?;
        let mut out = SparseSeries::zero(&self.bound);
        for (a, ca) in self.terms() {
            for (b, cb) in other.terms() {
                let m: Vec<u64> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                out.add_term(&m, ca * cb);
            }
        }
        Ok(out)
    }

    /// Product with `(1 - t^v)`.
    pub fn mul_one_minus(&self, v: &[u64]) -> Result<SparseSeries> {
        if v.len() != self.arity() {
            return Err(Error::ArityMismatch { expected: self.arity(), found: v.len() });
        }
        let mut out = self.clone();
        for (m, c) in self.terms() {
            let shifted: Vec<u64> = m.iter().zip(v).map(|(x, y)| x + y).collect();
            out.add_term(&shifted, -c);
        }
        Ok(out)
    }

    /// Same series on a smaller box.
    pub fn restrict(&self, bound: &[u64]) -> Result<SparseSeries> {
        if bound.len() != self.arity() {
            return Err(Error::ArityMismatch { expected: self.arity(), found: bound.len() });
        }
        if !inside(bound, &self.bound) {
            return Err(Error::BoxMismatch { left: self.bound.clone(), right: bound.to_vec() });
        }
        Ok(SparseSeries::from_terms(bound, self.terms().map(|(m, c)| (m.clone(), c.clone()))))
    }

    /// First exponent (lexicographic) where the coefficients differ.
    pub fn first_difference(&self, other: &SparseSeries) -> Result<Option<(Vec<u64>, BigInt, BigInt)>> {
        self.check_same_box(other)?;
        let diff = self.sub(other)?;
        let first = diff.terms().next().map(|(m, _)| (m.clone(), self.coeff(m), other.coeff(m)));
        Ok(first)
    }

    /// Number of exponents where the coefficients differ.
    pub fn count_differences(&self, other: &SparseSeries) -> Result<usize> {
        Ok(self.sub(other)?.len())
    }

    /// True when some term lies within `margin` of the outer faces of the box.
    pub fn touches_margin(&self, margin: u64) -> bool {
        self.terms().any(|(m, _)| m.iter().zip(&self.bound).any(|(x, b)| x + margin > *b))
    }

    /// Sets `t_j = 1` for `j` in `coords`: each coefficient of the result sums
    /// the coefficients over the collapsed coordinates. The result lives on
    /// `target`, a box in the remaining coordinates, which the source must
    /// cover.
    pub fn specialize_at_one(&self, coords: &[usize], target: &[u64]) -> Result<SparseSeries> {
        let keep: Vec<usize> = (0..self.arity()).filter(|i| !coords.contains(i)).collect();
        if target.len() != keep.len() {
            return Err(Error::ArityMismatch { expected: keep.len(), found: target.len() });
        }
        if keep.iter().zip(target).any(|(&i, &t)| self.bound[i] < t) {
            return Err(Error::BoxMismatch { left: self.bound.clone(), right: target.to_vec() });
        }
        Ok(SparseSeries::from_terms(
            target,
            self.terms().map(|(m, c)| (keep.iter().map(|&i| m[i]).collect(), c.clone())),
        ))
    }
}

/// Outcome of a specialization checked against a larger truncation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Specialization {
    pub series: SparseSeries,
    pub stable: bool,
}

/// Specializes `source` and `probe` (the same series truncated on a larger
/// box) and reports whether they agree on `target`.
pub fn specialize_with_probe(
    source: &SparseSeries,
    probe: &SparseSeries,
    coords: &[usize],
    target: &[u64],
) -> Result<Specialization> {
    let series = source.specialize_at_one(coords, target)?;
    let stable = probe.specialize_at_one(coords, target)? == series;
    Ok(Specialization { series, stable })
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Factor {
    pub v: Vec<u64>,
    pub e: i64,
}

/// `prod (1 - t^v)^e`, kept normalized: one factor per vector, no zero
/// exponents, sorted by vector.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FactoredSeries {
    arity: usize,
    factors: Vec<Factor>,
}

impl FactoredSeries {
    pub fn new<I: IntoIterator<Item = Factor>>(arity: usize, factors: I) -> Result<Self> {
        let mut merged: BTreeMap<Vec<u64>, i64> = BTreeMap::new();
        for f in factors {
            if f.v.len() != arity {
                return Err(Error::ArityMismatch { expected: arity, found: f.v.len() });
            }
            *merged.entry(f.v).or_default() += f.e;
        }
        let factors = merged.into_iter().filter(|&(_, e)| e != 0).map(|(v, e)| Factor { v, e }).collect();
        Ok(FactoredSeries { arity, factors })
    }

    pub fn one(arity: usize) -> Self {
        FactoredSeries { arity, factors: Vec::new() }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn mul(&self, other: &FactoredSeries) -> Result<FactoredSeries> {
        FactoredSeries::new(self.arity, self.factors.iter().chain(&other.factors).cloned())
    }

    pub fn inverse(&self) -> FactoredSeries {
        let factors = self.factors.iter().map(|f| Factor { v: f.v.clone(), e: -f.e }).collect();
        FactoredSeries { arity: self.arity, factors }
    }

    /// Sum of the exponents.
    pub fn exponent_sum(&self) -> i64 {
        self.factors.iter().map(|f| f.e).sum()
    }

    pub fn expand(&self, bound: &[u64]) -> Result<SparseSeries> {
        Ok(self.expand_dense(bound)?.to_sparse())
    }

    pub(crate) fn expand_dense(&self, bound: &[u64]) -> Result<Dense> {
        if bound.len() != self.arity {
            return Err(Error::ArityMismatch { expected: self.arity, found: bound.len() });
        }
        let mut grid = Dense::one(bound)?;
        for f in &self.factors {
            if f.v.iter().all(|&x| x == 0) {
                if f.e < 0 {
                    return Err(Error::ZeroVectorFactor);
                }
                return Dense::zero(bound);
            }
            // Only the constant term of the factor reaches the box.
            if !inside(&f.v, bound) {
                continue;
            }
            if f.e > 0 {
                grid.mul_one_minus(&f.v, f.e as u64);
            } else {
                grid.div_one_minus(&f.v, f.e.unsigned_abs());
            }
        }
        Ok(grid)
    }

    /// Equality decided by expanding both sides on `bound`.
    pub fn equal_on(&self, other: &FactoredSeries, bound: &[u64]) -> Result<bool> {
        Ok(self.expand(bound)? == other.expand(bound)?)
    }
}

/// Dense coefficient grid over a box, row-major with the last coordinate
/// fastest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Dense {
    bound: Vec<u64>,
    strides: Vec<usize>,
    data: Vec<BigInt>,
}

impl Dense {
    pub(crate) fn zero(bound: &[u64]) -> Result<Self> {
        let cells = cell_count(bound);
        let cap = cell_cap_from_env();
        if cells > cap as u128 {
            return Err(Error::BoxTooLarge { cells, cap });
        }
        let r = bound.len();
        let mut strides = vec![1usize; r];
        for i in (0..r.saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * (bound[i + 1] as usize + 1);
        }
        Ok(Dense { bound: bound.to_vec(), strides, data: vec![BigInt::zero(); cells as usize] })
    }

    pub(crate) fn one(bound: &[u64]) -> Result<Self> {
        let mut d = Self::zero(bound)?;
        d.data[0] = BigInt::one();
        Ok(d)
    }

    fn offset(&self, v: &[u64]) -> usize {
        v.iter().zip(&self.strides).map(|(&x, &s)| x as usize * s).sum()
    }

    fn coord(&self, idx: usize, axis: usize) -> u64 {
        (idx / self.strides[axis]) as u64 % (self.bound[axis] + 1)
    }

    fn dominates(&self, idx: usize, v: &[u64]) -> bool {
        v.iter().enumerate().all(|(a, &x)| self.coord(idx, a) >= x)
    }

    /// Multiplies by `(1 - t^v)^times`; `v` must lie in the box.
    fn mul_one_minus(&mut self, v: &[u64], times: u64) {
        let off = self.offset(v);
        for _ in 0..times {
            // Descending, so every source cell still holds its old value.
            for idx in (off..self.data.len()).rev() {
                if !self.dominates(idx, v) {
                    continue;
                }
                let (lo, hi) = self.data.split_at_mut(idx);
                let src = &lo[idx - off];
                if !src.is_zero() {
                    hi[0] -= src;
                }
            }
        }
    }

    /// Multiplies by `(1 - t^v)^{-times}`; `v` must lie in the box.
    fn div_one_minus(&mut self, v: &[u64], times: u64) {
        let off = self.offset(v);
        for _ in 0..times {
            // Ascending, so the geometric series accumulates.
            for idx in off..self.data.len() {
                if !self.dominates(idx, v) {
                    continue;
                }
                let (lo, hi) = self.data.split_at_mut(idx);
                let src = &lo[idx - off];
                if !src.is_zero() {
                    hi[0] += src;
                }
            }
        }
    }

    /// Cumulative sums along every axis: entry `m` becomes the sum over `[0, m]`.
    fn prefix_sums(&mut self) {
        for axis in 0..self.bound.len() {
            let stride = self.strides[axis];
            for idx in stride..self.data.len() {
                if self.coord(idx, axis) == 0 {
                    continue;
                }
                let (lo, hi) = self.data.split_at_mut(idx);
                hi[0] += &lo[idx - stride];
            }
        }
    }

    fn get(&self, m: &[u64]) -> &BigInt {
        &self.data[self.offset(m)]
    }

    pub(crate) fn to_sparse(&self) -> SparseSeries {
        let mut coeffs = BTreeMap::new();
        let mut coord = vec![0u64; self.bound.len()];
        for (idx, c) in self.data.iter().enumerate() {
            if idx > 0 {
                increment(&mut coord, &self.bound);
            }
            if !c.is_zero() {
                coeffs.insert(coord.clone(), c.clone());
            }
        }
        SparseSeries { bound: self.bound.clone(), coeffs }
    }
}

/// `P'_V = (t_1 ... t_r - 1) * P_V` on `bound`.
pub fn p_prime(pv: &FactoredSeries, bound: &[u64]) -> Result<SparseSeries> {
    let p = pv.expand(bound)?;
    let diag = vec![1u64; bound.len()];
    Ok(p.mul_one_minus(&diag)?.neg())
}

/// Box on which truncating `pv` is exact for every specialization needed
/// on `bound`: a term with exponent `m` has `m_i <= R_ik * m_k` for all
/// `i, k`, where `R_ik` is the largest ratio `v_i / v_k` over the factors.
fn source_box(pv: &FactoredSeries, bound: &[u64]) -> Result<Vec<u64>> {
    let r = bound.len();
    let mut out = bound.to_vec();
    for i in 0..r {
        for k in (0..r).filter(|&k| k != i) {
            let mut need = 0u64;
            for f in pv.factors() {
                if f.v[k] == 0 {
                    if f.v[i] > 0 {
                        return Err(Error::Unstable { coords: vec![i] });
                    }
                    continue;
                }
                need = need.max(Integer::div_ceil(&(f.v[i] * (bound[k] + 1)), &f.v[k]));
            }
            out[i] = out[i].max(need + 1);
        }
    }
    Ok(out)
}

/// The function `d(m)` on a box, with its extension to all of `Z^r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DimensionTable {
    grid: Dense,
}

impl DimensionTable {
    pub fn bound(&self) -> &[u64] {
        &self.grid.bound
    }

    /// `d(m)` for any integer vector: zero when every coordinate is
    /// negative, otherwise the value at the componentwise max with 0.
    pub fn query(&self, m: &[i64]) -> Result<BigInt> {
        let bound = self.bound();
        if m.len() != bound.len() {
            return Err(Error::ArityMismatch { expected: bound.len(), found: m.len() });
        }
        if m.iter().all(|&x| x < 0) {
            return Ok(BigInt::zero());
        }
        let clamped: Vec<u64> = m.iter().map(|&x| x.max(0) as u64).collect();
        if !inside(&clamped, bound) {
            return Err(Error::MarginExceeded { query: m.to_vec(), bound: bound.to_vec() });
        }
        Ok(self.grid.get(&clamped).clone())
    }

    /// `h(m) = dim R / J(m) = sum_{k >= 1} d(m - k(1,...,1))`.
    pub fn hilbert(&self, m: &[i64]) -> Result<BigInt> {
        let bound = self.bound();
        if m.len() != bound.len() {
            return Err(Error::ArityMismatch { expected: bound.len(), found: m.len() });
        }
        if m.iter().zip(bound).any(|(&x, &b)| x > 0 && x as u64 > b) {
            return Err(Error::MarginExceeded { query: m.to_vec(), bound: bound.to_vec() });
        }
        let mut total = BigInt::zero();
        let mut k = 1i64;
        loop {
            let shifted: Vec<i64> = m.iter().map(|&x| x - k).collect();
            if shifted.iter().all(|&x| x < 0) {
                return Ok(total);
            }
            total += self.query(&shifted)?;
            k += 1;
        }
    }

    pub fn to_sparse(&self) -> SparseSeries {
        self.grid.to_sparse()
    }
}

/// Recovers `d(m)` on `bound` from the Poincaré series.
///
/// `P'_V = (t_1...t_r - 1) P_V` is specialized at `t_J = 1` for every proper
/// subset `J`; with `t_I = 1` the prefactor vanishes and that term is taken as
/// zero. Their signed sum is `tilde-L_V * prod (t_i - 1)`, from which the table
/// follows by prefix sums. Specializations are computed from an exact
/// truncation and re-checked on a box twice as large.
pub fn recover_dims(pv: &FactoredSeries, bound: &[u64]) -> Result<DimensionTable> {
    let r = pv.arity();
    if bound.len() != r {
        return Err(Error::ArityMismatch { expected: r, found: bound.len() });
    }
    let source_bound = source_box(pv, bound)?;
    let probe_bound: Vec<u64> = source_bound.iter().map(|&b| 2 * b + 1).collect();
    let source = pv.expand(&source_bound)?;
    let probe = pv.expand(&probe_bound)?;

    let mut f = Dense::zero(bound)?;
    for mask in 0u32..(1 << r) - 1 {
        let coords: Vec<usize> = (0..r).filter(|i| mask >> i & 1 == 1).collect();
        let keep: Vec<usize> = (0..r).filter(|i| mask >> i & 1 == 0).collect();
        let target: Vec<u64> = keep.iter().map(|&i| bound[i]).collect();
        let spec = specialize_with_probe(&source, &probe, &coords, &target)?;
        if !spec.stable {
            return Err(Error::Unstable { coords });
        }
        // (t_keep - 1) * P_V|_{t_J = 1}
        let term = spec.series.mul_one_minus(&vec![1; keep.len()])?.neg();
        let sign = if coords.len().is_multiple_of(2) { BigInt::one() } else { -BigInt::one() };
        for (m, c) in term.terms() {
            let mut full = vec![0u64; r];
            for (&i, &x) in keep.iter().zip(m) {
                full[i] = x;
            }
            let idx = f.offset(&full);
            f.data[idx] += c * &sign;
        }
    }

    f.prefix_sums();
    if r % 2 == 1 {
        for x in &mut f.data {
            *x = -std::mem::take(x);
        }
    }
    if let Some(neg) = f.data.iter().position(|x| x.is_negative()) {
        let m = f.to_sparse().terms().find(|(_, c)| c.is_negative()).map(|(m, _)| m.clone());
        return Err(Error::Internal(format!("recovered a negative dimension at {m:?} (cell {neg})")));
    }
    Ok(DimensionTable { grid: f })
}

/// `tilde-L_V * prod (t_i - 1)` computed back from a dimension table.
pub fn dims_times_t_minus_one(table: &DimensionTable) -> Result<SparseSeries> {
    let mut s = table.to_sparse();
    let r = s.arity();
    for i in 0..r {
        let mut e = vec![0u64; r];
        e[i] = 1;
        s = s.mul_one_minus(&e)?.neg();
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(v: &[u64], e: i64) -> Factor {
        Factor { v: v.to_vec(), e }
    }

    fn ints(s: &SparseSeries) -> Vec<(Vec<u64>, i64)> {
        s.terms().map(|(m, c)| (m.clone(), i64::try_from(c).unwrap())).collect()
    }

    #[test]
    fn geometric() {
        let p = FactoredSeries::new(1, [f(&[1], -1)]).unwrap().expand(&[4]).unwrap();
        assert_eq!(ints(&p), (0..=4).map(|k| (vec![k], 1)).collect::<Vec<_>>());
    }

    #[test]
    fn cancellation() {
        let p = FactoredSeries::new(2, [f(&[1, 1], 1), f(&[1, 1], -1)]).unwrap();
        assert!(p.factors().is_empty());
        let q = FactoredSeries::new(2, [f(&[1, 1], 1)]).unwrap().mul(&FactoredSeries::new(2, [f(&[1, 1], -1)]).unwrap());
        assert_eq!(q.unwrap().expand(&[3, 3]).unwrap(), SparseSeries::one(&[3, 3]));
    }

    #[test]
    fn zero_vector() {
        let p = FactoredSeries::new(1, [f(&[0], -1)]).unwrap();
        assert_eq!(p.expand(&[3]), Err(Error::ZeroVectorFactor));
        let p = FactoredSeries::new(1, [f(&[0], 1)]).unwrap();
        assert!(p.expand(&[3]).unwrap().is_zero());
    }

    #[test]
    fn oversized_factor_is_one_on_box() {
        let p = FactoredSeries::new(2, [f(&[1, 9], -1), f(&[1, 1], 1)]).unwrap().expand(&[3, 3]).unwrap();
        assert_eq!(ints(&p), vec![(vec![0, 0], 1), (vec![1, 1], -1)]);
    }

    #[test]
    fn sparse_arithmetic() {
        let b = [6];
        let one_plus = SparseSeries::from_terms(&b, [(vec![0], 1.into()), (vec![1], 1.into())]);
        let one_minus = SparseSeries::from_terms(&b, [(vec![0], 1.into()), (vec![1], (-1).into())]);
        let prod = one_plus.mul(&one_minus).unwrap();
        assert_eq!(ints(&prod), vec![(vec![0], 1), (vec![2], -1)]);
        assert_eq!(SparseSeries::one(&b).mul(&one_plus).unwrap(), one_plus);
        assert!(matches!(one_plus.add(&SparseSeries::one(&[6, 6])), Err(Error::ArityMismatch { .. })));
        assert!(matches!(one_plus.add(&SparseSeries::one(&[5])), Err(Error::BoxMismatch { .. })));
        assert_eq!(one_plus.sub(&one_plus).unwrap(), SparseSeries::zero(&b));
    }

    #[test]
    fn dense_matches_sparse_products() {
        let fs = FactoredSeries::new(2, [f(&[1, 2], -2), f(&[2, 1], -1), f(&[3, 3], 2)]).unwrap();
        let bound = [7, 7];
        let mut s = SparseSeries::one(&bound);
        for fac in fs.factors() {
            if fac.e > 0 {
                for _ in 0..fac.e {
                    s = s.mul_one_minus(&fac.v).unwrap();
                }
            } else {
                let geo = SparseSeries::from_terms(
                    &bound,
                    (0..8).map(|k| (fac.v.iter().map(|x| x * k).collect(), BigInt::one())),
                );
                for _ in 0..-fac.e {
                    s = s.mul(&geo).unwrap();
                }
            }
        }
        assert_eq!(fs.expand(&bound).unwrap(), s);
    }

    #[test]
    fn specialization() {
        let p = SparseSeries::from_terms(&[3, 3], [(vec![0, 1], 2.into()), (vec![2, 1], 3.into()), (vec![1, 0], 1.into())]);
        let s = p.specialize_at_one(&[0], &[3]).unwrap();
        assert_eq!(ints(&s), vec![(vec![0], 1), (vec![1], 5)]);
        let c = SparseSeries::one(&[2, 2]);
        assert_eq!(c.specialize_at_one(&[1], &[2]).unwrap(), SparseSeries::one(&[2]));
        let probe = SparseSeries::from_terms(&[5, 5], p.terms().map(|(m, c)| (m.clone(), c.clone())));
        assert!(specialize_with_probe(&p, &probe, &[0], &[3]).unwrap().stable);
        let bigger = probe.add(&SparseSeries::monomial(&[5, 5], &[5, 0], 1.into())).unwrap();
        assert!(!specialize_with_probe(&p, &bigger, &[0], &[3]).unwrap().stable);
    }

    #[test]
    fn specialization_matches_factored_substitution() {
        // Setting t_1 = 1 in prod (1 - t^v)^e leaves prod (1 - t_2^{v_2})^e.
        let fs = FactoredSeries::new(2, [f(&[1, 3], -1), f(&[2, 5], -1), f(&[3, 8], 1)]).unwrap();
        let src = fs.expand(&[40, 12]).unwrap();
        let reduced = FactoredSeries::new(1, [f(&[3], -1), f(&[5], -1), f(&[8], 1)]).unwrap();
        assert_eq!(src.specialize_at_one(&[0], &[12]).unwrap(), reduced.expand(&[12]).unwrap());
    }

    #[test]
    fn dims_single_variable() {
        // (1 - t)^{-2}: d(m) = m + 1 and h(m) = m(m+1)/2.
        let pv = FactoredSeries::new(1, [f(&[1], -2)]).unwrap();
        let t = recover_dims(&pv, &[10]).unwrap();
        for m in 0..=10i64 {
            assert_eq!(t.query(&[m]).unwrap(), BigInt::from(m + 1));
        }
        assert_eq!(t.query(&[-1]).unwrap(), BigInt::zero());
        assert_eq!(t.hilbert(&[0]).unwrap(), BigInt::zero());
        assert_eq!(t.hilbert(&[1]).unwrap(), BigInt::one());
        assert_eq!(t.hilbert(&[4]).unwrap(), BigInt::from(10));
        assert!(matches!(t.query(&[11]), Err(Error::MarginExceeded { .. })));
    }

    #[test]
    fn dims_round_trip_two_variables() {
        // Two free blow-ups, both divisors marked.
        let pv = FactoredSeries::new(2, [f(&[1, 1], -1), f(&[1, 2], -1)]).unwrap();
        let bound = [8, 10];
        let t = recover_dims(&pv, &bound).unwrap();
        assert_eq!(t.query(&[0, 0]).unwrap(), BigInt::one());
        let back = dims_times_t_minus_one(&t).unwrap();
        let pp = p_prime(&pv, &bound).unwrap();
        for (m, c) in pp.terms().chain(back.terms()) {
            if m.iter().all(|&x| x >= 1) {
                assert_eq!(back.coeff(m), pp.coeff(m), "at {m:?} ({c})");
            }
        }
    }
}
