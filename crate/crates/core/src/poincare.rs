//! Poincaré series of a set of divisorial valuations and of its general
//! curve, the tower of divisorial approximations of that curve, and the
//! identities tying them together.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::Serialize;

use crate::dualgraph::classify;
use crate::error::{Error, Result};
use crate::resolution::{Center, ResolutionModel};
use crate::series::{Factor, FactoredSeries, SparseSeries};

/// A curve with one branch through a general point of each marked divisor,
/// in branch order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveMarking {
    model: ResolutionModel,
    branches: Vec<usize>,
}

impl CurveMarking {
    pub fn new(model: ResolutionModel, branches: &[usize]) -> Result<Self> {
        model.check_marked(branches)?;
        Ok(CurveMarking { model, branches: branches.to_vec() })
    }

    pub fn model(&self) -> &ResolutionModel {
        &self.model
    }

    pub fn branches(&self) -> &[usize] {
        &self.branches
    }

    pub fn r(&self) -> usize {
        self.branches.len()
    }

    /// Number of branches through each divisor (vertices without arrows are
    /// omitted).
    pub fn arrows(&self) -> BTreeMap<usize, usize> {
        let mut out = BTreeMap::new();
        for &v in &self.branches {
            *out.entry(v).or_default() += 1;
        }
        out
    }

    pub fn arrow_count(&self, v: usize) -> usize {
        self.branches.iter().filter(|&&b| b == v).count()
    }

    /// Dead ends of the graph with arrows counted as edges.
    pub fn dead_ends(&self) -> Vec<usize> {
        let g = classify(&self.model);
        self.model.vertices().filter(|&v| g.b(v) + self.arrow_count(v) <= 1).collect()
    }

    /// `B^i` for every branch.
    pub fn marked_bs(&self) -> Vec<Vec<u64>> {
        self.branches.iter().map(|&a| self.model.projected(a, &self.branches)).collect()
    }
}

/// A single vertex has no neighbors, which puts it outside the setting
/// where the exponent formulas were derived; such models are accepted but
/// flagged.
pub fn is_degenerate(model: &ResolutionModel) -> bool {
    model.len() == 1
}

/// `prod_alpha (1 - t^{v_alpha})^{b(alpha) - 2}` with `v_alpha` the value of
/// the curvette at `alpha` on the marked valuations.
pub fn poincare_series(model: &ResolutionModel, marked: &[usize]) -> Result<FactoredSeries> {
    model.check_marked(marked)?;
    let g = classify(model);
    FactoredSeries::new(
        marked.len(),
        model.vertices().map(|a| Factor { v: model.projected(a, marked), e: g.b(a) as i64 - 2 }),
    )
}

/// Poincaré polynomial (multivariable Alexander polynomial) of the general
/// curve: each branch adds one to the exponent at its divisor.
pub fn alexander_general_curve(marking: &CurveMarking) -> Result<FactoredSeries> {
    let model = marking.model();
    let g = classify(model);
    FactoredSeries::new(
        marking.r(),
        model.vertices().map(|a| Factor {
            v: model.projected(a, marking.branches()),
            e: g.b(a) as i64 + marking.arrow_count(a) as i64 - 2,
        }),
    )
}

/// Level `k` of the tower: `k` extra free blow-ups along every branch.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VkExtension {
    pub k: usize,
    /// The extended model with the chain tips as branches.
    pub marking: CurveMarking,
}

impl VkExtension {
    pub fn marked_bs(&self) -> Vec<Vec<u64>> {
        self.marking.marked_bs()
    }
}

/// Appends the new centers level by level (all branches at level 1, then
/// all at level 2, ...), so level `k` is a prefix of level `k + 1`.
pub fn vk_extend(marking: &CurveMarking, k: usize) -> Result<VkExtension> {
    let mut centers: Vec<Center> = marking.model().centers().to_vec();
    let mut tips = marking.branches().to_vec();
    for _ in 0..k {
        for tip in tips.iter_mut() {
            let id = centers.len() + 1;
            centers.push(Center::free(id, *tip));
            *tip = id;
        }
    }
    let model = ResolutionModel::new(&centers)?;
    Ok(VkExtension { k, marking: CurveMarking::new(model, &tips)? })
}

/// `P_V * prod_i (1 - t^{B^i})` expanded on `bound`, with the product
/// carried out on the expanded series.
pub fn numerator_on_box(marking: &CurveMarking, bound: &[u64]) -> Result<SparseSeries> {
    let mut s = poincare_series(marking.model(), marking.branches())?.expand(bound)?;
    for b in marking.marked_bs() {
        s = s.mul_one_minus(&b)?;
    }
    Ok(s)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Discrepancy {
    pub m: Vec<u64>,
    pub left: String,
    pub right: String,
    /// Tower level, for comparisons across levels.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
}

impl Discrepancy {
    fn new(m: Vec<u64>, left: BigInt, right: BigInt, k: Option<usize>) -> Self {
        Discrepancy { m, left: left.to_string(), right: right.to_string(), k }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityReport {
    pub equal: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_discrepancy: Option<Discrepancy>,
}

impl IdentityReport {
    fn compare(left: &SparseSeries, right: &SparseSeries, k: Option<usize>) -> Result<Self> {
        let first = left.first_difference(right)?.map(|(m, l, r)| Discrepancy::new(m, l, r, k));
        Ok(IdentityReport { equal: first.is_none(), first_discrepancy: first })
    }
}

/// Compares `P_V * prod (1 - t^{B^i})` with the Poincaré polynomial of the
/// general curve on `bound`.
pub fn check_curve_identity(marking: &CurveMarking, bound: &[u64]) -> Result<IdentityReport> {
    check_box(marking, bound)?;
    let left = numerator_on_box(marking, bound)?;
    let right = alexander_general_curve(marking)?.expand(bound)?;
    IdentityReport::compare(&left, &right, None)
}

/// Compares the numerators `P_{V^(k)} * prod (1 - t^{B^i_(k)})` for
/// `k = 0..=kmax` with the one at `k = 0`.
pub fn check_tower_numerator(marking: &CurveMarking, kmax: usize, bound: &[u64]) -> Result<IdentityReport> {
    check_box(marking, bound)?;
    let base = numerator_on_box(marking, bound)?;
    for k in 1..=kmax {
        let ext = vk_extend(marking, k)?;
        let s = numerator_on_box(&ext.marking, bound)?;
        let report = IdentityReport::compare(&s, &base, Some(k))?;
        if !report.equal {
            return Ok(report);
        }
    }
    Ok(IdentityReport { equal: true, first_discrepancy: None })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LimitProfile {
    /// `disagreements[k]`: coefficients on the box where `P_{V^(k)}` and
    /// the curve's polynomial differ.
    pub disagreements: Vec<usize>,
    /// First level with no disagreement.
    pub k0: Option<usize>,
}

pub fn limit_profile(marking: &CurveMarking, bound: &[u64], kmax: usize) -> Result<LimitProfile> {
    check_box(marking, bound)?;
    let pc = alexander_general_curve(marking)?.expand(bound)?;
    let mut disagreements = Vec::with_capacity(kmax + 1);
    let mut k0 = None;
    for k in 0..=kmax {
        let ext = vk_extend(marking, k)?;
        let pv = poincare_series(ext.marking.model(), ext.marking.branches())?.expand(bound)?;
        let n = pv.count_differences(&pc)?;
        disagreements.push(n);
        if n == 0 && k0.is_none() {
            k0 = Some(k);
        }
    }
    Ok(LimitProfile { disagreements, k0 })
}

fn check_box(marking: &CurveMarking, bound: &[u64]) -> Result<()> {
    if bound.len() != marking.r() {
        return Err(Error::ArityMismatch { expected: marking.r(), found: bound.len() });
    }
    Ok(())
}
