//! Value semigroups of finite sets of divisorial valuations.
//!
//! The semigroup is the projection of the free semigroup on the rows of the
//! value matrix onto the marked coordinates, so membership is a bounded
//! reachability problem over those projected rows.

pub mod contact;
pub mod curve;
pub mod membership;
pub mod monomial;

use std::sync::{Arc, Mutex};

use serde::Serialize;

use crate::dualgraph::classify;
use crate::error::{Error, Result};
use crate::resolution::ResolutionModel;
pub use membership::{cell_cap_from_env, ReachTable, DEFAULT_CELL_CAP};

/// Marked valuations over a model, with a cache of reachability tables.
///
/// Branch indices (`i` in `B^i`, coordinates of value vectors) are 0-based
/// positions in `marked`; vertices are 1-based.
#[derive(Debug)]
pub struct SemigroupHandle {
    model: ResolutionModel,
    marked: Vec<usize>,
    proj: Vec<Vec<u64>>,
    cap: u64,
    cache: Mutex<Vec<Arc<ReachTable>>>,
}

impl Clone for SemigroupHandle {
    fn clone(&self) -> Self {
        let cache = self.cache.lock().expect("cache poisoned").clone();
        SemigroupHandle {
            model: self.model.clone(),
            marked: self.marked.clone(),
            proj: self.proj.clone(),
            cap: self.cap,
            cache: Mutex::new(cache),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    pub a: Vec<u64>,
    pub n: Vec<u64>,
}

/// Minimal generating sequence descriptor: one curvette per listed vertex,
/// plus (for curves with several branches) the branch equations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GeneratingSequence {
    pub curvettes: Vec<usize>,
    /// 0-based branch indices whose equations join the sequence.
    pub branch_equations: Vec<usize>,
    /// Set when the descriptor is known not to generate the maximal ideal.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub caveat: Option<String>,
}

impl SemigroupHandle {
    /// Marked vertices must be distinct; minimality is not required here.
    pub fn new(model: ResolutionModel, marked: &[usize]) -> Result<Self> {
        Self::with_cap(model, marked, cell_cap_from_env())
    }

    pub fn with_cap(model: ResolutionModel, marked: &[usize], cap: u64) -> Result<Self> {
        model.check_marked(marked)?;
        let proj = model.vertices().map(|a| model.projected(a, marked)).collect();
        Ok(SemigroupHandle { model, marked: marked.to_vec(), proj, cap, cache: Mutex::new(Vec::new()) })
    }

    pub fn model(&self) -> &ResolutionModel {
        &self.model
    }

    pub fn marked(&self) -> &[usize] {
        &self.marked
    }

    pub fn r(&self) -> usize {
        self.marked.len()
    }

    pub fn cap(&self) -> u64 {
        self.cap
    }

    /// Projection of every row of `A`; `proj_b()[a-1]` is the value of the
    /// curvette at vertex `a`.
    pub fn proj_b(&self) -> &[Vec<u64>] {
        &self.proj
    }

    /// `B^i`, the value of the curvette at the `i`-th marked divisor.
    pub fn marked_b(&self, i: usize) -> &[u64] {
        &self.proj[self.marked[i] - 1]
    }

    pub fn marked_bs(&self) -> Vec<Vec<u64>> {
        (0..self.r()).map(|i| self.marked_b(i).to_vec()).collect()
    }

    fn check_arity(&self, m: &[u64]) -> Result<()> {
        if m.len() != self.r() {
            return Err(Error::ArityMismatch { expected: self.r(), found: m.len() });
        }
        Ok(())
    }

    /// A table covering `[0, bound]`, reusing any cached table that already
    /// covers it.
    pub fn table_for(&self, bound: &[u64]) -> Result<Arc<ReachTable>> {
        self.check_arity(bound)?;
        let mut cache = self.cache.lock().expect("cache poisoned");
        if let Some(t) = cache.iter().find(|t| t.covers(bound)) {
            return Ok(Arc::clone(t));
        }
        let t = Arc::new(ReachTable::build(&self.proj, bound, self.cap)?);
        cache.push(Arc::clone(&t));
        Ok(t)
    }

    pub fn is_member(&self, m: &[u64]) -> Result<bool> {
        Ok(self.table_for(m)?.contains(m))
    }

    /// Coefficients `lambda` (one per vertex) with `sum lambda_a * proj_b[a] = m`,
    /// or `None` when `m` is not a value.
    pub fn member(&self, m: &[u64]) -> Result<Option<Vec<u64>>> {
        let t = self.table_for(m)?;
        Ok(t.witness(&self.proj, m))
    }

    /// Indecomposable members of the box: nonzero, and not the sum of two
    /// nonzero members.
    pub fn indecomposables_bruteforce(&self, bound: &[u64]) -> Result<Vec<Vec<u64>>> {
        let t = self.table_for(bound)?;
        let t = if t.bound() == bound { t } else { Arc::new(ReachTable::build(&self.proj, bound, self.cap)?) };
        let mut out = Vec::new();
        for m in t.members() {
            if m.iter().all(|&x| x == 0) {
                continue;
            }
            // A decomposition m = n + k exists iff some generator g <= k has
            // m - g a nonzero member.
            let decomposable = self.proj.iter().any(|g| g.as_slice() != m.as_slice() && t.contains_difference(&m, g));
            if !decomposable {
                out.push(m);
            }
        }
        Ok(out)
    }

    /// `a_i = max{k : m - k B^i in S}` for every `i`, and the remainder `n`.
    pub fn decompose(&self, m: &[u64]) -> Result<Decomposition> {
        let t = self.table_for(m)?;
        if !t.contains(m) {
            return Err(Error::NotInSemigroup(m.to_vec()));
        }
        let r = self.r();
        let mut a = vec![0u64; r];
        for (i, ai) in a.iter_mut().enumerate() {
            let b = self.marked_b(i);
            let start = m[i] / b[i];
            *ai = (0..=start)
                .rev()
                .find(|&k| {
                    let shifted: Vec<u64> = b.iter().map(|x| x * k).collect();
                    t.contains_difference(m, &shifted)
                })
                .expect("k = 0 always works");
        }
        let mut n: Vec<i128> = m.iter().map(|&x| x as i128).collect();
        for (i, &ai) in a.iter().enumerate() {
            for (x, &b) in n.iter_mut().zip(self.marked_b(i)) {
                *x -= ai as i128 * b as i128;
            }
        }
        if n.iter().any(|&x| x < 0) {
            return Err(Error::Internal(format!("remainder of {m:?} is negative: {n:?}")));
        }
        let n: Vec<u64> = n.into_iter().map(|x| x as u64).collect();
        if !t.contains(&n) {
            return Err(Error::Internal(format!("remainder {n:?} of {m:?} is not a value")));
        }
        for i in 0..r {
            if t.contains_difference(&n, self.marked_b(i)) {
                return Err(Error::Internal(format!("remainder {n:?} still absorbs B^{}", i + 1)));
            }
        }
        Ok(Decomposition { a, n })
    }

    /// `d_i(m)` for a member `m`: one more than the multiplicity of `B^i` in
    /// its decomposition.
    pub fn dim_di(&self, m: &[u64], i: usize) -> Result<u64> {
        if i >= self.r() {
            return Err(Error::ArityMismatch { expected: self.r(), found: i + 1 });
        }
        Ok(self.decompose(m)?.a[i] + 1)
    }

    /// One curvette per dead end, for a minimal resolution.
    pub fn generating_sequence(&self) -> Result<GeneratingSequence> {
        let minimality = self.model.validate_minimality(&self.marked);
        if !minimality.minimal {
            return Err(Error::NotMinimal { offending: minimality.offending });
        }
        let caveat = (self.model.len() == 1).then(|| {
            "single blow-up: one curvette cannot generate the maximal ideal, two transversal ones are needed".to_string()
        });
        Ok(GeneratingSequence { curvettes: classify(&self.model).dead_ends, branch_equations: Vec::new(), caveat })
    }
}

/// Componentwise sum `sum lambda_a * rows[a]`.
pub fn combine(rows: &[Vec<u64>], lambda: &[u64]) -> Vec<u64> {
    let r = rows.first().map_or(0, Vec::len);
    let mut out = vec![0u64; r];
    for (row, &l) in rows.iter().zip(lambda) {
        for (o, x) in out.iter_mut().zip(row) {
            *o += l * x;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::resolution::{build_model, Center};

    fn example() -> SemigroupHandle {
        let m = build_model(&[
            Center::origin(),
            Center::free(2, 1),
            Center::free(3, 2),
            Center::satellite(4, 1, 2),
            Center::free(5, 4),
            Center::satellite(6, 4, 5),
            Center::free(7, 6),
        ])
        .unwrap();
        SemigroupHandle::new(m, &[3, 7, 6]).unwrap()
    }

    #[test]
    fn membership_examples() {
        let h = example();
        assert_eq!(h.member(&[1, 4, 4]).unwrap(), Some(vec![1, 0, 0, 0, 0, 0, 0]));
        assert_eq!(h.member(&[0, 1, 0]).unwrap(), None);
        let w = h.member(&[3, 10, 10]).unwrap().unwrap();
        assert_eq!(w, vec![1, 1, 0, 0, 0, 0, 0]);
        assert_eq!(combine(h.proj_b(), &w), vec![3, 10, 10]);
        assert!(matches!(h.member(&[1, 2]), Err(Error::ArityMismatch { expected: 3, found: 2 })));
    }

    #[test]
    fn marked_b() {
        let h = example();
        assert_eq!(h.marked_bs(), vec![vec![3, 6, 6], vec![6, 27, 26], vec![6, 26, 26]]);
    }

    #[test]
    fn indecomposables_of_example() {
        let h = example();
        let ind = h.indecomposables_bruteforce(&[12, 54, 52]).unwrap();
        assert_eq!(ind, vec![vec![1, 4, 4], vec![2, 6, 6], vec![3, 6, 6], vec![3, 13, 13], vec![6, 27, 26]]);
    }

    #[test]
    fn indecomposables_match_pairwise_definition() {
        let h = example();
        let bound = [8, 30, 30];
        let t = h.table_for(&bound).unwrap();
        let members = t.members();
        let mut slow = Vec::new();
        for m in &members {
            if m.iter().all(|&x| x == 0) {
                continue;
            }
            let split = members.iter().any(|n| {
                n.iter().any(|&x| x > 0) && n != m && n.iter().zip(m).all(|(a, b)| a <= b) && {
                    let k: Vec<u64> = m.iter().zip(n).map(|(a, b)| a - b).collect();
                    t.contains(&k)
                }
            });
            if !split {
                slow.push(m.clone());
            }
        }
        assert_eq!(h.indecomposables_bruteforce(&bound).unwrap(), slow);
    }

    #[test]
    fn single_blow_up_indecomposables() {
        let h = SemigroupHandle::new(build_model(&[Center::origin()]).unwrap(), &[1]).unwrap();
        assert_eq!(h.indecomposables_bruteforce(&[5]).unwrap(), vec![vec![1]]);
    }

    #[test]
    fn decompose_examples() {
        let h = example();
        assert_eq!(h.decompose(&[0, 0, 0]).unwrap(), Decomposition { a: vec![0; 3], n: vec![0; 3] });
        assert_eq!(h.decompose(&[3, 6, 6]).unwrap(), Decomposition { a: vec![1, 0, 0], n: vec![0; 3] });
        assert_eq!(h.decompose(&[4, 10, 10]).unwrap(), Decomposition { a: vec![1, 0, 0], n: vec![1, 4, 4] });
        assert_eq!(h.decompose(&[0, 1, 0]), Err(Error::NotInSemigroup(vec![0, 1, 0])));
    }

    #[test]
    fn dim_di_examples() {
        let h = example();
        for i in 0..3 {
            assert_eq!(h.dim_di(h.marked_b(i), i).unwrap(), 2);
            assert_eq!(h.dim_di(&[0, 0, 0], i).unwrap(), 1);
        }
        assert_eq!(h.dim_di(&[4, 10, 10], 0).unwrap(), 2);
    }

    #[test]
    fn generating_sequence() {
        let h = example();
        let g = h.generating_sequence().unwrap();
        assert_eq!(g.curvettes, vec![1, 3, 5, 7]);
        assert!(g.caveat.is_none());
        let single = SemigroupHandle::new(build_model(&[Center::origin()]).unwrap(), &[1]).unwrap();
        assert!(single.generating_sequence().unwrap().caveat.is_some());
        let h = SemigroupHandle::new(h.model().clone(), &[7]).unwrap();
        assert_eq!(h.generating_sequence(), Err(Error::NotMinimal { offending: vec![3] }));
    }
}
