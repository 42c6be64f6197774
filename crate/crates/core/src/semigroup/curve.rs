//! Value semigroup of the general curve, approached through the tower of
//! divisorial valuations obtained by blowing up further along each branch.

use std::sync::Arc;

use serde::Serialize;

use super::{GeneratingSequence, ReachTable, SemigroupHandle};
use crate::dualgraph::h_set_with_dead_ends;
use crate::error::{Error, Result};
use crate::poincare::{vk_extend, CurveMarking};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum CurveMembership {
    /// Witness over the rows of the level-`k` model.
    Member { k: usize, lambda: Vec<u64> },
    /// Not reached: the members inside `[0, m]` did not change between
    /// levels `k - 1` and `k`. This is a stopping heuristic, not a proof.
    Absent { k: usize, heuristic: bool },
}

/// Membership of `m` in the curve semigroup, escalating the tower level
/// until a witness appears or the box `[0, m]` stops changing.
pub fn curve_member(marking: &CurveMarking, m: &[u64], kmax: usize) -> Result<CurveMembership> {
    if m.len() != marking.r() {
        return Err(Error::ArityMismatch { expected: marking.r(), found: m.len() });
    }
    let mut previous: Option<Arc<ReachTable>> = None;
    for k in 0..=kmax {
        let ext = vk_extend(marking, k)?;
        let handle = SemigroupHandle::new(ext.marking.model().clone(), ext.marking.branches())?;
        let table = handle.table_for(m)?;
        if let Some(lambda) = table.witness(handle.proj_b(), m) {
            return Ok(CurveMembership::Member { k, lambda });
        }
        if let Some(prev) = &previous {
            if table.agrees_on(prev, m) {
                return Ok(CurveMembership::Absent { k, heuristic: true });
            }
        }
        previous = Some(table);
    }
    Err(Error::NoStabilization { kmax })
}

/// `{base + k e_direction : k >= 1}` (0-based `direction`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IndecomposableFamily {
    pub base: Vec<u64>,
    pub direction: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CurveIndecomposables {
    /// Vertices whose curvette values are indecomposable.
    pub vertices: Vec<usize>,
    /// Their values, restricted to those inside the requested box.
    pub finite: Vec<Vec<u64>>,
    pub families: Vec<IndecomposableFamily>,
}

pub fn curve_indecomposables(marking: &CurveMarking, bound: &[u64]) -> Result<CurveIndecomposables> {
    if bound.len() != marking.r() {
        return Err(Error::ArityMismatch { expected: marking.r(), found: bound.len() });
    }
    let model = marking.model();
    let h = h_set_with_dead_ends(model, marking.branches(), &marking.dead_ends());
    let mut finite: Vec<Vec<u64>> = h
        .h
        .iter()
        .map(|&a| model.projected(a, marking.branches()))
        .filter(|v| v.iter().zip(bound).all(|(x, b)| x <= b))
        .collect();
    finite.sort();
    finite.dedup();
    let families = marking
        .marked_bs()
        .into_iter()
        .enumerate()
        .map(|(direction, base)| IndecomposableFamily { base, direction })
        .collect();
    Ok(CurveIndecomposables { vertices: h.h, finite, families })
}

/// Curvettes at the dead ends of the graph with arrows, plus every branch
/// equation when there are at least two branches.
pub fn curve_generating_sequence(marking: &CurveMarking) -> Result<GeneratingSequence> {
    let minimality = marking.model().validate_minimality(marking.branches());
    if !minimality.minimal {
        return Err(Error::NotMinimal { offending: minimality.offending });
    }
    let branch_equations = if marking.r() > 1 { (0..marking.r()).collect() } else { Vec::new() };
    Ok(GeneratingSequence { curvettes: marking.dead_ends(), branch_equations, caveat: None })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::resolution::{build_model, Center};

    fn example() -> CurveMarking {
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
        CurveMarking::new(m, &[3, 7, 6]).unwrap()
    }

    #[test]
    fn generators_are_members_at_level_zero() {
        let c = example();
        let ind = curve_indecomposables(&c, &[100, 100, 100]).unwrap();
        assert_eq!(ind.vertices, vec![1, 2, 3, 5, 7]);
        for v in &ind.finite {
            assert!(matches!(curve_member(&c, v, 3).unwrap(), CurveMembership::Member { k: 0, .. }));
        }
        assert_eq!(ind.families.len(), 3);
        assert_eq!(ind.families[1], IndecomposableFamily { base: vec![6, 27, 26], direction: 1 });
    }

    #[test]
    fn family_members_need_the_tower() {
        let c = example();
        // B^1 + 2 e_1 is not a value of V but is one at a higher level.
        match curve_member(&c, &[5, 6, 6], 4).unwrap() {
            CurveMembership::Member { k, .. } => assert!(k >= 1),
            other => panic!("{other:?}"),
        }
        assert!(matches!(curve_member(&c, &[2, 8, 8], 3).unwrap(), CurveMembership::Member { k: 0, .. }));
    }

    #[test]
    fn absent_is_heuristic() {
        let c = example();
        match curve_member(&c, &[0, 1, 0], 3).unwrap() {
            CurveMembership::Absent { heuristic, .. } => assert!(heuristic),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn generating_sequences() {
        let c = example();
        let g = curve_generating_sequence(&c).unwrap();
        assert_eq!(g.curvettes, vec![1, 5]);
        assert_eq!(g.branch_equations, vec![0, 1, 2]);
    }
}
